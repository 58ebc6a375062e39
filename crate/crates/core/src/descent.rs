//! Quadratic Galois descent: cocycles, twisted forms and descended bilinear forms.
//!
//! For `S = R[x]/(x² − d)` with `2d` a unit, `S ⊗_R S ≅ S × S` and the gluing
//! condition on `𝔞 ⊗ S` reduces to the fixed-point equation `U·σ(x) = x`.
//! Writing `x = x₀ + x₁·x` and `U = U₀ + U₁·x` this is the `R`-linear system
//! `(U₀ − 1)x₀ − d·U₁x₁ = 0`, `U₁x₀ − (U₀ + 1)x₁ = 0`.

use crate::arith::{kernel_and_rank, solve_left, solve_left_many, Domain, Matrix, RingMap, Scalar};
use crate::error::{Error, Result};
use crate::forms::SemilinearAuto;
use crate::ibf::{ibf_module, induced_map, BilinearForm};
use crate::module::{Algebra, ModuleInvariants, ModuleMap, PresentedModule};

/// `S = R[x]/(x² − d)` with its involution `σ`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadGalois {
    base: Domain,
    parameter: Scalar,
    ext: Domain,
    sigma: RingMap,
    root: Option<Scalar>,
}

impl QuadGalois {
    pub fn new(base: &Domain, d: Scalar) -> Result<Self> {
        if !base.is_unit_integer(2) {
            return Err(Error::TwoNotUnit);
        }
        if !base.contains(&d) || !base.is_unit(&d) {
            return Err(Error::BadDomain(format!("{d} is not a unit of {base}")));
        }
        let ext = Domain::quad_ext(base.clone(), d.clone())?;
        let sigma = RingMap::conjugation(&ext)?;
        let x = ext.quad(base.zero(), base.one())?;
        if sigma.apply(&sigma.apply(&x)) != x || sigma.apply(&x) == x {
            return Err(Error::BadDomain(format!("conjugation on {ext} is not an involution fixing exactly {base}")));
        }
        Ok(QuadGalois {
            root: base.sqrt(&d),
            base: base.clone(),
            parameter: d,
            ext,
            sigma,
        })
    }

    pub fn base(&self) -> &Domain {
        &self.base
    }

    pub fn parameter(&self) -> &Scalar {
        &self.parameter
    }

    pub fn ext(&self) -> &Domain {
        &self.ext
    }

    pub fn sigma(&self) -> &RingMap {
        &self.sigma
    }

    /// A square root of `d` in `R` when `S/R` splits.
    pub fn split_root(&self) -> Option<&Scalar> {
        self.root.as_ref()
    }

    pub fn is_split(&self) -> bool {
        self.root.is_some()
    }

    pub fn embedding(&self) -> RingMap {
        RingMap::canonical(&self.base, &self.ext).expect("base embeds in its extension")
    }

    /// `(x₀, x₁) ∈ R^{2m}` to `x₀ + x₁·x ∈ S^m`.
    pub fn to_ext(&self, v: &[Scalar]) -> Vec<Scalar> {
        let m = v.len() / 2;
        (0..m).map(|i| Scalar::Quad(Box::new(v[i].clone()), Box::new(v[m + i].clone()))).collect()
    }

    /// Inverse of [`QuadGalois::to_ext`].
    pub fn to_base(&self, z: &[Scalar]) -> Result<Vec<Scalar>> {
        let mut low = Vec::with_capacity(2 * z.len());
        let mut high = Vec::with_capacity(z.len());
        for s in z {
            let (a, b) = self.ext.quad_parts(s)?;
            low.push(a.clone());
            high.push(b.clone());
        }
        low.extend(high);
        Ok(low)
    }

    /// `R`-basis of `{x ∈ S^m : U·σ(x) = x}`, written in `R^{2m}`.
    pub fn fixed_points(&self, u: &Matrix) -> Result<Vec<Vec<Scalar>>> {
        if u.domain() != &self.ext || !u.is_square() {
            return Err(Error::ShapeMismatch(format!("expected a square matrix over {}", self.ext)));
        }
        let r = &self.base;
        let m = u.rows();
        let mut system = Matrix::zeros(r, 2 * m, 2 * m);
        for i in 0..m {
            for j in 0..m {
                let (u0, u1) = self.ext.quad_parts(&u[(i, j)])?;
                let delta = if i == j { r.one() } else { r.zero() };
                system[(i, j)] = r.sub(u0, &delta);
                system[(i, m + j)] = r.neg(&r.mul(&self.parameter, u1));
                system[(m + i, j)] = u1.clone();
                system[(m + i, m + j)] = r.neg(&r.add(u0, &delta));
            }
        }
        Ok(kernel_and_rank(&system)?.0)
    }
}

/// A validated descent datum: `x ↦ U·σ(x)` is a `σ`-semilinear automorphism of
/// `𝔞 ⊗ S` and `U·σ(U) = 1`.
#[derive(Clone, Debug)]
pub struct Cocycle {
    galois: QuadGalois,
    algebra: Algebra,
    matrix: Matrix,
}

impl Cocycle {
    pub fn new(galois: &QuadGalois, algebra: &Algebra, matrix: Matrix) -> Result<Self> {
        if algebra.domain() != galois.base() {
            return Err(Error::DomainMismatch {
                expected: galois.base().to_string(),
                found: algebra.domain().to_string(),
            });
        }
        let n = algebra.rank();
        if matrix.domain() != galois.ext() || matrix.rows() != n || matrix.cols() != n {
            return Err(Error::InvalidCocycle(format!("U must be {n}x{n} over {}", galois.ext())));
        }
        let extended = algebra.base_change(&galois.embedding())?;
        if !extended.is_semilinear_automorphism(&matrix, galois.sigma()) {
            return Err(Error::InvalidCocycle("U is not a σ-semilinear algebra automorphism".into()));
        }
        if !matrix.mul(&matrix.map(galois.sigma())?)?.is_identity() {
            return Err(Error::InvalidCocycle("U·σ(U) is not the identity".into()));
        }
        Ok(Cocycle {
            galois: galois.clone(),
            algebra: algebra.clone(),
            matrix,
        })
    }

    pub fn trivial(galois: &QuadGalois, algebra: &Algebra) -> Result<Self> {
        Self::new(galois, algebra, Matrix::identity(galois.ext(), algebra.rank()))
    }

    pub fn galois(&self) -> &QuadGalois {
        &self.galois
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }
}

/// The `R`-algebra `B = {x ∈ 𝔞 ⊗ S : U·σ(x) = x}` with a chosen free basis.
#[derive(Clone, Debug)]
pub struct TwistedForm {
    source: Algebra,
    cocycle: Cocycle,
    algebra: Algebra,
    embedding: Matrix,
}

impl TwistedForm {
    pub fn source(&self) -> &Algebra {
        &self.source
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    pub fn galois(&self) -> &QuadGalois {
        &self.cocycle.galois
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    /// Column `k` is the image of `bₖ` in `𝔞 ⊗ S`.
    pub fn embedding(&self) -> &Matrix {
        &self.embedding
    }
}

pub fn twist(a: &Algebra, cocycle: &Cocycle) -> Result<TwistedForm> {
    if cocycle.algebra() != a {
        return Err(Error::InvalidCocycle("cocycle was validated for a different algebra".into()));
    }
    let g = cocycle.galois();
    let r = g.base();
    let n = a.rank();
    let fixed = g.fixed_points(cocycle.matrix())?;
    if fixed.len() != n {
        return Err(Error::FixedPointsNotFree {
            rank: fixed.len(),
            expected: n,
        });
    }
    let embedded: Vec<Vec<Scalar>> = fixed.iter().map(|v| g.to_ext(v)).collect();
    let embedding = Matrix::from_rows(g.ext(), embedded.clone())?.transpose();
    let fixed = Matrix::from_rows(r, fixed)?;
    let extended = a.base_change(&g.embedding())?;
    let mut targets = Vec::with_capacity(n * n);
    for x in &embedded {
        for y in &embedded {
            targets.push(g.to_base(&extended.mul(x, y))?);
        }
    }
    let products = solve_left_many(&fixed, &targets)?
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::InvalidCocycle("fixed points are not closed under multiplication".into()))?;
    let unit = match a.unit() {
        Some(u) => solve_left(&fixed, &g.to_base(&g.embedding().apply_all(u))?)?,
        None => None,
    };
    let names = if embedding.is_identity() {
        a.names().to_vec()
    } else {
        (1..=n).map(|k| format!("b{k}")).collect()
    };
    let algebra = Algebra::new(r, names, products, unit)?;
    Ok(TwistedForm {
        source: a.clone(),
        cocycle: cocycle.clone(),
        algebra,
        embedding,
    })
}

/// `θ: B ⊗ S → 𝔞 ⊗ S`, checked to be an invertible algebra map.
#[derive(Clone, Debug)]
pub struct SplitCertificate {
    pub theta: Matrix,
    pub verified: bool,
}

pub fn split_check(tf: &TwistedForm) -> Result<SplitCertificate> {
    let g = tf.galois();
    let lifted = tf.algebra.base_change(&g.embedding())?;
    let extended = tf.source.base_change(&g.embedding())?;
    let theta = tf.embedding.clone();
    let verified = g.ext().is_unit(&theta.det()?) && lifted.is_homomorphism_to(&extended, &theta);
    Ok(SplitCertificate { theta, verified })
}

/// When `d = r²` in `R`: the `R`-algebra isomorphism `B → 𝔞` obtained from
/// `θ` followed by `x ↦ r`.
pub fn split_isomorphism(tf: &TwistedForm) -> Result<Option<Matrix>> {
    let g = tf.galois();
    let Some(root) = g.split_root() else {
        return Ok(None);
    };
    let projection = RingMap::quad_projection(g.ext(), root.clone())?;
    let p = tf.embedding.map(&projection)?;
    if g.base().is_unit(&p.det()?) && tf.algebra.is_homomorphism_to(&tf.source, &p) {
        Ok(Some(p))
    } else {
        Err(Error::InvalidCocycle("projected embedding is not an isomorphism".into()))
    }
}

/// `κ_B(b, b′) = κ_S(θb, θb′)`, checked to take values in `R`.
pub fn descend_form(kappa: &BilinearForm, tf: &TwistedForm) -> Result<BilinearForm> {
    if kappa.algebra() != &tf.source {
        return Err(Error::ShapeMismatch("form lives on a different algebra".into()));
    }
    let g = tf.galois();
    let r = g.base();
    let extended = kappa.gram().map(&g.embedding())?;
    let values = tf.embedding.transpose().mul(&extended)?.mul(&tf.embedding)?;
    let n = tf.algebra.rank();
    let mut gram = Matrix::zeros(r, n, n);
    for i in 0..n {
        for j in 0..n {
            let (a, b) = g.ext().quad_parts(&values[(i, j)])?;
            if !r.is_zero(b) {
                return Err(Error::ValueNotInR { i, j });
            }
            gram[(i, j)] = a.clone();
        }
    }
    BilinearForm::new(&tf.algebra, gram)
}

/// `β_S(m₁⊗s₁, m₂⊗s₂) = α(β(m₁, m₂))·s₁s₂`.
pub fn base_change_form(beta: &BilinearForm, alpha: &RingMap) -> Result<BilinearForm> {
    BilinearForm::new(&beta.algebra().base_change(alpha)?, beta.gram().map(alpha)?)
}

/// `f*β(x, y) = β(f x, f y)`: Gram `Fᵀ·G·F`.
pub fn pullback_form(beta: &BilinearForm, f: &Matrix) -> Result<BilinearForm> {
    let n = beta.algebra().rank();
    if f.rows() != n || f.cols() != n {
        return Err(Error::ShapeMismatch(format!("pullback needs a {n}x{n} matrix")));
    }
    BilinearForm::new(beta.algebra(), f.transpose().mul(beta.gram())?.mul(f)?)
}

/// `f*β = α⁻¹ ∘ β ∘ (f × f)` for `α`-semilinear `f`, which is again `R`-bilinear.
pub fn pullback_semilinear(beta: &BilinearForm, f: &SemilinearAuto) -> Result<BilinearForm> {
    if f.algebra() != beta.algebra() {
        return Err(Error::ShapeMismatch("automorphism acts on a different algebra".into()));
    }
    let m = f.matrix();
    let gram = m.transpose().mul(beta.gram())?.mul(m)?;
    BilinearForm::new(beta.algebra(), gram.map(&f.alpha().inverse()?)?)
}

/// `(β̄)_S = overline(β_S) ∘ ν̄` on every generator of `IBF_R(B) ⊗ S`.
pub fn verify_induced_base_change(beta: &BilinearForm, alpha: &RingMap) -> Result<bool> {
    let bar = induced_map(beta)?;
    let bar_s = induced_map(&base_change_form(beta, alpha)?)?;
    let g = bar.source.generators();
    // ν̄ sends the class of bᵢ⊗bⱼ to the class of (bᵢ⊗1)⊗(bⱼ⊗1): the identity on generators.
    Ok((0..g).all(|k| alpha.apply_all(bar.matrix.row(k)) == bar_s.matrix.row(k)))
}

#[derive(Clone, Debug)]
pub struct BaseChangeCertificate {
    /// `IBF_R(B)`.
    pub source: ModuleInvariants,
    /// `IBF_R(B) ⊗ S`.
    pub tensored: ModuleInvariants,
    /// `IBF_S(B ⊗ S)`.
    pub target: ModuleInvariants,
    pub nu: ModuleMap,
    pub isomorphism: bool,
}

pub fn verify_ibf_base_change(b: &Algebra, alpha: &RingMap) -> Result<BaseChangeCertificate> {
    let ibf = ibf_module(b);
    let tensored = ibf.module().base_change(alpha)?;
    let target = ibf_module(&b.base_change(alpha)?).module().clone();
    let width = tensored.generators();
    let nu = ModuleMap::new(tensored.clone(), target.clone(), Matrix::identity(alpha.target(), width))?;
    Ok(BaseChangeCertificate {
        source: ibf.invariants()?,
        tensored: tensored.invariants()?,
        target: target.invariants()?,
        isomorphism: nu.is_isomorphism()?,
        nu,
    })
}

/// `IBF_R(B)` against the descent of `IBF_S(𝔞 ⊗ S)` along
/// `class(a⊗a′) ↦ class(u(a)⊗u(a′))`.
#[derive(Clone, Debug)]
pub struct DescentCertificate {
    pub source_ibf: ModuleInvariants,
    pub twisted_ibf: ModuleInvariants,
    /// Fixed points of the induced action on `IBF_S(𝔞 ⊗ S)`.
    pub descended: ModuleInvariants,
    pub nu_isomorphism: bool,
    pub action_well_defined: bool,
    pub action_is_cocycle: bool,
    /// `class(bᵢ⊗bⱼ) ↦ class(θbᵢ⊗θbⱼ)` in the coordinates of the descended basis.
    pub comparison: Matrix,
    pub comparison_isomorphism: bool,
}

impl DescentCertificate {
    pub fn passes(&self) -> bool {
        self.nu_isomorphism
            && self.action_well_defined
            && self.action_is_cocycle
            && self.comparison_isomorphism
            && self.twisted_ibf == self.descended
    }
}

pub fn verify_functor_descent(tf: &TwistedForm) -> Result<DescentCertificate> {
    let g = tf.galois();
    let r = g.base();
    let s = g.ext();
    if !s.is_field() {
        return Err(Error::UnsupportedDomain(format!("descended modules are computed over fields, not {s}")));
    }
    let nu = verify_ibf_base_change(&tf.source, &g.embedding())?;
    let extended = ibf_module(&tf.source.base_change(&g.embedding())?);
    let module = extended.module();
    let u = tf.cocycle.matrix();
    let action_matrix = u.kronecker(u)?;
    let action = ModuleMap::new(module.clone(), module.clone(), action_matrix.transpose())?.semilinear(g.sigma().clone());
    let action_well_defined = action.well_defined()?.is_ok();
    let action_is_cocycle = action_matrix.mul(&action_matrix.map(g.sigma())?)?.is_identity();

    // The action on canonical coordinates: y ↦ A·σ(y).
    let gens = module.canonical_generators()?;
    let rank = gens.len();
    let columns = gens
        .iter()
        .map(|h| module.coordinates(&action.apply(h)))
        .collect::<Result<Vec<_>>>()?;
    let a = if rank == 0 {
        Matrix::zeros(s, 0, 0)
    } else {
        Matrix::from_rows(s, columns)?.transpose()
    };
    let fixed = g.fixed_points(&a)?;
    let descended = ModuleInvariants {
        torsion: vec![],
        free_rank: fixed.len(),
    };

    let twisted = ibf_module(&tf.algebra);
    let theta2 = tf.embedding.kronecker(&tf.embedding)?;
    let n2 = theta2.cols();
    let targets = (0..n2)
        .map(|k| g.to_base(&module.coordinates(&theta2.col(k))?))
        .collect::<Result<Vec<_>>>()?;
    let fixed_matrix = Matrix::from_rows_with_width(r, fixed, 2 * rank)?;
    let rows = solve_left_many(&fixed_matrix, &targets)?
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::InvalidCocycle("twisted tensors are not fixed by the induced action".into()))?;
    let comparison = Matrix::from_rows_with_width(r, rows, descended.free_rank)?;
    let map = ModuleMap::new(
        twisted.module().clone(),
        PresentedModule::free(r, descended.free_rank),
        comparison.clone(),
    )?;
    Ok(DescentCertificate {
        source_ibf: nu.source,
        twisted_ibf: twisted.invariants()?,
        descended,
        nu_isomorphism: nu.isomorphism,
        action_well_defined,
        action_is_cocycle,
        comparison_isomorphism: map.is_isomorphism()?,
        comparison,
    })
}
