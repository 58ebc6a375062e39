//! Multiloop algebras `L(𝔤, σ)`, their Killing forms over `k[t, t⁻¹]` and the
//! graded invariant form.
//!
//! Degrees are recorded in units of `1/mⱼ`, so `x ⊗ t^{i/m}` has integer degree `i`
//! and the Laurent variable `t` has degree `m`.

use std::collections::BTreeMap;

use crate::arith::{kernel_and_rank, Domain, Echelon, Matrix, RingMap, Scalar};
use crate::centroid::is_central;
use crate::error::{Error, Result};
use crate::forms::{killing_form, semilinear_killing_identity, SemilinearAuto};
use crate::ibf::{check_ibf_principle, BilinearForm};
use crate::module::{is_perfect, Algebra, ModuleInvariants};

/// `𝔤` over a field with commuting automorphisms `σⱼ` of order `mⱼ` and primitive roots `ζⱼ`.
#[derive(Clone, Debug)]
pub struct MultiloopSpec {
    algebra: Algebra,
    sigmas: Vec<Matrix>,
    orders: Vec<usize>,
    roots: Vec<Scalar>,
}

fn check_root(k: &Domain, zeta: &Scalar, m: usize) -> Result<()> {
    if !k.is_unit_integer(m as i64) {
        return Err(Error::MissingRootOfUnity(format!("the characteristic of {k} divides {m}")));
    }
    if !k.contains(zeta) || !k.is_one(&k.pow(zeta, m as u64)) || (1..m).any(|e| k.is_one(&k.pow(zeta, e as u64))) {
        return Err(Error::MissingRootOfUnity(format!("{zeta} is not a primitive {m}-th root of unity in {k}")));
    }
    Ok(())
}

impl MultiloopSpec {
    pub fn new(algebra: &Algebra, sigmas: Vec<Matrix>, orders: Vec<usize>, roots: Vec<Scalar>) -> Result<Self> {
        let k = algebra.domain();
        if !k.is_field() {
            return Err(Error::UnsupportedDomain(format!("multiloop algebras need a base field, got {k}")));
        }
        if sigmas.is_empty() || sigmas.len() != orders.len() || sigmas.len() != roots.len() {
            return Err(Error::BadSpec("need matching, nonempty lists of automorphisms, orders and roots".into()));
        }
        let n = algebra.rank();
        let id = Matrix::identity(k, n);
        for ((s, &m), zeta) in sigmas.iter().zip(&orders).zip(&roots) {
            if m == 0 || !algebra.is_automorphism(s) {
                return Err(Error::InvalidAutomorphism("σ is not an automorphism of 𝔤".into()));
            }
            let mut power = id.clone();
            for _ in 0..m {
                power = power.mul(s)?;
            }
            if power != id {
                return Err(Error::InvalidAutomorphism(format!("σ^{m} is not the identity")));
            }
            check_root(k, zeta, m)?;
        }
        for (i, a) in sigmas.iter().enumerate() {
            for b in &sigmas[i + 1..] {
                if a.mul(b)? != b.mul(a)? {
                    return Err(Error::InvalidAutomorphism("automorphisms do not commute".into()));
                }
            }
        }
        Ok(MultiloopSpec {
            algebra: algebra.clone(),
            sigmas,
            orders,
            roots,
        })
    }

    /// A single automorphism.
    pub fn single(algebra: &Algebra, sigma: Matrix, order: usize, root: Scalar) -> Result<Self> {
        Self::new(algebra, vec![sigma], vec![order], vec![root])
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn sigmas(&self) -> &[Matrix] {
        &self.sigmas
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn roots(&self) -> &[Scalar] {
        &self.roots
    }

    pub fn variables(&self) -> usize {
        self.sigmas.len()
    }
}

/// Bases of `𝔤ᵢ = {x : σ(x) = ζⁱx}` for `i = 0, …, m − 1`.
pub fn eigenspace_decomposition(g: &Algebra, sigma: &Matrix, m: usize, zeta: &Scalar) -> Result<Vec<Vec<Vec<Scalar>>>> {
    let spec = MultiloopSpec::single(g, sigma.clone(), m, zeta.clone())?;
    Ok(joint_eigenspaces(&spec)?.into_iter().map(|(_, basis)| basis).collect())
}

fn joint_eigenspaces(spec: &MultiloopSpec) -> Result<Vec<(Vec<i64>, Vec<Vec<Scalar>>)>> {
    let k = spec.algebra.domain();
    let n = spec.algebra.rank();
    let mut indices: Vec<Vec<i64>> = vec![vec![]];
    for &m in &spec.orders {
        indices = indices
            .into_iter()
            .flat_map(|prefix| {
                (0..m as i64).map(move |i| {
                    let mut next = prefix.clone();
                    next.push(i);
                    next
                })
            })
            .collect();
    }
    let mut out = Vec::with_capacity(indices.len());
    let mut total = 0;
    for index in indices {
        let mut stacked: Option<Matrix> = None;
        for ((s, zeta), &i) in spec.sigmas.iter().zip(&spec.roots).zip(&index) {
            let shifted = s.sub(&Matrix::identity(k, n).scale(&k.pow(zeta, i as u64)))?;
            stacked = Some(match stacked {
                None => shifted,
                Some(m) => m.vstack(&shifted)?,
            });
        }
        let (basis, _) = kernel_and_rank(&stacked.expect("at least one automorphism"))?;
        total += basis.len();
        out.push((index, basis));
    }
    if total != n {
        return Err(Error::NotDiagonalizable { found: total, expected: n });
    }
    Ok(out)
}

/// `L(𝔤, σ)`: homogeneous basis `xᵣ ⊗ t^{i/m}` with `xᵣ ∈ 𝔤ᵢ`, `0 ≤ i < m`.
#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    spec: MultiloopSpec,
    /// Column `r` is `xᵣ` in the coordinates of `𝔤`.
    eigenbasis: Matrix,
    classes: Vec<Vec<i64>>,
    /// Coordinates of `xᵣ·xₛ` in the eigenbasis.
    eigen_products: Vec<Vec<Scalar>>,
    algebra: Option<Algebra>,
}

pub fn multiloop(spec: &MultiloopSpec) -> Result<GradedAlgebra> {
    let g = &spec.algebra;
    let k = g.domain();
    let n = g.rank();
    let mut vectors = Vec::with_capacity(n);
    let mut classes = Vec::with_capacity(n);
    for (index, basis) in joint_eigenspaces(spec)? {
        for v in basis {
            vectors.push(v);
            classes.push(index.clone());
        }
    }
    let eigenbasis = Matrix::from_rows(k, vectors.clone())?.transpose();
    let change = eigenbasis.inverse()?;
    let eigen_products: Vec<Vec<Scalar>> = vectors
        .iter()
        .flat_map(|x| vectors.iter().map(|y| change.mul_vec(&g.mul(x, y))))
        .collect();

    let algebra = if spec.variables() == 1 {
        let m = spec.orders[0] as i64;
        let laurent = Domain::laurent(k.clone())?;
        let mut products = Vec::with_capacity(n * n);
        for r in 0..n {
            for s in 0..n {
                let carry = (classes[r][0] + classes[s][0]) / m;
                let row = eigen_products[r * n + s]
                    .iter()
                    .map(|c| laurent.monomial(carry, c.clone()))
                    .collect::<Result<Vec<_>>>()?;
                products.push(row);
            }
        }
        let names = (0..n)
            .map(|r| {
                let x = eigenbasis.col(r);
                let base = match x.iter().position(|c| !k.is_zero(c)) {
                    Some(p) if x.iter().filter(|c| !k.is_zero(c)).count() == 1 && k.is_one(&x[p]) => g.names()[p].clone(),
                    _ => format!("x{}", r + 1),
                };
                match classes[r][0] {
                    0 => base,
                    i => format!("{base}⊗t^{i}/{m}"),
                }
            })
            .collect();
        Some(Algebra::new(&laurent, names, products, None)?)
    } else {
        None
    };
    Ok(GradedAlgebra {
        spec: spec.clone(),
        eigenbasis,
        classes,
        eigen_products,
        algebra,
    })
}

fn laurent_coefficient(s: &Scalar, degree: i64, k: &Domain) -> Scalar {
    match s {
        Scalar::Laurent(m) => m.get(&degree).cloned().unwrap_or_else(|| k.zero()),
        _ => k.zero(),
    }
}

/// `c·t^e` with every other coefficient zero; zero counts for any degree.
fn is_monomial_of_degree(s: &Scalar, degree: Option<i64>) -> bool {
    match s {
        Scalar::Laurent(m) => m.is_empty() || (m.len() == 1 && Some(*m.keys().next().unwrap()) == degree),
        _ => false,
    }
}

impl GradedAlgebra {
    pub fn spec(&self) -> &MultiloopSpec {
        &self.spec
    }

    pub fn rank(&self) -> usize {
        self.classes.len()
    }

    pub fn eigenbasis(&self) -> &Matrix {
        &self.eigenbasis
    }

    /// Degree of the basis element `xᵣ ⊗ t^{i/m}` (its eigenspace index).
    pub fn degree(&self, r: usize) -> &[i64] {
        &self.classes[r]
    }

    /// The algebra over `k[t, t⁻¹]`; only available for a single automorphism.
    pub fn algebra(&self) -> Result<&Algebra> {
        self.algebra.as_ref().ok_or_else(|| {
            Error::UnsupportedDomain("several Laurent variables do not form a principal ideal domain".into())
        })
    }

    /// Basis elements `r` whose class is congruent to `lambda`.
    pub fn homogeneous(&self, lambda: &[i64]) -> Vec<usize> {
        (0..self.rank()).filter(|&r| self.congruent(r, lambda)).collect()
    }

    fn congruent(&self, r: usize, lambda: &[i64]) -> bool {
        lambda.len() == self.spec.orders.len()
            && self.classes[r]
                .iter()
                .zip(lambda)
                .zip(&self.spec.orders)
                .all(|((c, l), &m)| (l - c).rem_euclid(m as i64) == 0)
    }

    /// Every nonzero structure constant `cᵣₛᵏ = c·t^q` satisfies `deg r + deg s − deg k − q·m = 0`.
    pub fn grading_compatible(&self) -> Result<bool> {
        let l = self.algebra()?;
        let m = self.spec.orders[0] as i64;
        let n = self.rank();
        for r in 0..n {
            for s in 0..n {
                for (k, c) in l.product(r, s).iter().enumerate() {
                    let shift = self.classes[r][0] + self.classes[s][0] - self.classes[k][0];
                    let degree = (shift % m == 0).then_some(shift / m);
                    if !is_monomial_of_degree(c, degree) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// `κ_L` over `k[t, t⁻¹]` with the check that `κ_L(bᵣ, bₛ)` has degree `deg r + deg s`.
#[derive(Clone, Debug)]
pub struct LoopKilling {
    pub form: BilinearForm,
    pub graded: bool,
}

pub fn killing_over_laurent(l: &GradedAlgebra) -> Result<LoopKilling> {
    let form = killing_form(l.algebra()?)?;
    let m = l.spec.orders[0] as i64;
    let n = l.rank();
    let graded = (0..n).all(|r| {
        (0..n).all(|s| {
            let total = l.classes[r][0] + l.classes[s][0];
            is_monomial_of_degree(&form.gram()[(r, s)], (total % m == 0).then_some(total / m))
        })
    });
    Ok(LoopKilling { form, graded })
}

/// `β = ε₀ ∘ κ_L` on homogeneous elements `xᵣ ⊗ t^{λ/m}`.
#[derive(Clone, Debug)]
pub struct GradedForm {
    graded: GradedAlgebra,
    killing: BilinearForm,
    loop_gram: Option<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowCertificate {
    pub degrees: usize,
    /// `β(x⊗t^λ, y⊗t^μ) = κ(x, y)·δ_{λ+μ,0}` on every homogeneous pair in the window.
    pub formula_holds: bool,
    pub pairings_nonsingular: bool,
    /// The pairing at `λ` equals the pairing at `λ + m`.
    pub periodic: bool,
}

impl WindowCertificate {
    pub fn passes(&self) -> bool {
        self.formula_holds && self.pairings_nonsingular && self.periodic
    }
}

pub fn graded_form(l: &GradedAlgebra) -> Result<GradedForm> {
    let killing = killing_form(&l.spec.algebra)?;
    let loop_gram = match &l.algebra {
        Some(_) => Some(killing_over_laurent(l)?.form.gram().clone()),
        None => None,
    };
    Ok(GradedForm {
        graded: l.clone(),
        killing,
        loop_gram,
    })
}

impl GradedForm {
    fn check_degree(&self, r: usize, lambda: &[i64]) -> Result<()> {
        if r >= self.graded.rank() || !self.graded.congruent(r, lambda) {
            return Err(Error::ShapeMismatch(format!("basis element {r} has no component in degree {lambda:?}")));
        }
        Ok(())
    }

    /// `β(xᵣ ⊗ t^{λ/m}, xₛ ⊗ t^{μ/m})`.
    pub fn eval(&self, r: usize, lambda: &[i64], s: usize, mu: &[i64]) -> Result<Scalar> {
        self.check_degree(r, lambda)?;
        self.check_degree(s, mu)?;
        let Some(gram) = &self.loop_gram else {
            return self.formula(r, lambda, s, mu);
        };
        let m = self.graded.spec.orders[0] as i64;
        let shift = (lambda[0] - self.graded.classes[r][0]) / m + (mu[0] - self.graded.classes[s][0]) / m;
        Ok(laurent_coefficient(&gram[(r, s)], -shift, self.killing.domain()))
    }

    /// `κ_𝔤(xᵣ, xₛ)·δ_{λ+μ,0}`.
    pub fn formula(&self, r: usize, lambda: &[i64], s: usize, mu: &[i64]) -> Result<Scalar> {
        self.check_degree(r, lambda)?;
        self.check_degree(s, mu)?;
        if lambda.iter().zip(mu).any(|(a, b)| a + b != 0) {
            return Ok(self.killing.domain().zero());
        }
        let x = self.graded.eigenbasis.col(r);
        let y = self.graded.eigenbasis.col(s);
        Ok(self.killing.eval(&x, &y))
    }

    /// `β` restricted to `L^λ × L^{−λ}`.
    pub fn pairing(&self, lambda: &[i64]) -> Result<Matrix> {
        let neg: Vec<i64> = lambda.iter().map(|l| -l).collect();
        let rows = self.graded.homogeneous(lambda);
        let cols = self.graded.homogeneous(&neg);
        let entries = rows
            .iter()
            .map(|&r| cols.iter().map(|&s| self.eval(r, lambda, s, &neg)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows_with_width(self.killing.domain(), entries, cols.len())
    }

    pub fn window(&self, lo: i64, hi: i64) -> Result<WindowCertificate> {
        let k = self.killing.domain();
        let vars = self.graded.spec.variables();
        let mut degrees: Vec<Vec<i64>> = vec![vec![]];
        for _ in 0..vars {
            degrees = degrees
                .into_iter()
                .flat_map(|p| {
                    (lo..=hi).map(move |l| {
                        let mut q = p.clone();
                        q.push(l);
                        q
                    })
                })
                .collect();
        }
        let homogeneous: Vec<(usize, &Vec<i64>)> = degrees
            .iter()
            .flat_map(|l| self.graded.homogeneous(l).into_iter().map(move |r| (r, l)))
            .collect();
        let mut formula_holds = true;
        for &(r, lambda) in &homogeneous {
            for &(s, mu) in &homogeneous {
                formula_holds &= self.eval(r, lambda, s, mu)? == self.formula(r, lambda, s, mu)?;
            }
        }
        let mut pairings_nonsingular = true;
        let mut periodic = true;
        for lambda in &degrees {
            let p = self.pairing(lambda)?;
            pairings_nonsingular &= p.is_square() && (p.rows() == 0 || !k.is_zero(&p.det()?));
            for (j, &m) in self.graded.spec.orders.iter().enumerate() {
                let mut shifted = lambda.clone();
                shifted[j] += m as i64;
                periodic &= self.pairing(&shifted)? == p;
            }
        }
        Ok(WindowCertificate {
            degrees: degrees.len(),
            formula_holds,
            pairings_nonsingular,
            periodic,
        })
    }
}

/// Graded invariant forms on `L` are unique up to a scalar in `k`.
#[derive(Clone, Debug)]
pub struct UniquenessCertificate {
    pub central: bool,
    /// `IBF_R(L)` over `R = k[t, t⁻¹]`.
    pub ibf: ModuleInvariants,
    /// `κ_L` induces `IBF_R(L) ≅ R`.
    pub principle: bool,
    /// `R⁰ = k`: only `t⁰` has degree zero.
    pub degree_zero_is_base_field: bool,
    /// Dimension over `k` of the graded invariant forms.
    pub dimension: usize,
    /// `ε₀ ∘ κ_L` is not identically zero.
    pub generator_nonzero: bool,
}

impl UniquenessCertificate {
    pub fn passes(&self) -> bool {
        self.central && self.principle && self.degree_zero_is_base_field && self.dimension == 1 && self.generator_nonzero
    }
}

pub fn graded_uniqueness_certificate(l: &GradedAlgebra) -> Result<UniquenessCertificate> {
    let g = &l.spec.algebra;
    let central = is_central(g)? && is_perfect(g)?;
    if !central {
        return Err(Error::NotCentralSimple);
    }
    let loop_killing = killing_over_laurent(l)?;
    let cert = check_ibf_principle(&loop_killing.form)?;
    let ibf = match &cert {
        crate::ibf::PrincipleCertificate::Holds { ibf, .. } | crate::ibf::PrincipleCertificate::Fails { ibf, .. } => {
            ibf.clone()
        }
    };
    let degree_zero_is_base_field = l.spec.orders[0] > 0;
    let dimension = if ibf.torsion.is_empty() && degree_zero_is_base_field { ibf.free_rank } else { 0 };
    let form = graded_form(l)?;
    let generator_nonzero = (0..l.rank()).any(|r| {
        let lambda = l.classes[r].clone();
        let neg: Vec<i64> = lambda.iter().map(|x| -x).collect();
        l.homogeneous(&neg)
            .into_iter()
            .any(|s| form.eval(r, &lambda, s, &neg).is_ok_and(|v| !g.domain().is_zero(&v)))
    });
    Ok(UniquenessCertificate {
        central,
        ibf,
        principle: cert.holds(),
        degree_zero_is_base_field,
        dimension,
        generator_nonzero,
    })
}

/// `x ⊗ t^{i/m} ↦ aⁱ·x ⊗ t^{i/m}`, semilinear over `t ↦ aᵐ·t`.
pub fn scaling_witness(l: &GradedAlgebra, a: &Scalar) -> Result<SemilinearAuto> {
    let alg = l.algebra()?;
    let r = alg.domain();
    let k = l.spec.algebra.domain();
    let m = l.spec.orders[0] as u64;
    let mut f = Matrix::zeros(r, l.rank(), l.rank());
    for i in 0..l.rank() {
        f[(i, i)] = r.monomial(0, k.pow(a, l.classes[i][0] as u64))?;
    }
    let alpha = RingMap::laurent_substitution(r, k.pow(a, m), 1)?;
    SemilinearAuto::new(alg, f, alpha)
}

/// `x ⊗ t^{i/m} ↦ x ⊗ t^{−i/m}`, semilinear over `t ↦ t⁻¹`; needs `𝔤ᵢ = 𝔤₋ᵢ`, i.e. `m ≤ 2`.
pub fn inversion_witness(l: &GradedAlgebra) -> Result<SemilinearAuto> {
    let alg = l.algebra()?;
    let r = alg.domain();
    let k = l.spec.algebra.domain();
    let m = l.spec.orders[0] as i64;
    if m > 2 {
        return Err(Error::InvalidAutomorphism("inversion needs σ of order at most 2".into()));
    }
    let mut f = Matrix::zeros(r, l.rank(), l.rank());
    for i in 0..l.rank() {
        f[(i, i)] = r.monomial(-2 * l.classes[i][0] / m, k.one())?;
    }
    let alpha = RingMap::laurent_substitution(r, k.one(), -1)?;
    SemilinearAuto::new(alg, f, alpha)
}

/// The `R`-linear extension of an automorphism `φ` of `𝔤` commuting with `σ`.
pub fn lift_witness(l: &GradedAlgebra, phi: &Matrix) -> Result<SemilinearAuto> {
    let alg = l.algebra()?;
    let g = &l.spec.algebra;
    if !g.is_automorphism(phi) {
        return Err(Error::InvalidAutomorphism("φ is not an automorphism of 𝔤".into()));
    }
    for s in &l.spec.sigmas {
        if phi.mul(s)? != s.mul(phi)? {
            return Err(Error::InvalidAutomorphism("φ does not commute with σ".into()));
        }
    }
    let local = l.eigenbasis.inverse()?.mul(phi)?.mul(&l.eigenbasis)?;
    let r = alg.domain();
    let lifted = local.map(&RingMap::canonical(g.domain(), r)?)?;
    SemilinearAuto::linear(alg, lifted)
}

/// Every witness satisfies `κ_L(f x, f y) = α(κ_L(x, y))`; since `ε₀ ∘ α = ε₀` for
/// `t ↦ c·t^{±1}`, each is orthogonal for `β`.
pub fn witnesses_orthogonal(l: &GradedAlgebra, witnesses: &[SemilinearAuto]) -> Result<bool> {
    let alg = l.algebra()?;
    for w in witnesses {
        if !semilinear_killing_identity(alg, w)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Dimension of the graded invariant pairings on the truncated window `[−w, w]`.
///
/// Diagnostic only: elements near the window edge can be under-constrained, so
/// in general the count is an upper bound for the true answer.
pub fn window_form_dimension(l: &GradedAlgebra, w: i64) -> Result<usize> {
    if l.spec.variables() != 1 {
        return Err(Error::UnsupportedDomain("window solve supports one Laurent variable".into()));
    }
    let k = l.spec.algebra.domain();
    let n = l.rank();
    // Unknown P_λ[a][b] = β(x_{rows[a]} ⊗ t^λ, x_{cols[b]} ⊗ t^{−λ}).
    let mut offsets = BTreeMap::new();
    let mut unknowns = 0;
    for lambda in -w..=w {
        let rows = l.homogeneous(&[lambda]);
        let cols = l.homogeneous(&[-lambda]);
        offsets.insert(lambda, (unknowns, rows.clone(), cols.clone()));
        unknowns += rows.len() * cols.len();
    }
    // Adds the coefficients of β(u ⊗ t^λ, v ⊗ t^{−λ}) for u, v in eigen coordinates.
    let pair = |lambda: i64, u: &[Scalar], v: &[Scalar], acc: &mut [Scalar], sign: &Scalar| {
        let (start, rows, cols) = &offsets[&lambda];
        for (a, &r) in rows.iter().enumerate() {
            for (b, &s) in cols.iter().enumerate() {
                let idx = start + a * cols.len() + b;
                let c = k.mul(sign, &k.mul(&u[r], &v[s]));
                acc[idx] = k.add(&acc[idx], &c);
            }
        }
    };
    let unit = |r: usize| crate::arith::matrix::unit_vector(k, n, r);
    let one = k.one();
    let minus = k.from_i64(-1);
    let mut echelon = Echelon::new(k, unknowns)?;
    for lambda in -w..=w {
        for mu in -w..=w {
            let nu = -lambda - mu;
            if nu.abs() > w {
                continue;
            }
            for &a in &l.homogeneous(&[lambda]) {
                for &b in &l.homogeneous(&[mu]) {
                    for &c in &l.homogeneous(&[nu]) {
                        let ab = &l.eigen_products[a * n + b];
                        let bc = &l.eigen_products[b * n + c];
                        let ca = &l.eigen_products[c * n + a];
                        // β(ab, c) − β(a, bc) and β(ab, c) − β(b, ca)
                        let mut first = vec![k.zero(); unknowns];
                        pair(-nu, ab, &unit(c), &mut first, &one);
                        let mut second = first.clone();
                        pair(lambda, &unit(a), bc, &mut first, &minus);
                        pair(mu, &unit(b), ca, &mut second, &minus);
                        echelon.insert(&first);
                        echelon.insert(&second);
                    }
                }
            }
        }
    }
    Ok(unknowns - echelon.rank())
}
