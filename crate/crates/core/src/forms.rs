//! Killing, trace and Zorn forms, the normalized `sl₂` form, and semilinear automorphisms.

use crate::arith::{Domain, Matrix, RingMap, Scalar};
use crate::error::{Error, Result};
use crate::ibf::BilinearForm;
use crate::module::constructors::basis_matrices;
use crate::module::{sl, Algebra, AlgebraKind};

/// Reference value for the `sl₂` Killing constant, compared against the computed one.
pub const LITERATURE_KILLING_CONSTANT: i64 = 12;

/// `κ(x, y) = tr(ad x ∘ ad y)`.
pub fn killing_form(l: &Algebra) -> Result<BilinearForm> {
    l.require_lie()?;
    let d = l.domain();
    let n = l.rank();
    let ads: Vec<Matrix> = (0..n).map(|i| l.left_matrix(&l.basis_vector(i))).collect();
    let mut gram = Matrix::zeros(d, n, n);
    for i in 0..n {
        for j in i..n {
            let t = ads[i].mul(&ads[j])?.trace();
            gram[(i, j)] = t.clone();
            gram[(j, i)] = t;
        }
    }
    let form = BilinearForm::new(l, gram)?;
    form.require_invariant()?;
    Ok(form)
}

/// `κ(x, y) = tr(xy)` on the full matrix algebra.
pub fn matrix_trace_form(a: &Algebra) -> Result<BilinearForm> {
    let AlgebraKind::Mat(_) = a.kind() else {
        return Err(Error::ShapeMismatch("trace form needs a full matrix algebra".into()));
    };
    let d = a.domain();
    let basis = basis_matrices(a.kind(), d)?;
    let n = basis.len();
    let mut gram = Matrix::zeros(d, n, n);
    for i in 0..n {
        for j in 0..n {
            gram[(i, j)] = basis[i].mul(&basis[j])?.trace();
        }
    }
    BilinearForm::new(a, gram)
}

/// `τ(a, b) = α₁β₁ + α₂β₂ − ᵗu y − ᵗx v` on Zorn vector matrices.
pub fn zorn_trace_form(z: &Algebra) -> Result<BilinearForm> {
    if z.kind() != &AlgebraKind::Zorn {
        return Err(Error::ShapeMismatch("Zorn form needs the Zorn algebra".into()));
    }
    let d = z.domain();
    let mut gram = Matrix::zeros(d, 8, 8);
    gram[(0, 0)] = d.one();
    gram[(1, 1)] = d.one();
    for i in 0..3 {
        gram[(2 + i, 5 + i)] = d.from_i64(-1);
        gram[(5 + i, 2 + i)] = d.from_i64(-1);
    }
    BilinearForm::new(z, gram)
}

/// `γ` on `sl₂` in the basis `(e, h, f)`: `γ(e, f) = γ(f, e) = 1`, `γ(h, h) = 2`.
pub fn normalized_sl2_form(d: &Domain) -> Result<BilinearForm> {
    let gram = Matrix::from_i64(d, &[&[0, 0, 1], &[0, 2, 0], &[1, 0, 0]]);
    BilinearForm::new(&sl(2, d)?, gram)
}

/// The scalar `c` with `a = c·b` entrywise, if there is one.
pub fn proportionality_constant(a: &Matrix, b: &Matrix) -> Option<Scalar> {
    let d = a.domain();
    let Some(pos) = b.entries().iter().position(|s| !d.is_zero(s)) else {
        return a.is_zero().then(|| d.zero());
    };
    let c = d.div_exact(&a.entries()[pos], &b.entries()[pos])?;
    (b.scale(&c) == *a).then_some(c)
}

/// `κ_{sl₂} = c·γ`, with `c` compared against the literature value.
#[derive(Clone, Debug)]
pub struct KillingConstant {
    pub constant: Scalar,
    pub literature: Scalar,
    pub agrees: bool,
}

pub fn sl2_killing_constant(d: &Domain) -> Result<Option<KillingConstant>> {
    let kappa = killing_form(&sl(2, d)?)?;
    let gamma = normalized_sl2_form(d)?;
    Ok(proportionality_constant(kappa.gram(), gamma.gram()).map(|c| {
        let literature = d.from_i64(LITERATURE_KILLING_CONSTANT);
        KillingConstant {
            agrees: c == literature,
            constant: c,
            literature,
        }
    }))
}

/// `x ↦ F·α(x)`, an `α`-semilinear algebra automorphism. Column `j` of `F` is the image of `bⱼ`.
#[derive(Clone, Debug)]
pub struct SemilinearAuto {
    algebra: Algebra,
    matrix: Matrix,
    alpha: RingMap,
}

impl SemilinearAuto {
    pub fn new(algebra: &Algebra, matrix: Matrix, alpha: RingMap) -> Result<Self> {
        if !algebra.is_semilinear_automorphism(&matrix, &alpha) {
            return Err(Error::InvalidAutomorphism(format!(
                "matrix is not a {alpha}-semilinear automorphism"
            )));
        }
        Ok(SemilinearAuto {
            algebra: algebra.clone(),
            matrix,
            alpha,
        })
    }

    pub fn linear(algebra: &Algebra, matrix: Matrix) -> Result<Self> {
        Self::new(algebra, matrix, RingMap::identity(algebra.domain()))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn alpha(&self) -> &RingMap {
        &self.alpha
    }

    pub fn is_linear(&self) -> bool {
        self.alpha.is_identity()
    }

    pub fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.matrix.mul_vec(&self.alpha.apply_all(x))
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }
}

/// `κ(f(bᵢ), f(bⱼ)) = α(κ(bᵢ, bⱼ))` on all basis pairs.
pub fn semilinear_killing_identity(l: &Algebra, f: &SemilinearAuto) -> Result<bool> {
    let kappa = killing_form(l)?;
    let n = l.rank();
    let images: Vec<Vec<Scalar>> = (0..n).map(|j| f.matrix().col(j)).collect();
    for i in 0..n {
        for j in 0..n {
            let lhs = kappa.eval(&images[i], &images[j]);
            if lhs != f.alpha().apply(&kappa.gram()[(i, j)]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `f*β = β` for every supplied linear witness `f`: `Fᵀ·G·F = G`.
pub fn is_automorphism_invariant(beta: &BilinearForm, autos: &[SemilinearAuto]) -> Result<bool> {
    for f in autos {
        if !f.is_linear() {
            return Err(Error::InvalidAutomorphism("witness must be linear".into()));
        }
        let pulled = f.matrix().transpose().mul(beta.gram())?.mul(f.matrix())?;
        if &pulled != beta.gram() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `exp(ad x)` for `ad x` nilpotent.
pub fn exp_ad(l: &Algebra, x: &[Scalar]) -> Result<Matrix> {
    l.left_matrix(x).exp_nilpotent()
}
