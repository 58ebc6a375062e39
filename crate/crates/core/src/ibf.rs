//! Invariant bilinear forms and the universal module `IBF_R(B)`.
//!
//! `IBF_R(B) = (B ⊗ B) / ibf_R(B)` where `ibf_R(B)` is spanned by the
//! invariance defects `ab⊗c − a⊗bc` and `ab⊗c − b⊗ca`. A form `β` is
//! invariant exactly when its Gram vector kills these defects, so forms
//! correspond to linear maps out of the quotient. Generator `p·n + q`
//! of `B ⊗ B` is the class of `b_p ⊗ b_q`.

use std::fmt;
use std::sync::OnceLock;

use crate::arith::matrix::{axpy, vec_is_zero};
use crate::arith::{kernel_and_rank, solve_left, Domain, Matrix, Scalar};
use crate::error::{Error, Result};
use crate::module::{ac_module, Algebra, ModuleInvariants, ModuleMap, PresentedModule, Span};

/// Three-valued cached flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flag {
    Yes,
    No,
    Unknown,
}

impl From<Option<&bool>> for Flag {
    fn from(b: Option<&bool>) -> Self {
        match b {
            Some(true) => Flag::Yes,
            Some(false) => Flag::No,
            None => Flag::Unknown,
        }
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Flag::Yes => "yes",
            Flag::No => "no",
            Flag::Unknown => "unknown",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FormFlags {
    pub symmetric: Flag,
    pub invariant: Flag,
    pub nondegenerate: Flag,
    pub nonsingular: Flag,
}

/// `β(bᵢ, bⱼ) = G[i][j]` on a structure-constant algebra.
#[derive(Clone, Debug)]
pub struct BilinearForm {
    algebra: Algebra,
    gram: Matrix,
    symmetric: OnceLock<bool>,
    invariant: OnceLock<bool>,
    nondegenerate: OnceLock<bool>,
    nonsingular: OnceLock<bool>,
}

impl PartialEq for BilinearForm {
    fn eq(&self, other: &Self) -> bool {
        self.gram == other.gram
    }
}

impl BilinearForm {
    pub fn new(algebra: &Algebra, gram: Matrix) -> Result<Self> {
        let n = algebra.rank();
        if gram.rows() != n || gram.cols() != n {
            return Err(Error::ShapeMismatch(format!(
                "Gram matrix is {}x{}, algebra has rank {n}",
                gram.rows(),
                gram.cols()
            )));
        }
        if gram.domain() != algebra.domain() {
            return Err(Error::DomainMismatch {
                expected: algebra.domain().to_string(),
                found: gram.domain().to_string(),
            });
        }
        Ok(BilinearForm {
            algebra: algebra.clone(),
            gram,
            symmetric: OnceLock::new(),
            invariant: OnceLock::new(),
            nondegenerate: OnceLock::new(),
            nonsingular: OnceLock::new(),
        })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn domain(&self) -> &Domain {
        self.algebra.domain()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn eval(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        crate::arith::matrix::dot(self.domain(), x, &self.gram.mul_vec(y))
    }

    /// Flags computed so far; nothing is evaluated here.
    pub fn flags(&self) -> FormFlags {
        FormFlags {
            symmetric: self.symmetric.get().into(),
            invariant: self.invariant.get().into(),
            nondegenerate: self.nondegenerate.get().into(),
            nonsingular: self.nonsingular.get().into(),
        }
    }

    /// Gram matrix flattened along the tensor generators.
    pub fn gram_vector(&self) -> Vec<Scalar> {
        self.gram.entries().to_vec()
    }

    pub fn is_symmetric(&self) -> bool {
        *self.symmetric.get_or_init(|| self.gram.is_symmetric())
    }

    pub fn is_invariant(&self) -> bool {
        *self.invariant.get_or_init(|| self.invariance_violation().is_none())
    }

    /// First basis triple where `β(ab,c) = β(a,bc)` or `β(ab,c) = β(b,ca)` fails.
    /// Checking basis triples suffices by trilinearity.
    pub fn invariance_violation(&self) -> Option<Error> {
        let d = self.domain();
        let b = &self.algebra;
        let n = b.rank();
        // β(x, bᵧ) and β(bₓ, y) for coordinate vectors x, y.
        let value = |x: &[Scalar], y: usize| -> Scalar {
            let mut acc = d.zero();
            for (l, c) in x.iter().enumerate() {
                if !d.is_zero(c) {
                    acc = d.add(&acc, &d.mul(c, &self.gram[(l, y)]));
                }
            }
            acc
        };
        let value_right = |x: usize, y: &[Scalar]| -> Scalar {
            let mut acc = d.zero();
            for (l, c) in y.iter().enumerate() {
                if !d.is_zero(c) {
                    acc = d.add(&acc, &d.mul(c, &self.gram[(x, l)]));
                }
            }
            acc
        };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = value(b.product(i, j), k);
                    if lhs != value_right(i, b.product(j, k)) {
                        return Some(Error::NotInvariant {
                            i,
                            j,
                            k,
                            identity: "β(ab,c) = β(a,bc)",
                        });
                    }
                    if lhs != value_right(j, b.product(k, i)) {
                        return Some(Error::NotInvariant {
                            i,
                            j,
                            k,
                            identity: "β(ab,c) = β(b,ca)",
                        });
                    }
                }
            }
        }
        None
    }

    pub fn require_invariant(&self) -> Result<()> {
        match self.invariance_violation() {
            None => {
                let _ = self.invariant.set(true);
                Ok(())
            }
            Some(e) => {
                let _ = self.invariant.set(false);
                Err(e)
            }
        }
    }

    pub fn determinant(&self) -> Scalar {
        self.gram.det().expect("Gram matrix is square")
    }

    /// `β(b, ·) = 0 ⇒ b = 0`; for a square Gram matrix this holds iff the
    /// determinant is not a zero divisor.
    pub fn is_nondegenerate(&self) -> bool {
        *self
            .nondegenerate
            .get_or_init(|| !self.domain().is_zero_divisor(&self.determinant()))
    }

    /// `b ↦ β(b, ·)` is bijective: the determinant is a unit.
    pub fn is_nonsingular(&self) -> bool {
        *self.nonsingular.get_or_init(|| self.domain().is_unit(&self.determinant()))
    }

    /// Whether `self = c·other` for the given scalar.
    pub fn is_multiple_of(&self, other: &BilinearForm, c: &Scalar) -> bool {
        other.gram.scale(c) == self.gram
    }
}

/// `(i, j, k) ↦` the two defect vectors in `R^(n²)`, `2n³` rows in total.
pub fn ibf_relations(b: &Algebra) -> Vec<Vec<Scalar>> {
    let d = b.domain();
    let n = b.rank();
    let mut rows = Vec::with_capacity(2 * n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut ab_c = vec![d.zero(); n * n];
                for (l, c) in b.product(i, j).iter().enumerate() {
                    ab_c[l * n + k] = c.clone();
                }
                let mut first = ab_c.clone();
                for (l, c) in b.product(j, k).iter().enumerate() {
                    first[i * n + l] = d.sub(&first[i * n + l], c);
                }
                let mut second = ab_c;
                for (l, c) in b.product(k, i).iter().enumerate() {
                    second[j * n + l] = d.sub(&second[j * n + l], c);
                }
                rows.push(first);
                rows.push(second);
            }
        }
    }
    rows
}

/// `ibf_R(B)` as a submodule of `B ⊗ B`.
pub fn ibf_span(b: &Algebra) -> Result<Span> {
    let n = b.rank();
    Span::new(b.domain(), n * n, ibf_relations(b))
}

/// Generator order used to pick basis classes over a field: `bᵢ⊗bᵢ` first,
/// then the remaining pairs lexicographically.
fn tensor_preference(n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).map(|i| i * n + i).collect();
    order.extend((0..n * n).filter(|g| g / n != g % n));
    order
}

/// `IBF_R(B)` with its quotient map from `B ⊗ B`.
#[derive(Clone, Debug)]
pub struct IbfModule {
    algebra: Algebra,
    module: PresentedModule,
}

pub fn ibf_module(b: &Algebra) -> IbfModule {
    let n = b.rank();
    let rel = Matrix::from_rows_with_width(b.domain(), ibf_relations(b), n * n).expect("rows have width n²");
    IbfModule {
        algebra: b.clone(),
        module: PresentedModule::with_preference(rel, tensor_preference(n)),
    }
}

impl IbfModule {
    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn module(&self) -> &PresentedModule {
        &self.module
    }

    pub fn invariants(&self) -> Result<ModuleInvariants> {
        self.module.invariants()
    }

    /// Tensor generator index of `b_p ⊗ b_q`.
    pub fn generator(&self, p: usize, q: usize) -> usize {
        p * self.algebra.rank() + q
    }

    pub fn generator_name(&self, g: usize) -> String {
        let n = self.algebra.rank();
        let names = self.algebra.names();
        format!("{}⊗{}", names[g / n], names[g % n])
    }

    /// `q_B`: canonical coordinates of the class of a tensor.
    pub fn quotient_map(&self, x: &[Scalar]) -> Result<Vec<Scalar>> {
        self.module.coordinates(x)
    }

    /// Over a field: the generator pairs whose classes form a basis.
    pub fn basis_classes(&self) -> Result<Vec<(usize, usize)>> {
        let n = self.algebra.rank();
        match self.module.classification()? {
            crate::module::Classification::Field { basis, .. } => Ok(basis.iter().map(|g| (g / n, g % n)).collect()),
            _ => Err(Error::UnsupportedDomain("basis classes are reported over fields".into())),
        }
    }

    /// Rank of `Hom(IBF_R(B), R)`: the free rank of the classification.
    pub fn dual_rank(&self) -> Result<usize> {
        Ok(self.invariants()?.free_rank)
    }

    /// A basis of `Hom(IBF_R(B), R)` as Gram matrices: vectors killing every relation.
    pub fn invariant_forms(&self) -> Result<Vec<Matrix>> {
        let n = self.algebra.rank();
        let d = self.algebra.domain();
        let rel = Matrix::from_rows_with_width(d, self.module.reduced_relations().to_vec(), n * n)?;
        let (basis, _) = kernel_and_rank(&rel)?;
        basis
            .into_iter()
            .map(|v| Matrix::from_rows(d, v.chunks(n).map(<[Scalar]>::to_vec).collect()))
            .collect()
    }
}

/// `β̄: IBF_R(B) → R`, `class(a⊗b) ↦ β(a, b)`.
pub fn induced_map(beta: &BilinearForm) -> Result<ModuleMap> {
    beta.require_invariant()?;
    let b = beta.algebra();
    let column = Matrix::from_rows(b.domain(), beta.gram_vector().into_iter().map(|s| vec![s]).collect())?;
    ModuleMap::new(ibf_module(b).module, PresentedModule::free(b.domain(), 1), column)
}

/// Forms `f ∘ β_u` for a map `f` out of `IBF_R(B)` into a free module:
/// one Gram matrix per target coordinate.
pub fn forms_from_functional(b: &Algebra, phi: &ModuleMap) -> Result<Vec<Matrix>> {
    let n = b.rank();
    if phi.source.generators() != n * n {
        return Err(Error::ShapeMismatch("functional is not defined on B ⊗ B".into()));
    }
    if phi.well_defined()?.is_err() {
        return Err(Error::ShapeMismatch("functional does not factor through IBF".into()));
    }
    let d = b.domain();
    let values: Vec<Vec<Scalar>> = (0..n * n)
        .map(|g| phi.apply(&crate::arith::matrix::unit_vector(d, n * n, g)))
        .collect();
    (0..phi.target.generators())
        .map(|t| {
            let rows = (0..n).map(|i| (0..n).map(|j| values[i * n + j][t].clone()).collect()).collect();
            Matrix::from_rows(d, rows)
        })
        .collect()
}

/// Outcome of the IBF-principle test for `(B, β)`.
#[derive(Clone, Debug)]
pub enum PrincipleCertificate {
    /// `β̄` is an isomorphism; `preimage` is a tensor with `β̄(preimage) = 1`.
    Holds { ibf: ModuleInvariants, preimage: Vec<Scalar> },
    Fails {
        ibf: ModuleInvariants,
        kernel: ModuleInvariants,
        cokernel: ModuleInvariants,
    },
}

impl PrincipleCertificate {
    pub fn holds(&self) -> bool {
        matches!(self, PrincipleCertificate::Holds { .. })
    }
}

pub fn check_ibf_principle(beta: &BilinearForm) -> Result<PrincipleCertificate> {
    let map = induced_map(beta)?;
    let ibf = map.source.invariants()?;
    let d = beta.domain();
    let preimage = solve_left(&map.matrix, &[d.one()])?;
    if let (Some(x), true) = (&preimage, ibf == ModuleInvariants { torsion: vec![], free_rank: 1 }) {
        return Ok(PrincipleCertificate::Holds {
            ibf,
            preimage: x.clone(),
        });
    }
    Ok(PrincipleCertificate::Fails {
        ibf,
        kernel: map.kernel()?.invariants()?,
        cokernel: map.cokernel()?.invariants()?,
    })
}

/// `μ̄: IBF → AC`, `a⊗b ↦ ab`, and `ν̄: AC → IBF`, `ā ↦ 1⊗a`, for a unital algebra.
#[derive(Clone, Debug)]
pub struct UnitalIsomorphism {
    pub mu: ModuleMap,
    pub nu: ModuleMap,
    /// `μ̄∘ν̄` and `ν̄∘μ̄` are identities on generators.
    pub inverse_pair: bool,
}

pub fn unital_ac_isomorphism(b: &Algebra) -> Result<UnitalIsomorphism> {
    let unit = b.require_unital()?.to_vec();
    let d = b.domain();
    let n = b.rank();
    let ibf = ibf_module(b).module;
    let (_, ac) = ac_module(b)?;
    let mu_rows: Vec<Vec<Scalar>> = (0..n * n).map(|g| b.product(g / n, g % n).to_vec()).collect();
    let mu = ModuleMap::new(ibf.clone(), ac.clone(), Matrix::from_rows_with_width(d, mu_rows, n)?)?;
    let nu_rows: Vec<Vec<Scalar>> = (0..n)
        .map(|k| {
            let mut v = vec![d.zero(); n * n];
            for (l, u) in unit.iter().enumerate() {
                v[l * n + k] = u.clone();
            }
            v
        })
        .collect();
    let nu = ModuleMap::new(ac.clone(), ibf.clone(), Matrix::from_rows_with_width(d, nu_rows, n * n)?)?;
    let mut inverse_pair = mu.well_defined()?.is_ok() && nu.well_defined()?.is_ok();
    if inverse_pair {
        let round_ac = nu.then(&mu)?;
        let round_ibf = mu.then(&nu)?;
        let e = |m: usize, i: usize| crate::arith::matrix::unit_vector(d, m, i);
        for k in 0..n {
            let diff = crate::arith::matrix::vec_sub(d, &round_ac.apply(&e(n, k)), &e(n, k));
            inverse_pair &= ac.is_zero_class(&diff)?;
        }
        for g in 0..n * n {
            let diff = crate::arith::matrix::vec_sub(d, &round_ibf.apply(&e(n * n, g)), &e(n * n, g));
            inverse_pair &= ibf.is_zero_class(&diff)?;
        }
    }
    Ok(UnitalIsomorphism { mu, nu, inverse_pair })
}

/// `β₀(a, b) = π(ab)` for `B = R·b₀ ⊕ ac(B)` with `π` the projection onto `R·b₀`.
pub fn unital_projection_form(b: &Algebra, b0: &[Scalar]) -> Result<BilinearForm> {
    b.require_unital()?;
    let d = b.domain();
    let n = b.rank();
    let (_, ac) = ac_module(b)?;
    let inv = ac.invariants()?;
    if inv != (ModuleInvariants { torsion: vec![], free_rank: 1 }) {
        return Err(Error::BadComplement(format!("AC(B) is {inv}, not free of rank 1")));
    }
    let c0 = ac.coordinates(b0)?;
    let scale = d
        .inv(&c0[0])
        .ok_or_else(|| Error::BadComplement("the class of b₀ does not generate AC(B)".into()))?;
    let mut gram = Matrix::zeros(d, n, n);
    for i in 0..n {
        for j in 0..n {
            let c = ac.coordinates(b.product(i, j))?;
            gram[(i, j)] = d.mul(&c[0], &scale);
        }
    }
    BilinearForm::new(b, gram)
}

/// Gram space solve used as an independent count: all `G` with
/// `β(ab,c) = β(a,bc) = β(b,ca)` on basis triples, written directly as
/// equations in the `n²` unknowns `G[p][q]`.
pub fn invariant_gram_space(b: &Algebra) -> Result<Vec<Matrix>> {
    let d = b.domain();
    let n = b.rank();
    let mut equations = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                // β(bᵢbⱼ, bₖ) − β(bᵢ, bⱼbₖ)
                let mut e1 = vec![d.zero(); n * n];
                let mut e2 = vec![d.zero(); n * n];
                axpy(d, &mut e1, &d.one(), &scatter(d, n, b.product(i, j), |l| l * n + k));
                axpy(d, &mut e1, &d.from_i64(-1), &scatter(d, n, b.product(j, k), |l| i * n + l));
                axpy(d, &mut e2, &d.one(), &scatter(d, n, b.product(i, j), |l| l * n + k));
                axpy(d, &mut e2, &d.from_i64(-1), &scatter(d, n, b.product(k, i), |l| j * n + l));
                for e in [e1, e2] {
                    if !vec_is_zero(d, &e) {
                        equations.push(e);
                    }
                }
            }
        }
    }
    let m = Matrix::from_rows_with_width(d, equations, n * n)?;
    let (basis, _) = kernel_and_rank(&m)?;
    basis
        .into_iter()
        .map(|v| Matrix::from_rows(d, v.chunks(n).map(<[Scalar]>::to_vec).collect()))
        .collect()
}

fn scatter(d: &Domain, n: usize, coords: &[Scalar], at: impl Fn(usize) -> usize) -> Vec<Scalar> {
    let mut v = vec![d.zero(); n * n];
    for (l, c) in coords.iter().enumerate() {
        v[at(l)] = c.clone();
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::{mat, sl, zero_algebra};

    fn gamma(d: &Domain) -> BilinearForm {
        let g = Matrix::from_i64(d, &[&[0, 0, 1], &[0, 2, 0], &[1, 0, 0]]);
        BilinearForm::new(&sl(2, d).unwrap(), g).unwrap()
    }

    #[test]
    fn sl2_over_fields() {
        let f2 = Domain::prime_field(2).unwrap();
        let m = ibf_module(&sl(2, &f2).unwrap());
        assert_eq!(m.basis_classes().unwrap(), vec![(0, 0), (2, 2), (0, 2), (2, 0)]);
        let q = Domain::Rationals;
        let m = ibf_module(&sl(2, &q).unwrap());
        assert_eq!(m.basis_classes().unwrap(), vec![(1, 1)]);
        assert!(check_ibf_principle(&gamma(&q)).unwrap().holds());
    }

    #[test]
    fn sl2_over_integers() {
        let z = Domain::Integers;
        let m = ibf_module(&sl(2, &z).unwrap());
        let inv = m.invariants().unwrap();
        assert_eq!(inv.torsion, vec![z.from_i64(2); 3]);
        assert_eq!(inv.free_rank, 1);
        let g = gamma(&z);
        assert!(g.is_nondegenerate() && !g.is_nonsingular());
        match check_ibf_principle(&g).unwrap() {
            PrincipleCertificate::Fails { kernel, cokernel, .. } => {
                assert_eq!(kernel.torsion, vec![z.from_i64(2); 3]);
                assert!(cokernel.is_zero());
            }
            PrincipleCertificate::Holds { .. } => panic!("principle cannot hold over Z"),
        }
    }

    #[test]
    fn invariance_violation_is_reported() {
        let q = Domain::Rationals;
        let g = Matrix::from_i64(&q, &[&[0, 0, 1], &[0, 3, 0], &[1, 0, 0]]);
        let beta = BilinearForm::new(&sl(2, &q).unwrap(), g).unwrap();
        assert!(matches!(induced_map(&beta), Err(Error::NotInvariant { .. })));
        assert_eq!(beta.flags().invariant, Flag::No);
    }

    #[test]
    fn round_trip_through_functionals() {
        let q = Domain::Rationals;
        let beta = gamma(&q);
        let phi = induced_map(&beta).unwrap();
        let back = forms_from_functional(beta.algebra(), &phi).unwrap();
        assert_eq!(back, vec![beta.gram().clone()]);
    }

    #[test]
    fn zero_algebra_accepts_everything() {
        let q = Domain::Rationals;
        let z = zero_algebra(2, &q).unwrap();
        assert!(ibf_relations(&z).iter().all(|r| vec_is_zero(&q, r)));
        let beta = BilinearForm::new(&z, Matrix::from_i64(&q, &[&[1, 2], &[3, 4]])).unwrap();
        assert!(beta.is_invariant());
    }

    #[test]
    fn matrix_algebra_unital_iso() {
        let q = Domain::Rationals;
        let m = mat(2, &q).unwrap();
        let iso = unital_ac_isomorphism(&m).unwrap();
        assert!(iso.inverse_pair);
        assert!(iso.mu.is_isomorphism().unwrap());
        let e11 = m.basis_vector(0);
        let b0 = unital_projection_form(&m, &e11).unwrap();
        let trace = Matrix::from_i64(&q, &[&[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 1, 0, 0], &[0, 0, 0, 1]]);
        assert_eq!(b0.gram(), &trace);
    }
}
