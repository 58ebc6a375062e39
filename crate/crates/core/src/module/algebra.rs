//! Free algebras of finite rank given by structure constants.

use std::sync::OnceLock;

use crate::arith::matrix::{vec_is_zero, vec_sub};
use crate::arith::{Domain, Matrix, RingMap, Scalar};
use crate::error::{Error, Result};

/// Which named family an algebra came from; drives matrix realizations and names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraKind {
    /// Trace-zero `n×n` matrices under the commutator.
    Sl(usize),
    /// All `n×n` matrices.
    Mat(usize),
    Zorn,
    Zero,
    Custom,
}

/// `bᵢ·bⱼ = Σₖ cᵢⱼᵏ·bₖ` on a free module with basis `b₀, …, bₙ₋₁`.
#[derive(Clone, Debug)]
pub struct Algebra {
    domain: Domain,
    kind: AlgebraKind,
    names: Vec<String>,
    /// `products[i·n + j]` holds the coordinates of `bᵢ·bⱼ`.
    products: Vec<Vec<Scalar>>,
    unit: Option<Vec<Scalar>>,
    lie: OnceLock<bool>,
    associative: OnceLock<bool>,
    unital: OnceLock<bool>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain && self.products == other.products && self.unit == other.unit
    }
}

impl Algebra {
    /// Dense constructor; `products[i·n + j]` are the coordinates of `bᵢ·bⱼ`.
    pub fn new(
        domain: &Domain,
        names: Vec<String>,
        products: Vec<Vec<Scalar>>,
        unit: Option<Vec<Scalar>>,
    ) -> Result<Self> {
        let n = names.len();
        if products.len() != n * n || products.iter().any(|p| p.len() != n) {
            return Err(Error::BadSpec(format!("expected {n}x{n} products of length {n}")));
        }
        let foreign = products.iter().flatten().chain(unit.iter().flatten()).find(|s| !domain.contains(s));
        if let Some(s) = foreign {
            return Err(Error::BadSpec(format!("{s} is not an element of {domain}")));
        }
        if unit.as_ref().is_some_and(|u| u.len() != n) {
            return Err(Error::BadSpec("unit has the wrong length".into()));
        }
        Ok(Algebra {
            domain: domain.clone(),
            kind: AlgebraKind::Custom,
            names,
            products,
            unit,
            lie: OnceLock::new(),
            associative: OnceLock::new(),
            unital: OnceLock::new(),
        })
    }

    /// Sparse constructor from `(i, j, k, c)` entries meaning `bᵢ·bⱼ ∋ c·bₖ`.
    pub fn from_table(
        domain: &Domain,
        names: Vec<String>,
        entries: &[(usize, usize, usize, Scalar)],
        unit: Option<Vec<Scalar>>,
    ) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::BadSpec("rank must be at least 1".into()));
        }
        let mut products = vec![vec![domain.zero(); n]; n * n];
        let mut seen = std::collections::BTreeSet::new();
        for (i, j, k, c) in entries {
            if *i >= n || *j >= n || *k >= n {
                return Err(Error::BadSpec(format!("index out of range in entry ({i}, {j}, {k})")));
            }
            if !seen.insert((*i, *j, *k)) {
                return Err(Error::BadSpec(format!("duplicate entry ({i}, {j}, {k})")));
            }
            products[i * n + j][*k] = c.clone();
        }
        Self::new(domain, names, products, unit)
    }

    pub(crate) fn with_kind(mut self, kind: AlgebraKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn kind(&self) -> &AlgebraKind {
        &self.kind
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn unit(&self) -> Option<&[Scalar]> {
        self.unit.as_deref()
    }

    pub fn product(&self, i: usize, j: usize) -> &[Scalar] {
        &self.products[i * self.rank() + j]
    }

    /// Nonzero structure constants as `(i, j, k, c)`, lexicographically ordered.
    pub fn table(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let n = self.rank();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for (k, c) in self.product(i, j).iter().enumerate() {
                    if !self.domain.is_zero(c) {
                        out.push((i, j, k, c.clone()));
                    }
                }
            }
        }
        out
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        crate::arith::matrix::unit_vector(&self.domain, self.rank(), i)
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let d = &self.domain;
        let n = self.rank();
        let mut out = vec![d.zero(); n];
        for (i, ai) in a.iter().enumerate() {
            if d.is_zero(ai) {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if d.is_zero(bj) {
                    continue;
                }
                let c = d.mul(ai, bj);
                crate::arith::matrix::axpy(d, &mut out, &c, self.product(i, j));
            }
        }
        out
    }

    /// Matrix of `x ↦ a·x`; column `j` holds `a·bⱼ`.
    pub fn left_matrix(&self, a: &[Scalar]) -> Matrix {
        let n = self.rank();
        let cols: Vec<Vec<Scalar>> = (0..n).map(|j| self.mul(a, &self.basis_vector(j))).collect();
        Matrix::from_rows(&self.domain, cols).unwrap().transpose()
    }

    /// Matrix of `x ↦ x·a`.
    pub fn right_matrix(&self, a: &[Scalar]) -> Matrix {
        let n = self.rank();
        let cols: Vec<Vec<Scalar>> = (0..n).map(|j| self.mul(&self.basis_vector(j), a)).collect();
        Matrix::from_rows(&self.domain, cols).unwrap().transpose()
    }

    /// `(bᵢbⱼ)bₖ − bᵢ(bⱼbₖ)`.
    pub fn associator(&self, i: usize, j: usize, k: usize) -> Vec<Scalar> {
        let left = self.mul(self.product(i, j), &self.basis_vector(k));
        let right = self.mul(&self.basis_vector(i), self.product(j, k));
        vec_sub(&self.domain, &left, &right)
    }

    /// `bᵢbⱼ − bⱼbᵢ`.
    pub fn commutator(&self, i: usize, j: usize) -> Vec<Scalar> {
        vec_sub(&self.domain, self.product(i, j), self.product(j, i))
    }

    /// Antisymmetry and the Jacobi identity on all basis triples.
    pub fn is_lie(&self) -> bool {
        *self.lie.get_or_init(|| {
            let d = &self.domain;
            let n = self.rank();
            for i in 0..n {
                if !vec_is_zero(d, self.product(i, i)) {
                    return false;
                }
                for j in i + 1..n {
                    let sum: Vec<Scalar> = self
                        .product(i, j)
                        .iter()
                        .zip(self.product(j, i))
                        .map(|(a, b)| d.add(a, b))
                        .collect();
                    if !vec_is_zero(d, &sum) {
                        return false;
                    }
                }
            }
            for i in 0..n {
                for j in i + 1..n {
                    for k in j + 1..n {
                        let a = self.mul(self.product(i, j), &self.basis_vector(k));
                        let b = self.mul(self.product(j, k), &self.basis_vector(i));
                        let c = self.mul(self.product(k, i), &self.basis_vector(j));
                        let total: Vec<Scalar> = (0..n).map(|t| d.add(&d.add(&a[t], &b[t]), &c[t])).collect();
                        if !vec_is_zero(d, &total) {
                            return false;
                        }
                    }
                }
            }
            true
        })
    }

    pub fn is_associative(&self) -> bool {
        *self.associative.get_or_init(|| {
            let n = self.rank();
            (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| vec_is_zero(&self.domain, &self.associator(i, j, k)))))
        })
    }

    /// The stored unit coordinates give a two-sided identity.
    pub fn is_unital(&self) -> bool {
        *self.unital.get_or_init(|| {
            let Some(u) = &self.unit else { return false };
            (0..self.rank()).all(|i| {
                let b = self.basis_vector(i);
                self.mul(u, &b) == b && self.mul(&b, u) == b
            })
        })
    }

    pub fn require_lie(&self) -> Result<()> {
        if self.is_lie() {
            Ok(())
        } else {
            Err(Error::NotLie)
        }
    }

    pub fn require_unital(&self) -> Result<&[Scalar]> {
        if self.is_unital() {
            Ok(self.unit.as_deref().unwrap())
        } else {
            Err(Error::NotUnital)
        }
    }

    /// Structure constants mapped entrywise along `alpha`.
    pub fn base_change(&self, alpha: &RingMap) -> Result<Algebra> {
        if alpha.source() != &self.domain {
            return Err(Error::UnsupportedMap(format!(
                "map from {} applied to an algebra over {}",
                alpha.source(),
                self.domain
            )));
        }
        let products = self.products.iter().map(|p| alpha.apply_all(p)).collect();
        let unit = self.unit.as_ref().map(|u| alpha.apply_all(u));
        Ok(Algebra::new(alpha.target(), self.names.clone(), products, unit)?.with_kind(self.kind.clone()))
    }

    /// `self ⊞ other`; products across the summands vanish.
    pub fn direct_sum(&self, other: &Algebra) -> Result<Algebra> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch {
                expected: self.domain.to_string(),
                found: other.domain.to_string(),
            });
        }
        let d = &self.domain;
        let (n1, n2) = (self.rank(), other.rank());
        let n = n1 + n2;
        let mut products = vec![vec![d.zero(); n]; n * n];
        for i in 0..n1 {
            for j in 0..n1 {
                products[i * n + j][..n1].clone_from_slice(self.product(i, j));
            }
        }
        for i in 0..n2 {
            for j in 0..n2 {
                products[(n1 + i) * n + n1 + j][n1..].clone_from_slice(other.product(i, j));
            }
        }
        let unit = match (&self.unit, &other.unit) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).cloned().collect()),
            _ => None,
        };
        let mut names: Vec<String> = self.names.iter().map(|s| format!("{s}.1")).collect();
        names.extend(other.names.iter().map(|s| format!("{s}.2")));
        Algebra::new(d, names, products, unit)
    }

    /// Whether `x ↦ F·α(x)` is a bijective `α`-semilinear algebra endomorphism.
    /// Column `j` of `F` holds the image of `bⱼ`.
    pub fn is_semilinear_automorphism(&self, f: &Matrix, alpha: &RingMap) -> bool {
        let n = self.rank();
        if f.rows() != n || f.cols() != n || f.domain() != &self.domain || alpha.source() != &self.domain {
            return false;
        }
        if !alpha.is_automorphism() {
            return false;
        }
        let Ok(det) = f.det() else { return false };
        if !self.domain.is_unit(&det) {
            return false;
        }
        let images: Vec<Vec<Scalar>> = (0..n).map(|j| f.col(j)).collect();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let lhs = f.mul_vec(&alpha.apply_all(self.product(i, j)));
                lhs == self.mul(&images[i], &images[j])
            })
        })
    }

    /// Whether `F` (column `j` = image of `bⱼ`) is an algebra map `self → target`.
    pub fn is_homomorphism_to(&self, target: &Algebra, f: &Matrix) -> bool {
        let n = self.rank();
        if f.rows() != target.rank() || f.cols() != n || f.domain() != target.domain() || target.domain() != &self.domain {
            return false;
        }
        let images: Vec<Vec<Scalar>> = (0..n).map(|j| f.col(j)).collect();
        (0..n).all(|i| (0..n).all(|j| f.mul_vec(self.product(i, j)) == target.mul(&images[i], &images[j])))
    }

    pub fn is_automorphism(&self, f: &Matrix) -> bool {
        self.is_semilinear_automorphism(f, &RingMap::identity(&self.domain))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rejects_bad_entries() {
        let q = Domain::Rationals;
        let names = vec!["a".to_string(), "b".to_string()];
        let dup = [(0, 0, 0, q.one()), (0, 0, 0, q.one())];
        assert!(matches!(Algebra::from_table(&q, names.clone(), &dup, None), Err(Error::BadSpec(_))));
        let out = [(0, 2, 0, q.one())];
        assert!(matches!(Algebra::from_table(&q, names.clone(), &out, None), Err(Error::BadSpec(_))));
        let foreign = [(0, 0, 0, Domain::Integers.one())];
        assert!(Algebra::from_table(&q, names, &foreign, None).is_err());
    }

    #[test]
    fn rank_one_ring() {
        let z = Domain::Integers;
        let r = Algebra::from_table(&z, vec!["1".into()], &[(0, 0, 0, z.one())], Some(vec![z.one()])).unwrap();
        assert!(r.is_unital() && r.is_associative() && !r.is_lie());
    }
}
