//! Centroids with values in the regular and dual dimodules.
//!
//! A centroidal map `χ: B → M` satisfies `χ(b₁b₂) = b₁·χ(b₂) = χ(b₁)·b₂`.
//! Column `j` of the solution matrix holds `χ(bⱼ)`.

use crate::arith::matrix::vec_is_zero;
use crate::arith::{kernel_and_rank, Domain, Matrix, Scalar};
use crate::error::{Error, Result};
use crate::ibf::{ibf_module, BilinearForm};
use crate::module::{Algebra, Span};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dimodule {
    /// `B` acting on itself.
    Regular,
    /// `B* = Hom(B, R)` with `(b₁·φ)(b₂) = φ(b₂b₁)` and `(φ·b₁)(b₂) = φ(b₁b₂)`.
    Dual,
}

#[derive(Clone, Debug)]
pub struct CentroidResult {
    pub target: Dimodule,
    /// Basis of the solution space (a lattice basis over ℤ or a Laurent ring).
    pub basis: Vec<Matrix>,
    pub contains_identity: bool,
}

impl CentroidResult {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

/// Action matrices `(Lᵢ, Rⱼ)` of the chosen dimodule, on coordinates of `M`.
fn actions(b: &Algebra, target: Dimodule) -> (Vec<Matrix>, Vec<Matrix>) {
    let d = b.domain();
    let n = b.rank();
    let c = |i: usize, j: usize, k: usize| b.product(i, j)[k].clone();
    let build = |f: &dyn Fn(usize, usize) -> Scalar| {
        let mut m = Matrix::zeros(d, n, n);
        for k in 0..n {
            for l in 0..n {
                m[(k, l)] = f(k, l);
            }
        }
        m
    };
    let mut left = Vec::with_capacity(n);
    let mut right = Vec::with_capacity(n);
    for i in 0..n {
        match target {
            Dimodule::Regular => {
                left.push(build(&|k, l| c(i, l, k)));
                right.push(build(&|k, l| c(l, i, k)));
            }
            Dimodule::Dual => {
                left.push(build(&|k, l| c(k, i, l)));
                right.push(build(&|k, l| c(i, k, l)));
            }
        }
    }
    (left, right)
}

pub fn centroid(b: &Algebra, target: Dimodule) -> Result<CentroidResult> {
    let d = b.domain();
    if !d.is_field() && !d.is_pid() {
        return Err(Error::UnsupportedDomain(format!("centroids are not solved over {d}")));
    }
    let n = b.rank();
    let (left, right) = actions(b, target);
    // Unknown X[k][l] sits at index k·n + l.
    let mut equations = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for row in 0..n {
                // (X·cᵢⱼ)[row] − (Lᵢ·X·eⱼ)[row] and (X·cᵢⱼ)[row] − (Rⱼ·X·eᵢ)[row]
                let mut base = vec![d.zero(); n * n];
                for (l, c) in b.product(i, j).iter().enumerate() {
                    base[row * n + l] = c.clone();
                }
                let mut e1 = base.clone();
                let mut e2 = base;
                for k in 0..n {
                    e1[k * n + j] = d.sub(&e1[k * n + j], &left[i][(row, k)]);
                    e2[k * n + i] = d.sub(&e2[k * n + i], &right[j][(row, k)]);
                }
                for e in [e1, e2] {
                    if !vec_is_zero(d, &e) {
                        equations.push(e);
                    }
                }
            }
        }
    }
    let system = Matrix::from_rows_with_width(d, equations, n * n)?;
    let (kernel, _) = kernel_and_rank(&system)?;
    let basis = kernel
        .into_iter()
        .map(|v| Matrix::from_rows(d, v.chunks(n).map(<[Scalar]>::to_vec).collect()))
        .collect::<Result<Vec<_>>>()?;
    let identity = Matrix::identity(d, n);
    let span = Span::new(d, n * n, basis.iter().map(|m| m.entries().to_vec()).collect())?;
    let contains_identity = span.contains(identity.entries())?;
    Ok(CentroidResult {
        target,
        basis,
        contains_identity,
    })
}

/// The regular centroid is exactly `R·Id`.
pub fn is_central(b: &Algebra) -> Result<bool> {
    let c = centroid(b, Dimodule::Regular)?;
    Ok(c.rank() == 1 && generates_identity(b.domain(), &c.basis[0]))
}

fn generates_identity(d: &Domain, m: &Matrix) -> bool {
    let n = m.rows();
    if !m.is_diagonal() {
        return false;
    }
    let c = &m[(0, 0)];
    d.is_unit(c) && (0..n).all(|i| &m[(i, i)] == c)
}

/// `Cent_R(B, B*)` against `Hom(IBF_R(B), R)`, matched by `β(b₁, b₂) = χ(b₁)(b₂)`.
#[derive(Clone, Debug)]
pub struct BridgeReport {
    pub centroid_rank: usize,
    pub hom_rank: usize,
    /// `(χ, β)` pairs: solution matrix and the Gram matrix it defines.
    pub matching: Vec<(Matrix, BilinearForm)>,
    /// Every matched `β` is invariant.
    pub forms_invariant: bool,
    /// The matched Gram lattice equals the lattice of all invariant Gram matrices.
    pub lattices_agree: bool,
}

impl BridgeReport {
    pub fn passes(&self) -> bool {
        self.centroid_rank == self.hom_rank && self.forms_invariant && self.lattices_agree
    }
}

pub fn centroid_ibf_bridge(b: &Algebra) -> Result<BridgeReport> {
    let d = b.domain();
    let n = b.rank();
    let dual = centroid(b, Dimodule::Dual)?;
    let ibf = ibf_module(b);
    let hom_rank = ibf.dual_rank()?;
    let matching = dual
        .basis
        .iter()
        .map(|x| Ok((x.clone(), BilinearForm::new(b, x.transpose())?)))
        .collect::<Result<Vec<_>>>()?;
    let forms_invariant = matching.iter().all(|(_, beta)| beta.is_invariant());
    let matched = Span::new(d, n * n, matching.iter().map(|(_, beta)| beta.gram_vector()).collect())?;
    let all = Span::new(
        d,
        n * n,
        ibf.invariant_forms()?.iter().map(|g| g.entries().to_vec()).collect(),
    )?;
    let lattices_agree = matched.equals(&all)?;
    Ok(BridgeReport {
        centroid_rank: dual.rank(),
        hom_rank,
        matching,
        forms_invariant,
        lattices_agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::{mat, sl, zero_algebra, zorn};

    #[test]
    fn regular_centroids() {
        let q = Domain::Rationals;
        let s = sl(2, &q).unwrap();
        let c = centroid(&s, Dimodule::Regular).unwrap();
        assert_eq!(c.rank(), 1);
        assert!(c.contains_identity);
        assert!(is_central(&s).unwrap());
        assert!(is_central(&mat(2, &q).unwrap()).unwrap());
        assert!(is_central(&zorn(&q).unwrap()).unwrap());
        let double = s.direct_sum(&s).unwrap();
        assert_eq!(centroid(&double, Dimodule::Regular).unwrap().rank(), 2);
        assert!(!is_central(&double).unwrap());
        let z = zero_algebra(2, &q).unwrap();
        assert_eq!(centroid(&z, Dimodule::Regular).unwrap().rank(), 4);
        assert!(!is_central(&z).unwrap());
    }

    #[test]
    fn bridge_on_small_cases() {
        let q = Domain::Rationals;
        let f2 = Domain::prime_field(2).unwrap();
        for (b, rank) in [
            (sl(2, &q).unwrap(), 1),
            (sl(2, &f2).unwrap(), 4),
            (zero_algebra(2, &q).unwrap(), 4),
        ] {
            let r = centroid_ibf_bridge(&b).unwrap();
            assert!(r.passes());
            assert_eq!(r.centroid_rank, rank);
        }
        assert!(centroid_ibf_bridge(&sl(2, &Domain::Integers).unwrap()).unwrap().passes());
    }
}
