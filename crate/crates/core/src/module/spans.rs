//! Derived, commutator, associator and `ac` spans of an algebra.

use super::algebra::Algebra;
use super::presented::{PresentedModule, Span};
use crate::arith::Scalar;
use crate::error::Result;

fn span(b: &Algebra, rows: Vec<Vec<Scalar>>) -> Result<Span> {
    Span::new(b.domain(), b.rank(), rows)
}

/// `Span{bᵢbⱼ}`.
pub fn derived_span(b: &Algebra) -> Result<Span> {
    let n = b.rank();
    span(b, (0..n * n).map(|k| b.product(k / n, k % n).to_vec()).collect())
}

/// `B·B = B`.
pub fn is_perfect(b: &Algebra) -> Result<bool> {
    derived_span(b)?.is_everything()
}

/// `[B, B]`.
pub fn commutator_span(b: &Algebra) -> Result<Span> {
    let n = b.rank();
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            rows.push(b.commutator(i, j));
        }
    }
    span(b, rows)
}

/// `(B, B, B)`.
pub fn associator_span(b: &Algebra) -> Result<Span> {
    let n = b.rank();
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                rows.push(b.associator(i, j, k));
            }
        }
    }
    span(b, rows)
}

/// `ac(B) = [B, B] + (B, B, B)` together with `AC(B) = B / ac(B)`.
pub fn ac_module(b: &Algebra) -> Result<(Span, PresentedModule)> {
    let mut rows = commutator_span(b)?.generators();
    rows.extend(associator_span(b)?.generators());
    let ac = span(b, rows)?;
    let quotient = ac.quotient().clone();
    Ok((ac, quotient))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Domain;
    use crate::module::constructors::{mat, sl, zero_algebra, zorn};

    #[test]
    fn perfectness() {
        let q = Domain::Rationals;
        assert!(is_perfect(&sl(2, &q).unwrap()).unwrap());
        assert!(!is_perfect(&zero_algebra(2, &q).unwrap()).unwrap());
        assert!(!is_perfect(&sl(2, &Domain::Integers).unwrap()).unwrap());
    }

    #[test]
    fn ac_of_matrices_and_octonions() {
        let q = Domain::Rationals;
        let (ac, quot) = ac_module(&mat(2, &q).unwrap()).unwrap();
        assert_eq!(ac.rank().unwrap(), 3);
        assert_eq!(quot.invariants().unwrap().free_rank, 1);
        let o = zorn(&q).unwrap();
        let (ac, _) = ac_module(&o).unwrap();
        assert_eq!(ac.rank().unwrap(), 7);
        assert!(ac.equals(&commutator_span(&o).unwrap()).unwrap());
        assert!(ac.equals(&associator_span(&o).unwrap()).unwrap());
        let (ac, quot) = ac_module(&zero_algebra(2, &q).unwrap()).unwrap();
        assert_eq!(ac.rank().unwrap(), 0);
        assert_eq!(quot.invariants().unwrap().free_rank, 2);
    }
}
