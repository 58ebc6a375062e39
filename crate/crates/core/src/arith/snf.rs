//! Smith normal form over the two supported Euclidean domains.

use num_bigint::BigInt;

use super::domain::{Domain, Scalar};
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// `U·M·V = D` with `D` diagonal, `d₁ | d₂ | …`, and `U`, `V` invertible.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: Matrix,
    pub d: Matrix,
    pub v: Matrix,
    /// Number of nonzero diagonal entries.
    pub rank: usize,
}

impl Smith {
    pub fn diagonal(&self) -> Vec<Scalar> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

/// Column side of a Smith reduction: the nonzero invariant factors and the
/// column transform together with its inverse.
#[derive(Clone, Debug)]
pub(crate) struct ColumnReduction {
    pub factors: Vec<Scalar>,
    pub v: Matrix,
    pub v_inv: Matrix,
}

fn require_pid(d: &Domain) -> Result<()> {
    if d.is_pid() {
        Ok(())
    } else {
        Err(Error::UnsupportedDomain(format!(
            "Smith normal form needs ℤ or a Laurent ring, got {d}"
        )))
    }
}

fn size(d: &Domain, a: &Scalar) -> BigInt {
    d.euclid_size(a).expect("PID element has a Euclidean size")
}

pub fn smith_normal_form(m: &Matrix) -> Result<Smith> {
    let d = m.domain().clone();
    require_pid(&d)?;
    let mut a = m.clone();
    let mut u = Matrix::identity(&d, m.rows());
    let mut v = Matrix::identity(&d, m.cols());
    let mut v_inv = Matrix::identity(&d, m.cols());
    let rank = reduce(&mut a, Some(&mut u), &mut v, &mut v_inv);
    Ok(Smith { u, d: a, v, rank })
}

/// Smith reduction of a relation matrix, tracking only the column side.
/// Rows are first brought to echelon form by unimodular row operations,
/// which leave the column transform untouched.
pub(crate) fn column_reduction(m: &Matrix) -> Result<ColumnReduction> {
    let d = m.domain().clone();
    require_pid(&d)?;
    let rows = row_echelon(&d, m.row_vecs(), m.cols());
    let mut a = Matrix::from_rows_with_width(&d, rows, m.cols())?;
    let mut v = Matrix::identity(&d, m.cols());
    let mut v_inv = Matrix::identity(&d, m.cols());
    let rank = reduce(&mut a, None, &mut v, &mut v_inv);
    let factors = (0..rank).map(|i| a[(i, i)].clone()).collect();
    Ok(ColumnReduction { factors, v, v_inv })
}

/// Echelon form over a Euclidean domain by gcd row operations. Zero rows dropped.
pub(crate) fn row_echelon(d: &Domain, rows: Vec<Vec<Scalar>>, cols: usize) -> Vec<Vec<Scalar>> {
    let mut pending: Vec<Vec<Scalar>> = rows
        .into_iter()
        .filter(|r| r.iter().any(|s| !d.is_zero(s)))
        .collect();
    pending.sort();
    pending.dedup();
    let mut out = Vec::new();
    for col in 0..cols {
        let (mut active, rest): (Vec<_>, Vec<_>) =
            pending.into_iter().partition(|r| !d.is_zero(&r[col]));
        pending = rest;
        while active.len() > 1 {
            let p = (0..active.len())
                .min_by_key(|&i| size(d, &active[i][col]))
                .unwrap();
            let pivot = active.swap_remove(p);
            let mut next = Vec::with_capacity(active.len() + 1);
            for mut r in active {
                let (q, _) = d.div_rem(&r[col], &pivot[col]).unwrap();
                let f = d.neg(&q);
                for (x, y) in r.iter_mut().zip(&pivot) {
                    if !d.is_zero(y) {
                        *x = d.add(x, &d.mul(&f, y));
                    }
                }
                if d.is_zero(&r[col]) {
                    if r.iter().any(|s| !d.is_zero(s)) {
                        pending.push(r);
                    }
                } else {
                    next.push(r);
                }
            }
            next.push(pivot);
            active = next;
        }
        if let Some(r) = active.pop() {
            out.push(r);
        }
        if pending.is_empty() {
            break;
        }
    }
    out
}

/// In-place diagonalization; returns the rank.
fn reduce(a: &mut Matrix, mut u: Option<&mut Matrix>, v: &mut Matrix, v_inv: &mut Matrix) -> usize {
    let d = a.domain().clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut t = 0;
    while t < rows.min(cols) {
        let mut pivot: Option<(usize, usize, BigInt)> = None;
        for i in t..rows {
            for j in t..cols {
                if d.is_zero(&a[(i, j)]) {
                    continue;
                }
                let s = size(&d, &a[(i, j)]);
                if pivot.as_ref().is_none_or(|p| s < p.2) {
                    pivot = Some((i, j, s));
                }
            }
        }
        let Some((pi, pj, _)) = pivot else { break };
        a.swap_rows(t, pi);
        if let Some(u) = u.as_deref_mut() {
            u.swap_rows(t, pi);
        }
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);
        v_inv.swap_rows(t, pj);

        let mut clean = true;
        for i in t + 1..rows {
            if d.is_zero(&a[(i, t)]) {
                continue;
            }
            let (q, r) = d.div_rem(&a[(i, t)], &a[(t, t)]).unwrap();
            let f = d.neg(&q);
            a.add_row_multiple(i, t, &f);
            if let Some(u) = u.as_deref_mut() {
                u.add_row_multiple(i, t, &f);
            }
            clean &= d.is_zero(&r);
        }
        for j in t + 1..cols {
            if d.is_zero(&a[(t, j)]) {
                continue;
            }
            let (q, r) = d.div_rem(&a[(t, j)], &a[(t, t)]).unwrap();
            let f = d.neg(&q);
            a.add_col_multiple(j, t, &f);
            v.add_col_multiple(j, t, &f);
            v_inv.add_row_multiple(t, j, &q);
            clean &= d.is_zero(&r);
        }
        if !clean {
            continue;
        }
        let offender = (t + 1..rows)
            .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
            .find(|&(i, j)| !d.divides(&a[(t, t)], &a[(i, j)]));
        if let Some((i, _)) = offender {
            a.add_row_multiple(t, i, &d.one());
            if let Some(u) = u.as_deref_mut() {
                u.add_row_multiple(t, i, &d.one());
            }
            continue;
        }
        let (_, unit) = d.normalize(&a[(t, t)]);
        a.scale_row(t, &unit);
        if let Some(u) = u.as_deref_mut() {
            u.scale_row(t, &unit);
        }
        t += 1;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &Matrix) -> Smith {
        let s = smith_normal_form(m).unwrap();
        let d = m.domain();
        assert_eq!(s.u.mul(m).unwrap().mul(&s.v).unwrap(), s.d);
        assert!(s.d.is_diagonal());
        assert!(d.is_unit(&s.u.det().unwrap()));
        assert!(d.is_unit(&s.v.det().unwrap()));
        for i in 1..s.rank {
            assert!(d.divides(&s.d[(i - 1, i - 1)], &s.d[(i, i)]));
        }
        s
    }

    #[test]
    fn identity_is_fixed() {
        let z = Domain::Integers;
        let s = check(&Matrix::identity(&z, 3));
        assert!(s.u.is_identity() && s.v.is_identity() && s.d.is_identity());
    }

    #[test]
    fn coprime_diagonal_merges() {
        let z = Domain::Integers;
        let s = check(&Matrix::from_i64(&z, &[&[2, 0], &[0, 3]]));
        assert_eq!(s.diagonal(), vec![z.from_i64(1), z.from_i64(6)]);
    }

    #[test]
    fn laurent_units_absorbed() {
        let l = Domain::laurent(Domain::Rationals).unwrap();
        let t = l.generator().unwrap();
        let t1 = l.sub(&t, &l.one());
        let m = Matrix::from_rows(&l, vec![vec![t.clone(), l.zero()], vec![l.zero(), t1.clone()]]).unwrap();
        let s = check(&m);
        assert_eq!(s.diagonal(), vec![l.one(), t1]);
    }

    #[test]
    fn column_reduction_matches_full() {
        let z = Domain::Integers;
        let m = Matrix::from_i64(&z, &[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16], &[2, 4, 4]]);
        let full = check(&m);
        let cols = column_reduction(&m).unwrap();
        assert_eq!(cols.factors, full.diagonal());
        assert!(cols.v.mul(&cols.v_inv).unwrap().is_identity());
        assert_eq!(full.diagonal(), vec![z.from_i64(2), z.from_i64(6), z.from_i64(12)]);
    }

    #[test]
    fn rejects_fields() {
        let q = Domain::Rationals;
        assert!(matches!(
            smith_normal_form(&Matrix::identity(&q, 2)),
            Err(Error::UnsupportedDomain(_))
        ));
    }
}
