//! Kernels, ranks, spans and linear solves.

use super::domain::{Domain, Scalar};
use super::matrix::{axpy, vec_is_zero, Matrix};
use super::snf::{column_reduction, smith_normal_form};
use crate::error::{Error, Result};

/// Incrementally built, fully reduced row echelon basis over a field.
///
/// Pivot columns are chosen by an explicit column order, so callers control
/// which coordinates get eliminated first.
#[derive(Clone, Debug)]
pub struct Echelon {
    domain: Domain,
    width: usize,
    order: Vec<usize>,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(domain: &Domain, width: usize) -> Result<Self> {
        Self::with_order(domain, (0..width).collect())
    }

    /// `order` lists every column once, most eager pivot first.
    pub fn with_order(domain: &Domain, order: Vec<usize>) -> Result<Self> {
        if !domain.is_field() {
            return Err(Error::UnsupportedDomain(format!("echelon forms need a field, got {domain}")));
        }
        Ok(Echelon {
            domain: domain.clone(),
            width: order.len(),
            order,
            rows: Vec::new(),
            pivots: Vec::new(),
        })
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Remainder of `v` after eliminating every pivot coordinate.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let d = &self.domain;
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !d.is_zero(&out[p]) {
                let f = d.neg(&out[p]);
                axpy(d, &mut out, &f, row);
            }
        }
        out
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        vec_is_zero(&self.domain, &self.reduce(v))
    }

    /// Adds `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let d = self.domain.clone();
        let mut r = self.reduce(v);
        let Some(&p) = self.order.iter().find(|&&c| !d.is_zero(&r[c])) else {
            return false;
        };
        let inv = d.inv(&r[p]).unwrap();
        for s in r.iter_mut() {
            *s = d.mul(s, &inv);
        }
        for row in &mut self.rows {
            if !d.is_zero(&row[p]) {
                let f = d.neg(&row[p]);
                axpy(&d, row, &f, &r);
            }
        }
        self.rows.push(r);
        self.pivots.push(p);
        true
    }

    /// Coefficients `c` with `Σ cᵢ·rowᵢ = v`, if `v` lies in the span.
    pub fn express(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }
}

/// Reduced row echelon form over a field; returns the nonzero rows and pivots.
pub fn rref(m: &Matrix) -> Result<(Vec<Vec<Scalar>>, Vec<usize>)> {
    let mut e = Echelon::new(m.domain(), m.cols())?;
    for i in 0..m.rows() {
        e.insert(m.row(i));
    }
    let mut pairs: Vec<(usize, Vec<Scalar>)> = e.pivots.into_iter().zip(e.rows).collect();
    pairs.sort_by_key(|(p, _)| *p);
    let pivots = pairs.iter().map(|(p, _)| *p).collect();
    Ok((pairs.into_iter().map(|(_, r)| r).collect(), pivots))
}

/// Basis of `{v : M·v = 0}` and the rank of `M`.
///
/// Over ℤ and Laurent rings the basis spans the saturated kernel lattice.
pub fn kernel_and_rank(m: &Matrix) -> Result<(Vec<Vec<Scalar>>, usize)> {
    let d = m.domain();
    if d.is_field() {
        let (rows, pivots) = rref(m)?;
        let mut basis = Vec::new();
        for free in (0..m.cols()).filter(|c| !pivots.contains(c)) {
            let mut v = vec![d.zero(); m.cols()];
            v[free] = d.one();
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = d.neg(&row[free]);
            }
            basis.push(v);
        }
        return Ok((basis, pivots.len()));
    }
    if d.is_pid() {
        let red = column_reduction(m)?;
        let rank = red.factors.len();
        let basis = (rank..m.cols()).map(|j| red.v.col(j)).collect();
        return Ok((basis, rank));
    }
    Err(Error::UnsupportedDomain(format!("kernels are not computed over {d}")))
}

/// Basis of `{x : x·M = 0}`.
pub fn left_kernel(m: &Matrix) -> Result<Vec<Vec<Scalar>>> {
    Ok(kernel_and_rank(&m.transpose())?.0)
}

pub fn rank(m: &Matrix) -> Result<usize> {
    Ok(kernel_and_rank(m)?.1)
}

/// Some `x` with `x·M = b`, over a field or a PID.
pub fn solve_left(m: &Matrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    Ok(solve_left_many(m, &[b.to_vec()])?.pop().unwrap())
}

/// [`solve_left`] for several right-hand sides, sharing one factorization.
pub fn solve_left_many(m: &Matrix, bs: &[Vec<Scalar>]) -> Result<Vec<Option<Vec<Scalar>>>> {
    let d = m.domain();
    if bs.iter().any(|b| b.len() != m.cols()) {
        return Err(Error::ShapeMismatch("right-hand side has the wrong length".into()));
    }
    if d.is_field() {
        // Track combinations of the original rows alongside the echelon rows.
        let n = m.rows();
        let mut e = Echelon::with_order(d, (0..m.cols() + n).collect())?;
        for i in 0..n {
            let mut r = m.row(i).to_vec();
            r.extend((0..n).map(|j| if i == j { d.one() } else { d.zero() }));
            e.insert(&r);
        }
        let solve = |b: &Vec<Scalar>| {
            let mut target = b.clone();
            target.extend(std::iter::repeat_n(d.zero(), n));
            let mut combo = vec![d.zero(); n];
            for (row, &p) in e.rows.iter().zip(&e.pivots) {
                if p >= m.cols() || d.is_zero(&target[p]) {
                    continue;
                }
                let f = target[p].clone();
                axpy(d, &mut target, &d.neg(&f), row);
                axpy(d, &mut combo, &f, &row[m.cols()..]);
            }
            vec_is_zero(d, &target[..m.cols()]).then_some(combo)
        };
        return Ok(bs.iter().map(solve).collect());
    }
    if d.is_pid() {
        let s = smith_normal_form(m)?;
        // x·U⁻¹·D = b·V
        let solve = |b: &Vec<Scalar>| {
            let c = s.v.vec_mul(b);
            let mut z = vec![d.zero(); m.rows()];
            for (j, cj) in c.iter().enumerate() {
                if j < s.rank {
                    z[j] = d.div_exact(cj, &s.d[(j, j)])?;
                } else if !d.is_zero(cj) {
                    return None;
                }
            }
            Some(s.u.vec_mul(&z))
        };
        return Ok(bs.iter().map(solve).collect());
    }
    Err(Error::UnsupportedDomain(format!("linear solves are not supported over {d}")))
}

/// Some `x` with `M·x = b`.
pub fn solve_right(m: &Matrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    solve_left(&m.transpose(), b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_examples() {
        let q = Domain::Rationals;
        let (k, r) = kernel_and_rank(&Matrix::zeros(&q, 2, 2)).unwrap();
        assert_eq!((k.len(), r), (2, 0));
        let f5 = Domain::prime_field(5).unwrap();
        let (k, r) = kernel_and_rank(&Matrix::identity(&f5, 4)).unwrap();
        assert_eq!((k.len(), r), (0, 4));
        let m = Matrix::from_i64(&q, &[&[1, 2], &[2, 4]]);
        let (k, r) = kernel_and_rank(&m).unwrap();
        assert_eq!(r, 1);
        let mut e = Echelon::new(&q, 2).unwrap();
        e.insert(&k[0]);
        assert!(e.contains(&[q.from_i64(2), q.from_i64(-1)]));
    }

    #[test]
    fn composite_modulus_rejected() {
        let z6 = Domain::integers_mod(6).unwrap();
        assert!(matches!(
            kernel_and_rank(&Matrix::identity(&z6, 2)),
            Err(Error::UnsupportedDomain(_))
        ));
    }

    #[test]
    fn integer_kernel_is_saturated() {
        let z = Domain::Integers;
        let m = Matrix::from_i64(&z, &[&[2, 4]]);
        let (k, r) = kernel_and_rank(&m).unwrap();
        assert_eq!(r, 1);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert!(vec_is_zero(&z, &m.mul_vec(v)));
        // (2, -1) up to sign
        assert!(v == &vec![z.from_i64(2), z.from_i64(-1)] || v == &vec![z.from_i64(-2), z.from_i64(1)]);
    }

    #[test]
    fn solves() {
        let z = Domain::Integers;
        let m = Matrix::from_i64(&z, &[&[2, 0], &[0, 3], &[1, 1]]);
        let x = solve_left(&m, &[z.from_i64(5), z.from_i64(4)]).unwrap().unwrap();
        assert_eq!(m.vec_mul(&x), vec![z.from_i64(5), z.from_i64(4)]);
        let two = Matrix::from_i64(&z, &[&[2, 0], &[0, 2]]);
        assert!(solve_left(&two, &[z.from_i64(1), z.from_i64(0)]).unwrap().is_none());
        let q = Domain::Rationals;
        let mq = Matrix::from_i64(&q, &[&[1, 2], &[3, 4]]);
        let y = solve_right(&mq, &[q.from_i64(1), q.from_i64(1)]).unwrap().unwrap();
        assert_eq!(mq.mul_vec(&y), vec![q.from_i64(1), q.from_i64(1)]);
    }
}
