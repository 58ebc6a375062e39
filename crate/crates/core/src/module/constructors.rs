//! Named algebras and their matrix realizations.

use super::algebra::{Algebra, AlgebraKind};
use crate::arith::matrix::unit_vector;
use crate::arith::{Domain, Matrix, Scalar};
use crate::error::{Error, Result};

fn elementary(d: &Domain, n: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(d, n, n);
    m[(i, j)] = d.one();
    m
}

fn sl_indices(n: usize) -> (Vec<(usize, usize)>, Vec<(usize, usize)>) {
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i < j {
                upper.push((i, j));
            } else if i > j {
                lower.push((i, j));
            }
        }
    }
    (upper, lower)
}

fn sl_names(n: usize) -> Vec<String> {
    if n == 2 {
        return vec!["e".into(), "h".into(), "f".into()];
    }
    let (upper, lower) = sl_indices(n);
    let mut names: Vec<String> = upper.iter().map(|(i, j)| format!("E{}{}", i + 1, j + 1)).collect();
    names.extend((0..n - 1).map(|i| format!("H{}", i + 1)));
    names.extend(lower.iter().map(|(i, j)| format!("E{}{}", i + 1, j + 1)));
    names
}

/// Basis matrices of a matrix-realized algebra, in basis order.
pub fn basis_matrices(kind: &AlgebraKind, d: &Domain) -> Result<Vec<Matrix>> {
    match *kind {
        AlgebraKind::Sl(n) => {
            let (upper, lower) = sl_indices(n);
            let mut out: Vec<Matrix> = upper.iter().map(|&(i, j)| elementary(d, n, i, j)).collect();
            for i in 0..n - 1 {
                out.push(elementary(d, n, i, i).sub(&elementary(d, n, i + 1, i + 1))?);
            }
            out.extend(lower.iter().map(|&(i, j)| elementary(d, n, i, j)));
            Ok(out)
        }
        AlgebraKind::Mat(n) => Ok((0..n * n).map(|k| elementary(d, n, k / n, k % n)).collect()),
        _ => Err(Error::ShapeMismatch(format!("{kind:?} has no matrix realization"))),
    }
}

/// The matrix `Σ cᵢ·Bᵢ`.
pub fn to_matrix(kind: &AlgebraKind, d: &Domain, coords: &[Scalar]) -> Result<Matrix> {
    let basis = basis_matrices(kind, d)?;
    let n = basis[0].rows();
    let mut acc = Matrix::zeros(d, n, n);
    for (c, b) in coords.iter().zip(&basis) {
        if !d.is_zero(c) {
            acc = acc.add(&b.scale(c))?;
        }
    }
    Ok(acc)
}

/// Coordinates of a matrix in the realization basis.
pub fn from_matrix(kind: &AlgebraKind, x: &Matrix) -> Result<Vec<Scalar>> {
    let d = x.domain();
    match *kind {
        AlgebraKind::Mat(n) if x.rows() == n && x.cols() == n => Ok(x.entries().to_vec()),
        AlgebraKind::Sl(n) if x.rows() == n && x.cols() == n => {
            if !d.is_zero(&x.trace()) {
                return Err(Error::ShapeMismatch("matrix is not trace-free".into()));
            }
            let (upper, lower) = sl_indices(n);
            let mut out: Vec<Scalar> = upper.iter().map(|&(i, j)| x[(i, j)].clone()).collect();
            let mut running = d.zero();
            for i in 0..n - 1 {
                running = d.add(&running, &x[(i, i)]);
                out.push(running.clone());
            }
            out.extend(lower.iter().map(|&(i, j)| x[(i, j)].clone()));
            Ok(out)
        }
        _ => Err(Error::ShapeMismatch(format!("cannot read a {}x{} matrix as {kind:?}", x.rows(), x.cols()))),
    }
}

fn from_realization(kind: AlgebraKind, d: &Domain, names: Vec<String>, lie: bool) -> Result<Algebra> {
    let basis = basis_matrices(&kind, d)?;
    let mut products = Vec::with_capacity(basis.len() * basis.len());
    for a in &basis {
        for b in &basis {
            let p = if lie { a.mul(b)?.sub(&b.mul(a)?)? } else { a.mul(b)? };
            products.push(from_matrix(&kind, &p)?);
        }
    }
    let unit = match kind {
        AlgebraKind::Mat(n) => Some(from_matrix(&kind, &Matrix::identity(d, n))?),
        _ => None,
    };
    Ok(Algebra::new(d, names, products, unit)?.with_kind(kind))
}

/// `sl(n)` with basis: upper `Eᵢⱼ`, then `Hᵢ = Eᵢᵢ − Eᵢ₊₁,ᵢ₊₁`, then lower `Eᵢⱼ`.
/// For `n = 2` this is `(e, h, f)`.
pub fn sl(n: usize, d: &Domain) -> Result<Algebra> {
    if n < 2 {
        return Err(Error::BadSpec("sl(n) needs n >= 2".into()));
    }
    from_realization(AlgebraKind::Sl(n), d, sl_names(n), true)
}

/// Full matrix algebra with basis `Eᵢⱼ` in row-major order.
pub fn mat(n: usize, d: &Domain) -> Result<Algebra> {
    if n < 1 {
        return Err(Error::BadSpec("mat(n) needs n >= 1".into()));
    }
    let names = (0..n * n).map(|k| format!("E{}{}", k / n + 1, k % n + 1)).collect();
    from_realization(AlgebraKind::Mat(n), d, names, false)
}

pub fn zero_algebra(n: usize, d: &Domain) -> Result<Algebra> {
    if n < 1 {
        return Err(Error::BadSpec("rank must be at least 1".into()));
    }
    let names = (1..=n).map(|i| format!("b{i}")).collect();
    Ok(Algebra::new(d, names, vec![vec![d.zero(); n]; n * n], None)?.with_kind(AlgebraKind::Zero))
}

/// A Zorn vector matrix `[[α₁, u], [x, α₂]]` in coordinates `(α₁, α₂, u, x)`.
struct Zorn<'a> {
    a1: &'a Scalar,
    a2: &'a Scalar,
    u: &'a [Scalar],
    x: &'a [Scalar],
}

impl<'a> Zorn<'a> {
    fn of(c: &'a [Scalar]) -> Self {
        Zorn {
            a1: &c[0],
            a2: &c[1],
            u: &c[2..5],
            x: &c[5..8],
        }
    }
}

fn dot3(d: &Domain, a: &[Scalar], b: &[Scalar]) -> Scalar {
    crate::arith::matrix::dot(d, a, b)
}

fn cross(d: &Domain, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    (0..3)
        .map(|i| {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            d.sub(&d.mul(&a[j], &b[k]), &d.mul(&a[k], &b[j]))
        })
        .collect()
}

fn zorn_product(d: &Domain, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let (p, q) = (Zorn::of(a), Zorn::of(b));
    let top_left = d.sub(&d.mul(p.a1, q.a1), &dot3(d, p.u, q.x));
    let bottom_right = d.sub(&d.mul(p.a2, q.a2), &dot3(d, p.x, q.u));
    let uxv = cross(d, p.x, q.x);
    let xuv = cross(d, p.u, q.u);
    let mut out = vec![top_left, bottom_right];
    for i in 0..3 {
        // α₁v + β₂u + x × y
        let t = d.add(&d.add(&d.mul(p.a1, &q.u[i]), &d.mul(q.a2, &p.u[i])), &uxv[i]);
        out.push(t);
    }
    for i in 0..3 {
        // β₁x + α₂y + u × v
        let t = d.add(&d.add(&d.mul(q.a1, &p.x[i]), &d.mul(p.a2, &q.x[i])), &xuv[i]);
        out.push(t);
    }
    out
}

/// Split octonions on the basis `(e₁, e₂, u₁, u₂, u₃, x₁, x₂, x₃)`.
pub fn zorn(d: &Domain) -> Result<Algebra> {
    let names = ["e1", "e2", "u1", "u2", "u3", "x1", "x2", "x3"].map(String::from).to_vec();
    let mut products = Vec::with_capacity(64);
    for i in 0..8 {
        for j in 0..8 {
            products.push(zorn_product(d, &unit_vector(d, 8, i), &unit_vector(d, 8, j)));
        }
    }
    let mut unit = vec![d.zero(); 8];
    unit[0] = d.one();
    unit[1] = d.one();
    Ok(Algebra::new(d, names, products, Some(unit))?.with_kind(AlgebraKind::Zorn))
}

/// Matrix of `X ↦ g·X·g⁻¹` on a matrix-realized algebra.
pub fn conjugation_map(alg: &Algebra, g: &Matrix) -> Result<Matrix> {
    let g_inv = g.inverse()?;
    let basis = basis_matrices(alg.kind(), alg.domain())?;
    let cols = basis
        .iter()
        .map(|b| from_matrix(alg.kind(), &g.mul(b)?.mul(&g_inv)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(alg.domain(), cols)?.transpose())
}

/// Matrix of `X ↦ −Xᵀ` on `sl(n)`.
pub fn negative_transpose_map(alg: &Algebra) -> Result<Matrix> {
    let d = alg.domain();
    let basis = basis_matrices(alg.kind(), d)?;
    let minus = d.from_i64(-1);
    let cols = basis
        .iter()
        .map(|b| from_matrix(alg.kind(), &b.transpose().scale(&minus)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(d, cols)?.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coords(d: &Domain, v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|x| d.from_i64(*x)).collect()
    }

    #[test]
    fn sl2_brackets() {
        let q = Domain::Rationals;
        let l = sl(2, &q).unwrap();
        assert!(l.is_lie());
        let (e, h, f) = (0, 1, 2);
        assert_eq!(l.product(e, f), coords(&q, &[0, 1, 0]).as_slice());
        assert_eq!(l.product(h, e), coords(&q, &[2, 0, 0]).as_slice());
        assert_eq!(l.product(h, f), coords(&q, &[0, 0, -2]).as_slice());
    }

    #[test]
    fn lie_and_unital_flags() {
        let z = Domain::Integers;
        for n in 2..=3 {
            assert!(sl(n, &z).unwrap().is_lie());
            let m = mat(n, &z).unwrap();
            assert!(m.is_unital() && m.is_associative() && !m.is_lie());
        }
        let o = zorn(&z).unwrap();
        assert!(o.is_unital() && !o.is_associative());
    }

    #[test]
    fn zorn_products() {
        let q = Domain::Rationals;
        let o = zorn(&q).unwrap();
        // uᵢ·xⱼ = −δᵢⱼ e₁ and xᵢ·uⱼ = −δᵢⱼ e₂
        for i in 0..3 {
            for j in 0..3 {
                let delta = if i == j { -1 } else { 0 };
                let mut want = vec![q.zero(); 8];
                want[0] = q.from_i64(delta);
                assert_eq!(o.product(2 + i, 5 + j), want.as_slice());
                let mut want = vec![q.zero(); 8];
                want[1] = q.from_i64(delta);
                assert_eq!(o.product(5 + i, 2 + j), want.as_slice());
            }
        }
        // u₁·u₂ = x₃, x₁·x₂ = u₃
        let mut want = vec![q.zero(); 8];
        want[7] = q.one();
        assert_eq!(o.product(2, 3), want.as_slice());
        let mut want = vec![q.zero(); 8];
        want[4] = q.one();
        assert_eq!(o.product(5, 6), want.as_slice());
    }

    #[test]
    fn realization_round_trip() {
        let z = Domain::Integers;
        let l = sl(3, &z).unwrap();
        let v = coords(&z, &[1, -2, 3, 4, -5, 6, 7, 8]);
        let m = to_matrix(l.kind(), &z, &v).unwrap();
        assert_eq!(from_matrix(l.kind(), &m).unwrap(), v);
        let t = negative_transpose_map(&l).unwrap();
        assert!(l.is_automorphism(&t));
        let g = Matrix::from_i64(&z, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(l.is_automorphism(&conjugation_map(&l, &g).unwrap()));
    }

    #[test]
    fn zero_and_sum() {
        let q = Domain::Rationals;
        let z = zero_algebra(3, &q).unwrap();
        assert!(z.table().is_empty());
        let s = sl(2, &q).unwrap().direct_sum(&sl(2, &q).unwrap()).unwrap();
        assert!(s.is_lie());
        for i in 0..3 {
            for j in 3..6 {
                assert!(s.product(i, j).iter().all(|c| q.is_zero(c)));
            }
        }
    }
}
