use std::fmt;
use std::ops::{Index, IndexMut};

use super::domain::{Domain, Scalar};
use super::ring_map::RingMap;
use crate::error::{Error, Result};

/// Dense row-major matrix over a [`Domain`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    domain: Domain,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(domain: &Domain, rows: usize, cols: usize) -> Self {
        Matrix {
            domain: domain.clone(),
            rows,
            cols,
            data: vec![domain.zero(); rows * cols],
        }
    }

    pub fn identity(domain: &Domain, n: usize) -> Self {
        let mut m = Self::zeros(domain, n, n);
        for i in 0..n {
            m[(i, i)] = domain.one();
        }
        m
    }

    pub fn from_rows(domain: &Domain, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_width(domain, rows, c).inspect(|m| {
            debug_assert_eq!(m.rows, r);
        })
    }

    /// Like [`Matrix::from_rows`], but keeps the column count when there are no rows.
    pub fn from_rows_with_width(domain: &Domain, rows: Vec<Vec<Scalar>>, cols: usize) -> Result<Self> {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::ShapeMismatch(format!(
                    "ragged rows: expected {cols} entries, found {}",
                    row.len()
                )));
            }
            for s in row {
                if !domain.contains(&s) {
                    return Err(Error::DomainMismatch {
                        expected: domain.to_string(),
                        found: s.to_string(),
                    });
                }
                data.push(s);
            }
        }
        Ok(Matrix {
            domain: domain.clone(),
            rows: r,
            cols,
            data,
        })
    }

    pub fn from_i64(domain: &Domain, rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|x| domain.from_i64(*x)).collect())
            .collect();
        Self::from_rows(domain, rows).expect("integer rows are well formed")
    }

    /// Single column from a coordinate vector.
    pub fn column(domain: &Domain, v: &[Scalar]) -> Self {
        Matrix {
            domain: domain.clone(),
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Scalar] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|s| self.domain.is_zero(s))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(&self.domain, self.rows)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.domain.is_zero(&self[(i, j)])))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.domain, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    fn check_domain(&self, other: &Matrix) -> Result<()> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch {
                expected: self.domain.to_string(),
                found: other.domain.to_string(),
            });
        }
        Ok(())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_domain(other)?;
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let d = &self.domain;
        let mut out = Self::zeros(d, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if d.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if d.is_zero(b) {
                        continue;
                    }
                    out[(i, j)] = d.add(&out[(i, j)], &d.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |d, a, b| d.add(a, b))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |d, a, b| d.sub(a, b))
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(&Domain, &Scalar, &Scalar) -> Scalar) -> Result<Matrix> {
        self.check_domain(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::ShapeMismatch("matrix sizes differ".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f(&self.domain, a, b))
            .collect();
        Ok(Matrix {
            domain: self.domain.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let data = self.data.iter().map(|a| self.domain.mul(s, a)).collect();
        Matrix {
            domain: self.domain.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Entrywise image under a ring map.
    pub fn map(&self, alpha: &RingMap) -> Result<Matrix> {
        if alpha.source() != &self.domain {
            return Err(Error::UnsupportedMap(format!(
                "map from {} applied to a matrix over {}",
                alpha.source(),
                self.domain
            )));
        }
        Ok(Matrix {
            domain: alpha.target().clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|s| alpha.apply(s)).collect(),
        })
    }

    /// `M·v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        let d = &self.domain;
        (0..self.rows)
            .map(|i| dot(d, self.row(i), v))
            .collect()
    }

    /// `v·M` for a row vector `v`.
    pub fn vec_mul(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.rows);
        let d = &self.domain;
        let mut out = vec![d.zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if d.is_zero(vi) {
                continue;
            }
            axpy(d, &mut out, vi, self.row(i));
        }
        out
    }

    pub fn trace(&self) -> Scalar {
        let d = &self.domain;
        (0..self.rows.min(self.cols)).fold(d.zero(), |acc, i| d.add(&acc, &self[(i, i)]))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[target] += factor · row[source]`.
    pub fn add_row_multiple(&mut self, target: usize, source: usize, factor: &Scalar) {
        if self.domain.is_zero(factor) {
            return;
        }
        let d = self.domain.clone();
        for j in 0..self.cols {
            let s = &self.data[source * self.cols + j];
            if d.is_zero(s) {
                continue;
            }
            let delta = d.mul(factor, s);
            let t = &mut self.data[target * self.cols + j];
            *t = d.add(t, &delta);
        }
    }

    /// `col[target] += factor · col[source]`.
    pub fn add_col_multiple(&mut self, target: usize, source: usize, factor: &Scalar) {
        if self.domain.is_zero(factor) {
            return;
        }
        let d = self.domain.clone();
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + source];
            if d.is_zero(s) {
                continue;
            }
            let delta = d.mul(factor, s);
            let t = &mut self.data[i * self.cols + target];
            *t = d.add(t, &delta);
        }
    }

    pub fn scale_row(&mut self, i: usize, factor: &Scalar) {
        let d = self.domain.clone();
        for s in self.row_mut(i) {
            *s = d.mul(factor, s);
        }
    }

    pub fn scale_col(&mut self, j: usize, factor: &Scalar) {
        let d = self.domain.clone();
        for i in 0..self.rows {
            let s = &mut self.data[i * self.cols + j];
            *s = d.mul(factor, s);
        }
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        self.check_domain(other)?;
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch("vstack of different widths".into()));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix {
            domain: self.domain.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn kronecker(&self, other: &Matrix) -> Result<Matrix> {
        self.check_domain(other)?;
        let d = &self.domain;
        let mut out = Self::zeros(d, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if d.is_zero(a) {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = d.mul(a, &other[(k, l)]);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Determinant. Fraction-free Bareiss elimination over integral domains,
    /// subset expansion (division free) over the remaining rings.
    pub fn det(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("determinant of a non-square matrix".into()));
        }
        if self.domain.is_integral_domain() {
            Ok(self.det_bareiss())
        } else {
            Ok(self.det_expansion())
        }
    }

    fn det_bareiss(&self) -> Scalar {
        let d = &self.domain;
        let n = self.rows;
        if n == 0 {
            return d.one();
        }
        let mut a = self.clone();
        let mut sign_negative = false;
        let mut prev = d.one();
        for k in 0..n - 1 {
            if d.is_zero(&a[(k, k)]) {
                match (k + 1..n).find(|&i| !d.is_zero(&a[(i, k)])) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign_negative = !sign_negative;
                    }
                    None => return d.zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = d.sub(
                        &d.mul(&a[(i, j)], &a[(k, k)]),
                        &d.mul(&a[(i, k)], &a[(k, j)]),
                    );
                    a[(i, j)] = d.div_exact(&num, &prev).expect("Bareiss division is exact");
                }
                a[(i, k)] = d.zero();
            }
            prev = a[(k, k)].clone();
        }
        let det = a[(n - 1, n - 1)].clone();
        if sign_negative {
            d.neg(&det)
        } else {
            det
        }
    }

    /// Laplace expansion along rows, memoized over column subsets.
    fn det_expansion(&self) -> Scalar {
        let d = &self.domain;
        let n = self.rows;
        assert!(n <= 20, "division-free determinant limited to 20x20");
        let mut table = vec![d.zero(); 1 << n];
        table[0] = d.one();
        for mask in 1usize..(1 << n) {
            let row = mask.count_ones() as usize - 1;
            let mut acc = d.zero();
            for col in 0..n {
                if mask & (1 << col) == 0 {
                    continue;
                }
                let term = d.mul(&self[(row, col)], &table[mask ^ (1 << col)]);
                let higher = (mask >> (col + 1)).count_ones();
                acc = if higher % 2 == 0 { d.add(&acc, &term) } else { d.sub(&acc, &term) };
            }
            table[mask] = acc;
        }
        table[(1 << n) - 1].clone()
    }

    /// Two-sided inverse, when the determinant is a unit.
    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("inverse of a non-square matrix".into()));
        }
        let d = &self.domain;
        let n = self.rows;
        if d.is_field() {
            let mut a = self.clone();
            let mut inv = Self::identity(d, n);
            for k in 0..n {
                let p = (k..n)
                    .find(|&i| !d.is_zero(&a[(i, k)]))
                    .ok_or_else(|| Error::NotInvertible(d.to_string()))?;
                a.swap_rows(k, p);
                inv.swap_rows(k, p);
                let pinv = d.inv(&a[(k, k)]).unwrap();
                a.scale_row(k, &pinv);
                inv.scale_row(k, &pinv);
                for i in 0..n {
                    if i != k && !d.is_zero(&a[(i, k)]) {
                        let f = d.neg(&a[(i, k)]);
                        a.add_row_multiple(i, k, &f);
                        inv.add_row_multiple(i, k, &f);
                    }
                }
            }
            return Ok(inv);
        }
        if d.is_pid() {
            let snf = super::snf::smith_normal_form(self)?;
            if snf.rank < n || !(0..n).all(|i| d.is_unit(&snf.d[(i, i)])) {
                return Err(Error::NotInvertible(d.to_string()));
            }
            // U·M·V = D with D a diagonal of units, so M⁻¹ = V·D⁻¹·U.
            let mut dinv = Self::zeros(d, n, n);
            for i in 0..n {
                dinv[(i, i)] = d.inv(&snf.d[(i, i)]).unwrap();
            }
            return snf.v.mul(&dinv)?.mul(&snf.u);
        }
        let det = self.det()?;
        let det_inv = d.inv(&det).ok_or_else(|| Error::NotInvertible(d.to_string()))?;
        let mut adj = Self::zeros(d, n, n);
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor(i, j).det()?;
                let c = if (i + j) % 2 == 0 { minor } else { d.neg(&minor) };
                adj[(j, i)] = d.mul(&c, &det_inv);
            }
        }
        Ok(adj)
    }

    fn minor(&self, row: usize, col: usize) -> Matrix {
        let rows = (0..self.rows)
            .filter(|&i| i != row)
            .map(|i| {
                (0..self.cols)
                    .filter(|&j| j != col)
                    .map(|j| self[(i, j)].clone())
                    .collect()
            })
            .collect();
        Self::from_rows_with_width(&self.domain, rows, self.cols.saturating_sub(1)).unwrap()
    }

    /// Finite exponential `Σ Aᵏ/k!` of a nilpotent matrix; needs `k!` invertible.
    pub fn exp_nilpotent(&self) -> Result<Matrix> {
        let d = &self.domain;
        let n = self.rows;
        let mut out = Self::identity(d, n);
        let mut power = Self::identity(d, n);
        for k in 1..=n {
            power = power.mul(self)?;
            if power.is_zero() {
                return Ok(out);
            }
            let fact = (1..=k as i64).product::<i64>();
            let inv = d
                .inv(&d.from_i64(fact))
                .ok_or_else(|| Error::NotInvertible(format!("{fact} in {d}")))?;
            out = out.add(&power.scale(&inv))?;
        }
        if power.mul(self)?.is_zero() || power.is_zero() {
            Ok(out)
        } else {
            Err(Error::ShapeMismatch("matrix is not nilpotent".into()))
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;

    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub fn dot(d: &Domain, a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).fold(d.zero(), |acc, (x, y)| {
        if d.is_zero(x) || d.is_zero(y) {
            acc
        } else {
            d.add(&acc, &d.mul(x, y))
        }
    })
}

/// `acc += factor · v`.
pub fn axpy(d: &Domain, acc: &mut [Scalar], factor: &Scalar, v: &[Scalar]) {
    for (a, x) in acc.iter_mut().zip(v) {
        if !d.is_zero(x) {
            *a = d.add(a, &d.mul(factor, x));
        }
    }
}

pub fn vec_sub(d: &Domain, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| d.sub(x, y)).collect()
}

pub fn vec_is_zero(d: &Domain, v: &[Scalar]) -> bool {
    v.iter().all(|s| d.is_zero(s))
}

pub fn unit_vector(d: &Domain, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![d.zero(); n];
    v[i] = d.one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinants_agree_across_methods() {
        let z = Domain::Integers;
        let m = Matrix::from_i64(&z, &[&[2, -1, 0, 3], &[1, 4, 2, 0], &[0, 5, -3, 1], &[7, 0, 1, 1]]);
        assert_eq!(m.det_bareiss(), m.det_expansion());
        let g = Matrix::from_i64(&z, &[&[0, 0, 1], &[0, 2, 0], &[1, 0, 0]]);
        assert_eq!(g.det().unwrap(), z.from_i64(-2));
    }

    #[test]
    fn determinant_over_composite_modulus() {
        let z6 = Domain::integers_mod(6).unwrap();
        let m = Matrix::from_i64(&z6, &[&[2, 3], &[3, 2]]);
        // 4 - 9 = -5 = 1 mod 6
        assert_eq!(m.det().unwrap(), z6.from_i64(1));
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
    }

    #[test]
    fn inverses() {
        let q = Domain::Rationals;
        let m = Matrix::from_i64(&q, &[&[0, 2], &[1, 0]]);
        assert!(m.mul(&m.inverse().unwrap()).unwrap().is_identity());
        let z = Domain::Integers;
        let u = Matrix::from_i64(&z, &[&[2, 1], &[5, 3]]);
        assert!(u.mul(&u.inverse().unwrap()).unwrap().is_identity());
        let s = Matrix::from_i64(&z, &[&[2, 0], &[0, 1]]);
        assert!(s.inverse().is_err());
    }

    #[test]
    fn nilpotent_exponential() {
        let q = Domain::Rationals;
        let n = Matrix::from_i64(&q, &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let e = n.exp_nilpotent().unwrap();
        let half = q.inv(&q.from_i64(2)).unwrap();
        assert_eq!(e[(0, 2)], half);
        assert_eq!(e[(0, 1)], q.one());
    }
}
