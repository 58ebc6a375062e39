//! Coefficient rings and their elements.
//!
//! A [`Domain`] is a ring object: it owns the arithmetic, and [`Scalar`]s are
//! plain payloads that only make sense together with the domain they were
//! produced by. Every payload is kept in a canonical form (reduced fractions,
//! residues in `[0, n)`, Laurent maps without zero coefficients) so structural
//! equality is ring equality.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Element payload. The variant doubles as the domain tag.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Int(BigInt),
    Rat(BigRational),
    /// Residue in `[0, n)` for `PrimeField(n)` and `IntegersMod(n)`.
    Res(u64),
    /// Degree to nonzero coefficient in the base field.
    Laurent(BTreeMap<i64, Scalar>),
    /// `a + b·x` with `x² = d`.
    Quad(Box<Scalar>, Box<Scalar>),
}

/// A computable commutative coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    Integers,
    Rationals,
    PrimeField(u64),
    IntegersMod(u64),
    /// `k[t, t⁻¹]` over a field `k`.
    Laurent(Box<Domain>),
    /// `R[x]/(x² − d)`.
    QuadExt(Box<Domain>, Box<Scalar>),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) || p.is_multiple_of(3) {
        return false;
    }
    let mut i = 5u64;
    while i.saturating_mul(i) <= p {
        if p.is_multiple_of(i) || p.is_multiple_of(i + 2) {
            return false;
        }
        i += 6;
    }
    true
}

fn mod_mul(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn mod_pow(mut a: u64, mut e: u64, n: u64) -> u64 {
    let mut acc = 1 % n;
    a %= n;
    while e > 0 {
        if e & 1 == 1 {
            acc = mod_mul(acc, a, n);
        }
        a = mod_mul(a, a, n);
        e >>= 1;
    }
    acc
}

fn mod_inv(a: u64, n: u64) -> Option<u64> {
    let (mut r0, mut r1) = (n as i128, (a % n) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(n as i128) as u64)
}

/// Tonelli–Shanks; `p` an odd prime and `a` a nonzero residue.
fn mod_sqrt(a: u64, p: u64) -> Option<u64> {
    if p == 2 {
        return Some(a % 2);
    }
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if mod_pow(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while mod_pow(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = mod_pow(z, q, p);
    let mut t = mod_pow(a, q, p);
    let mut r = mod_pow(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mod_mul(tt, tt, p);
            i += 1;
        }
        let b = mod_pow(c, 1 << (m - i - 1), p);
        m = i;
        c = mod_mul(b, b, p);
        t = mod_mul(t, c, p);
        r = mod_mul(r, b, p);
    }
    Some(r)
}

fn big_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

impl Domain {
    pub fn prime_field(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::BadDomain(format!("{p} is not prime")));
        }
        Ok(Domain::PrimeField(p))
    }

    pub fn integers_mod(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadDomain(format!("modulus {n} must be at least 2")));
        }
        Ok(Domain::IntegersMod(n))
    }

    pub fn laurent(base: Domain) -> Result<Self> {
        if !base.is_field() || matches!(base, Domain::QuadExt(..)) {
            return Err(Error::BadDomain(format!(
                "Laurent ring needs a prime or rational base field, got {base}"
            )));
        }
        Ok(Domain::Laurent(Box::new(base)))
    }

    pub fn quad_ext(base: Domain, d: Scalar) -> Result<Self> {
        if !base.contains(&d) {
            return Err(Error::BadDomain(format!("parameter {d} is not an element of {base}")));
        }
        if base.is_zero(&d) {
            return Err(Error::BadDomain("quadratic parameter must be nonzero".into()));
        }
        Ok(Domain::QuadExt(Box::new(base), Box::new(d)))
    }

    /// Base field of a Laurent ring, base ring of a quadratic extension.
    pub fn base(&self) -> Option<&Domain> {
        match self {
            Domain::Laurent(b) | Domain::QuadExt(b, _) => Some(b),
            _ => None,
        }
    }

    pub fn quad_parameter(&self) -> Option<&Scalar> {
        match self {
            Domain::QuadExt(_, d) => Some(d),
            _ => None,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Domain::Integers => Scalar::Int(BigInt::zero()),
            Domain::Rationals => Scalar::Rat(BigRational::zero()),
            Domain::PrimeField(_) | Domain::IntegersMod(_) => Scalar::Res(0),
            Domain::Laurent(_) => Scalar::Laurent(BTreeMap::new()),
            Domain::QuadExt(b, _) => Scalar::Quad(Box::new(b.zero()), Box::new(b.zero())),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        self.from_int(&BigInt::from(n))
    }

    /// Image of an integer under the unique ring map `ℤ → self`.
    pub fn from_int(&self, n: &BigInt) -> Scalar {
        match self {
            Domain::Integers => Scalar::Int(n.clone()),
            Domain::Rationals => Scalar::Rat(BigRational::from_integer(n.clone())),
            Domain::PrimeField(p) | Domain::IntegersMod(p) => {
                Scalar::Res(n.mod_floor(&BigInt::from(*p)).to_u64().unwrap())
            }
            Domain::Laurent(b) => laurent_monomial(b, 0, b.from_int(n)),
            Domain::QuadExt(b, _) => Scalar::Quad(Box::new(b.from_int(n)), Box::new(b.zero())),
        }
    }

    /// Image of a rational number, when every denominator is invertible.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        match self {
            Domain::Rationals => Ok(Scalar::Rat(q.clone())),
            Domain::Laurent(b) => Ok(laurent_monomial(b, 0, b.from_rational(q)?)),
            Domain::QuadExt(b, _) => Ok(Scalar::Quad(
                Box::new(b.from_rational(q)?),
                Box::new(b.zero()),
            )),
            _ => {
                let num = self.from_int(q.numer());
                let den = self.from_int(q.denom());
                let inv = self.inv(&den).ok_or_else(|| {
                    Error::UnsupportedMap(format!("denominator {} is not a unit in {self}", q.denom()))
                })?;
                Ok(self.mul(&num, &inv))
            }
        }
    }

    /// Structural membership: the payload has this domain's shape and is canonical.
    pub fn contains(&self, s: &Scalar) -> bool {
        match (self, s) {
            (Domain::Integers, Scalar::Int(_)) => true,
            (Domain::Rationals, Scalar::Rat(q)) => q.denom().is_positive() && q.numer().gcd(q.denom()).is_one(),
            (Domain::PrimeField(n) | Domain::IntegersMod(n), Scalar::Res(r)) => r < n,
            (Domain::Laurent(b), Scalar::Laurent(m)) => {
                m.values().all(|c| b.contains(c) && !b.is_zero(c))
            }
            (Domain::QuadExt(b, _), Scalar::Quad(x, y)) => b.contains(x) && b.contains(y),
            _ => false,
        }
    }

    pub fn is_zero(&self, s: &Scalar) -> bool {
        match s {
            Scalar::Int(n) => n.is_zero(),
            Scalar::Rat(q) => q.is_zero(),
            Scalar::Res(r) => *r == 0,
            Scalar::Laurent(m) => m.is_empty(),
            Scalar::Quad(a, b) => {
                let base = self.base().expect("quadratic payload outside QuadExt");
                base.is_zero(a) && base.is_zero(b)
            }
        }
    }

    pub fn is_one(&self, s: &Scalar) -> bool {
        *s == self.one()
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (_, Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x + y),
            (_, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (Domain::PrimeField(n) | Domain::IntegersMod(n), Scalar::Res(x), Scalar::Res(y)) => {
                Scalar::Res(((*x as u128 + *y as u128) % *n as u128) as u64)
            }
            (Domain::Laurent(base), Scalar::Laurent(x), Scalar::Laurent(y)) => {
                let mut out = x.clone();
                for (deg, c) in y {
                    laurent_accumulate(base, &mut out, *deg, c);
                }
                Scalar::Laurent(out)
            }
            (Domain::QuadExt(base, _), Scalar::Quad(a0, a1), Scalar::Quad(b0, b1)) => Scalar::Quad(
                Box::new(base.add(a0, b0)),
                Box::new(base.add(a1, b1)),
            ),
            _ => panic!("scalar {a} or {b} does not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (_, Scalar::Int(x)) => Scalar::Int(-x),
            (_, Scalar::Rat(x)) => Scalar::Rat(-x),
            (Domain::PrimeField(n) | Domain::IntegersMod(n), Scalar::Res(x)) => {
                Scalar::Res(if *x == 0 { 0 } else { n - x })
            }
            (Domain::Laurent(base), Scalar::Laurent(m)) => {
                Scalar::Laurent(m.iter().map(|(d, c)| (*d, base.neg(c))).collect())
            }
            (Domain::QuadExt(base, _), Scalar::Quad(x, y)) => {
                Scalar::Quad(Box::new(base.neg(x)), Box::new(base.neg(y)))
            }
            _ => panic!("scalar {a} does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (_, Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x * y),
            (_, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (Domain::PrimeField(n) | Domain::IntegersMod(n), Scalar::Res(x), Scalar::Res(y)) => {
                Scalar::Res(mod_mul(*x, *y, *n))
            }
            (Domain::Laurent(base), Scalar::Laurent(x), Scalar::Laurent(y)) => {
                let mut out = BTreeMap::new();
                for (dx, cx) in x {
                    for (dy, cy) in y {
                        laurent_accumulate(base, &mut out, dx + dy, &base.mul(cx, cy));
                    }
                }
                Scalar::Laurent(out)
            }
            (Domain::QuadExt(base, d), Scalar::Quad(a0, a1), Scalar::Quad(b0, b1)) => {
                let re = base.add(&base.mul(a0, b0), &base.mul(d, &base.mul(a1, b1)));
                let im = base.add(&base.mul(a0, b1), &base.mul(a1, b0));
                Scalar::Quad(Box::new(re), Box::new(im))
            }
            _ => panic!("scalar {a} or {b} does not belong to {self}"),
        }
    }

    pub fn pow(&self, a: &Scalar, mut e: u64) -> Scalar {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Integer powers, negative exponents through the inverse.
    pub fn pow_signed(&self, a: &Scalar, e: i64) -> Option<Scalar> {
        if e >= 0 {
            Some(self.pow(a, e as u64))
        } else {
            self.inv(a).map(|i| self.pow(&i, e.unsigned_abs()))
        }
    }

    /// `a + b·x ↦ a − b·x` on a quadratic extension.
    pub fn conjugate(&self, a: &Scalar) -> Result<Scalar> {
        match (self, a) {
            (Domain::QuadExt(base, _), Scalar::Quad(x, y)) => {
                Ok(Scalar::Quad(x.clone(), Box::new(base.neg(y))))
            }
            _ => Err(Error::UnsupportedMap(format!("no conjugation on {self}"))),
        }
    }

    /// `a² − d·b²` for `a + b·x`.
    pub fn norm(&self, a: &Scalar) -> Result<Scalar> {
        match (self, a) {
            (Domain::QuadExt(base, d), Scalar::Quad(x, y)) => {
                Ok(base.sub(&base.mul(x, x), &base.mul(d, &base.mul(y, y))))
            }
            _ => Err(Error::UnsupportedMap(format!("no norm on {self}"))),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        match (self, a) {
            (Domain::Integers, Scalar::Int(x)) => {
                (x.abs().is_one()).then(|| Scalar::Int(x.clone()))
            }
            (Domain::Rationals, Scalar::Rat(x)) => (!x.is_zero()).then(|| Scalar::Rat(x.recip())),
            (Domain::PrimeField(n) | Domain::IntegersMod(n), Scalar::Res(x)) => {
                mod_inv(*x, *n).map(Scalar::Res)
            }
            (Domain::Laurent(base), Scalar::Laurent(m)) => {
                if m.len() != 1 {
                    return None;
                }
                let (deg, c) = m.iter().next().unwrap();
                Some(laurent_monomial(base, -deg, base.inv(c)?))
            }
            (Domain::QuadExt(base, _), Scalar::Quad(x, y)) => {
                let n = self.norm(a).ok()?;
                let ninv = base.inv(&n)?;
                Some(Scalar::Quad(
                    Box::new(base.mul(x, &ninv)),
                    Box::new(base.neg(&base.mul(y, &ninv))),
                ))
            }
            _ => None,
        }
    }

    pub fn is_unit(&self, a: &Scalar) -> bool {
        self.inv(a).is_some()
    }

    /// True iff some nonzero `y` has `a·y = 0` (zero counts as a zero divisor).
    pub fn is_zero_divisor(&self, a: &Scalar) -> bool {
        match (self, a) {
            (Domain::IntegersMod(n), Scalar::Res(x)) => x.gcd(n) != 1,
            (Domain::QuadExt(base, _), _) => base.is_zero_divisor(&self.norm(a).unwrap()),
            _ => self.is_zero(a),
        }
    }

    pub fn is_field(&self) -> bool {
        match self {
            Domain::Rationals | Domain::PrimeField(_) => true,
            Domain::QuadExt(b, d) => b.is_field() && b.sqrt(d).is_none(),
            _ => false,
        }
    }

    /// The two principal ideal domains with Euclidean division: ℤ and `k[t, t⁻¹]`.
    pub fn is_pid(&self) -> bool {
        matches!(self, Domain::Integers | Domain::Laurent(_))
    }

    pub fn is_integral_domain(&self) -> bool {
        self.is_field() || self.is_pid()
    }

    /// A square root inside this ring, if one exists and can be found.
    pub fn sqrt(&self, a: &Scalar) -> Option<Scalar> {
        match (self, a) {
            (Domain::Integers, Scalar::Int(x)) => big_sqrt_exact(x).map(Scalar::Int),
            (Domain::Rationals, Scalar::Rat(q)) => {
                let n = big_sqrt_exact(q.numer())?;
                let d = big_sqrt_exact(q.denom())?;
                Some(Scalar::Rat(BigRational::new(n, d)))
            }
            (Domain::PrimeField(p), Scalar::Res(x)) => mod_sqrt(*x, *p).map(Scalar::Res),
            (Domain::IntegersMod(n), Scalar::Res(x)) if *n <= 1 << 20 => {
                (0..*n).find(|r| mod_mul(*r, *r, *n) == *x).map(Scalar::Res)
            }
            (Domain::Laurent(base), Scalar::Laurent(m)) => laurent_sqrt(base, m),
            _ => None,
        }
    }

    /// Euclidean size: absolute value over ℤ, width over `k[t, t⁻¹]`, 0 for nonzero field elements.
    pub fn euclid_size(&self, a: &Scalar) -> Result<BigInt> {
        match (self, a) {
            (Domain::Integers, Scalar::Int(x)) => Ok(x.abs()),
            (Domain::Laurent(_), Scalar::Laurent(m)) => Ok(BigInt::from(laurent_width(m))),
            _ if self.is_field() => Ok(BigInt::zero()),
            _ => Err(Error::UnsupportedDomain(format!("{self} has no Euclidean division"))),
        }
    }

    /// `a = q·b + r` with `r = 0` or `size(r) < size(b)`.
    pub fn div_rem(&self, a: &Scalar, b: &Scalar) -> Result<(Scalar, Scalar)> {
        if self.is_zero(b) {
            return Err(Error::NotInvertible(format!("division by zero in {self}")));
        }
        match (self, a, b) {
            (Domain::Integers, Scalar::Int(x), Scalar::Int(y)) => {
                let (q, r) = x.div_rem(y);
                Ok((Scalar::Int(q), Scalar::Int(r)))
            }
            (Domain::Laurent(base), Scalar::Laurent(x), Scalar::Laurent(y)) => {
                if x.is_empty() {
                    return Ok((self.zero(), self.zero()));
                }
                let la = *x.keys().next().unwrap();
                let lb = *y.keys().next().unwrap();
                let (q, r) = poly_div_rem(base, &laurent_shift(x, -la), &laurent_shift(y, -lb));
                Ok((
                    Scalar::Laurent(laurent_shift(&q, la - lb)),
                    Scalar::Laurent(laurent_shift(&r, la)),
                ))
            }
            _ if self.is_field() => Ok((self.mul(a, &self.inv(b).unwrap()), self.zero())),
            _ => Err(Error::UnsupportedDomain(format!("{self} has no Euclidean division"))),
        }
    }

    /// `a / b` when `b` divides `a`.
    pub fn div_exact(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        if self.is_zero(b) {
            return None;
        }
        if let Some(inv) = self.inv(b) {
            return Some(self.mul(a, &inv));
        }
        if self.is_pid() {
            let (q, r) = self.div_rem(a, b).ok()?;
            return self.is_zero(&r).then_some(q);
        }
        None
    }

    pub fn divides(&self, d: &Scalar, a: &Scalar) -> bool {
        if self.is_zero(d) {
            return self.is_zero(a);
        }
        self.div_exact(a, d).is_some()
    }

    /// Unit normal form: returns `(u·a, u)` with `u` a unit. Nonnegative over ℤ;
    /// lowest term constant and monic over `k[t, t⁻¹]`; 1 over a field.
    pub fn normalize(&self, a: &Scalar) -> (Scalar, Scalar) {
        if self.is_zero(a) {
            return (a.clone(), self.one());
        }
        match (self, a) {
            (Domain::Integers, Scalar::Int(x)) => {
                let u = if x.is_negative() { -1 } else { 1 };
                (Scalar::Int(x * u), self.from_i64(u))
            }
            (Domain::Laurent(base), Scalar::Laurent(m)) => {
                let low = *m.keys().next().unwrap();
                let lead = m.values().next_back().unwrap();
                let u = laurent_monomial(base, -low, base.inv(lead).unwrap());
                (self.mul(a, &u), u)
            }
            _ if self.is_field() => (self.one(), self.inv(a).unwrap()),
            _ => (a.clone(), self.one()),
        }
    }

    /// Normalized greatest common divisor over a Euclidean domain.
    pub fn gcd(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !self.is_zero(&y) {
            let (_, r) = self.div_rem(&x, &y)?;
            x = y;
            y = r;
        }
        Ok(self.normalize(&x).0)
    }

    /// Canonical representative of `a` modulo `m`: in `[0, |m|)` over ℤ, a polynomial
    /// of degree below the width of `m` over `k[t, t⁻¹]`. Zero modulo a unit; `a` modulo 0.
    pub fn residue(&self, a: &Scalar, m: &Scalar) -> Result<Scalar> {
        if self.is_zero(m) {
            return Ok(a.clone());
        }
        if self.is_unit(m) {
            return Ok(self.zero());
        }
        match (self, a, m) {
            (Domain::Integers, Scalar::Int(x), Scalar::Int(n)) => Ok(Scalar::Int(x.mod_floor(&n.abs()))),
            (Domain::Laurent(base), Scalar::Laurent(x), _) => {
                let (mnorm, _) = self.normalize(m);
                let Scalar::Laurent(b) = &mnorm else { unreachable!() };
                let Some(&low) = x.keys().next() else {
                    return Ok(self.zero());
                };
                let (_, mut r) = poly_div_rem(base, &laurent_shift(x, -low), b);
                let b0_inv = base.inv(&b[&0]).unwrap();
                for _ in 0..low.unsigned_abs() {
                    if low > 0 {
                        r = laurent_shift(&r, 1);
                        r = poly_div_rem(base, &r, b).1;
                    } else {
                        if let Some(r0) = r.get(&0).cloned() {
                            let f = base.neg(&base.mul(&r0, &b0_inv));
                            for (d, c) in b {
                                laurent_accumulate(base, &mut r, *d, &base.mul(&f, c));
                            }
                        }
                        r = laurent_shift(&r, -1);
                    }
                }
                Ok(Scalar::Laurent(r))
            }
            _ if self.is_field() => Ok(self.zero()),
            _ => Err(Error::UnsupportedDomain(format!("{self} has no canonical residues"))),
        }
    }

    /// Laurent variable `t`, or the adjoined root `x` of a quadratic extension.
    pub fn generator(&self) -> Option<Scalar> {
        match self {
            Domain::Laurent(b) => Some(laurent_monomial(b, 1, b.one())),
            Domain::QuadExt(b, _) => Some(Scalar::Quad(Box::new(b.zero()), Box::new(b.one()))),
            _ => None,
        }
    }

    /// `c·tᵏ` in a Laurent ring.
    pub fn monomial(&self, degree: i64, coeff: Scalar) -> Result<Scalar> {
        match self {
            Domain::Laurent(b) => Ok(laurent_monomial(b, degree, coeff)),
            _ => Err(Error::UnsupportedDomain(format!("{self} is not a Laurent ring"))),
        }
    }

    /// `a + b·x` in a quadratic extension.
    pub fn quad(&self, a: Scalar, b: Scalar) -> Result<Scalar> {
        match self {
            Domain::QuadExt(..) => Ok(Scalar::Quad(Box::new(a), Box::new(b))),
            _ => Err(Error::UnsupportedDomain(format!("{self} is not a quadratic extension"))),
        }
    }

    /// Components `(a, b)` of `a + b·x`.
    pub fn quad_parts<'a>(&self, s: &'a Scalar) -> Result<(&'a Scalar, &'a Scalar)> {
        match s {
            Scalar::Quad(a, b) => Ok((a, b)),
            _ => Err(Error::UnsupportedDomain(format!("{s} is not a quadratic element"))),
        }
    }

    /// Characteristic divides `m`? Used for the `char k ∤ m` checks.
    pub fn is_unit_integer(&self, m: i64) -> bool {
        self.is_unit(&self.from_i64(m))
    }
}

fn laurent_monomial(base: &Domain, degree: i64, coeff: Scalar) -> Scalar {
    let mut m = BTreeMap::new();
    if !base.is_zero(&coeff) {
        m.insert(degree, coeff);
    }
    Scalar::Laurent(m)
}

fn laurent_accumulate(base: &Domain, out: &mut BTreeMap<i64, Scalar>, deg: i64, c: &Scalar) {
    if base.is_zero(c) {
        return;
    }
    let sum = match out.get(&deg) {
        Some(prev) => base.add(prev, c),
        None => c.clone(),
    };
    if base.is_zero(&sum) {
        out.remove(&deg);
    } else {
        out.insert(deg, sum);
    }
}

fn laurent_shift(m: &BTreeMap<i64, Scalar>, by: i64) -> BTreeMap<i64, Scalar> {
    m.iter().map(|(d, c)| (d + by, c.clone())).collect()
}

/// Max degree minus min degree; zero for the zero element.
pub(crate) fn laurent_width(m: &BTreeMap<i64, Scalar>) -> u64 {
    match (m.keys().next(), m.keys().next_back()) {
        (Some(lo), Some(hi)) => (hi - lo) as u64,
        _ => 0,
    }
}

/// Long division of polynomials with nonnegative degrees over a field.
fn poly_div_rem(
    base: &Domain,
    a: &BTreeMap<i64, Scalar>,
    b: &BTreeMap<i64, Scalar>,
) -> (BTreeMap<i64, Scalar>, BTreeMap<i64, Scalar>) {
    let (db, lead) = b.iter().next_back().map(|(d, c)| (*d, c.clone())).unwrap();
    let lead_inv = base.inv(&lead).expect("Laurent base must be a field");
    let mut r = a.clone();
    let mut q = BTreeMap::new();
    while let Some((&dr, cr)) = r.iter().next_back() {
        if dr < db {
            break;
        }
        let factor = base.mul(cr, &lead_inv);
        let shift = dr - db;
        for (d, c) in b {
            laurent_accumulate(base, &mut r, d + shift, &base.neg(&base.mul(&factor, c)));
        }
        q.insert(shift, factor);
    }
    (q, r)
}

fn laurent_sqrt(base: &Domain, m: &BTreeMap<i64, Scalar>) -> Option<Scalar> {
    if m.is_empty() {
        return Some(Scalar::Laurent(BTreeMap::new()));
    }
    let low = *m.keys().next().unwrap();
    let high = *m.keys().next_back().unwrap();
    if low % 2 != 0 || (high - low) % 2 != 0 {
        return None;
    }
    let q = laurent_shift(m, -low);
    let half = (high - low) / 2;
    let r0 = base.sqrt(&q[&0])?;
    let two_r0 = base.add(&r0, &r0);
    let two_r0_inv = base.inv(&two_r0);
    let mut r: Vec<Scalar> = vec![r0];
    for k in 1..=half {
        let mut acc = q.get(&k).cloned().unwrap_or_else(|| base.zero());
        for i in 1..k {
            acc = base.sub(&acc, &base.mul(&r[i as usize], &r[(k - i) as usize]));
        }
        r.push(base.mul(&acc, two_r0_inv.as_ref()?));
    }
    let mut root = BTreeMap::new();
    for (k, c) in r.into_iter().enumerate() {
        laurent_accumulate(base, &mut root, k as i64 + low / 2, &c);
    }
    let candidate = Scalar::Laurent(root);
    let dom = Domain::Laurent(Box::new(base.clone()));
    (dom.mul(&candidate, &candidate) == Scalar::Laurent(m.clone())).then_some(candidate)
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Integers => write!(f, "Z"),
            Domain::Rationals => write!(f, "Q"),
            Domain::PrimeField(p) => write!(f, "GF({p})"),
            Domain::IntegersMod(n) => write!(f, "Z/{n}"),
            Domain::Laurent(b) => write!(f, "{b}[t,t^-1]"),
            Domain::QuadExt(b, d) => write!(f, "{b}[x]/(x^2-({d}))"),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(n) => write!(f, "{n}"),
            Scalar::Rat(q) => write!(f, "{q}"),
            Scalar::Res(r) => write!(f, "{r}"),
            Scalar::Laurent(m) => {
                if m.is_empty() {
                    return write!(f, "0");
                }
                let terms: Vec<String> = m
                    .iter()
                    .map(|(d, c)| match d {
                        0 => format!("{c}"),
                        1 => format!("{c}*t"),
                        _ => format!("{c}*t^{d}"),
                    })
                    .collect();
                write!(f, "{}", terms.join(" + "))
            }
            Scalar::Quad(a, b) => write!(f, "({a}) + ({b})*x"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lau(terms: &[(i64, i64)]) -> Scalar {
        let q = Domain::laurent(Domain::Rationals).unwrap();
        terms.iter().fold(q.zero(), |acc, (d, c)| {
            q.add(&acc, &q.monomial(*d, Domain::Rationals.from_i64(*c)).unwrap())
        })
    }

    #[test]
    fn units() {
        assert!(!Domain::Integers.is_unit(&Domain::Integers.from_i64(2)));
        assert!(Domain::Rationals.is_unit(&Domain::Rationals.from_i64(2)));
        let l = Domain::laurent(Domain::Rationals).unwrap();
        assert!(l.is_unit(&l.monomial(-2, Domain::Rationals.from_i64(3)).unwrap()));
        assert!(!l.is_unit(&lau(&[(0, 1), (1, 1)])));
        let z6 = Domain::integers_mod(6).unwrap();
        assert!(!z6.is_unit(&z6.from_i64(2)));
        assert!(z6.is_unit(&z6.from_i64(5)));
    }

    #[test]
    fn prime_field_rejects_composites() {
        assert!(Domain::prime_field(7).is_ok());
        assert!(matches!(Domain::prime_field(9), Err(Error::BadDomain(_))));
        assert!(Domain::prime_field(1).is_err());
    }

    #[test]
    fn laurent_division_reduces_width() {
        let l = Domain::laurent(Domain::Rationals).unwrap();
        let a = lau(&[(-3, 2), (0, 5), (4, 1)]);
        let b = lau(&[(1, 1), (2, -1), (3, 7)]);
        let (q, r) = l.div_rem(&a, &b).unwrap();
        assert_eq!(l.add(&l.mul(&q, &b), &r), a);
        let Scalar::Laurent(rm) = &r else { panic!() };
        let Scalar::Laurent(bm) = &b else { panic!() };
        assert!(rm.is_empty() || laurent_width(rm) < laurent_width(bm));
    }

    #[test]
    fn laurent_normalization() {
        let l = Domain::laurent(Domain::Rationals).unwrap();
        let (n, u) = l.normalize(&lau(&[(-2, 4), (-1, 2)]));
        assert_eq!(n, lau(&[(0, 2), (1, 1)]));
        assert!(l.is_unit(&u));
        let (m, _) = l.normalize(&lau(&[(5, 4)]));
        assert_eq!(m, l.one());
    }

    #[test]
    fn quadratic_arithmetic() {
        let s = Domain::quad_ext(Domain::Rationals, Domain::Rationals.from_i64(2)).unwrap();
        let x = s.generator().unwrap();
        assert_eq!(s.mul(&x, &x), s.from_i64(2));
        assert!(s.is_field());
        let one_plus_x = s.add(&s.one(), &x);
        let inv = s.inv(&one_plus_x).unwrap();
        assert_eq!(s.mul(&inv, &one_plus_x), s.one());
        let split = Domain::quad_ext(Domain::Rationals, Domain::Rationals.from_i64(9)).unwrap();
        assert!(!split.is_field());
        let y = split.generator().unwrap();
        let zd = split.sub(&y, &split.from_i64(3));
        assert!(split.is_zero_divisor(&zd));
        assert!(!split.is_zero(&zd));
    }

    #[test]
    fn square_roots() {
        assert_eq!(Domain::Integers.sqrt(&Domain::Integers.from_i64(49)), Some(Domain::Integers.from_i64(7)));
        assert_eq!(Domain::Integers.sqrt(&Domain::Integers.from_i64(50)), None);
        let f13 = Domain::prime_field(13).unwrap();
        let r = f13.sqrt(&f13.from_i64(10)).unwrap();
        assert_eq!(f13.mul(&r, &r), f13.from_i64(10));
        assert!(f13.sqrt(&f13.from_i64(2)).is_none());
        let l = Domain::laurent(Domain::Rationals).unwrap();
        let p = lau(&[(-2, 1), (-1, 2), (0, 1)]);
        let root = l.sqrt(&p).unwrap();
        assert_eq!(l.mul(&root, &root), p);
    }

    #[test]
    fn rational_images() {
        let f5 = Domain::prime_field(5).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(f5.from_rational(&half).unwrap(), Scalar::Res(3));
        assert!(Domain::Integers.from_rational(&half).is_err());
    }

    #[test]
    fn residues_are_canonical() {
        let z = Domain::Integers;
        assert_eq!(z.residue(&z.from_i64(-7), &z.from_i64(-3)).unwrap(), z.from_i64(2));
        let l = Domain::laurent(Domain::Rationals).unwrap();
        let m = lau(&[(0, -1), (1, 1)]);
        // t ≡ 1 and t⁻¹ ≡ 1 modulo t − 1
        for k in [-3i64, -1, 0, 2, 5] {
            let x = lau(&[(k, 4)]);
            assert_eq!(l.residue(&x, &m).unwrap(), l.from_i64(4));
        }
        let m2 = lau(&[(-2, 1), (0, 1)]);
        let a = lau(&[(-5, 1), (3, 2), (1, -1)]);
        let r = l.residue(&a, &m2).unwrap();
        assert!(l.divides(&m2, &l.sub(&a, &r)));
        let Scalar::Laurent(terms) = &r else { unreachable!() };
        assert!(terms.keys().all(|&d| (0..2).contains(&d)));
    }
}
