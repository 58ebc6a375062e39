//! Ring homomorphisms between supported domains.

use std::fmt;

use super::domain::{Domain, Scalar};
use crate::error::{Error, Result};

/// A ring homomorphism `source → target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingMap {
    /// The structure map of a coefficient tower: ℤ → anything, ℚ → ℚ-algebras,
    /// reductions ℤ/n → ℤ/m for m | n, base ring into Laurent or quadratic extensions.
    Canonical { source: Domain, target: Domain },
    /// `a + b·x ↦ a − b·x` on a quadratic extension.
    Conjugation(Domain),
    /// `x ↦ root` on a split quadratic extension `R[x]/(x² − d)` with `root² = d`.
    QuadProjection { source: Domain, root: Scalar },
    /// `t ↦ coeff · t^exponent` on a Laurent ring, `exponent = ±1`.
    LaurentSubstitution {
        domain: Domain,
        coeff: Scalar,
        exponent: i64,
    },
    Composite(Vec<RingMap>),
}

fn embeds(source: &Domain, target: &Domain) -> bool {
    if source == target {
        return true;
    }
    match (source, target) {
        (Domain::Integers, _) => true,
        (Domain::IntegersMod(n), Domain::IntegersMod(m) | Domain::PrimeField(m)) => n % m == 0,
        (Domain::Laurent(b), Domain::Laurent(b2)) => embeds(b, b2),
        (Domain::QuadExt(b, d), Domain::QuadExt(b2, d2)) => {
            embeds(b, b2) && embed(d, b, b2) == **d2
        }
        (_, Domain::Laurent(b) | Domain::QuadExt(b, _)) => embeds(source, b),
        _ => false,
    }
}

fn embed(s: &Scalar, source: &Domain, target: &Domain) -> Scalar {
    if source == target {
        return s.clone();
    }
    match (source, target, s) {
        (Domain::Integers, _, Scalar::Int(n)) => target.from_int(n),
        (Domain::IntegersMod(_), Domain::IntegersMod(m) | Domain::PrimeField(m), Scalar::Res(r)) => {
            Scalar::Res(r % m)
        }
        (Domain::Laurent(b), Domain::Laurent(b2), Scalar::Laurent(m)) => {
            let mut out = target.zero();
            for (d, c) in m {
                let term = target.monomial(*d, embed(c, b, b2)).unwrap();
                out = target.add(&out, &term);
            }
            out
        }
        (Domain::QuadExt(b, _), Domain::QuadExt(b2, _), Scalar::Quad(x, y)) => {
            Scalar::Quad(Box::new(embed(x, b, b2)), Box::new(embed(y, b, b2)))
        }
        (_, Domain::Laurent(b), _) => target.monomial(0, embed(s, source, b)).unwrap(),
        (_, Domain::QuadExt(b, _), _) => {
            Scalar::Quad(Box::new(embed(s, source, b)), Box::new(b.zero()))
        }
        _ => unreachable!("embedding {source} -> {target} was not validated"),
    }
}

impl RingMap {
    /// The canonical map `source → target`, if the pair forms a supported tower.
    pub fn canonical(source: &Domain, target: &Domain) -> Result<Self> {
        if !embeds(source, target) {
            return Err(Error::UnsupportedMap(format!("no canonical map {source} -> {target}")));
        }
        Ok(RingMap::Canonical {
            source: source.clone(),
            target: target.clone(),
        })
    }

    pub fn identity(domain: &Domain) -> Self {
        RingMap::Canonical {
            source: domain.clone(),
            target: domain.clone(),
        }
    }

    pub fn conjugation(domain: &Domain) -> Result<Self> {
        match domain {
            Domain::QuadExt(..) => Ok(RingMap::Conjugation(domain.clone())),
            _ => Err(Error::UnsupportedMap(format!("{domain} has no conjugation"))),
        }
    }

    pub fn quad_projection(domain: &Domain, root: Scalar) -> Result<Self> {
        let Domain::QuadExt(base, d) = domain else {
            return Err(Error::UnsupportedMap(format!("{domain} is not a quadratic extension")));
        };
        if !base.contains(&root) || base.mul(&root, &root) != **d {
            return Err(Error::UnsupportedMap(format!("{root} is not a square root of {d}")));
        }
        Ok(RingMap::QuadProjection {
            source: domain.clone(),
            root,
        })
    }

    pub fn laurent_substitution(domain: &Domain, coeff: Scalar, exponent: i64) -> Result<Self> {
        let Domain::Laurent(base) = domain else {
            return Err(Error::UnsupportedMap(format!("{domain} is not a Laurent ring")));
        };
        if exponent.abs() != 1 || !base.is_unit(&coeff) {
            return Err(Error::UnsupportedMap(
                "Laurent substitutions need a unit coefficient and exponent ±1".into(),
            ));
        }
        Ok(RingMap::LaurentSubstitution {
            domain: domain.clone(),
            coeff,
            exponent,
        })
    }

    pub fn source(&self) -> &Domain {
        match self {
            RingMap::Canonical { source, .. } | RingMap::QuadProjection { source, .. } => source,
            RingMap::Conjugation(d) | RingMap::LaurentSubstitution { domain: d, .. } => d,
            RingMap::Composite(maps) => maps[0].source(),
        }
    }

    pub fn target(&self) -> &Domain {
        match self {
            RingMap::Canonical { target, .. } => target,
            RingMap::QuadProjection { source, .. } => source.base().unwrap(),
            RingMap::Conjugation(d) | RingMap::LaurentSubstitution { domain: d, .. } => d,
            RingMap::Composite(maps) => maps.last().unwrap().target(),
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &RingMap) -> Result<RingMap> {
        if self.target() != next.source() {
            return Err(Error::UnsupportedMap(format!(
                "cannot compose {} -> {} with {} -> {}",
                self.source(),
                self.target(),
                next.source(),
                next.target()
            )));
        }
        let mut maps = match self {
            RingMap::Composite(m) => m.clone(),
            other => vec![other.clone()],
        };
        match next {
            RingMap::Composite(m) => maps.extend(m.iter().cloned()),
            other => maps.push(other.clone()),
        }
        Ok(RingMap::Composite(maps))
    }

    pub fn is_identity(&self) -> bool {
        match self {
            RingMap::Canonical { source, target } => source == target,
            RingMap::LaurentSubstitution { domain, coeff, exponent } => {
                *exponent == 1 && domain.base().unwrap().is_one(coeff)
            }
            RingMap::Composite(maps) => maps.iter().all(RingMap::is_identity),
            _ => false,
        }
    }

    pub fn is_automorphism(&self) -> bool {
        match self {
            RingMap::Canonical { source, target } => source == target,
            RingMap::Conjugation(_) | RingMap::LaurentSubstitution { .. } => true,
            RingMap::QuadProjection { .. } => false,
            RingMap::Composite(maps) => maps.iter().all(RingMap::is_automorphism),
        }
    }

    /// The inverse map, for automorphisms.
    pub fn inverse(&self) -> Result<RingMap> {
        match self {
            RingMap::Canonical { source, target } if source == target => Ok(self.clone()),
            RingMap::Conjugation(_) => Ok(self.clone()),
            RingMap::LaurentSubstitution { domain, coeff, exponent } => {
                let base = domain.base().unwrap();
                // t ↦ c·t⁻¹ is an involution; t ↦ c·t inverts to t ↦ c⁻¹·t.
                let c = if *exponent == 1 { base.inv(coeff).unwrap() } else { coeff.clone() };
                RingMap::laurent_substitution(domain, c, *exponent)
            }
            RingMap::Composite(maps) => {
                let mut inv = maps.iter().rev().map(RingMap::inverse).collect::<Result<Vec<_>>>()?;
                if inv.len() == 1 {
                    return Ok(inv.pop().unwrap());
                }
                Ok(RingMap::Composite(inv))
            }
            _ => Err(Error::UnsupportedMap(format!("{self} is not invertible"))),
        }
    }

    pub fn apply(&self, s: &Scalar) -> Scalar {
        match self {
            RingMap::Canonical { source, target } => embed(s, source, target),
            RingMap::Conjugation(d) => d.conjugate(s).unwrap(),
            RingMap::QuadProjection { source, root } => {
                let base = source.base().unwrap();
                let (a, b) = source.quad_parts(s).unwrap();
                base.add(a, &base.mul(b, root))
            }
            RingMap::LaurentSubstitution {
                domain,
                coeff,
                exponent,
            } => {
                let base = domain.base().unwrap();
                let Scalar::Laurent(m) = s else {
                    panic!("{s} is not a Laurent element")
                };
                let mut acc = domain.zero();
                for (d, c) in m {
                    let scale = base.pow_signed(coeff, *d).unwrap();
                    let term = domain.monomial(d * exponent, base.mul(c, &scale)).unwrap();
                    acc = domain.add(&acc, &term);
                }
                acc
            }
            RingMap::Composite(maps) => maps.iter().fold(s.clone(), |acc, m| m.apply(&acc)),
        }
    }

    pub fn apply_all(&self, v: &[Scalar]) -> Vec<Scalar> {
        v.iter().map(|s| self.apply(s)).collect()
    }
}

impl fmt::Display for RingMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingMap::Canonical { source, target } => write!(f, "{source} -> {target}"),
            RingMap::Conjugation(d) => write!(f, "conjugation on {d}"),
            RingMap::QuadProjection { source, root } => write!(f, "{source} -> x={root}"),
            RingMap::LaurentSubstitution { coeff, exponent, .. } => {
                write!(f, "t -> {coeff}*t^{exponent}")
            }
            RingMap::Composite(maps) => {
                let parts: Vec<String> = maps.iter().map(|m| format!("({m})")).collect();
                write!(f, "{}", parts.join(" then "))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_towers() {
        let q = Domain::Rationals;
        let lq = Domain::laurent(q.clone()).unwrap();
        let zq = RingMap::canonical(&Domain::Integers, &q).unwrap();
        let ql = RingMap::canonical(&q, &lq).unwrap();
        let zl = RingMap::canonical(&Domain::Integers, &lq).unwrap();
        let composite = zq.then(&ql).unwrap();
        for n in [-7i64, 0, 3, 12] {
            let s = Domain::Integers.from_i64(n);
            assert_eq!(composite.apply(&s), zl.apply(&s));
        }
        assert!(RingMap::canonical(&q, &Domain::Integers).is_err());
        assert!(RingMap::canonical(&q, &Domain::prime_field(3).unwrap()).is_err());
        let z6 = Domain::integers_mod(6).unwrap();
        let f3 = Domain::prime_field(3).unwrap();
        let red = RingMap::canonical(&z6, &f3).unwrap();
        assert_eq!(red.apply(&Scalar::Res(5)), Scalar::Res(2));
    }

    #[test]
    fn laurent_substitution_is_a_ring_map() {
        let l = Domain::laurent(Domain::Rationals).unwrap();
        let two = Domain::Rationals.from_i64(2);
        let sub = RingMap::laurent_substitution(&l, two.clone(), -1).unwrap();
        let t = l.generator().unwrap();
        let a = l.add(&t, &l.from_i64(3));
        let b = l.sub(&l.mul(&t, &t), &l.monomial(-1, two).unwrap());
        assert_eq!(sub.apply(&l.mul(&a, &b)), l.mul(&sub.apply(&a), &sub.apply(&b)));
        assert_eq!(sub.apply(&t), l.monomial(-1, Domain::Rationals.from_i64(2)).unwrap());
    }

    #[test]
    fn split_projection() {
        let s = Domain::quad_ext(Domain::Rationals, Domain::Rationals.from_i64(9)).unwrap();
        let p = RingMap::quad_projection(&s, Domain::Rationals.from_i64(-3)).unwrap();
        let x = s.generator().unwrap();
        assert_eq!(p.apply(&x), Domain::Rationals.from_i64(-3));
        assert!(RingMap::quad_projection(&s, Domain::Rationals.from_i64(2)).is_err());
    }
}
