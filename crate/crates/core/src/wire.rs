//! JSON formats for rings, scalars, algebras, matrices, cocycles and multiloop specs.
//!
//! Scalars: integers as numbers or decimal strings, rationals as `"p/q"`,
//! residues as integers, Laurent elements as `{"deg": coeff}` maps, quadratic
//! elements as `[a, b]` meaning `a + b·x`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::arith::{Domain, Matrix, Scalar};
use crate::descent::{Cocycle, QuadGalois};
use crate::error::{Error, Result};
use crate::module::{mat, negative_transpose_map, sl, zero_algebra, zorn, Algebra};
use crate::multiloop::MultiloopSpec;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn ring_to_json(d: &Domain) -> Value {
    match d {
        Domain::Integers => json!({"kind": "Z"}),
        Domain::Rationals => json!({"kind": "Q"}),
        Domain::PrimeField(p) => json!({"kind": "GF", "p": p}),
        Domain::IntegersMod(n) => json!({"kind": "Zmod", "n": n}),
        Domain::Laurent(b) => json!({"kind": "Laurent", "base": ring_to_json(b)}),
        Domain::QuadExt(b, s) => json!({"kind": "QuadExt", "base": ring_to_json(b), "d": scalar_to_json(b, s)}),
    }
}

pub fn ring_from_json(v: &Value) -> Result<Domain> {
    let kind = v.get("kind").and_then(Value::as_str).ok_or_else(|| parse_err("ring needs a \"kind\""))?;
    let field_u64 = |name: &str| {
        v.get(name)
            .and_then(Value::as_u64)
            .ok_or_else(|| parse_err(format!("ring {kind} needs an integer \"{name}\"")))
    };
    let base = || ring_from_json(v.get("base").ok_or_else(|| parse_err(format!("ring {kind} needs a \"base\"")))?);
    match kind {
        "Z" => Ok(Domain::Integers),
        "Q" => Ok(Domain::Rationals),
        "GF" => Domain::prime_field(field_u64("p")?),
        "Zmod" => Domain::integers_mod(field_u64("n")?),
        "Laurent" => Domain::laurent(base()?),
        "QuadExt" => {
            let b = base()?;
            let d = scalar_from_json(&b, v.get("d").ok_or_else(|| parse_err("QuadExt needs \"d\""))?)?;
            Domain::quad_ext(b, d)
        }
        other => Err(parse_err(format!("unknown ring kind {other:?}"))),
    }
}

/// Ring names used on the command line: `Z`, `Q`, `GF5`, `Zmod6`, `Q[t]` for
/// `ℚ[t, t⁻¹]`, `Q(sqrt(2))` for `ℚ[x]/(x² − 2)`.
pub fn ring_from_name(name: &str) -> Result<Domain> {
    let name = name.trim();
    if let Some(base) = name.strip_suffix("[t]") {
        return Domain::laurent(ring_from_name(base)?);
    }
    if let Some(rest) = name.strip_suffix("))") {
        if let Some((base, d)) = rest.split_once("(sqrt(") {
            let b = ring_from_name(base)?;
            let d = scalar_from_str(&b, d)?;
            return Domain::quad_ext(b, d);
        }
    }
    match name {
        "Z" => Ok(Domain::Integers),
        "Q" => Ok(Domain::Rationals),
        _ => {
            let number = |prefix: &str| {
                name.strip_prefix(prefix)
                    .and_then(|n| n.parse::<u64>().ok())
                    .ok_or_else(|| parse_err(format!("unknown ring {name:?}")))
            };
            if name.starts_with("GF") {
                Domain::prime_field(number("GF")?)
            } else {
                Domain::integers_mod(number("Zmod")?)
            }
        }
    }
}

fn bigint_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(parse_err(format!("{n} is not an integer")))
            }
        }
        Value::String(s) => s.trim().parse().map_err(|_| parse_err(format!("{s:?} is not an integer"))),
        other => Err(parse_err(format!("{other} is not an integer"))),
    }
}

pub fn scalar_from_json(d: &Domain, v: &Value) -> Result<Scalar> {
    match d {
        Domain::Integers | Domain::PrimeField(_) | Domain::IntegersMod(_) => Ok(d.from_int(&bigint_from_json(v)?)),
        Domain::Rationals => match v {
            Value::String(s) if s.contains('/') => {
                let (p, q) = s.split_once('/').unwrap();
                let p: BigInt = p.trim().parse().map_err(|_| parse_err(format!("bad numerator in {s:?}")))?;
                let q: BigInt = q.trim().parse().map_err(|_| parse_err(format!("bad denominator in {s:?}")))?;
                if q == BigInt::from(0) {
                    return Err(parse_err(format!("zero denominator in {s:?}")));
                }
                d.from_rational(&BigRational::new(p, q))
            }
            _ => Ok(d.from_int(&bigint_from_json(v)?)),
        },
        Domain::Laurent(base) => match v {
            Value::Object(map) => {
                let mut acc = d.zero();
                for (deg, c) in map {
                    let deg: i64 = deg.trim().parse().map_err(|_| parse_err(format!("bad Laurent degree {deg:?}")))?;
                    acc = d.add(&acc, &d.monomial(deg, scalar_from_json(base, c)?)?);
                }
                Ok(acc)
            }
            other => d.monomial(0, scalar_from_json(base, other)?),
        },
        Domain::QuadExt(base, _) => match v {
            Value::Array(parts) if parts.len() == 2 => {
                d.quad(scalar_from_json(base, &parts[0])?, scalar_from_json(base, &parts[1])?)
            }
            Value::Array(_) => Err(parse_err("quadratic elements are pairs [a, b]")),
            other => d.quad(scalar_from_json(base, other)?, base.zero()),
        },
    }
}

/// A scalar given on the command line: JSON if it parses, otherwise a bare string.
pub fn scalar_from_str(d: &Domain, s: &str) -> Result<Scalar> {
    let v = serde_json::from_str(s).unwrap_or_else(|_| Value::String(s.to_string()));
    scalar_from_json(d, &v)
}

fn bigint_to_json(n: &BigInt) -> Value {
    match i64::try_from(n) {
        Ok(i) => json!(i),
        Err(_) => json!(n.to_string()),
    }
}

pub fn scalar_to_json(d: &Domain, s: &Scalar) -> Value {
    match (d, s) {
        (_, Scalar::Int(n)) => bigint_to_json(n),
        (_, Scalar::Rat(q)) if q.is_integer() => bigint_to_json(q.numer()),
        (_, Scalar::Rat(q)) => json!(format!("{}/{}", q.numer(), q.denom())),
        (_, Scalar::Res(r)) => json!(r),
        (Domain::Laurent(base), Scalar::Laurent(m)) => {
            Value::Object(m.iter().map(|(deg, c)| (deg.to_string(), scalar_to_json(base, c))).collect::<Map<_, _>>())
        }
        (Domain::QuadExt(base, _), Scalar::Quad(a, b)) => json!([scalar_to_json(base, a), scalar_to_json(base, b)]),
        (_, other) => json!(other.to_string()),
    }
}

pub fn vector_to_json(d: &Domain, v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(|s| scalar_to_json(d, s)).collect())
}

pub fn vector_from_json(d: &Domain, v: &Value) -> Result<Vec<Scalar>> {
    v.as_array()
        .ok_or_else(|| parse_err("expected an array of scalars"))?
        .iter()
        .map(|s| scalar_from_json(d, s))
        .collect()
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vector_to_json(m.domain(), m.row(i))).collect())
}

pub fn matrix_from_json(d: &Domain, v: &Value) -> Result<Matrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| parse_err("expected a matrix as an array of rows"))?
        .iter()
        .map(|r| vector_from_json(d, r))
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Err(parse_err("matrix has no rows"));
    }
    Matrix::from_rows(d, rows)
}

pub fn algebra_to_json(a: &Algebra) -> Value {
    let d = a.domain();
    let mul: Vec<Value> = a
        .table()
        .into_iter()
        .map(|(i, j, k, c)| json!([i, j, k, scalar_to_json(d, &c)]))
        .collect();
    let mut obj = json!({
        "ring": ring_to_json(d),
        "rank": a.rank(),
        "basis": a.names(),
        "mul": mul,
    });
    if let Some(u) = a.unit() {
        obj["unit"] = vector_to_json(d, u);
    }
    obj
}

pub fn algebra_from_json(v: &Value) -> Result<Algebra> {
    let d = ring_from_json(v.get("ring").ok_or_else(|| parse_err("algebra needs a \"ring\""))?)?;
    let rank = v
        .get("rank")
        .and_then(Value::as_u64)
        .ok_or_else(|| parse_err("algebra needs an integer \"rank\""))? as usize;
    let names: Vec<String> = match v.get("basis") {
        Some(Value::Array(names)) => names
            .iter()
            .map(|n| n.as_str().map(str::to_string).ok_or_else(|| parse_err("basis names must be strings")))
            .collect::<Result<_>>()?,
        Some(_) => return Err(parse_err("\"basis\" must be an array of names")),
        None => (1..=rank).map(|i| format!("b{i}")).collect(),
    };
    if names.len() != rank {
        return Err(Error::BadSpec(format!("{} basis names for rank {rank}", names.len())));
    }
    let mut table = Vec::new();
    for entry in v.get("mul").and_then(Value::as_array).ok_or_else(|| parse_err("algebra needs a \"mul\" array"))? {
        let parts = entry.as_array().filter(|p| p.len() == 4).ok_or_else(|| parse_err("mul entries are [i, j, k, c]"))?;
        let index = |p: &Value| p.as_u64().map(|x| x as usize).ok_or_else(|| parse_err("mul indices are integers"));
        table.push((index(&parts[0])?, index(&parts[1])?, index(&parts[2])?, scalar_from_json(&d, &parts[3])?));
    }
    let unit = v.get("unit").map(|u| vector_from_json(&d, u)).transpose()?;
    Algebra::from_table(&d, names, &table, unit)
}

/// Built-in algebras addressed as `NAME@RING`: `sl2`, `sl3`, `mat2`, `mat3`,
/// `zorn`, `zero3`, …; the ring defaults to `Q`.
pub fn builtin_algebra(spec: &str) -> Result<Algebra> {
    let (name, ring) = spec.split_once('@').unwrap_or((spec, "Q"));
    let d = ring_from_name(ring)?;
    let size = |prefix: &str| name.strip_prefix(prefix).and_then(|n| n.parse::<usize>().ok());
    if name == "zorn" {
        zorn(&d)
    } else if let Some(n) = size("sl") {
        sl(n, &d)
    } else if let Some(n) = size("mat") {
        mat(n, &d)
    } else if let Some(n) = size("zero") {
        zero_algebra(n, &d)
    } else {
        Err(parse_err(format!("unknown built-in algebra {name:?}")))
    }
}

/// `{"d": scalar, "U": [[[a, b], …], …]}` with `d` and the entries over the algebra's ring.
pub fn cocycle_from_json(a: &Algebra, v: &Value, ext_d: Option<&Scalar>) -> Result<Cocycle> {
    let r = a.domain();
    let d = match (v.get("d"), ext_d) {
        (Some(dv), given) => {
            let d = scalar_from_json(r, dv)?;
            if given.is_some_and(|g| g != &d) {
                return Err(parse_err("--ext-d disagrees with the cocycle's \"d\""));
            }
            d
        }
        (None, Some(g)) => g.clone(),
        (None, None) => return Err(parse_err("cocycle needs \"d\" or --ext-d")),
    };
    let galois = QuadGalois::new(r, d)?;
    let u = matrix_from_json(galois.ext(), v.get("U").ok_or_else(|| parse_err("cocycle needs \"U\""))?)?;
    Cocycle::new(&galois, a, u)
}

pub fn cocycle_to_json(c: &Cocycle) -> Value {
    let g = c.galois();
    json!({"d": scalar_to_json(g.base(), g.parameter()), "U": matrix_to_json(c.matrix())})
}

/// `{"g": algebra, "sigmas": [matrix…], "orders": [m…], "roots": [scalar…]}`.
pub fn multiloop_from_json(v: &Value) -> Result<MultiloopSpec> {
    let g = algebra_from_json(v.get("g").ok_or_else(|| parse_err("multiloop spec needs \"g\""))?)?;
    let k = g.domain().clone();
    let list = |name: &str| {
        v.get(name)
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err(format!("multiloop spec needs a \"{name}\" array")))
    };
    let sigmas = list("sigmas")?.iter().map(|m| matrix_from_json(&k, m)).collect::<Result<Vec<_>>>()?;
    let orders = list("orders")?
        .iter()
        .map(|m| m.as_u64().map(|x| x as usize).ok_or_else(|| parse_err("orders are integers")))
        .collect::<Result<Vec<_>>>()?;
    let roots = list("roots")?.iter().map(|s| scalar_from_json(&k, s)).collect::<Result<Vec<_>>>()?;
    MultiloopSpec::new(&g, sigmas, orders, roots)
}

pub fn multiloop_to_json(s: &MultiloopSpec) -> Value {
    let k = s.algebra().domain();
    json!({
        "g": algebra_to_json(s.algebra()),
        "sigmas": s.sigmas().iter().map(matrix_to_json).collect::<Vec<_>>(),
        "orders": s.orders(),
        "roots": s.roots().iter().map(|r| scalar_to_json(k, r)).collect::<Vec<_>>(),
    })
}

/// Built-in multiloop specs over `ℚ`: `sl2-id`, `sl2-inner`, `sl3-transpose`.
pub fn builtin_multiloop(name: &str) -> Result<MultiloopSpec> {
    let q = Domain::Rationals;
    match name {
        "sl2-id" => MultiloopSpec::single(&sl(2, &q)?, Matrix::identity(&q, 3), 1, q.one()),
        "sl2-inner" => {
            let g = sl(2, &q)?;
            let sigma = crate::module::conjugation_map(&g, &Matrix::from_i64(&q, &[&[1, 0], &[0, -1]]))?;
            MultiloopSpec::single(&g, sigma, 2, q.from_i64(-1))
        }
        "sl3-transpose" => {
            let g = sl(3, &q)?;
            let sigma = negative_transpose_map(&g)?;
            MultiloopSpec::single(&g, sigma, 2, q.from_i64(-1))
        }
        other => Err(parse_err(format!("unknown built-in multiloop spec {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_round_trips() {
        let q = Domain::Rationals;
        let l = Domain::laurent(q.clone()).unwrap();
        let s = Domain::quad_ext(q.clone(), q.from_i64(2)).unwrap();
        let samples = [
            (q.clone(), json!("-3/4")),
            (q.clone(), json!(7)),
            (Domain::Integers, json!("123456789012345678901234567890")),
            (Domain::prime_field(5).unwrap(), json!(3)),
            (l.clone(), json!({"-1": "1/2", "2": 3})),
            (s.clone(), json!(["1/3", -2])),
        ];
        for (d, v) in samples {
            let x = scalar_from_json(&d, &v).unwrap();
            assert_eq!(scalar_from_json(&d, &scalar_to_json(&d, &x)).unwrap(), x);
        }
        assert_eq!(scalar_from_json(&Domain::prime_field(5).unwrap(), &json!(-1)).unwrap(), Scalar::Res(4));
        assert!(scalar_from_json(&q, &json!("1/0")).is_err());
        assert!(scalar_from_json(&q, &json!(1.5)).is_err());
    }

    #[test]
    fn ring_names() {
        assert_eq!(ring_from_name("GF2").unwrap(), Domain::PrimeField(2));
        assert_eq!(ring_from_name("Q[t]").unwrap(), Domain::laurent(Domain::Rationals).unwrap());
        let s = ring_from_name("Q(sqrt(2))").unwrap();
        assert_eq!(s.quad_parameter(), Some(&Domain::Rationals.from_i64(2)));
        assert!(ring_from_name("GF4").is_err());
        for d in [Domain::Integers, Domain::integers_mod(6).unwrap(), s] {
            assert_eq!(ring_from_json(&ring_to_json(&d)).unwrap(), d);
        }
    }

    #[test]
    fn builtins_round_trip() {
        for name in ["sl2@Z", "sl3@Q", "mat2@GF2", "mat3@Z", "zorn@Q", "zero2@Q", "sl2@Q[t]"] {
            let a = builtin_algebra(name).unwrap();
            let back = algebra_from_json(&algebra_to_json(&a)).unwrap();
            assert_eq!(back, a);
            assert_eq!(back.names(), a.names());
        }
    }

    #[test]
    fn malformed_specs() {
        let dup = json!({"ring": {"kind": "Q"}, "rank": 1, "mul": [[0, 0, 0, 1], [0, 0, 0, 2]]});
        assert!(matches!(algebra_from_json(&dup), Err(Error::BadSpec(_))));
        let out_of_range = json!({"ring": {"kind": "Q"}, "rank": 1, "mul": [[0, 1, 0, 1]]});
        assert!(algebra_from_json(&out_of_range).is_err());
        assert!(algebra_from_json(&json!({"rank": 1, "mul": []})).is_err());
    }

    #[test]
    fn cocycle_and_multiloop_round_trip() {
        let a = builtin_algebra("sl2@Q").unwrap();
        let v = json!({"d": 2, "U": [[0, 0, [-2, 0]], [0, [-1, 0], 0], [["-1/2", 0], 0, 0]]});
        let c = cocycle_from_json(&a, &v, None).unwrap();
        let back = cocycle_from_json(&a, &cocycle_to_json(&c), Some(&Domain::Rationals.from_i64(2))).unwrap();
        assert_eq!(back.matrix(), c.matrix());
        assert!(cocycle_from_json(&a, &v, Some(&Domain::Rationals.from_i64(3))).is_err());
        let spec = builtin_multiloop("sl3-transpose").unwrap();
        let again = multiloop_from_json(&multiloop_to_json(&spec)).unwrap();
        assert_eq!(again.sigmas(), spec.sigmas());
    }
}
