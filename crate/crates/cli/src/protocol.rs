//! JSON encoding of the library's domain objects: rationals travel as
//! exact "a/b" strings, series as coefficient lists with a tail bound,
//! points and rings as tagged objects, group values in their textual
//! form. Parsing is strict: unknown fields are rejected, so a canonical
//! request (alphabetical keys, compact separators) round-trips through
//! `serde_json` byte-identically.

use adic_core::error::Error;
use adic_core::ffield::{FqContext, FqElem, P1Point};
use adic_core::huber::{self, BoundedCertificate, BoundedStatus, BoundedVerdict, RingDescriptor};
use adic_core::ordgroup::ConvexSubgroup;
use adic_core::points::{PointDescriptor, Radius};
use adic_core::scalar::{self, ExtInt, Prime};
use adic_core::tate::TateSeries;
use adic_core::topology::{RationalSubset, SpvPoint};
use num_rational::BigRational;
use serde_json::{json, Map, Value};

/// A request failure: a malformed shape (rejected before any computation)
/// or a library error passed through with its code.
#[derive(Debug)]
pub enum Fail {
    Schema(String),
    Domain(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail::Domain(e)
    }
}

pub type PResult<T> = Result<T, Fail>;

pub fn schema<T>(msg: impl Into<String>) -> PResult<T> {
    Err(Fail::Schema(msg.into()))
}

/// Strict object reader: fields are taken by name and anything left over
/// at `finish` is an unknown-field error.
pub struct Obj {
    name: &'static str,
    map: Map<String, Value>,
}

impl Obj {
    pub fn new(v: Value, name: &'static str) -> PResult<Obj> {
        match v {
            Value::Object(map) => Ok(Obj { name, map }),
            _ => schema(format!("{name} must be a JSON object")),
        }
    }

    pub fn take(&mut self, key: &str) -> PResult<Value> {
        self.map
            .remove(key)
            .ok_or_else(|| Fail::Schema(format!("{} is missing \"{key}\"", self.name)))
    }

    pub fn take_opt(&mut self, key: &str) -> Option<Value> {
        self.map.remove(key)
    }

    pub fn finish(self) -> PResult<()> {
        if let Some(key) = self.map.keys().next() {
            return schema(format!("unknown field \"{key}\" in {}", self.name));
        }
        Ok(())
    }
}

pub fn as_str(v: &Value, what: &str) -> PResult<String> {
    match v.as_str() {
        Some(s) => Ok(s.to_string()),
        None => schema(format!("{what} must be a string")),
    }
}

pub fn as_u64(v: &Value, what: &str) -> PResult<u64> {
    match v.as_u64() {
        Some(n) => Ok(n),
        None => schema(format!("{what} must be a non-negative integer")),
    }
}

pub fn as_array(v: Value, what: &str) -> PResult<Vec<Value>> {
    match v {
        Value::Array(a) => Ok(a),
        _ => schema(format!("{what} must be an array")),
    }
}

pub fn rational(v: &Value, what: &str) -> PResult<BigRational> {
    let s = as_str(v, what)?;
    scalar::parse_rational(&s)
        .map_err(|_| Fail::Schema(format!("{what} must be a rational \"a/b\" string")))
}

fn tail_vp(v: &Value) -> PResult<ExtInt> {
    if let Some(n) = v.as_i64() {
        return Ok(ExtInt::Finite(n));
    }
    match v.as_str() {
        Some("inf") => Ok(ExtInt::Infinity),
        Some(s) => match s.parse::<i64>() {
            Ok(n) => Ok(ExtInt::Finite(n)),
            Err(_) => schema("tail_vp must be an integer or \"inf\""),
        },
        None => schema("tail_vp must be an integer or \"inf\""),
    }
}

pub fn series(v: Value) -> PResult<TateSeries> {
    let mut o = Obj::new(v, "series")?;
    let coeffs = as_array(o.take("coeffs")?, "coeffs")?
        .iter()
        .map(|c| rational(c, "coefficient"))
        .collect::<PResult<Vec<_>>>()?;
    let tail = tail_vp(&o.take("tail_vp")?)?;
    o.finish()?;
    Ok(TateSeries::new(coeffs, tail))
}

pub fn series_list(v: Value, what: &str) -> PResult<Vec<TateSeries>> {
    as_array(v, what)?.into_iter().map(series).collect()
}

fn radius(v: Value, p: Prime) -> PResult<Radius> {
    let mut o = Obj::new(v, "radius")?;
    let r = if let Some(q) = o.take_opt("p_power") {
        Radius::p_power(rational(&q, "radius.p_power")?)?
    } else if let Some(s) = o.take_opt("plain") {
        Radius::plain(p, rational(&s, "radius.plain")?)?
    } else {
        return schema("radius needs \"p_power\" or \"plain\"");
    };
    o.finish()?;
    Ok(r)
}

fn fq_elem(v: &Value, ctx: &FqContext) -> PResult<FqElem> {
    let coordinate = |c: &Value, what: &str| -> PResult<u64> {
        match c.as_str() {
            Some(s) => match s.parse::<u64>() {
                Ok(n) => Ok(n % ctx.prime().get()),
                Err(_) => schema(format!("{what} must be a decimal string")),
            },
            None => schema(format!("{what} must be a decimal string")),
        }
    };
    match v {
        Value::String(_) => Ok(ctx.from_prime(coordinate(v, "lambda.value")?)),
        Value::Array(a) => {
            if a.len() != ctx.degree() {
                return schema(format!(
                    "lambda.value needs {} coordinates",
                    ctx.degree()
                ));
            }
            let mut e = ctx.zero();
            for (i, c) in a.iter().enumerate() {
                e[i] = coordinate(c, "lambda coordinate")?;
            }
            Ok(e)
        }
        _ => schema("lambda.value must be a string or a coordinate array"),
    }
}

/// `lambda` is either the string `"inf"` (with the field degree in an
/// optional sibling `"k"`, default 1) or `{"k": k, "value": ...}` with the
/// value a decimal string (prime-field element) or a coordinate array.
fn lambda(v: Value, sibling_k: Option<Value>, p: Prime) -> PResult<(FqContext, P1Point)> {
    if v.as_str() == Some("inf") {
        let k = match &sibling_k {
            Some(kv) => as_u64(kv, "k")? as usize,
            None => 1,
        };
        return Ok((FqContext::new(p, k)?, P1Point::Infinity));
    }
    if sibling_k.is_some() {
        return schema("\"k\" is only valid alongside lambda \"inf\"");
    }
    let mut o = Obj::new(v, "lambda")?;
    let k = as_u64(&o.take("k")?, "lambda.k")? as usize;
    let value = o.take("value")?;
    o.finish()?;
    let ctx = FqContext::new(p, k)?;
    let elem = fq_elem(&value, &ctx)?;
    Ok((ctx, P1Point::Finite(elem)))
}

pub fn point(v: Value, p: Prime) -> PResult<PointDescriptor> {
    let mut o = Obj::new(v, "point")?;
    let kind = as_str(&o.take("kind")?, "point.kind")?;
    let x = match kind.as_str() {
        "classical" => {
            let alpha = rational(&o.take("alpha")?, "alpha")?;
            PointDescriptor::classical(p, alpha)?
        }
        "disc" => {
            let alpha = rational(&o.take("alpha")?, "alpha")?;
            let r = radius(o.take("radius")?, p)?;
            PointDescriptor::disc(p, alpha, r)?
        }
        "type5" => {
            let alpha = rational(&o.take("alpha")?, "alpha")?;
            let q = rational(&o.take("q")?, "q")?;
            let k = o.take_opt("k");
            let (ctx, lam) = lambda(o.take("lambda")?, k, p)?;
            PointDescriptor::type5(p, alpha, q, ctx, lam)?
        }
        other => return schema(format!("unknown point kind \"{other}\"")),
    };
    o.finish()?;
    Ok(x)
}

pub fn subgroup(v: &Value, what: &str) -> PResult<ConvexSubgroup> {
    match as_str(v, what)?.as_str() {
        "full" => Ok(ConvexSubgroup::Full),
        "second_factor" => Ok(ConvexSubgroup::SecondFactor),
        "trivial" => Ok(ConvexSubgroup::Trivial),
        other => schema(format!("{what}: unknown convex subgroup \"{other}\"")),
    }
}

pub fn subset(v: Value) -> PResult<RationalSubset> {
    let mut o = Obj::new(v, "subset")?;
    let numerators = series_list(o.take("numerators")?, "numerators")?;
    let denominator = series(o.take("denominator")?)?;
    o.finish()?;
    Ok(RationalSubset::new(numerators, denominator))
}

/// A ring is a name string or `{"localized": {base, numerators,
/// denominator}}`; the localized form is validated on construction, so a
/// non-open generator set fails here with the library's error.
pub fn ring(v: Value, p: Prime) -> PResult<RingDescriptor> {
    if let Some(s) = v.as_str() {
        return match s {
            "tate_algebra" => Ok(RingDescriptor::TateAlgebra),
            "poly_ring" => Ok(RingDescriptor::PolyRing),
            "formal_power_series" => Ok(RingDescriptor::FormalPowerSeries),
            other => schema(format!("unknown ring \"{other}\"")),
        };
    }
    let mut o = Obj::new(v, "ring")?;
    let inner = o.take("localized")?;
    o.finish()?;
    let mut o = Obj::new(inner, "localized")?;
    let base = ring(o.take("base")?, p)?;
    let numerators = series_list(o.take("numerators")?, "numerators")?;
    let denominator = series(o.take("denominator")?)?;
    o.finish()?;
    Ok(huber::localize(&base, &numerators, &denominator, p)?)
}

pub fn rational_json(x: &BigRational) -> Value {
    Value::String(scalar::render_rational(x))
}

pub fn series_json(f: &TateSeries) -> Value {
    let tail = match f.tail_bound() {
        ExtInt::Infinity => "inf".to_string(),
        ExtInt::Finite(b) => b.to_string(),
    };
    json!({
        "coeffs": f.coeffs().iter().map(rational_json).collect::<Vec<_>>(),
        "tail_vp": tail,
    })
}

fn fq_elem_json(e: &FqElem, ctx: &FqContext) -> Value {
    if ctx.degree() == 1 {
        Value::String(e[0].to_string())
    } else {
        Value::Array(e.iter().map(|c| Value::String(c.to_string())).collect())
    }
}

pub fn point_json(x: &PointDescriptor) -> Value {
    match x {
        PointDescriptor::Classical { alpha } => json!({
            "alpha": rational_json(alpha),
            "kind": "classical",
        }),
        PointDescriptor::Disc { alpha, radius } => {
            let r = match radius {
                Radius::PPower(q) => json!({ "p_power": rational_json(q) }),
                Radius::Plain(s) => json!({ "plain": rational_json(s) }),
            };
            json!({
                "alpha": rational_json(alpha),
                "kind": "disc",
                "radius": r,
            })
        }
        PointDescriptor::Type5 {
            alpha,
            q,
            ctx,
            lambda,
        } => match lambda {
            P1Point::Infinity => json!({
                "alpha": rational_json(alpha),
                "k": ctx.degree(),
                "kind": "type5",
                "lambda": "inf",
                "q": rational_json(q),
            }),
            P1Point::Finite(e) => json!({
                "alpha": rational_json(alpha),
                "kind": "type5",
                "lambda": { "k": ctx.degree(), "value": fq_elem_json(e, ctx) },
                "q": rational_json(q),
            }),
        },
    }
}

pub fn subgroup_json(d: ConvexSubgroup) -> &'static str {
    match d {
        ConvexSubgroup::Full => "full",
        ConvexSubgroup::SecondFactor => "second_factor",
        ConvexSubgroup::Trivial => "trivial",
    }
}

pub fn spv_json(x: &SpvPoint) -> Value {
    json!({
        "base": point_json(&x.base),
        "truncation": subgroup_json(x.truncation),
    })
}

pub fn ring_json(r: &RingDescriptor) -> Value {
    match r {
        RingDescriptor::TateAlgebra => json!("tate_algebra"),
        RingDescriptor::PolyRing => json!("poly_ring"),
        RingDescriptor::FormalPowerSeries => json!("formal_power_series"),
        RingDescriptor::Localized {
            base,
            numerators,
            denominator,
        } => json!({
            "localized": {
                "base": ring_json(base),
                "denominator": series_json(denominator),
                "numerators": numerators.iter().map(series_json).collect::<Vec<_>>(),
            }
        }),
    }
}

pub fn verdict_json(v: &BoundedVerdict) -> Value {
    let status = match v.status {
        BoundedStatus::True => "true",
        BoundedStatus::False => "false",
        BoundedStatus::Unknown => "unknown",
    };
    let certificate = match &v.certificate {
        None => Value::Null,
        Some(BoundedCertificate::ExactNorm(g)) => json!({ "exact_norm": g.to_string() }),
        Some(BoundedCertificate::Structural(s)) => json!({ "structural": s }),
        Some(BoundedCertificate::SampledWitness { point, value }) => json!({
            "sampled_witness": {
                "point": point_json(point),
                "value": value.to_string(),
            }
        }),
    };
    json!({ "certificate": certificate, "status": status })
}
