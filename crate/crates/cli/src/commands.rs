//! Request dispatch. A request is one JSON object: `command`, `params`,
//! an optional `prime` and `seed` (falling back to the invocation
//! defaults), and an optional `schema_version` that must be 1 when
//! present. Responses carry exactly one of `result` or `error`.

use crate::protocol::{
    as_str, as_u64, point, point_json, rational_json, ring, ring_json, schema, series,
    series_json, spv_json, subgroup, subset, verdict_json, Fail, Obj, PResult,
};
use adic_core::huber::{self, ContinuityVerdict};
use adic_core::ordgroup::ConvexSubgroup;
use adic_core::points::{self, ResidueField};
use adic_core::scalar::{self, Prime};
use adic_core::tate;
use adic_core::topology::{self, SpvPoint};
use serde_json::{json, Value};

/// Invocation-level fallbacks: `--prime` / `ADIC_DEFAULT_PRIME` and
/// `--seed` (default 0). A request's own fields win over both.
pub struct Defaults {
    pub prime: Option<u64>,
    pub seed: u64,
}

/// Runs one request line. Returns the response value and the exit class:
/// 0 ok, 1 domain error, 2 parse or schema error.
pub fn run(input: &str, defaults: &Defaults) -> (Value, i32) {
    let parsed: Value = match serde_json::from_str(input) {
        Ok(v) => v,
        Err(e) => return failure("ParseError", &format!("invalid JSON: {e}"), 2),
    };
    match execute(parsed, defaults) {
        Ok(result) => (json!({ "ok": true, "result": result }), 0),
        Err(Fail::Schema(msg)) => failure("SchemaError", &msg, 2),
        Err(Fail::Domain(e)) => failure(e.code(), &e.to_string(), 1),
    }
}

fn failure(code: &str, message: &str, exit: i32) -> (Value, i32) {
    (
        json!({ "error": { "code": code, "message": message }, "ok": false }),
        exit,
    )
}

fn execute(v: Value, defaults: &Defaults) -> PResult<Value> {
    let mut req = Obj::new(v, "request")?;
    let command = as_str(&req.take("command")?, "command")?;
    if let Some(sv) = req.take_opt("schema_version") {
        if sv.as_u64() != Some(1) {
            return schema("unsupported schema_version (this build speaks 1)");
        }
    }
    let prime = match req.take_opt("prime") {
        Some(pv) => Some(as_u64(&pv, "prime")?),
        None => defaults.prime,
    };
    let seed = match req.take_opt("seed") {
        Some(sv) => as_u64(&sv, "seed")?,
        None => defaults.seed,
    };
    let params = req.take("params")?;
    req.finish()?;

    let Some(prime) = prime else {
        return schema("no prime: set \"prime\" in the request, --prime, or ADIC_DEFAULT_PRIME");
    };
    let p = Prime::new(prime)?;
    let mut o = Obj::new(params, "params")?;
    let result = match command.as_str() {
        "eval" => cmd_eval(&mut o, p)?,
        "classify" => cmd_classify(&mut o, p)?,
        "member" => cmd_member(&mut o, p)?,
        "closure" => cmd_closure(&mut o, p)?,
        "specializes" => cmd_specializes(&mut o, p, seed)?,
        "vertical" => cmd_vertical(&mut o, p)?,
        "horizontal" => cmd_horizontal(&mut o, p)?,
        "localize" => cmd_localize(&mut o, p)?,
        "power-bounded" => cmd_bounded(&mut o, p, false)?,
        "top-nilpotent" => cmd_bounded(&mut o, p, true)?,
        "continuity" => cmd_continuity(&mut o, p, seed)?,
        "nullstellensatz" => cmd_nullstellensatz(&mut o, p)?,
        "newton" => cmd_newton(&mut o, p)?,
        other => return schema(format!("unknown command \"{other}\"")),
    };
    o.finish()?;
    Ok(result)
}

/// `x` plus an optional `truncation` makes the valuation wrapper; the
/// default truncation is the full group (the bare catalog point).
fn spv_arg(o: &mut Obj, p: Prime) -> PResult<SpvPoint> {
    let base = point(o.take("x")?, p)?;
    let truncation = match o.take_opt("truncation") {
        Some(v) => subgroup(&v, "truncation")?,
        None => ConvexSubgroup::Full,
    };
    Ok(SpvPoint { base, truncation })
}

fn cmd_eval(o: &mut Obj, p: Prime) -> PResult<Value> {
    let f = series(o.take("f")?)?;
    let x = spv_arg(o, p)?;
    let value = topology::evaluate_truncated(&f, &x, p)?;
    Ok(Value::String(value.to_string()))
}

fn cmd_classify(o: &mut Obj, p: Prime) -> PResult<Value> {
    let x = point(o.take("x")?, p)?;
    let report = points::classify(&x, p)?;
    let residue = match report.residue_field {
        ResidueField::AlgClosedPrime => "algebraically_closed_prime_field",
        ResidueField::RationalFunction => "rational_function_field",
    };
    Ok(json!({
        "closed": report.closed,
        "in_d": report.in_d,
        "residue_field": residue,
        "type": report.type_tag,
        "value_group": report.value_group.to_string(),
    }))
}

fn cmd_member(o: &mut Obj, p: Prime) -> PResult<Value> {
    let x = point(o.take("x")?, p)?;
    let u = subset(o.take("subset")?)?;
    Ok(json!({ "member": topology::member(&x, &u, p)? }))
}

fn cmd_closure(o: &mut Obj, p: Prime) -> PResult<Value> {
    let x = point(o.take("x")?, p)?;
    let k = as_u64(&o.take("k")?, "k")? as usize;
    let pts = topology::closure_points(&x, k, p)?;
    Ok(json!({ "points": pts.iter().map(point_json).collect::<Vec<_>>() }))
}

fn cmd_specializes(o: &mut Obj, p: Prime, seed: u64) -> PResult<Value> {
    let x = point(o.take("x")?, p)?;
    let y = point(o.take("y")?, p)?;
    let trials = match o.take_opt("trials") {
        Some(v) => Some(as_u64(&v, "trials")? as usize),
        None => None,
    };
    let answer = topology::specializes(&x, &y, p)?;
    let Some(trials) = trials else {
        return Ok(json!({ "specializes": answer }));
    };
    let report = topology::sampling_specialization_check(&x, &y, trials, seed, p)?;
    let counterexample = match &report.counterexample {
        None => Value::Null,
        Some((g, s)) => json!({ "g": series_json(g), "s": series_json(s) }),
    };
    Ok(json!({
        "sampling": { "consistent": report.consistent, "counterexample": counterexample },
        "specializes": answer,
    }))
}

fn cmd_vertical(o: &mut Obj, p: Prime) -> PResult<Value> {
    let y = point(o.take("y")?, p)?;
    let x = topology::vertical_generization(&y, p)?;
    Ok(json!({ "point": point_json(&x) }))
}

fn cmd_horizontal(o: &mut Obj, p: Prime) -> PResult<Value> {
    let x = spv_arg(o, p)?;
    let delta = subgroup(&o.take("delta")?, "delta")?;
    let (y, flags) = topology::horizontal_specialize(&x, delta, p)?;
    Ok(json!({
        "flags": { "continuous": flags.continuous, "is_valuation": flags.is_valuation },
        "point": spv_json(&y),
    }))
}

fn cmd_localize(o: &mut Obj, p: Prime) -> PResult<Value> {
    let base = ring(o.take("ring")?, p)?;
    let numerators = crate::protocol::series_list(o.take("numerators")?, "numerators")?;
    let denominator = series(o.take("denominator")?)?;
    let localized = huber::localize(&base, &numerators, &denominator, p)?;
    let (subring, ideal) = localized.pair_of_definition();
    let wedge = match localized.wedge_exponent(p) {
        Some(q) => rational_json(&q),
        None => Value::Null,
    };
    Ok(json!({
        "pair_of_definition": { "ideal": ideal, "subring": subring },
        "ring": ring_json(&localized),
        "wedge_exponent": wedge,
    }))
}

fn cmd_bounded(o: &mut Obj, p: Prime, nilpotent: bool) -> PResult<Value> {
    let f = series(o.take("f")?)?;
    let ring = ring(o.take("ring")?, p)?;
    let verdict = if nilpotent {
        huber::is_topologically_nilpotent(&f, &ring, p)?
    } else {
        huber::is_power_bounded(&f, &ring, p)?
    };
    Ok(verdict_json(&verdict))
}

fn cmd_continuity(o: &mut Obj, p: Prime, seed: u64) -> PResult<Value> {
    let x = spv_arg(o, p)?;
    let explicit = o.take_opt("samples");
    let count = o.take_opt("count");
    let samples = match (explicit, count) {
        (Some(_), Some(_)) => return schema("\"samples\" and \"count\" are mutually exclusive"),
        (Some(v), None) => crate::protocol::series_list(v, "samples")?,
        (None, c) => {
            let n = match c {
                Some(v) => as_u64(&v, "count")? as usize,
                None => 30,
            };
            huber::continuity_sample_set(p, n, seed)
        }
    };
    let report = huber::check_continuity(&x, &samples, p)?;
    let verdict = match report.verdict {
        ContinuityVerdict::Continuous => "continuous",
        ContinuityVerdict::SampledOnly => "sampled_only",
        ContinuityVerdict::NotContinuous => "not_continuous",
    };
    Ok(json!({
        "bound_holds": report.bound_holds,
        "cofinal": report.cofinal,
        "verdict": verdict,
    }))
}

fn cmd_nullstellensatz(o: &mut Obj, p: Prime) -> PResult<Value> {
    let f = series(o.take("f")?)?;
    let witness = match huber::nullstellensatz_witness(&f, p)? {
        None => Value::Null,
        Some((x, v)) => json!({ "point": point_json(&x), "value": v.to_string() }),
    };
    Ok(json!({ "witness": witness }))
}

fn cmd_newton(o: &mut Obj, p: Prime) -> PResult<Value> {
    let f = series(o.take("f")?)?;
    let segments = tate::newton_polygon(&f, p)?
        .iter()
        .map(|s| {
            let slope = match &s.slope {
                None => Value::Null,
                Some(q) => Value::String(scalar::render_rational(q)),
            };
            json!({ "multiplicity": s.multiplicity, "slope": slope })
        })
        .collect::<Vec<_>>();
    Ok(json!({ "segments": segments }))
}
