//! JSON encodings of the core types, and a writer that prints every float
//! with 17 significant digits.
//!
//! Matrices are `{"n": rows, "entries": [[[re, im], ...], ...]}` in row-major
//! order. Rectangular matrices (Kraus isometries) add `"cols"`.

use opineq_core::constants::{ExponentParams, Omega, SpectralBounds};
use opineq_core::engine::hypothesis::Claim;
use opineq_core::engine::{
    CheckResult, CounterexampleReport, Family, FamilyReport, Instance, ParamRanges, SuiteReport,
};
use opineq_core::explorer::{Certificate, SharpnessReport};
use opineq_core::maps::KrausTerm;
use opineq_core::scalar::{parse_fn, ConvexityCertificate, LfmpsReport, OperatorProperty};
use opineq_core::{ComplexMatrix, HermitianMatrix, MapSpec, ToleranceConfig, C64};
use serde_json::{json, Map, Value};

use crate::{Error, Result};

fn bad(what: impl Into<String>) -> Error {
    Error::Json(what.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field `{key}`")))
}

fn opt_field<'a>(v: &'a Value, key: &str) -> Option<&'a Value> {
    v.get(key).filter(|x| !x.is_null())
}

fn as_f64(v: &Value, what: &str) -> Result<f64> {
    let x = v.as_f64().ok_or_else(|| bad(format!("`{what}` is not a number")))?;
    if !x.is_finite() {
        return Err(bad(format!("`{what}` is not finite")));
    }
    Ok(x)
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| bad(format!("`{what}` is not a non-negative integer")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| bad(format!("`{what}` is not a string")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(format!("`{what}` is not an array")))
}

fn opt_f64(v: Option<f64>) -> Value {
    v.map_or(Value::Null, Value::from)
}

pub fn matrix_to_json(m: &ComplexMatrix) -> Value {
    let entries: Vec<Value> =
        (0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(|z| json!([z.re, z.im])).collect())).collect();
    let mut obj = Map::new();
    obj.insert("n".into(), m.rows().into());
    if !m.is_square() {
        obj.insert("cols".into(), m.cols().into());
    }
    obj.insert("entries".into(), Value::Array(entries));
    Value::Object(obj)
}

pub fn matrix_from_json(v: &Value) -> Result<ComplexMatrix> {
    let n = as_usize(field(v, "n")?, "n")?;
    let rows = as_array(field(v, "entries")?, "entries")?;
    if rows.len() != n {
        return Err(bad(format!("`entries` has {} rows, expected {n}", rows.len())));
    }
    let cols = match opt_field(v, "cols") {
        Some(c) => as_usize(c, "cols")?,
        None => n,
    };
    let mut data = Vec::with_capacity(n * cols);
    for row in rows {
        let row = as_array(row, "entries row")?;
        if row.len() != cols {
            return Err(bad(format!("matrix row has {} entries, expected {cols}", row.len())));
        }
        for z in row {
            let pair = as_array(z, "entry")?;
            if pair.len() != 2 {
                return Err(bad("matrix entry must be [re, im]"));
            }
            data.push(C64::new(as_f64(&pair[0], "re")?, as_f64(&pair[1], "im")?));
        }
    }
    Ok(ComplexMatrix::from_vec(n, cols, data)?)
}

pub fn hermitian_to_json(m: &HermitianMatrix) -> Value {
    matrix_to_json(m.as_matrix())
}

pub fn hermitian_from_json(v: &Value) -> Result<HermitianMatrix> {
    Ok(HermitianMatrix::new(matrix_from_json(v)?)?)
}

pub fn map_to_json(phi: &MapSpec) -> Value {
    match phi {
        MapSpec::Compression { n_in, k } => json!({"variant": phi.variant_name(), "n_in": n_in, "k": k}),
        MapSpec::NormalizedTrace { n_in, n_out } => {
            json!({"variant": phi.variant_name(), "n_in": n_in, "n_out": n_out})
        }
        MapSpec::Pinching { blocks } => json!({"variant": phi.variant_name(), "blocks": blocks}),
        MapSpec::KrausMixture { terms } => json!({
            "variant": phi.variant_name(),
            "terms": terms.iter().map(|t| json!({"weight": t.weight, "isometry": matrix_to_json(&t.isometry)})).collect::<Vec<_>>(),
        }),
    }
}

/// Also accepts `{"variant": "unitary-conjugation", "unitary": matrix}`.
pub fn map_from_json(v: &Value) -> Result<MapSpec> {
    let n = |key: &str| -> Result<usize> { as_usize(field(v, key)?, key) };
    let phi = match as_str(field(v, "variant")?, "variant")? {
        "compression" => MapSpec::compression(n("n_in")?, n("k")?)?,
        "normalized-trace" => MapSpec::normalized_trace(n("n_in")?, n("n_out")?)?,
        "pinching" => {
            let blocks = as_array(field(v, "blocks")?, "blocks")?
                .iter()
                .map(|b| as_array(b, "block")?.iter().map(|i| as_usize(i, "block index")).collect())
                .collect::<Result<Vec<Vec<usize>>>>()?;
            MapSpec::pinching(blocks)?
        }
        "kraus-mixture" => {
            let terms = as_array(field(v, "terms")?, "terms")?
                .iter()
                .map(|t| {
                    Ok(KrausTerm {
                        weight: as_f64(field(t, "weight")?, "weight")?,
                        isometry: matrix_from_json(field(t, "isometry")?)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            MapSpec::kraus(terms)?
        }
        "unitary-conjugation" => MapSpec::unitary_conjugation(matrix_from_json(field(v, "unitary")?)?)?,
        other => return Err(bad(format!("unknown map variant `{other}`"))),
    };
    let report = phi.validate();
    if !report.passed() {
        return Err(bad(format!("map is not unital positive: {}", report.issues.join("; "))));
    }
    Ok(phi)
}

const PARAM_NAMES: [&str; 6] = ["r", "p", "q", "alpha", "beta", "gamma"];

fn params_slots(p: &ExponentParams) -> [Option<f64>; 6] {
    [p.r, p.p, p.q, p.alpha, p.beta, p.gamma]
}

pub fn params_to_json(p: &ExponentParams) -> Value {
    let mut obj = Map::new();
    for (name, value) in PARAM_NAMES.iter().zip(params_slots(p)) {
        if let Some(x) = value {
            obj.insert((*name).into(), x.into());
        }
    }
    Value::Object(obj)
}

pub fn params_from_json(v: &Value) -> Result<ExponentParams> {
    let obj = v.as_object().ok_or_else(|| bad("`params` is not an object"))?;
    let mut p = ExponentParams::default();
    for (key, value) in obj {
        let x = Some(as_f64(value, key)?);
        match key.as_str() {
            "r" => p.r = x,
            "p" => p.p = x,
            "q" => p.q = x,
            "alpha" => p.alpha = x,
            "beta" => p.beta = x,
            "gamma" => p.gamma = x,
            other => return Err(bad(format!("unknown exponent `{other}`"))),
        }
    }
    Ok(p)
}

pub fn ranges_to_json(r: &ParamRanges) -> Value {
    let slots = [r.r, r.p, r.q, r.alpha, r.beta, r.gamma];
    let mut obj = Map::new();
    for (name, value) in PARAM_NAMES.iter().zip(slots) {
        if let Some((lo, hi)) = value {
            obj.insert((*name).into(), json!([lo, hi]));
        }
    }
    Value::Object(obj)
}

pub fn bounds_to_json(b: &SpectralBounds) -> Value {
    json!({"m": b.m, "M": b.big_m})
}

pub fn bounds_from_json(v: &Value) -> Result<SpectralBounds> {
    Ok(SpectralBounds::new(as_f64(field(v, "m")?, "m")?, as_f64(field(v, "M")?, "M")?)?)
}

pub fn tolerance_to_json(t: &ToleranceConfig) -> Value {
    json!({"atol": t.atol, "rtol": t.rtol})
}

fn claim_to_json(c: &Claim) -> Value {
    json!({"function": c.function, "property": c.property.name()})
}

fn claim_from_json(v: &Value) -> Result<Claim> {
    let function = as_str(field(v, "function")?, "function")?;
    let name = as_str(field(v, "property")?, "property")?;
    let property = OperatorProperty::parse(name).ok_or_else(|| bad(format!("unknown property `{name}`")))?;
    Ok(Claim::new(&parse_fn(function)?, property))
}

pub fn instance_to_json(inst: &Instance) -> Value {
    let mut obj = Map::new();
    obj.insert("phi".into(), map_to_json(&inst.phi));
    obj.insert("a".into(), hermitian_to_json(&inst.a));
    if let Some(b) = &inst.b {
        obj.insert("b".into(), hermitian_to_json(b));
    }
    if let Some(f) = &inst.f {
        obj.insert("f".into(), f.to_string().into());
    }
    if let Some(g) = &inst.g {
        obj.insert("g".into(), g.to_string().into());
    }
    obj.insert("params".into(), params_to_json(&inst.params));
    if let Some(b) = &inst.bounds {
        obj.insert("bounds".into(), bounds_to_json(b));
    }
    if let Some(m) = inst.margin {
        obj.insert("margin".into(), m.into());
    }
    obj.insert("claims".into(), inst.claims.iter().map(claim_to_json).collect());
    obj.insert("seed".into(), inst.seed.into());
    Value::Object(obj)
}

pub fn instance_from_json(v: &Value) -> Result<Instance> {
    let mut inst = Instance::new(map_from_json(field(v, "phi")?)?, hermitian_from_json(field(v, "a")?)?);
    if let Some(b) = opt_field(v, "b") {
        inst.b = Some(hermitian_from_json(b)?);
    }
    if let Some(f) = opt_field(v, "f") {
        inst.f = Some(parse_fn(as_str(f, "f")?)?);
    }
    if let Some(g) = opt_field(v, "g") {
        inst.g = Some(parse_fn(as_str(g, "g")?)?);
    }
    if let Some(p) = opt_field(v, "params") {
        inst.params = params_from_json(p)?;
    }
    if let Some(b) = opt_field(v, "bounds") {
        inst.bounds = Some(bounds_from_json(b)?);
    }
    if let Some(m) = opt_field(v, "margin") {
        inst.margin = Some(as_f64(m, "margin")?);
    }
    if let Some(c) = opt_field(v, "claims") {
        inst.claims = as_array(c, "claims")?.iter().map(claim_from_json).collect::<Result<_>>()?;
    }
    if let Some(s) = opt_field(v, "seed") {
        inst.seed = s.as_u64().ok_or_else(|| bad("`seed` is not a non-negative integer"))?;
    }
    Ok(inst)
}

pub fn family_from_json(v: &Value) -> Result<Family> {
    let name = as_str(v, "family")?;
    Family::parse(name).ok_or_else(|| bad(format!("unknown family `{name}`")))
}

/// Reads `{"family": ..., "instance": {...}}`, a bare instance with an
/// optional `"family"` key, or a certificate.
pub fn tagged_instance_from_json(v: &Value) -> Result<(Option<Family>, Instance)> {
    let family = opt_field(v, "family").map(family_from_json).transpose()?;
    let inst = match opt_field(v, "instance") {
        Some(i) => instance_from_json(i)?,
        None => instance_from_json(v)?,
    };
    Ok((family, inst))
}

pub fn certificate_to_json(c: &Certificate) -> Value {
    json!({
        "family": c.family.name(),
        "violation_eig": c.violation_eig,
        "tolerance": c.tolerance,
        "restart": c.restart,
        "instance": instance_to_json(&c.instance),
    })
}

pub fn certificate_from_json(v: &Value) -> Result<Certificate> {
    Ok(Certificate {
        family: family_from_json(field(v, "family")?)?,
        instance: instance_from_json(field(v, "instance")?)?,
        violation_eig: as_f64(field(v, "violation_eig")?, "violation_eig")?,
        tolerance: as_f64(field(v, "tolerance")?, "tolerance")?,
        restart: opt_field(v, "restart").map(|r| as_usize(r, "restart")).transpose()?.unwrap_or(0),
    })
}

pub fn check_result_to_json(r: &CheckResult, tol: &ToleranceConfig) -> Value {
    let mut obj = Map::new();
    obj.insert("family".into(), r.family.name().into());
    obj.insert("holds".into(), r.verdict.holds.into());
    obj.insert("gap_min_eig".into(), r.verdict.gap_min_eig.into());
    obj.insert("relative_gap".into(), r.relative_gap(tol).into());
    obj.insert("tolerance_used".into(), r.verdict.tolerance_used.into());
    obj.insert("constant".into(), opt_f64(r.constant));
    obj.insert("lhs".into(), hermitian_to_json(&r.lhs));
    obj.insert("rhs".into(), hermitian_to_json(&r.rhs));
    if let Some(w) = &r.isometry {
        obj.insert("isometry".into(), matrix_to_json(&w.isometry));
    }
    if let Some(chain) = &r.chain {
        let links = chain
            .iter()
            .map(|l| json!({"label": l.label, "holds": l.verdict.holds, "gap_min_eig": l.verdict.gap_min_eig}))
            .collect::<Vec<_>>();
        obj.insert("chain".into(), links.into());
    }
    obj.insert("notes".into(), r.notes.clone().into());
    Value::Object(obj)
}

pub fn family_report_to_json(f: &FamilyReport) -> Value {
    let mut obj = Map::new();
    obj.insert("family".into(), f.family.name().into());
    obj.insert("theorem".into(), f.family.is_theorem().into());
    obj.insert("trials".into(), f.trials.into());
    obj.insert("passes".into(), f.passes.into());
    obj.insert("skips".into(), f.skips.into());
    obj.insert("failures".into(), f.failures.into());
    obj.insert("findings".into(), f.findings.into());
    obj.insert("errors".into(), f.errors.into());
    obj.insert("worst_gap".into(), opt_f64(f.worst_gap));
    obj.insert("worst_relative_gap".into(), opt_f64(f.worst_relative_gap));
    if let Some(d) = &f.first_detail {
        obj.insert("first_detail".into(), d.clone().into());
    }
    if let Some(w) = &f.example_witness {
        obj.insert("example_seed".into(), opt_u64(f.example_seed));
        obj.insert("example_witness".into(), instance_to_json(w));
    }
    Value::Object(obj)
}

fn opt_u64(v: Option<u64>) -> Value {
    v.map_or(Value::Null, Value::from)
}

pub fn suite_report_to_json(r: &SuiteReport) -> Value {
    json!({
        "theorem_failures": r.theorem_failures(),
        "errors": r.total_errors(),
        "families": r.families.iter().map(family_report_to_json).collect::<Vec<_>>(),
    })
}

pub fn counterexample_to_json(c: &CounterexampleReport) -> Value {
    json!({
        "phi": map_to_json(&c.phi),
        "a": hermitian_to_json(&c.a),
        "b": hermitian_to_json(&c.b),
        "refutations": [
            {
                "claim": "|Φ(B)Φ(A)| ≤ Φ(A^{1/2} B A^{1/2})",
                "lhs": hermitian_to_json(&c.abs_product),
                "rhs": hermitian_to_json(&c.sqrt_product),
                "gap_min_eig": c.first_gap,
            },
            {
                "claim": "Φ(A)Φ(B)Φ(A) ≤ Φ(ABA)",
                "lhs": hermitian_to_json(&c.sandwich),
                "rhs": hermitian_to_json(&c.phi_aba),
                "gap_min_eig": c.second_gap,
            },
        ],
        "exact_deviation": c.exact_deviation,
        "rounded_deviation": c.rounded_deviation,
    })
}

pub fn convexity_to_json(c: &ConvexityCertificate) -> Value {
    let mut obj = Map::new();
    obj.insert("property".into(), c.property.name().into());
    obj.insert("verdict".into(), c.verdict.name().into());
    obj.insert("dim".into(), c.dim.into());
    obj.insert("trials".into(), c.trials.into());
    obj.insert("max_violation".into(), c.max_violation.into());
    obj.insert("tolerance".into(), c.tolerance.into());
    if let Some(w) = &c.witness {
        obj.insert(
            "witness".into(),
            json!({"a": hermitian_to_json(&w.a), "b": hermitian_to_json(&w.b), "lambda": opt_f64(w.lambda)}),
        );
    }
    Value::Object(obj)
}

pub fn lfmps_to_json(r: &LfmpsReport) -> Value {
    json!({
        "consistent": r.consistent(),
        "all_pass": r.all_pass(),
        "f_concave": convexity_to_json(&r.f_concave),
        "f_monotone": convexity_to_json(&r.f_monotone),
        "t_over_f_monotone": convexity_to_json(&r.t_over_f_monotone),
        "t_times_f_convex": convexity_to_json(&r.t_times_f_convex),
    })
}

pub fn omega_to_json(o: &Omega) -> Value {
    json!({
        "value": o.value,
        "infimum": o.infimum,
        "phi_norm": o.phi_norm,
        "sequence_tail": o.sequence_tail,
        "extrapolated_limit": o.extrapolated_limit,
    })
}

pub fn sharpness_to_json(r: &SharpnessReport) -> Value {
    json!({
        "family": r.family.name(),
        "dim": r.dim,
        "points": r.points.iter().map(|p| json!({
            "ranges": ranges_to_json(&p.ranges),
            "checked": p.checked,
            "skipped": p.skipped,
            "min_relative_gap": opt_f64(p.min_relative_gap),
            "scalar_probe_gap": opt_f64(p.scalar_probe_gap),
        })).collect::<Vec<_>>(),
    })
}

/// `x` with 17 significant digits, a round-trip exact representation.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Pretty-printed JSON with fixed float formatting. Key order is insertion
/// order, so equal values always serialize to equal bytes.
pub fn to_string(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out.push('\n');
    out
}

fn write_value(v: &Value, depth: usize, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => out.push_str(&u.to_string()),
            (None, Some(i)) => out.push_str(&i.to_string()),
            _ => out.push_str(&format_f64(n.as_f64().unwrap_or(f64::NAN))),
        },
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) if items.iter().all(is_leaf_or_pair) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(item, depth, out);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                out.push_str(if i > 0 { ",\n" } else { "\n" });
                indent(depth + 1, out);
                write_value(item, depth + 1, out);
            }
            out.push('\n');
            indent(depth, out);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push('{');
            for (i, (k, item)) in map.iter().enumerate() {
                out.push_str(if i > 0 { ",\n" } else { "\n" });
                indent(depth + 1, out);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(item, depth + 1, out);
            }
            out.push('\n');
            indent(depth, out);
            out.push('}');
        }
    }
}

fn is_leaf(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

/// Scalars and `[re, im]` pairs stay on one line, so matrix rows do too.
fn is_leaf_or_pair(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.len() <= 2 && items.iter().all(is_leaf),
        other => is_leaf(other),
    }
}

fn indent(depth: usize, out: &mut String) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

/// Plain-text rendering of the same structure.
pub fn to_text(v: &Value) -> String {
    let mut out = String::new();
    write_text(v, 0, &mut out);
    out
}

fn text_leaf(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_f64() => format!("{:.6e}", n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(text_leaf).collect();
            format!("[{}]", parts.join(", "))
        }
        other => other.to_string(),
    }
}

fn is_matrix(v: &Value) -> bool {
    v.get("n").is_some() && v.get("entries").is_some_and(Value::is_array)
}

fn write_text(v: &Value, depth: usize, out: &mut String) {
    match v {
        Value::Object(map) if is_matrix(v) => {
            let rows = map["entries"].as_array().into_iter().flatten();
            let complex =
                rows.clone().flat_map(|r| r.as_array().into_iter().flatten()).any(|z| z[1].as_f64() != Some(0.0));
            for row in rows {
                indent(depth, out);
                let cells: Vec<String> = row
                    .as_array()
                    .into_iter()
                    .flatten()
                    .map(|z| {
                        let re = z[0].as_f64().unwrap_or(f64::NAN);
                        let im = z[1].as_f64().unwrap_or(f64::NAN) + 0.0;
                        if complex {
                            format!("{:>24}", format!("{re:.6}{im:+.6}i"))
                        } else {
                            format!("{re:>12.6}")
                        }
                    })
                    .collect();
                out.push_str(&cells.join(" "));
                out.push('\n');
            }
        }
        Value::Object(map) => {
            for (k, item) in map {
                indent(depth, out);
                if matches!(item, Value::Array(a) if !a.is_empty() && a.iter().all(Value::is_string)) {
                    out.push_str(&format!("{k}:\n"));
                    write_text(item, depth + 1, out);
                } else if is_leaf_or_pair(item) || matches!(item, Value::Array(a) if a.iter().all(is_leaf_or_pair)) {
                    out.push_str(&format!("{k}: {}\n", text_leaf(item)));
                } else {
                    out.push_str(&format!("{k}:\n"));
                    write_text(item, depth + 1, out);
                }
            }
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                indent(depth, out);
                if is_leaf_or_pair(item) {
                    out.push_str(&format!("- {}\n", text_leaf(item)));
                } else {
                    out.push_str(&format!("[{i}]\n"));
                    write_text(item, depth + 1, out);
                }
            }
        }
        leaf => {
            indent(depth, out);
            out.push_str(&text_leaf(leaf));
            out.push('\n');
        }
    }
}
