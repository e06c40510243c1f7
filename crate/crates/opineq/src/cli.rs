//! `opineq` command line.
//!
//! Exit codes: 0 when no theorem was violated, 1 when a theorem family failed
//! with its hypotheses in force, 2 for usage or input errors, 3 when a
//! numerical routine did not converge.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use opineq_core::constants::{
    kappa, omega, K_m4, K_nakamoto, K_power, K_reverse_theorem, K_three, SpectralBounds, K1, K2,
};
use opineq_core::engine::{
    check, reproduce_counterexamples, CheckContext, CheckResult, Family, HypothesisPolicy, IsometryMode, Outcome,
    ParamRanges, SuiteConfig,
};
use opineq_core::explorer::{revalidate, sharpness_scan, SearchBudget};
use opineq_core::scalar::{certify, lfmps_crosscheck, parse_fn, OperatorProperty};
use opineq_core::ToleranceConfig;
use serde_json::{json, Map, Value};

use crate::json::{
    certificate_from_json, certificate_to_json, check_result_to_json, convexity_to_json, counterexample_to_json,
    lfmps_to_json, omega_to_json, sharpness_to_json, suite_report_to_json, tagged_instance_from_json,
};
use crate::report::{envelope, mode_name, policy_name, render, suite_config_to_json, Format};
use crate::{parallel, Error, Result, Status};

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 16;

#[derive(Debug, Parser)]
#[command(name = "opineq", version, about = "Numerical verification of operator inequalities for unital positive maps")]
pub struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run seeded property suites, or check one instance from `--input`.
    Verify(VerifyArgs),
    /// Reproduce the two published refutations, or re-validate a certificate.
    Counterexample(CounterexampleArgs),
    /// Evaluate Kantorovich type constants and ω.
    Constants(ConstantsArgs),
    /// Randomized hill-climbing search for a violating instance.
    Search(SearchArgs),
    /// Sampling-based operator convexity, concavity or monotonicity check.
    Certify(CertifyArgs),
    /// Minimal relative gaps over a parameter grid, with scalar probes.
    Sharpness(SharpnessArgs),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, default_value_t = ToleranceConfig::default().atol)]
    pub atol: f64,
    #[arg(long, default_value_t = ToleranceConfig::default().rtol)]
    pub rtol: f64,
    /// Evaluate instances whose hypotheses fail instead of skipping them.
    #[arg(long)]
    pub relax: bool,
    #[arg(long, value_enum, default_value = "constructive")]
    pub mode: ModeArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Constructive,
    Dominance,
}

impl CheckArgs {
    fn tol(&self) -> Result<ToleranceConfig> {
        if !(self.atol >= 0.0 && self.rtol >= 0.0 && self.atol.is_finite() && self.rtol.is_finite()) {
            return Err(Error::Usage(format!(
                "tolerances must be finite and non-negative, got atol {} rtol {}",
                self.atol, self.rtol
            )));
        }
        Ok(ToleranceConfig { atol: self.atol, rtol: self.rtol })
    }

    fn context(&self) -> Result<CheckContext> {
        Ok(CheckContext {
            tol: self.tol()?,
            mode: match self.mode {
                ModeArg::Constructive => IsometryMode::Constructive,
                ModeArg::Dominance => IsometryMode::Dominance,
            },
            policy: if self.relax { HypothesisPolicy::Relax } else { HypothesisPolicy::Enforce },
        })
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated family names; defaults to every theorem family.
    #[arg(long, value_delimiter = ',', value_parser = parse_family)]
    pub families: Vec<Family>,
    /// Comma-separated dimensions in [2, 16]; trial k uses dims[k mod len].
    #[arg(long, value_delimiter = ',', value_parser = parse_dim, default_value = "2,3,4,5,6,7,8")]
    pub dims: Vec<usize>,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Exponent override `NAME=LO:HI` (or `NAME=VALUE`); repeatable.
    #[arg(long = "range", value_parser = parse_range)]
    pub ranges: Vec<RangeArg>,
    /// Run trials on one thread.
    #[arg(long)]
    pub serial: bool,
    /// Check the single instance in this JSON file instead of running suites.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub check: CheckArgs,
}

#[derive(Debug, Args)]
pub struct CounterexampleArgs {
    /// Reproduce the two published 3×3 refutations.
    #[arg(long)]
    pub published: bool,
    /// Re-validate a certificate written by `search --emit-certificate`.
    #[arg(long, conflicts_with = "published")]
    pub certificate: Option<PathBuf>,
    #[command(flatten)]
    pub check: CheckArgs,
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    /// `h=.. p=..`
    #[arg(long, num_args = 1.., value_name = "KEY=VALUE")]
    pub kappa: Option<Vec<String>>,
    /// `m=.. M=.. p=..`
    #[arg(long = "k-power", num_args = 1.., value_name = "KEY=VALUE")]
    pub k_power: Option<Vec<String>>,
    /// `m=.. M=.. f=..`
    #[arg(long, num_args = 1.., value_name = "KEY=VALUE")]
    pub k1: Option<Vec<String>>,
    /// `m=.. M=.. f=..`
    #[arg(long, num_args = 1.., value_name = "KEY=VALUE")]
    pub k2: Option<Vec<String>>,
    /// `h=.. gamma=..`
    #[arg(long, num_args = 1.., value_name = "KEY=VALUE")]
    pub nakamoto: Option<Vec<String>>,
    /// `h=.. alpha=.. beta=..`
    #[arg(long, num_args = 1.., value_name = "KEY=VALUE")]
    pub m4: Option<Vec<String>>,
    /// `h=.. alpha=.. beta=.. gamma=..`
    #[arg(long, num_args = 1.., value_name = "KEY=VALUE")]
    pub three: Option<Vec<String>>,
    /// `m=.. M=.. f=..`
    #[arg(long, num_args = 1.., value_name = "KEY=VALUE")]
    pub reverse: Option<Vec<String>>,
    /// `r=..`; needs `--input` with `phi` and `a`.
    #[arg(long, num_args = 1.., value_name = "KEY=VALUE", requires = "input")]
    pub omega: Option<Vec<String>>,
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    #[arg(long, value_parser = parse_dim, default_value_t = 3)]
    pub dim: usize,
    #[arg(long, default_value_t = SearchBudget::default().max_samples as u64, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = SearchBudget::default().hill_climb_steps)]
    pub steps: usize,
    #[arg(long, default_value_t = SearchBudget::default().step_scale)]
    pub step_scale: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "range", value_parser = parse_range)]
    pub ranges: Vec<RangeArg>,
    /// Write the certificate (if any) to this path.
    #[arg(long)]
    pub emit_certificate: Option<PathBuf>,
    #[arg(long)]
    pub serial: bool,
    #[command(flatten)]
    pub check: CheckArgs,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    /// Scalar function, e.g. `pow(t,0.5)`.
    #[arg(long)]
    pub function: String,
    /// convex, concave or monotone.
    #[arg(long, value_parser = parse_property, required_unless_present = "lfmps")]
    pub property: Option<OperatorProperty>,
    /// Cross-check the four equivalent characterizations of operator monotone functions.
    #[arg(long, conflicts_with = "property")]
    pub lfmps: bool,
    #[arg(long, value_parser = parse_dim, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SharpnessArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    #[arg(long, value_parser = parse_dim, default_value_t = 3)]
    pub dim: usize,
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Grid `NAME=V1,V2,...` over one exponent; omitted means the default ranges.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long, default_value_t = ToleranceConfig::default().atol)]
    pub atol: f64,
    #[arg(long, default_value_t = ToleranceConfig::default().rtol)]
    pub rtol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RangeArg {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    Family::parse(s.trim()).ok_or_else(|| {
        let known: Vec<&str> = Family::all().iter().map(|f| f.name()).collect();
        format!("unknown family `{s}`; known: {}", known.join(", "))
    })
}

fn parse_dim(s: &str) -> std::result::Result<usize, String> {
    let n: usize = s.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
    if (MIN_DIM..=MAX_DIM).contains(&n) {
        Ok(n)
    } else {
        Err(format!("dimension {n} outside [{MIN_DIM}, {MAX_DIM}]"))
    }
}

fn parse_property(s: &str) -> std::result::Result<OperatorProperty, String> {
    OperatorProperty::parse(s).ok_or_else(|| format!("unknown property `{s}`; use convex, concave or monotone"))
}

fn parse_number(s: &str) -> std::result::Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn parse_range(s: &str) -> std::result::Result<RangeArg, String> {
    let (name, span) = s.split_once('=').ok_or_else(|| format!("expected NAME=LO:HI, got `{s}`"))?;
    let (lo, hi) = match span.split_once(':') {
        Some((lo, hi)) => (parse_number(lo)?, parse_number(hi)?),
        None => {
            let x = parse_number(span)?;
            (x, x)
        }
    };
    if lo > hi {
        return Err(format!("empty range {lo}:{hi}"));
    }
    let arg = RangeArg { name: name.trim().to_string(), lo, hi };
    apply_range(&mut ParamRanges::default(), &arg)?;
    Ok(arg)
}

fn apply_range(r: &mut ParamRanges, arg: &RangeArg) -> std::result::Result<(), String> {
    let slot = match arg.name.as_str() {
        "r" => &mut r.r,
        "p" => &mut r.p,
        "q" => &mut r.q,
        "alpha" => &mut r.alpha,
        "beta" => &mut r.beta,
        "gamma" => &mut r.gamma,
        other => return Err(format!("unknown exponent `{other}`; use r, p, q, alpha, beta or gamma")),
    };
    *slot = Some((arg.lo, arg.hi));
    Ok(())
}

fn ranges_from(args: &[RangeArg]) -> Result<ParamRanges> {
    let mut r = ParamRanges::default();
    for a in args {
        apply_range(&mut r, a).map_err(Error::Usage)?;
    }
    Ok(r)
}

fn read_json(path: &Path) -> Result<Value> {
    let text =
        std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
    serde_json::from_str(&text).map_err(|e| Error::Json(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io { path: path.display().to_string(), source })
}

/// A failed check that a theorem forbids: a theorem family with no relaxed hypothesis.
pub fn is_theorem_violation(r: &CheckResult) -> bool {
    !r.verdict.holds && r.family.is_theorem() && !r.notes.iter().any(|n| n.starts_with("hypothesis relaxed"))
}

/// Result of a command: exit status and the full report.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutcome {
    pub status: Status,
    pub report: Value,
}

pub fn execute(cli: &Cli) -> Result<CommandOutcome> {
    match &cli.command {
        Command::Verify(a) => verify(a),
        Command::Counterexample(a) => counterexample(a),
        Command::Constants(a) => constants(a),
        Command::Search(a) => search(a),
        Command::Certify(a) => certify_cmd(a),
        Command::Sharpness(a) => sharpness(a),
    }
}

fn verify(a: &VerifyArgs) -> Result<CommandOutcome> {
    let ctx = a.check.context()?;
    if let Some(path) = &a.input {
        return verify_instance(a, path, &ctx);
    }
    let config = SuiteConfig {
        families: if a.families.is_empty() { Family::theorems().collect() } else { a.families.clone() },
        dims: a.dims.clone(),
        trials: a.trials as usize,
        seed: a.seed,
        tol: ctx.tol,
        mode: ctx.mode,
        policy: ctx.policy,
        ranges: ranges_from(&a.ranges)?,
    };
    let report = if a.serial { opineq_core::engine::run_suite(&config) } else { parallel::run_suite(&config) };
    let status = if report.theorem_failures() > 0 {
        Status::Violation
    } else if report.total_errors() > 0 {
        Status::NonConvergence
    } else {
        Status::Ok
    };
    let body = suite_report_to_json(&report);
    Ok(CommandOutcome { status, report: envelope("verify", a.seed, &ctx.tol, suite_config_to_json(&config), body) })
}

fn verify_instance(a: &VerifyArgs, path: &Path, ctx: &CheckContext) -> Result<CommandOutcome> {
    let (tagged, inst) = tagged_instance_from_json(&read_json(path)?)?;
    let family = match (tagged, a.families.as_slice()) {
        (Some(f), []) => f,
        (Some(f), [g]) if f == *g => f,
        (None, [g]) => *g,
        (Some(f), _) => {
            return Err(Error::Usage(format!("input names family {f}; pass at most that one with --families")))
        }
        (None, _) => return Err(Error::Usage("input has no \"family\"; pass exactly one with --families".into())),
    };
    let config = json!({
        "input": path.display().to_string(),
        "family": family.name(),
        "mode": mode_name(ctx.mode),
        "policy": policy_name(ctx.policy),
    });
    let (status, body) = match check(family, &inst, ctx)? {
        Outcome::Skipped { reason, .. } => (Status::Ok, json!({"family": family.name(), "skipped": reason})),
        Outcome::Checked(r) => {
            let status = if is_theorem_violation(&r) { Status::Violation } else { Status::Ok };
            (status, check_result_to_json(&r, &ctx.tol))
        }
    };
    Ok(CommandOutcome { status, report: envelope("verify", inst.seed, &ctx.tol, config, body) })
}

fn counterexample(a: &CounterexampleArgs) -> Result<CommandOutcome> {
    let ctx = a.check.context()?;
    if let Some(path) = &a.certificate {
        let cert = certificate_from_json(&read_json(path)?)?;
        let reproduced = revalidate(&cert, &ctx);
        let body = json!({
            "family": cert.family.name(),
            "stored_violation_eig": cert.violation_eig,
            "revalidated": reproduced.is_some(),
            "violation_eig": reproduced,
        });
        let config = json!({"certificate": path.display().to_string(), "policy": policy_name(ctx.policy)});
        let theorem = cert.family.is_theorem() && ctx.policy == HypothesisPolicy::Enforce;
        let status = if theorem && reproduced.is_some() { Status::Violation } else { Status::Ok };
        return Ok(CommandOutcome {
            status,
            report: envelope("counterexample", cert.instance.seed, &ctx.tol, config, body),
        });
    }
    if !a.published {
        return Err(Error::Usage("nothing to reproduce: pass --published or --certificate PATH".into()));
    }
    let rep = reproduce_counterexamples()?;
    let config = json!({"source": "published"});
    Ok(CommandOutcome {
        status: Status::Ok,
        report: envelope("counterexample", 0, &ctx.tol, config, counterexample_to_json(&rep)),
    })
}

/// Parsed `KEY=VALUE` list, kept in argument order for the echo.
struct KeyValues {
    what: &'static str,
    pairs: Vec<(String, String)>,
}

impl KeyValues {
    fn parse(what: &'static str, items: &[String]) -> Result<Self> {
        let mut pairs = Vec::new();
        for item in items {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Usage(format!("--{what}: expected KEY=VALUE, got `{item}`")))?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(Self { what, pairs })
    }

    fn raw(&self, key: &str) -> Result<&str> {
        self.pairs
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| Error::Usage(format!("--{}: missing `{key}=`", self.what)))
    }

    fn num(&self, key: &str) -> Result<f64> {
        parse_number(self.raw(key)?).map_err(|e| Error::Usage(format!("--{}: {key}: {e}", self.what)))
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        for (k, _) in &self.pairs {
            if !allowed.contains(&k.as_str()) {
                return Err(Error::Usage(format!(
                    "--{}: unknown key `{k}`; expected {}",
                    self.what,
                    allowed.join(", ")
                )));
            }
        }
        Ok(())
    }

    fn echo(&self) -> Value {
        let mut obj = Map::new();
        for (k, v) in &self.pairs {
            let value = parse_number(v).map_or_else(|_| Value::from(v.clone()), Value::from);
            obj.insert(k.clone(), value);
        }
        Value::Object(obj)
    }

    fn bounds(&self) -> Result<SpectralBounds> {
        Ok(SpectralBounds::new(self.num("m")?, self.num("M")?)?)
    }
}

fn constants(a: &ConstantsArgs) -> Result<CommandOutcome> {
    let mut out = Vec::new();
    let mut push = |name: &str, kv: &KeyValues, value: f64| {
        out.push(json!({"name": name, "inputs": kv.echo(), "value": value}));
    };
    type Eval = fn(&KeyValues) -> Result<f64>;
    type Row<'a> = (&'static str, &'a Option<Vec<String>>, &'static [&'static str], Eval);
    let table: [Row; 8] = [
        ("kappa", &a.kappa, &["h", "p"], |kv| Ok(kappa(kv.num("h")?, kv.num("p")?)?)),
        ("k-power", &a.k_power, &["m", "M", "p"], |kv| Ok(K_power(kv.bounds()?, kv.num("p")?)?)),
        ("k1", &a.k1, &["m", "M", "f"], |kv| Ok(K1(kv.bounds()?, &parse_fn(kv.raw("f")?)?)?)),
        ("k2", &a.k2, &["m", "M", "f"], |kv| Ok(K2(kv.bounds()?, &parse_fn(kv.raw("f")?)?)?)),
        ("nakamoto", &a.nakamoto, &["h", "gamma"], |kv| Ok(K_nakamoto(kv.num("h")?, kv.num("gamma")?)?)),
        ("m4", &a.m4, &["h", "alpha", "beta"], |kv| Ok(K_m4(kv.num("h")?, kv.num("alpha")?, kv.num("beta")?)?)),
        ("three", &a.three, &["h", "alpha", "beta", "gamma"], |kv| {
            Ok(K_three(kv.num("h")?, kv.num("alpha")?, kv.num("beta")?, kv.num("gamma")?)?)
        }),
        ("reverse", &a.reverse, &["m", "M", "f"], |kv| Ok(K_reverse_theorem(kv.bounds()?, &parse_fn(kv.raw("f")?)?)?)),
    ];
    for (name, items, keys, eval) in table {
        if let Some(items) = items {
            let kv = KeyValues::parse(name, items)?;
            kv.check_keys(keys)?;
            push(name, &kv, eval(&kv)?);
        }
    }
    if let Some(items) = &a.omega {
        let kv = KeyValues::parse("omega", items)?;
        kv.check_keys(&["r"])?;
        let path = a.input.as_ref().ok_or_else(|| Error::Usage("--omega needs --input".into()))?;
        let (_, inst) = tagged_instance_from_json(&read_json(path)?)?;
        let om = omega(&inst.phi, &inst.a, kv.num("r")?)?;
        out.push(json!({"name": "omega", "inputs": kv.echo(), "value": om.value, "details": omega_to_json(&om)}));
    }
    if out.is_empty() {
        return Err(Error::Usage("no constant requested; see `opineq constants --help`".into()));
    }
    let config = json!({"input": a.input.as_ref().map(|p| p.display().to_string())});
    Ok(CommandOutcome {
        status: Status::Ok,
        report: envelope("constants", 0, &ToleranceConfig::default(), config, Value::Array(out)),
    })
}

fn search(a: &SearchArgs) -> Result<CommandOutcome> {
    let ctx = a.check.context()?;
    if !(a.step_scale > 0.0 && a.step_scale.is_finite()) {
        return Err(Error::Usage(format!("--step-scale must be positive, got {}", a.step_scale)));
    }
    let budget = SearchBudget {
        max_samples: a.samples as usize,
        hill_climb_steps: a.steps,
        step_scale: a.step_scale,
        seed: a.seed,
    };
    let ranges = ranges_from(&a.ranges)?;
    let cert = if a.serial {
        opineq_core::explorer::search_violation(a.family, a.dim, &ranges, &budget, &ctx)?
    } else {
        parallel::search_violation(a.family, a.dim, &ranges, &budget, &ctx)?
    };
    let mut status = Status::Ok;
    let body = match &cert {
        None => json!({"family": a.family.name(), "found": false}),
        Some(c) => {
            if let Outcome::Checked(r) = check(c.family, &c.instance, &ctx)? {
                if is_theorem_violation(&r) {
                    status = Status::Violation;
                }
            }
            if let Some(path) = &a.emit_certificate {
                write_file(path, &crate::json::to_string(&certificate_to_json(c)))?;
            }
            json!({
                "family": a.family.name(),
                "found": true,
                "revalidated": revalidate(c, &ctx).is_some(),
                "certificate": certificate_to_json(c),
            })
        }
    };
    let config = json!({
        "family": a.family.name(),
        "dim": a.dim,
        "max_samples": budget.max_samples,
        "hill_climb_steps": budget.hill_climb_steps,
        "step_scale": budget.step_scale,
        "restarts": budget.restarts(),
        "mode": mode_name(ctx.mode),
        "policy": policy_name(ctx.policy),
        "ranges": crate::json::ranges_to_json(&ranges),
    });
    Ok(CommandOutcome { status, report: envelope("search", a.seed, &ctx.tol, config, body) })
}

fn certify_cmd(a: &CertifyArgs) -> Result<CommandOutcome> {
    let f = parse_fn(&a.function)?;
    let body = match a.property {
        Some(p) => convexity_to_json(&certify(&f, p, a.dim, a.trials as usize, a.seed)?),
        None => lfmps_to_json(&lfmps_crosscheck(&f, a.dim, a.trials as usize, a.seed)?),
    };
    let config = json!({
        "function": f.to_string(),
        "property": a.property.map_or("lfmps", |p| p.name()),
        "dim": a.dim,
        "trials": a.trials,
    });
    Ok(CommandOutcome {
        status: Status::Ok,
        report: envelope("certify", a.seed, &ToleranceConfig::default(), config, body),
    })
}

fn sharpness(a: &SharpnessArgs) -> Result<CommandOutcome> {
    let tol = CheckArgs { atol: a.atol, rtol: a.rtol, relax: false, mode: ModeArg::Constructive }.tol()?;
    let grid = match &a.grid {
        None => vec![ParamRanges::default()],
        Some(spec) => {
            let (name, values) = spec
                .split_once('=')
                .ok_or_else(|| Error::Usage(format!("--grid: expected NAME=V1,V2,..., got `{spec}`")))?;
            values
                .split(',')
                .map(|v| {
                    let x = parse_number(v).map_err(Error::Usage)?;
                    let mut r = ParamRanges::default();
                    apply_range(&mut r, &RangeArg { name: name.trim().to_string(), lo: x, hi: x })
                        .map_err(Error::Usage)?;
                    Ok(r)
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    let rep = sharpness_scan(a.family, a.dim, &grid, a.trials as usize, a.seed, tol)?;
    let config = json!({"family": a.family.name(), "dim": a.dim, "trials": a.trials, "grid": a.grid});
    Ok(CommandOutcome {
        status: Status::Ok,
        report: envelope("sharpness", a.seed, &tol, config, sharpness_to_json(&rep)),
    })
}

/// Parses `args`, runs the command, writes the report and returns the exit status.
pub fn run<I, T>(args: I) -> Status
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { Status::Usage } else { Status::Ok };
        }
    };
    let format = match cli.format {
        FormatArg::Json => Format::Json,
        FormatArg::Text => Format::Text,
    };
    let outcome = execute(&cli).and_then(|o| {
        let text = render(&o.report, format);
        match &cli.output {
            Some(path) => write_file(path, &text)?,
            None => print!("{text}"),
        }
        Ok(o.status)
    });
    match outcome {
        Ok(status) => status,
        Err(e) => {
            eprintln!("error: {e}");
            e.status()
        }
    }
}
