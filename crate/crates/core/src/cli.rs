//! The `wplx` batch front end. Reports are line-oriented text ending in one
//! JSON summary line; `--dot` and `--json` replace the report of `quiver`
//! and `contract` with the bare quiver.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 check failure.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;
use serde_json::{json, Map, Value};

use crate::checks::{run_suite, CheckOptions, Suite, SuiteReport};
use crate::extquiver::{contract_at, quiver_of, ValuedQuiver};
use crate::field::FieldSpec;
use crate::gradedmod::WeightedLineData;
use crate::lgroup::WeightSequence;
use crate::planner::{apply_step, exceptional_points, reduction_plan, Strategy};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;

pub const COMMANDS: [&str; 6] = ["info", "quiver", "contract", "chain", "check", "graded"];

pub const USAGE: &str = "\
usage: wplx <command> --spec FILE [options]

commands:
  info      tube ranks at the marked points and the reduction length r
  quiver    Ext-quiver of the exceptional simples (--dot or --json for the bare quiver)
  contract  lower one weight (--point J) and show the contracted quiver
  chain     run a full reduction plan with per-step vertex counts
  check     run an invariant suite (--suite all|adjunction|ar|quiver|graded)
  graded    run the F / F_λ / F_ρ identities on the degree window

options:
  --spec FILE   weighted line spec (JSON)
  --suite NAME  suite for `check` (default all)
  --point J     point for `contract` (default: first step of the plan)
  --window N    degree window bound, overrides the spec
  --dot         emit DOT
  --json        emit JSON
  --seed S      seed for random modules (default 0)
";

pub const DEFAULT_WINDOW: i64 = 6;

#[derive(Parser, Debug)]
#[command(name = "wplx", disable_help_subcommand = true, override_usage = "wplx <command> --spec FILE [options]")]
struct Args {
    command: Option<String>,
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    suite: Option<String>,
    #[arg(long)]
    point: Option<usize>,
    #[arg(long)]
    window: Option<i64>,
    #[arg(long)]
    dot: bool,
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// A parsed and validated spec file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecFile {
    pub data: WeightedLineData,
    pub window: i64,
    pub strategy: Strategy,
}

impl SpecFile {
    pub fn to_json(&self) -> Value {
        json!({
            "weights": self.data.weights,
            "points": self.data.points,
            "field": self.data.field,
            "window": self.window,
            "strategy": self.strategy,
        })
    }
}

/// One problem found in a spec file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub field: String,
    pub reason: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}: {}", self.line, self.field, self.reason)
    }
}

const SPEC_KEYS: [&str; 5] = ["weights", "points", "field", "window", "strategy"];

/// Line of the first occurrence of `"key"` in the text, or 1.
fn line_of(text: &str, key: &str) -> usize {
    let needle = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&needle)).map_or(1, |i| i + 1)
}

pub fn parse_spec(text: &str) -> Result<SpecFile, Vec<Diagnostic>> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        vec![Diagnostic { line: e.line().max(1), field: "(json)".into(), reason: e.to_string() }]
    })?;
    let Some(obj) = value.as_object() else {
        return Err(vec![Diagnostic { line: 1, field: "(root)".into(), reason: "expected a JSON object".into() }]);
    };
    let mut diags = Vec::new();
    let mut diag = |field: &str, reason: String| {
        diags.push(Diagnostic { line: line_of(text, field), field: field.into(), reason })
    };

    for k in obj.keys().filter(|k| !SPEC_KEYS.contains(&k.as_str())) {
        diag(k, format!("unknown field (expected one of {})", SPEC_KEYS.join(", ")));
    }

    let weights = match obj.get("weights") {
        None => {
            diag("weights", "missing".into());
            None
        }
        Some(v) => match serde_json::from_value::<Vec<i64>>(v.clone()) {
            Err(_) => {
                diag("weights", "expected a list of integers".into());
                None
            }
            Ok(w) => match WeightSequence::new(w) {
                Ok(w) => Some(w),
                Err(e) => {
                    diag("weights", format!("{e} (every p_i must be >= 1)"));
                    None
                }
            },
        },
    };

    let points = match obj.get("points") {
        None => {
            diag("points", "missing".into());
            None
        }
        Some(v) => match serde_json::from_value::<Vec<[i64; 2]>>(v.clone()) {
            Ok(p) => Some(p),
            Err(_) => {
                diag("points", "expected a list of [a, b] integer pairs".into());
                None
            }
        },
    };

    let field = match obj.get("field") {
        None => Some(FieldSpec::default()),
        Some(Value::String(s)) => match FieldSpec::parse(s) {
            Ok(f) => Some(f),
            Err(e) => {
                diag("field", e.to_string());
                None
            }
        },
        Some(_) => {
            diag("field", "expected a string such as \"F_101\" or \"Q\"".into());
            None
        }
    };

    let window = match obj.get("window") {
        None => DEFAULT_WINDOW,
        Some(v) => match v.as_i64() {
            Some(n) if n >= 0 => n,
            _ => {
                diag("window", "expected a non-negative integer".into());
                DEFAULT_WINDOW
            }
        },
    };

    let strategy = match obj.get("strategy") {
        None => Strategy::default(),
        Some(v) => serde_json::from_value::<Strategy>(v.clone()).unwrap_or_else(|_| {
            diag("strategy", "expected \"largest_first\", \"round_robin\" or a list of point indices".into());
            Strategy::default()
        }),
    };

    if let (Some(weights), Some(points), Some(field)) = (weights, points, field) {
        let data = WeightedLineData { weights, points, field };
        match data.validate() {
            Ok(()) => {
                if let Strategy::Explicit(_) = strategy {
                    if let Err(e) = reduction_plan(&data, &strategy) {
                        diag("strategy", e.to_string());
                    }
                }
                if diags.is_empty() {
                    return Ok(SpecFile { data, window, strategy });
                }
            }
            Err(e) => diag("points", e.to_string()),
        }
    }
    Err(diags)
}

/// Runs one invocation; `args` excludes the program name.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match run_inner(args, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}

fn run_inner(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<i32> {
    let argv = std::iter::once("wplx".to_string()).chain(args.iter().cloned());
    let parsed = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                write!(out, "{USAGE}")?;
                return Ok(EXIT_OK);
            }
            writeln!(err, "{}", e.kind())?;
            write!(err, "{USAGE}")?;
            return Ok(EXIT_INVALID);
        }
    };
    let Some(command) = parsed.command.as_deref().filter(|c| COMMANDS.contains(c)) else {
        if let Some(c) = &parsed.command {
            writeln!(err, "unknown command {c:?}")?;
        }
        write!(err, "{USAGE}")?;
        return Ok(EXIT_INVALID);
    };
    let Some(path) = &parsed.spec else {
        writeln!(err, "{command}: --spec FILE is required")?;
        return Ok(EXIT_INVALID);
    };
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            writeln!(err, "{}: {e}", path.display())?;
            return Ok(EXIT_INVALID);
        }
    };
    let mut spec = match parse_spec(&text) {
        Ok(s) => s,
        Err(diags) => {
            for d in diags {
                writeln!(err, "{}: {d}", path.display())?;
            }
            return Ok(EXIT_INVALID);
        }
    };
    if let Some(n) = parsed.window {
        if n < 0 {
            writeln!(err, "--window must be non-negative")?;
            return Ok(EXIT_INVALID);
        }
        spec.window = n;
    }
    let opts = CommandOptions {
        suite: parsed.suite.clone(),
        point: parsed.point,
        dot: parsed.dot,
        json: parsed.json,
        seed: parsed.seed,
    };
    run_command(command, &spec, &opts, out, err)
}

/// Flags that shape a single command.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CommandOptions {
    pub suite: Option<String>,
    pub point: Option<usize>,
    pub dot: bool,
    pub json: bool,
    pub seed: u64,
}

pub fn run_command(
    command: &str,
    spec: &SpecFile,
    opts: &CommandOptions,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::io::Result<i32> {
    match command {
        "info" => cmd_info(spec, out),
        "quiver" => cmd_quiver(spec, opts, out),
        "contract" => cmd_contract(spec, opts, out, err),
        "chain" => cmd_chain(spec, out, err),
        "check" => {
            let name = opts.suite.as_deref().unwrap_or("all");
            let Some(suite) = Suite::parse(name) else {
                writeln!(err, "unknown suite {name:?} (expected one of {})", Suite::NAMES.join(", "))?;
                return Ok(EXIT_INVALID);
            };
            cmd_check(spec, suite, "check", opts, out, err)
        }
        "graded" => cmd_check(spec, Suite::Graded, "graded", opts, out, err),
        other => {
            writeln!(err, "unknown command {other:?}")?;
            write!(err, "{USAGE}")?;
            Ok(EXIT_INVALID)
        }
    }
}

fn summary(out: &mut dyn Write, command: &str, fields: Value) -> std::io::Result<()> {
    let mut obj = Map::new();
    obj.insert("command".into(), json!(command));
    if let Value::Object(rest) = fields {
        obj.extend(rest);
    }
    writeln!(out, "{}", Value::Object(obj))
}

fn exceptional_quiver(weights: &WeightSequence) -> ValuedQuiver {
    quiver_of(&exceptional_points(weights))
}

fn cmd_info(spec: &SpecFile, out: &mut dyn Write) -> std::io::Result<i32> {
    let d = &spec.data;
    writeln!(out, "weights {}", d.weights)?;
    let pts: Vec<String> = d.points.iter().map(|[a, b]| format!("[{a}:{b}]")).collect();
    writeln!(out, "points {}", pts.join(" "))?;
    writeln!(out, "field {}", d.field)?;
    writeln!(out, "window N={}", spec.window)?;
    writeln!(out, "strategy {}", spec.strategy.name())?;
    for p in exceptional_points(&d.weights) {
        let simples: Vec<String> = (1..=p.rank()).map(|j| p.simple_label(j)).collect();
        writeln!(out, "point {}: tube of rank {}, simples {}", p.label, p.rank(), simples.join(" "))?;
    }
    writeln!(out, "ordinary points: tubes of rank 1")?;
    writeln!(out, "r = {}", d.reduction_length())?;
    summary(
        out,
        "info",
        json!({
            "spec": spec.to_json(),
            "ranks": d.weights,
            "simples": d.weights.as_slice().iter().sum::<i64>(),
            "r": d.reduction_length(),
        }),
    )?;
    Ok(EXIT_OK)
}

fn emit_quiver(q: &ValuedQuiver, out: &mut dyn Write, dot: bool) -> std::io::Result<()> {
    if dot {
        write!(out, "{}", q.to_dot())
    } else {
        writeln!(out, "{}", q.to_json())
    }
}

fn describe_quiver(q: &ValuedQuiver, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "{} vertices, {} arrows", q.vertex_count(), q.arrow_count())?;
    for (a, b, v) in q.arrows() {
        writeln!(out, "{a} -> {b} ({},{})", v.s, v.t)?;
    }
    Ok(())
}

fn cmd_quiver(spec: &SpecFile, opts: &CommandOptions, out: &mut dyn Write) -> std::io::Result<i32> {
    let q = exceptional_quiver(&spec.data.weights);
    if opts.dot || opts.json {
        emit_quiver(&q, out, opts.dot)?;
        return Ok(EXIT_OK);
    }
    describe_quiver(&q, out)?;
    summary(out, "quiver", json!({"vertices": q.vertex_count(), "arrows": q.arrow_count()}))?;
    Ok(EXIT_OK)
}

fn cmd_contract(
    spec: &SpecFile,
    opts: &CommandOptions,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::io::Result<i32> {
    let weights = &spec.data.weights;
    let j = match opts.point {
        Some(j) => j,
        None => match reduction_plan(&spec.data, &spec.strategy) {
            Ok(plan) if !plan.is_empty() => plan.steps[0],
            Ok(_) => {
                writeln!(err, "contract: every weight is 1, nothing to contract")?;
                return Ok(EXIT_INVALID);
            }
            Err(e) => {
                writeln!(err, "contract: {e}")?;
                return Ok(EXIT_INVALID);
            }
        },
    };
    let (next, ctx) = match apply_step(&spec.data, j) {
        Ok(r) => r,
        Err(e) => {
            writeln!(err, "contract: {e}")?;
            return Ok(EXIT_INVALID);
        }
    };
    let before = exceptional_quiver(weights);
    let after = match contract_at(&before, &ctx) {
        Ok(q) => q,
        Err(e) => {
            writeln!(err, "contract: {e}")?;
            return Ok(EXIT_CHECK_FAILED);
        }
    };
    let matches = after == exceptional_quiver(&next.weights);
    if opts.dot || opts.json {
        emit_quiver(&after, out, opts.dot)?;
        return Ok(if matches { EXIT_OK } else { EXIT_CHECK_FAILED });
    }
    writeln!(out, "contract at point {j}: {} -> {}", weights, next.weights)?;
    writeln!(
        out,
        "S_λ = {}, S_ρ = {} collapse to S̄ = {}",
        ctx.big_point().simple_label(ctx.s_lambda()),
        ctx.big_point().simple_label(ctx.s_rho()),
        ctx.small_point().simple_label(ctx.s_bar())
    )?;
    describe_quiver(&after, out)?;
    writeln!(out, "matches the quiver of {}: {}", next.weights, if matches { "yes" } else { "no" })?;
    summary(
        out,
        "contract",
        json!({
            "point": j,
            "before": weights,
            "after": next.weights,
            "vertices_before": before.vertex_count(),
            "vertices_after": after.vertex_count(),
            "matches": matches,
        }),
    )?;
    Ok(if matches { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_chain(spec: &SpecFile, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<i32> {
    let plan = match reduction_plan(&spec.data, &spec.strategy) {
        Ok(p) => p,
        Err(e) => {
            writeln!(err, "chain: {e}")?;
            return Ok(EXIT_INVALID);
        }
    };
    let trace = match plan.quiver_trace() {
        Ok(t) => t,
        Err(e) => {
            writeln!(err, "chain: {e}")?;
            return Ok(EXIT_CHECK_FAILED);
        }
    };
    let counts: Vec<usize> = trace.iter().map(|q| q.vertex_count()).collect();
    writeln!(out, "start {} with {} simples in exceptional tubes", plan.chain[0], counts[0])?;
    for (k, &j) in plan.steps.iter().enumerate() {
        writeln!(
            out,
            "step {}: point {j}, {} -> {}, vertices {} -> {}",
            k + 1,
            plan.chain[k],
            plan.chain[k + 1],
            counts[k],
            counts[k + 1]
        )?;
    }
    writeln!(out, "{} steps (strategy {}), r = {}", plan.len(), spec.strategy.name(), spec.data.reduction_length())?;
    let ok = plan.len() as i64 == spec.data.reduction_length() && counts.windows(2).all(|w| w[0] == w[1] + 1);
    let mut fields = plan.to_json();
    fields["vertex_counts"] = json!(counts);
    fields["r"] = json!(spec.data.reduction_length());
    summary(out, "chain", fields)?;
    Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_check(
    spec: &SpecFile,
    suite: Suite,
    command: &str,
    opts: &CommandOptions,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::io::Result<i32> {
    let check_opts = CheckOptions { window: spec.window, seed: opts.seed, ..Default::default() };
    let report: SuiteReport = match run_suite(suite, &spec.data, &check_opts) {
        Ok(r) => r,
        Err(e) => {
            writeln!(err, "{command}: {e}")?;
            return Ok(EXIT_INVALID);
        }
    };
    for c in &report.cases {
        writeln!(out, "{c}")?;
    }
    writeln!(out, "{} passed, {} failed", report.passed(), report.failed())?;
    let mut fields = json!({
        "suite": suite.name(),
        "window": spec.window,
        "seed": opts.seed,
        "passed": report.passed(),
        "failed": report.failed(),
    });
    if opts.json {
        fields["cases"] = report.to_json()["cases"].clone();
    }
    summary(out, command, fields)?;
    Ok(if report.all_passed() { EXIT_OK } else { EXIT_CHECK_FAILED })
}
