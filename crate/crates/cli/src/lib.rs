//! Batch front end: scenario files in, JSON reports out.

use clap::{Parser, Subcommand, ValueEnum};
use mpcomm_core::distributed::{
    advantage_curve, certify_perfect_exclusion, classical_bound, curve_csv, explicit_advantage, pbr_antidist,
    pbr_optimal_ratio, pbr_ratio, pbr_theta_range, sufficient_condition, DistributedError, DistributedTask,
};
use mpcomm_core::quantum::mat::{c, CVec};
use mpcomm_core::quantum::{
    antidistinguishability, helstrom_antidist_two, min_total_resource, seesaw, verify_strategy, ConicError,
    DensityMatrix, QuantumError, SeeSawConfig, Strategy, TotalVariant,
};
use mpcomm_core::rational::{approximate, format_rational, parse_rational, to_f64};
use mpcomm_core::scenario::{
    parse_inequality, Caps, ClassicalModel, FigureOfMerit, ParsedInequality, ScenarioError, ScenarioSpec,
};
use mpcomm_core::Rational;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Parser, Debug, Clone, Serialize)]
#[command(name = "mpcomm", version, about = "Classical and quantum bounds for multi-sender communication")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Scenario JSON file.
    #[arg(long, global = true)]
    pub scenario: Option<PathBuf>,
    /// Figure of merit or inequality, or the name of one listed in the scenario file.
    #[arg(long, global = true)]
    pub fom: Option<String>,
    /// Comma-separated resource values, e.g. `0.85,17/20`.
    #[arg(long, global = true)]
    pub resources: Option<String>,
    /// Local dimension of each sender's message.
    #[arg(long, global = true, default_value_t = 4)]
    pub dim: usize,
    #[arg(long, global = true, default_value_t = 20)]
    pub restarts: usize,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// See-saw convergence tolerance.
    #[arg(long, global = true, default_value_t = 1e-7)]
    pub tol: f64,
    /// JSON report path.
    #[arg(long, global = true, default_value = "mpcomm-report.json")]
    pub out: PathBuf,
    #[arg(long, global = true)]
    pub cap_decoders: Option<u128>,
    #[arg(long, global = true)]
    pub cap_vertices: Option<u128>,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
pub enum Command {
    /// Facet classes of the extended classical polytope.
    Facets,
    /// Exact classical value at the given resources.
    ClassicalValue,
    /// Smallest classical resources reaching a target value.
    ClassicalTotal {
        #[arg(long)]
        target: f64,
        /// Sender (1-based) whose resource is minimised with the others at 1.
        #[arg(long, default_value_t = 1)]
        sender: usize,
    },
    /// See-saw lower bound on the quantum value at the given resources.
    Seesaw {
        /// Restrict states and measurements to real matrices.
        #[arg(long)]
        real: bool,
    },
    /// Smallest quantum resources reaching a target value.
    Total {
        #[arg(long)]
        target: f64,
        #[arg(long, value_enum, default_value_t = VariantArg::Single)]
        variant: VariantArg,
        #[arg(long, default_value_t = 1)]
        sender: usize,
    },
    /// Checks a strategy file and compares it with the classical value.
    Verify {
        #[arg(long)]
        strategy: PathBuf,
    },
    /// Anti-distinguishability of a set of pure states.
    Antidist {
        #[arg(long)]
        states: PathBuf,
        /// Comma-separated priors; uniform if omitted.
        #[arg(long)]
        priors: Option<String>,
    },
    /// Advantage for excluding a distributed input string.
    Distributed {
        #[arg(long = "N")]
        senders: usize,
        #[arg(long = "n")]
        inputs: usize,
        /// Target success.
        #[arg(long = "s")]
        success: f64,
        /// Pure states shared by every sender; see-saw search if omitted.
        #[arg(long)]
        states: Option<PathBuf>,
    },
    /// Product-state exclusion ratios over a range of sender numbers.
    Pbr {
        /// `N` or `lo..hi` (inclusive).
        #[arg(long = "n", default_value = "2..10")]
        range: String,
        #[arg(long)]
        theta: Option<f64>,
        /// Certify perfect exclusion by SDP for N <= 3.
        #[arg(long)]
        certify: bool,
    },
    /// Quantum and classical resources along a grid of target successes.
    Curve {
        #[arg(long = "N")]
        senders: usize,
        #[arg(long = "n")]
        inputs: usize,
        /// Comma-separated successes; evenly spaced from the floor to 1 if omitted.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, default_value_t = 21)]
        points: usize,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VariantArg {
    Sum,
    Product,
    Single,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Size(String),
    #[error("{0}")]
    Unachievable(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    /// 2 infeasible or unachievable, 3 numerical failure, 4 parse or size errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Unachievable(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Input(_) | CliError::Size(_) => 4,
        }
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        let m = e.to_string();
        match e {
            ScenarioError::InfeasibleResources | ScenarioError::Unachievable(_) => CliError::Unachievable(m),
            ScenarioError::SizeOverflow { .. } => {
                CliError::Size(m)
            }
            _ => CliError::Input(m),
        }
    }
}

impl From<QuantumError> for CliError {
    fn from(e: QuantumError) -> Self {
        let m = e.to_string();
        match e {
            QuantumError::Unachievable { .. } | QuantumError::Conic(ConicError::Infeasible | ConicError::Unbounded) => {
                CliError::Unachievable(m)
            }
            QuantumError::Conic(ConicError::NumericalFailure { .. }) => CliError::Numerical(m),
            _ => CliError::Input(m),
        }
    }
}

impl From<DistributedError> for CliError {
    fn from(e: DistributedError) -> Self {
        match e {
            DistributedError::Quantum(q) => q.into(),
            DistributedError::Scenario(s) => s.into(),
            DistributedError::Unachievable { .. } => CliError::Unachievable(e.to_string()),
            DistributedError::SizeOverflow { .. } => CliError::Size(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub config: Cli,
    pub inputs_digest: String,
    pub results: Value,
    pub wall_clock_s: f64,
    pub version: String,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    /// Human-readable summary for standard output.
    pub table: String,
}

/// Input bytes hashed into the report digest.
struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    fn new() -> Self {
        Self { hasher: Sha256::new() }
    }

    fn add(&mut self, label: &str, bytes: &[u8]) {
        self.hasher.update(label.as_bytes());
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(bytes);
    }

    fn read(&mut self, path: &Path) -> Result<String, CliError> {
        let s = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        self.add(&path.display().to_string(), s.as_bytes());
        Ok(s)
    }

    fn digest(self) -> String {
        self.hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Scenario plus the named inequalities listed alongside it.
pub struct ScenarioFile {
    pub spec: ScenarioSpec,
    pub inequalities: BTreeMap<String, String>,
}

pub fn load_scenario(text: &str) -> Result<ScenarioFile, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Input(format!("scenario: {e}")))?;
    let spec: ScenarioSpec = serde_json::from_value(v.clone()).map_err(|e| CliError::Input(format!("scenario: {e}")))?;
    let inequalities = match v.get("inequalities") {
        Some(m) => serde_json::from_value(m.clone()).map_err(|e| CliError::Input(format!("inequalities: {e}")))?,
        None => BTreeMap::new(),
    };
    Ok(ScenarioFile { spec, inequalities })
}

/// A figure of merit, with its classical bound when given as an inequality.
pub struct Objective {
    pub fom: FigureOfMerit,
    pub inequality: Option<ParsedInequality>,
    pub text: String,
}

pub fn parse_objective(file: &ScenarioFile, fom: &str) -> Result<Objective, CliError> {
    let text = file.inequalities.get(fom).cloned().unwrap_or_else(|| fom.to_string());
    if text.contains("<=") {
        let ineq = parse_inequality(&file.spec, &text)?;
        Ok(Objective { fom: ineq.fom.clone(), inequality: Some(ineq), text })
    } else {
        Ok(Objective { fom: FigureOfMerit::parse(&file.spec, &text)?, inequality: None, text })
    }
}

pub fn parse_list(s: &str) -> Result<Vec<Rational>, CliError> {
    s.split(',').map(|t| parse_rational(t).map_err(|e| CliError::Input(e.to_string()))).collect()
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>, CliError> {
    Ok(parse_list(s)?.iter().map(to_f64).collect())
}

#[derive(serde::Deserialize)]
struct KetsFile {
    kets: Vec<Vec<[f64; 2]>>,
}

pub fn load_kets(text: &str) -> Result<Vec<CVec>, CliError> {
    let f: KetsFile = serde_json::from_str(text).map_err(|e| CliError::Input(format!("states: {e}")))?;
    Ok(f.kets.iter().map(|k| CVec::from_iterator(k.len(), k.iter().map(|z| c(z[0], z[1])))).collect())
}

fn caps(cli: &Cli) -> Result<Caps, CliError> {
    let mut caps = Caps::default();
    for (v, slot) in [(cli.cap_decoders, &mut caps.decoders), (cli.cap_vertices, &mut caps.vertices)] {
        if let Some(v) = v {
            if v == 0 {
                return Err(CliError::Input("caps must be positive".into()));
            }
            *slot = v;
        }
    }
    Ok(caps)
}

fn seesaw_config(cli: &Cli) -> Result<SeeSawConfig, CliError> {
    if cli.dim == 0 || cli.restarts == 0 || !(cli.tol > 0.0) {
        return Err(CliError::Input("dim, restarts and tol must be positive".into()));
    }
    Ok(SeeSawConfig { dim: cli.dim, restarts: cli.restarts, seed: cli.seed, tol: cli.tol, ..Default::default() })
}

fn require<'a, T>(v: &'a Option<T>, flag: &str) -> Result<&'a T, CliError> {
    v.as_ref().ok_or_else(|| CliError::Input(format!("--{flag} is required for this command")))
}

fn rationals_json(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

/// Exact resources nearest to audited floating-point values, kept in range.
fn snap_resources(spec: &ScenarioSpec, r: &[f64]) -> Vec<Rational> {
    r.iter()
        .enumerate()
        .map(|(i, &x)| {
            let lb = to_f64(&spec.resource_lower_bound(i));
            approximate(x.clamp(lb, 1.0), 1_000_000_000_000)
        })
        .collect()
}

fn ratio_or_null(num: f64, den: f64) -> Value {
    if den > 0.0 && num.is_finite() {
        json!(num / den)
    } else {
        Value::Null
    }
}

/// Runs one command, writes the JSON report to `--out`, and returns it with a text summary.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let mut inputs = Inputs::new();
    inputs.add("config", serde_json::to_string(&cli.command).unwrap().as_bytes());
    for (label, v) in [("fom", &cli.fom), ("resources", &cli.resources)] {
        if let Some(v) = v {
            inputs.add(label, v.as_bytes());
        }
    }
    let mut table = String::new();
    let results = dispatch(cli, &mut inputs, &mut table)?;
    let report = Report {
        command: command_name(&cli.command).to_string(),
        config: cli.clone(),
        inputs_digest: inputs.digest(),
        results,
        wall_clock_s: start.elapsed().as_secs_f64(),
        version: env!("CARGO_PKG_VERSION").to_string(),
    };
    let text = serde_json::to_string_pretty(&report).unwrap();
    std::fs::write(&cli.out, text + "\n").map_err(|e| CliError::Input(format!("{}: {e}", cli.out.display())))?;
    Ok(Outcome { report, table })
}

pub fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Facets => "facets",
        Command::ClassicalValue => "classical-value",
        Command::ClassicalTotal { .. } => "classical-total",
        Command::Seesaw { .. } => "seesaw",
        Command::Total { .. } => "total",
        Command::Verify { .. } => "verify",
        Command::Antidist { .. } => "antidist",
        Command::Distributed { .. } => "distributed",
        Command::Pbr { .. } => "pbr",
        Command::Curve { .. } => "curve",
    }
}

fn dispatch(cli: &Cli, inputs: &mut Inputs, out: &mut String) -> Result<Value, CliError> {
    let mut scenario = || -> Result<ScenarioFile, CliError> { load_scenario(&inputs.read(require(&cli.scenario, "scenario")?)?) };
    match &cli.command {
        Command::Facets => {
            let file = scenario()?;
            let model = ClassicalModel::new(&file.spec, caps(cli)?)?;
            let t = model.facet_table(None)?;
            let _ = writeln!(
                out,
                "{}: {} facets, {} trivial, {} nontrivial classes, {} vertices",
                file.spec.label(),
                t.total,
                t.trivial_count,
                t.nontrivial().count(),
                t.n_vertices
            );
            let _ = writeln!(out, "{:>6}  inequality", "orbit");
            for cl in t.nontrivial() {
                let _ = writeln!(out, "{:>6}  {}", cl.orbit_size, cl.representative.display(&file.spec));
            }
            let mut v = t.to_json();
            let listed: BTreeMap<&String, Value> = file
                .inequalities
                .iter()
                .map(|(k, s)| {
                    let class = parse_inequality(&file.spec, s).ok().and_then(|i| t.find(&i));
                    (k, json!(class))
                })
                .collect();
            v["listed_classes"] = json!(listed);
            Ok(v)
        }
        Command::ClassicalValue => {
            let file = scenario()?;
            let obj = parse_objective(&file, require(&cli.fom, "fom")?)?;
            let r = parse_list(require(&cli.resources, "resources")?)?;
            let model = ClassicalModel::new(&file.spec, caps(cli)?)?;
            let v = model.value(&obj.fom, &r)?;
            let bound = obj.inequality.as_ref().map(|i| format_rational(&i.bound(&r)));
            let _ = writeln!(out, "classical value {} ({:.10})", format_rational(&v), to_f64(&v));
            Ok(json!({
                "fom": obj.text,
                "resources": rationals_json(&r),
                "value": format_rational(&v),
                "value_f64": to_f64(&v),
                "facet_bound": bound,
            }))
        }
        Command::ClassicalTotal { target, sender } => {
            let file = scenario()?;
            let obj = parse_objective(&file, require(&cli.fom, "fom")?)?;
            let model = ClassicalModel::new(&file.spec, caps(cli)?)?;
            let total = model.total(&obj.fom, *target)?;
            let i = sender_index(*sender, file.spec.n_senders())?;
            let single = model.min_sender_resource(&obj.fom, *target, i)?;
            let _ = writeln!(out, "product minimum {:.10} at {:?}", total.product, total.resources);
            let _ = writeln!(out, "sender {sender} alone {:.10}", to_f64(&single));
            Ok(json!({
                "fom": obj.text,
                "target": target,
                "product_minimum": total,
                "sender_minimum": {"sender": sender, "resource": format_rational(&single), "resource_f64": to_f64(&single)},
            }))
        }
        Command::Seesaw { real } => {
            let file = scenario()?;
            let obj = parse_objective(&file, require(&cli.fom, "fom")?)?;
            let r = parse_list(require(&cli.resources, "resources")?)?;
            let cfg = SeeSawConfig { real: *real, ..seesaw_config(cli)? };
            let rf: Vec<f64> = r.iter().map(to_f64).collect();
            let q = seesaw(&file.spec, &obj.fom, &rf, &cfg)?;
            let classical = to_f64(&ClassicalModel::new(&file.spec, caps(cli)?)?.value(&obj.fom, &r)?);
            let _ = writeln!(out, "quantum {:.10}  classical {:.10}  audited {:?}", q.value, classical, q.audited_resources);
            Ok(json!({
                "fom": obj.text,
                "resources": rationals_json(&r),
                "quantum": q,
                "classical_value": classical,
                "ratio": ratio_or_null(q.value, classical),
            }))
        }
        Command::Total { target, variant, sender } => {
            let file = scenario()?;
            let obj = parse_objective(&file, require(&cli.fom, "fom")?)?;
            let model = ClassicalModel::new(&file.spec, caps(cli)?)?;
            let i = sender_index(*sender, file.spec.n_senders())?;
            let v = match variant {
                VariantArg::Sum => TotalVariant::Sum,
                VariantArg::Product => TotalVariant::Product,
                VariantArg::Single => TotalVariant::Single { sender: i },
            };
            let q = min_total_resource(&file.spec, &obj.fom, *target, &seesaw_config(cli)?, v)?;
            let (classical, quantum) = match v {
                TotalVariant::Single { sender } => (to_f64(&model.min_sender_resource(&obj.fom, *target, sender)?), q.resources[sender]),
                _ => (model.total(&obj.fom, *target)?.product, q.product),
            };
            let _ = writeln!(out, "quantum {quantum:.10}  classical {classical:.10}  ratio {:.6}", classical / quantum);
            Ok(json!({
                "fom": obj.text,
                "target": target,
                "quantum": q,
                "quantum_resource": quantum,
                "classical_resource": classical,
                "ratio": ratio_or_null(classical, quantum),
            }))
        }
        Command::Verify { strategy } => {
            let file = scenario()?;
            let obj = parse_objective(&file, require(&cli.fom, "fom")?)?;
            let st: Strategy =
                serde_json::from_str(&inputs.read(strategy)?).map_err(|e| CliError::Input(format!("strategy: {e}")))?;
            let v = verify_strategy(&file.spec, &st, &obj.fom)?;
            let model = ClassicalModel::new(&file.spec, caps(cli)?)?;
            let at = match &cli.resources {
                Some(s) => parse_list(s)?,
                None => snap_resources(&file.spec, &v.audited_resources),
            };
            let classical = to_f64(&model.value(&obj.fom, &at)?);
            let _ = writeln!(
                out,
                "value {:.10}  audited {:?}  classical {:.10} at {:?}",
                v.value,
                v.audited_resources,
                classical,
                rationals_json(&at)
            );
            Ok(json!({
                "fom": obj.text,
                "verification": v,
                "classical_resources": rationals_json(&at),
                "classical_value": classical,
                "ratio": ratio_or_null(v.value, classical),
            }))
        }
        Command::Antidist { states, priors } => {
            let kets = load_kets(&inputs.read(states)?)?;
            let rho = kets.iter().map(DensityMatrix::pure).collect::<Result<Vec<_>, _>>()?;
            let q = match priors {
                Some(p) => parse_f64_list(p)?,
                None => vec![1.0 / rho.len() as f64; rho.len()],
            };
            let r = antidistinguishability(&rho, &q)?;
            let helstrom = if kets.len() == 2 && (q[0] - 0.5).abs() < 1e-15 {
                Some(helstrom_antidist_two(&kets[0], &kets[1])?)
            } else {
                None
            };
            let _ = writeln!(out, "anti-distinguishability {:.10} (dual {:.10})", r.value, r.dual);
            Ok(json!({"value": r.value, "dual": r.dual, "gap": (r.value - r.dual).abs(), "closed_form": helstrom}))
        }
        Command::Distributed { senders, inputs: n, success, states } => {
            let task = DistributedTask::uniform(*senders, *n)?;
            let (a_q, a_c, ratio, extra) = match states {
                Some(path) => {
                    let kets = load_kets(&inputs.read(path)?)?;
                    if kets.len() != *n {
                        return Err(CliError::Input(format!("{} states for {n} inputs", kets.len())));
                    }
                    let adv = explicit_advantage(&kets, *senders)?;
                    if adv.success < success - 1e-6 {
                        return Err(CliError::Unachievable(format!("states reach success {}", adv.success)));
                    }
                    let cond = sufficient_condition(&kets, *senders)?;
                    (adv.a_q, adv.a_c, adv.ratio, json!({"advantage": adv, "sufficient_condition": cond}))
                }
                None => {
                    let p = advantage_curve(&task, &[*success], &seesaw_config(cli)?)?.remove(0);
                    (p.a_q, p.a_c, p.ratio, json!({"point": p}))
                }
            };
            let common: Vec<Rational> = (0..*senders).map(|_| approximate(a_q.max(to_f64(&task.floor(0))), 1_000_000_000_000)).collect();
            let bound = to_f64(&classical_bound(&task, &common)?);
            let _ = writeln!(out, "A_Q {a_q:.8}  A_C {a_c:.8}  ratio {ratio:.6}");
            Ok(json!({
                "target": success,
                "a_q": a_q,
                "a_c": a_c,
                "ratio": ratio,
                "classical_bound_at_a_q": bound,
                "details": extra,
            }))
        }
        Command::Pbr { range, theta, certify } => {
            let (lo, hi) = parse_range(range)?;
            let mut rows = Vec::new();
            let _ = writeln!(out, "{:>4} {:>12} {:>12} {:>14}", "N", "theta_min", "A_Q", "optimal ratio");
            for n in lo..=hi {
                let (tmin, _) = pbr_theta_range(n)?;
                let opt = pbr_optimal_ratio(n)?;
                let at = match theta {
                    Some(t) => Some(pbr_ratio(*t, n)?),
                    None => None,
                };
                let cert = if *certify && n <= 3 { Some(certify_perfect_exclusion(theta.unwrap_or(tmin), n as usize)?) } else { None };
                let _ = writeln!(out, "{n:>4} {tmin:>12.8} {:>12.8} {opt:>14.6}", pbr_antidist(tmin));
                rows.push(json!({
                    "N": n,
                    "theta_min": tmin,
                    "a_q": pbr_antidist(tmin),
                    "optimal_ratio": opt,
                    "ratio_at_theta": at,
                    "certificate": cert,
                }));
            }
            Ok(json!({"theta": theta, "rows": rows}))
        }
        Command::Curve { senders, inputs: n, grid, points } => {
            let task = DistributedTask::uniform(*senders, *n)?;
            let s = match grid {
                Some(g) => parse_f64_list(g)?,
                None => {
                    let floor = 1.0 - (1.0 - to_f64(&task.floor(0))).powi(*senders as i32);
                    let k = (*points).max(2);
                    (0..k).map(|j| floor + (1.0 - floor) * j as f64 / (k - 1) as f64).collect()
                }
            };
            let pts = advantage_curve(&task, &s, &seesaw_config(cli)?)?;
            let csv = curve_csv(&pts);
            std::fs::write(cli.out.with_extension("csv"), &csv).map_err(|e| CliError::Input(e.to_string()))?;
            out.push_str(&csv);
            Ok(json!({"points": pts, "csv": cli.out.with_extension("csv")}))
        }
    }
}

fn sender_index(sender: usize, n: usize) -> Result<usize, CliError> {
    if sender == 0 || sender > n {
        return Err(CliError::Input(format!("sender {sender} not in 1..={n}")));
    }
    Ok(sender - 1)
}

fn parse_range(s: &str) -> Result<(u32, u32), CliError> {
    let bad = || CliError::Input(format!("bad range `{s}`"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo < 2 || hi < lo {
        return Err(bad());
    }
    Ok((lo, hi))
}
