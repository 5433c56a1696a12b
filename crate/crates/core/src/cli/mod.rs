//! Batch front end: read a problem document, run it, write a JSON report.

pub mod input;
pub mod report;

use std::any::Any;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde_json::{json, Map, Value};

use crate::apps::{
    branching_intensity, geometric_moments, implicit_renewal_solve, infdiv_tail, mg1_waiting_tail, poisson_moments,
    renewal_solve, second_order_classify, stopped_sum_operator, apply_operator, AuxLimit, RenewalProblem,
    SecondOrderSpec,
};
use crate::engine::reference::diff_against_reference;
use crate::engine::{expand_convolution, expand_direct, ExpansionRequest, DEFAULT_MAX_TERMS};
use crate::error::{Error, Result};
use crate::exponent::Assumptions;
use crate::laplace::MomentVector;
use crate::oracle::{mc_tail, McConfig};
use crate::ring::Scalar;
use crate::scale::close_under_derivative;
use crate::sym::Sym;
use crate::tails::{DistributionSpec, TailVector};
use input::Doc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Expand,
    StoppedSum,
    Queue,
    Branching,
    Infdiv,
    Renewal,
    ImplicitRenewal,
    #[value(name = "classify-2rv")]
    Classify2rv,
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Expand => "expand",
            Command::StoppedSum => "stopped-sum",
            Command::Queue => "queue",
            Command::Branching => "branching",
            Command::Infdiv => "infdiv",
            Command::Renewal => "renewal",
            Command::ImplicitRenewal => "implicit-renewal",
            Command::Classify2rv => "classify-2rv",
            Command::Validate => "validate",
        }
    }
}

impl std::str::FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        <Command as clap::ValueEnum>::from_str(s, false).map_err(|_| Error::Parse(format!("unknown command '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    #[default]
    Exact,
    Float,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JobSpec {
    pub command: Command,
    pub input: PathBuf,
    pub output: PathBuf,
    pub mode: Mode,
    pub pretty: bool,
}

/// Runs a parsed document and returns the report body.
pub fn execute(command: Command, mode: Mode, doc: &Value) -> Result<Value> {
    let mut d = Doc::new(doc, "")?;
    let result = match (command, mode) {
        (Command::Validate, _) => validate(&mut d)?,
        (_, Mode::Exact) => dispatch::<Sym>(command, &mut d)?,
        (_, Mode::Float) => dispatch::<f64>(command, &mut d)?,
    };
    let mode_name = if command == Command::Validate { "float" } else { mode_name(mode) };
    let defaults: Map<String, Value> = d.defaults.into_iter().collect();
    Ok(json!({
        "command": command.name(),
        "mode": mode_name,
        "input": doc,
        "defaults": defaults,
        "result": result,
    }))
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Exact => "exact",
        Mode::Float => "float",
    }
}

fn dispatch<S: Scalar + 'static>(command: Command, d: &mut Doc) -> Result<Value> {
    let env = d.assumptions()?;
    match command {
        Command::Expand => expand::<S>(d, &env),
        Command::StoppedSum => stopped_sum::<S>(d, &env),
        Command::Queue => queue::<S>(d, &env),
        Command::Branching => branching::<S>(d, &env),
        Command::Infdiv => infdiv::<S>(d, &env),
        Command::Renewal => renewal::<S>(d, &env),
        Command::ImplicitRenewal => implicit_renewal::<S>(d, &env),
        Command::Classify2rv => classify::<S>(d, &env),
        Command::Validate => unreachable!("handled by execute"),
    }
}

fn law<S: Scalar>(d: &Doc, k: &str, env: &Assumptions) -> Result<DistributionSpec<S>> {
    input::law(d.req(k)?, k, env)
}

/// The law's own expansion closed under differentiation up to `α + m`.
fn law_tail<S: Scalar>(spec: &DistributionSpec<S>, m: usize) -> Result<Option<TailVector<S>>> {
    let Some(alpha) = spec.tail_index()? else { return Ok(None) };
    let cutoff = alpha.add_int(m as i64);
    let terms = spec.expand_tail_to(&cutoff, DEFAULT_MAX_TERMS)?;
    let seed: Vec<_> = terms.iter().map(|t| t.item.clone()).collect();
    let basis = close_under_derivative(&seed, &cutoff, &spec.env)?;
    Ok(Some(TailVector::from_terms(&basis, &terms)?))
}

fn opt_tail<S: Scalar>(t: &Option<TailVector<S>>) -> Value {
    t.as_ref().map_or(Value::Null, report::tail)
}

fn expand<S: Scalar + 'static>(d: &mut Doc, env: &Assumptions) -> Result<Value> {
    let spec = law::<S>(d, "law", env)?;
    let w = input::weights::<S>(d.req("weights")?, "weights", env)?;
    let m = d.usize("m")?;
    let k = d.usize_or("k", 0)?;
    let mut req = ExpansionRequest::new(m).derivative(k);
    req.max_terms = d.usize_or("max_terms", DEFAULT_MAX_TERMS)?;
    if let Some(c) = d.opt_exponent("cutoff")? {
        req = req.with_cutoff(c);
    }
    let route = d.str_or("route", "convolution")?;
    let e = match route.as_str() {
        "convolution" => expand_convolution(&w, &spec, &req)?,
        "direct" => expand_direct(&w, &spec, &req)?,
        other => return Err(Error::Parse(format!("unknown route '{other}'"))),
    };
    let env = e.tail.basis.assumptions().clone();
    let mut out = json!({
        "route": route,
        "tail": report::tail(&e.tail),
        "g_moments": report::moments(&e.g_moments, &env),
        "warnings": e.warnings,
    });
    if let Some(c) = d.get("compare") {
        if c.as_str() != Some("burr") {
            return Err(Error::Parse("'compare' supports only \"burr\"".into()));
        }
        let syms: Vec<Sym> = e
            .tail
            .p
            .iter()
            .map(|x| (x as &dyn Any).downcast_ref::<Sym>().cloned())
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Unsupported("reference comparison needs exact mode".into()))?;
        out["reference_diff"] = serde_json::to_value(diff_against_reference(&syms)?).map_err(|e| Error::Internal(e.to_string()))?;
    }
    Ok(out)
}

fn count_moments<S: Scalar>(d: &Doc, order: usize) -> Result<MomentVector<S>> {
    let c = d.sub("count")?;
    if let Some(v) = c.get("moments") {
        let mu = input::scalars::<S>(v, "count.moments")?;
        if mu.len() < order + 1 {
            return Err(Error::OrderMismatch(format!("count needs moments to order {order}")));
        }
        return MomentVector::new(mu[..=order].to_vec());
    }
    if c.get("poisson").is_some() {
        return poisson_moments(&c.scalar::<S>("poisson")?, order);
    }
    if c.get("geometric").is_some() {
        return geometric_moments(&c.scalar::<S>("geometric")?, order);
    }
    if c.get("fixed").is_some() {
        let n = c.scalar::<S>("fixed")?;
        return MomentVector::new((0..=order).map(|j| n.powu(j as u32)).collect());
    }
    Err(Error::Parse("'count' needs one of moments, poisson, geometric, fixed".into()))
}

fn stopped_sum<S: Scalar>(d: &mut Doc, env: &Assumptions) -> Result<Value> {
    let spec = law::<S>(d, "law", env)?;
    let m = d.usize("m")?;
    let nm = count_moments::<S>(d, m + 1)?;
    let op = stopped_sum_operator(&nm, &spec.moments(m)?, m)?;
    let tail = law_tail(&spec, m)?.map(|p| apply_operator(&op, &p)).transpose()?;
    Ok(json!({ "operator": report::operator(&op, &spec.env), "tail": opt_tail(&tail) }))
}

fn queue<S: Scalar>(d: &mut Doc, env: &Assumptions) -> Result<Value> {
    let b = law::<S>(d, "service", env)?;
    let m = d.usize("m")?;
    let mu = d.scalar::<S>("mean_interarrival")?;
    let q = mg1_waiting_tail(&b, &mu, m)?;
    Ok(json!({
        "load": report::scalar(&q.load, &b.env),
        "operator": report::operator(&q.operator, &b.env),
        "equilibrium_moments": report::moments(&q.h_moments, &b.env),
        "equilibrium_tail": opt_tail(&q.h_tail),
        "tail": opt_tail(&q.tail),
        "warnings": q.warnings,
    }))
}

fn branching<S: Scalar>(d: &mut Doc, env: &Assumptions) -> Result<Value> {
    let spec = law::<S>(d, "law", env)?;
    let m = d.usize("m")?;
    let rho = d.scalar::<S>("rho")?;
    let op = branching_intensity(&spec.moments(m)?, &rho, m)?;
    let tail = law_tail(&spec, m)?.map(|p| apply_operator(&op, &p)).transpose()?;
    Ok(json!({ "operator": report::operator(&op, &spec.env), "tail": opt_tail(&tail) }))
}

fn infdiv<S: Scalar>(d: &mut Doc, env: &Assumptions) -> Result<Value> {
    let nu = law::<S>(d, "levy", env)?;
    let m = d.usize("m")?;
    let gm = MomentVector::new(input::scalars::<S>(d.req("g_moments")?, "g_moments")?)?;
    let p = law_tail(&nu, m)?.ok_or_else(|| Error::precondition("the Lévy tail needs a power expansion"))?;
    let out = infdiv_tail(&p, &gm, m)?;
    Ok(json!({ "levy_tail": report::tail(&p), "tail": report::tail(&out) }))
}

fn renewal_problem<S: Scalar>(d: &Doc, env: &Assumptions) -> Result<RenewalProblem<S>> {
    Ok(RenewalProblem::new(law::<S>(d, "h", env)?, law::<S>(d, "k", env)?, d.usize("m")?))
}

fn renewal<S: Scalar>(d: &mut Doc, env: &Assumptions) -> Result<Value> {
    let prob = renewal_problem::<S>(d, env)?.weight(d.scalar::<S>("a")?);
    let sol = renewal_solve(&prob)?;
    let env = sol.g_tail.basis.assumptions().clone();
    Ok(json!({
        "f_operator": report::operator(&sol.f_character, &env),
        "g_moments": report::moments(&sol.g_moments, &env),
        "tail": report::tail(&sol.g_tail),
    }))
}

fn implicit_renewal<S: Scalar>(d: &mut Doc, env: &Assumptions) -> Result<Value> {
    let sol = implicit_renewal_solve(&renewal_problem::<S>(d, env)?)?;
    let env = sol.tail.basis.assumptions().clone();
    Ok(json!({
        "f_moments": report::moments(&sol.f_moments, &env),
        "tail": report::tail(&sol.tail),
        "warnings": sol.warnings,
    }))
}

fn classify<S: Scalar>(d: &mut Doc, env: &Assumptions) -> Result<Value> {
    let w = input::weights::<S>(d.req("weights")?, "weights", env)?;
    let aux = match d.req("aux_limit")? {
        Value::String(s) if s == "infinity" => AuxLimit::Infinite,
        v => AuxLimit::Finite(input::scalar::<S>(v, "aux_limit")?),
    };
    let mut so = SecondOrderSpec::new(d.exponent("alpha")?, d.exponent("rho")?, aux)
        .with_balance(d.scalar_or::<S>("p", "1")?, d.scalar_or::<S>("q", "0")?);
    if let Some(g) = d.opt_exponent("g_index")? {
        so = so.with_g_index(g);
    }
    let fm = match d.get("moments") {
        Some(v) => MomentVector::new(input::scalars::<S>(v, "moments")?)?,
        None => law::<S>(d, "law", env)?.moments(2)?,
    };
    let c = second_order_classify(&so, &w, &fm)?;
    Ok(json!({
        "case": c.case.number(),
        "xi": c.xi,
        "condition": report::scalar(&c.condition, &w.env),
        "coefficient": report::scalar(&c.coefficient, &w.env),
        "g_order": c.g_order.to_string(),
    }))
}

/// Monte-Carlo comparison of partial sums of the expansion.
fn validate(d: &mut Doc) -> Result<Value> {
    let env = d.assumptions()?;
    let spec = law::<f64>(d, "law", &env)?;
    let w = input::weights::<f64>(d.req("weights")?, "weights", &env)?;
    let m = d.usize("m")?;
    let e = expand_convolution(&w, &spec, &ExpansionRequest::new(m))?;
    let mc = d.sub("mc")?;
    let thresholds = input::scalars::<f64>(mc.req("thresholds")?, "mc.thresholds")?;
    let mut cfg = McConfig::new(mc.usize("samples")? as u64, thresholds);
    let mut mc = mc;
    cfg.seed = mc.usize_or("seed", 0)? as u64;
    cfg.shards = mc.usize_or("shards", 64)?;
    cfg.truncation = mc.usize_or("truncation", 64)?;
    d.defaults.append(&mut mc.defaults);
    let r = mc_tail(&w, &spec, &cfg)?;
    let n = e.tail.p.len();
    let mut header: Vec<String> = ["threshold", "estimate", "ci_lo", "ci_hi"].iter().map(|s| s.to_string()).collect();
    header.extend((1..=n).map(|j| format!("expansion_{j}term")));
    let mut rows = Vec::new();
    for row in &r.rows {
        let mut line = vec![row.threshold, row.estimate, row.ci_lo, row.ci_hi];
        line.extend(partial_sums(&e.tail, row.threshold));
        rows.push(line);
    }
    let csv = to_csv(&header, &rows)?;
    Ok(json!({
        "tail": report::tail(&e.tail),
        "monte_carlo": r,
        "columns": header,
        "table": rows,
        "csv": csv,
    }))
}

fn to_csv(header: &[String], rows: &[Vec<f64>]) -> Result<String> {
    let io = |e: csv::Error| Error::Internal(format!("csv: {e}"));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r.iter().map(|x| format!("{x:e}"))).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Internal(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
}

/// `Σ_{i<j} p_i t^{-a_i} (log t)^{b_i}` for `j = 1..n`.
pub fn partial_sums(v: &TailVector<f64>, t: f64) -> Vec<f64> {
    let env = v.basis.assumptions();
    let mut acc = 0.0;
    v.basis
        .items()
        .iter()
        .zip(&v.p)
        .map(|(it, c)| {
            let a = it.power.eval(env).unwrap_or(f64::NAN);
            let b = it.log_power.eval(env).unwrap_or(f64::NAN);
            acc += c * t.powf(-a) * t.ln().powf(b);
            acc
        })
        .collect()
}

fn read_doc(path: &Path) -> Result<Value> {
    let s = fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&s).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Writes through a temporary sibling and renames, so readers never see partial output.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let file = path.file_name().ok_or_else(|| Error::Internal(format!("bad output path {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp", file.to_string_lossy()));
    let io = |e: std::io::Error| Error::Internal(format!("writing {}: {e}", path.display()));
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(bytes).map_err(io)?;
    f.sync_all().map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

fn render(v: &Value, pretty: bool) -> Result<Vec<u8>> {
    let mut s = if pretty { serde_json::to_string_pretty(v) } else { serde_json::to_string(v) }
        .map_err(|e| Error::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s.into_bytes())
}

/// Reads, runs and writes the report and its `<out>.meta.json` sidecar.
pub fn run(job: &JobSpec) -> Result<()> {
    let start = Instant::now();
    let doc = read_doc(&job.input)?;
    let report = execute(job.command, job.mode, &doc)?;
    let csv = job.command == Command::Validate && job.output.extension().is_some_and(|e| e == "csv");
    let body = match report["result"]["csv"].as_str() {
        Some(t) if csv => t.as_bytes().to_vec(),
        _ => render(&report, job.pretty)?,
    };
    write_atomic(&job.output, &body)?;
    let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let meta = json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "command": job.command.name(),
        "input": job.input.display().to_string(),
        "finished_unix": stamp,
        "elapsed_seconds": start.elapsed().as_secs_f64(),
    });
    let mut side = job.output.as_os_str().to_owned();
    side.push(".meta.json");
    write_atomic(Path::new(&side), &render(&meta, true)?)
}

pub fn exit_code(r: &Result<()>) -> i32 {
    match r {
        Ok(()) => 0,
        Err(e) => e.category().exit_code(),
    }
}
