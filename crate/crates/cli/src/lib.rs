//! Batch runner behind the `fountain` binary.
//!
//! A run loads a JSON config, builds the problem, computes everything in
//! memory and only then writes artifacts, so a config that fails to parse or
//! validate leaves the output directory untouched.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use fountain_core::degree::{brouwer_degree, winding_number_2d, DegreeOptions, FiniteMap, Region};
use fountain_core::deformation::{
    sphere_cloud, DeformationOptions, DeformationParams, DeformationStage, PropertyReport,
};
use fountain_core::elliptic::{DirichletProblem, EllipticConfig, EllipticError};
use fountain_core::fountain::{
    compute_geometry, find_critical_sequence, CriticalSequence, FountainConfig, FountainProblem,
    GeometryReport,
};
use fountain_core::sampling;
use fountain_core::schrodinger::{SchrodingerConfig, SchrodingerError, SchrodingerProblem};
use fountain_core::synthetic::{SyntheticConfig, SyntheticError, SyntheticProblem};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

/// Schema tag stamped on every JSON artifact.
pub const SCHEMA: &str = "fountain/1";

#[derive(Debug, Error)]
pub enum RunError {
    #[error("config: {0}")]
    Config(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("internal: {0}")]
    Internal(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Hypothesis(_) => 2,
            _ => 1,
        }
    }
}

impl From<csv::Error> for RunError {
    fn from(e: csv::Error) -> Self {
        RunError::Internal(e.to_string())
    }
}

impl From<serde_json::Error> for RunError {
    fn from(e: serde_json::Error) -> Self {
        RunError::Internal(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Geometry,
    Solve,
    DegreeDemo,
    DeformCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Schrodinger,
    Elliptic,
    Synthetic,
}

/// Settings of the `deform-check` command: a symmetric cloud `S` on the
/// sphere of radius `radius` in `Y_k`, deformed at level `level`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeformCheck {
    /// Defaults to the lower end of `k_range`.
    pub k: Option<usize>,
    pub radius: f64,
    pub level: f64,
    pub eps: f64,
    pub delta: f64,
    pub set_points: usize,
    pub samples: usize,
    pub cloud_n: usize,
}

impl Default for DeformCheck {
    fn default() -> Self {
        Self {
            k: None,
            radius: 4.0,
            level: 0.0,
            eps: 0.1,
            delta: 0.5,
            set_points: 256,
            samples: 200,
            cloud_n: 2048,
        }
    }
}

fn default_k_range() -> [usize; 2] {
    [2, 6]
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("fountain-out")
}

/// The on-disk config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub problem: Option<ProblemKind>,
    /// Problem settings; unknown keys are rejected.
    #[serde(default)]
    pub params: Value,
    /// Inclusive level range `[lo, hi]`.
    #[serde(default = "default_k_range")]
    pub k_range: [usize; 2],
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub fountain: FountainConfig,
    #[serde(default)]
    pub deform: DeformCheck,
    #[serde(default)]
    pub degree: DegreeOptions,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

/// A fully specified run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub file: ConfigFile,
}

/// Command-line overrides, applied on top of the config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub problem: Option<ProblemKind>,
    pub k_range: Option<[usize; 2]>,
    /// `dotted.key=value` pairs; the value is read as JSON, else as a string.
    pub set: Vec<String>,
}

impl Overrides {
    fn apply(&self, doc: &mut Value) -> Result<(), RunError> {
        for item in &self.set {
            let (key, raw) = item
                .split_once('=')
                .ok_or_else(|| RunError::Config(format!("--set expects key=value, got `{item}`")))?;
            let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.into()));
            set_path(doc, key, value)?;
        }
        if let Some(s) = self.seed {
            doc["seed"] = json!(s);
        }
        if let Some(o) = &self.output_dir {
            doc["output_dir"] = json!(o);
        }
        if let Some(p) = self.problem {
            doc["problem"] = json!(p);
        }
        if let Some(k) = self.k_range {
            doc["k_range"] = json!(k);
        }
        Ok(())
    }
}

fn set_path(doc: &mut Value, key: &str, value: Value) -> Result<(), RunError> {
    let mut cur = doc;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        if part.is_empty() {
            return Err(RunError::Config(format!("bad override key `{key}`")));
        }
        if cur.is_null() {
            *cur = json!({});
        }
        let obj = cur
            .as_object_mut()
            .ok_or_else(|| RunError::Config(format!("`{key}` does not name an object field")))?;
        if i + 1 == parts.len() {
            obj.insert((*part).into(), value);
            return Ok(());
        }
        cur = obj.entry(*part).or_insert(Value::Null);
    }
    Ok(())
}

impl RunConfig {
    /// Parses a config and applies command-line overrides.
    pub fn parse(command: Command, text: &str, overrides: &Overrides) -> Result<Self, RunError> {
        let mut doc: Value =
            serde_json::from_str(text).map_err(|e| RunError::Config(e.to_string()))?;
        if !doc.is_object() {
            return Err(RunError::Config("config must be a JSON object".into()));
        }
        overrides.apply(&mut doc)?;
        let mut file: ConfigFile =
            serde_json::from_value(doc).map_err(|e| RunError::Config(e.to_string()))?;
        file.fountain.seed = file.seed;
        file.degree.seed = file.seed;
        let [lo, hi] = file.k_range;
        if lo < 2 || lo > hi {
            return Err(RunError::Config(format!(
                "k_range must satisfy 2 <= lo <= hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Self { command, file })
    }

    pub fn from_path(command: Command, path: &Path, overrides: &Overrides) -> Result<Self, RunError> {
        let text = fs::read_to_string(path)
            .map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(command, &text, overrides)
    }

    pub fn ks(&self) -> Vec<usize> {
        (self.file.k_range[0]..=self.file.k_range[1]).collect()
    }
}

/// A constructed application problem.
pub enum Problem {
    Schrodinger(SchrodingerProblem<f64>),
    Elliptic(DirichletProblem<f64>),
    Synthetic(SyntheticProblem<f64>),
}

fn params<T: serde::de::DeserializeOwned + Default>(v: &Value) -> Result<T, RunError> {
    if v.is_null() {
        return Ok(T::default());
    }
    serde_json::from_value(v.clone()).map_err(|e| RunError::Config(format!("params: {e}")))
}

impl Problem {
    pub fn build(kind: ProblemKind, blob: &Value) -> Result<Self, RunError> {
        Ok(match kind {
            ProblemKind::Schrodinger => {
                let cfg: SchrodingerConfig = params(blob)?;
                Problem::Schrodinger(SchrodingerProblem::new(cfg).map_err(|e| match e {
                    SchrodingerError::GapViolation { .. }
                    | SchrodingerError::DegenerateSplitting { .. } => {
                        RunError::Hypothesis(e.to_string())
                    }
                    SchrodingerError::InvalidConfig(_) | SchrodingerError::Space(_) => {
                        RunError::Config(e.to_string())
                    }
                    _ => RunError::Internal(e.to_string()),
                })?)
            }
            ProblemKind::Elliptic => {
                let cfg: EllipticConfig = params(blob)?;
                Problem::Elliptic(DirichletProblem::new(cfg).map_err(|e| match e {
                    EllipticError::InvalidConfig(_) | EllipticError::Space(_) => {
                        RunError::Config(e.to_string())
                    }
                    _ => RunError::Internal(e.to_string()),
                })?)
            }
            ProblemKind::Synthetic => {
                let cfg: SyntheticConfig = params(blob)?;
                Problem::Synthetic(SyntheticProblem::new(cfg).map_err(|e| match e {
                    SyntheticError::Exponent(_) | SyntheticError::Space(_) => {
                        RunError::Config(e.to_string())
                    }
                })?)
            }
        })
    }

    pub fn fountain(&self) -> &dyn FountainProblem<f64> {
        match self {
            Problem::Schrodinger(p) => p,
            Problem::Elliptic(p) => p,
            Problem::Synthetic(p) => p,
        }
    }

    fn config_json(&self) -> Value {
        match self {
            Problem::Schrodinger(p) => json!(p.config()),
            Problem::Elliptic(p) => json!(p.config()),
            Problem::Synthetic(p) => json!(p.config()),
        }
    }
}

/// What a finished run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    /// 0 on success, 2 when a hypothesis failed on some level.
    pub status: i32,
    pub artifacts: Vec<PathBuf>,
    pub summary: String,
    pub diagnostics: Vec<String>,
}

/// Files to write, kept in memory until the run is complete.
#[derive(Default)]
struct Emitter {
    files: Vec<(String, Vec<u8>)>,
}

impl Emitter {
    fn json(&mut self, name: &str, v: &Value) -> Result<(), RunError> {
        let mut bytes = serde_json::to_vec_pretty(v)?;
        bytes.push(b'\n');
        self.files.push((name.into(), bytes));
        Ok(())
    }

    fn jsonl(&mut self, name: &str, rows: &[Value]) -> Result<(), RunError> {
        let mut bytes = Vec::new();
        for r in rows {
            serde_json::to_writer(&mut bytes, r)?;
            bytes.push(b'\n');
        }
        self.files.push((name.into(), bytes));
        Ok(())
    }

    fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<(), RunError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| RunError::Internal(e.to_string()))?;
        self.files.push((name.into(), bytes));
        Ok(())
    }

    fn text(&mut self, name: &str, s: &str) {
        self.files.push((name.into(), s.as_bytes().to_vec()));
    }

    fn flush(self, dir: &Path) -> Result<Vec<PathBuf>, RunError> {
        fs::create_dir_all(dir)?;
        let mut out = Vec::with_capacity(self.files.len());
        for (name, bytes) in self.files {
            let path = dir.join(name);
            fs::write(&path, bytes)?;
            out.push(path);
        }
        Ok(out)
    }
}

fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x}")
    } else {
        String::new()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

const SUMMARY_HEADER: [&str; 12] = [
    "k",
    "beta_k",
    "r_k",
    "rho_k",
    "a_k",
    "b_k",
    "d_k",
    "c_k_estimate",
    "energy",
    "grad_norm",
    "feasible",
    "status",
];

struct SummaryRow {
    k: usize,
    geometry: Option<GeometryReport<f64>>,
    c_k: Option<f64>,
    energy: Option<f64>,
    grad: Option<f64>,
    status: String,
}

impl SummaryRow {
    fn cells(&self) -> Vec<String> {
        let g = self.geometry.as_ref();
        vec![
            self.k.to_string(),
            opt(g.map(|g| g.beta_k)),
            opt(g.map(|g| g.r_k)),
            opt(g.map(|g| g.rho_k)),
            opt(g.map(|g| g.a_k)),
            opt(g.map(|g| g.b_k)),
            opt(g.map(|g| g.d_k)),
            opt(self.c_k),
            opt(self.energy),
            opt(self.grad),
            g.map(|g| g.feasible.to_string()).unwrap_or_default(),
            self.status.clone(),
        ]
    }
}

fn table(rows: &[SummaryRow]) -> String {
    let fmt = |x: Option<f64>| match x {
        Some(v) if v.is_finite() => format!("{v:>11.4}"),
        _ => format!("{:>11}", "-"),
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>3} {:>9} {:>11} {:>11} {:>11} {:>11} {:>11} {:>11} {:>9}  status",
        "k", "beta_k", "r_k", "rho_k", "a_k", "b_k", "c_k est", "energy", "grad"
    );
    for r in rows {
        let g = r.geometry.as_ref();
        let _ = writeln!(
            s,
            "{:>3} {:>9} {} {} {} {} {} {} {:>9}  {}",
            r.k,
            g.map(|g| format!("{:.6}", g.beta_k)).unwrap_or("-".into()),
            fmt(g.map(|g| g.r_k)),
            fmt(g.map(|g| g.rho_k)),
            fmt(g.map(|g| g.a_k)),
            fmt(g.map(|g| g.b_k)),
            fmt(r.c_k),
            fmt(r.energy),
            r.grad.map(|v| format!("{v:.2e}")).unwrap_or("-".into()),
            r.status
        );
    }
    s
}

/// Executes a run and writes its artifacts.
pub fn run(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let file = &cfg.file;
    let problem = match (cfg.command, file.problem) {
        (Command::DegreeDemo, _) => None,
        (_, None) => {
            return Err(RunError::Config(
                "`problem` is required for this command".into(),
            ))
        }
        (_, Some(kind)) => Some(Problem::build(kind, &file.params)?),
    };
    if let Some(p) = &problem {
        let max = p.fountain().space().max_level();
        let top = match cfg.command {
            Command::DeformCheck => file.deform.k.unwrap_or(file.k_range[0]),
            _ => file.k_range[1],
        };
        if top > max || file.deform.k.is_some_and(|k| k < 2) {
            return Err(RunError::Config(format!(
                "level {top} outside the admissible range 2..={max}"
            )));
        }
    }
    let mut em = Emitter::default();
    let (status, summary, diagnostics) = match (cfg.command, &problem) {
        (Command::Geometry, Some(p)) => geometry(cfg, p, &mut em)?,
        (Command::Solve, Some(p)) => solve(cfg, p, &mut em)?,
        (Command::DeformCheck, Some(p)) => deform_check(cfg, p, &mut em)?,
        (Command::DegreeDemo, _) => degree_demo(cfg, &mut em)?,
        _ => unreachable!("problem presence checked above"),
    };
    em.text("summary.txt", &summary);
    let artifacts = em.flush(&file.output_dir)?;
    Ok(Outcome {
        status,
        artifacts,
        summary,
        diagnostics,
    })
}

fn header(cfg: &RunConfig, problem: Option<&Problem>) -> Value {
    json!({
        "schema": SCHEMA,
        "command": cfg.command,
        "problem": cfg.file.problem,
        "params": problem.map(Problem::config_json),
        "k_range": cfg.file.k_range,
        "seed": cfg.file.seed,
    })
}

type Report = (i32, String, Vec<String>);

fn geometry(cfg: &RunConfig, p: &Problem, em: &mut Emitter) -> Result<Report, RunError> {
    let mut rows = Vec::new();
    let mut records = Vec::new();
    let mut diags = Vec::new();
    let mut status = 0;
    for k in cfg.ks() {
        match compute_geometry(p.fountain(), k, &cfg.file.fountain) {
            Ok(g) => {
                let st = if g.feasible { "ok" } else { "infeasible" };
                if !g.feasible {
                    status = 2;
                    diags.push(format!("k = {k}: need a_k <= 0 < b_k and r_k < rho_k"));
                }
                records.push(json!({"k": k, "report": g, "error": null}));
                rows.push(SummaryRow {
                    k,
                    geometry: Some(g),
                    c_k: None,
                    energy: None,
                    grad: None,
                    status: st.into(),
                });
            }
            Err(e) => {
                status = 2;
                diags.push(format!("k = {k}: {e}"));
                records.push(json!({"k": k, "report": null, "error": e.to_string()}));
                rows.push(SummaryRow {
                    k,
                    geometry: None,
                    c_k: None,
                    energy: None,
                    grad: None,
                    status: "error".into(),
                });
            }
        }
    }
    let mut doc = header(cfg, Some(p));
    doc["levels"] = Value::Array(records);
    em.json("geometry.json", &doc)?;
    let cells: Vec<Vec<String>> = rows.iter().map(SummaryRow::cells).collect();
    em.csv("summary.csv", &SUMMARY_HEADER, &cells)?;
    Ok((status, table(&rows), diags))
}

fn solve(cfg: &RunConfig, p: &Problem, em: &mut Emitter) -> Result<Report, RunError> {
    let ks = cfg.ks();
    let fc = &cfg.file.fountain;
    let seq: CriticalSequence<f64> = match p {
        Problem::Schrodinger(s) => s.solve_multiplicity(&ks, fc),
        Problem::Elliptic(e) => e.solve_system(&ks, fc).map_err(|e| RunError::Internal(e.to_string()))?,
        Problem::Synthetic(s) => find_critical_sequence(s, &ks, fc),
    };
    let (mut hypothesis, mut failed) = (false, false);
    let mut diags = Vec::new();
    let mut rows = Vec::new();
    for l in &seq.levels {
        let pt = l.point.or(l.duplicate_of).map(|i| &seq.points[i]);
        let infeasible = l.geometry.as_ref().is_none_or(|g| !g.feasible);
        let st = match &l.error {
            Some(e) => {
                diags.push(format!("k = {}: {e}", l.k));
                if infeasible {
                    hypothesis = true;
                    "infeasible"
                } else if pt.is_some() {
                    "ok-with-warning"
                } else {
                    failed = true;
                    "failed"
                }
            }
            None if l.duplicate_of.is_some() => "duplicate",
            None => "ok",
        }
        .to_string();
        rows.push(SummaryRow {
            k: l.k,
            geometry: l.geometry.clone(),
            c_k: l.c_k_estimate,
            energy: pt.map(|c| c.energy),
            grad: pt.map(|c| c.grad_norm),
            status: st,
        });
    }

    let mut records = Vec::with_capacity(seq.points.len());
    for (i, cp) in seq.points.iter().enumerate() {
        let mut r = json!({
            "schema": SCHEMA,
            "index": i,
            "k": cp.level_k,
            "energy": cp.energy,
            "grad_norm": cp.grad_norm,
            "residual": cp.residual,
            "coords": cp.coords,
        });
        match p {
            Problem::Elliptic(e) => {
                let (u, v) = e.split(&cp.coords);
                r["u_coeffs"] = json!(u);
                r["v_coeffs"] = json!(v);
            }
            Problem::Schrodinger(s) => {
                r["fourier"] = json!(s.to_fourier(&cp.coords));
                let (phi, identity) = s.critical_value_identity(&cp.coords);
                r["critical_value_identity"] = json!([phi, identity]);
            }
            Problem::Synthetic(_) => {}
        }
        records.push(r);
    }
    em.jsonl("critical_points.jsonl", &records)?;

    let mut doc = header(cfg, Some(p));
    doc["levels"] = json!(seq.levels);
    doc["minimax"] = json!(seq.minimax);
    doc["energies"] = json!(seq.points.iter().map(|c| c.energy).collect::<Vec<_>>());
    doc["strictly_increasing"] = json!(seq.strictly_increasing());
    em.json("solve.json", &doc)?;

    let cells: Vec<Vec<String>> = rows.iter().map(SummaryRow::cells).collect();
    em.csv("summary.csv", &SUMMARY_HEADER, &cells)?;

    let mut conv = Vec::new();
    let mut ps = Vec::new();
    for m in &seq.minimax {
        for r in &m.surface_log {
            conv.push(vec![
                m.k.to_string(),
                r.round.to_string(),
                num(r.c_bar),
                num(r.eps),
                num(r.delta),
                r.active.to_string(),
                r.refined.to_string(),
                num(r.witness_grad),
                r.critical_hits.to_string(),
            ]);
        }
        for q in &m.ps_points {
            ps.push(vec![
                m.k.to_string(),
                q.round.to_string(),
                num(q.energy),
                num(q.grad_norm),
            ]);
        }
    }
    em.csv(
        "convergence.csv",
        &[
            "k",
            "round",
            "c_bar",
            "eps",
            "delta",
            "active",
            "refined",
            "witness_grad",
            "critical_hits",
        ],
        &conv,
    )?;
    em.csv("ps_points.csv", &["k", "round", "energy", "grad_norm"], &ps)?;
    profiles(p, &seq, em)?;
    let status = if hypothesis { 2 } else if failed { 1 } else { 0 };
    Ok((status, table(&rows), diags))
}

/// Grid samples of each critical point, one column per component.
fn profiles(p: &Problem, seq: &CriticalSequence<f64>, em: &mut Emitter) -> Result<(), RunError> {
    const N: usize = 257;
    let (xs, header, cols): (Vec<f64>, Vec<String>, Vec<Vec<f64>>) = match p {
        Problem::Schrodinger(s) => {
            let xs: Vec<f64> = (0..N)
                .map(|i| std::f64::consts::TAU * i as f64 / (N - 1) as f64)
                .collect();
            let header = seq.points.iter().enumerate().map(|(i, _)| format!("u{i}")).collect();
            let cols = seq.points.iter().map(|c| s.sample(&c.coords, &xs)).collect();
            (xs, header, cols)
        }
        Problem::Elliptic(e) => {
            let len = e.config().length;
            let xs: Vec<f64> = (0..N).map(|i| len * i as f64 / (N - 1) as f64).collect();
            let mut header = Vec::new();
            let mut cols = Vec::new();
            for (i, c) in seq.points.iter().enumerate() {
                let uv = e.sample(&c.coords, &xs);
                header.push(format!("u{i}"));
                header.push(format!("v{i}"));
                cols.push(uv.iter().map(|t| t.0).collect());
                cols.push(uv.iter().map(|t| t.1).collect());
            }
            (xs, header, cols)
        }
        Problem::Synthetic(_) => return Ok(()),
    };
    let mut h: Vec<&str> = vec!["x"];
    h.extend(header.iter().map(String::as_str));
    let rows: Vec<Vec<String>> = xs
        .iter()
        .enumerate()
        .map(|(q, &x)| {
            std::iter::once(num(x))
                .chain(cols.iter().map(|c| num(c[q])))
                .collect()
        })
        .collect();
    em.csv("profiles.csv", &h, &rows)
}

fn deform_check(cfg: &RunConfig, p: &Problem, em: &mut Emitter) -> Result<Report, RunError> {
    let d = &cfg.file.deform;
    let k = d.k.unwrap_or(cfg.file.k_range[0]);
    let phi = p.fountain();
    let space = phi.space();
    let set = sphere_cloud::<f64>(&space, k, d.radius, d.set_points, cfg.file.seed)
        .map_err(|e| RunError::Config(e.to_string()))?;
    let params = DeformationParams {
        level: d.level,
        eps: d.eps,
        delta: d.delta,
        set,
    };
    let opts = DeformationOptions {
        cloud_n: d.cloud_n,
        seed: cfg.file.seed,
        ..Default::default()
    };
    let stage = DeformationStage::build(phi, params, opts)
        .map_err(|e| RunError::Config(e.to_string()))?;
    let rep: PropertyReport<f64> = stage.bind(phi).verify_properties(d.samples, cfg.file.seed);
    let mut doc = header(cfg, Some(p));
    doc["deform"] = json!(d);
    doc["k"] = json!(k);
    doc["report"] = json!(rep);
    doc["all_passed"] = json!(rep.all_passed());
    em.json("deform_check.json", &doc)?;

    let line = |name: &str, c: &fountain_core::deformation::PropertyCheck<f64>| {
        format!(
            "{name:<18} {:>5} checked {:>4} failed  worst {:.3e}\n",
            c.checked, c.failed, c.worst
        )
    };
    let mut s = format!(
        "gradient bound: required {:.3e}, min observed {:.3e} ({})\n",
        rep.gradient_bound.required,
        rep.gradient_bound.min_observed,
        if rep.gradient_bound.holds { "holds" } else { "fails" }
    );
    s += &line("identity", &rep.identity);
    match &rep.sublevel_capture {
        Some(c) => s += &line("sublevel capture", c),
        None => s += "sublevel capture   not asserted\n",
    }
    s += &line("displacement", &rep.displacement);
    s += &line("monotone", &rep.monotone);
    s += &line("oddness", &rep.oddness);
    s += &line("continuity", &rep.continuity);
    let _ = writeln!(s, "critical hits      {}", rep.critical_hits);
    let mut diags = rep.errors.clone();
    let status = if !rep.gradient_bound.holds {
        diags.push("gradient bound fails on the sampled band; property (ii) not asserted".into());
        2
    } else if rep.all_passed() {
        0
    } else {
        1
    };
    Ok((status, s, diags))
}

fn degree_demo(cfg: &RunConfig, em: &mut Emitter) -> Result<Report, RunError> {
    let opts = &cfg.file.degree;
    let err = |e: fountain_core::degree::DegreeError| RunError::Internal(e.to_string());
    let mut cases = Vec::new();
    let mut s = String::new();
    let mut status = 0;
    let mut check = |name: String, expected: i64, got: i64, cases: &mut Vec<Value>| {
        let ok = expected == got;
        if !ok {
            status = 1;
        }
        let _ = writeln!(
            s,
            "{name:<28} expected {expected:>2}  got {got:>2}  {}",
            if ok { "ok" } else { "MISMATCH" }
        );
        cases.push(json!({"case": name, "expected": expected, "degree": got}));
    };

    let mut rng = sampling::rng(cfg.file.seed);
    let y: Vec<f64> = sampling::ball_point(&mut rng, 2, 0.5);
    let ball2 = Region::unit_ball(2);
    let yy = y.clone();
    let translation = FiniteMap::new(2, move |x: &[f64]| vec![x[0] - yy[0], x[1] - yy[1]]);
    let d = brouwer_degree(&translation, &ball2, opts).map_err(err)?;
    check(
        format!("id - y, y = ({:.3}, {:.3})", y[0], y[1]),
        1,
        d.degree,
        &mut cases,
    );

    for m in 1..=4 {
        let f = FiniteMap::new(m, |x: &[f64]| x.iter().map(|v| -v).collect());
        let d = brouwer_degree(&f, &Region::unit_ball(m), opts).map_err(err)?;
        check(format!("-id on B^{m}"), if m % 2 == 0 { 1 } else { -1 }, d.degree, &mut cases);
    }

    let square = FiniteMap::new(2, |x: &[f64]| {
        vec![x[0] * x[0] - x[1] * x[1], 2.0 * x[0] * x[1]]
    });
    let d = brouwer_degree(&square, &ball2, opts).map_err(err)?;
    check("z^2 (sign count)".into(), 2, d.degree, &mut cases);
    let w = winding_number_2d(&square, &ball2, opts).map_err(err)?;
    check("z^2 (winding)".into(), 2, w.degree, &mut cases);

    let mut doc = header(cfg, None);
    doc["cases"] = Value::Array(cases);
    em.json("degree_demo.json", &doc)?;
    Ok((status, s, Vec::new()))
}
