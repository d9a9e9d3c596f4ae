//! Batch front end: run configurations, task execution, report output and
//! the inequality suite behind `verify`.

use crate::curve::{ComplexPoint, CurveFunction, JordanCurve};
use crate::error::Error;
use crate::harmonic::{self, CellKind, EnergyResult, HarmonicGridField};
use crate::mobius::{apply_mobius, MobiusTransform};
use crate::regularity::{self, RegularityOptions, RegularityReport};
use crate::seminorm::{self, SeminormResult};
use crate::zoo::{self, CurveSpec, FunctionSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

/// Default grid spacing as a fraction of the curve diameter.
pub const DEFAULT_CELLS_PER_DIAMETER: f64 = 256.0;
/// Coarsest spacing of the energy-halving ladder.
pub const HALVING_START: f64 = 1.0 / 128.0;
/// Douglas refinement is checked from this node count upwards.
pub const REFINEMENT_MIN_N: usize = 2048;
pub const REFINEMENT_TOL: f64 = 0.02;
pub const INTERIOR_ORACLE_POINTS: usize = 1000;
pub const MINIMALITY_CELLS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Regularity,
    Douglas,
    Spectral,
    Interior,
    Exterior,
    Verify,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Regularity => "regularity",
            Task::Douglas => "douglas",
            Task::Spectral => "spectral",
            Task::Interior => "interior",
            Task::Exterior => "exterior",
            Task::Verify => "verify",
        }
    }

    fn needs_functions(self) -> bool {
        matches!(self, Task::Douglas | Task::Spectral | Task::Interior | Task::Exterior)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileRef {
    pub file: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CurveSource {
    File(FileRef),
    Spec(CurveSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionSource {
    File(FileRef),
    Spec(FunctionSpec),
}

fn default_tol() -> f64 {
    harmonic::DEFAULT_TOL
}

fn default_refine() -> usize {
    regularity::DEFAULT_REFINE
}

fn default_slack() -> f64 {
    regularity::DEFAULT_SLACK
}

fn default_seed() -> u64 {
    regularity::DEFAULT_SEED
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericOptions {
    /// Node count; must agree with the curve spec when both are given.
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Grid spacing; defaults to diameter / 256.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_refine")]
    pub refine: usize,
    #[serde(default = "default_slack")]
    pub slack: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

impl Default for NumericOptions {
    fn default() -> Self {
        Self {
            n: None,
            h: None,
            tol: default_tol(),
            refine: default_refine(),
            slack: default_slack(),
            seed: default_seed(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputOptions {
    /// Directory receiving one report file per task.
    pub path: PathBuf,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub curve: CurveSource,
    #[serde(default)]
    pub functions: Vec<FunctionSource>,
    pub tasks: Vec<Task>,
    #[serde(default)]
    pub numeric: NumericOptions,
    pub output: OutputOptions,
}

/// Curve file: polygon nodes as `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveFile {
    pub nodes: Vec<[f64; 2]>,
    #[serde(default = "yes")]
    pub closed: bool,
    /// Resample to `numeric.N` equispaced nodes after loading.
    #[serde(default)]
    pub resample: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionFile {
    /// One `[re, im]` value per curve node.
    Samples {
        values: Vec<[f64; 2]>,
        #[serde(default)]
        label: Option<String>,
    },
    Builtin {
        spec: FunctionSpec,
    },
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
    Numeric(Error),
    Verification(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Io(_) => EXIT_IO,
            CliError::Numeric(_) => EXIT_NUMERIC,
            CliError::Verification(_) => EXIT_VERIFICATION,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Numeric(e) => write!(f, "numeric error: {e}"),
            CliError::Verification(n) => write!(f, "{n} inequality check(s) failed"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Numeric(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn config_error(e: Error) -> CliError {
    CliError::Config(e.to_string())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Reads a run configuration. Relative file references inside it resolve
/// against the configuration's directory.
pub fn load_config(path: &Path) -> CliResult<(RunConfig, PathBuf)> {
    let config = read_json(path)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((config, base))
}

fn resolve(base: &Path, file: &Path) -> PathBuf {
    if file.is_absolute() {
        file.to_path_buf()
    } else {
        base.join(file)
    }
}

fn cx(p: [f64; 2]) -> ComplexPoint {
    ComplexPoint::new(p[0], p[1])
}

/// A curve with its boundary functions, ready for the analyzers.
#[derive(Debug, Clone)]
pub struct Problem {
    pub label: String,
    pub spec: Option<CurveSpec>,
    pub curve: JordanCurve,
    pub functions: Vec<(Option<FunctionSpec>, CurveFunction)>,
}

impl Problem {
    pub fn from_spec(spec: &CurveSpec, functions: &[FunctionSpec]) -> CliResult<Self> {
        let curve = zoo::make_curve(spec).map_err(config_error)?;
        let functions = functions
            .iter()
            .map(|f| Ok((Some(f.clone()), zoo::make_function(f, &curve).map_err(config_error)?)))
            .collect::<CliResult<_>>()?;
        Ok(Self {
            label: spec.label(),
            spec: Some(spec.clone()),
            curve,
            functions,
        })
    }

    /// Rebuilds the curve and its builtin functions at `n` nodes. Sample
    /// functions are dropped.
    fn at_resolution(&self, n: usize) -> crate::Result<Problem> {
        let curve = match &self.spec {
            Some(spec) => zoo::make_curve(&CurveSpec { n, ..spec.clone() })?,
            None => self.curve.resample_arclength(n)?,
        };
        let functions = self
            .functions
            .iter()
            .filter_map(|(spec, _)| spec.as_ref())
            .map(|spec| Ok((Some(spec.clone()), zoo::make_function(spec, &curve)?)))
            .collect::<crate::Result<_>>()?;
        Ok(Problem {
            label: self.label.clone(),
            spec: self.spec.clone(),
            curve,
            functions,
        })
    }
}

fn load_curve(source: &CurveSource, numeric: &NumericOptions, base: &Path) -> CliResult<(String, Option<CurveSpec>, JordanCurve)> {
    match source {
        CurveSource::Spec(spec) => {
            if let Some(n) = numeric.n {
                if n != spec.n {
                    return Err(CliError::Config(format!("numeric.N = {n} disagrees with curve N = {}", spec.n)));
                }
            }
            let curve = zoo::make_curve(spec).map_err(config_error)?;
            Ok((spec.label(), Some(spec.clone()), curve))
        }
        CurveSource::File(FileRef { file }) => {
            let path = resolve(base, file);
            let data: CurveFile = read_json(&path)?;
            if !data.closed {
                return Err(CliError::Config(format!("{}: open curves are not supported", path.display())));
            }
            let curve = JordanCurve::new(data.nodes.iter().copied().map(cx).collect()).map_err(config_error)?;
            let curve = if data.resample {
                let n = numeric
                    .n
                    .ok_or_else(|| CliError::Config("resampling a curve file needs numeric.N".into()))?;
                curve.resample_arclength(n).map_err(config_error)?
            } else {
                if let Some(n) = numeric.n {
                    if n != curve.len() {
                        return Err(CliError::Config(format!(
                            "numeric.N = {n} but {} has {} nodes",
                            path.display(),
                            curve.len()
                        )));
                    }
                }
                curve
            };
            Ok((path.display().to_string(), None, curve))
        }
    }
}

fn load_function(
    source: &FunctionSource,
    curve: &JordanCurve,
    base: &Path,
) -> CliResult<(Option<FunctionSpec>, CurveFunction)> {
    let spec = match source {
        FunctionSource::Spec(spec) => spec.clone(),
        FunctionSource::File(FileRef { file }) => {
            let path = resolve(base, file);
            match read_json::<FunctionFile>(&path)? {
                FunctionFile::Builtin { spec } => spec,
                FunctionFile::Samples { values, label } => {
                    let label = label.unwrap_or_else(|| path.display().to_string());
                    let f = CurveFunction::for_curve(curve, values.into_iter().map(cx).collect(), label)
                        .map_err(config_error)?;
                    return Ok((None, f));
                }
            }
        }
    };
    let f = zoo::make_function(&spec, curve).map_err(config_error)?;
    Ok((Some(spec), f))
}

/// Checks the configuration and builds the problem. Nothing is written.
pub fn prepare(config: &RunConfig, base: &Path) -> CliResult<Problem> {
    if config.tasks.is_empty() {
        return Err(CliError::Config("at least one task is required".into()));
    }
    let numeric = &config.numeric;
    if !(numeric.tol > 0.0) || !(numeric.slack >= 0.0) || numeric.refine == 0 {
        return Err(CliError::Config(format!(
            "tol must be positive, slack nonnegative and refine at least 1 (got {}, {}, {})",
            numeric.tol, numeric.slack, numeric.refine
        )));
    }
    if config.tasks.iter().any(|t| t.needs_functions()) && config.functions.is_empty() {
        return Err(CliError::Config("seminorm and energy tasks need at least one function".into()));
    }
    let (label, spec, curve) = load_curve(&config.curve, numeric, base)?;
    if config.tasks.contains(&Task::Spectral) && !curve.len().is_power_of_two() {
        return Err(CliError::Config(format!("spectral needs N a power of two, got {}", curve.len())));
    }
    if let Some(h) = numeric.h {
        let coarsest = curve.diameter() / harmonic::MIN_CELLS_PER_DIAMETER;
        if !(h > 0.0) || h > coarsest {
            return Err(CliError::Config(format!("h = {h} must lie in (0, diameter/64 = {coarsest}]")));
        }
    }
    let functions = config
        .functions
        .iter()
        .map(|f| load_function(f, &curve, base))
        .collect::<CliResult<_>>()?;
    Ok(Problem { label, spec, curve, functions })
}

fn grid_spacing(numeric: &NumericOptions, curve: &JordanCurve) -> f64 {
    numeric.h.unwrap_or(curve.diameter() / DEFAULT_CELLS_PER_DIAMETER)
}

/// Report of one task, rendered in both formats.
#[derive(Debug, Clone)]
pub struct TaskReport {
    pub task: Task,
    pub json: Value,
    pub csv: String,
}

impl TaskReport {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => self.csv.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub reports: Vec<TaskReport>,
    pub verification: Option<VerifyReport>,
}

fn seminorm_task(problem: &Problem, task: Task) -> crate::Result<TaskReport> {
    let mut rows = Vec::new();
    let normalized = if task == Task::Spectral {
        Some(problem.curve.rescaled_to_length(TAU)?)
    } else {
        None
    };
    for (_, f) in &problem.functions {
        let result: SeminormResult = match &normalized {
            Some(curve) => seminorm::circle_seminorm_spectral(&seminorm::pullback_arclength(curve, f)?)?,
            None => seminorm::douglas_seminorm(&problem.curve, f)?,
        };
        rows.push((f.label.clone(), result));
    }
    let mut csv = String::from("function,value_sq,scheme,N,diagonal_term\n");
    for (label, r) in &rows {
        let scheme = serde_json::to_value(r.scheme).expect("scheme serializes");
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            csv_field(label),
            r.value_sq,
            scheme.as_str().unwrap_or_default(),
            r.n,
            r.diagonal_term
        );
    }
    let json = json!({
        "task": task.name(),
        "curve": problem.label,
        "N": problem.curve.len(),
        "results": rows.iter().map(|(label, r)| json!({"function": label, "result": r})).collect::<Vec<_>>(),
    });
    Ok(TaskReport { task, json, csv })
}

fn energy_task(problem: &Problem, task: Task, numeric: &NumericOptions) -> crate::Result<TaskReport> {
    let h = grid_spacing(numeric, &problem.curve);
    let mut rows: Vec<(String, EnergyResult)> = Vec::new();
    for (_, f) in &problem.functions {
        let result = match task {
            Task::Interior => harmonic::interior_energy_grid(&problem.curve, f, h, numeric.tol)?,
            _ => harmonic::exterior_energy_grid(&problem.curve, f, h, numeric.tol)?,
        };
        rows.push((f.label.clone(), result));
    }
    let mut csv = String::from("function,energy,h,iterations,residual\n");
    for (label, r) in &rows {
        let _ = writeln!(csv, "{},{},{},{},{}", csv_field(label), r.energy, r.h, r.iterations, r.residual);
    }
    let json = json!({
        "task": task.name(),
        "curve": problem.label,
        "N": problem.curve.len(),
        "h": h,
        "results": rows.iter().map(|(label, r)| json!({"function": label, "result": r})).collect::<Vec<_>>(),
    });
    Ok(TaskReport { task, json, csv })
}

fn regularity_task(problem: &Problem, numeric: &NumericOptions) -> crate::Result<TaskReport> {
    let options = RegularityOptions {
        refine: numeric.refine,
        seed: numeric.seed,
        ..RegularityOptions::default()
    };
    let report = regularity::estimate_regularity(&problem.curve, &options)?;
    let mut csv = Vec::new();
    RegularityReport::write_csv(&[(problem.label.clone(), problem.curve.len(), report.clone())], &mut csv)
        .expect("writing to memory");
    let json = json!({
        "task": "regularity",
        "curve": problem.label,
        "N": problem.curve.len(),
        "report": report.to_json(),
    });
    Ok(TaskReport {
        task: Task::Regularity,
        json,
        csv: String::from_utf8(csv).expect("utf-8 report"),
    })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Runs every requested task in the fixed order regularity → seminorms →
/// energies → verify.
pub fn execute(problem: &Problem, tasks: &[Task], numeric: &NumericOptions) -> crate::Result<RunOutcome> {
    let mut ordered = tasks.to_vec();
    ordered.sort();
    ordered.dedup();
    let mut reports = Vec::new();
    let mut verification = None;
    for task in ordered {
        let report = match task {
            Task::Regularity => regularity_task(problem, numeric)?,
            Task::Douglas | Task::Spectral => seminorm_task(problem, task)?,
            Task::Interior | Task::Exterior => energy_task(problem, task, numeric)?,
            Task::Verify => {
                let v = verify(problem, numeric)?;
                let report = v.to_task_report();
                verification = Some(v);
                report
            }
        };
        reports.push(report);
    }
    Ok(RunOutcome { reports, verification })
}

/// Writes one file per report into `output.path`.
pub fn write_reports(outcome: &RunOutcome, output: &OutputOptions) -> CliResult<Vec<PathBuf>> {
    fs::create_dir_all(&output.path).map_err(|e| CliError::Io(format!("{}: {e}", output.path.display())))?;
    let mut written = Vec::new();
    for report in &outcome.reports {
        let path = output
            .path
            .join(format!("{}.{}", report.task.name(), output.format.extension()));
        fs::write(&path, report.render(output.format)).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        written.push(path);
    }
    Ok(written)
}

/// Full `run` pipeline: load, validate, compute, then write. Failing
/// inequalities are printed with their witnesses and mapped to exit 4.
pub fn run_config_file(path: &Path) -> CliResult<Vec<PathBuf>> {
    let (config, base) = load_config(path)?;
    let problem = prepare(&config, &base)?;
    let outcome = execute(&problem, &config.tasks, &config.numeric)?;
    let written = write_reports(&outcome, &config.output)?;
    if let Some(v) = &outcome.verification {
        v.print_failures();
        let failures = v.failures();
        if failures > 0 {
            return Err(CliError::Verification(failures));
        }
    }
    Ok(written)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

/// One named inequality: `value` must stand in `relation` to `bound`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub holds: bool,
    pub value: f64,
    pub relation: Relation,
    pub bound: f64,
    pub witness: String,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64, witness: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            holds: value <= bound,
            value,
            relation: Relation::AtMost,
            bound,
            witness: witness.into(),
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, bound: f64, witness: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            holds: value >= bound,
            value,
            relation: Relation::AtLeast,
            bound,
            witness: witness.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub curve: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub slack: f64,
    pub checks: Vec<Check>,
    /// Checks that could not run on this input, with the reason.
    pub skipped: Vec<(String, String)>,
}

impl VerifyReport {
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.holds).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn print_failures(&self) {
        for c in self.checks.iter().filter(|c| !c.holds) {
            let rel = if c.relation == Relation::AtMost { "<=" } else { ">=" };
            eprintln!("FAIL {}: {} {rel} {} violated; witness {}", c.name, c.value, c.bound, c.witness);
        }
    }

    fn to_task_report(&self) -> TaskReport {
        let mut csv = String::from("name,holds,value,relation,bound,witness\n");
        for c in &self.checks {
            let rel = if c.relation == Relation::AtMost { "<=" } else { ">=" };
            let _ = writeln!(
                csv,
                "{},{},{},{rel},{},{}",
                c.name,
                c.holds,
                c.value,
                c.bound,
                csv_field(&c.witness)
            );
        }
        let mut json = serde_json::to_value(self).expect("verify report serializes");
        json["task"] = json!("verify");
        json["passed"] = json!(self.passed());
        TaskReport {
            task: Task::Verify,
            json,
            csv,
        }
    }
}

fn fmt_point(z: ComplexPoint) -> String {
    format!("{}{:+}i", z.re, z.im)
}

fn relative_change(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Even-odd crossing count along the rightward ray, kept separate from the
/// curve's own winding-number test.
fn crossing_parity(nodes: &[ComplexPoint], p: ComplexPoint) -> bool {
    let n = nodes.len();
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (nodes[i], nodes[(i + 1) % n]);
        if (a.im > p.im) != (b.im > p.im) {
            let x = a.re + (p.im - a.im) * (b.re - a.re) / (b.im - a.im);
            if x > p.re {
                inside = !inside;
            }
        }
    }
    inside
}

fn max_ratio_over_pairs(curve: &JordanCurve, stride: usize) -> (f64, (usize, usize)) {
    let n = curve.len();
    let mut best = (1.0, (0, 0));
    for i in (0..n).step_by(stride) {
        for j in (i + stride..n).step_by(stride) {
            let chord = (curve.node(j) - curve.node(i)).norm();
            let q = curve.shorter_arc_length(i, j) / chord;
            if q > best.0 {
                best = (q, (i, j));
            }
        }
    }
    best
}

/// Evaluates every per-curve inequality of the analyzers on `problem`.
///
/// Functions default to the zoo's standard set when none are given. Grid
/// checks use spacings relative to the curve diameter.
pub fn verify(problem: &Problem, numeric: &NumericOptions) -> crate::Result<VerifyReport> {
    let curve = &problem.curve;
    let slack = numeric.slack;
    let n = curve.len();
    let diam = curve.diameter();
    let refine = numeric.refine;
    let mut checks = Vec::new();
    let mut skipped = Vec::new();
    let problem = if problem.functions.is_empty() {
        let specs = zoo::standard_functions(curve);
        let functions = specs
            .iter()
            .map(|s| Ok((Some(s.clone()), zoo::make_function(s, curve)?)))
            .collect::<crate::Result<_>>()?;
        Problem {
            functions,
            ..problem.clone()
        }
    } else {
        problem.clone()
    };

    // Curve geometry.
    checks.push(match curve.check_simple() {
        Ok(()) => Check::at_most("simple_curve", 0.0, 0.0, ""),
        Err(e) => Check::at_most("simple_curve", 1.0, 0.0, e.to_string()),
    });

    let transforms = regularity::invariance_transform_sample(curve, regularity::INVARIANCE_TRANSFORMS, numeric.seed);
    let mut worst = (0.0, MobiusTransform::identity());
    for t in &transforms {
        let image = apply_mobius(t, curve, refine)?;
        let back = apply_mobius(&t.inverse(), &image, refine)?;
        let d = back.hausdorff_distance(curve) / diam;
        if d > worst.0 {
            worst = (d, *t);
        }
    }
    checks.push(Check::at_most(
        "mobius_round_trip",
        worst.0,
        1e-6,
        format!("{:?}", worst.1),
    ));

    let rotation = MobiusTransform::similarity(ComplexPoint::from_polar(1.0, 0.7), ComplexPoint::new(0.0, 0.0))?;
    let s0 = curve.spherical_length();
    let rotated = apply_mobius(&rotation, curve, 1)?.spherical_length();
    checks.push(Check::at_most("slength_rotation", relative_change(s0, rotated), 1e-3, "alpha=0.7"));
    if curve.distance_to_curve(ComplexPoint::new(0.0, 0.0)) > 1e-3 * diam {
        let one = ComplexPoint::new(1.0, 0.0);
        let zero = ComplexPoint::new(0.0, 0.0);
        let reciprocal = MobiusTransform::new(zero, one, one, zero)?;
        let refined = apply_mobius(&MobiusTransform::identity(), curve, refine)?.spherical_length();
        let image = apply_mobius(&reciprocal, curve, refine)?.spherical_length();
        checks.push(Check::at_most("slength_reciprocal", relative_change(refined, image), 1e-3, "z -> 1/z"));
    } else {
        skipped.push(("slength_reciprocal".into(), "origin lies on the curve".into()));
    }

    let mut min_arc_over_chord = (f64::INFINITY, (0, 0));
    for i in 0..n {
        for j in i + 1..n {
            let q = curve.shorter_arc_length(i, j) / (curve.node(j) - curve.node(i)).norm();
            if q < min_arc_over_chord.0 {
                min_arc_over_chord = (q, (i, j));
            }
        }
    }
    checks.push(Check::at_least(
        "arc_dominates_chord",
        min_arc_over_chord.0,
        1.0 - 1e-12,
        format!("nodes {:?}", min_arc_over_chord.1),
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(numeric.seed);
    let (mut lo, mut hi) = (curve.node(0), curve.node(0));
    for z in curve.nodes() {
        lo = ComplexPoint::new(lo.re.min(z.re), lo.im.min(z.im));
        hi = ComplexPoint::new(hi.re.max(z.re), hi.im.max(z.im));
    }
    let pad = 0.1 * diam;
    let mut disagreements = 0;
    let mut first_disagreement = None;
    for _ in 0..INTERIOR_ORACLE_POINTS {
        let p = ComplexPoint::new(
            rng.gen_range(lo.re - pad..hi.re + pad),
            rng.gen_range(lo.im - pad..hi.im + pad),
        );
        if curve.distance_to_curve(p) < 1e-9 * diam {
            continue;
        }
        if curve.point_in_interior(p)? != crossing_parity(curve.nodes(), p) {
            disagreements += 1;
            first_disagreement.get_or_insert(p);
        }
    }
    checks.push(Check::at_most(
        "interior_oracle",
        disagreements as f64,
        0.0,
        first_disagreement.map(fmt_point).unwrap_or_default(),
    ));

    // Regularity constants.
    let options = RegularityOptions {
        refine,
        seed: numeric.seed,
        ..RegularityOptions::default()
    };
    let report = regularity::estimate_regularity(curve, &options)?;
    let k = report.chord_arc_K;
    let m = report.ahlfors_M;
    let moved = curve.similarity_image(ComplexPoint::from_polar(2.5, 0.4), ComplexPoint::new(1.0, -2.0))?;
    let (k_moved, _) = regularity::chord_arc_constant(&moved)?;
    checks.push(Check::at_most(
        "chord_arc_similarity",
        relative_change(k, k_moved),
        1e-10,
        "z -> 2.5e^{0.4i}z + 1-2i",
    ));
    let (k_half, pair) = max_ratio_over_pairs(curve, 2);
    checks.push(Check::at_most("chord_arc_budget_monotone", k_half, k, format!("nodes {pair:?}")));
    let m_coarse = regularity::ahlfors_constant(curve, regularity::DEFAULT_RADII_PER_DECADE / 2, &[])?;
    checks.push(Check::at_most(
        "ahlfors_budget_monotone",
        m_coarse.m,
        m,
        format!("{:?}", m_coarse.witness),
    ));
    let cloud = regularity::default_witness_cloud(curve);
    let half: Vec<ComplexPoint> = cloud.iter().copied().step_by(2).collect();
    let c_half = regularity::inversion_bound_constant(curve, &half, refine)?;
    checks.push(Check::at_most(
        "inversion_budget_monotone",
        c_half.c,
        report.inversion_C,
        fmt_point(c_half.witness),
    ));
    checks.push(Check::at_most(
        "spherical_le_60M",
        report.slength_sup,
        60.0 * m * (1.0 + slack),
        format!("{:?}", report.witnesses.slength_transform),
    ));
    checks.push(Check::at_most(
        "inversion_le_2Ks",
        report.inversion_C,
        2.0 * report.slength_sup * (1.0 + slack),
        fmt_point(report.witnesses.inversion_point),
    ));
    let invariance = regularity::mobius_invariance_report(curve, m, &transforms, slack)?;
    let worst_row = invariance
        .rows
        .iter()
        .max_by(|a, b| a.ratio.total_cmp(&b.ratio))
        .map(|r| format!("{:?}", r.transform))
        .unwrap_or_default();
    checks.push(Check::at_most("ahlfors_le_12M", invariance.max_ratio(), invariance.bound, worst_row));

    // Seminorms.
    let lambda = ComplexPoint::new(3.0, -4.0);
    let shift = ComplexPoint::new(-0.75, 2.5);
    let mut worst_shift = (0.0, String::new());
    let mut worst_scale = (0.0, String::new());
    for (_, f) in &problem.functions {
        let base = seminorm::douglas_seminorm(curve, f)?.value_sq;
        let shifted = seminorm::douglas_seminorm(curve, &f.shifted(shift))?.value_sq;
        let scaled = seminorm::douglas_seminorm(curve, &f.scaled(lambda))?.value_sq;
        let e_shift = if base > 0.0 { (shifted - base).abs() / base } else { shifted.abs() };
        let e_scale = if base > 0.0 {
            (scaled - lambda.norm_sqr() * base).abs() / (lambda.norm_sqr() * base)
        } else {
            scaled.abs()
        };
        if e_shift >= worst_shift.0 {
            worst_shift = (e_shift, f.label.clone());
        }
        if e_scale >= worst_scale.0 {
            worst_scale = (e_scale, f.label.clone());
        }
    }
    checks.push(Check::at_most("douglas_constant_shift", worst_shift.0, 1e-10, worst_shift.1));
    checks.push(Check::at_most("douglas_scaling", worst_scale.0, 1e-12, worst_scale.1));

    let normalized = curve.rescaled_to_length(TAU)?;
    let (k_norm, _) = regularity::chord_arc_constant(&normalized)?;
    let sine = seminorm::sine_bounds(&normalized, k_norm)?;
    checks.push(Check::at_most(
        "sine_upper_bound",
        sine.upper_violations as f64,
        0.0,
        format!("nodes {:?}", sine.witness_upper),
    ));
    checks.push(Check::at_most(
        "sine_lower_bound",
        sine.lower_violations as f64,
        0.0,
        format!("nodes {:?}", sine.witness_lower),
    ));

    if n.is_power_of_two() {
        let functions: Vec<CurveFunction> = problem.functions.iter().map(|(_, f)| f.clone()).collect();
        let equivalence = seminorm::equivalence_report(&normalized, &functions, k_norm, slack)?;
        let ratios: Vec<(f64, &str)> = equivalence
            .rows
            .iter()
            .filter_map(|r| r.ratio.map(|q| (q, r.function.as_str())))
            .collect();
        if let (Some(lo), Some(hi)) = (
            ratios.iter().min_by(|a, b| a.0.total_cmp(&b.0)),
            ratios.iter().max_by(|a, b| a.0.total_cmp(&b.0)),
        ) {
            checks.push(Check::at_least("ratio_lower_bound", lo.0, equivalence.lower_bound, lo.1));
            checks.push(Check::at_most("ratio_upper_bound", hi.0, equivalence.upper_bound, hi.1));
        }
        let spectral_shift = problem
            .functions
            .iter()
            .map(|(_, f)| {
                let a = seminorm::circle_seminorm_spectral(f)?.value_sq;
                let b = seminorm::circle_seminorm_spectral(&f.shifted(shift))?.value_sq;
                Ok(if a > 0.0 { (a - b).abs() / a } else { b.abs() })
            })
            .collect::<crate::Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        checks.push(Check::at_most("spectral_constant_shift", spectral_shift, 1e-10, ""));
    } else {
        skipped.push(("ratio_bracket".into(), format!("N = {n} is not a power of two")));
    }

    let n_ref = n.max(REFINEMENT_MIN_N);
    let coarse = problem.at_resolution(n_ref)?;
    let fine = problem.at_resolution(2 * n_ref)?;
    let mut worst_refinement = (0.0, String::new());
    for ((spec, f), (_, g)) in coarse.functions.iter().zip(&fine.functions) {
        if let Some(FunctionSpec::InversePole { w }) = spec {
            if coarse.curve.distance_to_curve(cx(*w)) < 0.1 * diam {
                continue;
            }
        }
        let a = seminorm::douglas_seminorm(&coarse.curve, f)?.value_sq;
        let b = seminorm::douglas_seminorm(&fine.curve, g)?.value_sq;
        let change = relative_change(a, b);
        if change >= worst_refinement.0 {
            worst_refinement = (change, format!("{} at N = {n_ref}", f.label));
        }
    }
    checks.push(Check::at_most(
        "douglas_refinement",
        worst_refinement.0,
        REFINEMENT_TOL,
        worst_refinement.1,
    ));

    // Harmonic extension.
    let h = grid_spacing(numeric, curve);
    let (_, f0) = &problem.functions[0];
    let (_, field) = harmonic::interior_energy_field(curve, f0, h, numeric.tol)?;
    let (count, witness) = minimality_violations(&field, numeric.seed);
    checks.push(Check::at_most(
        "energy_minimality",
        count as f64,
        0.0,
        witness.map(|c| format!("cell {c} at {}", fmt_point(field.center(c)))).unwrap_or_default(),
    ));

    let coordinate = CurveFunction::from_fn(curve, "coordinate", |z| z)?;
    let h0 = HALVING_START.min(diam / DEFAULT_CELLS_PER_DIAMETER);
    let ladder = [h0, h0 / 2.0, h0 / 4.0];
    let energies = ladder
        .iter()
        .map(|&h| Ok(harmonic::interior_energy_grid(curve, &coordinate, h, numeric.tol)?.energy))
        .collect::<crate::Result<Vec<f64>>>()?;
    let first = (energies[0] - energies[1]).abs();
    let second = (energies[1] - energies[2]).abs();
    checks.push(Check::at_most(
        "energy_halving_convergence",
        second,
        first,
        format!("coordinate energies {energies:?} at h = {ladder:?}"),
    ));

    Ok(VerifyReport {
        curve: problem.label.clone(),
        n,
        slack,
        checks,
        skipped,
    })
}

/// Perturbs random solved interior cells by `±h²` along both axes and
/// counts perturbations that fail to raise the energy.
pub fn minimality_violations(field: &HarmonicGridField, seed: u64) -> (usize, Option<usize>) {
    let interior: Vec<usize> = (0..field.mask.len())
        .filter(|&c| field.mask[c] == CellKind::Interior)
        .collect();
    if interior.is_empty() {
        return (0, None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step = field.h * field.h;
    let mut violations = 0;
    let mut witness = None;
    for _ in 0..MINIMALITY_CELLS {
        let cell = interior[rng.gen_range(0..interior.len())];
        for delta in [
            ComplexPoint::new(step, 0.0),
            ComplexPoint::new(-step, 0.0),
            ComplexPoint::new(0.0, step),
            ComplexPoint::new(0.0, -step),
        ] {
            if !(field.local_energy_change(cell, delta) > 0.0) {
                violations += 1;
                witness.get_or_insert(cell);
            }
        }
    }
    (violations, witness)
}

/// Seminorms and energies of one function on one curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergySummary {
    pub curve: String,
    pub function: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub h: f64,
    pub douglas: f64,
    pub spectral: Option<f64>,
    pub interior: EnergyResult,
    pub exterior: EnergyResult,
}

/// Every seminorm and energy of `f` on `curve`. With `dump`, the solved
/// interior and reflected exterior fields are written as CSV into it.
pub fn energies(
    label: &str,
    curve: &JordanCurve,
    f: &CurveFunction,
    h: f64,
    tol: f64,
    dump: Option<&Path>,
) -> CliResult<EnergySummary> {
    let coarsest = curve.diameter() / harmonic::MIN_CELLS_PER_DIAMETER;
    if !(h > 0.0) || h > coarsest {
        return Err(CliError::Config(format!("h = {h} must lie in (0, diameter/64 = {coarsest}]")));
    }
    let douglas = seminorm::douglas_seminorm(curve, f)?.value_sq;
    let spectral = if curve.len().is_power_of_two() {
        let normalized = curve.rescaled_to_length(TAU)?;
        Some(seminorm::circle_seminorm_spectral(&seminorm::pullback_arclength(&normalized, f)?)?.value_sq)
    } else {
        None
    };
    let (interior, inner_field) = harmonic::interior_energy_field(curve, f, h, tol)?;
    let (exterior, outer_field) = harmonic::exterior_energy_field(curve, f, h, tol)?;
    if let Some(dir) = dump {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        for (name, field) in [("interior_field.csv", &inner_field), ("exterior_field.csv", &outer_field)] {
            let path = dir.join(name);
            let file = fs::File::create(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            field
                .write_csv(std::io::BufWriter::new(file))
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        }
    }
    Ok(EnergySummary {
        curve: label.to_string(),
        function: f.label.clone(),
        n: curve.len(),
        h,
        douglas,
        spectral,
        interior,
        exterior,
    })
}

/// Parses `--curve` arguments of `verify`: a JSON file holding a curve
/// spec or curve file, inline JSON, or a family name completed by `params`.
pub fn parse_curve_argument(arg: &str, params: &[(String, f64)], n: usize) -> CliResult<Problem> {
    let trimmed = arg.trim();
    if trimmed.starts_with('{') {
        let spec: CurveSpec = serde_json::from_str(trimmed).map_err(|e| CliError::Config(e.to_string()))?;
        return Problem::from_spec(&spec, &[]);
    }
    let path = Path::new(trimmed);
    if path.extension().is_some_and(|e| e == "json") {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        if let Ok(spec) = serde_json::from_str::<CurveSpec>(&text) {
            return Problem::from_spec(&spec, &[]);
        }
        let numeric = NumericOptions {
            n: Some(n),
            ..NumericOptions::default()
        };
        let data: CurveFile = serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let numeric = if data.resample { numeric } else { NumericOptions::default() };
        let source = CurveSource::File(FileRef { file: path.to_path_buf() });
        let (label, spec, curve) = load_curve(&source, &numeric, Path::new(""))?;
        return Ok(Problem {
            label,
            spec,
            curve,
            functions: Vec::new(),
        });
    }
    let mut spec = CurveSpec::new(trimmed, &[], n);
    for (key, value) in params {
        spec.params.insert(key.clone(), *value);
    }
    Problem::from_spec(&spec, &[])
}
