use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use qpdiff_core::components::component;
use qpdiff_core::singularities::cc_arc;
use qpdiff_core::verify::{run_selection, Perturbation, Suite, SuiteReport};
use qpdiff_core::{
    real_traces, special_points_plane, special_points_space, total_field, u_incident, CaseKind, Complex64, Error,
    Flag, IncidenceConfig, ObservationPoint, PointKind, PointLabel, TotalField, Trace, TraceId, VertexCoefficient,
    WaveComponent, WaveLabel,
};

use crate::config::{Format, GridSpec, Node, RunConfig, VertexSpec};
use crate::error::CliError;
use crate::output::{write_csv, write_jsonl, Direction, FieldRecord};

/// Core errors that stem from the configuration rather than the numerics.
pub fn classify_error(e: Error) -> CliError {
    match e {
        Error::InvalidConfig(_) | Error::GrazingIncidence { .. } | Error::UnsupportedCase(_) => {
            CliError::Config(e.to_string())
        }
        other => CliError::Numerical(other),
    }
}

fn checked_case(cfg: &IncidenceConfig) -> Result<CaseKind, CliError> {
    let case = cfg.case().map_err(classify_error)?;
    case.require_components().map_err(classify_error)?;
    Ok(case)
}

#[derive(Debug, Clone, Serialize)]
pub struct PointRow {
    pub name: String,
    pub location: [f64; 2],
    pub kind: PointKind,
    pub traces: Vec<TraceId>,
    pub label: PointLabel,
    pub active: Option<bool>,
    pub penumbra: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyReport {
    pub case: CaseKind,
    pub direction: Option<Direction>,
    pub traces: Vec<Trace>,
    pub points: Vec<PointRow>,
}

pub fn classify(run: &RunConfig) -> Result<ClassifyReport, CliError> {
    let cfg = run.incidence_config()?;
    let case = checked_case(&cfg)?;
    let mut traces = real_traces(&cfg, case).map_err(classify_error)?;
    traces.push(cc_arc(&cfg));
    let points = match run.direction {
        Some([theta, phi]) => {
            let (st, ct) = theta.sin_cos();
            let x3 = if ct.abs() < 1e-14 { 0.0 } else { ct };
            let xt = [st * phi.cos(), st * phi.sin(), x3];
            let pts = if x3 == 0.0 {
                special_points_plane(&cfg, case, xt)
            } else {
                special_points_space(&cfg, case, xt)
            }
            .map_err(classify_error)?;
            pts.into_iter()
                .map(|p| PointRow {
                    name: p.name,
                    location: p.location,
                    kind: p.kind,
                    traces: p.traces,
                    label: p.label,
                    active: Some(p.active),
                    penumbra: Some(p.penumbra),
                })
                .collect()
        }
        None => {
            // Any non-penumbral in-plane direction gives the same fixed points.
            let probe = [-std::f64::consts::FRAC_1_SQRT_2, -0.6, 0.0];
            special_points_plane(&cfg, case, probe)
                .map_err(classify_error)?
                .into_iter()
                .filter(|p| p.label != PointLabel::SW)
                .map(|p| PointRow {
                    name: p.name,
                    location: p.location,
                    kind: p.kind,
                    traces: p.traces,
                    label: p.label,
                    active: None,
                    penumbra: None,
                })
                .collect()
        }
    };
    let direction = run.direction.map(|[theta, phi]| Direction { theta, phi });
    Ok(ClassifyReport { case, direction, traces, points })
}

/// Vertex coefficients per direction, looked up by nearest direction.
#[derive(Debug, Clone, Default)]
pub struct VertexTable {
    entries: Vec<(f64, f64, Complex64)>,
}

impl VertexTable {
    pub fn load(spec: &VertexSpec) -> Result<Self, CliError> {
        let path = match spec {
            VertexSpec::Unit => return Ok(Self::default()),
            VertexSpec::File { path } => path,
        };
        let mut reader = csv::Reader::from_path(path)
            .map_err(|e| CliError::Config(format!("vertex table {}: {e}", path.display())))?;
        let mut entries = Vec::new();
        for (i, row) in reader.deserialize::<(f64, f64, f64, f64)>().enumerate() {
            let (theta, phi, re, im) =
                row.map_err(|e| CliError::Config(format!("vertex table {} row {}: {e}", path.display(), i + 1)))?;
            entries.push((theta, phi, Complex64::new(re, im)));
        }
        Ok(Self { entries })
    }

    pub fn lookup(&self, theta: f64, phi: f64) -> VertexCoefficient {
        let tol = 1e-9;
        self.entries
            .iter()
            .find(|(t, p, _)| (t - theta).abs() <= tol && (p - phi).abs() <= tol)
            .map(|&(_, _, w)| VertexCoefficient::supplied(w))
            .unwrap_or_else(VertexCoefficient::unit)
    }
}

fn failed_point(node: &Node, case: CaseKind, why: &str) -> FieldRecord {
    let zero = Complex64::new(0.0, 0.0);
    let breakdown: Vec<WaveComponent> =
        WaveLabel::for_case(case).iter().map(|&l| failed_component(l, why)).collect();
    let flags = breakdown.iter().flat_map(|c| c.flags.clone()).collect();
    FieldRecord::new(node, &TotalField { scattered: zero, total: zero, breakdown, flags })
}

fn failed_component(label: WaveLabel, why: &str) -> WaveComponent {
    WaveComponent {
        label,
        value: Complex64::new(0.0, 0.0),
        active: false,
        penumbra: false,
        needs_vertex_coeff: label == WaveLabel::SW,
        flags: vec![Flag::Failed(label, why.to_string())],
    }
}

/// Sum of the components that can be evaluated; the others are flagged.
fn partial_field(x: &ObservationPoint, cfg: &IncidenceConfig, case: CaseKind, vc: &VertexCoefficient) -> TotalField {
    let mut breakdown = Vec::new();
    let mut flags: Vec<Flag> = Vec::new();
    let mut scattered = Complex64::new(0.0, 0.0);
    for &label in WaveLabel::for_case(case) {
        let c = component(label, x, cfg, vc).unwrap_or_else(|e| failed_component(label, &e.to_string()));
        scattered += c.value;
        for f in &c.flags {
            if !flags.contains(f) {
                flags.push(f.clone());
            }
        }
        breakdown.push(c);
    }
    TotalField { scattered, total: scattered + u_incident(x, cfg), breakdown, flags }
}

pub fn evaluate(node: &Node, cfg: &IncidenceConfig, case: CaseKind, vertex: &VertexTable) -> FieldRecord {
    let x = match ObservationPoint::new(node.x[0], node.x[1], node.x[2]) {
        Ok(x) => x,
        Err(e) => return failed_point(node, case, &e.to_string()),
    };
    let vc = vertex.lookup(node.theta, node.phi);
    let field = total_field(&x, cfg, &vc).unwrap_or_else(|_| partial_field(&x, cfg, case, &vc));
    FieldRecord::new(node, &field)
}

/// One record per grid node in row-major order, evaluated on `jobs`
/// worker threads.
pub fn field(run: &RunConfig, jobs: usize) -> Result<Vec<FieldRecord>, CliError> {
    let cfg = run.incidence_config()?;
    let case = checked_case(&cfg)?;
    let grid: &GridSpec = run.grid.as_ref().ok_or_else(|| CliError::Config("missing [grid] table".into()))?;
    let vertex = VertexTable::load(&run.vertex)?;
    let nodes = grid.nodes();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {jobs} workers: {e}")))?;
    Ok(pool.install(|| nodes.par_iter().map(|n| evaluate(n, &cfg, case, &vertex)).collect()))
}

pub fn encode_field(records: &[FieldRecord], format: Format) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    match format {
        Format::Jsonl => write_jsonl(&mut buf, records)?,
        Format::Csv => write_csv(&mut buf, records)?,
    }
    Ok(buf)
}

pub fn verify(suite: &str, perturb: f64) -> Result<Vec<SuiteReport>, CliError> {
    let suites = Suite::parse_selection(suite).ok_or_else(|| {
        let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
        CliError::Config(format!("unknown suite {suite:?}; expected one of {} or all", names.join(", ")))
    })?;
    Ok(run_selection(&suites, Perturbation { relative: perturb }))
}

/// Writes `bytes` to `path`, or to stdout when no path is given.
pub fn emit(bytes: &[u8], path: Option<&Path>) -> Result<(), CliError> {
    use std::io::Write;
    match path {
        Some(p) => std::fs::write(p, bytes)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
        }
    }
    Ok(())
}
