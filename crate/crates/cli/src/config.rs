//! Run configuration read from a TOML document.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use qpdiff_core::{make_incidence, IncidenceConfig};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub incidence: Incidence,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub vertex: VertexSpec,
    #[serde(default)]
    pub output: OutputSpec,
    /// Direction `[theta, phi]` for the `classify` table.
    #[serde(default)]
    pub direction: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Incidence {
    pub k0: f64,
    #[serde(default)]
    pub kappa: f64,
    pub theta0: f64,
    pub phi0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GridSpec {
    /// Fixed radius, `theta` and `phi` sampled uniformly over closed ranges.
    Spherical { r: f64, theta: [f64; 2], theta_count: usize, phi: [f64; 2], phi_count: usize },
    /// The `x3 = 0` rectangle `x1 × x2`.
    Planar { x1: [f64; 2], x2: [f64; 2], n1: usize, n2: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "lowercase", deny_unknown_fields)]
pub enum VertexSpec {
    #[default]
    Unit,
    /// CSV table with columns `theta,phi,re,im`.
    File { path: PathBuf },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Jsonl,
    Csv,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run configuration is always representable")
    }

    pub fn incidence_config(&self) -> Result<IncidenceConfig, CliError> {
        let i = self.incidence;
        make_incidence(i.k0, i.kappa, i.theta0, i.phi0).map_err(|e| CliError::Config(format!("incidence: {e}")))
    }

    fn validate(&self) -> Result<(), CliError> {
        self.incidence_config()?;
        match &self.grid {
            Some(GridSpec::Spherical { r, theta_count, phi_count, .. }) => {
                if *theta_count < 1 || *phi_count < 1 {
                    return Err(CliError::Config("grid: counts must be at least 1".into()));
                }
                if !(r.is_finite() && *r > 0.0) {
                    return Err(CliError::Config(format!("grid.r must be positive, got {r}")));
                }
            }
            Some(GridSpec::Planar { n1, n2, .. }) if *n1 < 1 || *n2 < 1 => {
                return Err(CliError::Config("grid: counts must be at least 1".into()));
            }
            _ => {}
        }
        Ok(())
    }

    /// Warnings that do not stop a run.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(GridSpec::Spherical { r, .. }) = &self.grid {
            if *r <= 10.0 / self.incidence.k0 {
                out.push(format!("grid.r = {r} is not in the far field (k0 r <= 10)"));
            }
        }
        out
    }
}

fn spaced(range: [f64; 2], n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| if n == 1 { range[0] } else { range[0] + (range[1] - range[0]) * i as f64 / (n - 1) as f64 })
}

/// Grid node with its Cartesian point and direction angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub x: [f64; 3],
    pub theta: f64,
    pub phi: f64,
}

impl GridSpec {
    /// Nodes in row-major order over the grid.
    pub fn nodes(&self) -> Vec<Node> {
        match *self {
            GridSpec::Spherical { r, theta, theta_count, phi, phi_count } => spaced(theta, theta_count)
                .flat_map(|t| {
                    spaced(phi, phi_count).map(move |p| {
                        let (st, ct) = t.sin_cos();
                        let x3 = if ct.abs() < 1e-14 { 0.0 } else { r * ct };
                        Node { x: [r * st * p.cos(), r * st * p.sin(), x3], theta: t, phi: p }
                    })
                })
                .collect(),
            GridSpec::Planar { x1, x2, n1, n2 } => spaced(x2, n2)
                .flat_map(|b| {
                    spaced(x1, n1).map(move |a| Node {
                        x: [a, b, 0.0],
                        theta: std::f64::consts::FRAC_PI_2,
                        phi: b.atan2(a),
                    })
                })
                .collect(),
        }
    }
}
