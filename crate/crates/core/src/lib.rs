//! Far-field asymptotics of plane-wave diffraction by a Dirichlet quarter-plane.
//!
//! The crate is organised bottom-up: [`geometry`] holds the incidence data,
//! [`kernel`] the spectral functions and their branch bookkeeping,
//! [`singularities`] the special-point enumeration, [`components`] the closed
//! forms of every wave component, and [`oracle`] the quadrature checks that
//! validate those closed forms independently. [`verify`] bundles the checks
//! into named suites.

pub mod components;
pub mod error;
pub mod geometry;
pub mod kernel;
pub mod oracle;
pub mod singularities;
pub mod tolerances;
pub mod verify;

pub use num_complex::Complex64;

pub use components::{
    total_field, u_incident, u_pd1, u_pd2, u_rw, u_sd1, u_sd2, u_sw, Flag, TotalField,
    VertexCoefficient, VertexSource, WaveComponent, WaveLabel,
};
pub use error::{Error, Result};
pub use geometry::{classify_case, make_incidence, CaseKind, IncidenceConfig, ObservationPoint};
pub use kernel::{
    continue_along, factorization_defect, gamma, kernel_k, res_w_p1, res_w_p2, w_free_term_1,
    w_free_term_2, BranchPath, ComplexPoint2, Sheet, SheetTracker,
};
pub use oracle::QuadResult;
pub use singularities::{
    activity, phase_model, real_traces, special_points_plane, special_points_space, PhaseModel,
    PointKind, PointLabel, Side, SpecialPoint, Trace, TraceGeometry, TraceId,
};
