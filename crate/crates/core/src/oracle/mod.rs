//! Independent numerical checks of the closed forms.

pub mod contour;
pub mod crossing;
pub mod helmholtz;
pub mod local;
pub mod quad;
pub mod upsilon;

pub use contour::{ContourPath, Segment};
pub use crossing::{additive_crossing_defect, additive_crossing_defect_with, continuations, loops_admissible, CrossingLoops};
pub use helmholtz::helmholtz_residual;
pub use local::{
    gaussian_line_closed, gaussian_line_integral, pd1_full_local_model, pd1_model, pole_line_closed,
    pole_line_integral, rw_local_model, saddle2d_integral, sos_local_integral, sw_local_model, Comparison,
    SosModel,
};
pub use quad::{integrate, QuadOptions, QuadResult};
pub use upsilon::{
    inner_rho_integral, triple_crossing_field, upsilon_case, upsilon_integral_closed, upsilon_integral_numeric,
    upsilon_integral_with, UpsilonCase, UpsilonShape,
};
