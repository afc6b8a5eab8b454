//! Mixed-volume quantities of test functions against a body of revolution,
//! local `L^p` Brunn-Minkowski deficits, stability constants and the
//! volume identities they rest on.

mod body;
mod inequality;
mod volume;

pub use body::{
    center_of_mass_project, center_of_mass_residual, component_integral, mixed_quantities,
    BodyContext, Component, MixedQuantities, TestFunction,
};
pub use inequality::{
    local_lp_deficit, stability_constant, strengthened_deficit, symmetrization_bound,
    InequalityReport, StabilityTerm, SymmetrizationReport, DEFICIT_TOLERANCE,
};
pub use volume::{kubota_check, sphere_area, volume, KubotaReport, PROFILE_NODES};
