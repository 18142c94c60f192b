//! Generalized convexity with respect to a finite-dimensional function
//! family Φ on a finite metric space.

pub mod bauer;
pub mod cloud;
pub mod convexity;
pub mod error;
pub mod families;
pub mod linprog;
mod par;
pub mod perturb;
pub mod report;
pub mod scenario;

pub use cloud::{argmax_set, rho_inf_distance, segment_member, IndexSet, PointCloud, ScalarField, Tolerances};
pub use error::{Error, Result};
pub use families::{build_family, FamilySpec, FunctionFamily, GridSpec};
