//! ZOH discretization, current-observer matrices and transfer-function
//! coefficient synthesis.

pub mod coefficients;
pub mod eso;
pub mod oracle;
pub mod placement;
pub mod zoh;

pub use coefficients::{tf_coefficients_closed_form, TfCoefficients, TfVariant};
pub use eso::{build_eso, EsoMatrices};
pub use oracle::tf_coefficients_oracle;
pub use placement::PLACEMENT_TOLERANCE;
pub use zoh::{zoh_integrator_chain, zoh_virtual_plant, PlantKind, PlantTriple};
