//! Independent oracles, random instance generators, and the battery of
//! classical duality-map identities.

mod battery;
pub mod draws;
mod oracle;

pub use battery::{run_appendix_battery, PropertyRecord, SuiteReport, BATTERY_TOL, GRADIENT_TOL};
pub use oracle::{brute_force_duality_l1, gradient_oracle_lp, GradientEstimate, MAX_BRUTE_POINTS, MAX_GRID_STEPS};
