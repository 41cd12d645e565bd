//! Probe-curve constructions for each catalogued non-membership result.
//!
//! Every builder validates the hypotheses it needs, then returns the query,
//! the curve inside the graph of `J`, and the claimed limit.

pub mod c01;
pub mod l1;
pub mod lp;

use super::certificate::Claim;
use super::limit::ProbeCurve;
use super::quotient::CoderivativeQuery;
use crate::space::DualitySpace;

#[derive(Debug, Clone)]
pub struct Witness<S: DualitySpace> {
    pub query: CoderivativeQuery<S>,
    pub curve: ProbeCurve<S>,
    pub claim: Claim,
}

/// `+1` or `-1`; zero maps to `+1`.
pub(crate) fn sign(v: f64) -> f64 {
    if v < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// `t_max` for curves valid for every `t` in `(0, 1)`.
pub(crate) const UNIT_T_MAX: f64 = 0.5;
