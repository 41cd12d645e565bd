//! Coderivative difference quotients along probe curves in the graph of
//! `J`, tail estimates of their limits, and non-membership certificates.
//!
//! A candidate `z*` lies in the regular coderivative `D*J(x, x*)(y**)` only
//! if the quotient
//!
//! ```text
//! (<z*, u - x> - <y**, u* - x*>) / (||u - x|| + ||u* - x*||)
//! ```
//!
//! has nonpositive upper limit as `(u, u*) -> (x, x*)` inside the graph.
//! One curve along which the quotient tends to a positive number is
//! therefore enough to rule `z*` out. Nothing here ever asserts membership.

mod certificate;
mod limit;
mod quotient;
pub mod scenario;
pub mod witness;

use serde::{Deserialize, Serialize};

pub use certificate::{
    certify_nonmembership, verify_record, BoundKind, CertificateRecord, Claim,
    NonMembershipCertificate, Verdict,
};
pub use limit::{
    estimate_limit, falsify_membership_search, LimitEstimate, ProbeCurve, Schedule, SearchResult,
    TAIL,
};
pub use quotient::{quotient, CoderivativeQuery, GraphPair, SecondDualArg};
pub use witness::Witness;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Largest spread of the last three quotients for a settled estimate.
    pub settle_tol: f64,
    /// Slack allowed below the claimed bound.
    pub cert_tol: f64,
    /// Absolute tolerance of the membership test, scaled by `1 + ||u||^2`.
    pub membership_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            settle_tol: 1e-6,
            cert_tol: 1e-6,
            membership_tol: 1e-9,
        }
    }
}
