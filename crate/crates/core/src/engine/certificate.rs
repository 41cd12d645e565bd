use serde::{Deserialize, Serialize};

use super::limit::{estimate_limit, tail_stats, LimitEstimate, ProbeCurve, Schedule, TAIL};
use super::quotient::CoderivativeQuery;
use super::Tolerances;
use crate::error::Result;
use crate::space::DualitySpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// The limit equals the bound.
    ClosedForm,
    /// The limit is at least the bound.
    LowerBound,
    /// Only strict positivity is claimed; the bound is `0`.
    Positive,
}

/// What a witness construction promises about the limit of its quotient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub bound: f64,
    pub kind: BoundKind,
}

impl Claim {
    pub fn closed_form(bound: f64) -> Self {
        Claim {
            bound,
            kind: BoundKind::ClosedForm,
        }
    }

    pub fn lower_bound(bound: f64) -> Self {
        Claim {
            bound,
            kind: BoundKind::LowerBound,
        }
    }

    pub fn positive() -> Self {
        Claim {
            bound: 0.0,
            kind: BoundKind::Positive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    NotCertified,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound = "")]
pub struct NonMembershipCertificate<S: DualitySpace> {
    pub query: CoderivativeQuery<S>,
    pub curve_id: String,
    pub estimate: LimitEstimate,
    pub claim: Claim,
    pub verdict: Verdict,
}

fn decide(est: &LimitEstimate, claim: Claim, tol: &Tolerances) -> Verdict {
    if !est.settled {
        return Verdict::Inconclusive;
    }
    let floor = match claim.kind {
        BoundKind::Positive => tol.cert_tol,
        _ => claim.bound - tol.cert_tol,
    };
    let ok = est.membership_ok
        && est.converging
        && est.tail().iter().all(|&q| q > 0.0)
        && est.limit >= floor;
    if ok {
        Verdict::Certified
    } else {
        Verdict::NotCertified
    }
}

/// Estimates the limit along `curve` and issues a verdict: certified when
/// the tail settled, stayed positive and reached the claimed bound;
/// inconclusive when it did not settle.
pub fn certify_nonmembership<S: DualitySpace>(
    space: &S,
    query: CoderivativeQuery<S>,
    curve: &ProbeCurve<S>,
    claim: Claim,
    schedule: Option<Schedule>,
    tol: &Tolerances,
) -> Result<NonMembershipCertificate<S>> {
    let estimate = estimate_limit(space, &query, curve, schedule, tol)?;
    let verdict = decide(&estimate, claim, tol);
    Ok(NonMembershipCertificate {
        query,
        curve_id: curve.id.clone(),
        estimate,
        claim,
        verdict,
    })
}

impl<S: DualitySpace> NonMembershipCertificate<S> {
    pub fn record(&self, theorem: &str, space: &S, tol: &Tolerances) -> CertificateRecord {
        CertificateRecord {
            theorem: theorem.to_string(),
            space: space.descriptor(),
            query: serde_json::to_value(&self.query).expect("query serializes"),
            curve_id: self.curve_id.clone(),
            t: self.estimate.t.clone(),
            quotients: self.estimate.quotients.clone(),
            estimated_limit: self.estimate.limit,
            spread: self.estimate.spread,
            settled: self.estimate.settled,
            membership_ok: self.estimate.membership_ok,
            converging: self.estimate.converging,
            slope_bound: self.estimate.slope_bound,
            t0_adjusted: self.estimate.t0_adjusted,
            claimed_bound: self.claim.bound,
            bound_kind: self.claim.kind,
            verdict: self.verdict,
            tolerances: *tol,
        }
    }
}

/// Self-contained JSON form of a certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub theorem: String,
    pub space: serde_json::Value,
    pub query: serde_json::Value,
    pub curve_id: String,
    pub t: Vec<f64>,
    pub quotients: Vec<f64>,
    pub estimated_limit: f64,
    pub spread: f64,
    pub settled: bool,
    pub membership_ok: bool,
    pub converging: bool,
    pub slope_bound: f64,
    pub t0_adjusted: Option<f64>,
    pub claimed_bound: f64,
    pub bound_kind: BoundKind,
    pub verdict: Verdict,
    pub tolerances: Tolerances,
}

/// Re-checks a record from its stored samples only. Returns the list of
/// failed checks; a certified record must have none.
pub fn verify_record(r: &CertificateRecord) -> std::result::Result<(), Vec<String>> {
    let mut problems = Vec::new();
    let tol = &r.tolerances;
    if r.t.len() != r.quotients.len() {
        problems.push(format!("{} times but {} quotients", r.t.len(), r.quotients.len()));
    }
    if r.quotients.len() < TAIL {
        problems.push("fewer samples than the tail length".into());
        return Err(problems);
    }
    if r.t.windows(2).any(|w| w[1] >= w[0]) || r.t.iter().any(|&t| t <= 0.0) {
        problems.push("schedule is not positive and strictly decreasing".into());
    }
    let (mean, spread) = tail_stats(&r.quotients);
    let slack = 1e-12 * (1.0 + mean.abs());
    if (mean - r.estimated_limit).abs() > slack {
        problems.push(format!("stored limit {} but tail mean {mean}", r.estimated_limit));
    }
    if (spread - r.spread).abs() > slack {
        problems.push(format!("stored spread {} but tail spread {spread}", r.spread));
    }
    if r.settled != (spread <= tol.settle_tol) {
        problems.push("settled flag disagrees with the tail spread".into());
    }
    if r.verdict == Verdict::Certified {
        let tail = &r.quotients[r.quotients.len() - TAIL..];
        if !r.settled {
            problems.push("certified but not settled".into());
        }
        if !(r.membership_ok && r.converging) {
            problems.push("certified but the curve failed membership or convergence".into());
        }
        if let Some(q) = tail.iter().find(|&&q| q <= 0.0) {
            problems.push(format!("certified but tail quotient {q} <= 0"));
        }
        let floor = match r.bound_kind {
            BoundKind::Positive => 0.0,
            _ => r.claimed_bound - 2.0 * tol.cert_tol,
        };
        if let Some(q) = tail.iter().find(|&&q| q < floor) {
            problems.push(format!("certified but tail quotient {q} < {floor}"));
        }
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(problems)
    }
}
