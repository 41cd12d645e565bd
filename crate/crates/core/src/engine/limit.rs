use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::quotient::{quotient_parts, CoderivativeQuery, GraphPair};
use super::Tolerances;
use crate::error::{Error, Result};
use crate::space::DualitySpace;

/// Number of trailing samples that make up the limit estimate.
pub const TAIL: usize = 3;

/// Attempts at halving `t0` (by `ratio`) when the curve rejects it.
const MAX_SHRINKS: usize = 64;

/// Geometric sampling `t_k = t0 * ratio^k`, `k = 0..steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub t0: f64,
    pub ratio: f64,
    pub steps: usize,
}

impl Schedule {
    pub fn new(t0: f64, ratio: f64, steps: usize) -> Result<Self> {
        let s = Schedule { t0, ratio, steps };
        s.validate()?;
        Ok(s)
    }

    /// `t0 = min(0.25, t_max / 2)`, ratio `0.5`, `24` steps.
    pub fn default_for(t_max: f64) -> Self {
        Schedule {
            t0: 0.25_f64.min(t_max / 2.0),
            ratio: 0.5,
            steps: 24,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t0.is_finite() && self.t0 > 0.0) {
            return Err(Error::Invalid(format!("t0 must be positive, got {}", self.t0)));
        }
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(Error::Invalid(format!("ratio must lie in (0, 1), got {}", self.ratio)));
        }
        if self.steps < 8 {
            return Err(Error::Invalid(format!("need at least 8 steps, got {}", self.steps)));
        }
        Ok(())
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.steps)
            .map(|k| self.t0 * self.ratio.powi(k as i32))
            .collect()
    }
}

pub type CurveFn<S> = dyn Fn(f64) -> Result<GraphPair<S>> + Send + Sync;

/// A one-parameter family `t -> (u_t, u_t*)` in the graph of `J`, valid on
/// `(0, t_max]` and tending to the base point as `t -> 0`.
#[derive(Clone)]
pub struct ProbeCurve<S: DualitySpace> {
    pub id: String,
    pub t_max: f64,
    generator: Arc<CurveFn<S>>,
}

impl<S: DualitySpace> ProbeCurve<S> {
    pub fn new(
        id: impl Into<String>,
        t_max: f64,
        generator: impl Fn(f64) -> Result<GraphPair<S>> + Send + Sync + 'static,
    ) -> Self {
        ProbeCurve {
            id: id.into(),
            t_max,
            generator: Arc::new(generator),
        }
    }

    pub fn at(&self, t: f64) -> Result<GraphPair<S>> {
        (self.generator)(t)
    }
}

impl<S: DualitySpace> fmt::Debug for ProbeCurve<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProbeCurve")
            .field("id", &self.id)
            .field("t_max", &self.t_max)
            .finish_non_exhaustive()
    }
}

/// Sampled quotients along a curve and the tail estimate of their limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitEstimate {
    pub t: Vec<f64>,
    pub quotients: Vec<f64>,
    /// Mean of the last three quotients.
    pub limit: f64,
    /// `max - min` over the last three quotients.
    pub spread: f64,
    pub settled: bool,
    /// Every sampled pair passed the membership test.
    pub membership_ok: bool,
    /// The graph distance to the base decreased between the two smallest `t`.
    pub converging: bool,
    /// The last three quotients are monotone.
    pub tail_monotone: bool,
    /// Largest observed `||u* - x*|| / ||u - x||`, the local slope of `J`
    /// along the curve (infinite if the primal step vanished).
    pub slope_bound: f64,
    /// Set when the requested `t0` had to be reduced to fit the curve.
    pub t0_adjusted: Option<f64>,
}

impl LimitEstimate {
    pub fn tail(&self) -> &[f64] {
        &self.quotients[self.quotients.len() - TAIL..]
    }
}

pub(crate) fn tail_stats(quotients: &[f64]) -> (f64, f64) {
    let tail = &quotients[quotients.len() - TAIL..];
    let mean = tail.iter().sum::<f64>() / TAIL as f64;
    let max = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = tail.iter().copied().fold(f64::INFINITY, f64::min);
    (mean, max - min)
}

/// Samples the quotient along `curve` on `schedule` (or the default one for
/// the curve's `t_max`).
pub fn estimate_limit<S: DualitySpace>(
    space: &S,
    query: &CoderivativeQuery<S>,
    curve: &ProbeCurve<S>,
    schedule: Option<Schedule>,
    tol: &Tolerances,
) -> Result<LimitEstimate> {
    let requested = schedule.unwrap_or_else(|| Schedule::default_for(curve.t_max));
    requested.validate()?;
    let mut sched = requested;
    if sched.t0 > curve.t_max {
        sched.t0 = curve.t_max;
    }
    let mut first = curve.at(sched.t0);
    let mut shrinks = 0;
    while first.is_err() && shrinks < MAX_SHRINKS {
        sched.t0 *= sched.ratio;
        shrinks += 1;
        first = curve.at(sched.t0);
    }
    let first = first?;

    let times = sched.times();
    let mut quotients = Vec::with_capacity(times.len());
    let mut distances = Vec::with_capacity(times.len());
    let mut membership_ok = true;
    let mut slope_bound = 0.0_f64;
    let mut first = Some(first);
    for &t in &times {
        let pair = match first.take() {
            Some(p) => p,
            None => curve.at(t)?,
        };
        let scale = 1.0 + space.norm(&pair.point)?.powi(2);
        membership_ok &= space.is_member(&pair.dual, &pair.point, tol.membership_tol * scale)?;
        let (num, den) = quotient_parts(space, query, &pair)?;
        if den == 0.0 {
            return Err(Error::Degenerate(format!(
                "curve {} returns the base point at t = {t}",
                curve.id
            )));
        }
        let dx = space.norm(&space.point_diff(&pair.point, &query.base.point)?)?;
        slope_bound = slope_bound.max(if dx > 0.0 { (den - dx) / dx } else { f64::INFINITY });
        quotients.push(num / den);
        distances.push(den);
    }

    let (limit, spread) = tail_stats(&quotients);
    let n = distances.len();
    let tail = &quotients[n - TAIL..];
    let tail_monotone = tail.windows(2).all(|w| w[1] >= w[0]) || tail.windows(2).all(|w| w[1] <= w[0]);
    Ok(LimitEstimate {
        t: times,
        quotients,
        limit,
        spread,
        settled: spread <= tol.settle_tol,
        membership_ok,
        converging: distances[n - 1] < distances[n - 2],
        tail_monotone,
        slope_bound,
        t0_adjusted: (sched.t0 != requested.t0).then_some(sched.t0),
    })
}

/// Best lead of a search over several probe curves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub curve_id: String,
    pub best_limit: f64,
    pub settled: bool,
}

/// Runs [`estimate_limit`] on every curve and keeps the largest limit. A
/// positive value is only a lead; certify it separately.
pub fn falsify_membership_search<S: DualitySpace>(
    space: &S,
    query: &CoderivativeQuery<S>,
    curves: &[ProbeCurve<S>],
    schedule: Option<Schedule>,
    tol: &Tolerances,
) -> Result<SearchResult> {
    let mut best: Option<SearchResult> = None;
    for curve in curves {
        let est = estimate_limit(space, query, curve, schedule, tol)?;
        if best.as_ref().map_or(true, |b| est.limit > b.best_limit) {
            best = Some(SearchResult {
                curve_id: curve.id.clone(),
                best_limit: est.limit,
                settled: est.settled,
            });
        }
    }
    best.ok_or_else(|| Error::Invalid("empty curve family".into()))
}
