//! Piecewise-linear model of `C[0,1]` with the sup norm, and its dual
//! `rca[0,1]` restricted to atoms plus piecewise-constant densities.

mod measure;
mod pwl;

use serde::{Deserialize, Serialize};

pub use measure::{pairing_c, tv_norm, RcaMeasure, StepDensity};
pub use pwl::PwlFunction;

use crate::error::{Error, Result};
use crate::space::DualitySpace;

/// Tolerance for `|f(s)| = ||f||` at breakpoints, relative to `max(1, ||f||)`.
pub const MAX_TOL: f64 = 1e-12;

/// Tolerance for comparing locations in `[0, 1]`.
const LOC_TOL: f64 = 1e-12;

pub fn sup_norm(f: &PwlFunction) -> f64 {
    f.sup_norm()
}

/// `M(f) = {s : |f(s)| = ||f||}` as isolated points plus closed intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximizingSet {
    pub atoms: Vec<f64>,
    pub intervals: Vec<(f64, f64)>,
}

impl MaximizingSet {
    pub fn contains(&self, s: f64) -> bool {
        self.atoms.iter().any(|&a| (a - s).abs() <= LOC_TOL)
            || self
                .intervals
                .iter()
                .any(|&(a, b)| s >= a - LOC_TOL && s <= b + LOC_TOL)
    }

    /// Whether `[a, b]` lies inside one interval of the set.
    pub fn covers(&self, a: f64, b: f64) -> bool {
        self.intervals
            .iter()
            .any(|&(lo, hi)| a >= lo - LOC_TOL && b <= hi + LOC_TOL)
    }

    /// Set equality up to [`LOC_TOL`] on every endpoint.
    pub fn same_set(&self, other: &MaximizingSet) -> bool {
        let close = |x: f64, y: f64| (x - y).abs() <= LOC_TOL;
        self.atoms.len() == other.atoms.len()
            && self.intervals.len() == other.intervals.len()
            && self.atoms.iter().zip(&other.atoms).all(|(&x, &y)| close(x, y))
            && self
                .intervals
                .iter()
                .zip(&other.intervals)
                .all(|(x, y)| close(x.0, y.0) && close(x.1, y.1))
    }

    /// One representative point per component: each atom and the left end
    /// of each interval, in increasing order.
    pub fn representatives(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self
            .atoms
            .iter()
            .copied()
            .chain(self.intervals.iter().map(|i| i.0))
            .collect();
        pts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        pts
    }
}

fn attains(v: f64, norm: f64) -> bool {
    v.abs() >= norm - MAX_TOL * norm.max(1.0)
}

/// Exact maximizing set. Isolated breakpoints at `+-||f||` become atoms,
/// runs of consecutive same-signed breakpoints at the max become intervals
/// (a linear piece between `+||f||` and `-||f||` only touches its ends).
pub fn maximizing_set(f: &PwlFunction) -> Result<MaximizingSet> {
    let norm = f.sup_norm();
    if norm == 0.0 {
        return Err(Error::Degenerate("maximizing set of the zero function".into()));
    }
    let (t, v) = (f.breakpoints(), f.values());
    let mut set = MaximizingSet {
        atoms: Vec::new(),
        intervals: Vec::new(),
    };
    let mut i = 0;
    while i < t.len() {
        if !attains(v[i], norm) {
            i += 1;
            continue;
        }
        let start = i;
        while i + 1 < t.len() && attains(v[i + 1], norm) && v[i + 1].signum() == v[start].signum() {
            i += 1;
        }
        if i == start {
            set.atoms.push(t[i]);
        } else {
            set.intervals.push((t[start], t[i]));
        }
        i += 1;
    }
    Ok(set)
}

/// `mu = sum_j alpha_j f(s_j) delta_{s_j}` for points `s_j` in `M(f)`.
pub fn atomic_duality_measure(f: &PwlFunction, points: &[f64], alphas: &[f64]) -> Result<RcaMeasure> {
    let m = maximizing_set(f)?;
    if points.is_empty() || points.len() != alphas.len() {
        return Err(Error::Invalid(format!(
            "need one alpha per point, got {} points and {} alphas",
            points.len(),
            alphas.len()
        )));
    }
    if alphas.iter().any(|&a| !(a.is_finite() && a > 0.0)) {
        return Err(Error::Invalid("alphas must be positive".into()));
    }
    let sum: f64 = alphas.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::Invalid(format!("alphas sum to {sum}, not 1")));
    }
    if let Some(&s) = points.iter().find(|&&s| !m.contains(s)) {
        return Err(Error::Constraint(format!("point {s} is not in M(f)")));
    }
    RcaMeasure::atomic(points.iter().zip(alphas).map(|(&s, &a)| (s, a * f.eval(s))).collect())
}

/// Uniform density `||f|| / (b - a)` on a plateau `[a, b]` where `f = ||f||`.
pub fn plateau_duality_measure(f: &PwlFunction, a: f64, b: f64) -> Result<RcaMeasure> {
    if !(a < b) || a < 0.0 || b > 1.0 {
        return Err(Error::Invalid(format!("plateau needs 0 <= a < b <= 1, got [{a}, {b}]")));
    }
    let norm = f.sup_norm();
    if norm == 0.0 {
        return Err(Error::Degenerate("plateau of the zero function".into()));
    }
    let on_plateau = |s: f64| (f.eval(s) - norm).abs() <= MAX_TOL * norm.max(1.0);
    let inner = f.breakpoints().iter().copied().filter(|&s| s > a && s < b);
    if !std::iter::once(a).chain(inner).chain(std::iter::once(b)).all(on_plateau) {
        return Err(Error::Constraint(format!("f is not constant at ||f|| on [{a}, {b}]")));
    }
    Ok(RcaMeasure::with_density(StepDensity::uniform(a, b, norm / (b - a))?))
}

/// Atomic member of `J(f)` with equal weights on one point per component
/// of `M(f)`; `theta*` for `f = theta`.
pub fn canonical_duality_measure(f: &PwlFunction) -> Result<RcaMeasure> {
    if f.is_zero() {
        return Ok(RcaMeasure::zero());
    }
    let pts = maximizing_set(f)?.representatives();
    let alpha = vec![1.0 / pts.len() as f64; pts.len()];
    atomic_duality_measure(f, &pts, &alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub member: bool,
    pub support_ok: bool,
}

/// Checks `||mu|| = ||f||` and `<mu, f> = ||f||^2`; separately reports
/// whether the support of `mu` lies in `M(f)`. For `f = theta` only
/// `mu = theta*` qualifies.
pub fn is_duality_member_c(mu: &RcaMeasure, f: &PwlFunction, tol: f64) -> MembershipReport {
    let norm = f.sup_norm();
    let tv = tv_norm(mu);
    if norm == 0.0 {
        return MembershipReport {
            member: tv <= tol,
            support_ok: mu.is_zero(),
        };
    }
    let member = (tv - norm).abs() <= tol && (pairing_c(mu, f) - norm * norm).abs() <= tol;
    let support_ok = match maximizing_set(f) {
        Ok(m) => {
            mu.atoms().iter().all(|&(s, w)| w == 0.0 || m.contains(s))
                && mu
                    .density()
                    .pieces()
                    .all(|(a, b, v)| v == 0.0 || m.covers(a, b))
        }
        Err(_) => false,
    };
    MembershipReport { member, support_ok }
}

/// An element of `C+[0,1]` acting on `rca[0,1]` through `gamma -> <gamma, f>`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SecondDualHandle {
    f: PwlFunction,
}

impl SecondDualHandle {
    pub fn apply(&self, gamma: &RcaMeasure) -> f64 {
        pairing_c(gamma, &self.f)
    }

    pub fn function(&self) -> &PwlFunction {
        &self.f
    }
}

/// Embeds a nonnegative `f`; nonnegativity at breakpoints is exact for a
/// piecewise-linear function.
pub fn embed_second_dual_c(f: &PwlFunction) -> Result<SecondDualHandle> {
    if f.min_value() < 0.0 {
        return Err(Error::NotPositive(format!(
            "f takes the value {} < 0",
            f.min_value()
        )));
    }
    Ok(SecondDualHandle { f: f.clone() })
}

/// The `C[0,1]` backend. Stateless.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct C01Space;

impl DualitySpace for C01Space {
    type Point = PwlFunction;
    type Dual = RcaMeasure;

    fn norm(&self, x: &PwlFunction) -> Result<f64> {
        Ok(x.sup_norm())
    }

    fn dual_norm(&self, d: &RcaMeasure) -> Result<f64> {
        Ok(tv_norm(d))
    }

    fn pairing(&self, d: &RcaMeasure, x: &PwlFunction) -> Result<f64> {
        Ok(pairing_c(d, x))
    }

    fn point_diff(&self, a: &PwlFunction, b: &PwlFunction) -> Result<PwlFunction> {
        Ok(a.sub(b))
    }

    fn dual_diff(&self, a: &RcaMeasure, b: &RcaMeasure) -> Result<RcaMeasure> {
        Ok(a.sub(b))
    }

    fn is_member(&self, d: &RcaMeasure, x: &PwlFunction, tol: f64) -> Result<bool> {
        Ok(is_duality_member_c(d, x, tol).member)
    }

    fn check_embeddable(&self, x: &PwlFunction) -> Result<()> {
        embed_second_dual_c(x).map(|_| ())
    }

    fn descriptor(&self) -> serde_json::Value {
        serde_json::json!({ "space": "c01" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tent() -> PwlFunction {
        PwlFunction::tent(0.5, 1.0).unwrap()
    }

    #[test]
    fn maximizing_set_examples() {
        let m = maximizing_set(&tent()).unwrap();
        assert_eq!(m.atoms, vec![0.5]);
        assert!(m.intervals.is_empty());

        let m = maximizing_set(&PwlFunction::constant(1.0)).unwrap();
        assert!(m.atoms.is_empty());
        assert_eq!(m.intervals, vec![(0.0, 1.0)]);

        let m = maximizing_set(&PwlFunction::linear(1.0, -1.0)).unwrap();
        assert_eq!(m.atoms, vec![0.0, 1.0]);
        assert!(m.intervals.is_empty());

        assert!(matches!(
            maximizing_set(&PwlFunction::constant(0.0)),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn mixed_plateau_and_peak() {
        let f = PwlFunction::new(vec![0.0, 0.2, 0.4, 0.7, 1.0], vec![-2.0, 2.0, 2.0, 0.0, -2.0]).unwrap();
        let m = maximizing_set(&f).unwrap();
        assert_eq!(m.atoms, vec![0.0, 1.0]);
        assert_eq!(m.intervals, vec![(0.2, 0.4)]);
        assert_eq!(m.representatives(), vec![0.0, 0.2, 1.0]);
        assert!(m.contains(0.3) && !m.contains(0.5));
    }

    #[test]
    fn atomic_measure_examples() {
        let mu = atomic_duality_measure(&tent(), &[0.5], &[1.0]).unwrap();
        assert_eq!(mu.atoms(), &[(0.5, 1.0)]);
        assert_eq!(
            is_duality_member_c(&mu, &tent(), 1e-12),
            MembershipReport {
                member: true,
                support_ok: true
            }
        );

        let f = PwlFunction::linear(1.0, -1.0);
        let mu = atomic_duality_measure(&f, &[0.0, 1.0], &[0.5, 0.5]).unwrap();
        assert_eq!(mu.atoms(), &[(0.0, 0.5), (1.0, -0.5)]);
        assert_eq!(pairing_c(&mu, &f), 1.0);

        assert!(atomic_duality_measure(&tent(), &[0.25], &[1.0]).is_err());
        assert!(atomic_duality_measure(&tent(), &[0.5], &[0.7]).is_err());
    }

    #[test]
    fn plateau_measure_examples() {
        let one = PwlFunction::constant(1.0);
        let mu = plateau_duality_measure(&one, 0.0, 1.0).unwrap();
        assert_eq!(mu.density().values(), &[1.0]);
        assert!(is_duality_member_c(&mu, &one, 1e-12).member);

        let f = PwlFunction::new(vec![0.0, 0.25, 0.75, 1.0], vec![0.0, 2.0, 2.0, 0.0]).unwrap();
        let mu = plateau_duality_measure(&f, 0.25, 0.75).unwrap();
        assert_eq!(mu.density().values(), &[4.0]);
        assert!((pairing_c(&mu, &f) - 4.0).abs() < 1e-12);
        let r = is_duality_member_c(&mu, &f, 1e-12);
        assert!(r.member && r.support_ok);

        assert!(plateau_duality_measure(&tent(), 0.4, 0.6).is_err());
    }

    #[test]
    fn non_member() {
        let mu = RcaMeasure::atomic(vec![(0.25, 1.0)]).unwrap();
        assert_eq!(
            is_duality_member_c(&mu, &tent(), 1e-9),
            MembershipReport {
                member: false,
                support_ok: false
            }
        );
    }

    #[test]
    fn canonical_measure_is_member() {
        let f = PwlFunction::new(vec![0.0, 0.2, 0.4, 0.7, 1.0], vec![-2.0, 2.0, 2.0, 0.0, -2.0]).unwrap();
        let mu = canonical_duality_measure(&f).unwrap();
        let r = is_duality_member_c(&mu, &f, 1e-12);
        assert!(r.member && r.support_ok);
        assert!(canonical_duality_measure(&PwlFunction::constant(0.0)).unwrap().is_zero());
    }

    #[test]
    fn second_dual_embedding() {
        assert!(embed_second_dual_c(&PwlFunction::linear(-0.1, 1.0)).is_err());
        let h = embed_second_dual_c(&tent()).unwrap();
        assert_eq!(h.apply(&RcaMeasure::atomic(vec![(0.5, 2.0)]).unwrap()), 2.0);
    }
}
