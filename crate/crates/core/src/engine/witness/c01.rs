use super::{sign, Witness, UNIT_T_MAX};
use crate::c01::{
    canonical_duality_measure, is_duality_member_c, maximizing_set, pairing_c, C01Space,
    PwlFunction, RcaMeasure, MAX_TOL,
};
use crate::engine::certificate::Claim;
use crate::engine::limit::ProbeCurve;
use crate::engine::quotient::{CoderivativeQuery, GraphPair, SecondDualArg};
use crate::engine::Tolerances;
use crate::error::{Error, Result};

fn require_positive_cone(f: &PwlFunction, name: &str) -> Result<()> {
    if f.min_value() < 0.0 {
        return Err(Error::Hypothesis(format!("{name} ∈ C+[0,1] (min {name} = {})", f.min_value())));
    }
    if f.is_zero() {
        return Err(Error::Hypothesis(format!("{name} ≠ θ")));
    }
    Ok(())
}

/// The given `mu` after checking `mu ∈ J(f)`, or the canonical atomic member.
fn dual_of(f: &PwlFunction, mu: Option<RcaMeasure>, tol: &Tolerances) -> Result<RcaMeasure> {
    match mu {
        None => canonical_duality_measure(f),
        Some(mu) => {
            let scale = 1.0 + f.sup_norm().powi(2);
            if is_duality_member_c(&mu, f, tol.membership_tol * scale).member {
                Ok(mu)
            } else {
                Err(Error::Hypothesis("μ ∈ J(f)".into()))
            }
        }
    }
}

fn scaling_curve(f: PwlFunction, mu: RcaMeasure, sigma: f64) -> ProbeCurve<C01Space> {
    let id = if sigma < 0.0 { "(1-t)f" } else { "(1+t)f" };
    ProbeCurve::new(id, UNIT_T_MAX, move |t| {
        let c = 1.0 + sigma * t;
        Ok(GraphPair::new(f.scale(c), mu.scale(c)))
    })
}

/// `sum_j alpha_j (f(s_j) + shift) delta_{s_j}`.
fn shifted_atoms(f: &PwlFunction, points: &[f64], alphas: &[f64], shift: f64) -> Result<RcaMeasure> {
    RcaMeasure::atomic(
        points
            .iter()
            .zip(alphas)
            .map(|(&s, &a)| (s, a * (f.eval(s) + shift)))
            .collect(),
    )
}

fn uniform_alphas(n: usize) -> Vec<f64> {
    vec![1.0 / n as f64; n]
}

/// `theta*` is not in `D*J(f, mu)(f**)` for `f ∈ C+[0,1] \ {θ}`.
pub fn thm53(f: PwlFunction, mu: Option<RcaMeasure>, tol: &Tolerances) -> Result<Witness<C01Space>> {
    require_positive_cone(&f, "f")?;
    let mu = dual_of(&f, mu, tol)?;
    let claim = Claim::closed_form(f.sup_norm() / 2.0);
    let base = GraphPair::new(f.clone(), mu.clone());
    let query = CoderivativeQuery::new(
        &C01Space,
        base,
        SecondDualArg::Embedded(f.clone()),
        RcaMeasure::zero(),
        tol.membership_tol,
    )?;
    Ok(Witness {
        query,
        curve: scaling_curve(f, mu, -1.0),
        claim,
    })
}

/// `lambda` with `<lambda, f> != 0` is not in `D*J(f, mu)(theta**)`.
pub fn thm54(
    f: PwlFunction,
    lambda: RcaMeasure,
    mu: Option<RcaMeasure>,
    tol: &Tolerances,
) -> Result<Witness<C01Space>> {
    let s = pairing_c(&lambda, &f);
    if s == 0.0 {
        return Err(Error::Hypothesis("<λ, f> ≠ 0".into()));
    }
    let mu = dual_of(&f, mu, tol)?;
    let claim = Claim::closed_form(s.abs() / (2.0 * f.sup_norm()));
    let base = GraphPair::new(f.clone(), mu.clone());
    let query = CoderivativeQuery::new(&C01Space, base, SecondDualArg::Zero, lambda, tol.membership_tol)?;
    Ok(Witness {
        query,
        curve: scaling_curve(f, mu, sign(s)),
        claim,
    })
}

/// Which branch of the constant-shift construction applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftCase {
    /// `f = θ`: a single atom at `1/2`.
    Zero,
    /// `f` attains `sigma ||f||`; the shift raises `|f|` at those points.
    Peak,
    /// `f` attains only `-sigma ||f||`; the shift lowers `|f|` there, valid
    /// while `t` stays below half the gap to the next largest value.
    Trough,
}

/// `lambda` with `lambda[0,1] != 0` is not in `D*J(f, mu)(theta**)`, where
/// `mu` is the uniform atomic member on the points the construction uses.
/// The curve is `f + sigma t` with `sigma` the sign of `lambda[0,1]`.
pub fn thm55(f: PwlFunction, lambda: RcaMeasure, tol: &Tolerances) -> Result<(Witness<C01Space>, ShiftCase)> {
    let mass = lambda.total_mass();
    if mass == 0.0 {
        return Err(Error::Hypothesis("λ[0,1] ≠ 0".into()));
    }
    let sigma = sign(mass);
    let norm = f.sup_norm();
    let (case, points, t_max) = if norm == 0.0 {
        (ShiftCase::Zero, vec![0.5], UNIT_T_MAX)
    } else {
        let reps = maximizing_set(&f)?.representatives();
        let peaks: Vec<f64> = reps.iter().copied().filter(|&s| sigma * f.eval(s) > 0.0).collect();
        if !peaks.is_empty() {
            (ShiftCase::Peak, peaks, UNIT_T_MAX)
        } else {
            let a = f
                .values()
                .iter()
                .map(|&v| sigma * v)
                .fold(f64::NEG_INFINITY, f64::max);
            let window = 0.5 * (norm - a);
            (ShiftCase::Trough, reps, window / 2.0)
        }
    };
    let alphas = uniform_alphas(points.len());
    let mu = if case == ShiftCase::Zero {
        RcaMeasure::zero()
    } else {
        shifted_atoms(&f, &points, &alphas, 0.0)?
    };
    let claim = Claim::closed_form(mass.abs() / 2.0);
    let base = GraphPair::new(f.clone(), mu);
    let query = CoderivativeQuery::new(&C01Space, base, SecondDualArg::Zero, lambda, tol.membership_tol)?;
    let id = if sigma < 0.0 { "f - t" } else { "f + t" };
    let curve = ProbeCurve::new(id, t_max, move |t| {
        let shift = sigma * t;
        Ok(GraphPair::new(f.shift(shift), shifted_atoms(&f, &points, &alphas, shift)?))
    });
    Ok((Witness { query, curve, claim }, case))
}

fn attains_max(g: &PwlFunction, s: f64) -> bool {
    let n = g.sup_norm();
    (g.eval(s) - n).abs() <= MAX_TOL * n.max(1.0)
}

/// Points where `f = ||f||` and `u = ||u||` simultaneously. Two plateaus
/// overlap on an interval whose ends are breakpoints of `f` or `u`, so the
/// union of both grids covers every component.
pub fn shared_maximizers(f: &PwlFunction, u: &PwlFunction) -> Vec<f64> {
    let mut grid: Vec<f64> = f.breakpoints().iter().chain(u.breakpoints()).copied().collect();
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    grid.dedup();
    grid.into_iter()
        .filter(|&s| attains_max(f, s) && attains_max(u, s))
        .collect()
}

/// For `f, u ∈ C+[0,1]` with `||u|| > ||f||` sharing maximizers `s_j`,
/// `lambda = sum alpha_j u(s_j) delta_{s_j}` is not in `D*J(f, mu)(f**)`
/// with `mu = sum alpha_j f(s_j) delta_{s_j}`. The curve is `f + t`.
pub fn thm56(
    f: PwlFunction,
    u: PwlFunction,
    points: Option<Vec<f64>>,
    alphas: Option<Vec<f64>>,
    tol: &Tolerances,
) -> Result<Witness<C01Space>> {
    require_positive_cone(&f, "f")?;
    require_positive_cone(&u, "u")?;
    if u.sup_norm() <= f.sup_norm() {
        return Err(Error::Hypothesis("‖u‖ > ‖f‖".into()));
    }
    let points = points.unwrap_or_else(|| shared_maximizers(&f, &u));
    if points.is_empty() {
        return Err(Error::Hypothesis("M(u) ∩ M(f) ≠ ∅".into()));
    }
    if let Some(s) = points.iter().find(|&&s| !(attains_max(&f, s) && attains_max(&u, s))) {
        return Err(Error::Hypothesis(format!("f(s) = ‖f‖ and u(s) = ‖u‖ at s = {s}")));
    }
    let alphas = alphas.unwrap_or_else(|| uniform_alphas(points.len()));
    let lambda = crate::c01::atomic_duality_measure(&u, &points, &alphas)?;
    let mu = crate::c01::atomic_duality_measure(&f, &points, &alphas)?;
    let claim = Claim::closed_form((u.sup_norm() - f.sup_norm()) / 2.0);
    let base = GraphPair::new(f.clone(), mu);
    let query = CoderivativeQuery::new(
        &C01Space,
        base,
        SecondDualArg::Embedded(f.clone()),
        lambda,
        tol.membership_tol,
    )?;
    let curve = ProbeCurve::new("f + t", UNIT_T_MAX, move |t| {
        Ok(GraphPair::new(f.shift(t), shifted_atoms(&f, &points, &alphas, t)?))
    });
    Ok(Witness { query, curve, claim })
}

fn nondecreasing(g: &PwlFunction) -> bool {
    g.values().windows(2).all(|w| w[1] >= w[0])
}

/// The endpoint instance of [`thm56`]: nondecreasing `f, u` with
/// `u(1) > f(1) > 0` share the maximizer `1`.
pub fn cor57(f: PwlFunction, u: PwlFunction, tol: &Tolerances) -> Result<Witness<C01Space>> {
    if !(nondecreasing(&f) && nondecreasing(&u)) {
        return Err(Error::Hypothesis("f and u nondecreasing".into()));
    }
    let (f1, u1) = (f.eval(1.0), u.eval(1.0));
    if !(u1 > f1 && f1 > 0.0) {
        return Err(Error::Hypothesis(format!("u(1) > f(1) > 0 (u(1) = {u1}, f(1) = {f1})")));
    }
    thm56(f, u, Some(vec![1.0]), Some(vec![1.0]), tol)
}

/// `c mu` is not in `D*J(f, mu)(f**)` for `f ∈ C+[0,1] \ {θ}`, `c > 0`,
/// `c != 1`.
pub fn thm58(f: PwlFunction, c: f64, mu: Option<RcaMeasure>, tol: &Tolerances) -> Result<Witness<C01Space>> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::Hypothesis(format!("c > 0 (c = {c})")));
    }
    if c == 1.0 {
        return Err(Error::Hypothesis("c ≠ 1".into()));
    }
    require_positive_cone(&f, "f")?;
    let mu = dual_of(&f, mu, tol)?;
    let claim = Claim::closed_form((c - 1.0).abs() * f.sup_norm() / 2.0);
    let base = GraphPair::new(f.clone(), mu.clone());
    let query = CoderivativeQuery::new(
        &C01Space,
        base,
        SecondDualArg::Embedded(f.clone()),
        mu.scale(c),
        tol.membership_tol,
    )?;
    Ok(Witness {
        query,
        curve: scaling_curve(f, mu, sign(c - 1.0)),
        claim,
    })
}
