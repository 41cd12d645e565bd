use super::{sign, Witness, UNIT_T_MAX};
use crate::engine::certificate::Claim;
use crate::engine::limit::ProbeCurve;
use crate::engine::quotient::{CoderivativeQuery, GraphPair, SecondDualArg};
use crate::engine::Tolerances;
use crate::error::{check_dims, Error, Result};
use crate::lp::{lp_norm, pairing, LpSpace, LpVector};

fn pair(space: LpSpace, z: LpVector) -> GraphPair<LpSpace> {
    let dual = space.duality_map(&z);
    GraphPair::new(z, dual)
}

fn base(space: LpSpace, x: &LpVector) -> GraphPair<LpSpace> {
    pair(space, x.clone())
}

/// Coordinate used by the basis-direction curve: the requested one, or a
/// coordinate with `w_m != 0`, preferring `x_m != 0`, then the largest
/// `|w_m|`. Below `p = 2` the map `J` is not Lipschitz near a zero
/// coordinate of `x`, and the quotient along such a direction tends to `0`.
pub fn thm31_direction(x: &LpVector, w: &LpVector, m: Option<usize>) -> Result<usize> {
    check_dims(x.dim(), w.dim())?;
    if let Some(m) = m {
        if m >= w.dim() {
            return Err(Error::Invalid(format!("coordinate {m} out of range")));
        }
        if w.coords()[m] == 0.0 {
            return Err(Error::Hypothesis(format!("w_m ≠ 0 (w_{m} = 0)")));
        }
        return Ok(m);
    }
    let key = |i: usize| (x.coords()[i] != 0.0, w.coords()[i].abs());
    (0..w.dim())
        .filter(|&i| w.coords()[i] != 0.0)
        .max_by(|&i, &j| key(i).partial_cmp(&key(j)).expect("finite"))
        .ok_or_else(|| Error::Hypothesis("w ≠ θ (some w_m ≠ 0)".into()))
}

/// Any `w != theta` fails to be in `D*J(x, J(x))(theta**)`: move `x` along
/// `sign(w_m) e_m`. The limit is `|w_m| / 2` when `x = theta` or `p = 2`;
/// otherwise only positivity is claimed.
pub fn thm31(
    space: LpSpace,
    x: LpVector,
    w: LpVector,
    m: Option<usize>,
    tol: &Tolerances,
) -> Result<Witness<LpSpace>> {
    let m = thm31_direction(&x, &w, m)?;
    let wm = w.coords()[m];
    let claim = if x.is_zero() || space.p.get() == 2.0 {
        Claim::closed_form(wm.abs() / 2.0)
    } else {
        Claim::positive()
    };
    let step = LpVector::basis(x.dim(), m).scale(sign(wm));
    let query = CoderivativeQuery::new(&space, base(space, &x), SecondDualArg::Zero, w, tol.membership_tol)?;
    let curve = ProbeCurve::new(format!("x + t*sign(w_m)*e_{m}"), UNIT_T_MAX, move |t| {
        Ok(pair(space, x.add(&step.scale(t))?))
    });
    Ok(Witness { query, curve, claim })
}

/// `theta` is not in `D*J(x, J(x))(y)` when `<J(x), y> != 0`; scale `x` by
/// `1 - t` or `1 + t` according to the sign.
pub fn thm32(space: LpSpace, x: LpVector, y: LpVector, tol: &Tolerances) -> Result<Witness<LpSpace>> {
    check_dims(x.dim(), y.dim())?;
    let jx = space.duality_map(&x);
    let s = pairing(&jx, &y)?;
    if s == 0.0 {
        return Err(Error::Hypothesis("<J(x), y> ≠ 0".into()));
    }
    let nx = lp_norm(&x, space.p);
    let claim = Claim::closed_form(s.abs() / (2.0 * nx));
    let sigma = -sign(s);
    let query = CoderivativeQuery::new(
        &space,
        base(space, &x),
        SecondDualArg::Embedded(y),
        LpVector::zeros(x.dim()),
        tol.membership_tol,
    )?;
    let id = if sigma < 0.0 { "(1-t)x" } else { "(1+t)x" };
    let curve = ProbeCurve::new(id, UNIT_T_MAX, move |t| Ok(pair(space, x.scale(1.0 + sigma * t))));
    Ok(Witness { query, curve, claim })
}

/// `a J(x)` is not in `D*J(x, J(x))(x)` for `x != theta`, `a > 0`, `a != 1`.
pub fn thm33(space: LpSpace, x: LpVector, a: f64, tol: &Tolerances) -> Result<Witness<LpSpace>> {
    if x.is_zero() {
        return Err(Error::Hypothesis("x ≠ θ".into()));
    }
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::Hypothesis(format!("a > 0 (a = {a})")));
    }
    if a == 1.0 {
        return Err(Error::Hypothesis("a ≠ 1".into()));
    }
    let nx = lp_norm(&x, space.p);
    let claim = Claim::closed_form((a - 1.0).abs() * nx / 2.0);
    let sigma = sign(a - 1.0);
    let candidate = space.duality_map(&x).scale(a);
    let query = CoderivativeQuery::new(
        &space,
        base(space, &x),
        SecondDualArg::Embedded(x.clone()),
        candidate,
        tol.membership_tol,
    )?;
    let id = if sigma < 0.0 { "(1-t)x" } else { "(1+t)x" };
    let curve = ProbeCurve::new(id, UNIT_T_MAX, move |t| Ok(pair(space, x.scale(1.0 + sigma * t))));
    Ok(Witness { query, curve, claim })
}
