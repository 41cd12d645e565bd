use super::{sign, Witness, UNIT_T_MAX};
use crate::engine::certificate::Claim;
use crate::engine::limit::ProbeCurve;
use crate::engine::quotient::{CoderivativeQuery, GraphPair, SecondDualArg};
use crate::engine::Tolerances;
use crate::error::{check_dims, Error, Result};
use crate::l1::{
    canonical_selection, l1_norm, linf_norm, pairing_l1, FiniteMeasureSpace, L1Function,
    LinftySelection, SubsetMask,
};

type Space = FiniteMeasureSpace;

/// Relative size of `<k*, f>` still treated as zero.
pub const ORTHOGONALITY_TOL: f64 = 1e-9;

fn canonical_pair(space: &Space, f: L1Function) -> Result<GraphPair<Space>> {
    let dual = canonical_selection(space, &f)?;
    Ok(GraphPair::new(f, dual))
}

fn require_no_zeros(f: &L1Function) -> Result<()> {
    if let Some(i) = f.values().iter().position(|&v| v == 0.0) {
        return Err(Error::Hypothesis(format!("mu{{f = 0}} = 0 (f[{i}] = 0)")));
    }
    Ok(())
}

fn require_mask(space: &Space, d: &SubsetMask, name: &str) -> Result<f64> {
    d.check(space.point_count())?;
    if d.is_empty() {
        return Err(Error::Hypothesis(format!("{name} nonempty")));
    }
    space.measure(d)
}

/// The common sign of `values` on `d`, or an error naming `what`.
fn sign_on(values: &[f64], d: &SubsetMask, what: &str) -> Result<f64> {
    let first = values[d.indices()[0]];
    let ok = d
        .indices()
        .iter()
        .all(|&i| values[i] != 0.0 && sign(values[i]) == sign(first));
    if ok {
        Ok(sign(first))
    } else {
        Err(Error::Hypothesis(format!("{what} has one strict sign on D")))
    }
}

fn chi(space: &Space, d: &SubsetMask) -> Result<L1Function> {
    space.indicator(d)
}

/// `k*` with `<k*, f> != 0` is not in `D*J(f, f*)(theta**)` when `f` has no
/// zeros: scale `f` and its unique dual together.
pub fn thm45_case1(space: Space, f: L1Function, k: LinftySelection, tol: &Tolerances) -> Result<Witness<Space>> {
    require_no_zeros(&f)?;
    let s = pairing_l1(&space, &k, &f)?;
    if s == 0.0 {
        return Err(Error::Hypothesis("<k*, f> ≠ 0".into()));
    }
    let claim = Claim::closed_form(s.abs() / (2.0 * l1_norm(&space, &f)?));
    let sigma = sign(s);
    let base = canonical_pair(&space, f)?;
    let (f, fs) = (base.point.clone(), base.dual.clone());
    let query = CoderivativeQuery::new(&space, base, SecondDualArg::Zero, k, tol.membership_tol)?;
    let id = if sigma < 0.0 { "(1-t)f" } else { "(1+t)f" };
    let curve = ProbeCurve::new(id, UNIT_T_MAX, move |t| {
        let c = 1.0 + sigma * t;
        Ok(GraphPair::new(f.scale(c), fs.scale(c)))
    });
    Ok(Witness { query, curve, claim })
}

/// `k*` with `<k*, f> = 0`, `k* != theta*` is not in `D*J(f, f*)(theta**)`
/// when `f` has no zeros. `D` must sit inside one sign set of `f` and one
/// strict sign set of `k*`; the curve moves `f` on `D` in the direction of
/// `k*`. When that direction shrinks `|f|`, the curve lives on `0 < t < a`
/// with `a < min_D |f|` (default half of it).
pub fn thm45_case2(
    space: Space,
    f: L1Function,
    k: LinftySelection,
    d: SubsetMask,
    a: Option<f64>,
    tol: &Tolerances,
) -> Result<Witness<Space>> {
    require_no_zeros(&f)?;
    check_dims(k.len(), f.len())?;
    let mu_d = require_mask(&space, &d, "D")?;
    let kf = pairing_l1(&space, &k, &f)?;
    let scale = linf_norm(&k) * l1_norm(&space, &f)?;
    if kf.abs() > ORTHOGONALITY_TOL * scale {
        return Err(Error::Hypothesis(format!("<k*, f> = 0 (got {kf})")));
    }
    let s_f = sign_on(f.values(), &d, "f")?;
    let s_k = sign_on(k.values(), &d, "k*")?;
    let chi_d = chi(&space, &d)?;
    let k_chi = pairing_l1(&space, &k, &chi_d)?;
    let claim = Claim::closed_form(k_chi.abs() / (2.0 * mu_d));

    let min_abs = d
        .indices()
        .iter()
        .map(|&i| f.values()[i].abs())
        .fold(f64::INFINITY, f64::min);
    let t_max = if s_f * s_k < 0.0 {
        let a = a.unwrap_or(min_abs / 2.0);
        if !(a > 0.0 && a < min_abs) {
            return Err(Error::Hypothesis(format!(
                "D inside {{|f| > a > 0}} (a = {a}, min_D |f| = {min_abs})"
            )));
        }
        a / 2.0
    } else {
        UNIT_T_MAX
    };

    let base = canonical_pair(&space, f)?;
    let f = base.point.clone();
    let query = CoderivativeQuery::new(&space, base, SecondDualArg::Zero, k, tol.membership_tol)?;
    let step = chi_d.scale(s_k);
    let id = if s_k < 0.0 { "f - t*chi_D" } else { "f + t*chi_D" };
    let curve_space = space.clone();
    let curve = ProbeCurve::new(id, t_max, move |t| {
        canonical_pair(&curve_space, f.add(&step.scale(t))?)
    });
    Ok(Witness { query, curve, claim })
}

/// `k* != theta*` is not in `D*J(theta, theta*)(theta**)`: move away from
/// `theta` along `sigma t chi_D`, `sigma` the sign of `k*` on `D`, with the
/// dual `sigma t mu(D)` on `D` and `-sigma t mu(D)` off `D`.
pub fn thm46(space: Space, k: LinftySelection, d: SubsetMask, tol: &Tolerances) -> Result<Witness<Space>> {
    check_dims(k.len(), space.point_count())?;
    if k.is_zero() {
        return Err(Error::Hypothesis("k* ≠ θ*".into()));
    }
    let mu_d = require_mask(&space, &d, "D")?;
    let sigma = sign_on(k.values(), &d, "k*")?;
    let chi_d = chi(&space, &d)?;
    let claim = Claim::closed_form(pairing_l1(&space, &k, &chi_d)?.abs() / (2.0 * mu_d));
    let n = space.point_count();
    let base = GraphPair::new(L1Function::zeros(n), LinftySelection::zeros(n));
    let query = CoderivativeQuery::new(&space, base, SecondDualArg::Zero, k, tol.membership_tol)?;
    let pattern: Vec<f64> = (0..n)
        .map(|i| if d.contains(i) { sigma * mu_d } else { -sigma * mu_d })
        .collect();
    let pattern = space.selection(pattern)?;
    let step = chi_d.scale(sigma);
    let id = if sigma < 0.0 { "-t*chi_D" } else { "t*chi_D" };
    let curve = ProbeCurve::new(id, UNIT_T_MAX, move |t| {
        Ok(GraphPair::new(step.scale(t), pattern.scale(t)))
    });
    Ok(Witness { query, curve, claim })
}

fn require_nonnegative(f: &L1Function, name: &str) -> Result<()> {
    if let Some(i) = f.values().iter().position(|&v| v < 0.0) {
        return Err(Error::Hypothesis(format!("{name} >= 0 ({name}[{i}] < 0)")));
    }
    Ok(())
}

/// `||g||_1` on `{f > 0}` and `0` elsewhere.
fn positive_part_selection(space: &Space, f: &L1Function, g: &L1Function) -> Result<LinftySelection> {
    let n = l1_norm(space, g)?;
    space.selection(f.values().iter().map(|&v| if v > 0.0 { n } else { 0.0 }).collect())
}

/// For `f >= 0`, `f != theta`, `-f*` is not in `D*J(f, f*)(f**)` where `f*`
/// is `||f||_1` on `{f > 0}` and `0` elsewhere. The curve lowers `f` on a
/// set `D` inside `{f > a}` for `0 < t < a`.
pub fn thm47(
    space: Space,
    f: L1Function,
    d: SubsetMask,
    a: Option<f64>,
    tol: &Tolerances,
) -> Result<Witness<Space>> {
    check_dims(f.len(), space.point_count())?;
    require_nonnegative(&f, "f")?;
    if f.is_zero() {
        return Err(Error::Hypothesis("f ≠ θ".into()));
    }
    require_mask(&space, &d, "D")?;
    let min_d = d
        .indices()
        .iter()
        .map(|&i| f.values()[i])
        .fold(f64::INFINITY, f64::min);
    let a = a.unwrap_or(min_d / 2.0);
    if !(a > 0.0 && a < min_d) {
        return Err(Error::Hypothesis(format!("D inside {{f > a > 0}} (a = {a}, min_D f = {min_d})")));
    }
    let claim = Claim::closed_form(l1_norm(&space, &f)?);
    let fs = positive_part_selection(&space, &f, &f)?;
    let base = GraphPair::new(f.clone(), fs.clone());
    let query = CoderivativeQuery::new(
        &space,
        base,
        SecondDualArg::Embedded(f.clone()),
        fs.scale(-1.0),
        tol.membership_tol,
    )?;
    let chi_d = chi(&space, &d)?;
    let curve_space = space.clone();
    let curve = ProbeCurve::new("f - t*chi_D", a / 2.0, move |t| {
        let h = f.sub(&chi_d.scale(t))?;
        let hs = positive_part_selection(&curve_space, &f, &h)?;
        Ok(GraphPair::new(h, hs))
    });
    Ok(Witness { query, curve, claim })
}

/// For `f > 0` and `u* > J(f) = ||f||_1` everywhere, `u*` is not in
/// `D*J(f, J(f))(f**)`. Raising `f` on `E` gives a limit of at least half
/// the smallest margin `b = min_E (u* - ||f||_1)`.
pub fn cor48(
    space: Space,
    f: L1Function,
    u: LinftySelection,
    e: SubsetMask,
    tol: &Tolerances,
) -> Result<Witness<Space>> {
    check_dims(f.len(), space.point_count())?;
    check_dims(u.len(), space.point_count())?;
    if let Some(i) = f.values().iter().position(|&v| v <= 0.0) {
        return Err(Error::Hypothesis(format!("f > 0 everywhere (f[{i}] <= 0)")));
    }
    let nf = l1_norm(&space, &f)?;
    if let Some(i) = u.values().iter().position(|&v| v <= nf) {
        return Err(Error::Hypothesis(format!("u* > J(f) = ||f||_1 everywhere (u*[{i}] <= {nf})")));
    }
    require_mask(&space, &e, "E")?;
    let b = e
        .indices()
        .iter()
        .map(|&i| u.values()[i] - nf)
        .fold(f64::INFINITY, f64::min);
    let claim = Claim::lower_bound(b / 2.0);
    let base = canonical_pair(&space, f.clone())?;
    let query = CoderivativeQuery::new(&space, base, SecondDualArg::Embedded(f.clone()), u, tol.membership_tol)?;
    let chi_e = chi(&space, &e)?;
    let curve_space = space.clone();
    let curve = ProbeCurve::new("f + t*chi_E", UNIT_T_MAX, move |t| {
        canonical_pair(&curve_space, f.add(&chi_e.scale(t))?)
    });
    Ok(Witness { query, curve, claim })
}
