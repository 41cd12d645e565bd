use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::draws::{random_coords, random_pwl, random_pwl_with_plateau, random_sparse};
use super::oracle::{brute_force_duality_l1, gradient_oracle_lp};
use crate::c01::{
    atomic_duality_measure, canonical_duality_measure, is_duality_member_c, maximizing_set,
    pairing_c, plateau_duality_measure, tv_norm, PwlFunction, RcaMeasure,
};
use crate::engine::scenario::SpaceDescriptor;
use crate::error::Result;
use crate::l1::{
    canonical_selection, duality_selection, l1_norm, linf_norm, pairing_l1,
    strict_convexity_counterexample, zero_set, FiniteMeasureSpace, L1Function, LinftySelection,
    SubsetMask,
};
use crate::lp::{dual_duality_map, duality_map, lp_norm, pairing, Exponent, LpVector};

/// Tolerance of the identities `(J2)`-`(J6)` and the backend checks.
pub const BATTERY_TOL: f64 = 1e-9;
/// Tolerance of the finite-difference gradient comparison.
pub const GRADIENT_TOL: f64 = 1e-5;
const GRADIENT_STEP: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyRecord {
    pub property: String,
    pub samples: usize,
    pub max_violation: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// `false` for properties that do not apply to the backend (for example
    /// `J2` outside Hilbert space); such records always pass.
    pub applicable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub space: SpaceDescriptor,
    pub seed: u64,
    pub samples: usize,
    pub records: Vec<PropertyRecord>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn record(&self, property: &str) -> Option<&PropertyRecord> {
        self.records.iter().find(|r| r.property == property)
    }
}

struct Tally {
    property: &'static str,
    tolerance: f64,
    samples: usize,
    worst: f64,
}

impl Tally {
    fn new(property: &'static str, tolerance: f64) -> Self {
        Tally {
            property,
            tolerance,
            samples: 0,
            worst: 0.0,
        }
    }

    fn push(&mut self, violation: f64) {
        self.samples += 1;
        // NaN must not hide behind max().
        self.worst = if violation.is_nan() { f64::INFINITY } else { self.worst.max(violation) };
    }

    fn finish(self) -> PropertyRecord {
        PropertyRecord {
            property: self.property.to_string(),
            samples: self.samples,
            max_violation: self.worst,
            tolerance: self.tolerance,
            pass: self.worst <= self.tolerance,
            applicable: true,
        }
    }
}

fn not_applicable(property: &str) -> PropertyRecord {
    PropertyRecord {
        property: property.to_string(),
        samples: 0,
        max_violation: 0.0,
        tolerance: BATTERY_TOL,
        pass: true,
        applicable: false,
    }
}

/// Defect of `d in J(x)`: the larger of `| ||d|| - ||x|| |` and
/// `| <d, x> - ||x||^2 |`.
fn defect(nd: f64, nx: f64, pair: f64) -> f64 {
    (nd - nx).abs().max((pair - nx * nx).abs())
}

fn nonzero_alpha<R: Rng>(rng: &mut R) -> f64 {
    loop {
        let a: f64 = rng.gen_range(-3.0..=3.0);
        if a.abs() > 1e-3 {
            return a;
        }
    }
}

/// Runs `(J1)`-`(J6)` plus backend-specific checks on `samples` random
/// instances drawn from a ChaCha8 stream seeded with `seed`. Set-valued
/// backends use the canonical selections for the monotonicity checks.
pub fn run_appendix_battery(space: &SpaceDescriptor, samples: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let records = match space {
        SpaceDescriptor::Lp { p } => lp_battery(Exponent::new(*p)?, samples, &mut rng)?,
        SpaceDescriptor::L1 { weights } => {
            l1_battery(&FiniteMeasureSpace::new(weights.clone())?, samples, &mut rng)?
        }
        SpaceDescriptor::C01 => c01_battery(samples, &mut rng)?,
    };
    let pass = records.iter().all(|r| r.pass);
    Ok(SuiteReport {
        space: space.clone(),
        seed,
        samples,
        records,
        pass,
    })
}

fn lp_battery(p: Exponent, samples: usize, rng: &mut ChaCha8Rng) -> Result<Vec<PropertyRecord>> {
    let q = p.conjugate();
    let mut j1 = Tally::new("J1", BATTERY_TOL);
    let mut j2 = Tally::new("J2", BATTERY_TOL);
    let mut j3 = Tally::new("J3", BATTERY_TOL);
    let mut j4 = Tally::new("J4", BATTERY_TOL);
    let mut j5 = Tally::new("J5", BATTERY_TOL);
    let mut j6 = Tally::new("J6", BATTERY_TOL);
    let mut grad = Tally::new("gradient_oracle", GRADIENT_TOL);
    let mut round = Tally::new("round_trip", BATTERY_TOL);

    for _ in 0..samples {
        let dim = rng.gen_range(1..=8);
        let x = LpVector::new(random_coords(rng, dim, 2.0, None))?;
        let y = LpVector::new(random_coords(rng, dim, 2.0, None))?;
        let (jx, jy) = (duality_map(&x, p), duality_map(&y, p));
        let (nx, ny) = (lp_norm(&x, p), lp_norm(&y, p));

        j1.push(defect(lp_norm(&jx, q), nx, pairing(&jx, &x)?));
        if p.get() == 2.0 {
            j2.push(jx.max_abs_diff(&x)?);
        }
        let zero = LpVector::zeros(dim);
        let theta_member = nx > 0.0 && defect(0.0, nx, 0.0) <= BATTERY_TOL;
        j3.push(lp_norm(&duality_map(&zero, p), q) + if theta_member { 1.0 } else { 0.0 });

        let alpha = nonzero_alpha(rng);
        let lhs = duality_map(&x.scale(alpha), p);
        j4.push(lhs.max_abs_diff(&jx.scale(alpha))? / (1.0 + alpha.abs() * nx));

        let mono = pairing(&jx.sub(&jy)?, &x.sub(&y)?)?;
        j5.push((-mono).max(0.0));
        let sub = 2.0 * pairing(&jy, &x.sub(&y)?)? - (nx * nx - ny * ny);
        j6.push(sub.max(0.0));

        let back = dual_duality_map(&jx, q);
        round.push(back.max_abs_diff(&x)? / (1.0 + nx));

        // Keep coordinates away from zero below p = 2, where the second
        // derivative blows up.
        let min_abs = if p.get() < 2.0 { Some(0.1) } else { None };
        let xg = LpVector::new(random_coords(rng, dim, 2.0, min_abs))?;
        let est = gradient_oracle_lp(&xg, p, GRADIENT_STEP)?;
        let jg = duality_map(&xg, p);
        let err = (0..dim)
            .filter(|i| !est.flagged.contains(i))
            .map(|i| (est.gradient[i] - jg.coords()[i]).abs())
            .fold(0.0, f64::max);
        grad.push(err);
    }
    let j2 = if p.get() == 2.0 { j2.finish() } else { not_applicable("J2") };
    Ok(vec![j1.finish(), j2, j3.finish(), j4.finish(), j5.finish(), j6.finish(), grad.finish(), round.finish()])
}

fn l1_member_defect(space: &FiniteMeasureSpace, g: &LinftySelection, f: &L1Function) -> Result<f64> {
    let nf = l1_norm(space, f)?;
    Ok(defect(linf_norm(g), nf, pairing_l1(space, g, f)?))
}

fn random_selection(
    space: &FiniteMeasureSpace,
    f: &L1Function,
    rng: &mut ChaCha8Rng,
) -> Result<LinftySelection> {
    let nf = l1_norm(space, f)?;
    if nf == 0.0 {
        return Ok(LinftySelection::zeros(f.len()));
    }
    let zeros = zero_set(f).indices().len();
    let a: Vec<f64> = (0..zeros).map(|_| rng.gen_range(-nf..=nf)).collect();
    duality_selection(space, f, &a)
}

fn l1_battery(space: &FiniteMeasureSpace, samples: usize, rng: &mut ChaCha8Rng) -> Result<Vec<PropertyRecord>> {
    let n = space.point_count();
    let mut j1 = Tally::new("J1", BATTERY_TOL);
    let mut j3 = Tally::new("J3", BATTERY_TOL);
    let mut j4 = Tally::new("J4", BATTERY_TOL);
    let mut j5 = Tally::new("J5", BATTERY_TOL);
    let mut j6 = Tally::new("J6", BATTERY_TOL);
    let mut template = Tally::new("template_oracle", 0.0);
    let mut flat = Tally::new("lemma43", BATTERY_TOL);

    for _ in 0..samples {
        let f = space.function(random_sparse(rng, n, 2.0, 0.3))?;
        let g = space.function(random_sparse(rng, n, 2.0, 0.3))?;
        let (nf, ng) = (l1_norm(space, &f)?, l1_norm(space, &g)?);

        let (s1, s2) = (random_selection(space, &f, rng)?, random_selection(space, &f, rng)?);
        let lam: f64 = rng.gen_range(0.0..=1.0);
        let mix = s1.scale(lam).add(&s2.scale(1.0 - lam))?;
        j1.push(l1_member_defect(space, &mix, &f)?);

        let zero = L1Function::zeros(n);
        let theta_member = nf > 0.0 && l1_member_defect(space, &LinftySelection::zeros(n), &f)? <= BATTERY_TOL;
        j3.push(linf_norm(&canonical_selection(space, &zero)?) + if theta_member { 1.0 } else { 0.0 });

        let alpha = nonzero_alpha(rng);
        let cf = canonical_selection(space, &f)?;
        let lhs = canonical_selection(space, &f.scale(alpha))?;
        j4.push(lhs.max_abs_diff(&cf.scale(alpha))? / (1.0 + alpha.abs() * nf));

        let cg = canonical_selection(space, &g)?;
        let mono = pairing_l1(space, &cf.sub(&cg)?, &f.sub(&g)?)?;
        j5.push((-mono).max(0.0));
        let sub = 2.0 * pairing_l1(space, &cg, &f.sub(&g)?)? - (nf * nf - ng * ng);
        j6.push(sub.max(0.0));

        if n <= 3 && nf > 0.0 {
            // Every grid member must have +-||f|| on the sign sets.
            let found = brute_force_duality_l1(space, &f, 11)?;
            let bad = found
                .iter()
                .filter(|s| {
                    f.values().iter().zip(s.values()).any(|(&fv, &sv)| {
                        (fv > 0.0 && sv != nf) || (fv < 0.0 && sv != -nf)
                    })
                })
                .count();
            let has_canonical = found.iter().any(|s| s.max_abs_diff(&cf).map_or(false, |d| d == 0.0));
            template.push(bad as f64 + if has_canonical { 0.0 } else { 1.0 });
        }

        if n >= 2 {
            let split = rng.gen_range(1..n);
            let a = SubsetMask::new((0..split).collect());
            let b = SubsetMask::new((split..n).collect());
            let seg = strict_convexity_counterexample(space, &a, &b)?;
            flat.push((seg.midpoint_norm - 1.0).abs());
        }
    }
    let template = if template.samples > 0 { template.finish() } else { not_applicable("template_oracle") };
    let flat = if flat.samples > 0 { flat.finish() } else { not_applicable("lemma43") };
    Ok(vec![j1.finish(), not_applicable("J2"), j3.finish(), j4.finish(), j5.finish(), j6.finish(), template, flat])
}

fn c01_member_defect(mu: &RcaMeasure, f: &PwlFunction) -> f64 {
    defect(tv_norm(mu), f.sup_norm(), pairing_c(mu, f))
}

fn random_alphas(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..=1.0)).collect();
    let s: f64 = raw.iter().sum();
    raw.iter().map(|a| a / s).collect()
}

fn c01_battery(samples: usize, rng: &mut ChaCha8Rng) -> Result<Vec<PropertyRecord>> {
    let mut j1 = Tally::new("J1", BATTERY_TOL);
    let mut j3 = Tally::new("J3", BATTERY_TOL);
    let mut j4 = Tally::new("J4", BATTERY_TOL);
    let mut j5 = Tally::new("J5", BATTERY_TOL);
    let mut j6 = Tally::new("J6", BATTERY_TOL);
    let mut scaling = Tally::new("lemma52", 0.0);
    let mut atomic = Tally::new("atomic_member", BATTERY_TOL);
    let mut plateau = Tally::new("plateau_member", BATTERY_TOL);

    for _ in 0..samples {
        let f = random_pwl(rng, 16);
        let g = random_pwl(rng, 16);
        let (nf, ng) = (f.sup_norm(), g.sup_norm());
        let pts = maximizing_set(&f)?.representatives();

        let m1 = atomic_duality_measure(&f, &pts, &random_alphas(rng, pts.len()))?;
        let m2 = atomic_duality_measure(&f, &pts, &random_alphas(rng, pts.len()))?;
        let lam: f64 = rng.gen_range(0.0..=1.0);
        j1.push(c01_member_defect(&m1.scale(lam).add(&m2.scale(1.0 - lam)), &f));

        let zero = PwlFunction::constant(0.0);
        let theta_member = is_duality_member_c(&RcaMeasure::zero(), &f, BATTERY_TOL).member;
        j3.push(tv_norm(&canonical_duality_measure(&zero)?) + if theta_member { 1.0 } else { 0.0 });

        let alpha = nonzero_alpha(rng);
        j4.push(c01_member_defect(&m1.scale(alpha), &f.scale(alpha)) / (1.0 + alpha * alpha * nf * nf));

        let (cf, cg) = (canonical_duality_measure(&f)?, canonical_duality_measure(&g)?);
        let diff = f.sub(&g);
        j5.push((-pairing_c(&cf.sub(&cg), &diff)).max(0.0));
        j6.push((2.0 * pairing_c(&cg, &diff) - (nf * nf - ng * ng)).max(0.0));

        let m = maximizing_set(&f)?;
        let same = [-2.0, 0.5, 3.0]
            .iter()
            .all(|&t| maximizing_set(&f.scale(t)).map_or(false, |mt| mt.same_set(&m)));
        scaling.push(if same { 0.0 } else { 1.0 });

        let report = is_duality_member_c(&m1, &f, BATTERY_TOL);
        atomic.push(c01_member_defect(&m1, &f) + if report.support_ok { 0.0 } else { 1.0 });

        let (h, a, b) = random_pwl_with_plateau(rng, 16);
        let mu = plateau_duality_measure(&h, a, b)?;
        let report = is_duality_member_c(&mu, &h, BATTERY_TOL);
        plateau.push(c01_member_defect(&mu, &h) + if report.support_ok { 0.0 } else { 1.0 });
    }
    Ok(vec![
        j1.finish(),
        not_applicable("J2"),
        j3.finish(),
        j4.finish(),
        j5.finish(),
        j6.finish(),
        scaling.finish(),
        atomic.finish(),
        plateau.finish(),
    ])
}
