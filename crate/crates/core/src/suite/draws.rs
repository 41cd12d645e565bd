//! Random instances: vectors, piecewise-linear functions, and scenarios
//! whose parameters satisfy each construction's hypotheses.

use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::json;

use crate::c01::PwlFunction;
use crate::engine::scenario::{Scenario, SpaceDescriptor, TheoremId};

pub const LP_EXPONENTS: [f64; 5] = [1.2, 1.5, 2.0, 3.0, 4.0];

/// Uniform coordinates in `[-scale, scale]`; with `min_abs`, every
/// coordinate has absolute value at least `min_abs`.
pub fn random_coords<R: Rng>(rng: &mut R, dim: usize, scale: f64, min_abs: Option<f64>) -> Vec<f64> {
    (0..dim)
        .map(|_| match min_abs {
            Some(m) => {
                let s = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                s * rng.gen_range(m..=scale)
            }
            None => rng.gen_range(-scale..=scale),
        })
        .collect()
}

/// Like [`random_coords`] but each coordinate is zero with probability
/// `zero_prob`.
pub fn random_sparse<R: Rng>(rng: &mut R, dim: usize, scale: f64, zero_prob: f64) -> Vec<f64> {
    (0..dim)
        .map(|_| {
            if rng.gen_bool(zero_prob) {
                0.0
            } else {
                rng.gen_range(-scale..=scale)
            }
        })
        .collect()
}

pub fn random_weights<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(0.25..=2.0)).collect()
}

fn random_grid<R: Rng>(rng: &mut R, max_breakpoints: usize) -> Vec<f64> {
    let n = rng.gen_range(2..=max_breakpoints.max(2));
    let mut inner: Vec<f64> = (0..n - 2).map(|_| rng.gen_range(0.01..0.99)).collect();
    inner.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    inner.dedup();
    let mut grid = vec![0.0];
    grid.extend(inner);
    grid.push(1.0);
    grid
}

/// Random breakpoints (at most `max_breakpoints`) with values in `[-2, 2]`.
pub fn random_pwl<R: Rng>(rng: &mut R, max_breakpoints: usize) -> PwlFunction {
    let grid = random_grid(rng, max_breakpoints);
    let values = random_coords(rng, grid.len(), 2.0, None);
    PwlFunction::new(grid, values).expect("valid grid")
}

/// Random nonnegative function, not identically zero.
pub fn random_positive_pwl<R: Rng>(rng: &mut R, max_breakpoints: usize) -> PwlFunction {
    let grid = random_grid(rng, max_breakpoints);
    let mut values: Vec<f64> = (0..grid.len()).map(|_| rng.gen_range(0.0..=2.0)).collect();
    let k = rng.gen_range(0..values.len());
    values[k] = values[k].max(0.5);
    PwlFunction::new(grid, values).expect("valid grid")
}

/// Random function with a plateau at `+||f||` between two consecutive
/// breakpoints; returns the plateau ends too.
pub fn random_pwl_with_plateau<R: Rng>(rng: &mut R, max_breakpoints: usize) -> (PwlFunction, f64, f64) {
    let f = random_pwl(rng, max_breakpoints.max(3));
    let (grid, mut values) = (f.breakpoints().to_vec(), f.values().to_vec());
    let k = rng.gen_range(0..grid.len() - 1);
    let top = values.iter().fold(0.0_f64, |m, v| m.max(v.abs())) + 0.5;
    values[k] = top;
    values[k + 1] = top;
    (PwlFunction::new(grid.clone(), values).expect("valid grid"), grid[k], grid[k + 1])
}

/// A measure with one to three atoms and sometimes a density piece, as JSON.
fn random_measure_json<R: Rng>(rng: &mut R) -> serde_json::Value {
    let atoms: Vec<(f64, f64)> = (0..rng.gen_range(1..=3))
        .map(|_| (rng.gen_range(0.0..=1.0), rng.gen_range(-2.0..=2.0)))
        .collect();
    if rng.gen_bool(0.5) {
        let a = rng.gen_range(0.0..0.5);
        let b = rng.gen_range(0.5..=1.0);
        json!({"atoms": atoms, "density": {"breakpoints": [a, b], "values": [rng.gen_range(-2.0..=2.0)]}})
    } else {
        json!({"atoms": atoms})
    }
}

fn pwl_json(f: &PwlFunction) -> serde_json::Value {
    serde_json::to_value(f).expect("serializes")
}

fn lp_vec_pairing_j(x: &[f64], p: f64, y: &[f64]) -> f64 {
    let n = x.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p);
    x.iter()
        .zip(y)
        .map(|(a, b)| a.signum() * a.abs().powf(p - 1.0) * b)
        .sum::<f64>()
        / n.powf(p - 2.0)
}

fn away_from_one<R: Rng>(rng: &mut R) -> f64 {
    loop {
        let c: f64 = rng.gen_range(0.1..=3.0);
        if (c - 1.0).abs() > 0.05 {
            return c;
        }
    }
}

/// A scenario with randomly drawn parameters satisfying the hypotheses of
/// `theorem` (dimension at most 8, at most 16 breakpoints).
pub fn random_scenario<R: Rng>(theorem: TheoremId, rng: &mut R) -> Scenario {
    let (space, params) = match theorem {
        TheoremId::Thm31 => {
            let p = *LP_EXPONENTS.choose(rng).expect("nonempty");
            let dim = rng.gen_range(1..=8);
            let x = if rng.gen_bool(0.3) {
                vec![0.0; dim]
            } else {
                random_coords(rng, dim, 2.0, Some(0.1))
            };
            let w = random_coords(rng, dim, 2.0, Some(0.1));
            (SpaceDescriptor::Lp { p }, json!({"x": x, "w": w}))
        }
        TheoremId::Thm32 => {
            let p = *LP_EXPONENTS.choose(rng).expect("nonempty");
            let dim = rng.gen_range(1..=8);
            loop {
                let x = random_coords(rng, dim, 2.0, Some(0.1));
                let y = random_coords(rng, dim, 2.0, None);
                if lp_vec_pairing_j(&x, p, &y).abs() > 0.1 {
                    break (SpaceDescriptor::Lp { p }, json!({"x": x, "y": y}));
                }
            }
        }
        TheoremId::Thm33 => {
            let p = *LP_EXPONENTS.choose(rng).expect("nonempty");
            let dim = rng.gen_range(1..=8);
            let x = random_coords(rng, dim, 2.0, Some(0.1));
            (SpaceDescriptor::Lp { p }, json!({"x": x, "a": away_from_one(rng)}))
        }
        TheoremId::Thm45Case1 => {
            let n = rng.gen_range(1..=8);
            let weights = random_weights(rng, n);
            loop {
                let f = random_coords(rng, n, 2.0, Some(0.2));
                let k = random_coords(rng, n, 2.0, None);
                let kf: f64 = (0..n).map(|i| k[i] * f[i] * weights[i]).sum();
                if kf.abs() > 0.1 {
                    break (SpaceDescriptor::L1 { weights }, json!({"f": f, "k": k}));
                }
            }
        }
        TheoremId::Thm45Case2 => {
            let n = rng.gen_range(2..=8);
            let weights = random_weights(rng, n);
            let f = random_coords(rng, n, 2.0, Some(0.2));
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(rng);
            let (j, first) = (order[0], order[1]);
            let s_f = f[first].signum();
            let mut d: Vec<usize> = order[1..]
                .iter()
                .copied()
                .filter(|&i| f[i].signum() == s_f && rng.gen_bool(0.5))
                .collect();
            if !d.contains(&first) {
                d.push(first);
            }
            let s_k = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let mut k = random_coords(rng, n, 2.0, None);
            for &i in &d {
                k[i] = s_k * rng.gen_range(0.2..=2.0);
            }
            // Solve for k_j so that <k, f> = 0.
            let rest: f64 = (0..n).filter(|&i| i != j).map(|i| k[i] * f[i] * weights[i]).sum();
            k[j] = -rest / (f[j] * weights[j]);
            d.sort_unstable();
            (SpaceDescriptor::L1 { weights }, json!({"f": f, "k": k, "d": d}))
        }
        TheoremId::Thm46 => {
            let n = rng.gen_range(1..=8);
            let weights = random_weights(rng, n);
            let mut k = random_sparse(rng, n, 2.0, 0.3);
            let first = rng.gen_range(0..n);
            if k[first].abs() < 0.2 {
                k[first] = 1.0;
            }
            let s = k[first].signum();
            let mut d: Vec<usize> = (0..n)
                .filter(|&i| i == first || (k[i] != 0.0 && k[i].signum() == s && rng.gen_bool(0.5)))
                .collect();
            d.sort_unstable();
            (SpaceDescriptor::L1 { weights }, json!({"k": k, "d": d}))
        }
        TheoremId::Thm47 => {
            let n = rng.gen_range(1..=8);
            let weights = random_weights(rng, n);
            let mut f: Vec<f64> = (0..n)
                .map(|_| if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(0.2..=2.0) })
                .collect();
            let first = rng.gen_range(0..n);
            f[first] = f[first].max(0.5);
            let d: Vec<usize> = (0..n)
                .filter(|&i| i == first || (f[i] > 0.0 && rng.gen_bool(0.5)))
                .collect();
            (SpaceDescriptor::L1 { weights }, json!({"f": f, "d": d}))
        }
        TheoremId::Cor48 => {
            let n = rng.gen_range(1..=8);
            let weights = random_weights(rng, n);
            let f: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..=2.0)).collect();
            let norm: f64 = f.iter().zip(&weights).map(|(a, w)| a * w).sum();
            let b = rng.gen_range(0.1..=2.0);
            let first = rng.gen_range(0..n);
            let e: Vec<usize> = (0..n).filter(|&i| i == first || rng.gen_bool(0.5)).collect();
            let u: Vec<f64> = (0..n)
                .map(|i| if e.contains(&i) { norm + b } else { norm + rng.gen_range(0.1..=3.0) })
                .collect();
            (SpaceDescriptor::L1 { weights }, json!({"f": f, "u": u, "e": e}))
        }
        TheoremId::Thm53 => {
            let f = random_positive_pwl(rng, 16);
            (SpaceDescriptor::C01, json!({"f": pwl_json(&f)}))
        }
        TheoremId::Thm54 => loop {
            let f = random_pwl(rng, 16);
            if f.sup_norm() < 0.1 {
                continue;
            }
            let lambda = random_measure_json(rng);
            let lm: crate::c01::RcaMeasure = serde_json::from_value(lambda.clone()).expect("valid");
            if crate::c01::pairing_c(&lm, &f).abs() > 0.1 {
                break (SpaceDescriptor::C01, json!({"f": pwl_json(&f), "lambda": lambda}));
            }
        },
        TheoremId::Thm55 => loop {
            let f = random_pwl(rng, 16);
            let lambda = random_measure_json(rng);
            let lm: crate::c01::RcaMeasure = serde_json::from_value(lambda.clone()).expect("valid");
            if lm.total_mass().abs() > 0.1 {
                break (SpaceDescriptor::C01, json!({"f": pwl_json(&f), "lambda": lambda}));
            }
        },
        TheoremId::Thm56 => {
            let grid = random_grid(rng, 16);
            let k = rng.gen_range(0..grid.len());
            let top_f = rng.gen_range(0.5..=2.0);
            let top_u = top_f + rng.gen_range(0.1..=2.0);
            let mut fv: Vec<f64> = (0..grid.len()).map(|_| rng.gen_range(0.0..top_f)).collect();
            let mut uv: Vec<f64> = (0..grid.len()).map(|_| rng.gen_range(0.0..top_u)).collect();
            fv[k] = top_f;
            uv[k] = top_u;
            let f = PwlFunction::new(grid.clone(), fv).expect("valid grid");
            let u = PwlFunction::new(grid, uv).expect("valid grid");
            (SpaceDescriptor::C01, json!({"f": pwl_json(&f), "u": pwl_json(&u)}))
        }
        TheoremId::Cor57 => {
            let grid = random_grid(rng, 16);
            let mut acc = rng.gen_range(0.0..=0.5);
            let fv: Vec<f64> = (0..grid.len())
                .map(|_| {
                    acc += rng.gen_range(0.0..=0.3);
                    acc
                })
                .collect();
            let lift = fv[fv.len() - 1] + rng.gen_range(0.1..=1.0);
            let mut acc = 0.0;
            let mut uv: Vec<f64> = (0..grid.len())
                .map(|_| {
                    acc += rng.gen_range(0.0..=0.3);
                    acc
                })
                .collect();
            let top = uv[uv.len() - 1];
            let last = uv.len() - 1;
            uv[last] = top.max(lift);
            let f = PwlFunction::new(grid.clone(), fv).expect("valid grid");
            let u = PwlFunction::new(grid, uv).expect("valid grid");
            (SpaceDescriptor::C01, json!({"f": pwl_json(&f), "u": pwl_json(&u)}))
        }
        TheoremId::Thm58 => {
            let f = random_positive_pwl(rng, 16);
            (SpaceDescriptor::C01, json!({"f": pwl_json(&f), "c": away_from_one(rng)}))
        }
    };
    Scenario {
        space,
        theorem,
        params,
        schedule: None,
        tolerances: None,
    }
}
