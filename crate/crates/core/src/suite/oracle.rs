use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::l1::{is_duality_member, l1_norm, FiniteMeasureSpace, L1Function, LinftySelection};
use crate::lp::{Exponent, LpVector};

/// Central-difference gradient of `x -> ||x||_p^2 / 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientEstimate {
    /// Zero at flagged coordinates.
    pub gradient: Vec<f64>,
    /// Coordinates skipped because `|x_i| <= 10 * step` with `p < 2`, where
    /// the function is not smooth enough for the difference formula.
    pub flagged: Vec<usize>,
}

/// `(sum |x_i|^p)^(2/p) / 2`, written out directly rather than through the
/// backend so that the oracle shares no code with it.
fn half_square_norm(x: &[f64], p: f64) -> f64 {
    let m = x.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    if m == 0.0 {
        return 0.0;
    }
    let s: f64 = x.iter().map(|v| (v.abs() / m).powf(p)).sum();
    0.5 * m * m * s.powf(2.0 / p)
}

pub fn gradient_oracle_lp(x: &LpVector, p: Exponent, step: f64) -> Result<GradientEstimate> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::Invalid(format!("step must be positive, got {step}")));
    }
    let p = p.get();
    let mut work = x.coords().to_vec();
    let mut gradient = vec![0.0; work.len()];
    let mut flagged = Vec::new();
    for i in 0..work.len() {
        let xi = work[i];
        if p < 2.0 && xi.abs() <= 10.0 * step {
            flagged.push(i);
            continue;
        }
        work[i] = xi + step;
        let up = half_square_norm(&work, p);
        work[i] = xi - step;
        let down = half_square_norm(&work, p);
        work[i] = xi;
        gradient[i] = (up - down) / (2.0 * step);
    }
    Ok(GradientEstimate { gradient, flagged })
}

pub const MAX_BRUTE_POINTS: usize = 4;
pub const MAX_GRID_STEPS: usize = 41;

/// Every selection with values on the uniform grid of `grid_steps` points
/// over `[-||f||_1, ||f||_1]` that passes the definition of `J(f)`.
/// `theta` yields `[theta*]`.
///
/// The grid contains `+-||f||` exactly, so true members pass with round-off
/// slack only. A tolerance of one grid spacing would let off-template
/// values through wherever `w_i |f_i|` is small.
pub fn brute_force_duality_l1(
    space: &FiniteMeasureSpace,
    f: &L1Function,
    grid_steps: usize,
) -> Result<Vec<LinftySelection>> {
    let n = space.point_count();
    if n > MAX_BRUTE_POINTS || grid_steps > MAX_GRID_STEPS {
        return Err(Error::Budget(format!(
            "{grid_steps}^{n} grid points (limits: {MAX_BRUTE_POINTS} points, {MAX_GRID_STEPS} steps)"
        )));
    }
    if grid_steps < 2 {
        return Err(Error::Invalid("grid needs at least 2 steps".into()));
    }
    let norm = l1_norm(space, f)?;
    if norm == 0.0 {
        return Ok(vec![LinftySelection::zeros(n)]);
    }
    let last = (grid_steps - 1) as f64;
    // Exact at both ends so that the template values +-||f|| are on the grid.
    let grid: Vec<f64> = (0..grid_steps)
        .map(|k| norm * ((2.0 * k as f64 - last) / last))
        .collect();
    let tol = 1e-9 * norm.max(1.0).powi(2);
    let mut found = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let g = space.selection(idx.iter().map(|&k| grid[k]).collect())?;
        if is_duality_member(space, &g, f, tol)? {
            found.push(g);
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(found);
            }
            idx[pos] += 1;
            if idx[pos] < grid_steps {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}
