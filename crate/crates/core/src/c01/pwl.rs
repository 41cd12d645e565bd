use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Error, Result};

/// A continuous piecewise-linear function on `[0, 1]`, linear between
/// consecutive breakpoints `0 = t_0 < ... < t_n = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PwlFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Deserialize)]
struct RawPwl {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl<'de> Deserialize<'de> for PwlFunction {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = RawPwl::deserialize(de)?;
        PwlFunction::new(raw.breakpoints, raw.values).map_err(serde::de::Error::custom)
    }
}

impl PwlFunction {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::Invalid("need at least the breakpoints 0 and 1".into()));
        }
        if breakpoints.len() != values.len() {
            return Err(Error::Dimension {
                left: breakpoints.len(),
                right: values.len(),
            });
        }
        check_finite(&breakpoints, "breakpoints")?;
        check_finite(&values, "values")?;
        if breakpoints[0] != 0.0 || *breakpoints.last().unwrap() != 1.0 {
            return Err(Error::Invalid("breakpoints must start at 0 and end at 1".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid("breakpoints must be strictly increasing".into()));
        }
        Ok(PwlFunction { breakpoints, values })
    }

    pub fn constant(c: f64) -> Self {
        PwlFunction {
            breakpoints: vec![0.0, 1.0],
            values: vec![c, c],
        }
    }

    /// The line from `(0, a)` to `(1, b)`.
    pub fn linear(a: f64, b: f64) -> Self {
        PwlFunction {
            breakpoints: vec![0.0, 1.0],
            values: vec![a, b],
        }
    }

    /// Tent peaking at `(peak, height)` and vanishing at both ends.
    pub fn tent(peak: f64, height: f64) -> Result<Self> {
        PwlFunction::new(vec![0.0, peak, 1.0], vec![0.0, height, 0.0])
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn eval(&self, s: f64) -> f64 {
        let b = &self.breakpoints;
        if s <= 0.0 {
            return self.values[0];
        }
        if s >= 1.0 {
            return *self.values.last().unwrap();
        }
        let k = b.partition_point(|&t| t <= s);
        // b[k-1] <= s < b[k]
        let (t0, t1) = (b[k - 1], b[k]);
        let (v0, v1) = (self.values[k - 1], self.values[k]);
        if s == t0 {
            return v0;
        }
        let lambda = (s - t0) / (t1 - t0);
        v0 + lambda * (v1 - v0)
    }

    /// `max |f|`, attained at a breakpoint.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn scale(&self, c: f64) -> Self {
        PwlFunction {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    /// `f + c` for a constant `c`.
    pub fn shift(&self, c: f64) -> Self {
        PwlFunction {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| v + c).collect(),
        }
    }

    pub fn add(&self, other: &PwlFunction) -> Self {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &PwlFunction) -> Self {
        self.combine(other, |a, b| a - b)
    }

    /// Pointwise combination on the union of both breakpoint grids. Exact for
    /// any linear `op`, since both sides are linear between merged breakpoints.
    fn combine(&self, other: &PwlFunction, op: impl Fn(f64, f64) -> f64) -> Self {
        if self.breakpoints == other.breakpoints {
            return PwlFunction {
                breakpoints: self.breakpoints.clone(),
                values: self
                    .values
                    .iter()
                    .zip(&other.values)
                    .map(|(&a, &b)| op(a, b))
                    .collect(),
            };
        }
        let grid = merge_grids(&self.breakpoints, &other.breakpoints);
        let values = grid.iter().map(|&s| op(self.eval(s), other.eval(s))).collect();
        PwlFunction {
            breakpoints: grid,
            values,
        }
    }

    /// Exact `int_a^b f(s) ds` for `0 <= a <= b <= 1` (trapezoids between
    /// breakpoints).
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let mut nodes = vec![a];
        nodes.extend(self.breakpoints.iter().copied().filter(|&t| t > a && t < b));
        nodes.push(b);
        nodes
            .windows(2)
            .map(|w| 0.5 * (w[1] - w[0]) * (self.eval(w[0]) + self.eval(w[1])))
            .sum()
    }
}

pub(crate) fn merge_grids(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut grid: Vec<f64> = a.iter().chain(b).copied().collect();
    grid.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
    grid.dedup();
    grid
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(PwlFunction::new(vec![0.0], vec![1.0]).is_err());
        assert!(PwlFunction::new(vec![0.1, 1.0], vec![1.0, 1.0]).is_err());
        assert!(PwlFunction::new(vec![0.0, 0.5, 0.5, 1.0], vec![0.0; 4]).is_err());
        assert!(PwlFunction::new(vec![0.0, 1.0], vec![0.0]).is_err());
        let bad = r#"{"breakpoints":[0,0.9],"values":[1,2]}"#;
        assert!(serde_json::from_str::<PwlFunction>(bad).is_err());
    }

    #[test]
    fn sup_norm_examples() {
        assert_eq!(PwlFunction::constant(1.0).sup_norm(), 1.0);
        assert_eq!(PwlFunction::tent(0.5, 1.0).unwrap().sup_norm(), 1.0);
        assert_eq!(PwlFunction::linear(-3.0, 2.0).sup_norm(), 3.0);
    }

    #[test]
    fn eval_and_integral() {
        let f = PwlFunction::tent(0.5, 1.0).unwrap();
        assert_eq!(f.eval(0.25), 0.5);
        assert_eq!(f.eval(0.5), 1.0);
        assert_eq!(f.eval(1.0), 0.0);
        assert!((f.integral(0.0, 1.0) - 0.5).abs() < 1e-15);
        assert!((f.integral(0.25, 0.75) - 0.375).abs() < 1e-15);
        assert!((PwlFunction::linear(0.0, 1.0).integral(0.0, 1.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn combine_on_merged_grid() {
        let f = PwlFunction::tent(0.5, 1.0).unwrap();
        let g = PwlFunction::tent(0.25, 2.0).unwrap();
        let h = f.sub(&g);
        assert_eq!(h.breakpoints(), &[0.0, 0.25, 0.5, 1.0]);
        for s in [0.0, 0.1, 0.25, 0.4, 0.5, 0.8, 1.0] {
            assert!((h.eval(s) - (f.eval(s) - g.eval(s))).abs() < 1e-14);
        }
    }
}
