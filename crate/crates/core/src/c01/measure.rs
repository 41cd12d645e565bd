use serde::{Deserialize, Serialize};

use super::pwl::{merge_grids, PwlFunction};
use crate::error::{check_finite, Error, Result};

/// Atom locations closer than this are the same point.
const LOCATION_EPS: f64 = 1e-12;

/// A piecewise-constant density: `values[k]` on `[breakpoints[k], breakpoints[k+1])`
/// and zero outside `[breakpoints[0], breakpoints[last]]`.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct StepDensity {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Deserialize)]
struct RawDensity {
    #[serde(default)]
    breakpoints: Vec<f64>,
    #[serde(default)]
    values: Vec<f64>,
}

impl<'de> Deserialize<'de> for StepDensity {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = RawDensity::deserialize(de)?;
        StepDensity::new(raw.breakpoints, raw.values).map_err(serde::de::Error::custom)
    }
}

impl StepDensity {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.is_empty() && values.is_empty() {
            return Ok(StepDensity::default());
        }
        if breakpoints.len() != values.len() + 1 {
            return Err(Error::Invalid(format!(
                "density with {} breakpoints needs {} values, got {}",
                breakpoints.len(),
                breakpoints.len().saturating_sub(1),
                values.len()
            )));
        }
        check_finite(&breakpoints, "density breakpoints")?;
        check_finite(&values, "density values")?;
        if breakpoints[0] < 0.0 || *breakpoints.last().unwrap() > 1.0 {
            return Err(Error::Invalid("density grid must lie in [0, 1]".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid("density breakpoints must be strictly increasing".into()));
        }
        Ok(StepDensity { breakpoints, values })
    }

    /// Constant `value` on `[a, b]`.
    pub fn uniform(a: f64, b: f64, value: f64) -> Result<Self> {
        StepDensity::new(vec![a, b], vec![value])
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `(a, b, value)` per piece.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(k, &v)| (self.breakpoints[k], self.breakpoints[k + 1], v))
    }

    pub fn value_at(&self, s: f64) -> f64 {
        self.pieces()
            .find(|&(a, b, _)| s >= a && s < b)
            .map_or(0.0, |(_, _, v)| v)
    }

    fn scale(&self, c: f64) -> Self {
        StepDensity {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    fn combine(&self, other: &StepDensity, op: impl Fn(f64, f64) -> f64) -> Self {
        if self.is_empty() && other.is_empty() {
            return StepDensity::default();
        }
        if self.breakpoints == other.breakpoints {
            return StepDensity {
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
        let values = grid
            .windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                op(self.value_at(mid), other.value_at(mid))
            })
            .collect();
        StepDensity {
            breakpoints: grid,
            values,
        }
    }
}

/// A signed Borel measure on `[0, 1]`: finitely many atoms plus a
/// piecewise-constant Lebesgue density.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct RcaMeasure {
    atoms: Vec<(f64, f64)>,
    density: StepDensity,
}

#[derive(Deserialize)]
struct RawMeasure {
    #[serde(default)]
    atoms: Vec<(f64, f64)>,
    #[serde(default)]
    density: StepDensity,
}

impl<'de> Deserialize<'de> for RcaMeasure {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = RawMeasure::deserialize(de)?;
        RcaMeasure::new(raw.atoms, raw.density).map_err(serde::de::Error::custom)
    }
}

impl RcaMeasure {
    /// Atoms at the same location are merged.
    pub fn new(atoms: Vec<(f64, f64)>, density: StepDensity) -> Result<Self> {
        for &(loc, w) in &atoms {
            if !(0.0..=1.0).contains(&loc) {
                return Err(Error::Invalid(format!("atom location {loc} outside [0, 1]")));
            }
            if !w.is_finite() {
                return Err(Error::Invalid(format!("atom weight at {loc} is not finite")));
            }
        }
        Ok(RcaMeasure {
            atoms: merge_atoms(atoms),
            density,
        })
    }

    pub fn zero() -> Self {
        RcaMeasure::default()
    }

    pub fn atomic(atoms: Vec<(f64, f64)>) -> Result<Self> {
        RcaMeasure::new(atoms, StepDensity::default())
    }

    pub fn with_density(density: StepDensity) -> Self {
        RcaMeasure {
            atoms: Vec::new(),
            density,
        }
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn density(&self) -> &StepDensity {
        &self.density
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.iter().all(|a| a.1 == 0.0) && self.density.values.iter().all(|&v| v == 0.0)
    }

    /// `lambda([0, 1])`.
    pub fn total_mass(&self) -> f64 {
        let atoms: f64 = self.atoms.iter().map(|a| a.1).sum();
        let dens: f64 = self.density.pieces().map(|(a, b, v)| v * (b - a)).sum();
        atoms + dens
    }

    pub fn scale(&self, c: f64) -> Self {
        RcaMeasure {
            atoms: self.atoms.iter().map(|&(l, w)| (l, c * w)).collect(),
            density: self.density.scale(c),
        }
    }

    pub fn add(&self, other: &RcaMeasure) -> Self {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &RcaMeasure) -> Self {
        self.combine(other, -1.0)
    }

    fn combine(&self, other: &RcaMeasure, sign: f64) -> Self {
        let atoms = self
            .atoms
            .iter()
            .copied()
            .chain(other.atoms.iter().map(|&(l, w)| (l, sign * w)))
            .collect();
        RcaMeasure {
            atoms: merge_atoms(atoms),
            density: self.density.combine(&other.density, |a, b| a + sign * b),
        }
    }
}

fn merge_atoms(mut atoms: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    atoms.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
    for (loc, w) in atoms {
        match out.last_mut() {
            Some(last) if (loc - last.0).abs() <= LOCATION_EPS => last.1 += w,
            _ => out.push((loc, w)),
        }
    }
    out
}

/// Standard total variation `|mu|([0, 1])`: absolute atom weights plus the
/// integral of the absolute density.
pub fn tv_norm(mu: &RcaMeasure) -> f64 {
    let atoms: f64 = mu.atoms.iter().map(|a| a.1.abs()).sum();
    let dens: f64 = mu.density.pieces().map(|(a, b, v)| v.abs() * (b - a)).sum();
    atoms + dens
}

/// `<mu, f> = int f dmu`, exact for piecewise-linear `f`.
pub fn pairing_c(mu: &RcaMeasure, f: &PwlFunction) -> f64 {
    let atoms: f64 = mu.atoms.iter().map(|&(l, w)| w * f.eval(l)).sum();
    let dens: f64 = mu.density.pieces().map(|(a, b, v)| v * f.integral(a, b)).sum();
    atoms + dens
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tv_examples() {
        assert_eq!(tv_norm(&RcaMeasure::atomic(vec![(0.5, 1.0)]).unwrap()), 1.0);
        assert_eq!(
            tv_norm(&RcaMeasure::atomic(vec![(0.0, 0.5), (1.0, -0.5)]).unwrap()),
            1.0
        );
        let d = RcaMeasure::with_density(StepDensity::uniform(0.25, 0.75, 4.0).unwrap());
        assert_eq!(tv_norm(&d), 2.0);
    }

    #[test]
    fn pairing_examples() {
        let tent = PwlFunction::tent(0.5, 1.0).unwrap();
        assert_eq!(pairing_c(&RcaMeasure::atomic(vec![(0.5, 1.0)]).unwrap(), &tent), 1.0);
        let lebesgue = RcaMeasure::with_density(StepDensity::uniform(0.0, 1.0, 1.0).unwrap());
        assert_eq!(pairing_c(&lebesgue, &PwlFunction::constant(1.0)), 1.0);
        assert!((pairing_c(&lebesgue, &PwlFunction::linear(0.0, 1.0)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn merging_and_differences() {
        let mu = RcaMeasure::atomic(vec![(0.3, 1.0), (0.3, 2.0), (0.1, -1.0)]).unwrap();
        assert_eq!(mu.atoms(), &[(0.1, -1.0), (0.3, 3.0)]);
        let nu = RcaMeasure::atomic(vec![(0.3, 3.0)]).unwrap();
        let diff = mu.sub(&nu);
        assert_eq!(tv_norm(&diff), 1.0);

        let a = RcaMeasure::with_density(StepDensity::uniform(0.0, 0.5, 2.0).unwrap());
        let b = RcaMeasure::with_density(StepDensity::uniform(0.25, 1.0, 1.0).unwrap());
        let d = a.sub(&b);
        // 2 on [0,.25), 1 on [.25,.5), -1 on [.5,1)
        assert!((tv_norm(&d) - (0.5 + 0.25 + 0.5)).abs() < 1e-15);
        assert!((d.total_mass() - (0.5 + 0.25 - 0.5)).abs() < 1e-15);
    }

    #[test]
    fn validation() {
        assert!(RcaMeasure::atomic(vec![(1.5, 1.0)]).is_err());
        assert!(StepDensity::new(vec![0.0, 1.0], vec![]).is_err());
        assert!(StepDensity::new(vec![0.5, 0.2], vec![1.0]).is_err());
        let json = r#"{"atoms":[[0.5,1.0]],"density":{"breakpoints":[0.25,0.75],"values":[4]}}"#;
        let mu: RcaMeasure = serde_json::from_str(json).unwrap();
        assert_eq!(tv_norm(&mu), 3.0);
        let back: RcaMeasure = serde_json::from_str(&serde_json::to_string(&mu).unwrap()).unwrap();
        assert_eq!(back, mu);
    }
}
