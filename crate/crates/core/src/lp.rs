//! Finite-support model of `l_p`, `1 < p < inf`.
//!
//! A vector of dimension `n` stands for a sequence supported on the first
//! `n` coordinates. Every construction the coderivative witnesses use
//! (scalings, moves along a basis direction) keeps the support finite, so
//! the formulas below are exact restrictions of the sequence-space ones.

use serde::{Deserialize, Serialize};

use crate::error::{check_dims, check_finite, Error, Result};
use crate::space::DualitySpace;

/// An exponent strictly between 1 and infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Exponent(f64);

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_finite() && p > 1.0 {
            Ok(Exponent(p))
        } else {
            Err(Error::Exponent(p))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// `q = p / (p - 1)`, so that `1/p + 1/q = 1`.
    pub fn conjugate(self) -> Exponent {
        Exponent(self.0 / (self.0 - 1.0))
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let p = f64::deserialize(de)?;
        Exponent::new(p).map_err(serde::de::Error::custom)
    }
}

/// A finitely supported real sequence. The same type carries elements of
/// `l_p` and of its dual `l_q`; the exponent lives in [`LpSpace`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LpVector(Vec<f64>);

impl LpVector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Invalid("vector must have dimension >= 1".into()));
        }
        check_finite(&coords, "coords")?;
        Ok(LpVector(coords))
    }

    pub fn zeros(n: usize) -> Self {
        LpVector(vec![0.0; n.max(1)])
    }

    /// The `m`-th standard basis vector of dimension `n`.
    pub fn basis(n: usize, m: usize) -> Self {
        let mut v = vec![0.0; n];
        v[m] = 1.0;
        LpVector(v)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0.0)
    }

    pub fn scale(&self, alpha: f64) -> LpVector {
        LpVector(self.0.iter().map(|v| alpha * v).collect())
    }

    pub fn add(&self, other: &LpVector) -> Result<LpVector> {
        check_dims(self.dim(), other.dim())?;
        Ok(LpVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, other: &LpVector) -> Result<LpVector> {
        check_dims(self.dim(), other.dim())?;
        Ok(LpVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    /// Largest coordinatewise absolute difference.
    pub fn max_abs_diff(&self, other: &LpVector) -> Result<f64> {
        check_dims(self.dim(), other.dim())?;
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

/// `(sum |x_i|^p)^(1/p)`, evaluated with the largest entry factored out so
/// that large or tiny coordinates do not overflow.
pub fn lp_norm(x: &LpVector, p: Exponent) -> f64 {
    let p = p.get();
    let scale = x.0.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    let sum: f64 = x.0.iter().map(|v| (v.abs() / scale).powf(p)).sum();
    scale * sum.powf(1.0 / p)
}

/// Shared body of `J` and `J*`: coordinate `i` is
/// `sign(x_i) |x_i|^(r-1) / ||x||_r^(r-2)`, written as
/// `||x|| * sign(x_i) * (|x_i| / ||x||)^(r-1)`.
fn duality_formula(x: &LpVector, r: Exponent) -> LpVector {
    let norm = lp_norm(x, r);
    if norm == 0.0 {
        return LpVector::zeros(x.dim());
    }
    let e = r.get() - 1.0;
    LpVector(
        x.0.iter()
            .map(|&v| {
                if v == 0.0 {
                    0.0
                } else {
                    v.signum() * norm * (v.abs() / norm).powf(e)
                }
            })
            .collect(),
    )
}

/// The normalized duality mapping `J: l_p -> l_q`. `J(theta) = theta`.
pub fn duality_map(x: &LpVector, p: Exponent) -> LpVector {
    duality_formula(x, p)
}

/// The normalized duality mapping of the dual, `J*: l_q -> l_p`; pass the
/// exponent of the space `u` lives in. `J*(J(x)) = x`.
pub fn dual_duality_map(u: &LpVector, q: Exponent) -> LpVector {
    duality_formula(u, q)
}

/// `<u, x> = sum u_i x_i`.
pub fn pairing(u: &LpVector, x: &LpVector) -> Result<f64> {
    check_dims(u.dim(), x.dim())?;
    Ok(u.0.iter().zip(&x.0).map(|(a, b)| a * b).sum())
}

/// Space descriptor for the `l_p` backend.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LpSpace {
    pub p: Exponent,
}

impl LpSpace {
    pub fn new(p: f64) -> Result<Self> {
        Ok(LpSpace { p: Exponent::new(p)? })
    }

    pub fn q(&self) -> Exponent {
        self.p.conjugate()
    }

    pub fn duality_map(&self, x: &LpVector) -> LpVector {
        duality_map(x, self.p)
    }
}

impl DualitySpace for LpSpace {
    type Point = LpVector;
    type Dual = LpVector;

    fn norm(&self, x: &LpVector) -> Result<f64> {
        Ok(lp_norm(x, self.p))
    }

    fn dual_norm(&self, d: &LpVector) -> Result<f64> {
        Ok(lp_norm(d, self.q()))
    }

    fn pairing(&self, d: &LpVector, x: &LpVector) -> Result<f64> {
        pairing(d, x)
    }

    fn point_diff(&self, a: &LpVector, b: &LpVector) -> Result<LpVector> {
        a.sub(b)
    }

    fn dual_diff(&self, a: &LpVector, b: &LpVector) -> Result<LpVector> {
        a.sub(b)
    }

    fn is_member(&self, d: &LpVector, x: &LpVector, tol: f64) -> Result<bool> {
        let nx = lp_norm(x, self.p);
        let nd = lp_norm(d, self.q());
        let pair = pairing(d, x)?;
        Ok((nd - nx).abs() <= tol && (pair - nx * nx).abs() <= tol)
    }

    fn check_embeddable(&self, _x: &LpVector) -> Result<()> {
        Ok(())
    }

    fn descriptor(&self) -> serde_json::Value {
        serde_json::json!({ "space": "lp", "p": self.p.get() })
    }
}
