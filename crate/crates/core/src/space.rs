//! The common surface the coderivative engine needs from a Banach-space model.

use std::fmt::Debug;

use serde::Serialize;

use crate::Result;

/// A finite model of a Banach space `X` together with its dual `X*`.
///
/// Implementors provide the norms on both sides, the canonical pairing
/// `<x*, x>`, differences, and a membership test for the normalized
/// duality mapping `J`. Everything the coderivative quotient touches goes
/// through this trait, so the engine is written once for all backends.
pub trait DualitySpace: Clone + Debug + Send + Sync {
    type Point: Clone + Debug + Serialize + Send + Sync;
    type Dual: Clone + Debug + Serialize + Send + Sync;

    fn norm(&self, x: &Self::Point) -> Result<f64>;

    fn dual_norm(&self, d: &Self::Dual) -> Result<f64>;

    /// `<d, x>`, the dual element acting on the primal one.
    fn pairing(&self, d: &Self::Dual, x: &Self::Point) -> Result<f64>;

    fn point_diff(&self, a: &Self::Point, b: &Self::Point) -> Result<Self::Point>;

    fn dual_diff(&self, a: &Self::Dual, b: &Self::Dual) -> Result<Self::Dual>;

    /// Whether `d` belongs to `J(x)` with absolute tolerance `tol` on both
    /// defining equalities `||d|| = ||x||` and `<d, x> = ||x||^2`.
    fn is_member(&self, d: &Self::Dual, x: &Self::Point, tol: f64) -> Result<bool>;

    /// Whether `x` may act on the dual as a second-dual element. Reflexive
    /// models accept everything; the others require the positive cone.
    fn check_embeddable(&self, x: &Self::Point) -> Result<()>;

    /// JSON descriptor, e.g. `{"space":"lp","p":2.0}`.
    fn descriptor(&self) -> serde_json::Value;
}
