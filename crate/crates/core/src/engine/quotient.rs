use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::DualitySpace;

/// A point `(u, u*)` of the graph of `J`.
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "")]
pub struct GraphPair<S: DualitySpace> {
    pub point: S::Point,
    pub dual: S::Dual,
}

impl<S: DualitySpace> GraphPair<S> {
    pub fn new(point: S::Point, dual: S::Dual) -> Self {
        GraphPair { point, dual }
    }
}

/// The second-dual argument `y**` of the coderivative: either `theta**` or
/// a primal element acting on the dual by the canonical pairing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SecondDualArg<P> {
    Zero,
    Embedded(P),
}

/// Asks whether `candidate` belongs to `D*J(base)(second_dual)`.
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "")]
pub struct CoderivativeQuery<S: DualitySpace> {
    pub base: GraphPair<S>,
    pub second_dual: SecondDualArg<S::Point>,
    pub candidate: S::Dual,
}

impl<S: DualitySpace> CoderivativeQuery<S> {
    /// Validates the base pair and the second-dual argument.
    pub fn new(
        space: &S,
        base: GraphPair<S>,
        second_dual: SecondDualArg<S::Point>,
        candidate: S::Dual,
        membership_tol: f64,
    ) -> Result<Self> {
        let scale = 1.0 + space.norm(&base.point)?.powi(2);
        if !space.is_member(&base.dual, &base.point, membership_tol * scale)? {
            return Err(Error::Hypothesis("base dual is not in J(base point)".into()));
        }
        if let SecondDualArg::Embedded(h) = &second_dual {
            space.check_embeddable(h)?;
        }
        Ok(CoderivativeQuery {
            base,
            second_dual,
            candidate,
        })
    }
}

/// `(<z*, u - x> - <y**, u* - x*>) / (||u - x|| + ||u* - x*||_*)`, where
/// `<y**, d>` is zero for `theta**` and `<d, h>` for an embedded `h`.
pub fn quotient<S: DualitySpace>(
    space: &S,
    query: &CoderivativeQuery<S>,
    pair: &GraphPair<S>,
) -> Result<f64> {
    let (num, den) = quotient_parts(space, query, pair)?;
    if den == 0.0 {
        return Err(Error::Degenerate("pair coincides with the base point".into()));
    }
    Ok(num / den)
}

/// Numerator and denominator of [`quotient`]; the denominator is the graph
/// distance between `pair` and the base.
pub(crate) fn quotient_parts<S: DualitySpace>(
    space: &S,
    query: &CoderivativeQuery<S>,
    pair: &GraphPair<S>,
) -> Result<(f64, f64)> {
    let dx = space.point_diff(&pair.point, &query.base.point)?;
    let dd = space.dual_diff(&pair.dual, &query.base.dual)?;
    let mut num = space.pairing(&query.candidate, &dx)?;
    if let SecondDualArg::Embedded(h) = &query.second_dual {
        num -= space.pairing(&dd, h)?;
    }
    let den = space.norm(&dx)? + space.dual_norm(&dd)?;
    Ok((num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{LpSpace, LpVector};

    fn v(c: &[f64]) -> LpVector {
        LpVector::new(c.to_vec()).unwrap()
    }

    fn l2_base() -> (LpSpace, GraphPair<LpSpace>) {
        let s = LpSpace::new(2.0).unwrap();
        let x = v(&[1.0, 0.0]);
        (s, GraphPair::new(x.clone(), x))
    }

    #[test]
    fn zero_candidate_zero_functional() {
        let (s, base) = l2_base();
        let q = CoderivativeQuery::new(&s, base, SecondDualArg::Zero, v(&[0.0, 0.0]), 1e-9).unwrap();
        let pair = GraphPair::new(v(&[0.7, 0.2]), v(&[0.7, 0.2]));
        assert_eq!(quotient(&s, &q, &pair).unwrap(), 0.0);
    }

    #[test]
    fn hand_evaluated_examples() {
        let (s, base) = l2_base();
        let q = CoderivativeQuery::new(
            &s,
            base.clone(),
            SecondDualArg::Embedded(v(&[1.0, 0.0])),
            v(&[0.0, 0.0]),
            1e-9,
        )
        .unwrap();
        let pair = GraphPair::new(v(&[0.9, 0.0]), v(&[0.9, 0.0]));
        assert!((quotient(&s, &q, &pair).unwrap() - 0.5).abs() < 1e-12);

        let q = CoderivativeQuery::new(
            &s,
            base,
            SecondDualArg::Embedded(v(&[1.0, 0.0])),
            v(&[3.0, 0.0]),
            1e-9,
        )
        .unwrap();
        let pair = GraphPair::new(v(&[1.05, 0.0]), v(&[1.05, 0.0]));
        assert!((quotient(&s, &q, &pair).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_pair_and_bad_base() {
        let (s, base) = l2_base();
        let q = CoderivativeQuery::new(&s, base.clone(), SecondDualArg::Zero, v(&[1.0, 1.0]), 1e-9)
            .unwrap();
        assert!(matches!(quotient(&s, &q, &base), Err(Error::Degenerate(_))));
        let bad = GraphPair::new(v(&[1.0, 0.0]), v(&[2.0, 0.0]));
        assert!(CoderivativeQuery::new(&s, bad, SecondDualArg::Zero, v(&[0.0, 0.0]), 1e-9).is_err());
    }
}
