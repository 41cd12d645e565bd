//! `L1(S)` over a finite measure space with strictly positive point weights.
//!
//! Every point is an atom of positive measure, so "almost everywhere"
//! statements become "at every point". In particular `mu{f = 0} = 0` holds
//! exactly when `f` has no zero values, and that is the case where `J(f)`
//! is a singleton.

use serde::{Deserialize, Serialize};

use crate::error::{check_dims, check_finite, Error, Result};
use crate::space::DualitySpace;

/// `n` points with weights `mu({s_i})`, all strictly positive and finite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteMeasureSpace {
    weights: Vec<f64>,
}

impl FiniteMeasureSpace {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Invalid("measure space needs at least one point".into()));
        }
        if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::Invalid(format!(
                "weight {i} must be positive and finite, got {}",
                weights[i]
            )));
        }
        Ok(FiniteMeasureSpace { weights })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![1.0; n])
    }

    pub fn point_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `mu(A)` for a mask.
    pub fn measure(&self, mask: &SubsetMask) -> Result<f64> {
        mask.check(self.point_count())?;
        Ok(mask.indices().iter().map(|&i| self.weights[i]).sum())
    }

    pub fn function(&self, values: Vec<f64>) -> Result<L1Function> {
        check_dims(values.len(), self.point_count())?;
        check_finite(&values, "values")?;
        Ok(L1Function(values))
    }

    pub fn selection(&self, values: Vec<f64>) -> Result<LinftySelection> {
        check_dims(values.len(), self.point_count())?;
        check_finite(&values, "values")?;
        Ok(LinftySelection(values))
    }

    /// The indicator `chi_A` as an `L1` element.
    pub fn indicator(&self, mask: &SubsetMask) -> Result<L1Function> {
        mask.check(self.point_count())?;
        let mut v = vec![0.0; self.point_count()];
        for &i in mask.indices() {
            v[i] = 1.0;
        }
        Ok(L1Function(v))
    }

    fn check_fn(&self, len: usize) -> Result<()> {
        check_dims(len, self.point_count())
    }
}

impl<'de> Deserialize<'de> for FiniteMeasureSpace {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            weights: Vec<f64>,
        }
        let raw = Raw::deserialize(de)?;
        FiniteMeasureSpace::new(raw.weights).map_err(serde::de::Error::custom)
    }
}

/// An element of `L1(S)`: one value per point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct L1Function(Vec<f64>);

/// An element of `L_inf(S)`, typically one member of the set `J(f)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinftySelection(Vec<f64>);

macro_rules! value_list {
    ($ty:ident) => {
        impl $ty {
            pub fn values(&self) -> &[f64] {
                &self.0
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(|&v| v == 0.0)
            }

            pub fn zeros(n: usize) -> Self {
                $ty(vec![0.0; n])
            }

            pub fn scale(&self, alpha: f64) -> Self {
                $ty(self.0.iter().map(|v| alpha * v).collect())
            }

            pub fn add(&self, other: &Self) -> Result<Self> {
                check_dims(self.len(), other.len())?;
                Ok($ty(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
            }

            pub fn sub(&self, other: &Self) -> Result<Self> {
                check_dims(self.len(), other.len())?;
                Ok($ty(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
            }

            pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
                check_dims(self.len(), other.len())?;
                Ok(self
                    .0
                    .iter()
                    .zip(&other.0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max))
            }
        }
    };
}

value_list!(L1Function);
value_list!(LinftySelection);

/// A subset of the points, stored as a sorted list of distinct indices.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(from = "Vec<usize>", into = "Vec<usize>")]
pub struct SubsetMask(Vec<usize>);

impl SubsetMask {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        SubsetMask(indices)
    }

    pub fn from_predicate(n: usize, pred: impl Fn(usize) -> bool) -> Self {
        SubsetMask((0..n).filter(|&i| pred(i)).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn intersects(&self, other: &SubsetMask) -> bool {
        self.0.iter().any(|&i| other.contains(i))
    }

    pub(crate) fn check(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&i) if i >= n => Err(Error::Invalid(format!(
                "mask index {i} out of range for {n} points"
            ))),
            _ => Ok(()),
        }
    }
}

impl From<Vec<usize>> for SubsetMask {
    fn from(v: Vec<usize>) -> Self {
        SubsetMask::new(v)
    }
}

impl From<SubsetMask> for Vec<usize> {
    fn from(m: SubsetMask) -> Self {
        m.0
    }
}

/// `sum |f_i| w_i`.
pub fn l1_norm(space: &FiniteMeasureSpace, f: &L1Function) -> Result<f64> {
    space.check_fn(f.len())?;
    Ok(f.0.iter().zip(&space.weights).map(|(v, w)| v.abs() * w).sum())
}

/// `max |g_i|`.
pub fn linf_norm(g: &LinftySelection) -> f64 {
    g.0.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// `<g, f> = sum g_i f_i w_i`.
pub fn pairing_l1(space: &FiniteMeasureSpace, g: &LinftySelection, f: &L1Function) -> Result<f64> {
    space.check_fn(f.len())?;
    space.check_fn(g.len())?;
    Ok(g.0
        .iter()
        .zip(&f.0)
        .zip(&space.weights)
        .map(|((a, b), w)| a * b * w)
        .sum())
}

/// Points where `f` vanishes, in index order.
pub fn zero_set(f: &L1Function) -> SubsetMask {
    SubsetMask::from_predicate(f.len(), |i| f.0[i] == 0.0)
}

/// The member of `J(f)` equal to `+-||f||_1` on the sign sets of `f` and to
/// the free parameter `a` on the zero set. `a` lists one value per zero of
/// `f`, in index order, each bounded by `||f||_1` in absolute value.
pub fn duality_selection(
    space: &FiniteMeasureSpace,
    f: &L1Function,
    a: &[f64],
) -> Result<LinftySelection> {
    let norm = l1_norm(space, f)?;
    if norm == 0.0 {
        return Err(Error::Degenerate(
            "f = theta; J(theta) = {theta*} (use the zero selection)".into(),
        ));
    }
    let zeros = zero_set(f);
    check_dims(a.len(), zeros.indices().len())?;
    check_finite(a, "a")?;
    if let Some(bad) = a.iter().find(|v| v.abs() > norm) {
        return Err(Error::Constraint(format!(
            "free value {bad} exceeds ||f||_1 = {norm}"
        )));
    }
    let mut free = a.iter();
    let values = f
        .0
        .iter()
        .map(|&v| {
            if v > 0.0 {
                norm
            } else if v < 0.0 {
                -norm
            } else {
                *free.next().expect("length checked")
            }
        })
        .collect();
    Ok(LinftySelection(values))
}

/// The selection with `a = 0` on the zero set, or `theta*` when `f = theta`.
pub fn canonical_selection(space: &FiniteMeasureSpace, f: &L1Function) -> Result<LinftySelection> {
    if l1_norm(space, f)? == 0.0 {
        return Ok(LinftySelection::zeros(f.len()));
    }
    let zeros = zero_set(f).indices().len();
    duality_selection(space, f, &vec![0.0; zeros])
}

/// Definition check for `g in J(f)`.
pub fn is_duality_member(
    space: &FiniteMeasureSpace,
    g: &LinftySelection,
    f: &L1Function,
    tol: f64,
) -> Result<bool> {
    let nf = l1_norm(space, f)?;
    let pair = pairing_l1(space, g, f)?;
    Ok((linf_norm(g) - nf).abs() <= tol && (pair - nf * nf).abs() <= tol)
}

/// Shape of the set `J(f)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualityClass {
    pub singleton: bool,
    /// Points where a selection may take any value in `[-||f||, ||f||]`.
    pub free_points: SubsetMask,
    /// The selection with zero on the free points.
    pub canonical: LinftySelection,
}

/// `J(f)` is a singleton iff `f` has no zeros (or `f = theta`, where
/// `J(theta) = {theta*}`); otherwise it is infinite with the zero set free.
pub fn duality_set_classify(space: &FiniteMeasureSpace, f: &L1Function) -> Result<DualityClass> {
    let canonical = canonical_selection(space, f)?;
    if f.is_zero() {
        return Ok(DualityClass {
            singleton: true,
            free_points: SubsetMask::default(),
            canonical,
        });
    }
    let free_points = zero_set(f);
    Ok(DualityClass {
        singleton: free_points.is_empty(),
        free_points,
        canonical,
    })
}

/// A nonnegative `f` acting on `L_inf` by integration, `Phi_f(k*) = <k*, f>`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SecondDualL1 {
    f: L1Function,
}

impl SecondDualL1 {
    pub fn apply(&self, space: &FiniteMeasureSpace, k: &LinftySelection) -> Result<f64> {
        pairing_l1(space, k, &self.f)
    }

    pub fn function(&self) -> &L1Function {
        &self.f
    }
}

pub fn embed_second_dual(space: &FiniteMeasureSpace, f: &L1Function) -> Result<SecondDualL1> {
    space.check_fn(f.len())?;
    if let Some(i) = f.0.iter().position(|&v| v < 0.0) {
        return Err(Error::NotPositive(format!("f[{i}] = {} < 0", f.0[i])));
    }
    Ok(SecondDualL1 { f: f.clone() })
}

/// Two disjoint normalized indicators with a midpoint of the same norm.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatSegment {
    pub f: L1Function,
    pub g: L1Function,
    pub midpoint_norm: f64,
}

/// `f = chi_A / mu(A)` and `g = chi_B / mu(B)` are distinct unit vectors
/// whose midpoint is again a unit vector, so the unit sphere contains a
/// segment.
pub fn strict_convexity_counterexample(
    space: &FiniteMeasureSpace,
    a: &SubsetMask,
    b: &SubsetMask,
) -> Result<FlatSegment> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Invalid("both masks must be nonempty".into()));
    }
    if a.intersects(b) {
        return Err(Error::Invalid("masks must be disjoint".into()));
    }
    let f = space.indicator(a)?.scale(1.0 / space.measure(a)?);
    let g = space.indicator(b)?.scale(1.0 / space.measure(b)?);
    let mid = f.add(&g)?.scale(0.5);
    let midpoint_norm = l1_norm(space, &mid)?;
    Ok(FlatSegment { f, g, midpoint_norm })
}

impl DualitySpace for FiniteMeasureSpace {
    type Point = L1Function;
    type Dual = LinftySelection;

    fn norm(&self, x: &L1Function) -> Result<f64> {
        l1_norm(self, x)
    }

    fn dual_norm(&self, d: &LinftySelection) -> Result<f64> {
        self.check_fn(d.len())?;
        Ok(linf_norm(d))
    }

    fn pairing(&self, d: &LinftySelection, x: &L1Function) -> Result<f64> {
        pairing_l1(self, d, x)
    }

    fn point_diff(&self, a: &L1Function, b: &L1Function) -> Result<L1Function> {
        a.sub(b)
    }

    fn dual_diff(&self, a: &LinftySelection, b: &LinftySelection) -> Result<LinftySelection> {
        a.sub(b)
    }

    fn is_member(&self, d: &LinftySelection, x: &L1Function, tol: f64) -> Result<bool> {
        is_duality_member(self, d, x, tol)
    }

    fn check_embeddable(&self, x: &L1Function) -> Result<()> {
        embed_second_dual(self, x).map(|_| ())
    }

    fn descriptor(&self) -> serde_json::Value {
        serde_json::json!({ "space": "l1", "weights": self.weights })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(w: &[f64]) -> FiniteMeasureSpace {
        FiniteMeasureSpace::new(w.to_vec()).unwrap()
    }

    #[test]
    fn norms() {
        let s = sp(&[1.0, 1.0, 1.0]);
        assert_eq!(l1_norm(&s, &s.function(vec![2.0, 0.0, -1.0]).unwrap()).unwrap(), 3.0);
        assert_eq!(l1_norm(&s, &L1Function::zeros(3)).unwrap(), 0.0);
        let s2 = sp(&[0.5, 2.0]);
        assert_eq!(l1_norm(&s2, &s2.function(vec![1.0, 1.0]).unwrap()).unwrap(), 2.5);
        assert_eq!(linf_norm(&s.selection(vec![3.0, -3.0, 1.0]).unwrap()), 3.0);
        assert_eq!(linf_norm(&LinftySelection::zeros(2)), 0.0);
        assert_eq!(linf_norm(&s2.selection(vec![-5.0, 2.0]).unwrap()), 5.0);
    }

    #[test]
    fn pairing_examples() {
        let s = sp(&[1.0, 1.0, 1.0]);
        let f = s.function(vec![2.0, 0.0, -1.0]).unwrap();
        let g = s.selection(vec![3.0, 0.0, -3.0]).unwrap();
        assert_eq!(pairing_l1(&s, &g, &f).unwrap(), 9.0);
        assert_eq!(pairing_l1(&s, &LinftySelection::zeros(3), &f).unwrap(), 0.0);
        let s2 = sp(&[1.0, 1.0]);
        let val = pairing_l1(
            &s2,
            &s2.selection(vec![1.0, 1.0]).unwrap(),
            &s2.function(vec![1.0, -1.0]).unwrap(),
        );
        assert_eq!(val.unwrap(), 0.0);
        assert!(pairing_l1(&s2, &LinftySelection::zeros(3), &L1Function::zeros(2)).is_err());
    }

    #[test]
    fn selection_examples() {
        let s = sp(&[1.0, 1.0, 1.0]);
        let f = s.function(vec![2.0, 0.0, -1.0]).unwrap();
        let j = duality_selection(&s, &f, &[1.5]).unwrap();
        assert_eq!(j.values(), &[3.0, 1.5, -3.0]);
        assert!(is_duality_member(&s, &j, &f, 1e-10).unwrap());

        let s2 = sp(&[1.0, 1.0]);
        let j = duality_selection(&s2, &s2.function(vec![1.0, 1.0]).unwrap(), &[]).unwrap();
        assert_eq!(j.values(), &[2.0, 2.0]);

        let f = s2.function(vec![0.0, -4.0]).unwrap();
        let j = duality_selection(&s2, &f, &[-4.0]).unwrap();
        assert_eq!(j.values(), &[-4.0, -4.0]);
        assert_eq!(pairing_l1(&s2, &j, &f).unwrap(), 16.0);
    }

    #[test]
    fn selection_errors() {
        let s = sp(&[1.0, 1.0, 1.0]);
        let f = s.function(vec![2.0, 0.0, -1.0]).unwrap();
        assert!(matches!(
            duality_selection(&s, &f, &[3.5]),
            Err(Error::Constraint(_))
        ));
        assert!(matches!(
            duality_selection(&s, &L1Function::zeros(3), &[0.0, 0.0, 0.0]),
            Err(Error::Degenerate(_))
        ));
        assert!(duality_selection(&s, &f, &[]).is_err());
    }

    #[test]
    fn membership_examples() {
        let s = sp(&[1.0, 1.0, 1.0]);
        let f = s.function(vec![2.0, 0.0, -1.0]).unwrap();
        let g = s.selection(vec![3.0, 1.5, -3.0]).unwrap();
        assert!(is_duality_member(&s, &g, &f, 1e-10).unwrap());
        let g = s.selection(vec![3.0, 5.0, -3.0]).unwrap();
        assert!(!is_duality_member(&s, &g, &f, 1e-10).unwrap());
        assert!(is_duality_member(&s, &LinftySelection::zeros(3), &L1Function::zeros(3), 1e-10).unwrap());
    }

    #[test]
    fn classify_examples() {
        let s = sp(&[1.0, 1.0, 1.0]);
        let c = duality_set_classify(&s, &s.function(vec![2.0, 0.0, -1.0]).unwrap()).unwrap();
        assert!(!c.singleton);
        assert_eq!(c.free_points.indices(), &[1]);
        assert_eq!(c.canonical.values(), &[3.0, 0.0, -3.0]);

        let s2 = sp(&[1.0, 1.0]);
        let c = duality_set_classify(&s2, &s2.function(vec![2.0, -1.0]).unwrap()).unwrap();
        assert!(c.singleton && c.free_points.is_empty());
        assert_eq!(c.canonical.values(), &[3.0, -3.0]);

        let c = duality_set_classify(&s2, &s2.function(vec![1.0, 1.0]).unwrap()).unwrap();
        assert!(c.singleton);
        assert_eq!(c.canonical.values(), &[2.0, 2.0]);

        let c = duality_set_classify(&s2, &L1Function::zeros(2)).unwrap();
        assert!(c.singleton && c.canonical.is_zero());
    }

    #[test]
    fn second_dual_examples() {
        let s = sp(&[1.0, 1.0]);
        let phi = embed_second_dual(&s, &s.function(vec![1.0, 0.0]).unwrap()).unwrap();
        assert_eq!(phi.apply(&s, &s.selection(vec![2.0, 7.0]).unwrap()).unwrap(), 2.0);
        let phi = embed_second_dual(&s, &L1Function::zeros(2)).unwrap();
        assert_eq!(phi.apply(&s, &s.selection(vec![2.0, 7.0]).unwrap()).unwrap(), 0.0);
        let phi = embed_second_dual(&s, &s.function(vec![2.0, 1.0]).unwrap()).unwrap();
        assert_eq!(phi.apply(&s, &s.selection(vec![3.0, 3.0]).unwrap()).unwrap(), 9.0);
        assert!(matches!(
            embed_second_dual(&s, &s.function(vec![1.0, -0.5]).unwrap()),
            Err(Error::NotPositive(_))
        ));
    }

    #[test]
    fn flat_segment_examples() {
        let s = sp(&[1.0, 1.0]);
        let r = strict_convexity_counterexample(&s, &vec![0].into(), &vec![1].into()).unwrap();
        assert_eq!(r.midpoint_norm, 1.0);
        assert_ne!(r.f, r.g);
        let s = sp(&[2.0, 0.5]);
        let r = strict_convexity_counterexample(&s, &vec![0].into(), &vec![1].into()).unwrap();
        assert_eq!(r.midpoint_norm, 1.0);
        assert_eq!(l1_norm(&s, &r.f).unwrap(), 1.0);
        assert_eq!(l1_norm(&s, &r.g).unwrap(), 1.0);
        assert!(strict_convexity_counterexample(&s, &vec![0, 1].into(), &vec![1].into()).is_err());
        assert!(strict_convexity_counterexample(&s, &vec![].into(), &vec![1].into()).is_err());
    }

    #[test]
    fn space_validation() {
        assert!(FiniteMeasureSpace::new(vec![]).is_err());
        assert!(FiniteMeasureSpace::new(vec![1.0, 0.0]).is_err());
        assert!(serde_json::from_str::<FiniteMeasureSpace>(r#"{"weights":[1,-1]}"#).is_err());
        let m: SubsetMask = serde_json::from_str("[2,0,2]").unwrap();
        assert_eq!(m.indices(), &[0, 2]);
        assert!(sp(&[1.0, 1.0]).measure(&m).is_err());
    }
}
