use duality::c01::{plateau_duality_measure, PwlFunction, RcaMeasure};
use duality::engine::scenario::{Scenario, ScenarioFile, TheoremId};
use duality::engine::witness::{c01, l1, lp};
use duality::engine::{
    certify_nonmembership, estimate_limit, falsify_membership_search, quotient, verify_record,
    CoderivativeQuery, GraphPair, ProbeCurve, Schedule, SecondDualArg, Tolerances, Verdict,
};
use duality::l1::{FiniteMeasureSpace, SubsetMask};
use duality::lp::{LpSpace, LpVector};
use duality::{DualitySpace, Error};
use serde_json::json;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn v(c: &[f64]) -> LpVector {
    LpVector::new(c.to_vec()).unwrap()
}

fn certify<S: DualitySpace>(space: &S, w: duality::engine::Witness<S>) -> (f64, f64, Verdict) {
    let claim = w.claim;
    let cert = certify_nonmembership(space, w.query, &w.curve, claim, None, &tol()).unwrap();
    (cert.estimate.limit, claim.bound, cert.verdict)
}

#[test]
fn thm32_limit_is_half() {
    let s = LpSpace::new(2.0).unwrap();
    let w = lp::thm32(s, v(&[1.0, 0.0]), v(&[1.0, 0.0]), &tol()).unwrap();
    let sched = Schedule::new(0.5, 0.5, 20).unwrap();
    let est = estimate_limit(&s, &w.query, &w.curve, Some(sched), &tol()).unwrap();
    assert!((est.limit - 0.5).abs() < 1e-12);
    assert!(est.settled && est.membership_ok && est.converging);
    let (limit, bound, verdict) = certify(&s, w);
    assert_eq!(verdict, Verdict::Certified);
    assert!((limit - bound).abs() < 1e-12);
}

#[test]
fn thm31_at_origin() {
    for p in [1.3, 2.0, 3.5] {
        let s = LpSpace::new(p).unwrap();
        let w = lp::thm31(s, v(&[0.0, 0.0, 0.0]), v(&[0.2, 1.0, -0.5]), None, &tol()).unwrap();
        let (limit, bound, verdict) = certify(&s, w);
        assert_eq!(bound, 0.5);
        assert!((limit - 0.5).abs() < 1e-9, "p = {p}: {limit}");
        assert_eq!(verdict, Verdict::Certified);
    }
}

#[test]
fn thm31_negative_coordinate_flips_direction() {
    let s = LpSpace::new(2.0).unwrap();
    let w = lp::thm31(s, v(&[1.0, 2.0]), v(&[-3.0, 0.0]), None, &tol()).unwrap();
    let (limit, bound, verdict) = certify(&s, w);
    assert_eq!(bound, 1.5);
    assert!((limit - 1.5).abs() < 1e-9);
    assert_eq!(verdict, Verdict::Certified);
}

#[test]
fn thm31_general_point_is_positive() {
    let s = LpSpace::new(3.0).unwrap();
    let w = lp::thm31(s, v(&[1.0, -2.0, 0.5]), v(&[0.3, 0.0, 1.0]), None, &tol()).unwrap();
    let est = estimate_limit(&s, &w.query, &w.curve, None, &tol()).unwrap();
    assert!(est.tail().iter().all(|&q| q > 0.0));
    assert!(est.settled && est.tail_monotone);
    assert!(est.slope_bound.is_finite());
}

#[test]
fn thm33_hand_value() {
    let s = LpSpace::new(2.0).unwrap();
    let w = lp::thm33(s, v(&[1.0, 0.0]), 3.0, &tol()).unwrap();
    assert_eq!(w.claim.bound, 1.0);
    let (limit, _, verdict) = certify(&s, w);
    assert!((limit - 1.0).abs() < 1e-12);
    assert_eq!(verdict, Verdict::Certified);
    assert!(matches!(lp::thm33(s, v(&[1.0, 0.0]), 1.0, &tol()), Err(Error::Hypothesis(_))));
}

#[test]
fn zero_query_is_never_certified() {
    let s = LpSpace::new(2.0).unwrap();
    let x = v(&[1.0, 0.0]);
    let base = GraphPair::new(x.clone(), x.clone());
    let q = CoderivativeQuery::new(&s, base, SecondDualArg::Zero, v(&[0.0, 0.0]), 1e-9).unwrap();
    let curve = ProbeCurve::new("(1-t)x", 0.5, move |t| {
        let z = x.scale(1.0 - t);
        Ok(GraphPair::new(z.clone(), z))
    });
    let est = estimate_limit(&s, &q, &curve, None, &tol()).unwrap();
    assert_eq!(est.limit, 0.0);
    assert!(est.settled);
    let cert = certify_nonmembership(&s, q, &curve, duality::engine::Claim::positive(), None, &tol()).unwrap();
    assert_eq!(cert.verdict, Verdict::NotCertified);
}

#[test]
fn search_prefers_the_right_branch() {
    let s = LpSpace::new(2.0).unwrap();
    let x = v(&[1.0, 0.0]);
    let w = lp::thm32(s, x.clone(), v(&[1.0, 0.0]), &tol()).unwrap();
    let twin = ProbeCurve::new("(1+t)x", 0.5, move |t| {
        let z = x.scale(1.0 + t);
        Ok(GraphPair::new(z.clone(), z))
    });
    let best = falsify_membership_search(&s, &w.query, &[twin.clone(), w.curve.clone()], None, &tol()).unwrap();
    assert_eq!(best.curve_id, "(1-t)x");
    assert!((best.best_limit - 0.5).abs() < 1e-12);
    let only = falsify_membership_search(&s, &w.query, &[twin], None, &tol()).unwrap();
    assert_eq!(only.curve_id, "(1+t)x");
    assert!((only.best_limit + 0.5).abs() < 1e-12);
}

#[test]
fn l1_catalog_values() {
    let space = FiniteMeasureSpace::uniform(2).unwrap();
    let k = space.selection(vec![1.0, 0.0]).unwrap();
    let w = l1::thm46(space.clone(), k, SubsetMask::new(vec![0]), &tol()).unwrap();
    assert_eq!(w.claim.bound, 0.5);
    let (limit, _, verdict) = certify(&space, w);
    assert!((limit - 0.5).abs() < 1e-12);
    assert_eq!(verdict, Verdict::Certified);

    let f = space.function(vec![2.0, 1.0]).unwrap();
    let w = l1::thm47(space.clone(), f, SubsetMask::new(vec![0]), Some(1.5), &tol()).unwrap();
    assert_eq!(w.claim.bound, 3.0);
    let (limit, _, verdict) = certify(&space, w);
    assert!((limit - 3.0).abs() < 1e-9);
    assert_eq!(verdict, Verdict::Certified);
}

#[test]
fn l1_case2_all_sign_variants() {
    let space = FiniteMeasureSpace::new(vec![1.0, 0.5, 2.0, 1.0]).unwrap();
    let f = space.function(vec![1.0, -2.0, 0.5, 3.0]).unwrap();
    // <k, f> = 1 - 1 + 1 + 3 k_3
    let k = space.selection(vec![1.0, 1.0, 1.0, -1.0 / 3.0]).unwrap();
    let kf: f64 = duality::l1::pairing_l1(&space, &k, &f).unwrap();
    assert!(kf.abs() < 1e-12, "{kf}");
    for d in [vec![0], vec![1], vec![2], vec![3], vec![0, 2]] {
        let mask = SubsetMask::new(d.clone());
        let w = l1::thm45_case2(space.clone(), f.clone(), k.clone(), mask, None, &tol()).unwrap();
        let bound = w.claim.bound;
        let (limit, _, verdict) = certify(&space, w);
        assert!((limit - bound).abs() < 1e-9, "D = {d:?}: {limit} vs {bound}");
        assert_eq!(verdict, Verdict::Certified);
    }
}

#[test]
fn cor48_lower_bound() {
    let space = FiniteMeasureSpace::new(vec![1.0, 2.0, 0.5]).unwrap();
    let f = space.function(vec![1.0, 0.5, 2.0]).unwrap();
    // ||f|| = 3
    let u = space.selection(vec![4.0, 5.0, 3.5]).unwrap();
    let w = l1::cor48(space.clone(), f, u, SubsetMask::new(vec![0, 1]), &tol()).unwrap();
    assert_eq!(w.claim.bound, 0.5);
    let (limit, _, verdict) = certify(&space, w);
    // (1*1 + 2*2) / (2*3)
    assert!((limit - 5.0 / 6.0).abs() < 1e-9);
    assert_eq!(verdict, Verdict::Certified);
}

#[test]
fn c01_catalog_values() {
    let one = PwlFunction::constant(1.0);
    let mu = plateau_duality_measure(&one, 0.0, 1.0).unwrap();
    let w = c01::thm53(one.clone(), Some(mu.clone()), &tol()).unwrap();
    assert_eq!(w.claim.bound, 0.5);
    let (limit, _, verdict) = certify(&duality::c01::C01Space, w);
    assert!((limit - 0.5).abs() < 1e-12);
    assert_eq!(verdict, Verdict::Certified);

    let w = c01::thm58(one.clone(), 2.0, Some(mu.clone()), &tol()).unwrap();
    let q = w.curve.at(0.3).unwrap();
    assert!((quotient(&duality::c01::C01Space, &w.query, &q).unwrap() - 0.5).abs() < 1e-12);
    let (limit, bound, verdict) = certify(&duality::c01::C01Space, w);
    assert_eq!(bound, 0.5);
    assert!((limit - 0.5).abs() < 1e-12);
    assert_eq!(verdict, Verdict::Certified);

    let err = c01::thm58(one, 1.0, None, &tol()).unwrap_err();
    assert_eq!(err.to_string(), "hypothesis violated: c ≠ 1");
}

#[test]
fn thm55_branches() {
    let tent = PwlFunction::tent(0.5, 1.0).unwrap();
    let pos = RcaMeasure::atomic(vec![(0.2, 1.0), (0.9, 0.5)]).unwrap();
    let neg = pos.scale(-1.0);
    for (f, lambda, case) in [
        (tent.clone(), pos.clone(), c01::ShiftCase::Peak),
        (tent.clone(), neg.clone(), c01::ShiftCase::Trough),
        (tent.scale(-1.0), neg.clone(), c01::ShiftCase::Peak),
        (tent.scale(-1.0), pos.clone(), c01::ShiftCase::Trough),
        (PwlFunction::constant(0.0), pos.clone(), c01::ShiftCase::Zero),
        (PwlFunction::linear(1.0, -1.0), neg.clone(), c01::ShiftCase::Peak),
    ] {
        let (w, got) = c01::thm55(f, lambda, &tol()).unwrap();
        assert_eq!(got, case);
        let (limit, bound, verdict) = certify(&duality::c01::C01Space, w);
        assert_eq!(bound, 0.75);
        assert!((limit - 0.75).abs() < 1e-9, "{case:?}: {limit}");
        assert_eq!(verdict, Verdict::Certified);
    }
}

#[test]
fn thm56_and_endpoint_instance() {
    let f = PwlFunction::new(vec![0.0, 0.3, 0.6, 1.0], vec![0.0, 1.0, 1.0, 0.2]).unwrap();
    let u = PwlFunction::new(vec![0.0, 0.5, 1.0], vec![0.5, 3.0, 1.0]).unwrap();
    let w = c01::thm56(f, u, None, None, &tol()).unwrap();
    assert_eq!(w.claim.bound, 1.0);
    let (limit, _, verdict) = certify(&duality::c01::C01Space, w);
    assert!((limit - 1.0).abs() < 1e-9);
    assert_eq!(verdict, Verdict::Certified);

    let f = PwlFunction::linear(0.5, 1.0);
    let u = PwlFunction::new(vec![0.0, 0.5, 1.0], vec![0.0, 1.0, 4.0]).unwrap();
    let w = c01::cor57(f.clone(), u.clone(), &tol()).unwrap();
    assert_eq!(w.claim.bound, 1.5);
    let (_, _, verdict) = certify(&duality::c01::C01Space, w);
    assert_eq!(verdict, Verdict::Certified);
    assert!(c01::cor57(u, f, &tol()).is_err());
}

#[test]
fn scenario_round_trip_and_soundness() {
    let file: ScenarioFile = serde_json::from_value(json!({
        "scenarios": [
            {"space": {"space": "lp", "p": 2.0}, "theorem": "thm33", "params": {"x": [1.0, 0.0], "a": 3.0}},
            {"space": {"space": "l1", "weights": [1.0, 1.0]}, "theorem": "thm46", "params": {"k": [1.0, 0.0], "d": [0]}},
            {"space": {"space": "c01"}, "theorem": "thm53",
             "params": {"f": {"breakpoints": [0.0, 1.0], "values": [1.0, 1.0]}, "mu": {"plateau": {"a": 0.0, "b": 1.0}}}}
        ]
    }))
    .unwrap();
    let records: Vec<_> = file.run().into_iter().map(Result::unwrap).collect();
    let limits: Vec<f64> = records.iter().map(|r| r.estimated_limit).collect();
    for (got, want) in limits.iter().zip([1.0, 0.5, 0.5]) {
        assert!((got - want).abs() < 1e-9);
    }
    for r in &records {
        assert_eq!(r.verdict, Verdict::Certified);
        verify_record(r).unwrap();
        let back: duality::engine::CertificateRecord =
            serde_json::from_str(&serde_json::to_string(r).unwrap()).unwrap();
        assert_eq!(&back, r);
    }

    let mut tampered = records[0].clone();
    tampered.quotients[23] = -1.0;
    assert!(verify_record(&tampered).is_err());
}

#[test]
fn scenario_errors() {
    let bad_theorem = serde_json::from_value::<Scenario>(json!({
        "space": {"space": "lp", "p": 2.0}, "theorem": "thm99", "params": {}
    }));
    assert!(bad_theorem.is_err());

    let s: Scenario = serde_json::from_value(json!({
        "space": {"space": "c01"}, "theorem": "thm58",
        "params": {"f": {"breakpoints": [0.0, 1.0], "values": [1.0, 1.0]}, "c": 1.0}
    }))
    .unwrap();
    assert!(matches!(s.run(&tol()), Err(Error::Hypothesis(_))));

    let s: Scenario = serde_json::from_value(json!({
        "space": {"space": "c01"}, "theorem": "thm33", "params": {"x": [1.0], "a": 2.0}
    }))
    .unwrap();
    assert!(s.run(&tol()).is_err());
    assert_eq!(TheoremId::ALL.len(), 14);
}

#[test]
fn t0_beyond_window_is_shrunk() {
    let space = FiniteMeasureSpace::uniform(2).unwrap();
    let f = space.function(vec![2.0, 1.0]).unwrap();
    let w = l1::thm47(space.clone(), f, SubsetMask::new(vec![0]), Some(1.5), &tol()).unwrap();
    let sched = Schedule::new(5.0, 0.5, 24).unwrap();
    let est = estimate_limit(&space, &w.query, &w.curve, Some(sched), &tol()).unwrap();
    assert_eq!(est.t0_adjusted, Some(0.75));
    assert!((est.limit - 3.0).abs() < 1e-9);
}
