//! JSON scenario records: a space, a catalogued construction, its
//! parameters and an optional schedule, run into certificate records.

use std::fmt;

use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::certificate::{certify_nonmembership, CertificateRecord};
use super::limit::Schedule;
use super::witness::{self, Witness};
use super::Tolerances;
use crate::c01::{atomic_duality_measure, plateau_duality_measure, C01Space, PwlFunction, RcaMeasure};
use crate::error::{Error, Result};
use crate::l1::{FiniteMeasureSpace, L1Function, LinftySelection, SubsetMask};
use crate::lp::{LpSpace, LpVector};
use crate::space::DualitySpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremId {
    Thm31,
    Thm32,
    Thm33,
    Thm45Case1,
    Thm45Case2,
    Thm46,
    Thm47,
    Cor48,
    Thm53,
    Thm54,
    Thm55,
    Thm56,
    Cor57,
    Thm58,
}

impl TheoremId {
    pub const ALL: [TheoremId; 14] = [
        TheoremId::Thm31,
        TheoremId::Thm32,
        TheoremId::Thm33,
        TheoremId::Thm45Case1,
        TheoremId::Thm45Case2,
        TheoremId::Thm46,
        TheoremId::Thm47,
        TheoremId::Cor48,
        TheoremId::Thm53,
        TheoremId::Thm54,
        TheoremId::Thm55,
        TheoremId::Thm56,
        TheoremId::Cor57,
        TheoremId::Thm58,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::Thm31 => "thm31",
            TheoremId::Thm32 => "thm32",
            TheoremId::Thm33 => "thm33",
            TheoremId::Thm45Case1 => "thm45_case1",
            TheoremId::Thm45Case2 => "thm45_case2",
            TheoremId::Thm46 => "thm46",
            TheoremId::Thm47 => "thm47",
            TheoremId::Cor48 => "cor48",
            TheoremId::Thm53 => "thm53",
            TheoremId::Thm54 => "thm54",
            TheoremId::Thm55 => "thm55",
            TheoremId::Thm56 => "thm56",
            TheoremId::Cor57 => "cor57",
            TheoremId::Thm58 => "thm58",
        }
    }

    /// The backend the construction lives in.
    pub fn space_kind(self) -> &'static str {
        match self {
            TheoremId::Thm31 | TheoremId::Thm32 | TheoremId::Thm33 => "lp",
            TheoremId::Thm45Case1
            | TheoremId::Thm45Case2
            | TheoremId::Thm46
            | TheoremId::Thm47
            | TheoremId::Cor48 => "l1",
            _ => "c01",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `{"space":"lp","p":..}`, `{"space":"l1","weights":[..]}` or `{"space":"c01"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "space", rename_all = "snake_case")]
pub enum SpaceDescriptor {
    Lp { p: f64 },
    L1 { weights: Vec<f64> },
    C01,
}

impl SpaceDescriptor {
    pub fn kind(&self) -> &'static str {
        match self {
            SpaceDescriptor::Lp { .. } => "lp",
            SpaceDescriptor::L1 { .. } => "l1",
            SpaceDescriptor::C01 => "c01",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub space: SpaceDescriptor,
    pub theorem: TheoremId,
    #[serde(default)]
    pub params: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Schedule>,
    /// Overrides the file-level tolerances.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioFile {
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default)]
    pub scenarios: Vec<Scenario>,
}

/// A dual measure given explicitly, as a convex combination of atoms on
/// `M(f)`, or as the uniform density on a plateau.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MeasureSpec {
    Atomic { atomic: AtomicSpec },
    Plateau { plateau: PlateauSpec },
    Explicit(RcaMeasure),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomicSpec {
    pub points: Vec<f64>,
    pub alphas: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlateauSpec {
    pub a: f64,
    pub b: f64,
}

impl MeasureSpec {
    pub fn resolve(&self, f: &PwlFunction) -> Result<RcaMeasure> {
        match self {
            MeasureSpec::Explicit(mu) => Ok(mu.clone()),
            MeasureSpec::Atomic { atomic } => atomic_duality_measure(f, &atomic.points, &atomic.alphas),
            MeasureSpec::Plateau { plateau } => plateau_duality_measure(f, plateau.a, plateau.b),
        }
    }
}

fn resolve_opt(spec: &Option<MeasureSpec>, f: &PwlFunction) -> Result<Option<RcaMeasure>> {
    spec.as_ref().map(|s| s.resolve(f)).transpose()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Thm31Params {
    x: LpVector,
    w: LpVector,
    #[serde(default)]
    m: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Thm32Params {
    x: LpVector,
    y: LpVector,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Thm33Params {
    x: LpVector,
    a: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Thm45Case1Params {
    f: L1Function,
    k: LinftySelection,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Thm45Case2Params {
    f: L1Function,
    k: LinftySelection,
    d: SubsetMask,
    #[serde(default)]
    a: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Thm46Params {
    k: LinftySelection,
    d: SubsetMask,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Thm47Params {
    f: L1Function,
    d: SubsetMask,
    #[serde(default)]
    a: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Cor48Params {
    f: L1Function,
    u: LinftySelection,
    e: SubsetMask,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Thm53Params {
    f: PwlFunction,
    #[serde(default)]
    mu: Option<MeasureSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Thm54Params {
    f: PwlFunction,
    lambda: RcaMeasure,
    #[serde(default)]
    mu: Option<MeasureSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Thm55Params {
    f: PwlFunction,
    lambda: RcaMeasure,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Thm56Params {
    f: PwlFunction,
    u: PwlFunction,
    #[serde(default)]
    points: Option<Vec<f64>>,
    #[serde(default)]
    alphas: Option<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Cor57Params {
    f: PwlFunction,
    u: PwlFunction,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Thm58Params {
    f: PwlFunction,
    c: f64,
    #[serde(default)]
    mu: Option<MeasureSpec>,
}

fn params<T: DeserializeOwned>(theorem: TheoremId, value: &serde_json::Value) -> Result<T> {
    serde_json::from_value(value.clone())
        .map_err(|e| Error::Invalid(format!("{theorem} parameters: {e}")))
}

fn certify<S: DualitySpace>(
    theorem: TheoremId,
    space: &S,
    w: Witness<S>,
    schedule: Option<Schedule>,
    tol: &Tolerances,
) -> Result<CertificateRecord> {
    let cert = certify_nonmembership(space, w.query, &w.curve, w.claim, schedule, tol)?;
    Ok(cert.record(theorem.as_str(), space, tol))
}

impl Scenario {
    /// Builds the witness for this record and certifies it.
    pub fn run(&self, file_tol: &Tolerances) -> Result<CertificateRecord> {
        let tol = self.tolerances.unwrap_or(*file_tol);
        let th = self.theorem;
        if th.space_kind() != self.space.kind() {
            return Err(Error::Invalid(format!(
                "{th} lives in the {} space, scenario names {}",
                th.space_kind(),
                self.space.kind()
            )));
        }
        let sched = self.schedule;
        if let Some(s) = &sched {
            s.validate()?;
        }
        let v = &self.params;
        match &self.space {
            SpaceDescriptor::Lp { p } => {
                let space = LpSpace::new(*p)?;
                let w = match th {
                    TheoremId::Thm31 => {
                        let a: Thm31Params = params(th, v)?;
                        witness::lp::thm31(space, a.x, a.w, a.m, &tol)?
                    }
                    TheoremId::Thm32 => {
                        let a: Thm32Params = params(th, v)?;
                        witness::lp::thm32(space, a.x, a.y, &tol)?
                    }
                    TheoremId::Thm33 => {
                        let a: Thm33Params = params(th, v)?;
                        witness::lp::thm33(space, a.x, a.a, &tol)?
                    }
                    _ => unreachable!("space kind checked"),
                };
                certify(th, &space, w, sched, &tol)
            }
            SpaceDescriptor::L1 { weights } => {
                let space = FiniteMeasureSpace::new(weights.clone())?;
                let s = space.clone();
                let w = match th {
                    TheoremId::Thm45Case1 => {
                        let a: Thm45Case1Params = params(th, v)?;
                        witness::l1::thm45_case1(s, a.f, a.k, &tol)?
                    }
                    TheoremId::Thm45Case2 => {
                        let a: Thm45Case2Params = params(th, v)?;
                        witness::l1::thm45_case2(s, a.f, a.k, a.d, a.a, &tol)?
                    }
                    TheoremId::Thm46 => {
                        let a: Thm46Params = params(th, v)?;
                        witness::l1::thm46(s, a.k, a.d, &tol)?
                    }
                    TheoremId::Thm47 => {
                        let a: Thm47Params = params(th, v)?;
                        witness::l1::thm47(s, a.f, a.d, a.a, &tol)?
                    }
                    TheoremId::Cor48 => {
                        let a: Cor48Params = params(th, v)?;
                        witness::l1::cor48(s, a.f, a.u, a.e, &tol)?
                    }
                    _ => unreachable!("space kind checked"),
                };
                certify(th, &space, w, sched, &tol)
            }
            SpaceDescriptor::C01 => {
                let w = match th {
                    TheoremId::Thm53 => {
                        let a: Thm53Params = params(th, v)?;
                        let mu = resolve_opt(&a.mu, &a.f)?;
                        witness::c01::thm53(a.f, mu, &tol)?
                    }
                    TheoremId::Thm54 => {
                        let a: Thm54Params = params(th, v)?;
                        let mu = resolve_opt(&a.mu, &a.f)?;
                        witness::c01::thm54(a.f, a.lambda, mu, &tol)?
                    }
                    TheoremId::Thm55 => {
                        let a: Thm55Params = params(th, v)?;
                        witness::c01::thm55(a.f, a.lambda, &tol)?.0
                    }
                    TheoremId::Thm56 => {
                        let a: Thm56Params = params(th, v)?;
                        witness::c01::thm56(a.f, a.u, a.points, a.alphas, &tol)?
                    }
                    TheoremId::Cor57 => {
                        let a: Cor57Params = params(th, v)?;
                        witness::c01::cor57(a.f, a.u, &tol)?
                    }
                    TheoremId::Thm58 => {
                        let a: Thm58Params = params(th, v)?;
                        let mu = resolve_opt(&a.mu, &a.f)?;
                        witness::c01::thm58(a.f, a.c, mu, &tol)?
                    }
                    _ => unreachable!("space kind checked"),
                };
                certify(th, &C01Space, w, sched, &tol)
            }
        }
    }
}

impl ScenarioFile {
    /// Runs every scenario (concurrently) and returns results in input order.
    pub fn run(&self) -> Vec<Result<CertificateRecord>> {
        self.scenarios
            .par_iter()
            .map(|s| s.run(&self.tolerances))
            .collect()
    }
}
