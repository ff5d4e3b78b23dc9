//! Mixed volumes by three independent routes and a dispatcher that cross-checks them.

pub mod cayley;
pub mod inductive;
pub mod polarization;
pub mod subdivision;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::polytope::Polytope;
use crate::rational::{factorial, fmt_rat, Rat};

pub use cayley::{cayley, cayley_support_face, CayleyPolytope};
pub use inductive::mixed_volume_inductive;
pub use polarization::mixed_volume_polarization;
pub use subdivision::{
    mixed_volume_subdivision, pure_mixed_subdivision, regular_subdivision, Lifting, MixedCell, MixedSubdivision,
};

/// Checks that `ps` is a list of exactly `n` polytopes in ℝⁿ and returns `n`.
pub fn check_square_collection(ps: &[Polytope]) -> Result<usize> {
    let first = ps.first().ok_or(Error::EmptyInput)?;
    let n = first.ambient_dim();
    if let Some(p) = ps.iter().find(|p| p.ambient_dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.ambient_dim(),
        });
    }
    if ps.len() != n {
        return Err(Error::InvalidArgument(format!(
            "a mixed volume in dimension {n} takes {n} polytopes, got {}",
            ps.len()
        )));
    }
    Ok(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Polarization,
    Subdivision,
    Inductive,
    All,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Polarization => "polarization",
            Method::Subdivision => "subdivision",
            Method::Inductive => "inductive",
            Method::All => "all",
        })
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "polarization" => Ok(Method::Polarization),
            "subdivision" => Ok(Method::Subdivision),
            "inductive" => Ok(Method::Inductive),
            "all" => Ok(Method::All),
            _ => Err(Error::InvalidArgument(format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MethodRun {
    pub method: Method,
    /// `n! · V`.
    pub normalized: Rat,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct MixedVolumeReport {
    /// `V(P₁,…,Pₙ)`.
    pub value: Rat,
    pub normalized: Rat,
    pub runs: Vec<MethodRun>,
    /// Methods requested but not applicable (inductive on non-lattice input).
    pub skipped: Vec<Method>,
}

impl MixedVolumeReport {
    pub fn agree(&self) -> bool {
        self.runs.iter().all(|r| r.normalized == self.normalized)
    }

    /// Timings are left out so that output is reproducible.
    pub fn to_json(&self) -> Value {
        json!({
            "normalized": fmt_rat(&self.normalized),
            "euclidean": fmt_rat(&self.value),
            "runs": self.runs.iter().map(|r| json!({
                "method": r.method.to_string(),
                "normalized": fmt_rat(&r.normalized),
            })).collect::<Vec<_>>(),
            "agree": self.agree(),
            "skipped": self.skipped.iter().map(Method::to_string).collect::<Vec<_>>(),
        })
    }
}

fn run(method: Method, ps: &[Polytope], seed: u64) -> Result<Rat> {
    let n = ps.len();
    let nf = Rat::from_integer(factorial(n));
    match method {
        Method::Polarization => Ok(mixed_volume_polarization(ps)? * nf),
        Method::Subdivision => Ok(pure_mixed_subdivision(ps, seed)?.normalized_mixed_volume()),
        Method::Inductive => Ok(Rat::from_integer(mixed_volume_inductive(ps)?)),
        Method::All => unreachable!("expanded by the caller"),
    }
}

/// Mixed volume by the chosen method; `All` runs every applicable method and requires
/// exact agreement.
pub fn mixed_volume(ps: &[Polytope], method: Method, seed: u64) -> Result<MixedVolumeReport> {
    let n = check_square_collection(ps)?;
    let lattice = ps.iter().all(Polytope::is_lattice);
    let mut skipped = Vec::new();
    let methods = match method {
        Method::All => {
            let mut m = vec![Method::Polarization, Method::Subdivision];
            if lattice {
                m.push(Method::Inductive);
            } else {
                skipped.push(Method::Inductive);
            }
            m
        }
        Method::Inductive if !lattice => return Err(Error::NotLattice),
        m => vec![m],
    };
    let mut runs = Vec::new();
    for m in methods {
        let start = Instant::now();
        let normalized = run(m, ps, seed)?;
        runs.push(MethodRun {
            method: m,
            normalized,
            elapsed: start.elapsed(),
        });
    }
    let normalized = runs[0].normalized.clone();
    if let Some(bad) = runs.iter().find(|r| r.normalized != normalized) {
        let detail: Vec<String> = runs.iter().map(|r| format!("{}={}", r.method, r.normalized)).collect();
        return Err(Error::CrossCheck(format!(
            "mixed volume methods disagree ({}), first mismatch in {}",
            detail.join(", "),
            bad.method
        )));
    }
    Ok(MixedVolumeReport {
        value: &normalized / Rat::from_integer(factorial(n)),
        normalized,
        runs,
        skipped,
    })
}

/// `n! · V` with every applicable method, cross-checked.
pub fn normalized_mixed_volume(ps: &[Polytope]) -> Result<Rat> {
    Ok(mixed_volume(ps, Method::All, 0)?.normalized)
}
