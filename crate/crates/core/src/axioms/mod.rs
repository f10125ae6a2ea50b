//! Fairness axiom checkers.
//!
//! Each checker returns an [`AxiomReport`] that carries a concrete witness
//! whenever the axiom is violated. Witnesses can be re-verified against the
//! plain definition with [`verify_witness`], which shares no search code
//! with the checkers.

mod clique;
mod pf;
mod prf;
mod up;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Instance, Outcome, Point};

pub use pf::{
    check_core, check_core_bruteforce, check_pf, check_pf_against, check_pf_bruteforce,
    midpoint_deviations,
};
pub use prf::{check_prf2, check_prf3, check_prf_discrete, check_prf_unconstrained, PrfMethod};
pub use up::check_up;

/// Largest instance for which subset enumeration is attempted.
pub const EXHAUSTIVE_LIMIT: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axiom {
    #[serde(rename = "UP")]
    Up,
    #[serde(rename = "PRF_UNC")]
    PrfUnconstrained,
    #[serde(rename = "PRF_DISC")]
    PrfDiscrete,
    #[serde(rename = "PRF2")]
    Prf2,
    #[serde(rename = "PRF3")]
    Prf3,
    #[serde(rename = "PF")]
    Pf,
    #[serde(rename = "CORE")]
    Core,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::Up => "UP",
            Axiom::PrfUnconstrained => "PRF_UNC",
            Axiom::PrfDiscrete => "PRF_DISC",
            Axiom::Prf2 => "PRF2",
            Axiom::Prf3 => "PRF3",
            Axiom::Pf => "PF",
            Axiom::Core => "CORE",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "up" => Axiom::Up,
            "prf_unc" | "prf-unc" => Axiom::PrfUnconstrained,
            "prf_disc" | "prf-disc" => Axiom::PrfDiscrete,
            "prf2" => Axiom::Prf2,
            "prf3" => Axiom::Prf3,
            "pf" => Axiom::Pf,
            "core" => Axiom::Core,
            other => {
                return Err(Error::Unknown {
                    kind: "axiom",
                    name: other.to_string(),
                })
            }
        })
    }
}

/// How a verdict was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMethod {
    Polynomial,
    Exhaustive,
    Clique,
    /// One-sided: "satisfied" only means no violation was found.
    Sampling,
}

/// A concrete violation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// The deviating or under-served agent group `S`, ascending.
    pub agents: Vec<usize>,
    /// Deviation candidate for PF and CORE.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidate: Option<usize>,
    /// Deviation location when it is not one of the instance's candidates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<Point>,
    /// Neighbourhood radius `y` for UP and the PRF family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    /// Number of centers the group is entitled to (`l` or `l'`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub required: Option<usize>,
    /// Number of centers the group actually sees.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub found: Option<usize>,
}

impl Witness {
    fn group(agents: Vec<usize>) -> Self {
        Witness {
            agents,
            candidate: None,
            location: None,
            radius: None,
            required: None,
            found: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub satisfied: bool,
    pub method: CheckMethod,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl AxiomReport {
    fn from_witness(axiom: Axiom, method: CheckMethod, witness: Option<Witness>) -> Self {
        AxiomReport {
            axiom,
            satisfied: witness.is_none(),
            method,
            witness,
        }
    }

    /// True when the verdict holds for every group, not just sampled ones.
    pub fn is_definitive(&self) -> bool {
        !self.satisfied || self.method != CheckMethod::Sampling
    }
}

pub(crate) fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// Largest `l` with `|S| >= l * n / k`.
pub(crate) fn entitlement(size: usize, n: usize, k: usize) -> usize {
    size * k / n
}

pub(crate) fn check_exhaustive_size(inst: &Instance) -> Result<()> {
    if inst.n() > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge {
            n: inst.n(),
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    Ok(())
}

pub(crate) fn mask_members(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask & (1 << i) != 0).collect()
}

/// Re-checks a violation witness directly against the axiom's definition.
///
/// Returns `Ok(false)` when the report is satisfied or its witness does not
/// exhibit a violation.
pub fn verify_witness(inst: &Instance, x: &Outcome, report: &AxiomReport) -> Result<bool> {
    let Some(w) = &report.witness else {
        return Ok(false);
    };
    let (n, k) = (inst.n(), inst.k());
    let s = &w.agents;
    if s.is_empty() || s.iter().any(|&i| i >= n) {
        return Ok(false);
    }
    let q = ceil_div(n, k);
    let d_x = |i: usize| x.distance_to(inst, i);
    let ok = match report.axiom {
        Axiom::Pf | Axiom::Core => {
            let dev: Vec<f64> = match (&w.location, w.candidate) {
                (Some(p), _) => s
                    .iter()
                    .map(|&i| inst.metric().distance(&inst.agents()[i], p))
                    .collect::<Result<_>>()?,
                (None, Some(c)) if c < inst.m() => s.iter().map(|&i| inst.dist(i, c)).collect(),
                _ => return Ok(false),
            };
            if s.len() < q {
                false
            } else if report.axiom == Axiom::Pf {
                s.iter().zip(&dev).all(|(&i, &d)| d < d_x(i))
            } else {
                let gain: f64 = s.iter().zip(&dev).map(|(&i, &d)| d_x(i) - d).sum();
                gain > 0.0
            }
        }
        Axiom::Up => {
            let aa = inst.agent_distances()?;
            let rep = s[0];
            let coincident = s.iter().all(|&i| aa[rep * n + i] == 0.0);
            let Some(l) = w.required else {
                return Ok(false);
            };
            if !coincident || l == 0 || l > inst.m() || s.len() < l * q {
                false
            } else {
                let mut row = inst.agent_row(rep).to_vec();
                row.sort_by(f64::total_cmp);
                let threshold = row[l - 1];
                let got = x
                    .selected()
                    .iter()
                    .filter(|&&c| inst.dist(rep, c) <= threshold)
                    .count();
                got < l
            }
        }
        Axiom::PrfUnconstrained => {
            let aa = inst.agent_distances()?;
            let y = s
                .iter()
                .flat_map(|&i| s.iter().map(move |&j| aa[i * n + j]))
                .fold(0.0, f64::max);
            let seen = x
                .selected()
                .iter()
                .filter(|&&c| s.iter().any(|&i| inst.dist(i, c) <= y))
                .count();
            let Some(l) = w.required else {
                return Ok(false);
            };
            s.len() * k >= l * n && seen < l
        }
        Axiom::PrfDiscrete | Axiom::Prf2 | Axiom::Prf3 => {
            let Some(y) = w.radius else { return Ok(false) };
            let common = (0..inst.m())
                .filter(|&c| s.iter().all(|&i| inst.dist(i, c) <= y))
                .count();
            let demand = entitlement(s.len(), n, k).min(common);
            let near = |i: usize, c: usize| inst.dist(i, c) <= y;
            let seen = match report.axiom {
                Axiom::PrfDiscrete => x
                    .selected()
                    .iter()
                    .filter(|&&c| s.iter().any(|&i| near(i, c)))
                    .count(),
                Axiom::Prf2 => s
                    .iter()
                    .map(|&i| x.selected().iter().filter(|&&c| near(i, c)).count())
                    .max()
                    .unwrap_or(0),
                _ => x
                    .selected()
                    .iter()
                    .filter(|&&c| s.iter().all(|&i| near(i, c)))
                    .count(),
            };
            seen < demand
        }
    };
    Ok(ok)
}
