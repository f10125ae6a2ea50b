//! Self-contained JSON record of one clustering run.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::dataset::instance_digest;
use crate::axioms::AxiomReport;
use crate::engine::SweepRound;
use crate::error::{Error, Result};
use crate::evaluation::Algorithm;
use crate::instance::{Instance, Metric, Mode, Outcome, Point};

pub const SCHEMA_VERSION: u32 = 1;

/// Everything needed to rebuild an [`Instance`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceData {
    pub mode: Mode,
    pub metric: Metric,
    pub k: usize,
    pub agents: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidates: Option<Vec<Point>>,
    /// Agent-to-candidate matrix, only for precomputed metrics.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distances: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agent_distances: Option<Vec<Vec<f64>>>,
}

fn rows(flat: &[f64], width: usize) -> Vec<Vec<f64>> {
    flat.chunks(width.max(1)).map(<[f64]>::to_vec).collect()
}

impl InstanceData {
    pub fn from_instance(inst: &Instance) -> Self {
        let precomputed = inst.metric() == Metric::Precomputed;
        let (distances, agent_distances) = if precomputed {
            let ac = (0..inst.n()).map(|i| inst.agent_row(i).to_vec()).collect();
            let aa = match inst.mode() {
                Mode::Discrete => inst.agent_distances().ok().map(|d| rows(d, inst.n())),
                Mode::Unconstrained => None,
            };
            (Some(ac), aa)
        } else {
            (None, None)
        };
        InstanceData {
            mode: inst.mode(),
            metric: inst.metric(),
            k: inst.k(),
            agents: if precomputed {
                Vec::new()
            } else {
                inst.agents().to_vec()
            },
            candidates: (inst.mode() == Mode::Discrete && !precomputed)
                .then(|| inst.candidates().to_vec()),
            distances,
            agent_distances,
        }
    }

    pub fn to_instance(&self) -> Result<Instance> {
        match (self.metric, self.mode) {
            (Metric::Precomputed, mode) => {
                let ac = self.distances.clone().ok_or_else(|| {
                    Error::InvalidInstance("precomputed instance without distances".into())
                })?;
                Instance::precomputed(ac, self.agent_distances.clone(), self.k, mode)
            }
            (metric, Mode::Unconstrained) => {
                Instance::unconstrained(self.agents.clone(), self.k, metric)
            }
            (metric, Mode::Discrete) => {
                let cands = self.candidates.clone().ok_or_else(|| {
                    Error::InvalidInstance("discrete instance without candidates".into())
                })?;
                Instance::discrete(self.agents.clone(), cands, self.k, metric)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema_version: u32,
    pub instance_digest: String,
    pub algorithm: Algorithm,
    pub k: usize,
    pub seed: u64,
    /// Candidate indices in selection order.
    pub selected: Vec<usize>,
    /// Coordinates of the selected candidates; empty for precomputed metrics.
    pub coordinates: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<SweepRound>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub underfilled: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub padded: Option<bool>,
    #[serde(default)]
    pub reports: Vec<AxiomReport>,
    /// Metric name to value; `null` when undefined for this outcome.
    #[serde(default)]
    pub metrics: BTreeMap<String, Option<f64>>,
    #[serde(default = "squared_default")]
    pub squared: bool,
    pub instance: InstanceData,
}

fn squared_default() -> bool {
    true
}

impl RunRecord {
    pub fn new(inst: &Instance, algorithm: Algorithm, seed: u64, outcome: &Outcome) -> Self {
        let coordinates = if inst.metric() == Metric::Precomputed {
            Vec::new()
        } else {
            outcome
                .selected()
                .iter()
                .map(|&c| inst.candidates()[c].clone())
                .collect()
        };
        RunRecord {
            schema_version: SCHEMA_VERSION,
            instance_digest: instance_digest(inst),
            algorithm,
            k: inst.k(),
            seed,
            selected: outcome.selected().to_vec(),
            coordinates,
            trace: None,
            underfilled: None,
            padded: None,
            reports: Vec::new(),
            metrics: BTreeMap::new(),
            squared: true,
            instance: InstanceData::from_instance(inst),
        }
    }

    /// Rebuilds the instance and outcome, checking the digest and schema.
    pub fn restore(&self) -> Result<(Instance, Outcome)> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidInstance(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let inst = self.instance.to_instance()?;
        let digest = instance_digest(&inst);
        if digest != self.instance_digest {
            return Err(Error::InvalidInstance(format!(
                "instance digest mismatch: record has {}, data hashes to {digest}",
                self.instance_digest
            )));
        }
        let x = Outcome::new(&inst, self.selected.clone())?;
        Ok((inst, x))
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(serde_json::from_str(&text)?)
    }
}
