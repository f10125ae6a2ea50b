//! JSON description of an experiment sweep.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::dataset::{load_csv, DatasetSpec};
use super::generators::generate;
use crate::error::{Error, Result};
use crate::evaluation::{Algorithm, ExperimentGrid, MsdMetric, NamedInstance};
use crate::instance::Metric;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "lowercase")]
pub enum DatasetSource {
    Generator {
        generator: String,
        #[serde(default)]
        params: BTreeMap<String, f64>,
    },
    Csv {
        #[serde(flatten)]
        spec: DatasetSpec,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridDataset {
    pub name: String,
    #[serde(flatten)]
    pub source: DatasetSource,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridFile {
    pub datasets: Vec<GridDataset>,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<Algorithm>,
    #[serde(default = "one")]
    pub k_min: usize,
    pub k_max: usize,
    #[serde(default = "default_metrics")]
    pub metrics: Vec<MsdMetric>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default = "yes")]
    pub squared: bool,
    #[serde(default = "yes")]
    pub pad_greedy: bool,
    #[serde(default = "default_metric")]
    pub metric: Metric,
}

fn default_algorithms() -> Vec<Algorithm> {
    vec![Algorithm::Prf, Algorithm::KMeansPP, Algorithm::Greedy]
}

fn default_metrics() -> Vec<MsdMetric> {
    MsdMetric::ALL.to_vec()
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

fn default_metric() -> Metric {
    Metric::Euclidean
}

fn one() -> usize {
    1
}

fn yes() -> bool {
    true
}

impl GridFile {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Loads every dataset. Relative CSV paths are taken from `base`.
    pub fn resolve(&self, base: &Path) -> Result<ExperimentGrid> {
        let mut datasets = Vec::with_capacity(self.datasets.len());
        for ds in &self.datasets {
            let instance = match &ds.source {
                DatasetSource::Generator { generator, params } => {
                    let mut params = params.clone();
                    params.insert("k".into(), self.k_min.max(1) as f64);
                    generate(generator, &params)?
                }
                DatasetSource::Csv { spec } => {
                    let mut spec = spec.clone();
                    if spec.path.is_relative() {
                        spec.path = base.join(&spec.path);
                    }
                    load_csv(&spec, self.k_min.max(1), self.metric)?
                }
            };
            datasets.push(NamedInstance {
                name: ds.name.clone(),
                instance,
            });
        }
        Ok(ExperimentGrid {
            datasets,
            algorithms: self.algorithms.clone(),
            k_min: self.k_min,
            k_max: self.k_max,
            metrics: self.metrics.clone(),
            seeds: self.seeds.clone(),
            squared: self.squared,
            pad_greedy: self.pad_greedy,
        })
    }

    /// Reads and resolves a grid file relative to its own directory.
    pub fn load(path: &Path) -> Result<ExperimentGrid> {
        let base: PathBuf = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::read(path)?.resolve(&base)
    }
}
