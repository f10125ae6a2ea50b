//! Mean squared distance to the `j` closest centers, and the experiment grid
//! comparing the selection engine against the baselines.

use std::collections::HashMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::baselines::{greedy_capture, kmeanspp};
use crate::engine::{select_prf_centers, SweepTrace};
use crate::error::{Error, Result};
use crate::instance::{nearest_j, Instance, Outcome};

/// Average over agents of the summed (squared, unless `squared` is false)
/// distances to their `j` closest selected centers.
pub fn msd_j(inst: &Instance, x: &Outcome, j: usize, squared: bool) -> Result<f64> {
    if j == 0 || j > x.len() {
        return Err(Error::NearestOutOfRange { j, len: x.len() });
    }
    let mut total = 0.0;
    for i in 0..inst.n() {
        for (_, d) in nearest_j(inst, i, x, j)? {
            total += if squared { d * d } else { d };
        }
    }
    Ok(total / inst.n() as f64)
}

/// The three reported columns: closest 1, closest `ceil(k/2)`, closest `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MsdMetric {
    #[serde(rename = "msd1")]
    Closest1,
    #[serde(rename = "msdhalfk")]
    ClosestHalfK,
    #[serde(rename = "msdk")]
    ClosestK,
}

impl MsdMetric {
    pub const ALL: [MsdMetric; 3] = [
        MsdMetric::Closest1,
        MsdMetric::ClosestHalfK,
        MsdMetric::ClosestK,
    ];

    pub fn j(self, k: usize) -> usize {
        match self {
            MsdMetric::Closest1 => 1,
            MsdMetric::ClosestHalfK => k.div_ceil(2),
            MsdMetric::ClosestK => k,
        }
    }

    /// `None` when the outcome has fewer than `j` centers.
    pub fn evaluate(self, inst: &Instance, x: &Outcome, squared: bool) -> Result<Option<f64>> {
        let j = self.j(inst.k());
        if j > x.len() {
            return Ok(None);
        }
        msd_j(inst, x, j, squared).map(Some)
    }
}

impl fmt::Display for MsdMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MsdMetric::Closest1 => "msd1",
            MsdMetric::ClosestHalfK => "msdhalfk",
            MsdMetric::ClosestK => "msdk",
        })
    }
}

impl FromStr for MsdMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "msd1" => Ok(MsdMetric::Closest1),
            "msdhalfk" => Ok(MsdMetric::ClosestHalfK),
            "msdk" => Ok(MsdMetric::ClosestK),
            other => Err(Error::Unknown {
                kind: "metric",
                name: other.into(),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "prf")]
    Prf,
    #[serde(rename = "kmeanspp")]
    KMeansPP,
    #[serde(rename = "greedy")]
    Greedy,
}

impl Algorithm {
    pub fn is_seeded(self) -> bool {
        self == Algorithm::KMeansPP
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Prf => "prf",
            Algorithm::KMeansPP => "kmeanspp",
            Algorithm::Greedy => "greedy",
        })
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "prf" => Ok(Algorithm::Prf),
            "kmeanspp" | "kmeans++" => Ok(Algorithm::KMeansPP),
            "greedy" | "alg_g" => Ok(Algorithm::Greedy),
            other => Err(Error::Unknown {
                kind: "algorithm",
                name: other.into(),
            }),
        }
    }
}

/// Output of running one algorithm on one instance.
#[derive(Clone, Debug)]
pub struct AlgorithmRun {
    pub outcome: Outcome,
    pub trace: Option<SweepTrace>,
    pub underfilled: Option<bool>,
    pub padded: Option<bool>,
}

/// Runs `algo`. `pad` applies to Greedy Capture only.
pub fn run_algorithm(
    algo: Algorithm,
    inst: &Instance,
    seed: u64,
    pad: bool,
) -> Result<AlgorithmRun> {
    Ok(match algo {
        Algorithm::Prf => {
            let (outcome, trace) = select_prf_centers(inst)?;
            AlgorithmRun {
                outcome,
                trace: Some(trace),
                underfilled: None,
                padded: None,
            }
        }
        Algorithm::KMeansPP => AlgorithmRun {
            outcome: kmeanspp(inst, seed)?,
            trace: None,
            underfilled: None,
            padded: None,
        },
        Algorithm::Greedy => {
            let g = greedy_capture(inst, pad)?;
            AlgorithmRun {
                outcome: g.outcome,
                trace: None,
                underfilled: Some(g.underfilled),
                padded: Some(g.padded),
            }
        }
    })
}

#[derive(Clone, Debug)]
pub struct NamedInstance {
    pub name: String,
    pub instance: Instance,
}

#[derive(Clone, Debug)]
pub struct ExperimentGrid {
    pub datasets: Vec<NamedInstance>,
    pub algorithms: Vec<Algorithm>,
    pub k_min: usize,
    pub k_max: usize,
    pub metrics: Vec<MsdMetric>,
    pub seeds: Vec<u64>,
    /// Squared distances (the default) or plain distances.
    pub squared: bool,
    /// Fill Greedy Capture outcomes up to `k`.
    pub pad_greedy: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub dataset: String,
    pub algorithm: Algorithm,
    pub k: usize,
    pub seed: u64,
    pub metric: MsdMetric,
    pub value: Option<f64>,
}

/// Average of one metric for one algorithm over the whole `k` range and all
/// seeds, with its relative difference to k-means++.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub dataset: String,
    pub algorithm: Algorithm,
    pub metric: MsdMetric,
    pub average: Option<f64>,
    pub cells: usize,
    pub missing: usize,
    /// `100 * (average - kmeanspp_average) / kmeanspp_average`.
    pub percent_vs_kmeanspp: Option<f64>,
}

/// Mean over seeds at one `k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub dataset: String,
    pub algorithm: Algorithm,
    pub metric: MsdMetric,
    pub k: usize,
    pub mean: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
}

impl ResultTable {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["dataset", "algorithm", "k", "seed", "metric", "value"])?;
        for r in &self.rows {
            w.write_record([
                r.dataset.clone(),
                r.algorithm.to_string(),
                r.k.to_string(),
                r.seed.to_string(),
                r.metric.to_string(),
                r.value.map(|v| v.to_string()).unwrap_or_default(),
            ])?;
        }
        w.flush().map_err(|e| Error::Io {
            path: "<results>".into(),
            source: e,
        })?;
        Ok(())
    }

    pub fn aggregates(&self) -> Vec<Aggregate> {
        let mut keys: Vec<(String, Algorithm, MsdMetric)> = Vec::new();
        let mut sums: HashMap<(String, Algorithm, MsdMetric), (f64, usize, usize)> = HashMap::new();
        for r in &self.rows {
            let key = (r.dataset.clone(), r.algorithm, r.metric);
            let e = sums.entry(key.clone()).or_insert_with(|| {
                keys.push(key);
                (0.0, 0, 0)
            });
            match r.value {
                Some(v) => {
                    e.0 += v;
                    e.1 += 1;
                }
                None => e.2 += 1,
            }
        }
        let avg = |key: &(String, Algorithm, MsdMetric)| {
            sums.get(key)
                .and_then(|&(s, c, _)| (c > 0).then(|| s / c as f64))
        };
        keys.iter()
            .map(|key| {
                let average = avg(key);
                let base = avg(&(key.0.clone(), Algorithm::KMeansPP, key.2));
                let &(_, cells, missing) = &sums[key];
                Aggregate {
                    dataset: key.0.clone(),
                    algorithm: key.1,
                    metric: key.2,
                    average,
                    cells,
                    missing,
                    percent_vs_kmeanspp: match (average, base) {
                        (Some(a), Some(b)) if b != 0.0 => Some(100.0 * (a - b) / b),
                        _ => None,
                    },
                }
            })
            .collect()
    }

    pub fn curves(&self) -> Vec<CurvePoint> {
        let mut order: Vec<(String, Algorithm, MsdMetric, usize)> = Vec::new();
        let mut acc: HashMap<(String, Algorithm, MsdMetric, usize), (f64, usize)> = HashMap::new();
        for r in &self.rows {
            let key = (r.dataset.clone(), r.algorithm, r.metric, r.k);
            let e = acc.entry(key.clone()).or_insert_with(|| {
                order.push(key);
                (0.0, 0)
            });
            if let Some(v) = r.value {
                e.0 += v;
                e.1 += 1;
            }
        }
        order
            .into_iter()
            .map(|key| {
                let (s, c) = acc[&key];
                CurvePoint {
                    mean: (c > 0).then(|| s / c as f64),
                    dataset: key.0,
                    algorithm: key.1,
                    metric: key.2,
                    k: key.3,
                }
            })
            .collect()
    }
}

/// Evaluates every (dataset, algorithm, k, seed) cell once. Rows are ordered
/// by dataset, algorithm, `k`, seed and metric, in the order the grid lists
/// them. Unseeded algorithms are run once per `k` and reported for each seed.
pub fn run_experiment(grid: &ExperimentGrid) -> Result<ResultTable> {
    if grid.k_min == 0 || grid.k_min > grid.k_max {
        return Err(Error::InvalidInstance(format!(
            "invalid k range {}..={}",
            grid.k_min, grid.k_max
        )));
    }
    if grid.seeds.is_empty() {
        return Err(Error::InvalidInstance(
            "experiment needs at least one seed".into(),
        ));
    }
    let mut table = ResultTable::default();
    for ds in &grid.datasets {
        for &algo in &grid.algorithms {
            for k in grid.k_min..=grid.k_max {
                let inst = ds.instance.with_k(k)?;
                let mut cached: Option<Vec<Option<f64>>> = None;
                for &seed in &grid.seeds {
                    let values = match (&cached, algo.is_seeded()) {
                        (Some(v), false) => v.clone(),
                        _ => {
                            let run = run_algorithm(algo, &inst, seed, grid.pad_greedy)?;
                            let v = grid
                                .metrics
                                .iter()
                                .map(|m| m.evaluate(&inst, &run.outcome, grid.squared))
                                .collect::<Result<Vec<_>>>()?;
                            if !algo.is_seeded() {
                                cached = Some(v.clone());
                            }
                            v
                        }
                    };
                    for (&metric, value) in grid.metrics.iter().zip(values) {
                        table.rows.push(ResultRow {
                            dataset: ds.name.clone(),
                            algorithm: algo,
                            k,
                            seed,
                            metric,
                            value,
                        });
                    }
                }
            }
        }
    }
    Ok(table)
}
