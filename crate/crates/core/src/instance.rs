//! Points, metrics, clustering instances and the distance tables shared by
//! every algorithm and checker in the crate.
//!
//! All distances an algorithm compares originate from the same table, so
//! equality between a stored distance and a radius drawn from the
//! [`RadiusSchedule`] is exact.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A location in `R^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    pub fn scaled(&self, alpha: f64) -> Point {
        Point(self.0.iter().map(|x| x * alpha).collect())
    }
}

impl From<Vec<f64>> for Point {
    fn from(coords: Vec<f64>) -> Self {
        Point(coords)
    }
}

impl From<f64> for Point {
    fn from(x: f64) -> Self {
        Point(vec![x])
    }
}

/// Distance function used by an [`Instance`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Euclidean,
    Manhattan,
    /// Distances supplied as an explicit matrix; there is no pointwise form.
    Precomputed,
}

impl Metric {
    pub fn distance(self, p: &Point, q: &Point) -> Result<f64> {
        if p.dim() != q.dim() {
            return Err(Error::DimensionMismatch(p.dim(), q.dim()));
        }
        let (a, b) = (p.coords(), q.coords());
        match self {
            Metric::Euclidean => Ok(a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt()),
            Metric::Manhattan => Ok(a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()),
            Metric::Precomputed => Err(Error::InvalidInstance(
                "precomputed metric has no pointwise distance".into(),
            )),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Euclidean => "euclidean",
            Metric::Manhattan => "manhattan",
            Metric::Precomputed => "precomputed",
        })
    }
}

/// Convenience wrapper over [`Metric::distance`].
pub fn distance(p: &Point, q: &Point, metric: Metric) -> Result<f64> {
    metric.distance(p, q)
}

/// Whether candidate centers are the agents themselves or a separate set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Unconstrained,
    Discrete,
}

/// A clustering instance: agents, candidate centers, the target `k` and the
/// metric, together with the agent-to-candidate distance table.
#[derive(Clone, Debug)]
pub struct Instance {
    agents: Vec<Point>,
    candidates: Vec<Point>,
    k: usize,
    metric: Metric,
    mode: Mode,
    /// Row-major `n x m` agent-to-candidate distances.
    agent_candidate: Vec<f64>,
    /// Row-major `n x n` agent-to-agent distances, filled lazily.
    agent_agent: OnceLock<Option<Vec<f64>>>,
}

impl Instance {
    /// Unconstrained instance: the candidate set is an indexed copy of the agents.
    pub fn unconstrained(agents: Vec<Point>, k: usize, metric: Metric) -> Result<Self> {
        let candidates = agents.clone();
        Self::from_points(agents, candidates, k, metric, Mode::Unconstrained)
    }

    /// Discrete instance with an explicit candidate multiset.
    pub fn discrete(
        agents: Vec<Point>,
        candidates: Vec<Point>,
        k: usize,
        metric: Metric,
    ) -> Result<Self> {
        Self::from_points(agents, candidates, k, metric, Mode::Discrete)
    }

    fn from_points(
        agents: Vec<Point>,
        candidates: Vec<Point>,
        k: usize,
        metric: Metric,
        mode: Mode,
    ) -> Result<Self> {
        if metric == Metric::Precomputed {
            return Err(Error::InvalidInstance(
                "use Instance::precomputed for matrix distances".into(),
            ));
        }
        check_sizes(agents.len(), candidates.len(), k)?;
        let dim = agents[0].dim();
        for (idx, p) in agents.iter().chain(&candidates).enumerate() {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch(dim, p.dim()));
            }
            if let Some(axis) = p.coords().iter().position(|x| !x.is_finite()) {
                return Err(Error::NonFinite { point: idx, axis });
            }
        }
        let mut table = Vec::with_capacity(agents.len() * candidates.len());
        for a in &agents {
            for c in &candidates {
                table.push(metric.distance(a, c)?);
            }
        }
        Ok(Instance {
            agents,
            candidates,
            k,
            metric,
            mode,
            agent_candidate: table,
            agent_agent: OnceLock::new(),
        })
    }

    /// Instance defined by explicit distances.
    ///
    /// `agent_candidate` is `n x m`. In unconstrained mode it must be square
    /// and symmetric with a zero diagonal and doubles as the agent-to-agent
    /// table. In discrete mode `agent_agent` is optional; checks that need
    /// agent-to-agent distances fail without it.
    pub fn precomputed(
        agent_candidate: Vec<Vec<f64>>,
        agent_agent: Option<Vec<Vec<f64>>>,
        k: usize,
        mode: Mode,
    ) -> Result<Self> {
        let n = agent_candidate.len();
        let m = agent_candidate.first().map_or(0, Vec::len);
        check_sizes(n, m, k)?;
        let flat = flatten_matrix(&agent_candidate, n, m)?;
        let agent_agent = match (mode, agent_agent) {
            (Mode::Unconstrained, _) => {
                if n != m {
                    return Err(Error::InvalidInstance(format!(
                        "unconstrained distance matrix must be square, got {n}x{m}"
                    )));
                }
                check_symmetric(&flat, n)?;
                Some(flat.clone())
            }
            (Mode::Discrete, Some(aa)) => {
                let aa = flatten_matrix(&aa, n, n)?;
                check_symmetric(&aa, n)?;
                Some(aa)
            }
            (Mode::Discrete, None) => None,
        };
        let cell = OnceLock::new();
        let _ = cell.set(agent_agent);
        Ok(Instance {
            agents: vec![Point::new(Vec::new()); n],
            candidates: vec![Point::new(Vec::new()); m],
            k,
            metric: Metric::Precomputed,
            mode,
            agent_candidate: flat,
            agent_agent: cell,
        })
    }

    pub fn agents(&self) -> &[Point] {
        &self.agents
    }

    pub fn candidates(&self) -> &[Point] {
        &self.candidates
    }

    pub fn n(&self) -> usize {
        self.agents.len()
    }

    pub fn m(&self) -> usize {
        self.candidates.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.agents[0].dim()
    }

    /// Same agents and candidates with a different target count.
    pub fn with_k(&self, k: usize) -> Result<Self> {
        check_sizes(self.n(), self.m(), k)?;
        let mut out = self.clone();
        out.k = k;
        Ok(out)
    }

    /// Distance from agent `i` to candidate `c`.
    #[inline]
    pub fn dist(&self, i: usize, c: usize) -> f64 {
        self.agent_candidate[i * self.candidates.len() + c]
    }

    /// Distances from agent `i` to every candidate.
    pub fn agent_row(&self, i: usize) -> &[f64] {
        let m = self.candidates.len();
        &self.agent_candidate[i * m..(i + 1) * m]
    }

    /// Agent-to-agent distance table (`n x n`, row-major), when available.
    pub fn agent_distances(&self) -> Result<&[f64]> {
        self.agent_agent
            .get_or_init(|| {
                if self.metric == Metric::Precomputed {
                    return None;
                }
                if self.mode == Mode::Unconstrained {
                    return Some(self.agent_candidate.clone());
                }
                let n = self.agents.len();
                let mut table = vec![0.0; n * n];
                for i in 0..n {
                    for j in (i + 1)..n {
                        let d = self
                            .metric
                            .distance(&self.agents[i], &self.agents[j])
                            .expect("dimensions validated at construction");
                        table[i * n + j] = d;
                        table[j * n + i] = d;
                    }
                }
                Some(table)
            })
            .as_deref()
            .ok_or(Error::NoAgentDistances)
    }

    /// Multiplies every coordinate (or every matrix entry) by `alpha`.
    pub fn scaled(&self, alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidInstance(format!(
                "scale factor must be positive and finite, got {alpha}"
            )));
        }
        if self.metric == Metric::Precomputed {
            let m = self.m();
            let rows = self
                .agent_candidate
                .chunks(m)
                .map(|r| r.iter().map(|d| d * alpha).collect())
                .collect();
            let aa = match self.mode {
                Mode::Unconstrained => None,
                Mode::Discrete => self.agent_distances().ok().map(|aa| {
                    aa.chunks(self.n())
                        .map(|r| r.iter().map(|d| d * alpha).collect())
                        .collect()
                }),
            };
            return Self::precomputed(rows, aa, self.k, self.mode);
        }
        let agents = self.agents.iter().map(|p| p.scaled(alpha)).collect();
        match self.mode {
            Mode::Unconstrained => Self::unconstrained(agents, self.k, self.metric),
            Mode::Discrete => {
                let cands = self.candidates.iter().map(|p| p.scaled(alpha)).collect();
                Self::discrete(agents, cands, self.k, self.metric)
            }
        }
    }
}

fn check_sizes(n: usize, m: usize, k: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInstance("no agents".into()));
    }
    if m == 0 {
        return Err(Error::InvalidInstance("no candidates".into()));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidInstance(format!(
            "k must satisfy 1 <= k <= n = {n}, got {k}"
        )));
    }
    Ok(())
}

fn flatten_matrix(rows: &[Vec<f64>], n: usize, m: usize) -> Result<Vec<f64>> {
    if rows.len() != n {
        return Err(Error::InvalidInstance(format!(
            "expected {n} matrix rows, got {}",
            rows.len()
        )));
    }
    let mut out = Vec::with_capacity(n * m);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != m {
            return Err(Error::DimensionMismatch(m, row.len()));
        }
        for (c, &d) in row.iter().enumerate() {
            if !d.is_finite() || d < 0.0 {
                return Err(Error::InvalidInstance(format!(
                    "distance ({r}, {c}) = {d} is not a finite nonnegative number"
                )));
            }
            // -0.0 and 0.0 must compare equal and sort together.
            out.push(if d == 0.0 { 0.0 } else { d });
        }
    }
    Ok(out)
}

fn check_symmetric(flat: &[f64], n: usize) -> Result<()> {
    for i in 0..n {
        if flat[i * n + i] != 0.0 {
            return Err(Error::InvalidInstance(format!(
                "diagonal entry ({i}, {i}) must be zero"
            )));
        }
        for j in (i + 1)..n {
            if flat[i * n + j] != flat[j * n + i] {
                return Err(Error::InvalidInstance(format!(
                    "distance matrix not symmetric at ({i}, {j})"
                )));
            }
        }
    }
    Ok(())
}

/// A set of selected candidate indices. Indices are distinct; coincident
/// locations are represented by distinct candidate indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Outcome(Vec<usize>);

impl Outcome {
    pub fn new(inst: &Instance, selected: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; inst.m()];
        for &c in &selected {
            if c >= inst.m() {
                return Err(Error::InvalidOutcome(format!(
                    "candidate index {c} out of range (m = {})",
                    inst.m()
                )));
            }
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::InvalidOutcome(format!(
                    "candidate index {c} selected twice"
                )));
            }
        }
        Ok(Outcome(selected))
    }

    pub(crate) fn from_unchecked(selected: Vec<usize>) -> Self {
        Outcome(selected)
    }

    pub fn selected(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, c: usize) -> bool {
        self.0.contains(&c)
    }

    /// Distance from agent `i` to its closest selected center.
    pub fn distance_to(&self, inst: &Instance, i: usize) -> f64 {
        self.0
            .iter()
            .map(|&c| inst.dist(i, c))
            .fold(f64::INFINITY, f64::min)
    }
}

/// The sorted, exactly deduplicated agent-to-candidate distances.
#[derive(Clone, Debug, PartialEq)]
pub struct RadiusSchedule(Vec<f64>);

impl RadiusSchedule {
    pub fn build(inst: &Instance) -> Self {
        let mut radii = inst.agent_candidate.clone();
        radii.sort_unstable_by(f64::total_cmp);
        radii.dedup();
        RadiusSchedule(radii)
    }

    pub fn radii(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, j: usize) -> Option<f64> {
        self.0.get(j).copied()
    }

    /// Position of a radius that occurs in the schedule.
    pub fn position(&self, radius: f64) -> Option<usize> {
        self.0.binary_search_by(|r| r.total_cmp(&radius)).ok()
    }
}

/// The `j` selected centers closest to agent `i`, ascending by
/// `(distance, candidate index)`.
pub fn nearest_j(inst: &Instance, i: usize, x: &Outcome, j: usize) -> Result<Vec<(usize, f64)>> {
    if j == 0 || j > x.len() {
        return Err(Error::NearestOutOfRange { j, len: x.len() });
    }
    let mut centers: Vec<(usize, f64)> =
        x.selected().iter().map(|&c| (c, inst.dist(i, c))).collect();
    centers.sort_by(|a, b| by_distance_then_index(a.1, a.0, b.1, b.0));
    centers.truncate(j);
    Ok(centers)
}

/// Global tie rule: smaller distance first, then lower index.
#[inline]
pub(crate) fn by_distance_then_index(da: f64, ia: usize, db: f64, ib: usize) -> Ordering {
    da.total_cmp(&db).then(ia.cmp(&ib))
}
