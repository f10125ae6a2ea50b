//! Radius-sweep selection of proportionally representative centers.
//!
//! Every agent starts with weight one. Radii are visited in increasing order
//! over the [`RadiusSchedule`]; whenever some unselected candidate has
//! weighted support of at least `n/k` (the total weight of agents within the
//! current radius) the best-supported such candidate is selected and its
//! supporters give up exactly `n/k` weight between them. The same radius is
//! re-examined after each selection. The loop stops after `k` selections.
//!
//! Unconstrained instances carry their agents as candidates, so one routine
//! serves both settings.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::instance::{by_distance_then_index, Instance, Mode, Outcome, RadiusSchedule};

pub type Rational = Ratio<i64>;

/// Exact rational weight of an agent, between zero and one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(Rational);

impl Weight {
    pub fn new(value: Rational) -> Self {
        Weight(value)
    }

    pub fn one() -> Self {
        Weight(Rational::one())
    }

    pub fn zero() -> Self {
        Weight(Rational::zero())
    }

    pub fn value(self) -> Rational {
        self.0
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Weight {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Rational::from_str(s.trim())
            .map(Weight)
            .map_err(|e| format!("invalid rational {s:?}: {e}"))
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Mutable state of one sweep.
#[derive(Clone, Debug)]
pub struct SweepState {
    pub weights: Vec<Weight>,
    /// `remaining[c]` is true while candidate `c` is unselected.
    pub remaining: Vec<bool>,
    pub selected: Vec<usize>,
    pub radius_cursor: usize,
    /// The per-selection quota `n/k`.
    pub quota: Rational,
}

impl SweepState {
    pub fn new(inst: &Instance) -> Self {
        SweepState {
            weights: vec![Weight::one(); inst.n()],
            remaining: vec![true; inst.m()],
            selected: Vec::with_capacity(inst.k()),
            radius_cursor: 0,
            quota: quota(inst),
        }
    }

    pub fn total_weight(&self) -> Rational {
        self.weights.iter().map(|w| w.0).sum()
    }
}

/// The exact quota `n/k`.
pub fn quota(inst: &Instance) -> Rational {
    Rational::new(inst.n() as i64, inst.k() as i64)
}

/// One selection of the sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRound {
    pub radius: f64,
    pub radius_index: usize,
    pub winner: usize,
    /// Weighted support of the winner at `radius`, before reweighting.
    pub support: Weight,
    /// Agents within `radius` of the winner, ordered by (distance, index).
    pub supporters: Vec<usize>,
    pub weight_before: Vec<Weight>,
    pub weight_after: Vec<Weight>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SweepTrace {
    pub rounds: Vec<SweepRound>,
}

/// Total weight of agents within `radius` of candidate `c`.
pub fn weighted_support(inst: &Instance, c: usize, radius: f64, state: &SweepState) -> Rational {
    (0..inst.n())
        .filter(|&i| inst.dist(i, c) <= radius)
        .map(|i| state.weights[i].0)
        .sum()
}

/// Agents within `radius` of candidate `c`, ordered by (distance, index).
pub fn supporters(inst: &Instance, c: usize, radius: f64) -> Vec<usize> {
    let mut out: Vec<usize> = (0..inst.n())
        .filter(|&i| inst.dist(i, c) <= radius)
        .collect();
    out.sort_by(|&a, &b| by_distance_then_index(inst.dist(a, c), a, inst.dist(b, c), b));
    out
}

/// Removes exactly `amount` weight from `supporters`, zeroing them in the
/// given order and cutting the last touched agent fractionally.
pub fn reduce_weights(
    state: &mut SweepState,
    supporters: &[usize],
    amount: Rational,
) -> Result<()> {
    let available: Rational = supporters.iter().map(|&i| state.weights[i].0).sum();
    if available < amount {
        return Err(Error::Internal(format!(
            "supporters hold {available}, cannot remove {amount}"
        )));
    }
    let mut left = amount;
    for &i in supporters {
        if left.is_zero() {
            break;
        }
        let w = &mut state.weights[i].0;
        if *w <= left {
            left -= *w;
            *w = Rational::zero();
        } else {
            *w -= left;
            left = Rational::zero();
        }
    }
    debug_assert!(left.is_zero());
    Ok(())
}

/// Runs the sweep and returns the `k` selected centers with an audit trace.
pub fn select_prf_centers(inst: &Instance) -> Result<(Outcome, SweepTrace)> {
    let (n, m, k) = (inst.n(), inst.m(), inst.k());
    if m < k {
        return Err(Error::InsufficientCandidates { candidates: m, k });
    }
    debug_assert!(inst.mode() == Mode::Discrete || m == n);

    let schedule = RadiusSchedule::build(inst);
    // Agents of each candidate in (distance, index) order; supports at a
    // radius are prefix sums over these lists.
    let order: Vec<Vec<usize>> = (0..m)
        .map(|c| {
            let mut agents: Vec<usize> = (0..n).collect();
            agents.sort_by(|&a, &b| by_distance_then_index(inst.dist(a, c), a, inst.dist(b, c), b));
            agents
        })
        .collect();

    let mut state = SweepState::new(inst);
    let mut trace = SweepTrace::default();

    while state.selected.len() < k {
        // Smallest radius at which each remaining candidate reaches the quota.
        let mut first_radius = f64::INFINITY;
        for c in (0..m).filter(|&c| state.remaining[c]) {
            if let Some(r) = quota_radius(inst, &order[c], c, &state) {
                first_radius = first_radius.min(r);
            }
        }
        if first_radius.is_infinite() {
            return Err(Error::Internal(format!(
                "no candidate reaches the quota with {} of {k} centers selected",
                state.selected.len()
            )));
        }
        let current = schedule.radii()[state.radius_cursor];
        if first_radius > current {
            state.radius_cursor = schedule
                .position(first_radius)
                .ok_or_else(|| Error::Internal(format!("radius {first_radius} not in schedule")))?;
        }
        let radius = schedule.radii()[state.radius_cursor];

        let mut best: Option<(usize, Rational)> = None;
        for c in (0..m).filter(|&c| state.remaining[c]) {
            let support: Rational = order[c]
                .iter()
                .take_while(|&&i| inst.dist(i, c) <= radius)
                .map(|&i| state.weights[i].0)
                .sum();
            if support >= state.quota && best.is_none_or(|(_, s)| support > s) {
                best = Some((c, support));
            }
        }
        let (winner, support) =
            best.ok_or_else(|| Error::Internal(format!("empty C* at radius {radius}")))?;

        let backers: Vec<usize> = order[winner]
            .iter()
            .copied()
            .take_while(|&i| inst.dist(i, winner) <= radius)
            .collect();
        let weight_before: Vec<Weight> = backers.iter().map(|&i| state.weights[i]).collect();
        let amount = state.quota;
        reduce_weights(&mut state, &backers, amount)?;
        let weight_after = backers.iter().map(|&i| state.weights[i]).collect();

        state.remaining[winner] = false;
        state.selected.push(winner);
        trace.rounds.push(SweepRound {
            radius,
            radius_index: state.radius_cursor,
            winner,
            support: Weight(support),
            supporters: backers,
            weight_before,
            weight_after,
        });
    }

    Ok((Outcome::from_unchecked(state.selected), trace))
}

fn quota_radius(inst: &Instance, order: &[usize], c: usize, state: &SweepState) -> Option<f64> {
    let mut acc = Rational::zero();
    for &i in order {
        acc += state.weights[i].0;
        if acc >= state.quota {
            return Some(inst.dist(i, c));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{Metric, Point};

    fn line(xs: &[f64]) -> Vec<Point> {
        xs.iter().map(|&x| Point::from(x)).collect()
    }

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    #[test]
    fn weighted_support_examples() {
        let inst =
            Instance::discrete(line(&[0.0, 0.0, 5.0]), line(&[0.0]), 1, Metric::Euclidean).unwrap();
        let mut state = SweepState::new(&inst);
        assert_eq!(weighted_support(&inst, 0, 0.0, &state), r(2, 1));

        let far = Instance::discrete(line(&[3.0]), line(&[0.0]), 1, Metric::Euclidean).unwrap();
        assert_eq!(
            weighted_support(&far, 0, 1.0, &SweepState::new(&far)),
            r(0, 1)
        );

        state.weights[1] = Weight::new(r(1, 2));
        assert_eq!(weighted_support(&inst, 0, 0.0, &state), r(3, 2));
    }

    #[test]
    fn reduce_weights_examples() {
        let inst = Instance::unconstrained(line(&[0.0, 0.0]), 2, Metric::Euclidean).unwrap();
        let mut state = SweepState::new(&inst);
        reduce_weights(&mut state, &[0, 1], r(1, 1)).unwrap();
        assert_eq!(state.weights, vec![Weight::zero(), Weight::one()]);

        let mut state = SweepState::new(&inst);
        reduce_weights(&mut state, &[0, 1], r(3, 2)).unwrap();
        assert_eq!(state.weights, vec![Weight::zero(), Weight::new(r(1, 2))]);

        let single = Instance::unconstrained(line(&[0.0]), 1, Metric::Euclidean).unwrap();
        let mut state = SweepState::new(&single);
        reduce_weights(&mut state, &[0], r(1, 1)).unwrap();
        assert_eq!(state.weights, vec![Weight::zero()]);
    }

    #[test]
    fn reduce_weights_rejects_insufficient_support() {
        let inst = Instance::unconstrained(line(&[0.0, 0.0]), 1, Metric::Euclidean).unwrap();
        let mut state = SweepState::new(&inst);
        assert!(matches!(
            reduce_weights(&mut state, &[0], r(2, 1)),
            Err(Error::Internal(_))
        ));
    }

    #[test]
    fn three_point_line() {
        let inst = Instance::unconstrained(line(&[0.0, 0.0, 1.0]), 3, Metric::Euclidean).unwrap();
        let (x, trace) = select_prf_centers(&inst).unwrap();
        assert_eq!(x.selected(), &[0, 1, 2]);
        assert_eq!(trace.rounds.len(), 3);
        let radii: Vec<f64> = trace.rounds.iter().map(|r| r.radius).collect();
        assert_eq!(radii, vec![0.0, 0.0, 0.0]);
        assert_eq!(trace.rounds[0].support, Weight::new(r(2, 1)));
        assert_eq!(trace.rounds[0].supporters, vec![0, 1]);
        assert_eq!(
            trace.rounds[0].weight_after,
            vec![Weight::zero(), Weight::one()]
        );
    }

    #[test]
    fn single_agent() {
        let inst = Instance::unconstrained(line(&[7.0]), 1, Metric::Euclidean).unwrap();
        let (x, _) = select_prf_centers(&inst).unwrap();
        assert_eq!(x.selected(), &[0]);
    }

    #[test]
    fn two_mass_gets_proportional_centers() {
        let mut xs = vec![0.0; 100];
        xs.extend(std::iter::repeat_n(1.0, 10));
        let inst = Instance::unconstrained(line(&xs), 11, Metric::Euclidean).unwrap();
        let (x, trace) = select_prf_centers(&inst).unwrap();
        let at_zero = x.selected().iter().filter(|&&c| c < 100).count();
        assert_eq!(at_zero, 10);
        assert_eq!(x.len(), 11);
        assert!(trace.rounds.iter().all(|r| r.radius == 0.0));
    }

    #[test]
    fn rejects_too_few_candidates() {
        let inst =
            Instance::discrete(line(&[0.0, 1.0]), line(&[0.5]), 2, Metric::Euclidean).unwrap();
        assert!(matches!(
            select_prf_centers(&inst),
            Err(Error::InsufficientCandidates {
                candidates: 1,
                k: 2
            })
        ));
    }

    #[test]
    fn weight_serializes_as_fraction() {
        let w = Weight::new(r(3, 6));
        assert_eq!(serde_json::to_string(&w).unwrap(), "\"1/2\"");
        let back: Weight = serde_json::from_str("\"1/2\"").unwrap();
        assert_eq!(back, w);
    }
}
