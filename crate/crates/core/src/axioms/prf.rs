//! Proportionally representative fairness and its two strengthenings.
//!
//! Unconstrained form: a group `S` with `|S| >= l*n/k` and diameter `y` must
//! see at least `l` selected centers within `y` of some member.
//!
//! Discrete form: with `l'` the number of candidates within `y` of every
//! member (capped at `l`), the group must see at least `l'` selected centers
//! within `y` of some member. PRF-II asks for a single member that sees them
//! all, PRF-III for centers within `y` of every member.
//!
//! For a fixed group every side of these conditions is a step function of
//! `y` that jumps only at realized distances, so the discrete checks only
//! visit the radii at which the feasible-candidate count increases.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::clique::find_clique;
use super::{
    ceil_div, check_exhaustive_size, entitlement, mask_members, Axiom, AxiomReport, CheckMethod,
    Witness, EXHAUSTIVE_LIMIT,
};
use crate::error::{Error, Result};
use crate::instance::{Instance, Outcome};

/// Search strategy for the PRF checkers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "method")]
pub enum PrfMethod {
    /// Exhaustive when `n <= 16`; otherwise the clique search for the
    /// unconstrained form (when `|X| <= 16`) or sampling.
    #[default]
    Auto,
    /// Enumerates every agent subset. Requires `n <= 16`.
    Exhaustive,
    /// Exact search over subsets of the outcome and cliques of the
    /// diameter graph. Unconstrained form only.
    Clique,
    /// Ball-shaped and random groups; can only find violations.
    Sampling { samples: usize, seed: u64 },
}

const DEFAULT_SAMPLING: PrfMethod = PrfMethod::Sampling {
    samples: 2000,
    seed: 0,
};

/// Largest outcome for which [`PrfMethod::Auto`] picks the clique search.
const CLIQUE_OUTCOME_LIMIT: usize = 16;

pub fn check_prf_unconstrained(
    inst: &Instance,
    x: &Outcome,
    method: PrfMethod,
) -> Result<AxiomReport> {
    let aa = inst.agent_distances()?;
    let method = match method {
        PrfMethod::Auto if inst.n() <= EXHAUSTIVE_LIMIT => PrfMethod::Exhaustive,
        PrfMethod::Auto if x.len() <= CLIQUE_OUTCOME_LIMIT => PrfMethod::Clique,
        PrfMethod::Auto => DEFAULT_SAMPLING,
        m => m,
    };
    let (found, method) = match method {
        PrfMethod::Exhaustive => {
            check_exhaustive_size(inst)?;
            (unc_exhaustive(inst, aa, x), CheckMethod::Exhaustive)
        }
        PrfMethod::Clique => (unc_clique(inst, aa, x), CheckMethod::Clique),
        PrfMethod::Sampling { samples, seed } => (
            unc_sampling(inst, aa, x, samples, seed),
            CheckMethod::Sampling,
        ),
        PrfMethod::Auto => unreachable!(),
    };
    Ok(AxiomReport::from_witness(
        Axiom::PrfUnconstrained,
        method,
        found,
    ))
}

/// Violation witness for the unconstrained form on a fixed group.
fn unc_violation(inst: &Instance, aa: &[f64], x: &Outcome, s: &[usize]) -> Option<Witness> {
    let (n, k) = (inst.n(), inst.k());
    let l = entitlement(s.len(), n, k);
    if l == 0 {
        return None;
    }
    let y = s
        .iter()
        .flat_map(|&i| s.iter().map(move |&j| aa[i * n + j]))
        .fold(0.0, f64::max);
    let seen = x
        .selected()
        .iter()
        .filter(|&&c| s.iter().any(|&i| inst.dist(i, c) <= y))
        .count();
    (seen < l).then(|| {
        let mut w = Witness::group(s.to_vec());
        w.radius = Some(y);
        w.required = Some(l);
        w.found = Some(seen);
        w
    })
}

fn unc_exhaustive(inst: &Instance, aa: &[f64], x: &Outcome) -> Option<Witness> {
    let (n, k) = (inst.n(), inst.k());
    let mut diam = vec![0.0f64; 1 << n];
    for mask in 1u32..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let mut d = diam[rest as usize];
        let mut bits = rest;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            d = d.max(aa[low * n + j]);
            bits &= bits - 1;
        }
        diam[mask as usize] = d;

        let size = mask.count_ones() as usize;
        let l = entitlement(size, n, k);
        if l == 0 {
            continue;
        }
        let seen = x
            .selected()
            .iter()
            .filter(|&&c| {
                let mut b = mask;
                while b != 0 {
                    let i = b.trailing_zeros() as usize;
                    if inst.dist(i, c) <= d {
                        return true;
                    }
                    b &= b - 1;
                }
                false
            })
            .count();
        if seen < l {
            let mut w = Witness::group(mask_members(mask, n));
            w.radius = Some(d);
            w.required = Some(l);
            w.found = Some(seen);
            return Some(w);
        }
    }
    None
}

/// Exact search without subset enumeration.
///
/// A violating group `S` at radius `y` sees some set `T` of selected centers
/// with `|T| < l`, so every member lies farther than `y` from each center
/// outside `T`, and `S` is a clique of the graph joining agents within `y`.
/// Conversely any such clique of size `>= (|T|+1) n/k` is a violation. The
/// search enumerates radii `y`, subsets `T` of the outcome, and looks for a
/// large enough clique among the agents whose nearby centers lie in `T`.
fn unc_clique(inst: &Instance, aa: &[f64], x: &Outcome) -> Option<Witness> {
    let (n, k) = (inst.n(), inst.k());
    let centers = x.selected();
    let t = centers.len();
    let mut radii = aa.to_vec();
    radii.sort_unstable_by(f64::total_cmp);
    radii.dedup();

    for &y in &radii {
        // Bitmask of outcome positions within y of each agent.
        let near: Vec<u64> = (0..n)
            .map(|i| {
                centers
                    .iter()
                    .enumerate()
                    .filter(|&(_, &c)| inst.dist(i, c) <= y)
                    .fold(0u64, |m, (p, _)| m | (1 << p))
            })
            .collect();
        for tmask in 0u64..(1 << t) {
            let l = tmask.count_ones() as usize + 1;
            if l > k {
                continue;
            }
            let need = ceil_div(l * n, k);
            let allowed: Vec<usize> = (0..n).filter(|&i| near[i] & !tmask == 0).collect();
            if allowed.len() < need {
                continue;
            }
            let adjacent = |u: usize, v: usize| aa[u * n + v] <= y;
            if let Some(mut s) = find_clique(&allowed, need, &adjacent) {
                s.sort_unstable();
                return unc_violation(inst, aa, x, &s);
            }
        }
    }
    None
}

fn unc_sampling(
    inst: &Instance,
    aa: &[f64],
    x: &Outcome,
    samples: usize,
    seed: u64,
) -> Option<Witness> {
    let n = inst.n();
    // Greedy diameter-bounded groups grown around each agent.
    for i in 0..n {
        let mut by_dist: Vec<usize> = (0..n).collect();
        by_dist.sort_by(|&a, &b| aa[i * n + a].total_cmp(&aa[i * n + b]).then(a.cmp(&b)));
        let mut radii: Vec<f64> = by_dist.iter().map(|&j| aa[i * n + j]).collect();
        radii.dedup();
        for &y in &radii {
            let mut s = vec![i];
            for &j in by_dist.iter().skip(1) {
                if aa[i * n + j] > y {
                    break;
                }
                if s.iter().all(|&m| aa[m * n + j] <= y) {
                    s.push(j);
                }
            }
            s.sort_unstable();
            if let Some(w) = unc_violation(inst, aa, x, &s) {
                return Some(w);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let i = rng.gen_range(0..n);
        let y = aa[i * n + rng.gen_range(0..n)];
        let s: Vec<usize> = (0..n)
            .filter(|&j| 2.0 * aa[i * n + j] <= y && rng.gen_bool(0.75))
            .collect();
        if s.is_empty() {
            continue;
        }
        if let Some(w) = unc_violation(inst, aa, x, &s) {
            return Some(w);
        }
    }
    None
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Variant {
    Discrete,
    Two,
    Three,
}

impl Variant {
    fn axiom(self) -> Axiom {
        match self {
            Variant::Discrete => Axiom::PrfDiscrete,
            Variant::Two => Axiom::Prf2,
            Variant::Three => Axiom::Prf3,
        }
    }
}

/// Violation witness for one of the discrete forms on a fixed group.
fn discrete_violation(
    inst: &Instance,
    x: &Outcome,
    s: &[usize],
    variant: Variant,
) -> Option<Witness> {
    let (n, k) = (inst.n(), inst.k());
    let l = entitlement(s.len(), n, k);
    if l == 0 {
        return None;
    }
    // Candidate c is within y of all of S once y >= far(c).
    let mut far: Vec<f64> = (0..inst.m())
        .map(|c| s.iter().map(|&i| inst.dist(i, c)).fold(0.0, f64::max))
        .collect();
    far.sort_unstable_by(f64::total_cmp);

    let centers = x.selected();
    let mut near_any: Vec<f64> = centers
        .iter()
        .map(|&c| {
            s.iter()
                .map(|&i| inst.dist(i, c))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    near_any.sort_unstable_by(f64::total_cmp);
    let mut near_all: Vec<f64> = centers
        .iter()
        .map(|&c| s.iter().map(|&i| inst.dist(i, c)).fold(0.0, f64::max))
        .collect();
    near_all.sort_unstable_by(f64::total_cmp);

    let mut p = 0;
    while p < far.len() {
        let y = far[p];
        while p < far.len() && far[p] == y {
            p += 1;
        }
        let demand = l.min(p);
        let seen = match variant {
            Variant::Discrete => near_any.partition_point(|&d| d <= y),
            Variant::Three => near_all.partition_point(|&d| d <= y),
            Variant::Two => s
                .iter()
                .map(|&i| centers.iter().filter(|&&c| inst.dist(i, c) <= y).count())
                .max()
                .unwrap_or(0),
        };
        if seen < demand {
            let mut w = Witness::group(s.to_vec());
            w.radius = Some(y);
            w.required = Some(demand);
            w.found = Some(seen);
            return Some(w);
        }
        if demand == l && seen >= l {
            // Both sides are saturated from here on.
            break;
        }
    }
    None
}

fn discrete_exhaustive(inst: &Instance, x: &Outcome, variant: Variant) -> Result<Option<Witness>> {
    check_exhaustive_size(inst)?;
    let n = inst.n();
    for mask in 1u32..(1 << n) {
        if entitlement(mask.count_ones() as usize, n, inst.k()) == 0 {
            continue;
        }
        if let Some(w) = discrete_violation(inst, x, &mask_members(mask, n), variant) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn discrete_sampling(inst: &Instance, x: &Outcome, samples: usize, seed: u64) -> Option<Witness> {
    let (n, m) = (inst.n(), inst.m());
    // Balls around each candidate at every realized radius.
    for c in 0..m {
        let mut radii: Vec<f64> = (0..n).map(|i| inst.dist(i, c)).collect();
        radii.sort_unstable_by(f64::total_cmp);
        radii.dedup();
        for &y in &radii {
            let s: Vec<usize> = (0..n).filter(|&i| inst.dist(i, c) <= y).collect();
            if let Some(w) = discrete_violation(inst, x, &s, Variant::Discrete) {
                return Some(w);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let c = rng.gen_range(0..m);
        let y = inst.dist(rng.gen_range(0..n), c);
        let s: Vec<usize> = (0..n)
            .filter(|&i| inst.dist(i, c) <= y && rng.gen_bool(0.75))
            .collect();
        if s.is_empty() {
            continue;
        }
        if let Some(w) = discrete_violation(inst, x, &s, Variant::Discrete) {
            return Some(w);
        }
    }
    None
}

pub fn check_prf_discrete(inst: &Instance, x: &Outcome, method: PrfMethod) -> Result<AxiomReport> {
    let method = match method {
        PrfMethod::Auto if inst.n() <= EXHAUSTIVE_LIMIT => PrfMethod::Exhaustive,
        PrfMethod::Auto => DEFAULT_SAMPLING,
        m => m,
    };
    let (found, used) = match method {
        PrfMethod::Exhaustive => (
            discrete_exhaustive(inst, x, Variant::Discrete)?,
            CheckMethod::Exhaustive,
        ),
        PrfMethod::Sampling { samples, seed } => (
            discrete_sampling(inst, x, samples, seed),
            CheckMethod::Sampling,
        ),
        PrfMethod::Clique => {
            return Err(Error::InvalidInstance(
                "clique search applies to the unconstrained form only".into(),
            ))
        }
        PrfMethod::Auto => unreachable!(),
    };
    Ok(AxiomReport::from_witness(Axiom::PrfDiscrete, used, found))
}

/// PRF-II, by subset enumeration (`n <= 16`).
pub fn check_prf2(inst: &Instance, x: &Outcome) -> Result<AxiomReport> {
    let found = discrete_exhaustive(inst, x, Variant::Two)?;
    Ok(AxiomReport::from_witness(
        Variant::Two.axiom(),
        CheckMethod::Exhaustive,
        found,
    ))
}

/// PRF-III, by subset enumeration (`n <= 16`).
pub fn check_prf3(inst: &Instance, x: &Outcome) -> Result<AxiomReport> {
    let found = discrete_exhaustive(inst, x, Variant::Three)?;
    Ok(AxiomReport::from_witness(
        Variant::Three.axiom(),
        CheckMethod::Exhaustive,
        found,
    ))
}
