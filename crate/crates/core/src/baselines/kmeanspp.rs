use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::{by_distance_then_index, Instance, Mode, Outcome};

pub const MAX_LLOYD_ITERATIONS: usize = 100;

/// Result of a k-means++ run with its objective after seeding and after each
/// Lloyd iteration.
#[derive(Clone, Debug)]
pub struct KMeansRun {
    pub outcome: Outcome,
    pub objective_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Sum over agents of the squared distance to the closest selected center.
pub fn kmeans_objective(inst: &Instance, centers: &[usize]) -> f64 {
    (0..inst.n())
        .map(|i| {
            let d = centers
                .iter()
                .map(|&c| inst.dist(i, c))
                .fold(f64::INFINITY, f64::min);
            d * d
        })
        .sum()
}

pub fn kmeanspp(inst: &Instance, seed: u64) -> Result<Outcome> {
    kmeanspp_run(inst, seed, MAX_LLOYD_ITERATIONS).map(|run| run.outcome)
}

/// D²-weighted seeding over the data points followed by Lloyd iterations in
/// which each cluster moves to its medoid (the member minimising the sum of
/// squared distances to the other members).
pub fn kmeanspp_run(inst: &Instance, seed: u64, max_iterations: usize) -> Result<KMeansRun> {
    if inst.mode() != Mode::Unconstrained {
        return Err(Error::InvalidInstance(
            "k-means++ chooses centers among the data points; use an unconstrained instance".into(),
        ));
    }
    let (n, k) = (inst.n(), inst.k());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut centers = Vec::with_capacity(k);
    centers.push(rng.gen_range(0..n));
    let mut nearest: Vec<f64> = (0..n).map(|i| inst.dist(i, centers[0])).collect();
    while centers.len() < k {
        let weights: Vec<f64> = nearest.iter().map(|d| d * d).collect();
        let next = match WeightedIndex::new(&weights) {
            Ok(dist) => dist.sample(&mut rng),
            // Every point coincides with a chosen center.
            Err(_) => {
                let free: Vec<usize> = (0..n).filter(|c| !centers.contains(c)).collect();
                free[rng.gen_range(0..free.len())]
            }
        };
        centers.push(next);
        for (i, d) in nearest.iter_mut().enumerate() {
            *d = d.min(inst.dist(i, next));
        }
    }

    let mut history = vec![kmeans_objective(inst, &centers)];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iterations {
        iterations += 1;
        let clusters = assign(inst, &centers);
        let mut next = centers.clone();
        for (slot, members) in clusters.iter().enumerate() {
            if members.is_empty() {
                continue;
            }
            let current = centers[slot];
            let cost = |p: usize| -> f64 {
                members
                    .iter()
                    .map(|&q| inst.dist(q, p) * inst.dist(q, p))
                    .sum()
            };
            let mut best = (cost(current), current);
            for &p in members {
                if p == current || next.iter().enumerate().any(|(s, &c)| s != slot && c == p) {
                    continue;
                }
                let c = cost(p);
                // Members are visited in index order; the current center wins ties.
                if c < best.0 {
                    best = (c, p);
                }
            }
            next[slot] = best.1;
        }
        history.push(kmeans_objective(inst, &next));
        if next == centers {
            converged = true;
            break;
        }
        centers = next;
    }

    Ok(KMeansRun {
        outcome: Outcome::new(inst, centers)?,
        objective_history: history,
        iterations,
        converged,
    })
}

/// Members of each center's cluster; ties go to the lower candidate index.
fn assign(inst: &Instance, centers: &[usize]) -> Vec<Vec<usize>> {
    let mut clusters = vec![Vec::new(); centers.len()];
    for i in 0..inst.n() {
        let slot = (0..centers.len())
            .min_by(|&a, &b| {
                by_distance_then_index(
                    inst.dist(i, centers[a]),
                    centers[a],
                    inst.dist(i, centers[b]),
                    centers[b],
                )
            })
            .expect("at least one center");
        clusters[slot].push(i);
    }
    clusters
}
