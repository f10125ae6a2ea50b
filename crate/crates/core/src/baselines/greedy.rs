use serde::{Deserialize, Serialize};

use crate::axioms::ceil_div;
use crate::error::Result;
use crate::instance::{by_distance_then_index, Instance, Outcome};

/// Centers opened by Greedy Capture.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreedyOutcome {
    pub outcome: Outcome,
    /// Fewer than `k` centers were opened by the sweep itself.
    pub underfilled: bool,
    /// The outcome was filled up to `k` with the lowest-index unopened candidates.
    pub padded: bool,
}

/// Greedy Capture.
///
/// Balls grow around every candidate at the same rate. Once an unopened
/// candidate has `ceil(n/k)` uncaptured agents within its ball it opens and
/// captures them; opened centers keep capturing agents as their balls grow.
/// The sweep may open fewer than `k` centers. With `pad` the outcome is
/// completed with the lowest-index unopened candidates.
///
/// Only radii at which some candidate reaches the quota need visiting, so
/// the sweep jumps between those events instead of stepping through every
/// realized distance.
pub fn greedy_capture(inst: &Instance, pad: bool) -> Result<GreedyOutcome> {
    let (n, m, k) = (inst.n(), inst.m(), inst.k());
    let q = ceil_div(n, k);
    let order: Vec<Vec<usize>> = (0..m)
        .map(|c| {
            let mut agents: Vec<usize> = (0..n).collect();
            agents.sort_by(|&a, &b| by_distance_then_index(inst.dist(a, c), a, inst.dist(b, c), b));
            agents
        })
        .collect();

    let mut captured = vec![false; n];
    let mut open = vec![false; m];
    let mut opened: Vec<usize> = Vec::new();
    let mut left = n;

    let quota_radius = |c: usize, captured: &[bool]| -> Option<f64> {
        order[c]
            .iter()
            .filter(|&&i| !captured[i])
            .nth(q - 1)
            .map(|&i| inst.dist(i, c))
    };

    'sweep: while left > 0 {
        let mut radius = f64::NEG_INFINITY;
        loop {
            let next = (0..m)
                .filter(|&c| !open[c])
                .filter_map(|c| quota_radius(c, &captured))
                .fold(f64::INFINITY, f64::min);
            if next.is_infinite() {
                break 'sweep;
            }
            if next == radius {
                break;
            }
            radius = next;
            // Opened centers capture whatever their balls reach first.
            for (i, cap) in captured.iter_mut().enumerate() {
                if !*cap && opened.iter().any(|&c| inst.dist(i, c) <= radius) {
                    *cap = true;
                    left -= 1;
                }
            }
        }

        let count = |c: usize| {
            order[c]
                .iter()
                .take_while(|&&i| inst.dist(i, c) <= radius)
                .filter(|&&i| !captured[i])
                .count()
        };
        let winner = (0..m)
            .filter(|&c| !open[c])
            .map(|c| (count(c), c))
            .filter(|&(cnt, _)| cnt >= q)
            .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
            .map(|(_, c)| c)
            .expect("quota radius guarantees a candidate");
        open[winner] = true;
        opened.push(winner);
        for &i in order[winner]
            .iter()
            .take_while(|&&i| inst.dist(i, winner) <= radius)
        {
            if !captured[i] {
                captured[i] = true;
                left -= 1;
            }
        }
    }

    let underfilled = opened.len() < k;
    let mut padded = false;
    if pad && underfilled {
        let fill: Vec<usize> = (0..m)
            .filter(|&c| !open[c])
            .take(k - opened.len())
            .collect();
        padded = !fill.is_empty();
        opened.extend(fill);
    }
    Ok(GreedyOutcome {
        outcome: Outcome::new(inst, opened)?,
        underfilled,
        padded,
    })
}
