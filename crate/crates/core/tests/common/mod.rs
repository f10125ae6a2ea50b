//! Shared test oracles and random instance builders.
#![allow(dead_code)]

use num_rational::Ratio;
use prfair_core::{Instance, Metric, Mode, Outcome, Point};
use rand::Rng;

pub type Q = Ratio<i64>;

pub fn line(xs: &[f64]) -> Vec<Point> {
    xs.iter().map(|&x| Point::from(x)).collect()
}

/// Random instance. Integer coordinates produce many distance ties.
pub fn random_instance<R: Rng>(
    rng: &mut R,
    max_n: usize,
    max_k: usize,
    mode: Mode,
    integer: bool,
) -> Instance {
    let dim = rng.gen_range(1..=3);
    let n = rng.gen_range(1..=max_n);
    let k = rng.gen_range(1..=max_k.min(n));
    let point = |rng: &mut R| {
        Point::new(
            (0..dim)
                .map(|_| {
                    if integer {
                        rng.gen_range(-4..=4) as f64
                    } else {
                        rng.gen_range(-10.0..10.0)
                    }
                })
                .collect(),
        )
    };
    let agents: Vec<Point> = (0..n).map(|_| point(rng)).collect();
    match mode {
        Mode::Unconstrained => Instance::unconstrained(agents, k, Metric::Euclidean).unwrap(),
        Mode::Discrete => {
            let m = rng.gen_range(k..=k + 4);
            let cands = (0..m).map(|_| point(rng)).collect();
            Instance::discrete(agents, cands, k, Metric::Euclidean).unwrap()
        }
    }
}

fn all_radii(inst: &Instance) -> Vec<f64> {
    let mut r: Vec<f64> = (0..inst.n())
        .flat_map(|i| (0..inst.m()).map(move |c| (i, c)))
        .map(|(i, c)| inst.dist(i, c))
        .collect();
    r.sort_by(f64::total_cmp);
    r.dedup();
    r
}

/// Literal sweep: scan the radii in order, re-examining the same radius after
/// each selection, with supports recomputed from scratch.
pub fn naive_sweep(inst: &Instance) -> Vec<usize> {
    let (n, m, k) = (inst.n(), inst.m(), inst.k());
    let radii = all_radii(inst);
    let quota = Q::new(n as i64, k as i64);
    let mut w = vec![Q::from_integer(1); n];
    let mut chosen: Vec<usize> = Vec::new();
    let mut idx = 0;
    while chosen.len() < k {
        let r = radii[idx];
        let mut best: Option<(usize, Q)> = None;
        for c in (0..m).filter(|c| !chosen.contains(c)) {
            let s: Q = (0..n).filter(|&i| inst.dist(i, c) <= r).map(|i| w[i]).sum();
            if s >= quota && best.is_none_or(|(_, b)| s > b) {
                best = Some((c, s));
            }
        }
        let Some((c, _)) = best else {
            idx += 1;
            continue;
        };
        let mut backers: Vec<usize> = (0..n).filter(|&i| inst.dist(i, c) <= r).collect();
        backers.sort_by(|&a, &b| inst.dist(a, c).total_cmp(&inst.dist(b, c)).then(a.cmp(&b)));
        let mut left = quota;
        for i in backers {
            let take = if w[i] < left { w[i] } else { left };
            w[i] -= take;
            left -= take;
        }
        chosen.push(c);
    }
    chosen
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..(1 << n)).map(move |mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect())
}

/// Direct definition of the unconstrained PRF condition.
pub fn naive_prf_unc(inst: &Instance, x: &Outcome) -> bool {
    let (n, k) = (inst.n(), inst.k());
    subsets(n).all(|s| {
        let y = s
            .iter()
            .flat_map(|&i| s.iter().map(move |&j| inst.dist(i, j)))
            .fold(0.0, f64::max);
        let l = s.len() * k / n;
        let seen = x
            .selected()
            .iter()
            .filter(|&&c| s.iter().any(|&i| inst.dist(i, c) <= y))
            .count();
        seen >= l
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Variant {
    One,
    Two,
    Three,
}

/// Direct definition of the discrete PRF family, checked at every realized
/// agent-to-candidate distance.
pub fn naive_prf_disc(inst: &Instance, x: &Outcome, v: Variant) -> bool {
    let (n, k) = (inst.n(), inst.k());
    let radii = all_radii(inst);
    subsets(n).all(|s| {
        let l = s.len() * k / n;
        radii.iter().all(|&y| {
            let near = |i: usize, c: usize| inst.dist(i, c) <= y;
            let common = (0..inst.m())
                .filter(|&c| s.iter().all(|&i| near(i, c)))
                .count();
            let need = l.min(common);
            let sel = x.selected();
            let seen = match v {
                Variant::One => sel
                    .iter()
                    .filter(|&&c| s.iter().any(|&i| near(i, c)))
                    .count(),
                Variant::Two => s
                    .iter()
                    .map(|&i| sel.iter().filter(|&&c| near(i, c)).count())
                    .max()
                    .unwrap_or(0),
                Variant::Three => sel
                    .iter()
                    .filter(|&&c| s.iter().all(|&i| near(i, c)))
                    .count(),
            };
            seen >= need
        })
    })
}

/// Every `r`-subset of `0..m` in lexicographic order.
pub fn combinations(m: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(start: usize, m: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for c in start..m {
            cur.push(c);
            rec(c + 1, m, r, cur, out);
            cur.pop();
        }
    }
    rec(0, m, r, &mut cur, &mut out);
    out
}
