use super::{
    ceil_div, check_exhaustive_size, mask_members, Axiom, AxiomReport, CheckMethod, Witness,
};
use crate::error::Result;
use crate::instance::{Instance, Outcome, Point};

/// Proportional fairness against the instance's candidate set.
///
/// A candidate `c` blocks `X` when at least `ceil(n/k)` agents are strictly
/// closer to `c` than to their nearest selected center. The first blocking
/// candidate (lowest index) is reported with its full set of such agents.
pub fn check_pf(inst: &Instance, x: &Outcome) -> Result<AxiomReport> {
    let current: Vec<f64> = (0..inst.n()).map(|i| x.distance_to(inst, i)).collect();
    let witness = pf_scan(inst, &current, inst.m(), |i, c| inst.dist(i, c)).map(|(c, s)| {
        let mut w = Witness::group(s);
        w.candidate = Some(c);
        w
    });
    Ok(AxiomReport::from_witness(
        Axiom::Pf,
        CheckMethod::Polynomial,
        witness,
    ))
}

/// Proportional fairness against arbitrary deviation locations.
///
/// In the unconstrained setting a blocking center may sit anywhere in the
/// space, so a finite probe set only finds violations; a satisfied verdict is
/// reported as sampled.
pub fn check_pf_against(inst: &Instance, x: &Outcome, deviations: &[Point]) -> Result<AxiomReport> {
    let current: Vec<f64> = (0..inst.n()).map(|i| x.distance_to(inst, i)).collect();
    let mut table = Vec::with_capacity(inst.n() * deviations.len());
    for a in inst.agents() {
        for p in deviations {
            table.push(inst.metric().distance(a, p)?);
        }
    }
    let m = deviations.len();
    let witness = pf_scan(inst, &current, m, |i, c| table[i * m + c]).map(|(c, s)| {
        let mut w = Witness::group(s);
        w.location = Some(deviations[c].clone());
        w
    });
    Ok(AxiomReport::from_witness(
        Axiom::Pf,
        CheckMethod::Sampling,
        witness,
    ))
}

fn pf_scan(
    inst: &Instance,
    current: &[f64],
    m: usize,
    dist: impl Fn(usize, usize) -> f64,
) -> Option<(usize, Vec<usize>)> {
    let q = ceil_div(inst.n(), inst.k());
    (0..m).find_map(|c| {
        let s: Vec<usize> = (0..inst.n()).filter(|&i| dist(i, c) < current[i]).collect();
        (s.len() >= q).then_some((c, s))
    })
}

/// Agent locations plus the midpoint of every pair of distinct agent
/// locations, as deviation probes for [`check_pf_against`].
pub fn midpoint_deviations(inst: &Instance) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    let agents = inst.agents();
    let mut push = |p: Point| {
        if !out.contains(&p) {
            out.push(p);
        }
    };
    for a in agents {
        push(a.clone());
    }
    for (i, a) in agents.iter().enumerate() {
        for b in &agents[i + 1..] {
            let mid = a
                .coords()
                .iter()
                .zip(b.coords())
                .map(|(u, v)| (u + v) / 2.0)
                .collect();
            push(Point::new(mid));
        }
    }
    out
}

/// Subset-enumeration oracle for [`check_pf`]; `n <= 16`.
pub fn check_pf_bruteforce(inst: &Instance, x: &Outcome) -> Result<AxiomReport> {
    check_exhaustive_size(inst)?;
    let n = inst.n();
    let q = ceil_div(n, inst.k());
    let current: Vec<f64> = (0..n).map(|i| x.distance_to(inst, i)).collect();
    for c in 0..inst.m() {
        for mask in 1u32..(1 << n) {
            if (mask.count_ones() as usize) < q {
                continue;
            }
            let s = mask_members(mask, n);
            if s.iter().all(|&i| inst.dist(i, c) < current[i]) {
                let mut w = Witness::group(s);
                w.candidate = Some(c);
                return Ok(AxiomReport::from_witness(
                    Axiom::Pf,
                    CheckMethod::Exhaustive,
                    Some(w),
                ));
            }
        }
    }
    Ok(AxiomReport::from_witness(
        Axiom::Pf,
        CheckMethod::Exhaustive,
        None,
    ))
}

/// Per-agent gains `d(i, X) - d(i, c)` sorted descending, ties by agent index.
fn gains(inst: &Instance, current: &[f64], c: usize) -> Vec<(usize, f64)> {
    let mut g: Vec<(usize, f64)> = (0..inst.n())
        .map(|i| (i, current[i] - inst.dist(i, c)))
        .collect();
    g.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    g
}

/// Core fairness.
///
/// For each candidate the best coalition of a given size is the prefix of
/// agents sorted by gain; `X` is blocked when some prefix of length at least
/// `ceil(n/k)` has positive total gain. Sums are accumulated in descending
/// gain order, and rounded addition is monotone in each argument, so a prefix
/// maximises the accumulated sum among all coalitions of its size.
pub fn check_core(inst: &Instance, x: &Outcome) -> Result<AxiomReport> {
    let n = inst.n();
    let q = ceil_div(n, inst.k());
    let current: Vec<f64> = (0..n).map(|i| x.distance_to(inst, i)).collect();
    for c in 0..inst.m() {
        let g = gains(inst, &current, c);
        let mut acc = 0.0;
        let mut best: Option<(usize, f64)> = None;
        for (len, &(_, gain)) in g.iter().enumerate().map(|(p, e)| (p + 1, e)) {
            acc += gain;
            if len >= q && acc > 0.0 && best.is_none_or(|(_, b)| acc > b) {
                best = Some((len, acc));
            }
        }
        if let Some((len, _)) = best {
            let mut s: Vec<usize> = g[..len].iter().map(|&(i, _)| i).collect();
            s.sort_unstable();
            let mut w = Witness::group(s);
            w.candidate = Some(c);
            return Ok(AxiomReport::from_witness(
                Axiom::Core,
                CheckMethod::Polynomial,
                Some(w),
            ));
        }
    }
    Ok(AxiomReport::from_witness(
        Axiom::Core,
        CheckMethod::Polynomial,
        None,
    ))
}

/// Subset-enumeration oracle for [`check_core`]; `n <= 16`.
pub fn check_core_bruteforce(inst: &Instance, x: &Outcome) -> Result<AxiomReport> {
    check_exhaustive_size(inst)?;
    let n = inst.n();
    let q = ceil_div(n, inst.k());
    let current: Vec<f64> = (0..n).map(|i| x.distance_to(inst, i)).collect();
    for c in 0..inst.m() {
        let g = gains(inst, &current, c);
        for mask in 1u32..(1 << n) {
            if (mask.count_ones() as usize) < q {
                continue;
            }
            let total: f64 = g
                .iter()
                .filter(|&&(i, _)| mask & (1 << i) != 0)
                .fold(0.0, |acc, &(_, v)| acc + v);
            if total > 0.0 {
                let mut w = Witness::group(mask_members(mask, n));
                w.candidate = Some(c);
                return Ok(AxiomReport::from_witness(
                    Axiom::Core,
                    CheckMethod::Exhaustive,
                    Some(w),
                ));
            }
        }
    }
    Ok(AxiomReport::from_witness(
        Axiom::Core,
        CheckMethod::Exhaustive,
        None,
    ))
}
