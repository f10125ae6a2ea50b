use super::{ceil_div, Axiom, AxiomReport, CheckMethod, Witness};
use crate::error::Result;
use crate::instance::{Instance, Outcome};

/// Unanimous proportionality.
///
/// Agents are grouped by coincident location. A group of size at least
/// `l * ceil(n/k)` must see at least `l` selected candidates no farther than
/// the `l`-th closest candidate overall; ties at that distance all count.
/// The reported witness is the `(group, l)` pair with the largest shortfall.
pub fn check_up(inst: &Instance, x: &Outcome) -> Result<AxiomReport> {
    let n = inst.n();
    let aa = inst.agent_distances()?;
    let q = ceil_div(n, inst.k());

    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        match groups.iter_mut().find(|g| aa[g[0] * n + i] == 0.0) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }

    // (shortfall, witness)
    let mut worst: Option<(usize, Witness)> = None;
    for group in groups.into_iter().filter(|g| g.len() >= q) {
        let rep = group[0];
        let mut row = inst.agent_row(rep).to_vec();
        row.sort_by(f64::total_cmp);
        let mut selected: Vec<f64> = x.selected().iter().map(|&c| inst.dist(rep, c)).collect();
        selected.sort_by(f64::total_cmp);

        let max_l = (group.len() / q).min(inst.m());
        for l in 1..=max_l {
            let threshold = row[l - 1];
            let found = selected.partition_point(|&d| d <= threshold);
            if found < l && worst.as_ref().is_none_or(|(s, _)| l - found > *s) {
                let mut w = Witness::group(group.clone());
                w.radius = Some(threshold);
                w.required = Some(l);
                w.found = Some(found);
                worst = Some((l - found, w));
            }
        }
    }
    Ok(AxiomReport::from_witness(
        Axiom::Up,
        CheckMethod::Polynomial,
        worst.map(|(_, w)| w),
    ))
}
