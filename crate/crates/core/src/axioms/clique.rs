//! Clique search in distance-threshold graphs.

/// Finds a clique of at least `need` vertices among `vertices`, where two
/// vertices are adjacent when `adjacent(u, v)` holds. Returns the first one
/// found, in branch order.
pub(crate) fn find_clique(
    vertices: &[usize],
    need: usize,
    adjacent: &dyn Fn(usize, usize) -> bool,
) -> Option<Vec<usize>> {
    if need == 0 {
        return Some(Vec::new());
    }
    if vertices.len() < need {
        return None;
    }
    // Highest-degree vertices first tends to find large cliques quickly.
    let mut order: Vec<(usize, usize)> = vertices
        .iter()
        .map(|&v| {
            (
                vertices
                    .iter()
                    .filter(|&&u| u != v && adjacent(u, v))
                    .count(),
                v,
            )
        })
        .filter(|&(deg, _)| deg + 1 >= need)
        .collect();
    order.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let cands: Vec<usize> = order.into_iter().map(|(_, v)| v).collect();
    let mut current = Vec::with_capacity(need);
    extend(&mut current, &cands, need, adjacent).then_some(current)
}

fn extend(
    current: &mut Vec<usize>,
    cands: &[usize],
    need: usize,
    adjacent: &dyn Fn(usize, usize) -> bool,
) -> bool {
    if current.len() >= need {
        return true;
    }
    for (idx, &v) in cands.iter().enumerate() {
        if current.len() + (cands.len() - idx) < need {
            return false;
        }
        let next: Vec<usize> = cands[idx + 1..]
            .iter()
            .copied()
            .filter(|&u| adjacent(u, v))
            .collect();
        if current.len() + 1 + next.len() < need {
            continue;
        }
        current.push(v);
        if extend(current, &next, need, adjacent) {
            return true;
        }
        current.pop();
    }
    false
}
