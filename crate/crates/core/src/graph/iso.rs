//! Exact isomorphism test for small graphs by degree-refined backtracking.

use super::{Graph, GraphError};

pub const ISOMORPHISM_MAX_VERTICES: usize = 12;

pub fn is_isomorphic(a: &Graph, b: &Graph) -> Result<bool, GraphError> {
    for g in [a, b] {
        if g.vertex_count() > ISOMORPHISM_MAX_VERTICES {
            return Err(GraphError::TooLarge {
                what: "isomorphism test",
                limit: ISOMORPHISM_MAX_VERTICES,
                actual: g.vertex_count(),
            });
        }
    }
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return Ok(false);
    }
    let signature = |g: &Graph, v: usize| {
        let mut nb: Vec<usize> = g.neighbors(v).iter().map(|&w| g.degree(w)).collect();
        nb.sort_unstable();
        (g.degree(v), nb)
    };
    let n = a.vertex_count();
    let sig_a: Vec<_> = (0..n).map(|v| signature(a, v)).collect();
    let sig_b: Vec<_> = (0..n).map(|v| signature(b, v)).collect();
    let mut sorted_a = sig_a.clone();
    let mut sorted_b = sig_b.clone();
    sorted_a.sort();
    sorted_b.sort();
    if sorted_a != sorted_b {
        return Ok(false);
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    Ok(extend(a, b, &sig_a, &sig_b, 0, &mut map, &mut used))
}

fn extend(
    a: &Graph,
    b: &Graph,
    sig_a: &[(usize, Vec<usize>)],
    sig_b: &[(usize, Vec<usize>)],
    v: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if v == a.vertex_count() {
        return true;
    }
    for target in 0..b.vertex_count() {
        if used[target] || sig_a[v] != sig_b[target] {
            continue;
        }
        let consistent = (0..v).all(|u| a.has_edge(u, v) == b.has_edge(map[u], target));
        if !consistent {
            continue;
        }
        map[v] = target;
        used[target] = true;
        if extend(a, b, sig_a, sig_b, v + 1, map, used) {
            return true;
        }
        used[target] = false;
    }
    map[v] = usize::MAX;
    false
}
