//! Brute-force transport oracles, independent of the simplex solver.

use crate::error::{Error, Result};

/// Largest support size for which permutations are enumerated.
pub const MAX_PERMUTATION_SIZE: usize = 8;

/// Largest support size (per side) for vertex enumeration.
pub const MAX_VERTEX_SIZE: usize = 4;

/// Minimum over permutations `s` of `(1/n) sum_i c[i][s(i)]`. Exact for
/// uniform marginals of equal size, whose transport polytope has the
/// permutation matrices as vertices.
pub fn min_over_permutations(cost: &[Vec<f64>]) -> Result<(f64, Vec<usize>)> {
    let n = cost.len();
    if n == 0 || cost.iter().any(|r| r.len() != n) {
        return Err(Error::OracleRegime("permutation oracle needs a square cost matrix".into()));
    }
    if n > MAX_PERMUTATION_SIZE {
        return Err(Error::OracleRegime(format!(
            "permutation oracle limited to {MAX_PERMUTATION_SIZE} atoms, got {n}"
        )));
    }
    let eval = |p: &[usize]| p.iter().enumerate().map(|(i, &j)| cost[i][j]).sum::<f64>() / n as f64;

    // Heap's algorithm
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = (eval(&perm), perm.clone());
    let mut c = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            let v = eval(&perm);
            if v < best.0 {
                best = (v, perm.clone());
            }
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(best)
}

/// Exact minimum over all basic feasible solutions of the transportation
/// polytope: every spanning tree of `n + m - 1` cells is solved by leaf
/// elimination and kept when its flows are non-negative.
pub fn min_over_vertices(supply: &[f64], demand: &[f64], cost: &[Vec<f64>]) -> Result<(f64, Vec<Vec<f64>>)> {
    let (n, m) = (supply.len(), demand.len());
    if n == 0 || m == 0 || n > MAX_VERTEX_SIZE || m > MAX_VERTEX_SIZE {
        return Err(Error::OracleRegime(format!(
            "vertex enumeration limited to {MAX_VERTEX_SIZE}x{MAX_VERTEX_SIZE}, got {n}x{m}"
        )));
    }
    let cells = n * m;
    let size = n + m - 1;
    let mut best: Option<(f64, Vec<Vec<f64>>)> = None;
    for mask in 0u32..(1 << cells) {
        if mask.count_ones() as usize != size {
            continue;
        }
        let chosen: Vec<(usize, usize)> = (0..cells)
            .filter(|c| mask & (1 << c) != 0)
            .map(|c| (c / m, c % m))
            .collect();
        let Some(flows) = solve_tree(supply, demand, &chosen) else {
            continue;
        };
        if flows.iter().any(|&f| f < -1e-12) {
            continue;
        }
        let mut plan = vec![vec![0.0; m]; n];
        let mut total = 0.0;
        for (&(i, j), &f) in chosen.iter().zip(&flows) {
            let f = f.max(0.0);
            plan[i][j] = f;
            total += f * cost[i][j];
        }
        if best.as_ref().is_none_or(|(b, _)| total < *b) {
            best = Some((total, plan));
        }
    }
    best.ok_or_else(|| Error::OracleRegime("no basic feasible solution found".into()))
}

/// Flows on a set of cells, or `None` if the cells do not form a spanning
/// tree of the bipartite row/column graph.
fn solve_tree(supply: &[f64], demand: &[f64], cells: &[(usize, usize)]) -> Option<Vec<f64>> {
    let n = supply.len();
    let nodes = n + demand.len();
    let mut residual: Vec<f64> = supply.iter().chain(demand).copied().collect();
    let mut degree = vec![0usize; nodes];
    for &(i, j) in cells {
        degree[i] += 1;
        degree[n + j] += 1;
    }
    let mut flow = vec![f64::NAN; cells.len()];
    let mut solved = 0;
    // Peel leaves; a tree on `nodes` vertices always has one until all
    // edges are fixed, a cyclic or disconnected selection gets stuck.
    while solved < cells.len() {
        let mut progressed = false;
        for (k, &(i, j)) in cells.iter().enumerate() {
            if !flow[k].is_nan() {
                continue;
            }
            let (a, b) = (i, n + j);
            let leaf = if degree[a] == 1 {
                Some((a, b))
            } else if degree[b] == 1 {
                Some((b, a))
            } else {
                None
            };
            if let Some((leaf, other)) = leaf {
                flow[k] = residual[leaf];
                residual[other] -= residual[leaf];
                residual[leaf] = 0.0;
                degree[leaf] -= 1;
                degree[other] -= 1;
                solved += 1;
                progressed = true;
            }
        }
        if !progressed {
            return None;
        }
    }
    // peeling the last edge of a component fixes its flow from one end
    // only; unmatched mass at the other end means the marginals are not met
    if degree.iter().any(|&d| d != 0) || residual.iter().any(|r| r.abs() > 1e-9) {
        return None;
    }
    Some(flow)
}
