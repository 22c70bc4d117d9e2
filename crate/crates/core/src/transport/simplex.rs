//! Network simplex on the bipartite transportation graph.
//!
//! Rows are supply nodes, columns demand nodes. A basis is a spanning tree of
//! `n + m - 1` cells; degenerate (zero-flow) basic cells are kept explicitly.
//! Entering and leaving cells are both chosen by lowest cell index among the
//! eligible ones (Bland's rule), which rules out cycling.

use std::collections::VecDeque;

use crate::error::{Error, Result};

const NOT_BASIC: u32 = u32::MAX;

struct Basis {
    n: usize,
    m: usize,
    cells: Vec<(usize, usize)>,
    flow: Vec<f64>,
    /// `slot[i * m + j]` is the position of cell `(i, j)` in `cells`.
    slot: Vec<u32>,
}

impl Basis {
    /// North-west corner rule. Always yields exactly `n + m - 1` cells forming
    /// a staircase spanning tree.
    fn north_west(supply: &[f64], demand: &[f64]) -> Self {
        let (n, m) = (supply.len(), demand.len());
        let mut a = supply.to_vec();
        let mut b = demand.to_vec();
        let mut basis = Basis {
            n,
            m,
            cells: Vec::with_capacity(n + m - 1),
            flow: Vec::with_capacity(n + m - 1),
            slot: vec![NOT_BASIC; n * m],
        };
        let (mut i, mut j) = (0, 0);
        loop {
            let q = a[i].min(b[j]).max(0.0);
            basis.push((i, j), q);
            let row_done = a[i] <= b[j];
            a[i] -= q;
            b[j] -= q;
            if i == n - 1 && j == m - 1 {
                break;
            }
            if i == n - 1 {
                j += 1;
            } else if j == m - 1 || row_done {
                i += 1;
            } else {
                j += 1;
            }
        }
        basis
    }

    fn push(&mut self, cell: (usize, usize), q: f64) {
        self.slot[cell.0 * self.m + cell.1] = self.cells.len() as u32;
        self.cells.push(cell);
        self.flow.push(q);
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n + self.m];
        for (k, &(i, j)) in self.cells.iter().enumerate() {
            adj[i].push(k);
            adj[self.n + j].push(k);
        }
        adj
    }

    fn other_end(&self, k: usize, node: usize) -> usize {
        let (i, j) = self.cells[k];
        if node == i {
            self.n + j
        } else {
            i
        }
    }

    /// Row and column potentials with `u_i + v_j = c_ij` on basic cells and
    /// `u_0 = 0`.
    fn potentials(&self, adj: &[Vec<usize>], cost: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
        let mut pot = vec![f64::NAN; self.n + self.m];
        pot[0] = 0.0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for &k in &adj[v] {
                let w = self.other_end(k, v);
                if pot[w].is_nan() {
                    let (i, j) = self.cells[k];
                    pot[w] = cost[i][j] - pot[v];
                    queue.push_back(w);
                }
            }
        }
        let v = pot.split_off(self.n);
        (pot, v)
    }

    /// Basic cells on the tree path from row `i` to column `j`, listed
    /// starting next to row `i`.
    fn path(&self, adj: &[Vec<usize>], i: usize, j: usize) -> Vec<usize> {
        let target = self.n + j;
        let mut via = vec![usize::MAX; self.n + self.m];
        let mut seen = vec![false; self.n + self.m];
        seen[i] = true;
        let mut queue = VecDeque::from([i]);
        while let Some(v) = queue.pop_front() {
            if v == target {
                break;
            }
            for &k in &adj[v] {
                let w = self.other_end(k, v);
                if !seen[w] {
                    seen[w] = true;
                    via[w] = k;
                    queue.push_back(w);
                }
            }
        }
        let mut path = Vec::new();
        let mut v = target;
        while v != i {
            let k = via[v];
            path.push(k);
            v = self.other_end(k, v);
        }
        path.reverse();
        path
    }
}

/// Solves `min sum c_ij x_ij` subject to row sums `supply`, column sums
/// `demand`, `x >= 0`. Both marginals must carry the same total mass.
pub fn solve(supply: &[f64], demand: &[f64], cost: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let (n, m) = (supply.len(), demand.len());
    if n == 0 || m == 0 {
        return Err(Error::EmptyMeasure);
    }
    if cost.len() != n || cost.iter().any(|r| r.len() != m) {
        return Err(Error::DimensionMismatch {
            expected: n * m,
            got: cost.iter().map(Vec::len).sum(),
        });
    }
    let scale = cost
        .iter()
        .flatten()
        .fold(1.0f64, |acc, c| acc.max(c.abs()));
    let eps = 1e-12 * scale;

    let mut basis = Basis::north_west(supply, demand);
    let max_pivots = 10_000 + 50 * n * m;
    let mut pivots = 0;
    loop {
        let adj = basis.adjacency();
        let (u, v) = basis.potentials(&adj, cost);

        let mut entering = None;
        'scan: for i in 0..n {
            for j in 0..m {
                if basis.slot[i * m + j] == NOT_BASIC && cost[i][j] - u[i] - v[j] < -eps {
                    entering = Some((i, j));
                    break 'scan;
                }
            }
        }
        let Some((ei, ej)) = entering else { break };

        pivots += 1;
        if pivots > max_pivots {
            return Err(Error::SolverStalled(max_pivots));
        }

        // Alternating cycle: entering +, then -, +, ... along the path from
        // row ei to column ej; the path has odd length and starts and ends
        // with a decreasing cell.
        let path = basis.path(&adj, ei, ej);
        let mut theta = f64::INFINITY;
        let mut leaving = usize::MAX;
        let mut leaving_index = usize::MAX;
        for &k in path.iter().step_by(2) {
            let (i, j) = basis.cells[k];
            let f = basis.flow[k];
            let idx = i * m + j;
            if f < theta || (f == theta && idx < leaving_index) {
                theta = f;
                leaving = k;
                leaving_index = idx;
            }
        }
        for (pos, &k) in path.iter().enumerate() {
            if pos % 2 == 0 {
                basis.flow[k] = (basis.flow[k] - theta).max(0.0);
            } else {
                basis.flow[k] += theta;
            }
        }
        let (li, lj) = basis.cells[leaving];
        basis.slot[li * m + lj] = NOT_BASIC;
        basis.cells[leaving] = (ei, ej);
        basis.flow[leaving] = theta;
        basis.slot[ei * m + ej] = leaving as u32;
    }

    let mut plan = vec![vec![0.0; m]; n];
    for (&(i, j), &f) in basis.cells.iter().zip(&basis.flow) {
        plan[i][j] = f;
    }
    Ok(plan)
}
