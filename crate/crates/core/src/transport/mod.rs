//! The Kantorovich metric as an exact transportation problem, explicit
//! couplings, and the checks built on optimal couplings.

pub mod oracle;
pub mod simplex;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{assign_cells, Atom, FiniteMeasure, Measure, WEIGHT_TOL};
use crate::space::{GroundSpace, Point};

/// Tolerance for cost equalities.
pub const COST_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    NetworkSimplex,
    BrutePermutation,
    VertexEnumeration,
}

/// Joint measure on `rows x cols` given as a dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Coupling<T> {
    rows: Vec<T>,
    cols: Vec<T>,
    gamma: Vec<Vec<f64>>,
}

impl<T: Atom> Coupling<T> {
    pub fn new(rows: Vec<T>, cols: Vec<T>, gamma: Vec<Vec<f64>>) -> Result<Self> {
        if gamma.len() != rows.len() || gamma.iter().any(|r| r.len() != cols.len()) {
            return Err(Error::DimensionMismatch {
                expected: rows.len() * cols.len(),
                got: gamma.iter().map(Vec::len).sum(),
            });
        }
        if let Some(&g) = gamma.iter().flatten().find(|g| !g.is_finite() || **g < 0.0) {
            return Err(Error::InvalidWeight(g));
        }
        Ok(Self { rows, cols, gamma })
    }

    pub fn rows(&self) -> &[T] {
        &self.rows
    }

    pub fn cols(&self) -> &[T] {
        &self.cols
    }

    pub fn gamma(&self) -> &[Vec<f64>] {
        &self.gamma
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.gamma.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        (0..self.cols.len())
            .map(|j| self.gamma.iter().map(|r| r[j]).sum())
            .collect()
    }

    /// Largest deviation of the marginals from `mu` and `eta`.
    pub fn marginal_error(&self, mu: &FiniteMeasure<T>, eta: &FiniteMeasure<T>) -> f64 {
        let rows = marginal_deviation(&self.rows, &self.row_sums(), mu);
        let cols = marginal_deviation(&self.cols, &self.col_sums(), eta);
        rows.max(cols)
    }

    pub fn is_feasible(&self, mu: &FiniteMeasure<T>, eta: &FiniteMeasure<T>, tol: f64) -> bool {
        self.gamma.iter().flatten().all(|&g| g >= 0.0) && self.marginal_error(mu, eta) <= tol
    }

    /// `sum_ij gamma_ij c_ij` for a cost matrix aligned with rows and cols.
    pub fn cost_with(&self, cost: &[Vec<f64>]) -> f64 {
        self.gamma
            .iter()
            .zip(cost)
            .map(|(g, c)| g.iter().zip(c).map(|(a, b)| a * b).sum::<f64>())
            .sum()
    }

    pub fn cost_by(&self, mut dist: impl FnMut(&T, &T) -> Result<f64>) -> Result<f64> {
        let mut total = 0.0;
        for (x, row) in self.rows.iter().zip(&self.gamma) {
            for (y, &g) in self.cols.iter().zip(row) {
                if g > 0.0 {
                    total += g * dist(x, y)?;
                }
            }
        }
        Ok(total)
    }

    /// Total mass on pairs satisfying `pred`.
    pub fn mass_where(&self, pred: impl Fn(&T, &T) -> bool) -> f64 {
        let mut total = 0.0;
        for (x, row) in self.rows.iter().zip(&self.gamma) {
            for (y, &g) in self.cols.iter().zip(row) {
                if pred(x, y) {
                    total += g;
                }
            }
        }
        total
    }

    /// The coupling as a measure on pairs.
    pub fn to_measure(&self) -> Result<FiniteMeasure<(T, T)>> {
        let mut atoms = Vec::new();
        for (x, row) in self.rows.iter().zip(&self.gamma) {
            for (y, &g) in self.cols.iter().zip(row) {
                atoms.push(((x.clone(), y.clone()), g));
            }
        }
        FiniteMeasure::new(atoms)
    }
}

impl Coupling<Point> {
    pub fn cost_in(&self, space: &GroundSpace) -> Result<f64> {
        self.cost_by(|x, y| space.distance(x, y))
    }
}

fn marginal_deviation<T: Atom>(atoms: &[T], weights: &[f64], target: &FiniteMeasure<T>) -> f64 {
    let mut dev = 0.0f64;
    let mut covered = 0.0;
    for (a, &w) in atoms.iter().zip(weights) {
        let t = target.weight_of(a);
        covered += t;
        dev = dev.max((w - t).abs());
    }
    // target atoms missing from the coupling's support
    dev.max((1.0 - covered).abs())
}

/// Optimal cost with an attaining coupling.
#[derive(Clone, Debug)]
pub struct TransportResult<T> {
    pub cost: f64,
    pub coupling: Coupling<T>,
    pub solver: Solver,
}

/// Ground-cost matrix between the supports of `mu` and `eta`.
pub fn cost_matrix<T: Atom>(
    mu: &FiniteMeasure<T>,
    eta: &FiniteMeasure<T>,
    mut dist: impl FnMut(&T, &T) -> Result<f64>,
) -> Result<Vec<Vec<f64>>> {
    mu.atoms()
        .iter()
        .map(|x| eta.atoms().iter().map(|y| dist(x, y)).collect())
        .collect()
}

/// Exact transport with a precomputed cost matrix (network simplex).
pub fn solve_with_costs<T: Atom>(
    mu: &FiniteMeasure<T>,
    eta: &FiniteMeasure<T>,
    cost: &[Vec<f64>],
) -> Result<TransportResult<T>> {
    let plan = simplex::solve(mu.weights(), eta.weights(), cost)?;
    let coupling = Coupling::new(mu.atoms().to_vec(), eta.atoms().to_vec(), plan)?;
    Ok(TransportResult {
        cost: coupling.cost_with(cost),
        coupling,
        solver: Solver::NetworkSimplex,
    })
}

/// Kantorovich distance for an arbitrary ground distance on atoms.
pub fn kantorovich_by<T: Atom>(
    mu: &FiniteMeasure<T>,
    eta: &FiniteMeasure<T>,
    dist: impl FnMut(&T, &T) -> Result<f64>,
) -> Result<TransportResult<T>> {
    let cost = cost_matrix(mu, eta, dist)?;
    solve_with_costs(mu, eta, &cost)
}

/// `d^(mu, eta) = min { lambda(d) : lambda couples mu and eta }`.
pub fn kantorovich(space: &GroundSpace, mu: &Measure, eta: &Measure) -> Result<TransportResult<Point>> {
    kantorovich_by(mu, eta, |x, y| space.distance(x, y))
}

pub fn distance(space: &GroundSpace, mu: &Measure, eta: &Measure) -> Result<f64> {
    kantorovich(space, mu, eta).map(|r| r.cost)
}

/// The product coupling `mu ⊗ eta`.
pub fn independent_coupling<T: Atom>(mu: &FiniteMeasure<T>, eta: &FiniteMeasure<T>) -> Coupling<T> {
    let gamma = mu
        .weights()
        .iter()
        .map(|a| eta.weights().iter().map(|b| a * b).collect())
        .collect();
    Coupling {
        rows: mu.atoms().to_vec(),
        cols: eta.atoms().to_vec(),
        gamma,
    }
}

/// Block coupling of `mu0` and `mu` along a partition `V_1..V_n` of the
/// joint support, with `V_0` the complement of the given cells.
///
/// Each diagonal block `V_i x V_i` receives `min(mu0(V_i), mu(V_i))`. The
/// leftover row masses are matched against leftover column masses by the
/// north-west corner rule over block order `V_0, V_1, .., V_n`. Inside a
/// block of mass `m_ij` the coupling is `m_ij` times the product of the
/// normalized restrictions.
pub fn partition_coupling<T: Atom>(
    mu0: &FiniteMeasure<T>,
    mu: &FiniteMeasure<T>,
    cells: &[&dyn Fn(&T) -> bool],
) -> Result<Coupling<T>> {
    // block 0 is the complement; given cells are shifted by one
    let block = |atoms: &[T]| -> Result<Vec<usize>> {
        Ok(assign_cells(atoms, cells)?
            .into_iter()
            .map(|c| c.map_or(0, |c| c + 1))
            .collect())
    };
    let rows = block(mu0.atoms())?;
    let cols = block(mu.atoms())?;
    let k = cells.len() + 1;

    let mut row_mass = vec![0.0; k];
    for (&b, &w) in rows.iter().zip(mu0.weights()) {
        row_mass[b] += w;
    }
    let mut col_mass = vec![0.0; k];
    for (&b, &w) in cols.iter().zip(mu.weights()) {
        col_mass[b] += w;
    }

    let mut blocks = vec![vec![0.0; k]; k];
    let mut row_left = vec![0.0; k];
    let mut col_left = vec![0.0; k];
    for i in 0..k {
        let d = row_mass[i].min(col_mass[i]);
        blocks[i][i] = d;
        row_left[i] = row_mass[i] - d;
        col_left[i] = col_mass[i] - d;
    }
    // For every block one of the two residuals is zero, so the corner rule
    // below never writes to a diagonal block.
    let (mut i, mut j) = (0, 0);
    while i < k && j < k {
        if row_left[i] <= 0.0 {
            i += 1;
            continue;
        }
        if col_left[j] <= 0.0 {
            j += 1;
            continue;
        }
        let q = row_left[i].min(col_left[j]);
        blocks[i][j] += q;
        row_left[i] -= q;
        col_left[j] -= q;
    }

    let mut gamma = vec![vec![0.0; mu.len()]; mu0.len()];
    for (a, (&bi, &wa)) in rows.iter().zip(mu0.weights()).enumerate() {
        for (b, (&bj, &wb)) in cols.iter().zip(mu.weights()).enumerate() {
            let mass = blocks[bi][bj];
            if mass > 0.0 {
                gamma[a][b] = mass * (wa / row_mass[bi]) * (wb / col_mass[bj]);
            }
        }
    }
    Coupling::new(mu0.atoms().to_vec(), mu.atoms().to_vec(), gamma)
}

/// Brute-force Kantorovich distance: permutation enumeration for uniform
/// measures of equal size, basic-solution enumeration for supports of at
/// most four atoms.
pub fn brute_force_distance(space: &GroundSpace, mu: &Measure, eta: &Measure) -> Result<TransportResult<Point>> {
    brute_force_by(mu, eta, |x, y| space.distance(x, y))
}

pub fn brute_force_by<T: Atom>(
    mu: &FiniteMeasure<T>,
    eta: &FiniteMeasure<T>,
    dist: impl FnMut(&T, &T) -> Result<f64>,
) -> Result<TransportResult<T>> {
    let cost = cost_matrix(mu, eta, dist)?;
    let n = mu.len();
    let uniform = |w: &[f64]| w.iter().all(|x| (x - 1.0 / w.len() as f64).abs() <= 1e-12);
    let (plan, solver) = if n == eta.len()
        && n <= oracle::MAX_PERMUTATION_SIZE
        && uniform(mu.weights())
        && uniform(eta.weights())
    {
        let (_, perm) = oracle::min_over_permutations(&cost)?;
        let mut plan = vec![vec![0.0; n]; n];
        for (i, &j) in perm.iter().enumerate() {
            plan[i][j] = 1.0 / n as f64;
        }
        (plan, Solver::BrutePermutation)
    } else if n <= oracle::MAX_VERTEX_SIZE && eta.len() <= oracle::MAX_VERTEX_SIZE {
        let (_, plan) = oracle::min_over_vertices(mu.weights(), eta.weights(), &cost)?;
        (plan, Solver::VertexEnumeration)
    } else {
        return Err(Error::OracleRegime(format!(
            "{}x{} instance is neither uniform of equal size (<= {}) nor at most {}x{}",
            n,
            eta.len(),
            oracle::MAX_PERMUTATION_SIZE,
            oracle::MAX_VERTEX_SIZE,
            oracle::MAX_VERTEX_SIZE
        )));
    };
    let coupling = Coupling::new(mu.atoms().to_vec(), eta.atoms().to_vec(), plan)?;
    Ok(TransportResult {
        cost: coupling.cost_with(&cost),
        coupling,
        solver,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LipschitzGap {
    /// `|∫f dmu - ∫f deta|`
    pub gap: f64,
    /// `L d^(mu, eta)`
    pub bound: f64,
}

/// Integral gap of an `L`-Lipschitz function against `L` times the
/// Kantorovich distance. The Lipschitz condition is checked on every pair
/// of the joint support.
pub fn lipschitz_gap(
    space: &GroundSpace,
    mu: &Measure,
    eta: &Measure,
    f: impl Fn(&Point) -> f64,
    lipschitz: f64,
) -> Result<LipschitzGap> {
    let support: Vec<&Point> = mu.atoms().iter().chain(eta.atoms()).collect();
    for (i, x) in support.iter().enumerate() {
        for y in &support[i + 1..] {
            let gap = (f(x) - f(y)).abs();
            let bound = lipschitz * space.distance(x, y)?;
            if gap > bound + COST_TOL {
                return Err(Error::Lipschitz {
                    x: x.to_string(),
                    y: y.to_string(),
                    gap,
                    bound,
                });
            }
        }
    }
    let gap = (mu.integrate(&f) - eta.integrate(&f)).abs();
    Ok(LipschitzGap {
        gap,
        bound: lipschitz * distance(space, mu, eta)?,
    })
}

/// Outcome of the mass-transport bound check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MassTransport {
    /// Hypotheses `d^(mu, eta) <= eps delta / 2` and `mu(K) >= 1 - eps/2` hold;
    /// carries whether `eta(O_delta(K)) >= 1 - eps`.
    Checked {
        holds: bool,
        neighbourhood_mass: f64,
    },
    NotApplicable,
}

/// If `mu` concentrates on `K` and `eta` is close to `mu`, then `eta`
/// concentrates on the `delta`-neighbourhood of `K`.
///
/// `K` is taken as the points of `space`, `mu` and `eta` that satisfy the
/// predicate; `O_delta(K) = { x : d(x, K) <= delta }`.
pub fn mass_transport_bound_check(
    space: &GroundSpace,
    mu: &Measure,
    eta: &Measure,
    k: impl Fn(&Point) -> bool,
    eps: f64,
    delta: f64,
) -> Result<MassTransport> {
    if !(eps > 0.0 && delta > 0.0) {
        return Err(Error::Precondition(format!(
            "eps and delta must be positive (got {eps}, {delta})"
        )));
    }
    let d = distance(space, mu, eta)?;
    let mass_k = mu.mass_where(&k);
    if d > eps * delta / 2.0 + COST_TOL || mass_k < 1.0 - eps / 2.0 - WEIGHT_TOL {
        return Ok(MassTransport::NotApplicable);
    }
    let k_points: Vec<&Point> = space
        .points()
        .iter()
        .chain(mu.atoms())
        .chain(eta.atoms())
        .filter(|p| k(p))
        .collect();
    let mut neighbourhood_mass = 0.0;
    for (y, w) in eta.iter() {
        let mut near = false;
        for x in &k_points {
            if space.distance(x, y)? <= delta {
                near = true;
                break;
            }
        }
        if near {
            neighbourhood_mass += w;
        }
    }
    Ok(MassTransport::Checked {
        holds: neighbourhood_mass >= 1.0 - eps - WEIGHT_TOL,
        neighbourhood_mass,
    })
}
