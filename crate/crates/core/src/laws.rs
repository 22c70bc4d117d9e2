//! Seeded randomized checks of the metric, transport and monad identities.
//!
//! Every group of laws draws from its own ChaCha8 stream: the generator is
//! seeded with `ChaCha8Rng::seed_from_u64(seed)` and then switched to stream
//! `k` for the `k`-th group, so adding or reordering instances in one group
//! never changes the instances of another.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::measure::{FiniteMeasure, Measure, SecondOrderMeasure, ThirdOrderMeasure};
use crate::monad::{
    barycenter, check_algebra, check_monad_laws, lifted_pseudometric, reweight_series_check, second_order_distance,
    unit, unit2, ConvexSpace, LawReport, LawTally,
};
use crate::space::{pullback, GroundSpace, Metric, Point, PointMap};
use crate::transport::{
    self, brute_force_distance, independent_coupling, kantorovich, kantorovich_by, lipschitz_gap,
    mass_transport_bound_check, partition_coupling, MassTransport,
};

/// Thin wrapper over a seeded ChaCha8 generator with the instance shapes
/// used by the suite.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.rng.random::<f64>()
    }

    /// Uniform integer in `lo..=hi`.
    pub fn size(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.random_range(lo..=hi)
    }

    pub fn point(&mut self, dim: usize, lo: f64, hi: f64) -> Point {
        Point::Coords((0..dim).map(|_| self.uniform(lo, hi)).collect())
    }

    /// Point with integer coordinates in `0..side`.
    pub fn grid_point(&mut self, dim: usize, side: u32) -> Point {
        Point::Coords((0..dim).map(|_| self.rng.random_range(0..side) as f64).collect())
    }

    /// Rational weights `k_i / sum k` with `k_i` in `1..=9`.
    pub fn weights(&mut self, n: usize) -> Vec<f64> {
        let k: Vec<u32> = (0..n).map(|_| self.rng.random_range(1..=9)).collect();
        let total: u32 = k.iter().sum();
        k.iter().map(|&k| k as f64 / total as f64).collect()
    }

    /// Measure with `n` drawn atoms and rational weights. Coinciding atoms
    /// merge, so the support can be smaller than `n`.
    pub fn measure<T: crate::Atom>(&mut self, n: usize, mut atom: impl FnMut(&mut Self) -> T) -> FiniteMeasure<T> {
        let atoms: Vec<T> = (0..n).map(|_| atom(self)).collect();
        let w = self.weights(n);
        FiniteMeasure::new(atoms.into_iter().zip(w).collect()).expect("rational weights sum to one")
    }

    /// Uniform measure on `n` independent points.
    pub fn uniform_measure(&mut self, n: usize, mut atom: impl FnMut(&mut Self) -> Point) -> Measure {
        let atoms: Vec<Point> = (0..n).map(|_| atom(self)).collect();
        Measure::uniform(atoms).expect("non-empty")
    }

    /// Measure supported on a random subset of `points`.
    pub fn measure_on(&mut self, points: &[Point], max_atoms: usize) -> Measure {
        let n = self.size(1, max_atoms.min(points.len()));
        let idx = rand::seq::index::sample(&mut self.rng, points.len(), n);
        let atoms: Vec<Point> = idx.iter().map(|i| points[i].clone()).collect();
        let w = self.weights(n);
        Measure::new(atoms.into_iter().zip(w).collect()).expect("rational weights sum to one")
    }
}

/// Parameters of a suite run.
#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Instances per law group.
    pub samples: usize,
    /// Cost, weight and measure-equality tolerance.
    pub tol: f64,
    /// Tolerance for the pseudometric axioms of the lifted distance.
    pub axiom_tol: f64,
    /// Tolerance for exact geometric identities.
    pub geometry_tol: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            samples: 200,
            tol: 1e-9,
            axiom_tol: 1e-8,
            geometry_tol: 1e-12,
        }
    }
}

type Cell = Box<dyn Fn(&Point) -> bool>;

type Group = fn(&mut Sampler, &SuiteConfig) -> Result<Vec<LawReport>>;

const GROUPS: &[Group] = &[
    oracle_equivalence,
    metric_axioms,
    dirac_and_diameter,
    attainment,
    monad_laws,
    algebra_laws,
    embeddings,
    sup_distance,
    convexity,
    mass_transport,
    second_order,
    lifting,
    partitions,
    lipschitz,
];

/// Runs every law group and returns one report per law.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<LawReport>> {
    let mut out = Vec::new();
    for (k, group) in GROUPS.iter().enumerate() {
        let mut s = Sampler::new(cfg.seed, k as u64);
        out.extend(group(&mut s, cfg)?);
    }
    Ok(out)
}

pub fn all_pass(reports: &[LawReport]) -> bool {
    reports.iter().all(|r| r.pass)
}

fn plane() -> GroundSpace {
    GroundSpace::of_metric(Metric::euclidean())
}

fn unit_square(s: &mut Sampler) -> Point {
    s.point(2, 0.0, 1.0)
}

fn oracle_equivalence(s: &mut Sampler, cfg: &SuiteConfig) -> Result<Vec<LawReport>> {
    let space = plane();
    let mut perm = LawTally::new("oracle-permutation", cfg.tol);
    let mut vert = LawTally::new("oracle-vertex", cfg.tol);
    for _ in 0..cfg.samples {
        let n = s.size(1, 7);
        let mu = s.uniform_measure(n, unit_square);
        let eta = s.uniform_measure(n, unit_square);
        let fast = kantorovich(&space, &mu, &eta)?.cost;
        perm.record((fast - brute_force_distance(&space, &mu, &eta)?.cost).abs());

        let (a, b) = (s.size(1, 4), s.size(1, 4));
        let mu = s.measure(a, unit_square);
        let eta = s.measure(b, unit_square);
        let fast = kantorovich(&space, &mu, &eta)?.cost;
        vert.record((fast - brute_force_distance(&space, &mu, &eta)?.cost).abs());
    }
    Ok(vec![perm.report(), vert.report()])
}

fn metric_axioms(s: &mut Sampler, cfg: &SuiteConfig) -> Result<Vec<LawReport>> {
    let mut out = Vec::new();
    for (name, metric, grid) in [
        ("euclidean", Metric::euclidean(), false),
        ("manhattan", Metric::manhattan(), false),
        ("discrete", Metric::discrete(), true),
    ] {
        let space = GroundSpace::of_metric(metric);
        let mut zero = LawTally::new(format!("dhat-identity-{name}"), cfg.axiom_tol);
        let mut sym = LawTally::new(format!("dhat-symmetry-{name}"), cfg.axiom_tol);
        let mut tri = LawTally::new(format!("dhat-triangle-{name}"), cfg.axiom_tol);
        let draw = |s: &mut Sampler| {
            let n = s.size(1, 5);
            if grid {
                s.measure(n, |s| s.grid_point(2, 3))
            } else {
                s.measure(n, unit_square)
            }
        };
        for _ in 0..cfg.samples {
            let (mu, eta, nu) = (draw(s), draw(s), draw(s));
            let d = |a: &Measure, b: &Measure| transport::distance(&space, a, b);
            let (me, en, mn) = (d(&mu, &eta)?, d(&eta, &nu)?, d(&mu, &nu)?);
            zero.record(d(&mu, &mu)?.abs());
            sym.record((me - d(&eta, &mu)?).abs());
            tri.record_le(mn, me + en);
        }
        out.extend([zero.report(), sym.report(), tri.report()]);
    }
    Ok(out)
}

fn dirac_and_diameter(s: &mut Sampler, cfg: &SuiteConfig) -> Result<Vec<LawReport>> {
    let points: Vec<Point> = (0..20).map(|_| unit_square(s)).collect();
    let space = GroundSpace::new(points.clone(), Metric::euclidean())?;
    let mut iso = LawTally::new("dirac-isometry", cfg.geometry_tol);
    for x in &points {
        for y in &points {
            let lifted = kantorovich(&space, &unit(x.clone()), &unit(y.clone()))?.cost;
            iso.record((lifted - space.distance(x, y)?).abs());
        }
    }
    let (diam, i, j) = space.diameter_pair()?;
    let mut bound = LawTally::new("diameter-bound", cfg.tol);
    for _ in 0..cfg.samples {
        let mu = s.measure_on(&points, 6);
        let eta = s.measure_on(&points, 6);
        bound.record_le(transport::distance(&space, &mu, &eta)?, diam);
    }
    let mut attained = LawTally::new("diameter-attained", cfg.geometry_tol);
    let at = transport::distance(&space, &unit(points[i].clone()), &unit(points[j].clone()))?;
    attained.record((at - diam).abs());
    Ok(vec![iso.report(), bound.report(), attained.report()])
}

fn attainment(s: &mut Sampler, cfg: &SuiteConfig) -> Result<Vec<LawReport>> {
    let space = plane();
    let mut feasible = LawTally::new("coupling-feasible", cfg.tol);
    let mut recompute = LawTally::new("coupling-cost-recomputed", cfg.tol);
    let mut below = LawTally::new("coupling-below-independent", cfg.tol);
    for _ in 0..cfg.samples {
        let (a, b) = (s.size(1, 8), s.size(1, 8));
        let mu = s.measure(a, unit_square);
        let eta = s.measure(b, unit_square);
        let r = kantorovich(&space, &mu, &eta)?;
        feasible.record(r.coupling.marginal_error(&mu, &eta));
        recompute.record((r.coupling.cost_in(&space)? - r.cost).abs());
        below.record_le(r.cost, independent_coupling(&mu, &eta).cost_in(&space)?);
    }
    Ok(vec![feasible.report(), recompute.report(), below.report()])
}

fn third_order(s: &mut Sampler) -> ThirdOrderMeasure {
    let outer = s.size(1, 3);
    s.measure(outer, |s| {
        let mid = s.size(1, 3);
        s.measure(mid, |s| {
            let inner = s.size(1, 4);
            s.measure(inner, |s| s.grid_point(1, 5))
        })
    })
}

fn monad_laws(s: &mut Sampler, cfg: &SuiteConfig) -> Result<Vec<LawReport>> {
    let samples: Vec<ThirdOrderMeasure> = (0..cfg.samples).map(|_| third_order(s)).collect();
    Ok(check_monad_laws(&samples, cfg.tol))
}

fn affine_map(s: &mut Sampler, from: usize, to: usize) -> PointMap {
    let a: Vec<Vec<f64>> = (0..to).map(|_| (0..from).map(|_| s.uniform(-2.0, 2.0)).collect()).collect();
    let b: Vec<f64> = (0..to).map(|_| s.uniform(-1.0, 1.0)).collect();
    PointMap::custom(move |p| {
        let x = p
            .as_coords()
            .ok_or_else(|| Error::PointKind(format!("affine map needs coordinates, got {p}")))?;
        if x.len() != from {
            return Err(Error::DimensionMismatch {
                expected: from,
                got: x.len(),
            });
        }
        Ok(Point::Coords(
            a.iter()
                .zip(&b)
                .map(|(row, c)| row.iter().zip(x).map(|(r, x)| r * x).sum::<f64>() + c)
                .collect(),
        ))
    })
}

fn algebra_laws(s: &mut Sampler, cfg: &SuiteConfig) -> Result<Vec<LawReport>> {
    let r3 = ConvexSpace::euclidean(3);
    let r2 = ConvexSpace::euclidean(2);
    let f = affine_map(s, 3, 2);
    let samples: Vec<SecondOrderMeasure> = (0..cfg.samples)
        .map(|_| {
            let outer = s.size(1, 4);
            s.measure(outer, |s| {
                let n = s.size(1, 4);
                s.measure(n, |s| s.point(3, -1.0, 1.0))
            })
        })
        .collect();
    let mut out = check_algebra(&r3, &samples, Some((&f, &r2)), cfg.tol)?;

    let mut affinity = LawTally::new("barycenter-affine", cfg.geometry_tol);
    for _ in 0..cfg.samples {
        let (a, b) = (s.size(1, 4), s.size(1, 4));
        let mu = s.measure(a, |s| s.point(3, -1.0, 1.0));
        let eta = s.measure(b, |s| s.point(3, -1.0, 1.0));
        let t = s.uniform(0.0, 1.0);
        let lhs = barycenter(&r3, &mu.mix2(&eta, t)?)?;
        let (bm, be) = (barycenter(&r3, &mu)?, barycenter(&r3, &eta)?);
        let rhs: Vec<f64> = bm
            .as_coords()
            .unwrap_or_default()
            .iter()
            .zip(be.as_coords().unwrap_or_default())
            .map(|(x, y)| t * x + (1.0 - t) * y)
            .collect();
        let dev = lhs
            .as_coords()
            .unwrap_or_default()
            .iter()
            .zip(&rhs)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        affinity.record(dev);
    }
    out.push(affinity.report());
    Ok(out)
}

fn embeddings(s: &mut Sampler, cfg: &SuiteConfig) -> Result<Vec<LawReport>> {
    let space = plane();
    let mut iso = LawTally::new("isometry-preserved", cfg.axiom_tol);
    let mut nonexp = LawTally::new("non-expansion-preserved", cfg.tol);
    for _ in 0..cfg.samples {
        let (a, b) = (s.size(1, 6), s.size(1, 6));
        let mu = s.measure(a, unit_square);
        let eta = s.measure(b, unit_square);
        let base = transport::distance(&space, &mu, &eta)?;

        // rigid motion of the plane
        let theta = s.uniform(0.0, std::f64::consts::TAU);
        let shift = (s.uniform(-3.0, 3.0), s.uniform(-3.0, 3.0));
        let (c, si) = (theta.cos(), theta.sin());
        let rigid = |p: &Point| -> Result<Point> {
            let x = p.as_coords().ok_or_else(|| Error::PointKind(p.to_string()))?;
            Ok(Point::Coords(vec![c * x[0] - si * x[1] + shift.0, si * x[0] + c * x[1] + shift.1]))
        };
        let moved = transport::distance(&space, &mu.try_map(rigid)?, &eta.try_map(rigid)?)?;
        iso.record((moved - base).abs());

        // contraction followed by projection to the first axis
        let k = s.uniform(0.0, 1.0);
        let squash = |p: &Point| -> Result<Point> {
            let x = p.as_coords().ok_or_else(|| Error::PointKind(p.to_string()))?;
            Ok(Point::Coords(vec![k * x[0]]))
        };
        let line = GroundSpace::of_metric(Metric::euclidean());
        let squashed = transport::distance(&line, &mu.try_map(squash)?, &eta.try_map(squash)?)?;
        nonexp.record_le(squashed, base);
    }
    Ok(vec![iso.report(), nonexp.report()])
}

fn sup_distance(s: &mut Sampler, cfg: &SuiteConfig) -> Result<Vec<LawReport>> {
    let space = plane();
    let mut bound = LawTally::new("sup-distance-bound", cfg.tol);
    let mut attained = LawTally::new("sup-distance-attained", cfg.tol);
    let pairs = cfg.samples.div_ceil(4).max(1);
    for _ in 0..pairs {
        let domain: Vec<Point> = (0..10).map(|_| unit_square(s)).collect();
        let f: Vec<Point> = (0..10).map(|_| unit_square(s)).collect();
        let g: Vec<Point> = (0..10).map(|_| unit_square(s)).collect();
        let lookup = |img: &[Point], x: &Point| -> Result<Point> {
            domain
                .iter()
                .position(|d| d.same_as(x))
                .map(|i| img[i].clone())
                .ok_or_else(|| Error::MapUndefined(x.to_string()))
        };
        let mut sup = 0.0f64;
        let mut arg = 0;
        for i in 0..10 {
            let d = space.distance(&f[i], &g[i])?;
            if d > sup {
                sup = d;
                arg = i;
            }
        }
        for _ in 0..100 {
            let mu = s.measure_on(&domain, 10);
            let lhs = transport::distance(&space, &mu.try_map(|x| lookup(&f, x))?, &mu.try_map(|x| lookup(&g, x))?)?;
            bound.record_le(lhs, sup);
        }
        let at = transport::distance(&space, &unit(f[arg].clone()), &unit(g[arg].clone()))?;
        attained.record((at - sup).abs());
    }
    Ok(vec![bound.report(), attained.report()])
}

fn convexity(s: &mut Sampler, cfg: &SuiteConfig) -> Result<Vec<LawReport>> {
    let mut out = Vec::new();
    for (name, metric) in [("euclidean", Metric::euclidean()), ("manhattan", Metric::manhattan())] {
        let space = GroundSpace::of_metric(metric);
        let r2 = ConvexSpace::euclidean(2);
        let mut convex = LawTally::new(format!("dhat-convex-{name}"), cfg.tol);
        let mut bary = LawTally::new(format!("barycenter-non-expanding-{name}"), cfg.tol);
        for _ in 0..cfg.samples {
            let draw = |s: &mut Sampler| {
                let n = s.size(1, 4);
                s.measure(n, unit_square)
            };
            let (mu, mu2, nu, nu2) = (draw(s), draw(s), draw(s), draw(s));
            let d = |a: &Measure, b: &Measure| transport::distance(&space, a, b);
            let (dm, dn) = (d(&mu, &mu2)?, d(&nu, &nu2)?);
            for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
                let lhs = d(&mu.mix2(&nu, t)?, &mu2.mix2(&nu2, t)?)?;
                convex.record_le(lhs, t * dm + (1.0 - t) * dn);
            }
            let gap = space.distance(&barycenter(&r2, &mu)?, &barycenter(&r2, &mu2)?)?;
            bary.record_le(gap, dm);
        }
        out.extend([convex.report(), bary.report()]);
    }
    Ok(out)
}

fn mass_transport(s: &mut Sampler, cfg: &SuiteConfig) -> Result<Vec<LawReport>> {
    let space = plane();
    let mut law = LawTally::new("mass-transport-bound", 0.0);
    let mut tries = 0;
    while law.report().samples < cfg.samples {
        tries += 1;
        if tries > 100 * cfg.samples.max(1) {
            return Err(Error::Precondition("could not generate applicable mass-transport instances".into()));
        }
        let eps = s.uniform(0.05, 1.0);
        let delta = s.uniform(0.05, 1.0);
        let n = s.size(1, 6);
        let mu = s.measure(n, unit_square);
        // K: a prefix of the support carrying at least 1 - eps/2
        let mut k_atoms = Vec::new();
        let mut mass = 0.0;
        for (x, w) in mu.iter() {
            if mass >= 1.0 - eps / 2.0 {
                break;
            }
            k_atoms.push(x.clone());
            mass += w;
        }
        // move every atom by at most eps * delta / 2
        let budget = eps * delta / 2.0;
        let mut moved = Vec::with_capacity(mu.len());
        for (x, w) in mu.iter() {
            let c = x.as_coords().unwrap_or_default();
            let r = budget * s.uniform(0.0, 1.0);
            let a = s.uniform(0.0, std::f64::consts::TAU);
            moved.push((Point::Coords(vec![c[0] + r * a.cos(), c[1] + r * a.sin()]), w));
        }
        let eta = Measure::new(moved)?;
        let in_k = |p: &Point| k_atoms.iter().any(|q| q.same_as(p));
        match mass_transport_bound_check(&space, &mu, &eta, in_k, eps, delta)? {
            MassTransport::Checked { holds, .. } => law.record_bool(holds),
            MassTransport::NotApplicable => continue,
        }
    }
    Ok(vec![law.report()])
}

fn second_order(s: &mut Sampler, cfg: &SuiteConfig) -> Result<Vec<LawReport>> {
    let line = GroundSpace::of_metric(Metric::euclidean());
    let mut psi = LawTally::new("flatten-non-expanding", cfg.tol);
    let mut dirac = LawTally::new("dirac-flatten-equality", cfg.axiom_tol);
    let mut iso = LawTally::new("dirac2-isometry", cfg.axiom_tol);
    let draw = |s: &mut Sampler| -> SecondOrderMeasure {
        let outer = s.size(1, 3);
        s.measure(outer, |s| {
            let n = s.size(1, 5);
            s.measure(n, |s| s.point(1, 0.0, 4.0))
        })
    };
    for _ in 0..cfg.samples {
        let (m, n) = (draw(s), draw(s));
        let dd = second_order_distance(&line, &m, &n)?.cost;
        psi.record_le(transport::distance(&line, &m.flatten(), &n.flatten())?, dd);

        let x = s.point(1, 0.0, 4.0);
        let lhs = second_order_distance(&line, &unit2(unit(x.clone())), &m)?.cost;
        let rhs = transport::distance(&line, &unit(x), &m.flatten())?;
        dirac.record((lhs - rhs).abs());

        let (mu, eta) = (m.atoms()[0].clone(), n.atoms()[0].clone());
        let lifted = second_order_distance(&line, &unit2(mu.clone()), &unit2(eta.clone()))?.cost;
        iso.record((lifted - transport::distance(&line, &mu, &eta)?).abs());
    }
    Ok(vec![psi.report(), dirac.report(), iso.report()])
}

fn lifting(s: &mut Sampler, cfg: &SuiteConfig) -> Result<Vec<LawReport>> {
    let mut direct = LawTally::new("lifted-equals-direct", cfg.tol);
    let mut commute = LawTally::new("lifted-pullback-commutes", cfg.tol);
    let mut rew = LawTally::new("reweight-identity", 0.0);

    let plane3 = GroundSpace::of_metric(Metric::euclidean());
    let flat = GroundSpace::of_metric(Metric::euclidean());
    for _ in 0..cfg.samples {
        // pseudometrics on a grid so that classes actually collapse
        let p = match s.size(0, 2) {
            0 => Metric::coordinate(0),
            1 => pullback(PointMap::Project(vec![0, 2]), Metric::manhattan()),
            _ => Metric::coordinate(1).with_cap(2.0)?,
        };
        let (a, b) = (s.size(1, 5), s.size(1, 5));
        let mu = s.measure(a, |s| s.grid_point(3, 3));
        let eta = s.measure(b, |s| s.grid_point(3, 3));
        let lifted = lifted_pseudometric(&plane3, &p, &mu, &eta)?;
        let by_cost = kantorovich_by(&mu, &eta, |x, y| p.distance(x, y))?.cost;
        direct.record((lifted - by_cost).abs());

        // rho = p' o (f x f) with f the projection R^3 -> R^2
        let f = PointMap::Project(vec![s.size(0, 2), s.size(0, 2)]);
        let inner = Metric::coordinate(s.size(0, 1));
        let rho = pullback(f.clone(), inner.clone());
        let lhs = lifted_pseudometric(&plane3, &rho, &mu, &eta)?;
        let rhs = lifted_pseudometric(&flat, &inner, &mu.try_map(|x| f.apply(x))?, &eta.try_map(|x| f.apply(x))?)?;
        commute.record((lhs - rhs).abs());
    }
    for _ in 0..cfg.samples / 2 {
        let (xs, lambda, m, eps) = reweight_instance(s);
        rew.record_bool(reweight_series_check(&xs, &lambda, m, &eps)?);
    }
    Ok(vec![direct.report(), commute.report(), rew.report()])
}

/// Random feasible input of the reweighting identity in `R^3`.
pub fn reweight_instance(s: &mut Sampler) -> (Vec<Vec<f64>>, Vec<f64>, usize, Vec<f64>) {
    let k = s.size(1, 6);
    let xs: Vec<Vec<f64>> = (0..k).map(|_| (0..3).map(|_| s.uniform(-1.0, 1.0)).collect()).collect();
    let lambda = s.weights(k);
    let m = s.size(0, k - 1);
    let rest: f64 = 1.0 - lambda[m];
    // eps_n >= rest keeps sum lambda_n / eps_n <= rest / rest = 1
    let eps = (0..k)
        .map(|n| if n == m { 1.0 } else { s.uniform(rest.max(1e-3), 1.0) })
        .collect();
    (xs, lambda, m, eps)
}

fn partitions(s: &mut Sampler, cfg: &SuiteConfig) -> Result<Vec<LawReport>> {
    let line = GroundSpace::of_metric(Metric::euclidean());
    let mut feasible = LawTally::new("partition-feasible", cfg.tol);
    let mut diagonal = LawTally::new("partition-diagonal-mass", cfg.tol);
    let mut above = LawTally::new("partition-above-optimum", cfg.tol);
    for _ in 0..cfg.samples {
        let (a, b) = (s.size(1, 6), s.size(1, 6));
        let mu0 = s.measure(a, |s| s.point(1, 0.0, 10.0));
        let mu = s.measure(b, |s| s.point(1, 0.0, 10.0));
        let cells_n = s.size(2, 4);
        let mut cuts: Vec<f64> = (0..=cells_n).map(|_| s.uniform(0.0, 10.0)).collect();
        cuts.sort_by(f64::total_cmp);
        // half-open intervals [cuts[i], cuts[i+1]); the rest of the line is V_0
        let bounds: Vec<(f64, f64)> = cuts.windows(2).map(|w| (w[0], w[1])).collect();
        let cell_of = |p: &Point| -> usize {
            let x = p.x().unwrap_or(f64::NAN);
            bounds.iter().position(|&(lo, hi)| lo <= x && x < hi).map_or(0, |i| i + 1)
        };
        let preds: Vec<Cell> = (0..bounds.len())
            .map(|i| {
                let (lo, hi) = bounds[i];
                Box::new(move |p: &Point| p.x().is_some_and(|x| lo <= x && x < hi)) as Cell
            })
            .collect();
        let cells: Vec<&dyn Fn(&Point) -> bool> = preds.iter().map(|b| b.as_ref()).collect();
        let c = partition_coupling(&mu0, &mu, &cells)?;
        feasible.record(c.marginal_error(&mu0, &mu));
        for i in 0..=bounds.len() {
            let on_block = c.mass_where(|x, y| cell_of(x) == i && cell_of(y) == i);
            let expect = mu0.mass_where(|x| cell_of(x) == i).min(mu.mass_where(|x| cell_of(x) == i));
            diagonal.record((on_block - expect).abs());
        }
        above.record_le(kantorovich(&line, &mu0, &mu)?.cost, c.cost_in(&line)?);
    }
    Ok(vec![feasible.report(), diagonal.report(), above.report()])
}

fn lipschitz(s: &mut Sampler, cfg: &SuiteConfig) -> Result<Vec<LawReport>> {
    let space = plane();
    let mut law = LawTally::new("lipschitz-gap", cfg.tol);
    for _ in 0..cfg.samples {
        // L * min_k (|x - a_k| + c_k) is L-Lipschitz
        let anchors: Vec<(Point, f64)> = (0..s.size(1, 3)).map(|_| (unit_square(s), s.uniform(0.0, 1.0))).collect();
        let l = s.uniform(0.1, 3.0);
        let f = |x: &Point| {
            l * anchors
                .iter()
                .map(|(a, c)| space.distance(x, a).unwrap_or(f64::NAN) + c)
                .fold(f64::INFINITY, f64::min)
        };
        let (a, b) = (s.size(1, 5), s.size(1, 5));
        let mu = s.measure(a, unit_square);
        let eta = s.measure(b, unit_square);
        let g = lipschitz_gap(&space, &mu, &eta, f, l)?;
        law.record_le(g.gap, g.bound);
    }
    Ok(vec![law.report()])
}
