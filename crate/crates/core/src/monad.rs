//! The probability monad on finite measures: unit, flattening, barycenters
//! on convex coordinate spaces, the Kantorovich distance on measures of
//! measures, and the lifted pseudometric through a quotient.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{Measure, SecondOrderMeasure, ThirdOrderMeasure, MEASURE_EQ_TOL};
use crate::space::{quotient, GroundSpace, Metric, Point, PointMap, GEOMETRY_TOL};
use crate::transport::{self, TransportResult};

type Membership = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// Convex subset of `R^n`, optionally cut out by a membership predicate.
#[derive(Clone)]
pub struct ConvexSpace {
    dim: usize,
    membership: Option<Membership>,
}

impl ConvexSpace {
    /// All of `R^dim`.
    pub fn euclidean(dim: usize) -> Self {
        Self {
            dim,
            membership: None,
        }
    }

    pub fn with_membership(dim: usize, f: impl Fn(&[f64]) -> bool + Send + Sync + 'static) -> Self {
        Self {
            dim,
            membership: Some(Arc::new(f)),
        }
    }

    /// The cube `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Self {
        Self::with_membership(dim, move |x| x.iter().all(|c| (lo..=hi).contains(c)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim && self.membership.as_ref().is_none_or(|f| f(x))
    }

    fn check<'a>(&self, p: &'a Point) -> Result<&'a [f64]> {
        let c = p
            .as_coords()
            .ok_or_else(|| Error::PointKind(format!("barycenter needs coordinate points, got {p}")))?;
        if c.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: c.len(),
            });
        }
        if !self.contains(c) {
            return Err(Error::Precondition(format!("{p} lies outside the convex space")));
        }
        Ok(c)
    }
}

impl fmt::Debug for ConvexSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConvexSpace")
            .field("dim", &self.dim)
            .field("restricted", &self.membership.is_some())
            .finish()
    }
}

/// `b(mu) = sum w_i x_i`.
pub fn barycenter(space: &ConvexSpace, mu: &Measure) -> Result<Point> {
    let mut b = vec![0.0; space.dim];
    for (x, w) in mu.iter() {
        for (acc, c) in b.iter_mut().zip(space.check(x)?) {
            *acc += w * c;
        }
    }
    Ok(Point::Coords(b))
}

pub fn unit(x: Point) -> Measure {
    Measure::dirac(x)
}

pub fn unit2(mu: Measure) -> SecondOrderMeasure {
    SecondOrderMeasure::dirac(mu)
}

pub fn flatten(m: &SecondOrderMeasure) -> Measure {
    m.flatten()
}

/// Kantorovich distance on second-order measures with ground distance the
/// first-order Kantorovich distance. The inner distance matrix is computed
/// once per call.
pub fn second_order_distance(
    space: &GroundSpace,
    m: &SecondOrderMeasure,
    n: &SecondOrderMeasure,
) -> Result<TransportResult<Measure>> {
    let inner = transport::cost_matrix(m, n, |a, b| transport::distance(space, a, b))?;
    transport::solve_with_costs(m, n, &inner)
}

/// One law evaluated over a batch of samples.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LawReport {
    pub law: String,
    pub samples: usize,
    pub max_deviation: f64,
    pub pass: bool,
}

/// Running maximum of deviations for one law; a law passes when every
/// recorded deviation is at most `tol`.
#[derive(Clone, Debug)]
pub struct LawTally {
    law: String,
    tol: f64,
    samples: usize,
    max_deviation: f64,
    failed: bool,
}

impl LawTally {
    pub fn new(law: impl Into<String>, tol: f64) -> Self {
        Self {
            law: law.into(),
            tol,
            samples: 0,
            max_deviation: 0.0,
            failed: false,
        }
    }

    pub fn record(&mut self, deviation: f64) {
        self.samples += 1;
        if deviation.is_nan() || deviation > self.tol {
            self.failed = true;
        }
        if deviation.is_nan() || deviation > self.max_deviation {
            self.max_deviation = deviation;
        }
    }

    /// Records `max(0, lhs - rhs)` for an inequality `lhs <= rhs`.
    pub fn record_le(&mut self, lhs: f64, rhs: f64) {
        self.record((lhs - rhs).max(0.0));
    }

    /// Records a boolean outcome as deviation 0 or 1.
    pub fn record_bool(&mut self, ok: bool) {
        self.record(if ok { 0.0 } else { 1.0 });
    }

    pub fn report(&self) -> LawReport {
        LawReport {
            law: self.law.clone(),
            samples: self.samples,
            max_deviation: self.max_deviation,
            pass: !self.failed,
        }
    }
}

fn coord_deviation(a: &Point, b: &Point) -> f64 {
    match (a.as_coords(), b.as_coords()) {
        (Some(x), Some(y)) if x.len() == y.len() => {
            x.iter().zip(y).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max)
        }
        _ => f64::INFINITY,
    }
}

/// Unit laws on `P` and `P²` and associativity on `P³`, measured as the
/// largest weight deviation between both sides.
pub fn check_monad_laws(samples: &[ThirdOrderMeasure], tol: f64) -> Vec<LawReport> {
    let mut unit_left = LawTally::new("monad-unit-left", tol);
    let mut unit_right = LawTally::new("monad-unit-right", tol);
    let mut unit_left2 = LawTally::new("monad-unit-left-p2", tol);
    let mut unit_right2 = LawTally::new("monad-unit-right-p2", tol);
    let mut assoc = LawTally::new("monad-associativity", tol);

    for big in samples {
        for m in big.atoms() {
            unit_left2.record(ThirdOrderMeasure::dirac(m.clone()).flatten().deviation(m));
            unit_right2.record(m.map(|mu| unit2(mu.clone())).flatten().deviation(m));
            for mu in m.atoms() {
                unit_left.record(unit2(mu.clone()).flatten().deviation(mu));
                unit_right.record(mu.map(|x| unit(x.clone())).flatten().deviation(mu));
            }
        }
        let outer_first = big.flatten().flatten();
        let inner_first = big.map(|m| m.flatten()).flatten();
        assoc.record(outer_first.deviation(&inner_first));
    }
    [unit_left, unit_right, unit_left2, unit_right2, assoc]
        .iter()
        .map(LawTally::report)
        .collect()
}

/// Algebra laws of the barycenter map and, when `morphism` is given, the
/// morphism law for an affine map together with an affinity check of that
/// map on the sampled atoms.
pub fn check_algebra(
    space: &ConvexSpace,
    samples: &[SecondOrderMeasure],
    morphism: Option<(&PointMap, &ConvexSpace)>,
    tol: f64,
) -> Result<Vec<LawReport>> {
    let mut unit_law = LawTally::new("algebra-unit", tol);
    let mut assoc = LawTally::new("algebra-associativity", tol);
    let mut morph = LawTally::new("algebra-morphism", tol);
    let mut affine = LawTally::new("algebra-morphism-affine", tol);

    for m in samples {
        for mu in m.atoms() {
            for x in mu.atoms() {
                unit_law.record(coord_deviation(&barycenter(space, &unit(x.clone()))?, x));
            }
        }
        let direct = barycenter(space, &m.flatten())?;
        let staged = barycenter(space, &m.try_map(|mu| barycenter(space, mu))?)?;
        assoc.record(coord_deviation(&direct, &staged));

        if let Some((f, target)) = morphism {
            for mu in m.atoms() {
                let lhs = barycenter(target, &mu.try_map(|x| f.apply(x))?)?;
                let rhs = f.apply(&barycenter(space, mu)?)?;
                morph.record(coord_deviation(&lhs, &rhs));

                let atoms = mu.atoms();
                for (x, y) in atoms.iter().zip(atoms.iter().cycle().skip(1)) {
                    for t in [0.25, 0.5, 0.75] {
                        let combo = Point::Coords(
                            x.as_coords()
                                .unwrap_or_default()
                                .iter()
                                .zip(y.as_coords().unwrap_or_default())
                                .map(|(a, b)| t * a + (1.0 - t) * b)
                                .collect(),
                        );
                        let fx = f.apply(x)?;
                        let fy = f.apply(y)?;
                        let mixed = Point::Coords(
                            fx.as_coords()
                                .unwrap_or_default()
                                .iter()
                                .zip(fy.as_coords().unwrap_or_default())
                                .map(|(a, b)| t * a + (1.0 - t) * b)
                                .collect(),
                        );
                        affine.record(coord_deviation(&f.apply(&combo)?, &mixed));
                    }
                }
            }
        }
    }
    let mut out = vec![unit_law.report(), assoc.report()];
    if morphism.is_some() {
        out.push(morph.report());
        out.push(affine.report());
    }
    Ok(out)
}

/// `p_tau(mu, eta)`: push both measures to the metric quotient of `p` and
/// take the Kantorovich distance there.
pub fn lifted_pseudometric(space: &GroundSpace, p: &Metric, mu: &Measure, eta: &Measure) -> Result<f64> {
    let mut points = space.points().to_vec();
    for x in mu.atoms().iter().chain(eta.atoms()) {
        if !points.iter().any(|q| q.same_as(x)) {
            points.push(x.clone());
        }
    }
    let carrier = GroundSpace::new(points, p.clone())?;
    let (q, pi) = quotient(&carrier, p)?;
    let mu_q = mu.try_map(|x| pi.apply(x))?;
    let eta_q = eta.try_map(|x| pi.apply(x))?;
    transport::distance(&q, &mu_q, &eta_q)
}

/// The rewritten combination `(x'_n, lambda'_n)` with
/// `x'_n = (1 - eps_n) x_m + eps_n x_n`, `lambda'_n = lambda_n / eps_n` for
/// `n != m` and `lambda'_m = 1 - sum_{n != m} lambda'_n`.
pub fn reweight_series(
    xs: &[Vec<f64>],
    lambda: &[f64],
    m: usize,
    eps: &[f64],
) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let k = xs.len();
    if lambda.len() != k || eps.len() != k || m >= k {
        return Err(Error::Precondition(format!(
            "need equal-length points, weights and eps with m < {k}"
        )));
    }
    let dim = xs[0].len();
    if let Some(x) = xs.iter().find(|x| x.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: x.len(),
        });
    }
    if lambda.iter().any(|&l| !l.is_finite() || l < 0.0) {
        return Err(Error::Precondition("weights must be non-negative".into()));
    }
    let total: f64 = lambda.iter().sum();
    if (total - 1.0).abs() > crate::measure::WEIGHT_TOL {
        return Err(Error::WeightSum(total));
    }
    if lambda[m] <= 0.0 {
        return Err(Error::Precondition(format!("lambda_{m} must be positive")));
    }
    let mut lambda_new = vec![0.0; k];
    let mut xs_new = xs.to_vec();
    let mut spent = 0.0;
    for n in (0..k).filter(|&n| n != m) {
        let e = eps[n];
        if !(e > 0.0 && e <= 1.0) {
            return Err(Error::Precondition(format!("eps_{n} = {e} must lie in (0, 1]")));
        }
        lambda_new[n] = lambda[n] / e;
        spent += lambda_new[n];
        xs_new[n] = xs[m]
            .iter()
            .zip(&xs[n])
            .map(|(a, b)| (1.0 - e) * a + e * b)
            .collect();
    }
    if spent > 1.0 + GEOMETRY_TOL {
        return Err(Error::Precondition(format!(
            "sum of lambda_n / eps_n over n != m is {spent} > 1"
        )));
    }
    lambda_new[m] = 1.0 - spent;
    Ok((xs_new, lambda_new))
}

/// Checks `sum lambda_n x_n = sum lambda'_n x'_n` coordinatewise within
/// `1e-9`.
pub fn reweight_series_check(xs: &[Vec<f64>], lambda: &[f64], m: usize, eps: &[f64]) -> Result<bool> {
    let (xs_new, lambda_new) = reweight_series(xs, lambda, m, eps)?;
    let combine = |pts: &[Vec<f64>], w: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; pts[0].len()];
        for (x, &l) in pts.iter().zip(w) {
            for (o, c) in out.iter_mut().zip(x) {
                *o += l * c;
            }
        }
        out
    };
    let lhs = combine(xs, lambda);
    let rhs = combine(&xs_new, &lambda_new);
    Ok(lhs.iter().zip(&rhs).all(|(a, b)| (a - b).abs() <= MEASURE_EQ_TOL))
}
