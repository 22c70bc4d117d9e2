//! Ground spaces: point sets carrying a bounded (pseudo)metric, plus the
//! pseudometric algebra built on top of them (pullbacks, pointwise maxima,
//! zero-distance quotients).

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for metric axioms and zero-distance identification.
pub const GEOMETRY_TOL: f64 = 1e-12;

/// Above this many points, axiom checks sample triples instead of
/// enumerating them.
pub const EXHAUSTIVE_AXIOM_LIMIT: usize = 64;

/// Number of random triples drawn by sampled axiom checks.
pub const SAMPLED_AXIOM_TRIPLES: usize = 1000;

pub type MapFn = Arc<dyn Fn(&Point) -> Result<Point> + Send + Sync>;
pub type DistanceFn = Arc<dyn Fn(&Point, &Point) -> Result<f64> + Send + Sync>;

/// A point of a ground space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "PointRepr", into = "PointRepr")]
pub enum Point {
    Coords(Vec<f64>),
    Label(String),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PointRepr {
    Coords(Vec<f64>),
    Scalar(f64),
    Label(String),
}

impl From<PointRepr> for Point {
    fn from(r: PointRepr) -> Self {
        match r {
            PointRepr::Coords(c) => Point::Coords(c),
            PointRepr::Scalar(x) => Point::Coords(vec![x]),
            PointRepr::Label(s) => Point::Label(s),
        }
    }
}

impl From<Point> for PointRepr {
    fn from(p: Point) -> Self {
        match p {
            Point::Coords(c) => PointRepr::Coords(c),
            Point::Label(s) => PointRepr::Label(s),
        }
    }
}

impl Point {
    pub fn coords(c: &[f64]) -> Self {
        Point::Coords(c.to_vec())
    }

    pub fn label(s: impl Into<String>) -> Self {
        Point::Label(s.into())
    }

    pub fn as_coords(&self) -> Option<&[f64]> {
        match self {
            Point::Coords(c) => Some(c),
            Point::Label(_) => None,
        }
    }

    /// First coordinate; convenient for one-dimensional spaces.
    pub fn x(&self) -> Option<f64> {
        self.as_coords().and_then(|c| c.first().copied())
    }

    pub fn dim(&self) -> Option<usize> {
        self.as_coords().map(<[f64]>::len)
    }

    /// Point identity: equal labels, or coordinates equal within
    /// [`GEOMETRY_TOL`] in every component.
    pub fn same_as(&self, other: &Point) -> bool {
        match (self, other) {
            (Point::Label(a), Point::Label(b)) => a == b,
            (Point::Coords(a), Point::Coords(b)) => {
                a.len() == b.len()
                    && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= GEOMETRY_TOL)
            }
            _ => false,
        }
    }
}

impl From<f64> for Point {
    fn from(x: f64) -> Self {
        Point::Coords(vec![x])
    }
}

impl From<&str> for Point {
    fn from(s: &str) -> Self {
        Point::Label(s.to_owned())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Label(s) => write!(f, "{s}"),
            Point::Coords(c) => {
                write!(f, "(")?;
                for (i, x) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Map between points, used by pullbacks and pushforwards.
#[derive(Clone)]
pub enum PointMap {
    /// Keep the listed coordinates, in order.
    Project(Vec<usize>),
    Custom(MapFn),
}

impl PointMap {
    pub fn custom(f: impl Fn(&Point) -> Result<Point> + Send + Sync + 'static) -> Self {
        PointMap::Custom(Arc::new(f))
    }

    pub fn identity() -> Self {
        PointMap::custom(|p| Ok(p.clone()))
    }

    pub fn constant(c: Point) -> Self {
        PointMap::custom(move |_| Ok(c.clone()))
    }

    pub fn apply(&self, p: &Point) -> Result<Point> {
        match self {
            PointMap::Project(idx) => {
                let c = p
                    .as_coords()
                    .ok_or_else(|| Error::MapUndefined(p.to_string()))?;
                idx.iter()
                    .map(|&i| c.get(i).copied())
                    .collect::<Option<Vec<_>>>()
                    .map(Point::Coords)
                    .ok_or_else(|| Error::MapUndefined(p.to_string()))
            }
            PointMap::Custom(f) => f(p),
        }
    }
}

impl fmt::Debug for PointMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointMap::Project(idx) => f.debug_tuple("Project").field(idx).finish(),
            PointMap::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Finite symmetric distance table over labelled points.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceTable {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    d: Vec<Vec<f64>>,
}

impl DistanceTable {
    /// Builds a table, checking every entry against the pseudometric axioms.
    pub fn new(labels: Vec<String>, d: Vec<Vec<f64>>) -> Result<Self> {
        let n = labels.len();
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        if d.len() != n || d.iter().any(|row| row.len() != n) {
            return Err(Error::MetricAxiom {
                axiom: "shape",
                detail: format!("distance table must be {n}x{n}"),
            });
        }
        for i in 0..n {
            if d[i][i].abs() > GEOMETRY_TOL {
                return Err(axiom("identity", format!("d({0},{0}) = {1}", labels[i], d[i][i])));
            }
            for j in 0..n {
                let v = d[i][j];
                if !v.is_finite() || v < -GEOMETRY_TOL {
                    return Err(axiom(
                        "non-negativity",
                        format!("d({},{}) = {v}", labels[i], labels[j]),
                    ));
                }
                if (v - d[j][i]).abs() > GEOMETRY_TOL {
                    return Err(axiom(
                        "symmetry",
                        format!("d({a},{b}) = {v} but d({b},{a}) = {}", d[j][i], a = labels[i], b = labels[j]),
                    ));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if d[i][k] > d[i][j] + d[j][k] + GEOMETRY_TOL {
                        return Err(axiom(
                            "triangle",
                            format!("d({a},{c}) > d({a},{b}) + d({b},{c})", a = labels[i], b = labels[j], c = labels[k]),
                        ));
                    }
                }
            }
        }
        Ok(Self { labels, index, d })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.d
    }

    fn lookup(&self, p: &Point) -> Result<usize> {
        match p {
            Point::Label(l) => self
                .index
                .get(l)
                .copied()
                .ok_or_else(|| Error::UnknownLabel(l.clone())),
            Point::Coords(_) => Err(Error::PointKind(format!(
                "distance table expects labels, got {p}"
            ))),
        }
    }
}

fn axiom(axiom: &'static str, detail: String) -> Error {
    Error::MetricAxiom { axiom, detail }
}

#[derive(Clone)]
pub enum MetricKind {
    Euclidean,
    Manhattan,
    Chebyshev,
    /// 0 on identical points, 1 otherwise.
    Discrete,
    /// Identically zero pseudometric.
    Zero,
    Table(Arc<DistanceTable>),
    /// `inner(f(x), f(y))`.
    Pullback { map: PointMap, inner: Box<Metric> },
    /// Pointwise maximum.
    Max(Vec<Metric>),
    /// Metric induced on zero-distance classes; evaluated on class
    /// representatives.
    Quotient(Box<Metric>),
    /// User-supplied distance function. Not trusted: run
    /// [`check_pseudometric`] before relying on it.
    Custom(DistanceFn),
}

impl fmt::Debug for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricKind::Euclidean => f.write_str("Euclidean"),
            MetricKind::Manhattan => f.write_str("Manhattan"),
            MetricKind::Chebyshev => f.write_str("Chebyshev"),
            MetricKind::Discrete => f.write_str("Discrete"),
            MetricKind::Zero => f.write_str("Zero"),
            MetricKind::Table(t) => f.debug_tuple("Table").field(&t.labels).finish(),
            MetricKind::Pullback { map, inner } => f
                .debug_struct("Pullback")
                .field("map", map)
                .field("inner", inner)
                .finish(),
            MetricKind::Max(ms) => f.debug_tuple("Max").field(ms).finish(),
            MetricKind::Quotient(p) => f.debug_tuple("Quotient").field(p).finish(),
            MetricKind::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// A (pseudo)metric with an optional truncation cap `min(d, cap)`.
#[derive(Clone, Debug)]
pub struct Metric {
    kind: MetricKind,
    cap: Option<f64>,
}

#[derive(Debug, PartialEq)]
enum Domain {
    Any,
    Coords,
    Labels(HashSet<String>),
}

impl Metric {
    pub fn new(kind: MetricKind) -> Self {
        Self { kind, cap: None }
    }

    pub fn euclidean() -> Self {
        Self::new(MetricKind::Euclidean)
    }

    pub fn manhattan() -> Self {
        Self::new(MetricKind::Manhattan)
    }

    pub fn chebyshev() -> Self {
        Self::new(MetricKind::Chebyshev)
    }

    pub fn discrete() -> Self {
        Self::new(MetricKind::Discrete)
    }

    pub fn zero() -> Self {
        Self::new(MetricKind::Zero)
    }

    pub fn custom(
        f: impl Fn(&Point, &Point) -> Result<f64> + Send + Sync + 'static,
    ) -> Self {
        Self::new(MetricKind::Custom(Arc::new(f)))
    }

    pub fn table(table: DistanceTable) -> Self {
        Self::new(MetricKind::Table(Arc::new(table)))
    }

    /// `|x_i - y_i|` on the given coordinate.
    pub fn coordinate(i: usize) -> Self {
        pullback(PointMap::Project(vec![i]), Metric::euclidean())
    }

    pub fn with_cap(mut self, cap: f64) -> Result<Self> {
        if !(cap.is_finite() && cap > 0.0) {
            return Err(Error::Format(format!("metric cap must be positive, got {cap}")));
        }
        self.cap = Some(cap);
        Ok(self)
    }

    pub fn kind(&self) -> &MetricKind {
        &self.kind
    }

    pub fn cap(&self) -> Option<f64> {
        self.cap
    }

    /// True for metrics induced by a norm on coordinate space.
    pub fn is_norm(&self) -> bool {
        self.cap.is_none()
            && matches!(
                self.kind,
                MetricKind::Euclidean | MetricKind::Manhattan | MetricKind::Chebyshev
            )
    }

    pub fn distance(&self, x: &Point, y: &Point) -> Result<f64> {
        let d = match &self.kind {
            MetricKind::Euclidean => coord_pair(x, y)?
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt(),
            MetricKind::Manhattan => coord_pair(x, y)?.map(|(a, b)| (a - b).abs()).sum(),
            MetricKind::Chebyshev => coord_pair(x, y)?
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
            MetricKind::Discrete => {
                if let (Some(a), Some(b)) = (x.dim(), y.dim()) {
                    if a != b {
                        return Err(Error::DimensionMismatch { expected: a, got: b });
                    }
                }
                if x.same_as(y) {
                    0.0
                } else {
                    1.0
                }
            }
            MetricKind::Zero => 0.0,
            MetricKind::Table(t) => t.d[t.lookup(x)?][t.lookup(y)?],
            MetricKind::Pullback { map, inner } => inner.distance(&map.apply(x)?, &map.apply(y)?)?,
            MetricKind::Max(ms) => {
                let mut best = 0.0f64;
                for m in ms {
                    best = best.max(m.distance(x, y)?);
                }
                best
            }
            MetricKind::Quotient(p) => p.distance(x, y)?,
            MetricKind::Custom(f) => f(x, y)?,
        };
        Ok(match self.cap {
            Some(c) => d.min(c),
            None => d,
        })
    }

    fn domain(&self) -> Domain {
        match &self.kind {
            MetricKind::Euclidean | MetricKind::Manhattan | MetricKind::Chebyshev => Domain::Coords,
            MetricKind::Discrete | MetricKind::Zero | MetricKind::Custom(_) => Domain::Any,
            MetricKind::Table(t) => Domain::Labels(t.labels.iter().cloned().collect()),
            MetricKind::Pullback { map, .. } => match map {
                PointMap::Project(_) => Domain::Coords,
                PointMap::Custom(_) => Domain::Any,
            },
            MetricKind::Max(ms) => ms
                .iter()
                .map(Metric::domain)
                .find(|d| *d != Domain::Any)
                .unwrap_or(Domain::Any),
            MetricKind::Quotient(p) => p.domain(),
        }
    }
}

fn coord_pair<'a>(
    x: &'a Point,
    y: &'a Point,
) -> Result<impl Iterator<Item = (f64, f64)> + 'a> {
    match (x, y) {
        (Point::Coords(a), Point::Coords(b)) => {
            if a.len() != b.len() {
                return Err(Error::DimensionMismatch {
                    expected: a.len(),
                    got: b.len(),
                });
            }
            Ok(a.iter().copied().zip(b.iter().copied()))
        }
        _ => Err(Error::PointKind(format!(
            "coordinate metric applied to {x} and {y}"
        ))),
    }
}

/// Pointwise maximum of two pseudometrics on the same point set.
pub fn max_combine(p1: &Metric, p2: &Metric) -> Result<Metric> {
    max_combine_all(&[p1.clone(), p2.clone()])
}

pub fn max_combine_all(ms: &[Metric]) -> Result<Metric> {
    if ms.is_empty() {
        return Err(Error::IncompatiblePointSets("max of an empty metric list".into()));
    }
    let mut dom = Domain::Any;
    for m in ms {
        let d = m.domain();
        match (&dom, &d) {
            (_, Domain::Any) => {}
            (Domain::Any, _) => dom = d,
            (a, b) if a == b => {}
            (a, b) => {
                return Err(Error::IncompatiblePointSets(format!(
                    "cannot combine metrics over {a:?} and {b:?}"
                )))
            }
        }
    }
    Ok(Metric::new(MetricKind::Max(ms.to_vec())))
}

/// `rho(x, y) = p(f(x), f(y))`.
pub fn pullback(f: PointMap, p: Metric) -> Metric {
    Metric::new(MetricKind::Pullback {
        map: f,
        inner: Box::new(p),
    })
}

/// A finite point set with a (pseudo)metric.
#[derive(Clone, Debug)]
pub struct GroundSpace {
    points: Vec<Point>,
    metric: Metric,
}

impl GroundSpace {
    /// Checks that coordinate points share one dimension, labels are unique
    /// and the metric is defined on every point.
    pub fn new(points: Vec<Point>, metric: Metric) -> Result<Self> {
        let mut dim = None;
        let mut seen = HashSet::new();
        for p in &points {
            match p {
                Point::Coords(c) => match dim {
                    None => dim = Some(c.len()),
                    Some(d) if d != c.len() => {
                        return Err(Error::DimensionMismatch {
                            expected: d,
                            got: c.len(),
                        })
                    }
                    _ => {}
                },
                Point::Label(l) => {
                    if !seen.insert(l.clone()) {
                        return Err(Error::DuplicateLabel(l.clone()));
                    }
                }
            }
            metric.distance(p, p)?;
        }
        Ok(Self { points, metric })
    }

    /// A space with no registered points; distances are evaluated on demand.
    pub fn of_metric(metric: Metric) -> Self {
        Self {
            points: Vec::new(),
            metric,
        }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn distance(&self, x: &Point, y: &Point) -> Result<f64> {
        self.metric.distance(x, y)
    }

    /// Largest distance between registered points together with a pair
    /// realizing it.
    pub fn diameter_pair(&self) -> Result<(f64, usize, usize)> {
        let mut best = (0.0, 0, 0);
        for i in 0..self.points.len() {
            for j in i + 1..self.points.len() {
                let d = self.distance(&self.points[i], &self.points[j])?;
                if d > best.0 {
                    best = (d, i, j);
                }
            }
        }
        Ok(best)
    }

    pub fn diameter(&self) -> Result<f64> {
        self.diameter_pair().map(|(d, _, _)| d)
    }

    /// Checks the pseudometric axioms on the registered points.
    pub fn check_axioms(&self, seed: u64) -> Result<()> {
        check_pseudometric(&self.points, &self.metric, seed)
    }
}

/// Checks symmetry, non-negativity, `d(x,x) = 0` and the triangle
/// inequality. Exhaustive up to [`EXHAUSTIVE_AXIOM_LIMIT`] points, otherwise
/// on [`SAMPLED_AXIOM_TRIPLES`] seeded random triples.
pub fn check_pseudometric(points: &[Point], metric: &Metric, seed: u64) -> Result<()> {
    let n = points.len();
    let check_pair = |i: usize, j: usize| -> Result<f64> {
        let d = metric.distance(&points[i], &points[j])?;
        let back = metric.distance(&points[j], &points[i])?;
        if !d.is_finite() || d < -GEOMETRY_TOL {
            return Err(axiom("non-negativity", format!("d({},{}) = {d}", points[i], points[j])));
        }
        if (d - back).abs() > GEOMETRY_TOL {
            return Err(axiom(
                "symmetry",
                format!("d({a},{b}) = {d} but d({b},{a}) = {back}", a = points[i], b = points[j]),
            ));
        }
        if i == j && d.abs() > GEOMETRY_TOL {
            return Err(axiom("identity", format!("d({0},{0}) = {d}", points[i])));
        }
        Ok(d)
    };
    let triangle = |i: usize, j: usize, k: usize, dij: f64, djk: f64, dik: f64| -> Result<()> {
        if dik > dij + djk + GEOMETRY_TOL {
            return Err(axiom(
                "triangle",
                format!("d({a},{c}) = {dik} > d({a},{b}) + d({b},{c}) = {}", dij + djk, a = points[i], b = points[j], c = points[k]),
            ));
        }
        Ok(())
    };

    if n <= EXHAUSTIVE_AXIOM_LIMIT {
        let mut d = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                d[i][j] = check_pair(i, j)?;
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    triangle(i, j, k, d[i][j], d[j][k], d[i][k])?;
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..SAMPLED_AXIOM_TRIPLES {
            let (i, j, k) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
            check_pair(i, i)?;
            let dij = check_pair(i, j)?;
            let djk = check_pair(j, k)?;
            let dik = check_pair(i, k)?;
            triangle(i, j, k, dij, djk, dik)?;
        }
    }
    Ok(())
}

/// Projection of a space onto the classes of a pseudometric.
#[derive(Clone, Debug)]
pub struct Projection {
    representatives: Vec<Point>,
    pseudometric: Metric,
}

impl Projection {
    pub fn representatives(&self) -> &[Point] {
        &self.representatives
    }

    /// Maps a point to the representative of its class.
    pub fn apply(&self, x: &Point) -> Result<Point> {
        for r in &self.representatives {
            if self.pseudometric.distance(x, r)? <= GEOMETRY_TOL {
                return Ok(r.clone());
            }
        }
        Err(Error::MapUndefined(x.to_string()))
    }

    pub fn as_map(&self) -> PointMap {
        let this = self.clone();
        PointMap::custom(move |p| this.apply(p))
    }
}

/// Metric quotient `(X_p, d_p)` of `space` by the pseudometric `p`. Each
/// class is represented by its first member in input order.
pub fn quotient(space: &GroundSpace, p: &Metric) -> Result<(GroundSpace, Projection)> {
    check_pseudometric(&space.points, p, 0)?;
    let mut reps: Vec<Point> = Vec::new();
    for x in &space.points {
        let mut class = None;
        for (ri, r) in reps.iter().enumerate() {
            if p.distance(x, r)? <= GEOMETRY_TOL {
                if let Some(prev) = class {
                    let a: &Point = &reps[prev];
                    return Err(axiom(
                        "triangle",
                        format!("{x} is at zero distance from distinct classes {a} and {r}"),
                    ));
                }
                class = Some(ri);
            }
        }
        if class.is_none() {
            reps.push(x.clone());
        }
    }
    let quotient_metric = Metric::new(MetricKind::Quotient(Box::new(p.clone())));
    let projection = Projection {
        representatives: reps.clone(),
        pseudometric: p.clone(),
    };
    Ok((
        GroundSpace {
            points: reps,
            metric: quotient_metric,
        },
        projection,
    ))
}
