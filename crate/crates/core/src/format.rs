//! JSON forms of metrics, couplings and results.
//!
//! Measures serialize through serde directly (`{"atoms":[{"point":..,"w":..}]}`,
//! `{"atoms":[{"measure":{..},"w":..}]}`); this module covers the rest.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::Atom;
use crate::space::{max_combine_all, pullback, DistanceTable, Metric, MetricKind, PointMap};
use crate::transport::TransportResult;

/// Coupling entries below this are written as zero.
pub const GAMMA_EPS: f64 = 1e-15;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricSpec {
    #[serde(flatten)]
    pub kind: MetricSpecKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MetricSpecKind {
    Euclidean,
    Manhattan,
    Chebyshev,
    Discrete,
    Zero,
    Table { points: Vec<String>, d: Vec<Vec<f64>> },
    Pullback { coords: Vec<usize>, inner: Box<MetricSpec> },
    Max { of: Vec<MetricSpec> },
}

impl MetricSpec {
    pub fn named(kind: MetricSpecKind) -> Self {
        Self { kind, cap: None }
    }

    /// Parses a bare metric name (`euclidean`, `manhattan`, `chebyshev`,
    /// `discrete`, `zero`) or a JSON object.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.starts_with('{') {
            return serde_json::from_str(t).map_err(|e| Error::Format(format!("metric spec: {e}")));
        }
        let kind = match t {
            "euclidean" => MetricSpecKind::Euclidean,
            "manhattan" => MetricSpecKind::Manhattan,
            "chebyshev" => MetricSpecKind::Chebyshev,
            "discrete" => MetricSpecKind::Discrete,
            "zero" => MetricSpecKind::Zero,
            other => return Err(Error::Format(format!("unknown metric `{other}`"))),
        };
        Ok(Self::named(kind))
    }

    pub fn build(&self) -> Result<Metric> {
        let metric = match &self.kind {
            MetricSpecKind::Euclidean => Metric::euclidean(),
            MetricSpecKind::Manhattan => Metric::manhattan(),
            MetricSpecKind::Chebyshev => Metric::chebyshev(),
            MetricSpecKind::Discrete => Metric::discrete(),
            MetricSpecKind::Zero => Metric::zero(),
            MetricSpecKind::Table { points, d } => Metric::table(DistanceTable::new(points.clone(), d.clone())?),
            MetricSpecKind::Pullback { coords, inner } => {
                pullback(PointMap::Project(coords.clone()), inner.build()?)
            }
            MetricSpecKind::Max { of } => {
                max_combine_all(&of.iter().map(MetricSpec::build).collect::<Result<Vec<_>>>()?)?
            }
        };
        match self.cap {
            Some(c) => metric.with_cap(c),
            None => Ok(metric),
        }
    }

    /// Inverse of [`MetricSpec::build`] for metrics that have a JSON form.
    pub fn from_metric(m: &Metric) -> Option<Self> {
        let kind = match m.kind() {
            MetricKind::Euclidean => MetricSpecKind::Euclidean,
            MetricKind::Manhattan => MetricSpecKind::Manhattan,
            MetricKind::Chebyshev => MetricSpecKind::Chebyshev,
            MetricKind::Discrete => MetricSpecKind::Discrete,
            MetricKind::Zero => MetricSpecKind::Zero,
            MetricKind::Table(t) => MetricSpecKind::Table {
                points: t.labels().to_vec(),
                d: t.rows().to_vec(),
            },
            MetricKind::Pullback {
                map: PointMap::Project(coords),
                inner,
            } => MetricSpecKind::Pullback {
                coords: coords.clone(),
                inner: Box::new(Self::from_metric(inner)?),
            },
            MetricKind::Max(ms) => MetricSpecKind::Max {
                of: ms.iter().map(Self::from_metric).collect::<Option<_>>()?,
            },
            _ => return None,
        };
        Some(Self { kind, cap: m.cap() })
    }
}

/// `{"cost": c, "rows": [..], "cols": [..], "gamma": [[..]]}`
#[derive(Clone, Debug, Serialize)]
pub struct CouplingJson<T> {
    pub cost: f64,
    pub rows: Vec<T>,
    pub cols: Vec<T>,
    pub gamma: Vec<Vec<f64>>,
}

impl<T: Atom> From<&TransportResult<T>> for CouplingJson<T> {
    fn from(r: &TransportResult<T>) -> Self {
        let gamma = r
            .coupling
            .gamma()
            .iter()
            .map(|row| row.iter().map(|&g| if g < GAMMA_EPS { 0.0 } else { g }).collect())
            .collect();
        Self {
            cost: r.cost,
            rows: r.coupling.rows().to_vec(),
            cols: r.coupling.cols().to_vec(),
            gamma,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CostJson {
    pub cost: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LiftJson {
    pub p_tau: f64,
}
