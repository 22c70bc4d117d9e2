//! Kantorovich metric, optimal couplings and the finite probability monad.
//!
//! Everything here works with finitely supported probability measures over a
//! user-supplied bounded (pseudo)metric space:
//!
//! - [`space`]: points, metrics, pullbacks, pointwise maxima, quotients
//! - [`measure`]: finite measures and their algebra (mixtures, restriction,
//!   conditioning, decomposition, pushforward, products, integrals)
//! - [`transport`]: the Kantorovich distance as an exact transportation
//!   problem, explicit couplings, brute-force oracles
//! - [`monad`]: barycenters, unit and flattening, the distance on measures of
//!   measures, lifted pseudometrics
//! - [`laws`]: seeded randomized checks of the metric and monad identities
//! - [`format`]: JSON input and output

pub mod error;
pub mod format;
pub mod laws;
pub mod measure;
pub mod monad;
pub mod space;
pub mod transport;

pub use error::{Error, Result};
pub use measure::{Atom, FiniteMeasure, Measure, SecondOrderMeasure, ThirdOrderMeasure};
pub use space::{GroundSpace, Metric, MetricKind, Point, PointMap};
pub use transport::{kantorovich, Coupling, TransportResult};
