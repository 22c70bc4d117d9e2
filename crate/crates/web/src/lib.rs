//! WebAssembly bindings for the browser demo. Every export takes and returns
//! JSON strings; errors come back as JavaScript exceptions carrying the
//! diagnostic text.
//!
//! The plain functions (`*_json`) hold the logic and are what the native
//! tests call.

use kanto::format::{CouplingJson, MetricSpec};
use kanto::monad::{barycenter, ConvexSpace};
use kanto::transport::distance;
use kanto::{kantorovich, GroundSpace, Measure, Point};
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn parse_measure(s: &str, what: &str) -> Result<Measure, String> {
    serde_json::from_str(s).map_err(|e| format!("{what}: {e}"))
}

fn parse_space(metric: &str) -> Result<GroundSpace, String> {
    let m = MetricSpec::parse(metric).and_then(|s| s.build()).map_err(|e| e.to_string())?;
    Ok(GroundSpace::of_metric(m))
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("result types serialize")
}

/// Optimal coupling of two measures under `metric` (a name or JSON spec).
pub fn coupling_json(mu: &str, eta: &str, metric: &str) -> Result<String, String> {
    let (mu, eta) = (parse_measure(mu, "mu")?, parse_measure(eta, "eta")?);
    let r = kantorovich(&parse_space(metric)?, &mu, &eta).map_err(|e| e.to_string())?;
    Ok(to_json(&CouplingJson::from(&r)))
}

#[derive(Serialize)]
struct Barycenters {
    mu: Point,
    eta: Point,
    /// Ground distance between the two barycenters.
    gap: f64,
    /// Kantorovich distance between the measures.
    cost: f64,
}

/// Barycenters of both measures with their distance and the Kantorovich
/// distance of the measures, which bounds it for norm metrics.
pub fn barycenters_json(mu: &str, eta: &str, metric: &str) -> Result<String, String> {
    let (mu, eta) = (parse_measure(mu, "mu")?, parse_measure(eta, "eta")?);
    let space = parse_space(metric)?;
    let dim = mu.atoms()[0].dim().ok_or("barycenters need coordinate points")?;
    let r = ConvexSpace::euclidean(dim);
    let (bm, be) = (
        barycenter(&r, &mu).map_err(|e| e.to_string())?,
        barycenter(&r, &eta).map_err(|e| e.to_string())?,
    );
    let gap = space.distance(&bm, &be).map_err(|e| e.to_string())?;
    let cost = distance(&space, &mu, &eta).map_err(|e| e.to_string())?;
    Ok(to_json(&Barycenters { mu: bm, eta: be, gap, cost }))
}

#[derive(Serialize)]
struct MixPoint {
    t: f64,
    to_mu: f64,
    to_eta: f64,
    chord: f64,
}

#[derive(Serialize)]
struct Mixture {
    measure: Measure,
    curve: Vec<MixPoint>,
}

/// The mixture `t mu + (1 - t) eta` and, on a grid of `steps + 1` values
/// of `s`, the distances of `s mu + (1 - s) eta` to both ends next to the
/// chord `s d(mu, eta)`.
pub fn mixture_json(mu: &str, eta: &str, metric: &str, t: f64, steps: usize) -> Result<String, String> {
    let (mu, eta) = (parse_measure(mu, "mu")?, parse_measure(eta, "eta")?);
    let space = parse_space(metric)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(format!("t must lie in [0, 1], got {t}"));
    }
    let steps = steps.clamp(1, 200);
    let full = distance(&space, &mu, &eta).map_err(|e| e.to_string())?;
    let mut curve = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let s = k as f64 / steps as f64;
        let m = mu.mix2(&eta, s).map_err(|e| e.to_string())?;
        curve.push(MixPoint {
            t: s,
            to_mu: distance(&space, &m, &mu).map_err(|e| e.to_string())?,
            to_eta: distance(&space, &m, &eta).map_err(|e| e.to_string())?,
            chord: s * full,
        });
    }
    let measure = mu.mix2(&eta, t).map_err(|e| e.to_string())?;
    Ok(to_json(&Mixture { measure, curve }))
}

#[wasm_bindgen]
pub fn coupling(mu: &str, eta: &str, metric: &str) -> Result<String, JsError> {
    coupling_json(mu, eta, metric).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn barycenters(mu: &str, eta: &str, metric: &str) -> Result<String, JsError> {
    barycenters_json(mu, eta, metric).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn mixture(mu: &str, eta: &str, metric: &str, t: f64, steps: usize) -> Result<String, JsError> {
    mixture_json(mu, eta, metric, t, steps).map_err(|e| JsError::new(&e))
}
