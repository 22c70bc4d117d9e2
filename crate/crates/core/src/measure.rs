//! Finitely supported probability measures.
//!
//! [`FiniteMeasure`] is generic over its atom type so that measures on
//! measures (and deeper towers) reuse the same normalization, merging and
//! mixing rules. The atom type decides what "the same atom" means through
//! [`Atom::coincides`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::Point;

/// Tolerance on total mass when validating weights.
pub const WEIGHT_TOL: f64 = 1e-9;

/// Tolerance for measure equality.
pub const MEASURE_EQ_TOL: f64 = 1e-9;

pub trait Atom: Clone {
    fn coincides(&self, other: &Self) -> bool;

    /// Short human-readable rendering used in diagnostics.
    fn describe(&self) -> String;

    /// Key naming the atom in the JSON form of a measure.
    const JSON_KEY: &'static str = "point";
}

impl Atom for Point {
    fn coincides(&self, other: &Self) -> bool {
        self.same_as(other)
    }

    fn describe(&self) -> String {
        self.to_string()
    }
}

impl<A: Atom, B: Atom> Atom for (A, B) {
    fn coincides(&self, other: &Self) -> bool {
        self.0.coincides(&other.0) && self.1.coincides(&other.1)
    }

    fn describe(&self) -> String {
        format!("<{}, {}>", self.0.describe(), self.1.describe())
    }
}

impl<T: Atom> Atom for FiniteMeasure<T> {
    fn coincides(&self, other: &Self) -> bool {
        self.approx_eq(other, MEASURE_EQ_TOL)
    }

    const JSON_KEY: &'static str = "measure";

    fn describe(&self) -> String {
        let parts: Vec<String> = self
            .iter()
            .map(|(a, w)| format!("{}:{w}", a.describe()))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// A probability measure with finite support. Weights are strictly
/// positive, sum to one, and atoms are pairwise distinct.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(bound(deserialize = "T: Deserialize<'de> + Atom"))]
#[serde(try_from = "MeasureRepr<T>")]
pub struct FiniteMeasure<T> {
    atoms: Vec<T>,
    weights: Vec<f64>,
}

pub type Measure = FiniteMeasure<Point>;
pub type SecondOrderMeasure = FiniteMeasure<Measure>;
pub type ThirdOrderMeasure = FiniteMeasure<SecondOrderMeasure>;

#[derive(Deserialize)]
struct MeasureRepr<T> {
    atoms: Vec<AtomRepr<T>>,
}

#[derive(Deserialize)]
struct AtomRepr<T> {
    #[serde(alias = "measure")]
    point: T,
    w: f64,
}

impl<T: Atom> TryFrom<MeasureRepr<T>> for FiniteMeasure<T> {
    type Error = Error;

    fn try_from(r: MeasureRepr<T>) -> Result<Self> {
        FiniteMeasure::new(r.atoms.into_iter().map(|a| (a.point, a.w)).collect())
    }
}

struct AtomRef<'a, T>(&'a T, f64);

impl<T: Atom + Serialize> Serialize for AtomRef<'_, T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry(T::JSON_KEY, self.0)?;
        map.serialize_entry("w", &self.1)?;
        map.end()
    }
}

impl<T: Atom + Serialize> Serialize for FiniteMeasure<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let atoms: Vec<AtomRef<'_, T>> = self.iter().map(|(a, w)| AtomRef(a, w)).collect();
        let mut map = s.serialize_map(Some(1))?;
        map.serialize_entry("atoms", &atoms)?;
        map.end()
    }
}

fn merge_into<T: Atom>(atoms: &mut Vec<T>, weights: &mut Vec<f64>, a: T, w: f64) {
    if w <= 0.0 {
        return;
    }
    match atoms.iter().position(|b| b.coincides(&a)) {
        Some(i) => weights[i] += w,
        None => {
            atoms.push(a);
            weights.push(w);
        }
    }
}

impl<T: Atom> FiniteMeasure<T> {
    /// Validates weights (finite, non-negative, summing to 1 within
    /// [`WEIGHT_TOL`]), drops zero-weight atoms, merges duplicates and
    /// renormalizes.
    pub fn new(atoms: Vec<(T, f64)>) -> Result<Self> {
        let mut total = 0.0;
        for (_, w) in &atoms {
            if !w.is_finite() || *w < 0.0 {
                return Err(Error::InvalidWeight(*w));
            }
            total += w;
        }
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::WeightSum(total));
        }
        Ok(Self::normalized(atoms))
    }

    /// Merges and renormalizes weights known to be non-negative and to carry
    /// positive total mass. Totals within 1e-12 of one are left alone, so
    /// that reloading a serialized measure reproduces it bit for bit.
    fn normalized(atoms: impl IntoIterator<Item = (T, f64)>) -> Self {
        let mut out_atoms = Vec::new();
        let mut weights = Vec::new();
        for (a, w) in atoms {
            merge_into(&mut out_atoms, &mut weights, a, w);
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            for w in &mut weights {
                *w /= total;
            }
        }
        Self {
            atoms: out_atoms,
            weights,
        }
    }

    pub fn dirac(x: T) -> Self {
        Self {
            atoms: vec![x],
            weights: vec![1.0],
        }
    }

    /// Equal weights on the given atoms (duplicates merged).
    pub fn uniform(atoms: impl IntoIterator<Item = T>) -> Result<Self> {
        let atoms: Vec<T> = atoms.into_iter().collect();
        if atoms.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        let w = 1.0 / atoms.len() as f64;
        Ok(Self::normalized(atoms.into_iter().map(|a| (a, w))))
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[T] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, f64)> + '_ {
        self.atoms.iter().zip(self.weights.iter().copied())
    }

    /// Weight of the atom coinciding with `x`, or 0.
    pub fn weight_of(&self, x: &T) -> f64 {
        self.iter()
            .find(|(a, _)| a.coincides(x))
            .map_or(0.0, |(_, w)| w)
    }

    /// `mu(B)`, with `B` evaluated on support atoms only.
    pub fn mass_where(&self, pred: impl Fn(&T) -> bool) -> f64 {
        self.iter().filter(|(a, _)| pred(a)).map(|(_, w)| w).sum()
    }

    /// Same atom set (up to [`Atom::coincides`]) and weights within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.len() == other.len() && self.deviation(other) <= tol
    }

    /// Largest weight discrepancy over the union of both supports. Atoms
    /// present on one side only count with their full weight.
    pub fn deviation(&self, other: &Self) -> f64 {
        let mut dev = 0.0f64;
        let mut matched = vec![false; other.len()];
        for (a, w) in self.iter() {
            match other.atoms.iter().position(|b| b.coincides(a)) {
                Some(j) => {
                    matched[j] = true;
                    dev = dev.max((w - other.weights[j]).abs());
                }
                None => dev = dev.max(w),
            }
        }
        for (j, m) in matched.iter().enumerate() {
            if !m {
                dev = dev.max(other.weights[j]);
            }
        }
        dev
    }

    /// Convex combination `sum t_i mu_i`.
    pub fn mix(parts: &[(f64, &Self)]) -> Result<Self> {
        let mut total = 0.0;
        for (t, _) in parts {
            if !t.is_finite() || *t < 0.0 {
                return Err(Error::InvalidWeight(*t));
            }
            total += t;
        }
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::WeightSum(total));
        }
        Ok(Self::normalized(parts.iter().flat_map(|(t, m)| {
            m.iter().map(move |(a, w)| (a.clone(), t * w))
        })))
    }

    /// Binary mixture `t mu + (1 - t) eta`.
    pub fn mix2(&self, other: &Self, t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidWeight(t));
        }
        Self::mix(&[(t, self), (1.0 - t, other)])
    }

    /// `mu|B`; `None` when no atom survives.
    pub fn restrict(&self, pred: impl Fn(&T) -> bool) -> Option<SubMeasure<T>> {
        let (atoms, weights): (Vec<T>, Vec<f64>) = self
            .iter()
            .filter(|(a, _)| pred(a))
            .map(|(a, w)| (a.clone(), w))
            .unzip();
        if atoms.is_empty() {
            None
        } else {
            Some(SubMeasure { atoms, weights })
        }
    }

    /// `mu(B ∩ ·) / mu(B)`.
    pub fn condition(&self, pred: impl Fn(&T) -> bool) -> Result<Self> {
        self.restrict(pred)
            .map(|s| s.normalize())
            .ok_or(Error::NullCondition)
    }

    /// Splits `mu` into `(mu(B_i), mu conditioned on B_i)` for a partition of
    /// the support. Cells of zero mass are omitted.
    pub fn decompose(&self, cells: &[&dyn Fn(&T) -> bool]) -> Result<Vec<(f64, Self)>> {
        let assignment = assign_cells(&self.atoms, cells)?;
        let mut out = Vec::new();
        for c in 0..cells.len() {
            let mass: f64 = assignment
                .iter()
                .zip(&self.weights)
                .filter(|(cell, _)| **cell == Some(c))
                .map(|(_, w)| w)
                .sum();
            if mass > 0.0 {
                out.push((mass, self.condition(cells[c])?));
            }
        }
        if assignment.iter().any(Option::is_none) {
            let i = assignment.iter().position(Option::is_none).unwrap();
            return Err(Error::PartitionCoverage(self.atoms[i].describe()));
        }
        Ok(out)
    }

    /// Pushforward `f_* mu`; colliding images are merged.
    pub fn map<U: Atom>(&self, f: impl Fn(&T) -> U) -> FiniteMeasure<U> {
        FiniteMeasure::normalized(self.iter().map(|(a, w)| (f(a), w)))
    }

    pub fn try_map<U: Atom>(&self, f: impl Fn(&T) -> Result<U>) -> Result<FiniteMeasure<U>> {
        let images = self
            .iter()
            .map(|(a, w)| f(a).map(|b| (b, w)))
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteMeasure::normalized(images))
    }

    /// Product measure on pairs.
    pub fn tensor<U: Atom>(&self, other: &FiniteMeasure<U>) -> FiniteMeasure<(T, U)> {
        let mut atoms = Vec::with_capacity(self.len() * other.len());
        let mut weights = Vec::with_capacity(self.len() * other.len());
        for (a, wa) in self.iter() {
            for (b, wb) in other.iter() {
                atoms.push((a.clone(), b.clone()));
                weights.push(wa * wb);
            }
        }
        FiniteMeasure { atoms, weights }
    }

    pub fn integrate(&self, f: impl Fn(&T) -> f64) -> f64 {
        self.iter().map(|(a, w)| w * f(a)).sum()
    }

    /// Integral of a partial function; fails on the first atom where `f` is
    /// undefined.
    pub fn try_integrate(&self, f: impl Fn(&T) -> Option<f64>) -> Result<f64> {
        self.iter().try_fold(0.0, |acc, (a, w)| {
            f(a).map(|v| acc + w * v)
                .ok_or_else(|| Error::MapUndefined(a.describe()))
        })
    }
}

impl<T: Atom> FiniteMeasure<FiniteMeasure<T>> {
    /// Monad multiplication: averages a measure of measures.
    pub fn flatten(&self) -> FiniteMeasure<T> {
        FiniteMeasure::normalized(
            self.iter()
                .flat_map(|(inner, t)| inner.iter().map(move |(a, w)| (a.clone(), t * w))),
        )
    }
}

/// Index of the unique cell containing each atom; errors on overlap.
pub(crate) fn assign_cells<T: Atom>(
    atoms: &[T],
    cells: &[&dyn Fn(&T) -> bool],
) -> Result<Vec<Option<usize>>> {
    atoms
        .iter()
        .map(|a| {
            let mut hit = None;
            for (c, cell) in cells.iter().enumerate() {
                if cell(a) {
                    if hit.is_some() {
                        return Err(Error::PartitionOverlap(a.describe()));
                    }
                    hit = Some(c);
                }
            }
            Ok(hit)
        })
        .collect()
}

/// A measure of total mass in `(0, 1]`, produced by restriction.
#[derive(Clone, Debug, PartialEq)]
pub struct SubMeasure<T> {
    atoms: Vec<T>,
    weights: Vec<f64>,
}

impl<T: Atom> SubMeasure<T> {
    pub fn mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn atoms(&self) -> &[T] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, f64)> + '_ {
        self.atoms.iter().zip(self.weights.iter().copied())
    }

    pub fn normalize(&self) -> FiniteMeasure<T> {
        FiniteMeasure::normalized(self.iter().map(|(a, w)| (a.clone(), w)))
    }
}

impl<T: Atom> fmt::Display for FiniteMeasure<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(pairs: &[(f64, f64)]) -> Measure {
        Measure::new(pairs.iter().map(|&(x, w)| (Point::from(x), w)).collect()).unwrap()
    }

    fn close(a: &Measure, b: &Measure) -> bool {
        a.approx_eq(b, MEASURE_EQ_TOL)
    }

    #[test]
    fn construction_normalizes() {
        let mu = Measure::new(vec![(0.0.into(), 0.5), (0.0.into(), 0.25), (1.0.into(), 0.25), (2.0.into(), 0.0)]).unwrap();
        assert_eq!(mu.len(), 2);
        assert_eq!(mu.weight_of(&0.0.into()), 0.75);
        assert!(matches!(Measure::new(vec![(0.0.into(), 0.6)]), Err(Error::WeightSum(_))));
        assert!(matches!(Measure::new(vec![(0.0.into(), 1.5), (1.0.into(), -0.5)]), Err(Error::InvalidWeight(_))));
        // near-duplicates merge
        let mu = Measure::new(vec![(0.1.into(), 0.5), ((0.1 + 1e-14).into(), 0.5)]).unwrap();
        assert_eq!(mu.len(), 1);
    }

    #[test]
    fn dirac_cases() {
        let d = Measure::dirac(0.0.into());
        assert_eq!(d.atoms(), &[Point::from(0.0)]);
        assert_eq!(d.weights(), &[1.0]);
        let d2 = Measure::dirac(Point::coords(&[1.0, 2.0]));
        assert_eq!(d2.integrate(|p| p.as_coords().unwrap().iter().sum()), 3.0);
        assert!(close(&Measure::dirac("a".into()), &Measure::dirac("a".into())));
    }

    #[test]
    fn mix_cases() {
        let mu = m(&[(0.0, 0.5), (1.0, 0.5)]);
        assert!(close(&Measure::mix(&[(1.0, &mu)]).unwrap(), &mu));
        let (d0, d1) = (Measure::dirac(0.0.into()), Measure::dirac(1.0.into()));
        assert!(close(&Measure::mix(&[(0.5, &d0), (0.5, &d1)]).unwrap(), &mu));
        assert!(close(
            &Measure::mix(&[(0.5, &mu), (0.5, &d0)]).unwrap(),
            &m(&[(0.0, 0.75), (1.0, 0.25)])
        ));
        assert!(matches!(Measure::mix(&[(0.5, &mu)]), Err(Error::WeightSum(_))));
        assert!(matches!(Measure::mix(&[(1.5, &mu), (-0.5, &d0)]), Err(Error::InvalidWeight(_))));
    }

    #[test]
    fn restrict_cases() {
        let mu = m(&[(0.0, 0.5), (1.0, 0.5)]);
        let r = mu.restrict(|p| p.x().unwrap() < 1.0).unwrap();
        assert_eq!(r.mass(), 0.5);
        assert_eq!(r.atoms(), &[Point::from(0.0)]);
        let all = mu.restrict(|_| true).unwrap();
        assert!(close(&all.normalize(), &mu));
        assert_eq!(all.mass(), 1.0);
        assert!(Measure::dirac(0.0.into()).restrict(|p| p.x().unwrap() > 0.0).is_none());
    }

    #[test]
    fn condition_cases() {
        let mu = m(&[(0.0, 0.25), (1.0, 0.75)]);
        assert!(close(&mu.condition(|p| p.x().unwrap() < 1.0).unwrap(), &Measure::dirac(0.0.into())));
        assert!(close(&mu.condition(|_| true).unwrap(), &mu));
        let nu = m(&[(0.0, 0.25), (1.0, 0.25), (2.0, 0.5)]);
        let c = nu.condition(|p| p.x().unwrap() >= 1.0).unwrap();
        assert!(close(&c, &m(&[(1.0, 1.0 / 3.0), (2.0, 2.0 / 3.0)])));
        assert_eq!(mu.condition(|_| false), Err(Error::NullCondition));
    }

    #[test]
    fn decompose_cases() {
        let mu = m(&[(0.0, 0.5), (1.0, 0.5)]);
        let all: &dyn Fn(&Point) -> bool = &|_| true;
        let d = mu.decompose(&[all]).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].0, 1.0);
        assert!(close(&d[0].1, &mu));

        let lo: &dyn Fn(&Point) -> bool = &|p| p.x().unwrap() < 1.0;
        let hi: &dyn Fn(&Point) -> bool = &|p| p.x().unwrap() >= 1.0;
        let d = mu.decompose(&[lo, hi]).unwrap();
        assert_eq!(d.len(), 2);
        assert!(close(&d[0].1, &Measure::dirac(0.0.into())));
        assert!(close(&d[1].1, &Measure::dirac(1.0.into())));

        let overlap: &dyn Fn(&Point) -> bool = &|p| p.x().unwrap() <= 1.0;
        assert!(matches!(mu.decompose(&[overlap, hi]), Err(Error::PartitionOverlap(_))));
        assert!(matches!(mu.decompose(&[lo]), Err(Error::PartitionCoverage(_))));
    }

    #[test]
    fn pushforward_cases() {
        let mu = m(&[(0.0, 0.25), (1.0, 0.25), (2.0, 0.25), (3.0, 0.25)]);
        assert!(close(&mu.map(Clone::clone), &mu));
        assert!(close(&mu.map(|_| Point::from(7.0)), &Measure::dirac(7.0.into())));
        let modded = mu.map(|p| Point::from(p.x().unwrap() % 2.0));
        assert!(close(&modded, &m(&[(0.0, 0.5), (1.0, 0.5)])));
        let partial = mu.try_map(|p| {
            if p.x().unwrap() < 3.0 {
                Ok(p.clone())
            } else {
                Err(Error::MapUndefined(p.to_string()))
            }
        });
        assert!(matches!(partial, Err(Error::MapUndefined(_))));
    }

    #[test]
    fn tensor_cases() {
        let (a, b) = (Measure::dirac("a".into()), Measure::dirac("b".into()));
        let t = a.tensor(&b);
        assert!(t.approx_eq(&FiniteMeasure::dirac((Point::from("a"), Point::from("b"))), 1e-12));
        let u = m(&[(0.0, 0.5), (1.0, 0.5)]);
        let t = u.tensor(&Measure::dirac("c".into()));
        assert_eq!(t.len(), 2);
        assert_eq!(t.weight_of(&(0.0.into(), "c".into())), 0.5);
        let t = u.tensor(&u);
        assert_eq!(t.weights(), &[0.25; 4]);
        assert!(close(&t.map(|(x, _)| x.clone()), &u));
        assert!(close(&t.map(|(_, y)| y.clone()), &u));
    }

    #[test]
    fn integrate_cases() {
        let x = Point::from(2.5);
        assert_eq!(Measure::dirac(x.clone()).integrate(|p| p.x().unwrap().sin()), 2.5f64.sin());
        let mu = m(&[(0.0, 0.25), (2.0, 0.75)]);
        assert_eq!(mu.integrate(|_| 1.0), 1.0);
        assert_eq!(mu.integrate(|p| p.x().unwrap().powi(2)), 3.0);
        assert!(mu.try_integrate(|p| (p.x().unwrap() < 1.0).then_some(1.0)).is_err());
    }

    #[test]
    fn json_shape() {
        let mu: Measure = serde_json::from_str(r#"{"atoms":[{"point":[0,0],"w":0.5},{"point":[1,0],"w":0.5}]}"#).unwrap();
        assert_eq!(mu.len(), 2);
        let bad = serde_json::from_str::<Measure>(r#"{"atoms":[{"point":"a","w":0.7}]}"#);
        assert!(bad.is_err());
        let m2: SecondOrderMeasure = serde_json::from_str(
            r#"{"atoms":[{"measure":{"atoms":[{"point":"a","w":1.0}]},"w":1.0}]}"#,
        )
        .unwrap();
        assert_eq!(m2.flatten().atoms(), &[Point::from("a")]);
        let out = serde_json::to_string(&m2).unwrap();
        assert_eq!(out, r#"{"atoms":[{"measure":{"atoms":[{"point":"a","w":1.0}]},"w":1.0}]}"#);
    }
}
