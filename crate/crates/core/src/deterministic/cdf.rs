//! Weighted step CDFs produced by the deterministic constructions.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::quantization::{check_unit, csv_header, reduced_size, UnivariateQuantization};

/// Tolerance on the total mass of a weighted CDF.
pub const MASS_TOL: f64 = 1e-9;
/// Relative tolerance under which two values are merged into one tuple.
pub const MERGE_TOL: f64 = 1e-12;

pub(crate) fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= MERGE_TOL * a.abs().max(b.abs())
}

/// Sorted `(r, η)` tuples with positive masses summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedCdf {
    tuples: Vec<(f64, f64)>,
}

impl WeightedCdf {
    /// Sorts, merges values equal up to [`MERGE_TOL`] (keeping the smallest)
    /// and checks the total mass.
    pub fn new(mut tuples: Vec<(f64, f64)>) -> Result<Self> {
        if tuples.iter().any(|(r, eta)| !r.is_finite() || !(eta.is_finite() && *eta > 0.0)) {
            return Err(Error::param("tuples need finite values and positive masses"));
        }
        tuples.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(tuples.len());
        for (r, eta) in tuples {
            match merged.last_mut() {
                Some(last) if close(last.0, r) => last.1 += eta,
                _ => merged.push((r, eta)),
            }
        }
        check_mass(merged.iter().map(|t| t.1).sum())?;
        Ok(Self { tuples: merged })
    }

    pub fn tuples(&self) -> &[(f64, f64)] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    /// Mass of values `≤ t`.
    pub fn eval(&self, t: f64) -> f64 {
        let end = self.tuples.partition_point(|(r, _)| *r <= t);
        self.tuples[..end].iter().map(|(_, eta)| eta).sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.tuples.iter().map(|t| t.1).sum()
    }

    /// Tuple-for-tuple agreement within `tol` in value and mass.
    pub fn matches(&self, other: &WeightedCdf, tol: f64) -> bool {
        self.tuples.len() == other.tuples.len()
            && self
                .tuples
                .iter()
                .zip(&other.tuples)
                .all(|(a, b)| (a.0 - b.0).abs() <= tol * a.0.abs().max(1.0) && (a.1 - b.1).abs() <= tol)
    }

    /// `r,eta` lines after a header.
    pub fn to_csv(&self, header: &[(&str, String)]) -> String {
        let mut out = csv_header(header);
        out.push_str("r,eta\n");
        for (r, eta) in &self.tuples {
            let _ = writeln!(out, "{r},{eta}");
        }
        out
    }
}

pub(crate) fn check_mass(total: f64) -> Result<()> {
    if (total - 1.0).abs() > MASS_TOL {
        return Err(Error::MassDeficit {
            total,
            deficit: 1.0 - total,
        });
    }
    Ok(())
}

/// Tuples `(r, η)` with vector values, evaluated by dominance.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedKCdf {
    k: usize,
    tuples: Vec<(Vec<f64>, f64)>,
}

impl WeightedKCdf {
    pub fn new(k: usize, mut tuples: Vec<(Vec<f64>, f64)>) -> Result<Self> {
        if tuples.iter().any(|(r, eta)| r.len() != k || r.iter().any(|x| !x.is_finite()) || !(*eta > 0.0)) {
            return Err(Error::param("tuples need k finite values and positive masses"));
        }
        tuples.sort_by(|a, b| {
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let mut merged: Vec<(Vec<f64>, f64)> = Vec::with_capacity(tuples.len());
        for (r, eta) in tuples {
            match merged.last_mut() {
                Some(last) if last.0.iter().zip(&r).all(|(a, b)| close(*a, *b)) => last.1 += eta,
                _ => merged.push((r, eta)),
            }
        }
        check_mass(merged.iter().map(|t| t.1).sum())?;
        Ok(Self { k, tuples: merged })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn tuples(&self) -> &[(Vec<f64>, f64)] {
        &self.tuples
    }

    /// Mass of values componentwise `≤ v`.
    pub fn eval(&self, v: &[f64]) -> Result<f64> {
        if v.len() != self.k {
            return Err(Error::DimensionMismatch {
                expected: self.k,
                found: v.len(),
            });
        }
        Ok(self
            .tuples
            .iter()
            .filter(|(r, _)| r.iter().zip(v).all(|(a, b)| a <= b))
            .map(|(_, eta)| eta)
            .sum())
    }

    pub fn matches(&self, other: &WeightedKCdf, tol: f64) -> bool {
        self.tuples.len() == other.tuples.len()
            && self.tuples.iter().zip(&other.tuples).all(|(a, b)| {
                (a.1 - b.1).abs() <= tol && a.0.iter().zip(&b.0).all(|(x, y)| (x - y).abs() <= tol * x.abs().max(1.0))
            })
    }

    pub fn to_csv(&self, header: &[(&str, String)]) -> String {
        let mut out = csv_header(header);
        let names: Vec<String> = (0..self.k).map(|i| format!("r{i}")).collect();
        let _ = writeln!(out, "{},eta", names.join(","));
        for (r, eta) in &self.tuples {
            let vals: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "{},{eta}", vals.join(","));
        }
        out
    }
}

/// `⌈2/ε⌉` values: the `i`-th is the smallest `r` whose cumulative mass
/// reaches `(i − ½)/⌈2/ε⌉`.
pub fn cdf_to_quantization(cdf: &WeightedCdf, epsilon: f64) -> Result<UnivariateQuantization> {
    check_unit("epsilon", epsilon)?;
    let k = reduced_size(epsilon);
    let mut out = Vec::with_capacity(k);
    let mut cum = 0.0;
    let mut pos = 0;
    for i in 1..=k {
        let target = (i as f64 - 0.5) / k as f64;
        while pos < cdf.tuples.len() - 1 && cum + cdf.tuples[pos].1 < target - 1e-12 {
            cum += cdf.tuples[pos].1;
            pos += 1;
        }
        out.push(cdf.tuples[pos].0);
    }
    UnivariateQuantization::new(out)
}
