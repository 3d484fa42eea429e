//! Exact extent statistics of fixed, finite point sets.

mod hull;
mod polygon;
mod seb;

pub use hull::{chull_stats_2d, convex_hull_2d, HullStats};
pub use polygon::{point_in_polygon, ConvexPolygon};
pub use seb::{ball_through, seb2, small_seb, EnclosingBall};

use std::ops::Index;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for geometric predicates; multiplied by [`coord_scale`].
pub const GEOM_TOL: f64 = 1e-12;

/// A point in R^d.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: impl Into<Vec<f64>>) -> Self {
        Point(coords.into())
    }

    pub fn origin(dim: usize) -> Self {
        Point(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn coords_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn dot(&self, u: &[f64]) -> f64 {
        self.0.iter().zip(u).map(|(a, b)| a * b).sum()
    }

    pub fn dist2(&self, other: &Point) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.dist2(other).sqrt()
    }

    pub fn sub(&self, other: &Point) -> Vec<f64> {
        self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()
    }

    pub fn translated(&self, offset: &[f64]) -> Point {
        Point(self.0.iter().zip(offset).map(|(a, b)| a + b).collect())
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        Point(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| 0.5 * (a + b))
                .collect(),
        )
    }
}

impl Index<usize> for Point {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl<const N: usize> From<[f64; N]> for Point {
    fn from(c: [f64; N]) -> Self {
        Point(c.to_vec())
    }
}

impl From<Vec<f64>> for Point {
    fn from(c: Vec<f64>) -> Self {
        Point(c)
    }
}

/// A unit vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Direction(Vec<f64>);

impl Direction {
    /// Normalizes `v`; fails on a zero or non-finite vector.
    pub fn new(v: impl Into<Vec<f64>>) -> Result<Self> {
        let mut v = v.into();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if v.is_empty() || !norm.is_finite() || norm == 0.0 {
            return Err(Error::param("direction must be a nonzero finite vector"));
        }
        v.iter_mut().for_each(|x| *x /= norm);
        Ok(Direction(v))
    }

    pub fn axis(dim: usize, i: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        Direction(v)
    }

    /// Uniform random direction on the unit sphere.
    pub fn random<R: rand::Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        use rand_distr::StandardNormal;
        loop {
            let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
            if let Ok(d) = Direction::new(v) {
                return d;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn negated(&self) -> Direction {
        Direction(self.0.iter().map(|x| -x).collect())
    }
}

/// A closed Euclidean ball.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

impl Ball {
    /// Closed containment with a relative slack of [`GEOM_TOL`].
    pub fn contains(&self, p: &Point) -> bool {
        let slack = GEOM_TOL * self.radius.max(coord_scale(std::slice::from_ref(p)));
        p.dist(&self.center) <= self.radius + slack
    }
}

/// An axis-aligned box `lo <= x <= hi`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aabb {
    pub lo: Point,
    pub hi: Point,
}

impl Aabb {
    pub fn dim(&self) -> usize {
        self.lo.dim()
    }

    pub fn widths(&self) -> Vec<f64> {
        self.lo
            .coords()
            .iter()
            .zip(self.hi.coords())
            .map(|(l, h)| h - l)
            .collect()
    }

    /// Closed containment.
    pub fn contains(&self, p: &Point) -> bool {
        (0..self.dim()).all(|i| self.lo[i] <= p[i] && p[i] <= self.hi[i])
    }

    /// Open containment: `p` lies in the interior.
    pub fn contains_strictly(&self, p: &Point) -> bool {
        (0..self.dim()).all(|i| self.lo[i] < p[i] && p[i] < self.hi[i])
    }

    /// (d-1)-volume of the boundary; the perimeter when d = 2.
    pub fn boundary_measure(&self) -> f64 {
        boundary_measure(&self.widths())
    }

    pub fn volume(&self) -> f64 {
        self.widths().iter().product()
    }
}

fn boundary_measure(widths: &[f64]) -> f64 {
    2.0 * (0..widths.len())
        .map(|i| {
            widths
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, w)| w)
                .product::<f64>()
        })
        .sum::<f64>()
}

/// Returns the common dimension of a nonempty point list.
pub fn common_dim(points: &[Point]) -> Result<usize> {
    let first = points.first().ok_or(Error::EmptyPointSet)?;
    let d = first.dim();
    for p in points {
        if p.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: p.dim(),
            });
        }
    }
    Ok(d)
}

/// Largest absolute coordinate, floored at 1; scales absolute tolerances.
pub fn coord_scale(points: &[Point]) -> f64 {
    points
        .iter()
        .flat_map(|p| p.coords().iter())
        .fold(1.0f64, |m, c| m.max(c.abs()))
}

/// Width of a point set in direction `u` and the indices attaining it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Width {
    pub value: f64,
    pub max_index: usize,
    pub min_index: usize,
}

pub fn directional_width(points: &[Point], u: &Direction) -> Result<Width> {
    let d = common_dim(points)?;
    if d != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: d,
        });
    }
    Ok(width_unchecked(points, u.coords()))
}

pub(crate) fn width_unchecked(points: &[Point], u: &[f64]) -> Width {
    let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
    let (mut hi_i, mut lo_i) = (0, 0);
    for (i, p) in points.iter().enumerate() {
        let t = p.dot(u);
        if t > hi {
            hi = t;
            hi_i = i;
        }
        if t < lo {
            lo = t;
            lo_i = i;
        }
    }
    Width {
        value: (hi - lo).max(0.0),
        max_index: hi_i,
        min_index: lo_i,
    }
}

/// Maximum pairwise Euclidean distance.
pub fn diameter(points: &[Point]) -> Result<f64> {
    let d = common_dim(points)?;
    if points.len() < 2 {
        return Ok(0.0);
    }
    if d == 2 {
        let hull = convex_hull_2d(points)?;
        let hp: Vec<&Point> = hull.iter().map(|&i| &points[i]).collect();
        return Ok(max_pair_dist2(&hp).sqrt());
    }
    let refs: Vec<&Point> = points.iter().collect();
    Ok(max_pair_dist2(&refs).sqrt())
}

fn max_pair_dist2(points: &[&Point]) -> f64 {
    let scan = |i: usize| {
        points[i + 1..]
            .iter()
            .map(|q| points[i].dist2(q))
            .fold(0.0f64, f64::max)
    };
    if points.len() > 512 {
        (0..points.len())
            .into_par_iter()
            .map(scan)
            .reduce(|| 0.0, f64::max)
    } else {
        (0..points.len()).map(scan).fold(0.0, f64::max)
    }
}

/// Bounding box together with its derived measures.
#[derive(Clone, Debug, PartialEq)]
pub struct AabbStats {
    pub bbox: Aabb,
    pub widths: Vec<f64>,
    /// `2 * sum of widths` in the plane; the boundary (d-1)-volume in general.
    pub perimeter: f64,
    pub volume: f64,
}

pub fn aabb(points: &[Point]) -> Result<Aabb> {
    let d = common_dim(points)?;
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for p in points {
        for i in 0..d {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    }
    Ok(Aabb {
        lo: Point(lo),
        hi: Point(hi),
    })
}

pub fn aabb_stats(points: &[Point]) -> Result<AabbStats> {
    let bbox = aabb(points)?;
    let widths = bbox.widths();
    Ok(AabbStats {
        perimeter: boundary_measure(&widths),
        volume: widths.iter().product(),
        widths,
        bbox,
    })
}
