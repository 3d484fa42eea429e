//! Shifted square lattices as ε-samples of uniform distributions on convex
//! regions.

use rand::Rng;

use crate::error::{Error, Result};
use crate::geom::{Aabb, ConvexPolygon, Point};

/// Largest lattice the sampler will generate.
pub const MAX_LATTICE_POINTS: f64 = 1e7;

/// A bounded convex region with uniform density.
pub trait ConvexRegion: Sync {
    fn dim(&self) -> usize;
    fn contains(&self, p: &Point) -> bool;
    fn bounding_box(&self) -> Aabb;
    fn volume(&self) -> f64;
}

impl ConvexRegion for ConvexPolygon {
    fn dim(&self) -> usize {
        2
    }

    fn contains(&self, p: &Point) -> bool {
        ConvexPolygon::contains(self, p)
    }

    fn bounding_box(&self) -> Aabb {
        ConvexPolygon::bounding_box(self)
    }

    fn volume(&self) -> f64 {
        self.area()
    }
}

/// A closed Euclidean ball (a disk in the plane).
#[derive(Clone, Debug, PartialEq)]
pub struct BallRegion {
    pub center: Point,
    pub radius: f64,
}

impl ConvexRegion for BallRegion {
    fn dim(&self) -> usize {
        self.center.dim()
    }

    fn contains(&self, p: &Point) -> bool {
        p.dist2(&self.center) <= self.radius * self.radius
    }

    fn bounding_box(&self) -> Aabb {
        Aabb {
            lo: Point::new(self.center.coords().iter().map(|c| c - self.radius).collect::<Vec<_>>()),
            hi: Point::new(self.center.coords().iter().map(|c| c + self.radius).collect::<Vec<_>>()),
        }
    }

    fn volume(&self) -> f64 {
        let d = self.dim() as i32;
        let unit = match d {
            1 => 2.0,
            2 => std::f64::consts::PI,
            3 => 4.0 / 3.0 * std::f64::consts::PI,
            _ => {
                // V_d = π^{d/2} / Γ(d/2 + 1)
                std::f64::consts::PI.powf(d as f64 / 2.0) / statrs::function::gamma::gamma(d as f64 / 2.0 + 1.0)
            }
        };
        unit * self.radius.powi(d)
    }
}

impl ConvexRegion for Aabb {
    fn dim(&self) -> usize {
        Aabb::dim(self)
    }

    fn contains(&self, p: &Point) -> bool {
        Aabb::contains(self, p)
    }

    fn bounding_box(&self) -> Aabb {
        self.clone()
    }

    fn volume(&self) -> f64 {
        Aabb::volume(self)
    }
}

/// `(ν/ε²)·ln(ν/ε)`.
pub fn lattice_target(epsilon: f64, vc: usize) -> f64 {
    let nu = vc as f64;
    nu / (epsilon * epsilon) * (nu / epsilon).ln()
}

/// Lattice points `lo + (shift + k)·h` inside the region.
fn lattice_points(region: &dyn ConvexRegion, h: f64, shift: &[f64]) -> Vec<Point> {
    let bbox = region.bounding_box();
    let d = shift.len();
    let counts: Vec<usize> = (0..d)
        .map(|a| (((bbox.hi[a] - bbox.lo[a]) / h - shift[a]).floor().max(-1.0) + 1.0) as usize)
        .collect();
    if counts.iter().any(|&c| c == 0) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; d];
    loop {
        let p = Point::new(
            (0..d)
                .map(|a| bbox.lo[a] + (shift[a] + idx[a] as f64) * h)
                .collect::<Vec<_>>(),
        );
        if region.contains(&p) {
            out.push(p);
        }
        let mut a = 0;
        loop {
            if a == d {
                return out;
            }
            idx[a] += 1;
            if idx[a] < counts[a] {
                break;
            }
            idx[a] = 0;
            a += 1;
        }
    }
}

/// Points of a randomly shifted cubic lattice inside `region`, with the
/// spacing halved or doubled until the count lies in `[T, 2^d·T]` for
/// `T = (ν/ε²)·ln(ν/ε)`.
pub fn lattice_eps_sample<R: Rng + ?Sized>(
    region: &dyn ConvexRegion,
    epsilon: f64,
    vc: usize,
    rng: &mut R,
) -> Result<Vec<Point>> {
    crate::quantization::check_unit("epsilon", epsilon)?;
    if vc == 0 {
        return Err(Error::param("VC dimension must be at least 1"));
    }
    let d = region.dim();
    let volume = region.volume();
    if !(volume.is_finite() && volume > 0.0) {
        return Err(Error::param("region has zero volume"));
    }
    let target = lattice_target(epsilon, vc).max(1.0);
    let upper = target * f64::from(1u32 << d.min(20));
    if upper > MAX_LATTICE_POINTS {
        return Err(Error::TooLarge {
            what: "lattice sample",
            count: target,
            limit: MAX_LATTICE_POINTS,
        });
    }
    let shift: Vec<f64> = (0..d).map(|_| rng.gen::<f64>()).collect();
    let mut h = (volume / (2.0 * target)).powf(1.0 / d as f64);
    let mut points = lattice_points(region, h, &shift);
    let mut last_move = 0i8;
    for _ in 0..64 {
        let n = points.len() as f64;
        let step = if n < target {
            -1
        } else if n > upper {
            1
        } else {
            break;
        };
        if step == 1 && last_move == -1 {
            // the count jumped over the window; keep the larger lattice
            break;
        }
        h = if step < 0 { h / 2.0 } else { h * 2.0 };
        last_move = step;
        points = lattice_points(region, h, &shift);
    }
    if points.is_empty() {
        return Err(Error::param("lattice missed the region"));
    }
    Ok(points)
}
