use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{Direction, Point};
use crate::model::UncertainPointSet;
use crate::rng::SeededRng;

/// Draws per distribution standing in for a constant-size sample.
pub const CENTER_SAMPLE_SIZE: usize = 32;
const DIRECTIONS_3D: usize = 1000;
const PREFILTER_DIRECTIONS: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub struct CenterPoint {
    pub point: Point,
    /// Approximate center of each distribution's sample, in model order.
    pub per_point: Vec<Point>,
}

/// Center of the per-distribution centers. Distribution `i` is sampled on
/// stream `i` of `seed`.
pub fn center_point(model: &UncertainPointSet, seed: u64) -> Result<CenterPoint> {
    let d = model.dim();
    if !(2..=3).contains(&d) {
        return Err(Error::UnsupportedDimension { dim: d, what: "center points" });
    }
    let per_point = model
        .distributions()
        .par_iter()
        .enumerate()
        .map(|(i, dist)| {
            let mut rng = SeededRng::new(seed, i as u64);
            let sample: Vec<Point> = (0..CENTER_SAMPLE_SIZE).map(|_| dist.sample(&mut rng)).collect();
            approximate_center(&sample)
        })
        .collect::<Result<Vec<_>>>()?;
    let point = approximate_center(&per_point)?;
    Ok(CenterPoint { point, per_point })
}

/// Number of points in the closed half-plane through `q` with the fewest
/// points, computed exactly by an angular sweep.
pub fn halfspace_depth_2d(points: &[Point], q: &Point) -> usize {
    let mut coincident = 0;
    let mut angles: Vec<f64> = Vec::with_capacity(points.len());
    for p in points {
        let (dx, dy) = (p[0] - q[0], p[1] - q[1]);
        if dx == 0.0 && dy == 0.0 {
            coincident += 1;
        } else {
            angles.push(dy.atan2(dx));
        }
    }
    angles.sort_by(f64::total_cmp);
    let n = angles.len();
    if n == 0 {
        return coincident;
    }
    // largest number of directions inside a half-open half-turn [θ_i, θ_i + π)
    let pi = std::f64::consts::PI;
    let at = |k: usize| if k < n { angles[k] } else { angles[k - n] + std::f64::consts::TAU };
    let mut best = 0;
    let mut end = 0;
    for start in 0..n {
        end = end.max(start);
        while end < start + n && at(end) - at(start) < pi {
            end += 1;
        }
        best = best.max(end - start);
    }
    coincident + n - best
}

/// Minimum over the given directions of the number of points `p` with
/// `⟨p − q, u⟩ ≥ 0`; an upper bound on the halfspace depth.
fn directional_depth(points: &[Point], q: &Point, dirs: &[Vec<f64>]) -> usize {
    dirs.iter()
        .map(|u| {
            let c = q.dot(u);
            let above = points.iter().filter(|p| p.dot(u) >= c).count();
            let below = points.iter().filter(|p| p.dot(u) <= c).count();
            above.min(below)
        })
        .min()
        .unwrap_or(points.len())
}

fn proper_intersection(a: &Point, b: &Point, c: &Point, d: &Point) -> Option<Point> {
    let r = [b[0] - a[0], b[1] - a[1]];
    let s = [d[0] - c[0], d[1] - c[1]];
    let denom = r[0] * s[1] - r[1] * s[0];
    if denom == 0.0 {
        return None;
    }
    let ac = [c[0] - a[0], c[1] - a[1]];
    let t = (ac[0] * s[1] - ac[1] * s[0]) / denom;
    let u = (ac[0] * r[1] - ac[1] * r[0]) / denom;
    if t > 0.0 && t < 1.0 && u > 0.0 && u < 1.0 {
        Some(Point::from([a[0] + t * r[0], a[1] + t * r[1]]))
    } else {
        None
    }
}

fn mean(points: &[Point]) -> Point {
    let d = points[0].dim();
    let mut c = vec![0.0; d];
    for p in points {
        c.iter_mut().zip(p.coords()).for_each(|(a, b)| *a += b);
    }
    Point::new(c.into_iter().map(|x| x / points.len() as f64).collect::<Vec<_>>())
}

/// A point of large halfspace depth in a small set (d ∈ {2,3}).
///
/// Candidates are the input points plus, in the plane, every proper
/// intersection of two segments between input points (exact depth by
/// angular sweep), and in space the pairwise midpoints, centroid and
/// coordinatewise median (depth over a fixed net of directions). The result
/// is the mean of the deepest candidates, which is at least as deep since
/// depth regions are convex.
pub fn approximate_center(points: &[Point]) -> Result<Point> {
    let d = crate::geom::common_dim(points)?;
    match d {
        2 => Ok(center_2d(points)),
        3 => Ok(center_3d(points)),
        _ => Err(Error::UnsupportedDimension { dim: d, what: "center points" }),
    }
}

fn center_2d(points: &[Point]) -> Point {
    let n = points.len();
    let mut candidates: Vec<Point> = points.to_vec();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let crossings: Vec<Point> = (0..pairs.len())
        .into_par_iter()
        .flat_map_iter(|a| {
            let (i, j) = pairs[a];
            pairs[a + 1..].iter().filter_map(move |&(k, l)| {
                if k == i || k == j || l == i || l == j {
                    return None;
                }
                proper_intersection(&points[i], &points[j], &points[k], &points[l])
            })
        })
        .collect();
    candidates.extend(crossings);
    let dirs: Vec<Vec<f64>> = (0..PREFILTER_DIRECTIONS)
        .map(|k| {
            let t = std::f64::consts::PI * k as f64 / PREFILTER_DIRECTIONS as f64;
            vec![t.cos(), t.sin()]
        })
        .collect();
    let mut bounds: Vec<(usize, usize)> = candidates
        .par_iter()
        .enumerate()
        .map(|(c, q)| (directional_depth(points, q, &dirs), c))
        .collect();
    bounds.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut best = 0;
    let mut deepest: Vec<usize> = Vec::new();
    for (bound, c) in bounds {
        if bound < best {
            break;
        }
        let depth = halfspace_depth_2d(points, &candidates[c]);
        if depth > best {
            best = depth;
            deepest.clear();
        }
        if depth == best {
            deepest.push(c);
        }
    }
    deepest.sort_unstable();
    let chosen: Vec<Point> = deepest.iter().map(|&c| candidates[c].clone()).collect();
    mean(&chosen)
}

fn center_3d(points: &[Point]) -> Point {
    let n = points.len();
    let mut candidates: Vec<Point> = points.to_vec();
    for i in 0..n {
        for j in i + 1..n {
            candidates.push(points[i].midpoint(&points[j]));
        }
    }
    candidates.push(mean(points));
    let median: Vec<f64> = (0..3)
        .map(|a| {
            let mut c: Vec<f64> = points.iter().map(|p| p[a]).collect();
            c.sort_by(f64::total_cmp);
            c[c.len() / 2]
        })
        .collect();
    candidates.push(Point::new(median));
    let mut rng = ChaCha8Rng::seed_from_u64(0xCE17E5);
    let dirs: Vec<Vec<f64>> = (0..DIRECTIONS_3D)
        .map(|_| Direction::random(3, &mut rng).coords().to_vec())
        .collect();
    let depths: Vec<usize> = candidates
        .par_iter()
        .map(|q| directional_depth(points, q, &dirs))
        .collect();
    let best = depths.iter().copied().max().unwrap_or(0);
    let chosen: Vec<Point> = candidates
        .iter()
        .zip(&depths)
        .filter(|(_, d)| **d == best)
        .map(|(c, _)| c.clone())
        .collect();
    mean(&chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PointDistribution;

    fn brute_depth(points: &[Point], q: &Point) -> usize {
        // critical directions are normals of lines through q and a point;
        // check both sides of each
        let mut best = points.len();
        for p in points {
            let (dx, dy) = (p[0] - q[0], p[1] - q[1]);
            if dx == 0.0 && dy == 0.0 {
                continue;
            }
            let base = dy.atan2(dx) + std::f64::consts::FRAC_PI_2;
            for t in [base - 1e-9, base + 1e-9, base + std::f64::consts::PI - 1e-9, base + std::f64::consts::PI + 1e-9] {
                let u = [t.cos(), t.sin()];
                let c = q.dot(&u);
                best = best.min(points.iter().filter(|r| r.dot(&u) >= c).count());
            }
        }
        best
    }

    #[test]
    fn depth_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let pts: Vec<Point> = (0..25)
                .map(|_| Point::new(Direction::random(2, &mut rng).coords().iter().map(|c| c * 3.0).collect::<Vec<_>>()))
                .collect();
            let q = Point::from([0.3, -0.2]);
            assert_eq!(halfspace_depth_2d(&pts, &q), brute_depth(&pts, &q));
        }
    }

    #[test]
    fn square_center_is_deep() {
        let pts: Vec<Point> = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]].into_iter().map(Point::from).collect();
        let c = approximate_center(&pts).unwrap();
        assert!((c[0] - 0.5).abs() < 1e-12 && (c[1] - 0.5).abs() < 1e-12);
        assert_eq!(halfspace_depth_2d(&pts, &c), 2);
    }

    #[test]
    fn identical_point_masses() {
        let p = Point::from([2.0, -1.0]);
        let model = UncertainPointSet::point_masses(&vec![p.clone(); 7]).unwrap();
        assert_eq!(center_point(&model, 0).unwrap().point, p);
        let p3 = Point::from([1.0, 2.0, 3.0]);
        let model = UncertainPointSet::point_masses(&vec![p3.clone(); 4]).unwrap();
        assert_eq!(center_point(&model, 0).unwrap().point, p3);
    }

    #[test]
    fn center_of_ring_is_inside() {
        let model = UncertainPointSet::new(
            2,
            (0..20)
                .map(|i| {
                    let t = std::f64::consts::TAU * i as f64 / 20.0;
                    PointDistribution::isotropic_gaussian(Point::from([5.0 * t.cos(), 5.0 * t.sin()]), 0.5)
                })
                .collect(),
        )
        .unwrap();
        let c = center_point(&model, 3).unwrap();
        assert_eq!(c.per_point.len(), 20);
        assert!(c.point.dist(&Point::from([0.0, 0.0])) < 2.0);
    }
}
