//! Reference implementations used as oracles by the integration tests. They
//! are written for clarity, not speed, and share no code with the library
//! beyond the `Point` type.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use uncertain_extent::{Point, PointDistribution, UncertainPointSet};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn diameter(points: &[Vec<f64>]) -> f64 {
    let mut best: f64 = 0.0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            best = best.max(dist(&points[i], &points[j]));
        }
    }
    best
}

pub fn width(points: &[Vec<f64>], u: &[f64]) -> f64 {
    let dots: Vec<f64> = points
        .iter()
        .map(|p| p.iter().zip(u).map(|(a, b)| a * b).sum())
        .collect();
    dots.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - dots.iter().cloned().fold(f64::INFINITY, f64::min)
}

pub fn box_widths(points: &[Vec<f64>]) -> Vec<f64> {
    (0..points[0].len())
        .map(|a| {
            let lo = points.iter().map(|p| p[a]).fold(f64::INFINITY, f64::min);
            let hi = points.iter().map(|p| p[a]).fold(f64::NEG_INFINITY, f64::max);
            hi - lo
        })
        .collect()
}

pub fn box_perimeter(points: &[Vec<f64>]) -> f64 {
    2.0 * box_widths(points).iter().sum::<f64>()
}

pub fn box_volume(points: &[Vec<f64>]) -> f64 {
    box_widths(points).iter().product()
}

/// Circle through three points, `None` when collinear.
fn circumcircle(a: &[f64], b: &[f64], c: &[f64]) -> Option<(Vec<f64>, f64)> {
    let (bx, by) = (b[0] - a[0], b[1] - a[1]);
    let (cx, cy) = (c[0] - a[0], c[1] - a[1]);
    let d = 2.0 * (bx * cy - by * cx);
    if d.abs() < 1e-14 {
        return None;
    }
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    Some((vec![a[0] + ux, a[1] + uy], (ux * ux + uy * uy).sqrt()))
}

/// Smallest enclosing circle radius in the plane: the smallest candidate
/// circle (through 2 or 3 points) containing every point.
pub fn seb_radius_2d(points: &[Vec<f64>]) -> f64 {
    if points.len() == 1 {
        return 0.0;
    }
    let covers = |c: &[f64], r: f64| points.iter().all(|p| dist(p, c) <= r * (1.0 + 1e-10) + 1e-12);
    let mut best = f64::INFINITY;
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            let c: Vec<f64> = points[i].iter().zip(&points[j]).map(|(a, b)| (a + b) / 2.0).collect();
            let r = dist(&points[i], &points[j]) / 2.0;
            if r < best && covers(&c, r) {
                best = r;
            }
            for k in j + 1..n {
                if let Some((c, r)) = circumcircle(&points[i], &points[j], &points[k]) {
                    if r < best && covers(&c, r) {
                        best = r;
                    }
                }
            }
        }
    }
    best
}

/// Convex hull area by the shoelace formula over a gift-wrapped hull.
pub fn hull_area(points: &[Vec<f64>]) -> f64 {
    let hull = hull(points);
    if hull.len() < 3 {
        return 0.0;
    }
    let mut s = 0.0;
    for i in 0..hull.len() {
        let (a, b) = (&hull[i], &hull[(i + 1) % hull.len()]);
        s += a[0] * b[1] - a[1] * b[0];
    }
    s.abs() / 2.0
}

fn cross(o: &[f64], a: &[f64], b: &[f64]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Counter-clockwise hull vertices, no collinear points.
pub fn hull(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Vec<f64>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<f64>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Closed containment in a counter-clockwise convex polygon.
pub fn in_convex(poly: &[Vec<f64>], q: &[f64]) -> bool {
    if poly.len() < 3 {
        return false;
    }
    (0..poly.len()).all(|i| cross(&poly[i], &poly[(i + 1) % poly.len()], q) >= -1e-12)
}

/// Area of a counter-clockwise convex polygon clipped to an axis-aligned
/// rectangle (Sutherland–Hodgman).
pub fn clipped_area(poly: &[[f64; 2]], lo: [f64; 2], hi: [f64; 2]) -> f64 {
    let mut cur: Vec<[f64; 2]> = poly.to_vec();
    // each half-plane: (axis, bound, keep-below)
    for (axis, bound, below) in [(0, lo[0], false), (0, hi[0], true), (1, lo[1], false), (1, hi[1], true)] {
        let inside = |p: &[f64; 2]| if below { p[axis] <= bound } else { p[axis] >= bound };
        let mut next = Vec::new();
        for i in 0..cur.len() {
            let a = cur[i];
            let b = cur[(i + 1) % cur.len()];
            let (ia, ib) = (inside(&a), inside(&b));
            if ia {
                next.push(a);
            }
            if ia != ib {
                let t = (bound - a[axis]) / (b[axis] - a[axis]);
                next.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
            }
        }
        cur = next;
        if cur.is_empty() {
            return 0.0;
        }
    }
    let mut s = 0.0;
    for i in 0..cur.len() {
        let (a, b) = (cur[i], cur[(i + 1) % cur.len()]);
        s += a[0] * b[1] - a[1] * b[0];
    }
    s.abs() / 2.0
}

/// Every joint outcome of an all-discrete model with its probability,
/// enumerated by mixed-radix counting.
pub fn outcomes(model: &UncertainPointSet) -> Vec<(Vec<Vec<f64>>, f64)> {
    let supports: Vec<Vec<(Vec<f64>, f64)>> = model
        .distributions()
        .iter()
        .map(|d| match d {
            PointDistribution::Discrete(s) => s.iter().map(|(p, w)| (p.coords().to_vec(), *w)).collect(),
            _ => panic!("outcomes needs an all-discrete model"),
        })
        .collect();
    let mut digits = vec![0usize; supports.len()];
    let mut out = Vec::new();
    loop {
        let pts = digits.iter().zip(&supports).map(|(&d, s)| s[d].0.clone()).collect();
        let w = digits.iter().zip(&supports).map(|(&d, s)| s[d].1).product();
        out.push((pts, w));
        let mut i = 0;
        loop {
            if i == digits.len() {
                return out;
            }
            digits[i] += 1;
            if digits[i] < supports[i].len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Exact distribution of `f` as (value, mass) atoms.
pub fn exact_atoms(model: &UncertainPointSet, f: impl Fn(&[Vec<f64>]) -> f64) -> Vec<(f64, f64)> {
    outcomes(model).into_iter().map(|(pts, w)| (f(&pts), w)).collect()
}

/// `sup_t |F(t) − G(t)|` for two distributions given as weighted atoms.
/// Both are right-continuous step functions, so it suffices to compare them
/// at every breakpoint; breakpoints closer than `tie` (relative) are merged
/// so that a value computed twice with different rounding is not counted
/// as a jump.
pub fn sup_deviation(f: &[(f64, f64)], g: &[(f64, f64)], tie: f64) -> f64 {
    let mut events: Vec<(f64, f64, f64)> = f
        .iter()
        .map(|&(v, w)| (v, w, 0.0))
        .chain(g.iter().map(|&(v, w)| (v, 0.0, w)))
        .collect();
    events.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (mut cf, mut cg, mut worst) = (0.0, 0.0, 0.0f64);
    let mut i = 0;
    while i < events.len() {
        let start = events[i].0;
        while i < events.len() && events[i].0 - start <= tie * start.abs().max(1.0) {
            cf += events[i].1;
            cg += events[i].2;
            i += 1;
        }
        worst = worst.max((cf - cg).abs());
    }
    worst
}

pub fn uniform_atoms(values: &[f64]) -> Vec<(f64, f64)> {
    values.iter().map(|&v| (v, 1.0 / values.len() as f64)).collect()
}

/// Random discrete model in the plane: `n` points with supports of size
/// `1..=max_support`, random positive weights.
pub fn random_discrete_model<R: Rng>(rng: &mut R, n: usize, max_support: usize, d: usize) -> UncertainPointSet {
    let dists = (0..n)
        .map(|_| {
            let k = rng.gen_range(1..=max_support);
            let center: Vec<f64> = (0..d).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.1..1.0)).collect();
            let total: f64 = raw.iter().sum();
            let mut support: Vec<(Point, f64)> = raw
                .iter()
                .map(|w| {
                    let p: Vec<f64> = center.iter().map(|c| c + rng.gen_range(-1.5..1.5)).collect();
                    (Point::new(p), w / total)
                })
                .collect();
            // renormalize so the weights sum to one to the last bit
            let s: f64 = support.iter().map(|(_, w)| w).sum();
            support.iter_mut().for_each(|(_, w)| *w /= s);
            PointDistribution::Discrete(support)
        })
        .collect();
    UncertainPointSet::new(d, dists).unwrap()
}

pub fn random_direction<R: Rng>(rng: &mut R, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.1 && n <= 1.0 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

pub fn coords(points: &[Point]) -> Vec<Vec<f64>> {
    points.iter().map(|p| p.coords().to_vec()).collect()
}
