//! Smallest enclosing balls (move-to-front Welzl).

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{common_dim, coord_scale, Ball, Point, GEOM_TOL};
use crate::error::{Error, Result};

/// Boundary slack used when reporting the support set.
const SUPPORT_TOL: f64 = 1e-9;

/// Subsets are searched exhaustively for the canonical support only when the
/// number of near-boundary points is at most this.
const MAX_SUPPORT_SEARCH: usize = 12;

/// The minimal enclosing ball plus a canonical support set.
///
/// `support` holds at most d+1 indices of boundary points whose own minimal
/// ball is the same ball; among all such sets the smallest, lexicographically
/// lowest one is reported.
#[derive(Clone, Debug, PartialEq)]
pub struct EnclosingBall {
    pub ball: Ball,
    pub support: Vec<usize>,
}

pub fn seb2(points: &[Point]) -> Result<EnclosingBall> {
    let d = common_dim(points)?;
    if !(2..=3).contains(&d) {
        return Err(Error::UnsupportedDimension {
            dim: d,
            what: "smallest enclosing ball",
        });
    }
    let scale = coord_scale(points);
    let tol = GEOM_TOL * scale;

    // Randomized order, seeded by the input size so repeated calls agree.
    let mut order: Vec<usize> = (0..points.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EB2 ^ points.len() as u64);
    order.shuffle(&mut rng);

    let mut support = Vec::with_capacity(d + 1);
    let mut welzl = Welzl {
        points,
        dim: d,
        tol,
    };
    let ball = welzl
        .mtf(&mut order, points.len(), &mut support)
        .expect("nonempty input has a ball");
    let ball = Ball {
        radius: points
            .iter()
            .map(|p| p.dist(&ball.center))
            .fold(0.0, f64::max),
        center: ball.center,
    };
    let support = canonical_support(points, &ball, d, scale);
    Ok(EnclosingBall { ball, support })
}

struct Welzl<'a> {
    points: &'a [Point],
    dim: usize,
    tol: f64,
}

impl Welzl<'_> {
    fn mtf(&mut self, list: &mut [usize], end: usize, support: &mut Vec<usize>) -> Option<Ball> {
        let mut ball = self.support_ball(support);
        if support.len() == self.dim + 1 {
            return ball;
        }
        for i in 0..end {
            let p = &self.points[list[i]];
            let inside = ball
                .as_ref()
                .is_some_and(|b| p.dist(&b.center) <= b.radius + self.tol);
            if !inside {
                support.push(list[i]);
                ball = self.mtf(list, i, support);
                support.pop();
                list[..=i].rotate_right(1);
            }
        }
        ball
    }

    fn support_ball(&self, support: &[usize]) -> Option<Ball> {
        let pts: Vec<&Point> = support.iter().map(|&i| &self.points[i]).collect();
        match pts.len() {
            0 => None,
            1 => Some(Ball {
                center: pts[0].clone(),
                radius: 0.0,
            }),
            _ => ball_through(&pts).or_else(|| Some(small_seb(&pts))),
        }
    }
}

fn canonical_support(points: &[Point], ball: &Ball, d: usize, scale: f64) -> Vec<usize> {
    let tol = SUPPORT_TOL * scale.max(ball.radius);
    let near: Vec<usize> = (0..points.len())
        .filter(|&i| (points[i].dist(&ball.center) - ball.radius).abs() <= tol)
        .collect();
    if near.len() <= MAX_SUPPORT_SEARCH {
        for size in 1..=(d + 1).min(near.len()) {
            let mut found = None;
            for_each_subset(near.len(), size, &mut |idx: &[usize]| {
                if found.is_some() {
                    return;
                }
                let pts: Vec<&Point> = idx.iter().map(|&k| &points[near[k]]).collect();
                if small_seb(&pts).radius >= ball.radius - tol {
                    found = Some(idx.iter().map(|&k| near[k]).collect::<Vec<_>>());
                }
            });
            if let Some(s) = found {
                return s;
            }
        }
    }
    // Too many cospherical points for an exhaustive search: keep the first d+1.
    near.into_iter().take(d + 1).collect()
}

/// Visits all `size`-subsets of `0..n` in lexicographic order.
pub(crate) fn for_each_subset(n: usize, size: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == size {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < size - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, size, cur, f);
            cur.pop();
        }
    }
    let mut cur = Vec::with_capacity(size);
    rec(0, n, size, &mut cur, f);
}

/// The ball whose boundary passes through all of `pts` with center in their
/// affine hull; `None` when the points are affinely dependent.
pub fn ball_through(pts: &[&Point]) -> Option<Ball> {
    let s0 = pts.first()?;
    let k = pts.len() - 1;
    if k == 0 {
        return Some(Ball {
            center: (*s0).clone(),
            radius: 0.0,
        });
    }
    let vs: Vec<Vec<f64>> = pts[1..].iter().map(|p| p.sub(s0)).collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut m = vec![vec![0.0; k + 1]; k];
    for i in 0..k {
        for j in 0..k {
            m[i][j] = dot(&vs[i], &vs[j]);
        }
        m[i][k] = 0.5 * dot(&vs[i], &vs[i]);
    }
    let lambda = solve(m)?;
    let mut center = s0.coords().to_vec();
    for (l, v) in lambda.iter().zip(&vs) {
        for (c, x) in center.iter_mut().zip(v) {
            *c += l * x;
        }
    }
    let center = Point::new(center);
    let radius = pts.iter().map(|p| p.dist(&center)).fold(0.0, f64::max);
    radius.is_finite().then_some(Ball { center, radius })
}

/// Gaussian elimination with partial pivoting on an augmented k x (k+1) matrix.
fn solve(mut m: Vec<Vec<f64>>) -> Option<Vec<f64>> {
    let k = m.len();
    let scale = (0..k).map(|i| m[i][i].abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return None;
    }
    for col in 0..k {
        let piv = (col..k).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() <= 1e-12 * scale {
            return None;
        }
        m.swap(col, piv);
        for r in col + 1..k {
            let f = m[r][col] / m[col][col];
            for c in col..=k {
                m[r][c] -= f * m[col][c];
            }
        }
    }
    let mut x = vec![0.0; k];
    for r in (0..k).rev() {
        let s: f64 = (r + 1..k).map(|c| m[r][c] * x[c]).sum();
        x[r] = (m[r][k] - s) / m[r][r];
    }
    Some(x)
}

/// Minimal enclosing ball of a handful of points by exhaustive search over
/// subsets of size at most d+1.
pub fn small_seb(pts: &[&Point]) -> Ball {
    assert!(!pts.is_empty(), "small_seb needs at least one point");
    let d = pts[0].dim();
    let scale = pts
        .iter()
        .flat_map(|p| p.coords().iter())
        .fold(1.0f64, |m, c| m.max(c.abs()));
    let tol = 1e-10 * scale;
    let mut best: Option<Ball> = None;
    for size in 1..=(d + 1).min(pts.len()) {
        for_each_subset(pts.len(), size, &mut |idx: &[usize]| {
            let sub: Vec<&Point> = idx.iter().map(|&i| pts[i]).collect();
            if let Some(b) = ball_through(&sub) {
                if best.as_ref().is_some_and(|cur| cur.radius <= b.radius) {
                    return;
                }
                if pts.iter().all(|p| p.dist(&b.center) <= b.radius + tol) {
                    best = Some(b);
                }
            }
        });
    }
    best.unwrap_or_else(|| {
        // Numerically hopeless input; fall back to the ball around the centroid.
        let mut c = vec![0.0; d];
        for p in pts {
            for (ci, x) in c.iter_mut().zip(p.coords()) {
                *ci += x / pts.len() as f64;
            }
        }
        let center = Point::new(c);
        let radius = pts.iter().map(|p| p.dist(&center)).fold(0.0, f64::max);
        Ball { center, radius }
    })
}
