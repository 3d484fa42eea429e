//! Direction nets and the normalizing frame used by the kernel builder.

use crate::geom::{coord_scale, Point};

/// Orthonormal frame adapted to a point set: the first vector follows an
/// approximate diameter, each next one the approximate diameter of the
/// projection onto the orthogonal complement. Axes along which the set has
/// no extent are omitted.
pub(crate) struct Frame {
    pub axes: Vec<Vec<f64>>,
    pub widths: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl Frame {
    pub fn adapted(points: &[Point]) -> Frame {
        let d = points[0].dim();
        let tol = 1e-12 * coord_scale(points);
        let origin = points[0].coords();
        let mut axes: Vec<Vec<f64>> = Vec::new();
        let residual = |p: &Point, axes: &[Vec<f64>]| -> Vec<f64> {
            let mut r: Vec<f64> = p.coords().iter().zip(origin).map(|(a, b)| a - b).collect();
            for e in axes {
                let t = dot(&r, e);
                r.iter_mut().zip(e).for_each(|(x, y)| *x -= t * y);
            }
            r
        };
        for _ in 0..d {
            let res: Vec<Vec<f64>> = points.iter().map(|p| residual(p, &axes)).collect();
            let far = |from: &[f64]| -> usize {
                let mut best = (0, -1.0);
                for (i, r) in res.iter().enumerate() {
                    let d2: f64 = r.iter().zip(from).map(|(a, b)| (a - b) * (a - b)).sum();
                    if d2 > best.1 {
                        best = (i, d2);
                    }
                }
                best.0
            };
            let a = far(&res[0]);
            let b = far(&res[a]);
            let e: Vec<f64> = res[b].iter().zip(&res[a]).map(|(x, y)| x - y).collect();
            let len = dot(&e, &e).sqrt();
            if len <= tol {
                break;
            }
            axes.push(e.into_iter().map(|x| x / len).collect());
        }
        let widths = axes
            .iter()
            .map(|e| crate::geom::width_unchecked(points, e).value)
            .collect();
        Frame { axes, widths }
    }

    /// Frame dimension after dropping degenerate axes.
    pub fn rank(&self) -> usize {
        self.axes.len()
    }

    /// Maps a direction of the normalized frame (each axis scaled to unit
    /// extent) to an ambient direction with the same extreme points.
    pub fn ambient(&self, v: &[f64]) -> Vec<f64> {
        let d = self.axes[0].len();
        let mut out = vec![0.0; d];
        for ((e, w), c) in self.axes.iter().zip(&self.widths).zip(v) {
            for (o, x) in out.iter_mut().zip(e) {
                *o += c / w * x;
            }
        }
        out
    }
}

/// Directions on a half circle with spacing at most `spacing`, always an
/// even count so both axes are present.
pub(crate) fn circle_net(spacing: f64) -> Vec<Vec<f64>> {
    let n = 2 * (std::f64::consts::FRAC_PI_2 / spacing).ceil().max(1.0) as usize;
    circle_net_count(n)
}

pub(crate) fn circle_net_count(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|j| {
            let t = std::f64::consts::PI * j as f64 / n as f64;
            vec![t.cos(), t.sin()]
        })
        .collect()
}

/// The three axes plus a Fibonacci spiral over the upper hemisphere with
/// about one direction per `spacing²` of solid angle.
pub(crate) fn sphere_net(spacing: f64) -> Vec<Vec<f64>> {
    let n = (std::f64::consts::TAU / (spacing * spacing)).ceil() as usize;
    sphere_net_count(n)
}

pub(crate) fn sphere_net_count(n: usize) -> Vec<Vec<f64>> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let mut dirs = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
    for i in 0..n {
        let z = (i as f64 + 0.5) / n as f64;
        let r = (1.0 - z * z).sqrt();
        let phi = golden * i as f64;
        dirs.push(vec![r * phi.cos(), r * phi.sin(), z]);
    }
    dirs
}
