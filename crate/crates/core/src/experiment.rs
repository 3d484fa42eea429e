//! The cylinder experiment: points on a cylinder piece blurred by isotropic
//! Gaussians, summarized by diameter, directional width and enclosing-ball
//! radius both on the full samples and on capped kernels.

use std::fmt::Write;

use rand::Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::geom::{Direction, Point};
use crate::kernel::{build_eps_alpha_kernel, KernelParams};
use crate::model::{PointDistribution, UncertainPointSet};
use crate::quantization::{reduce_univariate, UnivariateQuantization};
use crate::rng::{derive_seed, SeededRng};
use crate::statistic::Statistic;

#[derive(Clone, Debug, PartialEq)]
pub struct CylinderConfig {
    pub n: usize,
    pub radius: f64,
    pub length: f64,
    pub sigma: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub trials: usize,
    pub cap: usize,
    pub direction: Direction,
    pub seed: u64,
}

impl Default for CylinderConfig {
    fn default() -> Self {
        Self {
            n: 5000,
            radius: 1.0,
            length: 10.0,
            sigma: 3.0,
            epsilon: 0.2,
            delta: 0.05,
            trials: 40,
            cap: 40,
            direction: Direction::axis(3, 0),
            seed: 0,
        }
    }
}

impl CylinderConfig {
    pub fn statistics(&self) -> [Statistic; 3] {
        [
            Statistic::Diameter,
            Statistic::DirectionalWidth(self.direction.clone()),
            Statistic::Seb2Radius,
        ]
    }
}

/// Per-statistic results, in the order diameter, width, ball radius.
#[derive(Clone, Debug)]
pub struct CylinderResult {
    pub config: CylinderConfig,
    /// ε-quantizations from the full sampled sets.
    pub full: Vec<UnivariateQuantization>,
    /// (ε,α)-quantizations from the kernels.
    pub kernel: Vec<UnivariateQuantization>,
    /// Per-trial statistic values on the full sets, sorted.
    pub full_values: Vec<Vec<f64>>,
    /// Per-trial statistic values on the kernels, sorted.
    pub kernel_values: Vec<Vec<f64>>,
    pub total_kernel_points: usize,
    /// Largest relative width error observed over all kernels.
    pub alpha: f64,
}

/// `n` points uniform on the lateral surface of a cylinder with axis z,
/// centered at the origin.
pub fn cylinder_points(n: usize, radius: f64, length: f64, seed: u64) -> Vec<Point> {
    let mut rng = SeededRng::new(derive_seed(seed, 0xC71), 0);
    (0..n)
        .map(|_| {
            let t = rng.gen::<f64>() * std::f64::consts::TAU;
            let z = (rng.gen::<f64>() - 0.5) * length;
            Point::from([radius * t.cos(), radius * t.sin(), z])
        })
        .collect()
}

pub fn cylinder_model(config: &CylinderConfig) -> Result<UncertainPointSet> {
    let pts = cylinder_points(config.n, config.radius, config.length, config.seed);
    UncertainPointSet::new(
        3,
        pts.into_iter()
            .map(|p| PointDistribution::isotropic_gaussian(p, config.sigma))
            .collect(),
    )
}

pub fn run_cylinder(config: &CylinderConfig) -> Result<CylinderResult> {
    let model = cylinder_model(config)?;
    let mut params = KernelParams::new(config.epsilon, 0.5, config.delta)?;
    params.trials = Some(config.trials);
    params.cap = Some(config.cap);
    params.retain_samples = true;
    let kernels = build_eps_alpha_kernel(&model, &params, config.seed)?;
    let samples = kernels.samples().expect("retained");
    let stats = config.statistics();
    let mut full_values = Vec::new();
    let mut kernel_values = Vec::new();
    let mut full = Vec::new();
    let mut kernel = Vec::new();
    for stat in &stats {
        let mut f: Vec<f64> = samples
            .par_iter()
            .map(|q| stat.evaluate_scalar(q))
            .collect::<Result<_>>()?;
        let mut k: Vec<f64> = kernels
            .kernels()
            .par_iter()
            .map(|k| stat.evaluate_scalar(k.points()))
            .collect::<Result<_>>()?;
        f.sort_by(f64::total_cmp);
        k.sort_by(f64::total_cmp);
        full.push(reduce_univariate(&f, config.epsilon)?);
        kernel.push(reduce_univariate(&k, config.epsilon)?);
        full_values.push(f);
        kernel_values.push(k);
    }
    Ok(CylinderResult {
        config: config.clone(),
        full,
        kernel,
        full_values,
        kernel_values,
        total_kernel_points: kernels.total_points(),
        alpha: kernels.alpha(),
    })
}

impl CylinderResult {
    /// Three columns (diameter, width, ball radius), one row per quantile.
    pub fn to_csv(&self, kernel: bool) -> String {
        let c = &self.config;
        let cols = if kernel { &self.kernel } else { &self.full };
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# source={} n={} radius={} length={} sigma={} epsilon={} delta={} m={} cap={} seed={}",
            if kernel { "kernel" } else { "full" },
            c.n,
            c.radius,
            c.length,
            c.sigma,
            c.epsilon,
            c.delta,
            c.trials,
            c.cap,
            c.seed
        );
        if kernel {
            let _ = writeln!(out, "# alpha={} kernel_points={}", self.alpha, self.total_kernel_points);
        }
        let names: Vec<String> = c.statistics().iter().map(|s| s.to_string()).collect();
        out.push_str(&names.join(","));
        out.push('\n');
        let rows = cols.iter().map(|q| q.len()).max().unwrap_or(0);
        for r in 0..rows {
            let row: Vec<String> = cols
                .iter()
                .map(|q| q.values().get(r).map(|v| v.to_string()).unwrap_or_default())
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}
