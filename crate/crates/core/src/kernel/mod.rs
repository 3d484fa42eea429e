//! α-kernels and (ε,α)-kernels.
//!
//! A kernel keeps the extreme points of a point set along a net of
//! directions chosen in a frame where the set is fat. Each kernel is checked
//! against random directions after construction; if the relative width
//! error exceeds α somewhere, the net is refined.

mod net;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::geom::{width_unchecked, Direction, Point};
use crate::model::{sample_point_set, UncertainPointSet};
use crate::quantization::{check_unit, trial_count, KVariateQuantization, UnivariateQuantization, DEFAULT_SAMPLE_CONSTANT};
use crate::rng::SeededRng;
use crate::statistic::Statistic;

use net::{circle_net, circle_net_count, sphere_net, sphere_net_count, Frame};

/// Directions used by the post-construction width check.
const CHECK_DIRECTIONS: usize = 1000;
const MAX_REFINEMENTS: usize = 6;
/// Direction counts of a capped kernel stop growing at this multiple of the
/// cap.
const CAPPED_DIRECTION_FACTOR: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct AlphaKernel {
    points: Vec<Point>,
    indices: Vec<usize>,
    alpha: f64,
    spacing: f64,
    net_size: usize,
}

impl AlphaKernel {
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Positions of the kernel points in the source set, increasing.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Relative width error the kernel is built for (or, for capped
    /// kernels, the largest error observed).
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Angular spacing of the final direction net; 0 when no net was used.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Number of extreme-point queries: two per net direction.
    pub fn net_size(&self) -> usize {
        self.net_size
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn check_kernel_dim(points: &[Point]) -> Result<usize> {
    let d = crate::geom::common_dim(points)?;
    if !(2..=3).contains(&d) {
        return Err(Error::UnsupportedDimension { dim: d, what: "alpha kernels" });
    }
    Ok(d)
}

/// Extreme points (lowest index on ties) of `points` along each ambient
/// direction, both signs.
fn extremes(points: &[Point], dirs: &[Vec<f64>]) -> Vec<usize> {
    let mut idx: Vec<usize> = dirs
        .iter()
        .flat_map(|u| {
            let w = width_unchecked(points, u);
            [w.max_index, w.min_index]
        })
        .collect();
    idx.sort_unstable();
    idx.dedup();
    idx
}

/// Ambient directions of a net with the given spacing, or `None` when the
/// frame has rank below 2 and no net is needed.
fn net_directions(frame: &Frame, spacing: f64) -> Option<Vec<Vec<f64>>> {
    let local = match frame.rank() {
        0 | 1 => return None,
        2 => circle_net(spacing),
        _ => sphere_net(spacing),
    };
    Some(local.iter().map(|v| frame.ambient(v)).collect())
}

fn net_directions_count(frame: &Frame, n: usize) -> Vec<Vec<f64>> {
    let local = match frame.rank() {
        2 => circle_net_count(n.max(2)),
        _ => sphere_net_count(n),
    };
    local.iter().map(|v| frame.ambient(v)).collect()
}

/// Degenerate sets: one witness when all points coincide, the two extremes
/// along the only nondegenerate axis when the set is collinear.
fn low_rank_kernel(points: &[Point], frame: &Frame, alpha: f64) -> AlphaKernel {
    let indices = match frame.rank() {
        0 => vec![0],
        _ => extremes(points, &frame.axes),
    };
    AlphaKernel {
        points: indices.iter().map(|&i| points[i].clone()).collect(),
        net_size: 2 * frame.rank(),
        indices,
        alpha,
        spacing: 0.0,
    }
}

fn check_directions(d: usize, count: usize, salt: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA1FA_0000 ^ salt);
    (0..count)
        .map(|_| Direction::random(d, &mut rng).coords().to_vec())
        .collect()
}

/// Largest `(ω(Q,u) − ω(K,u)) / ω(Q,u)` over the given directions
/// (directions with zero source width are skipped).
pub fn max_relative_width_error(source: &[Point], kernel: &[Point], dirs: &[Vec<f64>]) -> f64 {
    dirs.iter()
        .map(|u| {
            let wq = width_unchecked(source, u).value;
            if wq <= 0.0 {
                return 0.0;
            }
            (wq - width_unchecked(kernel, u).value) / wq
        })
        .fold(0.0, f64::max)
}

/// An α-kernel of `points` (d ∈ {2,3}, α ∈ (0,1)).
///
/// Starts from a net with spacing `√(α/4)`; if the relative width error on
/// the internal check directions exceeds α, the spacing is halved, and after
/// a few refinements the whole set is returned.
pub fn alpha_kernel(points: &[Point], alpha: f64) -> Result<AlphaKernel> {
    check_unit("alpha", alpha)?;
    let d = check_kernel_dim(points)?;
    let frame = Frame::adapted(points);
    let Some(_) = net_directions(&frame, 1.0) else {
        return Ok(low_rank_kernel(points, &frame, alpha));
    };
    let probes = check_directions(d, CHECK_DIRECTIONS, points.len() as u64);
    let mut spacing = (alpha / 4.0).sqrt();
    for _ in 0..=MAX_REFINEMENTS {
        let dirs = net_directions(&frame, spacing).expect("rank at least 2");
        let indices = extremes(points, &dirs);
        let kernel: Vec<Point> = indices.iter().map(|&i| points[i].clone()).collect();
        if max_relative_width_error(points, &kernel, &probes) <= alpha {
            return Ok(AlphaKernel {
                points: kernel,
                indices,
                alpha,
                spacing,
                net_size: 2 * dirs.len(),
            });
        }
        spacing /= 2.0;
    }
    Ok(AlphaKernel {
        points: points.to_vec(),
        indices: (0..points.len()).collect(),
        alpha,
        spacing,
        net_size: 2 * points.len(),
    })
}

/// The finest net whose kernel has at most `cap` points. The stored α is the
/// largest relative width error seen over the net, the coordinate axes, the
/// diametral direction and a set of random directions.
pub fn capped_alpha_kernel(points: &[Point], cap: usize) -> Result<AlphaKernel> {
    let d = check_kernel_dim(points)?;
    if cap < 2 {
        return Err(Error::param("kernel cap must be at least 2"));
    }
    let frame = Frame::adapted(points);
    if frame.rank() < 2 {
        return Ok(low_rank_kernel(points, &frame, 0.0));
    }
    let size_at = |n: usize| extremes(points, &net_directions_count(&frame, n)).len();
    // largest direction count whose kernel still fits, by bisection
    let (mut lo, mut hi) = (1usize, cap.max(2));
    let limit = CAPPED_DIRECTION_FACTOR * cap.max(2);
    while size_at(hi) <= cap {
        lo = hi;
        if hi >= limit {
            // every extreme point fits: the hull itself is small
            break;
        }
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if size_at(mid) <= cap {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let dirs = net_directions_count(&frame, lo);
    let indices = extremes(points, &dirs);
    let kernel: Vec<Point> = indices.iter().map(|&i| points[i].clone()).collect();
    if indices.len() > cap {
        return Err(Error::param(format!("kernel cap {cap} is below the {} axis extremes", indices.len())));
    }
    let mut probes = check_directions(d, 2 * CHECK_DIRECTIONS, points.len() as u64);
    probes.extend(dirs.iter().cloned());
    probes.extend((0..d).map(|i| Direction::axis(d, i).coords().to_vec()));
    let far = crate::geom::width_unchecked(points, frame.axes[0].as_slice());
    let diametral = points[far.max_index].sub(&points[far.min_index]);
    probes.push(diametral);
    let alpha = max_relative_width_error(points, &kernel, &probes);
    let spacing = match frame.rank() {
        2 => std::f64::consts::PI / lo.max(2) as f64,
        _ => (std::f64::consts::TAU / lo as f64).sqrt(),
    };
    Ok(AlphaKernel {
        points: kernel,
        indices,
        alpha,
        spacing,
        net_size: 2 * dirs.len(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelParams {
    pub epsilon: f64,
    pub alpha: f64,
    pub delta: f64,
    pub trials: Option<usize>,
    pub sample_constant: f64,
    /// Build capped kernels of at most this many points instead of
    /// α-targeted ones.
    pub cap: Option<usize>,
    /// Keep the sampled point sets next to their kernels.
    pub retain_samples: bool,
}

impl KernelParams {
    pub fn new(epsilon: f64, alpha: f64, delta: f64) -> Result<Self> {
        let p = Self {
            epsilon,
            alpha,
            delta,
            trials: None,
            sample_constant: DEFAULT_SAMPLE_CONSTANT,
            cap: None,
            retain_samples: false,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_unit("epsilon", self.epsilon)?;
        check_unit("alpha", self.alpha)?;
        check_unit("delta", self.delta)?;
        if self.trials == Some(0) {
            return Err(Error::param("trial count must be at least 1"));
        }
        if !(self.sample_constant.is_finite() && self.sample_constant > 0.0) {
            return Err(Error::param("sample constant must be positive"));
        }
        Ok(())
    }

    pub fn trials(&self) -> usize {
        self.trials
            .unwrap_or_else(|| trial_count(self.sample_constant, self.epsilon, self.delta))
    }
}

/// `m` kernels of independently sampled point sets.
#[derive(Clone, Debug)]
pub struct EpsAlphaKernel {
    kernels: Vec<AlphaKernel>,
    samples: Option<Vec<Vec<Point>>>,
    params: KernelParams,
    dim: usize,
    seed: u64,
    fingerprint: String,
}

impl EpsAlphaKernel {
    pub fn kernels(&self) -> &[AlphaKernel] {
        &self.kernels
    }

    /// The sampled sets behind each kernel, when built with
    /// `retain_samples`.
    pub fn samples(&self) -> Option<&[Vec<Point>]> {
        self.samples.as_deref()
    }

    pub fn params(&self) -> &KernelParams {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn len(&self) -> usize {
        self.kernels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kernels.is_empty()
    }

    /// The α every kernel satisfies: the requested one, or for capped
    /// kernels the largest observed.
    pub fn alpha(&self) -> f64 {
        match self.params.cap {
            None => self.params.alpha,
            Some(_) => self.kernels.iter().map(|k| k.alpha).fold(0.0, f64::max),
        }
    }

    pub fn total_points(&self) -> usize {
        self.kernels.iter().map(AlphaKernel::len).sum()
    }

    /// The `m` kernel widths in direction `u`, unreduced.
    pub fn width_quantization(&self, u: &Direction) -> Result<UnivariateQuantization> {
        if u.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: u.dim(),
            });
        }
        UnivariateQuantization::new(
            self.kernels
                .iter()
                .map(|k| width_unchecked(k.points(), u.coords()).value)
                .collect(),
        )
    }

    /// One statistic vector per kernel; fails for statistics without a
    /// known θ(α).
    pub fn function_quantization(&self, stat: &Statistic) -> Result<KVariateQuantization> {
        stat.require_theta(self.alpha())?;
        stat.check_dim(self.dim)?;
        let values = self
            .kernels
            .par_iter()
            .map(|k| stat.evaluate(k.points()))
            .collect::<Result<Vec<_>>>()?;
        KVariateQuantization::new(stat.arity(self.dim), values)
    }

    /// Kernels as lists of coordinates with a parameter header.
    pub fn to_json(&self) -> String {
        let kernels: Vec<Vec<&[f64]>> = self
            .kernels
            .iter()
            .map(|k| k.points().iter().map(Point::coords).collect())
            .collect();
        let doc = json!({
            "params": {
                "epsilon": self.params.epsilon,
                "alpha": self.alpha(),
                "delta": self.params.delta,
                "m": self.kernels.len(),
                "cap": self.params.cap,
                "seed": self.seed,
                "model": self.fingerprint,
            },
            "kernels": kernels,
        });
        serde_json::to_string(&doc).expect("kernel documents always serialize")
    }
}

pub fn build_eps_alpha_kernel(model: &UncertainPointSet, params: &KernelParams, seed: u64) -> Result<EpsAlphaKernel> {
    params.validate()?;
    let d = model.dim();
    if !(2..=3).contains(&d) {
        return Err(Error::UnsupportedDimension { dim: d, what: "alpha kernels" });
    }
    let m = params.trials();
    let built = (0..m)
        .into_par_iter()
        .map(|j| {
            let mut rng = SeededRng::new(seed, j as u64);
            let q = sample_point_set(model, &mut rng);
            let k = match params.cap {
                Some(cap) => capped_alpha_kernel(&q, cap)?,
                None => alpha_kernel(&q, params.alpha)?,
            };
            Ok((k, params.retain_samples.then_some(q)))
        })
        .collect::<Result<Vec<_>>>()?;
    let (kernels, samples): (Vec<_>, Vec<_>) = built.into_iter().unzip();
    Ok(EpsAlphaKernel {
        kernels,
        samples: params
            .retain_samples
            .then(|| samples.into_iter().map(|s| s.expect("retained")).collect()),
        params: params.clone(),
        dim: d,
        seed,
        fingerprint: model.fingerprint(),
    })
}
