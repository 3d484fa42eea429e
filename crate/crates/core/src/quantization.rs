//! Monte Carlo ε-quantizations of the distribution of a statistic.
//!
//! Each trial samples one point set from the model on its own RNG stream
//! `(seed, trial)`, evaluates the statistic, and the values are merged by
//! sorting. Univariate results are reduced to `⌈2/ε⌉` values; k-variate
//! results are optionally subsampled with a verification pass.

use rand::seq::index;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{sample_point_set, UncertainPointSet};
use crate::rng::{derive_seed, SeededRng};
use crate::statistic::Statistic;

pub const DEFAULT_SAMPLE_CONSTANT: f64 = 0.5;
pub const DEFAULT_KVARIATE_CONSTANT: f64 = 2.0;
pub const DEFAULT_DELTA: f64 = 0.05;

/// Retries of the k-variate reduction after the first attempt.
const REDUCE_RETRIES: usize = 3;
const VERIFY_GRID_SIDE: usize = 20;
const VERIFY_RANDOM_QUERIES: usize = 8000;

#[derive(Clone, Debug, PartialEq)]
pub struct QuantizationParams {
    pub epsilon: f64,
    pub delta: f64,
    /// Overrides the derived trial count.
    pub trials: Option<usize>,
    /// C in the univariate trial count.
    pub sample_constant: f64,
    /// C in the k-variate trial count and reduction target.
    pub kvariate_constant: f64,
    pub reduce: bool,
}

impl QuantizationParams {
    pub fn new(epsilon: f64, delta: f64) -> Result<Self> {
        let p = Self {
            epsilon,
            delta,
            trials: None,
            sample_constant: DEFAULT_SAMPLE_CONSTANT,
            kvariate_constant: DEFAULT_KVARIATE_CONSTANT,
            reduce: true,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_trials(mut self, m: usize) -> Self {
        self.trials = Some(m);
        self
    }

    pub fn with_sample_constant(mut self, c: f64) -> Self {
        self.sample_constant = c;
        self
    }

    pub fn without_reduction(mut self) -> Self {
        self.reduce = false;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_unit("epsilon", self.epsilon)?;
        check_unit("delta", self.delta)?;
        if self.trials == Some(0) {
            return Err(Error::param("trial count must be at least 1"));
        }
        for (name, c) in [("sample constant", self.sample_constant), ("k-variate constant", self.kvariate_constant)] {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::param(format!("{name} must be positive")));
            }
        }
        Ok(())
    }

    pub fn univariate_trials(&self) -> usize {
        self.trials
            .unwrap_or_else(|| trial_count(self.sample_constant, self.epsilon, self.delta))
    }

    pub fn kvariate_trials(&self, k: usize) -> usize {
        self.trials
            .unwrap_or_else(|| kvariate_trial_count(self.kvariate_constant, k, self.epsilon, self.delta))
    }
}

pub(crate) fn check_unit(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::param(format!("{name} must lie in (0,1), got {v}")))
    }
}

/// `⌈(C/ε²)·ln(1/(εδ))⌉`, at least 1.
pub fn trial_count(c: f64, epsilon: f64, delta: f64) -> usize {
    ((c / (epsilon * epsilon)) * (1.0 / (epsilon * delta)).ln()).ceil().max(1.0) as usize
}

/// `⌈(C·k/ε²)·ln(k/(εδ))⌉`, at least 1.
pub fn kvariate_trial_count(c: f64, k: usize, epsilon: f64, delta: f64) -> usize {
    let k = k as f64;
    ((c * k / (epsilon * epsilon)) * (k / (epsilon * delta)).ln()).ceil().max(1.0) as usize
}

/// `⌈2/ε⌉`, robust to `2/ε` landing a hair above an integer.
pub fn reduced_size(epsilon: f64) -> usize {
    ((2.0 / epsilon) - 1e-9).ceil().max(1.0) as usize
}

/// Sorted values whose empirical CDF approximates a distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct UnivariateQuantization {
    values: Vec<f64>,
}

impl UnivariateQuantization {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("quantization values must be finite"));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Fraction of stored values `≤ t`.
    pub fn eval(&self, t: f64) -> f64 {
        self.values.partition_point(|v| *v <= t) as f64 / self.values.len() as f64
    }

    /// CSV body with one value per line after `# key=value` header lines.
    pub fn to_csv(&self, header: &[(&str, String)]) -> String {
        let mut out = csv_header(header);
        out.push_str("value\n");
        for v in &self.values {
            out.push_str(&format!("{v}\n"));
        }
        out
    }
}

pub fn eval_univariate(r: &UnivariateQuantization, t: f64) -> f64 {
    r.eval(t)
}

/// A multiset of k-vectors answering dominance queries.
#[derive(Clone, Debug, PartialEq)]
pub struct KVariateQuantization {
    k: usize,
    points: Vec<Vec<f64>>,
}

impl KVariateQuantization {
    pub fn new(k: usize, mut points: Vec<Vec<f64>>) -> Result<Self> {
        if k == 0 {
            return Err(Error::param("arity must be at least 1"));
        }
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        for p in &points {
            if p.len() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    found: p.len(),
                });
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::param("quantization values must be finite"));
            }
        }
        points.sort_by(|a, b| lex_cmp(a, b));
        Ok(Self { k, points })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Fraction of stored points componentwise `≤ v`.
    pub fn eval(&self, v: &[f64]) -> Result<f64> {
        if v.len() != self.k {
            return Err(Error::DimensionMismatch {
                expected: self.k,
                found: v.len(),
            });
        }
        Ok(dominance_fraction(&self.points, v))
    }

    /// Projection onto one coordinate as a univariate quantization.
    pub fn marginal(&self, axis: usize) -> Result<UnivariateQuantization> {
        if axis >= self.k {
            return Err(Error::param(format!("axis {axis} out of range for k = {}", self.k)));
        }
        UnivariateQuantization::new(self.points.iter().map(|p| p[axis]).collect())
    }

    pub fn to_csv(&self, header: &[(&str, String)]) -> String {
        let mut out = csv_header(header);
        let names: Vec<String> = (0..self.k).map(|i| format!("r{i}")).collect();
        out.push_str(&names.join(","));
        out.push('\n');
        for p in &self.points {
            let row: Vec<String> = p.iter().map(|c| format!("{c}")).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn eval_kvariate(r: &KVariateQuantization, v: &[f64]) -> Result<f64> {
    r.eval(v)
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

pub(crate) fn csv_header(header: &[(&str, String)]) -> String {
    header.iter().map(|(k, v)| format!("# {k}={v}\n")).collect()
}

pub(crate) fn dominance_fraction(points: &[Vec<f64>], v: &[f64]) -> f64 {
    let hits = points
        .iter()
        .filter(|p| p.iter().zip(v).all(|(a, b)| a <= b))
        .count();
    hits as f64 / points.len() as f64
}

/// Runs `m` trials and returns the statistic vector of each, in trial order.
pub fn sample_statistic(
    model: &UncertainPointSet,
    stat: &Statistic,
    m: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    stat.check_dim(model.dim())?;
    (0..m)
        .into_par_iter()
        .map(|i| {
            let mut rng = SeededRng::new(seed, i as u64);
            let q = sample_point_set(model, &mut rng);
            stat.evaluate(&q)
        })
        .collect()
}

pub fn build_univariate(
    model: &UncertainPointSet,
    stat: &Statistic,
    params: &QuantizationParams,
    seed: u64,
) -> Result<UnivariateQuantization> {
    params.validate()?;
    if stat.arity(model.dim()) != 1 {
        return Err(Error::param(format!("{stat} is not univariate at dimension {}", model.dim())));
    }
    let m = params.univariate_trials();
    let values: Vec<f64> = sample_statistic(model, stat, m, seed)?
        .into_iter()
        .map(|v| v[0])
        .collect();
    let all = UnivariateQuantization::new(values)?;
    if params.reduce {
        reduce_univariate(all.values(), params.epsilon)
    } else {
        Ok(all)
    }
}

/// Keeps `k = ⌈2/ε⌉` values at 1-indexed sorted positions
/// `⌈(i − ½)·|V|/k⌉`, so the output CDF is the input CDF rounded to a
/// multiple of `1/k`. Inputs of size at most `k` are returned unchanged.
pub fn reduce_univariate(values: &[f64], epsilon: f64) -> Result<UnivariateQuantization> {
    check_unit("epsilon", epsilon)?;
    let all = UnivariateQuantization::new(values.to_vec())?;
    let k = reduced_size(epsilon);
    let n = all.len();
    if n <= k {
        return Ok(all);
    }
    let picked = (1..=k)
        .map(|i| {
            let pos = ((2 * i - 1) * n).div_ceil(2 * k);
            all.values[pos - 1]
        })
        .collect();
    UnivariateQuantization::new(picked)
}

pub fn build_kvariate(
    model: &UncertainPointSet,
    stat: &Statistic,
    params: &QuantizationParams,
    seed: u64,
) -> Result<KVariateQuantization> {
    params.validate()?;
    let k = stat.arity(model.dim());
    let m = params.kvariate_trials(k);
    let points = sample_statistic(model, stat, m, seed)?;
    if params.reduce {
        reduce_kvariate(&points, params.epsilon, params.kvariate_constant, derive_seed(seed, 0x5ed0))
    } else {
        KVariateQuantization::new(k, points)
    }
}

/// `⌈(C·k/ε²)·ln(4/ε)⌉`.
pub fn kvariate_reduced_size(c: f64, k: usize, epsilon: f64) -> usize {
    ((c * k as f64 / (epsilon * epsilon)) * (4.0 / epsilon).ln()).ceil() as usize
}

/// Uniform random subsample to [`kvariate_reduced_size`], accepted when its
/// dominance CDF is within ε/2 of the full set on a query grid. Up to three
/// fresh subsamples are tried after the first.
pub fn reduce_kvariate(points: &[Vec<f64>], epsilon: f64, c: f64, seed: u64) -> Result<KVariateQuantization> {
    check_unit("epsilon", epsilon)?;
    let k = points.first().map(Vec::len).ok_or(Error::EmptyPointSet)?;
    let target = kvariate_reduced_size(c, k, epsilon);
    if points.len() <= target {
        return KVariateQuantization::new(k, points.to_vec());
    }
    let queries = verification_queries(points, k, seed);
    let full: Vec<f64> = queries
        .par_iter()
        .map(|q| dominance_fraction(points, q))
        .collect();
    let allowed = epsilon / 2.0;
    let mut best = f64::INFINITY;
    for attempt in 0..=REDUCE_RETRIES {
        let mut rng = SeededRng::new(seed, attempt as u64);
        let chosen: Vec<Vec<f64>> = index::sample(&mut rng, points.len(), target)
            .into_iter()
            .map(|i| points[i].clone())
            .collect();
        let deviation = queries
            .par_iter()
            .zip(&full)
            .map(|(q, f)| (dominance_fraction(&chosen, q) - f).abs())
            .reduce(|| 0.0, f64::max);
        if deviation <= allowed {
            return KVariateQuantization::new(k, chosen);
        }
        best = best.min(deviation);
    }
    Err(Error::VerificationFailed {
        attempts: REDUCE_RETRIES + 1,
        deviation: best,
        allowed,
    })
}

/// A 20^k grid of per-axis quantiles for k ≤ 3, otherwise random queries
/// assembled from coordinates of random input points.
fn verification_queries(points: &[Vec<f64>], k: usize, seed: u64) -> Vec<Vec<f64>> {
    use rand::Rng;
    let axes: Vec<Vec<f64>> = (0..k)
        .map(|a| {
            let mut c: Vec<f64> = points.iter().map(|p| p[a]).collect();
            c.sort_by(f64::total_cmp);
            c
        })
        .collect();
    if k <= 3 {
        let levels: Vec<Vec<f64>> = axes
            .iter()
            .map(|c| {
                (0..VERIFY_GRID_SIDE)
                    .map(|j| c[((2 * j + 1) * c.len()) / (2 * VERIFY_GRID_SIDE)])
                    .collect()
            })
            .collect();
        let mut grid = vec![Vec::with_capacity(k)];
        for lv in &levels {
            grid = grid
                .into_iter()
                .flat_map(|g| {
                    lv.iter().map(move |x| {
                        let mut h = g.clone();
                        h.push(*x);
                        h
                    })
                })
                .collect();
        }
        grid
    } else {
        let mut rng = SeededRng::new(seed, u64::MAX);
        (0..VERIFY_RANDOM_QUERIES)
            .map(|_| (0..k).map(|a| points[rng.gen_range(0..points.len())][a]).collect())
            .collect()
    }
}
