//! Per-point finite sample sets and their general-position checks.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::lattice::{lattice_eps_sample, lattice_target, BallRegion};
use crate::error::{Error, Result};
use crate::geom::{ball_through, coord_scale, Point};
use crate::model::{PointDistribution, UncertainPointSet};
use crate::rng::SeededRng;
use crate::statistic::Statistic;

/// Relative size of the general-position perturbation.
pub const PERTURBATION: f64 = 1e-7;
/// Relative tolerance under which two coordinates count as equal.
pub const COORDINATE_TOL: f64 = 1e-12;
/// Relative tolerance under which four points count as concyclic.
pub const CONCYCLIC_TOL: f64 = 1e-9;
const EXHAUSTIVE_QUADRUPLE_LIMIT: usize = 200;
const RANDOM_QUADRUPLES: usize = 1_000_000;
const MAX_REPORTED: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleSource {
    Lattice,
    Discrete,
    Mixed,
    User,
}

/// `n` finite point sets with a probability weight per point.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleFamily {
    sets: Vec<Vec<Point>>,
    weights: Vec<Vec<f64>>,
    uniform: bool,
    source: SampleSource,
}

impl SampleFamily {
    /// Uniformly weighted sets.
    pub fn new(sets: Vec<Vec<Point>>, source: SampleSource) -> Result<Self> {
        let weights = sets
            .iter()
            .map(|s| vec![1.0 / s.len().max(1) as f64; s.len()])
            .collect();
        let mut f = Self::with_weights(sets, weights, source)?;
        f.uniform = true;
        Ok(f)
    }

    /// Sets with explicit per-point weights summing to one in each set.
    pub fn with_weights(sets: Vec<Vec<Point>>, weights: Vec<Vec<f64>>, source: SampleSource) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        if weights.len() != sets.len() {
            return Err(Error::param("one weight list per set is required"));
        }
        let d = sets[0].first().map(Point::dim).unwrap_or(0);
        for (i, (s, w)) in sets.iter().zip(&weights).enumerate() {
            if s.is_empty() {
                return Err(Error::model(i, "sample set is empty"));
            }
            if w.len() != s.len() {
                return Err(Error::model(i, "weight count differs from point count"));
            }
            if s.iter().any(|p| p.dim() != d || !p.is_finite()) {
                return Err(Error::model(i, format!("points must be finite with dimension {d}")));
            }
            if w.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
                return Err(Error::model(i, "weights must be positive"));
            }
            let total: f64 = w.iter().sum();
            if (total - 1.0).abs() > crate::model::WEIGHT_SUM_TOL {
                return Err(Error::model(i, format!("weights must sum to 1 (got {total})")));
            }
        }
        let uniform = weights
            .iter()
            .all(|w| w.iter().all(|x| (x - w[0]).abs() <= 1e-15));
        Ok(Self {
            sets,
            weights,
            uniform,
            source,
        })
    }

    pub fn sets(&self) -> &[Vec<Point>] {
        &self.sets
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    /// True when every set weighs its points equally.
    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    pub fn source(&self) -> SampleSource {
        self.source
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.sets[0][0].dim()
    }

    pub fn total_points(&self) -> usize {
        self.sets.iter().map(Vec::len).sum()
    }

    fn all_points(&self) -> Vec<Point> {
        self.sets.iter().flatten().cloned().collect()
    }

    pub fn to_json(&self) -> String {
        let doc = FamilyDoc {
            source: self.source,
            sets: self
                .sets
                .iter()
                .map(|s| s.iter().map(|p| p.coords().to_vec()).collect())
                .collect(),
            weights: (!self.uniform).then(|| self.weights.clone()),
        };
        serde_json::to_string(&doc).expect("families always serialize")
    }

    /// Reads `{"source": .., "sets": [[[x, y], ..], ..], "weights": ..}` or a
    /// bare list of point lists.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: FamilyDocIn = serde_json::from_str(text)?;
        let (source, sets, weights) = match doc {
            FamilyDocIn::Bare(sets) => (SampleSource::User, sets, None),
            FamilyDocIn::Full(FamilyDoc { source, sets, weights }) => (source, sets, weights),
        };
        let sets: Vec<Vec<Point>> = sets
            .into_iter()
            .map(|s| s.into_iter().map(Point::new).collect())
            .collect();
        match weights {
            Some(w) => Self::with_weights(sets, w, source),
            None => Self::new(sets, source),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyDoc {
    source: SampleSource,
    sets: Vec<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<Vec<f64>>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FamilyDocIn {
    Bare(Vec<Vec<Vec<f64>>>),
    Full(FamilyDoc),
}

/// Position of a point in a family: (set index, index within the set).
pub type PointRef = (usize, usize);

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub points: Vec<PointRef>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let refs: Vec<String> = self.points.iter().map(|(s, i)| format!("set {s} point {i}")).collect();
        write!(f, "{}: {}", self.message, refs.join(", "))
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct GeneralPositionReport {
    pub violations: Vec<Violation>,
    /// True when more violations existed than were recorded.
    pub truncated: bool,
}

impl GeneralPositionReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        match self.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::GeneralPosition(v.to_string())),
        }
    }

    fn push(&mut self, v: Violation) {
        if self.violations.len() < MAX_REPORTED {
            self.violations.push(v);
        } else {
            self.truncated = true;
        }
    }
}

/// Box statistics need all coordinates distinct across the union; ball
/// statistics need no four points from distinct sets on a common circle.
pub fn validate_general_position(family: &SampleFamily, stat: &Statistic) -> GeneralPositionReport {
    let mut report = GeneralPositionReport::default();
    match stat {
        Statistic::AabbPerimeter | Statistic::AabbVolume | Statistic::AabbWidths => distinct_coordinates(family, &mut report),
        Statistic::Seb2Radius => no_concyclic_quadruples(family, &mut report),
        _ => {}
    }
    report
}

fn distinct_coordinates(family: &SampleFamily, report: &mut GeneralPositionReport) {
    let tol = COORDINATE_TOL * coord_scale(&family.all_points());
    let refs: Vec<PointRef> = family
        .sets
        .iter()
        .enumerate()
        .flat_map(|(s, set)| (0..set.len()).map(move |i| (s, i)))
        .collect();
    for axis in 0..family.dim() {
        let mut vals: Vec<(f64, PointRef)> = refs.iter().map(|&(s, i)| (family.sets[s][i][axis], (s, i))).collect();
        vals.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for w in vals.windows(2) {
            if w[1].0 - w[0].0 <= tol {
                report.push(Violation {
                    points: vec![w[0].1, w[1].1],
                    message: format!("shared coordinate {} on axis {axis}", w[0].0),
                });
            }
        }
    }
}

fn concyclic(pts: [&Point; 4]) -> bool {
    for skip in 0..4 {
        let three: Vec<&Point> = (0..4).filter(|&k| k != skip).map(|k| pts[k]).collect();
        if let Some(ball) = ball_through(&three) {
            let dev = (pts[skip].dist(&ball.center) - ball.radius).abs();
            return dev <= CONCYCLIC_TOL * ball.radius.max(f64::MIN_POSITIVE);
        }
    }
    false
}

fn no_concyclic_quadruples(family: &SampleFamily, report: &mut GeneralPositionReport) {
    if family.dim() != 2 || family.len() < 4 {
        return;
    }
    let refs: Vec<PointRef> = family
        .sets
        .iter()
        .enumerate()
        .flat_map(|(s, set)| (0..set.len()).map(move |i| (s, i)))
        .collect();
    let at = |r: PointRef| &family.sets[r.0][r.1];
    let check = |q: [PointRef; 4], report: &mut GeneralPositionReport| {
        let mut sets = q.map(|r| r.0);
        sets.sort_unstable();
        if sets.windows(2).any(|w| w[0] == w[1]) {
            return;
        }
        if concyclic(q.map(at)) {
            report.push(Violation {
                points: q.to_vec(),
                message: "four points on a common circle".into(),
            });
        }
    };
    let n = refs.len();
    if n <= EXHAUSTIVE_QUADRUPLE_LIMIT {
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for d in c + 1..n {
                        check([refs[a], refs[b], refs[c], refs[d]], report);
                    }
                }
            }
        }
    } else {
        let mut rng = SeededRng::new(0xC0C1C1E, n as u64);
        for _ in 0..RANDOM_QUADRUPLES {
            let idx = rand::seq::index::sample(&mut rng, n, 4);
            check([refs[idx.index(0)], refs[idx.index(1)], refs[idx.index(2)], refs[idx.index(3)]], report);
        }
    }
}

/// Shifts every coordinate by at most `PERTURBATION · scale / 2`, with the
/// offset of point `g` (global index) on axis `a` taken from a Weyl
/// sequence so that offsets are pairwise distinct.
pub fn perturb(family: &SampleFamily) -> SampleFamily {
    const STEPS: [f64; 4] = [0.618_033_988_749_894_9, 0.414_213_562_373_095_1, 0.732_050_807_568_877_2, 0.236_067_977_499_789_7];
    let scale = coord_scale(&family.all_points());
    let mut g = 0u64;
    let sets = family
        .sets
        .iter()
        .map(|set| {
            set.iter()
                .map(|p| {
                    g += 1;
                    Point::new(
                        p.coords()
                            .iter()
                            .enumerate()
                            .map(|(a, c)| {
                                let step = STEPS[a % STEPS.len()] + (a / STEPS.len()) as f64 * 0.1;
                                let u = (g as f64 * step).fract() - 0.5;
                                c + u * PERTURBATION * scale
                            })
                            .collect::<Vec<_>>(),
                    )
                })
                .collect()
        })
        .collect();
    SampleFamily {
        sets,
        weights: family.weights.clone(),
        uniform: family.uniform,
        source: family.source,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AfnOptions {
    /// Gaussian components are cut to `mean ± k·sigma` and replaced by a
    /// per-axis quantile grid of the truncated law. Required when the model
    /// has Gaussian components.
    pub truncate_sigma: Option<f64>,
    /// Seeds the lattice shifts.
    pub seed: u64,
}

impl Default for AfnOptions {
    fn default() -> Self {
        Self {
            truncate_sigma: None,
            seed: 0,
        }
    }
}

/// Quantile grid of an axis-aligned Gaussian truncated to `mean ± k·sigma`,
/// `per_axis` points per axis.
fn truncated_gaussian_grid(mean: &Point, sigma: &[f64], k: f64, per_axis: usize) -> Vec<Point> {
    let normal = Normal::standard();
    let lo = normal.cdf(-k);
    let span = normal.cdf(k) - lo;
    let axis_values: Vec<Vec<f64>> = mean
        .coords()
        .iter()
        .zip(sigma)
        .map(|(m, s)| {
            (0..per_axis)
                .map(|j| m + s * normal.inverse_cdf(lo + span * (j as f64 + 0.5) / per_axis as f64))
                .collect()
        })
        .collect();
    let mut grid: Vec<Vec<f64>> = vec![Vec::new()];
    for values in &axis_values {
        grid = grid
            .into_iter()
            .flat_map(|g| {
                values.iter().map(move |v| {
                    let mut h = g.clone();
                    h.push(*v);
                    h
                })
            })
            .collect();
    }
    grid.into_iter().map(Point::new).collect()
}

/// Per-point (ε/n)-samples for the deterministic construction, perturbed
/// into general position.
///
/// Discrete components contribute their support (with its weights);
/// uniform polygons and disks a shifted lattice with VC tag `2d`; Gaussians
/// a quantile grid of the truncated law when `truncate_sigma` is set. Ball
/// statistics are accepted only for all-discrete models.
pub fn build_afn_samples(model: &UncertainPointSet, stat: &Statistic, epsilon: f64, options: &AfnOptions) -> Result<SampleFamily> {
    crate::quantization::check_unit("epsilon", epsilon)?;
    match stat {
        Statistic::AabbPerimeter | Statistic::AabbVolume | Statistic::AabbWidths => {}
        Statistic::Seb2Radius if model.all_discrete() => {}
        Statistic::Seb2Radius => {
            return Err(Error::param("seb2-radius samples require an all-discrete model"));
        }
        other => return Err(Error::param(format!("no sample construction for {other}"))),
    }
    stat.check_dim(model.dim())?;
    let n = model.len();
    let d = model.dim();
    let eps_i = epsilon / n as f64;
    let vc = 2 * d;
    let mut sets = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut kinds = (false, false);
    for (i, dist) in model.distributions().iter().enumerate() {
        let mut rng = SeededRng::new(options.seed, i as u64);
        let (set, w) = match dist {
            PointDistribution::Discrete(support) => {
                kinds.0 = true;
                support.iter().cloned().unzip()
            }
            PointDistribution::UniformPolygon(poly) => {
                kinds.1 = true;
                uniform(lattice_eps_sample(poly, eps_i, vc, &mut rng)?)
            }
            PointDistribution::UniformDisk { center, radius } => {
                kinds.1 = true;
                let region = BallRegion {
                    center: center.clone(),
                    radius: *radius,
                };
                uniform(lattice_eps_sample(&region, eps_i, vc, &mut rng)?)
            }
            PointDistribution::Gaussian { mean, sigma } => {
                let Some(k) = options.truncate_sigma else {
                    return Err(Error::model(i, "gaussian component is unbounded: truncate first"));
                };
                if !(k.is_finite() && k > 0.0) {
                    return Err(Error::param("truncation must be a positive multiple of sigma"));
                }
                kinds.1 = true;
                let per_axis = lattice_target(eps_i, vc).max(1.0).powf(1.0 / d as f64).ceil() as usize;
                // touch the rng so every component advances identically
                let _: f64 = rng.gen();
                uniform(truncated_gaussian_grid(mean, sigma, k, per_axis))
            }
        };
        sets.push(set);
        weights.push(w);
    }
    let source = match kinds {
        (true, false) => SampleSource::Discrete,
        (false, true) => SampleSource::Lattice,
        _ => SampleSource::Mixed,
    };
    let family = perturb(&SampleFamily::with_weights(sets, weights, source)?);
    validate_general_position(&family, stat).into_result()?;
    Ok(family)
}

fn uniform(points: Vec<Point>) -> (Vec<Point>, Vec<f64>) {
    let w = 1.0 / points.len() as f64;
    let n = points.len();
    (points, vec![w; n])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::ConvexPolygon;

    #[test]
    fn shared_point_is_reported_with_both_indices() {
        let f = SampleFamily::new(
            vec![
                vec![Point::from([0.0, 0.0]), Point::from([1.0, 2.0])],
                vec![Point::from([3.0, 5.0]), Point::from([0.0, 0.0])],
            ],
            SampleSource::User,
        )
        .unwrap();
        let report = validate_general_position(&f, &Statistic::AabbVolume);
        assert!(!report.is_ok());
        assert!(report.violations.iter().any(|v| v.points == vec![(0, 0), (1, 1)]));
        assert!(validate_general_position(&perturb(&f), &Statistic::AabbVolume).is_ok());
    }

    #[test]
    fn single_point_is_fine() {
        let f = SampleFamily::new(vec![vec![Point::from([1.0, 1.0])]], SampleSource::User).unwrap();
        assert!(validate_general_position(&f, &Statistic::AabbVolume).is_ok());
        assert!(validate_general_position(&f, &Statistic::Seb2Radius).is_ok());
    }

    #[test]
    fn concyclic_quadruple_detected() {
        let ring = |t: f64| Point::from([t.cos(), t.sin()]);
        let f = SampleFamily::new(vec![vec![ring(0.1)], vec![ring(1.3)], vec![ring(2.9)], vec![ring(4.4)]], SampleSource::User)
            .unwrap();
        let report = validate_general_position(&f, &Statistic::Seb2Radius);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].points.len(), 4);
        assert!(validate_general_position(&perturb(&f), &Statistic::Seb2Radius).is_ok());
    }

    #[test]
    fn perturbation_is_small() {
        let f = SampleFamily::new(vec![vec![Point::from([10.0, -4.0]); 3]], SampleSource::User).unwrap();
        let g = perturb(&f);
        for p in &g.sets()[0] {
            assert!(p.dist(&Point::from([10.0, -4.0])) <= PERTURBATION * 10.0);
        }
        assert!(validate_general_position(&g, &Statistic::AabbPerimeter).is_ok());
    }

    #[test]
    fn afn_samples_for_discrete_and_lattice_models() {
        let discrete = UncertainPointSet::new(
            2,
            vec![
                PointDistribution::Discrete(vec![(Point::from([0.0, 0.0]), 0.5), (Point::from([1.0, 1.0]), 0.5)]),
                PointDistribution::Discrete(vec![(Point::from([0.0, 0.0]), 1.0)]),
            ],
        )
        .unwrap();
        let f = build_afn_samples(&discrete, &Statistic::AabbVolume, 0.2, &AfnOptions::default()).unwrap();
        assert_eq!(f.source(), SampleSource::Discrete);
        assert_eq!(f.sets()[0].len(), 2);
        assert!(f.sets()[0][1].dist(&Point::from([1.0, 1.0])) < 1e-6);

        let square = ConvexPolygon::rectangle([0.0, 0.0], [1.0, 1.0]).unwrap();
        let model = UncertainPointSet::new(2, vec![PointDistribution::UniformPolygon(square); 3]).unwrap();
        let f = build_afn_samples(&model, &Statistic::AabbPerimeter, 0.3, &AfnOptions::default()).unwrap();
        let t = lattice_target(0.1, 4);
        for s in f.sets() {
            assert!(s.len() as f64 >= t && s.len() as f64 <= 4.0 * t);
        }
        assert!(validate_general_position(&f, &Statistic::AabbPerimeter).is_ok());
    }

    #[test]
    fn gaussians_need_truncation() {
        let model = UncertainPointSet::new(2, vec![PointDistribution::isotropic_gaussian(Point::from([0.0, 0.0]), 1.0)]).unwrap();
        let err = build_afn_samples(&model, &Statistic::AabbVolume, 0.3, &AfnOptions::default()).unwrap_err();
        assert!(err.to_string().contains("truncate first"));
        let opts = AfnOptions {
            truncate_sigma: Some(3.0),
            seed: 0,
        };
        let f = build_afn_samples(&model, &Statistic::AabbVolume, 0.3, &opts).unwrap();
        assert!(f.sets()[0].iter().all(|p| p[0].abs() <= 3.0 && p[1].abs() <= 3.0));
    }

    #[test]
    fn seb2_samples_need_discrete_models() {
        let square = ConvexPolygon::rectangle([0.0, 0.0], [1.0, 1.0]).unwrap();
        let model = UncertainPointSet::new(2, vec![PointDistribution::UniformPolygon(square)]).unwrap();
        assert!(build_afn_samples(&model, &Statistic::Seb2Radius, 0.3, &AfnOptions::default()).is_err());
        assert!(build_afn_samples(&model, &Statistic::Diameter, 0.3, &AfnOptions::default()).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = SampleFamily::with_weights(
            vec![vec![Point::from([0.5, 1.0]), Point::from([2.0, 3.0])], vec![Point::from([1.0, 1.0])]],
            vec![vec![0.25, 0.75], vec![1.0]],
            SampleSource::Discrete,
        )
        .unwrap();
        assert_eq!(SampleFamily::from_json(&f.to_json()).unwrap(), f);
        let bare = SampleFamily::from_json("[[[0,0],[1,1]],[[2,2]]]").unwrap();
        assert!(bare.is_uniform());
        assert_eq!(bare.source(), SampleSource::User);
        assert!(SampleFamily::from_json("[[]]").is_err());
    }
}
