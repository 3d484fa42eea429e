//! Per-point location distributions and joint sampling.
//!
//! An [`UncertainPointSet`] is an ordered list of independent
//! [`PointDistribution`]s sharing one dimension. The joint law of a sampled
//! point set is the product of the marginals.

mod io;

pub use io::{parse_model, serialize_model};

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::geom::{Aabb, ConvexPolygon, Point};

/// Tolerance on discrete weight sums.
pub const WEIGHT_SUM_TOL: f64 = 1e-9;

/// Upper bound on the number of joint outcomes [`enumerate_support`] visits.
pub const MAX_SUPPORT_PRODUCT: f64 = 1e7;

#[derive(Clone, Debug, PartialEq)]
pub enum PointDistribution {
    /// Finitely many locations with positive weights summing to one.
    Discrete(Vec<(Point, f64)>),
    /// Axis-aligned Gaussian; `sigma` holds one standard deviation per axis.
    Gaussian { mean: Point, sigma: Vec<f64> },
    /// Uniform over the ball of the given radius (a disk in the plane).
    UniformDisk { center: Point, radius: f64 },
    /// Uniform over a convex polygon.
    UniformPolygon(ConvexPolygon),
}

impl PointDistribution {
    pub fn point_mass(p: Point) -> Self {
        PointDistribution::Discrete(vec![(p, 1.0)])
    }

    pub fn isotropic_gaussian(mean: Point, sigma: f64) -> Self {
        let d = mean.dim();
        PointDistribution::Gaussian {
            mean,
            sigma: vec![sigma; d],
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            PointDistribution::Discrete(s) => s.first().map_or(0, |(p, _)| p.dim()),
            PointDistribution::Gaussian { mean, .. } => mean.dim(),
            PointDistribution::UniformDisk { center, .. } => center.dim(),
            PointDistribution::UniformPolygon(_) => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            PointDistribution::Discrete(_) => "discrete",
            PointDistribution::Gaussian { .. } => "gaussian",
            PointDistribution::UniformDisk { .. } => "uniform-disk",
            PointDistribution::UniformPolygon(_) => "uniform-polygon",
        }
    }

    pub fn is_bounded(&self) -> bool {
        !matches!(self, PointDistribution::Gaussian { .. })
    }

    /// Checks the invariants of each kind. The returned message does not
    /// carry the point index; callers add it.
    pub fn validate(&self) -> std::result::Result<(), String> {
        match self {
            PointDistribution::Discrete(support) => {
                if support.is_empty() {
                    return Err("discrete support is empty".into());
                }
                let d = support[0].0.dim();
                let mut total = 0.0;
                for (p, w) in support {
                    if p.dim() != d {
                        return Err("support points have mixed dimensions".into());
                    }
                    if !p.is_finite() {
                        return Err("support point is not finite".into());
                    }
                    if !(w.is_finite() && *w > 0.0) {
                        return Err("weights must be positive".into());
                    }
                    total += w;
                }
                if (total - 1.0).abs() > WEIGHT_SUM_TOL {
                    return Err(format!("weights must sum to 1 (got {total})"));
                }
            }
            PointDistribution::Gaussian { mean, sigma } => {
                if !mean.is_finite() {
                    return Err("gaussian mean is not finite".into());
                }
                if sigma.len() != mean.dim() {
                    return Err("sigma must have one entry per axis".into());
                }
                if sigma.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
                    return Err("sigma must be positive".into());
                }
            }
            PointDistribution::UniformDisk { center, radius } => {
                if !center.is_finite() {
                    return Err("disk center is not finite".into());
                }
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err("radius must be positive".into());
                }
            }
            PointDistribution::UniformPolygon(_) => {}
        }
        Ok(())
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        match self {
            PointDistribution::Discrete(support) => {
                let u: f64 = rng.gen();
                let mut acc = 0.0;
                for (p, w) in support {
                    acc += w;
                    if u < acc {
                        return p.clone();
                    }
                }
                support.last().expect("validated nonempty").0.clone()
            }
            PointDistribution::Gaussian { mean, sigma } => Point::new(
                mean.coords()
                    .iter()
                    .zip(sigma)
                    .map(|(m, s)| {
                        let z: f64 = StandardNormal.sample(rng);
                        m + s * z
                    })
                    .collect::<Vec<_>>(),
            ),
            PointDistribution::UniformDisk { center, radius } => {
                let d = center.dim();
                let dir = crate::geom::Direction::random(d, rng);
                let r = radius * rng.gen::<f64>().powf(1.0 / d as f64);
                Point::new(
                    center
                        .coords()
                        .iter()
                        .zip(dir.coords())
                        .map(|(c, u)| c + r * u)
                        .collect::<Vec<_>>(),
                )
            }
            PointDistribution::UniformPolygon(poly) => sample_polygon(poly, rng),
        }
    }

    /// Bounding box of the support; `None` for unbounded distributions.
    pub fn support_bounds(&self) -> Option<Aabb> {
        match self {
            PointDistribution::Discrete(s) => {
                let pts: Vec<Point> = s.iter().map(|(p, _)| p.clone()).collect();
                crate::geom::aabb(&pts).ok()
            }
            PointDistribution::Gaussian { .. } => None,
            PointDistribution::UniformDisk { center, radius } => Some(Aabb {
                lo: Point::new(center.coords().iter().map(|c| c - radius).collect::<Vec<_>>()),
                hi: Point::new(center.coords().iter().map(|c| c + radius).collect::<Vec<_>>()),
            }),
            PointDistribution::UniformPolygon(poly) => Some(poly.bounding_box()),
        }
    }

    /// A box holding most of the mass: the support for bounded kinds and
    /// `mean ± k·sigma` for Gaussians.
    pub fn bulk_bounds(&self, k_sigma: f64) -> Aabb {
        match self {
            PointDistribution::Gaussian { mean, sigma } => Aabb {
                lo: Point::new(
                    mean.coords().iter().zip(sigma).map(|(m, s)| m - k_sigma * s).collect::<Vec<_>>(),
                ),
                hi: Point::new(
                    mean.coords().iter().zip(sigma).map(|(m, s)| m + k_sigma * s).collect::<Vec<_>>(),
                ),
            },
            other => other.support_bounds().expect("bounded"),
        }
    }
}

/// Fan triangulation, area-weighted triangle choice, then a uniform
/// barycentric draw inside the triangle.
fn sample_polygon<R: Rng + ?Sized>(poly: &ConvexPolygon, rng: &mut R) -> Point {
    let fan = poly.fan();
    let total: f64 = fan.iter().map(|t| t.1).sum();
    let mut u = rng.gen::<f64>() * total;
    let mut tri = fan.last().expect("polygon has a triangle").0;
    for (t, a) in &fan {
        if u < *a {
            tri = *t;
            break;
        }
        u -= a;
    }
    let (mut s, mut t): (f64, f64) = (rng.gen(), rng.gen());
    if s + t > 1.0 {
        s = 1.0 - s;
        t = 1.0 - t;
    }
    let [a, b, c] = tri;
    Point::from([
        a[0] + s * (b[0] - a[0]) + t * (c[0] - a[0]),
        a[1] + s * (b[1] - a[1]) + t * (c[1] - a[1]),
    ])
}

/// An ordered list of independent point distributions of one dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct UncertainPointSet {
    dim: usize,
    distributions: Vec<PointDistribution>,
}

impl UncertainPointSet {
    /// Validates every distribution; errors name the offending point index.
    pub fn new(dim: usize, distributions: Vec<PointDistribution>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidModel {
                index: None,
                message: "dimension must be at least 1".into(),
            });
        }
        if distributions.is_empty() {
            return Err(Error::InvalidModel {
                index: None,
                message: "model has no points".into(),
            });
        }
        for (i, dist) in distributions.iter().enumerate() {
            dist.validate().map_err(|m| Error::model(i, m))?;
            if dist.dim() != dim {
                return Err(Error::model(
                    i,
                    format!("dimension mismatch: expected {dim}, found {}", dist.dim()),
                ));
            }
        }
        Ok(Self { dim, distributions })
    }

    /// The model whose every point is a fixed location.
    pub fn point_masses(points: &[Point]) -> Result<Self> {
        let d = crate::geom::common_dim(points)?;
        Self::new(
            d,
            points.iter().cloned().map(PointDistribution::point_mass).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.distributions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distributions.is_empty()
    }

    pub fn distributions(&self) -> &[PointDistribution] {
        &self.distributions
    }

    pub fn all_discrete(&self) -> bool {
        self.distributions
            .iter()
            .all(|d| matches!(d, PointDistribution::Discrete(_)))
    }

    /// Bounding box of every distribution's bulk (see
    /// [`PointDistribution::bulk_bounds`]).
    pub fn bulk_bounds(&self, k_sigma: f64) -> Aabb {
        let boxes: Vec<Aabb> = self.distributions.iter().map(|d| d.bulk_bounds(k_sigma)).collect();
        let corners: Vec<Point> = boxes.into_iter().flat_map(|b| [b.lo, b.hi]).collect();
        crate::geom::aabb(&corners).expect("nonempty model")
    }

    /// SHA-256 of the canonical JSON serialization.
    pub fn fingerprint(&self) -> String {
        use sha2::{Digest, Sha256};
        let digest = Sha256::digest(serialize_model(self).as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

pub fn sample_point<R: Rng + ?Sized>(dist: &PointDistribution, rng: &mut R) -> Point {
    dist.sample(rng)
}

/// One independent draw per distribution, in model order.
pub fn sample_point_set<R: Rng + ?Sized>(model: &UncertainPointSet, rng: &mut R) -> Vec<Point> {
    model.distributions.iter().map(|d| d.sample(rng)).collect()
}

/// Visits every joint outcome of an all-discrete model together with its
/// probability. Fails when a component is not discrete or the product of
/// support sizes exceeds [`MAX_SUPPORT_PRODUCT`].
pub fn for_each_support_outcome(
    model: &UncertainPointSet,
    mut visit: impl FnMut(&[Point], f64),
) -> Result<()> {
    let supports = discrete_supports(model)?;
    let mut choice = vec![0usize; supports.len()];
    let mut current: Vec<Point> = supports.iter().map(|s| s[0].0.clone()).collect();
    loop {
        let prob: f64 = choice.iter().zip(&supports).map(|(&c, s)| s[c].1).product();
        visit(&current, prob);
        // odometer increment
        let mut k = 0;
        loop {
            if k == supports.len() {
                return Ok(());
            }
            choice[k] += 1;
            if choice[k] < supports[k].len() {
                current[k] = supports[k][choice[k]].0.clone();
                break;
            }
            choice[k] = 0;
            current[k] = supports[k][0].0.clone();
            k += 1;
        }
    }
}

/// All joint outcomes of an all-discrete model with their probabilities.
pub fn enumerate_support(model: &UncertainPointSet) -> Result<Vec<(Vec<Point>, f64)>> {
    let mut out = Vec::new();
    for_each_support_outcome(model, |pts, p| out.push((pts.to_vec(), p)))?;
    Ok(out)
}

fn discrete_supports(model: &UncertainPointSet) -> Result<Vec<&[(Point, f64)]>> {
    let mut count = 1.0f64;
    let mut supports = Vec::with_capacity(model.len());
    for (i, d) in model.distributions.iter().enumerate() {
        match d {
            PointDistribution::Discrete(s) => {
                count *= s.len() as f64;
                supports.push(s.as_slice());
            }
            other => {
                return Err(Error::model(
                    i,
                    format!("support enumeration needs discrete components, found {}", other.kind()),
                ))
            }
        }
    }
    if count > MAX_SUPPORT_PRODUCT {
        return Err(Error::TooLarge {
            what: "support enumeration",
            count,
            limit: MAX_SUPPORT_PRODUCT,
        });
    }
    Ok(supports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;

    fn two_point(a: Point, b: Point) -> PointDistribution {
        PointDistribution::Discrete(vec![(a, 0.5), (b, 0.5)])
    }

    #[test]
    fn point_mass_always_returns_its_point() {
        let p = Point::from([1.5, -2.0]);
        let dist = PointDistribution::point_mass(p.clone());
        let mut rng = SeededRng::new(1, 0);
        for _ in 0..100 {
            assert_eq!(sample_point(&dist, &mut rng), p);
        }
    }

    #[test]
    fn discrete_frequencies() {
        let a = Point::from([0.0, 0.0]);
        let dist = two_point(a.clone(), Point::from([1.0, 1.0]));
        let mut rng = SeededRng::new(2, 0);
        let hits = (0..10_000).filter(|_| dist.sample(&mut rng) == a).count();
        let f = hits as f64 / 10_000.0;
        assert!((f - 0.5).abs() <= 0.015, "frequency {f}");
    }

    #[test]
    fn gaussian_mean() {
        let mu = Point::from([3.0, -1.0, 0.5]);
        let dist = PointDistribution::isotropic_gaussian(mu.clone(), 1.0);
        let mut rng = SeededRng::new(3, 0);
        let mut acc = [0.0; 3];
        for _ in 0..10_000 {
            let p = dist.sample(&mut rng);
            for i in 0..3 {
                acc[i] += p[i] / 10_000.0;
            }
        }
        for i in 0..3 {
            assert!((acc[i] - mu[i]).abs() < 0.05, "axis {i}: {}", acc[i]);
        }
    }

    #[test]
    fn disk_samples_stay_inside() {
        let dist = PointDistribution::UniformDisk {
            center: Point::from([1.0, 1.0]),
            radius: 2.0,
        };
        let mut rng = SeededRng::new(4, 0);
        let mut inner = 0;
        for _ in 0..10_000 {
            let p = dist.sample(&mut rng);
            let r = p.dist(&Point::from([1.0, 1.0]));
            assert!(r <= 2.0);
            if r <= 1.0 {
                inner += 1;
            }
        }
        // inner disk holds a quarter of the area; 3 sigma of Binomial(10^4, 1/4)
        let f = inner as f64 / 10_000.0;
        assert!((f - 0.25).abs() <= 3.0 * (0.25f64 * 0.75 / 10_000.0).sqrt(), "{f}");
    }

    #[test]
    fn polygon_subregion_frequency_matches_area() {
        let tri = ConvexPolygon::new(vec![
            Point::from([0.0, 0.0]),
            Point::from([2.0, 0.0]),
            Point::from([2.0, 1.0]),
            Point::from([0.0, 2.0]),
        ])
        .unwrap();
        let area = tri.area();
        let dist = PointDistribution::UniformPolygon(tri);
        let mut rng = SeededRng::new(5, 0);
        let n = 20_000;
        let hits = (0..n)
            .filter(|_| {
                let p = dist.sample(&mut rng);
                p[0] <= 1.0 && p[1] <= 1.0
            })
            .count();
        let expect = 1.0 / area;
        let f = hits as f64 / n as f64;
        let sd = (expect * (1.0 - expect) / n as f64).sqrt();
        assert!((f - expect).abs() <= 3.0 * sd, "{f} vs {expect}");
    }

    #[test]
    fn point_set_of_point_masses_is_fixed() {
        let pts = vec![Point::from([0.0, 1.0]), Point::from([2.0, 3.0])];
        let model = UncertainPointSet::point_masses(&pts).unwrap();
        let mut rng = SeededRng::new(6, 0);
        for _ in 0..10 {
            assert_eq!(sample_point_set(&model, &mut rng), pts);
        }
    }

    #[test]
    fn joint_outcomes_are_product_measure() {
        let (a, b) = (Point::from([0.0, 0.0]), Point::from([1.0, 0.0]));
        let (c, d) = (Point::from([0.0, 5.0]), Point::from([1.0, 5.0]));
        let model = UncertainPointSet::new(2, vec![two_point(a.clone(), b), two_point(c.clone(), d)]).unwrap();
        let mut rng = SeededRng::new(7, 0);
        let mut counts = [0usize; 4];
        let n = 10_000;
        for _ in 0..n {
            let s = sample_point_set(&model, &mut rng);
            let k = usize::from(s[0] != a) * 2 + usize::from(s[1] != c);
            counts[k] += 1;
        }
        for c in counts {
            assert!((c as f64 / n as f64 - 0.25).abs() <= 0.02, "{counts:?}");
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let model = UncertainPointSet::new(
            2,
            vec![
                PointDistribution::isotropic_gaussian(Point::from([0.0, 0.0]), 1.0),
                PointDistribution::UniformDisk {
                    center: Point::from([3.0, 0.0]),
                    radius: 1.0,
                },
            ],
        )
        .unwrap();
        let a = sample_point_set(&model, &mut SeededRng::new(42, 9));
        let b = sample_point_set(&model, &mut SeededRng::new(42, 9));
        assert_eq!(a, b);
    }

    #[test]
    fn enumeration() {
        let a = Point::from([0.0]);
        let b = Point::from([1.0]);
        let m = UncertainPointSet::new(1, vec![PointDistribution::Discrete(vec![(a.clone(), 0.3), (b.clone(), 0.7)])])
            .unwrap();
        let out = enumerate_support(&m).unwrap();
        assert_eq!(out, vec![(vec![a.clone()], 0.3), (vec![b.clone()], 0.7)]);

        let three = PointDistribution::Discrete(vec![
            (Point::from([0.0]), 0.2),
            (Point::from([2.0]), 0.3),
            (Point::from([4.0]), 0.5),
        ]);
        let m = UncertainPointSet::new(1, vec![two_point(a, b), three]).unwrap();
        let out = enumerate_support(&m).unwrap();
        assert_eq!(out.len(), 6);
        let total: f64 = out.iter().map(|o| o.1).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn enumeration_rejects_continuous_and_huge() {
        let g = UncertainPointSet::new(1, vec![PointDistribution::isotropic_gaussian(Point::from([0.0]), 1.0)]).unwrap();
        assert!(enumerate_support(&g).is_err());
        let support: Vec<(Point, f64)> = (0..100).map(|i| (Point::from([i as f64]), 0.01)).collect();
        let big = UncertainPointSet::new(1, vec![PointDistribution::Discrete(support); 4]).unwrap();
        assert!(matches!(enumerate_support(&big), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn validation_names_point_index() {
        let bad = PointDistribution::Discrete(vec![(Point::from([0.0, 0.0]), 0.9)]);
        let ok = PointDistribution::point_mass(Point::from([0.0, 0.0]));
        let err = UncertainPointSet::new(2, vec![ok, bad]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("point 1") && msg.contains("weights must sum to 1"), "{msg}");
    }
}
