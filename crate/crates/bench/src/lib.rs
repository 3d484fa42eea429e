//! Seeded fixtures shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand::rngs::StdRng;
use uncertain_extent::deterministic::{SampleFamily, SampleSource};
use uncertain_extent::{Point, PointDistribution, UncertainPointSet};

/// `n` isotropic Gaussians in the plane with means in `[0, 10]²`.
pub fn gaussian_model(n: usize, sigma: f64, seed: u64) -> UncertainPointSet {
    let mut rng = StdRng::seed_from_u64(seed);
    let dists = (0..n)
        .map(|_| {
            let mean = Point::from([rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)]);
            PointDistribution::isotropic_gaussian(mean, sigma)
        })
        .collect();
    UncertainPointSet::new(2, dists).expect("valid model")
}

/// `n` uniform discrete distributions with `k` support points each.
pub fn discrete_model(n: usize, k: usize, seed: u64) -> UncertainPointSet {
    let mut rng = StdRng::seed_from_u64(seed);
    let dists = (0..n)
        .map(|_| {
            let cx = rng.gen_range(0.0..10.0);
            let cy = rng.gen_range(0.0..10.0);
            let support = (0..k)
                .map(|_| {
                    let p = Point::from([cx + rng.gen_range(-1.0..1.0), cy + rng.gen_range(-1.0..1.0)]);
                    (p, 1.0 / k as f64)
                })
                .collect();
            PointDistribution::Discrete(support)
        })
        .collect();
    UncertainPointSet::new(2, dists).expect("valid model")
}

/// Random point cloud in the unit cube of dimension `d`.
pub fn cloud(n: usize, d: usize, seed: u64) -> Vec<Point> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..n)
        .map(|_| Point::new((0..d).map(|_| rng.gen::<f64>()).collect::<Vec<_>>()))
        .collect()
}

/// `n` planar sets of `k` random points.
pub fn family(n: usize, k: usize, seed: u64) -> SampleFamily {
    let mut rng = StdRng::seed_from_u64(seed);
    let sets = (0..n)
        .map(|_| {
            (0..k)
                .map(|_| Point::from([rng.gen::<f64>(), rng.gen::<f64>()]))
                .collect()
        })
        .collect();
    SampleFamily::new(sets, SampleSource::User).expect("valid family")
}
