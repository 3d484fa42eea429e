//! Exact distribution of a statistic over all combinations of one point per
//! set.

use rayon::prelude::*;

use super::cdf::{WeightedCdf, WeightedKCdf};
use super::family::SampleFamily;
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::statistic::Statistic;

/// Largest number of combinations the oracle enumerates.
pub const MAX_COMBINATIONS: f64 = 1e7;

fn combinations(family: &SampleFamily) -> Result<usize> {
    let count: f64 = family.sets().iter().map(|s| s.len() as f64).product();
    if count > MAX_COMBINATIONS {
        return Err(Error::TooLarge {
            what: "brute-force enumeration",
            count,
            limit: MAX_COMBINATIONS,
        });
    }
    Ok(count as usize)
}

/// Evaluates `stat` on every combination. For uniformly weighted families
/// masses are integer counts divided once by the number of combinations.
fn enumerate<T: Send>(family: &SampleFamily, eval: impl Fn(&[Point]) -> Result<T> + Sync) -> Result<Vec<(T, f64)>> {
    let total = combinations(family)?;
    let sets = family.sets();
    let weights = family.weights();
    let uniform = family.is_uniform();
    (0..total)
        .into_par_iter()
        .map(|mut lin| {
            let mut pts = Vec::with_capacity(sets.len());
            let mut w = 1.0;
            for (s, ws) in sets.iter().zip(weights) {
                let i = lin % s.len();
                lin /= s.len();
                pts.push(s[i].clone());
                w *= ws[i];
            }
            let mass = if uniform { 1.0 / total as f64 } else { w };
            Ok((eval(&pts)?, mass))
        })
        .collect()
}

/// For a uniformly weighted family: each distinct value with the number of
/// combinations attaining it, and the total number of combinations. The
/// mass of a value is exactly `count / total`.
pub fn brute_force_counts(family: &SampleFamily, stat: &Statistic) -> Result<(Vec<(f64, u64)>, u64)> {
    if !family.is_uniform() {
        return Err(Error::param("integer counts need a uniformly weighted family"));
    }
    stat.check_dim(family.dim())?;
    let total = combinations(family)?;
    let mut vals: Vec<f64> = enumerate(family, |pts| stat.evaluate_scalar(pts))?
        .into_iter()
        .map(|v| v.0)
        .collect();
    vals.sort_by(f64::total_cmp);
    let mut counted: Vec<(f64, u64)> = Vec::new();
    for v in vals {
        match counted.last_mut() {
            Some(last) if super::cdf::close(last.0, v) => last.1 += 1,
            _ => counted.push((v, 1)),
        }
    }
    Ok((counted, total as u64))
}

/// The exact weighted CDF of a univariate statistic on the family.
pub fn brute_force_cdf(family: &SampleFamily, stat: &Statistic) -> Result<WeightedCdf> {
    if family.is_uniform() {
        let (counted, total) = brute_force_counts(family, stat)?;
        WeightedCdf::new(counted.into_iter().map(|(v, c)| (v, c as f64 / total as f64)).collect())
    } else {
        stat.check_dim(family.dim())?;
        WeightedCdf::new(enumerate(family, |pts| stat.evaluate_scalar(pts))?)
    }
}

/// The exact weighted distribution of a vector statistic.
pub fn brute_force_kcdf(family: &SampleFamily, stat: &Statistic) -> Result<WeightedKCdf> {
    stat.check_dim(family.dim())?;
    let values = enumerate(family, |pts| stat.evaluate(pts))?;
    WeightedKCdf::new(stat.arity(family.dim()), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deterministic::family::SampleSource;

    #[test]
    fn singletons_give_one_tuple() {
        let f = SampleFamily::new(
            vec![vec![Point::from([0.0, 0.0])], vec![Point::from([3.0, 4.0])]],
            SampleSource::User,
        )
        .unwrap();
        let w = brute_force_cdf(&f, &Statistic::Diameter).unwrap();
        assert_eq!(w.tuples(), &[(5.0, 1.0)]);
    }

    #[test]
    fn sizes_two_and_three() {
        let f = SampleFamily::new(
            vec![
                vec![Point::from([0.0]), Point::from([10.0])],
                vec![Point::from([1.0]), Point::from([2.0]), Point::from([3.0])],
            ],
            SampleSource::User,
        )
        .unwrap();
        let w = brute_force_cdf(&f, &Statistic::Diameter).unwrap();
        assert_eq!(w.len(), 6);
        assert!(w.tuples().iter().all(|t| t.1 == 1.0 / 6.0));
        assert!((w.total_mass() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn weighted_sets() {
        let f = SampleFamily::with_weights(
            vec![vec![Point::from([0.0]), Point::from([1.0])], vec![Point::from([0.0])]],
            vec![vec![0.2, 0.8], vec![1.0]],
            SampleSource::User,
        )
        .unwrap();
        let w = brute_force_cdf(&f, &Statistic::Diameter).unwrap();
        assert_eq!(w.tuples(), &[(0.0, 0.2), (1.0, 0.8)]);
    }

    #[test]
    fn refuses_huge_products() {
        let set: Vec<Point> = (0..1000).map(|i| Point::from([i as f64])).collect();
        let f = SampleFamily::new(vec![set; 3], SampleSource::User).unwrap();
        assert!(matches!(brute_force_cdf(&f, &Statistic::Diameter), Err(Error::TooLarge { .. })));
    }
}
