//! Valid-basis enumeration over a sample family.
//!
//! A combination of one point per set is summarized by a basis: the minimal
//! subset with the same optimal shape. Enumerating candidate bases (points
//! from distinct sets) and weighting each by the probability that the
//! remaining sets fall inside its shape yields the exact distribution of the
//! statistic without visiting every combination.

use rayon::prelude::*;

use super::cdf::{WeightedCdf, WeightedKCdf};
use super::family::{validate_general_position, PointRef, SampleFamily};
use crate::error::{Error, Result};
use crate::geom::{aabb, small_seb, Aabb, Ball, Point};
use crate::statistic::Statistic;

/// Largest number of candidate bases enumerated.
pub const MAX_CANDIDATE_BASES: f64 = 1e8;

/// Size of the largest basis: `2d` for boxes, `d + 1` for balls.
pub fn basis_size(stat: &Statistic, dim: usize) -> Option<usize> {
    match stat {
        Statistic::AabbPerimeter | Statistic::AabbVolume | Statistic::AabbWidths => Some(2 * dim),
        Statistic::Seb2Radius => Some(dim + 1),
        _ => None,
    }
}

/// Number of subsets of at most `k` points taken from distinct sets.
fn candidate_count(family: &SampleFamily, k: usize) -> f64 {
    let mut by_size = vec![0.0f64; k + 1];
    by_size[0] = 1.0;
    for s in family.sets() {
        for j in (1..=k).rev() {
            by_size[j] += by_size[j - 1] * s.len() as f64;
        }
    }
    by_size[1..].iter().sum()
}

enum Summary {
    Box(Aabb),
    Ball(Ball),
}

impl Summary {
    fn holds(&self, p: &Point) -> bool {
        match self {
            // strict for boxes: a boundary point would be an extreme itself
            Summary::Box(b) => b.contains_strictly(p),
            Summary::Ball(b) => b.contains(p),
        }
    }
}

/// The shape of a candidate basis if it is valid (every point is needed).
fn valid_summary(points: &[&Point], boxes: bool) -> Option<Summary> {
    if boxes {
        let owned: Vec<Point> = points.iter().map(|p| (*p).clone()).collect();
        let bbox = aabb(&owned).ok()?;
        let d = bbox.dim();
        let mut needed = vec![false; points.len()];
        for a in 0..d {
            let lo = (0..points.len()).min_by(|&i, &j| points[i][a].total_cmp(&points[j][a]))?;
            let hi = (0..points.len()).max_by(|&i, &j| points[i][a].total_cmp(&points[j][a]))?;
            needed[lo] = true;
            needed[hi] = true;
        }
        needed.iter().all(|x| *x).then_some(Summary::Box(bbox))
    } else {
        let ball = small_seb(points);
        if points.len() > 1 {
            for skip in 0..points.len() {
                let rest: Vec<&Point> = (0..points.len()).filter(|&i| i != skip).map(|i| points[i]).collect();
                if small_seb(&rest).contains(points[skip]) {
                    return None;
                }
            }
        }
        Some(Summary::Ball(ball))
    }
}

/// Visits candidate bases whose first point is `first`, extending with
/// points from later sets, up to `k` points.
fn extend(
    family: &SampleFamily,
    k: usize,
    chosen: &mut Vec<PointRef>,
    next_set: usize,
    visit: &mut impl FnMut(&[PointRef]),
) {
    visit(chosen);
    if chosen.len() == k {
        return;
    }
    for s in next_set..family.len() {
        for i in 0..family.sets()[s].len() {
            chosen.push((s, i));
            extend(family, k, chosen, s + 1, visit);
            chosen.pop();
        }
    }
}

/// `(basis value, mass)` for every valid basis with positive mass.
fn basis_tuples<T: Send>(family: &SampleFamily, stat: &Statistic, value: impl Fn(&Summary) -> T + Sync) -> Result<Vec<(T, f64)>> {
    let d = family.dim();
    let k = basis_size(stat, d)
        .ok_or_else(|| Error::param(format!("{stat} has no basis enumeration; use the brute-force oracle")))?;
    stat.check_dim(d)?;
    let count = candidate_count(family, k.min(family.len()));
    if count > MAX_CANDIDATE_BASES {
        return Err(Error::TooLarge {
            what: "basis enumeration",
            count,
            limit: MAX_CANDIDATE_BASES,
        });
    }
    validate_general_position(family, stat).into_result()?;
    let boxes = !matches!(stat, Statistic::Seb2Radius);
    let sets = family.sets();
    let weights = family.weights();
    let firsts: Vec<PointRef> = (0..sets.len())
        .flat_map(|s| (0..sets[s].len()).map(move |i| (s, i)))
        .collect();
    let chunks: Vec<Vec<(T, f64)>> = firsts
        .par_iter()
        .map(|&first| {
            let mut out = Vec::new();
            let mut chosen = vec![first];
            extend(family, k, &mut chosen, first.0 + 1, &mut |basis: &[PointRef]| {
                let pts: Vec<&Point> = basis.iter().map(|&(s, i)| &sets[s][i]).collect();
                let Some(shape) = valid_summary(&pts, boxes) else {
                    return;
                };
                let mut mass: f64 = basis.iter().map(|&(s, i)| weights[s][i]).product();
                let mut used = basis.iter().map(|r| r.0).peekable();
                for (s, set) in sets.iter().enumerate() {
                    if used.peek() == Some(&s) {
                        used.next();
                        continue;
                    }
                    let inside: f64 = set
                        .iter()
                        .zip(&weights[s])
                        .filter(|(p, _)| shape.holds(p))
                        .map(|(_, w)| w)
                        .sum();
                    mass *= inside;
                    if mass == 0.0 {
                        return;
                    }
                }
                out.push((value(&shape), mass));
            });
            out
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

/// The exact weighted CDF of `aabb-perimeter`, `aabb-volume` or
/// `seb2-radius` over the family.
pub fn algorithm2_quantization(family: &SampleFamily, stat: &Statistic) -> Result<WeightedCdf> {
    let value = |s: &Summary| match (s, stat) {
        (Summary::Box(b), Statistic::AabbPerimeter) => b.boundary_measure(),
        (Summary::Box(b), Statistic::AabbVolume) => b.volume(),
        (Summary::Ball(b), Statistic::Seb2Radius) => b.radius,
        (Summary::Box(b), _) => b.widths()[0],
        (Summary::Ball(b), _) => b.radius,
    };
    if matches!(stat, Statistic::AabbWidths) && family.dim() != 1 {
        return Err(Error::param("aabb-widths is vector valued; use algorithm2_kvariate"));
    }
    WeightedCdf::new(basis_tuples(family, stat, value)?)
}

/// The k-variate form for `aabb-widths`: tuples carry the width vector.
pub fn algorithm2_kvariate(family: &SampleFamily, stat: &Statistic) -> Result<WeightedKCdf> {
    if !matches!(stat, Statistic::AabbWidths) {
        return Err(Error::param(format!("{stat} is not vector valued")));
    }
    let tuples = basis_tuples(family, stat, |s| match s {
        Summary::Box(b) => b.widths(),
        Summary::Ball(_) => unreachable!("box statistic"),
    })?;
    WeightedKCdf::new(family.dim(), tuples)
}
