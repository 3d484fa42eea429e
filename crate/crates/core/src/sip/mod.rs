//! Shape inclusion probabilities.
//!
//! A [`ShapeSet`] stores the summarizing shape (smallest enclosing ball or
//! bounding box) of `m` sampled point sets; the inclusion probability of a
//! location is the fraction of stored shapes containing it.

mod center;
mod isoline;

pub use center::{approximate_center, center_point, halfspace_depth_2d, CenterPoint, CENTER_SAMPLE_SIZE};
pub use isoline::{grid_and_isolines, Grid, Isoline, IsolineSet, DEFAULT_LEVELS, DEFAULT_RESOLUTION};

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{self, Aabb, Ball, Point};
use crate::model::{sample_point_set, UncertainPointSet};
use crate::quantization::{check_unit, trial_count, DEFAULT_SAMPLE_CONSTANT};
use crate::rng::SeededRng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShapeFamily {
    Seb2Ball,
    AabbBox,
}

impl ShapeFamily {
    /// VC-dimension of point containment in the family at dimension `d`.
    pub fn vc_dimension(&self, d: usize) -> usize {
        match self {
            ShapeFamily::Seb2Ball => d + 1,
            ShapeFamily::AabbBox => 2 * d,
        }
    }

    pub fn check_dim(&self, d: usize) -> Result<()> {
        match self {
            ShapeFamily::Seb2Ball if !(2..=3).contains(&d) => Err(Error::UnsupportedDimension {
                dim: d,
                what: "seb2-ball shapes",
            }),
            _ if d == 0 => Err(Error::UnsupportedDimension { dim: d, what: "shapes" }),
            _ => Ok(()),
        }
    }

    /// The optimal shape of a point set. Both families have a unique
    /// optimum, so no tie rule is needed.
    pub fn summarize(&self, points: &[Point]) -> Result<Shape> {
        Ok(match self {
            ShapeFamily::Seb2Ball => Shape::Ball(geom::seb2(points)?.ball),
            ShapeFamily::AabbBox => Shape::Box(geom::aabb(points)?),
        })
    }
}

impl fmt::Display for ShapeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShapeFamily::Seb2Ball => "seb2-ball",
            ShapeFamily::AabbBox => "aabb-box",
        })
    }
}

impl FromStr for ShapeFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "seb2-ball" | "seb2" => Ok(ShapeFamily::Seb2Ball),
            "aabb-box" | "aabb" => Ok(ShapeFamily::AabbBox),
            _ => Err(Error::param(format!("unknown shape family '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    Ball(Ball),
    Box(Aabb),
}

impl Shape {
    /// Closed containment.
    pub fn contains(&self, p: &Point) -> bool {
        match self {
            Shape::Ball(b) => b.contains(p),
            Shape::Box(b) => b.contains(p),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SipParams {
    pub epsilon: f64,
    pub delta: f64,
    pub trials: Option<usize>,
    pub sample_constant: f64,
    /// Keep the sampled point sets next to their shapes.
    pub retain_samples: bool,
}

impl SipParams {
    pub fn new(epsilon: f64, delta: f64) -> Result<Self> {
        let p = Self {
            epsilon,
            delta,
            trials: None,
            sample_constant: DEFAULT_SAMPLE_CONSTANT,
            retain_samples: false,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_trials(mut self, m: usize) -> Self {
        self.trials = Some(m);
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_unit("epsilon", self.epsilon)?;
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

#[derive(Clone, Debug)]
pub struct ShapeSet {
    family: ShapeFamily,
    dim: usize,
    shapes: Vec<Shape>,
    samples: Option<Vec<Vec<Point>>>,
    params: SipParams,
    seed: u64,
}

impl ShapeSet {
    pub fn family(&self) -> ShapeFamily {
        self.family
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shapes(&self) -> &[Shape] {
        &self.shapes
    }

    pub fn samples(&self) -> Option<&[Vec<Point>]> {
        self.samples.as_deref()
    }

    pub fn params(&self) -> &SipParams {
        &self.params
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.shapes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }

    /// Fraction of shapes containing `x`.
    pub fn eval(&self, x: &Point) -> Result<f64> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.dim(),
            });
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &Point) -> f64 {
        let hits = self.shapes.iter().filter(|s| s.contains(x)).count();
        hits as f64 / self.shapes.len() as f64
    }

    /// Bounding box of all stored shapes.
    pub fn extent(&self) -> Aabb {
        let corners: Vec<Point> = self
            .shapes
            .iter()
            .flat_map(|s| match s {
                Shape::Box(b) => [b.lo.clone(), b.hi.clone()],
                Shape::Ball(b) => [
                    Point::new(b.center.coords().iter().map(|c| c - b.radius).collect::<Vec<_>>()),
                    Point::new(b.center.coords().iter().map(|c| c + b.radius).collect::<Vec<_>>()),
                ],
            })
            .collect();
        geom::aabb(&corners).expect("shape sets are nonempty")
    }
}

pub fn eval_sip(shapes: &ShapeSet, x: &Point) -> Result<f64> {
    shapes.eval(x)
}

pub fn build_sip(model: &UncertainPointSet, family: ShapeFamily, params: &SipParams, seed: u64) -> Result<ShapeSet> {
    params.validate()?;
    family.check_dim(model.dim())?;
    let built = (0..params.trials())
        .into_par_iter()
        .map(|j| {
            let mut rng = SeededRng::new(seed, j as u64);
            let q = sample_point_set(model, &mut rng);
            let shape = family.summarize(&q)?;
            Ok((shape, params.retain_samples.then_some(q)))
        })
        .collect::<Result<Vec<_>>>()?;
    let (shapes, samples): (Vec<_>, Vec<_>) = built.into_iter().unzip();
    Ok(ShapeSet {
        family,
        dim: model.dim(),
        shapes,
        samples: params
            .retain_samples
            .then(|| samples.into_iter().map(|s| s.expect("retained")).collect()),
        params: params.clone(),
        seed,
    })
}
