//! Named extent statistics and their kernel approximability.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geom::{self, Direction, Point};

#[derive(Clone, Debug, PartialEq)]
pub enum Statistic {
    Diameter,
    DirectionalWidth(Direction),
    Seb2Radius,
    AabbPerimeter,
    AabbVolume,
    /// The `d` axis widths; the only vector-valued statistic.
    AabbWidths,
    ChullArea,
    ChullPerimeter,
}

impl Statistic {
    /// Number of output coordinates at dimension `dim`.
    pub fn arity(&self, dim: usize) -> usize {
        match self {
            Statistic::AabbWidths => dim,
            _ => 1,
        }
    }

    /// Relative error of the statistic on an α-kernel, for statistics with
    /// a known bound.
    pub fn theta(&self, alpha: f64) -> Option<f64> {
        match self {
            Statistic::Diameter | Statistic::DirectionalWidth(_) | Statistic::AabbWidths => Some(alpha),
            Statistic::Seb2Radius => Some(2.0 * alpha),
            _ => None,
        }
    }

    /// θ(α) or a "not approximable" error.
    pub fn require_theta(&self, alpha: f64) -> Result<f64> {
        self.theta(alpha)
            .ok_or_else(|| Error::NotApproximable(self.to_string()))
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        match self {
            Statistic::Seb2Radius if !(2..=3).contains(&dim) => Err(Error::UnsupportedDimension {
                dim,
                what: "seb2-radius",
            }),
            Statistic::ChullArea | Statistic::ChullPerimeter if dim != 2 => Err(Error::UnsupportedDimension {
                dim,
                what: "convex hull statistics",
            }),
            Statistic::DirectionalWidth(u) if u.dim() != dim => Err(Error::DimensionMismatch {
                expected: dim,
                found: u.dim(),
            }),
            _ => Ok(()),
        }
    }

    pub fn evaluate(&self, points: &[Point]) -> Result<Vec<f64>> {
        match self {
            Statistic::AabbWidths => Ok(geom::aabb(points)?.widths()),
            other => other.evaluate_scalar(points).map(|v| vec![v]),
        }
    }

    /// Value of a univariate statistic; fails for `aabb-widths` unless d = 1.
    pub fn evaluate_scalar(&self, points: &[Point]) -> Result<f64> {
        match self {
            Statistic::Diameter => geom::diameter(points),
            Statistic::DirectionalWidth(u) => geom::directional_width(points, u).map(|w| w.value),
            Statistic::Seb2Radius => geom::seb2(points).map(|b| b.ball.radius),
            Statistic::AabbPerimeter => geom::aabb_stats(points).map(|s| s.perimeter),
            Statistic::AabbVolume => geom::aabb_stats(points).map(|s| s.volume),
            Statistic::AabbWidths => {
                let w = geom::aabb(points)?.widths();
                if w.len() == 1 {
                    Ok(w[0])
                } else {
                    Err(Error::param("aabb-widths is vector valued"))
                }
            }
            Statistic::ChullArea => geom::chull_stats_2d(points).map(|s| s.area),
            Statistic::ChullPerimeter => geom::chull_stats_2d(points).map(|s| s.perimeter),
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statistic::Diameter => f.write_str("diam"),
            Statistic::DirectionalWidth(u) => {
                let coords: Vec<String> = u.coords().iter().map(|c| format!("{c}")).collect();
                write!(f, "dwid:{}", coords.join(","))
            }
            Statistic::Seb2Radius => f.write_str("seb2-radius"),
            Statistic::AabbPerimeter => f.write_str("aabb-perimeter"),
            Statistic::AabbVolume => f.write_str("aabb-volume"),
            Statistic::AabbWidths => f.write_str("aabb-widths"),
            Statistic::ChullArea => f.write_str("chull-area"),
            Statistic::ChullPerimeter => f.write_str("chull-perimeter"),
        }
    }
}

impl FromStr for Statistic {
    type Err = Error;

    /// Accepts the display names; a width direction is written `dwid:1,0`
    /// or `dwid(1,0)` and is normalized.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Ok(match s {
            "diam" | "diameter" => Statistic::Diameter,
            "seb2-radius" | "seb2" => Statistic::Seb2Radius,
            "aabb-perimeter" => Statistic::AabbPerimeter,
            "aabb-volume" => Statistic::AabbVolume,
            "aabb-widths" => Statistic::AabbWidths,
            "chull-area" => Statistic::ChullArea,
            "chull-perimeter" => Statistic::ChullPerimeter,
            _ => {
                let body = s
                    .strip_prefix("dwid:")
                    .or_else(|| s.strip_prefix("dwid(").and_then(|r| r.strip_suffix(')')))
                    .ok_or_else(|| Error::param(format!("unknown statistic '{s}'")))?;
                let coords = body
                    .split(',')
                    .map(|c| c.trim().parse::<f64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::param(format!("bad direction in '{s}'")))?;
                Statistic::DirectionalWidth(Direction::new(coords)?)
            }
        })
    }
}
