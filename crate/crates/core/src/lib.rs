//! Approximate distributions of extent measures for uncertain point sets.

pub mod deterministic;
pub mod error;
pub mod experiment;
pub mod geom;
pub mod kernel;
pub mod model;
pub mod quantization;
pub mod rng;
pub mod sip;
pub mod statistic;

pub use error::{Error, Result};
pub use geom::{Aabb, Ball, Direction, Point};
pub use model::{PointDistribution, UncertainPointSet};
pub use rng::SeededRng;
pub use quantization::{KVariateQuantization, QuantizationParams, UnivariateQuantization};
pub use statistic::Statistic;
pub use kernel::{AlphaKernel, EpsAlphaKernel, KernelParams};
pub use sip::{ShapeFamily, ShapeSet, SipParams};
pub use deterministic::{SampleFamily, WeightedCdf};
