use serde::{Deserialize, Serialize};

use super::{PointDistribution, UncertainPointSet};
use crate::error::{Error, Result};
use crate::geom::{ConvexPolygon, Point};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    dim: usize,
    points: Vec<PointDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum PointDoc {
    Gaussian { mean: Vec<f64>, sigma: Sigma },
    Discrete { support: Vec<Atom> },
    UniformDisk { center: Vec<f64>, radius: f64 },
    UniformPolygon { vertices: Vec<Vec<f64>> },
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Sigma {
    Isotropic(f64),
    PerAxis(Vec<f64>),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Atom {
    p: Vec<f64>,
    w: f64,
}

fn check_len(index: usize, what: &str, coords: &[f64], dim: usize) -> Result<()> {
    if coords.len() != dim {
        return Err(Error::model(
            index,
            format!("dimension mismatch in {what}: expected {dim}, found {}", coords.len()),
        ));
    }
    Ok(())
}

fn to_distribution(index: usize, doc: PointDoc, dim: usize) -> Result<PointDistribution> {
    Ok(match doc {
        PointDoc::Gaussian { mean, sigma } => {
            check_len(index, "mean", &mean, dim)?;
            let sigma = match sigma {
                Sigma::Isotropic(s) => vec![s; dim],
                Sigma::PerAxis(v) if v.len() == 1 => vec![v[0]; dim],
                Sigma::PerAxis(v) => {
                    check_len(index, "sigma", &v, dim)?;
                    v
                }
            };
            PointDistribution::Gaussian {
                mean: Point::new(mean),
                sigma,
            }
        }
        PointDoc::Discrete { support } => {
            for atom in &support {
                check_len(index, "support point", &atom.p, dim)?;
            }
            PointDistribution::Discrete(support.into_iter().map(|a| (Point::new(a.p), a.w)).collect())
        }
        PointDoc::UniformDisk { center, radius } => {
            check_len(index, "center", &center, dim)?;
            PointDistribution::UniformDisk {
                center: Point::new(center),
                radius,
            }
        }
        PointDoc::UniformPolygon { vertices } => {
            if dim != 2 {
                return Err(Error::model(index, "uniform-polygon requires dim 2"));
            }
            for v in &vertices {
                check_len(index, "vertex", v, 2)?;
            }
            let poly = ConvexPolygon::new(vertices.into_iter().map(Point::new).collect())
                .map_err(|e| Error::model(index, e.to_string()))?;
            PointDistribution::UniformPolygon(poly)
        }
    })
}

fn to_doc(dist: &PointDistribution) -> PointDoc {
    match dist {
        PointDistribution::Discrete(support) => PointDoc::Discrete {
            support: support
                .iter()
                .map(|(p, w)| Atom {
                    p: p.coords().to_vec(),
                    w: *w,
                })
                .collect(),
        },
        PointDistribution::Gaussian { mean, sigma } => PointDoc::Gaussian {
            mean: mean.coords().to_vec(),
            sigma: Sigma::PerAxis(sigma.clone()),
        },
        PointDistribution::UniformDisk { center, radius } => PointDoc::UniformDisk {
            center: center.coords().to_vec(),
            radius: *radius,
        },
        PointDistribution::UniformPolygon(poly) => PointDoc::UniformPolygon {
            vertices: poly.vertices().iter().map(|v| v.coords().to_vec()).collect(),
        },
    }
}

/// Parses the JSON model format. Validation errors name the point index.
pub fn parse_model(text: &str) -> Result<UncertainPointSet> {
    let doc: ModelDoc = serde_json::from_str(text)?;
    let dim = doc.dim;
    let distributions = doc
        .points
        .into_iter()
        .enumerate()
        .map(|(i, p)| to_distribution(i, p, dim))
        .collect::<Result<Vec<_>>>()?;
    UncertainPointSet::new(dim, distributions)
}

pub fn serialize_model(model: &UncertainPointSet) -> String {
    let doc = ModelDoc {
        dim: model.dim(),
        points: model.distributions().iter().map(to_doc).collect(),
    };
    serde_json::to_string(&doc).expect("model documents always serialize")
}
