use super::{aabb, Aabb, Point};
use crate::error::{Error, Result};

/// A non-degenerate convex polygon with counterclockwise vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl ConvexPolygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::param("polygon needs at least 3 vertices"));
        }
        if vertices.iter().any(|v| v.dim() != 2 || !v.is_finite()) {
            return Err(Error::param("polygon vertices must be finite planar points"));
        }
        let n = vertices.len();
        for k in 0..n {
            let (a, b, c) = (&vertices[k], &vertices[(k + 1) % n], &vertices[(k + 2) % n]);
            let turn = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
            if turn <= 0.0 {
                return Err(Error::param(
                    "polygon must be convex and non-degenerate with counterclockwise vertices",
                ));
            }
        }
        // A star polygon turns left at every vertex but winds more than once.
        let winding: f64 = (0..n)
            .map(|k| {
                let (a, b, c) = (&vertices[k], &vertices[(k + 1) % n], &vertices[(k + 2) % n]);
                let e1 = (b[0] - a[0], b[1] - a[1]);
                let e2 = (c[0] - b[0], c[1] - b[1]);
                (e1.0 * e2.1 - e1.1 * e2.0).atan2(e1.0 * e2.0 + e1.1 * e2.1)
            })
            .sum();
        if (winding - std::f64::consts::TAU).abs() > 1e-6 {
            return Err(Error::param("polygon must be simple and convex"));
        }
        Ok(Self { vertices })
    }

    /// Axis-aligned rectangle as a polygon.
    pub fn rectangle(lo: [f64; 2], hi: [f64; 2]) -> Result<Self> {
        Self::new(vec![
            Point::from([lo[0], lo[1]]),
            Point::from([hi[0], lo[1]]),
            Point::from([hi[0], hi[1]]),
            Point::from([lo[0], hi[1]]),
        ])
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        0.5 * (0..n)
            .map(|k| {
                let (a, b) = (&self.vertices[k], &self.vertices[(k + 1) % n]);
                a[0] * b[1] - a[1] * b[0]
            })
            .sum::<f64>()
    }

    /// Closed containment.
    pub fn contains(&self, p: &Point) -> bool {
        let n = self.vertices.len();
        (0..n).all(|k| {
            let (a, b) = (&self.vertices[k], &self.vertices[(k + 1) % n]);
            (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]) >= 0.0
        })
    }

    pub fn bounding_box(&self) -> Aabb {
        aabb(&self.vertices).expect("polygon has vertices")
    }

    /// Fan triangles `(v0, v_k, v_{k+1})` with their areas.
    pub fn fan(&self) -> Vec<([&Point; 3], f64)> {
        let v0 = &self.vertices[0];
        (1..self.vertices.len() - 1)
            .map(|k| {
                let (a, b) = (&self.vertices[k], &self.vertices[k + 1]);
                let area = 0.5 * ((a[0] - v0[0]) * (b[1] - v0[1]) - (a[1] - v0[1]) * (b[0] - v0[0]));
                ([v0, a, b], area)
            })
            .collect()
    }
}

/// Even-odd point-in-polygon test for a closed planar polyline (the closing
/// edge is implied; a repeated final vertex is harmless).
pub fn point_in_polygon(p: &Point, ring: &[Point]) -> bool {
    let n = ring.len();
    let mut inside = false;
    for k in 0..n {
        let (a, b) = (&ring[k], &ring[(k + 1) % n]);
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
            if p[0] < x {
                inside = !inside;
            }
        }
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_orientation_and_convexity() {
        let sq = ConvexPolygon::rectangle([0.0, 0.0], [1.0, 1.0]).unwrap();
        assert_eq!(sq.area(), 1.0);
        let cw: Vec<Point> = sq.vertices().iter().rev().cloned().collect();
        assert!(ConvexPolygon::new(cw).is_err());
        let dart = vec![
            Point::from([0.0, 0.0]),
            Point::from([2.0, 0.0]),
            Point::from([1.0, 0.2]),
            Point::from([1.0, 2.0]),
        ];
        assert!(ConvexPolygon::new(dart).is_err());
        let flat = vec![
            Point::from([0.0, 0.0]),
            Point::from([1.0, 0.0]),
            Point::from([2.0, 0.0]),
        ];
        assert!(ConvexPolygon::new(flat).is_err());
    }

    #[test]
    fn containment() {
        let sq = ConvexPolygon::rectangle([0.0, 0.0], [1.0, 1.0]).unwrap();
        assert!(sq.contains(&Point::from([0.5, 0.5])));
        assert!(sq.contains(&Point::from([1.0, 0.5])));
        assert!(!sq.contains(&Point::from([1.1, 0.5])));
        assert!(point_in_polygon(&Point::from([0.5, 0.5]), sq.vertices()));
        assert!(!point_in_polygon(&Point::from([1.5, 0.5]), sq.vertices()));
        let fan_area: f64 = sq.fan().iter().map(|t| t.1).sum();
        assert!((fan_area - 1.0).abs() < 1e-15);
    }
}
