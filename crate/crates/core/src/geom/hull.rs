use super::{common_dim, coord_scale, Point, GEOM_TOL};
use crate::error::{Error, Result};

fn cross(o: &Point, a: &Point, b: &Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Convex hull of planar points by Andrew's monotone chain.
///
/// Returns vertex indices in counterclockwise order without collinear
/// boundary points. Ties in the lexicographic sort keep the lower index, so
/// duplicated points resolve to their first occurrence. A collinear input
/// yields its two endpoints; coincident input yields a single index.
pub fn convex_hull_2d(points: &[Point]) -> Result<Vec<usize>> {
    let d = common_dim(points)?;
    if d != 2 {
        return Err(Error::UnsupportedDimension {
            dim: d,
            what: "planar convex hull",
        });
    }
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| {
        points[a][0]
            .total_cmp(&points[b][0])
            .then(points[a][1].total_cmp(&points[b][1]))
            .then(a.cmp(&b))
    });
    idx.dedup_by(|a, b| points[*a] == points[*b]);
    if idx.len() <= 2 {
        return Ok(idx);
    }
    let s = coord_scale(points);
    let tol = GEOM_TOL * s * s;

    let mut hull: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(idx.iter())
        } else {
            Box::new(idx.iter().rev())
        };
        for &i in iter {
            while hull.len() >= start + 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                if cross(&points[a], &points[b], &points[i]) <= tol {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(i);
        }
        // the last point of each chain starts the next one
        hull.pop();
    }
    Ok(hull)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HullStats {
    pub area: f64,
    pub perimeter: f64,
}

/// Area and perimeter of the planar convex hull. A degenerate (segment)
/// hull has area 0 and perimeter twice its length.
pub fn chull_stats_2d(points: &[Point]) -> Result<HullStats> {
    let hull = convex_hull_2d(points)?;
    let h: Vec<&Point> = hull.iter().map(|&i| &points[i]).collect();
    let n = h.len();
    let mut area = 0.0;
    let mut perimeter = 0.0;
    if n >= 2 {
        for k in 0..n {
            let (a, b) = (h[k], h[(k + 1) % n]);
            area += a[0] * b[1] - a[1] * b[0];
            perimeter += a.dist(b);
        }
    }
    Ok(HullStats {
        area: 0.5 * area.abs(),
        perimeter,
    })
}
