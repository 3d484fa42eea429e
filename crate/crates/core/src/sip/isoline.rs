use std::collections::BTreeMap;
use std::fmt::Write;

use rayon::prelude::*;

use super::ShapeSet;
use crate::error::{Error, Result};
use crate::geom::{Aabb, Point};

pub const DEFAULT_LEVELS: [f64; 5] = [0.9, 0.7, 0.5, 0.3, 0.1];
pub const DEFAULT_RESOLUTION: usize = 256;

/// Inclusion probabilities sampled on a regular grid, row-major with `y`
/// increasing by row.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub values: Vec<f64>,
}

impl Grid {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.xs.len() + i]
    }

    /// `x,y,sip` lines after a header.
    pub fn to_csv(&self, header: &[(&str, String)]) -> String {
        let mut out = crate::quantization::csv_header(header);
        out.push_str("x,y,sip\n");
        for (j, y) in self.ys.iter().enumerate() {
            for (i, x) in self.xs.iter().enumerate() {
                let _ = writeln!(out, "{x},{y},{}", self.value(i, j));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Isoline {
    pub level: f64,
    /// Closed polylines, first vertex repeated at the end. The region at or
    /// above the level lies to the left of each polyline.
    pub polylines: Vec<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsolineSet {
    pub bbox: Aabb,
    pub resolution: usize,
    /// Strictly decreasing levels.
    pub isolines: Vec<Isoline>,
    pub grid: Grid,
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// Evaluates the shape set on a `resolution × resolution` grid over `bbox`
/// and extracts each level curve by marching squares.
///
/// The grid is padded with a ring of zero-width cells valued below every
/// level, so curves that reach the box boundary are closed along it.
pub fn grid_and_isolines(shapes: &ShapeSet, bbox: &Aabb, resolution: usize, levels: &[f64]) -> Result<IsolineSet> {
    if shapes.dim() != 2 || bbox.dim() != 2 {
        return Err(Error::UnsupportedDimension {
            dim: shapes.dim(),
            what: "isolines",
        });
    }
    if resolution < 8 {
        return Err(Error::param("resolution must be at least 8"));
    }
    if levels.is_empty() {
        return Err(Error::param("level list is empty"));
    }
    if levels.iter().any(|l| !(*l > 0.0 && *l < 1.0)) {
        return Err(Error::param("levels must lie in (0,1)"));
    }
    let w = bbox.widths();
    if !(w[0] > 0.0 && w[1] > 0.0) {
        return Err(Error::param("bounding box is degenerate"));
    }
    let mut levels = levels.to_vec();
    levels.sort_by(|a, b| b.total_cmp(a));
    levels.dedup();

    let xs = linspace(bbox.lo[0], bbox.hi[0], resolution);
    let ys = linspace(bbox.lo[1], bbox.hi[1], resolution);
    let values: Vec<f64> = ys
        .par_iter()
        .flat_map_iter(|y| {
            xs.iter()
                .map(|x| shapes.eval_unchecked(&Point::from([*x, *y])))
                .collect::<Vec<_>>()
        })
        .collect();
    let grid = Grid { xs, ys, values };
    let isolines = levels
        .iter()
        .map(|&level| Isoline {
            level,
            polylines: contour(&grid, level),
        })
        .collect();
    Ok(IsolineSet {
        bbox: bbox.clone(),
        resolution,
        isolines,
        grid,
    })
}

/// Padded grid view: index 0 and n+1 repeat the boundary coordinate with a
/// value of -1.
struct Padded<'a> {
    grid: &'a Grid,
    nx: usize,
    ny: usize,
}

impl Padded<'_> {
    fn x(&self, i: usize) -> f64 {
        self.grid.xs[i.clamp(1, self.nx - 2) - 1]
    }

    fn y(&self, j: usize) -> f64 {
        self.grid.ys[j.clamp(1, self.ny - 2) - 1]
    }

    fn v(&self, i: usize, j: usize) -> f64 {
        if i == 0 || j == 0 || i == self.nx - 1 || j == self.ny - 1 {
            -1.0
        } else {
            self.grid.value(i - 1, j - 1)
        }
    }
}

/// Edge key: node (i,j) and whether the edge runs in +x (0) or +y (1).
type EdgeKey = (usize, usize, u8);

fn contour(grid: &Grid, level: f64) -> Vec<Vec<[f64; 2]>> {
    let pad = Padded {
        grid,
        nx: grid.xs.len() + 2,
        ny: grid.ys.len() + 2,
    };
    let inside = |i: usize, j: usize| pad.v(i, j) >= level;
    let mut next: BTreeMap<EdgeKey, EdgeKey> = BTreeMap::new();
    for j in 0..pad.ny - 1 {
        for i in 0..pad.nx - 1 {
            // corners counterclockwise: bl, br, tr, tl; edge k joins corner k and k+1
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let ins = corners.map(|(a, b)| inside(a, b));
            let edges: [EdgeKey; 4] = [(i, j, 0), (i + 1, j, 1), (i, j + 1, 0), (i, j, 1)];
            let exits: Vec<usize> = (0..4).filter(|&k| ins[k] && !ins[(k + 1) % 4]).collect();
            let enters: Vec<usize> = (0..4).filter(|&k| !ins[k] && ins[(k + 1) % 4]).collect();
            match exits.len() {
                0 => {}
                1 => {
                    next.insert(edges[exits[0]], edges[enters[0]]);
                }
                _ => {
                    let center = corners.iter().map(|&(a, b)| pad.v(a, b)).sum::<f64>() / 4.0;
                    for &e in &exits {
                        // joined region: pair with the next entering edge;
                        // separated corners: with the previous one
                        let partner = if center >= level { (e + 1) % 4 } else { (e + 3) % 4 };
                        debug_assert!(enters.contains(&partner));
                        next.insert(edges[e], edges[partner]);
                    }
                }
            }
        }
    }
    let crossing = |(i, j, dir): EdgeKey| -> [f64; 2] {
        let (i2, j2) = if dir == 0 { (i + 1, j) } else { (i, j + 1) };
        let (va, vb) = (pad.v(i, j), pad.v(i2, j2));
        let t = ((level - va) / (vb - va)).clamp(0.0, 1.0);
        [
            pad.x(i) + t * (pad.x(i2) - pad.x(i)),
            pad.y(j) + t * (pad.y(j2) - pad.y(j)),
        ]
    };
    let mut polylines = Vec::new();
    while let Some((&start, _)) = next.iter().next() {
        let mut line: Vec<[f64; 2]> = Vec::new();
        let mut edge = start;
        while let Some(to) = next.remove(&edge) {
            let p = crossing(edge);
            if line.last() != Some(&p) {
                line.push(p);
            }
            edge = to;
        }
        if line.len() > 1 && line.first() == line.last() {
            line.pop();
        }
        if line.len() >= 3 {
            line.push(line[0]);
            polylines.push(line);
        }
    }
    polylines
}

impl IsolineSet {
    /// One `<g>` per level and one `<path>` per polyline; the level is
    /// recorded in a `data-level` attribute on both. The y axis points up.
    pub fn to_svg(&self, header: &[(&str, String)]) -> String {
        let (lo, hi) = (&self.bbox.lo, &self.bbox.hi);
        let (w, h) = (hi[0] - lo[0], hi[1] - lo[1]);
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {w} {h}" width="800" height="{}">"#,
            lo[0],
            -hi[1],
            (800.0 * h / w).round()
        );
        for (k, v) in header {
            let _ = writeln!(out, "<!-- {k}={v} -->");
        }
        let stroke = w.max(h) / 400.0;
        for iso in &self.isolines {
            let _ = writeln!(
                out,
                r#"<g data-level="{}" fill="none" stroke="black" stroke-width="{stroke}" transform="scale(1,-1)">"#,
                iso.level
            );
            for line in &iso.polylines {
                let mut d = String::new();
                for (k, p) in line.iter().enumerate() {
                    let _ = write!(d, "{}{} {} ", if k == 0 { "M" } else { "L" }, p[0], p[1]);
                }
                d.push('Z');
                let _ = writeln!(out, r#"<path data-level="{}" d="{d}"/>"#, iso.level);
            }
            out.push_str("</g>\n");
        }
        out.push_str("</svg>\n");
        out
    }
}
