use serde::Serialize;

use crate::error::{Error, Result};

/// Lower convex envelope of 1-D samples, as its vertices sorted by abscissa.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexHull {
    pub vertices: Vec<(f64, f64)>,
}

impl ConvexHull {
    /// Linear interpolation between vertices; `x` must lie within the sampled range.
    pub fn value_at(&self, x: f64) -> Result<f64> {
        let first = self.vertices[0].0;
        let last = self.vertices[self.vertices.len() - 1].0;
        if !(first..=last).contains(&x) {
            return Err(Error::domain("p", x, format!("[{first}, {last}]")));
        }
        let k = self.vertices.partition_point(|v| v.0 < x);
        if k == 0 {
            return Ok(self.vertices[0].1);
        }
        let (x0, y0) = self.vertices[k - 1];
        let (x1, y1) = self.vertices[k];
        if x1 == x {
            return Ok(y1);
        }
        Ok(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
    }
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Lower convex hull by Andrew's monotone chain.
///
/// Samples must be sorted by `p`. Repeated `p` keep the smallest value (with a
/// warning when the values differ).
pub fn convex_hull_1d(samples: &[(f64, f64)]) -> Result<ConvexHull> {
    if samples.len() < 2 {
        return Err(Error::Validation(format!(
            "convex hull needs at least 2 samples, got {}",
            samples.len()
        )));
    }
    let mut points: Vec<(f64, f64)> = Vec::with_capacity(samples.len());
    for &(x, y) in samples {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::Validation(format!("non-finite sample ({x}, {y})")));
        }
        match points.last_mut() {
            Some(last) if x < last.0 => {
                return Err(Error::Validation(format!(
                    "samples are not sorted: {x} follows {}",
                    last.0
                )));
            }
            Some(last) if x == last.0 => {
                if y != last.1 {
                    log::warn!("duplicate p = {x} with values {} and {y}; keeping the minimum", last.1);
                }
                last.1 = last.1.min(y);
            }
            _ => points.push((x, y)),
        }
    }
    if points.len() < 2 {
        return Err(Error::Validation("convex hull needs at least 2 distinct abscissae".into()));
    }
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(points.len());
    for p in points {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    Ok(ConvexHull { vertices: hull })
}
