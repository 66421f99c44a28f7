//! Winding numbers of 1-chains about points, computed exactly per segment,
//! plus a grid decomposition of the support complement into connected
//! components and per-component winding statistics.
//!
//! On a straight cell `(a, b, w)` the integral of `dw/(w - z)` is
//! `ln|b-z| - ln|a-z| + i·Δθ` with `Δθ = atan2(cross(a-z, b-z), dot(a-z, b-z))`,
//! so no quadrature and no global branch cut enter. Weighted chains make the
//! winding a real (not necessarily integer) number; open chains make it
//! complex. Nothing here ever rounds.

use crate::chain::Chain1;
use crate::error::{Error, Result};
use crate::forms::exclusion_radius;
use crate::geom::{Complex, Point2, Rect};
use rayon::prelude::*;
use serde::Serialize;

/// Winding number `(1/2πi) ∮ dw/(w-z)` of a chain about `z`, exact per
/// segment. Real part is the index; for a closed real-weighted chain the
/// imaginary part is zero up to roundoff.
pub fn winding_number(j: &Chain1, z: Point2) -> Result<Complex> {
    let support = j.support();
    let exclusion = exclusion_radius(j);
    let d = support.distance(z);
    if d <= exclusion {
        return Err(Error::PointOnSupport {
            x: z.x,
            y: z.y,
            dist: d,
            exclusion,
        });
    }
    Ok(winding_number_unchecked(j, z))
}

/// The per-segment formula without the support-distance guard; callers must
/// keep `z` off the support themselves.
pub fn winding_number_unchecked(j: &Chain1, z: Point2) -> Complex {
    let mut log_sum = 0.0;
    let mut angle_sum = 0.0;
    for cell in j.cells() {
        let u = cell.a() - z;
        let v = cell.b() - z;
        let dtheta = u.cross(v).atan2(u.dot(v));
        log_sum += cell.w() * 0.5 * (v.norm_sq().ln() - u.norm_sq().ln());
        angle_sum += cell.w() * dtheta;
    }
    // (log_sum + i·angle_sum) / (2πi); the +0.0 normalizes negative zero.
    let two_pi = 2.0 * std::f64::consts::PI;
    Complex::new(angle_sum / two_pi + 0.0, -log_sum / two_pi + 0.0)
}

/// Grid labeling of the complement of a chain's support. Label 0 marks cells
/// within `delta` of the support; positive labels are 4-connected components
/// of the rest. The grid is a square covering twice the support diameter,
/// centered on the support, so the outermost ring always belongs to the
/// unbounded component.
#[derive(Debug, Clone)]
pub struct ComponentMap {
    labels: Vec<u32>,
    near: Vec<bool>,
    nx: usize,
    ny: usize,
    origin: Point2,
    cell: f64,
    delta: f64,
    unbounded: u32,
    n_components: u32,
}

impl ComponentMap {
    pub const SUPPORT: u32 = 0;

    pub fn resolution(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn unbounded_label(&self) -> u32 {
        self.unbounded
    }

    /// Component labels present in the map, excluding the support label.
    pub fn component_labels(&self) -> Vec<u32> {
        (1..=self.n_components).collect()
    }

    pub fn label_at_index(&self, ix: usize, iy: usize) -> u32 {
        self.labels[iy * self.nx + ix]
    }

    pub fn cell_center(&self, ix: usize, iy: usize) -> Point2 {
        Point2::new(
            self.origin.x + (ix as f64 + 0.5) * self.cell,
            self.origin.y + (iy as f64 + 0.5) * self.cell,
        )
    }

    /// Label of the grid cell containing `p`, or None outside the grid.
    pub fn label_at(&self, p: Point2) -> Option<u32> {
        let ix = ((p.x - self.origin.x) / self.cell).floor();
        let iy = ((p.y - self.origin.y) / self.cell).floor();
        if ix < 0.0 || iy < 0.0 {
            return None;
        }
        let (ix, iy) = (ix as usize, iy as usize);
        if ix >= self.nx || iy >= self.ny {
            return None;
        }
        Some(self.label_at_index(ix, iy))
    }

    pub fn bbox(&self) -> Rect {
        Rect::new(
            self.origin,
            Point2::new(
                self.origin.x + self.nx as f64 * self.cell,
                self.origin.y + self.ny as f64 * self.cell,
            ),
        )
    }

    /// Deterministic stratified selection of up to `count` sample centers in
    /// the component, preferring cells at distance >= 2·delta from the
    /// support (the `near` band) and falling back to all component cells when
    /// the component is too thin to contain any.
    pub fn sample_points(&self, label: u32, count: usize) -> Vec<Point2> {
        let eligible: Vec<usize> = (0..self.labels.len())
            .filter(|&i| self.labels[i] == label && !self.near[i])
            .collect();
        let pool = if eligible.is_empty() {
            (0..self.labels.len())
                .filter(|&i| self.labels[i] == label)
                .collect()
        } else {
            eligible
        };
        if pool.is_empty() {
            return Vec::new();
        }
        let stride = (pool.len() / count.max(1)).max(1);
        pool.iter()
            .step_by(stride)
            .take(count)
            .map(|&i| self.cell_center(i % self.nx, i / self.nx))
            .collect()
    }
}

/// Builds the component map of `supp(J)^c` at `resolution x resolution` cells
/// with the support dilated by `delta_diagonals` grid diagonals.
pub fn component_map(j: &Chain1, resolution: usize, delta_diagonals: f64) -> Result<ComponentMap> {
    if j.is_zero() {
        return Err(Error::EmptyChain);
    }
    if resolution < 8 {
        return Err(Error::ResolutionTooCoarse { resolution });
    }
    let support = j.support();
    let bbox = support.bbox().expect("nonzero chain has a bbox");
    let diameter = bbox.diameter().max(f64::MIN_POSITIVE);
    let side = 2.0 * diameter;
    let center = bbox.center();
    let origin = Point2::new(center.x - 0.5 * side, center.y - 0.5 * side);
    let n = resolution;
    let cell = side / n as f64;
    let delta = delta_diagonals * cell * 2.0f64.sqrt();

    let mut labels = vec![u32::MAX; n * n];
    let mut near = vec![false; n * n];

    // Rasterize the dilated support: for each segment mark grid cells whose
    // center lies within delta (and, in `near`, within 2·delta).
    let wide = 2.0 * delta;
    for &(a, b) in support.segments() {
        let seg_box = Rect::from_points([a, b]).unwrap().pad(wide + cell);
        let ix0 = (((seg_box.min.x - origin.x) / cell).floor().max(0.0)) as usize;
        let iy0 = (((seg_box.min.y - origin.y) / cell).floor().max(0.0)) as usize;
        let ix1 = ((((seg_box.max.x - origin.x) / cell).ceil()) as usize).min(n);
        let iy1 = ((((seg_box.max.y - origin.y) / cell).ceil()) as usize).min(n);
        for iy in iy0..iy1 {
            for ix in ix0..ix1 {
                let idx = iy * n + ix;
                if near[idx] && labels[idx] == 0 {
                    continue;
                }
                let c = Point2::new(
                    origin.x + (ix as f64 + 0.5) * cell,
                    origin.y + (iy as f64 + 0.5) * cell,
                );
                let d = crate::geom::dist_point_segment(c, a, b);
                if d <= delta {
                    labels[idx] = 0;
                    near[idx] = true;
                } else if d <= wide {
                    near[idx] = true;
                }
            }
        }
    }

    if labels.iter().all(|&l| l == 0) {
        return Err(Error::ResolutionTooCoarse { resolution });
    }

    // Flood fill the free cells into 4-connected components, scan order.
    let mut next_label = 0u32;
    let mut unbounded = 0u32;
    let mut queue = std::collections::VecDeque::new();
    for start in 0..labels.len() {
        if labels[start] != u32::MAX {
            continue;
        }
        next_label += 1;
        let this = next_label;
        labels[start] = this;
        queue.push_back(start);
        let mut touches_frame = false;
        while let Some(idx) = queue.pop_front() {
            let (ix, iy) = (idx % n, idx / n);
            if ix == 0 || iy == 0 || ix == n - 1 || iy == n - 1 {
                touches_frame = true;
            }
            let mut push = |jx: usize, jy: usize, labels: &mut Vec<u32>| {
                let jdx = jy * n + jx;
                if labels[jdx] == u32::MAX {
                    labels[jdx] = this;
                    queue.push_back(jdx);
                }
            };
            if ix > 0 {
                push(ix - 1, iy, &mut labels);
            }
            if ix + 1 < n {
                push(ix + 1, iy, &mut labels);
            }
            if iy > 0 {
                push(ix, iy - 1, &mut labels);
            }
            if iy + 1 < n {
                push(ix, iy + 1, &mut labels);
            }
        }
        if touches_frame {
            unbounded = this;
        }
    }

    if next_label == 0 {
        return Err(Error::ResolutionTooCoarse { resolution });
    }

    Ok(ComponentMap {
        labels,
        near,
        nx: n,
        ny: n,
        origin,
        cell,
        delta,
        unbounded,
        n_components: next_label,
    })
}

/// Per-component winding statistics.
#[derive(Debug, Clone, Serialize)]
pub struct ComponentStats {
    pub label: u32,
    pub unbounded: bool,
    pub mean: f64,
    pub spread: f64,
    pub samples: usize,
}

/// Default sample budget per component.
pub const SAMPLES_PER_COMPONENT: usize = 50;

/// Winding sampled at up to `samples` interior points of every component of
/// the map. Requires a closed chain; the winding of a closed chain is
/// constant per component, so the reported spread measures numerical error.
pub fn winding_field(
    j: &Chain1,
    map: &ComponentMap,
    samples: usize,
) -> Result<Vec<ComponentStats>> {
    let boundary_mass = j.boundary().mass();
    let tol = j.closed_tolerance();
    if boundary_mass > tol {
        return Err(Error::NotClosed { boundary_mass, tol });
    }
    let mut out = Vec::new();
    for label in map.component_labels() {
        let points = map.sample_points(label, samples);
        if points.is_empty() {
            continue;
        }
        // Parallel per point, reduced in input order.
        let values: Vec<f64> = points
            .par_iter()
            .map(|&p| winding_number(j, p).map(|w| w.re))
            .collect::<Result<Vec<_>>>()?;
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let spread = values.iter().fold(f64::MIN, |m, &v| m.max(v))
            - values.iter().fold(f64::MAX, |m, &v| m.min(v));
        out.push(ComponentStats {
            label,
            unbounded: label == map.unbounded_label(),
            mean,
            spread,
            samples: values.len(),
        });
    }
    Ok(out)
}
