//! Conversion of a polyhedral 1-chain with small boundary into an exactly
//! closed chain supported away from a prescribed ball.
//!
//! Given a center `z` with `dist(z, supp K) >= 4·eps`, each cell is split to
//! length at most `1/j`, radially projected onto the circle of radius `2·eps`
//! about `z` (arcs replaced by chords of angle at most `theta_max`, which keeps
//! them at distance `2·eps·cos(theta_max/2) > eps` from `z`), and closed up
//! with radial segments joining every surviving boundary atom to its
//! projection. The winding number `a` of the projected chain about `z` is then
//! restored as a regular polygon of radius `2·eps` with weight `a`. The output
//!
//!   P = K_split - chords(K_split) + radials + a·(n-gon)
//!
//! has exactly vanishing boundary (all endpoint atoms cancel bit for bit) and
//! integrates like `K` against holomorphic forms when `K` was already closed.

use crate::chain::{Cell1, Chain1};
use crate::error::{Error, Result};
use crate::forms::{integrate_form, HoloFn, QuadratureSpec};
use crate::gen::circle_chain;
use crate::geom::Point2;
use crate::winding::winding_number_unchecked;
use serde::Serialize;

/// Parameters of the closure construction.
#[derive(Debug, Clone)]
pub struct ClosureParams {
    /// Excluded center.
    pub z: Point2,
    /// Exclusion scale; the projection circle has radius `2·eps` and the
    /// input support must stay `4·eps` away from `z`.
    pub eps: f64,
    /// Subdivision index: cells are split to length at most `1/j`.
    pub j: u32,
    /// Largest arc angle replaced by a single chord.
    pub theta_max: f64,
    /// Resolution of the regular polygon standing in for the circle term.
    pub ngon_n: usize,
}

impl ClosureParams {
    pub fn new(z: Point2, eps: f64) -> Self {
        ClosureParams {
            z,
            eps,
            j: 1,
            theta_max: std::f64::consts::FRAC_PI_4,
            ngon_n: 64,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !crate::geom::is_positive_finite(self.eps) {
            return Err(Error::BadParameter {
                what: format!("closure eps must be positive, got {}", self.eps),
            });
        }
        if self.j < 1 {
            return Err(Error::BadParameter {
                what: "closure subdivision index must be >= 1".into(),
            });
        }
        if !(self.theta_max > 0.0 && self.theta_max <= std::f64::consts::FRAC_PI_3) {
            return Err(Error::BadParameter {
                what: format!("theta_max must be in (0, pi/3], got {}", self.theta_max),
            });
        }
        if self.ngon_n < 8 {
            return Err(Error::BadParameter {
                what: format!("ngon_n must be >= 8, got {}", self.ngon_n),
            });
        }
        Ok(())
    }
}

/// Radial projection of `w` onto the circle of radius `2·eps` about `z`.
pub fn project_to_circle(z: Point2, eps: f64, w: Point2) -> Result<Point2> {
    let d = w - z;
    let n = d.norm();
    if n == 0.0 {
        return Err(Error::ProjectCenter);
    }
    Ok(z + d.scale(2.0 * eps / n))
}

/// Numbers reported by a closure run.
#[derive(Debug, Clone, Serialize)]
pub struct ClosureReport {
    /// Coefficient of the restored circle term: the winding number of the
    /// projected chain about `z` (real, never rounded).
    pub a: f64,
    pub boundary_mass_before: f64,
    pub boundary_mass_after: f64,
    /// Mass of the radial (cone) segments.
    pub cone_mass: f64,
    /// The cone mass estimate `2·R·mass(∂K_split)` with `R` the farthest
    /// support point from `z`.
    #[serde(rename = "bound_2R_times_boundary")]
    pub bound_2r_times_boundary: f64,
    pub min_dist_to_z: f64,
}

/// Closes `k` away from the ball around `params.z`. Empty input returns the
/// empty chain with `a = 0`.
pub fn close_chain(k: &Chain1, params: &ClosureParams) -> Result<(Chain1, ClosureReport)> {
    params.validate()?;
    let z = params.z;
    let eps = params.eps;

    if k.is_zero() {
        return Ok((
            Chain1::zero(),
            ClosureReport {
                a: 0.0,
                boundary_mass_before: 0.0,
                boundary_mass_after: 0.0,
                cone_mass: 0.0,
                bound_2r_times_boundary: 0.0,
                min_dist_to_z: f64::INFINITY,
            },
        ));
    }

    let support = k.support();
    let dist = support.distance(z);
    if dist < 4.0 * eps {
        return Err(Error::SupportTooClose {
            x: z.x,
            y: z.y,
            dist,
            required: 4.0 * eps,
        });
    }

    // Step 1: split cells to length <= 1/j, reusing split points so boundary
    // atoms of adjacent pieces cancel exactly.
    let max_len = 1.0 / params.j as f64;
    let mut split_cells: Vec<Cell1> = Vec::new();
    for cell in k.cells() {
        let pieces = (cell.length() / max_len).ceil().max(1.0) as usize;
        let mut points = Vec::with_capacity(pieces + 1);
        points.push(cell.a());
        for i in 1..pieces {
            let t = i as f64 / pieces as f64;
            points.push(cell.a() + (cell.b() - cell.a()).scale(t));
        }
        points.push(cell.b());
        for pair in points.windows(2) {
            split_cells.push(Cell1::new(pair[0], pair[1], cell.w())?);
        }
    }
    let split = Chain1::new(split_cells);

    // Step 2: chord replacement of the radial projection of every split cell.
    let mut projected_cells: Vec<Cell1> = Vec::new();
    for cell in split.cells() {
        let pa = project_to_circle(z, eps, cell.a())?;
        let pb = project_to_circle(z, eps, cell.b())?;
        if pa == pb {
            continue;
        }
        let u = cell.a() - z;
        let v = cell.b() - z;
        let dtheta = u.cross(v).atan2(u.dot(v));
        let arcs = (dtheta.abs() / params.theta_max).ceil().max(1.0) as usize;
        let theta0 = u.y.atan2(u.x);
        let mut prev = pa;
        for i in 1..=arcs {
            let q = if i == arcs {
                pb
            } else {
                let t = theta0 + dtheta * i as f64 / arcs as f64;
                z + Point2::new(t.cos(), t.sin()).scale(2.0 * eps)
            };
            if q != prev {
                projected_cells.push(Cell1::new(prev, q, cell.w())?);
            }
            prev = q;
        }
    }
    let projected = Chain1::new(projected_cells);

    // Step 3: radial segments joining every surviving boundary atom to its
    // projection; this is the coalesced form of the per-cell q/p cells, so
    // opposite radials of adjacent cells never appear at all.
    let split_boundary = split.boundary();
    let mut radial_cells: Vec<Cell1> = Vec::new();
    let mut cone_mass = 0.0;
    for &(pt, c) in split_boundary.atoms() {
        let proj = project_to_circle(z, eps, pt)?;
        if proj == pt {
            continue;
        }
        cone_mass += c.abs() * pt.dist(proj);
        radial_cells.push(Cell1::new(pt, proj, c)?);
    }

    // Step 4: winding coefficient of the projected chain and its polygon.
    let a = winding_number_unchecked(&projected, z).re;

    let mut out = split.cells().to_vec();
    out.extend(projected.cells().iter().map(|c| c.reversed()));
    out.extend(radial_cells);
    let mut result = Chain1::new(out);
    if a != 0.0 {
        result = result.add(&circle_chain(z, 2.0 * eps, params.ngon_n, a)?);
    }

    let r_max = support.max_distance(z);
    let report = ClosureReport {
        a,
        boundary_mass_before: k.boundary().mass(),
        boundary_mass_after: result.boundary().mass(),
        cone_mass,
        bound_2r_times_boundary: 2.0 * r_max * split_boundary.mass(),
        min_dist_to_z: result.support().distance(z),
    };
    Ok((result, report))
}

/// Report of a closure sequence run: the per-element reports and, against a
/// fixed test form, the Cauchy differences of consecutive integrals.
#[derive(Debug, Clone, Serialize)]
pub struct SequenceReport {
    pub reports: Vec<ClosureReport>,
    pub cauchy_diffs: Vec<f64>,
}

/// Elementwise closure with tightening subdivision `j = 1, 2, ...` following
/// the element index.
pub fn closure_sequence(
    ks: &[Chain1],
    params: &ClosureParams,
    test_form: &HoloFn,
    quad: &QuadratureSpec,
) -> Result<(Vec<Chain1>, SequenceReport)> {
    let mut chains = Vec::with_capacity(ks.len());
    let mut reports = Vec::with_capacity(ks.len());
    for (i, k) in ks.iter().enumerate() {
        let p = ClosureParams {
            j: (i + 1) as u32,
            ..params.clone()
        };
        let (chain, report) = close_chain(k, &p).map_err(|e| Error::SequenceElement {
            index: i,
            source: Box::new(e),
        })?;
        chains.push(chain);
        reports.push(report);
    }
    let mut integrals = Vec::with_capacity(chains.len());
    for (i, chain) in chains.iter().enumerate() {
        let v = integrate_form(chain, test_form, quad).map_err(|e| Error::SequenceElement {
            index: i,
            source: Box::new(e),
        })?;
        integrals.push(v);
    }
    let cauchy_diffs = integrals.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    Ok((
        chains,
        SequenceReport {
            reports,
            cauchy_diffs,
        },
    ))
}
