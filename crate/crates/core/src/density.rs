//! Signed density of a 2-chain at a point and its equality with the winding
//! number of the bounding 1-chain, as runnable checks.
//!
//! The density at `z` is the limit of `areaInDisk(K, z, eps) / (pi eps^2)`.
//! For polyhedral chains the ratio is piecewise smooth in `eps` and constant
//! once the disk avoids every density jump, so three dyadic radii with
//! Richardson extrapolation (order estimated from the ratios) recover the
//! limit; the raw triple is reported alongside.

use crate::chain::{cone, Chain1, Chain2};
use crate::error::{Error, Result};
use crate::geom::{Point2, Rect};
use crate::winding::winding_number;
use serde::Serialize;

/// Raw evaluations backing a density value.
#[derive(Debug, Clone, Serialize)]
pub struct DensityDiagnostics {
    pub radii: [f64; 3],
    pub raw: [f64; 3],
    /// Estimated convergence order, when the differences allow one.
    pub order_estimate: Option<f64>,
    /// Set when a disk boundary grazed a triangle vertex and the radius was
    /// nudged by one part in 1e6.
    pub perturbed: bool,
}

/// Signed density of `K` at `z`, via `areaInDisk` at radii
/// `eps0, eps0/2, eps0/4` and Richardson extrapolation.
pub fn signed_density(k: &Chain2, z: Point2, eps0: f64) -> Result<(f64, DensityDiagnostics)> {
    if !crate::geom::is_positive_finite(eps0) {
        return Err(Error::BadParameter {
            what: format!("density radius must be positive, got {eps0}"),
        });
    }
    let boundary_support = k.boundary().support();
    let d = boundary_support.distance(z);
    if d <= eps0 {
        return Err(Error::PointOnSupport {
            x: z.x,
            y: z.y,
            dist: d,
            exclusion: eps0,
        });
    }

    let mut perturbed = false;
    let radii: Vec<f64> = [eps0, 0.5 * eps0, 0.25 * eps0]
        .iter()
        .map(|&r| {
            let r_adj = avoid_vertex_grazing(k, z, r);
            if r_adj != r {
                perturbed = true;
            }
            r_adj
        })
        .collect();
    let raw: Vec<f64> = radii
        .iter()
        .map(|&r| k.area_in_disk(z, r) / (std::f64::consts::PI * r * r))
        .collect();

    let d01 = raw[1] - raw[0];
    let d12 = raw[2] - raw[1];
    let scale = raw.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let (value, order) = if d12.abs() <= 1e-13 * scale {
        // Already converged; the finest radius is the answer.
        (raw[2], None)
    } else {
        let ratio = d01 / d12;
        if ratio > 1.0 {
            let p = ratio.log2();
            let factor = 2.0f64.powf(p) - 1.0;
            (raw[2] + d12 / factor, Some(p))
        } else {
            // No convergence signal; report the finest value unextrapolated.
            (raw[2], None)
        }
    };

    Ok((
        value,
        DensityDiagnostics {
            radii: [radii[0], radii[1], radii[2]],
            raw: [raw[0], raw[1], raw[2]],
            order_estimate: order,
            perturbed,
        },
    ))
}

/// Nudges `r` by one part in 1e6 while a triangle vertex sits within 1e-12
/// (relative) of the disk boundary; the almost-every-radius caveat of the
/// restriction operator in executable form.
fn avoid_vertex_grazing(k: &Chain2, z: Point2, mut r: f64) -> f64 {
    let tol = 1e-12 * (1.0 + r);
    for _ in 0..8 {
        let grazes = k
            .cells()
            .iter()
            .flat_map(|c| c.vertices())
            .any(|v| (v.dist(z) - r).abs() < tol);
        if !grazes {
            return r;
        }
        r *= 1.0 + 1e-6;
    }
    r
}

/// Report of the density/winding comparison at one point.
#[derive(Debug, Clone, Serialize)]
pub struct DensityWindingReport {
    pub winding: f64,
    pub density: f64,
    pub gap: f64,
    /// Apex used for the cone construction.
    pub apex: [f64; 2],
    pub diagnostics: DensityDiagnostics,
}

/// Builds a cone `K` with `∂K = J` over an apex away from `z` and compares
/// the signed density of `K` at `z` with the winding number of `J` about `z`.
pub fn density_winding_check(j: &Chain1, z: Point2, eps0: f64) -> Result<DensityWindingReport> {
    let boundary_mass = j.boundary().mass();
    let tol = j.closed_tolerance();
    if boundary_mass > tol {
        return Err(Error::NotClosed { boundary_mass, tol });
    }
    let support = j.support();
    let dist = support.distance(z);
    if dist <= 4.0 * eps0 {
        return Err(Error::SupportTooClose {
            x: z.x,
            y: z.y,
            dist,
            required: 4.0 * eps0,
        });
    }
    let apex = pick_apex(j, z, eps0)?;
    let k = cone(apex, j)?;
    let (density, diagnostics) = signed_density(&k, z, eps0)?;
    let winding = winding_number(j, z)?.re;
    Ok(DensityWindingReport {
        winding,
        density,
        gap: (winding - density).abs(),
        apex: [apex.x, apex.y],
        diagnostics,
    })
}

/// Deterministic apex search: walk outward from the support bounding box in
/// sixteen directions until a point works for the cone construction (off the
/// support, not collinear with any cell, outside the ball about `z`).
pub(crate) fn pick_apex(j: &Chain1, z: Point2, eps0: f64) -> Result<Point2> {
    let bbox = j.support().bbox().ok_or(Error::EmptyChain)?;
    let c = bbox.center();
    let d = bbox.diameter().max(1e-9);
    let support = j.support();
    for ring in 1..=6 {
        let radius = 0.75 * d * ring as f64;
        for step in 0..16 {
            let t = 2.0 * std::f64::consts::PI * (step as f64 + 0.37) / 16.0;
            let apex = Point2::new(c.x + radius * t.cos(), c.y + radius * t.sin());
            if apex.dist(z) <= 4.0 * eps0 || support.distance(apex) <= 1e-9 * d {
                continue;
            }
            let collinear = j
                .cells()
                .iter()
                .any(|cell| crate::geom::signed_area(apex, cell.a(), cell.b()) == 0.0);
            if !collinear {
                return Ok(apex);
            }
        }
    }
    Err(Error::BadParameter {
        what: "no usable cone apex found".into(),
    })
}

/// Verdict of the support test: densities sampled over the complement of the
/// cover must vanish.
#[derive(Debug, Clone, Serialize)]
pub struct SupportVerdict {
    pub supported_in_cover: bool,
    pub witness: Option<[f64; 2]>,
    pub max_abs_density: f64,
    pub max_abs_area_probe: f64,
    pub samples: usize,
}

pub const DENSITY_SUPPORT_TOL: f64 = 1e-8;
pub const AREA_PROBE_TOL: f64 = 1e-10;

/// Samples the signed density of `K` on a grid over the complement of the
/// rectangle cover `cover`; the verdict holds when all sampled densities stay
/// below 1e-8 and direct disk-area probes below 1e-10.
pub fn support_from_density(k: &Chain2, cover: &[Rect], grid: usize) -> SupportVerdict {
    let mut verdict = SupportVerdict {
        supported_in_cover: true,
        witness: None,
        max_abs_density: 0.0,
        max_abs_area_probe: 0.0,
        samples: 0,
    };
    if k.is_zero() {
        return verdict;
    }
    let support_box = k.support().bbox().expect("nonzero chain has a bbox");
    let mut region = support_box;
    for r in cover {
        region = region.union(r);
    }
    let region = region.pad(0.05 * region.diameter().max(1e-9));
    let boundary_support = k.boundary().support();

    let n = grid.max(4);
    for iy in 0..n {
        for ix in 0..n {
            let p = Point2::new(
                region.min.x + (ix as f64 + 0.5) * region.width() / n as f64,
                region.min.y + (iy as f64 + 0.5) * region.height() / n as f64,
            );
            if cover.iter().any(|r| r.contains(p)) {
                continue;
            }
            // Density needs clearance from the boundary support; skip the
            // sliver of complement points hugging it.
            let clearance = boundary_support.distance(p);
            let eps0 = (0.45 * clearance).min(0.05 * region.diameter());
            if eps0 <= 1e-12 * region.diameter() || !eps0.is_finite() {
                continue;
            }
            let Ok((density, _)) = signed_density(k, p, eps0) else {
                continue;
            };
            let probe = k.area_in_disk(p, eps0).abs();
            verdict.samples += 1;
            verdict.max_abs_density = verdict.max_abs_density.max(density.abs());
            verdict.max_abs_area_probe = verdict.max_abs_area_probe.max(probe);
            if density.abs() > DENSITY_SUPPORT_TOL || probe > AREA_PROBE_TOL {
                if verdict.supported_in_cover {
                    verdict.witness = Some([p.x, p.y]);
                }
                verdict.supported_in_cover = false;
            }
        }
    }
    verdict
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    fn square_fan(w: f64) -> Chain2 {
        Chain2::from_triangles(&[
            ([p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0)], w),
            ([p(0.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)], w),
        ])
        .unwrap()
    }

    #[test]
    fn density_inside_cone_tiling_is_one() {
        let j = gen::circle_chain(p(0.0, 0.0), 1.0, 64, 1.0).unwrap();
        let k = cone(p(0.0, 0.0), &j).unwrap();
        let (d, diag) = signed_density(&k, p(0.2, 0.1), 0.05).unwrap();
        assert!((d - 1.0).abs() < 1e-12, "density {d}, raw {:?}", diag.raw);
    }

    #[test]
    fn density_outside_support_is_zero() {
        let k = square_fan(1.0);
        let (d, _) = signed_density(&k, p(3.0, 3.0), 0.1).unwrap();
        assert!(d.abs() < 1e-14);
    }

    #[test]
    fn density_scales_with_weights() {
        let k = square_fan(3.0);
        let (d, _) = signed_density(&k, p(0.4, 0.6), 0.05).unwrap();
        assert!((d - 3.0).abs() < 1e-12);
    }

    #[test]
    fn density_is_additive() {
        let k1 = square_fan(1.0);
        let k2 = square_fan(0.75);
        let z = p(0.3, 0.3);
        let (d1, _) = signed_density(&k1, z, 0.05).unwrap();
        let (d2, _) = signed_density(&k2, z, 0.05).unwrap();
        let (dsum, _) = signed_density(&k1.add(&k2), z, 0.05).unwrap();
        assert!((dsum - d1 - d2).abs() < 1e-12);
    }

    #[test]
    fn density_precondition_distance() {
        let k = square_fan(1.0);
        assert!(matches!(
            signed_density(&k, p(0.5, 0.95), 0.2),
            Err(Error::PointOnSupport { .. })
        ));
    }

    #[test]
    fn winding_matches_density_on_polygon() {
        let j = gen::circle_chain(p(0.0, 0.0), 1.0, 64, 1.0).unwrap();
        let r = density_winding_check(&j, p(0.1, 0.0), 0.02).unwrap();
        assert!(r.gap <= 1e-9, "gap {}", r.gap);
        assert!((r.winding - 1.0).abs() < 1e-10);
    }

    #[test]
    fn weighted_chain_scales_both_sides() {
        let j = gen::circle_chain(p(0.0, 0.0), 1.0, 64, 1.0)
            .unwrap()
            .scale(2.5);
        let r = density_winding_check(&j, p(0.05, -0.1), 0.02).unwrap();
        assert!((r.density - 2.5).abs() < 1e-9);
        assert!(r.gap <= 1e-9);
    }

    #[test]
    fn support_verdict_true_when_cover_contains() {
        let k = square_fan(1.0);
        let cover = [Rect::new(p(-0.1, -0.1), p(1.1, 1.1))];
        let v = support_from_density(&k, &cover, 24);
        assert!(v.supported_in_cover, "{v:?}");
        assert!(v.samples > 0);
    }

    #[test]
    fn support_verdict_false_with_witness() {
        let k = square_fan(1.0);
        let cover = [Rect::new(p(-0.1, -0.1), p(0.5, 1.1))];
        let v = support_from_density(&k, &cover, 24);
        assert!(!v.supported_in_cover);
        let w = v.witness.expect("witness point");
        assert!(w[0] > 0.5);
    }
}
