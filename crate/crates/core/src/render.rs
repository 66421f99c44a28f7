//! Deterministic SVG and CSV emitters: chain drawings, winding heatmaps over
//! a component map, and density rasters over a window.

use crate::chain::{Chain1, Chain2};
use crate::density::signed_density;
use crate::geom::{Point2, Rect};
use crate::winding::{ComponentMap, ComponentStats};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt::Write as _;

const SVG_SIZE: f64 = 800.0;

struct Frame {
    bbox: Rect,
    scale: f64,
}

impl Frame {
    fn new(bbox: Rect) -> Frame {
        let extent = bbox.width().max(bbox.height()).max(1e-12);
        Frame {
            bbox,
            scale: SVG_SIZE / extent,
        }
    }

    fn x(&self, p: Point2) -> f64 {
        (p.x - self.bbox.min.x) * self.scale
    }

    /// SVG y grows downward.
    fn y(&self, p: Point2) -> f64 {
        (self.bbox.max.y - p.y) * self.scale
    }
}

fn svg_header(out: &mut String, width: f64, height: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.2} {height:.2}">"#
    );
}

/// Draw 1-chains as line segments. Positive weights render blue, negative
/// red, with stroke width scaled by |weight|.
pub fn chain_svg(chains: &[&Chain1]) -> String {
    let bbox = chains
        .iter()
        .filter_map(|j| j.support().bbox())
        .reduce(|a, b| a.union(&b))
        .unwrap_or(Rect::new(Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)));
    let bbox = bbox.pad(0.05 * bbox.diameter().max(1e-9));
    let f = Frame::new(bbox);
    let height = bbox.height() * f.scale;
    let width = bbox.width() * f.scale;

    let max_w = chains
        .iter()
        .flat_map(|j| j.cells())
        .map(|c| c.w().abs())
        .fold(0.0f64, f64::max)
        .max(1e-12);

    let mut out = String::new();
    svg_header(&mut out, width, height);
    for j in chains {
        for c in j.cells() {
            let color = if c.w() >= 0.0 { "#2166ac" } else { "#b2182b" };
            let sw = 0.5 + 2.0 * c.w().abs() / max_w;
            let _ = writeln!(
                out,
                r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{}" stroke-width="{:.2}"/>"#,
                f.x(c.a()),
                f.y(c.a()),
                f.x(c.b()),
                f.y(c.b()),
                color,
                sw
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Diverging blue-white-red colormap over [-vmax, vmax].
fn diverging_color(v: f64, vmax: f64) -> String {
    let t = if vmax > 0.0 {
        (v / vmax).clamp(-1.0, 1.0)
    } else {
        0.0
    };
    let (r, g, b) = if t >= 0.0 {
        let u = t;
        (
            (255.0 - 77.0 * u) as u8,
            (255.0 - 153.0 * u) as u8,
            (255.0 - 83.0 * u) as u8,
        )
    } else {
        let u = -t;
        (
            (255.0 - 222.0 * u) as u8,
            (255.0 - 153.0 * u) as u8,
            (255.0 - 83.0 * u) as u8,
        )
    };
    format!("#{r:02x}{g:02x}{b:02x}")
}

/// Heatmap of per-component values over a component map. Cells of the support
/// band render gray; horizontal runs of equal color merge into single rects.
pub fn component_heatmap_svg(map: &ComponentMap, values: &BTreeMap<u32, f64>) -> String {
    let (nx, ny) = map.resolution();
    let bbox = map.bbox();
    let f = Frame::new(bbox);
    let width = bbox.width() * f.scale;
    let height = bbox.height() * f.scale;
    let cell_px = width / nx as f64;

    let vmax = values.values().fold(0.0f64, |m, &v| m.max(v.abs()));
    let mut out = String::new();
    svg_header(&mut out, width, height);
    let _ = writeln!(
        out,
        r##"<rect x="0" y="0" width="{width:.2}" height="{height:.2}" fill="#ffffff"/>"##
    );
    for iy in 0..ny {
        let mut run_start = 0usize;
        let mut run_color: Option<String> = None;
        for ix in 0..=nx {
            let color = if ix < nx {
                let label = map.label_at_index(ix, iy);
                if label == ComponentMap::SUPPORT {
                    Some("#555555".to_string())
                } else {
                    values.get(&label).map(|&v| diverging_color(v, vmax))
                }
            } else {
                None
            };
            if color != run_color {
                if let Some(c) = run_color.take() {
                    if c != "#ffffff" {
                        let x = run_start as f64 * cell_px;
                        let y = (ny - 1 - iy) as f64 * cell_px;
                        let w = (ix - run_start) as f64 * cell_px;
                        let _ = writeln!(
                            out,
                            r#"<rect x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{cell_px:.2}" fill="{c}"/>"#
                        );
                    }
                }
                run_start = ix;
                run_color = color;
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

/// CSV of winding statistics: component id, mean, spread, samples, unbounded.
pub fn winding_csv(stats: &[ComponentStats]) -> String {
    let mut out = String::from("component,mean,spread,samples,unbounded\n");
    for s in stats {
        let _ = writeln!(
            out,
            "{},{:.12e},{:.3e},{},{}",
            s.label, s.mean, s.spread, s.samples, s.unbounded
        );
    }
    out
}

/// Signed densities of `k` sampled on an `n x n` grid over `window`. Points
/// too close to the boundary support for a valid evaluation carry NaN.
pub fn density_raster(k: &Chain2, window: Rect, n: usize) -> Vec<(Point2, f64)> {
    let boundary_support = k.boundary().support();
    let cell_w = window.width() / n as f64;
    let cell_h = window.height() / n as f64;
    // Parallel over points, collected in scan order.
    (0..n * n)
        .into_par_iter()
        .map(|i| {
            let (ix, iy) = (i % n, i / n);
            let p = Point2::new(
                window.min.x + (ix as f64 + 0.5) * cell_w,
                window.min.y + (iy as f64 + 0.5) * cell_h,
            );
            let clearance = boundary_support.distance(p);
            let eps0 = (0.45 * clearance).min(0.25 * cell_w.min(cell_h));
            let value = if eps0 > 1e-12 * window.diameter() {
                signed_density(k, p, eps0)
                    .map(|(d, _)| d)
                    .unwrap_or(f64::NAN)
            } else {
                f64::NAN
            };
            (p, value)
        })
        .collect()
}

/// CSV of a density raster: x, y, density (NaN where not evaluable).
pub fn density_csv(raster: &[(Point2, f64)]) -> String {
    let mut out = String::from("x,y,density\n");
    for (p, v) in raster {
        let _ = writeln!(out, "{:.12e},{:.12e},{:.12e}", p.x, p.y, v);
    }
    out
}

/// SVG heatmap of a density raster over its window.
pub fn density_svg(raster: &[(Point2, f64)], window: Rect, n: usize) -> String {
    let f = Frame::new(window);
    let width = window.width() * f.scale;
    let height = window.height() * f.scale;
    let cell_px_x = width / n as f64;
    let cell_px_y = height / n as f64;
    let vmax = raster
        .iter()
        .filter(|(_, v)| v.is_finite())
        .fold(0.0f64, |m, &(_, v)| m.max(v.abs()));

    let mut out = String::new();
    svg_header(&mut out, width, height);
    for (i, (_, v)) in raster.iter().enumerate() {
        let ix = i % n;
        let iy = i / n;
        let color = if v.is_finite() {
            diverging_color(*v, vmax)
        } else {
            "#555555".to_string()
        };
        let x = ix as f64 * cell_px_x;
        let y = (n - 1 - iy) as f64 * cell_px_y;
        let _ = writeln!(
            out,
            r#"<rect x="{x:.2}" y="{y:.2}" width="{cell_px_x:.2}" height="{cell_px_y:.2}" fill="{color}"/>"#
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    #[test]
    fn chain_svg_is_deterministic_and_wellformed() {
        let j = gen::koch_chain(1).unwrap();
        let a = chain_svg(&[&j]);
        let b = chain_svg(&[&j]);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.trim_end().ends_with("</svg>"));
        assert_eq!(a.matches("<line").count(), j.cells().len());
    }

    #[test]
    fn heatmap_renders_components() {
        let j = gen::circle_chain(Point2::new(0.0, 0.0), 1.0, 32, 1.0).unwrap();
        let map = crate::winding::component_map(&j, 64, 2.0).unwrap();
        let mut values = BTreeMap::new();
        for label in map.component_labels() {
            values.insert(
                label,
                if label == map.unbounded_label() {
                    0.0
                } else {
                    1.0
                },
            );
        }
        let svg = component_heatmap_svg(&map, &values);
        assert!(svg.contains("<rect"));
    }

    #[test]
    fn density_raster_sees_the_fan() {
        let j = gen::staircase_chain(1).unwrap();
        let k = crate::chain::cone(Point2::new(0.5, 0.5), &j).unwrap();
        let window = Rect::new(Point2::new(-0.5, -0.5), Point2::new(1.5, 1.5));
        let raster = density_raster(&k, window, 16);
        let inside = raster
            .iter()
            .find(|(p, _)| p.dist(Point2::new(0.4, 0.4)) < 0.1)
            .unwrap();
        assert!((inside.1 - 1.0).abs() < 1e-9);
        let csv = density_csv(&raster);
        assert!(csv.lines().count() == 16 * 16 + 1);
    }
}
