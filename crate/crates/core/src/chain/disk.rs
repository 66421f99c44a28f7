//! Exact area of a triangle clipped to a disk.
//!
//! The intersection area is assembled edge by edge: for each directed edge of
//! the triangle, the signed area of `triangle(center, a, b) ∩ disk` is the sum
//! of straight-triangle pieces (inside the circle) and circular-sector pieces
//! (outside), split at the segment/circle crossings. Summed over a
//! counterclockwise triangle the pieces add up to the clipped area.

use crate::geom::Point2;

/// Signed circular sector area swept from direction `u` to direction `v`
/// (shorter way), for a circle of radius `r` about the origin.
fn sector(u: Point2, v: Point2, r: f64) -> f64 {
    0.5 * r * r * u.cross(v).atan2(u.dot(v))
}

/// Signed area of `triangle(origin, a, b) ∩ disk(origin, r)` where `a`, `b`
/// are given relative to the disk center.
fn edge_contribution(a: Point2, b: Point2, r: f64) -> f64 {
    let r_sq = r * r;
    let a_in = a.norm_sq() <= r_sq;
    let b_in = b.norm_sq() <= r_sq;

    if a_in && b_in {
        return 0.5 * a.cross(b);
    }

    // Segment/circle crossings: |a + t d|^2 = r^2.
    let d = b - a;
    let qa = d.norm_sq();
    let qb = 2.0 * a.dot(d);
    let qc = a.norm_sq() - r_sq;
    let disc = qb * qb - 4.0 * qa * qc;

    if a_in {
        // Leaves the disk once.
        let t = (-qb + disc.sqrt()) / (2.0 * qa);
        let p = a + d.scale(t);
        return 0.5 * a.cross(p) + sector(p, b, r);
    }
    if b_in {
        // Enters the disk once.
        let t = (-qb - disc.sqrt()) / (2.0 * qa);
        let p = a + d.scale(t);
        return sector(a, p, r) + 0.5 * p.cross(b);
    }

    // Both endpoints outside: either the chord cuts through the disk or the
    // whole wedge contributes only a sector.
    if disc > 0.0 {
        let sq = disc.sqrt();
        let t1 = (-qb - sq) / (2.0 * qa);
        let t2 = (-qb + sq) / (2.0 * qa);
        if t1 > 0.0 && t2 < 1.0 && t1 < t2 {
            let p1 = a + d.scale(t1);
            let p2 = a + d.scale(t2);
            return sector(a, p1, r) + 0.5 * p1.cross(p2) + sector(p2, b, r);
        }
    }
    sector(a, b, r)
}

/// Area of the intersection of triangle `(p0, p1, p2)` with the closed disk of
/// radius `r` about `c`. Signed by triangle orientation: counterclockwise
/// triangles yield the (non-negative) geometric area.
pub fn triangle_disk_area(p0: Point2, p1: Point2, p2: Point2, c: Point2, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let a = p0 - c;
    let b = p1 - c;
    let d = p2 - c;
    edge_contribution(a, b, r) + edge_contribution(b, d, r) + edge_contribution(d, a, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    #[test]
    fn disk_inside_triangle() {
        let area = triangle_disk_area(
            p(-10.0, -10.0),
            p(10.0, -10.0),
            p(0.0, 15.0),
            p(0.0, 0.0),
            1.0,
        );
        assert!((area - PI).abs() < 1e-12);
    }

    #[test]
    fn triangle_inside_disk() {
        let area = triangle_disk_area(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0), p(0.2, 0.2), 10.0);
        assert!((area - 0.5).abs() < 1e-14);
    }

    #[test]
    fn disjoint_is_zero() {
        let area = triangle_disk_area(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0), p(10.0, 10.0), 1.0);
        assert!(area.abs() < 1e-12);
    }

    #[test]
    fn quarter_disk_at_right_angle() {
        // Disk centered at the right-angle vertex, small enough to stay inside.
        let area = triangle_disk_area(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0), p(0.0, 0.0), 0.5);
        assert!((area - PI / 16.0).abs() < 1e-13);
    }

    #[test]
    fn half_disk_through_edge() {
        // Disk centered on the hypotenuse-free long edge of a huge triangle:
        // the edge through the center cuts the disk in half.
        let area = triangle_disk_area(
            p(-100.0, 0.0),
            p(100.0, 0.0),
            p(0.0, 100.0),
            p(0.0, 0.0),
            2.0,
        );
        assert!((area - 0.5 * PI * 4.0).abs() < 1e-10);
    }

    #[test]
    fn clockwise_orientation_flips_sign() {
        let ccw = triangle_disk_area(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0), p(0.1, 0.1), 0.05);
        let cw = triangle_disk_area(p(0.0, 0.0), p(0.0, 1.0), p(1.0, 0.0), p(0.1, 0.1), 0.05);
        assert!((ccw + cw).abs() < 1e-15);
        assert!(ccw > 0.0);
    }

    #[test]
    fn chord_through_both_outside_endpoints() {
        // Long thin triangle whose base passes straight through the disk.
        let full = PI * 1.0;
        let area = triangle_disk_area(
            p(-50.0, -1.0),
            p(50.0, -1.0),
            p(0.0, 60.0),
            p(0.0, 0.0),
            1.0,
        );
        // Disk cut at y = -1 with r = 1: the tangent case, nearly the whole disk.
        assert!((area - full).abs() < 1e-6);
        // Now cut through the middle: half disk remains above y = 0.
        let half = triangle_disk_area(p(-50.0, 0.0), p(50.0, 0.0), p(0.0, 60.0), p(0.0, 0.0), 1.0);
        assert!((half - 0.5 * full).abs() < 1e-10);
    }
}
