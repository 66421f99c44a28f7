//! Complex 1-forms `f(z) dz`, their evaluation model, and adaptive quadrature
//! over 1-chains and 2-chains.
//!
//! A form is integrated cell by cell: on a segment the integrand is
//! `f(a + t(b-a))·(b-a)` on the unit parameter interval, handled by
//! Gauss-Legendre panels with adaptive bisection; on a triangle a symmetric
//! degree-5 rule with adaptive 4-way subdivision. Both accept a panel when the
//! refined estimate moves by no more than `atol + rtol·|running total|`.

mod gauss;
mod registry;

pub use registry::{
    named_exp, named_sin, one_over_z_minus, parse_function_spec, poly_real, rational_factored,
    rational_poly, verification_forms,
};

use crate::chain::{Chain1, Chain2};
use crate::error::{Error, Result};
use crate::geom::{Complex, Point2};
use std::sync::Arc;

/// Relative factor for the singularity exclusion radius around a chain.
pub const EXCLUSION_REL: f64 = 1e-9;

/// An evaluatable complex function with a declared singularity set. The
/// evaluator is expected to be finite away from the declared singularities;
/// no derivative is supplied, derivative needs use finite differences.
#[derive(Clone)]
pub struct HoloFn {
    label: String,
    singularities: Vec<Point2>,
    eval: Arc<dyn Fn(Complex) -> Complex + Send + Sync>,
}

impl std::fmt::Debug for HoloFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HoloFn")
            .field("label", &self.label)
            .field("singularities", &self.singularities)
            .finish()
    }
}

impl HoloFn {
    pub fn new<F>(label: impl Into<String>, singularities: Vec<Point2>, eval: F) -> Self
    where
        F: Fn(Complex) -> Complex + Send + Sync + 'static,
    {
        HoloFn {
            label: label.into(),
            singularities,
            eval: Arc::new(eval),
        }
    }

    pub fn eval(&self, z: Complex) -> Complex {
        (self.eval)(z)
    }

    pub fn eval_point(&self, p: Point2) -> Complex {
        (self.eval)(p.into())
    }

    pub fn singularities(&self) -> &[Point2] {
        &self.singularities
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// Panel order, tolerances and recursion bound for the adaptive integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Gauss-Legendre node count per panel.
    pub order: usize,
    pub atol: f64,
    pub rtol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            order: 16,
            atol: 1e-12,
            rtol: 1e-10,
            max_depth: 30,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.order < 2 {
            return Err(Error::BadParameter {
                what: format!("quadrature order must be >= 2, got {}", self.order),
            });
        }
        if !crate::geom::is_positive_finite(self.atol)
            || !crate::geom::is_positive_finite(self.rtol)
        {
            return Err(Error::BadParameter {
                what: "quadrature tolerances must be positive".into(),
            });
        }
        if self.max_depth < 1 {
            return Err(Error::BadParameter {
                what: "quadrature max depth must be >= 1".into(),
            });
        }
        Ok(())
    }
}

/// Exclusion radius for a chain: `1e-9` times its bounding-box diameter.
pub fn exclusion_radius(j: &Chain1) -> f64 {
    j.support()
        .bbox()
        .map(|b| EXCLUSION_REL * b.diameter())
        .unwrap_or(0.0)
}

/// Pre-flight check that every declared singularity keeps its distance from
/// the chain support.
fn check_singularities(j: &Chain1, f: &HoloFn) -> Result<()> {
    if j.is_zero() || f.singularities.is_empty() {
        return Ok(());
    }
    let exclusion = exclusion_radius(j);
    for s in &f.singularities {
        let mut best = f64::INFINITY;
        let mut best_cell = 0;
        for (i, cell) in j.cells().iter().enumerate() {
            let d = crate::geom::dist_point_segment(*s, cell.a(), cell.b());
            if d < best {
                best = d;
                best_cell = i;
            }
        }
        if best <= exclusion {
            return Err(Error::singularity_on_support(
                *s, best, best_cell, exclusion,
            ));
        }
    }
    Ok(())
}

/// Integral of the complex 1-form `f(z) dz` over a 1-chain.
pub fn integrate_form(j: &Chain1, f: &HoloFn, spec: &QuadratureSpec) -> Result<Complex> {
    spec.validate()?;
    check_singularities(j, f)?;
    let rule = gauss::legendre_rule(spec.order);
    let mut total = Complex::ZERO;
    for (ci, cell) in j.cells().iter().enumerate() {
        let a: Complex = cell.a().into();
        let d: Complex = (cell.b() - cell.a()).into();
        let g = |t: f64| f.eval(a + d * t) * d;
        let val = adaptive_segment(&g, &rule, spec, ci, total.abs())?;
        total = total + val * cell.w();
    }
    Ok(total)
}

fn gl_panel<G: Fn(f64) -> Complex>(g: &G, rule: &[(f64, f64)], t0: f64, t1: f64) -> Complex {
    let mid = 0.5 * (t0 + t1);
    let half = 0.5 * (t1 - t0);
    let mut acc = Complex::ZERO;
    for &(x, w) in rule {
        acc = acc + g(mid + half * x) * w;
    }
    acc * half
}

fn adaptive_segment<G: Fn(f64) -> Complex>(
    g: &G,
    rule: &[(f64, f64)],
    spec: &QuadratureSpec,
    cell: usize,
    running_abs: f64,
) -> Result<Complex> {
    let whole = gl_panel(g, rule, 0.0, 1.0);
    segment_rec(
        g,
        rule,
        spec,
        cell,
        0.0,
        1.0,
        whole,
        0,
        spec.atol,
        running_abs,
    )
}

#[allow(clippy::too_many_arguments)]
fn segment_rec<G: Fn(f64) -> Complex>(
    g: &G,
    rule: &[(f64, f64)],
    spec: &QuadratureSpec,
    cell: usize,
    t0: f64,
    t1: f64,
    one_panel: Complex,
    depth: u32,
    atol: f64,
    running_abs: f64,
) -> Result<Complex> {
    let tm = 0.5 * (t0 + t1);
    let left = gl_panel(g, rule, t0, tm);
    let right = gl_panel(g, rule, tm, t1);
    let two_half = left + right;
    let err = (two_half - one_panel).abs();
    if err <= atol + spec.rtol * running_abs {
        return Ok(two_half);
    }
    if depth + 1 >= spec.max_depth {
        return Err(Error::max_depth(
            spec.max_depth,
            cell,
            t0,
            t1,
            err,
            two_half,
        ));
    }
    let l = segment_rec(
        g,
        rule,
        spec,
        cell,
        t0,
        tm,
        left,
        depth + 1,
        0.5 * atol,
        running_abs,
    )?;
    let r = segment_rec(
        g,
        rule,
        spec,
        cell,
        tm,
        t1,
        right,
        depth + 1,
        0.5 * atol,
        running_abs,
    )?;
    Ok(l + r)
}

/// Integral of a complex density `g dA` over a 2-chain, with the weighted
/// counterclockwise orientation of the cells.
pub fn integrate_area<G>(k: &Chain2, g: G, spec: &QuadratureSpec) -> Result<Complex>
where
    G: Fn(Point2) -> Complex,
{
    spec.validate()?;
    let rule = gauss::triangle_rule();
    let mut total = Complex::ZERO;
    for (ci, cell) in k.cells().iter().enumerate() {
        let [p0, p1, p2] = cell.vertices();
        let val = adaptive_triangle(
            &g,
            &rule,
            spec,
            ci,
            p0,
            p1,
            p2,
            tri_panel(&g, &rule, p0, p1, p2),
            0,
            spec.atol,
            total.abs(),
        )?;
        total = total + val * cell.w();
    }
    Ok(total)
}

fn tri_panel<G: Fn(Point2) -> Complex>(
    g: &G,
    rule: &[([f64; 3], f64); 7],
    p0: Point2,
    p1: Point2,
    p2: Point2,
) -> Complex {
    let area = crate::geom::signed_area(p0, p1, p2).abs();
    let mut acc = Complex::ZERO;
    for &([l0, l1, l2], w) in rule.iter() {
        let q = Point2::new(
            l0 * p0.x + l1 * p1.x + l2 * p2.x,
            l0 * p0.y + l1 * p1.y + l2 * p2.y,
        );
        acc = acc + g(q) * w;
    }
    acc * area
}

#[allow(clippy::too_many_arguments)]
fn adaptive_triangle<G: Fn(Point2) -> Complex>(
    g: &G,
    rule: &[([f64; 3], f64); 7],
    spec: &QuadratureSpec,
    cell: usize,
    p0: Point2,
    p1: Point2,
    p2: Point2,
    one_panel: Complex,
    depth: u32,
    atol: f64,
    running_abs: f64,
) -> Result<Complex> {
    let m01 = (p0 + p1).scale(0.5);
    let m12 = (p1 + p2).scale(0.5);
    let m20 = (p2 + p0).scale(0.5);
    let children = [
        (p0, m01, m20),
        (m01, p1, m12),
        (m20, m12, p2),
        (m01, m12, m20),
    ];
    let estimates: Vec<Complex> = children
        .iter()
        .map(|&(a, b, c)| tri_panel(g, rule, a, b, c))
        .collect();
    let refined: Complex = estimates.iter().copied().sum();
    let err = (refined - one_panel).abs();
    if err <= atol + spec.rtol * running_abs {
        return Ok(refined);
    }
    if depth + 1 >= spec.max_depth {
        return Err(Error::max_depth(
            spec.max_depth,
            cell,
            0.0,
            0.0,
            err,
            refined,
        ));
    }
    let mut acc = Complex::ZERO;
    for (child, est) in children.iter().zip(estimates) {
        acc = acc
            + adaptive_triangle(
                g,
                rule,
                spec,
                cell,
                child.0,
                child.1,
                child.2,
                est,
                depth + 1,
                0.25 * atol,
                running_abs,
            )?;
    }
    Ok(acc)
}

/// Residual of the Cauchy-Riemann equations for `f = u + iv` at `z`, by
/// central differences of step `h`: `max(|u_x - v_y|, |u_y + v_x|)`.
/// Vanishes to O(h^2) where `f` is holomorphic.
pub fn cauchy_riemann_residual(f: &HoloFn, z: Point2, h: f64) -> Result<f64> {
    if !crate::geom::is_positive_finite(h) {
        return Err(Error::BadParameter {
            what: format!("finite-difference step must be positive, got {h}"),
        });
    }
    for s in f.singularities() {
        if s.dist(z) <= 2.0 * h {
            return Err(Error::StencilOnSingularity { x: z.x, y: z.y });
        }
    }
    let fe = |p: Point2| f.eval_point(p);
    let right = fe(Point2::new(z.x + h, z.y));
    let left = fe(Point2::new(z.x - h, z.y));
    let up = fe(Point2::new(z.x, z.y + h));
    let down = fe(Point2::new(z.x, z.y - h));
    if !(right.is_finite() && left.is_finite() && up.is_finite() && down.is_finite()) {
        return Err(Error::StencilOnSingularity { x: z.x, y: z.y });
    }
    let ux = (right.re - left.re) / (2.0 * h);
    let vx = (right.im - left.im) / (2.0 * h);
    let uy = (up.re - down.re) / (2.0 * h);
    let vy = (up.im - down.im) / (2.0 * h);
    Ok((ux - vy).abs().max((uy + vx).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::Chain1;
    use std::f64::consts::PI;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    fn poly(coeffs: &[f64]) -> HoloFn {
        registry::poly_real(coeffs)
    }

    #[test]
    fn constant_over_unit_segment() {
        let j = Chain1::from_segments(&[(p(0.0, 0.0), p(1.0, 0.0), 1.0)]).unwrap();
        let f = HoloFn::new("one", vec![], |_| Complex::ONE);
        let v = integrate_form(&j, &f, &QuadratureSpec::default()).unwrap();
        assert!((v.re - 1.0).abs() < 1e-14);
        assert!(v.im.abs() < 1e-14);
    }

    #[test]
    fn one_over_z_around_polygon() {
        let j = crate::gen::circle_chain(p(0.0, 0.0), 1.0, 64, 1.0).unwrap();
        let f = registry::one_over_z_minus(p(0.0, 0.0));
        let v = integrate_form(&j, &f, &QuadratureSpec::default()).unwrap();
        assert!(v.re.abs() < 1e-10, "re = {}", v.re);
        assert!((v.im - 2.0 * PI).abs() < 1e-10, "im = {}", v.im);
    }

    #[test]
    fn entire_function_over_closed_square_vanishes() {
        let j = Chain1::from_segments(&[
            (p(-1.0, -1.0), p(1.0, -1.0), 1.0),
            (p(1.0, -1.0), p(1.0, 1.0), 1.0),
            (p(1.0, 1.0), p(-1.0, 1.0), 1.0),
            (p(-1.0, 1.0), p(-1.0, -1.0), 1.0),
        ])
        .unwrap();
        let f = poly(&[0.0, 0.0, 1.0]); // z^2
        let v = integrate_form(&j, &f, &QuadratureSpec::default()).unwrap();
        assert!(v.abs() < 1e-12, "|v| = {}", v.abs());
    }

    #[test]
    fn linearity_in_the_chain_and_the_form() {
        let a = Chain1::from_segments(&[(p(0.0, 0.0), p(1.0, 2.0), 1.3)]).unwrap();
        let b = Chain1::from_segments(&[(p(1.0, 2.0), p(-1.0, 0.5), -0.4)]).unwrap();
        let f = poly(&[1.0, 2.0, 3.0]);
        let q = QuadratureSpec::default();
        let lhs = integrate_form(&a.add(&b), &f, &q).unwrap();
        let rhs = integrate_form(&a, &f, &q).unwrap() + integrate_form(&b, &f, &q).unwrap();
        assert!((lhs - rhs).abs() < 1e-13);

        let g = poly(&[-0.5, 0.0, 0.0, 2.0]);
        let fg = poly(&[0.5, 2.0, 3.0, 2.0]);
        let sum = integrate_form(&a, &f, &q).unwrap() + integrate_form(&a, &g, &q).unwrap();
        let joint = integrate_form(&a, &fg, &q).unwrap();
        assert!((sum - joint).abs() < 1e-13);
    }

    #[test]
    fn pushforward_identity_integrates_identically() {
        let j = crate::gen::koch_chain(1).unwrap();
        let same = j.pushforward(|q| q, 0.05).unwrap();
        let f = poly(&[0.2, -1.0, 0.0, 0.7]);
        let q = QuadratureSpec::default();
        let before = integrate_form(&j, &f, &q).unwrap();
        let after = integrate_form(&same, &f, &q).unwrap();
        assert!((before - after).abs() < 1e-12);
    }

    #[test]
    fn reversal_negates() {
        let j = crate::gen::circle_chain(p(0.3, -0.2), 2.0, 17, 1.0).unwrap();
        let f = registry::named_exp();
        let q = QuadratureSpec::default();
        let fwd = integrate_form(&j, &f, &q).unwrap();
        let back = integrate_form(&j.reverse(), &f, &q).unwrap();
        assert!((fwd + back).abs() < 1e-12);
    }

    #[test]
    fn max_depth_carries_partial_estimate_and_worst_panel() {
        // Near-singular integrand the pre-flight cannot see (undeclared pole)
        // with a depth budget too small to resolve it.
        let j = Chain1::from_segments(&[(p(-1.0, 0.0), p(1.0, 0.0), 1.0)]).unwrap();
        let f = HoloFn::new("hidden pole", vec![], |z: Complex| {
            (z - Complex::new(0.0, 1e-9)).recip()
        });
        let spec = QuadratureSpec {
            max_depth: 4,
            ..Default::default()
        };
        match integrate_form(&j, &f, &spec) {
            Err(Error::MaxDepthExceeded {
                max_depth,
                cell,
                t0,
                t1,
                ..
            }) => {
                assert_eq!(max_depth, 4);
                assert_eq!(cell, 0);
                // the worst panel brackets the hidden pole at t = 0.5
                assert!(t0 <= 0.5 && 0.5 <= t1, "panel [{t0}, {t1}]");
            }
            other => panic!("expected MaxDepthExceeded, got {other:?}"),
        }
    }

    #[test]
    fn singularity_on_support_is_rejected() {
        let j = Chain1::from_segments(&[(p(-1.0, 0.0), p(1.0, 0.0), 1.0)]).unwrap();
        let f = registry::one_over_z_minus(p(0.0, 0.0));
        match integrate_form(&j, &f, &QuadratureSpec::default()) {
            Err(Error::SingularityOnSupport { cell, .. }) => assert_eq!(cell, 0),
            other => panic!("expected SingularityOnSupport, got {other:?}"),
        }
    }

    #[test]
    fn area_of_unit_triangle() {
        let k = Chain2::from_triangles(&[([p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)], 1.0)]).unwrap();
        let v = integrate_area(&k, |_| Complex::ONE, &QuadratureSpec::default()).unwrap();
        assert!((v.re - 0.5).abs() < 1e-14);
    }

    #[test]
    fn first_moment_over_square_fan() {
        let k = Chain2::from_triangles(&[
            ([p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0)], 1.0),
            ([p(0.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)], 1.0),
        ])
        .unwrap();
        let v = integrate_area(&k, |q| Complex::new(q.x, 0.0), &QuadratureSpec::default()).unwrap();
        assert!((v.re - 0.5).abs() < 1e-13);
    }

    #[test]
    fn tightening_atol_is_stable() {
        let j = crate::gen::circle_chain(p(0.0, 0.0), 1.0, 16, 1.0).unwrap();
        let f = registry::one_over_z_minus(p(0.3, 0.1));
        let loose = QuadratureSpec {
            atol: 1e-8,
            ..Default::default()
        };
        let tight = QuadratureSpec {
            atol: 1e-9,
            ..Default::default()
        };
        let a = integrate_form(&j, &f, &loose).unwrap();
        let b = integrate_form(&j, &f, &tight).unwrap();
        assert!((a - b).abs() <= 1e-8 + 1e-12);
    }

    #[test]
    fn cr_residual_flags_antiholomorphic() {
        let conj = HoloFn::new("conj", vec![], |z: Complex| z.conj());
        let r = cauchy_riemann_residual(&conj, p(0.7, -0.3), 1e-5).unwrap();
        assert!((r - 2.0).abs() < 1e-6, "residual {r}");
    }

    #[test]
    fn cr_residual_small_for_holomorphic() {
        let q = p(1.0, 1.0);
        let f = poly(&[0.0, 0.0, 1.0]);
        let r = cauchy_riemann_residual(&f, q, 1e-5).unwrap();
        assert!(r <= 1e-8, "residual {r}");
        let e = registry::named_exp();
        let r2 = cauchy_riemann_residual(&e, p(0.0, 0.0), 1e-5).unwrap();
        assert!(r2 <= 1e-8, "residual {r2}");
    }

    #[test]
    fn cr_residual_rejects_stencil_on_singularity() {
        let f = registry::one_over_z_minus(p(0.0, 0.0));
        assert!(matches!(
            cauchy_riemann_residual(&f, p(1e-6, 0.0), 1e-5),
            Err(Error::StencilOnSingularity { .. })
        ));
    }
}
