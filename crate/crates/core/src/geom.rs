//! Plane geometry primitives shared by every module: points, complex values,
//! axis-aligned rectangles and point/segment distance queries.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A point of the plane. The plane doubles as the complex line, so conversion
/// to and from [`Complex`] is free.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the cross product, i.e. the signed parallelogram area.
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dist(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn scale(self, c: f64) -> Point2 {
        Point2::new(c * self.x, c * self.y)
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl From<Complex> for Point2 {
    fn from(z: Complex) -> Self {
        Point2::new(z.re, z.im)
    }
}

/// A complex number; the value type of every contour integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const ZERO: Complex = Complex { re: 0.0, im: 0.0 };
    pub const ONE: Complex = Complex { re: 1.0, im: 0.0 };
    pub const I: Complex = Complex { re: 0.0, im: 1.0 };

    pub const fn new(re: f64, im: f64) -> Self {
        Complex { re, im }
    }

    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn conj(self) -> Complex {
        Complex::new(self.re, -self.im)
    }

    pub fn exp(self) -> Complex {
        let r = self.re.exp();
        Complex::new(r * self.im.cos(), r * self.im.sin())
    }

    pub fn sin(self) -> Complex {
        Complex::new(
            self.re.sin() * self.im.cosh(),
            self.re.cos() * self.im.sinh(),
        )
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn recip(self) -> Complex {
        let d = self.norm_sq();
        Complex::new(self.re / d, -self.im / d)
    }

    fn norm_sq(self) -> f64 {
        self.re * self.re + self.im * self.im
    }
}

impl From<Point2> for Complex {
    fn from(p: Point2) -> Self {
        Complex::new(p.x, p.y)
    }
}

impl Add for Complex {
    type Output = Complex;
    fn add(self, rhs: Complex) -> Complex {
        Complex::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for Complex {
    type Output = Complex;
    fn sub(self, rhs: Complex) -> Complex {
        Complex::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for Complex {
    type Output = Complex;
    fn mul(self, rhs: Complex) -> Complex {
        Complex::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl Mul<f64> for Complex {
    type Output = Complex;
    fn mul(self, rhs: f64) -> Complex {
        Complex::new(self.re * rhs, self.im * rhs)
    }
}

impl Div for Complex {
    type Output = Complex;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Complex) -> Complex {
        self * rhs.recip()
    }
}

impl Div<f64> for Complex {
    type Output = Complex;
    fn div(self, rhs: f64) -> Complex {
        Complex::new(self.re / rhs, self.im / rhs)
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

impl std::iter::Sum for Complex {
    fn sum<I: Iterator<Item = Complex>>(iter: I) -> Complex {
        iter.fold(Complex::ZERO, |acc, z| acc + z)
    }
}

/// Axis-aligned rectangle, `min` componentwise below `max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub min: Point2,
    pub max: Point2,
}

impl Rect {
    pub fn new(min: Point2, max: Point2) -> Self {
        Rect {
            min: Point2::new(min.x.min(max.x), min.y.min(max.y)),
            max: Point2::new(min.x.max(max.x), min.y.max(max.y)),
        }
    }

    pub fn from_points<I: IntoIterator<Item = Point2>>(points: I) -> Option<Rect> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut r = Rect {
            min: first,
            max: first,
        };
        for p in it {
            r.min.x = r.min.x.min(p.x);
            r.min.y = r.min.y.min(p.y);
            r.max.x = r.max.x.max(p.x);
            r.max.y = r.max.y.max(p.y);
        }
        Some(r)
    }

    pub fn center(&self) -> Point2 {
        Point2::new(
            0.5 * (self.min.x + self.max.x),
            0.5 * (self.min.y + self.max.y),
        )
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn pad(&self, margin: f64) -> Rect {
        Rect {
            min: Point2::new(self.min.x - margin, self.min.y - margin),
            max: Point2::new(self.max.x + margin, self.max.y + margin),
        }
    }

    pub fn union(&self, other: &Rect) -> Rect {
        Rect {
            min: Point2::new(self.min.x.min(other.min.x), self.min.y.min(other.min.y)),
            max: Point2::new(self.max.x.max(other.max.x), self.max.y.max(other.max.y)),
        }
    }
}

/// Finite and strictly positive; the guard for radius/step/tolerance
/// parameters (rejects NaN, infinities, zero and negatives alike).
pub fn is_positive_finite(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

/// Distance from `p` to the closed segment `[a, b]`. Degenerate segments are
/// treated as points.
pub fn dist_point_segment(p: Point2, a: Point2, b: Point2) -> f64 {
    let d = b - a;
    let len_sq = d.norm_sq();
    if len_sq == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(d) / len_sq).clamp(0.0, 1.0);
    p.dist(a + d.scale(t))
}

/// Signed area of the triangle `(p0, p1, p2)`; positive when counterclockwise.
pub fn signed_area(p0: Point2, p1: Point2, p2: Point2) -> f64 {
    0.5 * (p1 - p0).cross(p2 - p0)
}

/// True when `p` lies inside or on the triangle `(p0, p1, p2)` (any orientation).
pub fn point_in_triangle(p: Point2, p0: Point2, p1: Point2, p2: Point2) -> bool {
    let d0 = (p1 - p0).cross(p - p0);
    let d1 = (p2 - p1).cross(p - p1);
    let d2 = (p0 - p2).cross(p - p2);
    let has_neg = d0 < 0.0 || d1 < 0.0 || d2 < 0.0;
    let has_pos = d0 > 0.0 || d1 > 0.0 || d2 > 0.0;
    !(has_neg && has_pos)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_arithmetic() {
        let a = Complex::new(1.0, 2.0);
        let b = Complex::new(3.0, -1.0);
        let p = a * b;
        assert_eq!(p, Complex::new(5.0, 5.0));
        let q = p / b;
        assert!((q - a).abs() < 1e-15);
    }

    #[test]
    fn complex_exp_matches_euler() {
        let z = Complex::new(0.0, std::f64::consts::PI);
        let e = z.exp();
        assert!((e.re + 1.0).abs() < 1e-15);
        assert!(e.im.abs() < 1e-15);
    }

    #[test]
    fn segment_distance() {
        let a = Point2::new(0.0, 0.0);
        let b = Point2::new(1.0, 0.0);
        assert!((dist_point_segment(Point2::new(0.5, 1.0), a, b) - 1.0).abs() < 1e-15);
        assert!((dist_point_segment(Point2::new(2.0, 0.0), a, b) - 1.0).abs() < 1e-15);
        assert_eq!(dist_point_segment(Point2::new(0.25, 0.0), a, b), 0.0);
    }

    #[test]
    fn triangle_containment() {
        let p0 = Point2::new(0.0, 0.0);
        let p1 = Point2::new(1.0, 0.0);
        let p2 = Point2::new(0.0, 1.0);
        assert!(point_in_triangle(Point2::new(0.2, 0.2), p0, p1, p2));
        assert!(!point_in_triangle(Point2::new(0.8, 0.8), p0, p1, p2));
        // orientation independent
        assert!(point_in_triangle(Point2::new(0.2, 0.2), p0, p2, p1));
    }

    #[test]
    fn rect_union_and_pad() {
        let r = Rect::from_points([Point2::new(0.0, 0.0), Point2::new(2.0, 1.0)]).unwrap();
        assert_eq!(r.width(), 2.0);
        let padded = r.pad(1.0);
        assert!(padded.contains(Point2::new(-0.5, -0.5)));
    }
}
