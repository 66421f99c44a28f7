//! Shared fixtures for the criterion benchmarks.

use chaincalc_core::chain::{cone, Chain1, Chain2};
use chaincalc_core::gen;
use chaincalc_core::geom::{Point2, Rect};

pub fn koch3() -> Chain1 {
    gen::koch_chain(3).expect("koch level 3")
}

pub fn polygon64() -> Chain1 {
    gen::circle_chain(Point2::new(0.0, 0.0), 1.0, 64, 1.0).expect("64-gon")
}

pub fn random_chain(seed: u64) -> (Chain1, Chain2) {
    let window = Rect::new(Point2::new(-2.0, -2.0), Point2::new(2.0, 2.0));
    gen::random_closed_chain(seed, 8, window).expect("random chain")
}

pub fn polygon_fan() -> Chain2 {
    cone(Point2::new(0.0, 0.0), &polygon64()).expect("fan")
}
