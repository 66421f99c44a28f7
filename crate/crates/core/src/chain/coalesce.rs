//! Cancellation and merging of formal sums: atoms of 0-chains within a
//! position tolerance are summed, directed segments with identical endpoints
//! are combined (reversed orientation counts negatively).
//!
//! Positions merge within `1e-12 x` bounding-box diameter; weights below
//! `1e-14 x` the largest input weight are dropped. This makes
//! boundary-of-boundary vanish exactly for shared vertices.

use crate::geom::{Point2, Rect};

use super::Cell1;

pub const MERGE_REL_TOL: f64 = 1e-12;
pub const WEIGHT_DROP_FACTOR: f64 = 1e-14;

/// Merge tolerance for a cloud of atom positions.
pub fn atom_merge_tolerance(points: impl IntoIterator<Item = Point2>) -> f64 {
    match Rect::from_points(points) {
        Some(bbox) => MERGE_REL_TOL * bbox.diameter(),
        None => 0.0,
    }
}

pub fn coalesce_atoms(atoms: Vec<(Point2, f64)>) -> Vec<(Point2, f64)> {
    if atoms.is_empty() {
        return atoms;
    }
    let tol = atom_merge_tolerance(atoms.iter().map(|&(p, _)| p));
    // The drop threshold is relative to the input weight scale, so that
    // roundoff residue of cancelling weights is removed.
    let max_w_in = atoms.iter().map(|(_, w)| w.abs()).fold(0.0, f64::max);

    // Sort by x (then y) so that merge candidates sit in a sliding window.
    let mut sorted = atoms;
    sorted.sort_by(|l, r| {
        l.0.x
            .partial_cmp(&r.0.x)
            .unwrap()
            .then(l.0.y.partial_cmp(&r.0.y).unwrap())
    });

    let mut merged: Vec<(Point2, f64)> = Vec::with_capacity(sorted.len());
    for (p, w) in sorted {
        let mut absorbed = false;
        for slot in merged.iter_mut().rev() {
            if p.x - slot.0.x > tol {
                break;
            }
            if slot.0.dist(p) <= tol {
                slot.1 += w;
                absorbed = true;
                break;
            }
        }
        if !absorbed {
            merged.push((p, w));
        }
    }

    let drop = WEIGHT_DROP_FACTOR * max_w_in;
    merged.retain(|(_, w)| w.abs() > drop && *w != 0.0);
    merged
}

/// Key for exact segment coincidence; -0.0 is normalized so that it matches 0.0.
fn coord_key(v: f64) -> u64 {
    (if v == 0.0 { 0.0f64 } else { v }).to_bits()
}

fn point_key(p: Point2) -> (u64, u64) {
    (coord_key(p.x), coord_key(p.y))
}

/// Combine directed weighted segments that coincide exactly; a reversed
/// duplicate subtracts. Segments are keyed with the lexicographically smaller
/// endpoint first, and the output keeps the first-seen order of surviving keys.
pub fn coalesce_segments(raw: Vec<(Point2, Point2, f64)>) -> Vec<Cell1> {
    use std::collections::HashMap;

    struct Slot {
        a: Point2,
        b: Point2,
        w: f64,
        order: usize,
    }

    type SegKey = ((u64, u64), (u64, u64));

    let mut slots: HashMap<SegKey, Slot> = HashMap::new();
    let max_w_in = raw.iter().map(|(_, _, w)| w.abs()).fold(0.0, f64::max);
    for (i, (a, b, w)) in raw.into_iter().enumerate() {
        let (ka, kb) = (point_key(a), point_key(b));
        let (key, signed_w, ca, cb) = if ka <= kb {
            ((ka, kb), w, a, b)
        } else {
            ((kb, ka), -w, b, a)
        };
        slots
            .entry(key)
            .and_modify(|s| s.w += signed_w)
            .or_insert(Slot {
                a: ca,
                b: cb,
                w: signed_w,
                order: i,
            });
    }

    let mut survivors: Vec<Slot> = slots.into_values().collect();
    let drop = WEIGHT_DROP_FACTOR * max_w_in;
    survivors.retain(|s| s.w.abs() > drop && s.w != 0.0 && s.a != s.b);
    survivors.sort_by_key(|s| s.order);
    survivors
        .into_iter()
        .map(|s| Cell1::new(s.a, s.b, s.w).expect("coalesced segment is non-degenerate"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    #[test]
    fn atoms_cancel_at_shared_points() {
        let out = coalesce_atoms(vec![(p(1.0, 1.0), 2.0), (p(1.0, 1.0), -2.0)]);
        assert!(out.is_empty());
    }

    #[test]
    fn atoms_merge_within_tolerance() {
        let eps = 1e-15;
        let out = coalesce_atoms(vec![
            (p(0.0, 0.0), 1.0),
            (p(eps, 0.0), 1.0),
            (p(5.0, 5.0), -1.0),
        ]);
        assert_eq!(out.len(), 2);
        let near_origin = out.iter().find(|(q, _)| q.norm() < 1.0).unwrap();
        assert_eq!(near_origin.1, 2.0);
    }

    #[test]
    fn no_two_output_atoms_within_tolerance() {
        let pts: Vec<(Point2, f64)> = (0..200)
            .map(|i| {
                let t = i as f64 * 0.37;
                (p(t.sin() * 3.0, t.cos() * 2.0), 1.0 + (i % 7) as f64)
            })
            .collect();
        let out = coalesce_atoms(pts);
        let tol = atom_merge_tolerance(out.iter().map(|&(q, _)| q));
        for i in 0..out.len() {
            for j in (i + 1)..out.len() {
                assert!(out[i].0.dist(out[j].0) > tol);
            }
        }
    }

    #[test]
    fn reversed_segment_cancels() {
        let out = coalesce_segments(vec![
            (p(0.0, 0.0), p(1.0, 0.0), 1.0),
            (p(1.0, 0.0), p(0.0, 0.0), 1.0),
        ]);
        assert!(out.is_empty());
    }

    #[test]
    fn partial_cancellation_keeps_remainder() {
        let out = coalesce_segments(vec![
            (p(0.0, 0.0), p(1.0, 0.0), 3.0),
            (p(1.0, 0.0), p(0.0, 0.0), 1.0),
            (p(0.0, 0.0), p(0.0, 1.0), 2.0),
        ]);
        assert_eq!(out.len(), 2);
        let horizontal = out
            .iter()
            .find(|c| (c.b() - c.a()).y == 0.0)
            .expect("horizontal survivor");
        assert_eq!(horizontal.w().abs(), 2.0);
    }
}
