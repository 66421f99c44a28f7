//! Polyhedral 0-, 1- and 2-chains in the plane as formal sums of weighted
//! cells, with the operator algebra they carry: addition, scaling, boundary,
//! pushforward, cone, mass, support and restriction of area to a disk.
//!
//! Chains are plain formal sums. `add` concatenates cell lists and performs
//! no geometric merging; cancellation happens only where the operators demand
//! it (boundary coalescing).

mod coalesce;
mod disk;

pub use coalesce::{atom_merge_tolerance, WEIGHT_DROP_FACTOR};

use crate::error::{Error, Result};
use crate::geom::{dist_point_segment, point_in_triangle, signed_area, Point2, Rect};

/// A weighted oriented segment. Construction rejects degenerate geometry so
/// that downstream operators never need to re-check it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell1 {
    a: Point2,
    b: Point2,
    w: f64,
}

impl Cell1 {
    pub fn new(a: Point2, b: Point2, w: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() || !w.is_finite() {
            return Err(Error::NonFinite { index: 0 });
        }
        if a == b {
            return Err(Error::DegenerateSegment {
                index: 0,
                x: a.x,
                y: a.y,
            });
        }
        if w == 0.0 {
            return Err(Error::ZeroWeight { index: 0 });
        }
        Ok(Cell1 { a, b, w })
    }

    pub fn a(&self) -> Point2 {
        self.a
    }

    pub fn b(&self) -> Point2 {
        self.b
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn reversed(&self) -> Cell1 {
        Cell1 {
            a: self.b,
            b: self.a,
            w: self.w,
        }
    }

    fn scaled(&self, c: f64) -> Cell1 {
        Cell1 {
            a: self.a,
            b: self.b,
            w: c * self.w,
        }
    }
}

/// A weighted oriented triangle, stored counterclockwise. Clockwise input is
/// flipped at construction and the weight negated, so one orientation
/// convention covers boundary and area code.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell2 {
    p0: Point2,
    p1: Point2,
    p2: Point2,
    w: f64,
}

impl Cell2 {
    pub fn new(p0: Point2, p1: Point2, p2: Point2, w: f64) -> Result<Self> {
        if !p0.is_finite() || !p1.is_finite() || !p2.is_finite() || !w.is_finite() {
            return Err(Error::NonFinite { index: 0 });
        }
        if w == 0.0 {
            return Err(Error::ZeroWeight { index: 0 });
        }
        let area = signed_area(p0, p1, p2);
        if area == 0.0 {
            return Err(Error::DegenerateTriangle { index: 0 });
        }
        if area > 0.0 {
            Ok(Cell2 { p0, p1, p2, w })
        } else {
            Ok(Cell2 {
                p0,
                p1: p2,
                p2: p1,
                w: -w,
            })
        }
    }

    pub fn vertices(&self) -> [Point2; 3] {
        [self.p0, self.p1, self.p2]
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    /// Unsigned area of the stored (counterclockwise) triangle.
    pub fn area(&self) -> f64 {
        signed_area(self.p0, self.p1, self.p2)
    }

    pub fn contains(&self, p: Point2) -> bool {
        point_in_triangle(p, self.p0, self.p1, self.p2)
    }

    fn scaled(&self, c: f64) -> Cell2 {
        Cell2 {
            p0: self.p0,
            p1: self.p1,
            p2: self.p2,
            w: c * self.w,
        }
    }
}

/// Formal sum of weighted points. Always kept coalesced: no two atoms within
/// the merge tolerance, no near-zero weights.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Chain0 {
    atoms: Vec<(Point2, f64)>,
}

impl Chain0 {
    pub fn zero() -> Self {
        Chain0 { atoms: Vec::new() }
    }

    /// Builds a coalesced 0-chain from raw atoms: atoms within the merge
    /// tolerance are summed, and weights below the drop threshold removed.
    pub fn from_atoms(atoms: Vec<(Point2, f64)>) -> Self {
        Chain0 {
            atoms: coalesce::coalesce_atoms(atoms),
        }
    }

    pub fn atoms(&self) -> &[(Point2, f64)] {
        &self.atoms
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn mass(&self) -> f64 {
        self.atoms
            .iter()
            .map(|(_, w)| w.abs())
            .fold(0.0, |a, b| a + b)
    }

    pub fn add(&self, other: &Chain0) -> Chain0 {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        Chain0::from_atoms(atoms)
    }

    pub fn scale(&self, c: f64) -> Chain0 {
        if c == 0.0 {
            return Chain0::zero();
        }
        Chain0 {
            atoms: self.atoms.iter().map(|&(p, w)| (p, c * w)).collect(),
        }
    }

    pub fn support(&self) -> SupportRegion {
        SupportRegion::from_segments(self.atoms.iter().map(|&(p, _)| (p, p)).collect())
    }
}

/// Formal sum of weighted oriented segments; the domain type of every contour
/// integral in this crate. The empty list is the zero chain.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Chain1 {
    cells: Vec<Cell1>,
}

impl Chain1 {
    pub fn zero() -> Self {
        Chain1 { cells: Vec::new() }
    }

    pub fn new(cells: Vec<Cell1>) -> Self {
        Chain1 { cells }
    }

    /// Builds a chain from raw `(a, b, w)` triples, validating every cell and
    /// reporting the index of the first invalid one.
    pub fn from_segments(segments: &[(Point2, Point2, f64)]) -> Result<Self> {
        let mut cells = Vec::with_capacity(segments.len());
        for (i, &(a, b, w)) in segments.iter().enumerate() {
            let cell = Cell1::new(a, b, w).map_err(|e| at_index(e, i))?;
            cells.push(cell);
        }
        Ok(Chain1 { cells })
    }

    pub fn cells(&self) -> &[Cell1] {
        &self.cells
    }

    pub fn is_zero(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn add(&self, other: &Chain1) -> Chain1 {
        let mut cells = self.cells.clone();
        cells.extend_from_slice(&other.cells);
        Chain1 { cells }
    }

    pub fn scale(&self, c: f64) -> Chain1 {
        if c == 0.0 {
            return Chain1::zero();
        }
        Chain1 {
            cells: self.cells.iter().map(|cell| cell.scaled(c)).collect(),
        }
    }

    /// Orientation reversal; integrates to the negative of `self`.
    pub fn reverse(&self) -> Chain1 {
        Chain1 {
            cells: self.cells.iter().rev().map(|c| c.reversed()).collect(),
        }
    }

    /// Combines exactly coincident cells (reversed duplicates subtract) and
    /// drops the cancelled ones; the chain as an integration object is
    /// unchanged. Empty output means the chain integrates everything to zero.
    pub fn coalesced(&self) -> Chain1 {
        Chain1 {
            cells: coalesce::coalesce_segments(
                self.cells.iter().map(|c| (c.a, c.b, c.w)).collect(),
            ),
        }
    }

    /// Boundary operator: every cell emits `w·(δ_b − δ_a)`; the atoms are
    /// coalesced so that shared endpoints cancel.
    pub fn boundary(&self) -> Chain0 {
        let mut atoms = Vec::with_capacity(2 * self.cells.len());
        for cell in &self.cells {
            atoms.push((cell.b, cell.w));
            atoms.push((cell.a, -cell.w));
        }
        Chain0::from_atoms(atoms)
    }

    /// Total variation in the polyhedral sense: sum of |weight| times length.
    pub fn mass(&self) -> f64 {
        self.cells
            .iter()
            .map(|c| c.w.abs() * c.length())
            .fold(0.0, |a, b| a + b)
    }

    pub fn support(&self) -> SupportRegion {
        SupportRegion::from_segments(self.cells.iter().map(|c| (c.a, c.b)).collect())
    }

    /// Scale-aware closedness tolerance for this chain.
    pub fn closed_tolerance(&self) -> f64 {
        1e-10 * (1.0 + self.mass())
    }

    /// True when the boundary mass is below the scale-aware tolerance.
    pub fn is_closed(&self) -> bool {
        self.boundary().mass() <= self.closed_tolerance()
    }

    /// Pushforward under a smooth map, discretized by splitting each cell into
    /// subsegments of length at most `h` and joining the images of the split
    /// points. Weights are preserved; subsegments whose endpoints map to the
    /// same point are dropped (they integrate to zero).
    pub fn pushforward<F>(&self, map: F, h: f64) -> Result<Chain1>
    where
        F: Fn(Point2) -> Point2,
    {
        if !crate::geom::is_positive_finite(h) {
            return Err(Error::BadParameter {
                what: format!("pushforward subdivision length must be positive, got {h}"),
            });
        }
        let mut out = Vec::new();
        for cell in &self.cells {
            let pieces = (cell.length() / h).ceil().max(1.0) as usize;
            let mut prev = eval_map(&map, cell.a)?;
            for i in 1..=pieces {
                let t = i as f64 / pieces as f64;
                let p_param = if i == pieces {
                    cell.b
                } else {
                    cell.a + (cell.b - cell.a).scale(t)
                };
                let p = eval_map(&map, p_param)?;
                if p != prev {
                    out.push(Cell1 {
                        a: prev,
                        b: p,
                        w: cell.w,
                    });
                }
                prev = p;
            }
        }
        Ok(Chain1 { cells: out })
    }
}

fn eval_map<F: Fn(Point2) -> Point2>(map: &F, p: Point2) -> Result<Point2> {
    let img = map(p);
    if img.is_finite() {
        Ok(img)
    } else {
        Err(Error::MapEvaluation { x: p.x, y: p.y })
    }
}

/// Formal sum of weighted oriented triangles.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Chain2 {
    cells: Vec<Cell2>,
}

impl Chain2 {
    pub fn zero() -> Self {
        Chain2 { cells: Vec::new() }
    }

    pub fn new(cells: Vec<Cell2>) -> Self {
        Chain2 { cells }
    }

    pub fn from_triangles(tris: &[([Point2; 3], f64)]) -> Result<Self> {
        let mut cells = Vec::with_capacity(tris.len());
        for (i, &([p0, p1, p2], w)) in tris.iter().enumerate() {
            let cell = Cell2::new(p0, p1, p2, w).map_err(|e| at_index(e, i))?;
            cells.push(cell);
        }
        Ok(Chain2 { cells })
    }

    pub fn cells(&self) -> &[Cell2] {
        &self.cells
    }

    pub fn is_zero(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn add(&self, other: &Chain2) -> Chain2 {
        let mut cells = self.cells.clone();
        cells.extend_from_slice(&other.cells);
        Chain2 { cells }
    }

    pub fn scale(&self, c: f64) -> Chain2 {
        if c == 0.0 {
            return Chain2::zero();
        }
        Chain2 {
            cells: self.cells.iter().map(|cell| cell.scaled(c)).collect(),
        }
    }

    /// Boundary operator: each triangle emits its three directed edges with
    /// the triangle's weight; exactly-coincident opposite edges cancel.
    pub fn boundary(&self) -> Chain1 {
        let mut raw = Vec::with_capacity(3 * self.cells.len());
        for cell in &self.cells {
            raw.push((cell.p0, cell.p1, cell.w));
            raw.push((cell.p1, cell.p2, cell.w));
            raw.push((cell.p2, cell.p0, cell.w));
        }
        Chain1 {
            cells: coalesce::coalesce_segments(raw),
        }
    }

    /// Sum of |weight| times triangle area.
    pub fn mass(&self) -> f64 {
        self.cells
            .iter()
            .map(|c| c.w.abs() * c.area())
            .fold(0.0, |a, b| a + b)
    }

    /// Total signed area with weights: the integral of the constant 1 density.
    pub fn signed_area_total(&self) -> f64 {
        self.cells
            .iter()
            .map(|c| c.w * c.area())
            .fold(0.0, |a, b| a + b)
    }

    pub fn support(&self) -> SupportRegion {
        let segments = self
            .cells
            .iter()
            .flat_map(|c| [(c.p0, c.p1), (c.p1, c.p2), (c.p2, c.p0)])
            .collect();
        let triangles = self.cells.iter().map(|c| [c.p0, c.p1, c.p2]).collect();
        SupportRegion::from_parts(segments, triangles)
    }

    /// Weighted area of the chain restricted to the closed disk `(c, r)`,
    /// computed exactly per triangle by circular-segment decomposition.
    pub fn area_in_disk(&self, c: Point2, r: f64) -> f64 {
        self.cells
            .iter()
            .map(|cell| cell.w * disk::triangle_disk_area(cell.p0, cell.p1, cell.p2, c, r))
            .sum()
    }
}

/// Cone of a 1-chain over an apex: each segment `(a, b, w)` emits the triangle
/// `(z, a, b)` with weight `w` (orientation canonicalized by `Cell2`). The
/// apex must avoid the support and must not be collinear with any cell.
pub fn cone(z: Point2, j: &Chain1) -> Result<Chain2> {
    if !j.is_zero() && j.support().distance(z) == 0.0 {
        return Err(Error::ApexOnSupport { x: z.x, y: z.y });
    }
    let mut cells = Vec::with_capacity(j.cells.len());
    for (i, cell) in j.cells.iter().enumerate() {
        if signed_area(z, cell.a, cell.b) == 0.0 {
            return Err(Error::CollinearApex {
                x: z.x,
                y: z.y,
                cell: i,
            });
        }
        cells.push(Cell2::new(z, cell.a, cell.b, cell.w).expect("non-degenerate cone cell"));
    }
    Ok(Chain2 { cells })
}

/// Union of cell geometries with a bounding box; supports distance queries.
/// The distance to an empty support is +infinity.
#[derive(Debug, Clone)]
pub struct SupportRegion {
    segments: Vec<(Point2, Point2)>,
    triangles: Vec<[Point2; 3]>,
    bbox: Option<Rect>,
}

impl SupportRegion {
    pub fn from_segments(segments: Vec<(Point2, Point2)>) -> Self {
        SupportRegion::from_parts(segments, Vec::new())
    }

    fn from_parts(segments: Vec<(Point2, Point2)>, triangles: Vec<[Point2; 3]>) -> Self {
        let bbox = Rect::from_points(
            segments
                .iter()
                .flat_map(|&(a, b)| [a, b])
                .chain(triangles.iter().flatten().copied()),
        );
        SupportRegion {
            segments,
            triangles,
            bbox,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty() && self.triangles.is_empty()
    }

    pub fn bbox(&self) -> Option<Rect> {
        self.bbox
    }

    pub fn segments(&self) -> &[(Point2, Point2)] {
        &self.segments
    }

    /// Distance from `p` to the support; 0 inside a filled triangle, +inf for
    /// the zero chain.
    pub fn distance(&self, p: Point2) -> f64 {
        if self.is_empty() {
            return f64::INFINITY;
        }
        for t in &self.triangles {
            if point_in_triangle(p, t[0], t[1], t[2]) {
                return 0.0;
            }
        }
        self.segments
            .iter()
            .map(|&(a, b)| dist_point_segment(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest distance from `p` to a support vertex; the radius `R` in cone
    /// mass estimates.
    pub fn max_distance(&self, p: Point2) -> f64 {
        self.segments
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .chain(self.triangles.iter().flatten().copied())
            .map(|q| p.dist(q))
            .fold(0.0, f64::max)
    }
}

fn at_index(e: Error, i: usize) -> Error {
    match e {
        Error::DegenerateSegment { x, y, .. } => Error::DegenerateSegment { index: i, x, y },
        Error::DegenerateTriangle { .. } => Error::DegenerateTriangle { index: i },
        Error::ZeroWeight { .. } => Error::ZeroWeight { index: i },
        Error::NonFinite { .. } => Error::NonFinite { index: i },
        other => other,
    }
}
