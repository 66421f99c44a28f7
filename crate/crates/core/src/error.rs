//! Error type shared by all chain operations.

use crate::geom::{Complex, Point2};
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate 1-cell at index {index}: endpoints coincide at ({x}, {y})")]
    DegenerateSegment { index: usize, x: f64, y: f64 },

    #[error("degenerate 2-cell at index {index}: zero signed area")]
    DegenerateTriangle { index: usize },

    #[error("cell at index {index} has zero weight")]
    ZeroWeight { index: usize },

    #[error("cell at index {index} has a non-finite coordinate or weight")]
    NonFinite { index: usize },

    #[error("chain file is invalid: {reason} (cell index {index})")]
    InvalidChainFile { index: usize, reason: String },

    #[error("chain file has dimension {found}, expected {expected}")]
    WrongDimension { expected: u8, found: u8 },

    #[error(
        "singularity ({x}, {y}) is within {dist:e} of the chain support \
         (nearest cell {cell}, exclusion radius {exclusion:e})"
    )]
    SingularityOnSupport {
        x: f64,
        y: f64,
        dist: f64,
        cell: usize,
        exclusion: f64,
    },

    #[error(
        "adaptive quadrature exceeded max depth {max_depth} on cell {cell} \
         (worst panel [{t0}, {t1}], error estimate {err_est:e}, partial = {partial_re} + {partial_im}i)"
    )]
    MaxDepthExceeded {
        max_depth: u32,
        cell: usize,
        t0: f64,
        t1: f64,
        err_est: f64,
        partial_re: f64,
        partial_im: f64,
    },

    #[error("finite-difference stencil around ({x}, {y}) touches a singularity exclusion zone")]
    StencilOnSingularity { x: f64, y: f64 },

    #[error("point ({x}, {y}) is within {dist:e} of the chain support (exclusion {exclusion:e})")]
    PointOnSupport {
        x: f64,
        y: f64,
        dist: f64,
        exclusion: f64,
    },

    #[error("map evaluation failed at point ({x}, {y})")]
    MapEvaluation { x: f64, y: f64 },

    #[error("cone apex ({x}, {y}) is collinear with cell {cell}")]
    CollinearApex { x: f64, y: f64, cell: usize },

    #[error("cone apex ({x}, {y}) lies on the chain support")]
    ApexOnSupport { x: f64, y: f64 },

    #[error("cannot project the circle center onto itself")]
    ProjectCenter,

    #[error("chain is not closed: boundary mass {boundary_mass:e} exceeds tolerance {tol:e}")]
    NotClosed { boundary_mass: f64, tol: f64 },

    #[error(
        "support is only {dist} from the excluded center, need at least {required} \
         (center ({x}, {y}))"
    )]
    SupportTooClose {
        x: f64,
        y: f64,
        dist: f64,
        required: f64,
    },

    #[error(
        "grid resolution {resolution} is too coarse to separate the chain support; \
         use a finer resolution"
    )]
    ResolutionTooCoarse { resolution: usize },

    #[error("empty chain where a nonzero chain is required")]
    EmptyChain,

    #[error("parameter out of range: {what}")]
    BadParameter { what: String },

    #[error("singularity disks {i} and {j} overlap or collide with the support")]
    DiskCollision { i: usize, j: usize },

    #[error("singularity disk {k} collides with the chain support")]
    DiskSupportCollision { k: usize },

    #[error(
        "second singularity ({x}, {y}) within {within} of the residue disk around ({ax}, {ay})"
    )]
    SecondSingularity {
        x: f64,
        y: f64,
        ax: f64,
        ay: f64,
        within: f64,
    },

    #[error("cannot parse function spec '{spec}': {reason}")]
    BadFunctionSpec { spec: String, reason: String },

    #[error("closure sequence element {index}: {source}")]
    SequenceElement {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn singularity_on_support(s: Point2, dist: f64, cell: usize, exclusion: f64) -> Self {
        Error::SingularityOnSupport {
            x: s.x,
            y: s.y,
            dist,
            cell,
            exclusion,
        }
    }

    pub fn max_depth(
        max_depth: u32,
        cell: usize,
        t0: f64,
        t1: f64,
        err_est: f64,
        partial: Complex,
    ) -> Self {
        Error::MaxDepthExceeded {
            max_depth,
            cell,
            t0,
            t1,
            err_est,
            partial_re: partial.re,
            partial_im: partial.im,
        }
    }
}
