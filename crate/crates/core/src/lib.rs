//! Calculus of polyhedral chains in the plane: 0-, 1- and 2-chains as formal
//! sums of weighted cells, the boundary / pushforward / cone operators,
//! complex 1-form integration by adaptive quadrature, exact winding numbers,
//! a chain-closure construction, signed densities, and verification harnesses
//! for the Cauchy integral theorem, integral formula and residue theorem over
//! generalized domains (weighted chains, fractal approximants, discretized
//! vector fields).

pub mod chain;
pub mod closure;
pub mod density;
pub mod error;
pub mod forms;
pub mod gen;
pub mod geom;
pub mod io;
pub mod render;
pub mod residue;
pub mod winding;

pub use chain::{cone, Cell1, Cell2, Chain0, Chain1, Chain2, SupportRegion};
pub use error::{Error, Result};
pub use forms::{HoloFn, QuadratureSpec};
pub use geom::{Complex, Point2, Rect};
