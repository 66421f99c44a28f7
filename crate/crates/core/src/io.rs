//! Chain file format: JSON with an explicit dimension tag.
//!
//! 1-chains: `{"dim":1,"cells":[{"a":[x,y],"b":[x,y],"w":w},...]}`
//! 2-chains: `{"dim":2,"cells":[{"p":[[x,y],[x,y],[x,y]],"w":w},...]}`
//!
//! Readers validate the cell invariants (finite coordinates, nonzero weight,
//! non-degenerate geometry) and report the index of the first invalid cell.

use crate::chain::{Chain1, Chain2};
use crate::error::{Error, Result};
use crate::geom::Point2;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Serialize, Deserialize)]
struct Cell1File {
    a: [f64; 2],
    b: [f64; 2],
    w: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct Cell2File {
    p: [[f64; 2]; 3],
    w: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum Cells {
    One(Vec<Cell1File>),
    Two(Vec<Cell2File>),
}

#[derive(Debug, Serialize, Deserialize)]
struct ChainFile {
    dim: u8,
    cells: Cells,
}

/// Either kind of chain, as read from a file.
#[derive(Debug, Clone)]
pub enum AnyChain {
    One(Chain1),
    Two(Chain2),
}

pub fn chain1_to_json(j: &Chain1) -> String {
    let cells: Vec<Cell1File> = j
        .cells()
        .iter()
        .map(|c| Cell1File {
            a: [c.a().x, c.a().y],
            b: [c.b().x, c.b().y],
            w: c.w(),
        })
        .collect();
    serde_json::to_string(&ChainFile {
        dim: 1,
        cells: Cells::One(cells),
    })
    .expect("chain serialization cannot fail")
}

pub fn chain2_to_json(k: &Chain2) -> String {
    let cells: Vec<Cell2File> = k
        .cells()
        .iter()
        .map(|c| {
            let [p0, p1, p2] = c.vertices();
            Cell2File {
                p: [[p0.x, p0.y], [p1.x, p1.y], [p2.x, p2.y]],
                w: c.w(),
            }
        })
        .collect();
    serde_json::to_string(&ChainFile {
        dim: 2,
        cells: Cells::Two(cells),
    })
    .expect("chain serialization cannot fail")
}

pub fn parse_chain(text: &str) -> Result<AnyChain> {
    let file: ChainFile = serde_json::from_str(text)?;
    match (file.dim, file.cells) {
        (1, Cells::One(cells)) => {
            let segments: Vec<(Point2, Point2, f64)> = cells
                .iter()
                .map(|c| {
                    (
                        Point2::new(c.a[0], c.a[1]),
                        Point2::new(c.b[0], c.b[1]),
                        c.w,
                    )
                })
                .collect();
            let chain = Chain1::from_segments(&segments).map_err(invalid_cell)?;
            Ok(AnyChain::One(chain))
        }
        (2, Cells::Two(cells)) => {
            let tris: Vec<([Point2; 3], f64)> = cells
                .iter()
                .map(|c| {
                    (
                        [
                            Point2::new(c.p[0][0], c.p[0][1]),
                            Point2::new(c.p[1][0], c.p[1][1]),
                            Point2::new(c.p[2][0], c.p[2][1]),
                        ],
                        c.w,
                    )
                })
                .collect();
            let chain = Chain2::from_triangles(&tris).map_err(invalid_cell)?;
            Ok(AnyChain::Two(chain))
        }
        // An empty cell list is shapeless; the untagged decoder lands it in
        // the first variant, so dispatch on the dimension tag alone.
        (1, Cells::Two(cells)) if cells.is_empty() => Ok(AnyChain::One(Chain1::zero())),
        (2, Cells::One(cells)) if cells.is_empty() => Ok(AnyChain::Two(Chain2::zero())),
        (1, Cells::Two(_)) | (2, Cells::One(_)) => Err(Error::InvalidChainFile {
            index: 0,
            reason: "cell shape does not match the declared dimension".into(),
        }),
        (dim, _) => Err(Error::WrongDimension {
            expected: 1,
            found: dim,
        }),
    }
}

fn invalid_cell(e: Error) -> Error {
    match e {
        Error::DegenerateSegment { index, x, y } => Error::InvalidChainFile {
            index,
            reason: format!("degenerate segment at ({x}, {y})"),
        },
        Error::DegenerateTriangle { index } => Error::InvalidChainFile {
            index,
            reason: "degenerate triangle".into(),
        },
        Error::ZeroWeight { index } => Error::InvalidChainFile {
            index,
            reason: "zero weight".into(),
        },
        Error::NonFinite { index } => Error::InvalidChainFile {
            index,
            reason: "non-finite coordinate or weight".into(),
        },
        other => other,
    }
}

pub fn load_chain(path: &Path) -> Result<AnyChain> {
    parse_chain(&std::fs::read_to_string(path)?)
}

pub fn load_chain1(path: &Path) -> Result<Chain1> {
    match load_chain(path)? {
        AnyChain::One(j) => Ok(j),
        AnyChain::Two(_) => Err(Error::WrongDimension {
            expected: 1,
            found: 2,
        }),
    }
}

pub fn load_chain2(path: &Path) -> Result<Chain2> {
    match load_chain(path)? {
        AnyChain::Two(k) => Ok(k),
        AnyChain::One(_) => Err(Error::WrongDimension {
            expected: 2,
            found: 1,
        }),
    }
}

pub fn save_chain1(path: &Path, j: &Chain1) -> Result<()> {
    std::fs::write(path, chain1_to_json(j))?;
    Ok(())
}

pub fn save_chain2(path: &Path, k: &Chain2) -> Result<()> {
    std::fs::write(path, chain2_to_json(k))?;
    Ok(())
}
