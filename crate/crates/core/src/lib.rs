pub mod catalog;
pub mod engine;
pub mod grid;
pub mod io;
pub mod kl;
pub mod plane;
pub mod render;
pub mod structure;
pub mod validate;
pub mod wang;

pub use grid::{
    BoundaryWord, Cell, Dir, GridError, Placement, Polyomino, Region, RegionKind, Side,
};
