//! Comparison of ranking lists: top-j overlap curves, `(K, K*)` density
//! grids and multi-list top-k tables.

mod density;
mod overlap;
mod top;

pub use density::{cell_index, density_grid, DensityGrid, Overlay, DEFAULT_CELLS};
pub use overlap::{overlap, OverlapCurve};
pub use top::{top_table, TopRow, TopTable};
