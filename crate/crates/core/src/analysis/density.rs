use std::io::Write;

use crate::error::{Error, Result};
use crate::rank::RankingList;

pub const DEFAULT_CELLS: usize = 200;

/// Cell of a 1-based rank on an axis spanning `[0, log10 N]` split into
/// `cells` equal decimal-log intervals. Cell `c` covers ranks in
/// `[10^(c w), 10^((c + 1) w))` with `w = log10(N) / cells`; rank `N` falls
/// in the last cell.
pub fn cell_index(rank: u32, n: usize, cells: usize) -> usize {
    if n <= 1 || rank <= 1 {
        return 0;
    }
    let t = (rank as f64).log10() / (n as f64).log10() * cells as f64;
    // absorb rounding on exact boundaries such as log10(1000)
    let c = (t + 1e-9).floor() as usize;
    c.min(cells - 1)
}

/// Overlay set (e.g. the top 100 by pageviews) placed on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Overlay {
    pub name: String,
    /// `(node id, cell_x, cell_y)` in the order given.
    pub points: Vec<(u32, usize, usize)>,
}

/// Node counts over a `cells x cells` grid of decimal-log `(K, K*)` cells.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    pub cells: usize,
    pub n: usize,
    /// Row-major by `cell_x` (the K axis): `counts[x * cells + y]`.
    pub counts: Vec<u64>,
    pub overlays: Vec<Overlay>,
    k: Vec<u32>,
    kstar: Vec<u32>,
}

impl DensityGrid {
    pub fn count(&self, x: usize, y: usize) -> u64 {
        self.counts[x * self.cells + y]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Lower edge of cell `c` in rank units; `boundary(cells) == N`.
    pub fn boundary(&self, c: usize) -> f64 {
        if self.n <= 1 {
            return 1.0;
        }
        10f64.powf(c as f64 / self.cells as f64 * (self.n as f64).log10())
    }

    /// Articles per unit area `dK dK*` in a cell.
    pub fn density(&self, x: usize, y: usize) -> f64 {
        let dx = self.boundary(x + 1) - self.boundary(x);
        let dy = self.boundary(y + 1) - self.boundary(y);
        if dx <= 0.0 || dy <= 0.0 {
            return self.count(x, y) as f64;
        }
        self.count(x, y) as f64 / (dx * dy)
    }

    /// Records where the nodes `ids` sit on the grid.
    pub fn add_overlay(&mut self, name: &str, ids: &[u32]) {
        let points = ids
            .iter()
            .map(|&id| {
                let x = cell_index(self.k[id as usize], self.n, self.cells);
                let y = cell_index(self.kstar[id as usize], self.n, self.cells);
                (id, x, y)
            })
            .collect();
        self.overlays.push(Overlay {
            name: name.to_owned(),
            points,
        });
    }

    /// Every cell, empty ones included.
    pub fn write_tsv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# cell_x\tcell_y\tcount")?;
        for x in 0..self.cells {
            for y in 0..self.cells {
                writeln!(w, "{x}\t{y}\t{}", self.count(x, y))?;
            }
        }
        w.flush()
    }
}

pub fn density_grid(k: &RankingList, kstar: &RankingList, cells: usize) -> Result<DensityGrid> {
    if k.len() != kstar.len() {
        return Err(Error::UniverseMismatch);
    }
    let n = k.len();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if cells == 0 {
        return Err(Error::DepthOutOfRange { j_max: 0, n });
    }
    let mut counts = vec![0u64; cells * cells];
    for id in 0..n as u32 {
        let x = cell_index(k.rank_of(id), n, cells);
        let y = cell_index(kstar.rank_of(id), n, cells);
        counts[x * cells + y] += 1;
    }
    Ok(DensityGrid {
        cells,
        n,
        counts,
        overlays: Vec::new(),
        k: k.positions().to_vec(),
        kstar: kstar.positions().to_vec(),
    })
}
