use rayon::prelude::*;

use super::WeightedAdjacency;

/// Column-normalized sparse matrix. Columns with zero out-weight store no
/// entries and are listed in `dangling`; their uniform `1/N` mass is applied
/// implicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    n: usize,
    col_ptr: Vec<usize>,
    rows: Vec<u32>,
    values: Vec<f64>,
    dangling: Vec<u32>,
}

/// Divides every non-empty column by its sum and records empty columns as
/// dangling.
pub fn column_normalize(a: &WeightedAdjacency) -> StochasticMatrix {
    let (col_ptr, rows, weights) = a.parts();
    let mut values = Vec::with_capacity(weights.len());
    let mut dangling = Vec::new();
    for j in 0..a.dim() {
        let col = &weights[col_ptr[j]..col_ptr[j + 1]];
        if col.is_empty() {
            dangling.push(j as u32);
            continue;
        }
        let sum: f64 = col.iter().sum();
        values.extend(col.iter().map(|w| w / sum));
    }
    StochasticMatrix {
        n: a.dim(),
        col_ptr: col_ptr.to_vec(),
        rows: rows.to_vec(),
        values,
        dangling,
    }
}

impl StochasticMatrix {
    pub(crate) fn from_parts(
        n: usize,
        col_ptr: Vec<usize>,
        rows: Vec<u32>,
        values: Vec<f64>,
        dangling: Vec<u32>,
    ) -> Self {
        StochasticMatrix {
            n,
            col_ptr,
            rows,
            values,
            dangling,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.rows.len()
    }

    pub fn dangling(&self) -> &[u32] {
        &self.dangling
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = (u32, f64)> + '_ {
        let range = self.col_ptr[j]..self.col_ptr[j + 1];
        self.rows[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    pub fn col_ptr(&self) -> &[usize] {
        &self.col_ptr
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Total mass of `x` sitting on dangling columns.
    pub fn dangling_mass(&self, x: &[f64]) -> f64 {
        self.dangling.iter().map(|&j| x[j as usize]).sum()
    }

    /// `S x` including the uniform dangling columns (sequential scatter).
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let share = self.dangling_mass(x) / self.n as f64;
        let mut y = vec![share; self.n];
        for (j, &xj) in x.iter().enumerate() {
            for (i, v) in self.column(j) {
                y[i as usize] += v * xj;
            }
        }
        y
    }

    /// Row-major copy of the stored entries, used for the parallel matvec.
    pub fn row_major(&self) -> RowMajor {
        let n = self.n;
        let mut row_ptr = vec![0usize; n + 1];
        for &i in &self.rows {
            row_ptr[i as usize + 1] += 1;
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        let mut next = row_ptr.clone();
        let mut cols = vec![0u32; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        for j in 0..n {
            for (i, v) in self.column(j) {
                let slot = &mut next[i as usize];
                cols[*slot] = j as u32;
                values[*slot] = v;
                *slot += 1;
            }
        }
        RowMajor {
            row_ptr,
            cols,
            values,
        }
    }
}

/// Output rows handled per parallel task. The partition does not depend on
/// the thread count, so results are bitwise identical for any pool size.
pub const ROW_CHUNK: usize = 4096;

/// Pull-style operator: `y_i = sum_j S_ij x_j` over stored entries only.
#[derive(Debug, Clone)]
pub struct RowMajor {
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    values: Vec<f64>,
}

impl RowMajor {
    /// Writes `scale * (S x)_i + offset_i` into `y`, where `offset(i)` supplies
    /// the dangling and teleport terms.
    pub fn mul_into<F>(&self, x: &[f64], y: &mut [f64], scale: f64, offset: F)
    where
        F: Fn(usize) -> f64 + Sync,
    {
        y.par_chunks_mut(ROW_CHUNK)
            .enumerate()
            .for_each(|(c, chunk)| {
                let base = c * ROW_CHUNK;
                for (k, out) in chunk.iter_mut().enumerate() {
                    let i = base + k;
                    let range = self.row_ptr[i]..self.row_ptr[i + 1];
                    let mut acc = 0.0;
                    for (&j, &v) in self.cols[range.clone()].iter().zip(&self.values[range]) {
                        acc += v * x[j as usize];
                    }
                    *out = scale * acc + offset(i);
                }
            });
    }
}

/// Chunked sum with a fixed partition, reproducible across thread counts.
fn chunked_sum<F>(len: usize, term: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let partials: Vec<f64> = (0..len.div_ceil(ROW_CHUNK))
        .into_par_iter()
        .map(|c| {
            let end = ((c + 1) * ROW_CHUNK).min(len);
            (c * ROW_CHUNK..end).map(&term).sum::<f64>()
        })
        .collect();
    partials.iter().sum()
}

/// Sum of a vector with the fixed chunk partition.
pub fn stochastic_sum(x: &[f64]) -> f64 {
    chunked_sum(x.len(), |i| x[i])
}

/// `sum |x_i - y_i|` with the fixed chunk partition.
pub fn l1_distance(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    chunked_sum(x.len(), |i| (x[i] - y[i]).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_columns() {
        let a = WeightedAdjacency::from_triplets(4, vec![(1, 2, 40.0), (1, 3, 1.0)]).unwrap();
        let s = column_normalize(&a);
        assert_eq!(
            s.column(1).collect::<Vec<_>>(),
            vec![(2, 40.0 / 41.0), (3, 1.0 / 41.0)]
        );
        assert_eq!(s.dangling(), &[0, 2, 3]);
    }

    #[test]
    fn matches_dense_hand_built_matrix() {
        let a = WeightedAdjacency::from_triplets(3, vec![(0, 1, 40.0), (0, 2, 1.0), (1, 0, 2.0)])
            .unwrap();
        let s = column_normalize(&a);
        // columns: 0 -> (0, 40/41, 1/41); 1 -> (1, 0, 0); 2 dangling -> 1/3 each
        let dense = [
            [0.0, 1.0, 1.0 / 3.0],
            [40.0 / 41.0, 0.0, 1.0 / 3.0],
            [1.0 / 41.0, 0.0, 1.0 / 3.0],
        ];
        let x = [0.2, 0.5, 0.3];
        let y = s.apply(&x);
        for i in 0..3 {
            let expect: f64 = (0..3).map(|j| dense[i][j] * x[j]).sum();
            assert!(
                (y[i] - expect).abs() < 1e-15,
                "row {i}: {} vs {expect}",
                y[i]
            );
        }
    }

    #[test]
    fn all_dangling_is_uniform() {
        let a = WeightedAdjacency::from_triplets(3, vec![]).unwrap();
        let s = column_normalize(&a);
        let y = s.apply(&[0.6, 0.3, 0.9]);
        for v in y {
            assert!((v - 0.6).abs() < 1e-15);
        }
    }

    #[test]
    fn row_major_agrees_with_scatter() {
        let a = WeightedAdjacency::from_triplets(
            5,
            vec![
                (0, 1, 3.0),
                (0, 4, 1.0),
                (2, 0, 1.0),
                (2, 1, 7.0),
                (3, 2, 2.0),
                (4, 3, 1.0),
            ],
        )
        .unwrap();
        let s = column_normalize(&a);
        let x = [0.1, 0.2, 0.3, 0.15, 0.25];
        let share = s.dangling_mass(&x) / 5.0;
        let mut y = vec![0.0; 5];
        s.row_major().mul_into(&x, &mut y, 1.0, |_| share);
        for (a, b) in y.iter().zip(s.apply(&x)) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn chunked_sum_spans_chunks() {
        let n = 3 * ROW_CHUNK + 17;
        assert_eq!(chunked_sum(n, |i| i as f64), (n * (n - 1) / 2) as f64);
        assert_eq!(chunked_sum(0, |_| 1.0), 0.0);
    }
}
