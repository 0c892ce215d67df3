//! Binary snapshot of a [`StochasticMatrix`].
//!
//! ```text
//! magic    "WKRSMATX"
//! version  u32
//! n        u64
//! nnz      u64
//! col_ptr  (n + 1) x u64
//! rows     nnz x u32
//! values   nnz x f64
//! dangling ceil(n / 8) bytes, bit j % 8 of byte j / 8 set for dangling column j
//! ```

use std::io::{Read, Write};

use byteorder::{LittleEndian as LE, ReadBytesExt, WriteBytesExt};

use super::StochasticMatrix;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 8] = b"WKRSMATX";
pub const VERSION: u32 = 1;

pub fn write_matrix<W: Write>(mut w: W, s: &StochasticMatrix) -> Result<()> {
    let n = s.dim();
    w.write_all(MAGIC)?;
    w.write_u32::<LE>(VERSION)?;
    w.write_u64::<LE>(n as u64)?;
    w.write_u64::<LE>(s.nnz() as u64)?;
    for &p in s.col_ptr() {
        w.write_u64::<LE>(p as u64)?;
    }
    for &r in s.rows() {
        w.write_u32::<LE>(r)?;
    }
    for &v in s.values() {
        w.write_f64::<LE>(v)?;
    }
    let mut bitmap = vec![0u8; n.div_ceil(8)];
    for &j in s.dangling() {
        bitmap[j as usize / 8] |= 1 << (j % 8);
    }
    w.write_all(&bitmap)?;
    w.flush()?;
    Ok(())
}

pub fn read_matrix<R: Read>(mut r: R) -> Result<StochasticMatrix> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Snapshot("bad magic, not a matrix snapshot".into()));
    }
    let version = r.read_u32::<LE>()?;
    if version != VERSION {
        return Err(Error::Snapshot(format!("unsupported version {version}")));
    }
    let n = r.read_u64::<LE>()? as usize;
    let nnz = r.read_u64::<LE>()? as usize;
    let col_ptr = (0..=n)
        .map(|_| r.read_u64::<LE>().map(|p| p as usize))
        .collect::<Result<Vec<_>, _>>()?;
    if col_ptr.first() != Some(&0)
        || col_ptr.last() != Some(&nnz)
        || col_ptr.windows(2).any(|w| w[0] > w[1])
    {
        return Err(Error::Snapshot("column offsets are inconsistent".into()));
    }
    let rows = (0..nnz)
        .map(|_| r.read_u32::<LE>())
        .collect::<Result<Vec<_>, _>>()?;
    if rows.iter().any(|&i| i as usize >= n) {
        return Err(Error::Snapshot("row index out of range".into()));
    }
    let values = (0..nnz)
        .map(|_| r.read_f64::<LE>())
        .collect::<Result<Vec<_>, _>>()?;
    let mut bitmap = vec![0u8; n.div_ceil(8)];
    r.read_exact(&mut bitmap)?;
    let dangling: Vec<u32> = (0..n as u32)
        .filter(|&j| bitmap[j as usize / 8] & (1 << (j % 8)) != 0)
        .collect();
    for &j in &dangling {
        if col_ptr[j as usize] != col_ptr[j as usize + 1] {
            return Err(Error::Snapshot(format!(
                "dangling column {j} stores entries"
            )));
        }
    }
    Ok(StochasticMatrix::from_parts(
        n, col_ptr, rows, values, dangling,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{column_normalize, WeightedAdjacency};

    #[test]
    fn round_trip() {
        let a = WeightedAdjacency::from_triplets(
            11,
            vec![(0, 1, 3.0), (0, 4, 1.0), (2, 10, 1.0), (9, 3, 2.5)],
        )
        .unwrap();
        let s = column_normalize(&a);
        let mut buf = Vec::new();
        write_matrix(&mut buf, &s).unwrap();
        assert_eq!(read_matrix(buf.as_slice()).unwrap(), s);
        buf[0] = b'X';
        assert!(read_matrix(buf.as_slice()).is_err());
    }
}
