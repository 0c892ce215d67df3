use std::io::Write;

use crate::error::{Error, Result};
use crate::rank::RankingList;

/// `eta_N(j)`: fraction of the top `j` of both lists they share.
/// `eta_O(j)`: fraction of positions `1..=j` holding the same node in both.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapCurve {
    pub eta_n: Vec<f64>,
    pub eta_o: Vec<f64>,
}

impl OverlapCurve {
    pub fn j_max(&self) -> usize {
        self.eta_n.len()
    }

    pub fn write_tsv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# j\teta_N\teta_O")?;
        for (j, (n, o)) in self.eta_n.iter().zip(&self.eta_o).enumerate() {
            writeln!(w, "{}\t{n}\t{o}", j + 1)?;
        }
        w.flush()
    }
}

pub fn overlap(a: &RankingList, b: &RankingList, j_max: usize) -> Result<OverlapCurve> {
    if a.len() != b.len() {
        return Err(Error::UniverseMismatch);
    }
    let n = a.len();
    if j_max == 0 || j_max > n {
        return Err(Error::DepthOutOfRange { j_max, n });
    }
    let mut in_a = vec![false; n];
    let mut in_b = vec![false; n];
    let (mut common, mut exact) = (0usize, 0usize);
    let mut eta_n = Vec::with_capacity(j_max);
    let mut eta_o = Vec::with_capacity(j_max);
    for (j, (&x, &y)) in a.order().iter().zip(b.order()).take(j_max).enumerate() {
        if x == y {
            exact += 1;
        }
        in_a[x as usize] = true;
        if in_b[x as usize] {
            common += 1;
        }
        in_b[y as usize] = true;
        if in_a[y as usize] {
            common += 1;
        }
        let depth = (j + 1) as f64;
        eta_n.push(common as f64 / depth);
        eta_o.push(exact as f64 / depth);
    }
    Ok(OverlapCurve { eta_n, eta_o })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn list(order: &[u32]) -> RankingList {
        RankingList::from_order(order.to_vec()).unwrap()
    }

    #[test]
    fn definition_case() {
        let c = overlap(&list(&[0, 1, 2]), &list(&[0, 2, 1]), 3).unwrap();
        assert_eq!(c.eta_n[2], 1.0);
        assert_eq!(c.eta_o[2], 1.0 / 3.0);
        assert_eq!(c.eta_n[1], 0.5);
    }

    #[test]
    fn identical_lists() {
        let l = list(&[3, 1, 0, 2]);
        let c = overlap(&l, &l, 4).unwrap();
        assert!(c.eta_n.iter().chain(&c.eta_o).all(|&v| v == 1.0));
    }

    #[test]
    fn bad_inputs() {
        assert!(matches!(
            overlap(&list(&[0, 1]), &list(&[0]), 1),
            Err(Error::UniverseMismatch)
        ));
        assert!(overlap(&list(&[0, 1]), &list(&[1, 0]), 3).is_err());
        assert!(overlap(&list(&[0, 1]), &list(&[1, 0]), 0).is_err());
    }
}
