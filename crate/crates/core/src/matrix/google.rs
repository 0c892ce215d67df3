use super::{Model, StochasticMatrix, TeleportVector};
use crate::error::{Error, Result};

pub const DEFAULT_ALPHA: f64 = 0.85;

/// `G = alpha S + (1 - alpha) v e^T`, kept in factored form.
#[derive(Debug, Clone, PartialEq)]
pub struct GoogleMatrix {
    pub s: StochasticMatrix,
    pub teleport: TeleportVector,
    pub alpha: f64,
}

/// Pairs `S` with the model's teleport: uniform for `nowc` and `wc`, the
/// pageview vector for `wcpv`.
pub fn assemble(
    model: Model,
    s: StochasticMatrix,
    pageview_teleport: Option<TeleportVector>,
    alpha: f64,
) -> Result<GoogleMatrix> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidAlpha(alpha));
    }
    let n = s.dim();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let teleport = match model {
        Model::Nowc | Model::Wc => TeleportVector::uniform(n),
        Model::Wcpv => pageview_teleport.ok_or(Error::MissingTeleport)?,
    };
    if teleport.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: teleport.len(),
        });
    }
    Ok(GoogleMatrix { s, teleport, alpha })
}

impl GoogleMatrix {
    pub fn dim(&self) -> usize {
        self.s.dim()
    }

    /// `G x`, computed as sparse matvec, then dangling correction, then
    /// teleport (scaled by the mass of `x`).
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mass: f64 = x.iter().sum();
        let mut y = self.s.apply(x);
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.alpha * *yi + (1.0 - self.alpha) * self.teleport.get(i) * mass;
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{column_normalize, WeightedAdjacency};

    fn s3() -> StochasticMatrix {
        column_normalize(
            &WeightedAdjacency::from_triplets(3, vec![(0, 1, 2.0), (1, 2, 1.0)]).unwrap(),
        )
    }

    #[test]
    fn uniform_for_wc() {
        let g = assemble(Model::Wc, s3(), None, DEFAULT_ALPHA).unwrap();
        assert_eq!(g.teleport, TeleportVector::uniform(3));
        assert_eq!(g.alpha, 0.85);
    }

    #[test]
    fn pageview_for_wcpv() {
        let v = TeleportVector::Pageview {
            values: vec![0.5, 0.5, 0.0],
        };
        let g = assemble(Model::Wcpv, s3(), Some(v.clone()), 0.85).unwrap();
        assert_eq!(g.teleport, v);
        assert!(matches!(
            assemble(Model::Wcpv, s3(), None, 0.85),
            Err(Error::MissingTeleport)
        ));
    }

    #[test]
    fn alpha_bounds() {
        for a in [1.0, 0.0, -0.1, f64::NAN] {
            assert!(matches!(
                assemble(Model::Nowc, s3(), None, a),
                Err(Error::InvalidAlpha(_))
            ));
        }
    }

    #[test]
    fn dimension_check() {
        let v = TeleportVector::Pageview { values: vec![1.0] };
        assert!(assemble(Model::Wcpv, s3(), Some(v), 0.85).is_err());
    }

    #[test]
    fn preserves_probability() {
        let v = TeleportVector::Pageview {
            values: vec![0.2, 0.0, 0.8],
        };
        let g = assemble(Model::Wcpv, s3(), Some(v), 0.85).unwrap();
        let y = g.apply(&[0.1, 0.6, 0.3]);
        assert!((y.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }
}
