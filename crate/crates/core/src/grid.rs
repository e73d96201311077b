//! Frequency grids used when comparing two exponents pointwise.

use crate::scalar::Scalar;

/// One-dimensional identity-check frequencies `±{0.1, 0.5, 1, 2, 5}`.
pub const AXIS: [f64; 10] = [-5.0, -2.0, -1.0, -0.5, -0.1, 0.1, 0.5, 1.0, 2.0, 5.0];

/// Cap on the number of tensor points for `d > 1`.
pub const MAX_POINTS: usize = 64;

/// Tensor grid `AXIS^d`, evenly thinned to [`MAX_POINTS`] when `d > 1`.
pub fn identity_grid<T: Scalar>(dim: usize) -> Vec<Vec<T>> {
    let n = AXIS.len();
    let total = n.pow(dim as u32);
    let point = |mut idx: usize| -> Vec<T> {
        let mut p = Vec::with_capacity(dim);
        for _ in 0..dim {
            p.push(T::of(AXIS[idx % n]));
            idx /= n;
        }
        p
    };
    if dim == 1 || total <= MAX_POINTS {
        return (0..total).map(point).collect();
    }
    (0..MAX_POINTS).map(|k| point(k * total / MAX_POINTS)).collect()
}

/// Frequencies along the first axis only: `y = (t, 0, …, 0)`.
pub fn axis_grid<T: Scalar>(values: &[f64], dim: usize) -> Vec<Vec<T>> {
    values
        .iter()
        .map(|&t| {
            let mut p = vec![T::zero(); dim];
            p[0] = T::of(t);
            p
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(identity_grid::<f64>(1).len(), 10);
        let g2 = identity_grid::<f64>(2);
        assert_eq!(g2.len(), 64);
        let g3 = identity_grid::<f64>(3);
        assert_eq!(g3.len(), 64);
        let mut dedup = g3.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), 64);
    }
}
