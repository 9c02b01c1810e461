//! Small exact linear-algebra helpers shared across modules.

use crate::rational::Rational;
use num::Zero;

/// Determinant of a square rational matrix by fraction-free-enough Gaussian
/// elimination (exact arithmetic, so only the pivoting order matters).
pub(crate) fn determinant(matrix: &[Vec<Rational>]) -> Rational {
    let n = matrix.len();
    debug_assert!(matrix.iter().all(|r| r.len() == n));
    let mut m: Vec<Vec<Rational>> = matrix.to_vec();
    let mut det = Rational::from_integer(1.into());
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !m[r][col].is_zero()) {
            Some(r) => r,
            None => return Rational::zero(),
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= &m[col][col];
        let inv = m[col][col].clone();
        let (upper, lower) = m.split_at_mut(col + 1);
        let pivot_row = &upper[col];
        for row in lower {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &inv;
            for (cell, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                let delta = &factor * p;
                *cell -= delta;
            }
        }
    }
    det
}

/// Matrix product of two square rational matrices of equal size.
pub(crate) fn multiply(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    let mut out = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                let delta = &a[i][k] * &b[k][j];
                out[i][j] += delta;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn determinant_of_known_matrices() {
        assert_eq!(determinant(&[vec![rat(3, 1)]]), rat(3, 1));
        assert_eq!(
            determinant(&[vec![rat(1, 2), rat(2, 1)], vec![rat(-1, 4), rat(1, 1)]]),
            rat(1, 1)
        );
        let w = [
            vec![rat(1, 1), rat(2, 1), rat(3, 1)],
            vec![rat(1, 1), rat(1, 1), rat(3, 1)],
            vec![rat(2, 1), rat(1, 1), rat(1, 1)],
        ];
        assert_eq!(determinant(&w), rat(5, 1));
        let singular = [
            vec![rat(1, 1), rat(2, 1)],
            vec![rat(2, 1), rat(4, 1)],
        ];
        assert_eq!(determinant(&singular), rat(0, 1));
    }

    #[test]
    fn multiply_matches_hand_product() {
        let a = [vec![rat(1, 1), rat(2, 1)], vec![rat(0, 1), rat(1, 1)]];
        let b = [vec![rat(3, 1), rat(0, 1)], vec![rat(1, 2), rat(1, 1)]];
        assert_eq!(
            multiply(&a, &b),
            vec![vec![rat(4, 1), rat(2, 1)], vec![rat(1, 2), rat(1, 1)]]
        );
    }
}
