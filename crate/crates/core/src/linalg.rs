//! Dense determinant kernels shared by the measure, kernel and Toeplitz code.

use nalgebra::DMatrix;
use num_traits::{One, Zero};
use std::ops::{Div, Mul, Neg, Sub};

/// Determinant by LU with partial pivoting.
pub fn lu_determinant(a: DMatrix<f64>) -> f64 {
    if a.nrows() == 0 {
        return 1.0;
    }
    a.lu().determinant()
}

/// Fraction-free (Bareiss) elimination. Exact over any integral domain in
/// which the intermediate divisions are exact, in particular over rationals.
pub fn bareiss_determinant<T>(mut a: Vec<Vec<T>>) -> T
where
    T: Clone + Zero + One + PartialEq + Neg<Output = T>,
    for<'a> &'a T: Mul<&'a T, Output = T> + Sub<&'a T, Output = T> + Div<&'a T, Output = T>,
{
    let n = a.len();
    if n == 0 {
        return T::one();
    }
    let mut sign_flip = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return T::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = &t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign_flip {
        -det
    } else {
        det
    }
}

/// Outcome of a Cholesky sweep of a symmetric matrix expected to be PSD.
#[derive(Debug, Clone, PartialEq)]
pub struct LeadingMinors {
    /// `minors[k]` is the determinant of the leading `(k+1) x (k+1)` block.
    pub minors: Vec<f64>,
    /// Set when a pivot fell below `-INDEFINITE_TOL`; minors from that index
    /// on are not filled in and the caller must fall back to LU.
    pub indefinite_at: Option<usize>,
}

pub const INDEFINITE_TOL: f64 = 1e-10;

/// Cholesky factorization that records every leading principal minor. A
/// pivot in `[-INDEFINITE_TOL, 0]` marks a numerically singular block; all
/// larger minors are then zero (the matrices handled here have minors that
/// decrease with size).
pub fn cholesky_leading_minors(a: &DMatrix<f64>) -> LeadingMinors {
    let n = a.nrows();
    let mut l = DMatrix::<f64>::zeros(n, n);
    let mut minors = Vec::with_capacity(n);
    let mut det = 1.0;
    for k in 0..n {
        let mut pivot = a[(k, k)];
        for j in 0..k {
            pivot -= l[(k, j)] * l[(k, j)];
        }
        if pivot < -INDEFINITE_TOL {
            return LeadingMinors {
                minors,
                indefinite_at: Some(k),
            };
        }
        if pivot <= f64::MIN_POSITIVE {
            minors.resize(n, 0.0);
            return LeadingMinors {
                minors,
                indefinite_at: None,
            };
        }
        det *= pivot;
        minors.push(det);
        let root = pivot.sqrt();
        l[(k, k)] = root;
        for i in k + 1..n {
            let mut v = a[(i, k)];
            for j in 0..k {
                v -= l[(i, j)] * l[(k, j)];
            }
            l[(i, k)] = v / root;
        }
    }
    LeadingMinors {
        minors,
        indefinite_at: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn bareiss_matches_hand_values() {
        let a = vec![
            vec![q(2, 1), q(1, 2), q(0, 1)],
            vec![q(1, 3), q(0, 1), q(1, 1)],
            vec![q(0, 1), q(4, 1), q(1, 5)],
        ];
        // 2*(0*1/5 - 1*4) - 1/2*(1/3*1/5 - 0) = -8 - 1/30
        assert_eq!(bareiss_determinant(a), q(-241, 30));
        let zero_pivot = vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]];
        assert_eq!(bareiss_determinant(zero_pivot), q(-1, 1));
        assert_eq!(bareiss_determinant::<BigRational>(vec![]), q(1, 1));
    }

    #[test]
    fn cholesky_minors_match_lu() {
        let a = DMatrix::from_row_slice(3, 3, &[4.0, 1.0, 0.5, 1.0, 3.0, 0.2, 0.5, 0.2, 2.0]);
        let res = cholesky_leading_minors(&a);
        assert!(res.indefinite_at.is_none());
        for k in 1..=3 {
            let sub = a.view((0, 0), (k, k)).into_owned();
            assert!((res.minors[k - 1] - lu_determinant(sub)).abs() < 1e-12);
        }
    }

    #[test]
    fn cholesky_flags_indefinite() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert_eq!(cholesky_leading_minors(&a).indefinite_at, Some(1));
    }
}
