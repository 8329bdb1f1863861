//! Small exact linear algebra: determinants, inverses, and linear solves
//! over the rationals. Matrices here are tiny (one row per polynomial
//! monomial), so simple dense algorithms are appropriate.

use num::{BigInt, BigRational, One, Zero};

use crate::arith::phase::Rational;

/// Determinant by fraction-free style Gaussian elimination over Q.
pub fn determinant(mat: &[Vec<BigInt>]) -> BigInt {
    let n = mat.len();
    assert!(mat.iter().all(|r| r.len() == n));
    let mut a: Vec<Vec<Rational>> = mat
        .iter()
        .map(|row| row.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let mut det = Rational::one();
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !a[r][col].is_zero()) {
            Some(p) => p,
            None => return BigInt::zero(),
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col].clone();
        let inv = a[col][col].clone();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &inv;
            for c in col..n {
                let t = &factor * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    assert!(det.denom().is_one());
    det.numer().clone()
}

/// Exact inverse over Q. Returns `None` when singular.
pub fn inverse(mat: &[Vec<BigInt>]) -> Option<Vec<Vec<Rational>>> {
    let n = mat.len();
    assert!(mat.iter().all(|r| r.len() == n));
    let mut a: Vec<Vec<Rational>> = mat
        .iter()
        .map(|row| row.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let mut inv: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(pivot, col);
        inv.swap(pivot, col);
        let p = a[col][col].clone();
        for c in 0..n {
            a[col][c] /= &p;
            inv[col][c] /= &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in 0..n {
                let t = &factor * &a[col][c];
                a[r][c] -= t;
                let t = &factor * &inv[col][c];
                inv[r][c] -= t;
            }
        }
    }
    Some(inv)
}

/// Solves `A·x = b` exactly. Returns `None` when `A` is singular.
pub fn solve(mat: &[Vec<BigInt>], b: &[Rational]) -> Option<Vec<Rational>> {
    let inv = inverse(mat)?;
    let n = mat.len();
    Some(
        (0..n)
            .map(|i| (0..n).map(|j| &inv[i][j] * &b[j]).fold(Rational::zero(), |s, t| s + t))
            .collect(),
    )
}
