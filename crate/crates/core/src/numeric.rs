//! Small numerical kernels: dense solve over any [`Scalar`], pairwise
//! summation and polynomial extrapolation to zero.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
///
/// Over an exact field pivoting only serves to skip zeros; over floats it
/// picks the largest magnitude in the column.
pub fn solve<T: Scalar>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Result<Vec<T>> {
    let n = b.len();
    if a.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(Error::SizeMismatch { left: a.len(), right: n });
    }
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).expect("comparable"))
            .ok_or_else(|| Error::Numerical(format!("singular matrix at column {col}")))?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = T::one() / a[col][col].clone();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone() * inv.clone();
            for c in col..n {
                let delta = factor.clone() * a[col][c].clone();
                a[r][c] = a[r][c].clone() - delta;
            }
            b[r] = b[r].clone() - factor * b[col].clone();
        }
    }
    let mut x = vec![T::zero(); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc = acc - a[r][c].clone() * x[c].clone();
        }
        x[r] = acc / a[r][r].clone();
    }
    Ok(x)
}

/// Pairwise summation over a fixed binary tree: split at `len / 2`
/// recursively, summing runs of at most 8 sequentially.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (l, r) = xs.split_at(xs.len() / 2);
    pairwise_sum(l) + pairwise_sum(r)
}

/// Value at `h = 0` of the polynomial through `(h_i, y_i)` (Neville).
///
/// With `h = 1/n` this is Richardson extrapolation of a sequence with an
/// expansion in powers of `1/n`.
pub fn extrapolate_to_zero<T: Scalar>(h: &[T], y: &[T]) -> Result<T> {
    if h.len() != y.len() || h.is_empty() {
        return Err(Error::SizeMismatch { left: h.len(), right: y.len() });
    }
    let mut p = y.to_vec();
    let m = h.len();
    for level in 1..m {
        for i in 0..m - level {
            let j = i + level;
            let denom = h[i].clone() - h[j].clone();
            if denom.is_zero() {
                return Err(Error::Domain("repeated abscissa in extrapolation".into()));
            }
            // P_{i..j}(0) = (h_i P_{i+1..j} - h_j P_{i..j-1}) / (h_i - h_j)
            p[i] = (h[i].clone() * p[i + 1].clone() - h[j].clone() * p[i].clone()) / denom;
        }
    }
    Ok(p[0].clone())
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
