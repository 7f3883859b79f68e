//! Small statistics helpers: least squares and rank correlation.

use crate::error::{Error, Result};

/// Relative residual norm below which a column counts as a linear
/// combination of the columns before it.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares {
    /// One coefficient per column; dropped columns get 0.
    pub coef: Vec<f64>,
    /// Indices of columns dropped as linearly dependent on earlier ones.
    pub dropped: Vec<usize>,
}

/// Ordinary least squares of `y` on the columns of `x` (column-major) by
/// modified Gram–Schmidt. Columns that are numerically dependent on earlier
/// columns are dropped instead of failing.
pub fn least_squares(columns: &[Vec<f64>], y: &[f64]) -> Result<LeastSquares> {
    let n = y.len();
    if columns.iter().any(|c| c.len() != n) {
        return Err(Error::Regression("columns and response differ in length".into()));
    }
    let p = columns.len();
    // q holds orthonormal columns; r is upper triangular over kept columns.
    let mut q: Vec<Vec<f64>> = Vec::new();
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    let mut r = vec![vec![0.0; p]; p];
    for (j, col) in columns.iter().enumerate() {
        let scale = norm(col);
        let mut v = col.clone();
        let mut coeffs = Vec::with_capacity(q.len());
        for qk in &q {
            let c = dot(qk, &v);
            for (vi, qi) in v.iter_mut().zip(qk) {
                *vi -= c * qi;
            }
            coeffs.push(c);
        }
        let rest = norm(&v);
        if scale == 0.0 || rest <= RANK_TOL * scale {
            dropped.push(j);
            continue;
        }
        let row = kept.len();
        for (k, c) in coeffs.into_iter().enumerate() {
            r[k][row] = c;
        }
        r[row][row] = rest;
        v.iter_mut().for_each(|x| *x /= rest);
        q.push(v);
        kept.push(j);
    }
    if kept.is_empty() {
        return Err(Error::Regression("every regressor is zero".into()));
    }
    // Solve R b = Qᵀ y by back substitution.
    let k = kept.len();
    let mut rhs: Vec<f64> = q.iter().map(|qk| dot(qk, y)).collect();
    let mut b = vec![0.0; k];
    for i in (0..k).rev() {
        let s: f64 = (i + 1..k).map(|j| r[i][j] * b[j]).sum();
        b[i] = (rhs[i] - s) / r[i][i];
        rhs[i] = b[i];
    }
    let mut coef = vec![0.0; p];
    for (bi, &j) in b.into_iter().zip(&kept) {
        coef[j] = bi;
    }
    Ok(LeastSquares { coef, dropped })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Ranks starting at 1, ties sharing their average rank.
pub fn ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut out = vec![0.0; x.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && x[idx[j + 1]] == x[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = avg;
        }
        i = j + 1;
    }
    out
}

/// Pearson correlation; `None` when either input is constant.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    (sxx > 0.0 && syy > 0.0).then(|| sxy / (sxx * syy).sqrt())
}

/// Spearman rank correlation.
pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    pearson(&ranks(x), &ranks(y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_linear_model() {
        let x1: Vec<f64> = (0..20).map(|i| (i as f64 * 0.37).sin()).collect();
        let x2: Vec<f64> = (0..20).map(|i| (i * i) as f64 / 50.0).collect();
        let ones = vec![1.0; 20];
        let y: Vec<f64> = (0..20).map(|i| 0.3 - 1.7 * x1[i] + 0.25 * x2[i]).collect();
        let fit = least_squares(&[ones, x1, x2], &y).unwrap();
        assert!(fit.dropped.is_empty());
        for (c, want) in fit.coef.iter().zip([0.3, -1.7, 0.25]) {
            assert!((c - want).abs() < 1e-12);
        }
    }

    #[test]
    fn drops_collinear_column() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let twice: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
        let y: Vec<f64> = x.iter().map(|v| 1.0 + 3.0 * v).collect();
        let fit = least_squares(&[vec![1.0; 10], x, twice], &y).unwrap();
        assert_eq!(fit.dropped, vec![2]);
        assert!((fit.coef[0] - 1.0).abs() < 1e-12 && (fit.coef[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn residuals_orthogonal_to_regressors() {
        let x: Vec<f64> = (0..15).map(|i| (i as f64).sqrt()).collect();
        let y: Vec<f64> = (0..15).map(|i| ((i * 7) % 5) as f64).collect();
        let fit = least_squares(&[vec![1.0; 15], x.clone()], &y).unwrap();
        let resid: Vec<f64> = (0..15).map(|i| y[i] - fit.coef[0] - fit.coef[1] * x[i]).collect();
        assert!(resid.iter().sum::<f64>().abs() < 1e-10);
        assert!(dot(&resid, &x).abs() < 1e-10);
    }

    #[test]
    fn rank_correlation() {
        assert_eq!(ranks(&[3.0, 1.0, 3.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
        let x = [1.0, 2.0, 3.0, 4.0];
        assert!((spearman(&x, &[1.0, 8.0, 27.0, 64.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!((spearman(&x, &[4.0, 3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(spearman(&x, &[1.0; 4]), None);
    }
}
