//! Small dense helpers for reduced-size matrices.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::rank::l1_distance;

/// Stationary vector of a dense column-stochastic matrix by power iteration
/// from the uniform vector, renormalized to unit sum at every step.
pub fn dense_pagerank(m: &DMatrix<f64>, tol: f64, max_iter: usize) -> Result<Vec<f64>> {
    let n = m.nrows();
    dense_pagerank_from(m, vec![1.0 / n.max(1) as f64; n], tol, max_iter)
}

/// As [`dense_pagerank`], starting from `start` instead of the uniform vector.
pub fn dense_pagerank_from(m: &DMatrix<f64>, start: Vec<f64>, tol: f64, max_iter: usize) -> Result<Vec<f64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension {
            expected: m.nrows(),
            actual: m.ncols(),
        });
    }
    let n = m.nrows();
    if start.len() != n {
        return Err(Error::Dimension {
            expected: n,
            actual: start.len(),
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut p = start;
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..max_iter {
        matvec(m, &p, &mut next);
        let sum: f64 = next.iter().sum();
        next.iter_mut().for_each(|x| *x /= sum);
        residual = l1_distance(&next, &p);
        std::mem::swap(&mut p, &mut next);
        if residual < tol {
            return Ok(p);
        }
    }
    Err(Error::NotConverged {
        what: "dense pagerank",
        iterations: max_iter,
        residual,
    })
}

/// `y = M x`, summing each row in column order.
pub fn matvec(m: &DMatrix<f64>, x: &[f64], y: &mut [f64]) {
    y.iter_mut().for_each(|v| *v = 0.0);
    for (j, &xj) in x.iter().enumerate() {
        if xj == 0.0 {
            continue;
        }
        for (yi, &mij) in y.iter_mut().zip(m.column(j).iter()) {
            *yi += mij * xj;
        }
    }
}

pub fn column_sums(m: &DMatrix<f64>) -> Vec<f64> {
    m.column_iter().map(|c| c.iter().sum()).collect()
}
