//! Dense LU solve with iterative refinement and a 1-norm condition estimate.

use crate::error::{BowtieError, Result};
use faer::linalg::solvers::{PartialPivLu, Solve};
use faer::{Mat, Par};

#[derive(Debug, Clone)]
pub struct DenseSolution {
    pub x: Vec<f64>,
    /// `||b - A x||_inf / (||A||_inf ||x||_inf + ||b||_inf)`.
    pub residual: f64,
    pub condition_estimate: f64,
    pub refinement_steps: usize,
}

fn mat_vec(a: &Mat<f64>, x: &[f64]) -> Vec<f64> {
    let (n, m) = (a.nrows(), a.ncols());
    let mut y = vec![0.0; n];
    for j in 0..m {
        let xj = x[j];
        if xj == 0.0 {
            continue;
        }
        let col = a.col(j);
        for i in 0..n {
            y[i] += col[i] * xj;
        }
    }
    y
}

fn lu_solve(lu: &PartialPivLu<f64>, b: &[f64], transpose: bool) -> Vec<f64> {
    let mut rhs = Mat::from_fn(b.len(), 1, |i, _| b[i]);
    if transpose {
        lu.solve_transpose_in_place(rhs.as_mut());
    } else {
        lu.solve_in_place(rhs.as_mut());
    }
    (0..b.len()).map(|i| rhs[(i, 0)]).collect()
}

fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Hager's estimate of `||A^{-1}||_1` from an LU factorisation.
fn inverse_norm1_estimate(lu: &PartialPivLu<f64>, n: usize) -> f64 {
    let mut x = vec![1.0 / n as f64; n];
    let mut est = 0.0;
    for _ in 0..5 {
        let y = lu_solve(lu, &x, false);
        est = y.iter().map(|v| v.abs()).sum();
        let xi: Vec<f64> = y.iter().map(|v| if *v >= 0.0 { 1.0 } else { -1.0 }).collect();
        let z = lu_solve(lu, &xi, true);
        let (jmax, zmax) = z
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |acc, (j, v)| if v.abs() > acc.1 { (j, v.abs()) } else { acc });
        let zx: f64 = z.iter().zip(&x).map(|(a, b)| a * b).sum();
        if zmax <= zx {
            break;
        }
        x = vec![0.0; n];
        x[jmax] = 1.0;
    }
    est
}

/// Solve `A x = b` by partial-pivoting LU with up to three refinement steps.
pub fn solve_dense(a: &Mat<f64>, b: &[f64], max_condition: f64) -> Result<DenseSolution> {
    let n = a.nrows();
    if a.ncols() != n || b.len() != n {
        return Err(BowtieError::Solve("dimension mismatch".into()));
    }
    if a.as_ref().norm_max().is_nan() || b.iter().any(|v| !v.is_finite()) {
        return Err(BowtieError::Solve("non-finite entries in the system".into()));
    }
    faer::set_global_parallelism(Par::Seq);
    let lu = a.partial_piv_lu();
    let mut x = lu_solve(&lu, b, false);
    if x.iter().any(|v| !v.is_finite()) {
        return Err(BowtieError::Solve("factorisation produced non-finite values".into()));
    }
    let a_inf = (0..n).map(|i| (0..n).map(|j| a[(i, j)].abs()).sum::<f64>()).fold(0.0, f64::max);
    let a_one = (0..n).map(|j| a.col(j).iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max);
    let b_inf = norm_inf(b);
    let mut steps = 0;
    let mut residual;
    loop {
        let ax = mat_vec(a, &x);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(b, ax)| b - ax).collect();
        residual = norm_inf(&r) / (a_inf * norm_inf(&x) + b_inf).max(f64::MIN_POSITIVE);
        if steps == 3 || residual < 1e-16 {
            break;
        }
        let dx = lu_solve(&lu, &r, false);
        let small = norm_inf(&dx) <= 1e-16 * norm_inf(&x);
        for (xi, d) in x.iter_mut().zip(&dx) {
            *xi += d;
        }
        steps += 1;
        if small {
            break;
        }
    }
    let condition_estimate = a_one * inverse_norm1_estimate(&lu, n);
    if !(condition_estimate < max_condition) {
        return Err(BowtieError::IllConditioned(condition_estimate));
    }
    Ok(DenseSolution { x, residual, condition_estimate, refinement_steps: steps })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system_and_estimates_condition() {
        let a = Mat::from_fn(3, 3, |i, j| [[4.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 2.0]][i][j]);
        let b = [1.0, 2.0, 3.0];
        let s = solve_dense(&a, &b, 1e12).unwrap();
        let ax = mat_vec(&a, &s.x);
        for i in 0..3 {
            assert!((ax[i] - b[i]).abs() < 1e-14);
        }
        assert!(s.condition_estimate > 1.0 && s.condition_estimate < 20.0);
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let a = Mat::from_fn(2, 2, |i, _| if i == 0 { 1.0 } else { 2.0 });
        assert!(solve_dense(&a, &[1.0, 2.0], 1e12).is_err());
    }
}
