//! Small dense linear algebra: partial-pivot LU with iterative refinement
//! for floating systems, and Bareiss fraction-free elimination plus literal
//! cofactor expansion for exact systems over any [`Ring`].

use crate::algebra::Ring;
use crate::error::{Error, Result};

pub type Matrix<R> = Vec<Vec<R>>;

/// Solution of a floating linear system together with diagnostics.
#[derive(Clone, Debug)]
pub struct FloatSolution {
    pub x: Vec<f64>,
    /// ‖A‖₁ ‖A⁻¹‖₁.
    pub condition: f64,
    /// ‖Ax − b‖∞ after refinement.
    pub residual: f64,
    pub determinant: f64,
}

struct Lu {
    lu: Matrix<f64>,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    fn factor(a: &Matrix<f64>) -> Option<Lu> {
        let n = a.len();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| lu[i][k].abs().total_cmp(&lu[j][k].abs()))?;
            if lu[p][k] == 0.0 {
                return None;
            }
            if p != k {
                lu.swap(p, k);
                perm.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                let f = lu[i][k] / lu[k][k];
                lu[i][k] = f;
                for j in k + 1..n {
                    lu[i][j] -= f * lu[k][j];
                }
            }
        }
        Some(Lu { lu, perm, sign })
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.len();
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                y[i] -= self.lu[i][j] * y[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                y[i] -= self.lu[i][j] * y[j];
            }
            y[i] /= self.lu[i][i];
        }
        y
    }

    fn det(&self) -> f64 {
        self.sign * (0..self.lu.len()).map(|i| self.lu[i][i]).product::<f64>()
    }
}

fn norm1(a: &Matrix<f64>) -> f64 {
    let n = a.len();
    (0..n)
        .map(|j| (0..n).map(|i| a[i][j].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Residual b − Ax accumulated with fused multiply-adds.
fn residual(a: &Matrix<f64>, x: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter()
        .zip(b)
        .map(|(row, bi)| row.iter().zip(x).fold(*bi, |acc, (aij, xj)| (-aij).mul_add(*xj, acc)))
        .collect()
}

/// Partial-pivot LU solve with a few steps of iterative refinement. Columns
/// are scaled to unit max-norm first; the reported condition number is that
/// of the scaled matrix.
pub fn lu_solve_refined(a: &Matrix<f64>, b: &[f64]) -> Result<FloatSolution> {
    let n = a.len();
    let scale: Vec<f64> = (0..n)
        .map(|j| {
            let m = (0..n).fold(0.0_f64, |m, i| m.max(a[i][j].abs()));
            if m > 0.0 {
                1.0 / m
            } else {
                1.0
            }
        })
        .collect();
    let scaled: Matrix<f64> = a
        .iter()
        .map(|row| row.iter().zip(&scale).map(|(v, s)| v * s).collect())
        .collect();
    let lu = Lu::factor(&scaled).ok_or(Error::Singular {
        condition: f64::INFINITY,
    })?;
    let mut y = lu.solve(b);
    for _ in 0..3 {
        let r = residual(&scaled, &y, b);
        let dy = lu.solve(&r);
        for (yi, d) in y.iter_mut().zip(&dy) {
            *yi += d;
        }
    }
    let x: Vec<f64> = y.iter().zip(&scale).map(|(v, s)| v * s).collect();
    let inv_norm = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            lu.solve(&e).iter().map(|v| v.abs()).sum::<f64>()
        })
        .fold(0.0, f64::max);
    let condition = norm1(&scaled) * inv_norm;
    if !condition.is_finite() || condition > 1.0 / f64::EPSILON {
        return Err(Error::Singular { condition });
    }
    let res = residual(a, &x, b).iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let determinant = lu.det() / scale.iter().product::<f64>();
    Ok(FloatSolution {
        x,
        condition,
        residual: res,
        determinant,
    })
}

/// Determinant by partial-pivot LU.
pub fn det_lu(a: &Matrix<f64>) -> f64 {
    Lu::factor(a).map_or(0.0, |lu| lu.det())
}

/// Bareiss fraction-free determinant over an integral domain.
pub fn bareiss_det<R: Ring>(a: &Matrix<R>) -> R {
    let n = a.len();
    if n == 0 {
        return R::one();
    }
    let mut m = a.clone();
    let mut negate = false;
    let mut prev = R::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(p) => {
                    m.swap(p, k);
                    negate = !negate;
                }
                None => return R::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num
                    .exact_div(&prev)
                    .expect("Bareiss division is exact in an integral domain");
            }
            m[i][k] = R::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

/// Literal Laplace expansion along the first row. Exponential cost; only
/// meant as an independent check for tiny systems.
pub fn cofactor_det<R: Ring>(a: &Matrix<R>) -> R {
    let n = a.len();
    match n {
        0 => R::one(),
        1 => a[0][0].clone(),
        _ => {
            let mut acc = R::zero();
            for j in 0..n {
                if a[0][j].is_zero() {
                    continue;
                }
                let minor: Matrix<R> = a[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = a[0][j].mul(&cofactor_det(&minor));
                acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}

/// `A` with column `k` replaced by `b`.
pub fn replace_column<R: Ring>(a: &Matrix<R>, k: usize, b: &[R]) -> Matrix<R> {
    let mut m = a.clone();
    for (row, bi) in m.iter_mut().zip(b) {
        row[k] = bi.clone();
    }
    m
}

/// Cramer's rule x_k = det(A_k) / det(A) with a caller-chosen determinant.
/// Fails if det(A) vanishes or a quotient is not exact in the ring.
pub fn cramer<R: Ring>(a: &Matrix<R>, b: &[R], det: impl Fn(&Matrix<R>) -> R) -> Result<Vec<R>> {
    let d = det(a);
    if d.is_zero() {
        return Err(Error::Singular {
            condition: f64::INFINITY,
        });
    }
    (0..a.len())
        .map(|k| {
            det(&replace_column(a, k, b))
                .exact_div(&d)
                .ok_or_else(|| Error::NotConstant(format!("det(A_{k}) / det(A) is not exact in the coefficient ring")))
        })
        .collect()
}
