//! The two moment-determinant systems. Ã acts on the shifted coefficients
//! a_{nk} and uses adjusted moments; A acts on the monomial coefficients
//! c_{nk} and uses canonical moments. Both carry rhs (0, …, 0, K).

use crate::algebra::{binomial, Ring, Q};
use crate::error::{Error, Result};
use crate::linalg::{bareiss_det, cofactor_det, cramer, lu_solve_refined, FloatSolution, Matrix};
use crate::moments::{adjusted_recursion_symbolic, canonical_symbolic, MomentKind, MomentTable};
use crate::poly::Poly;

use super::{
    check_degree, condition_functional, literature_normalization_over_gamma, Coefficient, Normalization, X1Polynomial,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    /// Monomial basis, canonical moments.
    A,
    /// Shifted basis, adjusted moments.
    ATilde,
}

impl Flavor {
    pub fn moment_kind(self) -> MomentKind {
        match self {
            Flavor::A => MomentKind::Canonical,
            Flavor::ATilde => MomentKind::Adjusted,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentMatrix<E> {
    pub n: usize,
    pub flavor: Flavor,
    pub entries: Matrix<E>,
    pub rhs: Vec<E>,
}

impl<E: Ring> MomentMatrix<E> {
    fn new(n: usize, flavor: Flavor, entries: Matrix<E>, k: E) -> Self {
        let mut rhs = vec![E::zero(); n + 1];
        rhs[n] = k;
        MomentMatrix {
            n,
            flavor,
            entries,
            rhs,
        }
    }

    pub fn normalization_constant(&self) -> &E {
        &self.rhs[self.n]
    }
}

fn require_moments(n: usize, available: usize) -> Result<()> {
    check_degree(n)?;
    if available < 2 * n + 1 {
        return Err(Error::InsufficientMoments {
            needed: 2 * n,
            available: available.saturating_sub(1),
        });
    }
    Ok(())
}

/// Ã from adjusted moments μ̃_0..μ̃_{2n}:
/// row 1 `[−1, 1, 0, …]`, row 2 `μ̃_k + μ̃_{k+1}`, row s+1 `μ̃_{k+s}`.
pub fn build_matrix_a_tilde_generic<E: Ring>(n: usize, mu: &[E], k: E) -> Result<MomentMatrix<E>> {
    require_moments(n, mu.len())?;
    let mut rows = Vec::with_capacity(n + 1);
    let mut first = vec![E::zero(); n + 1];
    first[0] = E::from_i64(-1);
    first[1] = E::one();
    rows.push(first);
    rows.push((0..=n).map(|j| mu[j].add(&mu[j + 1])).collect());
    for s in 2..=n {
        rows.push((0..=n).map(|j| mu[j + s].clone()).collect());
    }
    Ok(MomentMatrix::new(n, Flavor::ATilde, rows, k))
}

/// A from canonical moments μ_0..μ_{2n}:
/// row 1 `[−1, k(−α)^{k−1} − (−α)^k]`, row 2 `μ_{k+1} + (α+1)μ_k`,
/// row s+1 `Σ_m C(s,m) μ_{m+k} α^{s−m}`.
pub fn build_matrix_a_generic<E: Ring>(n: usize, mu: &[E], alpha: &E, k: E) -> Result<MomentMatrix<E>> {
    require_moments(n, mu.len())?;
    let mut rows = Vec::with_capacity(n + 1);
    rows.push(condition_functional(n + 1, alpha));
    let a1 = alpha.add(&E::one());
    rows.push((0..=n).map(|j| mu[j + 1].add(&a1.mul(&mu[j]))).collect());
    for s in 2..=n {
        let weights: Vec<E> = (0..=s)
            .map(|m| E::from_rational(&Q::from_integer(binomial(s, m))).mul(&alpha.pow(s - m)))
            .collect();
        rows.push(
            (0..=n)
                .map(|j| {
                    weights
                        .iter()
                        .enumerate()
                        .fold(E::zero(), |acc, (m, w)| acc.add(&w.mul(&mu[m + j])))
                })
                .collect(),
        );
    }
    Ok(MomentMatrix::new(n, Flavor::A, rows, k))
}

fn require_table(table: &MomentTable, flavor: Flavor) -> Result<()> {
    if table.kind != flavor.moment_kind() {
        return Err(Error::Config(format!(
            "{flavor:?} needs {} moments, got {}",
            flavor.moment_kind(),
            table.kind
        )));
    }
    Ok(())
}

pub fn build_matrix_a_tilde(n: usize, adjusted: &MomentTable, k: f64) -> Result<MomentMatrix<f64>> {
    require_table(adjusted, Flavor::ATilde)?;
    build_matrix_a_tilde_generic(n, &adjusted.values, k)
}

pub fn build_matrix_a(n: usize, canonical: &MomentTable, k: f64) -> Result<MomentMatrix<f64>> {
    require_table(canonical, Flavor::A)?;
    build_matrix_a_generic(n, &canonical.values, &canonical.alpha, k)
}

/// Solve a floating system by refined LU. Returns the polynomial and the
/// solver diagnostics.
pub fn solve_polynomial(
    matrix: &MomentMatrix<f64>,
    alpha: f64,
    normalization: Normalization<f64>,
) -> Result<(X1Polynomial<f64>, FloatSolution)> {
    let k = *matrix.normalization_constant();
    if k == 0.0 {
        return Err(Error::ZeroNormalization);
    }
    let sol = lu_solve_refined(&matrix.entries, &matrix.rhs)?;
    log::debug!(
        "{:?} n={} alpha={alpha}: condition {:.3e}, det {:.6e}, residual {:.3e}",
        matrix.flavor,
        matrix.n,
        sol.condition,
        sol.determinant,
        sol.residual
    );
    let coeffs = Poly::new(sol.x.clone());
    let poly = match matrix.flavor {
        Flavor::A => X1Polynomial::from_x(matrix.n, alpha, coeffs, normalization)?,
        Flavor::ATilde => X1Polynomial::from_shifted(matrix.n, alpha, coeffs, normalization)?,
    };
    Ok((poly, sol))
}

/// Determinant used by the exact Cramer solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetMethod {
    Bareiss,
    /// Literal Laplace expansion; factorial cost.
    Cofactor,
}

/// Exact solve with literature normalization by Bareiss–Cramer.
pub fn solve_exact<C: Coefficient>(n: usize, flavor: Flavor, alpha: &C) -> Result<X1Polynomial<C>> {
    solve_exact_with(n, flavor, alpha, Normalization::Literature, DetMethod::Bareiss)
}

/// Exact Cramer solve. Every moment is divided by Γ(α), which leaves a
/// polynomial in τ = μ̃₁/Γ(α) over `C`; each quotient det(A_k)/det(A) must
/// come out free of τ. `Normalization::Raw(c)` means K = c·Γ(α).
pub fn solve_exact_with<C: Coefficient>(
    n: usize,
    flavor: Flavor,
    alpha: &C,
    normalization: Normalization<C>,
    method: DetMethod,
) -> Result<X1Polynomial<C>> {
    check_degree(n)?;
    let k_over_gamma = match &normalization {
        Normalization::Literature => literature_normalization_over_gamma(n, alpha),
        Normalization::Raw(c) => c.clone(),
    };
    if k_over_gamma.is_zero() {
        return Err(Error::ZeroNormalization);
    }
    let k = Poly::constant(k_over_gamma);
    let symbolic = match flavor {
        Flavor::A => canonical_symbolic(2 * n),
        Flavor::ATilde => adjusted_recursion_symbolic(2 * n),
    };
    let mu: Vec<Poly<C>> = symbolic.iter().map(|m| m.over_gamma(alpha)).collect();
    let matrix = match flavor {
        Flavor::A => build_matrix_a_generic(n, &mu, &Poly::constant(alpha.clone()), k)?,
        Flavor::ATilde => build_matrix_a_tilde_generic(n, &mu, k)?,
    };
    let det: fn(&Matrix<Poly<C>>) -> Poly<C> = match method {
        DetMethod::Bareiss => bareiss_det,
        DetMethod::Cofactor => cofactor_det,
    };
    let solution = cramer(&matrix.entries, &matrix.rhs, det)?;
    let coeffs = solution
        .into_iter()
        .enumerate()
        .map(|(j, p)| match p.degree() {
            None => Ok(C::zero()),
            Some(0) => Ok(p.coeff(0)),
            Some(_) => Err(Error::NotConstant(format!("coefficient {j} depends on μ̃₁"))),
        })
        .collect::<Result<Vec<C>>>()?;
    let coeffs = Poly::new(coeffs);
    match flavor {
        Flavor::A => X1Polynomial::from_x(n, alpha.clone(), coeffs, normalization),
        Flavor::ATilde => X1Polynomial::from_shifted(n, alpha.clone(), coeffs, normalization),
    }
}
