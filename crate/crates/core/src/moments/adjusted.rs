use crate::algebra::{binomial, factorial_f64, q_int, Ring, Q};
use crate::error::{Error, Result};
use crate::oracle::{self, QuadratureConfig};
use crate::poly::RationalPoly;
use crate::specfun::{exp_integral_scaled, gamma, upper_incomplete_gamma, weighted_beta_integral};

use super::{check_alpha, generating, MomentKind, MomentTable, Route, SymbolicMoment};

/// The two transcendental adjusted moments μ̃₀ and μ̃₁.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeedMoments {
    pub mu0: f64,
    pub mu1: f64,
}

/// μ̃₁ = e^α E_{1+α}(α) Γ(1+α) and μ̃₀ = Γ(α) − 2μ̃₁.
pub fn adjusted_seed_moments(alpha: f64) -> Result<SeedMoments> {
    check_alpha("adjusted_seed_moments", alpha)?;
    let mu1 = weighted_beta_integral(alpha, alpha)?;
    let mu0 = gamma(alpha)? - 2.0 * mu1;
    if !(mu0.is_finite() && mu1.is_finite()) {
        return Err(Error::Overflow("adjusted_seed_moments"));
    }
    Ok(SeedMoments { mu0, mu1 })
}

/// The three expressions for μ̃₁:
/// `[e^α E_{1+α}(α) Γ(1+α), Γ(α)(1 − α e^α E_α(α)), e^α α^α Γ(1+α) Γ(−α, α)]`.
pub fn first_moment_forms(alpha: f64) -> Result<[f64; 3]> {
    check_alpha("first_moment_forms", alpha)?;
    let g1 = gamma(1.0 + alpha)?;
    let a = exp_integral_scaled(1.0 + alpha, alpha)? * g1;
    let b = gamma(alpha)? * (1.0 - alpha * exp_integral_scaled(alpha, alpha)?);
    let c = (alpha + alpha * alpha.ln()).exp() * g1 * upper_incomplete_gamma(-alpha, alpha)?;
    Ok([a, b, c])
}

/// μ̃_{k+2} = (2α+k) μ̃_{k+1} + α(1−k) μ̃_k from the seeds, indices 0..=k_max.
pub fn adjusted_recursion(k_max: usize, seeds: SeedMoments, alpha: f64) -> Result<MomentTable> {
    check_alpha("adjusted_recursion", alpha)?;
    let mut values = vec![seeds.mu0, seeds.mu1];
    for k in 0..k_max.saturating_sub(1) {
        let kf = k as f64;
        values.push((2.0 * alpha + kf) * values[k + 1] + alpha * (1.0 - kf) * values[k]);
    }
    values.truncate(k_max + 1);
    let routes = (0..values.len())
        .map(|k| if k < 2 { Route::Seed } else { Route::Recursion })
        .collect();
    MomentTable::new(alpha, MomentKind::Adjusted, values, routes)
}

/// The same recursion in the module spanned by G = Γ(α) and T = μ̃₁.
pub fn adjusted_recursion_symbolic(k_max: usize) -> Vec<SymbolicMoment> {
    let g = SymbolicMoment::gamma_symbol();
    let t = SymbolicMoment::t_symbol();
    let mut out = vec![g.sub(&t.scale(&RationalPoly::from_ints(&[2]))), t];
    for k in 0..k_max.saturating_sub(1) {
        let k = k as i64;
        let a = RationalPoly::from_ints(&[k, 2]);
        let b = RationalPoly::from_ints(&[0, 1 - k]);
        let next = out[k as usize + 1].scale(&a).add(&out[k as usize].scale(&b));
        out.push(next);
    }
    out.truncate(k_max + 1);
    out
}

/// Rising factorial (a)_n over Q[α].
pub fn pochhammer(a: &RationalPoly, n: usize) -> RationalPoly {
    (0..n).fold(RationalPoly::one(), |acc, i| {
        acc.mul(&a.add(&RationalPoly::constant(q_int(i as i64))))
    })
}

fn closed_form_index(func: &str, j: usize) -> Result<usize> {
    j.checked_sub(2).ok_or_else(|| {
        Error::Index(format!(
            "{func}: only indices j >= 2 have a closed form (got {j}); μ̃₀ and μ̃₁ are transcendental seeds"
        ))
    })
}

/// μ̃_j for j ≥ 2 from the Leibniz sum
/// μ̃_{k+2} = Γ(α+1) Σ_{m=0}^{k} (−1)^{k−m} C(k,m) α^m (−α−k+m)_{k−m}.
pub fn adjusted_closed_form(j: usize) -> Result<SymbolicMoment> {
    let k = closed_form_index("adjusted_closed_form", j)?;
    let mut sum = RationalPoly::zero();
    for m in 0..=k {
        let base = RationalPoly::from_ints(&[m as i64 - k as i64, -1]);
        let mut term = pochhammer(&base, k - m).mul(&RationalPoly::monomial(Q::from_integer(binomial(k, m)), m));
        if (k - m) % 2 == 1 {
            term = term.neg();
        }
        sum = sum.add(&term);
    }
    Ok(SymbolicMoment::gamma_alpha_plus_one_times(sum))
}

/// μ̃_j for j ≥ 2 from the terminating series
/// (−1)^k Γ(α+1) (−α−k)_k ₁F₁(−k; −α−k; α), each term formed by exact
/// polynomial division of the Pochhammer symbols.
pub fn adjusted_closed_form_hypergeometric(j: usize) -> Result<SymbolicMoment> {
    let k = closed_form_index("adjusted_closed_form_hypergeometric", j)?;
    let b = RationalPoly::from_ints(&[-(k as i64), -1]);
    let prefactor = pochhammer(&b, k);
    let mut sum = RationalPoly::zero();
    let mut ratio = Q::from_integer(1.into()); // (−k)_m / m!
    for m in 0..=k {
        let quotient = prefactor
            .div_exact(&pochhammer(&b, m))
            .expect("(−α−k)_m divides (−α−k)_k");
        sum = sum.add(&quotient.mul(&RationalPoly::monomial(ratio.clone(), m)));
        ratio = ratio * q_int(m as i64 - k as i64) / q_int(m as i64 + 1);
    }
    if k % 2 == 1 {
        sum = sum.neg();
    }
    Ok(SymbolicMoment::gamma_alpha_plus_one_times(sum))
}

type Pair<R> = [R; 2];

fn apply_transfer<R: Ring>(v: Pair<R>, two_alpha_plus_n: R, alpha_one_minus_n: R) -> Pair<R> {
    [
        two_alpha_plus_n.mul(&v[0]).add(&alpha_one_minus_n.mul(&v[1])),
        v[0].clone(),
    ]
}

/// `[μ̃_{k+2}, μ̃_{k+1}] / Γ(α+1) = B_k ⋯ B_2 · [2α+1, 1]` with
/// B_n = [[2α+n, α(1−n)], [1, 0]]; for j ∈ {2, 3} the product is empty.
fn transfer_product<R: Ring>(j: usize, alpha: &R) -> Pair<R> {
    let two_alpha = alpha.add(alpha);
    let mut v = [two_alpha.add(&R::one()), R::one()];
    for n in 2..j.saturating_sub(2) + 1 {
        let nr = R::from_i64(n as i64);
        v = apply_transfer(v, two_alpha.add(&nr), alpha.mul(&R::from_i64(1 - n as i64)));
    }
    v
}

fn matrix_product_entry<R: Ring>(j: usize, alpha: &R) -> R {
    let v = transfer_product(j.max(3), alpha);
    if j == 2 {
        v[1].clone()
    } else {
        v[0].clone()
    }
}

/// μ̃_j for j ≥ 2 by the 2×2 matrix product, exactly over Q[α].
pub fn adjusted_matrix_product(j: usize) -> Result<SymbolicMoment> {
    closed_form_index("adjusted_matrix_product", j)?;
    Ok(SymbolicMoment::gamma_alpha_plus_one_times(matrix_product_entry(
        j,
        &RationalPoly::x(),
    )))
}

/// μ̃_j for j ≥ 2 by the matrix product at fixed α.
pub fn adjusted_matrix_product_numeric(j: usize, alpha: f64) -> Result<f64> {
    closed_form_index("adjusted_matrix_product_numeric", j)?;
    check_alpha("adjusted_matrix_product_numeric", alpha)?;
    let v = gamma(alpha + 1.0)? * matrix_product_entry(j, &alpha);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow("adjusted_matrix_product_numeric"))
    }
}

/// Every entry integrated against W^α by the oracle.
pub fn adjusted_quadrature_table(alpha: f64, k_max: usize, config: &QuadratureConfig) -> Result<MomentTable> {
    let values = (0..=k_max)
        .map(|k| oracle::adjusted_moment(k, alpha, config).map(|e| e.value))
        .collect::<Result<Vec<_>>>()?;
    MomentTable::new(alpha, MomentKind::Adjusted, values, vec![Route::Quadrature; k_max + 1])
}

/// Adjusted moments 0..=k_max by the chosen route. Indices 0 and 1 come from
/// the seed formulas for every route except quadrature.
pub fn adjusted_table(alpha: f64, k_max: usize, route: Route, config: &QuadratureConfig) -> Result<MomentTable> {
    check_alpha("adjusted_table", alpha)?;
    let seeds = adjusted_seed_moments(alpha)?;
    let tail = |f: &dyn Fn(usize) -> Result<f64>| -> Result<MomentTable> {
        let mut values = vec![seeds.mu0, seeds.mu1];
        let mut routes = vec![Route::Seed, Route::Seed];
        for j in 2..=k_max {
            values.push(f(j)?);
            routes.push(route);
        }
        values.truncate(k_max + 1);
        routes.truncate(k_max + 1);
        MomentTable::new(alpha, MomentKind::Adjusted, values, routes)
    };
    match route {
        Route::Seed | Route::Recursion => adjusted_recursion(k_max, seeds, alpha),
        Route::ClosedForm => {
            let g1 = gamma(alpha + 1.0)?;
            tail(&|j| {
                let p = adjusted_closed_form(j)?
                    .as_gamma_alpha_plus_one_multiple()
                    .expect("closed form is a Γ(α+1) multiple");
                Ok(g1 * p.eval_f64(alpha))
            })
        }
        Route::MatrixProduct => tail(&|j| adjusted_matrix_product_numeric(j, alpha)),
        Route::GeneratingFunction => {
            tail(&|j| Ok(generating::taylor_coefficient(j - 2, alpha)? * factorial_f64(j - 2)))
        }
        Route::Quadrature => adjusted_quadrature_table(alpha, k_max, config),
        Route::Inversion => Err(Error::Config(
            "the inversion route produces canonical moments; use --kind canonical".into(),
        )),
    }
}
