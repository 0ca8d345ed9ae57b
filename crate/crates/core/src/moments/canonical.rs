use crate::algebra::{binomial, binomial_f64, Q};
use crate::error::{Error, Result};
use crate::oracle::{self, QuadratureConfig};
use crate::poly::RationalPoly;

use super::{adjusted_recursion_symbolic, adjusted_table, check_alpha, MomentKind, MomentTable, Route, SymbolicMoment};

fn require_kind(table: &MomentTable, kind: MomentKind) -> Result<()> {
    if table.kind == kind {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "expected a {kind} moment table, got {}",
            table.kind
        )))
    }
}

/// Σ_m C(k,m) s^{k−m} v_m for every k.
fn binomial_transform(values: &[f64], s: f64) -> Vec<f64> {
    (0..values.len())
        .map(|k| {
            let mut acc = 0.0;
            let mut p = 1.0;
            for m in (0..=k).rev() {
                acc += binomial_f64(k, m) * p * values[m];
                p *= s;
            }
            acc
        })
        .collect()
}

/// μ_k = Σ_m C(k,m) (−α)^{k−m} μ̃_m.
pub fn canonical_from_adjusted(table: &MomentTable) -> Result<MomentTable> {
    require_kind(table, MomentKind::Adjusted)?;
    let values = binomial_transform(&table.values, -table.alpha);
    MomentTable::new(
        table.alpha,
        MomentKind::Canonical,
        values,
        vec![Route::Inversion; table.len()],
    )
}

/// μ̃_k = Σ_m C(k,m) α^{k−m} μ_m.
pub fn adjusted_from_canonical(table: &MomentTable) -> Result<MomentTable> {
    require_kind(table, MomentKind::Canonical)?;
    let values = binomial_transform(&table.values, table.alpha);
    MomentTable::new(
        table.alpha,
        MomentKind::Adjusted,
        values,
        vec![Route::Inversion; table.len()],
    )
}

/// μ_{k+2} = Σ_{m=0}^{k} [(2α+k)C(k+1,m) − αC(k+2,m) + (1−k)C(k,m)] α^{k+1−m} μ_m
///           + (1−α) k μ_{k+1},
/// started from μ₀ and μ₁.
pub fn canonical_recursion(k_max: usize, alpha: f64, mu0: f64, mu1: f64) -> Result<MomentTable> {
    check_alpha("canonical_recursion", alpha)?;
    let mut values = vec![mu0, mu1];
    for k in 0..k_max.saturating_sub(1) {
        let kf = k as f64;
        let mut acc = (1.0 - alpha) * kf * values[k + 1];
        for m in 0..=k {
            let c = (2.0 * alpha + kf) * binomial_f64(k + 1, m) - alpha * binomial_f64(k + 2, m)
                + (1.0 - kf) * binomial_f64(k, m);
            acc += c * alpha.powi((k + 1 - m) as i32) * values[m];
        }
        values.push(acc);
    }
    values.truncate(k_max + 1);
    let routes = (0..values.len())
        .map(|k| if k < 2 { Route::Seed } else { Route::Recursion })
        .collect();
    MomentTable::new(alpha, MomentKind::Canonical, values, routes)
}

/// Canonical moments 0..=k_max in the {G, T} module, by inverting the
/// binomial relation exactly over Q[α].
pub fn canonical_symbolic(k_max: usize) -> Vec<SymbolicMoment> {
    let adjusted = adjusted_recursion_symbolic(k_max);
    let minus_alpha = RationalPoly::from_ints(&[0, -1]);
    (0..=k_max)
        .map(|k| {
            (0..=k).fold(SymbolicMoment::zero(), |acc, m| {
                let w = minus_alpha_pow(&minus_alpha, k - m).scale(&Q::from_integer(binomial(k, m)));
                acc.add(&adjusted[m].scale(&w))
            })
        })
        .collect()
}

fn minus_alpha_pow(p: &RationalPoly, e: usize) -> RationalPoly {
    (0..e).fold(RationalPoly::one(), |acc, _| acc.mul(p))
}

pub fn canonical_quadrature_table(alpha: f64, k_max: usize, config: &QuadratureConfig) -> Result<MomentTable> {
    let values = (0..=k_max)
        .map(|k| oracle::canonical_moment(k, alpha, config).map(|e| e.value))
        .collect::<Result<Vec<_>>>()?;
    MomentTable::new(alpha, MomentKind::Canonical, values, vec![Route::Quadrature; k_max + 1])
}

/// Canonical moments by inversion (the default), the recursion seeded with
/// inverted μ₀ and μ₁, or quadrature.
pub fn canonical_table(alpha: f64, k_max: usize, route: Route, config: &QuadratureConfig) -> Result<MomentTable> {
    check_alpha("canonical_table", alpha)?;
    match route {
        Route::Inversion => canonical_from_adjusted(&adjusted_table(alpha, k_max, Route::Recursion, config)?),
        Route::Recursion => {
            let seeds = canonical_from_adjusted(&adjusted_table(alpha, 1, Route::Recursion, config)?)?;
            canonical_recursion(k_max, alpha, seeds.values[0], seeds.values[1])
        }
        Route::Quadrature => canonical_quadrature_table(alpha, k_max, config),
        other => Err(Error::Config(format!(
            "route '{other}' is not available for canonical moments (use inversion, recursion or quadrature)"
        ))),
    }
}
