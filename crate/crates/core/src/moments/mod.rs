//! Adjusted moments μ̃_k = ∫(x+α)^k W^α and canonical moments
//! μ_k = ∫x^k W^α, by recursion, closed form, matrix product, generating
//! function, binomial inversion and quadrature.

mod adjusted;
mod canonical;
mod generating;
mod symbolic;

pub use adjusted::{
    adjusted_closed_form, adjusted_closed_form_hypergeometric, adjusted_matrix_product,
    adjusted_matrix_product_numeric, adjusted_quadrature_table, adjusted_recursion, adjusted_recursion_symbolic,
    adjusted_seed_moments, adjusted_table, first_moment_forms, pochhammer, SeedMoments,
};
pub use canonical::{
    adjusted_from_canonical, canonical_from_adjusted, canonical_quadrature_table, canonical_recursion,
    canonical_symbolic, canonical_table,
};
pub use generating::{generating_derivative, generating_function, ode_residual, taylor_coefficient};
pub use symbolic::SymbolicMoment;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::fmt_sig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentKind {
    Adjusted,
    Canonical,
}

/// How a table entry was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Transcendental starting value (μ̃₀, μ̃₁ or μ₀, μ₁).
    Seed,
    Recursion,
    ClosedForm,
    MatrixProduct,
    GeneratingFunction,
    Quadrature,
    Inversion,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::Seed => "seed",
            Route::Recursion => "recursion",
            Route::ClosedForm => "closed_form",
            Route::MatrixProduct => "matrix_product",
            Route::GeneratingFunction => "generating_function",
            Route::Quadrature => "quadrature",
            Route::Inversion => "inversion",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Route {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "seed" => Route::Seed,
            "recursion" => Route::Recursion,
            "closed_form" => Route::ClosedForm,
            "matrix_product" => Route::MatrixProduct,
            "generating_function" => Route::GeneratingFunction,
            "quadrature" => Route::Quadrature,
            "inversion" => Route::Inversion,
            other => return Err(Error::Config(format!("unknown route '{other}'"))),
        })
    }
}

impl fmt::Display for MomentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MomentKind::Adjusted => "adjusted",
            MomentKind::Canonical => "canonical",
        })
    }
}

impl FromStr for MomentKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adjusted" => Ok(MomentKind::Adjusted),
            "canonical" => Ok(MomentKind::Canonical),
            other => Err(Error::Config(format!("unknown moment kind '{other}'"))),
        }
    }
}

/// Moments for one α, indices contiguous from 0, each tagged with its route.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentTable {
    pub alpha: f64,
    pub kind: MomentKind,
    pub values: Vec<f64>,
    #[serde(rename = "route")]
    pub routes: Vec<Route>,
}

impl MomentTable {
    pub fn new(alpha: f64, kind: MomentKind, values: Vec<f64>, routes: Vec<Route>) -> Result<Self> {
        if values.len() != routes.len() {
            return Err(Error::Index(format!(
                "{} values but {} route tags",
                values.len(),
                routes.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Overflow(if k < 2 { "moment seeds" } else { "moment table" }));
        }
        Ok(MomentTable {
            alpha,
            kind,
            values,
            routes,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Highest index present.
    pub fn k_max(&self) -> Option<usize> {
        self.values.len().checked_sub(1)
    }

    pub fn get(&self, k: usize) -> Option<f64> {
        self.values.get(k).copied()
    }

    /// Error unless indices `0..=k` are present.
    pub fn require(&self, k: usize) -> Result<()> {
        if k < self.values.len() {
            Ok(())
        } else {
            Err(Error::InsufficientMoments {
                needed: k,
                available: self.values.len().saturating_sub(1),
            })
        }
    }

    pub fn truncated(&self, k_max: usize) -> MomentTable {
        let n = (k_max + 1).min(self.values.len());
        MomentTable {
            alpha: self.alpha,
            kind: self.kind,
            values: self.values[..n].to_vec(),
            routes: self.routes[..n].to_vec(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("moment tables serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let t: MomentTable = serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        MomentTable::new(t.alpha, t.kind, t.values, t.routes)
    }

    /// `k,value,route` rows under a header line.
    pub fn to_csv(&self, digits: usize) -> String {
        let mut out = String::from("k,value,route\n");
        for (k, (v, r)) in self.values.iter().zip(&self.routes).enumerate() {
            out.push_str(&format!("{k},{},{r}\n", fmt_sig(*v, digits)));
        }
        out
    }

    pub fn from_csv(alpha: f64, kind: MomentKind, s: &str) -> Result<Self> {
        let mut values = Vec::new();
        let mut routes = Vec::new();
        for (line_no, line) in s.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (line_no == 0 && line.starts_with("k,")) {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            let [k, v, r] = fields[..] else {
                return Err(Error::Config(format!("line {}: expected k,value,route", line_no + 1)));
            };
            let k: usize = k
                .parse()
                .map_err(|_| Error::Config(format!("line {}: bad index", line_no + 1)))?;
            if k != values.len() {
                return Err(Error::Index(format!(
                    "non-contiguous index {k} at line {}",
                    line_no + 1
                )));
            }
            values.push(
                v.parse()
                    .map_err(|_| Error::Config(format!("line {}: bad value", line_no + 1)))?,
            );
            routes.push(r.parse()?);
        }
        MomentTable::new(alpha, kind, values, routes)
    }

    /// Largest relative discrepancy against another table over shared indices.
    pub fn max_rel_diff(&self, other: &MomentTable) -> (usize, f64) {
        self.values
            .iter()
            .zip(&other.values)
            .enumerate()
            .map(|(k, (a, b))| (k, crate::precision::rel_diff(*a, *b)))
            .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc })
    }
}

pub(crate) fn check_alpha(func: &'static str, alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(crate::error::domain(
            func,
            format!("alpha must be positive and finite, got {alpha}"),
        ))
    }
}
