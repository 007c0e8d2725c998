use serde::Serialize;

use super::gamma::gamma_q;
use crate::error::{Error, Result};

/// Smallest p-value reported numerically in human-readable output.
pub const P_REPORT_FLOOR: f64 = 2.2e-16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub df: u32,
    pub p_value: f64,
}

impl ChiSquareResult {
    /// `"< 2.2e-16"` below the floor, otherwise the value itself.
    pub fn p_display(&self) -> String {
        format_p_value(self.p_value)
    }
}

pub fn format_p_value(p: f64) -> String {
    if p < P_REPORT_FLOOR {
        format!("< {P_REPORT_FLOOR:e}")
    } else if p < 1e-4 {
        format!("{p:.3e}")
    } else {
        format!("{p:.6}")
    }
}

/// Upper-tail probability of the chi-square distribution with `k` degrees of freedom.
pub fn chi2_sf(x: f64, k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("degrees of freedom must be at least 1".into()));
    }
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!("chi-square statistic must be non-negative, got {x}")));
    }
    Ok(gamma_q(f64::from(k) / 2.0, x / 2.0))
}

/// Pearson goodness-of-fit of `observed` counts against `expected_props`
/// (renormalized to sum to one).
pub fn chi_square_gof(observed: &[u64], expected_props: &[f64]) -> Result<ChiSquareResult> {
    if observed.len() != expected_props.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} observed categories vs {} expected proportions",
            observed.len(),
            expected_props.len()
        )));
    }
    if observed.len() < 2 {
        return Err(Error::DimensionMismatch("at least two categories are required".into()));
    }
    if expected_props.iter().any(|p| !(p.is_finite() && *p > 0.0)) {
        return Err(Error::ZeroExpected);
    }
    let n: u64 = observed.iter().sum();
    if n == 0 {
        return Err(Error::ZeroExpected);
    }
    let mass: f64 = expected_props.iter().sum();
    let n = n as f64;
    let statistic = observed
        .iter()
        .zip(expected_props)
        .map(|(&o, &p)| {
            let e = n * p / mass;
            let d = o as f64 - e;
            d * d / e
        })
        .sum::<f64>();
    let df = (observed.len() - 1) as u32;
    Ok(ChiSquareResult { statistic, df, p_value: chi2_sf(statistic, df)? })
}
