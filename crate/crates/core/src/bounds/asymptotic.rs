//! Single-term (largest block) approximations of the bounds for large even `N`.

use serde::Serialize;

use crate::combinatorics::BinomialRow;
use crate::error::{Error, Result};
use crate::signed_log::SignedLog;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AsymptoticBounds {
    pub log_lower: f64,
    pub log_upper: f64,
}

/// Log-domain max-term approximations of both bounds.
///
/// With the paired blocks taken to start at `j ≈ q/2`:
///
/// * lower: `max_j [ln((2j/N)(λ_j − λ_{−j})) + ln g_j]`
/// * upper: `min{ln 2p, max_i [ln(λ_i − λ_{−i}) + ½ ln g_i] + max_j [ln(4j/N) + ½ ln g_j]}`
///
/// where `λ_j` are the eigenvalues of `σ_p` and `j` runs over `⌈q/2⌉..=N/2`.
pub fn asymptotic_bounds(n_spins: u32, q: u32, p: f64) -> Result<AsymptoticBounds> {
    if n_spins % 2 != 0 {
        return Err(Error::Unsupported(format!(
            "asymptotic forms need even N, got {n_spins}"
        )));
    }
    if q == 0 || q > n_spins {
        return Err(Error::domain(format!("coherence order q = {q} outside [1, {n_spins}]")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("polarization p = {p} outside [0, 1]")));
    }
    let row = BinomialRow::new(n_spins);
    let n = f64::from(n_spins);
    let half = i64::from(n_spins / 2);
    let up_factor = SignedLog::from_f64((1.0 + p) / 2.0);
    let down_factor = SignedLog::from_f64((1.0 - p) / 2.0);
    let lambda = |up: i64| up_factor.powi(up as i32) * down_factor.powi((2 * half - up) as i32);

    let mut lower = f64::NEG_INFINITY;
    let mut upper_sigma = f64::NEG_INFINITY;
    let mut upper_pz = f64::NEG_INFINITY;
    for j in i64::from(q.div_ceil(2))..=half {
        let diff = lambda(half + j) - lambda(half - j);
        let ln_g = row.ln(half + j);
        let jn = j as f64 / n;
        lower = lower.max((2.0 * jn).ln() + diff.log_mag() + ln_g);
        upper_sigma = upper_sigma.max(diff.log_mag() + 0.5 * ln_g);
        upper_pz = upper_pz.max((4.0 * jn).ln() + 0.5 * ln_g);
    }
    Ok(AsymptoticBounds {
        log_lower: lower,
        log_upper: (2.0 * p).ln().min(upper_sigma + upper_pz),
    })
}
