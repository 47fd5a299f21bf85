use serde::Serialize;

use super::BoundCalculator;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Lower,
    Upper,
}

/// Below this many spins the half-decay search is a plain scan.
const SCAN_LIMIT: u32 = 1024;
const COARSE_POINTS: u32 = 64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransitionReport {
    pub n_spins: u32,
    pub p: f64,
    /// `None` when the bound never falls below half its plateau.
    pub q_half_lower: Option<u32>,
    pub q_half_upper: Option<u32>,
    /// `(q_half_upper - q_half_lower) / N`, floored at zero.
    pub width: Option<f64>,
    /// The same difference without the floor.
    pub raw_width: Option<f64>,
    pub q_c_model: f64,
    pub q_c_cap: f64,
}

fn check_open_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("transition analysis needs 0 < p < 1, got {p}")));
    }
    Ok(())
}

fn log_bound(calc: &BoundCalculator, q: u32, kind: BoundKind) -> Result<f64> {
    let r = calc.half_rank(q)?;
    let v = match kind {
        BoundKind::Lower => calc.lower_log(&r)?,
        BoundKind::Upper => calc.upper_log(&r)?,
    };
    Ok(v.log_mag())
}

fn search(calc: &BoundCalculator, kind: BoundKind) -> Result<Option<u32>> {
    let n = calc.n_spins();
    let plateau = match kind {
        BoundKind::Lower => calc.p(),
        BoundKind::Upper => 2.0 * calc.p(),
    };
    let threshold = plateau.ln() - std::f64::consts::LN_2;
    let below = |q: u32| log_bound(calc, q, kind).map(|l| l < threshold);
    let scan = || -> Result<Option<u32>> {
        for q in 1..=n {
            if below(q)? {
                return Ok(Some(q));
            }
        }
        Ok(None)
    };
    if n <= SCAN_LIMIT {
        return scan();
    }

    let mut grid: Vec<u32> = (0..COARSE_POINTS)
        .map(|i| 1 + ((u64::from(n - 1) * u64::from(i)) / u64::from(COARSE_POINTS - 1)) as u32)
        .collect();
    grid.dedup();
    let logs = grid
        .iter()
        .map(|&q| log_bound(calc, q, kind))
        .collect::<Result<Vec<_>>>()?;
    let monotone = logs.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    if !monotone {
        return scan();
    }
    let Some(first) = logs.iter().position(|&l| l < threshold) else {
        return Ok(None);
    };
    if first == 0 {
        return Ok(Some(grid[0]));
    }
    // below(lo) is false, below(hi) is true
    let (mut lo, mut hi) = (grid[first - 1], grid[first]);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if below(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// Smallest `q` at which the bound drops below half its `q = 1` value
/// (`p` for the lower bound, `2p` for the upper).
pub fn half_decay_order(n_spins: u32, p: f64, kind: BoundKind) -> Result<Option<u32>> {
    check_open_p(p)?;
    search(&BoundCalculator::new(n_spins, p)?, kind)
}

pub fn transition_report(n_spins: u32, p: f64) -> Result<TransitionReport> {
    check_open_p(p)?;
    let calc = BoundCalculator::new(n_spins, p)?;
    let q_half_lower = search(&calc, BoundKind::Lower)?;
    let q_half_upper = search(&calc, BoundKind::Upper)?;
    let n = f64::from(n_spins);
    let raw_width = match (q_half_lower, q_half_upper) {
        (Some(lo), Some(up)) => Some((f64::from(up) - f64::from(lo)) / n),
        _ => None,
    };
    Ok(TransitionReport {
        n_spins,
        p,
        q_half_lower,
        q_half_upper,
        width: raw_width.map(|w| w.max(0.0)),
        raw_width,
        q_c_model: p * n,
        q_c_cap: 2.0 * p / (1.0 + p * p) * n,
    })
}

/// Width of the strip between the two half-decay orders, relative to `N`.
pub fn transition_width(n_spins: u32, p: f64) -> Result<Option<f64>> {
    Ok(transition_report(n_spins, p)?.width)
}
