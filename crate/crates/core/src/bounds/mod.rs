//! Upper and lower bounds on the observable intensity of coherence order `q`.
//!
//! For rank `r = R^N_q / 2`:
//!
//! * lower: `Λ↑_r(P_z)·Λ↑_r(σ_p) + Λ↓_r(P_z)·Λ↓_r(σ_p)`, achieved by an
//!   explicit pair of unitaries (see [`crate::oracle`]);
//! * upper: `min{2p, ‖Λ↑_r − Λ↓_r‖(P_z) · ‖Λ↑_r − Λ↓_r‖(σ_p)}`.

mod asymptotic;
mod closed_form;
mod model;
mod transition;

pub use asymptotic::{asymptotic_bounds, AsymptoticBounds};
pub use closed_form::{closed_form_q1, closed_form_qn, closed_form_qnm1};
pub use model::{
    convolution_profile, first_one_over_e_crossing, model_width, observable_cluster_limit,
    one_over_e_crossing, snr_requirement, SnrRequirement,
};
pub use transition::{
    half_decay_order, transition_report, transition_width, BoundKind, TransitionReport,
};

use serde::Serialize;

use crate::combinatorics::{max_rank_in_row, BigCount, BinomialRow};
use crate::error::{Error, Result};
use crate::signed_log::SignedLog;
use crate::spectra::{
    aligned_dot, paired_diff_norm, pz_spectrum_with_row, sigma_spectrum_with_row,
    DegenerateSpectrum,
};

#[derive(Clone, Debug, Serialize)]
pub struct BoundResult {
    pub n_spins: u32,
    pub q: u32,
    pub p: f64,
    /// Number of paired extreme eigenvalues, `R^N_q / 2`.
    pub r: BigCount,
    pub lower: f64,
    pub upper: f64,
    pub log_lower: f64,
    pub log_upper: f64,
}

impl BoundResult {
    /// `R^N_q`.
    pub fn rank(&self) -> BigCount {
        &self.r + &self.r
    }
}

/// Spectra for one `(N, p)` cell, reused across every `q`.
#[derive(Clone, Debug)]
pub struct BoundCalculator {
    p: f64,
    row: BinomialRow,
    pz: DegenerateSpectrum,
    sigma: DegenerateSpectrum,
}

impl BoundCalculator {
    pub fn new(n_spins: u32, p: f64) -> Result<Self> {
        let row = BinomialRow::new(n_spins);
        let pz = pz_spectrum_with_row(&row)?;
        let sigma = sigma_spectrum_with_row(&row, p)?;
        Ok(BoundCalculator { p, row, pz, sigma })
    }

    pub fn n_spins(&self) -> u32 {
        self.row.n()
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn pz(&self) -> &DegenerateSpectrum {
        &self.pz
    }

    pub fn sigma(&self) -> &DegenerateSpectrum {
        &self.sigma
    }

    pub fn half_rank(&self, q: u32) -> Result<BigCount> {
        Ok(max_rank_in_row(&self.row, q)?.half())
    }

    pub fn lower_log(&self, r: &BigCount) -> Result<SignedLog> {
        let b = aligned_dot(&self.pz, &self.sigma, r)?;
        if b.sign() < 0 {
            return Err(Error::Numeric(format!("negative lower bound {b}")));
        }
        Ok(b)
    }

    pub fn upper_log(&self, r: &BigCount) -> Result<SignedLog> {
        let product = paired_diff_norm(&self.pz, r)? * paired_diff_norm(&self.sigma, r)?;
        let cap = SignedLog::from_f64(2.0 * self.p);
        Ok(if product < cap { product } else { cap })
    }

    pub fn bounds(&self, q: u32) -> Result<BoundResult> {
        let r = self.half_rank(q)?;
        let lower = self.lower_log(&r)?;
        let upper = self.upper_log(&r)?;
        Ok(BoundResult {
            n_spins: self.n_spins(),
            q,
            p: self.p,
            lower: lower.to_f64(),
            upper: upper.to_f64(),
            log_lower: lower.log_mag(),
            log_upper: upper.log_mag(),
            r,
        })
    }
}

pub fn bounds(n_spins: u32, q: u32, p: f64) -> Result<BoundResult> {
    BoundCalculator::new(n_spins, p)?.bounds(q)
}

/// Upper bound `B^N_q(p)` as a signed-log value.
pub fn upper_bound(n_spins: u32, q: u32, p: f64) -> Result<SignedLog> {
    let calc = BoundCalculator::new(n_spins, p)?;
    calc.upper_log(&calc.half_rank(q)?)
}

/// Lower bound `b^N_q(p)` as a signed-log value.
pub fn lower_bound(n_spins: u32, q: u32, p: f64) -> Result<SignedLog> {
    let calc = BoundCalculator::new(n_spins, p)?;
    calc.lower_log(&calc.half_rank(q)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::top_norm;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        if a == b {
            0.0
        } else {
            (a - b).abs() / a.abs().max(b.abs())
        }
    }

    #[test]
    fn first_order_plateau() {
        for n in [1, 2, 3, 10, 33] {
            for p in [0.1, 0.45, 0.9] {
                let b = bounds(n, 1, p).unwrap();
                assert!((b.lower - p).abs() < 1e-12, "N={n} p={p}: {}", b.lower);
                assert!((b.upper - 2.0 * p).abs() < 1e-12, "N={n} p={p}: {}", b.upper);
                assert_eq!(b.rank(), BigCount::pow2(n));
            }
        }
    }

    #[test]
    fn two_spin_double_quantum() {
        let b = bounds(2, 2, 0.5).unwrap();
        assert!(rel(b.lower, 0.5) < 1e-14);
        // 2 · 1/2 against the cap 2p = 1
        assert!(rel(b.upper, 1.0) < 1e-14);
        assert_eq!(b.r, BigCount::one());
    }

    #[test]
    fn flat_state_gives_zero() {
        for q in 1..=6 {
            let b = bounds(6, q, 0.0).unwrap();
            assert_eq!((b.lower, b.upper), (0.0, 0.0));
            assert_eq!(b.log_upper, f64::NEG_INFINITY);
        }
    }

    #[test]
    fn pure_state_lower_is_one() {
        for n in 1..=12 {
            for q in 1..=n {
                assert!((lower_bound(n, q, 1.0).unwrap().to_f64() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bad_inputs() {
        assert!(bounds(4, 0, 0.5).is_err());
        assert!(bounds(4, 5, 0.5).is_err());
        assert!(bounds(4, 2, 1.01).is_err());
    }

    #[test]
    fn deep_decay_stays_representable() {
        let b = bounds(3000, 3000, 0.5).unwrap();
        assert_eq!(b.lower, 0.0);
        // 2^{-N}((1+p)^N - (1-p)^N) ≈ (3/4)^N
        let expect = 3000.0 * (0.75f64).ln();
        assert!((b.log_lower - expect).abs() < 1e-9);
    }

    #[test]
    fn upper_norm_forms_agree() {
        // ‖Λ↓_r(P_z)‖·‖Λ↑_r(σ) − Λ↓_r(σ)‖ is half the paired-norm product
        for n in 1..=12 {
            let calc = BoundCalculator::new(n, 0.37).unwrap();
            for q in 1..=n {
                let r = calc.half_rank(q).unwrap();
                let a = top_norm(calc.pz(), &r).unwrap() * paired_diff_norm(calc.sigma(), &r).unwrap();
                let b = paired_diff_norm(calc.pz(), &r).unwrap() * paired_diff_norm(calc.sigma(), &r).unwrap();
                assert!((a.log_mag() - (b.log_mag() - std::f64::consts::LN_2)).abs() < 1e-12);
            }
        }
    }

    fn naive(n: u32, q: u32, p: f64) -> (f64, f64) {
        let calc = BoundCalculator::new(n, p).unwrap();
        let r = calc.half_rank(q).unwrap().to_u64().unwrap() as usize;
        let pz = calc.pz().to_dense_values().unwrap();
        let s = calc.sigma().to_dense_values().unwrap();
        let d = pz.len();
        let mut lower = 0.0;
        let (mut dp, mut ds) = (0.0, 0.0);
        for i in 0..r {
            lower += pz[i] * s[i] + pz[d - 1 - i] * s[d - 1 - i];
            dp += (pz[d - 1 - i] - pz[i]).powi(2);
            ds += (s[d - 1 - i] - s[i]).powi(2);
        }
        (lower, (dp.sqrt() * ds.sqrt()).min(2.0 * p))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn block_bounds_match_explicit_lists(n in 1u32..=12, qf in 0.0f64..1.0, p in 0.01f64..1.0) {
            let q = 1 + ((qf * n as f64) as u32).min(n - 1);
            let b = bounds(n, q, p).unwrap();
            let (lo, up) = naive(n, q, p);
            prop_assert!(rel(b.lower, lo) < 1e-9, "{} vs {}", b.lower, lo);
            prop_assert!(rel(b.upper, up) < 1e-9, "{} vs {}", b.upper, up);
        }

        #[test]
        fn sandwich(n in 1u32..=60, qf in 0.0f64..1.0, p in 0.0f64..=1.0) {
            let q = 1 + ((qf * n as f64) as u32).min(n - 1);
            let b = bounds(n, q, p).unwrap();
            prop_assert!(b.lower >= 0.0);
            prop_assert!(b.lower <= b.upper + 1e-12);
            prop_assert!(b.upper <= 2.0 * p + 1e-12);
        }

        #[test]
        fn monotone_in_p(n in 2u32..=40, qf in 0.0f64..1.0, k in 0u32..99) {
            let q = 1 + ((qf * n as f64) as u32).min(n - 1);
            let p0 = f64::from(k) / 100.0;
            let a = bounds(n, q, p0).unwrap();
            let b = bounds(n, q, p0 + 0.01).unwrap();
            prop_assert!(b.lower >= a.lower * (1.0 - 1e-12));
            prop_assert!(b.upper >= a.upper * (1.0 - 1e-12));
        }
    }
}
