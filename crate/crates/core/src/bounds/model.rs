//! Continuum model of the transition and derived experimental estimates.

use serde::Serialize;

use super::closed_form_qn;
use crate::error::{Error, Result};

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("polarization p = {p} outside [0, 1]")));
    }
    Ok(())
}

/// Upper tail `1 - Φ(x)` of the standard normal.
fn normal_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Intensity of a uniform `u(−pN, pN)` smeared by a Gaussian of variance
/// `(1 − p)N`, evaluated at `q`. Unnormalised apart from the density
/// convention; compare against the `q = 0` value.
pub fn convolution_profile(n_spins: u32, p: f64, q: f64) -> Result<f64> {
    check_p(p)?;
    if n_spins == 0 {
        return Err(Error::domain("need at least one spin"));
    }
    let n = f64::from(n_spins);
    let q = q.abs();
    let half_box = p * n;
    let variance = (1.0 - p) * n;
    if variance == 0.0 {
        return Ok(if q <= half_box { 1.0 / (2.0 * half_box) } else { 0.0 });
    }
    let sigma = variance.sqrt();
    if half_box == 0.0 {
        return Ok((-q * q / (2.0 * variance)).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt()));
    }
    // Φ(a) − Φ(b) = sf(b) − sf(a), accurate in the right tail
    let a = (q + half_box) / sigma;
    let b = (q - half_box) / sigma;
    Ok((normal_sf(b) - normal_sf(a)) / (2.0 * half_box))
}

/// Transition width of the convolution model, `2√(6N(1 − p))`.
pub fn model_width(n_spins: u32, p: f64) -> f64 {
    2.0 * (6.0 * f64::from(n_spins) * (1.0 - p)).sqrt()
}

/// Largest observable cluster size, `Np + √(6N(1 − p))`.
pub fn observable_cluster_limit(n_spins: u32, p: f64) -> Result<f64> {
    check_p(p)?;
    let n = f64::from(n_spins);
    Ok(n * p + (6.0 * n * (1.0 - p)).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SnrRequirement {
    pub eta: f64,
    pub log_eta: f64,
    /// `q <= Np`: the order is inside the observable region and needs no
    /// extra signal-to-noise.
    pub inside_observable_region: bool,
}

/// Single-shot signal-to-noise ratio needed to see order `q`, `exp(q²/N)`.
pub fn snr_requirement(n_spins: u32, q: u32, p: f64) -> Result<SnrRequirement> {
    check_p(p)?;
    if n_spins == 0 {
        return Err(Error::domain("need at least one spin"));
    }
    let n = f64::from(n_spins);
    let q = f64::from(q);
    if q <= n * p {
        return Ok(SnrRequirement {
            eta: 1.0,
            log_eta: 0.0,
            inside_observable_region: true,
        });
    }
    let log_eta = q * q / n;
    Ok(SnrRequirement {
        eta: log_eta.exp(),
        log_eta,
        inside_observable_region: false,
    })
}

/// Estimated `N` at which the highest-order lower bound falls to `p/e`,
/// `2/(1 − p)`; infinite for a pure state.
pub fn one_over_e_crossing(p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::domain(format!("crossing needs 0 < p <= 1, got {p}")));
    }
    Ok(if p == 1.0 { f64::INFINITY } else { 2.0 / (1.0 - p) })
}

/// Smallest `N <= n_max` with `b^N_N(p) < p/e`, by direct scan.
pub fn first_one_over_e_crossing(p: f64, n_max: u32) -> Result<Option<u32>> {
    one_over_e_crossing(p)?;
    let target = p.ln() - 1.0;
    for n in 1..=n_max {
        if closed_form_qn(n, p)?.log_mag() < target {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_shape() {
        let peak = convolution_profile(500, 0.6, 0.0).unwrap();
        for q in [1.0, 50.0, 290.0, 400.0] {
            assert!(convolution_profile(500, 0.6, q).unwrap() <= peak);
            assert_eq!(
                convolution_profile(500, 0.6, q).unwrap(),
                convolution_profile(500, 0.6, -q).unwrap()
            );
        }
        assert!(convolution_profile(500, 0.6, 290.0).unwrap() < 0.9 * peak);
        let edge = convolution_profile(500, 0.6, 300.0).unwrap();
        assert!((edge / peak - 0.5).abs() < 0.025);
        let tail = convolution_profile(500, 0.6, 300.0 + 4.0 * 200f64.sqrt()).unwrap();
        assert!(tail < 0.01 * peak);
    }

    #[test]
    fn profile_limits() {
        assert_eq!(convolution_profile(10, 1.0, 10.0).unwrap(), 0.05);
        assert_eq!(convolution_profile(10, 1.0, 10.5).unwrap(), 0.0);
        let g = convolution_profile(100, 0.0, 10.0).unwrap();
        let expect = (-0.5f64).exp() / (200.0 * std::f64::consts::PI).sqrt();
        assert!((g - expect).abs() < 1e-15);
        assert!(convolution_profile(10, 1.2, 0.0).is_err());
    }

    #[test]
    fn cluster_limit() {
        assert!((observable_cluster_limit(500, 0.6).unwrap() - (300.0 + 1200f64.sqrt())).abs() < 1e-12);
        assert_eq!(observable_cluster_limit(77, 1.0).unwrap(), 77.0);
        assert!((observable_cluster_limit(24, 0.0).unwrap() - 12.0).abs() < 1e-12);
        assert!((model_width(500, 0.6) - 2.0 * 1200f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn snr() {
        let s = snr_requirement(100, 60, 0.5).unwrap();
        assert_eq!(s.log_eta, 36.0);
        assert!((s.eta / 4.311_231_547_115_195e15 - 1.0).abs() < 1e-12);
        assert!(!s.inside_observable_region);
        let s = snr_requirement(100, 10, 0.5).unwrap();
        assert!(s.inside_observable_region && s.eta == 1.0);
        let s = snr_requirement(2000, 2000, 0.1).unwrap();
        assert_eq!(s.log_eta, 2000.0);
        assert_eq!(s.eta, f64::INFINITY);
    }

    #[test]
    fn crossing() {
        assert!((one_over_e_crossing(0.99).unwrap() - 200.0).abs() < 1e-9);
        assert_eq!(one_over_e_crossing(0.5).unwrap(), 4.0);
        assert_eq!(one_over_e_crossing(1.0).unwrap(), f64::INFINITY);
        assert!(one_over_e_crossing(0.0).is_err());
        let n = first_one_over_e_crossing(0.99, 1000).unwrap().unwrap();
        assert!((100..=400).contains(&n), "{n}");
        for p in [0.9, 0.95, 0.98] {
            let est = one_over_e_crossing(p).unwrap();
            let n = f64::from(first_one_over_e_crossing(p, 10_000).unwrap().unwrap());
            assert!(n >= est / 2.0 && n <= est * 2.0, "p={p}: {n} vs {est}");
        }
    }
}
