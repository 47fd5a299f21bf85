use crate::error::{Error, Result};
use crate::signed_log::SignedLog;

fn check(n_spins: u32, min_n: u32, p: f64) -> Result<()> {
    if n_spins < min_n {
        return Err(Error::domain(format!("need N >= {min_n}, got {n_spins}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("polarization p = {p} outside [0, 1]")));
    }
    Ok(())
}

/// `((1 ± p)/2)^k` with an exact zero at `1 - p = 0`.
fn half_pow(x: f64, k: u32) -> SignedLog {
    if k == 0 {
        return SignedLog::ONE;
    }
    SignedLog::from_f64(x).scale_ln(-std::f64::consts::LN_2).powi(k as i32)
}

/// `(lower, upper)` at `q = 1`: `(p, 2p)` for every `N`.
pub fn closed_form_q1(n_spins: u32, p: f64) -> Result<(f64, f64)> {
    check(n_spins, 1, p)?;
    Ok((p, 2.0 * p))
}

/// Lower bound at `q = N`: `2^{-N}((1+p)^N - (1-p)^N)`.
pub fn closed_form_qn(n_spins: u32, p: f64) -> Result<SignedLog> {
    check(n_spins, 1, p)?;
    Ok(half_pow(1.0 + p, n_spins) - half_pow(1.0 - p, n_spins))
}

/// Lower bound at `q = N - 1`:
/// `(2^{1-N}/N)[(1+p)^{N-1}(N-1+p) - (1-p)^{N-1}(N-1-p)]`.
pub fn closed_form_qnm1(n_spins: u32, p: f64) -> Result<SignedLog> {
    check(n_spins, 2, p)?;
    let n = f64::from(n_spins);
    let k = n_spins - 1;
    let plus = half_pow(1.0 + p, k) * SignedLog::from_f64(n - 1.0 + p);
    let minus = half_pow(1.0 - p, k) * SignedLog::from_f64(n - 1.0 - p);
    Ok((plus - minus) * SignedLog::from_f64(1.0 / n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{bounds, lower_bound};

    fn rel(a: SignedLog, b: SignedLog) -> f64 {
        if a == b {
            return 0.0;
        }
        let (la, lb) = (a.log_mag(), b.log_mag());
        (la - lb).abs().exp_m1().abs()
    }

    #[test]
    fn examples() {
        assert!((closed_form_qn(2, 0.5).unwrap().to_f64() - 0.5).abs() < 1e-15);
        assert!((closed_form_qnm1(2, 1.0).unwrap().to_f64() - 1.0).abs() < 1e-15);
        assert!((closed_form_qn(9, 1.0).unwrap().to_f64() - 1.0).abs() < 1e-15);
        assert_eq!(closed_form_q1(7, 0.3).unwrap(), (0.3, 0.6));
        // three spins, q = 2: (5p + p^3)/6
        let p = 0.4;
        let expect = (5.0 * p + p * p * p) / 6.0;
        assert!((closed_form_qnm1(3, p).unwrap().to_f64() - expect).abs() < 1e-15);
        assert!(closed_form_qnm1(1, 0.5).is_err());
        assert!(closed_form_qn(3, -0.5).is_err());
    }

    #[test]
    fn generic_route_agrees() {
        for n in 2..=50 {
            for k in 1..=9 {
                let p = f64::from(k) / 10.0;
                let b1 = bounds(n, 1, p).unwrap();
                let (lo, up) = closed_form_q1(n, p).unwrap();
                assert!((b1.lower - lo).abs() < 1e-12 && (b1.upper - up).abs() < 1e-12);
                let qn = lower_bound(n, n, p).unwrap();
                assert!(rel(qn, closed_form_qn(n, p).unwrap()) < 1e-10, "qN at N={n} p={p}");
                let qm = lower_bound(n, n - 1, p).unwrap();
                assert!(rel(qm, closed_form_qnm1(n, p).unwrap()) < 1e-10, "qN-1 at N={n} p={p}");
            }
        }
    }
}
