//! Degeneracy-compressed spectra of `P_z` and `σ_p`.
//!
//! Both operators are diagonal in the Zeeman basis, so their spectra are
//! `N + 1` blocks `(m, λ_m, g_m)`. Every selection and accumulation below
//! works on blocks with exact multiplicities; individual eigenvalues are
//! never enumerated, which keeps `N = 10^4` at `O(N)` block operations.

use crate::combinatorics::{BigCount, BinomialRow, HalfInt};
use crate::error::{Error, Result};
use crate::signed_log::{LogSum, SignedLog};

#[derive(Clone, Debug)]
pub struct Block {
    pub m: HalfInt,
    pub value: SignedLog,
    pub mult: BigCount,
    pub ln_mult: f64,
}

/// Eigenvalue blocks sorted ascending by value (ties keep ascending `m`).
#[derive(Clone, Debug)]
pub struct DegenerateSpectrum {
    n_spins: u32,
    blocks: Vec<Block>,
}

impl DegenerateSpectrum {
    fn from_blocks(n_spins: u32, mut blocks: Vec<Block>) -> Self {
        blocks.sort_by(|a, b| a.value.total_cmp(&b.value).then(a.m.cmp(&b.m)));
        DegenerateSpectrum { n_spins, blocks }
    }

    pub fn n_spins(&self) -> u32 {
        self.n_spins
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn total_multiplicity(&self) -> BigCount {
        let mut total = BigCount::zero();
        for b in &self.blocks {
            total += &b.mult;
        }
        total
    }

    /// Explicit ascending eigenvalue list. Only for small `N`.
    pub fn to_dense_values(&self) -> Result<Vec<f64>> {
        const MAX_DENSE: u32 = 22;
        if self.n_spins > MAX_DENSE {
            return Err(Error::ResourceGuard {
                n: self.n_spins,
                max: MAX_DENSE,
            });
        }
        let mut out = Vec::with_capacity(1usize << self.n_spins);
        for b in &self.blocks {
            let count = b.mult.to_u64().expect("fits for small N") as usize;
            out.extend(std::iter::repeat_n(b.value.to_f64(), count));
        }
        Ok(out)
    }
}

fn check_polarization(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("polarization p = {p} outside [0, 1]")));
    }
    Ok(())
}

fn check_spins(n_spins: u32) -> Result<()> {
    if n_spins == 0 {
        return Err(Error::domain("need at least one spin"));
    }
    Ok(())
}

/// `ln((1 ± p)/2)` as a signed-log factor, exact zero for `1 - p = 0`.
fn half_one_plus(p: f64) -> SignedLog {
    if p <= -1.0 {
        SignedLog::ZERO
    } else {
        SignedLog::from_ln(p.ln_1p() - std::f64::consts::LN_2)
    }
}

/// Spectrum of `σ_p = (1/2 + p I_z)^{⊗N}`.
///
/// The block with `m` has eigenvalue `((1+p)/2)^{N/2+m} ((1-p)/2)^{N/2-m}`.
pub fn sigma_spectrum(n_spins: u32, p: f64) -> Result<DegenerateSpectrum> {
    sigma_spectrum_with_row(&BinomialRow::new(n_spins), p)
}

pub fn sigma_spectrum_with_row(row: &BinomialRow, p: f64) -> Result<DegenerateSpectrum> {
    let n = row.n();
    check_spins(n)?;
    check_polarization(p)?;
    let up_factor = half_one_plus(p);
    let down_factor = half_one_plus(-p);
    let blocks = (0..=n)
        .map(|up| {
            let k = i64::from(up);
            let value = if p == 0.0 {
                // keep the flat spectrum exactly flat
                up_factor.powi(n as i32)
            } else {
                up_factor.powi(up as i32) * down_factor.powi((n - up) as i32)
            };
            Block {
                m: HalfInt::from_twice(2 * k - i64::from(n)),
                value,
                mult: row.get(k).expect("0 <= up <= N").clone(),
                ln_mult: row.ln(k),
            }
        })
        .collect();
    Ok(DegenerateSpectrum::from_blocks(n, blocks))
}

/// Spectrum of `P_z = (2/N) I_z`: blocks `(m, 2m/N, g_m)`.
pub fn pz_spectrum(n_spins: u32) -> Result<DegenerateSpectrum> {
    pz_spectrum_with_row(&BinomialRow::new(n_spins))
}

pub fn pz_spectrum_with_row(row: &BinomialRow) -> Result<DegenerateSpectrum> {
    let n = row.n();
    check_spins(n)?;
    let blocks = (0..=n)
        .map(|up| {
            let k = i64::from(up);
            let twice_m = 2 * k - i64::from(n);
            Block {
                m: HalfInt::from_twice(twice_m),
                // 2m/N with m = twice_m/2
                value: SignedLog::from_f64(twice_m as f64 / f64::from(n)),
                mult: row.get(k).expect("0 <= up <= N").clone(),
                ln_mult: row.ln(k),
            }
        })
        .collect();
    Ok(DegenerateSpectrum::from_blocks(n, blocks))
}

/// Part of a block taken into an extreme selection.
#[derive(Clone, Debug)]
pub struct Taken {
    pub m: HalfInt,
    pub value: SignedLog,
    pub count: BigCount,
    pub ln_count: f64,
}

/// The `r` largest (`top`, descending) and `r` smallest (`bottom`,
/// ascending) eigenvalues as runs of blocks. The two sides are selected
/// independently and may overlap when `r > 2^N / 2`.
#[derive(Clone, Debug)]
pub struct ExtremeSelection {
    pub r: BigCount,
    pub top: Vec<Taken>,
    pub bottom: Vec<Taken>,
}

fn take_greedy<'a>(blocks: impl Iterator<Item = &'a Block>, r: &BigCount) -> Vec<Taken> {
    let mut remaining = r.clone();
    let mut out = Vec::new();
    for b in blocks {
        if remaining.is_zero() {
            break;
        }
        if b.mult.is_zero() {
            continue;
        }
        let taken = if b.mult <= remaining {
            Taken {
                m: b.m,
                value: b.value,
                count: b.mult.clone(),
                ln_count: b.ln_mult,
            }
        } else {
            Taken {
                m: b.m,
                value: b.value,
                ln_count: remaining.ln(),
                count: remaining.clone(),
            }
        };
        remaining = &remaining - &taken.count;
        out.push(taken);
    }
    out
}

/// Greedy selection of the `r` extreme eigenvalues on each side.
pub fn select_extremes(spectrum: &DegenerateSpectrum, r: &BigCount) -> Result<ExtremeSelection> {
    let dim = BigCount::pow2(spectrum.n_spins);
    if *r > dim {
        return Err(Error::domain(format!(
            "r = {r} exceeds the Hilbert-space dimension 2^{}",
            spectrum.n_spins
        )));
    }
    Ok(ExtremeSelection {
        r: r.clone(),
        top: take_greedy(spectrum.blocks.iter().rev(), r),
        bottom: take_greedy(spectrum.blocks.iter(), r),
    })
}

/// Walks two run-length lists of equal total length in lockstep, calling
/// `f(ln_count, a, b)` for every maximal run where both sides are constant.
fn for_each_paired_run(a: &[Taken], b: &[Taken], mut f: impl FnMut(f64, SignedLog, SignedLog)) {
    let (mut i, mut j) = (0, 0);
    let mut rest_a: Option<BigCount> = None;
    let mut rest_b: Option<BigCount> = None;
    while i < a.len() && j < b.len() {
        let ca = rest_a.as_ref().unwrap_or(&a[i].count);
        let cb = rest_b.as_ref().unwrap_or(&b[j].count);
        match ca.cmp(cb) {
            std::cmp::Ordering::Equal => {
                let ln = if rest_a.is_none() {
                    a[i].ln_count
                } else if rest_b.is_none() {
                    b[j].ln_count
                } else {
                    ca.ln()
                };
                f(ln, a[i].value, b[j].value);
                i += 1;
                j += 1;
                rest_a = None;
                rest_b = None;
            }
            std::cmp::Ordering::Less => {
                let ln = if rest_a.is_none() { a[i].ln_count } else { ca.ln() };
                f(ln, a[i].value, b[j].value);
                rest_b = Some(cb - ca);
                rest_a = None;
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                let ln = if rest_b.is_none() { b[j].ln_count } else { cb.ln() };
                f(ln, a[i].value, b[j].value);
                rest_a = Some(ca - cb);
                rest_b = None;
                j += 1;
            }
        }
    }
}

/// `‖Λ↑_r(A) − Λ↓_r(A)‖₂`: the 2-norm of the elementwise differences between
/// the `r` smallest eigenvalues (ascending) and the `r` largest (descending).
pub fn paired_diff_norm(spectrum: &DegenerateSpectrum, r: &BigCount) -> Result<SignedLog> {
    let sel = select_extremes(spectrum, r)?;
    let mut acc = LogSum::default();
    for_each_paired_run(&sel.top, &sel.bottom, |ln_count, top, bottom| {
        acc.push((top - bottom).powi(2).scale_ln(ln_count));
    });
    Ok(acc.total().sqrt())
}

/// `‖Λ↓_r(A)‖₂`, the norm of the `r` largest eigenvalues.
pub fn top_norm(spectrum: &DegenerateSpectrum, r: &BigCount) -> Result<SignedLog> {
    let sel = select_extremes(spectrum, r)?;
    let mut acc = LogSum::default();
    for t in &sel.top {
        acc.push(t.value.powi(2).scale_ln(t.ln_count));
    }
    Ok(acc.total().sqrt())
}

/// `Λ↑_r(A)·Λ↑_r(B) + Λ↓_r(A)·Λ↓_r(B)`.
pub fn aligned_dot(a: &DegenerateSpectrum, b: &DegenerateSpectrum, r: &BigCount) -> Result<SignedLog> {
    if a.n_spins != b.n_spins {
        return Err(Error::domain(format!(
            "spectra for N = {} and N = {} cannot be paired",
            a.n_spins, b.n_spins
        )));
    }
    let sa = select_extremes(a, r)?;
    let sb = select_extremes(b, r)?;
    let mut acc = LogSum::default();
    let mut push = |ln_count: f64, x: SignedLog, y: SignedLog| acc.push((x * y).scale_ln(ln_count));
    for_each_paired_run(&sa.bottom, &sb.bottom, &mut push);
    for_each_paired_run(&sa.top, &sb.top, &mut push);
    Ok(acc.total())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn values(spectrum: &DegenerateSpectrum) -> Vec<(f64, f64, u64)> {
        spectrum.blocks()
            .iter()
            .map(|b| (b.m.to_f64(), b.value.to_f64(), b.mult.to_u64().unwrap()))
            .collect()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-14 * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn pure_state_spectrum() {
        let s = sigma_spectrum(2, 1.0).unwrap();
        let v = values(&s);
        assert_eq!(v.len(), 3);
        // zeros first (ascending by value), then the stretched state
        assert_eq!(v[2], (1.0, 1.0, 1));
        assert!(s.blocks()[..2].iter().all(|b| b.value.is_zero()));
        assert_eq!(s.blocks()[0].m, HalfInt::integer(-1));
    }

    #[test]
    fn mixed_state_spectrum() {
        for b in sigma_spectrum(2, 0.0).unwrap().blocks() {
            assert!(close(b.value.to_f64(), 0.25));
        }
        let v = values(&sigma_spectrum(2, 0.5).unwrap());
        let expect = [(-1.0, 1.0 / 16.0, 1), (0.0, 3.0 / 16.0, 2), (1.0, 9.0 / 16.0, 1)];
        for (got, want) in v.iter().zip(expect) {
            assert_eq!(got.0, want.0);
            assert!(close(got.1, want.1));
            assert_eq!(got.2, want.2);
        }
    }

    #[test]
    fn pz_spectra() {
        let v = values(&pz_spectrum(4).unwrap());
        let expect = [(-1.0, 1), (-0.5, 4), (0.0, 6), (0.5, 4), (1.0, 1)];
        for (got, want) in v.iter().zip(expect) {
            assert_eq!((got.1, got.2), want);
        }
        for n in [1, 7, 100, 3001] {
            let s = pz_spectrum(n).unwrap();
            assert_eq!(s.blocks().last().unwrap().value.to_f64(), 1.0);
            assert_eq!(s.total_multiplicity(), BigCount::pow2(n));
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(sigma_spectrum(3, 1.5), Err(Error::Domain(_))));
        assert!(matches!(sigma_spectrum(3, -0.1), Err(Error::Domain(_))));
        assert!(matches!(sigma_spectrum(3, f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(pz_spectrum(0), Err(Error::Domain(_))));
        let s = pz_spectrum(2).unwrap();
        assert!(matches!(
            select_extremes(&s, &BigCount::from(5)),
            Err(Error::Domain(_))
        ));
        assert!(aligned_dot(&s, &pz_spectrum(3).unwrap(), &BigCount::one()).is_err());
    }

    #[test]
    fn selection_examples() {
        let s = pz_spectrum(2).unwrap();
        let sel = select_extremes(&s, &BigCount::from(1)).unwrap();
        assert_eq!(sel.top.len(), 1);
        assert_eq!(sel.top[0].value.to_f64(), 1.0);
        assert_eq!(sel.bottom[0].value.to_f64(), -1.0);

        let sel = select_extremes(&s, &BigCount::from(3)).unwrap();
        let top: Vec<_> = sel.top.iter().map(|t| (t.value.to_f64(), t.count.to_u64().unwrap())).collect();
        let bottom: Vec<_> = sel.bottom.iter().map(|t| (t.value.to_f64(), t.count.to_u64().unwrap())).collect();
        assert_eq!(top, vec![(1.0, 1), (0.0, 2)]);
        assert_eq!(bottom, vec![(-1.0, 1), (0.0, 2)]);

        // g_2 + 1 = 2: all of m = 2 and one of the four m = 1 states
        let s = sigma_spectrum(4, 0.5).unwrap();
        let sel = select_extremes(&s, &BigCount::from(2)).unwrap();
        assert_eq!(sel.top.len(), 2);
        assert_eq!((sel.top[0].m, sel.top[0].count.to_u64()), (HalfInt::integer(2), Some(1)));
        assert_eq!((sel.top[1].m, sel.top[1].count.to_u64()), (HalfInt::integer(1), Some(1)));
    }

    #[test]
    fn paired_norm_examples() {
        let flat = sigma_spectrum(5, 0.0).unwrap();
        assert!(paired_diff_norm(&flat, &BigCount::from(7)).unwrap().is_zero());
        let pz = pz_spectrum(2).unwrap();
        assert!(close(paired_diff_norm(&pz, &BigCount::one()).unwrap().to_f64(), 2.0));
        let s = sigma_spectrum(2, 0.5).unwrap();
        assert!(close(paired_diff_norm(&s, &BigCount::one()).unwrap().to_f64(), 0.5));
    }

    #[test]
    fn aligned_dot_examples() {
        let r1 = BigCount::one();
        let d = aligned_dot(&pz_spectrum(2).unwrap(), &sigma_spectrum(2, 0.5).unwrap(), &r1).unwrap();
        assert!(close(d.to_f64(), 0.5));
        for n in [1, 4, 9] {
            let pz = pz_spectrum(n).unwrap();
            for r in [1u64, 2] {
                let flat = aligned_dot(&pz, &sigma_spectrum(n, 0.0).unwrap(), &BigCount::from(r)).unwrap();
                assert!(flat.to_f64().abs() < 1e-15);
            }
            let pure = aligned_dot(&pz, &sigma_spectrum(n, 1.0).unwrap(), &r1).unwrap();
            assert!(close(pure.to_f64(), 1.0));
        }
    }
}
