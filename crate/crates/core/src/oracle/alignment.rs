use serde::Serialize;

use super::coherence::coherence_project_pm;
use super::dense::{
    build_spin_operators, check_spins, hermitian_eigen, polarized_state, DenseOperator,
    MAX_HEAVY_SPINS,
};
use super::zigzag::{weighted_pair_operator, zigzag_pairs};
use crate::error::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-10;

/// `max_U Tr(B U A U†)`: the ascending eigenvalues of `A` and `B` dotted
/// together, and a unitary reaching it.
///
/// The unitary sends the `i`-th eigenvector of `A` to the `i`-th
/// eigenvector of `B`, both in ascending order.
pub fn max_overlap(a: &DenseOperator, b: &DenseOperator) -> Result<(f64, DenseOperator)> {
    if a.dim() != b.dim() {
        return Err(Error::domain(format!(
            "dimension mismatch: {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    a.ensure_hermitian(HERMITIAN_TOL)?;
    b.ensure_hermitian(HERMITIAN_TOL)?;
    let (va, ea) = hermitian_eigen(a)?;
    let (vb, eb) = hermitian_eigen(b)?;
    let value = va.iter().zip(&vb).map(|(x, y)| x * y).sum();
    Ok((value, DenseOperator::from_matrix(eb * ea.adjoint())))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AchievableSignal {
    pub value: f64,
    /// Set when the state carries no polarisation and the construction has
    /// nothing to align.
    pub degenerate: bool,
}

/// Signal of coherence order `q` reached by the explicit two-step
/// alignment: rotate `σ_p` onto a weighted zigzag operator, keep the `±q`
/// part, then rotate that onto `P_z`.
pub fn achievable_signal(n_spins: u32, q: u32, p: f64) -> Result<AchievableSignal> {
    check_spins(n_spins, MAX_HEAVY_SPINS)?;
    let sigma = polarized_state(n_spins, p)?;
    let pairs = zigzag_pairs(n_spins, q)?;
    let s = sigma.eigenvalues();
    let d = s.len();
    // weight of pair i: gap between the i-th largest and i-th smallest eigenvalue
    let mut weights: Vec<f64> = (0..pairs.len()).map(|i| s[d - 1 - i] - s[i]).collect();
    let norm = (2.0 * weights.iter().map(|w| w * w).sum::<f64>()).sqrt();
    if norm == 0.0 {
        return Ok(AchievableSignal {
            value: 0.0,
            degenerate: true,
        });
    }
    weights.iter_mut().for_each(|w| *w /= norm);
    let target = weighted_pair_operator(n_spins, &pairs, &weights);

    let (_, u) = max_overlap(&sigma, &target)?;
    let projected = coherence_project_pm(&sigma.conjugated_by(&u), q as i32);
    let pz = build_spin_operators(n_spins)?.pz;
    let (_, v) = max_overlap(&projected, &pz)?;
    Ok(AchievableSignal {
        value: projected.conjugated_by(&v).overlap(&pz),
        degenerate: false,
    })
}
