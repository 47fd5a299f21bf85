use std::f64::consts::PI;

use super::coherence::coherence_project_pm;
use super::dense::{build_spin_operators, check_spins, polarized_state, rz, DenseOperator, MAX_HEAVY_SPINS};
use crate::error::{Error, Result};

const UNITARY_TOL: f64 = 1e-10;

fn prepare(n_spins: u32, q: u32, u: &DenseOperator, v: &DenseOperator) -> Result<()> {
    check_spins(n_spins, MAX_HEAVY_SPINS)?;
    if q > n_spins {
        return Err(Error::domain(format!("coherence order q = {q} exceeds N = {n_spins}")));
    }
    let dim = 1usize << n_spins;
    if u.dim() != dim || v.dim() != dim {
        return Err(Error::domain(format!("unitaries must act on {dim} states")));
    }
    u.ensure_unitary(UNITARY_TOL)?;
    v.ensure_unitary(UNITARY_TOL)
}

/// Measured intensity of order `q` from `2N + 1` phase-cycled scans: each
/// scan prepares `U σ_p U†`, rotates it about `z` by `φ_k = 2πk/(2N+1)`,
/// applies `V` and reads `P_z`; the record is cosine-transformed in `k`.
pub fn phase_cycle_experiment(
    n_spins: u32,
    q: u32,
    p: f64,
    u: &DenseOperator,
    v: &DenseOperator,
) -> Result<f64> {
    prepare(n_spins, q, u, v)?;
    let pz = build_spin_operators(n_spins)?.pz;
    let prepared = polarized_state(n_spins, p)?.conjugated_by(u);
    let scans = 2 * n_spins + 1;
    let mut signal = 0.0;
    for k in 0..scans {
        let phi = 2.0 * PI * f64::from(k) / f64::from(scans);
        let record = prepared.conjugated_by(&rz(n_spins, phi)?).conjugated_by(v).overlap(&pz);
        let w = if q == 0 {
            1.0 / f64::from(scans)
        } else {
            2.0 * (f64::from(q) * phi).cos() / f64::from(scans)
        };
        signal += w * record;
    }
    Ok(signal)
}

/// The same intensity evaluated directly as `Tr(P_z V P_{±q}(U σ_p U†) V†)`.
pub fn projected_signal(
    n_spins: u32,
    q: u32,
    p: f64,
    u: &DenseOperator,
    v: &DenseOperator,
) -> Result<f64> {
    prepare(n_spins, q, u, v)?;
    let pz = build_spin_operators(n_spins)?.pz;
    let prepared = polarized_state(n_spins, p)?.conjugated_by(u);
    Ok(coherence_project_pm(&prepared, q as i32).conjugated_by(v).overlap(&pz))
}
