use std::collections::BTreeMap;
use std::f64::consts::PI;

use super::dense::{rz, CMatrix, DenseOperator};
use crate::error::{Error, Result};

fn order_of(i: usize, j: usize) -> i32 {
    i.count_ones() as i32 - j.count_ones() as i32
}

/// Component of `a` with coherence order `q`: entries `(i, j)` whose
/// magnetic numbers differ by exactly `q`.
pub fn coherence_project(a: &DenseOperator, q: i32) -> DenseOperator {
    let m = a.matrix();
    DenseOperator::from_matrix(CMatrix::from_fn(a.dim(), a.dim(), |i, j| {
        if order_of(i, j) == q {
            m[(i, j)]
        } else {
            num_complex::Complex64::from(0.0)
        }
    }))
}

/// `P_q(a) + P_{−q}(a)`, or `P_0(a)` for `q = 0`.
pub fn coherence_project_pm(a: &DenseOperator, q: i32) -> DenseOperator {
    if q == 0 {
        return coherence_project(a, 0);
    }
    coherence_project(a, q).add(&coherence_project(a, -q))
}

#[derive(Clone, Debug)]
pub struct CoherenceDecomposition {
    pub components: BTreeMap<i32, DenseOperator>,
}

impl CoherenceDecomposition {
    pub fn new(a: &DenseOperator) -> Self {
        let n = a.n_spins() as i32;
        CoherenceDecomposition {
            components: (-n..=n).map(|q| (q, coherence_project(a, q))).collect(),
        }
    }

    pub fn reconstruct(&self) -> Option<DenseOperator> {
        let mut it = self.components.values();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, c| acc.add(c)))
    }
}

/// The same `±q` filter realised as a phase cycle:
/// `Σ_k w_k R_z(φ_k) A R_z(φ_k)†` with `φ_k = 2πk/(2N+1)`,
/// `w_k = 2 cos(qφ_k)/(2N+1)` and `w_k = 1/(2N+1)` for `q = 0`.
pub fn projector_fourier(a: &DenseOperator, q: i32, n_spins: u32) -> Result<DenseOperator> {
    if q.unsigned_abs() > n_spins {
        return Err(Error::domain(format!("|q| = {} exceeds N = {n_spins}", q.abs())));
    }
    if a.n_spins() != n_spins || a.dim() != 1 << n_spins {
        return Err(Error::domain(format!("operator of dimension {} is not on {n_spins} spins", a.dim())));
    }
    let scans = 2 * n_spins + 1;
    let mut acc = DenseOperator::zeros(a.dim());
    for k in 0..scans {
        let phi = 2.0 * PI * f64::from(k) / f64::from(scans);
        let w = if q == 0 {
            1.0 / f64::from(scans)
        } else {
            2.0 * (f64::from(q) * phi).cos() / f64::from(scans)
        };
        acc = acc.add(&a.conjugated_by(&rz(n_spins, phi)?).scale(w));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::dense::{build_spin_operators, polarized_state, random_matrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ix_splits_into_ladders() {
        let ops = build_spin_operators(3).unwrap();
        let ix = ops.iplus.add(&ops.iminus).scale(0.5);
        assert!(coherence_project(&ix, 1).max_abs_diff(&ops.iplus.scale(0.5)) < 1e-15);
        let f = projector_fourier(&ix, 1, 3).unwrap();
        assert!(f.max_abs_diff(&ix) < 1e-12);
    }

    #[test]
    fn diagonal_state_is_zero_quantum() {
        let s = polarized_state(3, 0.3).unwrap();
        assert_eq!(coherence_project(&s, 0), s);
        assert!(projector_fourier(&s, 1, 3).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn decomposition_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ops = build_spin_operators(4).unwrap();
        let a = random_matrix(16, &mut rng);
        let dec = CoherenceDecomposition::new(&a);
        assert_eq!(dec.components.len(), 9);
        assert_eq!(dec.reconstruct().unwrap(), a);
        for (&q, c) in &dec.components {
            let lhs = ops.iz.commutator(c);
            assert!(lhs.max_abs_diff(&c.scale(f64::from(q))) < 1e-12);
            let f = projector_fourier(&a, q, 4).unwrap();
            assert!(f.max_abs_diff(&coherence_project_pm(&a, q)) < 1e-10, "q = {q}");
        }
        assert!(projector_fourier(&a, 5, 4).is_err());
    }
}
