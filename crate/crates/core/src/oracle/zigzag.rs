use num_complex::Complex64;

use super::dense::{check_spins, CMatrix, DenseOperator, MAX_DENSE_SPINS};
use crate::error::{Error, Result};

/// Basis-state pairs `(u, v)` with `popcount(u) = popcount(v) + q`, each
/// state used at most once, of maximal size.
///
/// The manifolds whose up-counts agree mod `q` form a chain in which a
/// coherence-order-`q` operator only links neighbours. Walking each chain
/// upward and matching every still-free state of one manifold to a fresh
/// state of the next reaches the maximal matching, `R^N_q / 2` pairs.
pub fn zigzag_pairs(n_spins: u32, q: u32) -> Result<Vec<(usize, usize)>> {
    check_spins(n_spins, MAX_DENSE_SPINS)?;
    if q == 0 || q > n_spins {
        return Err(Error::domain(format!("coherence order q = {q} outside [1, {n_spins}]")));
    }
    let n = n_spins as usize;
    let q = q as usize;
    let mut by_count: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for b in 0..1usize << n {
        by_count[b.count_ones() as usize].push(b);
    }
    let mut pairs = Vec::new();
    for start in 0..q {
        // states of the current manifold not yet matched downward
        let mut free: &[usize] = &by_count[start];
        let mut level = start;
        while level + q <= n {
            let next = &by_count[level + q];
            let k = free.len().min(next.len());
            pairs.extend(free[..k].iter().zip(&next[..k]).map(|(&lo, &hi)| (hi, lo)));
            free = &next[k..];
            level += q;
        }
    }
    Ok(pairs)
}

/// `Σ_i w_i (|u_i⟩⟨v_i| + |v_i⟩⟨u_i|)` over the given pairs.
pub fn weighted_pair_operator(n_spins: u32, pairs: &[(usize, usize)], weights: &[f64]) -> DenseOperator {
    let dim = 1usize << n_spins;
    let mut m = CMatrix::zeros(dim, dim);
    for (&(u, v), &w) in pairs.iter().zip(weights) {
        m[(u, v)] = Complex64::from(w);
        m[(v, u)] = Complex64::from(w);
    }
    DenseOperator::from_matrix(m)
}

/// Hermitian operator on coherence orders `±q` of maximal rank, built from
/// unit-weight zigzag pairs.
pub fn zigzag_max_rank_operator(n_spins: u32, q: u32) -> Result<DenseOperator> {
    let pairs = zigzag_pairs(n_spins, q)?;
    Ok(weighted_pair_operator(n_spins, &pairs, &vec![1.0; pairs.len()]))
}
