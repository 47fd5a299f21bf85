use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Largest spin count the dense oracle accepts.
pub const MAX_DENSE_SPINS: u32 = 8;
/// Limit for operations that eigendecompose or sample many matrices.
pub const MAX_HEAVY_SPINS: u32 = 6;

pub(crate) fn check_spins(n_spins: u32, max: u32) -> Result<()> {
    if n_spins == 0 || n_spins > max {
        return Err(Error::ResourceGuard { n: n_spins, max });
    }
    Ok(())
}

/// Explicit `2^N × 2^N` complex matrix in the computational basis. Basis
/// index `b` has spin `j` up when bit `j` of `b` is set.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator(CMatrix);

impl DenseOperator {
    pub fn from_matrix(m: CMatrix) -> Self {
        assert!(m.is_square(), "operator must be square");
        DenseOperator(m)
    }

    pub fn zeros(dim: usize) -> Self {
        DenseOperator(CMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        DenseOperator(CMatrix::identity(dim, dim))
    }

    pub fn from_diagonal(values: impl IntoIterator<Item = Complex64>) -> Self {
        let d: Vec<Complex64> = values.into_iter().collect();
        DenseOperator(CMatrix::from_diagonal(&nalgebra::DVector::from_vec(d)))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    /// Spin count implied by the dimension.
    pub fn n_spins(&self) -> u32 {
        self.dim().trailing_zeros()
    }

    pub fn adjoint(&self) -> Self {
        DenseOperator(self.0.adjoint())
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn scale(&self, s: f64) -> Self {
        DenseOperator(self.0.map(|z| z * s))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        DenseOperator(&self.0 * &rhs.0)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        DenseOperator(&self.0 + &rhs.0)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        DenseOperator(&self.0 - &rhs.0)
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        DenseOperator(&self.0 * &rhs.0 - &rhs.0 * &self.0)
    }

    /// `U A U†`.
    pub fn conjugated_by(&self, u: &Self) -> Self {
        DenseOperator(&u.0 * &self.0 * u.0.adjoint())
    }

    /// `Tr(A B)` for Hermitian arguments, real part only.
    pub fn overlap(&self, rhs: &Self) -> f64 {
        // Tr(AB) = Σ_ij A_ij B_ji without forming the product
        let mut acc = 0.0;
        for j in 0..self.dim() {
            for i in 0..self.dim() {
                acc += (self.0[(i, j)] * rhs.0[(j, i)]).re;
            }
        }
        acc
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        self.0
            .iter()
            .zip(rhs.0.iter())
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn hermitian_residual(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn unitary_residual(&self) -> f64 {
        DenseOperator(self.0.adjoint() * &self.0).max_abs_diff(&Self::identity(self.dim()))
    }

    pub fn ensure_hermitian(&self, tol: f64) -> Result<()> {
        let r = self.hermitian_residual();
        if r > tol {
            return Err(Error::NotHermitian(r));
        }
        Ok(())
    }

    pub fn ensure_unitary(&self, tol: f64) -> Result<()> {
        let r = self.unitary_residual();
        if r > tol {
            return Err(Error::NotUnitary(r));
        }
        Ok(())
    }

    /// Number of singular values above `rel_tol` times the largest.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let sv = self.0.clone().singular_values();
        let top = sv.iter().cloned().fold(0.0, f64::max);
        if top == 0.0 {
            return 0;
        }
        sv.iter().filter(|&&s| s > rel_tol * top).count()
    }

    /// Ascending eigenvalues of a Hermitian operator.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.0.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// Collective spin operators for `N` spins.
#[derive(Clone, Debug)]
pub struct SpinOperators {
    pub n_spins: u32,
    pub iz: DenseOperator,
    pub iplus: DenseOperator,
    pub iminus: DenseOperator,
    /// `(2/N) I_z`
    pub pz: DenseOperator,
}

/// `I_z` eigenvalue `popcount(b) − N/2` of basis state `b`.
pub fn magnetic_number(n_spins: u32, b: usize) -> f64 {
    f64::from(b.count_ones()) - f64::from(n_spins) / 2.0
}

pub fn build_spin_operators(n_spins: u32) -> Result<SpinOperators> {
    check_spins(n_spins, MAX_DENSE_SPINS)?;
    let dim = 1usize << n_spins;
    let iz = DenseOperator::from_diagonal((0..dim).map(|b| Complex64::from(magnetic_number(n_spins, b))));
    let mut iplus = CMatrix::zeros(dim, dim);
    for b in 0..dim {
        for j in 0..n_spins {
            if b & (1 << j) == 0 {
                iplus[(b | (1 << j), b)] = Complex64::from(1.0);
            }
        }
    }
    let iplus = DenseOperator(iplus);
    Ok(SpinOperators {
        n_spins,
        pz: iz.scale(2.0 / f64::from(n_spins)),
        iminus: iplus.adjoint(),
        iplus,
        iz,
    })
}

/// `exp(−iφ I_z)`.
pub fn rz(n_spins: u32, phi: f64) -> Result<DenseOperator> {
    check_spins(n_spins, MAX_DENSE_SPINS)?;
    Ok(DenseOperator::from_diagonal(
        (0..1usize << n_spins).map(|b| Complex64::from_polar(1.0, -phi * magnetic_number(n_spins, b))),
    ))
}

/// `exp(−iθ I_x)`, a product of identical single-spin rotations.
pub fn rx(n_spins: u32, theta: f64) -> Result<DenseOperator> {
    check_spins(n_spins, MAX_DENSE_SPINS)?;
    let dim = 1usize << n_spins;
    let c = Complex64::from((theta / 2.0).cos());
    let s = Complex64::new(0.0, -(theta / 2.0).sin());
    let mut m = CMatrix::zeros(dim, dim);
    for a in 0..dim {
        for b in 0..dim {
            let flips = (a ^ b).count_ones() as i32;
            m[(a, b)] = c.powi(n_spins as i32 - flips) * s.powi(flips);
        }
    }
    Ok(DenseOperator(m))
}

/// `σ_p = (1/2 + p I_z)^{⊗N}`, diagonal.
pub fn polarized_state(n_spins: u32, p: f64) -> Result<DenseOperator> {
    check_spins(n_spins, MAX_DENSE_SPINS)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("polarization p = {p} outside [0, 1]")));
    }
    let (up, down) = ((1.0 + p) / 2.0, (1.0 - p) / 2.0);
    Ok(DenseOperator::from_diagonal((0..1usize << n_spins).map(|b| {
        let k = b.count_ones() as i32;
        Complex64::from(up.powi(k) * down.powi(n_spins as i32 - k))
    })))
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DenseOperator {
    DenseOperator(CMatrix::from_fn(dim, dim, |_, _| complex_normal(rng)))
}

/// Gaussian-unitary-ensemble sample `(G + G†)/2`.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DenseOperator {
    let g = random_matrix(dim, rng);
    g.add(&g.adjoint()).scale(0.5)
}

/// Haar-distributed unitary from the QR factorisation of a Ginibre matrix,
/// with the phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DenseOperator {
    let qr = random_matrix(dim, rng).into_matrix().qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() == 0.0 { Complex64::from(1.0) } else { d / d.norm() };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    DenseOperator(q)
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Returns ascending eigenvalues and the matching eigenvectors
/// as columns.
///
/// Rotations only ever touch pairs with a nonzero off-diagonal entry, so a
/// direct sum of `2 × 2` blocks `[[0, w], [w, 0]]` comes out with exact
/// `(e_u ± e_v)/√2` eigenvectors and untouched basis vectors elsewhere.
pub fn hermitian_eigen(a: &DenseOperator) -> Result<(Vec<f64>, CMatrix)> {
    a.ensure_hermitian(1e-9)?;
    let n = a.dim();
    let mut m = a.0.clone();
    let mut v = CMatrix::identity(n, n);
    let scale = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let tol = 1e-15 * scale;
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= tol || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let beta = m[(p, q)];
                let abs = beta.norm();
                if abs <= f64::MIN_POSITIVE || abs < 1e-18 * scale {
                    continue;
                }
                let phase = beta / abs;
                let tau = (m[(q, q)].re - m[(p, p)].re) / (2.0 * abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // W = [[c, s], [−s e^{−iφ}, c e^{−iφ}]] on (p, q); M ← W† M W
                let e = phase.conj();
                let w = [
                    [Complex64::from(c), Complex64::from(s)],
                    [-e * s, e * c],
                ];
                for k in 0..n {
                    let (mp, mq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = mp * w[0][0] + mq * w[1][0];
                    m[(k, q)] = mp * w[0][1] + mq * w[1][1];
                    let (vp, vq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vp * w[0][0] + vq * w[1][0];
                    v[(k, q)] = vp * w[0][1] + vq * w[1][1];
                }
                for k in 0..n {
                    let (mp, mq) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = w[0][0].conj() * mp + w[1][0].conj() * mq;
                    m[(q, k)] = w[0][1].conj() * mp + w[1][1].conj() * mq;
                }
                m[(p, q)] = Complex64::from(0.0);
                m[(q, p)] = Complex64::from(0.0);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok((values, vectors))
}
