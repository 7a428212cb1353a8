//! Cyclic Jacobi eigensolver for complex Hermitian matrices.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::{cis, Real, C};

const MAX_SWEEPS: usize = 60;
const MAX_DIM: usize = 512;

/// Eigenvalues in descending order; column `i` of `psi` is `ψ_i`.
#[derive(Clone, Debug)]
pub struct HermitianEigensystem<T> {
    pub lambda: Vec<T>,
    pub psi: CMatrix<T>,
}

impl<T: Real> HermitianEigensystem<T> {
    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    pub fn vector(&self, i: usize) -> Vec<C<T>> {
        self.psi.column(i)
    }

    /// `Σ f(λ_i) ψ_i ψ_i*`.
    pub fn compose(&self, f: impl Fn(T) -> T) -> CMatrix<T> {
        let n = self.n();
        let mut out = CMatrix::zeros(n, n);
        for (i, &l) in self.lambda.iter().enumerate() {
            let w = f(l);
            if w.is_zero() {
                continue;
            }
            for r in 0..n {
                let pr = self.psi[(r, i)] * w;
                for c in 0..n {
                    out[(r, c)] += pr * self.psi[(c, i)].conj();
                }
            }
        }
        out
    }

    /// `max |ψ_i*ψ_j − δ_ij|`.
    pub fn orthonormality_defect(&self) -> T {
        let g = &self.psi.adjoint() * &self.psi;
        let n = self.n();
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..n {
                let delta = if i == j { C::one() } else { C::zero() };
                worst = worst.max((g[(i, j)] - delta).norm());
            }
        }
        worst
    }
}

fn off_diagonal<T: Real>(a: &CMatrix<T>) -> T {
    let n = a.rows();
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Eigen-decomposition by cyclic Jacobi rotations, stopping once the
/// off-diagonal Frobenius mass is below `1e-13·‖M‖_F`.
pub fn hermitian_eig<T: Real>(m: &CMatrix<T>) -> Result<HermitianEigensystem<T>> {
    if !m.is_square() || m.rows() > MAX_DIM {
        return Err(Error::DimensionMismatch(format!(
            "eigensolver needs a square matrix of order at most {MAX_DIM}, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let norm = m.frobenius();
    let defect = m.hermitian_defect();
    if defect > T::tol(1e-10) * norm || !m.is_finite() {
        return Err(Error::NotHermitian { defect: (defect / norm).to_f64_lossy() });
    }
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = CMatrix::identity(n);
    let target = T::tol(1e-13) * norm;
    let mut sweeps = 0;
    while off_diagonal(&a) > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].total_order(&diag[i]));
    let lambda = order.iter().map(|&i| diag[i]).collect();
    let psi = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigensystem { lambda, psi })
}

/// Annihilates `a[p][q]` with `V = [[c, s e^{iφ}], [−s e^{−iφ}, c]]`,
/// `A ← V*AV`, `V_acc ← V_acc V`.
fn rotate<T: Real>(a: &mut CMatrix<T>, v: &mut CMatrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let b = apq.norm();
    if b.is_zero() {
        return;
    }
    let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
    let phase = cis(apq.arg());
    let theta = (aqq - app) / (T::of(2.0) * b);
    let t = if theta.is_zero() {
        T::one()
    } else {
        theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt())
    };
    if !t.is_finite() || t.is_zero() {
        // |θ| so large that the rotation is the identity to working precision
        a[(p, q)] = C::zero();
        a[(q, p)] = C::zero();
        return;
    }
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;
    let (sp, sm) = (phase * s, phase.conj() * s);
    let n = a.rows();
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * c - akq * sm;
        a[(k, q)] = akp * sp + akq * c;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = apk * c - aqk * sp;
        a[(q, k)] = apk * sm + aqk * c;
    }
    a[(p, p)] = C::new(app - t * b, T::zero());
    a[(q, q)] = C::new(aqq + t * b, T::zero());
    a[(p, q)] = C::zero();
    a[(q, p)] = C::zero();
    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * c - vkq * sm;
        v[(k, q)] = vkp * sp + vkq * c;
    }
}

/// `|M| = Σ|λ_i| ψ_i ψ_i*`.
pub fn operator_abs<T: Real>(m: &CMatrix<T>) -> Result<CMatrix<T>> {
    Ok(hermitian_eig(m)?.compose(T::abs))
}

#[cfg(test)]
pub(crate) mod support {
    use crate::linalg::CMatrix;
    use crate::scalar::cplx;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_matrix(n: usize, seed: u64) -> CMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        CMatrix::from_fn(n, n, |_, _| cplx(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
    }

    pub(crate) fn random_hermitian(n: usize, seed: u64) -> CMatrix<f64> {
        random_matrix(n, seed).hermitian_part()
    }

    /// `G G*`: Hermitian positive semidefinite.
    pub(crate) fn random_psd(n: usize, seed: u64) -> CMatrix<f64> {
        let g = random_matrix(n, seed);
        (&g * &g.adjoint()).hermitian_part()
    }
}
