//! Thin SVD by one-sided (Hestenes) Jacobi rotations.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Matrix, Result};

/// Two columns count as orthogonal once `|⟨p,q⟩| ≤ ORTHO_TOL·‖p‖‖q‖` or
/// `|⟨p,q⟩| ≤ GRAM_TOL·‖M‖_F²`; the second test stops rotations among columns
/// that are pure rounding noise.
const ORTHO_TOL: f64 = 1e-15;
const GRAM_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// `M = U·diag(σ)·V'` with `k = min(n, m)` columns in `U` and `V`.
#[derive(Debug, Clone, PartialEq)]
pub struct Svd {
    pub u: Matrix,
    /// Descending, nonnegative.
    pub singular_values: Vec<f64>,
    pub v: Matrix,
}

impl Svd {
    pub fn reconstruct(&self) -> Matrix {
        let k = self.singular_values.len();
        Matrix::from_fn(self.u.nrows(), self.v.nrows(), |i, j| {
            (0..k)
                .map(|a| self.u[(i, a)] * self.singular_values[a] * self.v[(j, a)])
                .sum()
        })
    }
}

pub fn svd(m: &Matrix) -> Result<Svd> {
    if let Some(pos) = m.first_non_finite() {
        return Err(Error::NonFinite(pos));
    }
    if m.ncols() > m.nrows() {
        let t = svd_tall(&m.transpose())?;
        return Ok(Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        });
    }
    svd_tall(m)
}

/// `n ≥ m`
fn svd_tall(m: &Matrix) -> Result<Svd> {
    let (n, k) = (m.nrows(), m.ncols());
    let mut cols: Vec<Vec<f64>> = (0..k).map(|j| m.column(j).collect()).collect();
    let mut vcols: Vec<Vec<f64>> = (0..k)
        .map(|j| {
            let mut e = vec![0.0; k];
            e[j] = 1.0;
            e
        })
        .collect();

    let gram_floor = GRAM_TOL * m.as_slice().iter().map(|x| x * x).sum::<f64>();
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..k {
            for q in p + 1..k {
                let alpha: f64 = cols[p].iter().map(|x| x * x).sum();
                let beta: f64 = cols[q].iter().map(|x| x * x).sum();
                let gamma: f64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x * y).sum();
                if gamma.abs() <= gram_floor || gamma.abs() <= ORTHO_TOL * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                rotate(&mut cols, p, q, c, s);
                rotate(&mut vcols, p, q, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let norms: Vec<f64> = cols
        .iter()
        .map(|c| libm::sqrt(c.iter().map(|x| x * x).sum()))
        .collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));

    let scale = norms.iter().copied().fold(0.0, f64::max);
    let mut ucols: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut singular_values = Vec::with_capacity(k);
    for &j in &order {
        let sigma = norms[j];
        if sigma > 1e-300 && sigma > f64::EPSILON * scale * 1e-3 {
            ucols.push(cols[j].iter().map(|x| x / sigma).collect());
            singular_values.push(sigma);
        } else {
            ucols.push(orthonormal_complement(&ucols, n));
            singular_values.push(sigma);
        }
    }
    let u = Matrix::from_fn(n, k, |i, a| ucols[a][i]);
    let v = Matrix::from_fn(k, k, |i, a| vcols[order[a]][i]);
    Ok(Svd {
        u,
        singular_values,
        v,
    })
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (lo, hi) = cols.split_at_mut(q);
    for (x, y) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
        let (xp, xq) = (*x, *y);
        *x = c * xp - s * xq;
        *y = s * xp + c * xq;
    }
}

/// A unit vector orthogonal to every column in `basis`.
fn orthonormal_complement(basis: &[Vec<f64>], n: usize) -> Vec<f64> {
    let mut best: Option<Vec<f64>> = None;
    let mut best_norm = 0.0;
    for e in 0..n {
        let mut w = vec![0.0; n];
        w[e] = 1.0;
        // two passes of Gram-Schmidt
        for _ in 0..2 {
            for b in basis {
                let proj: f64 = b.iter().zip(&w).map(|(x, y)| x * y).sum();
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= proj * bi;
                }
            }
        }
        let norm = libm::sqrt(w.iter().map(|x| x * x).sum());
        if norm > best_norm {
            best_norm = norm;
            best = Some(w);
        }
        if norm > 0.5 {
            break;
        }
    }
    let w = best.unwrap_or_else(|| vec![0.0; n]);
    w.iter().map(|x| x / best_norm).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn orthonormality_defect(q: &Matrix) -> f64 {
        let qtq = q.transpose().matmul(q).unwrap();
        let mut worst = 0.0_f64;
        for i in 0..qtq.nrows() {
            for j in 0..qtq.ncols() {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((qtq[(i, j)] - want).abs());
            }
        }
        worst
    }

    #[test]
    fn diagonal() {
        let s = svd(&Matrix::from_rows(&[[1.0, 0.0], [0.0, 3.0]]).unwrap()).unwrap();
        assert_eq!(s.singular_values, vec![3.0, 1.0]);
    }

    #[test]
    fn zero_matrix() {
        let s = svd(&Matrix::zeros(3, 2)).unwrap();
        assert_eq!(s.singular_values, vec![0.0, 0.0]);
        assert!(orthonormality_defect(&s.u) < 1e-12);
    }

    #[test]
    fn random_reconstruction_and_orthogonality() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for &(n, m) in &[(6, 4), (4, 6), (5, 5), (7, 1)] {
            let a = Matrix::from_fn(n, m, |_, _| rng.gen_range(-1.0..1.0));
            let s = svd(&a).unwrap();
            let r = s.reconstruct();
            let err = Matrix::from_fn(n, m, |i, j| r[(i, j)] - a[(i, j)]).frobenius_norm();
            assert!(err <= 1e-10 * a.frobenius_norm());
            assert!(orthonormality_defect(&s.u) < 1e-10);
            assert!(orthonormality_defect(&s.v) < 1e-10);
            assert!(s.singular_values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn rank_deficient_input_keeps_orthonormal_u() {
        let a = Matrix::from_rows(&[[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]]).unwrap();
        let s = svd(&a).unwrap();
        assert!(s.singular_values[1] < 1e-14);
        assert!(orthonormality_defect(&s.u) < 1e-10);
    }
}
