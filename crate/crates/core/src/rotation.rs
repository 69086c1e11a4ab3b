//! Orthogonal maps `diag(γ_v, I_{k+1})` acting on `R^{n+1}` with
//! `γ_v e_{n-k} = v`. Shared by the spherical and hyperbolic complexes.

use crate::error::{Error, Result};
use crate::numkit::norm;

#[derive(Debug, Clone, PartialEq)]
pub struct BlockRotation {
    /// Side of the ambient space, `n + 1`.
    size: usize,
    /// Side of the leading block, `n - k`.
    block: usize,
    /// Leading block, row-major `block × block`.
    gamma: Vec<f64>,
}

/// Builds `diag(γ_v, I)` with `γ_v` the Householder reflection taking the last
/// basis vector of `R^{n-k}` to `v`, composed with a reflection of the first
/// axis when `n - k >= 2` so that `det = +1`. Identity when `v = e_{n-k}`.
pub fn make_block_rotation(v: &[f64], size: usize) -> Result<BlockRotation> {
    let q = v.len();
    if q == 0 || q > size {
        return Err(Error::invalid(format!("block of size {q} does not fit in R^{size}")));
    }
    let r = norm(v);
    if (r - 1.0).abs() > 1e-10 {
        return Err(Error::invalid(format!("v must be a unit vector, |v| = {r}")));
    }
    let mut gamma = vec![0.0; q * q];
    for i in 0..q {
        gamma[i * q + i] = 1.0;
    }
    let last = q - 1;
    let identity = v.iter().enumerate().all(|(i, &x)| if i == last { x == 1.0 } else { x == 0.0 });
    if !identity {
        // H = I - 2 u uᵀ/|u|², u = e_last - v; H e_last = v.
        let mut u: Vec<f64> = v.iter().map(|x| -x).collect();
        u[last] += 1.0;
        let uu: f64 = u.iter().map(|x| x * x).sum();
        for i in 0..q {
            for j in 0..q {
                gamma[i * q + j] -= 2.0 * u[i] * u[j] / uu;
            }
        }
        if q >= 2 {
            // Right-multiply by diag(-1, 1, ..., 1); column `last` is untouched.
            for i in 0..q {
                gamma[i * q] = -gamma[i * q];
            }
        }
        // Column `last` must equal v exactly.
        for i in 0..q {
            gamma[i * q + last] = v[i];
        }
    }
    Ok(BlockRotation { size, block: q, gamma })
}

impl BlockRotation {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn block(&self) -> usize {
        self.block
    }

    /// Full `(n+1) × (n+1)` matrix, row-major.
    pub fn matrix(&self) -> Vec<f64> {
        let (n, q) = (self.size, self.block);
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                m[i * n + j] = if i < q && j < q {
                    self.gamma[i * q + j]
                } else if i == j {
                    1.0
                } else {
                    0.0
                };
            }
        }
        m
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let q = self.block;
        let mut y = x.to_vec();
        for i in 0..q {
            y[i] = (0..q).map(|j| self.gamma[i * q + j] * x[j]).sum();
        }
        y
    }

    pub fn apply_transpose(&self, x: &[f64]) -> Vec<f64> {
        let q = self.block;
        let mut y = x.to_vec();
        for i in 0..q {
            y[i] = (0..q).map(|j| self.gamma[j * q + i] * x[j]).sum();
        }
        y
    }

    /// Largest entry of `MᵀM - I`.
    pub fn orthogonality_defect(&self) -> f64 {
        let q = self.block;
        let mut worst = 0.0f64;
        for i in 0..q {
            for j in 0..q {
                let dot: f64 = (0..q).map(|r| self.gamma[r * q + i] * self.gamma[r * q + j]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}
