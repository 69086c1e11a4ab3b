use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::euclid::RestrictedSinogram;
use crate::numkit::pairwise_sum_by;

/// Homogeneous degree-`m` polynomial `Σ_{|α|=m} c_α(x'') θ^α` fitted to the
/// s-moments of a sinogram.
#[derive(Debug, Clone, Serialize)]
pub struct MomentPolynomial {
    pub degree: usize,
    pub multi_indices: Vec<Vec<usize>>,
    /// `coefficients[a][j]` is `c_α(x''_j)` for `α = multi_indices[a]`.
    pub coefficients: Vec<Vec<f64>>,
    /// Worst relative least-squares misfit over the `x''` grid.
    pub residual: f64,
    /// Condition number of the monomial Gram matrix.
    pub condition: f64,
}

/// All `α ∈ Z_+^{vars}` with `|α| = m`, lexicographically descending.
pub fn multi_indices(vars: usize, m: usize) -> Vec<Vec<usize>> {
    if vars == 1 {
        return vec![vec![m]];
    }
    let mut out = Vec::new();
    for first in (0..=m).rev() {
        for mut rest in multi_indices(vars - 1, m - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn monomial(theta: &[f64], alpha: &[usize]) -> f64 {
    theta.iter().zip(alpha).map(|(t, &a)| t.powi(a as i32)).product()
}

/// Per-direction moments `μ_m(θ_i, x''_j) = ∫ φ(θ_i, s; x''_j) s^m ds` and
/// the matching magnitudes `∫ |φ| |s|^m ds`.
pub(crate) fn s_moments(phi: &RestrictedSinogram, m: usize) -> (Vec<f64>, Vec<f64>) {
    let grid = phi.grid();
    let (nt, nx) = (grid.theta.len(), grid.xpp_len());
    let s = grid.s.nodes();
    let w = grid.s.weights();
    let mut mu = vec![0.0; nt * nx];
    let mut mag = vec![0.0; nt * nx];
    for it in 0..nt {
        for ix in 0..nx {
            mu[it * nx + ix] = pairwise_sum_by(s.len(), |i| w[i] * phi.get(it, i, ix) * s[i].powi(m as i32));
            mag[it * nx + ix] = pairwise_sum_by(s.len(), |i| w[i] * (phi.get(it, i, ix) * s[i].powi(m as i32)).abs());
        }
    }
    (mu, mag)
}

/// Least-squares fit of the degree-`m` moment by a homogeneous polynomial in
/// θ, independently for every `x''` node.
pub fn check_moment_condition(phi: &RestrictedSinogram, m: usize) -> Result<MomentPolynomial> {
    let grid = phi.grid();
    let q = &grid.theta;
    let alphas = multi_indices(q.dim() + 1, m);
    let na = alphas.len();
    let nt = q.len();
    if nt < 3 * na {
        return Err(Error::Precondition(format!(
            "{nt} directions is fewer than 3x the {na} monomials of degree {m}"
        )));
    }
    let a = DMatrix::from_fn(nt, na, |i, j| monomial(q.point(i), &alphas[j]));
    let mut gram = a.transpose() * &a;
    let eig = gram.clone().symmetric_eigen();
    let (lo, hi) = eig.eigenvalues.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &e| (l.min(e), h.max(e.abs())));
    let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if condition > 1e8 {
        return Err(Error::Fit { condition });
    }
    let mean_diag = gram.diagonal().mean();
    for i in 0..na {
        gram[(i, i)] += 1e-12 * mean_diag;
    }
    let chol = gram
        .cholesky()
        .ok_or(Error::Fit { condition })?;

    let (mu, mag) = s_moments(phi, m);
    let nx = grid.xpp_len();
    let mut coefficients = vec![vec![0.0; nx]; na];
    let mut residual = 0.0f64;
    for ix in 0..nx {
        let b = DVector::from_fn(nt, |i, _| mu[i * nx + ix]);
        let c = chol.solve(&(a.transpose() * &b));
        let r = &b - &a * &c;
        let scale = (0..nt).map(|i| mag[i * nx + ix].powi(2)).sum::<f64>().sqrt();
        let rel = if scale > 0.0 { r.norm() / scale } else { 0.0 };
        residual = residual.max(rel);
        for (j, cj) in c.iter().enumerate() {
            coefficients[j][ix] = *cj;
        }
    }
    Ok(MomentPolynomial { degree: m, multi_indices: alphas, coefficients, residual, condition })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multi_index_counts() {
        assert_eq!(multi_indices(2, 3).len(), 4);
        assert_eq!(multi_indices(3, 2).len(), 6);
        assert_eq!(multi_indices(2, 0), vec![vec![0, 0]]);
        assert!(multi_indices(3, 4).iter().all(|a| a.iter().sum::<usize>() == 4));
    }
}
