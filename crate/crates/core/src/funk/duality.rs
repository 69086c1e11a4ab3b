use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::Serialize;

use super::field::SphereField;
use super::forward::{element_exact, embed_slice, funk_forward_with, subsphere_rule};
use crate::error::{Error, Result};
use crate::numkit::{gauss_legendre_unit, make_sphere_quadrature, pairwise_sum, sphere_surface_area};
use crate::rotation::make_block_rotation;

/// Quadrature orders for the two sides of the duality identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualityOrders {
    /// Rule on `S^{n-k-1}` for `v`.
    pub v: usize,
    /// Rule on `S^{k+1}` for `w`.
    pub w: usize,
    /// Rule on the great k-spheres, and on `S^k` in bi-spherical coordinates.
    pub inner: usize,
    /// Gauss–Legendre nodes in the bi-spherical angle `ψ ∈ [0, π/2]`.
    pub psi: usize,
}

impl Default for DualityOrders {
    fn default() -> Self {
        Self { v: 16, w: 24, inner: 24, psi: 48 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_error: f64,
    /// `2σ_n / (σ_{k+1} σ_{n-k-1})`.
    pub constant: f64,
}

/// `∫∫ (F̃_k f)(v, w) d_*v d_*w` against
/// `2σ_n/(σ_{k+1}σ_{n-k-1}) ∫ f(θ) |θ'|^{-(n-k-1)} d_*θ`, the left side by
/// nested quadrature over the complex and the right side in bi-spherical
/// coordinates `θ = v cos ψ + ω sin ψ`.
pub fn duality_identity_check(f: &SphereField, n: usize, k: usize, orders: &DualityOrders) -> Result<DualityCheck> {
    if f.n() != n {
        return Err(Error::invalid(format!("field on S^{} but n = {n}", f.n())));
    }
    if !(k >= 1 && k < n) {
        return Err(Error::invalid(format!("need 1 <= k <= n - 1 (n={n}, k={k})")));
    }
    if n - k - 1 > 3 || k + 1 > 3 {
        return Err(Error::unsupported(format!("sphere rules up to S^3 only (n={n}, k={k})")));
    }
    if !f.is_weighted_integrable() {
        return Err(Error::Precondition(
            "∫|f| |θ'|^-(n-k-1) dθ diverges for this field; the identity does not apply".into(),
        ));
    }
    let sig = |d: usize| sphere_surface_area(d as i64);
    let constant = 2.0 * sig(n)? / (sig(k + 1)? * sig(n - k - 1)?);

    // Left side.
    let qv = make_sphere_quadrature(n - k - 1, orders.v, true)?;
    let qw = make_sphere_quadrature(k + 1, orders.w, true)?;
    let inner = subsphere_rule(k, orders.inner)?;
    let per_v: Vec<f64> = (0..qv.len())
        .into_par_iter()
        .map(|iv| {
            let v = qv.point(iv);
            let rot = make_block_rotation(v, n + 1)?;
            let terms = (0..qw.len())
                .map(|iw| {
                    let e = element_exact(v, rot.apply(&embed_slice(qw.point(iw), n)))?;
                    Ok(qw.weight(iw) * funk_forward_with(f, &e, &inner)?)
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(qv.weight(iv) * pairwise_sum(&terms))
        })
        .collect::<Result<_>>()?;
    let lhs = pairwise_sum(&per_v);

    // Right side: ∫ f |θ'|^-(n-k-1) dθ = ∫ sin^k ψ dψ dv dω f(v cos ψ + ω sin ψ).
    let qv_raw = qv.with_normalization(false);
    let qo = make_sphere_quadrature(k, orders.inner, false)?;
    let (gx, gw) = gauss_legendre_unit(orders.psi);
    let per_psi: Vec<f64> = (0..gx.len())
        .into_par_iter()
        .map(|j| {
            let psi = FRAC_PI_2 * 0.5 * (gx[j] + 1.0);
            let (s, c) = psi.sin_cos();
            let mut terms = Vec::with_capacity(qv_raw.len() * qo.len());
            let mut theta = vec![0.0; n + 1];
            for iv in 0..qv_raw.len() {
                for io in 0..qo.len() {
                    for (t, x) in theta.iter_mut().zip(qv_raw.point(iv)) {
                        *t = c * x;
                    }
                    for (t, x) in theta[n - k..].iter_mut().zip(qo.point(io)) {
                        *t = s * x;
                    }
                    terms.push(qv_raw.weight(iv) * qo.weight(io) * f.eval(&theta));
                }
            }
            FRAC_PI_2 * 0.5 * gw[j] * s.powi(k as i32) * pairwise_sum(&terms)
        })
        .collect();
    let weighted = pairwise_sum(&per_psi);
    let rhs = 2.0 / (sig(k + 1)? * sig(n - k - 1)?) * weighted;

    let rel_error = if rhs == 0.0 { (lhs - rhs).abs() } else { (lhs - rhs).abs() / rhs.abs() };
    Ok(DualityCheck { lhs, rhs, rel_error, constant })
}
