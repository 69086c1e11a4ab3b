use rayon::prelude::*;
use serde::Serialize;

use super::field::HField;
use super::forward::hradon_hyperplane;
use super::lorentz::{HPoint, OneSheetPoint};
use super::quadrature::{hpolar_quadrature, HOrders, HkRule, RadialRule};
use crate::error::{Error, Result};
use crate::numkit::{make_sphere_quadrature, norm, pairwise_sum_by, EPS_TAIL};
use crate::rotation::{make_block_rotation, BlockRotation};

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        (a - b).abs()
    } else {
        (a - b).abs() / b.abs()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HDualityCheck {
    /// `(σ, lhs(σ))` for each direction tested.
    pub lhs: Vec<(Vec<f64>, f64)>,
    pub rhs: f64,
    /// Worst relative error over the directions.
    pub rel_error: f64,
    /// Largest relative spread of `lhs` across directions.
    pub sigma_spread: f64,
}

/// `∫ (Hf)(σ cosh ρ + e_{n+1} sinh ρ) dρ / cosh ρ` for each `σ`, against
/// `∫ f(x) dx / x_{n+1}` in hyperbolic polar coordinates.
pub fn duality_identity_h(f: &HField, sigmas: &[Vec<f64>], rho_max: f64, orders: &HOrders) -> Result<HDualityCheck> {
    let n = f.n();
    if f.power_rate() + 1.0 <= (n - 1) as f64 {
        return Err(Error::Precondition(format!(
            "∫|f| dx/x_(n+1) diverges: |f| decays like x_(n+1)^-{} on H^{n}",
            f.power_rate()
        )));
    }
    if sigmas.is_empty() || sigmas.iter().any(|s| s.len() != n || (norm(s) - 1.0).abs() > 1e-12) {
        return Err(Error::invalid(format!("need at least one unit σ in R^{n}")));
    }
    if !(rho_max > 0.0 && rho_max.is_finite()) {
        return Err(Error::invalid("rho_max must be positive"));
    }
    let rule = RadialRule::new(0.0, rho_max, orders.panel_nodes);
    let mut lhs = Vec::with_capacity(sigmas.len());
    for sigma in sigmas {
        let terms: Vec<(f64, bool)> = (0..rule.nodes.len())
            .into_par_iter()
            .map(|i| {
                let rho = rule.nodes[i];
                let a = hradon_hyperplane(f, &OneSheetPoint::from_params(sigma, rho)?, orders)?;
                let b = hradon_hyperplane(f, &OneSheetPoint::from_params(sigma, -rho)?, orders)?;
                Ok((rule.weights[i] * (a + b) / rho.cosh(), rule.edge[i]))
            })
            .collect::<Result<_>>()?;
        let value = pairwise_sum_by(terms.len(), |i| terms[i].0);
        let tail = pairwise_sum_by(terms.len(), |i| if terms[i].1 { terms[i].0 } else { 0.0 });
        if tail != 0.0 && tail.abs() > EPS_TAIL * value.abs() {
            return Err(Error::Truncation(format!("ρ-integral tail {tail:.3e} of {value:.3e}; increase rho_max")));
        }
        lhs.push((sigma.clone(), value));
    }
    let rhs = hpolar_quadrature(n, 0, orders)?
        .integrate(|x| f.eval(x) / x[n])
        .checked("∫ f dx / x_(n+1)")?;
    let rel_error = lhs.iter().map(|(_, l)| rel(*l, rhs)).fold(0.0, f64::max);
    let l0 = lhs[0].1;
    let sigma_spread = lhs.iter().map(|(_, l)| rel(*l, l0)).fold(0.0, f64::max);
    Ok(HDualityCheck { lhs, rhs, rel_error, sigma_spread })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HIdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_error: f64,
}

/// `∫_{S^{n-k-1}} dv ∫_{H^{k+1}} f(γ̃_v η) dη` (polar coordinates on each
/// `H^{k+1}`) against `2 ∫_{H^n} f(x) |x'|^{-(n-k-1)} dx` (the
/// `v sinh r + u cosh r` decomposition).
pub fn slice_identity_check(f: &HField, n: usize, k: usize, orders: &HOrders) -> Result<HIdentityCheck> {
    if f.n() != n {
        return Err(Error::invalid(format!("field on H^{} but n = {n}", f.n())));
    }
    if !(k >= 1 && k < n) {
        return Err(Error::invalid(format!("need 1 <= k <= n - 1 (n={n}, k={k})")));
    }
    if f.power_rate() <= (n - 1) as f64 {
        return Err(Error::Precondition(format!(
            "∫|f| |x'|^-(n-k-1) dx diverges for decay x_(n+1)^-{} on H^{n}",
            f.power_rate()
        )));
    }
    let q = n - k;
    let qv = make_sphere_quadrature(q - 1, orders.sphere, false)?;
    let slice = HkRule::new(k + 1, orders)?;
    let mut lhs_terms = Vec::with_capacity(qv.len());
    for iv in 0..qv.len() {
        let rot: BlockRotation = make_block_rotation(qv.point(iv), n + 1)?;
        let inner = slice.integrate(|eta| {
            let mut x = vec![0.0; n + 1];
            x[q - 1..].copy_from_slice(eta);
            f.eval(&rot.apply(&x))
        });
        lhs_terms.push(qv.weight(iv) * inner.checked("slice integral over H^(k+1)")?);
    }
    let lhs = pairwise_sum_by(lhs_terms.len(), |i| lhs_terms[i]);
    let rhs = 2.0
        * hpolar_quadrature(n, k, orders)?
            .integrate(|x| f.eval(x) / norm(&x[..q]).powi(q as i32 - 1))
            .checked("weighted integral over H^n")?;
    Ok(HIdentityCheck { lhs, rhs, rel_error: rel(lhs, rhs) })
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasureCheck {
    /// `(k, ∫ f dx)` through the `v sinh r + u cosh r` decomposition with
    /// `u ∈ H^k`; `k = 0` is plain polar coordinates, `k = n - 1` the
    /// `e_1 sinh r + u cosh r` form.
    pub values: Vec<(usize, f64)>,
    pub max_pairwise_rel: f64,
}

/// `∫_{H^n} f dx` through every decomposition `k = 0 .. n-1`.
pub fn measure_decompositions(f: &HField, orders: &HOrders) -> Result<MeasureCheck> {
    let n = f.n();
    if f.power_rate() <= (n - 1) as f64 {
        return Err(Error::Precondition("f is not integrable on H^n".into()));
    }
    let values = (0..n)
        .map(|k| Ok((k, hpolar_quadrature(n, k, orders)?.integrate_field(f).checked("∫ f dx")?)))
        .collect::<Result<Vec<_>>>()?;
    let mut worst = 0.0f64;
    for (_, a) in &values {
        for (_, b) in &values {
            worst = worst.max(rel(*a, *b));
        }
    }
    Ok(MeasureCheck { values, max_pairwise_rel: worst })
}

#[derive(Debug, Clone)]
pub struct HSliceCoordinates {
    pub v: Vec<f64>,
    /// `(0, ..., 0, |x'|, x'')`, a point of `H^{k+1} ⊂ R^{k+2}` written in `R^{n+1}`.
    pub eta: Vec<f64>,
    pub rotation: BlockRotation,
}

/// `v = x'/|x'|`, `η = (0, ..., 0, |x'|, x'')` and `γ̃_v` with `γ̃_v η = x`,
/// the data a slice inverter needs to evaluate `f(x) = (H⁻¹ φ_v)(η)`.
pub fn reconstruct_coordinates(x: &HPoint, k: usize) -> Result<HSliceCoordinates> {
    let n = x.n();
    if !(k >= 1 && k < n) {
        return Err(Error::invalid(format!("need 1 <= k <= n - 1 (n={n}, k={k})")));
    }
    let q = n - k;
    let c = x.coords();
    let r = norm(&c[..q]);
    if r == 0.0 {
        return Err(Error::DegeneratePoint("x' = 0: the point lies on every slice and no prescription is given".into()));
    }
    let v: Vec<f64> = c[..q].iter().map(|t| t / r).collect();
    let mut eta = vec![0.0; n + 1];
    eta[q - 1] = r;
    eta[q..].copy_from_slice(&c[q..]);
    let rotation = make_block_rotation(&v, n + 1)?;
    let back = rotation.apply(&eta);
    let err = back.iter().zip(c).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if err > 1e-10 * c[n] {
        return Err(Error::invalid(format!("γ̃_v η misses x by {err:.3e}")));
    }
    Ok(HSliceCoordinates { v, eta, rotation })
}
