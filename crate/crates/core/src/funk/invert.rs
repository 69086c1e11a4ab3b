use serde::Serialize;

use super::field::SphereField;
use super::forward::{funk_forward_with, slice_with, subsphere_rule, SphericalComplexElement};
use crate::error::{Error, Result};
use crate::numkit::{harmonic_analyze, legendre_p_at_zero, make_sphere_quadrature, norm, SphereQuadrature};
use crate::rotation::make_block_rotation;

/// Relative odd-degree amplitude above which a slice is not a Funk image.
pub const ODD_CONTENT_TOL: f64 = 1e-8;

/// Inverts the Funk transform on `S^2` from samples `φ(ζ_i)` on `q`:
/// even coefficients are divided by `P_m(0)`, odd ones dropped.
pub fn funk_invert_slice(q: &SphereQuadrature, values: &[f64], max_degree: usize) -> Result<SphereField> {
    if q.dim() != 2 {
        return Err(Error::unsupported(format!(
            "slice inversion is implemented on S^2 only (got S^{}); S^(k+1) needs the multipliers C_m^(k/2)(0)/C_m^(k/2)(1)",
            q.dim()
        )));
    }
    let mut spec = harmonic_analyze(q, values, max_degree)?;
    let energy = spec.energy();
    let odd_fraction = if energy > 0.0 { (spec.odd_energy() / energy).sqrt() } else { 0.0 };
    if odd_fraction >= ODD_CONTENT_TOL {
        return Err(Error::NotAFunkImage { odd_fraction });
    }
    for (m, cm) in spec.coeffs.iter_mut().enumerate() {
        if m % 2 == 1 {
            cm.iter_mut().for_each(|c| *c = 0.0);
        } else {
            let mu = legendre_p_at_zero(m);
            cm.iter_mut().for_each(|c| *c /= mu);
        }
    }
    SphereField::from_spectrum(q.clone(), spec)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReconstructOptions {
    /// Band limit of the slice expansion.
    pub max_degree: usize,
    /// Order of the rule on `S^2` for the slice; `0` picks `2·max_degree + 2`.
    pub slice_order: usize,
    /// Points with `|θ'|` below this are treated as lying on `θ' = 0`.
    pub theta_min: f64,
    /// Recover `θ' = 0` from a cap average instead of failing.
    pub continuity: bool,
    pub cap_radius: f64,
}

impl Default for ReconstructOptions {
    fn default() -> Self {
        Self { max_degree: 8, slice_order: 0, theta_min: 1e-3, continuity: true, cap_radius: 1e-2 }
    }
}

/// Recovers `f(θ)` from its restricted Funk transform (`k = 1`): invert the
/// slice `φ_v(ζ) = φ(v, γ̃_v ζ)` with `v = θ'/|θ'|` and evaluate it at
/// `η = (|θ'|, θ'')`.
pub fn reconstruct_point<P>(phi: P, n: usize, k: usize, theta: &[f64], opts: &ReconstructOptions) -> Result<f64>
where
    P: Fn(&SphericalComplexElement) -> Result<f64> + Sync,
{
    if k != 1 {
        return Err(Error::unsupported(format!("pointwise reconstruction needs slices S^2, i.e. k = 1 (got k = {k})")));
    }
    if theta.len() != n + 1 || (norm(theta) - 1.0).abs() > 1e-10 {
        return Err(Error::invalid(format!("θ must be a unit vector in R^{}", n + 1)));
    }
    let order = if opts.slice_order == 0 { 2 * opts.max_degree + 2 } else { opts.slice_order };
    let slice = make_sphere_quadrature(2, order, true)?;
    let q = n - k;
    let r = norm(&theta[..q]);
    if r >= opts.theta_min {
        return reconstruct_regular(&phi, n, theta, &slice, opts.max_degree);
    }
    if !opts.continuity {
        return Err(Error::DegeneratePoint(format!(
            "|θ'| = {r:.3e} is below {:.1e} and the continuity extension is disabled",
            opts.theta_min
        )));
    }
    // Average over nearby points θ + ρ d_j (renormalized), d_j symmetric in R^{n-k}.
    let dirs = cap_directions(q);
    let mut acc = 0.0;
    for d in &dirs {
        let mut p = theta.to_vec();
        for (x, di) in p[..q].iter_mut().zip(d) {
            *x += opts.cap_radius * di;
        }
        let s = norm(&p);
        p.iter_mut().for_each(|x| *x /= s);
        acc += reconstruct_regular(&phi, n, &p, &slice, opts.max_degree)?;
    }
    Ok(acc / dirs.len() as f64)
}

// ±1 on a line, 8 equispaced on a circle, ±e_i otherwise.
fn cap_directions(q: usize) -> Vec<Vec<f64>> {
    match q {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..8)
            .map(|j| {
                let a = std::f64::consts::PI * j as f64 / 4.0;
                vec![a.cos(), a.sin()]
            })
            .collect(),
        _ => (0..2 * q)
            .map(|j| {
                let mut d = vec![0.0; q];
                d[j / 2] = if j % 2 == 0 { 1.0 } else { -1.0 };
                d
            })
            .collect(),
    }
}

fn reconstruct_regular<P>(phi: &P, n: usize, theta: &[f64], slice: &SphereQuadrature, max_degree: usize) -> Result<f64>
where
    P: Fn(&SphericalComplexElement) -> Result<f64> + Sync,
{
    let q = n - 1;
    let r = norm(&theta[..q]);
    let v: Vec<f64> = theta[..q].iter().map(|x| x / r).collect();
    let rot = make_block_rotation(&v, n + 1)?;
    let values = slice_with(phi, &v, &rot, n, slice)?;
    let fv = funk_invert_slice(slice, &values, max_degree)?;
    let mut eta = Vec::with_capacity(3);
    eta.push(r);
    eta.extend_from_slice(&theta[q..]);
    Ok(fv.eval(&eta))
}

/// [`reconstruct_point`] with `φ` computed from a known field, for checks.
pub fn reconstruct_from_field(f: &SphereField, theta: &[f64], order: usize, opts: &ReconstructOptions) -> Result<f64> {
    let n = f.n();
    let rule = subsphere_rule(1, order)?;
    reconstruct_point(|e| funk_forward_with(f, e, &rule), n, 1, theta, opts)
}
