use rayon::prelude::*;

use super::field::ScalarFieldRn;
use super::sinogram::{PlaneParam, RestrictedSinogram, SinogramGrid};
use crate::error::{Error, Result};
use crate::numkit::{complement_basis, gauss_legendre_unit, make_sphere_quadrature, pairwise_sum, pairwise_sum_by};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForwardOptions {
    /// Gauss–Legendre nodes per axis of the plane box.
    pub order: usize,
}

impl Default for ForwardOptions {
    fn default() -> Self {
        Self { order: 64 }
    }
}

fn point_on_plane(plane: &PlaneParam, basis: &[Vec<f64>], u: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; plane.theta.len() + plane.xpp.len()];
    write_point(plane, basis, u, &mut x);
    x
}

fn write_point(plane: &PlaneParam, basis: &[Vec<f64>], u: &[f64], x: &mut [f64]) {
    let kp = plane.theta.len();
    for (xi, t) in x.iter_mut().zip(&plane.theta) {
        *xi = plane.s * t;
    }
    for (b, ui) in basis.iter().zip(u) {
        for (xi, bi) in x.iter_mut().zip(b) {
            *xi += ui * bi;
        }
    }
    x[kp..].copy_from_slice(&plane.xpp);
}

/// `∫_{θ⊥} f(sθ + u, x'') du` for one plane.
pub fn plane_integral(f: &ScalarFieldRn, plane: &PlaneParam, opts: &ForwardOptions) -> Result<f64> {
    plane_integral_with(f, plane, &gauss_legendre_unit(opts.order))
}

fn plane_integral_with(f: &ScalarFieldRn, plane: &PlaneParam, rule: &(Vec<f64>, Vec<f64>)) -> Result<f64> {
    let plane = plane.canonical();
    match f.support_radius_xp() {
        Some(radius) => Ok(box_integral(f, &plane, radius, rule)),
        None => cauchy_integral(f, &plane),
    }
}

fn box_integral(f: &ScalarFieldRn, plane: &PlaneParam, radius: f64, (x, w): &(Vec<f64>, Vec<f64>)) -> f64 {
    if plane.s.abs() >= radius {
        return 0.0;
    }
    let half = (radius * radius - plane.s * plane.s).sqrt();
    let basis = complement_basis(&plane.theta);
    let k = basis.len();
    let order = x.len();
    let total = order.pow(k as u32);
    let mut u = vec![0.0; k];
    let mut point = vec![0.0; plane.theta.len() + plane.xpp.len()];
    let terms: Vec<f64> = (0..total)
        .map(|flat| {
            let mut rem = flat;
            let mut weight = 1.0;
            for ui in u.iter_mut().rev() {
                let j = rem % order;
                rem /= order;
                *ui = half * x[j];
                weight *= half * w[j];
            }
            write_point(plane, &basis, &u, &mut point);
            weight * f.eval(&point)
        })
        .collect();
    pairwise_sum(&terms)
}

// Doubling radii 2^j; accepted when two successive increments are below
// 1e-10 of the running value.
fn cauchy_integral(f: &ScalarFieldRn, plane: &PlaneParam) -> Result<f64> {
    let schedule: Vec<f64> = (0..=64).map(|j| 2f64.powi(j)).collect();
    let values = truncated_integrals(f, plane, &schedule)?;
    let mut quiet = 0;
    for j in 1..values.len() {
        let inc = (values[j] - values[j - 1]).abs();
        if inc <= 1e-10 * values[j].abs() {
            quiet += 1;
            if quiet == 2 {
                return Ok(values[j]);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::Divergence {
        message: format!(
            "plane integral at theta={:?}, s={}, x''={:?} fails the Cauchy test up to radius 2^64",
            plane.theta, plane.s, plane.xpp
        ),
        partial: values,
    })
}

const PANEL_NODES: usize = 32;

/// `T(Λ) = ∫_{|u| <= Λ, u ⊥ θ} f(sθ + u, x'') du` for each radius of an
/// increasing schedule, by dyadic Gauss–Legendre panels in `|u|`.
pub fn truncated_integrals(f: &ScalarFieldRn, plane: &PlaneParam, schedule: &[f64]) -> Result<Vec<f64>> {
    if schedule.iter().any(|l| !(*l > 0.0 && l.is_finite())) || schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("radius schedule must be positive and strictly increasing"));
    }
    let plane = plane.canonical();
    let basis = complement_basis(&plane.theta);
    let k = basis.len();
    // Unit directions in θ⊥ with weights summing to σ_{k-1}.
    let dirs: Vec<(Vec<f64>, f64)> = if k == 1 {
        vec![(vec![1.0], 1.0), (vec![-1.0], 1.0)]
    } else {
        let q = make_sphere_quadrature(k - 1, 16, false)?;
        (0..q.len()).map(|i| (q.point(i).to_vec(), q.weight(i))).collect()
    };
    let shell = |rho: f64| -> f64 {
        let vals = dirs
            .iter()
            .map(|(omega, w)| {
                let u: Vec<f64> = omega.iter().map(|o| rho * o).collect();
                w * f.eval(&point_on_plane(&plane, &basis, &u))
            })
            .collect::<Vec<_>>();
        pairwise_sum(&vals) * rho.powi(k as i32 - 1)
    };
    let (gx, gw) = gauss_legendre_unit(PANEL_NODES);
    let panel = |a: f64, b: f64| -> f64 {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        half * pairwise_sum_by(PANEL_NODES, |i| gw[i] * shell(mid + half * gx[i]))
    };
    let mut out = Vec::with_capacity(schedule.len());
    let mut acc = 0.0;
    let mut lo = 0.0;
    for &hi in schedule {
        let mut a = lo;
        while a < hi {
            let b = if a < 1.0 { hi.min(1.0) } else { hi.min(2.0 * a) };
            acc += panel(a, b);
            a = b;
        }
        lo = hi;
        out.push(acc);
    }
    Ok(out)
}

/// Evaluates the restricted k-plane transform on every grid plane.
pub fn forward_restricted(f: &ScalarFieldRn, grid: &SinogramGrid, opts: &ForwardOptions) -> Result<RestrictedSinogram> {
    if grid.n() != f.n() || grid.k() != f.k() {
        return Err(Error::invalid(format!(
            "grid is for (n={}, k={}) but the field is (n={}, k={})",
            grid.n(),
            grid.k(),
            f.n(),
            f.k()
        )));
    }
    if opts.order < 2 {
        return Err(Error::invalid("plane quadrature order must be >= 2"));
    }
    let rule = gauss_legendre_unit(opts.order);
    let values = (0..grid.len())
        .into_par_iter()
        .map(|i| plane_integral_with(f, &grid.plane(i), &rule))
        .collect::<Result<Vec<f64>>>()?;
    RestrictedSinogram::new(grid.clone(), values)
}
