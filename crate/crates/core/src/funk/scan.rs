use serde::Serialize;

use super::field::SphereField;
use super::forward::SphericalComplexElement;
use crate::error::{Error, Result};
use crate::euclid::ScanReport;
use crate::numkit::{complement_basis, dot, gauss_legendre_unit, pairwise_sum_by};

const PANEL_NODES: usize = 32;

// ∫_a^b g by Gauss–Legendre panels no longer than `width`.
fn panels<G: Fn(f64) -> f64>(g: &G, a: f64, b: f64, width: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let (x, w) = gauss_legendre_unit(PANEL_NODES);
    let count = ((b - a) / width).ceil().max(1.0) as usize;
    let h = (b - a) / count as f64;
    pairwise_sum_by(count, |p| {
        let mid = a + (p as f64 + 0.5) * h;
        0.5 * h * pairwise_sum_by(PANEL_NODES, |i| w[i] * g(mid + 0.5 * h * x[i]))
    })
}

/// Cumulative integrals `∫_0^{T_j} g(t) dt` for increasing `T_j`, with
/// panels growing geometrically so very long ranges stay cheap.
fn cumulative<G: Fn(f64) -> f64>(g: G, start: f64, ends: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(ends.len());
    let (mut acc, mut lo) = (0.0, start);
    for &hi in ends {
        let mut a = lo;
        while a < hi {
            let b = hi.min((2.0 * a).max(a + 1.0));
            acc += panels(&g, a, b, 1.0f64.max(0.25 * a));
            a = b;
        }
        lo = hi.max(lo);
        out.push(acc);
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct FtildeScanReport {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    /// `‖f̃‖_p^p / (σ_k σ_{n-k-1})` truncated to `|θ'| >= ε_j`, indexed by
    /// `T_j = -log ε_j`.
    pub norm: ScanReport,
    /// `∫_{ε_j}^{1/2} dt / (t (1 - log(t h)))`, the lower bound on the Funk
    /// integral of `f̃`, indexed by `ε_j`.
    pub funk: ScanReport,
    pub h: f64,
}

/// Both halves of the sharpness argument for the restricted Funk transform.
/// `log_cutoffs` are `T_j = -log ε_j` for the norm integral; `cutoffs` are
/// `ε_j` for the Funk lower bound.
pub fn counterexample_scan_ftilde(n: usize, k: usize, p: f64, log_cutoffs: &[f64], cutoffs: &[f64], h: f64) -> Result<FtildeScanReport> {
    if !(1 <= k && k + 1 < n) {
        return Err(Error::invalid(format!("need 1 <= k < n - 1 (n={n}, k={k})")));
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::invalid(format!("p must be >= 1, got {p}")));
    }
    if !(h > 0.0 && h <= 1.0) {
        return Err(Error::invalid(format!("h must lie in (0, 1], got {h}")));
    }
    if log_cutoffs.iter().any(|t| !(*t > 0.0 && t.is_finite())) || log_cutoffs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("log cutoffs must be positive and increasing"));
    }
    if cutoffs.iter().any(|e| !(*e > 0.0 && *e < 0.5)) || cutoffs.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid("cutoffs must decrease inside (0, 1/2)"));
    }
    // s = e^{-t}: (1+t)^{-p} (1 - e^{-2t})^{(k-1)/2} e^{-t(n-k-p)}.
    let a = (n - k) as f64 - p;
    let half = 0.5 * (k as f64 - 1.0);
    let norm_values = cumulative(
        |t| (1.0 + t).powf(-p) * (-(-2.0 * t).exp_m1()).powf(half) * (-a * t).exp(),
        0.0,
        log_cutoffs,
    );
    // t = e^{-u}: du / (1 + u - log h), from u = log 2 to -log ε.
    let ends: Vec<f64> = cutoffs.iter().map(|e| -e.ln()).collect();
    let lh = h.ln();
    let funk_values = cumulative(|u| 1.0 / (1.0 + u - lh), std::f64::consts::LN_2, &ends);
    Ok(FtildeScanReport {
        n,
        k,
        p,
        norm: ScanReport::from_values(log_cutoffs.to_vec(), norm_values),
        funk: ScanReport::from_values(cutoffs.to_vec(), funk_values),
        h,
    })
}

/// Funk integral over one great circle (`k = 1`) with the arcs where
/// `|θ'| < ε_j` removed, for a decreasing cutoff schedule. Bounded fields
/// converge; `f̃` does not.
pub fn funk_truncation_scan(f: &SphereField, e: &SphericalComplexElement, cutoffs: &[f64]) -> Result<ScanReport> {
    if e.k() != 1 {
        return Err(Error::unsupported("truncation scans are implemented for great circles (k = 1)"));
    }
    if cutoffs.iter().any(|c| !(*c > 0.0 && *c < 1.0)) || cutoffs.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid("cutoffs must decrease inside (0, 1)"));
    }
    let v = e.v();
    let q = v.len();
    let n = e.n();
    let mut wl = vec![dot(&e.w()[..q], v)];
    wl.extend_from_slice(&e.w()[q..]);
    let basis = complement_basis(&wl);
    // On the circle ξ(α) = cos α b0 + sin α b1, |θ'| = |ξ_0| = r |cos(α - α0)|.
    let r = basis[0][0].hypot(basis[1][0]);
    if r == 0.0 {
        return Err(Error::DegeneratePoint("the whole circle lies in θ' = 0".into()));
    }
    let alpha0 = basis[1][0].atan2(basis[0][0]);
    let point = |alpha: f64| {
        let (s, c) = alpha.sin_cos();
        let mut theta = vec![0.0; n + 1];
        for (t, vi) in theta.iter_mut().zip(v) {
            *t = (c * basis[0][0] + s * basis[1][0]) * vi;
        }
        for j in 0..2 {
            theta[q + j] = c * basis[0][j + 1] + s * basis[1][j + 1];
        }
        theta
    };
    // Zeros of |θ'| sit at α0 ± π/2. Measure the distance δ from each zero
    // in log coordinates and integrate δ ∈ [δ_ε, π/2] on both sides of it;
    // the four arcs tile the circle.
    let zeros = [alpha0 + std::f64::consts::FRAC_PI_2, alpha0 - std::f64::consts::FRAC_PI_2];
    let g = |lnd: f64| -> f64 {
        let d = lnd.exp();
        zeros
            .iter()
            .map(|z| f.eval(&point(z + d)) + f.eval(&point(z - d)))
            .sum::<f64>()
            * d
    };
    let top = std::f64::consts::FRAC_PI_2.ln();
    let mut values = Vec::with_capacity(cutoffs.len());
    for &eps in cutoffs {
        let ratio = eps / r;
        if ratio >= 1.0 {
            values.push(0.0);
            continue;
        }
        let lo = ratio.asin().ln();
        values.push(panels(&g, lo, top, 0.5) / (2.0 * std::f64::consts::PI));
    }
    Ok(ScanReport::from_values(cutoffs.to_vec(), values))
}
