use num_complex::Complex64;
use rayon::prelude::*;

use super::check_evenness;
use crate::error::{Error, Result};
use crate::euclid::slice::{assemble, check_targets, xpp_axes, CartesianPlan, PolarTable};
use crate::euclid::{BoxAxis, RestrictedSinogram, ScalarFieldRn, SliceInversionOptions};
use crate::numkit::dft_1d;

/// Evenness violation above which a sinogram is rejected.
pub const CONSTRUCT_EVENNESS_TOL: f64 = 1e-8;

/// Builds the preimage `f` of a sinogram in the Schwartz range:
/// `ψ(y', x'') = ∫ φ(y'/|y'|, s; x'') e^{is|y'|} ds`, then `ψ₁ = F₂ψ` (transform
/// in `x''`), and `f = F₁⁻¹ F₂⁻¹ ψ₁`. Sampled on `xp_axes × (x''-grid of φ)`.
pub fn range_construct_f(phi: &RestrictedSinogram, xp_axes: &[BoxAxis], opts: &SliceInversionOptions) -> Result<ScalarFieldRn> {
    let violation = check_evenness(phi)?;
    if violation >= CONSTRUCT_EVENNESS_TOL {
        return Err(Error::NotInRange(format!(
            "evenness violation {violation:.3e} exceeds {CONSTRUCT_EVENNESS_TOL:.0e}; ψ would depend on the orientation of θ"
        )));
    }
    check_targets(phi, xp_axes)?;
    let plan = CartesianPlan::new(phi, opts)?;
    let pp_axes = xpp_axes(phi)?;
    let grid = phi.grid();
    let nxpp = grid.xpp_len();
    let ny = plan.len();

    // ψ(y', x''_j), stored x''-major.
    let psi: Vec<Vec<Complex64>> = (0..nxpp)
        .into_par_iter()
        .map(|ixpp| Ok(plan.psi(&grid.theta, &PolarTable::build(phi, ixpp, plan.pad)?)))
        .collect::<Result<_>>()?;

    // Transpose to y'-major so every x''-line is contiguous.
    let mut lines = vec![Complex64::new(0.0, 0.0); ny * nxpp];
    for (ix, slice) in psi.iter().enumerate() {
        for (iy, v) in slice.iter().enumerate() {
            lines[iy * nxpp + ix] = *v;
        }
    }
    let pp_shape: Vec<usize> = pp_axes.iter().map(|a| a.count).collect();
    let lines: Vec<Vec<Complex64>> = lines
        .par_chunks(nxpp.max(1))
        .map(|line| {
            let psi1 = transform_xpp(line, &pp_axes, &pp_shape, 1)?;
            transform_xpp(&psi1, &pp_axes, &pp_shape, -1)
        })
        .collect::<Result<_>>()?;

    let slices: Vec<Vec<f64>> = (0..nxpp)
        .into_par_iter()
        .map(|ix| {
            let column: Vec<Complex64> = lines.iter().map(|l| l[ix]).collect();
            plan.inverse(&column, xp_axes)
        })
        .collect();
    assemble(phi, xp_axes, pp_axes, &slices)
}

/// Forward (`sign = +1`) or inverse (`-1`) Fourier transform over the
/// uniform `x''` grid, axis by axis, on the dual lattice
/// `y''_m = 2πm/(N h)`, `m = -⌊N/2⌋ .. N-1-⌊N/2⌋`. The pair is exact:
/// the inverse undoes the forward on the grid.
fn transform_xpp(data: &[Complex64], axes: &[BoxAxis], shape: &[usize], sign: i32) -> Result<Vec<Complex64>> {
    let mut out = data.to_vec();
    let dims = axes.len();
    for d in 0..dims {
        let n = shape[d];
        if n < 2 {
            continue;
        }
        let inner: usize = shape[d + 1..].iter().product();
        let outer: usize = shape[..d].iter().product();
        let h = axes[d].spacing();
        let x0 = axes[d].lo;
        let shift = (n / 2) as i64;
        for o in 0..outer {
            for i in 0..inner {
                let idx = |j: usize| (o * n + j) * inner + i;
                let line: Vec<Complex64> = (0..n).map(|j| out[idx(j)]).collect();
                let result: Vec<Complex64> = if sign > 0 {
                    // ψ₁(y_m) = h Σ_j ψ(x_j) e^{i x_j y_m}, stored by ascending m.
                    let spec = dft_1d(&line, 1)?;
                    (0..n)
                        .map(|r| {
                            let m = r as i64 - shift;
                            let y = 2.0 * std::f64::consts::PI * m as f64 / (n as f64 * h);
                            spec[m.rem_euclid(n as i64) as usize] * Complex64::from_polar(h, x0 * y)
                        })
                        .collect()
                } else {
                    // ψ(x_j) = (1/2π) Σ_m Δy ψ₁(y_m) e^{-i x_j y_m}, Δy = 2π/(N h).
                    let mut unrolled = vec![Complex64::new(0.0, 0.0); n];
                    for (r, v) in line.iter().enumerate() {
                        let m = r as i64 - shift;
                        let y = 2.0 * std::f64::consts::PI * m as f64 / (n as f64 * h);
                        unrolled[m.rem_euclid(n as i64) as usize] = v * Complex64::from_polar(1.0 / (n as f64 * h), -x0 * y);
                    }
                    dft_1d(&unrolled, -1)?
                };
                for (j, v) in result.into_iter().enumerate() {
                    out[idx(j)] = v;
                }
            }
        }
    }
    Ok(out)
}
