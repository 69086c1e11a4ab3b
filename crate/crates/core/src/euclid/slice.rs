use num_complex::Complex64;
use rayon::prelude::*;

use super::field::{BoxAxis, SampledBox, ScalarFieldRn};
use super::sinogram::RestrictedSinogram;
use crate::error::{Error, Result};
use crate::numkit::{continuous_ft_lattice, GridKind, LatticeSpectrum, SphereLayout, SphereQuadrature};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceInversionOptions {
    /// Zero-padded FFT length for the transform in `s`.
    pub pad: usize,
    /// Cartesian frequency samples per axis.
    pub cart_points: usize,
    /// Half-width `Y` of the Cartesian frequency box; capped at the Nyquist
    /// frequency of the s-grid.
    pub cart_extent: f64,
}

impl Default for SliceInversionOptions {
    fn default() -> Self {
        Self { pad: 4096, cart_points: 128, cart_extent: 12.5 }
    }
}

/// Largest arc between neighbouring directions times `Y` allowed before the
/// angular interpolation is considered under-resolved.
const MAX_ARC: f64 = 2.0;

/// Transform in `s` of every direction profile at one `x''`:
/// `φ̂(θ_i, η) = ∫ φ(θ_i, s; x'') e^{isη} ds` on a frequency lattice.
pub(crate) struct PolarTable {
    lattices: Vec<LatticeSpectrum>,
}

impl PolarTable {
    pub(crate) fn build(phi: &RestrictedSinogram, ixpp: usize, pad: usize) -> Result<Self> {
        let grid = phi.grid();
        let lattices = (0..grid.theta.len())
            .map(|it| continuous_ft_lattice(&grid.s, &phi.s_profile(it, ixpp), pad))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { lattices })
    }
}

/// Directions and interpolation weights bracketing a unit vector.
fn direction_weights(q: &SphereQuadrature, dir: &[f64]) -> Vec<(usize, f64)> {
    use std::f64::consts::PI;
    match q.layout() {
        SphereLayout::Circle { count } => {
            let a = dir[1].atan2(dir[0]).rem_euclid(2.0 * PI) / (2.0 * PI) * *count as f64;
            let i0 = (a.floor() as usize).min(count - 1);
            let frac = a - i0 as f64;
            vec![(i0, 1.0 - frac), ((i0 + 1) % count, frac)]
        }
        SphereLayout::Rings { z, azimuths } => {
            let m = *azimuths;
            let a = dir[1].atan2(dir[0]).rem_euclid(2.0 * PI) / (2.0 * PI) * m as f64;
            let j0 = (a.floor() as usize).min(m - 1);
            let fa = a - j0 as f64;
            let zc = dir[2];
            let rings: Vec<(usize, f64)> = if zc <= z[0] {
                vec![(0, 1.0)]
            } else if zc >= z[z.len() - 1] {
                vec![(z.len() - 1, 1.0)]
            } else {
                let r = z.partition_point(|&v| v <= zc) - 1;
                let fz = (zc - z[r]) / (z[r + 1] - z[r]);
                vec![(r, 1.0 - fz), (r + 1, fz)]
            };
            rings
                .into_iter()
                .flat_map(|(r, wz)| [(r * m + j0, wz * (1.0 - fa)), (r * m + (j0 + 1) % m, wz * fa)])
                .collect()
        }
        _ => Vec::new(),
    }
}

fn max_direction_gap(q: &SphereQuadrature) -> f64 {
    use std::f64::consts::PI;
    match q.layout() {
        SphereLayout::Circle { count } => 2.0 * PI / *count as f64,
        SphereLayout::Rings { z, azimuths } => {
            let polar: Vec<f64> = z.iter().map(|v| v.acos()).collect();
            let ring_gap = polar.windows(2).map(|w| (w[0] - w[1]).abs()).fold(polar[polar.len() - 1], f64::max);
            ring_gap.max(2.0 * PI / *azimuths as f64)
        }
        _ => f64::INFINITY,
    }
}

/// Cartesian frequency axis `y_j = -Y + j Δy`, `Δy = 2Y/M`.
#[derive(Debug, Clone)]
pub(crate) struct FreqAxis {
    pub nodes: Vec<f64>,
    pub step: f64,
}

impl FreqAxis {
    fn new(extent: f64, points: usize) -> Self {
        let step = 2.0 * extent / points as f64;
        let half = (points / 2) as i64;
        let nodes = (0..points as i64).map(|j| (j - half) as f64 * step).collect();
        Self { nodes, step }
    }
}

/// Setup shared by both inversion paths.
pub(crate) struct CartesianPlan {
    pub axis: FreqAxis,
    pub dims: usize,
    pub pad: usize,
}

impl CartesianPlan {
    pub(crate) fn new(phi: &RestrictedSinogram, opts: &SliceInversionOptions) -> Result<Self> {
        let grid = phi.grid();
        let k = grid.k();
        if k > 2 {
            return Err(Error::unsupported(format!("Fourier-slice inversion supports k <= 2, got k = {k}")));
        }
        if !matches!(grid.s.kind(), GridKind::UniformTrapezoid | GridKind::UniformPeriodic) {
            return Err(Error::invalid("Fourier-slice inversion needs a uniform s-grid"));
        }
        if opts.cart_points < 8 || !opts.cart_points.is_multiple_of(2) || !(opts.cart_extent > 0.0) {
            return Err(Error::invalid("cartesian frequency grid needs an even point count >= 8 and positive extent"));
        }
        let h = grid.s.spacing().unwrap_or(1.0);
        let nyquist = std::f64::consts::PI / h;
        let extent = opts.cart_extent.min(nyquist);
        let arc = extent * max_direction_gap(&grid.theta);
        if arc > MAX_ARC {
            return Err(Error::Resolution(format!(
                "direction grid too coarse: arc {arc:.3} between neighbouring directions at frequency {extent:.3} (limit {MAX_ARC})"
            )));
        }
        let pad = opts.pad.max(grid.s.len().next_power_of_two());
        Ok(Self { axis: FreqAxis::new(extent, opts.cart_points), dims: k + 1, pad })
    }

    pub(crate) fn len(&self) -> usize {
        self.axis.nodes.len().pow(self.dims as u32)
    }

    /// `ψ(y') = φ̂(y'/|y'|, |y'|)` on the Cartesian grid, row-major.
    pub(crate) fn psi(&self, q: &SphereQuadrature, table: &PolarTable) -> Vec<Complex64> {
        let m = self.axis.nodes.len();
        let mut y = vec![0.0; self.dims];
        (0..self.len())
            .map(|flat| {
                let mut rem = flat;
                for yi in y.iter_mut().rev() {
                    *yi = self.axis.nodes[rem % m];
                    rem /= m;
                }
                let eta = y.iter().map(|v| v * v).sum::<f64>().sqrt();
                if eta == 0.0 {
                    // Zero frequency: the s-integral is direction-independent.
                    return (0..q.len())
                        .map(|i| table.lattices[i].at(0).unwrap_or_default() * q.weight(i))
                        .sum::<Complex64>()
                        / q.total_weight();
                }
                let dir: Vec<f64> = y.iter().map(|v| v / eta).collect();
                direction_weights(q, &dir)
                    .into_iter()
                    .map(|(i, w)| table.lattices[i].interpolate(eta) * w)
                    .sum()
            })
            .collect()
    }

    /// `(2π)^{-(k+1)} Σ_y ψ(y) e^{-i x'·y} Δy^{k+1}` on the target axes.
    pub(crate) fn inverse(&self, psi: &[Complex64], targets: &[BoxAxis]) -> Vec<f64> {
        let m = self.axis.nodes.len();
        let mut shape = vec![m; self.dims];
        let mut data = psi.to_vec();
        let scale = self.axis.step / (2.0 * std::f64::consts::PI);
        for (axis, target) in targets.iter().enumerate() {
            let xs = target.nodes();
            let kernel: Vec<Complex64> = xs
                .iter()
                .flat_map(|&x| self.axis.nodes.iter().map(move |&y| Complex64::from_polar(scale, -x * y)))
                .collect();
            data = contract_axis(&data, &shape, axis, &kernel, xs.len());
            shape[axis] = xs.len();
        }
        data.into_iter().map(|z| z.re).collect()
    }
}

/// `out[.., x, ..] = Σ_y kernel[x][y] data[.., y, ..]` along `axis`.
pub(crate) fn contract_axis(data: &[Complex64], shape: &[usize], axis: usize, kernel: &[Complex64], nout: usize) -> Vec<Complex64> {
    let len = shape[axis];
    let inner: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let mut out = vec![Complex64::new(0.0, 0.0); outer * nout * inner];
    for o in 0..outer {
        for x in 0..nout {
            let row = &kernel[x * len..(x + 1) * len];
            let dst = &mut out[(o * nout + x) * inner..(o * nout + x + 1) * inner];
            for (y, kv) in row.iter().enumerate() {
                let src = &data[(o * len + y) * inner..(o * len + y + 1) * inner];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += kv * s;
                }
            }
        }
    }
    out
}

pub(crate) fn xpp_axes(phi: &RestrictedSinogram) -> Result<Vec<BoxAxis>> {
    phi.grid()
        .xpp
        .iter()
        .map(|g| {
            if g.kind() != GridKind::UniformTrapezoid {
                return Err(Error::invalid("x'' grids must be uniform with endpoints for reconstruction"));
            }
            let (lo, hi) = g.bounds();
            BoxAxis::new(lo, hi, g.len())
        })
        .collect()
}

pub(crate) fn check_targets(phi: &RestrictedSinogram, xp_axes: &[BoxAxis]) -> Result<()> {
    if xp_axes.len() != phi.k() + 1 {
        return Err(Error::invalid(format!("expected {} target axes for x', got {}", phi.k() + 1, xp_axes.len())));
    }
    Ok(())
}

/// Reconstructs `f` from its restricted transform slice by slice: transform
/// in `s`, polar-to-Cartesian resampling of `ψ(y') = φ̂(y'/|y'|, |y'|)`, and
/// an inverse Fourier transform in `x'`. The result is sampled on
/// `xp_axes × (x''-grid of φ)`.
pub fn invert_fourier_slice(phi: &RestrictedSinogram, xp_axes: &[BoxAxis], opts: &SliceInversionOptions) -> Result<ScalarFieldRn> {
    check_targets(phi, xp_axes)?;
    let plan = CartesianPlan::new(phi, opts)?;
    let pp_axes = xpp_axes(phi)?;
    let grid = phi.grid();
    let slices: Vec<Vec<f64>> = (0..grid.xpp_len())
        .into_par_iter()
        .map(|ixpp| {
            let table = PolarTable::build(phi, ixpp, plan.pad)?;
            let psi = plan.psi(&grid.theta, &table);
            Ok(plan.inverse(&psi, xp_axes))
        })
        .collect::<Result<_>>()?;
    assemble(phi, xp_axes, pp_axes, &slices)
}

/// Interleaves per-`x''` reconstructions into one `x'`-major box.
pub(crate) fn assemble(phi: &RestrictedSinogram, xp_axes: &[BoxAxis], pp_axes: Vec<BoxAxis>, slices: &[Vec<f64>]) -> Result<ScalarFieldRn> {
    let nxp: usize = xp_axes.iter().map(|a| a.count).product();
    let nxpp = slices.len();
    let mut values = vec![0.0; nxp * nxpp];
    for (ixpp, slice) in slices.iter().enumerate() {
        for (ixp, v) in slice.iter().enumerate() {
            values[ixp * nxpp + ixpp] = *v;
        }
    }
    let mut axes = xp_axes.to_vec();
    axes.extend(pp_axes);
    ScalarFieldRn::sampled(phi.n(), phi.k(), SampledBox::new(axes, values)?)
}
