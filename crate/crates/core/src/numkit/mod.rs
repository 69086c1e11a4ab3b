//! Shared numerical substrate: one-dimensional grids, Gauss–Legendre and
//! product sphere quadratures, discrete and continuous Fourier transforms,
//! real spherical harmonics and deterministic reductions.

mod fourier;
mod grid;
mod harmonics;
mod interp;
mod reduce;
mod sphere;

pub use fourier::{continuous_ft_1d, continuous_ft_lattice, dft_1d, FourierSamples, LatticeSpectrum};
pub use grid::{gauss_legendre_unit, Grid1D, GridKind};
pub use harmonics::{
    harmonic_analyze, harmonic_dimension, harmonic_synthesize, legendre_p, legendre_p_at_zero,
    real_harmonics, HarmonicSpectrum,
};
pub use interp::{cubic_stencil, CubicStencil};
pub use reduce::{pairwise_sum, pairwise_sum_by};
pub use sphere::{make_sphere_quadrature, sphere_surface_area, SphereLayout, SphereQuadrature};

/// Relative threshold below which an integrand tail is treated as zero.
pub const EPS_TAIL: f64 = 1e-12;

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Orthonormal basis of `θ⊥ ⊂ R^{k+1}` by Gram–Schmidt on the coordinate
/// axes, skipping the axis most aligned with θ.
pub(crate) fn complement_basis(theta: &[f64]) -> Vec<Vec<f64>> {
    let dim = theta.len();
    let skip = (0..dim)
        .max_by(|&a, &b| theta[a].abs().partial_cmp(&theta[b].abs()).unwrap().then(b.cmp(&a)))
        .unwrap_or(0);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(dim - 1);
    for axis in (0..dim).filter(|&a| a != skip) {
        let mut v = vec![0.0; dim];
        v[axis] = 1.0;
        for b in std::iter::once(theta).chain(basis.iter().map(|b| b.as_slice())) {
            let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            for (x, y) in v.iter_mut().zip(b) {
                *x -= d * y;
            }
        }
        let r = norm(&v);
        v.iter_mut().for_each(|x| *x /= r);
        basis.push(v);
    }
    basis
}
