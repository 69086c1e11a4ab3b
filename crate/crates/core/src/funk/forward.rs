use rayon::prelude::*;

use super::field::{SphereField, SphereFieldKind};
use crate::error::{Error, Result};
use crate::numkit::{complement_basis, dot, make_sphere_quadrature, norm, pairwise_sum_by, SphereQuadrature};
use crate::rotation::{make_block_rotation, BlockRotation};

/// A point `(v, w)` of the admissible complex: `v ∈ S^{n-k-1} ⊂ R^{n-k}`,
/// `w ∈ S^{k+1}_v = S^n ∩ (Rv ⊕ R^{k+1})`. Names the great k-sphere
/// `{θ ∈ S^{k+1}_v : θ · w = 0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalComplexElement {
    v: Vec<f64>,
    w: Vec<f64>,
}

impl SphericalComplexElement {
    pub fn new(v: Vec<f64>, w: Vec<f64>) -> Result<Self> {
        let q = v.len();
        if q == 0 || w.len() <= q + 1 {
            return Err(Error::invalid(format!(
                "v has {q} components and w has {}; need 1 <= n - k and k >= 1",
                w.len()
            )));
        }
        for (name, x) in [("v", &v), ("w", &w)] {
            let r = norm(x);
            if (r - 1.0).abs() > 1e-12 {
                return Err(Error::invalid(format!("{name} must be a unit vector, |{name}| = {r}")));
            }
        }
        let c = dot(&w[..q], &v);
        let off: f64 = w[..q].iter().zip(&v).map(|(a, b)| (a - c * b).powi(2)).sum::<f64>().sqrt();
        if off > 1e-12 {
            return Err(Error::invalid(format!("w leaves Rv ⊕ R^(k+1) by {off:.3e}")));
        }
        Ok(Self { v, w })
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn w(&self) -> &[f64] {
        &self.w
    }

    pub fn n(&self) -> usize {
        self.w.len() - 1
    }

    pub fn k(&self) -> usize {
        self.w.len() - self.v.len() - 1
    }

    /// `w` in the coordinates `(v, e_{n-k+1}, ..., e_{n+1})` of `R^{k+2}_v`.
    fn w_local(&self) -> Vec<f64> {
        let q = self.v.len();
        let mut out = Vec::with_capacity(self.k() + 2);
        out.push(dot(&self.w[..q], &self.v));
        out.extend_from_slice(&self.w[q..]);
        out
    }
}

/// Embeds `ζ ∈ R^{k+2}` as `(0, ..., 0, ζ) ∈ R^{n+1}`.
pub(crate) fn embed_slice(zeta: &[f64], n: usize) -> Vec<f64> {
    let mut x = vec![0.0; n + 1];
    x[n + 1 - zeta.len()..].copy_from_slice(zeta);
    x
}

/// Normalized quadrature on the great k-sphere of `R^{k+2}`.
pub(crate) fn subsphere_rule(k: usize, order: usize) -> Result<SphereQuadrature> {
    make_sphere_quadrature(k, order, true)
}

// Integrates over the unit sphere of `span(basis)` given in local
// coordinates, `embed` mapping local points to `R^{n+1}`.
fn subsphere_average<E: Fn(&[f64]) -> Vec<f64>>(f: &SphereField, basis: &[Vec<f64>], rule: &SphereQuadrature, embed: E) -> f64 {
    let dim = basis[0].len();
    pairwise_sum_by(rule.len(), |i| {
        let mut local = vec![0.0; dim];
        for (b, o) in basis.iter().zip(rule.point(i)) {
            for (x, bi) in local.iter_mut().zip(b) {
                *x += o * bi;
            }
        }
        rule.weight(i) * f.eval(&embed(&local))
    })
}

fn check(f: &SphereField, e: &SphericalComplexElement) -> Result<()> {
    if f.n() != e.n() {
        return Err(Error::invalid(format!("field on S^{} but element for S^{}", f.n(), e.n())));
    }
    Ok(())
}

fn singular_guard(f: &SphereField, value: f64, e: &SphericalComplexElement) -> Result<f64> {
    if matches!(f.kind(), SphereFieldKind::CounterexampleFtilde { .. }) || !value.is_finite() {
        return Err(Error::Divergence {
            message: format!(
                "the subsphere orthogonal to w={:?} meets the singular set θ' = 0; the value is a quadrature truncation",
                e.w()
            ),
            partial: vec![value],
        });
    }
    Ok(value)
}

/// `(F̃_k f)(v, w)`: average of `f` over the great k-sphere of `R^{k+2}_v`
/// orthogonal to `w`, with a normalized quadrature exact to `order`.
pub fn funk_forward_restricted(f: &SphereField, e: &SphericalComplexElement, order: usize) -> Result<f64> {
    check(f, e)?;
    let rule = subsphere_rule(e.k(), order)?;
    funk_forward_with(f, e, &rule)
}

pub(crate) fn funk_forward_with(f: &SphereField, e: &SphericalComplexElement, rule: &SphereQuadrature) -> Result<f64> {
    let basis = complement_basis(&e.w_local());
    let (n, q) = (e.n(), e.v.len());
    let value = subsphere_average(f, &basis, rule, |xi| {
        let mut theta = vec![0.0; n + 1];
        for (t, vi) in theta.iter_mut().zip(&e.v) {
            *t = xi[0] * vi;
        }
        theta[q..].copy_from_slice(&xi[1..]);
        theta
    });
    singular_guard(f, value, e)
}

/// The same value computed on the reference sphere `S^{k+1} ⊂ R^{k+2}`:
/// `(F f_v)(ζ)` with `f_v = f ∘ γ̃_v` and `ζ = γ̃_vᵀ w`.
pub fn funk_forward_rotated(f: &SphereField, e: &SphericalComplexElement, order: usize) -> Result<f64> {
    check(f, e)?;
    let rot = make_block_rotation(&e.v, e.n() + 1)?;
    let rule = subsphere_rule(e.k(), order)?;
    let n = e.n();
    let zeta = rot.apply_transpose(&e.w)[n - e.k() - 1..].to_vec();
    let basis = complement_basis(&zeta);
    let value = subsphere_average(f, &basis, &rule, |eta| rot.apply(&embed_slice(eta, n)));
    singular_guard(f, value, e)
}

/// `φ_v(ζ) = φ(v, γ̃_v ζ)` at every node of a quadrature on `S^{k+1}`.
pub fn funk_slice<P>(phi: P, v: &[f64], n: usize, slice: &SphereQuadrature) -> Result<Vec<f64>>
where
    P: Fn(&SphericalComplexElement) -> Result<f64> + Sync,
{
    let rot = make_block_rotation(v, n + 1)?;
    slice_with(&phi, v, &rot, n, slice)
}

pub(crate) fn slice_with<P>(phi: &P, v: &[f64], rot: &BlockRotation, n: usize, slice: &SphereQuadrature) -> Result<Vec<f64>>
where
    P: Fn(&SphericalComplexElement) -> Result<f64> + Sync,
{
    (0..slice.len())
        .into_par_iter()
        .map(|i| {
            let w = rot.apply(&embed_slice(slice.point(i), n));
            phi(&element_exact(v, w)?)
        })
        .collect()
}

// `γ̃_v ζ` keeps its `R^{n-k}` part parallel to `v` up to rounding; project
// it back so the strict constructor accepts it.
pub(crate) fn element_exact(v: &[f64], mut w: Vec<f64>) -> Result<SphericalComplexElement> {
    let q = v.len();
    let c = dot(&w[..q], v);
    for (wi, vi) in w[..q].iter_mut().zip(v) {
        *wi = c * vi;
    }
    let r = norm(&w);
    w.iter_mut().for_each(|x| *x /= r);
    SphericalComplexElement::new(v.to_vec(), w)
}
