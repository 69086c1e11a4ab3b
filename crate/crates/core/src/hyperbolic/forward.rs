use super::field::HField;
use super::lorentz::OneSheetPoint;
use super::quadrature::{section_integral, HIntegral, HOrders, HkRule};
use crate::error::{Error, Result};
use crate::numkit::{dot, norm, EPS_TAIL};
use crate::rotation::make_block_rotation;

/// Point `(v, w)` of the admissible complex: `v ∈ S^{n-k-1}`, `w` on the
/// one-sheeted hyperboloid inside `Rv ⊕ R^{k+1}`. Names the k-geodesic
/// `{x ∈ H^{k+1}_v : [x, w] = 0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolicComplexElement {
    v: Vec<f64>,
    w: OneSheetPoint,
}

impl HyperbolicComplexElement {
    pub fn new(v: Vec<f64>, w: Vec<f64>) -> Result<Self> {
        let q = v.len();
        if q == 0 || w.len() <= q + 1 {
            return Err(Error::invalid(format!("v has {q} components and w has {}; need n - k >= 1, k >= 1", w.len())));
        }
        if (norm(&v) - 1.0).abs() > 1e-12 {
            return Err(Error::invalid("v must be a unit vector"));
        }
        let c = dot(&w[..q], &v);
        let off: f64 = w[..q].iter().zip(&v).map(|(a, b)| (a - c * b).powi(2)).sum::<f64>().sqrt();
        if off > 1e-12 * (1.0 + norm(&w)) {
            return Err(Error::invalid(format!("w leaves Rv ⊕ R^(k+1) by {off:.3e}")));
        }
        Ok(Self { v, w: OneSheetPoint::new(w)? })
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn w(&self) -> &OneSheetPoint {
        &self.w
    }

    pub fn n(&self) -> usize {
        self.w.coords().len() - 1
    }

    pub fn k(&self) -> usize {
        self.n() - self.v.len()
    }
}

fn finish(value: HIntegral, what: &str) -> Result<f64> {
    if !value.value.is_finite() || (value.tail != 0.0 && value.tail.abs() > EPS_TAIL * value.value.abs()) {
        return Err(Error::Divergence {
            message: format!("{what}: the outermost radial panel still contributes {:.3e}", value.tail),
            partial: vec![value.value],
        });
    }
    Ok(value.value)
}

/// `(H̃_k f)(v, w) = (H f_v)(ζ)` with `f_v = f ∘ γ̃_v` and `ζ = γ̃_vᵀ w`: the
/// integral over the copy of `H^k` cut from `H^{k+1}` by `[η, ζ] = 0`.
pub fn hradon_forward_restricted(f: &HField, e: &HyperbolicComplexElement, orders: &HOrders) -> Result<f64> {
    let n = e.n();
    if f.n() != n {
        return Err(Error::invalid(format!("field on H^{} but element for H^{n}", f.n())));
    }
    let k = e.k();
    let rot = make_block_rotation(&e.v, n + 1)?;
    let zeta = rot.apply_transpose(e.w.coords())[n - k - 1..].to_vec();
    let rule = HkRule::new(k, orders)?;
    let value = section_integral(
        |eta| {
            let mut x = vec![0.0; n + 1];
            x[n - k - 1..].copy_from_slice(eta);
            f.eval(&rot.apply(&x))
        },
        &zeta,
        &rule,
    )?;
    finish(value, "restricted hyperbolic Radon transform")
}

/// `(H f)(y)`: integral over the totally geodesic hypersurface `[x, y] = 0`.
pub fn hradon_hyperplane(f: &HField, y: &OneSheetPoint, orders: &HOrders) -> Result<f64> {
    let n = f.n();
    if y.coords().len() != n + 1 {
        return Err(Error::invalid("y lives in the wrong dimension"));
    }
    let rule = HkRule::new(n - 1, orders)?;
    finish(section_integral(|x| f.eval(x), y.coords(), &rule)?, "hyperbolic Radon transform")
}
