use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkit::norm;

/// `[x, y] = -x_1 y_1 - ... - x_n y_n + x_{n+1} y_{n+1}`.
pub fn lorentz_inner(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::invalid(format!("Lorentz vectors of lengths {} and {}", x.len(), y.len())));
    }
    Ok(lorentz(x, y))
}

pub(crate) fn lorentz(x: &[f64], y: &[f64]) -> f64 {
    let last = x.len() - 1;
    let space: f64 = x[..last].iter().zip(&y[..last]).map(|(a, b)| a * b).sum();
    x[last] * y[last] - space
}

/// Point of `H^n = {[x,x] = 1, x_{n+1} > 0}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HPoint {
    coords: Vec<f64>,
}

impl HPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 3 {
            return Err(Error::invalid("points of H^n need n >= 2"));
        }
        let q = lorentz(&coords, &coords);
        let last = *coords.last().unwrap();
        if (q - 1.0).abs() > 1e-10 * last * last || last < 1.0 - 1e-10 {
            return Err(Error::invalid(format!("[x,x] = {q}, x_(n+1) = {last}; not on the upper sheet")));
        }
        Ok(Self { coords })
    }

    pub fn origin(n: usize) -> Self {
        let mut coords = vec![0.0; n + 1];
        coords[n] = 1.0;
        Self { coords }
    }

    /// `θ sinh r + e_{n+1} cosh r`.
    pub fn from_polar(theta: &[f64], r: f64) -> Result<Self> {
        if (norm(theta) - 1.0).abs() > 1e-12 || !(r >= 0.0 && r.is_finite()) {
            return Err(Error::invalid("θ must be a unit vector and r >= 0"));
        }
        let mut coords: Vec<f64> = theta.iter().map(|t| t * r.sinh()).collect();
        coords.push(r.cosh());
        Ok(Self { coords })
    }

    /// `(θ, r)` with `θ = e_1` at the origin.
    pub fn polar(&self) -> (Vec<f64>, f64) {
        let n = self.n();
        let s = norm(&self.coords[..n]);
        let r = s.asinh();
        if s == 0.0 {
            let mut theta = vec![0.0; n];
            theta[0] = 1.0;
            (theta, 0.0)
        } else {
            (self.coords[..n].iter().map(|x| x / s).collect(), r)
        }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn n(&self) -> usize {
        self.coords.len() - 1
    }
}

/// Point of the one-sheeted hyperboloid `[y,y] = -1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OneSheetPoint {
    coords: Vec<f64>,
}

impl OneSheetPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 3 {
            return Err(Error::invalid("points of *H^n need n >= 2"));
        }
        let q = lorentz(&coords, &coords);
        let scale = 1.0 + coords.last().unwrap().powi(2);
        if (q + 1.0).abs() > 1e-10 * scale {
            return Err(Error::invalid(format!("[y,y] = {q}, expected -1")));
        }
        Ok(Self { coords })
    }

    /// `σ cosh ρ + e_{n+1} sinh ρ`.
    pub fn from_params(sigma: &[f64], rho: f64) -> Result<Self> {
        if (norm(sigma) - 1.0).abs() > 1e-12 || !rho.is_finite() {
            return Err(Error::invalid("σ must be a unit vector and ρ finite"));
        }
        let mut coords: Vec<f64> = sigma.iter().map(|s| s * rho.cosh()).collect();
        coords.push(rho.sinh());
        Ok(Self { coords })
    }

    /// `(σ, ρ)`.
    pub fn params(&self) -> (Vec<f64>, f64) {
        let n = self.coords.len() - 1;
        let rho = self.coords[n].asinh();
        let c = rho.cosh();
        (self.coords[..n].iter().map(|x| x / c).collect(), rho)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// `cosh⁻¹ [x, y]`, clamping roundoff just below 1.
pub fn geodesic_distance(x: &HPoint, y: &HPoint) -> Result<f64> {
    let c = lorentz_inner(x.coords(), y.coords())?;
    if c < 1.0 - 1e-8 {
        return Err(Error::invalid(format!("[x,y] = {c} < 1; points are not on H^n")));
    }
    Ok(if c < 1.0 + 1e-12 { (c.max(1.0)).acosh() } else { c.acosh() })
}

/// Lorentz-orthonormal frame of `{η : [η, ζ] = 0}` for a spacelike unit
/// `ζ ∈ R^{m+1}`: a timelike unit `t` with positive last coordinate (the
/// point of the section nearest `e_{m+1}`) and `m - 1` spacelike units.
/// The section of `H^m` is then `t cosh s + (Σ θ_i b_i) sinh s`.
pub(crate) fn section_frame(zeta: &[f64]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let m = zeta.len() - 1;
    let zz = lorentz(zeta, zeta);
    if (zz + 1.0).abs() > 1e-10 * (1.0 + zeta[m] * zeta[m]) {
        return Err(Error::invalid(format!("section normal must satisfy [ζ,ζ] = -1, got {zz}")));
    }
    let mut e = vec![0.0; m + 1];
    e[m] = 1.0;
    // t = e + [e,ζ] ζ is L-orthogonal to ζ with [t,t] = 1 + [e,ζ]².
    let c = lorentz(&e, zeta);
    let mut t: Vec<f64> = e.iter().zip(zeta).map(|(a, z)| a + c * z).collect();
    let tn = lorentz(&t, &t).sqrt();
    t.iter_mut().for_each(|x| *x /= tn);
    // Spacelike completion by Gram–Schmidt in the Lorentz form; at each
    // step the coordinate axis with the largest residual wins, lowest index
    // on ties.
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m - 1);
    let mut used = vec![false; m];
    for _ in 0..m - 1 {
        let mut best: Option<(usize, Vec<f64>, f64)> = None;
        for axis in (0..m).filter(|a| !used[*a]) {
            let mut r = vec![0.0; m + 1];
            r[axis] = 1.0;
            // Spacelike units have [b,b] = -1, timelike [t,t] = 1.
            let cz = lorentz(&r, zeta);
            r.iter_mut().zip(zeta).for_each(|(x, z)| *x += cz * z);
            let ct = lorentz(&r, &t);
            r.iter_mut().zip(&t).for_each(|(x, y)| *x -= ct * y);
            for b in &basis {
                let cb = lorentz(&r, b);
                r.iter_mut().zip(b).for_each(|(x, y)| *x += cb * y);
            }
            let size = -lorentz(&r, &r);
            if best.as_ref().is_none_or(|(_, _, s)| size > *s) {
                best = Some((axis, r, size));
            }
        }
        let (axis, mut r, size) = best.expect("an unused axis remains");
        if !(size > 1e-20) {
            return Err(Error::DegeneratePoint("section frame lost rank".into()));
        }
        let s = size.sqrt();
        r.iter_mut().for_each(|x| *x /= s);
        used[axis] = true;
        basis.push(r);
    }
    Ok((t, basis))
}
