use serde::Serialize;

use crate::error::{Error, Result};
use crate::euclid::RestrictedSinogram;
use crate::numkit::SphereLayout;

/// Finite-difference estimate of
/// `sup (1 + |s| + |x''|)^m |D^μ φ|` over `|μ| <= m`.
#[derive(Debug, Clone, Serialize)]
pub struct SeminormReport {
    pub m: usize,
    pub value: f64,
    /// Points per axis: directions, offsets, then each `x''` axis.
    pub grid_resolution_used: Vec<usize>,
}

/// Uniform axes of the sinogram in differencing order: angle (periodic),
/// offset, then the `x''` axes.
struct Axes {
    shape: Vec<usize>,
    steps: Vec<f64>,
    periodic: Vec<bool>,
}

impl Axes {
    fn strides(&self) -> Vec<usize> {
        let mut st = vec![1usize; self.shape.len()];
        for d in (0..self.shape.len() - 1).rev() {
            st[d] = st[d + 1] * self.shape[d + 1];
        }
        st
    }

    fn coords(&self, mut flat: usize) -> Vec<usize> {
        let mut c = vec![0; self.shape.len()];
        for d in (0..self.shape.len()).rev() {
            c[d] = flat % self.shape[d];
            flat /= self.shape[d];
        }
        c
    }

    /// Flat index of `c + off·e_axis`, wrapping on periodic axes.
    fn shifted(&self, c: &[usize], axis: usize, off: i64, strides: &[usize]) -> Option<usize> {
        let len = self.shape[axis] as i64;
        let mut j = c[axis] as i64 + off;
        if self.periodic[axis] {
            j = j.rem_euclid(len);
        } else if j < 0 || j >= len {
            return None;
        }
        let mut flat = 0;
        for (d, (&cd, st)) in c.iter().zip(strides).enumerate() {
            flat += if d == axis { j as usize } else { cd } * st;
        }
        Some(flat)
    }
}

fn derivative_axes(phi: &RestrictedSinogram, m: usize) -> Result<Axes> {
    let grid = phi.grid();
    let mut shape = vec![grid.theta.len(), grid.s.len()];
    let mut steps = vec![0.0, 0.0];
    if m >= 1 {
        match grid.theta.layout() {
            SphereLayout::Circle { count } => steps[0] = 2.0 * std::f64::consts::PI / *count as f64,
            _ => {
                return Err(Error::unsupported(format!(
                    "direction derivatives are implemented for k = 1 only (k = {})",
                    grid.k()
                )))
            }
        }
    }
    steps[1] = grid.s.spacing().ok_or_else(|| Error::invalid("seminorm estimate needs a uniform s-grid"))?;
    for g in &grid.xpp {
        shape.push(g.len());
        steps.push(g.spacing().ok_or_else(|| Error::invalid("seminorm estimate needs uniform x'' grids"))?);
    }
    let mut periodic = vec![false; shape.len()];
    periodic[0] = true;
    Ok(Axes { shape, steps, periodic })
}

fn weight(phi: &RestrictedSinogram, c: &[usize]) -> f64 {
    let grid = phi.grid();
    let s = grid.s.nodes()[c[1]];
    let r2: f64 = grid.xpp.iter().zip(&c[2..]).map(|(g, &i)| g.nodes()[i].powi(2)).sum();
    1.0 + s.abs() + r2.sqrt()
}

/// Estimates the weighted derivative seminorm of order `m <= 2`. Direction
/// derivatives differentiate the degree-0 homogeneous extension
/// `φ(x'/|x'|, ·)` (implemented for `k = 1`).
pub fn estimate_seminorm(phi: &RestrictedSinogram, m: usize) -> Result<SeminormReport> {
    if m > 2 {
        return Err(Error::invalid(format!("seminorm order must be <= 2, got {m}")));
    }
    let ax = derivative_axes(phi, m)?;
    let grid = phi.grid();
    let v = phi.values();
    let peak = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let mut value = peak;
    if m == 0 || peak == 0.0 {
        return Ok(SeminormReport { m, value, grid_resolution_used: ax.shape.clone() });
    }
    let strides = ax.strides();
    let dims = ax.shape.len();

    // Resolution: h² |∂³φ| along every axis must stay below 1% of max |φ|.
    for axis in 0..dims {
        let h = ax.steps[axis];
        let mut worst = 0.0f64;
        for flat in 0..v.len() {
            let c = ax.coords(flat);
            let p: Option<Vec<usize>> = [-1i64, 0, 1, 2].iter().map(|&o| ax.shifted(&c, axis, o, &strides)).collect();
            if let Some(p) = p {
                let d3 = (v[p[3]] - 3.0 * v[p[2]] + 3.0 * v[p[1]] - v[p[0]]) / (h * h * h);
                worst = worst.max(h * h * d3.abs());
            }
        }
        if worst >= 0.01 * peak {
            return Err(Error::Resolution(format!(
                "axis {axis}: h^2 |third derivative| = {worst:.3e} is not below 1% of max |phi| = {peak:.3e}"
            )));
        }
    }

    let d1 = |c: &[usize], a: usize| -> Option<f64> {
        let p = ax.shifted(c, a, 1, &strides)?;
        let q = ax.shifted(c, a, -1, &strides)?;
        Some((v[p] - v[q]) / (2.0 * ax.steps[a]))
    };
    let d2 = |c: &[usize], a: usize, b: usize| -> Option<f64> {
        if a == b {
            let p = ax.shifted(c, a, 1, &strides)?;
            let q = ax.shifted(c, a, -1, &strides)?;
            let o = ax.shifted(c, a, 0, &strides)?;
            return Some((v[p] - 2.0 * v[o] + v[q]) / (ax.steps[a] * ax.steps[a]));
        }
        let mut acc = 0.0;
        for (sa, sb, sign) in [(1i64, 1i64, 1.0), (1, -1, -1.0), (-1, 1, -1.0), (-1, -1, 1.0)] {
            let mut cc = c.to_vec();
            let i = ax.shifted(c, a, sa, &strides)?;
            cc[a] = ax.coords(i)[a];
            let j = ax.shifted(&cc, b, sb, &strides)?;
            acc += sign * v[j];
        }
        Some(acc / (4.0 * ax.steps[a] * ax.steps[b]))
    };

    for flat in 0..v.len() {
        let c = ax.coords(flat);
        let w = weight(phi, &c).powi(m as i32);
        value = value.max(w * v[flat].abs());
        let theta = grid.theta.point(c[0]);
        let (cs, sn) = (theta[0], theta[1]);
        // ∂α/∂x' on the unit circle and its Hessian.
        let grad_alpha = [-sn, cs];
        let hess_alpha = [[2.0 * cs * sn, sn * sn - cs * cs], [sn * sn - cs * cs, -2.0 * cs * sn]];
        let mut local = 0.0f64;
        // First order: x'_1, x'_2, s, x''.
        let Some(pa) = d1(&c, 0) else { continue };
        let mut first = vec![pa * grad_alpha[0], pa * grad_alpha[1]];
        for a in 1..dims {
            match d1(&c, a) {
                Some(d) => first.push(d),
                None => continue,
            }
        }
        if first.len() < dims + 1 {
            continue;
        }
        for d in &first {
            local = local.max(d.abs());
        }
        if m == 2 {
            let Some(paa) = d2(&c, 0, 0) else { continue };
            for i in 0..2 {
                for j in 0..2 {
                    let dij = paa * grad_alpha[i] * grad_alpha[j] + pa * hess_alpha[i][j];
                    local = local.max(dij.abs());
                }
            }
            for a in 1..dims {
                let Some(pab) = d2(&c, 0, a) else { continue };
                for g in grad_alpha {
                    local = local.max((pab * g).abs());
                }
                for b in a..dims {
                    if let Some(dab) = d2(&c, a, b) {
                        local = local.max(dab.abs());
                    }
                }
            }
        }
        value = value.max(w * local);
    }
    Ok(SeminormReport { m, value, grid_resolution_used: ax.shape.clone() })
}
