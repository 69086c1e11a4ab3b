/// Four-point Lagrange stencil on a uniform grid: `start` is the first node
/// index and `weights` multiply `values[start..start + 4]`. Grids shorter than
/// four nodes fall back to linear interpolation (unused weights are zero).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicStencil {
    pub start: usize,
    pub weights: [f64; 4],
}

impl CubicStencil {
    pub fn apply(&self, values: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (k, w) in self.weights.iter().enumerate() {
            if *w != 0.0 {
                acc += w * values[self.start + k];
            }
        }
        acc
    }
}

/// Stencil for evaluating at `x` on the uniform grid `x0 + i*h`, `i < len`.
/// Returns `None` outside `[x0, x0 + (len-1)h]`.
pub fn cubic_stencil(x0: f64, h: f64, len: usize, x: f64) -> Option<CubicStencil> {
    if len < 2 || !x.is_finite() {
        return None;
    }
    let t = (x - x0) / h;
    let last = (len - 1) as f64;
    if t < -1e-12 || t > last + 1e-12 {
        return None;
    }
    let t = t.clamp(0.0, last);
    let cell = (t.floor() as usize).min(len - 2);
    let frac = t - cell as f64;
    if len < 4 {
        let mut weights = [0.0; 4];
        weights[0] = 1.0 - frac;
        weights[1] = frac;
        return Some(CubicStencil { start: cell, weights });
    }
    let start = cell.saturating_sub(1).min(len - 4);
    // Local coordinate relative to the stencil start.
    let u = t - start as f64;
    let mut weights = [0.0; 4];
    for (k, w) in weights.iter_mut().enumerate() {
        let mut prod = 1.0;
        for j in 0..4 {
            if j != k {
                prod *= (u - j as f64) / (k as f64 - j as f64);
            }
        }
        *w = prod;
    }
    Some(CubicStencil { start, weights })
}
