use std::f64::consts::PI;

use super::lorentz::{lorentz, HPoint};
use crate::error::{Error, Result};
use crate::numkit::{cubic_stencil, norm};

#[derive(Debug, Clone, PartialEq)]
pub enum HFieldKind {
    Zero,
    /// `e^{a(1 - x_{n+1})}`.
    ExpDecay { a: f64 },
    /// `x_{n+1}^{-a}`.
    PowerDecay { a: f64 },
    /// `e^{a(1 - [x, c])}`: exp-decay recentred at `c`.
    ShiftedExpDecay { a: f64, center: HPoint },
    /// Samples in hyperbolic polar coordinates on the uniform radius grid
    /// `[0, r_max]`; `angular = 1` is a radial profile (any `n`), otherwise
    /// `n = 2` with `angular` equispaced angles, index `ir * angular + ia`.
    /// Cubic in `r`, periodic cubic in angle, zero beyond `r_max`.
    Sampled { r_max: f64, radial: usize, angular: usize, values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct HField {
    n: usize,
    kind: HFieldKind,
}

fn positive(a: f64) -> Result<()> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::invalid(format!("decay rate must be positive, got {a}")));
    }
    Ok(())
}

impl HField {
    pub fn zero(n: usize) -> Self {
        Self { n, kind: HFieldKind::Zero }
    }

    pub fn exp_decay(n: usize, a: f64) -> Result<Self> {
        positive(a)?;
        Ok(Self { n, kind: HFieldKind::ExpDecay { a } })
    }

    pub fn power_decay(n: usize, a: f64) -> Result<Self> {
        positive(a)?;
        Ok(Self { n, kind: HFieldKind::PowerDecay { a } })
    }

    pub fn shifted_exp_decay(a: f64, center: HPoint) -> Result<Self> {
        positive(a)?;
        Ok(Self { n: center.n(), kind: HFieldKind::ShiftedExpDecay { a, center } })
    }

    pub fn sampled(n: usize, r_max: f64, radial: usize, angular: usize, values: Vec<f64>) -> Result<Self> {
        if !(r_max > 0.0 && r_max.is_finite()) || radial < 2 || angular == 0 {
            return Err(Error::invalid("sampled field needs r_max > 0, >= 2 radii and >= 1 angle"));
        }
        if angular > 1 && n != 2 {
            return Err(Error::unsupported("angular samples are supported on H^2 only"));
        }
        if values.len() != radial * angular || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("expected {} finite samples, got {}", radial * angular, values.len())));
        }
        Ok(Self { n, kind: HFieldKind::Sampled { r_max, radial, angular, values } })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &HFieldKind {
        &self.kind
    }

    /// `sup { b : |f| <= C x_{n+1}^{-b} }`; infinite for exponential decay
    /// and compact support.
    pub fn power_rate(&self) -> f64 {
        match &self.kind {
            HFieldKind::PowerDecay { a } => *a,
            _ => f64::INFINITY,
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let last = x[x.len() - 1];
        match &self.kind {
            HFieldKind::Zero => 0.0,
            HFieldKind::ExpDecay { a } => (a * (1.0 - last)).exp(),
            HFieldKind::PowerDecay { a } => last.powf(-a),
            HFieldKind::ShiftedExpDecay { a, center } => (a * (1.0 - lorentz(x, center.coords()))).exp(),
            HFieldKind::Sampled { r_max, radial, angular, values } => {
                let spatial = &x[..x.len() - 1];
                let r = norm(spatial).asinh();
                let h = r_max / (*radial - 1) as f64;
                let Some(sr) = cubic_stencil(0.0, h, *radial, r) else { return 0.0 };
                if *angular == 1 {
                    return sr.apply(values);
                }
                let na = *angular;
                let t = (spatial[1].atan2(spatial[0]).rem_euclid(2.0 * PI)) / (2.0 * PI / na as f64);
                let (idx, wa) = periodic_stencil(t, na);
                let mut acc = 0.0;
                for (i, wr) in sr.weights.iter().enumerate() {
                    if *wr == 0.0 {
                        continue;
                    }
                    let row = (sr.start + i) * na;
                    acc += wr * idx.iter().zip(&wa).map(|(j, w)| w * values[row + j]).sum::<f64>();
                }
                acc
            }
        }
    }
}

// Four-point Lagrange weights on a periodic grid of `len` nodes at
// fractional index `t`; fewer than four nodes falls back to linear.
fn periodic_stencil(t: f64, len: usize) -> (Vec<usize>, Vec<f64>) {
    let cell = t.floor();
    let frac = t - cell;
    let cell = cell as i64;
    let wrap = |i: i64| i.rem_euclid(len as i64) as usize;
    if len < 4 {
        return (vec![wrap(cell), wrap(cell + 1)], vec![1.0 - frac, frac]);
    }
    let u = frac + 1.0;
    let weights = (0..4)
        .map(|k| {
            (0..4)
                .filter(|j| *j != k)
                .map(|j| (u - j as f64) / (k as f64 - j as f64))
                .product()
        })
        .collect();
    ((0..4).map(|k| wrap(cell - 1 + k)).collect(), weights)
}
