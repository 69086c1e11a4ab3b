use super::sinogram::RestrictedSinogram;
use crate::error::{Error, Result};
use crate::numkit::{cubic_stencil, gauss_legendre_unit, pairwise_sum_by, CubicStencil};

/// What to do with offsets `x'·θ + t` outside the s-grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OffsetRange {
    /// Fail when more than 1% of the direction weight falls outside.
    Strict,
    /// Treat the sinogram as zero outside the grid.
    ZeroExtended,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualValue {
    pub value: f64,
    /// Direction weight whose offset fell outside the s-grid.
    pub out_of_range: f64,
}

/// `φ(θ_i, ·; x'')` for every direction at one fixed `x''`, interpolated in
/// `x''` when the point is not a grid node.
#[derive(Debug, Clone)]
pub struct SliceProfiles<'a> {
    phi: &'a RestrictedSinogram,
    rows: Vec<Vec<f64>>,
    s0: f64,
    h: f64,
}

impl<'a> SliceProfiles<'a> {
    pub fn at(phi: &'a RestrictedSinogram, xpp: &[f64]) -> Result<Self> {
        let grid = phi.grid();
        if xpp.len() != grid.xpp.len() {
            return Err(Error::invalid(format!("x'' has {} coordinates, expected {}", xpp.len(), grid.xpp.len())));
        }
        let h = grid
            .s
            .spacing()
            .ok_or_else(|| Error::invalid("offset interpolation needs a uniform s-grid"))?;
        // Per-axis stencils in x''; exact nodes use a single weight.
        let mut axis_stencils: Vec<Vec<(usize, f64)>> = Vec::with_capacity(xpp.len());
        for (g, &x) in grid.xpp.iter().zip(xpp) {
            if let Some(i) = g.nodes().iter().position(|&v| v == x) {
                axis_stencils.push(vec![(i, 1.0)]);
                continue;
            }
            let hx = g.spacing().ok_or_else(|| Error::invalid("x'' interpolation needs uniform grids"))?;
            let st: CubicStencil = cubic_stencil(g.nodes()[0], hx, g.len(), x)
                .ok_or_else(|| Error::invalid(format!("x'' coordinate {x} outside the sinogram grid")))?;
            axis_stencils.push(st.weights.iter().enumerate().filter(|(_, w)| **w != 0.0).map(|(j, w)| (st.start + j, *w)).collect());
        }
        let mut combos: Vec<(usize, f64)> = vec![(0, 1.0)];
        for (d, st) in axis_stencils.iter().enumerate() {
            let len = grid.xpp[d].len();
            combos = combos
                .iter()
                .flat_map(|&(idx, w)| st.iter().map(move |&(j, wj)| (idx * len + j, w * wj)))
                .collect();
        }
        let ns = grid.s.len();
        let rows = (0..grid.theta.len())
            .map(|it| {
                (0..ns)
                    .map(|is| combos.iter().map(|&(ix, w)| w * phi.get(it, is, ix)).sum())
                    .collect()
            })
            .collect();
        Ok(Self { phi, rows, s0: grid.s.nodes()[0], h })
    }

    fn peak(&self) -> f64 {
        self.rows.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// `∫_{S^k} φ(θ, x'·θ + t) d_*θ`.
    pub fn dual(&self, xp: &[f64], t: f64, mode: OffsetRange) -> Result<DualValue> {
        let q = &self.phi.grid().theta;
        if xp.len() != q.dim() + 1 {
            return Err(Error::invalid(format!("x' has {} coordinates, expected {}", xp.len(), q.dim() + 1)));
        }
        let ns = self.rows.first().map_or(0, |r| r.len());
        let mut outside = 0.0;
        let value = pairwise_sum_by(q.len(), |i| {
            let theta = q.point(i);
            let s = xp.iter().zip(theta).map(|(a, b)| a * b).sum::<f64>() + t;
            match cubic_stencil(self.s0, self.h, ns, s) {
                Some(st) => q.weight(i) * st.apply(&self.rows[i]),
                None => 0.0,
            }
        });
        for i in 0..q.len() {
            let s = xp.iter().zip(q.point(i)).map(|(a, b)| a * b).sum::<f64>() + t;
            if cubic_stencil(self.s0, self.h, ns, s).is_none() {
                outside += q.weight(i);
            }
        }
        if mode == OffsetRange::Strict && outside > 0.01 {
            return Err(Error::RangeExceeded { fraction: outside });
        }
        Ok(DualValue { value, out_of_range: outside })
    }
}

/// `(R*_t φ_{x''})(x')` on the grid slice `x''` (strict offset range).
pub fn dual_transform(phi: &RestrictedSinogram, xpp: &[f64], xp: &[f64], t: f64) -> Result<f64> {
    Ok(SliceProfiles::at(phi, xpp)?.dual(xp, t, OffsetRange::Strict)?.value)
}

#[derive(Debug, Clone)]
pub struct DualInversion {
    pub value: f64,
    /// `(ε, extrapolated value)` after each halving.
    pub trace: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy)]
pub struct DualInversionOptions {
    pub tol: f64,
    pub max_halvings: usize,
}

impl Default for DualInversionOptions {
    fn default() -> Self {
        Self { tol: 1e-4, max_halvings: 40 }
    }
}

/// `f(x) = (1/π) ∫_0^∞ [R*φ(x') - R*_t φ(x')] / t² dt` for `k = 1`, as the
/// limit of `∫_ε^{tMax}` under ε-halving with Richardson extrapolation. The
/// part beyond `tMax` is taken as `R*φ(x') / tMax`.
pub fn invert_dual_formula_k1(
    phi: &RestrictedSinogram,
    xp: &[f64],
    xpp: &[f64],
    epsilon: f64,
    t_max: f64,
    opts: &DualInversionOptions,
) -> Result<DualInversion> {
    if phi.k() != 1 {
        return Err(Error::unsupported(format!("dual-formula inversion needs k = 1, got k = {}", phi.k())));
    }
    if !(epsilon > 0.0 && t_max > epsilon) {
        return Err(Error::invalid(format!("need 0 < epsilon < tMax, got epsilon={epsilon}, tMax={t_max}")));
    }
    let prof = SliceProfiles::at(phi, xpp)?;
    let r0 = prof.dual(xp, 0.0, OffsetRange::Strict)?.value;
    let g = |t: f64| -> f64 {
        let rt = prof.dual(xp, t, OffsetRange::ZeroExtended).map(|d| d.value).unwrap_or(0.0);
        (r0 - rt) / (t * t)
    };
    let scale = prof.peak().max(f64::MIN_POSITIVE);
    let integ = AdaptiveGl::new(1e-10 * scale);
    let panel = prof.h;
    let mut running = integ.integrate_panels(&g, epsilon, t_max, panel) + r0 / t_max;
    let mut eps = epsilon;
    let mut trace = Vec::new();
    let mut prev_extrap: Option<f64> = None;
    for _ in 0..opts.max_halvings {
        let next = 0.5 * eps;
        let inner = running + integ.integrate_panels(&g, next, eps, panel);
        let extrap = (2.0 * inner - running) / std::f64::consts::PI;
        trace.push((next, extrap));
        if let Some(p) = prev_extrap {
            if (extrap - p).abs() < opts.tol {
                return Ok(DualInversion { value: extrap, trace });
            }
        }
        prev_extrap = Some(extrap);
        running = inner;
        eps = next;
    }
    Err(Error::NoConvergence { trace })
}

struct AdaptiveGl {
    x: Vec<f64>,
    w: Vec<f64>,
    abs_tol: f64,
}

impl AdaptiveGl {
    fn new(abs_tol: f64) -> Self {
        let (x, w) = gauss_legendre_unit(10);
        Self { x, w, abs_tol }
    }

    fn rule<G: Fn(f64) -> f64>(&self, g: &G, a: f64, b: f64) -> f64 {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        half * pairwise_sum_by(self.x.len(), |i| self.w[i] * g(mid + half * self.x[i]))
    }

    fn adapt<G: Fn(f64) -> f64>(&self, g: &G, a: f64, b: f64, whole: f64, depth: usize) -> f64 {
        let m = 0.5 * (a + b);
        let left = self.rule(g, a, m);
        let right = self.rule(g, m, b);
        if depth == 0 || (left + right - whole).abs() <= self.abs_tol {
            return left + right;
        }
        self.adapt(g, a, m, left, depth - 1) + self.adapt(g, m, b, right, depth - 1)
    }

    /// Panels no wider than `width` over `[a, b]`, each refined adaptively.
    fn integrate_panels<G: Fn(f64) -> f64>(&self, g: &G, a: f64, b: f64, width: f64) -> f64 {
        let count = ((b - a) / width).ceil().max(1.0) as usize;
        let step = (b - a) / count as f64;
        let mut acc = 0.0;
        for i in 0..count {
            let lo = a + i as f64 * step;
            let hi = if i + 1 == count { b } else { lo + step };
            let whole = self.rule(g, lo, hi);
            acc += self.adapt(g, lo, hi, whole, 8);
        }
        acc
    }
}
