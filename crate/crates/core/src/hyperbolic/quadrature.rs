use rayon::prelude::*;
use serde::Serialize;

use super::field::HField;
use super::lorentz::section_frame;
use crate::error::{Error, Result};
use crate::numkit::{gauss_legendre_unit, make_sphere_quadrature, pairwise_sum, pairwise_sum_by, SphereQuadrature, EPS_TAIL};

/// Truncation radius and node counts shared by the hyperbolic quadratures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HOrders {
    /// Every radial integral is cut at this geodesic radius.
    pub r_max: f64,
    /// Gauss–Legendre nodes per radial panel of width at most 1.
    pub panel_nodes: usize,
    /// Exactness order of the sphere rules.
    pub sphere: usize,
}

impl Default for HOrders {
    fn default() -> Self {
        Self { r_max: 12.0, panel_nodes: 16, sphere: 24 }
    }
}

impl HOrders {
    fn validate(&self) -> Result<()> {
        if !(self.r_max > 0.0 && self.r_max.is_finite()) || self.panel_nodes < 2 || self.sphere < 2 {
            return Err(Error::invalid("need r_max > 0, panel_nodes >= 2 and sphere order >= 2"));
        }
        Ok(())
    }
}

/// Integral with the share of its last radial panel, used as the
/// truncation diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HIntegral {
    pub value: f64,
    pub tail: f64,
}

impl HIntegral {
    /// Fails when the outermost panel carries more than `EPS_TAIL` of the
    /// total.
    pub fn checked(self, what: &str) -> Result<f64> {
        if !self.value.is_finite() || (self.tail != 0.0 && self.tail.abs() > EPS_TAIL * self.value.abs()) {
            return Err(Error::Truncation(format!(
                "{what}: the outermost radial panel contributes {:.3e} of {:.3e}; increase r_max",
                self.tail, self.value
            )));
        }
        Ok(self.value)
    }
}

/// Composite Gauss–Legendre rule on `[lo, hi]`; `edge` marks the last panel.
pub(crate) struct RadialRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub edge: Vec<bool>,
}

impl RadialRule {
    pub fn new(lo: f64, hi: f64, per_panel: usize) -> Self {
        let (x, w) = gauss_legendre_unit(per_panel);
        let panels = ((hi - lo).ceil() as usize).max(1);
        let h = (hi - lo) / panels as f64;
        let mut out = Self { nodes: vec![], weights: vec![], edge: vec![] };
        for p in 0..panels {
            let mid = lo + (p as f64 + 0.5) * h;
            for (xi, wi) in x.iter().zip(&w) {
                out.nodes.push(mid + 0.5 * h * xi);
                out.weights.push(0.5 * h * wi);
                out.edge.push(p + 1 == panels);
            }
        }
        out
    }
}

/// Polar rule on `H^k`: `u = (θ sinh s, cosh s)` with `θ ∈ S^{k-1}` and
/// weight `sinh^{k-1} s ds dθ`. `H^0` is the single point `(1)`.
pub(crate) struct HkRule {
    pub k: usize,
    radial: RadialRule,
    dirs: Option<SphereQuadrature>,
}

impl HkRule {
    pub fn new(k: usize, orders: &HOrders) -> Result<Self> {
        if k > 4 {
            return Err(Error::unsupported(format!("polar rules on H^{k} need S^{} (supported up to S^3)", k - 1)));
        }
        let dirs = if k == 0 { None } else { Some(make_sphere_quadrature(k - 1, orders.sphere, false)?) };
        Ok(Self { k, radial: RadialRule::new(0.0, orders.r_max, orders.panel_nodes), dirs })
    }

    pub fn len(&self) -> usize {
        match &self.dirs {
            None => 1,
            Some(d) => self.radial.nodes.len() * d.len(),
        }
    }

    /// Writes node `i` into `u` (length `k + 1`) and returns its weight and
    /// whether it lies in the last radial panel.
    pub fn node(&self, i: usize, u: &mut [f64]) -> (f64, bool) {
        let Some(d) = &self.dirs else {
            u[0] = 1.0;
            return (1.0, false);
        };
        let (ir, id) = (i / d.len(), i % d.len());
        let s = self.radial.nodes[ir];
        let (sh, ch) = (s.sinh(), s.cosh());
        for (x, t) in u.iter_mut().zip(d.point(id)) {
            *x = t * sh;
        }
        u[self.k] = ch;
        (self.radial.weights[ir] * d.weight(id) * sh.powi(self.k as i32 - 1), self.radial.edge[ir])
    }

    /// `∫_{H^k} g(u) du` with its edge share.
    pub fn integrate<G: Fn(&[f64]) -> f64 + Sync>(&self, g: G) -> HIntegral {
        let chunk = self.dirs.as_ref().map_or(1, |d| d.len());
        let rows: Vec<(f64, f64)> = (0..self.len() / chunk)
            .into_par_iter()
            .map(|row| {
                let mut u = vec![0.0; self.k + 1];
                let mut edge_sum = 0.0;
                let terms: Vec<f64> = (row * chunk..(row + 1) * chunk)
                    .map(|i| {
                        let (w, edge) = self.node(i, &mut u);
                        let t = w * g(&u);
                        if edge {
                            edge_sum += t;
                        }
                        t
                    })
                    .collect();
                (pairwise_sum(&terms), edge_sum)
            })
            .collect();
        HIntegral {
            value: pairwise_sum_by(rows.len(), |i| rows[i].0),
            tail: pairwise_sum_by(rows.len(), |i| rows[i].1),
        }
    }
}

/// Product rule realizing `dx = dv du dν(r)`, `dν = sinh^{n-k-1} r cosh^k r dr`,
/// for `x = v sinh r + u cosh r` with `v ∈ S^{n-k-1}`, `u ∈ H^k`.
pub struct HPolarQuadrature {
    n: usize,
    k: usize,
    radial: RadialRule,
    v: SphereQuadrature,
    inner: HkRule,
}

pub fn hpolar_quadrature(n: usize, k: usize, orders: &HOrders) -> Result<HPolarQuadrature> {
    orders.validate()?;
    if n < 2 || k >= n {
        return Err(Error::invalid(format!("need n >= 2 and 0 <= k < n (n={n}, k={k})")));
    }
    if n - k - 1 > 3 {
        return Err(Error::unsupported(format!("S^{} rules are not available", n - k - 1)));
    }
    Ok(HPolarQuadrature {
        n,
        k,
        radial: RadialRule::new(0.0, orders.r_max, orders.panel_nodes),
        v: make_sphere_quadrature(n - k - 1, orders.sphere, false)?,
        inner: HkRule::new(k, orders)?,
    })
}

impl HPolarQuadrature {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.radial.nodes.len() * self.v.len() * self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `∫_{H^n} g(x) dx`.
    pub fn integrate<G: Fn(&[f64]) -> f64 + Sync>(&self, g: G) -> HIntegral {
        let (n, q) = (self.n, self.n - self.k);
        let per_r: Vec<(f64, f64)> = (0..self.radial.nodes.len())
            .into_par_iter()
            .map(|ir| {
                let r = self.radial.nodes[ir];
                let (sh, ch) = (r.sinh(), r.cosh());
                let dnu = self.radial.weights[ir] * sh.powi((q - 1) as i32) * ch.powi(self.k as i32);
                let mut x = vec![0.0; n + 1];
                let mut u = vec![0.0; self.k + 1];
                let mut edge_sum = 0.0;
                let terms: Vec<f64> = (0..self.v.len() * self.inner.len())
                    .map(|j| {
                        let (iv, iu) = (j / self.inner.len(), j % self.inner.len());
                        let (wu, edge) = self.inner.node(iu, &mut u);
                        for (xi, vi) in x.iter_mut().zip(self.v.point(iv)) {
                            *xi = vi * sh;
                        }
                        for (xi, ui) in x[q..].iter_mut().zip(&u) {
                            *xi = ui * ch;
                        }
                        let t = self.v.weight(iv) * wu * g(&x);
                        if edge || self.radial.edge[ir] {
                            edge_sum += t;
                        }
                        t
                    })
                    .collect();
                (dnu * pairwise_sum(&terms), dnu * edge_sum)
            })
            .collect();
        HIntegral {
            value: pairwise_sum_by(per_r.len(), |i| per_r[i].0),
            tail: pairwise_sum_by(per_r.len(), |i| per_r[i].1),
        }
    }

    pub fn integrate_field(&self, f: &HField) -> HIntegral {
        self.integrate(|x| f.eval(x))
    }
}

/// `∫_{η ∈ H^m, [η,ζ] = 0} g(η) dη` for a unit spacelike `ζ ∈ R^{m+1}`: the
/// section is a copy of `H^{m-1}` reached by a Lorentz frame, carrying the
/// image of its standard measure.
pub(crate) fn section_integral<G: Fn(&[f64]) -> f64 + Sync>(g: G, zeta: &[f64], rule: &HkRule) -> Result<HIntegral> {
    let m = zeta.len() - 1;
    if rule.k + 1 != m {
        return Err(Error::invalid("section rule has the wrong dimension"));
    }
    let (t, basis) = section_frame(zeta)?;
    Ok(rule.integrate(|u| {
        // u = (θ sinh s, cosh s) ↦ t cosh s + Σ θ_i sinh s b_i.
        let mut eta: Vec<f64> = t.iter().map(|x| x * u[m - 1]).collect();
        for (b, ui) in basis.iter().zip(u) {
            for (e, bi) in eta.iter_mut().zip(b) {
                *e += ui * bi;
            }
        }
        g(&eta)
    }))
}
