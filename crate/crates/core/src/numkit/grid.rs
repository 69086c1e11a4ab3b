use serde::{Deserialize, Serialize};

use super::reduce::pairwise_sum_by;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridKind {
    UniformTrapezoid,
    GaussLegendre,
    UniformPeriodic,
}

/// Abscissae with quadrature weights on an interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    kind: GridKind,
    lo: f64,
    hi: f64,
}

/// Gauss–Legendre nodes and weights on [-1, 1], nodes ascending and exactly
/// antisymmetric (`x[n-1-i] == -x[i]`).
pub fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        // Tricomi initial guess, then Newton on P_n.
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        dp = if d != 0.0 { d } else { dp };
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        // z is descending in i; store ascending.
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

impl Grid1D {
    /// Equispaced nodes including both endpoints, trapezoid weights.
    pub fn uniform_trapezoid(lo: f64, hi: f64, n: usize) -> Result<Self> {
        check_interval(lo, hi, n, 2)?;
        let h = (hi - lo) / (n - 1) as f64;
        let mut nodes: Vec<f64> = (0..n).map(|i| lo + i as f64 * h).collect();
        nodes[n - 1] = hi;
        symmetrize(&mut nodes, lo, hi);
        let mut weights = vec![h; n];
        weights[0] = 0.5 * h;
        weights[n - 1] = 0.5 * h;
        Ok(Self { nodes, weights, kind: GridKind::UniformTrapezoid, lo, hi })
    }

    /// Gauss–Legendre rule with `n` nodes mapped to [lo, hi].
    pub fn gauss_legendre(lo: f64, hi: f64, n: usize) -> Result<Self> {
        check_interval(lo, hi, n, 1)?;
        let (x, w) = gauss_legendre_unit(n);
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let mut nodes: Vec<f64> = x.iter().map(|t| mid + half * t).collect();
        symmetrize(&mut nodes, lo, hi);
        let weights = w.iter().map(|wi| half * wi).collect();
        Ok(Self { nodes, weights, kind: GridKind::GaussLegendre, lo, hi })
    }

    /// `n` equispaced nodes on the period [lo, hi), equal weights.
    pub fn uniform_periodic(lo: f64, hi: f64, n: usize) -> Result<Self> {
        check_interval(lo, hi, n, 2)?;
        let h = (hi - lo) / n as f64;
        let nodes = (0..n).map(|i| lo + i as f64 * h).collect();
        Ok(Self { nodes, weights: vec![h; n], kind: GridKind::UniformPeriodic, lo, hi })
    }

    /// Composite Gauss–Legendre rule: `panels` equal panels with `per_panel`
    /// nodes each.
    pub fn composite_gauss_legendre(lo: f64, hi: f64, panels: usize, per_panel: usize) -> Result<Self> {
        check_interval(lo, hi, panels.max(1), 1)?;
        if panels == 0 || per_panel == 0 {
            return Err(Error::invalid("composite rule needs at least one panel and one node"));
        }
        let (x, w) = gauss_legendre_unit(per_panel);
        let width = (hi - lo) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * per_panel);
        let mut weights = Vec::with_capacity(panels * per_panel);
        for p in 0..panels {
            let a = lo + p as f64 * width;
            let mid = a + 0.5 * width;
            for (t, wi) in x.iter().zip(&w) {
                nodes.push(mid + 0.5 * width * t);
                weights.push(0.5 * width * wi);
            }
        }
        symmetrize(&mut nodes, lo, hi);
        Ok(Self { nodes, weights, kind: GridKind::GaussLegendre, lo, hi })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// Node spacing for the uniform kinds.
    pub fn spacing(&self) -> Option<f64> {
        match self.kind {
            GridKind::UniformTrapezoid => Some((self.hi - self.lo) / (self.len() - 1) as f64),
            GridKind::UniformPeriodic => Some((self.hi - self.lo) / self.len() as f64),
            GridKind::GaussLegendre => None,
        }
    }

    pub fn is_uniform(&self) -> bool {
        self.spacing().is_some()
    }

    /// Index of the node at `-x_i`, when the grid is mirror-symmetric.
    pub fn mirror_index(&self, i: usize) -> Option<usize> {
        let j = self.len() - 1 - i;
        (self.nodes[j] == -self.nodes[i]).then_some(j)
    }

    /// True when every node has its exact negation in the grid.
    pub fn is_symmetric(&self) -> bool {
        (0..self.len()).all(|i| self.mirror_index(i).is_some())
    }

    /// Weighted sum of samples, pairwise reduced.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len());
        pairwise_sum_by(self.len(), |i| self.weights[i] * values[i])
    }

    pub fn integrate_fn<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        pairwise_sum_by(self.len(), |i| self.weights[i] * f(self.nodes[i]))
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.nodes[0] && x <= self.nodes[self.len() - 1]
    }
}

fn check_interval(lo: f64, hi: f64, n: usize, min_n: usize) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
        return Err(Error::invalid(format!("grid interval [{lo}, {hi}] is empty or not finite")));
    }
    if n < min_n {
        return Err(Error::invalid(format!("grid needs at least {min_n} nodes, got {n}")));
    }
    Ok(())
}

// Forces exact antisymmetry on intervals centred at the origin.
fn symmetrize(nodes: &mut [f64], lo: f64, hi: f64) {
    if lo != -hi {
        return;
    }
    let n = nodes.len();
    for i in 0..n / 2 {
        nodes[n - 1 - i] = -nodes[i];
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
}
