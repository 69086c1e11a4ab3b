use std::f64::consts::PI;

use super::grid::gauss_legendre_unit;
use super::reduce::pairwise_sum_by;
use crate::error::{Error, Result};

/// Surface area of the unit sphere `S^d ⊂ R^{d+1}`,
/// `2 π^{(d+1)/2} / Γ((d+1)/2)`.
pub fn sphere_surface_area(d: i64) -> Result<f64> {
    if d < 0 {
        return Err(Error::invalid(format!("sphere dimension must be >= 0, got {d}")));
    }
    // σ_0 = 2, σ_1 = 2π, σ_d = 2π σ_{d-2} / (d - 1).
    let mut area = if d % 2 == 0 { 2.0 } else { 2.0 * PI };
    let mut k = if d % 2 == 0 { 0 } else { 1 };
    while k < d {
        k += 2;
        area *= 2.0 * PI / (k - 1) as f64;
    }
    Ok(area)
}

pub(crate) fn sigma(d: usize) -> f64 {
    sphere_surface_area(d as i64).expect("non-negative dimension")
}

/// Index structure of a product quadrature, used by consumers that need to
/// difference or interpolate across neighbouring nodes.
#[derive(Debug, Clone, PartialEq)]
pub enum SphereLayout {
    /// `S^0 = {-1, +1}`.
    Poles,
    /// Equispaced angles `2πj/count` on `S^1`, ascending.
    Circle { count: usize },
    /// `S^2`: Gauss–Legendre rings in the last coordinate times equispaced
    /// azimuths; index = ring * azimuths + j.
    Rings { z: Vec<f64>, azimuths: usize },
    /// `S^3` in Hopf coordinates
    /// `(√(1-u) cos a, √(1-u) sin a, √u cos b, √u sin b)`;
    /// index = (iu * azimuths + ia) * azimuths + ib.
    Hopf { u: Vec<f64>, azimuths: usize },
}

/// Nodes and weights realizing integration over `S^d`.
#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    dim: usize,
    points: Vec<f64>,
    weights: Vec<f64>,
    normalized: bool,
    exact_degree: usize,
    antipode: Vec<usize>,
    layout: SphereLayout,
}

/// Product rule on `S^d` (d ≤ 3) exact for polynomials of total degree
/// `<= order`. Periodic angles use the smallest even count exceeding `order`
/// so that the node set is closed under `p -> -p`.
pub fn make_sphere_quadrature(d: usize, order: usize, normalized: bool) -> Result<SphereQuadrature> {
    if d > 3 {
        return Err(Error::unsupported(format!("sphere quadrature for S^{d} (supported: d <= 3)")));
    }
    if order < 2 && d > 0 {
        return Err(Error::invalid(format!("quadrature order must be >= 2, got {order}")));
    }
    let azimuths = if (order + 1).is_multiple_of(2) { order + 1 } else { order + 2 };
    let mut q = match d {
        0 => poles(),
        1 => circle(azimuths),
        2 => rings(order, azimuths),
        _ => hopf(order, azimuths),
    };
    if normalized {
        q.normalize();
    }
    Ok(q)
}

fn poles() -> SphereQuadrature {
    SphereQuadrature {
        dim: 0,
        points: vec![1.0, -1.0],
        weights: vec![1.0, 1.0],
        normalized: false,
        exact_degree: usize::MAX,
        antipode: vec![1, 0],
        layout: SphereLayout::Poles,
    }
}

/// Unit circle with `count` (even) equispaced nodes.
fn circle(count: usize) -> SphereQuadrature {
    let (cos, sin) = half_turn_table(count);
    let mut points = Vec::with_capacity(2 * count);
    for j in 0..count {
        points.push(cos[j]);
        points.push(sin[j]);
    }
    let w = 2.0 * PI / count as f64;
    SphereQuadrature {
        dim: 1,
        points,
        weights: vec![w; count],
        normalized: false,
        exact_degree: count - 1,
        antipode: (0..count).map(|j| (j + count / 2) % count).collect(),
        layout: SphereLayout::Circle { count },
    }
}

// cos/sin of 2πj/count with the second half written as exact negations.
fn half_turn_table(count: usize) -> (Vec<f64>, Vec<f64>) {
    debug_assert!(count.is_multiple_of(2));
    let half = count / 2;
    let mut cos = vec![0.0; count];
    let mut sin = vec![0.0; count];
    for j in 0..half {
        let a = 2.0 * PI * j as f64 / count as f64;
        let (s, c) = a.sin_cos();
        cos[j] = c;
        sin[j] = s;
        cos[j + half] = -c;
        sin[j + half] = -s;
    }
    (cos, sin)
}

fn rings(order: usize, azimuths: usize) -> SphereQuadrature {
    let nz = (order + 2) / 2;
    let (z, wz) = gauss_legendre_unit(nz);
    let (cos, sin) = half_turn_table(azimuths);
    let wa = 2.0 * PI / azimuths as f64;
    let mut points = Vec::with_capacity(3 * nz * azimuths);
    let mut weights = Vec::with_capacity(nz * azimuths);
    let mut antipode = Vec::with_capacity(nz * azimuths);
    for (i, (&zi, &wi)) in z.iter().zip(&wz).enumerate() {
        let r = (1.0 - zi * zi).sqrt();
        for j in 0..azimuths {
            points.extend_from_slice(&[r * cos[j], r * sin[j], zi]);
            weights.push(wi * wa);
            antipode.push((nz - 1 - i) * azimuths + (j + azimuths / 2) % azimuths);
        }
    }
    SphereQuadrature {
        dim: 2,
        points,
        weights,
        normalized: false,
        exact_degree: order,
        antipode,
        layout: SphereLayout::Rings { z, azimuths },
    }
}

fn hopf(order: usize, azimuths: usize) -> SphereQuadrature {
    // After both azimuthal integrations a degree-`order` monomial becomes a
    // polynomial of degree <= order/2 in u ∈ [0, 1] with unit density.
    let nu = (order / 2) / 2 + 1;
    let (t, wt) = gauss_legendre_unit(nu);
    let u: Vec<f64> = t.iter().map(|x| 0.5 * (1.0 + x)).collect();
    let wu: Vec<f64> = wt.iter().map(|w| 0.5 * w).collect();
    let (cos, sin) = half_turn_table(azimuths);
    let wa = 2.0 * PI / azimuths as f64;
    let m = azimuths;
    let mut points = Vec::with_capacity(4 * nu * m * m);
    let mut weights = Vec::with_capacity(nu * m * m);
    let mut antipode = Vec::with_capacity(nu * m * m);
    for (iu, (&ui, &wi)) in u.iter().zip(&wu).enumerate() {
        let ra = (1.0 - ui).sqrt();
        let rb = ui.sqrt();
        for ia in 0..m {
            for ib in 0..m {
                points.extend_from_slice(&[ra * cos[ia], ra * sin[ia], rb * cos[ib], rb * sin[ib]]);
                weights.push(0.5 * wi * wa * wa);
                antipode.push((iu * m + (ia + m / 2) % m) * m + (ib + m / 2) % m);
            }
        }
    }
    SphereQuadrature {
        dim: 3,
        points,
        weights,
        normalized: false,
        exact_degree: order,
        antipode,
        layout: SphereLayout::Hopf { u, azimuths },
    }
}

impl SphereQuadrature {
    /// Circle rule with exactly `count` equispaced directions (`count` even).
    pub fn circle(count: usize, normalized: bool) -> Result<Self> {
        if count < 2 || !count.is_multiple_of(2) {
            return Err(Error::invalid(format!("circle rule needs an even count >= 2, got {count}")));
        }
        let mut q = circle(count);
        if normalized {
            q.normalize();
        }
        Ok(q)
    }

    fn normalize(&mut self) {
        let total = sigma(self.dim);
        for w in &mut self.weights {
            *w /= total;
        }
        self.normalized = true;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        let s = self.dim + 1;
        &self.points[i * s..(i + 1) * s]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.points.chunks_exact(self.dim + 1)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Highest total polynomial degree integrated exactly.
    pub fn exact_degree(&self) -> usize {
        self.exact_degree
    }

    /// Index of the node `-p_i`.
    pub fn antipode(&self, i: usize) -> usize {
        self.antipode[i]
    }

    pub fn layout(&self) -> &SphereLayout {
        &self.layout
    }

    /// Sum of weights: 1 when normalized, `σ_d` otherwise.
    pub fn total_weight(&self) -> f64 {
        pairwise_sum_by(self.len(), |i| self.weights[i])
    }

    pub fn integrate<F: Fn(&[f64]) -> f64>(&self, f: F) -> f64 {
        pairwise_sum_by(self.len(), |i| self.weights[i] * f(self.point(i)))
    }

    pub fn integrate_values(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len());
        pairwise_sum_by(self.len(), |i| self.weights[i] * values[i])
    }

    /// The same nodes with weights rescaled to the other measure.
    pub fn with_normalization(&self, normalized: bool) -> Self {
        let mut q = self.clone();
        if normalized != self.normalized {
            let factor = if normalized { 1.0 / sigma(self.dim) } else { sigma(self.dim) };
            for w in &mut q.weights {
                *w *= factor;
            }
            q.normalized = normalized;
        }
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surface_areas() {
        assert!((sphere_surface_area(0).unwrap() - 2.0).abs() < 1e-15);
        assert!((sphere_surface_area(1).unwrap() - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_surface_area(2).unwrap() - 4.0 * PI).abs() < 1e-14);
        assert!((sphere_surface_area(3).unwrap() - 2.0 * PI * PI).abs() < 1e-13);
        assert!(matches!(sphere_surface_area(-1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn surface_area_matches_gamma_formula() {
        for d in 0..12i64 {
            let x = (d + 1) as f64 / 2.0;
            let expected = 2.0 * PI.powf(x) / libm::tgamma(x);
            let got = sphere_surface_area(d).unwrap();
            assert!((got - expected).abs() <= 1e-13 * expected, "d={d}");
        }
    }

    #[test]
    fn unit_points_and_weights() {
        for d in 0..=3 {
            for &normalized in &[false, true] {
                let q = make_sphere_quadrature(d, 9, normalized).unwrap();
                for p in q.points() {
                    let r: f64 = p.iter().map(|x| x * x).sum::<f64>().sqrt();
                    assert!((r - 1.0).abs() < 1e-12);
                }
                let expected = if normalized { 1.0 } else { sigma(d) };
                assert!((q.total_weight() - expected).abs() <= 1e-10 * expected);
                for i in 0..q.len() {
                    let j = q.antipode(i);
                    let (a, b) = (q.point(i), q.point(j));
                    assert!(a.iter().zip(b).all(|(x, y)| *x == -*y));
                    assert_eq!(q.weight(i), q.weight(j));
                }
            }
        }
    }

    #[test]
    fn unsupported_dimension() {
        assert!(matches!(make_sphere_quadrature(4, 8, true), Err(Error::UnsupportedDimension(_))));
    }

    #[test]
    fn normalized_circle_of_eight_points() {
        let q = SphereQuadrature::circle(8, true).unwrap();
        assert_eq!(q.len(), 8);
        assert!(q.weights().iter().all(|&w| (w - 0.125).abs() < 1e-16));
        for j in 0..8 {
            let a = 2.0 * PI * j as f64 / 8.0;
            assert!((q.point(j)[0] - a.cos()).abs() < 1e-15);
            assert!((q.point(j)[1] - a.sin()).abs() < 1e-15);
        }
    }
}
