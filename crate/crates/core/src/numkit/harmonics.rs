use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::reduce::pairwise_sum_by;
use super::sphere::{sigma, SphereQuadrature};
use crate::error::{Error, Result};

/// Coefficients of a field in the real orthonormal harmonic basis of `S^d`
/// (orthonormal for the unnormalized surface measure).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicSpectrum {
    pub sphere_dim: usize,
    pub max_degree: usize,
    /// `coeffs[m][j]`, `j < harmonic_dimension(d, m)`.
    pub coeffs: Vec<Vec<f64>>,
}

/// Dimension of the space of degree-`m` spherical harmonics on `S^d`.
pub fn harmonic_dimension(d: usize, m: usize) -> usize {
    if d == 0 {
        return usize::from(m <= 1);
    }
    let homogeneous = |deg: usize| binomial(deg + d, d);
    if m < 2 {
        homogeneous(m)
    } else {
        homogeneous(m) - homogeneous(m - 2)
    }
}

fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Legendre polynomial `P_m(x)` by the three-term recurrence.
pub fn legendre_p(m: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if m == 0 {
        return 1.0;
    }
    for l in 2..=m {
        let lf = l as f64;
        let p2 = ((2.0 * lf - 1.0) * x * p1 - (lf - 1.0) * p0) / lf;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// `P_m(0)`: zero for odd `m`, `(-1)^{m/2} (m-1)!!/m!!` for even `m`.
pub fn legendre_p_at_zero(m: usize) -> f64 {
    if m % 2 == 1 {
        return 0.0;
    }
    let mut value = 1.0;
    let mut j = 2;
    while j <= m {
        value *= -((j - 1) as f64) / j as f64;
        j += 2;
    }
    value
}

/// Values of every real orthonormal harmonic of degree `<= max_degree` at a
/// unit vector, grouped by degree. Supported on `S^1` and `S^2`.
///
/// Ordering within a degree: index 0 is the zonal (`m = 0`) function, then
/// `cos(mφ)`/`sin(mφ)` pairs at indices `2m-1`, `2m`.
pub fn real_harmonics(d: usize, max_degree: usize, point: &[f64]) -> Result<Vec<Vec<f64>>> {
    if point.len() != d + 1 {
        return Err(Error::invalid(format!("point of length {} is not on S^{d}", point.len())));
    }
    match d {
        1 => Ok(circle_harmonics(max_degree, point)),
        2 => Ok(sphere2_harmonics(max_degree, point)),
        _ => Err(Error::unsupported(format!("spherical harmonics on S^{d} (supported: S^1, S^2)"))),
    }
}

fn circle_harmonics(max_degree: usize, p: &[f64]) -> Vec<Vec<f64>> {
    let phi = p[1].atan2(p[0]);
    let mut out = vec![vec![1.0 / (2.0 * PI).sqrt()]];
    let a = 1.0 / PI.sqrt();
    for m in 1..=max_degree {
        let (s, c) = (m as f64 * phi).sin_cos();
        out.push(vec![a * c, a * s]);
    }
    out
}

fn sphere2_harmonics(max_degree: usize, p: &[f64]) -> Vec<Vec<f64>> {
    let z = p[2].clamp(-1.0, 1.0);
    let rho = (p[0] * p[0] + p[1] * p[1]).sqrt();
    let phi = p[1].atan2(p[0]);
    let big_l = max_degree;
    // pbar[l][m] = sqrt((2l+1)/(4π) (l-m)!/(l+m)!) P_l^m(z), no Condon–Shortley phase.
    let mut pbar = vec![vec![0.0; big_l + 1]; big_l + 1];
    pbar[0][0] = 1.0 / (4.0 * PI).sqrt();
    for m in 1..=big_l {
        let mf = m as f64;
        pbar[m][m] = ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * rho * pbar[m - 1][m - 1];
    }
    for m in 0..big_l {
        pbar[m + 1][m] = (2.0 * m as f64 + 3.0).sqrt() * z * pbar[m][m];
    }
    for m in 0..=big_l {
        let mf = m as f64;
        for l in (m + 2)..=big_l {
            let lf = l as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0).powi(2) - mf * mf) / (4.0 * (lf - 1.0).powi(2) - 1.0)).sqrt();
            pbar[l][m] = a * (z * pbar[l - 1][m] - b * pbar[l - 2][m]);
        }
    }
    let mut out = Vec::with_capacity(big_l + 1);
    for (l, row) in pbar.iter().enumerate() {
        let mut vals = vec![row[0]];
        for (m, pl) in row.iter().enumerate().take(l + 1).skip(1) {
            let (s, c) = (m as f64 * phi).sin_cos();
            vals.push(std::f64::consts::SQRT_2 * pl * c);
            vals.push(std::f64::consts::SQRT_2 * pl * s);
        }
        out.push(vals);
    }
    out
}

/// Projects quadrature samples onto harmonics of degree `<= max_degree`.
/// The quadrature must integrate products of two such harmonics exactly.
pub fn harmonic_analyze(q: &SphereQuadrature, values: &[f64], max_degree: usize) -> Result<HarmonicSpectrum> {
    let needed = 2 * max_degree;
    if q.exact_degree() < needed {
        return Err(Error::AliasingRisk { order: q.exact_degree(), max_degree, needed });
    }
    if values.len() != q.len() {
        return Err(Error::invalid(format!("{} samples for a {}-node quadrature", values.len(), q.len())));
    }
    let d = q.dim();
    let scale = if q.is_normalized() { sigma(d) } else { 1.0 };
    let basis: Vec<Vec<Vec<f64>>> =
        (0..q.len()).map(|i| real_harmonics(d, max_degree, q.point(i))).collect::<Result<_>>()?;
    let coeffs = (0..=max_degree)
        .map(|m| {
            (0..harmonic_dimension(d, m))
                .map(|j| scale * pairwise_sum_by(q.len(), |i| q.weight(i) * values[i] * basis[i][m][j]))
                .collect()
        })
        .collect();
    Ok(HarmonicSpectrum { sphere_dim: d, max_degree, coeffs })
}

/// Evaluates the expansion at a unit vector.
pub fn harmonic_synthesize(spectrum: &HarmonicSpectrum, point: &[f64]) -> Result<f64> {
    let basis = real_harmonics(spectrum.sphere_dim, spectrum.max_degree, point)?;
    let mut acc = 0.0;
    for (cm, ym) in spectrum.coeffs.iter().zip(&basis) {
        for (c, y) in cm.iter().zip(ym) {
            acc += c * y;
        }
    }
    Ok(acc)
}

impl HarmonicSpectrum {
    pub fn zeros(sphere_dim: usize, max_degree: usize) -> Self {
        let coeffs = (0..=max_degree).map(|m| vec![0.0; harmonic_dimension(sphere_dim, m)]).collect();
        Self { sphere_dim, max_degree, coeffs }
    }

    /// `Σ |c|²`, equal to `∫ |f|² dθ` for the synthesized field.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().flatten().map(|c| c * c).sum()
    }

    /// Energy carried by odd degrees.
    pub fn odd_energy(&self) -> f64 {
        self.coeffs.iter().skip(1).step_by(2).flatten().map(|c| c * c).sum()
    }

    /// Samples of the expansion at every node of `q`.
    pub fn synthesize_on(&self, q: &SphereQuadrature) -> Result<Vec<f64>> {
        (0..q.len()).map(|i| harmonic_synthesize(self, q.point(i))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::make_sphere_quadrature;

    #[test]
    fn dimensions() {
        assert_eq!(harmonic_dimension(1, 0), 1);
        assert_eq!(harmonic_dimension(1, 5), 2);
        assert_eq!(harmonic_dimension(2, 3), 7);
        assert_eq!(harmonic_dimension(3, 2), 9);
    }

    #[test]
    fn legendre_at_zero() {
        assert_eq!(legendre_p_at_zero(0), 1.0);
        assert_eq!(legendre_p_at_zero(1), 0.0);
        assert!((legendre_p_at_zero(2) + 0.5).abs() < 1e-16);
        assert!((legendre_p_at_zero(4) - 0.375).abs() < 1e-16);
        for m in 0..12 {
            assert!((legendre_p_at_zero(m) - legendre_p(m, 0.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn orthonormal_on_s2() {
        let q = make_sphere_quadrature(2, 12, false).unwrap();
        let l = 6;
        let basis: Vec<Vec<f64>> =
            (0..q.len()).map(|i| real_harmonics(2, l, q.point(i)).unwrap().concat()).collect();
        let count = basis[0].len();
        assert_eq!(count, (l + 1) * (l + 1));
        for a in 0..count {
            for b in 0..count {
                let g = q.integrate_values(&basis.iter().map(|y| y[a] * y[b]).collect::<Vec<_>>());
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((g - expected).abs() < 1e-12, "a={a} b={b} g={g}");
            }
        }
    }

    #[test]
    fn constant_field_on_s2() {
        let q = make_sphere_quadrature(2, 8, true).unwrap();
        let s = harmonic_analyze(&q, &vec![1.0; q.len()], 4).unwrap();
        assert!((s.coeffs[0][0] - (4.0 * PI).sqrt()).abs() < 1e-12);
        assert!(s.coeffs.iter().skip(1).flatten().all(|c| c.abs() < 1e-12));
    }

    #[test]
    fn linear_field_is_degree_one() {
        let q = make_sphere_quadrature(2, 8, false).unwrap();
        let v: Vec<f64> = q.points().map(|p| p[2]).collect();
        let s = harmonic_analyze(&q, &v, 4).unwrap();
        let deg1: f64 = s.coeffs[1].iter().map(|c| c * c).sum();
        assert!((deg1 - s.energy()).abs() < 1e-12);
        assert!((s.coeffs[1][0] - (4.0 * PI / 3.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn aliasing_guard() {
        let q = make_sphere_quadrature(2, 8, false).unwrap();
        let err = harmonic_analyze(&q, &vec![0.0; q.len()], 5).unwrap_err();
        assert!(matches!(err, Error::AliasingRisk { needed: 10, .. }));
    }

    #[test]
    fn circle_roundtrip() {
        let q = make_sphere_quadrature(1, 16, false).unwrap();
        let v: Vec<f64> = q.points().map(|p| 1.0 + p[0] - 2.0 * p[0] * p[1] + p[1].powi(4)).collect();
        let s = harmonic_analyze(&q, &v, 8).unwrap();
        let back = s.synthesize_on(&q).unwrap();
        for (a, b) in v.iter().zip(&back) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
