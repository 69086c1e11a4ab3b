use serde::Serialize;

use super::field::ScalarFieldRn;
use super::forward::truncated_integrals;
use super::sinogram::PlaneParam;
use crate::error::Result;

/// Truncated plane integrals over a radius schedule.
#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub strictly_increasing: bool,
    /// `T(last) / T(first)`.
    pub growth_ratio: f64,
    /// `|T(last) - T(previous)| / |T(last)|`, zero when `T(last) = 0`.
    pub last_relative_increment: f64,
    /// Increments shrink monotonically and the last one is below `1e-6 T`.
    pub cauchy: bool,
}

impl ScanReport {
    pub(crate) fn from_values(radii: Vec<f64>, values: Vec<f64>) -> Self {
        let strictly_increasing = values.windows(2).all(|w| w[1] > w[0]);
        let first = values.first().copied().unwrap_or(0.0);
        let last = values.last().copied().unwrap_or(0.0);
        let growth_ratio = if first != 0.0 { last / first } else { 0.0 };
        let incs: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        let last_relative_increment = match incs.last() {
            Some(inc) if last != 0.0 => inc / last.abs(),
            _ => 0.0,
        };
        let shrinking = incs.windows(2).all(|w| w[1] <= w[0]);
        let cauchy = shrinking && last_relative_increment < 1e-6;
        Self { radii, values, strictly_increasing, growth_ratio, last_relative_increment, cauchy }
    }
}

/// Truncated integrals of any field over one plane.
pub fn divergence_scan(f: &ScalarFieldRn, plane: &PlaneParam, schedule: &[f64]) -> Result<ScanReport> {
    let values = truncated_integrals(f, plane, schedule)?;
    Ok(ScanReport::from_values(schedule.to_vec(), values))
}

/// The plane used by [`divergence_scan_f0`]: `θ = e_1`, `s = 1`, `x'' = 0`.
pub fn default_scan_plane(n: usize, k: usize) -> PlaneParam {
    let mut theta = vec![0.0; k + 1];
    theta[0] = 1.0;
    PlaneParam { theta, s: 1.0, xpp: vec![0.0; n - k - 1] }
}

/// Scan of the counterexample family `f_0(p, δ)` on [`default_scan_plane`].
pub fn divergence_scan_f0(n: usize, k: usize, p: f64, delta: f64, schedule: &[f64]) -> Result<ScanReport> {
    let f = ScalarFieldRn::counterexample_f0(n, k, p, delta)?;
    divergence_scan(&f, &default_scan_plane(n, k), schedule)
}
