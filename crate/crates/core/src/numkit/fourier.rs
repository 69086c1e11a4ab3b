use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use super::grid::Grid1D;
use super::reduce::pairwise_sum_by;
use super::EPS_TAIL;
use crate::error::{Error, Result};

/// Unnormalized DFT `X_m = Σ_j x_j e^{sign·2πi jm/N}`. `sign = +1` matches
/// the kernel `e^{+ixy}`; the `-1` transform divided by `N` inverts it.
pub fn dft_1d(samples: &[Complex64], sign: i32) -> Result<Vec<Complex64>> {
    if samples.len() < 2 {
        return Err(Error::invalid(format!("DFT length must be >= 2, got {}", samples.len())));
    }
    let direction = match sign {
        1 => FftDirection::Inverse,
        -1 => FftDirection::Forward,
        _ => return Err(Error::invalid(format!("DFT sign must be +1 or -1, got {sign}"))),
    };
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft(samples.len(), direction);
    let mut buf = samples.to_vec();
    fft.process(&mut buf);
    Ok(buf)
}

/// Quadrature values of `∫ f(x) e^{ixy} dx` at requested frequencies.
#[derive(Debug, Clone)]
pub struct FourierSamples {
    pub values: Vec<Complex64>,
    /// Largest endpoint magnitude relative to the peak of `|f|`.
    pub tail_ratio: f64,
    /// Set when `tail_ratio` exceeds [`EPS_TAIL`]: the grid does not cover
    /// the numerical support and the values are truncated integrals.
    pub truncation_warning: bool,
}

fn tail_ratio(values: &[f64]) -> f64 {
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return 0.0;
    }
    let ends = values[0].abs().max(values[values.len() - 1].abs());
    ends / peak
}

/// `Σ_i w_i f(x_i) e^{i x_i y}` for each `y` in `frequencies`.
pub fn continuous_ft_1d(grid: &Grid1D, values: &[f64], frequencies: &[f64]) -> Result<FourierSamples> {
    if values.len() != grid.len() {
        return Err(Error::invalid(format!(
            "sample count {} does not match grid length {}",
            values.len(),
            grid.len()
        )));
    }
    let x = grid.nodes();
    let w = grid.weights();
    let out = frequencies
        .iter()
        .map(|&y| {
            let re = pairwise_sum_by(x.len(), |i| w[i] * values[i] * (x[i] * y).cos());
            let im = pairwise_sum_by(x.len(), |i| w[i] * values[i] * (x[i] * y).sin());
            Complex64::new(re, im)
        })
        .collect();
    let tail = tail_ratio(values);
    Ok(FourierSamples { values: out, tail_ratio: tail, truncation_warning: tail > EPS_TAIL })
}

/// The same quadrature sum evaluated on the whole frequency lattice
/// `η_m = 2πm/(P h)`, `m = -P/2 .. P/2-1`, by one zero-padded FFT.
#[derive(Debug, Clone)]
pub struct LatticeSpectrum {
    step: f64,
    half: usize,
    values: Vec<Complex64>,
    pub tail_ratio: f64,
    pub truncation_warning: bool,
}

pub fn continuous_ft_lattice(grid: &Grid1D, values: &[f64], padded_len: usize) -> Result<LatticeSpectrum> {
    let h = grid
        .spacing()
        .ok_or_else(|| Error::invalid("lattice Fourier transform needs a uniform grid"))?;
    let n = grid.len();
    if values.len() != n {
        return Err(Error::invalid(format!("sample count {} does not match grid length {n}", values.len())));
    }
    if padded_len < n || !padded_len.is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "padded length {padded_len} must be even and at least the grid length {n}"
        )));
    }
    let mut buf = vec![Complex64::new(0.0, 0.0); padded_len];
    for (i, (w, f)) in grid.weights().iter().zip(values).enumerate() {
        buf[i] = Complex64::new(w * f, 0.0);
    }
    let spec = dft_1d(&buf, 1)?;
    let step = 2.0 * std::f64::consts::PI / (padded_len as f64 * h);
    let x0 = grid.nodes()[0];
    let half = padded_len / 2;
    let mut out = Vec::with_capacity(padded_len);
    for k in 0..padded_len {
        let m = k as i64 - half as i64;
        let idx = m.rem_euclid(padded_len as i64) as usize;
        let eta = m as f64 * step;
        out.push(spec[idx] * Complex64::from_polar(1.0, x0 * eta));
    }
    let tail = tail_ratio(values);
    Ok(LatticeSpectrum { step, half, values: out, tail_ratio: tail, truncation_warning: tail > EPS_TAIL })
}

impl LatticeSpectrum {
    /// Frequency spacing `2π/(P h)`.
    pub fn step(&self) -> f64 {
        self.step
    }

    /// Largest lattice frequency available on both sides.
    pub fn max_frequency(&self) -> f64 {
        (self.half - 1) as f64 * self.step
    }

    pub fn frequencies(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(move |k| (k as f64 - self.half as f64) * self.step)
    }

    /// Spectrum values in ascending frequency order.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Value at lattice frequency `m·step`.
    pub fn at(&self, m: i64) -> Option<Complex64> {
        let k = m + self.half as i64;
        (k >= 0 && (k as usize) < self.values.len()).then(|| self.values[k as usize])
    }

    /// Linear interpolation between lattice frequencies; zero beyond the
    /// lattice.
    pub fn interpolate(&self, eta: f64) -> Complex64 {
        let t = eta / self.step + self.half as f64;
        if t < 0.0 || t > (self.values.len() - 1) as f64 {
            return Complex64::new(0.0, 0.0);
        }
        let i = (t.floor() as usize).min(self.values.len() - 2);
        let frac = t - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }
}
