use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{cubic_stencil, norm};

/// Uniform axis `lo + i (hi - lo)/(count - 1)`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxAxis {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl BoxAxis {
    pub fn new(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || hi <= lo || count < 2 {
            return Err(Error::invalid(format!("axis [{lo}, {hi}] with {count} points is degenerate")));
        }
        Ok(Self { lo, hi, count })
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.count - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.hi
        } else {
            self.lo + i as f64 * self.spacing()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.node(i)).collect()
    }
}

/// Samples on a box in `R^n`, row-major with the last axis fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledBox {
    axes: Vec<BoxAxis>,
    values: Vec<f64>,
}

impl SampledBox {
    pub fn new(axes: Vec<BoxAxis>, values: Vec<f64>) -> Result<Self> {
        let expected: usize = axes.iter().map(|a| a.count).product();
        if axes.is_empty() || values.len() != expected {
            return Err(Error::invalid(format!(
                "{} samples do not match box shape {:?}",
                values.len(),
                axes.iter().map(|a| a.count).collect::<Vec<_>>()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("sampled field contains non-finite values"));
        }
        Ok(Self { axes, values })
    }

    pub fn from_fn<F: Fn(&[f64]) -> f64>(axes: Vec<BoxAxis>, f: F) -> Result<Self> {
        let shape: Vec<usize> = axes.iter().map(|a| a.count).collect();
        let total: usize = shape.iter().product();
        let mut values = Vec::with_capacity(total);
        let mut x = vec![0.0; axes.len()];
        for flat in 0..total {
            let mut rem = flat;
            for d in (0..axes.len()).rev() {
                x[d] = axes[d].node(rem % shape[d]);
                rem /= shape[d];
            }
            values.push(f(&x));
        }
        Self::new(axes, values)
    }

    pub fn axes(&self) -> &[BoxAxis] {
        &self.axes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.count).collect()
    }

    /// Tensor cubic interpolation; zero outside the box.
    pub fn eval(&self, x: &[f64]) -> f64 {
        let dims = self.axes.len();
        let mut stencils = Vec::with_capacity(dims);
        for (a, &xi) in self.axes.iter().zip(x) {
            match cubic_stencil(a.lo, a.spacing(), a.count, xi) {
                Some(s) => stencils.push(s),
                None => return 0.0,
            }
        }
        let mut strides = vec![1usize; dims];
        for d in (0..dims.saturating_sub(1)).rev() {
            strides[d] = strides[d + 1] * self.axes[d + 1].count;
        }
        let mut acc = 0.0;
        let terms = 4usize.pow(dims as u32);
        'outer: for t in 0..terms {
            let mut w = 1.0;
            let mut idx = 0;
            let mut rem = t;
            for d in (0..dims).rev() {
                let j = rem % 4;
                rem /= 4;
                let wd = stencils[d].weights[j];
                if wd == 0.0 {
                    continue 'outer;
                }
                w *= wd;
                idx += (stencils[d].start + j) * strides[d];
            }
            acc += w * self.values[idx];
        }
        acc
    }
}

/// A real field on `R^n` split as `x = (x', x'')`, `x' ∈ R^{k+1}`.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldRn {
    /// `exp(-|x - center|² / width²)`.
    Gaussian { center: Vec<f64>, width: f64 },
    /// `(2+|x'|)^{-(k+1)/p} e^{-|x''|²} / log^{1/p+δ}(2+|x'|)`.
    CounterexampleF0 { p: f64, delta: f64 },
    Sampled(SampledBox),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarFieldRn {
    n: usize,
    k: usize,
    kind: FieldRn,
}

impl ScalarFieldRn {
    pub fn new(n: usize, k: usize, kind: FieldRn) -> Result<Self> {
        if k < 1 || k + 1 > n {
            return Err(Error::invalid(format!("plane dimension k={k} must satisfy 1 <= k <= n-1 (n={n})")));
        }
        match &kind {
            FieldRn::Gaussian { center, width } => {
                if center.len() != n {
                    return Err(Error::invalid(format!("gaussian center has {} coordinates, n={n}", center.len())));
                }
                if !(*width > 0.0 && width.is_finite()) || center.iter().any(|c| !c.is_finite()) {
                    return Err(Error::invalid("gaussian width must be positive and center finite"));
                }
            }
            FieldRn::CounterexampleF0 { p, delta } => {
                if !(*p >= 1.0 && p.is_finite()) {
                    return Err(Error::invalid(format!("exponent p must be >= 1, got {p}")));
                }
                // 1/p' = 1 - 1/p.
                let inv_conj = 1.0 - 1.0 / p;
                if !(*delta > 0.0 && *delta < inv_conj) {
                    return Err(Error::invalid(format!(
                        "delta must lie in (0, 1/p') = (0, {inv_conj}), got {delta}"
                    )));
                }
            }
            FieldRn::Sampled(b) => {
                if b.axes().len() != n {
                    return Err(Error::invalid(format!("sampled box has {} axes, n={n}", b.axes().len())));
                }
            }
        }
        Ok(Self { n, k, kind })
    }

    pub fn gaussian(n: usize, k: usize, center: Vec<f64>, width: f64) -> Result<Self> {
        Self::new(n, k, FieldRn::Gaussian { center, width })
    }

    pub fn counterexample_f0(n: usize, k: usize, p: f64, delta: f64) -> Result<Self> {
        Self::new(n, k, FieldRn::CounterexampleF0 { p, delta })
    }

    pub fn sampled(n: usize, k: usize, samples: SampledBox) -> Result<Self> {
        Self::new(n, k, FieldRn::Sampled(samples))
    }

    pub fn zero(n: usize, k: usize) -> Result<Self> {
        let axes = vec![BoxAxis::new(-1.0, 1.0, 2)?; n];
        Self::sampled(n, k, SampledBox::new(axes, vec![0.0; 1 << n])?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kind(&self) -> &FieldRn {
        &self.kind
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match &self.kind {
            FieldRn::Gaussian { center, width } => {
                let r2: f64 = x.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum();
                (-r2 / (width * width)).exp()
            }
            FieldRn::CounterexampleF0 { p, delta } => {
                let (xp, xpp) = x.split_at(self.k + 1);
                f0_profile(norm(xp), self.k, *p, *delta) * (-xpp.iter().map(|t| t * t).sum::<f64>()).exp()
            }
            FieldRn::Sampled(b) => b.eval(x),
        }
    }

    /// Radius in `x'` beyond which the field is negligible (below `1e-12`
    /// relative) or zero; `None` for fields without effective support.
    pub fn support_radius_xp(&self) -> Option<f64> {
        let kp = self.k + 1;
        match &self.kind {
            FieldRn::Gaussian { center, width } => Some(norm(&center[..kp]) + 6.0 * width),
            FieldRn::CounterexampleF0 { .. } => None,
            FieldRn::Sampled(b) => {
                let r2: f64 = b.axes()[..kp].iter().map(|a| a.lo.abs().max(a.hi.abs()).powi(2)).sum();
                Some(r2.sqrt())
            }
        }
    }
}

pub(crate) fn f0_profile(r: f64, k: usize, p: f64, delta: f64) -> f64 {
    let a = 2.0 + r;
    a.powf(-((k + 1) as f64) / p) / a.ln().powf(1.0 / p + delta)
}
