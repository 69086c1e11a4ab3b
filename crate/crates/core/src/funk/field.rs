use crate::error::{Error, Result};
use crate::numkit::{dot, harmonic_analyze, harmonic_synthesize, legendre_p, norm, HarmonicSpectrum, SphereQuadrature};

#[derive(Debug, Clone)]
pub enum SphereFieldKind {
    Constant(f64),
    /// `θ · a`; odd, used to check cancellation over subspheres.
    Linear { a: Vec<f64> },
    /// `P_m(θ · axis)`.
    ZonalLegendre { degree: usize, axis: Vec<f64> },
    /// `exp(κ((θ · axis)² - 1))`, even and smooth.
    ZonalGaussian { axis: Vec<f64>, kappa: f64 },
    /// `|θ'|⁻¹ (1 - log|θ'|)⁻¹`, `θ'` the first `n - k` coordinates.
    CounterexampleFtilde { k: usize },
    /// Samples on a quadrature of `S^1` or `S^2`, evaluated off the nodes
    /// through their harmonic expansion.
    Sampled { quadrature: SphereQuadrature, values: Vec<f64>, spectrum: HarmonicSpectrum },
}

/// A function on `S^n ⊂ R^{n+1}`.
#[derive(Debug, Clone)]
pub struct SphereField {
    n: usize,
    kind: SphereFieldKind,
}

fn unit_axis(axis: &[f64], n: usize) -> Result<Vec<f64>> {
    if axis.len() != n + 1 {
        return Err(Error::invalid(format!("axis has {} components, expected {}", axis.len(), n + 1)));
    }
    let r = norm(axis);
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::invalid("axis must be a nonzero finite vector"));
    }
    Ok(axis.iter().map(|x| x / r).collect())
}

impl SphereField {
    pub fn constant(n: usize, c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::invalid("constant must be finite"));
        }
        Ok(Self { n, kind: SphereFieldKind::Constant(c) })
    }

    pub fn linear(n: usize, a: Vec<f64>) -> Result<Self> {
        if a.len() != n + 1 || a.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid(format!("linear coefficients must be {} finite numbers", n + 1)));
        }
        Ok(Self { n, kind: SphereFieldKind::Linear { a } })
    }

    pub fn zonal_legendre(n: usize, degree: usize, axis: &[f64]) -> Result<Self> {
        Ok(Self { n, kind: SphereFieldKind::ZonalLegendre { degree, axis: unit_axis(axis, n)? } })
    }

    pub fn zonal_gaussian(n: usize, axis: &[f64], kappa: f64) -> Result<Self> {
        if !kappa.is_finite() {
            return Err(Error::invalid("kappa must be finite"));
        }
        Ok(Self { n, kind: SphereFieldKind::ZonalGaussian { axis: unit_axis(axis, n)?, kappa } })
    }

    pub fn counterexample_ftilde(n: usize, k: usize) -> Result<Self> {
        if !(1 <= k && k + 1 < n) {
            return Err(Error::invalid(format!("the counterexample needs 1 <= k < n - 1 (n={n}, k={k})")));
        }
        Ok(Self { n, kind: SphereFieldKind::CounterexampleFtilde { k } })
    }

    /// Samples on `S^1` or `S^2`; off-node values come from the expansion up
    /// to half the quadrature's exact degree.
    pub fn sampled(quadrature: SphereQuadrature, values: Vec<f64>) -> Result<Self> {
        let d = quadrature.dim();
        if !(1..=2).contains(&d) {
            return Err(Error::unsupported(format!("sampled sphere fields live on S^1 or S^2, not S^{d}")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("sampled values must be finite"));
        }
        let spectrum = harmonic_analyze(&quadrature, &values, quadrature.exact_degree() / 2)?;
        Ok(Self { n: d, kind: SphereFieldKind::Sampled { quadrature, values, spectrum } })
    }

    /// Field given by a harmonic expansion, stored with its samples on `q`.
    pub(crate) fn from_spectrum(quadrature: SphereQuadrature, spectrum: HarmonicSpectrum) -> Result<Self> {
        let values = spectrum.synthesize_on(&quadrature)?;
        Ok(Self { n: quadrature.dim(), kind: SphereFieldKind::Sampled { quadrature, values, spectrum } })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &SphereFieldKind {
        &self.kind
    }

    /// Whether `∫ |f| |θ'|^{-(n-k-1)} dθ` is finite.
    pub fn is_weighted_integrable(&self) -> bool {
        !matches!(self.kind, SphereFieldKind::CounterexampleFtilde { .. })
    }

    pub fn eval(&self, theta: &[f64]) -> f64 {
        match &self.kind {
            SphereFieldKind::Constant(c) => *c,
            SphereFieldKind::Linear { a } => dot(theta, a),
            SphereFieldKind::ZonalLegendre { degree, axis } => legendre_p(*degree, dot(theta, axis).clamp(-1.0, 1.0)),
            SphereFieldKind::ZonalGaussian { axis, kappa } => {
                let t = dot(theta, axis);
                (kappa * (t * t - 1.0)).exp()
            }
            SphereFieldKind::CounterexampleFtilde { k } => {
                let r = norm(&theta[..self.n - k]);
                if r == 0.0 {
                    f64::INFINITY
                } else {
                    1.0 / (r * (1.0 - r.ln()))
                }
            }
            SphereFieldKind::Sampled { spectrum, .. } => harmonic_synthesize(spectrum, theta).unwrap_or(f64::NAN),
        }
    }
}
