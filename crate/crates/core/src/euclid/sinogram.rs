use crate::error::{Error, Result};
use crate::numkit::{Grid1D, SphereQuadrature};

/// A plane `τ(θ, s; x'') = {sθ + u : u ⊥ θ, u ∈ R^{k+1}} × {x''}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneParam {
    pub theta: Vec<f64>,
    pub s: f64,
    pub xpp: Vec<f64>,
}

impl PlaneParam {
    pub fn new(theta: Vec<f64>, s: f64, xpp: Vec<f64>) -> Result<Self> {
        let r = crate::numkit::norm(&theta);
        if (r - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("theta must be a unit vector, |theta| = {r}")));
        }
        Ok(Self { theta, s, xpp })
    }

    /// Representative of `{(θ, s), (-θ, -s)}` whose first nonzero θ
    /// component is positive.
    pub fn canonical(&self) -> PlaneParam {
        let flip = self.theta.iter().find(|&&t| t != 0.0).is_some_and(|&t| t < 0.0);
        if flip {
            PlaneParam { theta: self.theta.iter().map(|t| -t).collect(), s: -self.s, xpp: self.xpp.clone() }
        } else {
            self.clone()
        }
    }
}

/// Parameter grids of a sinogram: directions on `S^k` (normalized weights),
/// offsets and the product grid of `x''`.
#[derive(Debug, Clone)]
pub struct SinogramGrid {
    pub theta: SphereQuadrature,
    pub s: Grid1D,
    pub xpp: Vec<Grid1D>,
}

impl SinogramGrid {
    pub fn new(theta: SphereQuadrature, s: Grid1D, xpp: Vec<Grid1D>) -> Self {
        let theta = theta.with_normalization(true);
        Self { theta, s, xpp }
    }

    pub fn k(&self) -> usize {
        self.theta.dim()
    }

    pub fn n(&self) -> usize {
        self.k() + 1 + self.xpp.len()
    }

    pub fn xpp_len(&self) -> usize {
        self.xpp.iter().map(|g| g.len()).product()
    }

    pub fn len(&self) -> usize {
        self.theta.len() * self.s.len() * self.xpp_len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn shape(&self) -> Vec<usize> {
        let mut shape = vec![self.theta.len(), self.s.len()];
        shape.extend(self.xpp.iter().map(|g| g.len()));
        shape
    }

    pub fn index(&self, itheta: usize, is: usize, ixpp: usize) -> usize {
        (itheta * self.s.len() + is) * self.xpp_len() + ixpp
    }

    /// Coordinates of the flattened `x''` index.
    pub fn xpp_point(&self, ixpp: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.xpp.len()];
        let mut rem = ixpp;
        for d in (0..self.xpp.len()).rev() {
            let len = self.xpp[d].len();
            out[d] = self.xpp[d].nodes()[rem % len];
            rem /= len;
        }
        out
    }

    pub fn plane(&self, flat: usize) -> PlaneParam {
        let nx = self.xpp_len();
        let ixpp = flat % nx;
        let is = (flat / nx) % self.s.len();
        let itheta = flat / (nx * self.s.len());
        PlaneParam {
            theta: self.theta.point(itheta).to_vec(),
            s: self.s.nodes()[is],
            xpp: self.xpp_point(ixpp),
        }
    }

    /// Flat index of `(-θ, -s, x'')`, if the grids are closed under it.
    pub fn antipode(&self, flat: usize) -> Option<usize> {
        let nx = self.xpp_len();
        let ixpp = flat % nx;
        let is = (flat / nx) % self.s.len();
        let itheta = flat / (nx * self.s.len());
        let js = self.s.mirror_index(is)?;
        Some(self.index(self.theta.antipode(itheta), js, ixpp))
    }

    pub fn is_antipodally_closed(&self) -> bool {
        self.s.is_symmetric()
    }
}

/// Transform values on a [`SinogramGrid`], indexed `(θ, s, x'')` row-major.
#[derive(Debug, Clone)]
pub struct RestrictedSinogram {
    grid: SinogramGrid,
    values: Vec<f64>,
}

impl RestrictedSinogram {
    pub fn new(grid: SinogramGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(format!("{} values for a sinogram grid of {} points", values.len(), grid.len())));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("sinogram contains non-finite values"));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn<F: Fn(&PlaneParam) -> f64>(grid: SinogramGrid, f: F) -> Result<Self> {
        let values = (0..grid.len()).map(|i| f(&grid.plane(i))).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &SinogramGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn k(&self) -> usize {
        self.grid.k()
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    pub fn get(&self, itheta: usize, is: usize, ixpp: usize) -> f64 {
        self.values[self.grid.index(itheta, is, ixpp)]
    }

    /// Samples `φ(θ_i, ·; x''_j)` along the offset grid.
    pub fn s_profile(&self, itheta: usize, ixpp: usize) -> Vec<f64> {
        (0..self.grid.s.len()).map(|is| self.get(itheta, is, ixpp)).collect()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { grid: self.grid.clone(), values: self.values.iter().map(|v| v * factor).collect() }
    }
}
