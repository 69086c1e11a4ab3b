use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use igt_core::euclid::{BoxAxis, ScalarFieldRn, SampledBox, SinogramGrid};
use igt_core::funk::SphereField;
use igt_core::hyperbolic::{HField, HOrders, HPoint};
use igt_core::io::read_grid;
use igt_core::numkit::{make_sphere_quadrature, Grid1D, SphereQuadrature};

/// A parsed config plus the directory relative paths are resolved against.
pub struct Loaded<T> {
    pub config: T,
    pub raw: serde_json::Value,
    pub base: PathBuf,
    pub sha256: String,
}

/// Reads a JSON config, rejecting unknown keys and naming the offending one.
pub fn load<T: DeserializeOwned>(path: &Path) -> CliResult<Loaded<T>> {
    let bytes = match fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(CliError::precondition(format!("config {} does not exist", path.display())).with_key("--config"))
        }
        Err(e) => return Err(CliError::io(format!("cannot read {}: {e}", path.display()))),
    };
    let text = std::str::from_utf8(&bytes).map_err(|e| CliError::precondition(format!("config is not UTF-8: {e}")))?;
    let raw: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::precondition(format!("config is not valid JSON: {e}")))?;
    let mut de = serde_json::Deserializer::from_str(text);
    let config: T = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let message = e.inner().to_string();
        let mut key = e.path().to_string();
        // Unknown and missing keys are reported by name inside the message.
        if let Some(name) = backticked(&message).filter(|_| message.starts_with("unknown field") || message.starts_with("missing field")) {
            key = if key == "." || message.starts_with("missing field") && !key.ends_with(&name) {
                if key == "." { name } else { format!("{key}.{name}") }
            } else if key.ends_with(&name) {
                key
            } else {
                format!("{key}.{name}")
            };
        }
        CliError::precondition(format!("config: {message}")).with_key(key)
    })?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(Loaded { config, raw, base, sha256: crate::output::sha256_hex(&bytes) })
}

fn backticked(message: &str) -> Option<String> {
    let start = message.find('`')? + 1;
    let len = message[start..].find('`')?;
    Some(message[start..start + len].to_string())
}

pub fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

pub fn bad(key: &str, message: impl Into<String>) -> CliError {
    CliError::precondition(message).with_key(key)
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl AxisSpec {
    pub fn to_axis(self, key: &str) -> CliResult<BoxAxis> {
        BoxAxis::new(self.lo, self.hi, self.count).map_err(|e| bad(key, e.to_string()))
    }
}

/// Grid of a Euclidean restricted sinogram: directions on `S^k`, a
/// symmetric uniform offset grid, and one uniform grid per `x''` axis.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EuclidGridSpec {
    pub n: usize,
    pub k: usize,
    /// Number of angles for `k = 1`; exactness order of the product rule
    /// for `k = 2, 3`.
    pub directions: usize,
    pub s_half: f64,
    pub s_points: usize,
    #[serde(default)]
    pub xpp_half: f64,
    #[serde(default)]
    pub xpp_points: usize,
}

fn one() -> usize {
    1
}

impl EuclidGridSpec {
    pub fn build(&self, key: &str) -> CliResult<SinogramGrid> {
        if !(1..=3).contains(&self.k) || self.k + 1 > self.n {
            return Err(bad(&format!("{key}.k"), format!("need 1 <= k <= min(3, n-1), got n={}, k={}", self.n, self.k)));
        }
        if !self.s_points.is_power_of_two() || self.s_points < 8 {
            return Err(bad(&format!("{key}.s_points"), format!("s_points must be a power of two >= 8, got {}", self.s_points)));
        }
        if !(self.s_half > 0.0 && self.s_half.is_finite()) {
            return Err(bad(&format!("{key}.s_half"), "s_half must be positive"));
        }
        let theta = if self.k == 1 {
            if self.directions < 4 || !self.directions.is_multiple_of(2) {
                return Err(bad(&format!("{key}.directions"), "k = 1 needs an even number of angles >= 4"));
            }
            SphereQuadrature::circle(self.directions, true)
        } else {
            make_sphere_quadrature(self.k, self.directions, true)
        }
        .map_err(|e| bad(&format!("{key}.directions"), e.to_string()))?;
        let s = Grid1D::uniform_trapezoid(-self.s_half, self.s_half, self.s_points)?;
        let extra = self.n - self.k - 1;
        let mut xpp = Vec::with_capacity(extra);
        for _ in 0..extra {
            if !(self.xpp_half > 0.0 && self.xpp_half.is_finite()) || self.xpp_points < 2 {
                return Err(bad(
                    &format!("{key}.xpp_points"),
                    format!("n - k - 1 = {extra} needs xpp_half > 0 and xpp_points >= 2"),
                ));
            }
            xpp.push(Grid1D::uniform_trapezoid(-self.xpp_half, self.xpp_half, self.xpp_points)?);
        }
        Ok(SinogramGrid::new(theta, s, xpp))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum EuclidFieldSpec {
    Gaussian {
        #[serde(default)]
        center: Option<Vec<f64>>,
        #[serde(default = "unit")]
        width: f64,
    },
    F0 { p: f64, delta: f64 },
    Zero,
    /// Samples read from an RGRD file on a box with the given axes.
    Sampled { path: PathBuf, axes: Vec<AxisSpec> },
}

fn unit() -> f64 {
    1.0
}

impl EuclidFieldSpec {
    pub fn build(&self, n: usize, k: usize, base: &Path, key: &str) -> CliResult<ScalarFieldRn> {
        let wrap = |e: igt_core::Error| bad(key, e.to_string());
        match self {
            EuclidFieldSpec::Gaussian { center, width } => {
                ScalarFieldRn::gaussian(n, k, center.clone().unwrap_or_else(|| vec![0.0; n]), *width).map_err(wrap)
            }
            EuclidFieldSpec::F0 { p, delta } => ScalarFieldRn::counterexample_f0(n, k, *p, *delta).map_err(wrap),
            EuclidFieldSpec::Zero => ScalarFieldRn::zero(n, k).map_err(wrap),
            EuclidFieldSpec::Sampled { path, axes } => {
                let data = read_grid(resolve(base, path))?;
                let axes = axes
                    .iter()
                    .map(|a| a.to_axis(&format!("{key}.axes")))
                    .collect::<CliResult<Vec<_>>>()?;
                let expect: Vec<usize> = axes.iter().map(|a| a.count).collect();
                if data.dims() != expect.as_slice() {
                    return Err(bad(&format!("{key}.path"), format!("grid dims {:?} do not match axes {expect:?}", data.dims())));
                }
                ScalarFieldRn::sampled(n, k, SampledBox::new(axes, data.into_data()).map_err(wrap)?).map_err(wrap)
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SphereFieldSpec {
    Constant {
        #[serde(default = "unit")]
        c: f64,
    },
    Linear { a: Vec<f64> },
    ZonalLegendre { degree: usize, axis: Vec<f64> },
    ZonalGaussian { axis: Vec<f64>, kappa: f64 },
    Ftilde { k: usize },
    /// Samples on `S^1` or `S^2` at the nodes of the product rule of the
    /// given order.
    Sampled { path: PathBuf, order: usize },
}

impl SphereFieldSpec {
    pub fn build(&self, n: usize, base: &Path, key: &str) -> CliResult<SphereField> {
        let wrap = |e: igt_core::Error| bad(key, e.to_string());
        match self {
            SphereFieldSpec::Constant { c } => SphereField::constant(n, *c).map_err(wrap),
            SphereFieldSpec::Linear { a } => SphereField::linear(n, a.clone()).map_err(wrap),
            SphereFieldSpec::ZonalLegendre { degree, axis } => SphereField::zonal_legendre(n, *degree, axis).map_err(wrap),
            SphereFieldSpec::ZonalGaussian { axis, kappa } => SphereField::zonal_gaussian(n, axis, *kappa).map_err(wrap),
            SphereFieldSpec::Ftilde { k } => SphereField::counterexample_ftilde(n, *k).map_err(wrap),
            SphereFieldSpec::Sampled { path, order } => {
                let q = make_sphere_quadrature(n, *order, true).map_err(wrap)?;
                let data = read_grid(resolve(base, path))?;
                if data.dims() != [q.len()] {
                    return Err(bad(&format!("{key}.path"), format!("expected {} samples, file has dims {:?}", q.len(), data.dims())));
                }
                SphereField::sampled(q, data.into_data()).map_err(wrap)
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum HFieldSpec {
    Zero,
    ExpDecay { a: f64 },
    PowerDecay { a: f64 },
    /// `exp(a(1 - [x, c]))` with `c` given in polar form.
    ShiftedExpDecay { a: f64, center_direction: Vec<f64>, center_distance: f64 },
    Sampled { path: PathBuf, r_max: f64, #[serde(default = "one")] angular: usize },
}

impl HFieldSpec {
    pub fn build(&self, n: usize, base: &Path, key: &str) -> CliResult<HField> {
        let wrap = |e: igt_core::Error| bad(key, e.to_string());
        let f = match self {
            HFieldSpec::Zero => HField::zero(n),
            HFieldSpec::ExpDecay { a } => HField::exp_decay(n, *a).map_err(wrap)?,
            HFieldSpec::PowerDecay { a } => HField::power_decay(n, *a).map_err(wrap)?,
            HFieldSpec::ShiftedExpDecay { a, center_direction, center_distance } => {
                let c = HPoint::from_polar(center_direction, *center_distance).map_err(wrap)?;
                HField::shifted_exp_decay(*a, c).map_err(wrap)?
            }
            HFieldSpec::Sampled { path, r_max, angular } => {
                let data = read_grid(resolve(base, path))?;
                let radial = data.dims()[0];
                let ok = match data.dims() {
                    [_] => *angular == 1,
                    [_, a] => a == angular,
                    _ => false,
                };
                if !ok {
                    return Err(bad(&format!("{key}.path"), format!("dims {:?} do not match angular = {angular}", data.dims())));
                }
                HField::sampled(n, *r_max, radial, *angular, data.into_data()).map_err(wrap)?
            }
        };
        if f.n() != n {
            return Err(bad(key, format!("field lives on H^{}, config has n = {n}", f.n())));
        }
        Ok(f)
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HOrdersSpec {
    #[serde(default = "r_max")]
    pub r_max: f64,
    #[serde(default = "panel_nodes")]
    pub panel_nodes: usize,
    #[serde(default = "sphere")]
    pub sphere: usize,
}

fn r_max() -> f64 {
    HOrders::default().r_max
}

fn panel_nodes() -> usize {
    HOrders::default().panel_nodes
}

fn sphere() -> usize {
    HOrders::default().sphere
}

impl Default for HOrdersSpec {
    fn default() -> Self {
        let d = HOrders::default();
        Self { r_max: d.r_max, panel_nodes: d.panel_nodes, sphere: d.sphere }
    }
}

impl From<HOrdersSpec> for HOrders {
    fn from(s: HOrdersSpec) -> Self {
        HOrders { r_max: s.r_max, panel_nodes: s.panel_nodes, sphere: s.sphere }
    }
}

/// Unit directions on `S^{d}` for the v-grid: `±1` on `S^0`, `count`
/// angles on `S^1`, the product rule of that order above.
pub fn direction_grid(d: usize, count: usize, key: &str) -> CliResult<Vec<Vec<f64>>> {
    let q = match d {
        0 => return Ok(vec![vec![1.0], vec![-1.0]]),
        1 => SphereQuadrature::circle(count, true),
        _ => make_sphere_quadrature(d, count, true),
    }
    .map_err(|e| bad(key, e.to_string()))?;
    Ok(q.points().map(<[f64]>::to_vec).collect())
}
