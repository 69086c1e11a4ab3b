use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::commands::{read_sidecar, sidecar_path};
use crate::config::{bad, load, AxisSpec, EuclidFieldSpec, EuclidGridSpec};
use crate::error::{CliError, CliResult};
use crate::output::Csv;
use crate::{Ctx, Outcome};
use igt_core::euclid::{
    forward_restricted, invert_dual_formula_k1, invert_fourier_slice, DualInversionOptions, FieldRn, ForwardOptions,
    RestrictedSinogram, SliceInversionOptions,
};
use igt_core::io::{read_grid, GridArray};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SinogramSidecar {
    pub format: String,
    pub grid: EuclidGridSpec,
    pub dims: Vec<usize>,
    pub axes: Vec<String>,
}

const SINOGRAM_FORMAT: &str = "euclidean-sinogram";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ForwardConfig {
    grid: EuclidGridSpec,
    field: EuclidFieldSpec,
    #[serde(default)]
    order: Option<usize>,
}

/// Where a Euclidean sinogram comes from.
#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub(crate) enum SinogramSource {
    File {
        sinogram: PathBuf,
        #[serde(default)]
        sidecar: Option<PathBuf>,
    },
    Forward {
        grid: EuclidGridSpec,
        field: EuclidFieldSpec,
        #[serde(default)]
        order: Option<usize>,
    },
}

fn forward_options(order: Option<usize>) -> ForwardOptions {
    order.map_or_else(ForwardOptions::default, |order| ForwardOptions { order })
}

impl SinogramSource {
    pub(crate) fn load(&self, base: &std::path::Path, key: &str) -> CliResult<RestrictedSinogram> {
        match self {
            SinogramSource::File { sinogram, sidecar } => load_sinogram(base, sinogram, sidecar),
            SinogramSource::Forward { grid, field, order } => {
                let g = grid.build(&format!("{key}.grid"))?;
                let f = field.build(grid.n, grid.k, base, &format!("{key}.field"))?;
                Ok(forward_restricted(&f, &g, &forward_options(*order))?)
            }
        }
    }
}

pub(crate) fn load_sinogram(base: &std::path::Path, sinogram: &std::path::Path, sidecar: &Option<PathBuf>) -> CliResult<RestrictedSinogram> {
    let side: SinogramSidecar = read_sidecar(&sidecar_path(base, sinogram, sidecar))?;
    if side.format != SINOGRAM_FORMAT {
        return Err(bad("sidecar", format!("sidecar format is {:?}, expected {SINOGRAM_FORMAT:?}", side.format)));
    }
    let grid = side.grid.build("sidecar.grid")?;
    let data = read_grid(crate::config::resolve(base, sinogram))?;
    if data.dims() != grid.shape().as_slice() {
        return Err(CliError::io(format!("sinogram dims {:?} do not match the sidecar grid {:?}", data.dims(), grid.shape())));
    }
    Ok(RestrictedSinogram::new(grid, data.into_data())?)
}

pub(crate) fn sinogram_sidecar(spec: &EuclidGridSpec, phi: &RestrictedSinogram) -> SinogramSidecar {
    let mut axes = vec!["theta".to_string(), "s".to_string()];
    axes.extend((0..spec.n - spec.k - 1).map(|i| format!("xpp{}", i + 1)));
    SinogramSidecar { format: SINOGRAM_FORMAT.into(), grid: spec.clone(), dims: phi.grid().shape(), axes }
}

pub fn forward(ctx: &mut Ctx) -> CliResult<(Outcome, serde_json::Value)> {
    let cfg = load::<ForwardConfig>(&ctx.config)?;
    let c = &cfg.config;
    let grid = c.grid.build("grid")?;
    let f = c.field.build(c.grid.n, c.grid.k, &cfg.base, "field")?;
    if c.order.is_some_and(|o| o < 2) {
        return Err(bad("order", "plane quadrature order must be >= 2"));
    }
    let phi = forward_restricted(&f, &grid, &forward_options(c.order))?;
    log::info!("forward transform on {} planes", grid.len());
    ctx.out.grid("sinogram.rgrd", &GridArray::new(grid.shape(), phi.values().to_vec())?)?;
    ctx.out.json("sinogram.json", &sinogram_sidecar(&c.grid, &phi))?;
    Ok((Outcome { failed_check: None }, cfg.raw))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InvertConfig {
    sinogram: PathBuf,
    #[serde(default)]
    sidecar: Option<PathBuf>,
    method: InvertMethod,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum InvertMethod {
    FourierSlice {
        /// Output axes for `x'`; default `[-S, S]` at spacing 0.125.
        #[serde(default)]
        xp_axes: Option<Vec<AxisSpec>>,
        #[serde(default)]
        pad: Option<usize>,
        #[serde(default)]
        cart_points: Option<usize>,
        #[serde(default)]
        cart_extent: Option<f64>,
    },
    DualFormula {
        probes: Vec<Probe>,
        #[serde(default = "default_epsilon")]
        epsilon: f64,
        #[serde(default = "default_t_max")]
        t_max: f64,
        #[serde(default)]
        tol: Option<f64>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Probe {
    xp: Vec<f64>,
    #[serde(default)]
    xpp: Vec<f64>,
}

fn default_epsilon() -> f64 {
    0.05
}

fn default_t_max() -> f64 {
    10.0
}

#[derive(Serialize)]
struct FieldSidecar {
    format: &'static str,
    axes: Vec<AxisSpec>,
}

fn joined(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(" ")
}

pub fn invert(ctx: &mut Ctx) -> CliResult<(Outcome, serde_json::Value)> {
    let cfg = load::<InvertConfig>(&ctx.config)?;
    let c = &cfg.config;
    let phi = load_sinogram(&cfg.base, &c.sinogram, &c.sidecar)?;
    match &c.method {
        InvertMethod::FourierSlice { xp_axes, pad, cart_points, cart_extent } => {
            let axes = match xp_axes {
                Some(a) => a.iter().map(|x| x.to_axis("method.xp_axes")).collect::<CliResult<Vec<_>>>()?,
                None => {
                    let (lo, hi) = phi.grid().s.bounds();
                    let half = lo.abs().max(hi.abs());
                    let count = (2.0 * half / 0.125).ceil() as usize + 1;
                    vec![AxisSpec { lo: -half, hi: half, count }.to_axis("method.xp_axes")?; phi.k() + 1]
                }
            };
            let d = SliceInversionOptions::default();
            let opts = SliceInversionOptions {
                pad: pad.unwrap_or(d.pad),
                cart_points: cart_points.unwrap_or(d.cart_points),
                cart_extent: cart_extent.unwrap_or(d.cart_extent),
            };
            let f = invert_fourier_slice(&phi, &axes, &opts)?;
            let FieldRn::Sampled(b) = f.kind() else {
                return Err(CliError::numerical("inversion did not return a sampled field"));
            };
            ctx.out.grid("field.rgrd", &GridArray::new(b.shape(), b.values().to_vec())?)?;
            let axes = b.axes().iter().map(|a| AxisSpec { lo: a.lo, hi: a.hi, count: a.count }).collect();
            ctx.out.json("field.json", &FieldSidecar { format: "euclidean-field", axes })?;
        }
        InvertMethod::DualFormula { probes, epsilon, t_max, tol } => {
            let mut opts = DualInversionOptions::default();
            if let Some(t) = tol {
                opts.tol = *t;
            }
            let mut csv = Csv::new(&["probe", "xp", "xpp", "value", "halvings"]);
            for (i, p) in probes.iter().enumerate() {
                let r = invert_dual_formula_k1(&phi, &p.xp, &p.xpp, *epsilon, *t_max, &opts)
                    .map_err(|e| CliError::from(e).with_key(format!("method.probes[{i}]")))?;
                csv.row(vec![i.into(), joined(&p.xp).into(), joined(&p.xpp).into(), r.value.into(), r.trace.len().into()]);
            }
            ctx.out.csv("probes.csv", &csv)?;
        }
    }
    Ok((Outcome { failed_check: None }, cfg.raw))
}

