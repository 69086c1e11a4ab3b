use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::commands::{read_sidecar, sidecar_path};
use crate::config::{bad, direction_grid, load, resolve, SphereFieldSpec};
use crate::error::{CliError, CliResult};
use crate::output::Csv;
use crate::{Ctx, Outcome};
use igt_core::funk::{funk_forward_restricted, funk_slice, reconstruct_point, ReconstructOptions, SphericalComplexElement};
use igt_core::io::{read_grid, GridArray};
use igt_core::numkit::make_sphere_quadrature;
use igt_core::rotation::make_block_rotation;

const FORMAT: &str = "funk-sinogram";
const MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ForwardConfig {
    n: usize,
    k: usize,
    field: SphereFieldSpec,
    /// Angles of the v-grid when `n - k = 2`, product-rule order above.
    #[serde(default = "default_v_count")]
    v_count: usize,
    /// Order of the product rule on the slice sphere `S^{k+1}`.
    w_order: usize,
    /// Order of the rule on each great subsphere.
    #[serde(default = "default_order")]
    order: usize,
}

fn default_v_count() -> usize {
    8
}

fn default_order() -> usize {
    24
}

/// Sinogram on `(v, ζ)`: element `(v, γ̃_v ζ)` for `ζ` in `slice_points`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Sidecar {
    format: String,
    n: usize,
    k: usize,
    w_order: usize,
    dims: Vec<usize>,
    v_points: Vec<Vec<f64>>,
    slice_points: Vec<Vec<f64>>,
}

pub fn forward(ctx: &mut Ctx) -> CliResult<(Outcome, serde_json::Value)> {
    let cfg = load::<ForwardConfig>(&ctx.config)?;
    let c = &cfg.config;
    if !(c.k >= 1 && c.k < c.n && c.k < 3) {
        return Err(bad("k", format!("need 1 <= k < n and k <= 2, got n={}, k={}", c.n, c.k)));
    }
    let f = c.field.build(c.n, &cfg.base, "field")?;
    let v_points = direction_grid(c.n - c.k - 1, c.v_count, "v_count")?;
    let slice = make_sphere_quadrature(c.k + 1, c.w_order, true).map_err(|e| bad("w_order", e.to_string()))?;
    let mut values = Vec::with_capacity(v_points.len() * slice.len());
    for v in &v_points {
        values.extend(funk_slice(|e| funk_forward_restricted(&f, e, c.order), v, c.n, &slice)?);
    }
    let dims = vec![v_points.len(), slice.len()];
    ctx.out.grid("sinogram.rgrd", &GridArray::new(dims.clone(), values)?)?;
    let side = Sidecar {
        format: FORMAT.into(),
        n: c.n,
        k: c.k,
        w_order: c.w_order,
        dims,
        v_points,
        slice_points: slice.points().map(<[f64]>::to_vec).collect(),
    };
    ctx.out.json("sinogram.json", &side)?;
    Ok((Outcome { failed_check: None }, cfg.raw))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InvertConfig {
    sinogram: PathBuf,
    #[serde(default)]
    sidecar: Option<PathBuf>,
    #[serde(default = "default_degree")]
    max_degree: usize,
    points: Vec<Vec<f64>>,
    #[serde(default)]
    theta_min: Option<f64>,
    /// Field to compare against, when known.
    #[serde(default)]
    exact: Option<SphereFieldSpec>,
}

fn default_degree() -> usize {
    8
}

fn close(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < MATCH_TOL)
}

pub fn invert(ctx: &mut Ctx) -> CliResult<(Outcome, serde_json::Value)> {
    let cfg = load::<InvertConfig>(&ctx.config)?;
    let c = &cfg.config;
    let side: Sidecar = read_sidecar(&sidecar_path(&cfg.base, &c.sinogram, &c.sidecar))?;
    if side.format != FORMAT {
        return Err(bad("sidecar", format!("sidecar format is {:?}, expected {FORMAT:?}", side.format)));
    }
    if side.k != 1 {
        return Err(bad("sidecar", format!("pointwise reconstruction needs k = 1, sinogram has k = {}", side.k)));
    }
    let data = read_grid(resolve(&cfg.base, &c.sinogram))?;
    let (nv, nw) = (side.v_points.len(), side.slice_points.len());
    if data.dims() != [nv, nw] {
        return Err(CliError::io(format!("sinogram dims {:?} do not match the sidecar ({nv} x {nw})", data.dims())));
    }
    let n = side.n;
    let q = n - side.k;
    let rotations = side
        .v_points
        .iter()
        .map(|v| make_block_rotation(v, n + 1))
        .collect::<igt_core::Result<Vec<_>>>()?;
    let values = data.data();
    // Stored data answers only for elements on the grid it was sampled on.
    let lookup = |e: &SphericalComplexElement| -> igt_core::Result<f64> {
        let off = || igt_core::Error::Precondition(format!("element v={:?} is not on the stored grid", e.v()));
        let i = side.v_points.iter().position(|v| close(v, e.v())).ok_or_else(off)?;
        let zeta = rotations[i].apply_transpose(e.w());
        let j = side.slice_points.iter().position(|p| close(p, &zeta[q - 1..])).ok_or_else(off)?;
        Ok(values[i * nw + j])
    };
    let opts = ReconstructOptions {
        max_degree: c.max_degree,
        slice_order: side.w_order,
        theta_min: c.theta_min.unwrap_or(ReconstructOptions::default().theta_min),
        continuity: false,
        ..ReconstructOptions::default()
    };
    let exact = c.exact.as_ref().map(|s| s.build(n, &cfg.base, "exact")).transpose()?;
    let mut csv = Csv::new(&["point", "theta", "value", "exact", "abs_error", "note"]);
    for (i, theta) in c.points.iter().enumerate() {
        let theta_txt = theta.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(" ");
        let (value, note) = match reconstruct_point(lookup, n, 1, theta, &opts) {
            Ok(v) => (v, String::new()),
            Err(e @ (igt_core::Error::InvalidArgument(_) | igt_core::Error::AliasingRisk { .. })) => {
                return Err(CliError::from(e).with_key(format!("points[{i}]")))
            }
            Err(e) => (f64::NAN, e.to_string()),
        };
        let ex = exact.as_ref().map_or(f64::NAN, |f| f.eval(theta));
        csv.row(vec![i.into(), theta_txt.into(), value.into(), ex.into(), (value - ex).abs().into(), note.into()]);
    }
    ctx.out.csv("reconstruct.csv", &csv)?;
    Ok((Outcome { failed_check: None }, cfg.raw))
}
