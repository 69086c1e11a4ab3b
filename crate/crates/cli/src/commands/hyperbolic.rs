use serde::{Deserialize, Serialize};

use crate::config::{bad, direction_grid, load, HFieldSpec, HOrdersSpec};
use crate::error::CliResult;
use crate::{Ctx, Outcome};
use igt_core::hyperbolic::{hradon_forward_restricted, HOrders, HyperbolicComplexElement};
use igt_core::io::GridArray;
use rayon::prelude::*;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ForwardConfig {
    n: usize,
    k: usize,
    field: HFieldSpec,
    #[serde(default = "default_count")]
    v_count: usize,
    /// Angles (k = 1) or product-rule order (k >= 2) for `σ ∈ S^k`.
    #[serde(default = "default_count")]
    sigma_count: usize,
    rho_max: f64,
    rho_points: usize,
    #[serde(default)]
    orders: HOrdersSpec,
}

fn default_count() -> usize {
    8
}

/// Element `(v, w)` with `w = (σ_0 cosh ρ v, σ_1 cosh ρ, …, σ_k cosh ρ, sinh ρ)`.
#[derive(Serialize)]
struct Sidecar {
    format: &'static str,
    n: usize,
    k: usize,
    dims: Vec<usize>,
    v_points: Vec<Vec<f64>>,
    sigma_points: Vec<Vec<f64>>,
    rho: Vec<f64>,
}

pub fn forward(ctx: &mut Ctx) -> CliResult<(Outcome, serde_json::Value)> {
    let cfg = load::<ForwardConfig>(&ctx.config)?;
    let c = &cfg.config;
    if !(c.k >= 1 && c.k < c.n && c.k <= 3) {
        return Err(bad("k", format!("need 1 <= k < n and k <= 3, got n={}, k={}", c.n, c.k)));
    }
    if c.rho_points < 1 || !(c.rho_max >= 0.0 && c.rho_max.is_finite()) {
        return Err(bad("rho_points", "need rho_points >= 1 and a finite rho_max >= 0"));
    }
    let f = c.field.build(c.n, &cfg.base, "field")?;
    let orders: HOrders = c.orders.into();
    let v_points = direction_grid(c.n - c.k - 1, c.v_count, "v_count")?;
    let sigma_points = direction_grid(c.k, c.sigma_count, "sigma_count")?;
    let rho: Vec<f64> = if c.rho_points == 1 {
        vec![0.0]
    } else {
        (0..c.rho_points).map(|i| -c.rho_max + 2.0 * c.rho_max * i as f64 / (c.rho_points - 1) as f64).collect()
    };
    let mut elements = Vec::new();
    for v in &v_points {
        for s in &sigma_points {
            for &r in &rho {
                let mut w: Vec<f64> = v.iter().map(|vi| s[0] * r.cosh() * vi).collect();
                w.extend(s[1..].iter().map(|si| si * r.cosh()));
                w.push(r.sinh());
                elements.push(HyperbolicComplexElement::new(v.clone(), w)?);
            }
        }
    }
    let values = elements
        .par_iter()
        .map(|e| hradon_forward_restricted(&f, e, &orders))
        .collect::<igt_core::Result<Vec<f64>>>()?;
    let dims = vec![v_points.len(), sigma_points.len(), rho.len()];
    ctx.out.grid("sinogram.rgrd", &GridArray::new(dims.clone(), values)?)?;
    ctx.out.json(
        "sinogram.json",
        &Sidecar { format: "hyperbolic-sinogram", n: c.n, k: c.k, dims, v_points, sigma_points, rho },
    )?;
    Ok((Outcome { failed_check: None }, cfg.raw))
}
