use serde::Deserialize;

use crate::commands::euclid::SinogramSource;
use crate::config::{load, HFieldSpec, HOrdersSpec, SphereFieldSpec};
use crate::error::CliResult;
use crate::output::Csv;
use crate::{Ctx, Outcome};
use igt_core::funk::{duality_identity_check, DualityOrders};
use igt_core::hyperbolic::{duality_identity_h, measure_decompositions, slice_identity_check};
use igt_core::range::{range_verdict, RangeOptions, RangeTolerances, Verdict};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RangeConfig {
    source: SinogramSource,
    #[serde(default = "default_m_max")]
    m_max: usize,
    #[serde(default)]
    tolerances: TolerancesSpec,
    /// Adds `amplitude · s e^{-s²}` before testing.
    #[serde(default)]
    odd_perturbation: Option<f64>,
}

fn default_m_max() -> usize {
    4
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct TolerancesSpec {
    evenness: Option<f64>,
    moment: Option<f64>,
    roundtrip: Option<f64>,
}

fn verdict_text(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Inconclusive => "inconclusive",
    }
}

pub fn range(ctx: &mut Ctx) -> CliResult<(Outcome, serde_json::Value)> {
    let cfg = load::<RangeConfig>(&ctx.config)?;
    let c = &cfg.config;
    let mut phi = c.source.load(&cfg.base, "source")?;
    if let Some(a) = c.odd_perturbation {
        let g = phi.grid().clone();
        for (i, v) in phi.values_mut().iter_mut().enumerate() {
            let s = g.plane(i).s;
            *v += a * s * (-s * s).exp();
        }
    }
    let d = RangeTolerances::default();
    let opts = RangeOptions {
        tolerances: RangeTolerances {
            evenness: c.tolerances.evenness.unwrap_or(d.evenness),
            moment: c.tolerances.moment.unwrap_or(d.moment),
            roundtrip: c.tolerances.roundtrip.unwrap_or(d.roundtrip),
        },
        ..RangeOptions::default()
    };
    let report = range_verdict(&phi, c.m_max, &opts);
    let mut csv = Csv::new(&["criterion", "m", "value", "threshold", "verdict"]);
    for r in &report.rows {
        csv.row(vec![r.criterion.as_str().into(), r.m.into(), r.value.into(), r.threshold.into(), verdict_text(r.verdict).into()]);
    }
    ctx.out.csv("range.csv", &csv)?;
    let failed_check = (!report.in_range).then(|| {
        let failing: Vec<String> = report
            .rows
            .iter()
            .filter(|r| r.verdict == Verdict::Fail)
            .map(|r| r.m.map_or(r.criterion.clone(), |m| format!("{}[m={m}]", r.criterion)))
            .collect();
        format!("sinogram fails range criteria: {}", failing.join(", "))
    });
    Ok((Outcome { failed_check }, cfg.raw))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct IdentityConfig {
    identity: IdentitySpec,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum IdentitySpec {
    FunkDuality {
        n: usize,
        k: usize,
        field: SphereFieldSpec,
        #[serde(default)]
        orders: Option<FunkOrdersSpec>,
        #[serde(default = "loose")]
        tolerance: f64,
    },
    HyperbolicDuality {
        n: usize,
        field: HFieldSpec,
        sigmas: Vec<Vec<f64>>,
        #[serde(default = "rho_max")]
        rho_max: f64,
        #[serde(default)]
        orders: HOrdersSpec,
        #[serde(default = "loose")]
        tolerance: f64,
        #[serde(default = "tight")]
        sigma_tolerance: f64,
    },
    HyperbolicSlice {
        n: usize,
        k: usize,
        field: HFieldSpec,
        #[serde(default)]
        orders: HOrdersSpec,
        #[serde(default = "loose")]
        tolerance: f64,
    },
    MeasureDecompositions {
        n: usize,
        field: HFieldSpec,
        #[serde(default)]
        orders: HOrdersSpec,
        #[serde(default = "tight")]
        tolerance: f64,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FunkOrdersSpec {
    v: usize,
    w: usize,
    inner: usize,
    psi: usize,
}

fn loose() -> f64 {
    1e-3
}

fn tight() -> f64 {
    1e-6
}

fn rho_max() -> f64 {
    10.0
}

struct Rows {
    csv: Csv,
    failures: Vec<String>,
}

impl Rows {
    fn push(&mut self, identity: &str, parameter: String, lhs: f64, rhs: f64, rel: f64, tol: f64) {
        let pass = rel < tol;
        if !pass {
            self.failures.push(format!("{identity} {parameter}: {rel:.3e} >= {tol:.1e}"));
        }
        self.csv.row(vec![
            identity.into(),
            parameter.into(),
            lhs.into(),
            rhs.into(),
            rel.into(),
            tol.into(),
            if pass { "pass" } else { "fail" }.into(),
        ]);
    }
}

fn rel(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

pub fn identity(ctx: &mut Ctx) -> CliResult<(Outcome, serde_json::Value)> {
    let cfg = load::<IdentityConfig>(&ctx.config)?;
    let base = &cfg.base;
    let mut rows = Rows {
        csv: Csv::new(&["identity", "parameter", "lhs", "rhs", "rel_error", "tolerance", "verdict"]),
        failures: Vec::new(),
    };
    match &cfg.config.identity {
        IdentitySpec::FunkDuality { n, k, field, orders, tolerance } => {
            let f = field.build(*n, base, "identity.field")?;
            let o = orders.as_ref().map_or_else(DualityOrders::default, |o| DualityOrders { v: o.v, w: o.w, inner: o.inner, psi: o.psi });
            let r = duality_identity_check(&f, *n, *k, &o)?;
            rows.push("funk-duality", format!("constant={:e}", r.constant), r.lhs, r.rhs, r.rel_error, *tolerance);
        }
        IdentitySpec::HyperbolicDuality { n, field, sigmas, rho_max, orders, tolerance, sigma_tolerance } => {
            let f = field.build(*n, base, "identity.field")?;
            let r = duality_identity_h(&f, sigmas, *rho_max, &(*orders).into())?;
            for (sigma, lhs) in &r.lhs {
                let s = sigma.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(" ");
                rows.push("hyperbolic-duality", format!("sigma={s}"), *lhs, r.rhs, rel(*lhs, r.rhs), *tolerance);
            }
            let spread = r.sigma_spread;
            rows.push("sigma-independence", "max-spread".into(), spread, 0.0, spread, *sigma_tolerance);
        }
        IdentitySpec::HyperbolicSlice { n, k, field, orders, tolerance } => {
            let f = field.build(*n, base, "identity.field")?;
            let r = slice_identity_check(&f, *n, *k, &(*orders).into())?;
            rows.push("hyperbolic-slice", format!("k={k}"), r.lhs, r.rhs, r.rel_error, *tolerance);
        }
        IdentitySpec::MeasureDecompositions { n, field, orders, tolerance } => {
            let f = field.build(*n, base, "identity.field")?;
            let r = measure_decompositions(&f, &(*orders).into())?;
            let (_, reference) = r.values[0];
            for &(k, v) in &r.values[1..] {
                rows.push("measure-decomposition", format!("k={k}"), v, reference, rel(v, reference), *tolerance);
            }
        }
    }
    ctx.out.csv("identity.csv", &rows.csv)?;
    let failed_check = (!rows.failures.is_empty()).then(|| format!("identity out of tolerance: {}", rows.failures.join("; ")));
    Ok((Outcome { failed_check }, cfg.raw))
}
