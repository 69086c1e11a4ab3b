use serde::Deserialize;

use crate::config::{load, EuclidFieldSpec, SphereFieldSpec};
use crate::error::CliResult;
use crate::output::Csv;
use crate::{Ctx, Outcome};
use igt_core::euclid::{divergence_scan, divergence_scan_f0, PlaneParam, ScanReport};
use igt_core::funk::{counterexample_scan_ftilde, funk_truncation_scan, SphericalComplexElement};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScanConfig {
    scan: ScanSpec,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum ScanSpec {
    /// Truncated plane integrals of `f_0(p, δ)` on the default plane.
    F0 { n: usize, k: usize, p: f64, delta: f64, radii: Vec<f64> },
    /// Truncated plane integrals of any Euclidean field.
    Plane { n: usize, k: usize, field: EuclidFieldSpec, theta: Vec<f64>, s: f64, #[serde(default)] xpp: Vec<f64>, radii: Vec<f64> },
    /// Norm and Funk-integral truncations of `f̃`.
    Ftilde {
        n: usize,
        k: usize,
        p: f64,
        log_cutoffs: Vec<f64>,
        cutoffs: Vec<f64>,
        #[serde(default = "unit")]
        h: f64,
    },
    /// Funk integral over one great circle with `|θ'| < ε` removed.
    FunkTruncation { n: usize, field: SphereFieldSpec, v: Vec<f64>, w: Vec<f64>, cutoffs: Vec<f64> },
}

fn unit() -> f64 {
    1.0
}

fn emit(values: &mut Csv, summary: &mut Csv, series: &str, r: &ScanReport) {
    for (x, v) in r.radii.iter().zip(&r.values) {
        values.row(vec![series.into(), (*x).into(), (*v).into()]);
    }
    summary.row(vec![
        series.into(),
        r.strictly_increasing.into(),
        r.growth_ratio.into(),
        r.last_relative_increment.into(),
        r.cauchy.into(),
    ]);
}

pub fn divergence(ctx: &mut Ctx) -> CliResult<(Outcome, serde_json::Value)> {
    let cfg = load::<ScanConfig>(&ctx.config)?;
    let mut values = Csv::new(&["series", "cutoff", "value"]);
    let mut summary = Csv::new(&["series", "strictly_increasing", "growth_ratio", "last_relative_increment", "cauchy"]);
    match &cfg.config.scan {
        ScanSpec::F0 { n, k, p, delta, radii } => {
            let r = divergence_scan_f0(*n, *k, *p, *delta, radii)?;
            emit(&mut values, &mut summary, "f0", &r);
        }
        ScanSpec::Plane { n, k, field, theta, s, xpp, radii } => {
            let f = field.build(*n, *k, &cfg.base, "scan.field")?;
            let plane = PlaneParam::new(theta.clone(), *s, xpp.clone())?;
            let r = divergence_scan(&f, &plane, radii)?;
            emit(&mut values, &mut summary, "plane", &r);
        }
        ScanSpec::Ftilde { n, k, p, log_cutoffs, cutoffs, h } => {
            let r = counterexample_scan_ftilde(*n, *k, *p, log_cutoffs, cutoffs, *h)?;
            emit(&mut values, &mut summary, "ftilde-norm", &r.norm);
            emit(&mut values, &mut summary, "ftilde-funk", &r.funk);
        }
        ScanSpec::FunkTruncation { n, field, v, w, cutoffs } => {
            let f = field.build(*n, &cfg.base, "scan.field")?;
            let e = SphericalComplexElement::new(v.clone(), w.clone())?;
            let r = funk_truncation_scan(&f, &e, cutoffs)?;
            emit(&mut values, &mut summary, "funk-truncation", &r);
        }
    }
    ctx.out.csv("scan.csv", &values)?;
    ctx.out.csv("summary.csv", &summary)?;
    Ok((Outcome { failed_check: None }, cfg.raw))
}
