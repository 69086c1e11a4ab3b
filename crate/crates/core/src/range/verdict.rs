use serde::Serialize;

use super::{check_evenness, check_moment_condition, estimate_seminorm, range_construct_f};
use crate::error::Error;
use crate::euclid::{forward_restricted, BoxAxis, ForwardOptions, RestrictedSinogram, SliceInversionOptions};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RangeTolerances {
    pub evenness: f64,
    pub moment: f64,
    pub roundtrip: f64,
}

impl Default for RangeTolerances {
    fn default() -> Self {
        Self { evenness: 1e-8, moment: 1e-6, roundtrip: 1e-3 }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[derive(Default)]
pub struct RangeOptions {
    pub tolerances: RangeTolerances,
    /// Reconstruction axes for `x'`; defaults to `[-S, S]` per axis with
    /// spacing at most 0.125, `S` the s-grid half-width.
    pub target_axes: Option<Vec<BoxAxis>>,
    pub forward: ForwardOptions,
    pub inversion: SliceInversionOptions,
}


#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The check could not be carried out at this resolution; does not
    /// count against membership.
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionRow {
    pub criterion: String,
    pub m: Option<usize>,
    pub value: f64,
    pub threshold: f64,
    pub verdict: Verdict,
    pub note: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RangeReport {
    pub rows: Vec<CriterionRow>,
    pub in_range: bool,
    /// Degree of the first moment condition that failed.
    pub first_failing_moment: Option<usize>,
}

fn row(criterion: &str, m: Option<usize>, value: f64, threshold: f64, pass: bool, note: String) -> CriterionRow {
    CriterionRow {
        criterion: criterion.to_string(),
        m,
        value,
        threshold,
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
        note,
    }
}

pub(crate) fn default_target_axes(phi: &RestrictedSinogram) -> Vec<BoxAxis> {
    let (lo, hi) = phi.grid().s.bounds();
    let half = lo.abs().max(hi.abs());
    let count = (2.0 * half / 0.125).ceil() as usize + 1;
    vec![BoxAxis { lo: -half, hi: half, count }; phi.k() + 1]
}

fn rel_l2(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    let den: f64 = b.iter().map(|y| y * y).sum();
    if den == 0.0 {
        num.sqrt()
    } else {
        (num / den).sqrt()
    }
}

/// Runs every range criterion and reports each separately.
pub fn range_verdict(phi: &RestrictedSinogram, m_max: usize, opts: &RangeOptions) -> RangeReport {
    let tol = opts.tolerances;
    let mut rows = Vec::new();

    match check_evenness(phi) {
        Ok(v) => rows.push(row("evenness", None, v, tol.evenness, v < tol.evenness, String::new())),
        Err(e) => rows.push(row("evenness", None, f64::NAN, tol.evenness, false, e.to_string())),
    }

    for m in 0..=2usize {
        let r = match estimate_seminorm(phi, m) {
            Ok(rep) => row("seminorm", Some(m), rep.value, f64::INFINITY, rep.value.is_finite(), String::new()),
            Err(e @ (Error::Resolution(_) | Error::UnsupportedDimension(_))) => CriterionRow {
                criterion: "seminorm".into(),
                m: Some(m),
                value: f64::NAN,
                threshold: f64::INFINITY,
                verdict: Verdict::Inconclusive,
                note: e.to_string(),
            },
            Err(e) => row("seminorm", Some(m), f64::NAN, f64::INFINITY, false, e.to_string()),
        };
        rows.push(r);
    }

    let mut first_failing_moment = None;
    for m in 0..=m_max {
        let r = match check_moment_condition(phi, m) {
            Ok(p) => row("moment", Some(m), p.residual, tol.moment, p.residual <= tol.moment, format!("condition {:.3e}", p.condition)),
            Err(e) => row("moment", Some(m), f64::NAN, tol.moment, false, e.to_string()),
        };
        if r.verdict == Verdict::Fail && first_failing_moment.is_none() {
            first_failing_moment = Some(m);
        }
        rows.push(r);
    }

    let targets = opts.target_axes.clone().unwrap_or_else(|| default_target_axes(phi));
    let roundtrip = range_construct_f(phi, &targets, &opts.inversion)
        .and_then(|f| forward_restricted(&f, phi.grid(), &opts.forward))
        .map(|again| rel_l2(again.values(), phi.values()));
    match roundtrip {
        Ok(err) => rows.push(row("roundtrip", None, err, tol.roundtrip, err < tol.roundtrip, String::new())),
        Err(e) => rows.push(row("roundtrip", None, f64::NAN, tol.roundtrip, false, e.to_string())),
    }

    let in_range = rows.iter().all(|r| r.verdict != Verdict::Fail);
    RangeReport { rows, in_range, first_failing_moment }
}
