//! Acceptance criteria, one PASS/FAIL line each. Oracles are closed forms
//! or independent quadratures written out here; tolerances and runtime
//! limits are fixed.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use igt_core::euclid::*;
use igt_core::funk::*;
use igt_core::hyperbolic::*;
use igt_core::io::{decode_grid, encode_grid, GridArray};
use igt_core::numkit::{continuous_ft_1d, make_sphere_quadrature, Grid1D, SphereQuadrature};
use igt_core::range::{range_verdict, RangeOptions, Verdict};

struct Outcome {
    pass: bool,
    detail: String,
}

fn criterion(id: usize, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let out = std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
        Outcome { pass: false, detail: format!("panicked: {}", msg.unwrap_or_default()) }
    });
    let elapsed = t.elapsed();
    let in_time = elapsed <= limit;
    let pass = out.pass && in_time;
    println!(
        "{} {id}. {name}: {}; runtime {:.2} s (limit {} s)",
        if pass { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    pass
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn unit(v: &[f64]) -> Vec<f64> {
    let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / r).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Grid of criteria 1-3: 64 angles, 128 offsets over [-8, 8].
fn desk_grid(xpp_points: usize) -> SinogramGrid {
    SinogramGrid::new(
        SphereQuadrature::circle(64, true).unwrap(),
        Grid1D::uniform_trapezoid(-8.0, 8.0, 128).unwrap(),
        vec![Grid1D::uniform_trapezoid(-3.0, 3.0, xpp_points).unwrap()],
    )
}

fn gaussian_sinogram(xpp_points: usize) -> RestrictedSinogram {
    let f = ScalarFieldRn::gaussian(3, 1, vec![0.0; 3], 1.0).unwrap();
    forward_restricted(&f, &desk_grid(xpp_points), &ForwardOptions::default()).unwrap()
}

fn exact_gaussian(x: &[f64]) -> f64 {
    (-dot(x, x)).exp()
}

fn projection_slice() -> Outcome {
    let phi = gaussian_sinogram(7);
    let grid = phi.grid();
    let etas: Vec<f64> = (0..=40).map(|i| i as f64 * 0.25).collect();
    let mut worst = 0.0f64;
    for it in 0..grid.theta.len() {
        for ix in 0..grid.xpp_len() {
            let xpp = grid.xpp_point(ix)[0];
            let ft = continuous_ft_1d(&grid.s, &phi.s_profile(it, ix), &etas).unwrap();
            for (eta, v) in etas.iter().zip(&ft.values) {
                // f̂(ηθ) in the x' variables: π e^{-η²/4}, times e^{-x''²}.
                let exact = PI * (-eta * eta / 4.0).exp() * (-xpp * xpp).exp();
                worst = worst.max((v.re - exact).abs().max(v.im.abs()) / PI);
            }
        }
    }
    Outcome { pass: worst < 1e-6, detail: format!("sup relative error {worst:.3e} (< 1e-6)") }
}

fn euclidean_inversion() -> Outcome {
    let phi = gaussian_sinogram(13);
    let axes = vec![BoxAxis::new(-4.0, 4.0, 33).unwrap(); 2];
    let f = invert_fourier_slice(&phi, &axes, &SliceInversionOptions::default()).unwrap();
    let FieldRn::Sampled(b) = f.kind() else { unreachable!() };
    let reference = SampledBox::from_fn(b.axes().to_vec(), exact_gaussian).unwrap();
    let num: f64 = b.values().iter().zip(reference.values()).map(|(a, r)| (a - r) * (a - r)).sum();
    let den: f64 = reference.values().iter().map(|r| r * r).sum();
    let l2 = (num / den).sqrt();

    let probes = [([0.0, 0.0], 0.0), ([1.0, 0.0], 0.0), ([0.3, -0.6], 1.0), ([-1.2, 0.5], -0.5), ([0.5, 0.5], 1.5)];
    let mut worst = 0.0f64;
    for (xp, xpp) in probes {
        let r = invert_dual_formula_k1(&phi, &xp, &[xpp], 0.05, 10.0, &DualInversionOptions::default()).unwrap();
        worst = worst.max((r.value - exact_gaussian(&[xp[0], xp[1], xpp])).abs());
    }
    Outcome {
        pass: l2 < 1e-3 && worst < 2e-3,
        detail: format!("Fourier-slice rel L2 {l2:.3e} (< 1e-3), dual formula max abs error at 5 probes {worst:.3e} (< 2e-3)"),
    }
}

fn range_theorem() -> Outcome {
    let phi = gaussian_sinogram(7);
    let clean = range_verdict(&phi, 4, &RangeOptions::default());
    let row = |c: &str, m: Option<usize>| clean.rows.iter().find(|r| r.criterion == c && r.m == m).unwrap();
    let even = row("evenness", None);
    let moments: Vec<_> = (0..=4).map(|m| row("moment", Some(m))).collect();
    let worst_moment = moments.iter().map(|r| r.value).fold(0.0f64, f64::max);
    let rt = row("roundtrip", None);
    let inconclusive = clean.rows.iter().filter(|r| r.verdict == Verdict::Inconclusive).count();
    let clean_ok = even.value < 1e-8 && moments.iter().all(|r| r.value < 1e-6) && rt.value < 1e-3 && clean.in_range;

    let mut odd = phi.clone();
    let g = odd.grid().clone();
    for (i, v) in odd.values_mut().iter_mut().enumerate() {
        let s = g.plane(i).s;
        *v += 1e-3 * s * (-s * s).exp();
    }
    let perturbed = range_verdict(&odd, 4, &RangeOptions::default());
    let detected = !perturbed.in_range;
    Outcome {
        pass: clean_ok && detected,
        detail: format!(
            "evenness {:.1e} (< 1e-8), moments m=0..4 max {worst_moment:.2e} (< 1e-6), roundtrip {:.2e} (< 1e-3), \
             {inconclusive} seminorm row(s) inconclusive at this grid, odd perturbation 1e-3 detected: {detected}",
            even.value, rt.value
        ),
    }
}

fn funk_duality() -> Outcome {
    let one = duality_identity_check(&SphereField::constant(3, 1.0).unwrap(), 3, 1, &DualityOrders::default()).unwrap();
    // Constant 2σ_3/(σ_2σ_1) = 2·2π²/(4π·2π) = 1/2.
    let sigma = |d: u32| 2.0 * PI.powf((d + 1) as f64 / 2.0) / libm::tgamma((d + 1) as f64 / 2.0);
    let expected_constant = 2.0 * sigma(3) / (sigma(2) * sigma(1));
    let zonal = SphereField::zonal_gaussian(3, &unit(&[0.5, 0.1, -0.3, 0.8]), 1.5).unwrap();
    let second = duality_identity_check(&zonal, 3, 1, &DualityOrders::default()).unwrap();
    let const_ok = (one.constant - 0.5).abs() < 1e-14 && (expected_constant - 0.5).abs() < 1e-14;
    Outcome {
        pass: one.rel_error < 1e-4 && const_ok && second.rel_error < 1e-3,
        detail: format!(
            "f=1 rel error {:.2e} (< 1e-4) with constant {} (oracle {expected_constant}), even zonal field rel error {:.2e} (< 1e-3)",
            one.rel_error, one.constant, second.rel_error
        ),
    }
}

/// `P_m(0) = (-1)^{m/2} (m-1)!!/m!!` for even `m`.
fn legendre_zero_closed_form(m: usize) -> f64 {
    let mut v = 1.0;
    for j in (2..=m).step_by(2) {
        v *= -((j - 1) as f64) / j as f64;
    }
    v
}

/// Legendre polynomial by Bonnet's recurrence.
fn legendre(m: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if m == 0 {
        return 1.0;
    }
    for j in 1..m {
        let p2 = ((2 * j + 1) as f64 * x * p1 - j as f64 * p0) / (j + 1) as f64;
        p0 = p1;
        p1 = p2;
    }
    p1
}

fn funk_hecke() -> Outcome {
    let axis = unit(&[0.3, -0.4, 0.85]);
    let qs = make_sphere_quadrature(2, 16, true).unwrap();
    let mut parts = Vec::new();
    let mut ok = true;
    for (m, target) in [(0usize, 1.0), (2, -0.5), (4, 0.375)] {
        let f = SphereField::zonal_legendre(2, m, &axis).unwrap();
        let oracle = legendre_zero_closed_form(m);
        let mut worst = 0.0f64;
        for i in 0..qs.len() {
            let zeta = qs.point(i);
            let za = dot(zeta, &axis);
            if zeta[0] == 0.0 || legendre(m, za).abs() < 0.1 {
                continue;
            }
            let e = SphericalComplexElement::new(vec![zeta[0].signum()], zeta.to_vec()).unwrap();
            let multiplier = funk_forward_restricted(&f, &e, 64).unwrap() / legendre(m, za);
            worst = worst.max((multiplier - target).abs());
        }
        ok &= worst < 1e-8 && (oracle - target).abs() < 1e-15;
        parts.push(format!("m={m} |mult-{target}| {worst:.1e}"));
    }

    // Roundtrip on an even field of degree 8.
    let q = make_sphere_quadrature(2, 18, true).unwrap();
    let axes = [unit(&[0.2, 0.3, 0.9]), unit(&[-0.7, 0.1, 0.2]), unit(&[0.1, -0.9, 0.4])];
    let exact = |p: &[f64]| {
        1.0 + 0.7 * legendre(2, dot(p, &axes[0])) - 0.4 * legendre(4, dot(p, &axes[1])) + 0.3 * legendre(8, dot(p, &axes[2]))
            + 0.2 * legendre(6, dot(p, &axes[0]))
    };
    let field = SphereField::sampled(q.clone(), (0..q.len()).map(|i| exact(q.point(i))).collect()).unwrap();
    let phi: Vec<f64> = (0..q.len())
        .map(|i| {
            let z = q.point(i);
            let e = SphericalComplexElement::new(vec![if z[0] < 0.0 { -1.0 } else { 1.0 }], z.to_vec()).unwrap();
            funk_forward_restricted(&field, &e, 64).unwrap()
        })
        .collect();
    let back = funk_invert_slice(&q, &phi, 8).unwrap();
    let rt = (0..q.len()).map(|i| (back.eval(q.point(i)) - exact(q.point(i))).abs()).fold(0.0f64, f64::max);
    ok &= rt < 1e-8;
    Outcome { pass: ok, detail: format!("{} (< 1e-8), slice roundtrip degree <= 8 max error {rt:.1e} (< 1e-8)", parts.join(", ")) }
}

fn hyperbolic_identities() -> Outcome {
    let orders = HOrders::default();
    let f2 = HField::exp_decay(2, 2.0).unwrap();
    let sigmas = vec![vec![1.0, 0.0], vec![0.6, -0.8], vec![0.0, 1.0]];
    let d = duality_identity_h(&f2, &sigmas, 10.0, &orders).unwrap();
    let s = slice_identity_check(&HField::exp_decay(3, 2.0).unwrap(), 3, 1, &orders).unwrap();
    let m = measure_decompositions(&HField::exp_decay(3, 2.0).unwrap(), &orders).unwrap();
    let ok = d.rel_error < 1e-3 && d.sigma_spread < 1e-6 && s.rel_error < 1e-3 && m.max_pairwise_rel < 1e-6;
    Outcome {
        pass: ok,
        detail: format!(
            "hyperplane duality rel error {:.2e} (< 1e-3), sigma spread {:.1e} (< 1e-6), slice identity rel error {:.2e} (< 1e-3), \
             measure decompositions pairwise {:.1e} (< 1e-6)",
            d.rel_error, d.sigma_spread, s.rel_error, m.max_pairwise_rel
        ),
    }
}

fn sharpness_scans() -> Outcome {
    let grow: Vec<f64> = (1..=12).map(|j| 2f64.powi(j)).collect();
    let div = divergence_scan_f0(3, 1, 2.0, 0.25, &grow).unwrap();
    let conv_radii: Vec<f64> = (1..=40).map(|j| 2f64.powi(j)).collect();
    let conv = divergence_scan_f0(3, 1, 1.2, 0.1, &conv_radii).unwrap();
    let logs: Vec<f64> = (0..=30).map(|j| 2f64.powi(j)).collect();
    let eps: Vec<f64> = (4..=20).map(|j| 2f64.powi(-j)).collect();
    let ft = counterexample_scan_ftilde(3, 1, 2.0, &logs, &eps, 1.0).unwrap();
    let v = unit(&[0.6, -0.8]);
    let e = SphericalComplexElement::new(v.clone(), unit(&[0.3 * v[0], 0.3 * v[1], -0.2, 0.9])).unwrap();
    let trunc = funk_truncation_scan(&SphereField::counterexample_ftilde(3, 1).unwrap(), &e, &eps).unwrap();
    let ok = div.strictly_increasing
        && div.growth_ratio > 5.0
        && conv.cauchy
        && ft.norm.cauchy
        && ft.norm.values.last().unwrap().is_finite()
        && !ft.funk.cauchy
        && !trunc.cauchy;
    Outcome {
        pass: ok,
        detail: format!(
            "f0 p=2 increasing {} growth {:.2} (> 5) over 2..4096, p=1.2 Cauchy {} (last increment {:.1e}), \
             f~ p=n-k=2 norm {:.6} Cauchy {}, Funk truncations Cauchy {} / {}",
            div.strictly_increasing,
            div.growth_ratio,
            conv.cauchy,
            conv.last_relative_increment,
            ft.norm.values.last().unwrap(),
            ft.norm.cauchy,
            ft.funk.cauchy,
            trunc.cauchy
        ),
    }
}

fn infrastructure() -> Outcome {
    let nan = f64::from_bits(0x7ff8_0000_dead_beef);
    let a = GridArray::new(vec![2, 3], vec![1.5, -0.0, nan, f64::INFINITY, 1e-310, -7.25]).unwrap();
    let bytes = encode_grid(&a);
    let roundtrip = bytes.len() == 76 && decode_grid(&bytes).unwrap().bit_eq(&a);

    let dir = tempfile::tempdir().unwrap();
    let configs = [
        ("forward-euclidean", r#"{"grid": {"n": 3, "k": 1, "directions": 32, "s_half": 8.0, "s_points": 64, "xpp_half": 2.0, "xpp_points": 5}, "field": {"family": "gaussian", "center": [0.3, -0.2, 0.1], "width": 0.9}}"#),
        ("forward-funk", r#"{"n": 3, "k": 1, "field": {"family": "zonal-gaussian", "axis": [0.5, 0.5, 0.5, 0.5], "kappa": 2}, "w_order": 12}"#),
        ("forward-hyperbolic", r#"{"n": 3, "k": 1, "field": {"family": "exp-decay", "a": 1.5}, "v_count": 4, "sigma_count": 4, "rho_max": 1, "rho_points": 3}"#),
    ];
    let mut identical = 0;
    for (cmd, json) in configs {
        let cfg = dir.path().join(format!("{cmd}.json"));
        std::fs::write(&cfg, json).unwrap();
        let mut outs = Vec::new();
        for threads in ["1", "4"] {
            let out = dir.path().join(format!("{cmd}-{threads}"));
            let status = Command::new(env!("CARGO_BIN_EXE_igt"))
                .args([cmd, "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--threads", threads])
                .status()
                .unwrap();
            assert!(status.success(), "{cmd} --threads {threads} failed");
            outs.push(std::fs::read(out.join("sinogram.rgrd")).unwrap());
        }
        identical += usize::from(outs[0] == outs[1]);
    }
    Outcome {
        pass: roundtrip && identical == 3,
        detail: format!("RGRD 2x3 roundtrip bit-exact {roundtrip} (76 bytes), {identical}/3 commands bit-identical across --threads 1 and 4"),
    }
}

fn main() {
    // `cargo test` passes harness flags; filtering is not supported here.
    // Panics are caught per criterion and reported on its line.
    std::panic::set_hook(Box::new(|_| {}));
    let total = Instant::now();
    let results = [
        criterion(1, "projection-slice check", secs(10), projection_slice),
        criterion(2, "Euclidean inversion roundtrip", secs(60), euclidean_inversion),
        criterion(3, "range theorem", secs(60), range_theorem),
        criterion(4, "Funk duality", secs(30), funk_duality),
        criterion(5, "Funk-Hecke multipliers and slice inversion", secs(10), funk_hecke),
        criterion(6, "hyperbolic identities", secs(120), hyperbolic_identities),
        criterion(7, "sharpness scans", secs(60), sharpness_scans),
        criterion(8, "infrastructure", secs(600), infrastructure),
    ];
    let elapsed = total.elapsed().as_secs_f64();
    let failed = results.iter().filter(|p| !**p).count();
    println!("acceptance: {} passed, {failed} failed, {elapsed:.1} s total", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
