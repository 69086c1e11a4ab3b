use std::f64::consts::PI;
use std::time::Instant;

use igt_core::euclid::*;
use igt_core::numkit::{Grid1D, SphereQuadrature};
use igt_core::range::*;
use igt_core::Error;

fn grid(s_points: usize, s_half: f64, xpp_points: usize) -> SinogramGrid {
    SinogramGrid::new(
        SphereQuadrature::circle(64, true).unwrap(),
        Grid1D::uniform_trapezoid(-s_half, s_half, s_points).unwrap(),
        vec![Grid1D::uniform_trapezoid(-3.0, 3.0, xpp_points).unwrap()],
    )
}

fn gaussian_sinogram(g: SinogramGrid) -> RestrictedSinogram {
    let f = ScalarFieldRn::gaussian(3, 1, vec![0.0; 3], 1.0).unwrap();
    forward_restricted(&f, &g, &ForwardOptions::default()).unwrap()
}

#[test]
fn evenness_of_forward_data_is_exact() {
    let phi = gaussian_sinogram(grid(64, 8.0, 5));
    assert_eq!(check_evenness(&phi).unwrap(), 0.0);
}

#[test]
fn odd_injection_violates_by_twice_the_offset() {
    let g = grid(64, 8.0, 3);
    let phi = RestrictedSinogram::from_fn(g.clone(), |p| p.s).unwrap();
    let max_s = g.s.nodes().iter().fold(0.0f64, |a, s| a.max(s.abs()));
    assert!((check_evenness(&phi).unwrap() - 2.0 * max_s).abs() < 1e-14);
}

#[test]
fn single_point_perturbation_is_measured() {
    let mut phi = gaussian_sinogram(grid(64, 8.0, 3));
    phi.values_mut()[1234] += 1e-3;
    assert!((check_evenness(&phi).unwrap() - 1e-3).abs() < 1e-15);
}

#[test]
fn evenness_scales_with_the_sinogram() {
    let g = grid(32, 4.0, 3);
    let phi = RestrictedSinogram::from_fn(g, |p| p.s * (-p.s * p.s).exp() + p.theta[0]).unwrap();
    let a = check_evenness(&phi).unwrap();
    let b = check_evenness(&phi.scaled(-3.0)).unwrap();
    assert!((b - 3.0 * a).abs() < 1e-14 * a);
}

#[test]
fn evenness_needs_a_symmetric_grid() {
    let g = SinogramGrid::new(
        SphereQuadrature::circle(16, true).unwrap(),
        Grid1D::uniform_trapezoid(-4.0, 5.0, 32).unwrap(),
        vec![],
    );
    let phi = RestrictedSinogram::from_fn(g, |_| 1.0).unwrap();
    assert!(matches!(check_evenness(&phi), Err(Error::Grid(_))));
}

#[test]
fn seminorm_examples() {
    let g = grid(401, 8.0, 121);
    let zero = RestrictedSinogram::from_fn(g.clone(), |_| 0.0).unwrap();
    assert_eq!(estimate_seminorm(&zero, 2).unwrap().value, 0.0);

    let phi = RestrictedSinogram::from_fn(g, |p| PI.sqrt() * (-p.s * p.s).exp() * (-p.xpp[0] * p.xpp[0]).exp()).unwrap();
    let m0 = estimate_seminorm(&phi, 0).unwrap();
    // s = 0 and x'' = 0 are grid nodes.
    assert!((m0.value - PI.sqrt()).abs() < 1e-6, "{}", m0.value);
    let m1 = estimate_seminorm(&phi, 1).unwrap();
    let m2 = estimate_seminorm(&phi, 2).unwrap();
    assert!(m1.value >= m0.value && m2.value >= m1.value);
    assert_eq!(m2.grid_resolution_used, vec![64, 401, 121]);
}

#[test]
fn seminorm_rejects_coarse_grids() {
    let phi = RestrictedSinogram::from_fn(grid(16, 8.0, 5), |p| (-4.0 * p.s * p.s).exp()).unwrap();
    assert!(matches!(estimate_seminorm(&phi, 1), Err(Error::Resolution(_))));
    assert!(estimate_seminorm(&phi, 3).is_err());
}

#[test]
fn zeroth_moment_of_gaussian_data() {
    let g = grid(128, 8.0, 7);
    let phi = gaussian_sinogram(g.clone());
    let p = check_moment_condition(&phi, 0).unwrap();
    assert!(p.residual < 1e-8);
    // ∫∫ e^{-|x'|²} dx' = π.
    for (ix, x) in g.xpp[0].nodes().iter().enumerate() {
        let exact = PI * (-x * x).exp();
        assert!((p.coefficients[0][ix] - exact).abs() < 1e-10 * PI, "{} {}", p.coefficients[0][ix], exact);
    }
}

#[test]
fn first_moment_of_gaussian_data_vanishes() {
    let phi = gaussian_sinogram(grid(128, 8.0, 7));
    let p = check_moment_condition(&phi, 1).unwrap();
    assert!(p.coefficients.iter().flatten().all(|c| c.abs() < 1e-8));
    assert!(p.residual < 1e-8);
}

#[test]
fn constant_second_moment_fits_through_unit_norm() {
    let phi = RestrictedSinogram::from_fn(grid(128, 8.0, 5), |p| (-p.s * p.s).exp() * (1.0 + p.xpp[0].powi(2)).recip()).unwrap();
    let p = check_moment_condition(&phi, 2).unwrap();
    assert!(p.residual < 1e-10, "{}", p.residual);
}

#[test]
fn angular_moment_that_is_not_polynomial_fails() {
    // μ_0 depends on θ through |θ_1|, which is not a constant.
    let phi = RestrictedSinogram::from_fn(grid(128, 8.0, 3), |p| (-p.s * p.s).exp() * (1.0 + p.theta[0].abs())).unwrap();
    assert!(check_moment_condition(&phi, 0).unwrap().residual > 1e-2);
}

#[test]
fn moment_fit_needs_enough_directions() {
    let g = SinogramGrid::new(
        SphereQuadrature::circle(8, true).unwrap(),
        Grid1D::uniform_trapezoid(-4.0, 4.0, 32).unwrap(),
        vec![],
    );
    let phi = RestrictedSinogram::from_fn(g, |p| (-p.s * p.s).exp()).unwrap();
    assert!(matches!(check_moment_condition(&phi, 4), Err(Error::Precondition(_))));
}

#[test]
fn construction_matches_fourier_slice_inversion() {
    let phi = gaussian_sinogram(grid(128, 8.0, 7));
    let axes = vec![BoxAxis::new(-3.0, 3.0, 25).unwrap(); 2];
    let opts = SliceInversionOptions::default();
    let a = range_construct_f(&phi, &axes, &opts).unwrap();
    let b = invert_fourier_slice(&phi, &axes, &opts).unwrap();
    let (FieldRn::Sampled(a), FieldRn::Sampled(b)) = (a.kind(), b.kind()) else { panic!("sampled output expected") };
    let worst = a.values().iter().zip(b.values()).fold(0.0f64, |w, (x, y)| w.max((x - y).abs()));
    assert!(worst < 1e-10, "{worst}");
    // and both reconstruct the Gaussian
    let mut num = 0.0;
    let mut den = 0.0;
    for x0 in a.axes()[0].nodes() {
        for x1 in a.axes()[1].nodes() {
            for x2 in a.axes()[2].nodes() {
                let exact = (-(x0 * x0 + x1 * x1 + x2 * x2)).exp();
                let got = a.eval(&[x0, x1, x2]);
                num += (got - exact).powi(2);
                den += exact * exact;
            }
        }
    }
    assert!((num / den).sqrt() < 1e-3);
}

#[test]
fn construction_of_zero_is_zero() {
    let phi = RestrictedSinogram::from_fn(grid(64, 8.0, 3), |_| 0.0).unwrap();
    let axes = vec![BoxAxis::new(-2.0, 2.0, 9).unwrap(); 2];
    let f = range_construct_f(&phi, &axes, &SliceInversionOptions::default()).unwrap();
    let FieldRn::Sampled(b) = f.kind() else { panic!() };
    assert!(b.values().iter().all(|v| *v == 0.0));
}

#[test]
fn construction_rejects_odd_data() {
    let phi = RestrictedSinogram::from_fn(grid(64, 8.0, 3), |p| (-p.s * p.s).exp() * (1.0 + 1e-3 * p.s)).unwrap();
    let axes = vec![BoxAxis::new(-2.0, 2.0, 9).unwrap(); 2];
    assert!(matches!(range_construct_f(&phi, &axes, &SliceInversionOptions::default()), Err(Error::NotInRange(_))));
}

#[test]
fn verdict_on_gaussian_data_passes() {
    let t = Instant::now();
    let phi = gaussian_sinogram(grid(128, 8.0, 7));
    let report = range_verdict(&phi, 4, &RangeOptions::default());
    for r in &report.rows {
        eprintln!("{} {:?} {:.3e} {:?} {}", r.criterion, r.m, r.value, r.verdict, r.note);
    }
    assert!(report.in_range);
    assert!(report.rows.iter().filter(|r| r.criterion == "moment").all(|r| r.verdict == Verdict::Pass));
    assert_eq!(report.first_failing_moment, None);
    eprintln!("verdict took {:?}", t.elapsed());
}

#[test]
fn verdict_flags_odd_perturbation() {
    let mut phi = gaussian_sinogram(grid(128, 8.0, 3));
    let g = phi.grid().clone();
    for i in 0..g.len() {
        let p = g.plane(i);
        phi.values_mut()[i] += 1e-3 * p.s * (-p.s * p.s).exp();
    }
    let report = range_verdict(&phi, 2, &RangeOptions::default());
    assert!(!report.in_range);
    let even = report.rows.iter().find(|r| r.criterion == "evenness").unwrap();
    assert_eq!(even.verdict, Verdict::Fail);
}

#[test]
fn verdict_on_quartic_exponential_profile() {
    let phi = RestrictedSinogram::from_fn(grid(128, 8.0, 7), |p| (-p.s.powi(4)).exp() * (-p.xpp[0] * p.xpp[0]).exp()).unwrap();
    let report = range_verdict(&phi, 4, &RangeOptions::default());
    let moment = |m| report.rows.iter().find(|r| r.criterion == "moment" && r.m == Some(m)).unwrap().verdict;
    // θ-independent moments are c|θ|^m for even m and vanish for odd m.
    for m in 0..=4 {
        assert_eq!(moment(m), Verdict::Pass, "m = {m}");
    }
    let ev = report.rows.iter().find(|r| r.criterion == "evenness").unwrap();
    assert_eq!(ev.verdict, Verdict::Pass);
    let rt = report.rows.iter().find(|r| r.criterion == "roundtrip").unwrap();
    assert_eq!(report.first_failing_moment, None);
    assert!(rt.value.is_finite());
}
