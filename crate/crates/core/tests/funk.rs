use igt_core::funk::*;
use igt_core::numkit::{legendre_p, legendre_p_at_zero, make_sphere_quadrature, real_harmonics, sphere_surface_area};
use igt_core::Error;

fn unit(v: &[f64]) -> Vec<f64> {
    let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / r).collect()
}

/// Element of the complex for n = 3, k = 1 from `v ∈ S^1` and local
/// coordinates `(c, w'')` of `w` in `Rv ⊕ R^2`.
fn element3(v: [f64; 2], local: [f64; 3]) -> SphericalComplexElement {
    let v = unit(&v);
    let l = unit(&local);
    SphericalComplexElement::new(v.clone(), vec![l[0] * v[0], l[0] * v[1], l[1], l[2]]).unwrap()
}

#[test]
fn block_rotation_examples() {
    let id = make_block_rotation(&[0.0, 1.0], 4).unwrap();
    let m = id.matrix();
    for i in 0..4 {
        for j in 0..4 {
            assert_eq!(m[i * 4 + j], if i == j { 1.0 } else { 0.0 });
        }
    }
    let flip = make_block_rotation(&[0.0, -1.0], 4).unwrap();
    assert_eq!(flip.apply(&[0.0, 1.0, 0.0, 0.0]), vec![0.0, -1.0, 0.0, 0.0]);
    let v = unit(&[0.3, -0.7]);
    let r = make_block_rotation(&v, 4).unwrap();
    assert!(r.orthogonality_defect() < 1e-14);
    let col = r.apply(&[0.0, 1.0, 0.0, 0.0]);
    assert!((col[0] - v[0]).abs() < 1e-15 && (col[1] - v[1]).abs() < 1e-15);
    assert_eq!(&col[2..], &[0.0, 0.0]);
    assert!(matches!(make_block_rotation(&[0.5, 0.5], 4), Err(Error::InvalidArgument(_))));
}

#[test]
fn element_validation() {
    assert!(SphericalComplexElement::new(vec![1.0, 0.0], vec![0.0, 1.0, 0.0, 0.0]).is_err());
    assert!(SphericalComplexElement::new(vec![1.0, 0.0], vec![0.6, 0.0, 0.8, 0.0]).is_ok());
    assert!(SphericalComplexElement::new(vec![1.0, 0.0], vec![0.6, 0.0, 0.7, 0.0]).is_err());
}

#[test]
fn constant_and_linear_fields() {
    let one = SphereField::constant(3, 1.0).unwrap();
    let lin = SphereField::linear(3, vec![0.3, -1.0, 2.0, 0.5]).unwrap();
    for e in [element3([1.0, 0.2], [0.3, 0.5, -0.1]), element3([-0.4, 0.9], [1.0, 0.0, 0.0]), element3([0.0, 1.0], [0.0, 0.0, 1.0])] {
        assert!((funk_forward_restricted(&one, &e, 16).unwrap() - 1.0).abs() < 1e-14);
        assert!(funk_forward_restricted(&lin, &e, 16).unwrap().abs() < 1e-14);
    }
}

#[test]
fn zonal_degree_two_picks_up_the_multiplier() {
    // Axis inside R^3_v = span((v,0), e3, e4).
    let v = unit(&[0.8, 0.6]);
    let local_axis = unit(&[0.4, -0.5, 0.7]);
    let axis = vec![local_axis[0] * v[0], local_axis[0] * v[1], local_axis[1], local_axis[2]];
    let f = SphereField::zonal_legendre(3, 2, &axis).unwrap();
    let e = element3([0.8, 0.6], [0.2, 0.9, 0.4]);
    let got = funk_forward_restricted(&f, &e, 16).unwrap();
    let wa: f64 = e.w().iter().zip(&axis).map(|(a, b)| a * b).sum();
    assert!((got + 0.5 * legendre_p(2, wa)).abs() < 1e-14);
}

#[test]
fn funk_hecke_multipliers_on_s2() {
    let qs = make_sphere_quadrature(2, 16, true).unwrap();
    let axis = unit(&[0.3, -0.4, 0.85]);
    for m in 0..=8 {
        let f = SphereField::zonal_legendre(2, m, &axis).unwrap();
        let mu = legendre_p_at_zero(m);
        let mut worst = 0.0f64;
        for i in 0..qs.len() {
            let zeta = qs.point(i);
            let e = SphericalComplexElement::new(vec![zeta[0].signum()], zeta.to_vec());
            let e = match e {
                Ok(e) => e,
                Err(_) => continue,
            };
            let got = funk_forward_restricted(&f, &e, 64).unwrap();
            let za: f64 = zeta.iter().zip(&axis).map(|(a, b)| a * b).sum();
            worst = worst.max((got - mu * legendre_p(m, za)).abs());
        }
        if m % 2 == 0 {
            assert!(worst < 1e-8, "m={m} worst {worst}");
        } else {
            assert!(worst < 1e-10, "m={m} worst {worst}");
        }
    }
    assert_eq!([legendre_p_at_zero(0), legendre_p_at_zero(2), legendre_p_at_zero(4)], [1.0, -0.5, 0.375]);
}

#[test]
fn sign_flips_leave_the_value_unchanged() {
    let f = SphereField::zonal_gaussian(3, &unit(&[0.2, 0.5, -0.3, 0.7]), 2.0).unwrap();
    let e = element3([0.6, -0.8], [0.3, -0.2, 0.9]);
    let base = funk_forward_restricted(&f, &e, 32).unwrap();
    let neg = |x: &[f64]| x.iter().map(|y| -y).collect::<Vec<_>>();
    for (v, w) in [(neg(e.v()), e.w().to_vec()), (e.v().to_vec(), neg(e.w())), (neg(e.v()), neg(e.w()))] {
        let e2 = SphericalComplexElement::new(v, w).unwrap();
        assert!((funk_forward_restricted(&f, &e2, 32).unwrap() - base).abs() < 1e-12);
    }
}

#[test]
fn intrinsic_and_rotated_routes_agree() {
    let f = SphereField::zonal_gaussian(3, &unit(&[0.9, -0.1, 0.3, 0.2]), 3.0).unwrap();
    for e in [element3([0.6, -0.8], [0.3, -0.2, 0.9]), element3([-1.0, 0.1], [0.9, 0.1, 0.0]), element3([0.0, 1.0], [0.2, 0.2, 0.2])] {
        let a = funk_forward_restricted(&f, &e, 40).unwrap();
        let b = funk_forward_rotated(&f, &e, 40).unwrap();
        assert!((a - b).abs() < 1e-10, "{a} {b}");
    }
}

#[test]
fn counterexample_field_diverges_on_every_circle() {
    let f = SphereField::counterexample_ftilde(3, 1).unwrap();
    let e = element3([0.6, -0.8], [0.3, -0.2, 0.9]);
    match funk_forward_restricted(&f, &e, 32) {
        Err(Error::Divergence { partial, .. }) => assert!(partial[0].is_finite() && partial[0] > 0.0),
        other => panic!("expected divergence, got {other:?}"),
    }
}

#[test]
fn duality_constant_for_the_unit_field() {
    let check = duality_identity_check(&SphereField::constant(3, 1.0).unwrap(), 3, 1, &DualityOrders::default()).unwrap();
    let sig = |d| sphere_surface_area(d).unwrap();
    assert!((check.constant - 2.0 * sig(3) / (sig(2) * sig(1))).abs() < 1e-15);
    assert!((check.constant - 0.5).abs() < 1e-15);
    assert!((check.lhs - 1.0).abs() < 1e-13);
    assert!(check.rel_error < 1e-4);
}

#[test]
fn duality_for_zero_field() {
    let check = duality_identity_check(&SphereField::constant(3, 0.0).unwrap(), 3, 1, &DualityOrders::default()).unwrap();
    assert_eq!((check.lhs, check.rhs), (0.0, 0.0));
}

#[test]
fn duality_for_smooth_fields() {
    let cases = [
        (SphereField::zonal_gaussian(3, &unit(&[0.5, 0.1, -0.3, 0.8]), 1.5).unwrap(), 3, 1),
        (SphereField::zonal_legendre(3, 4, &unit(&[0.1, 0.7, 0.7, 0.1])).unwrap(), 3, 1),
        (SphereField::zonal_gaussian(4, &unit(&[0.3, -0.2, 0.6, 0.5, 0.5]), 1.0).unwrap(), 4, 2),
        (SphereField::zonal_gaussian(4, &unit(&[0.3, 0.4, -0.5, 0.2, 0.6]), 1.0).unwrap(), 4, 1),
    ];
    for (f, n, k) in cases {
        let check = duality_identity_check(&f, n, k, &DualityOrders::default()).unwrap();
        assert!(check.rel_error < 1e-3, "n={n} k={k} {check:?}");
    }
}

#[test]
fn duality_rejects_non_integrable_weight() {
    let f = SphereField::counterexample_ftilde(3, 1).unwrap();
    assert!(matches!(duality_identity_check(&f, 3, 1, &DualityOrders::default()), Err(Error::Precondition(_))));
}

#[test]
fn slice_inversion_examples() {
    let q = make_sphere_quadrature(2, 18, true).unwrap();
    let c = funk_invert_slice(&q, &vec![2.5; q.len()], 8).unwrap();
    assert!((c.eval(&unit(&[0.3, 0.2, 0.1])) - 2.5).abs() < 1e-12);

    // Y_{2,0} is index 0 of the degree-2 block.
    let y20 = |p: &[f64]| real_harmonics(2, 2, p).unwrap()[2][0];
    let phi: Vec<f64> = (0..q.len()).map(|i| -0.5 * y20(q.point(i))).collect();
    let f = funk_invert_slice(&q, &phi, 8).unwrap();
    for p in [[0.0, 0.0, 1.0], [0.6, 0.0, 0.8], [0.36, 0.48, 0.8]] {
        assert!((f.eval(&p) - y20(&p)).abs() < 1e-12);
    }

    let odd: Vec<f64> = (0..q.len()).map(|i| q.point(i)[2]).collect();
    assert!(matches!(funk_invert_slice(&q, &odd, 8), Err(Error::NotAFunkImage { .. })));
    let q3 = make_sphere_quadrature(3, 8, true).unwrap();
    assert!(matches!(funk_invert_slice(&q3, &vec![1.0; q3.len()], 2), Err(Error::UnsupportedDimension(_))));
}

#[test]
fn slice_roundtrip_on_band_limited_even_fields() {
    let q = make_sphere_quadrature(2, 18, true).unwrap();
    // Even field of degree 8 mixing several zonal terms.
    let axes = [unit(&[0.2, 0.3, 0.9]), unit(&[-0.7, 0.1, 0.2]), unit(&[0.1, -0.9, 0.4])];
    let f = |p: &[f64]| {
        let d = |a: &[f64]| p.iter().zip(a).map(|(x, y)| x * y).sum::<f64>();
        1.0 + 0.7 * legendre_p(2, d(&axes[0])) - 0.4 * legendre_p(4, d(&axes[1])) + 0.3 * legendre_p(8, d(&axes[2])) + 0.2 * legendre_p(6, d(&axes[0]))
    };
    let field = SphereField::sampled(q.clone(), (0..q.len()).map(|i| f(q.point(i))).collect()).unwrap();
    let phi: Vec<f64> = (0..q.len())
        .map(|i| {
            let z = q.point(i);
            let e = SphericalComplexElement::new(vec![if z[0] < 0.0 { -1.0 } else { 1.0 }], z.to_vec()).unwrap();
            funk_forward_restricted(&field, &e, 64).unwrap()
        })
        .collect();
    let back = funk_invert_slice(&q, &phi, 8).unwrap();
    let mut worst = 0.0f64;
    for i in 0..q.len() {
        worst = worst.max((back.eval(q.point(i)) - f(q.point(i))).abs());
    }
    assert!(worst < 1e-8, "{worst}");
}

#[test]
fn pointwise_reconstruction_on_s3() {
    let axis = unit(&[0.3, -0.5, 0.4, 0.7]);
    let field = |m| SphereField::zonal_legendre(3, m, &axis).unwrap();
    let opts = ReconstructOptions::default();
    let theta = [0.6, 0.0, 0.8, 0.0];
    for m in [0, 2, 4, 8] {
        let f = field(m);
        let got = reconstruct_from_field(&f, &theta, 24, &opts).unwrap();
        assert!((got - f.eval(&theta)).abs() < 1e-6, "m={m}: {got} vs {}", f.eval(&theta));
        let neg: Vec<f64> = theta.iter().map(|x| -x).collect();
        let back = reconstruct_from_field(&f, &neg, 24, &opts).unwrap();
        assert!((back - got).abs() < 1e-9);
    }
    let one = SphereField::constant(3, 1.0).unwrap();
    for t in [theta, [0.0, 0.6, 0.0, 0.8], [0.5, 0.5, 0.5, 0.5]] {
        assert!((reconstruct_from_field(&one, &t, 24, &opts).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn reconstruction_on_the_degenerate_set() {
    let f = SphereField::zonal_legendre(3, 2, &unit(&[0.3, -0.5, 0.4, 0.7])).unwrap();
    let theta = [0.0, 0.0, 0.6, 0.8];
    let got = reconstruct_from_field(&f, &theta, 24, &ReconstructOptions::default()).unwrap();
    // Cap average with radius 1e-2 is second-order accurate.
    assert!((got - f.eval(&theta)).abs() < 1e-3);
    let strict = ReconstructOptions { continuity: false, ..Default::default() };
    assert!(matches!(reconstruct_from_field(&f, &theta, 24, &strict), Err(Error::DegeneratePoint(_))));
}

#[test]
fn ftilde_norm_converges_and_funk_integral_grows() {
    let logs: Vec<f64> = (0..=30).map(|j| 2f64.powi(j)).collect();
    let eps: Vec<f64> = (4..=20).map(|j| 2f64.powi(-j)).collect();
    let r = counterexample_scan_ftilde(4, 1, 3.0, &logs, &eps, 1.0).unwrap();
    // ∫_0^T (1+t)^{-3} dt = (1 - (1+T)^{-2}) / 2.
    for (t, v) in logs.iter().zip(&r.norm.values) {
        let exact = 0.5 * (1.0 - (1.0 + t).powi(-2));
        assert!((v - exact).abs() < 1e-12, "{t}: {v} vs {exact}");
    }
    assert!(r.norm.last_relative_increment < 1e-8 && r.norm.cauchy);
    // ∫_ε^{1/2} dt/(t(1 - log t)) = log((1 - log ε)/(1 + log 2)).
    for (e, v) in eps.iter().zip(&r.funk.values) {
        let exact = ((1.0 - e.ln()) / (1.0 + std::f64::consts::LN_2)).ln();
        assert!((v - exact).abs() < 1e-12);
    }
    assert!(r.funk.strictly_increasing && !r.funk.cauchy);
}

#[test]
fn truncated_funk_integrals_of_ftilde_and_a_bounded_field() {
    let e = element3([0.6, -0.8], [0.3, -0.2, 0.9]);
    let eps: Vec<f64> = (4..=20).map(|j| 2f64.powi(-j)).collect();
    let ft = funk_truncation_scan(&SphereField::counterexample_ftilde(3, 1).unwrap(), &e, &eps).unwrap();
    assert!(ft.strictly_increasing && !ft.cauchy);
    let bounded = funk_truncation_scan(&SphereField::constant(3, 1.0).unwrap(), &e, &eps).unwrap();
    assert!(bounded.cauchy);
    assert!((bounded.values.last().unwrap() - 1.0).abs() < 1e-5);
}
