use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use conwill_core::builders::{
    cylinder_over_curve, homogeneous_torus, hopf_cylinder, hopf_map, surface_of_revolution, BuilderSpec, CurveSpec,
    ProfileSpec, RevolutionMode,
};
use conwill_core::conformal::{default_basis, is_strongly_isothermic, polynomial_basis, IsothermicVerdict};
use conwill_core::curves::{Ambient, CurvatureCurve, CurveSample};
use conwill_core::functionals::{willmore_energy, FunctionalKind};
use conwill_core::multiplier::{solve_multiplier, CERTIFY_TOL};
use conwill_core::{fundamental_data, Error, ParamSurface};
use nalgebra::Vector3;

fn interior(s: &ParamSurface) -> Vec<usize> {
    (0..s.grid().len()).filter(|&k| s.grid().is_interior(k)).collect()
}

#[test]
fn cylinder_weingarten_is_minus_kappa() {
    let curve = CurveSpec::Ellipse { a: 1.5, b: 1.0 }.build().unwrap();
    let s = cylinder_over_curve(&curve, (0.0, 1.0), 128, 16).unwrap();
    let fd = fundamental_data(&s).unwrap();
    for k in interior(&s) {
        let kappa = curve.frame_at(s.grid().point(k).0).kappa;
        let a = fd.nodes[k].weingarten;
        assert!((a[(0, 0)] + kappa).abs() < 1e-6 && a[(0, 1)].abs() < 1e-6 && a[(1, 1)].abs() < 1e-6);
    }
}

#[test]
fn cylinder_over_line_is_flat() {
    let s = cylinder_over_curve(&CurveSpec::Line { length: 3.0 }.build().unwrap(), (0.0, 1.0), 32, 16).unwrap();
    let fd = fundamental_data(&s).unwrap();
    assert!(fd.nodes.iter().all(|n| n.weingarten.abs().max() < 1e-12));
}

#[test]
fn cylinder_needs_arc_length() {
    let samples = (0..64)
        .map(|i| {
            let s = i as f64 * 0.01;
            CurveSample {
                s,
                kappa: 0.0,
                dkappa: 0.0,
                ddkappa: 0.0,
                position: Vector3::new(2.0 * s, 0.0, 0.0),
                tangent: Vector3::new(1.0, 0.0, 0.0),
            }
        })
        .collect();
    let curve = CurvatureCurve::from_samples(Ambient::Plane, samples).unwrap();
    assert!(matches!(cylinder_over_curve(&curve, (0.0, 1.0), 32, 16), Err(Error::NotArcLength { .. })));
}

#[test]
fn burstall_cylinder_is_isothermic_and_constrained_willmore() {
    let burstall = CurveSpec::Burstall { a: 0.2, b: 0.02, kappa0: 1.0, dkappa0: 0.0, span: [0.0, 10.0] };
    let s = cylinder_over_curve(&burstall.build().unwrap(), (0.0, 2.0), 256, 32).unwrap();
    let fd = fundamental_data(&s).unwrap();
    let iso = is_strongly_isothermic(&s, &fd, &default_basis(s.grid()), 1e-6).unwrap();
    assert_eq!(iso.verdict, IsothermicVerdict::StronglyIsothermic);
    let cert =
        solve_multiplier(&s, FunctionalKind::Willmore, &polynomial_basis(s.grid(), 2).unwrap(), CERTIFY_TOL).unwrap();
    assert!(cert.verdict.is_critical(), "{cert:?}");
    let spread =
        interior(&s).iter().map(|&k| fd.nodes[k].mean).fold((f64::MAX, f64::MIN), |(lo, hi), h| (lo.min(h), hi.max(h)));
    assert!(spread.1 - spread.0 > 0.1);
}

#[test]
fn great_circle_gives_clifford_torus() {
    let s = hopf_cylinder(&CurveSpec::SphereCircle { curvature: 0.0 }.build().unwrap(), 64, 64).unwrap();
    let grid = s.grid();
    assert_abs_diff_eq!(grid.u.length, PI, epsilon = 1e-9);
    assert_abs_diff_eq!(grid.v.length, 2.0 * PI, epsilon = 1e-12);
    assert_abs_diff_eq!(grid.twist, PI, epsilon = 1e-7);
    assert_abs_diff_eq!(willmore_energy(&s).unwrap(), 2.0 * PI * PI, epsilon = 1e-6);
    let fd = fundamental_data(&s).unwrap();
    assert!(fd.nodes.iter().all(|n| n.mean.abs() < 1e-7));
}

#[test]
fn hopf_cylinder_weingarten_form() {
    let wave = CurveSpec::LatitudeWave { base: 0.2, modes: vec![(2, 0.1, 0.05), (3, 0.0, 0.04)] };
    let curve = wave.build().unwrap();
    let s = hopf_cylinder(&curve, 128, 32).unwrap();
    let fd = fundamental_data(&s).unwrap();
    for n in &fd.nodes {
        let a = n.weingarten;
        let kappa = -n.mean;
        assert!((a[(0, 0)] + 2.0 * kappa).abs() < 1e-5);
        assert!((a[(0, 1)] + 1.0).abs() < 1e-5 && (a[(1, 0)] + 1.0).abs() < 1e-5 && a[(1, 1)].abs() < 1e-5);
    }
}

#[test]
fn hopf_fibres_are_closed_great_circles() {
    let curve = CurveSpec::LatitudeWave { base: 0.1, modes: vec![(2, 0.1, 0.0)] }.build().unwrap();
    let s = hopf_cylinder(&curve, 64, 32).unwrap();
    let grid = s.grid();
    assert!(grid.v.periodic);
    assert_abs_diff_eq!(grid.v.length, 2.0 * PI, epsilon = 1e-12);
    for (k, jet) in s.jets().iter().enumerate() {
        assert!((jet.f.norm() - 1.0).abs() < 1e-7);
        let (x, _) = grid.point(k);
        let image = hopf_map(&jet.f);
        let expected = curve.frame_at(x * 2.0).position;
        assert!((image - expected).norm() < 1e-7, "{k}");
    }
}

#[test]
fn latitude_circle_matches_product_torus() {
    let s = hopf_cylinder(&CurveSpec::SphereCircle { curvature: 1.0 }.build().unwrap(), 64, 64).unwrap();
    let fd = fundamental_data(&s).unwrap();
    let t = 2f64.sqrt() - 1.0;
    let r1 = 1.0 / (1.0 + t * t).sqrt();
    let torus = homogeneous_torus(r1, t * r1, 16, 16).unwrap();
    let tfd = fundamental_data(&torus).unwrap();
    for n in &fd.nodes {
        assert!((n.mean - tfd.nodes[0].mean).abs() < 1e-6 && (n.gauss - tfd.nodes[0].gauss).abs() < 1e-6);
        assert!((n.mean + 1.0).abs() < 1e-6);
    }
}

#[test]
#[allow(clippy::approx_constant)]
fn torus_radii_are_validated() {
    assert!(matches!(homogeneous_torus(0.6, 0.7, 16, 16), Err(Error::BadRadii { .. })));
    assert!(matches!(homogeneous_torus(-0.6, 0.8, 16, 16), Err(Error::BadRadii { .. })));
    let s = homogeneous_torus(0.70710678, 0.70710678, 16, 16).unwrap();
    let fd = fundamental_data(&s).unwrap();
    assert!(fd.nodes.iter().all(|n| n.mean.abs() < 1e-14));
    assert!(s.jets().iter().all(|j| (j.f.norm() - 1.0).abs() < 1e-14));
}

#[test]
fn homogeneous_torus_is_flat() {
    let s = homogeneous_torus(0.6, 0.8, 16, 16).unwrap();
    let fd = fundamental_data(&s).unwrap();
    assert!(fd.nodes.iter().all(|n| (n.metric - nalgebra::Matrix2::identity()).abs().max() < 1e-14));
}

#[test]
fn revolution_charts_are_conformal() {
    let line = ProfileSpec::Segment { from: [0.0, 1.0], to: [3.0, 1.0] };
    let s = surface_of_revolution(&line, RevolutionMode::Conformal, 64, 32).unwrap();
    assert!(s.conformality_residual() < 1e-7);
    let fd = fundamental_data(&s).unwrap();
    assert!(interior(&s).iter().all(|&k| (fd.nodes[k].mean.abs() - 0.5).abs() < 1e-9));

    let band = ProfileSpec::Arc { center: [0.0, 0.0], radius: 1.0, from: 0.3, to: PI - 0.3 };
    let s = surface_of_revolution(&band, RevolutionMode::Conformal, 128, 32).unwrap();
    assert!(s.conformality_residual() < 1e-7);
}

#[test]
fn profile_touching_axis_is_rejected() {
    let seg = ProfileSpec::Segment { from: [0.0, 1.0], to: [1.0, 0.0] };
    assert!(matches!(surface_of_revolution(&seg, RevolutionMode::Raw, 32, 16), Err(Error::AxisContact { .. })));
}

#[test]
fn builder_specs_from_json() {
    let spec: BuilderSpec = serde_json::from_str(r#"{"variant": "homogeneous-torus", "r1": 0.6, "r2": 0.8}"#).unwrap();
    let s = spec.build(32).unwrap();
    assert_eq!((s.grid().nu(), s.grid().nv()), (32, 32));
    let spec: BuilderSpec = serde_json::from_str(
        r#"{"variant": "cylinder-over-curve", "curve": {"kind": "ellipse", "a": 1.5, "b": 1.0}, "v_span": [0.0, 1.0]}"#,
    )
    .unwrap();
    assert!(spec.curve().is_some());
    assert!(serde_json::from_str::<BuilderSpec>(r#"{"variant": "homogeneous-torus", "r1": 0.6, "r2": 0.8, "r3": 1}"#)
        .is_err());
}
