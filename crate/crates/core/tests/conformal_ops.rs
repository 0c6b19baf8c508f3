use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use conwill_core::builders::{cylinder_over_curve, homogeneous_torus, hopf_cylinder, round_sphere, CurveSpec};
use conwill_core::conformal::{
    anticommute_defect, dbar_residual, dbar_vector_field, default_basis, delta_op, delta_star, hopf_differential,
    is_strongly_isothermic, pair_form_function, pair_qd_endo, qd_inner, IsothermicVerdict, QuadraticDifferential,
};
use conwill_core::surface::{integrate_2form, Jet, Point};
use conwill_core::{
    fundamental_data, Axis, EndoField, Error, Grid2D, ParamSurface, ScalarField, SpaceForm, VectorField,
};
use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

fn flat_patch(n: usize) -> ParamSurface {
    let grid = Grid2D::new(Axis::open(n, 0.0, 1.0), Axis::open(n, 0.0, 1.0)).unwrap();
    ParamSurface::from_analytic(SpaceForm::Euclidean3, grid, |x, y| Jet {
        f: Point::new(x, y, 0.0, 0.0),
        fu: Point::new(1.0, 0.0, 0.0, 0.0),
        fv: Point::new(0.0, 1.0, 0.0, 0.0),
        fuu: Point::zeros(),
        fuv: Point::zeros(),
        fvv: Point::zeros(),
    })
    .unwrap()
    .into_conformal()
    .unwrap()
}

fn unit_cylinder() -> ParamSurface {
    cylinder_over_curve(&CurveSpec::Circle { radius: 1.0 }.build().unwrap(), (0.0, 1.0), 64, 16).unwrap()
}

fn interior(s: &ParamSurface) -> Vec<usize> {
    (0..s.grid().len()).filter(|&k| s.grid().is_interior(k)).collect()
}

#[test]
fn delta_vanishes_on_round_sphere() {
    let s = round_sphere(64, 32, 3.0).unwrap();
    let fd = fundamental_data(&s).unwrap();
    let u = ScalarField::from_fn(s.grid(), |x, y| x.sin() + y.cos());
    let d = delta_op(&s, &fd, &u).unwrap();
    assert!(d.values().iter().all(|m| m.abs().max() < 1e-9));
}

#[test]
fn delta_of_one_on_unit_cylinder() {
    let s = unit_cylinder();
    let fd = fundamental_data(&s).unwrap();
    let d = delta_op(&s, &fd, &ScalarField::constant(s.grid(), 1.0)).unwrap();
    let trace_free = Matrix2::new(-0.5, 0.0, 0.0, 0.5);
    for k in interior(&s) {
        let n = &fd.nodes[k];
        assert!((n.trace_free - trace_free).abs().max() < 1e-9);
        assert!((d[k] - 2.0 * trace_free * n.complex).abs().max() < 1e-9);
    }
}

#[test]
fn hopf_differential_of_sphere_vanishes() {
    let s = round_sphere(64, 32, 3.0).unwrap();
    let fd = fundamental_data(&s).unwrap();
    let q = hopf_differential(&s, &fd).unwrap();
    assert!(q.coeffs.iter().all(|c| c.norm() < 1e-9));
}

#[test]
fn clifford_hopf_differential() {
    let r = 0.5f64.sqrt();
    let s = homogeneous_torus(r, r, 32, 32).unwrap();
    let fd = fundamental_data(&s).unwrap();
    let q = hopf_differential(&s, &fd).unwrap();
    assert!(q.coeffs.iter().all(|c| (c - q.coeffs[0]).norm() < 1e-12));
    let lhs = delta_star(&s, &fd, &q).unwrap();
    let rhs = fd.density_form(|n| 4.0 * (n.mean * n.mean - n.gauss));
    for k in 0..s.grid().len() {
        assert_abs_diff_eq!(lhs[k], 4.0 * fd.area_form()[k], epsilon = 1e-10);
        assert_abs_diff_eq!(lhs[k], rhs[k], epsilon = 1e-10);
    }
}

#[test]
fn cylinder_hopf_differential_is_minus_quarter_kappa() {
    let curve = CurveSpec::Ellipse { a: 1.5, b: 1.0 }.build().unwrap();
    let s = cylinder_over_curve(&curve, (0.0, 1.0), 128, 16).unwrap();
    let fd = fundamental_data(&s).unwrap();
    let q = hopf_differential(&s, &fd).unwrap();
    for k in interior(&s) {
        let kappa = -2.0 * fd.nodes[k].mean;
        assert!((q.coeffs[k] - Complex64::new(-kappa / 4.0, 0.0)).norm() < 1e-9);
    }
}

#[test]
fn dbar_kills_constant_fields_on_flat_torus() {
    let r = 0.5f64.sqrt();
    let s = homogeneous_torus(r, r, 32, 32).unwrap();
    let fd = fundamental_data(&s).unwrap();
    let x = VectorField::from_fn(s.grid(), |_, _| Vector2::new(0.3, -1.2));
    let r = dbar_vector_field(&s, &fd, &x).unwrap();
    assert!(r.values().iter().all(|m| m.abs().max() < 1e-12));
}

#[test]
fn dbar_of_quadratic_field_on_flat_patch() {
    let s = flat_patch(32);
    let fd = fundamental_data(&s).unwrap();
    let x = VectorField::from_fn(s.grid(), |x, _| Vector2::new(x * x, 0.0));
    let r = dbar_vector_field(&s, &fd, &x).unwrap();
    for k in interior(&s) {
        let (u, _) = s.grid().point(k);
        let dx = Matrix2::new(2.0 * u, 0.0, 0.0, 0.0);
        let j = fd.nodes[k].complex;
        assert!((r[k] - (j * dx - dx * j)).abs().max() < 1e-9, "{}", r[k]);
    }
    assert!(anticommute_defect(&fd, &r) < 1e-9);
}

#[test]
fn dbar_anticommutes_with_j_on_hopf_torus() {
    let wave = CurveSpec::LatitudeWave { base: 0.2, modes: vec![(2, 0.1, 0.05)] }.build().unwrap();
    let s = hopf_cylinder(&wave, 64, 32).unwrap();
    let fd = fundamental_data(&s).unwrap();
    let x = VectorField::from_fn(s.grid(), |x, y| Vector2::new((2.0 * x).sin() * y.cos(), x.cos() + y.sin()));
    assert!(anticommute_defect(&fd, &dbar_vector_field(&s, &fd, &x).unwrap()) < 1e-9);
}

#[test]
fn cauchy_riemann_residual() {
    let s = flat_patch(64);
    let grid = s.grid();
    let constant = QuadraticDifferential::constant(grid, Complex64::new(2.0, 1.0));
    assert!(dbar_residual(grid, &constant).unwrap() < 1e-12);
    let z = QuadraticDifferential::from_fn(grid, |z| z);
    assert!(dbar_residual(grid, &z).unwrap() < 1e-8);
    let zbar = QuadraticDifferential::from_fn(grid, |z| z.conj());
    let area: f64 = grid.domain_area();
    assert_abs_diff_eq!(dbar_residual(grid, &zbar).unwrap(), area.sqrt(), epsilon = 1e-6);
}

#[test]
fn pairing_with_area_form() {
    let s = homogeneous_torus(0.6, 0.8, 32, 32).unwrap();
    let fd = fundamental_data(&s).unwrap();
    let one = ScalarField::constant(s.grid(), 1.0);
    assert_abs_diff_eq!(pair_form_function(&s, &fd.area_form(), &one).unwrap(), 4.0 * PI * PI * 0.48, epsilon = 1e-10);
    assert_eq!(pair_form_function(&s, &fd.area_form(), &ScalarField::constant(s.grid(), 0.0)).unwrap(), 0.0);
}

#[test]
fn pairing_with_zero_endomorphism() {
    let s = homogeneous_torus(0.6, 0.8, 16, 16).unwrap();
    let fd = fundamental_data(&s).unwrap();
    let q = QuadraticDifferential::constant(s.grid(), Complex64::new(1.0, 1.0));
    assert_eq!(pair_qd_endo(&s, &fd, &q, &EndoField::zero(s.grid())).unwrap(), 0.0);
}

#[test]
fn pairing_rejects_commuting_endomorphisms() {
    let s = homogeneous_torus(0.6, 0.8, 16, 16).unwrap();
    let fd = fundamental_data(&s).unwrap();
    let q = QuadraticDifferential::constant(s.grid(), Complex64::new(1.0, 0.0));
    let id = EndoField(vec![Matrix2::identity(); s.grid().len()]);
    assert!(matches!(pair_qd_endo(&s, &fd, &q, &id), Err(Error::NotAnticommuting { .. })));
}

#[test]
fn holomorphic_differentials_are_orthogonal_to_dbar_image() {
    let s = homogeneous_torus(0.6, 0.8, 48, 48).unwrap();
    let fd = fundamental_data(&s).unwrap();
    let x = VectorField::from_fn(s.grid(), |x, y| {
        Vector2::new((x / 0.6).sin() * (2.0 * y / 0.8).cos(), 0.4 + (y / 0.8).sin() * (x / 0.6).cos())
    });
    let r = dbar_vector_field(&s, &fd, &x).unwrap();
    let sq = ScalarField(x.values().iter().zip(&fd.nodes).map(|(v, n)| (v.transpose() * n.metric * v)[0]).collect());
    let x_norm = pair_form_function(&s, &fd.area_form(), &sq).unwrap().sqrt();
    for phi in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(-0.7, 0.4)] {
        let q = QuadraticDifferential::constant(s.grid(), phi);
        let q_norm = qd_inner(&s, &fd, &q, &q).sqrt();
        let value = pair_qd_endo(&s, &fd, &q, &r).unwrap();
        assert!(value.abs() < 1e-7 * q_norm * x_norm, "{value}");
    }
}

#[test]
fn hopf_cylinder_pairing_matches_curvature_integral() {
    let wave = CurveSpec::LatitudeWave { base: 0.3, modes: vec![(2, 0.1, 0.0)] }.build().unwrap();
    let s = hopf_cylinder(&wave, 128, 32).unwrap();
    let fd = fundamental_data(&s).unwrap();
    let q = QuadraticDifferential::constant(s.grid(), Complex64::new(1.0, 0.0));
    let one = ScalarField::constant(s.grid(), 1.0);
    let lhs = pair_qd_endo(&s, &fd, &q, &delta_op(&s, &fd, &one).unwrap()).unwrap();
    let rhs = integrate_2form(&s, &fd.density_form(|n| 8.0 * n.mean)).unwrap();
    assert!((lhs - rhs).abs() < 1e-8 * rhs.abs().max(1.0), "{lhs} {rhs}");
    let dstar = delta_star(&s, &fd, &q).unwrap();
    let idstar = delta_star(&s, &fd, &q.scaled(Complex64::new(0.0, 1.0))).unwrap();
    let (mean_form, area_form) = (fd.density_form(|n| 8.0 * n.mean), fd.area_form());
    for k in 0..s.grid().len() {
        assert_abs_diff_eq!(dstar[k], mean_form[k], epsilon = 1e-8);
        assert_abs_diff_eq!(idstar[k], 8.0 * area_form[k], epsilon = 1e-8);
    }
}

#[test]
fn cylinder_is_strongly_isothermic_via_i_dz2() {
    let curve = CurveSpec::Ellipse { a: 1.5, b: 1.0 }.build().unwrap();
    let s = cylinder_over_curve(&curve, (0.0, 1.0), 128, 16).unwrap();
    let fd = fundamental_data(&s).unwrap();
    let report = is_strongly_isothermic(&s, &fd, &default_basis(s.grid()), 1e-6).unwrap();
    assert_eq!(report.verdict, IsothermicVerdict::StronglyIsothermic);
    let c = &report.coefficients;
    assert!(c[0].abs() < 1e-9 * c[1].abs(), "{c:?}");
}

#[test]
fn cmc_torus_is_strongly_isothermic_via_i_q() {
    let s = homogeneous_torus(0.6, 0.8, 32, 32).unwrap();
    let fd = fundamental_data(&s).unwrap();
    let report = is_strongly_isothermic(&s, &fd, &default_basis(s.grid()), 1e-6).unwrap();
    assert_eq!(report.verdict, IsothermicVerdict::StronglyIsothermic);
    let iq = hopf_differential(&s, &fd).unwrap().coeffs[0] * Complex64::i();
    let found = report.q.unwrap().coeffs[0];
    assert!((found / iq).im.abs() < 1e-9 * (found / iq).norm(), "{found} {iq}");
}

#[test]
fn empty_basis_is_an_error() {
    let s = homogeneous_torus(0.6, 0.8, 16, 16).unwrap();
    let fd = fundamental_data(&s).unwrap();
    assert!(matches!(is_strongly_isothermic(&s, &fd, &[], 1e-6), Err(Error::EmptyBasis)));
}
