use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use conwill_core::builders::{cylinder_over_curve, homogeneous_torus, round_sphere, torus_of_revolution, CurveSpec};
use conwill_core::functionals::{area, enclosed_volume, gradient, willmore_energy, FunctionalKind};
use conwill_core::surface::{Jet, Point};
use conwill_core::{fundamental_data, Axis, Error, Grid2D, ParamSurface, SpaceForm};

fn unit_square() -> ParamSurface {
    let grid = Grid2D::new(Axis::open(16, 0.0, 1.0), Axis::open(16, 0.0, 1.0)).unwrap();
    ParamSurface::from_analytic(SpaceForm::Euclidean3, grid, |x, y| Jet {
        f: Point::new(x, y, 0.0, 0.0),
        fu: Point::new(1.0, 0.0, 0.0, 0.0),
        fv: Point::new(0.0, 1.0, 0.0, 0.0),
        fuu: Point::zeros(),
        fuv: Point::zeros(),
        fvv: Point::zeros(),
    })
    .unwrap()
}

fn clifford(n: usize) -> ParamSurface {
    let r = 0.5f64.sqrt();
    homogeneous_torus(r, r, n, n).unwrap()
}

#[test]
fn areas() {
    assert_abs_diff_eq!(
        area(&homogeneous_torus(0.6, 0.8, 32, 32).unwrap()).unwrap(),
        4.0 * PI * PI * 0.48,
        epsilon = 1e-10
    );
    assert_abs_diff_eq!(area(&clifford(32)).unwrap(), 2.0 * PI * PI, epsilon = 1e-10);
    let square = unit_square();
    assert_abs_diff_eq!(area(&square).unwrap(), square.grid().domain_area(), epsilon = 1e-12);
}

#[test]
fn willmore_energies() {
    assert_abs_diff_eq!(willmore_energy(&clifford(32)).unwrap(), 2.0 * PI * PI, epsilon = 1e-10);
    assert_eq!(willmore_energy(&unit_square()).unwrap(), 0.0);
    let h = 7.0 / 24.0;
    let expected = 4.0 * PI * PI * 0.48 * (1.0 + h * h);
    assert_abs_diff_eq!(
        willmore_energy(&homogeneous_torus(0.6, 0.8, 32, 32).unwrap()).unwrap(),
        expected,
        epsilon = 1e-10
    );
}

#[test]
fn sphere_is_willmore() {
    let s = round_sphere(128, 64, 4.0).unwrap();
    let g = gradient(&s, FunctionalKind::Willmore).unwrap();
    let fd = fundamental_data(&s).unwrap();
    let scale = fd.nodes.iter().map(|n| n.area).fold(0.0, f64::max);
    let worst = (0..s.grid().len()).filter(|&k| s.grid().is_interior(k)).map(|k| g[k].abs()).fold(0.0, f64::max);
    assert!(worst < 1e-6 * scale, "{worst}");
}

#[test]
fn cylinder_area_gradient_is_curvature() {
    let s = cylinder_over_curve(&CurveSpec::Ellipse { a: 1.5, b: 1.0 }.build().unwrap(), (0.0, 1.0), 128, 16).unwrap();
    let fd = fundamental_data(&s).unwrap();
    let g = gradient(&s, FunctionalKind::Area).unwrap();
    let curve = CurveSpec::Ellipse { a: 1.5, b: 1.0 }.build().unwrap();
    let area = fd.area_form();
    for k in (0..s.grid().len()).filter(|&k| s.grid().is_interior(k)) {
        let (x, _) = s.grid().point(k);
        let kappa = curve.frame_at(x).kappa;
        assert_abs_diff_eq!(g[k], kappa * area[k], epsilon = 1e-9);
    }
}

#[test]
fn cmc_willmore_gradient() {
    let s = homogeneous_torus(0.6, 0.8, 32, 32).unwrap();
    let fd = fundamental_data(&s).unwrap();
    let g = gradient(&s, FunctionalKind::Willmore).unwrap();
    let expected = fd.density_form(|n| 2.0 * n.mean * (n.mean * n.mean - n.gauss));
    for k in 0..s.grid().len() {
        assert_abs_diff_eq!(g[k], expected[k], epsilon = 1e-10);
    }
}

#[test]
fn volume_gradient_is_area_form() {
    let s = torus_of_revolution(2.0, 0.5, 32, 32).unwrap();
    let fd = fundamental_data(&s).unwrap();
    assert_eq!(gradient(&s, FunctionalKind::Volume).unwrap(), fd.area_form());
}

#[test]
fn enclosed_volumes() {
    let sphere = round_sphere(256, 128, 12.0).unwrap();
    assert_abs_diff_eq!(enclosed_volume(&sphere).unwrap(), 4.0 * PI / 3.0, epsilon = 1e-4);
    let torus = torus_of_revolution(2.0, 0.5, 96, 96).unwrap();
    let v = enclosed_volume(&torus).unwrap();
    assert_abs_diff_eq!(v, PI * PI, epsilon = 1e-4);
    let reversed = torus.clone().with_orientation(torus.orientation().flipped());
    assert_abs_diff_eq!(enclosed_volume(&reversed).unwrap(), -v, epsilon = 1e-12);
}

#[test]
fn volume_needs_closed_euclidean_surface() {
    let cyl = cylinder_over_curve(&CurveSpec::Circle { radius: 1.0 }.build().unwrap(), (0.0, 1.0), 32, 16).unwrap();
    assert!(matches!(enclosed_volume(&cyl), Err(Error::NotClosed)));
    assert!(matches!(enclosed_volume(&clifford(16)), Err(Error::WrongSpaceForm { .. })));
}
