//! Example surfaces with analytic derivative callbacks.
//!
//! * cylinders `(x(u), y(u), v)` over arc-length plane curves;
//! * Hopf cylinders `e^{iy} c(x)` over horizontal lifts `c` of sphere curves;
//! * homogeneous tori `(r₁ e^{iu}, r₂ e^{iv})` in S³;
//! * surfaces of revolution with the meridian parametrized by hyperbolic arc
//!   length.
//!
//! The Hopf map is `π(z₁, z₂) = (2 z₁ z̄₂, |z₁|² - |z₂|²)`.

use std::f64::consts::PI;

use nalgebra::{Vector2, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curves::{
    arc_length_curve, gauss_legendre, integrate_curve, integrate_law, shoot_closed_elastica, Ambient, ClosureTarget,
    CurvatureCurve, Ellipse, KappaLaw, LatitudeWave, StartFrame, Vec3,
};
use crate::error::{Error, Result};
use crate::functionals::enclosed_volume;
use crate::grid::{Axis, Grid2D};
use crate::surface::{fundamental_data, Jet, Orientation, ParamSurface, Point, SpaceForm};

/// Accepted deviation of a sample curve from unit speed.
pub const ARC_LENGTH_TOL: f64 = 1e-6;
/// Accepted deviation of a horizontal lift from the base curve.
pub const LIFT_TOL: f64 = 1e-7;
/// Accepted deviation of `r₁² + r₂²` from 1.
pub const RADII_TOL: f64 = 1e-6;
/// Smallest distance of a meridian to the rotation axis.
pub const AXIS_TOL: f64 = 1e-6;

fn p3(v: Vec3) -> Point {
    Vector4::new(v.x, v.y, v.z, 0.0)
}

/// Cylinder over a plane curve `γ`: `f(u, v) = (γ(u), v)`, `v ∈ v_span`.
pub fn cylinder_over_curve(curve: &CurvatureCurve, v_span: (f64, f64), nu: usize, nv: usize) -> Result<ParamSurface> {
    if curve.ambient() != Ambient::Plane {
        return Err(Error::InvalidArgument("cylinder needs a plane curve".into()));
    }
    let deviation = curve.arc_length_deviation();
    if deviation > ARC_LENGTH_TOL {
        return Err(Error::NotArcLength { deviation });
    }
    let u = if curve.is_closed() {
        let mut a = Axis::periodic(nu, curve.length());
        a.start = curve.start();
        a
    } else {
        Axis::open(nu, curve.start(), curve.start() + curve.length())
    };
    let grid = Grid2D::new(u, Axis::open(nv, v_span.0, v_span.1))?;
    ParamSurface::from_analytic(SpaceForm::Euclidean3, grid, |x, y| {
        let fr = curve.frame_at(x);
        let e3 = Point::new(0.0, 0.0, 1.0, 0.0);
        Jet {
            f: p3(fr.position) + e3 * y,
            fu: p3(fr.tangent),
            fv: e3,
            fuu: p3(fr.normal * fr.kappa),
            fuv: Point::zeros(),
            fvv: Point::zeros(),
        }
    })?
    .into_conformal()
}

type C2 = [Complex64; 2];

fn to_point(c: &C2) -> Point {
    Vector4::new(c[0].re, c[0].im, c[1].re, c[1].im)
}

fn from_point(p: &Point) -> C2 {
    [Complex64::new(p[0], p[1]), Complex64::new(p[2], p[3])]
}

/// `π(c) = (2 c₁ c̄₂, |c₁|² - |c₂|²)` as a point of R³.
pub fn hopf_map(c: &Point) -> Vec3 {
    let [z1, z2] = from_point(c);
    let w = 2.0 * z1 * z2.conj();
    Vec3::new(w.re, w.im, z1.norm_sqr() - z2.norm_sqr())
}

/// `Q(a, b)`, the polarization of `π`; `dπ_c(h) = 2 Q(c, h)`.
fn polar(a: &Point, b: &Point) -> Vec3 {
    let ([a1, a2], [b1, b2]) = (from_point(a), from_point(b));
    let w = a1 * b2.conj() + b1 * a2.conj();
    Vec3::new(w.re, w.im, (a1 * b1.conj()).re - (a2 * b2.conj()).re)
}

/// Orthonormal horizontal frame `e₁ = (-c̄₂, c̄₁)`, `e₂ = i e₁` at `c`.
fn horizontal_frame(c: &Point) -> [Point; 2] {
    let [z1, z2] = from_point(c);
    let e1 = [-z2.conj(), z1.conj()];
    let i = Complex64::i();
    [to_point(&e1), to_point(&[i * e1[0], i * e1[1]])]
}

/// Horizontal vector `h` at `c` with `dπ_c(h) = w` (for `w ⊥ π(c)`).
fn horizontal_with_image(c: &Point, w: &Vec3) -> Point {
    let [e1, e2] = horizontal_frame(c);
    let d1 = polar(c, &e1) * 2.0;
    let d2 = polar(c, &e2) * 2.0;
    e1 * (w.dot(&d1) / 4.0) + e2 * (w.dot(&d2) / 4.0)
}

/// A point of the fibre over `x ∈ S²`.
pub fn hopf_section(x: &Vec3) -> Point {
    if x.z > -0.5 {
        let a = ((1.0 + x.z) / 2.0).sqrt();
        let z2 = Complex64::new(x.x, -x.y) / (2.0 * a);
        to_point(&[Complex64::new(a, 0.0), z2])
    } else {
        let b = ((1.0 - x.z) / 2.0).sqrt();
        let z1 = Complex64::new(x.x, x.y) / (2.0 * b);
        to_point(&[z1, Complex64::new(b, 0.0)])
    }
}

/// Horizontal lift `c(x)` of `γ(2x)` sampled at `x₀ + jδ`, `j = 0..=n`.
fn horizontal_lift(curve: &CurvatureCurve, x0: f64, delta: f64, n: usize) -> Result<Vec<Point>> {
    let rhs = |x: f64, c: &[f64; 4]| -> [f64; 4] {
        let p = Point::from_column_slice(c);
        let fr = curve.frame_at(2.0 * x);
        let v = horizontal_with_image(&p, &(fr.tangent * 2.0));
        [v[0], v[1], v[2], v[3]]
    };
    let mut c: [f64; 4] = {
        let p = hopf_section(&curve.frame_at(2.0 * x0).position);
        [p[0], p[1], p[2], p[3]]
    };
    let mut out = Vec::with_capacity(n + 1);
    out.push(Point::from_column_slice(&c));
    for j in 0..n {
        c = crate::curves::rk4_step(&c, x0 + j as f64 * delta, delta, &rhs);
        let p = Point::from_column_slice(&c).normalize();
        c = [p[0], p[1], p[2], p[3]];
        out.push(p);
    }
    Ok(out)
}

/// The Hopf cylinder over an arc-length sphere curve, in the isometric chart
/// `(x, y)` with `x` the arc length of the horizontal lift (half that of the
/// curve) and `y` the fibre angle. Closed curves give Hopf tori on a twisted
/// periodic chart.
pub fn hopf_cylinder(curve: &CurvatureCurve, nx: usize, ny: usize) -> Result<ParamSurface> {
    if curve.ambient() != Ambient::Sphere2 {
        return Err(Error::InvalidArgument("Hopf cylinder needs a sphere curve".into()));
    }
    let deviation = curve.arc_length_deviation();
    if deviation > ARC_LENGTH_TOL {
        return Err(Error::NotArcLength { deviation });
    }
    let half = 0.5 * curve.length();
    let x_axis = if curve.is_closed() {
        let mut a = Axis::periodic(nx, half);
        a.start = 0.5 * curve.start();
        a
    } else {
        Axis::open(nx, 0.5 * curve.start(), 0.5 * curve.start() + half)
    };
    let y_axis = Axis::periodic(ny, 2.0 * PI);

    // lift on a refinement of the x nodes, including the period end
    let h = x_axis.spacing();
    let refine = (h / 5e-4).ceil().max(1.0) as usize;
    let stored = x_axis.stored();
    let nodes = if curve.is_closed() { stored + 1 } else { stored };
    let x_first = x_axis.coord(0);
    let lift = horizontal_lift(curve, x_first, h / refine as f64, (nodes - 1) * refine)?;
    let at: Vec<Point> = (0..nodes).map(|i| lift[i * refine]).collect();

    let interior = x_axis.interior();
    let mut drift = 0.0f64;
    for i in interior.clone() {
        let x = x_axis.coord(i);
        drift = drift.max((hopf_map(&at[i]) - curve.frame_at(2.0 * x).position).norm());
    }
    if drift > LIFT_TOL {
        return Err(Error::LiftDrift { drift });
    }

    // (c, c', c'') with c'' = -c + h, h horizontal and dπ(c'') = 4γ'' - 2Q(c', c')
    let lifted: Vec<(Point, Point, Point)> = (0..stored)
        .map(|i| {
            let c = at[i];
            let fr = curve.frame_at(2.0 * x_axis.coord(i));
            let dc = horizontal_with_image(&c, &(fr.tangent * 2.0));
            let gamma = hopf_map(&c);
            let w = (fr.normal * fr.kappa - gamma) * 4.0 - polar(&dc, &dc) * 2.0 + gamma * 2.0;
            (c, dc, -c + horizontal_with_image(&c, &w))
        })
        .collect();

    let twist = if curve.is_closed() {
        let (p, q) = (from_point(&at[stored]), from_point(&at[0]));
        let inner = p[0] * q[0].conj() + p[1] * q[1].conj();
        inner.arg()
    } else {
        0.0
    };

    let build = |sign: f64, orientation: Orientation| -> Result<ParamSurface> {
        let mut grid = Grid2D::new(x_axis, y_axis)?;
        if curve.is_closed() {
            grid = grid.with_twist((sign * twist).rem_euclid(2.0 * PI))?;
        }
        let nv = grid.nv();
        let jets: Vec<Jet> = (0..grid.len())
            .map(|k| {
                let i = k / nv;
                let (_, y) = grid.point(k);
                let (c, dc, ddc) = lifted[i];
                let rot = |p: &Point, extra: Complex64| {
                    let e = Complex64::from_polar(1.0, sign * y) * extra;
                    let [a, b] = from_point(p);
                    to_point(&[e * a, e * b])
                };
                let one = Complex64::new(1.0, 0.0);
                let i_s = Complex64::new(0.0, sign);
                Jet {
                    f: rot(&c, one),
                    fu: rot(&dc, one),
                    fv: rot(&c, i_s),
                    fuu: rot(&ddc, one),
                    fuv: rot(&dc, i_s),
                    fvv: rot(&c, -one),
                }
            })
            .collect();
        ParamSurface::from_jets(SpaceForm::Sphere3, grid, jets)?.with_orientation(orientation).into_conformal()
    };

    // Choose the fibre direction and orientation giving A = [[-2κ, -1], [-1, 0]].
    let probe = build(1.0, Orientation::Positive)?;
    let fd = fundamental_data(&probe)?;
    let grid = probe.grid();
    let k = (0..grid.len())
        .filter(|&k| grid.is_interior(k))
        .max_by(|&a, &b| {
            let ka = curve.frame_at(2.0 * grid.point(a).0).kappa.abs();
            let kb = curve.frame_at(2.0 * grid.point(b).0).kappa.abs();
            ka.total_cmp(&kb)
        })
        .unwrap_or(0);
    let a = fd.nodes[k].weingarten;
    let kappa = curve.frame_at(2.0 * grid.point(k).0).kappa;
    let orientation = if a[(0, 1)] > 0.0 { Orientation::Reversed } else { Orientation::Positive };
    let a00 = a[(0, 0)] * orientation.sign();
    let sign = if kappa != 0.0 && (a00 * -2.0 * kappa) < 0.0 { -1.0 } else { 1.0 };
    if sign == 1.0 && orientation == Orientation::Positive {
        return Ok(probe);
    }
    build(sign, orientation)
}

/// The flat torus `(r₁ e^{ix/r₁}, r₂ e^{iy/r₂})` in S³, oriented so that
/// `H = (r₂/r₁ - r₁/r₂)/2`. Radii within `RADII_TOL` of the unit circle are
/// rescaled onto it.
pub fn homogeneous_torus(r1: f64, r2: f64, nu: usize, nv: usize) -> Result<ParamSurface> {
    let norm = (r1 * r1 + r2 * r2).sqrt();
    if !(r1 > 0.0 && r2 > 0.0) || (norm * norm - 1.0).abs() > RADII_TOL {
        return Err(Error::BadRadii { r1, r2 });
    }
    let (r1, r2) = (r1 / norm, r2 / norm);
    let grid = Grid2D::torus(nu, nv, 2.0 * PI * r1, 2.0 * PI * r2)?;
    let s = ParamSurface::from_analytic(SpaceForm::Sphere3, grid, |x, y| {
        let (s1, c1) = (x / r1).sin_cos();
        let (s2, c2) = (y / r2).sin_cos();
        Jet {
            f: Point::new(r1 * c1, r1 * s1, r2 * c2, r2 * s2),
            fu: Point::new(-s1, c1, 0.0, 0.0),
            fv: Point::new(0.0, 0.0, -s2, c2),
            fuu: Point::new(-c1 / r1, -s1 / r1, 0.0, 0.0),
            fuv: Point::zeros(),
            fvv: Point::new(0.0, 0.0, -c2 / r2, -s2 / r2),
        }
    })?;
    // reference normal (-r₂ e^{iu}, r₁ e^{iv}) at the origin of the chart
    let reference = Point::new(-r2, 0.0, r1, 0.0);
    let s = if s.normal(0).dot(&reference) < 0.0 { s.with_orientation(Orientation::Reversed) } else { s };
    s.into_conformal()
}

/// A meridian `(z(t), r(t))` in the half-plane `r > 0` around the `z` axis.
pub trait Profile: Sync {
    /// Point, first and second derivative.
    fn eval(&self, t: f64) -> [Vector2<f64>; 3];
    fn domain(&self) -> (f64, f64);
    fn periodic(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", deny_unknown_fields)]
pub enum ProfileSpec {
    /// Straight segment between two `(z, r)` points.
    Segment { from: [f64; 2], to: [f64; 2] },
    /// `(z, r) = center + radius (cos θ, sin θ)`, `θ ∈ [from, to]`.
    Arc { center: [f64; 2], radius: f64, from: f64, to: f64 },
    /// Full circle; yields a torus of revolution.
    Circle { center: [f64; 2], radius: f64 },
}

impl Profile for ProfileSpec {
    fn eval(&self, t: f64) -> [Vector2<f64>; 3] {
        match *self {
            ProfileSpec::Segment { from, to } => {
                let (a, b) = (Vector2::from(from), Vector2::from(to));
                [a + (b - a) * t, b - a, Vector2::zeros()]
            }
            ProfileSpec::Arc { center, radius, .. } | ProfileSpec::Circle { center, radius } => {
                let (s, c) = t.sin_cos();
                [
                    Vector2::from(center) + Vector2::new(c, s) * radius,
                    Vector2::new(-s, c) * radius,
                    Vector2::new(-c, -s) * radius,
                ]
            }
        }
    }

    fn domain(&self) -> (f64, f64) {
        match *self {
            ProfileSpec::Segment { .. } => (0.0, 1.0),
            ProfileSpec::Arc { from, to, .. } => (from, to),
            ProfileSpec::Circle { .. } => (0.0, 2.0 * PI),
        }
    }

    fn periodic(&self) -> bool {
        matches!(self, ProfileSpec::Circle { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RevolutionMode {
    /// Meridian by hyperbolic arc length: conformal chart.
    Conformal,
    /// Meridian by its own parameter.
    Raw,
}

/// Profile parameter `t(x)` with `dt/dx` and `d²t/dx²` for hyperbolic arc
/// length `x`.
struct HyperbolicReparam<'a> {
    profile: &'a dyn Profile,
    cells: Vec<(f64, f64)>,
    length: f64,
}

impl<'a> HyperbolicReparam<'a> {
    const CELLS: usize = 4096;

    fn speed(profile: &dyn Profile, t: f64) -> f64 {
        let [p, d, _] = profile.eval(t);
        d.norm() / p.y
    }

    fn new(profile: &'a dyn Profile) -> Self {
        let (t0, t1) = profile.domain();
        let dt = (t1 - t0) / Self::CELLS as f64;
        let mut cells = Vec::with_capacity(Self::CELLS + 1);
        let mut acc = 0.0;
        cells.push((t0, 0.0));
        for j in 0..Self::CELLS {
            let a = t0 + j as f64 * dt;
            acc += gauss_legendre(a, a + dt, |t| Self::speed(profile, t));
            cells.push((a + dt, acc));
        }
        HyperbolicReparam { profile, cells, length: acc }
    }

    fn param(&self, x: f64) -> f64 {
        let j = self.cells.partition_point(|&(_, xc)| xc <= x).saturating_sub(1).min(self.cells.len() - 1);
        let (ta, xa) = self.cells[j];
        let speed = |t: f64| Self::speed(self.profile, t);
        let mut t = ta + (x - xa) / speed(ta);
        for _ in 0..40 {
            let step = (xa + gauss_legendre(ta, t, speed) - x) / speed(t);
            t -= step;
            if step.abs() < 1e-16 * t.abs().max(1.0) {
                break;
            }
        }
        t
    }
}

fn revolution_jet(profile: &dyn Profile, t: f64, dt: f64, ddt: f64, y: f64) -> Jet {
    let [p, d, dd] = profile.eval(t);
    let px = d * dt;
    let pxx = dd * dt * dt + d * ddt;
    let (sy, cy) = y.sin_cos();
    let (z, r) = (p.x, p.y);
    Jet {
        f: Point::new(r * cy, r * sy, z, 0.0),
        fu: Point::new(px.y * cy, px.y * sy, px.x, 0.0),
        fv: Point::new(-r * sy, r * cy, 0.0, 0.0),
        fuu: Point::new(pxx.y * cy, pxx.y * sy, pxx.x, 0.0),
        fuv: Point::new(-px.y * sy, px.y * cy, 0.0, 0.0),
        fvv: Point::new(-r * cy, -r * sy, 0.0, 0.0),
    }
}

/// Surface of revolution `(r cos y, r sin y, z)` of a meridian.
pub fn surface_of_revolution(
    profile: &dyn Profile,
    mode: RevolutionMode,
    nx: usize,
    ny: usize,
) -> Result<ParamSurface> {
    let (t0, t1) = profile.domain();
    let distance =
        (0..=4096).map(|j| profile.eval(t0 + (t1 - t0) * j as f64 / 4096.0)[0].y).fold(f64::INFINITY, f64::min);
    if distance <= AXIS_TOL {
        return Err(Error::AxisContact { distance });
    }
    let y_axis = Axis::periodic(ny, 2.0 * PI);
    match mode {
        RevolutionMode::Raw => {
            let x_axis = if profile.periodic() { Axis::periodic(nx, t1 - t0) } else { Axis::open(nx, t0, t1) };
            let grid = Grid2D::new(x_axis, y_axis)?;
            ParamSurface::from_analytic(SpaceForm::Euclidean3, grid, |x, y| revolution_jet(profile, x, 1.0, 0.0, y))
        }
        RevolutionMode::Conformal => {
            let re = HyperbolicReparam::new(profile);
            let x_axis =
                if profile.periodic() { Axis::periodic(nx, re.length) } else { Axis::open(nx, 0.0, re.length) };
            let grid = Grid2D::new(x_axis, y_axis)?;
            ParamSurface::from_analytic(SpaceForm::Euclidean3, grid, |x, y| {
                let t = re.param(x);
                let [p, d, dd] = profile.eval(t);
                let v = d.norm();
                let dt = p.y / v;
                let ddt = dt * (d.y / v - p.y * d.dot(&dd) / v.powi(3));
                revolution_jet(profile, t, dt, ddt, y)
            })?
            .into_conformal()
        }
    }
}

fn orient_outward(s: ParamSurface) -> Result<ParamSurface> {
    Ok(if enclosed_volume(&s)? < 0.0 { s.with_orientation(Orientation::Reversed) } else { s })
}

/// The unit sphere in the Mercator chart `(sech x cos y, sech x sin y, tanh x)`,
/// `|x| ≤ x_max`, with outward normal. Marked closed: the two omitted caps
/// have area `O(e^{-2 x_max})`.
pub fn round_sphere(nx: usize, ny: usize, x_max: f64) -> Result<ParamSurface> {
    let grid = Grid2D::new(Axis::open(nx, -x_max, x_max), Axis::periodic(ny, 2.0 * PI))?;
    let s = ParamSurface::from_analytic(SpaceForm::Euclidean3, grid, |x, y| {
        let (r, z) = (1.0 / x.cosh(), x.tanh());
        let (dr, dz) = (-r * z, r * r);
        let (ddr, ddz) = (r * (z * z - r * r), -2.0 * r * r * z);
        let (sy, cy) = y.sin_cos();
        Jet {
            f: Point::new(r * cy, r * sy, z, 0.0),
            fu: Point::new(dr * cy, dr * sy, dz, 0.0),
            fv: Point::new(-r * sy, r * cy, 0.0, 0.0),
            fuu: Point::new(ddr * cy, ddr * sy, ddz, 0.0),
            fuv: Point::new(-dr * sy, dr * cy, 0.0, 0.0),
            fvv: Point::new(-r * cy, -r * sy, 0.0, 0.0),
        }
    })?
    .mark_closed()
    .into_conformal()?;
    orient_outward(s)
}

/// Torus of revolution with core radius `big` and tube radius `small`,
/// outward normal.
pub fn torus_of_revolution(big: f64, small: f64, nx: usize, ny: usize) -> Result<ParamSurface> {
    if !(big > small && small > 0.0) {
        return Err(Error::InvalidArgument(format!("need R > a > 0, got R = {big}, a = {small}")));
    }
    let profile = ProfileSpec::Circle { center: [0.0, big], radius: small };
    orient_outward(surface_of_revolution(&profile, RevolutionMode::Conformal, nx, ny)?)
}

/// Curves referenced from job files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", deny_unknown_fields)]
pub enum CurveSpec {
    /// Plane circle of the given radius.
    Circle {
        radius: f64,
    },
    Ellipse {
        a: f64,
        b: f64,
    },
    /// Plane segment of the given length.
    Line {
        length: f64,
    },
    /// Plane curve with curvature from `κ'' + ½κ³ = (a + bs)κ`.
    Burstall {
        a: f64,
        b: f64,
        kappa0: f64,
        dkappa0: f64,
        span: [f64; 2],
    },
    /// Closed sphere curve of constant geodesic curvature.
    SphereCircle {
        curvature: f64,
    },
    /// Sphere curve `(cos φ cos t, cos φ sin t, sin φ)`.
    LatitudeWave {
        base: f64,
        modes: Vec<(u32, f64, f64)>,
    },
    /// Closed generalized elastica found by shooting.
    Elastica {
        a_range: [f64; 2],
        b_range: [f64; 2],
        target: ClosureTarget,
    },
}

impl CurveSpec {
    pub fn build(&self) -> Result<CurvatureCurve> {
        match self {
            CurveSpec::Circle { radius } => {
                if !(*radius > 0.0) {
                    return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
                }
                arc_length_curve(&Ellipse { a: *radius, b: *radius })
            }
            CurveSpec::Ellipse { a, b } => {
                if !(*a > 0.0 && *b > 0.0) {
                    return Err(Error::InvalidArgument(format!("semi-axes must be positive, got {a}, {b}")));
                }
                arc_length_curve(&Ellipse { a: *a, b: *b })
            }
            CurveSpec::Line { length } => integrate_curve(&|_| 0.0, Ambient::Plane, (0.0, *length)),
            CurveSpec::Burstall { a, b, kappa0, dkappa0, span } => integrate_law(
                &KappaLaw::Burstall { a: *a, b: *b, kappa0: *kappa0, dkappa0: *dkappa0 },
                Ambient::Plane,
                StartFrame::standard(Ambient::Plane),
                (span[0], span[1]),
            ),
            CurveSpec::SphereCircle { curvature } => {
                let c = *curvature;
                let len = 2.0 * PI / (1.0 + c * c).sqrt();
                Ok(integrate_curve(&move |_| c, Ambient::Sphere2, (0.0, len))?.mark_closed())
            }
            CurveSpec::LatitudeWave { base, modes } => {
                arc_length_curve(&LatitudeWave { base: *base, modes: modes.clone() })
            }
            CurveSpec::Elastica { a_range, b_range, target } => {
                let sol = shoot_closed_elastica((a_range[0], a_range[1]), (b_range[0], b_range[1]), &[*target])?;
                sol[0].curve()
            }
        }
    }
}

/// A surface description as read from a job file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "variant", deny_unknown_fields)]
pub enum BuilderSpec {
    CylinderOverCurve { curve: CurveSpec, v_span: [f64; 2] },
    HopfCylinder { curve: CurveSpec },
    HomogeneousTorus { r1: f64, r2: f64 },
    SurfaceOfRevolution { profile: ProfileSpec, mode: RevolutionMode },
    RoundSphere { x_max: f64 },
    TorusOfRevolution { big: f64, small: f64 },
}

impl BuilderSpec {
    /// Build with `resolution` nodes along each axis.
    pub fn build(&self, resolution: usize) -> Result<ParamSurface> {
        let n = resolution;
        match self {
            BuilderSpec::CylinderOverCurve { curve, v_span } => {
                cylinder_over_curve(&curve.build()?, (v_span[0], v_span[1]), n, n)
            }
            BuilderSpec::HopfCylinder { curve } => hopf_cylinder(&curve.build()?, n, n),
            BuilderSpec::HomogeneousTorus { r1, r2 } => homogeneous_torus(*r1, *r2, n, n),
            BuilderSpec::SurfaceOfRevolution { profile, mode } => surface_of_revolution(profile, *mode, n, n),
            BuilderSpec::RoundSphere { x_max } => round_sphere(n, n, *x_max),
            BuilderSpec::TorusOfRevolution { big, small } => torus_of_revolution(*big, *small, n, n),
        }
    }

    /// The underlying curve, for builders that have one.
    pub fn curve(&self) -> Option<&CurveSpec> {
        match self {
            BuilderSpec::CylinderOverCurve { curve, .. } | BuilderSpec::HopfCylinder { curve } => Some(curve),
            _ => None,
        }
    }
}
