//! Closed curves given by a regular parametrization, resampled by arc length.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use super::{step_for, Ambient, CurvatureCurve, CurveSample, Vec3};
use crate::diff::line_d1;
use crate::error::{Error, Result};

const GL_NODES: [f64; 5] =
    [0.0, -0.538_469_310_105_683_1, 0.538_469_310_105_683_1, -0.906_179_845_938_664, 0.906_179_845_938_664];
const GL_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];

/// Five-point Gauss–Legendre rule on `[a, b]`.
pub(crate) fn gauss_legendre(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
    r * GL_NODES.iter().zip(&GL_WEIGHTS).map(|(x, w)| w * f(m + r * x)).sum::<f64>()
}

/// Truncated Taylor jet: value and first three derivatives.
#[derive(Debug, Clone, Copy)]
struct T3([f64; 4]);

impl T3 {
    fn var(t: f64) -> Self {
        T3([t, 1.0, 0.0, 0.0])
    }

    fn cst(c: f64) -> Self {
        T3([c, 0.0, 0.0, 0.0])
    }

    fn sin(self) -> Self {
        let [f, f1, f2, f3] = self.0;
        let (s, c) = f.sin_cos();
        T3([s, c * f1, -s * f1 * f1 + c * f2, -c * f1.powi(3) - 3.0 * s * f1 * f2 + c * f3])
    }

    fn cos(self) -> Self {
        let [f, f1, f2, f3] = self.0;
        let (s, c) = f.sin_cos();
        T3([c, -s * f1, -c * f1 * f1 - s * f2, s * f1.powi(3) - 3.0 * c * f1 * f2 - s * f3])
    }
}

impl Add for T3 {
    type Output = T3;
    fn add(self, o: T3) -> T3 {
        T3(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for T3 {
    type Output = T3;
    fn sub(self, o: T3) -> T3 {
        T3(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Mul for T3 {
    type Output = T3;
    fn mul(self, o: T3) -> T3 {
        let (f, g) = (self.0, o.0);
        T3([
            f[0] * g[0],
            f[1] * g[0] + f[0] * g[1],
            f[2] * g[0] + 2.0 * f[1] * g[1] + f[0] * g[2],
            f[3] * g[0] + 3.0 * f[2] * g[1] + 3.0 * f[1] * g[2] + f[0] * g[3],
        ])
    }
}

impl Mul<T3> for f64 {
    type Output = T3;
    fn mul(self, o: T3) -> T3 {
        T3(o.0.map(|x| self * x))
    }
}

fn jet3(x: T3, y: T3, z: T3) -> [Vec3; 4] {
    std::array::from_fn(|i| Vec3::new(x.0[i], y.0[i], z.0[i]))
}

/// A regular closed curve `γ(t)`, `t ∈ [0, period]`, with derivatives up to
/// third order.
pub trait ParametricCurve: Sync {
    fn ambient(&self) -> Ambient;
    fn period(&self) -> f64;
    /// `[γ, γ', γ'', γ''']` at `t`.
    fn jet(&self, t: f64) -> [Vec3; 4];
}

/// `(a cos t, b sin t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipse {
    pub a: f64,
    pub b: f64,
}

impl ParametricCurve for Ellipse {
    fn ambient(&self) -> Ambient {
        Ambient::Plane
    }

    fn period(&self) -> f64 {
        2.0 * PI
    }

    fn jet(&self, t: f64) -> [Vec3; 4] {
        let t = T3::var(t);
        jet3(self.a * t.cos(), self.b * t.sin(), T3::cst(0.0))
    }
}

/// Sphere curve `(cos φ cos t, cos φ sin t, sin φ)` with latitude
/// `φ(t) = base + Σ (α_k cos kt + β_k sin kt)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatitudeWave {
    pub base: f64,
    /// `(k, α_k, β_k)`.
    pub modes: Vec<(u32, f64, f64)>,
}

impl ParametricCurve for LatitudeWave {
    fn ambient(&self) -> Ambient {
        Ambient::Sphere2
    }

    fn period(&self) -> f64 {
        2.0 * PI
    }

    fn jet(&self, t: f64) -> [Vec3; 4] {
        let tv = T3::var(t);
        let phi = self.modes.iter().fold(T3::cst(self.base), |acc, &(k, a, b)| {
            let kt = k as f64 * tv;
            acc + a * kt.cos() + b * kt.sin()
        });
        let c = phi.cos();
        jet3(c * tv.cos(), c * tv.sin(), phi.sin())
    }
}

/// Resample a closed parametric curve by arc length. Curvature and its
/// derivative come from the parametrization; `κ''` by differences.
pub fn arc_length_curve(curve: &dyn ParametricCurve) -> Result<CurvatureCurve> {
    const CELLS: usize = 4096;
    let period = curve.period();
    let speed = |t: f64| curve.jet(t)[1].norm();
    let dt = period / CELLS as f64;
    let mut table = vec![0.0; CELLS + 1];
    for j in 0..CELLS {
        let (a, b) = (j as f64 * dt, (j + 1) as f64 * dt);
        if speed(a) < 1e-12 {
            return Err(Error::InvalidArgument(format!("curve is singular at t = {a}")));
        }
        table[j + 1] = table[j] + gauss_legendre(a, b, speed);
    }
    let length = table[CELLS];
    let (n, h) = step_for(length);
    let ambient = curve.ambient();

    let mut cell = 0;
    let mut samples = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let s = if i == n { length } else { i as f64 * h };
        while cell + 1 < CELLS && table[cell + 1] <= s {
            cell += 1;
        }
        let t0 = cell as f64 * dt;
        let mut t = t0 + (s - table[cell]) / speed(t0);
        for _ in 0..30 {
            let f = table[cell] + gauss_legendre(t0, t, speed) - s;
            let step = f / speed(t);
            t -= step;
            if step.abs() < 1e-15 * period {
                break;
            }
        }
        samples.push(sample_at(curve, ambient, s, t));
    }
    let k: Vec<f64> = samples.iter().map(|c| c.dkappa).collect();
    for (c, dd) in samples.iter_mut().zip(line_d1(&k, h)) {
        c.ddkappa = dd;
    }
    Ok(CurvatureCurve::from_samples(ambient, samples)?.mark_closed())
}

fn sample_at(curve: &dyn ParametricCurve, ambient: Ambient, s: f64, t: f64) -> CurveSample {
    let [g, g1, g2, g3] = curve.jet(t);
    let v = g1.norm();
    let n_ref = match ambient {
        Ambient::Plane => Vec3::z(),
        Ambient::Sphere2 => g,
    };
    let det = |a: &Vec3, b: &Vec3| n_ref.dot(&a.cross(b));
    let kappa = det(&g1, &g2) / v.powi(3);
    let dkappa_dt = det(&g1, &g3) / v.powi(3) - 3.0 * kappa * g1.dot(&g2) / (v * v);
    CurveSample { s, kappa, dkappa: dkappa_dt / v, ddkappa: 0.0, position: g, tangent: g1 / v }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn taylor_jet_matches_closed_form() {
        let t = 0.7;
        let x = (2.0 * T3::var(t)).sin() * T3::var(t).cos();
        // d/dt sin 2t cos t
        let d1 = 2.0 * (2.0 * t).cos() * t.cos() - (2.0 * t).sin() * t.sin();
        assert!((x.0[1] - d1).abs() < 1e-14);
        let h = 1e-4;
        let f2 = |t: f64| {
            let y = (2.0 * T3::var(t)).sin() * T3::var(t).cos();
            y.0[2]
        };
        assert!(((f2(t + h) - f2(t - h)) / (2.0 * h) - x.0[3]).abs() < 1e-6);
    }

    #[test]
    fn circle_has_unit_curvature() {
        let c = arc_length_curve(&Ellipse { a: 1.0, b: 1.0 }).unwrap();
        assert!((c.length() - 2.0 * PI).abs() < 1e-12);
        assert!(c.samples().iter().all(|x| (x.kappa - 1.0).abs() < 1e-12 && x.dkappa.abs() < 1e-12));
        assert!(c.closure_gap() < 1e-10);
    }

    #[test]
    fn ellipse_is_arc_length_parametrized() {
        let c = arc_length_curve(&Ellipse { a: 1.5, b: 1.0 }).unwrap();
        assert!(c.arc_length_deviation() < 1e-8);
        let k = c.extracted_curvature();
        for (x, e) in c.samples().iter().zip(&k).skip(3).step_by(97) {
            assert!((x.kappa - e).abs() < 1e-6);
        }
        let h = c.step();
        let kk = c.kappa();
        let dk = line_d1(&kk, h);
        for (x, d) in c.samples().iter().zip(&dk).skip(3).step_by(97) {
            assert!((x.dkappa - d).abs() < 1e-6);
        }
    }

    #[test]
    fn latitude_wave_stays_on_sphere() {
        let w = LatitudeWave { base: 0.0, modes: vec![(3, 0.1, 0.0), (2, 0.0, 0.05)] };
        let c = arc_length_curve(&w).unwrap();
        assert!(c.arc_length_deviation() < 1e-8);
        let k = c.extracted_curvature();
        for (x, e) in c.samples().iter().zip(&k).skip(3).step_by(101) {
            assert!((x.position.norm() - 1.0).abs() < 1e-12);
            assert!((x.kappa - e).abs() < 1e-6);
        }
    }
}
