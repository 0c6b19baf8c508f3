//! Arc-length parametrized curves in the plane and on the unit 2-sphere.
//!
//! Curves are integrated from their (geodesic) curvature with a fixed-step
//! classical Runge–Kutta scheme. Plane curves use the turning angle
//! `θ' = κ`; sphere curves carry the frame `(p, T)` in R³ with
//! `p' = T`, `T' = κN - p`, `N = p × T`, renormalized after every step.

mod ode;
mod parametric;
mod shooting;

pub use ode::{burstall_ode, elastica_energy, elastica_ode, KappaLaw, KappaTrace, ENERGY_TOL};
pub use parametric::{arc_length_curve, Ellipse, LatitudeWave, ParametricCurve};
pub use shooting::{kappa_period, shoot_closed_elastica, ClosedElastica, ClosureTarget};

pub(crate) use parametric::gauss_legendre;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::diff::{line_d1, line_d2};
use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// Upper bound on the integration step.
pub const MAX_STEP: f64 = 1e-3;
/// Frame drift per step that triggers [`Error::StepTooLarge`].
pub const FRAME_DRIFT_TOL: f64 = 1e-6;
/// Curvature magnitude treated as blow-up.
pub const BLOW_UP: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ambient {
    Plane,
    Sphere2,
}

/// Number of steps and step length for a span.
pub fn step_for(span: f64) -> (usize, f64) {
    let h = MAX_STEP.min(span / 1e4);
    let n = (span / h).ceil().max(1.0) as usize;
    (n, span / n as f64)
}

pub(crate) fn rk4_step<const N: usize>(
    y: &[f64; N],
    s: f64,
    h: f64,
    f: &impl Fn(f64, &[f64; N]) -> [f64; N],
) -> [f64; N] {
    let add = |y: &[f64; N], k: &[f64; N], c: f64| {
        let mut out = *y;
        out.iter_mut().zip(k).for_each(|(o, k)| *o += c * k);
        out
    };
    let k1 = f(s, y);
    let k2 = f(s + 0.5 * h, &add(y, &k1, 0.5 * h));
    let k3 = f(s + 0.5 * h, &add(y, &k2, 0.5 * h));
    let k4 = f(s + h, &add(y, &k3, h));
    let mut out = *y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Position and unit tangent at the start of an integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StartFrame {
    pub position: Vec3,
    pub tangent: Vec3,
}

impl StartFrame {
    /// Origin heading along `x` in the plane; `(1,0,0)` heading along `y` on S².
    pub fn standard(ambient: Ambient) -> Self {
        match ambient {
            Ambient::Plane => StartFrame { position: Vec3::zeros(), tangent: Vec3::x() },
            Ambient::Sphere2 => StartFrame { position: Vec3::x(), tangent: Vec3::y() },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub s: f64,
    pub kappa: f64,
    pub dkappa: f64,
    pub ddkappa: f64,
    pub position: Vec3,
    pub tangent: Vec3,
}

/// Frame and curvature at an arbitrary arc length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub position: Vec3,
    pub tangent: Vec3,
    pub normal: Vec3,
    pub kappa: f64,
    pub dkappa: f64,
}

#[derive(Debug, Clone)]
pub struct CurvatureCurve {
    ambient: Ambient,
    samples: Vec<CurveSample>,
    closed: bool,
}

fn normal_of(ambient: Ambient, p: &Vec3, t: &Vec3) -> Vec3 {
    match ambient {
        Ambient::Plane => Vec3::new(-t.y, t.x, 0.0),
        Ambient::Sphere2 => p.cross(t),
    }
}

impl CurvatureCurve {
    /// Assemble from uniformly spaced samples (at least six).
    pub fn from_samples(ambient: Ambient, samples: Vec<CurveSample>) -> Result<Self> {
        if samples.len() < 6 {
            return Err(Error::InvalidArgument(format!("need at least 6 curve samples, got {}", samples.len())));
        }
        Ok(CurvatureCurve { ambient, samples, closed: false })
    }

    /// Declare the curve closed with period equal to its length.
    pub fn mark_closed(mut self) -> Self {
        self.closed = true;
        self
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn samples(&self) -> &[CurveSample] {
        &self.samples
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn start(&self) -> f64 {
        self.samples[0].s
    }

    pub fn length(&self) -> f64 {
        self.samples[self.samples.len() - 1].s - self.samples[0].s
    }

    pub fn step(&self) -> f64 {
        self.samples[1].s - self.samples[0].s
    }

    pub fn normal(&self, k: usize) -> Vec3 {
        let c = &self.samples[k];
        normal_of(self.ambient, &c.position, &c.tangent)
    }

    /// `|p(end) - p(start)| + |T(end) - T(start)|`.
    pub fn closure_gap(&self) -> f64 {
        let (a, b) = (&self.samples[0], &self.samples[self.samples.len() - 1]);
        (b.position - a.position).norm() + (b.tangent - a.tangent).norm()
    }

    pub fn kappa(&self) -> Vec<f64> {
        self.samples.iter().map(|c| c.kappa).collect()
    }

    fn component(&self, f: impl Fn(&CurveSample) -> f64) -> Vec<f64> {
        self.samples.iter().map(f).collect()
    }

    /// Curvature recomputed from the sampled positions by finite differences.
    pub fn extracted_curvature(&self) -> Vec<f64> {
        let h = self.step();
        let d1: Vec<Vec<f64>> = (0..3).map(|c| line_d1(&self.component(|x| x.position[c]), h)).collect();
        let d2: Vec<Vec<f64>> = (0..3).map(|c| line_d2(&self.component(|x| x.position[c]), h)).collect();
        (0..self.samples.len())
            .map(|k| {
                let v1 = Vec3::new(d1[0][k], d1[1][k], d1[2][k]);
                let v2 = Vec3::new(d2[0][k], d2[1][k], d2[2][k]);
                let speed = v1.norm();
                let n_ref = match self.ambient {
                    Ambient::Plane => Vec3::z(),
                    Ambient::Sphere2 => self.samples[k].position,
                };
                n_ref.dot(&v1.cross(&v2)) / speed.powi(3)
            })
            .collect()
    }

    /// Largest deviation of the finite-difference speed from 1.
    pub fn arc_length_deviation(&self) -> f64 {
        let h = self.step();
        let d1: Vec<Vec<f64>> = (0..3).map(|c| line_d1(&self.component(|x| x.position[c]), h)).collect();
        (0..self.samples.len())
            .map(|k| (Vec3::new(d1[0][k], d1[1][k], d1[2][k]).norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Frame at arc length `s` by cubic Hermite interpolation; closed curves
    /// are evaluated periodically.
    pub fn frame_at(&self, s: f64) -> Frame {
        let (s0, len, h) = (self.start(), self.length(), self.step());
        let mut t = s - s0;
        if self.closed {
            t = t.rem_euclid(len);
        }
        let last = self.samples.len() - 2;
        let i = ((t / h).floor().max(0.0) as usize).min(last);
        let (a, b) = (&self.samples[i], &self.samples[i + 1]);
        let x = (t - (a.s - s0)) / h;
        let (h00, h10, h01, h11) =
            ((1.0 + 2.0 * x) * (1.0 - x).powi(2), x * (1.0 - x).powi(2), x * x * (3.0 - 2.0 * x), x * x * (x - 1.0));
        let herm = |ya: f64, da: f64, yb: f64, db: f64| h00 * ya + h10 * h * da + h01 * yb + h11 * h * db;
        let herm3 = |ya: Vec3, da: Vec3, yb: Vec3, db: Vec3| ya * h00 + da * (h10 * h) + yb * h01 + db * (h11 * h);
        let dt = |c: &CurveSample| {
            let n = normal_of(self.ambient, &c.position, &c.tangent);
            match self.ambient {
                Ambient::Plane => n * c.kappa,
                Ambient::Sphere2 => n * c.kappa - c.position,
            }
        };
        let mut position = herm3(a.position, a.tangent, b.position, b.tangent);
        let mut tangent = herm3(a.tangent, dt(a), b.tangent, dt(b));
        if self.ambient == Ambient::Sphere2 {
            position.normalize_mut();
            tangent -= position * tangent.dot(&position);
        }
        tangent.normalize_mut();
        Frame {
            position,
            tangent,
            normal: normal_of(self.ambient, &position, &tangent),
            kappa: herm(a.kappa, a.dkappa, b.kappa, b.dkappa),
            dkappa: herm(a.dkappa, a.ddkappa, b.dkappa, b.ddkappa),
        }
    }
}

/// Integrate state `[κ, κ', frame...]` over `[s0, s0 + span]`, calling
/// `visit(s, state)` at every node including the first.
pub(crate) fn integrate_states(
    law: &KappaLaw,
    ambient: Ambient,
    start: StartFrame,
    s0: f64,
    span: f64,
    mut visit: impl FnMut(f64, &[f64; 8]),
) -> Result<()> {
    let (n, h) = step_for(span);
    let (k0, dk0) = law.initial(s0);
    let mut y = match ambient {
        Ambient::Plane => {
            let theta = start.tangent.y.atan2(start.tangent.x);
            [k0, dk0, start.position.x, start.position.y, theta, 0.0, 0.0, 0.0]
        }
        Ambient::Sphere2 => {
            let (p, t) = (start.position, start.tangent);
            [k0, dk0, p.x, p.y, p.z, t.x, t.y, t.z]
        }
    };
    let rhs = |s: f64, y: &[f64; 8]| -> [f64; 8] {
        let (k, dk) = law.eval(s, y[0], y[1]);
        match ambient {
            Ambient::Plane => {
                let th = y[4];
                [dk, law.second(s, y[0], y[1]), th.cos(), th.sin(), k, 0.0, 0.0, 0.0]
            }
            Ambient::Sphere2 => {
                let p = Vec3::new(y[2], y[3], y[4]);
                let t = Vec3::new(y[5], y[6], y[7]);
                let dt = p.cross(&t) * k - p;
                [dk, law.second(s, y[0], y[1]), t.x, t.y, t.z, dt.x, dt.y, dt.z]
            }
        }
    };
    visit(s0, &y);
    for i in 0..n {
        let s = s0 + i as f64 * h;
        y = rk4_step(&y, s, h, &rhs);
        if !y[0].is_finite() || y[0].abs() > BLOW_UP {
            return Err(Error::BlowUp { s: s + h });
        }
        if ambient == Ambient::Sphere2 {
            let mut p = Vec3::new(y[2], y[3], y[4]);
            let mut t = Vec3::new(y[5], y[6], y[7]);
            let drift = (p.norm() - 1.0).abs().max((t.norm() - 1.0).abs()).max(p.dot(&t).abs());
            if drift > FRAME_DRIFT_TOL {
                return Err(Error::StepTooLarge { drift });
            }
            p.normalize_mut();
            t -= p * t.dot(&p);
            t.normalize_mut();
            y[2..5].copy_from_slice(p.as_slice());
            y[5..8].copy_from_slice(t.as_slice());
        }
        visit(s0 + (i + 1) as f64 * h, &y);
    }
    Ok(())
}

pub(crate) fn sample_of(ambient: Ambient, law: &KappaLaw, s: f64, y: &[f64; 8]) -> CurveSample {
    let (position, tangent) = match ambient {
        Ambient::Plane => (Vec3::new(y[2], y[3], 0.0), Vec3::new(y[4].cos(), y[4].sin(), 0.0)),
        Ambient::Sphere2 => (Vec3::new(y[2], y[3], y[4]), Vec3::new(y[5], y[6], y[7])),
    };
    let (kappa, dkappa) = law.eval(s, y[0], y[1]);
    CurveSample { s, kappa, dkappa, ddkappa: law.second(s, y[0], y[1]), position, tangent }
}

/// Integrate a curve whose curvature obeys `law` over `[s0, s1]`.
pub fn integrate_law(
    law: &KappaLaw,
    ambient: Ambient,
    start: StartFrame,
    s_span: (f64, f64),
) -> Result<CurvatureCurve> {
    let (s0, s1) = s_span;
    if !(s1 > s0) || !s0.is_finite() || !s1.is_finite() {
        return Err(Error::InvalidArgument(format!("bad arc-length span [{s0}, {s1}]")));
    }
    let mut samples = Vec::with_capacity(step_for(s1 - s0).0 + 1);
    integrate_states(law, ambient, start, s0, s1 - s0, |s, y| samples.push(sample_of(ambient, law, s, y)))?;
    if let KappaLaw::Prescribed(_) = law {
        let h = samples[1].s - samples[0].s;
        let k: Vec<f64> = samples.iter().map(|c| c.kappa).collect();
        let (d1, d2) = (line_d1(&k, h), line_d2(&k, h));
        for (c, (a, b)) in samples.iter_mut().zip(d1.into_iter().zip(d2)) {
            c.dkappa = a;
            c.ddkappa = b;
        }
    }
    CurvatureCurve::from_samples(ambient, samples)
}

/// Integrate a curve with prescribed curvature `kappa(s)` from the standard
/// start frame.
pub fn integrate_curve(
    kappa: &(dyn Fn(f64) -> f64 + Sync),
    ambient: Ambient,
    s_span: (f64, f64),
) -> Result<CurvatureCurve> {
    integrate_law(&KappaLaw::Prescribed(kappa), ambient, StartFrame::standard(ambient), s_span)
}
