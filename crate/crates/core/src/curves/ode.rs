//! Curvature laws: prescribed functions, generalized elastica
//! `2κ'' + κ³ + aκ + b = 0` and the forced equation `κ'' + ½κ³ = (a + bs)κ`.

use serde::Serialize;

use super::{rk4_step, step_for, BLOW_UP};
use crate::error::{Error, Result};

/// Relative drift of the elastica first integral accepted by [`elastica_ode`].
pub const ENERGY_TOL: f64 = 1e-8;

#[derive(Clone, Copy)]
pub enum KappaLaw<'a> {
    Prescribed(&'a (dyn Fn(f64) -> f64 + Sync)),
    Elastica { a: f64, b: f64, kappa0: f64, dkappa0: f64 },
    Burstall { a: f64, b: f64, kappa0: f64, dkappa0: f64 },
}

impl KappaLaw<'_> {
    pub(crate) fn initial(&self, s0: f64) -> (f64, f64) {
        match *self {
            KappaLaw::Prescribed(f) => (f(s0), 0.0),
            KappaLaw::Elastica { kappa0, dkappa0, .. } | KappaLaw::Burstall { kappa0, dkappa0, .. } => {
                (kappa0, dkappa0)
            }
        }
    }

    /// `(κ, κ')` at `s` given the carried state.
    pub(crate) fn eval(&self, s: f64, k: f64, dk: f64) -> (f64, f64) {
        match *self {
            KappaLaw::Prescribed(f) => (f(s), 0.0),
            _ => (k, dk),
        }
    }

    /// `κ''` from the law; zero for prescribed curvature.
    pub(crate) fn second(&self, s: f64, k: f64, _dk: f64) -> f64 {
        match *self {
            KappaLaw::Prescribed(_) => 0.0,
            KappaLaw::Elastica { a, b, .. } => -0.5 * (k * k * k + a * k + b),
            KappaLaw::Burstall { a, b, .. } => (a + b * s) * k - 0.5 * k * k * k,
        }
    }
}

/// Uniform samples of `κ` and `κ'`.
#[derive(Debug, Clone, Serialize)]
pub struct KappaTrace {
    pub s0: f64,
    pub step: f64,
    pub kappa: Vec<f64>,
    pub dkappa: Vec<f64>,
    /// Largest relative change of the first integral (elastica only).
    pub energy_drift: Option<f64>,
}

impl KappaTrace {
    pub fn s(&self, i: usize) -> f64 {
        self.s0 + i as f64 * self.step
    }

    pub fn len(&self) -> usize {
        self.kappa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kappa.is_empty()
    }
}

/// `E = κ'² + κ⁴/4 + aκ²/2 + bκ`.
pub fn elastica_energy(a: f64, b: f64, k: f64, dk: f64) -> f64 {
    dk * dk + 0.25 * k.powi(4) + 0.5 * a * k * k + b * k
}

fn trace(law: &KappaLaw, s_span: (f64, f64)) -> Result<KappaTrace> {
    let (s0, s1) = s_span;
    if !(s1 > s0) || !s0.is_finite() || !s1.is_finite() {
        return Err(Error::InvalidArgument(format!("bad arc-length span [{s0}, {s1}]")));
    }
    let (n, h) = step_for(s1 - s0);
    let mut y = {
        let (k, dk) = law.initial(s0);
        [k, dk]
    };
    let rhs = |s: f64, y: &[f64; 2]| [y[1], law.second(s, y[0], y[1])];
    let mut kappa = Vec::with_capacity(n + 1);
    let mut dkappa = Vec::with_capacity(n + 1);
    kappa.push(y[0]);
    dkappa.push(y[1]);
    for i in 0..n {
        let s = s0 + i as f64 * h;
        y = rk4_step(&y, s, h, &rhs);
        if !y[0].is_finite() || y[0].abs() > BLOW_UP {
            return Err(Error::BlowUp { s: s + h });
        }
        kappa.push(y[0]);
        dkappa.push(y[1]);
    }
    Ok(KappaTrace { s0, step: h, kappa, dkappa, energy_drift: None })
}

/// Solve `2κ'' + κ³ + aκ + b = 0` and report the drift of its first integral
/// relative to the size of its terms along the trace.
pub fn elastica_ode(a: f64, b: f64, kappa0: f64, dkappa0: f64, s_span: (f64, f64)) -> Result<KappaTrace> {
    let mut t = trace(&KappaLaw::Elastica { a, b, kappa0, dkappa0 }, s_span)?;
    let e0 = elastica_energy(a, b, kappa0, dkappa0);
    let (mut drift, mut scale) = (0.0f64, e0.abs());
    for (&k, &dk) in t.kappa.iter().zip(&t.dkappa) {
        drift = drift.max((elastica_energy(a, b, k, dk) - e0).abs());
        scale = scale.max(dk * dk + 0.25 * k.powi(4) + 0.5 * (a * k * k).abs() + (b * k).abs());
    }
    t.energy_drift = Some(if scale > 0.0 { drift / scale } else { 0.0 });
    Ok(t)
}

/// Solve `κ'' + ½κ³ = (a + bs)κ`.
pub fn burstall_ode(a: f64, b: f64, kappa0: f64, dkappa0: f64, s_span: (f64, f64)) -> Result<KappaTrace> {
    trace(&KappaLaw::Burstall { a, b, kappa0, dkappa0 }, s_span)
}
