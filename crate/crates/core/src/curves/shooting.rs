//! Closed generalized elastic curves on S² by shooting.
//!
//! A solution started at a turning point of `κ` is periodic in `κ` with
//! period `T`; over one period the Frenet frame moves by a rigid rotation of
//! angle `Θ`. The curve closes after `n` periods exactly when `nΘ ∈ 2πZ`, so
//! the search bisects `Θ(a) = 2πm/n` in `a` at fixed `b`. Circles
//! (`κ` constant) are closed by locating the first return of the frame.

use std::f64::consts::PI;

use nalgebra::Matrix3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{integrate_law, integrate_states, rk4_step, step_for, Ambient, CurvatureCurve, KappaLaw, StartFrame, Vec3};
use crate::error::{Error, Result};

/// Largest accepted closure gap.
pub const CLOSURE_TOL: f64 = 1e-7;
const SCAN_POINTS: usize = 48;
const MAX_PERIOD: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ClosureTarget {
    /// Constant geodesic curvature `c`.
    Circle { curvature: f64 },
    /// `lobes` periods of `κ` closing after `turns` full turns of the frame,
    /// started at `κ(0) = kappa0`, `κ'(0) = 0`.
    Wave { lobes: u32, turns: u32, kappa0: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedElastica {
    pub a: f64,
    pub b: f64,
    pub kappa0: f64,
    /// Length of the closed curve.
    pub period: f64,
    pub closure_gap: f64,
    /// Number of `κ`-periods along the curve; 0 for circles.
    pub lobes: u32,
}

impl ClosedElastica {
    /// The closed curve from the standard start frame.
    pub fn curve(&self) -> Result<CurvatureCurve> {
        let law = KappaLaw::Elastica { a: self.a, b: self.b, kappa0: self.kappa0, dkappa0: 0.0 };
        Ok(integrate_law(&law, Ambient::Sphere2, StartFrame::standard(Ambient::Sphere2), (0.0, self.period))?
            .mark_closed())
    }
}

/// Period of `κ` for the elastica started at the turning point `κ0`, or
/// `None` at an equilibrium or beyond the search span.
pub fn kappa_period(a: f64, b: f64, kappa0: f64) -> Option<f64> {
    let law = KappaLaw::Elastica { a, b, kappa0, dkappa0: 0.0 };
    let force = law.second(0.0, kappa0, 0.0);
    if force.abs() < 1e-12 {
        return None;
    }
    let rhs = |s: f64, y: &[f64; 2]| [y[1], law.second(s, y[0], y[1])];
    let h = 1e-3;
    let mut y = [kappa0, 0.0];
    // After the first step κ' has the sign of the force; the period ends at
    // the second sign change.
    let mut crossings = 0;
    let mut s = 0.0;
    let mut sign = force.signum();
    while s < MAX_PERIOD {
        let next = rk4_step(&y, s, h, &rhs);
        if next[1].signum() != sign && s > 0.0 {
            crossings += 1;
            sign = -sign;
            if crossings == 2 {
                let (mut lo, mut hi) = (0.0, h);
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    let z = rk4_step(&y, s, mid, &rhs);
                    if z[1].signum() == next[1].signum() {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                return Some(s + 0.5 * (lo + hi));
            }
        }
        y = next;
        s += h;
    }
    None
}

fn frame_matrix(y: &[f64; 8]) -> Matrix3<f64> {
    let p = Vec3::new(y[2], y[3], y[4]);
    let t = Vec3::new(y[5], y[6], y[7]);
    Matrix3::from_columns(&[p, t, p.cross(&t)])
}

/// Rotation angle of the frame over one `κ`-period, with that period.
fn holonomy(a: f64, b: f64, kappa0: f64) -> Option<(f64, f64)> {
    let period = kappa_period(a, b, kappa0)?;
    let law = KappaLaw::Elastica { a, b, kappa0, dkappa0: 0.0 };
    let mut first = None;
    let mut last = [0.0; 8];
    integrate_states(&law, Ambient::Sphere2, StartFrame::standard(Ambient::Sphere2), 0.0, period, |_, y| {
        if first.is_none() {
            first = Some(*y);
        }
        last = *y;
    })
    .ok()?;
    let r = frame_matrix(&last) * frame_matrix(&first?).transpose();
    let c = ((r.trace() - 1.0) / 2.0).clamp(-1.0, 1.0);
    Some((c.acos(), period))
}

fn box_error(what: &str) -> Error {
    Error::NoSolutionInBox(what.to_string())
}

fn check_box(range: (f64, f64), name: &str) -> Result<()> {
    if !(range.0.is_finite() && range.1.is_finite() && range.0 <= range.1) {
        return Err(Error::InvalidArgument(format!("bad {name} range {range:?}")));
    }
    Ok(())
}

/// Find a closed elastica for every target inside the box `a_range × b_range`.
pub fn shoot_closed_elastica(
    a_range: (f64, f64),
    b_range: (f64, f64),
    targets: &[ClosureTarget],
) -> Result<Vec<ClosedElastica>> {
    check_box(a_range, "a")?;
    check_box(b_range, "b")?;
    targets
        .iter()
        .map(|t| match *t {
            ClosureTarget::Circle { curvature } => shoot_circle(a_range, b_range, curvature),
            ClosureTarget::Wave { lobes, turns, kappa0 } => shoot_wave(a_range, b_range, lobes, turns, kappa0),
        })
        .collect()
}

fn shoot_circle(a_range: (f64, f64), b_range: (f64, f64), c: f64) -> Result<ClosedElastica> {
    // κ ≡ c requires c³ + ac + b = 0
    let (a, b) = if c == 0.0 {
        if b_range.0 > 0.0 || b_range.1 < 0.0 {
            return Err(box_error("b = 0 needed for the great circle"));
        }
        (0.5 * (a_range.0 + a_range.1), 0.0)
    } else {
        let a_at = |b: f64| -(c * c * c + b) / c;
        let (x, y) = (a_at(b_range.0), a_at(b_range.1));
        let lo = x.min(y).max(a_range.0);
        let hi = x.max(y).min(a_range.1);
        if lo > hi {
            return Err(box_error(&format!("no (a, b) in the box has the constant root {c}")));
        }
        let a = 0.5 * (lo + hi);
        (a, -c * c * c - a * c)
    };

    let law = KappaLaw::Elastica { a, b, kappa0: c, dkappa0: 0.0 };
    let start = StartFrame::standard(Ambient::Sphere2);
    // d/ds of ½|p - p0|² + ½|T - T0|²
    let slope = |y: &[f64; 8]| {
        let p = Vec3::new(y[2], y[3], y[4]);
        let t = Vec3::new(y[5], y[6], y[7]);
        let dt = p.cross(&t) * c - p;
        (p - start.position).dot(&t) + (t - start.tangent).dot(&dt)
    };
    let gap = |y: &[f64; 8]| {
        (Vec3::new(y[2], y[3], y[4]) - start.position).norm() + (Vec3::new(y[5], y[6], y[7]) - start.tangent).norm()
    };
    let span = 4.0 * PI;
    let (_, h) = step_for(span);
    let mut states = Vec::new();
    integrate_states(&law, Ambient::Sphere2, start, 0.0, span, |s, y| states.push((s, *y)))?;
    // first sign change of the slope from - to + with a small gap
    let hit = states
        .windows(2)
        .skip(10)
        .find(|w| slope(&w[0].1) < 0.0 && slope(&w[1].1) >= 0.0 && gap(&w[0].1) < 1e-2)
        .ok_or_else(|| box_error("circle does not close"))?;
    let (s0, y0) = hit[0];
    let rhs = |_s: f64, y: &[f64; 8]| {
        let p = Vec3::new(y[2], y[3], y[4]);
        let t = Vec3::new(y[5], y[6], y[7]);
        let dt = p.cross(&t) * c - p;
        [0.0, 0.0, t.x, t.y, t.z, dt.x, dt.y, dt.z]
    };
    let (mut lo, mut hi) = (0.0, h);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if slope(&rk4_step(&y0, s0, mid, &rhs)) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let period = s0 + 0.5 * (lo + hi);
    finish(a, b, c, period, 0)
}

fn finish(a: f64, b: f64, kappa0: f64, period: f64, lobes: u32) -> Result<ClosedElastica> {
    let mut sol = ClosedElastica { a, b, kappa0, period, closure_gap: f64::INFINITY, lobes };
    sol.closure_gap = sol.curve()?.closure_gap();
    if sol.closure_gap >= CLOSURE_TOL {
        return Err(box_error(&format!("closure gap {:.3e} at a = {a}, b = {b}", sol.closure_gap)));
    }
    Ok(sol)
}

fn shoot_wave(a_range: (f64, f64), b_range: (f64, f64), lobes: u32, turns: u32, kappa0: f64) -> Result<ClosedElastica> {
    if lobes == 0 || 2 * turns > lobes || turns == 0 {
        return Err(Error::InvalidArgument(format!("unsupported closure target {turns}/{lobes}")));
    }
    let b = 0.5 * (b_range.0 + b_range.1);
    let target = 2.0 * PI * turns as f64 / lobes as f64;
    let f = |a: f64| holonomy(a, b, kappa0).map(|(theta, _)| theta - target);
    let grid: Vec<f64> =
        (0..SCAN_POINTS).map(|i| a_range.0 + (a_range.1 - a_range.0) * i as f64 / (SCAN_POINTS - 1) as f64).collect();
    let values: Vec<Option<f64>> = grid.par_iter().map(|&a| f(a)).collect();
    let bracket = (0..SCAN_POINTS - 1)
        .find_map(|i| match (values[i], values[i + 1]) {
            (Some(x), Some(y)) if x * y <= 0.0 => Some((grid[i], grid[i + 1], x)),
            _ => None,
        })
        .ok_or_else(|| box_error(&format!("no sign change of the holonomy defect for {turns}/{lobes}")))?;
    let (mut lo, mut hi, f_lo) = bracket;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        let v = f(mid).ok_or_else(|| box_error("holonomy undefined inside bracket"))?;
        if (v < 0.0) == (f_lo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 * hi.abs().max(1.0) {
            break;
        }
    }
    let a = 0.5 * (lo + hi);
    let (_, period) = holonomy(a, b, kappa0).ok_or_else(|| box_error("lost the periodic orbit"))?;
    finish(a, b, kappa0, lobes as f64 * period, lobes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_period_matches_small_circle_length() {
        for c in [0.0, 0.5, 1.0, -2.0] {
            let sol =
                shoot_closed_elastica((-10.0, 10.0), (-20.0, 20.0), &[ClosureTarget::Circle { curvature: c }]).unwrap();
            let expect = 2.0 * PI / (1.0 + c * c).sqrt();
            assert!((sol[0].period - expect).abs() < 1e-9, "c = {c}: {} vs {expect}", sol[0].period);
            assert!(sol[0].closure_gap < CLOSURE_TOL);
        }
    }

    #[test]
    fn harmonic_limit_period() {
        // small oscillation about κ = 0: 2κ'' + aκ = 0
        let t = kappa_period(8.0, 0.0, 1e-4).unwrap();
        assert!((t - PI).abs() < 1e-6, "{t}");
        assert!(kappa_period(-2.0, 1.0, 1.0).is_none());
    }

    #[test]
    fn empty_box_is_reported() {
        let r = shoot_closed_elastica((0.0, 1.0), (5.0, 6.0), &[ClosureTarget::Circle { curvature: 0.0 }]);
        assert!(matches!(r, Err(Error::NoSolutionInBox(_))));
    }
}
