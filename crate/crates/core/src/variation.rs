//! Infinitesimal variations `uξ + df(X)` and finite-difference checks of the
//! first-variation formulas.
//!
//! Normal deformations are realized exactly on the space form: `f + tuξ` in
//! R³ and `cos(tu) f + sin(tu) ξ` in S³. The complex structure of a deformed
//! surface is the rotation by 90° for its own metric.

use nalgebra::{Matrix2, Vector2};
use rayon::prelude::*;
use serde::Serialize;

use crate::conformal::{dbar_vector_field, delta_op, pair_form_function};
use crate::diff;
use crate::error::{Error, Result};
use crate::field::{EndoField, ScalarField, VectorField};
use crate::functionals::{area_of, enclosed_volume, gradient_of, willmore_of, FunctionalKind};
use crate::surface::{
    complex_structure, fundamental_data, integrate_nodes, FundamentalData, ParamSurface, Point, SpaceForm,
};

/// A normal speed `u` together with a tangential field `X`.
#[derive(Debug, Clone, PartialEq)]
pub struct Variation {
    pub u: ScalarField,
    pub x: VectorField,
}

impl Variation {
    pub fn normal(u: ScalarField) -> Self {
        let n = u.len();
        Variation { u, x: VectorField(vec![Vector2::zeros(); n]) }
    }

    pub fn tangential(x: VectorField) -> Self {
        let n = x.len();
        Variation { u: ScalarField(vec![0.0; n]), x }
    }
}

/// `J̇ = 2uÅJ` for the normal variation `uξ`.
pub fn jdot_normal(s: &ParamSurface, fd: &FundamentalData, u: &ScalarField) -> Result<EndoField> {
    delta_op(s, fd, u)
}

/// First-order change `ġ = -2u II` of the induced metric under `u ξ`, as a
/// field of symmetric bilinear forms.
pub fn metric_dot(s: &ParamSurface, fd: &FundamentalData, u: &ScalarField) -> Result<EndoField> {
    u.check(s.grid())?;
    Ok(EndoField(u.0.iter().zip(&fd.nodes).map(|(&u, n)| n.second * (-2.0 * u)).collect()))
}

/// `L²(dσ)` norm of an endomorphism field, `|R|² = tr(RᵀR)` on a conformal chart.
pub fn endo_norm(s: &ParamSurface, fd: &FundamentalData, r: &EndoField) -> f64 {
    let vals: Vec<f64> = r.0.iter().zip(&fd.nodes).map(|(m, n)| (m.transpose() * m).trace() * n.area).collect();
    integrate_nodes(s.grid(), &vals).max(0.0).sqrt()
}

/// `‖2uÅJ + L_X J‖`; zero exactly for infinitesimally conformal variations.
pub fn conformality_residual(s: &ParamSurface, v: &Variation) -> Result<f64> {
    let fd = fundamental_data(s)?;
    conformality_residual_with(s, &fd, v)
}

pub fn conformality_residual_with(s: &ParamSurface, fd: &FundamentalData, v: &Variation) -> Result<f64> {
    let total = delta_op(s, fd, &v.u)?.add(&dbar_vector_field(s, fd, &v.x)?);
    Ok(endo_norm(s, fd, &total))
}

/// Node positions after the normal displacement `t u ξ`.
pub fn displaced_positions(s: &ParamSurface, u: &ScalarField, t: f64) -> Result<Vec<Point>> {
    u.check(s.grid())?;
    Ok(s.jets()
        .iter()
        .enumerate()
        .map(|(k, jet)| {
            let xi = s.normal(k);
            let a = t * u.0[k];
            match s.space_form() {
                SpaceForm::Euclidean3 => jet.f + xi * a,
                SpaceForm::Sphere3 => jet.f * a.cos() + xi * a.sin(),
            }
        })
        .collect())
}

/// `(J(t) - J(0)) / t` for the normal deformation by `tu`, with the deformed
/// tangents evaluated in closed form from `ξ_i = -A^k_i f_k`.
pub fn jdot_difference_quotient(s: &ParamSurface, fd: &FundamentalData, u: &ScalarField, t: f64) -> Result<EndoField> {
    u.check(s.grid())?;
    let grid = s.grid();
    let (uu, uv) = (diff::d_u(grid, &u.0), diff::d_v(grid, &u.0));
    let sign = fd.orientation;
    let out = (0..grid.len())
        .map(|k| {
            let jet = &s.jets()[k];
            let node = &fd.nodes[k];
            let xi = s.normal(k);
            let a = node.weingarten;
            let xi_i = [-(jet.fu * a[(0, 0)] + jet.fv * a[(1, 0)]), -(jet.fu * a[(0, 1)] + jet.fv * a[(1, 1)])];
            let f_i = [jet.fu, jet.fv];
            let du = [uu[k], uv[k]];
            let w = t * u.0[k];
            let tangents: Vec<Point> = (0..2)
                .map(|i| match s.space_form() {
                    SpaceForm::Euclidean3 => f_i[i] + (xi * du[i] + xi_i[i] * u.0[k]) * t,
                    SpaceForm::Sphere3 => {
                        jet.f * (-w.sin() * t * du[i])
                            + f_i[i] * w.cos()
                            + xi * (w.cos() * t * du[i])
                            + xi_i[i] * w.sin()
                    }
                })
                .collect();
            let g = Matrix2::new(
                tangents[0].dot(&tangents[0]),
                tangents[0].dot(&tangents[1]),
                tangents[1].dot(&tangents[0]),
                tangents[1].dot(&tangents[1]),
            );
            (complex_structure(&g) * sign - node.complex) / t
        })
        .collect();
    Ok(EndoField(out))
}

fn functional_value(s: &ParamSurface, kind: FunctionalKind) -> Result<f64> {
    match kind {
        FunctionalKind::Volume => enclosed_volume(s),
        _ => {
            let fd = fundamental_data(s)?;
            Ok(match kind {
                FunctionalKind::Area => area_of(s, &fd),
                _ => willmore_of(s, &fd),
            })
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FdStep {
    pub step: f64,
    pub fd: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FdCheck {
    pub functional: FunctionalKind,
    /// `⟨grad(F), u⟩`.
    pub analytic: f64,
    /// Richardson-extrapolated central difference.
    pub fd: f64,
    pub rel_err: f64,
    pub steps: Vec<FdStep>,
}

/// Compare `⟨grad(F), u⟩` with central differences of `F` over the deformed
/// surfaces for each step, extrapolating the two smallest steps.
pub fn fd_functional_derivative(
    s: &ParamSurface,
    kind: FunctionalKind,
    u: &ScalarField,
    steps: &[f64],
) -> Result<FdCheck> {
    if steps.is_empty() || steps.iter().any(|&t| !(t > 0.0)) {
        return Err(Error::InvalidArgument("steps must be positive and non-empty".into()));
    }
    let fd0 = fundamental_data(s)?;
    let analytic = pair_form_function(s, &gradient_of(s, &fd0, kind)?, u)?;
    // the base value is taken on the same finite-difference footing
    let rebuilt = |t: f64| -> Result<f64> {
        let surface = s.with_positions(displaced_positions(s, u, t)?).map_err(|e| match e {
            Error::DegenerateImmersion { .. } | Error::OffSphere { .. } => Error::DegenerateDeformation { step: t },
            other => other,
        })?;
        functional_value(&surface, kind).map_err(|e| match e {
            Error::DegenerateImmersion { .. } => Error::DegenerateDeformation { step: t },
            other => other,
        })
    };
    let values: Vec<FdStep> = steps
        .par_iter()
        .map(|&t| Ok(FdStep { step: t, fd: (rebuilt(t)? - rebuilt(-t)?) / (2.0 * t) }))
        .collect::<Result<_>>()?;
    let mut sorted = values.clone();
    sorted.sort_by(|a, b| b.step.total_cmp(&a.step));
    let fd = match sorted.as_slice() {
        [.., a, b] => {
            let r2 = (a.step / b.step).powi(2);
            (r2 * b.fd - a.fd) / (r2 - 1.0)
        }
        [a] => a.fd,
        [] => unreachable!(),
    };
    let rel_err = (fd - analytic).abs() / analytic.abs().max(fd.abs()).max(f64::MIN_POSITIVE);
    Ok(FdCheck { functional: kind, analytic, fd, rel_err, steps: values })
}

const SYMMETRY_TOL: f64 = 1e-8;

/// Tangential field `X = ψ(x)∂x` with `ψ' = 2uα`, `α = (A₁₁ - A₂₂)/2`, which
/// makes `uξ + X` conformal on a surface of revolution in its conformal
/// chart `(x, y)`, `y` the rotation angle.
pub fn conformal_completion_revolution(s: &ParamSurface, u: &ScalarField) -> Result<Variation> {
    s.require_conformal()?;
    let grid = s.grid();
    u.check(grid)?;
    if !grid.v.periodic {
        return Err(Error::NotRotationallySymmetric("the second chart axis must be the rotation angle".into()));
    }
    let fd = fundamental_data(s)?;
    let (nu, nv) = (grid.nu(), grid.nv());
    let umax = u.0.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut alpha = vec![0.0; nu];
    let mut profile_u = vec![0.0; nu];
    for i in 0..nu {
        let row = i * nv..(i + 1) * nv;
        let first = &fd.nodes[i * nv];
        let scale = first.weingarten.norm().max(1.0);
        for k in row.clone() {
            let n = &fd.nodes[k];
            if (n.weingarten - first.weingarten).norm() > SYMMETRY_TOL * scale
                || n.weingarten[(0, 1)].abs() > SYMMETRY_TOL * scale
            {
                return Err(Error::NotRotationallySymmetric(format!("geometry varies along row {i}")));
            }
            if (u.0[k] - u.0[i * nv]).abs() > 1e-12 * umax.max(1.0) {
                return Err(Error::NotRotationallySymmetric(format!("u varies along row {i}")));
            }
        }
        alpha[i] = 0.5 * (first.weingarten[(0, 0)] - first.weingarten[(1, 1)]);
        profile_u[i] = u.0[i * nv];
    }
    let g: Vec<f64> = (0..nu).map(|i| 2.0 * profile_u[i] * alpha[i]).collect();
    let h = grid.u.spacing();
    let at = |i: isize| g[i.clamp(0, nu as isize - 1) as usize];
    let mut psi = vec![0.0; nu];
    for i in 0..nu - 1 {
        let j = i as isize;
        psi[i + 1] = psi[i] + h / 24.0 * (-at(j - 1) + 13.0 * at(j) + 13.0 * at(j + 1) - at(j + 2));
    }
    if grid.u.periodic {
        let total = psi[nu - 1] + h / 24.0 * (-at(nu as isize - 2) + 13.0 * g[nu - 1] + 13.0 * g[0] - g[1]);
        let scale = g.iter().fold(0.0f64, |m, x| m.max(x.abs())) * grid.u.length;
        if total.abs() > 1e-10 * scale.max(1.0) {
            return Err(Error::InvalidArgument(format!("∫2uα = {total:.3e} ≠ 0: no periodic completion")));
        }
    }
    let x = VectorField((0..grid.len()).map(|k| Vector2::new(psi[k / nv], 0.0)).collect());
    Ok(Variation { u: u.clone(), x })
}
