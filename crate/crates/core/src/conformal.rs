//! Operators on the conformal structure of a surface.
//!
//! Quadratic differentials `q = φ dz²` are stored by their coefficient `φ` in
//! the chart coordinate `z = u + iv`. The real part of `q` is the symmetric
//! bilinear form with matrix `[[Re φ, -Im φ], [-Im φ, -Re φ]]`.
//!
//! With the pairings `⟨ω, u⟩ = ∫ ω u` between 2-forms and functions and
//! `⟨q, R⟩ = ∫ 2 Re(q)(R_ ∧ _)` between quadratic differentials and
//! J-anticommuting endomorphisms, `δ(u) = 2uÅJ` has the adjoint
//! `δ*(q) = 4 Re(q)(ÅJ_ ∧ _)`.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use serde::Serialize;

use crate::diff;
use crate::error::{Error, Result};
use crate::field::{wedge_coefficient, EndoField, ScalarField, TwoForm, VectorField};
use crate::grid::Grid2D;
use crate::surface::{integrate_2form, integrate_nodes, FundamentalData, ParamSurface};

/// Default relative threshold for the strong-isothermicity rank decision.
pub const ISOTHERMIC_TOL: f64 = 1e-6;
/// Tolerance for `RJ + JR = 0`.
pub const ANTICOMMUTE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticDifferential {
    pub coeffs: Vec<Complex64>,
}

impl QuadraticDifferential {
    pub fn from_fn(grid: &Grid2D, f: impl Fn(Complex64) -> Complex64) -> Self {
        QuadraticDifferential {
            coeffs: (0..grid.len())
                .map(|k| {
                    let (x, y) = grid.point(k);
                    f(Complex64::new(x, y))
                })
                .collect(),
        }
    }

    /// `c dz²`.
    pub fn constant(grid: &Grid2D, c: Complex64) -> Self {
        QuadraticDifferential { coeffs: vec![c; grid.len()] }
    }

    /// `c zᵏ dz²`. Only `k = 0` is single-valued on a periodic chart.
    pub fn monomial(grid: &Grid2D, k: u32, c: Complex64) -> Result<Self> {
        if k > 0 && (grid.u.periodic || grid.v.periodic) {
            return Err(Error::InvalidArgument(format!("z^{k} dz^2 is not defined on a periodic chart")));
        }
        Ok(Self::from_fn(grid, |z| c * z.powu(k)))
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        QuadraticDifferential { coeffs: self.coeffs.iter().map(|p| p * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        QuadraticDifferential { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn check(&self, grid: &Grid2D) -> Result<()> {
        grid.check_len(self.coeffs.len())
    }

    pub fn real_part(&self, k: usize) -> Matrix2<f64> {
        real_part_matrix(self.coeffs[k])
    }
}

/// Matrix of the bilinear form `Re(φ dz²)`.
#[inline]
pub fn real_part_matrix(phi: Complex64) -> Matrix2<f64> {
    Matrix2::new(phi.re, -phi.im, -phi.im, -phi.re)
}

/// Coefficient `φ` of the quadratic differential whose real part is the
/// symmetric trace-free (w.r.t. `du² + dv²`) bilinear form `b`.
#[inline]
pub fn coefficient_of(b: &Matrix2<f64>) -> Complex64 {
    Complex64::new(0.5 * (b[(0, 0)] - b[(1, 1)]), -0.5 * (b[(0, 1)] + b[(1, 0)]))
}

fn check_lengths(s: &ParamSurface, fd: &FundamentalData) -> Result<()> {
    s.grid().check_len(fd.len())
}

/// `δ(u) = 2uÅJ`, the change of conformal structure under the normal
/// variation `uξ`.
pub fn delta_op(s: &ParamSurface, fd: &FundamentalData, u: &ScalarField) -> Result<EndoField> {
    check_lengths(s, fd)?;
    u.check(s.grid())?;
    Ok(EndoField(fd.nodes.iter().zip(&u.0).map(|(n, &x)| n.trace_free_j() * (2.0 * x)).collect()))
}

/// `δ*(q) = 4 Re(q)(ÅJ_ ∧ _)`.
pub fn delta_star(s: &ParamSurface, fd: &FundamentalData, q: &QuadraticDifferential) -> Result<TwoForm> {
    check_lengths(s, fd)?;
    q.check(s.grid())?;
    Ok(TwoForm(
        fd.nodes
            .iter()
            .zip(&q.coeffs)
            .map(|(n, &phi)| 4.0 * wedge_coefficient(&(n.trace_free_j().transpose() * real_part_matrix(phi))))
            .collect(),
    ))
}

/// Hopf differential `Q` with `Re(Q) = ½ g(Å_, _)` on a conformal chart.
pub fn hopf_differential(s: &ParamSurface, fd: &FundamentalData) -> Result<QuadraticDifferential> {
    s.require_conformal()?;
    check_lengths(s, fd)?;
    Ok(QuadraticDifferential {
        coeffs: fd.nodes.iter().map(|n| coefficient_of(&(n.trace_free.transpose() * n.metric * 0.5))).collect(),
    })
}

/// `∂̄X = L_X J`, evaluated as `(L_X J)(Y) = [X, JY] - J[X, Y]`.
pub fn dbar_vector_field(s: &ParamSurface, fd: &FundamentalData, x: &VectorField) -> Result<EndoField> {
    check_lengths(s, fd)?;
    x.check(s.grid())?;
    let grid = s.grid();
    let comp = |f: &dyn Fn(usize) -> f64| -> Vec<f64> { (0..grid.len()).map(f).collect() };
    let xa = comp(&|k| x.0[k][0]);
    let xb = comp(&|k| x.0[k][1]);
    let (xa_u, xa_v) = (diff::d_u(grid, &xa), diff::d_v(grid, &xa));
    let (xb_u, xb_v) = (diff::d_u(grid, &xb), diff::d_v(grid, &xb));
    // derivatives of the entries of J
    let mut ju = vec![Matrix2::zeros(); grid.len()];
    let mut jv = vec![Matrix2::zeros(); grid.len()];
    for r in 0..2 {
        for c in 0..2 {
            let e = comp(&|k| fd.nodes[k].complex[(r, c)]);
            for (k, (du, dv)) in diff::d_u(grid, &e).into_iter().zip(diff::d_v(grid, &e)).enumerate() {
                ju[k][(r, c)] = du;
                jv[k][(r, c)] = dv;
            }
        }
    }
    Ok(EndoField(
        (0..grid.len())
            .map(|k| {
                let j = fd.nodes[k].complex;
                let dx = Matrix2::new(xa_u[k], xa_v[k], xb_u[k], xb_v[k]);
                ju[k] * x.0[k][0] + jv[k] * x.0[k][1] - dx * j + j * dx
            })
            .collect(),
    ))
}

/// L² norm (w.r.t. `du dv`) of the Cauchy–Riemann defect `∂φ/∂z̄` over the
/// integration domain. Vanishes exactly for holomorphic `q`.
pub fn dbar_residual(grid: &Grid2D, q: &QuadraticDifferential) -> Result<f64> {
    q.check(grid)?;
    let re: Vec<f64> = q.coeffs.iter().map(|c| c.re).collect();
    let im: Vec<f64> = q.coeffs.iter().map(|c| c.im).collect();
    let (re_u, re_v) = (diff::d_u(grid, &re), diff::d_v(grid, &re));
    let (im_u, im_v) = (diff::d_u(grid, &im), diff::d_v(grid, &im));
    // ∂φ/∂z̄ = ½(φ_u + i φ_v)
    let sq: Vec<f64> = (0..grid.len())
        .map(|k| {
            let a = 0.5 * (re_u[k] - im_v[k]);
            let b = 0.5 * (im_u[k] + re_v[k]);
            a * a + b * b
        })
        .collect();
    Ok(integrate_nodes(grid, &sq).sqrt())
}

/// `⟨ω, u⟩ = ∫ ω u`.
pub fn pair_form_function(s: &ParamSurface, omega: &TwoForm, u: &ScalarField) -> Result<f64> {
    omega.check(s.grid())?;
    u.check(s.grid())?;
    integrate_2form(s, &TwoForm(omega.0.iter().zip(&u.0).map(|(w, x)| w * x).collect()))
}

/// Largest `|RJ + JR|` relative to `|R|` (absolute when `R` is tiny).
pub fn anticommute_defect(fd: &FundamentalData, r: &EndoField) -> f64 {
    r.0.iter()
        .zip(&fd.nodes)
        .map(|(m, n)| (m * n.complex + n.complex * m).norm() / m.norm().max(1.0))
        .fold(0.0, f64::max)
}

/// `⟨q, R⟩ = ∫ 2 Re(q)(R_ ∧ _)` for J-anticommuting `R`.
pub fn pair_qd_endo(s: &ParamSurface, fd: &FundamentalData, q: &QuadraticDifferential, r: &EndoField) -> Result<f64> {
    check_lengths(s, fd)?;
    q.check(s.grid())?;
    r.check(s.grid())?;
    let defect = anticommute_defect(fd, r);
    if defect > ANTICOMMUTE_TOL {
        return Err(Error::NotAnticommuting { defect });
    }
    let omega = TwoForm(
        r.0.iter()
            .zip(&q.coeffs)
            .map(|(m, &phi)| 2.0 * wedge_coefficient(&(m.transpose() * real_part_matrix(phi))))
            .collect(),
    );
    integrate_2form(s, &omega)
}

/// `‖q‖² = ∫ |Re q|²_g dσ` with `|b|²_g = tr((g⁻¹B)²)`.
pub fn qd_inner(s: &ParamSurface, fd: &FundamentalData, p: &QuadraticDifferential, q: &QuadraticDifferential) -> f64 {
    let vals: Vec<f64> = fd
        .nodes
        .iter()
        .enumerate()
        .map(|(k, n)| {
            let g_inv = n.metric.try_inverse().unwrap_or_else(Matrix2::zeros);
            (g_inv * p.real_part(k) * g_inv * q.real_part(k)).trace() * n.area
        })
        .collect();
    integrate_nodes(s.grid(), &vals)
}

/// L²(dσ) inner product of the densities of two 2-forms.
pub(crate) fn form_inner(s: &ParamSurface, fd: &FundamentalData, a: &TwoForm, b: &TwoForm) -> f64 {
    let vals: Vec<f64> = fd.nodes.iter().enumerate().map(|(k, n)| a.0[k] * b.0[k] / n.area).collect();
    integrate_nodes(s.grid(), &vals)
}

/// Matrix whose column `i` holds the `L²(dσ)`-weighted samples of the
/// density of `forms[i]` over the integration domain.
pub(crate) fn weighted_samples(s: &ParamSurface, fd: &FundamentalData, forms: &[TwoForm]) -> DMatrix<f64> {
    let grid = s.grid();
    let nodes: Vec<usize> = (0..grid.len()).filter(|&k| grid.weight(k) > 0.0).collect();
    DMatrix::from_fn(nodes.len(), forms.len(), |r, c| {
        let k = nodes[r];
        forms[c].0[k] * (grid.weight(k) / fd.nodes[k].area).sqrt()
    })
}

/// A labelled quadratic differential, the unit of multiplier bases.
#[derive(Debug, Clone)]
pub struct BasisElement {
    pub label: String,
    pub q: QuadraticDifferential,
}

/// `{dz², i dz²}`, the holomorphic quadratic differentials of a flat torus.
pub fn default_basis(grid: &Grid2D) -> Vec<BasisElement> {
    vec![
        BasisElement { label: "dz^2".into(), q: QuadraticDifferential::constant(grid, Complex64::new(1.0, 0.0)) },
        BasisElement { label: "i dz^2".into(), q: QuadraticDifferential::constant(grid, Complex64::new(0.0, 1.0)) },
    ]
}

/// `{zᵏ dz², i zᵏ dz² : k ≤ degree}` for open charts.
pub fn polynomial_basis(grid: &Grid2D, degree: u32) -> Result<Vec<BasisElement>> {
    let mut out = Vec::new();
    for k in 0..=degree {
        let name = match k {
            0 => String::new(),
            1 => "z ".to_string(),
            _ => format!("z^{k} "),
        };
        out.push(BasisElement {
            label: format!("{name}dz^2"),
            q: QuadraticDifferential::monomial(grid, k, Complex64::new(1.0, 0.0))?,
        });
        out.push(BasisElement {
            label: format!("i {name}dz^2"),
            q: QuadraticDifferential::monomial(grid, k, Complex64::new(0.0, 1.0))?,
        });
    }
    Ok(out)
}

/// Reject bases with non-holomorphic elements.
pub(crate) fn check_holomorphic(grid: &Grid2D, basis: &[BasisElement], tol: f64) -> Result<()> {
    for b in basis {
        let residual = dbar_residual(grid, &b.q)?;
        let scale = dbar_scale(grid, &b.q);
        if residual > tol * scale.max(1.0) {
            return Err(Error::NonHolomorphicBasis { label: b.label.clone(), residual });
        }
    }
    Ok(())
}

fn dbar_scale(grid: &Grid2D, q: &QuadraticDifferential) -> f64 {
    let sq: Vec<f64> = q.coeffs.iter().map(|c| c.norm_sqr()).collect();
    integrate_nodes(grid, &sq).sqrt()
}

/// Real linear combination `Σ cᵢ qᵢ`.
pub fn combine(basis: &[BasisElement], coeffs: &[f64]) -> QuadraticDifferential {
    let mut acc = basis[0].q.scaled(Complex64::new(coeffs[0], 0.0));
    for (b, &c) in basis.iter().zip(coeffs).skip(1) {
        acc = acc.add(&b.q.scaled(Complex64::new(c, 0.0)));
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IsothermicVerdict {
    StronglyIsothermic,
    NotStronglyIsothermic,
    /// The smallest singular value sits between the two thresholds.
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct IsothermicReport {
    pub verdict: IsothermicVerdict,
    /// Minimizer of `‖δ*(q)‖ / ‖q‖` over the basis span, normalized to `‖q‖ = 1`.
    pub q: Option<QuadraticDifferential>,
    pub coefficients: Vec<f64>,
    /// `‖δ*(q)‖_{L²(dσ)}` of the normalized minimizer.
    pub residual: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// `σ_min / σ_max`.
    pub gap: f64,
}

/// Look for a nonzero `q` in the span of `basis` with `δ*(q) = 0`.
///
/// The map `c ↦ δ*(Σ cᵢ qᵢ)` is written in a basis orthonormal for `‖q‖` and
/// its singular values are compared: the surface counts as strongly
/// isothermic when `σ_min ≤ tol σ_max`, and as not strongly isothermic when
/// `σ_min > 10 tol σ_max`.
pub fn is_strongly_isothermic(
    s: &ParamSurface,
    fd: &FundamentalData,
    basis: &[BasisElement],
    tol: f64,
) -> Result<IsothermicReport> {
    if basis.is_empty() {
        return Err(Error::EmptyBasis);
    }
    check_holomorphic(s.grid(), basis, tol.max(1e-8))?;
    let m = basis.len();
    let gram = DMatrix::from_fn(m, m, |i, j| qd_inner(s, fd, &basis[i].q, &basis[j].q));
    let chol = gram.clone().cholesky().ok_or(Error::SingularBasis { condition: f64::INFINITY })?;
    let l_inv_t = chol.l().try_inverse().ok_or(Error::SingularBasis { condition: f64::INFINITY })?.transpose();

    let images: Vec<TwoForm> = basis.iter().map(|b| delta_star(s, fd, &b.q)).collect::<Result<_>>()?;
    let rows = weighted_samples(s, fd, &images);
    let svd = (rows * &l_inv_t).svd(false, true);
    let v_t = svd.v_t.as_ref().expect("right singular vectors requested");
    let (mut imin, mut imax) = (0, 0);
    for i in 0..svd.singular_values.len() {
        if svd.singular_values[i] < svd.singular_values[imin] {
            imin = i;
        }
        if svd.singular_values[i] > svd.singular_values[imax] {
            imax = i;
        }
    }
    let sigma_min = svd.singular_values[imin];
    let sigma_max = svd.singular_values[imax];
    let w = v_t.row(imin).transpose();
    let c = &l_inv_t * w;
    let coefficients: Vec<f64> = c.iter().copied().collect();
    let q = combine(basis, &coefficients);
    let residual = {
        let d = delta_star(s, fd, &q)?;
        form_inner(s, fd, &d, &d).max(0.0).sqrt()
    };
    let gap = if sigma_max > 0.0 { sigma_min / sigma_max } else { 0.0 };
    let umbilic_everywhere = sigma_max < 1e-12;
    let verdict = if umbilic_everywhere || sigma_min <= tol * sigma_max {
        IsothermicVerdict::StronglyIsothermic
    } else if sigma_min > 10.0 * tol * sigma_max {
        IsothermicVerdict::NotStronglyIsothermic
    } else {
        IsothermicVerdict::Inconclusive
    };
    Ok(IsothermicReport {
        verdict,
        q: (verdict == IsothermicVerdict::StronglyIsothermic).then_some(q),
        coefficients,
        residual,
        sigma_min,
        sigma_max,
        gap,
    })
}
