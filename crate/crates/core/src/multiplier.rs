//! Least-squares Lagrange multipliers for `grad(F) = δ*(q)`.
//!
//! For a basis `q₁ … q_m` of holomorphic quadratic differentials the solver
//! minimizes `‖grad(F) - δ*(Σ cᵢ qᵢ)‖` in `L²(dσ)` over real `cᵢ`. When `δ*`
//! has a kernel on the span (strongly isothermic surfaces), the solution of
//! minimal `‖q‖` is returned.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::conformal::{
    check_holomorphic, combine, delta_star, hopf_differential, qd_inner, weighted_samples, BasisElement,
    QuadraticDifferential,
};
use crate::error::{Error, Result};
use crate::functionals::{form_norm, gradient_of, FunctionalKind};
use crate::surface::{fundamental_data, FundamentalData, ParamSurface};

/// Default certification tolerance, relative to `max(1, ‖grad‖)`.
pub const CERTIFY_TOL: f64 = 1e-5;
/// Maximal accepted condition number of the basis Gram matrix.
pub const MAX_GRAM_CONDITION: f64 = 1e12;
/// Holomorphicity threshold for basis elements.
pub const HOLOMORPHIC_TOL: f64 = 1e-8;
/// Relative spread of `H` accepted as constant mean curvature.
pub const CMC_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Critical,
    NotCritical,
    /// Open chart: the Euler–Lagrange equation holds, which suffices.
    SufficientConditionHolds,
    /// Open chart: no multiplier fits, but that proves nothing there.
    InconclusiveOpenChart,
}

impl Verdict {
    /// Whether the verdict establishes constrained criticality.
    pub fn is_critical(self) -> bool {
        matches!(self, Verdict::Critical | Verdict::SufficientConditionHolds)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub functional: FunctionalKind,
    pub basis: Vec<String>,
    #[serde(rename = "coeffs")]
    pub coefficients: Vec<f64>,
    #[serde(rename = "residual")]
    pub residual_l2: f64,
    #[serde(rename = "grad_norm")]
    pub gradient_l2: f64,
    pub verdict: Verdict,
    #[serde(rename = "tol")]
    pub tolerance: f64,
}

/// Certificate for the Willmore functional, with the `q = 0` residual.
#[derive(Debug, Clone, PartialEq)]
pub struct WillmoreCertificate {
    pub certificate: Certificate,
    /// `‖grad(W)‖`, the residual of the unconstrained Willmore equation.
    pub pure_willmore_residual: f64,
}

fn verdict_for(closed: bool, residual: f64, gradient: f64, tol: f64) -> Verdict {
    let ok = residual <= tol * gradient.max(1.0);
    match (closed, ok) {
        (true, true) => Verdict::Critical,
        (true, false) => Verdict::NotCritical,
        (false, true) => Verdict::SufficientConditionHolds,
        (false, false) => Verdict::InconclusiveOpenChart,
    }
}

/// Solve for the multiplier of `kind` on the span of `basis`.
pub fn solve_multiplier(
    s: &ParamSurface,
    kind: FunctionalKind,
    basis: &[BasisElement],
    tol: f64,
) -> Result<Certificate> {
    let fd = fundamental_data(s)?;
    solve_multiplier_with(s, &fd, kind, basis, tol)
}

pub fn solve_multiplier_with(
    s: &ParamSurface,
    fd: &FundamentalData,
    kind: FunctionalKind,
    basis: &[BasisElement],
    tol: f64,
) -> Result<Certificate> {
    s.require_conformal()?;
    let grad = gradient_of(s, fd, kind)?;
    let gradient_l2 = form_norm(s, fd, &grad);
    let labels: Vec<String> = basis.iter().map(|b| b.label.clone()).collect();
    if basis.is_empty() {
        return Ok(Certificate {
            functional: kind,
            basis: labels,
            coefficients: Vec::new(),
            residual_l2: gradient_l2,
            gradient_l2,
            verdict: verdict_for(s.is_closed(), gradient_l2, gradient_l2, tol),
            tolerance: tol,
        });
    }
    check_holomorphic(s.grid(), basis, HOLOMORPHIC_TOL)?;
    let l_inv_t = whitening(s, fd, basis)?;

    let images: Vec<_> = basis.iter().map(|b| delta_star(s, fd, &b.q)).collect::<Result<_>>()?;
    let design = weighted_samples(s, fd, &images) * &l_inv_t;
    let rhs = weighted_samples(s, fd, std::slice::from_ref(&grad)).column(0).into_owned();
    let svd = design.clone().svd(true, true);
    let cutoff = 1e-10 * svd.singular_values.max();
    let w = svd.solve(&rhs, cutoff).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let c: DVector<f64> = &l_inv_t * w.column(0);
    let mut coefficients: Vec<f64> = c.iter().copied().collect();

    let q = combine(basis, &coefficients);
    let fitted = delta_star(s, fd, &q)?;
    let mut residual_l2 = form_norm(s, fd, &grad.sub(&fitted));
    if residual_l2 > gradient_l2 {
        // q = 0 is always admissible
        coefficients.iter_mut().for_each(|c| *c = 0.0);
        residual_l2 = gradient_l2;
    }
    Ok(Certificate {
        functional: kind,
        basis: labels,
        coefficients,
        residual_l2,
        gradient_l2,
        verdict: verdict_for(s.is_closed(), residual_l2, gradient_l2, tol),
        tolerance: tol,
    })
}

/// `L⁻ᵀ` for the Cholesky factor `L` of the basis Gram matrix.
fn whitening(s: &ParamSurface, fd: &FundamentalData, basis: &[BasisElement]) -> Result<DMatrix<f64>> {
    let m = basis.len();
    let gram = DMatrix::from_fn(m, m, |i, j| qd_inner(s, fd, &basis[i].q, &basis[j].q));
    let eig = gram.clone().symmetric_eigen();
    let (lo, hi) = (eig.eigenvalues.min(), eig.eigenvalues.max());
    let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if condition > MAX_GRAM_CONDITION {
        return Err(Error::SingularBasis { condition });
    }
    let chol = gram.cholesky().ok_or(Error::SingularBasis { condition })?;
    let l_inv = chol.l().try_inverse().ok_or(Error::SingularBasis { condition })?;
    Ok(l_inv.transpose())
}

/// Multiplier solve for the Willmore functional; also reports `‖grad(W)‖`.
pub fn certify_constrained_willmore(s: &ParamSurface, basis: &[BasisElement], tol: f64) -> Result<WillmoreCertificate> {
    let certificate = solve_multiplier(s, FunctionalKind::Willmore, basis, tol)?;
    Ok(WillmoreCertificate { pure_willmore_residual: certificate.gradient_l2, certificate })
}

/// The multiplier `q = ½ H Q` of a constant mean curvature surface.
pub fn cmc_multiplier(s: &ParamSurface) -> Result<QuadraticDifferential> {
    let fd = fundamental_data(s)?;
    cmc_multiplier_with(s, &fd)
}

pub fn cmc_multiplier_with(s: &ParamSurface, fd: &FundamentalData) -> Result<QuadraticDifferential> {
    let grid = s.grid();
    let interior: Vec<f64> = (0..grid.len()).filter(|&k| grid.weight(k) > 0.0).map(|k| fd.nodes[k].mean).collect();
    let lo = interior.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = interior.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let h = 0.5 * (lo + hi);
    let spread = (hi - lo) / h.abs().max(1.0);
    if spread > CMC_TOL {
        return Err(Error::NotCmc { spread });
    }
    Ok(hopf_differential(s, fd)?.scaled(Complex64::new(0.5 * h, 0.0)))
}
