//! Area, enclosed volume and Willmore energy, with their gradient 2-forms.
//!
//! The gradient of `F` is the 2-form `grad(F)` with `Ḟ = ∫ grad(F) u` under
//! the normal variation `uξ`:
//!
//! * `grad(A) = -2H dσ`
//! * `grad(V) = dσ`
//! * `grad(W) = (ΔH + 2H(H² - G)) dσ`, for `W = ∫ (H² + K̄) dσ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::TwoForm;
use crate::surface::{fundamental_data, integrate_nodes, laplace_beltrami, FundamentalData, ParamSurface, SpaceForm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionalKind {
    Area,
    Volume,
    Willmore,
}

impl FunctionalKind {
    pub fn name(self) -> &'static str {
        match self {
            FunctionalKind::Area => "area",
            FunctionalKind::Volume => "volume",
            FunctionalKind::Willmore => "willmore",
        }
    }
}

impl std::str::FromStr for FunctionalKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "area" => Ok(FunctionalKind::Area),
            "volume" => Ok(FunctionalKind::Volume),
            "willmore" => Ok(FunctionalKind::Willmore),
            other => Err(Error::InvalidArgument(format!("unknown functional `{other}`"))),
        }
    }
}

fn integrate_density(s: &ParamSurface, fd: &FundamentalData, density: impl Fn(usize) -> f64) -> f64 {
    let vals: Vec<f64> = (0..fd.len()).map(|k| density(k) * fd.nodes[k].area).collect();
    integrate_nodes(s.grid(), &vals)
}

pub fn area(s: &ParamSurface) -> Result<f64> {
    let fd = fundamental_data(s)?;
    Ok(area_of(s, &fd))
}

pub fn area_of(s: &ParamSurface, fd: &FundamentalData) -> f64 {
    integrate_density(s, fd, |_| 1.0)
}

/// `W = ∫ (H² + K̄) dσ`.
pub fn willmore_energy(s: &ParamSurface) -> Result<f64> {
    let fd = fundamental_data(s)?;
    Ok(willmore_of(s, &fd))
}

pub fn willmore_of(s: &ParamSurface, fd: &FundamentalData) -> f64 {
    let kbar = s.space_form().curvature();
    integrate_density(s, fd, |k| fd.nodes[k].mean.powi(2) + kbar)
}

/// Orientation-signed volume `⅓ ∫ ⟨f, ξ⟩ dσ` of a closed surface in R³.
pub fn enclosed_volume(s: &ParamSurface) -> Result<f64> {
    if s.space_form() != SpaceForm::Euclidean3 {
        return Err(Error::WrongSpaceForm { expected: "R^3" });
    }
    if !s.is_closed() {
        return Err(Error::NotClosed);
    }
    let fd = fundamental_data(s)?;
    let jets = s.jets();
    Ok(integrate_density(s, &fd, |k| jets[k].f.dot(&fd.nodes[k].normal)) / 3.0)
}

pub fn gradient(s: &ParamSurface, kind: FunctionalKind) -> Result<TwoForm> {
    let fd = fundamental_data(s)?;
    gradient_of(s, &fd, kind)
}

pub fn gradient_of(s: &ParamSurface, fd: &FundamentalData, kind: FunctionalKind) -> Result<TwoForm> {
    match kind {
        FunctionalKind::Area => Ok(fd.density_form(|n| -2.0 * n.mean)),
        FunctionalKind::Volume => Ok(fd.area_form()),
        FunctionalKind::Willmore => {
            let lap = laplace_beltrami(s, &fd.mean_curvature())?;
            Ok(TwoForm(
                fd.nodes
                    .iter()
                    .zip(&lap.0)
                    .map(|(n, l)| (l + 2.0 * n.mean * n.umbilicity()) * n.area * fd.orientation)
                    .collect(),
            ))
        }
    }
}

/// `L²(dσ)` norm of the density of a 2-form.
pub fn form_norm(s: &ParamSurface, fd: &FundamentalData, omega: &TwoForm) -> f64 {
    crate::conformal::form_inner(s, fd, omega, omega).max(0.0).sqrt()
}
