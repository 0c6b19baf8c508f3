//! Job files and their merge with command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use conwill_core::builders::{BuilderSpec, CurveSpec};
use conwill_core::conformal::{default_basis, polynomial_basis, BasisElement};
use conwill_core::functionals::FunctionalKind;
use conwill_core::multiplier::CERTIFY_TOL;
use conwill_core::Grid2D;
use serde::Deserialize;

pub const MIN_RESOLUTION: usize = 8;
pub const MAX_RESOLUTION: usize = 4096;
pub const DEFAULT_RESOLUTION: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", deny_unknown_fields)]
pub enum BasisSpec {
    /// `{dz², i dz²}`.
    Default,
    Empty,
    /// `{zᵏ dz², i zᵏ dz² : k ≤ degree}`.
    Polynomial {
        degree: u32,
    },
}

impl BasisSpec {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "default" => Ok(BasisSpec::Default),
            "empty" => Ok(BasisSpec::Empty),
            _ => match text.strip_prefix("polynomial:") {
                Some(d) => Ok(BasisSpec::Polynomial { degree: d.parse().context("polynomial degree")? }),
                None => bail!("unknown basis `{text}` (expected default, empty or polynomial:N)"),
            },
        }
    }

    pub fn elements(self, grid: &Grid2D) -> Result<Vec<BasisElement>> {
        Ok(match self {
            BasisSpec::Default => default_basis(grid),
            BasisSpec::Empty => Vec::new(),
            BasisSpec::Polynomial { degree } => polynomial_basis(grid, degree)?,
        })
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub builder: Option<BuilderSpec>,
    pub curve: Option<CurveSpec>,
    pub functional: Option<FunctionalKind>,
    pub basis: Option<BasisSpec>,
    pub tolerance: Option<f64>,
    pub resolution: Option<usize>,
    pub steps: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
}

impl JobConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading job file {}", path.display()))?;
        let job: JobConfig =
            serde_json::from_str(&text).with_context(|| format!("parsing job file {}", path.display()))?;
        job.validate()?;
        Ok(job)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(n) = self.resolution {
            check_resolution(n)?;
        }
        if let Some(t) = self.tolerance {
            check_positive("tolerance", t)?;
        }
        for &t in self.steps.iter().flatten() {
            check_positive("step", t)?;
        }
        Ok(())
    }

    pub fn resolution(&self) -> usize {
        self.resolution.unwrap_or(DEFAULT_RESOLUTION)
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance.unwrap_or(CERTIFY_TOL)
    }
}

pub fn check_resolution(n: usize) -> Result<()> {
    if !(MIN_RESOLUTION..=MAX_RESOLUTION).contains(&n) {
        bail!("resolution {n} outside [{MIN_RESOLUTION}, {MAX_RESOLUTION}]");
    }
    Ok(())
}

pub fn check_positive(name: &str, value: f64) -> Result<()> {
    if !(value > 0.0 && value.is_finite()) {
        bail!("{name} must be positive, got {value}");
    }
    Ok(())
}
