//! Parametrized surfaces in R³ and S³ and their pointwise geometry.
//!
//! Ambient points are stored as 4-vectors; surfaces in R³ keep the last
//! component at zero. The unit normal is `f_u × f_v / |f_u × f_v|` in R³ and
//! the generalized cross product of `(f, f_u, f_v)` in R⁴ for S³, flipped by
//! the orientation flag. With this choice the cylinder over a positively
//! oriented unit circle has `A = diag(-1, 0)` and `H = -1/2`.

use nalgebra::{Matrix2, Matrix3, Vector3, Vector4};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diff;
use crate::error::{Error, Result};
use crate::field::{ScalarField, TwoForm};
use crate::grid::Grid2D;

pub type Point = Vector4<f64>;

/// Relative conformality tolerance for charts with analytic derivatives.
pub const CONFORMAL_TOL: f64 = 1e-8;
/// Relative conformality tolerance for charts differentiated numerically.
pub const CONFORMAL_TOL_FD: f64 = 1e-5;
/// Minimal sine of the angle between the coordinate tangents.
pub const IMMERSION_TOL: f64 = 1e-6;
/// Allowed deviation of S³ samples from the unit sphere.
pub const SPHERE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpaceForm {
    Euclidean3,
    Sphere3,
}

impl SpaceForm {
    /// Sectional curvature of the ambient space.
    pub fn curvature(self) -> f64 {
        match self {
            SpaceForm::Euclidean3 => 0.0,
            SpaceForm::Sphere3 => 1.0,
        }
    }

    pub fn ambient_dim(self) -> usize {
        match self {
            SpaceForm::Euclidean3 => 3,
            SpaceForm::Sphere3 => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Positive,
    Reversed,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Positive => 1.0,
            Orientation::Reversed => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Orientation::Positive => Orientation::Reversed,
            Orientation::Reversed => Orientation::Positive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DerivStrategy {
    Analytic,
    FiniteDifference,
}

/// Position with first and second coordinate derivatives at one node.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub f: Point,
    pub fu: Point,
    pub fv: Point,
    pub fuu: Point,
    pub fuv: Point,
    pub fvv: Point,
}

/// A parametrized immersion sampled on a structured chart.
#[derive(Debug, Clone)]
pub struct ParamSurface {
    space_form: SpaceForm,
    grid: Grid2D,
    jets: Vec<Jet>,
    strategy: DerivStrategy,
    orientation: Orientation,
    conformal: bool,
    closed: bool,
}

impl ParamSurface {
    /// Sample an analytic chart: `jet(u, v)` returns position and derivatives.
    pub fn from_analytic(space_form: SpaceForm, grid: Grid2D, jet: impl Fn(f64, f64) -> Jet + Sync) -> Result<Self> {
        let jets: Vec<Jet> = (0..grid.len())
            .into_par_iter()
            .map(|k| {
                let (x, y) = grid.point(k);
                jet(x, y)
            })
            .collect();
        Self::assemble(space_form, grid, jets, DerivStrategy::Analytic)
    }

    /// Wrap precomputed jets, one per node in grid order.
    pub fn from_jets(space_form: SpaceForm, grid: Grid2D, jets: Vec<Jet>) -> Result<Self> {
        grid.check_len(jets.len())?;
        Self::assemble(space_form, grid, jets, DerivStrategy::Analytic)
    }

    /// Build from node positions only; derivatives by fourth-order differences.
    pub fn from_positions(space_form: SpaceForm, grid: Grid2D, positions: Vec<Point>) -> Result<Self> {
        grid.check_len(positions.len())?;
        let mut jets: Vec<Jet> = positions.iter().map(|&f| Jet { f, ..Jet::default() }).collect();
        for c in 0..4 {
            let comp: Vec<f64> = positions.iter().map(|p| p[c]).collect();
            if comp.iter().all(|&x| x == 0.0) {
                continue;
            }
            let [du, dv, duu, duv, dvv] = diff::jet(&grid, &comp);
            for (k, jet) in jets.iter_mut().enumerate() {
                jet.fu[c] = du[k];
                jet.fv[c] = dv[k];
                jet.fuu[c] = duu[k];
                jet.fuv[c] = duv[k];
                jet.fvv[c] = dvv[k];
            }
        }
        Self::assemble(space_form, grid, jets, DerivStrategy::FiniteDifference)
    }

    fn assemble(space_form: SpaceForm, grid: Grid2D, jets: Vec<Jet>, strategy: DerivStrategy) -> Result<Self> {
        if space_form == SpaceForm::Sphere3 {
            for (k, jet) in jets.iter().enumerate() {
                let deviation = (jet.f.norm() - 1.0).abs();
                if deviation > SPHERE_TOL {
                    let (i, j) = grid.split(k);
                    return Err(Error::OffSphere { i, j, deviation });
                }
            }
        }
        let closed = grid.u.periodic && grid.v.periodic;
        Ok(ParamSurface {
            space_form,
            grid,
            jets,
            strategy,
            orientation: Orientation::Positive,
            conformal: false,
            closed,
        })
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    /// Mark the surface as closed although a chart axis is open (e.g. a
    /// sphere of revolution whose poles lie outside the truncated chart).
    pub fn mark_closed(mut self) -> Self {
        self.closed = true;
        self
    }

    /// Flag the chart as conformal after checking it.
    pub fn into_conformal(mut self) -> Result<Self> {
        let residual = self.conformality_residual();
        let tolerance = self.conformal_tolerance();
        if residual > tolerance {
            return Err(Error::NotConformal { residual, tolerance });
        }
        self.conformal = true;
        Ok(self)
    }

    pub fn conformal_tolerance(&self) -> f64 {
        match self.strategy {
            DerivStrategy::Analytic => CONFORMAL_TOL,
            DerivStrategy::FiniteDifference => CONFORMAL_TOL_FD,
        }
    }

    /// Max over interior nodes of `(|g11 - g22| + 2|g12|) / (g11 + g22)`.
    pub fn conformality_residual(&self) -> f64 {
        (0..self.grid.len())
            .filter(|&k| self.grid.is_interior(k))
            .map(|k| {
                let g = metric(&self.jets[k]);
                ((g[(0, 0)] - g[(1, 1)]).abs() + 2.0 * g[(0, 1)].abs()) / (g[(0, 0)] + g[(1, 1)])
            })
            .fold(0.0, f64::max)
    }

    pub fn space_form(&self) -> SpaceForm {
        self.space_form
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn jets(&self) -> &[Jet] {
        &self.jets
    }

    pub fn positions(&self) -> Vec<Point> {
        self.jets.iter().map(|j| j.f).collect()
    }

    pub fn strategy(&self) -> DerivStrategy {
        self.strategy
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn is_conformal(&self) -> bool {
        self.conformal
    }

    /// Whether the chart represents a compact surface without boundary.
    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub(crate) fn require_conformal(&self) -> Result<()> {
        if self.conformal {
            Ok(())
        } else {
            Err(Error::NotConformal { residual: self.conformality_residual(), tolerance: self.conformal_tolerance() })
        }
    }

    /// Unit normal at node `k` (orientation applied).
    pub fn normal(&self, k: usize) -> Point {
        unit_normal(self.space_form, &self.jets[k]) * self.orientation.sign()
    }

    /// Same chart, re-sampled positions, derivatives by finite differences.
    pub fn with_positions(&self, positions: Vec<Point>) -> Result<Self> {
        let mut s = Self::from_positions(self.space_form, self.grid, positions)?;
        s.orientation = self.orientation;
        s.closed = self.closed;
        Ok(s)
    }

    /// Recompute every derivative from the sampled positions.
    pub fn to_finite_difference(&self) -> Result<Self> {
        let s = self.with_positions(self.positions())?;
        if self.conformal {
            s.into_conformal()
        } else {
            Ok(s)
        }
    }
}

pub(crate) fn metric(jet: &Jet) -> Matrix2<f64> {
    let e = jet.fu.dot(&jet.fu);
    let f = jet.fu.dot(&jet.fv);
    let g = jet.fv.dot(&jet.fv);
    Matrix2::new(e, f, f, g)
}

fn cross3(a: &Point, b: &Point) -> Point {
    let c = Vector3::new(a.x, a.y, a.z).cross(&Vector3::new(b.x, b.y, b.z));
    Point::new(c.x, c.y, c.z, 0.0)
}

/// Generalized cross product in R⁴: the vector `n` with
/// `⟨n, w⟩ = det[a, b, c, w]` for all `w`.
pub(crate) fn cross4(a: &Point, b: &Point, c: &Point) -> Point {
    let mut n = Point::zeros();
    for i in 0..4 {
        let rows: Vec<usize> = (0..4).filter(|&r| r != i).collect();
        let m = Matrix3::from_fn(|r, col| {
            let v = [a, b, c][col];
            v[rows[r]]
        });
        let sign = if (i + 3) % 2 == 0 { 1.0 } else { -1.0 };
        n[i] = sign * m.determinant();
    }
    n
}

fn unit_normal(space_form: SpaceForm, jet: &Jet) -> Point {
    let n = match space_form {
        SpaceForm::Euclidean3 => cross3(&jet.fu, &jet.fv),
        SpaceForm::Sphere3 => cross4(&jet.f, &jet.fu, &jet.fv),
    };
    n / n.norm()
}

/// Pointwise first- and second-order geometry at one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeGeometry {
    /// Induced metric `g`.
    pub metric: Matrix2<f64>,
    /// Second fundamental form `II(X, Y) = ⟨d²f(X, Y), ξ⟩`.
    pub second: Matrix2<f64>,
    /// Weingarten operator `A = g⁻¹ II`.
    pub weingarten: Matrix2<f64>,
    /// Trace-free part `Å = A - H Id`.
    pub trace_free: Matrix2<f64>,
    pub mean: f64,
    /// Extrinsic Gauss curvature `det A`.
    pub gauss: f64,
    pub normal: Point,
    /// Area density `√det g` with respect to `du dv` (always positive).
    pub area: f64,
    /// Rotation by +90° with respect to `g` and the surface orientation.
    pub complex: Matrix2<f64>,
}

impl NodeGeometry {
    /// `Å J`, the building block of `δ` and `δ*`.
    pub fn trace_free_j(&self) -> Matrix2<f64> {
        self.trace_free * self.complex
    }

    /// `H² - G`, vanishing exactly at umbilics.
    pub fn umbilicity(&self) -> f64 {
        self.mean * self.mean - self.gauss
    }
}

/// The complex structure of a metric: `J = (1/√det g) [[-g12, -g22], [g11, g12]]`.
pub fn complex_structure(g: &Matrix2<f64>) -> Matrix2<f64> {
    let s = g.determinant().sqrt();
    Matrix2::new(-g[(0, 1)], -g[(1, 1)], g[(0, 0)], g[(0, 1)]) / s
}

/// Geometry of every node of a surface.
#[derive(Debug, Clone)]
pub struct FundamentalData {
    pub nodes: Vec<NodeGeometry>,
    /// `+1` or `-1`; the oriented area form is `orientation · area du∧dv`.
    pub orientation: f64,
}

impl FundamentalData {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn mean_curvature(&self) -> ScalarField {
        ScalarField(self.nodes.iter().map(|n| n.mean).collect())
    }

    pub fn gauss_curvature(&self) -> ScalarField {
        ScalarField(self.nodes.iter().map(|n| n.gauss).collect())
    }

    /// The area form `dσ` of the oriented surface.
    pub fn area_form(&self) -> TwoForm {
        self.density_form(|_| 1.0)
    }

    /// `ρ dσ` for a density `ρ`.
    pub fn density_form(&self, density: impl Fn(&NodeGeometry) -> f64) -> TwoForm {
        TwoForm(self.nodes.iter().map(|n| density(n) * n.area * self.orientation).collect())
    }

    /// Recover the density `ω / dσ` of a 2-form.
    pub fn density_of(&self, omega: &TwoForm) -> Vec<f64> {
        omega.0.iter().zip(&self.nodes).map(|(w, n)| w / (n.area * self.orientation)).collect()
    }
}

impl std::ops::Index<usize> for FundamentalData {
    type Output = NodeGeometry;
    fn index(&self, k: usize) -> &NodeGeometry {
        &self.nodes[k]
    }
}

/// Metric, Weingarten operator, curvatures, normal and complex structure at
/// every node.
pub fn fundamental_data(s: &ParamSurface) -> Result<FundamentalData> {
    let grid = s.grid;
    let sign = s.orientation.sign();
    let scale = s.jets.iter().map(|j| j.fu.norm_squared().max(j.fv.norm_squared())).fold(0.0, f64::max);
    let nodes: Vec<Result<NodeGeometry>> = s
        .jets
        .par_iter()
        .enumerate()
        .map(|(k, jet)| {
            let g = metric(jet);
            let det = g.determinant();
            let collapsed = g[(0, 0)].min(g[(1, 1)]) < IMMERSION_TOL * IMMERSION_TOL * scale;
            if !(det > 0.0) || collapsed || det / (g[(0, 0)] * g[(1, 1)]) < IMMERSION_TOL * IMMERSION_TOL {
                let (i, j) = grid.split(k);
                return Err(Error::DegenerateImmersion { i, j });
            }
            let normal = unit_normal(s.space_form, jet) * sign;
            let b =
                Matrix2::new(jet.fuu.dot(&normal), jet.fuv.dot(&normal), jet.fuv.dot(&normal), jet.fvv.dot(&normal));
            let g_inv = Matrix2::new(g[(1, 1)], -g[(0, 1)], -g[(1, 0)], g[(0, 0)]) / det;
            let a = g_inv * b;
            let mean = 0.5 * a.trace();
            Ok(NodeGeometry {
                metric: g,
                second: b,
                weingarten: a,
                trace_free: a - Matrix2::identity() * mean,
                mean,
                gauss: a.determinant(),
                normal,
                area: det.sqrt(),
                complex: complex_structure(&g) * sign,
            })
        })
        .collect();
    let nodes = nodes.into_iter().collect::<Result<Vec<_>>>()?;
    if s.conformal {
        let tolerance = s.conformal_tolerance();
        let residual = s.conformality_residual();
        if residual > tolerance {
            return Err(Error::NotConformal { residual, tolerance });
        }
    }
    Ok(FundamentalData { nodes, orientation: sign })
}

/// Laplace–Beltrami operator of a conformal chart, `Δφ = e^{-2λ}(φ_uu + φ_vv)`.
/// Negative semi-definite: `Δ sin(u) = -sin(u)` on the flat unit chart.
pub fn laplace_beltrami(s: &ParamSurface, phi: &ScalarField) -> Result<ScalarField> {
    s.require_conformal()?;
    phi.check(&s.grid)?;
    let uu = diff::d_uu(&s.grid, &phi.0);
    let vv = diff::d_vv(&s.grid, &phi.0);
    Ok(ScalarField(
        s.jets
            .iter()
            .zip(uu.iter().zip(&vv))
            .map(|(jet, (a, b))| {
                let g = metric(jet);
                let conformal_factor = 0.5 * (g[(0, 0)] + g[(1, 1)]);
                (a + b) / conformal_factor
            })
            .collect(),
    ))
}

/// Integral of a 2-form over the chart's integration domain.
///
/// Periodic axes use the periodic rectangle rule, open axes the midpoint rule
/// over interior nodes. Reversing the orientation of the chart negates the
/// value.
pub fn integrate_2form(s: &ParamSurface, omega: &TwoForm) -> Result<f64> {
    omega.check(&s.grid)?;
    Ok(integrate_nodes(&s.grid, &omega.0) * s.orientation.sign())
}

pub(crate) fn integrate_nodes(grid: &Grid2D, values: &[f64]) -> f64 {
    values.iter().enumerate().map(|(k, v)| grid.weight(k) * v).sum()
}
