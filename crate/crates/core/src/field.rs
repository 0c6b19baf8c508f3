//! Per-node fields over a chart.

use nalgebra::{Matrix2, Vector2};

use crate::error::Result;
use crate::grid::Grid2D;

macro_rules! node_field {
    ($(#[$doc:meta])* $name:ident, $elem:ty) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name(pub Vec<$elem>);

        impl $name {
            pub fn from_fn(grid: &Grid2D, f: impl Fn(f64, f64) -> $elem) -> Self {
                $name((0..grid.len()).map(|k| {
                    let (x, y) = grid.point(k);
                    f(x, y)
                }).collect())
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn values(&self) -> &[$elem] {
                &self.0
            }

            pub fn check(&self, grid: &Grid2D) -> Result<()> {
                grid.check_len(self.0.len())
            }
        }

        impl std::ops::Index<usize> for $name {
            type Output = $elem;
            fn index(&self, k: usize) -> &$elem {
                &self.0[k]
            }
        }
    };
}

node_field!(
    /// A real function on the chart.
    ScalarField, f64);
node_field!(
    /// A 2-form, stored as its coefficient with respect to `du ∧ dv`.
    TwoForm, f64);
node_field!(
    /// A tangent vector field in coordinate components `(a, b) = a ∂u + b ∂v`.
    VectorField, Vector2<f64>);
node_field!(
    /// An endomorphism field of the tangent bundle in coordinate components.
    EndoField, Matrix2<f64>);

impl ScalarField {
    pub fn constant(grid: &Grid2D, c: f64) -> Self {
        ScalarField(vec![c; grid.len()])
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        ScalarField(self.0.iter().map(|&x| f(x)).collect())
    }
}

impl TwoForm {
    pub fn zero(grid: &Grid2D) -> Self {
        TwoForm(vec![0.0; grid.len()])
    }

    pub fn scaled(&self, c: f64) -> Self {
        TwoForm(self.0.iter().map(|x| c * x).collect())
    }

    pub fn sub(&self, other: &TwoForm) -> Self {
        TwoForm(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl EndoField {
    pub fn zero(grid: &Grid2D) -> Self {
        EndoField(vec![Matrix2::zeros(); grid.len()])
    }

    pub fn add(&self, other: &EndoField) -> Self {
        EndoField(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// The 2-form `b(_ ∧ _)` of a bilinear form `b(X, Y) = Xᵀ B Y`, evaluated on
/// `(∂u, ∂v)`.
#[inline]
pub fn wedge_coefficient(b: &Matrix2<f64>) -> f64 {
    b[(0, 1)] - b[(1, 0)]
}
