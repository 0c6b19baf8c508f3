//! Fourth-order finite differences on [`Grid2D`] node arrays.
//!
//! Periodic axes use centred five-point stencils with wrap-around; the `u`
//! wrap of a twisted torus is resolved by trigonometric interpolation along the
//! periodic `v` axis. Open axes fall back to one-sided fourth-order stencils on
//! the first and last two nodes, which only ever land in the ghost band.

use std::f64::consts::PI;

use crate::grid::{Axis, Grid2D};

const C1: [f64; 5] = [1.0, -8.0, 0.0, 8.0, -1.0];
const C2: [f64; 5] = [-1.0, 16.0, -30.0, 16.0, -1.0];
// One-sided first derivative at offsets 0 and 1 from the line start.
const F0: [f64; 5] = [-25.0, 48.0, -36.0, 16.0, -3.0];
const F1: [f64; 5] = [-3.0, -10.0, 18.0, -6.0, 1.0];
// One-sided second derivative (six-point, fourth order).
const S0: [f64; 6] = [45.0, -154.0, 214.0, -156.0, 61.0, -10.0];
const S1: [f64; 6] = [10.0, -15.0, -4.0, 14.0, -6.0, 1.0];

#[derive(Clone, Copy, PartialEq, Eq)]
enum Order {
    First,
    Second,
}

/// Differentiate one line of an open axis in place into `out`.
fn open_line(line: &[f64], h: f64, order: Order, out: &mut [f64]) {
    let n = line.len();
    let (scale, central): (f64, &[f64; 5]) = match order {
        Order::First => (1.0 / (12.0 * h), &C1),
        Order::Second => (1.0 / (12.0 * h * h), &C2),
    };
    for i in 2..n - 2 {
        out[i] = scale * (0..5).map(|k| central[k] * line[i + k - 2]).sum::<f64>();
    }
    match order {
        Order::First => {
            let lead = |w: &[f64; 5], off: usize| (0..5).map(|k| w[k] * line[off + k]).sum::<f64>();
            let tail = |w: &[f64; 5], off: usize| (0..5).map(|k| w[k] * line[n - 1 - off - k]).sum::<f64>();
            out[0] = scale * lead(&F0, 0);
            out[1] = scale * lead(&F1, 0);
            out[n - 1] = -scale * tail(&F0, 0);
            out[n - 2] = -scale * tail(&F1, 0);
        }
        Order::Second => {
            let lead = |w: &[f64; 6]| (0..6).map(|k| w[k] * line[k]).sum::<f64>();
            let tail = |w: &[f64; 6]| (0..6).map(|k| w[k] * line[n - 1 - k]).sum::<f64>();
            out[0] = scale * lead(&S0);
            out[1] = scale * lead(&S1);
            out[n - 1] = scale * tail(&S0);
            out[n - 2] = scale * tail(&S1);
        }
    }
}

/// Differentiate a periodic line given two ghost values on either side.
fn periodic_line(ext: &[f64], h: f64, order: Order, out: &mut [f64]) {
    let (scale, w) = match order {
        Order::First => (1.0 / (12.0 * h), &C1),
        Order::Second => (1.0 / (12.0 * h * h), &C2),
    };
    for (i, o) in out.iter_mut().enumerate() {
        *o = scale * (0..5).map(|k| w[k] * ext[i + k]).sum::<f64>();
    }
}

/// Values of a periodic sample sequence evaluated at the same nodes shifted by
/// `shift` (trigonometric interpolation).
pub fn shift_periodic(values: &[f64], period: f64, shift: f64) -> Vec<f64> {
    let m = values.len();
    if shift == 0.0 {
        return values.to_vec();
    }
    let half = m / 2;
    // Fourier coefficients c_k for k = 0..=half (real signal).
    let mut re = vec![0.0; half + 1];
    let mut im = vec![0.0; half + 1];
    for k in 0..=half {
        let (mut a, mut b) = (0.0, 0.0);
        for (j, &y) in values.iter().enumerate() {
            let ang = 2.0 * PI * (k * j) as f64 / m as f64;
            a += y * ang.cos();
            b -= y * ang.sin();
        }
        re[k] = a / m as f64;
        im[k] = b / m as f64;
    }
    let step = period / m as f64;
    (0..m)
        .map(|j| {
            let v = j as f64 * step + shift;
            let mut acc = re[0];
            for k in 1..=half {
                let ang = 2.0 * PI * k as f64 * v / period;
                let term = re[k] * ang.cos() - im[k] * ang.sin();
                if m.is_multiple_of(2) && k == half {
                    // Nyquist mode: keep only the cosine part at the nodes' phase.
                    acc += re[k] * (2.0 * PI * k as f64 * v / period).cos();
                } else {
                    acc += 2.0 * term;
                }
            }
            acc
        })
        .collect()
}

fn along_u(grid: &Grid2D, values: &[f64], order: Order) -> Vec<f64> {
    let (nu, nv) = (grid.nu(), grid.nv());
    let h = grid.u.spacing();
    let mut out = vec![0.0; values.len()];
    let row = |i: usize| &values[i * nv..(i + 1) * nv];
    if grid.u.periodic {
        // ghost rows: below index 0 come from rows n-2, n-1 shifted by -twist,
        // above n-1 from rows 0, 1 shifted by +twist.
        let lv = grid.v.length;
        let g = [
            shift_periodic(row(nu - 2), lv, -grid.twist),
            shift_periodic(row(nu - 1), lv, -grid.twist),
            shift_periodic(row(0), lv, grid.twist),
            shift_periodic(row(1), lv, grid.twist),
        ];
        let mut ext = vec![0.0; nu + 4];
        let mut line = vec![0.0; nu];
        for j in 0..nv {
            ext[0] = g[0][j];
            ext[1] = g[1][j];
            for i in 0..nu {
                ext[i + 2] = values[i * nv + j];
            }
            ext[nu + 2] = g[2][j];
            ext[nu + 3] = g[3][j];
            periodic_line(&ext, h, order, &mut line);
            for i in 0..nu {
                out[i * nv + j] = line[i];
            }
        }
    } else {
        let mut col = vec![0.0; nu];
        let mut line = vec![0.0; nu];
        for j in 0..nv {
            for i in 0..nu {
                col[i] = values[i * nv + j];
            }
            open_line(&col, h, order, &mut line);
            for i in 0..nu {
                out[i * nv + j] = line[i];
            }
        }
    }
    out
}

fn along_v(axis: &Axis, nv: usize, values: &[f64], order: Order) -> Vec<f64> {
    let h = axis.spacing();
    let mut out = vec![0.0; values.len()];
    let mut ext = vec![0.0; nv + 4];
    for (row, dst) in values.chunks(nv).zip(out.chunks_mut(nv)) {
        if axis.periodic {
            ext[0] = row[nv - 2];
            ext[1] = row[nv - 1];
            ext[2..nv + 2].copy_from_slice(row);
            ext[nv + 2] = row[0];
            ext[nv + 3] = row[1];
            periodic_line(&ext, h, order, dst);
        } else {
            open_line(row, h, order, dst);
        }
    }
    out
}

pub fn d_u(grid: &Grid2D, values: &[f64]) -> Vec<f64> {
    along_u(grid, values, Order::First)
}

pub fn d_v(grid: &Grid2D, values: &[f64]) -> Vec<f64> {
    along_v(&grid.v, grid.nv(), values, Order::First)
}

pub fn d_uu(grid: &Grid2D, values: &[f64]) -> Vec<f64> {
    along_u(grid, values, Order::Second)
}

pub fn d_vv(grid: &Grid2D, values: &[f64]) -> Vec<f64> {
    along_v(&grid.v, grid.nv(), values, Order::Second)
}

pub fn d_uv(grid: &Grid2D, values: &[f64]) -> Vec<f64> {
    d_v(grid, &d_u(grid, values))
}

/// First derivative of uniformly spaced samples on an open interval.
pub fn line_d1(values: &[f64], h: f64) -> Vec<f64> {
    let mut out = vec![0.0; values.len()];
    open_line(values, h, Order::First, &mut out);
    out
}

/// Second derivative of uniformly spaced samples on an open interval.
pub fn line_d2(values: &[f64], h: f64) -> Vec<f64> {
    let mut out = vec![0.0; values.len()];
    open_line(values, h, Order::Second, &mut out);
    out
}

/// First and second partial derivatives of a node array, in the order
/// `(u, v, uu, uv, vv)`.
pub fn jet(grid: &Grid2D, values: &[f64]) -> [Vec<f64>; 5] {
    let du = d_u(grid, values);
    let dv = d_v(grid, values);
    let duv = d_v(grid, &du);
    [du, dv, d_uu(grid, values), duv, d_vv(grid, values)]
}
