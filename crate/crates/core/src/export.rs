//! Text exports: triangulated OBJ meshes and per-node CSV tables.
//!
//! Surfaces in S³ are mapped to R³ by stereographic projection from
//! `(0, 0, 0, 1)`.

use std::fmt::Write as _;
use std::io::{self, Write};

use crate::conformal::QuadraticDifferential;
use crate::curves::CurvatureCurve;
use crate::error::Result;
use crate::surface::{fundamental_data, ParamSurface, Point, SpaceForm};

/// `(x₁, x₂, x₃) / (1 - x₄)`.
pub fn stereographic(p: &Point) -> [f64; 3] {
    let d = 1.0 - p[3];
    [p[0] / d, p[1] / d, p[2] / d]
}

fn r3(s: &ParamSurface, p: &Point) -> [f64; 3] {
    match s.space_form() {
        SpaceForm::Euclidean3 => [p[0], p[1], p[2]],
        SpaceForm::Sphere3 => stereographic(p),
    }
}

/// Write the surface over its integration domain as a triangle mesh. Periodic
/// axes are closed up; a twisted seam is left open.
pub fn write_obj<W: Write>(s: &ParamSurface, out: &mut W) -> io::Result<()> {
    let grid = s.grid();
    let (iu, iv) = (grid.u.interior(), grid.v.interior());
    let (nu, nv) = (iu.len(), iv.len());
    let mut text = String::new();
    writeln!(text, "# {} x {} nodes", nu, nv).unwrap();
    for i in iu.clone() {
        for j in iv.clone() {
            let [x, y, z] = r3(s, &s.jets()[grid.index(i, j)].f);
            writeln!(text, "v {x:.12} {y:.12} {z:.12}").unwrap();
        }
    }
    let wrap_u = grid.u.periodic && grid.twist == 0.0;
    let wrap_v = grid.v.periodic;
    let cells_u = if wrap_u { nu } else { nu - 1 };
    let cells_v = if wrap_v { nv } else { nv - 1 };
    let id = |a: usize, b: usize| (a % nu) * nv + (b % nv) + 1;
    for a in 0..cells_u {
        for b in 0..cells_v {
            let (p, q, r, t) = (id(a, b), id(a + 1, b), id(a + 1, b + 1), id(a, b + 1));
            writeln!(text, "f {p} {q} {r}").unwrap();
            writeln!(text, "f {p} {r} {t}").unwrap();
        }
    }
    out.write_all(text.as_bytes())
}

/// One row per integration node: chart coordinates, position, `H`, `G` and
/// the area density.
pub fn write_surface_csv<W: Write>(s: &ParamSurface, out: &mut W) -> Result<()> {
    let fd = fundamental_data(s)?;
    let grid = s.grid();
    let mut text = String::from("u,v,x1,x2,x3,x4,H,G,area\n");
    for k in (0..grid.len()).filter(|&k| grid.is_interior(k)) {
        let (u, v) = grid.point(k);
        let p = s.jets()[k].f;
        let n = &fd.nodes[k];
        writeln!(
            text,
            "{u:.12},{v:.12},{:.12},{:.12},{:.12},{:.12},{:.12},{:.12},{:.12}",
            p[0], p[1], p[2], p[3], n.mean, n.gauss, n.area
        )
        .unwrap();
    }
    out.write_all(text.as_bytes())?;
    Ok(())
}

/// `node, u, v, Re φ, Im φ` for `q = φ dz²` at every integration node.
pub fn write_quadratic_differential_csv<W: Write>(
    s: &ParamSurface,
    q: &QuadraticDifferential,
    out: &mut W,
) -> Result<()> {
    let grid = s.grid();
    q.check(grid)?;
    let mut text = String::from("node,u,v,re_phi,im_phi\n");
    for k in (0..grid.len()).filter(|&k| grid.is_interior(k)) {
        let (u, v) = grid.point(k);
        let phi = q.coeffs[k];
        writeln!(text, "{k},{u:.12},{v:.12},{:.12},{:.12}", phi.re, phi.im).unwrap();
    }
    out.write_all(text.as_bytes())?;
    Ok(())
}

/// `s, κ, x, y[, z]` for every `stride`-th sample.
pub fn write_curve_csv<W: Write>(c: &CurvatureCurve, stride: usize, out: &mut W) -> io::Result<()> {
    let sphere = c.ambient() == crate::curves::Ambient::Sphere2;
    let mut text = String::from(if sphere { "s,kappa,x,y,z\n" } else { "s,kappa,x,y\n" });
    let n = c.samples().len();
    for (k, x) in c.samples().iter().enumerate() {
        if k % stride.max(1) != 0 && k + 1 != n {
            continue;
        }
        let p = x.position;
        if sphere {
            writeln!(text, "{:.12},{:.12},{:.12},{:.12},{:.12}", x.s, x.kappa, p.x, p.y, p.z).unwrap();
        } else {
            writeln!(text, "{:.12},{:.12},{:.12},{:.12}", x.s, x.kappa, p.x, p.y).unwrap();
        }
    }
    out.write_all(text.as_bytes())
}
