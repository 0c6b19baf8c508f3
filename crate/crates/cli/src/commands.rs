use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use conwill_core::builders::{cylinder_over_curve, homogeneous_torus, hopf_cylinder, BuilderSpec, CurveSpec};
use conwill_core::conformal::{default_basis, delta_star, hopf_differential};
use conwill_core::curves::{elastica_ode, integrate_law, Ambient, KappaLaw, StartFrame};
use conwill_core::export::{write_curve_csv, write_obj, write_quadratic_differential_csv, write_surface_csv};
use conwill_core::functionals::{area_of, enclosed_volume, form_norm, gradient_of, willmore_of, FunctionalKind};
use conwill_core::multiplier::{cmc_multiplier_with, solve_multiplier};
use conwill_core::variation::fd_functional_derivative;
use conwill_core::{fundamental_data, ParamSurface, ScalarField, SpaceForm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::job::{check_positive, check_resolution, BasisSpec, JobConfig, MAX_RESOLUTION};
use crate::{
    AmbientArg, CertifyArgs, CurveArgs, EnergyArgs, ExportArgs, ExportFormat, GradientArgs, Ode, SurfaceArgs,
    VerifyArgs,
};

const DEFAULT_X_MAX: f64 = 6.0;
const DEFAULT_STEPS: [f64; 2] = [2e-3, 1e-3];

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    let mut w = sink(out)?;
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(())
}

fn required(name: &str, value: Option<f64>) -> Result<f64> {
    value.ok_or_else(|| anyhow!("--{name} is required for this builder"))
}

fn spec_from_flags(variant: &str, a: &SurfaceArgs) -> Result<BuilderSpec> {
    Ok(match variant {
        "homogeneous-torus" => BuilderSpec::HomogeneousTorus { r1: required("r1", a.r1)?, r2: required("r2", a.r2)? },
        "round-sphere" => BuilderSpec::RoundSphere { x_max: a.x_max.unwrap_or(DEFAULT_X_MAX) },
        "torus-of-revolution" => {
            BuilderSpec::TorusOfRevolution { big: required("big", a.big)?, small: required("small", a.small)? }
        }
        "cylinder-over-curve" | "hopf-cylinder" | "surface-of-revolution" => {
            bail!("builder `{variant}` takes a curve or profile; describe it in a --job file")
        }
        other => bail!("unknown builder `{other}`"),
    })
}

pub struct Resolved {
    pub job: JobConfig,
    pub spec: BuilderSpec,
    pub surface: ParamSurface,
    pub out: Option<std::path::PathBuf>,
}

pub fn load_job(path: Option<&Path>) -> Result<JobConfig> {
    path.map(JobConfig::load).transpose().map(Option::unwrap_or_default)
}

pub fn resolve_surface(a: &SurfaceArgs) -> Result<Resolved> {
    let job = load_job(a.job.as_deref())?;
    let resolution = a.resolution.unwrap_or(job.resolution());
    check_resolution(resolution)?;
    let spec = match &a.builder {
        Some(variant) => spec_from_flags(variant, a)?,
        None => job
            .builder
            .clone()
            .ok_or_else(|| anyhow!("no surface given: pass --builder or a job file with `builder`"))?,
    };
    let surface = spec.build(resolution).with_context(|| format!("building {}", variant_name(&spec)))?;
    let out = a.out.clone().or_else(|| job.output.clone());
    Ok(Resolved { job, spec, surface, out })
}

fn variant_name(spec: &BuilderSpec) -> String {
    serde_json::to_value(spec)
        .ok()
        .and_then(|v| v.get("variant").and_then(|s| s.as_str()).map(str::to_owned))
        .unwrap_or_default()
}

fn functional_arg(flag: Option<&str>, job: &JobConfig) -> Result<Option<FunctionalKind>> {
    match flag {
        Some(f) => Ok(Some(f.parse()?)),
        None => Ok(job.functional),
    }
}

fn pretty(value: &impl serde::Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

pub fn build(a: &SurfaceArgs) -> Result<ExitCode> {
    let r = resolve_surface(a)?;
    let s = &r.surface;
    let summary = json!({
        "builder": r.spec,
        "space_form": s.space_form(),
        "nu": s.grid().nu(),
        "nv": s.grid().nv(),
        "closed": s.is_closed(),
        "conformal": s.is_conformal(),
        "conformality_residual": s.conformality_residual(),
        "orientation": s.orientation(),
    });
    emit(r.out.as_deref(), &pretty(&summary)?)?;
    Ok(ExitCode::SUCCESS)
}

struct Energies {
    area: f64,
    willmore: f64,
    volume: Option<f64>,
}

fn energies(s: &ParamSurface) -> Result<Energies> {
    let fd = fundamental_data(s)?;
    let volume =
        if s.is_closed() && s.space_form() == SpaceForm::Euclidean3 { Some(enclosed_volume(s)?) } else { None };
    Ok(Energies { area: area_of(s, &fd), willmore: willmore_of(s, &fd), volume })
}

/// Values at the requested resolution, the difference to a build at twice
/// the resolution serving as the error estimate.
pub fn energy(a: &EnergyArgs) -> Result<ExitCode> {
    let r = resolve_surface(&a.surface)?;
    let s = &r.surface;
    let coarse = energies(s)?;
    let n = s.grid().nu().max(s.grid().nv());
    let fine_n = (2 * n).min(MAX_RESOLUTION);
    let fine = energies(&r.spec.build(fine_n)?)?;
    let mut rows = vec![("area", coarse.area, fine.area), ("willmore", coarse.willmore, fine.willmore)];
    if let (Some(v), Some(w)) = (coarse.volume, fine.volume) {
        rows.push(("volume", v, w));
    }
    let text = if a.json {
        let mut m = serde_json::Map::new();
        for &(name, v, w) in &rows {
            m.insert(name.into(), json!(v));
            m.insert(format!("{name}_error_estimate"), json!((w - v).abs()));
        }
        m.insert("nu".into(), json!(s.grid().nu()));
        m.insert("nv".into(), json!(s.grid().nv()));
        m.insert("refined_resolution".into(), json!(fine_n));
        pretty(&serde_json::Value::Object(m))?
    } else {
        let mut text = format!("nodes {} x {}, refinement {fine_n}\n", s.grid().nu(), s.grid().nv());
        text += &format!("{:<10} {:>20} {:>20} {:>12}\n", "quantity", "value", "refined", "est. error");
        for &(name, v, w) in &rows {
            text += &format!("{name:<10} {v:>20.12} {w:>20.12} {:>12.3e}\n", (w - v).abs());
        }
        text
    };
    emit(r.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

pub fn certify(a: &CertifyArgs) -> Result<ExitCode> {
    let r = resolve_surface(&a.surface)?;
    let kind = functional_arg(a.functional.as_deref(), &r.job)?.unwrap_or(FunctionalKind::Willmore);
    let basis = match &a.basis {
        Some(b) => BasisSpec::parse(b)?,
        None => r.job.basis.unwrap_or(BasisSpec::Default),
    };
    let tol = a.tol.unwrap_or(r.job.tolerance());
    check_positive("tolerance", tol)?;
    let elements = basis.elements(r.surface.grid())?;
    let cert = solve_multiplier(&r.surface, kind, &elements, tol)?;
    emit(r.out.as_deref(), &pretty(&cert)?)?;
    if a.expect_critical && !cert.verdict.is_critical() {
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_span(text: &str) -> Result<(f64, f64)> {
    let (lo, hi) = text.split_once(',').ok_or_else(|| anyhow!("span must be `start,end`, got `{text}`"))?;
    let (lo, hi): (f64, f64) = (lo.trim().parse()?, hi.trim().parse()?);
    if !(hi > lo) {
        bail!("span end must exceed start, got {lo},{hi}");
    }
    Ok((lo, hi))
}

pub fn curve(a: &CurveArgs) -> Result<ExitCode> {
    let job = load_job(a.job.as_deref())?;
    let out = a.out.clone().or_else(|| job.output.clone());
    let mut report = serde_json::Map::new();
    let curve = match a.ode {
        Some(ode) => {
            let (ka, kb) = (a.a.unwrap_or(0.0), a.b.unwrap_or(0.0));
            let (k0, dk0) = (a.k0.unwrap_or(1.0), a.dk0.unwrap_or(0.0));
            let span = parse_span(a.span.as_deref().unwrap_or("0,10"))?;
            let (law, default_ambient) = match ode {
                Ode::Elastica => (KappaLaw::Elastica { a: ka, b: kb, kappa0: k0, dkappa0: dk0 }, AmbientArg::Sphere),
                Ode::Burstall => (KappaLaw::Burstall { a: ka, b: kb, kappa0: k0, dkappa0: dk0 }, AmbientArg::Plane),
            };
            let ambient = match a.ambient.unwrap_or(default_ambient) {
                AmbientArg::Plane => Ambient::Plane,
                AmbientArg::Sphere => Ambient::Sphere2,
            };
            if ode == Ode::Elastica {
                let trace = elastica_ode(ka, kb, k0, dk0, span)?;
                report.insert("energy_drift".into(), json!(trace.energy_drift));
            }
            integrate_law(&law, ambient, StartFrame::standard(ambient), span)?
        }
        None => job
            .curve
            .as_ref()
            .ok_or_else(|| anyhow!("no curve given: pass --ode or a job file with `curve`"))?
            .build()?,
    };
    report.insert("length".into(), json!(curve.length()));
    report.insert("closure_gap".into(), json!(curve.closure_gap()));
    report.insert("samples".into(), json!(curve.samples().len()));
    let mut w = sink(out.as_deref())?;
    write_curve_csv(&curve, a.stride, &mut w)?;
    w.flush()?;
    eprintln!("{}", serde_json::Value::Object(report));
    Ok(ExitCode::SUCCESS)
}

fn bump(t: f64) -> f64 {
    if t.abs() < 1.0 {
        (-1.0 / (1.0 - t * t)).exp()
    } else {
        0.0
    }
}

/// A few random Fourier modes, cut off smoothly along open axes.
fn random_variation(seed: u64, s: &ParamSurface) -> ScalarField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = *s.grid();
    let modes: Vec<(f64, f64, f64, f64)> = (0..4)
        .map(|_| {
            (
                rng.gen_range(0..3) as f64,
                rng.gen_range(0..3) as f64,
                rng.gen_range(-1.0..1.0),
                rng.gen_range(0.0..2.0 * PI),
            )
        })
        .collect();
    let offset: f64 = rng.gen_range(-1.0..1.0);
    ScalarField::from_fn(&grid, |x, y| {
        let (tx, ty) = ((x - grid.u.start) / grid.u.length, (y - grid.v.start) / grid.v.length);
        let mut v =
            offset + modes.iter().map(|&(i, j, a, p)| a * (2.0 * PI * (i * tx + j * ty) + p).cos()).sum::<f64>();
        if !grid.u.periodic {
            v *= bump(2.0 * tx - 1.0);
        }
        if !grid.v.periodic {
            v *= bump(2.0 * ty - 1.0);
        }
        v
    })
}

fn parse_steps(text: &str) -> Result<Vec<f64>> {
    text.split(',').map(|t| t.trim().parse::<f64>().with_context(|| format!("step `{t}`"))).collect()
}

pub fn check_gradients(a: &GradientArgs) -> Result<ExitCode> {
    let r = resolve_surface(&a.surface)?;
    let s = &r.surface;
    let kinds = match functional_arg(a.functional.as_deref(), &r.job)? {
        Some(k) => vec![k],
        None if s.is_closed() && s.space_form() == SpaceForm::Euclidean3 => {
            vec![FunctionalKind::Area, FunctionalKind::Volume, FunctionalKind::Willmore]
        }
        None => vec![FunctionalKind::Area, FunctionalKind::Willmore],
    };
    let steps = match &a.steps {
        Some(t) => parse_steps(t)?,
        None => r.job.steps.clone().unwrap_or_else(|| DEFAULT_STEPS.to_vec()),
    };
    for &t in &steps {
        check_positive("step", t)?;
    }
    let u = random_variation(a.seed.or(r.job.seed).unwrap_or(0), s);
    let mut text = String::from("functional,step,analytic,fd,rel_err\n");
    for kind in kinds {
        let check = fd_functional_derivative(s, kind, &u, &steps)?;
        let rel = |fd: f64| (fd - check.analytic).abs() / check.analytic.abs().max(fd.abs()).max(f64::MIN_POSITIVE);
        for st in &check.steps {
            text +=
                &format!("{},{:e},{:.12e},{:.12e},{:.3e}\n", kind.name(), st.step, check.analytic, st.fd, rel(st.fd));
        }
        text +=
            &format!("{},extrapolated,{:.12e},{:.12e},{:.3e}\n", kind.name(), check.analytic, check.fd, check.rel_err);
    }
    emit(r.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

pub fn export(a: &ExportArgs) -> Result<ExitCode> {
    let r = resolve_surface(&a.surface)?;
    let s = &r.surface;
    let mut w = sink(r.out.as_deref())?;
    match a.format {
        ExportFormat::Obj => write_obj(s, &mut w)?,
        ExportFormat::Csv => write_surface_csv(s, &mut w)?,
        ExportFormat::HopfCsv => {
            let fd = fundamental_data(s)?;
            write_quadratic_differential_csv(s, &hopf_differential(s, &fd)?, &mut w)?
        }
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

struct Identity {
    name: &'static str,
    value: f64,
    tol: f64,
}

fn identities(n: usize) -> Result<Vec<Identity>> {
    let torus = homogeneous_torus(0.6, 0.8, n, n)?;
    let fd = fundamental_data(&torus)?;
    let lhs = delta_star(&torus, &fd, &hopf_differential(&torus, &fd)?)?;
    let rhs = fd.density_form(|n| 4.0 * n.umbilicity());
    let dstar_q = form_norm(&torus, &fd, &lhs.sub(&rhs)) / form_norm(&torus, &fd, &rhs);

    let grad = gradient_of(&torus, &fd, FunctionalKind::Willmore)?;
    let q = cmc_multiplier_with(&torus, &fd)?;
    let cmc = form_norm(&torus, &fd, &grad.sub(&delta_star(&torus, &fd, &q)?)) / form_norm(&torus, &fd, &grad);

    let clifford = hopf_cylinder(&CurveSpec::SphereCircle { curvature: 0.0 }.build()?, n, n)?;
    let w = willmore_of(&clifford, &fundamental_data(&clifford)?);
    let hopf_energy = (w - 2.0 * PI * PI).abs() / (2.0 * PI * PI);

    let ellipse = cylinder_over_curve(&CurveSpec::Ellipse { a: 1.5, b: 1.0 }.build()?, (0.0, 1.0), 4 * n, 16)?;
    let cert = solve_multiplier(&ellipse, FunctionalKind::Area, &default_basis(ellipse.grid()), 1e-5)?;
    let cylinder = (cert.coefficients[0] + 0.25).abs().max(cert.coefficients[1].abs());

    Ok(vec![
        Identity { name: "dstar-hopf-differential", value: dstar_q, tol: 1e-7 },
        Identity { name: "cmc-multiplier", value: cmc, tol: 1e-6 },
        Identity { name: "hopf-torus-energy", value: hopf_energy, tol: 1e-4 },
        Identity { name: "cylinder-area-multiplier", value: cylinder, tol: 1e-5 },
    ])
}

pub fn verify_identities(a: &VerifyArgs) -> Result<ExitCode> {
    check_resolution(4 * a.resolution)?;
    let rows = identities(a.resolution)?;
    let mut text = format!("{:<26} {:>10} {:>8}  status\n", "identity", "error", "tol");
    let mut ok = true;
    for r in &rows {
        let pass = r.value < r.tol;
        ok &= pass;
        text += &format!("{:<26} {:>10.2e} {:>8.0e}  {}\n", r.name, r.value, r.tol, if pass { "pass" } else { "FAIL" });
    }
    emit(None, &text)?;
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
