//! Runs a configured problem to its final time, writing snapshots and a
//! manifest; also the reference and convergence harnesses.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::grid::Dim;
use crate::integrator::{ghost_width, Scheme, Solver, TimeMethod};
use crate::io::config::{OutputFormat, RunConfig};
use crate::io::metrics::{l1_against, observed_orders};
use crate::io::schlieren::schlieren_field;
use crate::io::snapshot::{write_csv, write_grid_binary, Snapshot};
use crate::par::ExecPolicy;
use crate::problems::{build_problem, initialize, smooth_exact_density, ProblemSpec, SMOOTH};

pub const MANIFEST: &str = "manifest.txt";

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub snapshots: Vec<PathBuf>,
    pub manifest: PathBuf,
    pub steps: usize,
    pub fallback_cells: usize,
    pub final_time: f64,
}

/// The effective scheme and resolution: a reference run is PCCU on the
/// problem's fine mesh.
fn effective(cfg: &RunConfig) -> Result<(RunConfig, ProblemSpec)> {
    let mut cfg = cfg.clone();
    if cfg.reference {
        let spec = cfg.problem_spec()?;
        let n = spec.reference_nx.ok_or_else(|| Error::Config {
            line: 0,
            message: format!("problem `{}` has no reference resolution", spec.name),
        })?;
        cfg.scheme = Scheme::Pccu;
        cfg.nx = Some(n);
    }
    let spec = cfg.problem_spec()?;
    Ok((cfg, spec))
}

pub fn build_snapshot(solver: &Solver, cfg: &RunConfig) -> Snapshot {
    let mut s = Snapshot::from_field(&solver.field, solver.time, cfg.scheme.name(), &cfg.hash());
    if cfg.schlieren && s.dim == Dim::Two {
        let rho = s.field("rho").expect("density field").to_vec();
        s.push_field("schlieren", schlieren_field(&rho, s.nx, s.ny, s.dx, s.dy));
    }
    s
}

fn write_snapshot(s: &Snapshot, format: OutputFormat, dir: &Path, stem: &str) -> Result<PathBuf> {
    match format {
        OutputFormat::Csv => {
            if s.dim == Dim::Two {
                return Err(Error::Config { line: 0, message: "csv output is 1-D only".into() });
            }
            let path = dir.join(format!("{stem}.csv"));
            write_csv(s, &path)?;
            Ok(path)
        }
        OutputFormat::GridBinary => {
            let path = dir.join(format!("{stem}.meta"));
            write_grid_binary(s, &path)?;
            Ok(path)
        }
    }
}

/// Advances the configured problem through its snapshot schedule. On a
/// solver abort the last accepted state is written as `*_lastgood` and the
/// manifest records the failure before the error is returned.
pub fn run(cfg: &RunConfig, policy: ExecPolicy) -> Result<RunReport> {
    cfg.validate()?;
    let (cfg, spec) = effective(cfg)?;
    let mut scheme = cfg.scheme_config(&spec);
    scheme.policy = policy;
    let grid = spec.default_grid(ghost_width(cfg.scheme));
    let field = initialize(&spec, &grid);
    let mut solver = Solver::new(field, scheme)?;
    let format = cfg.output_format(spec.dim);
    fs::create_dir_all(&cfg.out).map_err(|e| Error::io(&cfg.out, e))?;
    let prefix = format!("{}_{}", spec.name, cfg.scheme.name());

    let clock = Instant::now();
    let mut written = Vec::new();
    let mut outcome = Ok(());
    for (k, &t) in spec.snapshots.iter().enumerate() {
        if let Err(e) = solver.advance_to(t) {
            let s = build_snapshot(&solver, &cfg);
            written.push(write_snapshot(&s, format, &cfg.out, &format!("{prefix}_lastgood"))?);
            outcome = Err(e);
            break;
        }
        let s = build_snapshot(&solver, &cfg);
        written.push(write_snapshot(&s, format, &cfg.out, &format!("{prefix}_{k:03}"))?);
    }
    let wall = clock.elapsed().as_secs_f64();

    let report = RunReport {
        snapshots: written,
        manifest: cfg.out.join(MANIFEST),
        steps: solver.steps,
        fallback_cells: solver.fallback_cells,
        final_time: solver.time,
    };
    let status = match &outcome {
        Ok(()) => "ok".to_string(),
        Err(e) => format!("aborted: {e}"),
    };
    fs::write(&report.manifest, manifest_text(&cfg, &spec, &report, wall, &status))
        .map_err(|e| Error::io(&report.manifest, e))?;
    outcome.map(|()| report)
}

fn manifest_text(cfg: &RunConfig, spec: &ProblemSpec, r: &RunReport, wall: f64, status: &str) -> String {
    let mut m = String::new();
    let _ = writeln!(m, "status: {status}");
    let _ = writeln!(m, "problem: {}", spec.name);
    let _ = writeln!(m, "scheme: {}", cfg.scheme.name());
    let _ = writeln!(m, "nx: {}", spec.nx);
    let _ = writeln!(m, "ny: {}", spec.ny);
    let _ = writeln!(m, "config_hash: {}", cfg.hash());
    let _ = writeln!(m, "steps: {}", r.steps);
    let _ = writeln!(m, "fallback_cells: {}", r.fallback_cells);
    let _ = writeln!(m, "final_time: {:?}", r.final_time);
    let _ = writeln!(m, "wall_time_s: {wall:.3}");
    for p in &r.snapshots {
        let _ = writeln!(m, "snapshot: {}", p.file_name().unwrap_or_default().to_string_lossy());
    }
    m.push_str("\n[config]\n");
    m.push_str(&cfg.to_text());
    m
}

/// Fine-mesh PCCU run of a catalog problem into `out`.
pub fn reference(problem: &str, out: &Path, policy: ExecPolicy) -> Result<RunReport> {
    let mut cfg = RunConfig::new(problem, Scheme::Pccu);
    cfg.reference = true;
    cfg.out = out.to_path_buf();
    run(&cfg, policy)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub nx: usize,
    pub dt: f64,
    pub steps: usize,
    pub l1: f64,
    /// Observed order against the previous (coarser) row.
    pub order: Option<f64>,
}

/// Coarsest mesh of the convergence sequence.
pub fn convergence_base(scheme: Scheme) -> usize {
    match scheme {
        Scheme::AiWeno => 50,
        Scheme::Pccu | Scheme::LdPccu => 100,
    }
}

/// Density L1 errors of the smooth advection problem on `levels` meshes
/// `base·2^k` at its final time. Steps are uniform, `dt ∝ h` for the
/// second-order schemes and `dt ∝ h^{5/3}` for Ai-WENO, so that the time
/// error of SSP-RK3 stays below the spatial one.
pub fn convergence(
    problem: &str,
    scheme: Scheme,
    base: usize,
    levels: usize,
    policy: ExecPolicy,
) -> Result<Vec<ConvergenceRow>> {
    if problem != SMOOTH {
        return Err(Error::Config {
            line: 0,
            message: format!("convergence needs the `{SMOOTH}` problem, which has an exact solution"),
        });
    }
    if levels < 1 || base < 1 {
        return Err(Error::Config { line: 0, message: "need at least one level".into() });
    }
    let spec = build_problem(problem)?;
    let power = if scheme == Scheme::AiWeno { 5.0 / 3.0 } else { 1.0 };
    let cfg0 = RunConfig::new(problem, scheme);
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    let mut dt0 = None;
    for k in 0..levels {
        let nx = base << k;
        let grid = spec.grid(nx, 1, ghost_width(scheme));
        let mut sc = cfg0.scheme_config(&spec);
        sc.policy = policy;
        let mut solver = Solver::new(initialize(&spec, &grid), sc)?;
        let dt_cfl = *dt0.get_or_insert(solver.stable_dt()?);
        let target = dt_cfl * (2.0f64).powf(-power * k as f64);
        let steps = (spec.t_final / target).ceil() as usize;
        let dt = spec.t_final / steps as f64;
        for _ in 0..steps {
            solver.step_fixed(dt, TimeMethod::Ssprk3)?;
        }
        let s = Snapshot::from_field(&solver.field, spec.t_final, scheme.name(), "");
        let l1 = l1_against(&s, "rho", |x, _| smooth_exact_density(x, spec.t_final)).expect("density field");
        let order = rows.last().map(|r| observed_orders(&[r.l1, l1])[0]);
        rows.push(ConvergenceRow { nx, dt, steps, l1, order });
    }
    Ok(rows)
}

pub fn convergence_table(rows: &[ConvergenceRow]) -> String {
    let mut t = String::from("nx\tdt\tsteps\tL1(rho)\torder\n");
    for r in rows {
        let order = r.order.map_or("-".to_string(), |o| format!("{o:.3}"));
        let _ = writeln!(t, "{}\t{:.3e}\t{}\t{:.6e}\t{order}", r.nx, r.dt, r.steps, r.l1);
    }
    t
}
