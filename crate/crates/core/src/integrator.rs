//! Boundary conditions, semi-discrete right-hand side, CFL control and the
//! forward Euler / SSP-RK3 time steppers.

use crate::error::{Error, Result};
use crate::grid::{Boundary, Dim, Field, Grid};
use crate::ldflux::EPS0;
use crate::par::{for_each_chunk, map_lines, ExecPolicy};
use crate::recon::{thresholds_from_fluids, LimiterPair};
use crate::state::{FluidSpec, Vars, MX, MY, NVAR};
use crate::sweep::{line_fluxes, LineError, LineParams, LineScratch};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Pccu,
    LdPccu,
    AiWeno,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Pccu, Scheme::LdPccu, Scheme::AiWeno];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Pccu => "pccu",
            Scheme::LdPccu => "ldpccu",
            Scheme::AiWeno => "aiweno",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Scheme::ALL.into_iter().find(|x| x.name() == s)
    }
}

/// Ghost layers needed by a scheme's stencils.
pub fn ghost_width(scheme: Scheme) -> usize {
    match scheme {
        Scheme::Pccu | Scheme::LdPccu => 2,
        // Fifth-order interpolation three cells out from interfaces that
        // lie two beyond the domain edge (for the correction stencil).
        Scheme::AiWeno => 5,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeConfig {
    pub scheme: Scheme,
    pub cfl: f64,
    pub limiters: LimiterPair,
    pub eps0: f64,
    /// Second-order fallback around material interfaces (fifth-order only).
    pub hybrid: bool,
    /// Fifth-order only: when a stage update leaves a cell invalid, redo
    /// that stage with the cells around it on the second-order path. The
    /// run still aborts if the second-order update is invalid too.
    pub positivity_fallback: bool,
    /// `Γ̂` values used for interface detection.
    pub thresholds: Vec<f64>,
    pub policy: ExecPolicy,
}

impl SchemeConfig {
    pub fn new(scheme: Scheme, fluids: &[FluidSpec]) -> Self {
        Self {
            scheme,
            cfl: 0.45,
            limiters: LimiterPair::default(),
            eps0: EPS0,
            hybrid: false,
            positivity_fallback: true,
            thresholds: thresholds_from_fluids(fluids),
            policy: ExecPolicy::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config { line: 0, message: m.to_string() });
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return bad("cfl must lie in (0, 1]");
        }
        if !(self.limiters.smooth.is_valid() && self.limiters.interface.is_valid()) {
            return bad("limiter parameters out of range");
        }
        if !(self.eps0 > 0.0) {
            return bad("eps0 must be positive");
        }
        Ok(())
    }
}

/// Fills the ghost layers of `field` from its interior. y ghosts of the
/// interior columns are set first, then x ghosts of every row.
pub fn apply_boundary(field: &mut Field) {
    let g = field.grid.clone();
    let len = g.len();
    let (gx, gy) = (g.gx(), g.gy());
    let data = field.as_mut_slice();
    let copy = |data: &mut [f64], dst: usize, src: usize, flip: Option<usize>| {
        for c in 0..NVAR {
            let v = data[c * len + src];
            data[c * len + dst] = if flip == Some(c) { -v } else { v };
        }
    };
    if g.dim == Dim::Two {
        for ip in gx..gx + g.nx {
            for m in 0..gy {
                let (s, f) = source(g.bc.bottom, Side::Low, m, g.ny, MY);
                copy(data, g.pidx(ip, gy - 1 - m), g.pidx(ip, gy + s), f);
                let (s, f) = source(g.bc.top, Side::High, m, g.ny, MY);
                copy(data, g.pidx(ip, gy + g.ny + m), g.pidx(ip, gy + s), f);
            }
        }
    }
    for jp in 0..g.pny() {
        for m in 0..gx {
            let (s, f) = source(g.bc.left, Side::Low, m, g.nx, MX);
            copy(data, g.pidx(gx - 1 - m, jp), g.pidx(gx + s, jp), f);
            let (s, f) = source(g.bc.right, Side::High, m, g.nx, MX);
            copy(data, g.pidx(gx + g.nx + m, jp), g.pidx(gx + s, jp), f);
        }
    }
}

#[derive(Clone, Copy)]
enum Side {
    Low,
    High,
}

/// Interior index feeding ghost layer `m` (0 = adjacent) and the slot to
/// negate, if any.
fn source(b: Boundary, side: Side, m: usize, n: usize, normal: usize) -> (usize, Option<usize>) {
    match (b, side) {
        (Boundary::Free, Side::Low) => (0, None),
        (Boundary::Free, Side::High) => (n - 1, None),
        (Boundary::Wall, Side::Low) => (m.min(n - 1), Some(normal)),
        (Boundary::Wall, Side::High) => (n - 1 - m.min(n - 1), Some(normal)),
        (Boundary::Periodic, Side::Low) => (n - 1 - m % n, None),
        (Boundary::Periodic, Side::High) => (m % n, None),
    }
}

/// Time derivatives of the interior cells (x index fastest) and the largest
/// one-sided speeds seen in each direction.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RhsBuffer {
    pub data: Vec<Vars>,
    pub max_speed_x: f64,
    pub max_speed_y: f64,
}

/// Flux storage reused between evaluations.
#[derive(Debug, Clone, Default)]
pub struct RhsWorkspace {
    fx: Vec<Vars>,
    fy: Vec<Vars>,
}

#[derive(Default)]
struct Worker {
    line: Vec<Vars>,
    forced: Vec<bool>,
    scratch: LineScratch,
}

fn line_error(g: &Grid, row: Option<usize>, col: Option<usize>, e: LineError, along_y: bool) -> Error {
    let clamp = |p: usize, gh: usize, n: usize| p.saturating_sub(gh).min(n - 1);
    let cell = if along_y {
        (col.unwrap_or(0), clamp(e.0, g.gy(), g.ny))
    } else {
        (clamp(e.0, g.gx(), g.nx), row.unwrap_or(0))
    };
    Error::InvalidState { cell, reason: e.1 }
}

/// Semi-discrete right-hand side of a field whose ghosts are filled.
pub fn rhs(field: &Field, cfg: &SchemeConfig) -> Result<RhsBuffer> {
    let mut ws = RhsWorkspace::default();
    let mut out = RhsBuffer::default();
    rhs_into(field, cfg, &mut ws, &mut out)?;
    Ok(out)
}

pub fn rhs_into(field: &Field, cfg: &SchemeConfig, ws: &mut RhsWorkspace, out: &mut RhsBuffer) -> Result<()> {
    rhs_into_forced(field, cfg, &[], ws, out)
}

/// As [`rhs_into`], with `forced` (empty, or one flag per padded cell)
/// marking cells that take the second-order path of the fifth-order scheme.
pub fn rhs_into_forced(
    field: &Field,
    cfg: &SchemeConfig,
    forced: &[bool],
    ws: &mut RhsWorkspace,
    out: &mut RhsBuffer,
) -> Result<()> {
    let g = &field.grid;
    debug_assert!(forced.is_empty() || forced.len() == g.len());
    assert!(g.ghost >= ghost_width(cfg.scheme), "grid has too few ghost layers for the scheme");
    let (nx, ny, gx, gy) = (g.nx, g.ny, g.gx(), g.gy());
    let len = g.len();
    let data = field.as_slice();
    let params = LineParams {
        scheme: cfg.scheme,
        dim: g.dim,
        limiters: cfg.limiters,
        eps0: cfg.eps0,
        hybrid: cfg.hybrid,
        thresholds: &cfg.thresholds,
    };

    ws.fx.resize(ny * (nx + 1), [0.0; NVAR]);
    out.max_speed_x = map_lines(cfg.policy, &mut ws.fx, nx + 1, |j, w: &mut Worker, chunk| {
        let row = g.pidx(0, j + gy);
        w.line.clear();
        w.line.extend((0..g.pnx()).map(|ip| std::array::from_fn(|c| data[c * len + row + ip])));
        w.forced.clear();
        if !forced.is_empty() {
            w.forced.extend_from_slice(&forced[row..row + g.pnx()]);
        }
        line_fluxes(&w.line, &w.forced, gx, &params, &mut w.scratch, chunk)
    })
    .map_err(|(j, e)| line_error(g, Some(j), None, e, false))?;

    out.max_speed_y = 0.0;
    if g.dim == Dim::Two {
        ws.fy.resize(nx * (ny + 1), [0.0; NVAR]);
        out.max_speed_y = map_lines(cfg.policy, &mut ws.fy, ny + 1, |i, w: &mut Worker, chunk| {
            w.line.clear();
            w.line.extend((0..g.pny()).map(|jp| {
                let k = g.pidx(i + gx, jp);
                let u: Vars = std::array::from_fn(|c| data[c * len + k]);
                crate::ldflux::swap(&u)
            }));
            w.forced.clear();
            if !forced.is_empty() {
                w.forced.extend((0..g.pny()).map(|jp| forced[g.pidx(i + gx, jp)]));
            }
            line_fluxes(&w.line, &w.forced, gy, &params, &mut w.scratch, chunk)
        })
        .map_err(|(i, e)| line_error(g, None, Some(i), e, true))?;
    }

    out.data.resize(nx * ny, [0.0; NVAR]);
    let (fx, fy) = (&ws.fx, &ws.fy);
    let (rdx, rdy) = (1.0 / g.dx, 1.0 / g.dy);
    let two_d = g.dim == Dim::Two;
    for_each_chunk(cfg.policy, &mut out.data, nx, |j, row| {
        for (i, r) in row.iter_mut().enumerate() {
            let (a, b) = (&fx[j * (nx + 1) + i], &fx[j * (nx + 1) + i + 1]);
            *r = std::array::from_fn(|c| -(b[c] - a[c]) * rdx);
            if two_d {
                let (a, b) = (&fy[i * (ny + 1) + j], &fy[i * (ny + 1) + j + 1]);
                let d = crate::ldflux::swap(&std::array::from_fn(|c| b[c] - a[c]));
                for c in 0..NVAR {
                    r[c] -= d[c] * rdy;
                }
            }
        }
    });
    Ok(())
}

/// Largest stable step for the given maximal speeds; infinite when nothing
/// moves.
pub fn cfl_timestep(grid: &Grid, max_speed_x: f64, max_speed_y: f64, cfl: f64) -> f64 {
    let rate = match grid.dim {
        Dim::One => max_speed_x / grid.dx,
        Dim::Two => max_speed_x / grid.dx + max_speed_y / grid.dy,
    };
    if rate > 0.0 {
        cfl / rate
    } else {
        f64::INFINITY
    }
}

/// `dst = a·base + b·(stage + dt·L)` on the interior; `a = 0` skips the
/// first term so that single-stage updates stay exact.
fn combine(dst: &mut Field, base: &Field, a: f64, stage: &Field, b: f64, dt: f64, l: &[Vars]) {
    let g = dst.grid.clone();
    let len = g.len();
    let (db, ds) = (base.as_slice(), stage.as_slice());
    let dd = dst.as_mut_slice();
    for j in 0..g.ny {
        for i in 0..g.nx {
            let k = g.idx(i, j);
            let r = &l[j * g.nx + i];
            for c in 0..NVAR {
                let s = ds[c * len + k] + dt * r[c];
                dd[c * len + k] = if a == 0.0 { b * s } else { a * db[c * len + k] + b * s };
            }
        }
    }
}

/// One forward Euler step; ghosts of `field` must be current and are
/// refreshed afterwards.
pub fn forward_euler_step(field: &mut Field, dt: f64, cfg: &SchemeConfig) -> Result<()> {
    let mut st = Stepper::new(field.grid.clone());
    let mut l = rhs(field, cfg)?;
    st.euler(field, dt, cfg, &mut l, 0.0).map(|_| ())
}

/// One SSP-RK3 step with ghosts refreshed before every stage.
pub fn ssprk3_step(field: &mut Field, dt: f64, cfg: &SchemeConfig) -> Result<()> {
    let mut st = Stepper::new(field.grid.clone());
    let mut l = rhs(field, cfg)?;
    st.ssprk3(field, dt, cfg, &mut l, 0.0).map(|_| ())
}

/// SSP-RK3 for an arbitrary system `y' = L(y)` stored in a flat slice.
pub fn ssprk3<F: FnMut(&[f64], &mut [f64])>(y: &mut [f64], dt: f64, mut l: F) {
    let n = y.len();
    let mut k = vec![0.0; n];
    l(y, &mut k);
    let y1: Vec<f64> = (0..n).map(|i| y[i] + dt * k[i]).collect();
    l(&y1, &mut k);
    let y2: Vec<f64> = (0..n).map(|i| 0.75 * y[i] + 0.25 * (y1[i] + dt * k[i])).collect();
    l(&y2, &mut k);
    for i in 0..n {
        y[i] = y[i] / 3.0 + 2.0 / 3.0 * (y2[i] + dt * k[i]);
    }
}

/// Cells around an invalid one that move to the second-order path.
const FALLBACK_RADIUS: usize = 3;

/// Stage storage for SSP-RK3.
#[derive(Debug, Clone)]
struct Stepper {
    u1: Field,
    u2: Field,
    ws: RhsWorkspace,
    buf: RhsBuffer,
    forced: Vec<bool>,
}

/// Inputs of one stage `dst = a·base + b·(src + dt·L(src))`.
struct Stage<'a> {
    base: &'a Field,
    a: f64,
    src: &'a Field,
    b: f64,
    dt: f64,
    time: f64,
    number: u8,
}

impl Stepper {
    fn new(grid: Grid) -> Self {
        Self {
            u1: Field::new(grid.clone()),
            u2: Field::new(grid),
            ws: RhsWorkspace::default(),
            buf: RhsBuffer::default(),
            forced: Vec::new(),
        }
    }

    fn check(f: &Field, time: f64, stage: u8) -> Result<()> {
        match f.first_invalid() {
            Some((cell, reason)) => Err(Error::SolverAbort { time, stage, cell, reason }),
            None => Ok(()),
        }
    }

    /// Forms the stage into `dst` from `l = L(src)`. With the positivity
    /// fallback enabled, invalid cells and their neighbourhoods are moved to
    /// the second-order path and `l` is recomputed until the stage is valid
    /// or nothing new can be tagged. Returns the number of tagged cells.
    fn run_stage(
        dst: &mut Field,
        st: Stage,
        l: &mut RhsBuffer,
        cfg: &SchemeConfig,
        ws: &mut RhsWorkspace,
        forced: &mut Vec<bool>,
    ) -> Result<usize> {
        let fallback = cfg.positivity_fallback && cfg.scheme == Scheme::AiWeno;
        forced.clear();
        let mut tagged = 0;
        loop {
            combine(dst, st.base, st.a, st.src, st.b, st.dt, &l.data);
            apply_boundary(dst);
            let bad = dst.invalid_cells();
            if bad.is_empty() {
                return Ok(tagged);
            }
            let added = if fallback { tag_neighbourhoods(&dst.grid, &bad, forced) } else { 0 };
            if added == 0 {
                return Self::check(dst, st.time, st.number).map(|_| tagged);
            }
            tagged += added;
            rhs_into_forced(st.src, cfg, forced, ws, l).map_err(|e| abort(e, st.time, st.number))?;
        }
    }

    /// On failure `u` is left untouched.
    fn euler(&mut self, u: &mut Field, dt: f64, cfg: &SchemeConfig, l0: &mut RhsBuffer, time: f64) -> Result<usize> {
        let st = Stage { base: u, a: 0.0, src: u, b: 1.0, dt, time, number: 1 };
        let tagged = Self::run_stage(&mut self.u1, st, l0, cfg, &mut self.ws, &mut self.forced)?;
        std::mem::swap(u, &mut self.u1);
        Ok(tagged)
    }

    /// Advances `u` by `dt` given `L(u)` already evaluated. On failure `u`
    /// is left untouched.
    fn ssprk3(&mut self, u: &mut Field, dt: f64, cfg: &SchemeConfig, l0: &mut RhsBuffer, time: f64) -> Result<usize> {
        let (ws, forced) = (&mut self.ws, &mut self.forced);
        let mut tagged = 0;
        let st = Stage { base: u, a: 0.0, src: u, b: 1.0, dt, time, number: 1 };
        tagged += Self::run_stage(&mut self.u1, st, l0, cfg, ws, forced)?;

        rhs_into(&self.u1, cfg, ws, &mut self.buf).map_err(|e| abort(e, time, 2))?;
        let st = Stage { base: u, a: 0.75, src: &self.u1, b: 0.25, dt, time, number: 2 };
        tagged += Self::run_stage(&mut self.u2, st, &mut self.buf, cfg, ws, forced)?;

        rhs_into(&self.u2, cfg, ws, &mut self.buf).map_err(|e| abort(e, time, 3))?;
        let st = Stage { base: u, a: 1.0 / 3.0, src: &self.u2, b: 2.0 / 3.0, dt, time, number: 3 };
        tagged += Self::run_stage(&mut self.u1, st, &mut self.buf, cfg, ws, forced)?;
        std::mem::swap(u, &mut self.u1);
        Ok(tagged)
    }
}

/// Marks the padded cells within [`FALLBACK_RADIUS`] of each interior cell
/// in `bad`; returns how many were newly marked.
fn tag_neighbourhoods(g: &Grid, bad: &[(usize, usize)], forced: &mut Vec<bool>) -> usize {
    forced.resize(g.len(), false);
    let r = FALLBACK_RADIUS;
    let ry = if g.dim == Dim::Two { r } else { 0 };
    let mut added = 0;
    for &(i, j) in bad {
        let (ip, jp) = (i + g.gx(), j + g.gy());
        for y in jp.saturating_sub(ry)..=(jp + ry).min(g.pny() - 1) {
            for x in ip.saturating_sub(r)..=(ip + r).min(g.pnx() - 1) {
                let k = g.pidx(x, y);
                if !forced[k] {
                    forced[k] = true;
                    added += 1;
                }
            }
        }
    }
    added
}

fn abort(e: Error, time: f64, stage: u8) -> Error {
    match e {
        Error::InvalidState { cell, reason } => Error::SolverAbort { time, stage, cell, reason },
        other => other,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeMethod {
    ForwardEuler,
    Ssprk3,
}

/// Owns the evolving field and advances it with CFL-limited SSP-RK3 steps.
#[derive(Debug, Clone)]
pub struct Solver {
    pub field: Field,
    pub time: f64,
    pub steps: usize,
    /// Cells moved to the second-order path by the positivity fallback,
    /// summed over all stages so far.
    pub fallback_cells: usize,
    pub cfg: SchemeConfig,
    stepper: Stepper,
    l0: RhsBuffer,
    ws: RhsWorkspace,
}

impl Solver {
    /// Takes a field with a filled interior; its ghost width must suit the
    /// scheme.
    pub fn new(mut field: Field, cfg: SchemeConfig) -> Result<Self> {
        cfg.validate()?;
        if field.grid.ghost < ghost_width(cfg.scheme) {
            return Err(Error::Config {
                line: 0,
                message: format!("{} needs {} ghost layers", cfg.scheme.name(), ghost_width(cfg.scheme)),
            });
        }
        if let Some((cell, reason)) = field.first_invalid() {
            return Err(Error::InvalidState { cell, reason });
        }
        apply_boundary(&mut field);
        let stepper = Stepper::new(field.grid.clone());
        Ok(Self {
            field,
            time: 0.0,
            steps: 0,
            fallback_cells: 0,
            cfg,
            stepper,
            l0: RhsBuffer::default(),
            ws: RhsWorkspace::default(),
        })
    }

    /// `L(U)` of the current state.
    pub fn rhs(&mut self) -> Result<&RhsBuffer> {
        rhs_into(&self.field, &self.cfg, &mut self.ws, &mut self.l0).map_err(|e| abort(e, self.time, 1))?;
        Ok(&self.l0)
    }

    /// CFL step at the current state.
    pub fn stable_dt(&mut self) -> Result<f64> {
        self.rhs()?;
        Ok(cfl_timestep(&self.field.grid, self.l0.max_speed_x, self.l0.max_speed_y, self.cfg.cfl))
    }

    /// One step of size `dt` with the chosen method.
    pub fn step_fixed(&mut self, dt: f64, method: TimeMethod) -> Result<()> {
        self.rhs()?;
        self.advance_with_rhs(dt, method)?;
        self.time += dt;
        Ok(())
    }

    fn advance_with_rhs(&mut self, dt: f64, method: TimeMethod) -> Result<()> {
        let (f, l0, t) = (&mut self.field, &mut self.l0, self.time);
        let res = match method {
            TimeMethod::ForwardEuler => self.stepper.euler(f, dt, &self.cfg, l0, t),
            TimeMethod::Ssprk3 => self.stepper.ssprk3(f, dt, &self.cfg, l0, t),
        };
        self.fallback_cells += res?;
        self.steps += 1;
        Ok(())
    }

    /// One CFL-limited SSP-RK3 step that does not pass `t_stop`; returns the
    /// step taken.
    pub fn step(&mut self, t_stop: f64) -> Result<f64> {
        let dt_cfl = self.stable_dt()?;
        let remaining = t_stop - self.time;
        let land = dt_cfl >= remaining * (1.0 - 1e-12);
        let dt = if land { remaining } else { dt_cfl };
        self.advance_with_rhs(dt, TimeMethod::Ssprk3)?;
        if land {
            self.time = t_stop;
        } else {
            self.time += dt;
        }
        Ok(dt)
    }

    /// Steps until `time == t`.
    pub fn advance_to(&mut self, t: f64) -> Result<()> {
        while self.time < t {
            self.step(t)?;
        }
        Ok(())
    }
}
