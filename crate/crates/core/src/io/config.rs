//! Plain-text run configuration: one `key = value` per line, `#` starts a
//! comment. Several `key=value` tokens may share a line when separated by
//! whitespace.

use std::fmt::Write as _;
use std::path::PathBuf;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::grid::{Boundaries, Boundary, Dim};
use crate::integrator::{Scheme, SchemeConfig};
use crate::problems::{build_problem, ProblemSpec, Region, RegionState, Shape};
use crate::recon::{thresholds_from_fluids, LimiterPair, LimiterParams};
use crate::state::{FluidSpec, PrimitiveState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    GridBinary,
}

impl OutputFormat {
    pub fn name(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::GridBinary => "grid-binary",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(OutputFormat::Csv),
            "grid-binary" => Some(OutputFormat::GridBinary),
            _ => None,
        }
    }
}

/// One side of an inline two-state problem: `(ρ, u, p, γ, π∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InlineState {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
    pub gamma: f64,
    pub pi_inf: f64,
}

impl InlineState {
    fn fluid(&self) -> FluidSpec {
        FluidSpec::new(self.gamma, self.pi_inf)
    }
}

/// A 1-D two-state problem given directly in the config.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InlineProblem {
    pub domain: (f64, f64),
    pub split: f64,
    pub left: InlineState,
    pub right: InlineState,
    pub bc: Boundary,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSource {
    Catalog(String),
    Inline(InlineProblem),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemSource,
    pub scheme: Scheme,
    pub cfl: f64,
    pub eps0: f64,
    pub theta: f64,
    pub tau_interface: f64,
    pub tau_smooth: f64,
    /// `None` keeps the problem's default.
    pub hybrid: Option<bool>,
    pub positivity_fallback: bool,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub t_final: Option<f64>,
    /// `None` keeps the problem's schedule.
    pub snapshots: Option<Vec<f64>>,
    /// `None` picks csv in 1-D and grid-binary in 2-D.
    pub format: Option<OutputFormat>,
    pub schlieren: bool,
    pub out: PathBuf,
    pub reference: bool,
}

impl RunConfig {
    pub fn new(problem: &str, scheme: Scheme) -> Self {
        Self {
            problem: ProblemSource::Catalog(problem.to_string()),
            scheme,
            cfl: 0.45,
            eps0: 1e-12,
            theta: 1.3,
            tau_interface: -0.5,
            tau_smooth: 0.5,
            hybrid: None,
            positivity_fallback: true,
            nx: None,
            ny: None,
            t_final: None,
            snapshots: None,
            format: None,
            schlieren: true,
            out: PathBuf::from("out"),
            reference: false,
        }
    }

    pub fn problem_name(&self) -> &str {
        match &self.problem {
            ProblemSource::Catalog(n) => n,
            ProblemSource::Inline(_) => "inline",
        }
    }

    /// The problem with every override applied.
    pub fn problem_spec(&self) -> Result<ProblemSpec> {
        let mut spec = match &self.problem {
            ProblemSource::Catalog(name) => build_problem(name)?,
            ProblemSource::Inline(p) => inline_spec(p)?,
        };
        if let Some(n) = self.nx {
            spec.nx = n;
        }
        if let Some(n) = self.ny {
            spec.ny = n;
        }
        if spec.dim == Dim::One {
            spec.ny = 1;
        }
        if let Some(t) = self.t_final {
            spec.t_final = t;
            spec.snapshots = vec![t];
        }
        if let Some(s) = &self.snapshots {
            spec.snapshots = s.clone();
        }
        if spec.snapshots.last() != Some(&spec.t_final) {
            spec.snapshots.push(spec.t_final);
        }
        if let Some(&bad) = spec.snapshots.iter().find(|&&t| !(0.0..=spec.t_final).contains(&t)) {
            return Err(config_err(0, format!("snapshot time {bad} outside [0, {}]", spec.t_final)));
        }
        if spec.snapshots.windows(2).any(|w| w[1] < w[0]) {
            return Err(config_err(0, "snapshot times must be nondecreasing"));
        }
        Ok(spec)
    }

    pub fn scheme_config(&self, spec: &ProblemSpec) -> SchemeConfig {
        let mut c = SchemeConfig::new(self.scheme, &spec.fluids);
        c.cfl = self.cfl;
        c.eps0 = self.eps0;
        c.limiters = LimiterPair {
            smooth: LimiterParams { theta: self.theta, tau: self.tau_smooth },
            interface: LimiterParams { theta: self.theta, tau: self.tau_interface },
        };
        c.hybrid = self.hybrid.unwrap_or(spec.hybrid_default);
        c.positivity_fallback = self.positivity_fallback;
        c.thresholds = spec.thresholds.clone();
        c
    }

    pub fn output_format(&self, dim: Dim) -> OutputFormat {
        self.format.unwrap_or(match dim {
            Dim::One => OutputFormat::Csv,
            Dim::Two => OutputFormat::GridBinary,
        })
    }

    /// Canonical text listing every field; parses back to an equal config.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        self.write_semantic(&mut s);
        let _ = writeln!(s, "out = {}", self.out.display());
        s
    }

    fn write_semantic(&self, s: &mut String) {
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        match &self.problem {
            ProblemSource::Catalog(n) => kv("problem", n.clone()),
            ProblemSource::Inline(p) => {
                kv("problem", "inline".into());
                kv("domain", format!("{:?}, {:?}", p.domain.0, p.domain.1));
                kv("split", format!("{:?}", p.split));
                kv("left", state_text(&p.left));
                kv("right", state_text(&p.right));
                kv("bc", p.bc.name().into());
            }
        }
        kv("scheme", self.scheme.name().into());
        kv("cfl", format!("{:?}", self.cfl));
        kv("eps0", format!("{:?}", self.eps0));
        kv("theta", format!("{:?}", self.theta));
        kv("tau_interface", format!("{:?}", self.tau_interface));
        kv("tau_smooth", format!("{:?}", self.tau_smooth));
        if let Some(h) = self.hybrid {
            kv("hybrid", h.to_string());
        }
        kv("positivity_fallback", self.positivity_fallback.to_string());
        if let Some(n) = self.nx {
            kv("nx", n.to_string());
        }
        if let Some(n) = self.ny {
            kv("ny", n.to_string());
        }
        if let Some(t) = self.t_final {
            kv("t_final", format!("{t:?}"));
        }
        if let Some(v) = &self.snapshots {
            kv("snapshots", v.iter().map(|t| format!("{t:?}")).collect::<Vec<_>>().join(", "));
        }
        if let Some(f) = self.format {
            kv("format", f.name().into());
        }
        kv("schlieren", self.schlieren.to_string());
        kv("reference", self.reference.to_string());
    }

    /// SHA-256 of the canonical text without the output directory.
    pub fn hash(&self) -> String {
        let mut s = String::new();
        self.write_semantic(&mut s);
        let digest = Sha256::digest(s.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Scheme and limiter settings must pass the solver's checks.
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(config_err(0, format!("cfl = {} outside (0, 1]", self.cfl)));
        }
        if self.nx == Some(0) || self.ny == Some(0) {
            return Err(config_err(0, "resolution must be positive"));
        }
        let spec = self.problem_spec()?;
        self.scheme_config(&spec).validate()
    }
}

fn state_text(s: &InlineState) -> String {
    format!("{:?}, {:?}, {:?}, {:?}, {:?}", s.rho, s.u, s.p, s.gamma, s.pi_inf)
}

fn inline_spec(p: &InlineProblem) -> Result<ProblemSpec> {
    let (fl, fr) = (p.left.fluid(), p.right.fluid());
    let prim = |s: &InlineState, f: FluidSpec| PrimitiveState::from_fluid(s.rho, s.u, 0.0, s.p, f);
    let (l, r) = (prim(&p.left, fl)?, prim(&p.right, fr)?);
    if !(p.domain.0 < p.split && p.split < p.domain.1) {
        return Err(config_err(0, "split must lie inside the domain"));
    }
    let fluids = if fl == fr { vec![fl] } else { vec![fl, fr] };
    Ok(ProblemSpec {
        name: "inline".into(),
        dim: Dim::One,
        x: p.domain,
        y: (0.0, 1.0),
        nx: 200,
        ny: 1,
        reference_nx: None,
        bc: Boundaries::all(p.bc),
        regions: vec![
            Region { shape: Shape::XBelow(p.split), state: RegionState::Uniform(l) },
            Region { shape: Shape::All, state: RegionState::Uniform(r) },
        ],
        thresholds: thresholds_from_fluids(&fluids),
        fluids,
        t_final: 0.1,
        snapshots: vec![0.1],
        hybrid_default: false,
    })
}

fn config_err(line: usize, message: impl Into<String>) -> Error {
    Error::Config { line, message: message.into() }
}

/// Splits a line into `(key, value)` pairs.
fn pairs(line: &str, no: usize) -> Result<Vec<(String, String)>> {
    let body = line.split('#').next().unwrap_or("").trim();
    if body.is_empty() {
        return Ok(Vec::new());
    }
    let split = |t: &str| -> Result<(String, String)> {
        let (k, v) = t.split_once('=').ok_or_else(|| config_err(no, format!("expected key = value, got `{t}`")))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(config_err(no, "empty key"));
        }
        Ok((k.to_string(), v.to_string()))
    };
    if body.matches('=').count() <= 1 {
        return Ok(vec![split(body)?]);
    }
    body.split_whitespace().map(split).collect()
}

fn num(v: &str, key: &str, no: usize) -> Result<f64> {
    v.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| config_err(no, format!("`{key}` expects a number, got `{v}`")))
}

fn count(v: &str, key: &str, no: usize) -> Result<usize> {
    v.parse::<usize>().map_err(|_| config_err(no, format!("`{key}` expects a positive integer, got `{v}`")))
}

fn flag(v: &str, key: &str, no: usize) -> Result<bool> {
    match v {
        "true" | "on" | "yes" => Ok(true),
        "false" | "off" | "no" => Ok(false),
        _ => Err(config_err(no, format!("`{key}` expects true or false, got `{v}`"))),
    }
}

fn list(v: &str, key: &str, no: usize) -> Result<Vec<f64>> {
    v.split(',').map(|t| num(t.trim(), key, no)).collect()
}

#[derive(Default)]
struct InlineParts {
    domain: Option<(f64, f64)>,
    split: Option<f64>,
    left: Option<InlineState>,
    right: Option<InlineState>,
    bc: Option<Boundary>,
    first_line: usize,
}

fn inline_state(v: &str, key: &str, no: usize) -> Result<InlineState> {
    match list(v, key, no)?[..] {
        [rho, u, p, gamma, pi_inf] => Ok(InlineState { rho, u, p, gamma, pi_inf }),
        _ => Err(config_err(no, format!("`{key}` expects rho, u, p, gamma, pi_inf"))),
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::new("", Scheme::LdPccu);
    let mut problem: Option<String> = None;
    let mut inline = InlineParts::default();
    let mut seen = std::collections::HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let no = i + 1;
        for (k, v) in pairs(line, no)? {
            if let Some(prev) = seen.insert(k.clone(), no) {
                return Err(config_err(no, format!("`{k}` already set on line {prev}")));
            }
            match k.as_str() {
                "problem" => problem = Some(v),
                "scheme" => {
                    cfg.scheme = Scheme::parse(&v)
                        .ok_or_else(|| config_err(no, format!("unknown scheme `{v}` (pccu, ldpccu, aiweno)")))?
                }
                "cfl" => {
                    cfg.cfl = num(&v, &k, no)?;
                    if !(cfg.cfl > 0.0 && cfg.cfl <= 1.0) {
                        return Err(config_err(no, format!("cfl = {v} outside (0, 1]")));
                    }
                }
                "eps0" => cfg.eps0 = num(&v, &k, no)?,
                "theta" => cfg.theta = num(&v, &k, no)?,
                "tau_interface" => cfg.tau_interface = num(&v, &k, no)?,
                "tau_smooth" => cfg.tau_smooth = num(&v, &k, no)?,
                "hybrid" => cfg.hybrid = Some(flag(&v, &k, no)?),
                "positivity_fallback" => cfg.positivity_fallback = flag(&v, &k, no)?,
                "nx" => cfg.nx = Some(count(&v, &k, no)?),
                "ny" => cfg.ny = Some(count(&v, &k, no)?),
                "t_final" => cfg.t_final = Some(num(&v, &k, no)?),
                "snapshots" => cfg.snapshots = Some(list(&v, &k, no)?),
                "format" => {
                    cfg.format = Some(
                        OutputFormat::parse(&v)
                            .ok_or_else(|| config_err(no, format!("unknown format `{v}` (csv, grid-binary)")))?,
                    )
                }
                "schlieren" => cfg.schlieren = flag(&v, &k, no)?,
                "reference" => cfg.reference = flag(&v, &k, no)?,
                "out" => cfg.out = PathBuf::from(v),
                "domain" | "split" | "left" | "right" | "bc" => {
                    if inline.first_line == 0 {
                        inline.first_line = no;
                    }
                    match k.as_str() {
                        "domain" => match list(&v, &k, no)?[..] {
                            [a, b] => inline.domain = Some((a, b)),
                            _ => return Err(config_err(no, "`domain` expects two numbers")),
                        },
                        "split" => inline.split = Some(num(&v, &k, no)?),
                        "left" => inline.left = Some(inline_state(&v, &k, no)?),
                        "right" => inline.right = Some(inline_state(&v, &k, no)?),
                        _ => {
                            inline.bc = Some(
                                Boundary::parse(&v)
                                    .ok_or_else(|| config_err(no, format!("unknown boundary `{v}`")))?,
                            )
                        }
                    }
                }
                _ => return Err(config_err(no, format!("unknown key `{k}`"))),
            }
        }
    }
    let problem = problem.ok_or_else(|| config_err(0, "missing required key `problem`"))?;
    cfg.problem = if problem == "inline" {
        let missing = |what: &str| config_err(inline.first_line, format!("inline problem needs `{what}`"));
        ProblemSource::Inline(InlineProblem {
            domain: inline.domain.ok_or_else(|| missing("domain"))?,
            split: inline.split.ok_or_else(|| missing("split"))?,
            left: inline.left.ok_or_else(|| missing("left"))?,
            right: inline.right.ok_or_else(|| missing("right"))?,
            bc: inline.bc.unwrap_or(Boundary::Free),
        })
    } else {
        if inline.first_line != 0 {
            return Err(config_err(inline.first_line, "inline problem keys need `problem = inline`"));
        }
        ProblemSource::Catalog(problem)
    };
    Ok(cfg)
}
