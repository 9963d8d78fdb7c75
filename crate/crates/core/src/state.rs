//! Stiffened-gas equation of state and the conserved/primitive state vectors.
//!
//! Every state is stored as a fixed six-slot vector. In one space dimension
//! the transverse slot (`mom_y` / `v`) is identically zero, so the same flux
//! and reconstruction kernels serve both dimensions.

use crate::error::{Error, Result};

/// Number of slots in a state vector.
pub const NVAR: usize = 6;

/// Slot indices. Conserved vectors hold `(ρ, ρu, ρv, E, Γ, Π)`, primitive
/// vectors hold `(ρ, u, v, p, Γ, Π)`; the slot numbers coincide.
pub const RHO: usize = 0;
pub const MX: usize = 1;
pub const MY: usize = 2;
pub const EN: usize = 3;
pub const GAM: usize = 4;
pub const PI: usize = 5;
/// Primitive aliases.
pub const VX: usize = MX;
pub const VY: usize = MY;
pub const PRES: usize = EN;

/// Raw state vector used by the kernels.
pub type Vars = [f64; NVAR];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidSpec {
    /// Specific heat ratio γ.
    pub gamma: f64,
    /// Stiffness parameter π∞.
    pub pi_inf: f64,
}

impl FluidSpec {
    pub const fn new(gamma: f64, pi_inf: f64) -> Self {
        Self { gamma, pi_inf }
    }

    pub fn validate(&self) -> Result<()> {
        if self.gamma > 1.0 && self.pi_inf >= 0.0 && self.gamma.is_finite() && self.pi_inf.is_finite()
        {
            Ok(())
        } else {
            Err(Error::InvalidFluid {
                gamma: self.gamma,
                pi_inf: self.pi_inf,
            })
        }
    }

    /// `(Γ, Π)` advected in place of `(γ, π∞)`.
    pub fn gamma_pi(&self) -> Result<(f64, f64)> {
        gamma_pi_from_eos(*self)
    }
}

/// Γ = 1/(γ−1) and Π = γπ∞/(γ−1).
pub fn gamma_pi_from_eos(spec: FluidSpec) -> Result<(f64, f64)> {
    spec.validate()?;
    let gm1 = spec.gamma - 1.0;
    Ok((1.0 / gm1, spec.gamma * spec.pi_inf / gm1))
}

/// Inverse map: γ = 1 + 1/Γ and π∞ = Π/(1+Γ).
#[inline]
pub fn eos_from_gamma_pi(big_gamma: f64, big_pi: f64) -> (f64, f64) {
    (1.0 + 1.0 / big_gamma, big_pi / (1.0 + big_gamma))
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConservedState {
    pub rho: f64,
    pub mom_x: f64,
    /// Zero in one space dimension.
    pub mom_y: f64,
    pub energy: f64,
    pub big_gamma: f64,
    pub big_pi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PrimitiveState {
    pub rho: f64,
    pub u: f64,
    /// Zero in one space dimension.
    pub v: f64,
    pub p: f64,
    pub big_gamma: f64,
    pub big_pi: f64,
}

impl ConservedState {
    pub fn to_array(self) -> Vars {
        [self.rho, self.mom_x, self.mom_y, self.energy, self.big_gamma, self.big_pi]
    }

    pub fn from_array(a: Vars) -> Self {
        Self {
            rho: a[RHO],
            mom_x: a[MX],
            mom_y: a[MY],
            energy: a[EN],
            big_gamma: a[GAM],
            big_pi: a[PI],
        }
    }
}

impl PrimitiveState {
    /// Primitive state of a single fluid at rest-frame values.
    pub fn from_fluid(rho: f64, u: f64, v: f64, p: f64, fluid: FluidSpec) -> Result<Self> {
        let (big_gamma, big_pi) = fluid.gamma_pi()?;
        Ok(Self {
            rho,
            u,
            v,
            p,
            big_gamma,
            big_pi,
        })
    }

    pub fn to_array(self) -> Vars {
        [self.rho, self.u, self.v, self.p, self.big_gamma, self.big_pi]
    }

    pub fn from_array(a: Vars) -> Self {
        Self {
            rho: a[RHO],
            u: a[VX],
            v: a[VY],
            p: a[PRES],
            big_gamma: a[GAM],
            big_pi: a[PI],
        }
    }
}

/// `u = ρu/ρ`, `v = ρv/ρ`, `p = [E − ((ρu)²+(ρv)²)/(2ρ) − Π]/Γ`.
pub fn primitive_from_conserved(u: ConservedState) -> Result<PrimitiveState> {
    cons_to_prim(&u.to_array())
        .map(PrimitiveState::from_array)
        .map_err(|reason| Error::InvalidState {
            cell: (0, 0),
            reason,
        })
}

/// `E = Γp + ρ(u²+v²)/2 + Π`.
pub fn conserved_from_primitive(v: PrimitiveState) -> ConservedState {
    ConservedState::from_array(prim_to_cons(&v.to_array()))
}

/// `c = sqrt([(1+Γ)p + Π]/(Γρ))`.
pub fn sound_speed(v: PrimitiveState) -> Result<f64> {
    let radicand = sound_speed_sq(&v.to_array());
    if v.rho > 0.0 && v.big_gamma > 0.0 && radicand > 0.0 {
        Ok(radicand.sqrt())
    } else {
        Err(Error::InvalidState {
            cell: (0, 0),
            reason: "nonpositive sound-speed radicand",
        })
    }
}

#[inline]
pub(crate) fn sound_speed_sq(v: &Vars) -> f64 {
    ((1.0 + v[GAM]) * v[PRES] + v[PI]) / (v[GAM] * v[RHO])
}

#[inline]
pub(crate) fn prim_to_cons(v: &Vars) -> Vars {
    let rho = v[RHO];
    let kinetic = 0.5 * rho * (v[VX] * v[VX] + v[VY] * v[VY]);
    [
        rho,
        rho * v[VX],
        rho * v[VY],
        v[GAM] * v[PRES] + kinetic + v[PI],
        v[GAM],
        v[PI],
    ]
}

#[inline]
pub(crate) fn pressure_of(u: &Vars) -> f64 {
    (u[EN] - (u[MX] * u[MX] + u[MY] * u[MY]) / (2.0 * u[RHO]) - u[PI]) / u[GAM]
}

/// Conserved → primitive; the error string names the violated condition.
#[inline]
pub(crate) fn cons_to_prim(u: &Vars) -> std::result::Result<Vars, &'static str> {
    let rho = u[RHO];
    if !(rho > 0.0) {
        return Err("nonpositive density");
    }
    if !(u[GAM] > 0.0) {
        return Err("nonpositive Gamma");
    }
    let p = pressure_of(u);
    let v = [rho, u[MX] / rho, u[MY] / rho, p, u[GAM], u[PI]];
    if !((1.0 + v[GAM]) * p + v[PI] > 0.0) {
        return Err("pressure below the stiffened-gas limit");
    }
    Ok(v)
}

/// Checks `ρ > 0`, `Γ > 0` and `(1+Γ)p + Π > 0` on a primitive vector.
#[inline]
pub(crate) fn prim_is_valid(v: &Vars) -> bool {
    v[RHO] > 0.0 && v[GAM] > 0.0 && (1.0 + v[GAM]) * v[PRES] + v[PI] > 0.0
}
