//! Fifth-order layer: affine-invariant WENO-Z interpolation of point values
//! in local characteristic variables, and the high-order flux corrections
//! of the A-WENO framework.

use crate::recon::widen_pairs;
use crate::state::{Vars, GAM, NVAR, PI, PRES, RHO, VX, VY};

/// Linear weights of the three parabolic candidates.
pub const LINEAR_WEIGHTS: [f64; 3] = [1.0 / 16.0, 5.0 / 8.0, 5.0 / 16.0];
const EPS: f64 = 1e-12;
const MU_FLOOR: f64 = 1e-40;

/// Diagnostic view of one interpolation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WenoWorkspace {
    pub beta: [f64; 3],
    pub tau5: f64,
    pub mu: f64,
    pub omega: [f64; 3],
}

/// Smoothness indicators, global indicator, scale and nonlinear weights for
/// the five values `W_{j−2..j+2}`.
pub fn ai_weights(w: &[f64; 5]) -> WenoWorkspace {
    let (beta, tau5, mu, alpha) = unnormalized(w);
    let sum = alpha[0] + alpha[1] + alpha[2];
    WenoWorkspace {
        beta,
        tau5,
        mu,
        omega: [alpha[0] / sum, alpha[1] / sum, alpha[2] / sum],
    }
}

/// `(β, τ₅, μ, α)` before normalisation.
#[inline(always)]
fn unnormalized(w: &[f64; 5]) -> ([f64; 3], f64, f64, [f64; 3]) {
    let (beta, mu) = smoothness(w);
    let tau5 = (beta[2] - beta[0]).abs();
    let floor = EPS * mu * mu;
    let alpha: [f64; 3] = std::array::from_fn(|k| {
        let ratio = tau5 / (beta[k] + floor);
        LINEAR_WEIGHTS[k] * (1.0 + ratio * ratio)
    });
    (beta, tau5, mu, alpha)
}

/// Smoothness indicators and the affine scale `μ`.
#[inline(always)]
fn smoothness(w: &[f64; 5]) -> ([f64; 3], f64) {
    let [a, b, c, d, e] = *w;
    let s0 = a - 2.0 * b + c;
    let s1 = b - 2.0 * c + d;
    let s2 = c - 2.0 * d + e;
    // First-derivative terms in difference form so constant data gives
    // exact zeros.
    let t0 = (a - b) - 3.0 * (b - c);
    let t1 = b - d;
    let t2 = (e - d) - 3.0 * (d - c);
    let beta = [
        13.0 / 12.0 * s0 * s0 + 0.25 * t0 * t0,
        13.0 / 12.0 * s1 * s1 + 0.25 * t1 * t1,
        13.0 / 12.0 * s2 * s2 + 0.25 * t2 * t2,
    ];
    let mean = (a + b + c + d + e) / 5.0;
    let mu = ((a - mean).abs() + (b - mean).abs() + (c - mean).abs() + (d - mean).abs() + (e - mean).abs())
        / 5.0
        + MU_FLOOR;
    (beta, mu)
}

/// Left-sided value `W⁻` at `x_{j+1/2}` from the window `W_{j−2..j+3}` (the
/// last entry is not used on this side).
#[inline]
pub fn aiweno_interpolate(window: &[f64; 6]) -> f64 {
    interpolate5(&[window[0], window[1], window[2], window[3], window[4]])
}

/// Right-sided value `W⁺` at `x_{j+1/2}`: the same formulas on the mirrored
/// window `W_{j+3}, W_{j+2}, …, W_{j−1}`.
#[inline]
pub fn aiweno_interpolate_plus(window: &[f64; 6]) -> f64 {
    interpolate5(&[window[5], window[4], window[3], window[2], window[1]])
}

/// Candidate values are written as corrections to the centre value so that
/// a constant window is reproduced exactly (all differences vanish and the
/// weights stay finite thanks to the floor on μ).
#[inline(always)]
fn interpolate5(w: &[f64; 5]) -> f64 {
    let c = w[2];
    let (dm2, dm1, dp1, dp2) = (w[0] - c, w[1] - c, w[3] - c, w[4] - c);
    let p0 = (3.0 * dm2 - 10.0 * dm1) / 8.0;
    let p1 = (3.0 * dp1 - dm1) / 8.0;
    let p2 = (6.0 * dp1 - dp2) / 8.0;
    let (_, _, _, al) = unnormalized(w);
    c + (al[0] * p0 + al[1] * p1 + al[2] * p2) / (al[0] + al[1] + al[2])
}

/// Frozen eigenbasis at an interface, from √ρ-weighted averages of the two
/// neighbouring states. `un` is the velocity normal to the interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LcdBasis {
    pub rho: f64,
    pub un: f64,
    pub ut: f64,
    pub p: f64,
    pub gamma: f64,
    pub pi_inf: f64,
    pub c: f64,
}

/// Basis for an x-layout pair of primitive states; `None` if the averaged
/// sound speed is not real.
pub fn lcd_basis(vl: &Vars, vr: &Vars) -> Option<LcdBasis> {
    let (sl, sr) = (vl[RHO].sqrt(), vr[RHO].sqrt());
    let inv = 1.0 / (sl + sr);
    let avg = |a: f64, b: f64| (sl * a + sr * b) * inv;
    let gamma_of = |v: &Vars| 1.0 + 1.0 / v[GAM];
    let pinf_of = |v: &Vars| v[PI] / (1.0 + v[GAM]);
    let rho = sl * sr;
    let p = avg(vl[PRES], vr[PRES]);
    let gamma = avg(gamma_of(vl), gamma_of(vr));
    let pi_inf = avg(pinf_of(vl), pinf_of(vr));
    let c2 = gamma * (p + pi_inf) / rho;
    if !(c2 > 0.0 && c2.is_finite()) {
        return None;
    }
    Some(LcdBasis {
        rho,
        un: avg(vl[VX], vr[VX]),
        ut: avg(vl[VY], vr[VY]),
        p,
        gamma,
        pi_inf,
        c: c2.sqrt(),
    })
}

pub fn lcd_basis_1d(vl: &Vars, vr: &Vars) -> Option<LcdBasis> {
    lcd_basis(vl, vr)
}

pub fn lcd_basis_2d_x(vl: &Vars, vr: &Vars) -> Option<LcdBasis> {
    lcd_basis(vl, vr)
}

/// y-family basis for states in the natural `(ρ, u, v, p, Γ, Π)` layout.
pub fn lcd_basis_2d_y(vl: &Vars, vr: &Vars) -> Option<LcdBasis> {
    lcd_basis(&crate::ldflux::swap(vl), &crate::ldflux::swap(vr))
}

impl LcdBasis {
    /// Characteristic variables of an x-layout primitive vector, stored as
    /// `(left acoustic, entropy, transverse velocity, right acoustic, Γ, Π)`.
    #[inline]
    pub fn to_char(&self, v: &Vars) -> Vars {
        let k = 0.5 * self.rho * self.c;
        let half_p = 0.5 * v[PRES];
        [
            half_p - k * v[VX],
            v[RHO] - v[PRES] / (self.c * self.c),
            v[VY],
            half_p + k * v[VX],
            v[GAM],
            v[PI],
        ]
    }

    /// Inverse of [`LcdBasis::to_char`].
    #[inline]
    pub fn from_char(&self, w: &Vars) -> Vars {
        let p = w[0] + w[3];
        [
            w[1] + p / (self.c * self.c),
            (w[3] - w[0]) / (self.rho * self.c),
            w[2],
            p,
            w[4],
            w[5],
        ]
    }

    /// Right eigenvectors for `(ρ, u, p, Γ, Π)`.
    pub fn r_matrix_1d(&self) -> [[f64; 5]; 5] {
        let (c, r) = (self.c, self.rho);
        let ic2 = 1.0 / (c * c);
        [
            [ic2, 0.0, 0.0, 1.0, ic2],
            [-1.0 / (r * c), 0.0, 0.0, 0.0, 1.0 / (r * c)],
            [1.0, 0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0, 0.0],
        ]
    }

    pub fn r_inv_matrix_1d(&self) -> [[f64; 5]; 5] {
        let (c, r) = (self.c, self.rho);
        [
            [0.0, -0.5 * r * c, 0.5, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 0.0, 1.0, 0.0],
            [1.0, 0.0, -1.0 / (c * c), 0.0, 0.0],
            [0.0, 0.5 * r * c, 0.5, 0.0, 0.0],
        ]
    }

    /// Right eigenvectors for the x-family, `(ρ, u, v, p, Γ, Π)`.
    pub fn r_matrix_2d(&self) -> [[f64; 6]; 6] {
        let (c, r) = (self.c, self.rho);
        let ic2 = 1.0 / (c * c);
        [
            [ic2, 0.0, 0.0, 0.0, 1.0, ic2],
            [-1.0 / (r * c), 0.0, 0.0, 0.0, 0.0, 1.0 / (r * c)],
            [0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0, 0.0, 0.0],
        ]
    }

    pub fn r_inv_matrix_2d(&self) -> [[f64; 6]; 6] {
        let (c, r) = (self.c, self.rho);
        [
            [0.0, -0.5 * r * c, 0.0, 0.5, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, -1.0 / (c * c), 0.0, 0.0],
            [0.0, 0.5 * r * c, 0.0, 0.5, 0.0, 0.0],
        ]
    }

    /// y-family matrices in the natural layout: the x-family ones with the
    /// `u` and `v` rows/columns exchanged.
    pub fn r_matrix_2d_y(&self) -> [[f64; 6]; 6] {
        permute_rows(&self.r_matrix_2d())
    }

    pub fn r_inv_matrix_2d_y(&self) -> [[f64; 6]; 6] {
        permute_cols(&self.r_inv_matrix_2d())
    }
}

fn permute_rows(m: &[[f64; 6]; 6]) -> [[f64; 6]; 6] {
    let mut out = *m;
    out.swap(1, 2);
    out
}

fn permute_cols(m: &[[f64; 6]; 6]) -> [[f64; 6]; 6] {
    let mut out = *m;
    for row in out.iter_mut() {
        row.swap(1, 2);
    }
    out
}

/// Componentwise interpolation of a primitive window (no characteristic
/// transform).
#[inline]
pub fn componentwise_interface_values(window: &[Vars; 6]) -> (Vars, Vars) {
    let mut vm = [0.0; NVAR];
    let mut vp = [0.0; NVAR];
    for c in 0..NVAR {
        let w: [f64; 6] = std::array::from_fn(|l| window[l][c]);
        vm[c] = aiweno_interpolate(&w);
        vp[c] = aiweno_interpolate_plus(&w);
    }
    (vm, vp)
}

/// `(V⁻, V⁺)` at `x_{j+1/2}` from the primitive window `V_{j−2..j+3}` via the
/// local characteristic decomposition at that interface.
#[inline]
pub fn characteristic_interface_values(window: &[Vars; 6]) -> Option<(Vars, Vars)> {
    let basis = lcd_basis(&window[2], &window[3])?;
    let w: [Vars; 6] = std::array::from_fn(|l| basis.to_char(&window[l]));
    let (wm, wp) = componentwise_interface_values(&w);
    Some((basis.from_char(&wm), basis.from_char(&wp)))
}

/// `(h²K_xx, h⁴K_xxxx)` from five consecutive interface fluxes centred on
/// the target interface. Differences are taken against the centre value and
/// summed in mirror pairs.
#[inline]
pub fn scaled_corrections(k: &[f64; 5]) -> (f64, f64) {
    let c = k[2];
    let near = (k[1] - c) + (k[3] - c);
    let far = (k[0] - c) + (k[4] - c);
    ((16.0 * near - far) / 12.0, far - 4.0 * near)
}

/// `(K_xx, K_xxxx)` at the centre interface.
pub fn ho_corrections(k: &[f64; 5], h: f64) -> (f64, f64) {
    let (d2, d4) = scaled_corrections(k);
    (d2 / (h * h), d4 / (h * h * h * h))
}

/// Fifth-order flux `H = 𝒦 − (h²/24)K_xx + (7h⁴/5760)K_xxxx`.
#[inline]
pub fn aweno_flux(k: &[f64; 5]) -> f64 {
    let (d2, d4) = scaled_corrections(k);
    k[2] - d2 / 24.0 + 7.0 * d4 / 5760.0
}

/// Cells handled by the second-order fallback of the hybrid scheme: four
/// cells on each side of every detected interface pair.
pub fn hybrid_tags(pairs: &[bool], ncells: usize) -> Vec<bool> {
    widen_pairs(pairs, ncells, 3)
}
