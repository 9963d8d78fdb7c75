//! Piecewise-linear reconstruction of primitive variables.
//!
//! Near material interfaces the slopes come from the overcompressive SBM
//! limiter, elsewhere from the dissipative (generalized minmod) member of the
//! same family. Interfaces are located by the sign change of `Γ − Γ̂` across
//! a pair of neighbouring cells, one threshold `Γ̂` per pair of fluids.

use crate::state::{prim_is_valid, FluidSpec, Vars, NVAR};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimiterParams {
    pub theta: f64,
    pub tau: f64,
}

impl LimiterParams {
    pub const DISSIPATIVE: Self = Self {
        theta: 1.3,
        tau: 0.5,
    };
    pub const OVERCOMPRESSIVE: Self = Self {
        theta: 1.3,
        tau: -0.5,
    };

    pub fn is_valid(&self) -> bool {
        (1.0..=2.0).contains(&self.theta) && (-1.0..=1.0).contains(&self.tau)
    }
}

/// Limiters used away from and near material interfaces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimiterPair {
    pub smooth: LimiterParams,
    pub interface: LimiterParams,
}

impl Default for LimiterPair {
    fn default() -> Self {
        Self {
            smooth: LimiterParams::DISSIPATIVE,
            interface: LimiterParams::OVERCOMPRESSIVE,
        }
    }
}

/// Smallest magnitude if all arguments share a strict sign, zero otherwise.
pub fn minmod(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "minmod of an empty list");
    if values.iter().all(|&v| v > 0.0) {
        values.iter().copied().fold(f64::INFINITY, f64::min)
    } else if values.iter().all(|&v| v < 0.0) {
        values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    } else {
        0.0
    }
}

#[inline]
pub fn minmod2(a: f64, b: f64) -> f64 {
    if a > 0.0 && b > 0.0 {
        a.min(b)
    } else if a < 0.0 && b < 0.0 {
        a.max(b)
    } else {
        0.0
    }
}

/// The two-parameter SBM limiter function of the ratio of consecutive
/// differences. `r = ±∞` is taken as the one-sided limit.
pub fn sbm_phi(r: f64, p: LimiterParams) -> f64 {
    if !(r > 0.0) {
        return 0.0;
    }
    if r <= 1.0 {
        (r * p.theta).min(1.0 + p.tau * (r - 1.0))
    } else if r.is_infinite() {
        // r·φ(1/r) with 1/r → 0: r·min(θ/r, 1 − τ + τ/r) → θ.
        p.theta
    } else {
        r * sbm_phi(1.0 / r, p)
    }
}

/// Limited slope times `h` from the backward and forward differences.
///
/// Equals `φ(dp/dm)·dm`; the symmetric form needs no division, so zero
/// differences need no special casing.
#[inline]
pub fn limited_difference(dm: f64, dp: f64, p: LimiterParams) -> f64 {
    if !(dm * dp > 0.0) {
        return 0.0;
    }
    let (a, b) = (dm.abs(), dp.abs());
    let (small, large) = if a < b { (a, b) } else { (b, a) };
    let mag = (p.theta * small).min(large + p.tau * (small - large));
    mag.max(0.0).copysign(dm)
}

/// Thresholds `Γ̂` for consecutive fluids in `Γ` order.
pub fn thresholds_from_fluids(fluids: &[FluidSpec]) -> Vec<f64> {
    let mut g: Vec<f64> = fluids
        .iter()
        .filter_map(|f| f.gamma_pi().ok().map(|(g, _)| g))
        .collect();
    g.sort_by(f64::total_cmp);
    g.dedup();
    g.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
}

/// Thresholds for explicitly listed fluid pairs (indices into `fluids`).
pub fn thresholds_from_pairs(fluids: &[FluidSpec], pairs: &[(usize, usize)]) -> Vec<f64> {
    pairs
        .iter()
        .filter_map(|&(a, b)| {
            let ga = fluids.get(a)?.gamma_pi().ok()?.0;
            let gb = fluids.get(b)?.gamma_pi().ok()?.0;
            Some(0.5 * (ga + gb))
        })
        .collect()
}

/// `out[p]` is set when cells `p` and `p + 1` straddle some threshold.
pub fn detect_pairs(gamma: &[f64], thresholds: &[f64]) -> Vec<bool> {
    let mut out = vec![false; gamma.len().saturating_sub(1)];
    detect_pairs_into(gamma, thresholds, &mut out);
    out
}

pub(crate) fn detect_pairs_into(gamma: &[f64], thresholds: &[f64], out: &mut [bool]) {
    for (p, w) in gamma.windows(2).enumerate() {
        out[p] = thresholds
            .iter()
            .any(|&t| (w[0] - t) * (w[1] - t) < 0.0);
    }
}

/// Flags cells `p − reach ..= p + 1 + reach` around every detected pair `p`;
/// overlapping neighbourhoods are merged.
pub fn widen_pairs(pairs: &[bool], ncells: usize, reach: usize) -> Vec<bool> {
    let mut mask = vec![false; ncells];
    widen_pairs_into(pairs, reach, &mut mask);
    mask
}

pub(crate) fn widen_pairs_into(pairs: &[bool], reach: usize, mask: &mut [bool]) {
    mask.fill(false);
    let n = mask.len();
    for (p, _) in pairs.iter().enumerate().filter(|(_, &d)| d) {
        let lo = p.saturating_sub(reach);
        let hi = (p + 1 + reach).min(n - 1);
        mask[lo..=hi].fill(true);
    }
}

/// Cells where the overcompressive limiter applies along one line.
pub fn detect_interfaces(gamma: &[f64], thresholds: &[f64]) -> Vec<bool> {
    widen_pairs(&detect_pairs(gamma, thresholds), gamma.len(), 1)
}

/// Per-cell masks for both sweep directions of a 2-D field given as
/// interior `Γ` values with the x index fastest. Returns `(x_mask, y_mask)`.
pub fn detect_interfaces_2d(
    gamma: &[f64],
    nx: usize,
    ny: usize,
    thresholds: &[f64],
) -> (Vec<bool>, Vec<bool>) {
    assert_eq!(gamma.len(), nx * ny);
    let mut xm = vec![false; nx * ny];
    for j in 0..ny {
        let row = &gamma[j * nx..(j + 1) * nx];
        xm[j * nx..(j + 1) * nx].copy_from_slice(&detect_interfaces(row, thresholds));
    }
    let mut ym = vec![false; nx * ny];
    let mut col = vec![0.0; ny];
    for i in 0..nx {
        for (j, c) in col.iter_mut().enumerate() {
            *c = gamma[j * nx + i];
        }
        for (j, f) in detect_interfaces(&col, thresholds).into_iter().enumerate() {
            ym[j * nx + i] = f;
        }
    }
    (xm, ym)
}

/// Limited slopes `(V_x)_j` of a line of cell averages. End cells have no
/// two-sided stencil and get zero slope.
pub fn slopes(vbar: &[Vars], mask: &[bool], h: f64, limiters: LimiterPair) -> Vec<Vars> {
    let n = vbar.len();
    let mut out = vec![[0.0; NVAR]; n];
    for j in 1..n.saturating_sub(1) {
        let p = if mask[j] {
            limiters.interface
        } else {
            limiters.smooth
        };
        for c in 0..NVAR {
            let dm = vbar[j][c] - vbar[j - 1][c];
            let dp = vbar[j + 1][c] - vbar[j][c];
            out[j][c] = limited_difference(dm, dp, p) / h;
        }
    }
    out
}

/// One-sided values at the `n − 1` interior interfaces of a line:
/// `(V⁻, V⁺)` with `V⁻` from the left cell and `V⁺` from the right cell.
pub fn interface_values(vbar: &[Vars], slopes: &[Vars], h: f64) -> (Vec<Vars>, Vec<Vars>) {
    let m = vbar.len().saturating_sub(1);
    let mut minus = Vec::with_capacity(m);
    let mut plus = Vec::with_capacity(m);
    for j in 0..m {
        minus.push(std::array::from_fn(|c| vbar[j][c] + 0.5 * h * slopes[j][c]));
        plus.push(std::array::from_fn(|c| vbar[j + 1][c] - 0.5 * h * slopes[j + 1][c]));
    }
    (minus, plus)
}

/// West and east edge values of the middle cell of a three-cell stencil.
///
/// If either edge state is not admissible the slope is scaled by 1/2, then
/// 1/4, then dropped.
#[inline]
pub(crate) fn cell_edges(vm: &Vars, v0: &Vars, vp: &Vars, p: LimiterParams) -> (Vars, Vars) {
    let mut d = [0.0; NVAR];
    for c in 0..NVAR {
        d[c] = 0.5 * limited_difference(v0[c] - vm[c], vp[c] - v0[c], p);
    }
    for scale in [1.0, 0.5, 0.25] {
        let west: Vars = std::array::from_fn(|c| v0[c] - scale * d[c]);
        let east: Vars = std::array::from_fn(|c| v0[c] + scale * d[c]);
        if prim_is_valid(&west) && prim_is_valid(&east) {
            return (west, east);
        }
    }
    (*v0, *v0)
}
