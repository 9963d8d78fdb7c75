//! Interface fluxes along one padded grid line.
//!
//! Every direction is handled in the x layout; y-lines arrive with the two
//! momentum slots exchanged.

use crate::aweno::{aweno_flux, characteristic_interface_values, componentwise_interface_values};
use crate::globalflux::{flux_x, globalize_by_increments, local_speeds};
use crate::grid::Dim;
use crate::integrator::Scheme;
use crate::ldflux::{interface_flux, AntiDiffusion, InterfaceFluxInput};
use crate::recon::{cell_edges, detect_pairs_into, widen_pairs_into, LimiterPair};
use crate::state::{cons_to_prim, prim_is_valid, prim_to_cons, Vars, GAM, NVAR};

/// Per-line settings borrowed from the scheme configuration.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LineParams<'a> {
    pub scheme: Scheme,
    pub dim: Dim,
    pub limiters: LimiterPair,
    pub eps0: f64,
    pub hybrid: bool,
    pub thresholds: &'a [f64],
}

/// Buffers reused between lines handled by the same worker.
#[derive(Debug, Default, Clone)]
pub(crate) struct LineScratch {
    prim: Vec<Vars>,
    gamma: Vec<f64>,
    pairs: Vec<bool>,
    mask: Vec<bool>,
    tags: Vec<bool>,
    vm: Vec<Vars>,
    vp: Vec<Vars>,
    um: Vec<Vars>,
    up: Vec<Vars>,
    km: Vec<Vars>,
    kp: Vec<Vars>,
    am: Vec<f64>,
    ap: Vec<f64>,
    flux: Vec<Vars>,
}

/// Failure inside a line: padded cell index and reason.
pub(crate) type LineError = (usize, &'static str);

/// Fills `out` (length `n + 1`) with the numerical fluxes at the interfaces
/// bounding the `n` interior cells of `line`, which carries `g` ghost cells
/// on each side. Returns the largest one-sided speed at those interfaces.
/// `forced` (empty or one flag per cell of `line`) marks cells that must use
/// the second-order path regardless of interface detection.
pub(crate) fn line_fluxes(
    line: &[Vars],
    forced: &[bool],
    g: usize,
    p: &LineParams,
    s: &mut LineScratch,
    out: &mut [Vars],
) -> Result<f64, LineError> {
    let len = line.len();
    let n = len - 2 * g;
    debug_assert_eq!(out.len(), n + 1);

    s.prim.clear();
    for (k, u) in line.iter().enumerate() {
        s.prim.push(cons_to_prim(u).map_err(|r| (k, r))?);
        if !u.iter().all(|x| x.is_finite()) {
            return Err((k, "non-finite value"));
        }
    }
    s.gamma.clear();
    s.gamma.extend(s.prim.iter().map(|v| v[GAM]));
    s.pairs.resize(len - 1, false);
    detect_pairs_into(&s.gamma, p.thresholds, &mut s.pairs);
    s.mask.resize(len, false);
    widen_pairs_into(&s.pairs, 1, &mut s.mask);

    let fifth = p.scheme == Scheme::AiWeno;
    // Interfaces computed: the n + 1 real ones, plus two on each side for
    // the high-order correction stencil.
    let (first_left, m) = if fifth { (g - 3, n + 5) } else { (g - 1, n + 1) };
    let use_tags = fifth && (p.hybrid || !forced.is_empty());
    if use_tags {
        s.tags.resize(len, false);
        if p.hybrid {
            widen_pairs_into(&s.pairs, 3, &mut s.tags);
        } else {
            s.tags.fill(false);
        }
        for (t, &f) in s.tags.iter_mut().zip(forced) {
            *t |= f;
        }
    }

    for v in [&mut s.vm, &mut s.vp, &mut s.um, &mut s.up, &mut s.km, &mut s.kp] {
        v.resize(m, [0.0; NVAR]);
    }
    s.am.resize(m, 0.0);
    s.ap.resize(m, 0.0);
    for k in 0..m {
        let l = first_left + k;
        let r = l + 1;
        let (vm, vp) = if fifth && !(use_tags && (s.tags[l] || s.tags[r])) {
            fifth_order_values(&s.prim, l)
                .unwrap_or_else(|| second_order_values(&s.prim, &s.mask, l, p.limiters))
        } else {
            second_order_values(&s.prim, &s.mask, l, p.limiters)
        };
        let (um, up) = (prim_to_cons(&vm), prim_to_cons(&vp));
        s.km[k] = flux_x(&um, &vm);
        s.kp[k] = flux_x(&up, &vp);
        (s.am[k], s.ap[k]) = local_speeds(&vm, &vp);
        (s.vm[k], s.vp[k], s.um[k], s.up[k]) = (vm, vp, um, up);
    }
    globalize_by_increments(&s.vm, &s.vp, &mut s.km, &mut s.kp);

    let anti = match p.scheme {
        Scheme::Pccu => AntiDiffusion::Minmod,
        Scheme::LdPccu | Scheme::AiWeno => AntiDiffusion::LowDissipation,
    };
    s.flux.resize(m, [0.0; NVAR]);
    for k in 0..m {
        // Equal one-sided states: the flux is the physical one.
        if s.vm[k] == s.vp[k] && s.km[k] == s.kp[k] {
            s.flux[k] = s.km[k];
            continue;
        }
        let input = InterfaceFluxInput {
            um: s.um[k],
            up: s.up[k],
            vm: s.vm[k],
            vp: s.vp[k],
            km: s.km[k],
            kp: s.kp[k],
            am: s.am[k],
            ap: s.ap[k],
        };
        s.flux[k] = interface_flux(&input, anti, p.dim, p.eps0);
    }

    let shift = if fifth { 2 } else { 0 };
    let mut speed = 0.0f64;
    for (k, o) in out.iter_mut().enumerate() {
        let kk = k + shift;
        speed = speed.max(s.ap[kk]).max(-s.am[kk]);
        let tagged = use_tags && {
            let l = first_left + kk;
            s.tags[l] || s.tags[l + 1]
        };
        *o = if !fifth || tagged {
            s.flux[kk]
        } else {
            std::array::from_fn(|c| {
                aweno_flux(&[
                    s.flux[kk - 2][c],
                    s.flux[kk - 1][c],
                    s.flux[kk][c],
                    s.flux[kk + 1][c],
                    s.flux[kk + 2][c],
                ])
            })
        };
    }
    Ok(speed)
}

/// `(V⁻, V⁺)` at the interface right of cell `l` from the limited linear
/// pieces of cells `l` and `l + 1`.
#[inline]
fn second_order_values(prim: &[Vars], mask: &[bool], l: usize, lim: LimiterPair) -> (Vars, Vars) {
    let pick = |c: usize| if mask[c] { lim.interface } else { lim.smooth };
    let (_, east) = cell_edges(&prim[l - 1], &prim[l], &prim[l + 1], pick(l));
    let (west, _) = cell_edges(&prim[l], &prim[l + 1], &prim[l + 2], pick(l + 1));
    (east, west)
}

/// Fifth-order values in characteristic variables, then componentwise;
/// `None` if neither gives admissible states.
#[inline]
fn fifth_order_values(prim: &[Vars], l: usize) -> Option<(Vars, Vars)> {
    let window: [Vars; 6] = std::array::from_fn(|q| prim[l - 2 + q]);
    // Uniform data: every candidate reproduces the state.
    if window.iter().all(|v| *v == window[2]) {
        return Some((window[2], window[2]));
    }
    let ok = |(a, b): &(Vars, Vars)| prim_is_valid(a) && prim_is_valid(b) && finite(a) && finite(b);
    if let Some(v) = characteristic_interface_values(&window) {
        if ok(&v) {
            return Some(v);
        }
    }
    let v = componentwise_interface_values(&window);
    ok(&v).then_some(v)
}

#[inline]
fn finite(v: &Vars) -> bool {
    (0..NVAR).all(|c| v[c].is_finite())
}
