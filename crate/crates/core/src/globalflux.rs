//! Global fluxes `K = F − R`, where `R` accumulates the nonconservative
//! products `u Γ_x` and `u Π_x` along a grid line, plus one-sided local
//! speeds.
//!
//! The cell contributions use the trapezoidal rule on the reconstructed
//! pieces, the interface contributions a straight-line path between the
//! one-sided states. Only the `Γ` and `Π` slots of `R` are ever nonzero.

use crate::error::Result;
use crate::state::{
    conserved_from_primitive, cons_to_prim, sound_speed_sq, ConservedState, Vars, EN, GAM, MX,
    MY, NVAR, PI, PRES, VX, VY,
};

pub type FluxVector = Vars;

/// Left- and right-sided global fluxes at each interface of a line.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalFluxPair {
    pub k_minus: Vec<FluxVector>,
    pub k_plus: Vec<FluxVector>,
}

/// x-direction physical flux from a conserved vector and its primitive
/// counterpart.
#[inline]
pub fn flux_x(u: &Vars, v: &Vars) -> FluxVector {
    let vel = v[VX];
    let p = v[PRES];
    [
        u[MX],
        u[MX] * vel + p,
        u[MY] * vel,
        vel * (u[EN] + p),
        vel * u[GAM],
        vel * u[PI],
    ]
}

pub fn physical_flux_x(u: ConservedState) -> Result<FluxVector> {
    let a = u.to_array();
    let v = prim_or_err(&a)?;
    Ok(flux_x(&a, &v))
}

pub fn physical_flux_y(u: ConservedState) -> Result<FluxVector> {
    let a = u.to_array();
    let v = prim_or_err(&a)?;
    let vel = v[VY];
    let p = v[PRES];
    Ok([
        a[MY],
        a[MX] * vel,
        a[MY] * vel + p,
        vel * (a[EN] + p),
        vel * a[GAM],
        vel * a[PI],
    ])
}

fn prim_or_err(a: &Vars) -> Result<Vars> {
    cons_to_prim(a).map_err(|reason| crate::Error::InvalidState {
        cell: (0, 0),
        reason,
    })
}

/// Trapezoidal cell term from the interface values bounding the cell:
/// `(·)⁻` at its right edge and `(·)⁺` at its left edge.
pub fn cell_source(
    u_right: f64,
    u_left: f64,
    gamma_right: f64,
    gamma_left: f64,
    pi_right: f64,
    pi_left: f64,
) -> Vars {
    let du = u_right - u_left;
    let mut b = [0.0; NVAR];
    b[GAM] = 0.5 * (gamma_right + gamma_left) * du;
    b[PI] = 0.5 * (pi_right + pi_left) * du;
    b
}

/// Straight-path interface term between primitive states `V⁻` and `V⁺`.
pub fn path_source(vm: &Vars, vp: &Vars) -> Vars {
    let du = vp[VX] - vm[VX];
    let mut b = [0.0; NVAR];
    b[GAM] = 0.5 * (vp[GAM] + vm[GAM]) * du;
    b[PI] = 0.5 * (vp[PI] + vm[PI]) * du;
    b
}

/// `R` recursion from the first interface of the line: `R⁻ = 0` there, then
/// alternately adding path and cell terms. `b_cell[i]` is the cell between
/// interfaces `i` and `i + 1`.
pub fn accumulate_global_flux(
    f_minus: &[FluxVector],
    f_plus: &[FluxVector],
    b_cell: &[Vars],
    b_path: &[Vars],
) -> GlobalFluxPair {
    let m = f_minus.len();
    assert!(f_plus.len() == m && b_path.len() == m && b_cell.len() + 1 >= m);
    let mut k_minus = Vec::with_capacity(m);
    let mut k_plus = Vec::with_capacity(m);
    let mut r = [0.0; NVAR];
    for i in 0..m {
        if i > 0 {
            add(&mut r, &b_cell[i - 1]);
        }
        k_minus.push(sub(&f_minus[i], &r));
        add(&mut r, &b_path[i]);
        k_plus.push(sub(&f_plus[i], &r));
    }
    GlobalFluxPair { k_minus, k_plus }
}

/// Global fluxes equivalent to [`accumulate_global_flux`] up to a constant
/// shift along the line, built from increments.
///
/// On input `km`/`kp` hold the physical fluxes `F∓`. Along the sequence
/// `K⁻₀, K⁺₀, K⁻₁, …` consecutive `Γ` (and `Π`) slots differ by
/// `½(Γ_b − Γ_a)(u_b + u_a)`, which is algebraically the same as the path
/// and cell terms but vanishes exactly wherever `Γ` is constant. The sums
/// are run from both ends and averaged so that a mirrored line produces
/// exactly mirrored fluxes.
pub fn globalize_by_increments(vm: &[Vars], vp: &[Vars], km: &mut [FluxVector], kp: &mut [FluxVector]) {
    let m = km.len();
    if m == 0 {
        return;
    }
    // The states form the sequence V⁻_0, V⁺_0, V⁻_1, V⁺_1, …; each step
    // adds the path increment between neighbours in that sequence.
    for c in [GAM, PI] {
        let step = |a: &Vars, b: &Vars| 0.5 * (b[c] - a[c]) * (b[VX] + a[VX]);
        // Each pass is anchored at the physical flux of its own end.
        let right_end = kp[m - 1][c];
        let mut acc = km[0][c];
        for k in 0..m {
            acc += step(&vm[k], &vp[k]);
            kp[k][c] = acc;
            if k + 1 < m {
                acc += step(&vp[k], &vm[k + 1]);
                km[k + 1][c] = acc;
            }
        }
        // Backward sums averaged in.
        let mut acc = right_end;
        for k in (0..m).rev() {
            if k + 1 < m {
                acc -= step(&vp[k], &vm[k + 1]);
            }
            kp[k][c] = 0.5 * (kp[k][c] + acc);
            acc -= step(&vm[k], &vp[k]);
            km[k][c] = 0.5 * (km[k][c] + acc);
        }
    }
}

/// One-sided local speeds `(a⁻, a⁺)` in the x-direction.
#[inline]
pub fn local_speeds(vm: &Vars, vp: &Vars) -> (f64, f64) {
    let cm = sound_speed_sq(vm).sqrt();
    let cp = sound_speed_sq(vp).sqrt();
    let ap = (vm[VX] + cm).max(vp[VX] + cp).max(0.0);
    let am = (vm[VX] - cm).min(vp[VX] - cp).min(0.0);
    (am, ap)
}

/// Conserved one-sided states for a primitive line.
pub fn conserved_line(v: &[Vars]) -> Vec<Vars> {
    v.iter()
        .map(|x| conserved_from_primitive(crate::PrimitiveState::from_array(*x)).to_array())
        .collect()
}

#[inline]
fn add(a: &mut Vars, b: &Vars) {
    for c in 0..NVAR {
        a[c] += b[c];
    }
}

#[inline]
fn sub(a: &Vars, b: &Vars) -> Vars {
    std::array::from_fn(|c| a[c] - b[c])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::prim_to_cons;
    use proptest::prelude::*;

    fn cons(rho: f64, u: f64, v: f64, p: f64, g: f64, pi: f64) -> ConservedState {
        ConservedState::from_array(prim_to_cons(&[rho, u, v, p, g, pi]))
    }

    #[test]
    fn flux_examples() {
        let f = physical_flux_x(cons(1.0, 0.0, 0.0, 1.0, 2.5, 0.0)).unwrap();
        assert_eq!(f, [0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let u = cons(1.0, 1.0, 0.0, 1.0, 2.5, 0.0);
        assert_eq!(u.energy, 3.0);
        let f = physical_flux_x(u).unwrap();
        assert_eq!(f, [1.0, 2.0, 0.0, 4.0, 2.5, 0.0]);
    }

    #[test]
    fn x_and_y_fluxes_swap() {
        let a = cons(1.3, 0.7, -0.2, 2.0, 1.1, 0.4);
        let b = cons(1.3, -0.2, 0.7, 2.0, 1.1, 0.4);
        let f = physical_flux_x(a).unwrap();
        let g = physical_flux_y(b).unwrap();
        assert_eq!([f[0], f[1], f[2], f[3], f[4], f[5]], [g[0], g[2], g[1], g[3], g[4], g[5]]);
    }

    #[test]
    fn source_examples() {
        assert_eq!(cell_source(0.3, 0.3, 2.0, 1.0, 5.0, 6.0), [0.0; NVAR]);
        let b = cell_source(1.0, 0.0, 2.0, 2.0, 0.0, 0.0);
        assert_eq!(b[GAM], 2.0);

        let vm = [1.0, 0.0, 0.0, 1.0, 1.0, 0.0];
        let vp = [1.0, 1.0, 0.0, 1.0, 3.0, 0.0];
        assert_eq!(path_source(&vm, &vp)[GAM], 2.0);
        let s = path_source(&vp, &vm);
        assert_eq!(s[GAM], -2.0);
        let other = [2.0, 0.0, 0.0, 4.0, 3.0, 7.0];
        assert_eq!(path_source(&vm, &other), [0.0; NVAR]);
    }

    #[test]
    fn single_path_term_unrolled() {
        let m = 4;
        let f = vec![[0.0; NVAR]; m];
        let cell = vec![[0.0; NVAR]; m - 1];
        let mut path = vec![[0.0; NVAR]; m];
        path[1][GAM] = 0.7;
        let k = accumulate_global_flux(&f, &f, &cell, &path);
        assert_eq!(k.k_minus[0][GAM], 0.0);
        assert_eq!(k.k_plus[0][GAM], 0.0);
        assert_eq!(k.k_minus[1][GAM], 0.0);
        assert_eq!(k.k_plus[1][GAM], -0.7);
        assert_eq!(k.k_minus[3][GAM], -0.7);
        assert_eq!(k.k_plus[3][GAM], -0.7);
    }

    #[test]
    fn zero_sources_keep_physical_flux() {
        let f: Vec<Vars> = (0..5).map(|i| [i as f64; NVAR]).collect();
        let z = vec![[0.0; NVAR]; 5];
        let k = accumulate_global_flux(&f, &f, &z[..4], &z);
        assert_eq!(k.k_minus, f);
        assert_eq!(k.k_plus, f);
    }

    #[test]
    fn speed_examples() {
        let v = [1.0, 0.0, 0.0, 1.0, 2.5, 0.0];
        let c = 1.4f64.sqrt();
        let (am, ap) = local_speeds(&v, &v);
        assert!((am + c).abs() < 1e-15 && (ap - c).abs() < 1e-15);

        // c = 1 needs (1+Γ)p/(Γρ) = 1.
        let w = [1.0, 3.0, 0.0, 1.0 / 3.5 * 2.5, 2.5, 0.0];
        let (am, ap) = local_speeds(&w, &w);
        assert_eq!(am, 0.0);
        assert!((ap - 4.0).abs() < 1e-14);
    }

    fn line_states(n: usize, seed: &[f64]) -> Vec<Vars> {
        (0..n)
            .map(|i| {
                let s = seed[i % seed.len()];
                [1.0 + s * s, 0.3 * s, 0.0, 1.0 + 0.5 * s.abs(), 1.0 + 0.2 * s, 0.1 * s.abs()]
            })
            .collect()
    }

    #[test]
    fn constant_gamma_gives_flat_global_flux() {
        let mut vm = line_states(9, &[0.3, -0.7, 1.1, 0.2]);
        let mut vp = line_states(9, &[-0.1, 0.5, 0.9, -1.3]);
        for v in vm.iter_mut().chain(vp.iter_mut()) {
            v[GAM] = 2.5;
            v[PI] = 0.0;
        }
        let um = conserved_line(&vm);
        let up = conserved_line(&vp);
        let mut km: Vec<Vars> = um.iter().zip(&vm).map(|(u, v)| flux_x(u, v)).collect();
        let mut kp: Vec<Vars> = up.iter().zip(&vp).map(|(u, v)| flux_x(u, v)).collect();
        globalize_by_increments(&vm, &vp, &mut km, &mut kp);
        for i in 0..9 {
            assert_eq!(km[i][GAM], km[0][GAM]);
            assert_eq!(kp[i][GAM], km[0][GAM]);
            assert_eq!(kp[i][PI], 0.0);
        }
    }

    proptest! {
        #[test]
        fn recursion_is_prefix_sum(
            raw in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..64)
        ) {
            let m = raw.len();
            let f = vec![[0.0; NVAR]; m];
            let path: Vec<Vars> = raw.iter().map(|&(a, _)| { let mut b = [0.0; NVAR]; b[GAM] = a; b[PI] = -a; b }).collect();
            let cell: Vec<Vars> = raw[..m - 1].iter().map(|&(_, c)| { let mut b = [0.0; NVAR]; b[GAM] = c; b[PI] = 2.0 * c; b }).collect();
            let k = accumulate_global_flux(&f, &f, &cell, &path);
            for j in 0..m {
                // R⁺ at interface j: all path terms up to j and cell terms before j.
                let mut r = 0.0;
                for i in 0..=j {
                    r += path[i][GAM];
                    if i < j { r += cell[i][GAM]; }
                }
                prop_assert!((-k.k_plus[j][GAM] - r).abs() <= 1e-14 * (1.0 + r.abs()) * m as f64);
            }
        }

        #[test]
        fn increments_match_recursion(
            seeds in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0, 0.5f64..3.0, 0.5f64..3.0), 2..40)
        ) {
            let vm: Vec<Vars> = seeds.iter().map(|&(u, _, g, _)| [1.0, u, 0.0, 1.0, g, g * 0.3]).collect();
            let vp: Vec<Vars> = seeds.iter().map(|&(_, u, _, g)| [1.2, u, 0.0, 0.8, g, g * 0.7]).collect();
            let um = conserved_line(&vm);
            let up = conserved_line(&vp);
            let fm: Vec<Vars> = um.iter().zip(&vm).map(|(u, v)| flux_x(u, v)).collect();
            let fp: Vec<Vars> = up.iter().zip(&vp).map(|(u, v)| flux_x(u, v)).collect();
            let m = vm.len();
            let path: Vec<Vars> = (0..m).map(|i| path_source(&vm[i], &vp[i])).collect();
            let cell: Vec<Vars> = (0..m - 1)
                .map(|i| cell_source(vm[i + 1][VX], vp[i][VX], vm[i + 1][GAM], vp[i][GAM], vm[i + 1][PI], vp[i][PI]))
                .collect();
            let k = accumulate_global_flux(&fm, &fp, &cell, &path);
            let (mut km, mut kp) = (fm.clone(), fp.clone());
            globalize_by_increments(&vm, &vp, &mut km, &mut kp);
            let tol = 1e-12 * m as f64;
            for i in 0..m {
                for c in 0..NVAR {
                    // Same jumps across every interface and every cell.
                    let d_new = kp[i][c] - km[i][c];
                    let d_ref = k.k_plus[i][c] - k.k_minus[i][c];
                    prop_assert!((d_new - d_ref).abs() < tol);
                    if i + 1 < m {
                        let d_new = km[i + 1][c] - kp[i][c];
                        let d_ref = k.k_minus[i + 1][c] - k.k_plus[i][c];
                        prop_assert!((d_new - d_ref).abs() < tol);
                    }
                }
                for c in 0..GAM {
                    prop_assert_eq!(km[i][c], k.k_minus[i][c]);
                }
            }
        }

        #[test]
        fn mirrored_line_gives_negated_global_fluxes(
            seeds in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0, 0.5f64..3.0, 0.5f64..3.0), 2..40)
        ) {
            let vm: Vec<Vars> = seeds.iter().map(|&(u, _, g, _)| [1.0, u, 0.0, 1.0, g, g * 0.3]).collect();
            let vp: Vec<Vars> = seeds.iter().map(|&(_, u, _, g)| [1.2, u, 0.0, 0.8, g, g * 0.7]).collect();
            // Reversing the line swaps the one-sided states and flips u.
            let flip = |v: &Vars| [v[0], -v[1], v[2], v[3], v[4], v[5]];
            let wm: Vec<Vars> = vp.iter().rev().map(flip).collect();
            let wp: Vec<Vars> = vm.iter().rev().map(flip).collect();
            let fluxes = |vm: &[Vars], vp: &[Vars]| {
                let (um, up) = (conserved_line(vm), conserved_line(vp));
                let mut km: Vec<Vars> = um.iter().zip(vm).map(|(u, v)| flux_x(u, v)).collect();
                let mut kp: Vec<Vars> = up.iter().zip(vp).map(|(u, v)| flux_x(u, v)).collect();
                globalize_by_increments(vm, vp, &mut km, &mut kp);
                (km, kp)
            };
            let (km, kp) = fluxes(&vm, &vp);
            let (lm, lp) = fluxes(&wm, &wp);
            let m = vm.len();
            for i in 0..m {
                for c in [GAM, PI] {
                    prop_assert_eq!(lm[m - 1 - i][c], -kp[i][c]);
                    prop_assert_eq!(lp[m - 1 - i][c], -km[i][c]);
                }
            }
        }

        #[test]
        fn speeds_bracket_zero(
            r1 in 0.1f64..5.0, u1 in -10.0f64..10.0, p1 in 0.1f64..5.0,
            r2 in 0.1f64..5.0, u2 in -10.0f64..10.0, p2 in 0.1f64..5.0,
        ) {
            let (am, ap) = local_speeds(&[r1, u1, 0.0, p1, 2.5, 0.0], &[r2, u2, 0.0, p2, 1.0, 3.0]);
            prop_assert!(am <= 0.0 && ap >= 0.0);
        }
    }
}
