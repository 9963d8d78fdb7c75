//! Schlieren shading `exp(−80 |∇ρ| / max |∇ρ|)`.

/// Gradient magnitude of `rho` (`nx × ny`, x fastest): central differences
/// inside, one-sided at the edges, zero along a direction with one cell.
pub fn gradient_magnitude(rho: &[f64], nx: usize, ny: usize, dx: f64, dy: f64) -> Vec<f64> {
    assert_eq!(rho.len(), nx * ny, "density size does not match the grid");
    let d = |a: f64, b: f64, h: f64| (b - a) / h;
    let diff = |n: usize, k: usize, at: &dyn Fn(usize) -> f64, h: f64| -> f64 {
        if n == 1 {
            0.0
        } else if k == 0 {
            d(at(0), at(1), h)
        } else if k == n - 1 {
            d(at(n - 2), at(n - 1), h)
        } else {
            d(at(k - 1), at(k + 1), 2.0 * h)
        }
    };
    let mut out = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let gx = diff(nx, i, &|m| rho[j * nx + m], dx);
            let gy = diff(ny, j, &|m| rho[m * nx + i], dy);
            out.push(gx.hypot(gy));
        }
    }
    out
}

/// Shading in `(0, 1]`; all ones when the density is constant. The maximum
/// is taken in a fixed sequential order.
pub fn schlieren_field(rho: &[f64], nx: usize, ny: usize, dx: f64, dy: f64) -> Vec<f64> {
    let g = gradient_magnitude(rho, nx, ny, dx, dy);
    let max = g.iter().fold(0.0f64, |m, &v| m.max(v));
    if max == 0.0 {
        return vec![1.0; g.len()];
    }
    g.iter().map(|v| (-80.0 * v / max).exp()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_density_is_white() {
        assert!(schlieren_field(&[2.0; 12], 4, 3, 0.1, 0.2).iter().all(|&s| s == 1.0));
    }

    #[test]
    fn linear_density_is_uniform() {
        let (nx, ny, dx) = (6, 4, 0.25);
        let rho: Vec<f64> = (0..nx * ny).map(|k| (k % nx) as f64 * dx).collect();
        let s = schlieren_field(&rho, nx, ny, dx, 0.5);
        let e = (-80.0f64).exp();
        assert!(s.iter().all(|&v| (v - e).abs() <= 1e-12 * e), "{s:?}");
    }

    #[test]
    fn maximum_cell_gets_exp_minus_80() {
        let rho = [1.0, 1.0, 1.0, 5.0, 5.0, 5.0, 5.0];
        let s = schlieren_field(&rho, 7, 1, 1.0, 1.0);
        assert_eq!(s[2], (-80.0f64).exp());
        assert_eq!(s[3], (-80.0f64).exp());
        assert_eq!(s[0], 1.0);
        assert!(s.iter().all(|&v| v > 0.0 && v <= 1.0));
    }

    #[test]
    fn edges_use_one_sided_differences() {
        let g = gradient_magnitude(&[0.0, 1.0, 4.0], 3, 1, 1.0, 1.0);
        assert_eq!(g, vec![1.0, 2.0, 3.0]);
    }
}
