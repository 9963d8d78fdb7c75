//! L1 distances between snapshots on nested meshes.

use crate::error::{Error, Result};
use crate::io::snapshot::Snapshot;

/// Block average of `fine` (`nx·r × ny·s`, x fastest) onto `nx × ny`.
pub fn block_average(fine: &[f64], nx: usize, ny: usize, r: usize, s: usize) -> Vec<f64> {
    let fnx = nx * r;
    assert_eq!(fine.len(), fnx * ny * s, "fine array size does not match the ratio");
    let w = 1.0 / (r * s) as f64;
    let mut out = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let mut sum = 0.0;
            for jj in j * s..(j + 1) * s {
                sum += fine[jj * fnx + i * r..jj * fnx + (i + 1) * r].iter().sum::<f64>();
            }
            out.push(sum * w);
        }
    }
    out
}

fn ratio(coarse: usize, fine: usize, axis: &str) -> Result<usize> {
    if fine % coarse != 0 {
        return Err(Error::IncompatibleGrids(format!("{axis}: {fine} cells do not refine {coarse}")));
    }
    Ok(fine / coarse)
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
}

/// Per-field L1 error of `coarse` against `reference` projected by block
/// averaging. Fields missing from either snapshot are skipped.
pub fn l1_error(coarse: &Snapshot, reference: &Snapshot) -> Result<Vec<(String, f64)>> {
    if coarse.dim != reference.dim {
        return Err(Error::IncompatibleGrids("dimensions differ".into()));
    }
    let r = ratio(coarse.nx, reference.nx, "x")?;
    let s = ratio(coarse.ny, reference.ny, "y")?;
    let same_x = close(coarse.x0, reference.x0) && close(coarse.dx, reference.dx * r as f64);
    let same_y = close(coarse.y0, reference.y0) && close(coarse.dy, reference.dy * s as f64);
    if !(same_x && same_y) {
        return Err(Error::IncompatibleGrids("domains differ".into()));
    }
    Ok(coarse
        .fields
        .iter()
        .filter_map(|(name, c)| {
            let f = reference.field(name)?;
            let avg = block_average(f, coarse.nx, coarse.ny, r, s);
            let sum: f64 = c.iter().zip(&avg).map(|(a, b)| (a - b).abs()).sum();
            Some((name.clone(), coarse.cell_area() * sum))
        })
        .collect())
}

/// L1 distance of one array from point values of `exact` at the cell
/// centres.
pub fn l1_against(s: &Snapshot, name: &str, exact: impl Fn(f64, f64) -> f64) -> Option<f64> {
    let data = s.field(name)?;
    let mut sum = 0.0;
    for j in 0..s.ny {
        let y = s.y0 + (j as f64 + 0.5) * s.dy;
        for (i, x) in s.x_centres().into_iter().enumerate() {
            sum += (data[j * s.nx + i] - exact(x, y)).abs();
        }
    }
    Some(s.cell_area() * sum)
}

/// `log2(e_coarse / e_fine)` for successive halvings.
pub fn observed_orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Dim;

    fn snap(nx: usize, len: f64, rho: Vec<f64>) -> Snapshot {
        Snapshot {
            dim: Dim::One,
            nx,
            ny: 1,
            x0: 0.0,
            y0: 0.0,
            dx: len / nx as f64,
            dy: 1.0,
            time: 0.0,
            scheme: String::new(),
            config_hash: String::new(),
            fields: vec![("rho".into(), rho)],
        }
    }

    #[test]
    fn identical_snapshots_have_zero_error() {
        let a = snap(5, 1.0, vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(l1_error(&a, &a).unwrap(), vec![("rho".to_string(), 0.0)]);
    }

    #[test]
    fn constants_differ_by_jump_times_length() {
        let a = snap(4, 3.0, vec![1.0; 4]);
        let b = snap(16, 3.0, vec![1.25; 16]);
        assert_eq!(l1_error(&a, &b).unwrap()[0].1, 0.75);
    }

    #[test]
    fn prolongation_averages_back_exactly() {
        let coarse = vec![1.0, -2.0, 0.5];
        let fine: Vec<f64> = coarse.iter().flat_map(|&v| [v; 4]).collect();
        let e = l1_error(&snap(3, 1.5, coarse), &snap(12, 1.5, fine)).unwrap();
        assert_eq!(e[0].1, 0.0);
    }

    #[test]
    fn non_integer_ratio_rejected() {
        let err = l1_error(&snap(4, 1.0, vec![0.0; 4]), &snap(6, 1.0, vec![0.0; 6]));
        assert!(matches!(err, Err(Error::IncompatibleGrids(_))));
        let err = l1_error(&snap(4, 1.0, vec![0.0; 4]), &snap(8, 2.0, vec![0.0; 8]));
        assert!(matches!(err, Err(Error::IncompatibleGrids(_))));
    }

    #[test]
    fn block_average_2d() {
        let fine = [1.0, 3.0, 5.0, 7.0, 2.0, 4.0, 6.0, 8.0];
        assert_eq!(block_average(&fine, 2, 1, 2, 2), vec![2.5, 6.5]);
    }

    #[test]
    fn orders_of_halving_errors() {
        assert_eq!(observed_orders(&[1.0, 0.25, 0.0625]), vec![2.0, 2.0]);
    }
}
