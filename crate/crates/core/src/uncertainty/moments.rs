use crate::error::Result;
use crate::grid::{log_radius_integral, log_radius_integral_midpoint, CliffordField, Weight};

/// `∫ ln|x| |f(x)|² dV(x)`, with the log-singularity correction at the
/// origin (see [`log_radius_integral`]).
pub fn log_moment(f: &CliffordField) -> f64 {
    log_radius_integral(f.grid(), &f.module_sqr_density())
}

/// Plain midpoint sum `hⁿ Σ ln|x_k| |f(x_k)|²`.
pub fn log_moment_midpoint(f: &CliffordField) -> f64 {
    log_radius_integral_midpoint(f.grid(), &f.module_sqr_density())
}

/// `‖x_k f‖₂²` (1-based axis).
pub fn coordinate_moment(f: &CliffordField, k: usize) -> Result<f64> {
    Ok(f.weight_pointwise(&Weight::Coordinate(k))?.l2_norm_sqr())
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::clifford::Multivector;
    use crate::grid::GridSpec;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    fn dilated_gaussian(grid: GridSpec, c: f64) -> CliffordField {
        let n = grid.dim() as i32;
        CliffordField::sample(grid, |x| {
            let r2: f64 = x.iter().map(|v| v * v).sum::<f64>() / (c * c);
            Multivector::scalar(x.len(), c.powf(-(n as f64) / 2.0) * (-0.5 * r2).exp())
        })
        .unwrap()
    }

    #[test]
    fn gaussian_log_moment() {
        let grid = GridSpec::centered(2, 8.0, 64).unwrap();
        let f = dilated_gaussian(grid, 1.0);
        let exact = -PI * EULER_GAMMA / 2.0;
        assert!((log_moment(&f) - exact).abs() < 0.01 * exact.abs());
        assert!((log_moment(&f) - exact).abs() < 2e-4 * PI, "{}", log_moment(&f) - exact);
        // the uncorrected sum carries the O(h²) origin defect
        let plain = log_moment_midpoint(&f);
        assert!((plain - exact).abs() > 0.01 * exact.abs());
    }

    #[test]
    fn zero_field() {
        let grid = GridSpec::centered(2, 4.0, 16).unwrap();
        let z = CliffordField::zeros(grid, crate::grid::Domain::Space);
        assert_eq!(log_moment(&z), 0.0);
        assert_eq!(coordinate_moment(&z, 1).unwrap(), 0.0);
    }

    #[test]
    fn dilation_law() {
        let grid = GridSpec::centered(2, 8.0, 64).unwrap();
        let f = dilated_gaussian(grid, 1.0);
        let f2 = dilated_gaussian(grid, 2.0);
        let expected = log_moment(&f) + 2f64.ln() * f.l2_norm_sqr();
        assert!((log_moment(&f2) - expected).abs() < 1e-3 * expected.abs().max(1.0));
    }

    #[test]
    fn coordinate_moments() {
        let grid = GridSpec::centered(2, 8.0, 64).unwrap();
        let f = dilated_gaussian(grid, 1.0);
        let m1 = coordinate_moment(&f, 1).unwrap();
        assert!((m1 - PI / 2.0).abs() < 0.005 * PI / 2.0);
        assert!((m1 - coordinate_moment(&f, 2).unwrap()).abs() < 1e-12);
        assert!(coordinate_moment(&f, 3).is_err());
        // a field on the two cell rows nearest x₂ = 0 sees only x₂ = ±h/2
        let h = grid.spacing();
        let slab = CliffordField::sample(grid, |x| {
            Multivector::scalar(2, if x[1].abs() < h { (-0.5 * x[0] * x[0]).exp() } else { 0.0 })
        })
        .unwrap();
        let m2 = coordinate_moment(&slab, 2).unwrap();
        assert!((m2 - h * h / 4.0 * slab.l2_norm_sqr()).abs() < 1e-14);
    }
}
