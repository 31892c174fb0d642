use std::f64::consts::PI;

use num_complex::Complex64;

use crate::clifford::{haar_mass, Multivector};
use crate::error::{Error, Result};
use crate::fourier::cft;
use crate::grid::{CliffordField, GridSpec};

/// A mother wavelet known pointwise in space and in frequency.
///
/// Both the direct and the spectral transform evaluate the wavelet through
/// this trait, so the two paths differ only in how they sum.
pub trait MotherWavelet: Sync + Send {
    fn dim(&self) -> usize;

    /// `ψ(x)`, writing `2ⁿ` blade coefficients.
    fn eval(&self, x: &[f64], out: &mut [Complex64]);

    /// `ψ̂(ξ)` under the `(2π)^{−n/2}` normalization.
    fn eval_hat(&self, xi: &[f64], out: &mut [Complex64]);

    fn label(&self) -> String;

    /// Closed-form `A_ψ`, when one is known.
    fn admissibility_constant(&self) -> Option<f64> {
        None
    }

    fn sample(&self, grid: GridSpec) -> Result<CliffordField> {
        let n = self.dim();
        if grid.dim() != n {
            return Err(Error::invalid(format!(
                "wavelet is {n}-dimensional, grid is {}-dimensional",
                grid.dim()
            )));
        }
        CliffordField::sample(grid, |x| {
            let mut v = Multivector::zero(n);
            self.eval(x, v.coeffs_mut());
            v
        })
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if (1..=3).contains(&dim) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

/// `ψ(x) = x e^{−|x|²/2}`, vector-valued, with `ψ̂(ξ) = −iξ e^{−|ξ|²/2}`.
#[derive(Debug, Clone, Copy)]
pub struct CliffordHermite {
    dim: usize,
}

impl CliffordHermite {
    pub fn new(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { dim })
    }
}

impl MotherWavelet for CliffordHermite {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64], out: &mut [Complex64]) {
        let g = (-0.5 * x.iter().map(|v| v * v).sum::<f64>()).exp();
        out.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
        for (i, xi) in x.iter().enumerate() {
            out[1 << i] = Complex64::new(xi * g, 0.0);
        }
    }

    fn eval_hat(&self, xi: &[f64], out: &mut [Complex64]) {
        let g = (-0.5 * xi.iter().map(|v| v * v).sum::<f64>()).exp();
        out.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
        for (i, w) in xi.iter().enumerate() {
            out[1 << i] = Complex64::new(0.0, -w * g);
        }
    }

    fn label(&self) -> String {
        "clifford-hermite".into()
    }

    /// `(2π)ⁿ ω_{n−1} / 2`.
    fn admissibility_constant(&self) -> Option<f64> {
        Some((2.0 * PI).powi(self.dim as i32) * haar_mass(self.dim) / 2.0)
    }
}

/// Scalar first-derivative-of-Gaussian `ψ(x) = x_k e^{−|x|²/2}`; not radially
/// symmetric, so rotated daughters genuinely depend on the spin.
#[derive(Debug, Clone, Copy)]
pub struct GaussianDerivative {
    dim: usize,
    axis: usize,
}

impl GaussianDerivative {
    /// `axis` is 1-based.
    pub fn new(dim: usize, axis: usize) -> Result<Self> {
        check_dim(dim)?;
        if axis == 0 || axis > dim {
            return Err(Error::invalid(format!("axis {axis} out of range 1..={dim}")));
        }
        Ok(Self { dim, axis })
    }
}

impl MotherWavelet for GaussianDerivative {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64], out: &mut [Complex64]) {
        let g = (-0.5 * x.iter().map(|v| v * v).sum::<f64>()).exp();
        out.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
        out[0] = Complex64::new(x[self.axis - 1] * g, 0.0);
    }

    fn eval_hat(&self, xi: &[f64], out: &mut [Complex64]) {
        let g = (-0.5 * xi.iter().map(|v| v * v).sum::<f64>()).exp();
        out.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
        out[0] = Complex64::new(0.0, -xi[self.axis - 1] * g);
    }

    fn label(&self) -> String {
        format!("gaussian-derivative-{}", self.axis)
    }

    /// `(2π)ⁿ ω_{n−1} / (2n)`.
    fn admissibility_constant(&self) -> Option<f64> {
        Some((2.0 * PI).powi(self.dim as i32) * haar_mass(self.dim) / (2.0 * self.dim as f64))
    }
}

/// A wavelet given only by samples: `ψ` by multilinear interpolation of the
/// field and `ψ̂` by multilinear interpolation of its transform, taken on a
/// 4× zero-padded lattice for a finer frequency spacing.
#[derive(Debug, Clone)]
pub struct SampledWavelet {
    psi: CliffordField,
    psi_hat: CliffordField,
}

impl SampledWavelet {
    pub fn new(psi: CliffordField) -> Self {
        let psi_hat = cft(&psi.pad(4));
        Self { psi, psi_hat }
    }

    pub fn field(&self) -> &CliffordField {
        &self.psi
    }
}

impl MotherWavelet for SampledWavelet {
    fn dim(&self) -> usize {
        self.psi.dim()
    }

    fn eval(&self, x: &[f64], out: &mut [Complex64]) {
        self.psi.interpolate(x, out);
    }

    fn eval_hat(&self, xi: &[f64], out: &mut [Complex64]) {
        self.psi_hat.interpolate(xi, out);
    }

    fn label(&self) -> String {
        "sampled".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_transform_pair(w: &dyn MotherWavelet, grid: GridSpec) {
        let f = w.sample(grid).unwrap();
        let fh = cft(&f);
        let mut v = vec![Complex64::new(0.0, 0.0); 1 << w.dim()];
        let mut worst: f64 = 0.0;
        for idx in 0..fh.node_count() {
            w.eval_hat(&fh.coords(idx), &mut v);
            for (b, c) in v.iter().enumerate() {
                worst = worst.max((fh.data()[b * fh.node_count() + idx] - c).norm());
            }
        }
        assert!(worst < 1e-7, "{}: {worst}", w.label());
    }

    #[test]
    fn analytic_spectra_match_the_transform() {
        for n in 1..=3 {
            let grid = GridSpec::centered(n, 8.0, if n == 3 { 32 } else { 64 }).unwrap();
            check_transform_pair(&CliffordHermite::new(n).unwrap(), grid);
            check_transform_pair(&GaussianDerivative::new(n, n).unwrap(), grid);
        }
    }

    #[test]
    fn sampled_wavelet_reproduces_nodes() {
        let grid = GridSpec::centered(2, 6.0, 32).unwrap();
        let ch = CliffordHermite::new(2).unwrap();
        let s = SampledWavelet::new(ch.sample(grid).unwrap());
        let mut a = [Complex64::new(0.0, 0.0); 4];
        let mut b = a;
        let x = s.field().coords(100);
        s.eval(&x, &mut a);
        ch.eval(&x, &mut b);
        assert_eq!(a, b);
        s.eval_hat(&[0.7, -0.3], &mut a);
        ch.eval_hat(&[0.7, -0.3], &mut b);
        assert!(a.iter().zip(&b).all(|(p, q)| (p - q).norm() < 5e-3));
    }

    #[test]
    fn closed_form_constants() {
        let c = |n| CliffordHermite::new(n).unwrap().admissibility_constant().unwrap();
        assert!((c(1) - 2.0 * PI).abs() < 1e-12);
        assert!((c(2) - 4.0 * PI.powi(3)).abs() < 1e-10);
        assert!((c(3) - 16.0 * PI.powi(4)).abs() < 1e-9);
        assert!(CliffordHermite::new(4).is_err());
    }
}
