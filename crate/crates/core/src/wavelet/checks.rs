use std::f64::consts::PI;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::clifford::{apply_matrix, gp_into, involute_in_place, Involution, Multivector};
use crate::error::{Error, Result};
use crate::grid::{CliffordField, GridSpec};
use crate::sum::{pairwise_sum, pairwise_sum_complex};
use crate::wavelet::{CwtCoefficients, CwtParams, MotherWavelet, SpectralCwt};

/// Two sides of a measured identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioReport {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

impl RatioReport {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            ratio: lhs / rhs,
        }
    }
}

/// `[T_f, T_g] = (1/A_ψ) ∫∫∫ (T_f)† T_g dμ` over the stored lattice.
pub fn hpsi_inner_product(tf: &CwtCoefficients, tg: &CwtCoefficients, a_psi: f64) -> Result<Multivector> {
    if !tf.grid().same_lattice(tg.grid()) || !tf.params().same_quadrature(tg.params()) {
        return Err(Error::invalid("coefficient lattices differ"));
    }
    let params = tf.params();
    let n = params.dim();
    let parts: Vec<Multivector> = (0..params.slice_count())
        .map(|slice| {
            let (j, m) = params.slice_pair(slice);
            let ip = tf.slice(j, m).inner_product(&tg.slice(j, m))?;
            Ok(ip.scale(params.slice_weight(j, m) / a_psi))
        })
        .collect::<Result<_>>()?;
    let mut out = Multivector::zero(n);
    for (b, c) in out.coeffs_mut().iter_mut().enumerate() {
        let terms: Vec<Complex64> = parts.iter().map(|p| p.coeffs()[b]).collect();
        *c = pairwise_sum_complex(&terms);
    }
    Ok(out)
}

/// `∫∫∫ |T_ψ[f]|² dμ` against `A_ψ ‖f‖₂²`.
///
/// The translation integral runs over all of `ℝⁿ` by evaluating it as
/// `∫ |T̂(a, ξ, s)|² dV(ξ)` on the spectral lattice.
pub fn plancherel_check(f: &CliffordField, psi: &dyn MotherWavelet, params: &CwtParams, a_psi: f64) -> Result<RatioReport> {
    let engine = SpectralCwt::new(f, psi, params, 1)?;
    let lhs = plancherel_lhs(&engine);
    Ok(RatioReport::new(lhs, a_psi * f.l2_norm_sqr()))
}

fn plancherel_lhs(engine: &SpectralCwt) -> f64 {
    let vol = engine.frequency_grid().cell_volume();
    engine.integrate_slices(|j, m| {
        let t = engine.spectrum(j, m);
        vol * pairwise_sum(&t.iter().map(|c| c.norm_sqr()).collect::<Vec<_>>())
    })
}

/// `∫∫ [ψ̂(a s̄ξs)]† ψ̂(a s̄ξs) da/a ds` at each `ξ`, divided by
/// `A_ψ / (2π)ⁿ`.
pub fn calibration_check(psi: &dyn MotherWavelet, params: &CwtParams, a_psi: f64, nodes: &[Vec<f64>]) -> Result<Vec<f64>> {
    let n = params.dim();
    if psi.dim() != n || nodes.iter().any(|x| x.len() != n) {
        return Err(Error::invalid("frequency nodes must match the wavelet dimension"));
    }
    let target = a_psi / (2.0 * PI).powi(n as i32);
    let nb = 1usize << n;
    let zero = Complex64::new(0.0, 0.0);
    Ok(nodes
        .iter()
        .map(|xi| {
            let mut y = [0.0; 3];
            let mut v = vec![zero; nb];
            let mut vd = vec![zero; nb];
            let mut p = vec![zero; nb];
            let terms: Vec<f64> = (0..params.slice_count())
                .map(|slice| {
                    let (j, m) = params.slice_pair(slice);
                    let a = params.scales()[j];
                    apply_matrix(params.rotation(m), n, xi, &mut y[..n]);
                    y[..n].iter_mut().for_each(|c| *c *= a);
                    psi.eval_hat(&y[..n], &mut v);
                    vd.copy_from_slice(&v);
                    involute_in_place(&mut vd, Involution::Hermitian);
                    gp_into(&vd, &v, &mut p);
                    params.slice_weight_da_over_a(j, m) * p[0].re
                })
                .collect();
            pairwise_sum(&terms) / target
        })
        .collect())
}

/// `count` distinct frequency nodes of `grid` with every coordinate within
/// half the Nyquist extent, drawn with a seeded generator.
pub fn interior_frequencies(grid: &GridSpec, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let n = grid.dim();
    let limit = 0.5 * grid.half_width();
    let mut candidates: Vec<Vec<f64>> = (0..grid.node_count())
        .map(|idx| {
            let mut x = vec![0.0; n];
            grid.coords(idx, &mut x);
            x
        })
        .filter(|x| x.iter().all(|v| v.abs() <= limit))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    candidates.shuffle(&mut rng);
    candidates.truncate(count);
    candidates
}
