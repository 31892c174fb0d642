use std::f64::consts::PI;

use num_complex::Complex64;

use crate::clifford::{gp_into, involute_in_place, Involution, EPS_SCALAR};
use crate::error::{Error, Inadmissibility, Result};
use crate::fourier::{cft, cft_tensor};
use crate::grid::CliffordField;
use crate::sum::pairwise_sum;

/// Relative floor under which a node's scalar part is treated as zero when
/// forming the scalarity defect, so that `0/0` nodes far out in the
/// spectral tail do not dominate.
const SCALAR_FLOOR: f64 = 1e-6;

/// A mother wavelet that passed the admissibility tests.
#[derive(Debug, Clone)]
pub struct AdmissibleWavelet {
    pub psi: CliffordField,
    pub psi_hat: CliffordField,
    /// `A_ψ = (2π)ⁿ ∫ ψ̂ψ̂† / |ξ|ⁿ dV(ξ)`.
    pub a_psi: f64,
    /// Largest `|nonscalar(ψ̂ψ̂†)| / |scalar(ψ̂ψ̂†)|` over the frequency nodes.
    pub scalarity_defect: f64,
    /// `|ψ̂|` at the refinement node nearest the origin, relative to `max |ψ̂|`.
    pub vanishing_defect: f64,
    /// Central-cube contributions at refinement factors 1, 2, 4.
    pub central_refinement: [f64; 3],
}

/// Per-node `ψ̂ψ̂†` scalar parts and the worst scalarity ratio.
fn spectral_density(blades: usize, values: &[Complex64], nodes: usize) -> (Vec<f64>, Vec<f64>) {
    let mut v = vec![Complex64::new(0.0, 0.0); blades];
    let mut vd = v.clone();
    let mut p = v.clone();
    let mut scalar = Vec::with_capacity(nodes);
    let mut other = Vec::with_capacity(nodes);
    for idx in 0..nodes {
        for b in 0..blades {
            v[b] = values[b * nodes + idx];
        }
        vd.copy_from_slice(&v);
        involute_in_place(&mut vd, Involution::Hermitian);
        gp_into(&v, &vd, &mut p);
        scalar.push(p[0].re);
        other.push(p[1..].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt() + p[0].im.abs());
    }
    (scalar, other)
}

/// Admissibility analysis of a sampled mother wavelet.
pub fn admissibility(psi: &CliffordField) -> Result<AdmissibleWavelet> {
    let n = psi.dim();
    let l1 = psi.l1_norm();
    let l2 = psi.l2_norm();
    if !(l1.is_finite() && l2.is_finite()) || l2 == 0.0 {
        return Err(Error::invalid("wavelet must have finite, nonzero L¹ and L² norms"));
    }
    let psi_hat = cft(psi);
    let grid = *psi_hat.grid();
    let m = grid.node_count();
    let nb = psi.blade_count();
    let (scalar, other) = spectral_density(nb, psi_hat.data(), m);

    let peak = scalar.iter().cloned().fold(0.0, f64::max);
    let scalarity_defect = scalar
        .iter()
        .zip(&other)
        .map(|(s, o)| o / s.abs().max(SCALAR_FLOOR * peak))
        .fold(0.0, f64::max);

    let two_pi_n = (2.0 * PI).powi(n as i32);
    let mut x = [0.0; 3];
    let weighted: Vec<f64> = (0..m)
        .map(|idx| {
            grid.coords(idx, &mut x[..n]);
            let r2: f64 = x[..n].iter().map(|v| v * v).sum();
            scalar[idx] / r2.powf(n as f64 / 2.0)
        })
        .collect();
    let full = two_pi_n * grid.cell_volume() * pairwise_sum(&weighted);

    // Re-integrate the cube [−Δξ, Δξ]ⁿ, which holds the 2ⁿ nodes nearest the
    // origin, on successively finer midpoint sub-lattices.
    let d = grid.spacing();
    let mut central = [0.0; 3];
    let mut finest_centre = 0.0;
    for (slot, r) in [1usize, 2, 4].into_iter().enumerate() {
        let step = d / r as f64;
        let axis: Vec<f64> = (0..2 * r).map(|j| (j as f64 - r as f64 + 0.5) * step).collect();
        let axes = vec![axis.clone(); n];
        let values = cft_tensor(psi, &axes);
        let k = (2 * r).pow(n as u32);
        let (s, _) = spectral_density(nb, &values, k);
        let mut idx_k = [0usize; 3];
        let terms: Vec<f64> = (0..k)
            .map(|idx| {
                let mut rem = idx;
                for a in (0..n).rev() {
                    idx_k[a] = rem % (2 * r);
                    rem /= 2 * r;
                }
                let r2: f64 = idx_k[..n].iter().map(|&j| axis[j] * axis[j]).sum();
                s[idx] / r2.powf(n as f64 / 2.0)
            })
            .collect();
        central[slot] = two_pi_n * step.powi(n as i32) * pairwise_sum(&terms);
        if r == 4 {
            let mut centre = [0usize; 3];
            centre[..n].iter_mut().for_each(|c| *c = r);
            let idx = centre[..n].iter().fold(0, |acc, &c| acc * 2 * r + c);
            finest_centre = s[idx].abs().sqrt();
        }
    }
    let a_psi = full - central[0] + central[2];
    let d1 = (central[1] - central[0]).abs();
    let d2 = (central[2] - central[1]).abs();
    let vanishing_defect = finest_centre / peak.sqrt();

    if scalarity_defect > EPS_SCALAR {
        return Err(Error::NotAdmissible {
            reason: Inadmissibility::Scalarity,
            detail: format!("scalarity defect {scalarity_defect:.3e} exceeds {EPS_SCALAR:.0e}"),
        });
    }
    if d2 > 0.5 * d1 && d2 > 1e-4 * a_psi.abs() {
        return Err(Error::NotAdmissible {
            reason: Inadmissibility::Divergent,
            detail: format!(
                "central contribution keeps growing under refinement: {:.6e}, {:.6e}, {:.6e}",
                central[0], central[1], central[2]
            ),
        });
    }
    Ok(AdmissibleWavelet {
        psi: psi.clone(),
        psi_hat,
        a_psi,
        scalarity_defect,
        vanishing_defect,
        central_refinement: central,
    })
}
