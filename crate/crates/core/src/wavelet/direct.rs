use num_complex::Complex64;
use rayon::prelude::*;

use crate::clifford::{apply_matrix, gp_into, involute_in_place, Involution, Multivector, SpinElement};
use crate::error::{Error, Result};
use crate::grid::{CliffordField, GridSpec};
use crate::wavelet::{CwtCoefficients, CwtParams, MotherWavelet};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `ψ^{a,b,s}(x) = a^{−n/2} s ψ(s̄(x − b)s / a) s̄` on `grid`, with `ψ` given
/// pointwise by `eval`.
fn daughter_with(
    grid: GridSpec,
    eval: &(dyn Fn(&[f64], &mut [Complex64]) + Sync),
    a: f64,
    b: &[f64],
    s: &SpinElement,
) -> Result<CliffordField> {
    let n = grid.dim();
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::invalid(format!("scale must be positive, got {a}")));
    }
    if b.len() != n || s.dim() != n {
        return Err(Error::invalid("translation and spin must match the grid dimension"));
    }
    let r = s.matrix();
    let sbar = s.rotor().conjugate();
    let norm = a.powf(-(n as f64) / 2.0);
    CliffordField::sample(grid, |x| {
        let mut d = [0.0; 3];
        for i in 0..n {
            d[i] = x[i] - b[i];
        }
        let mut y = [0.0; 3];
        apply_matrix(&r, n, &d[..n], &mut y[..n]);
        y[..n].iter_mut().for_each(|v| *v /= a);
        let mut v = Multivector::zero(n);
        eval(&y[..n], v.coeffs_mut());
        (&(s.rotor() * &v) * &sbar).scale(norm)
    })
}

/// Daughter of a sampled mother wavelet, evaluated on the wavelet's own grid
/// by multilinear interpolation.
pub fn daughter(psi: &CliffordField, a: f64, b: &[f64], s: &SpinElement) -> Result<CliffordField> {
    daughter_with(*psi.grid(), &|y, out| psi.interpolate(y, out), a, b, s)
}

/// Daughter of an analytic mother wavelet sampled on `grid`.
pub fn daughter_of(
    psi: &dyn MotherWavelet,
    grid: GridSpec,
    a: f64,
    b: &[f64],
    s: &SpinElement,
) -> Result<CliffordField> {
    daughter_with(grid, &|y, out| psi.eval(y, out), a, b, s)
}

/// `T_ψ[f](a, b, s) = hⁿ Σ_x [ψ^{a,b,s}(x)]† f(x)` at every lattice point, by
/// brute force. Cost `O(J·M·N²ⁿ)`; meant as an oracle on small grids.
pub fn cwt_direct(f: &CliffordField, psi: &dyn MotherWavelet, params: &CwtParams) -> Result<CwtCoefficients> {
    let grid = *f.grid();
    let n = grid.dim();
    if psi.dim() != n || params.dim() != n {
        return Err(Error::invalid("wavelet, parameters and field must share a dimension"));
    }
    let nodes = grid.node_count();
    let nb = 1usize << n;
    let vol = grid.cell_volume();
    let coords: Vec<f64> = (0..nodes)
        .flat_map(|idx| {
            let mut x = [0.0; 3];
            grid.coords(idx, &mut x[..n]);
            x.into_iter().take(n)
        })
        .collect();

    let slices: Vec<Vec<Complex64>> = (0..params.slice_count())
        .into_par_iter()
        .map(|slice| {
            let (j, m) = params.slice_pair(slice);
            let a = params.scales()[j];
            let s = &params.spins()[m].0;
            let r = params.rotation(m);
            // [s ψ s̄]† = s ψ† s̄, so T = a^{−n/2} s Σ_x ψ(y)† (s̄ f(x)).
            let g = f.left_mul(&s.rotor().conjugate()).expect("dimensions checked");
            let gd = g.data();
            let norm = a.powf(-(n as f64) / 2.0) * vol;
            let mut out = vec![ZERO; nb * nodes];
            let mut psi_v = vec![ZERO; nb];
            let mut gv = vec![ZERO; nb];
            let mut prod = vec![ZERO; nb];
            let mut acc = vec![ZERO; nb];
            let mut res = vec![ZERO; nb];
            let mut d = [0.0; 3];
            let mut y = [0.0; 3];
            for bi in 0..nodes {
                let b = &coords[bi * n..(bi + 1) * n];
                acc.iter_mut().for_each(|c| *c = ZERO);
                for xi in 0..nodes {
                    let x = &coords[xi * n..(xi + 1) * n];
                    for i in 0..n {
                        d[i] = x[i] - b[i];
                    }
                    apply_matrix(r, n, &d[..n], &mut y[..n]);
                    y[..n].iter_mut().for_each(|v| *v /= a);
                    psi.eval(&y[..n], &mut psi_v);
                    involute_in_place(&mut psi_v, Involution::Hermitian);
                    for (k, c) in gv.iter_mut().enumerate() {
                        *c = gd[k * nodes + xi];
                    }
                    gp_into(&psi_v, &gv, &mut prod);
                    acc.iter_mut().zip(&prod).for_each(|(a, p)| *a += p);
                }
                gp_into(s.rotor().coeffs(), &acc, &mut res);
                for (k, c) in res.iter().enumerate() {
                    out[k * nodes + bi] = c * norm;
                }
            }
            out
        })
        .collect();
    Ok(CwtCoefficients::from_slices(params.clone(), grid, slices))
}
