use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::grid::{for_each_line, CliffordField, Domain, GridSpec};

/// Precomputed FFTs and midpoint phase tables for one lattice and its dual.
///
/// With `c = N/2 − ½` the kernel on node pairs factors as
/// `e^{−i x_k ξ_m} = e^{−2πi km/N} · e^{2πi ck/N} · e^{2πi cm/N} · e^{−2πi c²/N}`,
/// so each axis is one FFT between two diagonal phase multiplications.
pub struct FourierPlan {
    grid: GridSpec,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    pre: Vec<Complex64>,
    post: Vec<Complex64>,
    scale_forward: f64,
    scale_inverse: f64,
}

impl FourierPlan {
    /// Plan for transforms between `grid` (space) and `grid.dual()`.
    pub fn new(grid: &GridSpec) -> Self {
        let n = grid.points();
        let mut planner = FftPlanner::new();
        let nn = n as u64;
        // Phases as exact rationals of 2π over 4N before the cosine/sine.
        let c2 = ((nn - 1) * (nn - 1)) % (4 * nn);
        let phase = |num: u64| {
            let t = PI * (num % (4 * nn)) as f64 / (2 * nn) as f64;
            Complex64::new(t.cos(), t.sin())
        };
        let pre: Vec<Complex64> = (0..nn).map(|k| phase(2 * (((nn - 1) * k) % (2 * nn)))).collect();
        let post: Vec<Complex64> = (0..nn)
            .map(|m| phase(2 * (((nn - 1) * m) % (2 * nn)) + 4 * nn - c2))
            .collect();
        let dual = grid.dual();
        Self {
            grid: *grid,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            pre,
            post,
            scale_forward: grid.spacing() / (2.0 * PI).sqrt(),
            scale_inverse: dual.spacing() / (2.0 * PI).sqrt(),
        }
    }

    pub fn space_grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn frequency_grid(&self) -> GridSpec {
        self.grid.dual()
    }

    /// Forward transform of one scalar component in place.
    pub fn forward_component(&self, data: &mut [Complex64]) {
        self.apply(data, true);
    }

    /// Inverse transform of one scalar component in place.
    pub fn inverse_component(&self, data: &mut [Complex64]) {
        self.apply(data, false);
    }

    fn apply(&self, data: &mut [Complex64], forward: bool) {
        let n = self.grid.points();
        let dim = self.grid.dim();
        let m = self.grid.node_count();
        debug_assert_eq!(data.len(), m);
        let (fft, scale) = if forward {
            (&self.forward, self.scale_forward)
        } else {
            (&self.inverse, self.scale_inverse)
        };
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        for axis in 0..dim {
            let stride = n.pow((dim - 1 - axis) as u32);
            for_each_line(m, n, stride, |start| {
                for (k, v) in line.iter_mut().enumerate() {
                    let p = if forward { self.pre[k] } else { self.post[k].conj() };
                    *v = data[start + k * stride] * p;
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (k, v) in line.iter().enumerate() {
                    let p = if forward { self.post[k] } else { self.pre[k].conj() };
                    data[start + k * stride] = v * p * scale;
                }
            });
        }
    }

    /// Transform every blade of a field; `forward` maps space to frequency.
    pub fn transform(&self, f: &CliffordField, forward: bool) -> CliffordField {
        let m = f.node_count();
        let mut data = f.data().to_vec();
        data.par_chunks_mut(m).for_each(|c| self.apply(c, forward));
        let (grid, domain) = if forward {
            (self.grid.dual(), Domain::Frequency)
        } else {
            (self.grid, Domain::Space)
        };
        CliffordField::from_components_unchecked(grid, domain, data)
    }
}

/// `f̂(ξ) = (2π)^{−n/2} ∫ e^{−i⟨x,ξ⟩} f(x) dV(x)` on the dual lattice.
pub fn cft(f: &CliffordField) -> CliffordField {
    FourierPlan::new(f.grid()).transform(f, true)
}

/// Inverse of [`cft`]; the output lives on `F.grid().dual()`.
pub fn icft(spectrum: &CliffordField) -> CliffordField {
    FourierPlan::new(&spectrum.grid().dual()).transform(spectrum, false)
}

/// Evaluate `f̂` on the tensor product of arbitrary per-axis frequency lists by
/// direct summation, one axis at a time. Output is blade-major, row-major
/// over the tensor nodes (axis 1 slowest).
pub fn cft_tensor(f: &CliffordField, axes: &[Vec<f64>]) -> Vec<Complex64> {
    let g = f.grid();
    let dim = g.dim();
    assert_eq!(axes.len(), dim, "one frequency list per axis");
    let n = g.points();
    let x = g.axis();
    let norm = g.spacing() / (2.0 * PI).sqrt();
    let kernels: Vec<Vec<Complex64>> = axes
        .iter()
        .map(|xi| {
            xi.iter()
                .flat_map(|&w| x.iter().map(move |&xk| Complex64::from_polar(norm, -w * xk)))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for b in 0..f.blade_count() {
        let mut cur = f.component(b).to_vec();
        // shape[a] is the current extent along axis a
        let mut shape = vec![n; dim];
        for axis in 0..dim {
            let kout = axes[axis].len();
            let outer: usize = shape[..axis].iter().product();
            let inner: usize = shape[axis + 1..].iter().product();
            let mut next = vec![Complex64::new(0.0, 0.0); outer * kout * inner];
            let ker = &kernels[axis];
            for o in 0..outer {
                for j in 0..kout {
                    let row = &ker[j * n..(j + 1) * n];
                    let dst = &mut next[(o * kout + j) * inner..(o * kout + j + 1) * inner];
                    for (k, &e) in row.iter().enumerate() {
                        let src = &cur[(o * n + k) * inner..(o * n + k + 1) * inner];
                        for (d, s) in dst.iter_mut().zip(src) {
                            *d += e * s;
                        }
                    }
                }
            }
            shape[axis] = kout;
            cur = next;
        }
        out.extend(cur);
    }
    out
}
