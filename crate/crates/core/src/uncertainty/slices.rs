use num_complex::Complex64;

use crate::grid::GridSpec;
use crate::sum::pairwise_sum;
use crate::wavelet::SpectralCwt;

/// `Σ_slices w_{j,m} op(|X_{j,m}|²)` over per-slice data `X` on `grid`,
/// together with the weighted fraction of `|X|²` on the outermost node layer.
pub(crate) fn weighted_slice_sum(
    engine: &SpectralCwt,
    grid: &GridSpec,
    data: impl Fn(usize, usize) -> Vec<Complex64> + Sync,
    op: impl Fn(&[f64]) -> f64 + Sync,
) -> (f64, f64) {
    let (v, tail) = weighted_slice_sums(engine, grid, data, |d| vec![op(d)]);
    (v[0], tail)
}

/// [`weighted_slice_sum`] for several functionals of the same slices.
pub(crate) fn weighted_slice_sums(
    engine: &SpectralCwt,
    grid: &GridSpec,
    data: impl Fn(usize, usize) -> Vec<Complex64> + Sync,
    op: impl Fn(&[f64]) -> Vec<f64> + Sync,
) -> (Vec<f64>, f64) {
    let params = engine.params();
    let blades = 1usize << grid.dim();
    let parts = engine.map_slices(|j, m| {
        let density = module_sqr(&data(j, m), blades);
        let (edge, total) = edge_energy(grid, &density);
        let w = params.slice_weight(j, m);
        let mut v: Vec<f64> = op(&density).into_iter().map(|x| w * x).collect();
        v.extend([w * edge, w * total]);
        v
    });
    let width = parts.first().map_or(2, Vec::len);
    let sum = |k: usize| pairwise_sum(&parts.iter().map(|p| p[k]).collect::<Vec<_>>());
    let (edge, total) = (sum(width - 2), sum(width - 1));
    let values = (0..width - 2).map(sum).collect();
    (values, if total > 0.0 { edge / total } else { 0.0 })
}

/// `|X|²` per node from blade-major data.
pub(crate) fn module_sqr(data: &[Complex64], blades: usize) -> Vec<f64> {
    let nodes = data.len() / blades;
    (0..nodes)
        .map(|idx| (0..blades).map(|b| data[b * nodes + idx].norm_sqr()).sum())
        .collect()
}

/// Energy on the outermost node layer and in total (unnormalized sums).
pub(crate) fn edge_energy(grid: &GridSpec, density: &[f64]) -> (f64, f64) {
    let n = grid.dim();
    let np = grid.points();
    let mut k = [0usize; 3];
    let edge: Vec<f64> = density
        .iter()
        .enumerate()
        .map(|(idx, d)| {
            grid.multi_index(idx, &mut k[..n]);
            if k[..n].iter().any(|&ki| ki == 0 || ki == np - 1) {
                *d
            } else {
                0.0
            }
        })
        .collect();
    (pairwise_sum(&edge), pairwise_sum(density))
}
