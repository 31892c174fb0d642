use num_complex::Complex64;

use crate::clifford::{spin_sample, Multivector, SpinElement};
use crate::error::{Error, Result};
use crate::grid::{CliffordField, Domain, GridSpec};

/// Scale and spin quadrature for `dμ = da/a^{n+1} dV(b) ds`.
///
/// Scales carry trapezoidal weights in `ln a`, so the scale part of `dμ` at
/// `a_j` is `w_j a_j^{−n}`.
#[derive(Debug, Clone)]
pub struct CwtParams {
    dim: usize,
    scales: Vec<f64>,
    log_weights: Vec<f64>,
    spins: Vec<(SpinElement, f64)>,
    matrices: Vec<Vec<f64>>,
}

impl CwtParams {
    /// Arbitrary increasing scale list with the given spin rule.
    pub fn new(dim: usize, scales: Vec<f64>, spins: Vec<(SpinElement, f64)>) -> Result<Self> {
        if scales.is_empty() {
            return Err(Error::invalid("at least one scale is required"));
        }
        if scales.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
            return Err(Error::invalid("scales must be positive and finite"));
        }
        if scales.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("scales must be strictly increasing"));
        }
        if spins.is_empty() || spins.iter().any(|(s, _)| s.dim() != dim) {
            return Err(Error::invalid("spin samples must be nonempty and match the dimension"));
        }
        let j = scales.len();
        let ln: Vec<f64> = scales.iter().map(|a| a.ln()).collect();
        let log_weights = if j == 1 {
            vec![1.0]
        } else {
            (0..j)
                .map(|i| {
                    let lo = ln[i.saturating_sub(1)];
                    let hi = ln[(i + 1).min(j - 1)];
                    0.5 * (hi - lo)
                })
                .collect()
        };
        let matrices = spins.iter().map(|(s, _)| s.matrix()).collect();
        Ok(Self {
            dim,
            scales,
            log_weights,
            spins,
            matrices,
        })
    }

    /// `J` geometrically spaced scales over `[a_min, a_max]` and the default
    /// `M`-point Haar rule.
    pub fn geometric(dim: usize, a_min: f64, a_max: f64, j: usize, m: usize) -> Result<Self> {
        Self::new(dim, geometric_scales(a_min, a_max, j)?, spin_sample(dim, m)?)
    }

    /// Same scale range with the log step halved (`2J − 1` scales).
    pub fn refined_scales(&self) -> Result<Self> {
        let j = self.scales.len();
        if j < 2 {
            return Ok(self.clone());
        }
        let (lo, hi) = (self.scales[0], self.scales[j - 1]);
        Self::new(self.dim, geometric_scales(lo, hi, 2 * j - 1)?, self.spins.clone())
    }

    /// Same scales with the spin weights multiplied by `factor`.
    pub fn with_spin_weight_factor(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.spins.iter_mut().for_each(|(_, w)| *w *= factor);
        out
    }

    /// Same scales with another spin rule.
    pub fn with_spins(&self, spins: Vec<(SpinElement, f64)>) -> Result<Self> {
        Self::new(self.dim, self.scales.clone(), spins)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    /// Trapezoidal weights in `ln a`.
    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    pub fn spins(&self) -> &[(SpinElement, f64)] {
        &self.spins
    }

    /// Row-major matrix of `x ↦ s̄ x s` for spin sample `m`.
    pub fn rotation(&self, m: usize) -> &[f64] {
        &self.matrices[m]
    }

    pub fn scale_count(&self) -> usize {
        self.scales.len()
    }

    pub fn spin_count(&self) -> usize {
        self.spins.len()
    }

    pub fn slice_count(&self) -> usize {
        self.scales.len() * self.spins.len()
    }

    /// `(j, m)` of a slice index, scale-major.
    pub fn slice_pair(&self, slice: usize) -> (usize, usize) {
        (slice / self.spins.len(), slice % self.spins.len())
    }

    /// Weight of slice `(j, m)` in `da/a^{n+1} ds`, without the `dV(b)` cell.
    pub fn slice_weight(&self, j: usize, m: usize) -> f64 {
        self.log_weights[j] * self.scales[j].powi(-(self.dim as i32)) * self.spins[m].1
    }

    /// Weight of slice `(j, m)` in `da/a ds` (the measure of the calibration
    /// identity).
    pub fn slice_weight_da_over_a(&self, j: usize, m: usize) -> f64 {
        self.log_weights[j] * self.spins[m].1
    }

    pub fn same_quadrature(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.scales == other.scales
            && self.spins.len() == other.spins.len()
            && self
                .spins
                .iter()
                .zip(&other.spins)
                .all(|((a, wa), (b, wb))| wa == wb && a.rotor() == b.rotor())
    }
}

pub fn geometric_scales(a_min: f64, a_max: f64, j: usize) -> Result<Vec<f64>> {
    if !(a_min.is_finite() && a_min > 0.0 && a_max.is_finite() && a_max >= a_min) {
        return Err(Error::invalid(format!(
            "scale range [{a_min}, {a_max}] must satisfy 0 < a_min ≤ a_max"
        )));
    }
    if j == 0 {
        return Err(Error::invalid("at least one scale is required"));
    }
    if j == 1 {
        return Ok(vec![a_min]);
    }
    let (l0, l1) = (a_min.ln(), a_max.ln());
    Ok((0..j)
        .map(|i| match i {
            0 => a_min,
            _ if i == j - 1 => a_max,
            _ => (l0 + (l1 - l0) * i as f64 / (j - 1) as f64).exp(),
        })
        .collect())
}

/// `T_ψ[f](a_j, b, s_m)` on a scale × translation × spin lattice.
///
/// Slices are stored scale-major; each slice is a blade-major field over the
/// translation grid.
#[derive(Debug, Clone)]
pub struct CwtCoefficients {
    params: CwtParams,
    grid: GridSpec,
    data: Vec<Complex64>,
}

impl CwtCoefficients {
    pub(crate) fn from_slices(params: CwtParams, grid: GridSpec, slices: Vec<Vec<Complex64>>) -> Self {
        let len = (1 << grid.dim()) * grid.node_count();
        debug_assert!(slices.iter().all(|s| s.len() == len));
        debug_assert_eq!(slices.len(), params.slice_count());
        Self {
            params,
            grid,
            data: slices.concat(),
        }
    }

    pub fn params(&self) -> &CwtParams {
        &self.params
    }

    /// Translation grid.
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    fn slice_len(&self) -> usize {
        (1 << self.grid.dim()) * self.grid.node_count()
    }

    pub fn slice_data(&self, j: usize, m: usize) -> &[Complex64] {
        let len = self.slice_len();
        let s = j * self.params.spin_count() + m;
        &self.data[s * len..(s + 1) * len]
    }

    /// The `(a_j, ·, s_m)` slice as a field over `b`.
    pub fn slice(&self, j: usize, m: usize) -> CliffordField {
        CliffordField::from_components_unchecked(self.grid, Domain::Space, self.slice_data(j, m).to_vec())
    }

    pub fn value(&self, j: usize, node: usize, m: usize) -> Multivector {
        let nodes = self.grid.node_count();
        let s = self.slice_data(j, m);
        let mut v = Multivector::zero(self.grid.dim());
        for (b, c) in v.coeffs_mut().iter_mut().enumerate() {
            *c = s[b * nodes + node];
        }
        v
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Largest `|T|` over the lattice.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient-wise deviation from another coefficient set.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if !self.grid.same_lattice(&other.grid) || !self.params.same_quadrature(&other.params) {
            return Err(Error::invalid("coefficient lattices differ"));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}
