use num_complex::Complex64;
use rayon::prelude::*;

use crate::clifford::{blade_label, gp_into, involute_in_place, Involution, Multivector};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::sum::{pairwise_sum, pairwise_sum_by, pairwise_sum_complex};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Which variable a field is sampled in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Space,
    Frequency,
}

impl Domain {
    pub fn as_str(&self) -> &'static str {
        match self {
            Domain::Space => "space",
            Domain::Frequency => "frequency",
        }
    }
}

/// Scalar weights applied node by node.
pub enum Weight<'a> {
    /// `x_k`, 1-based axis.
    Coordinate(usize),
    /// `ln|x|`.
    LnRadius,
    Custom(&'a (dyn Fn(&[f64]) -> f64 + Sync)),
}

impl Weight<'_> {
    fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Weight::Coordinate(k) => x[k - 1],
            Weight::LnRadius => 0.5 * x.iter().map(|v| v * v).sum::<f64>().ln(),
            Weight::Custom(w) => w(x),
        }
    }
}

/// Multivector-valued function sampled on a [`GridSpec`].
///
/// Storage is blade-major: coefficient `blade` of node `idx` lives at
/// `data[blade * node_count + idx]`, so each blade is a contiguous scalar
/// field ready for FFT.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordField {
    grid: GridSpec,
    domain: Domain,
    data: Vec<Complex64>,
}

impl CliffordField {
    pub fn zeros(grid: GridSpec, domain: Domain) -> Self {
        let len = (1 << grid.dim()) * grid.node_count();
        Self {
            grid,
            domain,
            data: vec![ZERO; len],
        }
    }

    /// Wrap blade-major coefficient data.
    pub fn from_components(grid: GridSpec, domain: Domain, data: Vec<Complex64>) -> Result<Self> {
        let len = (1 << grid.dim()) * grid.node_count();
        if data.len() != len {
            return Err(Error::invalid(format!(
                "expected {len} coefficients, got {}",
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            let mut x = vec![0.0; grid.dim()];
            grid.coords(i % grid.node_count(), &mut x);
            return Err(Error::Sampling { node: x });
        }
        Ok(Self { grid, domain, data })
    }

    pub(crate) fn from_components_unchecked(
        grid: GridSpec,
        domain: Domain,
        data: Vec<Complex64>,
    ) -> Self {
        debug_assert_eq!(data.len(), (1 << grid.dim()) * grid.node_count());
        Self { grid, domain, data }
    }

    /// Sample `f` at every spatial node.
    pub fn sample<F>(grid: GridSpec, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Multivector + Sync,
    {
        Self::sample_in(grid, Domain::Space, f)
    }

    pub fn sample_in<F>(grid: GridSpec, domain: Domain, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Multivector + Sync,
    {
        let n = grid.dim();
        let nodes = grid.node_count();
        let values: Vec<Multivector> = (0..nodes)
            .into_par_iter()
            .map(|idx| {
                let mut x = [0.0; 3];
                grid.coords(idx, &mut x[..n]);
                f(&x[..n])
            })
            .collect();
        let mut data = vec![ZERO; (1 << n) * nodes];
        for (idx, v) in values.iter().enumerate() {
            if v.dim() != n {
                return Err(Error::invalid(format!(
                    "sampled value has dimension {}, grid has {n}",
                    v.dim()
                )));
            }
            if !v.is_finite() {
                let mut x = vec![0.0; n];
                grid.coords(idx, &mut x);
                return Err(Error::Sampling { node: x });
            }
            for (b, c) in v.coeffs().iter().enumerate() {
                data[b * nodes + idx] = *c;
            }
        }
        Ok(Self { grid, domain, data })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn blade_count(&self) -> usize {
        1 << self.grid.dim()
    }

    pub fn node_count(&self) -> usize {
        self.grid.node_count()
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    pub fn component(&self, blade: usize) -> &[Complex64] {
        let m = self.node_count();
        &self.data[blade * m..(blade + 1) * m]
    }

    pub fn value(&self, idx: usize) -> Multivector {
        let m = self.node_count();
        let mut v = Multivector::zero(self.dim());
        for (b, c) in v.coeffs_mut().iter_mut().enumerate() {
            *c = self.data[b * m + idx];
        }
        v
    }

    pub fn set_value(&mut self, idx: usize, v: &Multivector) {
        let m = self.node_count();
        for (b, c) in v.coeffs().iter().enumerate() {
            self.data[b * m + idx] = *c;
        }
    }

    pub fn coords(&self, idx: usize) -> Vec<f64> {
        let mut x = vec![0.0; self.dim()];
        self.grid.coords(idx, &mut x);
        x
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if !self.grid.same_lattice(&other.grid) || self.domain != other.domain {
            return Err(Error::invalid(format!(
                "field grids differ: {:?}/{} vs {:?}/{}",
                self.grid,
                self.domain.as_str(),
                other.grid,
                other.domain.as_str()
            )));
        }
        Ok(())
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> Self {
        let c = c.into();
        Self {
            grid: self.grid,
            domain: self.domain,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    /// `α·self + β·other`.
    pub fn combine(&self, alpha: Complex64, other: &Self, beta: Complex64) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            grid: self.grid,
            domain: self.domain,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| alpha * a + beta * b)
                .collect(),
        })
    }

    /// Node-wise `c · f(x)`.
    pub fn left_mul(&self, c: &Multivector) -> Result<Self> {
        self.mul_const(c, true)
    }

    /// Node-wise `f(x) · c`.
    pub fn right_mul(&self, c: &Multivector) -> Result<Self> {
        self.mul_const(c, false)
    }

    fn mul_const(&self, c: &Multivector, left: bool) -> Result<Self> {
        if c.dim() != self.dim() {
            return Err(Error::invalid("constant multivector dimension mismatch"));
        }
        let m = self.node_count();
        let nb = self.blade_count();
        let mut out = Self::zeros(self.grid, self.domain);
        let mut v = vec![ZERO; nb];
        let mut w = vec![ZERO; nb];
        for idx in 0..m {
            for b in 0..nb {
                v[b] = self.data[b * m + idx];
            }
            if left {
                gp_into(c.coeffs(), &v, &mut w);
            } else {
                gp_into(&v, c.coeffs(), &mut w);
            }
            for b in 0..nb {
                out.data[b * m + idx] = w[b];
            }
        }
        Ok(out)
    }

    /// Node-wise Hermitian conjugate `f(x)†`.
    pub fn dagger(&self) -> Self {
        let m = self.node_count();
        let mut out = self.clone();
        let mut v = vec![ZERO; self.blade_count()];
        for idx in 0..m {
            for (b, c) in v.iter_mut().enumerate() {
                *c = out.data[b * m + idx];
            }
            involute_in_place(&mut v, Involution::Hermitian);
            for (b, c) in v.iter().enumerate() {
                out.data[b * m + idx] = *c;
            }
        }
        out
    }

    /// `|f(x)|²` at every node.
    pub fn module_sqr_density(&self) -> Vec<f64> {
        let m = self.node_count();
        (0..m)
            .map(|idx| {
                (0..self.blade_count())
                    .map(|b| self.data[b * m + idx].norm_sqr())
                    .sum()
            })
            .collect()
    }

    /// `⟨f, g⟩ = hⁿ Σ f(x)† g(x)`, Clifford-valued.
    pub fn inner_product(&self, other: &Self) -> Result<Multivector> {
        self.check_compatible(other)?;
        let nb = self.blade_count();
        let m = self.node_count();
        // Σ_x conj(f_a) g_b for every blade pair, then fold in the algebra.
        let pairs: Vec<Complex64> = (0..nb * nb)
            .into_par_iter()
            .map(|ab| {
                let (a, b) = (ab / nb, ab % nb);
                let fa = &self.data[a * m..(a + 1) * m];
                let gb = &other.data[b * m..(b + 1) * m];
                let prod: Vec<Complex64> = fa.iter().zip(gb).map(|(x, y)| x.conj() * y).collect();
                pairwise_sum_complex(&prod)
            })
            .collect();
        let mut out = Multivector::zero(self.dim());
        let mut ea = vec![ZERO; nb];
        let mut eb = vec![ZERO; nb];
        let mut prod = vec![ZERO; nb];
        let vol = self.grid.cell_volume();
        for a in 0..nb {
            ea.iter_mut().for_each(|c| *c = ZERO);
            ea[a] = Complex64::new(1.0, 0.0);
            involute_in_place(&mut ea, Involution::Conjugation);
            for b in 0..nb {
                eb.iter_mut().for_each(|c| *c = ZERO);
                eb[b] = Complex64::new(1.0, 0.0);
                gp_into(&ea, &eb, &mut prod);
                let s = pairs[a * nb + b] * vol;
                out.coeffs_mut()[a ^ b] += prod[a ^ b] * s;
            }
        }
        Ok(out)
    }

    pub fn l2_norm_sqr(&self) -> f64 {
        let m = self.node_count();
        let nb = self.blade_count();
        self.grid.cell_volume()
            * pairwise_sum_by(m, &|idx| {
                (0..nb).map(|b| self.data[b * m + idx].norm_sqr()).sum()
            })
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sqr().sqrt()
    }

    pub fn l1_norm(&self) -> f64 {
        let m = self.node_count();
        let nb = self.blade_count();
        self.grid.cell_volume()
            * pairwise_sum_by(m, &|idx| {
                (0..nb)
                    .map(|b| self.data[b * m + idx].norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
    }

    /// Multiply the value at every node by the scalar `w(x)`.
    pub fn weight_pointwise(&self, w: &Weight) -> Result<Self> {
        if let Weight::Coordinate(k) = w {
            if *k == 0 || *k > self.dim() {
                return Err(Error::invalid(format!(
                    "axis {k} out of range 1..={}",
                    self.dim()
                )));
            }
        }
        let m = self.node_count();
        let weights: Vec<f64> = (0..m)
            .map(|idx| {
                let mut x = [0.0; 3];
                self.grid.coords(idx, &mut x[..self.dim()]);
                w.eval(&x[..self.dim()])
            })
            .collect();
        let mut out = self.clone();
        for chunk in out.data.chunks_mut(m) {
            for (c, wi) in chunk.iter_mut().zip(&weights) {
                *c *= wi;
            }
        }
        Ok(out)
    }

    /// Largest coefficient-wise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `‖self − other‖₂ / ‖other‖₂`.
    pub fn relative_l2_error(&self, reference: &Self) -> Result<f64> {
        let diff = self.combine(
            Complex64::new(1.0, 0.0),
            reference,
            Complex64::new(-1.0, 0.0),
        )?;
        Ok(diff.l2_norm() / reference.l2_norm())
    }

    /// Fraction of `‖f‖₂²` carried by the outermost layer of nodes.
    pub fn tail_mass(&self) -> f64 {
        let density = self.module_sqr_density();
        let total = pairwise_sum(&density);
        if total == 0.0 {
            return 0.0;
        }
        let n = self.dim();
        let np = self.grid.points();
        let mut k = [0usize; 3];
        let edge: Vec<f64> = density
            .iter()
            .enumerate()
            .map(|(idx, d)| {
                self.grid.multi_index(idx, &mut k[..n]);
                if k[..n].iter().any(|&ki| ki == 0 || ki == np - 1) {
                    *d
                } else {
                    0.0
                }
            })
            .collect();
        pairwise_sum(&edge) / total
    }

    /// Zero-pad to `factor` times the points per axis, keeping the spacing
    /// and the node positions.
    pub fn pad(&self, factor: usize) -> Self {
        let big = self.grid.padded(factor);
        let mut out = Self::zeros(big, self.domain);
        let off = (big.points() - self.grid.points()) / 2;
        let n = self.dim();
        let (m, mb) = (self.node_count(), big.node_count());
        let mut k = [0usize; 3];
        for idx in 0..m {
            self.grid.multi_index(idx, &mut k[..n]);
            k[..n].iter_mut().for_each(|ki| *ki += off);
            let j = big.flat_index(&k[..n]);
            for b in 0..self.blade_count() {
                out.data[b * mb + j] = self.data[b * m + idx];
            }
        }
        out
    }

    /// Inverse of [`pad`](Self::pad): keep the central `grid.points()` nodes.
    pub fn crop(&self, grid: GridSpec) -> Result<Self> {
        if grid.dim() != self.dim()
            || grid.points() > self.grid.points()
            || (self.grid.points() - grid.points()) % 2 != 0
            || (grid.spacing() - self.grid.spacing()).abs() > 1e-12 * grid.spacing()
        {
            return Err(Error::invalid("crop target is not a centred sub-lattice"));
        }
        let off = (self.grid.points() - grid.points()) / 2;
        let n = self.dim();
        let (m, mb) = (grid.node_count(), self.node_count());
        let mut out = Self::zeros(grid, self.domain);
        let mut k = [0usize; 3];
        for idx in 0..m {
            grid.multi_index(idx, &mut k[..n]);
            k[..n].iter_mut().for_each(|ki| *ki += off);
            let j = self.grid.flat_index(&k[..n]);
            for b in 0..self.blade_count() {
                out.data[b * m + idx] = self.data[b * mb + j];
            }
        }
        Ok(out)
    }

    /// Multilinear interpolation at an arbitrary point; zero outside the
    /// hull of the nodes.
    pub fn interpolate(&self, x: &[f64], out: &mut [Complex64]) {
        out.iter_mut().for_each(|c| *c = ZERO);
        let n = self.dim();
        let np = self.grid.points();
        let h = self.grid.spacing();
        let mut base = [0usize; 3];
        let mut frac = [0.0; 3];
        for a in 0..n {
            let t = x[a] / h + 0.5 * np as f64 - 0.5;
            if !(t >= 0.0 && t <= (np - 1) as f64) {
                return;
            }
            let i = (t.floor() as usize).min(np - 2);
            base[a] = i;
            frac[a] = t - i as f64;
        }
        let m = self.node_count();
        let mut k = [0usize; 3];
        for corner in 0..(1usize << n) {
            let mut w = 1.0;
            for a in 0..n {
                if corner >> a & 1 == 1 {
                    k[a] = base[a] + 1;
                    w *= frac[a];
                } else {
                    k[a] = base[a];
                    w *= 1.0 - frac[a];
                }
            }
            if w == 0.0 {
                continue;
            }
            let idx = self.grid.flat_index(&k[..n]);
            for (b, o) in out.iter_mut().enumerate() {
                *o += self.data[b * m + idx] * w;
            }
        }
    }

    /// `∂f/∂x_k` (1-based axis) by centred differences, second-order
    /// one-sided stencils at the two edge nodes.
    pub fn partial_derivative(&self, axis: usize) -> Result<Self> {
        let n = self.dim();
        if axis == 0 || axis > n {
            return Err(Error::invalid(format!("axis {axis} out of range 1..={n}")));
        }
        let np = self.grid.points();
        let h = self.grid.spacing();
        let m = self.node_count();
        let stride = np.pow((n - axis) as u32);
        let mut out = Self::zeros(self.grid, self.domain);
        for b in 0..self.blade_count() {
            let src = &self.data[b * m..(b + 1) * m];
            let dst = &mut out.data[b * m..(b + 1) * m];
            for_each_line(m, np, stride, |start| {
                let at = |k: usize| src[start + k * stride];
                for k in 0..np {
                    dst[start + k * stride] = if np < 3 {
                        (at(1) - at(0)) / h
                    } else if k == 0 {
                        (at(0) * -3.0 + at(1) * 4.0 - at(2)) / (2.0 * h)
                    } else if k == np - 1 {
                        (at(k) * 3.0 - at(k - 1) * 4.0 + at(k - 2)) / (2.0 * h)
                    } else {
                        (at(k + 1) - at(k - 1)) / (2.0 * h)
                    };
                }
            });
        }
        Ok(out)
    }

    /// Label of each blade in storage order (`1`, `e1`, `e2`, `e12`, ...).
    pub fn blade_labels(&self) -> Vec<String> {
        (0..self.blade_count()).map(|b| blade_label(b)).collect()
    }
}

/// Call `f(start)` for every grid line along an axis with the given stride.
pub(crate) fn for_each_line(nodes: usize, points: usize, stride: usize, mut f: impl FnMut(usize)) {
    let block = points * stride;
    for outer in (0..nodes).step_by(block) {
        for inner in 0..stride {
            f(outer + inner);
        }
    }
}
