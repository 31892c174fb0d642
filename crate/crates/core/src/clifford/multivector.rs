use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use smallvec::SmallVec;

use super::blade::{self, BladeIndex, MAX_DIM};
use crate::error::{Error, Result};

pub(crate) type Coeffs = SmallVec<[Complex64; 8]>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Relative threshold below which non-scalar blades count as absent.
pub const EPS_SCALAR: f64 = 1e-10;

/// The four sign involutions of the algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Involution {
    /// `ẽ_A = (−1)^{|A|} e_A`
    Main,
    /// `e_A* = (−1)^{|A|(|A|−1)/2} e_A`
    Reversion,
    /// `ē_A = (−1)^{|A|(|A|+1)/2} e_A`
    Conjugation,
    /// Conjugation on the blades plus complex conjugation of coefficients.
    Hermitian,
}

/// Element of the complexified Clifford algebra `ℂₙ = ℝₙ + iℝₙ`.
///
/// Coefficients are indexed by blade bitmask; index 0 is the scalar part.
#[derive(Clone, PartialEq)]
pub struct Multivector {
    dim: usize,
    coeffs: Coeffs,
}

impl Multivector {
    pub fn zero(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension {dim} unsupported");
        Self {
            dim,
            coeffs: SmallVec::from_elem(ZERO, 1 << dim),
        }
    }

    pub fn scalar(dim: usize, value: impl Into<Complex64>) -> Self {
        let mut m = Self::zero(dim);
        m.coeffs[0] = value.into();
        m
    }

    pub fn one(dim: usize) -> Self {
        Self::scalar(dim, 1.0)
    }

    /// The basis blade `e_A` with unit coefficient.
    pub fn blade(blade: BladeIndex) -> Self {
        let mut m = Self::zero(blade.dim());
        m.coeffs[blade.mask()] = Complex64::new(1.0, 0.0);
        m
    }

    /// Generator `e_i`, 1-based.
    pub fn generator(dim: usize, i: usize) -> Self {
        Self::blade(BladeIndex::generator(dim, i).expect("generator index"))
    }

    /// Real vector `Σ x_j e_j`.
    pub fn vector(x: &[f64]) -> Self {
        let mut m = Self::zero(x.len());
        for (j, &v) in x.iter().enumerate() {
            m.coeffs[1 << j] = Complex64::new(v, 0.0);
        }
        m
    }

    pub fn from_coeffs(dim: usize, coeffs: &[Complex64]) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::invalid(format!("dimension {dim} outside 1..={MAX_DIM}")));
        }
        if coeffs.len() != 1 << dim {
            return Err(Error::invalid(format!(
                "expected {} coefficients for dimension {dim}, got {}",
                1 << dim,
                coeffs.len()
            )));
        }
        if let Some(i) = coeffs.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::invalid(format!("coefficient {i} is not finite")));
        }
        Ok(Self {
            dim,
            coeffs: coeffs.iter().copied().collect(),
        })
    }

    pub fn from_real(dim: usize, coeffs: &[f64]) -> Result<Self> {
        let c: Vec<Complex64> = coeffs.iter().map(|&r| Complex64::new(r, 0.0)).collect();
        Self::from_coeffs(dim, &c)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn get(&self, blade: BladeIndex) -> Complex64 {
        self.coeffs[blade.mask()]
    }

    pub fn scalar_part(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Projection onto blades of one grade.
    pub fn grade_part(&self, grade: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (mask, c) in self.coeffs.iter().enumerate() {
            if mask.count_ones() as usize == grade {
                out.coeffs[mask] = *c;
            }
        }
        out
    }

    /// True when every coefficient outside `grade` is exactly zero.
    pub fn is_homogeneous(&self, grade: usize) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(m, c)| m.count_ones() as usize == grade || *c == ZERO)
    }

    /// Module `|λ| = (Σ_A |λ_A|²)^{1/2}`.
    pub fn module(&self) -> f64 {
        self.module_sqr().sqrt()
    }

    pub fn module_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Module of everything except the scalar blade.
    pub fn non_scalar_module(&self) -> f64 {
        self.coeffs[1..].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Scalar up to `EPS_SCALAR` relative to the module.
    pub fn is_scalar(&self) -> bool {
        self.non_scalar_module() <= EPS_SCALAR * self.module()
    }

    pub fn involute(&self, kind: Involution) -> Self {
        let mut out = self.clone();
        involute_in_place(out.coeffs_mut(), kind);
        out
    }

    pub fn main_involution(&self) -> Self {
        self.involute(Involution::Main)
    }

    pub fn reversion(&self) -> Self {
        self.involute(Involution::Reversion)
    }

    pub fn conjugate(&self) -> Self {
        self.involute(Involution::Conjugation)
    }

    /// `λ† = ā − i b̄` for `λ = a + ib`.
    pub fn dagger(&self) -> Self {
        self.involute(Involution::Hermitian)
    }

    pub fn scale(&self, s: impl Into<Complex64>) -> Self {
        let s = s.into();
        Self {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Largest coefficient-wise distance, for tests and tolerances.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim == other.dim && self.max_abs_diff(other) <= tol
    }
}

pub(crate) fn involute_in_place(coeffs: &mut [Complex64], kind: Involution) {
    for (mask, c) in coeffs.iter_mut().enumerate() {
        let g = mask.count_ones() as usize;
        *c = match kind {
            Involution::Main => *c * blade::main_sign(g),
            Involution::Reversion => *c * blade::reversion_sign(g),
            Involution::Conjugation => *c * blade::conjugation_sign(g),
            Involution::Hermitian => c.conj() * blade::conjugation_sign(g),
        };
    }
}

/// `out = x y` on raw coefficient slices of equal length `2ⁿ`.
#[inline]
pub(crate) fn gp_into(x: &[Complex64], y: &[Complex64], out: &mut [Complex64]) {
    debug_assert!(x.len() == y.len() && y.len() == out.len());
    out.iter_mut().for_each(|c| *c = ZERO);
    for (a, &xa) in x.iter().enumerate() {
        if xa == ZERO {
            continue;
        }
        for (b, &yb) in y.iter().enumerate() {
            out[a ^ b] += xa * yb * blade::sign(a, b);
        }
    }
}

/// Geometric product with dimension checking.
pub fn geometric_product(x: &Multivector, y: &Multivector) -> Result<Multivector> {
    if x.dim != y.dim {
        return Err(Error::invalid(format!(
            "multivector dimension mismatch: {} vs {}",
            x.dim, y.dim
        )));
    }
    let mut out = Multivector::zero(x.dim);
    gp_into(&x.coeffs, &y.coeffs, &mut out.coeffs);
    Ok(out)
}

/// Split the product of two real vectors into `−⟨x,y⟩` and `x ∧ y`.
pub fn vector_product_split(x: &Multivector, y: &Multivector) -> Result<(f64, Multivector)> {
    for (name, v) in [("x", x), ("y", y)] {
        if !v.is_homogeneous(1) || !v.is_real() {
            return Err(Error::invalid(format!("{name} is not a real vector")));
        }
    }
    let xy = geometric_product(x, y)?;
    let inner: f64 = (0..x.dim)
        .map(|j| x.coeffs[1 << j].re * y.coeffs[1 << j].re)
        .sum();
    Ok((-inner, xy.grade_part(2)))
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector[{}](", self.dim)?;
        fmt::Display::fmt(self, f)?;
        write!(f, ")")
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (mask, c) in self.coeffs.iter().enumerate() {
            if *c == ZERO {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({}{:+}i)", c.re, c.im)?;
            }
            if mask != 0 {
                write!(f, "·{}", blade::blade_label(mask))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Multivector {
            dim: self.dim,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Multivector {
            dim: self.dim,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(-1.0)
    }
}

/// Geometric product. Panics on a dimension mismatch; use
/// [`geometric_product`] for the fallible form.
impl Mul for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: &Multivector) -> Multivector {
        geometric_product(self, rhs).expect("geometric product")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Multivector {
            type Output = Multivector;
            fn $m(self, rhs: Multivector) -> Multivector {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
