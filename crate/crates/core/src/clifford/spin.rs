//! Rotors, their action on vectors, and Haar quadrature on the spin group.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::multivector::{gp_into, Coeffs, Multivector};
use crate::error::{Error, Result};

/// Tolerance on `s̄ s = 1` and on even-grade support.
pub const EPS_SPIN: f64 = 1e-10;

/// Unit even real multivector; acts on vectors by `x ↦ s̄ x s`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinElement {
    rotor: Multivector,
}

impl SpinElement {
    pub fn new(rotor: Multivector) -> Result<Self> {
        if !rotor.is_real() {
            return Err(Error::invalid("rotor must have real coefficients"));
        }
        let odd: f64 = rotor
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(m, _)| m.count_ones() % 2 == 1)
            .map(|(_, c)| c.norm_sqr())
            .sum::<f64>()
            .sqrt();
        if odd > EPS_SPIN {
            return Err(Error::invalid(format!("rotor has odd-grade part of size {odd:.3e}")));
        }
        let unit = &rotor.conjugate() * &rotor;
        let defect = (&unit - &Multivector::one(rotor.dim())).module();
        if defect > EPS_SPIN {
            return Err(Error::invalid(format!("rotor fails s̄s = 1 by {defect:.3e}")));
        }
        Ok(Self { rotor })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            rotor: Multivector::one(dim),
        }
    }

    /// Product of an even number of unit vectors.
    pub fn from_unit_vectors(vectors: &[Vec<f64>]) -> Result<Self> {
        if vectors.is_empty() || vectors.len() % 2 != 0 {
            return Err(Error::invalid("need a non-empty, even number of vectors"));
        }
        let dim = vectors[0].len();
        let mut s = Multivector::one(dim);
        for v in vectors {
            if v.len() != dim {
                return Err(Error::invalid("vectors of mixed dimension"));
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > EPS_SPIN {
                return Err(Error::invalid(format!("vector norm {norm} is not 1")));
            }
            s = &s * &Multivector::vector(v);
        }
        Self::new(s)
    }

    /// `cos θ + sin θ e12`; acts on the plane as a rotation by `−2θ`.
    pub fn planar(theta: f64) -> Self {
        let mut m = Multivector::zero(2);
        m.coeffs_mut()[0] = Complex64::new(theta.cos(), 0.0);
        m.coeffs_mut()[0b11] = Complex64::new(theta.sin(), 0.0);
        Self { rotor: m }
    }

    /// Rotor `w + a e12 + b e13 + c e23` from a unit 4-vector.
    pub fn from_quaternion(q: [f64; 4]) -> Result<Self> {
        let m = Multivector::from_real(3, &[q[0], 0.0, 0.0, q[1], 0.0, q[2], q[3], 0.0])?;
        Self::new(m)
    }

    pub fn rotor(&self) -> &Multivector {
        &self.rotor
    }

    pub fn dim(&self) -> usize {
        self.rotor.dim()
    }

    /// `s̄`, which is again a spin element.
    pub fn inverse(&self) -> Self {
        Self {
            rotor: self.rotor.conjugate(),
        }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            rotor: &self.rotor * &other.rotor,
        }
    }

    /// Apply `x ↦ s̄ x s` to a plain coordinate vector.
    pub fn act_coords(&self, x: &[f64], out: &mut [f64]) {
        let r = rotation_matrix(self);
        apply_matrix(&r, self.dim(), x, out);
    }

    /// The orthogonal matrix of `x ↦ s̄ x s`, row-major.
    pub fn matrix(&self) -> Vec<f64> {
        rotation_matrix(self)
    }
}

fn rotation_matrix(s: &SpinElement) -> Vec<f64> {
    let n = s.dim();
    let sbar = s.rotor.conjugate();
    let mut tmp: Coeffs = Coeffs::from_elem(Complex64::new(0.0, 0.0), 1 << n);
    let mut out: Coeffs = tmp.clone();
    let mut r = vec![0.0; n * n];
    for j in 0..n {
        let e = Multivector::generator(n, j + 1);
        gp_into(sbar.coeffs(), e.coeffs(), &mut tmp);
        gp_into(&tmp, s.rotor.coeffs(), &mut out);
        for i in 0..n {
            r[i * n + j] = out[1 << i].re;
        }
    }
    r
}

#[inline]
pub(crate) fn apply_matrix(r: &[f64], n: usize, x: &[f64], out: &mut [f64]) {
    for i in 0..n {
        let mut acc = 0.0;
        for j in 0..n {
            acc += r[i * n + j] * x[j];
        }
        out[i] = acc;
    }
}

/// Rotor action `s̄ x s` on a vector multivector, projected onto grade 1
/// so that round-off in other grades does not accumulate under repeated
/// actions.
pub fn spin_act(s: &SpinElement, x: &Multivector) -> Result<Multivector> {
    if x.dim() != s.dim() {
        return Err(Error::invalid("rotor and vector dimensions differ"));
    }
    if !x.is_homogeneous(1) {
        return Err(Error::invalid("spin action expects a grade-1 argument"));
    }
    Ok((&(&s.rotor.conjugate() * x) * &s.rotor).grade_part(1))
}

/// Total Haar mass used for `Spin(n)`: the area `ω_{n−1} = 2π^{n/2}/Γ(n/2)`
/// of the unit sphere `Sⁿ⁻¹`.
pub fn haar_mass(n: usize) -> f64 {
    match n {
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => {
            // ω_{n−1} via the recursion ω_{n+1} = 2π ω_{n−1} / n
            let mut m = if n % 2 == 0 { 2.0 * PI } else { 2.0 };
            let mut k = if n % 2 == 0 { 2 } else { 1 };
            while k < n {
                m *= 2.0 * PI / k as f64;
                k += 2;
            }
            m
        }
    }
}

/// Quadrature nodes and weights for the Haar measure on `Spin(n)`.
///
/// * `n = 1`: `{+1, −1}` with unit weights (`M` is ignored).
/// * `n = 2`: `cos θ + sin θ e12` at `θ = 2πm/M`.
/// * `n = 3`: a Halton sequence pushed to the unit quaternions.
pub fn spin_sample(n: usize, m: usize) -> Result<Vec<(SpinElement, f64)>> {
    if m == 0 {
        return Err(Error::invalid("spin sample count must be at least 1"));
    }
    let mass = haar_mass(n);
    match n {
        1 => Ok(vec![
            (SpinElement::identity(1), 1.0),
            (
                SpinElement {
                    rotor: Multivector::scalar(1, -1.0),
                },
                1.0,
            ),
        ]),
        2 => Ok((0..m)
            .map(|k| (SpinElement::planar(2.0 * PI * k as f64 / m as f64), mass / m as f64))
            .collect()),
        3 => (0..m)
            .map(|k| {
                let u = [halton(k + 1, 2), halton(k + 1, 3), halton(k + 1, 5)];
                let q = shoemake(u);
                Ok((SpinElement::from_quaternion(q)?, mass / m as f64))
            })
            .collect(),
        _ => Err(Error::UnsupportedDimension(n)),
    }
}

fn halton(mut i: usize, base: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Uniform map from the unit cube to the unit 3-sphere.
fn shoemake(u: [f64; 3]) -> [f64; 4] {
    let a = (1.0 - u[0]).sqrt();
    let b = u[0].sqrt();
    let (s1, c1) = (2.0 * PI * u[1]).sin_cos();
    let (s2, c2) = (2.0 * PI * u[2]).sin_cos();
    [b * c2, a * s1, a * c1, b * s2]
}
