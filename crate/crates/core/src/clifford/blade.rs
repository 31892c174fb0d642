//! Basis blades encoded as generator bitmasks.
//!
//! Bit `j` of the mask is set when `e_{j+1}` appears in the blade; generators
//! are kept in ascending order, so a mask identifies a blade uniquely.

use crate::error::{Error, Result};

/// Largest dimension the bitmask representation is used for.
pub const MAX_DIM: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BladeIndex {
    dim: usize,
    mask: usize,
}

impl BladeIndex {
    pub fn new(dim: usize, mask: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::invalid(format!("dimension {dim} outside 1..={MAX_DIM}")));
        }
        if mask >= 1 << dim {
            return Err(Error::invalid(format!(
                "blade mask {mask:#b} does not fit dimension {dim}"
            )));
        }
        Ok(Self { dim, mask })
    }

    pub fn scalar(dim: usize) -> Self {
        Self { dim, mask: 0 }
    }

    /// The generator `e_i` (1-based, as in `e_1 … e_n`).
    pub fn generator(dim: usize, i: usize) -> Result<Self> {
        if i == 0 || i > dim {
            return Err(Error::invalid(format!("generator e{i} not in dimension {dim}")));
        }
        Self::new(dim, 1 << (i - 1))
    }

    pub fn dim(self) -> usize {
        self.dim
    }

    pub fn mask(self) -> usize {
        self.mask
    }

    pub fn grade(self) -> usize {
        self.mask.count_ones() as usize
    }

    /// Human-readable label, e.g. `1`, `e2`, `e13`.
    pub fn label(self) -> String {
        blade_label(self.mask)
    }
}

pub(crate) fn blade_label(mask: usize) -> String {
    if mask == 0 {
        return "1".to_string();
    }
    let mut s = String::from("e");
    for j in 0..usize::BITS as usize {
        if mask & (1 << j) != 0 {
            s.push_str(&(j + 1).to_string());
        }
    }
    s
}

/// Sign of `e_a e_b` relative to `e_{a xor b}` for the negative-definite
/// metric `e_i² = −1`.
#[inline]
pub(crate) const fn product_sign(a: usize, b: usize) -> f64 {
    // transpositions needed to merge the two ascending generator lists
    let mut swaps = 0u32;
    let mut t = a >> 1;
    while t != 0 {
        swaps += (t & b).count_ones();
        t >>= 1;
    }
    // each shared generator contracts to e_i e_i = −1
    let negatives = swaps + (a & b).count_ones();
    if negatives % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

const fn build_sign_table() -> [[f64; 8]; 8] {
    let mut table = [[0.0; 8]; 8];
    let mut a = 0;
    while a < 8 {
        let mut b = 0;
        while b < 8 {
            table[a][b] = product_sign(a, b);
            b += 1;
        }
        a += 1;
    }
    table
}

/// Precomputed signs for every blade pair in dimensions up to 3.
pub(crate) static SIGN_TABLE: [[f64; 8]; 8] = build_sign_table();

#[inline]
pub(crate) fn sign(a: usize, b: usize) -> f64 {
    if a < 8 && b < 8 {
        SIGN_TABLE[a][b]
    } else {
        product_sign(a, b)
    }
}

/// Product of two basis blades: `e_a e_b = sign · e_{a xor b}`.
pub fn blade_product(a: BladeIndex, b: BladeIndex) -> Result<(i8, BladeIndex)> {
    if a.dim != b.dim {
        return Err(Error::invalid(format!(
            "blade dimension mismatch: {} vs {}",
            a.dim, b.dim
        )));
    }
    let s = if sign(a.mask, b.mask) > 0.0 { 1 } else { -1 };
    Ok((
        s,
        BladeIndex {
            dim: a.dim,
            mask: a.mask ^ b.mask,
        },
    ))
}

/// Sign factors of the grade involutions on a blade of the given grade.
pub(crate) fn main_sign(grade: usize) -> f64 {
    if grade % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

pub(crate) fn reversion_sign(grade: usize) -> f64 {
    if (grade * grade.saturating_sub(1) / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

pub(crate) fn conjugation_sign(grade: usize) -> f64 {
    if (grade * (grade + 1) / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}
