use crate::error::{Error, Result};

/// `φ(t) = Γ′(t)/Γ(t)` for `t > 0`.
///
/// Shifts the argument up to `t ≥ 10` with `φ(t) = φ(t + 1) − 1/t`, then sums
/// the asymptotic series `ln t − 1/(2t) − Σ B₂ₖ/(2k t²ᵏ)`.
pub fn digamma(t: f64) -> Result<f64> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::Domain(format!("digamma requires t > 0, got {t}")));
    }
    let mut x = t;
    let mut shift = 0.0;
    while x < 10.0 {
        shift -= 1.0 / x;
        x += 1.0;
    }
    // B₂ₖ/(2k) for k = 1..7
    const C: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 120.0,
        1.0 / 252.0,
        -1.0 / 240.0,
        1.0 / 132.0,
        -691.0 / 32760.0,
        1.0 / 12.0,
    ];
    let inv2 = 1.0 / (x * x);
    let mut series = 0.0;
    for c in C.iter().rev() {
        series = (series + c) * inv2;
    }
    Ok(shift + x.ln() - 0.5 / x - series)
}
