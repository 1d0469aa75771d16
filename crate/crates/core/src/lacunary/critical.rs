//! Critical lacunarity constants: the root above 1 of
//! `x^(l-1) = x^(l-2) + ... + x + 1`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub const MAX_BISECTION_STEPS: usize = 200;

/// `f(x) = x^(l-1) - (x^(l-2) + ... + 1)` by Horner's rule.
pub fn critical_polynomial(l: u32, x: f64) -> f64 {
    // coefficients from the top: 1, -1, -1, ..., -1
    let mut acc = 1.0;
    for _ in 0..l.saturating_sub(1) {
        acc = acc * x - 1.0;
    }
    acc
}

/// Returns the critical constant `λ_l` for `l ≥ 2`.
///
/// For `l = 2` the equation reads `x = 1`, so the result is exactly 1.
/// Otherwise bisection runs on `[1 + tol, 2]`, where the polynomial changes
/// sign, until the bracket collapses or `|f| < tol` with a bracket narrower
/// than `tol`.
pub fn critical_lambda(l: u32, tol: f64) -> Result<f64> {
    if l < 2 {
        return Err(Error::InvalidOrder { got: l as i64, min: 2 });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    if l == 2 {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (1.0 + tol, 2.0);
    for _ in 0..MAX_BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if critical_polynomial(l, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // both endpoints are within one ulp; pick the one with smaller residual
    let root = if critical_polynomial(l, lo).abs() <= critical_polynomial(l, hi).abs() { lo } else { hi };
    // Horner's rounding error is bounded by 2l·ε·Σ x^i
    let magnitude: f64 = (0..l).map(|i| root.powi(i as i32)).sum();
    let noise = 2.0 * l as f64 * f64::EPSILON * magnitude;
    if critical_polynomial(l, root).abs() > tol.max(noise) {
        return Err(Error::Precondition(format!(
            "bisection for l = {l} did not reach tolerance {tol}"
        )));
    }
    Ok(root)
}

/// Fixed-point bracket `lo / 2^bits ≤ λ_l ≤ hi / 2^bits` with `hi - lo ≤ 1`,
/// computed in exact integer arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaBracket {
    pub order: u32,
    pub bits: u32,
    pub lo: BigInt,
    pub hi: BigInt,
}

impl LambdaBracket {
    pub fn new(l: u32, bits: u32) -> Result<Self> {
        if l < 2 {
            return Err(Error::InvalidOrder { got: l as i64, min: 2 });
        }
        let one = BigInt::one() << bits;
        if l == 2 {
            return Ok(Self { order: l, bits, lo: one.clone(), hi: one });
        }
        // sign of 2^(bits (l-1)) f(X / 2^bits); Horner with
        // acc_i = acc_{i-1} X - 2^(bits i)
        let positive = |x: &BigInt| -> bool {
            let mut acc = BigInt::one();
            for i in 1..l {
                acc = acc * x - (BigInt::one() << (bits as usize * i as usize));
            }
            acc > BigInt::zero()
        };
        let mut lo = one.clone();
        let mut hi = one << 1;
        while &hi - &lo > BigInt::one() {
            let mid: BigInt = (&lo + &hi) >> 1;
            if positive(&mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(Self { order: l, bits, lo, hi })
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}
