//! Harmonic numbers and the VC-parametrized competitive-ratio lower bound.

use std::sync::OnceLock;

use crate::error::{Error, Result};

const TABLE_LEN: usize = 1 << 12;

// Prefix sums are the partial sums of the ascending summation, so table
// entries are bit-identical to summing directly.
fn table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(TABLE_LEN);
        t.push(0.0);
        for i in 1..TABLE_LEN {
            t.push(t[i - 1] + 1.0 / i as f64);
        }
        t
    })
}

fn summed(r: usize) -> f64 {
    (1..=r).fold(0.0, |acc, i| acc + 1.0 / i as f64)
}

/// `H_r = 1 + 1/2 + ... + 1/r`, summed in ascending denominator order.
pub fn harmonic(r: usize) -> f64 {
    match table().get(r) {
        Some(&h) => h,
        None => summed(r),
    }
}

/// A harmonic number together with its order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicValue {
    pub order: usize,
    pub value: f64,
}

impl HarmonicValue {
    pub fn new(order: usize) -> Self {
        HarmonicValue {
            order,
            value: harmonic(order),
        }
    }

    /// `H_{r+1}` from `H_r` by adding one term.
    pub fn next(self) -> Self {
        let order = self.order + 1;
        HarmonicValue {
            order,
            value: self.value + 1.0 / order as f64,
        }
    }
}

/// Lower bound `H_{m - 2^z + 1}` on the competitive ratio of any fractional
/// batched algorithm against an adversary whose batches have VC-dimension at
/// least `z`. For `z = 0` this is the online bound `H_m`.
pub fn lower_bound(m: usize, z: u32) -> Result<f64> {
    let window = pow2(z).ok_or(Error::BoundUndefined { m, z })?;
    if m < window {
        return Err(Error::BoundUndefined { m, z });
    }
    Ok(harmonic(m - window + 1))
}

/// Evaluates `H_r > (H_{r-t} + H_t) / 2`.
///
/// The inequality holds for every `r >= t >= 0` with `r >= 1`; `r = t = 0`
/// compares `0 > 0` and returns false.
pub fn lemma3_holds(r: usize, t: usize) -> Result<bool> {
    if t > r {
        return Err(Error::InvalidArguments(format!(
            "expected r >= t, got r = {r}, t = {t}"
        )));
    }
    Ok(harmonic(r) > 0.5 * (harmonic(r - t) + harmonic(t)))
}

/// `2^z` if it fits in a `usize`.
pub(crate) fn pow2(z: u32) -> Option<usize> {
    1usize.checked_shl(z)
}
