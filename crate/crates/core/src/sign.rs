//! Sign vectors and the `sign(0) := +1` convention.

use alloc::vec::Vec;

/// Relative magnitude below which a projection counts as zero when a sign
/// is taken from it.
pub const ZERO_FLOOR_REL: f64 = 1e-12;

/// `+1` for `x ≥ -floor`, `-1` otherwise.
#[inline]
pub fn sign_with_floor(x: f64, floor: f64) -> i8 {
    if x >= -floor {
        1
    } else {
        -1
    }
}

/// A vector with entries in `{-1, +1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn ones(len: usize) -> Self {
        Self(alloc::vec![1; len])
    }

    /// Returns `None` if any entry is not exactly `±1`.
    pub fn new(signs: Vec<i8>) -> Option<Self> {
        signs
            .iter()
            .all(|&s| s == 1 || s == -1)
            .then_some(Self(signs))
    }

    /// Signs of `values`, treating `|x| ≤ floor` as zero (hence `+1`).
    pub fn from_values(values: &[f64], floor: f64) -> Self {
        Self(values.iter().map(|&x| sign_with_floor(x, floor)).collect())
    }

    /// `+1` where the bit of `key` is clear, `-1` where it is set. Index 0
    /// is the most significant of `len` bits, so smaller keys are
    /// lexicographically smaller sign vectors.
    pub(crate) fn from_lex_key(key: u64, len: usize) -> Self {
        Self(
            (0..len)
                .map(|j| {
                    if (key >> (len - 1 - j)) & 1 == 1 {
                        -1
                    } else {
                        1
                    }
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn get(&self, i: usize) -> i8 {
        self.0[i]
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&s| f64::from(s)).collect()
    }

    /// Indices carrying `+1`.
    pub fn positive_indices(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter_map(|(i, &s)| (s == 1).then_some(i))
            .collect()
    }

    /// Indices carrying `-1`.
    pub fn negative_indices(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter_map(|(i, &s)| (s == -1).then_some(i))
            .collect()
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|s| -s).collect())
    }

    /// Lexicographic comparison with `+1` ordered before `-1`.
    pub fn lex_cmp(&self, other: &Self) -> core::cmp::Ordering {
        // +1 < -1 is the reverse of the natural i8 order.
        other.0.cmp(&self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::cmp::Ordering;

    #[test]
    fn zero_maps_to_plus_one() {
        let s = SignVector::from_values(&[0.0, -0.0, -1e-20, -1.0, 2.0], 1e-15);
        assert_eq!(s.as_slice(), &[1, 1, 1, -1, 1]);
    }

    #[test]
    fn lex_order_puts_plus_first() {
        let a = SignVector::new(alloc::vec![1, -1]).unwrap();
        let b = SignVector::new(alloc::vec![-1, 1]).unwrap();
        assert_eq!(a.lex_cmp(&b), Ordering::Less);
        assert_eq!(SignVector::from_lex_key(0b01, 2), a);
    }

    #[test]
    fn rejects_non_sign_entries() {
        assert!(SignVector::new(alloc::vec![1, 0]).is_none());
    }
}
