//! Univariate dispersion: `d` (mean absolute deviation about the mean),
//! `s²`, LAD (mean absolute deviation about the median), and the
//! combinatorial facts tying `d` to the cut norm of the centered sample.
//!
//! For a centered vector `x`, `n·d = Σ|xᵢ| = 2·max_S Σ_{i∈S} xᵢ`, the
//! maximum being attained at `S = {i : xᵢ ≥ 0}`. Equivalently `d` is the
//! maximum of `x'u/n` over sign vectors `u`, which is why a single point
//! can never carry more than half of `d`.

use alloc::vec::Vec;

use crate::sign::SignVector;
use crate::{Error, Result};

/// Relative tolerance for `|Σ xᵢ| ≤ tol · Σ |xᵢ|`.
pub const CENTERING_TOLERANCE: f64 = 1e-10;

/// Slack used to flag a heavyweight element (`RC_d = 0.5`).
pub const HEAVYWEIGHT_TOLERANCE: f64 = 1e-10;

/// A nonempty list of finite observations.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(i) = values.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    /// Midpoint of the two middle order statistics when `n` is even.
    pub fn median(&self) -> f64 {
        let mut sorted = self.values.clone();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        if n % 2 == 1 {
            sorted[n / 2]
        } else {
            0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
        }
    }
}

impl TryFrom<Vec<f64>> for Sample {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Sample::new(values)
    }
}

/// A vector whose entries sum to zero (relative to their `ℓ1` mass).
#[derive(Debug, Clone, PartialEq)]
pub struct CenteredVector {
    entries: Vec<f64>,
}

impl CenteredVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(entries, CENTERING_TOLERANCE)
    }

    pub fn with_tolerance(entries: Vec<f64>, tolerance: f64) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(i) = entries.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        let sum: f64 = entries.iter().sum();
        let mass: f64 = entries.iter().map(|x| x.abs()).sum();
        let bound = if mass == 0.0 { tolerance } else { tolerance * mass };
        if sum.abs() > bound {
            return Err(Error::NotCentered { sum });
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `x = y − ȳ·1`.
pub fn center(sample: &Sample) -> CenteredVector {
    let mean = sample.mean();
    CenteredVector {
        entries: sample.values().iter().map(|y| y - mean).collect(),
    }
}

/// `d = Σ|yᵢ − ȳ| / n`.
pub fn mad_mean(sample: &Sample) -> f64 {
    let mean = sample.mean();
    sample.values().iter().map(|y| (y - mean).abs()).sum::<f64>() / sample.len() as f64
}

/// Population variance (divisor `n`) and its square root.
pub fn variance_and_std(sample: &Sample) -> (f64, f64) {
    let mean = sample.mean();
    let s2 = sample
        .values()
        .iter()
        .map(|y| (y - mean) * (y - mean))
        .sum::<f64>()
        / sample.len() as f64;
    (s2, libm::sqrt(s2))
}

/// LAD `= Σ|yᵢ − median| / n`.
pub fn lad(sample: &Sample) -> f64 {
    let median = sample.median();
    sample.values().iter().map(|y| (y - median).abs()).sum::<f64>() / sample.len() as f64
}

/// Cut norm of a centered vector together with its maximizing subset.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorCutNorm {
    pub value: f64,
    /// `{i : xᵢ ≥ 0}`
    pub subset: Vec<usize>,
}

/// `max_S Σ_{i∈S} xᵢ`, attained at `S = {i : xᵢ ≥ 0}`.
pub fn cut_norm_vec(x: &CenteredVector) -> VectorCutNorm {
    let subset: Vec<usize> = x
        .entries()
        .iter()
        .enumerate()
        .filter_map(|(i, &v)| (v >= 0.0).then_some(i))
        .collect();
    let value = subset.iter().map(|&i| x.entries()[i]).sum();
    VectorCutNorm { value, subset }
}

/// `max_{u∈{±1}ⁿ} x'u / n = 2‖x‖_□ / n`, with the maximizing sign vector.
pub fn gain_d(x: &CenteredVector) -> (f64, SignVector) {
    let cut = cut_norm_vec(x);
    let u = SignVector::from_values(x.entries(), 0.0);
    (2.0 * cut.value / x.len() as f64, u)
}

/// `max_{u∈{±1}ⁿ} (y − median·1)'u / n`, which equals LAD.
pub fn gain_lad(sample: &Sample) -> f64 {
    let median = sample.median();
    // u = sign(y − median) attains the maximum.
    sample.values().iter().map(|y| (y - median).abs()).sum::<f64>() / sample.len() as f64
}

/// `max_{‖u‖₂=1} (y − ȳ1)'u / √n = ‖y − ȳ1‖₂ / √n`, which equals `s`.
pub fn gain_s(sample: &Sample) -> f64 {
    let x = center(sample);
    let norm = libm::sqrt(x.entries().iter().map(|v| v * v).sum::<f64>());
    norm / libm::sqrt(sample.len() as f64)
}

/// All three dispersions with per-element relative contributions.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionReport {
    pub n: usize,
    pub mean: f64,
    pub median: f64,
    pub d: f64,
    pub s: f64,
    pub s2: f64,
    pub lad: f64,
    pub rc_d: Vec<f64>,
    pub rc_s2: Vec<f64>,
    pub rc_lad: Vec<f64>,
    /// Elements with `RC_d = 0.5`, i.e. `|yᵢ − ȳ| = n·d/2`.
    pub heavyweight_indices: Vec<usize>,
    /// Zero dispersion; the contribution lists are left empty.
    pub degenerate: bool,
}

pub fn relative_contributions(sample: &Sample) -> DispersionReport {
    let n = sample.len();
    let nf = n as f64;
    let mean = sample.mean();
    let median = sample.median();
    let d = mad_mean(sample);
    let (s2, s) = variance_and_std(sample);
    let lad_value = lad(sample);

    let mut report = DispersionReport {
        n,
        mean,
        median,
        d,
        s,
        s2,
        lad: lad_value,
        rc_d: Vec::new(),
        rc_s2: Vec::new(),
        rc_lad: Vec::new(),
        heavyweight_indices: Vec::new(),
        degenerate: d == 0.0 || s2 == 0.0 || lad_value == 0.0,
    };
    if report.degenerate {
        return report;
    }

    let ys = sample.values();
    report.rc_d = ys.iter().map(|y| (y - mean).abs() / (nf * d)).collect();
    report.rc_s2 = ys.iter().map(|y| (y - mean) * (y - mean) / (nf * s2)).collect();
    report.rc_lad = ys.iter().map(|y| (y - median).abs() / (nf * lad_value)).collect();
    report.heavyweight_indices = report
        .rc_d
        .iter()
        .enumerate()
        .filter_map(|(i, &rc)| ((rc - 0.5).abs() <= HEAVYWEIGHT_TOLERANCE).then_some(i))
        .collect();
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn sample(v: &[f64]) -> Sample {
        Sample::new(v.to_vec()).unwrap()
    }

    /// Brute force over every subset of indices.
    fn brute_cut(x: &[f64]) -> f64 {
        (0u32..1 << x.len())
            .map(|mask| {
                x.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, v)| v)
                    .sum::<f64>()
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Brute force over every sign vector of `x'u / n`.
    fn brute_sign_gain(x: &[f64]) -> f64 {
        (0u32..1 << x.len())
            .map(|mask| {
                x.iter()
                    .enumerate()
                    .map(|(i, v)| if mask >> i & 1 == 1 { -v } else { *v })
                    .sum::<f64>()
                    / x.len() as f64
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn empty_and_non_finite_rejected() {
        assert_eq!(Sample::new(vec![]), Err(Error::EmptySample));
        assert_eq!(Sample::new(vec![1.0, f64::NAN]), Err(Error::NonFinite(1)));
    }

    #[test]
    fn statistics_of_1_2_3_6() {
        let s = sample(&[1.0, 2.0, 3.0, 6.0]);
        assert_eq!(mad_mean(&s), 1.5);
        assert_eq!(variance_and_std(&s).0, 3.5);
        assert_eq!(s.median(), 2.5);
        assert_eq!(lad(&s), 1.5);
        assert!((gain_s(&s) - libm::sqrt(3.5)).abs() < 1e-15);
        assert_eq!(gain_lad(&s), 1.5);
        // brute-force oracle for the LAD gain
        let shifted: Vec<f64> = s.values().iter().map(|y| y - 2.5).collect();
        assert_eq!(brute_sign_gain(&shifted), 1.5);
    }

    #[test]
    fn statistics_of_0_0_0_4() {
        let s = sample(&[0.0, 0.0, 0.0, 4.0]);
        assert_eq!(variance_and_std(&s).0, 3.0);
        assert_eq!(s.median(), 0.0);
        assert_eq!(lad(&s), 1.0);
        assert_eq!(gain_lad(&s), 1.0);
        assert_eq!(brute_sign_gain(s.values()), 1.0);
        assert!((gain_s(&s) - libm::sqrt(3.0)).abs() < 1e-15);
    }

    #[test]
    fn constant_sample_is_degenerate() {
        let s = sample(&[2.5; 5]);
        assert_eq!(mad_mean(&s), 0.0);
        assert_eq!(variance_and_std(&s), (0.0, 0.0));
        assert_eq!(lad(&s), 0.0);
        assert_eq!(gain_s(&s), 0.0);
        assert_eq!(gain_lad(&s), 0.0);
        assert_eq!(center(&s).entries(), &[0.0; 5]);
        let (g, _) = gain_d(&center(&s));
        assert_eq!(g, 0.0);
        let r = relative_contributions(&s);
        assert!(r.degenerate);
        assert!(r.rc_d.is_empty() && r.rc_s2.is_empty() && r.rc_lad.is_empty());
    }

    #[test]
    fn cut_norm_and_gain_on_centered_1_2_3_6() {
        let x = center(&sample(&[1.0, 2.0, 3.0, 6.0]));
        assert_eq!(x.entries(), &[-2.0, -1.0, 0.0, 3.0]);
        let cut = cut_norm_vec(&x);
        assert_eq!(cut.value, 3.0);
        assert_eq!(cut.subset, vec![2, 3]);
        assert_eq!(brute_cut(x.entries()), 3.0);
        let (g, u) = gain_d(&x);
        assert_eq!(g, 1.5);
        assert_eq!(u.as_slice(), &[-1, -1, 1, 1]);
        assert_eq!(brute_sign_gain(x.entries()), 1.5);
    }

    #[test]
    fn zero_vector_cut_norm() {
        let x = CenteredVector::new(vec![0.0; 3]).unwrap();
        assert_eq!(cut_norm_vec(&x).value, 0.0);
        assert_eq!(gain_d(&x).0, 0.0);
    }

    #[test]
    fn uncentered_vector_rejected() {
        assert!(matches!(
            CenteredVector::new(vec![1.0, 1.0]),
            Err(Error::NotCentered { .. })
        ));
    }

    #[test]
    fn table_two_row_projection() {
        // a₁ column of the asbestos seriation table
        let a1 = [-0.2362, -0.0303, 0.0334, 0.1340, 0.0990];
        let s = sample(&a1);
        assert!((mad_mean(&s) - 0.10658).abs() < 2e-4);
        let x = CenteredVector::with_tolerance(a1.to_vec(), 1e-3).unwrap();
        assert!((cut_norm_vec(&x).value - 0.2664).abs() < 2e-4);
        assert!((gain_d(&x).0 - 0.10658).abs() < 2e-4);
    }

    #[test]
    fn heavyweight_element() {
        let r = relative_contributions(&sample(&[0.0, 0.0, 0.0, 4.0]));
        let sixth = 1.0 / 6.0;
        for (got, want) in r.rc_d.iter().zip([sixth, sixth, sixth, 0.5]) {
            assert!((got - want).abs() < 1e-15);
        }
        for (got, want) in r.rc_s2.iter().zip([1.0 / 12.0, 1.0 / 12.0, 1.0 / 12.0, 0.75]) {
            assert!((got - want).abs() < 1e-15);
        }
        assert_eq!(r.heavyweight_indices, vec![3]);
        assert!(r.rc_s2[3] < 1.0);
        // the three tied values sit on the median, so the heavyweight
        // carries all of LAD
        assert_eq!(r.rc_lad[3], 1.0);
    }

    #[test]
    fn heavyweight_below_lad_bound_without_ties_at_median() {
        // x = (-3, -1, 0, 1, 3+...) style: heavyweight 6 among spread values
        let r = relative_contributions(&sample(&[0.0, 1.0, 2.0, 9.0]));
        // mean 3, d = (3+2+1+6)/4 = 3, n·d/2 = 6 = |9 − 3|
        assert_eq!(r.heavyweight_indices, vec![3]);
        assert!(r.rc_s2[3] < 1.0);
        assert!(r.rc_lad[3] < 1.0);
    }
}
