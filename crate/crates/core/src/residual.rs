//! Correspondence matrices and the centered arrays built from them.
//!
//! Every centered type validates its margins on construction: row and
//! column sums (or all three families of fiber sums for [`Tensor3`]) must
//! vanish relative to the `ℓ1` mass the array was derived from.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Matrix, Result};

pub const CENTERING_TOLERANCE: f64 = 1e-10;

/// Nonnegative matrix with total mass 1 and no empty row or column.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrespondenceMatrix {
    p: Matrix,
    row_masses: Vec<f64>,
    col_masses: Vec<f64>,
}

impl CorrespondenceMatrix {
    /// Normalizes a table of nonnegative counts by its grand total.
    pub fn from_counts(counts: &Matrix) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        for i in 0..counts.nrows() {
            for j in 0..counts.ncols() {
                let value = counts[(i, j)];
                if !value.is_finite() {
                    return Err(Error::NonFinite(i * counts.ncols() + j));
                }
                if value < 0.0 {
                    return Err(Error::NegativeCount { row: i, col: j, value });
                }
            }
        }
        let total = counts.sum();
        if total <= 0.0 {
            return Err(Error::ZeroTotal);
        }
        if let Some(i) = counts.row_sums().iter().position(|&s| s == 0.0) {
            return Err(Error::ZeroRow(i));
        }
        if let Some(j) = counts.col_sums().iter().position(|&s| s == 0.0) {
            return Err(Error::ZeroColumn(j));
        }
        let p = counts.map(|x| x / total);
        Ok(Self {
            row_masses: p.row_sums(),
            col_masses: p.col_sums(),
            p,
        })
    }

    pub fn p(&self) -> &Matrix {
        &self.p
    }

    /// `p_i*`
    pub fn row_masses(&self) -> &[f64] {
        &self.row_masses
    }

    /// `p_*j`
    pub fn col_masses(&self) -> &[f64] {
        &self.col_masses
    }

    pub fn nrows(&self) -> usize {
        self.p.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.p.ncols()
    }

    /// The independence model `p_i*·p_*j`.
    pub fn independence(&self) -> Matrix {
        Matrix::from_fn(self.nrows(), self.ncols(), |i, j| {
            self.row_masses[i] * self.col_masses[j]
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidualKind {
    /// `p_ij − p_i*·p_*j`
    Multiplicative,
    /// `y_ij − ȳ_i* − ȳ_*j + ȳ_**`
    Additive,
    /// Output of a Wedderburn rank-one deflation.
    Deflated,
}

/// A double-centered matrix: every row sum and column sum vanishes.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualMatrix {
    x: Matrix,
    kind: ResidualKind,
    /// `ℓ1` mass the centering tolerance is measured against. Deflation
    /// inherits it so that near-null residuals stay valid.
    reference_l1: f64,
}

impl ResidualMatrix {
    /// Validates that `x` is double-centered.
    pub fn new(x: Matrix, kind: ResidualKind) -> Result<Self> {
        let reference_l1 = x.l1_norm();
        Self::with_reference(x, kind, reference_l1)
    }

    fn with_reference(x: Matrix, kind: ResidualKind, reference_l1: f64) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        if let Some(pos) = x.first_non_finite() {
            return Err(Error::NonFinite(pos));
        }
        let max_margin = x
            .row_sums()
            .into_iter()
            .chain(x.col_sums())
            .fold(0.0_f64, |m, s| m.max(s.abs()));
        if max_margin > CENTERING_TOLERANCE * reference_l1 {
            return Err(Error::NotDoubleCentered { max_margin });
        }
        Ok(Self {
            x,
            kind,
            reference_l1,
        })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.x
    }

    pub fn kind(&self) -> ResidualKind {
        self.kind
    }

    pub fn nrows(&self) -> usize {
        self.x.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.x.ncols()
    }

    pub fn reference_l1(&self) -> f64 {
        self.reference_l1
    }

    pub fn into_matrix(self) -> Matrix {
        self.x
    }

    /// `self − a·b'/δ`, keeping the reference mass.
    pub(crate) fn rank_one_update(&self, a: &[f64], b: &[f64], delta: f64) -> Result<Self> {
        let x = Matrix::from_fn(self.nrows(), self.ncols(), |i, j| {
            self.x[(i, j)] - a[i] * b[j] / delta
        });
        Self::with_reference(x, ResidualKind::Deflated, self.reference_l1)
    }
}

/// `x_ij = p_ij − p_i*·p_*j`.
pub fn correspondence_residual(p: &CorrespondenceMatrix) -> ResidualMatrix {
    let x = Matrix::from_fn(p.nrows(), p.ncols(), |i, j| {
        p.p[(i, j)] - p.row_masses[i] * p.col_masses[j]
    });
    // Measured against the unit mass of P so the independence model, whose
    // residual is pure rounding noise, still validates.
    ResidualMatrix::with_reference(x, ResidualKind::Multiplicative, 1.0)
        .expect("residual of a correspondence matrix is double-centered")
}

/// `x_ij = y_ij − ȳ_i* − ȳ_*j + ȳ_**`.
pub fn additive_double_center(y: &Matrix) -> Result<ResidualMatrix> {
    if y.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    if let Some(pos) = y.first_non_finite() {
        return Err(Error::NonFinite(pos));
    }
    let (n, m) = (y.nrows() as f64, y.ncols() as f64);
    let row_means: Vec<f64> = y.row_sums().into_iter().map(|s| s / m).collect();
    let col_means: Vec<f64> = y.col_sums().into_iter().map(|s| s / n).collect();
    let grand = y.sum() / (n * m);
    let x = Matrix::from_fn(y.nrows(), y.ncols(), |i, j| {
        y[(i, j)] - row_means[i] - col_means[j] + grand
    });
    let reference = x.l1_norm().max(y.l1_norm());
    ResidualMatrix::with_reference(x, ResidualKind::Additive, reference)
}

/// Dense `n × m × t` array stored with `k` varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Array3 {
    dims: [usize; 3],
    data: Vec<f64>,
}

impl Array3 {
    pub fn zeros(n: usize, m: usize, t: usize) -> Self {
        Self {
            dims: [n, m, t],
            data: vec![0.0; n * m * t],
        }
    }

    pub fn from_vec(n: usize, m: usize, t: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * m * t {
            return Err(Error::DimensionMismatch {
                expected: n * m * t,
                found: data.len(),
            });
        }
        Ok(Self {
            dims: [n, m, t],
            data,
        })
    }

    pub fn from_fn(n: usize, m: usize, t: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * m * t);
        for i in 0..n {
            for j in 0..m {
                for k in 0..t {
                    data.push(f(i, j, k));
                }
            }
        }
        Self {
            dims: [n, m, t],
            data,
        }
    }

    /// `[n, m, t]`
    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        let [_, m, t] = self.dims;
        self.data[(i * m + j) * t + k]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, value: f64) {
        let [_, m, t] = self.dims;
        self.data[(i * m + j) * t + k] = value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn l1_norm(&self) -> f64 {
        self.data.iter().map(|x| x.abs()).sum()
    }

    /// Largest absolute fiber sum over all three modes.
    pub fn max_fiber_sum(&self) -> f64 {
        let [n, m, t] = self.dims;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..m {
                worst = worst.max((0..t).map(|k| self.get(i, j, k)).sum::<f64>().abs());
            }
            for k in 0..t {
                worst = worst.max((0..m).map(|j| self.get(i, j, k)).sum::<f64>().abs());
            }
        }
        for j in 0..m {
            for k in 0..t {
                worst = worst.max((0..n).map(|i| self.get(i, j, k)).sum::<f64>().abs());
            }
        }
        worst
    }
}

/// A triple-centered array: sums over any single index vanish.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    x: Array3,
    reference_l1: f64,
}

impl Tensor3 {
    pub fn new(x: Array3) -> Result<Self> {
        let reference_l1 = x.l1_norm();
        Self::with_reference(x, reference_l1)
    }

    fn with_reference(x: Array3, reference_l1: f64) -> Result<Self> {
        if x.data.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        if let Some(pos) = x.data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(pos));
        }
        let max_fiber = x.max_fiber_sum();
        if max_fiber > CENTERING_TOLERANCE * reference_l1 {
            return Err(Error::NotTripleCentered { max_fiber });
        }
        Ok(Self { x, reference_l1 })
    }

    pub fn array(&self) -> &Array3 {
        &self.x
    }

    pub fn dims(&self) -> [usize; 3] {
        self.x.dims
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.x.get(i, j, k)
    }

    pub fn reference_l1(&self) -> f64 {
        self.reference_l1
    }
}

/// Additive three-way interaction:
/// `x_ijk = y_ijk − ȳ_ij* − ȳ_i*k − ȳ_*jk + ȳ_i** + ȳ_*j* + ȳ_**k − ȳ_***`.
pub fn triple_center(y: &Array3) -> Result<Tensor3> {
    let [n, m, t] = y.dims;
    if n == 0 || m == 0 || t == 0 {
        return Err(Error::EmptyMatrix);
    }
    if let Some(pos) = y.data.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(pos));
    }
    let (nf, mf, tf) = (n as f64, m as f64, t as f64);
    let mut ij = Matrix::zeros(n, m);
    let mut ik = Matrix::zeros(n, t);
    let mut jk = Matrix::zeros(m, t);
    let mut i_ = vec![0.0; n];
    let mut j_ = vec![0.0; m];
    let mut k_ = vec![0.0; t];
    let mut all = 0.0;
    for i in 0..n {
        for j in 0..m {
            for k in 0..t {
                let v = y.get(i, j, k);
                ij[(i, j)] += v / tf;
                ik[(i, k)] += v / mf;
                jk[(j, k)] += v / nf;
                i_[i] += v / (mf * tf);
                j_[j] += v / (nf * tf);
                k_[k] += v / (nf * mf);
                all += v / (nf * mf * tf);
            }
        }
    }
    let x = Array3::from_fn(n, m, t, |i, j, k| {
        y.get(i, j, k) - ij[(i, j)] - ik[(i, k)] - jk[(j, k)] + i_[i] + j_[j] + k_[k] - all
    });
    let reference = x.l1_norm().max(y.l1_norm());
    Tensor3::with_reference(x, reference)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn asbestos_counts() -> Matrix {
        Matrix::from_rows(&[
            [310.0, 36.0, 0.0, 0.0],
            [212.0, 158.0, 9.0, 0.0],
            [21.0, 35.0, 17.0, 4.0],
            [25.0, 102.0, 49.0, 18.0],
            [7.0, 35.0, 51.0, 28.0],
        ])
        .unwrap()
    }

    #[test]
    fn asbestos_margins_and_residual_cells() {
        let p = CorrespondenceMatrix::from_counts(&asbestos_counts()).unwrap();
        assert!((p.row_masses()[0] - 0.3098).abs() < 5e-5);
        assert!((p.col_masses()[0] - 0.5148).abs() < 5e-5);
        let x = correspondence_residual(&p);
        assert_eq!(x.kind(), ResidualKind::Multiplicative);
        assert!((x.matrix()[(0, 0)] - 0.1181).abs() < 5e-5);
        assert!((x.matrix()[(4, 3)] - 0.0202).abs() < 5e-5);
    }

    #[test]
    fn single_cell_table() {
        let p = CorrespondenceMatrix::from_counts(&Matrix::from_rows(&[[5.0]]).unwrap()).unwrap();
        assert_eq!(p.p()[(0, 0)], 1.0);
        assert_eq!(correspondence_residual(&p).matrix()[(0, 0)], 0.0);
    }

    #[test]
    fn count_validation_names_the_offender() {
        let zero_row = Matrix::from_rows(&[[1.0, 2.0], [0.0, 0.0]]).unwrap();
        assert_eq!(CorrespondenceMatrix::from_counts(&zero_row), Err(Error::ZeroRow(1)));
        let zero_col = Matrix::from_rows(&[[1.0, 0.0], [3.0, 0.0]]).unwrap();
        assert_eq!(CorrespondenceMatrix::from_counts(&zero_col), Err(Error::ZeroColumn(1)));
        let neg = Matrix::from_rows(&[[1.0, -2.0]]).unwrap();
        assert!(matches!(
            CorrespondenceMatrix::from_counts(&neg),
            Err(Error::NegativeCount { row: 0, col: 1, .. })
        ));
        let zero = Matrix::zeros(2, 2);
        assert_eq!(CorrespondenceMatrix::from_counts(&zero), Err(Error::ZeroTotal));
    }

    #[test]
    fn independence_model_has_null_residual() {
        let r = [0.2, 0.5, 0.3];
        let c = [0.1, 0.6, 0.3];
        let counts = Matrix::from_fn(3, 3, |i, j| 1000.0 * r[i] * c[j]);
        let p = CorrespondenceMatrix::from_counts(&counts).unwrap();
        assert!(correspondence_residual(&p).matrix().max_abs() < 1e-15);
    }

    #[test]
    fn additive_centering_examples() {
        let constant = Matrix::from_fn(3, 2, |_, _| 7.0);
        assert!(additive_double_center(&constant).unwrap().matrix().max_abs() < 1e-14);
        let additive = Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        assert_eq!(additive_double_center(&additive).unwrap().matrix().max_abs(), 0.0);
        let diag = Matrix::from_rows(&[[1.0, 0.0], [0.0, 1.0]]).unwrap();
        let x = additive_double_center(&diag).unwrap();
        assert_eq!(
            x.matrix(),
            &Matrix::from_rows(&[[0.5, -0.5], [-0.5, 0.5]]).unwrap()
        );
    }

    #[test]
    fn uncentered_matrix_rejected() {
        let m = Matrix::from_rows(&[[1.0, 0.0], [0.0, 1.0]]).unwrap();
        assert!(matches!(
            ResidualMatrix::new(m, ResidualKind::Additive),
            Err(Error::NotDoubleCentered { .. })
        ));
    }

    #[test]
    fn triple_centering_examples() {
        let constant = Array3::from_fn(2, 3, 4, |_, _, _| 3.0);
        assert!(triple_center(&constant).unwrap().array().as_slice().iter().all(|v| v.abs() < 1e-14));

        let (a, b, c) = ([1.0, -2.0, 0.5], [4.0, 0.0], [1.5, 2.0, -1.0, 0.25]);
        let main_effects = Array3::from_fn(3, 2, 4, |i, j, k| a[i] + b[j] + c[k]);
        assert!(triple_center(&main_effects).unwrap().array().as_slice().iter().all(|v| v.abs() < 1e-14));

        let s = [1.0, -1.0];
        let signs = Array3::from_fn(2, 2, 2, |i, j, k| s[i] * s[j] * s[k]);
        assert_eq!(signs.max_fiber_sum(), 0.0);
        assert_eq!(triple_center(&signs).unwrap().array(), &signs);
    }

    #[test]
    fn two_way_interactions_are_not_triple_centered() {
        let s = [1.0, -1.0];
        let y = Array3::from_fn(2, 2, 3, |i, j, _| s[i] * s[j]);
        assert!(matches!(Tensor3::new(y.clone()), Err(Error::NotTripleCentered { .. })));
        assert!(triple_center(&y).unwrap().array().l1_norm() < 1e-14);
    }
}
