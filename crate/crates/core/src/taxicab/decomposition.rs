use alloc::vec::Vec;

use super::norm::{norm, SolverMode};
use super::seriation::SeriationReport;
use super::TaxicabAxis;
use crate::residual::{correspondence_residual, CorrespondenceMatrix, ResidualMatrix};
use crate::{Error, Matrix, Result};

/// Axes with `δ_α < STOP_REL · δ₁` are treated as numerical rank exhaustion.
pub const STOP_REL: f64 = 1e-12;

/// Slack for flagging a contribution of exactly one half.
pub const HEAVYWEIGHT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TcaOptions {
    /// Upper bound on the number of axes; `None` runs to full rank.
    pub max_axes: Option<usize>,
    pub solver: SolverMode,
}

impl Default for TcaOptions {
    fn default() -> Self {
        Self {
            max_axes: None,
            solver: SolverMode::Auto,
        }
    }
}

/// An axis of the decomposition with its factor scores.
#[derive(Debug, Clone, PartialEq)]
pub struct TcaAxis {
    pub axis: TaxicabAxis,
    /// `f(i) = a(i) / p_i*`
    pub f: Vec<f64>,
    /// `g(j) = b(j) / p_*j`
    pub g: Vec<f64>,
    /// The residual `X_α` this axis was extracted from.
    pub residual: ResidualMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TcaDecomposition {
    pub axes: Vec<TcaAxis>,
    pub row_masses: Vec<f64>,
    pub col_masses: Vec<f64>,
    /// Number of axes extracted.
    pub rank_used: usize,
    /// Residual left after the last deflation.
    pub remainder: ResidualMatrix,
}

/// Wedderburn rank-one reduction `X − a·b'/δ`.
pub fn deflate(x: &ResidualMatrix, axis: &TaxicabAxis) -> Result<ResidualMatrix> {
    if axis.delta.is_nan() || axis.delta <= 0.0 {
        return Err(Error::NullAxis);
    }
    x.rank_one_update(&axis.a, &axis.b, axis.delta)
}

/// Taxicab singular value decomposition of a correspondence matrix.
pub fn tca(p: &CorrespondenceMatrix, options: &TcaOptions) -> Result<TcaDecomposition> {
    let max_axes = options.max_axes.unwrap_or(p.nrows().min(p.ncols()));
    let mut x = correspondence_residual(p);
    let mut axes: Vec<TcaAxis> = Vec::new();
    while axes.len() < max_axes {
        let axis = norm(&x, options.solver)?;
        let reference = axes.first().map_or(x.reference_l1(), |first| first.axis.delta);
        if axis.delta <= STOP_REL * reference {
            break;
        }
        let next = deflate(&x, &axis)?;
        let f = axis.a.iter().zip(p.row_masses()).map(|(a, r)| a / r).collect();
        let g = axis.b.iter().zip(p.col_masses()).map(|(b, c)| b / c).collect();
        axes.push(TcaAxis {
            axis,
            f,
            g,
            residual: x,
        });
        x = next;
    }
    Ok(TcaDecomposition {
        rank_used: axes.len(),
        axes,
        row_masses: p.row_masses().to_vec(),
        col_masses: p.col_masses().to_vec(),
        remainder: x,
    })
}

/// Relative contributions of rows and columns to one axis.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisContributions {
    /// `|a(i)| / δ`
    pub rc_rows: Vec<f64>,
    /// `|b(j)| / δ`
    pub rc_cols: Vec<f64>,
    pub heavyweight_rows: Vec<usize>,
    pub heavyweight_cols: Vec<usize>,
    /// Cells whose row and column are both heavyweight, with `|x_ij| / δ`.
    pub heavyweight_cells: Vec<(usize, usize, f64)>,
}

impl TcaDecomposition {
    pub fn axis(&self, index: usize) -> Result<&TcaAxis> {
        self.axes.get(index).ok_or(Error::AxisOutOfRange {
            index,
            available: self.axes.len(),
        })
    }

    /// `p_i*·p_*j + Σ_α a_α(i)·b_α(j)/δ_α`
    pub fn reconstruct(&self) -> Matrix {
        Matrix::from_fn(self.row_masses.len(), self.col_masses.len(), |i, j| {
            self.row_masses[i] * self.col_masses[j]
                + self
                    .axes
                    .iter()
                    .map(|ax| ax.axis.a[i] * ax.axis.b[j] / ax.axis.delta)
                    .sum::<f64>()
        })
    }

    /// Same reconstruction through factor scores:
    /// `p_i*·p_*j·(1 + Σ_α f_α(i)·g_α(j)/δ_α)`.
    pub fn reconstruct_from_scores(&self) -> Matrix {
        Matrix::from_fn(self.row_masses.len(), self.col_masses.len(), |i, j| {
            self.row_masses[i]
                * self.col_masses[j]
                * (1.0
                    + self
                        .axes
                        .iter()
                        .map(|ax| ax.f[i] * ax.g[j] / ax.axis.delta)
                        .sum::<f64>())
        })
    }

    pub fn rc_axis(&self, index: usize) -> Result<AxisContributions> {
        let ax = self.axis(index)?;
        let delta = ax.axis.delta;
        let rc_rows: Vec<f64> = ax.axis.a.iter().map(|a| a.abs() / delta).collect();
        let rc_cols: Vec<f64> = ax.axis.b.iter().map(|b| b.abs() / delta).collect();
        let heavy = |rc: &[f64]| -> Vec<usize> {
            rc.iter()
                .enumerate()
                .filter_map(|(i, r)| ((r - 0.5).abs() <= HEAVYWEIGHT_TOLERANCE).then_some(i))
                .collect()
        };
        let heavyweight_rows = heavy(&rc_rows);
        let heavyweight_cols = heavy(&rc_cols);
        let x = ax.residual.matrix();
        let heavyweight_cells = heavyweight_rows
            .iter()
            .flat_map(|&i| {
                heavyweight_cols
                    .iter()
                    .map(move |&j| (i, j, x[(i, j)].abs() / delta))
            })
            .collect();
        Ok(AxisContributions {
            rc_rows,
            rc_cols,
            heavyweight_rows,
            heavyweight_cols,
            heavyweight_cells,
        })
    }

    /// Seriation of `X_α` with rows and columns ordered by factor score.
    pub fn seriate(&self, index: usize) -> Result<SeriationReport> {
        let ax = self.axis(index)?;
        Ok(SeriationReport::from_axis(
            ax.residual.matrix(),
            &ax.axis,
            &ax.f,
            &ax.g,
        ))
    }
}

pub fn rc_axis(decomposition: &TcaDecomposition, index: usize) -> Result<AxisContributions> {
    decomposition.rc_axis(index)
}

pub fn seriate(decomposition: &TcaDecomposition, index: usize) -> Result<SeriationReport> {
    decomposition.seriate(index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residual::{additive_double_center, ResidualKind};

    #[test]
    fn deflating_a_null_axis_fails() {
        let x = ResidualMatrix::new(Matrix::zeros(2, 2), ResidualKind::Additive).unwrap();
        let axis = norm(&x, SolverMode::Exact).unwrap();
        assert_eq!(deflate(&x, &axis), Err(Error::NullAxis));
    }

    #[test]
    fn rank_one_residual_vanishes_after_one_deflation() {
        // outer product of two centered vectors is double-centered and rank one
        let r = [1.0, -3.0, 2.0];
        let c = [0.5, 0.5, -2.0, 1.0];
        let x = ResidualMatrix::new(Matrix::from_fn(3, 4, |i, j| r[i] * c[j]), ResidualKind::Additive)
            .unwrap();
        let axis = norm(&x, SolverMode::Exact).unwrap();
        let next = deflate(&x, &axis).unwrap();
        assert!(next.matrix().max_abs() < 1e-14);
    }

    #[test]
    fn independence_model_yields_no_axes() {
        let counts = Matrix::from_fn(3, 4, |i, j| ((i + 1) * (j + 2)) as f64);
        let p = CorrespondenceMatrix::from_counts(&counts).unwrap();
        let d = tca(&p, &TcaOptions::default()).unwrap();
        assert!(d.axes.is_empty());
        assert_eq!(d.rank_used, 0);
    }

    #[test]
    fn axis_out_of_range() {
        let counts = Matrix::from_rows(&[[3.0, 1.0], [1.0, 3.0]]).unwrap();
        let p = CorrespondenceMatrix::from_counts(&counts).unwrap();
        let d = tca(&p, &TcaOptions::default()).unwrap();
        assert_eq!(d.rank_used, 1);
        assert!(matches!(d.rc_axis(1), Err(Error::AxisOutOfRange { index: 1, available: 1 })));
    }

    #[test]
    fn deflated_margins_stay_zero() {
        let y = Matrix::from_fn(5, 4, |i, j| libm::sin((i * 7 + j * 3) as f64));
        let x = additive_double_center(&y).unwrap();
        let axis = norm(&x, SolverMode::Exact).unwrap();
        let next = deflate(&x, &axis).unwrap();
        for s in next.matrix().row_sums().into_iter().chain(next.matrix().col_sums()) {
            assert!(s.abs() < 1e-12);
        }
    }
}
