//! Classical correspondence analysis, for comparison with the taxicab
//! variant.
//!
//! Contributions here are the usual absolute contributions
//! `ctr(i) = p_i*·f(i)² / λ`, which sum to one over the rows (and over the
//! columns) of each axis. Unlike taxicab contributions they are not bounded
//! by one half.

mod svd;

use alloc::vec::Vec;

pub use svd::{svd, Svd};

use crate::residual::CorrespondenceMatrix;
use crate::taxicab::{tca, SolverMode, TcaOptions};
use crate::{Matrix, Result};

/// Singular values at or below this are dropped (they lie in `[0, 1]`).
pub const RANK_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct CaDecomposition {
    pub singular_values: Vec<f64>,
    /// `λ_α = σ_α²`
    pub principal_inertias: Vec<f64>,
    /// `Σ (p_ij − p_i*p_*j)² / (p_i*p_*j)`
    pub total_inertia: f64,
    /// Per axis, `f_α(i) = σ_α·u_α(i)/√p_i*`.
    pub row_scores: Vec<Vec<f64>>,
    /// Per axis, `g_α(j) = σ_α·v_α(j)/√p_*j`.
    pub col_scores: Vec<Vec<f64>>,
    pub row_ctr: Vec<Vec<f64>>,
    pub col_ctr: Vec<Vec<f64>>,
    pub row_masses: Vec<f64>,
    pub col_masses: Vec<f64>,
}

impl CaDecomposition {
    pub fn n_axes(&self) -> usize {
        self.singular_values.len()
    }

    /// `p_i*·p_*j·(1 + Σ_α f_α(i)·g_α(j)/σ_α)`
    pub fn reconstruct(&self) -> Matrix {
        Matrix::from_fn(self.row_masses.len(), self.col_masses.len(), |i, j| {
            let interaction: f64 = (0..self.n_axes())
                .map(|a| self.row_scores[a][i] * self.col_scores[a][j] / self.singular_values[a])
                .sum();
            self.row_masses[i] * self.col_masses[j] * (1.0 + interaction)
        })
    }
}

pub fn ca(p: &CorrespondenceMatrix, max_axes: Option<usize>) -> Result<CaDecomposition> {
    let (r, c) = (p.row_masses(), p.col_masses());
    let s = Matrix::from_fn(p.nrows(), p.ncols(), |i, j| {
        (p.p()[(i, j)] - r[i] * c[j]) / libm::sqrt(r[i] * c[j])
    });
    let total_inertia = s.as_slice().iter().map(|x| x * x).sum();
    let dec = svd(&s)?;
    let limit = max_axes.unwrap_or(usize::MAX);

    let mut out = CaDecomposition {
        singular_values: Vec::new(),
        principal_inertias: Vec::new(),
        total_inertia,
        row_scores: Vec::new(),
        col_scores: Vec::new(),
        row_ctr: Vec::new(),
        col_ctr: Vec::new(),
        row_masses: r.to_vec(),
        col_masses: c.to_vec(),
    };
    for (a, &sigma) in dec.singular_values.iter().enumerate() {
        if out.n_axes() >= limit || sigma <= RANK_TOLERANCE {
            break;
        }
        let mut uvec: Vec<f64> = dec.u.column(a).collect();
        let mut vvec: Vec<f64> = dec.v.column(a).collect();
        let mut g: Vec<f64> = vvec.iter().zip(c).map(|(v, cj)| sigma * v / libm::sqrt(*cj)).collect();
        // orient so the largest |g| is positive
        let lead = (0..g.len()).fold(0, |best, j| if g[j].abs() > g[best].abs() { j } else { best });
        if g[lead] < 0.0 {
            uvec.iter_mut().for_each(|x| *x = -*x);
            vvec.iter_mut().for_each(|x| *x = -*x);
            g.iter_mut().for_each(|x| *x = -*x);
        }
        let f: Vec<f64> = uvec.iter().zip(r).map(|(u, ri)| sigma * u / libm::sqrt(*ri)).collect();
        out.row_ctr.push(uvec.iter().map(|u| u * u).collect());
        out.col_ctr.push(vvec.iter().map(|v| v * v).collect());
        out.row_scores.push(f);
        out.col_scores.push(g);
        out.singular_values.push(sigma);
        out.principal_inertias.push(sigma * sigma);
    }
    Ok(out)
}

/// Contribution of one point to the compared axis under both methods.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContributionPair {
    pub index: usize,
    /// `p·score² / λ`
    pub ca: f64,
    /// `|projection| / δ`
    pub tca: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointKind {
    Row,
    Column,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakContribution {
    pub kind: PointKind,
    pub index: usize,
    pub value: f64,
}

/// Side-by-side CA and TCA contributions on one axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    /// Zero-based axis index.
    pub axis: usize,
    pub rows: Vec<ContributionPair>,
    pub cols: Vec<ContributionPair>,
    pub max_ca: Option<PeakContribution>,
    pub max_tca: Option<PeakContribution>,
    /// Row and column score signs agree between the methods up to a global
    /// flip.
    pub same_sign_structure: bool,
}

impl Comparison {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty() && self.cols.is_empty()
    }
}

/// Computes both decompositions up to `axis` and lines up their
/// contributions. Empty when either method has fewer than `axis + 1` axes.
pub fn compare_ca_tca(p: &CorrespondenceMatrix, axis: usize, solver: SolverMode) -> Result<Comparison> {
    let classic = ca(p, Some(axis + 1))?;
    let taxicab = tca(
        p,
        &TcaOptions {
            max_axes: Some(axis + 1),
            solver,
        },
    )?;
    let mut out = Comparison {
        axis,
        rows: Vec::new(),
        cols: Vec::new(),
        max_ca: None,
        max_tca: None,
        same_sign_structure: false,
    };
    if classic.n_axes() <= axis || taxicab.axes.len() <= axis {
        return Ok(out);
    }
    let rc = taxicab.rc_axis(axis)?;
    out.rows = pairs(&classic.row_ctr[axis], &rc.rc_rows);
    out.cols = pairs(&classic.col_ctr[axis], &rc.rc_cols);
    out.max_ca = peak(&out.rows, &out.cols, |p| p.ca);
    out.max_tca = peak(&out.rows, &out.cols, |p| p.tca);
    let t = &taxicab.axes[axis];
    out.same_sign_structure = same_signs(&classic.row_scores[axis], &t.f, &classic.col_scores[axis], &t.g);
    Ok(out)
}

fn pairs(ca: &[f64], tca: &[f64]) -> Vec<ContributionPair> {
    ca.iter()
        .zip(tca)
        .enumerate()
        .map(|(index, (&ca, &tca))| ContributionPair { index, ca, tca })
        .collect()
}

fn peak(rows: &[ContributionPair], cols: &[ContributionPair], key: impl Fn(&ContributionPair) -> f64) -> Option<PeakContribution> {
    let tagged = rows
        .iter()
        .map(|p| (PointKind::Row, p))
        .chain(cols.iter().map(|p| (PointKind::Column, p)));
    let mut best: Option<PeakContribution> = None;
    for (kind, p) in tagged {
        let value = key(p);
        if best.is_none_or(|b| value > b.value) {
            best = Some(PeakContribution {
                kind,
                index: p.index,
                value,
            });
        }
    }
    best
}

fn same_signs(f_ca: &[f64], f_tca: &[f64], g_ca: &[f64], g_tca: &[f64]) -> bool {
    let signs = |xs: &[f64]| xs.iter().map(|x| *x >= 0.0).collect::<Vec<_>>();
    let a: Vec<bool> = signs(f_ca).into_iter().chain(signs(g_ca)).collect();
    let b: Vec<bool> = signs(f_tca).into_iter().chain(signs(g_tca)).collect();
    a == b || a.iter().zip(&b).all(|(x, y)| x != y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(rows: &[[f64; 2]]) -> CorrespondenceMatrix {
        CorrespondenceMatrix::from_counts(&Matrix::from_rows(rows).unwrap()).unwrap()
    }

    #[test]
    fn independence_has_no_axes() {
        let counts = Matrix::from_fn(3, 3, |i, j| ((i + 1) * (j + 1)) as f64);
        let p = CorrespondenceMatrix::from_counts(&counts).unwrap();
        let d = ca(&p, None).unwrap();
        assert_eq!(d.n_axes(), 0);
        assert!(d.total_inertia < 1e-28);
        assert!(compare_ca_tca(&p, 0, SolverMode::Auto).unwrap().is_empty());
    }

    #[test]
    fn symmetric_toy_table_agrees_in_sign() {
        let p = table(&[[0.4, 0.1], [0.1, 0.4]]);
        let cmp = compare_ca_tca(&p, 0, SolverMode::Exact).unwrap();
        assert!(cmp.same_sign_structure);
        // every point carries half of both axes in the symmetric 2x2 case
        for pair in cmp.rows.iter().chain(&cmp.cols) {
            assert!((pair.ca - 0.5).abs() < 1e-12);
            assert!((pair.tca - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn contributions_sum_to_one() {
        let counts = Matrix::from_rows(&[[10.0, 2.0, 3.0], [1.0, 8.0, 4.0], [2.0, 2.0, 9.0], [5.0, 1.0, 1.0]]).unwrap();
        let p = CorrespondenceMatrix::from_counts(&counts).unwrap();
        let d = ca(&p, None).unwrap();
        assert_eq!(d.n_axes(), 2);
        for a in 0..d.n_axes() {
            assert!((d.row_ctr[a].iter().sum::<f64>() - 1.0).abs() < 1e-10);
            assert!((d.col_ctr[a].iter().sum::<f64>() - 1.0).abs() < 1e-10);
        }
        let inertia: f64 = d.principal_inertias.iter().sum();
        assert!((inertia - d.total_inertia).abs() < 1e-12);
        let r = d.reconstruct();
        for i in 0..4 {
            for j in 0..3 {
                assert!((r[(i, j)] - p.p()[(i, j)]).abs() < 1e-12);
            }
        }
    }
}
