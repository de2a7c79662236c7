use alloc::vec::Vec;

use super::norm::{norm, SolverMode};
use super::TaxicabAxis;
use crate::residual::ResidualMatrix;
use crate::{Matrix, Result};

/// Balanced 2-blocks seriation induced by one axis.
///
/// `S = {i : vᵢ = +1}` and `T = {j : uⱼ = +1}`. For a double-centered
/// matrix the four block sums are `(+c, −c, −c, +c)` with `c = δ/4`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriationReport {
    pub s_opt: Vec<usize>,
    pub t_opt: Vec<usize>,
    /// Sums over `(S,T)`, `(S,T̄)`, `(S̄,T)`, `(S̄,T̄)`.
    pub block_sums: [f64; 4],
    /// `Σ_{S,T} x_ij`
    pub cut_norm: f64,
    /// `δ` of the axis the report was built from.
    pub delta: f64,
    /// `S` then `S̄`, each by descending row score.
    pub row_order: Vec<usize>,
    /// `T` then `T̄`, each by descending column score.
    pub col_order: Vec<usize>,
}

impl SeriationReport {
    pub fn from_axis(x: &Matrix, axis: &TaxicabAxis, row_scores: &[f64], col_scores: &[f64]) -> Self {
        let s_opt = axis.v.positive_indices();
        let s_bar = axis.v.negative_indices();
        let t_opt = axis.u.positive_indices();
        let t_bar = axis.u.negative_indices();
        let block_sums = [
            x.block_sum(&s_opt, &t_opt),
            x.block_sum(&s_opt, &t_bar),
            x.block_sum(&s_bar, &t_opt),
            x.block_sum(&s_bar, &t_bar),
        ];
        let row_order = ordered(&s_opt, &s_bar, row_scores);
        let col_order = ordered(&t_opt, &t_bar, col_scores);
        Self {
            cut_norm: block_sums[0],
            delta: axis.delta,
            s_opt,
            t_opt,
            block_sums,
            row_order,
            col_order,
        }
    }

    /// Zero matrix: no seriation to speak of.
    pub fn is_degenerate(&self) -> bool {
        self.delta == 0.0
    }

    /// Largest deviation of a block sum from its expected `±δ/4`.
    pub fn block_defect(&self) -> f64 {
        let c = self.delta / 4.0;
        let want = [c, -c, -c, c];
        self.block_sums
            .iter()
            .zip(want)
            .fold(0.0_f64, |m, (got, want)| m.max((got - want).abs()))
    }
}

fn ordered(first: &[usize], second: &[usize], scores: &[f64]) -> Vec<usize> {
    let by_score = |group: &[usize]| {
        let mut g = group.to_vec();
        g.sort_by(|&i, &j| scores[j].total_cmp(&scores[i]));
        g
    };
    let mut out = by_score(first);
    out.extend(by_score(second));
    out
}

/// Cut norm of a double-centered matrix with its block certificate.
pub fn cut_norm_matrix(x: &ResidualMatrix, mode: SolverMode) -> Result<SeriationReport> {
    let axis = norm(x, mode)?;
    Ok(SeriationReport::from_axis(x.matrix(), &axis, &axis.a, &axis.b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residual::{additive_double_center, ResidualKind};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// max over all row and column subsets of the block sum.
    fn brute_cut(x: &Matrix) -> f64 {
        let (n, m) = (x.nrows(), x.ncols());
        let mut best = 0.0_f64;
        for rs in 0u32..1 << n {
            let rows: Vec<usize> = (0..n).filter(|i| rs >> i & 1 == 1).collect();
            for cs in 0u32..1 << m {
                let cols: Vec<usize> = (0..m).filter(|j| cs >> j & 1 == 1).collect();
                best = best.max(x.block_sum(&rows, &cols));
            }
        }
        best
    }

    #[test]
    fn random_6x5_matches_subset_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let y = Matrix::from_fn(6, 5, |_, _| rng.gen_range(-2.0..2.0));
            let x = additive_double_center(&y).unwrap();
            let report = cut_norm_matrix(&x, SolverMode::Exact).unwrap();
            let want = brute_cut(x.matrix());
            assert!((report.cut_norm - want).abs() <= 1e-12 * want);
            assert!(report.block_defect() <= 1e-10 * report.delta);
        }
    }

    #[test]
    fn zero_matrix_is_degenerate() {
        let x = ResidualMatrix::new(Matrix::zeros(2, 3), ResidualKind::Additive).unwrap();
        let report = cut_norm_matrix(&x, SolverMode::Auto).unwrap();
        assert!(report.is_degenerate());
        assert_eq!(report.block_sums, [0.0; 4]);
    }
}
