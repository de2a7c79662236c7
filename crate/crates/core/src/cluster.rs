//! Maximal-interaction two-mode clustering.
//!
//! For an `r`-partition `{S_α}` of the rows and a `c`-partition `{T_β}` of
//! the columns of a double-centered `X`,
//!
//! ```text
//! f_p = Σ_α Σ_β |S_α|·|T_β|·(|Σ_{S_α×T_β} x_ij| / (|S_α|·|T_β|))^p
//! ```
//!
//! At `p = 1` and `r = c = 2` the maximum of `f_p` is the taxicab norm
//! `‖X‖_{∞→1}`.

use alloc::vec;
use alloc::vec::Vec;

use crate::residual::ResidualMatrix;
use crate::{Error, Matrix, Result};

/// Exhaustive search is used while `S(n, r)·S(m, c)` stays at or below this.
pub const EXHAUSTIVE_LIMIT: f64 = 1e7;

const IMPROVEMENT_REL: f64 = 1e-13;

/// Row and column partitions into nonempty blocks, stored as block labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoModePartition {
    row_labels: Vec<usize>,
    col_labels: Vec<usize>,
    r: usize,
    c: usize,
}

impl TwoModePartition {
    pub fn new(row_labels: Vec<usize>, r: usize, col_labels: Vec<usize>, c: usize) -> Result<Self> {
        check_labels(&row_labels, r)?;
        check_labels(&col_labels, c)?;
        Ok(Self {
            row_labels,
            col_labels,
            r,
            c,
        })
    }

    /// From explicit blocks of row and column indices.
    pub fn from_blocks(row_blocks: &[Vec<usize>], n: usize, col_blocks: &[Vec<usize>], m: usize) -> Result<Self> {
        let row_labels = labels_from_blocks(row_blocks, n)?;
        let col_labels = labels_from_blocks(col_blocks, m)?;
        Self::new(row_labels, row_blocks.len(), col_labels, col_blocks.len())
    }

    pub fn singletons(n: usize, m: usize) -> Self {
        Self {
            row_labels: (0..n).collect(),
            col_labels: (0..m).collect(),
            r: n,
            c: m,
        }
    }

    pub fn row_labels(&self) -> &[usize] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[usize] {
        &self.col_labels
    }

    pub fn row_blocks(&self) -> Vec<Vec<usize>> {
        blocks(&self.row_labels, self.r)
    }

    pub fn col_blocks(&self) -> Vec<Vec<usize>> {
        blocks(&self.col_labels, self.c)
    }
}

fn check_labels(labels: &[usize], k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidPartition("no blocks"));
    }
    let mut seen = vec![false; k];
    for &l in labels {
        if l >= k {
            return Err(Error::InvalidPartition("block label out of range"));
        }
        seen[l] = true;
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::InvalidPartition("empty block"));
    }
    Ok(())
}

fn labels_from_blocks(blocks: &[Vec<usize>], len: usize) -> Result<Vec<usize>> {
    let mut labels = vec![usize::MAX; len];
    for (b, block) in blocks.iter().enumerate() {
        for &i in block {
            if i >= len {
                return Err(Error::InvalidPartition("index out of range"));
            }
            if labels[i] != usize::MAX {
                return Err(Error::InvalidPartition("blocks overlap"));
            }
            labels[i] = b;
        }
    }
    if labels.contains(&usize::MAX) {
        return Err(Error::InvalidPartition("blocks do not cover every index"));
    }
    Ok(labels)
}

fn blocks(labels: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); k];
    for (i, &l) in labels.iter().enumerate() {
        out[l].push(i);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Exhaustive within [`EXHAUSTIVE_LIMIT`], local search beyond.
    #[default]
    Auto,
    Exhaustive,
    LocalSearch,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringResult {
    pub partition: TwoModePartition,
    pub objective: f64,
    pub p: f64,
    /// `Exhaustive` or `LocalSearch`, never `Auto`.
    pub method: Method,
    /// Objective after each accepted move of the winning local-search start.
    pub history: Vec<f64>,
}

/// `f_p` for a partition of `x`.
pub fn objective(x: &ResidualMatrix, partition: &TwoModePartition, p: f64) -> Result<f64> {
    check_p(p)?;
    let m = x.matrix();
    if partition.row_labels.len() != m.nrows() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: partition.row_labels.len(),
        });
    }
    if partition.col_labels.len() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.ncols(),
            found: partition.col_labels.len(),
        });
    }
    let sums = block_sums(m, &partition.row_labels, partition.r, &partition.col_labels, partition.c);
    let rs = sizes(&partition.row_labels, partition.r);
    let cs = sizes(&partition.col_labels, partition.c);
    Ok(f_p(&sums, &rs, &cs, p))
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidParameter("p must be a finite number ≥ 1"));
    }
    Ok(())
}

fn sizes(labels: &[usize], k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for &l in labels {
        out[l] += 1;
    }
    out
}

fn block_sums(x: &Matrix, rows: &[usize], r: usize, cols: &[usize], c: usize) -> Matrix {
    let mut out = Matrix::zeros(r, c);
    for (i, &a) in rows.iter().enumerate() {
        for (j, &b) in cols.iter().enumerate() {
            out[(a, b)] += x[(i, j)];
        }
    }
    out
}

fn f_p(sums: &Matrix, row_sizes: &[usize], col_sizes: &[usize], p: f64) -> f64 {
    let mut total = 0.0;
    for (a, &ra) in row_sizes.iter().enumerate() {
        for (b, &cb) in col_sizes.iter().enumerate() {
            let area = (ra * cb) as f64;
            let mean = sums[(a, b)].abs() / area;
            total += if p == 1.0 {
                sums[(a, b)].abs()
            } else {
                area * libm::pow(mean, p)
            };
        }
    }
    total
}

/// Stirling number of the second kind, in floating point.
pub fn stirling2(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let mut row = vec![0.0_f64; k + 1];
    row[0] = 1.0;
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            row[j] = j as f64 * row[j] + row[j - 1];
        }
        row[0] = 0.0;
    }
    row[k]
}

/// Maximizes `f_p` over partitions into exactly `r` row and `c` column blocks.
pub fn maximize(x: &ResidualMatrix, r: usize, c: usize, p: f64, method: Method) -> Result<ClusteringResult> {
    check_p(p)?;
    let (n, m) = (x.nrows(), x.ncols());
    if r == 0 || r > n {
        return Err(Error::InvalidParameter("r must be between 1 and the number of rows"));
    }
    if c == 0 || c > m {
        return Err(Error::InvalidParameter("c must be between 1 and the number of columns"));
    }
    let space = stirling2(n, r) * stirling2(m, c);
    let exhaustive = match method {
        Method::Exhaustive => true,
        Method::LocalSearch => false,
        Method::Auto => space <= EXHAUSTIVE_LIMIT,
    };
    if exhaustive {
        Ok(exhaustive_search(x.matrix(), r, c, p))
    } else {
        Ok(local_search(x.matrix(), r, c, p))
    }
}

/// Calls `visit` with every restricted growth string of length `n` using
/// exactly `k` labels.
fn for_each_partition(n: usize, k: usize, visit: &mut dyn FnMut(&[usize])) {
    fn rec(labels: &mut Vec<usize>, n: usize, k: usize, used: usize, visit: &mut dyn FnMut(&[usize])) {
        let pos = labels.len();
        if pos == n {
            if used == k {
                visit(labels);
            }
            return;
        }
        // labels still to introduce must fit in the remaining positions
        if k - used > n - pos {
            return;
        }
        for l in 0..=used.min(k - 1) {
            labels.push(l);
            rec(labels, n, k, used.max(l + 1), visit);
            labels.pop();
        }
    }
    rec(&mut Vec::with_capacity(n), n, k, 0, visit);
}

fn exhaustive_search(x: &Matrix, r: usize, c: usize, p: f64) -> ClusteringResult {
    let (n, m) = (x.nrows(), x.ncols());
    let mut best: Option<(f64, Vec<usize>, Vec<usize>)> = None;
    for_each_partition(n, r, &mut |rows| {
        // row-block aggregates, r × m
        let mut agg = Matrix::zeros(r, m);
        for (i, &a) in rows.iter().enumerate() {
            for j in 0..m {
                agg[(a, j)] += x[(i, j)];
            }
        }
        let rs = sizes(rows, r);
        for_each_partition(m, c, &mut |cols| {
            let mut sums = Matrix::zeros(r, c);
            for a in 0..r {
                for (j, &b) in cols.iter().enumerate() {
                    sums[(a, b)] += agg[(a, j)];
                }
            }
            let value = f_p(&sums, &rs, &sizes(cols, c), p);
            if best.as_ref().is_none_or(|(v, _, _)| value > *v) {
                best = Some((value, rows.to_vec(), cols.to_vec()));
            }
        });
    });
    let (objective, row_labels, col_labels) = best.expect("r ≤ n and c ≤ m admit a partition");
    ClusteringResult {
        partition: TwoModePartition {
            row_labels,
            col_labels,
            r,
            c,
        },
        objective,
        p,
        method: Method::Exhaustive,
        history: Vec::new(),
    }
}

/// Deterministic balanced starts: round-robin labelings shifted by each
/// offset below `max(r, c)`, then contiguous runs.
fn starts(n: usize, m: usize, r: usize, c: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for offset in 0..r.max(c) {
        out.push((
            (0..n).map(|i| (i + offset) % r).collect(),
            (0..m).map(|j| (j + offset) % c).collect(),
        ));
    }
    out.push(((0..n).map(|i| i * r / n).collect(), (0..m).map(|j| j * c / m).collect()));
    out.dedup();
    out
}

struct SearchState<'a> {
    x: &'a Matrix,
    p: f64,
    rows: Vec<usize>,
    cols: Vec<usize>,
    row_sizes: Vec<usize>,
    col_sizes: Vec<usize>,
    sums: Matrix,
    value: f64,
}

impl SearchState<'_> {
    /// Best single-row reassignment for row `i`, if it improves.
    fn best_row_move(&self, i: usize, eps: f64) -> Option<(usize, f64, Matrix)> {
        let from = self.rows[i];
        if self.row_sizes[from] == 1 {
            return None;
        }
        let mut delta_row = vec![0.0; self.sums.ncols()];
        for (j, &b) in self.cols.iter().enumerate() {
            delta_row[b] += self.x[(i, j)];
        }
        let mut best: Option<(usize, f64, Matrix)> = None;
        for to in 0..self.row_sizes.len() {
            if to == from {
                continue;
            }
            let mut sums = self.sums.clone();
            for (b, d) in delta_row.iter().enumerate() {
                sums[(from, b)] -= d;
                sums[(to, b)] += d;
            }
            let mut rs = self.row_sizes.clone();
            rs[from] -= 1;
            rs[to] += 1;
            let value = f_p(&sums, &rs, &self.col_sizes, self.p);
            let bar = best.as_ref().map_or(self.value + eps, |(_, v, _)| *v);
            if value > bar {
                best = Some((to, value, sums));
            }
        }
        best
    }

    fn best_col_move(&self, j: usize, eps: f64) -> Option<(usize, f64, Matrix)> {
        let from = self.cols[j];
        if self.col_sizes[from] == 1 {
            return None;
        }
        let mut delta_col = vec![0.0; self.sums.nrows()];
        for (i, &a) in self.rows.iter().enumerate() {
            delta_col[a] += self.x[(i, j)];
        }
        let mut best: Option<(usize, f64, Matrix)> = None;
        for to in 0..self.col_sizes.len() {
            if to == from {
                continue;
            }
            let mut sums = self.sums.clone();
            for (a, d) in delta_col.iter().enumerate() {
                sums[(a, from)] -= d;
                sums[(a, to)] += d;
            }
            let mut cs = self.col_sizes.clone();
            cs[from] -= 1;
            cs[to] += 1;
            let value = f_p(&sums, &self.row_sizes, &cs, self.p);
            let bar = best.as_ref().map_or(self.value + eps, |(_, v, _)| *v);
            if value > bar {
                best = Some((to, value, sums));
            }
        }
        best
    }
}

fn local_search(x: &Matrix, r: usize, c: usize, p: f64) -> ClusteringResult {
    let (n, m) = (x.nrows(), x.ncols());
    let eps = IMPROVEMENT_REL * (1.0 + x.l1_norm());
    let mut best: Option<(SearchState, Vec<f64>)> = None;
    for (rows, cols) in starts(n, m, r, c) {
        let row_sizes = sizes(&rows, r);
        let col_sizes = sizes(&cols, c);
        let sums = block_sums(x, &rows, r, &cols, c);
        let value = f_p(&sums, &row_sizes, &col_sizes, p);
        let mut state = SearchState {
            x,
            p,
            rows,
            cols,
            row_sizes,
            col_sizes,
            sums,
            value,
        };
        let mut history = vec![state.value];
        loop {
            let mut moved = false;
            for i in 0..n {
                if let Some((to, value, sums)) = state.best_row_move(i, eps) {
                    let from = state.rows[i];
                    state.row_sizes[from] -= 1;
                    state.row_sizes[to] += 1;
                    state.rows[i] = to;
                    state.sums = sums;
                    state.value = value;
                    history.push(value);
                    moved = true;
                }
            }
            for j in 0..m {
                if let Some((to, value, sums)) = state.best_col_move(j, eps) {
                    let from = state.cols[j];
                    state.col_sizes[from] -= 1;
                    state.col_sizes[to] += 1;
                    state.cols[j] = to;
                    state.sums = sums;
                    state.value = value;
                    history.push(value);
                    moved = true;
                }
            }
            if !moved {
                break;
            }
        }
        if best.as_ref().is_none_or(|(b, _)| state.value > b.value) {
            best = Some((state, history));
        }
    }
    let (state, history) = best.expect("at least one start");
    ClusteringResult {
        partition: TwoModePartition {
            row_labels: state.rows,
            col_labels: state.cols,
            r,
            c,
        },
        objective: state.value,
        p,
        method: Method::LocalSearch,
        history,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residual::{additive_double_center, ResidualKind};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_x(rng: &mut ChaCha8Rng, n: usize, m: usize) -> ResidualMatrix {
        additive_double_center(&Matrix::from_fn(n, m, |_, _| rng.gen_range(-1.0..1.0))).unwrap()
    }

    /// f_p straight from the definition, over explicit index sets.
    fn direct_objective(x: &Matrix, rows: &[Vec<usize>], cols: &[Vec<usize>], p: f64) -> f64 {
        let mut total = 0.0;
        for s in rows {
            for t in cols {
                let area = (s.len() * t.len()) as f64;
                total += area * libm::pow((x.block_sum(s, t) / area).abs(), p);
            }
        }
        total
    }

    #[test]
    fn stirling_numbers() {
        assert_eq!(stirling2(5, 2), 15.0);
        assert_eq!(stirling2(4, 2), 7.0);
        assert_eq!(stirling2(10, 3), 9330.0);
        assert_eq!(stirling2(3, 4), 0.0);
        let mut count = 0;
        for_each_partition(6, 3, &mut |_| count += 1);
        assert_eq!(count as f64, stirling2(6, 3));
    }

    #[test]
    fn partition_validation() {
        assert!(TwoModePartition::new(vec![0, 0], 2, vec![0], 1).is_err());
        assert!(TwoModePartition::new(vec![0, 2], 2, vec![0], 1).is_err());
        assert!(TwoModePartition::from_blocks(&[vec![0], vec![0, 1]], 2, &[vec![0]], 1).is_err());
        assert!(TwoModePartition::from_blocks(&[vec![0]], 2, &[vec![0]], 1).is_err());
        let ok = TwoModePartition::from_blocks(&[vec![1], vec![0, 2]], 3, &[vec![0, 1]], 2).unwrap();
        assert_eq!(ok.row_labels(), &[1, 0, 1]);
    }

    #[test]
    fn p_one_is_sum_of_absolute_block_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let x = random_x(&mut rng, 5, 4);
        let part = TwoModePartition::new(vec![0, 1, 2, 0, 1], 3, vec![1, 0, 1, 0], 2).unwrap();
        let rows = part.row_blocks();
        let cols = part.col_blocks();
        let want: f64 = rows
            .iter()
            .flat_map(|s| cols.iter().map(move |t| (s, t)))
            .map(|(s, t)| x.matrix().block_sum(s, t).abs())
            .sum();
        assert!((objective(&x, &part, 1.0).unwrap() - want).abs() < 1e-14);
        for p in [1.5, 2.0, 3.0] {
            let got = objective(&x, &part, p).unwrap();
            assert!((got - direct_objective(x.matrix(), &rows, &cols, p)).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_matrix_and_bad_parameters() {
        let x = ResidualMatrix::new(Matrix::zeros(3, 3), ResidualKind::Additive).unwrap();
        let part = TwoModePartition::new(vec![0, 1, 1], 2, vec![1, 0, 0], 2).unwrap();
        assert_eq!(objective(&x, &part, 2.0).unwrap(), 0.0);
        assert!(objective(&x, &part, 0.5).is_err());
        assert!(maximize(&x, 4, 2, 1.0, Method::Auto).is_err());
        let wrong = TwoModePartition::new(vec![0, 1], 2, vec![1, 0, 0], 2).unwrap();
        assert!(objective(&x, &wrong, 1.0).is_err());
    }

    #[test]
    fn singletons_give_entrywise_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let x = random_x(&mut rng, 4, 3);
        let res = maximize(&x, 4, 3, 1.0, Method::Auto).unwrap();
        assert_eq!(res.partition, TwoModePartition::singletons(4, 3));
        assert!((res.objective - x.matrix().l1_norm()).abs() < 1e-14);
        let res2 = maximize(&x, 4, 3, 2.0, Method::Auto).unwrap();
        let sq: f64 = x.matrix().as_slice().iter().map(|v| v * v).sum();
        assert!((res2.objective - sq).abs() < 1e-14);
    }

    #[test]
    fn random_5x4_p2_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10 {
            let x = random_x(&mut rng, 5, 4);
            // every nonempty proper subset pair, via bitmasks
            let mut want = f64::NEG_INFINITY;
            for rs in 1u32..(1 << 5) - 1 {
                let s: Vec<usize> = (0..5).filter(|i| rs >> i & 1 == 1).collect();
                let sb: Vec<usize> = (0..5).filter(|i| rs >> i & 1 == 0).collect();
                for cs in 1u32..(1 << 4) - 1 {
                    let t: Vec<usize> = (0..4).filter(|j| cs >> j & 1 == 1).collect();
                    let tb: Vec<usize> = (0..4).filter(|j| cs >> j & 1 == 0).collect();
                    want = want.max(direct_objective(x.matrix(), &[s.clone(), sb.clone()], &[t, tb], 2.0));
                }
            }
            let got = maximize(&x, 2, 2, 2.0, Method::Exhaustive).unwrap();
            assert!((got.objective - want).abs() <= 1e-12 * want);
            let local = maximize(&x, 2, 2, 2.0, Method::LocalSearch).unwrap();
            assert!(local.objective <= got.objective * (1.0 + 1e-12));
        }
    }

    #[test]
    fn local_search_history_is_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        for _ in 0..10 {
            let x = random_x(&mut rng, 9, 7);
            let res = maximize(&x, 3, 3, 1.5, Method::LocalSearch).unwrap();
            assert_eq!(res.method, Method::LocalSearch);
            assert!(res.history.windows(2).all(|w| w[1] > w[0]));
            assert_eq!(*res.history.last().unwrap(), res.objective);
            let check = objective(&x, &res.partition, 1.5).unwrap();
            assert!((check - res.objective).abs() < 1e-12);
        }
    }
}
