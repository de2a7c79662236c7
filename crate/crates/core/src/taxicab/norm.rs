use alloc::vec;
use alloc::vec::Vec;

use super::TaxicabAxis;
use crate::residual::ResidualMatrix;
use crate::sign::{SignVector, ZERO_FLOOR_REL};
use crate::{Error, Matrix, Result};

/// Largest `min(n, m)` searched exhaustively (2^21 sign vectors after the
/// global sign symmetry is removed).
pub const EXHAUSTIVE_MAX_SIDE: usize = 22;

/// Ties in the enumeration are values within this fraction of the total
/// `ℓ1` mass of the enumerated vectors.
const TIE_REL: f64 = 1e-14;

/// Running sums are rebuilt from scratch this often during Gray-code
/// enumeration.
const RESYNC_EVERY: u64 = 256;

const MAX_TRANSITIONS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverMode {
    /// Exhaustive when `min(n, m) ≤ EXHAUSTIVE_MAX_SIDE`, alternating otherwise.
    #[default]
    Auto,
    Exact,
    Heuristic,
}

/// Dispatches on `mode`.
pub fn norm(x: &ResidualMatrix, mode: SolverMode) -> Result<TaxicabAxis> {
    match mode {
        SolverMode::Exact => norm_exact(x),
        SolverMode::Heuristic => Ok(norm_heuristic(x)),
        SolverMode::Auto => {
            if x.nrows().min(x.ncols()) <= EXHAUSTIVE_MAX_SIDE {
                norm_exact(x)
            } else {
                Ok(norm_heuristic(x))
            }
        }
    }
}

/// Globally optimal axis by enumerating the sign vectors of the smaller side.
///
/// Among optimal sign vectors of the enumerated side the lexicographically
/// smallest (with `+1` before `-1`) is kept; the result is then driven to a
/// fixed point of the transition formulas and oriented so that the largest
/// `|b_j|` is positive.
pub fn norm_exact(x: &ResidualMatrix) -> Result<TaxicabAxis> {
    let m = x.matrix();
    let side = m.nrows().min(m.ncols());
    if side > EXHAUSTIVE_MAX_SIDE {
        return Err(Error::OverBudget {
            bits: side - 1,
            budget: EXHAUSTIVE_MAX_SIDE - 1,
            hint: "norm_heuristic",
        });
    }
    let floor = ZERO_FLOOR_REL * m.l1_norm();
    let start_u = if m.ncols() <= m.nrows() {
        let columns: Vec<Vec<f64>> = (0..m.ncols()).map(|j| m.column(j).collect()).collect();
        let key = best_sign_key(&columns);
        SignVector::from_lex_key(key, m.ncols())
    } else {
        let rows: Vec<Vec<f64>> = (0..m.nrows()).map(|i| m.row(i).to_vec()).collect();
        let key = best_sign_key(&rows);
        let v = SignVector::from_lex_key(key, m.nrows());
        SignVector::from_values(&m.tr_mul_vec(&v.to_f64()), floor)
    };
    Ok(finish(m, start_u, floor, true))
}

/// Alternating transition-formula search, one start per column of `X`
/// (`v⁰ = sign(column j)`); the best fixed point over all starts is kept.
pub fn norm_heuristic(x: &ResidualMatrix) -> TaxicabAxis {
    let m = x.matrix();
    let floor = ZERO_FLOOR_REL * m.l1_norm();
    let tie = TIE_REL * m.l1_norm();
    let mut best: Option<(f64, SignVector)> = None;
    for j in 0..m.ncols() {
        let column: Vec<f64> = m.column(j).collect();
        let run = alternating_run(m, SignVector::from_values(&column, floor));
        let delta = run.deltas.last().copied().unwrap_or(0.0);
        let better = match &best {
            None => true,
            Some((d, u)) => delta > d + tie || (delta >= d - tie && run.u.lex_cmp(u).is_lt()),
        };
        if better {
            best = Some((delta, run.u));
        }
    }
    let start_u = best.map_or_else(|| SignVector::ones(m.ncols()), |(_, u)| u);
    finish(m, start_u, floor, false)
}

/// Trace of one alternating run started from a row sign vector.
#[derive(Debug, Clone, PartialEq)]
pub struct AlternatingRun {
    /// `‖X'v‖₁, ‖Xu‖₁, ‖X'v‖₁, …` in the order they were produced.
    pub deltas: Vec<f64>,
    pub u: SignVector,
    pub v: SignVector,
}

/// Iterates `u ← sign(X'v)`, `v ← sign(Xu)` from `v0` until `v` repeats.
pub fn alternating_run(x: &Matrix, v0: SignVector) -> AlternatingRun {
    let floor = ZERO_FLOOR_REL * x.l1_norm();
    let mut v = v0;
    let mut deltas = Vec::new();
    let mut u = SignVector::ones(x.ncols());
    for _ in 0..MAX_TRANSITIONS {
        let b = x.tr_mul_vec(&v.to_f64());
        deltas.push(l1(&b));
        u = SignVector::from_values(&b, floor);
        let a = x.mul_vec(&u.to_f64());
        deltas.push(l1(&a));
        let next = SignVector::from_values(&a, floor);
        if next == v {
            break;
        }
        v = next;
    }
    AlternatingRun { deltas, u, v }
}

fn l1(values: &[f64]) -> f64 {
    values.iter().map(|x| x.abs()).sum()
}

/// Lexicographically smallest key among the sign vectors `s` (with
/// `s₀ = +1`) maximizing `‖Σⱼ sⱼ·vectorsⱼ‖₁`.
fn best_sign_key(vectors: &[Vec<f64>]) -> u64 {
    let q = vectors.len();
    if q <= 1 {
        return 0;
    }
    let len = vectors[0].len();
    let scale: f64 = vectors.iter().map(|v| l1(v)).sum();
    let tie = TIE_REL * scale;

    // Gray-code walk over the q − 1 free signs; `visit` sees (key, value).
    let walk = |visit: &mut dyn FnMut(u64, f64)| {
        let mut signs = vec![1.0_f64; q];
        let rebuild = |signs: &[f64], acc: &mut Vec<f64>| {
            acc.iter_mut().for_each(|a| *a = 0.0);
            for (s, vec) in signs.iter().zip(vectors) {
                for (a, x) in acc.iter_mut().zip(vec) {
                    *a += s * x;
                }
            }
        };
        let mut acc = vec![0.0; len];
        rebuild(&signs, &mut acc);
        visit(0, l1(&acc));
        for g in 1u64..(1u64 << (q - 1)) {
            let bit = g.trailing_zeros() as usize;
            let j = q - 1 - bit;
            signs[j] = -signs[j];
            if g % RESYNC_EVERY == 0 {
                rebuild(&signs, &mut acc);
            } else {
                let s2 = 2.0 * signs[j];
                for (a, x) in acc.iter_mut().zip(&vectors[j]) {
                    *a += s2 * x;
                }
            }
            visit(g ^ (g >> 1), l1(&acc));
        }
    };

    let mut max = f64::NEG_INFINITY;
    walk(&mut |_, value| max = max.max(value));
    let mut best_key = u64::MAX;
    walk(&mut |key, value| {
        if value >= max - tie && key < best_key {
            best_key = key;
        }
    });
    best_key
}

struct FixedPoint {
    u: SignVector,
    v: SignVector,
    a: Vec<f64>,
    b: Vec<f64>,
}

/// Applies the transition formulas from `u` until `u` repeats.
fn polish(x: &Matrix, mut u: SignVector, floor: f64) -> FixedPoint {
    let mut state = None;
    for _ in 0..MAX_TRANSITIONS {
        let a = x.mul_vec(&u.to_f64());
        let v = SignVector::from_values(&a, floor);
        let b = x.tr_mul_vec(&v.to_f64());
        let next = SignVector::from_values(&b, floor);
        let done = next == u;
        state = Some(FixedPoint { u: u.clone(), v, a, b });
        if done {
            break;
        }
        u = next;
    }
    state.expect("at least one transition")
}

/// Largest `|b_j|` (first on ties) is negative.
fn needs_flip(b: &[f64]) -> bool {
    let mut idx = 0;
    for (j, x) in b.iter().enumerate() {
        if x.abs() > b[idx].abs() {
            idx = j;
        }
    }
    b.get(idx).is_some_and(|&x| x < 0.0)
}

fn finish(x: &Matrix, start_u: SignVector, floor: f64, exact: bool) -> TaxicabAxis {
    let mut fp = polish(x, start_u, floor);
    if needs_flip(&fp.b) {
        fp = polish(x, fp.u.negated(), floor);
    }
    let indeterminate = |values: &[f64]| -> Vec<usize> {
        values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| (v.abs() <= floor).then_some(i))
            .collect()
    };
    TaxicabAxis {
        delta: l1(&fp.a),
        indeterminate_rows: indeterminate(&fp.a),
        indeterminate_cols: indeterminate(&fp.b),
        u: fp.u,
        v: fp.v,
        a: fp.a,
        b: fp.b,
        exact,
    }
}
