//! `(∞,∞)→1` norm of a triple-centered array.
//!
//! `δ = max Σ u_i·v_j·w_k·x_ijk` over sign vectors on the three modes. With
//! `S = {u = +1}`, `T = {v = +1}`, `W = {w = +1}`, complementing any one of
//! the three sets negates a block sum, so all eight octant sums have
//! magnitude `δ/8`.

use alloc::vec;
use alloc::vec::Vec;

use crate::residual::Tensor3;
use crate::sign::{SignVector, ZERO_FLOOR_REL};
use crate::taxicab::SolverMode;
use crate::{Error, Result};

/// The two smallest modes are enumerated exhaustively while their sizes
/// sum to at most this many bits.
pub const EXHAUSTIVE_MAX_BITS: usize = 22;

const TIE_REL: f64 = 1e-14;
const RESYNC_EVERY: u64 = 256;
const MAX_CYCLES: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct TensorAxis {
    pub delta: f64,
    /// Mode `I`, length `n`.
    pub u: SignVector,
    /// Mode `J`, length `m`.
    pub v: SignVector,
    /// Mode `K`, length `t`.
    pub w: SignVector,
    /// See [`OctantReport::sums`].
    pub octant_sums: [f64; 8],
    pub exact: bool,
}

/// The eight block sums over `S/S̄ × T/T̄ × W/W̄`.
#[derive(Debug, Clone, PartialEq)]
pub struct OctantReport {
    pub s_opt: Vec<usize>,
    pub t_opt: Vec<usize>,
    pub w_opt: Vec<usize>,
    /// Index `4·[i∉S] + 2·[j∉T] + [k∉W]`; expected signs
    /// `(+,−,−,+,−,+,+,−)`.
    pub sums: [f64; 8],
    pub delta: f64,
}

impl OctantReport {
    /// Largest deviation of an octant sum from `±δ/8`.
    pub fn defect(&self) -> f64 {
        let c = self.delta / 8.0;
        (0..8).fold(0.0_f64, |m, idx| {
            let sign = if (idx as u32).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
            m.max((self.sums[idx] - sign * c).abs())
        })
    }
}

pub fn tensor_norm(x: &Tensor3, mode: SolverMode) -> Result<TensorAxis> {
    match mode {
        SolverMode::Exact => tensor_norm_exact(x),
        SolverMode::Heuristic => Ok(tensor_norm_heuristic(x)),
        SolverMode::Auto => match tensor_norm_exact(x) {
            Err(e) if e.is_budget() => Ok(tensor_norm_heuristic(x)),
            other => other,
        },
    }
}

/// Enumerates sign vectors on the two smallest modes; the third mode takes
/// the signs of the contracted fibers. Ties keep the lexicographically
/// smallest pair of enumerated sign vectors.
pub fn tensor_norm_exact(x: &Tensor3) -> Result<TensorAxis> {
    let dims = x.dims();
    let mut modes = [0usize, 1, 2];
    modes.sort_by_key(|&md| dims[md]);
    let (e1, e2, free) = (modes[0], modes[1], modes[2]);
    let (p, q, r) = (dims[e1], dims[e2], dims[free]);
    if p + q > EXHAUSTIVE_MAX_BITS {
        return Err(Error::OverBudget {
            bits: p + q - 1,
            budget: EXHAUSTIVE_MAX_BITS - 1,
            hint: "tensor_norm_heuristic",
        });
    }

    // view[a][b][c] with a over e1, b over e2, c over the free mode
    let at = |a: usize, b: usize, c: usize| {
        let mut idx = [0usize; 3];
        idx[e1] = a;
        idx[e2] = b;
        idx[free] = c;
        x.get(idx[0], idx[1], idx[2])
    };
    let view: Vec<f64> = (0..p)
        .flat_map(|a| (0..q).flat_map(move |b| (0..r).map(move |c| (a, b, c))))
        .map(|(a, b, c)| at(a, b, c))
        .collect();
    let slab = |a: usize, b: usize| &view[(a * q + b) * r..(a * q + b + 1) * r];
    let tie = TIE_REL * x.array().l1_norm();

    // pass 1: maximum; pass 2: smallest key within the tie band
    let scan = |visit: &mut dyn FnMut(u64, f64)| {
        let mut fibers = vec![0.0; q * r];
        for key1 in 0u64..(1u64 << (p - 1)) {
            let s1 = SignVector::from_lex_key(key1, p).to_f64();
            fibers.iter_mut().for_each(|f| *f = 0.0);
            for (a, &sa) in s1.iter().enumerate() {
                for b in 0..q {
                    for (f, &xv) in fibers[b * r..(b + 1) * r].iter_mut().zip(slab(a, b)) {
                        *f += sa * xv;
                    }
                }
            }
            let rebuild = |s2: &[f64], acc: &mut [f64]| {
                acc.iter_mut().for_each(|c| *c = 0.0);
                for (b, &sb) in s2.iter().enumerate() {
                    for (c, &f) in acc.iter_mut().zip(&fibers[b * r..(b + 1) * r]) {
                        *c += sb * f;
                    }
                }
            };
            let mut s2 = vec![1.0; q];
            let mut acc = vec![0.0; r];
            rebuild(&s2, &mut acc);
            visit(key1 << q, l1(&acc));
            for g in 1u64..(1u64 << q) {
                let bit = g.trailing_zeros() as usize;
                let b = q - 1 - bit;
                s2[b] = -s2[b];
                if g % RESYNC_EVERY == 0 {
                    rebuild(&s2, &mut acc);
                } else {
                    let s = 2.0 * s2[b];
                    for (c, &f) in acc.iter_mut().zip(&fibers[b * r..(b + 1) * r]) {
                        *c += s * f;
                    }
                }
                visit((key1 << q) | (g ^ (g >> 1)), l1(&acc));
            }
        }
    };
    let mut max = f64::NEG_INFINITY;
    scan(&mut |_, value| max = max.max(value));
    let mut best = u64::MAX;
    scan(&mut |key, value| {
        if value >= max - tie && key < best {
            best = key;
        }
    });

    let s1 = SignVector::from_lex_key(best >> q, p);
    let s2 = SignVector::from_lex_key(best & ((1u64 << q) - 1), q);
    let mut signs: [SignVector; 3] = [SignVector::ones(dims[0]), SignVector::ones(dims[1]), SignVector::ones(dims[2])];
    signs[e1] = s1;
    signs[e2] = s2;
    let floor = ZERO_FLOOR_REL * x.array().l1_norm();
    let fiber = contract(x, free, &signs);
    signs[free] = SignVector::from_values(&fiber, floor);
    let [u, v, w] = signs;
    Ok(build_axis(x, u, v, w, true))
}

/// Trace of one cyclic alternating run.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorRun {
    /// Objective after every single-mode update.
    pub deltas: Vec<f64>,
    pub u: SignVector,
    pub v: SignVector,
    pub w: SignVector,
}

/// Cyclic updates `u ← sign(X ×₂ v ×₃ w)`, then `v`, then `w`, until a
/// whole cycle changes nothing.
pub fn tensor_alternating_run(x: &Tensor3, v0: SignVector, w0: SignVector) -> TensorRun {
    let floor = ZERO_FLOOR_REL * x.array().l1_norm();
    let mut signs = [SignVector::ones(x.dims()[0]), v0, w0];
    let mut deltas = Vec::new();
    for _ in 0..MAX_CYCLES {
        let mut changed = false;
        for mode in 0..3 {
            let fiber = contract(x, mode, &signs);
            deltas.push(l1(&fiber));
            let next = SignVector::from_values(&fiber, floor);
            if next != signs[mode] {
                changed = true;
                signs[mode] = next;
            }
        }
        if !changed {
            break;
        }
    }
    let [u, v, w] = signs;
    TensorRun { deltas, u, v, w }
}

/// Alternating search with one deterministic start per mode-`J` slice.
///
/// Slice `j` starts from `v⁰ = 2·e_j − 1`, which turns the mode-`J`
/// contraction into twice slice `j`, and `w⁰` equal to the signs of the
/// heaviest `I`-row of that slice.
pub fn tensor_norm_heuristic(x: &Tensor3) -> TensorAxis {
    let [n, m, t] = x.dims();
    let floor = ZERO_FLOOR_REL * x.array().l1_norm();
    let tie = TIE_REL * x.array().l1_norm();
    let mut best: Option<(f64, [SignVector; 3])> = None;
    for j in 0..m {
        let v0 = SignVector::new((0..m).map(|jj| if jj == j { 1 } else { -1 }).collect())
            .expect("signs are ±1");
        let heaviest = (0..n)
            .max_by(|&a, &b| {
                let mass = |i: usize| (0..t).map(|k| x.get(i, j, k).abs()).sum::<f64>();
                mass(a).total_cmp(&mass(b)).then(b.cmp(&a))
            })
            .unwrap_or(0);
        let row: Vec<f64> = (0..t).map(|k| x.get(heaviest, j, k)).collect();
        let run = tensor_alternating_run(x, v0, SignVector::from_values(&row, floor));
        let delta = run.deltas.last().copied().unwrap_or(0.0);
        let signs = [run.u, run.v, run.w];
        let better = match &best {
            None => true,
            Some((d, s)) => delta > d + tie || (delta >= d - tie && lex_less(&signs, s)),
        };
        if better {
            best = Some((delta, signs));
        }
    }
    let [u, v, w] = best.map_or_else(
        || [SignVector::ones(n), SignVector::ones(m), SignVector::ones(t)],
        |(_, s)| s,
    );
    build_axis(x, u, v, w, false)
}

pub fn octant_report(x: &Tensor3, axis: &TensorAxis) -> OctantReport {
    OctantReport {
        s_opt: axis.u.positive_indices(),
        t_opt: axis.v.positive_indices(),
        w_opt: axis.w.positive_indices(),
        sums: octant_sums(x, &axis.u, &axis.v, &axis.w),
        delta: axis.delta,
    }
}

fn lex_less(a: &[SignVector; 3], b: &[SignVector; 3]) -> bool {
    for (x, y) in a.iter().zip(b) {
        match x.lex_cmp(y) {
            core::cmp::Ordering::Equal => continue,
            ord => return ord.is_lt(),
        }
    }
    false
}

fn l1(values: &[f64]) -> f64 {
    values.iter().map(|x| x.abs()).sum()
}

/// Contracts every mode except `keep` against its sign vector.
fn contract(x: &Tensor3, keep: usize, signs: &[SignVector; 3]) -> Vec<f64> {
    let [n, m, t] = x.dims();
    let mut out = vec![0.0; x.dims()[keep]];
    for i in 0..n {
        for j in 0..m {
            for k in 0..t {
                let idx = [i, j, k];
                let weight: f64 = (0..3)
                    .filter(|&md| md != keep)
                    .map(|md| f64::from(signs[md].get(idx[md])))
                    .product();
                out[idx[keep]] += weight * x.get(i, j, k);
            }
        }
    }
    out
}

fn octant_sums(x: &Tensor3, u: &SignVector, v: &SignVector, w: &SignVector) -> [f64; 8] {
    let [n, m, t] = x.dims();
    let mut sums = [0.0; 8];
    for i in 0..n {
        for j in 0..m {
            for k in 0..t {
                let idx = 4 * usize::from(u.get(i) < 0) + 2 * usize::from(v.get(j) < 0) + usize::from(w.get(k) < 0);
                sums[idx] += x.get(i, j, k);
            }
        }
    }
    sums
}

fn build_axis(x: &Tensor3, u: SignVector, v: SignVector, w: SignVector, exact: bool) -> TensorAxis {
    let octant_sums = octant_sums(x, &u, &v, &w);
    let delta = (0..8)
        .map(|idx: usize| {
            let sign = if idx.count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
            sign * octant_sums[idx]
        })
        .sum();
    TensorAxis {
        delta,
        u,
        v,
        w,
        octant_sums,
        exact,
    }
}
