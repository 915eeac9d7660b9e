//! Enumeration of square positive-integer matrices M with M^2 = d*M.
//!
//! Any such matrix is diagonalizable with eigenvalues 0 and d only, and the
//! Perron-Frobenius eigenvalue d has multiplicity one, so M has rank one and
//! trace d. The structured enumerator exploits this; `brute_force_roots` is
//! the independent oracle that only ever checks M^2 = d*M.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canonical::{canonical_form, Permutation};
use crate::{Int, Mat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RootError {
    #[error("dimension must be positive")]
    ZeroDim,
    #[error("matrix is not a valid root: {0}")]
    InvalidRoot(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootMode {
    Raw,
    Canonical,
}

/// A k x k positive-integer matrix with M^2 = d*M (hence rank one and
/// trace d, with k <= d).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CandidateMatrix {
    pub d: Int,
    pub m: Mat,
}

impl CandidateMatrix {
    pub fn new(m: Mat, d: Int) -> Result<Self, RootError> {
        if !verify_root(&m, d) {
            return Err(RootError::InvalidRoot(format!(
                "expected positive entries and M^2 = {d}M"
            )));
        }
        debug_assert!(m.rank_at_most_one());
        debug_assert_eq!(m.trace(), d);
        debug_assert!(m.rows() as Int <= d);
        Ok(CandidateMatrix { d, m })
    }

    pub fn k(&self) -> usize {
        self.m.rows()
    }
}

/// True iff all entries are at least 1 and M^2 = d*M exactly.
pub fn verify_root(m: &Mat, d: Int) -> bool {
    m.is_square() && m.rows() > 0 && m.all_positive() && m.mul(m) == m.scale(d)
}

/// Weakly decreasing positive compositions of d into k parts.
fn decreasing_diagonals(d: Int, k: usize) -> Vec<Vec<Int>> {
    fn rec(remaining: Int, parts: usize, max: Int, current: &mut Vec<Int>, out: &mut Vec<Vec<Int>>) {
        if parts == 0 {
            if remaining == 0 {
                out.push(current.clone());
            }
            return;
        }
        let hi = max.min(remaining - (parts as Int - 1));
        for v in (1..=hi).rev() {
            current.push(v);
            rec(remaining - v, parts - 1, v, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, k, d, &mut Vec::new(), &mut out);
    out
}

/// All rank-one solutions for a fixed diagonal. A rank-one matrix is
/// determined by its first row and column: M[i][j] = M[i][0]*M[0][j]/M[0][0],
/// and the off-diagonal first-row/column entries pair into divisors of
/// M[0][0]*M[i][i].
fn solutions_for_diagonal(d: Int, diag: &[Int]) -> Vec<Mat> {
    let k = diag.len();
    if k == 1 {
        let m = Mat::from_rows(vec![vec![diag[0]]]);
        return if verify_root(&m, d) { vec![m] } else { vec![] };
    }
    // Divisor pairs (row entry, column entry) for each i >= 1.
    let mut choices: Vec<Vec<(Int, Int)>> = Vec::with_capacity(k - 1);
    for i in 1..k {
        let product = diag[0] * diag[i];
        let mut pairs = Vec::new();
        for r in 1..=product {
            if product % r == 0 {
                pairs.push((r, product / r));
            }
        }
        choices.push(pairs);
    }
    let mut out = Vec::new();
    let mut picked: Vec<(Int, Int)> = Vec::with_capacity(k - 1);
    fn rec(
        d: Int,
        diag: &[Int],
        choices: &[Vec<(Int, Int)>],
        picked: &mut Vec<(Int, Int)>,
        out: &mut Vec<Mat>,
    ) {
        let k = diag.len();
        if picked.len() == k - 1 {
            let mut m = Mat::zeros(k, k);
            for i in 0..k {
                m[(i, i)] = diag[i];
            }
            for i in 1..k {
                m[(0, i)] = picked[i - 1].0;
                m[(i, 0)] = picked[i - 1].1;
            }
            for i in 1..k {
                for j in 1..k {
                    if i == j {
                        continue;
                    }
                    let numerator = m[(i, 0)] * m[(0, j)];
                    if numerator % diag[0] != 0 {
                        return;
                    }
                    m[(i, j)] = numerator / diag[0];
                }
            }
            if verify_root(&m, d) {
                out.push(m);
            }
            return;
        }
        for &pair in &choices[picked.len()] {
            picked.push(pair);
            rec(d, diag, choices, picked, out);
            picked.pop();
        }
    }
    rec(d, diag, &choices, &mut picked, &mut out);
    out
}

/// Enumerates all roots of M^2 = d*M with positive entries, either raw
/// (every solution) or canonical (one representative per permutation orbit,
/// each a fixed point of the canonical form). Output is sorted.
pub fn enumerate_roots(d: Int, mode: RootMode) -> Result<Vec<CandidateMatrix>, RootError> {
    if d < 1 {
        return Err(RootError::ZeroDim);
    }
    let diagonals: Vec<Vec<Int>> = (1..=d as usize)
        .flat_map(|k| decreasing_diagonals(d, k))
        .collect();
    let seeds: Vec<Mat> = diagonals
        .par_iter()
        .flat_map_iter(|diag| solutions_for_diagonal(d, diag))
        .collect();

    let mut out: Vec<Mat> = match mode {
        RootMode::Canonical => seeds.iter().map(|m| canonical_form(m).0).collect(),
        RootMode::Raw => seeds
            .iter()
            .flat_map(|m| {
                Permutation::all(m.rows())
                    .into_iter()
                    .map(|sigma| crate::canonical::act(&sigma, m))
            })
            .collect(),
    };
    out.sort_by(|a, b| (a.rows(), a.flat()).cmp(&(b.rows(), b.flat())));
    out.dedup();
    Ok(out
        .into_iter()
        .map(|m| CandidateMatrix::new(m, d).expect("enumerated roots are valid"))
        .collect())
}

/// Exhaustive oracle: every k x k matrix with k <= d satisfying M^2 = d*M.
/// Depth-first over growing leading blocks, pruning with the partial sums of
/// the M^2 = d*M constraints (every undetermined term contributes at least 1).
/// Sorted output.
///
/// A positive rank-one root can carry off-diagonal entries up to d^2/4
/// (diagonal pair a + b = d gives an off-diagonal a*b, e.g. 6 = 3*2 when
/// d = 5), so the scan cap is raised to that bound internally; `entry_cap`
/// only ever widens the scan.
pub fn brute_force_roots(d: Int, entry_cap: Int) -> Vec<CandidateMatrix> {
    assert!(entry_cap >= d, "entry cap below d cannot be complete");
    let cap = entry_cap.max((d * d) / 4);
    let mut out: Vec<Mat> = (1..=d as usize)
        .into_par_iter()
        .flat_map_iter(|k| brute_force_size(d, cap, k))
        .collect();
    out.sort_by(|a, b| (a.rows(), a.flat()).cmp(&(b.rows(), b.flat())));
    out.dedup();
    out.into_iter()
        .map(|m| CandidateMatrix::new(m, d).expect("oracle outputs satisfy the root equation"))
        .collect()
}

fn brute_force_size(d: Int, cap: Int, k: usize) -> Vec<Mat> {
    // Assignment order grows the leading principal block: (0,0), then for
    // each m the new row/column entries of the (m+1) x (m+1) block.
    let mut order: Vec<(usize, usize)> = vec![(0, 0)];
    for m in 1..k {
        for i in 0..=m {
            order.push((i, m));
        }
        for j in 0..m {
            order.push((m, j));
        }
    }

    let mut assigned = Mat::zeros(k, k); // 0 = unassigned; entries are >= 1
    let mut out = Vec::new();
    dfs(d, cap, k, &order, 0, &mut assigned, &mut out);
    out
}

fn dfs(d: Int, cap: Int, k: usize, order: &[(usize, usize)], pos: usize, m: &mut Mat, out: &mut Vec<Mat>) {
    if pos == order.len() {
        if m.mul(m) == m.scale(d) {
            out.push(m.clone());
        }
        return;
    }
    let (i, j) = order[pos];
    for v in 1..=cap {
        m[(i, j)] = v;
        if partial_feasible(d, cap, k, m) {
            dfs(d, cap, k, order, pos + 1, m, out);
        }
    }
    m[(i, j)] = 0;
}

/// Interval check of every (i,t) constraint of M^2 = d*M on a partial
/// assignment (0 entries are unassigned, real entries are positive).
fn partial_feasible(d: Int, cap: Int, k: usize, m: &Mat) -> bool {
    for i in 0..k {
        for t in 0..k {
            let mut low = 0;
            let mut high = 0;
            let mut complete = true;
            for j in 0..k {
                let a = m[(i, j)];
                let b = m[(j, t)];
                if a > 0 && b > 0 {
                    low += a * b;
                    high += a * b;
                } else {
                    complete = false;
                    low += 1; // unassigned entries are at least 1
                    high += cap * cap;
                }
            }
            let target = m[(i, t)];
            let (rlow, rhigh) = if target > 0 {
                (d * target, d * target)
            } else {
                (d, d * cap)
            };
            if complete && target > 0 {
                if low != d * target {
                    return false;
                }
            } else if low > rhigh || high < rlow {
                return false;
            }
        }
    }
    true
}
