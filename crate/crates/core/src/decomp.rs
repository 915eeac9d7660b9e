//! Splitting a candidate matrix M into a family {M_ij} of nonnegative
//! integer matrices obeying the composition table, with the trace, support,
//! rank-one-structure and adjunction filters.
//!
//! The structured search assigns one entry at a time, diagonal cells first,
//! and prunes with exact interval bounds on every partially determined
//! product constraint M_ij * M_st = D[j][s] * M_it. The final authority on
//! emission is always [`check_family`]; the support and adjunction filters
//! are additional necessary conditions applied to complete families.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AdjointPair, CompositionTable, UnitClass};
use crate::canonical::{canonical_form_family_under, stabilizer, MatrixFamily};
use crate::roots::CandidateMatrix;
use crate::{Int, Mat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecompError {
    #[error("target fails the root check: expected M^2 = dim(A) * M with dim(A) = {0}")]
    RootCheck(Int),
    #[error("brute-force size guard exceeded (k <= 3, entries <= 5)")]
    OracleGuard,
}

/// A family {M_ij} summing to the target candidate matrix and satisfying
/// the composition rules.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub target: CandidateMatrix,
    pub family: MatrixFamily<Int>,
}

/// Which necessary-condition filters the search applies. The multiplicative
/// constraints are not optional.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterSet {
    pub trace_budget: bool,
    pub column_support: bool,
    pub idempotent_rank_one: bool,
    pub adjunction: bool,
}

impl FilterSet {
    pub fn all() -> Self {
        FilterSet {
            trace_budget: true,
            column_support: true,
            idempotent_rank_one: true,
            adjunction: true,
        }
    }

    pub fn multiplicative_only() -> Self {
        FilterSet {
            trace_budget: false,
            column_support: false,
            idempotent_rank_one: false,
            adjunction: false,
        }
    }

    pub fn disable(&mut self, name: &str) -> Result<(), String> {
        match name {
            "trace_budget" => self.trace_budget = false,
            "column_support" => self.column_support = false,
            "idempotent_rank_one" => self.idempotent_rank_one = false,
            "adjunction" => self.adjunction = false,
            "multiplicative" => return Err("the multiplicative filter cannot be disabled".into()),
            other => return Err(format!("unknown filter `{other}`")),
        }
        Ok(())
    }
}

/// Exact check of all invariants of a complete family: the members sum to
/// the target, are all nonzero, satisfy M_ij * M_st = D[j][s] * M_it, and
/// carry the traces their unit class dictates.
pub fn check_family(dec: &Decomposition, table: &CompositionTable) -> bool {
    let n = table.n;
    let fam = &dec.family;
    if fam.n != n || fam.sum() != dec.target.m {
        return false;
    }
    if fam.members.iter().any(Mat::is_zero) {
        return false;
    }
    for i in 0..n {
        for j in 0..n {
            match table.unit_class0(i, j) {
                UnitClass::Nilpotent => {
                    if fam.member(i, j).trace() != 0 {
                        return false;
                    }
                }
                UnitClass::Idempotent => {
                    if fam.member(i, j).trace() < 1 {
                        return false;
                    }
                }
                UnitClass::Higher(c) => {
                    if fam.member(i, j).trace() % c != 0 {
                        return false;
                    }
                }
            }
            for s in 0..n {
                for t in 0..n {
                    let product = fam.member(i, j).mul(fam.member(s, t));
                    if product != fam.member(i, t).scale(table.d[(j, s)]) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Trace feasibility of a target matrix: nilpotent members need zero trace,
/// each idempotent member at least one unit of the diagonal, and members
/// sharing a diagonal position must have nonzero products in both orders.
/// When the idempotent count equals trace(M) every idempotent is pinned to
/// trace exactly one.
pub fn trace_budget_filter(target: &Mat, table: &CompositionTable) -> bool {
    let n = table.n;
    let idempotents: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| table.unit_class0(i, j) == UnitClass::Idempotent)
        .collect();
    let trace = target.trace();
    if (idempotents.len() as Int) > trace {
        return false;
    }
    if (idempotents.len() as Int) < trace {
        // Slack in the budget; nothing further to pin down here.
        return true;
    }
    // Pinned case: each idempotent takes exactly one diagonal unit. Look
    // for an assignment to diagonal positions, within the diagonal of M,
    // such that any two idempotents sharing a position compose to nonzero
    // in both orders.
    let k = target.rows();
    let mut capacity: Vec<Int> = (0..k).map(|p| target[(p, p)]).collect();
    let mut placed: Vec<(usize, usize, usize)> = Vec::new(); // (i, j, position)
    fn compatible(
        table: &CompositionTable,
        placed: &[(usize, usize, usize)],
        (i, j): (usize, usize),
        pos: usize,
    ) -> bool {
        placed.iter().all(|&(s, t, q)| {
            q != pos || (table.d[(j, s)] > 0 && table.d[(t, i)] > 0)
        })
    }
    fn search(
        table: &CompositionTable,
        idem: &[(usize, usize)],
        next: usize,
        capacity: &mut [Int],
        placed: &mut Vec<(usize, usize, usize)>,
    ) -> bool {
        if next == idem.len() {
            return true;
        }
        let (i, j) = idem[next];
        for pos in 0..capacity.len() {
            if capacity[pos] > 0 && compatible(table, placed, (i, j), pos) {
                capacity[pos] -= 1;
                placed.push((i, j, pos));
                if search(table, idem, next + 1, capacity, placed) {
                    return true;
                }
                placed.pop();
                capacity[pos] += 1;
            }
        }
        false
    }
    search(table, &idempotents, 0, &mut capacity, &mut placed)
}

/// A trace-one nonnegative idempotent matrix with its diagonal unit at
/// (r, r) is the outer product of its r-th column with its r-th row.
pub fn idempotent_structure_filter(m: &Mat, r: usize) -> bool {
    let k = m.rows();
    (0..k).all(|a| (0..k).all(|b| m[(a, b)] == m[(a, r)] * m[(r, b)]))
}

/// Column-support coherence: for a fixed algebra index j, a nonzero column
/// s in one member M_ij forces column s nonzero in every M_tj.
pub fn column_support_filter(fam: &MatrixFamily<Int>) -> bool {
    let n = fam.n;
    let k = fam.k;
    for j in 0..n {
        for s in 0..k {
            let nonzero = |i: usize| (0..k).any(|a| fam.member(i, j)[(a, s)] != 0);
            let any = (0..n).any(nonzero);
            if any && !(0..n).all(nonzero) {
                return false;
            }
        }
    }
    true
}

/// Adjunction support constraint: for an adjoint pair (G, H), a nonzero
/// entry (a, b) of [G] forces column a of [H] to be nonzero.
pub fn adjunction_filter(fam: &MatrixFamily<Int>, adjoints: &[AdjointPair]) -> bool {
    let k = fam.k;
    for pair in adjoints {
        let g = fam.member(pair.left.0, pair.left.1);
        let h = fam.member(pair.right.0, pair.right.1);
        for a in 0..k {
            for b in 0..k {
                if g[(a, b)] != 0 && (0..k).all(|x| h[(x, a)] == 0) {
                    return false;
                }
            }
        }
    }
    true
}

const UNASSIGNED: Int = -1;

struct Search<'a> {
    table: &'a CompositionTable,
    filters: FilterSet,
    n: usize,
    k: usize,
    /// classes[p] for part p = i * n + j.
    classes: Vec<UnitClass>,
    /// True when the idempotent count equals trace(M), pinning idempotent
    /// traces to exactly one.
    pinned: bool,
    /// parts[p] with UNASSIGNED sentinels for undetermined entries.
    parts: Vec<Mat>,
    /// Mass of the target not yet distributed at each cell.
    rem: Mat,
    /// Variable order: (cell, part) pairs, diagonal cells first.
    order: Vec<((usize, usize), usize)>,
    found: Vec<MatrixFamily<Int>>,
}

impl<'a> Search<'a> {
    fn new(target: &'a Mat, table: &'a CompositionTable, filters: FilterSet) -> Self {
        let n = table.n;
        let k = target.rows();
        let classes: Vec<UnitClass> = (0..n)
            .flat_map(|i| (0..n).map(move |j| table.unit_class0(i, j)))
            .collect();
        let idem_count = classes
            .iter()
            .filter(|c| **c == UnitClass::Idempotent)
            .count() as Int;
        let pinned = idem_count == target.trace();

        let mut cells: Vec<(usize, usize)> = (0..k).map(|p| (p, p)).collect();
        for a in 0..k {
            for b in 0..k {
                if a != b {
                    cells.push((a, b));
                }
            }
        }
        let order: Vec<((usize, usize), usize)> = cells
            .into_iter()
            .flat_map(|cell| (0..n * n).map(move |p| (cell, p)))
            .collect();

        Search {
            table,
            filters,
            n,
            k,
            classes,
            pinned,
            parts: vec![{
                let mut m = Mat::zeros(k, k);
                for a in 0..k {
                    for b in 0..k {
                        m[(a, b)] = UNASSIGNED;
                    }
                }
                m
            }; n * n],
            rem: target.clone(),
            order,
            found: Vec::new(),
        }
    }

    fn entry(&self, p: usize, a: usize, b: usize) -> Int {
        self.parts[p][(a, b)]
    }

    fn run(&mut self) {
        self.assign(0);
    }

    fn assign(&mut self, pos: usize) {
        if pos == self.order.len() {
            self.emit();
            return;
        }
        let ((a, b), p) = self.order[pos];
        let last_at_cell = p == self.n * self.n - 1;
        let max = self.rem[(a, b)];
        let domain: Vec<Int> = if last_at_cell {
            vec![max]
        } else {
            (0..=max).collect()
        };
        for v in domain {
            self.parts[p][(a, b)] = v;
            self.rem[(a, b)] -= v;
            if self.feasible(p, a, b) {
                self.assign(pos + 1);
            }
            self.rem[(a, b)] += v;
            self.parts[p][(a, b)] = UNASSIGNED;
        }
    }

    fn feasible(&self, p: usize, a: usize, b: usize) -> bool {
        if self.filters.trace_budget && a == b && !self.trace_ok(p) {
            return false;
        }
        if self.filters.idempotent_rank_one && !self.structure_ok(p) {
            return false;
        }
        self.products_ok(p, a, b)
    }

    /// Partial trace feasibility for part p (diagonal entry just changed).
    fn trace_ok(&self, p: usize) -> bool {
        let mut partial = 0;
        let mut complete = true;
        for x in 0..self.k {
            let v = self.entry(p, x, x);
            if v == UNASSIGNED {
                complete = false;
            } else {
                partial += v;
            }
        }
        match self.classes[p] {
            UnitClass::Nilpotent => partial == 0,
            UnitClass::Idempotent => {
                if self.pinned {
                    partial <= 1 && (!complete || partial == 1)
                } else {
                    !complete || partial >= 1
                }
            }
            UnitClass::Higher(c) => !complete || partial % c == 0,
        }
    }

    /// Rank-one outer-product structure of a pinned idempotent part once
    /// its diagonal unit position is known: entry (x, y) must equal the
    /// product of entries (x, r) and (r, y).
    fn structure_ok(&self, p: usize) -> bool {
        if !(self.pinned && self.classes[p] == UnitClass::Idempotent) {
            return true;
        }
        let r = match (0..self.k).find(|&x| self.entry(p, x, x) == 1) {
            Some(r) => r,
            None => return true, // unit not placed yet
        };
        for x in 0..self.k {
            for y in 0..self.k {
                let v = self.entry(p, x, y);
                let col = self.entry(p, x, r);
                let row = self.entry(p, r, y);
                if v != UNASSIGNED && col != UNASSIGNED && row != UNASSIGNED && v != col * row {
                    return false;
                }
            }
        }
        true
    }

    /// Interval check of every product constraint touched by the entry
    /// just assigned at part p, cell (a, b).
    fn products_ok(&self, p: usize, a: usize, b: usize) -> bool {
        let n = self.n;
        let (i, j) = (p / n, p % n);
        for q in 0..n * n {
            let (s, t) = (q / n, q % n);
            // p as left factor of (p, q): constraint rows a.
            for y in 0..self.k {
                if !self.interval_ok((i, j), (s, t), a, y) {
                    return false;
                }
            }
            // p as right factor of (q, p): constraint columns b.
            for x in 0..self.k {
                if !self.interval_ok((s, t), (i, j), x, b) {
                    return false;
                }
            }
        }
        // p as right-hand side of ((i, u), (v, j)) at cell (a, b).
        for u in 0..n {
            for v in 0..n {
                if !self.interval_ok((i, u), (v, j), a, b) {
                    return false;
                }
            }
        }
        true
    }

    /// Bounds on sum_c L[x][c] * R[c][y] against D * result[x][y], where
    /// unassigned entries range over 0..=rem at their cell.
    fn interval_ok(&self, left: (usize, usize), right: (usize, usize), x: usize, y: usize) -> bool {
        let n = self.n;
        let lp = left.0 * n + left.1;
        let rp = right.0 * n + right.1;
        let coeff = self.table.d[(left.1, right.0)];
        let res = left.0 * n + right.1;

        let mut low = 0;
        let mut high = 0;
        let mut complete = true;
        for c in 0..self.k {
            let u = self.entry(lp, x, c);
            let v = self.entry(rp, c, y);
            let (umin, umax) = if u == UNASSIGNED {
                complete = false;
                (0, self.rem[(x, c)])
            } else {
                (u, u)
            };
            let (vmin, vmax) = if v == UNASSIGNED {
                complete = false;
                (0, self.rem[(c, y)])
            } else {
                (v, v)
            };
            low += umin * vmin;
            high += umax * vmax;
        }
        let target = self.entry(res, x, y);
        let (rlow, rhigh) = if target == UNASSIGNED {
            (0, coeff * self.rem[(x, y)])
        } else {
            (coeff * target, coeff * target)
        };
        if complete && target != UNASSIGNED {
            low == rlow
        } else {
            low <= rhigh && high >= rlow
        }
    }

    fn emit(&mut self) {
        let members: Vec<Mat> = self.parts.clone();
        debug_assert!(members.iter().all(Mat::all_nonnegative));
        let fam = MatrixFamily::new(self.n, self.k, members);
        self.found.push(fam);
    }
}

/// Enumerates all decompositions of the target over the composition table,
/// pruned by the enabled filters, de-duplicated by canonical form under the
/// stabilizer of the target (the permutations that can identify families
/// without moving M), and deterministically sorted.
pub fn enumerate_decompositions(
    target: &CandidateMatrix,
    table: &CompositionTable,
    filters: FilterSet,
) -> Result<Vec<Decomposition>, DecompError> {
    enumerate_decompositions_with(target, table, filters, &table.adjoint_pairs())
}

/// Same as [`enumerate_decompositions`], with an explicit adjoint-pair list
/// (used when the projective-injective pairs are asserted by the caller
/// rather than detected).
pub fn enumerate_decompositions_with(
    target: &CandidateMatrix,
    table: &CompositionTable,
    filters: FilterSet,
    adjoints: &[AdjointPair],
) -> Result<Vec<Decomposition>, DecompError> {
    let dim: Int = table.d.flat().iter().sum();
    if target.d != dim || !crate::roots::verify_root(&target.m, dim) {
        return Err(DecompError::RootCheck(dim));
    }

    if filters.trace_budget && !trace_budget_filter(&target.m, table) {
        return Ok(Vec::new());
    }

    let mut search = Search::new(&target.m, table, filters);
    search.run();
    let candidates = std::mem::take(&mut search.found);

    let stab = stabilizer(&target.m);
    let mut seen: BTreeSet<Vec<Int>> = BTreeSet::new();
    let mut out: Vec<Decomposition> = Vec::new();
    for fam in candidates {
        let dec = Decomposition {
            target: target.clone(),
            family: fam,
        };
        if !check_family(&dec, table) {
            continue;
        }
        if filters.column_support && !column_support_filter(&dec.family) {
            continue;
        }
        // The adjunction constraint rules out families that cannot carry a
        // module-category action at all. For two-vertex algebras those
        // eliminations are contracted to the classification stage (which must
        // see the families to report how they die), so the prune only runs
        // for three or more vertices, where the search itself must stay
        // closed under it.
        if filters.adjunction && table.n >= 3 && !adjunction_filter(&dec.family, adjoints) {
            continue;
        }
        let canonical = canonical_form_family_under(&dec.family, &stab);
        if seen.insert(canonical.flat()) {
            out.push(Decomposition {
                target: target.clone(),
                family: canonical,
            });
        }
    }
    out.sort_by(|a, b| a.family.flat().cmp(&b.family.flat()));
    Ok(out)
}

/// Exhaustive splitting oracle: every way of writing the target as a sum of
/// n^2 nonnegative parts, filtered by [`check_family`] alone. Cell-by-cell
/// recursion with pruning restricted to lower bounds that are already
/// forced by determined entries (sound with respect to check_family).
pub fn brute_force_decompositions(
    target: &CandidateMatrix,
    table: &CompositionTable,
) -> Result<Vec<Decomposition>, DecompError> {
    let k = target.k();
    if k > 3 || target.m.flat().iter().any(|&v| v > 5) {
        return Err(DecompError::OracleGuard);
    }
    let n = table.n;

    // Diagonal cells first so the trace and zero-product conditions bite
    // early.
    let mut cells: Vec<(usize, usize)> = (0..k).map(|p| (p, p)).collect();
    for a in 0..k {
        for b in 0..k {
            if a != b {
                cells.push((a, b));
            }
        }
    }

    let mut parts = vec![Mat::zeros(k, k); n * n];
    let mut cell_done = vec![false; k * k];
    let mut out = Vec::new();

    fn split_cell(
        cells: &[(usize, usize)],
        next: usize,
        value: Int,
        part: usize,
        nparts: usize,
        parts: &mut [Mat],
        cell_done: &mut [bool],
        table: &CompositionTable,
        target: &CandidateMatrix,
        out: &mut Vec<Decomposition>,
        k: usize,
    ) {
        let (a, b) = cells[next];
        if part == nparts - 1 {
            parts[part][(a, b)] = value;
            cell_done[a * k + b] = true;
            if determined_lower_bounds_ok(parts, cell_done, table, k) {
                descend(cells, next + 1, nparts, parts, cell_done, table, target, out, k);
            }
            cell_done[a * k + b] = false;
            parts[part][(a, b)] = 0;
            return;
        }
        for v in 0..=value {
            parts[part][(a, b)] = v;
            split_cell(
                cells, next, value - v, part + 1, nparts, parts, cell_done, table, target, out, k,
            );
            parts[part][(a, b)] = 0;
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn descend(
        cells: &[(usize, usize)],
        next: usize,
        nparts: usize,
        parts: &mut [Mat],
        cell_done: &mut [bool],
        table: &CompositionTable,
        target: &CandidateMatrix,
        out: &mut Vec<Decomposition>,
        k: usize,
    ) {
        if next == cells.len() {
            let n = table.n;
            let fam = MatrixFamily::new(n, k, parts.to_vec());
            let dec = Decomposition {
                target: target.clone(),
                family: fam,
            };
            if check_family(&dec, table) {
                out.push(dec);
            }
            return;
        }
        let (a, b) = cells[next];
        split_cell(
            cells,
            next,
            target.m[(a, b)],
            0,
            nparts,
            parts,
            cell_done,
            table,
            target,
            out,
            k,
        );
    }

    /// Lower bounds of product constraints from determined cells only:
    /// sum over c of L[x][c]*R[c][y] restricted to determined pairs must
    /// not exceed D * result[x][y] when the result cell is determined, and
    /// must be zero when D is zero.
    fn determined_lower_bounds_ok(
        parts: &[Mat],
        cell_done: &[bool],
        table: &CompositionTable,
        k: usize,
    ) -> bool {
        let n = table.n;
        for lp in 0..n * n {
            for rp in 0..n * n {
                let coeff = table.d[(lp % n, rp / n)];
                let res = (lp / n) * n + (rp % n);
                for x in 0..k {
                    for y in 0..k {
                        let mut low = 0;
                        for c in 0..k {
                            if cell_done[x * k + c] && cell_done[c * k + y] {
                                low += parts[lp][(x, c)] * parts[rp][(c, y)];
                            }
                        }
                        if coeff == 0 {
                            if low > 0 {
                                return false;
                            }
                        } else if cell_done[x * k + y] && low > coeff * parts[res][(x, y)] {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    descend(
        &cells,
        0,
        n * n,
        &mut parts,
        &mut cell_done,
        table,
        target,
        &mut out,
        k,
    );
    out.sort_by(|a, b| a.family.flat().cmp(&b.family.flat()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{dim_table, QuiverAlgebra};
    use crate::canonical::{act_family, orbit_equal_family, Permutation};
    use crate::corpus;

    fn m(rows: Vec<Vec<i64>>) -> Mat {
        Mat::from_rows(rows)
    }

    fn a2_table() -> CompositionTable {
        dim_table(&QuiverAlgebra::parse(corpus::A2).unwrap())
    }

    fn a3_table() -> CompositionTable {
        dim_table(&QuiverAlgebra::parse(corpus::A3_ZERO).unwrap())
    }

    pub fn m2_family() -> MatrixFamily<Int> {
        MatrixFamily::new(
            2,
            2,
            vec![
                m(vec![vec![1, 0], vec![0, 0]]),
                m(vec![vec![1, 1], vec![0, 0]]),
                m(vec![vec![0, 0], vec![1, 0]]),
                m(vec![vec![0, 0], vec![1, 1]]),
            ],
        )
    }

    pub fn m3_family() -> MatrixFamily<Int> {
        MatrixFamily::new(
            2,
            2,
            vec![
                m(vec![vec![0, 1], vec![0, 1]]),
                m(vec![vec![1, 0], vec![1, 0]]),
                m(vec![vec![0, 1], vec![0, 0]]),
                m(vec![vec![1, 0], vec![0, 0]]),
            ],
        )
    }

    pub fn m6_family() -> MatrixFamily<Int> {
        MatrixFamily::new(
            2,
            3,
            vec![
                m(vec![vec![1, 0, 0], vec![1, 0, 0], vec![0, 0, 0]]),
                m(vec![vec![0, 1, 1], vec![0, 1, 1], vec![0, 0, 0]]),
                m(vec![vec![0, 0, 0], vec![0, 0, 0], vec![1, 0, 0]]),
                m(vec![vec![0, 0, 0], vec![0, 0, 0], vec![0, 1, 1]]),
            ],
        )
    }

    pub fn n13_family() -> MatrixFamily<Int> {
        MatrixFamily::new(
            3,
            3,
            vec![
                m(vec![vec![1, 0, 0], vec![0, 0, 0], vec![0, 0, 0]]),
                m(vec![vec![1, 1, 0], vec![0, 0, 0], vec![0, 0, 0]]),
                m(vec![vec![0, 1, 1], vec![0, 0, 0], vec![0, 0, 0]]),
                m(vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 0, 0]]),
                m(vec![vec![0, 0, 0], vec![1, 1, 0], vec![0, 0, 0]]),
                m(vec![vec![0, 0, 0], vec![0, 1, 1], vec![0, 0, 0]]),
                m(vec![vec![0, 0, 0], vec![0, 0, 0], vec![1, 0, 0]]),
                m(vec![vec![0, 0, 0], vec![0, 0, 0], vec![1, 1, 0]]),
                m(vec![vec![0, 0, 0], vec![0, 0, 0], vec![0, 1, 1]]),
            ],
        )
    }

    fn candidate(rows: Vec<Vec<i64>>, d: Int) -> CandidateMatrix {
        CandidateMatrix::new(m(rows), d).unwrap()
    }

    #[test]
    fn check_family_accepts_known_families() {
        let t2 = a2_table();
        let dec = Decomposition {
            target: candidate(vec![vec![2, 1], vec![2, 1]], 3),
            family: m2_family(),
        };
        assert!(check_family(&dec, &t2));

        let t3 = a3_table();
        let dec = Decomposition {
            target: candidate(vec![vec![2, 2, 1], vec![2, 2, 1], vec![2, 2, 1]], 5),
            family: n13_family(),
        };
        assert!(check_family(&dec, &t3));
    }

    #[test]
    fn check_family_rejects_nilpotent_with_trace() {
        let t2 = a2_table();
        let mut fam = m2_family();
        // Move the (2,1)-member's unit onto the diagonal.
        fam.members[2] = m(vec![vec![1, 0], vec![0, 0]]);
        fam.members[0] = m(vec![vec![0, 0], vec![1, 0]]);
        let dec = Decomposition {
            target: candidate(vec![vec![2, 1], vec![2, 1]], 3),
            family: fam,
        };
        assert!(!check_family(&dec, &t2));
    }

    #[test]
    fn trace_budget_examples() {
        let t3 = a3_table();
        let n9 = m(vec![vec![3, 1, 1], vec![3, 1, 1], vec![3, 1, 1]]);
        assert!(!trace_budget_filter(&n9, &t3));
        let n13 = m(vec![vec![2, 2, 1], vec![2, 2, 1], vec![2, 2, 1]]);
        assert!(trace_budget_filter(&n13, &t3));
        let t2 = a2_table();
        let m2 = m(vec![vec![2, 1], vec![2, 1]]);
        assert!(trace_budget_filter(&m2, &t2));
    }

    #[test]
    fn idempotent_structure_examples() {
        assert!(idempotent_structure_filter(
            &m(vec![vec![1, 0], vec![0, 0]]),
            0
        ));
        assert!(idempotent_structure_filter(&m(vec![vec![1]]), 0));
        assert!(!idempotent_structure_filter(
            &m(vec![vec![1, 1], vec![1, 0]]),
            0
        ));
    }

    #[test]
    fn column_support_examples() {
        assert!(column_support_filter(&n13_family()));
        let mut bad = n13_family();
        // Zero out column 2 of the (3,2)-member only.
        bad.members[7] = m(vec![vec![0, 0, 0], vec![0, 0, 0], vec![1, 0, 0]]);
        // Restore the sum by bumping a different member is not needed for
        // this check; support coherence alone must fail.
        assert!(!column_support_filter(&bad));
        let trivial = MatrixFamily::new(1, 1, vec![m(vec![vec![1]])]);
        assert!(column_support_filter(&trivial));
    }

    #[test]
    fn adjunction_examples() {
        let t3 = a3_table();
        let adjoints = t3.adjoint_pairs();
        assert!(adjunction_filter(&n13_family(), &adjoints));

        // Shape where X_2 is a summand of F_23 X_2 while
        // F_22 X_2 = 0, violating the (F_23, F_22) adjunction.
        let fam = MatrixFamily::new(
            3,
            3,
            vec![
                m(vec![vec![0, 0, 1], vec![0, 0, 0], vec![0, 0, 1]]),
                m(vec![vec![1, 0, 0], vec![0, 0, 0], vec![1, 0, 0]]),
                m(vec![vec![0, 1, 0], vec![0, 0, 0], vec![0, 1, 0]]),
                m(vec![vec![0, 0, 1], vec![0, 0, 1], vec![0, 0, 0]]),
                m(vec![vec![1, 0, 0], vec![0, 0, 1], vec![0, 0, 0]]),
                m(vec![vec![0, 1, 0], vec![0, 1, 0], vec![0, 0, 0]]),
                m(vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 0, 0]]),
                m(vec![vec![0, 0, 0], vec![1, 0, 1], vec![0, 0, 0]]),
                m(vec![vec![0, 0, 0], vec![0, 1, 0], vec![0, 0, 0]]),
            ],
        );
        // member (2,3) has entry (2,2) nonzero; member (2,2) column 2 zero.
        assert!(!adjunction_filter(&fam, &adjoints));
    }

    #[test]
    fn a2_decompositions_match_known_families() {
        let t2 = a2_table();
        let filters = FilterSet::all();

        let m2 = candidate(vec![vec![2, 1], vec![2, 1]], 3);
        let got = enumerate_decompositions(&m2, &t2, filters).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].family, m2_family());

        let m3 = candidate(vec![vec![2, 2], vec![1, 1]], 3);
        let got = enumerate_decompositions(&m3, &t2, filters).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].family, m3_family());

        let m6 = candidate(vec![vec![1; 3]; 3], 3);
        let got = enumerate_decompositions(&m6, &t2, filters).unwrap();
        assert_eq!(got.len(), 1);
        assert!(orbit_equal_family(&got[0].family, &m6_family()));

        let m1 = candidate(vec![vec![3]], 3);
        let got = enumerate_decompositions(&m1, &t2, filters).unwrap();
        assert!(got.is_empty());
    }

    /// The two-vertex gate on the adjunction prune: these families violate
    /// the raw adjunction condition, but the search must still emit them so
    /// the classification stage can perform (and report) the elimination.
    #[test]
    fn a2_adjunction_prune_is_deferred_to_classification() {
        let t2 = a2_table();
        let adjoints = t2.adjoint_pairs();
        assert!(!adjunction_filter(&m3_family(), &adjoints));
        assert!(!adjunction_filter(&m6_family(), &adjoints));

        let m3 = candidate(vec![vec![2, 2], vec![1, 1]], 3);
        let got = enumerate_decompositions(&m3, &t2, FilterSet::all()).unwrap();
        assert_eq!(got.len(), 1);
    }

    #[test]
    fn a2_multiplicative_only_matches_oracle() {
        let t2 = a2_table();
        for rows in [
            vec![vec![3]],
            vec![vec![2, 1], vec![2, 1]],
            vec![vec![2, 2], vec![1, 1]],
            vec![vec![1; 3]; 3],
        ] {
            let target = candidate(rows, 3);
            let structured =
                enumerate_decompositions(&target, &t2, FilterSet::multiplicative_only()).unwrap();
            let oracle = brute_force_decompositions(&target, &t2).unwrap();
            let stab = stabilizer(&target.m);
            let mut oracle_canon: Vec<Vec<Int>> = oracle
                .iter()
                .map(|d| canonical_form_family_under(&d.family, &stab).flat())
                .collect();
            oracle_canon.sort();
            oracle_canon.dedup();
            let structured_flat: Vec<Vec<Int>> =
                structured.iter().map(|d| d.family.flat()).collect();
            assert_eq!(structured_flat, oracle_canon);
        }
    }

    #[test]
    fn a3_n13_yields_exactly_the_known_family() {
        let t3 = a3_table();
        let n13 = candidate(vec![vec![2, 2, 1], vec![2, 2, 1], vec![2, 2, 1]], 5);
        let got = enumerate_decompositions(&n13, &t3, FilterSet::all()).unwrap();
        assert_eq!(got.len(), 1);
        assert!(orbit_equal_family(&got[0].family, &n13_family()));
    }

    #[test]
    fn a3_n11_and_n14_are_eliminated() {
        let t3 = a3_table();
        for rows in [
            vec![vec![2, 2, 2], vec![2, 2, 2], vec![1, 1, 1]],
            vec![vec![1; 5]; 5],
        ] {
            let target = candidate(rows, 5);
            let got = enumerate_decompositions(&target, &t3, FilterSet::all()).unwrap();
            assert!(got.is_empty(), "expected no families for {:?}", target.m);
        }
    }

    #[test]
    fn oracle_contains_n13_family() {
        let t3 = a3_table();
        let n13 = candidate(vec![vec![2, 2, 1], vec![2, 2, 1], vec![2, 2, 1]], 5);
        let oracle = brute_force_decompositions(&n13, &t3).unwrap();
        assert!(oracle.iter().any(|d| d.family == n13_family()));
    }

    #[test]
    fn oracle_one_vertex() {
        let alg = QuiverAlgebra::parse("vertices = 1\n").unwrap();
        let t = dim_table(&alg);
        let unit = candidate(vec![vec![1]], 1);
        let oracle = brute_force_decompositions(&unit, &t).unwrap();
        assert_eq!(oracle.len(), 1);
        assert_eq!(oracle[0].family.member(0, 0), &m(vec![vec![1]]));
    }

    #[test]
    fn emitted_families_are_orbit_distinct() {
        let t2 = a2_table();
        let m6 = candidate(vec![vec![1; 3]; 3], 3);
        let got = enumerate_decompositions(&m6, &t2, FilterSet::multiplicative_only()).unwrap();
        for (x, a) in got.iter().enumerate() {
            for b in got.iter().skip(x + 1) {
                let same = Permutation::all(3).iter().any(|sigma| {
                    crate::canonical::act(sigma, &a.target.m) == b.target.m
                        && act_family(sigma, &a.family) == b.family
                });
                assert!(!same, "duplicate orbit emitted");
            }
        }
    }

    #[test]
    fn root_check_is_enforced() {
        let t2 = a2_table();
        let bad = CandidateMatrix::new(m(vec![vec![2]]), 2).unwrap();
        assert_eq!(
            enumerate_decompositions(&bad, &t2, FilterSet::all()).unwrap_err(),
            DecompError::RootCheck(3)
        );
    }
}
