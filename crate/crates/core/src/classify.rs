//! Deciding which decompositions can come from an actual 2-representation.
//!
//! The unknown is the Cartan matrix C of the acting algebra B together with
//! an assignment of abstract projective functors G_ij to each F_ab: the
//! matrix of G_ij is supported on row i and equal there to row j of C, so
//! each nonzero row of M_ab must be a nonnegative integer combination of
//! rows of C. Candidates are then screened by the Hom-nonvanishing filter
//! and checked against the Cartan matrix of A for the cell certificate.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{CompositionTable, QuiverAlgebra};
use crate::canonical::Permutation;
use crate::decomp::{DecompError, Decomposition, FilterSet};
use crate::roots::{enumerate_roots, CandidateMatrix, RootError, RootMode};
use crate::{Int, Mat};

/// Name of the non-faithful 2-representation that exists for every algebra
/// and is reported unconditionally.
pub const TRIVIAL_SURVIVOR: &str = "C_{L_0}";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("method inapplicable: no projective-injective pair detected")]
    MethodInapplicable,
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Decomp(#[from] DecompError),
}

/// The Cartan data of the unknown algebra B: C[j][s] = [P_s : L_j].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanMatrix {
    pub k: usize,
    pub c: Mat,
}

impl CartanMatrix {
    pub fn new(c: Mat) -> Self {
        assert!(c.is_square());
        let k = c.rows();
        assert!((0..k).all(|j| c[(j, j)] >= 1), "diagonal must be positive");
        assert!(c.all_nonnegative());
        CartanMatrix { k, c }
    }
}

/// For each index (a, b), the multiset S_ab of pairs (i, j) such that F_ab
/// acts via the direct sum of the G_ij. Pairs are 0-based and kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub n: usize,
    /// components[a * n + b] is S_ab.
    pub components: Vec<Vec<(usize, usize)>>,
}

impl Assignment {
    pub fn component(&self, a: usize, b: usize) -> &[(usize, usize)] {
        &self.components[a * self.n + b]
    }

    /// Concatenated sorted components; deterministic comparison key.
    fn flat(&self) -> Vec<(usize, usize, usize, usize)> {
        let n = self.n;
        (0..n * n)
            .flat_map(|p| {
                self.components[p]
                    .iter()
                    .map(move |&(i, j)| (p / n, p % n, i, j))
            })
            .collect()
    }
}

/// The matrix of G_ij over C: entry (a, s) = delta_{a,i} * C[j][s].
pub fn functor_matrix(cartan: &CartanMatrix, i: usize, j: usize) -> Mat {
    let k = cartan.k;
    let mut m = Mat::zeros(k, k);
    for s in 0..k {
        m[(i, s)] = cartan.c[(j, s)];
    }
    m
}

/// Sum of the G_ij matrices over one component multiset.
pub fn reconstruct_component(cartan: &CartanMatrix, component: &[(usize, usize)]) -> Mat {
    component
        .iter()
        .fold(Mat::zeros(cartan.k, cartan.k), |acc, &(i, j)| {
            acc.add(&functor_matrix(cartan, i, j))
        })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    /// C equals the Cartan matrix of A under the recorded reindexing and
    /// every F_ab acts via the single G corresponding to (a, b).
    Cell { witness: Permutation },
    NonCellSurvivor,
    Eliminated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub assignment: Assignment,
    pub cartan: CartanMatrix,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifiedDecomposition {
    pub decomposition: Decomposition,
    pub candidates: Vec<Candidate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifiedRoot {
    pub target: CandidateMatrix,
    pub decompositions: Vec<ClassifiedDecomposition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub vertex_count: usize,
    pub dimension: Int,
    pub d: Mat,
    /// 0-based projective-injective pairs the adjunctions were derived from.
    pub proj_inj_pairs: Vec<(usize, usize)>,
    pub roots: Vec<ClassifiedRoot>,
    pub trivial_survivor: String,
    pub faithful_survivors: usize,
}

/// All Cartan matrices with entries bounded by `max_entry` and positive
/// diagonal, in lexicographic order of the flattened entries.
fn enumerate_cartans(k: usize, max_entry: Int) -> Vec<Mat> {
    let mut out = Vec::new();
    let mut current = Mat::zeros(k, k);
    fn rec(k: usize, max: Int, pos: usize, current: &mut Mat, out: &mut Vec<Mat>) {
        if pos == k * k {
            out.push(current.clone());
            return;
        }
        let (a, b) = (pos / k, pos % k);
        let lo = if a == b { 1 } else { 0 };
        for v in lo..=max {
            current[(a, b)] = v;
            rec(k, max, pos + 1, current, out);
        }
        current[(a, b)] = 0;
    }
    rec(k, max_entry, 0, &mut current, &mut out);
    out
}

/// All multiplicity vectors m with sum_j m[j] * C[j][.] equal to `row`.
fn row_multiplicities(row: &[Int], cartan: &Mat) -> Vec<Vec<Int>> {
    let k = cartan.rows();
    let mut out = Vec::new();
    let mut m = vec![0; k];
    let mut rem = row.to_vec();
    fn rec(
        cartan: &Mat,
        j: usize,
        m: &mut Vec<Int>,
        rem: &mut Vec<Int>,
        out: &mut Vec<Vec<Int>>,
    ) {
        let k = cartan.rows();
        if j == k {
            if rem.iter().all(|&v| v == 0) {
                out.push(m.clone());
            }
            return;
        }
        // The diagonal of C is positive, so m[j] is bounded by rem[j].
        let bound = (0..k)
            .filter(|&s| cartan[(j, s)] > 0)
            .map(|s| rem[s] / cartan[(j, s)])
            .min()
            .unwrap_or(0);
        for v in 0..=bound {
            if v > 0 {
                for s in 0..k {
                    rem[s] -= cartan[(j, s)];
                }
            }
            m[j] = v;
            rec(cartan, j + 1, m, rem, out);
        }
        for s in 0..k {
            rem[s] += cartan[(j, s)] * bound;
        }
        m[j] = 0;
    }
    rec(cartan, 0, &mut m, &mut rem, &mut out);
    out
}

/// All ways to realize one member matrix as a sum of G_ij matrices over C:
/// independent multiplicity choices for each nonzero row.
fn component_choices(member: &Mat, cartan: &Mat) -> Option<Vec<Vec<(usize, usize)>>> {
    let k = cartan.rows();
    let mut choices: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    for r in 0..k {
        let row = member.row(r);
        if row.iter().all(|&v| v == 0) {
            continue;
        }
        let mults = row_multiplicities(row, cartan);
        if mults.is_empty() {
            return None;
        }
        let mut next = Vec::with_capacity(choices.len() * mults.len());
        for base in &choices {
            for m in &mults {
                let mut extended = base.clone();
                for (j, &count) in m.iter().enumerate() {
                    for _ in 0..count {
                        extended.push((r, j));
                    }
                }
                next.push(extended);
            }
        }
        choices = next;
    }
    Some(choices)
}

/// All solutions of the matrix model for one decomposition: Cartan
/// candidates bounded by the largest member entry, row-by-row multiplicity
/// search, and a normalization pinning C rows unused by the assignment to
/// the corresponding identity rows (such rows are otherwise unconstrained).
pub fn enumerate_assignments(
    dec: &Decomposition,
    table: &CompositionTable,
) -> Result<Vec<(Assignment, CartanMatrix)>, ClassifyError> {
    enumerate_assignments_with(dec, table, &table.projective_injective_pairs())
}

/// Same as [`enumerate_assignments`], with the projective-injective pairs
/// asserted by the caller instead of detected.
pub fn enumerate_assignments_with(
    dec: &Decomposition,
    table: &CompositionTable,
    proj_inj: &[(usize, usize)],
) -> Result<Vec<(Assignment, CartanMatrix)>, ClassifyError> {
    if proj_inj.is_empty() {
        return Err(ClassifyError::MethodInapplicable);
    }
    assert_eq!(dec.family.n, table.n, "family/table vertex mismatch");
    let n = dec.family.n;
    let k = dec.family.k;
    let max_entry = dec
        .family
        .members
        .iter()
        .flat_map(|m| m.flat().iter().copied())
        .max()
        .expect("nonempty family");

    let mut out: Vec<(Assignment, CartanMatrix)> = Vec::new();
    for c in enumerate_cartans(k, max_entry) {
        let per_cell: Option<Vec<Vec<Vec<(usize, usize)>>>> = dec
            .family
            .members
            .iter()
            .map(|member| component_choices(member, &c))
            .collect();
        let per_cell = match per_cell {
            Some(v) => v,
            None => continue,
        };
        let cartan = CartanMatrix::new(c);

        // Cartesian product over the n^2 cells.
        let mut assignments: Vec<Vec<Vec<(usize, usize)>>> = vec![Vec::new()];
        for cell in &per_cell {
            let mut next = Vec::with_capacity(assignments.len() * cell.len());
            for base in &assignments {
                for choice in cell {
                    let mut extended = base.clone();
                    extended.push(choice.clone());
                    next.push(extended);
                }
            }
            assignments = next;
        }

        for components in assignments {
            let used: BTreeSet<usize> = components
                .iter()
                .flat_map(|s| s.iter().map(|&(_, j)| j))
                .collect();
            let normalized = (0..k).all(|j| {
                used.contains(&j)
                    || (0..k).all(|s| cartan.c[(j, s)] == if s == j { 1 } else { 0 })
            });
            if !normalized {
                continue;
            }
            let mut components = components;
            for s in &mut components {
                s.sort();
            }
            let assignment = Assignment { n, components };
            debug_assert!(assignment
                .components
                .iter()
                .zip(&dec.family.members)
                .all(|(s, m)| !s.is_empty() && reconstruct_component(&cartan, s) == *m));
            out.push((assignment, cartan.clone()));
        }
    }
    out.sort_by(|a, b| {
        (a.1.c.flat(), a.0.flat()).cmp(&(b.1.c.flat(), b.0.flat()))
    });
    Ok(out)
}

/// Hom-nonvanishing faithfulness: whenever Hom(F_ab, F_cd) is nonzero, the
/// natural-transformation space between the assigned functors of B,
/// sum of C[i][s] * C[t][j] over S_ab x S_cd, must also be nonzero.
pub fn hom_filter(assignment: &Assignment, cartan: &CartanMatrix, table: &CompositionTable) -> bool {
    let n = assignment.n;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    if table.hom_dim0((a, b), (c, d)) == 0 {
                        continue;
                    }
                    let total: Int = assignment
                        .component(a, b)
                        .iter()
                        .flat_map(|&(i, j)| {
                            assignment
                                .component(c, d)
                                .iter()
                                .map(move |&(s, t)| cartan.c[(i, s)] * cartan.c[(t, j)])
                        })
                        .sum();
                    if total == 0 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Cell certificate: a reindexing rho of the basis with every S_ab equal to
/// the singleton {(rho(a), rho(b))} and C[rho(j)][rho(s)] = D[j][s].
pub fn cell_witness(
    assignment: &Assignment,
    cartan: &CartanMatrix,
    table: &CompositionTable,
) -> Option<Permutation> {
    let n = assignment.n;
    if cartan.k != n {
        return None;
    }
    Permutation::all(n).into_iter().find(|rho| {
        let components_match = (0..n).all(|a| {
            (0..n).all(|b| assignment.component(a, b) == [(rho.apply(a), rho.apply(b))])
        });
        components_match
            && (0..n).all(|j| {
                (0..n).all(|s| cartan.c[(rho.apply(j), rho.apply(s))] == table.d[(j, s)])
            })
    })
}

fn classify_decomposition(
    dec: Decomposition,
    table: &CompositionTable,
    proj_inj: &[(usize, usize)],
) -> Result<ClassifiedDecomposition, ClassifyError> {
    let mut candidates = Vec::new();
    for (assignment, cartan) in enumerate_assignments_with(&dec, table, proj_inj)? {
        let verdict = if !hom_filter(&assignment, &cartan, table) {
            Verdict::Eliminated
        } else if let Some(witness) = cell_witness(&assignment, &cartan, table) {
            Verdict::Cell { witness }
        } else {
            Verdict::NonCellSurvivor
        };
        candidates.push(Candidate {
            assignment,
            cartan,
            verdict,
        });
    }
    Ok(ClassifiedDecomposition {
        decomposition: dec,
        candidates,
    })
}

/// The full pipeline for one algebra: path-counting table, root
/// enumeration, decomposition search with all filters, assignment search
/// and the Hom filter, then verdicts.
pub fn classify(alg: &QuiverAlgebra) -> Result<Classification, ClassifyError> {
    classify_with(alg, None)
}

/// Same as [`classify`], optionally overriding the detected
/// projective-injective pairs.
pub fn classify_with(
    alg: &QuiverAlgebra,
    assume_proj_inj: Option<Vec<(usize, usize)>>,
) -> Result<Classification, ClassifyError> {
    let table = crate::algebra::dim_table(alg);
    let proj_inj = assume_proj_inj.unwrap_or_else(|| table.projective_injective_pairs());
    if proj_inj.is_empty() {
        return Err(ClassifyError::MethodInapplicable);
    }
    let adjoints = table.adjoint_pairs_from(&proj_inj);
    let dim = alg.dim() as Int;
    let roots = enumerate_roots(dim, RootMode::Canonical)?;

    let classified: Result<Vec<ClassifiedRoot>, ClassifyError> = roots
        .into_par_iter()
        .map(|target| {
            let decs = crate::decomp::enumerate_decompositions_with(
                &target,
                &table,
                FilterSet::all(),
                &adjoints,
            )?;
            let decompositions: Result<Vec<_>, _> = decs
                .into_iter()
                .map(|dec| classify_decomposition(dec, &table, &proj_inj))
                .collect();
            Ok(ClassifiedRoot {
                target,
                decompositions: decompositions?,
            })
        })
        .collect();
    let roots = classified?;

    let faithful_survivors = roots
        .iter()
        .flat_map(|r| &r.decompositions)
        .flat_map(|d| &d.candidates)
        .filter(|c| c.verdict != Verdict::Eliminated)
        .count();

    Ok(Classification {
        vertex_count: alg.vertex_count,
        dimension: dim,
        d: table.d.clone(),
        proj_inj_pairs: proj_inj,
        roots,
        trivial_survivor: TRIVIAL_SURVIVOR.to_string(),
        faithful_survivors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::dim_table;
    use crate::corpus;
    use crate::decomp::enumerate_decompositions;
    use crate::roots::CandidateMatrix;

    fn m(rows: Vec<Vec<i64>>) -> Mat {
        Mat::from_rows(rows)
    }

    fn a2() -> QuiverAlgebra {
        QuiverAlgebra::parse(corpus::A2).unwrap()
    }

    fn a3() -> QuiverAlgebra {
        QuiverAlgebra::parse(corpus::A3_ZERO).unwrap()
    }

    fn single_decomposition(alg: &QuiverAlgebra, target: Mat, d: Int) -> Decomposition {
        let table = dim_table(alg);
        let target = CandidateMatrix::new(target, d).unwrap();
        let mut decs = enumerate_decompositions(&target, &table, FilterSet::all()).unwrap();
        assert_eq!(decs.len(), 1);
        decs.remove(0)
    }

    #[test]
    fn a2_m2_has_two_branches() {
        let alg = a2();
        let table = dim_table(&alg);
        let dec = single_decomposition(&alg, m(vec![vec![2, 1], vec![2, 1]]), 3);
        let candidates = enumerate_assignments(&dec, &table).unwrap();
        assert_eq!(candidates.len(), 2);
        let cartans: Vec<&Mat> = candidates.iter().map(|(_, c)| &c.c).collect();
        assert!(cartans.contains(&&Mat::identity(2)));
        assert!(cartans.contains(&&m(vec![vec![1, 0], vec![1, 1]])));
        // The identity-Cartan branch splits F_12 into two functor summands.
        let identity_branch = candidates
            .iter()
            .find(|(_, c)| c.c == Mat::identity(2))
            .unwrap();
        assert_eq!(identity_branch.0.component(0, 1).len(), 2);
    }

    #[test]
    fn a2_identity_branch_fails_hom_filter() {
        let alg = a2();
        let table = dim_table(&alg);
        let dec = single_decomposition(&alg, m(vec![vec![2, 1], vec![2, 1]]), 3);
        for (assignment, cartan) in enumerate_assignments(&dec, &table).unwrap() {
            let feasible = hom_filter(&assignment, &cartan, &table);
            assert_eq!(feasible, cartan.c != Mat::identity(2));
        }
    }

    #[test]
    fn a2_m3_forces_identity_cartan_and_dies() {
        let alg = a2();
        let table = dim_table(&alg);
        let dec = single_decomposition(&alg, m(vec![vec![2, 2], vec![1, 1]]), 3);
        let candidates = enumerate_assignments(&dec, &table).unwrap();
        assert!(!candidates.is_empty());
        for (assignment, cartan) in &candidates {
            assert_eq!(cartan.c, Mat::identity(2));
            assert!(!hom_filter(assignment, cartan, &table));
        }
    }

    #[test]
    fn a2_m6_family_admits_no_survivor() {
        let alg = a2();
        let table = dim_table(&alg);
        let dec = single_decomposition(&alg, m(vec![vec![1; 3]; 3]), 3);
        let candidates = enumerate_assignments(&dec, &table).unwrap();
        assert!(!candidates.is_empty());
        for (assignment, cartan) in candidates {
            assert!(!hom_filter(&assignment, &cartan, &table));
        }
    }

    #[test]
    fn a2_classification_summary() {
        let result = classify(&a2()).unwrap();
        assert_eq!(result.faithful_survivors, 1);
        let survivor = result
            .roots
            .iter()
            .flat_map(|r| &r.decompositions)
            .flat_map(|d| &d.candidates)
            .find(|c| c.verdict != Verdict::Eliminated)
            .unwrap();
        assert!(matches!(survivor.verdict, Verdict::Cell { .. }));
        // Cartan of B agrees with the path-counting table up to the witness.
        let rho = match &survivor.verdict {
            Verdict::Cell { witness } => witness,
            _ => unreachable!(),
        };
        for j in 0..2 {
            for s in 0..2 {
                assert_eq!(
                    survivor.cartan.c[(rho.apply(j), rho.apply(s))],
                    result.d[(j, s)]
                );
            }
        }
        assert_eq!(result.trivial_survivor, TRIVIAL_SURVIVOR);
    }

    #[test]
    fn a3_classification_summary() {
        let result = classify(&a3()).unwrap();
        assert_eq!(result.faithful_survivors, 1);
        let nonempty: Vec<&ClassifiedRoot> = result
            .roots
            .iter()
            .filter(|r| !r.decompositions.is_empty())
            .collect();
        assert_eq!(nonempty.len(), 1);
        assert_eq!(
            crate::canonical::canonical_form(&nonempty[0].target.m).0,
            crate::canonical::canonical_form(&m(vec![
                vec![2, 2, 1],
                vec![2, 2, 1],
                vec![2, 2, 1]
            ]))
            .0
        );
        let survivor = nonempty[0]
            .decompositions
            .iter()
            .flat_map(|d| &d.candidates)
            .find(|c| c.verdict != Verdict::Eliminated)
            .unwrap();
        assert!(matches!(survivor.verdict, Verdict::Cell { .. }));
    }

    #[test]
    fn one_vertex_algebra_is_cell() {
        let alg = QuiverAlgebra::parse("vertices = 1\n").unwrap();
        let result = classify(&alg).unwrap();
        assert_eq!(result.faithful_survivors, 1);
        let candidate = &result.roots[0].decompositions[0].candidates[0];
        assert!(matches!(candidate.verdict, Verdict::Cell { .. }));
        assert_eq!(candidate.cartan.c, m(vec![vec![1]]));
    }

    #[test]
    fn reconstruction_is_exact() {
        let alg = a3();
        let table = dim_table(&alg);
        let dec = single_decomposition(
            &alg,
            m(vec![vec![2, 2, 1], vec![2, 2, 1], vec![2, 2, 1]]),
            5,
        );
        let candidates = enumerate_assignments(&dec, &table).unwrap();
        assert!(!candidates.is_empty());
        for (assignment, cartan) in &candidates {
            for (s, member) in assignment.components.iter().zip(&dec.family.members) {
                assert!(!s.is_empty());
                assert_eq!(&reconstruct_component(cartan, s), member);
            }
        }
    }

    #[test]
    fn method_inapplicable_without_proj_inj_pair() {
        // For 1 -> 2 <- 3 no column of D matches any row of D.
        let alg = QuiverAlgebra::parse(
            "vertices = 3\narrow a 1 2\narrow b 3 2\n",
        )
        .unwrap();
        let table = dim_table(&alg);
        assert!(table.projective_injective_pairs().is_empty());
        assert_eq!(classify(&alg).unwrap_err(), ClassifyError::MethodInapplicable);
    }

    #[test]
    fn row_multiplicity_search() {
        let cartan = m(vec![vec![1, 0], vec![1, 1]]);
        assert_eq!(row_multiplicities(&[1, 1], &cartan), vec![vec![0, 1]]);
        assert_eq!(row_multiplicities(&[2, 1], &cartan), vec![vec![1, 1]]);
        assert!(row_multiplicities(&[0, 1], &cartan).is_empty());
        let id = Mat::identity(2);
        assert_eq!(row_multiplicities(&[1, 1], &id), vec![vec![1, 1]]);
    }
}
