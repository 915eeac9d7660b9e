//! Serializable report structures and their text rendering.
//!
//! The text output is a pure function of the same structs that serialize
//! to JSON, so both formats always carry identical data; a report parsed
//! back from JSON re-renders to byte-identical text. All user-facing
//! indices are 1-based.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::canonical::MatrixFamily;
use crate::classify::{Classification, Verdict};
use crate::decomp::{Decomposition, FilterSet};
use crate::roots::{CandidateMatrix, RootMode};
use crate::{Int, Mat};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixRepr {
    pub rows: usize,
    pub cols: usize,
    /// Row-major entries.
    pub data: Vec<Int>,
}

impl MatrixRepr {
    pub fn of(m: &Mat) -> Self {
        MatrixRepr {
            rows: m.rows(),
            cols: m.cols(),
            data: m.flat().to_vec(),
        }
    }

    pub fn render(&self) -> String {
        let rows: Vec<String> = self
            .data
            .chunks(self.cols.max(1))
            .map(|row| {
                row.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        format!("{}x{} [{}]", self.rows, self.cols, rows.join(" / "))
    }
}

/// Families serialize as maps keyed "i,j" with 1-based indices.
pub type FamilyRepr = BTreeMap<String, MatrixRepr>;

pub fn family_repr(fam: &MatrixFamily<Int>) -> FamilyRepr {
    fam.keys()
        .map(|(i, j)| {
            (
                format!("{},{}", i + 1, j + 1),
                MatrixRepr::of(fam.member(i, j)),
            )
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraRepr {
    pub vertices: usize,
    pub dimension: Int,
    /// d[i][j] = dim(e_i A e_j), row-major.
    pub d: MatrixRepr,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootsReport {
    pub schema_version: u32,
    pub dim: Int,
    pub mode: String,
    pub count: usize,
    pub matrices: Vec<MatrixRepr>,
}

pub fn roots_report(dim: Int, mode: RootMode, roots: &[CandidateMatrix]) -> RootsReport {
    RootsReport {
        schema_version: SCHEMA_VERSION,
        dim,
        mode: match mode {
            RootMode::Raw => "raw".to_string(),
            RootMode::Canonical => "canonical".to_string(),
        },
        count: roots.len(),
        matrices: roots.iter().map(|r| MatrixRepr::of(&r.m)).collect(),
    }
}

pub fn render_roots(r: &RootsReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "schema {}", r.schema_version);
    let _ = writeln!(out, "roots dim={} mode={} count={}", r.dim, r.mode, r.count);
    for (idx, m) in r.matrices.iter().enumerate() {
        let _ = writeln!(out, "matrix {}: {}", idx + 1, m.render());
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecomposeReport {
    pub schema_version: u32,
    pub algebra: AlgebraRepr,
    pub target: MatrixRepr,
    pub filters: FilterSet,
    pub count: usize,
    pub decompositions: Vec<FamilyRepr>,
}

pub fn decompose_report(
    algebra: AlgebraRepr,
    target: &CandidateMatrix,
    filters: FilterSet,
    decs: &[Decomposition],
) -> DecomposeReport {
    DecomposeReport {
        schema_version: SCHEMA_VERSION,
        algebra,
        target: MatrixRepr::of(&target.m),
        filters,
        count: decs.len(),
        decompositions: decs.iter().map(|d| family_repr(&d.family)).collect(),
    }
}

fn render_filters(f: &FilterSet) -> String {
    let onoff = |b: bool| if b { "on" } else { "off" };
    format!(
        "multiplicative=on trace_budget={} column_support={} idempotent_rank_one={} adjunction={}",
        onoff(f.trace_budget),
        onoff(f.column_support),
        onoff(f.idempotent_rank_one),
        onoff(f.adjunction)
    )
}

fn render_family(out: &mut String, indent: &str, family: &FamilyRepr) {
    for (key, m) in family {
        let _ = writeln!(out, "{indent}M[{key}] = {}", m.render());
    }
}

pub fn render_decompose(r: &DecomposeReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "schema {}", r.schema_version);
    let _ = writeln!(
        out,
        "decompose vertices={} dim={}",
        r.algebra.vertices, r.algebra.dimension
    );
    let _ = writeln!(out, "d: {}", r.algebra.d.render());
    let _ = writeln!(out, "target: {}", r.target.render());
    let _ = writeln!(out, "filters: {}", render_filters(&r.filters));
    let _ = writeln!(out, "count={}", r.count);
    for (idx, fam) in r.decompositions.iter().enumerate() {
        let _ = writeln!(out, "decomposition {}:", idx + 1);
        render_family(&mut out, "  ", fam);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateRepr {
    pub cartan: MatrixRepr,
    /// assignment["a,b"] lists the (i, j) pairs of S_ab, all 1-based.
    pub assignment: BTreeMap<String, Vec<(usize, usize)>>,
    pub verdict: String,
    /// Image array of the reindexing witness for "cell" verdicts, 1-based.
    pub witness: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionRepr {
    pub family: FamilyRepr,
    pub candidates: Vec<CandidateRepr>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootRepr {
    pub target: MatrixRepr,
    pub decompositions: Vec<DecompositionRepr>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub schema_version: u32,
    pub algebra: AlgebraRepr,
    pub proj_inj_pairs: Vec<(usize, usize)>,
    pub trivial_survivor: String,
    pub faithful_survivors: usize,
    pub roots: Vec<RootRepr>,
}

pub fn classify_report(c: &Classification) -> ClassifyReport {
    ClassifyReport {
        schema_version: SCHEMA_VERSION,
        algebra: AlgebraRepr {
            vertices: c.vertex_count,
            dimension: c.dimension,
            d: MatrixRepr::of(&c.d),
        },
        proj_inj_pairs: c
            .proj_inj_pairs
            .iter()
            .map(|&(s, t)| (s + 1, t + 1))
            .collect(),
        trivial_survivor: c.trivial_survivor.clone(),
        faithful_survivors: c.faithful_survivors,
        roots: c
            .roots
            .iter()
            .map(|root| RootRepr {
                target: MatrixRepr::of(&root.target.m),
                decompositions: root
                    .decompositions
                    .iter()
                    .map(|dec| DecompositionRepr {
                        family: family_repr(&dec.decomposition.family),
                        candidates: dec
                            .candidates
                            .iter()
                            .map(|cand| {
                                let (verdict, witness) = match &cand.verdict {
                                    Verdict::Cell { witness } => (
                                        "cell".to_string(),
                                        Some(
                                            (0..witness.len())
                                                .map(|a| witness.apply(a) + 1)
                                                .collect(),
                                        ),
                                    ),
                                    Verdict::NonCellSurvivor => {
                                        ("non_cell_survivor".to_string(), None)
                                    }
                                    Verdict::Eliminated => ("eliminated".to_string(), None),
                                };
                                CandidateRepr {
                                    cartan: MatrixRepr::of(&cand.cartan.c),
                                    assignment: cand
                                        .assignment
                                        .components
                                        .iter()
                                        .enumerate()
                                        .map(|(p, s)| {
                                            let n = cand.assignment.n;
                                            (
                                                format!("{},{}", p / n + 1, p % n + 1),
                                                s.iter()
                                                    .map(|&(i, j)| (i + 1, j + 1))
                                                    .collect(),
                                            )
                                        })
                                        .collect(),
                                    verdict,
                                    witness,
                                }
                            })
                            .collect(),
                    })
                    .collect(),
            })
            .collect(),
    }
}

pub fn render_classify(r: &ClassifyReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "schema {}", r.schema_version);
    let _ = writeln!(
        out,
        "classify vertices={} dim={}",
        r.algebra.vertices, r.algebra.dimension
    );
    let _ = writeln!(out, "d: {}", r.algebra.d.render());
    let pairs: Vec<String> = r
        .proj_inj_pairs
        .iter()
        .map(|(s, t)| format!("({s},{t})"))
        .collect();
    let _ = writeln!(out, "proj_inj_pairs: {}", pairs.join(" "));
    let _ = writeln!(out, "trivial_survivor: {}", r.trivial_survivor);
    let _ = writeln!(out, "faithful_survivors: {}", r.faithful_survivors);
    for (ridx, root) in r.roots.iter().enumerate() {
        let _ = writeln!(
            out,
            "root {}: {} decompositions={}",
            ridx + 1,
            root.target.render(),
            root.decompositions.len()
        );
        for (didx, dec) in root.decompositions.iter().enumerate() {
            let _ = writeln!(out, "  decomposition {}:", didx + 1);
            render_family(&mut out, "    ", &dec.family);
            for (cidx, cand) in dec.candidates.iter().enumerate() {
                let assignment: Vec<String> = cand
                    .assignment
                    .iter()
                    .map(|(key, pairs)| {
                        let inner: Vec<String> = pairs
                            .iter()
                            .map(|(i, j)| format!("({i},{j})"))
                            .collect();
                        format!("S[{key}]={{{}}}", inner.join(","))
                    })
                    .collect();
                let witness = cand
                    .witness
                    .as_ref()
                    .map(|w| {
                        let xs: Vec<String> = w.iter().map(|v| v.to_string()).collect();
                        format!(" witness=[{}]", xs.join(" "))
                    })
                    .unwrap_or_default();
                let _ = writeln!(
                    out,
                    "    candidate {}: verdict={}{} cartan={} {}",
                    cidx + 1,
                    cand.verdict,
                    witness,
                    cand.cartan.render(),
                    assignment.join(" ")
                );
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionRepr {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub schema_version: u32,
    pub passed: bool,
    pub criteria: Vec<CriterionRepr>,
}

pub fn render_selftest(r: &SelftestReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "schema {}", r.schema_version);
    let _ = writeln!(out, "selftest");
    for c in &r.criteria {
        let _ = writeln!(
            out,
            "criterion {}: {} - {} ({})",
            c.id,
            if c.passed { "pass" } else { "fail" },
            c.name,
            c.detail
        );
    }
    let _ = writeln!(out, "result: {}", if r.passed { "pass" } else { "fail" });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::enumerate_roots;

    #[test]
    fn matrix_repr_round_trip() {
        let m = Mat::from_rows(vec![vec![2, 1], vec![2, 1]]);
        let repr = MatrixRepr::of(&m);
        assert_eq!(repr.render(), "2x2 [2 1 / 2 1]");
        let json = serde_json::to_string(&repr).unwrap();
        let back: MatrixRepr = serde_json::from_str(&json).unwrap();
        assert_eq!(back, repr);
    }

    #[test]
    fn roots_report_json_text_agree() {
        let roots = enumerate_roots(3, RootMode::Raw).unwrap();
        let report = roots_report(3, RootMode::Raw, &roots);
        let text = render_roots(&report);
        let json = serde_json::to_string_pretty(&report).unwrap();
        let back: RootsReport = serde_json::from_str(&json).unwrap();
        assert_eq!(render_roots(&back), text);
        assert!(text.contains("count=6"));
    }
}
