//! Quiver-with-zero-relations presentations and the algebra-level tables
//! the rest of the pipeline consumes.
//!
//! The input is a monomial presentation: a quiver plus a list of paths that
//! are declared zero. The basis of the algebra is then exactly the set of
//! paths avoiding every relation as a factor, and all dimension data reduces
//! to counting such paths.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::{Int, Mat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown vertex {0} in arrow declaration")]
    UnknownVertex(usize),
    #[error("duplicate arrow label `{0}`")]
    DuplicateLabel(String),
    #[error("relation references unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("non-monomial relation `{0}` rejected; only zero relations are supported")]
    NonMonomial(String),
    #[error("infinite-dimensional algebra: unbounded relation-avoiding paths")]
    InfiniteDimensional,
    #[error("index {0} out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
}

/// An arrow of the quiver. Vertices are 0-based internally; the text format
/// uses 1-based ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub label: String,
    pub source: usize,
    pub target: usize,
}

/// A basis path: a (possibly empty) composable arrow sequence, stored in
/// traversal order (first arrow applied first).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

/// A monomial path algebra presented by a quiver and zero relations,
/// together with its computed finite path basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverAlgebra {
    pub vertex_count: usize,
    pub arrows: Vec<Arrow>,
    /// Relations as arrow-index sequences in traversal order.
    pub zero_relations: Vec<Vec<usize>>,
    pub path_basis: Vec<Path>,
}

impl QuiverAlgebra {
    pub fn dim(&self) -> usize {
        self.path_basis.len()
    }

    /// Parses the quiver text format:
    ///
    /// ```text
    /// vertices = 2
    /// arrow a 1 2
    /// zero b a
    /// ```
    ///
    /// Relation labels are composed right to left: `zero b a` declares that
    /// the path traversing `a` first and `b` second is zero.
    pub fn parse(text: &str) -> Result<QuiverAlgebra, AlgebraError> {
        let mut vertex_count: Option<usize> = None;
        let mut arrows: Vec<Arrow> = Vec::new();
        let mut relations: Vec<Vec<usize>> = Vec::new();

        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens[0] {
                "vertices" => {
                    let rhs = line
                        .split_once('=')
                        .ok_or_else(|| AlgebraError::Syntax(format!("expected `vertices = n`: {line}")))?
                        .1
                        .trim();
                    let n: usize = rhs
                        .parse()
                        .map_err(|_| AlgebraError::Syntax(format!("bad vertex count `{rhs}`")))?;
                    if n == 0 {
                        return Err(AlgebraError::Syntax("vertex count must be positive".into()));
                    }
                    vertex_count = Some(n);
                }
                "arrow" => {
                    if tokens.len() != 4 {
                        return Err(AlgebraError::Syntax(format!(
                            "expected `arrow <label> <src> <dst>`: {line}"
                        )));
                    }
                    let n = vertex_count
                        .ok_or_else(|| AlgebraError::Syntax("`vertices` must come first".into()))?;
                    let label = tokens[1].to_string();
                    if arrows.iter().any(|a| a.label == label) {
                        return Err(AlgebraError::DuplicateLabel(label));
                    }
                    let src: usize = tokens[2]
                        .parse()
                        .map_err(|_| AlgebraError::Syntax(format!("bad vertex id `{}`", tokens[2])))?;
                    let dst: usize = tokens[3]
                        .parse()
                        .map_err(|_| AlgebraError::Syntax(format!("bad vertex id `{}`", tokens[3])))?;
                    if src == 0 || src > n {
                        return Err(AlgebraError::UnknownVertex(src));
                    }
                    if dst == 0 || dst > n {
                        return Err(AlgebraError::UnknownVertex(dst));
                    }
                    arrows.push(Arrow {
                        label,
                        source: src - 1,
                        target: dst - 1,
                    });
                }
                "zero" => {
                    if tokens.len() < 2 {
                        return Err(AlgebraError::Syntax(format!("empty zero relation: {line}")));
                    }
                    let mut seq = Vec::new();
                    // Right-to-left composition: the rightmost label is
                    // traversed first.
                    for &label in tokens[1..].iter().rev() {
                        if label.contains('+') || label.contains('-') {
                            return Err(AlgebraError::NonMonomial(line.to_string()));
                        }
                        let idx = arrows
                            .iter()
                            .position(|a| a.label == label)
                            .ok_or_else(|| AlgebraError::UnknownArrow(label.to_string()))?;
                        seq.push(idx);
                    }
                    // Consecutive arrows must compose.
                    for w in seq.windows(2) {
                        if arrows[w[0]].target != arrows[w[1]].source {
                            return Err(AlgebraError::Syntax(format!(
                                "relation is not a composable path: {line}"
                            )));
                        }
                    }
                    relations.push(seq);
                }
                other => {
                    if line.contains('=') && other != "vertices" {
                        return Err(AlgebraError::NonMonomial(line.to_string()));
                    }
                    return Err(AlgebraError::Syntax(format!("unknown directive `{other}`")));
                }
            }
        }

        let vertex_count =
            vertex_count.ok_or_else(|| AlgebraError::Syntax("missing `vertices = n`".into()))?;
        let path_basis = enumerate_path_basis(vertex_count, &arrows, &relations)?;
        Ok(QuiverAlgebra {
            vertex_count,
            arrows,
            zero_relations: relations,
            path_basis,
        })
    }
}

/// True iff `seq` ends with a full zero relation.
fn completes_relation(seq: &[usize], relations: &[Vec<usize>]) -> bool {
    relations
        .iter()
        .any(|r| !r.is_empty() && seq.len() >= r.len() && seq[seq.len() - r.len()..] == r[..])
}

/// Decides finiteness before enumerating: relation-avoiding paths are walks
/// in the automaton whose states are (vertex, last L arrows) for L one less
/// than the longest relation. The basis is infinite iff a reachable state
/// lies on a cycle.
fn has_unbounded_paths(n: usize, arrows: &[Arrow], relations: &[Vec<usize>]) -> bool {
    let window = relations.iter().map(|r| r.len().saturating_sub(1)).max().unwrap_or(0);

    use std::collections::HashMap;
    type State = (usize, Vec<usize>);
    let mut states: Vec<State> = (0..n).map(|v| (v, Vec::new())).collect();
    let mut index: HashMap<State, usize> = states
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    let mut edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut i = 0;
    while i < states.len() {
        let (v, hist) = states[i].clone();
        for (ai, a) in arrows.iter().enumerate() {
            if a.source != v {
                continue;
            }
            let mut seq = hist.clone();
            seq.push(ai);
            if completes_relation(&seq, relations) {
                continue;
            }
            if seq.len() > window {
                seq.remove(0);
            }
            let next: State = (a.target, seq);
            let j = *index.entry(next.clone()).or_insert_with(|| {
                states.push(next);
                edges.push(Vec::new());
                states.len() - 1
            });
            edges[i].push(j);
        }
        i += 1;
    }

    // Cycle detection by iterative DFS coloring.
    #[derive(Clone, Copy, PartialEq)]
    enum Color {
        White,
        Gray,
        Black,
    }
    let mut color = vec![Color::White; states.len()];
    for start in 0..states.len() {
        if color[start] != Color::White {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        color[start] = Color::Gray;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if *next < edges[node].len() {
                let child = edges[node][*next];
                *next += 1;
                match color[child] {
                    Color::Gray => return true,
                    Color::White => {
                        color[child] = Color::Gray;
                        stack.push((child, 0));
                    }
                    Color::Black => {}
                }
            } else {
                color[node] = Color::Black;
                stack.pop();
            }
        }
    }
    false
}

fn enumerate_path_basis(
    n: usize,
    arrows: &[Arrow],
    relations: &[Vec<usize>],
) -> Result<Vec<Path>, AlgebraError> {
    if has_unbounded_paths(n, arrows, relations) {
        return Err(AlgebraError::InfiniteDimensional);
    }
    let cap = 10 * n * arrows.len().max(1);

    let mut basis: Vec<Path> = (0..n)
        .map(|v| Path {
            source: v,
            target: v,
            arrows: Vec::new(),
        })
        .collect();
    let mut frontier = basis.clone();
    let mut len = 0usize;
    while !frontier.is_empty() {
        len += 1;
        if len > cap {
            // Unreachable given the automaton check; kept as a hard stop.
            return Err(AlgebraError::InfiniteDimensional);
        }
        let mut next = Vec::new();
        for p in &frontier {
            for (ai, a) in arrows.iter().enumerate() {
                if a.source != p.target {
                    continue;
                }
                let mut seq = p.arrows.clone();
                seq.push(ai);
                if completes_relation(&seq, relations) {
                    continue;
                }
                next.push(Path {
                    source: p.source,
                    target: a.target,
                    arrows: seq,
                });
            }
        }
        basis.extend(next.iter().cloned());
        frontier = next;
    }
    // Deterministic order: length, then source vertex, then arrow labels.
    basis.sort_by(|p, q| {
        let kp = (p.arrows.len(), p.source, label_key(p, arrows));
        let kq = (q.arrows.len(), q.source, label_key(q, arrows));
        kp.cmp(&kq)
    });
    Ok(basis)
}

fn label_key(p: &Path, arrows: &[Arrow]) -> Vec<String> {
    p.arrows.iter().map(|&i| arrows[i].label.clone()).collect()
}

/// The n x n table D with D[i][j] = dim(e_i A e_j), the number of basis
/// paths from vertex j to vertex i.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositionTable {
    pub n: usize,
    pub d: Mat,
}

/// Behaviour of F_ij under self-composition, read off from D[j][i].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnitClass {
    Nilpotent,
    Idempotent,
    Higher(Int),
}

/// An adjoint pair (F_it, F_si) derived from a projective-injective pair
/// (s, t). Index pairs are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AdjointPair {
    pub left: (usize, usize),
    pub right: (usize, usize),
}

pub fn dim_table(alg: &QuiverAlgebra) -> CompositionTable {
    let n = alg.vertex_count;
    let mut d = Mat::zeros(n, n);
    for p in &alg.path_basis {
        d[(p.target, p.source)] = d[(p.target, p.source)] + 1;
    }
    CompositionTable { n, d }
}

impl CompositionTable {
    fn check_index(&self, v: usize) -> Result<usize, AlgebraError> {
        if v == 0 || v > self.n {
            Err(AlgebraError::IndexOutOfRange(v, self.n))
        } else {
            Ok(v - 1)
        }
    }

    /// dim(e_j A e_s), the multiplicity of F_it in F_ij o F_st.
    /// Takes 1-based vertex ids.
    pub fn composition_coeff(&self, j: usize, s: usize) -> Result<Int, AlgebraError> {
        let j = self.check_index(j)?;
        let s = self.check_index(s)?;
        Ok(self.d[(j, s)])
    }

    /// dim Hom(F_ij, F_st) = dim(e_i A e_s) * dim(e_t A e_j).
    /// Takes 1-based vertex ids.
    pub fn hom_dim(&self, (i, j): (usize, usize), (s, t): (usize, usize)) -> Result<Int, AlgebraError> {
        let i = self.check_index(i)?;
        let j = self.check_index(j)?;
        let s = self.check_index(s)?;
        let t = self.check_index(t)?;
        Ok(self.d[(i, s)] * self.d[(t, j)])
    }

    /// 0-based variant used internally by the search stages.
    pub fn hom_dim0(&self, (i, j): (usize, usize), (s, t): (usize, usize)) -> Int {
        self.d[(i, s)] * self.d[(t, j)]
    }

    /// Classification of F_ij by dim(e_j A e_i). Takes 1-based vertex ids.
    pub fn unit_classification(&self, i: usize, j: usize) -> Result<UnitClass, AlgebraError> {
        let i0 = self.check_index(i)?;
        let j0 = self.check_index(j)?;
        Ok(self.unit_class0(i0, j0))
    }

    pub fn unit_class0(&self, i: usize, j: usize) -> UnitClass {
        match self.d[(j, i)] {
            0 => UnitClass::Nilpotent,
            1 => UnitClass::Idempotent,
            c => UnitClass::Higher(c),
        }
    }

    /// All (s, t) with the dimension vector of Ae_s equal to that of the
    /// dual of e_tA, i.e. column s of D equal to row t of D. 0-based.
    pub fn projective_injective_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for s in 0..self.n {
            for t in 0..self.n {
                if (0..self.n).all(|a| self.d[(a, s)] == self.d[(t, a)]) {
                    out.push((s, t));
                }
            }
        }
        out
    }

    /// For each projective-injective pair (s, t) and each vertex i, the
    /// adjoint pair (F_it, F_si). 0-based, deterministically sorted.
    pub fn adjoint_pairs(&self) -> Vec<AdjointPair> {
        self.adjoint_pairs_from(&self.projective_injective_pairs())
    }

    /// Same, from an explicit projective-injective pair list (used by the
    /// `--assume-proj-inj` override).
    pub fn adjoint_pairs_from(&self, proj_inj: &[(usize, usize)]) -> Vec<AdjointPair> {
        let mut out: Vec<AdjointPair> = proj_inj
            .iter()
            .flat_map(|&(s, t)| {
                (0..self.n).map(move |i| AdjointPair {
                    left: (i, t),
                    right: (s, i),
                })
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn parse_a2() {
        let alg = QuiverAlgebra::parse(corpus::A2).unwrap();
        assert_eq!(alg.dim(), 3);
        assert_eq!(alg.path_basis.len(), 3);
        // trivial paths first
        assert!(alg.path_basis[0].arrows.is_empty());
        assert!(alg.path_basis[1].arrows.is_empty());
        assert_eq!(alg.path_basis[2].arrows.len(), 1);
    }

    #[test]
    fn parse_a3_with_zero_relation() {
        let alg = QuiverAlgebra::parse(corpus::A3_ZERO).unwrap();
        assert_eq!(alg.dim(), 5);
    }

    #[test]
    fn parse_single_vertex() {
        let alg = QuiverAlgebra::parse("vertices = 1\n").unwrap();
        assert_eq!(alg.dim(), 1);
        let t = dim_table(&alg);
        assert_eq!(t.d, Mat::from_rows(vec![vec![1]]));
        assert_eq!(t.projective_injective_pairs(), vec![(0, 0)]);
        assert_eq!(
            t.adjoint_pairs(),
            vec![AdjointPair { left: (0, 0), right: (0, 0) }]
        );
    }

    #[test]
    fn loop_without_relation_is_infinite() {
        let err = QuiverAlgebra::parse("vertices = 1\narrow x 1 1\n").unwrap_err();
        assert_eq!(err, AlgebraError::InfiniteDimensional);
    }

    #[test]
    fn loop_killed_by_relation_is_finite() {
        let alg = QuiverAlgebra::parse("vertices = 1\narrow x 1 1\nzero x x\n").unwrap();
        assert_eq!(alg.dim(), 2); // e_1 and x
    }

    #[test]
    fn rejects_duplicate_label_and_unknown_arrow() {
        assert_eq!(
            QuiverAlgebra::parse("vertices = 2\narrow a 1 2\narrow a 2 1\n").unwrap_err(),
            AlgebraError::DuplicateLabel("a".into())
        );
        assert_eq!(
            QuiverAlgebra::parse("vertices = 2\narrow a 1 2\nzero b\n").unwrap_err(),
            AlgebraError::UnknownArrow("b".into())
        );
    }

    #[test]
    fn dim_table_a2() {
        let alg = QuiverAlgebra::parse(corpus::A2).unwrap();
        let t = dim_table(&alg);
        assert_eq!(t.d, Mat::from_rows(vec![vec![1, 0], vec![1, 1]]));
    }

    #[test]
    fn dim_table_a3() {
        let alg = QuiverAlgebra::parse(corpus::A3_ZERO).unwrap();
        let t = dim_table(&alg);
        assert_eq!(
            t.d,
            Mat::from_rows(vec![vec![1, 0, 0], vec![1, 1, 0], vec![0, 1, 1]])
        );
    }

    #[test]
    fn composition_coeffs() {
        let a2 = dim_table(&QuiverAlgebra::parse(corpus::A2).unwrap());
        assert_eq!(a2.composition_coeff(2, 1).unwrap(), 1);
        let a3 = dim_table(&QuiverAlgebra::parse(corpus::A3_ZERO).unwrap());
        assert_eq!(a3.composition_coeff(1, 3).unwrap(), 0);
        for j in 1..=2 {
            assert_eq!(a2.composition_coeff(j, j).unwrap(), 1);
        }
        for j in 1..=3 {
            assert_eq!(a3.composition_coeff(j, j).unwrap(), 1);
        }
        assert!(a2.composition_coeff(0, 1).is_err());
        assert!(a2.composition_coeff(1, 3).is_err());
    }

    #[test]
    fn hom_dims_a2() {
        let t = dim_table(&QuiverAlgebra::parse(corpus::A2).unwrap());
        assert_eq!(t.hom_dim((2, 1), (1, 2)).unwrap(), 1);
        assert_eq!(t.hom_dim((1, 1), (2, 1)).unwrap(), 0);
    }

    #[test]
    fn unit_classes() {
        let a2 = dim_table(&QuiverAlgebra::parse(corpus::A2).unwrap());
        assert_eq!(a2.unit_classification(1, 1).unwrap(), UnitClass::Idempotent);
        assert_eq!(a2.unit_classification(1, 2).unwrap(), UnitClass::Idempotent);
        assert_eq!(a2.unit_classification(2, 2).unwrap(), UnitClass::Idempotent);
        assert_eq!(a2.unit_classification(2, 1).unwrap(), UnitClass::Nilpotent);

        let a3 = dim_table(&QuiverAlgebra::parse(corpus::A3_ZERO).unwrap());
        let idem: Vec<(usize, usize)> = (1..=3)
            .flat_map(|i| (1..=3).map(move |j| (i, j)))
            .filter(|&(i, j)| a3.unit_classification(i, j).unwrap() == UnitClass::Idempotent)
            .collect();
        assert_eq!(idem, vec![(1, 1), (1, 2), (2, 2), (2, 3), (3, 3)]);
    }

    #[test]
    fn proj_inj_pairs() {
        let a2 = dim_table(&QuiverAlgebra::parse(corpus::A2).unwrap());
        assert_eq!(a2.projective_injective_pairs(), vec![(0, 1)]);
        let a3 = dim_table(&QuiverAlgebra::parse(corpus::A3_ZERO).unwrap());
        assert_eq!(a3.projective_injective_pairs(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn adjoint_pairs_a2() {
        let t = dim_table(&QuiverAlgebra::parse(corpus::A2).unwrap());
        let pairs = t.adjoint_pairs();
        assert_eq!(
            pairs,
            vec![
                AdjointPair { left: (0, 1), right: (0, 0) },
                AdjointPair { left: (1, 1), right: (0, 1) },
            ]
        );
    }

    #[test]
    fn adjoint_pairs_a3_contains_the_chain() {
        let t = dim_table(&QuiverAlgebra::parse(corpus::A3_ZERO).unwrap());
        let pairs = t.adjoint_pairs();
        // (F_33,F_23), (F_23,F_22), (F_22,F_12), (F_12,F_11) in 0-based form.
        for want in [
            AdjointPair { left: (2, 2), right: (1, 2) },
            AdjointPair { left: (1, 2), right: (1, 1) },
            AdjointPair { left: (1, 1), right: (0, 1) },
            AdjointPair { left: (0, 1), right: (0, 0) },
        ] {
            assert!(pairs.contains(&want), "missing {want:?}");
        }
        assert_eq!(pairs.len(), 6);
    }
}
