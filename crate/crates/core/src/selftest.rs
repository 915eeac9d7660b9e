//! The built-in acceptance suite: ten exact checks of the pipeline against
//! the known answers for the two bundled algebras, runnable from the CLI
//! (`selftest`) and from the integration tests.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{dim_table, AdjointPair, AlgebraError, QuiverAlgebra};
use crate::canonical::{
    act, canonical_form, canonical_form_family_under, orbit_equal_family, stabilizer,
    MatrixFamily, Permutation,
};
use crate::classify::{classify, Verdict};
use crate::decomp::{
    brute_force_decompositions, check_family, enumerate_decompositions, FilterSet,
};
use crate::report::{classify_report, render_classify, CriterionRepr, SelftestReport, SCHEMA_VERSION};
use crate::roots::{brute_force_roots, enumerate_roots, CandidateMatrix, RootMode};
use crate::{Int, Mat};

const ADJOINT_GOLDEN: &str = include_str!("../tests/golden/a3_adjoint_pairs.txt");

fn m(rows: Vec<Vec<Int>>) -> Mat {
    Mat::from_rows(rows)
}

fn d3_matrices() -> Vec<Mat> {
    vec![
        m(vec![vec![3]]),
        m(vec![vec![2, 1], vec![2, 1]]),
        m(vec![vec![2, 2], vec![1, 1]]),
        m(vec![vec![1, 1], vec![2, 2]]),
        m(vec![vec![1, 2], vec![1, 2]]),
        m(vec![vec![1; 3]; 3]),
    ]
}

fn d5_matrices() -> Vec<Mat> {
    vec![
        m(vec![vec![5]]),
        m(vec![vec![4, 1], vec![4, 1]]),
        m(vec![vec![4, 4], vec![1, 1]]),
        m(vec![vec![4, 2], vec![2, 1]]),
        m(vec![vec![3, 6], vec![1, 2]]),
        m(vec![vec![3, 3], vec![2, 2]]),
        m(vec![vec![3, 2], vec![3, 2]]),
        m(vec![vec![3, 1], vec![6, 2]]),
        m(vec![vec![3, 1, 1], vec![3, 1, 1], vec![3, 1, 1]]),
        m(vec![vec![3, 3, 3], vec![1, 1, 1], vec![1, 1, 1]]),
        m(vec![vec![2, 2, 2], vec![2, 2, 2], vec![1, 1, 1]]),
        m(vec![vec![2, 4, 2], vec![1, 2, 1], vec![1, 2, 1]]),
        m(vec![vec![2, 2, 1], vec![2, 2, 1], vec![2, 2, 1]]),
        m(vec![vec![1; 5]; 5]),
        m(vec![
            vec![2, 1, 1, 1],
            vec![2, 1, 1, 1],
            vec![2, 1, 1, 1],
            vec![2, 1, 1, 1],
        ]),
        m(vec![
            vec![2, 2, 2, 2],
            vec![1, 1, 1, 1],
            vec![1, 1, 1, 1],
            vec![1, 1, 1, 1],
        ]),
    ]
}

fn two_vertex_families() -> [MatrixFamily<Int>; 3] {
    [
        MatrixFamily::new(
            2,
            2,
            vec![
                m(vec![vec![1, 0], vec![0, 0]]),
                m(vec![vec![1, 1], vec![0, 0]]),
                m(vec![vec![0, 0], vec![1, 0]]),
                m(vec![vec![0, 0], vec![1, 1]]),
            ],
        ),
        MatrixFamily::new(
            2,
            2,
            vec![
                m(vec![vec![0, 1], vec![0, 1]]),
                m(vec![vec![1, 0], vec![1, 0]]),
                m(vec![vec![0, 1], vec![0, 0]]),
                m(vec![vec![1, 0], vec![0, 0]]),
            ],
        ),
        MatrixFamily::new(
            2,
            3,
            vec![
                m(vec![vec![1, 0, 0], vec![1, 0, 0], vec![0, 0, 0]]),
                m(vec![vec![0, 1, 1], vec![0, 1, 1], vec![0, 0, 0]]),
                m(vec![vec![0, 0, 0], vec![0, 0, 0], vec![1, 0, 0]]),
                m(vec![vec![0, 0, 0], vec![0, 0, 0], vec![0, 1, 1]]),
            ],
        ),
    ]
}

fn three_vertex_family() -> MatrixFamily<Int> {
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

fn sorted_flats(ms: &[Mat]) -> Vec<(usize, Vec<Int>)> {
    let mut v: Vec<(usize, Vec<Int>)> = ms.iter().map(|x| (x.rows(), x.flat().to_vec())).collect();
    v.sort();
    v
}

fn criterion_1() -> (bool, String) {
    let raw = match enumerate_roots(3, RootMode::Raw) {
        Ok(r) => r,
        Err(e) => return (false, e.to_string()),
    };
    let raw_ms: Vec<Mat> = raw.iter().map(|r| r.m.clone()).collect();
    let expected = d3_matrices();
    let raw_ok = sorted_flats(&raw_ms) == sorted_flats(&expected);
    let canonical = enumerate_roots(3, RootMode::Canonical).unwrap();
    (
        raw_ok && canonical.len() == 4,
        format!("raw={} canonical={}", raw.len(), canonical.len()),
    )
}

fn criterion_2() -> (bool, String) {
    let canonical = match enumerate_roots(5, RootMode::Canonical) {
        Ok(r) => r,
        Err(e) => return (false, e.to_string()),
    };
    let got: Vec<Mat> = canonical.iter().map(|r| r.m.clone()).collect();
    let expected: Vec<Mat> = d5_matrices()
        .iter()
        .map(|x| canonical_form(x).0)
        .collect();
    let ok = sorted_flats(&got) == sorted_flats(&expected);
    (ok, format!("canonical={}", canonical.len()))
}

fn criterion_3() -> (bool, String) {
    for d in 1..=6 {
        let raw = match enumerate_roots(d, RootMode::Raw) {
            Ok(r) => r,
            Err(e) => return (false, e.to_string()),
        };
        let oracle = brute_force_roots(d, d);
        let a: Vec<Mat> = raw.iter().map(|r| r.m.clone()).collect();
        let b: Vec<Mat> = oracle.iter().map(|r| r.m.clone()).collect();
        if sorted_flats(&a) != sorted_flats(&b) {
            return (false, format!("mismatch at dim {d}: {} vs {}", a.len(), b.len()));
        }
    }
    (true, "dims 1..6".to_string())
}

fn criterion_4(a2: &QuiverAlgebra, a3: &QuiverAlgebra) -> (bool, String) {
    // Composition multiplicity of F_ij o F_st at key order
    // (1,1),(1,2),(2,1),(2,2) for two vertices, and the analogous 9x9.
    let comp_a2 = m(vec![
        vec![1, 1, 0, 0],
        vec![1, 1, 1, 1],
        vec![1, 1, 0, 0],
        vec![1, 1, 1, 1],
    ]);
    let hom_a2 = m(vec![
        vec![1, 1, 0, 0],
        vec![0, 1, 0, 0],
        vec![1, 1, 1, 1],
        vec![0, 1, 0, 1],
    ]);
    let comp_a3 = m(vec![
        vec![1, 1, 1, 0, 0, 0, 0, 0, 0],
        vec![1, 1, 1, 1, 1, 1, 0, 0, 0],
        vec![0, 0, 0, 1, 1, 1, 1, 1, 1],
        vec![1, 1, 1, 0, 0, 0, 0, 0, 0],
        vec![1, 1, 1, 1, 1, 1, 0, 0, 0],
        vec![0, 0, 0, 1, 1, 1, 1, 1, 1],
        vec![1, 1, 1, 0, 0, 0, 0, 0, 0],
        vec![1, 1, 1, 1, 1, 1, 0, 0, 0],
        vec![0, 0, 0, 1, 1, 1, 1, 1, 1],
    ]);
    let hom_a3 = m(vec![
        vec![1, 1, 0, 0, 0, 0, 0, 0, 0],
        vec![0, 1, 1, 0, 0, 0, 0, 0, 0],
        vec![0, 0, 1, 0, 0, 0, 0, 0, 0],
        vec![1, 1, 0, 1, 1, 0, 0, 0, 0],
        vec![0, 1, 1, 0, 1, 1, 0, 0, 0],
        vec![0, 0, 1, 0, 0, 1, 0, 0, 0],
        vec![0, 0, 0, 1, 1, 0, 1, 1, 0],
        vec![0, 0, 0, 0, 1, 1, 0, 1, 1],
        vec![0, 0, 0, 0, 0, 1, 0, 0, 1],
    ]);
    for (alg, comp, hom) in [(a2, comp_a2, hom_a2), (a3, comp_a3, hom_a3)] {
        let table = dim_table(alg);
        let n = table.n;
        for (row, (i, j)) in (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).enumerate() {
            for (col, (s, t)) in (0..n).flat_map(|s| (0..n).map(move |t| (s, t))).enumerate() {
                if table.composition_coeff(j + 1, s + 1).unwrap() != comp[(row, col)] {
                    return (false, format!("composition mismatch at ({row},{col})"));
                }
                let h = table.hom_dim((i + 1, j + 1), (s + 1, t + 1)).unwrap();
                if h != hom[(row, col)] {
                    return (false, format!("hom mismatch at ({row},{col})"));
                }
            }
        }
    }
    (true, "both algebras".to_string())
}

fn criterion_5(a2: &QuiverAlgebra) -> (bool, String) {
    let table = dim_table(a2);
    let expected = two_vertex_families();
    let targets = [
        (m(vec![vec![3]]), None),
        (m(vec![vec![2, 1], vec![2, 1]]), Some(&expected[0])),
        (m(vec![vec![2, 2], vec![1, 1]]), Some(&expected[1])),
        (m(vec![vec![1; 3]; 3]), Some(&expected[2])),
    ];
    for (target, want) in &targets {
        let target = CandidateMatrix::new(target.clone(), 3).unwrap();
        let got = match enumerate_decompositions(&target, &table, FilterSet::all()) {
            Ok(v) => v,
            Err(e) => return (false, e.to_string()),
        };
        match want {
            None => {
                if !got.is_empty() {
                    return (false, "expected zero families".to_string());
                }
            }
            Some(fam) => {
                if got.len() != 1 || !orbit_equal_family(&got[0].family, fam) {
                    return (false, format!("family mismatch, got {}", got.len()));
                }
            }
        }
        // Multiplicative-only structured search against the splitting
        // oracle, both reduced to canonical representatives.
        let structured =
            enumerate_decompositions(&target, &table, FilterSet::multiplicative_only()).unwrap();
        let oracle = brute_force_decompositions(&target, &table).unwrap();
        let stab = stabilizer(&target.m);
        let mut oracle_canon: Vec<Vec<Int>> = oracle
            .iter()
            .map(|d| canonical_form_family_under(&d.family, &stab).flat())
            .collect();
        oracle_canon.sort();
        oracle_canon.dedup();
        let structured_flat: Vec<Vec<Int>> =
            structured.iter().map(|d| d.family.flat()).collect();
        if structured_flat != oracle_canon {
            return (false, "oracle mismatch".to_string());
        }
    }
    (true, "4 targets".to_string())
}

fn criterion_6(a3: &QuiverAlgebra) -> (bool, String) {
    let table = dim_table(a3);
    let n13 = canonical_form(&m(vec![vec![2, 2, 1], vec![2, 2, 1], vec![2, 2, 1]])).0;
    let roots = enumerate_roots(5, RootMode::Canonical).unwrap();
    let mut nonempty = 0;
    for root in &roots {
        let got = match enumerate_decompositions(root, &table, FilterSet::all()) {
            Ok(v) => v,
            Err(e) => return (false, e.to_string()),
        };
        if root.m == n13 {
            if got.len() != 1 || !orbit_equal_family(&got[0].family, &three_vertex_family()) {
                return (false, "wrong output at the surviving root".to_string());
            }
        } else if !got.is_empty() {
            return (false, format!("unexpected families for {:?}", root.m));
        }
        if !got.is_empty() {
            nonempty += 1;
        }
    }
    (nonempty == 1, format!("roots={} nonempty={nonempty}", roots.len()))
}

fn criterion_7(a2: &QuiverAlgebra) -> (bool, String) {
    let result = match classify(a2) {
        Ok(r) => r,
        Err(e) => return (false, e.to_string()),
    };
    if result.faithful_survivors != 1 {
        return (false, format!("survivors={}", result.faithful_survivors));
    }
    let cartan_a2 = m(vec![vec![1, 0], vec![1, 1]]);
    let survivor = result
        .roots
        .iter()
        .flat_map(|r| &r.decompositions)
        .flat_map(|d| &d.candidates)
        .find(|c| c.verdict != Verdict::Eliminated)
        .unwrap();
    if !matches!(survivor.verdict, Verdict::Cell { .. }) {
        return (false, "survivor is not a cell certificate".to_string());
    }
    if canonical_form(&survivor.cartan.c).0 != canonical_form(&cartan_a2).0 {
        return (false, "survivor Cartan mismatch".to_string());
    }
    // The decompositions of the other two multi-part roots must be fully
    // eliminated, and the survivor's root must also carry the eliminated
    // two-summand branch with identity Cartan.
    let mut eliminated_roots = 0;
    let mut branch_seen = false;
    for root in &result.roots {
        for dec in &root.decompositions {
            if dec.candidates.is_empty() {
                return (false, "decomposition without candidates".to_string());
            }
            if dec.candidates.iter().all(|c| c.verdict == Verdict::Eliminated) {
                eliminated_roots += 1;
            }
            for cand in &dec.candidates {
                if cand.verdict == Verdict::Eliminated
                    && cand.cartan.c == Mat::identity(2)
                    && cand
                        .assignment
                        .components
                        .iter()
                        .any(|s| s.len() == 2)
                    && dec
                        .candidates
                        .iter()
                        .any(|c| c.verdict != Verdict::Eliminated)
                {
                    branch_seen = true;
                }
            }
        }
    }
    (
        eliminated_roots == 2 && branch_seen,
        format!("eliminated_decompositions={eliminated_roots} branch_seen={branch_seen}"),
    )
}

fn criterion_8(a3: &QuiverAlgebra) -> (bool, String, Option<String>) {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .expect("thread pool");
    let start = Instant::now();
    let result = pool.install(|| classify(a3));
    let elapsed = start.elapsed();
    let result = match result {
        Ok(r) => r,
        Err(e) => return (false, e.to_string(), None),
    };
    let survivor = result
        .roots
        .iter()
        .flat_map(|r| &r.decompositions)
        .flat_map(|d| &d.candidates)
        .find(|c| c.verdict != Verdict::Eliminated);
    let ok = result.faithful_survivors == 1
        && survivor.is_some_and(|c| matches!(c.verdict, Verdict::Cell { .. }))
        && elapsed.as_secs_f64() < 10.0;
    let rendered = render_classify(&classify_report(&result));
    (
        ok,
        format!(
            "survivors={} elapsed={:.2}s",
            result.faithful_survivors,
            elapsed.as_secs_f64()
        ),
        Some(rendered),
    )
}

fn criterion_9(
    a2: &QuiverAlgebra,
    a3: &QuiverAlgebra,
    single_worker_report: Option<&str>,
) -> (bool, String) {
    // Canonicalization: permutation invariance and idempotence on random
    // (sigma, x) pairs.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cafe);
    for _ in 0..1000 {
        let k = rng.random_range(1..=5usize);
        let mut x = Mat::zeros(k, k);
        for a in 0..k {
            for b in 0..k {
                x[(a, b)] = rng.random_range(0..=4);
            }
        }
        let mut image: Vec<usize> = (0..k).collect();
        for a in (1..k).rev() {
            image.swap(a, rng.random_range(0..=a));
        }
        let sigma = Permutation::from_image(image);
        let (cx, _) = canonical_form(&x);
        if canonical_form(&act(&sigma, &x)).0 != cx || canonical_form(&cx).0 != cx {
            return (false, "canonicalization property violated".to_string());
        }
    }

    // Every emitted decomposition passes check_family; every emitted
    // assignment reconstructs its family.
    let table2 = dim_table(a2);
    for target in enumerate_roots(3, RootMode::Canonical).unwrap() {
        for dec in enumerate_decompositions(&target, &table2, FilterSet::all()).unwrap() {
            if !check_family(&dec, &table2) {
                return (false, "emitted family fails check_family".to_string());
            }
            let candidates = match crate::classify::enumerate_assignments(&dec, &table2) {
                Ok(v) => v,
                Err(e) => return (false, e.to_string()),
            };
            for (assignment, cartan) in &candidates {
                let exact = assignment
                    .components
                    .iter()
                    .zip(&dec.family.members)
                    .all(|(s, member)| {
                        crate::classify::reconstruct_component(cartan, s) == *member
                    });
                if !exact {
                    return (false, "assignment fails reconstruction".to_string());
                }
            }
        }
    }

    // Byte-identical reports across worker counts.
    let pool4 = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .expect("thread pool");
    let parallel = pool4.install(|| classify(a3));
    let parallel = match parallel {
        Ok(r) => r,
        Err(e) => return (false, e.to_string()),
    };
    let rendered = render_classify(&classify_report(&parallel));
    match single_worker_report {
        Some(single) if single == rendered => (true, "1000 pairs; reports byte-identical".to_string()),
        Some(_) => (false, "worker counts 1 and 4 disagree".to_string()),
        None => (false, "missing single-worker report".to_string()),
    }
}

fn criterion_10(a3: &QuiverAlgebra) -> (bool, String) {
    let table = dim_table(a3);
    let got = table.adjoint_pairs();
    let golden: Vec<AdjointPair> = ADJOINT_GOLDEN
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let xs: Vec<usize> = l
                .split_whitespace()
                .map(|w| w.parse::<usize>().expect("golden file integer"))
                .collect();
            assert_eq!(xs.len(), 4, "golden file line shape");
            AdjointPair {
                left: (xs[0] - 1, xs[1] - 1),
                right: (xs[2] - 1, xs[3] - 1),
            }
        })
        .collect();
    (
        got == golden,
        format!("computed={} golden={}", got.len(), golden.len()),
    )
}

/// Runs all ten checks against the two quiver descriptions and collects
/// one pass/fail entry per criterion.
pub fn run(a2_text: &str, a3_text: &str) -> Result<SelftestReport, AlgebraError> {
    let a2 = QuiverAlgebra::parse(a2_text)?;
    let a3 = QuiverAlgebra::parse(a3_text)?;

    let mut criteria = Vec::new();
    let mut push = |id: u32, name: &str, outcome: (bool, String)| {
        criteria.push(CriterionRepr {
            id,
            name: name.to_string(),
            passed: outcome.0,
            detail: outcome.1,
        });
    };

    push(1, "root enumeration, dim 3", criterion_1());
    push(2, "root enumeration, dim 5", criterion_2());
    push(3, "root oracle equivalence", criterion_3());
    push(4, "composition and hom golden tables", criterion_4(&a2, &a3));
    push(5, "decomposition search, two vertices", criterion_5(&a2));
    push(6, "decomposition search, three vertices", criterion_6(&a3));
    push(7, "classification, two vertices", criterion_7(&a2));
    let (ok8, detail8, single_report) = criterion_8(&a3);
    push(8, "classification, three vertices", (ok8, detail8));
    push(
        9,
        "property suites",
        criterion_9(&a2, &a3, single_report.as_deref()),
    );
    push(10, "adjunction derivation", criterion_10(&a3));

    let passed = criteria.iter().all(|c| c.passed);
    Ok(SelftestReport {
        schema_version: SCHEMA_VERSION,
        passed,
        criteria,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn golden_adjoint_file_parses() {
        let a3 = QuiverAlgebra::parse(corpus::A3_ZERO).unwrap();
        let (ok, detail) = criterion_10(&a3);
        assert!(ok, "{detail}");
    }
}
