//! Simultaneous-conjugation action of the symmetric group on matrices and
//! on indexed families of matrices, and brute-force canonical forms.
//!
//! All matrices here are at most dim(A) x dim(A), so full enumeration of the
//! k! conjugations is both the implementation and its own correctness
//! argument. The canonical representative is the one minimizing the
//! flattened entry sequence lexicographically.

use serde::{Deserialize, Serialize};

use crate::matrix::{Matrix, Scalar};

/// A bijection on {0, .., k-1}, stored as its image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(k: usize) -> Self {
        Permutation {
            image: (0..k).collect(),
        }
    }

    pub fn from_image(image: Vec<usize>) -> Self {
        let mut seen = vec![false; image.len()];
        for &v in &image {
            assert!(v < image.len() && !seen[v], "not a bijection");
            seen[v] = true;
        }
        Permutation { image }
    }

    pub fn swap(k: usize, a: usize, b: usize) -> Self {
        let mut image: Vec<usize> = (0..k).collect();
        image.swap(a, b);
        Permutation { image }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn apply(&self, a: usize) -> usize {
        self.image[a]
    }

    /// self after other: (self.compose(other))(a) = self(other(a)).
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Permutation {
            image: other.image.iter().map(|&a| self.image[a]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0; self.len()];
        for (a, &b) in self.image.iter().enumerate() {
            image[b] = a;
        }
        Permutation { image }
    }

    /// All k! permutations, in a deterministic order.
    pub fn all(k: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(k);
        let mut used = vec![false; k];
        fn rec(k: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if current.len() == k {
                out.push(Permutation {
                    image: current.clone(),
                });
                return;
            }
            for v in 0..k {
                if !used[v] {
                    used[v] = true;
                    current.push(v);
                    rec(k, current, used, out);
                    current.pop();
                    used[v] = false;
                }
            }
        }
        rec(k, &mut current, &mut used, &mut out);
        out
    }
}

/// Conjugation by the permutation matrix of sigma:
/// out[sigma(a)][sigma(b)] = m[a][b].
pub fn act<T: Scalar>(sigma: &Permutation, m: &Matrix<T>) -> Matrix<T> {
    assert!(m.is_square() && sigma.len() == m.rows(), "size mismatch");
    let k = m.rows();
    let mut out = Matrix::zeros(k, k);
    for a in 0..k {
        for b in 0..k {
            out[(sigma.apply(a), sigma.apply(b))] = m[(a, b)];
        }
    }
    out
}

/// A family of equal-size square matrices indexed by the vertex pairs
/// (i, j) of an n-vertex algebra, stored in lexicographic key order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatrixFamily<T: Scalar> {
    pub n: usize,
    pub k: usize,
    /// members[i * n + j] is the matrix at key (i, j).
    pub members: Vec<Matrix<T>>,
}

impl<T: Scalar> MatrixFamily<T> {
    pub fn new(n: usize, k: usize, members: Vec<Matrix<T>>) -> Self {
        assert_eq!(members.len(), n * n);
        assert!(members.iter().all(|m| m.rows() == k && m.cols() == k));
        MatrixFamily { n, k, members }
    }

    pub fn member(&self, i: usize, j: usize) -> &Matrix<T> {
        &self.members[i * self.n + j]
    }

    pub fn keys(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)))
    }

    pub fn sum(&self) -> Matrix<T> {
        self.members
            .iter()
            .fold(Matrix::zeros(self.k, self.k), |acc, m| acc.add(m))
    }

    /// Member matrices concatenated in key order; the family comparison key.
    pub fn flat(&self) -> Vec<T> {
        self.members.iter().flat_map(|m| m.flat().iter().copied()).collect()
    }
}

/// Applies `act` to every member; the (i, j) keys are not permuted.
pub fn act_family<T: Scalar>(sigma: &Permutation, fam: &MatrixFamily<T>) -> MatrixFamily<T> {
    MatrixFamily {
        n: fam.n,
        k: fam.k,
        members: fam.members.iter().map(|m| act(sigma, m)).collect(),
    }
}

/// Canonical form of a single matrix under conjugation, with a witnessing
/// permutation. Idempotent: the form is a fixed point.
pub fn canonical_form<T: Scalar>(m: &Matrix<T>) -> (Matrix<T>, Permutation) {
    assert!(m.is_square());
    let mut best: Option<(Matrix<T>, Permutation)> = None;
    for sigma in Permutation::all(m.rows()) {
        let candidate = act(&sigma, m);
        if best.as_ref().map_or(true, |(b, _)| candidate.flat() < b.flat()) {
            best = Some((candidate, sigma));
        }
    }
    best.expect("at least the identity permutation")
}

/// Canonical form of a family under simultaneous conjugation of all members.
pub fn canonical_form_family<T: Scalar>(
    fam: &MatrixFamily<T>,
) -> (MatrixFamily<T>, Permutation) {
    let mut best: Option<(MatrixFamily<T>, Permutation)> = None;
    for sigma in Permutation::all(fam.k) {
        let candidate = act_family(&sigma, fam);
        if best.as_ref().map_or(true, |(b, _)| candidate.flat() < b.flat()) {
            best = Some((candidate, sigma));
        }
    }
    best.expect("at least the identity permutation")
}

pub fn orbit_equal<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> bool {
    assert_eq!(a.rows(), b.rows(), "size mismatch");
    canonical_form(a).0 == canonical_form(b).0
}

pub fn orbit_equal_family<T: Scalar>(a: &MatrixFamily<T>, b: &MatrixFamily<T>) -> bool {
    assert!(a.n == b.n && a.k == b.k, "size mismatch");
    canonical_form_family(a).0 == canonical_form_family(b).0
}

/// The stabilizer of `m` inside the full symmetric group.
pub fn stabilizer<T: Scalar>(m: &Matrix<T>) -> Vec<Permutation> {
    Permutation::all(m.rows())
        .into_iter()
        .filter(|sigma| act(sigma, m) == *m)
        .collect()
}

/// Minimizes the family over a precomputed permutation set. With the
/// stabilizer of the target matrix this canonicalizes a decomposition
/// without moving the target, which is the joint canonical form of
/// (target, family) restricted to representatives keeping the target fixed.
pub fn canonical_form_family_under<T: Scalar>(
    fam: &MatrixFamily<T>,
    group: &[Permutation],
) -> MatrixFamily<T> {
    group
        .iter()
        .map(|sigma| act_family(sigma, fam))
        .min_by(|a, b| a.flat().cmp(&b.flat()))
        .expect("non-empty permutation set")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Mat;

    fn m(rows: Vec<Vec<i64>>) -> Mat {
        Mat::from_rows(rows)
    }

    #[test]
    fn swap_maps_m3_to_m4() {
        let m3 = m(vec![vec![2, 2], vec![1, 1]]);
        let m4 = m(vec![vec![1, 1], vec![2, 2]]);
        assert_eq!(act(&Permutation::swap(2, 0, 1), &m3), m4);
    }

    #[test]
    fn swap_maps_m2_to_m5() {
        let m2 = m(vec![vec![2, 1], vec![2, 1]]);
        let m5 = m(vec![vec![1, 2], vec![1, 2]]);
        assert_eq!(act(&Permutation::swap(2, 0, 1), &m2), m5);
    }

    #[test]
    fn identity_action_is_trivial() {
        let m2 = m(vec![vec![2, 1], vec![2, 1]]);
        assert_eq!(act(&Permutation::identity(2), &m2), m2);
    }

    #[test]
    fn swap_maps_n12_variant_to_n12() {
        let n12p = m(vec![vec![2, 1, 1], vec![4, 2, 2], vec![2, 1, 1]]);
        let n12 = m(vec![vec![2, 4, 2], vec![1, 2, 1], vec![1, 2, 1]]);
        assert_eq!(act(&Permutation::swap(3, 0, 1), &n12p), n12);
        assert_eq!(canonical_form(&n12p).0, canonical_form(&n12).0);
    }

    #[test]
    fn canonical_same_orbit() {
        let m3 = m(vec![vec![2, 2], vec![1, 1]]);
        let m4 = m(vec![vec![1, 1], vec![2, 2]]);
        assert!(orbit_equal(&m3, &m4));
        let m2 = m(vec![vec![2, 1], vec![2, 1]]);
        assert!(!orbit_equal(&m2, &m3));
        assert!(orbit_equal(&m2, &m2));
    }

    #[test]
    fn canonical_of_identity_is_identity() {
        let id = Mat::identity(3);
        assert_eq!(canonical_form(&id).0, id);
    }

    #[test]
    fn canonical_is_idempotent_and_witnessed() {
        let m3 = m(vec![vec![2, 2], vec![1, 1]]);
        let (c, sigma) = canonical_form(&m3);
        assert_eq!(act(&sigma, &m3), c);
        assert_eq!(canonical_form(&c).0, c);
    }

    #[test]
    fn composition_of_actions() {
        let x = m(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]);
        let s = Permutation::from_image(vec![1, 2, 0]);
        let t = Permutation::swap(3, 0, 2);
        assert_eq!(act(&s.compose(&t), &x), act(&s, &act(&t, &x)));
    }

    #[test]
    fn family_action_and_canonical() {
        // The two-part family splitting M_2 as in the k=2 case; its image
        // under the swap sums to M_5.
        let m2 = m(vec![vec![2, 1], vec![2, 1]]);
        let fam = MatrixFamily::new(
            1,
            2,
            vec![m(vec![vec![2, 1], vec![2, 1]])],
        );
        let swapped = act_family(&Permutation::swap(2, 0, 1), &fam);
        assert_eq!(swapped.sum(), act(&Permutation::swap(2, 0, 1), &m2));
        let (c, sigma) = canonical_form_family(&fam);
        assert_eq!(act_family(&sigma, &fam), c);
        assert_eq!(canonical_form_family(&c).0, c);
        assert!(orbit_equal_family(&fam, &swapped));
    }

    #[test]
    fn stabilizer_sizes() {
        let all_ones = m(vec![vec![1; 3]; 3]);
        assert_eq!(stabilizer(&all_ones).len(), 6);
        let m2 = m(vec![vec![2, 1], vec![2, 1]]);
        assert_eq!(stabilizer(&m2).len(), 1);
    }
}
