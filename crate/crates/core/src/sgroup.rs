//! Permutations in one-line notation and the symmetric-group combinatorics
//! used by induction: block sums, shuffles and coset representatives.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An element of `Σ_n`; `images[i]` is `σ(i+1)` (1-based values).
///
/// The derived order is lexicographic on one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (1..=n).collect() }
    }

    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::Argument(format!("{images:?} is not a permutation")));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation { images })
    }

    fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Self::new(images.clone()).is_ok());
        Permutation { images }
    }

    /// The adjacent transposition `s_i` swapping `i` and `i+1` in `Σ_n`.
    pub fn transposition(n: usize, i: usize) -> Self {
        assert!(i >= 1 && i < n, "s_{i} not in Σ_{n}");
        let mut images: Vec<usize> = (1..=n).collect();
        images.swap(i - 1, i);
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `σ(i)` for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree(), "degree mismatch in composition");
        Permutation { images: other.images.iter().map(|&i| self.images[i - 1]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation { images: inv }
    }

    pub fn sign(&self) -> i64 {
        if self.reduced_word().len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Indices `i_1, …, i_k` with `σ = s_{i_k} ∘ … ∘ s_{i_1}`.
    ///
    /// Acting on a vector, the generators are applied in the returned order.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut a = self.images.clone();
        let mut word = Vec::new();
        let n = a.len();
        for end in (1..n).rev() {
            for i in 0..end {
                if a[i] > a[i + 1] {
                    a.swap(i, i + 1);
                    word.push(i + 1);
                }
            }
        }
        word
    }

    /// Block sum `s × t`: `s` on `{1..p}`, `t` shifted by `p` on the rest.
    pub fn block_sum(&self, t: &Self) -> Self {
        let p = self.degree();
        let mut images = self.images.clone();
        images.extend(t.images.iter().map(|&v| v + p));
        Permutation { images }
    }

    /// Restricts to the last `q` letters, assuming the first `n−q` are fixed.
    pub fn tail(&self, q: usize) -> Self {
        let n = self.degree();
        let off = n - q;
        debug_assert!(self.images[..off].iter().enumerate().all(|(i, &v)| v == i + 1));
        Permutation { images: self.images[off..].iter().map(|&v| v - off).collect() }
    }

    /// Splits a block sum `a × b` with `a ∈ Σ_p`.
    pub fn split(&self, p: usize) -> (Self, Self) {
        let a = Permutation::from_images_unchecked(self.images[..p].to_vec());
        let b = Permutation::from_images_unchecked(self.images[p..].iter().map(|&v| v - p).collect());
        (a, b)
    }

    /// Position of this permutation among all of `Σ_n` in lexicographic order.
    pub fn lex_rank(&self) -> usize {
        let n = self.degree();
        let mut rank = 0;
        let mut fact = factorial(n);
        let mut used = vec![false; n + 1];
        for (i, &v) in self.images.iter().enumerate() {
            fact /= n - i;
            let smaller = (1..v).filter(|&u| !used[u]).count();
            rank += smaller * fact;
            used[v] = true;
        }
        rank
    }

    pub fn from_lex_rank(n: usize, mut rank: usize) -> Self {
        let mut avail: Vec<usize> = (1..=n).collect();
        let mut images = Vec::with_capacity(n);
        for i in 0..n {
            let f = factorial(n - 1 - i);
            images.push(avail.remove(rank / f));
            rank %= f;
        }
        Permutation { images }
    }

    /// Acts on a word by place permutation: letter at position `i` moves to `σ(i)`.
    pub fn act_on_word<T: Clone>(&self, w: &[T]) -> Vec<T> {
        let mut out = w.to_vec();
        for (i, x) in w.iter().enumerate() {
            out[self.images[i] - 1] = x.clone();
        }
        out
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}

#[derive(Serialize, Deserialize)]
struct PermutationJson {
    n: usize,
    images: Vec<usize>,
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PermutationJson { n: self.degree(), images: self.images.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PermutationJson::deserialize(d)?;
        if j.images.len() != j.n {
            return Err(serde::de::Error::custom("images length differs from n"));
        }
        Permutation::new(j.images).map_err(serde::de::Error::custom)
    }
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `χ_{q,p} ∈ Σ_{p+q}`: `i ↦ i+p` for `i ≤ q`, `i ↦ i−q` otherwise.
pub fn chi(q: usize, p: usize) -> Permutation {
    let images = (1..=q + p).map(|i| if i <= q { i + p } else { i - q }).collect();
    Permutation { images }
}

/// All of `Σ_n` in lexicographic order.
pub fn all_perms(n: usize) -> Vec<Permutation> {
    let mut out = Vec::with_capacity(factorial(n));
    let mut a: Vec<usize> = (1..=n).collect();
    loop {
        out.push(Permutation { images: a.clone() });
        // next permutation in lex order
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| a[i] < a[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| a[j] > a[i]).unwrap();
        a.swap(i, j);
        a[i + 1..].reverse();
    }
    out
}

/// `k`-element subsets of `{1..n}` as increasing vectors, in lex order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            if n - v + 1 < k - cur.len() {
                break;
            }
            cur.push(v);
            go(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// The `(p,q)`-shuffles: permutations of `Σ_{p+q}` increasing on `{1..p}` and
/// on `{p+1..p+q}`, sorted lexicographically. They represent the left cosets
/// of the Young subgroup `Σ_p × Σ_q`.
pub fn shuffles(p: usize, q: usize) -> Vec<Permutation> {
    let n = p + q;
    let mut out: Vec<Permutation> = subsets(n, p)
        .into_iter()
        .map(|s| {
            let mut images = s.clone();
            images.extend((1..=n).filter(|v| !s.contains(v)));
            Permutation { images }
        })
        .collect();
    out.sort();
    out
}

/// Writes `σ = g ∘ (a × b)` with `g` a `(p, n−p)`-shuffle.
pub fn young_decompose(s: &Permutation, p: usize) -> (Permutation, Permutation, Permutation) {
    let n = s.degree();
    let mut head = s.images[..p].to_vec();
    let mut tail = s.images[p..].to_vec();
    head.sort_unstable();
    tail.sort_unstable();
    head.extend(tail);
    let g = Permutation { images: head };
    let (a, b) = g.inverse().compose(s).split(p);
    debug_assert_eq!(a.degree() + b.degree(), n);
    (g, a, b)
}

/// Left coset representatives of `Σ_q` (acting on the last `q` letters) in
/// `Σ_l`: the permutations whose images on the last `q` letters increase.
/// Sorted lexicographically; there are `l!/q!` of them.
pub fn coset_reps(l: usize, q: usize) -> Result<Vec<Permutation>> {
    if q > l {
        return Err(Error::Argument(format!("coset_reps: q = {q} exceeds l = {l}")));
    }
    let head = l - q;
    let mut out = Vec::with_capacity(factorial(l) / factorial(q));
    fn go(l: usize, head: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
        if cur.len() == head {
            let mut images = cur.clone();
            images.extend((1..=l).filter(|&v| !used[v]));
            out.push(Permutation { images });
            return;
        }
        for v in 1..=l {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(l, head, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    go(l, head, &mut Vec::new(), &mut vec![false; l + 1], &mut out);
    Ok(out)
}

/// Writes `σ = g ∘ (1 × h)` with `g` the canonical coset representative of
/// `σ Σ_q` and `h ∈ Σ_q`.
pub fn tail_decompose(s: &Permutation, q: usize) -> (Permutation, Permutation) {
    let l = s.degree();
    let head = l - q;
    let mut images = s.images[..head].to_vec();
    let mut tail = s.images[head..].to_vec();
    tail.sort_unstable();
    images.extend(tail);
    let g = Permutation { images };
    let h = g.inverse().compose(s).tail(q);
    (g, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi(0, 3), Permutation::identity(3));
        assert_eq!(chi(1, 1), perm(&[2, 1]));
        assert_eq!(chi(2, 1), perm(&[2, 3, 1]));
    }

    #[test]
    fn chi_inverse_small() {
        for n in 0..=8 {
            for q in 0..=n {
                assert_eq!(chi(q, n - q), chi(n - q, q).inverse());
            }
        }
    }

    #[test]
    fn block_sum_examples() {
        assert_eq!(Permutation::identity(2).block_sum(&Permutation::identity(3)), Permutation::identity(5));
        assert_eq!(perm(&[2, 1]).block_sum(&Permutation::identity(1)), perm(&[2, 1, 3]));
    }

    #[test]
    fn chi_conjugates_block_sums() {
        for p in 0..=3 {
            for q in 0..=3 {
                for s in all_perms(p) {
                    for t in all_perms(q) {
                        let lhs = chi(p, q).compose(&s.block_sum(&t)).compose(&chi(q, p));
                        assert_eq!(lhs, t.block_sum(&s));
                    }
                }
            }
        }
    }

    #[test]
    fn coset_rep_counts() {
        assert_eq!(coset_reps(2, 2).unwrap(), vec![Permutation::identity(2)]);
        assert_eq!(coset_reps(2, 1).unwrap().len(), 2);
        assert_eq!(coset_reps(4, 2).unwrap().len(), 12);
        assert!(coset_reps(1, 2).is_err());
    }

    #[test]
    fn cosets_partition_the_group() {
        // Oracle: enumerate Σ_l and group by the coset of the tail subgroup.
        for l in 0..=6 {
            for q in 0..=l {
                let reps = coset_reps(l, q).unwrap();
                let mut sorted = reps.clone();
                sorted.sort();
                assert_eq!(sorted, reps);
                let mut seen = HashSet::new();
                for g in &reps {
                    for h in all_perms(q) {
                        let x = g.compose(&Permutation::identity(l - q).block_sum(&h));
                        assert!(seen.insert(x));
                    }
                }
                assert_eq!(seen.len(), factorial(l));
            }
        }
    }

    #[test]
    fn shuffles_partition_young_cosets() {
        for p in 0..=3 {
            for q in 0..=3 {
                let sh = shuffles(p, q);
                assert_eq!(sh.len(), binomial(p + q, p));
                let mut seen = HashSet::new();
                for g in &sh {
                    for a in all_perms(p) {
                        for b in all_perms(q) {
                            assert!(seen.insert(g.compose(&a.block_sum(&b))));
                        }
                    }
                }
                assert_eq!(seen.len(), factorial(p + q));
            }
        }
        // χ_{q,p} is itself a (q,p)-shuffle.
        assert!(shuffles(2, 1).contains(&chi(2, 1)));
    }

    #[test]
    fn lex_rank_matches_enumeration() {
        for n in 0..=5 {
            for (i, s) in all_perms(n).iter().enumerate() {
                assert_eq!(s.lex_rank(), i);
                assert_eq!(&Permutation::from_lex_rank(n, i), s);
            }
        }
    }

    #[test]
    fn json_format() {
        let s = serde_json::to_string(&chi(2, 1)).unwrap();
        assert_eq!(s, r#"{"n":3,"images":[2,3,1]}"#);
        let back: Permutation = serde_json::from_str(&s).unwrap();
        assert_eq!(back, chi(2, 1));
        assert!(serde_json::from_str::<Permutation>(r#"{"n":2,"images":[1,1]}"#).is_err());
    }

    fn arb_perm(max: usize) -> impl Strategy<Value = Permutation> {
        (0..=max).prop_flat_map(|n| {
            Just((1..=n).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Permutation::new(v).unwrap())
        })
    }

    proptest! {
        #[test]
        fn reduced_word_evaluates(s in arb_perm(6)) {
            let n = s.degree();
            let mut acc = Permutation::identity(n);
            for i in s.reduced_word() {
                acc = Permutation::transposition(n, i).compose(&acc);
            }
            prop_assert_eq!(acc, s);
        }

        #[test]
        fn inverse_composes_to_identity(s in arb_perm(7)) {
            prop_assert!(s.compose(&s.inverse()).is_identity());
        }

        #[test]
        fn decompositions_reassemble(s in arb_perm(6), k in 0usize..7) {
            let n = s.degree();
            let p = k.min(n);
            let (g, a, b) = young_decompose(&s, p);
            prop_assert_eq!(g.compose(&a.block_sum(&b)), s.clone());
            prop_assert!(shuffles(p, n - p).contains(&g));
            let (g, h) = tail_decompose(&s, p);
            prop_assert_eq!(g.compose(&Permutation::identity(n - p).block_sum(&h)), s);
        }
    }
}
