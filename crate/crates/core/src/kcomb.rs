//! k-subsets of {1..n}, permutations of {1..n}, and binomial parity.
//!
//! Points are 1-based everywhere in the public API. Subsets are sorted
//! `Vec<usize>`; internally they are also kept as bitmasks (bit `i - 1`
//! for point `i`), which caps `n` at 64.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

pub const MAX_POINTS: usize = 64;

/// Parity of C(a, b) by Lucas' theorem: `true` iff C(a, b) is odd, i.e.
/// every binary digit of `b` is at most the matching digit of `a`.
/// C(a, b) = 0 for `b < 0` or `b > a`.
pub fn binom_parity(a: u64, b: i64) -> bool {
    if b < 0 || b as u64 > a {
        return false;
    }
    (b as u64) & !a == 0
}

/// Exact C(n, k) in `u128`; `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

fn mask_of(w: &[usize]) -> u64 {
    w.iter().fold(0u64, |m, &x| m | (1u64 << (x - 1)))
}

fn points_of(mut mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros() as usize + 1);
        mask &= mask - 1;
    }
    out
}

/// Colex ranking of the k-subsets of {1..n}.
///
/// `w < w'` iff the largest element of the symmetric difference lies in
/// `w'`, so subsets of {1..m} keep their ranks for every n >= m.
#[derive(Clone, Debug)]
pub struct KSubsetIndexer {
    n: usize,
    k: usize,
    // pascal[m][i] = C(m, i) for m <= n, i <= k
    pascal: Vec<Vec<usize>>,
    masks: Vec<u64>,
}

impl KSubsetIndexer {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::Size(format!("subset size k = {k} exceeds n = {n}")));
        }
        if n > MAX_POINTS {
            return Err(Error::Size(format!("n = {n} exceeds {MAX_POINTS} points")));
        }
        let mut pascal = vec![vec![0usize; k + 1]; n + 1];
        for m in 0..=n {
            pascal[m][0] = 1;
            for i in 1..=k.min(m) {
                pascal[m][i] = pascal[m - 1][i - 1] + if i < m { pascal[m - 1][i] } else { 0 };
            }
        }
        let mut idx = KSubsetIndexer {
            n,
            k,
            pascal,
            masks: Vec::new(),
        };
        let count = idx.count();
        idx.masks = (0..count).map(|r| mask_of(&idx.unrank_raw(r))).collect();
        Ok(idx)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// C(n, k).
    pub fn count(&self) -> usize {
        self.pascal[self.n][self.k]
    }

    fn choose(&self, m: usize, i: usize) -> usize {
        if i > m {
            0
        } else {
            self.pascal[m][i]
        }
    }

    fn check_subset(&self, w: &[usize]) -> Result<()> {
        if w.len() != self.k {
            return Err(Error::Size(format!("subset {w:?} does not have size {}", self.k)));
        }
        if w.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::Size(format!("subset {w:?} is not strictly increasing")));
        }
        if w.iter().any(|&x| x == 0 || x > self.n) {
            return Err(Error::Size(format!("subset {w:?} is not inside 1..={}", self.n)));
        }
        Ok(())
    }

    pub fn rank(&self, w: &[usize]) -> Result<usize> {
        self.check_subset(w)?;
        Ok(self.rank_unchecked(w))
    }

    #[inline]
    fn rank_unchecked(&self, w: &[usize]) -> usize {
        w.iter()
            .enumerate()
            .map(|(i, &x)| self.choose(x - 1, i + 1))
            .sum()
    }

    /// Rank of the subset encoded by `mask`.
    #[inline]
    pub fn rank_mask(&self, mut mask: u64) -> usize {
        let mut r = 0;
        let mut i = 1;
        while mask != 0 {
            let x = mask.trailing_zeros() as usize;
            r += self.choose(x, i);
            i += 1;
            mask &= mask - 1;
        }
        r
    }

    pub fn unrank(&self, r: usize) -> Result<Vec<usize>> {
        if r >= self.count() {
            return Err(Error::Size(format!(
                "rank {r} out of range for C({}, {}) = {}",
                self.n,
                self.k,
                self.count()
            )));
        }
        Ok(points_of(self.masks[r]))
    }

    fn unrank_raw(&self, mut r: usize) -> Vec<usize> {
        let mut out = vec![0; self.k];
        let mut top = self.n;
        for i in (1..=self.k).rev() {
            // largest x with C(x - 1, i) <= r
            let mut x = top;
            while self.choose(x - 1, i) > r {
                x -= 1;
            }
            out[i - 1] = x;
            r -= self.choose(x - 1, i);
            top = x - 1;
        }
        out
    }

    #[inline]
    pub fn mask(&self, r: usize) -> u64 {
        self.masks[r]
    }

    /// All subsets in rank order.
    pub fn subsets(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.masks.iter().map(|&m| points_of(m))
    }
}

/// A permutation of {1..n}.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    // images[i] = g(i + 1) - 1
    images: Vec<u8>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n as u8).collect(),
        }
    }

    /// From 1-based images: `images[i - 1] = g(i)`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n > MAX_POINTS {
            return Err(Error::InvalidPerm(format!("degree {n} exceeds {MAX_POINTS}")));
        }
        let mut seen = vec![false; n];
        for &x in images {
            if x == 0 || x > n || seen[x - 1] {
                return Err(Error::InvalidPerm(format!("{images:?} is not a bijection of 1..={n}")));
            }
            seen[x - 1] = true;
        }
        Ok(Perm {
            images: images.iter().map(|&x| (x - 1) as u8).collect(),
        })
    }

    /// Product of the given cycles (disjointness not required; cycles are
    /// applied right to left).
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut g = Perm::identity(n);
        for cycle in cycles.iter().rev() {
            let mut c = Perm::identity(n);
            if cycle.iter().any(|&x| x == 0 || x > n) {
                return Err(Error::InvalidPerm(format!("cycle {cycle:?} leaves 1..={n}")));
            }
            let mut sorted = cycle.to_vec();
            sorted.sort_unstable();
            if sorted.windows(2).any(|p| p[0] == p[1]) {
                return Err(Error::InvalidPerm(format!("cycle {cycle:?} repeats a point")));
            }
            for (i, &x) in cycle.iter().enumerate() {
                let y = cycle[(i + 1) % cycle.len()];
                c.images[x - 1] = (y - 1) as u8;
            }
            g = &g * &c;
        }
        Ok(g)
    }

    /// Parses cycle notation such as `(1 2)(3 4 5)`; `id` is the identity.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "id" || text.is_empty() {
            return Ok(Perm::identity(n));
        }
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            rest = rest.trim_start();
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' in {text:?}")))?;
            let close = body
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed cycle in {text:?}")))?;
            let points = body[..close]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad point {t:?} in {text:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            cycles.push(points);
            rest = body[close + 1..].trim_start();
        }
        let refs: Vec<&[usize]> = cycles.iter().map(|c| c.as_slice()).collect();
        Perm::from_cycles(n, &refs)
    }

    /// The transposition (a b).
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        Perm::from_cycles(n, &[&[a, b]])
    }

    /// The long cycle (1 2 ... n).
    pub fn long_cycle(n: usize) -> Self {
        let images: Vec<usize> = (1..=n).map(|i| i % n + 1).collect();
        Perm::from_images(&images).expect("long cycle is a bijection")
    }

    /// The generating pair (1 2), (1 2 ... n) of Sym(n).
    pub fn standard_generators(n: usize) -> Vec<Perm> {
        if n < 2 {
            return vec![Perm::identity(n)];
        }
        vec![
            Perm::transposition(n, 1, 2).expect("n >= 2"),
            Perm::long_cycle(n),
        ]
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// g(i) for a 1-based point.
    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1] as usize + 1
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Perm { images: inv }
    }

    /// Parity: `true` for odd permutations.
    pub fn is_odd(&self) -> bool {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut transpositions = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            transpositions += len - 1;
        }
        transpositions % 2 == 1
    }

    /// Image of a subset given as a bitmask.
    #[inline]
    pub fn apply_mask(&self, mut mask: u64) -> u64 {
        let mut out = 0u64;
        while mask != 0 {
            let x = mask.trailing_zeros() as usize;
            out |= 1u64 << self.images[x];
            mask &= mask - 1;
        }
        out
    }

    /// Image of a sorted subset, re-sorted.
    pub fn apply(&self, w: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = w.iter().map(|&x| self.image(x)).collect();
        out.sort_unstable();
        out
    }

    /// Lehmer-code rank in [0, n!).
    pub fn lehmer_rank(&self) -> usize {
        let n = self.images.len();
        let mut rank = 0;
        let mut used = 0u64;
        for i in 0..n {
            let x = self.images[i];
            let smaller_unused = (!used & ((1u64 << x) - 1)).count_ones() as usize;
            rank = rank * (n - i) + smaller_unused;
            used |= 1u64 << x;
        }
        rank
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.images[x] as usize;
            }
            out.push(cycle);
        }
        out
    }
}

impl std::ops::Mul for &Perm {
    type Output = Perm;

    /// `(h * g)(i) = h(g(i))`: `g` acts first.
    fn mul(self, g: &Perm) -> Perm {
        assert_eq!(self.images.len(), g.images.len(), "permutation degree mismatch");
        Perm {
            images: g.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("id");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{self}")
    }
}

/// Image of a k-subset under `g`.
pub fn apply(g: &Perm, w: &[usize]) -> Vec<usize> {
    g.apply(w)
}

/// Parity of the permutation `g` induces on `w`; `g` must stabilize `w`.
pub fn restriction_sign(g: &Perm, w: &[usize]) -> Result<bool> {
    let mask = mask_of(w);
    if g.apply_mask(mask) != mask {
        return Err(Error::NotStabilizing {
            perm: g.to_string(),
            subset: w.to_vec(),
        });
    }
    // parity = number of inversions of g restricted to w
    let mut inversions = 0usize;
    for (i, &a) in w.iter().enumerate() {
        for &b in &w[i + 1..] {
            if g.image(a) > g.image(b) {
                inversions += 1;
            }
        }
    }
    Ok(inversions % 2 == 1)
}

/// All of Sym(n), enumerated breadth-first from the identity by left
/// multiplication with a generating set.
///
/// Element 0 is the identity. For every other element the BFS tree records
/// the parent `p` and generator `s` with `element = s * p`.
#[derive(Clone, Debug)]
pub struct SymmetricGroup {
    n: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index_by_lehmer: Vec<usize>,
    tree: Vec<Option<(usize, usize)>>,
}

/// Largest degree for which the whole group is enumerated.
pub const MAX_ENUMERATED_DEGREE: usize = 8;

impl SymmetricGroup {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_generators(n, Perm::standard_generators(n))
    }

    pub fn with_generators(n: usize, generators: Vec<Perm>) -> Result<Self> {
        if n > MAX_ENUMERATED_DEGREE {
            return Err(Error::SizeBound {
                what: "degree of enumerated symmetric group".into(),
                value: n,
                bound: MAX_ENUMERATED_DEGREE,
            });
        }
        if generators.iter().any(|g| g.degree() != n) {
            return Err(Error::InvalidPerm("generator degree mismatch".into()));
        }
        let order: usize = (1..=n).product();
        let mut index_by_lehmer = vec![usize::MAX; order];
        let mut elements = vec![Perm::identity(n)];
        let mut tree = vec![None];
        index_by_lehmer[elements[0].lehmer_rank()] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(p) = queue.pop_front() {
            for (si, s) in generators.iter().enumerate() {
                let next = s * &elements[p];
                let lr = next.lehmer_rank();
                if index_by_lehmer[lr] == usize::MAX {
                    index_by_lehmer[lr] = elements.len();
                    elements.push(next);
                    tree.push(Some((p, si)));
                    queue.push_back(elements.len() - 1);
                }
            }
        }
        if elements.len() != order {
            return Err(Error::InvalidPerm(format!(
                "generators span a subgroup of order {} < {order}",
                elements.len()
            )));
        }
        Ok(SymmetricGroup {
            n,
            generators,
            elements,
            index_by_lehmer,
            tree,
        })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn index_of(&self, g: &Perm) -> usize {
        self.index_by_lehmer[g.lehmer_rank()]
    }

    /// Index of `elements[h] * elements[g]`.
    pub fn mul_index(&self, h: usize, g: usize) -> usize {
        self.index_of(&(&self.elements[h] * &self.elements[g]))
    }

    /// `(parent, generator)` of the BFS tree edge into element `i`.
    pub fn tree_edge(&self, i: usize) -> Option<(usize, usize)> {
        self.tree[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colex_extremes() {
        let idx = KSubsetIndexer::new(4, 2).unwrap();
        assert_eq!(idx.rank(&[1, 2]).unwrap(), 0);
        assert_eq!(idx.rank(&[3, 4]).unwrap(), 5);
        assert_eq!(idx.count(), 6);
    }

    #[test]
    fn colex_round_trip() {
        let idx = KSubsetIndexer::new(5, 3).unwrap();
        for r in 0..idx.count() {
            let w = idx.unrank(r).unwrap();
            assert_eq!(idx.rank(&w).unwrap(), r);
            assert_eq!(idx.rank_mask(idx.mask(r)), r);
        }
    }

    #[test]
    fn colex_ranks_stable_in_n() {
        let small = KSubsetIndexer::new(4, 2).unwrap();
        let big = KSubsetIndexer::new(7, 2).unwrap();
        for w in small.subsets() {
            assert_eq!(small.rank(&w).unwrap(), big.rank(&w).unwrap());
        }
    }

    #[test]
    fn colex_order_by_largest_difference() {
        let idx = KSubsetIndexer::new(6, 3).unwrap();
        let all: Vec<_> = idx.subsets().collect();
        for pair in all.windows(2) {
            let (a, b) = (mask_of(&pair[0]), mask_of(&pair[1]));
            let top = 63 - (a ^ b).leading_zeros();
            assert!(b >> top & 1 == 1);
        }
    }

    #[test]
    fn rank_errors() {
        let idx = KSubsetIndexer::new(4, 2).unwrap();
        assert!(idx.rank(&[1, 2, 3]).is_err());
        assert!(idx.rank(&[2, 1]).is_err());
        assert!(idx.rank(&[1, 5]).is_err());
        assert!(idx.unrank(6).is_err());
        assert!(KSubsetIndexer::new(2, 3).is_err());
    }

    #[test]
    fn empty_subset_indexer() {
        let idx = KSubsetIndexer::new(3, 0).unwrap();
        assert_eq!(idx.count(), 1);
        assert_eq!(idx.unrank(0).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn binom_parity_examples() {
        assert!(!binom_parity(6, 1));
        assert!(binom_parity(6, 4));
        for a in 0..20 {
            assert!(binom_parity(a, a as i64));
        }
        assert!(!binom_parity(0, -1));
        assert!(!binom_parity(3, 4));
    }

    #[test]
    fn apply_examples() {
        let n = 4;
        let t = Perm::parse(n, "(1 2)").unwrap();
        assert_eq!(apply(&t, &[1, 3]), vec![2, 3]);
        assert_eq!(apply(&Perm::identity(n), &[1, 3]), vec![1, 3]);
    }

    #[test]
    fn restriction_sign_examples() {
        let n = 4;
        assert!(!restriction_sign(&Perm::identity(n), &[1, 2]).unwrap());
        assert!(restriction_sign(&Perm::parse(n, "(1 2)").unwrap(), &[1, 2]).unwrap());
        assert!(!restriction_sign(&Perm::parse(n, "(1 2 3)").unwrap(), &[1, 2, 3]).unwrap());
        assert!(matches!(
            restriction_sign(&Perm::parse(n, "(1 3)").unwrap(), &[1, 2]),
            Err(Error::NotStabilizing { .. })
        ));
    }

    #[test]
    fn cycle_parsing() {
        let g = Perm::parse(5, "(1 2)(3 4 5)").unwrap();
        assert_eq!(g.images(), vec![2, 1, 4, 5, 3]);
        assert_eq!(g.to_string(), "(1 2)(3 4 5)");
        assert_eq!(Perm::parse(5, "id").unwrap(), Perm::identity(5));
        assert_eq!(Perm::parse(3, "(1,3)").unwrap().images(), vec![3, 2, 1]);
        assert!(Perm::parse(3, "(1 4)").is_err());
        assert!(Perm::parse(3, "(1 2").is_err());
        assert!(Perm::parse(3, "(1 1)").is_err());
        assert!(Perm::parse(3, "1 2").is_err());
    }

    #[test]
    fn composition_order() {
        let n = 3;
        let h = Perm::parse(n, "(1 2)").unwrap();
        let g = Perm::parse(n, "(2 3)").unwrap();
        // g first: 2 -> 3 -> 3; h first would give 2 -> 1
        assert_eq!((&h * &g).image(2), 3);
        assert_eq!((&h * &g).inverse(), &g * &h);
    }

    #[test]
    fn symmetric_group_enumeration() {
        let g = SymmetricGroup::new(4).unwrap();
        assert_eq!(g.order(), 24);
        assert!(g.element(0).is_identity());
        for i in 1..g.order() {
            let (p, s) = g.tree_edge(i).unwrap();
            assert_eq!(&g.generators()[s] * g.element(p), *g.element(i));
        }
        for (i, e) in g.elements().iter().enumerate() {
            assert_eq!(g.index_of(e), i);
        }
        assert!(SymmetricGroup::with_generators(3, vec![Perm::parse(3, "(1 2)").unwrap()]).is_err());
    }

    #[test]
    fn lehmer_rank_is_bijective() {
        let g = SymmetricGroup::new(5).unwrap();
        let mut ranks: Vec<usize> = g.elements().iter().map(Perm::lehmer_rank).collect();
        ranks.sort_unstable();
        assert_eq!(ranks, (0..120).collect::<Vec<_>>());
    }
}
