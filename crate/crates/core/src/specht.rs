//! Incidence maps between function spaces on j-subsets and k-subsets,
//! the standard submodules they generate, and Specht kernels.
//!
//! Vectors of GF(2)^([n]^j) are columns indexed by colex rank. The map
//! `alpha(j, k)` sends f to `w -> sum of f(v) over v ⊆ w, |v| = j`, so its
//! matrix has C(n, k) rows and C(n, j) columns. `beta(k, j)` sends a
//! k-set to the sum of its j-subsets and is the transpose.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{GF2Mat, GF2Vec, Subspace};
use crate::kcomb::{binom_parity, KSubsetIndexer, Perm};

/// Default cap on C(n, k) for lattice and classification runs.
pub const DEFAULT_SIZE_BOUND: usize = 512;

#[derive(Clone, Debug)]
pub struct AlphaMap {
    pub j: usize,
    pub k: usize,
    pub n: usize,
    pub mat: GF2Mat,
}

fn check_sizes(j: usize, k: usize, n: usize) -> Result<()> {
    if j > k || k > n {
        return Err(Error::Size(format!("need j <= k <= n, got j = {j}, k = {k}, n = {n}")));
    }
    Ok(())
}

pub fn alpha_matrix(j: usize, k: usize, n: usize) -> Result<AlphaMap> {
    check_sizes(j, k, n)?;
    let rows = KSubsetIndexer::new(n, k)?;
    let cols = KSubsetIndexer::new(n, j)?;
    let mut mat = GF2Mat::zeros(rows.count(), cols.count());
    for r in 0..rows.count() {
        let w = rows.mask(r);
        for_each_submask(w, j, &mut |v| mat.set(r, cols.rank_mask(v), true));
    }
    Ok(AlphaMap { j, k, n, mat })
}

/// Calls `f` on every `size`-element submask of `mask`.
fn for_each_submask(mask: u64, size: usize, f: &mut impl FnMut(u64)) {
    fn go(remaining: u64, size: usize, acc: u64, f: &mut impl FnMut(u64)) {
        if size == 0 {
            f(acc);
            return;
        }
        if (remaining.count_ones() as usize) < size {
            return;
        }
        let low = remaining & remaining.wrapping_neg();
        go(remaining & !low, size - 1, acc | low, f);
        go(remaining & !low, size, acc, f);
    }
    go(mask, size, 0, f);
}

/// Matrix of `beta(k, j)`: C(n, j) rows, C(n, k) columns, built directly
/// from the subset-sum definition.
pub fn beta_matrix(k: usize, j: usize, n: usize) -> Result<GF2Mat> {
    check_sizes(j, k, n)?;
    let src = KSubsetIndexer::new(n, k)?;
    let dst = KSubsetIndexer::new(n, j)?;
    let mut mat = GF2Mat::zeros(dst.count(), src.count());
    for c in 0..src.count() {
        for_each_submask(src.mask(c), j, &mut |v| mat.set(dst.rank_mask(v), c, true));
    }
    Ok(mat)
}

/// `∩_{i<k} ker beta(k, i)` inside GF(2)^C(n,k); the whole space when k = 0.
pub fn specht_kernel(k: usize, n: usize) -> Result<Subspace> {
    if k > n {
        return Err(Error::Size(format!("k = {k} exceeds n = {n}")));
    }
    let dim = KSubsetIndexer::new(n, k)?.count();
    let mut stacked = GF2Mat::zeros(0, dim);
    for i in 0..k {
        stacked = stacked.vstack(&beta_matrix(k, i, n)?)?;
    }
    Ok(stacked.kernel_basis())
}

/// A set of indices `J ⊆ {0..k}` encoded as a bitmask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet(pub u64);

impl IndexSet {
    pub fn from_indices(js: &[usize]) -> Self {
        IndexSet(js.iter().fold(0, |m, &j| m | (1u64 << j)))
    }

    pub fn contains(self, j: usize) -> bool {
        self.0 >> j & 1 == 1
    }

    pub fn indices(self) -> Vec<usize> {
        (0..64).filter(|&j| self.contains(j)).collect()
    }

    pub fn is_subset_of(self, other: IndexSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Parses `"0,1,3"`; the empty string or `"-"` is the empty set.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "-" {
            return Ok(IndexSet(0));
        }
        let js = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad index {t:?} in {text:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if js.iter().any(|&j| j >= 64) {
            return Err(Error::Parse(format!("index out of range in {text:?}")));
        }
        Ok(Self::from_indices(&js))
    }
}

impl Serialize for IndexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.indices().serialize(s)
    }
}

/// `Σ_{j ∈ J} im alpha(j, k)` inside GF(2)^C(n,k).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubmoduleSpec {
    pub k: usize,
    pub n: usize,
    pub js: IndexSet,
    pub materialized: Subspace,
}

pub fn standard_submodule(js: IndexSet, k: usize, n: usize) -> Result<SubmoduleSpec> {
    if k > n {
        return Err(Error::Size(format!("k = {k} exceeds n = {n}")));
    }
    if let Some(&bad) = js.indices().iter().find(|&&j| j > k) {
        return Err(Error::Size(format!("index {bad} exceeds k = {k}")));
    }
    let dim = KSubsetIndexer::new(n, k)?.count();
    let mut materialized = Subspace::zero(dim);
    for j in js.indices() {
        materialized = materialized.sum(&alpha_matrix(j, k, n)?.mat.image_basis())?;
    }
    Ok(SubmoduleSpec {
        k,
        n,
        js,
        materialized,
    })
}

/// Indices j ≤ k whose image is summed into M: those with C(k-2, j-2) even.
pub fn m_indices(k: usize) -> Result<IndexSet> {
    if k < 2 {
        return Err(Error::Precondition(format!("M is defined for k >= 2, got {k}")));
    }
    let js: Vec<usize> = (0..=k)
        .filter(|&j| !binom_parity((k - 2) as u64, j as i64 - 2))
        .collect();
    Ok(IndexSet::from_indices(&js))
}

/// The largest standard submodule without (S^2)* as a composition factor.
pub fn m_submodule(k: usize, n: usize) -> Result<SubmoduleSpec> {
    standard_submodule(m_indices(k)?, k, n)
}

/// Whether some j ∈ J has C(k-2, j-2) odd. When it does, the materialized
/// subspace must contain im alpha(2, k); that containment is checked.
pub fn has_s2_factor(spec: &SubmoduleSpec) -> Result<bool> {
    let k = spec.k;
    if k < 2 {
        return Ok(false);
    }
    let factor = spec
        .js
        .indices()
        .into_iter()
        .any(|j| binom_parity((k - 2) as u64, j as i64 - 2));
    if factor {
        let alpha2 = alpha_matrix(2, k, spec.n)?;
        for col in alpha2.mat.column_vectors() {
            if !spec.materialized.contains(&col)? {
                return Err(Error::Expectation(format!(
                    "J = {:?} has an (S^2)* factor but does not contain im alpha(2, {k}) at n = {}",
                    spec.js.indices(),
                    spec.n
                )));
            }
        }
    }
    Ok(factor)
}

/// Checks `alpha(k,l) * alpha(j,k) = C(l-j, k-j) * alpha(j,l)` exactly.
/// Returns the verdict together with the parity used.
pub fn composition_identity_check(j: usize, k: usize, l: usize, n: usize) -> Result<(bool, bool)> {
    check_sizes(j, k, n)?;
    check_sizes(k, l, n)?;
    let lhs = alpha_matrix(k, l, n)?.mat.mul(&alpha_matrix(j, k, n)?.mat)?;
    let parity = binom_parity((l - j) as u64, (k - j) as i64);
    let rhs = if parity {
        alpha_matrix(j, l, n)?.mat
    } else {
        GF2Mat::zeros(lhs.rows(), lhs.cols())
    };
    Ok((lhs == rhs, parity))
}

/// Coordinate permutation of GF(2)^C(n,k) induced by `g`:
/// `(g·v)(w) = v(g⁻¹ w)`, i.e. the matrix sends `e_w` to `e_{gw}`.
pub fn permutation_matrix(g: &Perm, indexer: &KSubsetIndexer) -> GF2Mat {
    let m = indexer.count();
    let mut p = GF2Mat::zeros(m, m);
    for r in 0..m {
        p.set(indexer.rank_mask(g.apply_mask(indexer.mask(r))), r, true);
    }
    p
}

/// Whether `s` is closed under the action of every permutation in `gens`.
pub fn is_invariant(s: &Subspace, gens: &[Perm], indexer: &KSubsetIndexer) -> Result<bool> {
    for g in gens {
        let p = permutation_matrix(g, indexer);
        for v in s.basis() {
            if !s.contains(&p.mul_vec(v)?)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeNode {
    #[serde(rename = "J")]
    pub js: IndexSet,
    /// Every J that materializes to this subspace, in canonical order.
    #[serde(rename = "aliases")]
    pub aliases: Vec<IndexSet>,
    pub dim: usize,
    #[serde(rename = "s2Factor")]
    pub s2_factor: bool,
    #[serde(skip)]
    pub subspace: Subspace,
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeReport {
    pub k: usize,
    pub n: usize,
    pub nodes: Vec<LatticeNode>,
    /// Covering pairs `[i, j]`: node i is a maximal proper subspace of node j.
    pub hasse: Vec<[usize; 2]>,
    /// Every node was closed under the standard generators of Sym(n).
    #[serde(rename = "generatorInvariant")]
    pub generator_invariant: bool,
}

impl LatticeReport {
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.nodes[i]
            .subspace
            .is_subspace_of(&self.nodes[j].subspace)
            .expect("nodes share the ambient space")
    }

    pub fn node_for(&self, js: IndexSet) -> Option<usize> {
        self.nodes.iter().position(|node| node.aliases.contains(&js))
    }
}

/// All distinct standard submodules of GF(2)^([n]^k), ordered by the
/// smallest J producing them (J compared as a bitmask).
pub fn lattice_report(k: usize, n: usize, size_bound: usize) -> Result<LatticeReport> {
    let indexer = KSubsetIndexer::new(n, k)?;
    if indexer.count() > size_bound {
        return Err(Error::SizeBound {
            what: format!("C({n}, {k})"),
            value: indexer.count(),
            bound: size_bound,
        });
    }
    let images: Vec<Subspace> = (0..=k)
        .map(|j| Ok(alpha_matrix(j, k, n)?.mat.image_basis()))
        .collect::<Result<_>>()?;
    let mut nodes: Vec<LatticeNode> = Vec::new();
    for bits in 0..(1u64 << (k + 1)) {
        let js = IndexSet(bits);
        let mut materialized = Subspace::zero(indexer.count());
        for j in js.indices() {
            materialized = materialized.sum(&images[j])?;
        }
        let spec = SubmoduleSpec {
            k,
            n,
            js,
            materialized,
        };
        let s2_factor = has_s2_factor(&spec)?;
        // Aliases share a subspace, so any one of them exhibits the factor.
        if let Some(node) = nodes.iter_mut().find(|node| node.subspace == spec.materialized) {
            node.aliases.push(js);
            node.s2_factor |= s2_factor;
            continue;
        }
        nodes.push(LatticeNode {
            js,
            aliases: vec![js],
            dim: spec.materialized.dim(),
            s2_factor,
            subspace: spec.materialized,
        });
    }
    let count = nodes.len();
    let mut below = vec![vec![false; count]; count];
    for i in 0..count {
        for j in 0..count {
            below[i][j] = i != j && nodes[i].subspace.is_subspace_of(&nodes[j].subspace)?;
        }
    }
    let hasse = (0..count)
        .flat_map(|i| (0..count).map(move |j| (i, j)))
        .filter(|&(i, j)| below[i][j] && !(0..count).any(|m| below[i][m] && below[m][j]))
        .map(|(i, j)| [i, j])
        .collect();
    let gens = Perm::standard_generators(n);
    let mut generator_invariant = true;
    for node in &nodes {
        generator_invariant &= is_invariant(&node.subspace, &gens, &indexer)?;
    }
    Ok(LatticeReport {
        k,
        n,
        nodes,
        hasse,
        generator_invariant,
    })
}

/// The all-ones vector of length C(n, k).
pub fn constant_one(k: usize, n: usize) -> Result<GF2Vec> {
    Ok(GF2Vec::ones(KSubsetIndexer::new(n, k)?.count()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha_matrix(2, 2, 4).unwrap().mat, GF2Mat::identity(6));
        let a = alpha_matrix(0, 2, 4).unwrap().mat;
        assert_eq!((a.rows(), a.cols()), (6, 1));
        assert_eq!(a.column(0), GF2Vec::ones(6));
        assert_eq!(alpha_matrix(1, 3, 5).unwrap().mat.rank(), 5);
        assert_eq!(alpha_matrix(1, 2, 5).unwrap().mat.rank(), 4);
        assert!(alpha_matrix(3, 2, 5).is_err());
        assert!(alpha_matrix(1, 6, 5).is_err());
    }

    #[test]
    fn alpha_entries_are_inclusions() {
        let (j, k, n) = (2, 3, 5);
        let a = alpha_matrix(j, k, n).unwrap().mat;
        let rows = KSubsetIndexer::new(n, k).unwrap();
        let cols = KSubsetIndexer::new(n, j).unwrap();
        for (r, w) in rows.subsets().enumerate() {
            for (c, v) in cols.subsets().enumerate() {
                assert_eq!(a.get(r, c), v.iter().all(|x| w.contains(x)));
            }
        }
    }

    #[test]
    fn solve_against_alpha_0_2() {
        let a = alpha_matrix(0, 2, 4).unwrap().mat;
        let x = a.solve(&GF2Vec::ones(6)).unwrap().unwrap();
        assert_eq!(x, GF2Vec::ones(1));
    }

    #[test]
    fn kernel_of_alpha_2_3_is_cut_space() {
        assert_eq!(alpha_matrix(2, 3, 5).unwrap().mat.kernel_basis().dim(), 4);
    }

    #[test]
    fn beta_examples() {
        assert_eq!(beta_matrix(2, 2, 4).unwrap(), GF2Mat::identity(6));
        let b = beta_matrix(2, 1, 4).unwrap();
        assert_eq!((b.rows(), b.cols()), (4, 6));
        for c in 0..6 {
            assert_eq!(b.column(c).count_ones(), 2);
        }
        assert_eq!(beta_matrix(3, 1, 5).unwrap(), alpha_matrix(1, 3, 5).unwrap().mat.transpose());
    }

    #[test]
    fn specht_kernel_dims() {
        assert_eq!(specht_kernel(1, 4).unwrap().dim(), 3);
        assert_eq!(specht_kernel(0, 4).unwrap().dim(), 1);
        // C(5,2) - C(5,1): the kernel-intersection Specht module has the
        // hook-free dimension in every characteristic
        assert_eq!(specht_kernel(2, 5).unwrap().dim(), 5);
    }

    #[test]
    fn standard_submodule_examples() {
        assert_eq!(standard_submodule(IndexSet::from_indices(&[2]), 2, 5).unwrap().materialized.dim(), 10);
        assert_eq!(standard_submodule(IndexSet::from_indices(&[0, 1]), 2, 5).unwrap().materialized.dim(), 5);
        assert_eq!(standard_submodule(IndexSet(0), 2, 5).unwrap().materialized.dim(), 0);
        assert!(standard_submodule(IndexSet::from_indices(&[3]), 2, 5).is_err());
    }

    #[test]
    fn m_indices_examples() {
        assert_eq!(m_indices(2).unwrap().indices(), vec![0, 1]);
        assert_eq!(m_indices(3).unwrap().indices(), vec![0, 1]);
        assert_eq!(m_indices(4).unwrap().indices(), vec![0, 1, 3]);
        assert_eq!(m_submodule(3, 5).unwrap().materialized.dim(), 5);
        assert!(m_indices(1).is_err());
    }

    #[test]
    fn s2_factor_examples() {
        for k in 2..=5 {
            let n = k + 2;
            assert!(has_s2_factor(&standard_submodule(IndexSet::from_indices(&[2]), k, n).unwrap()).unwrap());
            assert!(has_s2_factor(&standard_submodule(IndexSet::from_indices(&[k]), k, n).unwrap()).unwrap());
            assert!(!has_s2_factor(&m_submodule(k, n).unwrap()).unwrap());
        }
    }

    #[test]
    fn composition_identity_examples() {
        assert_eq!(composition_identity_check(1, 2, 3, 5).unwrap(), (true, false));
        assert_eq!(composition_identity_check(2, 3, 5, 6).unwrap(), (true, true));
        assert_eq!(composition_identity_check(1, 3, 3, 5).unwrap(), (true, true));
        assert!(composition_identity_check(2, 1, 3, 5).is_err());
    }

    #[test]
    fn lattice_small_cases() {
        let r = lattice_report(1, 5, DEFAULT_SIZE_BOUND).unwrap();
        let dims: Vec<usize> = r.nodes.iter().map(|n| n.dim).collect();
        assert_eq!(dims, vec![0, 1, 5]);
        assert_eq!(r.nodes[1].js.indices(), vec![0]);

        let r = lattice_report(0, 3, DEFAULT_SIZE_BOUND).unwrap();
        assert_eq!(r.nodes.len(), 2);

        let r = lattice_report(2, 6, DEFAULT_SIZE_BOUND).unwrap();
        let dims: Vec<usize> = r.nodes.iter().map(|n| n.dim).collect();
        assert_eq!(dims, vec![0, 1, 5, 6, 15]);
        // constants and im alpha(1,2) are incomparable; their sum is (S^2)^0
        assert_eq!(r.hasse, vec![[0, 1], [0, 2], [1, 3], [2, 3], [3, 4]]);
        assert!(r.generator_invariant);
    }

    #[test]
    fn lattice_size_bound() {
        assert!(matches!(lattice_report(3, 12, 100), Err(Error::SizeBound { .. })));
    }

    #[test]
    fn index_set_parsing() {
        assert_eq!(IndexSet::parse("0,1,3").unwrap().indices(), vec![0, 1, 3]);
        assert_eq!(IndexSet::parse("").unwrap(), IndexSet(0));
        assert!(IndexSet::parse("a").is_err());
    }
}
