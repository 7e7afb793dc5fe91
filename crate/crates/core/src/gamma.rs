//! The explicit cover group Γ_k(n) = GF(2)^([n]^k) ⋊_c Sym(n) acting on
//! C_k = Z4 × [n]^k.
//!
//! Kernel elements are functions `[n]^k -> {0, 2} ⊂ Z4`, stored halved as
//! GF(2) vectors indexed by colex rank. The base ordering used by the
//! inversion count `eps` is the natural order on {1..n}.
//!
//! The action is `(f, g)·(a, w) = (a + f(gw) + eps_k(g, w), gw)`. Composing
//! two such maps gives the product
//!
//! ```text
//! (l, h)(f, g) = (l + ʰf + c(h, g), hg),   (ʰf)(v) = f(h⁻¹v)
//! ```
//!
//! where the correction term is read at the *image* k-set: for `v = hg·w`,
//! `c(h, g)(v) = eps_k(g, w) + eps_k(h, gw) - eps_k(hg, w)`. Evaluating the
//! same expression at `w` instead breaks associativity.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::GF2Vec;
use crate::kcomb::{binom_parity, restriction_sign, KSubsetIndexer, Perm};
use crate::specht::alpha_matrix;

fn subset_mask(w: &[usize]) -> u64 {
    w.iter().fold(0, |m, &x| m | 1u64 << (x - 1))
}

/// Inversion count of `g` on the points of `mask`, mod 4.
#[inline]
fn eps_mask(g: &Perm, mask: u64) -> u8 {
    let mut images = [0usize; 64];
    let mut len = 0;
    let mut m = mask;
    while m != 0 {
        images[len] = g.image(m.trailing_zeros() as usize + 1);
        len += 1;
        m &= m - 1;
    }
    let mut inversions = 0u32;
    for i in 0..len {
        for j in i + 1..len {
            if images[i] > images[j] {
                inversions += 1;
            }
        }
    }
    (inversions % 4) as u8
}

/// 0 if `g` preserves the order of the pair `w`, 1 otherwise.
pub fn eps2(g: &Perm, w: &[usize]) -> Result<u8> {
    if w.len() != 2 {
        return Err(Error::Size(format!("eps2 needs a 2-subset, got {w:?}")));
    }
    Ok(eps_mask(g, subset_mask(w)))
}

/// Sum of `eps2(g, y)` over the 2-subsets `y` of `w`, mod 4.
pub fn eps_k(g: &Perm, w: &[usize]) -> Result<u8> {
    if w.len() < 2 {
        return Err(Error::Size(format!("eps_k needs |w| >= 2, got {w:?}")));
    }
    Ok(eps_mask(g, subset_mask(w)))
}

/// The canonical homomorphism on the stabilizer of `w`: the sign of `g|w`.
pub fn chi_w(g: &Perm, w: &[usize]) -> Result<bool> {
    restriction_sign(g, w)
}

/// The cocycle `c_k(h, g)` on Sym(n), n = degree of `h`.
pub fn cocycle(h: &Perm, g: &Perm, k: usize) -> Result<GF2Vec> {
    GammaGroup::new(k, h.degree())?.cocycle(h, g)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GammaElement {
    pub k: usize,
    pub n: usize,
    pub f: GF2Vec,
    pub g: Perm,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoverPoint {
    pub a: u8,
    pub w: Vec<usize>,
}

impl CoverPoint {
    pub fn new(a: u8, w: Vec<usize>) -> Self {
        CoverPoint { a: a % 4, w }
    }
}

/// Permutations of one fibre {0,1,2,3} × {w}, each as the image table of `a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FibreGroupDescriptor {
    pub elements: Vec<[u8; 4]>,
    pub order: usize,
    /// Every element is `a -> a + t` for some t.
    #[serde(rename = "allTranslations")]
    pub all_translations: bool,
    /// The translation amounts, sorted.
    pub translations: Vec<u8>,
    pub transitive: bool,
    /// Transitive and of order equal to the fibre size.
    pub regular: bool,
    pub cyclic: bool,
}

impl FibreGroupDescriptor {
    fn from_maps(mut elements: Vec<[u8; 4]>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        let translation = |m: &[u8; 4]| (0..4u8).all(|a| m[a as usize] == (a + m[0]) % 4).then_some(m[0]);
        let all_translations = elements.iter().all(|m| translation(m).is_some());
        let mut translations: Vec<u8> = elements.iter().filter_map(translation).collect();
        translations.sort_unstable();
        let orbit_of_zero: std::collections::BTreeSet<u8> = elements.iter().map(|m| m[0]).collect();
        let transitive = orbit_of_zero.len() == 4;
        let order = elements.len();
        let element_order = |m: &[u8; 4]| {
            let mut x = *m;
            let mut k = 1;
            while x != [0, 1, 2, 3] {
                x = [m[x[0] as usize], m[x[1] as usize], m[x[2] as usize], m[x[3] as usize]];
                k += 1;
            }
            k
        };
        let cyclic = elements.iter().any(|m| element_order(m) == order);
        FibreGroupDescriptor {
            order,
            all_translations,
            translations,
            transitive,
            regular: transitive && order == 4,
            cyclic,
            elements,
        }
    }

    /// Subgroup test on the element sets.
    pub fn contains(&self, other: &FibreGroupDescriptor) -> bool {
        other.elements.iter().all(|m| self.elements.contains(m))
    }
}

/// Context for Γ_k(n): k-subset indexing plus group operations.
#[derive(Clone, Debug)]
pub struct GammaGroup {
    k: usize,
    n: usize,
    indexer: KSubsetIndexer,
}

impl GammaGroup {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k < 2 || k > n {
            return Err(Error::Size(format!("need 2 <= k <= n, got k = {k}, n = {n}")));
        }
        Ok(GammaGroup {
            k,
            n,
            indexer: KSubsetIndexer::new(n, k)?,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn indexer(&self) -> &KSubsetIndexer {
        &self.indexer
    }

    /// C(n, k).
    pub fn kernel_dim(&self) -> usize {
        self.indexer.count()
    }

    fn check_perm(&self, g: &Perm) -> Result<()> {
        if g.degree() != self.n {
            return Err(Error::Dimension(format!(
                "permutation of degree {} in Γ_{}({})",
                g.degree(),
                self.k,
                self.n
            )));
        }
        Ok(())
    }

    fn check_element(&self, x: &GammaElement) -> Result<()> {
        if x.k != self.k || x.n != self.n || x.f.len() != self.kernel_dim() {
            return Err(Error::Dimension(format!(
                "element of Γ_{}({}) used in Γ_{}({})",
                x.k, x.n, self.k, self.n
            )));
        }
        self.check_perm(&x.g)
    }

    pub fn element(&self, f: GF2Vec, g: Perm) -> Result<GammaElement> {
        let x = GammaElement {
            k: self.k,
            n: self.n,
            f,
            g,
        };
        self.check_element(&x)?;
        Ok(x)
    }

    pub fn identity(&self) -> GammaElement {
        GammaElement {
            k: self.k,
            n: self.n,
            f: GF2Vec::zeros(self.kernel_dim()),
            g: Perm::identity(self.n),
        }
    }

    /// `(ʰf)(v) = f(h⁻¹v)`.
    pub fn twist(&self, h: &Perm, f: &GF2Vec) -> GF2Vec {
        let mut out = GF2Vec::zeros(f.len());
        for r in f.iter_ones() {
            out.set(self.indexer.rank_mask(h.apply_mask(self.indexer.mask(r))), true);
        }
        out
    }

    /// `c_k(h, g)`, halved. Fails loudly if any Z4 value is odd.
    pub fn cocycle(&self, h: &Perm, g: &Perm) -> Result<GF2Vec> {
        self.check_perm(h)?;
        self.check_perm(g)?;
        let hg = h * g;
        let mut out = GF2Vec::zeros(self.kernel_dim());
        for r in 0..self.kernel_dim() {
            let w = self.indexer.mask(r);
            let gw = g.apply_mask(w);
            let value = (eps_mask(g, w) + eps_mask(h, gw) + 4 - eps_mask(&hg, w)) % 4;
            if value % 2 == 1 {
                return Err(Error::OddCocycleEntry {
                    h: h.to_string(),
                    g: g.to_string(),
                    subset: self.indexer.unrank(r)?,
                });
            }
            if value == 2 {
                out.set(self.indexer.rank_mask(hg.apply_mask(w)), true);
            }
        }
        Ok(out)
    }

    pub fn mult(&self, x: &GammaElement, y: &GammaElement) -> Result<GammaElement> {
        self.check_element(x)?;
        self.check_element(y)?;
        let mut f = self.twist(&x.g, &y.f);
        f.add_assign(&x.f);
        f.add_assign(&self.cocycle(&x.g, &y.g)?);
        Ok(GammaElement {
            k: self.k,
            n: self.n,
            f,
            g: &x.g * &y.g,
        })
    }

    /// `(f, g)⁻¹ = (ᵍ⁻¹f + c(g⁻¹, g), g⁻¹)`.
    pub fn inverse(&self, x: &GammaElement) -> Result<GammaElement> {
        self.check_element(x)?;
        let gi = x.g.inverse();
        let mut f = self.twist(&gi, &x.f);
        f.add_assign(&self.cocycle(&gi, &x.g)?);
        Ok(GammaElement {
            k: self.k,
            n: self.n,
            f,
            g: gi,
        })
    }

    pub fn act(&self, x: &GammaElement, p: &CoverPoint) -> Result<CoverPoint> {
        self.check_element(x)?;
        let r = self.indexer.rank(&p.w)?;
        let w = self.indexer.mask(r);
        let gw = x.g.apply_mask(w);
        let bit = x.f.get(self.indexer.rank_mask(gw));
        let a = (p.a + 2 * u8::from(bit) + eps_mask(&x.g, w)) % 4;
        Ok(CoverPoint {
            a,
            w: x.g.apply(&p.w),
        })
    }

    /// All points of C_k in (rank, a) order.
    pub fn points(&self) -> Vec<CoverPoint> {
        self.indexer
            .subsets()
            .flat_map(|w| (0..4).map(move |a| CoverPoint { a, w: w.clone() }))
            .collect()
    }

    /// Maps `a -> a'` induced on the fibre over `w` by an element stabilizing `w`.
    fn fibre_map(&self, x: &GammaElement, w: &[usize]) -> Result<[u8; 4]> {
        let mut m = [0u8; 4];
        for a in 0..4u8 {
            let image = self.act(x, &CoverPoint::new(a, w.to_vec()))?;
            if image.w != w {
                return Err(Error::NotStabilizing {
                    perm: x.g.to_string(),
                    subset: w.to_vec(),
                });
            }
            m[a as usize] = image.a;
        }
        Ok(m)
    }

    /// Permutations induced on the fibre over `w` by its setwise stabilizer.
    ///
    /// The induced map of `(f, g)` depends on f only through `f(w)`, so f
    /// ranges over `{0, e_w}` while g runs through the whole stabilizer.
    pub fn fibre_group(&self, w: &[usize]) -> Result<FibreGroupDescriptor> {
        let r = self.indexer.rank(w)?;
        let mask = self.indexer.mask(r);
        let mut maps = Vec::new();
        for g in stabilizer(self.n, mask) {
            for bit in [false, true] {
                let mut f = GF2Vec::zeros(self.kernel_dim());
                f.set(r, bit);
                maps.push(self.fibre_map(&self.element(f, g.clone())?, w)?);
            }
        }
        Ok(FibreGroupDescriptor::from_maps(maps))
    }

    /// Permutations induced on the fibre over `w` by the kernel `{(f, id)}`.
    pub fn binding_group(&self, w: &[usize]) -> Result<FibreGroupDescriptor> {
        let r = self.indexer.rank(w)?;
        let maps = [false, true]
            .into_iter()
            .map(|bit| {
                let mut f = GF2Vec::zeros(self.kernel_dim());
                f.set(r, bit);
                self.fibre_map(&self.element(f, Perm::identity(self.n))?, w)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FibreGroupDescriptor::from_maps(maps))
    }
}

/// Every permutation of {1..n} fixing `mask` setwise: Sym(w) × Sym(rest).
pub fn stabilizer(n: usize, mask: u64) -> Vec<Perm> {
    let inside: Vec<usize> = (1..=n).filter(|&x| mask >> (x - 1) & 1 == 1).collect();
    let outside: Vec<usize> = (1..=n).filter(|&x| mask >> (x - 1) & 1 == 0).collect();
    let mut out = Vec::new();
    for p in permutations(&inside) {
        for q in permutations(&outside) {
            let mut images = vec![0; n];
            for (src, dst) in inside.iter().zip(&p).chain(outside.iter().zip(&q)) {
                images[src - 1] = *dst;
            }
            out.push(Perm::from_images(&images).expect("block permutation is a bijection"));
        }
    }
    out
}

/// Generators of the setwise stabilizer of `w`: a transposition and a long
/// cycle on `w` and on its complement (omitting trivial ones).
pub fn stabilizer_generators(n: usize, w: &[usize]) -> Vec<Perm> {
    let rest: Vec<usize> = (1..=n).filter(|x| !w.contains(x)).collect();
    let mut gens = Vec::new();
    for block in [w.to_vec(), rest] {
        if block.len() >= 2 {
            gens.push(Perm::from_cycles(n, &[&block[..2]]).expect("points in range"));
            if block.len() >= 3 {
                gens.push(Perm::from_cycles(n, &[&block[..]]).expect("points in range"));
            }
        }
    }
    gens
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// `γ_{k,l}(f, g) = (alpha(k, l) f, g)`; a homomorphism when C(l-2, k-2) is odd.
pub fn gamma_lift(x: &GammaElement, l: usize) -> Result<GammaElement> {
    let k = x.k;
    if l < k || l > x.n {
        return Err(Error::Size(format!("need k <= l <= n, got k = {k}, l = {l}, n = {}", x.n)));
    }
    if !binom_parity((l - 2) as u64, k as i64 - 2) {
        return Err(Error::Precondition(format!(
            "lifting Γ_{k} to Γ_{l} needs C({}, {}) odd; it is even, so the lift is not a homomorphism",
            l - 2,
            k - 2
        )));
    }
    let alpha = alpha_matrix(k, l, x.n)?;
    Ok(GammaElement {
        k: l,
        n: x.n,
        f: alpha.mat.mul_vec(&x.f)?,
        g: x.g.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, s: &str) -> Perm {
        Perm::parse(n, s).unwrap()
    }

    #[test]
    fn eps2_examples() {
        assert_eq!(eps2(&Perm::identity(3), &[1, 2]).unwrap(), 0);
        assert_eq!(eps2(&p(3, "(1 2)"), &[1, 2]).unwrap(), 1);
        assert_eq!(eps2(&p(3, "(1 2)"), &[1, 3]).unwrap(), 0);
        assert!(eps2(&p(3, "(1 2)"), &[1, 2, 3]).is_err());
    }

    #[test]
    fn eps_k_examples() {
        assert_eq!(eps_k(&Perm::identity(4), &[1, 2, 3]).unwrap(), 0);
        assert_eq!(eps_k(&p(4, "(1 2)"), &[1, 2, 3]).unwrap(), 1);
        assert_eq!(eps_k(&p(4, "(1 3)"), &[1, 2, 3]).unwrap(), 3);
        assert!(eps_k(&p(4, "(1 3)"), &[1]).is_err());
    }

    #[test]
    fn cocycle_examples() {
        let n = 3;
        let g = p(n, "(1 2)");
        assert!(cocycle(&Perm::identity(n), &g, 2).unwrap().is_zero());
        assert!(cocycle(&g, &Perm::identity(n), 2).unwrap().is_zero());
        let c = cocycle(&g, &g.inverse(), 2).unwrap();
        let idx = KSubsetIndexer::new(n, 2).unwrap();
        assert_eq!(c.iter_ones().collect::<Vec<_>>(), vec![idx.rank(&[1, 2]).unwrap()]);
    }

    #[test]
    fn act_examples() {
        let gamma = GammaGroup::new(2, 4).unwrap();
        let x = gamma.element(GF2Vec::zeros(6), p(4, "(1 2)")).unwrap();
        assert_eq!(
            gamma.act(&x, &CoverPoint::new(0, vec![1, 2])).unwrap(),
            CoverPoint::new(1, vec![1, 2])
        );
        let q = CoverPoint::new(3, vec![2, 4]);
        assert_eq!(gamma.act(&gamma.identity(), &q).unwrap(), q);
    }

    #[test]
    fn mismatched_elements_rejected() {
        let g2 = GammaGroup::new(2, 4).unwrap();
        let g3 = GammaGroup::new(3, 4).unwrap();
        assert!(g2.mult(&g2.identity(), &g3.identity()).is_err());
        assert!(GammaGroup::new(1, 4).is_err());
        assert!(GammaGroup::new(5, 4).is_err());
    }

    #[test]
    fn inverse_both_sides() {
        let gamma = GammaGroup::new(2, 4).unwrap();
        let f = GF2Vec::parse("101100").unwrap();
        let x = gamma.element(f, p(4, "(1 3 2)(4)")).unwrap();
        let xi = gamma.inverse(&x).unwrap();
        assert_eq!(gamma.mult(&x, &xi).unwrap(), gamma.identity());
        assert_eq!(gamma.mult(&xi, &x).unwrap(), gamma.identity());
    }

    #[test]
    fn fibre_and_binding_groups() {
        let gamma = GammaGroup::new(2, 4).unwrap();
        let fibre = gamma.fibre_group(&[2, 4]).unwrap();
        assert_eq!(fibre.translations, vec![0, 1, 2, 3]);
        assert!(fibre.regular && fibre.cyclic && fibre.all_translations);
        let binding = gamma.binding_group(&[2, 4]).unwrap();
        assert_eq!(binding.translations, vec![0, 2]);
        assert!(fibre.contains(&binding) && !binding.contains(&fibre));
    }

    #[test]
    fn chi_matches_restriction_sign() {
        assert!(chi_w(&p(4, "(1 2)"), &[1, 2]).unwrap());
        assert!(!chi_w(&p(4, "(1 2 3)"), &[1, 2, 3]).unwrap());
        assert!(chi_w(&p(4, "(1 4)"), &[1, 2]).is_err());
    }

    #[test]
    fn stabilizer_sizes() {
        assert_eq!(stabilizer(5, 0b00111).len(), 12);
        assert_eq!(stabilizer_generators(5, &[1, 2, 3]).len(), 3);
    }

    #[test]
    fn lift_preconditions() {
        let gamma = GammaGroup::new(3, 5).unwrap();
        let x = gamma.identity();
        assert!(matches!(gamma_lift(&x, 4), Err(Error::Precondition(_))));
        let lifted = gamma_lift(&x, 5).unwrap();
        assert_eq!(lifted, GammaGroup::new(5, 5).unwrap().identity());
        let two = GammaGroup::new(2, 5).unwrap();
        assert!(gamma_lift(&two.identity(), 4).is_ok());
    }
}
