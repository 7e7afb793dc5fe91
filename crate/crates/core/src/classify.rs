//! Classification of kernels of full subgroups of Γ_k(n).
//!
//! A standard submodule K is the kernel of a full subgroup iff the cocycle
//! of Γ_k(n) becomes a coboundary modulo K. The expected answer is that
//! this happens exactly when K ⊇ im alpha(2, k), with im alpha(2, k) the
//! unique minimal such kernel, and for k = 2 only K = GF(2)^([n]^2) itself.
//! At finite n these are observations: the report checks them and marks
//! each PASS or FAIL.

use serde::Serialize;

use crate::cohom::{full_subgroup_exists, h1_dim, CoboundaryCertificate, GModule};
use crate::error::{Error, Result};
use crate::gamma::{GammaElement, GammaGroup};
use crate::gf2::{GF2Vec, Subspace};
use crate::kcomb::{binom_parity, Perm, SymmetricGroup};
use crate::specht::{
    alpha_matrix, lattice_report, m_submodule, standard_submodule, IndexSet,
    SubmoduleSpec,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EllCheck {
    pub j: usize,
    /// C(k-2, j-2) is odd.
    #[serde(rename = "oddInK")]
    pub odd_in_k: bool,
    /// C(l-j, k-j) is odd.
    #[serde(rename = "oddInEll")]
    pub odd_in_ell: bool,
}

/// An `l > k` with two parity properties: every j ≤ k with C(k-2, j-2)
/// even has C(l-j, k-j) even, and C(l-2, k-2) is odd.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EllCertificate {
    pub k: usize,
    pub ell: usize,
    #[serde(rename = "checksI")]
    pub checks_i: Vec<EllCheck>,
    /// C(l-2, k-2) is odd.
    #[serde(rename = "checkII")]
    pub check_ii: bool,
    pub certified: bool,
}

impl EllCertificate {
    /// Recomputes every parity from scratch.
    pub fn verify(&self) -> bool {
        let (k, l) = (self.k, self.ell);
        if l <= k || self.checks_i.len() != k + 1 {
            return false;
        }
        let each = self.checks_i.iter().enumerate().all(|(j, c)| {
            let odd_k = binom_parity((k - 2) as u64, j as i64 - 2);
            let odd_l = binom_parity((l - j) as u64, (k - j) as i64);
            c.j == j && c.odd_in_k == odd_k && c.odd_in_ell == odd_l && (odd_k || !odd_l)
        });
        each && binom_parity((l - 2) as u64, (k - 2) as i64) && self.check_ii
    }
}

/// Builds `l = k + e` where, for `a = k - 2` with binary digits
/// `a_r..a_0`, `e` is `1` followed by the complemented digits of `a`.
pub fn find_ell(k: usize) -> Result<EllCertificate> {
    if k < 3 {
        return Err(Error::Precondition(format!("find_ell needs k >= 3, got {k}")));
    }
    let a = (k - 2) as u64;
    let width = 64 - a.leading_zeros();
    let low = (1u64 << width) - 1;
    let e = (1u64 << width) | (!a & low);
    let ell = k + e as usize;
    let checks_i: Vec<EllCheck> = (0..=k)
        .map(|j| EllCheck {
            j,
            odd_in_k: binom_parity(a, j as i64 - 2),
            odd_in_ell: binom_parity((ell - j) as u64, (k - j) as i64),
        })
        .collect();
    let check_ii = binom_parity((ell - 2) as u64, (k - 2) as i64);
    let mut cert = EllCertificate {
        k,
        ell,
        checks_i,
        check_ii,
        certified: false,
    };
    cert.certified = cert.verify();
    Ok(cert)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelCheck {
    pub k: usize,
    pub ell: usize,
    pub n: usize,
    pub equal: bool,
    #[serde(rename = "kernelDim")]
    pub kernel_dim: usize,
    #[serde(rename = "mDim")]
    pub m_dim: usize,
}

/// Compares ker alpha(k, l) with M at ground-set size n.
pub fn kernel_check(k: usize, ell: usize, n: usize) -> Result<KernelCheck> {
    let kernel = alpha_matrix(k, ell, n)?.mat.kernel_basis();
    let m = m_submodule(k, n)?;
    Ok(KernelCheck {
        k,
        ell,
        n,
        equal: kernel == m.materialized,
        kernel_dim: kernel.dim(),
        m_dim: m.materialized.dim(),
    })
}

/// Whether Γ_k(n) has a complement to its kernel (it should not).
pub fn split_check(k: usize, n: usize) -> Result<(bool, CoboundaryCertificate)> {
    full_subgroup_exists(&standard_submodule(IndexSet(0), k, n)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyRow {
    #[serde(rename = "J")]
    pub js: IndexSet,
    pub aliases: Vec<IndexSet>,
    pub dim: usize,
    #[serde(rename = "s2Factor")]
    pub s2_factor: bool,
    #[serde(rename = "containsImAlpha2")]
    pub contains_im_alpha2: bool,
    pub exists: bool,
    #[serde(rename = "rankGap", skip_serializing_if = "Option::is_none")]
    pub rank_gap: Option<usize>,
    /// dim H¹(Sym(n), K₀/K) at this n; a finite analogue only.
    #[serde(rename = "h1FiniteAnalogue")]
    pub h1_finite_analogue: usize,
    #[serde(skip)]
    pub subspace: Subspace,
    #[serde(skip)]
    pub certificate: Option<CoboundaryCertificate>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyReport {
    pub k: usize,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    #[serde(rename = "guaranteedRegime")]
    pub guaranteed_regime: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
    pub rows: Vec<ClassifyRow>,
    /// Row indices of the containment-minimal kernels admitting a full subgroup.
    #[serde(rename = "minimalSat")]
    pub minimal_sat: Vec<usize>,
    pub verdicts: Vec<Verdict>,
    #[serde(rename = "allPass")]
    pub all_pass: bool,
}

impl ClassifyReport {
    pub fn row_for(&self, js: IndexSet) -> Option<&ClassifyRow> {
        self.rows.iter().find(|r| r.aliases.contains(&js))
    }
}

/// Solves every distinct standard submodule of GF(2)^([n]^k) and checks
/// the expected dichotomy.
pub fn classify_report(k: usize, n: usize, size_bound: usize) -> Result<ClassifyReport> {
    if k < 2 {
        return Err(Error::Precondition(format!("classification needs k >= 2, got {k}")));
    }
    let lattice = lattice_report(k, n, size_bound)?;
    let im_alpha2 = alpha_matrix(2, k, n)?.mat.image_basis();
    let full = Subspace::full(im_alpha2.ambient_dim());
    let mut rows = Vec::with_capacity(lattice.nodes.len());
    for node in &lattice.nodes {
        let spec = SubmoduleSpec {
            k,
            n,
            js: node.js,
            materialized: node.subspace.clone(),
        };
        let (exists, cert) = full_subgroup_exists(&spec)?;
        let module = GModule::quotient(k, n, &node.subspace)?;
        rows.push(ClassifyRow {
            js: node.js,
            aliases: node.aliases.clone(),
            dim: node.dim,
            s2_factor: node.s2_factor,
            contains_im_alpha2: im_alpha2.is_subspace_of(&node.subspace)?,
            exists,
            rank_gap: cert.rank_gap(),
            h1_finite_analogue: h1_dim(&module)?.h1,
            subspace: node.subspace.clone(),
            certificate: Some(cert),
        });
    }
    rows.sort_by(|a, b| (a.dim, a.subspace.basis()).cmp(&(b.dim, b.subspace.basis())));

    let sat: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].exists).collect();
    let strictly_below = |i: usize, j: usize| -> bool {
        i != j && rows[i].subspace.is_subspace_of(&rows[j].subspace).unwrap_or(false)
    };
    let minimal_sat: Vec<usize> = sat
        .iter()
        .copied()
        .filter(|&j| !sat.iter().any(|&i| strictly_below(i, j)))
        .collect();

    let mut verdicts = Vec::new();
    let mismatched: Vec<String> = rows
        .iter()
        .filter(|r| r.exists != r.contains_im_alpha2 || r.exists != r.s2_factor)
        .map(|r| format!("{:?}", r.js.indices()))
        .collect();
    verdicts.push(Verdict {
        name: "existence iff K contains im alpha(2,k)".into(),
        pass: mismatched.is_empty(),
        detail: if mismatched.is_empty() {
            format!("{} of {} kernels admit a full subgroup", sat.len(), rows.len())
        } else {
            format!("mismatched kernels: {}", mismatched.join(", "))
        },
    });
    let unique_minimal = minimal_sat.len() == 1 && rows[minimal_sat[0]].subspace == im_alpha2;
    verdicts.push(Verdict {
        name: "unique minimal kernel is im alpha(2,k)".into(),
        pass: unique_minimal,
        detail: format!(
            "minimal kernels: {:?}",
            minimal_sat.iter().map(|&i| rows[i].js.indices()).collect::<Vec<_>>()
        ),
    });
    let non_monotone: Vec<String> = (0..rows.len())
        .flat_map(|i| (0..rows.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| strictly_below(i, j) && rows[i].exists && !rows[j].exists)
        .map(|(i, j)| format!("{:?} < {:?}", rows[i].js.indices(), rows[j].js.indices()))
        .collect();
    verdicts.push(Verdict {
        name: "existence is monotone in K".into(),
        pass: non_monotone.is_empty(),
        detail: non_monotone.join(", "),
    });
    if k == 2 {
        let proper_sat: Vec<String> = sat
            .iter()
            .filter(|&&i| rows[i].subspace != full)
            .map(|&i| format!("{:?}", rows[i].js.indices()))
            .collect();
        verdicts.push(Verdict {
            name: "k = 2: only the whole kernel admits a full subgroup".into(),
            pass: proper_sat.is_empty(),
            detail: proper_sat.join(", "),
        });
    }

    let ell = if k >= 3 { Some(find_ell(k)?.ell) } else { None };
    let guaranteed_regime = ell.is_none_or(|l| n >= l);
    let warning = (!guaranteed_regime).then(|| {
        format!(
            "below guaranteed regime: n = {n} < l = {}, no l-subsets to push the cocycle onto",
            ell.unwrap_or_default()
        )
    });
    let all_pass = verdicts.iter().all(|v| v.pass);
    Ok(ClassifyReport {
        k,
        n,
        ell,
        guaranteed_regime,
        warning,
        rows,
        minimal_sat,
        verdicts,
        all_pass,
    })
}

/// A full subgroup `{(s(g) + κ, g) : g ∈ Sym(n), κ ∈ K}` of Γ_k(n), given
/// by coset representatives `s(g)` in GF(2)^([n]^k).
#[derive(Clone, Debug)]
pub struct FullSubgroup {
    pub kernel: SubmoduleSpec,
    pub group: SymmetricGroup,
    pub representatives: Vec<GammaElement>,
}

impl FullSubgroup {
    /// Lifts a coboundary witness from K₀/K back into Γ_k(n).
    pub fn from_certificate(kernel: &SubmoduleSpec, cert: &CoboundaryCertificate) -> Result<Self> {
        let section = cert
            .section()
            .ok_or_else(|| Error::Precondition("certificate is not a coboundary".into()))?;
        let module = GModule::quotient(kernel.k, kernel.n, &kernel.materialized)?;
        let gamma = GammaGroup::new(kernel.k, kernel.n)?;
        let group = module.group().clone();
        let representatives = group
            .elements()
            .iter()
            .zip(section)
            .map(|(g, u)| gamma.element(module.lift(u), g.clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(FullSubgroup {
            kernel: kernel.clone(),
            group,
            representatives,
        })
    }

    /// Checks closure under products, `H ∩ K₀ = K`, and that every
    /// permutation occurs.
    pub fn verify(&self) -> Result<bool> {
        let (k, n) = (self.kernel.k, self.kernel.n);
        let gamma = GammaGroup::new(k, n)?;
        let kernel = &self.kernel.materialized;
        let order = self.group.order();
        if self.representatives.len() != order {
            return Ok(false);
        }
        for (i, r) in self.representatives.iter().enumerate() {
            if &r.g != self.group.element(i) {
                return Ok(false);
            }
        }
        // H ∩ K₀ = {(s(id) + κ, id)} = K iff s(id) ∈ K
        if !kernel.contains(&self.representatives[0].f)? {
            return Ok(false);
        }
        // K must be normal in H: invariant under every permutation
        for g in Perm::standard_generators(n) {
            for v in kernel.basis() {
                if !kernel.contains(&gamma.twist(&g, v))? {
                    return Ok(false);
                }
            }
        }
        // (s(h), h)(s(g), g) must lie in the coset of hg
        for h in 0..order {
            for g in 0..order {
                let product = gamma.mult(&self.representatives[h], &self.representatives[g])?;
                let hg = self.group.index_of(&product.g);
                let diff: GF2Vec = product.f.add(&self.representatives[hg].f);
                if !kernel.contains(&diff)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ell_examples() {
        let c = find_ell(3).unwrap();
        assert_eq!(c.ell, 5);
        assert!(c.certified && c.check_ii);
        assert!(!c.checks_i[0].odd_in_k && !c.checks_i[0].odd_in_ell);
        assert!(!c.checks_i[1].odd_in_k && !c.checks_i[1].odd_in_ell);
        assert_eq!(find_ell(4).unwrap().ell, 9);
        assert_eq!(find_ell(5).unwrap().ell, 9);
        assert!(find_ell(2).is_err());
    }

    #[test]
    fn ell_certificate_detects_tampering() {
        let mut c = find_ell(4).unwrap();
        c.ell = 8;
        assert!(!c.verify());
    }

    #[test]
    fn kernel_check_examples() {
        // At n = 7 the 5-sets are complements of 2-sets and the kernel is larger.
        let r = kernel_check(3, 5, 7).unwrap();
        assert!(!r.equal);
        assert_eq!((r.kernel_dim, r.m_dim), (15, 7));
        let r = kernel_check(3, 5, 8).unwrap();
        assert!(r.equal);
        assert_eq!((r.kernel_dim, r.m_dim), (8, 8));
        let r = kernel_check(2, 3, 5).unwrap();
        assert!(!r.equal);
        assert_eq!((r.kernel_dim, r.m_dim), (4, 5));
    }

    #[test]
    fn split_check_small() {
        assert!(!split_check(2, 3).unwrap().0);
        assert!(!split_check(2, 4).unwrap().0);
        assert!(!split_check(3, 4).unwrap().0);
    }
}
