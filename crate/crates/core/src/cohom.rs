//! Low-degree cohomology of Sym(n) with coefficients in finite GF(2)
//! modules, by exact linear algebra.
//!
//! Two independent solvers answer the same questions:
//!
//! * **propagation**: a 1-cochain is parametrized by its values on the
//!   generators; values elsewhere follow the BFS Cayley tree and every
//!   non-tree edge contributes consistency equations. There are only
//!   `#generators · dim` unknowns.
//! * **dense**: one unknown block per group element and one equation block
//!   per ordered pair of elements.
//!
//! Modules are left modules and the coboundary convention is the one the
//! product on Γ_k forces: `c(h, g) = u(hg) + u(h) + ʰu(g)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma::GammaGroup;
use crate::gf2::{Echelon, GF2Mat, GF2Vec, LinearSystem, Subspace};
use crate::kcomb::{KSubsetIndexer, Perm, SymmetricGroup};
use crate::specht::{permutation_matrix, SubmoduleSpec};

/// Where a module's vectors come from, and how cocycle values in the
/// source space are carried into it.
#[derive(Clone, Debug)]
pub enum ModuleOrigin {
    /// Cochain values are already module vectors.
    Abstract,
    /// GF(2)^([n]^k) with the coordinate permutation action.
    Ambient { k: usize, n: usize },
    /// GF(2)^([n]^k) / kernel, coordinates read off `complement`.
    Quotient {
        k: usize,
        n: usize,
        kernel: Subspace,
        projection: GF2Mat,
        complement: Vec<usize>,
    },
}

/// A finite left GF(2)[Sym(n)]-module given by generator matrices.
#[derive(Clone, Debug)]
pub struct GModule {
    dim: usize,
    group: SymmetricGroup,
    action: Vec<GF2Mat>,
    element_action: Vec<GF2Mat>,
    origin: ModuleOrigin,
}

impl GModule {
    /// Validates the generator matrices by extending them along the Cayley
    /// tree and checking every non-tree edge.
    pub fn new(generators: Vec<Perm>, action: Vec<GF2Mat>, origin: ModuleOrigin) -> Result<Self> {
        let n = generators.first().map(Perm::degree).unwrap_or(0);
        if generators.len() != action.len() {
            return Err(Error::InconsistentAction(format!(
                "{} generators but {} action matrices",
                generators.len(),
                action.len()
            )));
        }
        let dim = action.first().map(GF2Mat::rows).unwrap_or(0);
        for (i, m) in action.iter().enumerate() {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::InconsistentAction(format!(
                    "action matrix {i} is {}x{}, expected {dim}x{dim}",
                    m.rows(),
                    m.cols()
                )));
            }
            if m.rank() != dim {
                return Err(Error::InconsistentAction(format!("action matrix {i} is singular")));
            }
        }
        let group = SymmetricGroup::with_generators(n, generators)?;
        let mut element_action: Vec<Option<GF2Mat>> = vec![None; group.order()];
        element_action[0] = Some(GF2Mat::identity(dim));
        for i in 1..group.order() {
            let (parent, s) = group.tree_edge(i).expect("non-identity has a tree edge");
            let rho = action[s].mul(element_action[parent].as_ref().expect("BFS order"))?;
            element_action[i] = Some(rho);
        }
        let element_action: Vec<GF2Mat> = element_action.into_iter().map(Option::unwrap).collect();
        for g in 0..group.order() {
            for (s, rho_s) in action.iter().enumerate() {
                let target = group.mul_index(group.index_of(&group.generators()[s]), g);
                if rho_s.mul(&element_action[g])? != element_action[target] {
                    return Err(Error::InconsistentAction(format!(
                        "generator {} times {} disagrees with {}",
                        group.generators()[s],
                        group.element(g),
                        group.element(target)
                    )));
                }
            }
        }
        Ok(GModule {
            dim,
            group,
            action,
            element_action,
            origin,
        })
    }

    /// `dim`-dimensional module with trivial action.
    pub fn trivial(n: usize, dim: usize) -> Result<Self> {
        let gens = Perm::standard_generators(n);
        let action = vec![GF2Mat::identity(dim); gens.len()];
        Self::new(gens, action, ModuleOrigin::Abstract)
    }

    /// GF(2)^([n]^k) with `(g·v)(w) = v(g⁻¹w)`.
    pub fn ambient(k: usize, n: usize) -> Result<Self> {
        let indexer = KSubsetIndexer::new(n, k)?;
        let gens = Perm::standard_generators(n);
        let action = gens.iter().map(|g| permutation_matrix(g, &indexer)).collect();
        Self::new(gens, action, ModuleOrigin::Ambient { k, n })
    }

    /// GF(2)^([n]^k) / kernel. The kernel must be Sym(n)-invariant.
    pub fn quotient(k: usize, n: usize, kernel: &Subspace) -> Result<Self> {
        let indexer = KSubsetIndexer::new(n, k)?;
        if kernel.ambient_dim() != indexer.count() {
            return Err(Error::Dimension(format!(
                "kernel lives in dimension {}, C({n}, {k}) = {}",
                kernel.ambient_dim(),
                indexer.count()
            )));
        }
        let (projection, qdim) = kernel.quotient_map();
        let complement = kernel.complement_coordinates();
        let gens = Perm::standard_generators(n);
        let mut action = Vec::with_capacity(gens.len());
        for g in &gens {
            let p = permutation_matrix(g, &indexer);
            for v in kernel.basis() {
                if !kernel.contains(&p.mul_vec(v)?)? {
                    return Err(Error::InconsistentAction(format!(
                        "kernel is not invariant under {g}"
                    )));
                }
            }
            // rho(g) = Q · P_g · section
            let mut rho = GF2Mat::zeros(qdim, qdim);
            for (col, &c) in complement.iter().enumerate() {
                let image = projection.mul_vec(&p.column(c))?;
                for row in image.iter_ones() {
                    rho.set(row, col, true);
                }
            }
            action.push(rho);
        }
        Self::new(
            gens,
            action,
            ModuleOrigin::Quotient {
                k,
                n,
                kernel: kernel.clone(),
                projection,
                complement,
            },
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn group(&self) -> &SymmetricGroup {
        &self.group
    }

    pub fn generators(&self) -> &[Perm] {
        self.group.generators()
    }

    pub fn generator_action(&self) -> &[GF2Mat] {
        &self.action
    }

    /// Matrix of the group element with index `g`.
    pub fn element_action(&self, g: usize) -> &GF2Mat {
        &self.element_action[g]
    }

    pub fn origin(&self) -> &ModuleOrigin {
        &self.origin
    }

    /// Carries a source-space vector into the module.
    pub fn project(&self, v: &GF2Vec) -> Result<GF2Vec> {
        match &self.origin {
            ModuleOrigin::Quotient { projection, .. } => projection.mul_vec(v),
            _ if v.len() == self.dim => Ok(v.clone()),
            _ => Err(Error::Dimension(format!(
                "vector of length {} for module of dimension {}",
                v.len(),
                self.dim
            ))),
        }
    }

    /// A source-space representative of a module vector.
    pub fn lift(&self, v: &GF2Vec) -> GF2Vec {
        match &self.origin {
            ModuleOrigin::Quotient {
                kernel, complement, ..
            } => {
                let mut out = GF2Vec::zeros(kernel.ambient_dim());
                for i in v.iter_ones() {
                    out.set(complement[i], true);
                }
                out
            }
            _ => v.clone(),
        }
    }

    /// Vectors fixed by every generator.
    pub fn fixed_points(&self) -> Subspace {
        let mut stacked = GF2Mat::zeros(0, self.dim);
        for rho in &self.action {
            let shifted = rho.add(&GF2Mat::identity(self.dim)).expect("square");
            stacked = stacked.vstack(&shifted).expect("same width");
        }
        stacked.kernel_basis()
    }
}

/// A normalized 2-cochain on Sym(n), indexed by group element indices.
pub trait TwoCochain {
    /// Value at `(h, g)` in the module's source space.
    fn value(&self, group: &SymmetricGroup, h: usize, g: usize) -> Result<GF2Vec>;
}

/// The cocycle of the product on Γ_k(n), computed on demand.
impl TwoCochain for GammaGroup {
    fn value(&self, group: &SymmetricGroup, h: usize, g: usize) -> Result<GF2Vec> {
        self.cocycle(group.element(h), group.element(g))
    }
}

/// Explicit table of values over all ordered pairs, row-major by `h`.
#[derive(Clone, Debug)]
pub struct CocycleTable {
    order: usize,
    values: Vec<GF2Vec>,
}

impl CocycleTable {
    pub fn from_fn(group: &SymmetricGroup, mut f: impl FnMut(usize, usize) -> Result<GF2Vec>) -> Result<Self> {
        let order = group.order();
        let mut values = Vec::with_capacity(order * order);
        for h in 0..order {
            for g in 0..order {
                values.push(f(h, g)?);
            }
        }
        Ok(CocycleTable { order, values })
    }

    pub fn zero(group: &SymmetricGroup, len: usize) -> Self {
        let order = group.order();
        CocycleTable {
            order,
            values: vec![GF2Vec::zeros(len); order * order],
        }
    }

    pub fn of_gamma(gamma: &GammaGroup, group: &SymmetricGroup) -> Result<Self> {
        Self::from_fn(group, |h, g| gamma.value(group, h, g))
    }

    pub fn get(&self, h: usize, g: usize) -> &GF2Vec {
        &self.values[h * self.order + g]
    }

    pub fn set(&mut self, h: usize, g: usize, v: GF2Vec) {
        self.values[h * self.order + g] = v;
    }
}

impl TwoCochain for CocycleTable {
    fn value(&self, group: &SymmetricGroup, h: usize, g: usize) -> Result<GF2Vec> {
        if group.order() != self.order {
            return Err(Error::Dimension(format!(
                "table for a group of order {} used with order {}",
                self.order,
                group.order()
            )));
        }
        Ok(self.get(h, g).clone())
    }
}

/// Outcome of a 2-coboundary test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoboundaryCertificate {
    /// `c = δu`; `section[g]` is `u` at group element `g` (module coordinates).
    Coboundary {
        generators: Vec<Perm>,
        witness_on_generators: Vec<GF2Vec>,
        section: Vec<GF2Vec>,
    },
    /// The linear system for `u` is inconsistent.
    Obstructed {
        rank_gap: usize,
        coefficient_rank: usize,
        augmented_rank: usize,
        unknowns: usize,
    },
}

impl CoboundaryCertificate {
    pub fn is_coboundary(&self) -> bool {
        matches!(self, CoboundaryCertificate::Coboundary { .. })
    }

    pub fn rank_gap(&self) -> Option<usize> {
        match self {
            CoboundaryCertificate::Obstructed { rank_gap, .. } => Some(*rank_gap),
            CoboundaryCertificate::Coboundary { .. } => None,
        }
    }

    pub fn section(&self) -> Option<&[GF2Vec]> {
        match self {
            CoboundaryCertificate::Coboundary { section, .. } => Some(section),
            CoboundaryCertificate::Obstructed { .. } => None,
        }
    }

    fn obstructed(system: &LinearSystem) -> Self {
        CoboundaryCertificate::Obstructed {
            rank_gap: system.rank_gap(),
            coefficient_rank: system.coefficient_rank(),
            augmented_rank: system.augmented_rank(),
            unknowns: system.unknowns(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    Propagation,
    Dense,
}

fn projected(c: &dyn TwoCochain, m: &GModule, h: usize, g: usize) -> Result<GF2Vec> {
    m.project(&c.value(m.group(), h, g)?)
}

fn check_normalized(c: &dyn TwoCochain, m: &GModule) -> Result<()> {
    for g in 0..m.group().order() {
        if !c.value(m.group(), 0, g)?.is_zero() || !c.value(m.group(), g, 0)?.is_zero() {
            return Err(Error::Unnormalized(format!(
                "nonzero value at identity paired with {}",
                m.group().element(g)
            )));
        }
    }
    Ok(())
}

/// `δu(h, g) = u(hg) + u(h) + ʰu(g)` for all pairs; returns the first
/// violating pair.
pub fn find_coboundary_violation(
    c: &dyn TwoCochain,
    m: &GModule,
    section: &[GF2Vec],
) -> Result<Option<(Perm, Perm)>> {
    let group = m.group();
    if section.len() != group.order() {
        return Err(Error::Dimension("section table has the wrong length".into()));
    }
    for h in 0..group.order() {
        for g in 0..group.order() {
            let hg = group.mul_index(h, g);
            let mut rhs = m.element_action(h).mul_vec(&section[g])?;
            rhs.add_assign(&section[hg]);
            rhs.add_assign(&section[h]);
            if rhs != projected(c, m, h, g)? {
                return Ok(Some((group.element(h).clone(), group.element(g).clone())));
            }
        }
    }
    Ok(None)
}

/// Affine function of the generator unknowns: `dim` rows, each with the
/// unknown coefficients followed by a constant bit.
type Affine = Vec<GF2Vec>;

/// Propagates u along the BFS tree and feeds non-tree edges to `system`.
/// `cochain` is `None` for the homogeneous (1-cocycle) problem.
fn propagate(m: &GModule, cochain: Option<&dyn TwoCochain>) -> Result<(LinearSystem, Vec<Affine>)> {
    let group = m.group();
    let d = m.dim();
    let gens = group.generators().len();
    let unknowns = gens * d;
    let mut system = LinearSystem::new(unknowns);
    let mut u: Vec<Option<Affine>> = vec![None; group.order()];
    u[0] = Some(vec![GF2Vec::zeros(unknowns + 1); d]);
    let gen_index: Vec<usize> = group.generators().iter().map(|s| group.index_of(s)).collect();
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(g) = queue.pop_front() {
        for (s, &si) in gen_index.iter().enumerate() {
            let target = group.mul_index(si, g);
            let rho = &m.generator_action()[s];
            let ug = u[g].as_ref().expect("queued elements are assigned");
            let constant = match cochain {
                Some(c) => projected(c, m, si, g)?,
                None => GF2Vec::zeros(d),
            };
            // u(s g) = u(s) + s·u(g) + c(s, g)
            let candidate: Affine = (0..d)
                .map(|i| {
                    let mut row = GF2Vec::unit(unknowns + 1, s * d + i);
                    for j in rho.row(i).iter_ones() {
                        row.add_assign(&ug[j]);
                    }
                    if constant.get(i) {
                        row.flip(unknowns);
                    }
                    row
                })
                .collect();
            match &u[target] {
                None => {
                    u[target] = Some(candidate);
                    queue.push_back(target);
                }
                Some(existing) => {
                    for (a, b) in candidate.iter().zip(existing) {
                        system.add_augmented(a.add(b));
                    }
                }
            }
        }
    }
    Ok((system, u.into_iter().map(Option::unwrap).collect()))
}

fn evaluate(affine: &Affine, z: &GF2Vec) -> GF2Vec {
    let unknowns = z.len();
    GF2Vec::from_bits(
        affine
            .iter()
            .map(|row| row.iter_ones().fold(false, |acc, i| acc ^ (i == unknowns || z.get(i)))),
    )
}

/// Decides whether `c`, carried into `m`, is a 2-coboundary, using the
/// generator-propagation solver. A returned witness has been re-verified
/// on every ordered pair.
pub fn is_2coboundary(c: &dyn TwoCochain, m: &GModule) -> Result<CoboundaryCertificate> {
    check_normalized(c, m)?;
    let (system, affine) = propagate(m, Some(c))?;
    let Some(z) = system.solution() else {
        return Ok(CoboundaryCertificate::obstructed(&system));
    };
    let section: Vec<GF2Vec> = affine.iter().map(|a| evaluate(a, &z)).collect();
    finish_coboundary(c, m, section)
}

fn finish_coboundary(c: &dyn TwoCochain, m: &GModule, section: Vec<GF2Vec>) -> Result<CoboundaryCertificate> {
    if let Some((h, g)) = find_coboundary_violation(c, m, &section)? {
        return Err(Error::Expectation(format!(
            "solver witness fails the coboundary equation at ({h}, {g})"
        )));
    }
    let group = m.group();
    Ok(CoboundaryCertificate::Coboundary {
        generators: group.generators().to_vec(),
        witness_on_generators: group
            .generators()
            .iter()
            .map(|s| section[group.index_of(s)].clone())
            .collect(),
        section,
    })
}

/// Solves `c(h, g) = u(hg) + u(h) + ʰu(g)` for all ordered pairs at once,
/// with one unknown block per group element.
pub fn is_2coboundary_dense(c: &dyn TwoCochain, m: &GModule) -> Result<CoboundaryCertificate> {
    check_normalized(c, m)?;
    let system = dense_system(m, Some(c))?;
    let Some(x) = system.solution() else {
        return Ok(CoboundaryCertificate::obstructed(&system));
    };
    let d = m.dim();
    let section = (0..m.group().order()).map(|g| x.slice(g * d, d)).collect();
    finish_coboundary(c, m, section)
}

fn dense_system(m: &GModule, cochain: Option<&dyn TwoCochain>) -> Result<LinearSystem> {
    let group = m.group();
    let d = m.dim();
    let unknowns = group.order() * d;
    let mut ech = Echelon::new(unknowns + 1);
    let mut row = GF2Vec::zeros(unknowns + 1);
    for h in 0..group.order() {
        let rho = m.element_action(h);
        let rho_rows: Vec<GF2Vec> = (0..d).map(|i| rho.row(i)).collect();
        for g in 0..group.order() {
            let hg = group.mul_index(h, g);
            let constant = match cochain {
                Some(c) => projected(c, m, h, g)?,
                None => GF2Vec::zeros(d),
            };
            for (i, rho_row) in rho_rows.iter().enumerate() {
                row.flip(hg * d + i);
                row.flip(h * d + i);
                for j in rho_row.iter_ones() {
                    row.flip(g * d + j);
                }
                if constant.get(i) {
                    row.flip(unknowns);
                }
                ech.insert_reducing(&mut row);
            }
        }
    }
    Ok(LinearSystem::from_echelon(unknowns, ech))
}

/// Dimensions of 1-cocycles, 1-coboundaries and their quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct H1Report {
    pub z1: usize,
    pub b1: usize,
    pub h1: usize,
}

/// dim H¹(Sym(n), m) via generator propagation.
pub fn h1_dim(m: &GModule) -> Result<H1Report> {
    let (system, _) = propagate(m, None)?;
    let z1 = system.nullity();
    let b1 = m.dim() - m.fixed_points().dim();
    h1_report(z1, b1)
}

/// dim H¹ from the all-pairs system, with fixed points taken over every
/// group element.
pub fn h1_dim_dense(m: &GModule) -> Result<H1Report> {
    let system = dense_system(m, None)?;
    let z1 = system.nullity();
    let d = m.dim();
    let mut stacked = GF2Mat::zeros(0, d);
    for g in 0..m.group().order() {
        stacked = stacked.vstack(&m.element_action(g).add(&GF2Mat::identity(d))?)?;
    }
    let b1 = d - stacked.kernel_basis().dim();
    h1_report(z1, b1)
}

fn h1_report(z1: usize, b1: usize) -> Result<H1Report> {
    if b1 > z1 {
        return Err(Error::Expectation(format!("coboundaries (dim {b1}) exceed cocycles (dim {z1})")));
    }
    Ok(H1Report { z1, b1, h1: z1 - b1 })
}

/// Whether a full subgroup of Γ_k(n) meets the kernel exactly in `kernel`:
/// the cocycle of Γ_k(n) must become a coboundary in GF(2)^([n]^k)/kernel.
pub fn full_subgroup_exists(kernel: &SubmoduleSpec) -> Result<(bool, CoboundaryCertificate)> {
    full_subgroup_exists_with(kernel, Solver::Propagation)
}

pub fn full_subgroup_exists_with(
    kernel: &SubmoduleSpec,
    solver: Solver,
) -> Result<(bool, CoboundaryCertificate)> {
    let gamma = GammaGroup::new(kernel.k, kernel.n)?;
    let module = GModule::quotient(kernel.k, kernel.n, &kernel.materialized)?;
    let cert = match solver {
        Solver::Propagation => is_2coboundary(&gamma, &module)?,
        Solver::Dense => is_2coboundary_dense(&gamma, &module)?,
    };
    Ok((cert.is_coboundary(), cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specht::{standard_submodule, IndexSet};

    #[test]
    fn zero_module_has_trivial_h1() {
        let m = GModule::trivial(4, 0).unwrap();
        assert_eq!(h1_dim(&m).unwrap().h1, 0);
    }

    #[test]
    fn trivial_module_h1_is_sign() {
        let m = GModule::trivial(4, 1).unwrap();
        let r = h1_dim(&m).unwrap();
        assert_eq!(r, H1Report { z1: 1, b1: 0, h1: 1 });
        assert_eq!(h1_dim_dense(&m).unwrap(), r);
    }

    #[test]
    fn inconsistent_action_rejected() {
        // (1 2) acting as the identity but (1 2 3) acting by a 3-cycle on
        // GF(2)^1 is impossible; use a 2-dim swap for the transposition and
        // identity for the cycle, which breaks (1 2)(1 2 3) relations
        let gens = Perm::standard_generators(3);
        let mut swap = GF2Mat::zeros(2, 2);
        swap.set(0, 1, true);
        swap.set(1, 0, true);
        let mut shear = GF2Mat::identity(2);
        shear.set(0, 1, true);
        let err = GModule::new(gens, vec![swap, shear], ModuleOrigin::Abstract);
        assert!(matches!(err, Err(Error::InconsistentAction(_))));
    }

    #[test]
    fn zero_cochain_is_coboundary() {
        let m = GModule::ambient(2, 4).unwrap();
        let c = CocycleTable::zero(m.group(), 6);
        let cert = is_2coboundary(&c, &m).unwrap();
        assert!(cert.section().unwrap().iter().all(GF2Vec::is_zero));
    }

    #[test]
    fn unnormalized_rejected() {
        let m = GModule::trivial(3, 1).unwrap();
        let mut c = CocycleTable::zero(m.group(), 1);
        c.set(0, 1, GF2Vec::ones(1));
        assert!(matches!(is_2coboundary(&c, &m), Err(Error::Unnormalized(_))));
    }

    #[test]
    fn gamma_2_3_does_not_split() {
        let gamma = GammaGroup::new(2, 3).unwrap();
        let m = GModule::ambient(2, 3).unwrap();
        let cert = is_2coboundary(&gamma, &m).unwrap();
        assert_eq!(cert.rank_gap(), Some(1));
        assert!(!is_2coboundary_dense(&gamma, &m).unwrap().is_coboundary());
    }

    #[test]
    fn quotient_by_image_of_alpha2_kills_cocycle() {
        let k = standard_submodule(IndexSet::from_indices(&[2]), 3, 5).unwrap();
        let (sat, cert) = full_subgroup_exists(&k).unwrap();
        assert!(sat);
        assert!(cert.section().unwrap().iter().all(GF2Vec::is_zero));
    }

    #[test]
    fn quotient_requires_invariant_kernel() {
        let v = GF2Vec::unit(6, 0);
        let s = Subspace::span(6, [v]).unwrap();
        assert!(matches!(GModule::quotient(2, 4, &s), Err(Error::InconsistentAction(_))));
    }
}
