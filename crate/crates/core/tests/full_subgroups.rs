use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kcover::classify::FullSubgroup;
use kcover::cohom::{
    full_subgroup_exists, h1_dim, h1_dim_dense, is_2coboundary, CocycleTable, GModule,
};
use kcover::gamma::{gamma_lift, CoverPoint, GammaElement, GammaGroup};
use kcover::kcomb::{Perm, SymmetricGroup};
use kcover::specht::{standard_submodule, IndexSet};
use kcover::{Error, GF2Vec};

fn random_element(gamma: &GammaGroup, rng: &mut ChaCha8Rng) -> GammaElement {
    let mut images: Vec<usize> = (1..=gamma.n()).collect();
    images.shuffle(rng);
    let f = GF2Vec::from_bits((0..gamma.kernel_dim()).map(|_| rng.gen::<bool>()));
    gamma.element(f, Perm::from_images(&images).unwrap()).unwrap()
}

fn build(k: usize, n: usize, js: &[usize]) -> FullSubgroup {
    let spec = standard_submodule(IndexSet::from_indices(js), k, n).unwrap();
    let (sat, cert) = full_subgroup_exists(&spec).unwrap();
    assert!(sat, "expected a full subgroup for J = {js:?} at k = {k}, n = {n}");
    FullSubgroup::from_certificate(&spec, &cert).unwrap()
}

#[test]
fn full_subgroup_at_2_4() {
    // a proper kernel that still admits a full subgroup at this small size
    let h = build(2, 4, &[0, 1]);
    assert_eq!(h.representatives.len(), 24);
    assert!(h.verify().unwrap());
}

#[test]
fn full_subgroup_at_3_5() {
    for js in [&[2][..], &[1, 2]] {
        let h = build(3, 5, js);
        assert_eq!(h.representatives.len(), 120);
        assert!(h.verify().unwrap());
    }
}

#[test]
fn tampered_representatives_are_rejected() {
    let mut h = build(3, 5, &[2]);
    // a vector outside K breaks closure
    let outside = (0..10)
        .map(|i| GF2Vec::unit(10, i))
        .find(|v| !h.kernel.materialized.contains(v).unwrap())
        .unwrap();
    h.representatives[7].f.add_assign(&outside);
    assert!(!h.verify().unwrap());
}

#[test]
fn lift_is_a_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (g2, g3) = (GammaGroup::new(2, 5).unwrap(), GammaGroup::new(3, 5).unwrap());
    assert_eq!(gamma_lift(&g2.identity(), 3).unwrap(), g3.identity());
    for _ in 0..100 {
        let x = random_element(&g2, &mut rng);
        let y = random_element(&g2, &mut rng);
        let lhs = gamma_lift(&g2.mult(&x, &y).unwrap(), 3).unwrap();
        let rhs = g3
            .mult(&gamma_lift(&x, 3).unwrap(), &gamma_lift(&y, 3).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn lift_parity_guard() {
    let g2 = GammaGroup::new(2, 5).unwrap();
    assert!(gamma_lift(&g2.identity(), 4).is_ok());
    let g3 = GammaGroup::new(3, 5).unwrap();
    assert!(matches!(gamma_lift(&g3.identity(), 4), Err(Error::Precondition(_))));
}

#[test]
fn action_composes_with_g_first() {
    let gamma = GammaGroup::new(2, 4).unwrap();
    let zero = GF2Vec::zeros(6);
    let x = gamma.element(zero.clone(), Perm::parse(4, "(1 2)").unwrap()).unwrap();
    let y = gamma.element(zero, Perm::parse(4, "(2 3)").unwrap()).unwrap();
    let p = CoverPoint::new(0, vec![1, 3]);
    let xy = gamma.mult(&x, &y).unwrap();
    assert_eq!(gamma.act(&xy, &p).unwrap(), gamma.act(&x, &gamma.act(&y, &p).unwrap()).unwrap());
    // (1 2)(2 3) sends 3 -> 2 -> 1, so {1,3} lands on {1,2}
    assert_eq!(gamma.act(&xy, &p).unwrap().w, vec![1, 2]);
    let yx = gamma.mult(&y, &x).unwrap();
    assert_ne!(xy.g, yx.g);
    assert_eq!(gamma.act(&yx, &p).unwrap(), gamma.act(&y, &gamma.act(&x, &p).unwrap()).unwrap());
}

#[test]
fn explicit_table_agrees_with_gamma() {
    let gamma = GammaGroup::new(2, 4).unwrap();
    let group = SymmetricGroup::new(4).unwrap();
    let table = CocycleTable::of_gamma(&gamma, &group).unwrap();
    let module = GModule::ambient(2, 4).unwrap();
    let direct = is_2coboundary(&gamma, &module).unwrap();
    let tabled = is_2coboundary(&table, &module).unwrap();
    assert_eq!(direct.is_coboundary(), tabled.is_coboundary());
    assert!(!direct.is_coboundary());
}

#[test]
fn h1_solvers_agree() {
    for (k, n, js) in [(2, 4, vec![]), (2, 5, vec![0]), (3, 5, vec![1]), (3, 5, vec![2])] {
        let spec = standard_submodule(IndexSet::from_indices(&js), k, n).unwrap();
        let m = GModule::quotient(k, n, &spec.materialized).unwrap();
        assert_eq!(h1_dim(&m).unwrap(), h1_dim_dense(&m).unwrap(), "k = {k}, n = {n}, J = {js:?}");
    }
}
