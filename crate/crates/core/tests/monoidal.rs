mod common;

use common::*;
use proptest::prelude::*;
use purcat_core::complexes::{homology, tensor_complex, Complex};
use purcat_core::fpmod::hom_modules;
use purcat_core::monoidal::*;
use purcat_core::purity::probe_battery;
use purcat_core::random::{self, Bounds};
use purcat_core::ChainMap;

fn is_iso(f: &ChainMap) -> bool {
    let lo = f.src().lo().min(f.tgt().lo());
    let hi = f.src().hi().max(f.tgt().hi());
    f.validate().is_ok() && (lo..=hi).all(|n| f.component(n).is_isomorphism())
}

#[test]
fn phom_of_modules_is_hom_in_degree_zero() {
    let r = zm(12);
    let m = Complex::concentrated(&md(&r, &[4, 6]), 0);
    let n = Complex::concentrated(&md(&r, &[6]), 0);
    let p = phom(&m, &n, 2).unwrap();
    assert!(p.verify().unwrap().passed());
    let brute = hom_modules(&md(&r, &[4, 6]), &md(&r, &[6])).unwrap().module;
    assert!(homology(&p.value, 0).is_isomorphic(&brute));
}

#[test]
fn phom_over_z_torsion() {
    let m = Complex::concentrated(&md(&z(), &[4]), 0);
    let n = Complex::concentrated(&md(&z(), &[2]), 0);
    let p = phom(&m, &n, 1).unwrap();
    assert!(p.verify().unwrap().passed());
    assert_eq!(factors(&homology(&p.value, 0)), ints(&[2]));
}

#[test]
fn adjunction_round_trips() {
    let r = zm(4);
    let a = cx(&r, 0, &[&[4], &[2]], &[&[&[2]]]);
    let b = cx(&r, -1, &[&[2], &[4]], &[&[&[2]]]);
    let c = cx(&r, 0, &[&[4], &[4]], &[&[&[2]]]);
    let w = adjunction_iso(&a, &b, &c).unwrap();
    let rep = w.validate();
    assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
}

#[test]
fn adjunction_with_vanishing_tensor_ends() {
    let r = zm(12);
    let a = cx(&r, 0, &[&[3], &[4]], &[&[&[0]]]);
    let b = Complex::concentrated(&md(&r, &[2]), 0);
    let c = Complex::concentrated(&md(&r, &[2]), 1);
    let t = tensor_complex(&a, &b).unwrap();
    assert_eq!((t.complex.lo(), t.complex.hi()), (1, 1));
    assert!(t.summands(0).is_empty());
    let w = adjunction_iso(&a, &b, &c).unwrap();
    assert!(w.validate().passed());
}

#[test]
fn swap_and_associator_are_isomorphisms() {
    let r = zm(6);
    let a = cx(&r, 0, &[&[6], &[3]], &[&[&[1]]]);
    let b = cx(&r, 1, &[&[6, 2], &[6]], &[&[&[3, 3]]]);
    let c = cx(&r, -1, &[&[6], &[6]], &[&[&[2]]]);
    let s = tensor_swap(&a, &b).unwrap();
    assert!(is_iso(&s));
    let back = tensor_swap(&b, &a).unwrap();
    assert!(s.then(&back).equals(&ChainMap::identity(s.src())));
    assert!(is_iso(&tensor_associator(&a, &b, &c).unwrap()));
}

#[test]
fn cone_commutes_with_hom() {
    let r = zm(4);
    let a = cx(&r, 0, &[&[4], &[2]], &[&[&[1]]]);
    let b = cx(&r, 0, &[&[4], &[4]], &[&[&[2]]]);
    let f = ChainMap::new(&a, &b, 0, vec![mat(&[&[1]]), mat(&[&[2]])]).unwrap();
    let x = cx(&r, -1, &[&[2], &[4]], &[&[&[2]]]);
    assert!(is_iso(&hom_cone_iso(&f, &x).unwrap()));
}

#[test]
fn truncation_commutes_with_hom_from_a_module() {
    let r = zm(8);
    let m = cx(&r, -1, &[&[8], &[8, 4], &[2]], &[&[&[2], &[1]], &[&[1, 0]]]);
    let p = md(&r, &[8, 2]);
    for deg in -1..=1 {
        for n in -2..=2 {
            assert!(check_truncation_commutes(&p, deg, &m, n).unwrap(), "p in {deg}, n = {n}");
        }
    }
}

#[test]
fn dpur_adjunction_small() {
    let r = zm(12);
    let a = Complex::concentrated(&md(&r, &[6]), 0);
    let b = cx(&r, -1, &[&[12], &[4]], &[&[&[1]]]);
    let c = Complex::concentrated(&md(&r, &[12, 2]), 0);
    let rep = check_dpur_adjunction(&a, &b, &c, 2).unwrap();
    assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
    assert!(check_phom_adjunction(&a, &b, &c, 2).unwrap().passed());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn adjunction_is_an_isomorphism(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let r = zm(12);
        let bd = Bounds::default();
        let a = random::complex(&r, &mut rng, 0, 1, &bd, false);
        let b = random::complex(&r, &mut rng, -1, 0, &bd, false);
        let c = random::complex(&r, &mut rng, 0, 1, &bd, false);
        let w = adjunction_iso(&a, &b, &c).unwrap();
        prop_assert!(w.validate().passed());
    }

    #[test]
    fn phom_independent_of_resolutions(seed in any::<u64>(), s1 in 0u64..1000, s2 in 0u64..1000) {
        let mut rng = random::rng(seed);
        let r = zm(8);
        let bd = Bounds::default();
        let m = random::complex(&r, &mut rng, -1, 0, &bd, false);
        let n = random::complex(&r, &mut rng, 0, 1, &bd, false);
        let rep = check_phom_invariance(&m, &n, (s1, s2), 1).unwrap();
        prop_assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
    }

    #[test]
    fn tensor_and_truncation_preserve_pure_qis(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let r = zm(12);
        let bd = Bounds::default();
        let m = random::complex(&r, &mut rng, 0, 1, &bd, false);
        let u = random::pure_qis(&m, &mut rng, &bd, false);
        let a = random::complex(&r, &mut rng, -1, 0, &bd, false);
        let rep = check_tensor_descends(&u, &a, &probe_battery(&r, 12)).unwrap();
        prop_assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
    }

    #[test]
    fn hom_from_bounded_complexes_preserves_pure_qis(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let r = zm(8);
        let bd = Bounds::default();
        let m = random::complex(&r, &mut rng, 0, 1, &bd, false);
        let u = random::pure_qis(&m, &mut rng, &bd, false);
        let p = random::complex(&r, &mut rng, -1, 0, &bd, false);
        prop_assert!(check_hom_preserves_pure_qis(&p, &u, &probe_battery(&r, 8)).unwrap());
    }

    #[test]
    fn hom_of_cone_is_cone_of_hom(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let r = zm(12);
        let bd = Bounds::default();
        let a = random::complex(&r, &mut rng, 0, 1, &bd, false);
        let b = random::complex(&r, &mut rng, 0, 1, &bd, false);
        let f = random::chain_map(&a, &b, &mut rng);
        let x = random::complex(&r, &mut rng, -1, 0, &bd, false);
        prop_assert!(is_iso(&hom_cone_iso(&f, &x).unwrap()));
    }

    #[test]
    fn swap_squares_to_identity(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let r = zm(6);
        let bd = Bounds::default();
        let a = random::complex(&r, &mut rng, -1, 1, &bd, false);
        let b = random::complex(&r, &mut rng, 0, 1, &bd, false);
        let s = tensor_swap(&a, &b).unwrap();
        prop_assert!(s.validate().is_ok());
        let t = tensor_swap(&b, &a).unwrap();
        prop_assert!(s.then(&t).equals(&ChainMap::identity(&tensor_complex(&a, &b).unwrap().complex)));
    }
}
