mod common;

use common::*;
use proptest::prelude::*;
use purcat_core::complexes::{contractible_on, direct_sum_complexes, hom_complex, homology, shift, Complex};
use purcat_core::homotopy::*;
use purcat_core::purity::{is_pure_qis, probe_battery};
use purcat_core::random::{self, Bounds};
use purcat_core::resolutions::{resolve, Side};
use purcat_core::{ChainMap, Error, Homotopy};

#[test]
fn hom_k_examples() {
    let r = zm(12);
    let m = cx(&r, -1, &[&[12], &[12, 4], &[6]], &[&[&[2], &[1]], &[&[3, 0]]]);
    let unit = Complex::concentrated(&md(&r, &[12]), 0);
    assert!(hom_k(&unit, &m).unwrap().is_isomorphic(&homology(&m, 0)));
    assert!(hom_k(&m, &Complex::zero(&r)).unwrap().is_zero());

    let t = Complex::concentrated(&md(&z(), &[2]), 0);
    let h = hom_k(&t, &t).unwrap();
    let brute = md(&z(), &[2]).elements().unwrap().len();
    assert_eq!(h.order().unwrap(), purcat_core::Int::from(brute));
}

#[test]
fn hom_k_classes_round_trip() {
    let r = zm(4);
    let a = cx(&r, 0, &[&[4], &[2]], &[&[&[1]]]);
    let b = cx(&r, 0, &[&[2], &[4]], &[&[&[2]]]);
    let hk = HomK::new(&a, &b).unwrap();
    for x in hk.module.elements().unwrap() {
        let f = hk.representative(&x);
        f.validate().unwrap();
        assert_eq!(hk.class_of(&f), x);
    }
}

#[test]
fn null_homotopy_examples() {
    let zz = cx(&z(), 0, &[&[0]], &[]);
    let (c, _) = contractible_on(&zz);
    assert!(null_homotopy(&ChainMap::zero(&c, &c)).unwrap().witnesses(&ChainMap::zero(&c, &c), &ChainMap::zero(&c, &c)));
    let id = ChainMap::identity(&c);
    let s = null_homotopy(&id).unwrap();
    assert!(s.is_contraction());
    let t = Complex::concentrated(&md(&z(), &[2]), 0);
    assert!(null_homotopy(&ChainMap::identity(&t)).is_none());
}

#[test]
fn certificate_examples() {
    let b = probe_battery(&z(), 4);
    let t = Complex::concentrated(&md(&z(), &[2]), 0);
    let c = certify_k_pure_injective(&t, &b, 0, 1);
    assert_eq!(c.route, KPurityRoute::ByBoundedInjective);
    c.validate().unwrap();
    let free = Complex::concentrated(&md(&z(), &[0]), 0);
    let c = certify_k_pure_injective(&free, &b, 10, 1);
    assert_eq!(c.route, KPurityRoute::ProbeConsistent);
    c.validate().unwrap();
    let r = zm(8);
    let m = cx(&r, 0, &[&[8], &[4]], &[&[&[1]]]);
    assert_eq!(certify_k_pure_injective(&m, &probe_battery(&r, 1), 5, 2).route, KPurityRoute::ByBoundedInjective);
    let m = cx(&z(), 0, &[&[0], &[0, 3]], &[&[&[2], &[1]]]);
    let c = certify_k_pure_projective(&m, &b, 10, 3);
    assert_eq!(c.route, KPurityRoute::ByBoundedProjective);
    c.validate().unwrap();
    assert_eq!(certify_k_pure_projective(&Complex::zero(&z()), &b, 0, 0).route, KPurityRoute::ByBoundedProjective);
}

#[test]
fn left_inverse_examples() {
    let r = zm(4);
    let b = probe_battery(&r, 4);
    let i = cx(&r, 0, &[&[4], &[2]], &[&[&[1]]]);
    let cert = certify_k_pure_injective(&i, &b, 0, 0);
    let (v, h) = homotopy_left_inverse(&ChainMap::identity(&i), &cert, &b).unwrap();
    assert!(v.equals(&ChainMap::identity(&i)) && h == Homotopy::zero(&i, &i));

    let (e, _) = contractible_on(&Complex::concentrated(&md(&r, &[2]), 0));
    let sum = direct_sum_complexes(&r, &[i.clone(), e]);
    let u = sum.injections[0].clone();
    let (v, h) = homotopy_left_inverse(&u, &cert, &b).unwrap();
    assert!(h.witnesses(&u.then(&v), &ChainMap::identity(&i)));
    assert!(null_homotopy(&v.sub(&sum.projections[0])).is_some());

    let not_qis = ChainMap::zero(&i, &Complex::zero(&r));
    assert!(matches!(homotopy_left_inverse(&not_qis, &cert, &b), Err(Error::Precondition(_))));
}

#[test]
fn hom_dpur_examples() {
    let r = zm(6);
    let m = cx(&r, -1, &[&[6], &[6, 3], &[2]], &[&[&[2], &[0]], &[&[1, 0]]]);
    let (acyclic, _) = contractible_on(&m);
    assert!(hom_dpur(&acyclic, &m, 2).unwrap().is_zero());
    let unit = Complex::concentrated(&md(&r, &[6]), 0);
    assert!(hom_dpur(&unit, &m, 2).unwrap().is_isomorphic(&homology(&m, 0)));
    let a = cx(&r, 0, &[&[3], &[6]], &[&[&[2]]]);
    assert!(hom_dpur(&a, &m, 2).unwrap().is_isomorphic(&hom_k(&a, &m).unwrap()));
    let shallow = hom_dpur(&a, &m, 0).unwrap_err();
    assert_eq!(shallow, Error::DepthInsufficient { required: 1, given: 0 });
}

#[test]
fn roof_examples() {
    let r = zm(4);
    let b = probe_battery(&r, 4);
    let a = cx(&r, 0, &[&[4]], &[]);
    let i = cx(&r, 0, &[&[4], &[2]], &[&[&[1]]]);
    let f = ChainMap::new(&a, &i, 0, vec![mat(&[&[2]])]).unwrap();
    let cert = certify_k_pure_injective(&i, &b, 0, 0);
    let roof = RightRoof::new(f.clone(), ChainMap::identity(&i)).unwrap();
    assert!(normalize_roof(&roof, &cert, &b).unwrap().equals(&f));

    let (e, _) = contractible_on(&Complex::concentrated(&md(&r, &[4]), 1));
    let sum = direct_sum_complexes(&r, &[i.clone(), e]);
    let roof = RightRoof::new(f.then(&sum.injections[0]), sum.injections[0].clone()).unwrap();
    let g = normalize_roof(&roof, &cert, &b).unwrap();
    assert!(null_homotopy(&g.sub(&f.then(&sum.injections[0]).then(&sum.projections[0]))).is_some());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hom_complex_homology_is_shifted_hom_k(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let r = zm(12);
        let bd = Bounds::default();
        let b = random::complex(&r, &mut rng, -1, 0, &bd, false);
        let c = random::complex(&r, &mut rng, 0, 1, &bd, false);
        let h = hom_complex(&b, &c).unwrap().complex;
        for k in h.lo() - 1..=h.hi() + 1 {
            let hk = homology(&h, k);
            prop_assert!(hk.is_isomorphic(&hom_k(&b, &shift(&c, k)).unwrap()));
            prop_assert!(hk.is_isomorphic(&hom_k(&shift(&b, -k), &c).unwrap()));
        }
    }

    #[test]
    fn certified_targets_kill_pure_acyclics(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let r = zm(8);
        let bd = Bounds::default();
        let i = random::complex(&r, &mut rng, 0, 2, &bd, true);
        let battery = probe_battery(&r, 8);
        let cert = certify_k_pure_injective(&i, &battery, 0, 0);
        prop_assert_eq!(cert.route, KPurityRoute::ByBoundedInjective);
        let a = random::pure_acyclic(&r, &mut rng, -1, 2, &bd, false);
        let f = random::chain_map(&a, &i, &mut rng);
        prop_assert!(null_homotopy(&f).unwrap().witnesses(&f, &ChainMap::zero(&a, &i)));
        let g = random::chain_map(&i, &a, &mut rng);
        prop_assert!(null_homotopy(&g).is_some());
    }

    #[test]
    fn hom_dpur_independent_of_resolution(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let r = zm(4);
        let bd = Bounds::default();
        let a = random::complex(&r, &mut rng, -1, 0, &bd, false);
        let m = random::complex(&r, &mut rng, -1, 1, &bd, false);
        let x = hom_dpur(&a, &m, 1).unwrap();
        let y = hom_dpur_seeded(&a, &m, 1, seed ^ 0x5eed).unwrap();
        prop_assert!(x.is_isomorphic(&y));
        prop_assert!(x.is_isomorphic(&hom_k(&a, &m).unwrap()));
    }

    #[test]
    fn left_inverse_of_resolutions(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let r = zm(4);
        let bd = Bounds::default();
        let i = random::complex(&r, &mut rng, 0, 1, &bd, false);
        let battery = probe_battery(&r, 4);
        let u = random::pure_qis(&i, &mut rng, &bd, false);
        prop_assume!(u.src() == &i);
        prop_assert!(is_pure_qis(&u, &battery).is_pure());
        let cert = certify_k_pure_injective(&i, &battery, 0, 0);
        let (v, h) = homotopy_left_inverse(&u, &cert, &battery).unwrap();
        prop_assert!(h.witnesses(&u.then(&v), &ChainMap::identity(&i)));
        let res = resolve(&i, Side::Injective, 0).unwrap();
        prop_assert!(res.validate().is_ok());
    }
}
