use proptest::prelude::*;

use super::*;
use crate::exact_linalg::{IntMatrix, Ring};
use crate::fpmod::{FpModule, ModuleMap};
use crate::int::Int;
use crate::random::{self, Bounds};

fn z() -> Ring {
    Ring::Integers
}

fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

/// `ℤ --×k--> ℤ` in degrees `(0, 1)`.
fn times(k: i64) -> Complex {
    let zz = FpModule::free(&z(), 1);
    Complex::new(&z(), 0, vec![zz.clone(), zz], vec![IntMatrix::from_i64(&[&[k]])]).unwrap()
}

#[test]
fn rejects_non_complexes() {
    let zz = FpModule::free(&z(), 1);
    let r = Complex::new(&z(), 0, vec![zz.clone(), zz.clone(), zz], vec![IntMatrix::from_i64(&[&[1]]), IntMatrix::from_i64(&[&[1]])]);
    assert_eq!(r.unwrap_err(), crate::Error::NotComplex(0));
}

#[test]
fn trims_zero_ends() {
    let zz = FpModule::free(&z(), 1);
    let zero = FpModule::cyclic(&z(), 1);
    let c = Complex::new(&z(), -1, vec![zero.clone(), zz, zero], vec![IntMatrix::zeros(1, 1), IntMatrix::zeros(1, 1)]).unwrap();
    assert_eq!((c.lo(), c.hi()), (0, 0));
}

#[test]
fn shift_examples() {
    let m = times(2);
    assert_eq!(shift(&m, 0), m);
    assert_eq!(shift(&shift(&m, 1), -1), m);
    let s = shift(&m, 1);
    assert_eq!((s.lo(), s.hi()), (-1, 0));
    assert_eq!(s.d(-1).matrix(), &IntMatrix::from_i64(&[&[-2]]));
}

#[test]
fn cone_examples() {
    let n = times(3);
    let c = cone(&ChainMap::zero(&Complex::zero(&z()), &n));
    assert_eq!(c.complex, n);
    let m = times(2);
    let c = cone(&ChainMap::identity(&m));
    assert_eq!((c.complex.lo(), c.complex.hi()), (-1, 1));
    let (_, h) = contractible_on(&m);
    assert!(h.is_contraction());
    c.injection.validate().unwrap();
    c.projection.validate().unwrap();
}

#[test]
fn truncation_examples() {
    let m = times(2);
    assert_eq!(truncate_geq(&m, 0).0, m);
    assert_eq!(truncate_geq(&m, -3).0, m);
    assert!(truncate_geq(&m, 2).0.is_zero());
    let (t, p) = truncate_geq(&m, 1);
    assert_eq!((t.lo(), t.hi()), (1, 1));
    assert_eq!(t.module(1).invariant_factors(), ints(&[2]).as_slice());
    p.validate().unwrap();
    assert_eq!(truncate_leq(&m, 1).0, m);
    assert!(truncate_leq(&m, -1).0.is_zero());
    let (t, i) = truncate_leq(&m, 0);
    assert!(t.is_zero());
    i.validate().unwrap();
}

#[test]
fn homology_examples() {
    let m = times(2);
    assert!(homology(&m, 0).is_zero());
    assert_eq!(homology(&m, 1).invariant_factors(), ints(&[2]).as_slice());
    let a = FpModule::cyclic(&z(), 6);
    let c = Complex::new(&z(), 0, vec![a.clone(), a.clone()], vec![IntMatrix::zeros(1, 1)]).unwrap();
    assert!(homology(&c, 1).is_isomorphic(&a));
    let (k, _) = contractible_on(&m);
    assert!(is_acyclic(&k));
}

#[test]
fn hom_complex_examples() {
    let r = Complex::concentrated(&FpModule::free(&z(), 1), 0);
    let n = times(4);
    let h = hom_complex(&r, &n).unwrap();
    for i in -1..=2 {
        assert!(h.complex.module(i).is_isomorphic(&n.module(i)));
    }
    assert!(homology(&h.complex, 1).is_isomorphic(&homology(&n, 1)));
    let a = FpModule::cyclic(&z(), 4);
    let b = FpModule::cyclic(&z(), 6);
    let h = hom_complex(&Complex::concentrated(&a, 2), &Complex::concentrated(&b, 5)).unwrap();
    assert_eq!((h.complex.lo(), h.complex.hi()), (3, 3));
    assert_eq!(h.complex.module(3).invariant_factors(), ints(&[2]).as_slice());
    let h = hom_complex(&times(2), &times(3)).unwrap();
    h.complex.validate().unwrap();
}

#[test]
fn tensor_examples() {
    let m = times(2);
    let r = Complex::concentrated(&FpModule::free(&z(), 1), 0);
    let t = tensor_complex(&m, &r).unwrap();
    assert_eq!(t.complex, m);
    let a = FpModule::cyclic(&z(), 4);
    let b = FpModule::cyclic(&z(), 6);
    let t = tensor_complex(&Complex::concentrated(&a, 1), &Complex::concentrated(&b, 2)).unwrap();
    assert_eq!((t.complex.lo(), t.complex.hi()), (3, 3));
    assert_eq!(homology(&t.complex, 3).invariant_factors(), ints(&[2]).as_slice());
    // explicit oracle: Z --(2,2)--> Z^2 --(2,-2)--> Z
    let t = tensor_complex(&times(2), &times(2)).unwrap();
    let zz = FpModule::free(&z(), 1);
    let oracle = Complex::new(
        &z(),
        0,
        vec![zz.clone(), FpModule::free(&z(), 2), zz],
        vec![IntMatrix::from_i64(&[&[2], &[2]]), IntMatrix::from_i64(&[&[2, -2]])],
    )
    .unwrap();
    for n in 0..=2 {
        assert_eq!(homology(&t.complex, n).invariant_factors(), homology(&oracle, n).invariant_factors());
    }
    assert!(homology(&t.complex, 0).is_zero());
    assert_eq!(homology(&t.complex, 1).invariant_factors(), ints(&[2]).as_slice());
    assert_eq!(homology(&t.complex, 2).invariant_factors(), ints(&[2]).as_slice());
}

#[test]
fn hom_elements_round_trip() {
    let ring = Ring::zmod(12);
    let mut rng = random::rng(7);
    let b = Bounds::default();
    for _ in 0..20 {
        let a = random::complex(&ring, &mut rng, 0, 2, &b, false);
        let c = random::complex(&ring, &mut rng, 0, 2, &b, false);
        let f = random::chain_map(&a, &c, &mut rng);
        f.validate().unwrap();
        let h = hom_complex(&a, &c).unwrap();
        let t = h.from_chain_map(&f);
        assert!(h.to_chain_map(&t).equals(&f));
    }
}

fn ring_strategy() -> impl Strategy<Value = Ring> {
    prop_oneof![Just(Ring::Integers), Just(Ring::zmod(12)), Just(Ring::zmod(8))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn constructions_are_complexes(ring in ring_strategy(), seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let b = Bounds::default();
        let m = random::complex(&ring, &mut rng, -1, 1, &b, false);
        let n = random::complex(&ring, &mut rng, 0, 1, &b, false);
        let f = random::chain_map(&m, &n, &mut rng);
        f.validate().unwrap();
        for c in [cone(&f).complex, shift(&m, 1), truncate_geq(&m, 0).0, truncate_leq(&m, 0).0,
                  hom_complex(&m, &n).unwrap().complex, tensor_complex(&m, &n).unwrap().complex] {
            prop_assert!(c.validate().is_ok());
        }
    }

    #[test]
    fn cone_is_semi_split(ring in ring_strategy(), seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let b = Bounds::default();
        let m = random::complex(&ring, &mut rng, 0, 2, &b, false);
        let n = random::complex(&ring, &mut rng, 0, 2, &b, false);
        let c = cone(&random::chain_map(&m, &n, &mut rng));
        c.injection.validate().unwrap();
        c.projection.validate().unwrap();
        prop_assert!(c.injection.then(&c.projection).is_zero());
        for i in c.complex.degrees() {
            // the degreewise section of the projection is the summand inclusion
            let gs = m.module(i + 1).generators();
            let cm = c.complex.module(i);
            if gs == 0 || cm.generators() == 0 { continue; }
            let mut sec = IntMatrix::zeros(cm.generators(), gs);
            sec.set_block(0, 0, &IntMatrix::identity(gs));
            let sec = crate::fpmod::make_map(&m.module(i + 1), &cm, sec).unwrap();
            prop_assert!(sec.then(&c.projection.component(i)).equals(&ModuleMap::identity(&m.module(i + 1))));
        }
    }

    #[test]
    fn truncations_keep_homology(ring in ring_strategy(), seed in any::<u64>(), n in -1i64..=2) {
        let mut rng = random::rng(seed);
        let m = random::complex(&ring, &mut rng, -1, 2, &Bounds::default(), false);
        let (tg, p) = truncate_geq(&m, n);
        let (tl, i) = truncate_leq(&m, n);
        p.validate().unwrap();
        i.validate().unwrap();
        for k in -2..=3 {
            if k >= n {
                prop_assert!(induced_on_homology(&p, k).2.is_isomorphism());
            } else {
                prop_assert!(homology(&tg, k).is_zero());
            }
            if k <= n {
                prop_assert!(induced_on_homology(&i, k).2.is_isomorphism());
            } else {
                prop_assert!(homology(&tl, k).is_zero());
            }
        }
    }

    #[test]
    fn hom_and_tensor_unit(ring in ring_strategy(), seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let m = random::complex(&ring, &mut rng, -1, 1, &Bounds::default(), false);
        let r = Complex::concentrated(&FpModule::free(&ring, 1), 0);
        let t = tensor_complex(&r, &m).unwrap().complex;
        let h = hom_complex(&r, &m).unwrap().complex;
        for k in -1..=1 {
            let hm = homology(&m, k);
            let (ht, hh) = (homology(&t, k), homology(&h, k));
            prop_assert_eq!(ht.invariant_factors(), hm.invariant_factors());
            prop_assert_eq!(hh.invariant_factors(), hm.invariant_factors());
        }
    }
}
