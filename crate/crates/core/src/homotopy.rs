//! Morphisms in the homotopy category and in the pure derived category.

use std::collections::BTreeMap;


use crate::complexes::{contractible_on, hom_complex, homology_data, ChainMap, Complex, HomComplex, HomologyData, Homotopy};
use crate::error::{Error, Result};
use crate::fpmod::{factor_through_mono, make_map, minimize, FpModule, MapSystem, MapUnknown, ModuleMap};
use crate::int::Int;
use crate::purity::{contract, is_pure_qis, ProbeBattery};
use crate::random::{self, Bounds};
use crate::resolutions::{resolve, resolve_seeded, Side};
use crate::exact_linalg::IntMatrix;

/// `Hom_K(A, B) = H^0 Hom(A, B)` with conversions between classes and chain maps.
#[derive(Clone, Debug)]
pub struct HomK {
    pub hom: HomComplex,
    pub data: HomologyData,
    /// `H^0` in invariant-factor form.
    pub module: FpModule,
    to_min: ModuleMap,
    from_min: ModuleMap,
}

impl HomK {
    pub fn new(a: &Complex, b: &Complex) -> Result<HomK> {
        let hom = hom_complex(a, b)?;
        let data = homology_data(&hom.complex, 0);
        let (module, to_min, from_min) = minimize(&data.module);
        Ok(HomK { hom, data, module, to_min, from_min })
    }

    /// A chain map representing the class with coordinates `x` in [`HomK::module`].
    pub fn representative(&self, x: &[Int]) -> ChainMap {
        let col = IntMatrix::column(x.to_vec());
        let z = self.data.inclusion.matrix().mul(&self.from_min.matrix().mul(&col)).reduced(self.hom.complex.ring());
        self.hom.to_chain_map(&z.col_vec(0))
    }

    /// Coordinates of the class of `f` in [`HomK::module`].
    pub fn class_of(&self, f: &ChainMap) -> Vec<Int> {
        let ring = self.hom.complex.ring();
        let v = self.hom.from_chain_map(f);
        let one = FpModule::free(ring, 1);
        let g = make_map(&one, &self.hom.complex.module(0), IntMatrix::column(v)).expect("a vector is a map from R");
        let z = factor_through_mono(&self.data.inclusion, &g).expect("chain maps are cycles");
        let x = z.then(&self.data.projection).then(&self.to_min);
        let m = x.matrix().reduced(ring);
        self.module.coords(&m.col_vec(0))
    }
}

pub fn hom_k(a: &Complex, b: &Complex) -> Result<FpModule> {
    Ok(HomK::new(a, b)?.module)
}

/// A homotopy `s` with `d s + s d = f`, from one linear system over all degrees.
pub fn null_homotopy(f: &ChainMap) -> Option<Homotopy> {
    let (a, b) = (f.src(), f.tgt());
    let one = Int::one();
    let mut sys = MapSystem::new(a.ring());
    let s = homotopy_unknowns(&mut sys, a, b);
    for n in a.degrees() {
        let (p, q) = (a.module(n), b.module(n));
        if p.generators() == 0 || q.generators() == 0 {
            continue;
        }
        let eq = sys.equation(&p, &q);
        if let Some(&x) = s.get(&n) {
            sys.add_map_term(eq, &one, Some(&b.d(n - 1)), x, None);
        }
        if let Some(&x) = s.get(&(n + 1)) {
            sys.add_map_term(eq, &one, None, x, Some(&a.d(n)));
        }
        sys.add_constant(eq, &-one.clone(), f.component(n).matrix());
    }
    let sol = sys.solve()?;
    Some(Homotopy::from_maps(a, b, |n| value_or_zero(&sys, &sol, &s, n, &a.module(n), &b.module(n - 1))))
}

fn homotopy_unknowns(sys: &mut MapSystem, a: &Complex, b: &Complex) -> BTreeMap<i64, MapUnknown> {
    let mut s = BTreeMap::new();
    for n in a.degrees() {
        let (p, q) = (a.module(n), b.module(n - 1));
        if p.generators() > 0 && q.generators() > 0 {
            s.insert(n, sys.unknown(&p, &q));
        }
    }
    s
}

fn value_or_zero(
    sys: &MapSystem,
    sol: &crate::fpmod::MapSolution,
    xs: &BTreeMap<i64, MapUnknown>,
    n: i64,
    src: &FpModule,
    tgt: &FpModule,
) -> ModuleMap {
    xs.get(&n).map(|&x| sys.value(sol, x)).unwrap_or_else(|| ModuleMap::zero(src, tgt))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum KPurityRoute {
    ByBoundedInjective,
    ByBoundedProjective,
    ProbeConsistent,
    Refuted,
}

/// Evidence that a complex is K-pure injective (or projective), or a refutation.
#[derive(Clone, Debug)]
pub struct KPurityCertificate {
    pub subject: Complex,
    pub side: Side,
    pub route: KPurityRoute,
    /// Per degree: whether the term is pure injective (resp. projective).
    pub flags: Vec<(i64, bool)>,
    pub trials: usize,
    /// A chain map between the subject and a pure acyclic complex that is not
    /// null-homotopic.
    pub counterexample: Option<ChainMap>,
}

impl KPurityCertificate {
    pub fn is_certified(&self) -> bool {
        matches!(self.route, KPurityRoute::ByBoundedInjective | KPurityRoute::ByBoundedProjective)
    }

    /// Re-derives the flags and re-checks the route and any counterexample.
    pub fn validate(&self) -> Result<()> {
        let bad = |s: &str| Err(Error::InvalidCertificate(s.to_string()));
        if self.flags != term_flags(&self.subject, self.side) {
            return bad("purity flags do not match the subject");
        }
        let all = self.flags.iter().all(|f| f.1);
        match (self.route, self.side) {
            (KPurityRoute::ByBoundedInjective, Side::Injective) | (KPurityRoute::ByBoundedProjective, Side::Projective) if all => Ok(()),
            (KPurityRoute::ByBoundedInjective | KPurityRoute::ByBoundedProjective, _) => bad("route does not match side or flags"),
            (KPurityRoute::ProbeConsistent, _) if !all && self.counterexample.is_none() => Ok(()),
            (KPurityRoute::ProbeConsistent, _) => bad("probe-consistent route with certified flags or a counterexample"),
            (KPurityRoute::Refuted, side) => {
                let Some(f) = &self.counterexample else { return bad("refutation without counterexample") };
                let (acyclic, subject) = match side {
                    Side::Injective => (f.src(), f.tgt()),
                    Side::Projective => (f.tgt(), f.src()),
                };
                if subject != &self.subject || contract(acyclic).is_err() || null_homotopy(f).is_some() {
                    return bad("counterexample does not refute");
                }
                Ok(())
            }
        }
    }
}

fn term_flags(c: &Complex, side: Side) -> Vec<(i64, bool)> {
    c.degrees()
        .map(|n| {
            let m = c.module(n);
            (n, if side == Side::Injective { m.is_pure_injective() } else { m.is_pure_projective() })
        })
        .collect()
}

/// A random pure acyclic complex near `[lo, hi]`: either a generated one or the
/// contractible complex on a battery probe.
fn trial_acyclic(battery: &ProbeBattery, rng: &mut impl rand::Rng, lo: i64, hi: i64) -> Complex {
    if rng.gen_bool(0.5) && !battery.probes.is_empty() {
        let p = &battery.probes[rng.gen_range(0..battery.probes.len())];
        let n = rng.gen_range(lo..=hi);
        contractible_on(&Complex::concentrated(p, n)).0
    } else {
        random::pure_acyclic(&battery.ring, rng, lo, hi, &Bounds::default(), false)
    }
}

fn certify(c: &Complex, side: Side, battery: &ProbeBattery, trials: usize, seed: u64) -> KPurityCertificate {
    let flags = term_flags(c, side);
    let mut rng = random::rng(seed);
    let (lo, hi) = if c.is_zero() { (0, 0) } else { (c.lo() - 1, c.hi()) };
    let mut counterexample = None;
    for _ in 0..trials {
        let a = trial_acyclic(battery, &mut rng, lo, hi);
        let f = match side {
            Side::Injective => random::chain_map(&a, c, &mut rng),
            Side::Projective => random::chain_map(c, &a, &mut rng),
        };
        if null_homotopy(&f).is_none() {
            counterexample = Some(f);
            break;
        }
    }
    let route = if counterexample.is_some() {
        KPurityRoute::Refuted
    } else if flags.iter().all(|f| f.1) {
        match side {
            Side::Injective => KPurityRoute::ByBoundedInjective,
            Side::Projective => KPurityRoute::ByBoundedProjective,
        }
    } else {
        KPurityRoute::ProbeConsistent
    };
    KPurityCertificate { subject: c.clone(), side, route, flags, trials, counterexample }
}

/// Certifies `Hom_K(A, I) = 0` for pure acyclic `A`: by termwise pure injectivity when
/// possible, with `trials` random null-homotopy checks in every case.
pub fn certify_k_pure_injective(i: &Complex, battery: &ProbeBattery, trials: usize, seed: u64) -> KPurityCertificate {
    certify(i, Side::Injective, battery, trials, seed)
}

pub fn certify_k_pure_projective(p: &Complex, battery: &ProbeBattery, trials: usize, seed: u64) -> KPurityCertificate {
    certify(p, Side::Projective, battery, trials, seed)
}

/// For a pure quasi-isomorphism `u : B → C` out of a certified K-pure injective `B`,
/// a chain map `v : C → B` and a homotopy `h` with `v u − id = d h + h d`.
pub fn homotopy_left_inverse(u: &ChainMap, cert: &KPurityCertificate, battery: &ProbeBattery) -> Result<(ChainMap, Homotopy)> {
    if cert.subject != *u.src() || cert.route != KPurityRoute::ByBoundedInjective {
        return Err(Error::Precondition("source is not certified K-pure injective".into()));
    }
    if !is_pure_qis(u, battery).is_pure() {
        return Err(Error::Precondition("map is not a pure quasi-isomorphism".into()));
    }
    let (b, c) = (u.src(), u.tgt());
    if b == c && u.equals(&ChainMap::identity(b)) {
        return Ok((u.clone(), Homotopy::zero(b, b)));
    }
    let one = Int::one();
    let mut sys = MapSystem::new(b.ring());
    let mut v = BTreeMap::new();
    for n in c.degrees() {
        let (p, q) = (c.module(n), b.module(n));
        if p.generators() > 0 && q.generators() > 0 {
            v.insert(n, sys.unknown(&p, &q));
        }
    }
    let h = homotopy_unknowns(&mut sys, b, b);
    // v^{n+1} d_C − d_B v^n = 0
    for n in c.lo() - 1..=c.hi() {
        let (p, q) = (c.module(n), b.module(n + 1));
        if p.generators() == 0 || q.generators() == 0 {
            continue;
        }
        let eq = sys.equation(&p, &q);
        if let Some(&x) = v.get(&(n + 1)) {
            sys.add_map_term(eq, &one, None, x, Some(&c.d(n)));
        }
        if let Some(&x) = v.get(&n) {
            sys.add_map_term(eq, &-one.clone(), Some(&b.d(n)), x, None);
        }
    }
    // v^n u^n − d h^n − h^{n+1} d − id = 0
    for n in b.degrees() {
        let p = b.module(n);
        if p.generators() == 0 {
            continue;
        }
        let eq = sys.equation(&p, &p);
        if let Some(&x) = v.get(&n) {
            sys.add_map_term(eq, &one, None, x, Some(&u.component(n)));
        }
        if let Some(&x) = h.get(&n) {
            sys.add_map_term(eq, &-one.clone(), Some(&b.d(n - 1)), x, None);
        }
        if let Some(&x) = h.get(&(n + 1)) {
            sys.add_map_term(eq, &-one.clone(), None, x, Some(&b.d(n)));
        }
        sys.add_constant(eq, &-one.clone(), &IntMatrix::identity(p.generators()));
    }
    let sol = sys.solve().ok_or_else(|| Error::NoInverse("the homotopy system is unsolvable".into()))?;
    let vm = ChainMap::from_maps(c, b, |n| value_or_zero(&sys, &sol, &v, n, &c.module(n), &b.module(n)));
    let hm = Homotopy::from_maps(b, b, |n| value_or_zero(&sys, &sol, &h, n, &b.module(n), &b.module(n - 1)));
    debug_assert!(hm.witnesses(&u.then(&vm), &ChainMap::identity(b)));
    Ok((vm, hm))
}

/// `Hom_Dpur(A, B)`, computed as `Hom_K(A, I_B)` for a pure injective resolution of `B`.
pub fn hom_dpur(a: &Complex, b: &Complex, depth: usize) -> Result<FpModule> {
    let r = resolve(b, Side::Injective, depth)?;
    hom_k(a, &r.target)
}

/// As [`hom_dpur`] with a seeded (differently presented) resolution.
pub fn hom_dpur_seeded(a: &Complex, b: &Complex, depth: usize, seed: u64) -> Result<FpModule> {
    let r = resolve_seeded(b, Side::Injective, depth, seed)?;
    hom_k(a, &r.target)
}

/// A morphism `A → C ⇐ B` whose wrong-way leg `u` is a pure quasi-isomorphism.
#[derive(Clone, Debug)]
pub struct RightRoof {
    pub f: ChainMap,
    pub u: ChainMap,
}

impl RightRoof {
    pub fn new(f: ChainMap, u: ChainMap) -> Result<RightRoof> {
        if f.tgt() != u.tgt() {
            return Err(Error::Input("roof legs must share their target".into()));
        }
        Ok(RightRoof { f, u })
    }
}

/// The chain map `v ∘ f : A → B` representing the roof, for a homotopy left inverse
/// `v` of its wrong-way leg.
pub fn normalize_roof(r: &RightRoof, cert: &KPurityCertificate, battery: &ProbeBattery) -> Result<ChainMap> {
    let (v, _) = homotopy_left_inverse(&r.u, cert, battery)?;
    Ok(r.f.then(&v))
}
