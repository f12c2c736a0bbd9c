//! Seeded generators for modules, maps and complexes of bounded size.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complexes::{cone, contractible_on, direct_sum_complexes, hom_complex, ChainMap, Complex};
use crate::exact_linalg::{IntMatrix, Ring};
use crate::fpmod::{cokernel, hom_modules, kernel, make_map, make_module, FpModule, ModuleMap};
use crate::int::Int;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Size limits for generated objects.
#[derive(Clone, Copy, Debug)]
pub struct Bounds {
    pub max_generators: usize,
    /// Largest relation entry (or torsion order over ℤ).
    pub max_entry: i64,
    /// Probability that a generated module is a general (non-diagonal) presentation.
    pub general: f64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_generators: 2, max_entry: 6, general: 0.2 }
    }
}

fn divisors(m: i64) -> Vec<i64> {
    (2..=m).filter(|d| m % d == 0).collect()
}

/// A random module with at most `b.max_generators` generators. Over ℤ, `torsion`
/// forbids free summands.
pub fn module<R: Rng>(ring: &Ring, rng: &mut R, b: &Bounds, torsion: bool) -> FpModule {
    let g = rng.gen_range(0..=b.max_generators);
    if g == 0 {
        return FpModule::zero(ring);
    }
    if rng.gen_bool(b.general) {
        let r = rng.gen_range(1..=g + 1);
        let mut rel = IntMatrix::zeros(g, r);
        for i in 0..g {
            for j in 0..r {
                rel.set(i, j, Int::from(rng.gen_range(-b.max_entry..=b.max_entry)));
            }
        }
        let m = make_module(ring, g, rel).expect("shape");
        if !torsion || m.is_torsion() {
            return m;
        }
    }
    let moduli: Vec<Int> = (0..g)
        .map(|_| match ring.modulus().and_then(Int::to_i64) {
            Some(m) => Int::from(*divisors(m).choose(rng).unwrap_or(&m)),
            None if torsion || rng.gen_bool(0.7) => Int::from(rng.gen_range(2..=b.max_entry.max(2))),
            None => Int::zero(),
        })
        .collect();
    FpModule::diagonal(ring, &moduli)
}

/// A uniformly chosen element of `Hom(src, tgt)` given on cell coordinates.
pub fn map<R: Rng>(src: &FpModule, tgt: &FpModule, rng: &mut R) -> ModuleMap {
    let h = hom_modules(src, tgt).expect("same ring");
    let t: Vec<Int> = h.module.diag().moduli.iter().map(|o| coordinate(o, rng)).collect();
    h.to_map(&t)
}

fn coordinate<R: Rng>(order: &Int, rng: &mut R) -> Int {
    match order.to_i64() {
        Some(0) | None => Int::from(rng.gen_range(-3..=3)),
        Some(o) => Int::from(rng.gen_range(0..o)),
    }
}

/// A random complex on `[lo, hi]`; each differential is a random map out of the
/// cokernel of the previous one.
pub fn complex<R: Rng>(ring: &Ring, rng: &mut R, lo: i64, hi: i64, b: &Bounds, torsion: bool) -> Complex {
    if hi < lo {
        return Complex::zero(ring);
    }
    let modules: Vec<FpModule> = (lo..=hi).map(|_| module(ring, rng, b, torsion)).collect();
    let mut diffs: Vec<ModuleMap> = Vec::new();
    for k in 0..modules.len().saturating_sub(1) {
        let prev = match diffs.last() {
            Some(d) => d.clone(),
            None => ModuleMap::zero(&FpModule::zero(ring), &modules[k]),
        };
        let (q, _) = cokernel(&prev);
        let f = map(&q, &modules[k + 1], rng);
        diffs.push(make_map(&modules[k], &modules[k + 1], f.matrix().clone()).expect("factors through the cokernel"));
    }
    Complex::new(ring, lo, modules, diffs.iter().map(|d| d.matrix().clone()).collect()).expect("d∘d = 0 by construction")
}

/// A random element of `Z^0 Hom(a, b)`, i.e. a random chain map.
pub fn chain_map<R: Rng>(a: &Complex, b: &Complex, rng: &mut R) -> ChainMap {
    let h = hom_complex(a, b).expect("same ring");
    let (z, inc) = kernel(&h.complex.d(0));
    let t: Vec<Int> = z.diag().moduli.iter().map(|o| coordinate(o, rng)).collect();
    let x = z.diag().psi.mul(&IntMatrix::column(t));
    let v = inc.matrix().mul(&x).reduced(a.ring());
    h.to_chain_map(&v.col_vec(0))
}

/// A pure acyclic complex: a sum of shifted cones of identities.
pub fn pure_acyclic<R: Rng>(ring: &Ring, rng: &mut R, lo: i64, hi: i64, b: &Bounds, torsion: bool) -> Complex {
    let pieces = rng.gen_range(1..=2);
    let mut parts = Vec::new();
    for _ in 0..pieces {
        let a = rng.gen_range(lo..=hi.max(lo));
        let w = rng.gen_range(0..=(hi - a).clamp(0, 1));
        let x = complex(ring, rng, a + 1, a + 1 + w - 1, b, torsion);
        let x = if x.is_zero() { Complex::concentrated(&module(ring, rng, b, torsion), a + 1) } else { x };
        parts.push(contractible_on(&x).0);
    }
    direct_sum_complexes(ring, &parts).complex
}

/// A random pure quasi-isomorphism: the inclusion of `m` into `m ⊕ P` twisted by a
/// random map into the contractible `P`, or the projection `m ⊕ P → m`.
pub fn pure_qis<R: Rng>(m: &Complex, rng: &mut R, b: &Bounds, torsion: bool) -> ChainMap {
    let ring = m.ring();
    let (lo, hi) = if m.is_zero() { (0, 1) } else { (m.lo(), m.hi()) };
    let p = pure_acyclic(ring, rng, lo, hi, b, torsion);
    let sum = direct_sum_complexes(ring, &[m.clone(), p.clone()]);
    // twist the inclusion by a random chain map into the contractible part
    let t = chain_map(m, &p, rng).then(&sum.injections[1]);
    if rng.gen_bool(0.5) {
        sum.injections[0].add(&t)
    } else {
        sum.projections[0].clone()
    }
}

/// The cone of a random chain map between two random complexes.
pub fn cone_complex<R: Rng>(ring: &Ring, rng: &mut R, lo: i64, hi: i64, b: &Bounds) -> Complex {
    let a = complex(ring, rng, lo + 1, hi, b, false);
    let c = complex(ring, rng, lo, hi, b, false);
    cone(&chain_map(&a, &c, rng)).complex
}

/// The exact complex `Ker f → A → B → Coker f` for a random `f : A → B`, starting at
/// degree `lo`; usually acyclic without being pure acyclic.
pub fn exact_complex<R: Rng>(ring: &Ring, rng: &mut R, lo: i64, b: &Bounds, torsion: bool) -> Complex {
    let a = module(ring, rng, b, torsion);
    let t = module(ring, rng, b, torsion);
    let f = map(&a, &t, rng);
    let (k, i) = kernel(&f);
    let (c, p) = cokernel(&f);
    let mods = vec![k, a, t, c];
    Complex::new(ring, lo, mods, vec![i.matrix().clone(), f.matrix().clone(), p.matrix().clone()]).expect("exact sequences are complexes")
}
