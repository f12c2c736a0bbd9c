use crate::exact_linalg::{IntMatrix, Ring};
use crate::fpmod::{cokernel, direct_sum, factor_through_mono, kernel, minimize, FpModule, ModuleMap};
use crate::int::Int;

use super::{ChainMap, Complex, Homotopy};

pub(crate) fn sign(n: i64) -> Int {
    if n.rem_euclid(2) == 0 {
        Int::one()
    } else {
        Int::from(-1)
    }
}

pub(crate) fn sum_module(ring: &Ring, parts: &[FpModule]) -> FpModule {
    direct_sum(ring, parts).expect("summands share the ring").module
}

/// `M[n]`: `M[n]^i = M^{i+n}` with differential `(−1)^n d`.
pub fn shift(m: &Complex, n: i64) -> Complex {
    let s = sign(n);
    let modules = m.modules().to_vec();
    let diffs = m.degrees().take(m.width().saturating_sub(1)).map(|i| m.d(i).scale(&s)).collect();
    Complex::from_maps(m.ring(), m.lo() - n, modules, diffs)
}

/// `f[n]` between the shifted complexes; components are unchanged.
pub fn shift_map(f: &ChainMap, n: i64) -> ChainMap {
    let (src, tgt) = (shift(f.src(), n), shift(f.tgt(), n));
    ChainMap::from_maps(&src, &tgt, |i| f.component(i + n))
}

/// Mapping cone `C^i = src^{i+1} ⊕ tgt^i` with `d = [[−d, 0], [f, d]]`.
#[derive(Clone, Debug)]
pub struct Cone {
    pub complex: Complex,
    /// `tgt → C`, `y ↦ (0, y)`.
    pub injection: ChainMap,
    /// `C → src[1]`, `(x, y) ↦ x`.
    pub projection: ChainMap,
}

pub fn cone(f: &ChainMap) -> Cone {
    let (src, tgt) = (f.src(), f.tgt());
    let ring = f.ring();
    let lo = (src.lo() - 1).min(tgt.lo());
    let hi = (src.hi() - 1).max(tgt.hi());
    let gs = |n: i64| src.module(n).generators();
    let gt = |n: i64| tgt.module(n).generators();
    let complex = Complex::build(
        ring,
        lo,
        hi,
        |i| sum_module(ring, &[src.module(i + 1), tgt.module(i)]),
        |i, s, t| {
            let mut d = IntMatrix::zeros(t.generators(), s.generators());
            d.set_block(0, 0, &src.d(i + 1).matrix().neg());
            d.set_block(gs(i + 2), 0, f.component(i + 1).matrix());
            d.set_block(gs(i + 2), gs(i + 1), tgt.d(i).matrix());
            d
        },
    );
    let injection = ChainMap::from_fn(tgt, &complex, |i, _, c| {
        let mut m = IntMatrix::zeros(c.generators(), gt(i));
        m.set_block(gs(i + 1), 0, &IntMatrix::identity(gt(i)));
        m
    });
    let shifted = shift(src, 1);
    let projection = ChainMap::from_fn(&complex, &shifted, |i, c, _| {
        let mut m = IntMatrix::zeros(gs(i + 1), c.generators());
        m.set_block(0, 0, &IntMatrix::identity(gs(i + 1)));
        m
    });
    Cone { complex, injection, projection }
}

/// `τ≥n M` with the canonical surjection `M → τ≥n M`.
pub fn truncate_geq(m: &Complex, n: i64) -> (Complex, ChainMap) {
    let ring = m.ring();
    let below = m.d(n - 1);
    let top = if below.is_zero() { m.module(n) } else { cokernel(&below).0 };
    let lo = n.max(m.lo());
    let t = Complex::build(ring, lo, m.hi(), |i| if i == n { top.clone() } else if i > n { m.module(i) } else { FpModule::zero(ring) }, |i, _, _| m.d(i).matrix().clone());
    let p = ChainMap::from_fn(m, &t, |i, s, _| if i >= n { IntMatrix::identity(s.generators()) } else { unreachable!() });
    (t, p)
}

/// `τ≤n M` with the canonical inclusion `τ≤n M → M`.
pub fn truncate_leq(m: &Complex, n: i64) -> (Complex, ChainMap) {
    let ring = m.ring();
    if n >= m.hi() {
        return (m.clone(), ChainMap::identity(m));
    }
    let dn = m.d(n);
    let (k, inc) = if dn.is_zero() { (m.module(n), ModuleMap::identity(&m.module(n))) } else { kernel(&dn) };
    let hi = n.min(m.hi());
    let below = if n - 1 >= m.lo() { factor_through_mono(&inc, &m.d(n - 1)) } else { None };
    let t = Complex::build(
        ring,
        m.lo(),
        hi,
        |i| if i == n { k.clone() } else if i < n { m.module(i) } else { FpModule::zero(ring) },
        |i, _, _| if i == n - 1 { below.as_ref().expect("image lies in the kernel").matrix().clone() } else { m.d(i).matrix().clone() },
    );
    let i = ChainMap::from_fn(&t, m, |i, s, _| if i == n { inc.matrix().clone() } else { IntMatrix::identity(s.generators()) });
    (t, i)
}

/// `τ≤n f : τ≤n A → τ≤n B`, induced on the kernel-topped truncations.
pub fn truncate_leq_map(f: &ChainMap, n: i64) -> ChainMap {
    let (ts, is) = truncate_leq(f.src(), n);
    let (tt, it) = truncate_leq(f.tgt(), n);
    ChainMap::from_maps(&ts, &tt, |i| {
        factor_through_mono(&it.component(i), &is.component(i).then(&f.component(i))).expect("cycles map to cycles")
    })
}

/// `H^n` as a submodule quotient: cycles, their inclusion, and the projection to `H^n`.
#[derive(Clone, Debug)]
pub struct HomologyData {
    pub module: FpModule,
    pub cycles: FpModule,
    pub inclusion: ModuleMap,
    pub projection: ModuleMap,
}

pub fn homology_data(m: &Complex, n: i64) -> HomologyData {
    let (cycles, inclusion) = kernel(&m.d(n));
    let b = factor_through_mono(&inclusion, &m.d(n - 1)).expect("boundaries are cycles");
    let (module, projection) = cokernel(&b);
    HomologyData { module, cycles, inclusion, projection }
}

/// `H^n(M)` in invariant-factor form.
pub fn homology(m: &Complex, n: i64) -> FpModule {
    minimize(&homology_data(m, n).module).0
}

pub fn is_acyclic(m: &Complex) -> bool {
    m.degrees().all(|n| homology_data(m, n).module.is_zero())
}

/// `H^n(f) : H^n(src) → H^n(tgt)` on the presentations of [`homology_data`].
pub fn induced_on_homology(f: &ChainMap, n: i64) -> (HomologyData, HomologyData, ModuleMap) {
    let hs = homology_data(f.src(), n);
    let ht = homology_data(f.tgt(), n);
    let z = factor_through_mono(&ht.inclusion, &hs.inclusion.then(&f.component(n))).expect("cycles map to cycles");
    let m = crate::fpmod::make_map(&hs.module, &ht.module, z.then(&ht.projection).matrix().clone()).expect("boundaries map to boundaries");
    (hs, ht, m)
}

/// Whether `f` induces isomorphisms on all homology.
pub fn is_quasi_isomorphism(f: &ChainMap) -> bool {
    let lo = f.src().lo().min(f.tgt().lo());
    let hi = f.src().hi().max(f.tgt().hi());
    (lo..=hi).all(|n| induced_on_homology(f, n).2.is_isomorphism())
}

/// Degreewise direct sum with its structure maps.
#[derive(Clone, Debug)]
pub struct ComplexSum {
    pub complex: Complex,
    pub injections: Vec<ChainMap>,
    pub projections: Vec<ChainMap>,
}

pub fn direct_sum_complexes(ring: &Ring, parts: &[Complex]) -> ComplexSum {
    let lo = parts.iter().filter(|c| !c.is_zero()).map(Complex::lo).min().unwrap_or(0);
    let hi = parts.iter().filter(|c| !c.is_zero()).map(Complex::hi).max().unwrap_or(-1);
    let mods = |i: i64| parts.iter().map(|c| c.module(i)).collect::<Vec<_>>();
    let complex = Complex::build(ring, lo, hi, |i| sum_module(ring, &mods(i)), |i, _, _| {
        let ds: Vec<ModuleMap> = parts.iter().map(|c| c.d(i)).collect();
        IntMatrix::block_diag(&ds.iter().map(ModuleMap::matrix).collect::<Vec<_>>())
    });
    let offsets = |i: i64, k: usize| parts[..k].iter().map(|c| c.module(i).generators()).sum::<usize>();
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    for (k, c) in parts.iter().enumerate() {
        injections.push(ChainMap::from_fn(c, &complex, |i, s, t| {
            let mut m = IntMatrix::zeros(t.generators(), s.generators());
            m.set_block(offsets(i, k), 0, &IntMatrix::identity(s.generators()));
            m
        }));
        projections.push(ChainMap::from_fn(&complex, c, |i, s, t| {
            let mut m = IntMatrix::zeros(t.generators(), s.generators());
            m.set_block(0, offsets(i, k), &IntMatrix::identity(t.generators()));
            m
        }));
    }
    ComplexSum { complex, injections, projections }
}

/// `cone(id_X)` shifted so that it is supported near `X`: the standard contractible
/// complex, together with its canonical contraction.
pub fn contractible_on(x: &Complex) -> (Complex, Homotopy) {
    let c = cone(&ChainMap::identity(x));
    let complex = c.complex;
    let gx = |n: i64| x.module(n).generators();
    // s(a, b) = (b, 0) : C^i = X^{i+1} ⊕ X^i → C^{i−1} = X^i ⊕ X^{i−1}
    let h = Homotopy::from_fn(&complex, &complex, |i, s, t| {
        let mut m = IntMatrix::zeros(t.generators(), s.generators());
        m.set_block(0, gx(i + 1), &IntMatrix::identity(gx(i)));
        m
    });
    debug_assert!(h.is_contraction());
    (complex, h)
}
