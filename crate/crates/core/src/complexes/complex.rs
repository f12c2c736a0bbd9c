use std::fmt;
use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::exact_linalg::{IntMatrix, Ring};
use crate::fpmod::{make_map, FpModule, ModuleMap};
use crate::int::Int;

/// A cochain complex supported on the window `[lo, hi]`; every term outside the
/// window is zero. Zero terms at either end of the window are trimmed away, so two
/// complexes compare equal iff their windows, presentations and differentials agree.
#[derive(Clone, PartialEq, Eq)]
pub struct Complex {
    ring: Ring,
    lo: i64,
    modules: Vec<FpModule>,
    /// `diffs[k] : modules[k] → modules[k + 1]`.
    diffs: Vec<ModuleMap>,
}

impl Complex {
    pub fn zero(ring: &Ring) -> Complex {
        Complex { ring: ring.clone(), lo: 0, modules: Vec::new(), diffs: Vec::new() }
    }

    /// `m` placed in a single degree.
    pub fn concentrated(m: &FpModule, degree: i64) -> Complex {
        Complex::from_maps(m.ring(), degree, vec![m.clone()], Vec::new())
    }

    /// Validated constructor: differentials are given as matrices on generators.
    pub fn new(ring: &Ring, lo: i64, modules: Vec<FpModule>, diffs: Vec<IntMatrix>) -> Result<Complex> {
        if diffs.len() + 1 != modules.len().max(1) {
            return Err(Error::Shape(format!("{} modules need {} differentials, got {}", modules.len(), modules.len().saturating_sub(1), diffs.len())));
        }
        for m in &modules {
            if m.ring() != ring {
                return Err(Error::RingMismatch(ring.to_string(), m.ring().to_string()));
            }
        }
        let mut maps = Vec::with_capacity(diffs.len());
        for (k, d) in diffs.into_iter().enumerate() {
            maps.push(make_map(&modules[k], &modules[k + 1], d)?);
        }
        for k in 1..maps.len() {
            if !maps[k - 1].then(&maps[k]).is_zero() {
                return Err(Error::NotComplex(lo + k as i64 - 1));
            }
        }
        Ok(Complex::from_maps(ring, lo, modules, maps))
    }

    /// Assembles a complex from maps already known to be well defined.
    pub(crate) fn from_maps(ring: &Ring, lo: i64, mut modules: Vec<FpModule>, mut diffs: Vec<ModuleMap>) -> Complex {
        debug_assert_eq!(diffs.len() + 1, modules.len().max(1));
        debug_assert!((1..diffs.len()).all(|k| diffs[k - 1].then(&diffs[k]).is_zero()), "d∘d ≠ 0");
        let mut lo = lo;
        while !modules.is_empty() && modules[modules.len() - 1].is_zero() {
            modules.pop();
            diffs.pop();
        }
        let lead = modules.iter().take_while(|m| m.is_zero()).count();
        if lead > 0 {
            modules.drain(..lead);
            diffs.drain(..lead.min(diffs.len()));
            lo += lead as i64;
        }
        if modules.is_empty() {
            return Complex::zero(ring);
        }
        Complex { ring: ring.clone(), lo, modules, diffs }
    }

    /// Builds the complex on `[lo, hi]` from per-degree modules and a differential
    /// function `n ↦ d^n` (called only when both ends have generators).
    pub(crate) fn build(
        ring: &Ring,
        lo: i64,
        hi: i64,
        module: impl Fn(i64) -> FpModule,
        mut diff: impl FnMut(i64, &FpModule, &FpModule) -> IntMatrix,
    ) -> Complex {
        if hi < lo {
            return Complex::zero(ring);
        }
        let modules: Vec<FpModule> = (lo..=hi).map(module).collect();
        let diffs = (lo..hi)
            .map(|n| {
                let (s, t) = (&modules[(n - lo) as usize], &modules[(n - lo + 1) as usize]);
                if s.generators() == 0 || t.generators() == 0 {
                    ModuleMap::zero(s, t)
                } else {
                    ModuleMap::new_unchecked(s, t, diff(n, s, t))
                }
            })
            .collect();
        Complex::from_maps(ring, lo, modules, diffs)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Top of the window; `lo - 1` for the zero complex.
    pub fn hi(&self) -> i64 {
        self.lo + self.modules.len() as i64 - 1
    }

    pub fn degrees(&self) -> RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    pub fn width(&self) -> usize {
        self.modules.len()
    }

    pub fn is_zero(&self) -> bool {
        self.modules.is_empty()
    }

    pub fn module(&self, n: i64) -> FpModule {
        if self.degrees().contains(&n) {
            self.modules[(n - self.lo) as usize].clone()
        } else {
            FpModule::zero(&self.ring)
        }
    }

    pub fn modules(&self) -> &[FpModule] {
        &self.modules
    }

    /// `d^n : M^n → M^{n+1}`.
    pub fn d(&self, n: i64) -> ModuleMap {
        if n >= self.lo && n < self.hi() {
            self.diffs[(n - self.lo) as usize].clone()
        } else {
            ModuleMap::zero(&self.module(n), &self.module(n + 1))
        }
    }

    /// Sum of generator counts over the window.
    pub fn size(&self) -> usize {
        self.modules.iter().map(FpModule::generators).sum()
    }

    /// Every term is pure injective.
    pub fn is_termwise_pure_injective(&self) -> bool {
        self.modules.iter().all(FpModule::is_pure_injective)
    }

    pub fn is_termwise_pure_projective(&self) -> bool {
        self.modules.iter().all(FpModule::is_pure_projective)
    }

    /// Re-runs the `d∘d = 0` and well-definedness checks.
    pub fn validate(&self) -> Result<()> {
        for (k, d) in self.diffs.iter().enumerate() {
            make_map(d.src(), d.tgt(), d.matrix().clone())?;
            if k + 1 < self.diffs.len() && !d.then(&self.diffs[k + 1]).is_zero() {
                return Err(Error::NotComplex(self.lo + k as i64));
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for n in self.degrees() {
            write!(f, "[{n}] {}", self.module(n))?;
            if n < self.hi() {
                write!(f, " --{:?}--> ", self.d(n).matrix())?;
            }
        }
        Ok(())
    }
}

/// A degreewise family `f^n : src^n → tgt^{n+shift}`; chain maps have shift 0 and
/// homotopies shift −1.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedMap {
    src: Complex,
    tgt: Complex,
    shift: i64,
    lo: i64,
    comps: Vec<ModuleMap>,
}

impl GradedMap {
    pub(crate) fn from_fn(src: &Complex, tgt: &Complex, shift: i64, mut f: impl FnMut(i64, &FpModule, &FpModule) -> IntMatrix) -> GradedMap {
        let lo = src.lo().max(tgt.lo() - shift);
        let hi = src.hi().min(tgt.hi() - shift);
        let comps = (lo..=hi)
            .map(|n| {
                let (s, t) = (src.module(n), tgt.module(n + shift));
                if s.generators() == 0 || t.generators() == 0 {
                    ModuleMap::zero(&s, &t)
                } else {
                    ModuleMap::new_unchecked(&s, &t, f(n, &s, &t))
                }
            })
            .collect();
        GradedMap { src: src.clone(), tgt: tgt.clone(), shift, lo, comps }
    }

    pub(crate) fn from_maps(src: &Complex, tgt: &Complex, shift: i64, mut f: impl FnMut(i64) -> ModuleMap) -> GradedMap {
        let lo = src.lo().max(tgt.lo() - shift);
        let hi = src.hi().min(tgt.hi() - shift);
        let comps = (lo..=hi)
            .map(|n| {
                let m = f(n);
                debug_assert!(m.src() == &src.module(n) && m.tgt() == &tgt.module(n + shift));
                m
            })
            .collect();
        GradedMap { src: src.clone(), tgt: tgt.clone(), shift, lo, comps }
    }

    fn checked(src: &Complex, tgt: &Complex, shift: i64, lo: i64, mats: Vec<IntMatrix>) -> Result<GradedMap> {
        let mut by_degree = Vec::new();
        for (k, m) in mats.into_iter().enumerate() {
            let n = lo + k as i64;
            let (s, t) = (src.module(n), tgt.module(n + shift));
            if m.shape() == (0, 0) && (s.generators() == 0 || t.generators() == 0) {
                continue;
            }
            by_degree.push((n, make_map(&s, &t, m)?));
        }
        let g = GradedMap::from_maps(src, tgt, shift, |n| {
            by_degree.iter().find(|(k, _)| *k == n).map(|(_, m)| m.clone()).unwrap_or_else(|| ModuleMap::zero(&src.module(n), &tgt.module(n + shift)))
        });
        for (n, m) in &by_degree {
            if !g.component(*n).equals(m) {
                return Err(Error::Shape(format!("component at degree {n} lies outside the common window")));
            }
        }
        Ok(g)
    }

    pub fn src(&self) -> &Complex {
        &self.src
    }

    pub fn tgt(&self) -> &Complex {
        &self.tgt
    }

    pub fn component(&self, n: i64) -> ModuleMap {
        let k = n - self.lo;
        if k >= 0 && (k as usize) < self.comps.len() {
            self.comps[k as usize].clone()
        } else {
            ModuleMap::zero(&self.src.module(n), &self.tgt.module(n + self.shift))
        }
    }

    /// Degrees where the component can be nonzero.
    pub fn support(&self) -> RangeInclusive<i64> {
        self.lo..=self.lo + self.comps.len() as i64 - 1
    }

    fn zip(&self, other: &GradedMap, op: impl Fn(&ModuleMap, &ModuleMap) -> ModuleMap) -> GradedMap {
        assert!(self.src == other.src && self.tgt == other.tgt && self.shift == other.shift, "maps between different complexes");
        GradedMap::from_maps(&self.src, &self.tgt, self.shift, |n| op(&self.component(n), &other.component(n)))
    }

    fn map(&self, op: impl Fn(&ModuleMap) -> ModuleMap) -> GradedMap {
        GradedMap::from_maps(&self.src, &self.tgt, self.shift, |n| op(&self.component(n)))
    }

    fn equals(&self, other: &GradedMap) -> bool {
        self.src == other.src
            && self.tgt == other.tgt
            && self.shift == other.shift
            && self.support().chain(other.support()).all(|n| self.component(n).equals(&other.component(n)))
    }

    /// Composite `other ∘ self`.
    fn then(&self, other: &GradedMap) -> GradedMap {
        assert!(self.tgt == other.src, "maps are not composable");
        GradedMap::from_maps(&self.src, &other.tgt, self.shift + other.shift, |n| self.component(n).then(&other.component(n + self.shift)))
    }
}

/// A morphism of complexes.
#[derive(Clone, PartialEq, Eq)]
pub struct ChainMap(GradedMap);

impl ChainMap {
    /// Validated constructor from matrices for degrees `lo, lo+1, …`.
    pub fn new(src: &Complex, tgt: &Complex, lo: i64, mats: Vec<IntMatrix>) -> Result<ChainMap> {
        let f = ChainMap(GradedMap::checked(src, tgt, 0, lo, mats)?);
        f.validate()?;
        Ok(f)
    }

    pub(crate) fn from_fn(src: &Complex, tgt: &Complex, f: impl FnMut(i64, &FpModule, &FpModule) -> IntMatrix) -> ChainMap {
        let out = ChainMap(GradedMap::from_fn(src, tgt, 0, f));
        debug_assert!(out.validate().is_ok(), "not a chain map");
        out
    }

    pub(crate) fn from_maps(src: &Complex, tgt: &Complex, f: impl FnMut(i64) -> ModuleMap) -> ChainMap {
        let out = ChainMap(GradedMap::from_maps(src, tgt, 0, f));
        debug_assert!(out.validate().is_ok(), "not a chain map");
        out
    }

    pub fn identity(c: &Complex) -> ChainMap {
        ChainMap::from_maps(c, c, |n| ModuleMap::identity(&c.module(n)))
    }

    pub fn zero(src: &Complex, tgt: &Complex) -> ChainMap {
        ChainMap::from_maps(src, tgt, |n| ModuleMap::zero(&src.module(n), &tgt.module(n)))
    }

    pub fn src(&self) -> &Complex {
        self.0.src()
    }

    pub fn tgt(&self) -> &Complex {
        self.0.tgt()
    }

    pub fn ring(&self) -> &Ring {
        self.src().ring()
    }

    pub fn component(&self, n: i64) -> ModuleMap {
        self.0.component(n)
    }

    pub fn support(&self) -> RangeInclusive<i64> {
        self.0.support()
    }

    /// Checks `f^{n+1} ∘ d^n = d^n ∘ f^n` everywhere.
    pub fn validate(&self) -> Result<()> {
        let lo = self.src().lo().min(self.tgt().lo()) - 1;
        let hi = self.src().hi().max(self.tgt().hi());
        for n in lo..=hi {
            let a = self.src().d(n).then(&self.component(n + 1));
            let b = self.component(n).then(&self.tgt().d(n));
            if !a.equals(&b) {
                return Err(Error::NotChainMap(n));
            }
        }
        Ok(())
    }

    /// Composite `other ∘ self`.
    pub fn then(&self, other: &ChainMap) -> ChainMap {
        ChainMap(self.0.then(&other.0))
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        ChainMap(self.0.zip(&other.0, ModuleMap::add))
    }

    pub fn sub(&self, other: &ChainMap) -> ChainMap {
        ChainMap(self.0.zip(&other.0, ModuleMap::sub))
    }

    pub fn neg(&self) -> ChainMap {
        ChainMap(self.0.map(ModuleMap::neg))
    }

    pub fn scale(&self, c: &Int) -> ChainMap {
        ChainMap(self.0.map(|m| m.scale(c)))
    }

    /// Equality of components modulo relations.
    pub fn equals(&self, other: &ChainMap) -> bool {
        self.0.equals(&other.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.comps.iter().all(ModuleMap::is_zero)
    }

    /// Every component is an isomorphism.
    pub fn is_isomorphism(&self) -> bool {
        let lo = self.src().lo().min(self.tgt().lo());
        let hi = self.src().hi().max(self.tgt().hi());
        (lo..=hi).all(|n| self.component(n).is_isomorphism())
    }
}

impl fmt::Debug for ChainMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut l = f.debug_map();
        for n in self.support() {
            l.entry(&n, self.component(n).matrix());
        }
        l.finish()
    }
}

/// A degree −1 family `s^n : src^n → tgt^{n−1}`.
#[derive(Clone, PartialEq, Eq)]
pub struct Homotopy(GradedMap);

impl Homotopy {
    /// Validated constructor from matrices for degrees `lo, lo+1, …`.
    pub fn new(src: &Complex, tgt: &Complex, lo: i64, mats: Vec<IntMatrix>) -> Result<Homotopy> {
        Ok(Homotopy(GradedMap::checked(src, tgt, -1, lo, mats)?))
    }

    pub(crate) fn from_maps(src: &Complex, tgt: &Complex, f: impl FnMut(i64) -> ModuleMap) -> Homotopy {
        Homotopy(GradedMap::from_maps(src, tgt, -1, f))
    }

    pub(crate) fn from_fn(src: &Complex, tgt: &Complex, f: impl FnMut(i64, &FpModule, &FpModule) -> IntMatrix) -> Homotopy {
        Homotopy(GradedMap::from_fn(src, tgt, -1, f))
    }

    pub fn zero(src: &Complex, tgt: &Complex) -> Homotopy {
        Homotopy::from_maps(src, tgt, |n| ModuleMap::zero(&src.module(n), &tgt.module(n - 1)))
    }

    pub fn src(&self) -> &Complex {
        self.0.src()
    }

    pub fn tgt(&self) -> &Complex {
        self.0.tgt()
    }

    /// `s^n : src^n → tgt^{n−1}`.
    pub fn component(&self, n: i64) -> ModuleMap {
        self.0.component(n)
    }

    pub fn support(&self) -> RangeInclusive<i64> {
        self.0.support()
    }

    /// The degreewise map `d s + s d`.
    pub fn boundary(&self) -> ChainMap {
        let (src, tgt) = (self.src(), self.tgt());
        ChainMap(GradedMap::from_maps(src, tgt, 0, |n| {
            let a = self.component(n).then(&tgt.d(n - 1));
            let b = src.d(n).then(&self.component(n + 1));
            a.add(&b)
        }))
    }

    /// Whether `f − g = d s + s d`.
    pub fn witnesses(&self, f: &ChainMap, g: &ChainMap) -> bool {
        if f.src() != self.src() || f.tgt() != self.tgt() || g.src() != self.src() || g.tgt() != self.tgt() {
            return false;
        }
        f.sub(g).equals(&self.boundary())
    }

    /// Whether `d s + s d = id`.
    pub fn is_contraction(&self) -> bool {
        self.src() == self.tgt() && self.boundary().equals(&ChainMap::identity(self.src()))
    }

    /// Homotopy for `f ∘ h` pre-composed with a chain map.
    pub fn precompose(&self, f: &ChainMap) -> Homotopy {
        Homotopy(f.0.then(&self.0))
    }

    /// Homotopy for `h` post-composed with a chain map.
    pub fn postcompose(&self, f: &ChainMap) -> Homotopy {
        Homotopy(self.0.then(&f.0))
    }

    pub fn add(&self, other: &Homotopy) -> Homotopy {
        Homotopy(self.0.zip(&other.0, ModuleMap::add))
    }

    pub fn neg(&self) -> Homotopy {
        Homotopy(self.0.map(ModuleMap::neg))
    }
}

impl fmt::Debug for Homotopy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut l = f.debug_map();
        for n in self.support() {
            l.entry(&n, self.component(n).matrix());
        }
        l.finish()
    }
}
