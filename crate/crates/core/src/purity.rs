//! Exact decision procedures for purity of monomorphisms, complexes and chain maps.
//!
//! Over ℤ and ℤ/m every finitely presented module is pure projective, so a pure
//! monomorphism between finitely presented modules splits and a pure acyclic complex
//! of them is contractible. The deciding witness is therefore a retraction or a
//! contracting homotopy; tensor probes serve as an independent necessary condition.

use crate::complexes::{cone, homology, tensor_complex, ChainMap, Complex, Homotopy};
use crate::error::{Error, Result};
use crate::exact_linalg::Ring;
use crate::fpmod::{extend_along, has_retraction, kernel, tensor_maps, tensor_modules, FpModule, ModuleMap};
use crate::int::Int;

/// Finitely presented test modules for the tensor criterion.
#[derive(Clone, Debug)]
pub struct ProbeBattery {
    pub ring: Ring,
    pub probes: Vec<FpModule>,
}

/// Over ℤ: `ℤ` and `ℤ/d` for `2 ≤ d ≤ bound`. Over ℤ/m: `ℤ/m` and `ℤ/d` for the
/// divisors `d > 1` of `m` (the bound is ignored).
pub fn probe_battery(ring: &Ring, bound: u64) -> ProbeBattery {
    let mut probes = vec![FpModule::free(ring, 1)];
    match ring.modulus().and_then(Int::to_i64) {
        Some(m) => {
            for d in 2..m {
                if m % d == 0 {
                    probes.push(FpModule::cyclic(ring, d));
                }
            }
        }
        None => {
            for d in 2..=bound.max(1) {
                probes.push(FpModule::cyclic(ring, Int::from(d as usize)));
            }
        }
    }
    ProbeBattery { ring: ring.clone(), probes }
}

/// The default battery for some complexes: over ℤ the bound is twice the largest
/// absolute value among invariant factors and differential entries.
pub fn battery_for(ring: &Ring, complexes: &[&Complex]) -> ProbeBattery {
    let mut top = Int::one();
    for c in complexes {
        for n in c.degrees() {
            let m = c.module(n);
            for x in m.invariant_factors().iter().chain(m.relations().entries()) {
                top = top.max(x.abs());
            }
            top = top.max(c.d(n).matrix().max_abs());
        }
    }
    let bound = (&top * &Int::from(2)).to_i64().unwrap_or(i64::MAX).clamp(2, 64);
    probe_battery(ring, bound as u64)
}

#[derive(Clone, Debug)]
pub enum PureWitness {
    /// `r ∘ f = id`.
    Retraction(ModuleMap),
    /// `d s + s d = id`.
    Contraction(Homotopy),
}

#[derive(Clone, Debug)]
pub enum ImpureWitness {
    /// Tensoring with `probe` breaks injectivity (for maps) or exactness at `degree`.
    Probe { probe: FpModule, degree: i64 },
    /// No probe in the battery detects the failure; the split system is unsolvable
    /// starting at `degree`.
    Unsolvable { degree: i64 },
}

#[derive(Clone, Debug)]
pub enum PurityVerdict {
    Pure(PureWitness),
    NotPure(ImpureWitness),
}

impl PurityVerdict {
    pub fn is_pure(&self) -> bool {
        matches!(self, PurityVerdict::Pure(_))
    }

    pub fn contraction(&self) -> Option<&Homotopy> {
        match self {
            PurityVerdict::Pure(PureWitness::Contraction(h)) => Some(h),
            _ => None,
        }
    }

    /// Re-checks a verdict about a complex from scratch.
    pub fn verify_complex(&self, m: &Complex) -> bool {
        match self {
            PurityVerdict::Pure(PureWitness::Contraction(h)) => h.src() == m && h.is_contraction(),
            PurityVerdict::Pure(PureWitness::Retraction(_)) => false,
            PurityVerdict::NotPure(ImpureWitness::Probe { probe, degree }) => {
                let t = tensor_complex(&Complex::concentrated(probe, 0), m).expect("same ring");
                !homology(&t.complex, *degree).is_zero()
            }
            PurityVerdict::NotPure(ImpureWitness::Unsolvable { .. }) => contract(m).is_err(),
        }
    }

    /// Re-checks a verdict about a monomorphism from scratch.
    pub fn verify_mono(&self, f: &ModuleMap) -> bool {
        match self {
            PurityVerdict::Pure(PureWitness::Retraction(r)) => f.then(r).equals(&ModuleMap::identity(f.src())),
            PurityVerdict::Pure(PureWitness::Contraction(_)) => false,
            PurityVerdict::NotPure(ImpureWitness::Probe { probe, .. }) => !tensor_probe_map(probe, f).is_injective(),
            PurityVerdict::NotPure(ImpureWitness::Unsolvable { .. }) => matches!(has_retraction(f), Ok(None)),
        }
    }
}

fn tensor_probe_map(n: &FpModule, f: &ModuleMap) -> ModuleMap {
    let src = tensor_modules(n, f.src()).expect("same ring");
    let tgt = tensor_modules(n, f.tgt()).expect("same ring");
    tensor_maps(&ModuleMap::identity(n), f, &src, &tgt)
}

/// A contracting homotopy of `m`, built degree by degree from the bottom; the error
/// is the first degree where none exists.
///
/// Any partial solution extends: if `s` solves the identity below degree `k`, then
/// `id − d s` kills the boundaries at `k` and so factors through `d^k` exactly when
/// the complex is contractible.
pub fn contract(m: &Complex) -> std::result::Result<Homotopy, i64> {
    let mut s: Vec<ModuleMap> = Vec::new();
    let mut prev = ModuleMap::zero(&m.module(m.lo()), &m.module(m.lo() - 1));
    for k in m.degrees() {
        let id = ModuleMap::identity(&m.module(k));
        let e = id.sub(&prev.then(&m.d(k - 1)));
        if k == m.hi() {
            if !e.is_zero() {
                return Err(k);
            }
            break;
        }
        let next = extend_along(&m.d(k), &e).ok_or(k)?;
        s.push(prev);
        prev = next;
    }
    s.push(prev);
    let lo = m.lo();
    Ok(Homotopy::from_maps(m, m, |n| s.get((n - lo) as usize).cloned().unwrap_or_else(|| ModuleMap::zero(&m.module(n), &m.module(n - 1)))))
}

pub fn is_pure_mono(f: &ModuleMap, battery: &ProbeBattery) -> Result<PurityVerdict> {
    if let Some(r) = has_retraction(f)? {
        return Ok(PurityVerdict::Pure(PureWitness::Retraction(r)));
    }
    for n in &battery.probes {
        if !tensor_probe_map(n, f).is_injective() {
            return Ok(PurityVerdict::NotPure(ImpureWitness::Probe { probe: n.clone(), degree: 0 }));
        }
    }
    Ok(PurityVerdict::NotPure(ImpureWitness::Unsolvable { degree: 0 }))
}

/// First battery probe `N` and degree where `N ⊗ M` fails to be exact.
pub fn failing_probe(m: &Complex, battery: &ProbeBattery) -> Option<(FpModule, i64)> {
    for n in &battery.probes {
        let t = tensor_complex(&Complex::concentrated(n, 0), m).expect("same ring").complex;
        if let Some(k) = t.degrees().find(|&k| !homology(&t, k).is_zero()) {
            return Some((n.clone(), k));
        }
    }
    None
}

pub fn is_pure_acyclic(m: &Complex, battery: &ProbeBattery) -> PurityVerdict {
    match contract(m) {
        Ok(h) => PurityVerdict::Pure(PureWitness::Contraction(h)),
        Err(degree) => match failing_probe(m, battery) {
            Some((probe, degree)) => PurityVerdict::NotPure(ImpureWitness::Probe { probe, degree }),
            None => PurityVerdict::NotPure(ImpureWitness::Unsolvable { degree }),
        },
    }
}

/// Purity of `Ker(d^n) → M^n`, defined when `H^n(M) = 0`.
pub fn is_pure_acyclic_at(m: &Complex, n: i64, battery: &ProbeBattery) -> Result<PurityVerdict> {
    if !homology(m, n).is_zero() {
        return Err(Error::NotAcyclicAt(n));
    }
    let d = m.d(n);
    if d.is_zero() {
        return Ok(PurityVerdict::Pure(PureWitness::Retraction(ModuleMap::identity(&m.module(n)))));
    }
    is_pure_mono(&kernel(&d).1, battery)
}

pub fn is_pure_qis(f: &ChainMap, battery: &ProbeBattery) -> PurityVerdict {
    is_pure_acyclic(&cone(f).complex, battery)
}
