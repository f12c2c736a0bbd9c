//! Pure injective and pure projective resolutions: bounded builders, lifting along
//! chain maps, semi-split towers and their (co)limits.

mod bounded;
mod tower;

pub use bounded::{
    injective_step_checks, lift_injective, lift_projective, projective_step_checks, resolve_injective_bounded_below,
    resolve_projective_bounded_above, StepCheck,
};
pub use tower::{
    colimit_tower, injective_tower, limit_tower, projective_tower, DirectLevel, InverseLevel, SemiSplitDirectTower,
    SemiSplitInverseTower,
};

use rand::Rng as _;

use crate::complexes::{cone, contractible_on, direct_sum_complexes, ChainMap, Complex, Homotopy};
use crate::error::{Error, Result};
use crate::exact_linalg::Ring;
use crate::purity::contract;
use crate::random::{self, Bounds};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Injective,
    Projective,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::Injective => "injective",
            Side::Projective => "projective",
        })
    }
}

/// A resolution map with everything needed to re-check it: `M → I` on the injective
/// side, `P → M` on the projective side.
#[derive(Clone, Debug)]
pub struct ResolutionCertificate {
    pub source: Complex,
    pub target: Complex,
    pub map: ChainMap,
    pub side: Side,
    /// Contraction of `cone(map)`.
    pub qis_witness: Homotopy,
    pub termwise_flags: Vec<(i64, bool)>,
}

pub(crate) fn flags(c: &Complex, side: Side) -> Vec<(i64, bool)> {
    c.degrees()
        .map(|n| {
            let m = c.module(n);
            (n, if side == Side::Injective { m.is_pure_injective() } else { m.is_pure_projective() })
        })
        .collect()
}

impl ResolutionCertificate {
    /// Builds a certificate, solving for the cone contraction.
    pub fn new(source: &Complex, target: &Complex, map: &ChainMap, side: Side) -> Result<ResolutionCertificate> {
        let c = cone(map).complex;
        let qis_witness = contract(&c)
            .map_err(|k| Error::InvalidCertificate(format!("cone of the resolution map is not contractible at degree {k}")))?;
        let cert = ResolutionCertificate {
            source: source.clone(),
            target: target.clone(),
            map: map.clone(),
            side,
            qis_witness,
            termwise_flags: flags(target, side),
        };
        cert.validate()?;
        Ok(cert)
    }

    /// The resolved complex `I` or `P`.
    pub fn resolved(&self) -> &Complex {
        &self.target
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |s: &str| Err(Error::InvalidCertificate(s.to_string()));
        self.map.validate().or_else(|_| bad("map is not a chain map"))?;
        let (from, to) = match self.side {
            Side::Injective => (&self.source, &self.target),
            Side::Projective => (&self.target, &self.source),
        };
        if self.map.src() != from || self.map.tgt() != to {
            return bad("map direction does not match the side");
        }
        let c = cone(&self.map).complex;
        if self.qis_witness.src() != &c || !self.qis_witness.is_contraction() {
            return bad("cone contraction does not validate");
        }
        if self.termwise_flags != flags(&self.target, self.side) || !self.termwise_flags.iter().all(|f| f.1) {
            return bad("target terms are not in the resolving class");
        }
        Ok(())
    }
}

pub(crate) fn check_injective_scope(m: &Complex) -> Result<()> {
    if m.ring().is_integers() {
        if let Some(n) = m.degrees().find(|&n| !m.module(n).is_torsion()) {
            return Err(Error::UnsupportedRing(format!(
                "pure injective hulls over Z leave finitely presented modules; degree {n} has a free part"
            )));
        }
    }
    Ok(())
}

/// Smallest tower depth at which [`resolve`] succeeds on the given side.
pub fn required_depth(m: &Complex, side: Side) -> usize {
    match side {
        Side::Injective => injective_depth(m),
        Side::Projective => projective_depth(m),
    }
}

pub(crate) fn injective_depth(m: &Complex) -> usize {
    if m.is_zero() {
        0
    } else {
        (-m.lo()).max(0) as usize
    }
}

pub(crate) fn projective_depth(m: &Complex) -> usize {
    if m.is_zero() {
        0
    } else {
        m.hi().max(0) as usize
    }
}

/// Resolves `m` on the given side: the bounded builder when the window allows it
/// (`lo ≥ 0` for injective, `hi ≤ 0` for projective), otherwise a tower of the given
/// depth followed by its (co)limit.
pub fn resolve(m: &Complex, side: Side, depth: usize) -> Result<ResolutionCertificate> {
    match side {
        Side::Injective => {
            check_injective_scope(m)?;
            if m.is_zero() || m.lo() >= 0 {
                return resolve_injective_bounded_below(m);
            }
            let required = injective_depth(m);
            if depth < required {
                return Err(Error::DepthInsufficient { required, given: depth });
            }
            let (t, fs) = injective_tower(m, depth)?;
            limit_tower(&t, &fs)
        }
        Side::Projective => {
            if m.is_zero() || m.hi() <= 0 {
                return resolve_projective_bounded_above(m);
            }
            let required = projective_depth(m);
            if depth < required {
                return Err(Error::DepthInsufficient { required, given: depth });
            }
            let (t, fs) = projective_tower(m, depth)?;
            colimit_tower(&t, &fs)
        }
    }
}

/// A second, differently presented resolution: [`resolve`] followed by adding a
/// random contractible summand to the target.
pub fn resolve_seeded(m: &Complex, side: Side, depth: usize, seed: u64) -> Result<ResolutionCertificate> {
    let r = resolve(m, side, depth)?;
    let ring: &Ring = m.ring();
    let mut rng = random::rng(seed);
    let (lo, hi) = if r.target.is_zero() { (0, 0) } else { (r.target.lo(), r.target.hi()) };
    let deg = rng.gen_range(lo..=hi);
    let x = random::module(ring, &mut rng, &Bounds::default(), side == Side::Injective);
    let e = contractible_on(&Complex::concentrated(&x, deg)).0;
    let sum = direct_sum_complexes(ring, &[r.target.clone(), e]);
    let map = match side {
        Side::Injective => r.map.then(&sum.injections[0]),
        Side::Projective => sum.projections[0].then(&r.map),
    };
    ResolutionCertificate::new(m, &sum.complex, &map, side)
}
