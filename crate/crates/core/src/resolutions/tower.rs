use std::collections::BTreeMap;

use crate::complexes::{cone, shift, sum_module, truncate_geq, truncate_leq, ChainMap, Complex, Homotopy};
use crate::error::{Error, Result};
use crate::exact_linalg::IntMatrix;
use crate::fpmod::{extend_along, factor_through_mono, make_map, FpModule, ModuleMap};
use crate::homotopy::{certify_k_pure_injective, certify_k_pure_projective, KPurityCertificate, KPurityRoute};
use crate::purity::{contract, probe_battery};

use super::{
    check_injective_scope, injective_depth, projective_depth, resolve_injective_bounded_below,
    resolve_projective_bounded_above, ResolutionCertificate, Side,
};

/// One level `I_n` of an inverse tower, resolving `τ≥−n M`.
#[derive(Clone, Debug)]
pub struct InverseLevel {
    pub truncation: Complex,
    pub complex: Complex,
    /// `f_n : τ≥−n M → I_n`.
    pub map: ChainMap,
    pub qis_witness: Homotopy,
    /// `τ≥−n M → τ≥−(n−1) M`, absent at level 0.
    pub canonical: Option<ChainMap>,
    /// `p_n : I_n → I_{n−1}`, absent at level 0.
    pub projection: Option<ChainMap>,
    /// Degreewise sections of `p_n`.
    pub sections: BTreeMap<i64, ModuleMap>,
    /// `K_n = Ker p_n = J[−1]`.
    pub kernel: Complex,
    pub kernel_inclusion: Option<ChainMap>,
    pub kernel_certificate: Option<KPurityCertificate>,
    /// `C_h = C_{−g}[−1]` as complexes, on the nose.
    pub cone_identity: bool,
}

/// A tower `I_N → … → I_0` with degreewise split surjections and K-pure injective
/// kernels.
#[derive(Clone, Debug)]
pub struct SemiSplitInverseTower {
    pub source: Complex,
    /// `q_n : M → τ≥−n M`.
    pub truncations: Vec<ChainMap>,
    pub levels: Vec<InverseLevel>,
}

/// One level `P_n` of a direct tower, resolving `τ≤n M`.
#[derive(Clone, Debug)]
pub struct DirectLevel {
    pub truncation: Complex,
    pub complex: Complex,
    /// `f_n : P_n → τ≤n M`.
    pub map: ChainMap,
    pub qis_witness: Homotopy,
    /// `τ≤(n−1) M → τ≤n M`, absent at level 0.
    pub canonical: Option<ChainMap>,
    /// `ι_n : P_{n−1} → P_n`, absent at level 0.
    pub injection: Option<ChainMap>,
    /// Degreewise retractions of `ι_n`.
    pub retractions: BTreeMap<i64, ModuleMap>,
    /// `C_n = Coker ι_n = J`.
    pub cokernel: Complex,
    pub cokernel_projection: Option<ChainMap>,
    pub cokernel_certificate: Option<KPurityCertificate>,
    /// `C_h = C_g` as complexes, on the nose.
    pub cone_identity: bool,
}

#[derive(Clone, Debug)]
pub struct SemiSplitDirectTower {
    pub source: Complex,
    /// `τ≤n M → M`.
    pub truncations: Vec<ChainMap>,
    pub levels: Vec<DirectLevel>,
}

fn block_map(src: &Complex, tgt: &Complex, r0: impl Fn(i64) -> usize, c0: impl Fn(i64) -> usize, size: impl Fn(i64) -> usize) -> Vec<(i64, IntMatrix)> {
    let lo = src.lo().min(tgt.lo());
    let hi = src.hi().max(tgt.hi());
    (lo..=hi)
        .map(|i| {
            let mut x = IntMatrix::zeros(tgt.module(i).generators(), src.module(i).generators());
            let k = size(i);
            if k > 0 {
                x.set_block(r0(i), c0(i), &IntMatrix::identity(k));
            }
            (i, x)
        })
        .collect()
}

fn chain_from_blocks(src: &Complex, tgt: &Complex, blocks: &[(i64, IntMatrix)]) -> ChainMap {
    ChainMap::from_fn(src, tgt, |i, _, _| blocks.iter().find(|b| b.0 == i).expect("degree in range").1.clone())
}

fn degreewise(src: &Complex, tgt: &Complex, blocks: &[(i64, IntMatrix)]) -> BTreeMap<i64, ModuleMap> {
    blocks
        .iter()
        .map(|(i, x)| (*i, ModuleMap::new_unchecked(&src.module(*i), &tgt.module(*i), x.clone())))
        .collect()
}

fn witness(map: &ChainMap) -> Result<Homotopy> {
    contract(&cone(map).complex).map_err(|k| Error::InvalidCertificate(format!("tower map is not a pure quasi-isomorphism (degree {k})")))
}

/// Whether `[a | b] : A ⊕ B → T` is an isomorphism.
fn jointly_iso(a: &ModuleMap, b: &ModuleMap) -> bool {
    let t = a.tgt();
    let src = sum_module(t.ring(), &[a.src().clone(), b.src().clone()]);
    let x = IntMatrix::hstack(&[a.matrix(), b.matrix()], t.generators());
    make_map(&src, t, x).map(|m| m.is_isomorphism()).unwrap_or(false)
}

/// The inverse tower over `τ≥−n M` for `n = 0..=depth`.
///
/// Level `n` takes `f : N = τ≥−n M → I_{n−1}`, resolves `g = (g', g'') : C_f → J`
/// and sets `I_n = C_{−g''}[−1]` with `h = (f, g') : N → I_n`. Levels whose
/// truncation did not change are copied with `J = 0`.
pub fn injective_tower(m: &Complex, depth: usize) -> Result<(SemiSplitInverseTower, Vec<ChainMap>)> {
    check_injective_scope(m)?;
    let ring = m.ring();
    let zero = Complex::zero(ring);
    let (n0, q0) = truncate_geq(m, 0);
    let r0 = resolve_injective_bounded_below(&n0)?;
    let mut truncations = vec![q0];
    let mut levels = vec![InverseLevel {
        truncation: n0,
        complex: r0.target,
        map: r0.map,
        qis_witness: r0.qis_witness,
        canonical: None,
        projection: None,
        sections: BTreeMap::new(),
        kernel: zero.clone(),
        kernel_inclusion: None,
        kernel_certificate: None,
        cone_identity: true,
    }];
    let battery = probe_battery(ring, 1);
    for n in 1..=depth as i64 {
        let prev = levels.last().expect("level 0 exists");
        let q_prev = truncations.last().expect("level 0 exists");
        let (nn, qn) = truncate_geq(m, -n);
        let c = ChainMap::from_maps(&nn, &prev.truncation, |i| {
            extend_along(&qn.component(i), &q_prev.component(i)).expect("truncations are quotients of M")
        });
        let f = c.then(&prev.map);
        let cf = cone(&f);
        let (j, g) = if c.is_isomorphism() {
            (zero.clone(), ChainMap::zero(&cf.complex, &zero))
        } else {
            let r = resolve_injective_bounded_below(&cf.complex)?;
            (r.target, r.map)
        };
        let g2 = cf.injection.then(&g);
        let ip = &prev.complex;
        let i_n = shift(&cone(&g2.neg()).complex, -1);
        let gi = |i: i64| ip.module(i).generators();
        let h = ChainMap::from_fn(&nn, &i_n, |i, s, t| {
            let mut x = IntMatrix::zeros(t.generators(), s.generators());
            x.set_block(0, 0, f.component(i).matrix());
            let gc = g.component(i - 1);
            x.set_block(gi(i), 0, &gc.matrix().block(0, 0, gc.tgt().generators(), s.generators()));
            x
        });
        let cone_identity = cone(&h).complex == shift(&cone(&g.neg()).complex, -1);
        let qis_witness = witness(&h)?;
        let p_blocks = block_map(&i_n, ip, |_| 0, |_| 0, gi);
        let s_blocks = block_map(ip, &i_n, |_| 0, |_| 0, gi);
        let kernel = shift(&j, -1);
        let k_blocks = block_map(&kernel, &i_n, gi, |_| 0, |i| j.module(i - 1).generators());
        let kernel_certificate = certify_k_pure_injective(&kernel, &battery, 0, 0);
        levels.push(InverseLevel {
            projection: Some(chain_from_blocks(&i_n, ip, &p_blocks)),
            sections: degreewise(ip, &i_n, &s_blocks),
            kernel_inclusion: Some(chain_from_blocks(&kernel, &i_n, &k_blocks)),
            kernel,
            kernel_certificate: Some(kernel_certificate),
            truncation: nn,
            complex: i_n,
            map: h,
            qis_witness,
            canonical: Some(c),
            cone_identity,
        });
        truncations.push(qn);
    }
    let fs = levels.iter().map(|l| l.map.clone()).collect();
    Ok((SemiSplitInverseTower { source: m.clone(), truncations, levels }, fs))
}

impl SemiSplitInverseTower {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    /// Re-checks every level: split surjections, kernels, certificates, the cone
    /// identity and compatibility `p_n f_n = f_{n−1} c_n`.
    pub fn validate(&self) -> Result<()> {
        let bad = |n: usize, s: &str| Err(Error::InvalidCertificate(format!("tower level {n}: {s}")));
        for (n, l) in self.levels.iter().enumerate() {
            if l.map.src() != &l.truncation || l.map.tgt() != &l.complex || l.map.validate().is_err() {
                return bad(n, "level map is malformed");
            }
            if l.qis_witness.src() != &cone(&l.map).complex || !l.qis_witness.is_contraction() {
                return bad(n, "level map is not a pure quasi-isomorphism");
            }
            if !l.cone_identity {
                return bad(n, "cone identity fails");
            }
            if !l.complex.is_termwise_pure_injective() {
                return bad(n, "terms are not pure injective");
            }
            if n == 0 {
                continue;
            }
            let prev = &self.levels[n - 1];
            let (Some(p), Some(inc), Some(cert), Some(c)) = (&l.projection, &l.kernel_inclusion, &l.kernel_certificate, &l.canonical) else {
                return bad(n, "missing tower data");
            };
            if p.validate().is_err() || inc.validate().is_err() || p.src() != &l.complex || p.tgt() != &prev.complex {
                return bad(n, "projection or kernel inclusion is not a chain map");
            }
            if !inc.then(p).is_zero() {
                return bad(n, "kernel does not map to zero");
            }
            for i in l.complex.degrees() {
                let s = l.sections.get(&i).cloned().unwrap_or_else(|| ModuleMap::zero(&prev.complex.module(i), &l.complex.module(i)));
                if !s.then(&p.component(i)).equals(&ModuleMap::identity(&prev.complex.module(i))) {
                    return bad(n, "section is not split");
                }
                if !jointly_iso(&inc.component(i), &s) {
                    return bad(n, "level is not degreewise split exact");
                }
            }
            if cert.subject != l.kernel || cert.route != KPurityRoute::ByBoundedInjective || cert.validate().is_err() {
                return bad(n, "kernel is not certified K-pure injective");
            }
            if !l.map.then(p).equals(&c.then(&prev.map)) {
                return bad(n, "tower maps are not compatible");
            }
        }
        Ok(())
    }
}

/// The limit of a tower deep enough to have stabilized: the top level, checked
/// against the degreewise formula `I^j = I_0^j ⊕ K_1^j ⊕ … ⊕ K_N^j`.
pub fn limit_tower(t: &SemiSplitInverseTower, fs: &[ChainMap]) -> Result<ResolutionCertificate> {
    let required = injective_depth(&t.source);
    if t.depth() < required {
        return Err(Error::DepthInsufficient { required, given: t.depth() });
    }
    if fs.len() != t.levels.len() || fs.iter().zip(&t.levels).any(|(f, l)| !f.equals(&l.map)) {
        return Err(Error::Input("maps do not belong to the tower".into()));
    }
    t.validate()?;
    let top = t.levels.last().expect("level 0 exists");
    let lo = t.levels.iter().filter(|l| !l.complex.is_zero()).map(|l| l.complex.lo()).min().unwrap_or(0);
    let hi = t.levels.iter().filter(|l| !l.complex.is_zero()).map(|l| l.complex.hi()).max().unwrap_or(-1);
    for j in lo..=hi {
        let mut parts = vec![t.levels[0].complex.module(j)];
        parts.extend(t.levels[1..].iter().map(|l| l.kernel.module(j)));
        if top.complex.module(j) != sum_module(t.source.ring(), &parts) {
            return Err(Error::InvalidCertificate(format!("limit term in degree {j} does not match the product formula")));
        }
    }
    let map = t.truncations.last().expect("level 0 exists").then(&top.map);
    ResolutionCertificate::new(&t.source, &top.complex, &map, Side::Injective)
}

/// The direct tower over `τ≤n M` for `n = 0..=depth`.
///
/// Level `n` takes `f : P_{n−1} → N = τ≤n M`, resolves `g = (α, β) : J → C_f` and
/// sets `P_n = C_α[−1]` with `h = (β, f) : P_n → N`.
pub fn projective_tower(m: &Complex, depth: usize) -> Result<(SemiSplitDirectTower, Vec<ChainMap>)> {
    let ring = m.ring();
    let zero = Complex::zero(ring);
    let (n0, i0) = truncate_leq(m, 0);
    let r0 = resolve_projective_bounded_above(&n0)?;
    let mut truncations = vec![i0];
    let mut levels = vec![DirectLevel {
        truncation: n0,
        complex: r0.target,
        map: r0.map,
        qis_witness: r0.qis_witness,
        canonical: None,
        injection: None,
        retractions: BTreeMap::new(),
        cokernel: zero.clone(),
        cokernel_projection: None,
        cokernel_certificate: None,
        cone_identity: true,
    }];
    let battery = probe_battery(ring, 1);
    for n in 1..=depth as i64 {
        let prev = levels.last().expect("level 0 exists");
        let i_prev = truncations.last().expect("level 0 exists");
        let (nn, i_n) = truncate_leq(m, n);
        let c = ChainMap::from_maps(&prev.truncation, &nn, |i| {
            factor_through_mono(&i_n.component(i), &i_prev.component(i)).expect("truncations are subcomplexes of M")
        });
        let f = prev.map.then(&c);
        let cf = cone(&f);
        let (j, g) = if c.is_isomorphism() {
            (zero.clone(), ChainMap::zero(&zero, &cf.complex))
        } else {
            let r = resolve_projective_bounded_above(&cf.complex)?;
            (r.target, r.map)
        };
        let pp = &prev.complex;
        let pshift = shift(pp, 1);
        let alpha = ChainMap::from_fn(&j, &pshift, |i, s, t| g.component(i).matrix().block(0, 0, t.generators(), s.generators()));
        let p_n = shift(&cone(&alpha).complex, -1);
        let gj = |i: i64| j.module(i).generators();
        let h = ChainMap::from_fn(&p_n, &nn, |i, s, t| {
            let mut x = IntMatrix::zeros(t.generators(), s.generators());
            x.set_block(0, 0, &g.component(i).matrix().block(pp.module(i + 1).generators(), 0, t.generators(), gj(i)));
            x.set_block(0, gj(i), f.component(i).matrix());
            x
        });
        let cone_identity = cone(&h).complex == cone(&g).complex;
        let qis_witness = witness(&h)?;
        let gp = |i: i64| pp.module(i).generators();
        let inj_blocks = block_map(pp, &p_n, gj, |_| 0, gp);
        let ret_blocks = block_map(&p_n, pp, |_| 0, gj, gp);
        let proj_blocks = block_map(&p_n, &j, |_| 0, |_| 0, gj);
        let cokernel_certificate = certify_k_pure_projective(&j, &battery, 0, 0);
        levels.push(DirectLevel {
            injection: Some(chain_from_blocks(pp, &p_n, &inj_blocks)),
            retractions: degreewise(&p_n, pp, &ret_blocks),
            cokernel_projection: Some(chain_from_blocks(&p_n, &j, &proj_blocks)),
            cokernel: j,
            cokernel_certificate: Some(cokernel_certificate),
            truncation: nn,
            complex: p_n,
            map: h,
            qis_witness,
            canonical: Some(c),
            cone_identity,
        });
        truncations.push(i_n);
    }
    let fs = levels.iter().map(|l| l.map.clone()).collect();
    Ok((SemiSplitDirectTower { source: m.clone(), truncations, levels }, fs))
}

impl SemiSplitDirectTower {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |n: usize, s: &str| Err(Error::InvalidCertificate(format!("tower level {n}: {s}")));
        for (n, l) in self.levels.iter().enumerate() {
            if l.map.src() != &l.complex || l.map.tgt() != &l.truncation || l.map.validate().is_err() {
                return bad(n, "level map is malformed");
            }
            if l.qis_witness.src() != &cone(&l.map).complex || !l.qis_witness.is_contraction() {
                return bad(n, "level map is not a pure quasi-isomorphism");
            }
            if !l.cone_identity {
                return bad(n, "cone identity fails");
            }
            if n == 0 {
                continue;
            }
            let prev = &self.levels[n - 1];
            let (Some(e), Some(q), Some(cert), Some(c)) = (&l.injection, &l.cokernel_projection, &l.cokernel_certificate, &l.canonical) else {
                return bad(n, "missing tower data");
            };
            if e.validate().is_err() || q.validate().is_err() || e.src() != &prev.complex || e.tgt() != &l.complex {
                return bad(n, "injection or cokernel projection is not a chain map");
            }
            if !e.then(q).is_zero() {
                return bad(n, "injection does not compose to zero with the cokernel");
            }
            for i in l.complex.degrees() {
                let r = l.retractions.get(&i).cloned().unwrap_or_else(|| ModuleMap::zero(&l.complex.module(i), &prev.complex.module(i)));
                if !e.component(i).then(&r).equals(&ModuleMap::identity(&prev.complex.module(i))) {
                    return bad(n, "retraction is not split");
                }
                // [ι | s] with s the section of the cokernel projection
                let s = ModuleMap::new_unchecked(
                    &l.cokernel.module(i),
                    &l.complex.module(i),
                    q.component(i).matrix().transpose(),
                );
                if !s.then(&q.component(i)).equals(&ModuleMap::identity(&l.cokernel.module(i))) || !jointly_iso(&e.component(i), &s) {
                    return bad(n, "level is not degreewise split exact");
                }
            }
            if cert.subject != l.cokernel || cert.route != KPurityRoute::ByBoundedProjective || cert.validate().is_err() {
                return bad(n, "cokernel is not certified K-pure projective");
            }
            if !e.then(&l.map).equals(&prev.map.then(c)) {
                return bad(n, "tower maps are not compatible");
            }
        }
        Ok(())
    }
}

/// The colimit of a stabilized direct tower: the top level, checked against
/// `P^j = C_N^j ⊕ … ⊕ C_1^j ⊕ P_0^j`.
pub fn colimit_tower(t: &SemiSplitDirectTower, fs: &[ChainMap]) -> Result<ResolutionCertificate> {
    let required = projective_depth(&t.source);
    if t.depth() < required {
        return Err(Error::DepthInsufficient { required, given: t.depth() });
    }
    if fs.len() != t.levels.len() || fs.iter().zip(&t.levels).any(|(f, l)| !f.equals(&l.map)) {
        return Err(Error::Input("maps do not belong to the tower".into()));
    }
    t.validate()?;
    let top = t.levels.last().expect("level 0 exists");
    let lo = t.levels.iter().filter(|l| !l.complex.is_zero()).map(|l| l.complex.lo()).min().unwrap_or(0);
    let hi = t.levels.iter().filter(|l| !l.complex.is_zero()).map(|l| l.complex.hi()).max().unwrap_or(-1);
    for j in lo..=hi {
        let mut parts: Vec<FpModule> = t.levels[1..].iter().rev().map(|l| l.cokernel.module(j)).collect();
        parts.push(t.levels[0].complex.module(j));
        if top.complex.module(j) != sum_module(t.source.ring(), &parts) {
            return Err(Error::InvalidCertificate(format!("colimit term in degree {j} does not match the sum formula")));
        }
    }
    let map = top.map.then(t.truncations.last().expect("level 0 exists"));
    ResolutionCertificate::new(&t.source, &top.complex, &map, Side::Projective)
}
