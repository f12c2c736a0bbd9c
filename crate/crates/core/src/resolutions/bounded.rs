use crate::complexes::{
    cone, hom_complex, hom_map, induced_on_homology, shift, tensor_complex, tensor_map, ChainMap, Complex, Homotopy,
};
use crate::error::{Error, Result};
use crate::exact_linalg::IntMatrix;
use crate::fpmod::{cokernel, factor_through_mono, kernel, make_map, minimize, pullback, pushout, FpModule, ModuleMap};
use crate::purity::ProbeBattery;

use super::{check_injective_scope, ResolutionCertificate, Side};

fn map_into(src: &Complex, tgt: &Complex, comps: &[ModuleMap], lo: i64) -> ChainMap {
    ChainMap::from_maps(src, tgt, |n| {
        let (s, t) = (src.module(n), tgt.module(n));
        let k = n - lo;
        match comps.get(k as usize) {
            Some(m) if k >= 0 && s.generators() > 0 && t.generators() > 0 => ModuleMap::new_unchecked(&s, &t, m.matrix().clone()),
            _ => ModuleMap::zero(&s, &t),
        }
    })
}

/// The pushout induction: `I^lo = M^lo`, and for each `k` the pushout `C^k` of
/// `M^{k−1} → M^k` and `M^{k−1} → Coker(e^{k−2})` becomes `I^k`. Every finitely
/// presented torsion module is pure injective here, so the embedding into a pure
/// injective is the identity. The result lives on `[lo, hi + 1]`.
pub fn resolve_injective_bounded_below(m: &Complex) -> Result<ResolutionCertificate> {
    check_injective_scope(m)?;
    if m.is_zero() {
        return ResolutionCertificate::new(m, m, &ChainMap::identity(m), Side::Injective);
    }
    let (lo, hi) = (m.lo(), m.hi());
    let mut modules = vec![m.module(lo)];
    let mut diffs: Vec<ModuleMap> = Vec::new();
    let mut u = vec![ModuleMap::identity(&m.module(lo))];
    for k in lo + 1..=hi + 1 {
        let prev = modules.last().expect("nonempty").clone();
        let (_, pi) = match diffs.last() {
            Some(e) => cokernel(e),
            None => (prev.clone(), ModuleMap::identity(&prev)),
        };
        let (c, j_m, j_q) = pushout(&m.d(k - 1), &u.last().expect("nonempty").then(&pi))?;
        let (c, to, _) = minimize(&c);
        diffs.push(pi.then(&j_q).then(&to));
        u.push(j_m.then(&to));
        modules.push(c);
    }
    let target = Complex::from_maps(m.ring(), lo, modules, diffs);
    let map = map_into(m, &target, &u, lo);
    ResolutionCertificate::new(m, &target, &map, Side::Injective)
}

/// The pullback induction, dual to [`resolve_injective_bounded_below`]:
/// `P^hi = M^hi`, and `L^k` is the pullback of `M^k → M^{k+1}` and
/// `Ker(e^{k+1}) → M^{k+1}`. The result lives on `[lo − 1, hi]`.
pub fn resolve_projective_bounded_above(m: &Complex) -> Result<ResolutionCertificate> {
    if m.is_zero() {
        return ResolutionCertificate::new(m, m, &ChainMap::identity(m), Side::Projective);
    }
    let (lo, hi) = (m.lo(), m.hi());
    let mut modules = vec![m.module(hi)];
    let mut diffs: Vec<ModuleMap> = Vec::new();
    let mut v = vec![ModuleMap::identity(&m.module(hi))];
    for k in (lo - 1..hi).rev() {
        let top = modules.last().expect("nonempty").clone();
        let (_, iota) = match diffs.last() {
            Some(e) => kernel(e),
            None => (top.clone(), ModuleMap::identity(&top)),
        };
        let (l, p_m, p_k) = pullback(&m.d(k), &iota.then(v.last().expect("nonempty")))?;
        let (l, _, from) = minimize(&l);
        diffs.push(from.then(&p_k).then(&iota));
        v.push(from.then(&p_m));
        modules.push(l);
    }
    modules.reverse();
    diffs.reverse();
    v.reverse();
    let target = Complex::from_maps(m.ring(), lo - 1, modules, diffs);
    let map = ChainMap::from_maps(&target, m, |n| {
        let (s, t) = (target.module(n), m.module(n));
        let k = n - (lo - 1);
        match v.get(k as usize) {
            Some(x) if k >= 0 && s.generators() > 0 && t.generators() > 0 => ModuleMap::new_unchecked(&s, &t, x.matrix().clone()),
            _ => ModuleMap::zero(&s, &t),
        }
    });
    ResolutionCertificate::new(m, &target, &map, Side::Projective)
}

/// The two conditions checked at one induction step for one probe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepCheck {
    pub degree: i64,
    pub probe: FpModule,
    /// Injective side: `Coker(N⊗d^{k−1}) → Coker(N⊗e^{k−1})` is injective.
    /// Projective side: `Ker Hom(Q, e^k) → Ker Hom(Q, d^k)` is surjective.
    pub first: bool,
    /// The induced map on `H^{k−1}` (injective) or `H^{k+1}` (projective) is an
    /// isomorphism.
    pub second: bool,
}

impl StepCheck {
    pub fn passed(&self) -> bool {
        self.first && self.second
    }
}

/// Step conditions of the injective induction after tensoring with each probe.
pub fn injective_step_checks(r: &ResolutionCertificate, battery: &ProbeBattery) -> Result<Vec<StepCheck>> {
    if r.side != Side::Injective {
        return Err(Error::Precondition("injective certificate expected".into()));
    }
    let m = &r.source;
    if m.is_zero() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for n in &battery.probes {
        let p = Complex::concentrated(n, 0);
        let tm = tensor_complex(&p, m)?;
        let ti = tensor_complex(&p, &r.target)?;
        let tu = tensor_map(&tm, &ti, &ChainMap::identity(&p), &r.map);
        for k in m.lo() + 1..=m.hi() + 1 {
            let (q1, _) = cokernel(&tm.complex.d(k - 1));
            let (q2, p2) = cokernel(&ti.complex.d(k - 1));
            let induced = make_map(&q1, &q2, tu.component(k).then(&p2).matrix().clone())?;
            out.push(StepCheck {
                degree: k,
                probe: n.clone(),
                first: induced.is_injective(),
                second: induced_on_homology(&tu, k - 1).2.is_isomorphism(),
            });
        }
    }
    Ok(out)
}

/// Step conditions of the projective induction after applying `Hom(Q, −)`.
pub fn projective_step_checks(r: &ResolutionCertificate, battery: &ProbeBattery) -> Result<Vec<StepCheck>> {
    if r.side != Side::Projective {
        return Err(Error::Precondition("projective certificate expected".into()));
    }
    let m = &r.source;
    if m.is_zero() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for q in &battery.probes {
        let p = Complex::concentrated(q, 0);
        let hp = hom_complex(&p, &r.target)?;
        let hm = hom_complex(&p, m)?;
        let hv = hom_map(&hp, &hm, &ChainMap::identity(&p), &r.map);
        for k in m.lo() - 1..m.hi() {
            let (_, i1) = kernel(&hp.complex.d(k));
            let (_, i2) = kernel(&hm.complex.d(k));
            let z = factor_through_mono(&i2, &i1.then(&hv.component(k))).expect("cycles map to cycles");
            out.push(StepCheck {
                degree: k,
                probe: q.clone(),
                first: z.is_surjective(),
                second: induced_on_homology(&hv, k + 1).2.is_isomorphism(),
            });
        }
    }
    Ok(out)
}

fn block(m: &ModuleMap, r0: usize, c0: usize, rows: usize, cols: usize) -> IntMatrix {
    m.matrix().block(r0, c0, rows, cols)
}

/// Given `f : M₂ → M₁` and a resolution `u₁ : M₁ → I₁`, resolves `M₂` by
/// `I₂ = C_b[−1]` where `v = (a, b) : cone(u₁ f) → I` is a resolution of the cone.
/// Then `g : I₂ → I₁` is the projection and `g u₂ = u₁ f` holds on the nose.
pub fn lift_injective(f: &ChainMap, r1: &ResolutionCertificate) -> Result<(ResolutionCertificate, ChainMap, Homotopy)> {
    if r1.side != Side::Injective || &r1.source != f.tgt() {
        return Err(Error::Precondition("expected an injective resolution of the target of f".into()));
    }
    let m2 = f.src();
    let i1 = &r1.target;
    if m2 == f.tgt() && f.equals(&ChainMap::identity(m2)) {
        return Ok((r1.clone(), ChainMap::identity(i1), Homotopy::zero(m2, i1)));
    }
    check_injective_scope(m2)?;
    let uf = f.then(&r1.map);
    let c = cone(&uf);
    let rc = resolve_injective_bounded_below(&c.complex)?;
    let b = c.injection.then(&rc.map);
    let i2 = shift(&cone(&b).complex, -1);
    let g1 = |i: i64| i1.module(i).generators();
    let u2 = ChainMap::from_fn(m2, &i2, |i, s, t| {
        let mut x = IntMatrix::zeros(t.generators(), s.generators());
        x.set_block(0, 0, uf.component(i).matrix());
        let v = rc.map.component(i - 1);
        x.set_block(g1(i), 0, &block(&v, 0, 0, v.tgt().generators(), s.generators()).neg());
        x
    });
    let g = ChainMap::from_fn(&i2, i1, |i, s, t| {
        let mut x = IntMatrix::zeros(t.generators(), s.generators());
        x.set_block(0, 0, &IntMatrix::identity(g1(i)));
        x
    });
    debug_assert!(u2.then(&g).equals(&uf));
    let r2 = ResolutionCertificate::new(m2, &i2, &u2, Side::Injective)?;
    Ok((r2, g, Homotopy::zero(m2, i1)))
}

/// Dual of [`lift_injective`]: for `f : M₂ → M₁` and `v₂ : P₂ → M₂`, resolves the cone
/// of `f v₂` by `w = (α, β) : P → cone`, and takes `P₁ = C_α[−1]` with
/// `v₁ = (β, f v₂)` and `g = (0, 1) : P₂ → P₁`.
pub fn lift_projective(f: &ChainMap, r2: &ResolutionCertificate) -> Result<(ResolutionCertificate, ChainMap, Homotopy)> {
    if r2.side != Side::Projective || &r2.source != f.src() {
        return Err(Error::Precondition("expected a projective resolution of the source of f".into()));
    }
    let m1 = f.tgt();
    let p2 = &r2.target;
    if m1 == f.src() && f.equals(&ChainMap::identity(m1)) {
        return Ok((r2.clone(), ChainMap::identity(p2), Homotopy::zero(p2, m1)));
    }
    let fv = r2.map.then(f);
    let c = cone(&fv);
    let rc = resolve_projective_bounded_above(&c.complex)?;
    let p = &rc.target;
    let p2s = shift(p2, 1);
    let alpha = ChainMap::from_fn(p, &p2s, |i, s, t| block(&rc.map.component(i), 0, 0, t.generators(), s.generators()));
    let p1 = shift(&cone(&alpha).complex, -1);
    let gp = |i: i64| p.module(i).generators();
    let v1 = ChainMap::from_fn(&p1, m1, |i, s, t| {
        let mut x = IntMatrix::zeros(t.generators(), s.generators());
        let beta = block(&rc.map.component(i), p2.module(i + 1).generators(), 0, t.generators(), gp(i));
        x.set_block(0, 0, &beta);
        x.set_block(0, gp(i), fv.component(i).matrix());
        x
    });
    let g = ChainMap::from_fn(p2, &p1, |i, s, t| {
        let mut x = IntMatrix::zeros(t.generators(), s.generators());
        x.set_block(gp(i), 0, &IntMatrix::identity(s.generators()));
        x
    });
    debug_assert!(g.then(&v1).equals(&fv));
    let r1 = ResolutionCertificate::new(m1, &p1, &v1, Side::Projective)?;
    Ok((r1, g, Homotopy::zero(p2, m1)))
}
