use crate::error::{Error, Result};
use crate::exact_linalg::{congruence_kernel, solve_congruence, IntMatrix, Ring};
use crate::int::Int;

use super::{make_module, FpModule, MapSystem, ModuleMap};

fn same_ring(a: &FpModule, b: &FpModule) -> Result<()> {
    if a.ring() != b.ring() {
        return Err(Error::RingMismatch(a.ring().to_string(), b.ring().to_string()));
    }
    Ok(())
}

/// Kernel of `f` with its inclusion into the source.
pub fn kernel(f: &ModuleMap) -> (FpModule, ModuleMap) {
    let ring = f.ring();
    let src = f.src();
    let ds = src.diag();
    let ft = f.diagonal_matrix();
    let k = congruence_kernel(&ft, &f.tgt().diag().moduli, ring);
    let rel = congruence_kernel(&k, &ds.moduli, ring);
    let module = make_module(ring, k.cols(), rel).expect("kernel presentation is well shaped");
    let inclusion = ModuleMap::new_unchecked(&module, src, ds.psi.mul(&k));
    (module, inclusion)
}

/// Cokernel of `f` with the projection from the target.
pub fn cokernel(f: &ModuleMap) -> (FpModule, ModuleMap) {
    let tgt = f.tgt();
    let rel = IntMatrix::hstack(&[tgt.relations(), f.matrix()], tgt.generators());
    let module = make_module(f.ring(), tgt.generators(), rel).expect("cokernel presentation is well shaped");
    let projection = ModuleMap::new_unchecked(tgt, &module, IntMatrix::identity(tgt.generators()));
    (module, projection)
}

/// Image of `f` as a submodule of the target, with the factorization
/// `src ↠ im ↪ tgt`.
pub fn image(f: &ModuleMap) -> (FpModule, ModuleMap, ModuleMap) {
    let (coim, proj) = cokernel(&kernel(f).1);
    let inclusion = ModuleMap::new_unchecked(&coim, f.tgt(), f.matrix().clone());
    (coim, proj, inclusion)
}

/// Some `h : P → K` with `i ∘ h = g`, for a monomorphism `i : K → M` and `g : P → M`.
pub fn factor_through_mono(i: &ModuleMap, g: &ModuleMap) -> Option<ModuleMap> {
    assert!(i.tgt() == g.tgt(), "maps must share a target");
    let dm = i.tgt().diag();
    let ring = i.ring();
    let a = dm.phi.mul(i.matrix()).reduced(ring);
    let b = dm.phi.mul(g.matrix()).reduced(ring);
    let x = solve_congruence(&a, &dm.moduli, &b, ring)?;
    let h = ModuleMap::new_unchecked(g.src(), i.src(), x);
    Some(h)
}

/// Some `h : A → B` with `f ∘ h = g` for `f : B → C`, `g : A → C` (general lifting).
pub fn lift_through(f: &ModuleMap, g: &ModuleMap) -> Option<ModuleMap> {
    let ring = f.ring();
    let mut sys = MapSystem::new(ring);
    let x = sys.unknown(g.src(), f.src());
    let eq = sys.equation(g.src(), g.tgt());
    sys.add_term(eq, &Int::one(), Some(f.matrix()), x, None);
    sys.add_constant(eq, &Int::from(-1), g.matrix());
    let sol = sys.solve()?;
    Some(sys.value(&sol, x))
}

/// Some `h : C → T` with `h ∘ f = g` for `f : A → C`, `g : A → T` (general extension).
pub fn extend_along(f: &ModuleMap, g: &ModuleMap) -> Option<ModuleMap> {
    let ring = f.ring();
    let mut sys = MapSystem::new(ring);
    let x = sys.unknown(f.tgt(), g.tgt());
    let eq = sys.equation(f.src(), g.tgt());
    sys.add_term(eq, &Int::one(), None, x, Some(f.matrix()));
    sys.add_constant(eq, &Int::from(-1), g.matrix());
    let sol = sys.solve()?;
    Some(sys.value(&sol, x))
}

/// Direct sum with its structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: FpModule,
    pub injections: Vec<ModuleMap>,
    pub projections: Vec<ModuleMap>,
    pub offsets: Vec<usize>,
}

pub fn direct_sum(ring: &Ring, ms: &[FpModule]) -> Result<DirectSum> {
    for m in ms {
        if m.ring() != ring {
            return Err(Error::RingMismatch(ring.to_string(), m.ring().to_string()));
        }
    }
    let rels: Vec<&IntMatrix> = ms.iter().map(FpModule::relations).collect();
    let rel = IntMatrix::block_diag(&rels);
    let total = rel.rows();
    let module = make_module(ring, total, rel)?;
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    let mut offsets = Vec::new();
    let mut off = 0;
    for m in ms {
        let g = m.generators();
        let mut inj = IntMatrix::zeros(total, g);
        inj.set_block(off, 0, &IntMatrix::identity(g));
        injections.push(ModuleMap::new_unchecked(m, &module, inj.clone()));
        projections.push(ModuleMap::new_unchecked(&module, m, inj.transpose()));
        offsets.push(off);
        off += g;
    }
    Ok(DirectSum { module, injections, projections, offsets })
}

/// `M ⊗ N` on generators `(i, j) ↦ i·|N| + j`.
pub fn tensor_modules(m: &FpModule, n: &FpModule) -> Result<FpModule> {
    same_ring(m, n)?;
    let (gm, gn) = (m.generators(), n.generators());
    let left = m.relations().kron(&IntMatrix::identity(gn));
    let right = IntMatrix::identity(gm).kron(n.relations());
    make_module(m.ring(), gm * gn, IntMatrix::hstack(&[&left, &right], gm * gn))
}

/// `f ⊗ g` between tensor modules built by [`tensor_modules`].
pub fn tensor_maps(f: &ModuleMap, g: &ModuleMap, src: &FpModule, tgt: &FpModule) -> ModuleMap {
    ModuleMap::new_unchecked(src, tgt, f.matrix().kron(g.matrix()))
}

/// `Hom(M, N)` presented on the cyclic cells of the diagonal forms.
#[derive(Clone, Debug)]
pub struct HomModule {
    pub module: FpModule,
    pub src: FpModule,
    pub tgt: FpModule,
    /// `(a, b, c)`: generator `k` is the map sending diagonal generator `b` of the
    /// source to `c` times diagonal generator `a` of the target.
    pub cells: Vec<(usize, usize, Int)>,
}

pub fn hom_modules(m: &FpModule, n: &FpModule) -> Result<HomModule> {
    same_ring(m, n)?;
    let ring = m.ring();
    let dm = m.diag();
    let dn = n.diag();
    let mut cells = Vec::new();
    let mut orders = Vec::new();
    for a in 0..dn.len() {
        for b in 0..dm.len() {
            if let Some((c, o)) = ring.hom_cell(&dm.moduli[b], &dn.moduli[a]) {
                cells.push((a, b, c));
                orders.push(o);
            }
        }
    }
    Ok(HomModule { module: FpModule::diagonal(ring, &orders), src: m.clone(), tgt: n.clone(), cells })
}

impl HomModule {
    /// The homomorphism represented by an element (generator coordinates).
    pub fn to_map(&self, t: &[Int]) -> ModuleMap {
        let ring = self.src.ring();
        let dm = self.src.diag();
        let dn = self.tgt.diag();
        let mut xt = IntMatrix::zeros(dn.len(), dm.len());
        for ((a, b, c), ti) in self.cells.iter().zip(t) {
            let cur = xt.get(*a, *b).clone();
            xt.set(*a, *b, ring.reduce(&cur + &(c * ti)));
        }
        ModuleMap::new_unchecked(&self.src, &self.tgt, dn.psi.mul(&xt).mul(&dm.phi))
    }

    /// Generator-coordinate matrix (`|Hom| × 1` per map) of a homomorphism.
    pub fn from_map(&self, f: &ModuleMap) -> Vec<Int> {
        assert!(f.src() == &self.src && f.tgt() == &self.tgt, "map between the wrong modules");
        let ft = f.diagonal_matrix();
        self.cells.iter().map(|(a, b, c)| ft.get(*a, *b).div_exact(c)).collect()
    }

    /// The linear map `Hom(M, N) → Hom(M', N')` induced by `X ↦ L·X·R` (matrices on
    /// generators), as a matrix on the cell generators.
    pub fn induced_matrix(&self, other: &HomModule, left: &IntMatrix, right: &IntMatrix) -> IntMatrix {
        let ring = self.src.ring();
        let dm = self.src.diag();
        let dn = self.tgt.diag();
        let l = other.tgt.diag().phi.mul(left).mul(&dn.psi).reduced(ring);
        let r = dm.phi.mul(right).mul(&other.src.diag().psi).reduced(ring);
        let mut out = IntMatrix::zeros(other.cells.len(), self.cells.len());
        for (k, (a, b, c)) in self.cells.iter().enumerate() {
            for (k2, (a2, b2, c2)) in other.cells.iter().enumerate() {
                let v = l.get(*a2, *a) * c * r.get(*b, *b2);
                if v.is_zero() {
                    continue;
                }
                let modulus = &other.tgt.diag().moduli[*a2];
                let v = super::module::reduce_mod(ring, v, modulus);
                if !v.is_zero() {
                    out.set(k2, k, ring.reduce(v.div_exact(c2)));
                }
            }
        }
        out
    }
}

/// Pushout of `f : A → B` and `g : A → C` as the cokernel of `(f, −g)`.
pub fn pushout(f: &ModuleMap, g: &ModuleMap) -> Result<(FpModule, ModuleMap, ModuleMap)> {
    if f.src() != g.src() {
        return Err(Error::Input("pushout legs must share a source".into()));
    }
    let ring = f.ring();
    let sum = direct_sum(ring, &[f.tgt().clone(), g.tgt().clone()])?;
    let m = IntMatrix::vstack(&[f.matrix(), &g.matrix().neg()], f.src().generators());
    let into = ModuleMap::new_unchecked(f.src(), &sum.module, m);
    let (d, p) = cokernel(&into);
    let to_d = |i: usize| ModuleMap::new_unchecked(sum.injections[i].src(), &d, p.matrix().mul(sum.injections[i].matrix()));
    Ok((d.clone(), to_d(0), to_d(1)))
}

/// Pullback of `f : B → A` and `g : C → A` as the kernel of `(f, −g)`.
pub fn pullback(f: &ModuleMap, g: &ModuleMap) -> Result<(FpModule, ModuleMap, ModuleMap)> {
    if f.tgt() != g.tgt() {
        return Err(Error::Input("pullback legs must share a target".into()));
    }
    let ring = f.ring();
    let sum = direct_sum(ring, &[f.src().clone(), g.src().clone()])?;
    let m = IntMatrix::hstack(&[f.matrix(), &g.matrix().neg()], f.tgt().generators());
    let out = ModuleMap::new_unchecked(&sum.module, f.tgt(), m);
    let (l, i) = kernel(&out);
    let from_l = |k: usize| i.then(&sum.projections[k]);
    Ok((l, from_l(0), from_l(1)))
}

/// A retraction `r` with `r ∘ f = id`, if one exists.
pub fn has_retraction(f: &ModuleMap) -> Result<Option<ModuleMap>> {
    if !f.is_injective() {
        return Err(Error::NotMono);
    }
    let mut sys = MapSystem::new(f.ring());
    let x = sys.unknown(f.tgt(), f.src());
    let eq = sys.equation(f.src(), f.src());
    sys.add_term(eq, &Int::one(), None, x, Some(f.matrix()));
    sys.add_constant(eq, &Int::from(-1), &IntMatrix::identity(f.src().generators()));
    Ok(sys.solve().map(|s| sys.value(&s, x)))
}

/// The diagonal form of `m` with explicit mutually inverse isomorphisms.
pub fn minimize(m: &FpModule) -> (FpModule, ModuleMap, ModuleMap) {
    let d = m.diag();
    let small = FpModule::diagonal(m.ring(), &d.moduli);
    let to = ModuleMap::new_unchecked(m, &small, d.phi.clone());
    let from = ModuleMap::new_unchecked(&small, m, d.psi.clone());
    (small, to, from)
}

/// `0 → A → B → C → 0`, validated exactly.
#[derive(Clone, Debug)]
pub struct ShortExactSequence {
    pub i: ModuleMap,
    pub p: ModuleMap,
}

impl ShortExactSequence {
    pub fn new(i: ModuleMap, p: ModuleMap) -> Result<ShortExactSequence> {
        if i.tgt() != p.src() {
            return Err(Error::Input("maps are not composable".into()));
        }
        if !i.then(&p).is_zero() {
            return Err(Error::Precondition("p ∘ i ≠ 0".into()));
        }
        if !i.is_injective() {
            return Err(Error::NotMono);
        }
        if !p.is_surjective() {
            return Err(Error::Precondition("p is not surjective".into()));
        }
        let (_, k) = kernel(&p);
        if factor_through_mono(&i, &k).is_none() {
            return Err(Error::Precondition("image of i is smaller than the kernel of p".into()));
        }
        Ok(ShortExactSequence { i, p })
    }
}
