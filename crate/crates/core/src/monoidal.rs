//! Tensor and internal Hom on the pure derived category: the pure derived Hom, the
//! currying isomorphism and checks that the adjunction survives localization.

use crate::complexes::{
    cone, hom_complex, hom_map, homology, shift, sign, tensor_complex, tensor_map, truncate_leq, truncate_leq_map,
    ChainMap, Complex, HomComplex, TensorComplex,
};
use crate::error::{Error, Result};
use crate::exact_linalg::IntMatrix;
use crate::fpmod::{factor_through_mono, FpModule, ModuleMap};
use crate::homotopy::{hom_dpur, hom_dpur_seeded, hom_k, HomK};
use crate::int::Int;
use crate::purity::{contract, is_pure_qis, ProbeBattery};
use crate::resolutions::{resolve, resolve_seeded, ResolutionCertificate, Side};

/// One named check inside a report.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

/// Structured outcome of a property check.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check::new(name, passed, detail));
    }
}

fn show(m: &FpModule) -> String {
    m.to_string()
}

/// Homology invariant factors of two complexes agree in every degree.
fn same_homology(a: &Complex, b: &Complex) -> std::result::Result<(), i64> {
    let lo = a.lo().min(b.lo());
    let hi = a.hi().max(b.hi());
    for n in lo..=hi {
        if !homology(a, n).is_isomorphic(&homology(b, n)) {
            return Err(n);
        }
    }
    Ok(())
}

/// `PHom(M, N) = Hom(P_M, I_N)` with both certificates.
#[derive(Clone, Debug)]
pub struct DerivedHomResult {
    pub value: Complex,
    pub hom: HomComplex,
    pub proj_res: ResolutionCertificate,
    pub inj_res: ResolutionCertificate,
}

impl DerivedHomResult {
    /// Re-checks the certificates and that the two comparison maps
    /// `Hom(P_M, N) → Hom(P_M, I_N) ← Hom(M, I_N)` are pure quasi-isomorphisms.
    pub fn verify(&self) -> Result<Report> {
        let mut r = Report::default();
        r.push("projective resolution", self.proj_res.validate().is_ok(), "");
        r.push("injective resolution", self.inj_res.validate().is_ok(), "");
        let (p, m) = (&self.proj_res.target, &self.proj_res.source);
        let (n, i) = (&self.inj_res.source, &self.inj_res.target);
        let pn = hom_complex(p, n)?;
        let mi = hom_complex(m, i)?;
        let post = hom_map(&pn, &self.hom, &ChainMap::identity(p), &self.inj_res.map);
        let pre = hom_map(&mi, &self.hom, &self.proj_res.map, &ChainMap::identity(i));
        for (name, f) in [("Hom(P_M, N) -> PHom", post), ("Hom(M, I_N) -> PHom", pre)] {
            let ok = contract(&cone(&f).complex);
            r.push(name, ok.is_ok(), ok.err().map(|k| format!("cone not contractible at degree {k}")).unwrap_or_default());
        }
        Ok(r)
    }
}

fn phom_from(proj_res: ResolutionCertificate, inj_res: ResolutionCertificate) -> Result<DerivedHomResult> {
    let hom = hom_complex(&proj_res.target, &inj_res.target)?;
    Ok(DerivedHomResult { value: hom.complex.clone(), hom, proj_res, inj_res })
}

pub fn phom(m: &Complex, n: &Complex, depth: usize) -> Result<DerivedHomResult> {
    phom_from(resolve(m, Side::Projective, depth)?, resolve(n, Side::Injective, depth)?)
}

/// Two `PHom(M, N)` computed from differently seeded resolutions have the same
/// homology in every degree.
pub fn check_phom_invariance(m: &Complex, n: &Complex, seeds: (u64, u64), depth: usize) -> Result<Report> {
    let a = phom_from(resolve_seeded(m, Side::Projective, depth, seeds.0)?, resolve_seeded(n, Side::Injective, depth, seeds.0)?)?;
    let b = phom_from(resolve_seeded(m, Side::Projective, depth, seeds.1)?, resolve_seeded(n, Side::Injective, depth, seeds.1)?)?;
    let mut r = Report::default();
    let lo = a.value.lo().min(b.value.lo());
    let hi = a.value.hi().max(b.value.hi());
    for k in lo..=hi {
        let (x, y) = (homology(&a.value, k), homology(&b.value, k));
        r.push(format!("H^{k}"), x.is_isomorphic(&y), format!("{} vs {}", show(&x), show(&y)));
    }
    Ok(r)
}

/// Currying `Hom(A ⊗ B, C) ≅ Hom(A, Hom(B, C))`, `φ ↦ (a ↦ (b ↦ φ(a ⊗ b)))`, written
/// out on generators in both directions.
#[derive(Clone, Debug)]
pub struct AdjunctionWitness {
    pub tensor: TensorComplex,
    pub inner: HomComplex,
    pub lhs: HomComplex,
    pub rhs: HomComplex,
    pub forward: ChainMap,
    pub backward: ChainMap,
}

impl AdjunctionWitness {
    /// Both maps are chain maps and mutually inverse in every degree.
    pub fn validate(&self) -> Report {
        let mut r = Report::default();
        r.push("forward is a chain map", self.forward.validate().is_ok(), "");
        r.push("backward is a chain map", self.backward.validate().is_ok(), "");
        let lhs = &self.lhs.complex;
        let rhs = &self.rhs.complex;
        let lo = lhs.lo().min(rhs.lo());
        let hi = lhs.hi().max(rhs.hi());
        for n in lo..=hi {
            let a = self.forward.component(n).then(&self.backward.component(n));
            let b = self.backward.component(n).then(&self.forward.component(n));
            let ok = a.equals(&ModuleMap::identity(&lhs.module(n))) && b.equals(&ModuleMap::identity(&rhs.module(n)));
            r.push(format!("round trip in degree {n}"), ok, "");
        }
        r
    }
}

fn unit(len: usize, k: usize) -> Vec<Int> {
    let mut v = vec![Int::zero(); len];
    v[k] = Int::one();
    v
}

/// Builds a degreewise map column by column from the images of unit vectors.
fn by_columns(src: &Complex, tgt: &Complex, image: impl Fn(i64, &[Int]) -> Vec<Int>) -> ChainMap {
    let ring = src.ring().clone();
    ChainMap::from_fn(src, tgt, |n, s, t| {
        let cols: Vec<IntMatrix> = (0..s.generators())
            .map(|k| IntMatrix::column(image(n, &unit(s.generators(), k))).reduced(&ring))
            .collect();
        IntMatrix::hstack(&cols.iter().collect::<Vec<_>>(), t.generators())
    })
}

pub fn adjunction_iso(a: &Complex, b: &Complex, c: &Complex) -> Result<AdjunctionWitness> {
    let tensor = tensor_complex(a, b)?;
    let inner = hom_complex(b, c)?;
    let lhs = hom_complex(&tensor.complex, c)?;
    let rhs = hom_complex(a, &inner.complex)?;
    let forward = by_columns(&lhs.complex, &rhs.complex, |n, t| {
        rhs.element(n, |i| {
            let ai = a.module(i);
            let h = inner.complex.module(n + i);
            let mut x = IntMatrix::zeros(h.generators(), ai.generators());
            for s in inner.summands(n + i) {
                let j = s.source_degree;
                let (Some(ts), bj) = (tensor.summand(i, j), b.module(j)) else { continue };
                let phi = lhs.component_map(n, i + j, t);
                for col in 0..ai.generators() {
                    let block = phi.matrix().block(0, ts.offset + col * bj.generators(), phi.tgt().generators(), bj.generators());
                    let g = ModuleMap::new_unchecked(&bj, &s.hom.tgt, block);
                    for (k, v) in s.hom.from_map(&g).into_iter().enumerate() {
                        x.set(s.offset + k, col, v);
                    }
                }
            }
            ModuleMap::new_unchecked(&ai, &h, x)
        })
    });
    let backward = by_columns(&rhs.complex, &lhs.complex, |n, t| {
        lhs.element(n, |k| {
            let tk = tensor.complex.module(k);
            let ck = c.module(n + k);
            let mut x = IntMatrix::zeros(ck.generators(), tk.generators());
            for ts in tensor.summands(k) {
                let (i, j) = (ts.left_degree, ts.right_degree);
                let Some(s) = inner.summand(n + i, j) else { continue };
                let psi = rhs.component_map(n, i, t);
                let bj = b.module(j).generators();
                for col in 0..a.module(i).generators() {
                    let v = psi.matrix().col_vec(col);
                    let g = s.hom.to_map(&v[s.offset..s.offset + s.hom.cells.len()]);
                    x.set_block(0, ts.offset + col * bj, g.matrix());
                }
            }
            ModuleMap::new_unchecked(&tk, &ck, x)
        })
    });
    Ok(AdjunctionWitness { tensor, inner, lhs, rhs, forward, backward })
}

/// The chain of isomorphisms identifying `Hom_Dpur(A ⊗ B, C)` with
/// `Hom_Dpur(A, PHom(B, C))`, each link asserted separately.
pub fn check_dpur_adjunction(a: &Complex, b: &Complex, c: &Complex, depth: usize) -> Result<Report> {
    let mut r = Report::default();
    let battery = crate::purity::battery_for(a.ring(), &[a, b, c]);
    let pa = resolve(a, Side::Projective, depth)?;
    let pb = resolve(b, Side::Projective, depth)?;
    let ic = resolve(c, Side::Injective, depth)?;
    let ab = tensor_complex(a, b)?;
    let pab = tensor_complex(&pa.target, &pb.target)?;
    let pab_map = tensor_map(&pab, &ab, &pa.map, &pb.map);

    let lhs = hom_dpur(&ab.complex, c, depth)?;
    let k_ab = hom_k(&ab.complex, &ic.target)?;
    let k_pab = hom_k(&pab.complex, &ic.target)?;
    r.push("P_A (x) P_B -> A (x) B is a pure qis", is_pure_qis(&pab_map, &battery).is_pure(), "");
    r.push(
        "resolution replacement",
        lhs.is_isomorphic(&k_ab) && k_ab.is_isomorphic(&k_pab),
        format!("{} / {} / {}", show(&lhs), show(&k_ab), show(&k_pab)),
    );

    let d_pab = hom_dpur_seeded(&pab.complex, c, depth, 1)?;
    r.push("K-pure injective target", d_pab.is_isomorphic(&k_pab), format!("{} vs {}", show(&d_pab), show(&k_pab)));

    let w = adjunction_iso(&pa.target, &pb.target, &ic.target)?;
    let wr = w.validate();
    let x = w.inner.complex.clone();
    let k_curried = hom_k(&pa.target, &x)?;
    r.push(
        "homotopy category adjunction",
        wr.passed() && k_pab.is_isomorphic(&k_curried),
        format!("{} vs {}", show(&k_pab), show(&k_curried)),
    );

    let rhs = hom_dpur(a, &x, depth.max(crate::resolutions::required_depth(&x, Side::Injective)))?;
    r.push("K-pure projective source", rhs.is_isomorphic(&k_curried), format!("{} vs {}", show(&rhs), show(&k_curried)));

    r.push("both sides agree", lhs.is_isomorphic(&rhs), format!("{} vs {}", show(&lhs), show(&rhs)));
    Ok(r)
}

/// `PHom(A ⊗ B, C)` and `PHom(A, PHom(B, C))` have the same homology in every degree.
pub fn check_phom_adjunction(a: &Complex, b: &Complex, c: &Complex, depth: usize) -> Result<Report> {
    let ab = tensor_complex(a, b)?.complex;
    let left = phom(&ab, c, depth)?;
    let inner = phom(b, c, depth)?;
    let d = depth.max(crate::resolutions::required_depth(&inner.value, Side::Injective));
    let right = phom(a, &inner.value, d)?;
    let mut r = Report::default();
    match same_homology(&left.value, &right.value) {
        Ok(()) => r.push("homology agrees", true, ""),
        Err(n) => r.push("homology agrees", false, format!("degree {n}")),
    }
    Ok(r)
}

/// For a pure quasi-isomorphism `u`, both `A ⊗ u` and the truncations `τ≤n u` are
/// pure quasi-isomorphisms.
pub fn check_tensor_descends(u: &ChainMap, a: &Complex, battery: &ProbeBattery) -> Result<Report> {
    if !is_pure_qis(u, battery).is_pure() {
        return Err(Error::Precondition("map is not a pure quasi-isomorphism".into()));
    }
    let mut r = Report::default();
    let ts = tensor_complex(a, u.src())?;
    let tt = tensor_complex(a, u.tgt())?;
    let au = tensor_map(&ts, &tt, &ChainMap::identity(a), u);
    r.push("A (x) u", is_pure_qis(&au, battery).is_pure(), "");
    let lo = u.src().lo().min(u.tgt().lo());
    let hi = u.src().hi().max(u.tgt().hi());
    for n in lo - 1..=hi {
        r.push(format!("truncation at {n}"), is_pure_qis(&truncate_leq_map(u, n), battery).is_pure(), "");
    }
    Ok(r)
}

/// For `P` concentrated in degree `p`, `Hom(P, τ≤n M)` and `τ≤(n−p) Hom(P, M)` are the
/// same subcomplex of `Hom(P, M)`.
pub fn check_truncation_commutes(p: &FpModule, degree: i64, m: &Complex, n: i64) -> Result<bool> {
    let pc = Complex::concentrated(p, degree);
    let (t, inc) = truncate_leq(m, n);
    let whole = hom_complex(&pc, m)?;
    let part = hom_complex(&pc, &t)?;
    let i1 = hom_map(&part, &whole, &ChainMap::identity(&pc), &inc);
    let (tw, i2) = truncate_leq(&whole.complex, n - degree);
    let lo = whole.complex.lo().min(part.complex.lo());
    let hi = whole.complex.hi();
    for k in lo..=hi {
        let (a, b) = (i1.component(k), i2.component(k));
        let (Some(x), Some(y)) = (factor_through_mono(&b, &a), factor_through_mono(&a, &b)) else { return Ok(false) };
        if !x.then(&y).equals(&ModuleMap::identity(&part.complex.module(k))) || !y.then(&x).equals(&ModuleMap::identity(&tw.module(k))) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The isomorphism `Hom(C_f, X) ≅ C_{Hom(f, X)}[−1]`, `(β, α) ↦ (β, (−1)^{n+1} α)` in
/// degree `n`, with `β ∈ Hom(B, X)^n` and `α ∈ Hom(A, X)^{n−1}`.
pub fn hom_cone_iso(f: &ChainMap, x: &Complex) -> Result<ChainMap> {
    let (a, b) = (f.src(), f.tgt());
    let cf = cone(f);
    let hc = hom_complex(&cf.complex, x)?;
    let hb = hom_complex(b, x)?;
    let ha = hom_complex(a, x)?;
    let hf = hom_map(&hb, &ha, f, &ChainMap::identity(x));
    let target = shift(&cone(&hf).complex, -1);
    Ok(by_columns(&hc.complex, &target, |n, t| {
        let comp = |j: i64| hc.component_map(n, j, t);
        let beta = hb.element(n, |j| {
            let c = comp(j);
            let ga = a.module(j + 1).generators();
            ModuleMap::new_unchecked(&b.module(j), &x.module(n + j), c.matrix().block(0, ga, c.tgt().generators(), b.module(j).generators()))
        });
        let alpha = ha.element(n - 1, |j| {
            let c = comp(j - 1);
            ModuleMap::new_unchecked(&a.module(j), &x.module(n - 1 + j), c.matrix().block(0, 0, c.tgt().generators(), a.module(j).generators()))
        });
        let s = sign(n + 1);
        beta.into_iter().chain(alpha.into_iter().map(|v| &v * &s)).collect()
    }))
}

/// The signed swap `A ⊗ B → B ⊗ A`, `a ⊗ b ↦ (−1)^{ij} b ⊗ a`.
pub fn tensor_swap(a: &Complex, b: &Complex) -> Result<ChainMap> {
    let ab = tensor_complex(a, b)?;
    let ba = tensor_complex(b, a)?;
    Ok(ChainMap::from_fn(&ab.complex, &ba.complex, |k, s, t| {
        let mut out = IntMatrix::zeros(t.generators(), s.generators());
        for sm in ab.summands(k) {
            let (i, j) = (sm.left_degree, sm.right_degree);
            let tm = ba.summand(j, i).expect("both summands are nonzero");
            let (ga, gb) = (a.module(i).generators(), b.module(j).generators());
            let e = sign(i * j);
            for x in 0..ga {
                for y in 0..gb {
                    out.set(tm.offset + y * ga + x, sm.offset + x * gb + y, e.clone());
                }
            }
        }
        out.reduced(a.ring())
    }))
}

/// `(A ⊗ B) ⊗ C → A ⊗ (B ⊗ C)` on generators.
pub fn tensor_associator(a: &Complex, b: &Complex, c: &Complex) -> Result<ChainMap> {
    let ab = tensor_complex(a, b)?;
    let bc = tensor_complex(b, c)?;
    let left = tensor_complex(&ab.complex, c)?;
    let right = tensor_complex(a, &bc.complex)?;
    Ok(ChainMap::from_fn(&left.complex, &right.complex, |k, s, t| {
        let mut out = IntMatrix::zeros(t.generators(), s.generators());
        for outer in left.summands(k) {
            let (ij, l) = (outer.left_degree, outer.right_degree);
            let gc = c.module(l).generators();
            for inner in ab.summands(ij) {
                let (i, j) = (inner.left_degree, inner.right_degree);
                let (ga, gb) = (a.module(i).generators(), b.module(j).generators());
                let r_outer = right.summand(i, j + l).expect("nonzero summand");
                let r_inner = bc.summand(j, l).expect("nonzero summand");
                let gbc = bc.complex.module(j + l).generators();
                for x in 0..ga {
                    for y in 0..gb {
                        for z in 0..gc {
                            let from = outer.offset + (inner.offset + x * gb + y) * gc + z;
                            let to = r_outer.offset + x * gbc + r_inner.offset + y * gc + z;
                            out.set(to, from, Int::one());
                        }
                    }
                }
            }
        }
        out
    }))
}

/// Whether `Hom(P, u)` is a pure quasi-isomorphism for the pure quasi-isomorphism `u`.
pub fn check_hom_preserves_pure_qis(p: &Complex, u: &ChainMap, battery: &ProbeBattery) -> Result<bool> {
    let hs = hom_complex(p, u.src())?;
    let ht = hom_complex(p, u.tgt())?;
    Ok(is_pure_qis(&hom_map(&hs, &ht, &ChainMap::identity(p), u), battery).is_pure())
}

/// `Hom_K` classes of `A → B` read off as chain maps, for display.
pub fn hom_k_representatives(a: &Complex, b: &Complex) -> Result<Vec<ChainMap>> {
    let hk = HomK::new(a, b)?;
    let gens = hk.module.generators();
    Ok((0..gens).map(|k| hk.representative(&unit(gens, k))).collect())
}
