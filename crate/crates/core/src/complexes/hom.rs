use std::collections::BTreeMap;

use crate::error::Result;
use crate::exact_linalg::IntMatrix;
use crate::fpmod::{hom_modules, tensor_modules, FpModule, HomModule, ModuleMap};
use crate::int::Int;

use super::ops::{sign, sum_module};
use super::{ChainMap, Complex, Homotopy};

/// `Hom(M^j, N^{i+j})` sitting inside degree `i` of the Hom complex, starting at cell
/// `offset`.
#[derive(Clone, Debug)]
pub struct HomSummand {
    pub source_degree: i64,
    pub hom: HomModule,
    pub offset: usize,
}

/// The internal Hom complex with differential `d(f) = d_N f − (−1)^i f d_M`.
#[derive(Clone, Debug)]
pub struct HomComplex {
    pub complex: Complex,
    pub src: Complex,
    pub tgt: Complex,
    summands: BTreeMap<i64, Vec<HomSummand>>,
}

pub fn hom_complex(m: &Complex, n: &Complex) -> Result<HomComplex> {
    let ring = m.ring();
    if m.ring() != n.ring() {
        return Err(crate::Error::RingMismatch(m.ring().to_string(), n.ring().to_string()));
    }
    let lo = n.lo() - m.hi();
    let hi = n.hi() - m.lo();
    let mut summands = BTreeMap::new();
    if !m.is_zero() && !n.is_zero() {
        for i in lo..=hi {
            let mut parts = Vec::new();
            let mut offset = 0;
            for j in m.degrees() {
                let (a, b) = (m.module(j), n.module(i + j));
                if a.generators() == 0 || b.generators() == 0 {
                    continue;
                }
                let hom = hom_modules(&a, &b)?;
                let cells = hom.cells.len();
                parts.push(HomSummand { source_degree: j, hom, offset });
                offset += cells;
            }
            summands.insert(i, parts);
        }
    }
    let module = |i: i64| {
        let orders: Vec<Int> = summands.get(&i).map(|p: &Vec<HomSummand>| p.iter().flat_map(|s| s.hom.module.diag().moduli.clone()).collect()).unwrap_or_default();
        FpModule::diagonal(ring, &orders)
    };
    let complex = Complex::build(ring, lo, hi, module, |i, s, t| {
        let mut d = IntMatrix::zeros(t.generators(), s.generators());
        let e = -sign(i);
        for sm in &summands[&i] {
            let j = sm.source_degree;
            let cells = sm.hom.cells.len();
            for tm in &summands[&(i + 1)] {
                let block = if tm.source_degree == j {
                    sm.hom.induced_matrix(&tm.hom, n.d(i + j).matrix(), &IntMatrix::identity(m.module(j).generators()))
                } else if tm.source_degree == j - 1 {
                    sm.hom.induced_matrix(&tm.hom, &IntMatrix::identity(n.module(i + j).generators()), m.d(j - 1).matrix()).scale(&e)
                } else {
                    continue;
                };
                debug_assert_eq!(block.shape(), (tm.hom.cells.len(), cells));
                d.add_block(tm.offset, sm.offset, &block);
            }
        }
        d
    });
    Ok(HomComplex { complex, src: m.clone(), tgt: n.clone(), summands })
}

impl HomComplex {
    pub fn summands(&self, i: i64) -> &[HomSummand] {
        self.summands.get(&i).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn summand(&self, i: i64, j: i64) -> Option<&HomSummand> {
        self.summands(i).iter().find(|s| s.source_degree == j)
    }

    /// The component `M^j → N^{i+j}` of a degree `i` element.
    pub fn component_map(&self, i: i64, j: i64, t: &[Int]) -> ModuleMap {
        match self.summand(i, j) {
            Some(s) => s.hom.to_map(&t[s.offset..s.offset + s.hom.cells.len()]),
            None => ModuleMap::zero(&self.src.module(j), &self.tgt.module(i + j)),
        }
    }

    /// Coordinates of the degree `i` element with components `f(j) : M^j → N^{i+j}`.
    pub fn element(&self, i: i64, mut f: impl FnMut(i64) -> ModuleMap) -> Vec<Int> {
        let mut out = vec![Int::zero(); self.complex.module(i).generators()];
        for s in self.summands(i) {
            let t = s.hom.from_map(&f(s.source_degree));
            for (k, x) in t.into_iter().enumerate() {
                out[s.offset + k] = x;
            }
        }
        out
    }

    /// A degree 0 cycle read as a chain map.
    pub fn to_chain_map(&self, t: &[Int]) -> ChainMap {
        ChainMap::from_maps(&self.src, &self.tgt, |j| self.component_map(0, j, t))
    }

    pub fn from_chain_map(&self, f: &ChainMap) -> Vec<Int> {
        self.element(0, |j| f.component(j))
    }

    /// A degree −1 element read as a homotopy.
    pub fn to_homotopy(&self, t: &[Int]) -> Homotopy {
        Homotopy::from_maps(&self.src, &self.tgt, |j| self.component_map(-1, j, t))
    }

    pub fn from_homotopy(&self, h: &Homotopy) -> Vec<Int> {
        self.element(-1, |j| h.component(j))
    }
}

/// `X ↦ post ∘ X ∘ pre` as a chain map `Hom(B, C) → Hom(B', C')` for
/// `pre : B' → B` and `post : C → C'`.
pub fn hom_map(from: &HomComplex, to: &HomComplex, pre: &ChainMap, post: &ChainMap) -> ChainMap {
    ChainMap::from_fn(&from.complex, &to.complex, |i, s, t| {
        let mut out = IntMatrix::zeros(t.generators(), s.generators());
        for sm in from.summands(i) {
            let j = sm.source_degree;
            if let Some(tm) = to.summand(i, j) {
                let block = sm.hom.induced_matrix(&tm.hom, post.component(i + j).matrix(), pre.component(j).matrix());
                out.set_block(tm.offset, sm.offset, &block);
            }
        }
        out
    })
}

/// `M^i ⊗ N^j` inside degree `i + j` of the total complex, starting at generator
/// `offset`.
#[derive(Clone, Debug)]
pub struct TensorSummand {
    pub left_degree: i64,
    pub right_degree: i64,
    pub module: FpModule,
    pub offset: usize,
}

/// Total tensor complex with `d(x ⊗ y) = dx ⊗ y + (−1)^i x ⊗ dy` for `x` in degree `i`.
#[derive(Clone, Debug)]
pub struct TensorComplex {
    pub complex: Complex,
    pub left: Complex,
    pub right: Complex,
    summands: BTreeMap<i64, Vec<TensorSummand>>,
}

pub fn tensor_complex(m: &Complex, n: &Complex) -> Result<TensorComplex> {
    let ring = m.ring();
    if m.ring() != n.ring() {
        return Err(crate::Error::RingMismatch(m.ring().to_string(), n.ring().to_string()));
    }
    let lo = m.lo() + n.lo();
    let hi = m.hi() + n.hi();
    let mut summands = BTreeMap::new();
    if !m.is_zero() && !n.is_zero() {
        for k in lo..=hi {
            let mut parts = Vec::new();
            let mut offset = 0;
            for i in m.degrees() {
                let (a, b) = (m.module(i), n.module(k - i));
                if a.generators() == 0 || b.generators() == 0 {
                    continue;
                }
                let module = tensor_modules(&a, &b)?;
                let g = module.generators();
                parts.push(TensorSummand { left_degree: i, right_degree: k - i, module, offset });
                offset += g;
            }
            summands.insert(k, parts);
        }
    }
    let module = |k: i64| {
        let parts: Vec<FpModule> = summands.get(&k).map(|p: &Vec<TensorSummand>| p.iter().map(|s| s.module.clone()).collect()).unwrap_or_default();
        sum_module(ring, &parts)
    };
    let complex = Complex::build(ring, lo, hi, module, |k, s, t| {
        let mut d = IntMatrix::zeros(t.generators(), s.generators());
        for sm in &summands[&k] {
            let (i, j) = (sm.left_degree, sm.right_degree);
            let (gi, gj) = (m.module(i).generators(), n.module(j).generators());
            for tm in &summands[&(k + 1)] {
                let block = if tm.left_degree == i + 1 {
                    m.d(i).matrix().kron(&IntMatrix::identity(gj))
                } else if tm.left_degree == i {
                    IntMatrix::identity(gi).kron(n.d(j).matrix()).scale(&sign(i))
                } else {
                    continue;
                };
                d.add_block(tm.offset, sm.offset, &block);
            }
        }
        d
    });
    // ends whose modules vanish despite having generators are trimmed from the complex
    summands.retain(|k, _| !complex.is_zero() && complex.degrees().contains(k));
    Ok(TensorComplex { complex, left: m.clone(), right: n.clone(), summands })
}

impl TensorComplex {
    pub fn summands(&self, k: i64) -> &[TensorSummand] {
        self.summands.get(&k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn summand(&self, i: i64, j: i64) -> Option<&TensorSummand> {
        self.summands(i + j).iter().find(|s| s.left_degree == i)
    }
}

/// `f ⊗ g` between total complexes.
pub fn tensor_map(from: &TensorComplex, to: &TensorComplex, f: &ChainMap, g: &ChainMap) -> ChainMap {
    ChainMap::from_fn(&from.complex, &to.complex, |k, s, t| {
        let mut out = IntMatrix::zeros(t.generators(), s.generators());
        for sm in from.summands(k) {
            let (i, j) = (sm.left_degree, sm.right_degree);
            if let Some(tm) = to.summand(i, j) {
                out.set_block(tm.offset, sm.offset, &f.component(i).matrix().kron(g.component(j).matrix()));
            }
        }
        out
    })
}
