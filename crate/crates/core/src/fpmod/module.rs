use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_linalg::{smith_normal_form, smith_tracked, IntMatrix, Ring, Track};
use crate::int::Int;

/// A finitely presented module `R^g / im(relations)`; relations are the columns of a
/// `g × r` matrix.
#[derive(Clone)]
pub struct FpModule(Arc<Inner>);

struct Inner {
    ring: Ring,
    generators: usize,
    relations: IntMatrix,
    diagonal: OnceLock<Diagonal>,
    invariants: OnceLock<Vec<Int>>,
}

/// An explicit isomorphism `M ≅ ⊕ R/(b_i)`. `phi` sends generator coordinates to
/// diagonal coordinates, `psi` goes back; each `b_i` is a canonical non-unit with `0`
/// standing for a free summand.
#[derive(Clone, Debug)]
pub struct Diagonal {
    pub moduli: Vec<Int>,
    pub phi: IntMatrix,
    pub psi: IntMatrix,
}

impl Diagonal {
    pub fn len(&self) -> usize {
        self.moduli.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moduli.is_empty()
    }
}

/// Checks shapes and builds a module with canonical entries.
pub fn make_module(ring: &Ring, generators: usize, relations: IntMatrix) -> Result<FpModule> {
    if relations.rows() != generators {
        return Err(Error::Shape(format!(
            "relation matrix has {} rows but the module has {generators} generators",
            relations.rows()
        )));
    }
    Ok(FpModule::from_parts(ring.clone(), relations))
}

impl FpModule {
    fn from_parts(ring: Ring, relations: IntMatrix) -> FpModule {
        let relations = relations.reduced(&ring);
        let keep: Vec<usize> = (0..relations.cols())
            .filter(|&j| (0..relations.rows()).any(|i| !relations.get(i, j).is_zero()))
            .collect();
        let relations = if keep.len() == relations.cols() { relations } else { relations.select_cols(&keep) };
        FpModule(Arc::new(Inner {
            ring,
            generators: relations.rows(),
            relations,
            diagonal: OnceLock::new(),
            invariants: OnceLock::new(),
        }))
    }

    pub fn zero(ring: &Ring) -> FpModule {
        FpModule::from_parts(ring.clone(), IntMatrix::zeros(0, 0))
    }

    pub fn free(ring: &Ring, rank: usize) -> FpModule {
        FpModule::from_parts(ring.clone(), IntMatrix::zeros(rank, 0))
    }

    /// `R/(a)`.
    pub fn cyclic(ring: &Ring, a: impl Into<Int>) -> FpModule {
        FpModule::diagonal(ring, &[a.into()])
    }

    /// `⊕ R/(a_i)` on one generator per entry.
    pub fn diagonal(ring: &Ring, moduli: &[Int]) -> FpModule {
        let n = moduli.len();
        let nz: Vec<usize> = (0..n).filter(|&i| !ring.is_zero(&moduli[i])).collect();
        let mut rel = IntMatrix::zeros(n, nz.len());
        for (k, &i) in nz.iter().enumerate() {
            rel.set(i, k, moduli[i].clone());
        }
        FpModule::from_parts(ring.clone(), rel)
    }

    pub fn ring(&self) -> &Ring {
        &self.0.ring
    }

    pub fn generators(&self) -> usize {
        self.0.generators
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.0.relations
    }

    pub fn diag(&self) -> &Diagonal {
        self.0.diagonal.get_or_init(|| self.compute_diagonal())
    }

    fn compute_diagonal(&self) -> Diagonal {
        let ring = self.ring();
        let rel = self.relations();
        let g = self.generators();
        let monomial = (0..rel.cols()).all(|j| (0..g).filter(|&i| !rel.get(i, j).is_zero()).count() <= 1);
        if monomial {
            let mut row_gcd = vec![Int::zero(); g];
            for j in 0..rel.cols() {
                for (i, acc) in row_gcd.iter_mut().enumerate() {
                    let x = rel.get(i, j);
                    if !x.is_zero() {
                        *acc = acc.gcd(x);
                    }
                }
            }
            let keep: Vec<usize> = (0..g).filter(|&i| !ring.is_unit(&ring.ideal_generator(&row_gcd[i]))).collect();
            let moduli: Vec<Int> = keep.iter().map(|&i| ring.ideal_generator(&row_gcd[i])).collect();
            let phi = IntMatrix::identity(g).select_rows(&keep);
            let psi = phi.transpose();
            return Diagonal { moduli, phi, psi };
        }
        let s = smith_tracked(rel, ring, Track { u: true, u_inv: true, v: false, v_inv: false });
        let diag = s.diagonal();
        let modulus = |i: usize| diag.get(i).cloned().unwrap_or_default();
        let keep: Vec<usize> = (0..g).filter(|&i| !ring.is_unit(&modulus(i))).collect();
        Diagonal {
            moduli: keep.iter().map(|&i| modulus(i)).collect(),
            phi: s.u.select_rows(&keep),
            psi: s.u_inv.select_cols(&keep),
        }
    }

    /// Invariant factors in divisibility order; units are dropped and `0` marks a free
    /// summand (of rank one over ℤ, or a copy of ℤ/m over ℤ/m).
    pub fn invariant_factors(&self) -> &[Int] {
        self.0.invariants.get_or_init(|| {
            let ring = self.ring();
            let d = self.diag();
            if d.moduli.windows(2).all(|w| w[0].divides(&w[1]) || w[1].is_zero()) {
                return d.moduli.clone();
            }
            let s = smith_normal_form(&IntMatrix::diagonal(&d.moduli), ring);
            s.diagonal().into_iter().filter(|x| !ring.is_unit(x)).collect()
        })
    }

    pub fn is_zero(&self) -> bool {
        self.diag().is_empty()
    }

    /// Rank of the free part.
    pub fn free_rank(&self) -> usize {
        self.invariant_factors().iter().filter(|x| x.is_zero()).count()
    }

    pub fn is_torsion(&self) -> bool {
        match self.ring() {
            Ring::Integers => self.free_rank() == 0,
            Ring::IntegersMod(_) => true,
        }
    }

    /// Number of elements, or `None` for an infinite module.
    pub fn order(&self) -> Option<Int> {
        let mut n = Int::one();
        for b in &self.diag().moduli {
            let b = match (self.ring(), b.is_zero()) {
                (Ring::Integers, true) => return None,
                (Ring::IntegersMod(m), true) => m.clone(),
                _ => b.clone(),
            };
            n = &n * &b;
        }
        Some(n)
    }

    pub fn is_isomorphic(&self, other: &FpModule) -> bool {
        self.ring() == other.ring() && self.invariant_factors() == other.invariant_factors()
    }

    /// Pure injectivity in scope: every f.p. module over ℤ/m, torsion modules over ℤ.
    pub fn is_pure_injective(&self) -> bool {
        self.is_torsion()
    }

    /// Every finitely presented module over these rings is pure projective.
    pub fn is_pure_projective(&self) -> bool {
        true
    }

    /// Diagonal coordinates of a generator-coordinate vector, reduced modulo the `b_i`.
    pub fn coords(&self, v: &[Int]) -> Vec<Int> {
        let d = self.diag();
        let ring = self.ring();
        (0..d.len())
            .map(|i| {
                let mut acc = Int::zero();
                for (k, x) in v.iter().enumerate() {
                    let p = d.phi.get(i, k);
                    if !p.is_zero() && !x.is_zero() {
                        acc += &(p * x);
                    }
                }
                reduce_mod(ring, acc, &d.moduli[i])
            })
            .collect()
    }

    pub fn is_zero_vec(&self, v: &[Int]) -> bool {
        self.coords(v).iter().all(Int::is_zero)
    }

    /// Whether every column of `m` (a `g × k` matrix) is zero in the module.
    pub fn kills_columns(&self, m: &IntMatrix) -> bool {
        assert_eq!(m.rows(), self.generators(), "column length must match generators");
        let d = self.diag();
        let p = d.phi.mul(m);
        (0..p.rows()).all(|i| (0..p.cols()).all(|j| reduce_mod(self.ring(), p.get(i, j).clone(), &d.moduli[i]).is_zero()))
    }

    /// All elements as generator-coordinate vectors (finite modules only).
    pub fn elements(&self) -> Option<Vec<Vec<Int>>> {
        let d = self.diag();
        let ring = self.ring();
        let sizes: Vec<Int> = d
            .moduli
            .iter()
            .map(|b| if b.is_zero() { ring.modulus().cloned() } else { Some(b.clone()) })
            .collect::<Option<_>>()?;
        let mut out = vec![vec![Int::zero(); d.len()]];
        for (i, s) in sizes.iter().enumerate() {
            let s = s.to_i64()?;
            let mut next = Vec::with_capacity(out.len() * s as usize);
            for v in &out {
                for t in 0..s {
                    let mut w = v.clone();
                    w[i] = Int::from(t);
                    next.push(w);
                }
            }
            out = next;
        }
        Some(
            out.into_iter()
                .map(|c| d.psi.mul(&IntMatrix::column(c)).reduced(ring).col_vec(0))
                .collect(),
        )
    }
}

pub(crate) fn reduce_mod(ring: &Ring, x: Int, b: &Int) -> Int {
    if b.is_zero() {
        ring.reduce(x)
    } else {
        x.rem_euclid(b)
    }
}

impl PartialEq for FpModule {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.ring() == other.ring() && self.relations() == other.relations())
    }
}

impl Eq for FpModule {}

impl fmt::Debug for FpModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpModule({} gens over {}, rel {:?})", self.generators(), self.ring(), self.relations())
    }
}

impl fmt::Display for FpModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inv = self.invariant_factors();
        if inv.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = inv
            .iter()
            .map(|b| match (self.ring(), b.is_zero()) {
                (Ring::Integers, true) => "Z".to_string(),
                (Ring::IntegersMod(m), true) => format!("Z/{m}"),
                _ => format!("Z/{b}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Serializable module description without the ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub generators: usize,
    pub relations: Vec<Vec<Int>>,
}

impl ModuleSpec {
    pub fn of(m: &FpModule) -> ModuleSpec {
        ModuleSpec { generators: m.generators(), relations: m.relations().to_rows() }
    }

    pub fn build(&self, ring: &Ring) -> Result<FpModule> {
        let cols = self.relations.first().map_or(0, Vec::len);
        let rel = if self.relations.is_empty() {
            IntMatrix::zeros(self.generators, 0)
        } else {
            IntMatrix::from_rows(&self.relations, cols)?
        };
        make_module(ring, self.generators, rel)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn invariant_factor_examples() {
        let z = Ring::Integers;
        let m = make_module(&z, 1, IntMatrix::from_i64(&[&[2]])).unwrap();
        assert_eq!(m.invariant_factors(), ints(&[2]).as_slice());
        let m = make_module(&z, 2, IntMatrix::from_i64(&[&[2, 0], &[0, 3]])).unwrap();
        assert_eq!(m.invariant_factors(), ints(&[6]).as_slice());
        let m = make_module(&z, 1, IntMatrix::zeros(1, 0)).unwrap();
        assert_eq!(m.invariant_factors(), ints(&[0]).as_slice());
        assert!(make_module(&z, 2, IntMatrix::zeros(1, 0)).is_err());
    }

    #[test]
    fn zmod_presentation() {
        let r = Ring::zmod(12);
        let m = make_module(&r, 1, IntMatrix::from_i64(&[&[4]])).unwrap();
        assert_eq!(m.order(), Some(Int::from(4)));
        assert_eq!(m.elements().unwrap().len(), 4);
        let f = FpModule::free(&r, 2);
        assert_eq!(f.order(), Some(Int::from(144)));
        assert_eq!(f.invariant_factors(), ints(&[0, 0]).as_slice());
    }

    #[test]
    fn general_path_coordinates() {
        let z = Ring::Integers;
        let m = make_module(&z, 2, IntMatrix::from_i64(&[&[2, 4], &[6, 8]])).unwrap();
        assert_eq!(m.invariant_factors(), ints(&[2, 4]).as_slice());
        assert!(m.is_zero_vec(&ints(&[2, 6])));
        assert!(!m.is_zero_vec(&ints(&[1, 0])));
        assert_eq!(m.order(), Some(Int::from(8)));
    }
}
