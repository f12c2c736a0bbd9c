use std::fmt;

use crate::error::{Error, Result};
use crate::exact_linalg::{IntMatrix, Ring};
use crate::int::Int;

use super::module::reduce_mod;
use super::FpModule;

/// A module homomorphism given on generators: column `j` is the image of generator `j`.
#[derive(Clone, PartialEq, Eq)]
pub struct ModuleMap {
    src: FpModule,
    tgt: FpModule,
    matrix: IntMatrix,
}

/// Checks the shape and that relations of `src` are sent into relations of `tgt`.
pub fn make_map(src: &FpModule, tgt: &FpModule, matrix: IntMatrix) -> Result<ModuleMap> {
    if src.ring() != tgt.ring() {
        return Err(Error::RingMismatch(src.ring().to_string(), tgt.ring().to_string()));
    }
    if matrix.shape() != (tgt.generators(), src.generators()) {
        return Err(Error::Shape(format!(
            "map matrix is {}x{}, expected {}x{}",
            matrix.rows(),
            matrix.cols(),
            tgt.generators(),
            src.generators()
        )));
    }
    let matrix = matrix.reduced(src.ring());
    if !tgt.kills_columns(&matrix.mul(src.relations())) {
        return Err(Error::IllDefinedMap(format!("{matrix:?} does not respect the relations of the source")));
    }
    Ok(ModuleMap { src: src.clone(), tgt: tgt.clone(), matrix })
}

impl ModuleMap {
    /// Skips the well-definedness check; callers guarantee it by construction.
    pub(crate) fn new_unchecked(src: &FpModule, tgt: &FpModule, matrix: IntMatrix) -> ModuleMap {
        debug_assert_eq!(matrix.shape(), (tgt.generators(), src.generators()));
        let matrix = matrix.reduced(src.ring());
        debug_assert!(tgt.kills_columns(&matrix.mul(src.relations())), "ill-defined internal map");
        ModuleMap { src: src.clone(), tgt: tgt.clone(), matrix }
    }

    pub fn identity(m: &FpModule) -> ModuleMap {
        ModuleMap::new_unchecked(m, m, IntMatrix::identity(m.generators()))
    }

    pub fn zero(src: &FpModule, tgt: &FpModule) -> ModuleMap {
        ModuleMap::new_unchecked(src, tgt, IntMatrix::zeros(tgt.generators(), src.generators()))
    }

    pub fn src(&self) -> &FpModule {
        &self.src
    }

    pub fn tgt(&self) -> &FpModule {
        &self.tgt
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn ring(&self) -> &Ring {
        self.src.ring()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ModuleMap) -> ModuleMap {
        assert!(self.tgt == other.src, "composition of incompatible maps");
        ModuleMap::new_unchecked(&self.src, &other.tgt, other.matrix.mul(&self.matrix))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ModuleMap) -> ModuleMap {
        other.then(self)
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        assert!(self.src == other.src && self.tgt == other.tgt, "sum of incompatible maps");
        ModuleMap::new_unchecked(&self.src, &self.tgt, self.matrix.add(&other.matrix))
    }

    pub fn sub(&self, other: &ModuleMap) -> ModuleMap {
        assert!(self.src == other.src && self.tgt == other.tgt, "difference of incompatible maps");
        ModuleMap::new_unchecked(&self.src, &self.tgt, self.matrix.sub(&other.matrix))
    }

    pub fn neg(&self) -> ModuleMap {
        self.scale(&Int::from(-1))
    }

    pub fn scale(&self, c: &Int) -> ModuleMap {
        ModuleMap::new_unchecked(&self.src, &self.tgt, self.matrix.scale(c))
    }

    /// Equality as homomorphisms: the difference vanishes on every generator.
    pub fn equals(&self, other: &ModuleMap) -> bool {
        self.src == other.src && self.tgt == other.tgt && self.tgt.kills_columns(&self.matrix.sub(&other.matrix))
    }

    pub fn is_zero(&self) -> bool {
        self.tgt.kills_columns(&self.matrix)
    }

    /// The map in diagonal coordinates, `φ_tgt · F · ψ_src`, reduced row-wise.
    pub fn diagonal_matrix(&self) -> IntMatrix {
        let dt = self.tgt.diag();
        let ds = self.src.diag();
        let mut m = dt.phi.mul(&self.matrix).mul(&ds.psi);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let x = reduce_mod(self.ring(), m.get(i, j).clone(), &dt.moduli[i]);
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn apply(&self, v: &[Int]) -> Vec<Int> {
        self.matrix.mul(&IntMatrix::column(v.to_vec())).reduced(self.ring()).col_vec(0)
    }

    pub fn is_injective(&self) -> bool {
        super::kernel(self).0.is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        super::cokernel(self).0.is_zero()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

impl fmt::Debug for ModuleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModuleMap({:?}: {} -> {})", self.matrix, self.src, self.tgt)
    }
}
