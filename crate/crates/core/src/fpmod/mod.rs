//! Finitely presented modules over ℤ and ℤ/m and their homomorphisms.

mod map;
mod module;
mod ops;
mod system;

pub use map::{make_map, ModuleMap};
pub use module::{make_module, Diagonal, FpModule, ModuleSpec};
pub use ops::{
    cokernel, direct_sum, extend_along, factor_through_mono, has_retraction, hom_modules, image, kernel, lift_through,
    minimize, pullback, pushout, tensor_maps, tensor_modules, DirectSum, HomModule, ShortExactSequence,
};
pub use system::{EquationId, MapSolution, MapSystem, MapUnknown};
