//! Exact pure homological algebra of finite-window cochain complexes over ℤ and ℤ/m.

pub mod error;
pub mod exact_linalg;
pub mod complexes;
pub mod fpmod;
pub mod int;
pub mod monoidal;
pub mod homotopy;
pub mod purity;
pub mod random;
pub mod resolutions;

pub use error::{Error, Result};
pub use exact_linalg::{IntMatrix, Ring};
pub use complexes::{ChainMap, Complex, Homotopy};
pub use fpmod::{FpModule, ModuleMap};
pub use int::Int;
