//! Finite-window cochain complexes and the complex-level calculus.

mod complex;
mod hom;
mod ops;

pub use complex::{ChainMap, Complex, Homotopy};
pub use hom::{hom_complex, hom_map, tensor_complex, tensor_map, HomComplex, HomSummand, TensorComplex, TensorSummand};
pub use ops::{
    cone, contractible_on, direct_sum_complexes, homology, homology_data, induced_on_homology, is_acyclic, is_quasi_isomorphism, shift, shift_map,
    truncate_geq, truncate_leq, truncate_leq_map, ComplexSum, Cone, HomologyData,
};
pub(crate) use ops::{sign, sum_module};

#[cfg(test)]
mod tests;
