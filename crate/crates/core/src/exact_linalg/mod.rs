//! Exact matrix algebra over ℤ and ℤ/m.

mod matrix;
mod ring;
mod smith;
mod system;

pub use matrix::IntMatrix;
pub use ring::Ring;
pub use smith::{kernel_basis, smith_normal_form, solve_linear, SmithDecomposition};
pub(crate) use smith::{smith_tracked, solve_with, Track};
pub use system::CongruenceSystem;
mod congruence;
pub use congruence::{congruence_kernel, image_basis, solve_congruence};
