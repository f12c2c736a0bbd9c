#![allow(dead_code)]

use purcat_core::{Complex, FpModule, Int, IntMatrix, Ring};

pub fn z() -> Ring {
    Ring::Integers
}

pub fn zm(m: i64) -> Ring {
    Ring::zmod(m)
}

pub fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

/// Module `⊕ R/(a_i)`; `0` means a free summand.
pub fn md(ring: &Ring, moduli: &[i64]) -> FpModule {
    FpModule::diagonal(ring, &ints(moduli))
}

pub fn mat(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_i64(rows)
}

/// A complex from diagonal modules and differential matrices.
pub fn cx(ring: &Ring, lo: i64, mods: &[&[i64]], diffs: &[&[&[i64]]]) -> Complex {
    let modules = mods.iter().map(|m| md(ring, m)).collect();
    let d = diffs.iter().map(|r| mat(r)).collect();
    Complex::new(ring, lo, modules, d).unwrap()
}

pub fn factors(m: &FpModule) -> Vec<Int> {
    m.invariant_factors().to_vec()
}
