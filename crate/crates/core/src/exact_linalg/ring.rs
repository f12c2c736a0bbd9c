use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::int::Int;

/// The coefficient rings supported by the workbench: ℤ and ℤ/m with m ≥ 2.
///
/// Elements over ℤ/m are kept as canonical residues in `0..m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ring {
    Integers,
    IntegersMod(Int),
}

impl Ring {
    pub fn zmod(m: i64) -> Ring {
        Ring::try_zmod(Int::from(m)).expect("modulus must be at least 2")
    }

    pub fn try_zmod(m: Int) -> Result<Ring> {
        if m < Int::from(2) {
            return Err(Error::Input(format!("ring modulus must be >= 2, got {m}")));
        }
        Ok(Ring::IntegersMod(m))
    }

    pub fn modulus(&self) -> Option<&Int> {
        match self {
            Ring::Integers => None,
            Ring::IntegersMod(m) => Some(m),
        }
    }

    pub fn is_integers(&self) -> bool {
        matches!(self, Ring::Integers)
    }

    #[inline]
    pub fn reduce(&self, a: Int) -> Int {
        match self {
            Ring::Integers => a,
            Ring::IntegersMod(m) => a.rem_euclid(m),
        }
    }

    #[inline]
    pub fn add(&self, a: &Int, b: &Int) -> Int {
        self.reduce(a + b)
    }

    #[inline]
    pub fn sub(&self, a: &Int, b: &Int) -> Int {
        self.reduce(a - b)
    }

    #[inline]
    pub fn mul(&self, a: &Int, b: &Int) -> Int {
        self.reduce(a * b)
    }

    #[inline]
    pub fn neg(&self, a: &Int) -> Int {
        self.reduce(-a)
    }

    pub fn is_zero(&self, a: &Int) -> bool {
        self.reduce(a.clone()).is_zero()
    }

    pub fn is_unit(&self, a: &Int) -> bool {
        match self {
            Ring::Integers => a.abs().is_one(),
            Ring::IntegersMod(m) => a.gcd(m).is_one(),
        }
    }

    /// The canonical generator of the ideal `(a)`: `|a|` over ℤ, `gcd(a, m)` over ℤ/m
    /// (zero stays zero).
    pub fn ideal_generator(&self, a: &Int) -> Int {
        match self {
            Ring::Integers => a.abs(),
            Ring::IntegersMod(m) => {
                let r = a.rem_euclid(m);
                if r.is_zero() {
                    r
                } else {
                    r.gcd(m)
                }
            }
        }
    }

    /// Returns `(u, c)` with `u` a unit, `c = u·a` and `c` the canonical ideal generator.
    pub fn normalize(&self, a: &Int) -> (Int, Int) {
        match self {
            Ring::Integers => {
                if a.is_negative() {
                    (Int::from(-1), -a)
                } else {
                    (Int::one(), a.clone())
                }
            }
            Ring::IntegersMod(m) => {
                let a = a.rem_euclid(m);
                if a.is_zero() {
                    return (Int::one(), a);
                }
                let g = a.gcd(m);
                let a1 = a.div_exact(&g);
                let m1 = m.div_exact(&g);
                let c = if m1.is_one() {
                    Int::one()
                } else {
                    let (_, s, _) = a1.ext_gcd(&m1);
                    s.rem_euclid(&m1)
                };
                // lift c mod m1 to a unit mod m
                let mut u = c;
                while !u.gcd(m).is_one() {
                    u = &u + &m1;
                }
                (u.rem_euclid(m), g)
            }
        }
    }

    pub fn inverse(&self, u: &Int) -> Option<Int> {
        match self {
            Ring::Integers => {
                if u.is_one() || *u == Int::from(-1) {
                    Some(u.clone())
                } else {
                    None
                }
            }
            Ring::IntegersMod(m) => {
                let (g, s, _) = u.ext_gcd(m);
                g.is_one().then(|| s.rem_euclid(m))
            }
        }
    }

    /// Some `x` with `a·x = b`, if one exists.
    pub fn divide(&self, b: &Int, a: &Int) -> Option<Int> {
        match self {
            Ring::Integers => {
                if a.is_zero() {
                    return b.is_zero().then(Int::zero);
                }
                a.divides(b).then(|| b.div_exact(a))
            }
            Ring::IntegersMod(m) => {
                let a = a.rem_euclid(m);
                let b = b.rem_euclid(m);
                let g = a.gcd(m);
                if !g.divides(&b) {
                    return None;
                }
                if a.is_zero() {
                    return Some(Int::zero());
                }
                let m1 = m.div_exact(&g);
                let a1 = a.div_exact(&g);
                let b1 = b.div_exact(&g);
                let (_, s, _) = a1.ext_gcd(&m1);
                Some((&b1 * &s).rem_euclid(&m1))
            }
        }
    }

    /// Multiplier turning a congruence modulo the diagonal modulus `b` into an equation
    /// over the ring: over ℤ/m, `x ≡ 0 (mod b)` iff `(m / gcd(b, m))·x = 0`. Over ℤ there
    /// is no such multiplier and callers add an auxiliary unknown instead.
    pub fn congruence_scale(&self, b: &Int) -> Option<Int> {
        match self {
            Ring::Integers => None,
            Ring::IntegersMod(m) => {
                let g = if b.is_zero() { m.clone() } else { b.gcd(m) };
                Some(m.div_exact(&g))
            }
        }
    }

    /// Order data of `Hom(R/(a), R/(b))` for canonical moduli `a`, `b` (zero meaning a
    /// free summand): returns `(c, o)` where maps are `1 ↦ c·t` with `t` ranging over
    /// `R/(o)`, or `None` when the Hom group is zero.
    pub fn hom_cell(&self, a: &Int, b: &Int) -> Option<(Int, Int)> {
        match self {
            Ring::Integers => {
                if b.is_zero() {
                    return a.is_zero().then(|| (Int::one(), Int::zero()));
                }
                let g = if a.is_zero() { b.clone() } else { a.gcd(b) };
                if g.is_one() {
                    return None;
                }
                Some((b.div_exact(&g), g))
            }
            Ring::IntegersMod(m) => {
                let aa = if a.is_zero() { m.clone() } else { a.clone() };
                let bb = if b.is_zero() { m.clone() } else { b.clone() };
                let g = aa.gcd(&bb);
                if g.is_one() {
                    return None;
                }
                let order = if g == *m { Int::zero() } else { g.clone() };
                Some((bb.div_exact(&g), order))
            }
        }
    }

    /// Order of `R/(a) ⊗ R/(b)` in the same convention.
    pub fn tensor_cell(&self, a: &Int, b: &Int) -> Int {
        let g = a.gcd(b);
        match self {
            Ring::IntegersMod(m) if g == *m => Int::zero(),
            _ => g,
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::IntegersMod(m) => write!(f, "Z/{m}"),
        }
    }
}
