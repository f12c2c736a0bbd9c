use crate::int::Int;

use super::{kernel_basis, smith_tracked, solve_with, IntMatrix, Ring, Track};

/// Rewrites `A·x ≡ 0 (mod q_i)` as a plain linear system over the ring. Over ℤ/m the
/// rows are scaled; over ℤ an auxiliary column `q_i·e_i` is appended for each nonzero
/// modulus. Returns the matrix and the number of original unknowns.
fn augment(a: &IntMatrix, moduli: &[Int], ring: &Ring) -> IntMatrix {
    assert_eq!(a.rows(), moduli.len(), "one modulus per row");
    match ring {
        Ring::IntegersMod(_) => {
            let mut out = a.clone();
            for (i, q) in moduli.iter().enumerate() {
                let s = ring.congruence_scale(q).unwrap();
                if !s.is_one() {
                    for j in 0..out.cols() {
                        let x = ring.mul(out.get(i, j), &s);
                        out.set(i, j, x);
                    }
                }
            }
            out.reduced(ring)
        }
        Ring::Integers => {
            let nz: Vec<usize> = (0..moduli.len()).filter(|&i| !moduli[i].is_zero()).collect();
            let mut out = IntMatrix::zeros(a.rows(), a.cols() + nz.len());
            out.set_block(0, 0, a);
            for (k, &i) in nz.iter().enumerate() {
                out.set(i, a.cols() + k, moduli[i].clone());
            }
            out
        }
    }
}

fn scale_rhs(b: &IntMatrix, moduli: &[Int], ring: &Ring) -> IntMatrix {
    match ring {
        Ring::IntegersMod(_) => {
            let mut out = b.clone();
            for (i, q) in moduli.iter().enumerate() {
                let s = ring.congruence_scale(q).unwrap();
                for j in 0..out.cols() {
                    let x = ring.mul(out.get(i, j), &s);
                    out.set(i, j, x);
                }
            }
            out
        }
        Ring::Integers => b.clone(),
    }
}

/// Generators of `{x : A·x ≡ 0 (mod q_i) row-wise}`, compressed to at most `A.cols()`
/// columns.
pub fn congruence_kernel(a: &IntMatrix, moduli: &[Int], ring: &Ring) -> IntMatrix {
    let n = a.cols();
    let k = kernel_basis(&augment(a, moduli, ring), ring);
    image_basis(&k.block(0, 0, n, k.cols()), ring)
}

/// Some `X` with `A·X ≡ B (mod q_i)` row-wise.
pub fn solve_congruence(a: &IntMatrix, moduli: &[Int], b: &IntMatrix, ring: &Ring) -> Option<IntMatrix> {
    let n = a.cols();
    let aug = augment(a, moduli, ring);
    let s = smith_tracked(&aug, ring, Track { u: true, u_inv: false, v: true, v_inv: false });
    let x = solve_with(&s, &scale_rhs(b, moduli, ring), ring)?;
    Some(x.block(0, 0, n, x.cols()))
}

/// A generating set of the column span of `g` with at most `g.rows()` columns.
pub fn image_basis(g: &IntMatrix, ring: &Ring) -> IntMatrix {
    let mut out = if g.cols() <= 1 && !g.reduced(ring).is_zero() { g.reduced(ring) } else { span_basis(g, ring) };
    if ring.is_integers() {
        for k in 0..out.cols() {
            if (0..out.rows()).map(|r| out.get(r, k)).find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                for r in 0..out.rows() {
                    let x = -out.get(r, k);
                    out.set(r, k, x);
                }
            }
        }
    }
    out
}

fn span_basis(g: &IntMatrix, ring: &Ring) -> IntMatrix {
    let s = smith_tracked(g, ring, Track { u: false, u_inv: true, v: false, v_inv: false });
    let diag = s.diagonal();
    let keep: Vec<usize> = (0..diag.len()).filter(|&i| !ring.is_zero(&diag[i])).collect();
    let mut out = IntMatrix::zeros(g.rows(), keep.len());
    for (k, &i) in keep.iter().enumerate() {
        for r in 0..g.rows() {
            out.set(r, k, ring.mul(s.u_inv.get(r, i), &diag[i]));
        }
    }
    out
}
