use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::int::Int;

use super::{IntMatrix, Ring};

/// `U·A·V = D` with `U`, `V` invertible over the ring and `D` diagonal with a
/// divisibility chain. The inverses of the transforms are kept alongside.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithDecomposition {
    pub ring: Ring,
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithDecomposition {
    /// Diagonal entries `d_1, …, d_min(r,c)`.
    pub fn diagonal(&self) -> Vec<Int> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d.get(i, i).clone()).collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|d| !d.is_zero()).count()
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Track {
    pub u: bool,
    pub u_inv: bool,
    pub v: bool,
    pub v_inv: bool,
}

impl Track {
    pub const ALL: Track = Track { u: true, u_inv: true, v: true, v_inv: true };
}

pub fn smith_normal_form(a: &IntMatrix, ring: &Ring) -> SmithDecomposition {
    smith_tracked(a, ring, Track::ALL)
}

fn pivot_key(ring: &Ring, x: &Int) -> (Int, Int) {
    match ring {
        Ring::Integers => (x.abs(), Int::zero()),
        Ring::IntegersMod(m) => (x.gcd(m), x.clone()),
    }
}

struct Work<'a> {
    ring: &'a Ring,
    a: IntMatrix,
    u: Option<IntMatrix>,
    u_inv: Option<IntMatrix>,
    v: Option<IntMatrix>,
    v_inv: Option<IntMatrix>,
}

impl Work<'_> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if let Some(u) = &mut self.u {
            u.swap_rows(i, j);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if let Some(v) = &mut self.v {
            v.swap_cols(i, j);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.swap_rows(i, j);
        }
    }

    /// Row operation `(row_a, row_b) ← [[p, q], [r, s]]·(row_a, row_b)` with `ps − qr` a unit `e`.
    fn rows(&mut self, a: usize, b: usize, p: &Int, q: &Int, r: &Int, s: &Int) {
        let ring = self.ring;
        self.a.combine_rows(a, b, p, q, r, s, ring);
        if let Some(u) = &mut self.u {
            u.combine_rows(a, b, p, q, r, s, ring);
        }
        if let Some(ui) = &mut self.u_inv {
            let e = ring.reduce(&(p * s) - &(q * r));
            let ei = ring.inverse(&e).expect("row transform must be invertible");
            let (p2, q2, r2, s2) = (s * &ei, -(r * &ei), -(q * &ei), p * &ei);
            ui.combine_cols(a, b, &p2, &q2, &r2, &s2, ring);
        }
    }

    /// Column operation: new `col_a = p·col_a + q·col_b`, new `col_b = r·col_a + s·col_b`.
    fn cols(&mut self, a: usize, b: usize, p: &Int, q: &Int, r: &Int, s: &Int) {
        let ring = self.ring;
        self.a.combine_cols(a, b, p, q, r, s, ring);
        if let Some(v) = &mut self.v {
            v.combine_cols(a, b, p, q, r, s, ring);
        }
        if let Some(vi) = &mut self.v_inv {
            let e = ring.reduce(&(p * s) - &(q * r));
            let ei = ring.inverse(&e).expect("column transform must be invertible");
            let (p2, q2, r2, s2) = (s * &ei, -(r * &ei), -(q * &ei), p * &ei);
            vi.combine_rows(a, b, &p2, &q2, &r2, &s2, ring);
        }
    }

    fn scale_row(&mut self, t: usize, c: &Int) {
        let ring = self.ring;
        let ci = ring.inverse(c).expect("scaling by a non-unit");
        for j in 0..self.a.cols() {
            let x = ring.mul(self.a.get(t, j), c);
            self.a.set(t, j, x);
        }
        if let Some(u) = &mut self.u {
            for j in 0..u.cols() {
                let x = ring.mul(u.get(t, j), c);
                u.set(t, j, x);
            }
        }
        if let Some(ui) = &mut self.u_inv {
            for i in 0..ui.rows() {
                let x = ring.mul(ui.get(i, t), &ci);
                ui.set(i, t, x);
            }
        }
    }

    /// Clears column `t` below the pivot and row `t` right of the pivot.
    fn clear(&mut self, t: usize) {
        let ring = self.ring;
        let (r, c) = self.a.shape();
        loop {
            for i in t + 1..r {
                let x = self.a.get(i, t).clone();
                if x.is_zero() {
                    continue;
                }
                let p = self.a.get(t, t).clone();
                let one = Int::one();
                let zero = Int::zero();
                match ring.divide(&x, &p) {
                    Some(q) => self.rows(t, i, &one, &zero, &-q, &one),
                    None => {
                        let (g, s, tt) = p.ext_gcd(&x);
                        let (pg, xg) = (p.div_exact(&g), x.div_exact(&g));
                        self.rows(t, i, &s, &tt, &-xg, &pg);
                    }
                }
            }
            for j in t + 1..c {
                let x = self.a.get(t, j).clone();
                if x.is_zero() {
                    continue;
                }
                let p = self.a.get(t, t).clone();
                let one = Int::one();
                let zero = Int::zero();
                match ring.divide(&x, &p) {
                    Some(q) => self.cols(t, j, &one, &zero, &-q, &one),
                    None => {
                        let (g, s, tt) = p.ext_gcd(&x);
                        let (pg, xg) = (p.div_exact(&g), x.div_exact(&g));
                        // new col_t = s·col_t + tt·col_j, new col_j = −xg·col_t + pg·col_j
                        self.cols(t, j, &s, &tt, &-xg, &pg);
                    }
                }
            }
            if (t + 1..r).all(|i| self.a.get(i, t).is_zero()) && (t + 1..c).all(|j| self.a.get(t, j).is_zero()) {
                return;
            }
        }
    }
}

pub(crate) fn smith_tracked(a: &IntMatrix, ring: &Ring, track: Track) -> SmithDecomposition {
    let (r, c) = a.shape();
    let mut w = Work {
        ring,
        a: a.reduced(ring),
        u: track.u.then(|| IntMatrix::identity(r)),
        u_inv: track.u_inv.then(|| IntMatrix::identity(r)),
        v: track.v.then(|| IntMatrix::identity(c)),
        v_inv: track.v_inv.then(|| IntMatrix::identity(c)),
    };
    let n = r.min(c);
    let mut t = 0;
    while t < n {
        let mut best: Option<((Int, Int), usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                let x = w.a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let key = pivot_key(ring, x);
                if best.as_ref().map_or(true, |(k, _, _)| key < *k) {
                    best = Some((key, i, j));
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            w.clear(t);
            let (unit, _) = ring.normalize(w.a.get(t, t));
            if !unit.is_one() {
                w.scale_row(t, &unit);
            }
            let p = w.a.get(t, t).clone();
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !p.divides(w.a.get(i, j))));
            match bad {
                Some(i) => {
                    let one = Int::one();
                    let zero = Int::zero();
                    w.rows(t, i, &one, &one, &zero, &one);
                }
                None => break,
            }
        }
        t += 1;
    }
    let empty = |k| IntMatrix::zeros(k, k);
    SmithDecomposition {
        ring: ring.clone(),
        d: w.a,
        u: w.u.unwrap_or_else(|| empty(0)),
        u_inv: w.u_inv.unwrap_or_else(|| empty(0)),
        v: w.v.unwrap_or_else(|| empty(0)),
        v_inv: w.v_inv.unwrap_or_else(|| empty(0)),
    }
}

/// Some `X` with `A·X = B` over the ring, or `None` when the system is inconsistent.
pub fn solve_linear(a: &IntMatrix, b: &IntMatrix, ring: &Ring) -> Result<Option<IntMatrix>> {
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "A has {} rows but B has {}",
            a.rows(),
            b.rows()
        )));
    }
    let s = smith_tracked(a, ring, Track { u: true, u_inv: false, v: true, v_inv: false });
    Ok(solve_with(&s, b, ring))
}

pub(crate) fn solve_with(s: &SmithDecomposition, b: &IntMatrix, ring: &Ring) -> Option<IntMatrix> {
    let ub = s.u.mul(b).reduced(ring);
    let diag = s.diagonal();
    let cols = s.v.rows();
    let mut y = IntMatrix::zeros(cols, b.cols());
    for i in 0..ub.rows() {
        let d = diag.get(i).cloned().unwrap_or_default();
        for k in 0..b.cols() {
            let rhs = ub.get(i, k);
            if rhs.is_zero() {
                continue;
            }
            let yi = ring.divide(rhs, &d)?;
            y.set(i, k, yi);
        }
    }
    Some(s.v.mul(&y).reduced(ring))
}

/// Generators of `{x : A·x = 0}` as columns.
pub fn kernel_basis(a: &IntMatrix, ring: &Ring) -> IntMatrix {
    let s = smith_tracked(a, ring, Track { u: false, u_inv: false, v: true, v_inv: false });
    kernel_from(&s, ring)
}

pub(crate) fn kernel_from(s: &SmithDecomposition, ring: &Ring) -> IntMatrix {
    let diag = s.diagonal();
    let c = s.v.rows();
    let mut cols: Vec<Vec<Int>> = Vec::new();
    for i in 0..c {
        let d = diag.get(i).cloned().unwrap_or_default();
        let factor = if d.is_zero() {
            Int::one()
        } else {
            match ring.modulus() {
                None => continue,
                Some(m) => {
                    let f = m.div_exact(&d.gcd(m));
                    if ring.is_zero(&f) {
                        continue;
                    }
                    f
                }
            }
        };
        cols.push((0..c).map(|k| ring.mul(s.v.get(k, i), &factor)).collect());
    }
    let mut out = IntMatrix::zeros(c, cols.len());
    for (j, col) in cols.into_iter().enumerate() {
        for (i, x) in col.into_iter().enumerate() {
            out.set(i, j, x);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(a: &IntMatrix, ring: &Ring) -> SmithDecomposition {
        let s = smith_normal_form(a, ring);
        assert_eq!(s.u.mul(a).mul(&s.v).reduced(ring), s.d, "UAV = D for {a:?}");
        assert!(s.u.mul(&s.u_inv).reduced(ring).is_identity());
        assert!(s.v.mul(&s.v_inv).reduced(ring).is_identity());
        let (r, c) = a.shape();
        for i in 0..r {
            for j in 0..c {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert!(w[0].divides(&w[1]) || w[1].is_zero(), "chain {diag:?}");
        }
        for d in &diag {
            assert!(!d.is_negative());
            if let Some(m) = ring.modulus() {
                assert!(d.is_zero() || d.divides(m));
            }
        }
        s
    }

    #[test]
    fn examples() {
        let z = Ring::Integers;
        let s = check(&IntMatrix::from_i64(&[&[2, 4], &[6, 8]]), &z);
        assert_eq!(s.diagonal(), vec![Int::from(2), Int::from(4)]);
        let s = check(&IntMatrix::from_i64(&[&[1, 0], &[0, 6]]), &z);
        assert_eq!(s.diagonal(), vec![Int::from(1), Int::from(6)]);
        let s = check(&IntMatrix::from_i64(&[&[0]]), &z);
        assert_eq!(s.diagonal(), vec![Int::zero()]);
        let s = check(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]]), &z);
        assert_eq!(s.diagonal(), vec![Int::from(1), Int::from(6)]);
        check(&IntMatrix::zeros(0, 3), &z);
        check(&IntMatrix::zeros(2, 0), &z);
    }

    #[test]
    fn examples_mod() {
        let r = Ring::zmod(12);
        let s = check(&IntMatrix::from_i64(&[&[8, 3]]), &r);
        assert_eq!(s.diagonal(), vec![Int::from(1)]);
        let s = check(&IntMatrix::from_i64(&[&[10, 0], &[0, 9]]), &r);
        assert_eq!(s.diagonal(), vec![Int::from(1), Int::from(6)]);
    }

    #[test]
    fn solve_examples() {
        let z = Ring::Integers;
        let a = IntMatrix::from_i64(&[&[2]]);
        assert_eq!(solve_linear(&a, &IntMatrix::from_i64(&[&[3]]), &z).unwrap(), None);
        assert_eq!(
            solve_linear(&a, &IntMatrix::from_i64(&[&[4]]), &z).unwrap(),
            Some(IntMatrix::from_i64(&[&[2]]))
        );
        let b = IntMatrix::from_i64(&[&[5, -1], &[7, 0]]);
        assert_eq!(solve_linear(&IntMatrix::identity(2), &b, &z).unwrap(), Some(b));
        assert!(solve_linear(&a, &IntMatrix::zeros(2, 1), &z).is_err());
    }

    #[test]
    fn kernel_examples() {
        let z = Ring::Integers;
        let k = kernel_basis(&IntMatrix::from_i64(&[&[2, -1]]), &z);
        assert_eq!(k.cols(), 1);
        let col = k.col_vec(0);
        let sign = if col[0].is_negative() { Int::from(-1) } else { Int::one() };
        assert_eq!(vec![&col[0] * &sign, &col[1] * &sign], vec![Int::from(1), Int::from(2)]);
        assert_eq!(kernel_basis(&IntMatrix::identity(3), &z).cols(), 0);
        let k = kernel_basis(&IntMatrix::from_i64(&[&[2]]), &Ring::zmod(4));
        assert_eq!(k, IntMatrix::from_i64(&[&[2]]));
    }

    fn small_matrix() -> impl Strategy<Value = IntMatrix> {
        (0usize..=5, 0usize..=5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-10i64..=10, r * c)
                .prop_map(move |v| IntMatrix::from_vec(r, c, v.into_iter().map(Int::from).collect()).unwrap())
        })
    }

    proptest! {
        #[test]
        fn snf_invariants_z(a in small_matrix()) {
            check(&a, &Ring::Integers);
        }

        #[test]
        fn snf_invariants_mod(a in small_matrix(), m in 2i64..30) {
            check(&a, &Ring::zmod(m));
        }

        #[test]
        fn kernel_annihilated(a in small_matrix(), m in prop_oneof![Just(0i64), 2i64..20]) {
            let ring = if m == 0 { Ring::Integers } else { Ring::zmod(m) };
            let k = kernel_basis(&a, &ring);
            prop_assert!(a.mul(&k).reduced(&ring).is_zero());
        }
    }
}
