use std::collections::BTreeMap;

use crate::int::Int;

use super::{smith_tracked, solve_with, IntMatrix, Ring, Track};

/// A sparse system of congruences `Σ a_ij x_j ≡ b_i (mod q_i)` over the ring, where
/// `q_i = 0` asks for equality. Unknowns that never meet in a row are solved
/// independently, so block structured systems stay cheap.
#[derive(Clone, Debug)]
pub struct CongruenceSystem {
    ring: Ring,
    vars: usize,
    rows: Vec<Row>,
}

#[derive(Clone, Debug)]
struct Row {
    modulus: Int,
    terms: BTreeMap<usize, Int>,
    rhs: Int,
}

impl CongruenceSystem {
    pub fn new(ring: Ring, vars: usize) -> CongruenceSystem {
        CongruenceSystem { ring, vars, rows: Vec::new() }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn add_var(&mut self) -> usize {
        self.vars += 1;
        self.vars - 1
    }

    /// Starts a new row and returns its index.
    pub fn add_row(&mut self, modulus: Int, rhs: Int) -> usize {
        let modulus = self.ring.ideal_generator(&modulus);
        self.rows.push(Row { modulus, terms: BTreeMap::new(), rhs: self.ring.reduce(rhs) });
        self.rows.len() - 1
    }

    pub fn add_term(&mut self, row: usize, var: usize, coef: &Int) {
        debug_assert!(var < self.vars);
        if coef.is_zero() {
            return;
        }
        let ring = &self.ring;
        let e = self.rows[row].terms.entry(var).or_insert_with(Int::zero);
        *e = ring.reduce(&*e + coef);
    }

    pub fn add_rhs(&mut self, row: usize, v: &Int) {
        let r = &mut self.rows[row];
        r.rhs = self.ring.reduce(&r.rhs + v);
    }

    fn trivially_true(&self, row: &Row) -> bool {
        row.modulus.is_one() || self.ring.is_zero(&self.reduce_mod(&row.rhs, &row.modulus))
    }

    fn reduce_mod(&self, x: &Int, q: &Int) -> Int {
        if q.is_zero() {
            self.ring.reduce(x.clone())
        } else {
            x.rem_euclid(q)
        }
    }

    /// A solution vector, or `None` if the congruences are inconsistent.
    pub fn solve(&self) -> Option<Vec<Int>> {
        let mut parent: Vec<usize> = (0..self.vars).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut live: Vec<&Row> = Vec::new();
        for row in &self.rows {
            let nonzero = row.terms.iter().any(|(_, c)| !self.reduce_mod(c, &row.modulus).is_zero());
            if !nonzero {
                if !self.trivially_true(row) {
                    return None;
                }
                continue;
            }
            if row.modulus.is_one() {
                continue;
            }
            let mut it = row.terms.keys();
            let first = *it.next().unwrap();
            for &v in it {
                let (a, b) = (find(&mut parent, first), find(&mut parent, v));
                if a != b {
                    parent[a] = b;
                }
            }
            live.push(row);
        }
        let mut groups: BTreeMap<usize, Vec<&Row>> = BTreeMap::new();
        for row in live {
            let v = *row.terms.keys().next().unwrap();
            let root = find(&mut parent, v);
            groups.entry(root).or_default().push(row);
        }
        let mut solution = vec![Int::zero(); self.vars];
        for (_, rows) in groups {
            let mut vars: Vec<usize> = rows.iter().flat_map(|r| r.terms.keys().copied()).collect();
            vars.sort_unstable();
            vars.dedup();
            let index: BTreeMap<usize, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
            let aux_rows: Vec<usize> = match self.ring {
                Ring::Integers => (0..rows.len()).filter(|&i| !rows[i].modulus.is_zero()).collect(),
                Ring::IntegersMod(_) => Vec::new(),
            };
            let ncols = vars.len() + aux_rows.len();
            let mut a = IntMatrix::zeros(rows.len(), ncols);
            let mut b = IntMatrix::zeros(rows.len(), 1);
            for (i, row) in rows.iter().enumerate() {
                let scale = self.ring.congruence_scale(&row.modulus).unwrap_or_else(Int::one);
                for (v, c) in &row.terms {
                    a.set(i, index[v], self.ring.mul(c, &scale));
                }
                b.set(i, 0, self.ring.mul(&row.rhs, &scale));
            }
            for (k, &i) in aux_rows.iter().enumerate() {
                a.set(i, vars.len() + k, rows[i].modulus.clone());
            }
            let s = smith_tracked(&a, &self.ring, Track { u: true, u_inv: false, v: true, v_inv: false });
            let x = solve_with(&s, &b, &self.ring)?;
            for (k, &v) in vars.iter().enumerate() {
                solution[v] = x.get(k, 0).clone();
            }
        }
        Some(solution)
    }

    /// Checks a candidate solution against every row.
    pub fn satisfied_by(&self, x: &[Int]) -> bool {
        self.rows.iter().all(|row| {
            let mut acc = -&row.rhs;
            for (v, c) in &row.terms {
                acc += &(c * &x[*v]);
            }
            self.ring.is_zero(&self.reduce_mod(&acc, &row.modulus))
        })
    }
}
