use crate::exact_linalg::{CongruenceSystem, IntMatrix, Ring};
use crate::int::Int;

use super::{FpModule, ModuleMap};

/// Linear equations in unknown module maps.
///
/// Each unknown `X : M → N` is parametrized in diagonal coordinates as
/// `X̃_ab = c_ab·t_ab`, one scalar per nonzero cell of `Hom(R/(m_b), R/(n_a))`, so
/// every assignment is automatically a well-defined map. Equations are identities
/// `Σ scale·L·X·R + E = 0` between maps `P → Q`, checked in the diagonal coordinates
/// of `P` and `Q`.
#[derive(Clone, Debug)]
pub struct MapSystem {
    ring: Ring,
    sys: CongruenceSystem,
    unknowns: Vec<Unknown>,
    equations: Vec<Equation>,
}

#[derive(Clone, Debug)]
struct Unknown {
    src: FpModule,
    tgt: FpModule,
    /// Per target diagonal index `a`: `(b, c, var)`.
    cells: Vec<Vec<(usize, Int, usize)>>,
}

#[derive(Clone, Debug)]
struct Equation {
    src: FpModule,
    tgt: FpModule,
    first_row: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MapUnknown(usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EquationId(usize);

#[derive(Clone, Debug)]
pub struct MapSolution {
    values: Vec<Int>,
}

impl MapSystem {
    pub fn new(ring: &Ring) -> MapSystem {
        MapSystem { ring: ring.clone(), sys: CongruenceSystem::new(ring.clone(), 0), unknowns: Vec::new(), equations: Vec::new() }
    }

    pub fn unknown(&mut self, src: &FpModule, tgt: &FpModule) -> MapUnknown {
        let ds = src.diag();
        let dt = tgt.diag();
        let mut cells = vec![Vec::new(); dt.len()];
        for (a, row) in cells.iter_mut().enumerate() {
            for b in 0..ds.len() {
                if let Some((c, _)) = self.ring.hom_cell(&ds.moduli[b], &dt.moduli[a]) {
                    row.push((b, c, self.sys.add_var()));
                }
            }
        }
        self.unknowns.push(Unknown { src: src.clone(), tgt: tgt.clone(), cells });
        MapUnknown(self.unknowns.len() - 1)
    }

    pub fn equation(&mut self, src: &FpModule, tgt: &FpModule) -> EquationId {
        let ds = src.diag();
        let dt = tgt.diag();
        let mut first_row = None;
        for i in 0..dt.len() {
            for _ in 0..ds.len() {
                let r = self.sys.add_row(dt.moduli[i].clone(), Int::zero());
                first_row.get_or_insert(r);
            }
        }
        let first_row = first_row.unwrap_or(usize::MAX);
        self.equations.push(Equation { src: src.clone(), tgt: tgt.clone(), first_row });
        EquationId(self.equations.len() - 1)
    }

    fn row(&self, eq: &Equation, i: usize, l: usize) -> usize {
        eq.first_row + i * eq.src.diag().len() + l
    }

    /// Adds `scale · L · X · R` to an equation; `None` stands for an identity.
    pub fn add_term(&mut self, eq: EquationId, scale: &Int, left: Option<&IntMatrix>, x: MapUnknown, right: Option<&IntMatrix>) {
        let e = self.equations[eq.0].clone();
        let u = self.unknowns[x.0].clone();
        let lq = match left {
            Some(l) => e.tgt.diag().phi.mul(l).mul(&u.tgt.diag().psi).reduced(&self.ring),
            None => {
                debug_assert!(e.tgt == u.tgt);
                IntMatrix::identity(u.tgt.diag().len())
            }
        };
        let rp = match right {
            Some(r) => u.src.diag().phi.mul(r).mul(&e.src.diag().psi).reduced(&self.ring),
            None => {
                debug_assert!(e.src == u.src);
                IntMatrix::identity(u.src.diag().len())
            }
        };
        let kp = e.src.diag().len();
        for i in 0..lq.rows() {
            for (a, cells) in u.cells.iter().enumerate() {
                let la = lq.get(i, a);
                if la.is_zero() {
                    continue;
                }
                let sla = scale * la;
                for (b, c, var) in cells {
                    let coef = &sla * c;
                    for l in 0..kp {
                        let r = rp.get(*b, l);
                        if !r.is_zero() {
                            let row = self.row(&e, i, l);
                            self.sys.add_term(row, *var, &(&coef * r));
                        }
                    }
                }
            }
        }
    }

    pub fn add_map_term(&mut self, eq: EquationId, scale: &Int, left: Option<&ModuleMap>, x: MapUnknown, right: Option<&ModuleMap>) {
        self.add_term(eq, scale, left.map(ModuleMap::matrix), x, right.map(ModuleMap::matrix));
    }

    /// Adds the constant `scale · E` (a map `P → Q` given by its matrix).
    pub fn add_constant(&mut self, eq: EquationId, scale: &Int, e_mat: &IntMatrix) {
        let e = self.equations[eq.0].clone();
        let c = e.tgt.diag().phi.mul(e_mat).mul(&e.src.diag().psi);
        for i in 0..c.rows() {
            for l in 0..c.cols() {
                let v = c.get(i, l);
                if !v.is_zero() {
                    let row = self.row(&e, i, l);
                    self.sys.add_rhs(row, &-(scale * v));
                }
            }
        }
    }

    pub fn solve(&self) -> Option<MapSolution> {
        self.sys.solve().map(|values| MapSolution { values })
    }

    pub fn value(&self, sol: &MapSolution, x: MapUnknown) -> ModuleMap {
        let u = &self.unknowns[x.0];
        let ds = u.src.diag();
        let dt = u.tgt.diag();
        let mut xt = IntMatrix::zeros(dt.len(), ds.len());
        for (a, cells) in u.cells.iter().enumerate() {
            for (b, c, var) in cells {
                xt.set(a, *b, self.ring.mul(c, &sol.values[*var]));
            }
        }
        ModuleMap::new_unchecked(&u.src, &u.tgt, dt.psi.mul(&xt).mul(&ds.phi))
    }

    pub fn variable_count(&self) -> usize {
        self.sys.vars()
    }
}
