//! Exact linear programming.
//!
//! Problems are brought to standard form `min cᵀx, Ax = b, x ≥ 0, b ≥ 0` with
//! one artificial column per row. A floating-point simplex run proposes a
//! basis; the exact revised simplex (sparse rational LU plus eta updates)
//! starts from it when it is exactly feasible, and from the artificial basis
//! otherwise. Every reported answer comes from the exact solver.

mod float;
mod lu;

use num_traits::{One, Signed, Zero};

use crate::geometry::Scalar;
use lu::{SparseLu, SparseVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct LinearConstraint {
    pub coeffs: Vec<(usize, Scalar)>,
    pub relation: Relation,
    pub rhs: Scalar,
}

/// Variables are nonnegative unless marked free.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<(usize, Scalar)>,
    maximize: bool,
    constraints: Vec<LinearConstraint>,
    free: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpSolution {
    Optimal { value: Scalar, x: Vec<Scalar> },
    Infeasible,
    Unbounded,
}

impl LpSolution {
    pub fn optimal(&self) -> Option<(&Scalar, &[Scalar])> {
        match self {
            LpSolution::Optimal { value, x } => Some((value, x)),
            _ => None,
        }
    }
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: Vec::new(),
            maximize: false,
            constraints: Vec::new(),
            free: vec![false; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Appends a variable and returns its index.
    pub fn add_var(&mut self, free: bool) -> usize {
        self.num_vars += 1;
        self.free.push(free);
        self.num_vars - 1
    }

    pub fn set_free(&mut self, j: usize) {
        self.free[j] = true;
    }

    pub fn minimize(&mut self, objective: Vec<(usize, Scalar)>) {
        self.objective = objective;
        self.maximize = false;
    }

    pub fn maximize(&mut self, objective: Vec<(usize, Scalar)>) {
        self.objective = objective;
        self.maximize = true;
    }

    pub fn add_constraint(&mut self, coeffs: Vec<(usize, Scalar)>, relation: Relation, rhs: Scalar) {
        debug_assert!(coeffs.iter().all(|(j, _)| *j < self.num_vars));
        self.constraints.push(LinearConstraint { coeffs, relation, rhs });
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    pub fn solve(&self) -> LpSolution {
        let sf = StandardForm::build(self);
        match sf.solve() {
            Outcome::Infeasible => LpSolution::Infeasible,
            Outcome::Unbounded => LpSolution::Unbounded,
            Outcome::Optimal(xs) => {
                let mut x = vec![Scalar::zero(); self.num_vars];
                for (col, (var, negated)) in sf.structural.iter().enumerate() {
                    if xs[col].is_zero() {
                        continue;
                    }
                    if *negated {
                        x[*var] -= &xs[col];
                    } else {
                        x[*var] += &xs[col];
                    }
                }
                let mut value: Scalar = self.objective.iter().map(|(j, c)| c * &x[*j]).sum();
                if value.is_zero() {
                    value = Scalar::zero();
                }
                LpSolution::Optimal { value, x }
            }
        }
    }
}

pub(crate) struct StandardForm {
    m: usize,
    cols: Vec<SparseVec>,
    /// Minimization cost; zero on slack and artificial columns.
    cost: Vec<Scalar>,
    b: Vec<Scalar>,
    first_artificial: usize,
    /// For each structural column: original variable and whether it is the negative part.
    structural: Vec<(usize, bool)>,
}

enum Outcome {
    Optimal(Vec<Scalar>),
    Infeasible,
    Unbounded,
}

impl StandardForm {
    fn build(lp: &LinearProgram) -> StandardForm {
        let m = lp.constraints.len();
        let mut var_cols: Vec<Vec<usize>> = Vec::with_capacity(lp.num_vars);
        let mut structural = Vec::new();
        for j in 0..lp.num_vars {
            let mut cs = vec![structural.len()];
            structural.push((j, false));
            if lp.free[j] {
                cs.push(structural.len());
                structural.push((j, true));
            }
            var_cols.push(cs);
        }
        let n_struct = structural.len();
        let mut cols: Vec<SparseVec> = vec![Vec::new(); n_struct];
        let mut b = Vec::with_capacity(m);
        for (i, con) in lp.constraints.iter().enumerate() {
            let flip = con.rhs.is_negative();
            let sign = |v: &Scalar| if flip { -v } else { v.clone() };
            let mut merged: std::collections::BTreeMap<usize, Scalar> = Default::default();
            for (j, a) in &con.coeffs {
                *merged.entry(*j).or_insert_with(Scalar::zero) += a;
            }
            for (j, a) in merged {
                if a.is_zero() {
                    continue;
                }
                let cs = &var_cols[j];
                cols[cs[0]].push((i, sign(&a)));
                if cs.len() == 2 {
                    cols[cs[1]].push((i, -sign(&a)));
                }
            }
            match con.relation {
                Relation::Le => cols.push(vec![(i, sign(&Scalar::one()))]),
                Relation::Ge => cols.push(vec![(i, sign(&-Scalar::one()))]),
                Relation::Eq => {}
            }
            b.push(sign(&con.rhs));
        }
        let first_artificial = cols.len();
        for i in 0..m {
            cols.push(vec![(i, Scalar::one())]);
        }
        let mut cost = vec![Scalar::zero(); cols.len()];
        for (j, c) in &lp.objective {
            let c = if lp.maximize { -c } else { c.clone() };
            let cs = &var_cols[*j];
            cost[cs[0]] += &c;
            if cs.len() == 2 {
                cost[cs[1]] -= &c;
            }
        }
        StandardForm { m, cols, cost, b, first_artificial, structural }
    }

    fn artificial_basis(&self) -> Vec<usize> {
        (0..self.m).map(|i| self.first_artificial + i).collect()
    }

    fn solve(&self) -> Outcome {
        if self.m == 0 {
            return if self.cost.iter().any(|c| c.is_negative()) {
                Outcome::Unbounded
            } else {
                Outcome::Optimal(vec![Scalar::zero(); self.cols.len()])
            };
        }
        let hint = float::basis_hint(self);
        let crashed = hint.map(|hint| self.crash(&hint));
        let start = crashed
            .and_then(|basis| Basis::new(self, basis))
            .filter(|b| b.x.iter().all(|v| !v.is_negative()));
        let mut basis = match start {
            Some(b) => b,
            None => Basis::new(self, self.artificial_basis()).expect("identity basis"),
        };

        let needs_phase1 = basis.cols.iter().zip(&basis.x).any(|(&c, v)| c >= self.first_artificial && !v.is_zero());
        if needs_phase1 {
            let phase1: Vec<Scalar> = (0..self.cols.len())
                .map(|j| if j >= self.first_artificial { Scalar::one() } else { Scalar::zero() })
                .collect();
            basis.optimize(&phase1, false);
            let residual = basis.cols.iter().zip(&basis.x).any(|(&c, v)| c >= self.first_artificial && !v.is_zero());
            if residual {
                return Outcome::Infeasible;
            }
        }
        if !basis.optimize(&self.cost, true) {
            return Outcome::Unbounded;
        }
        let mut x = vec![Scalar::zero(); self.cols.len()];
        for (c, v) in basis.cols.iter().zip(&basis.x) {
            x[*c] = v.clone();
        }
        Outcome::Optimal(x)
    }

    /// Keeps a maximal independent subset of `hint` and completes it with artificial columns.
    fn crash(&self, hint: &[usize]) -> Vec<usize> {
        let m = self.m;
        let mut reduced: Vec<(Vec<Scalar>, usize)> = Vec::new();
        let mut pivot_rows: Vec<bool> = vec![false; m];
        let mut chosen = Vec::new();
        let mut seen = vec![false; self.cols.len()];
        for &c in hint {
            if c >= self.cols.len() || seen[c] || c >= self.first_artificial {
                continue;
            }
            seen[c] = true;
            let mut v = vec![Scalar::zero(); m];
            for (i, a) in &self.cols[c] {
                v[*i] = a.clone();
            }
            for (r, p) in &reduced {
                if !v[*p].is_zero() {
                    let f = &v[*p] / &r[*p];
                    for (x, y) in v.iter_mut().zip(r) {
                        if !y.is_zero() {
                            *x -= &f * y;
                        }
                    }
                }
            }
            if let Some(p) = (0..m).find(|&i| !v[i].is_zero() && !pivot_rows[i]) {
                pivot_rows[p] = true;
                reduced.push((v, p));
                chosen.push(c);
            }
        }
        for (i, used) in pivot_rows.iter().enumerate() {
            if !used {
                chosen.push(self.first_artificial + i);
            }
        }
        chosen
    }
}

const REFACTOR_EVERY: usize = 64;
const DEGENERATE_STREAK: usize = 20;

struct Basis<'a> {
    sf: &'a StandardForm,
    cols: Vec<usize>,
    position: Vec<Option<usize>>,
    lu: SparseLu,
    etas: Vec<(usize, SparseVec)>,
    x: Vec<Scalar>,
}

impl<'a> Basis<'a> {
    fn new(sf: &'a StandardForm, cols: Vec<usize>) -> Option<Basis<'a>> {
        if cols.len() != sf.m {
            return None;
        }
        let lu = Self::factor(sf, &cols)?;
        let x = lu.solve(&sf.b);
        let mut position = vec![None; sf.cols.len()];
        for (k, &c) in cols.iter().enumerate() {
            position[c] = Some(k);
        }
        Some(Basis { sf, cols, position, lu, etas: Vec::new(), x })
    }

    fn factor(sf: &StandardForm, cols: &[usize]) -> Option<SparseLu> {
        let refs: Vec<&[(usize, Scalar)]> = cols.iter().map(|&c| sf.cols[c].as_slice()).collect();
        SparseLu::factor(sf.m, &refs)
    }

    fn ftran(&self, col: usize) -> Vec<Scalar> {
        let mut a = vec![Scalar::zero(); self.sf.m];
        for (i, v) in &self.sf.cols[col] {
            a[*i] = v.clone();
        }
        let mut z = self.lu.solve(&a);
        for (r, u) in &self.etas {
            if z[*r].is_zero() {
                continue;
            }
            let ur = &u.iter().find(|(i, _)| i == r).expect("eta pivot").1;
            let zr = &z[*r] / ur;
            for (i, ui) in u {
                if i != r {
                    z[*i] -= ui * &zr;
                }
            }
            z[*r] = zr;
        }
        z
    }

    fn btran(&self, cb: &[Scalar]) -> Vec<Scalar> {
        let mut v = cb.to_vec();
        for (r, u) in self.etas.iter().rev() {
            let mut s = v[*r].clone();
            let mut ur = None;
            for (i, ui) in u {
                if i == r {
                    ur = Some(ui);
                } else if !v[*i].is_zero() {
                    s -= ui * &v[*i];
                }
            }
            v[*r] = s / ur.expect("eta pivot");
        }
        self.lu.solve_transpose(&v)
    }

    /// Runs primal simplex on `cost` from the current feasible basis. In phase 2
    /// artificials may not enter and any basic artificial is kept at zero.
    /// Returns false when the objective is unbounded below.
    fn optimize(&mut self, cost: &[Scalar], phase2: bool) -> bool {
        let first_art = self.sf.first_artificial;
        let n = self.sf.cols.len();
        let mut streak = 0usize;
        loop {
            if !phase2 && self.cols.iter().zip(&self.x).all(|(&c, v)| c < first_art || v.is_zero()) {
                return true;
            }
            let cb: Vec<Scalar> = self.cols.iter().map(|&c| cost[c].clone()).collect();
            let y = self.btran(&cb);
            let bland = streak >= DEGENERATE_STREAK;
            let mut entering: Option<(usize, Scalar)> = None;
            for j in 0..n {
                if self.position[j].is_some() || (phase2 && j >= first_art) {
                    continue;
                }
                let mut d = cost[j].clone();
                for (i, a) in &self.sf.cols[j] {
                    if !y[*i].is_zero() {
                        d -= a * &y[*i];
                    }
                }
                if d.is_negative() {
                    let better = entering.as_ref().map_or(true, |(_, best)| d < *best);
                    if better {
                        entering = Some((j, d));
                        if bland {
                            break;
                        }
                    }
                }
            }
            let Some((q, _)) = entering else { return true };
            let u = self.ftran(q);

            let mut leave: Option<(usize, Scalar)> = None;
            if phase2 {
                leave = (0..self.sf.m)
                    .find(|&k| self.cols[k] >= first_art && !u[k].is_zero())
                    .map(|k| (k, Scalar::zero()));
            }
            if leave.is_none() {
                for k in 0..self.sf.m {
                    if !u[k].is_positive() {
                        continue;
                    }
                    let ratio = &self.x[k] / &u[k];
                    let better = match &leave {
                        None => true,
                        Some((cur, best)) => ratio < *best || (ratio == *best && self.cols[k] < self.cols[*cur]),
                    };
                    if better {
                        leave = Some((k, ratio));
                    }
                }
            }
            let Some((r, theta)) = leave else { return false };

            streak = if theta.is_zero() { streak + 1 } else { 0 };
            if !theta.is_zero() {
                for k in 0..self.sf.m {
                    if k != r && !u[k].is_zero() {
                        self.x[k] -= &theta * &u[k];
                    }
                }
            }
            self.x[r] = theta;
            self.position[self.cols[r]] = None;
            self.cols[r] = q;
            self.position[q] = Some(r);
            let eta: SparseVec = u.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
            self.etas.push((r, eta));
            if self.etas.len() >= REFACTOR_EVERY {
                self.lu = Self::factor(self.sf, &self.cols).expect("simplex keeps the basis nonsingular");
                self.etas.clear();
                self.x = self.lu.solve(&self.sf.b);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::scalar::{int, ratio};

    #[test]
    fn small_maximization() {
        // max 3x + 2y s.t. x + y <= 4, x + 3y <= 6, x <= 3
        let mut lp = LinearProgram::new(2);
        lp.maximize(vec![(0, int(3)), (1, int(2))]);
        lp.add_constraint(vec![(0, int(1)), (1, int(1))], Relation::Le, int(4));
        lp.add_constraint(vec![(0, int(1)), (1, int(3))], Relation::Le, int(6));
        lp.add_constraint(vec![(0, int(1))], Relation::Le, int(3));
        assert_eq!(lp.solve(), LpSolution::Optimal { value: int(11), x: vec![int(3), int(1)] });
    }

    #[test]
    fn free_variables_and_equalities() {
        // min x s.t. x - y = -5/2, y >= 1, x free
        let mut lp = LinearProgram::new(2);
        lp.set_free(0);
        lp.minimize(vec![(0, int(1))]);
        lp.add_constraint(vec![(0, int(1)), (1, int(-1))], Relation::Eq, ratio(-5, 2));
        lp.add_constraint(vec![(1, int(1))], Relation::Ge, int(1));
        assert_eq!(lp.solve(), LpSolution::Optimal { value: ratio(-3, 2), x: vec![ratio(-3, 2), int(1)] });
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.add_constraint(vec![(0, int(1))], Relation::Le, int(-1));
        assert_eq!(lp.solve(), LpSolution::Infeasible);

        let mut lp = LinearProgram::new(2);
        lp.maximize(vec![(0, int(1))]);
        lp.add_constraint(vec![(0, int(1)), (1, int(-1))], Relation::Le, int(1));
        assert_eq!(lp.solve(), LpSolution::Unbounded);
    }

    #[test]
    fn degenerate_problem_terminates() {
        // a classic cycling example under the textbook largest-coefficient rule
        let mut lp = LinearProgram::new(4);
        lp.maximize(vec![(0, ratio(3, 4)), (1, int(-150)), (2, ratio(1, 50)), (3, int(-6))]);
        lp.add_constraint(vec![(0, ratio(1, 4)), (1, int(-60)), (2, ratio(-1, 25)), (3, int(9))], Relation::Le, int(0));
        lp.add_constraint(vec![(0, ratio(1, 2)), (1, int(-90)), (2, ratio(-1, 50)), (3, int(3))], Relation::Le, int(0));
        lp.add_constraint(vec![(2, int(1))], Relation::Le, int(1));
        let (value, _) = lp.solve().optimal().map(|(v, x)| (v.clone(), x.to_vec())).unwrap();
        assert_eq!(value, ratio(1, 20));
    }

    #[test]
    fn no_constraints() {
        let mut lp = LinearProgram::new(1);
        lp.minimize(vec![(0, int(2))]);
        assert_eq!(lp.solve(), LpSolution::Optimal { value: int(0), x: vec![int(0)] });
        lp.maximize(vec![(0, int(2))]);
        assert_eq!(lp.solve(), LpSolution::Unbounded);
    }
}
