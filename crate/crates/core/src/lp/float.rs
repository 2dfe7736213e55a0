//! Floating-point revised simplex with an explicit dense basis inverse, used
//! only to find a promising basis for the exact solver. Its answers are never
//! trusted. The inverse is rebuilt from scratch regularly to limit drift.

use super::StandardForm;
use crate::geometry::scalar::to_f64;

const TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-7;
const FEAS_TOL: f64 = 1e-9;
const DEGENERATE_STREAK: usize = 20;
const REINVERT_EVERY: usize = 50;

struct Revised {
    m: usize,
    cols: Vec<Vec<(usize, f64)>>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    basic: Vec<bool>,
    /// Row-major `B⁻¹`, rows indexed by basis position.
    binv: Vec<f64>,
    x: Vec<f64>,
}

impl Revised {
    /// Rebuilds `B⁻¹` by Gauss-Jordan elimination with partial pivoting.
    fn reinvert(&mut self) -> bool {
        let m = self.m;
        let mut a = vec![0.0; m * m];
        for (k, &c) in self.basis.iter().enumerate() {
            for &(i, v) in &self.cols[c] {
                a[i * m + k] = v;
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for col in 0..m {
            let p = (col..m)
                .max_by(|&i, &j| a[i * m + col].abs().total_cmp(&a[j * m + col].abs()))
                .expect("nonempty range");
            if a[p * m + col].abs() < 1e-12 {
                return false;
            }
            if p != col {
                for j in 0..m {
                    a.swap(p * m + j, col * m + j);
                    inv.swap(p * m + j, col * m + j);
                }
            }
            let pv = a[col * m + col];
            for j in 0..m {
                a[col * m + j] /= pv;
                inv[col * m + j] /= pv;
            }
            let (arow, irow) = (a[col * m..(col + 1) * m].to_vec(), inv[col * m..(col + 1) * m].to_vec());
            for i in 0..m {
                let f = a[i * m + col];
                if i == col || f == 0.0 {
                    continue;
                }
                for j in 0..m {
                    a[i * m + j] -= f * arow[j];
                    inv[i * m + j] -= f * irow[j];
                }
            }
        }
        self.binv = inv;
        self.x = (0..m).map(|k| (0..m).map(|i| self.binv[k * m + i] * self.rhs[i]).sum()).collect();
        true
    }

    fn column(&self, j: usize) -> Vec<f64> {
        let m = self.m;
        let mut u = vec![0.0; m];
        for &(i, v) in &self.cols[j] {
            for (k, uk) in u.iter_mut().enumerate() {
                *uk += self.binv[k * m + i] * v;
            }
        }
        u
    }

    fn pivot(&mut self, r: usize, q: usize, u: &[f64]) {
        let m = self.m;
        let theta = self.x[r] / u[r];
        for k in 0..m {
            if k != r {
                self.x[k] -= theta * u[k];
            }
        }
        self.x[r] = theta;
        for j in 0..m {
            self.binv[r * m + j] /= u[r];
        }
        let prow = self.binv[r * m..(r + 1) * m].to_vec();
        for k in 0..m {
            if k == r || u[k] == 0.0 {
                continue;
            }
            for (x, p) in self.binv[k * m..(k + 1) * m].iter_mut().zip(&prow) {
                *x -= u[k] * p;
            }
        }
        self.basic[self.basis[r]] = false;
        self.basic[q] = true;
        self.basis[r] = q;
    }

    /// Minimizes `cost`; `allowed` filters entering columns. `Some(true)` at an
    /// optimum, `Some(false)` when unbounded, `None` on failure.
    fn run(&mut self, cost: &[f64], allowed: impl Fn(usize) -> bool, done: impl Fn(&Self) -> bool) -> Option<bool> {
        let m = self.m;
        let limit = 20 * (m + self.cols.len()) + 1000;
        let mut streak = 0;
        for it in 0..limit {
            if it > 0 && it % REINVERT_EVERY == 0 && !self.reinvert() {
                return None;
            }
            if done(self) {
                return Some(true);
            }
            let mut y = vec![0.0; m];
            for (k, &c) in self.basis.iter().enumerate() {
                let cb = cost[c];
                if cb != 0.0 {
                    for (yi, b) in y.iter_mut().zip(&self.binv[k * m..(k + 1) * m]) {
                        *yi += cb * b;
                    }
                }
            }
            let bland = streak >= DEGENERATE_STREAK;
            let mut entering = None;
            let mut best = -TOL;
            for j in 0..self.cols.len() {
                if self.basic[j] || !allowed(j) {
                    continue;
                }
                let d = cost[j] - self.cols[j].iter().map(|&(i, v)| y[i] * v).sum::<f64>();
                if d < best {
                    entering = Some(j);
                    if bland {
                        break;
                    }
                    best = d;
                }
            }
            let Some(q) = entering else { return Some(true) };
            let u = self.column(q);
            // Harris ratio test: bound the step with slightly relaxed bounds,
            // then take the largest pivot among the rows that block within it
            let mut bound = f64::INFINITY;
            for k in 0..m {
                if u[k] > PIVOT_TOL {
                    bound = bound.min((self.x[k].max(0.0) + FEAS_TOL) / u[k]);
                }
            }
            let mut leave: Option<(usize, f64)> = None;
            for k in 0..m {
                if u[k] > PIVOT_TOL && self.x[k].max(0.0) / u[k] <= bound {
                    if leave.map_or(true, |(cur, _)| {
                        u[k] > u[cur] || (u[k] == u[cur] && self.basis[k] < self.basis[cur])
                    }) {
                        leave = Some((k, self.x[k].max(0.0) / u[k]));
                    }
                }
            }
            let Some((r, ratio)) = leave else { return Some(false) };
            streak = if ratio <= TOL { streak + 1 } else { 0 };
            self.pivot(r, q, &u);
        }
        None
    }

    /// Swaps basic artificials (at zero after phase 1) for structural columns
    /// where the row allows it. Rows left alone are redundant.
    fn drive_out_artificials(&mut self, first_art: usize) {
        let m = self.m;
        for r in 0..m {
            if self.basis[r] < first_art {
                continue;
            }
            let row = self.binv[r * m..(r + 1) * m].to_vec();
            let mut best: Option<(usize, f64)> = None;
            for j in 0..first_art {
                if self.basic[j] {
                    continue;
                }
                let a = self.cols[j].iter().map(|&(i, v)| row[i] * v).sum::<f64>().abs();
                if a > PIVOT_TOL && best.map_or(true, |(_, b)| a > b) {
                    best = Some((j, a));
                }
            }
            if let Some((q, _)) = best {
                let u = self.column(q);
                self.pivot(r, q, &u);
            }
        }
    }
}

/// A basis hint for `sf`, one column per row, or `None` if the float solve gave up.
pub(super) fn basis_hint(sf: &StandardForm) -> Option<Vec<usize>> {
    let m = sf.m;
    let n = sf.cols.len();
    if m == 0 {
        return Some(Vec::new());
    }
    let raw: Vec<Vec<(usize, f64)>> =
        sf.cols.iter().map(|c| c.iter().map(|(i, v)| (*i, to_f64(v))).collect()).collect();
    let mut row_scale = vec![0.0f64; m];
    for col in &raw {
        for (i, v) in col {
            row_scale[*i] = row_scale[*i].max(v.abs());
        }
    }
    for s in row_scale.iter_mut() {
        *s = if *s > 0.0 { 1.0 / *s } else { 1.0 };
    }
    let col_scale: Vec<f64> = raw
        .iter()
        .map(|col| {
            let mx = col.iter().map(|(i, v)| (v * row_scale[*i]).abs()).fold(0.0, f64::max);
            if mx > 0.0 {
                1.0 / mx
            } else {
                1.0
            }
        })
        .collect();
    let mut cols: Vec<Vec<(usize, f64)>> = raw
        .iter()
        .zip(&col_scale)
        .map(|(col, cs)| col.iter().map(|(i, v)| (*i, v * row_scale[*i] * cs)).collect())
        .collect();
    let first_art = sf.first_artificial;
    // Shifting the bounds to x ≥ -δ with tiny pseudo-random δ breaks the heavy
    // degeneracy of tree LPs while keeping the equations consistent.
    let mut rhs: Vec<f64> = sf.b.iter().zip(&row_scale).map(|(b, s)| to_f64(b) * s).collect();
    for (j, col) in cols.iter().enumerate().take(first_art) {
        let h = (j as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 11;
        let delta = 1e-7 * (1.0 + h as f64 / (1u64 << 53) as f64);
        for &(i, v) in col {
            rhs[i] += delta * v;
        }
    }
    let flip: Vec<bool> = rhs.iter().map(|r| *r < 0.0).collect();
    for r in rhs.iter_mut().filter(|r| **r < 0.0) {
        *r = -*r;
    }
    for col in cols.iter_mut().take(first_art) {
        for (i, v) in col.iter_mut() {
            if flip[*i] {
                *v = -*v;
            }
        }
    }
    let basis: Vec<usize> = (0..m).map(|i| first_art + i).collect();
    let mut basic = vec![false; n];
    for &b in &basis {
        basic[b] = true;
    }
    let mut rs = Revised { m, cols, rhs, basis, basic, binv: Vec::new(), x: Vec::new() };
    if !rs.reinvert() {
        return None;
    }

    let phase1: Vec<f64> = (0..n).map(|j| if j >= first_art { col_scale[j] } else { 0.0 }).collect();
    let infeasibility = |rs: &Revised| -> f64 {
        (0..m).filter(|&k| rs.basis[k] >= first_art).map(|k| rs.x[k].abs()).sum()
    };
    // stop as soon as the artificials vanish; pivoting on at a zero objective only cycles
    rs.run(&phase1, |_| true, |rs| infeasibility(rs) < 1e-9)?;
    if infeasibility(&rs) > 1e-7 {
        return Some(rs.basis);
    }
    rs.drive_out_artificials(first_art);
    let mut phase2: Vec<f64> = (0..n).map(|j| to_f64(&sf.cost[j]) * col_scale[j]).collect();
    let cmax = phase2.iter().fold(0.0f64, |a, c| a.max(c.abs()));
    if cmax > 0.0 {
        for c in phase2.iter_mut() {
            *c /= cmax;
        }
    }
    // even an unfinished phase 2 leaves a feasible basis worth trying
    let _ = rs.run(&phase2, |j| j < first_art, |_| false);
    Some(rs.basis)
}
