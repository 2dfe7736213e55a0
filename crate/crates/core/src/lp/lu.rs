//! Sparse LU factorization over the rationals.
//!
//! Gaussian elimination with a cheap Markowitz-style pivot order (shortest
//! active column, then shortest row). Exact arithmetic means any nonzero is an
//! acceptable pivot, so the order only has to keep fill-in low.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::geometry::Scalar;

pub(super) type SparseVec = Vec<(usize, Scalar)>;

#[derive(Debug, Clone)]
pub(super) struct SparseLu {
    m: usize,
    /// Row operations in order: `b[i] -= f * b[p]` for each `(i, f)`.
    ops: Vec<(usize, SparseVec)>,
    /// `(row, column)` of each pivot, in elimination order.
    pivots: Vec<(usize, usize)>,
    /// Remaining row at the time it was pivoted, including the pivot entry.
    urows: Vec<SparseVec>,
}

impl SparseLu {
    /// Factors the square matrix whose `k`-th column is `cols[k]` (entries keyed by row).
    /// Returns `None` when the matrix is singular.
    pub fn factor(m: usize, cols: &[&[(usize, Scalar)]]) -> Option<SparseLu> {
        assert_eq!(cols.len(), m);
        let mut rows: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); m];
        let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m];
        for (k, col) in cols.iter().enumerate() {
            for (i, v) in col.iter() {
                if !v.is_zero() {
                    rows[*i].insert(k, v.clone());
                    col_rows[k].insert(*i);
                }
            }
        }
        let mut col_active = vec![true; m];
        let mut ops = Vec::with_capacity(m);
        let mut pivots = Vec::with_capacity(m);
        let mut urows = Vec::with_capacity(m);

        for _ in 0..m {
            let c = (0..m).filter(|&k| col_active[k]).min_by_key(|&k| col_rows[k].len())?;
            let p = *col_rows[c].iter().min_by_key(|&&i| rows[i].len())?;
            let prow = std::mem::take(&mut rows[p]);
            let pv = prow[&c].clone();
            for j in prow.keys() {
                col_rows[*j].remove(&p);
            }
            let targets: Vec<usize> = col_rows[c].iter().copied().collect();
            let mut mults = Vec::with_capacity(targets.len());
            for i in targets {
                let f = &rows[i][&c] / &pv;
                for (j, v) in &prow {
                    let entry = rows[i].entry(*j).or_insert_with(Scalar::zero);
                    *entry -= &f * v;
                    if entry.is_zero() {
                        rows[i].remove(j);
                        col_rows[*j].remove(&i);
                    } else {
                        col_rows[*j].insert(i);
                    }
                }
                mults.push((i, f));
            }
            col_active[c] = false;
            ops.push((p, mults));
            pivots.push((p, c));
            urows.push(prow.into_iter().collect());
        }
        Some(SparseLu { m, ops, pivots, urows })
    }

    /// Solves `B x = b`; `b` is indexed by row, the result by column.
    pub fn solve(&self, b: &[Scalar]) -> Vec<Scalar> {
        let mut b = b.to_vec();
        for (p, mults) in &self.ops {
            if b[*p].is_zero() {
                continue;
            }
            let bp = b[*p].clone();
            for (i, f) in mults {
                b[*i] -= f * &bp;
            }
        }
        let mut x = vec![Scalar::zero(); self.m];
        for ((p, c), urow) in self.pivots.iter().zip(&self.urows).rev() {
            let mut acc = b[*p].clone();
            let mut pv = None;
            for (j, u) in urow {
                if j == c {
                    pv = Some(u);
                } else if !x[*j].is_zero() {
                    acc -= u * &x[*j];
                }
            }
            if !acc.is_zero() {
                x[*c] = acc / pv.expect("pivot entry stored");
            }
        }
        x
    }

    /// Solves `Bᵀ y = c`; `c` is indexed by column, the result by row.
    pub fn solve_transpose(&self, c: &[Scalar]) -> Vec<Scalar> {
        let mut acc = c.to_vec();
        let mut z = vec![Scalar::zero(); self.m];
        for ((p, col), urow) in self.pivots.iter().zip(&self.urows) {
            if acc[*col].is_zero() {
                continue;
            }
            let pv = urow.iter().find(|(j, _)| j == col).map(|(_, u)| u).expect("pivot entry stored");
            let zp = &acc[*col] / pv;
            for (j, u) in urow {
                if j != col {
                    acc[*j] -= u * &zp;
                }
            }
            z[*p] = zp;
        }
        for (p, mults) in self.ops.iter().rev() {
            let mut s = z[*p].clone();
            for (i, f) in mults {
                if !z[*i].is_zero() {
                    s -= f * &z[*i];
                }
            }
            z[*p] = s;
        }
        z
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::scalar::{int, ratio};

    fn columns(dense: &[Vec<i64>]) -> Vec<SparseVec> {
        let m = dense.len();
        (0..m)
            .map(|k| (0..m).filter(|&i| dense[i][k] != 0).map(|i| (i, int(dense[i][k]))).collect())
            .collect()
    }

    fn mat_vec(dense: &[Vec<i64>], x: &[Scalar]) -> Vec<Scalar> {
        dense.iter().map(|row| row.iter().zip(x).map(|(a, b)| int(*a) * b).sum()).collect()
    }

    fn mat_t_vec(dense: &[Vec<i64>], y: &[Scalar]) -> Vec<Scalar> {
        let m = dense.len();
        (0..m).map(|k| (0..m).map(|i| int(dense[i][k]) * &y[i]).sum()).collect()
    }

    #[test]
    fn solves_both_systems() {
        let a = vec![vec![0, 2, 1, 0], vec![1, 0, 0, 3], vec![4, 1, 0, 0], vec![0, 0, 5, 1]];
        let cols = columns(&a);
        let refs: Vec<&[(usize, Scalar)]> = cols.iter().map(|c| c.as_slice()).collect();
        let lu = SparseLu::factor(4, &refs).unwrap();
        let b = vec![int(1), ratio(-2, 3), int(0), int(7)];
        let x = lu.solve(&b);
        assert_eq!(mat_vec(&a, &x), b);
        let y = lu.solve_transpose(&b);
        assert_eq!(mat_t_vec(&a, &y), b);
    }

    #[test]
    fn detects_singularity() {
        let a = vec![vec![1, 2], vec![2, 4]];
        let cols = columns(&a);
        let refs: Vec<&[(usize, Scalar)]> = cols.iter().map(|c| c.as_slice()).collect();
        assert!(SparseLu::factor(2, &refs).is_none());
    }
}
