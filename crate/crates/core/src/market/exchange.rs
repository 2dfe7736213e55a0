use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::geometry::scalar::unit;
use crate::geometry::{Cone, Scalar, Vector};
use crate::lp::{LinearProgram, LpSolution, Relation};

/// `π^{jk}`: units of asset `j` paid for one unit of asset `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExchangeMatrix {
    rates: Vec<Vector>,
}

impl ExchangeMatrix {
    pub fn new(rates: Vec<Vector>) -> Result<ExchangeMatrix> {
        let d = rates.len();
        for (j, row) in rates.iter().enumerate() {
            check_dim(d, row.len())?;
            if !row[j].is_one() {
                return Err(Error::InvalidModel(format!("diagonal rate π^{{{0}{0}}} must be 1", j + 1)));
            }
            if let Some(k) = row.iter().position(|x| !x.is_positive()) {
                return Err(Error::InvalidModel(format!("rate π^{{{}{}}} must be positive", j + 1, k + 1)));
            }
        }
        Ok(ExchangeMatrix { rates })
    }

    pub fn dim(&self) -> usize {
        self.rates.len()
    }

    pub fn rate(&self, j: usize, k: usize) -> &Scalar {
        &self.rates[j][k]
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rates
    }
}

/// Generators `e^j` and `π^{jk} e^j - e^k` of the solvency cone.
pub fn solvency_generators(m: &ExchangeMatrix) -> Vec<Vector> {
    let d = m.dim();
    let mut gens: Vec<Vector> = (0..d).map(|j| unit(d, j)).collect();
    for j in 0..d {
        for k in 0..d {
            if j != k {
                let mut g = vec![Scalar::zero(); d];
                g[j] = m.rate(j, k).clone();
                g[k] = -Scalar::one();
                gens.push(g);
            }
        }
    }
    gens
}

pub fn solvency_cone(m: &ExchangeMatrix) -> Cone {
    Cone::generated(m.dim(), solvency_generators(m))
}

/// A trade at one node: `beta[j][k]` units of asset `k` bought with asset `j`,
/// plus whatever holdings are given away (`discarded`, nonnegative).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TradePlan {
    pub beta: Vec<Vector>,
    pub discarded: Vector,
}

impl TradePlan {
    /// `x^k + Σ_j β^{jk} - Σ_j β^{kj} π^{kj} - discarded^k`.
    pub fn apply(&self, x: &[Scalar], m: &ExchangeMatrix) -> Vector {
        let d = m.dim();
        (0..d)
            .map(|k| {
                let mut v = x[k].clone() - &self.discarded[k];
                for j in 0..d {
                    v += &self.beta[j][k];
                    v -= &self.beta[k][j] * m.rate(k, j);
                }
                v
            })
            .collect()
    }
}

/// Finds a plan exchanging `x` into `y`, or `None` when `x - y` is not solvent.
///
/// Exact exchanges alone cannot turn `e^1` into `0`, so holdings may also be
/// discarded; the LP minimizes the discarded amount.
pub fn exchange_decompose(x: &[Scalar], y: &[Scalar], m: &ExchangeMatrix) -> Result<Option<TradePlan>> {
    let d = m.dim();
    check_dim(d, x.len())?;
    check_dim(d, y.len())?;
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|j| (0..d).filter(move |&k| k != j).map(move |k| (j, k))).collect();
    let nb = pairs.len();
    let mut lp = LinearProgram::new(nb + d);
    lp.minimize((0..d).map(|k| (nb + k, Scalar::one())).collect());
    for k in 0..d {
        // Σ_j β^{jk} - Σ_j π^{kj} β^{kj} - s^k = y^k - x^k
        let mut coeffs = vec![(nb + k, -Scalar::one())];
        for (v, &(a, b)) in pairs.iter().enumerate() {
            if b == k {
                coeffs.push((v, Scalar::one()));
            } else if a == k {
                coeffs.push((v, -m.rate(k, b).clone()));
            }
        }
        lp.add_constraint(coeffs, Relation::Eq, &y[k] - &x[k]);
    }
    match lp.solve() {
        LpSolution::Optimal { x: sol, .. } => {
            let mut beta = vec![vec![Scalar::zero(); d]; d];
            for (v, &(a, b)) in pairs.iter().enumerate() {
                beta[a][b] = sol[v].clone();
            }
            Ok(Some(TradePlan { beta, discarded: sol[nb..].to_vec() }))
        }
        LpSolution::Infeasible => Ok(None),
        LpSolution::Unbounded => unreachable!("discarded amounts are bounded below by zero"),
    }
}
