//! Backward recursion on superhedging sets.
//!
//! `Z_T = ξ + K_T`, `W_t = ⋂_{ν ∈ succ μ} Z_{t+1}(ν)` and `Z_t = W_t + K_t`.
//! A portfolio `y` at a node lies in `Z_t` exactly when it can be rebalanced
//! into something that superhedges `ξ` from every successor onwards.

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{intersect_all, minkowski_sum_cone, Polyhedron, Scalar};
use crate::market::{MarketModel, NodeId, Payoff};

/// `Z_t` and `W_t` for every node; `w[T]` is empty.
#[derive(Debug, Clone)]
pub struct HedgeSets {
    pub z: Vec<Vec<Polyhedron>>,
    pub w: Vec<Vec<Polyhedron>>,
}

impl HedgeSets {
    pub fn horizon(&self) -> usize {
        self.z.len() - 1
    }

    pub fn z_at(&self, node: NodeId) -> &Polyhedron {
        &self.z[node.time][node.index]
    }

    /// `W_t(μ)`; panics at the horizon, where it is undefined.
    pub fn w_at(&self, node: NodeId) -> &Polyhedron {
        &self.w[node.time][node.index]
    }

    pub fn root(&self) -> &Polyhedron {
        &self.z[0][0]
    }
}

/// Runs the recursion from the horizon back to the root, one time level at a
/// time with the nodes of a level processed in parallel.
pub fn run_primal(model: &MarketModel, xi: &Payoff) -> Result<HedgeSets> {
    let horizon = model.horizon();
    let lattice = model.lattice();
    let terminal: Vec<Polyhedron> = lattice
        .nodes(horizon)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&n| minkowski_sum_cone(&Polyhedron::point(xi.at(n).clone()), model.solvency_cone(n)))
        .collect::<Result<_>>()?;

    let mut z = vec![terminal];
    let mut w = vec![Vec::new()];
    for t in (0..horizon).rev() {
        let next = z.last().expect("level t+1 computed");
        let level: Vec<(Polyhedron, Polyhedron)> = lattice
            .nodes(t)
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&n| {
                let wn = intersect_all(lattice.successor_indices(n).iter().map(|&i| &next[i]))?;
                let zn = minkowski_sum_cone(&wn, model.solvency_cone(n))?;
                Ok((zn, wn))
            })
            .collect::<Result<_>>()?;
        let (zl, wl) = level.into_iter().unzip();
        z.push(zl);
        w.push(wl);
    }
    z.reverse();
    w.reverse();
    Ok(HedgeSets { z, w })
}

/// `min{x : x e^i ∈ Z_0}`, the cheapest superhedging cost in asset `i` (0-based).
///
/// Read off the H-representation of `Z_0` as a one-dimensional LP.
pub fn ask_price(h: &HedgeSets, asset: usize) -> Result<Scalar> {
    let z0 = h.root();
    if asset >= z0.dim() {
        return Err(Error::InvalidProblem(format!("asset {} out of range 1..={}", asset + 1, z0.dim())));
    }
    if z0.is_empty() {
        return Err(Error::Infeasible("the payoff cannot be superhedged".into()));
    }
    let mut lower: Option<Scalar> = None;
    let mut upper: Option<Scalar> = None;
    for (a, r) in z0.hrep().iter() {
        let ai = &a[asset];
        if ai.is_zero() {
            if r.is_positive() {
                return Err(Error::Infeasible(format!("no multiple of e^{} superhedges the payoff", asset + 1)));
            }
            continue;
        }
        let b = r / ai;
        if ai.is_positive() {
            if lower.as_ref().map_or(true, |l| b > *l) {
                lower = Some(b);
            }
        } else if upper.as_ref().map_or(true, |u| b < *u) {
            upper = Some(b);
        }
    }
    let lower = lower.ok_or_else(|| {
        Error::Arbitrage(format!("superhedging cost in asset {} is unbounded below", asset + 1))
    })?;
    if upper.map_or(false, |u| u < lower) {
        return Err(Error::Infeasible(format!("no multiple of e^{} superhedges the payoff", asset + 1)));
    }
    Ok(lower)
}

/// `-ask(-ξ)`: the most that can be borrowed in asset `i` against delivery of `ξ`.
pub fn bid_price(model: &MarketModel, xi: &Payoff, asset: usize) -> Result<Scalar> {
    let h = run_primal(model, &xi.negate())?;
    Ok(-ask_price(&h, asset)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::scalar::{int, ratio};
    use crate::market::{EventLattice, ExchangeMatrix};
    use num_traits::One;

    fn cash_stock(s: Scalar, k: Scalar) -> ExchangeMatrix {
        let one = Scalar::one();
        let ask = &s * (&one + &k);
        let bid = &s * (&one - &k);
        ExchangeMatrix::new(vec![vec![one.clone(), ask], vec![&one / bid, one]]).unwrap()
    }

    // one period, stock 10 → {12, 8}; cash is asset 1
    fn binomial(k: Scalar) -> MarketModel {
        let lattice =
            EventLattice::new(vec![vec!["0".into()], vec!["u".into(), "d".into()]], vec![vec![vec![0, 1]]]).unwrap();
        let rates = vec![vec![cash_stock(int(10), k.clone())], vec![cash_stock(int(12), k.clone()), cash_stock(int(8), k)]];
        MarketModel::new(lattice, rates).unwrap()
    }

    #[test]
    fn frictionless_call_matches_replication() {
        // call struck at 10, cash settled: 2 in the up state; delta 1/2, cash -4
        let model = binomial(int(0));
        let xi = Payoff::new(&model, vec![vec![int(2), int(0)], vec![int(0), int(0)]]).unwrap();
        let h = run_primal(&model, &xi).unwrap();
        assert_eq!(ask_price(&h, 0).unwrap(), int(1));
        assert_eq!(ask_price(&h, 1).unwrap(), ratio(1, 10));
        assert_eq!(bid_price(&model, &xi, 0).unwrap(), int(1));
    }

    #[test]
    fn spread_widens_the_interval() {
        let model = binomial(ratio(1, 20));
        let xi = Payoff::new(&model, vec![vec![int(2), int(0)], vec![int(0), int(0)]]).unwrap();
        let h = run_primal(&model, &xi).unwrap();
        let ask = ask_price(&h, 0).unwrap();
        let bid = bid_price(&model, &xi, 0).unwrap();
        assert!(bid < int(1) && int(1) < ask);
    }

    #[test]
    fn zero_payoff_costs_nothing() {
        let model = binomial(ratio(1, 50));
        let h = run_primal(&model, &Payoff::zero(&model)).unwrap();
        assert_eq!(ask_price(&h, 0).unwrap(), int(0));
        assert_eq!(ask_price(&h, 1).unwrap(), int(0));
    }

    #[test]
    fn arbitrage_is_reported() {
        let lattice =
            EventLattice::new(vec![vec!["0".into()], vec!["u".into(), "d".into()]], vec![vec![vec![0, 1]]]).unwrap();
        let rates = vec![vec![cash_stock(int(10), int(0))], vec![cash_stock(int(12), int(0)), cash_stock(int(11), int(0))]];
        let model = MarketModel::new(lattice, rates).unwrap();
        let h = run_primal(&model, &Payoff::zero(&model)).unwrap();
        assert!(matches!(ask_price(&h, 0), Err(Error::Arbitrage(_))));
    }
}
