//! The same recursion on support functions, which stay positively homogeneous.
//!
//! `Z_T = -ξ·x` on `K_T⁺`, `W_t` is the convex hull of the successor `Z_{t+1}`
//! (the Minkowski sum of their epigraph cones) and `Z_t` restricts `W_t` to
//! `K_t⁺`. Each `Z_t(μ)` is the support function of `-Z_t(μ)` from the primal side.

use num_traits::One;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::scalar::unit;
use crate::geometry::{convex_hull_union, intersect, lp_min, restrict_domain, LpOutcome, PolyFn, Polyhedron, Scalar};
use crate::lvop::hypograph_section;
use crate::market::{MarketModel, NodeId, Payoff};

#[derive(Debug, Clone)]
pub struct SupportFns {
    pub z: Vec<Vec<PolyFn>>,
    pub w: Vec<Vec<PolyFn>>,
}

impl SupportFns {
    pub fn z_at(&self, node: NodeId) -> &PolyFn {
        &self.z[node.time][node.index]
    }

    pub fn w_at(&self, node: NodeId) -> &PolyFn {
        &self.w[node.time][node.index]
    }

    pub fn root(&self) -> &PolyFn {
        &self.z[0][0]
    }
}

pub fn run_dual(model: &MarketModel, xi: &Payoff) -> Result<SupportFns> {
    let horizon = model.horizon();
    let lattice = model.lattice();
    let terminal: Vec<PolyFn> = lattice
        .nodes(horizon)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&n| {
            let minus_xi: Vec<Scalar> = xi.at(n).iter().map(|x| -x).collect();
            restrict_domain(&PolyFn::linear(&minus_xi), model.dual_solvency_cone(n))
        })
        .collect::<Result<_>>()?;

    let mut z = vec![terminal];
    let mut w = vec![Vec::new()];
    for t in (0..horizon).rev() {
        let next = z.last().expect("level t+1 computed");
        let level: Vec<(PolyFn, PolyFn)> = lattice
            .nodes(t)
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&n| {
                let epis: Vec<Polyhedron> =
                    lattice.successor_indices(n).iter().map(|&i| next[i].epigraph().clone()).collect();
                let wn = PolyFn::from_epigraph(convex_hull_union(&epis)?)?;
                let zn = restrict_domain(&wn, model.dual_solvency_cone(n))?;
                Ok((zn, wn))
            })
            .collect::<Result<_>>()?;
        let (zl, wl) = level.into_iter().unzip();
        z.push(zl);
        w.push(wl);
    }
    z.reverse();
    w.reverse();
    Ok(SupportFns { z, w })
}

/// `-min{Z_0(w) : w_i = 1}`, which agrees with the primal ask price in asset `i`.
pub fn dual_ask_price(s: &SupportFns, asset: usize) -> Result<Scalar> {
    let f = s.root();
    let d = f.dim();
    if asset >= d {
        return Err(Error::InvalidProblem(format!("asset {} out of range 1..={d}", asset + 1)));
    }
    let mut row = vec![Scalar::from_integer(0.into()); d + 1];
    row[asset] = Scalar::one();
    let slice = Polyhedron::from_hrep({
        let mut h = crate::geometry::HPoly::universe(d + 1);
        h.push_equality(row, Scalar::one());
        h
    });
    let feasible = intersect(f.epigraph(), &slice)?;
    if feasible.is_empty() {
        return Err(Error::Infeasible(format!("no consistent price system normalizes asset {}", asset + 1)));
    }
    match lp_min(&feasible, &unit(d + 1, d))? {
        LpOutcome::Finite { value, .. } => Ok(-value),
        LpOutcome::Unbounded { .. } => {
            Err(Error::Arbitrage(format!("superhedging cost in asset {} is unbounded below", asset + 1)))
        }
    }
}

/// `{(w_1, …, w_{d-1}, y) : y ≤ -Z(w), cᵀw = 1}`, the section of the root
/// hypograph used to compare with the lower image of the last step problem.
pub fn lower_image_section(s: &SupportFns, c: &[Scalar]) -> Result<Polyhedron> {
    hypograph_section(s.root(), c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::scalar::{int, ratio};
    use crate::geometry::supfun_of_negated_set;
    use crate::market::{EventLattice, ExchangeMatrix};
    use crate::primal::{ask_price, run_primal};

    fn model(k: Scalar) -> MarketModel {
        let m = |s: i64| {
            let one = Scalar::one();
            let ask = int(s) * (&one + &k);
            let bid = int(s) * (&one - &k);
            ExchangeMatrix::new(vec![vec![one.clone(), ask], vec![&one / bid, one]]).unwrap()
        };
        let lattice = EventLattice::new(
            vec![vec!["0".into()], vec!["u".into(), "d".into()], vec!["uu".into(), "ud".into(), "dd".into()]],
            vec![vec![vec![0, 1]], vec![vec![0, 1], vec![1, 2]]],
        )
        .unwrap();
        MarketModel::new(lattice, vec![vec![m(10)], vec![m(12), m(8)], vec![m(14), m(10), m(7)]]).unwrap()
    }

    fn put(model: &MarketModel) -> Payoff {
        Payoff::new(model, vec![vec![int(0), int(0)], vec![int(1), int(0)], vec![int(4), int(0)]]).unwrap()
    }

    #[test]
    fn dual_prices_agree_with_primal() {
        let model = model(ratio(1, 40));
        let xi = put(&model);
        let h = run_primal(&model, &xi).unwrap();
        let s = run_dual(&model, &xi).unwrap();
        for i in 0..2 {
            assert_eq!(dual_ask_price(&s, i).unwrap(), ask_price(&h, i).unwrap());
        }
    }

    #[test]
    fn support_function_of_negated_primal_set() {
        let model = model(ratio(1, 25));
        let xi = put(&model);
        let h = run_primal(&model, &xi).unwrap();
        let s = run_dual(&model, &xi).unwrap();
        for t in 0..=2 {
            for n in model.lattice().nodes(t) {
                let expected = restrict_domain(&supfun_of_negated_set(h.z_at(n)).unwrap(), model.dual_solvency_cone(n));
                assert_eq!(s.z_at(n).epigraph(), expected.unwrap().epigraph());
            }
        }
    }
}
