//! Ask prices as the largest risk-neutral expectation `E_Q(ξ·S_T)` over
//! consistent pricing pairs with `S^i ≡ 1`, solved as one exact LP in the
//! node masses `n = Q·S`.

use num_traits::One;

use crate::error::{check_dim, Error, Result};
use crate::geometry::scalar::unit;
use crate::geometry::Scalar;
use crate::lp::{LpSolution, Relation};
use crate::market::{MarketModel, MassProgram, Payoff, PricingPair};

#[derive(Debug, Clone)]
pub struct RnSolution {
    pub asset: usize,
    pub value: Scalar,
    /// `Q` on the leaves of the path tree and `S = n / n^i` where `n^i > 0`.
    pub pair: PricingPair,
}

impl RnSolution {
    /// Path-tree nodes where `Q` puts no mass and `S` is undefined.
    pub fn degenerate_nodes(&self) -> usize {
        self.pair.degenerate_nodes()
    }
}

/// `max Σ_ω ξ(ω)·n(ω)` subject to conservation, `n ∈ K⁺` and `n^i(root) = 1`.
pub fn rn_price(model: &MarketModel, xi: &Payoff, asset: usize) -> Result<RnSolution> {
    let d = model.assets();
    if asset >= d {
        return Err(Error::InvalidProblem(format!("asset {} out of range 1..={d}", asset + 1)));
    }
    check_dim(d, xi.values().first().map_or(d, Vec::len))?;
    let mut mp = MassProgram::new(model);
    let root = mp.mass_coeffs(0, 0, asset);
    mp.lp.add_constraint(root, Relation::Eq, Scalar::one());
    let horizon = mp.tree.horizon();
    let mut objective = Vec::new();
    for (k, leaf) in mp.tree.leaves().iter().enumerate() {
        objective.extend(mp.weighted_coeffs(horizon, k, xi.at(leaf.node)));
    }
    mp.lp.maximize(objective);
    match mp.lp.solve() {
        LpSolution::Optimal { value, x } => {
            let masses = mp.masses(&x);
            let pair = PricingPair::from_masses(mp.tree, masses, &unit(d, asset));
            Ok(RnSolution { asset, value, pair })
        }
        LpSolution::Infeasible => Err(Error::Arbitrage(format!(
            "no consistent pricing pair with asset {} as numeraire",
            asset + 1
        ))),
        LpSolution::Unbounded => Err(Error::Infeasible("the payoff cannot be superhedged".into())),
    }
}

/// Checks the extracted pair exactly and recomputes its expectation.
pub fn extract_pair(model: &MarketModel, xi: &Payoff, sol: &RnSolution) -> Result<(PricingPair, Scalar)> {
    if !sol.pair.verify(model, false) {
        return Err(Error::InvalidProblem("extracted pair violates the consistency conditions".into()));
    }
    let tree = &sol.pair.tree;
    let leaves = tree.leaves();
    let e = sol.pair.expectation(|k| xi.at(leaves[k].node).clone());
    Ok((sol.pair.clone(), e))
}
