//! Consistent pricing pairs, searched for as node masses on the path tree.
//!
//! A pair `(Q, S)` is encoded by `n(μ) = Q(μ) S(μ)`: the martingale property
//! becomes the flow conservation `n(μ) = Σ_{ν ∈ succ μ} n(ν)` and `S ∈ K⁺`
//! becomes `n(μ) ∈ K⁺(μ)`. Masses live on the tree of paths rather than on a
//! recombining lattice, because different paths into the same lattice node
//! may carry different conditional measures.

use num_traits::{One, Signed, Zero};

use super::lattice::PathTree;
use super::model::MarketModel;
use crate::geometry::{Scalar, Vector};
use crate::lp::{LinearProgram, LpSolution, Relation};

/// Node masses `n(μ) = Σ_ℓ λ_{μℓ} g_{μℓ}` over the extreme rays `g` of `K⁺(μ)`.
pub(crate) struct MassProgram {
    pub tree: PathTree,
    pub lp: LinearProgram,
    /// First LP variable of each tree node.
    offsets: Vec<Vec<usize>>,
    /// Extreme rays of `K⁺` at each tree node, scaled to unit max-norm so the
    /// LP stays well scaled.
    rays: Vec<Vec<Vec<Vector>>>,
    d: usize,
}

impl MassProgram {
    pub fn new(model: &MarketModel) -> MassProgram {
        let tree = model.lattice().path_tree();
        let d = model.assets();
        let mut offsets = Vec::with_capacity(tree.levels.len());
        let mut rays = Vec::with_capacity(tree.levels.len());
        let mut next = 0;
        for level in &tree.levels {
            let mut o = Vec::with_capacity(level.len());
            let mut r = Vec::with_capacity(level.len());
            for tn in level {
                o.push(next);
                let scaled: Vec<Vector> = model
                    .dual_solvency_cone(tn.node)
                    .rays()
                    .iter()
                    .map(|g| {
                        let m = g.iter().map(|x| x.abs()).max().expect("rays are nonzero");
                        g.iter().map(|x| x / &m).collect()
                    })
                    .collect();
                next += scaled.len();
                r.push(scaled);
            }
            offsets.push(o);
            rays.push(r);
        }
        let mut mp = MassProgram { tree, lp: LinearProgram::new(next), offsets, rays, d };
        for t in 0..mp.tree.horizon() {
            for k in 0..mp.tree.levels[t].len() {
                for a in 0..d {
                    let mut coeffs = mp.mass_coeffs(t, k, a);
                    for &c in &mp.tree.levels[t][k].children {
                        coeffs.extend(mp.mass_coeffs(t + 1, c, a).into_iter().map(|(v, g)| (v, -g)));
                    }
                    mp.lp.add_constraint(coeffs, Relation::Eq, Scalar::zero());
                }
            }
        }
        mp
    }

    /// LP terms of coordinate `a` of `n` at tree node `(t, k)`.
    pub fn mass_coeffs(&self, t: usize, k: usize, a: usize) -> Vec<(usize, Scalar)> {
        let rays = &self.rays[t][k];
        let o = self.offsets[t][k];
        rays.iter().enumerate().filter(|(_, g)| !g[a].is_zero()).map(|(l, g)| (o + l, g[a].clone())).collect()
    }

    /// Terms of `w·n` at tree node `(t, k)`.
    pub fn weighted_coeffs(&self, t: usize, k: usize, w: &[Scalar]) -> Vec<(usize, Scalar)> {
        let rays = &self.rays[t][k];
        let o = self.offsets[t][k];
        rays.iter()
            .enumerate()
            .map(|(l, g)| (o + l, g.iter().zip(w).map(|(a, b)| a * b).sum::<Scalar>()))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    /// Masses `n(μ)` for every tree node from an LP solution.
    pub fn masses(&self, x: &[Scalar]) -> Vec<Vec<Vector>> {
        self.tree
            .levels
            .iter()
            .enumerate()
            .map(|(t, level)| {
                level
                    .iter()
                    .enumerate()
                    .map(|(k, _)| {
                        let o = self.offsets[t][k];
                        let mut n = vec![Scalar::zero(); self.d];
                        for (l, g) in self.rays[t][k].iter().enumerate() {
                            if x[o + l].is_zero() {
                                continue;
                            }
                            for (na, ga) in n.iter_mut().zip(g) {
                                *na += &x[o + l] * ga;
                            }
                        }
                        n
                    })
                    .collect()
            })
            .collect()
    }
}

/// A pricing pair on the path tree: `measure` on the leaves and `prices[t][k]`
/// wherever the node has positive mass (`None` marks degenerate nodes).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PricingPair {
    pub tree: PathTree,
    pub masses: Vec<Vec<Vector>>,
    pub measure: Vec<Scalar>,
    pub prices: Vec<Vec<Option<Vector>>>,
}

impl PricingPair {
    /// `Q(μ) = w·n(μ)` and `S(μ) = n(μ)/Q(μ)` where `Q(μ) > 0`.
    pub fn from_masses(tree: PathTree, masses: Vec<Vec<Vector>>, weight: &[Scalar]) -> PricingPair {
        let q = |n: &Vector| n.iter().zip(weight).map(|(a, b)| a * b).sum::<Scalar>();
        let measure = masses[tree.horizon()].iter().map(q).collect();
        let prices = masses
            .iter()
            .map(|level| {
                level
                    .iter()
                    .map(|n| {
                        let m = q(n);
                        m.is_positive().then(|| n.iter().map(|x| x / &m).collect())
                    })
                    .collect()
            })
            .collect();
        PricingPair { tree, masses, measure, prices }
    }

    pub fn degenerate_nodes(&self) -> usize {
        self.prices.iter().flatten().filter(|p| p.is_none()).count()
    }

    /// Checks the defining conditions exactly: `Q` is a probability, `S` is a
    /// `Q`-martingale on the support and `S ∈ K⁺ \ {0}` wherever defined.
    /// With `strict`, every node must carry positive mass.
    pub fn verify(&self, model: &MarketModel, strict: bool) -> bool {
        let total: Scalar = self.measure.iter().sum();
        if !total.is_one() || self.measure.iter().any(|m| m.is_negative()) {
            return false;
        }
        for (t, level) in self.tree.levels.iter().enumerate() {
            for (k, tn) in level.iter().enumerate() {
                let n = &self.masses[t][k];
                if !model.dual_solvency_cone(tn.node).contains(n) {
                    return false;
                }
                match &self.prices[t][k] {
                    None if strict => return false,
                    None => {}
                    Some(s) => {
                        if s.iter().all(Zero::is_zero) {
                            return false;
                        }
                    }
                }
                if !tn.children.is_empty() {
                    let mut sum = vec![Scalar::zero(); n.len()];
                    for &c in &tn.children {
                        for (a, b) in sum.iter_mut().zip(&self.masses[t + 1][c]) {
                            *a += b;
                        }
                    }
                    if sum != *n {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `E_Q(ξ·S_T)` recomputed from the pair over the support of `Q`.
    pub fn expectation(&self, payoff_at_leaf: impl Fn(usize) -> Vector) -> Scalar {
        let t = self.tree.horizon();
        self.prices[t]
            .iter()
            .enumerate()
            .filter_map(|(k, s)| s.as_ref().map(|s| (k, s)))
            .map(|(k, s)| {
                let xi = payoff_at_leaf(k);
                let v: Scalar = xi.iter().zip(s).map(|(a, b)| a * b).sum();
                &self.measure[k] * v
            })
            .sum()
    }
}

#[derive(Debug, Clone)]
pub struct ConsistencyCheck {
    pub exists: bool,
    /// Optimal minimum leaf mass; positive iff a strictly consistent pair exists.
    pub slack: Scalar,
    pub certificate: Option<PricingPair>,
}

/// Decides whether a consistent pricing pair with `Q ~ P` exists (no arbitrage).
pub fn check_consistent_pair(model: &MarketModel) -> ConsistencyCheck {
    let mut mp = MassProgram::new(model);
    let d = model.assets();
    let ones = vec![Scalar::one(); d];
    let eps = mp.lp.add_var(false);
    mp.lp.maximize(vec![(eps, Scalar::one())]);
    let root = mp.weighted_coeffs(0, 0, &ones);
    mp.lp.add_constraint(root, Relation::Eq, Scalar::one());
    let t = mp.tree.horizon();
    for k in 0..mp.tree.levels[t].len() {
        let mut coeffs = mp.weighted_coeffs(t, k, &ones);
        coeffs.push((eps, -Scalar::one()));
        mp.lp.add_constraint(coeffs, Relation::Ge, Scalar::zero());
    }
    match mp.lp.solve() {
        LpSolution::Optimal { value, x } if value.is_positive() => {
            let masses = mp.masses(&x);
            let pair = PricingPair::from_masses(mp.tree, masses, &ones);
            ConsistencyCheck { exists: true, slack: value, certificate: Some(pair) }
        }
        LpSolution::Optimal { value, .. } => ConsistencyCheck { exists: false, slack: value, certificate: None },
        _ => ConsistencyCheck { exists: false, slack: Scalar::zero(), certificate: None },
    }
}
