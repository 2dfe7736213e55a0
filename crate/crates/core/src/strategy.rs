//! Superhedging strategies along a given path through the lattice.

use num_traits::{One, Zero};

use crate::error::{check_dim, Error, Result};
use crate::geometry::scalar::sub;
use crate::geometry::{intersect, minkowski_sum_cone, Cone, Polyhedron, Scalar, Vector};
use crate::lp::{LinearProgram, LpSolution, Relation};
use crate::market::{MarketModel, NodeId, Payoff};
use crate::primal::HedgeSets;

/// One node per time step, starting at the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSpec {
    nodes: Vec<NodeId>,
}

impl PathSpec {
    pub fn new(model: &MarketModel, nodes: Vec<NodeId>) -> Result<PathSpec> {
        if nodes.len() != model.horizon() + 1 {
            return Err(Error::InvalidProblem(format!(
                "a path needs {} nodes, got {}",
                model.horizon() + 1,
                nodes.len()
            )));
        }
        if nodes[0] != NodeId::root() {
            return Err(Error::InvalidProblem("a path starts at the root".into()));
        }
        for (t, pair) in nodes.windows(2).enumerate() {
            if pair[1].time != t + 1 || !model.lattice().is_successor(pair[0], pair[1]) {
                return Err(Error::InvalidProblem(format!(
                    "{} is not a successor of {}",
                    model.label(pair[1]),
                    model.label(pair[0])
                )));
            }
        }
        Ok(PathSpec { nodes })
    }

    /// Builds a path from node labels, one per time step.
    pub fn from_labels<S: AsRef<str>>(model: &MarketModel, labels: &[S]) -> Result<PathSpec> {
        let nodes = labels
            .iter()
            .enumerate()
            .map(|(t, l)| {
                let l = l.as_ref();
                if t > model.horizon() {
                    return Err(Error::InvalidProblem("path is longer than the horizon".into()));
                }
                model
                    .lattice()
                    .find(t, l)
                    .ok_or_else(|| Error::InvalidProblem(format!("no node labelled {l} at time {t}")))
            })
            .collect::<Result<_>>()?;
        PathSpec::new(model, nodes)
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SelectionRule {
    /// Keep `y` if allowed, else the nearest point in L1, ties broken lexicographically.
    #[default]
    MinimumTrading,
    /// The lexicographically smallest vertex of the rebalance set.
    LexVertex,
}

#[derive(Debug, Clone)]
pub struct Strategy {
    pub path: PathSpec,
    /// `y_0, …, y_T`; `y_{t+1}` is the portfolio chosen at time `t`.
    pub portfolios: Vec<Vector>,
    pub rebalance_sets: Vec<Polyhedron>,
    pub surplus: Vector,
}

/// `(y - K_t) ∩ W_t` at `node`, after checking `y ∈ Z_t`.
pub fn rebalance_set(model: &MarketModel, y: &[Scalar], node: NodeId, h: &HedgeSets) -> Result<Polyhedron> {
    check_dim(model.assets(), y.len())?;
    if node.time >= h.horizon() {
        return Err(Error::InvalidProblem("no rebalancing at the horizon".into()));
    }
    if !h.z_at(node).contains(y) {
        return Err(Error::NotSuperhedging { node: model.label(node).to_string(), time: node.time });
    }
    let k = model.solvency_cone(node);
    let reachable = minkowski_sum_cone(&Polyhedron::point(y.to_vec()), &negated(k))?;
    intersect(&reachable, h.w_at(node))
}

fn negated(k: &Cone) -> Cone {
    Cone::from_polyhedron(k.polyhedron().negate()).expect("negated cone is a cone")
}

pub fn select_rebalance(rset: &Polyhedron, y: &[Scalar], rule: SelectionRule) -> Result<Vector> {
    check_dim(rset.dim(), y.len())?;
    if rset.is_empty() {
        return Err(Error::Infeasible("empty rebalance set".into()));
    }
    match rule {
        SelectionRule::LexVertex => rset
            .vertices()
            .first()
            .cloned()
            .ok_or_else(|| Error::InvalidProblem("rebalance set has no vertex".into())),
        SelectionRule::MinimumTrading if rset.contains(y) => Ok(y.to_vec()),
        SelectionRule::MinimumTrading => nearest_l1(rset, y),
    }
}

/// `argmin ‖x - y‖₁` over `rset`, then lexicographic minimization over the optimal face.
fn nearest_l1(rset: &Polyhedron, y: &[Scalar]) -> Result<Vector> {
    let d = y.len();
    // x_0..x_{d-1} free, then p, m ≥ 0 with x - y = p - m
    let mut lp = LinearProgram::new(3 * d);
    for i in 0..d {
        lp.set_free(i);
        lp.add_constraint(
            vec![(i, Scalar::one()), (d + i, -Scalar::one()), (2 * d + i, Scalar::one())],
            Relation::Eq,
            y[i].clone(),
        );
    }
    for (a, r) in rset.hrep().iter() {
        let coeffs = a.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, v.clone())).collect();
        lp.add_constraint(coeffs, Relation::Ge, r.clone());
    }
    let dist: Vec<(usize, Scalar)> = (d..3 * d).map(|j| (j, Scalar::one())).collect();
    lp.minimize(dist.clone());
    let best = match lp.solve() {
        LpSolution::Optimal { value, .. } => value,
        _ => return Err(Error::Infeasible("no nearest point in the rebalance set".into())),
    };
    lp.add_constraint(dist, Relation::Eq, best);
    let mut x = Vec::with_capacity(d);
    for i in 0..d {
        lp.minimize(vec![(i, Scalar::one())]);
        match lp.solve() {
            LpSolution::Optimal { value, .. } => {
                lp.add_constraint(vec![(i, Scalar::one())], Relation::Eq, value.clone());
                x.push(value);
            }
            _ => return Err(Error::InvalidProblem("the optimal face is unbounded below".into())),
        }
    }
    Ok(x)
}

pub fn run_strategy(
    model: &MarketModel,
    xi: &Payoff,
    y0: &[Scalar],
    path: &PathSpec,
    h: &HedgeSets,
    rule: SelectionRule,
) -> Result<Strategy> {
    let nodes = path.nodes();
    let mut portfolios = vec![y0.to_vec()];
    let mut rebalance_sets = Vec::with_capacity(nodes.len() - 1);
    for (t, &node) in nodes[..nodes.len() - 1].iter().enumerate() {
        let y = &portfolios[t];
        let rset = rebalance_set(model, y, node, h)?;
        let next = select_rebalance(&rset, y, rule)?;
        if !model.solvency_cone(node).contains(&sub(y, &next)) {
            return Err(Error::StrategyViolation(format!("trade at {} is not self-financing", model.label(node))));
        }
        if !h.z_at(nodes[t + 1]).contains(&next) {
            return Err(Error::StrategyViolation(format!(
                "portfolio after {} does not superhedge at {}",
                model.label(node),
                model.label(nodes[t + 1])
            )));
        }
        rebalance_sets.push(rset);
        portfolios.push(next);
    }
    let last = *nodes.last().expect("path is nonempty");
    let surplus = sub(portfolios.last().expect("y_T exists"), xi.at(last));
    if !model.solvency_cone(last).contains(&surplus) {
        return Err(Error::StrategyViolation(format!("terminal surplus is not solvent at {}", model.label(last))));
    }
    Ok(Strategy { path: path.clone(), portfolios, rebalance_sets, surplus })
}

/// Every path from the root to the horizon.
pub fn all_paths(model: &MarketModel) -> Vec<PathSpec> {
    let mut paths = vec![vec![NodeId::root()]];
    for _ in 0..model.horizon() {
        paths = paths
            .into_iter()
            .flat_map(|p| {
                let last = *p.last().expect("nonempty");
                model.lattice().successors(last).map(move |n| {
                    let mut q = p.clone();
                    q.push(n);
                    q
                })
            })
            .collect();
    }
    paths.into_iter().map(|nodes| PathSpec { nodes }).collect()
}
