//! Event lattices (possibly recombining) and their expansion into path trees.

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::geometry::Scalar;

/// A node, addressed by time and index within its time level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId {
    pub time: usize,
    pub index: usize,
}

impl NodeId {
    pub fn root() -> NodeId {
        NodeId { time: 0, index: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Level {
    labels: Vec<String>,
    successors: Vec<Vec<usize>>,
    /// Transition probabilities, aligned with `successors`.
    transitions: Vec<Vec<Scalar>>,
}

/// Nodes `Ω_0, …, Ω_T` with a successor relation. Distinct nodes at time `t`
/// may share successors (recombination); reference probabilities are stored
/// as strictly positive transition probabilities along the edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventLattice {
    levels: Vec<Level>,
}

impl EventLattice {
    /// `successors[t][i]` lists the time-`t+1` indices following node `i` at time `t`;
    /// `successors.len()` is the horizon. Transition probabilities default to uniform.
    pub fn new(labels: Vec<Vec<String>>, successors: Vec<Vec<Vec<usize>>>) -> Result<EventLattice> {
        let transitions = successors
            .iter()
            .map(|lvl| {
                lvl.iter()
                    .map(|s| vec![Scalar::new(1.into(), (s.len().max(1) as i64).into()); s.len()])
                    .collect()
            })
            .collect();
        Self::with_transitions(labels, successors, transitions)
    }

    pub fn with_transitions(
        labels: Vec<Vec<String>>,
        successors: Vec<Vec<Vec<usize>>>,
        transitions: Vec<Vec<Vec<Scalar>>>,
    ) -> Result<EventLattice> {
        let horizon = successors.len();
        let bad = |msg: String| Err(Error::InvalidModel(msg));
        if labels.len() != horizon + 1 {
            return bad(format!("expected {} label levels, found {}", horizon + 1, labels.len()));
        }
        if labels[0].len() != 1 {
            return bad("time 0 must consist of a single root node".into());
        }
        if transitions.len() != horizon {
            return bad("transition levels do not match the horizon".into());
        }
        let mut levels = Vec::with_capacity(horizon + 1);
        for t in 0..=horizon {
            let n = labels[t].len();
            if n == 0 {
                return bad(format!("time {t} has no nodes"));
            }
            if t == horizon {
                levels.push(Level { labels: labels[t].clone(), successors: vec![Vec::new(); n], transitions: vec![Vec::new(); n] });
                continue;
            }
            let next = labels[t + 1].len();
            if successors[t].len() != n || transitions[t].len() != n {
                return bad(format!("time {t}: successor lists do not match the node count"));
            }
            let mut has_parent = vec![false; next];
            for (i, (succ, probs)) in successors[t].iter().zip(&transitions[t]).enumerate() {
                if succ.is_empty() {
                    return bad(format!("node {} at time {t} has no successor", labels[t][i]));
                }
                if probs.len() != succ.len() {
                    return bad(format!("node {} at time {t}: one probability per successor", labels[t][i]));
                }
                if probs.iter().any(|p| !p.is_positive()) || probs.iter().sum::<Scalar>() != Scalar::one() {
                    return bad(format!("node {} at time {t}: transition probabilities must be positive and sum to 1", labels[t][i]));
                }
                let mut sorted = succ.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != succ.len() {
                    return bad(format!("node {} at time {t} lists a successor twice", labels[t][i]));
                }
                for &s in succ {
                    if s >= next {
                        return bad(format!("node {} at time {t}: successor index {s} out of range", labels[t][i]));
                    }
                    has_parent[s] = true;
                }
            }
            if let Some(orphan) = has_parent.iter().position(|p| !p) {
                return bad(format!("node {} at time {} has no predecessor", labels[t + 1][orphan], t + 1));
            }
            levels.push(Level {
                labels: labels[t].clone(),
                successors: successors[t].clone(),
                transitions: transitions[t].clone(),
            });
        }
        Ok(EventLattice { levels })
    }

    pub fn horizon(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn num_nodes(&self, t: usize) -> usize {
        self.levels[t].labels.len()
    }

    pub fn total_nodes(&self) -> usize {
        self.levels.iter().map(|l| l.labels.len()).sum()
    }

    pub fn nodes(&self, t: usize) -> impl Iterator<Item = NodeId> {
        (0..self.num_nodes(t)).map(move |index| NodeId { time: t, index })
    }

    pub fn label(&self, node: NodeId) -> &str {
        &self.levels[node.time].labels[node.index]
    }

    pub fn find(&self, t: usize, label: &str) -> Option<NodeId> {
        let lvl = self.levels.get(t)?;
        lvl.labels.iter().position(|l| l == label).map(|index| NodeId { time: t, index })
    }

    pub fn successors(&self, node: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.levels[node.time].successors[node.index]
            .iter()
            .map(move |&index| NodeId { time: node.time + 1, index })
    }

    pub fn successor_indices(&self, node: NodeId) -> &[usize] {
        &self.levels[node.time].successors[node.index]
    }

    pub fn transition_probabilities(&self, node: NodeId) -> &[Scalar] {
        &self.levels[node.time].transitions[node.index]
    }

    pub fn is_successor(&self, from: NodeId, to: NodeId) -> bool {
        to.time == from.time + 1 && self.successor_indices(from).contains(&to.index)
    }

    /// Expands the lattice into the tree of its paths.
    pub fn path_tree(&self) -> PathTree {
        let mut levels: Vec<Vec<TreeNode>> = vec![vec![TreeNode {
            node: NodeId::root(),
            parent: None,
            children: Vec::new(),
            probability: Scalar::one(),
        }]];
        for t in 0..self.horizon() {
            let mut next = Vec::new();
            for (k, tn) in levels[t].iter_mut().enumerate() {
                let node = tn.node;
                let probs = self.transition_probabilities(node);
                for (j, s) in self.successors(node).enumerate() {
                    tn.children.push(next.len());
                    next.push(TreeNode {
                        node: s,
                        parent: Some(k),
                        children: Vec::new(),
                        probability: &tn.probability * &probs[j],
                    });
                }
            }
            levels.push(next);
        }
        PathTree { levels }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    /// The lattice node this path ends at.
    pub node: NodeId,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// Reference probability of the path.
    pub probability: Scalar,
}

/// The atoms of the filtration: one node per path prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathTree {
    pub levels: Vec<Vec<TreeNode>>,
}

impl PathTree {
    pub fn horizon(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn total_nodes(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn leaves(&self) -> &[TreeNode] {
        &self.levels[self.horizon()]
    }

    /// Lattice nodes visited by the path ending at tree node `(t, k)`.
    pub fn path(&self, t: usize, k: usize) -> Vec<NodeId> {
        let mut out = vec![NodeId::root(); t + 1];
        let mut cur = k;
        for s in (0..=t).rev() {
            let tn = &self.levels[s][cur];
            out[s] = tn.node;
            cur = tn.parent.unwrap_or(0);
        }
        out
    }
}

/// Labels `"(j1,j2)"` for the recombinant two-factor lattice used by the Korn–Müller model.
pub(crate) fn two_factor_lattice(horizon: usize) -> EventLattice {
    let labels: Vec<Vec<String>> = (0..=horizon)
        .map(|t| {
            let mut l = Vec::with_capacity((t + 1) * (t + 1));
            for j1 in 1..=t + 1 {
                for j2 in 1..=t + 1 {
                    l.push(format!("({j1},{j2})"));
                }
            }
            l
        })
        .collect();
    let successors: Vec<Vec<Vec<usize>>> = (0..horizon)
        .map(|t| {
            let w = t + 1;
            let nw = t + 2;
            let mut s = Vec::with_capacity(w * w);
            for a in 0..w {
                for b in 0..w {
                    s.push(vec![a * nw + b, (a + 1) * nw + b, a * nw + b + 1, (a + 1) * nw + b + 1]);
                }
            }
            s
        })
        .collect();
    EventLattice::new(labels, successors).expect("two-factor lattice is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_factor_counts() {
        let l = two_factor_lattice(4);
        for t in 0..=4 {
            assert_eq!(l.num_nodes(t), (t + 1) * (t + 1));
        }
        for t in 0..4 {
            for n in l.nodes(t) {
                assert_eq!(l.successors(n).count(), 4);
            }
        }
        let n = l.find(1, "(2,1)").unwrap();
        let succ: Vec<&str> = l.successors(n).map(|s| l.label(s)).collect();
        assert_eq!(succ, vec!["(2,1)", "(3,1)", "(2,2)", "(3,2)"]);
    }

    #[test]
    fn path_tree_size() {
        let tree = two_factor_lattice(4).path_tree();
        assert_eq!(tree.total_nodes(), 341);
        assert_eq!(tree.leaves().len(), 256);
        let total: Scalar = tree.leaves().iter().map(|l| l.probability.clone()).sum();
        assert_eq!(total, Scalar::one());
        let path = tree.path(4, 255);
        assert_eq!(path.len(), 5);
        assert_eq!(path[4], NodeId { time: 4, index: 24 });
    }

    #[test]
    fn rejects_orphans_and_bad_probabilities() {
        let labels = vec![vec!["r".to_string()], vec!["a".to_string(), "b".to_string()]];
        assert!(EventLattice::new(labels.clone(), vec![vec![vec![0]]]).is_err());
        let half = Scalar::new(1.into(), 2.into());
        assert!(EventLattice::with_transitions(labels.clone(), vec![vec![vec![0, 1]]], vec![vec![vec![half.clone(), half.clone()]]]).is_ok());
        assert!(EventLattice::with_transitions(labels, vec![vec![vec![0, 1]]], vec![vec![vec![half.clone(), half.clone() + half]]]).is_err());
    }
}
