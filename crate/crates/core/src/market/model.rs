use std::collections::HashMap;

use rayon::prelude::*;

use super::exchange::{solvency_cone, ExchangeMatrix};
use super::lattice::{EventLattice, NodeId};
use crate::error::{Error, Result};
use crate::geometry::scalar::unit;
use crate::geometry::Cone;

/// Kabanov currency market on an event lattice.
#[derive(Debug, Clone)]
pub struct MarketModel {
    d: usize,
    lattice: EventLattice,
    rates: Vec<Vec<ExchangeMatrix>>,
    cones: Vec<Vec<Cone>>,
    duals: Vec<Vec<Cone>>,
}

impl MarketModel {
    /// `rates[t][i]` is the exchange matrix at node `i` of time `t`.
    pub fn new(lattice: EventLattice, rates: Vec<Vec<ExchangeMatrix>>) -> Result<MarketModel> {
        if rates.len() != lattice.horizon() + 1 {
            return Err(Error::InvalidModel("one level of exchange matrices per time step is required".into()));
        }
        let d = rates[0].first().map(ExchangeMatrix::dim).unwrap_or(0);
        if d == 0 {
            return Err(Error::InvalidModel("the market needs at least one asset".into()));
        }
        for (t, level) in rates.iter().enumerate() {
            if level.len() != lattice.num_nodes(t) {
                return Err(Error::InvalidModel(format!(
                    "time {t}: {} exchange matrices for {} nodes",
                    level.len(),
                    lattice.num_nodes(t)
                )));
            }
            if let Some(m) = level.iter().find(|m| m.dim() != d) {
                return Err(Error::DimensionMismatch { expected: d, found: m.dim() });
            }
        }

        let mut distinct: Vec<&ExchangeMatrix> = Vec::new();
        let mut slot: HashMap<&ExchangeMatrix, usize> = HashMap::new();
        for m in rates.iter().flatten() {
            slot.entry(m).or_insert_with(|| {
                distinct.push(m);
                distinct.len() - 1
            });
        }
        let computed: Vec<(Cone, Cone)> = distinct
            .par_iter()
            .map(|m| {
                let k = solvency_cone(m);
                let kd = k.dual();
                (k, kd)
            })
            .collect();
        let pick = |f: fn(&(Cone, Cone)) -> &Cone| -> Vec<Vec<Cone>> {
            rates.iter().map(|lvl| lvl.iter().map(|m| f(&computed[slot[m]]).clone()).collect()).collect()
        };
        let cones = pick(|p| &p.0);
        let duals = pick(|p| &p.1);
        Ok(MarketModel { d, lattice, rates, cones, duals })
    }

    pub fn assets(&self) -> usize {
        self.d
    }

    pub fn lattice(&self) -> &EventLattice {
        &self.lattice
    }

    pub fn horizon(&self) -> usize {
        self.lattice.horizon()
    }

    pub fn exchange_matrix(&self, node: NodeId) -> &ExchangeMatrix {
        &self.rates[node.time][node.index]
    }

    pub fn solvency_cone(&self, node: NodeId) -> &Cone {
        &self.cones[node.time][node.index]
    }

    pub fn dual_solvency_cone(&self, node: NodeId) -> &Cone {
        &self.duals[node.time][node.index]
    }

    pub fn label(&self, node: NodeId) -> &str {
        self.lattice.label(node)
    }

    /// True when every solvency cone is line-free (strictly positive costs between all pairs).
    pub fn is_line_free(&self) -> bool {
        self.cones.iter().flatten().all(Cone::is_line_free)
    }

    /// Regenerates each cone from its matrix and checks that it contains the orthant.
    pub fn check_cones(&self) -> bool {
        (0..=self.horizon()).all(|t| {
            self.lattice.nodes(t).all(|n| {
                let k = self.solvency_cone(n);
                *k == solvency_cone(self.exchange_matrix(n)) && (0..self.d).all(|j| k.contains(&unit(self.d, j)))
            })
        })
    }
}
