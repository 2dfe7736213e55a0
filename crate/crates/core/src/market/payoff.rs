use num_traits::Zero;

use super::lattice::NodeId;
use super::model::MarketModel;
use crate::error::{check_dim, Error, Result};
use crate::geometry::scalar::{neg, zeros};
use crate::geometry::{Scalar, Vector};

/// A European payoff: the portfolio `ξ^ω` delivered at each terminal node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Payoff {
    values: Vec<Vector>,
}

impl Payoff {
    pub fn new(model: &MarketModel, values: Vec<Vector>) -> Result<Payoff> {
        let n = model.lattice().num_nodes(model.horizon());
        if values.len() != n {
            return Err(Error::InvalidModel(format!("payoff given on {} of {n} terminal nodes", values.len())));
        }
        for v in &values {
            check_dim(model.assets(), v.len())?;
        }
        Ok(Payoff { values })
    }

    pub fn zero(model: &MarketModel) -> Payoff {
        let n = model.lattice().num_nodes(model.horizon());
        Payoff { values: vec![zeros(model.assets()); n] }
    }

    pub fn constant(model: &MarketModel, v: Vector) -> Result<Payoff> {
        let n = model.lattice().num_nodes(model.horizon());
        Payoff::new(model, vec![v; n])
    }

    pub fn at(&self, node: NodeId) -> &Vector {
        &self.values[node.index]
    }

    pub fn values(&self) -> &[Vector] {
        &self.values
    }

    pub fn negate(&self) -> Payoff {
        Payoff { values: self.values.iter().map(|v| neg(v)).collect() }
    }

    pub fn shifted(&self, c: &[Scalar]) -> Payoff {
        Payoff { values: self.values.iter().map(|v| v.iter().zip(c).map(|(a, b)| a + b).collect()).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().all(Zero::is_zero)
    }
}

/// Exchange option with physical delivery in a three-asset market whose third
/// asset is the bond: `(1, -1, 0)` where stock 1's ask is at least stock 2's,
/// otherwise nothing. The comparison `S^{1a} ≥ S^{2a}` is read off the rates
/// `π^{31} = S^{1a}/B^b` and `π^{32} = S^{2a}/B^b`.
pub fn exchange_option_payoff(model: &MarketModel) -> Result<Payoff> {
    if model.assets() != 3 {
        return Err(Error::InvalidModel(format!("exchange option needs 3 assets, model has {}", model.assets())));
    }
    let t = model.horizon();
    let values = model
        .lattice()
        .nodes(t)
        .map(|n| {
            let m = model.exchange_matrix(n);
            let one = Scalar::from_integer(1.into());
            if m.rate(2, 0) >= m.rate(2, 1) {
                vec![one.clone(), -one, Scalar::zero()]
            } else {
                zeros(3)
            }
        })
        .collect();
    Ok(Payoff { values })
}
