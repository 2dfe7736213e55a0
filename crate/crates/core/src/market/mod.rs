//! Currency markets with proportional transaction costs on finite event lattices.

mod consistency;
pub(crate) use consistency::MassProgram;
mod exchange;
mod korn_muller;
mod lattice;
mod model;
mod payoff;

pub use consistency::{check_consistent_pair, ConsistencyCheck, PricingPair};
pub use exchange::{exchange_decompose, solvency_cone, solvency_generators, ExchangeMatrix, TradePlan};
pub use korn_muller::{
    build_korn_muller, korn_muller_exchange_payoff, lattice_position, ExchangeTrigger, KornMullerParams, MidPrices,
};
pub use lattice::{EventLattice, NodeId, PathTree, TreeNode};
pub use model::MarketModel;
pub use payoff::{exchange_option_payoff, Payoff};

