//! Exact superhedging of European options under proportional transaction
//! costs, on finite multi-asset trees, by polyhedral set recursions.

pub mod error;
pub mod geometry;
pub mod cli;
pub mod dual;
pub mod lp;
pub mod lvop;
pub mod market;
pub mod primal;
pub mod rnpricing;
pub mod strategy;

pub use error::{Error, Result};
