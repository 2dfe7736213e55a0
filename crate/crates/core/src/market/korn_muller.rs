//! Two correlated stocks on a recombinant lattice plus a bond, with constant
//! proportional bid-ask spreads.

use num_traits::{One, Signed, Zero};

use super::exchange::ExchangeMatrix;
use super::lattice::{two_factor_lattice, NodeId};
use super::model::MarketModel;
use super::payoff::Payoff;
use crate::error::{Error, Result};
use crate::geometry::scalar::{round_significant, to_f64};
use crate::geometry::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KornMullerParams {
    pub s1_0: Scalar,
    pub s2_0: Scalar,
    pub sigma1: Scalar,
    pub sigma2: Scalar,
    pub rho: Scalar,
    pub r: Scalar,
    pub tau: Scalar,
    pub steps: usize,
    /// Spreads of stock 1, stock 2 and the bond.
    pub spreads: [Scalar; 3],
    /// Significant digits kept when the exponentials are rationalized.
    pub digits: usize,
}

/// Mid prices at one lattice node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MidPrices {
    pub s1: Scalar,
    pub s2: Scalar,
    pub bond: Scalar,
}

impl KornMullerParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidModel(m.to_string()));
        if !self.s1_0.is_positive() || !self.s2_0.is_positive() {
            return bad("initial stock prices must be positive");
        }
        if !self.sigma1.is_positive() || !self.sigma2.is_positive() {
            return bad("volatilities must be positive");
        }
        if self.rho.abs() > Scalar::one() {
            return bad("correlation must lie in [-1, 1]");
        }
        if !self.tau.is_positive() || self.steps == 0 {
            return bad("horizon and step count must be positive");
        }
        if self.spreads.iter().any(|k| k.is_negative() || *k >= Scalar::one()) {
            return bad("spreads must lie in [0, 1)");
        }
        if self.digits == 0 {
            return bad("at least one significant digit is required");
        }
        let growth = Scalar::one() + &self.r * &self.tau / Scalar::from_integer(self.steps.into());
        if !growth.is_positive() {
            return bad("1 + rΔ must be positive");
        }
        Ok(())
    }

    pub fn delta(&self) -> Scalar {
        &self.tau / Scalar::from_integer(self.steps.into())
    }

    /// Mid prices at `(j1, j2)` (1-based) and time `t`; stocks are rounded, the bond is exact.
    pub fn mid_prices(&self, t: usize, j1: usize, j2: usize) -> MidPrices {
        let f = to_f64;
        let dt = f(&self.delta());
        let sq = dt.sqrt();
        let (r, s1, s2, rho) = (f(&self.r), f(&self.sigma1), f(&self.sigma2), f(&self.rho));
        let tf = t as f64;
        let z1 = (2 * j1) as f64 - tf - 2.0;
        let z2 = (2 * j2) as f64 - tf - 2.0;
        let e1 = (r - 0.5 * s1 * s1) * tf * dt + z1 * s1 * sq;
        let e2 = (r - 0.5 * s2 * s2) * tf * dt + (z1 * rho + z2 * (1.0 - rho * rho).sqrt()) * s2 * sq;
        let s1 = round_significant(f(&self.s1_0) * e1.exp(), self.digits);
        let s2 = round_significant(f(&self.s2_0) * e2.exp(), self.digits);
        let growth = Scalar::one() + &self.r * self.delta();
        let bond = Scalar::one() / num_traits::pow(growth, self.steps - t);
        MidPrices { s1, s2, bond }
    }

    /// Bid and ask quotes `((1-k)S, (1+k)S)` for stock 1, stock 2 and the bond.
    pub fn quotes(&self, t: usize, j1: usize, j2: usize) -> [(Scalar, Scalar); 3] {
        let m = self.mid_prices(t, j1, j2);
        let one = Scalar::one();
        let q = |s: &Scalar, k: &Scalar| (s * (&one - k), s * (&one + k));
        [q(&m.s1, &self.spreads[0]), q(&m.s2, &self.spreads[1]), q(&m.bond, &self.spreads[2])]
    }

    pub fn exchange_matrix(&self, t: usize, j1: usize, j2: usize) -> ExchangeMatrix {
        let [(s1b, s1a), (s2b, s2a), (bb, ba)] = self.quotes(t, j1, j2);
        let one = Scalar::one;
        ExchangeMatrix::new(vec![
            vec![one(), &s2a / &s1b, &ba / &s1b],
            vec![&s1a / &s2b, one(), &ba / &s2b],
            vec![&s1a / &bb, &s2a / &bb, one()],
        ])
        .expect("positive quotes give a valid exchange matrix")
    }
}

/// Builds the three-asset market on the `(t+1)²`-node recombinant lattice.
pub fn build_korn_muller(p: &KornMullerParams) -> Result<MarketModel> {
    p.validate()?;
    let lattice = two_factor_lattice(p.steps);
    let rates = (0..=p.steps)
        .map(|t| {
            let mut level = Vec::with_capacity((t + 1) * (t + 1));
            for j1 in 1..=t + 1 {
                for j2 in 1..=t + 1 {
                    level.push(p.exchange_matrix(t, j1, j2));
                }
            }
            level
        })
        .collect();
    MarketModel::new(lattice, rates)
}

/// Which prices decide whether the exchange option is exercised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExchangeTrigger {
    /// `S^{1a}_T ≥ S^{2a}_T`.
    #[default]
    Ask,
    /// `S^1_T ≥ S^2_T` on mid prices.
    Mid,
}

/// The exchange option `(1, -1, 0)` on the Korn–Müller market, exercised
/// according to `trigger`.
pub fn korn_muller_exchange_payoff(p: &KornMullerParams, model: &MarketModel, trigger: ExchangeTrigger) -> Result<Payoff> {
    if model.horizon() != p.steps || model.assets() != 3 {
        return Err(Error::InvalidModel("model was not built from these parameters".into()));
    }
    let t = p.steps;
    let values = model
        .lattice()
        .nodes(t)
        .map(|n| {
            let (j1, j2) = lattice_position(n);
            let exercise = match trigger {
                ExchangeTrigger::Ask => {
                    let [(_, a1), (_, a2), _] = p.quotes(t, j1, j2);
                    a1 >= a2
                }
                ExchangeTrigger::Mid => {
                    let m = p.mid_prices(t, j1, j2);
                    m.s1 >= m.s2
                }
            };
            if exercise {
                vec![Scalar::one(), -Scalar::one(), Scalar::zero()]
            } else {
                vec![Scalar::zero(); 3]
            }
        })
        .collect();
    Payoff::new(model, values)
}

/// `(j1, j2)` of a node of the two-factor lattice.
pub fn lattice_position(node: NodeId) -> (usize, usize) {
    let w = node.time + 1;
    (node.index / w + 1, node.index % w + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::scalar::{int, parse_scalar};

    fn example_params() -> KornMullerParams {
        let s = |x: &str| parse_scalar(x).unwrap();
        KornMullerParams {
            s1_0: int(45),
            s2_0: int(50),
            sigma1: s("0.15"),
            sigma2: s("0.2"),
            rho: s("0.2"),
            r: s("0.05"),
            tau: int(1),
            steps: 4,
            spreads: [s("0.02"), s("0.04"), s("0.01")],
            digits: 12,
        }
    }

    #[test]
    fn initial_and_terminal_prices() {
        let p = example_params();
        let m = p.mid_prices(0, 1, 1);
        assert_eq!((m.s1, m.s2), (int(45), int(50)));
        assert_eq!(p.mid_prices(4, 3, 2).bond, int(1));
        assert_eq!(p.mid_prices(0, 1, 1).bond, Scalar::new(40960000.into(), 43046721.into()));
    }

    #[test]
    fn one_step_up_price() {
        let p = example_params();
        let expected = 45.0 * 0.0846875f64.exp();
        let got = to_f64(&p.mid_prices(1, 2, 1).s1);
        assert!((got - expected).abs() < 1e-9);
        assert!((got - 48.977).abs() < 5e-4);
    }

    #[test]
    fn lattice_shape_and_spreads() {
        let p = example_params();
        let model = build_korn_muller(&p).unwrap();
        assert_eq!(model.lattice().num_nodes(4), 25);
        assert!(model.is_line_free());
        for t in 0..=4 {
            for n in model.lattice().nodes(t) {
                let (j1, j2) = lattice_position(n);
                assert_eq!(model.label(n), format!("({j1},{j2})"));
                for (b, a) in p.quotes(t, j1, j2) {
                    assert!(b < a);
                }
            }
        }
        assert!(model.check_cones());
    }

    #[test]
    fn ask_trigger_matches_rates() {
        let p = example_params();
        let model = build_korn_muller(&p).unwrap();
        let ask = korn_muller_exchange_payoff(&p, &model, ExchangeTrigger::Ask).unwrap();
        assert_eq!(ask, crate::market::exchange_option_payoff(&model).unwrap());
        let mid = korn_muller_exchange_payoff(&p, &model, ExchangeTrigger::Mid).unwrap();
        // only (4,3) has S^1 ≥ S^2 while S^{1a} < S^{2a}
        let differ: Vec<_> = model.lattice().nodes(4).filter(|&n| ask.at(n) != mid.at(n)).map(lattice_position).collect();
        assert_eq!(differ, vec![(4, 3)]);
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut p = example_params();
        p.spreads[1] = int(1);
        assert!(build_korn_muller(&p).is_err());
        let mut p = example_params();
        p.sigma1 = int(0);
        assert!(build_korn_muller(&p).is_err());
    }
}
