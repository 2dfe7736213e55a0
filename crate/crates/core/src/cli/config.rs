//! Run configuration, read from JSON.
//!
//! Numbers may be written as strings (`"3/4"`, `"0.15"`, `"1e-3"`) or as JSON
//! numbers; JSON floats are read through their shortest decimal rendering.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::geometry::scalar::parse_scalar;
use crate::geometry::{Cone, Scalar, Vector};
use crate::lvop::LvopProblem;
use crate::market::{
    build_korn_muller, korn_muller_exchange_payoff, EventLattice, ExchangeMatrix, ExchangeTrigger, KornMullerParams,
    MarketModel, Payoff,
};
use crate::strategy::{PathSpec, SelectionRule};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Num(pub Scalar);

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Num, D::Error> {
        let v = serde_json::Value::deserialize(de)?;
        let text = match &v {
            serde_json::Value::String(s) => s.clone(),
            serde_json::Value::Number(n) => n.to_string(),
            other => return Err(serde::de::Error::custom(format!("expected a number, found {other}"))),
        };
        parse_scalar(&text).map(Num).map_err(serde::de::Error::custom)
    }
}

fn vector(v: &[Num]) -> Vector {
    v.iter().map(|n| n.0.clone()).collect()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub model: Option<ModelSection>,
    #[serde(default)]
    pub payoff: Option<PayoffSection>,
    /// 1-based.
    #[serde(default)]
    pub numeraire: Option<usize>,
    #[serde(default)]
    pub c: Option<Vec<Num>>,
    #[serde(default = "default_digits")]
    pub digits: usize,
    #[serde(default = "default_render_digits")]
    pub render_digits: usize,
    #[serde(default)]
    pub strategy: Option<StrategySection>,
    #[serde(default)]
    pub lvop: Option<LvopSection>,
}

fn default_digits() -> usize {
    12
}

fn default_render_digits() -> usize {
    3
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSection {
    KornMuller(KornMullerSection),
    Explicit(ExplicitModel),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KornMullerSection {
    pub s1_0: Num,
    pub s2_0: Num,
    pub sigma1: Num,
    pub sigma2: Num,
    pub rho: Num,
    pub r: Num,
    pub tau: Num,
    pub steps: usize,
    /// Stock 1, stock 2, bond.
    pub spreads: [Num; 3],
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitModel {
    pub labels: Vec<Vec<String>>,
    pub successors: Vec<Vec<Vec<usize>>>,
    #[serde(default)]
    pub probabilities: Option<Vec<Vec<Vec<Num>>>>,
    /// One exchange matrix per node, level by level.
    pub rates: Vec<Vec<Vec<Vec<Num>>>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PayoffSection {
    Builtin {
        name: String,
        #[serde(default)]
        trigger: Trigger,
        #[serde(default)]
        negate: bool,
    },
    /// One vector per terminal node.
    Explicit {
        values: Vec<Vec<Num>>,
        #[serde(default)]
        negate: bool,
    },
    Zero,
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Trigger {
    #[default]
    Ask,
    Mid,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategySection {
    pub y0: Vec<Num>,
    pub path: Vec<String>,
    #[serde(default)]
    pub rule: Rule,
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    #[default]
    MinimumTrading,
    LexVertex,
}

impl From<Rule> for SelectionRule {
    fn from(r: Rule) -> SelectionRule {
        match r {
            Rule::MinimumTrading => SelectionRule::MinimumTrading,
            Rule::LexVertex => SelectionRule::LexVertex,
        }
    }
}

/// A stand-alone vector optimization problem: minimize `P x` over `B x ≥ b`
/// with respect to the cone generated by `cone`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LvopSection {
    pub p: Vec<Vec<Num>>,
    pub b_mat: Vec<Vec<Num>>,
    pub b: Vec<Num>,
    pub cone: Vec<Vec<Num>>,
    pub c: Vec<Num>,
}

/// A parsed and validated configuration.
pub struct Loaded {
    pub config: RunConfig,
    pub model: Option<MarketModel>,
    pub payoff: Option<Payoff>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<RunConfig> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::InvalidProblem(format!("config: {e}")))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidProblem(format!(
                "config: unsupported schema_version {} (expected {SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    pub fn korn_muller_params(&self) -> Option<KornMullerParams> {
        match &self.model {
            Some(ModelSection::KornMuller(k)) => Some(KornMullerParams {
                s1_0: k.s1_0.0.clone(),
                s2_0: k.s2_0.0.clone(),
                sigma1: k.sigma1.0.clone(),
                sigma2: k.sigma2.0.clone(),
                rho: k.rho.0.clone(),
                r: k.r.0.clone(),
                tau: k.tau.0.clone(),
                steps: k.steps,
                spreads: [k.spreads[0].0.clone(), k.spreads[1].0.clone(), k.spreads[2].0.clone()],
                digits: self.digits,
            }),
            _ => None,
        }
    }

    pub fn build_model(&self) -> Result<Option<MarketModel>> {
        match &self.model {
            None => Ok(None),
            Some(ModelSection::KornMuller(_)) => {
                build_korn_muller(&self.korn_muller_params().expect("korn_muller section")).map(Some)
            }
            Some(ModelSection::Explicit(e)) => {
                let lattice = match &e.probabilities {
                    None => EventLattice::new(e.labels.clone(), e.successors.clone())?,
                    Some(p) => EventLattice::with_transitions(
                        e.labels.clone(),
                        e.successors.clone(),
                        p.iter().map(|lvl| lvl.iter().map(|v| vector(v)).collect()).collect(),
                    )?,
                };
                let rates = e
                    .rates
                    .iter()
                    .map(|lvl| {
                        lvl.iter()
                            .map(|m| ExchangeMatrix::new(m.iter().map(|r| vector(r)).collect()))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                MarketModel::new(lattice, rates).map(Some)
            }
        }
    }

    pub fn build_payoff(&self, model: &MarketModel) -> Result<Payoff> {
        let (xi, negate) = match &self.payoff {
            None | Some(PayoffSection::Zero) => (Payoff::zero(model), false),
            Some(PayoffSection::Explicit { values, negate }) => {
                (Payoff::new(model, values.iter().map(|v| vector(v)).collect())?, *negate)
            }
            Some(PayoffSection::Builtin { name, trigger, negate }) => {
                if name != "exchange_physical" {
                    return Err(Error::InvalidProblem(format!("config: unknown builtin payoff {name:?}")));
                }
                let params = self.korn_muller_params().ok_or_else(|| {
                    Error::InvalidProblem("config: the exchange_physical payoff needs a korn_muller model".into())
                })?;
                let trigger = match trigger {
                    Trigger::Ask => ExchangeTrigger::Ask,
                    Trigger::Mid => ExchangeTrigger::Mid,
                };
                (korn_muller_exchange_payoff(&params, model, trigger)?, *negate)
            }
        };
        Ok(if negate { xi.negate() } else { xi })
    }

    pub fn weight(&self) -> Option<Vector> {
        self.c.as_ref().map(|c| vector(c))
    }

    pub fn strategy_inputs(&self, model: &MarketModel) -> Result<(Vector, PathSpec, SelectionRule)> {
        let s = self
            .strategy
            .as_ref()
            .ok_or_else(|| Error::InvalidProblem("config: no strategy section".into()))?;
        Ok((vector(&s.y0), PathSpec::from_labels(model, &s.path)?, s.rule.into()))
    }

    pub fn lvop_problem(&self, c_override: Option<Vector>) -> Result<Option<LvopProblem>> {
        let Some(l) = &self.lvop else { return Ok(None) };
        let q = l.p.len();
        let cone = Cone::generated(q, l.cone.iter().map(|r| vector(r)).collect());
        let c = c_override.unwrap_or_else(|| vector(&l.c));
        LvopProblem::new(
            l.p.iter().map(|r| vector(r)).collect(),
            l.b_mat.iter().map(|r| vector(r)).collect(),
            vector(&l.b),
            cone,
            c,
        )
        .map(Some)
    }

    pub fn load(text: &str, digits: Option<usize>) -> Result<Loaded> {
        let mut config = RunConfig::from_json(text)?;
        if let Some(d) = digits {
            config.digits = d;
        }
        let model = config.build_model()?;
        let payoff = match &model {
            Some(m) => Some(config.build_payoff(m)?),
            None => None,
        };
        Ok(Loaded { config, model, payoff })
    }
}
