//! Command-line front end: config ingestion, dispatch and serialization.
//!
//! Exit codes: 0 success, 2 validation error, 3 arbitrage or unbounded
//! diagnostic, 4 duality or route-agreement failure, 1 anything else.

pub mod config;
pub mod off;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::dual::{dual_ask_price, lower_image_section, run_dual};
use crate::error::Error;
use crate::geometry::scalar::{int, parse_scalar, unit};
use crate::geometry::{lp_min, polyfn_eval, supfun_of_negated_set, LpOutcome, Polyhedron, Scalar, Vector};
use crate::lvop::{
    default_weight, hypograph_section, lower_image, lower_image_via_support, shp_step_problem, support_from_lower_image,
    upper_image, LvopProblem,
};
use crate::market::{check_consistent_pair, MarketModel, NodeId, Payoff};
use crate::primal::{ask_price, run_primal};
use crate::rnpricing::rn_price;
use crate::strategy::run_strategy;
use config::{Loaded, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_ARBITRAGE: i32 = 3;
pub const EXIT_DUALITY: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "polyhedge", version, about = "Exact superhedging prices and sets under proportional transaction costs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Asset index, 1-based.
    #[arg(long, global = true)]
    pub asset: Option<usize>,
    /// Time step for `sets` and `check-duality`.
    #[arg(long, global = true)]
    pub time: Option<usize>,
    /// Weight vector, comma separated, e.g. "0,0,1".
    #[arg(long, global = true)]
    pub c: Option<String>,
    /// Significant digits used to rationalize model inputs.
    #[arg(long, global = true)]
    pub digits: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Ask and bid prices from the primal, dual and risk-neutral routes.
    Price,
    /// Superhedging sets at one time step.
    Sets,
    /// Section of the root hypograph, or the lower image of an LVOP fixture.
    DualImage,
    /// Follow a superhedging strategy along a path.
    Strategy,
    /// Compare the geometric duality routes node by node.
    CheckDuality,
    /// Search for a consistent pricing pair.
    CheckArbitrage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Off,
}

/// A finished command: what to print and how to exit.
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match &e {
            Error::Arbitrage(_) | Error::Infeasible(_) => EXIT_ARBITRAGE,
            Error::StrategyViolation(_) | Error::MalformedEpigraph => EXIT_FAILURE,
            _ => EXIT_VALIDATION,
        };
        Failure { code, message: e.to_string() }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_VALIDATION, message: message.into() }
}

type CmdResult = Result<Outcome, Failure>;

/// Parses `args` (including the program name), runs the command and prints
/// its output. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Err(f) = configure_threads() {
        eprintln!("error: {}", f.message);
        return f.code;
    }
    match execute(&cli) {
        Ok(out) => {
            print!("{}", out.output);
            out.code
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("POLYHEDGE_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| invalid(format!("POLYHEDGE_THREADS must be a count, got {v:?}")))?;
    // a pool may already exist when called twice in one process
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

pub fn execute(cli: &Cli) -> CmdResult {
    let path = cli.config.as_ref().ok_or_else(|| invalid("--config is required"))?;
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    let loaded = RunConfig::load(&text, cli.digits)?;
    let c = cli.c.as_deref().map(parse_weight).transpose()?;
    match cli.command {
        Command::Price => cmd_price(cli, &loaded),
        Command::Sets => cmd_sets(cli, &loaded),
        Command::DualImage => cmd_dual_image(cli, &loaded, c),
        Command::Strategy => cmd_strategy(cli, &loaded),
        Command::CheckDuality => cmd_check_duality(cli, &loaded, c),
        Command::CheckArbitrage => cmd_check_arbitrage(cli, &loaded),
    }
}

fn parse_weight(s: &str) -> Result<Vector, Failure> {
    s.split(',')
        .map(|x| parse_scalar(x).map_err(|e| invalid(format!("--c: {e}"))))
        .collect()
}

fn json_only(cli: &Cli) -> Result<(), Failure> {
    match cli.format {
        Format::Json => Ok(()),
        Format::Off => Err(invalid(format!("{:?} has no OFF output", cli.command))),
    }
}

fn market(loaded: &Loaded) -> Result<(&MarketModel, &Payoff), Failure> {
    match (&loaded.model, &loaded.payoff) {
        (Some(m), Some(p)) => Ok((m, p)),
        _ => Err(invalid("config: this command needs a model section")),
    }
}

fn json_out(command: &str, body: Map<String, Value>, code: i32) -> Outcome {
    let mut output = serde_json::to_string_pretty(&report::envelope(command, body)).expect("serializable");
    output.push('\n');
    Outcome { output, code }
}

fn requested_assets(cli: &Cli, loaded: &Loaded, d: usize) -> Result<Vec<usize>, Failure> {
    match cli.asset.or(loaded.config.numeraire) {
        Some(i) if (1..=d).contains(&i) => Ok(vec![i - 1]),
        Some(i) => Err(invalid(format!("asset {i} out of range 1..={d}"))),
        None => Ok((0..d).collect()),
    }
}

fn cmd_price(cli: &Cli, loaded: &Loaded) -> CmdResult {
    json_only(cli)?;
    let (model, xi) = market(loaded)?;
    let digits = loaded.config.render_digits;
    let assets = requested_assets(cli, loaded, model.assets())?;
    let minus = xi.negate();
    let (h, h_neg) = (run_primal(model, xi)?, run_primal(model, &minus)?);
    let (s, s_neg) = (run_dual(model, xi)?, run_dual(model, &minus)?);
    let mut all_agree = true;
    let mut rows = Vec::new();
    for &i in &assets {
        let ask = [ask_price(&h, i)?, dual_ask_price(&s, i)?, rn_price(model, xi, i)?.value];
        let bid = [-ask_price(&h_neg, i)?, -dual_ask_price(&s_neg, i)?, -rn_price(model, &minus, i)?.value];
        let side = |v: &[Scalar; 3], agree: bool| {
            json!({
                "exact": report::exact(&v[0]),
                "decimal": report::decimal(&v[0], digits),
                "routes": { "primal": report::exact(&v[0]), "dual": report::exact(&v[1]), "rn": report::exact(&v[2]) },
                "agree": agree,
            })
        };
        let ask_agree = ask[0] == ask[1] && ask[1] == ask[2];
        let bid_agree = bid[0] == bid[1] && bid[1] == bid[2];
        all_agree &= ask_agree && bid_agree;
        rows.push(json!({ "asset": i + 1, "ask": side(&ask, ask_agree), "bid": side(&bid, bid_agree) }));
    }
    let mut body = Map::new();
    body.insert("prices".into(), Value::Array(rows));
    body.insert("routes_agree".into(), json!(all_agree));
    Ok(json_out("price", body, if all_agree { EXIT_OK } else { EXIT_DUALITY }))
}

fn offs<'a>(model: &MarketModel, sets: impl Iterator<Item = (NodeId, &'a Polyhedron)>) -> CmdResult {
    let mut output = String::new();
    for (n, p) in sets {
        output.push_str(&format!("# node {} time {}\n", model.label(n), n.time));
        output.push_str(&off::write_off(p)?);
    }
    Ok(Outcome { output, code: EXIT_OK })
}

fn cmd_sets(cli: &Cli, loaded: &Loaded) -> CmdResult {
    let (model, xi) = market(loaded)?;
    let t = cli.time.unwrap_or(0);
    if t > model.horizon() {
        return Err(invalid(format!("--time {t} exceeds the horizon {}", model.horizon())));
    }
    let h = run_primal(model, xi)?;
    let nodes: Vec<NodeId> = model.lattice().nodes(t).collect();
    if cli.format == Format::Off {
        return offs(model, nodes.iter().map(|&n| (n, h.z_at(n))));
    }
    let digits = loaded.config.render_digits;
    let rows = nodes
        .iter()
        .map(|&n| {
            let w = if t < model.horizon() { report::polyhedron(h.w_at(n), digits) } else { Value::Null };
            json!({ "node": model.label(n), "z": report::polyhedron(h.z_at(n), digits), "w": w })
        })
        .collect();
    let mut body = Map::new();
    body.insert("time".into(), json!(t));
    body.insert("nodes".into(), Value::Array(rows));
    Ok(json_out("sets", body, EXIT_OK))
}

/// `max{y_q : y ∈ p}` as an extended value.
fn max_last(p: &Polyhedron) -> Result<Value, Failure> {
    if p.is_empty() {
        return Ok(Value::Null);
    }
    let q = p.dim();
    Ok(match lp_min(p, &unit(q, q - 1).iter().map(|x| -x).collect::<Vec<_>>())? {
        LpOutcome::Finite { value, .. } => report::exact(&-value),
        LpOutcome::Unbounded { .. } => json!("+inf"),
    })
}

fn root_weight(model: &MarketModel, c: Option<Vector>) -> Result<Vector, Failure> {
    let k = model.solvency_cone(NodeId::root());
    let c = match c {
        Some(c) => c,
        None => default_weight(k)?,
    };
    if c.len() != model.assets() {
        return Err(invalid(format!("weight has {} entries, expected {}", c.len(), model.assets())));
    }
    if c.last().map_or(true, |x| *x != int(1)) {
        return Err(invalid("the last coordinate of c must be 1"));
    }
    if !k.contains_in_interior(&c) {
        return Err(invalid("c must lie in the interior of the root solvency cone"));
    }
    Ok(c)
}

fn cmd_dual_image(cli: &Cli, loaded: &Loaded, c: Option<Vector>) -> CmdResult {
    let digits = loaded.config.render_digits;
    let (image, c) = match loaded.config.lvop_problem(c.clone())? {
        Some(p) => (lower_image(&p), p.weight().to_vec()),
        None => {
            let (model, xi) = market(loaded)?;
            let c = root_weight(model, c.or_else(|| loaded.config.weight()))?;
            (lower_image_section(&run_dual(model, xi)?, &c)?, c)
        }
    };
    if cli.format == Format::Off {
        let mut output = off::write_off(&image)?;
        output.insert_str(0, "# lower image\n");
        return Ok(Outcome { output, code: EXIT_OK });
    }
    let mut body = Map::new();
    body.insert("c".into(), report::exact_vec(&c));
    body.insert("max_y".into(), max_last(&image)?);
    body.insert("image".into(), report::polyhedron(&image, digits));
    Ok(json_out("dual-image", body, EXIT_OK))
}

fn cmd_strategy(cli: &Cli, loaded: &Loaded) -> CmdResult {
    json_only(cli)?;
    let (model, xi) = market(loaded)?;
    let digits = loaded.config.render_digits;
    let (y0, path, rule) = loaded.config.strategy_inputs(model)?;
    let h = run_primal(model, xi)?;
    let s = run_strategy(model, xi, &y0, &path, &h, rule)?;
    let rows: Vec<Value> = path
        .nodes()
        .iter()
        .enumerate()
        .map(|(t, &n)| {
            let rebalance = s.rebalance_sets.get(t).map_or(Value::Null, |r| {
                let kind = if !r.is_bounded() {
                    "unbounded"
                } else if r.vertices().len() == 1 {
                    "singleton"
                } else {
                    "polytope"
                };
                json!({ "kind": kind, "vertices": r.vertices().len() })
            });
            json!({
                "t": t,
                "node": model.label(n),
                "y": report::exact_vec(&s.portfolios[t]),
                "y_decimal": report::decimal_vec(&s.portfolios[t], digits),
                "rebalance": rebalance,
            })
        })
        .collect();
    let last = *path.nodes().last().expect("nonempty path");
    let mut body = Map::new();
    body.insert("steps".into(), Value::Array(rows));
    body.insert("surplus".into(), report::exact_vec(&s.surplus));
    body.insert("surplus_decimal".into(), report::decimal_vec(&s.surplus, digits));
    body.insert("surplus_solvent".into(), json!(model.solvency_cone(last).contains(&s.surplus)));
    Ok(json_out("strategy", body, EXIT_OK))
}

/// Sample weights for the support-function round trip: the unit vectors,
/// the origin and small random integer vectors.
fn sample_weights(q: usize, seed: u64) -> Vec<Vector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Vector> = (0..q).map(|i| unit(q, i)).collect();
    out.push(vec![Scalar::zero(); q]);
    for _ in 0..16 {
        out.push((0..q).map(|_| int(rng.gen_range(-5..=5))).collect());
    }
    out
}

struct DualityCheck {
    routes_equal: bool,
    support_round_trip: bool,
    extra: Map<String, Value>,
}

fn check_lvop(p: &LvopProblem, seed: u64) -> Result<DualityCheck, Failure> {
    let direct = lower_image(p);
    let via_support = lower_image_via_support(p)?;
    let upper = upper_image(p);
    let z = supfun_of_negated_set(&upper)?;
    let mut round_trip = true;
    for w in sample_weights(p.q(), seed) {
        round_trip &= support_from_lower_image(&direct, p.weight(), &w)? == polyfn_eval(&z, &w)?;
    }
    Ok(DualityCheck { routes_equal: direct == via_support, support_round_trip: round_trip, extra: Map::new() })
}

fn cmd_check_duality(cli: &Cli, loaded: &Loaded, c: Option<Vector>) -> CmdResult {
    json_only(cli)?;
    let digits = loaded.config.render_digits;
    let mut rows = Vec::new();
    let mut pass = true;
    if let Some(p) = loaded.config.lvop_problem(c.clone())? {
        let chk = check_lvop(&p, cli.seed)?;
        pass &= chk.routes_equal && chk.support_round_trip;
        rows.push(json!({
            "node": "lvop",
            "lower_image_routes_equal": chk.routes_equal,
            "support_round_trip": chk.support_round_trip,
            "lower_image": report::polyhedron(&lower_image(&p), digits),
        }));
    } else {
        let (model, xi) = market(loaded)?;
        let t = cli.time.unwrap_or(0);
        if t >= model.horizon() {
            return Err(invalid(format!("--time must be below the horizon {}", model.horizon())));
        }
        let c = c.or_else(|| loaded.config.weight());
        let h = run_primal(model, xi)?;
        let s = run_dual(model, xi)?;
        for n in model.lattice().nodes(t) {
            let p = shp_step_problem(model, n, h.w_at(n), c.clone())?;
            let mut chk = check_lvop(&p, cli.seed)?;
            let upper_matches = upper_image(&p) == *h.z_at(n);
            let dual_section = hypograph_section(s.z_at(n), p.weight())?;
            let section_matches = dual_section == lower_image(&p);
            pass &= chk.routes_equal && chk.support_round_trip && upper_matches && section_matches;
            chk.extra.insert("node".into(), json!(model.label(n)));
            chk.extra.insert("c".into(), report::exact_vec(p.weight()));
            chk.extra.insert("lower_image_routes_equal".into(), json!(chk.routes_equal));
            chk.extra.insert("support_round_trip".into(), json!(chk.support_round_trip));
            chk.extra.insert("upper_image_is_primal_set".into(), json!(upper_matches));
            chk.extra.insert("lower_image_is_dual_section".into(), json!(section_matches));
            rows.push(Value::Object(chk.extra));
        }
    }
    let mut body = Map::new();
    body.insert("seed".into(), json!(cli.seed));
    body.insert("checks".into(), Value::Array(rows));
    body.insert("pass".into(), json!(pass));
    Ok(json_out("check-duality", body, if pass { EXIT_OK } else { EXIT_DUALITY }))
}

fn cmd_check_arbitrage(cli: &Cli, loaded: &Loaded) -> CmdResult {
    json_only(cli)?;
    let (model, _) = market(loaded)?;
    let chk = check_consistent_pair(model);
    let mut body = Map::new();
    body.insert("arbitrage_free".into(), json!(chk.exists));
    body.insert("min_leaf_mass".into(), report::exact(&chk.slack));
    if let Some(pair) = &chk.certificate {
        body.insert("degenerate_nodes".into(), json!(pair.degenerate_nodes()));
    }
    Ok(json_out("check-arbitrage", body, if chk.exists { EXIT_OK } else { EXIT_ARBITRAGE }))
}
