//! Random instances and cross-route checks shared by the property and
//! acceptance suites. Every generator is driven by a seeded ChaCha stream.
#![allow(dead_code)]

pub mod exchange_example;

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use polyhedge::dual::{dual_ask_price, run_dual};
use polyhedge::geometry::scalar::{int, ratio, unit};
use polyhedge::geometry::{
    polyfn_eval, restrict_domain, supfun_of_negated_set, Cone, HPoly, Polyhedron, Scalar, Vector, VPoly,
};
use polyhedge::lvop::{lower_image, lower_image_via_support, support_from_lower_image, upper_image, LvopProblem};
use polyhedge::market::{EventLattice, ExchangeMatrix, MarketModel, Payoff};
use polyhedge::primal::{ask_price, bid_price, run_primal};
use polyhedge::rnpricing::rn_price;
use polyhedge::strategy::{all_paths, run_strategy, SelectionRule};

pub fn small_int(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Scalar {
    int(rng.gen_range(lo..=hi))
}

pub fn int_vec(rng: &mut ChaCha8Rng, d: usize, lo: i64, hi: i64) -> Vector {
    (0..d).map(|_| small_int(rng, lo, hi)).collect()
}

/// A random nonempty polyhedron given by generators in dimension `d`.
pub fn random_vpoly(rng: &mut ChaCha8Rng, d: usize) -> VPoly {
    let nv = rng.gen_range(1..=5);
    let nr = rng.gen_range(0..=2);
    let nl = if rng.gen_bool(0.15) { 1 } else { 0 };
    let vertices = (0..nv).map(|_| int_vec(rng, d, -4, 4)).collect();
    let rays = (0..nr).map(|_| int_vec(rng, d, -2, 2)).filter(|r: &Vector| r.iter().any(|x| !x.is_zero())).collect();
    let lines = (0..nl).map(|_| int_vec(rng, d, -2, 2)).filter(|r: &Vector| r.iter().any(|x| !x.is_zero())).collect();
    VPoly::new(d, vertices, rays, lines)
}

/// A random inequality system in dimension `d`; may be empty or unbounded.
pub fn random_hpoly(rng: &mut ChaCha8Rng, d: usize) -> HPoly {
    let m = rng.gen_range(1..=d + 4);
    let rows = (0..m).map(|_| int_vec(rng, d, -3, 3)).collect();
    let rhs = (0..m).map(|_| small_int(rng, -4, 2)).collect();
    HPoly::new(d, rows, rhs)
}

/// Converting each way and back reproduces the same canonical polyhedron.
pub fn hv_round_trip(p: &Polyhedron) -> bool {
    Polyhedron::from_hrep(p.hrep().clone()) == *p && Polyhedron::from_vrep(p.vrep().clone()) == *p
}

/// Mid prices that are martingales under uniform weights on a
/// non-recombining tree, with proportional spreads around them. The last
/// asset is a frictionless bond used as the unit of account.
pub fn random_model(rng: &mut ChaCha8Rng, d: usize, horizon: usize, frictionless: bool) -> MarketModel {
    let spreads: Vec<Scalar> = (0..d)
        .map(|j| {
            if j + 1 == d || frictionless {
                Scalar::zero()
            } else {
                [ratio(1, 100), ratio(1, 50), ratio(1, 20), ratio(1, 10)][rng.gen_range(0..4)].clone()
            }
        })
        .collect();
    let mut root: Vector = (0..d).map(|_| small_int(rng, 5, 20)).collect();
    root[d - 1] = Scalar::one();
    let mut mids = vec![vec![root]];
    let mut labels = vec![vec!["r".to_string()]];
    let mut successors = Vec::new();
    for t in 0..horizon {
        let mut next_mids = Vec::new();
        let mut next_labels = Vec::new();
        let mut succ = Vec::new();
        for (i, m) in mids[t].iter().enumerate() {
            let b = rng.gen_range(1..=3usize.min(if t == 0 { 3 } else { 2 }));
            let mut kids = Vec::new();
            // per stock, factors with mean one: f_k = b·a_k / Σa
            let weights: Vec<Vec<i64>> = (0..d).map(|_| (0..b).map(|_| rng.gen_range(1..=4)).collect()).collect();
            for k in 0..b {
                let mid: Vector = (0..d)
                    .map(|j| {
                        if j + 1 == d {
                            Scalar::one()
                        } else {
                            let sum: i64 = weights[j].iter().sum();
                            &m[j] * ratio(b as i64 * weights[j][k], sum)
                        }
                    })
                    .collect();
                kids.push(next_mids.len());
                next_labels.push(format!("{}{}", labels[t][i], k));
                next_mids.push(mid);
            }
            succ.push(kids);
        }
        mids.push(next_mids);
        labels.push(next_labels);
        successors.push(succ);
    }
    let rates = mids
        .iter()
        .map(|level| {
            level
                .iter()
                .map(|s| {
                    let ask = |k: usize| &s[k] * (Scalar::one() + &spreads[k]);
                    let bid = |j: usize| &s[j] * (Scalar::one() - &spreads[j]);
                    let rows = (0..d)
                        .map(|j| (0..d).map(|k| if j == k { Scalar::one() } else { ask(k) / bid(j) }).collect())
                        .collect();
                    ExchangeMatrix::new(rows).expect("positive rates")
                })
                .collect()
        })
        .collect();
    let lattice = EventLattice::new(labels, successors).expect("well-formed tree");
    MarketModel::new(lattice, rates).expect("consistent model")
}

pub fn random_payoff(rng: &mut ChaCha8Rng, model: &MarketModel) -> Payoff {
    let d = model.assets();
    let n = model.lattice().num_nodes(model.horizon());
    Payoff::new(model, (0..n).map(|_| int_vec(rng, d, -3, 3)).collect()).expect("dimensions match")
}

/// At every node the dual function equals the support function of minus the
/// primal set, restricted to the dual solvency cone.
pub fn primal_dual_epigraphs_agree(model: &MarketModel, xi: &Payoff) -> bool {
    let h = run_primal(model, xi).expect("primal recursion");
    let s = run_dual(model, xi).expect("dual recursion");
    (0..=model.horizon()).all(|t| {
        model.lattice().nodes(t).all(|n| {
            let f = supfun_of_negated_set(h.z_at(n)).expect("nonempty set");
            let expected = restrict_domain(&f, model.dual_solvency_cone(n)).expect("same dimension");
            s.z_at(n).epigraph() == expected.epigraph()
        })
    })
}

pub fn rn_matches_primal(model: &MarketModel, xi: &Payoff) -> bool {
    let h = run_primal(model, xi).expect("primal recursion");
    (0..model.assets()).all(|i| rn_price(model, xi, i).expect("no arbitrage").value == ask_price(&h, i).expect("finite"))
}

/// The primal bid against minus the dual ask of `-ξ`, and bid ≤ ask.
pub fn bid_identity_and_order(model: &MarketModel, xi: &Payoff) -> (bool, bool) {
    let h = run_primal(model, xi).expect("primal recursion");
    let s_neg = run_dual(model, &xi.negate()).expect("dual recursion");
    let mut identity = true;
    let mut order = true;
    for i in 0..model.assets() {
        let bid = bid_price(model, xi, i).expect("finite bid");
        identity &= bid == -dual_ask_price(&s_neg, i).expect("finite");
        order &= bid <= ask_price(&h, i).expect("finite ask");
    }
    (identity, order)
}

/// Starting from the ask price in the last asset, both selection rules
/// reach a solvent terminal surplus on every path.
pub fn strategies_solvent(model: &MarketModel, xi: &Payoff) -> bool {
    let h = run_primal(model, xi).expect("primal recursion");
    let d = model.assets();
    let mut y0 = vec![Scalar::zero(); d];
    y0[d - 1] = ask_price(&h, d - 1).expect("finite ask");
    all_paths(model).iter().all(|path| {
        [SelectionRule::MinimumTrading, SelectionRule::LexVertex].iter().all(|&rule| {
            match run_strategy(model, xi, &y0, path, &h, rule) {
                Ok(s) => model.solvency_cone(*path.nodes().last().expect("nonempty")).contains(&s.surplus),
                Err(_) => false,
            }
        })
    })
}

/// A pointed ordering cone with `e^q` in its interior.
pub fn random_ordering_cone(rng: &mut ChaCha8Rng, q: usize) -> Cone {
    let mut rays = Vec::new();
    for i in 0..q - 1 {
        for sign in [1, -1] {
            let mut r = vec![Scalar::zero(); q];
            r[i] = int(sign * rng.gen_range(1..=3));
            r[q - 1] = int(rng.gen_range(1..=2));
            rays.push(r);
        }
    }
    if q == 1 {
        rays.push(vec![Scalar::one()]);
    }
    Cone::generated(q, rays)
}

/// A feasible vector optimization problem with `q` objectives and `m` constraints.
pub fn random_lvop(rng: &mut ChaCha8Rng, q: usize, m: usize) -> LvopProblem {
    let d = rng.gen_range(1..=3);
    let p = (0..q).map(|_| int_vec(rng, d, -2, 2)).collect();
    let x0 = int_vec(rng, d, -2, 2);
    let b_mat: Vec<Vector> = (0..m).map(|_| int_vec(rng, d, -3, 3)).collect();
    let b = b_mat
        .iter()
        .map(|row| row.iter().zip(&x0).map(|(a, x)| a * x).sum::<Scalar>() - small_int(rng, 0, 3))
        .collect();
    LvopProblem::new(p, b_mat, b, random_ordering_cone(rng, q), unit(q, q - 1)).expect("valid problem")
}

/// Both constructions of the lower image coincide, and the support function
/// read back from it equals the support function of minus the upper image on
/// sampled weights.
pub fn geometric_duality_holds(rng: &mut ChaCha8Rng, p: &LvopProblem) -> (bool, bool) {
    let direct = lower_image(p);
    let via_support = lower_image_via_support(p).expect("line-free cone, feasible problem");
    let z = supfun_of_negated_set(&upper_image(p)).expect("nonempty upper image");
    let q = p.q();
    let mut round_trip = true;
    for _ in 0..12 {
        let w = int_vec(rng, q, -3, 3);
        let from_image = support_from_lower_image(&direct, p.weight(), &w).expect("dimensions");
        round_trip &= from_image == polyfn_eval(&z, &w).expect("dimensions");
    }
    (direct == via_support, round_trip)
}

