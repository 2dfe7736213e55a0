//! The three-asset exchange option example: parameters, reference values and
//! tolerance-based matching.

use polyhedge::geometry::scalar::{int, parse_scalar, to_f64};
use polyhedge::geometry::Vector;
use polyhedge::market::{build_korn_muller, korn_muller_exchange_payoff, ExchangeTrigger, KornMullerParams, MarketModel, Payoff};

pub fn params() -> KornMullerParams {
    let s = |x: &str| parse_scalar(x).expect("decimal literal");
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

pub fn market(trigger: ExchangeTrigger) -> (MarketModel, Payoff) {
    let p = params();
    let model = build_korn_muller(&p).expect("valid parameters");
    let xi = korn_muller_exchange_payoff(&p, &model, trigger).expect("matching model");
    (model, xi)
}

/// Reference ask prices in assets 1, 2 and 3.
pub const ASK: [f64; 3] = [0.152, 0.146, 7.418];

/// Reference generators of the root superhedging set.
pub const Z0: [[f64; 3]; 4] =
    [[0.584, -0.260, -7.760], [0.498, -0.331, 0.000], [0.399, -0.406, 8.714], [0.424, -0.388, 6.564]];

/// Reference vertices of the comparison method's root set.
pub const SHP0: [[f64; 3]; 3] = [[0.584, -0.260, -7.760], [0.498, -0.331, 0.000], [0.347, -0.446, 13.341]];

/// Reference vertices of the lower image with `c = (0, 0, 1)`.
pub const DSTAR0: [[f64; 3]; 12] = [
    [48.726, 51.930, 7.081],
    [48.726, 51.681, 7.178],
    [45.888, 54.050, 4.981],
    [48.726, 55.201, 5.702],
    [45.888, 49.946, 6.048],
    [48.726, 50.955, 7.418],
    [48.573, 50.796, 7.395],
    [47.761, 49.946, 7.141],
    [46.565, 54.907, 5.012],
    [46.815, 55.201, 4.982],
    [46.405, 54.718, 5.018],
    [45.888, 54.108, 4.962],
];

/// Strategy path and the reference portfolios along it.
pub const PATH: [&str; 5] = ["(1,1)", "(2,1)", "(2,1)", "(3,2)", "(3,2)"];
pub const Y1: [f64; 3] = [0.498, -0.331, 0.000];
pub const Y2: [f64; 3] = [0.641, -0.491, 0.000];
pub const SURPLUS: [f64; 3] = [-0.359, 0.509, 0.000];

pub fn as_f64(v: &Vector) -> Vec<f64> {
    v.iter().map(to_f64).collect()
}

pub fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

/// For each reference point, in input order, whether a distinct computed
/// point lies within `tol` per coordinate. Both lists are taken in
/// lexicographic order so the pairing is canonical.
pub fn matched(reference: &[[f64; 3]], computed: &[Vector], tol: f64) -> Vec<bool> {
    let mut ours: Vec<Vec<f64>> = computed.iter().map(as_f64).collect();
    ours.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let mut order: Vec<usize> = (0..reference.len()).collect();
    order.sort_by(|&a, &b| reference[a].partial_cmp(&reference[b]).expect("finite"));
    let mut used = vec![false; ours.len()];
    let mut hits = vec![false; reference.len()];
    for i in order {
        if let Some(k) = (0..ours.len()).find(|&k| !used[k] && close(&ours[k], &reference[i], tol)) {
            used[k] = true;
            hits[i] = true;
        }
    }
    hits
}

/// Euclidean distance from `p` to the segment `[a, b]`.
pub fn distance_to_segment(p: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let ab: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
    let ap: Vec<f64> = a.iter().zip(p).map(|(x, y)| y - x).collect();
    let len2: f64 = ab.iter().map(|x| x * x).sum();
    let t = (ap.iter().zip(&ab).map(|(x, y)| x * y).sum::<f64>() / len2).clamp(0.0, 1.0);
    ap.iter().zip(&ab).map(|(x, y)| (x - t * y).powi(2)).sum::<f64>().sqrt()
}
