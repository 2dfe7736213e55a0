//! The three-asset exchange option example against reference figures.

mod common;

use common::exchange_example::*;
use polyhedge::dual::{dual_ask_price, lower_image_section, run_dual};
use polyhedge::geometry::scalar::{int, to_f64};
use polyhedge::geometry::Polyhedron;
use polyhedge::market::ExchangeTrigger;
use polyhedge::primal::{ask_price, run_primal};
use polyhedge::rnpricing::rn_price;
use polyhedge::strategy::{run_strategy, PathSpec, SelectionRule};

fn is_singleton(p: &Polyhedron) -> bool {
    p.vertices().len() == 1 && p.rays().is_empty() && p.lines().is_empty()
}

#[test]
fn ask_prices_agree_across_routes() {
    let (model, xi) = market(ExchangeTrigger::Mid);
    let h = run_primal(&model, &xi).unwrap();
    let s = run_dual(&model, &xi).unwrap();
    for (i, reference) in ASK.iter().enumerate() {
        let primal = ask_price(&h, i).unwrap();
        assert_eq!(dual_ask_price(&s, i).unwrap(), primal, "asset {i}");
        assert_eq!(rn_price(&model, &xi, i).unwrap().value, primal, "asset {i}");
        assert!((to_f64(&primal) - reference).abs() <= 5e-4, "asset {i}: {}", to_f64(&primal));
    }
}

#[test]
fn lower_image_vertices() {
    let (model, xi) = market(ExchangeTrigger::Mid);
    let s = run_dual(&model, &xi).unwrap();
    let d = lower_image_section(&s, &[int(0), int(0), int(1)]).unwrap();
    assert_eq!(d.vertices().len(), DSTAR0.len());
    assert!(matched(&DSTAR0, d.vertices(), 1e-3).into_iter().all(|m| m));
    let top = d.vertices().iter().map(|v| to_f64(&v[2])).fold(f64::NEG_INFINITY, f64::max);
    assert!((top - 7.418).abs() <= 5e-4);
}

/// Three of the four reference generators are vertices; the remaining one sits
/// on the edge joining two computed vertices, so the set it spans is a strict
/// subset of the computed one.
#[test]
fn root_set_generators() {
    let (model, xi) = market(ExchangeTrigger::Mid);
    let h = run_primal(&model, &xi).unwrap();
    let z0 = h.root();
    assert_eq!(z0.vertices().len(), 4);
    let hits = matched(&Z0, z0.vertices(), 1e-3);
    assert_eq!(hits.iter().filter(|&&m| m).count(), 3);

    let ours: Vec<Vec<f64>> = z0.vertices().iter().map(as_f64).collect();
    let near = |p: [f64; 3]| ours.iter().find(|v| close(v, &p, 1e-3)).expect("reference vertex").clone();
    let far = ours.iter().find(|v| v[2] > 10.0).expect("vertex beyond the reference ones");
    let gap = distance_to_segment(&Z0[2], &near(Z0[3]), far);
    assert!(gap < 1e-3, "distance {gap}");
}

#[test]
fn ask_trigger_reproduces_comparison_set() {
    let (model, xi) = market(ExchangeTrigger::Ask);
    let h = run_primal(&model, &xi).unwrap();
    assert_eq!(h.root().vertices().len(), SHP0.len());
    assert!(matched(&SHP0, h.root().vertices(), 1e-3).into_iter().all(|m| m));
    assert!((to_f64(&ask_price(&h, 2).unwrap()) - ASK[2]).abs() <= 5e-4);
}

#[test]
fn minimum_trading_strategy_along_path() {
    for trigger in [ExchangeTrigger::Mid, ExchangeTrigger::Ask] {
        let (model, xi) = market(trigger);
        let h = run_primal(&model, &xi).unwrap();
        let y0 = vec![int(0), int(0), ask_price(&h, 2).unwrap()];
        let path = PathSpec::from_labels(&model, &PATH).unwrap();
        let s = run_strategy(&model, &xi, &y0, &path, &h, SelectionRule::MinimumTrading).unwrap();

        assert!(is_singleton(&s.rebalance_sets[0]) && is_singleton(&s.rebalance_sets[1]), "{trigger:?}");
        assert!(close(&as_f64(&s.portfolios[1]), &Y1, 1e-3), "{trigger:?}");
        assert!(close(&as_f64(&s.portfolios[2]), &Y2, 1e-3), "{trigger:?}");
        assert_eq!(s.portfolios[3], s.portfolios[2]);
        assert_eq!(s.portfolios[4], s.portfolios[3]);
        assert!(!is_singleton(&s.rebalance_sets[2]) && s.rebalance_sets[2].is_bounded());
        assert!(close(&as_f64(&s.surplus), &SURPLUS, 1e-3), "{trigger:?}");
        assert!(model.solvency_cone(*path.nodes().last().unwrap()).contains(&s.surplus));
    }
}
