//! Full-size (d = 19) runs of the measurement and reconstruction pipeline.

use nalgebra::DVector;
use rand_distr::{Distribution, StandardNormal};

use wigner_cs::io_metrics::{compare, load_plan_from_report, report_to_string, StateDescription};
use wigner_cs::phase_space::{number_marginal, wigner_from_density};
use wigner_cs::rng::{self, Stream};
use wigner_cs::solver::{
    least_squares_baseline, linearized_bregman, reconstruct, BasisKind, BregmanConfig, BregmanSettings, SolverStatus,
    SparseBasis,
};
use wigner_cs::states::{coherent_density, coherent_wigner_closed_form, fock_density, CoherentStateParams};
use wigner_cs::tomography::{build_full_matrix, measure, SamplingMode, SensingMatrix, SensingPlan};
use wigner_cs::{Dimension, Wigner};

fn d19() -> Dimension {
    Dimension::new(19).unwrap()
}

fn coherent_truth() -> Wigner {
    coherent_wigner_closed_form(&CoherentStateParams::new(d19(), 1.472, 0.0).unwrap()).unwrap()
}

fn sensing(count: usize, seed: u64) -> SensingMatrix<f64> {
    let full = build_full_matrix(d19()).unwrap();
    let plan = SensingPlan {
        mode: SamplingMode::RowRandom,
        count,
        seed,
    };
    SensingMatrix::from_indices(&full, plan.select(d19()).unwrap()).unwrap()
}

#[test]
fn reference_state_closed_form_and_marginals() {
    let params = CoherentStateParams::new(d19(), 1.472, 0.0).unwrap();
    let oracle_rho = coherent_density(&params).unwrap();
    let oracle = wigner_from_density(&oracle_rho).unwrap();
    let closed = coherent_truth();
    assert!((closed.values() - oracle.values()).amax() <= 1e-8);
    for (p, q) in number_marginal(&closed).iter().zip(oracle_rho.populations()) {
        assert!((p - q).abs() <= 1e-10);
    }
    // the grid has negative regions
    assert!(closed.values().min() < 0.0);
}

#[test]
fn least_squares_recovers_vacuum_d3() {
    let d3 = Dimension::new(3).unwrap();
    let full = build_full_matrix::<f64>(d3).unwrap();
    let vac = wigner_from_density(&fock_density(d3, 0).unwrap()).unwrap();
    let y = full.rows() * vac.raster();
    let ls = least_squares_baseline(full.rows(), &y).unwrap();
    assert!((ls.x - vac.raster()).amax() <= 1e-10);
}

#[test]
fn all_rows_bregman_agrees_with_least_squares() {
    let truth = coherent_truth();
    let rows = sensing(380, 0);
    let y = measure(&truth, &rows).unwrap();
    let rep = reconstruct(&y, &rows, &SparseBasis::new(BasisKind::Pixel, 361), &BregmanSettings::default()).unwrap();
    assert_eq!(rep.status, SolverStatus::Converged);
    let ls = least_squares_baseline(rows.rows(), &y.as_vector()).unwrap();
    let baseline = Wigner::from_raster(d19(), ls.x.as_slice()).unwrap();
    assert!(compare(&truth, &baseline).unwrap().relative_l2 <= 1e-8);
    assert!(compare(&truth, &rep.w_hat).unwrap().relative_l2 <= 1e-4);
    assert!(compare(&baseline, &rep.w_hat).unwrap().relative_l2 <= 1e-4);
}

fn planted(seed: u64) -> Wigner {
    let mut rng = rng::generator(seed, Stream::Synthetic);
    let support = rng::shuffled_prefix(&mut rng, 361, 8);
    let mut raster = vec![0.0; 361];
    for i in support {
        raster[i] = StandardNormal.sample(&mut rng);
    }
    Wigner::from_raster(d19(), &raster).unwrap()
}

#[test]
fn planted_sparse_grid_is_recovered() {
    let truth = planted(3);
    let rows = sensing(285, 3);
    let y = measure(&truth, &rows).unwrap();
    let rep = reconstruct(&y, &rows, &SparseBasis::new(BasisKind::Pixel, 361), &BregmanSettings::default()).unwrap();
    assert!(compare(&truth, &rep.w_hat).unwrap().relative_l2 <= 1e-3);
}

#[test]
fn cosine_sparse_grid_is_recovered() {
    let basis = SparseBasis::<f64>::new(BasisKind::Cosine, 361);
    let mut rng = rng::generator(11, Stream::Synthetic);
    let mut coeffs = DVector::zeros(361);
    for i in rng::shuffled_prefix(&mut rng, 361, 6) {
        coeffs[i] = StandardNormal.sample(&mut rng);
    }
    let truth = Wigner::from_raster(d19(), basis.synthesize(&coeffs).as_slice()).unwrap();
    let rows = sensing(285, 11);
    let y = measure(&truth, &rows).unwrap();
    let rep = reconstruct(&y, &rows, &basis, &BregmanSettings::default()).unwrap();
    assert_eq!(rep.basis, BasisKind::Cosine);
    assert!(rep.relative_residual <= 1e-6);
    assert!((basis.forward(&rep.w_hat.raster()) - &rep.coefficients).amax() <= 1e-10);
    assert!(compare(&truth, &rep.w_hat).unwrap().relative_l2 <= 1e-3);
}

#[test]
fn reconstruction_scales_with_data() {
    let truth = coherent_truth();
    let rows = sensing(285, 5);
    let y = measure(&truth, &rows).unwrap();
    let basis = SparseBasis::new(BasisKind::Pixel, 361);
    let settings = BregmanSettings {
        max_iters: Some(3000),
        ..Default::default()
    };
    let a = reconstruct(&y, &rows, &basis, &settings).unwrap();
    let b = reconstruct(&y.scaled(2.0), &rows, &basis, &settings).unwrap();
    let expected = a.w_hat.scaled(2.0);
    assert!((b.w_hat.values() - expected.values()).amax() <= 1e-8);
}

#[test]
fn residual_trend_is_downward() {
    let truth = coherent_truth();
    for (count, seed) in [(285, 0), (285, 7), (190, 1)] {
        let rows = sensing(count, seed);
        let y = measure(&truth, &rows).unwrap().as_vector();
        let cfg = BregmanConfig::auto(rows.rows(), &y).unwrap();
        let out = linearized_bregman(rows.rows(), &y, &cfg).unwrap();
        if out.history.len() >= 500 {
            assert!(out.history[499] <= out.history[49], "count={count} seed={seed}");
        }
    }
    let truth = planted(4);
    let rows = sensing(285, 4);
    let y = measure(&truth, &rows).unwrap().as_vector();
    let cfg = BregmanConfig::auto(rows.rows(), &y).unwrap();
    let out = linearized_bregman(rows.rows(), &y, &cfg).unwrap();
    if out.history.len() >= 500 {
        assert!(out.history[499] <= out.history[49]);
    }
}

#[test]
fn report_round_trip_and_determinism() {
    let truth = coherent_truth();
    let plan = SensingPlan {
        mode: SamplingMode::RowRandom,
        count: 285,
        seed: 21,
    };
    let rows = sensing(285, 21);
    let y = measure(&truth, &rows).unwrap();
    let settings = BregmanSettings {
        max_iters: Some(200),
        ..Default::default()
    };
    let basis = SparseBasis::new(BasisKind::Pixel, 361);
    let mut rep = reconstruct(&y, &rows, &basis, &settings).unwrap();
    rep.plan = Some(plan);
    rep.metrics = Some(compare(&truth, &rep.w_hat).unwrap());
    let state = StateDescription {
        kind: "coherent".into(),
        amplitude: Some(1.472),
        phase: Some(0.0),
        level: None,
        seed: None,
        rank: None,
        source_file: None,
    };
    let text = report_to_string(&rep, Some(&state)).unwrap();
    assert!(text.contains("count = 285"));
    assert!(text.contains("d = 19"));
    let (plan_back, dim, row_back) = load_plan_from_report(&text).unwrap();
    assert_eq!(plan_back, plan);
    assert_eq!(dim, d19());
    assert_eq!(row_back, rows.row_indices());
    let again = reconstruct(&y, &rows, &basis, &settings).unwrap();
    let mut again = again;
    again.plan = Some(plan);
    again.metrics = rep.metrics;
    assert_eq!(report_to_string(&again, Some(&state)).unwrap(), text);
}
