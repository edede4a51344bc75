//! Simulation against the analytic engines, beyond the acceptance set.

use equical::equipoise::JointEquipoiseModel;
use equical::gs::{AccrualModel, GroupSequentialDesign, Sidedness};
use equical::proportions::{exact_rejection_probability, TwoProportionDesign};
use equical::sim::{
    mc_product_cdf, mc_product_quantiles, simulate_gs_tte, simulate_gs_tte_with_bounds, simulate_two_prop,
    Execution, MonteCarlo,
};
use equical::Error;

/// Fixed seed for every check.
const SEED: u64 = 1;

fn table2_design() -> GroupSequentialDesign {
    GroupSequentialDesign::from_events(&[245, 354], 0.05, Sidedness::TwoSided, 0.7, 10.0, 680).unwrap()
}

fn accrual() -> AccrualModel {
    AccrualModel::new(24.0, 120.0).unwrap()
}

#[test]
fn gs_first_crossings_match_integration() {
    let design = table2_design();
    let mc = MonteCarlo::new(100_000, SEED);
    for hr in [1.0, 0.7] {
        let sim = simulate_gs_tte(&design, hr, &accrual(), &mc).unwrap();
        let analytic = design.first_crossing_probs(design.drift_for_hr(hr));
        for (k, p) in analytic.iter().enumerate() {
            let e = sim.get(&format!("reject_analysis_{}", k + 1)).unwrap();
            assert!(
                (e.estimate - p).abs() <= 3.0 * e.se,
                "HR {hr}, analysis {}: {} ± {} vs {p}",
                k + 1,
                e.estimate,
                e.se
            );
        }
    }
}

#[test]
fn gs_infinite_boundaries_never_reject() {
    let design = table2_design();
    let sim = simulate_gs_tte_with_bounds(
        &design,
        &[f64::INFINITY; 2],
        0.7,
        &accrual(),
        &MonteCarlo::new(10_000, SEED),
    )
    .unwrap();
    assert!(sim.estimates.iter().all(|e| e.estimate == 0.0));
}

#[test]
fn gs_needs_enough_participants() {
    let design =
        GroupSequentialDesign::from_events(&[245, 354], 0.05, Sidedness::TwoSided, 0.7, 10.0, 300).unwrap();
    let err = simulate_gs_tte(&design, 0.7, &accrual(), &MonteCarlo::new(10_000, SEED)).unwrap_err();
    assert!(matches!(err, Error::Config(_)));
}

#[test]
fn two_prop_matches_exact_enumeration() {
    let design = TwoProportionDesign::with_n(0.55, 0.75, 0.10, 50).unwrap();
    let mc = MonteCarlo::new(100_000, SEED);
    for (ps, pi) in [(0.55, 0.55), (0.55, 0.75), (0.3, 0.3)] {
        let sim = simulate_two_prop(&design, ps, pi, &mc).unwrap();
        let e = sim.get("reject").unwrap();
        let exact = exact_rejection_probability(&design, ps, pi).unwrap();
        assert!(
            (e.estimate - exact).abs() <= 3.0 * e.se,
            "({ps}, {pi}): {} ± {} vs {exact}",
            e.estimate,
            e.se
        );
    }
}

#[test]
fn two_prop_power_near_design_power() {
    let design = TwoProportionDesign::with_n(0.55, 0.75, 0.10, 50).unwrap();
    let sim = simulate_two_prop(&design, 0.55, 0.75, &MonteCarlo::new(100_000, SEED)).unwrap();
    assert!((sim.get("reject").unwrap().estimate - 0.80).abs() < 0.02);
}

#[test]
fn two_prop_degenerate_proportions() {
    let design = TwoProportionDesign::with_n(0.55, 0.75, 0.10, 50).unwrap();
    let sim = simulate_two_prop(&design, 0.0, 0.0, &MonteCarlo::new(10_000, SEED)).unwrap();
    assert_eq!(sim.get("reject").unwrap().estimate, 0.0);
}

#[test]
fn product_quantiles_match_closed_form() {
    let j = JointEquipoiseModel::BP11_SQUARED;
    let ps = [0.5, 0.8, 0.9, 0.95, 0.99];
    let est = mc_product_quantiles(&j, &ps, &MonteCarlo::new(2_000_000, SEED)).unwrap();
    for e in &est {
        let exact = j.product_quantile(e.p).unwrap();
        assert!((e.estimate - exact).abs() <= 3.0 * e.se, "p {}: {} ± {} vs {exact}", e.p, e.estimate, e.se);
    }
    assert!((est[0].estimate - 1.0).abs() < 0.01);
    assert!((est[1].estimate - 7.8).abs() < 0.1);
}

#[test]
fn product_cdf_matches_closed_form() {
    let j = JointEquipoiseModel::BP11_SQUARED;
    for c in [0.2, 1.0, 7.8, 66.1] {
        let (p, se) = mc_product_cdf(&j, c, &MonteCarlo::new(1_000_000, SEED)).unwrap();
        let exact = j.product_cdf(c).unwrap();
        assert!((p - exact).abs() <= 3.0 * se, "c {c}: {p} ± {se} vs {exact}");
    }
}

#[test]
fn sequential_and_default_execution_agree() {
    let design = table2_design();
    let mc = MonteCarlo::new(5_000, SEED);
    let seq = mc.with_execution(Execution::Sequential);
    assert_eq!(
        simulate_gs_tte(&design, 0.7, &accrual(), &mc).unwrap(),
        simulate_gs_tte(&design, 0.7, &accrual(), &seq).unwrap()
    );
    let j = JointEquipoiseModel::BP11_SQUARED;
    let mc = MonteCarlo::new(200_000, SEED);
    assert_eq!(
        mc_product_quantiles(&j, &[0.9], &mc).unwrap(),
        mc_product_quantiles(&j, &[0.9], &mc.with_execution(Execution::Sequential)).unwrap()
    );
}

#[test]
fn report_csv_layout() {
    let design = TwoProportionDesign::with_n(0.55, 0.75, 0.10, 50).unwrap();
    let csv = simulate_two_prop(&design, 0.55, 0.75, &MonteCarlo::new(1_000, SEED)).unwrap().to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("name,estimate,se,replicates,seed"));
    assert!(lines.next().unwrap().starts_with("reject,"));
}
