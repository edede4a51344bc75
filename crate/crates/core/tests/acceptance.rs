//! Acceptance runner: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

mod common;

use std::process::ExitCode;

use equical::calibration::{cdp_search, max_alpha, required_power, Calibration, CalibrationTarget};
use equical::equipoise::{EquipoiseModel, JointEquipoiseModel};
use equical::gs::{phase3_design, AccrualModel, GroupSequentialDesign, LrConvention, Sidedness};
use equical::odds::table1;
use equical::plan::{table4, table4_candidates, PHASE2_P_INV, PHASE2_P_SOC};
use equical::proportions::{
    exact_rejection_probability, power_two_props, sample_size_two_props, TwoProportionDesign,
};
use equical::report::{table3, TABLE3_PERCENTILES};
use equical::sim::{mc_product_quantiles, simulate_gs_tte, simulate_two_prop, with_thread_cap, MonteCarlo};

/// Fixed seed for every Monte Carlo check.
const SEED: u64 = 1;

struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self { failures: Vec::new(), notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: String) {
        if ok {
            self.notes.push(what);
        } else {
            self.failures.push(what);
        }
    }

    fn within(&mut self, label: &str, got: f64, want: f64, tol: f64) {
        let ok = (got - want).abs() <= tol;
        self.check(ok, format!("{label}: {got:.6} vs {want} ± {tol:.3e}"));
    }

    fn within_rel(&mut self, label: &str, got: f64, want: f64, rel: f64) {
        let err = (got - want).abs() / want.abs();
        self.check(
            err <= rel,
            format!("{label}: {got:.6} vs {want} (rel. error {:.3}%, limit {}%)", 100.0 * err, 100.0 * rel),
        );
    }

    fn within_se(&mut self, label: &str, simulated: f64, se: f64, analytic: f64) {
        let z = (simulated - analytic) / se.max(f64::MIN_POSITIVE);
        self.check(
            z.abs() <= 3.0,
            format!("{label}: simulated {simulated:.5} ± {se:.5} vs analytic {analytic:.5} ({z:+.2} SE)"),
        );
    }
}

fn criterion_1(o: &mut Outcome) -> equical::Result<()> {
    let rows = table1();
    let odds = [9.0, 18.0, 19.0, 99.0];
    let pct = [0.90, 0.9474, 0.95, 0.99];
    for ((row, &r), &p) in rows.iter().zip(&odds).zip(&pct) {
        // Exact up to the rounding of power / alpha in binary floating point.
        o.within(&format!("odds at ({}, {})", row.alpha, row.power), row.odds, r, 4.0 * f64::EPSILON * r);
        o.within(&format!("percentile at ({}, {})", row.alpha, row.power), row.percentile, p, 1e-4);
    }
    o.check(rows.len() == 4, format!("{} rows", rows.len()));
    Ok(())
}

fn criterion_2(o: &mut Outcome) -> equical::Result<()> {
    let cases = [
        ("BP(1,2)", EquipoiseModel::BP12, 3.47, 0.01),
        ("BP(1,1)", EquipoiseModel::BP11, 19.0, 1e-6),
        ("BP(0.5,0.5)", EquipoiseModel::BP0505, 161.4, 0.5),
    ];
    for (name, m, q, tol) in cases {
        o.within(&format!("{name} 95th percentile odds"), m.odds_quantile(0.95)?, q, tol);
    }
    let power = |m| required_power(0.05, &CalibrationTarget::single(m, 0.95).unwrap());
    match power(EquipoiseModel::BP11)? {
        Calibration::Feasible(p) => o.within("BP(1,1) required power", p, 0.95, 1e-9),
        other => o.check(false, format!("BP(1,1) required power: {other:?}")),
    }
    match power(EquipoiseModel::BP12)? {
        Calibration::Feasible(p) => o.within("BP(1,2) required power", p, 0.1736, 5e-5),
        other => o.check(false, format!("BP(1,2) required power: {other:?}")),
    }
    let infeasible = matches!(power(EquipoiseModel::BP0505)?, Calibration::Infeasible { .. });
    o.check(infeasible, format!("BP(0.5,0.5) at alpha 0.05 infeasible: {infeasible}"));
    let cap = max_alpha(&CalibrationTarget::single(EquipoiseModel::BP0505, 0.95)?, 1.0)?;
    o.within("BP(0.5,0.5) max alpha", cap, 0.0062, 2e-4);
    Ok(())
}

fn criterion_3(o: &mut Outcome) -> equical::Result<()> {
    let tabulated = [1.0, 7.8, 12.8, 24.3, 66.1, 166.8, 527.9];
    let rows = table3()?;
    for (row, &want) in rows.iter().zip(&tabulated) {
        o.within_rel(&format!("threshold at {}", row.percentile), row.threshold, want, 0.005);
    }
    let mc = MonteCarlo::new(10_000_000, SEED);
    let est = mc_product_quantiles(&JointEquipoiseModel::BP11_SQUARED, &TABLE3_PERCENTILES, &mc)?;
    for (e, row) in est.iter().zip(&rows) {
        o.within_se(&format!("MC quantile at {}", e.p), e.estimate, e.se, row.threshold);
    }
    Ok(())
}

fn criterion_4(o: &mut Outcome) -> equical::Result<()> {
    let design = phase3_design(680, 0.05, 0.90)?;
    let events: Vec<u64> = design.analyses().iter().map(|a| a.events).collect();
    o.check(events == [245, 354], format!("events {events:?}"));
    let a = design.analyses();
    o.within("HR CV interim", a[0].hr_critical, 0.73, 0.015);
    o.within("HR CV final", a[1].hr_critical, 0.81, 0.015);
    let lr = design.analysis_likelihood_ratios(LrConvention::Conditional)?;
    o.within_rel("r10 interim (conditional)", lr.positive[0], 43.3, 0.10);
    o.within_rel("r10 final (conditional)", lr.positive[1], 19.7, 0.10);
    o.within_rel("r01 negative", lr.negative, 9.5, 0.10);
    let d99 = phase3_design(1146, 0.05, 0.99)?;
    let neg99 = d99.analysis_likelihood_ratios(LrConvention::Conditional)?.negative;
    o.within_rel("99% row r01 negative", neg99, 95.4, 0.02);
    Ok(())
}

fn criterion_5(o: &mut Outcome) -> equical::Result<()> {
    let rows = table4(LrConvention::default())?;
    let pn = [0.60, 0.27, 1.2, 2.4, 12.4];
    let nn = [21.0, 45.0, 43.0, 86.0, 446.0];
    let pp = [140.0, 316.0, 158.0, 167.0, 843.0];
    for (i, row) in rows.iter().enumerate() {
        o.within_rel(&format!("{} r01(+2,-3)", row.design), row.r01_pn, pn[i], 0.05);
        o.within_rel(&format!("{} r01(-2,-3)", row.design), row.r01_nn, nn[i], 0.02);
        o.within_rel(&format!("{} r10(+2,+3) final", row.design), row.r10_pp_fa, pp[i], 0.10);
    }
    let candidates = table4_candidates(LrConvention::default())?;
    let chosen = cdp_search(&candidates, 66.1).map(|c| (c.name.clone(), c.total_n));
    o.check(chosen.as_ref().is_some_and(|c| c.1 == 926), format!("search at 66.1 selects {chosen:?}"));
    Ok(())
}

fn criterion_6(o: &mut Outcome) -> equical::Result<()> {
    let n1 = 2 * sample_size_two_props(PHASE2_P_SOC, PHASE2_P_INV, 0.10, 0.80)?;
    let n2 = 2 * sample_size_two_props(PHASE2_P_SOC, PHASE2_P_INV, 0.05, 0.90)?;
    o.within("total N at (0.10, 0.80)", n1 as f64, 100.0, 2.0);
    o.within("total N at (0.05, 0.90)", n2 as f64, 192.0, 2.0);
    Ok(())
}

fn criterion_7(o: &mut Outcome) -> equical::Result<()> {
    let reps = 100_000;
    let design = GroupSequentialDesign::from_events(&[245, 354], 0.05, Sidedness::TwoSided, 0.7, 10.0, 680)?;
    let acc = AccrualModel::new(24.0, 120.0)?;
    let mc = MonteCarlo::new(reps, SEED);
    for (label, hr) in [("GS type-I error", 1.0), ("GS power", 0.7)] {
        let sim = simulate_gs_tte(&design, hr, &acc, &mc)?;
        let analytic: f64 = design.first_crossing_probs(design.drift_for_hr(hr)).iter().sum();
        let total = sim.get("reject_total").expect("total estimate");
        o.within_se(label, total.estimate, total.se, analytic);
    }

    let tp = TwoProportionDesign::with_n(PHASE2_P_SOC, PHASE2_P_INV, 0.10, 50)?;
    let size = simulate_two_prop(&tp, PHASE2_P_SOC, PHASE2_P_SOC, &mc)?;
    let size = size.get("reject").expect("reject estimate");
    o.within_se("two-proportion alpha", size.estimate, size.se, tp.alpha_one_sided);
    let exact = exact_rejection_probability(&tp, PHASE2_P_SOC, PHASE2_P_SOC)?;
    o.notes.push(format!("exact size of the pooled z-test by enumeration: {exact:.5}"));
    let power = simulate_two_prop(&tp, PHASE2_P_SOC, PHASE2_P_INV, &mc)?;
    let power = power.get("reject").expect("reject estimate");
    let analytic = power_two_props(PHASE2_P_SOC, PHASE2_P_INV, 0.10, 50)?;
    o.within_se("two-proportion power", power.estimate, power.se, analytic);

    let small = MonteCarlo::new(20_000, SEED);
    let one = with_thread_cap(Some(1), || simulate_gs_tte(&design, 0.7, &acc, &small))?.to_csv();
    let four = with_thread_cap(Some(4), || simulate_gs_tte(&design, 0.7, &acc, &small))?.to_csv();
    o.check(one == four, "GS report identical on 1 and 4 threads".into());
    let one = with_thread_cap(Some(1), || simulate_two_prop(&tp, 0.55, 0.75, &mc))?.to_csv();
    let four = with_thread_cap(Some(4), || simulate_two_prop(&tp, 0.55, 0.75, &mc))?.to_csv();
    o.check(one == four, "two-proportion report identical on 1 and 4 threads".into());
    Ok(())
}

fn criterion_8(o: &mut Outcome) -> equical::Result<()> {
    for (name, check) in common::ALL {
        match check() {
            Ok(()) => o.check(true, name.to_string()),
            Err(e) => o.check(false, format!("{name}: {e}")),
        }
    }
    Ok(())
}

type Criterion = fn(&mut Outcome) -> equical::Result<()>;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 8] = [
        ("Table 1 odds and BP(1,1) percentiles", criterion_1),
        ("single-trial thresholds and calibration", criterion_2),
        ("product-model percentiles, closed form and Monte Carlo", criterion_3),
        ("phase-3 group-sequential design", criterion_4),
        ("development plan odds and search", criterion_5),
        ("phase-2 sample sizes", criterion_6),
        ("Monte Carlo oracle agreement and determinism", criterion_7),
        ("property suite", criterion_8),
    ];
    let verbose = std::env::args().any(|a| a == "--verbose" || a == "-v");
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let mut o = Outcome::new();
        if let Err(e) = run(&mut o) {
            o.failures.push(format!("error: {e}"));
        }
        let status = if o.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {}: {status}  {name}", i + 1);
        for f in &o.failures {
            println!("    failed: {f}");
        }
        if verbose || !o.failures.is_empty() {
            for n in &o.notes {
                println!("    ok: {n}");
            }
        }
        if !o.failures.is_empty() {
            failed += 1;
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
