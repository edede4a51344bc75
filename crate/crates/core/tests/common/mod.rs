//! Property checks shared by the property test target and the acceptance
//! runner. Each returns `Err` with the shrunk counterexample on failure.

#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use equical::calibration::{cdp_search, required_power, Calibration, CalibrationTarget, CdpCandidate};
use equical::equipoise::{EquipoiseModel, JointEquipoiseModel};
use equical::gs::{boundaries, first_crossing_probs, hr_critical_value, obf_spending};
use equical::numerics::{normal_cdf, normal_quantile, regularized_incomplete_beta};
use equical::odds::{cdp_odds, post_odds_negative, post_odds_positive, OperatingCharacteristics};
use equical::proportions::{critical_difference, power_two_props, sample_size_two_props, VarianceConvention};

pub type Check = Result<(), String>;

fn run<S, F>(cases: u32, strategy: S, test: F) -> Check
where
    S: Strategy,
    S::Value: std::fmt::Debug,
    F: Fn(S::Value) -> Result<(), TestCaseError>,
{
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn close(a: f64, b: f64, tol: f64, what: &str) -> Result<(), TestCaseError> {
    if (a - b).abs() <= tol {
        Ok(())
    } else {
        Err(TestCaseError::fail(format!("{what}: {a} vs {b} (tolerance {tol})")))
    }
}

fn model() -> impl Strategy<Value = EquipoiseModel> {
    prop_oneof![Just(EquipoiseModel::BP11), Just(EquipoiseModel::BP0505), Just(EquipoiseModel::BP12)]
}

fn fractions(max_k: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05f64..0.95, 0..max_k).prop_map(|mut v| {
        v.sort_by(f64::total_cmp);
        v.dedup_by(|a, b| (*a - *b).abs() < 0.05);
        v.push(1.0);
        v
    })
}

pub fn normal_quantile_round_trip() -> Check {
    run(512, 1e-12f64..(1.0 - 1e-12), |p| {
        let q = normal_quantile(p).unwrap();
        close(normal_cdf(q) / p, 1.0, 1e-10, "Φ(Φ⁻¹(p)) / p")
    })
}

pub fn incomplete_beta_reflection() -> Check {
    run(512, (0.1f64..20.0, 0.1f64..20.0, 0.0f64..=1.0), |(a, b, x)| {
        let lhs = regularized_incomplete_beta(a, b, x).unwrap();
        let rhs = regularized_incomplete_beta(b, a, 1.0 - x).unwrap();
        close(lhs + rhs, 1.0, 1e-12, "I_x(a,b) + I_{1-x}(b,a)")
    })
}

pub fn odds_cdf_quantile_round_trip() -> Check {
    run(512, (model(), 1e-6f64..(1.0 - 1e-6), -6.0f64..6.0), |(m, p, log_r)| {
        let r = m.odds_quantile(p).unwrap();
        close(m.odds_cdf(r), p, 1e-10, "F(F⁻¹(p))")?;
        let r = log_r.exp();
        let back = m.odds_quantile(m.odds_cdf(r)).unwrap();
        close(back / r, 1.0, 1e-7, "F⁻¹(F(r)) / r")
    })
}

pub fn symmetric_models_are_log_symmetric() -> Check {
    run(256, (0.2f64..5.0, -8.0f64..8.0), |(a, log_r)| {
        let m = EquipoiseModel::new(a, a).unwrap();
        let r = log_r.exp();
        close(m.odds_cdf(r) + m.odds_cdf(1.0 / r), 1.0, 1e-12, "F(r) + F(1/r)")
    })
}

pub fn bp12_dominates_bp11() -> Check {
    run(512, -10.0f64..10.0, |log_r| {
        let r = log_r.exp();
        let (lo, hi) = (EquipoiseModel::BP11.odds_cdf(r), EquipoiseModel::BP12.odds_cdf(r));
        prop_assert!(hi >= lo - 1e-15, "BP(1,2) {hi} < BP(1,1) {lo} at r = {r}");
        Ok(())
    })
}

pub fn product_closed_form_matches_quadrature() -> Check {
    let j = JointEquipoiseModel::BP11_SQUARED;
    run(128, -7.0f64..7.0, move |log_c| {
        let c = log_c.exp();
        close(
            j.product_cdf(c).unwrap(),
            j.product_cdf_by_quadrature(c).unwrap(),
            1e-7,
            "closed form vs quadrature",
        )
    })
}

pub fn post_odds_reciprocity_and_prior_linearity() -> Check {
    run(512, (1e-4f64..0.5, 0.0f64..1.0, 1e-3f64..1e3, 1e-3f64..1e3), |(alpha, u, prior, k)| {
        let power = alpha + u * (0.999 - alpha);
        let oc = OperatingCharacteristics::new(alpha, power).unwrap();
        let pos = post_odds_positive(&oc, prior).unwrap().value;
        let neg = post_odds_negative(&oc, prior).unwrap().value;
        // Odds against H1 after a negative outcome vs the same computed from
        // the posterior probability of H1.
        let p_h1 = prior / (1.0 + prior);
        let post_h1_neg = p_h1 * (1.0 - power) / (p_h1 * (1.0 - power) + (1.0 - p_h1) * (1.0 - alpha));
        close(neg * post_h1_neg / (1.0 - post_h1_neg), 1.0, 1e-9, "r01(-) · r10(-)")?;
        let scaled = post_odds_positive(&oc, prior * k).unwrap().value;
        close(scaled / (pos * k), 1.0, 1e-12, "prior linearity")
    })
}

fn oc_strategy() -> impl Strategy<Value = OperatingCharacteristics> {
    (1e-3f64..0.3, 0.0f64..1.0)
        .prop_map(|(a, u)| OperatingCharacteristics::new(a, a + u * (0.995 - a)).unwrap())
}

pub fn cdp_factorization() -> Check {
    let s = (oc_strategy(), prop::collection::vec(1.01f64..500.0, 1..4), 1.01f64..200.0, 1e-2f64..1e2);
    run(512, s, |(oc2, pos3, neg3, prior)| {
        let r = cdp_odds(&oc2, &pos3, neg3, prior).unwrap();
        for (o, lr3) in r.r10_pp.iter().zip(&pos3) {
            close(o.value / (prior * oc2.positive_lr() * lr3), 1.0, 1e-12, "r10(+,+)")?;
        }
        for (o, lr3) in r.r10_np.iter().zip(&pos3) {
            close(o.value * oc2.negative_lr() / (prior * lr3), 1.0, 1e-12, "r10(-,+)")?;
        }
        close(r.r01_pn.value * prior * oc2.positive_lr() / neg3, 1.0, 1e-12, "r01(+,-)")?;
        close(r.r01_nn.value * prior / (oc2.negative_lr() * neg3), 1.0, 1e-12, "r01(-,-)")
    })
}

pub fn double_negative_odds_increase_with_phase3_power() -> Check {
    run(256, (oc_strategy(), 1e-3f64..0.1, 0.5f64..0.98, 0.001f64..0.019), |(oc2, fwer, p3, step)| {
        let neg = |power: f64| (1.0 - fwer) / (1.0 - power);
        let lo = cdp_odds(&oc2, &[10.0], neg(p3), 1.0).unwrap().r01_nn.value;
        let hi = cdp_odds(&oc2, &[10.0], neg(p3 + step), 1.0).unwrap().r01_nn.value;
        prop_assert!(hi > lo, "r01(-,-) fell from {lo} to {hi}");
        Ok(())
    })
}

pub fn fwer_conservation() -> Check {
    let s = (fractions(3), prop_oneof![Just(0.01), Just(0.05)]);
    run(48, s, |(t, fwer)| {
        let alpha = fwer / 2.0;
        let c = boundaries(&t, alpha).unwrap();
        let p0 = first_crossing_probs(&t, &c, 0.0).unwrap();
        close(p0.iter().sum::<f64>(), alpha, 1e-8, "total null crossing")?;
        let mut spent = 0.0;
        for (k, p) in p0.iter().enumerate() {
            spent += p;
            close(spent, obf_spending(t[k], alpha).unwrap(), 1e-8, "cumulative spending")?;
        }
        Ok(())
    })
}

pub fn single_look_boundary_is_normal_quantile() -> Check {
    run(256, 1e-4f64..0.2, |alpha| {
        let c = boundaries(&[1.0], alpha).unwrap()[0];
        close(c, normal_quantile(1.0 - alpha).unwrap(), 1e-10, "z_{1-α}")
    })
}

pub fn hr_critical_identity() -> Check {
    run(512, (0.0f64..5.0, 10u64..5000), |(z, d)| {
        let hr = hr_critical_value(z, d);
        close(-0.5 * hr.ln() * (d as f64).sqrt(), z, 1e-12, "z from HR")
    })
}

fn prop_pair() -> impl Strategy<Value = (f64, f64)> {
    (0.05f64..0.8, 0.05f64..0.3).prop_map(|(p, d)| (p, (p + d).min(0.97)))
}

pub fn sample_size_round_trip() -> Check {
    run(256, (prop_pair(), 0.01f64..0.2, 0.6f64..0.95), |((ps, pi), a, power)| {
        let n = sample_size_two_props(ps, pi, a, power).unwrap();
        prop_assert!(power_two_props(ps, pi, a, n).unwrap() >= power - 1e-9);
        if n > 2 {
            prop_assert!(power_two_props(ps, pi, a, n - 1).unwrap() < power);
        }
        Ok(())
    })
}

pub fn critical_difference_shrinks_with_n() -> Check {
    run(256, (prop_pair(), 0.01f64..0.2, 2u64..2000), |((ps, pi), a, n)| {
        for conv in [VarianceConvention::PooledNull, VarianceConvention::UnpooledAlternative] {
            let d0 = critical_difference(ps, pi, a, n, conv).unwrap();
            let d1 = critical_difference(ps, pi, a, n + 1, conv).unwrap();
            prop_assert!(d1 < d0);
        }
        Ok(())
    })
}

pub fn calibration_round_trip() -> Check {
    run(256, (model(), 0.5f64..0.99, 1e-4f64..0.2), |(m, pct, alpha)| {
        let target = CalibrationTarget::single(m, pct).unwrap();
        let q = target.threshold().unwrap();
        match required_power(alpha, &target).unwrap() {
            Calibration::Feasible(power) => {
                let oc = OperatingCharacteristics::new(alpha, power).unwrap();
                let post = post_odds_positive(&oc, 1.0).unwrap().value;
                close(post / q, 1.0, 1e-12, "calibrated odds / threshold")?;
                close(m.odds_cdf(post), pct, 1e-9, "percentile of calibrated odds")
            }
            Calibration::Infeasible { required, limit } => {
                prop_assert!(required > 1.0 && alpha > limit);
                Ok(())
            }
        }
    })
}

fn candidate(name: usize, total_n: u64, neg2: f64, neg3: f64) -> CdpCandidate {
    let oc = OperatingCharacteristics::new(0.1, 1.0 - 0.9 / neg2).unwrap();
    CdpCandidate {
        name: name.to_string(),
        total_n,
        report: cdp_odds(&oc, &[100.0, 60.0], neg3, 1.0).unwrap(),
    }
}

pub fn cdp_search_is_order_independent() -> Check {
    let one = (50u64..60, 1.5f64..9.0, 2.0f64..40.0);
    let s = (prop::collection::vec(one, 1..8), 10.0f64..60.0).prop_flat_map(|(v, thr)| {
        let n = v.len();
        (Just(v.clone()), Just(thr), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    });
    run(256, s, |(specs, thr, order)| {
        let cands: Vec<CdpCandidate> =
            specs.iter().enumerate().map(|(i, &(n, a, b))| candidate(i, n, a, b)).collect();
        let shuffled: Vec<CdpCandidate> = order.iter().map(|&i| cands[i].clone()).collect();
        let a = cdp_search(&cands, thr).map(|c| (c.total_n, c.report.r01_nn.value));
        let b = cdp_search(&shuffled, thr).map(|c| (c.total_n, c.report.r01_nn.value));
        prop_assert_eq!(a, b);
        Ok(())
    })
}

pub type Property = (&'static str, fn() -> Check);

pub const ALL: &[Property] = &[
    ("normal quantile round trip", normal_quantile_round_trip),
    ("incomplete beta reflection", incomplete_beta_reflection),
    ("equipoise CDF / quantile round trip", odds_cdf_quantile_round_trip),
    ("BP(a,a) log-symmetry", symmetric_models_are_log_symmetric),
    ("BP(1,2) stochastically below BP(1,1)", bp12_dominates_bp11),
    ("product CDF closed form vs quadrature", product_closed_form_matches_quadrature),
    ("post-study odds reciprocity and prior linearity", post_odds_reciprocity_and_prior_linearity),
    ("CDP factorization", cdp_factorization),
    ("double-negative odds monotone in phase-3 power", double_negative_odds_increase_with_phase3_power),
    ("FWER conservation", fwer_conservation),
    ("single-look boundary", single_look_boundary_is_normal_quantile),
    ("HR critical value identity", hr_critical_identity),
    ("sample size round trip", sample_size_round_trip),
    ("critical difference monotone in n", critical_difference_shrinks_with_n),
    ("calibration round trip", calibration_round_trip),
    ("CDP search order independence", cdp_search_is_order_independent),
];
