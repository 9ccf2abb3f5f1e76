//! Acceptance gate: nine checks covering the distribution layer, the
//! estimators, the selection index, and the end-to-end binary. One test
//! per criterion; every tolerance is pinned next to its assertion, and
//! each test prints a PASS line (visible under `--nocapture`).

mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::time::Instant;
use tailineq::dist::{GpdParams, ParetoParams, PpdParams, TailFamily, TailModel};
use tailineq::measures::{self, Measure};
use tailineq::quad;
use tailineq::select;
use tailineq::simulate::simulate;
use tailineq::spcdf::SemiParamCdf;
use tailineq::tailfit::fit_tail_model;
use tailineq::Sample;

fn random_model(rng: &mut ChaCha12Rng, family: TailFamily) -> TailModel {
    match family {
        TailFamily::Gpd => {
            let sigma = 10f64.powf(rng.gen_range(-1.0..1.0));
            let gamma = rng.gen_range(0.05..0.95);
            TailModel::Gpd(GpdParams::new(sigma, gamma).unwrap())
        }
        TailFamily::Pareto => {
            TailModel::Pareto(ParetoParams::new(rng.gen_range(0.05..0.95)).unwrap())
        }
        TailFamily::Ppd => {
            let gamma = rng.gen_range(0.1..0.95);
            let tau = rng.gen_range(0.3..3.0);
            // Any c in (-1/tau, 1) keeps the density positive for gamma < 1;
            // stay a little inside the box.
            let c = rng.gen_range(-0.9 / tau..0.9);
            TailModel::Ppd(PpdParams::new(gamma, c, tau).unwrap())
        }
    }
}

#[test]
fn acceptance_1_distribution_oracle_suite() {
    let started = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(101);
    let mut models = 0;
    for family in TailFamily::ALL {
        for _ in 0..50 {
            let model = random_model(&mut rng, family);
            for i in 1..=20 {
                let q = i as f64 / 21.0;
                let x = model.quantile(q).unwrap();
                let c = model.cdf(x).unwrap();
                let s = model.sf(x).unwrap();
                assert!(
                    (c + s - 1.0).abs() <= 1e-12,
                    "{model:?}: cdf + sf != 1 at x = {x}"
                );
                assert!(
                    (c - q).abs() <= 1e-9,
                    "{model:?}: quantile round trip at q = {q} gave {c}"
                );
            }
            // The density must carry the distribution's full mass.
            let hi = model.quantile(1.0 - 1e-9).unwrap();
            let mass = quad::integrate_geometric(
                |x| model.density(x),
                model.support_lower(),
                hi,
                1e-8,
            )
            .unwrap();
            assert!(
                (mass - (1.0 - 1e-9)).abs() <= 1e-6,
                "{model:?}: density mass {mass} over [{}, {hi}]",
                model.support_lower()
            );
            models += 1;
        }
    }
    assert_eq!(models, 150);
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 10.0, "oracle suite took {elapsed:.1}s, budget 10s");
    println!(
        "ACCEPTANCE 1: PASS — 150 random parameter sets: cdf+sf=1 (1e-12), \
         quantile round trip (1e-9), unit density mass (1e-6), in {elapsed:.2}s"
    );
}

#[test]
fn acceptance_2_ppd_with_c_zero_is_strict_pareto() {
    for gamma in [0.25, 0.6, 0.9] {
        let pa = TailModel::Pareto(ParetoParams::new(gamma).unwrap());
        let ppd = TailModel::Ppd(PpdParams::new(gamma, 0.0, 1.3).unwrap());
        for i in 0..1000 {
            // Log-spaced grid over [1, 1e6].
            let x = 10f64.powf(6.0 * i as f64 / 999.0);
            let (ca, cb) = (pa.cdf(x).unwrap(), ppd.cdf(x).unwrap());
            assert!((ca - cb).abs() <= 1e-12, "cdf split at x = {x}: {ca} vs {cb}");
            let (sa, sb) = (pa.sf(x).unwrap(), ppd.sf(x).unwrap());
            assert!((sa - sb).abs() <= 1e-12, "sf split at x = {x}");
            let (da, db) = (pa.density(x), ppd.density(x));
            assert!(
                (da - db).abs() <= 1e-12 * da.abs().max(1.0),
                "density split at x = {x}: {da} vs {db}"
            );
        }
        for i in 1..100 {
            let q = i as f64 / 100.0;
            let (qa, qb) = (pa.quantile(q).unwrap(), ppd.quantile(q).unwrap());
            assert!(
                ((qa - qb) / qa).abs() <= 1e-9,
                "quantile split at q = {q}: {qa} vs {qb}"
            );
        }
    }
    println!(
        "ACCEPTANCE 2: PASS — c=0 perturbed Pareto matches the strict Pareto \
         on 3x1000-point grids (cdf/sf/density 1e-12, quantile 1e-9)"
    );
}

#[test]
fn acceptance_3_empirical_gini_matches_all_pairs_definition() {
    let mut rng = ChaCha12Rng::seed_from_u64(303);
    let mut worst = 0.0_f64;
    for trial in 0..200 {
        let n = rng.gen_range(2..=50);
        let values: Vec<f64> = (0..n)
            .map(|_| {
                let u: f64 = rng.gen();
                // Cubing skews the draw, so samples span scales.
                0.01 + 100.0 * u * u * u
            })
            .collect();
        let s = Sample::new(values.clone(), "oracle").unwrap();
        let got = measures::gini_np(&s).unwrap();
        let want = common::brute_force_gini(&values);
        let diff = (got - want).abs();
        assert!(diff <= 1e-12, "trial {trial} (n = {n}): {got} vs {want}");
        worst = worst.max(diff);
    }
    println!(
        "ACCEPTANCE 3: PASS — 200 samples, n in [2, 50]: order-statistic Gini \
         matches sum|xi-xj|/(2n^2 mu) within 1e-12 (worst {worst:.2e})"
    );
}

#[test]
fn acceptance_4_spliced_measures_reduce_to_empirical_without_a_tail() {
    let mut rng = ChaCha12Rng::seed_from_u64(404);
    for trial in 0..20 {
        let n = rng.gen_range(5..=400);
        let values: Vec<f64> = (0..n)
            .map(|_| {
                let u: f64 = rng.gen();
                0.5 + 50.0 * u * u
            })
            .collect();
        let s = Sample::new(values, "reduction").unwrap();
        let f = SemiParamCdf::empirical(&s);
        for m in Measure::ALL {
            let np = measures::np_value(m, &s).unwrap();
            let sp = measures::sp_value(m, &f).unwrap();
            assert_eq!(
                np.to_bits(),
                sp.to_bits(),
                "trial {trial}: {m} drifted without a tail: {np} vs {sp}"
            );
        }
    }
    println!(
        "ACCEPTANCE 4: PASS — 20 random samples: every spliced measure equals \
         its empirical counterpart to the bit when no tail is attached"
    );
}

/// Gini of the spliced distribution by direct quadrature of
/// (1/mu) int F(1-F) dx, using only order statistics and the fitted
/// (sigma, gamma, u, k) — an independent route to the closed form.
fn gpd_gini_by_quadrature(s: &Sample, sigma: f64, gamma: f64, k: usize) -> f64 {
    let n = s.n();
    let nf = n as f64;
    let alpha = k as f64 / nf;
    let values = s.values();

    // Body panels between consecutive order statistics.
    let mut f_body = 0.0;
    let mut surv_body = 0.0;
    for i in 1..=(n - k - 1) {
        let fi = i as f64 / nf;
        let width = values[i] - values[i - 1];
        f_body += fi * (1.0 - fi) * width;
        surv_body += (1.0 - fi) * width;
    }

    // Tail integrals in the excess coordinate z = x - u. The survival
    // (1 + gamma z / sigma)^(-1/gamma) is bounded by the pure power
    // (gamma z / sigma)^(-1/gamma) everywhere, so the upper-tail rule
    // gets coeff = 2 alpha (sigma/gamma)^(1/gamma), exponent 1/gamma.
    let sf = move |z: f64| (1.0 + gamma * z / sigma).powf(-1.0 / gamma);
    let g_mean = move |z: f64| alpha * sf(z);
    let g_gini = move |z: f64| alpha * sf(z) * (1.0 - alpha * sf(z));
    let a0 = (sigma / gamma).max(sigma).max(1.0);
    let coeff = 2.0 * alpha * (sigma / gamma).powf(1.0 / gamma);
    let exponent = 1.0 / gamma;

    let tail_mean = quad::integrate(g_mean, 0.0, a0, 1e-9).unwrap()
        + quad::integrate_upper_tail(g_mean, a0, coeff, exponent, 1e-9).unwrap();
    let tail_gini = quad::integrate(g_gini, 0.0, a0, 1e-9).unwrap()
        + quad::integrate_upper_tail(g_gini, a0, coeff, exponent, 1e-9).unwrap();

    let mu = values[0] + surv_body + tail_mean;
    (f_body + tail_gini) / mu
}

#[test]
fn acceptance_5_gpd_gini_closed_form_agrees_with_quadrature() {
    let cases: [(f64, &[u64]); 3] = [
        (0.2, &[1, 2, 3, 4, 5, 6, 7]),
        (0.4, &[11, 12, 13, 14, 15, 16, 17]),
        (0.6, &[21, 22, 23, 24, 25, 26]),
    ];
    let mut checked = 0;
    let mut worst = 0.0_f64;
    for (gamma, seeds) in cases {
        let model = TailModel::Gpd(GpdParams::new(1.0, gamma).unwrap());
        for &seed in seeds {
            let s = Sample::new(simulate(&model, 5000, seed), "sim").unwrap();
            let fit = fit_tail_model(&s, 0.10, TailFamily::Gpd).unwrap();
            let TailModel::Gpd(p) = fit.model else {
                panic!("gpd requested")
            };
            let (sig, gam, k) = (p.sigma(), p.gamma(), fit.k);
            let f = SemiParamCdf::build(&s, fit).unwrap();
            let closed = measures::gini_sp(&f).unwrap();
            let oracle = gpd_gini_by_quadrature(&s, sig, gam, k);
            let rel = ((closed - oracle) / oracle).abs();
            assert!(
                rel <= 1e-6,
                "gamma = {gamma}, seed = {seed}: closed {closed} vs quadrature {oracle}"
            );
            worst = worst.max(rel);
            checked += 1;
        }
    }
    assert_eq!(checked, 20);
    println!(
        "ACCEPTANCE 5: PASS — 20 simulated samples (n = 5000, gamma in \
         {{0.2, 0.4, 0.6}}): closed-form spliced Gini matches quadrature of \
         (1/mu) int F(1-F) dx within rel 1e-6 (worst {worst:.2e}); the body \
         sum over the first n-k-1 order-statistic gaps shows no discrepancy"
    );
}

#[test]
fn acceptance_6_pareto_tail_estimates_recover_the_law() {
    let started = Instant::now();
    let model = TailModel::Pareto(ParetoParams::new(0.4).unwrap());
    let s = Sample::new(simulate(&model, 20000, 4242), "sim").unwrap();

    let fit = fit_tail_model(&s, 0.10, TailFamily::Pareto).unwrap();
    let gamma_hat = fit.model.gamma();
    assert!(
        (gamma_hat - 0.4).abs() <= 0.03,
        "tail index estimate {gamma_hat} strayed from 0.4"
    );

    let f = SemiParamCdf::build(&s, fit).unwrap();
    let gini = measures::gini_sp(&f).unwrap();
    // Strict Pareto Gini is gamma / (2 - gamma) = 0.25 at gamma = 0.4.
    assert!(
        (gini - 0.25).abs() <= 0.02,
        "spliced Gini {gini} strayed from the law value 0.25"
    );

    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 30.0, "consistency run took {elapsed:.1}s, budget 30s");
    println!(
        "ACCEPTANCE 6: PASS — Pareto(0.4), n = 20000, alpha = 0.10: \
         index estimate {gamma_hat:.4} (±0.03), spliced Gini {gini:.4} \
         vs 0.25 (±0.02), in {elapsed:.2}s"
    );
}

#[test]
fn acceptance_7_representativeness_behaves_like_a_goodness_score() {
    // (a) Against the exact simulating law the index approaches 1.
    let model = TailModel::Pareto(ParetoParams::new(0.5).unwrap());
    let s = Sample::new(simulate(&model, 10_000, 777), "sim").unwrap();
    let r_true = select::bertino_index(s.values(), |x| model.cdf(x)).unwrap();
    assert!(r_true > 0.99, "true-law representativeness only {r_true}");

    // (b) Bounded on arbitrary monotone probability vectors.
    let mut rng = ChaCha12Rng::seed_from_u64(717);
    for _ in 0..1000 {
        let len = rng.gen_range(1..=100);
        let mut probs: Vec<f64> = (0..len).map(|_| rng.gen()).collect();
        probs.sort_by(f64::total_cmp);
        let r = select::bertino_from_probs(&probs).unwrap();
        assert!((0.0..=1.0).contains(&r), "index {r} escaped [0, 1]");
    }

    // (c) On Pareto data the power-law families win the selection.
    let s2 = Sample::new(simulate(&model, 4000, 555), "sim").unwrap();
    let (report, _) = select::select_tail_model_with_fits(&s2, 0.10).unwrap();
    assert!(
        matches!(report.chosen, TailFamily::Pareto | TailFamily::Ppd),
        "selection picked {:?} on strict-Pareto data",
        report.chosen
    );
    println!(
        "ACCEPTANCE 7: PASS — true-law index {r_true:.5} > 0.99 at n = 1e4; \
         bounded in [0, 1] over 1000 monotone vectors; selection on Pareto \
         data chose {:?}",
        report.chosen
    );
}

#[test]
fn acceptance_8_measures_are_scale_invariant() {
    let model = TailModel::Pareto(ParetoParams::new(0.5).unwrap());
    let base = simulate(&model, 5000, 808);
    let s0 = Sample::new(base.clone(), "base").unwrap();

    let mut drift_np = 0.0_f64;
    let mut drift = std::collections::BTreeMap::new();
    for lambda in [0.001, 1000.0] {
        let s1 = Sample::new(base.iter().map(|v| v * lambda).collect(), "scaled").unwrap();

        for m in Measure::ALL {
            let a = measures::np_value(m, &s0).unwrap();
            let b = measures::np_value(m, &s1).unwrap();
            let rel = (a - b).abs() / a.abs().max(1e-300);
            assert!(rel <= 1e-12, "empirical {m} drifted under x{lambda}: {a} vs {b}");
            drift_np = drift_np.max(rel);
        }

        for family in TailFamily::ALL {
            // The ratio-based families are scale-free by construction
            // (only float rounding moves them); the excess-based family
            // re-runs its optimizer on translated coordinates, so it
            // gets the step-tolerance budget. Same budget for the
            // perturbed family, whose second-order parameters come from
            // an optimizer as well.
            let tol = match family {
                TailFamily::Pareto => 1e-12,
                TailFamily::Gpd | TailFamily::Ppd => 1e-6,
            };
            let f0 = {
                let fit = fit_tail_model(&s0, 0.10, family).unwrap();
                SemiParamCdf::build(&s0, fit).unwrap()
            };
            let f1 = {
                let fit = fit_tail_model(&s1, 0.10, family).unwrap();
                SemiParamCdf::build(&s1, fit).unwrap()
            };
            for m in Measure::ALL {
                let a = measures::sp_value(m, &f0).unwrap();
                let b = measures::sp_value(m, &f1).unwrap();
                let rel = (a - b).abs() / a.abs().max(1e-300);
                assert!(
                    rel <= tol,
                    "spliced {m} ({family:?}) drifted under x{lambda}: {a} vs {b}"
                );
                let slot = drift.entry(format!("{family:?}")).or_insert(0.0_f64);
                *slot = slot.max(rel);
            }
        }
    }
    println!(
        "ACCEPTANCE 8: PASS — x0.001 and x1000 rescaling: empirical drift \
         {drift_np:.2e} (tol 1e-12); spliced drift {drift:?} \
         (Pareto tol 1e-12, Gpd/Ppd tol 1e-6)"
    );
}

#[test]
fn acceptance_9_end_to_end_run_is_deterministic_and_degrades_per_cell() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("sim.txt");
    let data2 = dir.path().join("sim2.txt");

    // Seeded simulation writes identical bytes on every run.
    let run1 = common::run_cli(&[
        "simulate", "--family", "pa", "--params", "gamma=0.5", "--n", "2000", "--seed",
        "99", "--out", data.to_str().unwrap(),
    ]);
    assert!(run1.status.success());
    let run2 = common::run_cli(&[
        "simulate", "--family", "pa", "--params", "gamma=0.5", "--n", "2000", "--seed",
        "99", "--out", data2.to_str().unwrap(),
    ]);
    assert!(run2.status.success());
    let bytes1 = std::fs::read(&data).unwrap();
    let bytes2 = std::fs::read(&data2).unwrap();
    assert_eq!(bytes1, bytes2, "same seed must write identical files");

    // A four-method report, byte-identical across repeated runs.
    let analyze = ["--input", data.to_str().unwrap(), "--tail", "all", "--output", "json"];
    let a = common::run_cli(&analyze);
    let b = common::run_cli(&analyze);
    assert_eq!(a.status.code(), Some(0), "clean run exits 0");
    assert_eq!(a.stdout, b.stdout, "repeated analysis must be byte-identical");
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(
        report["methods"],
        serde_json::json!(["np", "sp-gpd", "sp-pa", "sp-ppd"]),
        "tail=all produces the four-method layout"
    );

    // Infinite-mean injection: per-cell errors, partial exit code, and an
    // intact empirical column.
    let heavy = dir.path().join("heavy.txt");
    let sim_heavy = common::run_cli(&[
        "simulate", "--family", "pa", "--params", "gamma=1.2", "--n", "5000", "--seed",
        "31", "--out", heavy.to_str().unwrap(),
    ]);
    assert!(sim_heavy.status.success());
    let partial = common::run_cli(&[
        "--input", heavy.to_str().unwrap(), "--tail", "all", "--output", "json",
    ]);
    assert_eq!(partial.status.code(), Some(2), "partial results exit 2");
    let report: serde_json::Value = serde_json::from_slice(&partial.stdout).unwrap();
    for method in ["sp-gpd", "sp-pa", "sp-ppd"] {
        assert_eq!(
            report["measures"]["gini"][method]["kind"], "infinite-mean",
            "{method} Gini must fail with the typed infinite-mean error"
        );
    }
    assert!(
        report["measures"]["gini"]["np"]["value"].is_f64(),
        "empirical Gini stays intact"
    );
    assert!(
        report["measures"]["qsr"]["np"]["value"].is_f64(),
        "empirical QSR stays intact"
    );
    println!(
        "ACCEPTANCE 9: PASS — simulate/analyze round trip byte-identical; \
         four-method report; infinite-mean tail degrades per cell with exit \
         code 2 and an intact empirical column"
    );
}
