//! The acceptance suite: every check the artifact must pass, with its
//! tolerance pinned in code.
//!
//! Each check is a pure function returning a [`CheckReport`]; the
//! `acceptance` integration test asserts them one by one and the CLI's
//! `verify` subcommand runs the same list. Random draws are seeded, so the
//! suite is deterministic.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{sigma_from_belief_threshold, BehaviorRule, ModelParams, SignalPolicy};
use crate::oracle::{enumerate_pm_payoff, oracle_solve};
use crate::sim::simulate;
use crate::solver::{
    benchmark_thresholds, marginal_gains, regime_payoff, solve_two_project, two_project_cutoffs,
    Regime,
};
use crate::statics::{find_e_hat, mu_sweep, sweep_e};

/// Outcome of one acceptance check.
#[derive(Debug, Clone)]
pub struct CheckReport {
    /// Stable check name.
    pub name: &'static str,
    /// Did every assertion hold within its tolerance and runtime bound?
    pub passed: bool,
    /// What was checked, plus the first failure when one occurred.
    pub detail: String,
    /// Wall-clock runtime.
    pub millis: u128,
}

impl CheckReport {
    /// One pass/fail line for terminals and logs.
    pub fn line(&self) -> String {
        format!(
            "{} {} ({} ms): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.millis,
            self.detail
        )
    }
}

struct Checker {
    failures: Vec<String>,
    checked: usize,
}

impl Checker {
    fn new() -> Self {
        Self {
            failures: Vec::new(),
            checked: 0,
        }
    }

    fn require(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failures.len() < 4 {
            self.failures.push(msg());
        } else if !ok {
            self.failures.push(String::new());
        }
    }

    fn finish(
        self,
        name: &'static str,
        started: Instant,
        budget_ms: Option<u128>,
        summary: &str,
    ) -> CheckReport {
        let millis = started.elapsed().as_millis();
        let mut passed = self.failures.is_empty();
        let mut detail = if passed {
            format!("{summary}; {} assertions held", self.checked)
        } else {
            let shown: Vec<&String> = self.failures.iter().filter(|m| !m.is_empty()).collect();
            format!(
                "{summary}; {}/{} assertions failed, e.g. {}",
                self.failures.len(),
                self.checked,
                shown.first().map(|s| s.as_str()).unwrap_or("(suppressed)")
            )
        };
        if let Some(budget) = budget_ms {
            if millis >= budget {
                passed = false;
                detail.push_str(&format!("; runtime {millis} ms exceeded {budget} ms"));
            }
        }
        CheckReport {
            name,
            passed,
            detail,
            millis,
        }
    }
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// A valid random economy. Spillover offsets are capped at 0.6 so the
/// payoff slopes stay within the grid-resolution bound used by the oracle
/// agreement check.
fn draw_params(rng: &mut ChaCha8Rng) -> ModelParams<f64> {
    draw_params_with_c(rng, 0.1, 0.9)
}

fn draw_params_with_c(rng: &mut ChaCha8Rng, c_lo: f64, c_hi: f64) -> ModelParams<f64> {
    let c = uniform(rng, c_lo, c_hi);
    let p = c * uniform(rng, 0.05, 0.95);
    let e = c * uniform(rng, 0.05, 0.95);
    let mu_b = c + uniform(rng, 0.05, 0.6);
    let mu_a = mu_b + uniform(rng, 0.05, 0.6);
    ModelParams::new(p, c, e, mu_a, mu_b).expect("draw ranges satisfy the constraints")
}

fn reference_params() -> ModelParams<f64> {
    ModelParams::new(0.3, 0.5, 0.1, 0.8, 0.6).expect("reference point is valid")
}

/// The belief-threshold map regenerates both closed-form accuracy bounds
/// within 1e-12 on 1,000 random economies, in under a second.
pub fn check_threshold_regeneration() -> CheckReport {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut ck = Checker::new();
    for _ in 0..1000 {
        let params = draw_params(&mut rng);
        let (p, c, e) = (params.p(), params.c(), params.e());
        let via_map = sigma_from_belief_threshold(p, 1.0 / (2.0 - c));
        let direct = 1.0 - (1.0 - c) * p / (1.0 - p);
        ck.require((via_map - direct).abs() <= 1e-12, || {
            format!(
                "participation bound differs by {:e} at p={p}, c={c}",
                via_map - direct
            )
        });
        let via_map = sigma_from_belief_threshold(p, 1.0 - e / c);
        let direct = 1.0 - (e / (c - e)) * p / (1.0 - p);
        ck.require((via_map - direct).abs() <= 1e-12, || {
            format!(
                "deterrence bound differs by {:e} at p={p}, c={c}, e={e}",
                via_map - direct
            )
        });
    }
    ck.finish(
        "threshold-regeneration",
        started,
        Some(1000),
        "belief-threshold map vs direct formulas, 1000 draws, tol 1e-12",
    )
}

/// The binding accuracy equals the deterrence bound exactly when
/// `e <= e_bar` and the participation bound otherwise, with both branches
/// agreeing at `e_bar` within 1e-12. 500-point effort grids for 50 draws.
pub fn check_benchmark_branch_switch() -> CheckReport {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut ck = Checker::new();
    for _ in 0..50 {
        let params = draw_params(&mut rng);
        let c = params.c();
        let e_bar = benchmark_thresholds(&params).e_bar;
        for k in 1..=500 {
            let e = c * k as f64 / 501.0;
            let t = benchmark_thresholds(&params.with_e(e).expect("grid inside (0, c)"));
            let want = if e <= e_bar {
                t.sigma_upper
            } else {
                t.sigma_lower
            };
            ck.require(t.sigma_hat == want, || {
                format!("binding bound picked the wrong branch at e={e}, e_bar={e_bar}")
            });
        }
        let at_bar = benchmark_thresholds(&params.with_e(e_bar).expect("e_bar inside (0, c)"));
        ck.require(
            (at_bar.sigma_upper - at_bar.sigma_lower).abs() <= 1e-12,
            || {
                format!(
                    "branches differ by {:e} at e_bar",
                    at_bar.sigma_upper - at_bar.sigma_lower
                )
            },
        );
    }
    ck.finish(
        "benchmark-branch-switch",
        started,
        None,
        "binding accuracy branch vs e_bar on 50 draws x 500 efforts",
    )
}

/// Exact enumeration equals the affine payoff forms within 1e-12 on
/// 200 draws x 11 accuracies per side, in under a second.
pub fn check_enumeration_matches_closed_form() -> CheckReport {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut ck = Checker::new();
    for _ in 0..200 {
        let params = draw_params(&mut rng);
        let rule = BehaviorRule::paper(&params);
        let sigma_hat = benchmark_thresholds(&params).sigma_hat;
        for k in 0..11 {
            let sigma_a = sigma_hat + (1.0 - sigma_hat) * k as f64 / 10.0;
            let policy = SignalPolicy::new(sigma_a, sigma_hat).expect("accuracies in [0,1]");
            let gap = enumerate_pm_payoff(&params, &policy, &rule).payoff
                - regime_payoff(&params, Regime::RevealA, sigma_a);
            ck.require(gap.abs() <= 1e-12, || {
                format!("a-favored enumeration off by {gap:e} at sigma_a={sigma_a}")
            });

            let sigma_b = sigma_hat + (1.0 - sigma_hat) * (k + 1) as f64 / 11.0;
            let policy = SignalPolicy::new(sigma_hat, sigma_b).expect("accuracies in [0,1]");
            let gap = enumerate_pm_payoff(&params, &policy, &rule).payoff
                - regime_payoff(&params, Regime::RevealB, sigma_b);
            ck.require(gap.abs() <= 1e-12, || {
                format!("b-favored enumeration off by {gap:e} at sigma_b={sigma_b}")
            });
        }
    }
    ck.finish(
        "enumeration-matches-closed-form",
        started,
        Some(1000),
        "enumeration vs affine payoffs, 200 draws x 11 accuracies each side, tol 1e-12",
    )
}

/// Grid argmax (201 points per axis, paper rule) agrees with the closed-form
/// solution on 200 random economies: payoff within 0.01 and the same regime
/// whenever the prior is at least 0.01 away from both cutoffs. Under 30 s.
pub fn check_grid_oracle_agreement() -> CheckReport {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut ck = Checker::new();
    let mut reveal_b_failures = 0usize;
    let mut other_failures = 0usize;
    for _ in 0..200 {
        let params = draw_params(&mut rng);
        let rule = BehaviorRule::paper(&params);
        let closed = solve_two_project(&params);
        let oracle = oracle_solve(&params, &rule, 201, false).expect("grid has feasible corners");
        let gap = (closed.pm_payoff - oracle.best_payoff).abs();
        let mut draw_failed = false;
        if gap > 0.01 {
            draw_failed = true;
        }
        ck.require(gap <= 0.01, || {
            format!(
                "payoff gap {gap:.4} at p={}, c={}, e={}, mu_a={}, mu_b={} (closed {}, oracle {})",
                params.p(),
                params.c(),
                params.e(),
                params.mu_a(),
                params.mu_b(),
                closed.pm_payoff,
                oracle.best_payoff
            )
        });
        let cutoffs = closed
            .cutoffs
            .expect("two-project solution carries cutoffs");
        let near_cutoff = (params.p() - cutoffs.p_lower).abs() < 0.01
            || (params.p() - cutoffs.p_bar).abs() < 0.01;
        if !near_cutoff && oracle.regime_resolvable {
            if oracle.regime_guess != Some(closed.regime) {
                draw_failed = true;
            }
            ck.require(oracle.regime_guess == Some(closed.regime), || {
                format!(
                    "regime {:?} vs closed {} at p={}, c={}, e={}, mu_a={}, mu_b={}",
                    oracle.regime_guess,
                    closed.regime,
                    params.p(),
                    params.c(),
                    params.e(),
                    params.mu_a(),
                    params.mu_b()
                )
            });
        }
        if draw_failed {
            if closed.regime == Regime::RevealB {
                reveal_b_failures += 1;
            } else {
                other_failures += 1;
            }
        }
    }
    let mut report = ck.finish(
        "grid-oracle-agreement",
        started,
        Some(30_000),
        "grid argmax vs case split, 200 draws, grid 201, gap tol 0.01",
    );
    if reveal_b_failures + other_failures > 0 {
        report.detail.push_str(&format!(
            "; failing draws by closed regime: {reveal_b_failures} reveal_b, {other_failures} \
             other — the grid argmax prefers the symmetric policy inside the reveal_b band, \
             where the equal-posterior tie at the (1,1) signal pair funds the \
             higher-spillover project"
        ));
    }
    report
}

/// Every closed-form quantity at the reference economy
/// (p=0.3, c=0.5, e=0.1, mu_a=0.8, mu_b=0.6), within 1e-9.
pub fn check_reference_point() -> CheckReport {
    let started = Instant::now();
    let mut ck = Checker::new();
    let params = reference_params();
    let t = benchmark_thresholds(&params);
    let g = marginal_gains(&params);
    let k = two_project_cutoffs(&params);
    let s = solve_two_project(&params);
    let expectations: [(&str, f64, f64); 11] = [
        ("sigma_lower", t.sigma_lower, 0.785714285714),
        ("sigma_upper", t.sigma_upper, 0.892857142857),
        ("e_bar", t.e_bar, 0.166666666667),
        ("m", g.m, 1.25),
        ("l_a", g.l_a, 0.0375),
        ("l_b", g.l_b, 0.3125),
        ("p_lower", k.p_lower, 0.072727272727),
        ("p_tilde", k.p_tilde, 0.266666666667),
        ("p_hat", k.p_hat, 0.2),
        ("p_bar", k.p_bar, 0.266666666667),
        ("payoff", s.pm_payoff, 0.62625),
    ];
    for (name, got, want) in expectations {
        ck.require((got - want).abs() <= 1e-9, || {
            format!("{name} = {got}, expected {want}")
        });
    }
    ck.require(s.regime == Regime::RevealA, || {
        format!("regime = {}", s.regime)
    });
    ck.require(s.policy.sigma_a() == 1.0, || {
        format!("sigma_a = {}", s.policy.sigma_a())
    });
    ck.require((s.policy.sigma_b() - 0.892857142857).abs() <= 1e-9, || {
        format!("sigma_b = {}", s.policy.sigma_b())
    });
    ck.finish(
        "reference-point",
        started,
        None,
        "all closed forms at (0.3, 0.5, 0.1, 0.8, 0.6), tol 1e-9",
    )
}

/// One million simulated plays of the optimal reference policy land within
/// four standard errors of the exact payoff, bit-identically across 1, 2,
/// and 8 worker threads, in under ten seconds.
pub fn check_simulation_agreement() -> CheckReport {
    let started = Instant::now();
    let mut ck = Checker::new();
    let params = reference_params();
    let rule = BehaviorRule::paper(&params);
    let sigma_hat = benchmark_thresholds(&params).sigma_hat;
    let policy = SignalPolicy::new(1.0, sigma_hat).expect("accuracies in [0,1]");
    let n = 1_000_000;
    let seed = 42;

    let stats = simulate(&params, &policy, &rule, n, seed);
    ck.require((stats.pm_mean - 0.62625).abs() <= 4.0 * stats.pm_se, || {
        format!(
            "pm_mean {} is {:.2} standard errors from 0.62625",
            stats.pm_mean,
            (stats.pm_mean - 0.62625).abs() / stats.pm_se
        )
    });
    ck.require(stats.pm_se > 0.0 && stats.pm_se < 5e-3, || {
        format!("pm_se = {}", stats.pm_se)
    });

    let p = params.p();
    let se_a = (p * (1.0 - p) / n as f64).sqrt();
    ck.require((stats.fund_freq.fund_a - p).abs() <= 4.0 * se_a, || {
        format!(
            "fund_a frequency {} vs Pr(s_a=1) = {p}",
            stats.fund_freq.fund_a
        )
    });

    let mut runs = Vec::new();
    for workers in [1usize, 2, 8] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("worker pool builds");
        let run = pool.install(|| simulate(&params, &policy, &rule, n, seed));
        runs.push((workers, run));
    }
    for (workers, run) in &runs {
        ck.require(
            run.pm_mean.to_bits() == stats.pm_mean.to_bits()
                && run.pm_se.to_bits() == stats.pm_se.to_bits()
                && run.fund_freq.fund_a.to_bits() == stats.fund_freq.fund_a.to_bits()
                && run.fund_freq.fund_b.to_bits() == stats.fund_freq.fund_b.to_bits()
                && run.fund_freq.fund_none.to_bits() == stats.fund_freq.fund_none.to_bits()
                && run.investor_mean.to_bits() == stats.investor_mean.to_bits(),
            || format!("stats under {workers} workers differ from the ambient-pool run"),
        );
    }
    ck.finish(
        "simulation-agreement",
        started,
        Some(10_000),
        "1e6 plays of (1, sigma_hat) at the reference point, seed 42, 4-sigma band, \
         workers {1, 2, 8}",
    )
}

/// Effort statics on `e <= e_bar` for 50 draws: the lower cutoff falls
/// strictly, the upper cutoff falls until the reported turning point and
/// rises after it, and the crossing equation holds within 1e-9.
pub fn check_effort_statics() -> CheckReport {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let mut ck = Checker::new();
    for _ in 0..50 {
        let params = draw_params(&mut rng);
        let e_bar = benchmark_thresholds(&params).e_bar;
        // grouping keeps the last grid point at exactly e_bar
        let grid: Vec<f64> = (1..=200).map(|k| e_bar * (k as f64 / 200.0)).collect();
        let rows = sweep_e(&params, &grid).expect("grid lies inside (0, c)");
        ck.require(rows.windows(2).all(|w| w[1].p_lower < w[0].p_lower), || {
            "lower cutoff not strictly decreasing in effort".to_string()
        });
        ck.require(rows.iter().all(|r| !r.exceeds_e_bar), || {
            "restricted grid row flagged beyond e_bar".to_string()
        });

        let report = find_e_hat(&params);
        ck.require(report.e_hat <= e_bar, || {
            format!("turning point {} beyond e_bar {}", report.e_hat, e_bar)
        });
        if report.crossed {
            let k = two_project_cutoffs(
                &params
                    .with_e(report.e_hat)
                    .expect("turning point inside (0, c)"),
            );
            ck.require((k.p_tilde - k.p_hat).abs() <= 1e-9, || {
                format!("crossing residual {:e} at e_hat", k.p_tilde - k.p_hat)
            });
        }
        let before: Vec<&_> = rows.iter().filter(|r| r.e <= report.e_hat).collect();
        let after: Vec<&_> = rows.iter().filter(|r| r.e > report.e_hat).collect();
        ck.require(before.windows(2).all(|w| w[1].p_bar <= w[0].p_bar), || {
            "upper cutoff rose before the turning point".to_string()
        });
        ck.require(after.windows(2).all(|w| w[1].p_bar >= w[0].p_bar), || {
            "upper cutoff fell after the turning point".to_string()
        });
    }
    ck.finish(
        "effort-statics",
        started,
        None,
        "cutoff monotonicity and turning point on e <= e_bar, 50 draws x 200 efforts",
    )
}

/// Spillover statics for 50 draws: along an ascending mu_a grid the lower
/// cutoff strictly falls and the feasibility cutoff strictly rises; rows
/// violating the stated premise are flagged, never asserted.
pub fn check_spillover_statics() -> CheckReport {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let mut ck = Checker::new();
    for _ in 0..50 {
        let params = draw_params(&mut rng);
        let grid: Vec<f64> = (0..20)
            .map(|k| params.mu_b() + 0.05 + 0.6 * k as f64 / 19.0)
            .collect();
        let rows = mu_sweep(&params, &grid).expect("grid exceeds mu_b and ascends");
        ck.require(rows.windows(2).all(|w| w[1].p_lower < w[0].p_lower), || {
            "lower cutoff not strictly decreasing in mu_a".to_string()
        });
        ck.require(rows.windows(2).all(|w| w[1].p_tilde > w[0].p_tilde), || {
            "feasibility cutoff not strictly increasing in mu_a".to_string()
        });
    }
    ck.finish(
        "spillover-statics",
        started,
        None,
        "cutoff monotonicity along mu_a grids, 50 draws x 20 levels",
    )
}

/// The payoff gap between full transparency on A and on B equals
/// `p (mu_a - mu_b) (1 - (1-p) m)` within 1e-12 and increases strictly in
/// the prior, on a 100-point grid above the gap's stationary point
/// `p_hat / 2` (below it the closed form itself is decreasing).
pub fn check_payoff_gap_identity() -> CheckReport {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let mut ck = Checker::new();
    for _ in 0..100 {
        let params = draw_params_with_c(&mut rng, 0.3, 0.9);
        let g = marginal_gains(&params);
        let p_hat = two_project_cutoffs(&params).p_hat;
        let lo = (0.51 * p_hat).max(0.02 * params.c());
        let hi = 0.98 * params.c();
        let mut prev = f64::NEG_INFINITY;
        for k in 0..100 {
            let p = lo + (hi - lo) * k as f64 / 99.0;
            let at = params.with_p(p).expect("grid inside (0, c)");
            let gap =
                regime_payoff(&at, Regime::RevealA, 1.0) - regime_payoff(&at, Regime::RevealB, 1.0);
            let closed = p * (params.mu_a() - params.mu_b()) * (1.0 - (1.0 - p) * g.m);
            ck.require((gap - closed).abs() <= 1e-12, || {
                format!("gap identity off by {:e} at p={p}", gap - closed)
            });
            ck.require(gap > prev, || {
                format!("gap not strictly increasing at p={p}")
            });
            prev = gap;
        }
    }
    ck.finish(
        "payoff-gap-identity",
        started,
        None,
        "reveal-A minus reveal-B payoff vs closed form, 100 draws x 100 priors, tol 1e-12",
    )
}

/// The binding accuracy is nonincreasing in the prior and in the effort
/// cost over a 100 x 100 grid of valid points at the reference economy.
pub fn check_transparency_monotonicity() -> CheckReport {
    let started = Instant::now();
    let mut ck = Checker::new();
    let params = reference_params();
    let c = params.c();
    let n = 100;
    let grid: Vec<f64> = (1..=n).map(|k| c * k as f64 / (n + 1) as f64).collect();
    let sigma_hat = |p: f64, e: f64| {
        benchmark_thresholds(
            &params
                .with_p(p)
                .expect("grid inside (0, c)")
                .with_e(e)
                .expect("grid inside (0, c)"),
        )
        .sigma_hat
    };
    for &e in &grid {
        let mut prev = f64::INFINITY;
        for &p in &grid {
            let s = sigma_hat(p, e);
            ck.require(s <= prev, || {
                format!("binding accuracy rose in p at (p={p}, e={e})")
            });
            prev = s;
        }
    }
    for &p in &grid {
        let mut prev = f64::INFINITY;
        for &e in &grid {
            let s = sigma_hat(p, e);
            ck.require(s <= prev, || {
                format!("binding accuracy rose in e at (p={p}, e={e})")
            });
            prev = s;
        }
    }
    ck.finish(
        "transparency-monotonicity",
        started,
        None,
        "binding accuracy nonincreasing in p and e on a 100x100 grid",
    )
}

/// Every acceptance check, in suite order.
pub fn run_all() -> Vec<CheckReport> {
    vec![
        check_threshold_regeneration(),
        check_benchmark_branch_switch(),
        check_enumeration_matches_closed_form(),
        check_grid_oracle_agreement(),
        check_reference_point(),
        check_simulation_agreement(),
        check_effort_statics(),
        check_spillover_statics(),
        check_payoff_gap_identity(),
        check_transparency_monotonicity(),
    ]
}
