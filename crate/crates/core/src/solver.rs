//! Closed-form policy solver: accuracy thresholds, marginal gains, prior
//! cutoffs, and the optimal policy for the single- and two-project games.
//!
//! All quantities here are explicit formulas. Their independent brute-force
//! counterpart lives in [`crate::oracle`]; keeping both routes separate is
//! the point of the crate.

use serde::Serialize;

use crate::model::{ModelParams, SignalPolicy};
use crate::scalar::Real;

/// Minimum-accuracy thresholds of the single-project analysis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BenchmarkThresholds<F> {
    /// Participation bound: below it good news no longer persuades.
    pub sigma_lower: F,
    /// Deterrence bound: below it the investor buys her own information.
    /// Reported unclamped; may be negative for large effort costs.
    pub sigma_upper: F,
    /// The binding minimum `max(sigma_lower, sigma_upper)`.
    pub sigma_hat: F,
    /// Effort level at which the binding bound switches:
    /// `e_bar = c(1-c)/(2-c)`.
    pub e_bar: F,
}

/// Marginal value to the sender of raising each signal's accuracy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarginalGains<F> {
    /// Gain from raising project A's accuracy (slope of `u_a` up to `1-p`).
    pub l_a: F,
    /// Gain from raising project B's accuracy (slope of `u_b` up to `1-p`).
    pub l_b: F,
    /// Good-news likelihood factor `min(2-c, c/(c-e))`: at the binding
    /// accuracy, `Pr(s=1) = p * m`.
    pub m: F,
}

/// Prior cutoffs that partition the two-project game into regimes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoProjectCutoffs<F> {
    /// `l_b` turns positive here.
    pub p_lower: F,
    /// `l_a` turns positive here.
    pub p_tilde: F,
    /// Full transparency on A starts paying more than full transparency
    /// on B here: `min((1-c)/(2-c), e/c)`.
    pub p_hat: F,
    /// Upper regime cutoff `max(p_tilde, p_hat)`.
    pub p_bar: F,
}

/// The optimal policy's shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Both signals at the binding minimum accuracy.
    OpaqueBoth,
    /// Project B fully revealed, project A at the binding minimum.
    RevealB,
    /// Project A fully revealed, project B at the binding minimum.
    RevealA,
    /// Single-project economy (project B absent).
    BenchmarkSingle,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regime::OpaqueBoth => write!(f, "opaque_both"),
            Regime::RevealB => write!(f, "reveal_b"),
            Regime::RevealA => write!(f, "reveal_a"),
            Regime::BenchmarkSingle => write!(f, "benchmark_single"),
        }
    }
}

/// Closed-form solution of either game.
#[derive(Debug, Clone, Serialize)]
pub struct EquilibriumSolution<F> {
    /// Which case of the optimal-policy split applies.
    pub regime: Regime,
    /// The optimal accuracies. In the single-project solution `sigma_b` is
    /// fixed at 0 so project B never clears participation.
    pub policy: SignalPolicy<F>,
    /// Sender's expected payoff at the optimal policy.
    pub pm_payoff: F,
    /// Accuracy thresholds behind the policy.
    pub thresholds: BenchmarkThresholds<F>,
    /// Prior cutoffs; absent for the single-project solution.
    pub cutoffs: Option<TwoProjectCutoffs<F>>,
    /// Marginal gains behind the regime assignment.
    pub gains: MarginalGains<F>,
}

/// Accuracy thresholds and the binding minimum for one project.
///
/// `sigma_lower = 1 - (1-c) p/(1-p)` and `sigma_upper = 1 - (e/(c-e)) p/(1-p)`
/// are computed directly; the generic belief-threshold map in
/// [`crate::model::sigma_from_belief_threshold`] must reproduce them, which
/// the tests check as a dual route.
pub fn benchmark_thresholds<F: Real>(params: &ModelParams<F>) -> BenchmarkThresholds<F> {
    let (p, c, e) = (params.p(), params.c(), params.e());
    let odds = p / (F::one() - p);
    let sigma_lower = F::one() - (F::one() - c) * odds;
    let sigma_upper = F::one() - (e / (c - e)) * odds;
    BenchmarkThresholds {
        sigma_lower,
        sigma_upper,
        sigma_hat: sigma_lower.max(sigma_upper),
        e_bar: c * (F::one() - c) / (F::two() - c),
    }
}

/// Sender's expected payoff in the single-project economy at accuracy
/// `sigma_a`: `p + [p + (1-p)(1-sigma_a)] (mu_a - c)`.
pub fn benchmark_payoff<F: Real>(params: &ModelParams<F>, sigma_a: F) -> F {
    let (p, c, mu_a) = (params.p(), params.c(), params.mu_a());
    let pr_good_news = p + (F::one() - p) * (F::one() - sigma_a);
    p + pr_good_news * (mu_a - c)
}

/// Optimal policy of the single-project economy.
///
/// The payoff is strictly decreasing in accuracy (`mu_a > c`), so the
/// optimum sits at the binding minimum `sigma_hat`.
pub fn solve_benchmark<F: Real>(params: &ModelParams<F>) -> EquilibriumSolution<F> {
    let thresholds = benchmark_thresholds(params);
    let sigma_a = thresholds.sigma_hat;
    EquilibriumSolution {
        regime: Regime::BenchmarkSingle,
        policy: SignalPolicy::new(sigma_a, F::zero()).expect("sigma_hat lies in (0, 1]"),
        pm_payoff: benchmark_payoff(params, sigma_a),
        thresholds,
        cutoffs: None,
        gains: marginal_gains(params),
    }
}

/// Raw marginal-gain formulas, usable outside the validated domain
/// (symmetric probes, limit checks).
pub(crate) fn gains_raw<F: Real>(p: F, c: F, e: F, mu_a: F, mu_b: F) -> MarginalGains<F> {
    let m = (F::two() - c).min(c / (c - e));
    MarginalGains {
        l_a: p + p * m * (mu_b - c) - (mu_a - c),
        l_b: p + p * m * (mu_a - c) - (mu_b - c),
        m,
    }
}

/// Marginal gains from raising each signal's accuracy, with the good-news
/// factor `m = min(2-c, c/(c-e))`.
pub fn marginal_gains<F: Real>(params: &ModelParams<F>) -> MarginalGains<F> {
    gains_raw(
        params.p(),
        params.c(),
        params.e(),
        params.mu_a(),
        params.mu_b(),
    )
}

/// Sender's expected payoff for a regime's payoff family at accuracy `sigma`.
///
/// [`Regime::OpaqueBoth`] and [`Regime::RevealA`] evaluate the A-favored
/// affine form `u_a(sigma) = (p + mu_a - c) + (1-p) sigma l_a` (the free
/// accuracy is project A's); [`Regime::RevealB`] evaluates the symmetric
/// B-favored form; [`Regime::BenchmarkSingle`] evaluates
/// [`benchmark_payoff`].
pub fn regime_payoff<F: Real>(params: &ModelParams<F>, regime: Regime, sigma: F) -> F {
    let (p, c) = (params.p(), params.c());
    let gains = marginal_gains(params);
    match regime {
        Regime::BenchmarkSingle => benchmark_payoff(params, sigma),
        Regime::OpaqueBoth | Regime::RevealA => {
            (p + params.mu_a() - c) + (F::one() - p) * sigma * gains.l_a
        }
        Regime::RevealB => (p + params.mu_b() - c) + (F::one() - p) * sigma * gains.l_b,
    }
}

/// Prior cutoffs of the two-project game.
///
/// The printed cutoff formulas carry `c/(c-e)` alone, which is only valid
/// under the `e <= e_bar` restriction; the full factor
/// `m = min(2-c, c/(c-e))` is used everywhere so the cutoffs stay consistent
/// with the marginal gains for every admissible effort cost.
pub fn two_project_cutoffs<F: Real>(params: &ModelParams<F>) -> TwoProjectCutoffs<F> {
    let (c, e) = (params.c(), params.e());
    let (mu_a, mu_b) = (params.mu_a(), params.mu_b());
    let m = (F::two() - c).min(c / (c - e));
    let p_lower = (mu_b - c) / (F::one() + m * (mu_a - c));
    let p_tilde = (mu_a - c) / (F::one() + m * (mu_b - c));
    let p_hat = ((F::one() - c) / (F::two() - c)).min(e / c);
    TwoProjectCutoffs {
        p_lower,
        p_tilde,
        p_hat,
        p_bar: p_tilde.max(p_hat),
    }
}

impl<F: Real> TwoProjectCutoffs<F> {
    /// Regime for a prior, by the half-open case split: reveal-B exactly at
    /// `p = p_lower`, reveal-A exactly at `p = p_bar`.
    pub fn regime_for(&self, p: F) -> Regime {
        if p < self.p_lower {
            Regime::OpaqueBoth
        } else if p < self.p_bar {
            Regime::RevealB
        } else {
            Regime::RevealA
        }
    }

    /// Do the cutoffs respect `0 <= p_lower <= p_bar <= c`?
    ///
    /// Stated but not proved for the general parameter space; computed and
    /// reported rather than asserted.
    pub fn within_risk_domain(&self, c: F) -> bool {
        self.p_lower >= F::zero() && self.p_lower <= self.p_bar && self.p_bar <= c
    }

    /// Regimes whose prior interval has an empty intersection with the
    /// admissible domain `(0, c)`.
    pub fn unreachable_regimes(&self, c: F) -> Vec<Regime> {
        let mut out = Vec::new();
        if self.p_lower >= c {
            out.push(Regime::RevealB);
        }
        if self.p_bar >= c {
            out.push(Regime::RevealA);
        }
        out
    }
}

/// Optimal policy of the two-project economy, by the closed-form case split.
pub fn solve_two_project<F: Real>(params: &ModelParams<F>) -> EquilibriumSolution<F> {
    let thresholds = benchmark_thresholds(params);
    let cutoffs = two_project_cutoffs(params);
    let gains = marginal_gains(params);
    let sigma_hat = thresholds.sigma_hat;
    let regime = cutoffs.regime_for(params.p());
    let (policy, pm_payoff) = match regime {
        Regime::OpaqueBoth => (
            SignalPolicy::new(sigma_hat, sigma_hat),
            regime_payoff(params, regime, sigma_hat),
        ),
        Regime::RevealB => (
            SignalPolicy::new(sigma_hat, F::one()),
            regime_payoff(params, regime, F::one()),
        ),
        Regime::RevealA => (
            SignalPolicy::new(F::one(), sigma_hat),
            regime_payoff(params, regime, F::one()),
        ),
        Regime::BenchmarkSingle => unreachable!("two-project split never selects the benchmark"),
    };
    EquilibriumSolution {
        regime,
        policy: policy.expect("sigma_hat lies in (0, 1]"),
        pm_payoff,
        thresholds,
        cutoffs: Some(cutoffs),
        gains,
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::model::ModelParams;

    fn reference() -> ModelParams<f64> {
        ModelParams::new(0.3, 0.5, 0.1, 0.8, 0.6).unwrap()
    }

    const TOL: f64 = 1e-12;

    #[test]
    fn thresholds_match_hand_arithmetic() {
        let t = benchmark_thresholds(&reference());
        assert!((t.sigma_lower - 0.785714285714).abs() < 1e-11);
        assert!((t.sigma_upper - 0.892857142857).abs() < 1e-11);
        assert_eq!(t.sigma_hat, t.sigma_upper);
        assert!((t.e_bar - 1.0 / 6.0).abs() < TOL);
    }

    #[test]
    fn costly_effort_flips_the_binding_bound() {
        let t = benchmark_thresholds(&reference().with_e(0.3).unwrap());
        assert!((t.sigma_upper - 0.357142857143).abs() < 1e-11);
        assert!(t.sigma_upper < t.sigma_lower);
        assert_eq!(t.sigma_hat, t.sigma_lower);
    }

    #[test]
    fn vanishing_prior_forces_full_transparency() {
        let t = benchmark_thresholds(&reference().with_p(1e-9).unwrap());
        assert!(t.sigma_lower > 0.999999);
        assert!(t.sigma_upper > 0.999999);
    }

    #[test]
    fn benchmark_solution_low_effort() {
        let s = solve_benchmark(&reference());
        assert_eq!(s.regime, Regime::BenchmarkSingle);
        assert!((s.policy.sigma_a() - 0.892857142857).abs() < 1e-11);
        assert_eq!(s.policy.sigma_b(), 0.0);
        assert!((s.pm_payoff - 0.4125).abs() < TOL);
        assert!(s.cutoffs.is_none());
    }

    #[test]
    fn benchmark_solution_high_effort() {
        let s = solve_benchmark(&reference().with_e(0.3).unwrap());
        assert!((s.policy.sigma_a() - 0.785714285714).abs() < 1e-11);
        assert!((s.pm_payoff - 0.435).abs() < TOL);
    }

    #[test]
    fn fully_revealing_benchmark_funds_only_good_projects() {
        let params = reference();
        let w = benchmark_payoff(&params, 1.0);
        assert!((w - (0.3 + 0.3 * 0.3)).abs() < TOL);
    }

    #[test]
    fn benchmark_payoff_is_decreasing_in_accuracy() {
        let params = reference();
        let mut prev = benchmark_payoff(&params, 0.0);
        for k in 1..=20 {
            let w = benchmark_payoff(&params, k as f64 / 20.0);
            assert!(w < prev);
            prev = w;
        }
    }

    #[test]
    fn gains_match_hand_arithmetic() {
        let g = marginal_gains(&reference());
        assert!((g.m - 1.25).abs() < TOL);
        assert!((g.l_a - 0.0375).abs() < TOL);
        assert!((g.l_b - 0.3125).abs() < TOL);
    }

    #[test]
    fn symmetric_spillovers_equalize_gains() {
        // formula-level probe; equal spillovers are outside the validated domain
        let g = gains_raw::<f64>(0.3, 0.5, 0.1, 0.6, 0.6);
        assert!((g.l_a - 0.2375).abs() < TOL);
        assert_eq!(g.l_a, g.l_b);
    }

    #[test]
    fn vanishing_prior_gains_tend_to_negative_net_surplus() {
        let g = marginal_gains(&reference().with_p(1e-12).unwrap());
        assert!((g.l_a - (-0.3)).abs() < 1e-9);
        assert!((g.l_b - (-0.1)).abs() < 1e-9);
    }

    #[test]
    fn regime_payoffs_at_full_revelation() {
        let params = reference();
        assert!((regime_payoff(&params, Regime::RevealA, 1.0) - 0.62625).abs() < TOL);
        assert!((regime_payoff(&params, Regime::RevealB, 1.0) - 0.61875).abs() < TOL);
    }

    #[test]
    fn a_favored_payoff_intercept() {
        let params = reference();
        let u0 = regime_payoff(&params, Regime::RevealA, 0.0);
        assert!((u0 - (0.3 + 0.8 - 0.5)).abs() < TOL);
    }

    #[test]
    fn cutoffs_match_hand_arithmetic() {
        let k = two_project_cutoffs(&reference());
        assert!((k.p_lower - 0.072727272727).abs() < 1e-11);
        assert!((k.p_tilde - 0.266666666667).abs() < 1e-11);
        assert!((k.p_hat - 0.2).abs() < TOL);
        assert!((k.p_bar - 0.266666666667).abs() < 1e-11);
    }

    #[test]
    fn gains_vanish_exactly_at_their_cutoffs() {
        let params = reference();
        let k = two_project_cutoffs(&params);
        let at_lower = marginal_gains(&params.with_p(k.p_lower).unwrap());
        assert!(at_lower.l_b.abs() < TOL);
        let at_tilde = marginal_gains(&params.with_p(k.p_tilde).unwrap());
        assert!(at_tilde.l_a.abs() < TOL);
    }

    #[test]
    fn vanishing_effort_sends_p_hat_to_zero() {
        let k = two_project_cutoffs(&reference().with_e(1e-9).unwrap());
        assert!(k.p_hat < 1e-8);
    }

    #[test]
    fn reference_point_selects_reveal_a() {
        let s = solve_two_project(&reference());
        assert_eq!(s.regime, Regime::RevealA);
        assert_eq!(s.policy.sigma_a(), 1.0);
        assert!((s.policy.sigma_b() - 0.892857142857).abs() < 1e-11);
        assert!((s.pm_payoff - 0.62625).abs() < TOL);
    }

    #[test]
    fn low_prior_selects_opaque_both() {
        let params = reference().with_p(0.05).unwrap();
        let s = solve_two_project(&params);
        assert_eq!(s.regime, Regime::OpaqueBoth);
        let sigma_hat = benchmark_thresholds(&params).sigma_hat;
        assert_eq!(s.policy.sigma_a(), sigma_hat);
        assert_eq!(s.policy.sigma_b(), sigma_hat);
    }

    #[test]
    fn middle_prior_selects_reveal_b() {
        let s = solve_two_project(&reference().with_p(0.15).unwrap());
        assert_eq!(s.regime, Regime::RevealB);
        assert_eq!(s.policy.sigma_b(), 1.0);
    }

    #[test]
    fn boundaries_follow_the_half_open_intervals() {
        let params = reference();
        let k = two_project_cutoffs(&params);
        let at_lower = solve_two_project(&params.with_p(k.p_lower).unwrap());
        assert_eq!(at_lower.regime, Regime::RevealB);
        let at_bar = solve_two_project(&params.with_p(k.p_bar).unwrap());
        assert_eq!(at_bar.regime, Regime::RevealA);
    }

    #[test]
    fn extreme_spillover_gap_parks_reveal_a_above_the_risk_domain() {
        // p_tilde = 1.0/(1 + 1.8*0.05) ~ 0.917 > c = 0.2
        let params = ModelParams::new(0.1, 0.2, 0.1, 1.2, 0.25).unwrap();
        let k = two_project_cutoffs(&params);
        assert!(!k.within_risk_domain(params.c()));
        assert_eq!(k.unreachable_regimes(params.c()), vec![Regime::RevealA]);
        let reachable = two_project_cutoffs(&reference());
        assert!(reachable.within_risk_domain(0.5));
        assert!(reachable.unreachable_regimes(0.5).is_empty());
    }

    prop_compose! {
        fn valid_params()(
            c in 0.1f64..0.9,
            p_frac in 0.05f64..0.95,
            e_frac in 0.05f64..0.95,
            mu_b_off in 0.05f64..0.6,
            mu_a_off in 0.05f64..0.6,
        ) -> ModelParams<f64> {
            let mu_b = c + mu_b_off;
            ModelParams::new(c * p_frac, c, c * e_frac, mu_b + mu_a_off, mu_b).unwrap()
        }
    }

    proptest! {
        #[test]
        fn payoffs_are_affine_with_slope_from_gains(
            params in valid_params(),
            s0 in 0.0f64..1.0,
            s1 in 0.0f64..1.0,
        ) {
            let g = marginal_gains(&params);
            let one_minus_p = 1.0 - params.p();
            let du_a = regime_payoff(&params, Regime::RevealA, s1)
                - regime_payoff(&params, Regime::RevealA, s0);
            prop_assert!((du_a - one_minus_p * (s1 - s0) * g.l_a).abs() < 1e-12);
            let du_b = regime_payoff(&params, Regime::RevealB, s1)
                - regime_payoff(&params, Regime::RevealB, s0);
            prop_assert!((du_b - one_minus_p * (s1 - s0) * g.l_b).abs() < 1e-12);
        }

        #[test]
        fn gains_are_ordered_and_cutoffs_consistent(params in valid_params()) {
            let g = marginal_gains(&params);
            prop_assert!(g.l_a < g.l_b);
            let e_bar = benchmark_thresholds(&params).e_bar;
            let c_factor = params.c() / (params.c() - params.e());
            if params.e() <= e_bar {
                prop_assert!((g.m - c_factor).abs() < 1e-12);
            } else {
                prop_assert!((g.m - (2.0 - params.c())).abs() < 1e-12);
            }
        }

        #[test]
        fn cutoffs_are_ordered(params in valid_params()) {
            let k = two_project_cutoffs(&params);
            prop_assert!(k.p_lower < k.p_tilde);
            prop_assert!(k.p_bar >= k.p_tilde);
        }

        #[test]
        fn gain_sign_changes_agree_with_cutoffs_by_bisection(params in valid_params()) {
            let k = two_project_cutoffs(&params);
            // l_b is linear and increasing in p with root p_lower; bisect on
            // a wide bracket of the p axis (formula level, beyond c).
            for (root, pick) in [
                (k.p_lower, true),
                (k.p_tilde, false),
            ] {
                let f = |p: f64| {
                    let g = gains_raw(p, params.c(), params.e(), params.mu_a(), params.mu_b());
                    if pick { g.l_b } else { g.l_a }
                };
                let (mut lo, mut hi) = (0.0, 4.0);
                prop_assert!(f(lo) < 0.0 && f(hi) > 0.0);
                for _ in 0..100 {
                    let mid = 0.5 * (lo + hi);
                    if f(mid) < 0.0 { lo = mid } else { hi = mid }
                }
                prop_assert!((0.5 * (lo + hi) - root).abs() < 1e-10);
            }
        }

        #[test]
        fn binding_bound_switches_at_e_bar(params in valid_params()) {
            let e_bar = benchmark_thresholds(&params).e_bar;
            let at_bar = benchmark_thresholds(&params.with_e(e_bar).unwrap());
            prop_assert!((at_bar.sigma_upper - at_bar.sigma_lower).abs() < 1e-12);
            let below = benchmark_thresholds(&params.with_e(e_bar * 0.9).unwrap());
            prop_assert_eq!(below.sigma_hat, below.sigma_upper);
            let above = benchmark_thresholds(
                &params.with_e(e_bar + 0.1 * (params.c() - e_bar)).unwrap(),
            );
            prop_assert_eq!(above.sigma_hat, above.sigma_lower);
        }

        #[test]
        fn payoff_gap_identity_holds(params in valid_params()) {
            let g = marginal_gains(&params);
            let p = params.p();
            let gap = regime_payoff(&params, Regime::RevealA, 1.0)
                - regime_payoff(&params, Regime::RevealB, 1.0);
            let closed = p * (params.mu_a() - params.mu_b()) * (1.0 - (1.0 - p) * g.m);
            prop_assert!((gap - closed).abs() < 1e-12);
        }
    }

    #[test]
    fn binding_accuracy_is_monotone_in_prior_and_effort() {
        let params = reference();
        let n = 100;
        let grid: Vec<f64> = (1..=n).map(|k| 0.5 * k as f64 / (n + 1) as f64).collect();
        for &e in &grid {
            let mut prev = f64::INFINITY;
            for &p in &grid {
                let t = benchmark_thresholds(&params.with_p(p).unwrap().with_e(e).unwrap());
                assert!(t.sigma_hat <= prev);
                prev = t.sigma_hat;
            }
        }
        for &p in &grid {
            let mut prev = f64::INFINITY;
            for &e in &grid {
                let t = benchmark_thresholds(&params.with_p(p).unwrap().with_e(e).unwrap());
                assert!(t.sigma_hat <= prev);
                prev = t.sigma_hat;
            }
        }
    }
}
