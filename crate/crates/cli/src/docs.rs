//! Emitted JSON documents. Every float passes through the shared
//! 12-significant-digit rounding so identical inputs produce byte-identical
//! artifacts; field order is fixed by the struct definitions.

use persuasion_core::numfmt::round_emit;
use persuasion_core::oracle::{ComparisonReport, OracleResult};
use persuasion_core::solver::Regime;
use persuasion_core::{Cutoffs, Gains, Policy, Solution, Stats, Thresholds};

use serde::Serialize;

use crate::config::RunConfig;

/// The run configuration echoed into every document; re-ingesting a
/// document as a config file reads exactly this object.
#[derive(Debug, Serialize)]
pub struct ConfigEcho {
    pub p: f64,
    pub c: f64,
    pub e: f64,
    pub mu_a: f64,
    pub mu_b: f64,
    pub mode: String,
    pub grid: usize,
    pub samples: u64,
    pub seed: u64,
}

impl ConfigEcho {
    pub fn from_run(run: &RunConfig) -> Self {
        Self {
            p: round_emit(run.params.p()),
            c: round_emit(run.params.c()),
            e: round_emit(run.params.e()),
            mu_a: round_emit(run.params.mu_a()),
            mu_b: round_emit(run.params.mu_b()),
            mode: run.mode.to_string(),
            grid: run.grid,
            samples: run.samples,
            seed: run.seed,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PolicyDoc {
    pub sigma_a: f64,
    pub sigma_b: f64,
}

impl PolicyDoc {
    fn new(policy: &Policy) -> Self {
        Self {
            sigma_a: round_emit(policy.sigma_a()),
            sigma_b: round_emit(policy.sigma_b()),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ThresholdsDoc {
    pub sigma_lower: f64,
    pub sigma_upper: f64,
    pub sigma_hat: f64,
    pub e_bar: f64,
}

impl ThresholdsDoc {
    fn new(t: &Thresholds) -> Self {
        Self {
            sigma_lower: round_emit(t.sigma_lower),
            sigma_upper: round_emit(t.sigma_upper),
            sigma_hat: round_emit(t.sigma_hat),
            e_bar: round_emit(t.e_bar),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct GainsDoc {
    pub l_a: f64,
    pub l_b: f64,
    pub m: f64,
}

impl GainsDoc {
    fn new(g: &Gains) -> Self {
        Self {
            l_a: round_emit(g.l_a),
            l_b: round_emit(g.l_b),
            m: round_emit(g.m),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CutoffsDoc {
    pub p_lower: f64,
    pub p_tilde: f64,
    pub p_hat: f64,
    pub p_bar: f64,
}

impl CutoffsDoc {
    fn new(k: &Cutoffs) -> Self {
        Self {
            p_lower: round_emit(k.p_lower),
            p_tilde: round_emit(k.p_tilde),
            p_hat: round_emit(k.p_hat),
            p_bar: round_emit(k.p_bar),
        }
    }
}

/// Document for `solve` and `benchmark`.
#[derive(Debug, Serialize)]
pub struct SolveDoc {
    pub config: ConfigEcho,
    pub regime: String,
    pub policy: PolicyDoc,
    pub pm_payoff: f64,
    pub thresholds: ThresholdsDoc,
    pub gains: GainsDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoffs: Option<CutoffsDoc>,
    pub warnings: Vec<String>,
}

impl SolveDoc {
    pub fn new(run: &RunConfig, solution: &Solution) -> Self {
        let mut warnings = Vec::new();
        if let Some(cutoffs) = &solution.cutoffs {
            if !cutoffs.within_risk_domain(run.params.c()) {
                warnings
                    .push("cutoff ordering 0 <= p_lower <= p_bar <= c does not hold".to_string());
            }
            for regime in cutoffs.unreachable_regimes(run.params.c()) {
                warnings.push(format!(
                    "{regime} prior interval does not intersect the admissible domain (0, c)"
                ));
            }
        }
        Self {
            config: ConfigEcho::from_run(run),
            regime: solution.regime.to_string(),
            policy: PolicyDoc::new(&solution.policy),
            pm_payoff: round_emit(solution.pm_payoff),
            thresholds: ThresholdsDoc::new(&solution.thresholds),
            gains: GainsDoc::new(&solution.gains),
            cutoffs: solution.cutoffs.as_ref().map(CutoffsDoc::new),
            warnings,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct OracleSideDoc {
    pub best_policy: PolicyDoc,
    pub best_payoff: f64,
    pub feasible_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regime: Option<String>,
    pub regime_resolvable: bool,
    pub strict_mismatch_count: usize,
}

#[derive(Debug, Serialize)]
pub struct ComparisonDoc {
    pub payoff_gap: f64,
    pub boundary_flag: bool,
    pub grid_resolves_regimes: bool,
    pub regimes_match: bool,
}

/// Document for `oracle`.
#[derive(Debug, Serialize)]
pub struct OracleDoc {
    pub config: ConfigEcho,
    pub closed_regime: String,
    pub closed_policy: PolicyDoc,
    pub closed_payoff: f64,
    pub oracle: OracleSideDoc,
    pub comparison: ComparisonDoc,
}

impl OracleDoc {
    pub fn new(
        run: &RunConfig,
        solution: &Solution,
        oracle: &OracleResult<f64>,
        report: &ComparisonReport<f64>,
    ) -> Self {
        Self {
            config: ConfigEcho::from_run(run),
            closed_regime: report.closed_regime.to_string(),
            closed_policy: PolicyDoc::new(&solution.policy),
            closed_payoff: round_emit(report.closed_payoff),
            oracle: OracleSideDoc {
                best_policy: PolicyDoc::new(&oracle.best_policy),
                best_payoff: round_emit(oracle.best_payoff),
                feasible_count: oracle.feasible_count,
                regime: oracle.regime_guess.as_ref().map(Regime::to_string),
                regime_resolvable: oracle.regime_resolvable,
                strict_mismatch_count: oracle.strict_mismatch_count,
            },
            comparison: ComparisonDoc {
                payoff_gap: round_emit(report.payoff_gap),
                boundary_flag: report.boundary_flag,
                grid_resolves_regimes: report.grid_resolves_regimes,
                regimes_match: report.regimes_match,
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FundFreqDoc {
    pub fund_a: f64,
    pub fund_b: f64,
    pub fund_none: f64,
}

#[derive(Debug, Serialize)]
pub struct StatsDoc {
    pub n: u64,
    pub pm_mean: f64,
    pub pm_se: f64,
    pub fund_freq: FundFreqDoc,
    pub investor_mean: f64,
    pub seed: u64,
    pub degenerate_sample: bool,
}

/// Document for `simulate`.
#[derive(Debug, Serialize)]
pub struct SimulateDoc {
    pub config: ConfigEcho,
    pub policy: PolicyDoc,
    /// Exact expected payoff of the simulated policy by enumeration.
    pub exact_payoff: f64,
    pub stats: StatsDoc,
}

impl SimulateDoc {
    pub fn new(run: &RunConfig, policy: &Policy, exact_payoff: f64, stats: &Stats) -> Self {
        Self {
            config: ConfigEcho::from_run(run),
            policy: PolicyDoc::new(policy),
            exact_payoff: round_emit(exact_payoff),
            stats: StatsDoc {
                n: stats.n,
                pm_mean: round_emit(stats.pm_mean),
                pm_se: round_emit(stats.pm_se),
                fund_freq: FundFreqDoc {
                    fund_a: round_emit(stats.fund_freq.fund_a),
                    fund_b: round_emit(stats.fund_freq.fund_b),
                    fund_none: round_emit(stats.fund_freq.fund_none),
                },
                investor_mean: round_emit(stats.investor_mean),
                seed: stats.seed,
                degenerate_sample: stats.degenerate_sample,
            },
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("documents serialize");
    text.push('\n');
    text
}
