//! Game primitives: parameters, signal policies, belief updating, and the
//! investor's behavior rule.
//!
//! Two projects have i.i.d. binary returns with success probability `p`.
//! Funding either costs `c`; the sender (a policy maker) enjoys an extra
//! spillover `mu_a > mu_b > c` when a project is funded, which the investor
//! does not internalize. For each project the sender commits to a binary
//! signal that is always correct on good states (`Pr(s=1|θ=1) = 1`) and
//! reports a bad state with probability `sigma` (`Pr(s=0|θ=0) = sigma`),
//! the policy's accuracy. The investor can also learn a project's true state
//! herself at effort cost `e`, which is what the deterrence threshold guards
//! against.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::scalar::Real;

/// The economy's primitives.
///
/// Invariants enforced at construction: `0 < p < c < 1`, `mu_a > mu_b > c`,
/// and `0 < e < c`. Values are immutable afterwards; the `with_*` methods
/// revalidate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams<F> {
    p: F,
    c: F,
    e: F,
    mu_a: F,
    mu_b: F,
}

impl<F: Real> ModelParams<F> {
    /// Validates the five primitives, reporting every violated constraint.
    pub fn new(p: F, c: F, e: F, mu_a: F, mu_b: F) -> Result<Self, Error> {
        let mut violations = Vec::new();
        for (name, v) in [("p", p), ("c", c), ("e", e), ("mu_a", mu_a), ("mu_b", mu_b)] {
            if !v.is_finite() {
                violations.push(format!("{name} must be finite (got {v})"));
            }
        }
        if violations.is_empty() {
            if p <= F::zero() {
                violations.push(format!("0 < p violated (p={p})"));
            }
            if p >= c {
                violations.push(format!("p < c violated (p={p}, c={c})"));
            }
            if c >= F::one() {
                violations.push(format!("c < 1 violated (c={c})"));
            }
            if mu_a <= mu_b {
                violations.push(format!("mu_a > mu_b violated (mu_a={mu_a}, mu_b={mu_b})"));
            }
            if mu_b <= c {
                violations.push(format!("mu_b > c violated (mu_b={mu_b}, c={c})"));
            }
            if e <= F::zero() {
                violations.push(format!("0 < e violated (e={e})"));
            }
            if e >= c {
                violations.push(format!("e < c violated (e={e}, c={c})"));
            }
        }
        if violations.is_empty() {
            Ok(Self {
                p,
                c,
                e,
                mu_a,
                mu_b,
            })
        } else {
            Err(Error::InvalidParams { violations })
        }
    }

    /// Prior success probability of each project.
    pub fn p(&self) -> F {
        self.p
    }

    /// Funding cost (equals the investor's wealth).
    pub fn c(&self) -> F {
        self.c
    }

    /// Investor's per-project information-acquisition effort cost.
    pub fn e(&self) -> F {
        self.e
    }

    /// Sender's spillover surplus from funding project A.
    pub fn mu_a(&self) -> F {
        self.mu_a
    }

    /// Sender's spillover surplus from funding project B.
    pub fn mu_b(&self) -> F {
        self.mu_b
    }

    /// Same economy with a different prior.
    pub fn with_p(&self, p: F) -> Result<Self, Error> {
        Self::new(p, self.c, self.e, self.mu_a, self.mu_b)
    }

    /// Same economy with a different effort cost.
    pub fn with_e(&self, e: F) -> Result<Self, Error> {
        Self::new(self.p, self.c, e, self.mu_a, self.mu_b)
    }

    /// Same economy with a different spillover for project A.
    pub fn with_mu_a(&self, mu_a: F) -> Result<Self, Error> {
        Self::new(self.p, self.c, self.e, mu_a, self.mu_b)
    }
}

/// The sender's chosen accuracies `(sigma_a, sigma_b)`, each `Pr(s=0|θ=0)`.
///
/// Good states are always reported correctly: `Pr(s=1|θ=1)` is fixed at 1
/// for both projects (see [`SignalPolicy::sigma_good`]).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignalPolicy<F> {
    sigma_a: F,
    sigma_b: F,
}

impl<F: Real> SignalPolicy<F> {
    /// Validates that both accuracies lie in `[0, 1]`.
    pub fn new(sigma_a: F, sigma_b: F) -> Result<Self, Error> {
        for (name, v) in [("sigma_a", sigma_a), ("sigma_b", sigma_b)] {
            if !(v >= F::zero() && v <= F::one()) {
                return Err(Error::InvalidPolicy(format!(
                    "{name} must lie in [0, 1] (got {v})"
                )));
            }
        }
        Ok(Self { sigma_a, sigma_b })
    }

    /// Accuracy of project A's signal on bad states.
    pub fn sigma_a(&self) -> F {
        self.sigma_a
    }

    /// Accuracy of project B's signal on bad states.
    pub fn sigma_b(&self) -> F {
        self.sigma_b
    }

    /// `Pr(s=1|θ=1)`, fixed at exactly 1 for both projects.
    pub fn sigma_good() -> F {
        F::one()
    }
}

/// Which behavior rule generates the investor's two belief thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleMode {
    /// `q_part = 1/(2-c)`, `q_det = 1 - e/c`: regenerates the model's
    /// displayed accuracy thresholds exactly.
    Paper,
    /// `q_part = c`, `q_det = 1 - e/c`: the naive break-even participation
    /// bound, provided for exploration. Intentionally diverges from the
    /// paper rule's participation threshold.
    Textbook,
}

impl std::fmt::Display for RuleMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RuleMode::Paper => write!(f, "paper"),
            RuleMode::Textbook => write!(f, "textbook"),
        }
    }
}

/// The investor's two belief thresholds.
///
/// She funds a project only if its posterior reaches `q_part`
/// (participation) and stays away from her own information source only if
/// the funded project's posterior reaches `q_det` (deterrence). Threshold
/// comparisons allow [`Real::belief_tolerance`] slack so that accuracies
/// produced by the closed forms are feasible; indifference resolves toward
/// the sender's preferred action.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BehaviorRule<F> {
    q_part: F,
    q_det: F,
    mode: RuleMode,
}

impl<F: Real> BehaviorRule<F> {
    /// Paper-mode thresholds for the given economy.
    pub fn paper(params: &ModelParams<F>) -> Self {
        Self {
            q_part: F::one() / (F::two() - params.c()),
            q_det: F::one() - params.e() / params.c(),
            mode: RuleMode::Paper,
        }
    }

    /// Textbook-mode thresholds for the given economy.
    pub fn textbook(params: &ModelParams<F>) -> Self {
        Self {
            q_part: params.c(),
            q_det: F::one() - params.e() / params.c(),
            mode: RuleMode::Textbook,
        }
    }

    /// Thresholds for the requested mode.
    pub fn for_mode(mode: RuleMode, params: &ModelParams<F>) -> Self {
        match mode {
            RuleMode::Paper => Self::paper(params),
            RuleMode::Textbook => Self::textbook(params),
        }
    }

    /// Minimum posterior at which the investor funds.
    pub fn q_part(&self) -> F {
        self.q_part
    }

    /// Minimum posterior at which the investor refrains from acquiring her
    /// own information about the project she is about to fund.
    pub fn q_det(&self) -> F {
        self.q_det
    }

    /// The mode this rule was built from.
    pub fn mode(&self) -> RuleMode {
        self.mode
    }

    /// Does a posterior clear the participation threshold?
    pub fn clears_participation(&self, q: F) -> bool {
        q >= self.q_part - F::belief_tolerance()
    }

    /// Does a posterior clear the deterrence threshold?
    pub fn clears_deterrence(&self, q: F) -> bool {
        q >= self.q_det - F::belief_tolerance()
    }
}

/// What the investor funds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FundChoice {
    FundA,
    FundB,
    FundNone,
}

impl std::fmt::Display for FundChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FundChoice::FundA => write!(f, "fund_a"),
            FundChoice::FundB => write!(f, "fund_b"),
            FundChoice::FundNone => write!(f, "fund_none"),
        }
    }
}

/// The investor's decision at one signal realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InvestorAction {
    /// Funded project, if any.
    pub choice: FundChoice,
    /// True when the funded project's posterior weakly clears the
    /// deterrence threshold; vacuously true when nothing is funded.
    pub deterrence_ok: bool,
}

/// Posterior success probability after good news (`s = 1`).
///
/// `q = p / (p + (1-p)(1-sigma))`, nondecreasing in `sigma`, equal to the
/// prior at `sigma = 0` and to 1 at `sigma = 1`.
pub fn posterior_good<F: Real>(p: F, sigma: F) -> F {
    p / (p + (F::one() - p) * (F::one() - sigma))
}

/// Posterior success probability after bad news (`s = 0`).
///
/// Identically zero: good states never generate bad news.
pub fn posterior_bad<F: Real>() -> F {
    F::zero()
}

/// Minimal accuracy at which good news moves the posterior to `q_star`.
///
/// `sigma = 1 - (p/(1-p)) * (1-q_star)/q_star`, the inverse of
/// [`posterior_good`] in `sigma`. May be negative when the prior alone
/// nearly clears `q_star`; callers clamp where a probability is required.
pub fn sigma_from_belief_threshold<F: Real>(p: F, q_star: F) -> F {
    F::one() - (p / (F::one() - p)) * ((F::one() - q_star) / q_star)
}

/// The investor's best response to a pair of posteriors.
///
/// Among projects clearing participation she funds the strictly higher
/// posterior; all ties (including both clearing with equal posteriors)
/// resolve to project A.
pub fn investor_best_response<F: Real>(q_a: F, q_b: F, rule: &BehaviorRule<F>) -> InvestorAction {
    let a_clears = rule.clears_participation(q_a);
    let b_clears = rule.clears_participation(q_b);
    let choice = match (a_clears, b_clears) {
        (true, true) => {
            if q_b > q_a {
                FundChoice::FundB
            } else {
                FundChoice::FundA
            }
        }
        (true, false) => FundChoice::FundA,
        (false, true) => FundChoice::FundB,
        (false, false) => FundChoice::FundNone,
    };
    let deterrence_ok = match choice {
        FundChoice::FundA => rule.clears_deterrence(q_a),
        FundChoice::FundB => rule.clears_deterrence(q_b),
        FundChoice::FundNone => true,
    };
    InvestorAction {
        choice,
        deterrence_ok,
    }
}
