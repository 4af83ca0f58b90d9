//! Comparative statics and region cartography: threshold sweeps in the
//! effort cost and in project A's spillover, the effort level where the
//! upper cutoff turns around, and `(p, e)`-plane regime maps with optional
//! grid-oracle cross-checks.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::model::{BehaviorRule, ModelParams};
use crate::numfmt::fmt_g;
use crate::oracle::{oracle_solve, BOUNDARY_BAND};
use crate::scalar::Real;
use crate::solver::{benchmark_thresholds, two_project_cutoffs, Regime};

/// Bisection stops when the bracket is at most this wide.
const E_HAT_INTERVAL: f64 = 1e-12;

/// Bisection iteration cap.
const E_HAT_MAX_ITER: usize = 200;

/// Thresholds and cutoffs at one effort level (all other primitives fixed).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepRow<F> {
    pub e: F,
    pub sigma_lower: F,
    pub sigma_upper: F,
    pub sigma_hat: F,
    /// True when this row's effort exceeds `e_bar`, outside the restriction
    /// under which the effort statics are stated.
    pub exceeds_e_bar: bool,
    pub p_lower: F,
    pub p_tilde: F,
    pub p_hat: F,
    pub p_bar: F,
}

/// Where the upper cutoff `p_bar` switches from falling to rising in `e`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EHatReport<F> {
    /// The turning point. Equals `e_bar` when the two cutoff branches never
    /// cross on `(0, e_bar]`.
    pub e_hat: F,
    /// True when an interior crossing of `p_tilde` and `p_hat` was found.
    pub crossed: bool,
    /// `e_bar` for the swept economy.
    pub e_bar: F,
}

/// Cutoffs at one spillover level for project A (prior-free).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MuSweepRow<F> {
    pub mu_a: F,
    pub p_lower: F,
    pub p_tilde: F,
    pub p_hat: F,
    pub p_bar: F,
    /// True when `p_tilde <= p_hat`, outside the premise under which the
    /// spillover statics are stated. Flagged, never asserted.
    pub premise_violated: bool,
}

/// One `(p, e)` cell of a regime map.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RegionCell<F> {
    pub p: F,
    pub e: F,
    pub regime_closed: Regime,
    pub regime_oracle: Option<Regime>,
    /// True when `p` lies within [`BOUNDARY_BAND`] of a cutoff, where grid
    /// and closed form may legitimately disagree.
    pub boundary_flag: bool,
}

fn check_open_interval<F: Real>(name: &str, grid: &[F], hi: F) -> Result<(), Error> {
    if grid.is_empty() {
        return Err(Error::invalid_grid(format!("{name} grid is empty")));
    }
    for &v in grid {
        if !(v > F::zero() && v < hi) {
            return Err(Error::invalid_grid(format!(
                "{name} grid value {v} lies outside (0, {hi})"
            )));
        }
    }
    Ok(())
}

fn check_strictly_ascending<F: Real>(name: &str, grid: &[F]) -> Result<(), Error> {
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid_grid(format!(
            "{name} grid must be strictly ascending"
        )));
    }
    Ok(())
}

/// Thresholds and cutoffs along an ascending effort grid in `(0, c)`.
///
/// `params.e()` is ignored; every row revalidates with its own effort.
/// Rows with `e > e_bar` carry the out-of-restriction marker.
pub fn sweep_e<F: Real>(params: &ModelParams<F>, e_grid: &[F]) -> Result<Vec<SweepRow<F>>, Error> {
    check_open_interval("e", e_grid, params.c())?;
    check_strictly_ascending("e", e_grid)?;
    e_grid
        .iter()
        .map(|&e| {
            let at = params.with_e(e)?;
            let t = benchmark_thresholds(&at);
            let k = two_project_cutoffs(&at);
            Ok(SweepRow {
                e,
                sigma_lower: t.sigma_lower,
                sigma_upper: t.sigma_upper,
                sigma_hat: t.sigma_hat,
                exceeds_e_bar: e > t.e_bar,
                p_lower: k.p_lower,
                p_tilde: k.p_tilde,
                p_hat: k.p_hat,
                p_bar: k.p_bar,
            })
        })
        .collect()
}

/// Finds the effort level where `p_tilde` and `p_hat` cross on `(0, e_bar]`.
///
/// `p_tilde` falls and `p_hat` rises there, so `g(e) = p_tilde - p_hat`
/// crosses zero at most once; bisection runs from `1e-9 * c` (clear of the
/// removable singularity at zero effort) down to a bracket of
/// [`E_HAT_INTERVAL`]. Without a sign change the report carries `e_bar`
/// itself. `params.p()` and `params.e()` are irrelevant to the result.
pub fn find_e_hat<F: Real>(params: &ModelParams<F>) -> EHatReport<F> {
    let c = params.c();
    let e_bar = c * (F::one() - c) / (F::two() - c);
    let g = |e: F| {
        let k = two_project_cutoffs(&params.with_e(e).expect("effort inside (0, c)"));
        k.p_tilde - k.p_hat
    };
    let mut lo = F::of(1e-9) * c;
    let mut hi = e_bar;
    if g(hi) > F::zero() || g(lo) <= F::zero() {
        return EHatReport {
            e_hat: e_bar,
            crossed: false,
            e_bar,
        };
    }
    let width = F::of(E_HAT_INTERVAL);
    for _ in 0..E_HAT_MAX_ITER {
        if hi - lo <= width {
            break;
        }
        let mid = (lo + hi) / F::two();
        if g(mid) > F::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    EHatReport {
        e_hat: (lo + hi) / F::two(),
        crossed: true,
        e_bar,
    }
}

/// Cutoff table along an ascending spillover grid, each value above `mu_b`.
///
/// The cutoffs are prior-free, so `params.p()` plays no role;
/// `params.mu_a()` is ignored and replaced per row.
pub fn mu_sweep<F: Real>(
    params: &ModelParams<F>,
    mu_a_grid: &[F],
) -> Result<Vec<MuSweepRow<F>>, Error> {
    if mu_a_grid.is_empty() {
        return Err(Error::invalid_grid("mu_a grid is empty"));
    }
    for &v in mu_a_grid {
        if v <= params.mu_b() {
            return Err(Error::invalid_grid(format!(
                "mu_a grid value {v} must exceed mu_b = {}",
                params.mu_b()
            )));
        }
    }
    check_strictly_ascending("mu_a", mu_a_grid)?;
    mu_a_grid
        .iter()
        .map(|&mu_a| {
            let k = two_project_cutoffs(&params.with_mu_a(mu_a)?);
            Ok(MuSweepRow {
                mu_a,
                p_lower: k.p_lower,
                p_tilde: k.p_tilde,
                p_hat: k.p_hat,
                p_bar: k.p_bar,
                premise_violated: k.p_tilde <= k.p_hat,
            })
        })
        .collect()
}

/// Regime of every `(p, e)` cell, ordered `p`-major by grid index.
///
/// With `oracle_check` the grid oracle's regime is recorded per cell;
/// disagreements outside boundary bands are surfaced by
/// [`unexpected_mismatches`].
pub fn region_map<F: Real>(
    params: &ModelParams<F>,
    p_grid: &[F],
    e_grid: &[F],
    oracle_check: bool,
    grid_n: usize,
) -> Result<Vec<RegionCell<F>>, Error> {
    check_open_interval("p", p_grid, params.c())?;
    check_open_interval("e", e_grid, params.c())?;
    let band = F::of(BOUNDARY_BAND);
    let pairs: Vec<(F, F)> = p_grid
        .iter()
        .flat_map(|&p| e_grid.iter().map(move |&e| (p, e)))
        .collect();
    // indexed parallel map keeps cells in grid order
    pairs
        .par_iter()
        .map(|&(p, e)| {
            let at = params.with_p(p)?.with_e(e)?;
            let k = two_project_cutoffs(&at);
            let regime_oracle = if oracle_check {
                let rule = BehaviorRule::paper(&at);
                oracle_solve(&at, &rule, grid_n, false)?.regime_guess
            } else {
                None
            };
            Ok(RegionCell {
                p,
                e,
                regime_closed: k.regime_for(p),
                regime_oracle,
                boundary_flag: (p - k.p_lower).abs() < band || (p - k.p_bar).abs() < band,
            })
        })
        .collect::<Vec<Result<RegionCell<F>, Error>>>()
        .into_iter()
        .collect()
}

/// Cells whose oracle regime disagrees with the closed form away from any
/// cutoff boundary. Cells where the oracle could not infer a regime (grid
/// too coarse to resolve one) are not counted.
pub fn unexpected_mismatches<F: Real>(cells: &[RegionCell<F>]) -> Vec<&RegionCell<F>> {
    cells
        .iter()
        .filter(|cell| {
            !cell.boundary_flag
                && cell
                    .regime_oracle
                    .map(|r| r != cell.regime_closed)
                    .unwrap_or(false)
        })
        .collect()
}

/// Writes an effort sweep as CSV with the pinned column order.
pub fn write_sweep_csv<F: Real, W: Write>(w: &mut W, rows: &[SweepRow<F>]) -> io::Result<()> {
    writeln!(
        w,
        "e,sigma_lower,sigma_upper,sigma_hat,e_bar_flag,p_lower,p_tilde,p_hat,p_bar"
    )?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            fmt_g(r.e),
            fmt_g(r.sigma_lower),
            fmt_g(r.sigma_upper),
            fmt_g(r.sigma_hat),
            r.exceeds_e_bar,
            fmt_g(r.p_lower),
            fmt_g(r.p_tilde),
            fmt_g(r.p_hat),
            fmt_g(r.p_bar)
        )?;
    }
    Ok(())
}

/// Writes a region map as CSV; the oracle column is empty when unchecked.
pub fn write_region_csv<F: Real, W: Write>(w: &mut W, cells: &[RegionCell<F>]) -> io::Result<()> {
    writeln!(w, "p,e,regime_closed,regime_oracle,boundary_flag")?;
    for cell in cells {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt_g(cell.p),
            fmt_g(cell.e),
            cell.regime_closed,
            cell.regime_oracle
                .map(|r| r.to_string())
                .unwrap_or_default(),
            cell.boundary_flag
        )?;
    }
    Ok(())
}
