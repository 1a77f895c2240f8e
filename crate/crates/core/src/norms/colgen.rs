//! Column generation for `inf Σ|aₖ|` over `Σ aₖ col(pₖ) = t`, `pₖ ∈ G`.
//!
//! Each round solves the restricted LP over the current points, then asks
//! the generator set for points maximizing `|y·col(p)|`. The dual `y` scaled
//! by that maximum is feasible for the full problem, so
//! `t·y / max_p |y·col(p)|` is a lower bound at every round.

use crate::error::{Error, Result};
use crate::lp::{solve_min_tv_with, LpOptions, LpStatus};

pub(crate) trait GeneratorSet: Sync {
    type Point: Clone + Send + Sync;

    fn column(&self, p: &Self::Point) -> Vec<f64>;

    fn seeds(&self) -> Vec<Self::Point>;

    /// Candidate maximizers of `|y·col(p)|`, sorted by decreasing value.
    fn price(&self, y: &[f64], limit: usize) -> Vec<(f64, Self::Point)>;

    fn distance(&self, a: &Self::Point, b: &Self::Point) -> f64;

    /// Points closer than this are merged in the final clean-up solve; zero
    /// disables the clean-up.
    fn merge_radius(&self) -> f64 {
        0.0
    }
}

#[derive(Debug, Clone)]
pub(crate) struct ColGenOptions {
    pub tol: f64,
    pub max_rounds: usize,
    pub columns_per_round: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct ColGenResult<P> {
    /// Points carrying non-zero weight in the final LP.
    pub atoms: Vec<(f64, P)>,
    pub lower: f64,
    pub upper: f64,
    /// Dual vector of the round that produced `lower`, already scaled to be
    /// feasible.
    pub dual: Vec<f64>,
    pub rounds: usize,
    pub converged: bool,
    pub max_violation: f64,
}

pub(crate) fn run<G: GeneratorSet>(gens: &G, target: &[f64], opts: &ColGenOptions) -> Result<ColGenResult<G::Point>> {
    let mut points = gens.seeds();
    let n_seeds = points.len();
    let mut columns: Vec<Vec<f64>> = points.iter().map(|p| gens.column(p)).collect();
    let lp_opts = LpOptions::default();
    let mut best_lower = f64::NEG_INFINITY;
    let mut best_dual = vec![0.0; target.len()];
    let mut last = None;
    let mut converged = false;
    let mut rounds = 0;
    let mut max_violation = f64::INFINITY;

    while rounds < opts.max_rounds.max(1) {
        rounds += 1;
        let sol = solve_min_tv_with(&columns, target, &lp_opts)?;
        match sol.status {
            LpStatus::Optimal => {}
            LpStatus::Infeasible => {
                return Err(Error::Unsupported(
                    "seed columns do not span the target".into(),
                ))
            }
            LpStatus::IterationLimit if last.is_none() => {
                return Err(Error::Unsupported("restricted LP hit its iteration limit".into()))
            }
            LpStatus::IterationLimit => break,
        }
        let y = sol.dual.clone();
        let ty: f64 = target.iter().zip(&y).map(|(a, b)| a * b).sum();
        let candidates = gens.price(&y, opts.columns_per_round);
        let on_columns = columns
            .iter()
            .map(|c| c.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>().abs())
            .fold(0.0, f64::max);
        let priced = candidates.first().map_or(0.0, |c| c.0);
        let scale = priced.max(on_columns);
        max_violation = scale;
        if scale > 0.0 {
            let lower = ty / scale;
            if lower > best_lower {
                best_lower = lower;
                best_dual = y.iter().map(|v| v / scale).collect();
            }
        }
        let gap_closed = sol.objective - best_lower <= opts.tol * sol.objective.abs().max(1.0);
        last = Some(sol);
        if priced <= 1.0 + opts.tol || gap_closed {
            converged = true;
            break;
        }
        let mut added = 0;
        for (val, p) in candidates {
            if val <= 1.0 + opts.tol {
                break;
            }
            if points.iter().any(|q| gens.distance(q, &p) < 1e-12) {
                continue;
            }
            columns.push(gens.column(&p));
            points.push(p);
            added += 1;
        }
        if added == 0 {
            // the oracle only re-found existing columns: numerically stalled
            break;
        }
    }

    let sol = last.expect("at least one LP solve");
    let mut atoms: Vec<(f64, G::Point)> = sol
        .weights
        .iter()
        .zip(&points)
        .filter(|(w, _)| **w != 0.0)
        .map(|(w, p)| (*w, p.clone()))
        .collect();
    let mut upper = sol.objective;
    let radius = gens.merge_radius();
    if radius > 0.0 {
        if let Some((obj, cleaned)) = clean_up(gens, target, &sol.dual, &atoms, &points[..n_seeds], radius, &lp_opts) {
            let scale = target.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            if obj <= upper || residual(&columns, &sol.weights, target) > 1e-12 * scale {
                upper = obj;
                atoms = cleaned;
            }
        }
    }
    Ok(ColGenResult {
        atoms,
        lower: best_lower.max(0.0),
        upper,
        dual: best_dual,
        rounds,
        converged,
        max_violation,
    })
}

/// Re-solves over near-active points of the final dual, the current support
/// and the seeds, dropping any point within `radius` of one already taken.
/// Returns the objective and atoms when the solution reproduces the target.
fn clean_up<G: GeneratorSet>(
    gens: &G,
    target: &[f64],
    dual: &[f64],
    atoms: &[(f64, G::Point)],
    seeds: &[G::Point],
    radius: f64,
    lp_opts: &LpOptions,
) -> Option<(f64, Vec<(f64, G::Point)>)> {
    let mut pool: Vec<G::Point> = Vec::new();
    let peak = gens.price(dual, 1).first().map_or(0.0, |c| c.0);
    let near_active = gens
        .price(dual, 4 * target.len())
        .into_iter()
        .filter(|(v, _)| *v >= peak * (1.0 - 1e-6))
        .map(|(_, p)| p);
    let mut by_weight: Vec<&(f64, G::Point)> = atoms.iter().collect();
    by_weight.sort_by(|a, b| b.0.abs().total_cmp(&a.0.abs()));
    for p in by_weight
        .into_iter()
        .map(|(_, p)| p.clone())
        .chain(near_active)
        .chain(seeds.iter().cloned())
    {
        if pool.iter().all(|q| gens.distance(q, &p) >= radius) {
            pool.push(p);
        }
    }
    let columns: Vec<Vec<f64>> = pool.iter().map(|p| gens.column(p)).collect();
    let sol = solve_min_tv_with(&columns, target, lp_opts).ok()?;
    if sol.status != LpStatus::Optimal {
        return None;
    }
    let scale = target.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    if residual(&columns, &sol.weights, target) > 1e-12 * scale {
        return None;
    }
    let cleaned = sol
        .weights
        .iter()
        .zip(pool)
        .filter(|(w, _)| **w != 0.0)
        .map(|(w, p)| (*w, p))
        .collect();
    Some((sol.objective, cleaned))
}

fn residual(columns: &[Vec<f64>], weights: &[f64], target: &[f64]) -> f64 {
    (0..target.len())
        .map(|i| {
            let got: f64 = columns.iter().zip(weights).map(|(c, w)| c[i] * w).sum();
            (got - target[i]).abs()
        })
        .fold(0.0, f64::max)
}
