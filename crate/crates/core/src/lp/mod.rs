//! Minimum total variation over a finite column set.
//!
//! [`solve_min_tv`] solves
//!
//! ```text
//! minimize Σ|aₖ|  subject to  Σ aₖ vₖ = t
//! ```
//!
//! through the split `aₖ = aₖ⁺ − aₖ⁻` and a two-phase dense revised
//! simplex. The dual of this program is `max t·y` subject to `|vₖ·y| ≤ 1`,
//! so the returned `dual` certifies the objective. When the target is not
//! in the span of the columns the phase-one dual is returned as a Farkas
//! certificate: `t·y > 0` while `vₖ·y = 0` for every column.

mod simplex;

use crate::error::{check_dim, invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    IterationLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpOptions {
    pub feasibility_tol: f64,
    pub optimality_tol: f64,
    pub max_iterations: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions {
            feasibility_tol: 1e-9,
            optimality_tol: 1e-9,
            max_iterations: 50_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    /// One weight per input column, zero off the final basis.
    pub weights: Vec<f64>,
    pub objective: f64,
    pub dual: Vec<f64>,
    pub status: LpStatus,
    pub iterations: usize,
}

impl LpSolution {
    /// Indices and weights of the non-zero entries.
    pub fn support(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.weights
            .iter()
            .copied()
            .enumerate()
            .filter(|(_, w)| *w != 0.0)
    }
}

/// Solves with default tolerances, using `tol` for the reduced-cost test.
pub fn solve_min_tv(columns: &[Vec<f64>], target: &[f64], tol: f64) -> Result<LpSolution> {
    let opts = LpOptions {
        optimality_tol: tol.min(1e-9),
        ..LpOptions::default()
    };
    solve_min_tv_with(columns, target, &opts)
}

pub fn solve_min_tv_with(columns: &[Vec<f64>], target: &[f64], opts: &LpOptions) -> Result<LpSolution> {
    if columns.is_empty() {
        return Err(invalid("LP needs at least one column"));
    }
    let d = target.len();
    if d == 0 {
        return Err(invalid("LP target must be non-empty"));
    }
    for c in columns {
        check_dim(d, c.len())?;
    }
    if target.iter().chain(columns.iter().flatten()).any(|v| !v.is_finite()) {
        return Err(invalid("LP data must be finite"));
    }

    // equilibrate rows so every row has max-modulus entry 1
    let row_scale: Vec<f64> = (0..d)
        .map(|i| {
            let m = columns.iter().fold(0.0f64, |m, c| m.max(c[i].abs()));
            if m > 0.0 {
                1.0 / m
            } else {
                1.0
            }
        })
        .collect();
    let scaled: Vec<Vec<f64>> = columns
        .iter()
        .map(|c| c.iter().zip(&row_scale).map(|(v, r)| v * r).collect())
        .collect();
    let rhs: Vec<f64> = target.iter().zip(&row_scale).map(|(v, r)| v * r).collect();

    let out = simplex::Simplex::new(&scaled, rhs, opts).solve();
    let weights: Vec<f64> = (0..columns.len())
        .map(|k| out.split[2 * k] - out.split[2 * k + 1])
        .collect();
    let objective = weights.iter().map(|w| w.abs()).sum();
    let dual = out.dual.iter().zip(&row_scale).map(|(y, r)| y * r).collect();
    Ok(LpSolution {
        weights,
        objective,
        dual,
        status: out.status,
        iterations: out.iterations,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub residual: f64,
    pub residual_ok: bool,
    /// `max_k |vₖ·y| − 1`, positive when the dual is infeasible.
    pub dual_violation: f64,
    pub dual_ok: bool,
    pub gap: f64,
    pub gap_ok: bool,
    /// Largest `| |vₖ·y| − 1 |` over columns carrying weight.
    pub slackness_violation: f64,
    pub slackness_ok: bool,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.residual_ok && self.dual_ok && self.gap_ok && self.slackness_ok
    }
}

/// Recomputes the primal residual, dual feasibility, duality gap and
/// complementary slackness of `sol` from scratch.
pub fn verify_solution(columns: &[Vec<f64>], target: &[f64], sol: &LpSolution, tol: f64) -> VerificationReport {
    let d = target.len();
    let mut recon = vec![0.0; d];
    for (c, w) in columns.iter().zip(&sol.weights) {
        for (r, v) in recon.iter_mut().zip(c) {
            *r += w * v;
        }
    }
    let residual = recon
        .iter()
        .zip(target)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let dots: Vec<f64> = columns
        .iter()
        .map(|c| c.iter().zip(&sol.dual).map(|(a, b)| a * b).sum::<f64>())
        .collect();
    let dual_violation = dots.iter().fold(f64::NEG_INFINITY, |m, v| m.max(v.abs())) - 1.0;
    let objective: f64 = sol.weights.iter().map(|w| w.abs()).sum();
    let ty: f64 = target.iter().zip(&sol.dual).map(|(a, b)| a * b).sum();
    let gap = (objective - ty).abs();
    let slackness_violation = sol
        .weights
        .iter()
        .zip(&dots)
        .filter(|(w, _)| w.abs() > tol)
        .map(|(_, v)| (v.abs() - 1.0).abs())
        .fold(0.0, f64::max);
    VerificationReport {
        residual,
        residual_ok: residual <= tol,
        dual_violation,
        dual_ok: dual_violation <= tol,
        gap,
        gap_ok: gap <= tol,
        slackness_violation,
        slackness_ok: slackness_violation <= tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kappa2_instance() -> (Vec<Vec<f64>>, Vec<f64>) {
        // (1,0)^⊗2, (0,1)^⊗2, (½,½)^⊗2 stored over multisets (00, 01, 11)
        let cols = vec![vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0], vec![0.25, 0.25, 0.25]];
        (cols, vec![0.0, 0.5, 0.0])
    }

    #[test]
    fn picks_the_diagonal_column() {
        let cols = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
        let sol = solve_min_tv(&cols, &[1.0, 1.0], 1e-9).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective - 1.0).abs() < 1e-12);
        assert!((sol.weights[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kappa_two_decomposition() {
        let (cols, t) = kappa2_instance();
        let sol = solve_min_tv(&cols, &t, 1e-9).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective - 3.0).abs() < 1e-9);
        for (w, want) in sol.weights.iter().zip([-0.5, -0.5, 2.0]) {
            assert!((w - want).abs() < 1e-9);
        }
        assert!(verify_solution(&cols, &t, &sol, 1e-7).passed());
    }

    #[test]
    fn infeasible_target_yields_farkas_certificate() {
        let sol = solve_min_tv(&[vec![0.0, 1.0]], &[1.0, 0.0], 1e-9).unwrap();
        assert_eq!(sol.status, LpStatus::Infeasible);
        let ty = sol.dual[0];
        assert!(ty > 0.0);
        assert!(sol.dual[1].abs() < 1e-12);
    }

    #[test]
    fn verification_detects_tampering() {
        let (cols, t) = kappa2_instance();
        let sol = solve_min_tv(&cols, &t, 1e-9).unwrap();
        let mut bad = sol.clone();
        bad.weights[2] += 1e-3;
        let r = verify_solution(&cols, &t, &bad, 1e-7);
        assert!(!r.residual_ok);
        let mut bad = sol.clone();
        bad.dual.iter_mut().for_each(|y| *y *= 2.0);
        let r = verify_solution(&cols, &t, &bad, 1e-7);
        assert!(!r.dual_ok);
    }

    #[test]
    fn redundant_rows_are_tolerated() {
        let cols = vec![vec![1.0, 2.0, 1.0], vec![1.0, 2.0, -1.0]];
        let sol = solve_min_tv(&cols, &[2.0, 4.0, 0.0], 1e-9).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective - 2.0).abs() < 1e-12);
        assert!(verify_solution(&cols, &[2.0, 4.0, 0.0], &sol, 1e-7).passed());
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(solve_min_tv(&[], &[1.0], 1e-9).is_err());
        assert!(solve_min_tv(&[vec![1.0]], &[1.0, 2.0], 1e-9).is_err());
    }
}
