//! Dense revised simplex with an explicit basis inverse.
//!
//! Variables `0..2N` are the split structural columns (`2k` is `+vₖ`,
//! `2k+1` is `−vₖ`), variables `2N..2N+d` are the phase-one artificials.

use super::{LpOptions, LpStatus};

const PIVOT_TOL: f64 = 1e-11;
const REFACTOR_EVERY: usize = 64;

pub(super) struct Outcome {
    pub status: LpStatus,
    /// Values of the `2N` split variables.
    pub split: Vec<f64>,
    /// Dual vector in the scaled row space.
    pub dual: Vec<f64>,
    pub iterations: usize,
}

pub(super) struct Simplex<'a> {
    d: usize,
    n_cols: usize,
    cols: &'a [Vec<f64>],
    art_sign: Vec<f64>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    binv: Vec<Vec<f64>>,
    xb: Vec<f64>,
    opts: &'a LpOptions,
    iterations: usize,
    since_refactor: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Phase {
    One,
    Two,
}

impl<'a> Simplex<'a> {
    /// `cols` and `rhs` are already row-scaled.
    pub fn new(cols: &'a [Vec<f64>], rhs: Vec<f64>, opts: &'a LpOptions) -> Self {
        let d = rhs.len();
        let art_sign: Vec<f64> = rhs.iter().map(|&v| if v < 0.0 { -1.0 } else { 1.0 }).collect();
        let n_cols = cols.len();
        let basis = (0..d).map(|i| 2 * n_cols + i).collect();
        let mut binv = vec![vec![0.0; d]; d];
        for i in 0..d {
            binv[i][i] = art_sign[i];
        }
        let xb = rhs.iter().map(|v| v.abs()).collect();
        Simplex {
            d,
            n_cols,
            cols,
            art_sign,
            rhs,
            basis,
            binv,
            xb,
            opts,
            iterations: 0,
            since_refactor: 0,
        }
    }

    fn is_artificial(&self, var: usize) -> bool {
        var >= 2 * self.n_cols
    }

    fn column(&self, var: usize) -> Vec<f64> {
        if self.is_artificial(var) {
            let i = var - 2 * self.n_cols;
            let mut e = vec![0.0; self.d];
            e[i] = self.art_sign[i];
            e
        } else {
            let v = &self.cols[var / 2];
            if var % 2 == 0 {
                v.clone()
            } else {
                v.iter().map(|x| -x).collect()
            }
        }
    }

    fn cost(&self, phase: Phase, var: usize) -> f64 {
        match (phase, self.is_artificial(var)) {
            (Phase::One, true) | (Phase::Two, false) => 1.0,
            _ => 0.0,
        }
    }

    fn dual(&self, phase: Phase) -> Vec<f64> {
        let mut y = vec![0.0; self.d];
        for (r, &var) in self.basis.iter().enumerate() {
            let c = self.cost(phase, var);
            if c != 0.0 {
                for (yj, bj) in y.iter_mut().zip(&self.binv[r]) {
                    *yj += c * bj;
                }
            }
        }
        y
    }

    fn basis_matrix(&self) -> Vec<Vec<f64>> {
        let d = self.d;
        let mut b = vec![vec![0.0; d]; d];
        for (c, &var) in self.basis.iter().enumerate() {
            for (r, v) in self.column(var).into_iter().enumerate() {
                b[r][c] = v;
            }
        }
        b
    }

    /// The dual from a fresh solve of `Bᵀy = c_B`.
    fn refined_dual(&self, phase: Phase) -> Vec<f64> {
        let b = self.basis_matrix();
        let bt: Vec<Vec<f64>> = (0..self.d).map(|i| (0..self.d).map(|j| b[j][i]).collect()).collect();
        let cb: Vec<f64> = self.basis.iter().map(|&v| self.cost(phase, v)).collect();
        refined_solve(&bt, &cb).unwrap_or_else(|| self.dual(phase))
    }

    fn ftran(&self, a: &[f64]) -> Vec<f64> {
        self.binv
            .iter()
            .map(|row| row.iter().zip(a).map(|(p, q)| p * q).sum())
            .collect()
    }

    fn pivot(&mut self, r: usize, var: usize, dir: &[f64]) {
        let theta = self.xb[r] / dir[r];
        for i in 0..self.d {
            if i != r {
                self.xb[i] -= theta * dir[i];
                if self.xb[i] < 0.0 && self.xb[i] > -self.opts.feasibility_tol {
                    self.xb[i] = 0.0;
                }
            }
        }
        self.xb[r] = theta;
        let piv = dir[r];
        let prow: Vec<f64> = self.binv[r].iter().map(|v| v / piv).collect();
        for i in 0..self.d {
            if i != r && dir[i] != 0.0 {
                let f = dir[i];
                for (b, p) in self.binv[i].iter_mut().zip(&prow) {
                    *b -= f * p;
                }
            }
        }
        self.binv[r] = prow;
        self.basis[r] = var;
        self.iterations += 1;
        self.since_refactor += 1;
        if self.since_refactor >= REFACTOR_EVERY {
            self.refactor();
        }
    }

    fn refactor(&mut self) {
        self.since_refactor = 0;
        let b = self.basis_matrix();
        if let Some(inv) = invert(&b) {
            self.binv = inv;
            self.xb = refined_solve(&b, &self.rhs).unwrap_or_else(|| self.ftran(&self.rhs));
            for x in self.xb.iter_mut() {
                if *x < 0.0 && *x > -self.opts.feasibility_tol {
                    *x = 0.0;
                }
            }
        }
    }

    /// Runs simplex iterations for one phase; returns `false` on the
    /// iteration limit or a numerical breakdown.
    fn iterate(&mut self, phase: Phase) -> bool {
        let threshold = match phase {
            Phase::One => self.opts.optimality_tol,
            Phase::Two => 1.0 + self.opts.optimality_tol,
        };
        let mut degenerate_run = 0usize;
        let bland_after = 10 * self.d.max(1);
        loop {
            if self.iterations >= self.opts.max_iterations {
                return false;
            }
            let y = self.dual(phase);
            let bland = degenerate_run >= bland_after;
            let mut entering: Option<(usize, f64)> = None;
            for (k, v) in self.cols.iter().enumerate() {
                let w: f64 = y.iter().zip(v).map(|(a, b)| a * b).sum();
                if w.abs() > threshold {
                    let var = if w > 0.0 { 2 * k } else { 2 * k + 1 };
                    if self.basis.contains(&var) {
                        continue;
                    }
                    match entering {
                        None => entering = Some((var, w.abs())),
                        Some((_, best)) if !bland && w.abs() > best => {
                            entering = Some((var, w.abs()))
                        }
                        _ => {}
                    }
                    if bland {
                        break;
                    }
                }
            }
            let Some((var, _)) = entering else {
                return true;
            };
            let dir = self.ftran(&self.column(var));
            let leave = self.ratio_test(phase, &dir, bland);
            let Some((r, ratio)) = leave else {
                // objective is bounded below by zero; an unbounded ray is
                // a numerical breakdown
                return false;
            };
            if ratio <= 1e-12 {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            if dir[r].abs() <= PIVOT_TOL {
                return false;
            }
            self.pivot(r, var, &dir);
        }
    }

    /// Two-pass Harris ratio test: the step is the smallest ratio with every
    /// basic value relaxed by the feasibility tolerance, and among rows whose
    /// exact ratio fits under that step the largest pivot wins.
    fn ratio_test(&self, phase: Phase, dir: &[f64], bland: bool) -> Option<(usize, f64)> {
        let biggest = dir.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let piv_tol = PIVOT_TOL.max(1e-9 * biggest);
        let eligible = |i: usize| -> Option<f64> {
            let art = self.is_artificial(self.basis[i]);
            let di = if art && phase == Phase::Two { dir[i].abs() } else { dir[i] };
            (di > piv_tol).then_some(di)
        };
        let delta = self.opts.feasibility_tol;
        let mut step = f64::INFINITY;
        for i in 0..self.d {
            if let Some(di) = eligible(i) {
                step = step.min((self.xb[i].max(0.0) + delta) / di);
            }
        }
        if !step.is_finite() {
            return None;
        }
        let mut best: Option<(usize, f64, f64)> = None;
        for i in 0..self.d {
            let Some(di) = eligible(i) else { continue };
            let ratio = self.xb[i].max(0.0) / di;
            if ratio > step {
                continue;
            }
            let better = match best {
                None => true,
                Some((j, _, dj)) => {
                    if bland {
                        self.basis[i] < self.basis[j]
                    } else {
                        di > dj
                    }
                }
            };
            if better {
                best = Some((i, ratio, di));
            }
        }
        best.map(|(i, ratio, _)| (i, ratio))
    }

    fn drive_out_artificials(&mut self) {
        for r in 0..self.d {
            if !self.is_artificial(self.basis[r]) {
                continue;
            }
            let row = self.binv[r].clone();
            let mut best: Option<(usize, f64)> = None;
            for (k, v) in self.cols.iter().enumerate() {
                let val: f64 = row.iter().zip(v).map(|(a, b)| a * b).sum();
                if val.abs() > 1e-9 && best.map_or(true, |(_, b)| val.abs() > b) {
                    best = Some((k, val.abs()));
                }
            }
            if let Some((k, _)) = best {
                let var = if self.basis.contains(&(2 * k)) { 2 * k + 1 } else { 2 * k };
                if self.basis.contains(&var) {
                    continue;
                }
                let dir = self.ftran(&self.column(var));
                // xb[r] is zero so the pivot keeps the point fixed
                self.xb[r] = 0.0;
                self.pivot(r, var, &dir);
            }
        }
    }

    pub fn solve(mut self) -> Outcome {
        let scale = self.rhs.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let ok = self.iterate(Phase::One);
        let infeasibility: f64 = self
            .basis
            .iter()
            .zip(&self.xb)
            .filter(|(v, _)| self.is_artificial(**v))
            .map(|(_, x)| *x)
            .sum();
        if infeasibility > self.opts.feasibility_tol * scale {
            let status = if ok { LpStatus::Infeasible } else { LpStatus::IterationLimit };
            let dual = self.dual(Phase::One);
            return self.finish(status, dual);
        }
        self.drive_out_artificials();
        let ok = self.iterate(Phase::Two);
        self.refactor();
        let status = if ok { LpStatus::Optimal } else { LpStatus::IterationLimit };
        let dual = self.refined_dual(Phase::Two);
        self.finish(status, dual)
    }

    fn finish(self, status: LpStatus, dual: Vec<f64>) -> Outcome {
        let mut split = vec![0.0; 2 * self.n_cols];
        for (&var, &x) in self.basis.iter().zip(&self.xb) {
            if !self.is_artificial(var) {
                split[var] = x.max(0.0);
            }
        }
        Outcome {
            status,
            split,
            dual,
            iterations: self.iterations,
        }
    }
}

/// Solves `Ax = b` by Gaussian elimination with partial pivoting followed
/// by one step of iterative refinement.
fn refined_solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut lu: Vec<Vec<f64>> = a.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| lu[i][c].abs().total_cmp(&lu[j][c].abs()))?;
        if lu[p][c] == 0.0 {
            return None;
        }
        lu.swap(c, p);
        perm.swap(c, p);
        for r in c + 1..n {
            let f = lu[r][c] / lu[c][c];
            lu[r][c] = f;
            if f != 0.0 {
                for k in c + 1..n {
                    lu[r][k] -= f * lu[c][k];
                }
            }
        }
    }
    let apply = |rhs: &[f64]| -> Vec<f64> {
        let mut y: Vec<f64> = perm.iter().map(|&i| rhs[i]).collect();
        for r in 0..n {
            for k in 0..r {
                y[r] -= lu[r][k] * y[k];
            }
        }
        for r in (0..n).rev() {
            for k in r + 1..n {
                y[r] -= lu[r][k] * y[k];
            }
            y[r] /= lu[r][r];
        }
        y
    };
    let mut x = apply(b);
    let resid: Vec<f64> = (0..n)
        .map(|i| b[i] - a[i].iter().zip(&x).map(|(p, q)| p * q).sum::<f64>())
        .collect();
    for (xi, di) in x.iter_mut().zip(apply(&resid)) {
        *xi += di;
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Gauss-Jordan inverse with partial pivoting.
pub(super) fn invert(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut inv: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut r = vec![0.0; n];
            r[i] = 1.0;
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))?;
        if m[p][c].abs() < 1e-14 {
            return None;
        }
        m.swap(c, p);
        inv.swap(c, p);
        let piv = m[c][c];
        for v in m[c].iter_mut() {
            *v /= piv;
        }
        for v in inv[c].iter_mut() {
            *v /= piv;
        }
        for r in 0..n {
            if r != c && m[r][c] != 0.0 {
                let f = m[r][c];
                let (mc, ic) = (m[c].clone(), inv[c].clone());
                for (x, y) in m[r].iter_mut().zip(&mc) {
                    *x -= f * y;
                }
                for (x, y) in inv[r].iter_mut().zip(&ic) {
                    *x -= f * y;
                }
            }
        }
    }
    Some(inv)
}
