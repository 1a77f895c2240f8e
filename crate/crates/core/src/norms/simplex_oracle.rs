//! Pricing over (signed copies of) the probability simplex `Δ_{m−1}`, the
//! positive part of the `ℓ₁^m` unit sphere.
//!
//! For `m = 2` the dual functional restricted to the segment is a univariate
//! polynomial of degree `n`, maximized exactly by locating the roots of its
//! derivative. For `m ≥ 3` a precomputed simplex grid supplies starting
//! points that are polished by projected gradient ascent.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::colgen::GeneratorSet;
use super::rows::RowSpace;
use crate::chebyshev::cheb_nodes;
use crate::tensor::multiset::{binomial, compositions, count_multisets, partitions};
use crate::tensor::MultisetIndex;

#[derive(Debug, Clone)]
pub(crate) struct GridOptions {
    pub resolution: usize,
    pub max_points: usize,
    pub random_starts: usize,
    pub polish_starts: usize,
    pub seed: u64,
}

pub(crate) struct SimplexGenerators {
    rows: RowSpace,
    index: Arc<MultisetIndex>,
    dim: usize,
    order: usize,
    /// Sign patterns with first entry `+1`; a single all-plus pattern for the
    /// positive norms.
    patterns: Vec<Vec<f64>>,
    grid: Vec<Vec<f64>>,
    grid_columns: Vec<Vec<f64>>,
    grid_resolution: usize,
    opts: GridOptions,
    calls: AtomicU64,
    extra_seeds: Vec<Vec<f64>>,
}

impl SimplexGenerators {
    pub fn new(rows: RowSpace, index: Arc<MultisetIndex>, signed: bool, opts: GridOptions) -> Self {
        let dim = index.dim();
        let order = index.order();
        let patterns = if signed {
            (0..1usize << (dim - 1))
                .map(|mask| {
                    (0..dim)
                        .map(|i| if i > 0 && mask & (1 << (i - 1)) != 0 { -1.0 } else { 1.0 })
                        .collect()
                })
                .collect()
        } else {
            vec![vec![1.0; dim]]
        };
        let (grid, grid_resolution) = if dim >= 3 {
            build_grid(dim, rows.is_symmetric(), &opts)
        } else {
            (Vec::new(), 0)
        };
        let grid_columns = grid.par_iter().map(|x| rows.column(x)).collect();
        SimplexGenerators {
            rows,
            index,
            dim,
            order,
            patterns,
            grid,
            grid_columns,
            grid_resolution,
            opts,
            calls: AtomicU64::new(0),
            extra_seeds: Vec::new(),
        }
    }

    /// Adds seed points on the unit sphere of `ℓ₁^m`.
    pub fn with_seeds(mut self, seeds: Vec<Vec<f64>>) -> Self {
        self.extra_seeds = seeds;
        self
    }

    #[cfg(test)]
    pub fn grid_resolution(&self) -> usize {
        self.grid_resolution
    }

    #[cfg(test)]
    pub fn grid_len(&self) -> usize {
        self.grid.len()
    }

    /// `y` with each entry multiplied by `s^α`, so that pricing the pattern
    /// `s` reduces to pricing the plain simplex.
    fn signed_dual(&self, y: &[f64], s: &[f64]) -> Vec<f64> {
        if s.iter().all(|&v| v > 0.0) {
            return y.to_vec();
        }
        self.index
            .multisets()
            .iter()
            .zip(y)
            .map(|(alpha, v)| v * alpha.iter().map(|&i| s[i]).product::<f64>())
            .collect()
    }

    fn value(&self, y: &[f64], x: &[f64]) -> f64 {
        dot(&self.rows.column(x), y)
    }

    /// Critical points in `u ∈ [0, 1]` of the two-state functional `l`
    /// along `u ↦ (u, 1−u)`, together with both endpoints.
    fn segment_critical_points(&self, l: &[f64]) -> Vec<f64> {
        let poly = segment_polynomial(l, self.order);
        let deriv: Vec<f64> = poly.iter().enumerate().skip(1).map(|(i, c)| i as f64 * c).collect();
        let mut us = vec![0.0, 1.0];
        let steps = 2048 + 128 * self.order;
        let mut prev_u = 0.0;
        let mut prev_v = horner(&deriv, 0.0);
        for k in 1..=steps {
            let u = k as f64 / steps as f64;
            let v = horner(&deriv, u);
            if v == 0.0 {
                us.push(u);
            } else if prev_v != 0.0 && (prev_v < 0.0) != (v < 0.0) {
                us.push(bisect(&deriv, prev_u, u));
            }
            prev_u = u;
            prev_v = v;
        }
        us
    }

    /// Exact maximization along the edge from `e_j` to `e_i`, `i < j`.
    fn price_edge(&self, y: &[f64], full: &[f64], i: usize, j: usize) -> Vec<(f64, Vec<f64>)> {
        let n = self.order;
        let l: Vec<f64> = (0..=n)
            .map(|p| {
                let mut alpha = vec![i; n - p];
                alpha.resize(n, j);
                self.index.position_sorted(&alpha).map_or(0.0, |pos| full[pos])
            })
            .collect();
        self.segment_critical_points(&l)
            .into_iter()
            .map(|u| {
                let mut x = vec![0.0; self.dim];
                x[i] = u;
                x[j] = 1.0 - u;
                (self.value(y, &x).abs(), x)
            })
            .collect()
    }

    fn price_edges(&self, y: &[f64]) -> Vec<(f64, Vec<f64>)> {
        let full = self.rows.full_functional(&self.index, y);
        if self.rows.is_symmetric() {
            return self.price_edge(y, &full, 0, 1);
        }
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                out.extend(self.price_edge(y, &full, i, j));
            }
        }
        out
    }

    fn price_grid(&self, y: &[f64], salt: u64) -> Vec<(f64, Vec<f64>)> {
        let vals: Vec<f64> = self.grid_columns.par_iter().map(|c| dot(c, y)).collect();
        let mut order: Vec<usize> = (0..vals.len()).collect();
        order.sort_by(|&a, &b| vals[b].abs().total_cmp(&vals[a].abs()));
        let sep = 1.5 / self.grid_resolution.max(1) as f64;
        let per_sign = self.opts.polish_starts.div_ceil(2);
        let mut starts: Vec<Vec<f64>> = Vec::new();
        for positive in [true, false] {
            let mut taken: Vec<&Vec<f64>> = Vec::new();
            for &i in order.iter().filter(|&&i| (vals[i] >= 0.0) == positive) {
                if taken.len() >= per_sign {
                    break;
                }
                let x = &self.grid[i];
                if taken.iter().all(|s| max_dist(s, x) > sep) {
                    taken.push(x);
                }
            }
            starts.extend(taken.into_iter().cloned());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.opts.seed.wrapping_add(salt));
        for _ in 0..self.opts.random_starts {
            let mut x: Vec<f64> = (0..self.dim).map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
            let s: f64 = x.iter().sum();
            x.iter_mut().for_each(|v| *v /= s);
            starts.push(x);
        }
        starts
            .par_iter()
            .map(|x0| {
                let sign = if self.value(y, x0) >= 0.0 { 1.0 } else { -1.0 };
                let f = |x: &[f64]| sign * self.value(y, x);
                let x = polish(&f, x0);
                (self.value(y, &x).abs(), x)
            })
            .collect()
    }
}

impl GeneratorSet for SimplexGenerators {
    type Point = Vec<f64>;

    fn column(&self, p: &Vec<f64>) -> Vec<f64> {
        self.rows.column(p)
    }

    fn seeds(&self) -> Vec<Vec<f64>> {
        let m = self.dim;
        let n = self.order;
        let mut base: Vec<Vec<f64>> = compositions(n, m)
            .into_iter()
            .map(|c| c.into_iter().map(|k| k as f64 / n as f64).collect())
            .collect();
        for i in 0..m {
            for j in i + 1..m {
                let mut mid = vec![0.0; m];
                mid[i] = 0.5;
                mid[j] = 0.5;
                base.push(mid);
                for node in cheb_nodes(n).into_iter().take(n + 1) {
                    let mut v = vec![0.0; m];
                    v[i] = node[0];
                    v[j] = node[1];
                    base.push(v);
                }
            }
        }
        base.push(vec![1.0 / m as f64; m]);
        if self.rows.is_symmetric() {
            for v in base.iter_mut() {
                v.sort_by(|a, b| b.total_cmp(a));
            }
        }
        let mut out: Vec<Vec<f64>> = Vec::new();
        for s in &self.patterns {
            for v in &base {
                let x: Vec<f64> = v.iter().zip(s).map(|(a, b)| a * b).collect();
                if out.iter().all(|q| max_dist(q, &x) > 1e-12 && max_dist(q, &neg(&x)) > 1e-12) {
                    out.push(x);
                }
            }
        }
        for x in &self.extra_seeds {
            if out.iter().all(|q| max_dist(q, x) > 1e-12 && max_dist(q, &neg(x)) > 1e-12) {
                out.push(x.clone());
            }
        }
        out
    }

    fn price(&self, y: &[f64], limit: usize) -> Vec<(f64, Vec<f64>)> {
        let salt = self.calls.fetch_add(1, Ordering::Relaxed);
        let mut cands: Vec<(f64, Vec<f64>)> = Vec::new();
        for s in &self.patterns {
            let ys = self.signed_dual(y, s);
            let found = match self.dim {
                1 => vec![(ys[0].abs(), vec![1.0])],
                2 => self.price_edges(&ys),
                _ => {
                    let mut found = self.price_edges(&ys);
                    found.extend(self.price_grid(&ys, salt));
                    found
                }
            };
            for (v, x) in found {
                cands.push((v, x.iter().zip(s).map(|(a, b)| a * b).collect()));
            }
        }
        cands.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut out: Vec<(f64, Vec<f64>)> = Vec::new();
        for c in cands {
            if out.len() >= limit.max(1) {
                break;
            }
            if out.iter().all(|o| max_dist(&o.1, &c.1) > 1e-9) {
                out.push(c);
            }
        }
        out
    }

    fn distance(&self, a: &Vec<f64>, b: &Vec<f64>) -> f64 {
        max_dist(a, b)
    }
}

fn neg(x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| -v).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

fn max_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max)
}

/// Simplex grid of the largest resolution `≤ opts.resolution` whose size
/// stays within `opts.max_points`; sorted (decreasing) points only when the
/// functional is permutation-invariant.
fn build_grid(dim: usize, sorted: bool, opts: &GridOptions) -> (Vec<Vec<f64>>, usize) {
    let count = |r: usize| -> usize {
        if sorted {
            partition_count(r, dim)
        } else {
            count_multisets(dim, r)
        }
    };
    let mut r = opts.resolution.max(1);
    while r > 1 && count(r) > opts.max_points {
        r -= 1;
    }
    let pts: Vec<Vec<f64>> = if sorted {
        partitions(r, dim)
            .into_iter()
            .map(|p| {
                let mut v: Vec<f64> = p.into_iter().map(|k| k as f64 / r as f64).collect();
                v.resize(dim, 0.0);
                v
            })
            .collect()
    } else {
        compositions(r, dim)
            .into_iter()
            .map(|c| c.into_iter().map(|k| k as f64 / r as f64).collect())
            .collect()
    };
    (pts, r)
}

/// Number of partitions of `n` into at most `k` parts.
fn partition_count(n: usize, k: usize) -> usize {
    // p(n, k) = p(n, k−1) + p(n−k, k)
    let mut table = vec![vec![0usize; k + 1]; n + 1];
    for row in table.iter_mut().take(n + 1) {
        row[0] = 0;
    }
    for j in 0..=k {
        table[0][j] = 1;
    }
    for i in 1..=n {
        for j in 1..=k {
            table[i][j] = table[i][j - 1] + if i >= j { table[i - j][j] } else { 0 };
        }
    }
    table[n][k]
}

/// Power-basis coefficients of `u ↦ Σ_p L_p u^{n−p} (1−u)^p`, where entry
/// `p` of a two-state functional is the multiset with `n−p` zeros.
fn segment_polynomial(l: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n + 1];
    for (p, lp) in l.iter().enumerate() {
        let zeros = n - p;
        for i in 0..=p {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            c[zeros + i] += lp * sign * binomial(p as u64, i as u64) as f64;
        }
    }
    c
}

fn horner(c: &[f64], u: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, v| acc * u + v)
}

fn bisect(c: &[f64], mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = horner(c, lo);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = horner(c, mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Euclidean projection onto the probability simplex.
pub(crate) fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (i, ui) in u.iter().enumerate() {
        cum += ui;
        let t = (cum - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}

/// Projected gradient ascent with Armijo backtracking, alternated with
/// Newton steps on the face spanned by the current support.
pub(crate) fn polish<F: Fn(&[f64]) -> f64>(f: &F, x0: &[f64]) -> Vec<f64> {
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    for _ in 0..4 {
        x = gradient_ascent(f, &x);
        x = face_newton(f, &x);
        let fnew = f(&x);
        if fnew <= fx + 1e-15 * fx.abs() {
            break;
        }
        fx = fnew;
    }
    x
}

fn gradient_ascent<F: Fn(&[f64]) -> f64>(f: &F, x0: &[f64]) -> Vec<f64> {
    let m = x0.len();
    let h = 1e-7;
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    let mut step = 0.25;
    for _ in 0..400 {
        let mut g = vec![0.0; m];
        let mut probe = x.clone();
        for i in 0..m {
            probe[i] = x[i] + h;
            let up = f(&probe);
            probe[i] = x[i] - h;
            let down = f(&probe);
            probe[i] = x[i];
            g[i] = (up - down) / (2.0 * h);
        }
        let mut moved = false;
        while step > 1e-14 {
            let cand: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a + step * b).collect();
            let xn = project_simplex(&cand);
            let fnew = f(&xn);
            let dir: f64 = g.iter().zip(xn.iter().zip(&x)).map(|(gi, (a, b))| gi * (a - b)).sum();
            if fnew > fx && fnew >= fx + 1e-4 * dir {
                let shift = max_dist(&xn, &x);
                x = xn;
                fx = fnew;
                step = (step * 2.0).min(1e3);
                moved = shift > 1e-15;
                break;
            }
            step *= 0.5;
        }
        if !moved {
            break;
        }
    }
    x
}

/// Newton iteration for a stationary point of `f` on the relative interior
/// of the face `{x_S : Σ x_S = 1}`, `S` the support of `x0`. Steps leaving
/// the face or lowering `f` are rejected.
fn face_newton<F: Fn(&[f64]) -> f64>(f: &F, x0: &[f64]) -> Vec<f64> {
    let support: Vec<usize> = (0..x0.len()).filter(|&i| x0[i] > 1e-12).collect();
    let k = support.len();
    if k < 2 {
        return x0.to_vec();
    }
    let last = support[k - 1];
    let free = &support[..k - 1];
    let embed = |z: &[f64]| -> Vec<f64> {
        let mut x = vec![0.0; x0.len()];
        for (&i, &v) in free.iter().zip(z) {
            x[i] = v;
        }
        x[last] = 1.0 - z.iter().sum::<f64>();
        x
    };
    let g = |z: &[f64]| f(&embed(z));
    let d = k - 1;
    let h = 1e-4;
    let mut z: Vec<f64> = free.iter().map(|&i| x0[i]).collect();
    let mut gz = g(&z);
    for _ in 0..20 {
        let shifted = |z: &[f64], i: usize, a: f64, j: usize, b: f64| {
            let mut w = z.to_vec();
            w[i] += a;
            w[j] += b;
            g(&w)
        };
        let mut grad = vec![0.0; d];
        let mut hess = vec![vec![0.0; d]; d];
        for i in 0..d {
            let up = shifted(&z, i, h, i, 0.0);
            let down = shifted(&z, i, -h, i, 0.0);
            grad[i] = (up - down) / (2.0 * h);
            hess[i][i] = (up - 2.0 * gz + down) / (h * h);
            for j in 0..i {
                let v = (shifted(&z, i, h, j, h) - shifted(&z, i, h, j, -h) - shifted(&z, i, -h, j, h)
                    + shifted(&z, i, -h, j, -h))
                    / (4.0 * h * h);
                hess[i][j] = v;
                hess[j][i] = v;
            }
        }
        let Some(step) = solve_small(hess, grad) else {
            break;
        };
        let zn: Vec<f64> = z.iter().zip(&step).map(|(a, b)| a - b).collect();
        let xn = embed(&zn);
        if xn.iter().any(|v| *v < 0.0) {
            break;
        }
        let gn = g(&zn);
        if gn < gz {
            break;
        }
        let size = step.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        z = zn;
        gz = gn;
        if size < 1e-13 {
            break;
        }
    }
    embed(&z)
}

/// Gaussian elimination with partial pivoting; `None` for a singular matrix.
fn solve_small(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    for col in 0..n {
        let piv = (col..n).max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))?;
        if !(a[piv][col].abs() > 1e-12 * scale) {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}
