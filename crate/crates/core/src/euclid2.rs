//! Symmetric `2 × 2` matrices as tensors over the Euclidean plane.
//!
//! In the coordinates `A = ½[[u+w, v], [v, u−w]]` a power of a unit vector
//! is `(cos t, sin t)^{⊗2} = (1, sin 2t, cos 2t)`, and a wedge of two unit
//! vectors is `(cos t, sin t) ∨ (cos s, sin s) = (cos(s−t), sin(s+t), cos(s+t))`.
//! All three generator families are therefore arcs on which the dual
//! functional is `C + A cos φ + B sin φ`, maximized in closed form.

use std::f64::consts::{FRAC_PI_2, PI};

use serde_json::{json, Value};

use crate::error::{check_dim, Result};
use crate::norms::{ColGenOptions, ColGenResult, GeneratorSet, NormBounds, NormOptions, Primal};
use crate::tensor::{power, SignedPowerCombination, SymmetricTensor, WedgeCombination, WedgeTerm};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UVWCoords {
    pub u: f64,
    pub v: f64,
    pub w: f64,
}

impl UVWCoords {
    pub fn from_matrix(a: &[[f64; 2]; 2]) -> Self {
        UVWCoords {
            u: a[0][0] + a[1][1],
            v: a[0][1] + a[1][0],
            w: a[0][0] - a[1][1],
        }
    }

    pub fn to_matrix(&self) -> [[f64; 2]; 2] {
        [
            [0.5 * (self.u + self.w), 0.5 * self.v],
            [0.5 * self.v, 0.5 * (self.u - self.w)],
        ]
    }

    pub fn from_tensor(t: &SymmetricTensor<f64>) -> Result<Self> {
        check_dim(2, t.dim())?;
        check_dim(2, t.order())?;
        let v = t.values();
        Ok(UVWCoords {
            u: v[0] + v[2],
            v: 2.0 * v[1],
            w: v[0] - v[2],
        })
    }

    pub fn to_tensor(&self) -> SymmetricTensor<f64> {
        matrix_tensor(&self.to_matrix())
    }

    /// `‖·‖_π = max{|u|, √(v²+w²)}`.
    pub fn trace_norm(&self) -> f64 {
        self.u.abs().max(self.v.hypot(self.w))
    }
}

/// The tensor with entries `A₀₀, A₀₁, A₁₁`.
pub fn matrix_tensor(a: &[[f64; 2]; 2]) -> SymmetricTensor<f64> {
    SymmetricTensor::from_entries(
        2,
        2,
        [(vec![0, 0], a[0][0]), (vec![0, 1], 0.5 * (a[0][1] + a[1][0])), (vec![1, 1], a[1][1])],
    )
    .expect("2 × 2 shape")
}

/// Eigenvalues of a symmetric `2 × 2` matrix, larger first.
pub fn eigenvalues_2x2(a: &[[f64; 2]; 2]) -> (f64, f64) {
    let half_tr = 0.5 * (a[0][0] + a[1][1]);
    let r = (0.5 * (a[0][0] - a[1][1])).hypot(a[0][1]);
    (half_tr + r, half_tr - r)
}

pub fn trace_norm_2x2(a: &[[f64; 2]; 2]) -> f64 {
    let (l1, l2) = eigenvalues_2x2(a);
    l1.abs() + l2.abs()
}

fn tensor_matrix(t: &SymmetricTensor<f64>) -> [[f64; 2]; 2] {
    let v = t.values();
    [[v[0], v[1]], [v[1], v[2]]]
}

/// `‖t‖_π = ‖t‖_{π,s}` with the spectral decomposition as primal and
/// `sign(λ₁)v₁v₁ᵀ + sign(λ₂)v₂v₂ᵀ` as dual.
pub(crate) fn trace_norm_bounds(t: &SymmetricTensor<f64>) -> NormBounds {
    let a = tensor_matrix(t);
    let (l1, l2) = eigenvalues_2x2(&a);
    // eigenvector of l1 at angle θ with tan 2θ = 2A₀₁/(A₀₀ − A₁₁)
    let theta = 0.5 * (2.0 * a[0][1]).atan2(a[0][0] - a[1][1]);
    let v1 = vec![theta.cos(), theta.sin()];
    let v2 = vec![-theta.sin(), theta.cos()];
    let mut comb = SignedPowerCombination::new(2, 2);
    let sgn = |l: f64| if l < 0.0 { -1.0 } else { 1.0 };
    let mut b = [[0.0; 2]; 2];
    for (l, v) in [(l1, &v1), (l2, &v2)] {
        if l != 0.0 {
            comb.push(l, v.clone()).expect("two coordinates");
        }
        for i in 0..2 {
            for j in 0..2 {
                b[i][j] += sgn(l) * v[i] * v[j];
            }
        }
    }
    let value = l1.abs() + l2.abs();
    NormBounds {
        lower: value,
        upper: value,
        primal: Primal::Powers(comb),
        dual: vec![b[0][0], 2.0 * b[0][1], b[1][1]],
        iterations: 0,
        converged: true,
        max_violation: 1.0,
    }
}

/// The three closed-form norms of `[[a, b], [b, a]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneNorms {
    pub pi: f64,
    pub pisp: f64,
    pub pip: f64,
}

pub fn norms_ab(a: f64, b: f64) -> PlaneNorms {
    PlaneNorms {
        pi: 2.0 * a.abs().max(b.abs()),
        pisp: 2.0 * a.abs().max((a - 2.0 * b).abs()),
        pip: 2.0 * a.abs().max(b.abs()).max((a - b).abs()),
    }
}

/// `max |C + A cos φ + B sin φ|` candidates on `[lo, hi]`.
fn trig_extrema(a: f64, b: f64, c: f64, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let f = |phi: f64| c + a * phi.cos() + b * phi.sin();
    let mut out = vec![(f(lo).abs(), lo), (f(hi).abs(), hi)];
    if a != 0.0 || b != 0.0 {
        let star = b.atan2(a);
        for base in [star, star + PI] {
            // shift into [lo, lo + 2π)
            let mut phi = base;
            while phi < lo {
                phi += 2.0 * PI;
            }
            while phi >= lo + 2.0 * PI {
                phi -= 2.0 * PI;
            }
            if phi <= hi {
                out.push((f(phi).abs(), phi));
            }
        }
    }
    out
}

/// Arcs of unit vectors `(cos t, sin t)` used for powers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircleArc {
    /// `t ∈ [0, π)`: every unit vector up to sign.
    Full,
    /// `t ∈ [0, π/2]`: the positive unit vectors.
    Quarter,
}

impl CircleArc {
    fn range(self) -> (f64, f64) {
        match self {
            CircleArc::Full => (0.0, PI),
            CircleArc::Quarter => (0.0, FRAC_PI_2),
        }
    }
}

struct CircleGenerators {
    arc: CircleArc,
}

fn power_column(t: f64) -> Vec<f64> {
    let (s, c) = t.sin_cos();
    vec![c * c, c * s, s * s]
}

impl GeneratorSet for CircleGenerators {
    type Point = f64;

    fn column(&self, t: &f64) -> Vec<f64> {
        power_column(*t)
    }

    fn seeds(&self) -> Vec<f64> {
        let (lo, hi) = self.arc.range();
        let k = 8;
        match self.arc {
            CircleArc::Full => (0..k).map(|i| lo + (hi - lo) * i as f64 / k as f64).collect(),
            CircleArc::Quarter => (0..=k).map(|i| lo + (hi - lo) * i as f64 / k as f64).collect(),
        }
    }

    fn price(&self, y: &[f64], limit: usize) -> Vec<(f64, f64)> {
        let (lo, hi) = self.arc.range();
        let a = 0.5 * (y[0] - y[2]);
        let b = 0.5 * y[1];
        let c = 0.5 * (y[0] + y[2]);
        let mut found: Vec<(f64, f64)> = trig_extrema(a, b, c, 2.0 * lo, 2.0 * hi)
            .into_iter()
            .map(|(v, phi)| {
                let mut t = 0.5 * phi;
                if self.arc == CircleArc::Full && t >= PI {
                    t -= PI;
                }
                (v, t)
            })
            .collect();
        found.sort_by(|p, q| q.0.total_cmp(&p.0));
        found.truncate(limit.max(1));
        found
    }

    fn distance(&self, a: &f64, b: &f64) -> f64 {
        let d = (a - b).abs();
        match self.arc {
            CircleArc::Full => d.min(PI - d),
            CircleArc::Quarter => d,
        }
    }

    fn merge_radius(&self) -> f64 {
        1e-4
    }
}

/// The solves run at a tighter pricing tolerance than requested, so a stall
/// inside the requested tolerance still counts as converged.
fn within_tolerance<P>(res: &ColGenResult<P>, opts: &NormOptions) -> bool {
    res.converged || res.upper - res.lower <= opts.tol * res.upper.abs().max(1.0)
}

fn colgen_options(opts: &NormOptions) -> ColGenOptions {
    ColGenOptions {
        tol: opts.tol.min(1e-10),
        max_rounds: opts.max_rounds,
        columns_per_round: opts.columns_per_round,
    }
}

/// Column generation over powers of unit vectors on an arc.
pub fn circle_lp(t: &SymmetricTensor<f64>, arc: CircleArc, opts: &NormOptions) -> Result<NormBounds> {
    check_dim(2, t.dim())?;
    check_dim(2, t.order())?;
    let res = crate::norms::colgen_run(&CircleGenerators { arc }, t.values(), &colgen_options(opts))?;
    let converged = within_tolerance(&res, opts);
    let mut comb = SignedPowerCombination::new(2, 2);
    for (w, th) in &res.atoms {
        comb.push(*w, vec![th.cos(), th.sin()]).expect("two coordinates");
    }
    Ok(NormBounds {
        lower: res.lower,
        upper: res.upper,
        primal: Primal::Powers(comb),
        dual: res.dual,
        iterations: res.rounds,
        converged,
        max_violation: res.max_violation,
    })
}

/// `‖A‖_{π,s,+}` over the Euclidean plane from measures on `[0, π/2]`.
pub fn half_circle_lp(a: &[[f64; 2]; 2], opts: &NormOptions) -> Result<NormBounds> {
    circle_lp(&matrix_tensor(a), CircleArc::Quarter, opts)
}

/// Wedges `(cos s, sin s) ∨ (cos r, sin r)` with `0 ≤ r ≤ s ≤ π/2`.
struct PositiveWedges;

fn wedge_column(p: &(f64, f64)) -> Vec<f64> {
    let (s, r) = *p;
    vec![s.cos() * r.cos(), 0.5 * (s + r).sin(), s.sin() * r.sin()]
}

impl GeneratorSet for PositiveWedges {
    type Point = (f64, f64);

    fn column(&self, p: &(f64, f64)) -> Vec<f64> {
        wedge_column(p)
    }

    fn seeds(&self) -> Vec<(f64, f64)> {
        let q = FRAC_PI_2;
        vec![
            (0.0, 0.0),
            (q, q),
            (q, 0.0),
            (0.5 * q, 0.5 * q),
            (0.5 * q, 0.0),
            (q, 0.5 * q),
        ]
    }

    fn price(&self, y: &[f64], limit: usize) -> Vec<(f64, (f64, f64))> {
        // with σ = s + r, δ = s − r the functional is affine in cos δ, so the
        // maximum sits on δ = 0 or on the boundary r = 0 / s = π/2
        let mut found: Vec<(f64, (f64, f64))> = Vec::new();
        for (v, sigma) in trig_extrema(0.5 * (y[0] - y[2]), 0.5 * y[1], 0.5 * (y[0] + y[2]), 0.0, PI) {
            found.push((v, (0.5 * sigma, 0.5 * sigma)));
        }
        for (v, sigma) in trig_extrema(y[0], 0.5 * y[1], 0.0, 0.0, FRAC_PI_2) {
            found.push((v, (sigma, 0.0)));
        }
        for (v, sigma) in trig_extrema(-y[2], 0.5 * y[1], 0.0, FRAC_PI_2, PI) {
            found.push((v, (FRAC_PI_2, sigma - FRAC_PI_2)));
        }
        found.sort_by(|p, q| q.0.total_cmp(&p.0));
        found.truncate(limit.max(1));
        found
    }

    fn distance(&self, a: &(f64, f64), b: &(f64, f64)) -> f64 {
        (a.0 - b.0).abs().max((a.1 - b.1).abs())
    }

    fn merge_radius(&self) -> f64 {
        1e-4
    }
}

/// `‖t‖_{π,+}` over the Euclidean plane by column generation over wedges
/// of positive unit vectors.
pub fn positive_wedge_lp(t: &SymmetricTensor<f64>, opts: &NormOptions) -> Result<NormBounds> {
    check_dim(2, t.dim())?;
    check_dim(2, t.order())?;
    let res = crate::norms::colgen_run(&PositiveWedges, t.values(), &colgen_options(opts))?;
    let converged = within_tolerance(&res, opts);
    let terms = res
        .atoms
        .iter()
        .map(|(w, (s, r))| WedgeTerm {
            weight: *w,
            factors: vec![vec![s.cos(), s.sin()], vec![r.cos(), r.sin()]],
        })
        .collect();
    Ok(NormBounds {
        lower: res.lower,
        upper: res.upper,
        primal: Primal::Wedges(WedgeCombination { dim: 2, order: 2, terms }),
        dual: res.dual,
        iterations: res.rounds,
        converged,
        max_violation: res.max_violation,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallKind {
    Pi,
    Pisp,
    Pip,
}

/// Samples of the extreme points of the unit ball of the given norm, in
/// `(u, v, w)` coordinates.
pub fn extreme_points(kind: BallKind, resolution: usize) -> Vec<UVWCoords> {
    let res = resolution.max(4);
    let arc = |lo: f64, hi: f64, closed: bool| -> Vec<f64> {
        let k = if closed { res + 1 } else { res };
        (0..k).map(|i| lo + (hi - lo) * i as f64 / res as f64).collect()
    };
    let mut out = Vec::new();
    let circle = |s: f64| UVWCoords { u: 1.0, v: s.sin(), w: s.cos() };
    let ellipse = |s: f64| UVWCoords {
        u: s.cos().abs(),
        v: s.sin(),
        w: s.cos(),
    };
    let both = |p: UVWCoords, out: &mut Vec<UVWCoords>| {
        out.push(p);
        out.push(UVWCoords { u: -p.u, v: -p.v, w: -p.w });
    };
    match kind {
        BallKind::Pi => arc(0.0, 2.0 * PI, false).into_iter().for_each(|s| both(circle(s), &mut out)),
        BallKind::Pisp => arc(0.0, PI, true).into_iter().for_each(|s| both(circle(s), &mut out)),
        BallKind::Pip => {
            arc(0.0, PI, true).into_iter().for_each(|s| both(circle(s), &mut out));
            arc(0.0, PI, true).into_iter().for_each(|s| both(ellipse(s), &mut out));
        }
    }
    out
}

/// The norm of a point in `(u, v, w)` coordinates for the given ball.
pub fn norm_of(kind: BallKind, p: &UVWCoords, opts: &NormOptions) -> Result<NormBounds> {
    let t = p.to_tensor();
    match kind {
        BallKind::Pi => Ok(trace_norm_bounds(&t)),
        BallKind::Pisp => circle_lp(&t, CircleArc::Quarter, opts),
        BallKind::Pip => positive_wedge_lp(&t, opts),
    }
}

/// An interval `[lower, upper]` from sampling, meant to straddle a constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampledBracket {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

impl SampledBracket {
    pub fn straddles(&self, tol: f64) -> bool {
        self.lower - tol <= self.value && self.value <= self.upper + tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantsL2 {
    pub csp: f64,
    pub cssp: f64,
    pub cpsp: f64,
    pub cp_squared: f64,
    /// Sampled `sup ‖x‖_{π,s,+}/‖x‖_π` over the extreme points of the `π` ball.
    pub csp_check: SampledBracket,
    /// Sampled `sup ‖x‖_{π,s,+}/‖x‖_{π,+}` over the extreme points of the
    /// `(π,+)` ball.
    pub cpsp_check: SampledBracket,
    /// Sampled `sup ‖x‖₊²/‖x‖²` over unit vectors.
    pub cp_squared_check: SampledBracket,
}

pub fn constants_l2(resolution: usize, opts: &NormOptions) -> Result<ConstantsL2> {
    let sup_ratio = |points: Vec<UVWCoords>, base: BallKind, value: f64| -> Result<SampledBracket> {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for p in points {
            let den = norm_of(base, &p, opts)?;
            let num = norm_of(BallKind::Pisp, &p, opts)?;
            lo = lo.max(num.lower / den.upper);
            hi = hi.max(num.upper / den.lower);
        }
        Ok(SampledBracket { value, lower: lo, upper: hi })
    };
    let csp_check = sup_ratio(extreme_points(BallKind::Pi, resolution), BallKind::Pi, 3.0)?;
    let cpsp_check = sup_ratio(extreme_points(BallKind::Pip, resolution), BallKind::Pip, 2.0)?;
    let mut cp = f64::NEG_INFINITY;
    let steps = resolution.max(4) * 4;
    for i in 0..steps {
        let th = 2.0 * PI * i as f64 / steps as f64;
        let split = crate::tensor::pos_neg_split(&[th.cos(), th.sin()], 2.0)?;
        cp = cp.max(split.plus_norm * split.plus_norm);
    }
    Ok(ConstantsL2 {
        csp: 3.0,
        cssp: 3.0,
        cpsp: 2.0,
        cp_squared: 2.0,
        csp_check,
        cpsp_check,
        cp_squared_check: SampledBracket {
            value: 2.0,
            lower: cp,
            upper: cp,
        },
    })
}

impl ConstantsL2 {
    pub fn to_json(&self) -> Value {
        let b = |s: &SampledBracket| json!({"value": s.value, "lower": s.lower, "upper": s.upper});
        json!({
            "csp": self.csp,
            "cssp": self.cssp,
            "cpsp": self.cpsp,
            "cp_squared": self.cp_squared,
            "csp_check": b(&self.csp_check),
            "cpsp_check": b(&self.cpsp_check),
            "cp_squared_check": b(&self.cp_squared_check),
        })
    }
}

/// `(cos t, sin t)^{⊗2}` as a tensor.
pub fn unit_power(t: f64) -> SymmetricTensor<f64> {
    power(&[t.cos(), t.sin()], 2).expect("two coordinates")
}

#[cfg(test)]
mod tests {
    use super::*;

    const SWAP: [[f64; 2]; 2] = [[0.0, 1.0], [1.0, 0.0]];
    const MIXED: [[f64; 2]; 2] = [[1.0, -1.0], [-1.0, 1.0]];

    #[test]
    fn trace_norms() {
        assert_eq!(trace_norm_2x2(&SWAP), 2.0);
        assert_eq!(trace_norm_2x2(&[[1.0, 0.0], [0.0, 1.0]]), 2.0);
        assert!((trace_norm_2x2(&MIXED) - 2.0).abs() < 1e-15);
        let p = UVWCoords::from_matrix(&[[0.3, -0.7], [-0.7, 2.0]]);
        assert!((p.trace_norm() - trace_norm_2x2(&[[0.3, -0.7], [-0.7, 2.0]])).abs() < 1e-14);
        let q = UVWCoords::from_matrix(&p.to_matrix());
        assert!((q.u - p.u).abs() + (q.v - p.v).abs() + (q.w - p.w).abs() < 1e-15);
    }

    #[test]
    fn closed_forms() {
        assert_eq!(norms_ab(1.0, -1.0), PlaneNorms { pi: 2.0, pisp: 6.0, pip: 4.0 });
        assert_eq!(norms_ab(0.0, 1.0), PlaneNorms { pi: 2.0, pisp: 4.0, pip: 2.0 });
        assert_eq!(norms_ab(1.0, 0.0), PlaneNorms { pi: 2.0, pisp: 2.0, pip: 2.0 });
    }

    #[test]
    fn half_circle_swap_matrix() {
        let b = half_circle_lp(&SWAP, &NormOptions::default()).unwrap();
        assert!((b.lower - 4.0).abs() < 1e-9 && (b.upper - 4.0).abs() < 1e-9);
        let Primal::Powers(c) = &b.primal else { panic!() };
        assert_eq!(c.len(), 3);
        let e = half_circle_lp(&[[1.0, 0.0], [0.0, 0.0]], &NormOptions::default()).unwrap();
        assert!((e.upper - 1.0).abs() < 1e-9);
        let m = half_circle_lp(&MIXED, &NormOptions::default()).unwrap();
        assert!((m.upper - 6.0).abs() < 1e-9 && (m.lower - 6.0).abs() < 1e-9);
    }

    #[test]
    fn positive_wedges() {
        let b = positive_wedge_lp(&matrix_tensor(&SWAP), &NormOptions::default()).unwrap();
        assert!((b.upper - 2.0).abs() < 1e-9 && (b.lower - 2.0).abs() < 1e-9);
        let b = positive_wedge_lp(&matrix_tensor(&MIXED), &NormOptions::default()).unwrap();
        assert!((b.upper - 4.0).abs() < 1e-9 && (b.lower - 4.0).abs() < 1e-9);
    }

    #[test]
    fn full_circle_matches_trace_norm() {
        let t = matrix_tensor(&SWAP);
        let b = circle_lp(&t, CircleArc::Full, &NormOptions::default()).unwrap();
        assert!(
            (b.upper - 2.0).abs() < 1e-9 && (b.lower - 2.0).abs() < 1e-9,
            "{b:?}"
        );
        assert!((b.upper - 2.0).abs() < 1e-9 && (b.lower - 2.0).abs() < 1e-9);
    }

    #[test]
    fn extreme_point_samples() {
        let pi = extreme_points(BallKind::Pi, 8);
        assert!(pi.contains(&UVWCoords { u: 1.0, v: 0.0, w: 1.0 }));
        assert!(pi.contains(&UVWCoords { u: -1.0, v: -0.0, w: -1.0 }));
        let pip = extreme_points(BallKind::Pip, 8);
        assert!(pip
            .iter()
            .any(|p| p.u.abs() < 1e-15 && (p.v - 1.0).abs() < 1e-15 && p.w.abs() < 1e-15));
        let opts = NormOptions::default();
        for kind in [BallKind::Pi, BallKind::Pisp, BallKind::Pip] {
            for p in extreme_points(kind, 12) {
                let b = norm_of(kind, &p, &opts).unwrap();
                assert!((b.lower - 1.0).abs() < 1e-9 && (b.upper - 1.0).abs() < 1e-9, "{kind:?} {p:?} {b:?}");
            }
        }
    }
}
