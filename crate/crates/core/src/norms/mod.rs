//! Certified brackets for the four projective norms of a symmetric tensor.
//!
//! Over `ℓ₁^m`:
//!
//! * `‖t‖_π = ‖t‖_{π,+}` is the entrywise `ℓ₁` norm (closed form);
//! * `‖t‖_{π,s}` and `‖t‖_{π,s,+}` are semi-infinite LPs over powers of unit
//!   vectors, solved by column generation. The generator set for the
//!   positive norm is the simplex `Δ_{m−1}`; the signed norm uses the `2^{m−1}`
//!   signed copies of it.
//!
//! Over the Euclidean plane (`n = 2`) the generator families are arcs of the
//! unit circle; see [`crate::euclid2`].
//!
//! Every result is a [`NormBounds`]: `upper` is the cost of the returned
//! primal decomposition and `lower = L(t)` for a dual functional `L`
//! normalized so that `|L(g)| ≤ 1` on every generator the oracle could find.

mod colgen;
mod rows;
mod simplex_oracle;

use std::sync::Arc;

use serde_json::{json, Value};

use crate::chebyshev::{optimal_decomposition_m2, psi, ChebDecomposition};
use crate::error::{invalid, Error, Result};
use crate::euclid2;
use crate::tensor::multiset::factorial;
use crate::tensor::{wedge, MultisetIndex, PowerTerm, SignedPowerCombination, SymmetricTensor, WedgeCombination, WedgeTerm};

pub(crate) use colgen::{run as colgen_run, ColGenOptions, ColGenResult, GeneratorSet};
pub(crate) use rows::{distinct_permutations, OrbitRows, RowSpace};
use simplex_oracle::{GridOptions, SimplexGenerators};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    L1,
    L2Dim2,
}

/// A ground space with its standard coordinatewise order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpaceDescriptor {
    pub family: Family,
    pub dim: usize,
}

impl SpaceDescriptor {
    pub fn l1(dim: usize) -> Self {
        SpaceDescriptor { family: Family::L1, dim }
    }

    pub fn l2_dim2() -> Self {
        SpaceDescriptor {
            family: Family::L2Dim2,
            dim: 2,
        }
    }

    fn check(&self, t: &SymmetricTensor<f64>) -> Result<()> {
        if t.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: t.dim(),
            });
        }
        if self.family == Family::L2Dim2 && (self.dim != 2 || t.order() != 2) {
            return Err(Error::Unsupported(
                "the Euclidean plane is supported for order-2 tensors only".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormOptions {
    /// Pricing tolerance: converged once every generator has `|L| ≤ 1 + tol`.
    pub tol: f64,
    pub max_rounds: usize,
    /// Simplex grid resolution for `m ≥ 3`.
    pub grid_resolution: usize,
    /// Upper limit on the grid size; the resolution is lowered to fit.
    pub max_grid_points: usize,
    pub columns_per_round: usize,
    pub polish_starts: usize,
    pub random_starts: usize,
    pub seed: u64,
    /// Reduce permutation-invariant targets to orbit types.
    pub use_symmetry: bool,
}

impl Default for NormOptions {
    fn default() -> Self {
        NormOptions {
            tol: 1e-7,
            max_rounds: 200,
            grid_resolution: 64,
            max_grid_points: 30_000,
            columns_per_round: 8,
            polish_starts: 12,
            random_starts: 3,
            seed: 20_240_601,
            use_symmetry: true,
        }
    }
}

impl NormOptions {
    fn colgen(&self) -> ColGenOptions {
        ColGenOptions {
            tol: self.tol,
            max_rounds: self.max_rounds,
            columns_per_round: self.columns_per_round,
        }
    }

    pub(crate) fn grid(&self) -> GridOptions {
        GridOptions {
            resolution: self.grid_resolution,
            max_points: self.max_grid_points,
            random_starts: self.random_starts,
            polish_starts: self.polish_starts,
            seed: self.seed,
        }
    }
}

/// A combination `Σ aₖ · avg_σ (σxₖ)^{⊗n}` of orbit-averaged powers, the
/// compact primal for permutation-invariant targets.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitCombination {
    pub dim: usize,
    pub order: usize,
    pub atoms: Vec<PowerTerm<f64>>,
}

impl OrbitCombination {
    pub fn evaluate(&self) -> SymmetricTensor<f64> {
        let rows = OrbitRows::new(self.dim, self.order);
        let mut reduced = vec![0.0; rows.parts.len()];
        for a in &self.atoms {
            for (r, c) in reduced.iter_mut().zip(rows.column(&a.vector)) {
                *r += a.weight * c;
            }
        }
        let index = MultisetIndex::new(self.dim, self.order);
        let values = index
            .multisets()
            .iter()
            .map(|alpha| reduced[rows.row_of(&crate::tensor::multiset::orbit_type(alpha))])
            .collect();
        SymmetricTensor::from_values(index, values).expect("matching index")
    }

    /// Spreads each atom uniformly over the distinct permutations of its vector.
    pub fn expand(&self) -> SignedPowerCombination<f64> {
        let mut out = SignedPowerCombination::new(self.dim, self.order);
        for a in &self.atoms {
            let perms = distinct_permutations(&a.vector);
            let w = a.weight / perms.len() as f64;
            for p in perms {
                out.push(w, p).expect("same dimension");
            }
        }
        out
    }

    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight.abs()).sum()
    }
}

/// The witness for the upper end of a [`NormBounds`]. All vectors have unit
/// norm in the ground space, so the cost is the sum of absolute weights.
#[derive(Debug, Clone, PartialEq)]
pub enum Primal {
    Powers(SignedPowerCombination<f64>),
    Orbits(OrbitCombination),
    Wedges(WedgeCombination),
}

impl Primal {
    pub fn evaluate(&self) -> SymmetricTensor<f64> {
        match self {
            Primal::Powers(c) => c.evaluate(),
            Primal::Orbits(c) => c.evaluate(),
            Primal::Wedges(c) => c.evaluate(),
        }
    }

    pub fn total_weight(&self) -> f64 {
        match self {
            Primal::Powers(c) => c.total_weight(),
            Primal::Orbits(c) => c.total_weight(),
            Primal::Wedges(c) => c.terms.iter().map(|t| t.weight.abs()).sum(),
        }
    }

    /// Power terms, expanding orbit atoms; `None` for wedge witnesses.
    pub fn powers(&self) -> Option<SignedPowerCombination<f64>> {
        match self {
            Primal::Powers(c) => Some(c.clone()),
            Primal::Orbits(c) => Some(c.expand()),
            Primal::Wedges(_) => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Primal::Powers(_) => "powers",
            Primal::Orbits(_) => "orbit_averaged_powers",
            Primal::Wedges(_) => "wedges",
        }
    }

    pub fn to_json(&self) -> Value {
        let term = |t: &PowerTerm<f64>| json!({"w": t.weight, "x": t.vector});
        match self {
            Primal::Powers(c) => Value::Array(c.terms().iter().map(term).collect()),
            Primal::Orbits(c) => Value::Array(c.atoms.iter().map(term).collect()),
            Primal::Wedges(c) => Value::Array(
                c.terms
                    .iter()
                    .map(|t| json!({"w": t.weight, "factors": t.factors}))
                    .collect(),
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormBounds {
    pub lower: f64,
    pub upper: f64,
    pub primal: Primal,
    /// Coefficients `L_α` of the dual functional `L(t) = Σ_α L_α t_α` over
    /// the stored multisets.
    pub dual: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Largest `|L(g)|` found by the last pricing round, before scaling.
    pub max_violation: f64,
}

impl NormBounds {
    fn exact(value: f64, primal: Primal, dual: Vec<f64>) -> Self {
        NormBounds {
            lower: value,
            upper: value,
            primal,
            dual,
            iterations: 0,
            converged: true,
            max_violation: 1.0,
        }
    }

    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }

    /// Whether `v` lies in `[lower − tol, upper + tol]`.
    pub fn contains(&self, v: f64, tol: f64) -> bool {
        self.lower - tol <= v && v <= self.upper + tol
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lower": self.lower,
            "upper": self.upper,
            "primal": self.primal.to_json(),
            "primal_kind": self.primal.kind(),
            "dual": self.dual,
            "iterations": self.iterations,
            "converged": self.converged,
        })
    }
}

/// `‖t‖_π`.
pub fn norm_pi(t: &SymmetricTensor<f64>, s: &SpaceDescriptor) -> Result<NormBounds> {
    s.check(t)?;
    match s.family {
        Family::L1 => Ok(entrywise_bounds(t)),
        Family::L2Dim2 => Ok(euclid2::trace_norm_bounds(t)),
    }
}

/// `‖t‖_{π,+}`; on `ℓ₁^m` it coincides with `‖t‖_π`.
pub fn norm_pip(t: &SymmetricTensor<f64>, s: &SpaceDescriptor, opts: &NormOptions) -> Result<NormBounds> {
    s.check(t)?;
    match s.family {
        Family::L1 => Ok(entrywise_bounds(t)),
        Family::L2Dim2 => euclid2::positive_wedge_lp(t, opts),
    }
}

/// `‖t‖_{π,s}`, over `ℓ₁^m` for `m ≤ 4`.
pub fn norm_pis(t: &SymmetricTensor<f64>, s: &SpaceDescriptor, opts: &NormOptions) -> Result<NormBounds> {
    s.check(t)?;
    match s.family {
        Family::L1 => {
            if t.dim() > 4 {
                return Err(Error::Unsupported(
                    "the signed generator set is limited to m ≤ 4".into(),
                ));
            }
            simplex_lp(t, true, opts)
        }
        Family::L2Dim2 => euclid2::circle_lp(t, euclid2::CircleArc::Full, opts),
    }
}

/// `‖t‖_{π,s,+}`.
pub fn norm_pisp(t: &SymmetricTensor<f64>, s: &SpaceDescriptor, opts: &NormOptions) -> Result<NormBounds> {
    s.check(t)?;
    match s.family {
        Family::L1 => simplex_lp(t, false, opts),
        Family::L2Dim2 => euclid2::circle_lp(t, euclid2::CircleArc::Quarter, opts),
    }
}

/// `e₁ ∨ … ∨ eₙ` in `ℓ₁ⁿ`.
pub fn basis_wedge(n: usize) -> Result<SymmetricTensor<f64>> {
    if n == 0 {
        return Err(invalid("order must be positive"));
    }
    let basis: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    wedge(&basis)
}

/// `κ(n) = ‖e₁∨…∨eₙ‖_{π,s,+}` over `ℓ₁ⁿ`.
pub fn kappa(n: usize, opts: &NormOptions) -> Result<NormBounds> {
    if n > 10 {
        return Err(Error::Unsupported(format!("κ({n}) is beyond the supported range n ≤ 10")));
    }
    let t = basis_wedge(n)?;
    norm_pisp(&t, &SpaceDescriptor::l1(n), opts)
}

fn entrywise_bounds(t: &SymmetricTensor<f64>) -> NormBounds {
    let index = t.index().clone();
    let mut terms = Vec::new();
    let mut dual = Vec::with_capacity(t.len());
    for (pos, (alpha, v)) in t.iter().enumerate() {
        let mult = index.multiplicity(pos) as f64;
        dual.push(if *v < 0.0 { -mult } else { mult });
        if *v != 0.0 {
            let factors = alpha
                .iter()
                .map(|&i| {
                    let mut e = vec![0.0; t.dim()];
                    e[i] = 1.0;
                    e
                })
                .collect();
            terms.push(WedgeTerm {
                weight: v * mult,
                factors,
            });
        }
    }
    let value = t.entrywise_l1();
    NormBounds::exact(
        value,
        Primal::Wedges(WedgeCombination {
            dim: t.dim(),
            order: t.order(),
            terms,
        }),
        dual,
    )
}

fn zero_bounds(t: &SymmetricTensor<f64>) -> NormBounds {
    NormBounds::exact(
        0.0,
        Primal::Powers(SignedPowerCombination::new(t.dim(), t.order())),
        vec![0.0; t.len()],
    )
}

fn simplex_lp(t: &SymmetricTensor<f64>, signed: bool, opts: &NormOptions) -> Result<NormBounds> {
    if t.max_abs() == 0.0 {
        return Ok(zero_bounds(t));
    }
    if !t.values().iter().all(|v| v.is_finite()) {
        return Err(invalid("tensor entries must be finite"));
    }
    let index = t.index().clone();
    let (rows, target) = choose_rows(t, signed, opts);
    let mut extra = Vec::new();
    if !rows.is_symmetric() {
        if let Some(x) = normalized_marginal(t, signed) {
            extra.push(x);
        }
    }
    let gens = SimplexGenerators::new(rows.clone(), index.clone(), signed, opts.grid()).with_seeds(extra);
    let res = colgen::run(&gens, &target, &opts.colgen())?;
    Ok(finish_simplex(t, &rows, &index, res))
}

/// The first-order marginal `Σ_{i₂…iₙ} t_{i i₂…iₙ}` scaled to unit `ℓ₁`
/// norm; for `t = x^{⊗n}` it is `±x/‖x‖₁`.
fn normalized_marginal(t: &SymmetricTensor<f64>, signed: bool) -> Option<Vec<f64>> {
    let n = t.order() as f64;
    let mut m = vec![0.0; t.dim()];
    for (pos, (alpha, v)) in t.iter().enumerate() {
        let words = t.index().multiplicity(pos) as f64;
        for &i in alpha {
            m[i] += v * words / n;
        }
    }
    let s: f64 = m.iter().map(|v| v.abs()).sum();
    if s == 0.0 || !s.is_finite() || (!signed && m.iter().any(|v| *v < 0.0)) {
        return None;
    }
    Some(m.into_iter().map(|v| v / s).collect())
}

fn choose_rows(t: &SymmetricTensor<f64>, signed: bool, opts: &NormOptions) -> (RowSpace, Vec<f64>) {
    if opts.use_symmetry && !signed && t.dim() >= 2 {
        let orbit = OrbitRows::new(t.dim(), t.order());
        if let Some(reduced) = orbit.reduce(t) {
            return (RowSpace::Orbits(orbit), reduced);
        }
    }
    (RowSpace::Full(t.index().clone()), t.values().to_vec())
}

fn finish_simplex(
    t: &SymmetricTensor<f64>,
    rows: &RowSpace,
    index: &Arc<MultisetIndex>,
    res: ColGenResult<Vec<f64>>,
) -> NormBounds {
    let atoms: Vec<PowerTerm<f64>> = res
        .atoms
        .into_iter()
        .map(|(w, x)| PowerTerm { weight: w, vector: x })
        .collect();
    let primal = if rows.is_symmetric() {
        Primal::Orbits(OrbitCombination {
            dim: t.dim(),
            order: t.order(),
            atoms,
        })
    } else {
        Primal::Powers(SignedPowerCombination::from_terms(t.dim(), t.order(), atoms).expect("same dimension"))
    };
    NormBounds {
        lower: res.lower,
        upper: res.upper,
        primal,
        dual: rows.full_functional(index, &res.dual),
        iterations: res.rounds,
        converged: res.converged,
        max_violation: res.max_violation,
    }
}

/// The bracket for `c_{s,s}^+(n, ℓ₁^m) = sup ψ(a,b)/(|a|+|b|)ⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CsspBracket {
    pub n: usize,
    pub lower: f64,
    pub upper: f64,
    /// `(a, b)` with `|a| + |b| = 1` attaining `lower`.
    pub maximizer: (f64, f64),
    /// The optimal decomposition of `(a, b)^{⊗n}` at the maximizer.
    pub decomposition: ChebDecomposition,
    pub cells: usize,
}

impl CsspBracket {
    pub fn to_norm_bounds(&self) -> NormBounds {
        NormBounds {
            lower: self.lower,
            upper: self.upper,
            primal: Primal::Powers(self.decomposition.merged()),
            dual: Vec::new(),
            iterations: self.cells,
            converged: true,
            max_violation: 1.0,
        }
    }
}

const MAX_CSSP_CELLS: usize = 1 << 20;

/// Maximizes `r(θ) = ψ(cos θ, −sin θ)/(cos θ + sin θ)ⁿ` on `[0, π/2]`, which
/// covers every sign-mixed direction (same-sign directions give ratio 1).
///
/// `lower` is the best sampled value. On a cell `[θ₀, θ₁]`, `ψ(a,−b)` is
/// increasing in `a, b ≥ 0` and `cos θ + sin θ` is concave, so
/// `ψ(cos θ₀, −sin θ₁) / min(den(θ₀), den(θ₁))` bounds `r`; cells whose
/// bound exceeds the incumbent are bisected until the bracket is tighter
/// than `1e-10` relative.
pub fn cssp_l1(n: usize, grid_size: usize) -> Result<CsspBracket> {
    if n == 0 {
        return Err(invalid("order must be positive"));
    }
    if n == 1 {
        return Ok(CsspBracket {
            n,
            lower: 1.0,
            upper: 1.0,
            maximizer: (1.0, 0.0),
            decomposition: optimal_decomposition_m2(1.0, 0.0, 1)?,
            cells: 0,
        });
    }
    let grid_size = grid_size.max(4);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let ratio = |th: f64| {
        let (a, b) = (th.cos().max(0.0), th.sin().max(0.0));
        psi(a, -b, n) / (a + b).powi(n as i32)
    };
    let cell_bound = |t0: f64, t1: f64| {
        let (a0, b0) = (t0.cos().max(0.0), t0.sin().max(0.0));
        let (a1, b1) = (t1.cos().max(0.0), t1.sin().max(0.0));
        psi(a0, -b1, n) / (a0 + b0).min(a1 + b1).powi(n as i32)
    };
    let mut best = (1.0, 0.0);
    let mut cells: Vec<(f64, f64)> = Vec::with_capacity(grid_size);
    for i in 0..=grid_size {
        let th = half_pi * i as f64 / grid_size as f64;
        let r = ratio(th);
        if r > best.0 {
            best = (r, th);
        }
        if i < grid_size {
            cells.push((th, half_pi * (i + 1) as f64 / grid_size as f64));
        }
    }
    let mut evaluated = cells.len();
    let mut upper = 1.0f64;
    for _ in 0..200 {
        let thresh = best.0 * (1.0 + 1e-10);
        let mut next = Vec::new();
        upper = thresh;
        for &(t0, t1) in &cells {
            let ub = cell_bound(t0, t1);
            if ub > thresh {
                let mid = 0.5 * (t0 + t1);
                let r = ratio(mid);
                if r > best.0 {
                    best = (r, mid);
                }
                next.push((t0, mid));
                next.push((mid, t1));
                upper = upper.max(ub);
            }
        }
        evaluated += next.len();
        if next.len() > MAX_CSSP_CELLS {
            break;
        }
        if next.is_empty() {
            upper = thresh.max(best.0);
            break;
        }
        cells = next;
    }
    let (a, b) = (best.1.cos(), -best.1.sin());
    let s = a.abs() + b.abs();
    let (a, b) = (a / s, b / s);
    Ok(CsspBracket {
        n,
        lower: best.0,
        upper: upper.max(best.0),
        maximizer: (a, b),
        decomposition: optimal_decomposition_m2(a, b, n)?,
        cells: evaluated,
    })
}

/// `κ(n)` together with `c_{s,s}^+(n, ℓ₁)` and the classical references.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarizationConstants {
    pub n: usize,
    pub space: SpaceDescriptor,
    pub kappa: NormBounds,
    pub cssp: NormBounds,
    /// `γ(n) = 2^{n−1}`.
    pub gamma_reference: f64,
    /// `nⁿ/n!`.
    pub classical_cs_lower: f64,
}

pub fn polarization_constants(n: usize, opts: &NormOptions) -> Result<PolarizationConstants> {
    let kappa = kappa(n, opts)?;
    let cssp = cssp_l1(n, 1024)?.to_norm_bounds();
    Ok(PolarizationConstants {
        n,
        space: SpaceDescriptor::l1(n),
        kappa,
        cssp,
        gamma_reference: 2f64.powi(n as i32 - 1),
        classical_cs_lower: (n as f64).powi(n as i32) / factorial(n) as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::power;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn kappa_two_is_three() {
        let b = kappa(2, &NormOptions::default()).unwrap();
        assert!(b.converged);
        assert!(close(b.lower, 3.0, 1e-7) && close(b.upper, 3.0, 1e-7), "{b:?}");
        let t = basis_wedge(2).unwrap();
        assert!(b.primal.evaluate().max_abs_diff(&t).unwrap() < 1e-9);
        // dual proportional to a + c − 6b
        let d = &b.dual;
        assert!(close(d[1] / d[0], -6.0, 1e-6) && close(d[2] / d[0], 1.0, 1e-9));
    }

    #[test]
    fn sign_mixed_power_over_l1_squared() {
        let t = power(&[1.0, -1.0], 2).unwrap();
        let b = norm_pisp(&t, &SpaceDescriptor::l1(2), &NormOptions::default()).unwrap();
        assert!(close(b.lower, 8.0, 1e-7) && close(b.upper, 8.0, 1e-7));
        let s = norm_pis(&t, &SpaceDescriptor::l1(2), &NormOptions::default()).unwrap();
        assert!(close(s.lower, 4.0, 1e-7) && close(s.upper, 4.0, 1e-7));
    }

    #[test]
    fn positive_power_has_single_term() {
        let x = [0.2, 0.5, 0.3];
        let t = power(&x, 3).unwrap();
        let b = norm_pisp(&t, &SpaceDescriptor::l1(3), &NormOptions::default()).unwrap();
        assert!(close(b.upper, 1.0, 1e-7) && close(b.lower, 1.0, 1e-7), "{b:?}");
    }

    #[test]
    fn entrywise_for_pi_and_pip() {
        let t = power(&[1.0, -1.0], 2).unwrap();
        let s = SpaceDescriptor::l1(2);
        assert_eq!(norm_pi(&t, &s).unwrap().upper, 4.0);
        let b = norm_pip(&t, &s, &NormOptions::default()).unwrap();
        assert_eq!(b.lower, 4.0);
        assert!(b.primal.evaluate().max_abs_diff(&t).unwrap() < 1e-15);
        let w = basis_wedge(2).unwrap();
        assert_eq!(norm_pi(&w, &s).unwrap().upper, 1.0);
        let l: f64 = w.apply_functional(&norm_pi(&w, &s).unwrap().dual).unwrap();
        assert_eq!(l, 1.0);
    }

    #[test]
    fn signed_norm_of_basis_wedge_beats_classical_bound() {
        let t = basis_wedge(2).unwrap();
        let b = norm_pis(&t, &SpaceDescriptor::l1(2), &NormOptions::default()).unwrap();
        assert!(b.lower >= 2.0 * (1.0 - 1e-7), "{b:?}");
    }

    #[test]
    fn cssp_brackets() {
        let c = cssp_l1(1, 64).unwrap();
        assert!(close(c.lower, 1.0, 1e-12) && close(c.upper, 1.0, 1e-9));
        let c = cssp_l1(2, 64).unwrap();
        assert!(close(c.lower, 2.0, 1e-12), "{c:?}");
        assert!(close(c.maximizer.0, 0.5, 1e-12) && close(c.maximizer.1, -0.5, 1e-12));
        let c = cssp_l1(5, 64).unwrap();
        assert!(close(c.lower, 16.0, 1e-9) && c.upper <= 16.0 * (1.0 + 1e-9));
    }

    #[test]
    fn rejects_mismatched_space() {
        let t = basis_wedge(3).unwrap();
        assert!(norm_pi(&t, &SpaceDescriptor::l1(2)).is_err());
        assert!(norm_pi(&t, &SpaceDescriptor::l2_dim2()).is_err());
    }
}
