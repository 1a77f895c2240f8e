//! Randomized property suites shared by the `properties` and `acceptance`
//! test targets. Every suite runs a deterministic proptest runner.

#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use tensornorm::chebyshev::psi;
use tensornorm::euclid2::{half_circle_lp, matrix_tensor, norms_ab, positive_wedge_lp, trace_norm_2x2, UVWCoords};
use tensornorm::exchangeable::{lemma_LL_check, load_distribution, represent, uv_bound, verify_representation, RepresentMethod};
use tensornorm::norms::{norm_pi, norm_pip, norm_pis, norm_pisp, NormBounds, NormOptions, SpaceDescriptor};
use tensornorm::tensor::{polarization_expand, pushforward, vandermonde_decomposition, MultisetIndex};
use tensornorm::{SignedPowerCombination, SymmetricTensor};

pub const CASES: u32 = 500;

pub fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

/// Runs `test` on `cases` inputs drawn from `strategy`; `Ok` carries the case count.
pub fn check<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<u32, String> {
    runner(cases)
        .run(&strategy, test)
        .map(|_| cases)
        .map_err(|e| e.to_string())
}

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

fn lib<T>(r: tensornorm::Result<T>) -> Result<T, TestCaseError> {
    r.map_err(|e| fail(e.to_string()))
}

/// `(1/n!) Σ_σ Π_i v_{σ(i)}[α_i]` by brute force over permutations.
fn symmetrized_entry(vectors: &[Vec<f64>], alpha: &[usize]) -> f64 {
    fn permute(k: usize, used: &mut Vec<bool>, vectors: &[Vec<f64>], alpha: &[usize], acc: f64, sum: &mut f64, cnt: &mut u64) {
        if k == alpha.len() {
            *sum += acc;
            *cnt += 1;
            return;
        }
        for i in 0..vectors.len() {
            if !used[i] {
                used[i] = true;
                permute(k + 1, used, vectors, alpha, acc * vectors[i][alpha[k]], sum, cnt);
                used[i] = false;
            }
        }
    }
    let (mut sum, mut cnt) = (0.0, 0);
    permute(0, &mut vec![false; vectors.len()], vectors, alpha, 1.0, &mut sum, &mut cnt);
    sum / cnt as f64
}

fn vectors_strategy() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1usize..=3, 1usize..=4).prop_flat_map(|(m, n)| prop::collection::vec(prop::collection::vec(-2.0f64..2.0, m), n))
}

/// Polarization: the signed power expansion evaluates to the symmetrized product.
pub fn polarization_reconstruction(cases: u32) -> Result<u32, String> {
    check(cases, vectors_strategy(), |vectors| {
        let comb = lib(polarization_expand(&vectors))?;
        let t = comb.evaluate();
        let scale: f64 = vectors.iter().map(|v| v.iter().map(|x| x.abs()).sum::<f64>()).product::<f64>().max(1.0);
        for (alpha, got) in t.iter() {
            let want = symmetrized_entry(&vectors, alpha);
            prop_assert!((got - want).abs() <= 1e-12 * scale, "entry {alpha:?}: {got} vs {want}");
        }
        Ok(())
    })
}

/// Vandermonde: non-negative vectors reconstruct `x^{⊗n}` and the cost obeys the bound.
pub fn vandermonde_reconstruction(cases: u32) -> Result<u32, String> {
    let strategy = (1usize..=4, 1usize..=5).prop_flat_map(|(m, n)| (prop::collection::vec(-2.0f64..2.0, m), Just(n)));
    check(cases, strategy, |(x, n)| {
        let v = lib(vandermonde_decomposition(&x, n, None))?;
        prop_assert!(v.combination.all_vectors_nonnegative());
        let norm1: f64 = x.iter().map(|a| a.abs()).sum();
        let scale = v.bound * norm1.powi(n as i32);
        let t = v.combination.evaluate();
        for (alpha, got) in t.iter() {
            let want: f64 = alpha.iter().map(|&i| x[i]).product();
            prop_assert!((got - want).abs() <= 1e-9 * scale.max(1.0), "entry {alpha:?}: {got} vs {want}");
        }
        let cost = v.combination.cost_with(|u| u.iter().map(|a| a.abs()).sum());
        prop_assert!(cost <= scale * (1.0 + 1e-9) + 1e-12, "cost {cost} above bound {scale}");
        Ok(())
    })
}

fn column_stochastic(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(0.01f64..1.0, rows), cols).prop_map(move |columns| {
        (0..rows)
            .map(|r| columns.iter().map(|c| c[r] / c.iter().sum::<f64>()).collect())
            .collect()
    })
}

fn positive_combination(dim: usize) -> impl Strategy<Value = (Vec<(f64, Vec<f64>)>, usize)> {
    (
        prop::collection::vec((-1.0f64..1.0, prop::collection::vec(0.0f64..1.0, dim)), 1..=4),
        2usize..=3,
    )
}

/// Pushing a decomposition through a column-stochastic map keeps its cost and
/// maps the tensor by `M^{⊗n}`; the norm of the image never exceeds the norm.
pub fn pushforward_contraction(cases: u32) -> Result<u32, String> {
    let strategy = (positive_combination(3), column_stochastic(2, 3));
    let opts = NormOptions::default();
    check(cases, strategy, |((terms, n), m)| {
        let mut comb = SignedPowerCombination::new(3, n);
        for (w, v) in terms {
            lib(comb.push(w, v))?;
        }
        let t = comb.evaluate();
        let pushed = lib(pushforward(&m, &comb))?;
        let image = lib(t.map_linear(&m))?;
        prop_assert!(lib(pushed.evaluate().max_abs_diff(&image))? <= 1e-12);
        let l1 = |u: &[f64]| u.iter().map(|a| a.abs()).sum::<f64>();
        prop_assert!((pushed.cost_with(l1) - comb.cost_with(l1)).abs() <= 1e-12 * comb.cost_with(l1).max(1.0));
        let before = lib(norm_pisp(&t, &SpaceDescriptor::l1(3), &opts))?;
        let after = lib(norm_pisp(&image, &SpaceDescriptor::l1(2), &opts))?;
        prop_assert!(
            after.lower <= before.upper * (1.0 + 1e-6) + 1e-12,
            "image norm {} above {}",
            after.lower,
            before.upper
        );
        Ok(())
    })
}

fn random_tensor(dim: usize, order: usize) -> impl Strategy<Value = SymmetricTensor<f64>> {
    let len = MultisetIndex::new(dim, order).len();
    prop::collection::vec(-1.0f64..1.0, len).prop_map(move |values| {
        SymmetricTensor::from_values(MultisetIndex::new(dim, order), values).expect("matching length")
    })
}

fn le(a: &NormBounds, b: &NormBounds) -> bool {
    a.lower <= b.upper * (1.0 + 1e-6) + 1e-9
}

/// `π ≤ (π,+) ≤ (π,s,+)` and `π ≤ (π,s) ≤ (π,s,+)` on `ℓ₁²`, `ℓ₁³` and `ℓ₂²`.
pub fn norm_chain(cases: u32) -> Result<u32, String> {
    let strategy = prop_oneof![
        (Just(0usize), random_tensor(2, 2)),
        (Just(0usize), random_tensor(2, 3)),
        (Just(0usize), random_tensor(3, 2)),
        (Just(1usize), random_tensor(2, 2)),
    ];
    let opts = NormOptions::default();
    check(cases, strategy, |(space, t)| {
        let s = if space == 0 { SpaceDescriptor::l1(t.dim()) } else { SpaceDescriptor::l2_dim2() };
        let pi = lib(norm_pi(&t, &s))?;
        let pip = lib(norm_pip(&t, &s, &opts))?;
        let pis = lib(norm_pis(&t, &s, &opts))?;
        let pisp = lib(norm_pisp(&t, &s, &opts))?;
        for (name, a, b) in [("pi<=pip", &pi, &pip), ("pip<=pisp", &pip, &pisp), ("pi<=pis", &pi, &pis), ("pis<=pisp", &pis, &pisp)] {
            prop_assert!(le(a, b), "{name}: [{}, {}] vs [{}, {}]", a.lower, a.upper, b.lower, b.upper);
        }
        for (name, b) in [("pi", &pi), ("pip", &pip), ("pis", &pis), ("pisp", &pisp)] {
            prop_assert!(
                b.lower <= b.upper * (1.0 + 1e-9) + 1e-12,
                "{name} bracket inverted: [{}, {}] for {:?}",
                b.lower,
                b.upper,
                t.values()
            );
        }
        Ok(())
    })
}

/// `‖c t‖ = |c| ‖t‖` for the LP norms and `ψ(ca, cb) = |c|ⁿ ψ(a, b)`.
pub fn homogeneity_and_scaling(cases: u32) -> Result<u32, String> {
    let scalar = prop_oneof![-3.0f64..-0.1, 0.1f64..3.0];
    let strategy = (random_tensor(2, 2), scalar, -2.0f64..2.0, -2.0f64..2.0, 1usize..=8);
    let opts = NormOptions::default();
    check(cases, strategy, |(t, c, a, b, n)| {
        let s = SpaceDescriptor::l1(2);
        let base = lib(norm_pisp(&t, &s, &opts))?;
        let scaled = lib(norm_pisp(&t.scale(&c), &s, &opts))?;
        let k = c.abs();
        prop_assert!(scaled.lower <= k * base.upper * (1.0 + 1e-6) + 1e-9);
        prop_assert!(k * base.lower <= scaled.upper * (1.0 + 1e-6) + 1e-9);
        let pi = lib(norm_pi(&t, &s))?.upper;
        let pi_scaled = lib(norm_pi(&t.scale(&c), &s))?.upper;
        prop_assert!((pi_scaled - k * pi).abs() <= 1e-12 * pi.max(1.0));
        let p = psi(a, b, n);
        prop_assert!((psi(c * a, c * b, n) - k.powi(n as i32) * p).abs() <= 1e-12 * (k.powi(n as i32) * p).max(1e-300));
        prop_assert!((psi(b, a, n) - p).abs() <= 1e-12 * p.max(1e-300));
        prop_assert!(p >= (a.abs() + b.abs()).powi(n as i32) * (1.0 - 1e-12));
        Ok(())
    })
}

fn distribution_strategy() -> impl Strategy<Value = (usize, Vec<(Vec<usize>, f64)>)> {
    (2usize..=3, 1usize..=3).prop_flat_map(|(m, n)| {
        let words = prop::collection::vec((prop::collection::vec(0..m, n), 0.05f64..1.0), 1..=5);
        (Just(m), words).prop_map(|(m, words)| {
            let total: f64 = words.iter().map(|w| w.1).sum();
            (m, words.into_iter().map(|(x, p)| (x, p / total)).collect())
        })
    })
}

/// The constructive signed de Finetti representation reproduces the law with
/// unit mass and total variation at most the improved bound.
pub fn exchangeable_constructive(cases: u32) -> Result<u32, String> {
    let opts = NormOptions::default();
    check(cases, distribution_strategy(), |(m, words)| {
        let d = lib(load_distribution(m, &words))?;
        let rep = lib(represent(&d, RepresentMethod::Constructive, &opts))?;
        let report = lib(verify_representation(&d, &rep))?;
        prop_assert!(report.residual <= 1e-9, "residual {}", report.residual);
        prop_assert!(report.mass_defect.abs() <= 1e-9);
        prop_assert!(rep.total_variation >= 1.0 - 1e-9);
        prop_assert!(rep.total_variation <= lib(uv_bound(d.order))? + 1e-6);
        for a in &rep.atoms {
            prop_assert!(a.nu.iter().all(|v| *v >= 0.0));
            prop_assert!((a.nu.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        }
        Ok(())
    })
}

/// The closed forms for `[[a, b], [b, a]]` lie in the gallery LP brackets,
/// and the trace norm is below both LP norms for random matrices.
pub fn euclid2_gallery(cases: u32) -> Result<u32, String> {
    let strategy = (-2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0);
    let opts = NormOptions::default();
    check(cases, strategy, |(a, b, c)| {
        let closed = norms_ab(a, b);
        let ab = [[a, b], [b, a]];
        let pisp = lib(half_circle_lp(&ab, &opts))?;
        let pip = lib(positive_wedge_lp(&matrix_tensor(&ab), &opts))?;
        let tol = 1e-6 * closed.pisp.max(1.0);
        prop_assert!(pisp.contains(closed.pisp, tol), "pisp {} not in [{}, {}]", closed.pisp, pisp.lower, pisp.upper);
        prop_assert!(pip.contains(closed.pip, tol), "pip {} not in [{}, {}]", closed.pip, pip.lower, pip.upper);
        prop_assert!((trace_norm_2x2(&ab) - closed.pi).abs() <= 1e-12 * closed.pi.max(1.0));

        let general = [[a, b], [b, c]];
        let pi = trace_norm_2x2(&general);
        let gp = lib(half_circle_lp(&general, &opts))?;
        let gw = lib(positive_wedge_lp(&matrix_tensor(&general), &opts))?;
        prop_assert!(pi <= gw.upper * (1.0 + 1e-9) + 1e-12);
        prop_assert!(gw.lower <= gp.upper * (1.0 + 1e-6) + 1e-9);
        prop_assert!(gp.upper <= 3.0 * pi * (1.0 + 1e-6) + 1e-9);
        let uvw = UVWCoords::from_matrix(&general);
        prop_assert!((uvw.trace_norm() - pi).abs() <= 1e-12 * pi.max(1.0));
        Ok(())
    })
}

/// The logarithmic inequality behind the extendibility lower bound.
pub fn lemma_slack(cases: u32) -> Result<u32, String> {
    let strategy = (prop::collection::vec(1usize..=12, 1..=6), 0.0f64..=1.0);
    check(cases, strategy, |(parts, t)| {
        let slack = lib(lemma_LL_check(&parts, t))?;
        prop_assert!(slack >= -1e-12, "slack {slack} for {parts:?}, t = {t}");
        Ok(())
    })
}

pub type Suite = (&'static str, fn(u32) -> Result<u32, String>);

pub const SUITES: [Suite; 8] = [
    ("polarization reconstruction", polarization_reconstruction),
    ("vandermonde reconstruction with positivity", vandermonde_reconstruction),
    ("pushforward contraction", pushforward_contraction),
    ("norm chain", norm_chain),
    ("homogeneity and scaling", homogeneity_and_scaling),
    ("constructive exchangeable representation", exchangeable_constructive),
    ("euclid2 gallery closed forms", euclid2_gallery),
    ("lemma slack", lemma_slack),
];
