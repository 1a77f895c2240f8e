//! End-to-end acceptance checks, one PASS/FAIL line each.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tensornorm::chebyshev::{
    binary_lower_bound, binary_lower_bound_max, cheb_coefficients, optimal_decomposition_m2, psi, psi_exact,
};
use tensornorm::euclid2::{
    constants_l2, half_circle_lp, matrix_tensor, norms_ab, positive_wedge_lp, trace_norm_2x2,
};
use tensornorm::exchangeable::{
    kappa_nN_bounds, lemma_LL_check, load_distribution, represent, uv_bound, uv_bound_exact,
    verify_representation, RepresentMethod,
};
use tensornorm::norms::{cssp_l1, kappa, norm_pisp, NormOptions, SpaceDescriptor};
use tensornorm::tensor::power;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: tensornorm::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn within_time(started: Instant, limit: Duration) -> Result<Duration, String> {
    let spent = started.elapsed();
    ensure(spent <= limit, || format!("took {spent:.2?}, limit {limit:?}"))?;
    Ok(spent)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn kappa_two() -> Outcome {
    let started = Instant::now();
    let b = lib(kappa(2, &NormOptions::default()))?;
    let spent = within_time(started, Duration::from_secs(1))?;
    ensure(b.lower >= 3.0 - 1e-6 && b.upper <= 3.0 + 1e-6, || format!("bracket [{}, {}]", b.lower, b.upper))?;
    let atoms = b.primal.powers().ok_or("no power witness")?.merged();
    let expected = [(-0.5, [1.0, 0.0]), (-0.5, [0.0, 1.0]), (2.0, [0.5, 0.5])];
    ensure(atoms.len() == 3, || format!("{} atoms", atoms.len()))?;
    for (w, x) in expected {
        let hit = atoms.terms().iter().any(|t| {
            (t.weight - w).abs() <= 1e-6 && t.vector.iter().zip(x).all(|(a, b)| (a - b).abs() <= 1e-6)
        });
        ensure(hit, || format!("atom {w}·{x:?} missing"))?;
    }
    Ok(format!("bracket [{}, {}], witness -½e₁² - ½e₂² + 2(½,½)², {spent:.2?}", b.lower, b.upper))
}

fn psi_against_lp() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let opts = NormOptions {
        tol: 1e-10,
        ..NormOptions::default()
    };
    let mut worst_gap: f64 = 0.0;
    for n in 1..=6 {
        for _ in 0..50 {
            let a: f64 = rng.gen_range(1e-3..1.0);
            let b: f64 = -rng.gen_range(1e-3..1.0);
            let want = psi(a, b, n);
            let t = lib(power(&[a, b], n))?;
            let br = lib(norm_pisp(&t, &SpaceDescriptor::l1(2), &opts))?;
            ensure(br.contains(want, 1e-12 * want), || {
                format!("n={n}, (a,b)=({a},{b}): psi {want} outside [{}, {}]", br.lower, br.upper)
            })?;
            ensure(br.gap() <= 1e-5, || format!("n={n}: gap {}", br.gap()))?;
            worst_gap = worst_gap.max(br.gap());
        }
    }
    let spent = within_time(started, Duration::from_secs(30))?;
    Ok(format!("300 brackets contain psi, widest gap {worst_gap:.1e}, {spent:.2?}"))
}

fn gamma_values() -> Outcome {
    let started = Instant::now();
    let mut widest: f64 = 0.0;
    for n in 1..=8usize {
        let b = lib(cssp_l1(n, 1024))?;
        let want = 2f64.powi(n as i32 - 1);
        ensure(b.lower - 1e-6 <= want && want <= b.upper + 1e-6, || {
            format!("n={n}: {want} outside [{}, {}]", b.lower, b.upper)
        })?;
        ensure(b.upper - b.lower <= 1e-6, || format!("n={n}: wide bracket"))?;
        let at_antipode = psi(0.5, -0.5, n);
        ensure(at_antipode >= b.lower - 1e-6, || format!("n={n}: a=-b gives {at_antipode} < {}", b.lower))?;
        if n >= 2 {
            let (a, bb) = b.maximizer;
            ensure((a + bb).abs() <= 1e-6, || format!("n={n}: maximizer ({a}, {bb})"))?;
        }
        widest = widest.max(b.upper - b.lower);
    }
    let spent = within_time(started, Duration::from_secs(10))?;
    Ok(format!("n = 1..8 brackets contain 2^(n-1), widest {widest:.1e}, maximizer a = -b, {spent:.2?}"))
}

fn chebyshev_exact() -> Outcome {
    let one = BigRational::one();
    for n in 1..=10usize {
        let exact = psi_exact(&one, &-one.clone(), n);
        let want = BigRational::from_integer(num_traits::pow(BigInt::from(2), 2 * n - 1));
        ensure(exact == want, || format!("n={n}: psi_exact = {exact}"))?;
        let d = lib(optimal_decomposition_m2(1.0, -1.0, n))?;
        let target = lib(power(&[1.0, -1.0], n))?;
        let residual = lib(d.merged().evaluate().max_abs_diff(&target))?;
        ensure(residual <= 1e-10, || format!("n={n}: residual {residual}"))?;
        let tv_want = 2f64.powi(2 * n as i32 - 1);
        ensure((d.total_variation - tv_want).abs() <= 1e-12 * tv_want, || {
            format!("n={n}: TV {} vs {tv_want}", d.total_variation)
        })?;
        let tv_terms: f64 = d.coefficients.iter().map(|c| c.abs()).sum();
        ensure((tv_terms - tv_want).abs() <= 1e-9 * tv_want, || format!("n={n}: Σ|c| {tv_terms}"))?;
    }
    Ok("psi(1,-1,n) = 2^(2n-1) exactly for n ≤ 10, decompositions reconstruct with TV 2^(2n-1)".into())
}

fn interpolation_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for n in 1..=8usize {
        for _ in 0..20 {
            let a: f64 = rng.gen_range(0.01..1.0);
            let mut b: f64 = rng.gen_range(0.01..1.0);
            if (a - b).abs() < 1e-3 {
                b += 0.01;
            }
            let c = lib(cheb_coefficients(a, b, n))?;
            let sum: f64 = c.iter().sum();
            let scale = c.iter().map(|v| v.abs()).sum::<f64>().max(1.0);
            ensure((sum - 1.0).abs() <= 1e-9 * scale, || format!("n={n}: Σc = {sum}, Σ|c| = {scale:e}"))?;
            for w in c.windows(2) {
                ensure(w[0] * w[1] < 0.0, || format!("n={n}, (a,b)=({a},{b}): signs do not alternate: {c:?}"))?;
            }
            let lhs: f64 = c.iter().map(|v| v.abs()).sum::<f64>() * (a - b).abs().powi(n as i32);
            let rhs = psi(a, -b, n);
            let rel = (lhs - rhs).abs() / rhs;
            ensure(rel <= 1e-9, || format!("n={n}: Σ|c|(a-b)^n = {lhs} vs psi {rhs}"))?;
            worst = worst.max(rel);
        }
    }
    Ok(format!("160 cases: Σc = 1 relative to Σ|c|, alternating signs, Σ|c|·|a-b|^n = psi (worst rel {worst:.1e})"))
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn uv_bounds() -> Outcome {
    ensure(lib(uv_bound_exact(2))? == rat(3, 1), || "uv_bound(2) != 3".into())?;
    for n in 1..=12usize {
        let classical = BigRational::new(num_traits::pow(BigInt::from(n), n), factorial(n));
        let crude = &classical * BigRational::from_integer(num_traits::pow(BigInt::from(2), n - 1));
        let uv = lib(uv_bound_exact(n))?;
        ensure(classical <= uv && uv <= crude, || format!("n={n}: {uv} outside [{classical}, {crude}]"))?;
    }
    Ok(format!("uv_bound(2) = 3, n^n/n! ≤ uv_bound(n) ≤ 2^(n-1) n^n/n! for n ≤ 12 (uv_bound(12) ≈ {:.6e})", lib(uv_bound(12))?))
}

fn binary_bounds() -> Outcome {
    for (n, want) in [(2, rat(3, 1)), (3, rat(5, 1)), (4, rat(35, 3))] {
        let got = binary_lower_bound_max(n);
        ensure(got == want, || format!("n={n}: max bound {got}"))?;
    }
    let opts = NormOptions::default();
    let mut checked = 0;
    for n in 1..=4usize {
        for j in 0..=n {
            let mut word = vec![0usize; n - j];
            word.resize(n, 1);
            let d = lib(load_distribution(2, &[(word, 1.0)]))?;
            let b = lib(norm_pisp(&d.tensor, &SpaceDescriptor::l1(2), &opts))?;
            let bound = lib(binary_lower_bound(n, j))?;
            let bound_f = bound.numer().to_string().parse::<f64>().unwrap() / bound.denom().to_string().parse::<f64>().unwrap();
            ensure(b.lower >= bound_f - 1e-7, || format!("n={n}, j={j}: LP lower {} below {bound}", b.lower))?;
            checked += 1;
        }
    }
    Ok(format!("max bounds 3, 5, 35/3; {checked} binary laws have LP norm ≥ bound"))
}

fn random_distribution(rng: &mut ChaCha8Rng) -> (usize, Vec<(Vec<usize>, f64)>) {
    let m = rng.gen_range(2..=3usize);
    let n = rng.gen_range(1..=4usize);
    let k = rng.gen_range(1..=6usize);
    let mut words: Vec<(Vec<usize>, f64)> =
        (0..k).map(|_| ((0..n).map(|_| rng.gen_range(0..m)).collect(), rng.gen_range(0.05..1.0))).collect();
    let total: f64 = words.iter().map(|w| w.1).sum();
    words.iter_mut().for_each(|w| w.1 /= total);
    (m, words)
}

fn de_finetti() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let opts = NormOptions::default();
    let mut worst_residual: f64 = 0.0;
    for case in 0..100 {
        let (m, words) = random_distribution(&mut rng);
        let d = lib(load_distribution(m, &words))?;
        let lp = lib(represent(&d, RepresentMethod::Lp, &opts))?;
        let constructive = lib(represent(&d, RepresentMethod::Constructive, &opts))?;
        let r = lib(verify_representation(&d, &lp))?;
        let uv = lib(uv_bound(d.order))?;
        ensure(r.residual <= 1e-8, || format!("case {case}: residual {}", r.residual))?;
        ensure(r.mass_defect.abs() <= 1e-8, || format!("case {case}: mass defect {}", r.mass_defect))?;
        ensure(lp.total_variation <= uv + 1e-6, || format!("case {case}: TV {} above {uv}", lp.total_variation))?;
        ensure(lp.total_variation <= constructive.total_variation + 1e-6, || {
            format!("case {case}: TV(lp) {} above TV(constructive) {}", lp.total_variation, constructive.total_variation)
        })?;
        worst_residual = worst_residual.max(r.residual);
    }
    let spent = within_time(started, Duration::from_secs(120))?;
    Ok(format!("100 laws: residual ≤ {worst_residual:.1e}, unit mass, TV within bounds, {spent:.2?}"))
}

fn extendibility() -> Outcome {
    let opts = NormOptions::default();
    let mut values = Vec::new();
    for big_n in 2..=5usize {
        let b = lib(kappa_nN_bounds(2, big_n, true, &opts))?;
        let lp = b.lp_value.as_ref().ok_or("no exact value")?;
        ensure(lp.converged, || format!("N={big_n}: not converged"))?;
        ensure(b.lower - 1e-7 <= lp.lower && lp.upper <= b.upper + 1e-7, || {
            format!("N={big_n}: exact [{}, {}] outside [{}, {}]", lp.lower, lp.upper, b.lower, b.upper)
        })?;
        if big_n == 3 {
            ensure((b.upper - 3.0).abs() <= 1e-12, || format!("upper at N=3 is {}", b.upper))?;
        }
        values.push((lp.lower, lp.upper));
    }
    for (k, w) in values.windows(2).enumerate() {
        ensure(w[1].0 <= w[0].1 + 1e-7, || format!("not decreasing at N={}", k + 3))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut min_slack = f64::INFINITY;
    for _ in 0..1000 {
        let parts: Vec<usize> = (0..rng.gen_range(1..=6)).map(|_| rng.gen_range(1..=15)).collect();
        let t: f64 = rng.gen_range(0.0..=1.0);
        min_slack = min_slack.min(lib(lemma_LL_check(&parts, t))?);
    }
    ensure(min_slack >= -1e-12, || format!("lemma slack {min_slack}"))?;
    let shown: Vec<String> = values.iter().map(|v| format!("{:.6}", v.1)).collect();
    Ok(format!("kappa(2,N) for N=2..5 = [{}] inside bounds and decreasing; min lemma slack {min_slack:.2e}", shown.join(", ")))
}

fn euclid2_gallery() -> Outcome {
    let opts = NormOptions::default();
    for (a, b, want) in [(0.0, 1.0, [2.0, 2.0, 4.0]), (1.0, -1.0, [2.0, 4.0, 6.0])] {
        let m = [[a, b], [b, a]];
        let closed = norms_ab(a, b);
        ensure([closed.pi, closed.pip, closed.pisp] == want, || format!("closed forms for ({a},{b})"))?;
        let pi = trace_norm_2x2(&m);
        let pip = lib(positive_wedge_lp(&matrix_tensor(&m), &opts))?;
        let pisp = lib(half_circle_lp(&m, &opts))?;
        ensure((pi - want[0]).abs() <= 1e-12, || format!("trace norm {pi}"))?;
        ensure(pip.contains(want[1], 1e-6) && pip.gap() <= 1e-6, || format!("(π,+) bracket [{}, {}]", pip.lower, pip.upper))?;
        ensure(pisp.contains(want[2], 1e-6) && pisp.gap() <= 1e-6, || format!("(π,s,+) bracket [{}, {}]", pisp.lower, pisp.upper))?;
    }
    let swap = lib(half_circle_lp(&[[0.0, 1.0], [1.0, 0.0]], &opts))?;
    let atoms = swap.primal.powers().ok_or("no witness")?.merged();
    let q = std::f64::consts::FRAC_PI_4;
    let expected = [(2.0, [q.cos(), q.sin()]), (-1.0, [1.0, 0.0]), (-1.0, [0.0, 1.0])];
    let significant: Vec<_> = atoms.terms().iter().filter(|t| t.weight.abs() > 1e-6).collect();
    ensure(significant.len() == 3, || format!("{} atoms", significant.len()))?;
    for (w, x) in expected {
        let hit = significant.iter().any(|t| {
            (t.weight - w).abs() <= 1e-6 && t.vector.iter().zip(x).all(|(p, r)| (p - r).abs() <= 1e-6)
        });
        ensure(hit, || format!("witness atom {w}·{x:?} missing"))?;
    }
    let c = lib(constants_l2(24, &opts))?;
    ensure(c.csp_check.straddles(1e-6) && c.csp_check.value == 3.0, || format!("csp check {:?}", c.csp_check))?;
    ensure(c.cssp == 3.0, || "cssp".into())?;
    ensure(c.cpsp_check.straddles(1e-6) && c.cpsp_check.value == 2.0, || format!("cpsp check {:?}", c.cpsp_check))?;
    Ok(format!(
        "(2,2,4) and (2,4,6) reproduced, witness 2δ(π/4) - δ(0) - δ(π/2), constants 3 ∈ [{:.9}, {:.9}], 2 ∈ [{:.9}, {:.9}]",
        c.csp_check.lower, c.csp_check.upper, c.cpsp_check.lower, c.cpsp_check.upper
    ))
}

fn property_suites() -> Outcome {
    let started = Instant::now();
    let mut total = 0;
    for (name, suite) in common::SUITES {
        total += suite(common::CASES).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!("{} suites, {total} cases, zero failures, {:.2?}", common::SUITES.len(), started.elapsed()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("kappa(2) = 3", kappa_two),
        ("psi closed form inside LP brackets", psi_against_lp),
        ("gamma(n) = 2^(n-1)", gamma_values),
        ("psi(1,-1,n) exact and Chebyshev reconstruction", chebyshev_exact),
        ("interpolation identities", interpolation_identities),
        ("uv_bound values", uv_bounds),
        ("binary lower bounds", binary_bounds),
        ("signed de Finetti pipeline", de_finetti),
        ("extendibility bounds", extendibility),
        ("euclidean plane gallery", euclid2_gallery),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
