#![allow(non_snake_case)]

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use super::ExchangeableDistribution;
use crate::chebyshev::binary_lower_bound_max;
use crate::error::{invalid, Result};
use crate::format::number;
use crate::norms::{norm_pisp, NormBounds, NormOptions, SpaceDescriptor};
use crate::tensor::multiset::{factorial, partitions};
use crate::tensor::SymmetricTensor;

fn big(n: usize) -> BigInt {
    BigInt::from(n)
}

/// The improved upper bound on `κ(n)` as an exact rational.
///
/// `(√k ± √(n−k))^{2n} = (n ± 2√(k(n−k)))ⁿ`, and the two signs together keep
/// only the even powers of the root, so the sum is an integer.
pub fn uv_bound_exact(n: usize) -> Result<BigRational> {
    if n == 0 {
        return Err(invalid("order must be positive"));
    }
    let mut total = BigInt::zero();
    for k in 0..=n {
        let q = big(k * (n - k));
        let mut pair = BigInt::zero();
        for i in 0..=n / 2 {
            pair += binomial(big(n), big(2 * i)) * num_traits::pow(big(n), n - 2 * i) * num_traits::pow(BigInt::from(4) * &q, i);
        }
        total += binomial(big(n), big(k)) * pair * 2;
    }
    let mut den = num_traits::pow(BigInt::from(2), n + 1);
    for j in 2..=n {
        den *= big(j);
    }
    Ok(BigRational::new(total, den))
}

pub fn uv_bound(n: usize) -> Result<f64> {
    Ok(uv_bound_exact(n)?.to_f64().unwrap_or(f64::INFINITY))
}

fn classical_lower(n: usize) -> f64 {
    (n as f64).powi(n as i32) / factorial(n) as f64
}

fn crude_upper(n: usize) -> f64 {
    2f64.powi(n as i32 - 1) * classical_lower(n)
}

#[derive(Debug, Clone, PartialEq)]
pub struct KappaBounds {
    pub n: usize,
    pub lower: f64,
    pub uv_upper: f64,
    pub crude_upper: f64,
}

impl KappaBounds {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "lower": number(self.lower),
            "uv_upper": number(self.uv_upper),
            "crude_upper": number(self.crude_upper),
        })
    }
}

pub fn kappa_bounds(n: usize) -> Result<KappaBounds> {
    let uv = uv_bound(n)?;
    let binary = binary_lower_bound_max(n).to_f64().unwrap_or(0.0);
    Ok(KappaBounds {
        n,
        lower: classical_lower(n).max(binary),
        uv_upper: uv,
        crude_upper: crude_upper(n),
    })
}

/// `n` draws without replacement from `N` states.
pub fn chi_nN(n: usize, N: usize) -> Result<ExchangeableDistribution> {
    if n == 0 || n > N {
        return Err(invalid(format!("need 1 ≤ n ≤ N, got n = {n}, N = {N}")));
    }
    // (N−n)!/N! without overflow
    let value = 1.0 / ((N - n + 1)..=N).map(|v| v as f64).product::<f64>();
    let t = SymmetricTensor::<f64>::zeros(N, n)?;
    let values = t
        .index()
        .multisets()
        .iter()
        .map(|alpha| {
            if alpha.windows(2).all(|w| w[0] < w[1]) {
                value
            } else {
                0.0
            }
        })
        .collect();
    ExchangeableDistribution::from_tensor(SymmetricTensor::from_values(t.index().clone(), values)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtendibilityBounds {
    pub n: usize,
    pub N: usize,
    pub m: Option<usize>,
    pub lower: f64,
    pub upper: f64,
    /// Whether the extendibility estimate applied; otherwise `upper` is the
    /// crude bound on `κ(n)`.
    pub upper_applicable: bool,
    pub lp_value: Option<NormBounds>,
}

impl ExtendibilityBounds {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "N": self.N,
            "m": self.m,
            "lower": number(self.lower),
            "upper": number(self.upper),
            "upper_applicable": self.upper_applicable,
            "exact": self.lp_value.as_ref().map(|b| json!({
                "lower": number(b.lower),
                "upper": number(b.upper),
                "converged": b.converged,
            })),
        })
    }

    pub fn csv_header() -> [&'static str; 8] {
        ["n", "N", "m", "lower", "upper", "exact_lower", "exact_upper", "converged"]
    }

    /// Fields in the order of [`Self::csv_header`]; absent values are empty.
    pub fn csv_record(&self) -> Vec<String> {
        let f = crate::format::format_g17;
        let b = self.lp_value.as_ref();
        vec![
            self.n.to_string(),
            self.N.to_string(),
            self.m.map_or(String::new(), |m| m.to_string()),
            f(self.lower),
            f(self.upper),
            b.map_or(String::new(), |b| f(b.lower)),
            b.map_or(String::new(), |b| f(b.upper)),
            b.map_or(String::new(), |b| b.converged.to_string()),
        ]
    }
}

/// CSV text for a list of bound rows.
pub fn bounds_table_csv(rows: &[ExtendibilityBounds]) -> String {
    let mut out = ExtendibilityBounds::csv_header().join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_record().join(","));
        out.push('\n');
    }
    out
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

pub fn kappa_nN_bounds(n: usize, N: usize, exact: bool, opts: &NormOptions) -> Result<ExtendibilityBounds> {
    if n == 0 || N < n {
        return Err(invalid(format!("need N ≥ n ≥ 1, got n = {n}, N = {N}")));
    }
    let pairs = n * (n - 1);
    let (upper, upper_applicable) = if 2 * N > pairs {
        let k = uv_bound(n)?;
        (1.0 + pairs as f64 / (2 * N - pairs) as f64 * (k + 1.0), true)
    } else {
        (crude_upper(n), false)
    };
    let lower = ((n as f64 - 1.0) / (2 * ceil_div(N, n)) as f64).exp();
    let lp_value = if exact {
        if N > 6 {
            return Err(crate::error::Error::Unsupported(format!(
                "exact κ(n, N) is computed for N ≤ 6, got N = {N}"
            )));
        }
        let chi = chi_nN(n, N)?;
        Some(norm_pisp(&chi.tensor, &SpaceDescriptor::l1(N), opts)?)
    } else {
        None
    };
    Ok(ExtendibilityBounds {
        n,
        N,
        m: None,
        lower,
        upper,
        upper_applicable,
        lp_value,
    })
}

/// The pushforward of `χ_{n,N}` through a map sending `kⱼ` of the `N`
/// elements to state `j`: `n` draws without replacement from an urn with
/// `kⱼ` balls of colour `j`.
pub(crate) fn hypergeometric(n: usize, counts: &[usize]) -> Result<SymmetricTensor<f64>> {
    let N: usize = counts.iter().sum();
    let t = SymmetricTensor::<f64>::zeros(counts.len(), n)?;
    let denom: f64 = ((N - n + 1)..=N).map(|v| v as f64).product();
    let values = t
        .index()
        .multisets()
        .iter()
        .map(|alpha| {
            let mut c = vec![0usize; counts.len()];
            for &i in alpha {
                c[i] += 1;
            }
            let num: f64 = c
                .iter()
                .zip(counts)
                .map(|(&cj, &kj)| {
                    if cj > kj {
                        0.0
                    } else {
                        ((kj - cj + 1)..=kj).map(|v| v as f64).product::<f64>()
                    }
                })
                .product();
            num / denom
        })
        .collect();
    SymmetricTensor::from_values(t.index().clone(), values)
}

pub fn kappa_nNm_bounds(n: usize, N: usize, m: usize, exact: bool, opts: &NormOptions) -> Result<ExtendibilityBounds> {
    if m == 0 || n < m || N < n {
        return Err(invalid(format!("need N ≥ n ≥ m ≥ 1, got n = {n}, N = {N}, m = {m}")));
    }
    let k = uv_bound(n)?;
    let upper = 1.0 + k * (2 * m * n) as f64 / N as f64;
    let lower = ((m as f64 - 1.0) / (2 * ceil_div(N, n)) as f64).exp();
    let lp_value = if exact {
        if N > 12 || m > 3 {
            return Err(crate::error::Error::Unsupported(format!(
                "exact κ(n, N; m) is computed for N ≤ 12 and m ≤ 3, got N = {N}, m = {m}"
            )));
        }
        // the norm is invariant under relabelling states, so sorted
        // multiplicity vectors suffice
        let types: Vec<Vec<usize>> = partitions(N, m)
            .into_iter()
            .map(|mut p| {
                p.resize(m, 0);
                p
            })
            .collect();
        let results: Vec<NormBounds> = types
            .par_iter()
            .map(|counts| {
                let t = hypergeometric(n, counts)?;
                norm_pisp(&t, &SpaceDescriptor::l1(m), opts)
            })
            .collect::<Result<_>>()?;
        let lower = results.iter().map(|b| b.lower).fold(f64::NEG_INFINITY, f64::max);
        let converged = results.iter().all(|b| b.converged);
        results.into_iter().max_by(|a, b| a.upper.total_cmp(&b.upper)).map(|mut w| {
            w.lower = lower;
            w.converged = converged;
            w
        })
    } else {
        None
    };
    Ok(ExtendibilityBounds {
        n,
        N,
        m: Some(m),
        lower,
        upper,
        upper_applicable: true,
        lp_value,
    })
}

/// `Σₖ Σ_{i<nₖ} log(1 − t i/nₖ) − Σ_{i<n} log(1 − t i/n) − (m−1)t/2` for
/// `t ∈ [0, 1]`; non-negative for every choice of positive parts.
pub fn lemma_LL_check(parts: &[usize], t: f64) -> Result<f64> {
    if parts.is_empty() || parts.contains(&0) {
        return Err(invalid("parts must be positive integers"));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(invalid(format!("t must lie in [0, 1], got {t}")));
    }
    let n: usize = parts.iter().sum();
    let log_sum = |len: usize| -> f64 { (1..len).map(|i| (-t * i as f64 / len as f64).ln_1p()).sum() };
    let lhs: f64 = parts.iter().map(|&p| log_sum(p)).sum();
    Ok(lhs - log_sum(n) - (parts.len() as f64 - 1.0) * t / 2.0)
}
