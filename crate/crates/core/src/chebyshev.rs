//! Closed forms for `‖(a,b)^{⊗n}‖_{π,s,+}` over `ℓ₁²`.
//!
//! The optimal positive decomposition of a sign-mixed power `(a,−b)^{⊗n}`
//! lives on the `n+1` points `(cos² jπ/2n, sin² jπ/2n)`, with weights given by
//! the Chebyshev interpolation coefficients `c_j(ξ)`, `ξ = (a+b)/(a−b)`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{invalid, Result};
use crate::tensor::SignedPowerCombination;

/// `T_n(x)` by the three-term recurrence, valid for every real `x`.
pub fn chebyshev_t(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `ψ(a,b) = ‖(a,b)^{⊗n}‖_{π,s,+}` over `ℓ₁²`.
pub fn psi(a: f64, b: f64, n: usize) -> f64 {
    let ni = n as i32;
    if a * b >= 0.0 {
        return (a.abs() + b.abs()).powi(ni);
    }
    let (p, q) = (a.abs().sqrt(), b.abs().sqrt());
    ((p + q).powi(2 * ni) + (p - q).powi(2 * ni)) / 2.0
}

/// [`psi`] in exact arithmetic: for `ab < 0` the two square-root powers
/// combine to `Σᵢ C(2n, 2i) |a|^{n−i} |b|^i`.
pub fn psi_exact(a: &BigRational, b: &BigRational, n: usize) -> BigRational {
    use num_traits::{Signed, Zero};
    let (pa, pb) = (a.abs(), b.abs());
    if a.is_negative() == b.is_negative() || a.is_zero() || b.is_zero() {
        return num_traits::pow(pa + pb, n);
    }
    (0..=n)
        .map(|i| {
            let c = num_integer::binomial(BigInt::from(2 * n), BigInt::from(2 * i));
            BigRational::from_integer(c) * num_traits::pow(pa.clone(), n - i) * num_traits::pow(pb.clone(), i)
        })
        .fold(BigRational::zero(), |acc, v| acc + v)
}

/// The interpolation nodes `(cos² jπ/2n, sin² jπ/2n)` for `j = 0..2n`.
pub fn cheb_nodes(n: usize) -> Vec<[f64; 2]> {
    (0..2 * n)
        .map(|j| {
            let t = j as f64 * std::f64::consts::PI / (2 * n) as f64;
            let c = t.cos();
            let s = t.sin();
            [c * c, s * s]
        })
        .collect()
}

/// Coefficients `c_j(ξ)`, `j = 0..2n`, with `ξ = (a+b)/(a−b)`, for the
/// power `(a,−b)^{⊗n}`; signs of `a` and `b` are ignored.
///
/// They satisfy `p(ξ) = Σ c_j p(cos jπ/n)` for every polynomial of degree
/// at most `n`. The case `a = b` has no finite `ξ` and is rejected; use
/// [`optimal_decomposition_m2`] for it.
pub fn cheb_coefficients(a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(invalid("order must be positive"));
    }
    let (a, b) = (a.abs(), b.abs());
    if a == b {
        return Err(invalid("a = b has ξ = ∞; the decomposition is the limiting one"));
    }
    if b < 1e-12 * a || a < 1e-12 * b {
        let xi_sign_pos = a > b;
        let mut c = vec![0.0; 2 * n];
        // ξ = ±1 sits on a node
        c[if xi_sign_pos { 0 } else { n }] = 1.0;
        return Ok(c);
    }
    let xi = (a + b) / (a - b);
    let t: Vec<f64> = (0..=n).map(|k| chebyshev_t(k, xi)).collect();
    Ok(fourier_inverse(n, &t))
}

/// `c_j = (1/2n) Σ_{k=−n}^{n−1} e^{ijkπ/n} T_{|k|}`, given `T_0..T_n`.
fn fourier_inverse(n: usize, t: &[f64]) -> Vec<f64> {
    let nf = n as f64;
    (0..2 * n)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let mut s = t[0] + sign * t[n];
            for (k, tk) in t.iter().enumerate().take(n).skip(1) {
                s += 2.0 * (std::f64::consts::PI * (j * k) as f64 / nf).cos() * tk;
            }
            s / (2.0 * nf)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChebDecomposition {
    pub n: usize,
    pub a: f64,
    pub b: f64,
    /// Weight of each node, so that `Σ coefficients[j] · nodes[j]^{⊗n} = (a,b)^{⊗n}`.
    pub coefficients: Vec<f64>,
    pub nodes: Vec<[f64; 2]>,
    pub total_variation: f64,
}

impl ChebDecomposition {
    /// Combines equal nodes (`j` and `2n−j` coincide) and drops zero weights.
    pub fn merged(&self) -> SignedPowerCombination<f64> {
        let mut out: Vec<([f64; 2], f64)> = Vec::new();
        for (node, w) in self.nodes.iter().zip(&self.coefficients) {
            match out
                .iter_mut()
                .find(|(m, _)| (m[0] - node[0]).abs() < 1e-14 && (m[1] - node[1]).abs() < 1e-14)
            {
                Some(slot) => slot.1 += w,
                None => out.push((*node, *w)),
            }
        }
        let mut comb = SignedPowerCombination::new(2, self.n);
        for (node, w) in out {
            if w != 0.0 {
                comb.push(w, node.to_vec()).expect("two coordinates");
            }
        }
        comb
    }

    pub fn to_combination(&self) -> SignedPowerCombination<f64> {
        let mut comb = SignedPowerCombination::new(2, self.n);
        for (node, w) in self.nodes.iter().zip(&self.coefficients) {
            comb.push(*w, node.to_vec()).expect("two coordinates");
        }
        comb
    }
}

/// The optimal decomposition of `(a,b)^{⊗n}` into powers of probability
/// vectors; its total variation equals [`psi`].
pub fn optimal_decomposition_m2(a: f64, b: f64, n: usize) -> Result<ChebDecomposition> {
    if n == 0 {
        return Err(invalid("order must be positive"));
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(invalid("a and b must be finite"));
    }
    let single = |w: f64, node: [f64; 2]| ChebDecomposition {
        n,
        a,
        b,
        coefficients: vec![w],
        nodes: vec![node],
        total_variation: w.abs(),
    };
    if a * b >= 0.0 {
        let s = a.abs() + b.abs();
        if s == 0.0 {
            return Ok(ChebDecomposition {
                n,
                a,
                b,
                coefficients: Vec::new(),
                nodes: Vec::new(),
                total_variation: 0.0,
            });
        }
        let sign: f64 = if a < 0.0 || b < 0.0 { -1.0 } else { 1.0 };
        let w = sign.powi(n as i32) * s.powi(n as i32);
        return Ok(single(w, [a.abs() / s, b.abs() / s]));
    }
    // write (a,b) = σ·(p, −q) with p, q > 0
    let (sigma, p, q): (f64, f64, f64) = if a > 0.0 { (1.0, a, -b) } else { (-1.0, -a, b) };
    let global = if n % 2 == 1 { sigma } else { 1.0 };
    let nodes = cheb_nodes(n);
    let weights: Vec<f64> = if q < 1e-12 * p {
        let mut w = vec![0.0; 2 * n];
        w[0] = p.powi(n as i32);
        w
    } else if p < 1e-12 * q {
        let mut w = vec![0.0; 2 * n];
        w[n] = (-q).powi(n as i32);
        w
    } else if p == q {
        // (1,−1)^{⊗n} = (2^{2n−1}/2n) Σ (−1)^j node_j^{⊗n}
        let scale = p.powi(n as i32) * 2f64.powi(2 * n as i32 - 1) / (2 * n) as f64;
        (0..2 * n)
            .map(|j| if j % 2 == 0 { scale } else { -scale })
            .collect()
    } else {
        // (p−q)^{n−k}·(p−q)^k T_k(ξ) through a homogeneous recurrence that
        // stays finite as p − q → 0
        let s = p + q;
        let d = p - q;
        let mut qk = vec![1.0, s];
        for k in 1..n {
            let next = 2.0 * s * qk[k] - d * d * qk[k - 1];
            qk.push(next);
        }
        let scaled: Vec<f64> = (0..=n)
            .map(|k| d.powi((n - k) as i32) * qk[k])
            .collect();
        fourier_inverse(n, &scaled)
    };
    let coefficients: Vec<f64> = weights.iter().map(|w| w * global).collect();
    let total_variation = coefficients.iter().map(|w| w.abs()).sum();
    Ok(ChebDecomposition {
        n,
        a,
        b,
        coefficients,
        nodes,
        total_variation,
    })
}

/// `C(2n, 2j) / C(n, j)`, the lower bound for the binary law
/// `μ_j` with `j` ones among `n` draws.
pub fn binary_lower_bound(n: usize, j: usize) -> Result<BigRational> {
    if j > n {
        return Err(invalid(format!("j = {j} exceeds n = {n}")));
    }
    let num = num_integer::binomial(BigInt::from(2 * n), BigInt::from(2 * j));
    let den = num_integer::binomial(BigInt::from(n), BigInt::from(j));
    Ok(BigRational::new(num, den))
}

/// The maximum over `j` of [`binary_lower_bound`], attained at `j = ⌊n/2⌋`.
pub fn binary_lower_bound_max(n: usize) -> BigRational {
    binary_lower_bound(n, n / 2).expect("n/2 ≤ n")
}
