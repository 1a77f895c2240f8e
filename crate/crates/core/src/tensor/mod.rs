//! Symmetric tensors over `ℝ^m` and their decompositions into tensor powers.
//!
//! A [`SymmetricTensor`] of order `n` stores one value per non-decreasing
//! multi-index `i₁ ≤ … ≤ iₙ`; the full `mⁿ` array is implied by permutation
//! invariance. Storage is `C(m+n−1, n)` scalars and the entrywise `ℓ₁` norm
//! is recovered exactly through the multinomial multiplicities.

mod combination;
pub mod multiset;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, invalid, Result};
use crate::scalar::Scalar;

pub use combination::{
    lp_norm, pos_neg_split, pushforward, vandermonde_decomposition, polarization_expand, PosNegSplit,
    PowerTerm, SignedPowerCombination, VandermondeDecomposition, WedgeCombination, WedgeTerm,
};
pub use multiset::MultisetIndex;

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricTensor<T = f64> {
    index: Arc<MultisetIndex>,
    values: Vec<T>,
}

impl<T: Scalar> SymmetricTensor<T> {
    pub fn zeros(dim: usize, order: usize) -> Result<Self> {
        if dim == 0 || order == 0 {
            return Err(invalid("tensor dimension and order must be positive"));
        }
        Ok(Self::zeros_with(MultisetIndex::new(dim, order)))
    }

    pub fn zeros_with(index: Arc<MultisetIndex>) -> Self {
        let values = vec![T::zero(); index.len()];
        SymmetricTensor { index, values }
    }

    /// Builds a tensor from values listed in multiset order.
    pub fn from_values(index: Arc<MultisetIndex>, values: Vec<T>) -> Result<Self> {
        check_dim(index.len(), values.len())?;
        Ok(SymmetricTensor { index, values })
    }

    /// Builds a tensor from `(idx, value)` pairs; every `idx` must be
    /// non-decreasing and in range. Repeated indices accumulate.
    pub fn from_entries<I>(dim: usize, order: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, T)>,
    {
        let mut t = Self::zeros(dim, order)?;
        for (idx, v) in entries {
            if idx.len() != order {
                return Err(invalid(format!(
                    "multi-index {idx:?} has length {} but order is {order}",
                    idx.len()
                )));
            }
            if idx.windows(2).any(|w| w[0] > w[1]) {
                return Err(invalid(format!("multi-index {idx:?} is not non-decreasing")));
            }
            let pos = t
                .index
                .position_sorted(&idx)
                .ok_or_else(|| invalid(format!("multi-index {idx:?} out of range for dim {dim}")))?;
            t.values[pos] = t.values[pos].clone() + v;
        }
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.index.dim()
    }

    pub fn order(&self) -> usize {
        self.index.order()
    }

    pub fn index(&self) -> &Arc<MultisetIndex> {
        &self.index
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Entry of the full tensor at a multi-index given in any order.
    pub fn get(&self, idx: &[usize]) -> Option<&T> {
        self.index.position(idx).map(|p| &self.values[p])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[usize], &T)> {
        self.index
            .multisets()
            .iter()
            .map(|m| m.as_slice())
            .zip(self.values.iter())
    }

    /// `Σ multiplicity(α)·|t_α|`, the projective norm over `ℓ₁^m`.
    pub fn entrywise_l1(&self) -> T {
        let mut acc = T::zero();
        for (pos, v) in self.values.iter().enumerate() {
            acc = acc + T::from_u64(self.index.multiplicity(pos)).unwrap() * v.abs();
        }
        acc
    }

    pub fn scale(&self, c: &T) -> Self {
        SymmetricTensor {
            index: self.index.clone(),
            values: self.values.iter().map(|v| v.clone() * c.clone()).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(SymmetricTensor {
            index: self.index.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-T::one()))
    }

    /// `max_α |self_α − other_α|` in double precision.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.same_shape(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a.clone() - b.clone()).abs().to_f64_lossy())
            .fold(0.0, f64::max))
    }

    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .map(|v| v.abs().to_f64_lossy())
            .fold(0.0, f64::max)
    }

    /// Applies a functional given by one coefficient per stored multiset:
    /// `L(t) = Σ_α L_α t_α`.
    pub fn apply_functional(&self, functional: &[T]) -> Result<T> {
        check_dim(self.values.len(), functional.len())?;
        let mut acc = T::zero();
        for (v, l) in self.values.iter().zip(functional) {
            acc = acc + v.clone() * l.clone();
        }
        Ok(acc)
    }

    /// `M^{⊗n} t` for an `m' × m` matrix given by rows.
    pub fn map_linear(&self, matrix: &[Vec<T>]) -> Result<Self> {
        let m = self.dim();
        let out_dim = matrix.len();
        for row in matrix {
            check_dim(m, row.len())?;
        }
        let n = self.order();
        let mut out = SymmetricTensor::<T>::zeros(out_dim, n)?;
        let mut word = vec![0usize; n];
        let full = m.pow(n as u32);
        for code in 0..full {
            let mut c = code;
            for w in word.iter_mut() {
                *w = c % m;
                c /= m;
            }
            let v = self.get(&word).unwrap();
            if v.is_zero() {
                continue;
            }
            for (pos, beta) in out.index.clone().multisets().iter().enumerate() {
                let mut prod = v.clone();
                for (b, a) in beta.iter().zip(&word) {
                    prod = prod * matrix[*b][*a].clone();
                }
                out.values[pos] = out.values[pos].clone() + prod;
            }
        }
        Ok(out)
    }

    pub fn to_f64(&self) -> SymmetricTensor<f64> {
        SymmetricTensor {
            index: self.index.clone(),
            values: self.values.iter().map(|v| v.to_f64_lossy()).collect(),
        }
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        check_dim(self.dim(), other.dim())?;
        check_dim(self.order(), other.order())
    }
}

/// `x₁ ∨ … ∨ xₙ = (1/n!) Σ_σ x_{σ(1)} ⊗ … ⊗ x_{σ(n)}`.
pub fn wedge<T: Scalar>(vectors: &[Vec<T>]) -> Result<SymmetricTensor<T>> {
    let n = vectors.len();
    if n == 0 {
        return Err(invalid("wedge needs at least one vector"));
    }
    let m = vectors[0].len();
    for v in vectors {
        check_dim(m, v.len())?;
    }
    if n > 20 {
        return Err(invalid("wedge order above 20 is not supported"));
    }
    let mut t = SymmetricTensor::zeros(m, n)?;
    let inv_fact = T::one() / T::from_u64(multiset::factorial(n)).unwrap();
    let index = t.index.clone();
    let mut dp = vec![T::zero(); 1 << n];
    for (pos, alpha) in index.multisets().iter().enumerate() {
        // permanent of [x_k(alpha_j)] by subset dynamic programming
        for d in dp.iter_mut() {
            *d = T::zero();
        }
        dp[0] = T::one();
        for mask in 0..(1usize << n) {
            if dp[mask].is_zero() {
                continue;
            }
            let j = mask.count_ones() as usize;
            if j == n {
                continue;
            }
            for (k, v) in vectors.iter().enumerate() {
                if mask & (1 << k) == 0 {
                    let add = dp[mask].clone() * v[alpha[j]].clone();
                    let next = mask | (1 << k);
                    dp[next] = dp[next].clone() + add;
                }
            }
        }
        t.values[pos] = dp[(1 << n) - 1].clone() * inv_fact.clone();
    }
    Ok(t)
}

/// `x^{⊗n}`, with entry `Π x_{i_j}` at every multi-index.
pub fn power<T: Scalar>(x: &[T], order: usize) -> Result<SymmetricTensor<T>> {
    if x.is_empty() {
        return Err(invalid("power needs a non-empty vector"));
    }
    let mut t = SymmetricTensor::zeros(x.len(), order)?;
    let index = t.index.clone();
    for (pos, alpha) in index.multisets().iter().enumerate() {
        let mut prod = T::one();
        for &i in alpha {
            prod = prod * x[i].clone();
        }
        t.values[pos] = prod;
    }
    Ok(t)
}

pub fn entrywise_l1<T: Scalar>(t: &SymmetricTensor<T>) -> T {
    t.entrywise_l1()
}

#[derive(Serialize, Deserialize)]
struct TensorJson {
    dim: usize,
    order: usize,
    entries: Vec<EntryJson>,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    idx: Vec<usize>,
    v: f64,
}

impl SymmetricTensor<f64> {
    /// `{"dim":m,"order":n,"entries":[{"idx":[...],"v":x}]}` with zero
    /// entries omitted.
    pub fn to_json(&self) -> serde_json::Value {
        let entries = self
            .iter()
            .filter(|(_, v)| **v != 0.0)
            .map(|(idx, v)| EntryJson {
                idx: idx.to_vec(),
                v: *v,
            })
            .collect();
        serde_json::to_value(TensorJson {
            dim: self.dim(),
            order: self.order(),
            entries,
        })
        .expect("tensor JSON")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let raw: TensorJson = serde_json::from_value(value.clone())
            .map_err(|e| invalid(format!("malformed tensor JSON: {e}")))?;
        SymmetricTensor::from_entries(
            raw.dim,
            raw.order,
            raw.entries.into_iter().map(|e| (e.idx, e.v)),
        )
    }
}
