use serde::{Deserialize, Serialize};

use super::SymmetricTensor;
use crate::error::{check_dim, invalid, Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct PowerTerm<T = f64> {
    pub weight: T,
    pub vector: Vec<T>,
}

/// A finite signed combination `Σ aₖ xₖ^{⊗n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedPowerCombination<T = f64> {
    dim: usize,
    order: usize,
    terms: Vec<PowerTerm<T>>,
}

impl<T: Scalar> SignedPowerCombination<T> {
    pub fn new(dim: usize, order: usize) -> Self {
        SignedPowerCombination {
            dim,
            order,
            terms: Vec::new(),
        }
    }

    pub fn from_terms(dim: usize, order: usize, terms: Vec<PowerTerm<T>>) -> Result<Self> {
        for t in &terms {
            check_dim(dim, t.vector.len())?;
        }
        Ok(SignedPowerCombination { dim, order, terms })
    }

    pub fn push(&mut self, weight: T, vector: Vec<T>) -> Result<()> {
        check_dim(self.dim, vector.len())?;
        self.terms.push(PowerTerm { weight, vector });
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> &[PowerTerm<T>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn evaluate(&self) -> SymmetricTensor<T> {
        let zero = SymmetricTensor::<T>::zeros(self.dim, self.order).expect("positive shape");
        let index = zero.index().clone();
        let mut values = zero.values().to_vec();
        for term in &self.terms {
            for (pos, alpha) in index.multisets().iter().enumerate() {
                let mut prod = term.weight.clone();
                for &i in alpha {
                    prod = prod * term.vector[i].clone();
                }
                values[pos] = values[pos].clone() + prod;
            }
        }
        SymmetricTensor::from_values(index, values).expect("same index")
    }

    /// `Σ |aₖ| ‖xₖ‖₁ⁿ`.
    pub fn cost(&self) -> T {
        self.cost_with(|x| x.iter().fold(T::zero(), |s, v| s + v.abs()))
    }

    /// `Σ |aₖ| ν(xₖ)ⁿ` for an arbitrary vector norm `ν`.
    pub fn cost_with<F: Fn(&[T]) -> T>(&self, norm: F) -> T {
        let mut acc = T::zero();
        for term in &self.terms {
            let nv = norm(&term.vector);
            let mut p = T::one();
            for _ in 0..self.order {
                p = p * nv.clone();
            }
            acc = acc + term.weight.abs() * p;
        }
        acc
    }

    /// Sum of absolute weights (the total variation when every vector has
    /// unit norm).
    pub fn total_weight(&self) -> T {
        self.terms.iter().fold(T::zero(), |s, t| s + t.weight.abs())
    }

    /// Merges terms whose vectors agree up to sign, using
    /// `(−x)^{⊗n} = (−1)ⁿ x^{⊗n}`, and drops zero weights and zero vectors.
    pub fn merged(&self) -> Self {
        let mut canon: Vec<PowerTerm<T>> = Vec::new();
        for term in &self.terms {
            let Some(first) = term.vector.iter().find(|v| !v.is_zero()) else {
                continue;
            };
            let (w, x) = if first.is_negative() {
                let w = if self.order % 2 == 1 {
                    -term.weight.clone()
                } else {
                    term.weight.clone()
                };
                (w, term.vector.iter().map(|v| -v.clone()).collect())
            } else {
                (term.weight.clone(), term.vector.clone())
            };
            canon.push(PowerTerm { weight: w, vector: x });
        }
        canon.sort_by(|a, b| {
            a.vector
                .iter()
                .zip(&b.vector)
                .map(|(p, q)| p.partial_cmp(q).unwrap_or(std::cmp::Ordering::Equal))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let mut out: Vec<PowerTerm<T>> = Vec::new();
        for t in canon {
            match out.last_mut() {
                Some(last) if last.vector == t.vector => {
                    last.weight = last.weight.clone() + t.weight;
                }
                _ => out.push(t),
            }
        }
        out.retain(|t| !t.weight.is_zero());
        SignedPowerCombination {
            dim: self.dim,
            order: self.order,
            terms: out,
        }
    }

    pub fn scaled(&self, c: &T) -> Self {
        SignedPowerCombination {
            dim: self.dim,
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|t| PowerTerm {
                    weight: t.weight.clone() * c.clone(),
                    vector: t.vector.clone(),
                })
                .collect(),
        }
    }

    pub fn to_f64(&self) -> SignedPowerCombination<f64> {
        SignedPowerCombination {
            dim: self.dim,
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|t| PowerTerm {
                    weight: t.weight.to_f64_lossy(),
                    vector: t.vector.iter().map(|v| v.to_f64_lossy()).collect(),
                })
                .collect(),
        }
    }

    pub fn all_vectors_nonnegative(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.vector.iter().all(|v| !v.is_negative()))
    }
}

impl SignedPowerCombination<f64> {
    /// Like [`merged`](Self::merged) but treats vectors within `tol`
    /// (max-norm) as equal.
    pub fn merged_tol(&self, tol: f64) -> Self {
        let base = self.merged();
        let mut out: Vec<PowerTerm<f64>> = Vec::new();
        for t in base.terms {
            if let Some(prev) = out.iter_mut().find(|p| {
                p.vector
                    .iter()
                    .zip(&t.vector)
                    .all(|(a, b)| (a - b).abs() <= tol)
            }) {
                prev.weight += t.weight;
            } else {
                out.push(t);
            }
        }
        out.retain(|t| t.weight != 0.0);
        SignedPowerCombination {
            dim: base.dim,
            order: base.order,
            terms: out,
        }
    }

    /// `{"order":n,"terms":[{"w":a,"x":[...]}]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(CombinationJson {
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|t| TermJson {
                    w: t.weight,
                    x: t.vector.clone(),
                })
                .collect(),
        })
        .expect("combination JSON")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let raw: CombinationJson = serde_json::from_value(value.clone())
            .map_err(|e| invalid(format!("malformed combination JSON: {e}")))?;
        let dim = raw
            .terms
            .first()
            .map(|t| t.x.len())
            .ok_or_else(|| invalid("combination JSON has no terms"))?;
        SignedPowerCombination::from_terms(
            dim,
            raw.order,
            raw.terms
                .into_iter()
                .map(|t| PowerTerm {
                    weight: t.w,
                    vector: t.x,
                })
                .collect(),
        )
    }
}

#[derive(Serialize, Deserialize)]
struct CombinationJson {
    order: usize,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    w: f64,
    x: Vec<f64>,
}

/// A combination `Σ aₖ x_{1k} ∨ … ∨ x_{nk}` of elementary symmetric tensors;
/// the witness type for the non-symmetric projective norms.
#[derive(Debug, Clone, PartialEq)]
pub struct WedgeCombination {
    pub dim: usize,
    pub order: usize,
    pub terms: Vec<WedgeTerm>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WedgeTerm {
    pub weight: f64,
    pub factors: Vec<Vec<f64>>,
}

impl WedgeCombination {
    pub fn evaluate(&self) -> SymmetricTensor<f64> {
        let mut acc = SymmetricTensor::<f64>::zeros(self.dim, self.order).expect("positive shape");
        for t in &self.terms {
            let w = super::wedge(&t.factors).expect("consistent factors");
            acc = acc.add(&w.scale(&t.weight)).expect("same shape");
        }
        acc
    }

    /// `Σ |aₖ| Π ν(x_{ik})`.
    pub fn cost_with<F: Fn(&[f64]) -> f64>(&self, norm: F) -> f64 {
        self.terms
            .iter()
            .map(|t| t.weight.abs() * t.factors.iter().map(|f| norm(f)).product::<f64>())
            .sum()
    }
}

/// The polarization identity
/// `x₁∨…∨xₙ = (2ⁿ n!)⁻¹ Σ_ε ε₁⋯εₙ (Σ εᵢxᵢ)^{⊗n}`, with `±` duplicates merged.
pub fn polarization_expand<T: Scalar>(vectors: &[Vec<T>]) -> Result<SignedPowerCombination<T>> {
    let n = vectors.len();
    if n == 0 {
        return Err(invalid("polarization needs at least one vector"));
    }
    if n > 20 {
        return Err(invalid("polarization order above 20 is not supported"));
    }
    let m = vectors[0].len();
    for v in vectors {
        check_dim(m, v.len())?;
    }
    let denom = T::from_u64((1u64 << n) * super::multiset::factorial(n)).unwrap();
    let base = T::one() / denom;
    let mut comb = SignedPowerCombination::new(m, n);
    for mask in 0..(1usize << n) {
        let mut x = vec![T::zero(); m];
        let mut sign = T::one();
        for (i, v) in vectors.iter().enumerate() {
            let negative = mask & (1 << i) != 0;
            if negative {
                sign = -sign;
            }
            for (xj, vj) in x.iter_mut().zip(v) {
                *xj = if negative {
                    xj.clone() - vj.clone()
                } else {
                    xj.clone() + vj.clone()
                };
            }
        }
        comb.push(sign * base.clone(), x)?;
    }
    Ok(comb.merged())
}

/// Coordinatewise positive and negative parts of a vector and its `‖·‖₊`
/// norm over `ℓ_p^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct PosNegSplit {
    pub positive_part: Vec<f64>,
    pub negative_part: Vec<f64>,
    pub plus_norm: f64,
}

pub fn lp_norm(x: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        x.iter().fold(0.0, |m, v| m.max(v.abs()))
    } else if p == 1.0 {
        x.iter().map(|v| v.abs()).sum()
    } else {
        x.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

pub fn pos_neg_split(x: &[f64], p: f64) -> Result<PosNegSplit> {
    if !(p >= 1.0) {
        return Err(invalid(format!("norm exponent {p} is not in [1, ∞]")));
    }
    let positive_part: Vec<f64> = x.iter().map(|v| v.max(0.0)).collect();
    let negative_part: Vec<f64> = x.iter().map(|v| (-v).max(0.0)).collect();
    let plus_norm = lp_norm(&positive_part, p) + lp_norm(&negative_part, p);
    Ok(PosNegSplit {
        positive_part,
        negative_part,
        plus_norm,
    })
}

/// A positive decomposition of `x^{⊗n}` from a Vandermonde system.
#[derive(Debug, Clone, PartialEq)]
pub struct VandermondeDecomposition<T = f64> {
    pub nodes: Vec<T>,
    pub lambdas: Vec<T>,
    pub combination: SignedPowerCombination<T>,
    /// `Σ |λₖ| max(1, tₖ)ⁿ`, the bound on the cost in units of `‖x‖₊ⁿ`.
    pub bound: T,
}

/// Writes `x = y − z` with `y, z ≥ 0` and solves
/// `Σₖ λₖ (tₖ+1)^j = [j = 0]`, `j = 0..n`, so that
/// `x^{⊗n} = Σₖ λₖ (y + tₖ z)^{⊗n}` with every vector non-negative.
/// Default nodes are `0, 1, …, n`.
pub fn vandermonde_decomposition<T: Scalar>(
    x: &[T],
    order: usize,
    nodes: Option<&[T]>,
) -> Result<VandermondeDecomposition<T>> {
    if order == 0 {
        return Err(invalid("order must be positive"));
    }
    if x.is_empty() {
        return Err(invalid("vector must be non-empty"));
    }
    let nodes: Vec<T> = match nodes {
        Some(t) => t.to_vec(),
        None => (0..=order).map(|k| T::from_usize(k).unwrap()).collect(),
    };
    check_dim(order + 1, nodes.len())?;
    if nodes.iter().any(|t| t.is_negative()) {
        return Err(invalid("Vandermonde nodes must be non-negative"));
    }
    for i in 0..nodes.len() {
        for j in 0..i {
            if nodes[i] == nodes[j] {
                return Err(Error::SingularSystem(format!(
                    "repeated Vandermonde node at positions {j} and {i}"
                )));
            }
        }
    }
    let size = order + 1;
    // rows j = 0..n, columns k: (t_k + 1)^j
    let mut a: Vec<Vec<T>> = (0..size)
        .map(|j| {
            nodes
                .iter()
                .map(|t| {
                    let base = t.clone() + T::one();
                    (0..j).fold(T::one(), |acc, _| acc * base.clone())
                })
                .collect()
        })
        .collect();
    let mut rhs = vec![T::zero(); size];
    rhs[0] = T::one();
    let lambdas = solve_dense(&mut a, &mut rhs)?;

    let y: Vec<T> = x.iter().map(|v| if v.is_positive() { v.clone() } else { T::zero() }).collect();
    let z: Vec<T> = x.iter().map(|v| if v.is_negative() { -v.clone() } else { T::zero() }).collect();
    let mut comb = SignedPowerCombination::new(x.len(), order);
    let mut bound = T::zero();
    for (lam, t) in lambdas.iter().zip(&nodes) {
        let v: Vec<T> = y
            .iter()
            .zip(&z)
            .map(|(yi, zi)| yi.clone() + t.clone() * zi.clone())
            .collect();
        comb.push(lam.clone(), v)?;
        let scale = if *t > T::one() { t.clone() } else { T::one() };
        let p = (0..order).fold(T::one(), |acc, _| acc * scale.clone());
        bound = bound + lam.abs() * p;
    }
    Ok(VandermondeDecomposition {
        nodes,
        lambdas,
        combination: comb,
        bound,
    })
}

/// Gaussian elimination with partial pivoting.
pub(crate) fn solve_dense<T: Scalar>(a: &mut [Vec<T>], b: &mut [T]) -> Result<Vec<T>> {
    let n = b.len();
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .map(|v| v.abs().to_f64_lossy())
        .fold(0.0, f64::max);
    for col in 0..n {
        let (piv, best) = (col..n)
            .map(|r| (r, a[r][col].abs()))
            .fold((col, T::zero()), |(br, bv), (r, v)| if v > bv { (r, v) } else { (br, bv) });
        if best.is_zero() || best.to_f64_lossy() <= 1e-14 * scale {
            return Err(Error::SingularSystem(format!("zero pivot in column {col}")));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone() / a[col][col].clone();
            for c in col..n {
                let sub = f.clone() * a[col][c].clone();
                a[r][c] = a[r][c].clone() - sub;
            }
            let sub = f * b[col].clone();
            b[r] = b[r].clone() - sub;
        }
    }
    let mut x = vec![T::zero(); n];
    for r in (0..n).rev() {
        let mut s = b[r].clone();
        for c in r + 1..n {
            s = s - a[r][c].clone() * x[c].clone();
        }
        x[r] = s / a[r][r].clone();
    }
    Ok(x)
}

/// Maps each term `(a, x)` to `(a, Mx)` for a coordinatewise non-negative
/// `m' × m` matrix `M` given by rows.
pub fn pushforward<T: Scalar>(
    matrix: &[Vec<T>],
    comb: &SignedPowerCombination<T>,
) -> Result<SignedPowerCombination<T>> {
    if matrix.is_empty() {
        return Err(invalid("pushforward matrix has no rows"));
    }
    for row in matrix {
        check_dim(comb.dim(), row.len())?;
        if row.iter().any(|v| v.is_negative()) {
            return Err(invalid("pushforward matrix must be coordinatewise non-negative"));
        }
    }
    let mut out = SignedPowerCombination::new(matrix.len(), comb.order());
    for t in comb.terms() {
        let v = matrix
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&t.vector)
                    .fold(T::zero(), |s, (a, b)| s + a.clone() * b.clone())
            })
            .collect();
        out.push(t.weight.clone(), v)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{power, wedge};
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn polarization_of_two_basis_vectors() {
        let c = polarization_expand(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        // ¼(e₁+e₂)^⊗2 − ¼(e₁−e₂)^⊗2
        assert_eq!(c.len(), 2);
        let mut terms: Vec<_> = c.terms().to_vec();
        terms.sort_by(|a, b| a.weight.partial_cmp(&b.weight).unwrap());
        assert_eq!(terms[0].weight, -0.25);
        assert_eq!(terms[0].vector, vec![1.0, -1.0]);
        assert_eq!(terms[1].weight, 0.25);
        assert_eq!(terms[1].vector, vec![1.0, 1.0]);
        let w = wedge(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(c.evaluate(), w);
    }

    #[test]
    fn polarization_order_one() {
        let c = polarization_expand(&[vec![2.0, -3.0]]).unwrap();
        assert_eq!(c.terms(), &[PowerTerm { weight: 1.0, vector: vec![2.0, -3.0] }]);
    }

    #[test]
    fn polarization_of_repeated_vector() {
        let c = polarization_expand(&[vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        // (1/8)(2·(2e₁)^⊗2 + 2·0) collapses to e₁^⊗2 with cost 1
        assert_eq!(c.evaluate().values(), &[1.0, 0.0, 0.0]);
        assert_eq!(c.cost(), 1.0);
    }

    #[test]
    fn exact_polarization_in_rationals() {
        let vs = vec![vec![q(1, 1), q(2, 3)], vec![q(-1, 2), q(1, 1)], vec![q(0, 1), q(3, 1)]];
        let c = polarization_expand(&vs).unwrap();
        assert_eq!(c.evaluate(), wedge(&vs).unwrap());
    }

    #[test]
    fn split_examples() {
        let s = pos_neg_split(&[3.0, -4.0], 1.0).unwrap();
        assert_eq!(s.positive_part, vec![3.0, 0.0]);
        assert_eq!(s.negative_part, vec![0.0, 4.0]);
        assert_eq!(s.plus_norm, 7.0);
        let s = pos_neg_split(&[1.0, -1.0], 2.0).unwrap();
        assert!((s.plus_norm / lp_norm(&[1.0, -1.0], 2.0) - 2f64.sqrt()).abs() < 1e-15);
        let s = pos_neg_split(&[1.0, 1.0], 3.0).unwrap();
        assert_eq!(s.negative_part, vec![0.0, 0.0]);
        assert_eq!(s.plus_norm, lp_norm(&[1.0, 1.0], 3.0));
        assert!(pos_neg_split(&[1.0], 0.5).is_err());
    }

    #[test]
    fn vandermonde_on_mixed_vector() {
        let d = vandermonde_decomposition(&[q(1, 1), q(-1, 1)], 2, None).unwrap();
        assert_eq!(d.lambdas, vec![q(3, 1), q(-3, 1), q(1, 1)]);
        let vs: Vec<_> = d.combination.terms().iter().map(|t| t.vector.clone()).collect();
        assert_eq!(vs, vec![vec![q(1, 1), q(0, 1)], vec![q(1, 1), q(1, 1)], vec![q(1, 1), q(2, 1)]]);
        assert_eq!(d.combination.evaluate(), power(&[q(1, 1), q(-1, 1)], 2).unwrap());
        assert_eq!(d.bound, q(10, 1));
    }

    #[test]
    fn vandermonde_order_one() {
        let d = vandermonde_decomposition(&[1.0, -1.0], 1, Some(&[0.0, 1.0])).unwrap();
        assert_eq!(d.lambdas, vec![2.0, -1.0]);
        assert_eq!(d.combination.evaluate().values(), &[1.0, -1.0]);
    }

    #[test]
    fn vandermonde_positive_vector_collapses() {
        let d = vandermonde_decomposition(&[q(1, 2), q(1, 3)], 3, None).unwrap();
        let merged = d.combination.merged();
        assert_eq!(merged.len(), 1);
        assert_eq!(merged.terms()[0].weight, q(1, 1));
    }

    #[test]
    fn vandermonde_errors() {
        assert!(matches!(
            vandermonde_decomposition(&[1.0, -1.0], 2, Some(&[0.0, 1.0, 1.0])),
            Err(Error::SingularSystem(_))
        ));
        assert!(matches!(
            vandermonde_decomposition(&[1.0, -1.0], 2, Some(&[-1.0, 1.0, 2.0])),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn pushforward_identity_and_point_mass() {
        let c = polarization_expand(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let id = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        assert_eq!(pushforward(&id, &c).unwrap(), c);
        // φ_x for x = (s, s): e₁, e₂ ↦ δ_s in a 3-state space with s = 1
        let phi = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![0.0, 0.0]];
        let p = pushforward(&phi, &c).unwrap().evaluate();
        assert_eq!(p, power(&[0.0, 1.0, 0.0], 2).unwrap());
        assert!(pushforward(&[vec![1.0, -1.0]], &c).is_err());
    }
}
