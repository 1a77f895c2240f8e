//! Exchangeable laws on `Sⁿ` for a finite state set `S`, and their signed
//! mixtures of i.i.d. laws.
//!
//! A law is stored as a symmetric tensor whose entry at a multiset `α` is the
//! probability of each single word of type `α`; the total probability is
//! therefore [`SymmetricTensor::entrywise_l1`]. A signed mixing measure
//! `λ = Σ λₖ δ_{νₖ}` represents the law when `Σ λₖ νₖ^{⊗n}` equals it.

mod bounds;

use std::collections::BTreeMap;

use serde_json::{json, Value};

pub use bounds::{
    bounds_table_csv, chi_nN, kappa_bounds, kappa_nN_bounds, kappa_nNm_bounds, lemma_LL_check, uv_bound,
    uv_bound_exact, ExtendibilityBounds, KappaBounds,
};

use crate::error::{check_dim, invalid, Error, Result};
use crate::format::number;
use crate::norms::{basis_wedge, kappa, norm_pisp, NormBounds, NormOptions, SpaceDescriptor};
use crate::tensor::multiset::multiplicity_of;
use crate::tensor::{polarization_expand, vandermonde_decomposition, SignedPowerCombination, SymmetricTensor};

const PROBABILITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ExchangeableDistribution {
    pub states: Vec<String>,
    pub order: usize,
    pub tensor: SymmetricTensor<f64>,
}

impl ExchangeableDistribution {
    /// Checks non-negativity and total mass of an existing tensor.
    pub fn new(states: Vec<String>, tensor: SymmetricTensor<f64>) -> Result<Self> {
        check_dim(states.len(), tensor.dim())?;
        if let Some((alpha, v)) = tensor.iter().find(|(_, v)| **v < 0.0 || !v.is_finite()) {
            return Err(invalid(format!("negative or non-finite probability {v} at {alpha:?}")));
        }
        let mass = tensor.entrywise_l1();
        if (mass - 1.0).abs() > PROBABILITY_TOL {
            return Err(invalid(format!("probabilities sum to {mass}, not 1")));
        }
        Ok(ExchangeableDistribution {
            states,
            order: tensor.order(),
            tensor,
        })
    }

    /// States labelled `"0"`, `"1"`, ….
    pub fn from_tensor(tensor: SymmetricTensor<f64>) -> Result<Self> {
        let states = (0..tensor.dim()).map(|i| i.to_string()).collect();
        Self::new(states, tensor)
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn to_json(&self) -> Value {
        let atoms: Vec<Value> = self
            .tensor
            .iter()
            .filter(|(_, v)| **v != 0.0)
            .map(|(alpha, v)| {
                let p = *v * multiplicity_of(alpha) as f64;
                json!({"x": alpha.iter().map(|&i| self.states[i].clone()).collect::<Vec<_>>(), "p": number(p)})
            })
            .collect();
        json!({"states": self.states, "order": self.order, "atoms": atoms})
    }
}

/// Builds the symmetrization of `Σ p δ_word` over `dim` states.
pub fn load_distribution(dim: usize, atoms: &[(Vec<usize>, f64)]) -> Result<ExchangeableDistribution> {
    let states = (0..dim).map(|i| i.to_string()).collect();
    load_labelled(states, atoms)
}

fn load_labelled(states: Vec<String>, atoms: &[(Vec<usize>, f64)]) -> Result<ExchangeableDistribution> {
    let Some(first) = atoms.first() else {
        return Err(invalid("distribution has no atoms"));
    };
    let order = first.0.len();
    if order == 0 {
        return Err(invalid("atoms must be non-empty words"));
    }
    let mut t = SymmetricTensor::<f64>::zeros(states.len(), order)?;
    let mut values = t.values().to_vec();
    let mut total = 0.0;
    for (k, (word, p)) in atoms.iter().enumerate() {
        if word.len() != order {
            return Err(invalid(format!("atom {k} has length {}, expected {order}", word.len())));
        }
        if let Some(&i) = word.iter().find(|&&i| i >= states.len()) {
            return Err(invalid(format!("atom {k} uses state index {i} out of range")));
        }
        if !(*p >= 0.0) || !p.is_finite() {
            return Err(invalid(format!("atom {k} has negative or non-finite probability {p}")));
        }
        total += p;
        let mut sorted = word.clone();
        sorted.sort_unstable();
        let pos = t.index().position_sorted(&sorted).expect("in range");
        values[pos] += p / multiplicity_of(&sorted) as f64;
    }
    if (total - 1.0).abs() > PROBABILITY_TOL {
        return Err(invalid(format!("probabilities sum to {total}, not 1")));
    }
    t = SymmetricTensor::from_values(t.index().clone(), values)?;
    Ok(ExchangeableDistribution {
        states,
        order,
        tensor: t,
    })
}

/// Reads `{"states": [...], "atoms": [{"x": [...], "p": ...}, ...]}`.
/// Words may use state labels or, when `states` is absent, indices.
pub fn distribution_from_json(value: &Value) -> Result<ExchangeableDistribution> {
    let atoms_json = value
        .get("atoms")
        .and_then(Value::as_array)
        .ok_or_else(|| invalid("missing \"atoms\" array"))?;
    let labels: Option<Vec<String>> = match value.get("states") {
        None | Some(Value::Null) => None,
        Some(Value::Array(s)) => Some(s.iter().map(label_of).collect::<Result<_>>()?),
        Some(_) => return Err(invalid("\"states\" must be an array")),
    };
    let lookup: Option<BTreeMap<&str, usize>> = labels
        .as_ref()
        .map(|l| l.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect());
    let mut atoms = Vec::with_capacity(atoms_json.len());
    let mut max_index = 0usize;
    for (k, a) in atoms_json.iter().enumerate() {
        let word = a
            .get("x")
            .and_then(Value::as_array)
            .ok_or_else(|| invalid(format!("atom {k}: missing \"x\" array")))?;
        let p = a
            .get("p")
            .and_then(Value::as_f64)
            .ok_or_else(|| invalid(format!("atom {k}: missing numeric \"p\"")))?;
        let mut idx = Vec::with_capacity(word.len());
        for s in word {
            let i = match &lookup {
                Some(map) => {
                    let l = label_of(s)?;
                    *map.get(l.as_str())
                        .ok_or_else(|| invalid(format!("atom {k}: unknown state {l:?}")))?
                }
                None => s
                    .as_u64()
                    .ok_or_else(|| invalid(format!("atom {k}: indices must be non-negative integers")))?
                    as usize,
            };
            max_index = max_index.max(i);
            idx.push(i);
        }
        atoms.push((idx, p));
    }
    let states = labels.unwrap_or_else(|| (0..=max_index).map(|i| i.to_string()).collect());
    load_labelled(states, &atoms)
}

fn label_of(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(invalid("state labels must be strings or numbers")),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixingAtom {
    pub weight: f64,
    /// A probability vector on the states.
    pub nu: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignedMixingMeasure {
    pub atoms: Vec<MixingAtom>,
    pub total_variation: f64,
    pub converged: bool,
    /// The norm bracket behind an LP representation.
    pub bounds: Option<(f64, f64)>,
}

impl SignedMixingMeasure {
    /// Normalizes every vector of `comb` to a probability vector, merges
    /// repeats and prunes weights below `1e-10`.
    pub fn from_combination(comb: &SignedPowerCombination<f64>, converged: bool) -> Result<Self> {
        let n = comb.order() as i32;
        let mut normalized = SignedPowerCombination::new(comb.dim(), comb.order());
        for term in comb.terms() {
            if term.vector.iter().any(|v| *v < -1e-14) {
                return Err(invalid("mixing vectors must be non-negative"));
            }
            let s: f64 = term.vector.iter().map(|v| v.max(0.0)).sum();
            if s == 0.0 {
                continue;
            }
            let nu = term.vector.iter().map(|v| v.max(0.0) / s).collect();
            normalized.push(term.weight * s.powi(n), nu)?;
        }
        let merged = normalized.merged_tol(1e-13);
        let atoms: Vec<MixingAtom> = merged
            .terms()
            .iter()
            .filter(|t| t.weight.abs() >= 1e-10)
            .map(|t| MixingAtom {
                weight: t.weight,
                nu: t.vector.clone(),
            })
            .collect();
        let total_variation = atoms.iter().map(|a| a.weight.abs()).sum();
        Ok(SignedMixingMeasure {
            atoms,
            total_variation,
            converged,
            bounds: None,
        })
    }

    pub fn mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    pub fn evaluate(&self, dim: usize, order: usize) -> Result<SymmetricTensor<f64>> {
        let mut comb = SignedPowerCombination::new(dim, order);
        for a in &self.atoms {
            comb.push(a.weight, a.nu.clone())?;
        }
        Ok(comb.evaluate())
    }

    pub fn scaled(&self, c: f64) -> Self {
        let atoms: Vec<MixingAtom> = self
            .atoms
            .iter()
            .map(|a| MixingAtom {
                weight: a.weight * c,
                nu: a.nu.clone(),
            })
            .collect();
        SignedMixingMeasure {
            total_variation: atoms.iter().map(|a| a.weight.abs()).sum(),
            atoms,
            converged: self.converged,
            bounds: self.bounds.map(|(l, u)| (l * c.abs(), u * c.abs())),
        }
    }

    pub fn to_json(&self, residual: f64) -> Value {
        let atoms: Vec<Value> = self
            .atoms
            .iter()
            .map(|a| json!({"w": number(a.weight), "nu": a.nu.iter().map(|v| number(*v)).collect::<Vec<_>>()}))
            .collect();
        let mut v = json!({
            "atoms": atoms,
            "tv": number(self.total_variation),
            "residual": number(residual),
            "converged": self.converged,
        });
        if let Some((lo, hi)) = self.bounds {
            v["lower"] = number(lo);
            v["upper"] = number(hi);
        }
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepresentMethod {
    Lp,
    Constructive,
}

impl std::str::FromStr for RepresentMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lp" => Ok(RepresentMethod::Lp),
            "constructive" => Ok(RepresentMethod::Constructive),
            other => Err(invalid(format!("unknown method {other:?}"))),
        }
    }
}

pub fn represent(
    d: &ExchangeableDistribution,
    method: RepresentMethod,
    opts: &NormOptions,
) -> Result<SignedMixingMeasure> {
    match method {
        RepresentMethod::Lp => represent_lp(d, opts),
        RepresentMethod::Constructive => {
            let master = master_decomposition(d.order, opts)?;
            represent_with_master(d, &master)
        }
    }
}

/// The minimal-variation measure read off the `‖·‖_{π,s,+}` computation.
pub fn represent_lp(d: &ExchangeableDistribution, opts: &NormOptions) -> Result<SignedMixingMeasure> {
    let b: NormBounds = norm_pisp(&d.tensor, &SpaceDescriptor::l1(d.dim()), opts)?;
    let comb = b.primal.powers().ok_or_else(|| Error::Unsupported("wedge witness".into()))?;
    let mut m = SignedMixingMeasure::from_combination(&comb, b.converged)?;
    m.bounds = Some((b.lower, b.upper));
    Ok(m)
}

/// A non-negative decomposition of `e₁∨…∨eₙ`: the `κ(n)` witness when its
/// computation converged, otherwise polarization with every signed vector
/// rewritten through [`vandermonde_decomposition`].
pub fn master_decomposition(n: usize, opts: &NormOptions) -> Result<SignedPowerCombination<f64>> {
    if let Ok(b) = kappa(n, opts) {
        if b.converged {
            if let Some(c) = b.primal.powers() {
                return Ok(c);
            }
        }
    }
    let basis: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let pol = polarization_expand(&basis)?;
    let mut out = SignedPowerCombination::new(n, n);
    for term in pol.terms() {
        let v = vandermonde_decomposition(&term.vector, n, None)?;
        for t in v.combination.terms() {
            out.push(term.weight * t.weight, t.vector.clone())?;
        }
    }
    debug_assert!(out.evaluate().max_abs_diff(&basis_wedge(n)?).unwrap_or(1.0) < 1e-9);
    Ok(out.merged())
}

/// Pushes `master` forward through `φ_x : eᵢ ↦ e_{xᵢ}` for one word `x` of
/// every multiset type and weights by the type probability.
pub fn represent_with_master(
    d: &ExchangeableDistribution,
    master: &SignedPowerCombination<f64>,
) -> Result<SignedMixingMeasure> {
    check_dim(d.order, master.order())?;
    check_dim(d.order, master.dim())?;
    let mut comb = SignedPowerCombination::new(d.dim(), d.order);
    for (alpha, v) in d.tensor.iter() {
        if *v == 0.0 {
            continue;
        }
        let p = *v * multiplicity_of(alpha) as f64;
        for term in master.terms() {
            let mut nu = vec![0.0; d.dim()];
            for (i, &xi) in alpha.iter().enumerate() {
                nu[xi] += term.vector[i];
            }
            comb.push(p * term.weight, nu)?;
        }
    }
    SignedMixingMeasure::from_combination(&comb, true)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepresentationReport {
    /// `‖Σ λₖ νₖ^{⊗n} − t‖_∞` over stored entries.
    pub residual: f64,
    /// `Σ λₖ − 1`.
    pub mass_defect: f64,
    pub total_variation: f64,
}

impl RepresentationReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.residual <= tol && self.mass_defect.abs() <= tol
    }
}

pub fn verify_representation(d: &ExchangeableDistribution, m: &SignedMixingMeasure) -> Result<RepresentationReport> {
    if let Some(a) = m.atoms.iter().find(|a| a.nu.len() != d.dim()) {
        return Err(Error::DimensionMismatch {
            expected: d.dim(),
            got: a.nu.len(),
        });
    }
    let got = m.evaluate(d.dim(), d.order)?;
    Ok(RepresentationReport {
        residual: got.max_abs_diff(&d.tensor)?,
        mass_defect: m.mass() - 1.0,
        total_variation: m.total_variation,
    })
}
