//! Coordinates in which column generation runs.
//!
//! A power `x^{⊗n}` is either recorded entry by entry over all multisets, or,
//! for targets invariant under every permutation of the coordinates, through
//! its orbit-averaged form: one row per partition `λ` of `n` into at most
//! `m` parts, holding `m_λ(x)/N_λ` where `m_λ` is the monomial symmetric
//! polynomial and `N_λ` the number of multisets of type `λ`.

use std::sync::Arc;

use crate::tensor::multiset::{factorial, orbit_type, partitions};
use crate::tensor::{MultisetIndex, SymmetricTensor};

#[derive(Debug, Clone)]
pub(crate) enum RowSpace {
    Full(Arc<MultisetIndex>),
    Orbits(Arc<OrbitRows>),
}

impl RowSpace {
    pub fn column(&self, x: &[f64]) -> Vec<f64> {
        match self {
            RowSpace::Full(ix) => full_column(ix, x),
            RowSpace::Orbits(o) => o.column(x),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        matches!(self, RowSpace::Orbits(_))
    }

    /// Expands a dual vector in these rows to a functional on multisets.
    pub fn full_functional(&self, index: &MultisetIndex, y: &[f64]) -> Vec<f64> {
        match self {
            RowSpace::Full(_) => y.to_vec(),
            RowSpace::Orbits(o) => index
                .multisets()
                .iter()
                .map(|alpha| {
                    let r = o.row_of(&orbit_type(alpha));
                    y[r] / o.sizes[r]
                })
                .collect(),
        }
    }
}

fn full_column(ix: &MultisetIndex, x: &[f64]) -> Vec<f64> {
    ix.multisets()
        .iter()
        .map(|alpha| alpha.iter().map(|&i| x[i]).product())
        .collect()
}

#[derive(Debug)]
pub(crate) struct OrbitRows {
    pub order: usize,
    /// Partitions of `order` with at most `dim` parts.
    pub parts: Vec<Vec<usize>>,
    /// `N_λ` as floats.
    pub sizes: Vec<f64>,
    states: Vec<Vec<usize>>,
    state_degree: Vec<usize>,
    /// `step[s][e]` is the state reached from `s` by adding a part `e ≥ 1`.
    step: Vec<Vec<usize>>,
    /// State id of each row partition.
    final_state: Vec<usize>,
}

impl OrbitRows {
    pub fn new(dim: usize, order: usize) -> Arc<Self> {
        let parts = partitions(order, dim);
        let sizes = parts.iter().map(|p| orbit_size(dim, p) as f64).collect();
        let mut states: Vec<Vec<usize>> = Vec::new();
        for k in 0..=order {
            states.extend(partitions(k, dim.min(order).max(1)));
        }
        // the empty partition of 0 appears once
        let state_degree: Vec<usize> = states.iter().map(|s| s.iter().sum()).collect();
        let find = |p: &[usize]| states.iter().position(|s| s.as_slice() == p);
        let mut step = Vec::with_capacity(states.len());
        for s in &states {
            let deg: usize = s.iter().sum();
            let mut row = vec![usize::MAX; order + 1];
            if s.len() < dim {
                for (e, slot) in row.iter_mut().enumerate().take(order - deg + 1).skip(1) {
                    let mut next = s.clone();
                    next.push(e);
                    next.sort_unstable_by(|a, b| b.cmp(a));
                    *slot = find(&next).expect("partition of smaller degree");
                }
            }
            step.push(row);
        }
        let final_state = parts.iter().map(|p| find(p).expect("row partition")).collect();
        Arc::new(OrbitRows {
            order,
            parts,
            sizes,
            states,
            state_degree,
            step,
            final_state,
        })
    }

    pub fn row_of(&self, part: &[usize]) -> usize {
        self.parts
            .iter()
            .position(|p| p.as_slice() == part)
            .expect("partition with at most dim parts")
    }

    /// All `m_λ(x)` for the row partitions.
    pub fn monomials(&self, x: &[f64]) -> Vec<f64> {
        let mut vals = vec![0.0; self.states.len()];
        vals[0] = 1.0;
        let mut next = vec![0.0; self.states.len()];
        let mut pows = vec![1.0; self.order + 1];
        for &xi in x {
            for e in 1..=self.order {
                pows[e] = pows[e - 1] * xi;
            }
            next.copy_from_slice(&vals);
            for (s, &v) in vals.iter().enumerate() {
                if v == 0.0 {
                    continue;
                }
                let room = self.order - self.state_degree[s];
                for e in 1..=room {
                    let t = self.step[s][e];
                    if t != usize::MAX {
                        next[t] += v * pows[e];
                    }
                }
            }
            std::mem::swap(&mut vals, &mut next);
        }
        self.final_state.iter().map(|&s| vals[s]).collect()
    }

    pub fn column(&self, x: &[f64]) -> Vec<f64> {
        self.monomials(x)
            .into_iter()
            .zip(&self.sizes)
            .map(|(v, n)| v / n)
            .collect()
    }

    /// The orbit-type values of a permutation-invariant tensor, or `None`
    /// when some orbit is not constant.
    pub fn reduce(&self, t: &SymmetricTensor<f64>) -> Option<Vec<f64>> {
        let scale = t.max_abs().max(f64::MIN_POSITIVE);
        let mut vals: Vec<Option<f64>> = vec![None; self.parts.len()];
        for (alpha, v) in t.iter() {
            let r = self.row_of(&orbit_type(alpha));
            match vals[r] {
                None => vals[r] = Some(*v),
                Some(w) if (w - v).abs() <= 1e-13 * scale => {}
                Some(_) => return None,
            }
        }
        Some(vals.into_iter().map(|v| v.unwrap_or(0.0)).collect())
    }
}

/// Number of multisets over `dim` states whose multiplicity pattern is `part`.
pub(crate) fn orbit_size(dim: usize, part: &[usize]) -> u64 {
    let len = part.len();
    if len > dim {
        return 0;
    }
    let mut acc: u64 = (dim - len + 1..=dim).map(|v| v as u64).product();
    let mut i = 0;
    while i < len {
        let mut j = i;
        while j < len && part[j] == part[i] {
            j += 1;
        }
        acc /= factorial(j - i);
        i = j;
    }
    acc
}

/// The distinct permutations of `x`, in lexicographic order of positions.
pub(crate) fn distinct_permutations(x: &[f64]) -> Vec<Vec<f64>> {
    let mut v = x.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let mut out = vec![v.clone()];
    // next lexicographic permutation over a multiset
    loop {
        let n = v.len();
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| v[i] < v[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| v[j] > v[i]).expect("successor exists");
        v.swap(i, j);
        v[i + 1..].reverse();
        out.push(v.clone());
    }
    out
}
