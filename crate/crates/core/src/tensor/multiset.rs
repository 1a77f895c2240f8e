//! Enumeration of non-decreasing multi-indices and their orbit types.

use std::sync::Arc;

/// All non-decreasing multi-indices `i₁ ≤ … ≤ iₙ` over `0..dim`, in
/// lexicographic order, with their multinomial multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultisetIndex {
    dim: usize,
    order: usize,
    multisets: Vec<Vec<usize>>,
    multiplicity: Vec<u64>,
}

impl MultisetIndex {
    pub fn new(dim: usize, order: usize) -> Arc<Self> {
        let mut multisets = Vec::with_capacity(count_multisets(dim, order));
        let mut cur = vec![0usize; order];
        if dim > 0 {
            loop {
                multisets.push(cur.clone());
                // advance to the next non-decreasing sequence
                let mut pos = order;
                while pos > 0 && cur[pos - 1] == dim - 1 {
                    pos -= 1;
                }
                if pos == 0 {
                    break;
                }
                let v = cur[pos - 1] + 1;
                for c in cur.iter_mut().skip(pos - 1) {
                    *c = v;
                }
            }
        }
        let multiplicity = multisets.iter().map(|ms| multiplicity_of(ms)).collect();
        Arc::new(MultisetIndex {
            dim,
            order,
            multisets,
            multiplicity,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.multisets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.multisets.is_empty()
    }

    pub fn multiset(&self, pos: usize) -> &[usize] {
        &self.multisets[pos]
    }

    pub fn multisets(&self) -> &[Vec<usize>] {
        &self.multisets
    }

    /// Number of distinct orderings of the multiset at `pos`.
    pub fn multiplicity(&self, pos: usize) -> u64 {
        self.multiplicity[pos]
    }

    /// Position of a multi-index given in any order.
    pub fn position(&self, idx: &[usize]) -> Option<usize> {
        if idx.len() != self.order || idx.iter().any(|&i| i >= self.dim) {
            return None;
        }
        let mut sorted = idx.to_vec();
        sorted.sort_unstable();
        self.multisets
            .binary_search_by(|probe| probe.as_slice().cmp(sorted.as_slice()))
            .ok()
    }

    /// Position of an already sorted multi-index.
    pub fn position_sorted(&self, sorted: &[usize]) -> Option<usize> {
        self.multisets
            .binary_search_by(|probe| probe.as_slice().cmp(sorted))
            .ok()
    }
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// `C(dim + order − 1, order)`.
pub fn count_multisets(dim: usize, order: usize) -> usize {
    if dim == 0 {
        return 0;
    }
    binomial((dim + order - 1) as u64, order as u64) as usize
}

/// Multinomial count `n! / Π cᵢ!` of a sorted multi-index.
pub fn multiplicity_of(sorted: &[usize]) -> u64 {
    let mut acc = factorial(sorted.len());
    for c in counts(sorted) {
        acc /= factorial(c);
    }
    acc
}

/// Run lengths of a sorted multi-index.
fn counts(sorted: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        out.push(j - i);
        i = j;
    }
    out
}

/// The orbit type of a multiset under coordinate permutations: its
/// multiplicity pattern sorted in decreasing order (an integer partition of
/// the order).
pub fn orbit_type(sorted: &[usize]) -> Vec<usize> {
    let mut c = counts(sorted);
    c.sort_unstable_by(|a, b| b.cmp(a));
    c
}

/// Integer partitions of `n` with at most `max_parts` parts, each in
/// decreasing order; the list itself is in reverse lexicographic order.
pub fn partitions(n: usize, max_parts: usize) -> Vec<Vec<usize>> {
    fn rec(rem: usize, max_part: usize, parts_left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        if parts_left == 0 {
            return;
        }
        for p in (1..=max_part.min(rem)).rev() {
            cur.push(p);
            rec(rem - p, p, parts_left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, max_parts, &mut Vec::new(), &mut out);
    out
}

/// Weighted compositions: all vectors of `parts` non-negative integers
/// summing to `total`.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(rem: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            cur.push(rem);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in (0..=rem).rev() {
            cur.push(k);
            rec(rem - k, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        rec(total, parts, &mut Vec::new(), &mut out);
    }
    out
}
