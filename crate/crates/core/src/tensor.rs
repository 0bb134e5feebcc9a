use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::dual::DualNumber;
use crate::error::{Error, Result};

/// `k!` as an f64; exact for `k <= 22`.
pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

/// Sparse symmetric tensor of order `m >= 2` and dimension `n >= 1`.
///
/// Storage is one sorted support tuple per distinct index multiset, with a
/// *per-permutation* value: the stored value applies at every distinct
/// permutation of the tuple. This avoids the `m!`-fold blowup of storing
/// symmetric entries separately.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymTensor {
    order: usize,
    dim: usize,
    entries: BTreeMap<Vec<usize>, f64>,
}

impl SparseSymTensor {
    /// The zero tensor.
    pub fn new(order: usize, dim: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidConfig(format!(
                "tensor order {order} must be at least 2"
            )));
        }
        if dim < 1 {
            return Err(Error::InvalidConfig(
                "tensor dimension must be at least 1".into(),
            ));
        }
        Ok(SparseSymTensor {
            order,
            dim,
            entries: BTreeMap::new(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    fn validate_tuple(&self, tuple: &[usize]) -> Result<Vec<usize>> {
        if tuple.len() != self.order {
            return Err(Error::DimensionMismatch(format!(
                "tuple {:?} has length {}, tensor order is {}",
                tuple,
                tuple.len(),
                self.order
            )));
        }
        let mut t = tuple.to_vec();
        t.sort_unstable();
        if t[self.order - 1] >= self.dim {
            return Err(Error::DimensionMismatch(format!(
                "tuple {t:?} references index {} outside 0..{}",
                t[self.order - 1],
                self.dim
            )));
        }
        Ok(t)
    }

    /// Sets the per-permutation value on a support tuple. Rejects duplicates.
    pub fn set(&mut self, tuple: &[usize], value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "non-finite entry value {value}"
            )));
        }
        let t = self.validate_tuple(tuple)?;
        if self.entries.contains_key(&t) {
            return Err(Error::DimensionMismatch(format!(
                "duplicate support tuple {t:?}"
            )));
        }
        self.entries.insert(t, value);
        Ok(())
    }

    /// Adds `value` to the per-permutation value on a support tuple.
    pub fn accumulate(&mut self, tuple: &[usize], value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "non-finite entry value {value}"
            )));
        }
        let t = self.validate_tuple(tuple)?;
        *self.entries.entry(t).or_insert(0.0) += value;
        Ok(())
    }

    /// Per-permutation value stored on `tuple` (zero when absent).
    pub fn value(&self, tuple: &[usize]) -> f64 {
        match self.validate_tuple(tuple) {
            Ok(t) => self.entries.get(&t).copied().unwrap_or(0.0),
            Err(_) => 0.0,
        }
    }

    /// Iterates support tuples (sorted) with their per-permutation values, in
    /// fixed lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (&[usize], f64)> {
        self.entries.iter().map(|(t, &v)| (t.as_slice(), v))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.values().all(|&v| v >= 0.0)
    }

    /// The tensor scaled entrywise by `factor`.
    pub fn scaled(&self, factor: f64) -> SparseSymTensor {
        let entries = self
            .entries
            .iter()
            .map(|(t, &v)| (t.clone(), v * factor))
            .collect();
        SparseSymTensor {
            order: self.order,
            dim: self.dim,
            entries,
        }
    }

    /// `T x^{m-1}`: the vector whose i-th component is
    /// `Σ a_{i i2 … im} x_{i2} ⋯ x_{im}` over the full symmetric expansion.
    ///
    /// Accumulation order is fixed (lexicographic tuple order), so results are
    /// bit-deterministic.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} does not match tensor dimension {}",
                x.len(),
                self.dim
            )));
        }
        let mut out = vec![0.0; self.dim];
        let m = self.order;
        for (tuple, v) in &self.entries {
            let groups = run_lengths(tuple);
            for &(i, _) in &groups {
                // Number of distinct permutations of the remaining multiset
                // once one copy of i occupies the first slot.
                let mut perms = factorial(m - 1);
                for &(j, c) in &groups {
                    let c = if j == i { c - 1 } else { c };
                    perms /= factorial(c);
                }
                let mut prod = 1.0;
                let mut skipped = false;
                for &t in tuple.iter() {
                    if !skipped && t == i {
                        skipped = true;
                        continue;
                    }
                    prod *= x[t];
                }
                out[i] += (v * perms) * prod;
            }
        }
        Ok(out)
    }

    /// Whether the support digraph (arc `i -> j` whenever some nonzero entry
    /// with first index `i` carries `j` among its remaining indices, the all-`i`
    /// tuple excluded) is strongly connected.
    ///
    /// A single-vertex tensor has no admissible arcs and is treated as not
    /// weakly irreducible, matching the rejection of degenerate inputs by the
    /// spectral operations.
    pub fn is_weakly_irreducible(&self) -> bool {
        let n = self.dim;
        if n < 2 {
            return false;
        }
        let mut arcs: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for (tuple, v) in &self.entries {
            if *v == 0.0 {
                continue;
            }
            let groups = run_lengths(tuple);
            if groups.len() == 1 {
                // all-i tuple: excluded from the arc set
                continue;
            }
            for &(i, ci) in &groups {
                for &(j, _) in &groups {
                    if i != j || ci >= 2 {
                        arcs[i].insert(j);
                    }
                }
            }
        }
        let adjacency: Vec<Vec<usize>> =
            arcs.into_iter().map(|s| s.into_iter().collect()).collect();
        strongly_connected(&adjacency)
    }
}

/// Run-length encoding of a sorted tuple: `(value, multiplicity)` pairs.
fn run_lengths(tuple: &[usize]) -> Vec<(usize, usize)> {
    let mut groups: Vec<(usize, usize)> = Vec::new();
    for &t in tuple {
        match groups.last_mut() {
            Some((v, c)) if *v == t => *c += 1,
            _ => groups.push((t, 1)),
        }
    }
    groups
}

/// Applies the dual tensor `A_s + A_d ε` to a dual vector, entirely in dual
/// arithmetic (every product drops its ε² term).
pub fn dual_tensor_apply(
    a_s: &SparseSymTensor,
    a_d: &SparseSymTensor,
    x: &[DualNumber],
) -> Result<Vec<DualNumber>> {
    if a_s.order() != a_d.order() || a_s.dim() != a_d.dim() {
        return Err(Error::DimensionMismatch(format!(
            "standard part is order {} dim {}, dual part is order {} dim {}",
            a_s.order(),
            a_s.dim(),
            a_d.order(),
            a_d.dim()
        )));
    }
    if x.len() != a_s.dim() {
        return Err(Error::DimensionMismatch(format!(
            "vector length {} does not match tensor dimension {}",
            x.len(),
            a_s.dim()
        )));
    }
    let m = a_s.order();
    let mut out = vec![DualNumber::ZERO; a_s.dim()];
    // The standard part enters with dual value (v, 0), the dual part with (0, v).
    type Lift = fn(f64) -> DualNumber;
    let parts: [(&SparseSymTensor, Lift); 2] =
        [(a_s, DualNumber::from_real), (a_d, DualNumber::from_dual)];
    for (tensor, lift) in parts {
        for (tuple, v) in &tensor.entries {
            let groups = run_lengths(tuple);
            for &(i, _) in &groups {
                let mut perms = factorial(m - 1);
                for &(j, c) in &groups {
                    let c = if j == i { c - 1 } else { c };
                    perms /= factorial(c);
                }
                let mut prod = DualNumber::ONE;
                let mut skipped = false;
                for &t in tuple.iter() {
                    if !skipped && t == i {
                        skipped = true;
                        continue;
                    }
                    prod = prod * x[t];
                }
                out[i] += lift(*v * perms) * prod;
            }
        }
    }
    Ok(out)
}

/// Tarjan strongly connected components; returns whether the digraph is a
/// single component covering every vertex.
fn strongly_connected(graph: &[Vec<usize>]) -> bool {
    let n = graph.len();
    if n == 0 {
        return false;
    }
    let mut state = TarjanState {
        index: 0,
        stack: Vec::new(),
        on_stack: vec![false; n],
        idx: vec![None; n],
        low: vec![0; n],
        components: 0,
    };
    for v in 0..n {
        if state.idx[v].is_none() {
            strongconnect(v, graph, &mut state);
            if state.components > 1 {
                return false;
            }
        }
    }
    state.components == 1
}

struct TarjanState {
    index: usize,
    stack: Vec<usize>,
    on_stack: Vec<bool>,
    idx: Vec<Option<usize>>,
    low: Vec<usize>,
    components: usize,
}

fn strongconnect(v: usize, graph: &[Vec<usize>], state: &mut TarjanState) {
    state.idx[v] = Some(state.index);
    state.low[v] = state.index;
    state.index += 1;
    state.stack.push(v);
    state.on_stack[v] = true;

    for &w in &graph[v] {
        if state.idx[w].is_none() {
            strongconnect(w, graph, state);
            state.low[v] = state.low[v].min(state.low[w]);
        } else if state.on_stack[w] {
            state.low[v] = state.low[v].min(state.idx[w].unwrap());
        }
    }

    if state.low[v] == state.idx[v].unwrap() {
        loop {
            let w = state.stack.pop().expect("stack underflow");
            state.on_stack[w] = false;
            if w == v {
                break;
            }
        }
        state.components += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{Hypergraph, Perturbation};
    use proptest::prelude::*;

    fn triple_edge() -> Hypergraph {
        Hypergraph::parse("1 2 3\n").unwrap()
    }

    fn k3() -> Hypergraph {
        Hypergraph::parse("1 2\n2 3\n1 3\n").unwrap()
    }

    #[test]
    fn adjacency_single_triple_stores_half() {
        let t = triple_edge().adjacency_tensor().unwrap();
        assert_eq!(t.order(), 3);
        assert_eq!(t.dim(), 3);
        assert_eq!(t.value(&[0, 1, 2]), 0.5);
        assert_eq!(t.value(&[2, 0, 1]), 0.5);
        assert_eq!(t.value(&[0, 0, 1]), 0.0);
    }

    #[test]
    fn adjacency_graph_edge_stores_one() {
        let h = Hypergraph::parse("1 2\n").unwrap();
        let t = h.adjacency_tensor().unwrap();
        assert_eq!(t.value(&[0, 1]), 1.0);
    }

    #[test]
    fn adjacency_of_edgeless_is_zero_tensor() {
        let h = Hypergraph::new(3, 2, vec![]).unwrap();
        let t = h.adjacency_tensor().unwrap();
        assert_eq!(t.nnz(), 0);
        assert_eq!(t.apply(&[1.0, 2.0, 3.0]).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn apply_single_triple_at_ones() {
        let t = triple_edge().adjacency_tensor().unwrap();
        assert_eq!(t.apply(&[1.0, 1.0, 1.0]).unwrap(), vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn apply_k3_neighbor_sums() {
        let t = k3().adjacency_tensor().unwrap();
        assert_eq!(t.apply(&[1.0, 2.0, 3.0]).unwrap(), vec![5.0, 4.0, 3.0]);
    }

    #[test]
    fn apply_perturbation_tensor_counts_permutations() {
        let p = Perturbation::new(vec![(vec![0, 1, 2], 1.0)]).unwrap();
        let t = p.to_tensor(3, 3).unwrap();
        assert_eq!(t.apply(&[1.0, 1.0, 1.0]).unwrap(), vec![2.0, 2.0, 2.0]);
    }

    #[test]
    fn apply_handles_repeated_indices() {
        // Tuple (0,0,1) with per-permutation value v: component 0 gets
        // 2 v x0 x1 (permutations (0,0,1),(0,1,0)), component 1 gets v x0².
        let mut t = SparseSymTensor::new(3, 2).unwrap();
        t.set(&[0, 0, 1], 3.0).unwrap();
        let out = t.apply(&[2.0, 5.0]).unwrap();
        assert_eq!(out[0], 2.0 * 3.0 * 2.0 * 5.0);
        assert_eq!(out[1], 3.0 * 4.0);
    }

    #[test]
    fn apply_rejects_wrong_length() {
        let t = triple_edge().adjacency_tensor().unwrap();
        assert!(matches!(
            t.apply(&[1.0, 1.0]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn weakly_irreducible_matches_connectivity() {
        assert!(k3().adjacency_tensor().unwrap().is_weakly_irreducible());
        let two = Hypergraph::parse("1 2 3\n4 5 6\n").unwrap();
        assert!(!two.adjacency_tensor().unwrap().is_weakly_irreducible());
    }

    #[test]
    fn single_vertex_tensor_is_not_weakly_irreducible() {
        let mut t = SparseSymTensor::new(2, 1).unwrap();
        t.set(&[0, 0], 1.0).unwrap();
        assert!(!t.is_weakly_irreducible());
    }

    #[test]
    fn diagonal_tuples_do_not_create_arcs() {
        let mut t = SparseSymTensor::new(2, 2).unwrap();
        t.set(&[0, 0], 1.0).unwrap();
        t.set(&[1, 1], 1.0).unwrap();
        assert!(!t.is_weakly_irreducible());
        t.set(&[0, 1], 1.0).unwrap();
        assert!(t.is_weakly_irreducible());
    }

    #[test]
    fn dual_apply_with_zero_dual_parts_matches_apply() {
        let h = k3();
        let a_s = h.adjacency_tensor().unwrap();
        let a_d = SparseSymTensor::new(2, 3).unwrap();
        let x: Vec<DualNumber> = [1.0, 2.0, 3.0]
            .iter()
            .map(|&v| DualNumber::from_real(v))
            .collect();
        let out = dual_tensor_apply(&a_s, &a_d, &x).unwrap();
        let expected = a_s.apply(&[1.0, 2.0, 3.0]).unwrap();
        for (o, e) in out.iter().zip(&expected) {
            assert_eq!(o.s, *e);
            assert_eq!(o.d, 0.0);
        }
    }

    #[test]
    fn dual_apply_dual_part_reduces_to_a_d_apply_when_x_is_real() {
        let h = triple_edge();
        let a_s = h.adjacency_tensor().unwrap();
        let p = Perturbation::new(vec![(vec![0, 1, 2], 2.0)]).unwrap();
        let a_d = p.to_tensor(3, 3).unwrap();
        let xs = [0.3, 0.7, 1.1];
        let x: Vec<DualNumber> = xs.iter().map(|&v| DualNumber::from_real(v)).collect();
        let out = dual_tensor_apply(&a_s, &a_d, &x).unwrap();
        let expect_d = a_d.apply(&xs).unwrap();
        let expect_s = a_s.apply(&xs).unwrap();
        for i in 0..3 {
            assert!((out[i].s - expect_s[i]).abs() < 1e-15);
            assert!((out[i].d - expect_d[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn scaled_multiplies_every_entry() {
        let t = k3().adjacency_tensor().unwrap().scaled(-2.5);
        assert_eq!(t.value(&[0, 1]), -2.5);
        assert!(!t.is_nonnegative());
    }

    #[test]
    fn set_rejects_duplicates_and_accumulate_sums() {
        let mut t = SparseSymTensor::new(2, 3).unwrap();
        t.set(&[0, 1], 1.0).unwrap();
        assert!(t.set(&[1, 0], 2.0).is_err());
        t.accumulate(&[1, 0], 2.0).unwrap();
        assert_eq!(t.value(&[0, 1]), 3.0);
    }

    prop_compose! {
        fn arb_edges(n: usize, m: usize)(picks in proptest::collection::btree_set(
            proptest::sample::subsequence((0..n).collect::<Vec<_>>(), m), 1..10))
            -> Vec<Vec<usize>> {
            picks.into_iter().collect()
        }
    }

    proptest! {
        #[test]
        fn apply_is_homogeneous_of_degree_m_minus_1(
            edges in arb_edges(6, 3),
            x in proptest::collection::vec(0.1f64..2.0, 6),
            c in 0.25f64..4.0,
        ) {
            let h = Hypergraph::new(6, 3, edges).unwrap();
            let t = h.adjacency_tensor().unwrap();
            let scaled: Vec<f64> = x.iter().map(|v| c * v).collect();
            let lhs = t.apply(&scaled).unwrap();
            let rhs = t.apply(&x).unwrap();
            let factor = c * c;
            for (l, r) in lhs.iter().zip(&rhs) {
                let want = factor * r;
                prop_assert!((l - want).abs() <= 1e-12 * (1.0 + want.abs()));
            }
        }

        #[test]
        fn adjacency_apply_equals_edge_sum_shortcut_exactly(
            edges in arb_edges(6, 3),
            x in proptest::collection::vec(0.1f64..2.0, 6),
        ) {
            let h = Hypergraph::new(6, 3, edges).unwrap();
            let t = h.adjacency_tensor().unwrap();
            let got = t.apply(&x).unwrap();
            let mut want = vec![0.0; 6];
            for e in h.edges() {
                for &i in e {
                    let mut prod = 1.0;
                    for &j in e {
                        if j != i {
                            prod *= x[j];
                        }
                    }
                    want[i] += prod;
                }
            }
            prop_assert_eq!(got, want);
        }
    }
}
