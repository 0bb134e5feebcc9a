//! Test-only oracles and instance generators for exercising `dualcen`.
//!
//! Everything here recomputes quantities by brute force from first
//! definitions (dense enumeration, union-find, dense matrix iteration), kept
//! deliberately independent of the sparse/bordered implementation paths in
//! the library under test.

use nalgebra::{DMatrix, DVector};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dualcen::{Hypergraph, Perturbation, SparseSymTensor};

pub use rand::seq::SliceRandom;
pub use rand::Rng;

/// Deterministic RNG for corpus generation.
pub type TestRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A dense order-`m` dimension-`n` tensor, expanded entry by entry.
pub struct DenseTensor {
    pub m: usize,
    pub n: usize,
    values: Vec<f64>,
}

impl DenseTensor {
    /// Expands a sparse symmetric tensor by writing its per-permutation value
    /// at every distinct permutation of every support tuple.
    pub fn from_sparse(t: &SparseSymTensor) -> DenseTensor {
        let m = t.order();
        let n = t.dim();
        let mut values = vec![0.0; n.pow(m as u32)];
        for (tuple, v) in t.iter() {
            let mut perm = tuple.to_vec();
            for p in distinct_permutations(&mut perm) {
                let mut idx = 0;
                for &i in &p {
                    idx = idx * n + i;
                }
                values[idx] = v;
            }
        }
        DenseTensor { m, n, values }
    }

    pub fn entry(&self, index: &[usize]) -> f64 {
        let mut idx = 0;
        for &i in index {
            idx = idx * self.n + i;
        }
        self.values[idx]
    }

    /// `(T x^{m-1})_i` straight from the definition: a full sum over all
    /// n^{m-1} index combinations.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let mut out = vec![0.0; self.n];
        let combos = self.n.pow((self.m - 1) as u32);
        let mut index = vec![0usize; self.m];
        for (i, out_i) in out.iter_mut().enumerate() {
            index[0] = i;
            let mut acc = 0.0;
            for code in 0..combos {
                let mut c = code;
                let mut prod = 1.0;
                for slot in (1..self.m).rev() {
                    index[slot] = c % self.n;
                    c /= self.n;
                    prod *= x[index[slot]];
                }
                acc += self.entry(&index) * prod;
            }
            *out_i = acc;
        }
        out
    }

    /// The slot-`k` contraction matrix (`2 <= k <= m`): entry `(i, j)` sums the
    /// tensor over all indices with slot 1 fixed to `i` and slot `k` fixed to
    /// `j`, weighting the remaining slots by `x`.
    pub fn slot_matrix(&self, k: usize, x: &[f64]) -> DMatrix<f64> {
        assert!((2..=self.m).contains(&k));
        let free: Vec<usize> = (1..self.m).filter(|&s| s != k - 1).collect();
        let combos = self.n.pow(free.len() as u32);
        let mut out = DMatrix::zeros(self.n, self.n);
        let mut index = vec![0usize; self.m];
        for i in 0..self.n {
            for j in 0..self.n {
                index[0] = i;
                index[k - 1] = j;
                let mut acc = 0.0;
                for code in 0..combos {
                    let mut c = code;
                    let mut prod = 1.0;
                    for &slot in free.iter().rev() {
                        index[slot] = c % self.n;
                        c /= self.n;
                        prod *= x[index[slot]];
                    }
                    acc += self.entry(&index) * prod;
                }
                out[(i, j)] = acc;
            }
        }
        out
    }
}

/// All distinct permutations of a multiset, via sorted lexicographic stepping.
fn distinct_permutations(items: &mut [usize]) -> Vec<Vec<usize>> {
    items.sort_unstable();
    let mut out = vec![items.to_vec()];
    while next_permutation(items) {
        out.push(items.to_vec());
    }
    out
}

fn next_permutation(arr: &mut [usize]) -> bool {
    if arr.len() < 2 {
        return false;
    }
    let mut i = arr.len() - 1;
    while i > 0 && arr[i - 1] >= arr[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = arr.len() - 1;
    while arr[j] <= arr[i - 1] {
        j -= 1;
    }
    arr.swap(i - 1, j);
    arr[i..].reverse();
    true
}

/// Union-find connectivity oracle: `true` iff every vertex is covered by an
/// edge and all edges merge into one component.
pub fn union_find_connected(h: &Hypergraph) -> bool {
    let n = h.vertex_count();
    if n == 0 || h.edge_count() == 0 {
        return false;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    let mut covered = vec![false; n];
    for e in h.edges() {
        for &v in e {
            covered[v] = true;
            let (a, b) = (find(&mut parent, e[0]), find(&mut parent, v));
            parent[a] = b;
        }
    }
    if !covered.iter().all(|&c| c) {
        return false;
    }
    let root = find(&mut parent, 0);
    (0..n).all(|v| find(&mut parent, v) == root)
}

/// A random connected `m`-uniform hypergraph on `n` vertices: a covering
/// chain of edges (each new edge reuses one covered vertex) plus a few extras.
pub fn random_connected_hypergraph(rng: &mut TestRng, n: usize, m: usize) -> Hypergraph {
    assert!(m >= 2 && n >= m, "need n >= m >= 2");
    loop {
        let mut vertices: Vec<usize> = (0..n).collect();
        vertices.shuffle(rng);
        let mut covered: Vec<usize> = Vec::new();
        let mut edges: Vec<Vec<usize>> = Vec::new();
        let mut remaining = vertices;
        while !remaining.is_empty() {
            let mut edge: Vec<usize> = Vec::with_capacity(m);
            if covered.is_empty() {
                for _ in 0..m {
                    edge.push(remaining.pop().unwrap());
                }
            } else {
                edge.push(covered[rng.random_range(0..covered.len())]);
                while edge.len() < m && !remaining.is_empty() {
                    edge.push(remaining.pop().unwrap());
                }
                while edge.len() < m {
                    // Pad from covered vertices not already in the edge.
                    let v = covered[rng.random_range(0..covered.len())];
                    if !edge.contains(&v) {
                        edge.push(v);
                    }
                }
            }
            covered.extend(edge.iter().copied());
            edge.sort_unstable();
            if !edges.contains(&edge) {
                edges.push(edge);
            }
        }
        // A few extra random edges for variety.
        let extras = rng.random_range(0..=n / 2);
        let mut pool: Vec<usize> = (0..n).collect();
        for _ in 0..extras {
            pool.shuffle(rng);
            let mut edge: Vec<usize> = pool[..m].to_vec();
            edge.sort_unstable();
            if !edges.contains(&edge) {
                edges.push(edge);
            }
        }
        let h = Hypergraph::new(n, m, edges).expect("generated edges are valid");
        if union_find_connected(&h) {
            return h;
        }
    }
}

/// A random single-tuple perturbation on `n` vertices with weight in
/// `[0.25, 2]`, biased towards existing edges of `h` when possible.
pub fn random_perturbation(rng: &mut TestRng, h: &Hypergraph) -> Perturbation {
    let m = h.uniformity();
    let n = h.vertex_count();
    let tuple = if !h.edges().is_empty() && rng.random_bool(0.7) {
        h.edges()[rng.random_range(0..h.edge_count())].clone()
    } else {
        let mut pool: Vec<usize> = (0..n).collect();
        pool.shuffle(rng);
        let mut t = pool[..m].to_vec();
        t.sort_unstable();
        t
    };
    let weight = rng.random_range(0.25..2.0);
    Perturbation::new(vec![(tuple, weight)]).expect("valid tuple")
}

/// Random not-necessarily-connected hypergraph (for connectivity oracles).
pub fn random_hypergraph(rng: &mut TestRng, n: usize, m: usize) -> Hypergraph {
    assert!(m >= 2 && n >= m);
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let count = rng.random_range(0..=n);
    let mut pool: Vec<usize> = (0..n).collect();
    for _ in 0..count {
        pool.shuffle(rng);
        let mut edge: Vec<usize> = pool[..m].to_vec();
        edge.sort_unstable();
        if !edges.contains(&edge) {
            edges.push(edge);
        }
    }
    Hypergraph::new(n, m, edges).expect("generated edges are valid")
}

/// The dense adjacency matrix of a graph (m = 2 hypergraph).
pub fn dense_adjacency(h: &Hypergraph) -> DMatrix<f64> {
    assert_eq!(h.uniformity(), 2);
    let n = h.vertex_count();
    let mut a = DMatrix::zeros(n, n);
    for e in h.edges() {
        a[(e[0], e[1])] = 1.0;
        a[(e[1], e[0])] = 1.0;
    }
    a
}

/// Dense shifted power method on a nonnegative irreducible matrix, run to a
/// tight iterate difference. Returns `(λ, x)` with `‖x‖₂ = 1`, `x > 0`.
pub fn dense_power_method(a: &DMatrix<f64>, tol: f64, max_iter: usize) -> (f64, DVector<f64>) {
    let n = a.nrows();
    // The +I shift makes the iteration matrix primitive.
    let shifted = a + DMatrix::identity(n, n);
    let mut x = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    let mut lambda = 0.0;
    for _ in 0..max_iter {
        let y = &shifted * &x;
        let norm = y.norm();
        let next = y / norm;
        let delta = (&next - &x).amax();
        x = next;
        lambda = x.dot(&(&shifted * &x)) - 1.0;
        if delta < tol {
            break;
        }
    }
    (lambda, x)
}
