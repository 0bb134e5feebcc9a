use std::collections::BTreeSet;
use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::tensor::{factorial, SparseSymTensor};

/// An `m`-uniform hypergraph on vertices `0..n` (0-based internally; the file
/// format and all printed output use 1-based ids).
///
/// Edges are stored as strictly increasing `m`-tuples with no duplicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    m: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Builds a hypergraph after validating every edge. Edge vertex order is
    /// normalized to strictly increasing; duplicate edges are rejected.
    ///
    /// An edgeless hypergraph is a legal value (it is rejected later by the
    /// spectral and centrality operations, not by construction).
    pub fn new(n: usize, m: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidConfig(format!(
                "uniformity m = {m} must be at least 2"
            )));
        }
        let mut seen = BTreeSet::new();
        let mut normalized = Vec::with_capacity(edges.len());
        for edge in edges {
            if edge.len() != m {
                return Err(Error::DimensionMismatch(format!(
                    "edge {:?} has {} vertices, expected {}",
                    edge,
                    edge.len(),
                    m
                )));
            }
            let mut e = edge;
            e.sort_unstable();
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::DimensionMismatch(format!(
                    "edge {e:?} repeats a vertex"
                )));
            }
            if e[m - 1] >= n {
                return Err(Error::DimensionMismatch(format!(
                    "edge {e:?} references vertex {} outside 0..{n}",
                    e[m - 1]
                )));
            }
            if !seen.insert(e.clone()) {
                return Err(Error::DimensionMismatch(format!("duplicate edge {e:?}")));
            }
            normalized.push(e);
        }
        Ok(Hypergraph {
            n,
            m,
            edges: normalized,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// The uniformity `m` (every edge has exactly `m` vertices).
    pub fn uniformity(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.contains(&v)).count()
    }

    pub fn contains_edge(&self, edge: &[usize]) -> bool {
        let mut e = edge.to_vec();
        e.sort_unstable();
        self.edges.contains(&e)
    }

    /// Connectivity by breadth-first search over shared-edge adjacency.
    ///
    /// A vertex belonging to no edge counts as isolated, so the edgeless
    /// single-vertex hypergraph is not connected under this convention; this
    /// matches the weak-irreducibility convention of the adjacency tensor.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 || self.edges.is_empty() {
            return false;
        }
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for (ei, e) in self.edges.iter().enumerate() {
            for &v in e {
                incident[v].push(ei);
            }
        }
        if incident.iter().any(|inc| inc.is_empty()) {
            return false;
        }
        let mut seen_v = vec![false; self.n];
        let mut seen_e = vec![false; self.edges.len()];
        let mut queue = VecDeque::new();
        seen_v[0] = true;
        queue.push_back(0);
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &ei in &incident[v] {
                if seen_e[ei] {
                    continue;
                }
                seen_e[ei] = true;
                for &w in &self.edges[ei] {
                    if !seen_v[w] {
                        seen_v[w] = true;
                        count += 1;
                        queue.push_back(w);
                    }
                }
            }
        }
        count == self.n
    }

    /// The adjacency tensor: per-permutation value `1/(m-1)!` on every edge.
    pub fn adjacency_tensor(&self) -> Result<SparseSymTensor> {
        let mut t = SparseSymTensor::new(self.m, self.n)?;
        let v = 1.0 / factorial(self.m - 1);
        for e in &self.edges {
            t.set(e, v)?;
        }
        Ok(t)
    }

    /// Parses the edge-list file format: one edge per line, whitespace-separated
    /// 1-based vertex ids, `#` starts a comment, blank lines ignored. The vertex
    /// count is the maximum id seen.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with_n(text, None)
    }

    /// Like [`Hypergraph::parse`] but with an explicit vertex count, which must
    /// cover every id in the file.
    pub fn parse_with_n(text: &str, n_override: Option<usize>) -> Result<Self> {
        let mut edges: Vec<Vec<usize>> = Vec::new();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut arity: Option<usize> = None;
        let mut max_id = 0usize;
        for (line_no, raw) in text.lines().enumerate() {
            let line_no = line_no + 1;
            let Some((tuple, weight)) = parse_edge_line(line_no, raw, false)? else {
                continue;
            };
            debug_assert!(weight.is_none());
            match arity {
                None => arity = Some(tuple.len()),
                Some(a) if a != tuple.len() => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!(
                            "edge has {} vertices, previous edges have {a}",
                            tuple.len()
                        ),
                    })
                }
                _ => {}
            }
            max_id = max_id.max(*tuple.last().expect("non-empty tuple"));
            if !seen.insert(tuple.clone()) {
                return Err(Error::Parse {
                    line: line_no,
                    message: "duplicate edge".into(),
                });
            }
            edges.push(tuple);
        }
        let inferred_n = max_id + usize::from(!edges.is_empty());
        let n = match n_override {
            Some(n) => {
                if n < inferred_n {
                    return Err(Error::Parse {
                        line: 0,
                        message: format!(
                            "declared vertex count {n} is below the maximum vertex id"
                        ),
                    });
                }
                n
            }
            None => inferred_n,
        };
        // Edgeless input carries no uniformity information; default to 2.
        Hypergraph::new(n, arity.unwrap_or(2), edges)
    }

    /// The edge-list file representation (1-based ids, one edge per line).
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            let ids: Vec<String> = e.iter().map(|v| (v + 1).to_string()).collect();
            out.push_str(&ids.join(" "));
            out.push('\n');
        }
        out
    }
}

/// A dual perturbation: a list of `(tuple, weight)` pairs. Each tuple has
/// distinct vertices and contributes `weight` at every permutation of the
/// tuple when materialized as a tensor (weights are per-permutation values,
/// not divided by `(m-1)!`). Repeated tuples are summed on materialization.
#[derive(Debug, Clone, PartialEq)]
pub struct Perturbation {
    entries: Vec<(Vec<usize>, f64)>,
}

impl Perturbation {
    pub fn new(entries: Vec<(Vec<usize>, f64)>) -> Result<Self> {
        let mut normalized = Vec::with_capacity(entries.len());
        for (tuple, w) in entries {
            if tuple.len() < 2 {
                return Err(Error::DimensionMismatch(format!(
                    "perturbation tuple {tuple:?} has fewer than 2 vertices"
                )));
            }
            if !w.is_finite() {
                return Err(Error::InvalidConfig(format!("non-finite weight {w}")));
            }
            let mut t = tuple;
            t.sort_unstable();
            if t.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::DimensionMismatch(format!(
                    "tuple {t:?} repeats a vertex"
                )));
            }
            normalized.push((t, w));
        }
        Ok(Perturbation {
            entries: normalized,
        })
    }

    pub fn empty() -> Self {
        Perturbation {
            entries: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(Vec<usize>, f64)] {
        &self.entries
    }

    /// Tuple length shared by all entries, if any entry exists.
    pub fn arity(&self) -> Option<usize> {
        self.entries.first().map(|(t, _)| t.len())
    }

    /// Concatenates several perturbations; repeated tuples will be summed when
    /// the result is materialized as a tensor.
    pub fn merged(parts: &[Perturbation]) -> Perturbation {
        let mut entries = Vec::new();
        for p in parts {
            entries.extend(p.entries.iter().cloned());
        }
        Perturbation { entries }
    }

    /// Materializes the perturbation as an order-`m` dimension-`n` symmetric
    /// tensor with per-permutation value equal to the summed weights.
    pub fn to_tensor(&self, m: usize, n: usize) -> Result<SparseSymTensor> {
        let mut t = SparseSymTensor::new(m, n)?;
        for (tuple, w) in &self.entries {
            if tuple.len() != m {
                return Err(Error::DimensionMismatch(format!(
                    "perturbation tuple {tuple:?} has {} vertices, hypergraph is {m}-uniform",
                    tuple.len()
                )));
            }
            t.accumulate(tuple, *w)?;
        }
        Ok(t)
    }

    /// Parses the perturbation file format: like the edge-list format with an
    /// optional trailing `w=<real>` token per line (default weight 1).
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut arity: Option<usize> = None;
        for (line_no, raw) in text.lines().enumerate() {
            let line_no = line_no + 1;
            let Some((tuple, weight)) = parse_edge_line(line_no, raw, true)? else {
                continue;
            };
            match arity {
                None => arity = Some(tuple.len()),
                Some(a) if a != tuple.len() => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!(
                            "tuple has {} vertices, previous tuples have {a}",
                            tuple.len()
                        ),
                    })
                }
                _ => {}
            }
            entries.push((tuple, weight.unwrap_or(1.0)));
        }
        Perturbation::new(entries)
    }

    /// Parses a single inline tuple spec `v1,v2,...[,w=W]`.
    pub fn parse_inline(spec: &str) -> Result<Self> {
        let line = spec.split(',').collect::<Vec<_>>().join(" ");
        let parsed = parse_edge_line(1, &line, true)?;
        match parsed {
            Some((tuple, weight)) => Perturbation::new(vec![(tuple, weight.unwrap_or(1.0))]),
            None => Err(Error::Parse {
                line: 1,
                message: format!("empty perturbation spec `{spec}`"),
            }),
        }
    }

    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for (tuple, w) in &self.entries {
            let ids: Vec<String> = tuple.iter().map(|v| (v + 1).to_string()).collect();
            out.push_str(&ids.join(" "));
            out.push_str(&format!(" w={w}\n"));
        }
        out
    }
}

/// Parses one line of the edge-list format. Returns `None` for blank/comment
/// lines, otherwise the sorted 0-based tuple and the optional weight.
fn parse_edge_line(
    line_no: usize,
    raw: &str,
    allow_weight: bool,
) -> Result<Option<(Vec<usize>, Option<f64>)>> {
    let body = raw.split('#').next().unwrap_or("");
    let mut tokens: Vec<&str> = body.split_whitespace().collect();
    if tokens.is_empty() {
        return Ok(None);
    }
    let mut weight = None;
    if let Some(last) = tokens.last() {
        if let Some(value) = last.strip_prefix("w=") {
            if !allow_weight {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("unexpected token `{last}`"),
                });
            }
            let w: f64 = value.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("malformed weight `{last}`"),
            })?;
            if !w.is_finite() {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("non-finite weight `{last}`"),
                });
            }
            weight = Some(w);
            tokens.pop();
        }
    }
    if tokens.is_empty() {
        return Err(Error::Parse {
            line: line_no,
            message: "weight without vertices".into(),
        });
    }
    let mut tuple = Vec::with_capacity(tokens.len());
    for tok in tokens {
        let id: usize = tok.parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("malformed vertex id `{tok}`"),
        })?;
        if id < 1 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("vertex id {id} must be at least 1"),
            });
        }
        tuple.push(id - 1);
    }
    tuple.sort_unstable();
    if tuple.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Parse {
            line: line_no,
            message: "repeated vertex within edge".into(),
        });
    }
    Ok(Some((tuple, weight)))
}
