use nalgebra::DVector;

use crate::dual::DualNumber;
use crate::dualeig::{
    build_m_symmetric, dual_part_vector, lambda_dual, verify_dual_eigenpair, DualEigenPair,
};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Perturbation};
use crate::msolve::{numeric_rank, MMatrix, DEFAULT_RANK_TOL};
use crate::spectral::{norm_m, perron_pair, SpectralConfig};

/// Default absolute tolerance when grouping tied scores in a ranking.
pub const DEFAULT_RANK_TIE_TOL: f64 = 1e-8;
/// Residual bound every pipeline result is verified against.
pub const VERIFY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Default)]
pub struct CentralityConfig {
    pub spectral: SpectralConfig,
}

/// Diagnostics carried along with a centrality result: the configuration the
/// run used, the power-iteration effort, and the verified residuals.
#[derive(Debug, Clone)]
pub struct Provenance {
    pub config: CentralityConfig,
    pub iterations: usize,
    pub gap: f64,
    pub residual_standard: f64,
    pub residual_dual: f64,
}

/// The dual centrality vector of a connected uniform hypergraph under a dual
/// perturbation: standard scores `x_s`, dual tie-breaking scores `x_d`, and
/// the dual eigenvalue, normalized by `‖x_s‖_m = 1` and `x_sᵀ x_d = 0`.
#[derive(Debug, Clone)]
pub struct DualCentralityResult {
    pub lambda_s: f64,
    pub lambda_d: f64,
    pub x_s: Vec<f64>,
    pub x_d: Vec<f64>,
    pub provenance: Provenance,
}

impl DualCentralityResult {
    /// Per-vertex dual-number scores `(x_s)_i + (x_d)_i ε`.
    pub fn scores(&self) -> Vec<DualNumber> {
        self.x_s
            .iter()
            .zip(&self.x_d)
            .map(|(&s, &d)| DualNumber::new(s, d))
            .collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.x_s.len()
    }
}

/// Vertices partitioned into rank groups: ordered by standard score
/// descending, ties broken by dual score descending; vertices tied in both
/// share a group. Vertex ids are 0-based; groups are sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTable {
    pub groups: Vec<Vec<usize>>,
}

impl RankTable {
    /// 1-based rank-group index of a vertex.
    pub fn group_of(&self, v: usize) -> Option<usize> {
        self.groups
            .iter()
            .position(|g| g.contains(&v))
            .map(|i| i + 1)
    }

    /// Renders the table as `1 = 2 = 8 > 3 = 5 = 7 > 4 = 6` with 1-based ids.
    pub fn display_one_based(&self) -> String {
        self.groups
            .iter()
            .map(|g| {
                g.iter()
                    .map(|v| (v + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(" = ")
            })
            .collect::<Vec<_>>()
            .join(" > ")
    }
}

/// Runs the full dual-centrality pipeline:
/// 1. Perron pair of the adjacency tensor (`‖x_s‖_m = 1`);
/// 2. dual eigenvalue from the perturbation;
/// 3. the singular M-matrix and its group-inverse solve for `x_d`;
/// 4. verification of the dual eigen-equation in dual arithmetic.
pub fn dual_centrality(
    h: &Hypergraph,
    p: &Perturbation,
    cfg: &CentralityConfig,
) -> Result<DualCentralityResult> {
    if !h.is_connected() {
        return Err(Error::NotConnected);
    }
    let n = h.vertex_count();
    let m = h.uniformity();
    if let Some(a) = p.arity() {
        if a != m {
            return Err(Error::DimensionMismatch(format!(
                "perturbation tuples have {a} vertices, hypergraph is {m}-uniform"
            )));
        }
    }
    let a_s = h.adjacency_tensor()?;
    let a_d = p.to_tensor(m, n)?;

    let perron = perron_pair(&a_s, &cfg.spectral)?;
    let lambda_s = perron.lambda_s;
    let x_s = perron.x_s;

    let m_entries = build_m_symmetric(h, lambda_s, &x_s)?;
    let mm = MMatrix::new(m_entries, DVector::from_vec(x_s.clone()), true)?;
    let lambda_d = lambda_dual(mm.y_left(), &a_d, &x_s)?;
    let x_d = dual_part_vector(&mm, &a_d, lambda_d, &x_s)?;

    let pair = DualEigenPair::new(lambda_s, lambda_d, &x_s, &x_d)?;
    let report = verify_dual_eigenpair(&a_s, &a_d, &pair, VERIFY_TOL)?;

    Ok(DualCentralityResult {
        lambda_s,
        lambda_d,
        x_s,
        x_d,
        provenance: Provenance {
            config: cfg.clone(),
            iterations: perron.iterations,
            gap: perron.gap,
            residual_standard: report.standard,
            residual_dual: report.dual,
        },
    })
}

/// Sorts vertices by `x_s` descending, then refines groups of `x_s`-ties by
/// `x_d` descending, clustering values whose neighbours differ by at most
/// `tie_tol`.
pub fn rank_vertices(result: &DualCentralityResult, tie_tol: f64) -> RankTable {
    let standard_groups = cluster_desc(&result.x_s, (0..result.vertex_count()).collect(), tie_tol);
    let mut groups = Vec::new();
    for g in standard_groups {
        for mut sub in cluster_desc(&result.x_d, g, tie_tol) {
            sub.sort_unstable();
            groups.push(sub);
        }
    }
    RankTable { groups }
}

/// Splits `ids` into clusters by descending `scores`, merging neighbours whose
/// scores differ by at most `tie_tol`.
fn cluster_desc(scores: &[f64], mut ids: Vec<usize>, tie_tol: f64) -> Vec<Vec<usize>> {
    ids.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .expect("finite scores")
            .then(a.cmp(&b))
    });
    let mut out: Vec<Vec<usize>> = Vec::new();
    for v in ids {
        match out.last_mut() {
            Some(group) if (scores[*group.last().unwrap()] - scores[v]).abs() <= tie_tol => {
                group.push(v)
            }
            _ => out.push(vec![v]),
        }
    }
    out
}

/// A built-in experiment instance: a hypergraph plus one or more single-run
/// perturbations.
#[derive(Debug, Clone)]
pub struct BuiltinInstance {
    pub name: &'static str,
    pub hypergraph: Hypergraph,
    pub perturbations: Vec<Perturbation>,
}

pub const BUILTIN_NAMES: [&str; 2] = ["fig1-candidate", "fig2-candidate"];

/// Returns a built-in instance by name.
///
/// `fig1-candidate` is a cubic graph on 8 vertices whose unique triangle is
/// {1,2,8}; the bundled perturbation marks that triangle. `fig2-candidate` is
/// a 2-regular 3-uniform hypergraph on 9 vertices; the bundled perturbations
/// mark hyperedges {1,2,3} and {4,5,6}.
pub fn builtin_instance(name: &str) -> Result<BuiltinInstance> {
    match name {
        "fig1-candidate" => {
            let edges = vec![
                vec![0, 1],
                vec![1, 7],
                vec![0, 7],
                vec![0, 2],
                vec![1, 4],
                vec![6, 7],
                vec![2, 3],
                vec![2, 5],
                vec![3, 4],
                vec![4, 5],
                vec![3, 6],
                vec![5, 6],
            ];
            let hypergraph = Hypergraph::new(8, 2, edges)?;
            let triangle = Perturbation::new(vec![
                (vec![0, 1], 1.0),
                (vec![1, 7], 1.0),
                (vec![0, 7], 1.0),
            ])?;
            Ok(BuiltinInstance {
                name: "fig1-candidate",
                hypergraph,
                perturbations: vec![triangle],
            })
        }
        "fig2-candidate" => {
            let edges = vec![
                vec![0, 1, 2],
                vec![3, 4, 5],
                vec![0, 3, 4],
                vec![1, 5, 6],
                vec![2, 7, 8],
                vec![6, 7, 8],
            ];
            let hypergraph = Hypergraph::new(9, 3, edges)?;
            let first = Perturbation::new(vec![(vec![0, 1, 2], 1.0)])?;
            let second = Perturbation::new(vec![(vec![3, 4, 5], 1.0)])?;
            Ok(BuiltinInstance {
                name: "fig2-candidate",
                hypergraph,
                perturbations: vec![first, second],
            })
        }
        other => Err(Error::UnknownInstance(other.to_string())),
    }
}

/// Reference scores shipped with the built-in instances (4-decimal values),
/// used for the match verdict in reports.
#[derive(Debug, Clone)]
pub struct ReferenceTable {
    pub x_s: Vec<f64>,
    pub x_d: Vec<f64>,
    /// 0-based rank groups.
    pub ranking: Vec<Vec<usize>>,
}

/// The reference table for a built-in instance and perturbation index, if one
/// is on record.
pub fn reference_table(name: &str, perturbation_index: usize) -> Option<ReferenceTable> {
    match (name, perturbation_index) {
        ("fig1-candidate", 0) => Some(ReferenceTable {
            x_s: vec![0.3536; 8],
            x_d: vec![
                0.2983, 0.2983, -0.1436, -0.2320, -0.1436, -0.2320, -0.1436, 0.2983,
            ],
            ranking: vec![vec![0, 1, 7], vec![2, 4, 6], vec![3, 5]],
        }),
        ("fig2-candidate", 0) => Some(ReferenceTable {
            x_s: vec![0.4807; 9],
            x_d: vec![
                0.2137, 0.2137, 0.2137, -0.1068, -0.1068, -0.1068, -0.1068, -0.1068, -0.1068,
            ],
            ranking: vec![vec![0, 1, 2], vec![3, 4, 5, 6, 7, 8]],
        }),
        ("fig2-candidate", 1) => Some(ReferenceTable {
            x_s: vec![0.4807; 9],
            x_d: vec![
                0.0855, -0.1068, -0.2991, 0.5342, 0.5342, 0.3419, -0.2350, -0.4273, -0.4273,
            ],
            ranking: vec![
                vec![3, 4],
                vec![5],
                vec![0],
                vec![1],
                vec![6],
                vec![2],
                vec![7, 8],
            ],
        }),
        _ => None,
    }
}

/// Entrywise comparison of a result against a reference table at the given
/// absolute tolerance (covers the 4-decimal rounding of the reference data).
pub fn matches_reference(result: &DualCentralityResult, table: &ReferenceTable, tol: f64) -> bool {
    result.x_s.len() == table.x_s.len()
        && result
            .x_s
            .iter()
            .zip(&table.x_s)
            .all(|(got, want)| (got - want).abs() <= tol)
        && result
            .x_d
            .iter()
            .zip(&table.x_d)
            .all(|(got, want)| (got - want).abs() <= tol)
}

/// One named verification check: `value` against `threshold`.
#[derive(Debug, Clone)]
pub struct VerifyCheck {
    pub name: &'static str,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub checks: Vec<VerifyCheck>,
}

impl VerifyReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&VerifyCheck> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

/// Verifies a (possibly externally supplied) centrality result against the
/// instance it claims to describe: gauge conditions, the structural
/// invariants of the M-matrix, and the dual eigen-equation residuals.
pub fn verify_centrality(
    h: &Hypergraph,
    p: &Perturbation,
    lambda_s: f64,
    lambda_d: f64,
    x_s: &[f64],
    x_d: &[f64],
) -> Result<VerifyReport> {
    if !h.is_connected() {
        return Err(Error::NotConnected);
    }
    let n = h.vertex_count();
    let m = h.uniformity();
    if x_s.len() != n || x_d.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "score vectors have lengths {} and {}, vertex count is {n}",
            x_s.len(),
            x_d.len()
        )));
    }
    let a_s = h.adjacency_tensor()?;
    let a_d = p.to_tensor(m, n)?;
    let mut checks = Vec::new();
    let mut push = |name: &'static str, value: f64, threshold: f64| {
        checks.push(VerifyCheck {
            name,
            value,
            threshold,
            pass: value <= threshold,
        });
    };

    let min_xs = x_s.iter().cloned().fold(f64::INFINITY, f64::min);
    push("x_s_positive", if min_xs > 0.0 { 0.0 } else { 1.0 }, 0.0);
    push("x_s_m_norm_unit", (norm_m(x_s, m) - 1.0).abs(), 1e-12);

    let m_entries = build_m_symmetric(h, lambda_s, x_s)?;
    let mut max_offdiag = f64::NEG_INFINITY;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                max_offdiag = max_offdiag.max(m_entries[(i, j)]);
            }
        }
    }
    push("m_z_matrix", max_offdiag.max(0.0), 1e-12);

    let xs_vec = DVector::from_vec(x_s.to_vec());
    push("m_times_x_s", (&m_entries * &xs_vec).amax(), 1e-10);
    let y = &xs_vec / xs_vec.norm();
    push("y_left_times_m", (m_entries.transpose() * &y).amax(), 1e-10);
    let rank = numeric_rank(&m_entries, DEFAULT_RANK_TOL);
    push(
        "m_rank_n_minus_1",
        (rank as f64 - (n as f64 - 1.0)).abs(),
        0.0,
    );

    let ortho: f64 = x_s.iter().zip(x_d).map(|(a, b)| a * b).sum();
    push("x_s_dot_x_d", ortho.abs(), 1e-10);

    let pair = DualEigenPair::new(lambda_s, lambda_d, x_s, x_d)?;
    let residuals = verify_dual_eigenpair(&a_s, &a_d, &pair, VERIFY_TOL)?;
    push("residual_standard", residuals.standard, VERIFY_TOL);
    push("residual_dual", residuals.dual, VERIFY_TOL);

    Ok(VerifyReport { checks })
}
