use nalgebra::{DMatrix, DVector};

use crate::dual::DualNumber;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::msolve::{group_apply, one_inverse_principal, MMatrix};
use crate::tensor::{dual_tensor_apply, SparseSymTensor};

/// Default absolute tolerance on `(x_s)_i = (x_s)_j` for tie differences.
pub const DEFAULT_TIE_TOL: f64 = 1e-9;

/// A dual eigenpair `(λ_s + λ_d ε, x_s + x_d ε)` with the gauge
/// `‖x_s‖_m = 1`, `x_sᵀ x_d = 0`.
#[derive(Debug, Clone)]
pub struct DualEigenPair {
    pub lambda: DualNumber,
    pub x: Vec<DualNumber>,
}

impl DualEigenPair {
    pub fn new(lambda_s: f64, lambda_d: f64, x_s: &[f64], x_d: &[f64]) -> Result<Self> {
        if x_s.len() != x_d.len() {
            return Err(Error::DimensionMismatch(format!(
                "standard part has length {}, dual part {}",
                x_s.len(),
                x_d.len()
            )));
        }
        let x = x_s
            .iter()
            .zip(x_d)
            .map(|(&s, &d)| DualNumber::new(s, d))
            .collect();
        Ok(DualEigenPair {
            lambda: DualNumber::new(lambda_s, lambda_d),
            x,
        })
    }

    pub fn x_s(&self) -> Vec<f64> {
        self.x.iter().map(|v| v.s).collect()
    }

    pub fn x_d(&self) -> Vec<f64> {
        self.x.iter().map(|v| v.d).collect()
    }
}

/// Residuals of the dual eigen-equation, split into standard and dual parts.
#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub standard: f64,
    pub dual: f64,
    pub tol: f64,
}

impl ResidualReport {
    pub fn pass(&self) -> bool {
        self.standard <= self.tol && self.dual <= self.tol
    }
}

/// Which generalized inverse backs a tie-difference evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InverseKind {
    Group,
    /// Principal-submatrix `{1}`-inverse dropping the given 0-based index.
    Principal(usize),
}

/// The matrix `M = (m-1) λ_s diag(x_s)^{m-2} - Σ_{k=2}^m A^{(k)}` of the
/// dual eigen-equation, built from the tensor representation.
///
/// `A^{(k)}` contracts the tensor with `x_s` in every slot except 1 and `k`.
/// Because storage is symmetric, the slot matrices coincide for every `k`, so
/// one contraction is computed and summed `m - 1` times.
pub fn build_m_general(a_s: &SparseSymTensor, lambda_s: f64, x_s: &[f64]) -> Result<DMatrix<f64>> {
    let n = a_s.dim();
    let m = a_s.order();
    if x_s.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "vector length {} does not match tensor dimension {n}",
            x_s.len()
        )));
    }
    let contraction = slot_contraction(a_s, x_s);
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        out[(i, i)] = (m - 1) as f64 * lambda_s * x_s[i].powi(m as i32 - 2);
    }
    for _slot in 2..=m {
        out -= &contraction;
    }
    Ok(out)
}

/// The matrix whose `(i, j)` entry sums, over every placement of `i` in slot 1
/// and `j` in slot `k` of a stored support tuple, the tuple value times the
/// product of `x_s` over the remaining slots. Identical for every `k >= 2`
/// under symmetric storage.
fn slot_contraction(a_s: &SparseSymTensor, x_s: &[f64]) -> DMatrix<f64> {
    let n = a_s.dim();
    let m = a_s.order();
    let mut out = DMatrix::zeros(n, n);
    for (tuple, v) in a_s.iter() {
        let mut groups: Vec<(usize, usize)> = Vec::new();
        for &t in tuple {
            match groups.last_mut() {
                Some((u, c)) if *u == t => *c += 1,
                _ => groups.push((t, 1)),
            }
        }
        for &(i, ci) in &groups {
            for &(j, _) in &groups {
                if i == j && ci < 2 {
                    continue;
                }
                // Distinct arrangements of the remaining m-2 indices.
                let mut perms = crate::tensor::factorial(m - 2);
                let mut prod = 1.0;
                for &(u, c) in &groups {
                    let mut c = c;
                    if u == i {
                        c -= 1;
                    }
                    if u == j {
                        c -= 1;
                    }
                    perms /= crate::tensor::factorial(c);
                    prod *= x_s[u].powi(c as i32);
                }
                out[(i, j)] += (v * perms) * prod;
            }
        }
    }
    out
}

/// The matrix of the dual eigen-equation built directly from the hypergraph:
/// diagonal `(m-1) λ_s (x_s)_u^{m-2}`, and for adjacent `u ≠ v` the negated
/// sum of `x_s` products over the edges containing both.
///
/// The off-diagonal sign makes the result a Z-matrix with `M x_s = 0`, which
/// is the form required by the dual eigen-equation.
pub fn build_m_symmetric(h: &Hypergraph, lambda_s: f64, x_s: &[f64]) -> Result<DMatrix<f64>> {
    let n = h.vertex_count();
    let m = h.uniformity();
    if x_s.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "vector length {} does not match vertex count {n}",
            x_s.len()
        )));
    }
    let mut out = DMatrix::zeros(n, n);
    for u in 0..n {
        out[(u, u)] = (m - 1) as f64 * lambda_s * x_s[u].powi(m as i32 - 2);
    }
    for e in h.edges() {
        for &u in e {
            for &v in e {
                if u == v {
                    continue;
                }
                let mut prod = 1.0;
                for &w in e {
                    if w != u && w != v {
                        prod *= x_s[w];
                    }
                }
                out[(u, v)] -= prod;
            }
        }
    }
    Ok(out)
}

/// `λ_d = yᵀ(A_d x_s^{m-1}) / yᵀ x_s^{[m-1]}`; invariant under scaling of y.
pub fn lambda_dual(y: &DVector<f64>, a_d: &SparseSymTensor, x_s: &[f64]) -> Result<f64> {
    if y.len() != x_s.len() {
        return Err(Error::DimensionMismatch(format!(
            "left null vector length {} does not match vector length {}",
            y.len(),
            x_s.len()
        )));
    }
    let p = a_d.order() as i32 - 1;
    let ad_x = a_d.apply(x_s)?;
    let numerator: f64 = y.iter().zip(&ad_x).map(|(yi, vi)| yi * vi).sum();
    let denominator: f64 = y.iter().zip(x_s).map(|(yi, xi)| yi * xi.powi(p)).sum();
    if denominator <= 0.0 {
        return Err(Error::DegenerateDenominator(denominator));
    }
    Ok(numerator / denominator)
}

/// `b = (A_d - λ_d I) x_s^{m-1} = A_d x_s^{m-1} - λ_d x_s^{[m-1]}`, the
/// right-hand side of the dual eigen-equation.
pub fn dual_system_rhs(a_d: &SparseSymTensor, lambda_d: f64, x_s: &[f64]) -> Result<DVector<f64>> {
    let p = a_d.order() as i32 - 1;
    let ad_x = a_d.apply(x_s)?;
    Ok(DVector::from_iterator(
        x_s.len(),
        ad_x.iter()
            .zip(x_s)
            .map(|(vi, xi)| vi - lambda_d * xi.powi(p)),
    ))
}

/// The dual part `x_d = M^# (A_d - λ_d I) x_s^{m-1}`, gauge-fixed so that
/// `x_sᵀ x_d = 0`.
///
/// The explicit orthogonalization after the group solve is a numerical no-op
/// when M is symmetric (the solve already gauges against `y ∥ x_s`) but is
/// required on the general path where `y ∦ x_s`.
pub fn dual_part_vector(
    m: &MMatrix,
    a_d: &SparseSymTensor,
    lambda_d: f64,
    x_s: &[f64],
) -> Result<Vec<f64>> {
    let b = dual_system_rhs(a_d, lambda_d, x_s)?;
    let z = group_apply(m, &b)?;
    Ok(orthogonalize_against(&z, x_s))
}

/// Removes the `x_s` component: `z - (x_sᵀ z / x_sᵀ x_s) x_s`. Adding any
/// multiple of `x_s` stays inside the solution set, so this fixes the gauge
/// without disturbing `M x_d = b`.
fn orthogonalize_against(z: &DVector<f64>, x_s: &[f64]) -> Vec<f64> {
    let dot: f64 = x_s.iter().zip(z.iter()).map(|(x, z)| x * z).sum();
    let nrm2: f64 = x_s.iter().map(|x| x * x).sum();
    let c = dot / nrm2;
    z.iter().zip(x_s).map(|(z, x)| z - c * x).collect()
}

/// `(x_d)_i - (x_d)_j` evaluated through the chosen generalized inverse.
/// Defined only for vertices tied in the standard part; any `{1}`-inverse
/// yields the same value as the group inverse.
pub fn tie_difference(
    i: usize,
    j: usize,
    m: &MMatrix,
    b: &DVector<f64>,
    kind: InverseKind,
    tie_tol: f64,
) -> Result<f64> {
    let n = m.dim();
    if i >= n || j >= n {
        return Err(Error::DimensionMismatch(format!(
            "vertex pair ({i}, {j}) outside 0..{n}"
        )));
    }
    let diff = (m.x_right()[i] - m.x_right()[j]).abs();
    if diff > tie_tol {
        return Err(Error::NotTied { i, j, diff });
    }
    let z = match kind {
        InverseKind::Group => group_apply(m, b)?,
        InverseKind::Principal(k) => one_inverse_principal(m, k)? * b,
    };
    Ok(z[i] - z[j])
}

/// Evaluates both sides of `A x^{m-1} = λ x^{[m-1]}` in dual arithmetic and
/// reports the ∞-norms of the standard- and dual-part residuals.
pub fn verify_dual_eigenpair(
    a_s: &SparseSymTensor,
    a_d: &SparseSymTensor,
    pair: &DualEigenPair,
    tol: f64,
) -> Result<ResidualReport> {
    let lhs = dual_tensor_apply(a_s, a_d, &pair.x)?;
    let p = a_s.order() - 1;
    let mut standard = 0.0f64;
    let mut dual = 0.0f64;
    for (lhs_i, x_i) in lhs.iter().zip(&pair.x) {
        let rhs_i = pair.lambda * x_i.powi(p);
        standard = standard.max((lhs_i.s - rhs_i.s).abs());
        dual = dual.max((lhs_i.d - rhs_i.d).abs());
    }
    Ok(ResidualReport {
        standard,
        dual,
        tol,
    })
}
