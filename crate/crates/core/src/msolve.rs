use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative tolerance for rank decisions (scaled by the largest singular value).
pub const DEFAULT_RANK_TOL: f64 = 1e-10;
/// Absolute tolerance on the null-vector residuals `M x` and `yᵀ M`.
pub const NULL_RESIDUAL_TOL: f64 = 1e-10;
/// Relative tolerance on the consistency check `yᵀ b = 0` in [`group_apply`].
pub const CONSISTENCY_TOL: f64 = 1e-8;

/// An irreducible singular M-matrix together with its (known) positive right
/// null vector and its computed positive left null vector (`‖y‖₂ = 1`).
///
/// Construction verifies the defining invariants: nonpositive off-diagonal
/// entries, `M x = 0` and `yᵀ M = 0` to `1e-10`, and rank `n - 1`.
#[derive(Debug, Clone)]
pub struct MMatrix {
    entries: DMatrix<f64>,
    x_right: DVector<f64>,
    y_left: DVector<f64>,
}

impl MMatrix {
    pub fn new(entries: DMatrix<f64>, x_right: DVector<f64>, hint_symmetric: bool) -> Result<Self> {
        Self::with_rank_tol(entries, x_right, hint_symmetric, DEFAULT_RANK_TOL)
    }

    pub fn with_rank_tol(
        entries: DMatrix<f64>,
        x_right: DVector<f64>,
        hint_symmetric: bool,
        rank_tol: f64,
    ) -> Result<Self> {
        let n = entries.nrows();
        if entries.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, expected square",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if x_right.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "null vector length {} does not match matrix size {n}",
                x_right.len()
            )));
        }
        if x_right.iter().any(|&v| v <= 0.0) {
            return Err(Error::NotPositive(
                "right null vector must be entrywise positive".into(),
            ));
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && entries[(i, j)] > 1e-12 {
                    return Err(Error::NotZMatrix { i, j });
                }
            }
        }
        let mx = (&entries * &x_right).amax();
        if mx > NULL_RESIDUAL_TOL {
            return Err(Error::NullInvariant(format!(
                "‖M x‖_∞ = {mx:.3e} exceeds {NULL_RESIDUAL_TOL:e}"
            )));
        }
        let y_left = left_null_vector(&entries, hint_symmetric, &x_right)?;
        let ym = (entries.transpose() * &y_left).amax();
        if ym > NULL_RESIDUAL_TOL {
            return Err(Error::NullInvariant(format!(
                "‖yᵀ M‖_∞ = {ym:.3e} exceeds {NULL_RESIDUAL_TOL:e}"
            )));
        }
        let rank = numeric_rank(&entries, rank_tol);
        if rank != n - 1 {
            return Err(Error::RankDeficient {
                got: rank,
                expected: n - 1,
            });
        }
        Ok(MMatrix {
            entries,
            x_right,
            y_left,
        })
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn x_right(&self) -> &DVector<f64> {
        &self.x_right
    }

    /// Positive left null vector, normalized to unit 2-norm.
    pub fn y_left(&self) -> &DVector<f64> {
        &self.y_left
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }
}

/// Number of singular values above `rel_tol` times the largest one.
pub fn numeric_rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * max).count()
}

/// The positive left null vector of an irreducible singular M-matrix, with
/// `‖y‖₂ = 1`.
///
/// With `hint_symmetric` the identity `y ∥ x_s` is used directly. Otherwise y
/// is computed from a bordered factorization of `Mᵀ`: the unique solution of
/// `Mᵀ z = 0`, `x_sᵀ z = 1` (the border deflates the known kernel direction).
pub fn left_null_vector(
    m: &DMatrix<f64>,
    hint_symmetric: bool,
    x_s: &DVector<f64>,
) -> Result<DVector<f64>> {
    let n = m.nrows();
    if m.ncols() != n || x_s.len() != n {
        return Err(Error::DimensionMismatch(
            "left_null_vector: shape mismatch".into(),
        ));
    }
    if hint_symmetric {
        if x_s.iter().any(|&v| v <= 0.0) {
            return Err(Error::NotPositive("x_s must be entrywise positive".into()));
        }
        return Ok(x_s / x_s.norm());
    }

    let mut bordered = DMatrix::zeros(n + 1, n + 1);
    bordered.view_mut((0, 0), (n, n)).copy_from(&m.transpose());
    for i in 0..n {
        bordered[(i, n)] = x_s[i];
        bordered[(n, i)] = x_s[i];
    }
    let mut rhs = DVector::zeros(n + 1);
    rhs[n] = 1.0;
    let sol = bordered
        .lu()
        .solve(&rhs)
        .ok_or(Error::NotSingular(f64::INFINITY))?;
    let mut z = sol.rows(0, n).into_owned();

    let m_scale = m.amax().max(1.0);
    let residual = (m.transpose() * &z).amax() / (z.amax().max(f64::MIN_POSITIVE) * m_scale);
    if residual > 1e-8 {
        return Err(Error::NotSingular(residual));
    }
    if z.sum() < 0.0 {
        z = -z;
    }
    if z.iter().any(|&v| v <= 0.0) {
        return Err(Error::NotPositive(
            "left null vector has nonpositive entries; input is not an irreducible singular M-matrix".into(),
        ));
    }
    Ok(&z / z.norm())
}

/// Applies the group inverse: solves `M z = b` with `yᵀ z = 0` through the
/// nonsingular bordered system `[[M, x], [yᵀ, 0]] [z; μ] = [b; 0]`.
///
/// Requires `b ∈ R(M)`, i.e. `yᵀ b = 0` up to [`CONSISTENCY_TOL`] relative to
/// `‖b‖₂`.
pub fn group_apply(m: &MMatrix, b: &DVector<f64>) -> Result<DVector<f64>> {
    let n = m.dim();
    if b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side length {} does not match matrix size {n}",
            b.len()
        )));
    }
    let along = m.y_left.dot(b).abs();
    // The absolute floor keeps pure rounding residue (b ≈ 0 from cancelling
    // terms) from tripping the relative test.
    let floor = 1e-12 * m.entries.amax().max(1.0);
    if along > CONSISTENCY_TOL * b.norm() + floor {
        return Err(Error::Inconsistent(along));
    }
    let mut bordered = DMatrix::zeros(n + 1, n + 1);
    bordered.view_mut((0, 0), (n, n)).copy_from(&m.entries);
    for i in 0..n {
        bordered[(i, n)] = m.x_right[i];
        bordered[(n, i)] = m.y_left[i];
    }
    let mut rhs = DVector::zeros(n + 1);
    rhs.rows_mut(0, n).copy_from(b);
    let sol = bordered.lu().solve(&rhs).ok_or(Error::SingularBordered)?;
    Ok(sol.rows(0, n).into_owned())
}

/// The explicit group inverse `M^# = (M + P)^{-1} - P` where
/// `P = x yᵀ / (yᵀ x)` is the spectral projector onto `Ker(M)` along `R(M)`.
pub fn group_inverse(m: &MMatrix) -> Result<DMatrix<f64>> {
    let denom = m.y_left.dot(&m.x_right);
    if denom <= 0.0 {
        return Err(Error::SingularBordered);
    }
    let p = &m.x_right * m.y_left.transpose() / denom;
    let shifted = &m.entries + &p;
    let inv = shifted.try_inverse().ok_or(Error::SingularBordered)?;
    Ok(inv - p)
}

/// A `{1}`-inverse from a principal submatrix: zero row and column at
/// `drop_index` (0-based), and the inverse of the complementary
/// `(n-1)×(n-1)` principal submatrix elsewhere. For an irreducible singular
/// M-matrix every such submatrix is a nonsingular M-matrix, making the result
/// a genuine `{1}`-inverse (`M G M = M`).
pub fn one_inverse_principal(m: &MMatrix, drop_index: usize) -> Result<DMatrix<f64>> {
    let n = m.dim();
    if drop_index >= n {
        return Err(Error::DimensionMismatch(format!(
            "drop index {drop_index} outside 0..{n}"
        )));
    }
    let keep: Vec<usize> = (0..n).filter(|&i| i != drop_index).collect();
    let mut sub = DMatrix::zeros(n - 1, n - 1);
    for (si, &i) in keep.iter().enumerate() {
        for (sj, &j) in keep.iter().enumerate() {
            sub[(si, sj)] = m.entries[(i, j)];
        }
    }
    let inv = sub
        .try_inverse()
        .ok_or(Error::SubmatrixSingular(drop_index))?;
    let mut g = DMatrix::zeros(n, n);
    for (si, &i) in keep.iter().enumerate() {
        for (sj, &j) in keep.iter().enumerate() {
            g[(i, j)] = inv[(si, sj)];
        }
    }
    Ok(g)
}
