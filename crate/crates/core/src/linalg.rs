//! Small dense helpers shared by the algebra modules: numerical span,
//! null spaces and orthogonal complements in ℝ⁴ (and ℝⁿ for the joint
//! systems that intersections need).

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector, Matrix3, Vector4};

/// Default relative rank threshold.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// Orthonormal basis of the span of `vectors` by Gram–Schmidt with column
/// pivoting (largest remaining residual first, two orthogonalization
/// passes).
///
/// A residual at or below `rank_tol * max(largest input norm, scale)` ends
/// the sweep; `scale` lets callers supply the magnitude the vectors *would*
/// have if they were nonzero, so that pure round-off is not promoted to a
/// direction.
pub fn orthonormal_span_dyn(vectors: &[DVector<f64>], rank_tol: f64, scale: f64) -> Vec<DVector<f64>> {
    let big = vectors.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    if big == 0.0 {
        return Vec::new();
    }
    let thr = rank_tol * big.max(scale);
    let mut rest: Vec<DVector<f64>> = vectors.to_vec();
    let mut out: Vec<DVector<f64>> = Vec::new();
    let dim = vectors[0].len();
    while out.len() < dim && !rest.is_empty() {
        let (i, n) = rest
            .iter()
            .enumerate()
            .map(|(i, r)| (i, r.norm()))
            .fold((0, -1.0), |b, c| if c.1 > b.1 { c } else { b });
        if n <= thr {
            break;
        }
        let mut q = rest.swap_remove(i) / n;
        for b in &out {
            let d = b.dot(&q);
            q -= b * d;
        }
        let qn = q.norm();
        if qn == 0.0 {
            break;
        }
        q /= qn;
        for r in rest.iter_mut() {
            let d = q.dot(r);
            *r -= &q * d;
        }
        out.push(q);
    }
    out
}

/// [`orthonormal_span_dyn`] in ℝ⁴.
pub fn orthonormal_span(vectors: &[Vector4<f64>], rank_tol: f64, scale: f64) -> Vec<Vector4<f64>> {
    let dyn_vectors: Vec<DVector<f64>> =
        vectors.iter().map(|v| DVector::from_column_slice(v.as_slice())).collect();
    orthonormal_span_dyn(&dyn_vectors, rank_tol, scale)
        .into_iter()
        .map(|v| Vector4::new(v[0], v[1], v[2], v[3]))
        .collect()
}

/// Orthonormal basis of the complement of an orthonormal family in `ℝⁿ`.
fn complement_dyn(basis: &[DVector<f64>], n: usize) -> Vec<DVector<f64>> {
    let mut out: Vec<DVector<f64>> = basis.to_vec();
    let mut cands: Vec<DVector<f64>> = (0..n)
        .map(|i| {
            let mut e = DVector::zeros(n);
            e[i] = 1.0;
            for b in basis {
                let d = b[i];
                e -= b * d;
            }
            e
        })
        .collect();
    while out.len() < n {
        let (i, _) = cands
            .iter()
            .enumerate()
            .map(|(i, r)| (i, r.norm()))
            .fold((0, -1.0), |b, c| if c.1 > b.1 { c } else { b });
        let mut q = cands.swap_remove(i);
        for b in &out {
            let d = b.dot(&q);
            q -= b * d;
        }
        q /= q.norm();
        for r in cands.iter_mut() {
            let d = q.dot(r);
            *r -= &q * d;
        }
        out.push(q);
    }
    out.split_off(basis.len())
}

/// Orthonormal basis of the null space of `m`: the complement of its row
/// space, with the same threshold rule as [`orthonormal_span`].
pub fn null_space(m: &DMatrix<f64>, rank_tol: f64, scale: f64) -> Vec<Vec<f64>> {
    let cols = m.ncols();
    if cols == 0 {
        return Vec::new();
    }
    let rows: Vec<DVector<f64>> = m.row_iter().map(|r| r.transpose()).collect();
    let row_space = orthonormal_span_dyn(&rows, rank_tol, scale);
    complement_dyn(&row_space, cols)
        .into_iter()
        .map(|v| v.iter().cloned().collect())
        .collect()
}

/// Orthonormal basis of the orthogonal complement of an orthonormal family.
pub fn complement(basis: &[Vector4<f64>]) -> Vec<Vector4<f64>> {
    if basis.is_empty() {
        return (0..4).map(unit).collect();
    }
    let m = DMatrix::from_fn(basis.len(), 4, |r, c| basis[r][c]);
    null_space(&m, 1e-8, 1.0)
        .into_iter()
        .map(|v| Vector4::new(v[0], v[1], v[2], v[3]))
        .collect()
}

/// Standard basis vector `E_{i+1}` (zero-based index).
pub fn unit(i: usize) -> Vector4<f64> {
    let mut v = Vector4::zeros();
    v[i] = 1.0;
    v
}

/// Flip `v` so that its first coordinate with magnitude above
/// `1e-9·‖v‖` is positive.
pub fn sign_normalize(v: Vector4<f64>) -> Vector4<f64> {
    let n = v.norm();
    for i in 0..4 {
        if v[i].abs() > 1e-9 * n {
            return if v[i] < 0.0 { -v } else { v };
        }
    }
    v
}

/// Coordinates of `x` in an orthonormal family.
pub fn coords(basis: &[Vector4<f64>], x: &Vector4<f64>) -> Vec<f64> {
    basis.iter().map(|b| b.dot(x)).collect()
}

/// Eigenvalues of a real 2×2 matrix as `(trace, det, discriminant)`.
pub fn trace_det_disc(m: &nalgebra::Matrix2<f64>) -> (f64, f64, f64) {
    let tr = m[(0, 0)] + m[(1, 1)];
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    (tr, det, tr * tr - 4.0 * det)
}

/// Symmetric 3×3 signature `(n₊, n₋, n₀)` with zero threshold
/// `rel_tol · max|λ|` (and `abs_floor` below which everything is zero).
pub fn signature3(m: &Matrix3<f64>, rel_tol: f64, abs_floor: f64) -> (u8, u8, u8) {
    let sym = (m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigenvalues();
    let lmax = eig.iter().fold(0.0f64, |a, &l| a.max(l.abs()));
    if lmax <= abs_floor {
        return (0, 0, 3);
    }
    let thr = rel_tol * lmax;
    let mut s = (0u8, 0u8, 0u8);
    for &l in eig.iter() {
        if l > thr {
            s.0 += 1;
        } else if l < -thr {
            s.1 += 1;
        } else {
            s.2 += 1;
        }
    }
    s
}
