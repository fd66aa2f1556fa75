//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{Complex, DMatrix, DVector};

use crate::tol;
use crate::{Matrix, Vector};

/// Eigen-decomposition of a symmetric matrix with eigenvalues ascending.
pub fn sym_eigen(m: &Matrix) -> (Vec<f64>, Matrix) {
    let sym = symmetrize(m);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = Matrix::from_columns(&order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect::<Vec<_>>());
    (values, vectors)
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues ascending.
pub fn herm_eigen(m: &DMatrix<Complex<f64>>) -> (Vec<f64>, DMatrix<Complex<f64>>) {
    let h = (m + m.adjoint()).scale(0.5);
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let cols: Vec<_> = order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect();
    (values, DMatrix::from_columns(&cols))
}

/// Groups ascending values into clusters whose neighbours differ by at most
/// `tol` times the spectral scale. Returns index ranges.
pub fn clusters(values: &[f64], tol: f64) -> Vec<std::ops::Range<usize>> {
    let scale = values.iter().fold(1f64, |s, v| s.max(v.abs()));
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > tol * scale {
            out.push(start..i);
            start = i;
        }
    }
    out
}

pub fn symmetrize(m: &Matrix) -> Matrix {
    (m + m.transpose()).scale(0.5)
}

pub fn frobenius(m: &Matrix) -> f64 {
    m.norm()
}

/// Spectral norm.
pub fn op_norm(m: &Matrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.iter().fold(0f64, |a, &b| a.max(b))
}

pub fn flatten(m: &Matrix) -> Vector {
    Vector::from_column_slice(m.as_slice())
}

pub fn unflatten(v: &Vector, n: usize) -> Matrix {
    Matrix::from_column_slice(n, n, v.as_slice())
}

/// Orthonormal basis of the null space of `a`. Singular values below
/// `rel_tol · max(σ_max, 1)` count as zero, so inputs are expected at unit
/// scale.
pub fn null_space(a: &Matrix, rel_tol: f64) -> Vec<Vector> {
    let n = a.ncols();
    if n == 0 {
        return Vec::new();
    }
    // Pad so the SVD returns a full right basis.
    let rows = a.nrows().max(n);
    let mut padded = Matrix::zeros(rows, n);
    padded.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.iter().fold(0f64, |m, &s| m.max(s));
    let cutoff = rel_tol * smax.max(1.0);
    (0..n)
        .filter(|&i| svd.singular_values[i] <= cutoff)
        .map(|i| v_t.row(i).transpose())
        .collect()
}

/// Orthonormal basis of the span of `vectors`, with the same cutoff
/// convention as [`null_space`].
pub fn orthonormal_span(vectors: &[Vector], dim: usize, rel_tol: f64) -> Vec<Vector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_columns(vectors);
    let svd = m.svd(true, false);
    let u = svd.u.expect("requested U");
    let smax = svd.singular_values.iter().fold(0f64, |a, &s| a.max(s));
    debug_assert_eq!(u.nrows(), dim);
    (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > rel_tol * smax.max(1.0))
        .map(|i| u.column(i).into_owned())
        .collect()
}

/// Orthogonal projector onto the span of `vectors`.
pub fn span_projector(vectors: &[Vector], dim: usize) -> Matrix {
    let basis = orthonormal_span(vectors, dim, tol::RANK);
    let mut p = Matrix::zeros(dim, dim);
    for b in &basis {
        p += b * b.transpose();
    }
    p
}

pub fn rank(vectors: &[Vector], dim: usize) -> usize {
    orthonormal_span(vectors, dim, tol::RANK).len()
}

/// Orthonormal (Frobenius) basis of the span of a family of matrices.
pub fn matrix_span(mats: &[Matrix], rel_tol: f64) -> Vec<Matrix> {
    let Some(first) = mats.first() else { return Vec::new() };
    let (r, c) = first.shape();
    let flat: Vec<Vector> = mats.iter().map(flatten).collect();
    orthonormal_span(&flat, r * c, rel_tol)
        .into_iter()
        .map(|v| Matrix::from_column_slice(r, c, v.as_slice()))
        .collect()
}

/// Residual of `m` after orthogonal projection onto the span of an
/// orthonormal family of matrices.
pub fn span_residual(m: &Matrix, orthonormal: &[Matrix]) -> f64 {
    let mut r = m.clone();
    for b in orthonormal {
        r -= b.scale(b.dot(m));
    }
    r.norm()
}

/// Smallest eigenvalue of the symmetric part.
pub fn min_eigenvalue(m: &Matrix) -> f64 {
    sym_eigen(m).0.first().copied().unwrap_or(0.0)
}

pub fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    a * b - b * a
}

/// Unit vector, or `None` for (numerically) zero input.
pub fn normalized(v: &Vector) -> Option<Vector> {
    let n = v.norm();
    (n > f64::MIN_POSITIVE * 1e10).then(|| v / n)
}

pub fn complex_identity(n: usize) -> DMatrix<Complex<f64>> {
    DMatrix::identity(n, n)
}

pub fn basis_vector(dim: usize, i: usize) -> Vector {
    let mut v = DVector::zeros(dim);
    v[i] = 1.0;
    v
}
