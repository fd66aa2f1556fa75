//! Isometric vectorizations of symmetric and Hermitian matrices.
//!
//! Off-diagonal entries are scaled by √2 so that the Euclidean inner product
//! of coordinates equals the trace inner product `Re tr(XY)`.

use nalgebra::{Complex, DMatrix};

use crate::{Matrix, Vector};

const SQRT2: f64 = std::f64::consts::SQRT_2;

pub type CMatrix = DMatrix<Complex<f64>>;

pub fn sym_dim(k: usize) -> usize {
    k * (k + 1) / 2
}

/// Upper-triangular index pairs in coordinate order (row-major).
pub fn sym_pairs(k: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..k).flat_map(move |i| (i..k).map(move |j| (i, j)))
}

pub fn svec(m: &Matrix) -> Vector {
    let k = m.nrows();
    Vector::from_iterator(
        sym_dim(k),
        sym_pairs(k).map(|(i, j)| if i == j { m[(i, i)] } else { SQRT2 * 0.5 * (m[(i, j)] + m[(j, i)]) }),
    )
}

pub fn smat(v: &Vector, k: usize) -> Matrix {
    let mut m = Matrix::zeros(k, k);
    for ((i, j), x) in sym_pairs(k).zip(v.iter()) {
        if i == j {
            m[(i, i)] = *x;
        } else {
            m[(i, j)] = x / SQRT2;
            m[(j, i)] = x / SQRT2;
        }
    }
    m
}

pub fn herm_dim(k: usize) -> usize {
    k * k
}

pub fn hvec(m: &CMatrix) -> Vector {
    let k = m.nrows();
    let mut out = Vec::with_capacity(k * k);
    for (i, j) in sym_pairs(k) {
        if i == j {
            out.push(m[(i, i)].re);
        } else {
            let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            out.push(SQRT2 * z.re);
            out.push(SQRT2 * z.im);
        }
    }
    Vector::from_vec(out)
}

pub fn hmat(v: &Vector, k: usize) -> CMatrix {
    let mut m = CMatrix::zeros(k, k);
    let mut it = v.iter();
    for (i, j) in sym_pairs(k) {
        if i == j {
            m[(i, i)] = Complex::new(*it.next().expect("length"), 0.0);
        } else {
            let re = it.next().expect("length") / SQRT2;
            let im = it.next().expect("length") / SQRT2;
            m[(i, j)] = Complex::new(re, im);
            m[(j, i)] = Complex::new(re, -im);
        }
    }
    m
}

/// Matrix of the real-linear map `v ↦ svec(f(smat(v)))`.
pub fn lift_sym(k: usize, f: impl Fn(&Matrix) -> Matrix) -> Matrix {
    let n = sym_dim(k);
    let cols: Vec<Vector> = (0..n).map(|c| svec(&f(&smat(&crate::linalg::basis_vector(n, c), k)))).collect();
    Matrix::from_columns(&cols)
}

/// Matrix of the real-linear map `v ↦ hvec(f(hmat(v)))`.
pub fn lift_herm(k: usize, f: impl Fn(&CMatrix) -> CMatrix) -> Matrix {
    let n = herm_dim(k);
    let cols: Vec<Vector> = (0..n).map(|c| hvec(&f(&hmat(&crate::linalg::basis_vector(n, c), k)))).collect();
    Matrix::from_columns(&cols)
}

pub fn to_complex(m: &Matrix) -> CMatrix {
    m.map(|x| Complex::new(x, 0.0))
}
