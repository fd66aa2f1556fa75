//! Lie-algebraic structure of the derivation algebra: center and
//! orientability (a complex structure on the algebra modulo its center).

use nalgebra::Complex;

use super::{derivation_basis, Derivation};
use crate::cone::ConeSpace;
use crate::error::{Error, Result};
use crate::linalg;
use crate::sampling;
use crate::Matrix;

const CLOSURE_TOL: f64 = 1e-9;
const NULL_TOL: f64 = 1e-9;

/// Elements of `span(basis)` commuting with every basis element.
///
/// Fails with [`Error::NotClosed`] when a commutator leaves the span.
pub fn lie_center(basis: &[Derivation]) -> Result<Vec<Derivation>> {
    let mats: Vec<Matrix> = basis.iter().map(|d| d.mat().clone()).collect();
    let b = linalg::matrix_span(&mats, 1e-10);
    if b.is_empty() {
        return Ok(Vec::new());
    }
    let mut worst: f64 = 0.0;
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            worst = worst.max(linalg::span_residual(&linalg::commutator(&b[i], &b[j]), &b));
        }
    }
    if worst > CLOSURE_TOL {
        return Err(Error::NotClosed { residual: worst });
    }
    let n = b[0].nrows();
    let cols: Vec<crate::Vector> = b
        .iter()
        .map(|bi| {
            let blocks: Vec<f64> = b.iter().flat_map(|bj| linalg::commutator(bi, bj).as_slice().to_vec()).collect();
            crate::Vector::from_vec(blocks)
        })
        .collect();
    let combos = linalg::null_space(&Matrix::from_columns(&cols), NULL_TOL);
    let center: Vec<Matrix> = combos
        .iter()
        .map(|c| b.iter().zip(c.iter()).fold(Matrix::zeros(n, n), |acc, (m, &w)| acc + m * w))
        .collect();
    Ok(linalg::matrix_span(&center, 1e-10).into_iter().map(Derivation::new).collect())
}

/// Whether the derivation algebra modulo its center carries a complex
/// structure.
#[derive(Clone, Debug, PartialEq)]
pub enum Orientability {
    Orientable(String),
    NotOrientable(String),
    Unknown(String),
}

#[derive(Clone, Debug)]
pub struct OrientabilityReport {
    pub der_dim: usize,
    pub center_dim: usize,
    pub quotient_dim: usize,
    /// Dimension of the centroid of the quotient, when it was computed.
    pub centroid_dim: Option<usize>,
    pub verdict: Orientability,
}

/// Orientability of the cone.
///
/// The quotient `Q = Der/center` is tested for a complex structure: odd
/// dimension refutes it, dimension 0 is the degenerate commutative case,
/// and otherwise the centroid of `Q` (linear maps commuting with every
/// `ad X`) is searched for an element `J` with `J² = −I`.
pub fn orientability(space: &ConeSpace) -> Result<OrientabilityReport> {
    let basis = derivation_basis(space);
    let center = lie_center(&basis)?;
    let der: Vec<Matrix> = basis.iter().map(|d| d.mat().clone()).collect();
    let z: Vec<Matrix> = center.iter().map(|d| d.mat().clone()).collect();
    let complement: Vec<Matrix> = der
        .iter()
        .map(|m| z.iter().fold(m.clone(), |acc, zk| &acc - zk * zk.dot(m)))
        .collect();
    let q = linalg::matrix_span(&complement, 1e-9);
    let mut report = OrientabilityReport {
        der_dim: der.len(),
        center_dim: z.len(),
        quotient_dim: q.len(),
        centroid_dim: None,
        verdict: Orientability::Unknown(String::new()),
    };
    let dq = q.len();
    if dq == 0 {
        report.verdict = Orientability::Orientable("quotient is trivial (commutative algebra)".into());
        return Ok(report);
    }
    if dq % 2 == 1 {
        report.verdict = Orientability::NotOrientable(format!("odd quotient dimension {dq}"));
        return Ok(report);
    }

    // ad maps on Q in the orthonormal basis q.
    let ad: Vec<Matrix> = q
        .iter()
        .map(|x| Matrix::from_fn(dq, dq, |r, c| q[r].dot(&linalg::commutator(x, &q[c]))))
        .collect();
    let id = Matrix::identity(dq, dq);
    let blocks: Vec<Matrix> = ad.iter().map(|a| a.transpose().kronecker(&id) - id.kronecker(a)).collect();
    let mut system = Matrix::zeros(blocks.len() * dq * dq, dq * dq);
    for (i, blk) in blocks.iter().enumerate() {
        system.view_mut((i * dq * dq, 0), (dq * dq, dq * dq)).copy_from(blk);
    }
    let centroid: Vec<Matrix> = linalg::null_space(&system, NULL_TOL).iter().map(|v| linalg::unflatten(v, dq)).collect();
    report.centroid_dim = Some(centroid.len());
    report.verdict = complex_structure(&centroid);
    Ok(report)
}

fn complex_structure(centroid: &[Matrix]) -> Orientability {
    match centroid.len() {
        0 => return Orientability::Unknown("empty centroid".into()),
        1 => return Orientability::NotOrientable("centroid is one-dimensional: no complex structure".into()),
        _ => {}
    }
    let dq = centroid[0].nrows();
    let mut rng = sampling::rng(0x5eed);
    let coeffs = sampling::gaussian_vector(&mut rng, centroid.len());
    let t = centroid.iter().zip(coeffs.iter()).fold(Matrix::zeros(dq, dq), |acc, (c, &w)| acc + c * w);
    let eig: Vec<Complex<f64>> = t.complex_eigenvalues().iter().copied().collect();
    let scale = eig.iter().fold(0f64, |m, z| m.max(z.norm())).max(f64::MIN_POSITIVE);
    if eig.iter().any(|z| z.im.abs() <= 1e-8 * scale) {
        return Orientability::Unknown("generic centroid element has a real eigenvalue".into());
    }
    let a = eig[0].re;
    let b = eig[0].im.abs();
    if eig.iter().any(|z| (z.re - a).abs() > 1e-6 * scale || (z.im.abs() - b).abs() > 1e-6 * scale) {
        return Orientability::Unknown("centroid splits into several complex factors".into());
    }
    let j = (t - Matrix::identity(dq, dq) * a) / b;
    let defect = (&j * &j + Matrix::identity(dq, dq)).norm();
    if defect < 1e-8 * (dq as f64) {
        Orientability::Orientable(format!("centroid of dimension {} contains J with J² = −I", centroid.len()))
    } else {
        Orientability::Unknown(format!("candidate J misses J² = −I by {defect:.2e}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centers() {
        let dim = |s: ConeSpace| lie_center(&derivation_basis(&s)).unwrap().len();
        assert_eq!(dim(ConeSpace::orthant(2).unwrap()), 2);
        assert_eq!(dim(ConeSpace::psd_real(2).unwrap()), 1);
        assert_eq!(dim(ConeSpace::hermitian(2).unwrap()), 1);
        assert_eq!(dim(ConeSpace::lorentz(3).unwrap()), 1);
    }

    #[test]
    fn open_family_is_rejected() {
        let x = Matrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let y = Matrix::from_row_slice(2, 2, &[0.0, 0.0, 1.0, 0.0]);
        assert!(matches!(lie_center(&[Derivation::new(x), Derivation::new(y)]), Err(Error::NotClosed { .. })));
    }

    #[test]
    fn orientability_examples() {
        let v = |s: ConeSpace| orientability(&s).unwrap();
        let psd2 = v(ConeSpace::psd_real(2).unwrap());
        assert_eq!(psd2.quotient_dim, 3);
        assert!(matches!(psd2.verdict, Orientability::NotOrientable(_)));
        let herm = v(ConeSpace::hermitian(2).unwrap());
        assert_eq!(herm.quotient_dim, 6);
        assert!(matches!(herm.verdict, Orientability::Orientable(_)), "{:?}", herm.verdict);
        assert!(matches!(v(ConeSpace::orthant(3).unwrap()).verdict, Orientability::Orientable(_)));
        assert!(matches!(v(ConeSpace::lorentz(4).unwrap()).verdict, Orientability::Orientable(_)));
        let psd3 = v(ConeSpace::psd_real(3).unwrap());
        assert_eq!((psd3.quotient_dim, psd3.centroid_dim), (8, Some(1)));
        assert!(matches!(psd3.verdict, Orientability::NotOrientable(_)));
    }
}
