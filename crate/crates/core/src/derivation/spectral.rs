//! Spectral faces of self-adjoint derivations and reconstruction of a
//! derivation from its increasing family of faces.

use super::{is_derivation, Derivation, DerivationCheck, DerivationVerdict};
use crate::cone::ConeSpace;
use crate::error::{Error, Result};
use crate::face::{eigen_clusters, face_in_subspace, face_of, Face};
use crate::{Matrix, Vector};

/// Eigenvalues `λ₁ < … < λ_m` of a self-adjoint derivation with the faces
/// `F_{λᵢ} = E_{λᵢ}H ∩ K` and the cumulative faces
/// `F(λᵢ) = face(a₁ + … + aᵢ)`.
#[derive(Clone, Debug)]
pub struct SpectralFaceFamily {
    entries: Vec<(f64, Face)>,
    cumulative: Vec<Face>,
}

impl SpectralFaceFamily {
    /// Builds the family from strictly increasing eigenvalues and their faces.
    pub fn new(space: &ConeSpace, entries: Vec<(f64, Face)>) -> Result<Self> {
        if entries.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidArgument("spectral values must be strictly increasing".into()));
        }
        let mut cumulative = Vec::with_capacity(entries.len());
        let mut running = Vector::zeros(space.dim());
        for (_, face) in &entries {
            running += face.witness();
            cumulative.push(face_of(space, &running)?);
        }
        if cumulative.windows(2).any(|w| !w[0].is_subface_of(&w[1])) {
            return Err(Error::InvalidArgument("cumulative faces are not increasing".into()));
        }
        Ok(Self { entries, cumulative })
    }

    pub fn entries(&self) -> &[(f64, Face)] {
        &self.entries
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|(l, _)| *l).collect()
    }

    pub fn cumulative(&self) -> &[Face] {
        &self.cumulative
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Eigenvalues of `delta` with the faces cut out of the cone by their
/// eigenspaces; zero faces are kept.
pub fn spectral_faces(space: &ConeSpace, delta: &Derivation) -> Result<SpectralFaceFamily> {
    if !delta.is_selfadjoint() {
        return Err(Error::NotADerivation("operator is not self-adjoint".into()));
    }
    match is_derivation(space, delta.mat(), &DerivationCheck::default())? {
        DerivationVerdict::Verified { .. } => {}
        DerivationVerdict::Refuted { t, .. } => {
            return Err(Error::NotADerivation(format!("flow leaves the cone at t = {t}")));
        }
        DerivationVerdict::Unknown(why) => return Err(Error::NotADerivation(why)),
    }
    let mut entries = Vec::new();
    for (lambda, e) in eigen_clusters(delta.mat()) {
        entries.push((lambda, face_in_subspace(space, &e)?));
    }
    if entries.iter().all(|(_, f)| f.is_zero()) {
        return Err(Error::Numerical("every spectral face is zero".into()));
    }
    SpectralFaceFamily::new(space, entries)
}

/// `Σ λᵢ (δ_{F(λᵢ)} − δ_{F(λᵢ₋₁)})` with `δ_{F(λ₀)} = 0`.
pub fn reconstruct_from_faces(family: &SpectralFaceFamily) -> Derivation {
    let Some(first) = family.cumulative.first() else {
        return Derivation::new(Matrix::zeros(0, 0));
    };
    let n = first.host().dim();
    let mut previous = Matrix::zeros(n, n);
    let mut total = Matrix::zeros(n, n);
    for ((lambda, _), face) in family.entries.iter().zip(&family.cumulative) {
        let current = face.derivative().into_mat();
        total += (&current - &previous) * *lambda;
        previous = current;
    }
    Derivation::new(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::psd_multiplier;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    #[test]
    fn orthant_family() {
        let s = ConeSpace::orthant(3).unwrap();
        let d = Derivation::new(Matrix::from_diagonal(&v(&[1.0, 1.0, 5.0])));
        let fam = spectral_faces(&s, &d).unwrap();
        assert_eq!(fam.len(), 2);
        assert!((fam.values()[0] - 1.0).abs() < 1e-12 && (fam.values()[1] - 5.0).abs() < 1e-12);
        assert_eq!(fam.entries()[0].1.projector(), &Matrix::from_diagonal(&v(&[1.0, 1.0, 0.0])));
        let back = reconstruct_from_faces(&fam);
        assert!((back.mat() - d.mat()).norm() < 1e-12);
    }

    #[test]
    fn psd_family_has_a_zero_face() {
        let s = ConeSpace::psd_real(2).unwrap();
        let d = psd_multiplier(2, &Matrix::from_diagonal(&v(&[0.0, 1.0])));
        let fam = spectral_faces(&s, &d).unwrap();
        let values = fam.values();
        assert_eq!(values.len(), 3);
        for (got, want) in values.iter().zip([0.0, 1.0, 2.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        let dims: Vec<usize> = fam.entries().iter().map(|(_, f)| f.dim()).collect();
        assert_eq!(dims, vec![1, 0, 1]);
        let back = reconstruct_from_faces(&fam);
        assert!((back.mat() - d.mat()).norm() < 1e-12);
    }

    #[test]
    fn identity_and_zero() {
        let s = ConeSpace::lorentz(3).unwrap();
        let fam = spectral_faces(&s, &Derivation::new(Matrix::identity(3, 3))).unwrap();
        assert_eq!(fam.len(), 1);
        assert!(fam.entries()[0].1.is_whole());
        let zero = SpectralFaceFamily::new(&s, vec![(0.0, Face::whole(&s))]).unwrap();
        assert_eq!(reconstruct_from_faces(&zero).mat(), &Matrix::zeros(3, 3));
        let bad = SpectralFaceFamily::new(&s, vec![(1.0, Face::whole(&s)), (0.0, Face::zero(&s))]);
        assert!(matches!(bad, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn non_derivation_is_rejected() {
        let s = ConeSpace::orthant(2).unwrap();
        let d = Derivation::new(Matrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
        assert!(matches!(spectral_faces(&s, &d), Err(Error::NotADerivation(_))));
    }
}
