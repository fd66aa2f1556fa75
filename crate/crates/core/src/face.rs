//! Faces of a cone, represented by the orthogonal projector onto their span.

use rand::Rng;

use crate::cone::vectorize::{hmat, lift_herm, lift_sym, smat, CMatrix};
use crate::cone::{ConeSpace, ConeSpec, Membership};
use crate::derivation::{is_derivation, Derivation, DerivationCheck, DerivationVerdict};
use crate::error::{Error, Result};
use crate::linalg;
use crate::sampling;
use crate::tol::{CLUSTER, EPS_MEM, RANK};
use crate::{Matrix, Vector};

/// A closed face `F = P_F·H ∩ K`, carried as its span projector together
/// with a relative-interior witness.
#[derive(Clone, Debug)]
pub struct Face {
    projector: Matrix,
    witness: Vector,
    host: ConeSpace,
}

impl Face {
    pub fn zero(host: &ConeSpace) -> Self {
        let n = host.dim();
        Self { projector: Matrix::zeros(n, n), witness: Vector::zeros(n), host: host.clone() }
    }

    pub fn whole(host: &ConeSpace) -> Self {
        let n = host.dim();
        Self { projector: Matrix::identity(n, n), witness: host.default_order_unit(), host: host.clone() }
    }

    pub fn projector(&self) -> &Matrix {
        &self.projector
    }

    pub fn witness(&self) -> &Vector {
        &self.witness
    }

    pub fn host(&self) -> &ConeSpace {
        &self.host
    }

    /// Dimension of the span of the face.
    pub fn dim(&self) -> usize {
        self.projector.trace().round() as usize
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_whole(&self) -> bool {
        self.dim() == self.host.dim()
    }

    /// `x ∈ K` and `x` lies in the span of the face.
    pub fn contains(&self, x: &Vector) -> bool {
        let off = (x - &self.projector * x).norm();
        self.host.contains(x) && off <= 1e-8 * x.norm().max(f64::MIN_POSITIVE)
    }

    /// Same span, up to `tol` in operator norm.
    pub fn same_as(&self, other: &Face) -> bool {
        linalg::op_norm(&(&self.projector - &other.projector)) < 1e-8
    }

    /// `self ⊆ other`.
    pub fn is_subface_of(&self, other: &Face) -> bool {
        linalg::op_norm(&(&self.projector - &other.projector * &self.projector)) < 1e-8
    }

    /// `F⊥ = {x ∈ K : ⟨x, y⟩ = 0 for all y ∈ F}`.
    ///
    /// For the built-in symmetric cones this is the face generated by
    /// `e − P_F e`, with `e` the Jordan unit. For polyhedral cones it is
    /// spanned by the extreme rays orthogonal to `F`; when the cone is not
    /// self-dual that set need not be a face of `K`, and the returned value
    /// is the cone those rays generate.
    pub fn orthogonal(&self) -> Face {
        let host = &self.host;
        if let Some(e) = host.canonical_unit() {
            let w = &e - &self.projector * &e;
            // Roundoff left over from the whole face must not read as a ray.
            if w.norm() <= EPS_MEM * e.norm() {
                return Face::zero(host);
            }
            return face_of(host, &w).unwrap_or_else(|_| Face::zero(host));
        }
        let poly = host.polyhedral_data().expect("polyhedral host");
        let rays: Vec<Vector> = poly.rays.iter().filter(|r| (&self.projector * *r).norm() < 1e-9).cloned().collect();
        if rays.is_empty() {
            return Face::zero(host);
        }
        let w = rays.iter().fold(Vector::zeros(host.dim()), |acc, r| acc + r);
        if poly.self_dual {
            return face_of(host, &w).unwrap_or_else(|_| Face::zero(host));
        }
        Face { projector: linalg::span_projector(&rays, host.dim()), witness: w, host: host.clone() }
    }

    /// The facial derivative `δ_F = ½(I + P_F − P_{F⊥})`.
    pub fn derivative(&self) -> Derivation {
        let n = self.host.dim();
        let perp = self.orthogonal();
        Derivation::new((Matrix::identity(n, n) + &self.projector - perp.projector()).scale(0.5))
    }

    /// `P_F − P_{F⊥}`, the operator whose flow must preserve the cone on
    /// facially homogeneous cones.
    pub fn signature(&self) -> Matrix {
        &self.projector - self.orthogonal().projector()
    }
}

/// The smallest closed face containing `a`.
pub fn face_of(space: &ConeSpace, a: &Vector) -> Result<Face> {
    space.check_dim(a)?;
    if space.membership(a)? == Membership::Outside {
        return Err(Error::NotInCone);
    }
    let scale = a.norm();
    if scale == 0.0 {
        return Ok(Face::zero(space));
    }
    let n = space.dim();
    let projector = match space.spec() {
        ConeSpec::Orthant(_) => Matrix::from_diagonal(&a.map(|v| if v > EPS_MEM * scale { 1.0 } else { 0.0 })),
        ConeSpec::Lorentz(_) => {
            if space.membership(a)? == Membership::Interior {
                Matrix::identity(n, n)
            } else {
                a * a.transpose() / (scale * scale)
            }
        }
        ConeSpec::PsdReal(k) => {
            let k = *k;
            let (vals, vecs) = linalg::sym_eigen(&smat(a, k));
            let top = vals[k - 1].max(0.0);
            let mut pi = Matrix::zeros(k, k);
            for (i, &l) in vals.iter().enumerate() {
                if l > RANK * top {
                    let u = vecs.column(i);
                    pi += u * u.transpose();
                }
            }
            lift_sym(k, |x| &pi * x * &pi)
        }
        ConeSpec::Hermitian(k) => {
            let k = *k;
            let (vals, vecs) = linalg::herm_eigen(&hmat(a, k));
            let top = vals[k - 1].max(0.0);
            let mut pi = CMatrix::zeros(k, k);
            for (i, &l) in vals.iter().enumerate() {
                if l > RANK * top {
                    let u = vecs.column(i);
                    pi += u * u.adjoint();
                }
            }
            lift_herm(k, |x| &pi * x * &pi)
        }
        ConeSpec::Polyhedral { .. } => {
            let poly = space.polyhedral_data().expect("polyhedral data");
            let active: Vec<&Vector> = poly.facets.iter().filter(|f| f.dot(a) <= EPS_MEM * scale).collect();
            let rays: Vec<Vector> =
                poly.rays.iter().filter(|r| active.iter().all(|f| f.dot(*r) <= 1e-9)).cloned().collect();
            linalg::span_projector(&rays, n)
        }
    };
    Ok(Face { projector, witness: a.clone(), host: space.clone() })
}

/// `F⊥` for the face `F`.
pub fn orthogonal_face(face: &Face) -> Face {
    face.orthogonal()
}

/// `δ_F = ½(I + P_F − P_{F⊥})`.
pub fn facial_derivative(face: &Face) -> Derivation {
    face.derivative()
}

/// `⟨a, b⟩ = 0` and the faces generated by `a` and `b` meet only at 0.
pub fn incomparable(space: &ConeSpace, a: &Vector, b: &Vector) -> Result<bool> {
    let fa = face_of(space, a)?;
    let fb = face_of(space, b)?;
    if a.dot(b).abs() > EPS_MEM * a.norm() * b.norm() {
        return Ok(false);
    }
    let meet = match space.polyhedral_data() {
        Some(poly) => poly.rays.iter().any(|r| fa.contains(r) && fb.contains(r)),
        None => {
            let both: Vec<Vector> = linalg::orthonormal_span(&columns(fa.projector()), space.dim(), RANK)
                .into_iter()
                .chain(linalg::orthonormal_span(&columns(fb.projector()), space.dim(), RANK))
                .collect();
            linalg::rank(&both, space.dim()) < fa.dim() + fb.dim()
        }
    };
    Ok(!meet)
}

fn columns(m: &Matrix) -> Vec<Vector> {
    m.column_iter().map(|c| c.into_owned()).collect()
}

/// Splits `a` into weighted minimal components `a = Σ λᵢ aᵢ`.
///
/// The components are Jordan idempotents for the symmetric cones (unit
/// coordinate vectors, rank-one eigenprojections, `½(1, ±d)` for Lorentz
/// cones), unit extreme rays for simplicial polyhedral cones, and a single
/// normalised block for other polyhedral cones. When the spectrum of a
/// matrix is degenerate the eigenvectors are whatever the solver returns.
pub fn minimal_decomposition(space: &ConeSpace, a: &Vector) -> Result<Vec<(f64, Vector)>> {
    space.check_dim(a)?;
    if space.membership(a)? == Membership::Outside {
        return Err(Error::NotInCone);
    }
    let scale = a.norm();
    if scale == 0.0 {
        return Ok(Vec::new());
    }
    let cut = EPS_MEM * scale;
    let n = space.dim();
    Ok(match space.spec() {
        ConeSpec::Orthant(_) => (0..n).filter(|&i| a[i] > cut).map(|i| (a[i], linalg::basis_vector(n, i))).collect(),
        ConeSpec::Lorentz(_) => {
            let z = a.rows(1, n - 1).into_owned();
            let nz = z.norm();
            let d = if nz > cut { z / nz } else { linalg::basis_vector(n - 1, 0) };
            let mut out = Vec::new();
            for (lambda, sign) in [(a[0] + nz, 1.0), (a[0] - nz, -1.0)] {
                if lambda > cut {
                    let mut c = Vector::zeros(n);
                    c[0] = 0.5;
                    c.rows_mut(1, n - 1).copy_from(&(&d * (0.5 * sign)));
                    out.push((lambda, c));
                }
            }
            out
        }
        ConeSpec::PsdReal(k) => {
            let (vals, vecs) = linalg::sym_eigen(&smat(a, *k));
            let mut out: Vec<(f64, Vector)> = vals
                .iter()
                .enumerate()
                .filter(|(_, &l)| l > cut)
                .map(|(i, &l)| {
                    let u = vecs.column(i);
                    (l, crate::cone::vectorize::svec(&(u * u.transpose())))
                })
                .collect();
            out.reverse();
            out
        }
        ConeSpec::Hermitian(k) => {
            let (vals, vecs) = linalg::herm_eigen(&hmat(a, *k));
            let mut out: Vec<(f64, Vector)> = vals
                .iter()
                .enumerate()
                .filter(|(_, &l)| l > cut)
                .map(|(i, &l)| {
                    let u = vecs.column(i);
                    (l, crate::cone::vectorize::hvec(&(u * u.adjoint())))
                })
                .collect();
            out.reverse();
            out
        }
        ConeSpec::Polyhedral { .. } => {
            let poly = space.polyhedral_data().expect("polyhedral data");
            match poly.ray_coordinates(a) {
                Some(c) => (0..n).filter(|&i| c[i] > cut).map(|i| (c[i], poly.rays[i].clone())).collect(),
                None => vec![(scale, a / scale)],
            }
        }
    })
}

/// Outcome of the facial homogeneity test.
#[derive(Clone, Debug)]
pub enum HomogeneityVerdict {
    /// Every tested face passed; `exhaustive` when all faces were enumerated.
    Verified { faces_tested: usize, exhaustive: bool },
    /// `exp(t(P_F − P_{F⊥}))·point` leaves the cone.
    Refuted { face: Face, point: Vector, t: f64 },
    Unknown(String),
}

/// Checks that `P_F − P_{F⊥}` is a derivation for the faces of the cone:
/// all faces spanned by subsets of extreme rays (at most `2^dim` subsets)
/// for polyhedral cones, and the faces of `sample_budget` random cone
/// points otherwise.
pub fn is_facially_homogeneous(space: &ConeSpace, sample_budget: usize, seed: u64) -> HomogeneityVerdict {
    let mut rng = sampling::rng(seed);
    let mut faces: Vec<Face> = Vec::new();
    let mut exhaustive = false;
    if let Some(poly) = space.polyhedral_data() {
        let r = poly.rays.len();
        let cap: u64 = 1u64 << space.dim().min(20);
        let total: u64 = if r >= 63 { u64::MAX } else { 1u64 << r };
        exhaustive = total <= cap;
        for mask in 1..total.min(cap) {
            let w = (0..r).filter(|i| mask >> i & 1 == 1).fold(Vector::zeros(space.dim()), |acc, i| acc + &poly.rays[i]);
            if let Ok(f) = face_of(space, &w) {
                if !faces.iter().any(|g| g.same_as(&f)) {
                    faces.push(f);
                }
            }
        }
    } else {
        for _ in 0..sample_budget {
            let x = if rng.random_bool(0.5) { space.sample_extreme_ray(&mut rng) } else { space.sample_point(&mut rng) };
            if let Ok(f) = face_of(space, &x) {
                faces.push(f);
            }
        }
    }
    let check = DerivationCheck { seed, ..DerivationCheck::default() };
    for face in &faces {
        match is_derivation(space, &face.signature(), &check) {
            Ok(DerivationVerdict::Verified { .. }) => {}
            Ok(DerivationVerdict::Refuted { point, t, .. }) => {
                return HomogeneityVerdict::Refuted { face: face.clone(), point, t };
            }
            Ok(DerivationVerdict::Unknown(why)) => return HomogeneityVerdict::Unknown(why),
            Err(e) => return HomogeneityVerdict::Unknown(e.to_string()),
        }
    }
    HomogeneityVerdict::Verified { faces_tested: faces.len(), exhaustive }
}

/// A failure of Riesz additivity: `x` lies in the face of `a + c` but not in
/// the sum of the faces of `a` and `c`.
#[derive(Clone, Debug)]
pub struct RieszWitness {
    pub a: Vector,
    pub c: Vector,
    pub x: Vector,
}

/// Whether the cone order is a lattice, with a witness when it is not.
pub fn is_riesz(space: &ConeSpace) -> (bool, Option<RieszWitness>) {
    let n = space.dim();
    let e = |i: usize| linalg::basis_vector(n, i);
    let witness = match space.spec() {
        ConeSpec::Orthant(_) => return (true, None),
        ConeSpec::Lorentz(2) | ConeSpec::PsdReal(1) | ConeSpec::Hermitian(1) => return (true, None),
        ConeSpec::Lorentz(_) => RieszWitness { a: e(0) + e(1), c: e(0) - e(1), x: e(0) + e(2) },
        ConeSpec::PsdReal(k) => {
            let unit = |i: usize| linalg::basis_vector(*k, i);
            let sv = |v: &Vector| crate::cone::vectorize::svec(&(v * v.transpose()));
            RieszWitness { a: sv(&unit(0)), c: sv(&unit(1)), x: sv(&(unit(0) + unit(1))) }
        }
        ConeSpec::Hermitian(k) => {
            let unit = |i: usize| crate::cone::vectorize::to_complex(&Matrix::from_column_slice(*k, 1, linalg::basis_vector(*k, i).as_slice()));
            let hv = |v: &CMatrix| crate::cone::vectorize::hvec(&(v * v.adjoint()));
            RieszWitness { a: hv(&unit(0)), c: hv(&unit(1)), x: hv(&(unit(0) + unit(1))) }
        }
        ConeSpec::Polyhedral { .. } => {
            let poly = space.polyhedral_data().expect("polyhedral data");
            if poly.simplicial {
                return (true, None);
            }
            return (false, polyhedral_riesz_witness(space));
        }
    };
    debug_assert!(riesz_witness_holds(space, &witness));
    (false, Some(witness))
}

/// Checks a claimed witness: `x` in the face of `a + c` and outside the span
/// of face(a) + face(c).
pub fn riesz_witness_holds(space: &ConeSpace, w: &RieszWitness) -> bool {
    let (Ok(fa), Ok(fc), Ok(fac)) = (face_of(space, &w.a), face_of(space, &w.c), face_of(space, &(&w.a + &w.c))) else {
        return false;
    };
    let mut cols = columns(fa.projector());
    cols.extend(columns(fc.projector()));
    let sum = linalg::span_projector(&cols, space.dim());
    fac.contains(&w.x) && (&w.x - &sum * &w.x).norm() > 1e-6 * w.x.norm()
}

fn polyhedral_riesz_witness(space: &ConeSpace) -> Option<RieszWitness> {
    let rays = &space.polyhedral_data()?.rays;
    for i in 0..rays.len() {
        for j in i + 1..rays.len() {
            for l in 0..rays.len() {
                if l == i || l == j {
                    continue;
                }
                let w = RieszWitness { a: rays[i].clone(), c: rays[j].clone(), x: rays[l].clone() };
                if riesz_witness_holds(space, &w) {
                    return Some(w);
                }
            }
        }
    }
    None
}

/// Faces of the eigenspaces of a self-adjoint operator: clusters of
/// eigenvalues (relative tolerance [`CLUSTER`]) with their spectral
/// projectors.
pub(crate) fn eigen_clusters(m: &Matrix) -> Vec<(f64, Matrix)> {
    let (vals, vecs) = linalg::sym_eigen(m);
    linalg::clusters(&vals, CLUSTER)
        .into_iter()
        .map(|r| {
            let lambda = vals[r.clone()].iter().sum::<f64>() / r.len() as f64;
            let mut p = Matrix::zeros(m.nrows(), m.nrows());
            for i in r {
                let u = vecs.column(i);
                p += u * u.transpose();
            }
            (lambda, p)
        })
        .collect()
}

/// `K ∩ range(E)` for a spectral projector `E` of a self-adjoint derivation,
/// which is a face of the cone (possibly `{0}`).
pub(crate) fn face_in_subspace(space: &ConeSpace, e: &Matrix) -> Result<Face> {
    let w = match space.canonical_unit() {
        Some(unit) => e * unit,
        None => {
            let poly = space.polyhedral_data().expect("polyhedral data");
            poly.rays
                .iter()
                .filter(|r| (*r - e * *r).norm() < 1e-8)
                .fold(Vector::zeros(space.dim()), |acc, r| acc + r)
        }
    };
    if w.norm() < 1e-10 {
        return Ok(Face::zero(space));
    }
    if space.membership_with(&w, 1e-7) == Membership::Outside {
        return Err(Error::Numerical("eigenspace meets the cone outside a face".into()));
    }
    let face = face_of(space, &space.project(&w)?)?;
    if linalg::op_norm(&(face.projector() - e * face.projector())) > 1e-7 {
        return Err(Error::Numerical("face of eigenspace leaves the eigenspace".into()));
    }
    Ok(face)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    fn psd_diag(d: &[f64]) -> Vector {
        crate::cone::vectorize::svec(&Matrix::from_diagonal(&v(d)))
    }

    #[test]
    fn orthant_face_and_complement() {
        let s = ConeSpace::orthant(3).unwrap();
        let f = face_of(&s, &v(&[1.0, 0.0, 2.0])).unwrap();
        assert_eq!(f.projector(), &Matrix::from_diagonal(&v(&[1.0, 0.0, 1.0])));
        assert_eq!(f.orthogonal().projector(), &Matrix::from_diagonal(&v(&[0.0, 1.0, 0.0])));
        assert!(matches!(face_of(&s, &v(&[1.0, -1.0, 0.0])), Err(Error::NotInCone)));
    }

    #[test]
    fn psd_faces() {
        let s = ConeSpace::psd_real(2).unwrap();
        let f = face_of(&s, &psd_diag(&[1.0, 0.0])).unwrap();
        assert_eq!(f.dim(), 1);
        assert!(f.orthogonal().same_as(&face_of(&s, &psd_diag(&[0.0, 1.0])).unwrap()));
        let whole = face_of(&s, &psd_diag(&[1.0, 1.0])).unwrap();
        assert!(whole.is_whole() && whole.orthogonal().is_zero());
    }

    #[test]
    fn lorentz_faces() {
        let s = ConeSpace::lorentz(3).unwrap();
        let a = v(&[1.0, 1.0, 0.0]);
        let f = face_of(&s, &a).unwrap();
        assert!((f.projector() - &a * a.transpose() / 2.0).norm() < 1e-15);
        let perp = f.orthogonal();
        assert!(perp.contains(&v(&[1.0, -1.0, 0.0])));
        assert!(face_of(&s, &v(&[1.0, 0.0, 0.0])).unwrap().is_whole());
    }

    #[test]
    fn facial_derivative_examples() {
        let s = ConeSpace::orthant(2).unwrap();
        let f = face_of(&s, &v(&[1.0, 0.0])).unwrap();
        assert_eq!(f.derivative().mat(), &Matrix::from_diagonal(&v(&[1.0, 0.0])));
        assert_eq!(Face::whole(&s).derivative().mat(), &Matrix::identity(2, 2));
        assert_eq!(Face::zero(&s).derivative().mat(), &Matrix::zeros(2, 2));
    }

    #[test]
    fn incomparability_examples() {
        let o = ConeSpace::orthant(2).unwrap();
        assert!(incomparable(&o, &v(&[1.0, 0.0]), &v(&[0.0, 1.0])).unwrap());
        let s = ConeSpace::psd_real(2).unwrap();
        assert!(incomparable(&s, &psd_diag(&[1.0, 0.0]), &psd_diag(&[0.0, 1.0])).unwrap());
        let half = crate::cone::vectorize::svec(&Matrix::from_element(2, 2, 0.5));
        assert!(!incomparable(&s, &psd_diag(&[1.0, 0.0]), &half).unwrap());
    }

    #[test]
    fn minimal_decomposition_examples() {
        let o = ConeSpace::orthant(2).unwrap();
        assert_eq!(minimal_decomposition(&o, &v(&[2.0, 3.0])).unwrap(), vec![(2.0, v(&[1.0, 0.0])), (3.0, v(&[0.0, 1.0]))]);

        let s = ConeSpace::psd_real(2).unwrap();
        let a = s.from_symmetric(&Matrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0])).unwrap();
        let d = minimal_decomposition(&s, &a).unwrap();
        assert_eq!(d.len(), 2);
        assert!((d[0].0 - 3.0).abs() < 1e-12 && (d[1].0 - 1.0).abs() < 1e-12);
        let expect = s.from_symmetric(&Matrix::from_element(2, 2, 0.5)).unwrap();
        assert!((&d[0].1 - expect).norm() < 1e-12);

        let l = ConeSpace::lorentz(3).unwrap();
        let d = minimal_decomposition(&l, &v(&[2.0, 1.0, 0.0])).unwrap();
        assert!((d[0].0 - 3.0).abs() < 1e-15 && (d[1].0 - 1.0).abs() < 1e-15);
        assert!((&d[0].1 - v(&[0.5, 0.5, 0.0])).norm() < 1e-15);
        assert!((&d[1].1 - v(&[0.5, -0.5, 0.0])).norm() < 1e-15);
    }

    #[test]
    fn riesz_examples() {
        assert!(is_riesz(&ConeSpace::orthant(4).unwrap()).0);
        for s in [ConeSpace::psd_real(2).unwrap(), ConeSpace::lorentz(3).unwrap(), ConeSpace::hermitian(2).unwrap()] {
            let (riesz, w) = is_riesz(&s);
            assert!(!riesz);
            assert!(riesz_witness_holds(&s, &w.unwrap()));
        }
        let pyramid = ConeSpace::polyhedral(
            3,
            vec![v(&[1.0, 1.0, 1.0]), v(&[1.0, -1.0, 1.0]), v(&[-1.0, 1.0, 1.0]), v(&[-1.0, -1.0, 1.0])],
        )
        .unwrap();
        let (riesz, w) = is_riesz(&pyramid);
        assert!(!riesz && w.is_some());
    }

    #[test]
    fn homogeneity_examples() {
        assert!(matches!(
            is_facially_homogeneous(&ConeSpace::orthant(3).unwrap(), 20, 1),
            HomogeneityVerdict::Verified { exhaustive: false, .. }
        ));
        assert!(matches!(is_facially_homogeneous(&ConeSpace::lorentz(3).unwrap(), 30, 1), HomogeneityVerdict::Verified { .. }));
        let skew = ConeSpace::polyhedral(2, vec![v(&[1.0, 0.0]), v(&[1.0, 1.0])]).unwrap();
        match is_facially_homogeneous(&skew, 10, 1) {
            HomogeneityVerdict::Refuted { face, point, t } => {
                let image = (face.signature() * t).exp() * &point;
                assert_eq!(skew.membership(&image).unwrap(), Membership::Outside);
            }
            other => panic!("expected refutation, got {other:?}"),
        }
    }
}
