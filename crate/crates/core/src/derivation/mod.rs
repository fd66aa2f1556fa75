//! Derivations of a cone: linear maps `M` whose flows `exp(tM)` preserve the
//! cone for every real `t`.

mod lie;
mod spectral;

pub use lie::{lie_center, orientability, Orientability, OrientabilityReport};
pub use spectral::{reconstruct_from_faces, spectral_faces, SpectralFaceFamily};

use rand::Rng;

use crate::cone::vectorize::{lift_herm, lift_sym, to_complex, CMatrix};
use crate::cone::{ConeSpace, ConeSpec, Membership};
use crate::error::{Error, Result};
use crate::linalg;
use crate::sampling;
use crate::tol::{EPS_MEM, PARAM_RESIDUAL, PROJECTOR};
use crate::{Matrix, Vector};

/// A linear map on the coordinates of the host space.
#[derive(Clone, Debug, PartialEq)]
pub struct Derivation {
    mat: Matrix,
    selfadjoint: bool,
}

impl Derivation {
    pub fn new(mat: Matrix) -> Self {
        let selfadjoint = (&mat - mat.transpose()).norm() <= PROJECTOR * mat.norm().max(1.0);
        Self { mat, selfadjoint }
    }

    pub fn mat(&self) -> &Matrix {
        &self.mat
    }

    pub fn into_mat(self) -> Matrix {
        self.mat
    }

    pub fn is_selfadjoint(&self) -> bool {
        self.selfadjoint
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        &self.mat * x
    }

    pub fn commutator(&self, other: &Derivation) -> Derivation {
        Derivation::new(linalg::commutator(&self.mat, &other.mat))
    }

    /// `exp(t·M)`.
    pub fn flow(&self, t: f64) -> Matrix {
        (&self.mat * t).exp()
    }
}

/// Outcome of a derivation test.
#[derive(Clone, Debug)]
pub enum DerivationVerdict {
    /// `exact` when certified by the known parametrization or tangency
    /// system, otherwise only sampled flows were checked.
    Verified { exact: bool },
    /// `exp(t·M)·point = image` lies outside the cone.
    Refuted { point: Vector, t: f64, image: Vector },
    Unknown(String),
}

impl DerivationVerdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, DerivationVerdict::Verified { .. })
    }
}

/// Parameters for [`is_derivation`].
#[derive(Clone, Debug)]
pub struct DerivationCheck {
    pub t_grid: Vec<f64>,
    /// Random boundary points tried when sampling flows.
    pub samples: usize,
    pub seed: u64,
    /// Use the exact certificates; `false` forces pure flow sampling.
    pub exact: bool,
}

impl Default for DerivationCheck {
    fn default() -> Self {
        Self { t_grid: vec![-4.0, -2.0, -1.0, -0.5, -0.25, 0.25, 0.5, 1.0, 2.0, 4.0], samples: 64, seed: 0, exact: true }
    }
}

/// Decides whether `m` is a derivation of the cone.
///
/// Built-in cones are certified by least-squares membership in their known
/// derivation algebra, polyhedral cones by the tangency system
/// `⟨f, M r⟩ = 0` over incident extreme-ray/facet pairs. A failed
/// certificate is turned into an explicit escaping orbit when one is found.
pub fn is_derivation(space: &ConeSpace, m: &Matrix, check: &DerivationCheck) -> Result<DerivationVerdict> {
    let n = space.dim();
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: m.nrows() });
    }
    let scale = m.norm();
    if scale == 0.0 {
        return Ok(DerivationVerdict::Verified { exact: true });
    }
    let mut rng = sampling::rng(check.seed);
    let pairs = complementary_pairs(space, check.samples, &mut rng);
    if check.exact {
        let residual = certificate_residual(space, m, &pairs) / scale;
        if residual <= PARAM_RESIDUAL {
            return Ok(DerivationVerdict::Verified { exact: true });
        }
    }
    if let Some((point, t, image)) = find_escape(space, m, &pairs, check, &mut rng) {
        return Ok(DerivationVerdict::Refuted { point, t, image });
    }
    if check.exact {
        Ok(DerivationVerdict::Unknown("outside the derivation algebra but no escaping orbit was found".into()))
    } else {
        Ok(DerivationVerdict::Verified { exact: false })
    }
}

fn certificate_residual(space: &ConeSpace, m: &Matrix, pairs: &[(Vector, Vector)]) -> f64 {
    match parametrization(space) {
        Some(param) => linalg::span_residual(m, &linalg::matrix_span(&param, 1e-12)),
        None => pairs.iter().map(|(x, y)| y.dot(&(m * x)).abs()).fold(0.0, f64::max),
    }
}

/// Pairs `(x, y)` in the cone (resp. dual cone) with `⟨x, y⟩ = 0`: every
/// incident ray/facet pair for polyhedral cones, random extreme pairs
/// otherwise.
fn complementary_pairs(space: &ConeSpace, samples: usize, rng: &mut impl Rng) -> Vec<(Vector, Vector)> {
    match space.polyhedral_data() {
        Some(poly) => poly
            .rays
            .iter()
            .flat_map(|r| poly.facets.iter().filter(|f| f.dot(r).abs() < 1e-9).map(move |f| (r.clone(), f.clone())))
            .collect(),
        None => (0..samples).filter_map(|_| space.sample_complementary_pair(rng)).collect(),
    }
}

/// Searches for `(x, t)` with `exp(tM)x` outside the cone.
///
/// Tangency violations `c = ⟨y, Mx⟩ ≠ 0` point to the escaping direction:
/// `⟨y, exp(tM)x⟩ = t·c + O(t²)`, so `t` is taken with the sign of `−c`
/// and shrunk until the first-order term dominates.
fn find_escape(
    space: &ConeSpace,
    m: &Matrix,
    pairs: &[(Vector, Vector)],
    check: &DerivationCheck,
    rng: &mut impl Rng,
) -> Option<(Vector, f64, Vector)> {
    let outside = |x: &Vector, t: f64| -> Option<(Vector, f64, Vector)> {
        let image = (m * t).exp() * x;
        (image.iter().all(|v| v.is_finite()) && space.membership_with(&image, EPS_MEM) == Membership::Outside)
            .then(|| (x.clone(), t, image))
    };
    let mut ranked: Vec<(f64, &Vector)> = pairs.iter().map(|(x, y)| (y.dot(&(m * x)), x)).collect();
    ranked.sort_by(|a, b| b.0.abs().total_cmp(&a.0.abs()));
    for &(c, x) in ranked.iter().take(8) {
        if c.abs() <= PARAM_RESIDUAL * m.norm() {
            break;
        }
        let sign = -c.signum();
        let mut ts: Vec<f64> = check.t_grid.iter().copied().filter(|t| t.signum() == sign).collect();
        ts.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
        ts.extend((3..40).map(|j| sign * 0.5f64.powi(j)));
        if let Some(hit) = ts.into_iter().find_map(|t| outside(x, t)) {
            return Some(hit);
        }
    }
    for _ in 0..check.samples {
        let x = space.sample_extreme_ray(rng);
        if let Some(hit) = check.t_grid.iter().find_map(|&t| outside(&x, t)) {
            return Some(hit);
        }
    }
    None
}

/// Spanning family of the derivation algebra of a built-in cone; `None` for
/// polyhedral cones.
pub fn parametrization(space: &ConeSpace) -> Option<Vec<Matrix>> {
    let n = space.dim();
    Some(match space.spec() {
        ConeSpec::Orthant(_) => (0..n)
            .map(|i| {
                let mut m = Matrix::zeros(n, n);
                m[(i, i)] = 1.0;
                m
            })
            .collect(),
        ConeSpec::Lorentz(_) => {
            let mut out = vec![Matrix::identity(n, n)];
            for i in 1..n {
                let mut b = Matrix::zeros(n, n);
                b[(0, i)] = 1.0;
                b[(i, 0)] = 1.0;
                out.push(b);
                for j in i + 1..n {
                    let mut r = Matrix::zeros(n, n);
                    r[(i, j)] = 1.0;
                    r[(j, i)] = -1.0;
                    out.push(r);
                }
            }
            out
        }
        ConeSpec::PsdReal(k) => {
            let k = *k;
            let mut out = Vec::new();
            for i in 0..k {
                for j in 0..k {
                    let mut l = Matrix::zeros(k, k);
                    l[(i, j)] = 1.0;
                    out.push(lift_sym(k, |x| &l * x + x * l.transpose()));
                }
            }
            out
        }
        ConeSpec::Hermitian(k) => {
            let k = *k;
            let mut out = Vec::new();
            for i in 0..k {
                for j in 0..k {
                    let mut unit = Matrix::zeros(k, k);
                    unit[(i, j)] = 1.0;
                    let re = to_complex(&unit);
                    let im: CMatrix = re.map(|z| z * nalgebra::Complex::new(0.0, 1.0));
                    for l in [re, im] {
                        out.push(lift_herm(k, |x| &l * x + x * l.adjoint()));
                    }
                }
            }
            out
        }
        ConeSpec::Polyhedral { .. } => return None,
    })
}

/// The derivation `X ↦ LX + XLᵀ` of `psd_real(k)`.
pub fn psd_multiplier(k: usize, l: &Matrix) -> Derivation {
    Derivation::new(lift_sym(k, |x| l * x + x * l.transpose()))
}

/// The derivation `X ↦ LX + XL*` of `hermitian(k)`.
pub fn hermitian_multiplier(k: usize, l: &CMatrix) -> Derivation {
    Derivation::new(lift_herm(k, |x| l * x + x * l.adjoint()))
}

/// A basis of the derivation algebra (Frobenius-orthonormal).
pub fn derivation_basis(space: &ConeSpace) -> Vec<Derivation> {
    let n = space.dim();
    let mats = match parametrization(space) {
        Some(param) => linalg::matrix_span(&param, 1e-10),
        None => {
            let poly = space.polyhedral_data().expect("polyhedral data");
            let rows: Vec<Vector> = poly
                .rays
                .iter()
                .flat_map(|r| poly.facets.iter().filter(|f| f.dot(r).abs() < 1e-9).map(move |f| linalg::flatten(&(f * r.transpose()))))
                .collect();
            if rows.is_empty() {
                (0..n * n).map(|i| linalg::unflatten(&linalg::basis_vector(n * n, i), n)).collect()
            } else {
                let system = Matrix::from_rows(&rows.iter().map(|r| r.transpose()).collect::<Vec<_>>());
                linalg::null_space(&system, 1e-10).iter().map(|v| linalg::unflatten(v, n)).collect()
            }
        }
    };
    mats.into_iter().map(Derivation::new).collect()
}

/// A basis of the self-adjoint derivations.
pub fn selfadjoint_derivations(space: &ConeSpace) -> Vec<Derivation> {
    selfadjoint_part(&derivation_basis(space))
}

/// Orthonormal basis of `span(basis) ∩ {M = Mᵀ}`.
pub fn selfadjoint_part(basis: &[Derivation]) -> Vec<Derivation> {
    if basis.is_empty() {
        return Vec::new();
    }
    let cols: Vec<Vector> = basis.iter().map(|d| linalg::flatten(&(d.mat() - d.mat().transpose()))).collect();
    let combos = linalg::null_space(&Matrix::from_columns(&cols), 1e-10);
    let mats: Vec<Matrix> = combos
        .iter()
        .map(|c| linalg::symmetrize(&basis.iter().zip(c.iter()).fold(Matrix::zeros(basis[0].dim(), basis[0].dim()), |acc, (d, &w)| acc + d.mat() * w)))
        .collect();
    linalg::matrix_span(&mats, 1e-10).into_iter().map(Derivation::new).collect()
}
