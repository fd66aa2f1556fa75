//! Finite-dimensional inner-product spaces carrying a closed pointed cone.
//!
//! Every cone kind lives on plain coordinate vectors with the Euclidean inner
//! product: positive semidefinite cones use the isometric vectorizations of
//! [`vectorize`], so faces and derivations are ordinary matrices.

pub mod polyhedral;
pub mod vectorize;

use std::fmt;
use std::sync::Arc;

use nalgebra::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg;
use crate::sampling;
use crate::tol::EPS_MEM;
use crate::{Matrix, Vector};
use polyhedral::Polyhedral;
use vectorize::{hmat, hvec, smat, svec, CMatrix};

/// Which family a cone belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConeKind {
    Orthant,
    Lorentz,
    PsdReal,
    Hermitian,
    Polyhedral,
}

impl ConeKind {
    pub fn name(self) -> &'static str {
        match self {
            ConeKind::Orthant => "orthant",
            ConeKind::Lorentz => "lorentz",
            ConeKind::PsdReal => "psd_real",
            ConeKind::Hermitian => "hermitian",
            ConeKind::Polyhedral => "polyhedral",
        }
    }
}

/// Description of a cone, as given by the user.
#[derive(Clone, Debug, PartialEq)]
pub enum ConeSpec {
    Orthant(usize),
    /// `{(t, z) : t >= ‖z‖}` in dimension `n >= 2`.
    Lorentz(usize),
    /// Real `k×k` positive semidefinite matrices, ambient dimension `k(k+1)/2`.
    PsdReal(usize),
    /// Complex Hermitian `k×k` positive semidefinite matrices, ambient dimension `k²`.
    Hermitian(usize),
    Polyhedral { dim: usize, generators: Vec<Vector> },
}

impl ConeSpec {
    pub fn kind(&self) -> ConeKind {
        match self {
            ConeSpec::Orthant(_) => ConeKind::Orthant,
            ConeSpec::Lorentz(_) => ConeKind::Lorentz,
            ConeSpec::PsdReal(_) => ConeKind::PsdReal,
            ConeSpec::Hermitian(_) => ConeKind::Hermitian,
            ConeSpec::Polyhedral { .. } => ConeKind::Polyhedral,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            ConeSpec::Orthant(n) | ConeSpec::Lorentz(n) => *n,
            ConeSpec::PsdReal(k) => vectorize::sym_dim(*k),
            ConeSpec::Hermitian(k) => vectorize::herm_dim(*k),
            ConeSpec::Polyhedral { dim, .. } => *dim,
        }
    }
}

impl fmt::Display for ConeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConeSpec::Orthant(n) => write!(f, "orthant({n})"),
            ConeSpec::Lorentz(n) => write!(f, "lorentz({n})"),
            ConeSpec::PsdReal(k) => write!(f, "psd_real({k})"),
            ConeSpec::Hermitian(k) => write!(f, "hermitian({k})"),
            ConeSpec::Polyhedral { dim, generators } => write!(f, "polyhedral(dim {dim}, {} generators)", generators.len()),
        }
    }
}

/// Three-way cone membership with a relative tolerance band at the boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Membership {
    Interior,
    Boundary,
    Outside,
}

/// A real inner-product space `H` with its cone of positive elements.
///
/// Immutable after construction; cloning is cheap.
#[derive(Clone, Debug)]
pub struct ConeSpace {
    spec: ConeSpec,
    dim: usize,
    poly: Option<Arc<Polyhedral>>,
}

impl PartialEq for ConeSpace {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl ConeSpace {
    pub fn new(spec: ConeSpec) -> Result<Self> {
        let dim = spec.ambient_dim();
        let mut poly = None;
        match &spec {
            ConeSpec::Orthant(n) if *n >= 1 => {}
            ConeSpec::Lorentz(n) if *n >= 2 => {}
            ConeSpec::PsdReal(k) | ConeSpec::Hermitian(k) if *k >= 1 => {}
            ConeSpec::Polyhedral { dim, generators } if *dim >= 1 => {
                poly = Some(Arc::new(Polyhedral::from_generators(*dim, generators)?));
            }
            other => return Err(Error::InvalidCone(format!("bad dimension for {}", other.kind().name()))),
        }
        Ok(Self { spec, dim, poly })
    }

    pub fn orthant(n: usize) -> Result<Self> {
        Self::new(ConeSpec::Orthant(n))
    }

    pub fn lorentz(n: usize) -> Result<Self> {
        Self::new(ConeSpec::Lorentz(n))
    }

    pub fn psd_real(k: usize) -> Result<Self> {
        Self::new(ConeSpec::PsdReal(k))
    }

    pub fn hermitian(k: usize) -> Result<Self> {
        Self::new(ConeSpec::Hermitian(k))
    }

    pub fn polyhedral(dim: usize, generators: Vec<Vector>) -> Result<Self> {
        Self::new(ConeSpec::Polyhedral { dim, generators })
    }

    pub fn spec(&self) -> &ConeSpec {
        &self.spec
    }

    pub fn kind(&self) -> ConeKind {
        self.spec.kind()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Matrix order `k` of psd/hermitian cones.
    pub fn matrix_order(&self) -> Option<usize> {
        match self.spec {
            ConeSpec::PsdReal(k) | ConeSpec::Hermitian(k) => Some(k),
            _ => None,
        }
    }

    pub fn polyhedral_data(&self) -> Option<&Polyhedral> {
        self.poly.as_deref()
    }

    pub fn check_dim(&self, x: &Vector) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        Ok(())
    }

    /// Signed distance-like margin: positive inside, zero on the boundary.
    ///
    /// Minimum eigenvalue for matrix cones, `t − ‖z‖` for Lorentz, minimum
    /// coordinate for the orthant and minimum facet pairing for polyhedral
    /// cones.
    pub fn margin(&self, x: &Vector) -> f64 {
        match &self.spec {
            ConeSpec::Orthant(_) => x.min(),
            ConeSpec::Lorentz(_) => x[0] - x.rows(1, self.dim - 1).norm(),
            ConeSpec::PsdReal(k) => linalg::min_eigenvalue(&smat(x, *k)),
            ConeSpec::Hermitian(k) => linalg::herm_eigen(&hmat(x, *k)).0[0],
            ConeSpec::Polyhedral { .. } => self.poly().margin(x),
        }
    }

    fn poly(&self) -> &Polyhedral {
        self.poly.as_deref().expect("polyhedral data present for polyhedral cones")
    }

    pub fn membership(&self, x: &Vector) -> Result<Membership> {
        self.check_dim(x)?;
        Ok(self.membership_with(x, EPS_MEM))
    }

    /// Membership with an explicit relative tolerance.
    pub fn membership_with(&self, x: &Vector, tol: f64) -> Membership {
        let scale = x.norm();
        if scale == 0.0 {
            return Membership::Boundary;
        }
        let m = self.margin(x);
        if m > tol * scale {
            Membership::Interior
        } else if m >= -tol * scale {
            Membership::Boundary
        } else {
            Membership::Outside
        }
    }

    /// `x` lies in the (closed) cone up to the membership band.
    pub fn contains(&self, x: &Vector) -> bool {
        self.membership_with(x, EPS_MEM) != Membership::Outside
    }

    pub fn leq(&self, x: &Vector, y: &Vector) -> Result<bool> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.contains(&(y - x)))
    }

    pub fn lt(&self, x: &Vector, y: &Vector) -> Result<bool> {
        let d = y - x;
        Ok(self.leq(x, y)? && d.norm() > EPS_MEM * x.norm().max(y.norm()))
    }

    /// `y − x` lies in the interior of the cone.
    pub fn lt_int(&self, x: &Vector, y: &Vector) -> Result<bool> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.membership_with(&(y - x), EPS_MEM) == Membership::Interior)
    }

    pub fn is_self_dual(&self) -> bool {
        match &self.poly {
            Some(p) => p.self_dual,
            None => true,
        }
    }

    pub fn is_order_unit(&self, u: &Vector) -> Result<bool> {
        Ok(self.membership(u)? == Membership::Interior)
    }

    /// Jordan unit of the symmetric built-in cones: all-ones, `(1, 0, …)` or
    /// the identity matrix. `None` for polyhedral cones.
    pub fn canonical_unit(&self) -> Option<Vector> {
        match &self.spec {
            ConeSpec::Orthant(n) => Some(Vector::from_element(*n, 1.0)),
            ConeSpec::Lorentz(n) => Some(linalg::basis_vector(*n, 0)),
            ConeSpec::PsdReal(k) => Some(svec(&Matrix::identity(*k, *k))),
            ConeSpec::Hermitian(k) => Some(hvec(&linalg::complex_identity(*k))),
            ConeSpec::Polyhedral { .. } => None,
        }
    }

    /// An order unit: the canonical unit, or the sum of the unit extreme rays.
    pub fn default_order_unit(&self) -> Vector {
        self.canonical_unit()
            .unwrap_or_else(|| self.poly().rays.iter().fold(Vector::zeros(self.dim), |acc, r| acc + r))
    }

    /// Metric projection onto the cone.
    pub fn project(&self, x: &Vector) -> Result<Vector> {
        self.check_dim(x)?;
        Ok(match &self.spec {
            ConeSpec::Orthant(_) => x.map(|v| v.max(0.0)),
            ConeSpec::Lorentz(n) => {
                let t = x[0];
                let z = x.rows(1, n - 1).into_owned();
                let nz = z.norm();
                if nz <= t {
                    x.clone()
                } else if nz <= -t {
                    Vector::zeros(*n)
                } else {
                    let c = 0.5 * (t + nz);
                    let mut out = Vector::zeros(*n);
                    out[0] = c;
                    out.rows_mut(1, n - 1).copy_from(&(z * (c / nz)));
                    out
                }
            }
            ConeSpec::PsdReal(k) => {
                let (vals, vecs) = linalg::sym_eigen(&smat(x, *k));
                let mut m = Matrix::zeros(*k, *k);
                for (i, &l) in vals.iter().enumerate() {
                    if l > 0.0 {
                        let u = vecs.column(i);
                        m += (u * u.transpose()).scale(l);
                    }
                }
                svec(&m)
            }
            ConeSpec::Hermitian(k) => {
                let (vals, vecs) = linalg::herm_eigen(&hmat(x, *k));
                let mut m = CMatrix::zeros(*k, *k);
                for (i, &l) in vals.iter().enumerate() {
                    if l > 0.0 {
                        let u = vecs.column(i);
                        m += (u * u.adjoint()).scale(l);
                    }
                }
                hvec(&m)
            }
            ConeSpec::Polyhedral { .. } => self.poly().project(x),
        })
    }

    /// Jordan decomposition `x = x₊ − x₋` with orthogonal positive parts,
    /// computed as the Moreau split along the (self-dual) cone.
    pub fn jordan_decompose(&self, x: &Vector) -> Result<(Vector, Vector)> {
        if !self.is_self_dual() {
            return Err(Error::Unsupported("Jordan decomposition needs a self-dual cone".into()));
        }
        // Moreau: x₋ is the projection of −x, since the polar cone is −K.
        let plus = self.project(x)?;
        let minus = self.project(&-x)?;
        Ok((plus, minus))
    }

    /// `inf { t : −t·u <= x <= t·u }`.
    pub fn order_unit_norm(&self, x: &Vector, u: &Vector) -> Result<f64> {
        self.check_dim(x)?;
        if !self.is_order_unit(u)? {
            return Err(Error::NotAnOrderUnit);
        }
        if x.norm() == 0.0 {
            return Ok(0.0);
        }
        Ok(match &self.spec {
            ConeSpec::Orthant(_) => x.iter().zip(u.iter()).map(|(a, b)| (a / b).abs()).fold(0.0, f64::max),
            ConeSpec::PsdReal(k) => {
                let chol = smat(u, *k).cholesky().ok_or(Error::NotAnOrderUnit)?;
                let l_inv = chol.l().try_inverse().ok_or_else(|| Error::Numerical("singular unit".into()))?;
                let m = &l_inv * smat(x, *k) * l_inv.transpose();
                spectral_radius(&linalg::sym_eigen(&m).0)
            }
            ConeSpec::Hermitian(k) => {
                let chol = hmat(u, *k).cholesky().ok_or(Error::NotAnOrderUnit)?;
                let l_inv = chol.l().try_inverse().ok_or_else(|| Error::Numerical("singular unit".into()))?;
                let m = &l_inv * hmat(x, *k) * l_inv.adjoint();
                spectral_radius(&linalg::herm_eigen(&m).0)
            }
            ConeSpec::Polyhedral { .. } => {
                self.poly().facets.iter().map(|f| (f.dot(x) / f.dot(u)).abs()).fold(0.0, f64::max)
            }
            ConeSpec::Lorentz(_) => self.bisect_norm(x, u),
        })
    }

    fn bisect_norm(&self, x: &Vector, u: &Vector) -> f64 {
        let inside = |t: f64| self.margin(&(u * t - x)) >= 0.0 && self.margin(&(u * t + x)) >= 0.0;
        let mut hi = x.norm() / u.norm().max(f64::MIN_POSITIVE);
        while !inside(hi) {
            hi *= 2.0;
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if inside(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    /// Converts a symmetric matrix to coordinates (psd_real only).
    pub fn from_symmetric(&self, m: &Matrix) -> Result<Vector> {
        match self.spec {
            ConeSpec::PsdReal(k) if m.nrows() == k && m.ncols() == k => Ok(svec(m)),
            _ => Err(Error::InvalidArgument("expected a symmetric matrix of the cone's order".into())),
        }
    }

    pub fn to_symmetric(&self, x: &Vector) -> Result<Matrix> {
        match self.spec {
            ConeSpec::PsdReal(k) => Ok(smat(x, k)),
            _ => Err(Error::InvalidArgument("not a psd_real cone".into())),
        }
    }

    pub fn from_hermitian(&self, m: &CMatrix) -> Result<Vector> {
        match self.spec {
            ConeSpec::Hermitian(k) if m.nrows() == k && m.ncols() == k => Ok(hvec(m)),
            _ => Err(Error::InvalidArgument("expected a Hermitian matrix of the cone's order".into())),
        }
    }

    /// A random extreme ray (unit norm up to the kind's normalization).
    pub fn sample_extreme_ray(&self, rng: &mut impl Rng) -> Vector {
        match &self.spec {
            ConeSpec::Orthant(n) => linalg::basis_vector(*n, rng.random_range(0..*n)),
            ConeSpec::Lorentz(n) => {
                let d = sampling::unit_vector(rng, n - 1);
                let mut v = Vector::zeros(*n);
                v[0] = 1.0;
                v.rows_mut(1, n - 1).copy_from(&d);
                v / std::f64::consts::SQRT_2
            }
            ConeSpec::PsdReal(k) => {
                let u = sampling::unit_vector(rng, *k);
                svec(&(&u * u.transpose()))
            }
            ConeSpec::Hermitian(k) => {
                let u = random_complex_unit(rng, *k);
                hvec(&(&u * u.adjoint()))
            }
            ConeSpec::Polyhedral { .. } => {
                let rays = &self.poly().rays;
                rays[rng.random_range(0..rays.len())].clone()
            }
        }
    }

    /// A random element of the cone: a positive combination of a random
    /// number of extreme rays, so boundary points of every rank appear.
    pub fn sample_point(&self, rng: &mut impl Rng) -> Vector {
        let terms = rng.random_range(1..=self.dim + 1);
        (0..terms).fold(Vector::zeros(self.dim), |acc, _| acc + self.sample_extreme_ray(rng) * rng.random_range(0.1..2.0))
    }

    /// A random interior point.
    pub fn sample_interior(&self, rng: &mut impl Rng) -> Vector {
        let u = self.default_order_unit();
        self.sample_point(rng) + u * rng.random_range(0.2..1.5)
    }

    /// A pair `(x, y)` of nonzero cone elements with `⟨x, y⟩ = 0`.
    ///
    /// Extreme rays are used for the built-in cones; for polyhedral cones the
    /// pair is an extreme ray and a facet normal tight at it.
    pub fn sample_complementary_pair(&self, rng: &mut impl Rng) -> Option<(Vector, Vector)> {
        match &self.spec {
            ConeSpec::Orthant(n) => {
                if *n < 2 {
                    return None;
                }
                let i = rng.random_range(0..*n);
                let j = (i + rng.random_range(1..*n)) % n;
                Some((linalg::basis_vector(*n, i), linalg::basis_vector(*n, j)))
            }
            ConeSpec::Lorentz(n) => {
                let d = sampling::unit_vector(rng, n - 1);
                let mut x = Vector::zeros(*n);
                x[0] = 1.0;
                x.rows_mut(1, n - 1).copy_from(&d);
                let mut y = x.clone();
                y.rows_mut(1, n - 1).neg_mut();
                Some((x, y))
            }
            ConeSpec::PsdReal(k) => {
                if *k < 2 {
                    return None;
                }
                let u = sampling::unit_vector(rng, *k);
                let w = sampling::gaussian_vector(rng, *k);
                let v = (&w - &u * u.dot(&w)).normalize();
                Some((svec(&(&u * u.transpose())), svec(&(&v * v.transpose()))))
            }
            ConeSpec::Hermitian(k) => {
                if *k < 2 {
                    return None;
                }
                let u = random_complex_unit(rng, *k);
                let w = random_complex_unit(rng, *k);
                let v = (&w - &u * u.dotc(&w)).normalize();
                Some((hvec(&(&u * u.adjoint())), hvec(&(&v * v.adjoint()))))
            }
            ConeSpec::Polyhedral { .. } => {
                let p = self.poly();
                let pairs: Vec<(usize, usize)> = (0..p.rays.len())
                    .flat_map(|r| (0..p.facets.len()).map(move |f| (r, f)))
                    .filter(|&(r, f)| p.facets[f].dot(&p.rays[r]).abs() < 1e-9)
                    .collect();
                if pairs.is_empty() {
                    return None;
                }
                let (r, f) = pairs[rng.random_range(0..pairs.len())];
                Some((p.rays[r].clone(), p.facets[f].clone()))
            }
        }
    }
}

fn spectral_radius(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m: f64, v| m.max(v.abs()))
}

pub(crate) fn random_complex_unit(rng: &mut impl Rng, k: usize) -> nalgebra::DVector<Complex<f64>> {
    let re = sampling::gaussian_vector(rng, k);
    let im = sampling::gaussian_vector(rng, k);
    let v = nalgebra::DVector::from_fn(k, |i, _| Complex::new(re[i], im[i]));
    let n = v.norm();
    v / Complex::new(n, 0.0)
}
