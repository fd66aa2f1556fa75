//! Ratios `a′:a` of cone elements over a self-dual cone, with `a` an order
//! unit, and their correspondence with self-adjoint derivations.

use std::fmt;

use nalgebra::Complex;
use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::cone::vectorize::{hmat, hvec, smat, svec, CMatrix};
use crate::cone::{ConeSpace, ConeSpec};
use crate::derivation::{is_derivation, spectral_faces, Derivation, DerivationCheck};
use crate::error::{Error, Result};
use crate::exact_rational::{stern_brocot_bracket, Bracket, CutOracle};
use crate::face::face_of;
use crate::linalg;
use crate::tol::{CLUSTER, EPS_MEM};
use crate::{Matrix, Vector};

/// Cut of a multiplier `λ` seen through the cone order on one component:
/// `n·a′ᵢ < m·aᵢ` iff `(m − nλ)·aᵢ` is interior to the ray of `aᵢ`. Values
/// of `m − nλ` within `tol·(|m| + n|λ|)` of zero count as equality.
#[derive(Clone, Copy, Debug)]
pub struct ComponentCut {
    pub lambda: f64,
    pub tol: f64,
}

impl ComponentCut {
    fn coefficient(&self, m: &BigInt, n: &BigInt) -> (f64, f64) {
        let m = m.to_f64().unwrap_or(f64::INFINITY);
        let n = n.to_f64().unwrap_or(f64::INFINITY);
        (m - n * self.lambda, self.tol * (m.abs() + n * self.lambda.abs()))
    }
}

impl CutOracle for ComponentCut {
    fn strict_above(&self, m: &BigInt, n: &BigInt) -> bool {
        let (c, band) = self.coefficient(m, n);
        c > band
    }
    fn exact_hit(&self, m: &BigInt, n: &BigInt) -> bool {
        let (c, band) = self.coefficient(m, n);
        c.abs() <= band
    }
}

/// One matched piece of a ratio: `a′ᵢ = λᵢ·aᵢ` on the face of `aᵢ`.
#[derive(Clone, Debug)]
pub struct RatioComponent {
    pub lambda: f64,
    pub bracket: Bracket,
    /// The part `aᵢ` of the consequent.
    pub part: Vector,
}

/// A ratio `a′:a` together with its matched decomposition.
#[derive(Clone, Debug)]
pub struct Ratio {
    host: ConeSpace,
    antecedent: Vector,
    consequent: Vector,
    components: Vec<RatioComponent>,
    max_den: u64,
    tol: f64,
}

impl Ratio {
    /// Builds `a′:a` with the default tolerance [`EPS_MEM`].
    pub fn new(space: &ConeSpace, antecedent: &Vector, consequent: &Vector, max_den: u64) -> Result<Self> {
        Self::with_tolerance(space, antecedent, consequent, max_den, EPS_MEM)
    }

    /// Decomposes the order unit `a` into incomparable parts `aᵢ` matched to
    /// `a′`, so that `a′ = Σ λᵢ aᵢ`, and brackets every `λᵢ`.
    pub fn with_tolerance(space: &ConeSpace, antecedent: &Vector, consequent: &Vector, max_den: u64, tol: f64) -> Result<Self> {
        space.check_dim(antecedent)?;
        if !space.is_order_unit(consequent)? {
            return Err(Error::NotAnOrderUnit);
        }
        if !space.is_self_dual() {
            return Err(Error::Unsupported("ratios need a self-dual cone".into()));
        }
        let parts = matched_parts(space, antecedent, consequent, tol)?;
        let mut components = Vec::with_capacity(parts.len());
        let mut rebuilt = Vector::zeros(space.dim());
        for part in parts {
            let lambda = antecedent.dot(&part) / part.norm_squared();
            rebuilt += &part * lambda;
            let bracket = stern_brocot_bracket(&ComponentCut { lambda, tol }, max_den)?;
            components.push(RatioComponent { lambda, bracket, part });
        }
        let scale = antecedent.norm().max(consequent.norm());
        let residual = (&rebuilt - antecedent).norm();
        if residual > 1e-8 * scale.max(1.0) {
            return Err(Error::NotComparable(format!(
                "antecedent is not diagonal over any incomparable decomposition of the consequent (residual {residual:.2e})"
            )));
        }
        Ok(Self {
            host: space.clone(),
            antecedent: antecedent.clone(),
            consequent: consequent.clone(),
            components,
            max_den,
            tol,
        })
    }

    pub fn host(&self) -> &ConeSpace {
        &self.host
    }

    pub fn antecedent(&self) -> &Vector {
        &self.antecedent
    }

    pub fn consequent(&self) -> &Vector {
        &self.consequent
    }

    pub fn components(&self) -> &[RatioComponent] {
        &self.components
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.components.iter().map(|c| c.lambda).collect()
    }

    pub fn max_den(&self) -> u64 {
        self.max_den
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Some multiplier is negative.
    pub fn has_negative_multiplier(&self) -> bool {
        self.components.iter().any(|c| c.lambda < 0.0)
    }

    /// `δ = Σ λᵢ δ_{face(aᵢ)}`, the self-adjoint derivation with `δa = a′`.
    pub fn to_derivation(&self) -> Derivation {
        let n = self.host.dim();
        let mut total = Matrix::zeros(n, n);
        for c in &self.components {
            let face = face_of(&self.host, &c.part).expect("ratio parts lie in the cone");
            total += face.derivative().into_mat() * c.lambda;
        }
        Derivation::new(linalg::symmetrize(&total))
    }

    /// The ratio of a self-adjoint derivation: `a` is the sum of witnesses of
    /// the nonzero spectral faces and `a′ = δa`.
    pub fn from_derivation(space: &ConeSpace, delta: &Derivation, max_den: u64) -> Result<Self> {
        let family = spectral_faces(space, delta)?;
        let unit = family
            .entries()
            .iter()
            .filter(|(_, f)| !f.is_zero())
            .fold(Vector::zeros(space.dim()), |acc, (_, f)| acc + f.witness());
        Ratio::new(space, &delta.apply(&unit), &unit, max_den)
    }

    /// Components grouped by bracket, with the projector of each group's
    /// face.
    fn groups(&self, max_den: u64) -> Result<Vec<(Bracket, Matrix)>> {
        let mut groups: Vec<(Bracket, Vector)> = Vec::new();
        for c in &self.components {
            let b = stern_brocot_bracket(&ComponentCut { lambda: c.lambda, tol: self.tol }, max_den)?;
            match groups.iter_mut().find(|(g, _)| *g == b) {
                Some((_, sum)) => *sum += &c.part,
                None => groups.push((b, c.part.clone())),
            }
        }
        groups
            .into_iter()
            .map(|(b, sum)| Ok((b, face_of(&self.host, &sum)?.projector().clone())))
            .collect()
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = |x: &Vector| x.iter().map(|c| format!("{c:.6}")).collect::<Vec<_>>().join(", ");
        write!(f, "({}) : ({})", v(&self.antecedent), v(&self.consequent))
    }
}

/// `a′:a` with defaults; see [`Ratio::new`].
pub fn ratio_from_pair(space: &ConeSpace, antecedent: &Vector, consequent: &Vector, max_den: u64) -> Result<Ratio> {
    Ratio::new(space, antecedent, consequent, max_den)
}

/// Parts of the order unit `a` matched to `a′`: the Jordan frame of `a`,
/// refined inside degenerate eigenspaces by the compression of `a′`.
fn matched_parts(space: &ConeSpace, ap: &Vector, a: &Vector, tol: f64) -> Result<Vec<Vector>> {
    let n = space.dim();
    Ok(match space.spec() {
        ConeSpec::Orthant(_) => (0..n).map(|i| linalg::basis_vector(n, i) * a[i]).collect(),
        ConeSpec::Lorentz(_) => {
            let z = a.rows(1, n - 1).into_owned();
            let zp = ap.rows(1, n - 1).into_owned();
            let d = if z.norm() > tol * a.norm() {
                z.normalize()
            } else if zp.norm() > tol * ap.norm() {
                zp.normalize()
            } else {
                linalg::basis_vector(n - 1, 0)
            };
            let nz = z.dot(&d);
            [(a[0] + nz, 1.0), (a[0] - nz, -1.0)]
                .into_iter()
                .map(|(weight, sign)| {
                    let mut c = Vector::zeros(n);
                    c[0] = 0.5 * weight;
                    c.rows_mut(1, n - 1).copy_from(&(&d * (0.5 * sign * weight)));
                    c
                })
                .collect()
        }
        ConeSpec::PsdReal(k) => {
            let k = *k;
            let (vals, vecs) = linalg::sym_eigen(&smat(a, k));
            let target = smat(ap, k);
            let mut parts = Vec::new();
            for r in linalg::clusters(&vals, CLUSTER) {
                let mu = vals[r.clone()].iter().sum::<f64>() / r.len() as f64;
                let u = vecs.columns(r.start, r.len()).into_owned();
                let (_, w) = linalg::sym_eigen(&(u.transpose() * &target * &u));
                let frame = u * w;
                for col in frame.column_iter() {
                    parts.push(svec(&(col * col.transpose() * mu)));
                }
            }
            parts
        }
        ConeSpec::Hermitian(k) => {
            let k = *k;
            let (vals, vecs) = linalg::herm_eigen(&hmat(a, k));
            let target = hmat(ap, k);
            let mut parts = Vec::new();
            for r in linalg::clusters(&vals, CLUSTER) {
                let mu = vals[r.clone()].iter().sum::<f64>() / r.len() as f64;
                let u: CMatrix = vecs.columns(r.start, r.len()).into_owned();
                let (_, w) = linalg::herm_eigen(&(u.adjoint() * &target * &u));
                let frame = u * w;
                for col in frame.column_iter() {
                    parts.push(hvec(&(col * col.adjoint()).map(|z| z * Complex::new(mu, 0.0))));
                }
            }
            parts
        }
        ConeSpec::Polyhedral { .. } => {
            let poly = space.polyhedral_data().expect("polyhedral data");
            match poly.ray_coordinates(a) {
                Some(c) => (0..n).map(|i| &poly.rays[i] * c[i]).collect(),
                None => vec![a.clone()],
            }
        }
    })
}

/// Outcome of comparing two ratios that share comparable decompositions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RatioEquality {
    /// Classes I, II and III agree for every fraction with bounded denominator.
    pub equal: bool,
    /// Only "below" and "not below" are compared.
    pub equal_two_class: bool,
}

impl RatioEquality {
    pub fn variants_agree(&self) -> bool {
        self.equal == self.equal_two_class
    }
}

/// Generalized Eudoxus–Euclid equality.
///
/// The components of each ratio are grouped by their bracket at `max_den`.
/// Two ratios are comparable when every group face of one commutes with
/// every group face of the other; on overlapping faces the multipliers must
/// then fall in the same fraction classes.
pub fn ratio_equal(r: &Ratio, s: &Ratio, max_den: u64) -> Result<RatioEquality> {
    if r.host != s.host {
        return Err(Error::NotComparable("ratios live on different cones".into()));
    }
    let gr = r.groups(max_den)?;
    let gs = s.groups(max_den)?;
    let mut equal = true;
    let mut equal_two_class = true;
    for (br, p) in &gr {
        for (bs, q) in &gs {
            if linalg::commutator(p, q).norm() > 1e-7 {
                return Err(Error::NotComparable("the decompositions do not match face by face".into()));
            }
            if (p * q).norm() > 1e-7 {
                equal &= br == bs;
                equal_two_class &= br.least_upper_fraction(max_den) == bs.least_upper_fraction(max_den);
            }
        }
    }
    Ok(RatioEquality { equal, equal_two_class })
}

/// Result of an operation that yields a ratio when possible and otherwise
/// only an operator.
#[derive(Clone, Debug)]
pub enum RatioOrOperator {
    Ratio(Ratio),
    /// The symmetrized (Jordan) product or other operator that is not the
    /// derivation of any ratio.
    OperatorOnly(Derivation),
}

impl RatioOrOperator {
    pub fn operator(&self) -> Derivation {
        match self {
            RatioOrOperator::Ratio(r) => r.to_derivation(),
            RatioOrOperator::OperatorOnly(d) => d.clone(),
        }
    }

    pub fn ratio(&self) -> Option<&Ratio> {
        match self {
            RatioOrOperator::Ratio(r) => Some(r),
            RatioOrOperator::OperatorOnly(_) => None,
        }
    }
}

/// `½(δσ + σδ)`.
pub fn jordan_compose(r: &Ratio, s: &Ratio) -> Derivation {
    let d = r.to_derivation();
    let e = s.to_derivation();
    Derivation::new(linalg::symmetrize(&((d.mat() * e.mat() + e.mat() * d.mat()) * 0.5)))
}

/// Operator product `δ_r·δ_s`, rewrapped as a ratio when it is again a
/// self-adjoint derivation; otherwise the Jordan product.
pub fn compose(r: &Ratio, s: &Ratio) -> Result<RatioOrOperator> {
    if r.host != s.host {
        return Err(Error::NotComparable("ratios live on different cones".into()));
    }
    let product = r.to_derivation().mat() * s.to_derivation().mat();
    let scale = product.norm().max(1.0);
    if (&product - product.transpose()).norm() <= 1e-9 * scale {
        let sym = linalg::symmetrize(&product);
        if is_derivation(&r.host, &sym, &DerivationCheck::default())?.is_verified() {
            let delta = Derivation::new(sym);
            return Ok(RatioOrOperator::Ratio(Ratio::from_derivation(&r.host, &delta, r.max_den)?));
        }
    }
    Ok(RatioOrOperator::OperatorOnly(jordan_compose(r, s)))
}

/// Sum of ratios through their derivations.
pub fn add(r: &Ratio, s: &Ratio) -> Result<RatioOrOperator> {
    if r.host != s.host {
        return Err(Error::NotComparable("ratios live on different cones".into()));
    }
    let delta = Derivation::new(r.to_derivation().mat() + s.to_derivation().mat());
    match Ratio::from_derivation(&r.host, &delta, r.max_den) {
        Ok(ratio) => Ok(RatioOrOperator::Ratio(ratio)),
        Err(Error::NotADerivation(_) | Error::NotComparable(_) | Error::Numerical(_)) => Ok(RatioOrOperator::OperatorOnly(delta)),
        Err(e) => Err(e),
    }
}

/// Smallest `n <= max_n` with `n·a > b` in the cone order, if any.
pub fn archimedes_witness(space: &ConeSpace, a: &Vector, b: &Vector, max_n: u64) -> Result<Option<u64>> {
    let holds = |n: u64| space.lt(b, &(a * n as f64));
    if max_n == 0 || !holds(max_n)? {
        return Ok(None);
    }
    // n·a − b ∈ K is monotone in n because a ∈ K.
    let (mut lo, mut hi) = (0u64, max_n);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if holds(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// `∃ n <= max_n` with `n·a > b`.
pub fn archimedes_check(space: &ConeSpace, a: &Vector, b: &Vector, max_n: u64) -> Result<bool> {
    Ok(archimedes_witness(space, a, b, max_n)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::psd_multiplier;

    const DEN: u64 = 1_000_000;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    #[test]
    fn orthant_ratio_examples() {
        let s = ConeSpace::orthant(2).unwrap();
        let r = Ratio::new(&s, &v(&[2.0, 6.0]), &v(&[1.0, 2.0]), DEN).unwrap();
        assert_eq!(r.lambdas(), vec![2.0, 3.0]);
        assert!(r.components().iter().all(|c| c.bracket.exact));
        assert_eq!(r.to_derivation().mat(), &Matrix::from_diagonal(&v(&[2.0, 3.0])));
        let scalar = Ratio::new(&s, &v(&[2.0, 2.0]), &v(&[1.0, 1.0]), DEN).unwrap();
        assert_eq!(scalar.lambdas(), vec![2.0, 2.0]);
        assert_eq!(scalar.groups(DEN).unwrap().len(), 1);
        assert!(matches!(Ratio::new(&s, &v(&[1.0, 1.0]), &v(&[1.0, 0.0]), DEN), Err(Error::NotAnOrderUnit)));
    }

    #[test]
    fn psd_ratio_on_eigenframe() {
        let s = ConeSpace::psd_real(2).unwrap();
        let a = s.from_symmetric(&Matrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0])).unwrap();
        let unit = s.canonical_unit().unwrap();
        let r = Ratio::new(&s, &a, &unit, DEN).unwrap();
        let mut l = r.lambdas();
        l.sort_by(f64::total_cmp);
        assert!((l[0] - 1.0).abs() < 1e-12 && (l[1] - 3.0).abs() < 1e-12);
        // δ is Jordan multiplication by A: X ↦ ½(AX + XA).
        let a_mat = Matrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let expect = psd_multiplier(2, &(a_mat * 0.5));
        assert!((r.to_derivation().mat() - expect.mat()).norm() < 1e-12);
    }

    #[test]
    fn incomparable_pair_is_reported() {
        let s = ConeSpace::psd_real(2).unwrap();
        let a = s.from_symmetric(&Matrix::from_diagonal(&v(&[1.0, 2.0]))).unwrap();
        let ap = s.from_symmetric(&Matrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0])).unwrap();
        assert!(matches!(Ratio::new(&s, &ap, &a, DEN), Err(Error::NotComparable(_))));
    }

    #[test]
    fn equality_examples() {
        let s = ConeSpace::orthant(2).unwrap();
        let r = Ratio::new(&s, &v(&[2.0, 6.0]), &v(&[1.0, 2.0]), DEN).unwrap();
        let same = Ratio::new(&s, &v(&[4.0, 12.0]), &v(&[2.0, 4.0]), DEN).unwrap();
        let swapped = Ratio::new(&s, &v(&[6.0, 2.0]), &v(&[2.0, 1.0]), DEN).unwrap();
        assert!(ratio_equal(&r, &same, DEN).unwrap().equal);
        let e = ratio_equal(&r, &swapped, DEN).unwrap();
        assert!(!e.equal && e.variants_agree());
    }

    #[test]
    fn from_derivation_examples() {
        let s = ConeSpace::orthant(2).unwrap();
        let r = Ratio::from_derivation(&s, &Derivation::new(Matrix::from_diagonal(&v(&[2.0, 3.0]))), DEN).unwrap();
        assert_eq!((r.antecedent(), r.consequent()), (&v(&[2.0, 3.0]), &v(&[1.0, 1.0])));

        let p = ConeSpace::psd_real(2).unwrap();
        let delta = psd_multiplier(2, &Matrix::from_diagonal(&v(&[0.0, 1.0])));
        let r = Ratio::from_derivation(&p, &delta, DEN).unwrap();
        assert!((r.consequent() - p.canonical_unit().unwrap()).norm() < 1e-12);
        assert!((p.to_symmetric(r.antecedent()).unwrap() - Matrix::from_diagonal(&v(&[0.0, 2.0]))).norm() < 1e-12);
        assert!((r.to_derivation().mat() - delta.mat()).norm() < 1e-12);
    }

    #[test]
    fn compose_and_add() {
        let s = ConeSpace::orthant(2).unwrap();
        let one = v(&[1.0, 1.0]);
        let r = Ratio::new(&s, &v(&[2.0, 3.0]), &one, DEN).unwrap();
        let t = Ratio::new(&s, &v(&[5.0, 7.0]), &one, DEN).unwrap();
        let c = compose(&r, &t).unwrap();
        assert_eq!(c.ratio().unwrap().antecedent(), &v(&[10.0, 21.0]));
        let sum = add(&r, &t).unwrap();
        assert_eq!(sum.ratio().unwrap().antecedent(), &v(&[7.0, 10.0]));
        let zero = Ratio::new(&s, &Vector::zeros(2), &one, DEN).unwrap();
        let back = add(&r, &zero).unwrap();
        assert!(ratio_equal(back.ratio().unwrap(), &r, DEN).unwrap().equal);
    }

    #[test]
    fn psd_pair_does_not_commute() {
        let p = ConeSpace::psd_real(2).unwrap();
        let unit = p.canonical_unit().unwrap();
        let a = p.from_symmetric(&Matrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0])).unwrap();
        let b = p.from_symmetric(&Matrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 1.0])).unwrap();
        let r = Ratio::new(&p, &a, &unit, DEN).unwrap();
        let s = Ratio::new(&p, &b, &unit, DEN).unwrap();
        let (d, e) = (r.to_derivation(), s.to_derivation());
        assert!(linalg::commutator(d.mat(), e.mat()).norm() > 0.1);
        assert!(matches!(compose(&r, &s).unwrap(), RatioOrOperator::OperatorOnly(_)));
        assert!(matches!(ratio_equal(&r, &s, DEN), Err(Error::NotComparable(_))));
    }

    #[test]
    fn archimedes_examples() {
        let o = ConeSpace::orthant(2).unwrap();
        assert!(!archimedes_check(&o, &v(&[1.0, 0.0]), &v(&[0.0, 1.0]), 1_000_000).unwrap());
        let l = ConeSpace::lorentz(3).unwrap();
        assert!(archimedes_check(&l, &v(&[1.0, 0.2, 0.1]), &v(&[50.0, -30.0, 20.0]), 1000).unwrap());
        let line = ConeSpace::orthant(1).unwrap();
        assert_eq!(archimedes_witness(&line, &v(&[1.0]), &v(&[7.3]), 10).unwrap(), Some(8));
    }
}
