//! The classical one-dimensional theory: segments on a ray, iteration,
//! partition, fraction actions and the Euclidean proportion theorems.

use std::fmt;

use crate::error::{Error, Result};
use crate::exact_rational::{stern_brocot_bracket, Bracket, Fraction, RationalCut, RealCut};
use crate::Vector;

/// A positive length on the unit ray, carrying its exact value when known.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub exact: Option<Fraction>,
    pub approx: f64,
}

impl Segment {
    pub fn exact(q: Fraction) -> Self {
        Self { approx: q.to_f64(), exact: Some(q) }
    }

    pub fn real(x: f64) -> Self {
        Self { exact: None, approx: x }
    }

    pub fn int(n: i64) -> Self {
        Self::exact(Fraction::from_int(n))
    }

    fn map(&self, f: impl Fn(&Fraction) -> Fraction, g: impl Fn(f64) -> f64) -> Self {
        match &self.exact {
            Some(q) => Self::exact(f(q)),
            None => Self::real(g(self.approx)),
        }
    }

    fn zip(&self, other: &Segment, f: impl Fn(&Fraction, &Fraction) -> Fraction, g: impl Fn(f64, f64) -> f64) -> Self {
        match (&self.exact, &other.exact) {
            (Some(p), Some(q)) => Self::exact(f(p, q)),
            _ => Self::real(g(self.approx, other.approx)),
        }
    }

    pub fn add(&self, other: &Segment) -> Segment {
        self.zip(other, |p, q| p + q, |x, y| x + y)
    }

    pub fn mul(&self, other: &Segment) -> Segment {
        self.zip(other, |p, q| p * q, |x, y| x * y)
    }

    pub fn div(&self, other: &Segment) -> Segment {
        self.zip(other, |p, q| p / q, |x, y| x / y)
    }

    /// Exact equality when both values are exact, otherwise relative 1e-12.
    pub fn same(&self, other: &Segment) -> bool {
        match (&self.exact, &other.exact) {
            (Some(p), Some(q)) => p == q,
            _ => (self.approx - other.approx).abs() <= 1e-12 * self.approx.abs().max(other.approx.abs()),
        }
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(q) => write!(f, "{q}"),
            None => write!(f, "{}", self.approx),
        }
    }
}

/// `n·a`.
pub fn iterate(n: u64, a: &Segment) -> Result<Segment> {
    if n == 0 {
        return Err(Error::InvalidArgument("iteration count must be at least 1".into()));
    }
    let k = n as i64;
    Ok(a.map(|q| q * &Fraction::from_int(k), |x| x * n as f64))
}

/// The unique `x` with `n·x = a`.
pub fn partition(a: &Segment, n: u64) -> Result<Segment> {
    if n == 0 {
        return Err(Error::InvalidArgument("partition count must be at least 1".into()));
    }
    let k = n as i64;
    Ok(a.map(|q| q / &Fraction::from_int(k), |x| x / n as f64))
}

/// `(m/n)·a`: partition into `n` parts, then iterate `m` times.
pub fn apply_fraction(q: &Fraction, a: &Segment) -> Result<Segment> {
    if !q.is_positive() {
        return Err(Error::InvalidArgument("fraction must be positive".into()));
    }
    let m: u64 = q.numer().try_into().map_err(|_| Error::InvalidArgument("numerator too large".into()))?;
    let n: u64 = q.denom().try_into().map_err(|_| Error::InvalidArgument("denominator too large".into()))?;
    iterate(m, &partition(a, n)?)
}

/// `(m/n)·x` for a cone element.
pub fn apply_fraction_vec(q: &Fraction, x: &Vector) -> Vector {
    x * q.to_f64()
}

/// Smallest `n <= max_n` with `n·a > b`.
pub fn archimedes_segments(a: &Segment, b: &Segment, max_n: u64) -> Option<u64> {
    let n = match (&a.exact, &b.exact) {
        (Some(p), Some(q)) => {
            let ratio = q / p;
            let floor = ratio.numer() / ratio.denom();
            u64::try_from(floor).ok()?.checked_add(1)?
        }
        _ => (b.approx / a.approx).floor() as u64 + 1,
    };
    (n.max(1) <= max_n).then_some(n.max(1))
}

/// A classical ratio `a′:a` of segments.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicRatio {
    pub antecedent: Segment,
    pub consequent: Segment,
}

impl ClassicRatio {
    pub fn new(antecedent: Segment, consequent: Segment) -> Result<Self> {
        if !(antecedent.approx > 0.0 && consequent.approx > 0.0) {
            return Err(Error::InvalidArgument("segments must be positive".into()));
        }
        Ok(Self { antecedent, consequent })
    }

    pub fn ints(a: i64, b: i64) -> Result<Self> {
        Self::new(Segment::int(a), Segment::int(b))
    }

    /// `a′/a` as a segment of the unit ray.
    pub fn value(&self) -> Segment {
        self.antecedent.div(&self.consequent)
    }

    /// Bracket of the cut `{m/n : n·a′ < m·a}`.
    pub fn bracket(&self, max_den: u64) -> Result<Bracket> {
        match &self.value().exact {
            Some(q) => stern_brocot_bracket(&RationalCut(q.clone()), max_den),
            None => stern_brocot_bracket(&RealCut::new(self.value().approx)?, max_den),
        }
    }

    /// `(a:b)·(c:d) = (a:b)·(b:bd/c) = a:(bd/c)`.
    pub fn compose(&self, other: &ClassicRatio) -> ClassicRatio {
        let d2 = self.consequent.mul(&other.consequent).div(&other.antecedent);
        ClassicRatio { antecedent: self.antecedent.clone(), consequent: d2 }
    }

    /// `(a:b) + (c:d)` over the common consequent `bd`: `(ad + cb):(bd)`.
    pub fn add(&self, other: &ClassicRatio) -> ClassicRatio {
        let num = self.antecedent.mul(&other.consequent).add(&other.antecedent.mul(&self.consequent));
        ClassicRatio { antecedent: num, consequent: self.consequent.mul(&other.consequent) }
    }
}

impl fmt::Display for ClassicRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.antecedent, self.consequent)
    }
}

/// Eudoxus–Euclid equality: every fraction with denominator `<= max_den`
/// falls in the same class (below, on, above) for both ratios.
pub fn classic_equal(r: &ClassicRatio, s: &ClassicRatio, max_den: u64) -> Result<bool> {
    Ok(r.bracket(max_den)? == s.bracket(max_den)?)
}

/// The two-class form: `na′ < ma ⇒ nc′ < mc` and `na′ ≮ ma ⇒ nc′ ≮ mc`
/// for every fraction with denominator `<= max_den`.
pub fn classic_equal_two_class(r: &ClassicRatio, s: &ClassicRatio, max_den: u64) -> Result<bool> {
    Ok(r.bracket(max_den)?.least_upper_fraction(max_den) == s.bracket(max_den)?.least_upper_fraction(max_den))
}

fn exact_values(xs: &[&Segment]) -> Result<Vec<Fraction>> {
    xs.iter()
        .map(|s| s.exact.clone().ok_or_else(|| Error::InvalidArgument("exact segments required".into())))
        .collect()
}

/// Euclid V.23: if `a:b = b′:c′` and `b:c = a′:b′` then `a:c = a′:c′`.
pub fn ex_aequali_check(a: &Segment, b: &Segment, c: &Segment, ap: &Segment, bp: &Segment, cp: &Segment) -> Result<bool> {
    let v = exact_values(&[a, b, c, ap, bp, cp])?;
    let (a, b, c, ap, bp, cp) = (&v[0], &v[1], &v[2], &v[3], &v[4], &v[5]);
    if a * cp != b * bp {
        return Err(Error::Vacuous("a:b differs from b′:c′".into()));
    }
    if b * bp != c * ap {
        return Err(Error::Vacuous("b:c differs from a′:b′".into()));
    }
    Ok(a * cp == c * ap)
}

/// Euclid V.12: if `a′:a = b′:b` then `(a′ + b′):(a + b)` equals both.
pub fn compositio_check(ap: &Segment, a: &Segment, bp: &Segment, b: &Segment) -> Result<bool> {
    let v = exact_values(&[ap, a, bp, b])?;
    let (ap, a, bp, b) = (&v[0], &v[1], &v[2], &v[3]);
    if ap * b != bp * a {
        return Err(Error::Vacuous("a′:a differs from b′:b".into()));
    }
    let whole = &(ap + bp) / &(a + b);
    Ok(whole == ap / a && whole == bp / b)
}
