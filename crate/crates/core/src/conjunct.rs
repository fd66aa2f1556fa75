//! Dimensioned quantities and their conjunct (tensor) products.
//!
//! Dimensions are words over opaque symbols, either free (ordered, so
//! `cm·s ≠ s·cm`) or symmetric (exponent vectors, negative exponents for
//! quotients such as density `matter·vol⁻¹`).

use std::collections::BTreeMap;
use std::fmt;

use crate::cone::ConeSpace;
use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::exact_rational::Fraction;
use crate::linalg;
use crate::ratio::classic::{apply_fraction, ClassicRatio, Segment};
use crate::ratio::{compose, Ratio, RatioOrOperator};
use crate::Matrix;

pub const DEFAULT_DEGREE_CAP: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DimWord {
    Free(Vec<String>),
    /// Canonical: no zero exponents, keys sorted.
    Symmetric(BTreeMap<String, i32>),
}

impl DimWord {
    pub fn dimensionless_free() -> Self {
        DimWord::Free(Vec::new())
    }

    pub fn dimensionless() -> Self {
        DimWord::Symmetric(BTreeMap::new())
    }

    pub fn free(symbols: &[&str]) -> Self {
        DimWord::Free(symbols.iter().map(|s| s.to_string()).collect())
    }

    pub fn symmetric(powers: &[(&str, i32)]) -> Self {
        let mut map = BTreeMap::new();
        for (s, p) in powers {
            *map.entry(s.to_string()).or_insert(0) += p;
        }
        map.retain(|_, p| *p != 0);
        DimWord::Symmetric(map)
    }

    /// Number of letters (free) or total absolute exponent (symmetric).
    pub fn degree(&self) -> usize {
        match self {
            DimWord::Free(w) => w.len(),
            DimWord::Symmetric(m) => m.values().map(|p| p.unsigned_abs() as usize).sum(),
        }
    }

    pub fn is_dimensionless(&self) -> bool {
        self.degree() == 0
    }

    /// Concatenation (free) or exponent sum (symmetric).
    pub fn concat(&self, other: &DimWord, cap: usize) -> Result<DimWord> {
        let out = match (self, other) {
            (DimWord::Free(a), DimWord::Free(b)) => DimWord::Free(a.iter().chain(b).cloned().collect()),
            (DimWord::Symmetric(a), DimWord::Symmetric(b)) => {
                let mut m = a.clone();
                for (s, p) in b {
                    *m.entry(s.clone()).or_insert(0) += p;
                }
                m.retain(|_, p| *p != 0);
                DimWord::Symmetric(m)
            }
            _ => return Err(Error::InvalidArgument("cannot mix free and symmetric words".into())),
        };
        if out.degree() > cap {
            return Err(Error::InvalidArgument(format!("word degree {} exceeds the cap {cap}", out.degree())));
        }
        Ok(out)
    }
}

impl fmt::Display for DimWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = match self {
            DimWord::Free(w) => w.clone(),
            DimWord::Symmetric(m) => {
                m.iter().map(|(s, &p)| if p == 1 { s.clone() } else { format!("{s}^{p}") }).collect()
            }
        };
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("·"))
        }
    }
}

/// Dimension of the degree-`d` part of the word algebra on `basis` symbols.
pub fn component_dim(symmetric: bool, basis: usize, d: usize) -> u128 {
    if symmetric {
        // C(basis + d − 1, d)
        let (n, k) = ((basis + d).saturating_sub(1) as u128, d as u128);
        if basis == 0 {
            return u128::from(d == 0);
        }
        (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
    } else {
        (basis as u128).pow(d as u32)
    }
}

#[derive(Clone, Debug)]
pub enum Magnitude {
    Real(f64),
    Exact(Fraction),
    Ratio(Box<Ratio>),
    /// A product of ratio magnitudes that is only available as an operator;
    /// `jordan_only` when it is the symmetrized product of noncommuting
    /// factors.
    Operator { derivation: Derivation, jordan_only: bool },
}

impl Magnitude {
    fn host(&self) -> Option<&ConeSpace> {
        match self {
            Magnitude::Ratio(r) => Some(r.host()),
            _ => None,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Magnitude::Real(x) => Some(*x),
            Magnitude::Exact(q) => Some(q.to_f64()),
            _ => None,
        }
    }

    pub fn product(&self, other: &Magnitude) -> Result<Magnitude> {
        use Magnitude::*;
        Ok(match (self, other) {
            (Exact(p), Exact(q)) => Exact(p * q),
            (Real(_) | Exact(_), Real(_) | Exact(_)) => Real(self.as_f64().unwrap() * other.as_f64().unwrap()),
            (Ratio(r), Ratio(s)) => {
                if self.host() != other.host() {
                    return Err(Error::InvalidArgument("ratio magnitudes live on different cones".into()));
                }
                match compose(r, s)? {
                    RatioOrOperator::Ratio(t) => Ratio(Box::new(t)),
                    RatioOrOperator::OperatorOnly(d) => Operator { derivation: d, jordan_only: true },
                }
            }
            _ => return Err(Error::InvalidArgument("magnitudes are not multiplicable".into())),
        })
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Magnitude::Real(x) => write!(f, "{x}"),
            Magnitude::Exact(q) => write!(f, "{q}"),
            Magnitude::Ratio(r) => write!(f, "{r}"),
            Magnitude::Operator { jordan_only, .. } => {
                write!(f, "{}", if *jordan_only { "<jordan product>" } else { "<operator>" })
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Quantity {
    pub magnitude: Magnitude,
    pub word: DimWord,
}

impl Quantity {
    pub fn new(magnitude: Magnitude, word: DimWord) -> Self {
        Self { magnitude, word }
    }

    pub fn exact(q: Fraction, word: DimWord) -> Self {
        Self::new(Magnitude::Exact(q), word)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.magnitude, self.word)
    }
}

/// The conjunct product with the default degree cap.
pub fn conjunct(q1: &Quantity, q2: &Quantity) -> Result<Quantity> {
    conjunct_with_cap(q1, q2, DEFAULT_DEGREE_CAP)
}

pub fn conjunct_with_cap(q1: &Quantity, q2: &Quantity, cap: usize) -> Result<Quantity> {
    Ok(Quantity { word: q1.word.concat(&q2.word, cap)?, magnitude: q1.magnitude.product(&q2.magnitude)? })
}

/// Rectangles represent the product of ratios: the area ratio
/// `(a′·b′):(a·b)` equals the composition of `a′:a` and `b′:b`, and
/// `x ↦ x×b` intertwines the fraction actions for every probe fraction.
pub fn rectangle_representation_check(ap: &Segment, a: &Segment, bp: &Segment, b: &Segment, probes: &[Fraction]) -> Result<bool> {
    let area = ClassicRatio::new(ap.mul(bp), a.mul(b))?;
    let composed = ClassicRatio::new(ap.clone(), a.clone())?.compose(&ClassicRatio::new(bp.clone(), b.clone())?);
    if !area.value().same(&composed.value()) {
        return Ok(false);
    }
    for q in probes {
        if !apply_fraction(q, ap)?.mul(b).same(&apply_fraction(q, &ap.mul(b))?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// With one symbol, degree-`d` words form a single line, and the ratio of
/// the `d`-fold conjunct powers of `r·AB` and `AB` is `r^d`.
pub fn one_dim_collapse(d: usize, r: &Fraction) -> Result<(Fraction, bool)> {
    if d == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    let word = DimWord::symmetric(&[("AB", 1)]);
    let unit = Quantity::exact(Fraction::one(), word.clone());
    let scaled = Quantity::exact(r.clone(), word);
    let (mut num, mut den) = (scaled.clone(), unit.clone());
    for _ in 1..d {
        num = conjunct_with_cap(&num, &scaled, d)?;
        den = conjunct_with_cap(&den, &unit, d)?;
    }
    let (Magnitude::Exact(n), Magnitude::Exact(m)) = (&num.magnitude, &den.magnitude) else {
        unreachable!("exact magnitudes stay exact")
    };
    let ratio = n / m;
    let holds = component_dim(true, 1, d) == 1 && num.word == den.word && ratio == r.pow(d as u32);
    Ok((ratio, holds))
}

/// Order dependence of conjunct products.
#[derive(Clone, Debug)]
pub struct NoncommutativeWitness {
    pub forward: Quantity,
    pub backward: Quantity,
    /// `q1⊗q2` and `q2⊗q1` carry the same word.
    pub equal: bool,
    /// `‖δ_Aδ_B − δ_Bδ_A‖` for the ratio magnitudes on `psd_real(2)`.
    pub operator_gap: f64,
}

/// Builds `s₁⊗s₂` and `s₂⊗s₁` for the first two symbols of a basis of
/// `basis_size` symbols, in free or symmetric mode, together with the
/// commutator of a noncommuting pair of ratio magnitudes.
pub fn noncommutative_witness(basis_size: usize, symmetric: bool) -> Result<NoncommutativeWitness> {
    if basis_size < 2 {
        return Err(Error::InvalidArgument("need at least two symbols".into()));
    }
    let (s1, s2) = ("s1", "s2");
    let word = |s: &str| if symmetric { DimWord::symmetric(&[(s, 1)]) } else { DimWord::free(&[s]) };
    let q1 = Quantity::exact(Fraction::from_int(2), word(s1));
    let q2 = Quantity::exact(Fraction::from_int(3), word(s2));
    let forward = conjunct(&q1, &q2)?;
    let backward = conjunct(&q2, &q1)?;
    let equal = forward.word == backward.word;

    let host = ConeSpace::psd_real(2)?;
    let unit = host.canonical_unit().expect("psd unit");
    let a = host.from_symmetric(&Matrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]))?;
    let b = host.from_symmetric(&Matrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 1.0]))?;
    let da = Ratio::new(&host, &a, &unit, 1_000_000)?.to_derivation();
    let db = Ratio::new(&host, &b, &unit, 1_000_000)?.to_derivation();
    let operator_gap = linalg::op_norm(&linalg::commutator(da.mat(), db.mat()));
    Ok(NoncommutativeWitness { forward, backward, equal, operator_gap })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, word: DimWord) -> Quantity {
        Quantity::exact(Fraction::from_int(n), word)
    }

    #[test]
    fn newton_definitions() {
        let density = DimWord::symmetric(&[("matter", 1), ("vol", -1)]);
        let vol = DimWord::symmetric(&[("vol", 1)]);
        let m = conjunct(&q(2, density.clone()), &q(2, vol.clone())).unwrap();
        assert_eq!(m.to_string(), "4 [matter]");
        assert_eq!(conjunct(&q(2, density), &q(3, vol)).unwrap().to_string(), "6 [matter]");
        let motion = conjunct(&q(2, DimWord::symmetric(&[("velocity", 1)])), &q(2, DimWord::symmetric(&[("matter", 1)]))).unwrap();
        assert_eq!(motion.to_string(), "4 [matter·velocity]");
    }

    #[test]
    fn words() {
        let a = DimWord::free(&["cm", "s"]);
        let b = DimWord::free(&["s", "cm"]);
        assert_ne!(a, b);
        assert_eq!(a.to_string(), "cm·s");
        assert_eq!(DimWord::symmetric(&[("cm", 1), ("s", 1)]), DimWord::symmetric(&[("s", 1), ("cm", 1)]));
        assert!(DimWord::free(&["x"; 5]).concat(&DimWord::free(&["x"; 4]), 8).is_err());
        assert_eq!(component_dim(true, 1, 5), 1);
        assert_eq!(component_dim(true, 3, 2), 6);
        assert_eq!(component_dim(false, 2, 3), 8);
    }

    #[test]
    fn rectangles() {
        let s = |n, d| Segment::exact(Fraction::new(n, d).unwrap());
        let probes = [Fraction::new(3, 2).unwrap(), Fraction::new(1, 7).unwrap()];
        assert!(rectangle_representation_check(&s(2, 1), &s(1, 1), &s(3, 1), &s(1, 1), &probes).unwrap());
        assert!(rectangle_representation_check(&s(3, 1), &s(2, 1), &s(5, 1), &s(4, 1), &probes).unwrap());
        let area = ClassicRatio::new(s(3, 1).mul(&s(5, 1)), s(2, 1).mul(&s(4, 1))).unwrap();
        assert_eq!(area.value(), s(15, 8));
    }

    #[test]
    fn collapse() {
        let two = Fraction::from_int(2);
        assert_eq!(one_dim_collapse(1, &two).unwrap(), (two.clone(), true));
        assert_eq!(one_dim_collapse(2, &two).unwrap(), (Fraction::from_int(4), true));
        assert_eq!(one_dim_collapse(3, &two).unwrap(), (Fraction::from_int(8), true));
    }

    #[test]
    fn order_dependence() {
        let free = noncommutative_witness(2, false).unwrap();
        assert!(!free.equal);
        assert_eq!(free.forward.word.to_string(), "s1·s2");
        let sym = noncommutative_witness(2, true).unwrap();
        assert!(sym.equal);
        assert!(free.operator_gap > 0.1);
    }
}
