use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Fraction;
use crate::error::{Error, Result};

/// Arithmetic view of a cut `λ` determined by a pair `a':a`.
///
/// For a fraction `m/n` (`n > 0`), `strict_above` answers `n·a' < m·a`
/// (the fraction exceeds the cut) and `exact_hit` answers `n·a' = m·a`.
/// Implementations must be monotone in `m/n`, and `exact_hit` may hold for
/// at most one reduced fraction.
pub trait CutOracle {
    fn strict_above(&self, m: &BigInt, n: &BigInt) -> bool;
    fn exact_hit(&self, m: &BigInt, n: &BigInt) -> bool;
}

impl<T: CutOracle + ?Sized> CutOracle for &T {
    fn strict_above(&self, m: &BigInt, n: &BigInt) -> bool {
        (**self).strict_above(m, n)
    }
    fn exact_hit(&self, m: &BigInt, n: &BigInt) -> bool {
        (**self).exact_hit(m, n)
    }
}

/// Eudoxus' three classes of fractions relative to a cut.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FractionClass {
    /// Below the cut: `n·a' > m·a`.
    I,
    /// On the cut: `n·a' = m·a`.
    II,
    /// Above the cut: `n·a' < m·a`.
    III,
}

pub fn classify_fraction(q: &Fraction, oracle: &impl CutOracle) -> Result<FractionClass> {
    locate(oracle, q.numer(), q.denom())
}

fn locate(oracle: &impl CutOracle, m: &BigInt, n: &BigInt) -> Result<FractionClass> {
    let hit = oracle.exact_hit(m, n);
    let above = oracle.strict_above(m, n);
    match (hit, above) {
        (true, true) => Err(Error::OracleInconsistent(format!("{m}/{n} is both on and above the cut"))),
        (true, false) => Ok(FractionClass::II),
        (false, true) => Ok(FractionClass::III),
        (false, false) => Ok(FractionClass::I),
    }
}

/// Two Stern–Brocot neighbours enclosing a cut, or the exact hit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bracket {
    pub lo: Fraction,
    pub hi: Fraction,
    pub exact: bool,
}

impl Bracket {
    pub fn width(&self) -> Fraction {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        let lo = self.lo.to_f64();
        let hi = self.hi.to_f64();
        lo <= x && x <= hi
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo.to_f64() + self.hi.to_f64())
    }

    /// Smallest fraction with denominator `<= max_den` lying in class III.
    ///
    /// Two cuts agree on "above / not above" for every such fraction exactly
    /// when this value coincides.
    pub fn least_upper_fraction(&self, max_den: u64) -> Fraction {
        if self.exact {
            farey_successor(&self.lo, max_den)
        } else {
            self.hi.clone()
        }
    }
}

/// Successor of `q` among the reduced fractions with denominator `<= max_den`.
pub fn farey_successor(q: &Fraction, max_den: u64) -> Fraction {
    let a = q.numer();
    let b = q.denom();
    let n = BigInt::from(max_den.max(1));
    // b·c − a·d = 1  ⇒  d ≡ −a⁻¹ (mod b)
    let d = if b.is_one() {
        n.clone()
    } else {
        let eg = a.mod_floor(b).extended_gcd(b);
        let inv = eg.x.mod_floor(b);
        let d0 = (-inv).mod_floor(b);
        let d0 = if d0.is_zero() { b.clone() } else { d0 };
        &d0 + ((&n - &d0) / b) * b
    };
    let c = (BigInt::one() + a * &d) / b;
    Fraction::reduced(c, d)
}

struct Reflected<'a, O: ?Sized>(&'a O);

impl<O: CutOracle + ?Sized> CutOracle for Reflected<'_, O> {
    fn strict_above(&self, m: &BigInt, n: &BigInt) -> bool {
        let neg = -m;
        !self.0.strict_above(&neg, n) && !self.0.exact_hit(&neg, n)
    }
    fn exact_hit(&self, m: &BigInt, n: &BigInt) -> bool {
        self.0.exact_hit(&-m, n)
    }
}

/// Brackets the cut of `oracle` between Stern–Brocot neighbours whose
/// denominators do not exceed `max_den`.
///
/// The descent starts at the root interval `(0/1, 1/0)` and follows mediant
/// refinement; runs in one direction are located by exponential and binary
/// search so huge partial quotients cost logarithmic time. Negative cuts are
/// reflected before the search.
pub fn stern_brocot_bracket(oracle: &impl CutOracle, max_den: u64) -> Result<Bracket> {
    if max_den == 0 {
        return Err(Error::InvalidArgument("max_den must be positive".into()));
    }
    let zero = BigInt::zero();
    let one = BigInt::one();
    match locate(oracle, &zero, &one)? {
        FractionClass::II => {
            return Ok(Bracket { lo: Fraction::zero(), hi: Fraction::zero(), exact: true });
        }
        FractionClass::III => {
            let b = positive_bracket(&Reflected(oracle), max_den)?;
            return Ok(Bracket { lo: -b.hi, hi: -b.lo, exact: b.exact });
        }
        FractionClass::I => {}
    }
    positive_bracket(oracle, max_den)
}

#[derive(Clone)]
struct Node {
    n: BigInt,
    d: BigInt,
}

impl Node {
    fn step(&self, other: &Node, k: &BigInt) -> Node {
        Node { n: &self.n + k * &other.n, d: &self.d + k * &other.d }
    }
    fn fraction(&self) -> Fraction {
        Fraction::reduced(self.n.clone(), self.d.clone())
    }
}

fn positive_bracket(oracle: &impl CutOracle, max_den: u64) -> Result<Bracket> {
    let cap = BigInt::from(max_den);
    let mut lo = Node { n: BigInt::zero(), d: BigInt::one() };
    let mut hi = Node { n: BigInt::one(), d: BigInt::zero() };
    loop {
        let mediant = lo.step(&hi, &BigInt::one());
        if mediant.d > cap {
            break;
        }
        match locate(oracle, &mediant.n, &mediant.d)? {
            FractionClass::II => {
                let f = mediant.fraction();
                return Ok(Bracket { lo: f.clone(), hi: f, exact: true });
            }
            FractionClass::III => {
                // hi_k = hi + k·lo stays above the cut for k = 1..=K.
                let k = run_length(&hi, &lo, &cap, |node| locate(oracle, &node.n, &node.d), FractionClass::III)?;
                hi = hi.step(&lo, &k);
            }
            FractionClass::I => {
                let k = run_length(&lo, &hi, &cap, |node| locate(oracle, &node.n, &node.d), FractionClass::I)?;
                lo = lo.step(&hi, &k);
            }
        }
    }
    if hi.d.is_zero() {
        return Err(Error::Numerical("cut exceeds every fraction reachable below max_den".into()));
    }
    Ok(Bracket { lo: lo.fraction(), hi: hi.fraction(), exact: false })
}

/// Largest `k >= 1` with `base + k·dir` still in class `side` and within the
/// denominator cap. Assumes `k = 1` qualifies.
fn run_length(
    base: &Node,
    dir: &Node,
    cap: &BigInt,
    mut class_of: impl FnMut(&Node) -> Result<FractionClass>,
    side: FractionClass,
) -> Result<BigInt> {
    let den_limit = if dir.d.is_zero() { None } else { Some((cap - &base.d) / &dir.d) };
    let ok = |k: &BigInt, class_of: &mut dyn FnMut(&Node) -> Result<FractionClass>| -> Result<bool> {
        if let Some(limit) = &den_limit {
            if k > limit {
                return Ok(false);
            }
        }
        Ok(class_of(&base.step(dir, k))? == side)
    };
    let mut good = BigInt::one();
    let mut probe = BigInt::from(2);
    while ok(&probe, &mut class_of)? {
        good = probe.clone();
        probe <<= 1;
    }
    // good qualifies, probe does not.
    let mut bad = probe;
    while &bad - &good > BigInt::one() {
        let mid: BigInt = (&good + &bad) >> 1;
        if ok(&mid, &mut class_of)? {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Ok(good)
}

/// Exact cut at a rational value.
#[derive(Clone, Debug)]
pub struct RationalCut(pub Fraction);

impl CutOracle for RationalCut {
    fn strict_above(&self, m: &BigInt, n: &BigInt) -> bool {
        Fraction::reduced(m.clone(), n.clone()) > self.0
    }
    fn exact_hit(&self, m: &BigInt, n: &BigInt) -> bool {
        Fraction::reduced(m.clone(), n.clone()) == self.0
    }
}

/// Exact cut at a finite `f64`, compared through its dyadic rational value.
#[derive(Clone, Debug)]
pub struct RealCut(Fraction);

impl RealCut {
    pub fn new(x: f64) -> Result<Self> {
        Ok(Self(Fraction::from_f64(x)?))
    }
}

impl CutOracle for RealCut {
    fn strict_above(&self, m: &BigInt, n: &BigInt) -> bool {
        RationalCut(self.0.clone()).strict_above(m, n)
    }
    fn exact_hit(&self, m: &BigInt, n: &BigInt) -> bool {
        RationalCut(self.0.clone()).exact_hit(m, n)
    }
}

/// Exact cut at `√r` for a positive integer `r`, decided by `m² ⋛ r·n²`.
#[derive(Clone, Debug)]
pub struct SqrtCut {
    radicand: BigInt,
}

impl SqrtCut {
    pub fn new(radicand: u64) -> Result<Self> {
        if radicand == 0 {
            return Err(Error::InvalidArgument("radicand must be positive".into()));
        }
        Ok(Self { radicand: BigInt::from(radicand) })
    }
}

impl CutOracle for SqrtCut {
    fn strict_above(&self, m: &BigInt, n: &BigInt) -> bool {
        m.is_positive() && m * m > &self.radicand * n * n
    }
    fn exact_hit(&self, m: &BigInt, n: &BigInt) -> bool {
        m.is_positive() && m * m == &self.radicand * n * n
    }
}
