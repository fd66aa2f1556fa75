//! Inscribed and circumscribed step figures under a monotone curve, in
//! exact arithmetic.

use crate::error::{Error, Result};
use crate::exact_rational::Fraction;

/// Lower and upper step sums over `k` equal bases of `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Quadrature {
    pub k: usize,
    pub lower: Fraction,
    pub upper: Fraction,
}

impl Quadrature {
    /// `upper − lower`, the width of the bracket around the area.
    pub fn width(&self) -> Fraction {
        &self.upper - &self.lower
    }

    /// `upper / lower − 1`; `None` when the inscribed figure is empty but
    /// the circumscribed one is not.
    pub fn ratio_gap(&self) -> Option<Fraction> {
        if self.lower.is_zero() {
            return self.upper.is_zero().then(Fraction::zero);
        }
        Some(&(&self.upper / &self.lower) - &Fraction::one())
    }

    /// `(f(1) − f(0)) / (k·lower)`, the bound on [`Quadrature::ratio_gap`].
    pub fn gap_bound(&self, f0: &Fraction, f1: &Fraction) -> Option<Fraction> {
        if self.lower.is_zero() {
            return None;
        }
        Some(&(f1 - f0).abs() / &(&Fraction::from_int(self.k as i64) * &self.lower))
    }

    pub fn brackets(&self, value: &Fraction) -> bool {
        &self.lower <= value && value <= &self.upper
    }
}

fn monotone(samples: &[Fraction]) -> bool {
    samples.windows(2).all(|w| w[0] <= w[1]) || samples.windows(2).all(|w| w[0] >= w[1])
}

/// Step sums from `k + 1` samples of a monotone function at `j/k`.
pub fn quadrature(samples: &[Fraction]) -> Result<Quadrature> {
    if samples.len() < 2 {
        return Err(Error::InvalidArgument("need at least two samples".into()));
    }
    if !monotone(samples) {
        return Err(Error::InvalidArgument("samples are not monotone".into()));
    }
    let k = samples.len() - 1;
    let mut lower = Fraction::zero();
    let mut upper = Fraction::zero();
    for w in samples.windows(2) {
        let (lo, hi) = if w[0] <= w[1] { (&w[0], &w[1]) } else { (&w[1], &w[0]) };
        lower = &lower + lo;
        upper = &upper + hi;
    }
    let base = Fraction::from_int(k as i64);
    Ok(Quadrature { k, lower: &lower / &base, upper: &upper / &base })
}

/// Samples `f(j/k)` for `j = 0..=k`.
pub fn sample(f: impl Fn(&Fraction) -> Fraction, k: usize) -> Result<Vec<Fraction>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    (0..=k).map(|j| Fraction::new(j as i64, k as i64).map(|x| f(&x))).collect()
}

/// Two figures over the same bases whose corresponding columns are all in
/// ratio `rho`.
#[derive(Clone, Debug, PartialEq)]
pub struct FigureRatio {
    pub rho: Fraction,
    /// Inscribed area of the second figure over that of the first.
    pub lower_ratio: Fraction,
    pub upper_ratio: Fraction,
}

/// Compares two figures column by column; fails unless every nonempty
/// column pair has the same ratio.
pub fn figure_ratio(f: &[Fraction], g: &[Fraction]) -> Result<FigureRatio> {
    if f.len() != g.len() {
        return Err(Error::DimensionMismatch { expected: f.len(), got: g.len() });
    }
    let qf = quadrature(f)?;
    let qg = quadrature(g)?;
    let mut rho: Option<Fraction> = None;
    for (x, y) in f.iter().zip(g) {
        if x.is_zero() && y.is_zero() {
            continue;
        }
        if x.is_zero() {
            return Err(Error::InvalidArgument("a column of the first figure is empty".into()));
        }
        let r = y / x;
        match &rho {
            Some(prev) if *prev != r => return Err(Error::InvalidArgument("column ratios differ".into())),
            _ => rho = Some(r),
        }
    }
    let rho = rho.ok_or_else(|| Error::InvalidArgument("both figures are empty".into()))?;
    let ratio = |a: &Fraction, b: &Fraction| if a.is_zero() { rho.clone() } else { b / a };
    Ok(FigureRatio { lower_ratio: ratio(&qf.lower, &qg.lower), upper_ratio: ratio(&qf.upper, &qg.upper), rho })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(x: &Fraction) -> Fraction {
        x * x
    }

    #[test]
    fn parabola() {
        let q = quadrature(&sample(square, 1024).unwrap()).unwrap();
        let third = Fraction::new(1, 3).unwrap();
        assert!(q.brackets(&third));
        assert_eq!(q.width(), Fraction::new(1, 1024).unwrap());
        let gap = q.ratio_gap().unwrap();
        assert_eq!(gap, q.gap_bound(&Fraction::zero(), &Fraction::one()).unwrap());
    }

    #[test]
    fn constant_has_no_gap() {
        for k in [1, 7, 64] {
            let q = quadrature(&sample(|_| Fraction::new(2, 3).unwrap(), k).unwrap()).unwrap();
            assert!(q.ratio_gap().unwrap().is_zero());
        }
    }

    #[test]
    fn rejects_non_monotone() {
        let s: Vec<Fraction> = [0, 2, 1].iter().map(|&n| Fraction::from_int(n)).collect();
        assert!(quadrature(&s).is_err());
    }

    #[test]
    fn proportional_figures() {
        for k in [1, 3, 100] {
            let f = sample(square, k).unwrap();
            let g = sample(|x| &Fraction::from_int(2) * &square(x), k).unwrap();
            let r = figure_ratio(&f, &g).unwrap();
            assert_eq!(r.rho, Fraction::from_int(2));
            assert_eq!(r.lower_ratio, Fraction::from_int(2));
            assert_eq!(r.upper_ratio, Fraction::from_int(2));
        }
    }
}
