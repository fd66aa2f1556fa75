//! Worked examples shared by the `demo` subcommands and the suite.

use eudoxus::conjunct::{conjunct, DimWord, Quantity};
use eudoxus::krein::KreinSpace;
use eudoxus::ratio::quadrature::{figure_ratio, quadrature, sample, FigureRatio, Quadrature};
use eudoxus::{ConeSpace, Fraction, Result, Vector};

pub fn density(value: Fraction) -> Quantity {
    Quantity::exact(value, DimWord::symmetric(&[("matter", 1), ("vol", -1)]))
}

pub fn volume(value: Fraction) -> Quantity {
    Quantity::exact(value, DimWord::symmetric(&[("vol", 1)]))
}

pub fn velocity(value: Fraction) -> Quantity {
    Quantity::exact(value, DimWord::symmetric(&[("velocity", 1)]))
}

pub fn matter(value: Fraction) -> Quantity {
    Quantity::exact(value, DimWord::symmetric(&[("matter", 1)]))
}

/// Quantity of matter from density and bulk.
pub fn matter_from(d: &Fraction, v: &Fraction) -> Result<Quantity> {
    conjunct(&density(d.clone()), &volume(v.clone()))
}

/// Quantity of motion from velocity and quantity of matter.
pub fn motion_from(v: &Fraction, m: &Fraction) -> Result<Quantity> {
    conjunct(&velocity(v.clone()), &matter(m.clone()))
}

pub fn square(x: &Fraction) -> Fraction {
    x * x
}

/// Step sums of `x²` over `k` bases.
pub fn parabola(k: usize) -> Result<Quadrature> {
    quadrature(&sample(square, k)?)
}

/// `x²` against `scale·x²` column by column.
pub fn scaled_parabolas(k: usize, scale: &Fraction) -> Result<FigureRatio> {
    figure_ratio(&sample(square, k)?, &sample(|x| scale * &square(x), k)?)
}

/// Pure states and the Gelfand images of the canonical basis on
/// `orthant(n)` with the all-ones unit.
pub fn krein_table(n: usize) -> Result<(KreinSpace, Vec<Vec<f64>>)> {
    let s = ConeSpace::orthant(n)?;
    let k = KreinSpace::new(&s, &Vector::from_element(n, 1.0))?;
    let rows = k.canonical_basis().iter().map(|b| k.gelfand_map(b)).collect::<Result<Vec<_>>>()?;
    Ok((k, rows))
}
