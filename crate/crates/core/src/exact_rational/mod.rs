//! Exact fractions and arithmetic representation of Eudoxus cuts.
//!
//! A ratio `a':a` classifies every fraction `m/n` into class I
//! (`n·a' > m·a`), class II (`n·a' = m·a`) or class III (`n·a' < m·a`).
//! [`CutOracle`] abstracts that classification; [`stern_brocot_bracket`]
//! locates the cut between two Stern–Brocot neighbours.

mod cut;
mod fraction;

pub use cut::{
    classify_fraction, farey_successor, stern_brocot_bracket, Bracket, CutOracle, FractionClass,
    RationalCut, RealCut, SqrtCut,
};
pub use fraction::Fraction;
