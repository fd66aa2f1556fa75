//! Ratios: the classical theory on a ray, generalized ratios over self-dual
//! cones and their derivations, refinement of decompositions, and
//! quadrature by step figures.

pub mod classic;
pub mod generalized;
pub mod quadrature;
pub mod refinement;

pub use generalized::{
    add, archimedes_check, archimedes_witness, compose, jordan_compose, ratio_equal, ratio_from_pair, ComponentCut, Ratio,
    RatioComponent, RatioEquality, RatioOrOperator,
};
