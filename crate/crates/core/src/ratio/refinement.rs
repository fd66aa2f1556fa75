//! Coarse decompositions of a ratio and their spectral sum operators.
//!
//! A block `B` of components has `a_B = Σ_{i∈B} aᵢ`, `a′_B = Σ_{i∈B} a′ᵢ`
//! and `λ_B = inf { m/n : n·a′_B < m·a_B in the relative interior of the
//! face of a_B }`, which is the largest `λᵢ` in the block. The spectral sum
//! operator of a partition is `Σ_B λ_B δ_{face(a_B)}`.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use super::generalized::{ComponentCut, Ratio};
use crate::error::{Error, Result};
use crate::exact_rational::{stern_brocot_bracket, Bracket, CutOracle};
use crate::face::face_of;
use crate::{Matrix, Vector};

/// A partition of the component indices of a ratio.
pub type Partition = Vec<Vec<usize>>;

/// Cut of a block: a fraction is above it iff it is above every member.
struct BlockCut(Vec<ComponentCut>);

impl CutOracle for BlockCut {
    fn strict_above(&self, m: &BigInt, n: &BigInt) -> bool {
        self.0.iter().all(|c| c.strict_above(m, n))
    }
    fn exact_hit(&self, m: &BigInt, n: &BigInt) -> bool {
        !self.strict_above(m, n) && self.0.iter().all(|c| c.strict_above(m, n) || c.exact_hit(m, n))
    }
}

/// `λ_B` with its bracket.
pub fn block_lambda(r: &Ratio, block: &[usize]) -> Result<(f64, Bracket)> {
    if block.is_empty() {
        return Err(Error::InvalidArgument("empty block".into()));
    }
    let comps = r.components();
    let mut cuts = Vec::with_capacity(block.len());
    let mut lambda = f64::NEG_INFINITY;
    for &i in block {
        let c = comps.get(i).ok_or_else(|| Error::InvalidArgument(format!("no component {i}")))?;
        lambda = lambda.max(c.lambda);
        cuts.push(ComponentCut { lambda: c.lambda, tol: r.tol() });
    }
    Ok((lambda, stern_brocot_bracket(&BlockCut(cuts), r.max_den())?))
}

/// `Σ_B λ_B δ_{face(a_B)}`.
pub fn spectral_sum_operator(r: &Ratio, partition: &Partition) -> Result<Matrix> {
    let n = r.host().dim();
    let mut total = Matrix::zeros(n, n);
    for block in partition {
        let (lambda, _) = block_lambda(r, block)?;
        let a_b = block.iter().fold(Vector::zeros(n), |acc, &i| acc + &r.components()[i].part);
        total += face_of(r.host(), &a_b)?.derivative().into_mat() * lambda;
    }
    Ok(total)
}

/// Every block of `fine` lies inside a block of `coarse`.
pub fn refines(fine: &Partition, coarse: &Partition) -> bool {
    fine.iter().all(|b| coarse.iter().any(|c| b.iter().all(|i| c.contains(i))))
}

/// A chain of partitions of `0..n` from the single block down to
/// singletons, splitting one random block in two at every step.
pub fn random_refinement_chain(n: usize, rng: &mut impl Rng) -> Vec<Partition> {
    let mut current: Partition = vec![(0..n).collect()];
    let mut chain = vec![current.clone()];
    while current.iter().any(|b| b.len() > 1) {
        let splittable: Vec<usize> = (0..current.len()).filter(|&i| current[i].len() > 1).collect();
        let pick = splittable[rng.random_range(0..splittable.len())];
        let mut block = current.remove(pick);
        block.shuffle(rng);
        let cut = rng.random_range(1..block.len());
        let mut right = block.split_off(cut);
        block.sort_unstable();
        right.sort_unstable();
        current.push(block);
        current.push(right);
        current.sort();
        chain.push(current.clone());
    }
    chain
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::ConeSpace;
    use crate::linalg;
    use crate::sampling;

    #[test]
    fn block_lambda_is_the_largest_member() {
        let s = ConeSpace::orthant(3).unwrap();
        let r = Ratio::new(&s, &Vector::from_vec(vec![1.0, 6.0, 1.5]), &Vector::from_vec(vec![1.0, 2.0, 3.0]), 1000).unwrap();
        let (l, b) = block_lambda(&r, &[0, 1, 2]).unwrap();
        assert_eq!(l, 3.0);
        assert!(b.exact && b.lo == crate::Fraction::from_int(3));
        let (l, b) = block_lambda(&r, &[0, 2]).unwrap();
        assert_eq!(l, 1.0);
        assert!(b.exact);
    }

    #[test]
    fn chains_refine_and_decrease() {
        let s = ConeSpace::orthant(5).unwrap();
        let mut rng = sampling::rng(4);
        for _ in 0..20 {
            let a = s.sample_interior(&mut rng);
            let ap = s.sample_point(&mut rng);
            let r = Ratio::new(&s, &ap, &a, 1_000_000).unwrap();
            let chain = random_refinement_chain(5, &mut rng);
            assert_eq!(chain.last().unwrap().len(), 5);
            for w in chain.windows(2) {
                assert!(refines(&w[1], &w[0]));
                let diff = spectral_sum_operator(&r, &w[0]).unwrap() - spectral_sum_operator(&r, &w[1]).unwrap();
                assert!(linalg::min_eigenvalue(&diff) >= -1e-12);
            }
            let finest = spectral_sum_operator(&r, chain.last().unwrap()).unwrap();
            assert!((finest - r.to_derivation().mat()).norm() < 1e-12);
        }
    }
}
