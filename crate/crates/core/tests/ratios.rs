use eudoxus::derivation::selfadjoint_derivations;
use eudoxus::face::minimal_decomposition;
use eudoxus::ratio::classic::{classic_equal, classic_equal_two_class, ClassicRatio};
use eudoxus::ratio::refinement::{random_refinement_chain, refines, spectral_sum_operator};
use eudoxus::ratio::{archimedes_witness, ratio_equal, Ratio};
use eudoxus::{linalg, sampling, ConeSpace, Matrix, Vector};
use proptest::prelude::*;
use rand::Rng;

const MAX_DEN: u64 = 1_000_000;

fn kinds() -> Vec<ConeSpace> {
    vec![
        ConeSpace::orthant(3).unwrap(),
        ConeSpace::lorentz(4).unwrap(),
        ConeSpace::psd_real(3).unwrap(),
        ConeSpace::hermitian(2).unwrap(),
    ]
}

/// A pair sharing the Jordan frame of a random interior point.
fn framed_pair(space: &ConeSpace, rng: &mut sampling::SeededRng) -> (Vector, Vector) {
    let frame = minimal_decomposition(space, &space.sample_interior(rng)).unwrap();
    let mut a = Vector::zeros(space.dim());
    let mut ap = Vector::zeros(space.dim());
    for (_, part) in &frame {
        a += part * rng.random_range(0.5..2.0);
        ap += part * rng.random_range(0.1..3.0);
    }
    (ap, a)
}

#[test]
fn derivation_is_the_unique_one_sending_consequent_to_antecedent() {
    let mut rng = sampling::rng(41);
    for space in kinds() {
        let sa = selfadjoint_derivations(&space);
        for _ in 0..50 {
            let (ap, a) = framed_pair(&space, &mut rng);
            let delta = Ratio::new(&space, &ap, &a, MAX_DEN).unwrap().to_derivation();
            assert!((delta.apply(&a) - &ap).norm() < 1e-9 * ap.norm().max(1.0), "{}", space.spec());
            // Independent solve: least squares for Σ cᵢ δᵢ a = a′ over the
            // self-adjoint basis, which must reproduce δ.
            let images = Matrix::from_columns(&sa.iter().map(|d| d.apply(&a)).collect::<Vec<_>>());
            let c = images.clone().svd(true, true).solve(&ap, 1e-12).unwrap();
            let solved = sa.iter().zip(c.iter()).fold(Matrix::zeros(space.dim(), space.dim()), |acc, (d, &w)| acc + d.mat() * w);
            assert!((solved - delta.mat()).norm() < 1e-7, "{}", space.spec());
        }
    }
}

#[test]
fn orthant_multipliers_are_coordinate_quotients() {
    let mut rng = sampling::rng(42);
    let space = ConeSpace::orthant(5).unwrap();
    for _ in 0..200 {
        let a = space.sample_interior(&mut rng);
        let ap = space.sample_point(&mut rng);
        let mut got = Ratio::new(&space, &ap, &a, MAX_DEN).unwrap().lambdas();
        let mut want: Vec<f64> = ap.iter().zip(a.iter()).map(|(p, q)| p / q).collect();
        got.sort_by(f64::total_cmp);
        want.sort_by(f64::total_cmp);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-9 * w.max(1.0));
        }
    }
}

#[test]
fn equality_ignores_common_scaling_and_detects_change() {
    let mut rng = sampling::rng(43);
    for space in kinds() {
        for _ in 0..30 {
            let (ap, a) = framed_pair(&space, &mut rng);
            let r = Ratio::new(&space, &ap, &a, MAX_DEN).unwrap();
            let t = rng.random_range(0.2..5.0);
            let scaled = Ratio::new(&space, &(&ap * t), &(&a * t), MAX_DEN).unwrap();
            let eq = ratio_equal(&r, &scaled, MAX_DEN).unwrap();
            assert!(eq.equal && eq.variants_agree(), "{}", space.spec());
            let doubled = Ratio::new(&space, &(&ap * 2.0), &a, MAX_DEN).unwrap();
            assert!(!ratio_equal(&r, &doubled, MAX_DEN).unwrap().equal);
        }
    }
}

#[test]
fn equality_is_transitive() {
    let mut rng = sampling::rng(44);
    let space = ConeSpace::orthant(4).unwrap();
    for _ in 0..100 {
        let (ap, a) = framed_pair(&space, &mut rng);
        let r = Ratio::new(&space, &ap, &a, MAX_DEN).unwrap();
        let s = Ratio::new(&space, &(&ap * 3.0), &(&a * 3.0), MAX_DEN).unwrap();
        let t = Ratio::new(&space, &(&ap * 0.25), &(&a * 0.25), MAX_DEN).unwrap();
        assert!(ratio_equal(&r, &s, MAX_DEN).unwrap().equal);
        assert!(ratio_equal(&s, &t, MAX_DEN).unwrap().equal);
        assert!(ratio_equal(&r, &t, MAX_DEN).unwrap().equal);
    }
}

#[test]
fn round_trip_through_the_derivation() {
    let mut rng = sampling::rng(45);
    for space in kinds() {
        for _ in 0..30 {
            let (ap, a) = framed_pair(&space, &mut rng);
            let r = Ratio::new(&space, &ap, &a, MAX_DEN).unwrap();
            let back = Ratio::from_derivation(&space, &r.to_derivation(), MAX_DEN).unwrap();
            assert!(ratio_equal(&r, &back, MAX_DEN).unwrap().equal, "{}", space.spec());
        }
    }
}

#[test]
fn archimedes_witness_is_minimal_on_the_orthant() {
    let mut rng = sampling::rng(46);
    let space = ConeSpace::orthant(3).unwrap();
    for _ in 0..200 {
        let a = space.sample_interior(&mut rng);
        let b = space.sample_point(&mut rng) * 10.0;
        // Oracle: the least n with n·aᵢ > bᵢ in every coordinate.
        let want = b.iter().zip(a.iter()).map(|(y, x)| (y / x).floor() as u64 + 1).max().unwrap();
        assert_eq!(archimedes_witness(&space, &a, &b, 1_000_000).unwrap(), Some(want));
    }
}

proptest! {
    #[test]
    fn classic_variants_agree_with_cross_multiplication(p in 1i64..60, q in 1i64..60, r in 1i64..60, s in 1i64..60) {
        let x = ClassicRatio::ints(p, q).unwrap();
        let y = ClassicRatio::ints(r, s).unwrap();
        let want = p * s == r * q;
        prop_assert_eq!(classic_equal(&x, &y, 10_000).unwrap(), want);
        prop_assert_eq!(classic_equal_two_class(&x, &y, 10_000).unwrap(), want);
    }

    #[test]
    fn spectral_sums_decrease_along_refinements(seed in 0u64..500) {
        let mut rng = sampling::rng(seed);
        let space = ConeSpace::orthant(5).unwrap();
        let a = space.sample_interior(&mut rng);
        let ap = space.sample_point(&mut rng);
        let r = Ratio::new(&space, &ap, &a, MAX_DEN).unwrap();
        let chain = random_refinement_chain(5, &mut rng);
        for w in chain.windows(2) {
            prop_assert!(refines(&w[1], &w[0]));
            let gap = spectral_sum_operator(&r, &w[0]).unwrap() - spectral_sum_operator(&r, &w[1]).unwrap();
            prop_assert!(linalg::min_eigenvalue(&gap) >= -1e-9);
        }
        // The finest partition gives back the derivation of the ratio.
        let finest = spectral_sum_operator(&r, chain.last().unwrap()).unwrap();
        prop_assert!((finest - r.to_derivation().mat()).norm() < 1e-9);
    }
}
