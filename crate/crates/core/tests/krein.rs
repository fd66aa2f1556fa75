use eudoxus::krein::{check_axioms, supports_product, AxiomStatus, KreinAxiom, KreinSpace, State};
use eudoxus::ratio::Ratio;
use eudoxus::{sampling, ConeSpace, Matrix, Vector};
use proptest::prelude::*;

fn skewed() -> ConeSpace {
    let v = |x: &[f64]| Vector::from_row_slice(x);
    ConeSpace::polyhedral(3, vec![v(&[1.0, 0.0, 0.0]), v(&[1.0, 1.0, 0.0]), v(&[1.0, 2.0, 3.0])]).unwrap()
}

fn riesz_spaces(seed: u64) -> Vec<KreinSpace> {
    let mut rng = sampling::rng(seed);
    [ConeSpace::orthant(4).unwrap(), ConeSpace::lorentz(2).unwrap(), skewed()]
        .iter()
        .map(|c| KreinSpace::new(c, &c.sample_interior(&mut rng)).unwrap())
        .collect()
}

#[test]
fn gelfand_map_is_an_isometric_algebra_isomorphism() {
    let mut rng = sampling::rng(61);
    for k in riesz_spaces(60) {
        let n = k.host().dim();
        let states = k.pure_states(0, 0);
        assert!(states.exact);
        assert_eq!(states.states.len(), n);
        // Linear bijection onto Rⁿ sending the unit to the constant function.
        let images = Matrix::from_columns(&(0..n).map(|i| Vector::from_vec(k.gelfand_map(&eudoxus::linalg::basis_vector(n, i)).unwrap())).collect::<Vec<_>>());
        assert!(images.determinant().abs() > 1e-9);
        assert!(k.gelfand_map(k.unit()).unwrap().iter().all(|v| (v - 1.0).abs() < 1e-9));
        for _ in 0..100 {
            let x = sampling::gaussian_vector(&mut rng, n);
            let y = sampling::gaussian_vector(&mut rng, n);
            let (gx, gy) = (k.gelfand_map(&x).unwrap(), k.gelfand_map(&y).unwrap());
            let gxy = k.gelfand_map(&k.product(&x, &y).unwrap()).unwrap();
            for i in 0..n {
                assert!((gxy[i] - gx[i] * gy[i]).abs() < 1e-9 * (1.0 + gx[i].abs() * gy[i].abs()));
            }
            let sup = gx.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            assert!((k.norm(&x).unwrap() - sup).abs() < 1e-8 * sup.max(1.0), "{}", k.host().spec());
        }
    }
}

#[test]
fn orthant_norm_matches_coordinate_quotients() {
    let mut rng = sampling::rng(62);
    let cone = ConeSpace::orthant(5).unwrap();
    for _ in 0..200 {
        let u = cone.sample_interior(&mut rng);
        let k = KreinSpace::new(&cone, &u).unwrap();
        let x = sampling::gaussian_vector(&mut rng, 5);
        let want = x.iter().zip(u.iter()).map(|(a, b)| (a / b).abs()).fold(0.0, f64::max);
        assert!((k.norm(&x).unwrap() - want).abs() < 1e-9 * want.max(1.0));
        // Products are coordinatewise after dividing by the unit.
        let y = sampling::gaussian_vector(&mut rng, 5);
        let want_xy = Vector::from_iterator(5, (0..5).map(|i| x[i] * y[i] / u[i]));
        assert!((k.product(&x, &y).unwrap() - want_xy).norm() < 1e-9 * (1.0 + x.norm() * y.norm()));
    }
}

#[test]
fn pure_states_are_multiplicative_and_mixtures_are_not() {
    for k in riesz_spaces(63) {
        let states = k.pure_states(0, 0).states;
        for s in &states {
            assert!(k.is_positive(s));
            assert!((s.eval(k.unit()) - 1.0).abs() < 1e-9);
            assert!(k.multiplicative_characterization(s).unwrap().holds);
            assert!((k.functional_norm(s).unwrap() - 1.0).abs() < 1e-9);
        }
        let mix = State::mixture(&states[..2], &[0.5, 0.5]).unwrap();
        assert!(k.is_positive(&mix));
        let check = k.multiplicative_characterization(&mix).unwrap();
        assert!(!check.holds);
        let w = check.witness.unwrap();
        assert!((w.f_xy - w.fx_fy).abs() > 1e-3);
    }
}

#[test]
fn pure_states_pick_out_minimal_faces() {
    // Each pure state is positive on exactly one minimal component of the
    // unit and vanishes on the others.
    for k in riesz_spaces(64) {
        let basis = k.canonical_basis();
        for s in k.pure_states(0, 0).states {
            let hits: Vec<f64> = basis.iter().map(|b| s.eval(b)).collect();
            assert_eq!(hits.iter().filter(|v| v.abs() > 1e-9).count(), 1);
            assert!(hits.iter().all(|v| *v > -1e-9));
        }
    }
}

#[test]
fn orthant_product_is_a_composition_of_diagonal_derivations() {
    // On the orthant, y ↦ x·y is the derivation of the ratio x:u, and the
    // multiplication operators compose like the product.
    let mut rng = sampling::rng(65);
    let cone = ConeSpace::orthant(4).unwrap();
    for _ in 0..50 {
        let u = cone.sample_interior(&mut rng);
        let k = KreinSpace::new(&cone, &u).unwrap();
        let (x, y) = (cone.sample_point(&mut rng), cone.sample_point(&mut rng));
        let mult = |z: &Vector| Matrix::from_columns(&(0..4).map(|i| k.product(z, &eudoxus::linalg::basis_vector(4, i)).unwrap()).collect::<Vec<_>>());
        let delta = Ratio::new(&cone, &x, &u, 1_000_000).unwrap().to_derivation();
        assert!((mult(&x) - delta.mat()).norm() < 1e-9);
        let xy = k.product(&x, &y).unwrap();
        assert!((mult(&x) * mult(&y) - mult(&xy)).norm() < 1e-9);
    }
}

#[test]
fn non_lattice_cones_refuse_the_product() {
    for cone in [ConeSpace::lorentz(3).unwrap(), ConeSpace::psd_real(2).unwrap()] {
        assert!(!supports_product(&cone));
        let k = KreinSpace::with_default_unit(&cone).unwrap();
        assert!(k.product(k.unit(), k.unit()).is_err());
        let sampled = k.pure_states(50, 1);
        assert!(!sampled.exact);
        assert!(sampled.states.iter().all(|s| k.is_positive(s) && (s.eval(k.unit()) - 1.0).abs() < 1e-9));
    }
}

#[test]
fn axiom_report_separates_lattices_from_the_ice_cream_cone() {
    let orthant = ConeSpace::orthant(3).unwrap();
    assert!(check_axioms(&orthant, &orthant.default_order_unit(), 200, 0).unwrap().all_pass());
    let lorentz = ConeSpace::lorentz(3).unwrap();
    let report = check_axioms(&lorentz, &lorentz.default_order_unit(), 200, 0).unwrap();
    assert!(!report.all_pass());
    assert!(matches!(report.get(KreinAxiom::III).status, AxiomStatus::Fail { .. }));
    // The Riesz test and the upper-bound probe agree here.
    assert!(report.divergence.is_none());
}

proptest! {
    #[test]
    fn product_is_commutative_associative_and_unital(seed in 0u64..1000) {
        let mut rng = sampling::rng(seed);
        for k in riesz_spaces(seed) {
            let n = k.host().dim();
            let (x, y, z) = (sampling::gaussian_vector(&mut rng, n), sampling::gaussian_vector(&mut rng, n), sampling::gaussian_vector(&mut rng, n));
            let p = |a: &Vector, b: &Vector| k.product(a, b).unwrap();
            let scale = 1.0 + x.norm() * y.norm() * z.norm();
            prop_assert!((p(&x, &y) - p(&y, &x)).norm() < 1e-9 * scale);
            prop_assert!((p(&p(&x, &y), &z) - p(&x, &p(&y, &z))).norm() < 1e-8 * scale);
            prop_assert!((p(&x, k.unit()) - &x).norm() < 1e-9 * (1.0 + x.norm()));
            // ‖xy‖ ≤ ‖x‖‖y‖ and ‖x²‖ = ‖x‖².
            let (nx, ny) = (k.norm(&x).unwrap(), k.norm(&y).unwrap());
            prop_assert!(k.norm(&p(&x, &y)).unwrap() <= nx * ny * (1.0 + 1e-9) + 1e-12);
            prop_assert!((k.norm(&p(&x, &x)).unwrap() - nx * nx).abs() < 1e-8 * nx * nx + 1e-12);
        }
    }
}
