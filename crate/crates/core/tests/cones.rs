use eudoxus::cone::vectorize::{smat, svec};
use eudoxus::sampling;
use eudoxus::{ConeSpace, Matrix, Vector};
use proptest::prelude::*;

fn kinds() -> Vec<ConeSpace> {
    vec![
        ConeSpace::orthant(4).unwrap(),
        ConeSpace::lorentz(4).unwrap(),
        ConeSpace::psd_real(3).unwrap(),
        ConeSpace::hermitian(2).unwrap(),
        // The Lorentz cone in the plane, written as a polyhedral cone.
        ConeSpace::polyhedral(2, vec![Vector::from_vec(vec![1.0, 1.0]), Vector::from_vec(vec![1.0, -1.0])]).unwrap(),
    ]
}

#[test]
fn jordan_parts_are_unique() {
    let mut rng = sampling::rng(11);
    for space in kinds() {
        for _ in 0..1000 {
            let x = sampling::gaussian_vector(&mut rng, space.dim()) * 3.0;
            let (p, m) = space.jordan_decompose(&x).unwrap();
            let (p2, m2) = space.jordan_decompose(&(&p - &m)).unwrap();
            assert!((&p - &p2).norm() <= 1e-9 * x.norm() && (&m - &m2).norm() <= 1e-9 * x.norm(), "{}", space.spec());
            // Any other split x = q − r with q, r in the cone has ⟨q, r⟩ > 0.
            let w = space.sample_point(&mut rng);
            let (q, r) = (&p + &w, &m + &w);
            assert!(space.contains(&q) && space.contains(&r));
            assert!(q.dot(&r) > 0.0);
        }
    }
}

#[test]
fn projection_is_nearest_point() {
    // First-order optimality: ⟨x − Px, y − Px⟩ ≤ 0 for every y in the cone.
    let mut rng = sampling::rng(12);
    for space in kinds() {
        for _ in 0..200 {
            let x = sampling::gaussian_vector(&mut rng, space.dim());
            let px = space.project(&x).unwrap();
            let residual = &x - &px;
            assert!(residual.dot(&px).abs() < 1e-9 * x.norm_squared().max(1.0));
            for _ in 0..10 {
                let y = space.sample_point(&mut rng) * 2.0;
                assert!(residual.dot(&(&y - &px)) <= 1e-9 * (1.0 + y.norm()) * x.norm(), "{}", space.spec());
            }
        }
    }
}

#[test]
fn psd_projection_clips_eigenvalues() {
    // Oracle: eigen-decompose directly and drop the negative part.
    let mut rng = sampling::rng(13);
    let space = ConeSpace::psd_real(3).unwrap();
    for _ in 0..100 {
        let g = sampling::gaussian_matrix(&mut rng, 3, 3);
        let m = &g + g.transpose();
        let eig = m.clone().symmetric_eigen();
        let clipped = &eig.eigenvectors * Matrix::from_diagonal(&eig.eigenvalues.map(|l| l.max(0.0))) * eig.eigenvectors.transpose();
        let got = smat(&space.project(&svec(&m)).unwrap(), 3);
        assert!((got - clipped).norm() < 1e-10);
    }
}

#[test]
fn self_dual_polyhedra_regenerate() {
    let v = |x: &[f64]| Vector::from_row_slice(x);
    let rotated = ConeSpace::polyhedral(3, vec![v(&[0.6, 0.8, 0.0]), v(&[-0.8, 0.6, 0.0]), v(&[0.0, 0.0, 2.0])]).unwrap();
    let poly = rotated.polyhedral_data().unwrap();
    assert!(poly.self_dual);
    // The dual description {y : ⟨y, g⟩ ≥ 0} has the generators as facets.
    let dual = ConeSpace::polyhedral(3, poly.facets.clone()).unwrap();
    for r in &poly.rays {
        assert!(dual.polyhedral_data().unwrap().rays.iter().any(|s| (r - s).norm() < 1e-9));
    }
    let wedge = ConeSpace::polyhedral(2, vec![v(&[1.0, 0.0]), v(&[1.0, 1.0])]).unwrap();
    assert!(!wedge.is_self_dual());
}

fn unit_for(space: &ConeSpace, seed: u64) -> Vector {
    let mut rng = sampling::rng(seed);
    space.sample_interior(&mut rng)
}

proptest! {
    #[test]
    fn order_unit_norm_is_a_norm(seed in 0u64..10_000, t in -5.0f64..5.0) {
        for space in kinds() {
            let u = unit_for(&space, seed);
            let mut rng = sampling::rng(seed + 1);
            let x = sampling::gaussian_vector(&mut rng, space.dim());
            let y = sampling::gaussian_vector(&mut rng, space.dim());
            let nx = space.order_unit_norm(&x, &u).unwrap();
            let ny = space.order_unit_norm(&y, &u).unwrap();
            let nxy = space.order_unit_norm(&(&x + &y), &u).unwrap();
            let ntx = space.order_unit_norm(&(&x * t), &u).unwrap();
            prop_assert!(nx > 0.0);
            prop_assert!(nxy <= (nx + ny) * (1.0 + 1e-9) + 1e-12);
            prop_assert!((ntx - t.abs() * nx).abs() <= 1e-8 * nx.max(1.0) * t.abs().max(1.0));
            prop_assert_eq!(space.order_unit_norm(&Vector::zeros(space.dim()), &u).unwrap(), 0.0);
            // −‖x‖u ≤ x ≤ ‖x‖u.
            let slack = &u * (nx * (1.0 + 1e-7));
            prop_assert!(space.leq(&x, &slack).unwrap() && space.leq(&-&slack, &x).unwrap());
        }
    }
}
