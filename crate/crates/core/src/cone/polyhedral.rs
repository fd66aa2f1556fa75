//! Polyhedral cones: generator/halfspace conversion by the double
//! description method and metric projection by non-negative least squares.

use crate::error::{Error, Result};
use crate::linalg;
use crate::{Matrix, Vector};

const DD_TOL: f64 = 1e-9;

/// Both descriptions of a pointed, full-dimensional polyhedral cone.
#[derive(Clone, Debug)]
pub struct Polyhedral {
    /// Unit extreme rays (V-description, irredundant).
    pub rays: Vec<Vector>,
    /// Unit inward facet normals (H-description, irredundant).
    pub facets: Vec<Vector>,
    pub self_dual: bool,
    pub simplicial: bool,
}

impl Polyhedral {
    pub fn from_generators(dim: usize, generators: &[Vector]) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidCone("polyhedral cone needs generators".into()));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: g.len() });
            }
            if !g.iter().all(|x| x.is_finite()) || g.norm() == 0.0 {
                return Err(Error::InvalidCone(format!("generator {} is zero or non-finite", i + 1)));
            }
        }
        let units: Vec<Vector> = generators.iter().map(|g| g / g.norm()).collect();
        if linalg::rank(&units, dim) < dim {
            return Err(Error::InvalidCone("generators are dependent: they do not span the space, so the cone has empty interior".into()));
        }
        let facets = extreme_rays(&units, dim)?;
        if linalg::rank(&facets, dim) < dim {
            return Err(Error::InvalidCone("cone contains a line (not pointed)".into()));
        }
        let rays = extreme_rays(&facets, dim)?;
        let self_dual = rays.len() == facets.len()
            && rays.iter().all(|r| facets.iter().any(|f| (r - f).norm() < 1e-7));
        let simplicial = rays.len() == dim;
        Ok(Self { rays, facets, self_dual, simplicial })
    }

    pub fn margin(&self, x: &Vector) -> f64 {
        self.facets.iter().map(|f| f.dot(x)).fold(f64::INFINITY, f64::min)
    }

    /// Nearest point of the cone to `x`.
    pub fn project(&self, x: &Vector) -> Vector {
        let g = Matrix::from_columns(&self.rays);
        let lambda = nnls(&g, x);
        &g * lambda
    }

    /// Coordinates of `x` in the extreme-ray basis (simplicial cones only).
    pub fn ray_coordinates(&self, x: &Vector) -> Option<Vector> {
        if !self.simplicial {
            return None;
        }
        Matrix::from_columns(&self.rays).lu().solve(x)
    }
}

/// Extreme rays of `{x : ⟨a, x⟩ >= 0 for all a in constraints}`; the
/// constraints must span the space.
pub fn extreme_rays(constraints: &[Vector], dim: usize) -> Result<Vec<Vector>> {
    let rows: Vec<Vector> = dedup_units(constraints.iter().filter_map(linalg::normalized));
    let m = rows.len();

    // Greedy choice of `dim` independent constraints for the initial simplex.
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..m {
        let mut trial: Vec<Vector> = chosen.iter().map(|&c| rows[c].clone()).collect();
        trial.push(rows[i].clone());
        if linalg::rank(&trial, dim) == trial.len() {
            chosen.push(i);
            if chosen.len() == dim {
                break;
            }
        }
    }
    if chosen.len() < dim {
        return Err(Error::InvalidCone("constraints do not span the space".into()));
    }
    let a0 = Matrix::from_rows(&chosen.iter().map(|&c| rows[c].transpose()).collect::<Vec<_>>());
    let inv = a0.try_inverse().ok_or_else(|| Error::Numerical("singular initial simplex".into()))?;

    struct Ray {
        v: Vector,
        zero: Vec<bool>,
    }
    let mut rays: Vec<Ray> = (0..dim)
        .map(|j| {
            let v = inv.column(j).normalize();
            let zero = (0..m).map(|i| chosen.contains(&i) && chosen[j] != i).collect();
            Ray { v, zero }
        })
        .collect();

    let mut processed: Vec<usize> = chosen.clone();
    for c in 0..m {
        if chosen.contains(&c) {
            continue;
        }
        let a = &rows[c];
        let vals: Vec<f64> = rays.iter().map(|r| a.dot(&r.v)).collect();
        let (mut plus, mut zero, mut minus) = (Vec::new(), Vec::new(), Vec::new());
        for (i, &s) in vals.iter().enumerate() {
            if s > DD_TOL {
                plus.push(i);
            } else if s < -DD_TOL {
                minus.push(i);
            } else {
                zero.push(i);
            }
        }
        let mut next: Vec<Ray> = Vec::new();
        for &p in &plus {
            for &n in &minus {
                let common: Vec<usize> =
                    processed.iter().copied().filter(|&i| rays[p].zero[i] && rays[n].zero[i]).collect();
                if common.len() + 2 < dim {
                    continue;
                }
                let active: Vec<Vector> = common.iter().map(|&i| rows[i].clone()).collect();
                if linalg::rank(&active, dim) != dim - 2 {
                    continue;
                }
                let v = (&rays[n].v * vals[p] - &rays[p].v * vals[n]).normalize();
                let mut z: Vec<bool> = (0..m).map(|i| rays[p].zero[i] && rays[n].zero[i]).collect();
                z[c] = true;
                next.push(Ray { v, zero: z });
            }
        }
        let old = std::mem::take(&mut rays);
        for (i, mut r) in old.into_iter().enumerate() {
            if zero.contains(&i) {
                r.zero[c] = true;
                rays.push(r);
            } else if plus.contains(&i) {
                rays.push(r);
            }
        }
        rays.extend(next);
        processed.push(c);
    }
    Ok(dedup_units(rays.into_iter().map(|r| r.v)))
}

fn dedup_units(it: impl Iterator<Item = Vector>) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::new();
    for v in it {
        if !out.iter().any(|u| (u - &v).norm() < 1e-9) {
            out.push(v);
        }
    }
    out
}

/// Lawson–Hanson non-negative least squares: `argmin ‖Gλ − x‖, λ >= 0`.
pub fn nnls(g: &Matrix, x: &Vector) -> Vector {
    let n = g.ncols();
    let mut lambda = Vector::zeros(n);
    let mut passive = vec![false; n];
    let scale = g.norm().max(1.0) * x.norm().max(1.0);
    let tol = 1e-12 * scale;
    for _ in 0..(3 * n + 10) {
        let w = g.transpose() * (x - g * &lambda);
        let candidate = (0..n).filter(|&j| !passive[j]).max_by(|&i, &j| w[i].total_cmp(&w[j]));
        match candidate {
            Some(j) if w[j] > tol => passive[j] = true,
            _ => break,
        }
        for _ in 0..(3 * n + 10) {
            let idx: Vec<usize> = (0..n).filter(|&j| passive[j]).collect();
            let gp = Matrix::from_columns(&idx.iter().map(|&j| g.column(j).into_owned()).collect::<Vec<_>>());
            let sp = gp.svd(true, true).solve(x, 1e-14).expect("svd solve");
            if sp.iter().all(|&s| s > 0.0) {
                lambda.fill(0.0);
                for (k, &j) in idx.iter().enumerate() {
                    lambda[j] = sp[k];
                }
                break;
            }
            let mut alpha = f64::INFINITY;
            for (k, &j) in idx.iter().enumerate() {
                if sp[k] <= 0.0 {
                    alpha = alpha.min(lambda[j] / (lambda[j] - sp[k]));
                }
            }
            for (k, &j) in idx.iter().enumerate() {
                lambda[j] += alpha * (sp[k] - lambda[j]);
                if lambda[j] <= 1e-15 * scale {
                    lambda[j] = 0.0;
                    passive[j] = false;
                }
            }
        }
    }
    lambda
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    #[test]
    fn skewed_planar_cone_dual() {
        let p = Polyhedral::from_generators(2, &[v(&[1.0, 0.0]), v(&[1.0, 1.0])]).unwrap();
        assert!(!p.self_dual);
        assert!(p.simplicial);
        let expect = [v(&[0.0, 1.0]), v(&[1.0, -1.0]).normalize()];
        for e in &expect {
            assert!(p.facets.iter().any(|f| (f - e).norm() < 1e-12), "missing facet {e}");
        }
    }

    #[test]
    fn orthant_is_self_dual() {
        let gens: Vec<Vector> = (0..3).map(|i| linalg::basis_vector(3, i)).collect();
        let p = Polyhedral::from_generators(3, &gens).unwrap();
        assert!(p.self_dual && p.simplicial);
    }

    #[test]
    fn redundant_generators_are_dropped() {
        let gens = [v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0]), v(&[0.0, 0.0, 1.0]), v(&[1.0, 1.0, 1.0]), v(&[2.0, 0.0, 0.0])];
        let p = Polyhedral::from_generators(3, &gens).unwrap();
        assert_eq!(p.rays.len(), 3);
        assert_eq!(p.facets.len(), 3);
    }

    #[test]
    fn square_pyramid_has_four_facets() {
        let gens = [v(&[1.0, 1.0, 1.0]), v(&[1.0, -1.0, 1.0]), v(&[-1.0, 1.0, 1.0]), v(&[-1.0, -1.0, 1.0])];
        let p = Polyhedral::from_generators(3, &gens).unwrap();
        assert_eq!(p.rays.len(), 4);
        assert_eq!(p.facets.len(), 4);
        assert!(!p.simplicial);
        // Each facet is tight on exactly two rays.
        for f in &p.facets {
            assert_eq!(p.rays.iter().filter(|r| f.dot(r).abs() < 1e-12).count(), 2);
        }
    }

    #[test]
    fn rejects_lines_and_flat_cones() {
        assert!(Polyhedral::from_generators(2, &[v(&[1.0, 0.0]), v(&[-1.0, 0.0]), v(&[0.0, 1.0])]).is_err());
        assert!(Polyhedral::from_generators(3, &[v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0])]).is_err());
        assert!(Polyhedral::from_generators(2, &[v(&[0.0, 0.0]), v(&[0.0, 1.0])]).is_err());
    }

    #[test]
    fn nnls_projects_onto_orthant() {
        let g = Matrix::identity(3, 3);
        let lam = nnls(&g, &v(&[1.0, -2.0, 3.0]));
        assert!((lam - v(&[1.0, 0.0, 3.0])).norm() < 1e-12);
    }
}
