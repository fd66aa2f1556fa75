//! Ordered vector spaces with an order unit: the Krein axioms, states, and
//! the commutative product of a lattice-ordered space.
//!
//! The reconstruction theorem assumes a norm-complete space; every space here
//! is finite dimensional, so completeness holds automatically and is not
//! checked.
//!
//! The product is only offered on Riesz (simplicial) cones. There the unit
//! splits as `u = Σ bᵢ` into minimal components, the `bᵢ` form a basis,
//! and `x·y` multiplies coordinates in that basis. On other cones the
//! product would not be unique, so it is refused.

use std::fmt;

use rand::Rng;
use crate::cone::{ConeSpace, ConeSpec};
use crate::error::{Error, Result};
use crate::face::{is_riesz, minimal_decomposition};
use crate::sampling;
use crate::{Matrix, Vector};

const MULT_TOL: f64 = 1e-9;

/// A cone together with an order unit.
#[derive(Clone, Debug)]
pub struct KreinSpace {
    host: ConeSpace,
    unit: Vector,
    riesz: bool,
    /// Minimal components of the unit, `u = Σ bᵢ`.
    basis: Vec<Vector>,
    /// Rows are the dual basis: `coords[i]·bⱼ = δᵢⱼ` (Riesz only).
    coords: Option<Matrix>,
}

impl KreinSpace {
    pub fn new(host: &ConeSpace, unit: &Vector) -> Result<Self> {
        host.check_dim(unit)?;
        if !host.is_order_unit(unit)? {
            return Err(Error::NotAnOrderUnit);
        }
        let (riesz, _) = is_riesz(host);
        let basis: Vec<Vector> = minimal_decomposition(host, unit)?.into_iter().map(|(l, a)| a * l).collect();
        let coords = if riesz {
            let b = Matrix::from_columns(&basis);
            Some(b.try_inverse().ok_or_else(|| Error::Numerical("canonical basis is singular".into()))?)
        } else {
            None
        };
        Ok(Self { host: host.clone(), unit: unit.clone(), riesz, basis, coords })
    }

    /// The space with its default order unit.
    pub fn with_default_unit(host: &ConeSpace) -> Result<Self> {
        Self::new(host, &host.default_order_unit())
    }

    pub fn host(&self) -> &ConeSpace {
        &self.host
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn is_riesz(&self) -> bool {
        self.riesz
    }

    pub fn canonical_basis(&self) -> &[Vector] {
        &self.basis
    }

    fn dual(&self) -> Result<&Matrix> {
        self.coords
            .as_ref()
            .ok_or_else(|| Error::Unsupported(format!("{} is not lattice ordered; the product is not unique", self.host.spec())))
    }

    /// Coordinates in the canonical basis.
    pub fn coordinates(&self, x: &Vector) -> Result<Vector> {
        self.host.check_dim(x)?;
        Ok(self.dual()? * x)
    }

    pub fn product(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        let (cx, cy) = (self.coordinates(x)?, self.coordinates(y)?);
        Ok(Matrix::from_columns(&self.basis) * cx.component_mul(&cy))
    }

    pub fn norm(&self, x: &Vector) -> Result<f64> {
        self.host.order_unit_norm(x, &self.unit)
    }

    /// Extreme points of `{f ≥ 0 on the cone, f(u) = 1}`.
    ///
    /// Exact for Riesz cones (the dual basis) and for other polyhedral cones
    /// (the facet normals). For the remaining self-dual cones the states are
    /// `budget` sampled extreme rays, and the result is flagged partial.
    pub fn pure_states(&self, budget: usize, seed: u64) -> PureStates {
        if let Some(d) = &self.coords {
            let states = d.row_iter().map(|r| State { functional: r.transpose() }).collect();
            return PureStates { states, exact: true };
        }
        let normalize = |f: &Vector| State { functional: f / f.dot(&self.unit) };
        if let Some(p) = self.host.polyhedral_data() {
            return PureStates { states: p.facets.iter().map(normalize).collect(), exact: true };
        }
        let mut rng = sampling::rng(seed);
        let states = (0..budget).map(|_| normalize(&self.host.sample_extreme_ray(&mut rng))).collect();
        PureStates { states, exact: false }
    }

    /// Whether `f(xy) = f(x)f(y)` on all pairs of basis vectors; on failure
    /// returns the first violating pair.
    pub fn multiplicative_characterization(&self, f: &State) -> Result<MultiplicativeCheck> {
        let b = &self.basis;
        for i in 0..b.len() {
            for j in i..b.len() {
                let lhs = f.eval(&self.product(&b[i], &b[j])?);
                let rhs = f.eval(&b[i]) * f.eval(&b[j]);
                if (lhs - rhs).abs() > MULT_TOL * (1.0 + lhs.abs().max(rhs.abs())) {
                    let witness = MultiplicativeWitness { x: b[i].clone(), y: b[j].clone(), f_xy: lhs, fx_fy: rhs };
                    return Ok(MultiplicativeCheck { holds: false, witness: Some(witness) });
                }
            }
        }
        Ok(MultiplicativeCheck { holds: true, witness: None })
    }

    /// `φ_x(f) = f(x)` over the pure states.
    pub fn gelfand_map(&self, x: &Vector) -> Result<Vec<f64>> {
        self.host.check_dim(x)?;
        Ok(self.dual()?.row_iter().map(|r| r.transpose().dot(x)).collect())
    }

    /// `sup { |f(x)| : −u ≤ x ≤ u }`, which is `Σ |f(bᵢ)|` on a Riesz
    /// space and `f(u)` for any positive functional.
    pub fn functional_norm(&self, f: &State) -> Result<f64> {
        if self.riesz {
            return Ok(self.basis.iter().map(|b| f.eval(b).abs()).sum());
        }
        if self.is_positive(f) {
            return Ok(f.eval(&self.unit));
        }
        Err(Error::Unsupported("norm of a non-positive functional on a non-lattice space".into()))
    }

    /// `f ≥ 0` on the cone.
    pub fn is_positive(&self, f: &State) -> bool {
        let scale = f.functional.norm();
        let ok = |v: &Vector| f.eval(v) >= -MULT_TOL * scale * v.norm();
        if self.riesz {
            return self.basis.iter().all(ok);
        }
        match self.host.polyhedral_data() {
            Some(p) => p.rays.iter().all(ok),
            // Self-dual: f is positive iff it lies in the cone.
            None => self.host.contains(&f.functional),
        }
    }
}

/// A linear functional `x ↦ ⟨functional, x⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct State {
    pub functional: Vector,
}

impl State {
    pub fn eval(&self, x: &Vector) -> f64 {
        self.functional.dot(x)
    }

    /// Convex combination `Σ wᵢ fᵢ`.
    pub fn mixture(states: &[State], weights: &[f64]) -> Result<State> {
        if states.is_empty() || states.len() != weights.len() {
            return Err(Error::InvalidArgument("need one weight per state".into()));
        }
        let functional = states.iter().zip(weights).fold(Vector::zeros(states[0].functional.len()), |acc, (s, w)| acc + &s.functional * *w);
        Ok(State { functional })
    }
}

#[derive(Clone, Debug)]
pub struct PureStates {
    pub states: Vec<State>,
    /// False when the states are a sample rather than the full set.
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiplicativeWitness {
    pub x: Vector,
    pub y: Vector,
    pub f_xy: f64,
    pub fx_fy: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiplicativeCheck {
    pub holds: bool,
    pub witness: Option<MultiplicativeWitness>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum KreinAxiom {
    /// Closed under addition and positive scaling.
    I,
    /// Pointed: `x ≥ 0` and `−x ≥ 0` only for `x = 0`.
    II,
    /// Every `x` has a least positive part `x₊ = sup(x, 0)`.
    III,
    /// `(λx)₊ = λx₊` for `λ > 0`.
    IV,
    /// The order-unit norm vanishes only at zero.
    V,
}

#[derive(Clone, Debug, PartialEq)]
pub enum AxiomStatus {
    Pass,
    Fail { witness: Vec<Vector> },
    Unknown,
}

#[derive(Clone, Debug)]
pub struct AxiomEntry {
    pub axiom: KreinAxiom,
    pub status: AxiomStatus,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub entries: Vec<AxiomEntry>,
    /// Set when the positive-part test and the lattice (Riesz) test disagree.
    pub divergence: Option<String>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.status == AxiomStatus::Pass)
    }

    pub fn get(&self, axiom: KreinAxiom) -> &AxiomEntry {
        self.entries.iter().find(|e| e.axiom == axiom).expect("every axiom is reported")
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            let s = match &e.status {
                AxiomStatus::Pass => "pass",
                AxiomStatus::Fail { .. } => "FAIL",
                AxiomStatus::Unknown => "unknown",
            };
            writeln!(f, "axiom {:?}: {s} ({})", e.axiom, e.detail)?;
        }
        Ok(())
    }
}

/// Candidate positive part: ray coordinates clipped at zero on simplicial
/// polyhedral cones, otherwise the Moreau part.
fn positive_part(space: &ConeSpace, x: &Vector) -> Result<Vector> {
    if let Some(p) = space.polyhedral_data() {
        if let Some(c) = p.ray_coordinates(x) {
            return Ok(Matrix::from_columns(&p.rays) * c.map(|v| v.max(0.0)));
        }
    }
    Ok(space.jordan_decompose(x)?.0)
}

/// `inf { c : y + c·u ∈ K }`.
fn unit_shift(space: &ConeSpace, y: &Vector, u: &Vector) -> Result<f64> {
    let n = space.order_unit_norm(y, u)?;
    let inside = |c: f64| space.margin(&(y + u * c)) >= 0.0;
    let (mut lo, mut hi) = (-n, n * (1.0 + 1e-12) + f64::MIN_POSITIVE);
    if inside(lo) {
        return Ok(lo);
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if inside(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Tests the axioms on `samples` random points plus the coordinate vectors.
///
/// Axiom III is probed by comparing the candidate positive part `x₊` with
/// upper bounds `p` of `{0, x}` pushed onto the boundary of the set of
/// upper bounds; a least upper bound must lie below every such `p`.
pub fn check_axioms(space: &ConeSpace, u: &Vector, samples: usize, seed: u64) -> Result<AxiomReport> {
    space.check_dim(u)?;
    let n = space.dim();
    let mut rng = sampling::rng(seed);
    let mut entries = Vec::new();
    let in_cone = |v: &Vector, scale: f64| space.margin(v) >= -1e-9 * scale.max(1.0);

    let points: Vec<Vector> = (0..samples).map(|_| space.sample_point(&mut rng)).collect();

    let mut fail = None;
    for w in points.windows(2) {
        let s = &w[0] + &w[1] * 2.5;
        if !in_cone(&s, s.norm()) {
            fail = Some(vec![w[0].clone(), w[1].clone()]);
            break;
        }
    }
    entries.push(entry(KreinAxiom::I, fail, format!("{} sums", points.len().saturating_sub(1))));

    let fail = points.iter().find(|x| x.norm() > 1e-6 && space.margin(&-*x) > -1e-9 * x.norm()).map(|x| vec![x.clone()]);
    entries.push(entry(KreinAxiom::II, fail, format!("{} points", points.len())));

    let mut candidates: Vec<Vector> = (0..n).flat_map(|i| {
        let e = crate::linalg::basis_vector(n, i);
        [e.clone(), -e]
    }).collect();
    candidates.extend((0..samples).map(|_| sampling::gaussian_vector(&mut rng, n)));
    let mut fail = None;
    let mut probes = 0usize;
    'outer: for x in &candidates {
        let plus = match positive_part(space, x) {
            Ok(p) => p,
            Err(e) => {
                entries.push(AxiomEntry { axiom: KreinAxiom::III, status: AxiomStatus::Unknown, detail: e.to_string() });
                fail = None;
                probes = usize::MAX;
                break 'outer;
            }
        };
        let scale = x.norm();
        if !in_cone(&plus, scale) || !in_cone(&(&plus - x), scale) {
            fail = Some(vec![x.clone(), plus]);
            break;
        }
        for _ in 0..8 {
            let w = sampling::gaussian_vector(&mut rng, n) * scale;
            let y1 = &plus + &w;
            let y2 = &plus - x + &w;
            let c = unit_shift(space, &y1, u)?.max(unit_shift(space, &y2, u)?);
            let p = y1 + u * c;
            probes += 1;
            if !in_cone(&(&p - &plus), scale + p.norm()) {
                fail = Some(vec![x.clone(), p]);
                break 'outer;
            }
        }
    }
    if probes != usize::MAX {
        entries.push(entry(KreinAxiom::III, fail, format!("{probes} upper bounds probed")));
    }

    let mut fail = None;
    for x in candidates.iter().skip(2 * n).take(samples.min(64)) {
        let lambda = 0.5 + rng.random_range(0.0..4.0);
        match (positive_part(space, &(x * lambda)), positive_part(space, x)) {
            (Ok(a), Ok(b)) if (&a - &b * lambda).norm() > 1e-9 * lambda * x.norm().max(1.0) => {
                fail = Some(vec![x.clone()]);
                break;
            }
            _ => {}
        }
    }
    entries.push(entry(KreinAxiom::IV, fail, "positive parts scale".into()));

    let fail = if !space.is_order_unit(u)? {
        Some(vec![u.clone()])
    } else {
        let mut bad = None;
        for x in candidates.iter().chain(&points) {
            if x.norm() > 0.0 && space.order_unit_norm(x, u)? <= 0.0 {
                bad = Some(vec![x.clone()]);
                break;
            }
        }
        bad
    };
    entries.push(entry(KreinAxiom::V, fail, "order-unit norm positive off zero".into()));

    let riesz = is_riesz(space).0;
    let third_ok = entries.iter().any(|e| e.axiom == KreinAxiom::III && e.status == AxiomStatus::Pass);
    let divergence = (riesz != third_ok).then(|| {
        format!("positive-part test {} but the lattice test {}", if third_ok { "passes" } else { "fails" }, if riesz { "passes" } else { "fails" })
    });
    Ok(AxiomReport { entries, divergence })
}

fn entry(axiom: KreinAxiom, fail: Option<Vec<Vector>>, detail: String) -> AxiomEntry {
    let status = match fail {
        Some(witness) => AxiomStatus::Fail { witness },
        None => AxiomStatus::Pass,
    };
    AxiomEntry { axiom, status, detail }
}

/// Whether the space is of the kind that supports the product.
pub fn supports_product(space: &ConeSpace) -> bool {
    match space.spec() {
        ConeSpec::Polyhedral { .. } => space.polyhedral_data().is_some_and(|p| p.simplicial),
        _ => is_riesz(space).0,
    }
}
