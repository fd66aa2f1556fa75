//! The acceptance battery: ten numbered criteria, each reduced to one
//! check. Every random choice is drawn from the suite seed.

use std::fmt::Display;
use std::time::{Duration, Instant};

use eudoxus::conjunct::{DimWord, Magnitude};
use eudoxus::derivation::{orientability, reconstruct_from_faces, selfadjoint_derivations, spectral_faces, derivation_basis, psd_multiplier};
use eudoxus::exact_rational::{stern_brocot_bracket, SqrtCut};
use eudoxus::face::{is_riesz, minimal_decomposition, riesz_witness_holds};
use eudoxus::krein::{KreinSpace, State};
use eudoxus::linalg;
use eudoxus::ratio::classic::{classic_equal, classic_equal_two_class, compositio_check, ex_aequali_check, ClassicRatio, Segment};
use eudoxus::ratio::refinement::{random_refinement_chain, spectral_sum_operator};
use eudoxus::ratio::{compose, ratio_equal};
use eudoxus::sampling::{self, SeededRng};
use eudoxus::{ConeSpace, Derivation, Fraction, Matrix, Orientability, Ratio, Vector};
use rand::Rng;

use crate::demos;
use crate::report::{Check, Status};

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    pub max_den: u64,
    pub tol: f64,
    pub samples: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { seed: 0, max_den: 1_000_000, tol: 1e-9, samples: 500 }
    }
}

/// Outcome of one criterion. `budget` is its stated time limit.
#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl CriterionResult {
    pub fn check(&self) -> Check {
        Check::new(format!("c{:02}_{}", self.id, self.name), self.status, self.detail.clone())
    }
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn text<E: Display>(e: E) -> String {
    e.to_string()
}

pub const CRITERIA: [(usize, &str, u64); 10] = [
    (1, "conjunct_anchors", 1),
    (2, "derivation_round_trips", 30),
    (3, "facial_spectral_theorem", 10),
    (4, "jordan_decomposition", 5),
    (5, "derivation_dimensions", 10),
    (6, "dichotomy_table", 10),
    (7, "eudoxus_kernel", 10),
    (8, "quadrature", 1),
    (9, "krein_reconstruction", 5),
    (10, "refinement_monotonicity", 5),
];

pub fn run_criterion(id: usize, opts: &SuiteOptions) -> CriterionResult {
    let (_, name, secs) = CRITERIA[id - 1];
    let start = Instant::now();
    let outcome = match id {
        1 => conjunct_anchors(),
        2 => derivation_round_trips(opts),
        3 => facial_spectral_theorem(opts),
        4 => jordan_decomposition(opts),
        5 => derivation_dimensions(opts),
        6 => dichotomy_table(opts),
        7 => eudoxus_kernel(opts),
        8 => quadrature_demos(),
        9 => krein_reconstruction(opts),
        10 => refinement_monotonicity(opts),
        _ => Err(format!("no criterion {id}")),
    };
    let (status, detail) = match outcome {
        Ok(d) => (Status::Pass, d),
        Err(d) => (Status::Fail, d),
    };
    CriterionResult { id, name, status, detail, elapsed: start.elapsed(), budget: Duration::from_secs(secs) }
}

pub fn run_all(opts: &SuiteOptions) -> Vec<CriterionResult> {
    (1..=CRITERIA.len()).map(|id| run_criterion(id, opts)).collect()
}

fn rng_for(opts: &SuiteOptions, id: u64) -> SeededRng {
    sampling::rng(opts.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(id))
}

fn conjunct_anchors() -> Outcome {
    let int = Fraction::from_int;
    let matter_word = DimWord::symmetric(&[("matter", 1)]);
    let motion_word = DimWord::symmetric(&[("matter", 1), ("velocity", 1)]);
    let cases = [
        (demos::matter_from(&int(2), &int(2)).map_err(text)?, 4, &matter_word),
        (demos::matter_from(&int(2), &int(3)).map_err(text)?, 6, &matter_word),
        (demos::motion_from(&int(2), &int(2)).map_err(text)?, 4, &motion_word),
    ];
    let mut shown = Vec::new();
    for (q, expected, word) in &cases {
        let exact = matches!(&q.magnitude, Magnitude::Exact(m) if *m == int(*expected));
        ensure(exact && q.word == **word, || format!("expected {expected} [{word}], got {q}"))?;
        shown.push(q.to_string());
    }
    Ok(shown.join("; "))
}

fn round_trip_cones() -> Result<Vec<ConeSpace>, String> {
    Ok(vec![
        ConeSpace::orthant(3).map_err(text)?,
        ConeSpace::lorentz(3).map_err(text)?,
        ConeSpace::psd_real(2).map_err(text)?,
        ConeSpace::hermitian(2).map_err(text)?,
    ])
}

/// A random combination of the self-adjoint derivation basis.
pub fn random_selfadjoint(basis: &[Derivation], rng: &mut SeededRng) -> Derivation {
    let n = basis[0].dim();
    let coeffs = sampling::gaussian_vector(rng, basis.len());
    Derivation::new(basis.iter().zip(coeffs.iter()).fold(Matrix::zeros(n, n), |acc, (b, &c)| acc + b.mat() * c))
}

/// A ratio `a′:a` whose terms share the Jordan frame of a random interior
/// point, with positive weights.
pub fn random_ratio(space: &ConeSpace, rng: &mut SeededRng, max_den: u64) -> eudoxus::Result<Ratio> {
    let frame = minimal_decomposition(space, &space.sample_interior(rng))?;
    let mut a = Vector::zeros(space.dim());
    let mut ap = Vector::zeros(space.dim());
    for (_, part) in &frame {
        a += part * rng.random_range(0.5..2.0);
        ap += part * rng.random_range(0.1..3.0);
    }
    Ratio::new(space, &ap, &a, max_den)
}

fn derivation_round_trips(opts: &SuiteOptions) -> Outcome {
    let mut rng = rng_for(opts, 2);
    let mut worst = 0f64;
    for space in round_trip_cones()? {
        let basis = selfadjoint_derivations(&space);
        for _ in 0..200 {
            let delta = random_selfadjoint(&basis, &mut rng);
            let back = Ratio::from_derivation(&space, &delta, opts.max_den).map_err(text)?.to_derivation();
            let err = linalg::op_norm(&(back.mat() - delta.mat()));
            worst = worst.max(err);
            ensure(err < opts.tol, || format!("{}: derivation round trip error {err:e}", space.spec()))?;
        }
        for _ in 0..200 {
            let r = random_ratio(&space, &mut rng, opts.max_den).map_err(text)?;
            let back = Ratio::from_derivation(&space, &r.to_derivation(), opts.max_den).map_err(text)?;
            let eq = ratio_equal(&back, &r, opts.max_den).map_err(text)?;
            ensure(eq.equal, || format!("{}: ratio {r} not equal to its round trip {back}", space.spec()))?;
        }
    }
    Ok(format!("4 cones x (200 derivations + 200 ratios), max operator error {worst:.1e}"))
}

fn facial_spectral_theorem(opts: &SuiteOptions) -> Outcome {
    // Same derivation set as the round-trip criterion.
    let mut rng = rng_for(opts, 2);
    let mut worst = 0f64;
    let mut count = 0;
    for space in round_trip_cones()? {
        let basis = selfadjoint_derivations(&space);
        for _ in 0..200 {
            let delta = random_selfadjoint(&basis, &mut rng);
            let family = spectral_faces(&space, &delta).map_err(text)?;
            let err = linalg::op_norm(&(reconstruct_from_faces(&family).mat() - delta.mat()));
            worst = worst.max(err);
            count += 1;
            ensure(err < opts.tol, || format!("{}: reconstruction error {err:e}", space.spec()))?;
        }
    }
    let psd = ConeSpace::psd_real(2).map_err(text)?;
    let delta = psd_multiplier(2, &Matrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0]));
    let family = spectral_faces(&psd, &delta).map_err(text)?;
    let err = linalg::op_norm(&(reconstruct_from_faces(&family).mat() - delta.mat()));
    ensure(err < opts.tol, || format!("psd diag(0,1): reconstruction error {err:e}"))?;
    ensure(family.entries().iter().any(|(l, f)| l.abs() < 1e-12 || f.is_zero()), || {
        format!("psd diag(0,1): no zero spectral face among {:?}", family.values())
    })?;
    Ok(format!("{} derivations + psd diag(0,1) (values {:?}), max error {worst:.1e}", count + 1, family.values()))
}

fn jordan_decomposition(opts: &SuiteOptions) -> Outcome {
    let mut rng = rng_for(opts, 4);
    let mut cones = round_trip_cones()?;
    // A rotated octant: self-dual but not coordinate-aligned.
    let (c, s) = (0.6, 0.8);
    let rot = vec![
        Vector::from_vec(vec![c, s, 0.0]),
        Vector::from_vec(vec![-s, c, 0.0]),
        Vector::from_vec(vec![0.0, 0.0, 1.0]),
    ];
    cones.push(ConeSpace::polyhedral(3, rot).map_err(text)?);
    for space in &cones {
        for _ in 0..1000 {
            let x = sampling::gaussian_vector(&mut rng, space.dim());
            let (p, m) = space.jordan_decompose(&x).map_err(text)?;
            let nx = x.norm();
            ensure((&p - &m - &x).norm() <= 1e-9 * nx, || format!("{}: x₊ − x₋ ≠ x for {x}", space.spec()))?;
            ensure(space.contains(&p) && space.contains(&m), || format!("{}: parts leave the cone for {x}", space.spec()))?;
            ensure(p.dot(&m).abs() < 1e-9 * nx * nx, || format!("{}: ⟨x₊, x₋⟩ = {:e}", space.spec(), p.dot(&m)))?;
        }
    }
    let l3 = ConeSpace::lorentz(3).map_err(text)?;
    let (p, m) = l3.jordan_decompose(&Vector::from_vec(vec![0.0, 1.0, 0.0])).map_err(text)?;
    let ep = Vector::from_vec(vec![0.5, 0.5, 0.0]);
    let em = Vector::from_vec(vec![0.5, -0.5, 0.0]);
    ensure((&p - &ep).norm() < 1e-12 && (&m - &em).norm() < 1e-12, || format!("lorentz(3) (0,1,0) gave {p} / {m}"))?;
    Ok(format!("{} cones x 1000 vectors; lorentz(3) closed form exact", cones.len()))
}

/// Dimension of `{M : ⟨y, M x⟩ = 0}` over sampled complementary pairs of
/// extreme rays, optionally with `M = Mᵀ`, by a direct SVD; also returns
/// the largest residual of `basis` in that system.
fn tangency_oracle(space: &ConeSpace, basis: &[Derivation], symmetric: bool, rng: &mut SeededRng) -> (usize, f64) {
    let n = space.dim();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for _ in 0..8 * n * n {
        let Some((x, y)) = space.sample_complementary_pair(rng) else { break };
        // ⟨y, M x⟩ = Σ y_i M_ij x_j, with M flattened column-major.
        rows.push((0..n * n).map(|k| y[k % n] * x[k / n]).collect());
    }
    if symmetric {
        for i in 0..n {
            for j in i + 1..n {
                let mut r = vec![0.0; n * n];
                r[i + j * n] = 1.0;
                r[j + i * n] = -1.0;
                rows.push(r);
            }
        }
    }
    let m = rows.len().max(n * n);
    let mut system = Matrix::zeros(m, n * n);
    for (i, r) in rows.iter().enumerate() {
        for (j, v) in r.iter().enumerate() {
            system[(i, j)] = *v;
        }
    }
    let sv = system.clone().svd(false, false).singular_values;
    let top = sv.max().max(1.0);
    let rank = sv.iter().filter(|&&s| s > 1e-9 * top).count();
    let residual = basis
        .iter()
        .map(|d| (&system * Vector::from_column_slice(d.mat().as_slice())).norm() / d.mat().norm())
        .fold(0.0, f64::max);
    (n * n - rank, residual)
}

fn derivation_dimensions(opts: &SuiteOptions) -> Outcome {
    let mut rng = rng_for(opts, 5);
    let cases = [
        (ConeSpace::orthant(3).map_err(text)?, Some(3), 3),
        (ConeSpace::psd_real(2).map_err(text)?, Some(4), 3),
        (ConeSpace::lorentz(3).map_err(text)?, Some(4), 3),
        (ConeSpace::hermitian(2).map_err(text)?, None, 4),
    ];
    let mut shown = Vec::new();
    for (space, der, sa) in &cases {
        let basis = derivation_basis(space);
        let sa_basis = selfadjoint_derivations(space);
        let (oracle_der, res_der) = tangency_oracle(space, &basis, false, &mut rng);
        let (oracle_sa, res_sa) = tangency_oracle(space, &sa_basis, true, &mut rng);
        if let Some(d) = der {
            ensure(basis.len() == *d, || format!("{}: Der dimension {} ≠ {d}", space.spec(), basis.len()))?;
        }
        ensure(sa_basis.len() == *sa, || format!("{}: self-adjoint dimension {} ≠ {sa}", space.spec(), sa_basis.len()))?;
        ensure(oracle_der == basis.len() && oracle_sa == sa_basis.len(), || {
            format!("{}: oracle dimensions {oracle_der}/{oracle_sa} vs {}/{}", space.spec(), basis.len(), sa_basis.len())
        })?;
        ensure(res_der < 1e-9 && res_sa < 1e-9, || format!("{}: basis violates tangency ({res_der:e}, {res_sa:e})", space.spec()))?;
        shown.push(format!("{} {}/{}", space.spec(), basis.len(), sa_basis.len()));
    }
    Ok(shown.join(", "))
}

fn dichotomy_table(opts: &SuiteOptions) -> Outcome {
    let mut rng = rng_for(opts, 6);
    let orthant = ConeSpace::orthant(3).map_err(text)?;
    ensure(is_riesz(&orthant).0, || "orthant(3) not Riesz".into())?;
    for _ in 0..20 {
        let r = random_ratio(&orthant, &mut rng, opts.max_den).map_err(text)?;
        let s = random_ratio(&orthant, &mut rng, opts.max_den).map_err(text)?;
        let rs = compose(&r, &s).map_err(text)?.operator();
        let sr = compose(&s, &r).map_err(text)?.operator();
        ensure((rs.mat() - sr.mat()).norm() < 1e-9 * (1.0 + rs.mat().norm()), || "orthant compose not commutative".into())?;
    }

    let psd = ConeSpace::psd_real(2).map_err(text)?;
    let l3 = ConeSpace::lorentz(3).map_err(text)?;
    let v = |x: &[f64]| Vector::from_row_slice(x);
    let pairs = [
        (&psd, psd.from_symmetric(&Matrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0])).map_err(text)?, psd.from_symmetric(&Matrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 1.0])).map_err(text)?),
        (&l3, v(&[2.0, 1.0, 0.0]), v(&[2.0, 0.0, 1.0])),
    ];
    let mut gaps = Vec::new();
    for (space, a, b) in &pairs {
        let (riesz, witness) = is_riesz(space);
        ensure(!riesz, || format!("{} reported Riesz", space.spec()))?;
        let w = witness.ok_or_else(|| format!("{}: no Riesz witness", space.spec()))?;
        ensure(riesz_witness_holds(space, &w), || format!("{}: stored Riesz witness does not hold", space.spec()))?;
        let unit = space.canonical_unit().expect("built-in cone");
        let r = Ratio::new(space, a, &unit, opts.max_den).map_err(text)?;
        let s = Ratio::new(space, b, &unit, opts.max_den).map_err(text)?;
        let gap = linalg::op_norm(&linalg::commutator(r.to_derivation().mat(), s.to_derivation().mat()));
        ensure(gap > 1e-3, || format!("{}: ratio pair commutes", space.spec()))?;
        gaps.push(format!("{} ‖[δr,δs]‖={gap:.3}", space.spec()));
    }

    let herm = ConeSpace::hermitian(2).map_err(text)?;
    for (space, want) in [(&orthant, true), (&herm, true), (&psd, false)] {
        let rep = orientability(space).map_err(text)?;
        let ok = match (&rep.verdict, want) {
            (Orientability::Orientable(_), true) => true,
            (Orientability::NotOrientable(why), false) => why.contains("odd"),
            _ => false,
        };
        ensure(ok, || format!("{}: orientability {:?}", space.spec(), rep.verdict))?;
    }
    Ok(format!("orthant Riesz+commutative; {}; orientable orthant, hermitian(2); psd_real(2) odd", gaps.join(", ")))
}

fn random_fraction(rng: &mut SeededRng) -> Fraction {
    Fraction::new(rng.random_range(1..100i64), rng.random_range(1..100i64)).expect("nonzero denominator")
}

fn eudoxus_kernel(opts: &SuiteOptions) -> Outcome {
    let b = stern_brocot_bracket(&SqrtCut::new(2).map_err(text)?, 1_000_000).map_err(text)?;
    let two = Fraction::from_int(2);
    ensure(b.width() < Fraction::new(1, 100_000_000_000i64).map_err(text)?, || format!("√2 bracket width {}", b.width()))?;
    ensure(&b.lo * &b.lo < two && two < &b.hi * &b.hi, || format!("√2 not in [{}, {}]", b.lo, b.hi))?;

    let mut rng = rng_for(opts, 7);
    let mut equal_pairs = 0;
    for i in 0..1000 {
        let (a, c) = (rng.random_range(1..60i64), rng.random_range(1..60i64));
        let r = ClassicRatio::ints(a, c).map_err(text)?;
        let s = if i % 2 == 0 {
            let k = rng.random_range(1..20i64);
            ClassicRatio::ints(k * a, k * c).map_err(text)?
        } else {
            ClassicRatio::ints(rng.random_range(1..60i64), rng.random_range(1..60i64)).map_err(text)?
        };
        let three = classic_equal(&r, &s, opts.max_den).map_err(text)?;
        let two = classic_equal_two_class(&r, &s, opts.max_den).map_err(text)?;
        ensure(three == two, || format!("equality variants disagree on {r} vs {s}"))?;
        ensure(i % 2 == 1 || three, || format!("{r} and {s} should be equal"))?;
        equal_pairs += usize::from(three);
    }

    let seg = Segment::exact;
    for _ in 0..200 {
        let (a, b, c, bp) = (random_fraction(&mut rng), random_fraction(&mut rng), random_fraction(&mut rng), random_fraction(&mut rng));
        let cp = &(&bp * &b) / &a;
        let ap = &(&bp * &b) / &c;
        let ok = ex_aequali_check(&seg(a), &seg(b), &seg(c), &seg(ap), &seg(bp), &seg(cp)).map_err(text)?;
        ensure(ok, || "ex aequali failed".into())?;
    }
    for _ in 0..200 {
        let (ap, a, b) = (random_fraction(&mut rng), random_fraction(&mut rng), random_fraction(&mut rng));
        let bp = &(&ap * &b) / &a;
        ensure(compositio_check(&seg(ap), &seg(a), &seg(bp), &seg(b)).map_err(text)?, || "compositio failed".into())?;
    }
    Ok(format!("√2 ∈ [{}, {}]; 1000 classic pairs agree ({equal_pairs} equal); 200 ex aequali, 200 compositio", b.lo, b.hi))
}

fn quadrature_demos() -> Outcome {
    let q = demos::parabola(1024).map_err(text)?;
    let third = Fraction::new(1, 3).map_err(text)?;
    ensure(q.brackets(&third), || format!("1/3 outside [{}, {}]", q.lower, q.upper))?;
    ensure(q.width() < Fraction::new(1, 512).map_err(text)?, || format!("gap {} not below 2⁻⁹", q.width()))?;
    let two = Fraction::from_int(2);
    let fr = demos::scaled_parabolas(1024, &two).map_err(text)?;
    ensure(fr.rho == two && fr.lower_ratio == two && fr.upper_ratio == two, || format!("area ratios {} / {}", fr.lower_ratio, fr.upper_ratio))?;
    Ok(format!("x², k=1024: gap {} < 2⁻⁹; column ratio 1:2 gives area ratio 1:2", q.width()))
}

fn krein_reconstruction(opts: &SuiteOptions) -> Outcome {
    let mut rng = rng_for(opts, 9);
    let mut worst = 0f64;
    for n in 1..=5 {
        let space = ConeSpace::orthant(n).map_err(text)?;
        let u = Vector::from_fn(n, |_, _| rng.random_range(0.5..2.0));
        let k = KreinSpace::new(&space, &u).map_err(text)?;
        let pure = k.pure_states(0, opts.seed);
        ensure(pure.exact && pure.states.len() == n, || format!("orthant({n}): {} pure states", pure.states.len()))?;
        for f in &pure.states {
            ensure(k.multiplicative_characterization(f).map_err(text)?.holds, || format!("orthant({n}): pure state not multiplicative"))?;
        }
        for i in 0..n.saturating_sub(1) {
            let mid = State::mixture(&pure.states[i..i + 2], &[0.5, 0.5]).map_err(text)?;
            let c = k.multiplicative_characterization(&mid).map_err(text)?;
            ensure(!c.holds && c.witness.is_some(), || format!("orthant({n}): midpoint passes as multiplicative"))?;
        }
        for _ in 0..opts.samples {
            let x = sampling::gaussian_vector(&mut rng, n);
            let y = sampling::gaussian_vector(&mut rng, n);
            let phi = k.gelfand_map(&x).map_err(text)?;
            let sup = phi.iter().fold(0f64, |m, v| m.max(v.abs()));
            let norm = k.norm(&x).map_err(text)?;
            let err = (norm - sup).abs();
            worst = worst.max(err);
            ensure(err <= opts.tol * norm.max(1.0), || format!("orthant({n}): ‖x‖_u = {norm} but sup |φ_x| = {sup}"))?;
            let phi_y = k.gelfand_map(&y).map_err(text)?;
            let phi_xy = k.gelfand_map(&k.product(&x, &y).map_err(text)?).map_err(text)?;
            let mult = phi_xy.iter().zip(phi.iter().zip(&phi_y)).all(|(p, (a, b))| (p - a * b).abs() <= opts.tol * (1.0 + (a * b).abs()));
            ensure(mult, || format!("orthant({n}): Gelfand map not multiplicative"))?;
        }
    }
    Ok(format!("orthant(1..=5): pure states = n, midpoints refuted, {} samples per n, max isometry error {worst:.1e}", opts.samples))
}

fn refinement_monotonicity(opts: &SuiteOptions) -> Outcome {
    let mut rng = rng_for(opts, 10);
    let space = ConeSpace::orthant(6).map_err(text)?;
    let mut steps = 0;
    for _ in 0..100 {
        let a = space.sample_interior(&mut rng);
        let ap = space.sample_point(&mut rng);
        let r = Ratio::new(&space, &ap, &a, opts.max_den).map_err(text)?;
        let chain = random_refinement_chain(6, &mut rng);
        let ops: Vec<Matrix> = chain.iter().map(|p| spectral_sum_operator(&r, p)).collect::<eudoxus::Result<_>>().map_err(text)?;
        for w in ops.windows(2) {
            let lo = linalg::min_eigenvalue(&(&w[0] - &w[1]));
            ensure(lo >= -opts.tol, || format!("spectral sum increased along a refinement (min eigenvalue {lo:e})"))?;
            steps += 1;
        }
    }
    Ok(format!("100 chains on orthant(6), {steps} refinement steps, all decreasing"))
}
