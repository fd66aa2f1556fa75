//! Argument parsing and dispatch.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use eudoxus::derivation::{derivation_basis, is_derivation, orientability, reconstruct_from_faces, selfadjoint_derivations, spectral_faces, DerivationCheck};
use eudoxus::face::{is_facially_homogeneous, is_riesz, HomogeneityVerdict};
use eudoxus::linalg;
use eudoxus::ratio::{add, compose, ratio_equal, RatioOrOperator};
use eudoxus::{ConeSpace, Derivation, Fraction, Matrix, Orientability, Ratio};

use crate::demos;
use crate::report::{Check, Report, Status};
use crate::spec_file::{parse_matrix, parse_numbers, resolve_cone};
use crate::suite::{run_all, SuiteOptions};

#[derive(Debug, Parser)]
#[command(name = "eudoxus", version, about = "Ratios over self-dual cones")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Global {
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "max-den", global = true, default_value_t = 1_000_000)]
    pub max_den: u64,
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 500)]
    pub samples: usize,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Structural properties of a cone (file path or `kind:n`).
    Analyze { cone: String },
    /// Build, compare, compose and add ratios.
    #[command(subcommand)]
    Ratio(RatioCmd),
    /// Spectral faces and round trips of a derivation.
    #[command(subcommand)]
    Derivation(DerivationCmd),
    /// Worked examples: quadrature, conjunct products, Krein spaces.
    #[command(subcommand)]
    Demo(DemoCmd),
    /// The acceptance checks.
    #[command(subcommand)]
    Suite(SuiteCmd),
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[arg(long)]
    pub cone: String,
    /// Antecedent of the first ratio, comma separated.
    #[arg(long)]
    pub a1: String,
    /// Consequent of the first ratio.
    #[arg(long)]
    pub c1: String,
    #[arg(long)]
    pub a2: String,
    #[arg(long)]
    pub c2: String,
}

#[derive(Debug, Subcommand)]
pub enum RatioCmd {
    /// Build `antecedent : consequent` and show its multipliers and derivation.
    Make {
        #[arg(long)]
        cone: String,
        #[arg(long)]
        antecedent: String,
        #[arg(long)]
        consequent: String,
    },
    /// Whether two ratios are equal face by face.
    Eq(PairArgs),
    /// Product of two ratios, or their Jordan product when they do not commute.
    Compose(PairArgs),
    /// Sum of two ratios through their derivations.
    Add(PairArgs),
}

#[derive(Debug, Subcommand)]
pub enum DerivationCmd {
    /// Spectral faces of a self-adjoint matrix (rows separated by `;`).
    Spectrum {
        #[arg(long)]
        cone: String,
        #[arg(long)]
        matrix: String,
    },
    /// Derivation → ratio → derivation and faces → derivation.
    Roundtrip {
        #[arg(long)]
        cone: String,
        #[arg(long)]
        matrix: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum DemoCmd {
    /// Step-figure brackets for the area under x² and a two-figure ratio.
    Quadrature {
        #[arg(long, default_value_t = 1024)]
        k: usize,
    },
    /// Density times volume, optionally velocity times matter.
    Conjunct {
        #[arg(long, default_value = "2")]
        density: String,
        #[arg(long, default_value = "3")]
        volume: String,
        #[arg(long)]
        velocity: Option<String>,
        #[arg(long)]
        matter: Option<String>,
    },
    /// Pure states, products and the Gelfand map on orthant(n).
    Krein {
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum SuiteCmd {
    /// Every acceptance criterion.
    All,
}

/// Runs a command line; returns the rendered report and the exit code.
pub fn run_command<I, T>(argv: I) -> (String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (e.render().to_string(), code);
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let text = report.render();
            let code = report.exit_code();
            match &cli.global.out {
                Some(path) => match std::fs::write(path, &text) {
                    Ok(()) => (String::new(), code),
                    Err(e) => (format!("error: {}: {e}\n", path.display()), 2),
                },
                None => (text, code),
            }
        }
        Err(msg) => (format!("error: {msg}\n"), 2),
    }
}

fn execute(cli: &Cli) -> Result<Report, String> {
    let g = &cli.global;
    match &cli.command {
        Command::Analyze { cone } => analyze(g, cone),
        Command::Ratio(cmd) => ratio_cmd(g, cmd),
        Command::Derivation(cmd) => derivation_cmd(g, cmd),
        Command::Demo(cmd) => demo_cmd(g, cmd),
        Command::Suite(SuiteCmd::All) => Ok(suite_all(g)),
    }
}

fn vector(text: &str, space: &ConeSpace) -> Result<eudoxus::Vector, String> {
    let v = parse_numbers(text)?;
    space.check_dim(&v).map_err(|e| e.to_string())?;
    Ok(v)
}

fn show_matrix(report: &mut Report, m: &Matrix) {
    for row in m.row_iter() {
        report.say(format!("  [{}]", row.iter().map(|x| format!("{x:>10.6}")).collect::<Vec<_>>().join(" ")));
    }
}

fn analyze(g: &Global, cone: &str) -> Result<Report, String> {
    let space = resolve_cone(cone)?;
    let mut r = Report::new(format!("analyze {}", space.spec()), g.seed);
    r.say(format!("cone: {} (ambient dimension {})", space.spec(), space.dim()));

    let self_dual = space.is_self_dual();
    r.say(format!("self-dual: {self_dual}"));
    r.check(Check::pass("property.self_dual", self_dual.to_string()));

    let hom = is_facially_homogeneous(&space, g.samples, g.seed);
    let (status, detail) = match &hom {
        HomogeneityVerdict::Verified { faces_tested, exhaustive } => {
            (Status::Pass, format!("true ({faces_tested} faces, {})", if *exhaustive { "exhaustive" } else { "sampled" }))
        }
        HomogeneityVerdict::Refuted { t, .. } => (Status::Pass, format!("false (escaping orbit at t = {t})")),
        HomogeneityVerdict::Unknown(why) => (Status::Unknown, format!("undecided ({why})")),
    };
    r.say(format!("facially homogeneous: {detail}"));
    r.check(Check::new("property.facially_homogeneous", status, detail));

    let (riesz, witness) = is_riesz(&space);
    r.say(format!("Riesz: {riesz}"));
    let witness_ok = witness.as_ref().is_none_or(|w| eudoxus::face::riesz_witness_holds(&space, w));
    r.check(Check::expect("property.riesz", witness_ok, riesz.to_string()));

    let basis = derivation_basis(&space);
    let sa = selfadjoint_derivations(&space);
    r.say(format!("Der dimension: {} (self-adjoint {})", basis.len(), sa.len()));
    let check = DerivationCheck { seed: g.seed, ..DerivationCheck::default() };
    let all_verified = basis.iter().all(|d| is_derivation(&space, d.mat(), &check).is_ok_and(|v| v.is_verified()));
    r.check(Check::expect("property.der_dimension", all_verified, format!("{} (self-adjoint {})", basis.len(), sa.len())));

    match orientability(&space) {
        Ok(rep) => {
            let (status, text) = match &rep.verdict {
                Orientability::Orientable(why) => (Status::Pass, format!("Orientable ({why})")),
                Orientability::NotOrientable(why) => (Status::Pass, format!("NotOrientable ({why})")),
                Orientability::Unknown(why) => (Status::Unknown, format!("Unknown ({why})")),
            };
            r.say(format!("orientability: {text}; center {}, quotient {}", rep.center_dim, rep.quotient_dim));
            r.check(Check::new("property.orientability", status, text));
        }
        Err(e) => r.check(Check::expect("property.orientability", false, e.to_string())),
    }
    Ok(r)
}

fn describe_ratio(r: &mut Report, ratio: &Ratio) {
    r.say(format!("ratio: {ratio}"));
    for (i, c) in ratio.components().iter().enumerate() {
        let b = &c.bracket;
        let bracket = if b.exact { format!("= {}", b.lo) } else { format!("in ({}, {})", b.lo, b.hi) };
        r.say(format!("  component {i}: lambda = {:.12} {bracket}", c.lambda));
    }
    r.say("derivation:");
    show_matrix(r, ratio.to_derivation().mat());
}

fn pair(g: &Global, p: &PairArgs) -> Result<(ConeSpace, Ratio, Ratio), String> {
    let space = resolve_cone(&p.cone)?;
    let r = Ratio::new(&space, &vector(&p.a1, &space)?, &vector(&p.c1, &space)?, g.max_den).map_err(|e| e.to_string())?;
    let s = Ratio::new(&space, &vector(&p.a2, &space)?, &vector(&p.c2, &space)?, g.max_den).map_err(|e| e.to_string())?;
    Ok((space, r, s))
}

fn report_operation(r: &mut Report, name: &str, out: eudoxus::Result<RatioOrOperator>) {
    match out {
        Ok(RatioOrOperator::Ratio(t)) => {
            describe_ratio(r, &t);
            r.check(Check::pass(name, "ratio"));
        }
        Ok(RatioOrOperator::OperatorOnly(d)) => {
            r.say("no ratio: the result is only an operator (symmetrized product)");
            show_matrix(r, d.mat());
            r.check(Check::new(name, Status::Unknown, "operator only"));
        }
        Err(e) => r.check(Check::expect(name, false, e.to_string())),
    }
}

fn ratio_cmd(g: &Global, cmd: &RatioCmd) -> Result<Report, String> {
    match cmd {
        RatioCmd::Make { cone, antecedent, consequent } => {
            let space = resolve_cone(cone)?;
            let mut r = Report::new("ratio make", g.seed);
            match Ratio::new(&space, &vector(antecedent, &space)?, &vector(consequent, &space)?, g.max_den) {
                Ok(ratio) => {
                    describe_ratio(&mut r, &ratio);
                    let d = ratio.to_derivation();
                    let err = (d.apply(ratio.consequent()) - ratio.antecedent()).norm();
                    r.check(Check::expect("ratio.maps_consequent", err <= g.tol * ratio.antecedent().norm().max(1.0), format!("residual {err:.1e}")));
                }
                Err(e) => r.check(Check::expect("ratio.make", false, e.to_string())),
            }
            Ok(r)
        }
        RatioCmd::Eq(p) => {
            let (_, a, b) = pair(g, p)?;
            let mut r = Report::new("ratio eq", g.seed);
            match ratio_equal(&a, &b, g.max_den) {
                Ok(eq) => {
                    r.say(format!("equal: {}  (two-class form: {})", eq.equal, eq.equal_two_class));
                    r.check(Check::expect("ratio.eq.variants_agree", eq.variants_agree(), format!("equal={} two_class={}", eq.equal, eq.equal_two_class)));
                }
                Err(e) => {
                    r.say(format!("not comparable: {e}"));
                    r.check(Check::new("ratio.eq.variants_agree", Status::Unknown, e.to_string()));
                }
            }
            Ok(r)
        }
        RatioCmd::Compose(p) => {
            let (_, a, b) = pair(g, p)?;
            let mut r = Report::new("ratio compose", g.seed);
            report_operation(&mut r, "ratio.compose", compose(&a, &b));
            Ok(r)
        }
        RatioCmd::Add(p) => {
            let (_, a, b) = pair(g, p)?;
            let mut r = Report::new("ratio add", g.seed);
            report_operation(&mut r, "ratio.add", add(&a, &b));
            Ok(r)
        }
    }
}

fn derivation_cmd(g: &Global, cmd: &DerivationCmd) -> Result<Report, String> {
    let (cone, matrix, title) = match cmd {
        DerivationCmd::Spectrum { cone, matrix } => (cone, matrix, "derivation spectrum"),
        DerivationCmd::Roundtrip { cone, matrix } => (cone, matrix, "derivation roundtrip"),
    };
    let space = resolve_cone(cone)?;
    let m = parse_matrix(matrix)?;
    if m.nrows() != space.dim() {
        return Err(format!("matrix is {0}x{0}, cone dimension is {1}", m.nrows(), space.dim()));
    }
    let delta = Derivation::new(m);
    let mut r = Report::new(title, g.seed);
    let family = match spectral_faces(&space, &delta) {
        Ok(f) => f,
        Err(e) => {
            r.check(Check::expect("derivation.spectral_faces", false, e.to_string()));
            return Ok(r);
        }
    };
    for ((lambda, face), cum) in family.entries().iter().zip(family.cumulative()) {
        r.say(format!("lambda = {lambda:.12}: face dimension {}, cumulative dimension {}", face.dim(), cum.dim()));
    }
    let rec = reconstruct_from_faces(&family);
    let err = linalg::op_norm(&(rec.mat() - delta.mat()));
    r.check(Check::expect("derivation.reconstruct", err < g.tol, format!("error {err:.1e}")));
    if matches!(cmd, DerivationCmd::Roundtrip { .. }) {
        match Ratio::from_derivation(&space, &delta, g.max_den) {
            Ok(ratio) => {
                describe_ratio(&mut r, &ratio);
                let err = linalg::op_norm(&(ratio.to_derivation().mat() - delta.mat()));
                r.check(Check::expect("derivation.roundtrip", err < g.tol, format!("error {err:.1e}")));
            }
            Err(e) => r.check(Check::expect("derivation.roundtrip", false, e.to_string())),
        }
    }
    Ok(r)
}

fn fraction(text: &str) -> Result<Fraction, String> {
    text.parse::<Fraction>().map_err(|e| format!("{text}: {e}"))
}

fn demo_cmd(g: &Global, cmd: &DemoCmd) -> Result<Report, String> {
    match cmd {
        DemoCmd::Quadrature { k } => {
            let mut r = Report::new("demo quadrature", g.seed);
            let q = demos::parabola(*k).map_err(|e| e.to_string())?;
            let third = Fraction::new(1, 3).map_err(|e| e.to_string())?;
            r.say(format!("x^2 over {k} bases: lower {} upper {}", q.lower, q.upper));
            r.say(format!("width {} (~{:.3e}), ratio gap {:?}", q.width(), q.width().to_f64(), q.ratio_gap().map(|x| x.to_f64())));
            r.check(Check::expect("quadrature.brackets_third", q.brackets(&third), format!("[{:.9}, {:.9}]", q.lower.to_f64(), q.upper.to_f64())));
            let two = Fraction::from_int(2);
            let fr = demos::scaled_parabolas(*k, &two).map_err(|e| e.to_string())?;
            r.say(format!("column ratio {} gives area ratios {} / {}", fr.rho, fr.lower_ratio, fr.upper_ratio));
            r.check(Check::expect("quadrature.figure_ratio", fr.lower_ratio == two && fr.upper_ratio == two, format!("{} {}", fr.lower_ratio, fr.upper_ratio)));
            Ok(r)
        }
        DemoCmd::Conjunct { density, volume, velocity, matter } => {
            let mut r = Report::new("demo conjunct", g.seed);
            let m = demos::matter_from(&fraction(density)?, &fraction(volume)?).map_err(|e| e.to_string())?;
            r.say(m.to_string());
            r.check(Check::pass("conjunct.matter", m.to_string()));
            if let (Some(v), Some(q)) = (velocity, matter) {
                let motion = demos::motion_from(&fraction(v)?, &fraction(q)?).map_err(|e| e.to_string())?;
                r.say(motion.to_string());
                r.check(Check::pass("conjunct.motion", motion.to_string()));
            }
            Ok(r)
        }
        DemoCmd::Krein { n } => {
            let mut r = Report::new(format!("demo krein orthant({n})"), g.seed);
            let (k, rows) = demos::krein_table(*n).map_err(|e| e.to_string())?;
            let states = k.pure_states(0, g.seed).states;
            r.say("pure states:");
            for (i, f) in states.iter().enumerate() {
                let mult = k.multiplicative_characterization(f).map_err(|e| e.to_string())?.holds;
                r.say(format!("  f{i} = ({})  multiplicative: {mult}", f.functional.iter().map(|x| (x + 0.0).to_string()).collect::<Vec<_>>().join(", ")));
            }
            r.say("Gelfand map (rows: canonical basis, columns: pure states):");
            show_matrix(&mut r, &Matrix::from_fn(rows.len(), states.len(), |i, j| rows[i][j]));
            r.check(Check::expect("krein.pure_state_count", states.len() == *n, states.len().to_string()));
            Ok(r)
        }
    }
}

pub fn suite_all(g: &Global) -> Report {
    let opts = SuiteOptions { seed: g.seed, max_den: g.max_den, tol: g.tol, samples: g.samples };
    let mut r = Report::new("suite all", g.seed);
    for c in run_all(&opts) {
        r.say(format!("criterion {:>2} {:<24} {} in {:.2?} (budget {:?})", c.id, c.name, c.status, c.elapsed, c.budget));
        r.check(c.check());
    }
    r
}
