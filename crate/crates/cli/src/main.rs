//! `folq`: quotient spaces of affine varieties by algebraic foliations.
//!
//! Subcommands: `involutive`, `first-integrals`, `invariance`, `stability`,
//! `quotient`, `leaf`, `plot`. Input is a JSON problem file; output is
//! canonical JSON (or SVG for `plot`). Exit codes: 0 success/affirmative,
//! 1 negative verdict, 2 input error, 3 internal bound exhausted.

mod output;
mod plot;
mod problem;

use clap::{Parser, Subcommand};
use foliation_core::diffmod::Distribution;
use foliation_core::first_integrals::compute_algebra;
use foliation_core::foliation::{
    is_invariant, is_involutive, Invariance, Involutivity, RingMorphism,
};
use foliation_core::poly::{Coef, Poly, PolyRing};
use foliation_core::quotient::{build_atlas, build_chart, leaf_fibre};
use foliation_core::stability::Verdict;
use output::print_json;
use problem::{MapSpec, Problem, ProblemSpec};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BOUND: u8 = 3;

#[derive(Parser)]
#[command(
    name = "folq",
    about = "quotient spaces of affine varieties by algebraic foliations",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check involutivity of the distribution
    Involutive { file: PathBuf },
    /// Compute the ring of first integrals on a chart (or the whole space)
    #[command(name = "first-integrals")]
    FirstIntegrals {
        file: PathBuf,
        /// chart index into the problem's chart list; whole space if absent
        #[arg(long)]
        chart: Option<usize>,
        /// degree bound override
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Check invariance of a morphism given by a map file
    Invariance {
        file: PathBuf,
        #[arg(long)]
        map: PathBuf,
    },
    /// Certify or refute stability of a chart (whole space if absent)
    Stability {
        file: PathBuf,
        #[arg(long)]
        chart: Option<usize>,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        d_alg: Option<u32>,
    },
    /// Compute the glued quotient atlas over the problem's charts
    Quotient {
        file: PathBuf,
        #[arg(long)]
        degree: Option<u32>,
    },
    /// The fibre of a chart map over a rational point
    Leaf {
        file: PathBuf,
        #[arg(long)]
        chart: Option<usize>,
        /// comma-separated rational coordinates, e.g. "1,-1/2"
        #[arg(long)]
        point: String,
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Render an SVG phase portrait (two-dimensional problems)
    Plot {
        file: PathBuf,
        /// window as x0,x1,y0,y1
        #[arg(long, default_value = "-3,3,-3,3")]
        window: String,
        /// grid density
        #[arg(long, default_value_t = 12)]
        density: usize,
        /// output path; stdout if absent
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

fn load(file: &PathBuf) -> Result<Problem, u8> {
    let spec = ProblemSpec::load(file).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_INPUT
    })?;
    spec.build().map_err(|e| {
        eprintln!("error: {e}");
        EXIT_INPUT
    })
}

fn code_for(err: &foliation_core::Error) -> u8 {
    match err {
        foliation_core::Error::RecognitionFailure(_) => EXIT_BOUND,
        foliation_core::Error::ChartNotCertified(_) => EXIT_NEGATIVE,
        foliation_core::Error::CocycleViolation(_) => EXIT_NEGATIVE,
        _ => EXIT_INPUT,
    }
}

/// Chart selector: by index into the problem's chart list, or the whole
/// space when absent.
fn chart_denominator(problem: &Problem, index: Option<usize>) -> Result<(String, Poly), u8> {
    match index {
        None => Ok(("X".to_string(), Poly::one(&problem.ring))),
        Some(i) => match problem.charts.get(i) {
            Some(f) => Ok((format!("D({f})"), f.clone())),
            None => {
                eprintln!(
                    "error: chart index {i} out of range (problem has {} charts)",
                    problem.charts.len()
                );
                Err(EXIT_INPUT)
            }
        },
    }
}

fn saturated(problem: &Problem) -> Distribution {
    if problem.dist.is_saturated() {
        problem.dist.clone()
    } else {
        problem.dist.saturate_torsion()
    }
}

fn cmd_involutive(file: PathBuf) -> u8 {
    let problem = match load(&file) {
        Ok(p) => p,
        Err(c) => return c,
    };
    let dist = saturated(&problem);
    let verdict = is_involutive(&dist);
    let (rank, corank) = dist.rank_corank();
    let json = match &verdict {
        Involutivity::Yes => output::InvolutiveJson {
            verdict: "yes".into(),
            denominator: None,
            witness: None,
            rank,
            corank,
        },
        Involutivity::YesGenerically { denominator } => output::InvolutiveJson {
            verdict: "yes-generically".into(),
            denominator: Some(denominator.to_string()),
            witness: None,
            rank,
            corank,
        },
        Involutivity::No { pair, bracket } => output::InvolutiveJson {
            verdict: "no".into(),
            denominator: None,
            witness: Some(format!(
                "bracket of dual generators {} and {} escapes: {bracket}",
                pair.0, pair.1
            )),
            rank,
            corank,
        },
    };
    print_json(&json);
    if verdict.is_involutive() {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}

fn cmd_first_integrals(file: PathBuf, chart: Option<usize>, degree: Option<u32>) -> u8 {
    let problem = match load(&file) {
        Ok(p) => p,
        Err(c) => return c,
    };
    let degree = degree.unwrap_or(problem.options.degree_bound);
    let base = saturated(&problem);
    let (id, den) = match chart_denominator(&problem, chart) {
        Ok(x) => x,
        Err(c) => return c,
    };
    let restricted = match foliation_core::foliation::restrict_to_open(&base, &den) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return code_for(&e);
        }
    };
    match compute_algebra(&restricted, degree) {
        Ok(alg) => {
            print_json(&output::algebra_json(&id, &alg));
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            code_for(&e)
        }
    }
}

fn cmd_invariance(file: PathBuf, map: PathBuf) -> u8 {
    let problem = match load(&file) {
        Ok(p) => p,
        Err(c) => return c,
    };
    let spec = match MapSpec::load(&map) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let run = || -> foliation_core::Result<Invariance> {
        let names: Vec<&str> = spec.variables.iter().map(|s| s.as_str()).collect();
        let source = PolyRing::new(&names)?;
        let images: foliation_core::Result<Vec<Poly>> = spec
            .images
            .iter()
            .map(|e| problem.ring.parse(e))
            .collect();
        let phi = RingMorphism::new(&source, &problem.ring, images?)?;
        let dist = saturated(&problem);
        is_invariant(&phi, &dist)
    };
    match run() {
        Ok(Invariance::Yes) => {
            print_json(&output::InvarianceJson {
                invariant: true,
                witness_variable: None,
                witness_class: None,
            });
            EXIT_OK
        }
        Ok(Invariance::No { variable, class }) => {
            print_json(&output::InvarianceJson {
                invariant: false,
                witness_variable: Some(variable),
                witness_class: Some(class.to_string()),
            });
            EXIT_NEGATIVE
        }
        Err(e) => {
            eprintln!("error: {e}");
            code_for(&e)
        }
    }
}

fn cmd_stability(
    file: PathBuf,
    chart: Option<usize>,
    degree: Option<u32>,
    d_alg: Option<u32>,
) -> u8 {
    let problem = match load(&file) {
        Ok(p) => p,
        Err(c) => return c,
    };
    let degree = degree.unwrap_or(problem.options.degree_bound);
    let d_alg = d_alg.unwrap_or(problem.options.d_alg);
    let base = saturated(&problem);
    let (id, den) = match chart_denominator(&problem, chart) {
        Ok(x) => x,
        Err(c) => return c,
    };
    match build_chart(&base, &id, &den, degree, d_alg) {
        Ok(chart) => {
            print_json(&output::certificate_json(&chart.certificate));
            match chart.certificate.overall {
                Verdict::Verified => EXIT_OK,
                Verdict::Refuted { .. } => EXIT_NEGATIVE,
                Verdict::Unknown { .. } => EXIT_BOUND,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            code_for(&e)
        }
    }
}

fn cmd_quotient(file: PathBuf, degree: Option<u32>) -> u8 {
    let problem = match load(&file) {
        Ok(p) => p,
        Err(c) => return c,
    };
    if problem.charts.is_empty() {
        eprintln!("error: the problem file lists no charts");
        return EXIT_INPUT;
    }
    let degree = degree.unwrap_or(problem.options.degree_bound);
    let d_alg = problem.options.d_alg;
    let base = saturated(&problem);
    let verdict = is_involutive(&base);
    if !verdict.is_involutive() {
        eprintln!("error: the distribution is not involutive; no quotient exists");
        return EXIT_NEGATIVE;
    }
    let run = || -> foliation_core::Result<foliation_core::quotient::Atlas> {
        let mut charts = Vec::new();
        for f in &problem.charts {
            charts.push(build_chart(&base, &format!("D({f})"), f, degree, d_alg)?);
        }
        build_atlas(&base, charts, degree)
    };
    match run() {
        Ok(atlas) => {
            let ok = atlas.cocycle_ok;
            print_json(&output::atlas_json(&atlas));
            if ok {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            code_for(&e)
        }
    }
}

fn parse_point(text: &str) -> Result<Vec<Coef>, String> {
    text.split(',')
        .map(|part| {
            let part = part.trim();
            Coef::from_str(part).map_err(|_| format!("bad rational `{part}`"))
        })
        .collect()
}

fn cmd_leaf(file: PathBuf, chart: Option<usize>, point: String, degree: Option<u32>) -> u8 {
    let problem = match load(&file) {
        Ok(p) => p,
        Err(c) => return c,
    };
    let degree = degree.unwrap_or(problem.options.degree_bound);
    let d_alg = problem.options.d_alg;
    let base = saturated(&problem);
    let (id, den) = match chart_denominator(&problem, chart) {
        Ok(x) => x,
        Err(c) => return c,
    };
    let coords = match parse_point(&point) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let run = || -> foliation_core::Result<foliation_core::quotient::LeafReport> {
        let chart = build_chart(&base, &id, &den, degree, d_alg)?;
        leaf_fibre(&chart, &coords)
    };
    match run() {
        Ok(report) => {
            let passes = report.passes();
            print_json(&output::leaf_json(&report));
            if passes {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            code_for(&e)
        }
    }
}

fn parse_window(text: &str) -> Result<plot::Window, String> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad number `{p}`"))
        })
        .collect::<Result<_, String>>()?;
    if parts.len() != 4 || parts[0] >= parts[1] || parts[2] >= parts[3] {
        return Err("window must be x0,x1,y0,y1 with x0 < x1 and y0 < y1".into());
    }
    Ok(plot::Window {
        x0: parts[0],
        x1: parts[1],
        y0: parts[2],
        y1: parts[3],
    })
}

fn cmd_plot(file: PathBuf, window: String, density: usize, out: Option<PathBuf>) -> u8 {
    let problem = match load(&file) {
        Ok(p) => p,
        Err(c) => return c,
    };
    if problem.ring.base_vars() != 2 || problem.ring.is_localized() {
        eprintln!("error: plot requires a plain two-variable ring");
        return EXIT_INPUT;
    }
    let window = match parse_window(&window) {
        Ok(w) => w,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let base = saturated(&problem);
    let alg = match compute_algebra(&base, problem.options.degree_bound) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return code_for(&e);
        }
    };
    // no global first integrals: draw the level sets of the first chart's
    // integrals instead (cells where a denominator vanishes are skipped)
    let alg = if alg.generators().is_empty() && !problem.charts.is_empty() {
        let restricted =
            match foliation_core::foliation::restrict_to_open(&base, &problem.charts[0]) {
                Ok(d) => d,
                Err(e) => {
                    eprintln!("error: {e}");
                    return code_for(&e);
                }
            };
        match compute_algebra(&restricted, problem.options.degree_bound) {
            Ok(a) => a,
            Err(e) => {
                eprintln!("error: {e}");
                return code_for(&e);
            }
        }
    } else {
        alg
    };
    let duals;
    let field = if let Some(f) = problem.input_fields.first() {
        Some(f.clone())
    } else {
        duals = base.dual_vector_fields();
        duals.first().cloned()
    };
    let field = field.filter(|f| !f.is_zero());
    let svg = plot::render(field.as_ref(), alg.generators(), window, density);
    match out {
        None => {
            print!("{svg}");
            EXIT_OK
        }
        Some(path) => match std::fs::write(&path, svg) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", path.display());
                EXIT_INPUT
            }
        },
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Involutive { file } => cmd_involutive(file),
        Command::FirstIntegrals {
            file,
            chart,
            degree,
        } => cmd_first_integrals(file, chart, degree),
        Command::Invariance { file, map } => cmd_invariance(file, map),
        Command::Stability {
            file,
            chart,
            degree,
            d_alg,
        } => cmd_stability(file, chart, degree, d_alg),
        Command::Quotient { file, degree } => cmd_quotient(file, degree),
        Command::Leaf {
            file,
            chart,
            point,
            degree,
        } => cmd_leaf(file, chart, point, degree),
        Command::Plot {
            file,
            window,
            density,
            out,
        } => cmd_plot(file, window, density, out),
    };
    ExitCode::from(code)
}
