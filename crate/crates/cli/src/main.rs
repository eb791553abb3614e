use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rootsel::crochet::{build_scaffold, check_pattern, CrochetPattern, DEFAULT_PATTERN_CAP};
use rootsel::crooked::generate_crooked_chain;
use rootsel::export::Certificate;
use rootsel::pipeline::{solve_problem, Method, PipelineOptions, Provenance, Solved};
use rootsel::pl::align;
use rootsel::poly::{sort_roots_lattice, sort_roots_pointwise, FactoredPoly};
use rootsel::problem::read_problem;
use rootsel::quadratic::{complete_square, default_tolerance, solve_factored_quadratic};
use rootsel::report::Report;
use rootsel::selection::{
    f_space_probe, find_selection, FSpaceProbe, SelectOptions, SelectionResult, DEFAULT_SELECTION_CAP,
};
use rootsel::{fixtures, make_interval, Error, PLFunction, Rational};

/// Continuous root selections of factored polynomials over piecewise-linear
/// functions, in exact arithmetic.
#[derive(Parser)]
#[command(name = "rootsel", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Approximation tolerance as an exact rational.
    #[arg(long)]
    tolerance: Option<String>,
    /// Cell cap for the searches on non-path components.
    #[arg(long)]
    cell_cap: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file, or directory when several inputs are given.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Svg => "svg",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sort the roots of the problem's polynomial.
    Sort {
        file: PathBuf,
        /// Sort vertex by vertex instead of by the lattice formula.
        #[arg(long)]
        pointwise: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Emit the zig-zag cubic problem of a function into [0,1].
    Zigzag {
        /// Problem file holding the function; defaults to f(x) = x on [0,1].
        file: Option<PathBuf>,
        #[arg(long, default_value = "f")]
        function: String,
        #[command(flatten)]
        common: Common,
    },
    /// Solve a factored quadratic, or complete the square of a monic one.
    Quad {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Decide by exhaustive branch search whether a selection exists.
    Select {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the full construction.
    Solve {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Check the problem's supplied patterns against its final-case sets.
    CrochetCheck {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Generate a crooked pattern.
    CrookedGen {
        #[arg(long)]
        links: usize,
        #[arg(long, default_value_t = 1)]
        level: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Solve |f| w = f with |w| <= 1.
    FspaceProbe {
        file: PathBuf,
        #[arg(long, default_value = "f")]
        function: String,
        #[command(flatten)]
        common: Common,
    },
    /// Render a certificate as SVG.
    Plot {
        certificate: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

/// Success, or certified non-existence / failed check.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Outcome {
    Positive,
    Negative,
}

type Run = Result<(Outcome, String), Error>;

fn parse_rational(s: &str) -> Result<Rational, Error> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse { location: "--tolerance".into(), message: format!("{s:?} is not a rational") })
}

fn values(f: &PLFunction) -> Vec<String> {
    f.values().iter().map(|x| x.to_string()).collect()
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

fn render(cert: &Certificate, format: Format) -> Result<String, Error> {
    match format {
        Format::Json => Ok(cert.to_json()),
        Format::Csv => cert.to_csv(0),
        Format::Svg => cert.to_svg(),
    }
}

fn json_only(format: Format, what: &str) -> Result<(), Error> {
    if format != Format::Json {
        return Err(Error::InvalidParameter(format!("{what} only writes json")));
    }
    Ok(())
}

fn outcome(result: &SelectionResult) -> Outcome {
    match result {
        SelectionResult::Found(_) => Outcome::Positive,
        SelectionResult::Obstructed(_) => Outcome::Negative,
    }
}

fn pipeline_options(common: &Common) -> PipelineOptions {
    PipelineOptions { pattern_cap: common.cell_cap.unwrap_or(DEFAULT_PATTERN_CAP), ..PipelineOptions::default() }
}

fn solve_file(path: &Path, common: &Common) -> Run {
    let problem = read_problem(path)?;
    let solved = solve_problem(&problem, &pipeline_options(common))?;
    let cert = Certificate::new(&problem, &solved)?;
    Ok((outcome(&solved.result), render(&cert, common.format)?))
}

fn select_file(path: &Path, common: &Common) -> Run {
    let problem = read_problem(path)?;
    let opts = SelectOptions {
        cell_cap: common.cell_cap.or(problem.options.cell_cap).unwrap_or(DEFAULT_SELECTION_CAP),
        check_signs: true,
    };
    let p = problem.poly()?;
    let result = find_selection(&p, problem.lower()?, problem.upper()?, opts)?;
    let mut report = Report::default();
    report.step("X", "exhaustive branch search");
    let provenance = vec![Provenance {
        region: "X".into(),
        method: Method::ExhaustiveSearch,
        cells: p.domain().num_cells(),
        detail: String::new(),
    }];
    let solved = Solved { result, provenance, report };
    let cert = Certificate::new(&problem, &solved)?;
    Ok((outcome(&solved.result), render(&cert, common.format)?))
}

fn sort(path: &Path, pointwise: bool, common: &Common) -> Run {
    json_only(common.format, "sort")?;
    let problem = read_problem(path)?;
    let p = problem.poly()?;
    let sorted = if pointwise { sort_roots_pointwise(&p)? } else { sort_roots_lattice(&p)? };
    let d = sorted.domain();
    let out = json!({
        "method": if pointwise { "pointwise" } else { "lattice" },
        "coordinates": d.labels().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "edges": d.edges().iter().map(|e| [e.a, e.b]).collect::<Vec<_>>(),
        "roots": sorted.roots().iter().map(values).collect::<Vec<_>>(),
    });
    Ok((Outcome::Positive, pretty(&out)))
}

fn zigzag(path: Option<&Path>, function: &str, common: &Common) -> Run {
    json_only(common.format, "zigzag")?;
    let f = match path {
        Some(path) => read_problem(path)?.function(function)?.clone(),
        None => {
            let k = make_interval(&[Rational::from_integer(0.into()), Rational::from_integer(1.into())])?;
            PLFunction::from_labels(&k, |x| x.clone())
        }
    };
    Ok((Outcome::Positive, fixtures::zigzag_problem(&f)?.to_json()))
}

fn quad(path: &Path, common: &Common) -> Run {
    let problem = read_problem(path)?;
    if problem.monic.is_some() {
        json_only(common.format, "quad on a monic quadratic")?;
        let tol = match &common.tolerance {
            Some(t) => parse_rational(t)?,
            None => problem.options.tolerance.clone().unwrap_or_else(default_tolerance),
        };
        let roots = match complete_square(&problem.monic_quadratic()?, &tol) {
            Ok(r) => r,
            Err(Error::NoRealRoots { witness }) => {
                let out = json!({ "status": "no-real-roots", "witness": witness });
                return Ok((Outcome::Negative, pretty(&out)));
            }
            Err(e) => return Err(e),
        };
        let d = roots.h.domain();
        let out = json!({
            "status": "found",
            "tolerance": tol.to_string(),
            "bound": roots.bound.to_string(),
            "coordinates": d.labels().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "f1": values(&roots.f1),
            "f2": values(&roots.f2),
            "h": values(&roots.h),
        });
        return Ok((Outcome::Positive, pretty(&out)));
    }
    let p = problem.poly()?;
    if p.degree() != 2 {
        return Err(Error::InvalidParameter(format!("quad needs two roots, got {}", p.degree())));
    }
    let sol = solve_factored_quadratic(p.root(1), p.root(2), problem.lower()?, problem.upper()?)?;
    let mut report = Report::default();
    report.extend(sol.log);
    let provenance = vec![Provenance {
        region: "X".into(),
        method: Method::Quadratic,
        cells: sol.w.domain().num_cells(),
        detail: String::new(),
    }];
    let solved = Solved { result: SelectionResult::Found(sol.w), provenance, report };
    Ok((Outcome::Positive, render(&Certificate::new(&problem, &solved)?, common.format)?))
}

fn crochet_check(path: &Path, common: &Common) -> Run {
    json_only(common.format, "crochet-check")?;
    let problem = read_problem(path)?;
    let mut fs = problem.poly()?.roots().to_vec();
    fs.push(problem.lower()?.clone());
    fs.push(problem.upper()?.clone());
    let mut fs = align(&fs)?;
    let v = fs.pop().expect("upper");
    let u = fs.pop().expect("lower");
    let p = FactoredPoly::new(fs)?;
    let p = if p.is_sorted() { p } else { sort_roots_pointwise(&p)? };
    let (u, v) = (u.relocate(p.domain())?, v.relocate(p.domain())?);
    let scaffold = build_scaffold(&p, &u, &v)?;
    if problem.patterns.len() != scaffold.stages.len() {
        return Err(Error::InvalidParameter(format!(
            "need {} patterns, the file has {}",
            scaffold.stages.len(),
            problem.patterns.len()
        )));
    }
    let mut stages = Vec::new();
    let mut passed = true;
    for (s, pat) in scaffold.stages.iter().zip(&problem.patterns) {
        let pat = CrochetPattern {
            x0: pat.x0.relocate(p.domain()),
            x1: pat.x1.relocate(p.domain()),
            x2: pat.x2.relocate(p.domain()),
        };
        let verdict = check_pattern(&pat, &s.a, &s.b, &s.c.interior(), &s.d.interior());
        passed &= verdict.passed();
        let violations: Vec<Value> = verdict
            .violations
            .iter()
            .map(|x| json!({ "clause": x.clause.at_stage(s.i), "witness": x.witness }))
            .collect();
        stages.push(json!({ "stage": s.i, "passed": verdict.passed(), "violations": violations }));
    }
    let out = json!({ "passed": passed, "stages": stages });
    Ok((if passed { Outcome::Positive } else { Outcome::Negative }, pretty(&out)))
}

fn crooked_gen(links: usize, level: usize, common: &Common) -> Run {
    json_only(common.format, "crooked-gen")?;
    let chain = generate_crooked_chain(links, level)?;
    let crooked = chain.pattern.is_crooked();
    let out = json!({
        "links": links,
        "level": level,
        "length": chain.pattern.len(),
        "crooked": crooked,
        "sequence": chain.pattern.seq(),
    });
    Ok((if crooked { Outcome::Positive } else { Outcome::Negative }, pretty(&out)))
}

fn fspace_probe(path: &Path, function: &str, common: &Common) -> Run {
    json_only(common.format, "fspace-probe")?;
    let problem = read_problem(path)?;
    match f_space_probe(problem.function(function)?)? {
        FSpaceProbe::Found(w) => {
            let out = json!({
                "status": "found",
                "coordinates": w.domain().labels().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "w": values(&w),
            });
            Ok((Outcome::Positive, pretty(&out)))
        }
        FSpaceProbe::Obstructed(site) => {
            Ok((Outcome::Negative, pretty(&json!({ "status": "obstructed", "witness": site }))))
        }
    }
}

fn plot(path: &Path) -> Run {
    let cert = Certificate::from_json(&fs::read_to_string(path)?)?;
    Ok((Outcome::Positive, cert.to_svg()?))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => Ok(fs::write(path, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Runs one file per thread; with several files `--out` names a directory.
fn batch(files: &[PathBuf], common: &Common, run: fn(&Path, &Common) -> Run) -> ExitCode {
    let results: Vec<Run> = std::thread::scope(|s| {
        let handles: Vec<_> = files.iter().map(|f| s.spawn(move || run(f, common))).collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut worst = Some(Outcome::Positive);
    for (file, result) in files.iter().zip(results) {
        let written = result.and_then(|(o, text)| {
            let target = match (&common.out, files.len()) {
                (Some(dir), n) if n > 1 => {
                    fs::create_dir_all(dir)?;
                    let stem = file.file_stem().unwrap_or_default().to_string_lossy().into_owned();
                    Some(dir.join(format!("{stem}.{}", common.format.ext())))
                }
                (out, _) => out.clone(),
            };
            emit(&text, target.as_deref())?;
            Ok(o)
        });
        match written {
            Ok(o) => worst = worst.map(|w| w.max(o)),
            Err(e) => {
                eprintln!("error: {}: {e}", file.display());
                worst = None;
            }
        }
    }
    code(worst)
}

fn code(o: Option<Outcome>) -> ExitCode {
    match o {
        Some(Outcome::Positive) => ExitCode::SUCCESS,
        Some(Outcome::Negative) => ExitCode::from(2),
        None => ExitCode::from(1),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, common) = match &cli.command {
        Command::Select { files, common } => return batch(files, common, select_file),
        Command::Solve { files, common } => return batch(files, common, solve_file),
        Command::Sort { file, pointwise, common } => (sort(file, *pointwise, common), common),
        Command::Zigzag { file, function, common } => (zigzag(file.as_deref(), function, common), common),
        Command::Quad { file, common } => (quad(file, common), common),
        Command::CrochetCheck { file, common } => (crochet_check(file, common), common),
        Command::CrookedGen { links, level, common } => (crooked_gen(*links, *level, common), common),
        Command::FspaceProbe { file, function, common } => (fspace_probe(file, function, common), common),
        Command::Plot { certificate, common } => (plot(certificate), common),
    };
    match result.and_then(|(o, text)| emit(&text, common.out.as_deref()).map(|_| o)) {
        Ok(o) => code(Some(o)),
        Err(e) => {
            eprintln!("error: {e}");
            code(None)
        }
    }
}
