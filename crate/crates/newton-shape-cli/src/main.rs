//! Command-line surface: polynomial parsing and analysis, corner search and
//! table reproduction, the bounded `F` solver, and the degree-reduction
//! pipeline.

use clap::{Args, Parser, Subcommand};
use newton_shape::direction::Direction;
use newton_shape::geom::{
    directions_of, endpoints, leading_form, newton_polygon, v_degree, DegreeValue,
};
use newton_shape::morphisms::{
    apply_elementary, apply_flip, random_tame_pair, ElementaryAuto, Flip,
};
use newton_shape::pipeline::{b16_reduce, certify_no_f, PipelineError};
use newton_shape::poly::{bracket, is_jacobian_pair, LaurentPoly};
use newton_shape::rational::{q_str, PlanePoint, Q};
use newton_shape::search::{
    chain_filter, enumerate_candidates, survivors, xlist, CandidateCorner, FilterProfile,
};
use newton_shape::text::{parse_poly, render_poly, ParseError};
use serde::Serialize;
use std::fmt::Write as _;
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_ASSUMPTION: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(
    name = "newton-shape",
    version,
    about = "Newton-polygon calculus for Jacobian pairs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a polynomial file and echo its canonical form.
    Parse { file: String },
    /// Newton polygon, direction set and per-direction data of a polynomial.
    Analyze {
        file: String,
        /// Restrict to one direction R,S.
        #[arg(long, value_name = "R,S")]
        dir: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Jacobian bracket of two polynomial files.
    Bracket { file1: String, file2: String },
    /// Apply an automorphism to a polynomial file.
    Auto(AutoArgs),
    /// Enumerate corner candidates and reproduce the admissibility tables.
    Search {
        #[arg(long, default_value_t = 3)]
        min: i64,
        #[arg(long)]
        max: i64,
        #[arg(long, value_parser = parse_profile)]
        profile: FilterProfile,
        #[arg(long)]
        json: bool,
    },
    /// The admissible-corner list up to a degree bound.
    Xlist {
        #[arg(long)]
        bound: i64,
        #[arg(long)]
        json: bool,
    },
    /// Solve [F, l_d(P)] = l_d(P) on the bounded support line.
    SolveF {
        file: String,
        #[arg(long, value_name = "R,S")]
        dir: String,
        #[arg(long, value_name = "D", default_value_t = 20)]
        max_y: u32,
    },
    /// Run the degree-reduction pipeline on a candidate pair.
    Pipeline {
        file1: String,
        file2: String,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        n: i64,
    },
    /// Generate a random Jacobian pair with bracket exactly 1.
    RandPair {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        steps: u32,
        #[arg(long, default_value_t = 4000)]
        budget: usize,
    },
    /// Chain-extension feasibility for a starting corner.
    Chain {
        #[arg(long, value_name = "U,V")]
        a0: String,
        #[arg(long)]
        q0: i64,
        #[arg(long)]
        bound: i64,
    },
}

#[derive(Args)]
struct AutoArgs {
    file: String,
    /// Elementary automorphism y -> y + LAMBDA x^(K/L): pass "LAMBDA K/L".
    #[arg(long, num_args = 2, value_names = ["LAMBDA", "K/L"], allow_hyphen_values = true)]
    elem: Option<Vec<String>>,
    /// One of psi1, psi2, psi3.
    #[arg(long)]
    flip: Option<String>,
}

fn parse_profile(s: &str) -> Result<FilterProfile, String> {
    FilterProfile::parse(s).ok_or_else(|| format!("unknown profile '{s}'"))
}

enum CliError {
    Usage(String),
    Parse(ParseError),
    Assumption(PipelineError),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Assumption(_) => EXIT_ASSUMPTION,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Parse(e) => e.to_string(),
            CliError::Assumption(e) => e.to_string(),
            CliError::Internal(m) => m.clone(),
        }
    }
}

fn load_poly(path: &str) -> Result<LaurentPoly, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?;
    parse_poly(text.trim()).map_err(CliError::Parse)
}

fn parse_dir(s: &str) -> Result<Direction, CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::Usage(format!("direction '{s}' is not R,S")));
    }
    let rho: i64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad rho in '{s}'")))?;
    let sigma: i64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad sigma in '{s}'")))?;
    Direction::new(rho, sigma).map_err(|e| CliError::Usage(e.to_string()))
}

fn parse_rational(s: &str) -> Result<Q, CliError> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    let n: i64 = num
        .parse()
        .map_err(|_| CliError::Usage(format!("bad rational '{s}'")))?;
    let d: i64 = den
        .parse()
        .map_err(|_| CliError::Usage(format!("bad rational '{s}'")))?;
    if d == 0 {
        return Err(CliError::Usage("zero denominator".into()));
    }
    Ok(newton_shape::rational::q(n, d))
}

fn pt_str(p: &PlanePoint) -> String {
    format!("({},{})", q_str(&p.x), q_str(&p.y))
}

fn deg_str(v: &DegreeValue) -> String {
    match v {
        DegreeValue::NegInfinity => "-inf".to_string(),
        DegreeValue::Finite(x) => q_str(x),
    }
}

#[derive(Serialize)]
struct Report<T: Serialize> {
    schema_version: u32,
    command: String,
    inputs: serde_json::Value,
    results: T,
}

fn emit_json<T: Serialize>(command: &str, inputs: serde_json::Value, results: T) {
    let rep = Report {
        schema_version: 1,
        command: command.to_string(),
        inputs,
        results,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&rep).expect("serializable")
    );
}

#[derive(Serialize)]
struct DirectionData {
    dir: Direction,
    v: String,
    leading_form: String,
    st: [String; 2],
    en: [String; 2],
}

#[derive(Serialize)]
struct AnalyzeResults {
    poly: String,
    ramification_index: String,
    hull: Vec<[String; 2]>,
    directions: Vec<Direction>,
    per_direction: Vec<DirectionData>,
}

fn direction_data(p: &LaurentPoly, d: Direction) -> Result<DirectionData, CliError> {
    let lf = leading_form(p, d);
    let (s, e) = endpoints(p, d).map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(DirectionData {
        dir: d,
        v: deg_str(&v_degree(p, d)),
        leading_form: render_poly(&lf),
        st: [q_str(&s.x), q_str(&s.y)],
        en: [q_str(&e.x), q_str(&e.y)],
    })
}

fn cmd_analyze(file: &str, dir: Option<String>, json: bool) -> Result<(), CliError> {
    let p = load_poly(file)?;
    if p.is_zero() {
        return Err(CliError::Usage("cannot analyze the zero polynomial".into()));
    }
    let hull = newton_polygon(&p).map_err(|e| CliError::Internal(e.to_string()))?;
    let dirs = directions_of(&p).map_err(|e| CliError::Internal(e.to_string()))?;
    let selected: Vec<Direction> = match &dir {
        Some(s) => vec![parse_dir(s)?],
        None => dirs.clone(),
    };
    let per_direction: Vec<DirectionData> = selected
        .iter()
        .map(|&d| direction_data(&p, d))
        .collect::<Result<_, _>>()?;
    if json {
        emit_json(
            "analyze",
            serde_json::json!({"file": file, "dir": dir}),
            AnalyzeResults {
                poly: render_poly(&p),
                ramification_index: p.ramification_index().to_string(),
                hull: hull
                    .vertices
                    .iter()
                    .map(|v| [q_str(&v.x), q_str(&v.y)])
                    .collect(),
                directions: dirs,
                per_direction,
            },
        );
    } else {
        println!("P = {}", render_poly(&p));
        println!("ramification index: {}", p.ramification_index());
        let verts: Vec<String> = hull.vertices.iter().map(pt_str).collect();
        println!("hull: {}", verts.join(" "));
        let ds: Vec<String> = dirs.iter().map(|d| d.to_string()).collect();
        println!("Dir(P): {{{}}}", ds.join(", "));
        for dd in &per_direction {
            println!(
                "  {}: v = {}, st = ({},{}), en = ({},{}), l = {}",
                dd.dir, dd.v, dd.st[0], dd.st[1], dd.en[0], dd.en[1], dd.leading_form
            );
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct SearchRow {
    #[serde(rename = "A0")]
    a0: (i64, i64),
    f: (i64, i64),
    mu: String,
    dir: Direction,
    #[serde(rename = "A0prime")]
    a0prime: Vec<(i64, i64)>,
    dgcd: i64,
    gamma: Vec<i64>,
    #[serde(rename = "A1")]
    a1: Vec<[String; 2]>,
    lprime_minus_ab: Vec<String>,
    survives: bool,
    verdicts: Vec<newton_shape::search::FilterVerdict>,
}

fn search_row(c: &CandidateCorner) -> SearchRow {
    // The displayed gamma/A1 columns are the branches that reached the
    // criterion (everything except prime-guard casualties).
    let display: Vec<_> = c
        .branches
        .iter()
        .filter(|b| b.killed_by.as_deref() != Some("gamma-prime-guard"))
        .collect();
    SearchRow {
        a0: c.a0,
        f: c.f_end,
        mu: c.mu.clone(),
        dir: c.dir,
        a0prime: c.a0_prime_options.clone(),
        dgcd: c.dgcd,
        gamma: display.iter().map(|b| b.gamma).collect(),
        a1: display
            .iter()
            .map(|b| [format!("{}/{}", b.a1_num, b.a1_den), b.a1_y.to_string()])
            .collect(),
        lprime_minus_ab: display.iter().map(|b| b.lprime_minus_ab.clone()).collect(),
        survives: c.survives,
        verdicts: c.verdicts.clone(),
    }
}

fn cmd_search(min: i64, max: i64, profile: FilterProfile, json: bool) -> Result<(), CliError> {
    let rows = enumerate_candidates(min, max, profile);
    let surv = survivors(&rows);
    if json {
        #[derive(Serialize)]
        struct SearchResults {
            rows: Vec<SearchRow>,
            survivors: Vec<(i64, i64)>,
        }
        emit_json(
            "search",
            serde_json::json!({"min": min, "max": max, "profile": profile.name()}),
            SearchResults {
                rows: rows.iter().map(search_row).collect(),
                survivors: surv,
            },
        );
        return Ok(());
    }
    for c in &rows {
        let r = search_row(c);
        let mut line = String::new();
        write!(
            line,
            "A0=({},{})  f=({},{})  dir={}",
            r.a0.0, r.a0.1, r.f.0, r.f.1, r.dir
        )
        .unwrap();
        if r.a0prime.is_empty() {
            write!(line, "  A0'=x").unwrap();
        } else {
            let opts: Vec<String> = r
                .a0prime
                .iter()
                .map(|(a, b)| format!("({a},{b})"))
                .collect();
            write!(line, "  A0'={}", opts.join("|")).unwrap();
            write!(line, "  d={}", r.dgcd).unwrap();
            let gs: Vec<String> = r.gamma.iter().map(|g| g.to_string()).collect();
            write!(line, "  gamma={}", gs.join("|")).unwrap();
            let a1s: Vec<String> =
                r.a1.iter()
                    .map(|a| format!("({},{})", a[0], a[1]))
                    .collect();
            write!(line, "  A1={}", a1s.join("|")).unwrap();
            write!(line, "  l'-a/b={}", r.lprime_minus_ab.join("|")).unwrap();
        }
        let fate = if c.survives {
            "SURVIVES".to_string()
        } else {
            let reason = c
                .verdicts
                .iter()
                .find(|v| !v.pass)
                .map(|v| v.filter.clone())
                .unwrap_or_else(|| "eliminated".to_string());
            format!("eliminated ({reason})")
        };
        println!("{line}  -> {fate}");
    }
    println!("{} rows, {} survivors", rows.len(), surv.len());
    for s in &surv {
        println!("survivor: ({},{})", s.0, s.1);
    }
    Ok(())
}

fn cmd_xlist(bound: i64, json: bool) -> Result<(), CliError> {
    let list = xlist(bound);
    let reference: Vec<(i64, i64)> = vec![
        (4, 12),
        (5, 20),
        (6, 15),
        (6, 30),
        (7, 21),
        (7, 35),
        (7, 42),
        (8, 24),
        (8, 28),
        (9, 21),
        (9, 24),
        (9, 36),
        (10, 25),
        (10, 30),
        (10, 40),
        (11, 33),
        (12, 28),
        (12, 30),
        (12, 33),
        (12, 36),
        (14, 35),
        (15, 35),
        (18, 30),
    ];
    let extras: Vec<(i64, i64)> = if bound == 50 {
        list.iter()
            .filter(|p| !reference.contains(p))
            .copied()
            .collect()
    } else {
        vec![]
    };
    if json {
        #[derive(Serialize)]
        struct XlistResults {
            bound: i64,
            admissible: Vec<(i64, i64)>,
            extras_beyond_reference: Option<Vec<(i64, i64)>>,
        }
        emit_json(
            "xlist",
            serde_json::json!({"bound": bound}),
            XlistResults {
                bound,
                admissible: list,
                extras_beyond_reference: if bound == 50 { Some(extras) } else { None },
            },
        );
        return Ok(());
    }
    for p in &list {
        println!("({},{})", p.0, p.1);
    }
    println!("{} admissible corners up to bound {bound}", list.len());
    if bound == 50 && !extras.is_empty() {
        let ex: Vec<String> = extras
            .iter()
            .map(|p| format!("({},{})", p.0, p.1))
            .collect();
        println!(
            "extras beyond the reference 23-element list (not silently dropped): {}",
            ex.join(" ")
        );
    }
    Ok(())
}

fn cmd_pipeline(file1: &str, file2: &str, m: i64, n: i64) -> Result<(), CliError> {
    let p = load_poly(file1)?;
    let q = load_poly(file2)?;
    match b16_reduce(&p, &q, m, n) {
        Ok(state) => {
            for rep in &state.stage_log {
                print_stage(rep);
            }
            println!("pipeline completed: every stage assertion held;");
            println!("P6 = {}", render_poly(&state.p));
            println!("Q6 = {}", render_poly(&state.q));
            Ok(())
        }
        Err(PipelineError::AssumptionViolated {
            stage,
            assertion,
            diagnostic,
            log,
        }) => {
            for rep in &log {
                print_stage(rep);
            }
            println!("assumption violated at stage {stage}: {assertion}");
            if !diagnostic.is_empty() {
                println!("  {diagnostic}");
            }
            Err(CliError::Assumption(PipelineError::AssumptionViolated {
                stage,
                assertion,
                diagnostic,
                log: vec![],
            }))
        }
        Err(e) => Err(CliError::Usage(e.to_string())),
    }
}

fn print_stage(rep: &newton_shape::pipeline::StageReport) {
    println!(
        "stage {}: {}",
        rep.stage,
        if rep.pass { "pass" } else { "FAIL" }
    );
    for c in &rep.checks {
        println!(
            "  [{}] {} {}",
            match c.kind {
                newton_shape::pipeline::CheckKind::Unconditional => "shape",
                newton_shape::pipeline::CheckKind::BracketDependent => "jacobian",
            },
            if c.pass { "ok  " } else { "FAIL" },
            c.assertion
        );
    }
}

fn run() -> Result<(), CliError> {
    let cli = Cli::try_parse().map_err(|e| {
        // clap's own help/version output goes to stdout with success.
        if e.use_stderr() {
            CliError::Usage(e.to_string())
        } else {
            print!("{e}");
            std::process::exit(0);
        }
    })?;
    match cli.command {
        Command::Parse { file } => {
            let p = load_poly(&file)?;
            println!("{}", render_poly(&p));
            Ok(())
        }
        Command::Analyze { file, dir, json } => cmd_analyze(&file, dir, json),
        Command::Bracket { file1, file2 } => {
            let p = load_poly(&file1)?;
            let q = load_poly(&file2)?;
            let b = bracket(&p, &q);
            println!("{}", render_poly(&b));
            if let Some(c) = is_jacobian_pair(&p, &q) {
                println!("jacobian pair: yes (constant {})", q_str(&c));
            } else {
                println!("jacobian pair: no");
            }
            Ok(())
        }
        Command::Auto(args) => {
            let p = load_poly(&args.file)?;
            let out = match (&args.elem, &args.flip) {
                (Some(elem), None) => {
                    let lambda = parse_rational(&elem[0])?;
                    let exponent = parse_rational(&elem[1])?;
                    let a = ElementaryAuto::new(lambda, exponent)
                        .map_err(|e| CliError::Usage(e.to_string()))?;
                    apply_elementary(&p, &a)
                }
                (None, Some(f)) => {
                    let flip = match f.as_str() {
                        "psi1" => Flip::Psi1,
                        "psi2" => Flip::Psi2,
                        "psi3" => Flip::Psi3,
                        other => return Err(CliError::Usage(format!("unknown flip '{other}'"))),
                    };
                    apply_flip(&p, flip).map_err(|e| CliError::Usage(e.to_string()))?
                }
                _ => {
                    return Err(CliError::Usage(
                        "exactly one of --elem or --flip is required".into(),
                    ))
                }
            };
            println!("{}", render_poly(&out));
            Ok(())
        }
        Command::Search {
            min,
            max,
            profile,
            json,
        } => {
            if min > max {
                return Err(CliError::Usage("--min exceeds --max".into()));
            }
            cmd_search(min, max, profile, json)
        }
        Command::Xlist { bound, json } => cmd_xlist(bound, json),
        Command::SolveF { file, dir, max_y } => {
            let p = load_poly(&file)?;
            let d = parse_dir(&dir)?;
            let cert = certify_no_f(&p, d, max_y).map_err(|e| CliError::Usage(e.to_string()))?;
            if cert.solutions.is_empty() {
                println!(
                    "no F with y-degree <= {} satisfies [F, l_{}(P)] = l_{}(P)",
                    cert.max_ydeg, d, d
                );
            } else {
                for f in &cert.solutions {
                    println!("F = {f}");
                }
            }
            Ok(())
        }
        Command::Pipeline { file1, file2, m, n } => cmd_pipeline(&file1, &file2, m, n),
        Command::RandPair {
            seed,
            steps,
            budget,
        } => {
            let (p, q) = random_tame_pair(seed, steps, budget)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            println!("P = {}", render_poly(&p));
            println!("Q = {}", render_poly(&q));
            let b = bracket(&p, &q);
            println!("[P,Q] = {}", render_poly(&b));
            Ok(())
        }
        Command::Chain { a0, q0, bound } => {
            let parts: Vec<&str> = a0.split(',').collect();
            if parts.len() != 2 {
                return Err(CliError::Usage("--a0 must be U,V".into()));
            }
            let u: i64 = parts[0]
                .trim()
                .parse()
                .map_err(|_| CliError::Usage("bad U".into()))?;
            let v: i64 = parts[1]
                .trim()
                .parse()
                .map_err(|_| CliError::Usage("bad V".into()))?;
            let reports = chain_filter((u, v), q0, bound);
            if reports.is_empty() {
                println!("no mu branch of ({u},{v}) has denominator {q0}");
            }
            for rep in &reports {
                print!("{rep}");
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::from(EXIT_OK),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
