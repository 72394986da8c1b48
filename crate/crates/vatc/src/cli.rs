//! Command-line interface.
//!
//! Exit codes: `0` success, `1` validation failure (`validate`) or failed
//! verification verdict (`verify`), `2` parse/usage errors or inputs that
//! fail validation where valid data is required, `3` refused resource
//! guards.

use crate::group::{Endomorphism, GroupElement, VAGroupData};
use crate::growth::{
    beta_series, bfs_ball, check_generates, class_series, fr_series, quotient_series, slope_fit,
    GeneratingSet, GenerationCheck, GrowthError, GrowthSeries, SeriesKind, SlopeReport,
    DEFAULT_BUDGET,
};
use crate::schema::{from_json, parse_element, to_json_pretty, EndoFile, GenSetFile, GroupFile};
use crate::tc::{DegreePrediction, TcError, TwistedConjugacy};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "vatc",
    version,
    about = "Twisted conjugacy invariants of finitely generated virtually abelian groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum SeriesChoice {
    /// ball growth beta(r)
    Beta,
    /// twisted class counting f_R(r)
    Fr,
    /// growth of a single class (requires --g0)
    Class,
}

#[derive(Subcommand)]
pub enum Command {
    /// Check a group file (and optionally an endomorphism file) against the
    /// defining identities; exit 1 with a diagnosis if anything fails
    Validate {
        group: PathBuf,
        #[arg(short, long)]
        endo: Option<PathBuf>,
    },
    /// Per-coset ranks of I - M_a*Phi and the predicted polynomial degrees
    Predict {
        group: PathBuf,
        #[arg(short, long)]
        endo: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Canonical form of the twisted conjugacy class of one element
    Canon {
        group: PathBuf,
        #[arg(short, long)]
        endo: PathBuf,
        /// element literal "x1,...,xn;coset"
        #[arg(long, allow_hyphen_values = true)]
        element: String,
        /// canonicalize in the quotient G/(kZ)^n instead
        #[arg(long)]
        modulus: Option<u64>,
    },
    /// Decide whether two elements are twisted conjugate
    Conjtest {
        group: PathBuf,
        #[arg(short, long)]
        endo: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, allow_hyphen_values = true)]
        h: String,
    },
    /// The Reidemeister number: the count of twisted conjugacy classes
    Reidemeister {
        group: PathBuf,
        #[arg(short, long)]
        endo: PathBuf,
    },
    /// Counting series over balls of increasing radius, with a slope fit
    Growth {
        group: PathBuf,
        #[arg(short, long)]
        endo: Option<PathBuf>,
        #[arg(short = 's', long, value_enum)]
        series: SeriesChoice,
        /// generating set file (defaults to the standard generators)
        #[arg(short = 'S', long)]
        gens: Option<PathBuf>,
        /// base element for --series class, as "x1,...,xn;coset"
        #[arg(long, allow_hyphen_values = true)]
        g0: Option<String>,
        #[arg(long, default_value_t = 30)]
        rmax: u64,
        /// slope-fit window "LO:HI" (default: rmax/3 : rmax)
        #[arg(long)]
        window: Option<String>,
        #[arg(long, default_value_t = 0.2)]
        tolerance: f64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Reidemeister numbers of the congruence quotients G/(kZ)^n
    Quotient {
        group: PathBuf,
        #[arg(short, long)]
        endo: PathBuf,
        #[arg(long, default_value_t = 12)]
        kmax: u64,
        /// also run the brute-force union-find oracle for k <= min(6, kmax)
        #[arg(long)]
        brute: bool,
        /// slope-fit window "LO:HI" (default: kmax/3 : kmax)
        #[arg(long)]
        window: Option<String>,
        #[arg(long, default_value_t = 0.25)]
        tolerance: f64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Full verification bundle; emits a JSON run report on stdout and a
    /// human summary on stderr, exit 1 if any verdict fails
    Verify {
        group: PathBuf,
        #[arg(short, long)]
        endo: PathBuf,
        #[arg(short = 'S', long)]
        gens: Option<PathBuf>,
        #[arg(long, default_value_t = 45)]
        rmax: u64,
        #[arg(long, default_value_t = 24)]
        kmax: u64,
        /// slope tolerance for the radius series
        #[arg(long, default_value_t = 0.2)]
        tolerance: f64,
        /// slope tolerance for the quotient series
        #[arg(long, default_value_t = 0.25)]
        ktolerance: f64,
        /// radius window "LO:HI" (default: rmax/3 : rmax)
        #[arg(long)]
        window: Option<String>,
        /// modulus window "LO:HI" (default: kmax/3 : kmax)
        #[arg(long)]
        kwindow: Option<String>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
}

#[derive(Debug)]
enum CliError {
    /// file IO, JSON syntax, bad shapes, bad literals, invalid inputs to
    /// commands that require valid data, usage mistakes
    Input(String),
    /// refused resource guard
    Guard(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Guard(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Guard(m) => m,
        }
    }
}

impl From<GrowthError> for CliError {
    fn from(e: GrowthError) -> Self {
        match e {
            GrowthError::ResourceGuard { .. } => CliError::Guard(e.to_string()),
            GrowthError::Quotient(TcError::ResourceGuard { .. }) => CliError::Guard(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<TcError> for CliError {
    fn from(e: TcError) -> Self {
        match e {
            TcError::ResourceGuard { .. } => CliError::Guard(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

/// Parses the arguments from the environment, runs the command, and returns
/// the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn load_group(path: &Path) -> Result<(VAGroupData, Vec<u8>), CliError> {
    let bytes = read_file(path)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::Input(format!("{} is not UTF-8", path.display())))?;
    let file: GroupFile =
        from_json(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let group = file.to_group().map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let report = group.validate();
    if !report.is_valid() {
        return Err(CliError::Input(format!("{}: invalid group data\n{report}", path.display())));
    }
    Ok((group, bytes))
}

fn load_endo(path: &Path, group: &VAGroupData) -> Result<(Endomorphism, Vec<u8>), CliError> {
    let bytes = read_file(path)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::Input(format!("{} is not UTF-8", path.display())))?;
    let file: EndoFile =
        from_json(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let endo =
        file.to_endo(group).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let report = endo.validate(group);
    if !report.is_valid() {
        return Err(CliError::Input(format!("{}: not an endomorphism\n{report}", path.display())));
    }
    Ok((endo, bytes))
}

fn load_gens(
    path: Option<&Path>,
    group: &VAGroupData,
) -> Result<(GeneratingSet, Vec<u8>), CliError> {
    let (elements, bytes) = match path {
        None => (group.standard_generators(), b"standard".to_vec()),
        Some(path) => {
            let bytes = read_file(path)?;
            let text = String::from_utf8(bytes.clone())
                .map_err(|_| CliError::Input(format!("{} is not UTF-8", path.display())))?;
            let file: GenSetFile = from_json(&text)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            for g in &file.elements {
                if g.vector.len() != group.lattice_rank() || g.coset >= group.coset_count() {
                    return Err(CliError::Input(format!(
                        "{}: generator {:?} does not fit a rank-{} group with {} cosets",
                        path.display(),
                        g,
                        group.lattice_rank(),
                        group.coset_count()
                    )));
                }
            }
            (file.elements, bytes)
        }
    };
    let gens = GeneratingSet::new(group, &elements).map_err(|e| CliError::Input(e.to_string()))?;
    Ok((gens, bytes))
}

fn parse_window(text: &str) -> Result<(u64, u64), CliError> {
    let err = || CliError::Input(format!("bad window {text:?}: expected \"LO:HI\""));
    let (lo, hi) = text.split_once(':').ok_or_else(err)?;
    let lo = lo.trim().parse::<u64>().map_err(|_| err())?;
    let hi = hi.trim().parse::<u64>().map_err(|_| err())?;
    if lo > hi {
        return Err(err());
    }
    Ok((lo, hi))
}

fn default_window(max: u64) -> (u64, u64) {
    ((max / 3).max(1), max)
}

fn element_arg(group: &VAGroupData, literal: &str) -> Result<GroupElement, CliError> {
    parse_element(group, literal).map_err(|e| CliError::Input(e.to_string()))
}

fn dispatch(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Validate { group, endo } => cmd_validate(&group, endo.as_deref()),
        Command::Predict { group, endo, format } => cmd_predict(&group, &endo, format),
        Command::Canon { group, endo, element, modulus } => {
            cmd_canon(&group, &endo, &element, modulus)
        }
        Command::Conjtest { group, endo, g, h } => cmd_conjtest(&group, &endo, &g, &h),
        Command::Reidemeister { group, endo } => cmd_reidemeister(&group, &endo),
        Command::Growth {
            group,
            endo,
            series,
            gens,
            g0,
            rmax,
            window,
            tolerance,
            budget,
            format,
        } => cmd_growth(
            &group,
            endo.as_deref(),
            series,
            gens.as_deref(),
            g0.as_deref(),
            rmax,
            window.as_deref(),
            tolerance,
            budget,
            format,
        ),
        Command::Quotient { group, endo, kmax, brute, window, tolerance, format } => {
            cmd_quotient(&group, &endo, kmax, brute, window.as_deref(), tolerance, format)
        }
        Command::Verify {
            group,
            endo,
            gens,
            rmax,
            kmax,
            tolerance,
            ktolerance,
            window,
            kwindow,
            budget,
        } => cmd_verify(
            &group,
            &endo,
            gens.as_deref(),
            rmax,
            kmax,
            tolerance,
            ktolerance,
            window.as_deref(),
            kwindow.as_deref(),
            budget,
        ),
    }
}

fn cmd_validate(group_path: &Path, endo_path: Option<&Path>) -> Result<i32, CliError> {
    let bytes = read_file(group_path)?;
    let text = String::from_utf8(bytes)
        .map_err(|_| CliError::Input(format!("{} is not UTF-8", group_path.display())))?;
    let file: GroupFile =
        from_json(&text).map_err(|e| CliError::Input(format!("{}: {e}", group_path.display())))?;
    let group = match file.to_group() {
        Ok(g) => g,
        Err(e) => {
            println!("invalid: {e}");
            return Ok(1);
        }
    };
    let report = group.validate();
    if !report.is_valid() {
        println!("{report}");
        return Ok(1);
    }
    let Some(endo_path) = endo_path else {
        println!("valid");
        return Ok(0);
    };
    let ebytes = read_file(endo_path)?;
    let etext = String::from_utf8(ebytes)
        .map_err(|_| CliError::Input(format!("{} is not UTF-8", endo_path.display())))?;
    let efile: EndoFile =
        from_json(&etext).map_err(|e| CliError::Input(format!("{}: {e}", endo_path.display())))?;
    let endo = match efile.to_endo(&group) {
        Ok(e) => e,
        Err(e) => {
            println!("invalid: {e}");
            return Ok(1);
        }
    };
    let ereport = endo.validate(&group);
    if !ereport.is_valid() {
        println!("{ereport}");
        return Ok(1);
    }
    println!("valid");
    Ok(0)
}

#[derive(Serialize)]
struct PredictOutput {
    cosets: Vec<String>,
    #[serde(flatten)]
    prediction: DegreePrediction,
}

fn cmd_predict(group_path: &Path, endo_path: &Path, format: OutputFormat) -> Result<i32, CliError> {
    let (group, _) = load_group(group_path)?;
    let (endo, _) = load_endo(endo_path, &group)?;
    let tc = TwistedConjugacy::new(&group, &endo);
    let prediction = tc.predicted_degrees();
    match format {
        OutputFormat::Json => {
            let out = PredictOutput { cosets: group.coset_labels().to_vec(), prediction };
            print!("{}", to_json_pretty(&out));
        }
        _ => {
            println!("coset ranks:");
            for (label, rank) in group.coset_labels().iter().zip(&prediction.coset_ranks) {
                println!("  {label}: {rank}");
            }
            println!("fr_degree: {}", prediction.fr_degree);
            println!("fq_degree: {}", prediction.fq_degree);
            println!("ball_degree: {}", prediction.ball_degree);
        }
    }
    Ok(0)
}

fn cmd_canon(
    group_path: &Path,
    endo_path: &Path,
    element: &str,
    modulus: Option<u64>,
) -> Result<i32, CliError> {
    let (group, _) = load_group(group_path)?;
    let (endo, _) = load_endo(endo_path, &group)?;
    let g = element_arg(&group, element)?;
    let tc = TwistedConjugacy::new(&group, &endo);
    let form = match modulus {
        None => tc.canonical_form(&g),
        Some(k) => tc.quotient_canonical_form(k, &g)?,
    };
    println!("{}", group.format_element(&GroupElement::new(form.residue, form.coset)));
    Ok(0)
}

fn cmd_conjtest(group_path: &Path, endo_path: &Path, g: &str, h: &str) -> Result<i32, CliError> {
    let (group, _) = load_group(group_path)?;
    let (endo, _) = load_endo(endo_path, &group)?;
    let g = element_arg(&group, g)?;
    let h = element_arg(&group, h)?;
    let tc = TwistedConjugacy::new(&group, &endo);
    println!("{}", tc.are_twisted_conjugate(&g, &h));
    Ok(0)
}

fn cmd_reidemeister(group_path: &Path, endo_path: &Path) -> Result<i32, CliError> {
    let (group, _) = load_group(group_path)?;
    let (endo, _) = load_endo(endo_path, &group)?;
    let tc = TwistedConjugacy::new(&group, &endo);
    println!("{}", tc.reidemeister_number());
    Ok(0)
}

#[derive(Serialize)]
struct SeriesOutput {
    series: GrowthSeries,
    slope: Option<SlopeReport>,
    slope_error: Option<String>,
}

fn slope_comment(label: &str, slope: &Result<SlopeReport, GrowthError>) -> String {
    match slope {
        Ok(r) => format!(
            "# {label} slope: fitted={:.4} predicted={} window={}:{} residual={:.4} tolerance={} verdict={}",
            r.fitted_slope,
            r.predicted_degree,
            r.window.0,
            r.window.1,
            r.residual,
            r.tolerance,
            if r.verdict { "pass" } else { "fail" }
        ),
        Err(e) => format!("# {label} slope: not fitted: {e}"),
    }
}

fn emit_series(
    series: &GrowthSeries,
    slope: Result<SlopeReport, GrowthError>,
    header: (&str, &str),
    format: OutputFormat,
) {
    let label = match series.kind {
        SeriesKind::Ball => "ball",
        SeriesKind::TwistedClasses => "twisted_classes",
        SeriesKind::Class => "class",
        SeriesKind::Quotient => "quotient",
    };
    match format {
        OutputFormat::Json => {
            let out = SeriesOutput {
                series: series.clone(),
                slope: slope.as_ref().ok().cloned(),
                slope_error: slope.as_ref().err().map(|e| e.to_string()),
            };
            print!("{}", to_json_pretty(&out));
        }
        OutputFormat::Csv => {
            println!("{},{}", header.0, header.1);
            for (r, c) in &series.points {
                println!("{r},{c}");
            }
            eprintln!("{}", slope_comment(label, &slope));
        }
        OutputFormat::Text => {
            println!("{},{}", header.0, header.1);
            for (r, c) in &series.points {
                println!("{r},{c}");
            }
            println!("{}", slope_comment(label, &slope));
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_growth(
    group_path: &Path,
    endo_path: Option<&Path>,
    series: SeriesChoice,
    gens_path: Option<&Path>,
    g0: Option<&str>,
    rmax: u64,
    window: Option<&str>,
    tolerance: f64,
    budget: u64,
    format: OutputFormat,
) -> Result<i32, CliError> {
    let (group, _) = load_group(group_path)?;
    let (gens, _) = load_gens(gens_path, &group)?;
    let window = match window {
        Some(w) => parse_window(w)?,
        None => default_window(rmax),
    };
    let ball = bfs_ball(&group, &gens, rmax, budget)?;
    let need_endo = || -> Result<TwistedConjugacy, CliError> {
        let path = endo_path
            .ok_or_else(|| CliError::Input("this series needs --endo <file>".to_string()))?;
        let (endo, _) = load_endo(path, &group)?;
        Ok(TwistedConjugacy::new(&group, &endo))
    };
    let (data, predicted) = match series {
        SeriesChoice::Beta => (beta_series(&ball), group.lattice_rank()),
        SeriesChoice::Fr => {
            let tc = need_endo()?;
            let deg = tc.predicted_degrees().fr_degree;
            (fr_series(&tc, &ball), deg)
        }
        SeriesChoice::Class => {
            let tc = need_endo()?;
            let literal = g0.ok_or_else(|| {
                CliError::Input("--series class needs --g0 \"x1,...,xn;coset\"".to_string())
            })?;
            let base = element_arg(&group, literal)?;
            let deg = tc.class_support_and_degree(&base).degree;
            (class_series(&tc, &ball, &base), deg)
        }
    };
    let slope = slope_fit(&data, window, predicted, tolerance);
    emit_series(&data, slope, ("r", "count"), format);
    Ok(0)
}

#[derive(Serialize)]
struct OracleEntry {
    k: u64,
    smart: u64,
    brute: u64,
    agree: bool,
}

#[derive(Serialize)]
struct QuotientOutput {
    series: GrowthSeries,
    slope: Option<SlopeReport>,
    slope_error: Option<String>,
    oracle: Vec<OracleEntry>,
}

fn cmd_quotient(
    group_path: &Path,
    endo_path: &Path,
    kmax: u64,
    brute: bool,
    window: Option<&str>,
    tolerance: f64,
    format: OutputFormat,
) -> Result<i32, CliError> {
    let (group, _) = load_group(group_path)?;
    let (endo, _) = load_endo(endo_path, &group)?;
    let tc = TwistedConjugacy::new(&group, &endo);
    let window = match window {
        Some(w) => parse_window(w)?,
        None => default_window(kmax),
    };
    let series = quotient_series(&tc, kmax)?;
    let predicted = tc.predicted_degrees().fq_degree;
    let slope = slope_fit(&series, window, predicted, tolerance);
    let mut oracle = Vec::new();
    if brute {
        for k in 1..=kmax.min(6) {
            let smart = series.points[(k - 1) as usize].1;
            let brute = tc.quotient_reidemeister_bruteforce(k)?;
            oracle.push(OracleEntry { k, smart, brute, agree: smart == brute });
        }
    }
    match format {
        OutputFormat::Json => {
            let out = QuotientOutput {
                series,
                slope: slope.as_ref().ok().cloned(),
                slope_error: slope.as_ref().err().map(|e| e.to_string()),
                oracle,
            };
            print!("{}", to_json_pretty(&out));
        }
        _ => {
            let to_stderr = format == OutputFormat::Csv;
            println!("k,count");
            for (k, c) in &series.points {
                println!("{k},{c}");
            }
            let mut notes = vec![slope_comment("quotient", &slope)];
            for e in &oracle {
                notes.push(format!(
                    "# oracle k={}: smart={} brute={} {}",
                    e.k,
                    e.smart,
                    e.brute,
                    if e.agree { "agree" } else { "DISAGREE" }
                ));
            }
            for note in notes {
                if to_stderr {
                    eprintln!("{note}");
                } else {
                    println!("{note}");
                }
            }
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct SeriesEntry {
    label: String,
    series: GrowthSeries,
}

#[derive(Serialize)]
struct SlopeEntry {
    label: String,
    report: Option<SlopeReport>,
    error: Option<String>,
}

#[derive(Serialize)]
struct RunReport {
    inputs_digest: String,
    n: usize,
    cosets: Vec<String>,
    predictions: DegreePrediction,
    generation: GenerationCheck,
    reidemeister: String,
    series: Vec<SeriesEntry>,
    slopes: Vec<SlopeEntry>,
    quotient_oracle: Vec<OracleEntry>,
    all_passed: bool,
    timing_ms: u64,
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    group_path: &Path,
    endo_path: &Path,
    gens_path: Option<&Path>,
    rmax: u64,
    kmax: u64,
    tolerance: f64,
    ktolerance: f64,
    window: Option<&str>,
    kwindow: Option<&str>,
    budget: u64,
) -> Result<i32, CliError> {
    let start = Instant::now();
    let (group, group_bytes) = load_group(group_path)?;
    let (endo, endo_bytes) = load_endo(endo_path, &group)?;
    let (gens, gens_bytes) = load_gens(gens_path, &group)?;
    let window = match window {
        Some(w) => parse_window(w)?,
        None => default_window(rmax),
    };
    let kwindow = match kwindow {
        Some(w) => parse_window(w)?,
        None => default_window(kmax),
    };

    let mut hasher = Sha256::new();
    for part in [&group_bytes[..], &endo_bytes[..], &gens_bytes[..]] {
        hasher.update((part.len() as u64).to_le_bytes());
        hasher.update(part);
    }
    let inputs_digest = hex::encode(hasher.finalize());

    let tc = TwistedConjugacy::new(&group, &endo);
    let predictions = tc.predicted_degrees();
    let generation = check_generates(&group, &gens, budget)?;
    let reidemeister = tc.reidemeister_number().to_string();

    let ball = bfs_ball(&group, &gens, rmax, budget)?;
    let mut series = Vec::new();
    let mut slopes = Vec::new();
    let push = |label: String,
                data: GrowthSeries,
                predicted: usize,
                win: (u64, u64),
                tol: f64,
                series: &mut Vec<SeriesEntry>,
                slopes: &mut Vec<SlopeEntry>| {
        let fit = slope_fit(&data, win, predicted, tol);
        slopes.push(SlopeEntry {
            label: label.clone(),
            report: fit.as_ref().ok().cloned(),
            error: fit.err().map(|e| e.to_string()),
        });
        series.push(SeriesEntry { label, series: data });
    };

    push(
        "ball".to_string(),
        beta_series(&ball),
        predictions.ball_degree,
        window,
        tolerance,
        &mut series,
        &mut slopes,
    );
    push(
        "twisted_classes".to_string(),
        fr_series(&tc, &ball),
        predictions.fr_degree,
        window,
        tolerance,
        &mut series,
        &mut slopes,
    );
    for a in 0..group.coset_count() {
        let base = group.coset_rep(a);
        let degree = tc.class_support_and_degree(&base).degree;
        push(
            format!("class:{}", group.format_element(&base)),
            class_series(&tc, &ball, &base),
            degree,
            window,
            tolerance,
            &mut series,
            &mut slopes,
        );
    }
    let qseries = quotient_series(&tc, kmax)?;
    push(
        "quotient".to_string(),
        qseries.clone(),
        predictions.fq_degree,
        kwindow,
        ktolerance,
        &mut series,
        &mut slopes,
    );

    let mut quotient_oracle = Vec::new();
    for k in 1..=kmax.min(6) {
        let smart = qseries.points[(k - 1) as usize].1;
        let brute = tc.quotient_reidemeister_bruteforce(k)?;
        quotient_oracle.push(OracleEntry { k, smart, brute, agree: smart == brute });
    }

    let all_passed = slopes.iter().all(|s| s.report.as_ref().map(|r| r.verdict) == Some(true))
        && quotient_oracle.iter().all(|o| o.agree);

    let report = RunReport {
        inputs_digest,
        n: group.lattice_rank(),
        cosets: group.coset_labels().to_vec(),
        predictions,
        generation,
        reidemeister,
        series,
        slopes,
        quotient_oracle,
        all_passed,
        timing_ms: start.elapsed().as_millis() as u64,
    };
    print!("{}", to_json_pretty(&report));

    for s in &report.slopes {
        match (&s.report, &s.error) {
            (Some(r), _) => eprintln!(
                "{}: fitted={:.4} predicted={} verdict={}",
                s.label,
                r.fitted_slope,
                r.predicted_degree,
                if r.verdict { "pass" } else { "fail" }
            ),
            (None, Some(e)) => eprintln!("{}: slope not fitted: {e}", s.label),
            (None, None) => {}
        }
    }
    for o in &report.quotient_oracle {
        eprintln!(
            "oracle k={}: smart={} brute={} {}",
            o.k,
            o.smart,
            o.brute,
            if o.agree { "agree" } else { "DISAGREE" }
        );
    }
    if generation == GenerationCheck::Unknown {
        eprintln!("warning: could not verify that the generating set generates the group");
    }
    eprintln!("verdict: {}", if report.all_passed { "pass" } else { "fail" });

    Ok(if report.all_passed { 0 } else { 1 })
}
