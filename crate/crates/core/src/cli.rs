//! Command-line front end: CSV problem files, JSON reports and geometry
//! export.
//!
//! Problem files are CSV with the header `name,divisible,a,b`. Blank lines
//! and lines starting with `#` are ignored; `divisible` is `0` or `1`.
//!
//! Exit codes: 0 on success (including "no fair division exists"), 2 on
//! input or validation errors, 3 when an instance exceeds a size guard.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{solve, Allocation, FairnessReport, Mode};
use crate::existence::{existence, ExistenceFlags, SystemChecks};
use crate::geometry::{adjusted_winner, envelope, pareto_line, shifted_lines};
use crate::model::{gains, Division, GainPair, ModelError, Owner, Problem, Rational, Signature};
use crate::oracle::{oracle_report, OracleError};
use crate::pareto_indivisible::undominated_points;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid report: {0}")]
    Report(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(e) if e.is_guard() => EXIT_GUARD,
            CliError::Oracle(_) => EXIT_GUARD,
            _ => EXIT_INPUT,
        }
    }
}

const HEADER: [&str; 4] = ["name", "divisible", "a", "b"];

/// Parses a problem file.
pub fn parse_problem_file(text: &str) -> Result<Problem, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());

    let mut header_seen = false;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        let err = |message: String| CliError::Parse { line, message };
        if !header_seen {
            if record.iter().ne(HEADER) {
                return Err(err(format!("expected header `{}`", HEADER.join(","))));
            }
            header_seen = true;
            continue;
        }
        if record.len() != 4 {
            return Err(err(format!("expected 4 fields, found {}", record.len())));
        }
        let divisible = match &record[1] {
            "0" => false,
            "1" => true,
            other => {
                return Err(err(format!(
                    "field `divisible` must be 0 or 1, found `{other}`"
                )))
            }
        };
        let value = |field: &str, idx: usize| {
            record[idx].parse::<i64>().map_err(|_| {
                err(format!(
                    "field `{field}` is not an integer: `{}`",
                    &record[idx]
                ))
            })
        };
        rows.push((
            record[0].to_string(),
            divisible,
            value("a", 2)?,
            value("b", 3)?,
        ));
    }
    if !header_seen {
        return Err(CliError::Parse {
            line: 1,
            message: format!("expected header `{}`", HEADER.join(",")),
        });
    }
    Ok(Problem::new(rows)?)
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        None => s.parse::<i128>().ok().map(Rational::from),
        Some((n, d)) => {
            let n = n.parse::<i128>().ok()?;
            let d = d.parse::<i128>().ok()?;
            (d > 0).then(|| Rational::new(n, d))
        }
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct SignatureJson {
    #[serde(rename = "L")]
    l: usize,
    #[serde(rename = "M")]
    m: usize,
    #[serde(rename = "H")]
    h: i64,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct SystemsJson {
    left_vertex: bool,
    right_vertex: bool,
    diagonal: bool,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct ExistsJson {
    proportional: bool,
    equitable: bool,
    systems: SystemsJson,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct SplitJson {
    item: String,
    #[serde(rename = "share_to_A")]
    share_to_a: String,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct AllocationJson {
    gains: [String; 2],
    #[serde(rename = "to_A")]
    to_a: Vec<String>,
    #[serde(rename = "to_B")]
    to_b: Vec<String>,
    split: Option<SplitJson>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct ReportJson {
    signature: SignatureJson,
    exists: ExistsJson,
    equitably_fair: Option<AllocationJson>,
    profitably_fair: Option<AllocationJson>,
    uniformly_fair: Option<AllocationJson>,
    fair: Option<AllocationJson>,
    mode: String,
}

fn exists_json(f: &ExistenceFlags) -> ExistsJson {
    ExistsJson {
        proportional: f.proportional,
        equitable: f.equitable,
        systems: SystemsJson {
            left_vertex: f.systems.left_vertex,
            right_vertex: f.systems.right_vertex,
            diagonal: f.systems.diagonal,
        },
    }
}

fn allocation_json(p: &Problem, a: &Allocation) -> AllocationJson {
    let items = p.items();
    let mut to_a = Vec::new();
    let mut to_b = Vec::new();
    let mut split = None;
    let mut next_share = p.divisible().iter().zip(&a.division.shares);
    let mut next_owner = p.indivisible().iter().zip(&a.division.owners);
    let mut shares = vec![None; items.len()];
    let mut owners = vec![None; items.len()];
    for (&i, x) in next_share.by_ref() {
        shares[i] = Some(*x);
    }
    for (&i, o) in next_owner.by_ref() {
        owners[i] = Some(*o);
    }
    for (i, item) in items.iter().enumerate() {
        let name = item.name.clone();
        match (shares[i], owners[i]) {
            (Some(x), _) if x.is_one() => to_a.push(name),
            (Some(x), _) if x.is_zero() => to_b.push(name),
            (Some(x), _) => {
                assert!(
                    split.is_none(),
                    "a reported division splits at most one item"
                );
                split = Some(SplitJson {
                    item: name,
                    share_to_a: format_rational(&x),
                });
            }
            (None, Some(Owner::A)) => to_a.push(name),
            (None, _) => to_b.push(name),
        }
    }
    AllocationJson {
        gains: [format_rational(&a.gains.a), format_rational(&a.gains.b)],
        to_a,
        to_b,
        split,
    }
}

fn report_json(p: &Problem, r: &FairnessReport) -> ReportJson {
    let alloc = |a: &Option<Allocation>| a.as_ref().map(|a| allocation_json(p, a));
    ReportJson {
        signature: SignatureJson {
            l: r.signature.divisible,
            m: r.signature.indivisible,
            h: r.signature.total,
        },
        exists: exists_json(&r.exists),
        equitably_fair: alloc(&r.equitably_fair),
        profitably_fair: alloc(&r.profitably_fair),
        uniformly_fair: alloc(&r.uniformly_fair),
        fair: alloc(&r.fair),
        mode: r.mode.as_str().to_string(),
    }
}

/// Serializes a report on `p` as compact JSON with a fixed key order.
pub fn format_report_json(p: &Problem, r: &FairnessReport) -> String {
    serde_json::to_string(&report_json(p, r)).expect("report serialization cannot fail")
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Report(msg.into())
}

fn allocation_from_json(p: &Problem, j: &AllocationJson) -> Result<Allocation, CliError> {
    let rational = |s: &str| parse_rational(s).ok_or_else(|| bad(format!("bad number `{s}`")));
    let mut shares: Vec<Option<Rational>> = vec![None; p.divisible().len()];
    let mut owners: Vec<Option<Owner>> = vec![None; p.indivisible().len()];
    let mut assign = |name: &str, share: Rational, owner: Owner| -> Result<(), CliError> {
        let idx = p
            .item_index(name)
            .ok_or_else(|| bad(format!("unknown item `{name}`")))?;
        let slot = if let Some(k) = p.divisible().iter().position(|&i| i == idx) {
            shares[k].replace(share)
        } else {
            if !(share.is_zero() || share.is_one()) {
                return Err(bad(format!("indivisible item `{name}` cannot be split")));
            }
            let k = p
                .indivisible()
                .iter()
                .position(|&i| i == idx)
                .expect("every item is one kind");
            owners[k].replace(owner).map(|_| share)
        };
        match slot {
            Some(_) => Err(bad(format!("item `{name}` listed twice"))),
            None => Ok(()),
        }
    };
    for name in &j.to_a {
        assign(name, Rational::one(), Owner::A)?;
    }
    for name in &j.to_b {
        assign(name, Rational::zero(), Owner::B)?;
    }
    if let Some(s) = &j.split {
        assign(&s.item, rational(&s.share_to_a)?, Owner::A)?;
    }
    let shares = shares
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| bad("some divisible item is not assigned"))?;
    let owners = owners
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| bad("some indivisible item is not assigned"))?;
    Ok(Allocation {
        gains: GainPair::new(rational(&j.gains[0])?, rational(&j.gains[1])?),
        division: Division::new(shares, owners),
    })
}

/// Reads back a report produced by [`format_report_json`] for `p`.
pub fn parse_report_json(text: &str, p: &Problem) -> Result<FairnessReport, CliError> {
    let j: ReportJson = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    let alloc =
        |a: &Option<AllocationJson>| a.as_ref().map(|a| allocation_from_json(p, a)).transpose();
    Ok(FairnessReport {
        signature: Signature {
            divisible: j.signature.l,
            indivisible: j.signature.m,
            total: j.signature.h,
        },
        exists: ExistenceFlags {
            proportional: j.exists.proportional,
            equitable: j.exists.equitable,
            systems: SystemChecks {
                left_vertex: j.exists.systems.left_vertex,
                right_vertex: j.exists.systems.right_vertex,
                diagonal: j.exists.systems.diagonal,
            },
        },
        equitably_fair: alloc(&j.equitably_fair)?,
        profitably_fair: alloc(&j.profitably_fair)?,
        uniformly_fair: alloc(&j.uniformly_fair)?,
        fair: alloc(&j.fair)?,
        mode: j.mode.parse().map_err(bad)?,
    })
}

fn describe(p: &Problem, a: &Allocation) -> String {
    let j = allocation_json(p, a);
    let mut s = format!("gains ({}, {})", j.gains[0], j.gains[1]);
    let list = |names: &[String]| {
        if names.is_empty() {
            "nothing".to_string()
        } else {
            names.join(", ")
        }
    };
    let _ = write!(s, "; A gets {}", list(&j.to_a));
    let _ = write!(s, "; B gets {}", list(&j.to_b));
    if let Some(sp) = j.split {
        let _ = write!(s, "; {} is split with {} to A", sp.item, sp.share_to_a);
    }
    s
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn format_report_text(p: &Problem, r: &FairnessReport) -> String {
    let mut s = String::new();
    let sig = r.signature;
    let _ = writeln!(
        s,
        "signature: L={} M={} H={}",
        sig.divisible, sig.indivisible, sig.total
    );
    let _ = writeln!(s, "mode: {}", r.mode.as_str());
    let _ = writeln!(
        s,
        "proportional division exists: {}",
        yes_no(r.exists.proportional)
    );
    let _ = writeln!(
        s,
        "equitable division exists: {}",
        yes_no(r.exists.equitable)
    );
    for (label, a) in [
        ("equitably fair", &r.equitably_fair),
        ("profitably fair", &r.profitably_fair),
        ("uniformly fair", &r.uniformly_fair),
        ("fair", &r.fair),
    ] {
        match a {
            Some(a) => {
                let _ = writeln!(s, "{label}: {}", describe(p, a));
            }
            None => {
                let _ = writeln!(s, "{label}: none");
            }
        }
    }
    s
}

#[derive(Debug, Parser)]
#[command(
    name = "fairdiv",
    version,
    about = "Exact fair division between two participants"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Find the equitably, profitably and uniformly fair divisions.
    Solve {
        file: PathBuf,
        #[arg(long, default_value = "exact")]
        mode: Mode,
        #[arg(long)]
        json: bool,
    },
    /// Adjusted-winner division, treating every item as divisible.
    Aw {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Whether proportional and equitable divisions exist.
    Exists {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Write the Pareto sets and the efficient frontier as CSV files.
    Geometry {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Brute-force report for small instances.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

fn load(path: &Path) -> Result<Problem, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_problem_file(&text).map_err(|e| match e {
        CliError::Parse { line, message } => CliError::Parse {
            line,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: dir.join(name),
        source,
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(dir.join(name)).map_err(|e| io(e.error))?;
    Ok(())
}

fn bits(owners: &[Owner]) -> String {
    owners
        .iter()
        .map(|o| if o.is_a() { '1' } else { '0' })
        .collect()
}

/// Writes `aw_pareto.csv`, `ad_pareto.csv` and `frontier.csv` into `dir`.
pub fn export_geometry(p: &Problem, dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let points = undominated_points(p);
    let line = pareto_line(&p.divisible_values());
    let lines = shifted_lines(&line, &points);

    let mut aw = String::from("x,y,sigma\n");
    for pt in &points {
        let _ = writeln!(aw, "{},{},{}", pt.x, pt.y, bits(&pt.owners));
    }
    let mut ad = String::from("k,x,y\n");
    for (k, v) in line.vertices.iter().enumerate() {
        let _ = writeln!(
            ad,
            "{k},{},{}",
            format_rational(&v.x),
            format_rational(&v.y)
        );
    }
    let mut frontier = String::from("seg,x1,y1,closed1,x2,y2,closed2\n");
    for (i, piece) in envelope(&lines).iter().enumerate() {
        let _ = writeln!(
            frontier,
            "{i},{},{},{},{},{},{}",
            format_rational(&piece.p1.x),
            format_rational(&piece.p1.y),
            u8::from(piece.closed1),
            format_rational(&piece.p2.x),
            format_rational(&piece.p2.y),
            u8::from(piece.closed2),
        );
    }
    write_atomic(dir, "aw_pareto.csv", &aw)?;
    write_atomic(dir, "ad_pareto.csv", &ad)?;
    write_atomic(dir, "frontier.csv", &frontier)?;
    Ok(())
}

/// Warns on `err` about every output where paper mode and exact mode differ.
fn note_divergence(paper: &FairnessReport, exact: &FairnessReport, err: &mut dyn Write) {
    let fields = [
        (
            "profitably fair",
            &paper.profitably_fair,
            &exact.profitably_fair,
        ),
        (
            "uniformly fair",
            &paper.uniformly_fair,
            &exact.uniformly_fair,
        ),
    ];
    for (label, p, e) in fields {
        let (p, e) = (p.as_ref().map(|a| a.gains), e.as_ref().map(|a| a.gains));
        if p != e {
            let show = |g: Option<GainPair>| g.map_or("none".to_string(), |g| g.to_string());
            let _ = writeln!(
                err,
                "note: {label} differs from exact mode: {} here, {} there",
                show(p),
                show(e)
            );
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let emit = |out: &mut dyn Write, text: &str| {
        let _ = out.write_all(text.as_bytes());
    };
    match command {
        Command::Solve { file, mode, json } => {
            let p = load(&file)?;
            let report = solve(&p, mode);
            if mode == Mode::Paper {
                note_divergence(&report, &solve(&p, Mode::Exact), err);
            }
            if json {
                emit(out, &(format_report_json(&p, &report) + "\n"));
            } else {
                emit(out, &format_report_text(&p, &report));
            }
        }
        Command::Aw { file, json } => {
            let p = load(&file)?;
            let whole: Vec<&str> = p
                .items()
                .iter()
                .filter(|it| !it.divisible)
                .map(|it| it.name.as_str())
                .collect();
            if !whole.is_empty() {
                let _ = writeln!(
                    err,
                    "warning: treating indivisible items as divisible: {}",
                    whole.join(", ")
                );
            }
            let values: Vec<(i64, i64)> = p
                .items()
                .iter()
                .map(|it| (it.value_a, it.value_b))
                .collect();
            let aw = adjusted_winner(&values, p.total());
            // Present the result as a division of an all-divisible copy.
            let all_div = Problem::new(
                p.items()
                    .iter()
                    .map(|it| (it.name.clone(), true, it.value_a, it.value_b)),
            )?;
            debug_assert_eq!(gains(&all_div, &aw.division)?, aw.gains);
            let alloc = Allocation {
                gains: aw.gains,
                division: aw.division.clone(),
            };
            if json {
                let j = allocation_json(&all_div, &alloc);
                emit(
                    out,
                    &(serde_json::to_string(&j).expect("serializable") + "\n"),
                );
            } else {
                let names: Vec<&str> = aw
                    .order
                    .iter()
                    .map(|&i| p.items()[i].name.as_str())
                    .collect();
                let mut s = format!("order: {}\n", names.join(", "));
                let _ = writeln!(s, "r: {}", aw.rank);
                let _ = writeln!(
                    s,
                    "split: {} with {} to A",
                    p.items()[aw.pivot].name,
                    format_rational(&aw.share)
                );
                let _ = writeln!(s, "{}", describe(&all_div, &alloc));
                emit(out, &s);
            }
        }
        Command::Exists { file, json } => {
            let p = load(&file)?;
            let flags = existence(&p);
            if json {
                let j = exists_json(&flags);
                emit(
                    out,
                    &(serde_json::to_string(&j).expect("serializable") + "\n"),
                );
            } else {
                let mut s = String::new();
                let _ = writeln!(s, "proportional: {}", flags.proportional);
                let _ = writeln!(s, "equitable: {}", flags.equitable);
                emit(out, &s);
            }
        }
        Command::Geometry { file, out: dir } => {
            let p = load(&file)?;
            export_geometry(&p, &dir)?;
            emit(
                out,
                &format!(
                    "wrote aw_pareto.csv, ad_pareto.csv, frontier.csv to {}\n",
                    dir.display()
                ),
            );
        }
        Command::Oracle { file, json } => {
            let p = load(&file)?;
            let o = oracle_report(&p)?;
            if json {
                emit(out, &(format_report_json(&p, &o.report) + "\n"));
            } else {
                let mut s = String::from("sigma,gA,gB,best_min,best_gap,crossing\n");
                for row in &o.polygons {
                    let crossing = row
                        .crossing
                        .map(|c| format!("({}, {})", format_rational(&c.a), format_rational(&c.b)))
                        .unwrap_or_else(|| "-".to_string());
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{}",
                        bits(&row.owners),
                        format_rational(&row.base.a),
                        format_rational(&row.base.b),
                        format_rational(&row.best_min),
                        format_rational(&row.best_gap),
                        crossing
                    );
                }
                s.push('\n');
                s.push_str(&format_report_text(&p, &o.report));
                emit(out, &s);
            }
        }
    }
    Ok(())
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
