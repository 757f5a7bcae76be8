//! The `syz` command-line driver.
//!
//! Reads a JSON brane document (see [`document`]), runs one operation and
//! prints a `key = value` report with exact rationals. Exit status is 0 on
//! success, 1 when a domain precondition fails and 2 on parse errors.

pub mod document;
pub mod draw;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use syz_core::intersect::determinant;
use syz_core::mirror::MirrorBundle;
use syz_core::{
    det_class, floer_generators, homology_class, intersect_lines, is_isomorphic, lift_brane, lifted_ham_equivalent,
    self_intersections, surger, surgery_residue, syz_transform, verify_extension, BaseCover, BraneCollection, Error,
    Rational,
};
use thiserror::Error as ThisError;

use document::BraneDocument;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("parse error at line {line}, field `{field}`: {message}")]
    Parse { line: usize, field: String, message: String },

    #[error("invalid argument {arg}: {source}")]
    Argument { arg: String, source: Error },

    #[error("unknown brane or surgery `{0}`")]
    UnknownName(String),

    #[error("cannot read or write {path}: {message}")]
    Io { path: String, message: String },

    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if !e.is_parse_error() => 1,
            CliError::Io { .. } => 1,
            _ => 2,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "E_PARSE",
            CliError::Argument { source, .. } => source.code(),
            CliError::UnknownName(_) => "E_NAME",
            CliError::Io { .. } => "E_IO",
            CliError::Core(e) => e.code(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "syz", version, about = "Exact SYZ mirror computations for branes on the 2-torus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the intersection points of two line branes.
    Intersect { doc: PathBuf, first: String, second: String },
    /// Perform a named surgery and describe the result.
    Surger { doc: PathBuf, spec: String },
    /// Mirror bundle of a brane or of a surgery result.
    Mirror { doc: PathBuf, name: String },
    /// Whether two mirror bundles are isomorphic.
    Isom { doc: PathBuf, first: String, second: String },
    /// Whether the mirror of a surgery is an extension of the two mirrors.
    VerifyExtension {
        doc: PathBuf,
        spec: String,
        /// Local system on the surgered brane; defaults to the one in the document.
        #[arg(long = "b", allow_hyphen_values = true)]
        b: Option<String>,
    },
    /// Lift a line brane through a cyclic cover of the base.
    Lift {
        doc: PathBuf,
        brane: String,
        #[arg(long)]
        cover: u32,
    },
    /// Lifted-Hamiltonian equivalence of two connected branes.
    LiftedHam { doc: PathBuf, first: String, second: String },
    /// Write an SVG picture of the document or of one surgery.
    Draw {
        doc: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Draw the result of this surgery instead of the input branes.
        #[arg(long)]
        spec: Option<String>,
    },
}

fn load(path: &PathBuf) -> Result<BraneDocument, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
    BraneDocument::parse(&text)
}

fn mirror_lines(out: &mut Vec<String>, bundle: &MirrorBundle) {
    out.push(format!("rank = {}", bundle.rank()));
    out.push(format!("degree = {}", bundle.degree()));
    for (i, s) in bundle.summands.iter().enumerate() {
        out.push(format!("summand {i} = {s}"));
    }
    out.push(format!("det = {}", det_class(bundle)));
}

fn membership(q: Rational) -> String {
    if q.is_integer() {
        format!("{q} ∈ Z")
    } else {
        format!("{q} ∉ Z")
    }
}

fn connected(doc: &BraneDocument, name: &str) -> Result<BraneCollection, CliError> {
    let c = doc.collection(name)?;
    if !c.is_connected() {
        return Err(Error::DisconnectedResult(c.len()).into());
    }
    Ok(c)
}

fn execute(command: Command) -> Result<Vec<String>, CliError> {
    let mut out = Vec::new();
    match command {
        Command::Intersect { doc, first, second } => {
            let doc = load(&doc)?;
            let (l1, l2) = (doc.line(&first)?, doc.line(&second)?);
            let points = intersect_lines(l1, l2)?;
            let weights = if determinant(l1, l2) > 0 { Some(floer_generators(l1, l2)?.generators) } else { None };
            out.push(format!("determinant = {}", determinant(l1, l2)));
            out.push(format!("count = {}", points.len()));
            for (i, p) in points.iter().enumerate() {
                let index = p.index.map_or("none".to_string(), |k| k.to_string());
                let mut row = format!(
                    "point {i} = base {}, fiber {}, param1 {}, param2 {}, index {index}",
                    p.base.value(),
                    p.fiber.value(),
                    p.param1,
                    p.param2
                );
                if let Some(gens) = &weights {
                    row.push_str(&format!(", weight {}", gens[i].holonomy_weight.value()));
                }
                out.push(row);
            }
        }
        Command::Surger { doc, spec } => {
            let doc = load(&doc)?;
            let s = doc.spec(&spec)?;
            let result = surger(&s);
            let (r, d) = homology_class(&result);
            out.push(format!("components = {}", result.len()));
            for (i, c) in result.components().iter().enumerate() {
                let bps: Vec<_> = c.breakpoints().iter().map(|(x, y)| format!("({x}, {y})")).collect();
                out.push(format!(
                    "component {i} = rank {}, degree {}, b {}, breakpoints {}",
                    c.r(),
                    c.d(),
                    c.b(),
                    bps.join(" ")
                ));
            }
            out.push(format!("class = ({r}, {d})"));
            let crossings = self_intersections(&result);
            out.push(format!("self_intersections = {}", crossings.len()));
            for (i, (x, y)) in crossings.iter().enumerate() {
                out.push(format!("self_intersection {i} = base {}, fiber {}", x.value(), y.value()));
            }
            match surgery_residue(&s) {
                Ok(n) => out.push(format!("area_residue = {n}")),
                Err(e) => out.push(format!("area_residue = none ({e})")),
            }
        }
        Command::Mirror { doc, name } => {
            let doc = load(&doc)?;
            mirror_lines(&mut out, &syz_transform(&doc.collection(&name)?));
        }
        Command::Isom { doc, first, second } => {
            let doc = load(&doc)?;
            let (a, b) = (syz_transform(&doc.collection(&first)?), syz_transform(&doc.collection(&second)?));
            out.push(format!("isomorphic = {}", is_isomorphic(&a, &b)?));
        }
        Command::VerifyExtension { doc, spec, b } => {
            let doc = load(&doc)?;
            let mut s = doc.spec(&spec)?;
            if let Some(b) = b {
                let b: Rational = b.parse().map_err(|e| CliError::Argument { arg: "--b".into(), source: e })?;
                s = s.with_b(b);
            }
            let report = verify_extension(&s)?;
            out.push(format!("verdict = {}; b1+b2+1/2−b = {}", report.verdict, membership(report.holonomy_defect)));
            out.push(format!("holonomy_defect = {}", report.holonomy_defect));
            out.push(format!("area_residue = {}", report.area_residue));
            out.push(format!(
                "first_condition = {}; area residue = {}",
                report.first_condition,
                membership(report.area_residue)
            ));
            out.push(format!("second_condition = {}", report.second_condition));
            out.push(format!("surgery_det = {}", report.surgery_det));
            out.push(format!("expected_det = {}", report.expected_det));
        }
        Command::Lift { doc, brane, cover } => {
            let doc = load(&doc)?;
            let line = doc.line(&brane)?;
            let lifted = lift_brane(line, BaseCover::new(cover)?);
            out.push(format!("cover = {cover}"));
            out.push(format!("components = {}", lifted.lines.len()));
            for (i, (l, off)) in lifted.lines.iter().zip(&lifted.base_offsets).enumerate() {
                out.push(format!(
                    "component {i} = r {}, d {}, c {}, b {}, offset {}",
                    l.r(),
                    l.d(),
                    l.c(),
                    l.b(),
                    off.value()
                ));
            }
        }
        Command::LiftedHam { doc, first, second } => {
            let doc = load(&doc)?;
            let (a, b) = (connected(&doc, &first)?, connected(&doc, &second)?);
            out.push(format!("lifted_ham_equivalent = {}", lifted_ham_equivalent(&a, &b)?));
        }
        Command::Draw { doc, out: path, spec } => {
            let doc = load(&doc)?;
            let svg = match spec {
                Some(name) => draw::draw_surgery(&doc, &name)?,
                None => draw::draw_document(&doc)?,
            };
            std::fs::write(&path, svg)
                .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
            out.push(format!("svg = {}", path.display()));
        }
    }
    Ok(out)
}

/// Runs one command line (including the program name) and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command) {
        Ok(lines) => {
            for line in lines {
                let _ = writeln!(stdout, "{line}");
            }
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error[{}]: {e}", e.code());
            e.exit_code()
        }
    }
}
