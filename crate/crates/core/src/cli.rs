//! Command-line front end and the textual surface/class formats it shares
//! with other front ends.
//!
//! Surfaces are written `P2`, `P1xP1` or `dP:<n>` (the plane blown up in `n`
//! points). Classes are `d` on the plane, `a,b` on the quadric and
//! `d;m1,...,mn` on `dP:n`, meaning `dH - Σ m_i E_i`.

use std::fmt;
use std::io::{BufReader, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bounds::{self, StabilityBounds};
use crate::extract::{self, BettiInput, RoundtripReport};
use crate::genfun::{self, BpsTable, MAX_CAP};
use crate::surface::{CurveClass, Surface, SurfaceKind};
use crate::{cherncount, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseSpecError(pub String);

impl fmt::Display for ParseSpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ParseSpecError {}

/// Textual surface name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurfaceSpec(pub SurfaceKind);

impl FromStr for SurfaceSpec {
    type Err = ParseSpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let kind = match s {
            "P2" => SurfaceKind::ProjectivePlane,
            "P1xP1" => SurfaceKind::QuadricProduct,
            _ => {
                let n = s
                    .strip_prefix("dP:")
                    .and_then(|n| n.parse::<u32>().ok())
                    .filter(|n| (1..=8).contains(n))
                    .filter(|n| s == format!("dP:{n}"))
                    .ok_or_else(|| {
                        ParseSpecError(format!(
                            "bad surface {s:?}: expected P2, P1xP1 or dP:<1..8>"
                        ))
                    })?;
                SurfaceKind::BlowUp(n)
            }
        };
        Ok(SurfaceSpec(kind))
    }
}

impl fmt::Display for SurfaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            SurfaceKind::ProjectivePlane => f.write_str("P2"),
            SurfaceKind::QuadricProduct => f.write_str("P1xP1"),
            SurfaceKind::BlowUp(n) => write!(f, "dP:{n}"),
        }
    }
}

pub fn parse_surface(s: &str) -> Result<Surface, ParseSpecError> {
    let spec: SurfaceSpec = s.parse()?;
    Surface::new(spec.0).map_err(|e| ParseSpecError(e.to_string()))
}

fn parse_ints(s: &str) -> Result<Vec<i64>, ParseSpecError> {
    s.split(',')
        .map(|t| {
            t.parse::<i64>()
                .map_err(|_| ParseSpecError(format!("bad integer {t:?}")))
        })
        .collect()
}

/// Parses a class in the format for `kind`.
pub fn parse_class(kind: SurfaceKind, s: &str) -> Result<CurveClass, ParseSpecError> {
    let coords = match kind {
        SurfaceKind::ProjectivePlane => parse_ints(s)?,
        SurfaceKind::QuadricProduct => parse_ints(s)?,
        SurfaceKind::BlowUp(_) => {
            let (d, ms) = s
                .split_once(';')
                .ok_or_else(|| ParseSpecError(format!("bad class {s:?}: expected d;m1,...,mn")))?;
            let mut c = parse_ints(d)?;
            if c.len() != 1 {
                return Err(ParseSpecError(format!(
                    "bad class {s:?}: expected a single degree before ';'"
                )));
            }
            c.extend(parse_ints(ms)?);
            c
        }
    };
    if coords.len() != kind.rho() {
        return Err(ParseSpecError(format!(
            "class {s:?} has {} coordinates, {} expects {}",
            coords.len(),
            SurfaceSpec(kind),
            kind.rho()
        )));
    }
    Ok(CurveClass::new(coords))
}

pub fn format_class(kind: SurfaceKind, c: &CurveClass) -> String {
    let join = |xs: &[i64]| xs.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
    match kind {
        SurfaceKind::BlowUp(_) => format!("{};{}", c.coords()[0], join(&c.coords()[1..])),
        _ => join(c.coords()),
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "stablebps",
    version,
    about = "Refined BPS invariants of local del Pezzo surfaces in the stable range"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Stability bounds N1, N2, N and a maximal splitting of the class
    Bounds {
        #[arg(short = 's', long)]
        surface: SurfaceSpec,
        #[arg(short = 'b', long, allow_hyphen_values = true)]
        beta: String,
    },
    /// Refined BPS invariants up to N(beta)
    Bps {
        #[arg(short = 's', long)]
        surface: SurfaceSpec,
        #[arg(short = 'b', long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Betti numbers of the Hilbert scheme of n points
    BettiHilb {
        #[arg(short = 's', long)]
        surface: SurfaceSpec,
        #[arg(short = 'n')]
        n: u32,
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// Generating-function identities: diagonal, change of variables, stabilization
    Verify {
        #[arg(long)]
        rho: Option<u32>,
        #[arg(long, default_value_t = 40)]
        cap: u32,
    },
    /// Recover the BPS table from relative Hilbert scheme Betti numbers
    Extract {
        #[arg(short = 's', long)]
        surface: SurfaceSpec,
        #[arg(short = 'b', long, allow_hyphen_values = true)]
        beta: String,
        /// CSV file with header k,m,b
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Compare tautological monomial counts with H(q,t)
    ChernCount {
        #[arg(long)]
        rho: u32,
        #[arg(short = 'm')]
        m: u32,
    },
}

/// Runs the CLI on `argv` (including the program name) and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_ERROR
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
        Err(CliError::Domain(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(CliError::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

enum CliError {
    Usage(String),
    Domain(Error),
    Io(std::io::Error),
}

impl<E: Into<Error>> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Domain(e.into())
    }
}

fn usage(e: ParseSpecError) -> CliError {
    CliError::Usage(e.0)
}

fn io(e: std::io::Error) -> CliError {
    CliError::Io(e)
}

fn surface_and_class(spec: SurfaceSpec, beta: &str) -> Result<(Surface, CurveClass), CliError> {
    let s = Surface::new(spec.0)?;
    let b = parse_class(spec.0, beta).map_err(usage)?;
    Ok((s, b))
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Bounds { surface, beta } => {
            let (s, b) = surface_and_class(surface, &beta)?;
            let bounds = bounds::compute(&s, &b)?;
            write_bounds(out, &s, &b, &bounds).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Bps {
            surface,
            beta,
            format,
        } => {
            let (s, b) = surface_and_class(surface, &beta)?;
            let bounds = bounds::compute(&s, &b)?;
            let table = genfun::bps_table(&s, &b)?;
            match format {
                Format::Table => write_grid(out, &table),
                Format::Csv => write_csv(out, &table),
                Format::Json => {
                    let v = bps_json(&table, &bounds);
                    writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))
                }
            }
            .map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::BettiHilb {
            surface,
            n,
            max_degree,
        } => {
            let s = Surface::new(surface.0)?;
            let max_degree = max_degree.unwrap_or(4 * n);
            genfun::check_cap(n + max_degree)?;
            let row = genfun::hilb_betti_row(&s, n, max_degree)?;
            writeln!(out, "s,b").map_err(io)?;
            for (deg, b) in row.iter().enumerate() {
                writeln!(out, "{deg},{b}").map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Verify { rho, cap } => {
            if cap > MAX_CAP {
                return Err(genfun::GenfunError::CapTooLarge(cap).into());
            }
            let rhos: Vec<u32> = match rho {
                Some(r) => vec![r],
                None => (1..=9).collect(),
            };
            let mut failures = 0;
            for r in rhos {
                for check in identity_checks(r, cap)? {
                    writeln!(out, "{check}").map_err(io)?;
                    if !check.passed() {
                        failures += 1;
                    }
                }
            }
            writeln!(out, "failures: {failures}").map_err(io)?;
            Ok(if failures == 0 {
                EXIT_OK
            } else {
                EXIT_MISMATCH
            })
        }
        Command::Extract {
            surface,
            beta,
            input,
        } => {
            let (s, b) = surface_and_class(surface, &beta)?;
            let report = match input {
                Some(path) => {
                    let file = std::fs::File::open(&path).map_err(io)?;
                    let input = BettiInput::read_csv(BufReader::new(file))?;
                    extract::compare_with_formula(&s, &b, &input)?
                }
                None => extract::roundtrip_verify(&s, &b)?,
            };
            write_roundtrip(out, &s, &b, &report).map_err(io)?;
            Ok(if report.all_ok() {
                EXIT_OK
            } else {
                EXIT_MISMATCH
            })
        }
        Command::ChernCount { rho, m } => {
            let report = cherncount::verify_chern_vs_h(rho, m)?;
            writeln!(out, "rho: {rho}").map_err(io)?;
            writeln!(out, "m: {m}").map_err(io)?;
            writeln!(out, "i,j,count,H,status").map_err(io)?;
            for c in &report.cells {
                let status = if c.ok() { "ok" } else { "MISMATCH" };
                writeln!(out, "{},{},{},{},{status}", c.i, c.j, c.count, c.expected).map_err(io)?;
            }
            let failures = report.failures().count();
            writeln!(out, "failures: {failures}").map_err(io)?;
            Ok(if failures == 0 {
                EXIT_OK
            } else {
                EXIT_MISMATCH
            })
        }
    }
}

fn write_bounds(
    out: &mut dyn Write,
    s: &Surface,
    b: &CurveClass,
    bounds: &StabilityBounds,
) -> std::io::Result<()> {
    let kind = s.kind();
    writeln!(out, "surface: {}", SurfaceSpec(kind))?;
    writeln!(out, "beta: {}", format_class(kind, b))?;
    writeln!(out, "dim: {}", s.dim_linear_system(b))?;
    writeln!(out, "codim: {}", bounds.codim.value)?;
    writeln!(out, "N1: {}", bounds.n1)?;
    writeln!(out, "N2: {}", bounds.n2)?;
    writeln!(out, "N: {}", bounds.n)?;
    match &bounds.codim.witness {
        Some((b1, b2)) => writeln!(
            out,
            "witness: {} + {}",
            format_class(kind, b1),
            format_class(kind, b2)
        ),
        None => writeln!(out, "witness: none"),
    }
}

// Every factor of H(q,t) has even total degree, so cells with odd i + j vanish
// and the row formats list only even total degrees.
fn even_cells(table: &BpsTable) -> impl Iterator<Item = (u32, u32, &num_bigint::BigInt)> {
    let mut cells: Vec<_> = table
        .entries
        .iter()
        .filter(|((i, j), _)| (i + j) % 2 == 0)
        .map(|(&(i, j), n)| (i, j, n))
        .collect();
    cells.sort_by_key(|&(i, j, _)| (i + j, i));
    cells.into_iter()
}

fn write_csv(out: &mut dyn Write, table: &BpsTable) -> std::io::Result<()> {
    writeln!(out, "i,j,n")?;
    for (i, j, n) in even_cells(table) {
        writeln!(out, "{i},{j},{n}")?;
    }
    Ok(())
}

fn write_grid(out: &mut dyn Write, table: &BpsTable) -> std::io::Result<()> {
    writeln!(
        out,
        "{} beta={} N={} route={}",
        SurfaceSpec(table.surface),
        format_class(table.surface, &table.beta),
        table.bound,
        table.route
    )?;
    if table.bound < 0 {
        return Ok(());
    }
    let bound = table.bound as u32;
    let width = table
        .entries
        .values()
        .map(|n| n.to_string().len())
        .max()
        .unwrap_or(1)
        .max(bound.to_string().len());
    write!(out, "{:>w$} |", "i\\j", w = width.max(3))?;
    for j in 0..=bound {
        write!(out, " {j:>width$}")?;
    }
    writeln!(out)?;
    for i in 0..=bound {
        write!(out, "{:>w$} |", i, w = width.max(3))?;
        for j in 0..=(bound - i) {
            let n = &table.entries[&(i, j)];
            write!(out, " {:>width$}", n.to_string())?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// JSON document with keys `surface, beta, N1, N2, N, table, route`.
/// Bounds and invariants are decimal strings; `N1` may be `"inf"`.
pub fn bps_json(table: &BpsTable, bounds: &StabilityBounds) -> Value {
    let rows: Vec<Value> = even_cells(table)
        .map(|(i, j, n)| json!({"i": i, "j": j, "n": n.to_string()}))
        .collect();
    json!({
        "surface": SurfaceSpec(table.surface).to_string(),
        "beta": format_class(table.surface, &table.beta),
        "N1": bounds.n1.to_string(),
        "N2": bounds.n2.to_string(),
        "N": bounds.n.to_string(),
        "table": rows,
        "route": table.route.to_string(),
    })
}

/// JSON document describing the bounds of a class and its best splitting.
pub fn bounds_json(s: &Surface, b: &CurveClass, bounds: &StabilityBounds) -> Value {
    let kind = s.kind();
    let witness = bounds
        .codim
        .witness
        .as_ref()
        .map(|(b1, b2)| json!([format_class(kind, b1), format_class(kind, b2)]));
    json!({
        "surface": SurfaceSpec(kind).to_string(),
        "beta": format_class(kind, b),
        "dim": s.dim_linear_system(b).to_string(),
        "codim": bounds.codim.value.to_string(),
        "N1": bounds.n1.to_string(),
        "N2": bounds.n2.to_string(),
        "N": bounds.n.to_string(),
        "witness": witness,
    })
}

fn write_roundtrip(
    out: &mut dyn Write,
    s: &Surface,
    b: &CurveClass,
    report: &RoundtripReport,
) -> std::io::Result<()> {
    writeln!(out, "surface: {}", SurfaceSpec(s.kind()))?;
    writeln!(out, "beta: {}", format_class(s.kind(), b))?;
    writeln!(out, "N: {}", report.bound)?;
    writeln!(out, "i,j,extracted,formula,status")?;
    for c in &report.cells {
        let status = if c.ok() { "ok" } else { "MISMATCH" };
        writeln!(out, "{},{},{},{},{status}", c.i, c.j, c.got, c.expected)?;
    }
    writeln!(out, "unverified cells: {}", report.unverified.len())?;
    writeln!(
        out,
        "failures: {}",
        report.cells.iter().filter(|c| !c.ok()).count()
    )
}

/// One named identity check over a series range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub rho: u32,
    pub cap: u32,
    /// First disagreeing coefficient, if any.
    pub mismatch: Option<(u32, u32)>,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

impl fmt::Display for IdentityCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} rho={} cap={} ", self.name, self.rho, self.cap)?;
        match self.mismatch {
            None => write!(f, "PASS"),
            Some((i, j)) => write!(f, "FAIL at ({i},{j})"),
        }
    }
}

/// The identity suite for one Picard number:
/// `T(q) = H(q,q)` to degree `cap`; `G·(1-w)/(1-z²) = H/(1-qt)` after
/// `z = t, w = q/t` to degree `cap`; `[G]^{k,n} = [T]^k` for `k <= n = cap/2`.
pub fn identity_checks(rho: u32, cap: u32) -> Result<Vec<IdentityCheck>, Error> {
    let t = genfun::t_series(rho, cap)?;
    let diag = genfun::h_series(rho, cap)?.specialize_diagonal();
    let diagonal = (0..=cap)
        .find(|&k| t.coeff(k, 0).ok() != diag.coeff(k).ok())
        .map(|k| (k, 0));

    let lhs = genfun::substituted_g_series(rho, cap)?;
    let rhs = genfun::h_over_one_minus_qt(rho, cap)?;
    let coeffidentity = lhs
        .iter()
        .find(|&(i, j, c)| rhs.coeff(i, j).ok() != Some(c))
        .map(|(i, j, _)| (i, j));

    let n = cap / 2;
    let g = genfun::g_series(rho, 2 * n)?;
    let stabilization = (0..=n)
        .find(|&k| g.coeff(k, n).ok() != t.coeff(k, 0).ok())
        .map(|k| (k, n));

    Ok(vec![
        IdentityCheck {
            name: "diagonal",
            rho,
            cap,
            mismatch: diagonal,
        },
        IdentityCheck {
            name: "coeffidentity",
            rho,
            cap,
            mismatch: coeffidentity,
        },
        IdentityCheck {
            name: "stabilization",
            rho,
            cap,
            mismatch: stabilization,
        },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn surface_specs() {
        for text in ["P2", "P1xP1", "dP:1", "dP:8"] {
            let spec: SurfaceSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
        for bad in ["p2", "dP:0", "dP:9", "dP:", "dP:03", "P1xP2", ""] {
            assert!(bad.parse::<SurfaceSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn class_specs() {
        assert_eq!(
            parse_class(SurfaceKind::ProjectivePlane, "6")
                .unwrap()
                .coords(),
            &[6]
        );
        assert_eq!(
            parse_class(SurfaceKind::QuadricProduct, "3,5")
                .unwrap()
                .coords(),
            &[3, 5]
        );
        assert_eq!(
            parse_class(SurfaceKind::BlowUp(3), "6;2,2,2")
                .unwrap()
                .coords(),
            &[6, 2, 2, 2]
        );
        assert!(parse_class(SurfaceKind::BlowUp(3), "6;2,2").is_err());
        assert!(parse_class(SurfaceKind::BlowUp(1), "6,2").is_err());
        assert!(parse_class(SurfaceKind::QuadricProduct, "3").is_err());
        assert!(parse_class(SurfaceKind::ProjectivePlane, "x").is_err());
        assert!(parse_class(SurfaceKind::ProjectivePlane, "1.5").is_err());
    }

    proptest! {
        #[test]
        fn class_format_roundtrip(n in 1u32..=8, coords in proptest::collection::vec(-50i64..50, 9)) {
            let kind = SurfaceKind::BlowUp(n);
            let c = CurveClass::new(coords[..kind.rho()].to_vec());
            prop_assert_eq!(parse_class(kind, &format_class(kind, &c)).unwrap(), c);
        }
    }

    #[test]
    fn identity_suite_passes_small_cap() {
        for rho in 1..=9 {
            for check in identity_checks(rho, 12).unwrap() {
                assert!(check.passed(), "{check}");
            }
        }
    }
}
