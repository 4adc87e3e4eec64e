//! Command-line front end: enumeration, statistics, formula evaluation and
//! the verification report, with deterministic text/CSV/JSON output.

use crate::exact::rational_str;
use crate::{asm, formulas, stats, Int, Rational};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::io::Write;
use std::path::PathBuf;

/// Environment variable overriding the enumeration cap (the `--cap` flag
/// takes precedence over it).
pub const ENUM_CAP_ENV: &str = "ASM_ENUM_CAP";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INCONSISTENT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "asm-moments",
    about = "Exact enumeration and moment/cumulant statistics of alternating sign matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Override the enumeration cap (default 8; also settable via ASM_ENUM_CAP).
    #[arg(long, global = true)]
    pub cap: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the ASM counting product formula A_n.
    Count {
        #[arg(long)]
        n: usize,
    },
    /// Stream every ASM of size n.
    Enumerate {
        #[arg(long)]
        n: usize,
    },
    /// Exact mean density rho_n(i,j) over the uniform ensemble.
    Density {
        #[arg(long)]
        n: usize,
    },
    /// Exact frequency table of the observable E_k.
    Dist {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u32,
    },
    /// Exact cumulants kappa1..kappa4 of E_k.
    Cumulants {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u32,
    },
    /// Coefficients of the exponential generating function as polynomials in n.
    Egf {
        #[arg(long, default_value_t = 8)]
        k_max: u32,
    },
    /// Terms of the large-n expansion of E[E_k], exact vs printed coefficients.
    Asympt {
        #[arg(long)]
        k: u32,
    },
    /// Reconcile every closed form against the oracles and the true ensemble.
    Verify {
        #[arg(long, default_value_t = 8)]
        k_max: u32,
        #[arg(long, default_value_t = 6)]
        n_max: u64,
    },
}

#[derive(Debug)]
pub struct CliError {
    pub exit_code: i32,
    pub message: String,
}

impl CliError {
    fn new(exit_code: i32, message: impl Into<String>) -> Self {
        CliError {
            exit_code,
            message: message.into(),
        }
    }
}

impl From<asm::AsmError> for CliError {
    fn from(e: asm::AsmError) -> Self {
        let code = match e {
            asm::AsmError::CapExceeded { .. } => EXIT_CAP,
            _ => EXIT_INCONSISTENT,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<formulas::FormulaError> for CliError {
    fn from(e: formulas::FormulaError) -> Self {
        match e {
            formulas::FormulaError::Enumeration(inner) => inner.into(),
            other => CliError::new(EXIT_INCONSISTENT, other.to_string()),
        }
    }
}

fn resolve_cap(flag: Option<usize>) -> usize {
    if let Some(c) = flag {
        return c;
    }
    std::env::var(ENUM_CAP_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(asm::DEFAULT_ENUM_CAP)
}

/// Runs a parsed command and returns the rendered artifact. The exit status
/// separates implementation failures (nonzero) from refuted printed claims,
/// which are reported in the artifact but leave the status at zero.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let cap = resolve_cap(cli.cap);
    let fmt = cli.format;
    match &cli.command {
        Command::Count { n } => {
            if *n == 0 {
                return Err(CliError::new(EXIT_USAGE, "--n must be at least 1"));
            }
            let count = asm::count_asm(*n);
            Ok(match fmt {
                Format::Text => format!("{count}\n"),
                Format::Csv => format!("n,count\n{n},{count}\n"),
                Format::Json => pretty(&json!({"n": n, "count": count.to_string()})),
            })
        }
        Command::Enumerate { n } => render_enumerate(*n, cap, fmt),
        Command::Density { n } => render_density(*n, cap, fmt),
        Command::Dist { n, k } => render_dist(*n, *k, cap, fmt),
        Command::Cumulants { n, k } => render_cumulants(*n, *k, cap, fmt),
        Command::Egf { k_max } => render_egf(*k_max, fmt),
        Command::Asympt { k } => render_asympt(*k, fmt),
        Command::Verify { k_max, n_max } => render_verify(*k_max, *n_max, cap, fmt),
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn render_enumerate(n: usize, cap: usize, fmt: Format) -> Result<String, CliError> {
    let mut out = String::new();
    match fmt {
        Format::Text => {
            asm::for_each_asm(n, cap, |a| {
                out.push_str(&a.to_string());
                out.push('\n');
            })?;
        }
        Format::Csv => {
            out.push_str("index,entries\n");
            let mut idx = 0u64;
            asm::for_each_asm(n, cap, |a| {
                idx += 1;
                out.push_str(&format!("{idx},{}\n", a.canonical_key().replace(',', " ")));
            })?;
        }
        Format::Json => {
            let mut matrices = Vec::new();
            asm::for_each_asm(n, cap, |a| {
                let rows: Vec<Vec<i64>> = (1..=n)
                    .map(|i| (1..=n).map(|j| a.entry(i, j) as i64).collect())
                    .collect();
                matrices.push(json!(rows));
            })?;
            out = pretty(&json!({"n": n, "count": matrices.len(), "matrices": matrices}));
        }
    }
    Ok(out)
}

fn render_density(n: usize, cap: usize, fmt: Format) -> Result<String, CliError> {
    let d = stats::mean_density(n, cap)?;
    let grid: Vec<Vec<String>> = (1..=n)
        .map(|i| (1..=n).map(|j| rational_str(d.entry(i, j))).collect())
        .collect();
    Ok(match fmt {
        Format::Text | Format::Csv => {
            let sep = if fmt == Format::Csv { "," } else { " " };
            let mut out = String::new();
            for row in &grid {
                out.push_str(&row.join(sep));
                out.push('\n');
            }
            out
        }
        Format::Json => pretty(&json!({"n": n, "rho": grid})),
    })
}

fn render_dist(n: usize, k: u32, cap: usize, fmt: Format) -> Result<String, CliError> {
    let d = stats::distribution(n, k, cap)?;
    Ok(match fmt {
        Format::Text | Format::Csv => {
            let mut out = String::from("value,multiplicity\n");
            for (v, f) in &d.frequencies {
                out.push_str(&format!("{v},{f}\n"));
            }
            out
        }
        Format::Json => pretty(&json!({
            "n": n,
            "k": k,
            "total": d.total.to_string(),
            "frequencies": d.frequencies.iter().map(|(v, f)| {
                json!({"value": v.to_string(), "multiplicity": f.to_string()})
            }).collect::<Vec<_>>(),
        })),
    })
}

fn render_cumulants(n: usize, k: u32, cap: usize, fmt: Format) -> Result<String, CliError> {
    let c = stats::cumulants(&stats::distribution(n, k, cap)?);
    let vals = [
        ("kappa1", &c.kappa1),
        ("kappa2", &c.kappa2),
        ("kappa3", &c.kappa3),
        ("kappa4", &c.kappa4),
    ];
    Ok(match fmt {
        Format::Text => vals
            .iter()
            .map(|(name, v)| format!("{name} = {}\n", rational_str(v)))
            .collect(),
        Format::Csv => {
            let header: Vec<&str> = vals.iter().map(|(name, _)| *name).collect();
            let row: Vec<String> = vals.iter().map(|(_, v)| rational_str(v)).collect();
            format!("{}\n{}\n", header.join(","), row.join(","))
        }
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("n".into(), json!(n));
            obj.insert("k".into(), json!(k));
            for (name, v) in vals {
                obj.insert(name.into(), json!(rational_str(v)));
            }
            pretty(&serde_json::Value::Object(obj))
        }
    })
}

fn render_egf(k_max: u32, fmt: Format) -> Result<String, CliError> {
    let polys = formulas::egf_expansion(k_max as usize)?;
    Ok(match fmt {
        Format::Text => polys
            .iter()
            .enumerate()
            .map(|(k, p)| format!("k={k}: {p}\n"))
            .collect(),
        Format::Csv => {
            let mut out = String::from("k,degree,coefficients\n");
            for (k, p) in polys.iter().enumerate() {
                let coeffs: Vec<String> = (0..=p.degree().max(0) as usize)
                    .map(|i| rational_str(&p.coeff(i)))
                    .collect();
                out.push_str(&format!("{k},{},{}\n", p.degree(), coeffs.join(" ")));
            }
            out
        }
        Format::Json => pretty(&json!({
            "k_max": k_max,
            "polynomials": polys.iter().enumerate().map(|(k, p)| json!({
                "k": k,
                "degree": p.degree(),
                "coefficients": (0..=p.degree().max(0) as usize)
                    .map(|i| rational_str(&p.coeff(i)))
                    .collect::<Vec<_>>(),
                "display": p.to_string(),
            })).collect::<Vec<_>>(),
        })),
    })
}

fn render_asympt(k: u32, fmt: Format) -> Result<String, CliError> {
    let terms = formulas::asymptotic_expansion(k)?;
    let rows: Vec<(i64, String, Option<usize>, String)> = terms
        .iter()
        .map(|t| {
            let printed = match t.zeta_order {
                Some(r) => rational_str(&formulas::asymptotic_coefficient_printed(k, r)),
                None => rational_str(&formulas::asymptotic_leading(k).unwrap_or_else(|_| {
                    Rational::from(Int::from(0))
                })),
            };
            (
                t.exponent,
                rational_str(&t.coefficient),
                t.zeta_order,
                printed,
            )
        })
        .collect();
    Ok(match fmt {
        Format::Text => {
            let mut out = format!("E[E_{k}] expansion in powers of n (exact, terminating)\n");
            for (e, exact, r, printed) in &rows {
                let prov = r.map_or("leading".to_string(), |r| format!("zeta({})", 2 * r));
                out.push_str(&format!(
                    "n^{e}: exact {exact}, printed {printed} ({prov})\n"
                ));
            }
            out
        }
        Format::Csv => {
            let mut out = String::from("exponent,exact,printed,zeta_order\n");
            for (e, exact, r, printed) in &rows {
                let rs = r.map_or(String::new(), |r| r.to_string());
                out.push_str(&format!("{e},{exact},{printed},{rs}\n"));
            }
            out
        }
        Format::Json => pretty(&json!({
            "k": k,
            "terms": rows.iter().map(|(e, exact, r, printed)| json!({
                "exponent": e,
                "exact": exact,
                "printed": printed,
                "zeta_order": r,
            })).collect::<Vec<_>>(),
        })),
    })
}

fn render_verify(k_max: u32, n_max: u64, cap: usize, fmt: Format) -> Result<String, CliError> {
    let mut report = formulas::discrepancy_report(k_max, n_max, cap)?;
    // Bistochasticity and parity are internal-consistency obligations too.
    for n in 1..=(n_max as usize).min(cap) {
        let d = stats::mean_density(n, cap)?;
        let one = Rational::from(Int::from(1));
        for i in 1..=n {
            if d.row_sum(i) != one {
                report
                    .internal_failures
                    .push(format!("density row {i} sum != 1 at n={n}"));
            }
            if d.col_sum(i) != one {
                report
                    .internal_failures
                    .push(format!("density column {i} sum != 1 at n={n}"));
            }
        }
    }
    let rendered = match fmt {
        Format::Text => report.to_text(),
        Format::Csv => report.to_csv(),
        Format::Json => pretty(&report.to_json()),
    };
    if report.is_internally_consistent() {
        Ok(rendered)
    } else {
        Err(CliError::new(EXIT_INCONSISTENT, rendered))
    }
}

/// Parses argv, runs, writes the artifact, and returns the process exit code.
pub fn main_impl<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap exits 2 on usage errors and 0 on --help/--version
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(artifact) => {
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, artifact) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return EXIT_INCONSISTENT;
                }
            } else {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                let _ = lock.write_all(artifact.as_bytes());
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.exit_code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<String, CliError> {
        let cli = Cli::try_parse_from(args).expect("parse");
        run(&cli)
    }

    #[test]
    fn count_command() {
        assert_eq!(run_args(&["asm-moments", "count", "--n", "7"]).unwrap(), "218348\n");
        assert_eq!(
            run_args(&["asm-moments", "count", "--n", "3", "--format", "csv"]).unwrap(),
            "n,count\n3,7\n"
        );
    }

    #[test]
    fn dist_command_csv() {
        let out = run_args(&[
            "asm-moments", "dist", "--n", "3", "--k", "2", "--format", "csv",
        ])
        .unwrap();
        assert_eq!(out, "value,multiplicity\n0,1\n2,2\n4,1\n6,2\n8,1\n");
    }

    #[test]
    fn dist_requires_n() {
        assert!(Cli::try_parse_from(["asm-moments", "dist", "--k", "2"]).is_err());
    }

    #[test]
    fn cap_violation_exit_code() {
        let err = run_args(&["asm-moments", "enumerate", "--n", "9"]).unwrap_err();
        assert_eq!(err.exit_code, EXIT_CAP);
        // explicit override lifts the cap check (n=9 would be slow, so use
        // a lowered cap to show the flag is honored instead)
        let err = run_args(&["asm-moments", "enumerate", "--n", "4", "--cap", "3"]).unwrap_err();
        assert_eq!(err.exit_code, EXIT_CAP);
    }

    #[test]
    fn determinism() {
        let a = run_args(&["asm-moments", "verify", "--k-max", "4", "--n-max", "3"]).unwrap();
        let b = run_args(&["asm-moments", "verify", "--k-max", "4", "--n-max", "3"]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn verify_reports_flags_but_exits_clean() {
        let out = run_args(&[
            "asm-moments", "verify", "--k-max", "4", "--n-max", "3", "--format", "csv",
        ])
        .unwrap();
        assert!(out.contains("2,3,4,4,4,8/3,4,claim-mismatch"));
        assert!(out.contains("4,3,12,12,12,32/3,76/7,claim-mismatch;ensemble-differs"));
    }

    #[test]
    fn emitted_csv_parses_back() {
        let out = run_args(&[
            "asm-moments", "density", "--n", "3", "--format", "csv",
        ])
        .unwrap();
        for line in out.lines() {
            for field in line.split(',') {
                assert!(crate::exact::parse_rational(field).is_some(), "{field}");
            }
        }
    }
}
