use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use singmin::cli::{self, MeshFormat, VerifyOptions};
use singmin::{Axis, ConnectionKind, Error, Family};

// Writes to stdout, ignoring a closed pipe.
macro_rules! out {
    ($($arg:tt)*) => {{
        let _ = write!(std::io::stdout().lock(), $($arg)*);
    }};
}

macro_rules! outln {
    ($($arg:tt)*) => {{
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(name = "singmin", version, about = "Construct and verify singular minimal translation surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the singular-minimality residual on a grid.
    Verify {
        #[arg(long)]
        spec: PathBuf,
        /// levi, nabla or d (default: the family's own connection)
        #[arg(long)]
        connection: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        /// x, y or z
        #[arg(long)]
        u: Option<String>,
        /// NUxNV
        #[arg(long, default_value = "64x64")]
        grid: String,
        #[arg(long, default_value_t = cli::DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Write a triangle mesh of the spec's region.
    Mesh {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// obj or csv
        #[arg(long, default_value = "obj")]
        format: String,
        #[arg(long, default_value = "32x32")]
        grid: String,
    },
    /// Tabulate an ODE- or quadrature-defined profile.
    Solve {
        #[arg(long)]
        family: String,
        /// key=value, repeatable
        #[arg(long = "param", allow_hyphen_values = true)]
        params: Vec<String>,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        sign: f64,
        /// A:B
        #[arg(long, allow_hyphen_values = true)]
        range: Option<String>,
        #[arg(long)]
        rtol: Option<f64>,
        #[arg(long, default_value_t = 201)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// List the solution families.
    Catalog {
        #[arg(long)]
        json: bool,
    },
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Verify {
            spec,
            connection,
            alpha,
            u,
            grid,
            tol,
            json,
        } => {
            let opts = VerifyOptions {
                connection: connection.map(|c| c.parse::<ConnectionKind>()).transpose()?,
                alpha,
                u: u.map(|a| a.parse::<Axis>()).transpose()?,
                grid: Some(cli::parse_grid(&grid)?),
                tol: Some(tol),
            };
            let problem = cli::parse_spec(&spec)?.resolve()?;
            let report = cli::verify(&problem, &opts)?;
            if json {
                outln!("{}", report.to_json());
            } else {
                out!("{}", report.to_text());
            }
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Mesh {
            spec,
            out,
            format,
            grid,
        } => {
            let format: MeshFormat = format.parse()?;
            let (nu, nv) = cli::parse_grid(&grid)?;
            let problem = cli::parse_spec(&spec)?.resolve()?;
            let text = cli::mesh_text(&problem, nu, nv, format)?;
            cli::write_file(&out, &text)?;
            outln!("wrote {} ({}x{} vertices)", out.display(), nu, nv);
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve {
            family,
            params,
            sign,
            range,
            rtol,
            samples,
            out,
        } => {
            let family: Family = family.parse()?;
            let params = params
                .iter()
                .map(|p| cli::parse_param(p))
                .collect::<Result<Vec<_>, _>>()?;
            let range = range.as_deref().map(cli::parse_range).transpose()?;
            let (text, report) = cli::solve(family, &params, sign, range, rtol, samples)?;
            cli::write_file(&out, &text)?;
            outln!(
                "wrote {}: {} samples on [{}, {}], max_defect={:e}",
                out.display(),
                report.samples,
                report.range.0,
                report.range.1,
                report.max_defect
            );
            if let Some(e) = report.roundtrip_error {
                outln!("roundtrip_error={e:e}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Catalog { json } => {
            if json {
                outln!("{}", cli::catalog_json());
            } else {
                out!("{}", cli::catalog_text());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
