use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use montesinos_vf::certificate::{certify, CaseChoice, Options};
use montesinos_vf::slopes::QChoice;
use montesinos_vf::svg::render_svg;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CaseArg {
    #[value(name = "auto")]
    Auto,
    #[value(name = "I")]
    One,
    #[value(name = "II")]
    Two,
}

/// Certify virtual fibering of a Montesinos link from its rational tangles.
#[derive(Debug, Parser)]
#[command(name = "certify", version)]
struct Args {
    /// Comma-separated tangles q/p, e.g. "1/6,1/6,1/6,1/6,1/6,1/6"
    #[arg(long, allow_hyphen_values = true)]
    tangles: String,
    /// Leaf parameter for the uniform even case: an integer or "auto"
    #[arg(long, default_value = "auto", allow_hyphen_values = true)]
    q: String,
    #[arg(long, value_enum, default_value = "auto")]
    case: CaseArg,
    /// Emit JSON (the only format)
    #[arg(long, default_value_t = true)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write a schematic to <prefix>.svg
    #[arg(long)]
    emit_svg: Option<String>,
    /// Include the full intersection matrix
    #[arg(long)]
    matrix: bool,
    /// K has two components (one singular point per annulus)
    #[arg(long)]
    two_component: bool,
}

fn parse_q(s: &str) -> Result<QChoice, String> {
    if s == "auto" {
        return Ok(QChoice::Auto);
    }
    s.parse::<i64>().map(QChoice::Fixed).map_err(|_| format!("--q expects an integer or \"auto\", got {s:?}"))
}

fn main() -> ExitCode {
    let args = Args::parse();
    let q = match parse_q(&args.q) {
        Ok(q) => q,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let case = match args.case {
        CaseArg::Auto => CaseChoice::Auto,
        CaseArg::One => CaseChoice::I,
        CaseArg::Two => CaseChoice::II,
    };
    let opts = Options { q, case, matrix: args.matrix, two_component: args.two_component };
    let run = match certify(&args.tangles, opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let json = serde_json::to_string_pretty(&run.certificate).expect("certificate serializes") + "\n";
    let written = match &args.out {
        Some(path) => std::fs::write(path, &json).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{json}");
            Ok(())
        }
    };
    let svg = match (&args.emit_svg, &run.system) {
        (Some(prefix), Some(sys)) => {
            let path = format!("{prefix}.svg");
            std::fs::write(&path, render_svg(sys, run.reference.as_ref())).map_err(|e| format!("{path}: {e}"))
        }
        _ => Ok(()),
    };
    if let Err(e) = written.and(svg) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(run.certificate.verdict.exit_code() as u8)
}
