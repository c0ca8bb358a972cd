//! deltav: Newton polygon subdivisions, Δ_v-regularity and Jacobian jumps
//! of plane curves over discretely valued fields.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use deltav_core::error::Error;
use deltav_core::jumps::{self};
use deltav_core::parse::parse_poly;
use deltav_core::polytope::subdivide;
use deltav_core::rat::ExtRat;
use deltav_core::report::{self, Report};

#[derive(Parser)]
#[command(
    name = "deltav",
    about = "Jumps of Jacobians of Delta_v-regular plane curves via Newton polygon subdivisions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Residue characteristic (a prime)
    #[arg(long)]
    prime: u64,
    /// Curve equation, e.g. "y^2 = 8*x^6 + x^3 + 2"
    #[arg(long, conflicts_with = "input")]
    poly: Option<String>,
    /// Read the curve equation from a file instead
    #[arg(long)]
    input: Option<PathBuf>,
    /// Write the JSON report to this path
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the decorated-polygon SVG to this path
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Suppress the human-readable summary on stdout
    #[arg(long)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline: subdivision, regularity, jumps; JSON/SVG reports
    Analyze(CommonArgs),
    /// Evaluate v_can on a linear combination of Baker basis forms
    Vcan {
        #[command(flatten)]
        common: CommonArgs,
        /// Form over basis labels, e.g. "2*w(1,1) + w(2,1)"
        #[arg(long)]
        form: String,
    },
    /// Tame base-change what-if: relative jumps and scaled v-values
    Basechange {
        #[command(flatten)]
        common: CommonArgs,
        /// Degree of the tame extension
        #[arg(long)]
        degree: u64,
    },
    /// Render the decorated Newton polygon only
    Svg(CommonArgs),
}

fn read_poly_string(common: &CommonArgs) -> Result<String, String> {
    match (&common.poly, &common.input) {
        (Some(s), _) => Ok(s.clone()),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map(|s| s.trim().to_string())
            .map_err(|e| format!("cannot read {}: {}", path.display(), e)),
        (None, None) => Err("one of --poly or --input is required".to_string()),
    }
}

fn describe(err: &Error) -> String {
    match err {
        Error::ParseError { offset, message } => {
            format!("parse error at byte {}: {}", offset, message)
        }
        other => format!("{}", other),
    }
}

fn write_outputs(common: &CommonArgs, report: &Report, input: &str) -> Result<(), String> {
    if let Some(path) = &common.json {
        let js = serde_json::to_string_pretty(report).map_err(|e| e.to_string())?;
        std::fs::write(path, js + "\n").map_err(|e| e.to_string())?;
    }
    if let Some(path) = &common.svg {
        let f = parse_poly(input).map_err(|e| describe(&e))?;
        let sd = subdivide(&f, common.prime).map_err(|e| describe(&e))?;
        std::fs::write(path, report::render_svg(&sd)).map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn summarize(report: &Report) {
    println!("input: {}", report.input);
    println!("prime: {}", report.prime);
    println!("genus: {}", report.genus);
    let jumps: Vec<String> = report
        .jumps
        .iter()
        .map(|(v, m)| {
            if *m == 1 {
                v.clone()
            } else {
                format!("{} (x{})", v, m)
            }
        })
        .collect();
    println!("jumps: [{}]", jumps.join(", "));
    println!("stabilisation index: {}", report.stabilisation_index);
    println!("regularity: {}", report.regular);
    if report.conditional {
        println!("NOTE: results conditional on unverified regularity");
    }
    for w in &report.warnings {
        println!("warning: {}", w);
    }
}

fn run_analyze(common: &CommonArgs) -> Result<u8, String> {
    let input = read_poly_string(common)?;
    let report = report::analyze(&input, common.prime).map_err(|e| describe(&e))?;
    write_outputs(common, &report, &input)?;
    if !common.quiet {
        summarize(&report);
    }
    Ok(if report.conditional { 2 } else { 0 })
}

fn run_vcan(common: &CommonArgs, form: &str) -> Result<u8, String> {
    let input = read_poly_string(common)?;
    let f = parse_poly(&input).map_err(|e| describe(&e))?;
    let sd = subdivide(&f, common.prime).map_err(|e| describe(&e))?;
    let w = report::parse_form(form).map_err(|e| describe(&e))?;
    let value = jumps::vcan_form(&sd, &w).map_err(|e| describe(&e))?;
    match value {
        ExtRat::Finite(r) => println!("{}", deltav_core::rat::rat_str(&r)),
        ExtRat::Infinity => println!("infinity"),
    }
    Ok(0)
}

fn run_basechange(common: &CommonArgs, degree: u64) -> Result<u8, String> {
    let input = read_poly_string(common)?;
    let bc =
        report::base_change_report(&input, common.prime, degree).map_err(|e| describe(&e))?;
    if let Some(path) = &common.json {
        let js = serde_json::to_string_pretty(&bc).map_err(|e| e.to_string())?;
        std::fs::write(path, js + "\n").map_err(|e| e.to_string())?;
    }
    if !common.quiet {
        println!("input: {}", bc.input);
        println!("degree: {}", bc.degree);
        println!("relative jumps: [{}]", bc.relative_jumps.join(", "));
        let exps: Vec<String> = bc.lattice_exponents.iter().map(|e| e.to_string()).collect();
        println!("lattice exponents: [{}]", exps.join(", "));
        for pt in &bc.scaled_v {
            println!("v'({},{}) = {}", pt.point[0], pt.point[1], pt.v);
        }
        for w in &bc.warnings {
            println!("warning: {}", w);
        }
    }
    Ok(0)
}

fn run_svg(common: &CommonArgs) -> Result<u8, String> {
    let input = read_poly_string(common)?;
    let f = parse_poly(&input).map_err(|e| describe(&e))?;
    let sd = subdivide(&f, common.prime).map_err(|e| describe(&e))?;
    let svg = report::render_svg(&sd);
    match &common.svg {
        Some(path) => std::fs::write(path, &svg).map_err(|e| e.to_string())?,
        None => print!("{}", svg),
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze(common) => run_analyze(common),
        Command::Vcan { common, form } => run_vcan(common, form),
        Command::Basechange { common, degree } => run_basechange(common, *degree),
        Command::Svg(common) => run_svg(common),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {}", msg);
            ExitCode::from(1)
        }
    }
}
