use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qcvur_core::relations::MeasurementSetup;
use qcvur_core::sweep::{
    check_single_valued, emit_csv, evaluate_record, figure_preset, format_g17, match_mixedness,
    record_fields, run_sweep, AxisRange, PointIssue, SweepGrid, CSV_HEADER,
};
use qcvur_core::{verify, Error, Result};

/// Uncertainty relations on the thermal two-qubit Heisenberg model with DM interaction.
#[derive(Parser)]
#[command(name = "qcvur", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every quantity over a grid and write CSV.
    Sweep(SweepArgs),
    /// Evaluate one parameter point and print `key=value` lines.
    Point(PointArgs),
    /// Find the lowest temperature with the given mixedness.
    MatchGamma {
        #[arg(long, allow_hyphen_values = true)]
        d: f64,
        #[arg(long, allow_hyphen_values = true)]
        j: f64,
        #[arg(long, allow_hyphen_values = true)]
        target: f64,
    },
    /// Compare W and U at matched mixedness across couplings of one sign.
    CheckSingleValued {
        #[arg(long, allow_hyphen_values = true)]
        d: f64,
        /// Comma-separated coupling samples; the first supplies the targets.
        #[arg(
            long,
            allow_hyphen_values = true,
            value_delimiter = ',',
            required = true
        )]
        j: Vec<f64>,
        /// Number of mixedness targets.
        #[arg(long, default_value_t = 20)]
        targets: usize,
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        theta: f64,
    },
    /// Run the invariant suite.
    Verify,
}

#[derive(Args)]
struct SweepArgs {
    /// Named figure configuration.
    #[arg(long, conflicts_with_all = ["d", "j", "t", "theta"], required_unless_present_all = ["d", "j", "t"])]
    preset: Option<String>,
    /// D axis as start:stop:steps.
    #[arg(long, allow_hyphen_values = true)]
    d: Option<AxisRange>,
    /// J axis as start:stop:steps.
    #[arg(long, allow_hyphen_values = true)]
    j: Option<AxisRange>,
    /// T axis as start:stop:steps.
    #[arg(long, allow_hyphen_values = true)]
    t: Option<AxisRange>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PointArgs {
    #[arg(long, allow_hyphen_values = true)]
    d: f64,
    #[arg(long, allow_hyphen_values = true)]
    j: f64,
    #[arg(long, allow_hyphen_values = true)]
    t: f64,
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    theta: f64,
}

fn sweep(args: SweepArgs) -> Result<()> {
    let (grid, setup) = match args.preset {
        Some(name) => {
            let preset = figure_preset(&name)?;
            (preset.grid, preset.setup)
        }
        None => {
            let missing = || Error::Usage("--d, --j and --t are required without --preset".into());
            let theta = args.theta.unwrap_or(0.5);
            let grid = SweepGrid::new(
                args.d.ok_or_else(missing)?,
                args.j.ok_or_else(missing)?,
                args.t.ok_or_else(missing)?,
                theta,
            )?;
            (grid, MeasurementSetup::standard(theta))
        }
    };
    let records = run_sweep(&grid, &setup)?;
    emit_csv(&records, &args.out)?;

    let mut failures = 0;
    for (row, r) in records.iter().enumerate() {
        match &r.issue {
            Some(PointIssue::Rejected(why)) => {
                eprintln!(
                    "note: row {} (d={}, j={}, t={}) left empty: {why}",
                    row + 1,
                    r.d,
                    r.j,
                    r.t
                )
            }
            Some(PointIssue::Failed(why)) => {
                failures += 1;
                eprintln!(
                    "error: row {} (d={}, j={}, t={}): {why}",
                    row + 1,
                    r.d,
                    r.j,
                    r.t
                )
            }
            None => {}
        }
    }
    if failures > 0 {
        return Err(Error::Invariant(format!(
            "{failures} of {} grid points failed; CSV written to {}",
            records.len(),
            args.out.display()
        )));
    }
    Ok(())
}

fn point(args: PointArgs) -> Result<()> {
    if !args.theta.is_finite() {
        return Err(Error::Usage(format!(
            "theta = {} is not finite",
            args.theta
        )));
    }
    let record = evaluate_record(
        args.d,
        args.j,
        args.t,
        &MeasurementSetup::standard(args.theta),
    );
    if let Some(PointIssue::Rejected(why)) = &record.issue {
        return Err(Error::Range(why.clone()));
    }
    for (key, value) in CSV_HEADER.split(',').zip(record_fields(&record)) {
        println!("{key}={value}");
    }
    if let Some(PointIssue::Failed(why)) = record.issue {
        return Err(Error::Invariant(why));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep(args) => sweep(args),
        Command::Point(args) => point(args),
        Command::MatchGamma { d, j, target } => {
            println!("{}", format_g17(match_mixedness(d, j, target)?));
            Ok(())
        }
        Command::CheckSingleValued {
            d,
            j,
            targets,
            theta,
        } => {
            let r = check_single_valued(d, &j, &MeasurementSetup::standard(theta), targets)?;
            println!("w_spread={}", format_g17(r.w_spread));
            println!("u_spread={}", format_g17(r.u_spread));
            println!("matched={}", r.matched);
            println!("skipped={}", r.skipped);
            if r.skipped > 0 {
                eprintln!("warning: {} targets could not be matched", r.skipped);
            }
            Ok(())
        }
        Command::Verify => {
            let outcomes = verify::run_all();
            for o in &outcomes {
                println!("{}", o.line());
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            if failed > 0 {
                return Err(Error::Invariant(format!(
                    "{failed} of {} checks failed",
                    outcomes.len()
                )));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version arrive here too and are not failures
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
