// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use dnflat::cli::{self, Command, Options};

/// Verify Jacobi identities and connection flatness of homogeneous Poisson brackets.
#[derive(Parser, Debug)]
#[command(name = "dnflat", version, after_help = COMMANDS)]
struct Args {
    /// `[COMMAND] INPUT`; the command may instead be given with --command.
    #[arg(value_name = "ARGS", num_args = 1..=2, required = true)]
    args: Vec<String>,

    #[arg(long, value_name = "COMMAND")]
    command: Option<String>,

    /// Connection family for `curvature`: std or flat.
    #[arg(long, default_value = "flat")]
    which: String,

    /// Connection index for `curvature`.
    #[arg(long, default_value_t = 0)]
    s: u32,

    /// Coordinate-map document for `transform` and `report`.
    #[arg(long, value_name = "FILE")]
    map: Option<PathBuf>,

    /// Also write the report as JSON.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,

    /// Seed for randomized spot checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Maximal deg_u of random monomials in spot checks.
    #[arg(long = "max-degu", default_value_t = 3)]
    max_degu: u32,
}

const COMMANDS: &str = "Commands: validate, jacobi, connections, curvature, flatness, transform, \
lowdegree, spectral, report, replay (INPUT is a JSON report).\n\
Exit status: 0 all checks pass, 1 a check failed, 2 input error.";

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::INPUT_ERROR as u8)
        }
    }
}

fn run(args: Args) -> dnflat::Result<i32> {
    let (command, input) = match (&args.command, args.args.as_slice()) {
        (Some(c), [input]) => (c.parse::<Command>()?, input),
        (None, [c, input]) => (c.parse::<Command>()?, input),
        (None, [_]) => return Err(dnflat::Error::Schema("missing command".into())),
        _ => return Err(dnflat::Error::Schema("command given twice".into())),
    };
    let opts = Options {
        which: cli::parse_family(&args.which)?,
        s: args.s,
        map: args.map,
        seed: args.seed,
        max_degu: args.max_degu,
    };
    let report = cli::run(command, &PathBuf::from(input), &opts)?;
    println!("{report}");
    if let Some(path) = &args.json {
        std::fs::write(path, report.to_json())?;
    }
    Ok(cli::exit_code(&report))
}
