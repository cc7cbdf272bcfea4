use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use mathieu_cli::commands::{self, CliError, Input, Outcome};
use mathieu_cli::report::Report;
use mathieu_cli::repro::{self, ReproName};
use mathieu_cli::spacefile::parse_field;
use mathieu_core::field::Field;
use mathieu_core::idempotent::IdempotentForm;
use mathieu_core::mathieu::MathieuType;

#[derive(Parser)]
#[command(name = "mathieu", version, about = "Exact computations with Mathieu subspaces of matrix algebras")]
struct Cli {
    /// Field override: `Q` or a prime. Entries are reduced mod p.
    #[arg(long, global = true, value_parser = parse_field)]
    field: Option<Field>,
    /// Seed for `random:N:DIM` inputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    Upper,
    Lower,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Left,
    Right,
    Pre2,
    Two,
}

#[derive(Subcommand)]
enum Command {
    /// Constraint space of M.
    Constraints { input: String },
    /// Binary profile of the space, read as C_n.
    Profile { input: String },
    /// Normalize the space, read as C_n, and print the conjugator and move log.
    Normalize { input: String },
    /// Affine family of rank-r idempotents in M.
    Idempotents {
        input: String,
        #[arg(long)]
        r: usize,
        #[arg(long, value_enum, default_value = "upper")]
        form: Form,
    },
    /// Decide whether M is a Mathieu subspace.
    Verify {
        input: String,
        #[arg(long = "type", value_enum, default_value = "left")]
        kind: Kind,
    },
    /// Radical and full power set of M.
    Radical { input: String },
    /// Largest left ideal inside M and its normal form.
    Maxideal { input: String },
    /// Conjugate the constraints of M into rectangle form.
    Main2 { input: String },
    /// Re-run one of the canned computations against its known outcome.
    Repro { name: ReproName },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Constraints { .. } => "constraints",
            Command::Profile { .. } => "profile",
            Command::Normalize { .. } => "normalize",
            Command::Idempotents { .. } => "idempotents",
            Command::Verify { .. } => "verify",
            Command::Radical { .. } => "radical",
            Command::Maxideal { .. } => "maxideal",
            Command::Main2 { .. } => "main2",
            Command::Repro { .. } => "repro",
        }
    }
}

fn run(cli: &Cli) -> Result<(Option<String>, Outcome), CliError> {
    let load = |path: &str| commands::load(path, cli.field, cli.seed);
    let with = |path: &str, f: &dyn Fn(&Input) -> Result<Outcome, CliError>| {
        let input = load(path)?;
        Ok((Some(input.digest.clone()), f(&input)?))
    };
    match &cli.command {
        Command::Constraints { input } => with(input, &commands::constraints),
        Command::Profile { input } => with(input, &commands::profile),
        Command::Normalize { input } => with(input, &commands::normalize),
        Command::Idempotents { input, r, form } => {
            let form = match form {
                Form::Upper => IdempotentForm::Upper,
                Form::Lower => IdempotentForm::Lower,
            };
            with(input, &|i| commands::idempotents(i, *r, form))
        }
        Command::Verify { input, kind } => {
            let kind = match kind {
                Kind::Left => MathieuType::Left,
                Kind::Right => MathieuType::Right,
                Kind::Pre2 => MathieuType::PreTwoSided,
                Kind::Two => MathieuType::TwoSided,
            };
            with(input, &|i| commands::verify(i, kind))
        }
        Command::Radical { input } => with(input, &commands::radical_cmd),
        Command::Maxideal { input } => with(input, &commands::maxideal),
        Command::Main2 { input } => with(input, &commands::main2),
        Command::Repro { name } => Ok((None, repro::run(*name)?)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (digest, outcome) = match run(&cli) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("mathieu {}: {e}", cli.command.name());
            return ExitCode::from(e.exit_code());
        }
    };
    let report = Report {
        command: cli.command.name().into(),
        input_digest: digest,
        ok: outcome.ok,
        payload: outcome.payload,
        move_log: outcome.move_log,
        wall_time_us: start.elapsed().as_micros() as u64,
    };
    if cli.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    if report.ok {
        ExitCode::SUCCESS
    } else {
        eprintln!("mathieu {}: result differs from the expected outcome", report.command);
        ExitCode::FAILURE
    }
}
