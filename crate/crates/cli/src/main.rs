use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use renyi::app::{self, AppError, ExitStatus, NuChoice, Outcome};
use renyi::model::{parse_model, ModelSpec};
use renyi::posterior::parse_family;
use renyi::report::Format;

/// Exact conditional probabilities, consistency checks and disintegration on
/// finite carriers.
#[derive(Parser)]
#[command(name = "renyi", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Args)]
struct Common {
    /// Model file
    #[arg(long)]
    model: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

#[derive(Subcommand)]
enum Command {
    /// P(event | given)
    Condition {
        #[command(flatten)]
        common: Common,
        /// Event or function name
        #[arg(long)]
        event: String,
        /// Conditioning event name (`all` is the whole carrier)
        #[arg(long, default_value = "all")]
        given: String,
    },
    /// Conditional kernels for the model's statistic, with factorization checks
    Disintegrate {
        #[command(flatten)]
        common: Common,
        /// counting, pushforward or file:<path>
        #[arg(long, default_value = "counting")]
        nu: String,
        /// Extra factorization check: function or event name (needs --given)
        #[arg(long, requires = "given")]
        event: Option<String>,
        #[arg(long, requires = "event")]
        given: Option<String>,
    },
    /// Consistency of the conditional tables and reconstruction of the state
    Check {
        #[command(flatten)]
        common: Common,
    },
    /// Posterior sequence over truncation windows of a family file
    Posterior {
        #[command(flatten)]
        common: Common,
        /// Comma-separated window sizes, e.g. 1,2,3
        #[arg(long, value_delimiter = ',', required = true)]
        windows: Vec<u32>,
    },
    /// Structural validation of a model file
    Validate {
        #[command(flatten)]
        common: Common,
    },
}

enum Failure {
    Io(String),
    App(AppError),
}

impl From<AppError> for Failure {
    fn from(e: AppError) -> Self {
        Failure::App(e)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load_model(path: &Path) -> Result<ModelSpec, Failure> {
    let text = read(path)?;
    parse_model(&text).map_err(|e| Failure::App(AppError::Parse(e)))
}

fn run(command: &Command) -> Result<Outcome, Failure> {
    match command {
        Command::Condition { common, event, given } => {
            Ok(app::run_condition(&load_model(&common.model)?, event, given)?)
        }
        Command::Disintegrate {
            common,
            nu,
            event,
            given,
        } => {
            let model = load_model(&common.model)?;
            let nu = match nu.as_str() {
                "counting" => NuChoice::Counting,
                "pushforward" => NuChoice::Pushforward,
                other => match other.strip_prefix("file:") {
                    Some(path) => NuChoice::Weights(read(Path::new(path))?),
                    None => {
                        return Err(Failure::App(AppError::Precondition(format!(
                            "--nu must be counting, pushforward or file:<path>, got `{other}`"
                        ))))
                    }
                },
            };
            let extra: Vec<(String, String)> = event.iter().cloned().zip(given.iter().cloned()).collect();
            Ok(app::run_disintegrate(&model, &nu, &extra)?)
        }
        Command::Check { common } => Ok(app::run_check(&load_model(&common.model)?)?),
        Command::Posterior { common, windows } => {
            let text = read(&common.model)?;
            let family = parse_family(&text).map_err(AppError::Parse)?;
            Ok(app::run_posterior(&family, windows)?)
        }
        Command::Validate { common } => Ok(app::run_validate(&load_model(&common.model)?)?),
    }
}

fn common(command: &Command) -> &Common {
    match command {
        Command::Condition { common, .. }
        | Command::Disintegrate { common, .. }
        | Command::Check { common }
        | Command::Posterior { common, .. }
        | Command::Validate { common } => common,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match common(&cli.command).format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    };
    let status = match run(&cli.command) {
        Ok(outcome) => {
            print!("{}", outcome.report.render(format));
            outcome.status
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitStatus::Io
        }
        Err(Failure::App(e)) => {
            eprintln!("error: {e}");
            e.status()
        }
    };
    ExitCode::from(status.code() as u8)
}
