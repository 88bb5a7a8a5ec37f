use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fibauto::arith::{self, BaseConfig, RESERVED_NAMES};
use fibauto::hurtsada::{self, format_sequence, SequenceFormat, SEQUENCE_NAMES};
use fibauto::learner::{self, GuessConfig, GuessReport, ZeckOracle};
use fibauto::logic::{self, AutomatonStore, Outcome};
use fibauto::replication::{self, ArrayGuessConfig, SuiteConfig};

#[derive(Parser)]
#[command(name = "fibauto", version, about = "Decide statements about Zeckendorf representations and the Hurt-Sada array")]
struct Cli {
    /// Directory holding stored automata.
    #[arg(long, global = true, env = "FIBAUTO_STORE")]
    store: Option<PathBuf>,
    /// Range for the numeric cross-checks.
    #[arg(long, global = true, env = "FIBAUTO_HORIZON", default_value_t = 10_000)]
    horizon: u64,
    /// Rows of the array the learner may query.
    #[arg(long, global = true, env = "FIBAUTO_ROWS", default_value_t = 291)]
    rows: u64,
    /// Columns of the array the learner may query.
    #[arg(long, global = true, env = "FIBAUTO_COLS", default_value_t = 471)]
    cols: u64,
    /// Extension depths for the learner, e.g. 4,5,6.
    #[arg(long, global = true, env = "FIBAUTO_DEPTHS", value_delimiter = ',')]
    depths: Option<Vec<usize>>,
    /// Longest prefix the learner classifies.
    #[arg(long, global = true, env = "FIBAUTO_PREFIX_LEN")]
    prefix_len: Option<usize>,
    #[arg(long, global = true, env = "FIBAUTO_FORMAT", value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Bfile,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    M,
    Even,
    Phin,
    Add,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExportKind {
    Dot,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run a script of def/eval commands.
    Run { script: PathBuf },
    /// Print the top-left corner of the array.
    Array {
        #[arg(value_name = "ROWS")]
        n_rows: u64,
        #[arg(value_name = "COLS")]
        n_cols: u64,
    },
    /// Print the first COUNT terms of p, s, t, d, dp, b, c, r, h or hp.
    Seq { name: String, count: u64 },
    /// List antidiagonal N as `row column value` lines.
    Diag { n: u64 },
    /// Guess an automaton from its membership oracle.
    Guess {
        #[arg(value_enum)]
        target: Target,
    },
    /// Replicate every result: automata, scripts, tables and closed forms.
    Verify,
    /// Write a stored automaton as DOT or in the text format.
    Export {
        name: String,
        #[arg(value_enum)]
        kind: ExportKind,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

enum Failure {
    /// Bad invocation.
    Usage(String),
    /// Something evaluated to false or failed to compile.
    Logical(String),
    /// A prerequisite automaton could not be built or verified.
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Logical(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Logical(m) | Failure::Internal(m) => m,
        }
    }
}

type CmdResult = Result<ExitCode, Failure>;

impl Cli {
    fn array_config(&self) -> ArrayGuessConfig {
        let mut c = ArrayGuessConfig { rows: self.rows, cols: self.cols, ..Default::default() };
        self.override_guess(&mut c.guess);
        c
    }

    fn override_guess(&self, guess: &mut GuessConfig) {
        if let Some(p) = self.prefix_len {
            guess.prefix_len = p;
        }
        if let Some(d) = &self.depths {
            guess.depths = d.clone();
        }
    }

    fn open_store(&self) -> Result<AutomatonStore, Failure> {
        match &self.store {
            Some(dir) => AutomatonStore::open(dir).map_err(|e| Failure::Usage(e.to_string())),
            None => Ok(AutomatonStore::in_memory()),
        }
    }

    /// Opens the store, adding the base automata and, if asked, the array
    /// automaton when they are missing.
    fn prepared_store(&self, with_array: bool) -> Result<AutomatonStore, Failure> {
        let mut store = self.open_store()?;
        if RESERVED_NAMES.iter().any(|n| !store.contains(n)) {
            let base = arith::standard_base().map_err(|e| Failure::Internal(e.to_string()))?;
            base.install(&mut store).map_err(|e| Failure::Internal(e.to_string()))?;
        }
        if with_array && !store.contains("m") {
            let report = replication::guess_array(&self.array_config())
                .map_err(|e| Failure::Internal(e.to_string()))?;
            if !report.stabilized {
                return Err(Failure::Internal(format!("array automaton did not stabilize\n{report}")));
            }
            eprintln!("guessed m: {} states", report.candidate.state_count());
            replication::install_array(&mut store, report.candidate)
                .map_err(|e| Failure::Internal(e.to_string()))?;
        }
        Ok(store)
    }
}

fn cmd_run(cli: &Cli, path: &PathBuf) -> CmdResult {
    let source = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let mut store = cli.prepared_store(source.contains("$m("))?;
    // A script that does not parse or compile is malformed input, not a false statement.
    let report = logic::run_script(&source, &mut store).map_err(|e| Failure::Usage(e.to_string()))?;
    print!("{report}");
    eprint!("{}", report.timings());
    let any_false = report.commands.iter().any(|c| c.outcome == Outcome::False);
    Ok(if any_false { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn cmd_seq(cli: &Cli, name: &str, count: u64) -> CmdResult {
    if !SEQUENCE_NAMES.contains(&name) {
        return Err(Failure::Usage(format!(
            "unknown sequence `{name}`; expected one of {}",
            SEQUENCE_NAMES.join(", ")
        )));
    }
    let format = match cli.format {
        Format::Table => SequenceFormat::Table,
        Format::Csv => SequenceFormat::Csv,
        Format::Bfile => SequenceFormat::BFile,
        Format::Dot => return Err(Failure::Usage("sequences cannot be written as DOT".into())),
    };
    let values = hurtsada::sequence(name, count).expect("known name");
    print!("{}", format_sequence(name, &values, format));
    Ok(ExitCode::SUCCESS)
}

fn cmd_diag(n: u64) -> CmdResult {
    let mut array = hurtsada::HurtSada::new();
    for (i, v) in array.antidiagonal(n).into_iter().enumerate() {
        println!("{i} {} {v}", n - i as u64);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_guess(cli: &Cli, target: Target) -> CmdResult {
    let learned = |r: Result<GuessReport, String>| r.map_err(Failure::Logical);
    let (name, vars, report) = match target {
        Target::M => {
            let r = learned(replication::guess_array(&cli.array_config()).map_err(|e| e.to_string()))?;
            ("m", vec!["x", "y", "z"], r)
        }
        Target::Even => {
            let mut config = GuessConfig { prefix_len: 6, depths: vec![3, 4, 5] };
            cli.override_guess(&mut config);
            let oracle = ZeckOracle::new(1, |v: &[u64]| v[0].is_multiple_of(2));
            ("even", vec!["n"], learned(learner::guess(&oracle, &config).map_err(|e| e.to_string()))?)
        }
        Target::Phin => {
            let mut config = BaseConfig::default().phin;
            cli.override_guess(&mut config);
            ("phin", vec!["n", "x"], learned(arith::guess_phin(&config).map_err(|e| e.to_string()))?)
        }
        Target::Add => {
            let mut config = BaseConfig::default().adder;
            cli.override_guess(&mut config);
            ("add", vec!["x", "y", "z"], learned(arith::guess_adder(&config).map_err(|e| e.to_string()))?)
        }
    };
    if cli.format == Format::Dot {
        print!("{}", report.candidate.to_dot(name));
    } else {
        print!("{report}");
    }
    if cli.store.is_some() {
        let mut store = cli.open_store()?;
        store
            .insert(name, report.candidate.clone(), vars.into_iter().map(String::from).collect())
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    Ok(if report.stabilized { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_verify(cli: &Cli) -> CmdResult {
    let config = SuiteConfig {
        array: cli.array_config(),
        horizon: cli.horizon,
        antidiagonal_limit: cli.horizon.min(5_000),
        column_limit: cli.horizon.min(2_000),
        ..Default::default()
    };
    let report = replication::replicate(&config);
    print!("{report}");
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else if report.aborted {
        ExitCode::from(3)
    } else {
        ExitCode::from(1)
    })
}

fn cmd_export(cli: &Cli, name: &str, kind: ExportKind, output: Option<&PathBuf>) -> CmdResult {
    let store = cli.prepared_store(name == "m")?;
    let stored = store.get(name).ok_or_else(|| Failure::Usage(format!("unknown automaton `{name}`")))?;
    let text = match kind {
        ExportKind::Dot => stored.dfa.to_dot(name),
        ExportKind::Text => stored.dfa.to_text(),
    };
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { script } => cmd_run(&cli, script),
        Command::Array { n_rows, n_cols } => {
            print!("{}", hurtsada::render_table(*n_rows, *n_cols));
            Ok(ExitCode::SUCCESS)
        }
        Command::Seq { name, count } => cmd_seq(&cli, name, *count),
        Command::Diag { n } => cmd_diag(*n),
        Command::Guess { target } => cmd_guess(&cli, *target),
        Command::Verify => cmd_verify(&cli),
        Command::Export { name, kind, output } => cmd_export(&cli, name, *kind, output.as_ref()),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
