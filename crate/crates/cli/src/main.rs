use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ome_cli::config::{file_tokens, parse_config};
use ome_cli::format::{parse, MatroidFile};
use ome_cli::run::{self, EmbedClass, EmbedOptions, Which};
use ome_cli::CliError;
use ome_core::approx::{complete_binary, SetSampler};
use ome_core::matroid::AxiomReport;
use ome_core::RankOracle;

/// Online matroid embeddings: checks, embeddings, secretary simulations,
/// distortion estimates and impossibility searches.
#[derive(Parser)]
#[command(name = "ome", version)]
struct Cli {
    /// Seed for every random choice; trial t uses stream seed XOR t.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for trial loops; results do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Write the main artifact here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a matroid file and check the rank axioms exhaustively (n <= 14).
    Check {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Stream a matroid through an online embedding and print the record.
    Embed {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        class: EmbedClass,
        /// Arrival order, comma separated; defaults to the file's `order`
        /// line, then to 0..n.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
        /// Host dimension for binary and free classes (default: n).
        #[arg(long)]
        dim: Option<usize>,
        /// Copies for copy-lifted classes (default: n).
        #[arg(long)]
        copies: Option<usize>,
        /// Compose with a uniformly random host automorphism.
        #[arg(long)]
        randomized: bool,
        /// Check the rank axioms of the input first.
        #[arg(long)]
        verify: bool,
    },
    /// Secretary simulation through the online embedding; writes
    /// `trial,opt,alg,ratio,flagged` CSV and a summary on stderr.
    MspSim {
        /// File of key=value settings, applied before the command-line ones.
        #[arg(long)]
        config: Option<PathBuf>,
        /// family=rank1|binary|free n= epsilon= [trials= seed= algorithm=dynkin|threshold-greedy
        /// weights=uniform|exp|adversarial-file:<path> k= d= k_cap= mode=full|sparse]
        settings: Vec<String>,
    },
    /// Estimate the distortion of the random-basis embedding into the free
    /// matroid; writes `set_id,rank_M,mean_rank_Fr,lower_bound,beta_hat` CSV.
    Distortion {
        /// A loop-free binary matroid file.
        #[arg(long = "in", conflicts_with = "complete", required_unless_present = "complete")]
        input: Option<PathBuf>,
        /// Use all nonzero vectors of F_2^n instead of a file.
        #[arg(long)]
        complete: Option<usize>,
        /// Dimension of the binary host (default: the rank).
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 20)]
        subsets: usize,
        #[arg(long, default_value_t = 20)]
        flats: usize,
        /// Leave the full ground set out of the sampled sets.
        #[arg(long)]
        no_full: bool,
    },
    /// Verify the impossibility fixtures and run a bounded host search.
    Impossible {
        #[arg(long, value_enum)]
        which: Which,
        /// Prefixes for rank3 (default 100), vertices for graphic (default
        /// 6), ground-set size for laminar (default 6).
        #[arg(long)]
        bound: Option<usize>,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn load(path: &Path) -> Result<MatroidFile, CliError> {
    Ok(parse(&read(path)?)?)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

fn require_axioms(m: &dyn RankOracle) -> Result<(), CliError> {
    match run::check(m)? {
        Some(AxiomReport::Violated { axiom, sets, element }) => {
            Err(CliError::Alarm(format!("rank axiom {axiom:?} fails on {sets:?} (element {element:?})")))
        }
        _ => Ok(()),
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Check { input } => {
            let f = load(&input)?;
            let m = &f.matroid;
            let axioms = match run::check(m)? {
                None => "skipped (more than 14 elements)".to_string(),
                Some(AxiomReport::Ok) => "ok".to_string(),
                Some(r) => format!("violated {r:?}"),
            };
            let report = format!(
                "matroid {}\ntype {}\nelements {}\nrank {}\naxioms {axioms}\n",
                f.name,
                m.kind(),
                m.len(),
                m.full_rank()
            );
            emit(&cli.out, &report)?;
            require_axioms(m)
        }
        Cmd::Embed { input, class, order, dim, copies, randomized, verify } => {
            let f = load(&input)?;
            if verify {
                require_axioms(&f.matroid)?;
            }
            let n = f.matroid.len();
            let order = order.or(f.order).unwrap_or_else(|| (0..n).collect());
            let mut seen = vec![false; n];
            for &x in &order {
                if x >= n || std::mem::replace(&mut seen[x], true) {
                    return Err(CliError::Usage(format!("order entry {x} is repeated or not below {n}")));
                }
            }
            let opts = EmbedOptions { class, dim, copies, randomized, seed: cli.seed };
            let e = run::embed(&f.matroid, &order, &opts)?;
            if !e.verified {
                eprintln!("note: more than 14 arrivals, exhaustive verification skipped");
            }
            emit(&cli.out, &e.record)
        }
        Cmd::MspSim { config, settings } => {
            let mut tokens = match &config {
                Some(path) => file_tokens(&read(path)?),
                None => Vec::new(),
            };
            tokens.extend(settings);
            let cfg = parse_config(tokens.iter().map(String::as_str), cli.seed)?;
            let (res, rep) = run::simulate(&cfg, cli.threads)?;
            emit(&cli.out, &run::trials_csv(&rep.trials))?;
            eprint!("{}", run::simulation_summary(&cfg, &res, &rep));
            Ok(())
        }
        Cmd::Distortion { input, complete, dim, trials, subsets, flats, no_full } => {
            let sampler = SetSampler { full: !no_full, random_subsets: subsets, random_flats: flats };
            let est = match (input, complete) {
                (Some(path), _) => {
                    let f = load(&path)?;
                    let dim = dim.unwrap_or_else(|| f.matroid.full_rank().max(1));
                    run::distortion(&f.matroid, dim, sampler, trials, cli.seed)?
                }
                (None, Some(n)) if (1..=16).contains(&n) => {
                    let m = complete_binary(n);
                    run::distortion(&m, dim.unwrap_or(n), sampler, trials, cli.seed)?
                }
                _ => return Err(CliError::Usage("--complete takes 1..=16".into())),
            };
            emit(&cli.out, &run::distortion_csv(&est))?;
            eprintln!("beta_hat over the sampled sets: {}", est.beta_hat);
            Ok(())
        }
        Cmd::Impossible { which, bound } => match run::impossible(which, bound, cli.seed) {
            Ok(report) => emit(&cli.out, &report),
            Err(CliError::Alarm(report)) => {
                emit(&cli.out, &report)?;
                Err(CliError::Alarm("impossibility check failed".into()))
            }
            Err(e) => Err(e),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
