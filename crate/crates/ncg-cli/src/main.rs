//! `ncg` — command-line driver for the network creation game engine.
//!
//! Machine output (JSON or CSV) goes to stdout or `--out`; human summaries
//! go to stderr so pipelines stay clean. Exit codes: 0 success, 1 malformed
//! input, 2 precondition or limit refusal.

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ncg::{
    best_response_dynamics, best_response_exact, build_graph, enumerate_equilibria, is_nash,
    layer_partition, lemma_audit, make_clique, make_clique_with_leaves, make_random_profile,
    make_star, poa_lower_bound_asymptote, poa_sweep, poa_upper_bound_formula,
    price_of_anarchy_exact, social_cost, sweep_to_csv, CliqueLeavesSpec, EquilibriumMode,
    ExactScalar, GameParams, ProfileDocument, Schedule, StrategyProfile, DEFAULT_ENUMERATION_LIMIT,
    DEFAULT_EXHAUSTIVE_LIMIT,
};

#[derive(Parser)]
#[command(
    name = "ncg",
    version,
    about = "Exact network creation game engine: costs, equilibria, price of anarchy"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Weak,
    Strict,
}

impl From<ModeArg> for EquilibriumMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Weak => EquilibriumMode::Weak,
            ModeArg::Strict => EquilibriumMode::Strict,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScheduleArg {
    RoundRobin,
    Random,
}

#[derive(Args)]
struct InOut {
    /// Input profile JSON path (stdin when omitted)
    #[arg(long = "in", value_name = "PATH")]
    input: Option<String>,
    /// Output path (stdout when omitted)
    #[arg(long, value_name = "PATH")]
    out: Option<String>,
    /// Override the edge price from the input document
    #[arg(long, value_parser = parse_alpha)]
    alpha: Option<ExactScalar>,
}

fn parse_alpha(s: &str) -> Result<ExactScalar, String> {
    s.parse().map_err(|e| format!("{e}"))
}

#[derive(Subcommand)]
enum Command {
    /// Emit a named profile as canonical JSON
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Exact per-vertex and social cost of a profile
    Cost {
        #[command(flatten)]
        io: InOut,
    },
    /// Exhaustive weak/strict Nash verification with a witness
    CheckNash {
        #[command(flatten)]
        io: InOut,
        #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_LIMIT)]
        limit_exhaustive: usize,
    },
    /// Exhaustive best response of one vertex
    BestResponse {
        #[command(flatten)]
        io: InOut,
        #[arg(long)]
        vertex: usize,
        #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_LIMIT)]
        limit_exhaustive: usize,
    },
    /// Iterated best-response dynamics to a fixed point
    Dynamics {
        #[command(flatten)]
        io: InOut,
        #[arg(long, value_enum, default_value = "round-robin")]
        schedule: ScheduleArg,
        /// Seed for the random schedule
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100)]
        max_rounds: usize,
        #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_LIMIT)]
        limit_exhaustive: usize,
    },
    /// Distance layers around a root vertex
    Partition {
        #[command(flatten)]
        io: InOut,
        #[arg(long)]
        root: usize,
    },
    /// Structural audit of a profile (per-root inequality checks)
    Audit {
        #[command(flatten)]
        io: InOut,
        /// Certify the profile as weak Nash before auditing
        #[arg(long)]
        require_nash: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_LIMIT)]
        limit_exhaustive: usize,
    },
    /// Enumerate all weak or strict equilibria at tiny n
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_alpha)]
        alpha: ExactScalar,
        #[arg(long, value_enum, default_value = "weak")]
        mode: ModeArg,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
        limit_enumeration: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long, value_name = "PATH")]
        out: Option<String>,
    },
    /// Exact price of anarchy by exhaustive scan
    Poa {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_alpha)]
        alpha: ExactScalar,
        #[arg(long, value_enum, default_value = "weak")]
        mode: ModeArg,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
        limit_enumeration: usize,
        #[arg(long, value_name = "PATH")]
        out: Option<String>,
    },
    /// Price-of-anarchy grid, one CSV row per (n, alpha)
    Sweep {
        /// Comma-separated vertex counts, e.g. 3,4,5
        #[arg(long, value_delimiter = ',')]
        n_list: Vec<usize>,
        /// Comma-separated edge prices, e.g. 1/2,1,3/2
        #[arg(long, value_delimiter = ',', value_parser = parse_alpha)]
        alpha_list: Vec<ExactScalar>,
        #[arg(long, value_enum, default_value = "weak")]
        mode: ModeArg,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
        limit_enumeration: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long, value_name = "PATH")]
        out: Option<String>,
    },
    /// Closed-form price-of-anarchy bounds
    Bounds {
        #[command(subcommand)]
        which: BoundKind,
    },
    /// Render a profile as a DOT digraph (buyer at the tail)
    ExportDot {
        #[command(flatten)]
        io: InOut,
    },
}

#[derive(Subcommand)]
enum ConstructKind {
    /// Vertex 0 buys an edge to every other vertex
    Star {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_alpha)]
        alpha: ExactScalar,
        #[arg(long, value_name = "PATH")]
        out: Option<String>,
    },
    /// Every pair bought once, lower id pays
    Clique {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_alpha)]
        alpha: ExactScalar,
        #[arg(long, value_name = "PATH")]
        out: Option<String>,
    },
    /// k-clique whose vertices each buy alpha-1 pendant leaves (n = k*alpha)
    CliqueLeaves {
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = parse_alpha)]
        alpha: ExactScalar,
        #[arg(long, value_name = "PATH")]
        out: Option<String>,
    },
    /// Seeded random profile: each pair kept with probability edge-prob
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_alpha)]
        alpha: ExactScalar,
        #[arg(long)]
        edge_prob: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_name = "PATH")]
        out: Option<String>,
    },
}

#[derive(Subcommand)]
enum BoundKind {
    /// Exact asymptote for integer alpha >= 2
    Lower {
        #[arg(long, value_parser = parse_alpha)]
        alpha: ExactScalar,
        #[arg(long, value_name = "PATH")]
        out: Option<String>,
    },
    /// Floating-point bound for non-integral alpha > 2, n > alpha^3
    Upper {
        #[arg(long, value_parser = parse_alpha)]
        alpha: ExactScalar,
        #[arg(long)]
        n: usize,
        #[arg(long, value_name = "PATH")]
        out: Option<String>,
    },
}

/// Anything the driver can fail with, sorted by exit code.
enum CliError {
    /// Exit 1: malformed input (bad JSON, bad flags, bad ids).
    Malformed(String),
    /// Exit 2: a named precondition or limit refused the request.
    Refused(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Malformed(_) => 1,
            CliError::Refused(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Malformed(m) | CliError::Refused(m) => m,
        }
    }
}

impl From<ncg::Error> for CliError {
    fn from(e: ncg::Error) -> Self {
        match e {
            ncg::Error::InvalidGame(_) | ncg::Error::InvalidProfile(_) => {
                CliError::Malformed(e.to_string())
            }
            _ => CliError::Refused(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Malformed(format!("i/o error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    return ExitCode::SUCCESS;
                }
                _ => {
                    eprint!("{e}");
                    return ExitCode::from(1);
                }
            }
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ncg: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn read_input(io: &InOut) -> Result<(GameParams, StrategyProfile), CliError> {
    let text = match &io.input {
        Some(path) => std::fs::read_to_string(path)?,
        None => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            buf
        }
    };
    let doc = ProfileDocument::from_json(&text)?;
    let (game, profile) = doc.into_parts()?;
    let game = match &io.alpha {
        Some(a) => GameParams::new(game.n(), a.clone())?,
        None => game,
    };
    Ok((game, profile))
}

fn write_output(out: &Option<String>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn to_pretty(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn in_pool<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> Result<T, CliError> + Send,
) -> Result<T, CliError> {
    match threads {
        None => f(),
        Some(t) => {
            if t == 0 {
                return Err(CliError::Malformed("--threads must be at least 1".into()));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| CliError::Refused(format!("thread pool: {e}")))?;
            pool.install(f)
        }
    }
}

fn emit_profile(
    game: &GameParams,
    profile: &StrategyProfile,
    out: &Option<String>,
) -> Result<(), CliError> {
    let doc = ProfileDocument::new(game, profile);
    write_output(out, &doc.to_json())?;
    eprintln!(
        "constructed profile: n = {}, alpha = {}, purchases = {}",
        game.n(),
        game.alpha(),
        profile.purchase_count()
    );
    Ok(())
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Construct { kind } => match kind {
            ConstructKind::Star { n, alpha, out } => {
                let game = GameParams::new(n, alpha)?;
                emit_profile(&game, &make_star(n), &out)
            }
            ConstructKind::Clique { n, alpha, out } => {
                let game = GameParams::new(n, alpha)?;
                emit_profile(&game, &make_clique(n), &out)
            }
            ConstructKind::CliqueLeaves { k, alpha, out } => {
                if !alpha.is_integer() {
                    return Err(CliError::Refused(format!(
                        "invalid construction: clique-leaves needs an integer alpha >= 2, got {alpha}"
                    )));
                }
                let a = u64::try_from(alpha.floor()).map_err(|_| {
                    CliError::Refused(format!(
                        "invalid construction: alpha out of range, got {alpha}"
                    ))
                })?;
                let spec = CliqueLeavesSpec::new(k, a)?;
                let game = GameParams::new(spec.n(), alpha)?;
                emit_profile(&game, &make_clique_with_leaves(spec), &out)
            }
            ConstructKind::Random {
                n,
                alpha,
                edge_prob,
                seed,
                out,
            } => {
                if !(0.0..=1.0).contains(&edge_prob) {
                    return Err(CliError::Malformed(format!(
                        "--edge-prob must lie in [0, 1], got {edge_prob}"
                    )));
                }
                let game = GameParams::new(n, alpha)?;
                emit_profile(&game, &make_random_profile(n, edge_prob, seed), &out)
            }
        },

        Command::Cost { io } => {
            let (game, profile) = read_input(&io)?;
            let report = social_cost(&game, &profile);
            eprintln!(
                "social cost = {} (connected: {})",
                report.social_cost, report.connected
            );
            write_output(&io.out, &to_pretty(&report))
        }

        Command::CheckNash {
            io,
            limit_exhaustive,
        } => {
            let (game, profile) = read_input(&io)?;
            let verdict = is_nash(&game, &profile, limit_exhaustive)?;
            eprintln!(
                "weak Nash: {}; strict Nash: {}",
                verdict.is_weak_nash, verdict.is_strict_nash
            );
            write_output(&io.out, &to_pretty(&verdict))
        }

        Command::BestResponse {
            io,
            vertex,
            limit_exhaustive,
        } => {
            let (game, profile) = read_input(&io)?;
            if vertex >= game.n() {
                return Err(CliError::Malformed(format!(
                    "--vertex {vertex} out of range for n = {}",
                    game.n()
                )));
            }
            let (cost, strategy) = best_response_exact(&game, &profile, vertex, limit_exhaustive)?;
            let strategy: Vec<usize> = strategy.into_iter().collect();
            eprintln!("best response of {vertex}: cost {cost}, buy {strategy:?}");
            write_output(
                &io.out,
                &to_pretty(&json!({
                    "vertex": vertex,
                    "cost": cost.to_string(),
                    "strategy": strategy,
                })),
            )
        }

        Command::Dynamics {
            io,
            schedule,
            seed,
            max_rounds,
            limit_exhaustive,
        } => {
            let (game, profile) = read_input(&io)?;
            let schedule = match schedule {
                ScheduleArg::RoundRobin => Schedule::RoundRobin,
                ScheduleArg::Random => match seed {
                    Some(seed) => Schedule::Random { seed },
                    None => {
                        return Err(CliError::Malformed(
                            "--schedule random requires an explicit --seed".into(),
                        ))
                    }
                },
            };
            let run =
                best_response_dynamics(&game, profile, schedule, max_rounds, limit_exhaustive)?;
            eprintln!(
                "dynamics: fixed point = {}, rounds = {}, trajectory length = {}",
                run.fixed_point,
                run.rounds,
                run.trajectory.len()
            );
            let trajectory: Vec<ProfileDocument> = run
                .trajectory
                .iter()
                .map(|p| ProfileDocument::new(&game, p))
                .collect();
            write_output(
                &io.out,
                &to_pretty(&json!({
                    "fixed_point": run.fixed_point,
                    "rounds": run.rounds,
                    "final": trajectory.last(),
                    "trajectory": trajectory,
                })),
            )
        }

        Command::Partition { io, root } => {
            let (game, profile) = read_input(&io)?;
            if root >= game.n() {
                return Err(CliError::Malformed(format!(
                    "--root {root} out of range for n = {}",
                    game.n()
                )));
            }
            let graph = build_graph(&profile);
            let partition = layer_partition(&graph, root)?;
            eprintln!("partition from {root}: {} layers", partition.depth());
            write_output(&io.out, &to_pretty(&partition))
        }

        Command::Audit {
            io,
            require_nash,
            format,
            limit_exhaustive,
        } => {
            let (game, profile) = read_input(&io)?;
            let report = lemma_audit(&game, &profile, require_nash, limit_exhaustive)?;
            eprintln!(
                "audit: all applicable checks passed = {}",
                report.all_passed()
            );
            let rendered = match format {
                Format::Json => to_pretty(&report),
                Format::Csv => report.to_csv(),
            };
            write_output(&io.out, &rendered)
        }

        Command::Enumerate {
            n,
            alpha,
            mode,
            threads,
            limit_enumeration,
            format,
            out,
        } => {
            let game = GameParams::new(n, alpha)?;
            let mode = EquilibriumMode::from(mode);
            let found = in_pool(threads, || {
                enumerate_equilibria(&game, mode, limit_enumeration).map_err(CliError::from)
            })?;
            eprintln!("{} {} equilibria at n = {}", found.len(), mode, n);
            let rendered = match format {
                Format::Json => {
                    let rows: Vec<serde_json::Value> = found
                        .iter()
                        .map(|(code, report)| {
                            json!({
                                "code": code.0,
                                "social_cost": report.social_cost.to_string(),
                            })
                        })
                        .collect();
                    to_pretty(&rows)
                }
                Format::Csv => {
                    let mut s = String::from("code,social_cost\n");
                    for (code, report) in &found {
                        s.push_str(&format!("{},{}\n", code, report.social_cost));
                    }
                    s
                }
            };
            write_output(&out, &rendered)
        }

        Command::Poa {
            n,
            alpha,
            mode,
            threads,
            limit_enumeration,
            out,
        } => {
            let game = GameParams::new(n, alpha)?;
            let mode = EquilibriumMode::from(mode);
            let result = in_pool(threads, || {
                price_of_anarchy_exact(&game, mode, limit_enumeration).map_err(CliError::from)
            })?;
            eprintln!(
                "poa = {} ({} equilibria, optimum {}, worst {})",
                result.poa, result.equilibrium_count, result.optimum, result.worst_equilibrium
            );
            write_output(&out, &to_pretty(&result))
        }

        Command::Sweep {
            n_list,
            alpha_list,
            mode,
            threads,
            limit_enumeration,
            format,
            out,
        } => {
            let mode = EquilibriumMode::from(mode);
            let rows = in_pool(threads, || {
                poa_sweep(&n_list, &alpha_list, mode, limit_enumeration).map_err(CliError::from)
            })?;
            eprintln!("sweep: {} rows", rows.len());
            let rendered = match format {
                Format::Csv => sweep_to_csv(&rows),
                Format::Json => to_pretty(&rows),
            };
            write_output(&out, &rendered)
        }

        Command::Bounds { which } => match which {
            BoundKind::Lower { alpha, out } => {
                let bound = poa_lower_bound_asymptote(&alpha)?;
                eprintln!("lower bound asymptote at alpha = {alpha}: {bound}");
                write_output(
                    &out,
                    &to_pretty(&json!({
                        "kind": "lower",
                        "alpha": alpha.to_string(),
                        "bound": bound.to_string(),
                    })),
                )
            }
            BoundKind::Upper { alpha, n, out } => {
                let bound = poa_upper_bound_formula(&alpha, n)?;
                eprintln!("upper bound at alpha = {alpha}, n = {n}: {bound}");
                write_output(
                    &out,
                    &to_pretty(&json!({
                        "kind": "upper",
                        "alpha": alpha.to_string(),
                        "n": n,
                        "bound": bound,
                    })),
                )
            }
        },

        Command::ExportDot { io } => {
            let (game, profile) = read_input(&io)?;
            write_output(&io.out, &to_dot(&game, &profile))
        }
    }
}

/// DOT rendering: every vertex declared, every purchase as an arc with the
/// buyer at the tail. Doubly-bought pairs render as two opposite arcs.
fn to_dot(game: &GameParams, profile: &StrategyProfile) -> String {
    let mut s = String::new();
    s.push_str(&format!("// n = {}, alpha = {}\n", game.n(), game.alpha()));
    s.push_str("digraph profile {\n");
    for v in 0..game.n() {
        s.push_str(&format!("  {v};\n"));
    }
    for (v, set) in profile.iter() {
        for &w in set {
            s.push_str(&format!("  {v} -> {w};\n"));
        }
    }
    s.push_str("}\n");
    s
}
