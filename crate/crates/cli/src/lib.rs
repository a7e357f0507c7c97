//! Command-line front end for the `strategem` solver.
//!
//! Exit codes: 0 on success, 1 when a `verify` check fails or the engine
//! reports an error, 2 on usage errors.

use std::ffi::OsString;
use std::fmt::Display;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use strategem::analysis::{
    extract_sequences, phi_bounds, sweep_with, verify_all_with, Report, SweepGrid,
};
use strategem::board::{BoardGame, MAX_SIDE};
use strategem::engine::{GameRules, DEFAULT_DEPTH_LIMIT};
use strategem::heaps::{HeapsConfig, HeapsGame};
use strategem::strategy::{count_strategies, extract_strategy, StrategyNode};
use strategem::{Criterion, Engine, EngineError, EvalOptions, Player};

pub mod render;

use render::{render_csv, render_dot, render_outline, render_pgm};

/// Environment variable overriding the engine depth limit.
pub const DEPTH_LIMIT_ENV: &str = "STRATEGEM_DEPTH_LIMIT";

/// Board sides above this need `--allow-large`.
const DEFAULT_BOARD_CEILING: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "strategem",
    version,
    about = "Solve two-player combinatorial games by backward induction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Value of a single position.
    Solve {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Benny-wins grid of the heaps game with Rebecca moving first.
    Sweep {
        #[arg(long, default_value_t = 100)]
        max: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Per-row bounds a_n, b_n of Benny's winning region.
    Sequences {
        #[arg(long, default_value_t = 60)]
        max: usize,
        /// Compare against the closed form.
        #[arg(long)]
        check: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Extract a strategy subtree.
    Strategy {
        #[command(flatten)]
        game: GameArgs,
        #[command(flatten)]
        goal: GoalArgs,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Count strategy subtrees by exhaustive enumeration.
    CountStrategies {
        #[command(flatten)]
        game: GameArgs,
        #[command(flatten)]
        goal: GoalArgs,
        #[arg(long, default_value_t = 1000)]
        cap: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Run the verification battery.
    Verify {
        #[arg(long, default_value_t = 60)]
        max: usize,
        #[arg(long, default_value_t = 3)]
        board_max: u8,
        #[arg(long)]
        allow_large: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct GameArgs {
    #[arg(long, value_enum)]
    game: GameKind,
    /// Heap sizes, e.g. "2 5".
    #[arg(long)]
    position: Option<String>,
    /// Board side length; boards always start empty.
    #[arg(long)]
    size: Option<u8>,
    /// Player to move: B or R. Defaults to R for heaps and B for boards.
    #[arg(long)]
    mover: Option<Player>,
    #[arg(long)]
    allow_large: bool,
}

#[derive(Debug, Args)]
struct GoalArgs {
    #[arg(long, default_value = "R")]
    target: Player,
    #[arg(long, value_enum, default_value_t = CriterionArg::Winning)]
    criterion: CriterionArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GameKind {
    Heaps,
    Board,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CriterionArg {
    Winning,
    Nonlosing,
}

impl From<CriterionArg> for Criterion {
    fn from(c: CriterionArg) -> Self {
        match c {
            CriterionArg::Winning => Criterion::Winning,
            CriterionArg::Nonlosing => Criterion::NonLosing,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Pgm,
    Json,
    Dot,
    Text,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        Failure::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn require_format(format: Format, allowed: &[Format]) -> Result<(), Failure> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(usage(
            format!("format {format:?} is not available for this command").to_lowercase(),
        ))
    }
}

/// Parses the depth limit override; `None` leaves the default.
pub fn depth_limit_from(value: Option<&str>) -> Result<usize, String> {
    match value {
        None => Ok(DEFAULT_DEPTH_LIMIT),
        Some(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(format!(
                "{DEPTH_LIMIT_ENV} must be a positive integer, got {v:?}"
            )),
        },
    }
}

/// Runs one invocation and returns its exit code. Results go to `out` (or
/// the `--output` file), diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let msg = e.to_string();
                let first = msg.lines().next().unwrap_or("invalid arguments");
                let _ = writeln!(err, "{first}");
                return 2;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    let env = std::env::var(DEPTH_LIMIT_ENV).ok();
    let depth_limit = match depth_limit_from(env.as_deref()) {
        Ok(n) => n,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return 2;
        }
    };
    let options = EvalOptions {
        depth_limit,
        ..EvalOptions::default()
    };
    match execute(cli.command, options, out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn emit(text: &str, output: Option<PathBuf>, out: &mut dyn Write) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| Failure::Runtime(format!("{}: {e}", path.display()))),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

enum Position {
    Heaps(HeapsConfig),
    Board(BoardGame),
}

impl GameArgs {
    fn resolve(&self) -> Result<(Position, Player), Failure> {
        match self.game {
            GameKind::Heaps => {
                if self.size.is_some() {
                    return Err(usage("--size applies to board games only"));
                }
                let text = self
                    .position
                    .as_deref()
                    .ok_or_else(|| usage("heaps games need --position"))?;
                let c: HeapsConfig = text
                    .parse()
                    .map_err(|e: strategem::GameError| usage(e.to_string()))?;
                Ok((Position::Heaps(c), self.mover.unwrap_or(Player::Rebecca)))
            }
            GameKind::Board => {
                if self.position.is_some() {
                    return Err(usage("board games are specified by --size only"));
                }
                let n = self.size.ok_or_else(|| usage("board games need --size"))?;
                if n == 0 || n > MAX_SIDE {
                    return Err(usage(format!(
                        "board size must be between 1 and {MAX_SIDE}"
                    )));
                }
                if n > DEFAULT_BOARD_CEILING && !self.allow_large {
                    return Err(usage(format!(
                        "board size {n} exceeds {DEFAULT_BOARD_CEILING}; pass --allow-large to run it anyway"
                    )));
                }
                let game = BoardGame::new(n).map_err(|e| usage(e.to_string()))?;
                Ok((Position::Board(game), self.mover.unwrap_or(Player::Benny)))
            }
        }
    }
}

#[derive(Serialize)]
struct SolveJson {
    game: &'static str,
    position: String,
    mover: String,
    rebecca_wins: bool,
    benny_nonlosing: bool,
    value: &'static str,
}

fn solve_one<G>(
    game: &'static str,
    rules: &G,
    c: &G::Config,
    mover: Player,
    options: EvalOptions,
) -> Result<SolveJson, Failure>
where
    G: GameRules,
    G::Config: Display,
{
    let mut engine = Engine::with_options(rules, options);
    let rebecca_wins = engine.wins_for(Player::Rebecca, mover, c)?;
    let benny_nonlosing = engine.nonlosing_for(Player::Benny, mover, c)?;
    let value = engine.game_value(mover, c)?;
    Ok(SolveJson {
        game,
        position: c.to_string(),
        mover: mover.to_string(),
        rebecca_wins,
        benny_nonlosing,
        value: value.as_str(),
    })
}

#[derive(Serialize)]
struct StrategyJson {
    mover: String,
    config: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    outcome: Option<&'static str>,
    children: Vec<StrategyJson>,
}

fn strategy_json<G>(node: &StrategyNode<G::Config>, rules: &G) -> StrategyJson
where
    G: GameRules,
    G::Config: Display,
{
    StrategyJson {
        mover: node.mover.to_string(),
        config: node.config.to_string(),
        outcome: if node.children.is_empty() {
            rules
                .leaf_outcome(node.mover, &node.config)
                .ok()
                .map(|o| o.as_str())
        } else {
            None
        },
        children: node
            .children
            .iter()
            .map(|c| strategy_json(c, rules))
            .collect(),
    }
}

fn strategy_text<G>(
    rules: &G,
    c: &G::Config,
    mover: Player,
    goal: &GoalArgs,
    format: Format,
    options: EvalOptions,
) -> Result<String, Failure>
where
    G: GameRules,
    G::Config: Display,
{
    let mut engine = Engine::with_options(rules, options);
    let criterion = Criterion::from(goal.criterion);
    match extract_strategy(&mut engine, goal.target, criterion, mover, c)? {
        None => Ok(match format {
            Format::Json => "null\n".to_string(),
            Format::Dot => format!(
                "digraph strategy {{\n  label=\"no {} strategy for {} from {}:{}\";\n}}\n",
                criterion_name(criterion),
                goal.target,
                mover,
                c
            ),
            _ => format!(
                "no {} strategy for {}\n",
                criterion_name(criterion),
                goal.target
            ),
        }),
        Some(s) => Ok(match format {
            Format::Dot => render_dot(&s, rules),
            Format::Json => to_json(&strategy_json(&s.root, rules)),
            _ => render_outline(&s, rules),
        }),
    }
}

fn criterion_name(c: Criterion) -> &'static str {
    match c {
        Criterion::Winning => "winning",
        Criterion::NonLosing => "non-losing",
    }
}

#[derive(Serialize)]
struct CountJson {
    game: &'static str,
    position: String,
    mover: String,
    target: String,
    criterion: &'static str,
    cap: u64,
    count: u64,
    saturated: bool,
}

#[allow(clippy::too_many_arguments)]
fn count_one<G>(
    game: &'static str,
    rules: &G,
    c: &G::Config,
    mover: Player,
    goal: &GoalArgs,
    cap: u64,
    format: Format,
    options: EvalOptions,
) -> Result<String, Failure>
where
    G: GameRules,
    G::Config: Display,
{
    let criterion = Criterion::from(goal.criterion);
    let count = count_strategies(
        rules,
        goal.target,
        criterion,
        mover,
        c,
        cap,
        options.depth_limit,
    )?;
    let saturated = count >= cap;
    Ok(match format {
        Format::Json => to_json(&CountJson {
            game,
            position: c.to_string(),
            mover: mover.to_string(),
            target: goal.target.to_string(),
            criterion: criterion_name(criterion),
            cap,
            count,
            saturated,
        }),
        _ if saturated => format!("at least {count}\n"),
        _ => format!("{count}\n"),
    })
}

#[derive(Serialize)]
struct SweepJson {
    max: usize,
    /// `cells[k][n]`.
    cells: Vec<Vec<u8>>,
}

fn grid_text(g: &SweepGrid) -> String {
    // n increases upwards, k to the right; '#' marks Benny's wins.
    let mut out = String::new();
    for n in (0..=g.max()).rev() {
        let row: String = (0..=g.max())
            .map(|k| if g.get(k, n) { '#' } else { '.' })
            .collect();
        out.push_str(&row);
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct SequenceRow {
    n: usize,
    a: Option<u64>,
    b: Option<u64>,
    contiguous: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    phi_a: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    phi_b: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matches: Option<bool>,
}

#[derive(Serialize)]
struct CheckJson<'a> {
    name: &'a str,
    passed: bool,
    checked: usize,
    failures: usize,
    counterexamples: &'a [String],
}

#[derive(Serialize)]
struct ReportJson<'a> {
    passed: bool,
    checks: Vec<CheckJson<'a>>,
}

fn report_json(report: &Report) -> String {
    to_json(&ReportJson {
        passed: report.passed(),
        checks: report
            .checks
            .iter()
            .map(|c| CheckJson {
                name: c.name,
                passed: c.passed(),
                checked: c.checked,
                failures: c.failures,
                counterexamples: &c.counterexamples,
            })
            .collect(),
    })
}

fn execute(command: Command, options: EvalOptions, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Solve {
            game,
            format,
            output,
        } => {
            require_format(format, &[Format::Text, Format::Json])?;
            let (pos, mover) = game.resolve()?;
            let result = match &pos {
                Position::Heaps(c) => solve_one("heaps", &HeapsGame, c, mover, options)?,
                Position::Board(g) => solve_one("board", g, &g.start(), mover, options)?,
            };
            let text = match format {
                Format::Json => to_json(&result),
                _ => format!(
                    "game: {}\nposition: {}\nmover: {}\nrebecca_wins: {}\nbenny_nonlosing: {}\nvalue: {}\n",
                    result.game, result.position, result.mover, result.rebecca_wins, result.benny_nonlosing, result.value
                ),
            };
            emit(&text, output, out)?;
        }
        Command::Sweep {
            max,
            format,
            output,
        } => {
            require_format(
                format,
                &[Format::Csv, Format::Pgm, Format::Json, Format::Text],
            )?;
            let rules = HeapsGame;
            let g = sweep_with(&mut Engine::with_options(&rules, options), max)?;
            let text = match format {
                Format::Csv => render_csv(&g),
                Format::Pgm => render_pgm(&g),
                Format::Json => to_json(&SweepJson {
                    max,
                    cells: (0..=max)
                        .map(|k| (0..=max).map(|n| u8::from(g.get(k, n))).collect())
                        .collect(),
                }),
                _ => grid_text(&g),
            };
            emit(&text, output, out)?;
        }
        Command::Sequences {
            max,
            check,
            format,
            output,
        } => {
            require_format(format, &[Format::Text, Format::Json, Format::Csv])?;
            // b_n can reach about 1.62 n, so sweep twice as far to observe it.
            let rules = HeapsGame;
            let g = sweep_with(&mut Engine::with_options(&rules, options), 2 * max)?;
            let seq = extract_sequences(&g);
            let rows: Vec<SequenceRow> = (0..=max)
                .map(|n| {
                    let (pa, pb) = phi_bounds(n as u64);
                    SequenceRow {
                        n,
                        a: seq.a[n],
                        b: seq.b[n],
                        contiguous: seq.contiguous[n],
                        phi_a: check.then_some(pa),
                        phi_b: check.then_some(pb),
                        matches: check.then_some(seq.a[n] == Some(pa) && seq.b[n] == Some(pb)),
                    }
                })
                .collect();
            let opt = |v: Option<u64>| v.map_or("-".to_string(), |x| x.to_string());
            let text = match format {
                Format::Json => to_json(&rows),
                Format::Csv => {
                    let mut s = String::from(if check {
                        "n,a,b,contiguous,phi_a,phi_b,match\n"
                    } else {
                        "n,a,b,contiguous\n"
                    });
                    for r in &rows {
                        s.push_str(&format!(
                            "{},{},{},{}",
                            r.n,
                            opt(r.a),
                            opt(r.b),
                            u8::from(r.contiguous)
                        ));
                        if let (Some(pa), Some(pb), Some(m)) = (r.phi_a, r.phi_b, r.matches) {
                            s.push_str(&format!(",{pa},{pb},{}", u8::from(m)));
                        }
                        s.push('\n');
                    }
                    s
                }
                _ => {
                    let mut s = String::from(if check {
                        "n\ta_n\tb_n\tphi_a\tphi_b\tmatch\n"
                    } else {
                        "n\ta_n\tb_n\n"
                    });
                    for r in &rows {
                        s.push_str(&format!("{}\t{}\t{}", r.n, opt(r.a), opt(r.b)));
                        if let (Some(pa), Some(pb), Some(m)) = (r.phi_a, r.phi_b, r.matches) {
                            s.push_str(&format!("\t{pa}\t{pb}\t{}", if m { "yes" } else { "NO" }));
                        }
                        s.push('\n');
                    }
                    s
                }
            };
            emit(&text, output, out)?;
            if check && rows.iter().any(|r| r.matches == Some(false)) {
                return Ok(1);
            }
        }
        Command::Strategy {
            game,
            goal,
            format,
            output,
        } => {
            require_format(format, &[Format::Dot, Format::Text, Format::Json])?;
            let (pos, mover) = game.resolve()?;
            let text = match &pos {
                Position::Heaps(c) => strategy_text(&HeapsGame, c, mover, &goal, format, options)?,
                Position::Board(g) => strategy_text(g, &g.start(), mover, &goal, format, options)?,
            };
            emit(&text, output, out)?;
        }
        Command::CountStrategies {
            game,
            goal,
            cap,
            format,
            output,
        } => {
            require_format(format, &[Format::Text, Format::Json])?;
            if cap == 0 {
                return Err(usage("--cap must be at least 1"));
            }
            let (pos, mover) = game.resolve()?;
            let text = match &pos {
                Position::Heaps(c) => {
                    count_one("heaps", &HeapsGame, c, mover, &goal, cap, format, options)?
                }
                Position::Board(g) => {
                    count_one("board", g, &g.start(), mover, &goal, cap, format, options)?
                }
            };
            emit(&text, output, out)?;
        }
        Command::Verify {
            max,
            board_max,
            allow_large,
            format,
            output,
        } => {
            require_format(format, &[Format::Text, Format::Json])?;
            if max < 1 {
                return Err(usage("--max must be at least 1"));
            }
            if board_max > MAX_SIDE {
                return Err(usage(format!("--board-max must be at most {MAX_SIDE}")));
            }
            if board_max > DEFAULT_BOARD_CEILING && !allow_large {
                return Err(usage(format!(
                    "--board-max {board_max} exceeds {DEFAULT_BOARD_CEILING}; pass --allow-large to run it anyway"
                )));
            }
            let report = verify_all_with(max, board_max, options)?;
            let text = match format {
                Format::Json => report_json(&report),
                _ => report.to_string(),
            };
            emit(&text, output, out)?;
            if !report.passed() {
                return Ok(1);
            }
        }
    }
    Ok(0)
}
