//! Command-line front end.
//!
//! Exit codes: 0 found / accepted / ok, 1 none found / rejected, 2 invalid
//! game or strategy file, 3 budget exceeded, 64 usage error, 66 I/O error.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::arena::{product_moves, product_step, Arena};
use crate::error::Error;
use crate::network::{validate_network, Constraints, GameFile, GameNetwork};
use crate::solver::oracle::{oracle_find, oracle_find_general, OracleLimits, OracleSolution};
use crate::solver::{Budget, OutcomeFile, ProfileCheck, Rejection, Solution, Solver, Witness, WitnessFile};
use crate::strategy::{Profile, ProfileState};
use crate::symmetry::desymmetrize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NONE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 66;

#[derive(Debug, Parser)]
#[command(name = "symnash", version, about = "Symmetric Nash equilibria in game networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a game file is well formed.
    Validate { game: PathBuf },
    /// Search for a symmetric equilibrium.
    Find(SearchArgs),
    /// Search for an arbitrary (not necessarily symmetric) equilibrium.
    General(SearchArgs),
    /// Symmetric search by brute force; tiny instances only.
    Oracle(OracleArgs),
    /// Verify a witness file against a game.
    Check {
        game: PathBuf,
        strategy: PathBuf,
        #[command(flatten)]
        constraints: ConstraintArgs,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Write the symmetric game whose equilibria match the input's arbitrary ones.
    Desym {
        game: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Write the game graph, a deviation graph or an objective automaton in DOT.
    ExportDot {
        game: PathBuf,
        /// Witness whose profile fixes the other players (needs --deviator).
        strategy: Option<PathBuf>,
        #[arg(long, requires = "strategy")]
        deviator: Option<usize>,
        /// Emit the automaton for this player's objective instead.
        #[arg(long, conflicts_with = "deviator")]
        automaton: Option<usize>,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    pub game: PathBuf,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub memory: u32,
    #[command(flatten)]
    pub constraints: ConstraintArgs,
    #[command(flatten)]
    pub budget: BudgetArgs,
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub search: SearchArgs,
    /// Enumerate one strategy per player instead of a symmetric profile.
    #[arg(long)]
    pub general: bool,
}

#[derive(Debug, Args)]
pub struct ConstraintArgs {
    /// Players that must win; overrides the game file. Empty for none.
    #[arg(long, value_delimiter = ',', num_args = 0..=1)]
    pub winners: Option<Vec<usize>>,
    /// Players that must lose; overrides the game file.
    #[arg(long, value_delimiter = ',', num_args = 0..=1)]
    pub losers: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget_nodes: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget_candidates: Option<u64>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        let d = Budget::default();
        Budget {
            candidates: self.budget_candidates.unwrap_or(d.candidates),
            nodes: self.budget_nodes.map_or(d.nodes, |n| n as usize),
            jobs: self
                .jobs
                .map_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()), |j| j as usize),
        }
    }
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded(_) | Error::OracleTooLarge(_) => EXIT_BUDGET,
            _ => EXIT_INVALID,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, msg: msg.into() }
}

fn io_error(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: EXIT_IO, msg: format!("{}: {e}", path.display()) }
}

type Outcome = Result<i32, Failure>;

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn note(&mut self, msg: &str) {
        let _ = writeln!(self.err, "{msg}");
    }

    /// Writes `text` to `path`, or to standard output.
    fn emit(&mut self, path: Option<&Path>, text: &str) -> Result<(), Failure> {
        match path {
            Some(p) => std::fs::write(p, text).map_err(|e| io_error(p, e)),
            None => self.out.write_all(text.as_bytes()).map_err(|e| io_error(Path::new("<stdout>"), e)),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| io_error(path, e))
}

fn load_game(path: &Path) -> Result<GameNetwork, Failure> {
    let text = read(path)?;
    Ok(validate_network(&GameFile::from_json(&text)?)?)
}

fn constraints(g: &GameNetwork, args: &ConstraintArgs) -> Result<Constraints, Failure> {
    let mut c = g.constraints();
    if let Some(w) = &args.winners {
        c.winners = w.iter().copied().collect();
    }
    if let Some(l) = &args.losers {
        c.losers = l.iter().copied().collect();
    }
    match c.validate(g.n()) {
        Ok(()) => Ok(c),
        Err(Error::IndexOutOfRange(k)) => Err(usage(format!("player {k} does not exist"))),
        Err(Error::ConflictingConstraints) => Err(usage("--winners and --losers overlap")),
        Err(e) => Err(e.into()),
    }
}

fn set(s: &BTreeSet<usize>) -> String {
    let items: Vec<String> = s.iter().map(usize::to_string).collect();
    format!("{{{}}}", items.join(","))
}

fn report(io: &mut Io<'_>, found: Option<(WitnessFile, String)>, output: Option<&Path>) -> Outcome {
    match found {
        Some((file, summary)) => {
            io.emit(output, &file.to_json())?;
            io.note(&summary);
            Ok(EXIT_OK)
        }
        None => {
            io.note("no equilibrium");
            Ok(EXIT_NONE)
        }
    }
}

fn summary(g: &GameNetwork, sol: &Solution) -> String {
    let w = &sol.verdict.outcome;
    let ar = g.arena();
    let show = |ts: &[crate::arena::Configuration]| {
        ts.iter().map(|t| t.display(ar).to_string()).collect::<Vec<_>>().join(" ")
    };
    format!(
        "equilibrium: winners {}, outcome {} [{}]^w",
        set(&sol.verdict.winners),
        show(&w.prefix),
        show(&w.cycle)
    )
}

fn search(io: &mut Io<'_>, args: &SearchArgs, general: bool) -> Outcome {
    let g = load_game(&args.game)?;
    let cons = constraints(&g, &args.constraints)?;
    let solver = Solver::new(&g, args.budget.budget())?;
    let found = if general {
        solver.find_ne_general(&cons, args.memory)?
    } else {
        solver.find_symmetric_ne(&cons, args.memory)?
    };
    let found = found.map(|sol| (WitnessFile::from_solution(&sol, g.arena()), summary(&g, &sol)));
    report(io, found, args.output.as_deref())
}

fn oracle(io: &mut Io<'_>, args: &OracleArgs) -> Outcome {
    let a = &args.search;
    let g = load_game(&a.game)?;
    let cons = constraints(&g, &a.constraints)?;
    let d = OracleLimits::default();
    let limits = OracleLimits {
        max_candidates: a.budget.budget_candidates.unwrap_or(d.max_candidates),
        max_nodes: a.budget.budget_nodes.map_or(d.max_nodes, |n| n as usize),
    };
    let found = if args.general {
        oracle_find_general(&g, &cons, a.memory, limits)?
    } else {
        oracle_find(&g, &cons, a.memory, limits)?
    };
    let found = found.map(|sol| oracle_file(&g, sol, args.general));
    report(io, found, a.output.as_deref())
}

fn oracle_file(g: &GameNetwork, sol: OracleSolution, general: bool) -> (WitnessFile, String) {
    let summary = format!("equilibrium: winners {} (candidate #{})", set(&sol.winners), sol.index);
    let outcome = Some(OutcomeFile::from_lasso(&sol.outcome, g.arena()));
    let winners = Some(sol.winners.into_iter().collect());
    let mut strategies = sol.strategies;
    let file = if general {
        WitnessFile { strategies: Some(strategies), winners, outcome, ..WitnessFile::default() }
    } else {
        let s = strategies.remove(0);
        WitnessFile {
            memory: Some(s.memory),
            initial: Some(s.initial),
            table: Some(s.table),
            winners,
            outcome,
            ..WitnessFile::default()
        }
    };
    (file, summary)
}

fn actions(ar: &Arena, acts: &[u32]) -> String {
    acts.iter().map(|&a| ar.action_name(a)).collect::<Vec<_>>().join(" ")
}

fn check(
    io: &mut Io<'_>,
    game: &Path,
    strategy: &Path,
    cons: &ConstraintArgs,
    budget: &BudgetArgs,
) -> Outcome {
    let g = load_game(game)?;
    let cons = constraints(&g, cons)?;
    let file = WitnessFile::from_json(&read(strategy)?)?;
    let solver = Solver::new(&g, budget.budget())?;
    let witness = file.to_witness(&solver)?;
    let ar = g.arena();
    match solver.check_witness(&witness, &cons)? {
        ProfileCheck::Accept { verdict, no_deviation } => {
            if let Some(recorded) = &file.winners {
                if recorded.iter().copied().collect::<BTreeSet<_>>() != verdict.winners {
                    io.note(&format!("reject: recorded winners differ from {}", set(&verdict.winners)));
                    return Ok(EXIT_NONE);
                }
            }
            if let Some(recorded) = &file.outcome {
                if recorded.to_lasso(ar)? != verdict.outcome {
                    io.note("reject: recorded outcome differs from the profile's");
                    return Ok(EXIT_NONE);
                }
            }
            let losers: BTreeSet<usize> = no_deviation.into_iter().collect();
            io.note(&format!("accept: winners {}, no deviation for {}", set(&verdict.winners), set(&losers)));
            Ok(EXIT_OK)
        }
        ProfileCheck::Reject { verdict, reason } => {
            let msg = match reason {
                Rejection::MissingWinners(p) => format!(
                    "reject: required winners {} lose (winners {})",
                    set(&p.into_iter().collect()),
                    set(&verdict.winners)
                ),
                Rejection::LosersWin(p) => {
                    format!("reject: required losers {} win", set(&p.into_iter().collect()))
                }
                Rejection::Deviation(w) => {
                    let show = |ts: &[crate::arena::Configuration]| {
                        ts.iter().map(|t| t.display(ar).to_string()).collect::<Vec<_>>().join(" ")
                    };
                    format!(
                        "reject: player {} deviates\n  actions: {} [{}]^w\n  play: {} [{}]^w",
                        w.player,
                        actions(ar, &w.prefix_actions),
                        actions(ar, &w.cycle_actions),
                        show(&w.lasso.prefix),
                        show(&w.lasso.cycle)
                    )
                }
            };
            io.note(&msg);
            Ok(EXIT_NONE)
        }
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Reachable configurations with one edge per legal move vector.
fn game_dot(g: &GameNetwork, budget: &Budget) -> Result<String, Failure> {
    let ar = g.arena();
    let reach = g.reachable(budget.nodes)?;
    let mut out = String::from("digraph game {\n  init [shape=point];\n");
    for (c, t) in reach.configs().iter().enumerate() {
        let _ = writeln!(out, "  c{c} [label={}];", quote(&t.display(ar).to_string()));
    }
    out.push_str("  init -> c0;\n");
    for (c, t) in reach.configs().iter().enumerate() {
        let lists = (0..g.n()).map(|k| product_moves(ar, t, k)).collect::<crate::error::Result<Vec<_>>>()?;
        let mut digits = vec![0usize; g.n()];
        'moves: loop {
            let moves: Vec<u32> = digits.iter().zip(&lists).map(|(&d, l)| l[d]).collect();
            let u = product_step(ar, t, &moves)?;
            let target = reach.index_of(&u).expect("closed under successors");
            let label = moves.iter().map(|&a| ar.action_name(a)).collect::<Vec<_>>().join(",");
            let _ = writeln!(out, "  c{c} -> c{target} [label={}];", quote(&label));
            for k in (0..g.n()).rev() {
                digits[k] += 1;
                if digits[k] < lists[k].len() {
                    continue 'moves;
                }
                digits[k] = 0;
            }
            break;
        }
    }
    out.push_str("}\n");
    Ok(out)
}

/// States reachable when everyone but `i` follows the profile.
fn deviation_dot(
    g: &GameNetwork,
    profile: &Profile<'_>,
    i: usize,
    budget: &Budget,
) -> Result<String, Failure> {
    let ar = g.arena();
    let mut start = profile.initial_state();
    start.memory[i] = 0;
    let mut nodes: Vec<ProfileState> = vec![start.clone()];
    let mut ids = std::collections::HashMap::from([(start, 0usize)]);
    let mut edges = String::new();
    let mut k = 0;
    while k < nodes.len() {
        let s = nodes[k].clone();
        let t = profile.reach().config(s.config);
        for &a in ar.mov(t.get(i)) {
            let next = profile.step(&s, Some((i, a)))?;
            let id = match ids.get(&next) {
                Some(&id) => id,
                None => {
                    if nodes.len() >= budget.nodes {
                        return Err(Error::BudgetExceeded(format!(
                            "deviation graph exceeds {} nodes",
                            budget.nodes
                        ))
                        .into());
                    }
                    ids.insert(next.clone(), nodes.len());
                    nodes.push(next);
                    nodes.len() - 1
                }
            };
            let _ = writeln!(edges, "  n{k} -> n{id} [label={}];", quote(ar.action_name(a)));
        }
        k += 1;
    }
    let mut out = format!("digraph deviation_{i} {{\n  init [shape=point];\n");
    for (k, s) in nodes.iter().enumerate() {
        let mem: Vec<String> = s
            .memory
            .iter()
            .enumerate()
            .map(|(j, q)| if j == i { "-".to_string() } else { q.to_string() })
            .collect();
        let label = format!("{} [{}]", profile.reach().config(s.config).display(ar), mem.join(","));
        let _ = writeln!(out, "  n{k} [label={}];", quote(&label));
    }
    out.push_str("  init -> n0;\n");
    out.push_str(&edges);
    out.push_str("}\n");
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn export_dot(
    io: &mut Io<'_>,
    game: &Path,
    strategy: Option<&Path>,
    deviator: Option<usize>,
    automaton: Option<usize>,
    budget: &BudgetArgs,
    output: Option<&Path>,
) -> Outcome {
    let g = load_game(game)?;
    let budget = budget.budget();
    let check_player = |i: usize| {
        if i < g.n() {
            Ok(i)
        } else {
            Err(usage(format!("player {i} does not exist")))
        }
    };
    let text = if let Some(i) = automaton {
        let i = check_player(i)?;
        let solver = Solver::new(&g, budget)?;
        solver.automaton(i).to_dot(g.arena())
    } else if let (Some(path), Some(i)) = (strategy, deviator) {
        let i = check_player(i)?;
        let solver = Solver::new(&g, budget)?;
        let witness = WitnessFile::from_json(&read(path)?)?.to_witness(&solver)?;
        match &witness {
            Witness::Symmetric(sigma0) => {
                let space = solver.symmetric_space()?;
                deviation_dot(&g, &solver.symmetric_profile(sigma0, &space)?, i, &budget)?
            }
            Witness::General(list) => {
                let spaces = solver.player_spaces()?;
                deviation_dot(&g, &solver.general_profile(list, &spaces)?, i, &budget)?
            }
        }
    } else if strategy.is_some() {
        return Err(usage("a strategy file needs --deviator"));
    } else {
        game_dot(&g, &budget)?
    };
    io.emit(output, &text)?;
    Ok(EXIT_OK)
}

fn execute(io: &mut Io<'_>, cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate { game } => {
            let g = load_game(&game)?;
            io.note(&format!(
                "ok: {} players, {} states, {} actions",
                g.n(),
                g.arena().num_states(),
                g.arena().num_actions()
            ));
            Ok(EXIT_OK)
        }
        Command::Find(args) => search(io, &args, false),
        Command::General(args) => search(io, &args, true),
        Command::Oracle(args) => oracle(io, &args),
        Command::Check { game, strategy, constraints, budget } => {
            check(io, &game, &strategy, &constraints, &budget)
        }
        Command::Desym { game, output } => {
            let g = load_game(&game)?;
            io.emit(output.as_deref(), &desymmetrize(&g)?.to_file().to_json())?;
            Ok(EXIT_OK)
        }
        Command::ExportDot { game, strategy, deviator, automaton, budget, output } => {
            export_dot(io, &game, strategy.as_deref(), deviator, automaton, &budget, output.as_deref())
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ =
                if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut io = Io { out, err };
    match execute(&mut io, cli) {
        Ok(code) => code,
        Err(f) => {
            io.note(&format!("error: {}", f.msg));
            f.code
        }
    }
}
