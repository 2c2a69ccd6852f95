mod input;
mod play;

use std::io::Write;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use snortlab::chess::{self, ChessError, ChessWitness, Piece};
use snortlab::constructions::{check_firework_hypotheses, firework, paper_graph, FigureId};
use snortlab::graph6;
use snortlab::opposition::{
    find_almost_opposition, find_compatible_almost_opposition, find_opposition, opposition_json, OppositionError,
};
use snortlab::products::{
    build_product, lift_opposition, named_formula, parse_formula, satisfies_opposability_condition, ProductError,
    NAMED_PRODUCTS,
};
use snortlab::search::{self, read_graph6_lines, Predicate, ScanConfig, Scope, SearchError};
use snortlab::verify::{self, Mode};
use snortlab::{Player, Position, Solver, SolverConfig};

use input::{load_graph, load_position, read_source};

/// Why a command stopped; each maps to one exit code.
#[derive(Debug)]
pub enum Failure {
    /// A check ran and came out negative.
    Verification(String),
    Usage(String),
    Cap(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Cap(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verification(m) | Failure::Usage(m) | Failure::Cap(m) => m,
        }
    }
}

impl From<OppositionError> for Failure {
    fn from(e: OppositionError) -> Self {
        Failure::Cap(e.to_string())
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        if e.is_cap() {
            Failure::Cap(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<ChessError> for Failure {
    fn from(e: ChessError) -> Self {
        match e {
            ChessError::TooLarge(..) => Failure::Cap(e.to_string()),
            e => Failure::Usage(e.to_string()),
        }
    }
}

impl From<ProductError> for Failure {
    fn from(e: ProductError) -> Self {
        match e {
            ProductError::TooLarge(_) => Failure::Cap(e.to_string()),
            ProductError::ConditionViolated | ProductError::InvalidOpposition | ProductError::LiftFailed => {
                Failure::Verification(e.to_string())
            }
            e => Failure::Usage(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

#[derive(Parser)]
#[command(name = "snortlab", version, about = "Solve SNORT on graphs and check opposability")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for parallel scans.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomised checks and computer play.
    #[arg(long, global = true, default_value_t = verify::DEFAULT_SEED)]
    seed: u64,
    /// More logging (repeatable); RUST_LOG overrides.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Outcome class of a graph or tinted position.
    Solve(SolveArgs),
    /// Search for an opposition.
    Opposable {
        /// graph6 text, a file, or - for stdin.
        graph: String,
    },
    /// Search for an almost-opposition.
    Almost {
        graph: String,
        /// Require the opposition of G - S to extend to an involution of G.
        #[arg(long)]
        compatible: bool,
    },
    /// Build a formula-defined product.
    Product(ProductArgs),
    /// Print a catalogued graph.
    Figure {
        /// Figure id, e.g. P3uC3, SevenVertexFive3, Tree12.
        id: Option<String>,
        /// List the catalogued ids.
        #[arg(long)]
        list: bool,
    },
    /// n leaves on each of u and v.
    Firework {
        graph: String,
        u: usize,
        v: usize,
        /// Defaults to the order of the graph.
        n: Option<usize>,
        /// Report the firework hypotheses and solve the result.
        #[arg(long)]
        check: bool,
    },
    /// Peaceable chess graphs.
    Chess(ChessArgs),
    /// Exhaustive predicate scan.
    Scan(ScanArgs),
    /// Run the acceptance suite.
    VerifyPaper {
        /// 100 mirror playouts per opposable graph (the default).
        #[arg(long, conflicts_with = "full")]
        fast: bool,
        /// 1000 mirror playouts per opposable graph.
        #[arg(long)]
        full: bool,
        /// Run only these criteria (1, 2, 3a, 3b, 3c, 4..8).
        #[arg(long = "only")]
        only: Vec<String>,
    },
    /// Play against the solver.
    Play(play::PlayArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// graph6 text, a file, or - for stdin; an optional second line gives vertex states.
    input: String,
    /// Disable dominated-move pruning.
    #[arg(long)]
    no_prune: bool,
    /// Show move evaluations and a principal line for each first player.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
#[command(group(ArgGroup::new("phi").required(true).args(["named", "formula"])))]
struct ProductArgs {
    /// First factor (graph6 text, file, or -).
    g: String,
    /// Second factor.
    h: String,
    /// cartesian, strong, tensor, lexicographic, conormal, homomorphic or cihpromomoh.
    #[arg(long)]
    named: Option<String>,
    /// Adjacency formula over adjG, adjH, eqG, eqH.
    #[arg(long)]
    formula: Option<String>,
    /// Report whether the formula satisfies the lifting condition.
    #[arg(long)]
    check_condition: bool,
    /// Lift an opposition of the first factor to the product.
    #[arg(long)]
    lift: bool,
}

#[derive(Args)]
struct ChessArgs {
    /// king, queen, rook, bishop or knight.
    piece: String,
    /// Board rows.
    n: usize,
    /// Board columns.
    m: usize,
    /// Construct and verify the opposition or almost-opposition.
    #[arg(long)]
    witness: bool,
    /// Solve the board exhaustively (at most 20 squares unless forced).
    #[arg(long)]
    solve: bool,
    /// Solve boards above the default size limit.
    #[arg(long)]
    force_solve: bool,
}

const CHESS_SOLVE_LIMIT: usize = 20;

#[derive(Clone, Copy, ValueEnum)]
enum ScopeKind {
    Graphs,
    Connected,
    Trees,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, value_enum, default_value = "graphs")]
    scope: ScopeKind,
    #[arg(long, default_value_t = 1)]
    min_order: usize,
    #[arg(long, default_value_t = 6)]
    max_order: usize,
    /// Boolean predicate over connected, tree, opposable, almost, compatible, firstwins, secondwins, leftwins, rightwins.
    #[arg(long, default_value = "secondwins & !opposable")]
    predicate: String,
    /// Restrict the graph scope to connected graphs.
    #[arg(long)]
    connected: bool,
    /// Scan graph6 lines from a file (or - for stdin) instead of enumerating.
    #[arg(long)]
    input: Option<String>,
    /// Write the JSON-lines report here.
    #[arg(long)]
    out: Option<String>,
    /// Stop after the first order with at least this many hits.
    #[arg(long)]
    stop_after: Option<usize>,
    /// Disable dominated-move pruning.
    #[arg(long)]
    no_prune: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global() {
            log::warn!("thread pool: {e}");
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("snortlab: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

/// Writes to stdout; a closed pipe (e.g. `| head -1`) ends the process quietly.
pub fn out(text: &str) {
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = writeln!(stdout, "{text}").and_then(|_| stdout.flush()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("snortlab: writing output: {e}");
        std::process::exit(2);
    }
}

fn emit(json: bool, value: Value, human: impl FnOnce() -> String) {
    if json {
        out(&value.to_string());
    } else {
        out(&human());
    }
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Solve(a) => solve(cli, a),
        Command::Opposable { graph } => opposable(cli, graph),
        Command::Almost { graph, compatible } => almost(cli, graph, *compatible),
        Command::Product(a) => product(cli, a),
        Command::Figure { id, list } => figure(cli, id.as_deref(), *list),
        Command::Firework { graph, u, v, n, check } => firework_cmd(cli, graph, *u, *v, *n, *check),
        Command::Chess(a) => chess_cmd(cli, a),
        Command::Scan(a) => scan_cmd(cli, a),
        Command::VerifyPaper { full, only, .. } => verify_cmd(cli, *full, only),
        Command::Play(a) => play::play(cli.seed, a),
    }
}

fn principal_line(solver: &mut Solver, p: &Position, first: Player) -> Vec<(Player, usize)> {
    let mut line = Vec::new();
    let mut pos = p.clone();
    let mut who = first;
    loop {
        let mv = solver.winning_move(&pos, who).or_else(|| pos.legal_moves(who).first());
        let Some(v) = mv else { break };
        pos = pos.apply_move(who, v).expect("legal move");
        line.push((who, v));
        who = who.opponent();
    }
    line
}

fn solve(cli: &Cli, a: &SolveArgs) -> CmdResult {
    let p = load_position(&a.input)?;
    let mut solver = Solver::new(SolverConfig { prune: !a.no_prune, ..SolverConfig::default() });
    let left = solver.wins_moving_first(&p, Player::Left);
    let right = solver.wins_moving_first(&p, Player::Right);
    let outcome = snortlab::OutcomeClass::from_results(left, right);
    let stats = solver.stats();
    let mut trace = Vec::new();
    if a.trace {
        for first in [Player::Left, Player::Right] {
            let evals = solver.evaluate_moves(&p, first);
            let line = principal_line(&mut solver, &p, first);
            trace.push((first, evals, line));
        }
    }
    let states: String = p.states().iter().map(|s| s.to_char()).collect();
    let value = json!({
        "graph6": graph6::emit(p.graph()),
        "states": states,
        "outcome": outcome.to_string(),
        "left_first_wins": left,
        "right_first_wins": right,
        "nodes": stats.nodes,
        "trace": a.trace.then(|| trace.iter().map(|(first, evals, line)| json!({
            "first": first.to_string(),
            "moves": evals.iter().map(|&(v, w)| json!({"vertex": v, "wins": w})).collect::<Vec<_>>(),
            "line": line.iter().map(|&(who, v)| json!({"player": who.to_string(), "vertex": v})).collect::<Vec<_>>(),
        })).collect::<Vec<_>>()),
    });
    emit(cli.json, value, || {
        let mut s = format!(
            "{outcome}\nLeft moving first: {}\nRight moving first: {}\nnodes searched: {}",
            if left { "wins" } else { "loses" },
            if right { "wins" } else { "loses" },
            stats.nodes
        );
        for (first, evals, line) in &trace {
            s.push_str(&format!("\n{first} first:"));
            for &(v, w) in evals {
                s.push_str(&format!("\n  {v}: {}", if w { "wins" } else { "loses" }));
            }
            let moves: Vec<String> = line.iter().map(|&(who, v)| format!("{}{v}", &who.to_string()[..1])).collect();
            s.push_str(&format!("\n  line: {}", if moves.is_empty() { "(no moves)".into() } else { moves.join(" ") }));
        }
        s
    });
    Ok(())
}

fn map_text(map: &[usize]) -> String {
    map.iter().enumerate().filter(|(v, w)| v < w).map(|(v, w)| format!("{v}<->{w}")).collect::<Vec<_>>().join(" ")
}

fn opposable(cli: &Cli, graph: &str) -> CmdResult {
    let g = load_graph(graph)?;
    let f = find_opposition(&g);
    let value = f.as_ref().map_or_else(|| json!({"type": "none", "S": [], "map": null}), opposition_json);
    emit(cli.json, value, || match &f {
        Some(f) => format!("opposable\nmap: {}", map_text(f.map().as_slice())),
        None => "not opposable".into(),
    });
    Ok(())
}

fn almost(cli: &Cli, graph: &str, compatible: bool) -> CmdResult {
    let g = load_graph(graph)?;
    let w = if compatible { find_compatible_almost_opposition(&g)? } else { find_almost_opposition(&g)? };
    let kind = if compatible { "compatibly almost opposable" } else { "almost opposable" };
    let value = w.as_ref().map_or_else(|| json!({"type": "none", "S": [], "map": null}), |w| w.to_json());
    emit(cli.json, value, || match &w {
        Some(w) => {
            let map = w.compat.as_ref().unwrap_or(&w.map);
            format!("{kind}\nu: {}\nS: {:?}\nmap: {}", w.u, w.s.to_vec(), map_text(map.as_slice()))
        }
        None => format!("not {kind}"),
    });
    Ok(())
}

fn product(cli: &Cli, a: &ProductArgs) -> CmdResult {
    let g = load_graph(&a.g)?;
    let h = load_graph(&a.h)?;
    let (text, phi) = match (&a.named, &a.formula) {
        (Some(name), _) => {
            let phi = named_formula(name).map_err(|e| {
                let names: Vec<&str> = NAMED_PRODUCTS.iter().map(|p| p.0).collect();
                Failure::Usage(format!("{e}; known products: {}", names.join(", ")))
            })?;
            (phi.to_string(), phi)
        }
        (None, Some(f)) => {
            let phi = parse_formula(f).map_err(|e| Failure::Usage(format!("formula: {e}")))?;
            (phi.to_string(), phi)
        }
        (None, None) => unreachable!("clap requires one of --named and --formula"),
    };
    let p = build_product(&g, &h, &phi)?;
    let condition = satisfies_opposability_condition(&phi);
    let mut value = json!({
        "formula": text,
        "graph6": graph6::emit(&p.graph),
        "order": p.graph.order(),
        "size": p.graph.size(),
    });
    if a.check_condition {
        value["condition"] = json!(condition);
    }
    let mut lifted = None;
    if a.lift {
        let f = find_opposition(&g).ok_or_else(|| Failure::Verification("the first factor is not opposable".into()))?;
        let (_, opp) = lift_opposition(f.map(), &g, &h, &phi)?;
        value["lifted"] = opposition_json(&opp);
        lifted = Some(opp);
    }
    emit(cli.json, value, || {
        let mut s =
            format!("{}\nformula: {text}\norder {}, size {}", graph6::emit(&p.graph), p.graph.order(), p.graph.size());
        if a.check_condition {
            s.push_str(&format!("\ncondition (eqH & !adjG) => !phi: {}", if condition { "holds" } else { "fails" }));
        }
        if let Some(opp) = &lifted {
            s.push_str(&format!("\nlifted opposition: {}", map_text(opp.map().as_slice())));
        }
        s
    });
    if a.check_condition && !condition && !a.lift {
        return Err(Failure::Verification("the formula fails the lifting condition".into()));
    }
    Ok(())
}

fn figure(cli: &Cli, id: Option<&str>, list: bool) -> CmdResult {
    if list || id.is_none() {
        let ids: Vec<String> = FigureId::all().into_iter().map(|f| f.name()).collect();
        emit(cli.json, json!(ids), || ids.join("\n"));
        return Ok(());
    }
    let id: FigureId = id
        .expect("checked")
        .parse()
        .map_err(|e: snortlab::constructions::ConstructionError| Failure::Usage(e.to_string()))?;
    let fig = paper_graph(id);
    let g6 = graph6::emit(&fig.graph);
    let value = json!({
        "id": id.name(),
        "graph6": g6,
        "labels": fig.labels,
        "marked": fig.marked.iter().map(|(n, v)| json!({"name": n, "vertex": v})).collect::<Vec<_>>(),
    });
    emit(cli.json, value, || {
        let labels: Vec<String> = fig.labels.iter().enumerate().map(|(i, l)| format!("{i}={l}")).collect();
        let mut s = format!("{g6}\n# labels {}", labels.join(" "));
        if !fig.marked.is_empty() {
            let marked: Vec<String> = fig.marked.iter().map(|(n, v)| format!("{n}={v}")).collect();
            s.push_str(&format!("\n# marked {}", marked.join(" ")));
        }
        s
    });
    Ok(())
}

fn firework_cmd(cli: &Cli, graph: &str, u: usize, v: usize, n: Option<usize>, check: bool) -> CmdResult {
    let g = load_graph(graph)?;
    let n = n.unwrap_or(g.order());
    let fw = firework(&g, u, v, n).map_err(|e| match e {
        snortlab::constructions::ConstructionError::Graph(_) => Failure::Cap(e.to_string()),
        e => Failure::Usage(e.to_string()),
    })?;
    let mut value = json!({"graph6": graph6::emit(&fw), "order": fw.order(), "n": n});
    let mut notes = Vec::new();
    if check {
        let mut solver = Solver::default();
        let c = check_firework_hypotheses(&mut solver, &g, u, v);
        let outcome = solver.outcome(&fw);
        value["hypotheses"] = json!(c);
        value["hypotheses_hold"] = json!(c.holds());
        value["outcome"] = json!(outcome.to_string());
        notes.push(format!(
            "# base second-player win: {}, response pair: {}, distance: {}",
            c.second_player_wins, c.response_pair, c.distance
        ));
        notes.push(format!("# firework outcome: {outcome}"));
    }
    emit(cli.json, value, || {
        let mut s = graph6::emit(&fw);
        for l in &notes {
            s.push('\n');
            s.push_str(l);
        }
        s
    });
    Ok(())
}

fn chess_cmd(cli: &Cli, a: &ChessArgs) -> CmdResult {
    let piece: Piece = a.piece.parse()?;
    let g = chess::grid(piece, a.n, a.m)?;
    let predicted = chess::predicted_outcome(piece, a.n, a.m);
    let mut value = json!({"piece": piece.to_string(), "n": a.n, "m": a.m, "predicted": predicted.to_string()});
    let mut lines = vec![format!("{piece} on {}x{}: predicted {predicted}", a.n, a.m)];
    if a.witness {
        let w = chess::witness(piece, a.n, a.m)?;
        match &w {
            Some(w) => {
                let ok = w.verify(&g);
                value["witness"] = match w {
                    ChessWitness::Opposition { map } => {
                        json!({"type": "opposition", "S": [], "map": map.as_slice(), "verified": ok})
                    }
                    ChessWitness::Almost(a) => {
                        let mut j = a.to_json();
                        j["verified"] = json!(ok);
                        j
                    }
                };
                let kind = match w {
                    ChessWitness::Opposition { .. } => "opposition",
                    ChessWitness::Almost(_) => "almost-opposition",
                };
                lines.push(format!("witness: {kind}, {}", if ok { "verified" } else { "FAILED verification" }));
                if !ok {
                    emit(cli.json, value, || lines.join("\n"));
                    return Err(Failure::Verification("witness failed verification".into()));
                }
            }
            None => {
                value["witness"] = Value::Null;
                lines.push("witness: none known".into());
            }
        }
    }
    if a.solve || a.force_solve {
        if g.order() > CHESS_SOLVE_LIMIT && !a.force_solve {
            return Err(Failure::Cap(format!(
                "{} squares exceeds the solve limit of {CHESS_SOLVE_LIMIT}; pass --force-solve",
                g.order()
            )));
        }
        let solved = Solver::default().outcome(&g);
        value["solved"] = json!(solved.to_string());
        lines.push(format!("solved: {solved}"));
    }
    emit(cli.json, value, || lines.join("\n"));
    Ok(())
}

fn scan_cmd(cli: &Cli, a: &ScanArgs) -> CmdResult {
    let pred = Predicate::parse(&a.predicate)?;
    let scope = match &a.input {
        Some(src) => {
            let text = read_source(src)?;
            let graphs = read_graph6_lines(&text)?;
            let graphs = graphs.into_iter().filter(|g| !a.connected || g.is_connected()).collect();
            Scope::External { label: src.clone(), graphs }
        }
        None => match a.scope {
            ScopeKind::Trees => Scope::Trees { min: a.min_order.max(1), max: a.max_order },
            ScopeKind::Graphs | ScopeKind::Connected => Scope::Graphs {
                min: a.min_order,
                max: a.max_order,
                connected_only: a.connected || matches!(a.scope, ScopeKind::Connected),
            },
        },
    };
    let config = ScanConfig { threads: None, prune: !a.no_prune, stop_after_hits: a.stop_after };
    let report = search::scan(&scope, &pred, &config)?;
    let jsonl = report.to_jsonl();
    if let Some(path) = &a.out {
        std::fs::write(path, &jsonl).map_err(|e| Failure::Usage(format!("writing {path}: {e}")))?;
    }
    if cli.json {
        out(jsonl.trim_end());
    } else {
        let mut lines = vec![format!("{} | {}", report.scope, report.predicate)];
        for (order, c) in &report.counts {
            lines.push(format!("order {order:>2}: {:>6} candidates, {} hits", c.candidates, c.hits));
        }
        for h in &report.hits {
            let outcome = h.properties.outcome.map(|o| o.to_string()).unwrap_or_default();
            lines.push(format!("  {} (order {}) {outcome}", h.graph6, h.order));
        }
        lines.push(format!("{} hits in {} ms", report.hits.len(), report.wall_ms));
        out(&lines.join("\n"));
    }
    Ok(())
}

fn verify_cmd(cli: &Cli, full: bool, only: &[String]) -> CmdResult {
    let mode = if full { Mode::Full } else { Mode::Fast };
    let ids: Vec<&str> = only.iter().map(String::as_str).collect();
    for id in &ids {
        if !verify::CRITERIA.contains(id) {
            return Err(Failure::Usage(format!("unknown criterion {id}; known: {}", verify::CRITERIA.join(", "))));
        }
    }
    let report = verify::run(mode, cli.seed, &ids);
    let value = serde_json::to_value(&report).expect("report serialises");
    emit(cli.json, value, || report.to_string());
    if report.all_passed() {
        Ok(())
    } else {
        let failed: Vec<&str> = report.criteria.iter().filter(|c| !c.passed).map(|c| c.id).collect();
        Err(Failure::Verification(format!("criteria failed: {}", failed.join(", "))))
    }
}
