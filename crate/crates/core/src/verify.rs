//! The acceptance suite: each criterion recomputes a published result from
//! scratch and compares it against an exact expectation.
//!
//! The naive solver and the brute-force opposition search used here share no
//! code with the fast paths they check.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use rand::seq::IteratorRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::canon::{canonical_code, code_hex};
use crate::chess::{self, ChessWitness, Piece, Prediction};
use crate::constructions::{check_firework_hypotheses, firework, paper_graph, FigureId};
use crate::graph::Graph;
use crate::graph6;
use crate::opposition::{
    almost_oppositions, brute_force_oppositions, find_almost_opposition, find_compatible_almost_opposition,
    find_opposition, is_opposable, verify_almost_witness, verify_opposition,
};
use crate::products::{
    build_named_product, lift_opposition, named_formula, satisfies_opposability_condition, OPPOSABLE_PRODUCTS,
};
use crate::search::{enumerate_graphs, scan, Predicate, ScanConfig, Scope, SearchReport};
use crate::snort::{OutcomeClass, Player, Position, Solver, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Every check, with fewer random playouts.
    Fast,
    Full,
}

impl Mode {
    fn playouts(self) -> usize {
        match self {
            Mode::Fast => 100,
            Mode::Full => 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub id: &'static str,
    pub title: &'static str,
    pub anchor: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
    pub limit_ms: Option<u128>,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "criterion {:<3} {verdict}  {} [{}] ({} ms): {}",
            self.id, self.title, self.anchor, self.elapsed_ms, self.detail
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub mode: Mode,
    pub seed: u64,
    pub criteria: Vec<CriterionReport>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn get(&self, id: &str) -> Option<&CriterionReport> {
        self.criteria.iter().find(|c| c.id == id)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.criteria {
            writeln!(f, "{c}")?;
        }
        let passed = self.criteria.iter().filter(|c| c.passed).count();
        write!(f, "{passed}/{} criteria passed", self.criteria.len())
    }
}

pub const DEFAULT_SEED: u64 = 0x5eed;

pub const CRITERIA: [&str; 10] = ["1", "2", "3a", "3b", "3c", "4", "5", "6", "7", "8"];

/// Runs the criteria in `ids` (all of them when empty).
pub fn run(mode: Mode, seed: u64, ids: &[&str]) -> VerifyReport {
    let wanted = |id: &str| ids.is_empty() || ids.contains(&id);
    let mut criteria = Vec::new();
    for id in CRITERIA {
        if wanted(id) {
            criteria.push(run_one(id, mode, seed));
        }
    }
    VerifyReport { mode, seed, criteria }
}

pub fn run_one(id: &str, mode: Mode, seed: u64) -> CriterionReport {
    let start = Instant::now();
    let (title, anchor, limit, outcome): (&'static str, &'static str, Option<u64>, Result<String, String>) = match id {
        "1" => (
            "opposition search vs brute force, orders 0..=6",
            "opposition matching equivalence",
            Some(60),
            criterion_1(),
        ),
        "2" => ("memoised solver vs naive minimax, orders 0..=6", "outcome classes", Some(300), criterion_2()),
        "3a" => (
            "unique smallest non-opposable second-player win graph is P3 u C3",
            "catalogue: P3uC3",
            Some(600),
            criterion_3a(),
        ),
        "3b" => (
            "exactly five connected such graphs of order 7, matching the catalogue",
            "catalogue: SevenVertexFive(1..=5)",
            Some(600),
            criterion_3b(),
        ),
        "3c" => (
            "unique smallest such trees: even order 12, odd order 15",
            "catalogue: Tree12, Tree15",
            Some(7200),
            criterion_3c(),
        ),
        "4" => ("chessboard outcomes and witness maps", "peaceable chess", Some(660), criterion_4()),
        "5" => ("six named products preserve opposability", "opposable graph products", Some(300), criterion_5()),
        "6" => (
            "almost-opposability regression set",
            "almost opposable graphs, brooms, Cartesian grids",
            Some(600),
            criterion_6(),
        ),
        "7" => ("6-firework of P3 u C3 is second-player win", "fireworks", Some(600), criterion_7()),
        "8" => (
            "symmetric-form invariant and mirror playouts, orders 0..=7",
            "mirroring strategy",
            None,
            criterion_8(mode, seed),
        ),
        other => ("unknown criterion", "", None, Err(format!("no criterion named {other:?}"))),
    };
    let elapsed = start.elapsed();
    let limit = limit.map(Duration::from_secs);
    let (mut passed, mut detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if let Some(l) = limit {
        if elapsed > l {
            passed = false;
            detail = format!("{detail}; exceeded the {} s budget", l.as_secs());
        }
    }
    let id = CRITERIA.iter().find(|c| **c == id).copied().unwrap_or("?");
    CriterionReport {
        id,
        title,
        anchor,
        passed,
        detail,
        elapsed_ms: elapsed.as_millis(),
        limit_ms: limit.map(|l| l.as_millis()),
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_graphs(max: usize) -> Result<Vec<Graph>, String> {
    let mut out = Vec::new();
    for n in 0..=max {
        out.extend(enumerate_graphs(n, false).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

fn criterion_1() -> Result<String, String> {
    let graphs = all_graphs(6)?;
    let nonempty = graphs.iter().filter(|g| g.order() > 0).count();
    ensure(nonempty == 208, || format!("{nonempty} classes of order 1..=6, expected 208"))?;
    let mut opposable = 0;
    for g in &graphs {
        let fast = find_opposition(g);
        let brute = brute_force_oppositions(g).map_err(|e| e.to_string())?;
        if let Some(f) = &fast {
            ensure(verify_opposition(g, f.map()), || format!("{} returned an invalid opposition", graph6::emit(g)))?;
        }
        ensure(fast.is_some() == !brute.is_empty(), || {
            format!("{}: search says {}, brute force finds {}", graph6::emit(g), fast.is_some(), brute.len())
        })?;
        opposable += usize::from(fast.is_some());
    }
    Ok(format!("{} graphs (208 of order 1..=6 plus the empty graph), {opposable} opposable, all agree", graphs.len()))
}

/// Plain minimax with no memo and no pruning. States: 0 free, 1 blue tint,
/// 2 red tint, 3 dead, 4 coloured.
pub fn naive_wins_moving_first(adj: &[Vec<bool>], state: &mut Vec<u8>, left: bool) -> bool {
    let (mine, theirs) = if left { (1, 2) } else { (2, 1) };
    for v in 0..state.len() {
        if state[v] != 0 && state[v] != mine {
            continue;
        }
        let saved = state.clone();
        state[v] = 4;
        for w in 0..state.len() {
            if adj[v][w] {
                state[w] = match state[w] {
                    0 => mine,
                    s if s == theirs => 3,
                    s => s,
                };
            }
        }
        let opponent_wins = naive_wins_moving_first(adj, state, !left);
        *state = saved;
        if !opponent_wins {
            return true;
        }
    }
    false
}

pub fn naive_outcome(g: &Graph) -> OutcomeClass {
    let n = g.order();
    let adj: Vec<Vec<bool>> = (0..n).map(|u| (0..n).map(|v| g.has_edge(u, v)).collect()).collect();
    let l = naive_wins_moving_first(&adj, &mut vec![0; n], true);
    let r = naive_wins_moving_first(&adj, &mut vec![0; n], false);
    OutcomeClass::from_results(l, r)
}

fn criterion_2() -> Result<String, String> {
    let graphs = all_graphs(6)?;
    let mut solver = Solver::new(SolverConfig::default());
    for g in &graphs {
        let fast = solver.outcome(g);
        let slow = naive_outcome(g);
        ensure(fast == slow, || format!("{}: solver {fast}, naive {slow}", graph6::emit(g)))?;
    }
    Ok(format!("{} graphs agree", graphs.len()))
}

fn target_predicate() -> Predicate {
    Predicate::parse("secondwins & !opposable").expect("fixed predicate parses")
}

fn run_scan(scope: Scope) -> Result<SearchReport, String> {
    scan(&scope, &target_predicate(), &ScanConfig::default()).map_err(|e| e.to_string())
}

fn code_of(g: &Graph) -> String {
    code_hex(&canonical_code(g))
}

fn hit_list(report: &SearchReport, order: usize) -> String {
    report.hits_of_order(order).map(|h| h.graph6.as_str()).collect::<Vec<_>>().join(", ")
}

fn criterion_3a() -> Result<String, String> {
    let report = run_scan(Scope::Graphs { min: 0, max: 6, connected_only: false })?;
    let min = report.hits.iter().map(|h| h.order).min().ok_or("no hits up to order 6")?;
    let at_min: Vec<&str> = report.hits_of_order(min).map(|h| h.code.as_str()).collect();
    let target = code_of(&paper_graph(FigureId::P3uC3).graph);
    ensure(min == 6, || format!("smallest hits have order {min}: {}", hit_list(&report, min)))?;
    ensure(at_min.contains(&target.as_str()), || {
        format!("P3 u C3 missing from order-6 hits {}", hit_list(&report, 6))
    })?;
    ensure(at_min.len() == 1, || {
        format!("{} hits at order 6, not 1: {} (P3 u C3 is among them)", at_min.len(), hit_list(&report, 6))
    })?;
    Ok("order 6, single hit P3 u C3".into())
}

fn criterion_3b() -> Result<String, String> {
    let report = run_scan(Scope::Graphs { min: 1, max: 7, connected_only: true })?;
    let below: Vec<usize> = report.hits.iter().filter(|h| h.order < 7).map(|h| h.order).collect();
    ensure(below.is_empty(), || format!("connected hits below order 7 at orders {below:?}"))?;
    let got: BTreeSet<&str> = report.hits_of_order(7).map(|h| h.code.as_str()).collect();
    let want: BTreeSet<String> = (1..=5).map(|i| code_of(&paper_graph(FigureId::SevenVertexFive(i)).graph)).collect();
    let want: BTreeSet<&str> = want.iter().map(String::as_str).collect();
    ensure(got.len() == 5, || format!("{} connected hits at order 7: {}", got.len(), hit_list(&report, 7)))?;
    ensure(got == want, || format!("order-7 hits {} differ from the catalogue", hit_list(&report, 7)))?;
    Ok("none below order 7; five at order 7, equal to the catalogue".into())
}

fn criterion_3c() -> Result<String, String> {
    let report = run_scan(Scope::Trees { min: 1, max: 15 })?;
    let mut lines = Vec::new();
    for (parity, order, id) in [(0, 12, FigureId::Tree12), (1, 15, FigureId::Tree15)] {
        let first = report.hits.iter().filter(|h| h.order % 2 == parity).map(|h| h.order).min();
        ensure(first == Some(order), || format!("smallest hit of parity {parity} is at {first:?}, expected {order}"))?;
        let hits: Vec<&str> = report.hits_of_order(order).map(|h| h.code.as_str()).collect();
        let want = code_of(&paper_graph(id).graph);
        ensure(hits == [want.as_str()], || {
            format!("order {order}: hits {}, expected only {id}", hit_list(&report, order))
        })?;
        lines.push(format!("order {order}: {id}"));
    }
    Ok(lines.join("; "))
}

fn expected_class(p: Prediction) -> Option<OutcomeClass> {
    match p {
        Prediction::FirstWins => Some(OutcomeClass::FirstWins),
        Prediction::SecondWins => Some(OutcomeClass::SecondWins),
        Prediction::Unknown => None,
    }
}

fn criterion_4() -> Result<String, String> {
    let mut solver = Solver::new(SolverConfig::default());
    let mut solved = 0;
    for piece in Piece::ALL {
        for n in 1..=4 {
            for m in 1..=4 {
                if piece == Piece::Queen && n % 2 == 0 && m % 2 == 0 {
                    continue;
                }
                let g = chess::grid(piece, n, m).map_err(|e| e.to_string())?;
                let predicted = chess::predicted_outcome(piece, n, m);
                let got = solver.outcome(&g);
                ensure(expected_class(predicted) == Some(got), || {
                    format!("{piece} {n}x{m}: predicted {predicted}, solved {got}")
                })?;
                solved += 1;
            }
        }
        solver.clear();
    }
    let mut witnesses = 0;
    for piece in Piece::ALL {
        for n in 1..=8 {
            for m in 1..=8 {
                let Some(w) = chess::witness(piece, n, m).map_err(|e| e.to_string())? else {
                    continue;
                };
                let g = chess::grid(piece, n, m).map_err(|e| e.to_string())?;
                ensure(w.verify(&g), || format!("{piece} {n}x{m}: witness does not verify"))?;
                let expected = match w {
                    ChessWitness::Opposition { .. } => Prediction::SecondWins,
                    ChessWitness::Almost(_) => Prediction::FirstWins,
                };
                let predicted = chess::predicted_outcome(piece, n, m);
                ensure(predicted == expected, || {
                    format!("{piece} {n}x{m}: witness kind disagrees with prediction {predicted}")
                })?;
                witnesses += 1;
            }
        }
    }
    Ok(format!("{solved} boards solved as predicted; {witnesses} witnesses verified up to 8x8"))
}

fn criterion_5() -> Result<String, String> {
    for name in OPPOSABLE_PRODUCTS {
        let f = named_formula(name).map_err(|e| e.to_string())?;
        ensure(satisfies_opposability_condition(&f), || format!("{name} fails the lifting condition"))?;
    }
    let bad = named_formula("cihpromomoh").map_err(|e| e.to_string())?;
    ensure(!satisfies_opposability_condition(&bad), || "cihpromomoh passes the lifting condition".into())?;

    let factors = all_graphs(4)?;
    let mut lifted = 0;
    let mut bases = 0;
    for g in all_graphs(6)? {
        let Some(f) = find_opposition(&g) else { continue };
        bases += 1;
        for name in OPPOSABLE_PRODUCTS {
            let phi = named_formula(name).map_err(|e| e.to_string())?;
            for h in &factors {
                let (p, opp) = lift_opposition(f.map(), &g, h, &phi)
                    .map_err(|e| format!("{name} of {} and {}: {e}", graph6::emit(&g), graph6::emit(h)))?;
                ensure(verify_opposition(&p.graph, opp.map()), || {
                    format!("{name} of {} and {}: lifted map fails", graph6::emit(&g), graph6::emit(h))
                })?;
                lifted += 1;
            }
        }
    }
    Ok(format!(
        "conditions as expected; {lifted} lifted oppositions verified ({bases} opposable bases x {} factors x 6)",
        factors.len()
    ))
}

fn not_almost(g: &Graph, what: &str) -> Result<(), String> {
    let w = find_almost_opposition(g).map_err(|e| format!("{what}: {e}"))?;
    ensure(w.is_none(), || format!("{what} is almost opposable"))
}

fn almost(g: &Graph, what: &str) -> Result<(), String> {
    let w = find_almost_opposition(g).map_err(|e| format!("{what}: {e}"))?;
    let w = w.ok_or_else(|| format!("{what} is not almost opposable"))?;
    ensure(verify_almost_witness(g, &w), || format!("{what}: witness does not verify"))
}

fn criterion_6() -> Result<String, String> {
    let fig = paper_graph(FigureId::AlmostGraphAG);
    let ag = &fig.graph;
    let witnesses = almost_oppositions(ag).map_err(|e| e.to_string())?;
    let sets: BTreeSet<u64> = witnesses.iter().map(|w| w.s.0).collect();
    let cdg: u64 = ["c", "d", "g"].iter().map(|l| 1u64 << fig.vertex(l).expect("labelled")).sum();
    ensure(sets.len() == 1 && sets.contains(&cdg), || {
        let names: Vec<Vec<&str>> = sets
            .iter()
            .map(|s| (0..ag.order()).filter(|v| s >> v & 1 == 1).map(|v| fig.labels[v].as_str()).collect())
            .collect();
        format!("witness sets {names:?}, expected only [c, d, g]")
    })?;
    let compat = find_compatible_almost_opposition(ag).map_err(|e| e.to_string())?;
    ensure(compat.is_none(), || "AG is compatibly almost opposable".into())?;

    let p = |n| Graph::path(n).expect("small path");
    let prod = |h: &Graph, name: &str| build_named_product(ag, h, name).map(|p| p.graph).map_err(|e| e.to_string());
    not_almost(&prod(&p(3), "cartesian")?, "AG cartesian P3")?;
    not_almost(&prod(&p(4), "strong")?, "AG strong P4")?;
    almost(&prod(&p(3), "strong")?, "AG strong P3")?;

    let mut grids = 0;
    for a in 1..=5 {
        for b in a..=5 {
            let g = build_named_product(&p(a), &p(b), "cartesian").map_err(|e| e.to_string())?.graph;
            let what = format!("P{a} cartesian P{b}");
            if a % 2 == 0 && b % 2 == 0 {
                ensure(is_opposable(&g), || format!("{what} is not opposable"))?;
                not_almost(&g, &what)?;
            } else {
                almost(&g, &what)?;
                ensure(!is_opposable(&g), || format!("{what} is opposable"))?;
            }
            grids += 1;
        }
    }

    for (n, m) in [(8, 2), (5, 3)] {
        not_almost(&Graph::broom(n, m).map_err(|e| e.to_string())?, &format!("broom({n},{m})"))?;
    }
    Ok(format!("AG witness set {{c,d,g}}, no compatible witness; products as expected; {grids} grids classified; brooms not almost opposable"))
}

fn criterion_7() -> Result<String, String> {
    let fig = paper_graph(FigureId::P3uC3);
    let (u, v) = (fig.vertex("c1").expect("labelled"), fig.vertex("p2").expect("labelled"));
    let mut solver = Solver::new(SolverConfig::default());
    let check = check_firework_hypotheses(&mut solver, &fig.graph, u, v);
    ensure(check.holds(), || format!("hypotheses fail: {check:?}"))?;
    let fw = firework(&fig.graph, u, v, 6).map_err(|e| e.to_string())?;
    ensure(fw.order() == 18, || format!("firework has {} vertices", fw.order()))?;
    let o = solver.outcome(&fw);
    ensure(o == OutcomeClass::SecondWins, || format!("firework outcome {o}"))?;
    Ok("hypotheses hold; 18 vertices; SecondWins".into())
}

/// Random first-player moves answered by the mirror image. Returns the number
/// of illegal mirror replies.
pub fn mirror_playouts(g: &Graph, f: &crate::VertexMap, playouts: usize, rng: &mut ChaCha8Rng) -> usize {
    let mut violations = 0;
    for i in 0..playouts {
        let first = if i.is_multiple_of(2) { Player::Left } else { Player::Right };
        let mut pos = Position::initial(g.clone());
        while let Some(v) = pos.legal_moves(first).iter().choose(rng) {
            pos = pos.apply_move(first, v).expect("legal move applies");
            match pos.apply_move(first.opponent(), f.get(v)) {
                Ok(next) => pos = next,
                Err(_) => {
                    violations += 1;
                    break;
                }
            }
        }
    }
    violations
}

fn criterion_8(mode: Mode, seed: u64) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut solver = Solver::new(SolverConfig::default());
    let mut graphs = 0;
    let mut opposable = 0;
    let mut violations = 0;
    let mut games = 0;
    for n in 0..=7 {
        for g in enumerate_graphs(n, false).map_err(|e| e.to_string())? {
            graphs += 1;
            let o = solver.outcome(&g);
            ensure(matches!(o, OutcomeClass::FirstWins | OutcomeClass::SecondWins), || {
                format!("{} is {o}, not a symmetric outcome", graph6::emit(&g))
            })?;
            if let Some(f) = find_opposition(&g) {
                opposable += 1;
                ensure(o == OutcomeClass::SecondWins, || format!("opposable {} is {o}", graph6::emit(&g)))?;
                violations += mirror_playouts(&g, f.map(), mode.playouts(), &mut rng);
                games += mode.playouts();
            }
        }
        solver.clear();
    }
    ensure(violations == 0, || format!("{violations} illegal mirror replies in {games} playouts"))?;
    Ok(format!("{graphs} graphs symmetric; {opposable} opposable, {games} mirror playouts, 0 violations"))
}
