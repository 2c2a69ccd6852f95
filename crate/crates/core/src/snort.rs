//! SNORT positions and the memoised outcome solver.
//!
//! Left colours blue, Right colours red. An uncoloured vertex next to a blue
//! vertex is tinted blue and may not be coloured by Right (and symmetrically);
//! a vertex tinted both ways is dead. Normal play: whoever cannot move loses.

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon::canonical_code_coloured;
use crate::graph::{components_within, Graph, VertexSet};
use crate::graph6::{self, Graph6Error};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    Left,
    Right,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Left => Player::Right,
            Player::Right => Player::Left,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Left => "Left",
            Player::Right => "Right",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexState {
    Free,
    TintedBlue,
    TintedRed,
    Dead,
    ColouredBlue,
    ColouredRed,
}

impl VertexState {
    pub fn to_char(self) -> char {
        match self {
            VertexState::Free => 'F',
            VertexState::TintedBlue => 'b',
            VertexState::TintedRed => 'r',
            VertexState::Dead => 'D',
            VertexState::ColouredBlue => 'B',
            VertexState::ColouredRed => 'R',
        }
    }

    pub fn from_char(c: char) -> Option<VertexState> {
        Some(match c {
            'F' => VertexState::Free,
            'b' => VertexState::TintedBlue,
            'r' => VertexState::TintedRed,
            'D' => VertexState::Dead,
            'B' => VertexState::ColouredBlue,
            'R' => VertexState::ColouredRed,
            _ => return None,
        })
    }

    pub fn is_coloured(self) -> bool {
        matches!(self, VertexState::ColouredBlue | VertexState::ColouredRed)
    }

    fn blue_tint(self) -> bool {
        matches!(self, VertexState::TintedBlue | VertexState::Dead)
    }

    fn red_tint(self) -> bool {
        matches!(self, VertexState::TintedRed | VertexState::Dead)
    }

    fn with_tints(blue: bool, red: bool) -> VertexState {
        match (blue, red) {
            (false, false) => VertexState::Free,
            (true, false) => VertexState::TintedBlue,
            (false, true) => VertexState::TintedRed,
            (true, true) => VertexState::Dead,
        }
    }

    pub fn playable_by(self, who: Player) -> bool {
        match who {
            Player::Left => matches!(self, VertexState::Free | VertexState::TintedBlue),
            Player::Right => matches!(self, VertexState::Free | VertexState::TintedRed),
        }
    }
}

/// Outcome class of a position: who wins under optimal play.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OutcomeClass {
    FirstWins,
    SecondWins,
    LeftWins,
    RightWins,
}

impl OutcomeClass {
    pub fn from_results(left_first_wins: bool, right_first_wins: bool) -> OutcomeClass {
        match (left_first_wins, right_first_wins) {
            (true, true) => OutcomeClass::FirstWins,
            (false, false) => OutcomeClass::SecondWins,
            (true, false) => OutcomeClass::LeftWins,
            (false, true) => OutcomeClass::RightWins,
        }
    }
}

impl fmt::Display for OutcomeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutcomeClass::FirstWins => "FirstWins",
            OutcomeClass::SecondWins => "SecondWins",
            OutcomeClass::LeftWins => "LeftWins",
            OutcomeClass::RightWins => "RightWins",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("vertex {0} is out of range")]
    OutOfRange(usize),
    #[error("vertex {vertex} is already coloured")]
    AlreadyColoured { vertex: usize },
    #[error("vertex {vertex} is tinted against {player}")]
    WrongTint { vertex: usize, player: Player },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PositionError {
    #[error("state vector has {found} entries for a graph of order {expected}")]
    Length { expected: usize, found: usize },
    #[error("adjacent vertices {0} and {1} carry opposite colours")]
    ClashingColours(usize, usize),
    #[error("vertex {0} has a coloured neighbour but lacks the matching tint")]
    MissingTint(usize),
    #[error("unknown vertex state character {0:?}")]
    BadStateChar(char),
    #[error("position fixture is missing its graph6 line")]
    MissingGraph,
    #[error(transparent)]
    Graph6(#[from] Graph6Error),
}

/// A graph together with the SNORT state of every vertex.
///
/// Tints are always present on uncoloured neighbours of coloured vertices.
/// A tint with no coloured neighbour is a tinted start position and is kept
/// as given.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Position {
    graph: Graph,
    state: Vec<VertexState>,
}

impl Position {
    /// The untinted start position.
    pub fn initial(graph: Graph) -> Position {
        let state = vec![VertexState::Free; graph.order()];
        Position { graph, state }
    }

    pub fn from_states(graph: Graph, state: Vec<VertexState>) -> Result<Position, PositionError> {
        if state.len() != graph.order() {
            return Err(PositionError::Length { expected: graph.order(), found: state.len() });
        }
        for (u, v) in graph.edges() {
            let (a, b) = (state[u], state[v]);
            if a.is_coloured() && b.is_coloured() && a != b {
                return Err(PositionError::ClashingColours(u, v));
            }
        }
        for v in 0..graph.order() {
            if state[v].is_coloured() {
                continue;
            }
            let blue_nb = graph.neighbors(v).iter().any(|w| state[w] == VertexState::ColouredBlue);
            let red_nb = graph.neighbors(v).iter().any(|w| state[w] == VertexState::ColouredRed);
            if (blue_nb && !state[v].blue_tint()) || (red_nb && !state[v].red_tint()) {
                return Err(PositionError::MissingTint(v));
            }
        }
        Ok(Position { graph, state })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn states(&self) -> &[VertexState] {
        &self.state
    }

    pub fn state(&self, v: usize) -> VertexState {
        self.state[v]
    }

    pub fn legal_moves(&self, who: Player) -> VertexSet {
        (0..self.state.len()).filter(|&v| self.state[v].playable_by(who)).collect()
    }

    /// Colours `v` for `who`, tinting its uncoloured neighbours.
    pub fn apply_move(&self, who: Player, v: usize) -> Result<Position, MoveError> {
        let s = *self.state.get(v).ok_or(MoveError::OutOfRange(v))?;
        if s.is_coloured() {
            return Err(MoveError::AlreadyColoured { vertex: v });
        }
        if !s.playable_by(who) {
            return Err(MoveError::WrongTint { vertex: v, player: who });
        }
        let mut next = self.clone();
        next.state[v] = match who {
            Player::Left => VertexState::ColouredBlue,
            Player::Right => VertexState::ColouredRed,
        };
        for w in self.graph.neighbors(v) {
            let t = next.state[w];
            if t.is_coloured() {
                continue;
            }
            next.state[w] = match who {
                Player::Left => VertexState::with_tints(true, t.red_tint()),
                Player::Right => VertexState::with_tints(t.blue_tint(), true),
            };
        }
        Ok(next)
    }

    /// Vertices that can still be coloured by someone.
    pub fn live_vertices(&self) -> VertexSet {
        (0..self.state.len())
            .filter(|&v| matches!(self.state[v], VertexState::Free | VertexState::TintedBlue | VertexState::TintedRed))
            .collect()
    }

    fn masks(&self) -> (u64, u64, u64) {
        let mut avail = 0u64;
        let mut blue = 0u64;
        let mut red = 0u64;
        for (v, s) in self.state.iter().enumerate() {
            match s {
                VertexState::Free => avail |= 1 << v,
                VertexState::TintedBlue => {
                    avail |= 1 << v;
                    blue |= 1 << v;
                }
                VertexState::TintedRed => {
                    avail |= 1 << v;
                    red |= 1 << v;
                }
                _ => {}
            }
        }
        (avail, blue, red)
    }

    /// Fixture text: the graph6 line, then one state character per vertex.
    pub fn to_fixture(&self) -> String {
        let states: String = self.state.iter().map(|s| s.to_char()).collect();
        format!("{}\n{}\n", graph6::emit(&self.graph), states)
    }

    /// Parses [`Position::to_fixture`] output. A missing state line means the
    /// untinted start position; `#` lines are comments.
    pub fn parse_fixture(text: &str) -> Result<Position, PositionError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let g = graph6::parse(lines.next().ok_or(PositionError::MissingGraph)?)?;
        match lines.next() {
            None => Ok(Position::initial(g)),
            Some(line) => {
                let state = line
                    .chars()
                    .map(|c| VertexState::from_char(c).ok_or(PositionError::BadStateChar(c)))
                    .collect::<Result<Vec<_>, _>>()?;
                Position::from_states(g, state)
            }
        }
    }
}

impl FromStr for Position {
    type Err = PositionError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Position::parse_fixture(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    /// Skip dominated moves: `u` is skipped for `v` when `N(u) ⊆ N(v)` in
    /// the residual position and `v` is tinted no worse for the mover.
    pub prune: bool,
    /// Transposition table entries kept before the table is flushed.
    pub table_limit: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { prune: true, table_limit: 4_000_000 }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SolverStats {
    pub nodes: u64,
    pub raw_hits: u64,
    pub table_hits: u64,
    pub pruned_moves: u64,
}

/// Memoised alternating search.
///
/// Positions are normalised to "mover to play": `own` holds vertices tinted
/// in the mover's colour, `opp` those tinted in the opponent's colour. The
/// shared table is keyed by the sorted canonical codes of the residual
/// components (each coloured by tint), so isomorphic subpositions hit the
/// same entry. Components never shortcut the result; they only normalise
/// the key.
#[derive(Debug, Default)]
pub struct Solver {
    config: SolverConfig,
    table: HashMap<Vec<u8>, bool>,
    stats: SolverStats,
}

impl Solver {
    pub fn new(config: SolverConfig) -> Solver {
        Solver { config, table: HashMap::new(), stats: SolverStats::default() }
    }

    pub fn config(&self) -> SolverConfig {
        self.config
    }

    pub fn stats(&self) -> SolverStats {
        self.stats
    }

    pub fn table_len(&self) -> usize {
        self.table.len()
    }

    pub fn clear(&mut self) {
        self.table.clear();
    }

    /// True iff `who`, moving first from `p`, wins with optimal play.
    pub fn wins_moving_first(&mut self, p: &Position, who: Player) -> bool {
        let (avail, blue, red) = p.masks();
        let (own, opp) = match who {
            Player::Left => (blue, red),
            Player::Right => (red, blue),
        };
        let mut search = Search::new(p.graph().adjacency(), self);
        search.mover_wins(avail, own, opp)
    }

    pub fn outcome_of_position(&mut self, p: &Position) -> OutcomeClass {
        let l = self.wins_moving_first(p, Player::Left);
        let r = self.wins_moving_first(p, Player::Right);
        OutcomeClass::from_results(l, r)
    }

    pub fn outcome(&mut self, g: &Graph) -> OutcomeClass {
        self.outcome_of_position(&Position::initial(g.clone()))
    }

    /// Every legal move for `who`, flagged with whether it wins.
    pub fn evaluate_moves(&mut self, p: &Position, who: Player) -> Vec<(usize, bool)> {
        p.legal_moves(who)
            .iter()
            .map(|v| {
                let next = p.apply_move(who, v).expect("legal move");
                (v, !self.wins_moving_first(&next, who.opponent()))
            })
            .collect()
    }

    /// A winning move for `who`, if one exists.
    pub fn winning_move(&mut self, p: &Position, who: Player) -> Option<usize> {
        p.legal_moves(who).iter().find(|&v| {
            let next = p.apply_move(who, v).expect("legal move");
            !self.wins_moving_first(&next, who.opponent())
        })
    }

    /// `(u, v)` is a response pair when Left colouring `u` and Right answering
    /// on `v` leaves a position Left, moving next, loses. An illegal `v` gives
    /// `false`.
    pub fn is_response_pair(&mut self, g: &Graph, u: usize, v: usize) -> bool {
        self.is_response_pair_for(g, u, v, Player::Left)
    }

    /// Response-pair test with `first` as the player opening on `u`.
    pub fn is_response_pair_for(&mut self, g: &Graph, u: usize, v: usize, first: Player) -> bool {
        if u == v || u >= g.order() || v >= g.order() {
            return false;
        }
        let start = Position::initial(g.clone());
        let Ok(after_u) = start.apply_move(first, u) else {
            return false;
        };
        let Ok(after_v) = after_u.apply_move(first.opponent(), v) else {
            return false;
        };
        !self.wins_moving_first(&after_v, first)
    }

    pub fn response_pairs(&mut self, g: &Graph) -> Vec<(usize, usize)> {
        let n = g.order();
        (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|&(u, v)| self.is_response_pair(g, u, v)).collect()
    }
}

/// Convenience wrapper using a fresh default solver.
pub fn outcome(g: &Graph) -> OutcomeClass {
    Solver::default().outcome(g)
}

pub fn wins_moving_first(p: &Position, who: Player) -> bool {
    Solver::default().wins_moving_first(p, who)
}

struct Search<'a> {
    adj: &'a [u64],
    solver: &'a mut Solver,
    raw: HashMap<(u64, u64, u64), bool>,
    components: HashMap<(u64, u64, u64), Rc<Vec<u8>>>,
}

impl<'a> Search<'a> {
    fn new(adj: &'a [u64], solver: &'a mut Solver) -> Self {
        Search { adj, solver, raw: HashMap::new(), components: HashMap::new() }
    }

    /// Neighbourhood of `x` in the residual position. Edges joining two
    /// vertices with the same tint can never matter and are dropped.
    #[inline]
    fn effective(&self, x: usize, avail: u64, own: u64, opp: u64) -> u64 {
        let mut nb = self.adj[x] & avail;
        if own >> x & 1 == 1 {
            nb &= !own;
        } else if opp >> x & 1 == 1 {
            nb &= !opp;
        }
        nb
    }

    fn component_code(&mut self, comp: u64, own: u64, opp: u64) -> Rc<Vec<u8>> {
        let key = (comp, own & comp, opp & comp);
        if let Some(code) = self.components.get(&key) {
            return Rc::clone(code);
        }
        let verts: Vec<usize> = VertexSet(comp).to_vec();
        let adj: Vec<u64> =
            verts.iter().map(|&x| crate::graph::compress(self.effective(x, comp, own, opp), comp)).collect();
        let colours: Vec<u8> = verts
            .iter()
            .map(|&x| {
                if own >> x & 1 == 1 {
                    1
                } else if opp >> x & 1 == 1 {
                    2
                } else {
                    0
                }
            })
            .collect();
        let code = Rc::new(canonical_code_coloured(&adj, &colours));
        self.components.insert(key, Rc::clone(&code));
        code
    }

    fn table_key(&mut self, avail: u64, own: u64, opp: u64) -> Vec<u8> {
        let eff: Vec<u64> = (0..self.adj.len())
            .map(|x| if avail >> x & 1 == 1 { self.effective(x, avail, own, opp) } else { 0 })
            .collect();
        let mut codes: Vec<Rc<Vec<u8>>> =
            components_within(&eff, avail).into_iter().map(|c| self.component_code(c, own, opp)).collect();
        codes.sort();
        let mut key = Vec::with_capacity(codes.iter().map(|c| c.len()).sum());
        for c in codes {
            key.extend_from_slice(&c);
        }
        key
    }

    /// Candidate moves after domination pruning, best-first.
    fn candidates(&mut self, avail: u64, own: u64, opp: u64) -> Vec<usize> {
        let moves = avail & !opp;
        let mut cands: Vec<(usize, u64)> =
            VertexSet(moves).iter().map(|x| (x, self.effective(x, avail, own, opp))).collect();
        if self.solver.config.prune && cands.len() > 1 {
            let before = cands.len();
            let snapshot = cands.clone();
            cands.retain(|&(u, nu)| {
                !snapshot.iter().any(|&(v, nv)| {
                    if v == u || nu >> v & 1 == 1 || nu & !nv != 0 {
                        return false;
                    }
                    // u free and v own-tinted: leaving u behind helps the opponent
                    let u_own = own >> u & 1 == 1;
                    let v_own = own >> v & 1 == 1;
                    if !u_own && v_own {
                        return false;
                    }
                    let equivalent = nu == nv && u_own == v_own;
                    !equivalent || v < u
                })
            });
            self.solver.stats.pruned_moves += (before - cands.len()) as u64;
        }
        cands.sort_by(|a, b| b.1.count_ones().cmp(&a.1.count_ones()).then(a.0.cmp(&b.0)));
        cands.into_iter().map(|(x, _)| x).collect()
    }

    fn mover_wins(&mut self, avail: u64, own: u64, opp: u64) -> bool {
        if avail & !opp == 0 {
            return false;
        }
        self.solver.stats.nodes += 1;
        if let Some(&r) = self.raw.get(&(avail, own, opp)) {
            self.solver.stats.raw_hits += 1;
            return r;
        }
        let key = self.table_key(avail, own, opp);
        if let Some(&r) = self.solver.table.get(&key) {
            self.solver.stats.table_hits += 1;
            self.raw.insert((avail, own, opp), r);
            return r;
        }
        let mut result = false;
        for v in self.candidates(avail, own, opp) {
            let nb = self.adj[v] & avail & !(1u64 << v);
            let next_avail = avail & !(1u64 << v) & !(nb & opp);
            let next_own = (own | nb) & next_avail;
            let next_opp = opp & next_avail;
            if !self.mover_wins(next_avail, next_opp, next_own) {
                result = true;
                break;
            }
        }
        if self.solver.table.len() >= self.solver.config.table_limit {
            self.solver.table.clear();
        }
        self.solver.table.insert(key, result);
        self.raw.insert((avail, own, opp), result);
        result
    }
}
