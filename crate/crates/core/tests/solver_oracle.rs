//! The memoised solver against a naive minimax written from the rules alone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use snortlab::graph::Graph;
use snortlab::snort::{Player, Position, Solver, SolverConfig, VertexState};

const FREE: u8 = 0;
const BLUE: u8 = 1;
const RED: u8 = 2;
const DEAD: u8 = 3;
const GONE: u8 = 4;

/// Naive minimax: `left` moving first from `state`. Uses no tables at all.
fn naive_wins(adj: &[Vec<bool>], state: &mut Vec<u8>, left: bool) -> bool {
    let n = state.len();
    let (mine, theirs) = if left { (BLUE, RED) } else { (RED, BLUE) };
    for v in 0..n {
        if state[v] == FREE || state[v] == mine {
            let saved = state.clone();
            state[v] = GONE;
            for w in 0..n {
                if adj[v][w] && state[w] != GONE {
                    state[w] = match state[w] {
                        FREE => mine,
                        s if s == theirs => DEAD,
                        s => s,
                    };
                }
            }
            let reply = naive_wins(adj, state, !left);
            *state = saved;
            if !reply {
                return true;
            }
        }
    }
    false
}

fn matrix(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.order();
    (0..n).map(|u| (0..n).map(|v| g.has_edge(u, v)).collect()).collect()
}

fn oracle_code(s: VertexState) -> u8 {
    match s {
        VertexState::Free => FREE,
        VertexState::TintedBlue => BLUE,
        VertexState::TintedRed => RED,
        VertexState::Dead => DEAD,
        _ => GONE,
    }
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let picked: Vec<(usize, usize)> = edges.into_iter().filter(|_| rng.gen_bool(p)).collect();
    Graph::from_edges(n, picked).unwrap()
}

fn random_tints(rng: &mut ChaCha8Rng, n: usize) -> Vec<VertexState> {
    (0..n)
        .map(|_| match rng.gen_range(0..6) {
            0 => VertexState::TintedBlue,
            1 => VertexState::TintedRed,
            2 => VertexState::Dead,
            _ => VertexState::Free,
        })
        .collect()
}

fn check(p: &Position, pruned: &mut Solver, plain: &mut Solver) {
    let adj = matrix(p.graph());
    let mut st: Vec<u8> = p.states().iter().map(|&s| oracle_code(s)).collect();
    for who in [Player::Left, Player::Right] {
        let expect = naive_wins(&adj, &mut st, who == Player::Left);
        assert_eq!(pruned.wins_moving_first(p, who), expect, "pruned solver, {who} first on {}", p.to_fixture());
        assert_eq!(plain.wins_moving_first(p, who), expect, "unpruned solver, {who} first on {}", p.to_fixture());
    }
}

fn solvers() -> (Solver, Solver) {
    (Solver::new(SolverConfig::default()), Solver::new(SolverConfig { prune: false, ..SolverConfig::default() }))
}

#[test]
fn every_labelled_graph_up_to_five_vertices() {
    let (mut pruned, mut plain) = solvers();
    for n in 0..=5usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        for mask in 0u32..1 << pairs.len() {
            let edges = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e);
            let g = Graph::from_edges(n, edges).unwrap();
            check(&Position::initial(g), &mut pruned, &mut plain);
        }
    }
}

#[test]
fn random_tinted_positions() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut pruned, mut plain) = solvers();
    for _ in 0..3000 {
        let n = rng.gen_range(1..=8);
        let p = rng.gen_range(0.15..0.7);
        let g = random_graph(&mut rng, n, p);
        let tints = random_tints(&mut rng, n);
        let pos = Position::from_states(g, tints).unwrap();
        check(&pos, &mut pruned, &mut plain);
    }
}

#[test]
fn random_positions_reached_by_play() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut pruned, mut plain) = solvers();
    for _ in 0..1500 {
        let n = rng.gen_range(2..=9);
        let density = rng.gen_range(0.2..0.6);
        let g = random_graph(&mut rng, n, density);
        let mut pos = Position::initial(g);
        let mut who = if rng.gen_bool(0.5) { Player::Left } else { Player::Right };
        for _ in 0..rng.gen_range(0..3) {
            let moves = pos.legal_moves(who).to_vec();
            if moves.is_empty() {
                break;
            }
            pos = pos.apply_move(who, moves[rng.gen_range(0..moves.len())]).unwrap();
            who = who.opponent();
        }
        check(&pos, &mut pruned, &mut plain);
    }
}
