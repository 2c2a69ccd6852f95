use std::io::{BufRead, Write};

use clap::{Args, ValueEnum};
use rand::rngs::StdRng;
use rand::seq::IteratorRandom;
use rand::SeedableRng;

use snortlab::{Player, Position, Solver};

use crate::input::load_position;
use crate::Failure;

#[derive(Clone, Copy, ValueEnum)]
pub enum Side {
    Left,
    Right,
}

impl From<Side> for Player {
    fn from(s: Side) -> Player {
        match s {
            Side::Left => Player::Left,
            Side::Right => Player::Right,
        }
    }
}

#[derive(Args)]
pub struct PlayArgs {
    /// graph6 text or file; moves are read from stdin, so the graph cannot come from `-`.
    graph: String,
    /// The colour you play (Left is blue).
    #[arg(long = "as", value_enum, default_value = "left")]
    side: Side,
    /// Who moves first.
    #[arg(long, value_enum, default_value = "left")]
    first: Side,
}

fn board(p: &Position) -> String {
    let cells: Vec<String> = p.states().iter().enumerate().map(|(v, s)| format!("{v}:{}", s.to_char())).collect();
    cells.join(" ")
}

pub fn play(seed: u64, a: &PlayArgs) -> Result<(), Failure> {
    if a.graph == "-" {
        return Err(Failure::Usage("play reads moves from stdin; pass the graph as text or a file".into()));
    }
    let mut pos = load_position(&a.graph)?;
    let human: Player = a.side.into();
    let mut who: Player = a.first.into();
    let mut solver = Solver::default();
    let mut rng = StdRng::seed_from_u64(seed);
    let stdin = std::io::stdin();
    let mut lines = stdin.lock().lines();
    crate::out(&format!("You are {human}. States: F free, b/r tinted, D dead, B/R coloured."));
    loop {
        crate::out(&board(&pos));
        let legal = pos.legal_moves(who);
        if legal.is_empty() {
            crate::out(&format!("{who} has no move. {} wins.", who.opponent()));
            return Ok(());
        }
        if who == human {
            print!("{who} to move {:?}> ", legal.to_vec());
            std::io::stdout().flush().ok();
            let Some(line) = lines.next() else {
                crate::out("");
                return Ok(());
            };
            let line = line.map_err(|e| Failure::Usage(format!("reading stdin: {e}")))?;
            let line = line.trim();
            if line == "q" || line == "quit" {
                return Ok(());
            }
            let v = match line.parse::<usize>() {
                Ok(v) => v,
                Err(_) => {
                    crate::out("enter a vertex number, or q to quit");
                    continue;
                }
            };
            match pos.apply_move(who, v) {
                Ok(next) => pos = next,
                Err(e) => {
                    crate::out(&format!("illegal: {e}"));
                    continue;
                }
            }
        } else {
            let v =
                solver.winning_move(&pos, who).or_else(|| legal.iter().choose(&mut rng)).expect("a legal move exists");
            crate::out(&format!("{who} plays {v}"));
            pos = pos.apply_move(who, v).expect("legal move");
        }
        who = who.opponent();
    }
}
