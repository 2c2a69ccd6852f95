use std::io::Read;
use std::path::Path;

use snortlab::graph6::{self, Graph6Error};
use snortlab::{Graph, Position, VertexState};

use crate::Failure;

/// `-` reads stdin, an existing path reads the file, anything else is taken
/// as the text itself.
pub fn read_source(arg: &str) -> Result<String, Failure> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(format!("reading stdin: {e}")))?;
        return Ok(s);
    }
    if Path::new(arg).is_file() {
        return std::fs::read_to_string(arg).map_err(|e| Failure::Usage(format!("reading {arg}: {e}")));
    }
    Ok(arg.to_string())
}

/// Non-empty lines that are not `#` comments.
pub fn content_lines(text: &str) -> Vec<&str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect()
}

pub fn graph6_failure(what: &str, e: Graph6Error) -> Failure {
    match e {
        Graph6Error::TooLarge(_) => Failure::Cap(format!("{what}: {e}")),
        e => Failure::Usage(format!("{what}: {e}")),
    }
}

pub fn load_graph(arg: &str) -> Result<Graph, Failure> {
    let text = read_source(arg)?;
    let line = content_lines(&text).first().copied().ok_or_else(|| Failure::Usage(format!("no graph in {arg}")))?;
    graph6::parse(line).map_err(|e| graph6_failure(arg, e))
}

/// A graph6 line, optionally followed by a state line of `F b r D B R`.
pub fn load_position(arg: &str) -> Result<Position, Failure> {
    let text = read_source(arg)?;
    let lines = content_lines(&text);
    let first = lines.first().copied().ok_or_else(|| Failure::Usage(format!("no graph in {arg}")))?;
    let g = graph6::parse(first).map_err(|e| graph6_failure(arg, e))?;
    match lines.get(1) {
        Some(state) if state.chars().all(|c| VertexState::from_char(c).is_some()) => {
            let states: Vec<VertexState> = state.chars().filter_map(VertexState::from_char).collect();
            Position::from_states(g, states).map_err(|e| Failure::Usage(format!("{arg}: {e}")))
        }
        _ => Ok(Position::initial(g)),
    }
}
