//! Peaceable chess: SNORT on the graph of mutually attacking squares.
//!
//! Square `(x, y)` with `0 ≤ x < n` (row) and `0 ≤ y < m` (column) has index
//! `x * m + y`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexMap, VertexSet, MAX_VERTICES};
use crate::opposition::{verify_almost_witness, verify_opposition, AlmostWitness, Opposition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Piece {
    King,
    Knight,
    Bishop,
    Rook,
    Queen,
}

impl Piece {
    pub const ALL: [Piece; 5] = [Piece::King, Piece::Knight, Piece::Bishop, Piece::Rook, Piece::Queen];

    pub fn attacks(self, a: (usize, usize), b: (usize, usize)) -> bool {
        if a == b {
            return false;
        }
        let dx = a.0.abs_diff(b.0);
        let dy = a.1.abs_diff(b.1);
        match self {
            Piece::King => dx <= 1 && dy <= 1,
            Piece::Knight => (dx == 1 && dy == 2) || (dx == 2 && dy == 1),
            Piece::Bishop => dx == dy,
            Piece::Rook => dx == 0 || dy == 0,
            Piece::Queen => dx == dy || dx == 0 || dy == 0,
        }
    }
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Piece::King => "king",
            Piece::Knight => "knight",
            Piece::Bishop => "bishop",
            Piece::Rook => "rook",
            Piece::Queen => "queen",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChessError {
    #[error("unknown piece {0:?}")]
    UnknownPiece(String),
    #[error("boards need at least one row and one column")]
    EmptyBoard,
    #[error("a {0}x{1} board exceeds {MAX_VERTICES} squares")]
    TooLarge(usize, usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl FromStr for Piece {
    type Err = ChessError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Piece::ALL
            .into_iter()
            .find(|p| p.to_string() == s.to_ascii_lowercase())
            .ok_or_else(|| ChessError::UnknownPiece(s.to_string()))
    }
}

pub fn grid(piece: Piece, n: usize, m: usize) -> Result<Graph, ChessError> {
    if n == 0 || m == 0 {
        return Err(ChessError::EmptyBoard);
    }
    if n * m > MAX_VERTICES {
        return Err(ChessError::TooLarge(n, m));
    }
    let sq = |i: usize| (i / m, i % m);
    let edges =
        (0..n * m).flat_map(|a| (a + 1..n * m).map(move |b| (a, b))).filter(|&(a, b)| piece.attacks(sq(a), sq(b)));
    Ok(Graph::from_edges(n * m, edges)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Prediction {
    FirstWins,
    SecondWins,
    Unknown,
}

impl fmt::Display for Prediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Prediction::FirstWins => "FirstWins",
            Prediction::SecondWins => "SecondWins",
            Prediction::Unknown => "Unknown",
        })
    }
}

pub fn predicted_outcome(piece: Piece, n: usize, m: usize) -> Prediction {
    let (ne, me) = (n.is_multiple_of(2), m.is_multiple_of(2));
    let second = match piece {
        Piece::King => false,
        Piece::Knight | Piece::Bishop => ne || me,
        Piece::Rook => ne && me,
        Piece::Queen if ne && me => return Prediction::Unknown,
        Piece::Queen => false,
    };
    if second {
        Prediction::SecondWins
    } else {
        Prediction::FirstWins
    }
}

/// A constructive witness for a board.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ChessWitness {
    Opposition { map: VertexMap },
    Almost(AlmostWitness),
}

impl ChessWitness {
    pub fn verify(&self, g: &Graph) -> bool {
        match self {
            ChessWitness::Opposition { map } => verify_opposition(g, map),
            ChessWitness::Almost(w) => verify_almost_witness(g, w),
        }
    }
}

fn square_map(n: usize, m: usize, f: impl Fn(usize, usize) -> (usize, usize)) -> Vec<usize> {
    (0..n * m)
        .map(|i| {
            let (x, y) = f(i / m, i % m);
            x * m + y
        })
        .collect()
}

/// Global map: `f` off `s`, identity on `s`.
fn almost(
    n: usize,
    m: usize,
    u: (usize, usize),
    s: VertexSet,
    f: impl Fn(usize, usize) -> (usize, usize),
) -> AlmostWitness {
    let full = square_map(n, m, f);
    let map = (0..n * m).map(|i| if s.contains(i) { i } else { full[i] }).collect();
    AlmostWitness { u: u.0 * m + u.1, s, map: VertexMap::new(map), compat: None }
}

/// The explicit map from the winning-strategy arguments, or `None` where no
/// constructive witness is known (Queen on even×even boards).
pub fn witness(piece: Piece, n: usize, m: usize) -> Result<Option<ChessWitness>, ChessError> {
    let g = grid(piece, n, m)?;
    let (ne, me) = (n.is_multiple_of(2), m.is_multiple_of(2));
    let (cx, cy) = ((n.saturating_sub(1)) / 2, (m.saturating_sub(1)) / 2);
    let idx = |x: usize, y: usize| x * m + y;
    let reverse = move |x: usize, y: usize| (n - 1 - x, m - 1 - y);
    let flip_rows = move |x: usize, y: usize| (n - 1 - x, y);
    let flip_cols = move |x: usize, y: usize| (x, m - 1 - y);
    let opposition = |f: Vec<usize>| ChessWitness::Opposition { map: VertexMap::new(f) };
    let row: VertexSet = (0..m).map(|y| idx(cx, y)).collect();
    let col: VertexSet = (0..n).map(|x| idx(x, cy)).collect();
    let centre_nbhd = g.closed_neighborhood(idx(cx, cy));

    let w = match piece {
        Piece::Knight | Piece::Bishop => {
            if ne {
                opposition(square_map(n, m, flip_rows))
            } else if me {
                opposition(square_map(n, m, flip_cols))
            } else {
                let s = if piece == Piece::Knight { VertexSet::singleton(idx(cx, cy)) } else { centre_nbhd };
                ChessWitness::Almost(almost(n, m, (cx, cy), s, reverse))
            }
        }
        Piece::Rook => match (ne, me) {
            (true, true) => opposition(square_map(n, m, reverse)),
            // flipping rows alone keeps a square in its own column, which a rook attacks
            (false, true) => ChessWitness::Almost(almost(n, m, (cx, 0), row, reverse)),
            (true, false) => ChessWitness::Almost(almost(n, m, (0, cy), col, reverse)),
            (false, false) => ChessWitness::Almost(almost(n, m, (cx, cy), centre_nbhd, reverse)),
        },
        Piece::Queen => match (ne, me) {
            (true, true) => return Ok(None),
            (false, true) => ChessWitness::Almost(almost(n, m, (cx, 0), row, reverse)),
            (true, false) => ChessWitness::Almost(almost(n, m, (0, cy), col, reverse)),
            (false, false) => ChessWitness::Almost(almost(n, m, (cx, cy), centre_nbhd, reverse)),
        },
        Piece::King => {
            // the middle row(s) and column(s) meet in a block around the centre
            let xs: Vec<usize> = if ne { vec![n / 2 - 1, n / 2] } else { vec![cx] };
            let ys: Vec<usize> = if me { vec![m / 2 - 1, m / 2] } else { vec![cy] };
            let s: VertexSet = xs.iter().flat_map(|&x| ys.iter().map(move |&y| idx(x, y))).collect();
            let mut w = almost(n, m, (xs[0], ys[0]), s, reverse);
            w.compat = Some(VertexMap::new(square_map(n, m, reverse)));
            ChessWitness::Almost(w)
        }
    };
    Ok(Some(w))
}

/// The opposition inside a witness, when it is a plain one.
pub fn as_opposition(g: &Graph, w: &ChessWitness) -> Option<Opposition> {
    match w {
        ChessWitness::Opposition { map } => Opposition::new(g, map.clone()),
        ChessWitness::Almost(_) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonical_code;

    #[test]
    fn small_grids() {
        assert_eq!(grid(Piece::King, 2, 2).unwrap(), Graph::complete(4).unwrap());
        assert_eq!(grid(Piece::Rook, 2, 2).unwrap().size(), 4);
        assert_eq!(canonical_code(&grid(Piece::Rook, 2, 2).unwrap()), canonical_code(&Graph::cycle(4).unwrap()));
        let k = grid(Piece::Knight, 3, 3).unwrap();
        assert_eq!(k.degree(4), 0);
        let (ring, _) = k.induced_subgraph(k.vertices().difference(VertexSet::singleton(4)));
        assert_eq!(canonical_code(&ring), canonical_code(&Graph::cycle(8).unwrap()));
        for (n, m) in [(3, 4), (4, 4), (2, 5)] {
            let q = grid(Piece::Queen, n, m).unwrap();
            let r = grid(Piece::Rook, n, m).unwrap();
            let b = grid(Piece::Bishop, n, m).unwrap();
            for x in 0..n * m {
                for y in 0..n * m {
                    assert_eq!(q.has_edge(x, y), r.has_edge(x, y) || b.has_edge(x, y));
                }
            }
        }
        assert_eq!(grid(Piece::King, 0, 3), Err(ChessError::EmptyBoard));
        assert_eq!(grid(Piece::King, 9, 8), Err(ChessError::TooLarge(9, 8)));
    }

    #[test]
    fn predictions() {
        assert_eq!(predicted_outcome(Piece::King, 5, 9), Prediction::FirstWins);
        assert_eq!(predicted_outcome(Piece::Rook, 4, 6), Prediction::SecondWins);
        assert_eq!(predicted_outcome(Piece::Rook, 4, 5), Prediction::FirstWins);
        assert_eq!(predicted_outcome(Piece::Queen, 4, 4), Prediction::Unknown);
        assert_eq!(predicted_outcome(Piece::Knight, 3, 4), Prediction::SecondWins);
        assert_eq!(predicted_outcome(Piece::Bishop, 3, 3), Prediction::FirstWins);
        assert_eq!("Queen".parse::<Piece>().unwrap(), Piece::Queen);
    }

    #[test]
    fn named_witnesses() {
        let w = witness(Piece::Knight, 4, 5).unwrap().unwrap();
        let ChessWitness::Opposition { map } = &w else { panic!("even side gives an opposition") };
        assert_eq!(map.get(0), 15);
        assert!(w.verify(&grid(Piece::Knight, 4, 5).unwrap()));
        let w = witness(Piece::Knight, 2, 3).unwrap().unwrap();
        assert!(w.verify(&grid(Piece::Knight, 2, 3).unwrap()));

        let g = grid(Piece::Bishop, 5, 5).unwrap();
        let ChessWitness::Almost(a) = witness(Piece::Bishop, 5, 5).unwrap().unwrap() else { panic!() };
        assert_eq!(a.s, g.closed_neighborhood(12));
        assert!(verify_almost_witness(&g, &a));

        let ChessWitness::Almost(a) = witness(Piece::Rook, 5, 4).unwrap().unwrap() else { panic!() };
        assert_eq!(a.s.to_vec(), vec![8, 9, 10, 11]);
        assert!(verify_almost_witness(&grid(Piece::Rook, 5, 4).unwrap(), &a));
        assert_eq!(witness(Piece::Queen, 4, 4).unwrap(), None);
    }

    #[test]
    fn row_flip_is_not_a_rook_opposition() {
        let g = grid(Piece::Rook, 5, 4).unwrap();
        let row: VertexSet = (8..12).collect();
        let bad = almost(5, 4, (2, 0), row, |x, y| (4 - x, y));
        assert!(!verify_almost_witness(&g, &bad));
    }

    #[test]
    fn every_constructive_witness_verifies() {
        for piece in Piece::ALL {
            for n in 1..=8 {
                for m in 1..=8 {
                    let g = grid(piece, n, m).unwrap();
                    match witness(piece, n, m).unwrap() {
                        Some(w) => {
                            assert!(w.verify(&g), "{piece} {n}x{m}");
                            let opposable = matches!(w, ChessWitness::Opposition { .. });
                            assert_eq!(opposable, predicted_outcome(piece, n, m) == Prediction::SecondWins);
                        }
                        None => assert_eq!(predicted_outcome(piece, n, m), Prediction::Unknown),
                    }
                }
            }
        }
    }
}
