//! graph6 encoding (the format used by nauty's `geng` and friends).

use thiserror::Error;

use crate::graph::{Graph, MAX_VERTICES};

const HEADER: &str = ">>graph6<<";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("empty graph6 string")]
    Empty,
    #[error("malformed graph6 size header")]
    MalformedHeader,
    #[error("invalid graph6 character {ch:?} at byte {pos}")]
    InvalidCharacter { ch: char, pos: usize },
    #[error("graph6 edge field truncated: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("graph6 edge field has {extra} trailing bytes")]
    TrailingData { extra: usize },
    #[error("graph6 padding bits are not zero")]
    NonZeroPadding,
    #[error("graph has {0} vertices, the limit is {MAX_VERTICES}")]
    TooLarge(usize),
}

fn six_bits(bytes: &[u8], offset: usize) -> Result<Vec<u8>, Graph6Error> {
    bytes
        .iter()
        .enumerate()
        .map(|(i, &b)| {
            if (63..=126).contains(&b) {
                Ok(b - 63)
            } else {
                Err(Graph6Error::InvalidCharacter { ch: b as char, pos: offset + i })
            }
        })
        .collect()
}

fn decode_size(bytes: &[u8]) -> Result<(usize, usize), Graph6Error> {
    match bytes {
        [] => Err(Graph6Error::Empty),
        [126, 126, rest @ ..] => {
            let digits = rest.get(..6).ok_or(Graph6Error::MalformedHeader)?;
            let d = six_bits(digits, 2)?;
            Ok((d.iter().fold(0usize, |acc, &x| acc << 6 | x as usize), 8))
        }
        [126, rest @ ..] => {
            let digits = rest.get(..3).ok_or(Graph6Error::MalformedHeader)?;
            let d = six_bits(digits, 1)?;
            let n = d.iter().fold(0usize, |acc, &x| acc << 6 | x as usize);
            if n < 63 {
                return Err(Graph6Error::MalformedHeader);
            }
            Ok((n, 4))
        }
        [b, ..] if (63..126).contains(b) => Ok(((b - 63) as usize, 1)),
        [b, ..] => Err(Graph6Error::InvalidCharacter { ch: *b as char, pos: 0 }),
    }
}

/// Parses one graph6 string. A leading `>>graph6<<` header and surrounding
/// whitespace are accepted.
pub fn parse(text: &str) -> Result<Graph, Graph6Error> {
    let text = text.trim();
    let text = text.strip_prefix(HEADER).unwrap_or(text);
    let bytes = text.as_bytes();
    let (n, header_len) = decode_size(bytes)?;
    if n > MAX_VERTICES {
        return Err(Graph6Error::TooLarge(n));
    }
    let nbits = n * n.saturating_sub(1) / 2;
    let expected = nbits.div_ceil(6);
    let body = &bytes[header_len..];
    let data = six_bits(body, header_len)?;
    if body.len() < expected {
        return Err(Graph6Error::Truncated { expected, found: body.len() });
    }
    if body.len() > expected {
        return Err(Graph6Error::TrailingData { extra: body.len() - expected });
    }
    let mut adj = vec![0u64; n];
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if data[k / 6] >> (5 - k % 6) & 1 == 1 {
                adj[i] |= 1u64 << j;
                adj[j] |= 1u64 << i;
            }
            k += 1;
        }
    }
    if k % 6 != 0 && data[k / 6] & ((1u8 << (6 - k % 6)) - 1) != 0 {
        return Err(Graph6Error::NonZeroPadding);
    }
    Graph::from_adjacency(&adj).map_err(|_| Graph6Error::TooLarge(n))
}

/// Encodes `g` as graph6 without the optional header.
pub fn emit(g: &Graph) -> String {
    let n = g.order();
    let mut out: Vec<u8> = Vec::new();
    if n < 63 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut nbits = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            nbits += 1;
            if nbits == 6 {
                out.push(acc + 63);
                acc = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        out.push((acc << (6 - nbits)) + 63);
    }
    String::from_utf8(out).expect("graph6 output is ASCII")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_strings() {
        // Matches the nauty documentation and petgraph's fixture.
        let g = Graph::from_edges(5, [(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(emit(&g), "DQc");
        assert_eq!(parse("DQc").unwrap(), g);
        assert_eq!(parse(">>graph6<<DQc\n").unwrap(), g);
        assert_eq!(emit(&Graph::complete(4).unwrap()), "C~");
    }

    #[test]
    fn empty_graph_round_trip() {
        let e = Graph::empty(0).unwrap();
        assert_eq!(emit(&e), "?");
        assert_eq!(parse(&emit(&e)).unwrap(), e);
    }

    #[test]
    fn large_headers() {
        let g = Graph::cycle(64).unwrap();
        let s = emit(&g);
        assert!(s.starts_with("~?@?"));
        assert_eq!(parse(&s).unwrap(), g);
        let p63 = Graph::path(63).unwrap();
        assert_eq!(parse(&emit(&p63)).unwrap(), p63);
    }

    #[test]
    fn malformed_inputs_are_distinct_errors() {
        assert_eq!(parse(""), Err(Graph6Error::Empty));
        assert_eq!(parse("~?"), Err(Graph6Error::MalformedHeader));
        assert_eq!(parse("D Qc"), Err(Graph6Error::InvalidCharacter { ch: ' ', pos: 1 }));
        assert_eq!(parse("DQ"), Err(Graph6Error::Truncated { expected: 2, found: 1 }));
        assert_eq!(parse("DQcc"), Err(Graph6Error::TrailingData { extra: 1 }));
        assert_eq!(parse("~?@@"), Err(Graph6Error::TooLarge(65)));
        assert_eq!(parse("B@"), Err(Graph6Error::NonZeroPadding));
    }
}
