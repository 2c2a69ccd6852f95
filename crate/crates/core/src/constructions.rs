//! Fireworks, the `G_{2n+1}` family, the detint gadget and a catalogue of
//! labelled fixture graphs.
//!
//! Catalogue graphs are hard-coded edge lists transcribed from the TikZ
//! drawing code of the corresponding figures; labels are the node names used
//! there.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Distance, Graph, GraphError, VertexSet};
use crate::snort::{OutcomeClass, Position, Solver, VertexState};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("the two shells must be distinct vertices")]
    SameVertex,
    #[error("vertex {0} is out of range")]
    OutOfRange(usize),
    #[error("family_g needs n >= 2, got {0}")]
    FamilyTooSmall(usize),
    #[error("unknown figure {0:?}")]
    UnknownFigure(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The catalogued figure graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FigureId {
    /// P3 ∪ C3: a smallest non-opposable second-player win graph (C5 ∪ K1 ties it).
    P3uC3,
    /// The five connected non-opposable second-player wins of order seven,
    /// numbered 1 to 5 in drawing order (a to e).
    SevenVertexFive(u8),
    /// The connected order-seven second-player win with fewest edges, in its
    /// own v1..v7 labelling.
    SevenVertexFewestEdges,
    Tree12,
    Tree15,
    /// `G_5`, that is `family_g(2)`.
    G5Family,
    /// A 14-vertex second-player win tree with response pair `(u, v) = (v4, v7)`.
    ResponsePairTree,
    /// Path a-b-c-d-e-f with a leaf g on d.
    AlmostGraphAG,
    /// The opposable homomorphic product drawing, C4 ⋉ P3.
    HomProductOpposable,
    /// The non-opposable drawing, P3 ⋉ C4.
    HomProductNonOpposable,
}

impl FigureId {
    pub fn all() -> Vec<FigureId> {
        let mut v = vec![FigureId::P3uC3];
        v.extend((1..=5).map(FigureId::SevenVertexFive));
        v.extend([
            FigureId::SevenVertexFewestEdges,
            FigureId::Tree12,
            FigureId::Tree15,
            FigureId::G5Family,
            FigureId::ResponsePairTree,
            FigureId::AlmostGraphAG,
            FigureId::HomProductOpposable,
            FigureId::HomProductNonOpposable,
        ]);
        v
    }

    pub fn name(self) -> String {
        match self {
            FigureId::P3uC3 => "P3uC3".into(),
            FigureId::SevenVertexFive(i) => format!("SevenVertexFive{i}"),
            FigureId::SevenVertexFewestEdges => "SevenVertexFewestEdges".into(),
            FigureId::Tree12 => "Tree12".into(),
            FigureId::Tree15 => "Tree15".into(),
            FigureId::G5Family => "G5Family".into(),
            FigureId::ResponsePairTree => "ResponsePairTree".into(),
            FigureId::AlmostGraphAG => "AlmostGraphAG".into(),
            FigureId::HomProductOpposable => "HomProductOpposable".into(),
            FigureId::HomProductNonOpposable => "HomProductNonOpposable".into(),
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for FigureId {
    type Err = ConstructionError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.to_ascii_lowercase().replace(['-', '_'], "");
        FigureId::all()
            .into_iter()
            .find(|id| id.name().to_ascii_lowercase() == key)
            .ok_or_else(|| ConstructionError::UnknownFigure(s.to_string()))
    }
}

/// A catalogued graph with its vertex labels and any marked vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Figure {
    pub id: FigureId,
    #[serde(skip)]
    pub graph: Graph,
    pub labels: Vec<String>,
    pub marked: Vec<(String, usize)>,
}

impl Figure {
    pub fn vertex(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn marked(&self, name: &str) -> Option<usize> {
        self.marked.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }
}

/// Builds a graph from label-named edges; labels are numbered in the order
/// given by `labels`.
fn labelled(id: FigureId, labels: &[&str], edges: &[(&str, &str)]) -> Figure {
    let idx = |l: &str| labels.iter().position(|x| *x == l).unwrap_or_else(|| panic!("unknown label {l}"));
    let g = Graph::from_edges(labels.len(), edges.iter().map(|&(a, b)| (idx(a), idx(b))))
        .expect("catalogue graphs are valid");
    Figure { id, graph: g, labels: labels.iter().map(|s| s.to_string()).collect(), marked: Vec::new() }
}

fn numbered(prefix: &str, range: std::ops::RangeInclusive<usize>) -> Vec<String> {
    range.map(|i| format!("{prefix}{i}")).collect()
}

fn from_names(id: FigureId, names: Vec<String>, edges: &[(usize, usize)], first: usize) -> Figure {
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let pairs: Vec<(&str, &str)> = edges.iter().map(|&(a, b)| (refs[a - first], refs[b - first])).collect();
    labelled(id, &refs, &pairs)
}

pub fn paper_graph(id: FigureId) -> Figure {
    match id {
        FigureId::P3uC3 => labelled(
            id,
            &["p1", "p2", "p3", "c1", "c2", "c3"],
            &[("p1", "p2"), ("p2", "p3"), ("c1", "c2"), ("c2", "c3"), ("c3", "c1")],
        ),
        FigureId::SevenVertexFive(k) => {
            let (prefix, edges): (&str, &[(usize, usize)]) = match k {
                1 => ("a", &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1), (6, 7), (7, 3), (5, 1)]),
                2 => ("b", &[(2, 1), (1, 6), (6, 5), (5, 4), (4, 3), (3, 2), (2, 7), (2, 5), (1, 4), (4, 6)]),
                // c5c6 is missing from the drawing; without it the graph is a first-player win
                3 => ("c", &[(5, 4), (4, 3), (3, 2), (2, 1), (1, 5), (5, 7), (2, 6), (6, 3), (1, 3), (2, 4), (5, 6)]),
                4 => (
                    "d",
                    &[(6, 7), (7, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1), (1, 3), (3, 5), (5, 7), (7, 2)],
                ),
                5 => (
                    "e",
                    &[
                        (1, 2),
                        (2, 3),
                        (3, 4),
                        (4, 1),
                        (1, 7),
                        (7, 2),
                        (2, 6),
                        (6, 3),
                        (3, 5),
                        (5, 6),
                        (6, 4),
                        (4, 5),
                        (5, 1),
                    ],
                ),
                _ => panic!("SevenVertexFive takes 1..=5, got {k}"),
            };
            from_names(id, numbered(prefix, 1..=7), edges, 1)
        }
        FigureId::SevenVertexFewestEdges => from_names(
            id,
            numbered("v", 1..=7),
            &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1), (7, 1), (7, 4), (2, 6)],
            1,
        ),
        FigureId::Tree12 => from_names(
            id,
            numbered("v", 1..=12),
            &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (9, 8), (8, 3), (3, 10), (10, 11), (5, 12)],
            1,
        ),
        FigureId::Tree15 => from_names(
            id,
            numbered("u", 1..=15),
            &[
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 6),
                (6, 7),
                (8, 9),
                (9, 10),
                (10, 4),
                (4, 11),
                (11, 12),
                (12, 13),
                (14, 12),
                (15, 5),
            ],
            1,
        ),
        FigureId::G5Family => {
            let g = family_g(2).expect("G5 fits");
            let mut labels: Vec<String> = vec!["u".into(), "v".into()];
            labels.extend((2..5).map(|i| format!("k{i}")));
            labels.push("x".into());
            labels.extend((1..=2).map(|i| format!("p{i}")));
            Figure { id, graph: g, labels, marked: Vec::new() }
        }
        FigureId::ResponsePairTree => {
            let mut f = from_names(
                id,
                numbered("v", 0..=13),
                &[
                    (0, 1),
                    (1, 2),
                    (2, 3),
                    (3, 4),
                    (4, 5),
                    (5, 6),
                    (6, 7),
                    (7, 8),
                    (7, 9),
                    (4, 10),
                    (10, 11),
                    (11, 12),
                    (12, 13),
                ],
                0,
            );
            f.marked = vec![("u".into(), 4), ("v".into(), 7)];
            f
        }
        FigureId::AlmostGraphAG => labelled(
            id,
            &["a", "b", "c", "d", "e", "f", "g"],
            &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "f"), ("d", "g")],
        ),
        FigureId::HomProductOpposable => hom_drawing(id, 3, 4),
        FigureId::HomProductNonOpposable => hom_drawing(id, 4, 3),
    }
}

/// The two homomorphic-product drawings. Node `xy` sits in column `x`
/// (`1..=cols`) and row `y` (`1..=rows`); it gets index `(y-1)*cols + (x-1)`.
fn hom_drawing(id: FigureId, cols: usize, rows: usize) -> Figure {
    let at = |x: usize, y: usize| (y - 1) * cols + (x - 1);
    let mut edges = Vec::new();
    if cols == 3 {
        for y in 1..=4 {
            edges.extend([(at(1, y), at(2, y)), (at(2, y), at(3, y)), (at(3, y), at(1, y))]);
        }
        for y in 1..=3 {
            edges.extend([(at(1, y), at(3, y + 1)), (at(1, y + 1), at(3, y))]);
        }
        edges.extend([(at(1, 1), at(3, 4)), (at(1, 4), at(3, 1))]);
    } else {
        for y in 1..=3 {
            edges.extend([
                (at(1, y), at(2, y)),
                (at(2, y), at(3, y)),
                (at(3, y), at(4, y)),
                (at(4, y), at(1, y)),
                (at(4, y), at(2, y)),
                (at(3, y), at(1, y)),
            ]);
        }
        for y in 1..=2 {
            edges.extend([
                (at(1, y), at(3, y + 1)),
                (at(3, y), at(1, y + 1)),
                (at(2, y), at(4, y + 1)),
                (at(4, y), at(2, y + 1)),
            ]);
        }
    }
    let graph = Graph::from_edges(cols * rows, edges).expect("drawing fits");
    let labels = (0..cols * rows).map(|i| format!("{}{}", i % cols + 1, i / cols + 1)).collect();
    Figure { id, graph, labels, marked: Vec::new() }
}

/// The n-firework: `n` pendant leaves ("confetti") on each of the shells `u`
/// and `v`. Leaves on `u` come first, numbered from `|V(G)|`.
pub fn firework(g: &Graph, u: usize, v: usize, n: usize) -> Result<Graph, ConstructionError> {
    if u == v {
        return Err(ConstructionError::SameVertex);
    }
    for w in [u, v] {
        if w >= g.order() {
            return Err(ConstructionError::OutOfRange(w));
        }
    }
    Ok(g.add_leaves(u, n)?.add_leaves(v, n)?)
}

/// Firework with the default `n = |V(G)|`.
pub fn firework_default(g: &Graph, u: usize, v: usize) -> Result<Graph, ConstructionError> {
    firework(g, u, v, g.order())
}

/// Whether `(u, v)` meets the hypotheses under which fireworks stay second
/// player wins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FireworkCheck {
    pub second_player_wins: bool,
    pub response_pair: bool,
    pub distance: Distance,
}

impl FireworkCheck {
    pub fn holds(&self) -> bool {
        self.second_player_wins && self.response_pair && self.distance.at_least(3)
    }
}

pub fn check_firework_hypotheses(solver: &mut Solver, g: &Graph, u: usize, v: usize) -> FireworkCheck {
    FireworkCheck {
        second_player_wins: solver.outcome(g) == OutcomeClass::SecondWins,
        response_pair: solver.is_response_pair(g, u, v),
        distance: g.distance(u, v),
    }
}

/// `G_{2n+1}`: K_{2n+1} on `0..=2n` with the edge `01` subdivided by
/// `x = 2n+1`, and `2n-2` pendants on `x` numbered after it.
pub fn family_g(n: usize) -> Result<Graph, ConstructionError> {
    if n < 2 {
        return Err(ConstructionError::FamilyTooSmall(n));
    }
    let k = 2 * n + 1;
    let total = 4 * n;
    if total > crate::graph::MAX_VERTICES {
        return Err(GraphError::TooManyVertices { requested: total }.into());
    }
    let mut edges: Vec<(usize, usize)> =
        (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).filter(|&e| e != (0, 1)).collect();
    let x = k;
    edges.extend([(0, x), (1, x)]);
    edges.extend((x + 1..total).map(|p| (x, p)));
    Ok(Graph::from_edges(total, edges)?)
}

/// Untints a position: keep the playable vertices, join a blue apex to every
/// blue-tinted one and a red apex to every red-tinted one, then hang `k`
/// leaves on each apex. Numbering: residual vertices in their original
/// order, blue apex, red apex, blue leaves, red leaves.
pub fn detint(p: &Position, k: usize) -> Result<Graph, ConstructionError> {
    let live = p.live_vertices();
    let (residual, index) = p.graph().induced_subgraph(live);
    let tinted = |want: VertexState| -> VertexSet {
        live.iter().filter(|&v| p.state(v) == want).map(|v| index[v].expect("live vertex")).collect()
    };
    let blue = tinted(VertexState::TintedBlue);
    let red = tinted(VertexState::TintedRed);
    let with_blue = residual.add_vertex(blue)?;
    let blue_apex = with_blue.order() - 1;
    let with_red = with_blue.add_vertex(red)?;
    let red_apex = with_red.order() - 1;
    Ok(with_red.add_leaves(blue_apex, k)?.add_leaves(red_apex, k)?)
}

/// Smallest `k ≤ max_k` for which `detint(p, k)` has the same outcome as `p`.
/// Experimental: there is no known bound on the needed `k`.
pub fn min_detint_k(solver: &mut Solver, p: &Position, max_k: usize) -> Result<Option<usize>, ConstructionError> {
    let target = solver.outcome_of_position(p);
    for k in 0..=max_k {
        if solver.outcome(&detint(p, k)?) == target {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seven_vertex_c_as_drawn_is_first_player_win() {
        let drawn =
            Graph::from_edges(7, [(4, 3), (3, 2), (2, 1), (1, 0), (0, 4), (4, 6), (1, 5), (5, 2), (0, 2), (1, 3)])
                .unwrap();
        assert_eq!(crate::snort::outcome(&drawn), crate::OutcomeClass::FirstWins);
        let fixed = paper_graph(FigureId::SevenVertexFive(3)).graph;
        assert_eq!(crate::snort::outcome(&fixed), crate::OutcomeClass::SecondWins);
        assert_eq!(fixed.size(), drawn.size() + 1);
    }

    #[test]
    fn catalogue_shapes() {
        let f = paper_graph(FigureId::P3uC3);
        assert_eq!((f.graph.order(), f.graph.size()), (6, 5));
        let ag = paper_graph(FigureId::AlmostGraphAG);
        assert!(ag.graph.is_tree());
        assert_eq!(ag.graph.degree(ag.vertex("d").unwrap()), 3);
        for (id, n) in [(FigureId::Tree12, 12), (FigureId::Tree15, 15), (FigureId::ResponsePairTree, 14)] {
            let f = paper_graph(id);
            assert_eq!(f.graph.order(), n);
            assert!(f.graph.is_tree(), "{id}");
        }
        for k in 1..=5 {
            let f = paper_graph(FigureId::SevenVertexFive(k));
            assert_eq!(f.graph.order(), 7);
            assert!(f.graph.is_connected());
        }
        let rpt = paper_graph(FigureId::ResponsePairTree);
        assert_eq!(rpt.graph.distance(rpt.marked("u").unwrap(), rpt.marked("v").unwrap()), Distance::Finite(3));
        assert_eq!(paper_graph(FigureId::HomProductOpposable).graph.order(), 12);
        for id in FigureId::all() {
            assert_eq!(id.name().parse::<FigureId>().unwrap(), id);
            assert_eq!(paper_graph(id).labels.len(), paper_graph(id).graph.order());
        }
        assert_eq!("p3uc3".parse::<FigureId>().unwrap(), FigureId::P3uC3);
        assert!("nope".parse::<FigureId>().is_err());
    }

    #[test]
    fn fireworks() {
        let g = paper_graph(FigureId::ResponsePairTree).graph;
        let f = firework(&g, 4, 7, 14).unwrap();
        assert_eq!(f.order(), 42);
        assert_eq!(firework(&g, 4, 7, 0).unwrap(), g);
        let f = firework(&g, 4, 7, 3).unwrap();
        assert_eq!(f.degree(4), g.degree(4) + 3);
        assert_eq!(f.degree(7), g.degree(7) + 3);
        assert!((14..20).all(|x| f.degree(x) == 1));
        assert_eq!(firework(&g, 4, 4, 1), Err(ConstructionError::SameVertex));
        assert!(matches!(firework(&g, 4, 7, 30), Err(ConstructionError::Graph(_))));
        assert_eq!(firework_default(&g, 4, 7).unwrap().order(), 42);
    }

    #[test]
    fn family() {
        let g5 = family_g(2).unwrap();
        assert_eq!(g5.order(), 8);
        for n in 2..=4 {
            let g = family_g(n).unwrap();
            assert_eq!(g.order(), 4 * n);
            let leaves: Vec<usize> = (0..g.order()).filter(|&v| g.degree(v) == 1).collect();
            assert_eq!(leaves.len(), 2 * n - 2);
            let hubs: VertexSet = leaves.iter().flat_map(|&l| g.neighbors(l)).collect();
            assert_eq!(hubs.to_vec(), vec![2 * n + 1]);
        }
        assert_eq!(family_g(1), Err(ConstructionError::FamilyTooSmall(1)));
        assert!(family_g(17).is_err());
    }

    #[test]
    fn detint_shapes() {
        let p = Position::initial(Graph::path(3).unwrap());
        let g = detint(&p, 0).unwrap();
        assert_eq!(g.order(), 5);
        assert_eq!(g.size(), 2);
        let g = Graph::path(4).unwrap();
        let tinted = Position::from_states(
            g,
            vec![VertexState::TintedBlue, VertexState::Free, VertexState::TintedRed, VertexState::TintedBlue],
        )
        .unwrap();
        let d = detint(&tinted, 5).unwrap();
        assert_eq!(d.order(), 4 + 2 + 10);
        assert!(!d.has_edge(4, 5));
        assert_eq!(d.degree(4), 2 + 5);
        assert_eq!(d.degree(5), 1 + 5);
    }
}
