//! Simple undirected graphs on at most 64 vertices, stored as per-vertex
//! neighbourhood bitsets.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph would have {requested} vertices, the limit is {MAX_VERTICES}")]
    TooManyVertices { requested: usize },
    #[error("vertex {vertex} out of range for a graph of order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("invalid edge list: {0}")]
    EdgeList(String),
}

fn check_order(n: usize) -> Result<(), GraphError> {
    if n > MAX_VERTICES {
        Err(GraphError::TooManyVertices { requested: n })
    } else {
        Ok(())
    }
}

#[inline]
fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A set of vertex indices in `0..64`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn full(n: usize) -> Self {
        VertexSet(low_mask(n))
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(1u64 << v)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, v: usize) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u64 << v);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Smallest element, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> VertexIter {
        VertexIter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = VertexIter;
    fn into_iter(self) -> VertexIter {
        self.iter()
    }
}

/// Ascending iterator over the members of a [`VertexSet`].
#[derive(Clone)]
pub struct VertexIter(u64);

impl Iterator for VertexIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for VertexIter {}

/// A total map on `0..n`, used for automorphisms, oppositions and relabellings.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexMap(Vec<usize>);

impl VertexMap {
    pub fn new(img: Vec<usize>) -> Self {
        VertexMap(img)
    }

    pub fn identity(n: usize) -> Self {
        VertexMap((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: usize) -> usize {
        self.0[v]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn is_bijection(&self) -> bool {
        let n = self.0.len();
        let mut seen = vec![false; n];
        for &w in &self.0 {
            if w >= n || seen[w] {
                return false;
            }
            seen[w] = true;
        }
        true
    }

    /// `self ∘ self = id`.
    pub fn is_involution(&self) -> bool {
        let n = self.0.len();
        self.0.iter().enumerate().all(|(v, &w)| w < n && self.0[w] == v)
    }

    pub fn fixed_points(&self) -> VertexSet {
        self.0.iter().enumerate().filter(|&(v, &w)| v == w).map(|(v, _)| v).collect()
    }

    pub fn inverse(&self) -> Option<VertexMap> {
        if !self.is_bijection() {
            return None;
        }
        let mut inv = vec![0; self.0.len()];
        for (v, &w) in self.0.iter().enumerate() {
            inv[w] = v;
        }
        Some(VertexMap(inv))
    }
}

impl fmt::Debug for VertexMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VertexMap{:?}", self.0)
    }
}

/// Hop distance between two vertices; vertices in different components are
/// at [`Distance::Infinite`], which compares greater than every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    pub fn at_least(self, k: usize) -> bool {
        self >= Distance::Finite(k)
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

/// The named families accepted by [`Graph::named`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedGraph {
    Path(usize),
    Cycle(usize),
    Complete(usize),
    Empty(usize),
    /// `Broom(n, m)`: a path on `n` vertices with `m` leaves on its last vertex.
    Broom(usize, usize),
}

/// An immutable simple graph.
///
/// Invariants: `adj[v]` never contains `v`, adjacency is symmetric, and no bit
/// at or above `n` is set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges().collect::<Vec<_>>())
    }
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Graph, GraphError> {
        check_order(n)?;
        Ok(Graph { n, adj: vec![0; n] })
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n)?;
        for (u, v) in edges {
            g.insert_edge(u, v)?;
        }
        Ok(g)
    }

    /// Builds a graph from raw neighbourhood masks, symmetrising and dropping
    /// loops and out-of-range bits.
    pub fn from_adjacency(adj: &[u64]) -> Result<Graph, GraphError> {
        let n = adj.len();
        check_order(n)?;
        let mask = low_mask(n);
        let mut out = vec![0u64; n];
        for (v, &row) in adj.iter().enumerate() {
            let row = row & mask & !(1u64 << v);
            out[v] |= row;
            for w in VertexSet(row) {
                out[w] |= 1u64 << v;
            }
        }
        Ok(Graph { n, adj: out })
    }

    pub(crate) fn insert_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        for x in [u, v] {
            if x >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: x, order: self.n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.adj[u] |= 1u64 << v;
        self.adj[v] |= 1u64 << u;
        Ok(())
    }

    /// Path vertices are numbered along the path.
    pub fn path(n: usize) -> Result<Graph, GraphError> {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i)))
    }

    /// `cycle(n)` for `n < 3` degenerates to `path(n)`.
    pub fn cycle(n: usize) -> Result<Graph, GraphError> {
        let mut g = Graph::path(n)?;
        if n >= 3 {
            g.insert_edge(n - 1, 0)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Result<Graph, GraphError> {
        check_order(n)?;
        let full = low_mask(n);
        Ok(Graph { n, adj: (0..n).map(|v| full & !(1u64 << v)).collect() })
    }

    /// Path `0..n` followed by leaves `n..n+m`, all attached to vertex `n-1`.
    /// With `n == 0` the leaves are isolated.
    pub fn broom(n: usize, m: usize) -> Result<Graph, GraphError> {
        check_order(n + m)?;
        let g = Graph::path(n)?;
        if n == 0 {
            return Graph::empty(m);
        }
        g.add_leaves(n - 1, m)
    }

    pub fn named(kind: NamedGraph) -> Result<Graph, GraphError> {
        match kind {
            NamedGraph::Path(n) => Graph::path(n),
            NamedGraph::Cycle(n) => Graph::cycle(n),
            NamedGraph::Complete(n) => Graph::complete(n),
            NamedGraph::Empty(n) => Graph::empty(n),
            NamedGraph::Broom(n, m) => Graph::broom(n, m),
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Raw neighbourhood masks, one per vertex.
    pub fn adjacency(&self) -> &[u64] {
        &self.adj
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v])
    }

    pub fn closed_neighborhood(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v] | 1u64 << v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u] >> v & 1 == 1
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| VertexSet(self.adj[u] & !low_mask(u + 1)).iter().map(move |v| (u, v)))
    }

    pub fn complement(&self) -> Graph {
        let full = low_mask(self.n);
        Graph { n: self.n, adj: self.adj.iter().enumerate().map(|(v, &r)| !r & full & !(1u64 << v)).collect() }
    }

    /// The subgraph induced on `keep`, relabelled in ascending original
    /// order. The second component maps old indices to new ones.
    pub fn induced_subgraph(&self, keep: VertexSet) -> (Graph, Vec<Option<usize>>) {
        let keep = keep.intersection(self.vertices());
        let mut index = vec![None; self.n];
        let kept: Vec<usize> = keep.to_vec();
        for (new, &old) in kept.iter().enumerate() {
            index[old] = Some(new);
        }
        let adj = kept.iter().map(|&old| compress(self.adj[old] & keep.0, keep.0)).collect();
        (Graph { n: kept.len(), adj }, index)
    }

    /// `self` with `other` appended; `other`'s vertex `i` becomes `order() + i`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph, GraphError> {
        let n = self.n + other.n;
        check_order(n)?;
        let shift = self.n;
        let mut adj = self.adj.clone();
        adj.extend(other.adj.iter().map(|&r| r << shift));
        Ok(Graph { n, adj })
    }

    /// Adds `k` new degree-one vertices `order()..order()+k`, each adjacent to `v`.
    pub fn add_leaves(&self, v: usize, k: usize) -> Result<Graph, GraphError> {
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange { vertex: v, order: self.n });
        }
        let n = self.n + k;
        check_order(n)?;
        let mut g = self.clone();
        for leaf in self.n..n {
            g.adj.push(0);
            g.n += 1;
            g.insert_edge(v, leaf)?;
        }
        Ok(g)
    }

    /// Adds one vertex adjacent to exactly `nbrs`; returns the new graph.
    pub fn add_vertex(&self, nbrs: VertexSet) -> Result<Graph, GraphError> {
        check_order(self.n + 1)?;
        let new = self.n;
        let nbrs = nbrs.intersection(self.vertices());
        let mut adj = self.adj.clone();
        for w in nbrs {
            adj[w] |= 1u64 << new;
        }
        adj.push(nbrs.0);
        Ok(Graph { n: new + 1, adj })
    }

    pub fn distance(&self, u: usize, v: usize) -> Distance {
        if u == v {
            return Distance::Finite(0);
        }
        let mut seen = 1u64 << u;
        let mut frontier = 1u64 << u;
        let mut d = 0;
        while frontier != 0 {
            d += 1;
            let mut next = 0u64;
            for w in VertexSet(frontier) {
                next |= self.adj[w];
            }
            next &= !seen;
            if next >> v & 1 == 1 {
                return Distance::Finite(d);
            }
            seen |= next;
            frontier = next;
        }
        Distance::Infinite
    }

    /// Vertex sets of the connected components, ordered by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        components_within(&self.adj, self.vertices().0).into_iter().map(VertexSet).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn is_tree(&self) -> bool {
        self.n > 0 && self.size() == self.n - 1 && self.is_connected()
    }

    /// Relabels so that vertex `v` becomes `perm[v]`.
    pub fn permute(&self, perm: &VertexMap) -> Graph {
        let mut adj = vec![0u64; self.n];
        for (u, v) in self.edges() {
            let (a, b) = (perm.get(u), perm.get(v));
            adj[a] |= 1u64 << b;
            adj[b] |= 1u64 << a;
        }
        Graph { n: self.n, adj }
    }

    /// True iff `f` is a bijection of the vertex set preserving adjacency and
    /// non-adjacency.
    pub fn is_automorphism(&self, f: &VertexMap) -> bool {
        if f.len() != self.n || !f.is_bijection() {
            return false;
        }
        (0..self.n).all(|u| {
            let image: u64 = VertexSet(self.adj[u]).iter().map(|w| 1u64 << f.get(w)).fold(0, |a, b| a | b);
            image == self.adj[f.get(u)]
        })
    }

    /// Parses the plain-text fixture format: the vertex count on the first
    /// line, then one `u v` edge per line. Blank lines and `#` comments are
    /// ignored.
    pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
        let mut lines = text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| GraphError::EdgeList("missing vertex count".into()))?;
        let n: usize = header.parse().map_err(|_| GraphError::EdgeList(format!("bad vertex count {header:?}")))?;
        let mut g = Graph::empty(n)?;
        for line in lines {
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| GraphError::EdgeList(format!("bad edge line {line:?}"))))
                .collect::<Result<_, _>>()?;
            match nums[..] {
                [u, v] => g.insert_edge(u, v)?,
                _ => return Err(GraphError::EdgeList(format!("bad edge line {line:?}"))),
            }
        }
        Ok(g)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

/// Packs the bits of `x` selected by `mask` into the low bits (software pext).
pub(crate) fn compress(x: u64, mask: u64) -> u64 {
    let mut out = 0u64;
    for (i, v) in VertexSet(mask).iter().enumerate() {
        out |= (x >> v & 1) << i;
    }
    out
}

/// Connected components of the subgraph induced on `within`.
pub(crate) fn components_within(adj: &[u64], within: u64) -> Vec<u64> {
    let mut rest = within;
    let mut out = Vec::new();
    while rest != 0 {
        let start = rest & rest.wrapping_neg();
        let mut comp = start;
        let mut frontier = start;
        while frontier != 0 {
            let mut next = 0u64;
            for w in VertexSet(frontier) {
                next |= adj[w];
            }
            next &= within & !comp;
            comp |= next;
            frontier = next;
        }
        out.push(comp);
        rest &= !comp;
    }
    out
}

/// Breadth-first distances from `src` to every vertex (`None` if unreachable).
pub fn bfs_distances(g: &Graph, src: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.order()];
    let mut queue = VecDeque::from([src]);
    dist[src] = Some(0);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap_or(0);
        for w in g.neighbors(u) {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_and_cycle_numbering() {
        let p3 = Graph::path(3).unwrap();
        assert_eq!(p3.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert_eq!(Graph::cycle(3).unwrap(), Graph::complete(3).unwrap());
        assert_eq!(Graph::cycle(4).unwrap().size(), 4);
    }

    #[test]
    fn broom_layout() {
        let b = Graph::broom(5, 3).unwrap();
        assert_eq!(b.order(), 8);
        assert_eq!(b.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (4, 6), (4, 7)]);
    }

    #[test]
    fn size_limits() {
        assert!(Graph::path(64).is_ok());
        assert_eq!(Graph::path(65), Err(GraphError::TooManyVertices { requested: 65 }));
        assert!(Graph::broom(60, 5).is_err());
        let p = Graph::path(60).unwrap();
        assert!(p.add_leaves(0, 5).is_err());
        assert!(p.disjoint_union(&Graph::path(5).unwrap()).is_err());
    }

    #[test]
    fn complements() {
        assert_eq!(Graph::complete(4).unwrap().complement(), Graph::empty(4).unwrap());
        let c = Graph::path(3).unwrap().complement();
        assert_eq!(c.edges().collect::<Vec<_>>(), vec![(0, 2)]);
    }

    #[test]
    fn induced_subgraphs() {
        let c4 = Graph::cycle(4).unwrap();
        let (h, idx) = c4.induced_subgraph(VertexSet::from_iter([0, 1, 2]));
        assert_eq!(h, Graph::path(3).unwrap());
        assert_eq!(idx, vec![Some(0), Some(1), Some(2), None]);
        let (same, _) = c4.induced_subgraph(c4.vertices());
        assert_eq!(same, c4);
        // a-b-c-d-e-f with g on d, minus {c, d, g}
        let ag = Graph::from_edges(7, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (3, 6)]).unwrap();
        let (rest, _) = ag.induced_subgraph(ag.vertices().difference(VertexSet::from_iter([2, 3, 6])));
        assert_eq!(rest, Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap());
    }

    #[test]
    fn unions_and_leaves() {
        let g = Graph::path(3).unwrap().disjoint_union(&Graph::cycle(3).unwrap()).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.size(), 5);
        assert_eq!(g.components().len(), 2);
        assert_eq!(g.disjoint_union(&Graph::empty(0).unwrap()).unwrap(), g);
        assert_eq!(g.distance(0, 4), Distance::Infinite);
        assert!(g.distance(0, 4).at_least(3));
        let star = Graph::path(1).unwrap().add_leaves(0, 2).unwrap();
        assert_eq!(star.degree(0), 2);
        assert_eq!(g.add_leaves(2, 0).unwrap(), g);
    }

    #[test]
    fn neighbourhoods() {
        let p3 = Graph::path(3).unwrap();
        assert_eq!(p3.closed_neighborhood(1), p3.vertices());
        assert_eq!(p3.distance(0, 2), Distance::Finite(2));
        assert_eq!(bfs_distances(&p3, 0), vec![Some(0), Some(1), Some(2)]);
    }

    #[test]
    fn automorphisms() {
        let c4 = Graph::cycle(4).unwrap();
        assert!(c4.is_automorphism(&VertexMap::identity(4)));
        assert!(c4.is_automorphism(&VertexMap::new(vec![2, 3, 0, 1])));
        assert!(!c4.is_automorphism(&VertexMap::new(vec![1, 0, 2, 3])));
        assert!(!c4.is_automorphism(&VertexMap::new(vec![0, 0, 2, 3])));
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::broom(4, 2).unwrap();
        assert_eq!(Graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
        assert!(Graph::parse_edge_list("3\n0 3\n").is_err());
        assert!(Graph::parse_edge_list("3\n1 1\n").is_err());
        assert!(Graph::parse_edge_list("# nothing\n").is_err());
    }
}
