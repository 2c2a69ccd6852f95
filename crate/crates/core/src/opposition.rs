//! Oppositions, opposition matchings, almost-opposability and compatible
//! extensions.
//!
//! An opposition of G is an automorphism `f` of order two with
//! `f(v) ∉ N[v]` for every `v`. Equivalently the complement of G has a
//! perfect matching in which every two matching edges induce K4, C4 or 2K2
//! (in the complement). The matcher below searches for such a matching,
//! extending it one edge at a time.

use std::ops::ControlFlow;

use serde::Serialize;
use thiserror::Error;

use crate::canon::refinement_classes;
use crate::graph::{Graph, VertexMap, VertexSet};

/// Largest order accepted by [`brute_force_oppositions`].
pub const BRUTE_FORCE_LIMIT: usize = 10;
/// Default cap on `deg(u)` when enumerating admissible sets around `u`.
pub const DEFAULT_DEGREE_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OppositionError {
    #[error("brute-force enumeration is limited to {BRUTE_FORCE_LIMIT} vertices, got {0}")]
    TooLarge(usize),
    #[error("vertex {vertex} has degree {degree}, above the admissible-set cap of {cap}")]
    DegreeCap { vertex: usize, degree: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("the parts do not partition the vertex set")]
    NotAPartition,
    #[error("{parts} parts but {maps} oppositions")]
    CountMismatch { parts: usize, maps: usize },
    #[error("the map given for part {0} is not an opposition of that part")]
    InvalidOpposition(usize),
}

/// A verified opposition of a particular graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Opposition(VertexMap);

impl Opposition {
    /// Wraps `f` after checking it against `g`.
    pub fn new(g: &Graph, f: VertexMap) -> Option<Opposition> {
        verify_opposition(g, &f).then_some(Opposition(f))
    }

    pub fn map(&self) -> &VertexMap {
        &self.0
    }

    pub fn image(&self, v: usize) -> usize {
        self.0.get(v)
    }

    pub fn into_map(self) -> VertexMap {
        self.0
    }

    /// The matching `{v, f(v)}`, each pair listed once with its smaller end first.
    pub fn matching(&self) -> OppositionMatching {
        let pairs = (0..self.0.len()).filter(|&v| v < self.0.get(v)).map(|v| (v, self.0.get(v))).collect();
        OppositionMatching { pairs }
    }
}

/// A perfect matching of the complement whose edges pairwise induce K4, C4
/// or 2K2 there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OppositionMatching {
    pub pairs: Vec<(usize, usize)>,
}

impl OppositionMatching {
    pub fn to_map(&self, n: usize) -> VertexMap {
        let mut img: Vec<usize> = (0..n).collect();
        for &(a, b) in &self.pairs {
            img[a] = b;
            img[b] = a;
        }
        VertexMap::new(img)
    }

    /// Checks the matching conditions directly in the complement.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let n = g.order();
        let comp = g.complement();
        let mut seen = VertexSet::EMPTY;
        for &(a, b) in &self.pairs {
            if a >= n || b >= n || !comp.has_edge(a, b) || seen.contains(a) || seen.contains(b) {
                return false;
            }
            seen.insert(a);
            seen.insert(b);
        }
        if seen.len() != n {
            return false;
        }
        self.pairs.iter().enumerate().all(|(i, &(a, b))| {
            self.pairs[i + 1..].iter().all(|&(c, d)| {
                let cross = [comp.has_edge(a, c), comp.has_edge(a, d), comp.has_edge(b, c), comp.has_edge(b, d)];
                match cross {
                    // K4
                    [true, true, true, true] => true,
                    // C4 through a-c, b-d or a-d, b-c
                    [true, false, false, true] | [false, true, true, false] => true,
                    // just the two matching edges
                    [false, false, false, false] => true,
                    _ => false,
                }
            })
        })
    }
}

/// Checks the four defining clauses separately and returns their conjunction.
pub fn verify_opposition(g: &Graph, f: &VertexMap) -> bool {
    let n = g.order();
    if f.len() != n || f.as_slice().iter().any(|&w| w >= n) {
        return false;
    }
    let automorphism = g.is_automorphism(f);
    let involution = f.is_involution();
    let fixed_point_free = f.fixed_points().is_empty();
    let avoids_closed_neighbourhood = (0..n).all(|v| !g.closed_neighborhood(v).contains(f.get(v)));
    automorphism && involution && fixed_point_free && avoids_closed_neighbourhood
}

struct Matcher<'a> {
    adj: &'a [u64],
    partner: Vec<usize>,
}

impl Matcher<'_> {
    /// Pairs the most constrained unmatched vertex with each remaining
    /// candidate. `cand[x]` holds the partners still compatible with every
    /// pair chosen so far.
    fn search<F>(&mut self, unmatched: u64, cand: &[u64], visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if unmatched == 0 {
            return visit(&self.partner);
        }
        let mut best: Option<(usize, u32)> = None;
        for x in VertexSet(unmatched) {
            let c = (cand[x] & unmatched).count_ones();
            if c == 0 {
                return ControlFlow::Continue(());
            }
            if best.is_none_or(|(_, bc)| c < bc) {
                best = Some((x, c));
            }
        }
        let (a, _) = best.expect("unmatched is nonempty");
        for b in VertexSet(cand[a] & unmatched) {
            let rest = unmatched & !(1u64 << a) & !(1u64 << b);
            let (na, nb) = (self.adj[a], self.adj[b]);
            let mut next = cand.to_vec();
            for x in VertexSet(rest) {
                let want_b = if na >> x & 1 == 1 { nb } else { !nb };
                let want_a = if nb >> x & 1 == 1 { na } else { !na };
                next[x] &= want_b & want_a;
            }
            self.partner[a] = b;
            self.partner[b] = a;
            self.search(rest, &next, visit)?;
        }
        ControlFlow::Continue(())
    }
}

/// Runs `visit` on every opposition of `g` (as a partner array) until it
/// breaks.
fn for_each_opposition<F>(g: &Graph, mut visit: F)
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let n = g.order();
    if n % 2 == 1 {
        return;
    }
    let adj = g.adjacency();
    let classes = refinement_classes(adj, &vec![0; n]);
    let all = VertexSet::full(n).bits();
    let cand: Vec<u64> = (0..n)
        .map(|v| {
            let same_class: u64 = (0..n).filter(|&w| classes[w] == classes[v]).fold(0, |m, w| m | 1 << w);
            same_class & all & !adj[v] & !(1u64 << v)
        })
        .collect();
    let mut m = Matcher { adj, partner: (0..n).collect() };
    let _ = m.search(all, &cand, &mut visit);
}

/// Some opposition of `g`, or `None` when `g` is not opposable. The empty
/// graph is opposable through the empty map.
pub fn find_opposition(g: &Graph) -> Option<Opposition> {
    let mut found = None;
    for_each_opposition(g, |p| {
        found = Some(VertexMap::new(p.to_vec()));
        ControlFlow::Break(())
    });
    found.map(|f| {
        debug_assert!(verify_opposition(g, &f));
        Opposition(f)
    })
}

pub fn find_opposition_matching(g: &Graph) -> Option<OppositionMatching> {
    find_opposition(g).map(|f| f.matching())
}

pub fn is_opposable(g: &Graph) -> bool {
    find_opposition(g).is_some()
}

/// Every opposition of `g`, in search order.
pub fn all_oppositions(g: &Graph) -> Vec<Opposition> {
    let mut out = Vec::new();
    for_each_opposition(g, |p| {
        out.push(Opposition(VertexMap::new(p.to_vec())));
        ControlFlow::Continue(())
    });
    out
}

/// Every perfect pairing of the vertices, filtered by [`verify_opposition`].
/// Independent of the matcher; meant as its oracle.
pub fn brute_force_oppositions(g: &Graph) -> Result<Vec<Opposition>, OppositionError> {
    let n = g.order();
    if n > BRUTE_FORCE_LIMIT {
        return Err(OppositionError::TooLarge(n));
    }
    fn pairings(left: Vec<usize>, img: &mut Vec<usize>, out: &mut Vec<VertexMap>) {
        let Some((&a, rest)) = left.split_first() else {
            out.push(VertexMap::new(img.clone()));
            return;
        };
        for i in 0..rest.len() {
            let b = rest[i];
            img[a] = b;
            img[b] = a;
            let remaining: Vec<usize> = rest.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
            pairings(remaining, img, out);
        }
    }
    if n % 2 == 1 {
        return Ok(Vec::new());
    }
    let mut maps = Vec::new();
    pairings((0..n).collect(), &mut (0..n).collect(), &mut maps);
    Ok(maps.into_iter().filter(|f| verify_opposition(g, f)).map(Opposition).collect())
}

/// All admissible sets `u ∈ S ⊆ N[u]`, each reported once with the smallest
/// `u` that admits it, ordered by `u` then by mask value.
pub fn admissible_sets(g: &Graph) -> Result<Vec<(usize, VertexSet)>, OppositionError> {
    admissible_sets_capped(g, DEFAULT_DEGREE_CAP)
}

pub fn admissible_sets_capped(g: &Graph, cap: usize) -> Result<Vec<(usize, VertexSet)>, OppositionError> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for u in 0..g.order() {
        let degree = g.degree(u);
        if degree > cap {
            return Err(OppositionError::DegreeCap { vertex: u, degree, cap });
        }
        let nb = g.neighbors(u).bits();
        let mut sets: Vec<u64> = Vec::with_capacity(1 << degree);
        // every submask of N(u)
        let mut sub = nb;
        loop {
            sets.push(sub | 1u64 << u);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & nb;
        }
        sets.sort_unstable();
        for s in sets {
            if seen.insert(s) {
                out.push((u, VertexSet(s)));
            }
        }
    }
    Ok(out)
}

/// An admissible set `S` around `u` with an opposition of `G − S`.
///
/// `map` is global: it acts as the opposition off `S` and as the identity on
/// `S`. `compat`, when present, is an order-two automorphism of G agreeing
/// with `map` off `S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlmostWitness {
    pub u: usize,
    #[serde(rename = "S")]
    pub s: VertexSet,
    pub map: VertexMap,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compat: Option<VertexMap>,
}

impl AlmostWitness {
    /// The opposition restricted to `G − S`, in the induced subgraph's labels.
    pub fn local_map(&self, g: &Graph) -> VertexMap {
        let (_, index) = g.induced_subgraph(g.vertices().difference(self.s));
        let mut img = Vec::new();
        for v in 0..g.order() {
            if index[v].is_some() {
                img.push(index[self.map.get(v)].expect("map keeps G - S"));
            }
        }
        VertexMap::new(img)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let kind = if self.compat.is_some() { "compatible-almost-opposition" } else { "almost-opposition" };
        let map = self.compat.as_ref().unwrap_or(&self.map);
        serde_json::json!({ "type": kind, "u": self.u, "S": self.s.to_vec(), "map": map.as_slice() })
    }
}

/// Witness JSON for a plain opposition.
pub fn opposition_json(f: &Opposition) -> serde_json::Value {
    serde_json::json!({ "type": "opposition", "S": [], "map": f.map().as_slice() })
}

/// Checks every clause of an almost-opposability witness.
pub fn verify_almost_witness(g: &Graph, w: &AlmostWitness) -> bool {
    let n = g.order();
    if w.u >= n || !w.s.contains(w.u) || !w.s.is_subset(g.closed_neighborhood(w.u)) {
        return false;
    }
    if w.map.len() != n || w.map.as_slice().iter().any(|&x| x >= n) {
        return false;
    }
    if w.s.iter().any(|v| w.map.get(v) != v) || (0..n).any(|v| !w.s.contains(v) && w.s.contains(w.map.get(v))) {
        return false;
    }
    let (h, _) = g.induced_subgraph(g.vertices().difference(w.s));
    if !verify_opposition(&h, &w.local_map(g)) {
        return false;
    }
    match &w.compat {
        None => true,
        Some(alpha) => {
            alpha.len() == n
                && alpha.is_involution()
                && g.is_automorphism(alpha)
                && (0..n).filter(|&v| !w.s.contains(v)).all(|v| alpha.get(v) == w.map.get(v))
        }
    }
}

fn lift_local(g: &Graph, s: VertexSet, local: &[usize]) -> VertexMap {
    let keep: Vec<usize> = g.vertices().difference(s).to_vec();
    let mut img: Vec<usize> = (0..g.order()).collect();
    for (i, &v) in keep.iter().enumerate() {
        img[v] = keep[local[i]];
    }
    VertexMap::new(img)
}

/// Every admissible `S` for which `G − S` is opposable, with one witness each.
pub fn almost_oppositions(g: &Graph) -> Result<Vec<AlmostWitness>, OppositionError> {
    let mut out = Vec::new();
    for (u, s) in admissible_sets(g)? {
        if (g.order() - s.len()) % 2 == 1 {
            continue;
        }
        let (h, _) = g.induced_subgraph(g.vertices().difference(s));
        if let Some(f) = find_opposition(&h) {
            out.push(AlmostWitness { u, s, map: lift_local(g, s, f.map().as_slice()), compat: None });
        }
    }
    Ok(out)
}

/// First admissible set (in [`admissible_sets`] order) whose removal leaves
/// an opposable graph.
pub fn find_almost_opposition(g: &Graph) -> Result<Option<AlmostWitness>, OppositionError> {
    for (u, s) in admissible_sets(g)? {
        if (g.order() - s.len()) % 2 == 1 {
            continue;
        }
        let (h, _) = g.induced_subgraph(g.vertices().difference(s));
        if let Some(f) = find_opposition(&h) {
            return Ok(Some(AlmostWitness { u, s, map: lift_local(g, s, f.map().as_slice()), compat: None }));
        }
    }
    Ok(None)
}

/// Extends `base` (identity on `s`) by an involution of `s` so the result is
/// an automorphism of `g`.
fn extend_on(g: &Graph, s: VertexSet, base: &VertexMap) -> Option<VertexMap> {
    let inside = s.to_vec();
    let mut img = base.as_slice().to_vec();
    let mut assigned = VertexSet(g.vertices().difference(s).bits());

    fn consistent(g: &Graph, img: &[usize], assigned: VertexSet, x: usize) -> bool {
        assigned.iter().all(|y| g.has_edge(x, y) == g.has_edge(img[x], img[y]))
    }
    fn go(g: &Graph, inside: &[usize], img: &mut Vec<usize>, assigned: &mut VertexSet) -> bool {
        let Some(&x) = inside.iter().find(|&&x| !assigned.contains(x)) else {
            return true;
        };
        for &t in inside {
            if assigned.contains(t) {
                continue;
            }
            img[x] = t;
            img[t] = x;
            assigned.insert(x);
            assigned.insert(t);
            if consistent(g, img, *assigned, x) && consistent(g, img, *assigned, t) && go(g, inside, img, assigned) {
                return true;
            }
            assigned.remove(x);
            assigned.remove(t);
            img[x] = x;
            img[t] = t;
        }
        false
    }
    go(g, &inside, &mut img, &mut assigned).then(|| VertexMap::new(img))
}

/// Like [`find_almost_opposition`], but the opposition of `G − S` must extend
/// to an order-two automorphism of G. Such an extension maps `S` onto itself,
/// so only involutions of `S` are tried, for every opposition of `G − S`.
pub fn find_compatible_almost_opposition(g: &Graph) -> Result<Option<AlmostWitness>, OppositionError> {
    for (u, s) in admissible_sets(g)? {
        if (g.order() - s.len()) % 2 == 1 {
            continue;
        }
        let (h, _) = g.induced_subgraph(g.vertices().difference(s));
        let mut found = None;
        for_each_opposition(&h, |local| {
            let map = lift_local(g, s, local);
            if let Some(alpha) = extend_on(g, s, &map) {
                found = Some(AlmostWitness { u, s, map, compat: Some(alpha) });
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        });
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

fn four_vertex_shape_ok(g: &Graph, q: [usize; 4]) -> bool {
    let mut deg = [0usize; 4];
    let mut edges = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            if g.has_edge(q[i], q[j]) {
                deg[i] += 1;
                deg[j] += 1;
                edges += 1;
            }
        }
    }
    match edges {
        0 => true,                        // 4K1
        2 => deg.iter().all(|&d| d == 1), // 2K2
        4 => deg.iter().all(|&d| d == 2), // C4
        _ => false,
    }
}

/// Checks a partition into opposable parts. `opps[i]` is given in the labels
/// of `induced_subgraph(g, parts[i])`. Returns the stitched opposition when
/// every two pairs from different parts induce C4, 2K2 or 4K1, and `None`
/// when some cross pair does not.
pub fn verify_decomposition(
    g: &Graph,
    parts: &[VertexSet],
    opps: &[VertexMap],
) -> Result<Option<Opposition>, DecompositionError> {
    if parts.len() != opps.len() {
        return Err(DecompositionError::CountMismatch { parts: parts.len(), maps: opps.len() });
    }
    let mut union = VertexSet::EMPTY;
    for p in parts {
        if !union.intersection(*p).is_empty() || !p.is_subset(g.vertices()) {
            return Err(DecompositionError::NotAPartition);
        }
        union = union.union(*p);
    }
    if union != g.vertices() {
        return Err(DecompositionError::NotAPartition);
    }
    let mut psi: Vec<usize> = (0..g.order()).collect();
    let mut part_of = vec![0usize; g.order()];
    for (i, (p, f)) in parts.iter().zip(opps).enumerate() {
        let (h, _) = g.induced_subgraph(*p);
        if !verify_opposition(&h, f) {
            return Err(DecompositionError::InvalidOpposition(i));
        }
        let members = p.to_vec();
        for (k, &v) in members.iter().enumerate() {
            psi[v] = members[f.get(k)];
            part_of[v] = i;
        }
    }
    let pairs: Vec<(usize, usize)> = (0..g.order()).filter(|&v| v < psi[v]).map(|v| (v, psi[v])).collect();
    for (i, &(a, b)) in pairs.iter().enumerate() {
        for &(c, d) in &pairs[i + 1..] {
            if part_of[a] != part_of[c] && !four_vertex_shape_ok(g, [a, b, c, d]) {
                return Ok(None);
            }
        }
    }
    let psi = VertexMap::new(psi);
    assert!(verify_opposition(g, &psi), "a valid decomposition stitches to an opposition");
    Ok(Some(Opposition(psi)))
}
