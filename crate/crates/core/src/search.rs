//! Isomorph-free enumeration of small graphs and free trees, and predicate
//! scans over them.
//!
//! Graphs of order `n` are grown from those of order `n - 1` by adding a
//! vertex with every possible neighbourhood and keeping one graph per
//! canonical code. Free trees are generated as rooted trees (level
//! sequences) rooted at a centroid.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::canon::{canonical_code, canonical_form, code_hex};
use crate::expr::{self, Expr, ExprError};
use crate::graph::{Graph, VertexSet};
use crate::graph6::{self, Graph6Error};
use crate::opposition::{find_almost_opposition, find_compatible_almost_opposition, is_opposable};
use crate::snort::{OutcomeClass, Solver, SolverConfig};

pub const MAX_GRAPH_ORDER: usize = 8;
pub const MAX_TREE_ORDER: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("graph enumeration is capped at order {MAX_GRAPH_ORDER}, asked for {0}")]
    GraphCap(usize),
    #[error("tree enumeration is capped at order {MAX_TREE_ORDER}, asked for {0}")]
    TreeCap(usize),
    #[error("bad predicate: {0}")]
    Predicate(#[from] ExprError),
    #[error("line {line}: {error}")]
    Graph6 { line: usize, error: Graph6Error },
    #[error("{0}")]
    Opposition(String),
}

impl SearchError {
    /// Resource caps, as opposed to malformed requests.
    pub fn is_cap(&self) -> bool {
        matches!(self, SearchError::GraphCap(_) | SearchError::TreeCap(_))
    }
}

/// One representative per isomorphism class of graphs of order `n`, in
/// canonical form, sorted by canonical code.
pub fn enumerate_graphs(n: usize, connected_only: bool) -> Result<Vec<Graph>, SearchError> {
    if n > MAX_GRAPH_ORDER {
        return Err(SearchError::GraphCap(n));
    }
    let mut level = vec![Graph::empty(0).expect("order 0")];
    for k in 1..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for g in &level {
            for nbrs in 0u64..1 << (k - 1) {
                let h = g.add_vertex(VertexSet(nbrs)).expect("order at most 8");
                let code = canonical_code(&h);
                if seen.insert(code.clone()) {
                    next.push((code, canonical_form(&h)));
                }
            }
        }
        next.sort_by(|a, b| a.0.cmp(&b.0));
        level = next.into_iter().map(|(_, g)| g).collect();
    }
    if connected_only {
        level.retain(Graph::is_connected);
    }
    Ok(level)
}

/// Rooted trees on `n` vertices as level sequences (root at level 0), in
/// decreasing lexicographic order, one per isomorphism class.
pub fn rooted_trees(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut l: Vec<usize> = (0..n).collect();
    loop {
        out.push(l.clone());
        let Some(p) = (0..n).rev().find(|&i| l[i] > 1) else {
            break;
        };
        let q = (0..p).rev().find(|&i| l[i] == l[p] - 1).expect("parent exists");
        for i in p..n {
            l[i] = l[i - (p - q)];
        }
    }
    out
}

/// Parent pointers of a level sequence (`None` for the root).
fn parents(levels: &[usize]) -> Vec<Option<usize>> {
    let mut stack: Vec<usize> = Vec::new();
    let mut out = Vec::with_capacity(levels.len());
    for (i, &lv) in levels.iter().enumerate() {
        stack.truncate(lv);
        out.push(stack.last().copied());
        stack.push(i);
    }
    out
}

fn tree_from_levels(levels: &[usize], offset: usize, edges: &mut Vec<(usize, usize)>) {
    for (i, p) in parents(levels).into_iter().enumerate() {
        if let Some(p) = p {
            edges.push((offset + p, offset + i));
        }
    }
}

/// Sizes of the subtrees hanging from the root.
fn root_branch_sizes(levels: &[usize]) -> Vec<usize> {
    let mut sizes = Vec::new();
    for &lv in &levels[1..] {
        if lv == 1 {
            sizes.push(1);
        } else {
            *sizes.last_mut().expect("a child precedes its descendants") += 1;
        }
    }
    sizes
}

/// One representative per free tree of order `n`.
///
/// A tree with a single centroid is its rooted tree at that centroid, where
/// every branch has fewer than `n/2` vertices. A tree with two centroids is
/// an unordered pair of rooted trees on `n/2` vertices joined at the roots.
pub fn enumerate_trees(n: usize) -> Result<Vec<Graph>, SearchError> {
    if n > MAX_TREE_ORDER {
        return Err(SearchError::TreeCap(n));
    }
    if n == 0 {
        return Ok(vec![Graph::empty(0).expect("order 0")]);
    }
    let mut out = Vec::new();
    for levels in rooted_trees(n) {
        if root_branch_sizes(&levels).iter().all(|&s| 2 * s < n) {
            let mut edges = Vec::new();
            tree_from_levels(&levels, 0, &mut edges);
            out.push(Graph::from_edges(n, edges).expect("tree fits"));
        }
    }
    if n.is_multiple_of(2) {
        let half = rooted_trees(n / 2);
        for i in 0..half.len() {
            for j in i..half.len() {
                let mut edges = vec![(0, n / 2)];
                tree_from_levels(&half[i], 0, &mut edges);
                tree_from_levels(&half[j], n / 2, &mut edges);
                out.push(Graph::from_edges(n, edges).expect("tree fits"));
            }
        }
    }
    Ok(out)
}

/// Reads graph6 lines (blank lines and `>>graph6<<` headers are allowed).
pub fn read_graph6_lines(text: &str) -> Result<Vec<Graph>, SearchError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| graph6::parse(l).map_err(|error| SearchError::Graph6 { line: i + 1, error }))
        .collect()
}

/// Atomic properties usable in scan predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    Connected,
    Tree,
    Opposable,
    Almost,
    Compatible,
    FirstWins,
    SecondWins,
    LeftWins,
    RightWins,
}

impl Property {
    pub const ALL: [Property; 9] = [
        Property::Connected,
        Property::Tree,
        Property::Opposable,
        Property::Almost,
        Property::Compatible,
        Property::FirstWins,
        Property::SecondWins,
        Property::LeftWins,
        Property::RightWins,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Connected => "connected",
            Property::Tree => "tree",
            Property::Opposable => "opposable",
            Property::Almost => "almost",
            Property::Compatible => "compatible",
            Property::FirstWins => "firstwins",
            Property::SecondWins => "secondwins",
            Property::LeftWins => "leftwins",
            Property::RightWins => "rightwins",
        }
    }

    fn lookup(name: &str) -> Option<Property> {
        let key = name.to_ascii_lowercase();
        let key = match key.as_str() {
            "almost_opposable" | "almostopposable" => "almost",
            "compatibly_almost_opposable" => "compatible",
            k => k,
        };
        Property::ALL.into_iter().find(|p| p.name() == key)
    }

    fn is_outcome(self) -> bool {
        matches!(self, Property::FirstWins | Property::SecondWins | Property::LeftWins | Property::RightWins)
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A scan predicate such as `secondwins & !opposable`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Predicate {
    text: String,
    expr: Expr<Property>,
}

impl Predicate {
    pub fn parse(text: &str) -> Result<Predicate, SearchError> {
        let expr = expr::parse(text, Property::lookup)?;
        Ok(Predicate { text: expr.to_string(), expr })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn expr(&self) -> &Expr<Property> {
        &self.expr
    }
}

impl FromStr for Predicate {
    type Err = SearchError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Predicate::parse(s)
    }
}

/// Kleene evaluation with unknown atoms.
fn partial(e: &Expr<Property>, known: &BTreeMap<Property, bool>) -> Option<bool> {
    match e {
        Expr::Atom(p) => known.get(p).copied(),
        Expr::Not(x) => partial(x, known).map(|b| !b),
        Expr::And(x, y) => match (partial(x, known), partial(y, known)) {
            (Some(false), _) | (_, Some(false)) => Some(false),
            (Some(true), Some(true)) => Some(true),
            _ => None,
        },
        Expr::Or(x, y) => match (partial(x, known), partial(y, known)) {
            (Some(true), _) | (_, Some(true)) => Some(true),
            (Some(false), Some(false)) => Some(false),
            _ => None,
        },
        Expr::Implies(x, y) => match (partial(x, known), partial(y, known)) {
            (Some(false), _) | (_, Some(true)) => Some(true),
            (Some(true), Some(false)) => Some(false),
            _ => None,
        },
    }
}

/// Property values computed for one graph.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Properties {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<OutcomeClass>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub flags: BTreeMap<Property, bool>,
}

/// Evaluates `pred` on `g`, computing properties cheapest first and stopping
/// once the value is determined.
pub fn evaluate(pred: &Predicate, g: &Graph, solver: &mut Solver) -> Result<(bool, Properties), SearchError> {
    let mut props = Properties::default();
    let mut needed: Vec<Property> = pred.expr.atoms();
    needed.sort();
    needed.dedup();
    for p in needed {
        if let Some(v) = partial(&pred.expr, &props.flags) {
            return Ok((v, props));
        }
        if props.flags.contains_key(&p) {
            continue;
        }
        if p.is_outcome() {
            let o = solver.outcome(g);
            props.outcome = Some(o);
            props.flags.insert(Property::FirstWins, o == OutcomeClass::FirstWins);
            props.flags.insert(Property::SecondWins, o == OutcomeClass::SecondWins);
            props.flags.insert(Property::LeftWins, o == OutcomeClass::LeftWins);
            props.flags.insert(Property::RightWins, o == OutcomeClass::RightWins);
            continue;
        }
        let v = match p {
            Property::Connected => g.is_connected(),
            Property::Tree => g.is_tree(),
            Property::Opposable => is_opposable(g),
            Property::Almost => {
                find_almost_opposition(g).map_err(|e| SearchError::Opposition(e.to_string()))?.is_some()
            }
            Property::Compatible => {
                find_compatible_almost_opposition(g).map_err(|e| SearchError::Opposition(e.to_string()))?.is_some()
            }
            _ => unreachable!("outcome atoms handled above"),
        };
        props.flags.insert(p, v);
    }
    let v = partial(&pred.expr, &props.flags).expect("every atom evaluated");
    Ok((v, props))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scope {
    /// All graphs with order in `min..=max`.
    Graphs { min: usize, max: usize, connected_only: bool },
    /// All free trees with order in `min..=max`.
    Trees { min: usize, max: usize },
    /// Externally supplied graphs (for instance from a graph6 file).
    External { label: String, graphs: Vec<Graph> },
}

impl Scope {
    fn describe(&self) -> String {
        match self {
            Scope::Graphs { min, max, connected_only: true } => format!("connected graphs, orders {min}..={max}"),
            Scope::Graphs { min, max, connected_only: false } => format!("graphs, orders {min}..={max}"),
            Scope::Trees { min, max } => format!("trees, orders {min}..={max}"),
            Scope::External { label, graphs } => format!("{} graphs from {label}", graphs.len()),
        }
    }

    fn batches(&self) -> Result<Vec<(usize, Vec<Graph>)>, SearchError> {
        match self {
            Scope::Graphs { min, max, connected_only } => {
                (*min..=*max).map(|n| Ok((n, enumerate_graphs(n, *connected_only)?))).collect()
            }
            Scope::Trees { min, max } => (*min..=*max).map(|n| Ok((n, enumerate_trees(n)?))).collect(),
            Scope::External { graphs, .. } => {
                let mut by_order: BTreeMap<usize, Vec<Graph>> = BTreeMap::new();
                let mut seen = HashSet::new();
                for g in graphs {
                    if seen.insert(canonical_code(g)) {
                        by_order.entry(g.order()).or_default().push(g.clone());
                    }
                }
                Ok(by_order.into_iter().collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanConfig {
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    pub prune: bool,
    /// Stop after the first order that yields at least this many hits.
    pub stop_after_hits: Option<usize>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig { threads: None, prune: true, stop_after_hits: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hit {
    pub order: usize,
    pub graph6: String,
    pub code: String,
    pub properties: Properties,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct OrderCount {
    pub candidates: usize,
    pub hits: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub scope: String,
    pub predicate: String,
    pub hits: Vec<Hit>,
    pub counts: BTreeMap<usize, OrderCount>,
    pub wall_ms: u128,
}

impl SearchReport {
    pub fn hits_of_order(&self, n: usize) -> impl Iterator<Item = &Hit> {
        self.hits.iter().filter(move |h| h.order == n)
    }

    /// One JSON object per hit, then a summary record.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for h in &self.hits {
            out.push_str(&serde_json::to_string(h).expect("hits serialise"));
            out.push('\n');
        }
        let summary = serde_json::json!({
            "summary": {
                "scope": self.scope,
                "predicate": self.predicate,
                "hits": self.hits.len(),
                "counts": self.counts,
                "wall_ms": self.wall_ms,
            }
        });
        out.push_str(&summary.to_string());
        out.push('\n');
        out
    }
}

pub fn scan(scope: &Scope, pred: &Predicate, config: &ScanConfig) -> Result<SearchReport, SearchError> {
    match config.threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build().expect("thread pool");
            pool.install(|| scan_inner(scope, pred, config))
        }
        None => scan_inner(scope, pred, config),
    }
}

fn scan_inner(scope: &Scope, pred: &Predicate, config: &ScanConfig) -> Result<SearchReport, SearchError> {
    let start = Instant::now();
    let solver_config = SolverConfig { prune: config.prune, ..SolverConfig::default() };
    let mut hits = Vec::new();
    let mut counts = BTreeMap::new();
    for (order, graphs) in scope.batches()? {
        let results: Vec<Result<Option<Hit>, SearchError>> = graphs
            .par_iter()
            .map_init(
                || Solver::new(solver_config),
                |solver, g| {
                    let (yes, properties) = evaluate(pred, g, solver)?;
                    Ok(yes.then(|| Hit {
                        order,
                        graph6: graph6::emit(g),
                        code: code_hex(&canonical_code(g)),
                        properties,
                    }))
                },
            )
            .collect();
        let mut found = 0;
        for r in results {
            if let Some(h) = r? {
                hits.push(h);
                found += 1;
            }
        }
        log::info!("order {order}: {} candidates, {found} hits", graphs.len());
        counts.insert(order, OrderCount { candidates: graphs.len(), hits: found });
        if config.stop_after_hits.is_some_and(|k| found >= k) {
            break;
        }
    }
    Ok(SearchReport {
        scope: scope.describe(),
        predicate: pred.text().to_string(),
        hits,
        counts,
        wall_ms: start.elapsed().as_millis(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let counts: Vec<usize> = (0..=5).map(|n| enumerate_graphs(n, false).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 11, 34]);
        let connected: Vec<usize> = (1..=5).map(|n| enumerate_graphs(n, true).unwrap().len()).collect();
        assert_eq!(connected, vec![1, 1, 2, 6, 21]);
        assert_eq!(enumerate_graphs(9, false), Err(SearchError::GraphCap(9)));
    }

    #[test]
    fn trees() {
        let counts: Vec<usize> = (1..=10).map(|n| enumerate_trees(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 3, 6, 11, 23, 47, 106]);
        for t in enumerate_trees(9).unwrap() {
            assert!(t.is_tree());
        }
        assert_eq!(rooted_trees(5).len(), 9);
        assert_eq!(enumerate_trees(17), Err(SearchError::TreeCap(17)));
    }

    #[test]
    fn predicates() {
        let p = Predicate::parse("SecondWins & !opposable").unwrap();
        assert_eq!(p.text(), "secondwins & !opposable");
        assert!(Predicate::parse("secondwins & bogus").is_err());
        let mut solver = Solver::default();
        let p3 = Graph::path(3).unwrap();
        let (v, props) = evaluate(&p, &p3, &mut solver).unwrap();
        assert!(!v);
        assert_eq!(props.outcome, Some(OutcomeClass::FirstWins));
        // opposable graphs never reach the solver here
        let c4 = Graph::cycle(4).unwrap();
        let (v, props) = evaluate(&p, &c4, &mut solver).unwrap();
        assert!(!v);
        assert_eq!(props.outcome, None);
        assert_eq!(props.flags.get(&Property::Opposable), Some(&true));
    }

    #[test]
    fn smallest_scan() {
        let pred = Predicate::parse("secondwins & !opposable").unwrap();
        let scope = Scope::Graphs { min: 0, max: 6, connected_only: false };
        let report = scan(&scope, &pred, &ScanConfig::default()).unwrap();
        assert!(report.hits.iter().all(|h| h.order == 6), "{}", report.to_jsonl());
        let p3c3 = Graph::path(3).unwrap().disjoint_union(&Graph::cycle(3).unwrap()).unwrap();
        let c5k1 = Graph::cycle(5).unwrap().disjoint_union(&Graph::empty(1).unwrap()).unwrap();
        let mut expected = vec![code_hex(&canonical_code(&p3c3)), code_hex(&canonical_code(&c5k1))];
        expected.sort();
        let mut got: Vec<String> = report.hits.iter().map(|h| h.code.clone()).collect();
        got.sort();
        assert_eq!(got, expected);
        let jsonl = report.to_jsonl();
        assert_eq!(jsonl.lines().count(), 3);
        assert!(jsonl.lines().last().unwrap().starts_with("{\"summary\""));
    }
}
