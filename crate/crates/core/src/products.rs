//! φ-products: graphs on `V(G) × V(H)` whose adjacency is a boolean formula
//! over the atoms `adjG`, `adjH`, `eqG`, `eqH`.
//!
//! Formulas use the grammar of [`crate::expr`] with exactly those four
//! identifiers.
//!
//! Vertex `(u, v)` of a product gets index `u * |V(H)| + v`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::expr::{self, Expr, ExprError};
use crate::graph::{Graph, GraphError, VertexMap, VertexSet, MAX_VERTICES};
use crate::opposition::{verify_opposition, Opposition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Atom {
    AdjG,
    AdjH,
    EqG,
    EqH,
}

impl Atom {
    pub fn name(self) -> &'static str {
        match self {
            Atom::AdjG => "adjG",
            Atom::AdjH => "adjH",
            Atom::EqG => "eqG",
            Atom::EqH => "eqH",
        }
    }
}

/// Truth values of the four atoms for one pair of product vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct AtomAssignment {
    pub adj_g: bool,
    pub adj_h: bool,
    pub eq_g: bool,
    pub eq_h: bool,
}

impl AtomAssignment {
    /// A simple graph has no loops, so a side cannot be both equal and adjacent.
    pub fn is_consistent(self) -> bool {
        !(self.eq_g && self.adj_g) && !(self.eq_h && self.adj_h)
    }

    /// Both coordinates equal: the pair is a single product vertex.
    pub fn is_self_pair(self) -> bool {
        self.eq_g && self.eq_h
    }

    /// The same pair seen from the other endpoint. Adjacency and equality are
    /// symmetric relations, so nothing changes.
    pub fn reversed(self) -> AtomAssignment {
        AtomAssignment { adj_g: self.adj_g, adj_h: self.adj_h, eq_g: self.eq_g, eq_h: self.eq_h }
    }

    /// The assignments that can occur between two distinct product vertices,
    /// ordered by the bits `(adjG, adjH, eqG, eqH)` read as a binary number.
    pub fn domain() -> Vec<AtomAssignment> {
        (0u8..16)
            .map(|b| AtomAssignment { adj_g: b & 8 != 0, adj_h: b & 4 != 0, eq_g: b & 2 != 0, eq_h: b & 1 != 0 })
            .filter(|a| a.is_consistent() && !a.is_self_pair())
            .collect()
    }
}

pub type Formula = Expr<Atom>;
pub type FormulaError = ExprError;

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Expr<Atom> {
    pub fn eval(&self, a: AtomAssignment) -> bool {
        self.evaluate(&|atom| match atom {
            Atom::AdjG => a.adj_g,
            Atom::AdjH => a.adj_h,
            Atom::EqG => a.eq_g,
            Atom::EqH => a.eq_h,
        })
    }
}

fn atom_named(name: &str) -> Option<Atom> {
    Some(match name {
        "adjG" => Atom::AdjG,
        "adjH" => Atom::AdjH,
        "eqG" => Atom::EqG,
        "eqH" => Atom::EqH,
        _ => return None,
    })
}

pub fn parse_formula(text: &str) -> Result<Formula, FormulaError> {
    expr::parse(text, atom_named)
}

/// The named products, with their symbols.
pub const NAMED_PRODUCTS: [(&str, &str, &str); 7] = [
    ("cartesian", "□", "(eqG&adjH)|(adjG&eqH)"),
    ("strong", "⊠", "(eqG&adjH)|(adjG&eqH)|(adjG&adjH)"),
    ("tensor", "×", "adjG&adjH"),
    ("lexicographic", "·", "adjG|(eqG&adjH)"),
    ("conormal", "*", "adjG|adjH"),
    ("homomorphic", "⋉", "eqG|(adjG&!adjH)"),
    ("cihpromomoh", "⋊", "eqH|(adjH&!adjG)"),
];

/// The six named products whose formulas satisfy the lifting condition.
pub const OPPOSABLE_PRODUCTS: [&str; 6] = ["cartesian", "strong", "tensor", "lexicographic", "conormal", "homomorphic"];

pub fn named_formula_text(name: &str) -> Result<&'static str, FormulaError> {
    let key = name.to_ascii_lowercase();
    NAMED_PRODUCTS
        .iter()
        .find(|(n, _, _)| *n == key)
        .map(|&(_, _, f)| f)
        .ok_or_else(|| FormulaError::UnknownName(name.to_string()))
}

pub fn named_formula(name: &str) -> Result<Formula, FormulaError> {
    parse_formula(named_formula_text(name)?)
}

/// `φ(a, b) = φ(b, a)` on every assignment. Every atom is a symmetric
/// relation, so this holds for any formula; exposed as an audit.
pub fn is_symmetric(f: &Formula) -> bool {
    AtomAssignment::domain().into_iter().all(|a| f.eval(a) == f.eval(a.reversed()))
}

/// The lifting condition `(eqH ∧ ¬adjG) ⇒ ¬φ`, checked on every assignment
/// that two distinct product vertices can realise.
pub fn satisfies_opposability_condition(f: &Formula) -> bool {
    AtomAssignment::domain().into_iter().filter(|a| a.eq_h && !a.adj_g).all(|a| !f.eval(a))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProductError {
    #[error("product would have {0} vertices, the limit is {MAX_VERTICES}")]
    TooLarge(usize),
    #[error("the formula fails (eqH & !adjG) => !φ, so the lifted map need not be an opposition")]
    ConditionViolated,
    #[error("the given map is not an opposition of the first factor")]
    InvalidOpposition,
    #[error("the lifted map is not an opposition of the product")]
    LiftFailed,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A product graph together with its factor orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Product {
    pub graph: Graph,
    pub g_order: usize,
    pub h_order: usize,
}

impl Product {
    pub fn index(&self, u: usize, v: usize) -> usize {
        u * self.h_order + v
    }

    pub fn coords(&self, x: usize) -> (usize, usize) {
        (x / self.h_order, x % self.h_order)
    }

    /// `G.v`: the copy of G at the H-vertex `v`.
    pub fn g_fiber(&self, v: usize) -> VertexSet {
        (0..self.g_order).map(|u| self.index(u, v)).collect()
    }

    /// `u.H`: the copy of H at the G-vertex `u`.
    pub fn h_fiber(&self, u: usize) -> VertexSet {
        (0..self.h_order).map(|v| self.index(u, v)).collect()
    }
}

pub fn build_product(g: &Graph, h: &Graph, f: &Formula) -> Result<Product, ProductError> {
    let (ng, nh) = (g.order(), h.order());
    let n = ng * nh;
    if n > MAX_VERTICES {
        return Err(ProductError::TooLarge(n));
    }
    let mut edges = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            let (g1, h1) = (x / nh, x % nh);
            let (g2, h2) = (y / nh, y % nh);
            let a =
                AtomAssignment { adj_g: g.has_edge(g1, g2), adj_h: h.has_edge(h1, h2), eq_g: g1 == g2, eq_h: h1 == h2 };
            if f.eval(a) {
                edges.push((x, y));
            }
        }
    }
    Ok(Product { graph: Graph::from_edges(n, edges)?, g_order: ng, h_order: nh })
}

pub fn build_named_product(g: &Graph, h: &Graph, name: &str) -> Result<Product, Box<dyn std::error::Error>> {
    Ok(build_product(g, h, &named_formula(name)?)?)
}

/// Lifts an opposition `f` of G to `(u, v) ↦ (f(u), v)` on `GφH`, refusing
/// when φ fails the lifting condition. The result is re-verified.
pub fn lift_opposition(
    f: &VertexMap,
    g: &Graph,
    h: &Graph,
    phi: &Formula,
) -> Result<(Product, Opposition), ProductError> {
    if !satisfies_opposability_condition(phi) {
        return Err(ProductError::ConditionViolated);
    }
    if !verify_opposition(g, f) {
        return Err(ProductError::InvalidOpposition);
    }
    let p = build_product(g, h, phi)?;
    let img: Vec<usize> = (0..p.graph.order())
        .map(|x| {
            let (u, v) = p.coords(x);
            p.index(f.get(u), v)
        })
        .collect();
    let lifted = Opposition::new(&p.graph, VertexMap::new(img)).ok_or(ProductError::LiftFailed)?;
    Ok((p, lifted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opposition::find_opposition;

    #[test]
    fn parses_table_formulas() {
        let cart = parse_formula("(eqG & adjH) | (adjG & eqH)").unwrap();
        assert_eq!(cart, named_formula("cartesian").unwrap());
        assert_eq!(parse_formula("adjG & adjH").unwrap(), named_formula("tensor").unwrap());
        assert_eq!(named_formula("strong").unwrap().to_string(), "eqG & adjH | adjG & eqH | adjG & adjH");
        assert!(matches!(named_formula("bogus"), Err(FormulaError::UnknownName(_))));
    }

    #[test]
    fn parse_errors_carry_positions() {
        assert_eq!(parse_formula("adjG &"), Err(FormulaError::UnexpectedEnd { position: 7 }));
        assert_eq!(parse_formula("adjG $ adjH"), Err(FormulaError::Lexical { ch: '$', position: 6 }));
        assert_eq!(parse_formula("(adjG | eqH"), Err(FormulaError::Unbalanced { position: 1 }));
        assert_eq!(
            parse_formula("adjG adjH"),
            Err(FormulaError::UnexpectedToken { found: "identifier adjH".into(), position: 6 })
        );
        assert!(matches!(parse_formula("adjX"), Err(FormulaError::UnknownAtom { position: 1, .. })));
        assert_eq!(parse_formula(""), Err(FormulaError::UnexpectedEnd { position: 1 }));
        assert!(matches!(parse_formula("adjG = adjH"), Err(FormulaError::Lexical { ch: '=', position: 6 })));
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse_formula("adjG => adjH => eqG").unwrap();
        assert!(matches!(&f, Expr::Implies(_, r) if matches!(**r, Expr::Implies(..))));
        let g = parse_formula("adjG | adjH & eqG => !eqH").unwrap();
        let Expr::Implies(lhs, _) = &g else { panic!("implication is loosest") };
        assert!(matches!(**lhs, Expr::Or(..)));
        for text in ["(adjG => adjH) => eqG", "!(adjG | eqH) & adjH", "adjG & (adjH | eqG)", "adjG | (adjH | eqG)"] {
            let f = parse_formula(text).unwrap();
            assert_eq!(parse_formula(&f.to_string()).unwrap(), f, "{text}");
        }
    }

    #[test]
    fn condition_checker() {
        assert_eq!(AtomAssignment::domain().len(), 8);
        for name in OPPOSABLE_PRODUCTS {
            assert!(satisfies_opposability_condition(&named_formula(name).unwrap()), "{name}");
        }
        assert!(!satisfies_opposability_condition(&named_formula("cihpromomoh").unwrap()));
        assert!(satisfies_opposability_condition(&parse_formula("adjG & !adjG").unwrap()));
        for (name, _, _) in NAMED_PRODUCTS {
            assert!(is_symmetric(&named_formula(name).unwrap()));
        }
    }

    #[test]
    fn small_products() {
        let k2 = Graph::path(2).unwrap();
        let c = build_product(&k2, &k2, &named_formula("cartesian").unwrap()).unwrap();
        assert_eq!(c.graph.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
        let t = build_product(&k2, &k2, &named_formula("tensor").unwrap()).unwrap();
        assert_eq!(t.graph.edges().collect::<Vec<_>>(), vec![(0, 3), (1, 2)]);
        let big = Graph::empty(9).unwrap();
        assert_eq!(build_product(&big, &big, &named_formula("tensor").unwrap()), Err(ProductError::TooLarge(81)));
    }

    #[test]
    fn fibers() {
        let c4 = Graph::cycle(4).unwrap();
        let p3 = Graph::path(3).unwrap();
        let p = build_product(&c4, &p3, &named_formula("cartesian").unwrap()).unwrap();
        let (gv, _) = p.graph.induced_subgraph(p.g_fiber(1));
        assert_eq!(gv, c4);
        let (uh, _) = p.graph.induced_subgraph(p.h_fiber(2));
        assert_eq!(uh, p3);
        let mut all = VertexSet::EMPTY;
        for v in 0..3 {
            assert!(all.intersection(p.g_fiber(v)).is_empty());
            all = all.union(p.g_fiber(v));
        }
        assert_eq!(all, p.graph.vertices());
    }

    #[test]
    fn lifting() {
        let c4 = Graph::cycle(4).unwrap();
        let p3 = Graph::path(3).unwrap();
        let f = find_opposition(&c4).unwrap();
        let hom = named_formula("homomorphic").unwrap();
        let (p, lifted) = lift_opposition(f.map(), &c4, &p3, &hom).unwrap();
        assert!(verify_opposition(&p.graph, lifted.map()));
        let (q, same) =
            lift_opposition(f.map(), &c4, &Graph::path(1).unwrap(), &named_formula("cartesian").unwrap()).unwrap();
        assert_eq!(q.graph, c4);
        assert_eq!(same.map(), f.map());
        assert_eq!(
            lift_opposition(f.map(), &c4, &p3, &named_formula("cihpromomoh").unwrap()),
            Err(ProductError::ConditionViolated)
        );
        assert_eq!(lift_opposition(&VertexMap::identity(4), &c4, &p3, &hom), Err(ProductError::InvalidOpposition));
    }
}
