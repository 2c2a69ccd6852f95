//! Canonical labelling of small vertex-coloured graphs.
//!
//! Colour refinement to an equitable ordered partition, then individualisation
//! with backtracking. Branches are pruned when the candidate is a twin of an
//! already explored vertex, or lies in its orbit under automorphisms found so
//! far that fix the current individualisation prefix.

use crate::graph::{Graph, VertexSet};

/// Refines `cell` (ordered cell ids, `0..k`) to the coarsest equitable
/// partition that refines it. Returns the number of cells.
fn refine(adj: &[u64], cell: &mut [u32]) -> usize {
    let n = cell.len();
    let mut cells = count_cells(cell);
    let mut order: Vec<usize> = (0..n).collect();
    let mut sig: Vec<Vec<u32>> = vec![Vec::new(); n];
    loop {
        if cells == n {
            return cells;
        }
        for v in 0..n {
            let s = &mut sig[v];
            s.clear();
            s.extend(VertexSet(adj[v]).iter().map(|w| cell[w]));
            s.sort_unstable();
        }
        order.sort_by(|&a, &b| cell[a].cmp(&cell[b]).then_with(|| sig[a].cmp(&sig[b])));
        let mut next = vec![0u32; n];
        let mut id = 0u32;
        for i in 0..n {
            if i > 0 {
                let (a, b) = (order[i - 1], order[i]);
                if cell[a] != cell[b] || sig[a] != sig[b] {
                    id += 1;
                }
            }
            next[order[i]] = id;
        }
        let new_cells = if n == 0 { 0 } else { id as usize + 1 };
        cell.copy_from_slice(&next);
        if new_cells == cells {
            return cells;
        }
        cells = new_cells;
    }
}

fn count_cells(cell: &[u32]) -> usize {
    cell.iter().map(|&c| c as usize + 1).max().unwrap_or(0)
}

fn initial_cells(colours: &[u8]) -> Vec<u32> {
    let mut distinct: Vec<u8> = colours.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    colours.iter().map(|c| distinct.binary_search(c).unwrap_or(0) as u32).collect()
}

/// The stable colour-refinement classes of a coloured graph. Automorphisms
/// preserve these classes.
pub fn refinement_classes(adj: &[u64], colours: &[u8]) -> Vec<u32> {
    let mut cell = initial_cells(colours);
    refine(adj, &mut cell);
    cell
}

struct Search<'a> {
    adj: &'a [u64],
    n: usize,
    best: Option<(Vec<u64>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn leaf(&mut self, cell: &[u32]) {
        let mut lab = vec![0usize; self.n];
        for (v, &c) in cell.iter().enumerate() {
            lab[c as usize] = v;
        }
        let rows: Vec<u64> = lab
            .iter()
            .map(|&v| {
                lab.iter()
                    .enumerate()
                    .filter(|&(_, &w)| self.adj[v] >> w & 1 == 1)
                    .fold(0u64, |acc, (q, _)| acc | 1u64 << q)
            })
            .collect();
        match &self.best {
            None => self.best = Some((rows, lab)),
            Some((best_rows, best_lab)) => match rows.cmp(best_rows) {
                std::cmp::Ordering::Greater => self.best = Some((rows, lab)),
                std::cmp::Ordering::Equal => {
                    let mut sigma = vec![0usize; self.n];
                    for p in 0..self.n {
                        sigma[best_lab[p]] = lab[p];
                    }
                    if sigma.iter().enumerate().any(|(v, &w)| v != w) {
                        self.automorphisms.push(sigma);
                    }
                }
                std::cmp::Ordering::Less => {}
            },
        }
    }

    fn same_orbit(&self, prefix: &[usize], a: usize, b: usize) -> bool {
        let gens: Vec<&Vec<usize>> = self.automorphisms.iter().filter(|s| prefix.iter().all(|&p| s[p] == p)).collect();
        if gens.is_empty() {
            return false;
        }
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for s in gens {
            for (v, &sv) in s.iter().enumerate().take(self.n) {
                let (x, y) = (find(&mut parent, v), find(&mut parent, sv));
                if x != y {
                    parent[x] = y;
                }
            }
        }
        find(&mut parent, a) == find(&mut parent, b)
    }

    fn twins(&self, a: usize, b: usize) -> bool {
        self.adj[a] & !(1u64 << b) == self.adj[b] & !(1u64 << a)
    }

    fn run(&mut self, mut cell: Vec<u32>, prefix: &mut Vec<usize>) {
        let cells = refine(self.adj, &mut cell);
        if cells == self.n {
            self.leaf(&cell);
            return;
        }
        let mut size = vec![0usize; cells];
        for &c in &cell {
            size[c as usize] += 1;
        }
        let target = size.iter().position(|&s| s > 1).unwrap_or(0) as u32;
        let members: Vec<usize> = (0..self.n).filter(|&v| cell[v] == target).collect();
        let mut tried: Vec<usize> = Vec::new();
        for &w in &members {
            if tried.iter().any(|&t| self.twins(t, w) || self.same_orbit(prefix, t, w)) {
                continue;
            }
            tried.push(w);
            let child: Vec<u32> =
                cell.iter().enumerate().map(|(v, &c)| if c < target || v == w { 2 * c } else { 2 * c + 1 }).collect();
            let child = renumber(child);
            prefix.push(w);
            self.run(child, prefix);
            prefix.pop();
        }
    }
}

fn renumber(cell: Vec<u32>) -> Vec<u32> {
    let mut ids: Vec<u32> = cell.clone();
    ids.sort_unstable();
    ids.dedup();
    cell.iter().map(|c| ids.binary_search(c).unwrap_or(0) as u32).collect()
}

/// Canonical labelling: `lab[p]` is the vertex placed at canonical position `p`.
///
/// Two coloured graphs are isomorphic (respecting colours) iff relabelling each
/// by its canonical labelling yields identical adjacency and colour sequences.
pub fn canonical_labelling(adj: &[u64], colours: &[u8]) -> Vec<usize> {
    let n = adj.len();
    debug_assert_eq!(colours.len(), n);
    if n == 0 {
        return Vec::new();
    }
    let mut search = Search { adj, n, best: None, automorphisms: Vec::new() };
    search.run(initial_cells(colours), &mut Vec::new());
    search.best.map(|(_, lab)| lab).unwrap_or_default()
}

fn pack_code(adj: &[u64], colours: Option<&[u8]>, lab: &[usize]) -> Vec<u8> {
    let n = adj.len();
    let mut code = Vec::with_capacity(1 + n + n * n / 16 + 1);
    code.push(n as u8);
    if let Some(colours) = colours {
        code.extend(lab.iter().map(|&v| colours[v]));
    }
    let mut byte = 0u8;
    let mut nbits = 0;
    for p in 0..n {
        for q in p + 1..n {
            byte = byte << 1 | (adj[lab[p]] >> lab[q] & 1) as u8;
            nbits += 1;
            if nbits == 8 {
                code.push(byte);
                byte = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        code.push(byte << (8 - nbits));
    }
    code
}

/// Canonical byte code of a vertex-coloured graph given as raw masks.
pub fn canonical_code_coloured(adj: &[u64], colours: &[u8]) -> Vec<u8> {
    let lab = canonical_labelling(adj, colours);
    pack_code(adj, Some(colours), &lab)
}

/// Canonical byte code: equal for two graphs iff they are isomorphic.
pub fn canonical_code(g: &Graph) -> Vec<u8> {
    let adj = g.adjacency();
    let lab = canonical_labelling(adj, &vec![0; adj.len()]);
    pack_code(adj, None, &lab)
}

/// The canonical representative of `g`'s isomorphism class.
pub fn canonical_form(g: &Graph) -> Graph {
    let adj = g.adjacency();
    let lab = canonical_labelling(adj, &vec![0; adj.len()]);
    let mut pos = vec![0usize; lab.len()];
    for (p, &v) in lab.iter().enumerate() {
        pos[v] = p;
    }
    g.permute(&crate::graph::VertexMap::new(pos))
}

/// Lower-case hex rendering of a code, for reports.
pub fn code_hex(code: &[u8]) -> String {
    code.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexMap;

    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for i in 0..n {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn isomorphic_examples() {
        let p3 = Graph::path(3).unwrap();
        let star = Graph::path(1).unwrap().add_leaves(0, 2).unwrap();
        assert_eq!(canonical_code(&p3), canonical_code(&star));
        let p4 = Graph::path(4).unwrap();
        let k13 = Graph::path(1).unwrap().add_leaves(0, 3).unwrap();
        assert_ne!(canonical_code(&p4), canonical_code(&k13));
        assert_ne!(canonical_code(&Graph::empty(3).unwrap()), canonical_code(&Graph::empty(4).unwrap()));
    }

    #[test]
    fn colours_matter() {
        let k2 = Graph::path(2).unwrap();
        let a = canonical_code_coloured(k2.adjacency(), &[0, 1]);
        let b = canonical_code_coloured(k2.adjacency(), &[1, 0]);
        let c = canonical_code_coloured(k2.adjacency(), &[1, 1]);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn invariant_under_every_relabelling_of_small_graphs() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        let code = canonical_code(&g);
        for p in perms(5) {
            let h = g.permute(&VertexMap::new(p));
            assert_eq!(canonical_code(&h), code);
            assert_eq!(canonical_form(&h), canonical_form(&g));
        }
    }

    #[test]
    fn symmetric_graphs_terminate() {
        for n in [0, 1, 10, 40, 64] {
            let e = Graph::empty(n).unwrap();
            let k = Graph::complete(n).unwrap();
            assert_eq!(canonical_form(&e), e);
            assert_eq!(canonical_form(&k), k);
        }
        let c = Graph::cycle(30).unwrap();
        let rotated: Vec<usize> = (0..30).map(|v| (v * 7) % 30).collect();
        assert_eq!(canonical_code(&c), canonical_code(&c.permute(&VertexMap::new(rotated))));
    }
}
