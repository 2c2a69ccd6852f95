#![allow(clippy::needless_range_loop)]

//! Enumerators against closed-form counts and brute-force isomorphism.

use std::collections::{BTreeSet, HashMap};

use snortlab::canon::canonical_code;
use snortlab::search::{enumerate_graphs, enumerate_trees, rooted_trees};
use snortlab::Graph;

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn partitions(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if n == 0 {
        out.push(cur.clone());
        return;
    }
    for p in (1..=max.min(n)).rev() {
        cur.push(p);
        partitions(n - p, p, cur, out);
        cur.pop();
    }
}

/// Unlabelled graphs on n vertices by Burnside over cycle types.
fn burnside(n: usize) -> u128 {
    let fact: u128 = (1..=n as u128).product();
    let mut parts = Vec::new();
    partitions(n, n, &mut Vec::new(), &mut parts);
    let mut total = 0u128;
    for lambda in parts {
        let mut cycles = 0u128;
        for (i, &a) in lambda.iter().enumerate() {
            cycles += a as u128 / 2;
            for &b in &lambda[i + 1..] {
                cycles += gcd(a as u128, b as u128);
            }
        }
        let mut z = 1u128;
        let mut mult: HashMap<usize, u128> = HashMap::new();
        for &a in &lambda {
            *mult.entry(a).or_default() += 1;
        }
        for (&a, &m) in &mult {
            z *= (a as u128).pow(m as u32) * (1..=m).product::<u128>();
        }
        total += fact / z * (1u128 << cycles);
    }
    total / fact
}

/// Connected counts from totals by inverting the Euler transform.
fn inverse_euler(a: &[u128]) -> Vec<u128> {
    let n = a.len() - 1;
    let mut s = vec![0i128; n + 1];
    let mut c = vec![0i128; n + 1];
    for k in 1..=n {
        let mut v = k as i128 * a[k] as i128;
        for j in 1..k {
            v -= s[j] * a[k - j] as i128;
        }
        s[k] = v;
        let mut rest = s[k];
        for d in 1..k {
            if k % d == 0 {
                rest -= d as i128 * c[d];
            }
        }
        c[k] = rest / k as i128;
    }
    c.into_iter().map(|x| x as u128).collect()
}

#[test]
fn graph_counts_match_burnside() {
    let want: Vec<u128> = (0..=8).map(burnside).collect();
    assert_eq!(want, vec![1, 1, 2, 4, 11, 34, 156, 1044, 12346]);
    for n in 0..=8 {
        let graphs = enumerate_graphs(n, false).unwrap();
        assert_eq!(graphs.len() as u128, want[n], "order {n}");
        let codes: BTreeSet<Vec<u8>> = graphs.iter().map(canonical_code).collect();
        assert_eq!(codes.len(), graphs.len(), "duplicates at order {n}");
    }
}

#[test]
fn connected_counts_match_inverse_euler() {
    let totals: Vec<u128> = (0..=8).map(burnside).collect();
    let connected = inverse_euler(&totals);
    assert_eq!(&connected[1..], &[1, 1, 2, 6, 21, 112, 853, 11117]);
    for n in 1..=8 {
        let graphs = enumerate_graphs(n, true).unwrap();
        assert_eq!(graphs.len() as u128, connected[n], "order {n}");
        assert!(graphs.iter().all(Graph::is_connected));
    }
}

fn labelled(n: usize, bits: u32) -> Vec<u64> {
    let mut adj = vec![0u64; n];
    let mut k = 0;
    for u in 0..n {
        for v in u + 1..n {
            if bits >> k & 1 == 1 {
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
            k += 1;
        }
    }
    adj
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Lexicographically least upper-triangle bit string over all relabellings.
fn brute_form(adj: &[u64], perms: &[Vec<usize>]) -> u32 {
    let n = adj.len();
    let mut best = u32::MAX;
    for p in perms {
        let mut bits = 0u32;
        let mut k = 0;
        for u in 0..n {
            for v in u + 1..n {
                if adj[p[u]] >> p[v] & 1 == 1 {
                    bits |= 1 << k;
                }
                k += 1;
            }
        }
        best = best.min(bits);
    }
    best
}

#[test]
fn canonical_codes_agree_with_brute_force_isomorphism() {
    for n in 0..=6 {
        let perms = permutations(n);
        let pairs = n * n.saturating_sub(1) / 2;
        let mut code_to_form: HashMap<Vec<u8>, u32> = HashMap::new();
        let mut forms = BTreeSet::new();
        for bits in 0..1u32 << pairs {
            let adj = labelled(n, bits);
            let form = brute_form(&adj, &perms);
            forms.insert(form);
            let code = canonical_code(&Graph::from_adjacency(&adj).unwrap());
            let seen = *code_to_form.entry(code).or_insert(form);
            assert_eq!(seen, form, "one code for two isomorphism classes at order {n}");
        }
        assert_eq!(code_to_form.len(), forms.len(), "two codes for one class at order {n}");
        let enumerated: BTreeSet<u32> =
            enumerate_graphs(n, false).unwrap().iter().map(|g| brute_form(g.adjacency(), &perms)).collect();
        assert_eq!(enumerated, forms, "enumeration misses or repeats classes at order {n}");
    }
}

/// Rooted tree counts by the standard recurrence.
fn rooted_counts(max: usize) -> Vec<u128> {
    let mut r = vec![0u128; max + 1];
    if max >= 1 {
        r[1] = 1;
    }
    for n in 1..max {
        let mut sum = 0u128;
        for k in 1..=n {
            let s: u128 = (1..=k).filter(|d| k % d == 0).map(|d| d as u128 * r[d]).sum();
            sum += s * r[n - k + 1];
        }
        r[n + 1] = sum / n as u128;
    }
    r
}

#[test]
fn tree_counts_match_otter() {
    let r = rooted_counts(16);
    let free: Vec<u128> = (0..=16)
        .map(|n| {
            if n == 0 {
                return 0;
            }
            let mut pairs: u128 = (1..n).map(|i| r[i] * r[n - i]).sum();
            if n % 2 == 0 {
                pairs -= r[n / 2];
            }
            r[n] - pairs / 2
        })
        .collect();
    assert_eq!(&free[1..], &[1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551, 1301, 3159, 7741, 19320]);
    for n in 1..=16 {
        let trees = enumerate_trees(n).unwrap();
        assert_eq!(trees.len() as u128, free[n], "order {n}");
        assert!(trees.iter().all(Graph::is_tree));
        let codes: BTreeSet<Vec<u8>> = trees.iter().map(canonical_code).collect();
        assert_eq!(codes.len(), trees.len(), "duplicate trees at order {n}");
    }
    for n in 1..=12 {
        assert_eq!(rooted_trees(n).len() as u128, r[n], "rooted order {n}");
    }
}

#[test]
fn tree_enumerator_agrees_with_graph_enumerator() {
    for n in 1..=8 {
        let from_graphs: BTreeSet<Vec<u8>> =
            enumerate_graphs(n, true).unwrap().iter().filter(|g| g.is_tree()).map(canonical_code).collect();
        let from_trees: BTreeSet<Vec<u8>> = enumerate_trees(n).unwrap().iter().map(canonical_code).collect();
        assert_eq!(from_graphs, from_trees, "order {n}");
    }
}
