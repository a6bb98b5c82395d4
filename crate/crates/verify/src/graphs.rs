//! Connected multigraphs up to isomorphism, and a brute-force classifier that
//! looks for extended Dynkin subgraphs among all edge subsets.

use std::collections::BTreeSet;

/// Multiplicity matrix; `m[i][i]` counts loops.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SmallGraph {
    pub n: usize,
    pub m: Vec<Vec<u8>>,
}

impl SmallGraph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut m = vec![vec![0u8; n]; n];
        for &(a, b) in edges {
            m[a][b] += 1;
            if a != b {
                m[b][a] += 1;
            }
        }
        SmallGraph { n, m }
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i..self.n {
                for _ in 0..self.m[i][j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    fn degree(&self, i: usize) -> usize {
        (0..self.n).map(|j| self.m[i][j] as usize * if i == j { 2 } else { 1 }).sum()
    }

    fn invariant(&self, i: usize) -> (usize, u8, Vec<usize>) {
        let mut nb: Vec<usize> = (0..self.n)
            .filter(|&j| j != i)
            .flat_map(|j| std::iter::repeat(self.degree(j)).take(self.m[i][j] as usize))
            .collect();
        nb.sort_unstable();
        (self.degree(i), self.m[i][i], nb)
    }

    fn encode(&self, perm: &[usize]) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.n * (self.n + 1) / 2);
        for i in 0..self.n {
            for j in i..self.n {
                out.push(self.m[perm[i]][perm[j]]);
            }
        }
        out
    }

    /// Minimal encoding over orderings that sort vertices by invariant.
    pub fn canonical(&self) -> (usize, Vec<u8>) {
        let mut order: Vec<usize> = (0..self.n).collect();
        let inv: Vec<_> = (0..self.n).map(|i| self.invariant(i)).collect();
        order.sort_by(|&a, &b| inv[a].cmp(&inv[b]));
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for &v in &order {
            match blocks.last_mut() {
                Some(b) if inv[b[0]] == inv[v] => b.push(v),
                _ => blocks.push(vec![v]),
            }
        }
        let mut best: Option<Vec<u8>> = None;
        let mut perm = Vec::with_capacity(self.n);
        self.search(&mut blocks, 0, &mut perm, &mut best);
        (self.n, best.unwrap_or_default())
    }

    fn search(&self, blocks: &mut Vec<Vec<usize>>, b: usize, perm: &mut Vec<usize>, best: &mut Option<Vec<u8>>) {
        if b == blocks.len() {
            let code = self.encode(perm);
            if best.as_ref().map_or(true, |c| code < *c) {
                *best = Some(code);
            }
            return;
        }
        let block = blocks[b].clone();
        permute(&block, &mut Vec::new(), &mut vec![false; block.len()], &mut |p| {
            let before = perm.len();
            perm.extend_from_slice(p);
            self.search(blocks, b + 1, perm, best);
            perm.truncate(before);
        });
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in 0..self.n {
                if self.m[v][w] > 0 && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }
}

fn permute(items: &[usize], cur: &mut Vec<usize>, used: &mut Vec<bool>, f: &mut dyn FnMut(&[usize])) {
    if cur.len() == items.len() {
        f(cur);
        return;
    }
    for i in 0..items.len() {
        if !used[i] {
            used[i] = true;
            cur.push(items[i]);
            permute(items, cur, used, f);
            cur.pop();
            used[i] = false;
        }
    }
}

/// All connected multigraphs (loops allowed) with at most `max_v` vertices and
/// at most `max_e` edges, one per isomorphism class.
pub fn connected_multigraphs(max_v: usize, max_e: usize) -> Vec<SmallGraph> {
    let mut level: Vec<SmallGraph> = vec![SmallGraph::from_edges(1, &[])];
    let mut all = level.clone();
    for _ in 0..max_e {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for g in &level {
            let mut grow = |h: SmallGraph| {
                if seen.insert(h.canonical()) {
                    next.push(h);
                }
            };
            for i in 0..g.n {
                for j in i..g.n {
                    let mut h = g.clone();
                    h.m[i][j] += 1;
                    if i != j {
                        h.m[j][i] += 1;
                    }
                    grow(h);
                }
                if g.n < max_v {
                    let mut edges = g.edges();
                    edges.push((i, g.n));
                    grow(SmallGraph::from_edges(g.n + 1, &edges));
                }
            }
        }
        all.extend(next.iter().cloned());
        level = next;
    }
    all
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    A,
    D,
    E,
}

/// `(kind, index, extended, graph)`.
pub type Pattern = (Kind, usize, bool, SmallGraph);

fn path_edges(n: usize) -> Vec<(usize, usize)> {
    (1..n).map(|i| (i - 1, i)).collect()
}

/// Dynkin and extended Dynkin graphs with at most `max_v` vertices, written
/// out edge by edge.
pub fn patterns(max_v: usize) -> Vec<Pattern> {
    let mut out = Vec::new();
    for n in 1..=max_v {
        out.push((Kind::A, n, false, SmallGraph::from_edges(n, &path_edges(n))));
    }
    for n in 4..=max_v {
        // path 0..n-2 with an extra leaf on vertex 1
        let mut e = path_edges(n - 1);
        e.push((1, n - 1));
        out.push((Kind::D, n, false, SmallGraph::from_edges(n, &e)));
    }
    for n in 6..=8.min(max_v) {
        // path 0..n-2 with an extra leaf on vertex 2
        let mut e = path_edges(n - 1);
        e.push((2, n - 1));
        out.push((Kind::E, n, false, SmallGraph::from_edges(n, &e)));
    }
    out.push((Kind::A, 0, true, SmallGraph::from_edges(1, &[(0, 0)])));
    for n in 1..max_v {
        let mut e = path_edges(n + 1);
        e.push((n, 0));
        out.push((Kind::A, n, true, SmallGraph::from_edges(n + 1, &e)));
    }
    for n in 4..max_v {
        // path 0..n-2 with a leaf on vertex 1 and one on vertex n-3
        let mut e = path_edges(n - 1);
        e.push((1, n - 1));
        e.push((n - 3, n));
        out.push((Kind::D, n, true, SmallGraph::from_edges(n + 1, &e)));
    }
    let e6 = [(0, 1), (1, 2), (2, 3), (3, 4), (2, 5), (5, 6)];
    let e7 = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (3, 7)];
    let e8 = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (2, 8)];
    for (n, edges) in [(6, &e6[..]), (7, &e7[..]), (8, &e8[..])] {
        if n < max_v {
            out.push((Kind::E, n, true, SmallGraph::from_edges(n + 1, edges)));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleClass {
    Dynkin(Kind, usize),
    Extended(Kind, usize),
    Superset,
}

/// Brute force over edge subsets: a graph is a superset when some proper
/// subgraph is extended Dynkin.
pub fn oracle_class(g: &SmallGraph, pats: &[Pattern]) -> OracleClass {
    let whole = g.canonical();
    let edges = g.edges();
    let ext: Vec<(usize, (usize, Vec<u8>), Kind, usize)> = pats
        .iter()
        .filter(|p| p.2)
        .map(|(k, i, _, h)| (h.edges().len(), h.canonical(), *k, *i))
        .collect();
    for &(_, ref code, k, i) in &ext {
        if *code == whole {
            return OracleClass::Extended(k, i);
        }
    }
    let sizes: BTreeSet<usize> = ext.iter().map(|e| e.0).collect();
    for &size in &sizes {
        for mask in 0u32..(1 << edges.len()) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let chosen: Vec<(usize, usize)> = (0..edges.len()).filter(|&b| mask >> b & 1 == 1).map(|b| edges[b]).collect();
            let verts: BTreeSet<usize> = chosen.iter().flat_map(|&(a, b)| [a, b]).collect();
            let relabel: Vec<usize> = verts.iter().copied().collect();
            let local: Vec<(usize, usize)> = chosen
                .iter()
                .map(|&(a, b)| (relabel.binary_search(&a).unwrap(), relabel.binary_search(&b).unwrap()))
                .collect();
            let code = SmallGraph::from_edges(verts.len(), &local).canonical();
            if ext.iter().any(|e| e.0 == size && e.1 == code) {
                return OracleClass::Superset;
            }
        }
    }
    for (k, i, extended, h) in pats {
        if !extended && h.canonical() == whole {
            return OracleClass::Dynkin(*k, *i);
        }
    }
    panic!("a connected graph without extended Dynkin subgraphs is Dynkin: {g:?}")
}

/// Whether the listed edges of `g` form a graph isomorphic to `pattern`.
pub fn edges_form(g: &SmallGraph, edges: &[(usize, usize)], pattern: &SmallGraph) -> bool {
    let mut avail = g.m.clone();
    for &(a, b) in edges {
        if avail[a][b] == 0 {
            return false;
        }
        avail[a][b] -= 1;
        if a != b {
            avail[b][a] -= 1;
        }
    }
    let verts: BTreeSet<usize> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    let relabel: Vec<usize> = verts.iter().copied().collect();
    let local: Vec<(usize, usize)> = edges
        .iter()
        .map(|&(a, b)| (relabel.binary_search(&a).unwrap(), relabel.binary_search(&b).unwrap()))
        .collect();
    SmallGraph::from_edges(verts.len(), &local).canonical() == pattern.canonical()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        // one vertex: no edges, a loop; two vertices joined once
        let g = connected_multigraphs(2, 1);
        assert_eq!(g.len(), 3);
        // trees with up to 5 vertices: 1, 1, 1, 2, 3
        let trees = connected_multigraphs(5, 4).into_iter().filter(|g| g.edges().len() + 1 == g.n).count();
        assert_eq!(trees, 8);
    }

    #[test]
    fn canonical_ignores_labels() {
        let a = SmallGraph::from_edges(4, &[(0, 1), (1, 2), (1, 3), (3, 3)]);
        let b = SmallGraph::from_edges(4, &[(2, 0), (0, 1), (0, 3), (2, 2)]);
        assert_eq!(a.canonical(), b.canonical());
    }

    #[test]
    fn oracle_on_examples() {
        let pats = patterns(7);
        let star = SmallGraph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert_eq!(oracle_class(&star, &pats), OracleClass::Extended(Kind::D, 4));
        let e6 = SmallGraph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)]);
        assert_eq!(oracle_class(&e6, &pats), OracleClass::Dynkin(Kind::E, 6));
        let loop_tail = SmallGraph::from_edges(2, &[(0, 0), (0, 1)]);
        assert_eq!(oracle_class(&loop_tail, &pats), OracleClass::Superset);
    }
}
