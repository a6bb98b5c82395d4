//! Undirected multigraphs, separated quivers and the Dynkin trichotomy.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::raycore::RayCategory;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multigraph {
    pub labels: Vec<String>,
    /// Loops and repeated edges are allowed.
    pub edges: Vec<(usize, usize)>,
}

impl Multigraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Self {
        Multigraph {
            labels: (0..n).map(|i| i.to_string()).collect(),
            edges,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Degree, loops counting twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.len()];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    /// `(neighbour, edge)` pairs; a loop appears once.
    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.len()];
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            adj[a].push((b, e));
            if a != b {
                adj[b].push((a, e));
            }
        }
        adj
    }

    /// Vertex sets of the connected components, each sorted, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &(v, _) in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// The subgraph on the given edges, vertices renumbered in the order given.
    pub fn edge_subgraph(&self, vertices: &[usize], edges: &[usize]) -> Multigraph {
        let pos = |v: usize| vertices.iter().position(|&w| w == v).expect("edge endpoint listed");
        Multigraph {
            labels: vertices.iter().map(|&v| self.labels[v].clone()).collect(),
            edges: edges
                .iter()
                .map(|&e| {
                    let (a, b) = self.edges[e];
                    (pos(a), pos(b))
                })
                .collect(),
        }
    }
}

/// `x⁺` and `x⁻` for every point, an edge `x⁺ — y⁻` for every arrow `x → y`.
pub fn separated_quiver(p: &RayCategory) -> Multigraph {
    let mut labels = Vec::with_capacity(2 * p.num_points());
    for x in p.points() {
        labels.push(format!("{x}+"));
    }
    for x in p.points() {
        labels.push(format!("{x}-"));
    }
    let n = p.num_points();
    let edges = p.arrows().iter().map(|a| (a.source, n + a.target)).collect();
    Multigraph { labels, edges }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    D,
    E,
}

/// `A_n`, `D_n`, `E_n` or their extended versions. `n` is the usual index, so
/// the extended graph has `n + 1` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DynkinType {
    pub family: Family,
    pub n: usize,
    pub extended: bool,
}

impl DynkinType {
    pub fn a(n: usize) -> Self {
        DynkinType { family: Family::A, n, extended: false }
    }
    pub fn d(n: usize) -> Self {
        DynkinType { family: Family::D, n, extended: false }
    }
    pub fn e(n: usize) -> Self {
        DynkinType { family: Family::E, n, extended: false }
    }
    pub fn a_ext(n: usize) -> Self {
        DynkinType { family: Family::A, n, extended: true }
    }
    pub fn d_ext(n: usize) -> Self {
        DynkinType { family: Family::D, n, extended: true }
    }
    pub fn e_ext(n: usize) -> Self {
        DynkinType { family: Family::E, n, extended: true }
    }

    pub fn vertices(&self) -> usize {
        self.n + usize::from(self.extended)
    }

    /// A standard drawing of the graph. Branch vertices come first for D and E.
    pub fn graph(&self) -> Multigraph {
        let v = self.vertices();
        let path = |k: usize, off: usize| (0..k.saturating_sub(1)).map(move |i| (off + i, off + i + 1));
        let arms = |lens: &[usize]| {
            // centre 0, arms hung in order
            let mut edges = Vec::new();
            let mut next = 1;
            for &l in lens {
                let mut prev = 0;
                for _ in 0..l {
                    edges.push((prev, next));
                    prev = next;
                    next += 1;
                }
            }
            edges
        };
        let edges: Vec<(usize, usize)> = match (self.family, self.extended) {
            (Family::A, false) => path(v, 0).collect(),
            (Family::A, true) => {
                let mut e: Vec<_> = path(v, 0).collect();
                e.push((v - 1, 0));
                e
            }
            (Family::D, false) => arms(&[1, 1, v - 3]),
            (Family::D, true) if self.n == 4 => arms(&[1, 1, 1, 1]),
            (Family::D, true) => {
                // 0 and 1 are branch vertices joined by the path 0, 2, ..., 1
                let mut e = Vec::new();
                let inner: Vec<usize> = (0..self.n - 5).map(|i| 6 + i).collect();
                let mut prev = 0;
                for &w in &inner {
                    e.push((prev, w));
                    prev = w;
                }
                e.push((prev, 1));
                e.extend([(0, 2), (0, 3), (1, 4), (1, 5)]);
                e
            }
            (Family::E, false) => arms(&[1, 2, v - 4]),
            (Family::E, true) => match self.n {
                6 => arms(&[2, 2, 2]),
                7 => arms(&[1, 3, 3]),
                _ => arms(&[1, 2, 5]),
            },
        };
        Multigraph::new(v, edges)
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam = match self.family {
            Family::A => "A",
            Family::D => "D",
            Family::E => "E",
        };
        if self.extended {
            write!(f, "~{fam}{}", self.n)
        } else {
            write!(f, "{fam}{}", self.n)
        }
    }
}

/// An extended Dynkin graph inside a larger graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddedGraph {
    pub kind: DynkinType,
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum ComponentClass {
    Dynkin { kind: DynkinType },
    ExtendedDynkin { kind: DynkinType },
    SupersetOfExtended { witness: EmbeddedGraph },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphClass {
    pub components: Vec<(Vec<usize>, ComponentClass)>,
}

/// Arm lengths from a branch vertex, as the vertex sequences of each arm.
fn arms_from(adj: &[Vec<(usize, usize)>], centre: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for &(first, e) in &adj[centre] {
        let mut arm = vec![(first, e)];
        let (mut prev, mut cur) = (centre, first);
        while adj[cur].len() == 2 {
            let &(next, e2) = adj[cur].iter().find(|&&(w, _)| w != prev).unwrap();
            arm.push((next, e2));
            prev = cur;
            cur = next;
        }
        out.push(arm);
    }
    out
}

fn classify_component(g: &Multigraph, comp: &[usize]) -> ComponentClass {
    let adj = g.adjacency();
    let edges: Vec<usize> = (0..g.edges.len()).filter(|&e| comp.contains(&g.edges[e].0)).collect();
    let v = comp.len();
    let deg = g.degrees();
    let cyclic = edges.len() >= v;
    if !cyclic {
        let branch: Vec<usize> = comp.iter().copied().filter(|&u| deg[u] >= 3).collect();
        if branch.is_empty() {
            return ComponentClass::Dynkin { kind: DynkinType::a(v) };
        }
        if branch.len() == 1 && deg[branch[0]] == 4 && v == 5 {
            return ComponentClass::ExtendedDynkin { kind: DynkinType::d_ext(4) };
        }
        if branch.len() == 1 && deg[branch[0]] == 3 {
            let mut lens: Vec<usize> = arms_from(&adj, branch[0]).iter().map(Vec::len).collect();
            lens.sort_unstable();
            let kind = match (lens[0], lens[1], lens[2]) {
                (1, 1, _) => Some(ComponentClass::Dynkin { kind: DynkinType::d(v) }),
                (1, 2, 2..=4) => Some(ComponentClass::Dynkin { kind: DynkinType::e(v) }),
                (2, 2, 2) => Some(ComponentClass::ExtendedDynkin { kind: DynkinType::e_ext(6) }),
                (1, 3, 3) => Some(ComponentClass::ExtendedDynkin { kind: DynkinType::e_ext(7) }),
                (1, 2, 5) => Some(ComponentClass::ExtendedDynkin { kind: DynkinType::e_ext(8) }),
                _ => None,
            };
            if let Some(k) = kind {
                return k;
            }
        }
        if branch.len() == 2 && branch.iter().all(|&b| deg[b] == 3) {
            let leaves_ok = branch
                .iter()
                .all(|&b| adj[b].iter().filter(|&&(w, _)| deg[w] == 1).count() == 2);
            if leaves_ok {
                return ComponentClass::ExtendedDynkin { kind: DynkinType::d_ext(v - 1) };
            }
        }
        return ComponentClass::SupersetOfExtended { witness: tree_witness(&adj, &deg, &branch) };
    }
    if edges.len() == v && comp.iter().all(|&u| deg[u] == 2) {
        return ComponentClass::ExtendedDynkin { kind: DynkinType::a_ext(v - 1) };
    }
    ComponentClass::SupersetOfExtended { witness: shortest_cycle(g, &adj, comp) }
}

fn tree_witness(adj: &[Vec<(usize, usize)>], deg: &[usize], branch: &[usize]) -> EmbeddedGraph {
    if let Some(&c) = branch.iter().find(|&&b| deg[b] >= 4) {
        let nb: Vec<(usize, usize)> = adj[c].iter().copied().take(4).collect();
        let mut vertices = vec![c];
        vertices.extend(nb.iter().map(|&(w, _)| w));
        return EmbeddedGraph {
            kind: DynkinType::d_ext(4),
            vertices,
            edges: nb.iter().map(|&(_, e)| e).collect(),
        };
    }
    if branch.len() >= 2 {
        // closest pair of branch vertices, by BFS from each
        let mut best: Option<Vec<(usize, usize)>> = None;
        for &s in branch {
            let mut parent = vec![None; adj.len()];
            let mut seen = vec![false; adj.len()];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                if u != s && deg[u] >= 3 {
                    let mut path = Vec::new();
                    let mut cur = u;
                    while let Some((p, e)) = parent[cur] {
                        path.push((cur, e));
                        cur = p;
                    }
                    path.push((s, usize::MAX));
                    path.reverse();
                    if best.as_ref().map_or(true, |b| path.len() < b.len()) {
                        best = Some(path);
                    }
                    break;
                }
                for &(w, e) in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        parent[w] = Some((u, e));
                        queue.push_back(w);
                    }
                }
            }
        }
        let path = best.expect("two branch vertices in a tree are connected");
        let on_path: Vec<usize> = path.iter().map(|&(u, _)| u).collect();
        let mut vertices = on_path.clone();
        let mut edges: Vec<usize> = path[1..].iter().map(|&(_, e)| e).collect();
        for &end in [on_path[0], *on_path.last().unwrap()].iter() {
            for &(w, e) in adj[end].iter().filter(|&&(w, _)| !on_path.contains(&w)).take(2) {
                vertices.push(w);
                edges.push(e);
            }
        }
        let n = vertices.len() - 1;
        return EmbeddedGraph { kind: DynkinType::d_ext(n), vertices, edges };
    }
    let c = branch[0];
    let mut arms = arms_from(adj, c);
    arms.sort_by_key(Vec::len);
    let lens: Vec<usize> = match (arms[0].len(), arms[1].len()) {
        (a, _) if a >= 2 => vec![2, 2, 2],
        (_, b) if b >= 3 => vec![1, 3, 3],
        _ => vec![1, 2, 5],
    };
    let kind = DynkinType::e_ext(lens.iter().sum::<usize>());
    let mut vertices = vec![c];
    let mut edges = Vec::new();
    for (arm, &l) in arms.iter().zip(&lens) {
        for &(w, e) in &arm[..l] {
            vertices.push(w);
            edges.push(e);
        }
    }
    EmbeddedGraph { kind, vertices, edges }
}

fn shortest_cycle(g: &Multigraph, adj: &[Vec<(usize, usize)>], comp: &[usize]) -> EmbeddedGraph {
    for &u in comp {
        if let Some(e) = (0..g.edges.len()).find(|&e| g.edges[e] == (u, u)) {
            return EmbeddedGraph { kind: DynkinType::a_ext(0), vertices: vec![u], edges: vec![e] };
        }
    }
    let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
    for &s in comp {
        // BFS tree from s; a non-tree edge closes a cycle through s when the branches differ
        let mut dist = vec![usize::MAX; adj.len()];
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; adj.len()];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &(w, e) in &adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = Some((u, e));
                    queue.push_back(w);
                } else if parent[u].map(|(_, pe)| pe) != Some(e) {
                    let climb = |mut x: usize| {
                        let mut vs = vec![x];
                        let mut es = Vec::new();
                        while let Some((p, pe)) = parent[x] {
                            vs.push(p);
                            es.push(pe);
                            x = p;
                        }
                        (vs, es)
                    };
                    let (vu, eu) = climb(u);
                    let (vw, ew) = climb(w);
                    // the two root paths must meet only at s
                    if vu.iter().filter(|x| vw.contains(x)).count() != 1 {
                        continue;
                    }
                    let len = eu.len() + ew.len() + 1;
                    if best.as_ref().map_or(true, |(_, be)| len < be.len()) {
                        let mut vertices: Vec<usize> = vu[..vu.len() - 1].to_vec();
                        vertices.reverse();
                        let mut vs = vec![s];
                        vs.extend(vertices);
                        vs.extend(vw[..vw.len() - 1].iter().copied());
                        let mut es: Vec<usize> = eu;
                        es.push(e);
                        es.extend(ew);
                        best = Some((vs, es));
                    }
                }
            }
        }
    }
    let (vertices, edges) = best.expect("a component with as many edges as vertices has a cycle");
    let kind = DynkinType::a_ext(vertices.len() - 1);
    EmbeddedGraph { kind, vertices, edges }
}

pub fn classify_graph(g: &Multigraph) -> GraphClass {
    GraphClass {
        components: g
            .components()
            .into_iter()
            .map(|c| {
                let class = classify_component(g, &c);
                (c, class)
            })
            .collect(),
    }
}

/// An injective map of the pattern's vertices and edges into `g`, if one exists.
pub fn embeds(g: &Multigraph, pattern: &Multigraph) -> Option<EmbeddedGraph> {
    let np = pattern.len();
    if np > g.len() || pattern.edges.len() > g.edges.len() {
        return None;
    }
    let pdeg = pattern.degrees();
    let gdeg = g.degrees();
    let padj = pattern.adjacency();
    // BFS order of pattern vertices so each new vertex has a mapped neighbour
    let mut order = Vec::new();
    let mut seen = vec![false; np];
    for s in 0..np {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            order.push(u);
            for &(w, _) in &padj[u] {
                if !seen[w] {
                    seen[w] = true;
                    q.push_back(w);
                }
            }
        }
    }
    struct St<'a> {
        g: &'a Multigraph,
        p: &'a Multigraph,
        order: Vec<usize>,
        pdeg: Vec<usize>,
        gdeg: Vec<usize>,
        vmap: Vec<Option<usize>>,
        used_v: Vec<bool>,
        emap: Vec<Option<usize>>,
        used_e: Vec<bool>,
    }
    // assign edges of the pattern between mapped vertices; backtracks over parallel choices
    fn edges_ok(st: &mut St, pe: &[usize], k: usize) -> bool {
        if k == pe.len() {
            return true;
        }
        let (a, b) = st.p.edges[pe[k]];
        let (ga, gb) = (st.vmap[a].unwrap(), st.vmap[b].unwrap());
        for ge in 0..st.g.edges.len() {
            if st.used_e[ge] {
                continue;
            }
            let (x, y) = st.g.edges[ge];
            if (x, y) == (ga, gb) || (y, x) == (ga, gb) {
                st.used_e[ge] = true;
                st.emap[pe[k]] = Some(ge);
                if edges_ok(st, pe, k + 1) {
                    return true;
                }
                st.used_e[ge] = false;
                st.emap[pe[k]] = None;
            }
        }
        false
    }
    fn go(st: &mut St, i: usize) -> bool {
        if i == st.order.len() {
            return true;
        }
        let u = st.order[i];
        for gv in 0..st.g.len() {
            if st.used_v[gv] || st.gdeg[gv] < st.pdeg[u] {
                continue;
            }
            st.vmap[u] = Some(gv);
            st.used_v[gv] = true;
            // pattern edges from u to already mapped vertices (including loops)
            let pe: Vec<usize> = (0..st.p.edges.len())
                .filter(|&e| {
                    let (a, b) = st.p.edges[e];
                    (a == u && st.vmap[b].is_some()) || (b == u && st.vmap[a].is_some())
                })
                .filter(|&e| st.emap[e].is_none())
                .collect();
            if edges_ok(st, &pe, 0) {
                if go(st, i + 1) {
                    return true;
                }
                for &e in &pe {
                    if let Some(ge) = st.emap[e].take() {
                        st.used_e[ge] = false;
                    }
                }
            }
            st.vmap[u] = None;
            st.used_v[gv] = false;
        }
        false
    }
    let mut st = St {
        g,
        p: pattern,
        order,
        pdeg,
        gdeg,
        vmap: vec![None; np],
        used_v: vec![false; g.len()],
        emap: vec![None; pattern.edges.len()],
        used_e: vec![false; g.edges.len()],
    };
    if !go(&mut st, 0) {
        return None;
    }
    Some(EmbeddedGraph {
        kind: DynkinType::a(0),
        vertices: st.vmap.iter().map(|v| v.unwrap()).collect(),
        edges: st.emap.iter().map(|e| e.unwrap()).collect(),
    })
}

/// Whether `g` contains the extended Dynkin graph of `kind` as a subgraph.
pub fn contains_type(g: &Multigraph, kind: DynkinType) -> Option<EmbeddedGraph> {
    embeds(g, &kind.graph()).map(|mut w| {
        w.kind = kind;
        w
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(g: &Multigraph) -> ComponentClass {
        let c = classify_graph(g);
        assert_eq!(c.components.len(), 1);
        c.components[0].1.clone()
    }

    fn path(n: usize) -> Multigraph {
        Multigraph::new(n, (0..n - 1).map(|i| (i, i + 1)).collect())
    }

    #[test]
    fn small_examples() {
        assert_eq!(class(&path(4)), ComponentClass::Dynkin { kind: DynkinType::a(4) });
        let cycle = Multigraph::new(6, (0..6).map(|i| (i, (i + 1) % 6)).collect());
        assert_eq!(class(&cycle), ComponentClass::ExtendedDynkin { kind: DynkinType::a_ext(5) });
        let star = Multigraph::new(5, vec![(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert_eq!(class(&star), ComponentClass::ExtendedDynkin { kind: DynkinType::d_ext(4) });
        let mut bigger = star.clone();
        bigger.labels.push("5".into());
        bigger.edges.push((4, 5));
        match class(&bigger) {
            ComponentClass::SupersetOfExtended { witness } => assert_eq!(witness.kind, DynkinType::d_ext(4)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn catalog_graphs_classify_as_themselves() {
        let mut kinds = vec![];
        for n in 1..9 {
            kinds.push(DynkinType::a(n));
            kinds.push(DynkinType::a_ext(n - 1));
        }
        for n in 4..9 {
            kinds.push(DynkinType::d(n));
            kinds.push(DynkinType::d_ext(n));
        }
        for n in 6..9 {
            kinds.push(DynkinType::e(n));
            kinds.push(DynkinType::e_ext(n));
        }
        for k in kinds {
            let g = k.graph();
            assert_eq!(g.len(), k.vertices(), "{k}");
            let expect = if k.extended {
                ComponentClass::ExtendedDynkin { kind: k }
            } else {
                ComponentClass::Dynkin { kind: k }
            };
            assert_eq!(class(&g), expect, "{k}");
        }
    }

    #[test]
    fn witnesses_are_extended() {
        let graphs = [
            Multigraph::new(3, vec![(0, 1), (1, 2), (2, 2)]),
            Multigraph::new(3, vec![(0, 1), (0, 1), (1, 2)]),
            Multigraph::new(6, vec![(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)]),
            Multigraph::new(8, vec![(0, 1), (0, 2), (0, 3), (3, 4), (4, 5), (4, 6), (6, 7)]),
            Multigraph::new(9, vec![(0, 1), (1, 2), (0, 3), (3, 4), (4, 8), (0, 5), (5, 6), (6, 7)]),
        ];
        for g in graphs {
            let ComponentClass::SupersetOfExtended { witness } = class(&g) else { panic!("{g:?}") };
            let sub = g.edge_subgraph(&witness.vertices, &witness.edges);
            assert_eq!(class(&sub), ComponentClass::ExtendedDynkin { kind: witness.kind }, "{g:?}");
        }
    }

    #[test]
    fn embedding_respects_multiplicity() {
        let double = Multigraph::new(2, vec![(0, 1), (0, 1)]);
        assert!(embeds(&path(3), &double).is_none());
        assert!(contains_type(&double, DynkinType::a_ext(1)).is_some());
        let star = DynkinType::d_ext(4).graph();
        assert!(contains_type(&star, DynkinType::d_ext(4)).is_some());
        assert!(contains_type(&path(7), DynkinType::d_ext(4)).is_none());
    }
}
