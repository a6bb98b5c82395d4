//! Budgeted search for cleaving diagrams of extended Dynkin shape.

use std::collections::BTreeSet;

use super::crown::{find_crown, Crown};
use super::graph::{DynkinType, Multigraph};
use super::{check_cleaving, DiagramFunctor};
use crate::morphology::{factor_after, factor_before};
use crate::presentation::{ArrowDecl, Presentation, Quiver};
use crate::raycore::{MorId, RayCategory};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// One orientation of a tree-shaped extended Dynkin graph.
#[derive(Debug, Clone)]
pub struct CatalogShape {
    pub kind: DynkinType,
    pub shape: Presentation,
}

#[derive(Debug, Clone)]
pub enum Witness {
    Crown(Crown),
    Diagram { kind: DynkinType, functor: DiagramFunctor },
}

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found { witness: Witness, assignments: u64 },
    /// Every catalog shape was searched to the end.
    Absent { assignments: u64 },
    /// The budget ran out first.
    BudgetExhausted { assignments: u64 },
}

fn automorphisms(g: &Multigraph) -> Vec<Vec<usize>> {
    let n = g.len();
    let edges: BTreeSet<(usize, usize)> = g.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    fn rec(i: usize, perm: &mut Vec<usize>, used: &mut Vec<bool>, g: &Multigraph, edges: &BTreeSet<(usize, usize)>, out: &mut Vec<Vec<usize>>) {
        if i == perm.len() {
            let ok = g.edges.iter().all(|&(a, b)| {
                let (x, y) = (perm[a], perm[b]);
                edges.contains(&(x.min(y), x.max(y)))
            });
            if ok {
                out.push(perm.clone());
            }
            return;
        }
        for v in 0..perm.len() {
            if used[v] {
                continue;
            }
            // edges between already placed vertices must survive
            let bad = g.edges.iter().any(|&(a, b)| {
                let b = if a == i { b } else if b == i { a } else { return false };
                b < i && !edges.contains(&(v.min(perm[b]), v.max(perm[b])))
            });
            if bad {
                continue;
            }
            used[v] = true;
            perm[i] = v;
            rec(i + 1, perm, used, g, edges, out);
            used[v] = false;
        }
    }
    let mut used = vec![false; n];
    rec(0, &mut perm, &mut used, g, &edges, &mut out);
    out
}

/// All orientations of the tree shapes up to `max_nodes` points, one per
/// automorphism class, ordered by point count.
pub fn catalog(max_nodes: usize) -> Vec<CatalogShape> {
    let mut kinds: Vec<DynkinType> = (4..max_nodes).map(DynkinType::d_ext).collect();
    kinds.extend([DynkinType::e_ext(6), DynkinType::e_ext(7), DynkinType::e_ext(8)]);
    kinds.retain(|k| k.vertices() <= max_nodes);
    kinds.sort_by_key(|k| (k.vertices(), k.family, k.n));
    let mut out = Vec::new();
    for kind in kinds {
        let g = kind.graph();
        let edges: Vec<(usize, usize)> = g.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        let autos = automorphisms(&g);
        let m = edges.len();
        let mut seen = BTreeSet::new();
        for mask in 0u32..(1 << m) {
            // orientation of edge i: bit set means larger -> smaller
            let arcs = |perm: &[usize]| {
                let mut v: Vec<(usize, usize)> = edges
                    .iter()
                    .enumerate()
                    .map(|(i, &(a, b))| {
                        let (s, t) = if mask >> i & 1 == 1 { (b, a) } else { (a, b) };
                        (perm[s], perm[t])
                    })
                    .collect();
                v.sort_unstable();
                v
            };
            let canon = autos.iter().map(|p| arcs(p)).min().unwrap();
            if !seen.insert(canon) {
                continue;
            }
            let ident: Vec<usize> = (0..g.len()).collect();
            let arcs = arcs(&ident);
            let quiver = Quiver {
                points: (0..g.len()).map(|i| format!("v{i}")).collect(),
                arrows: arcs
                    .iter()
                    .enumerate()
                    .map(|(i, &(s, t))| ArrowDecl {
                        name: format!("e{i}"),
                        source: format!("v{s}"),
                        target: format!("v{t}"),
                    })
                    .collect(),
            };
            let name = format!("{}_{}", kind.to_string().replace('~', "ext_"), out.len());
            let shape = Presentation::new(name, quiver, vec![]).expect("catalog shapes are valid");
            out.push(CatalogShape { kind, shape });
        }
    }
    out
}

struct TreeSearch<'a> {
    p: &'a RayCategory,
    /// shape arrows as (source, target)
    arcs: Vec<(usize, usize)>,
    /// vertices in BFS order; `attach[i]` is the arrow joining order[i] to an earlier vertex
    order: Vec<usize>,
    attach: Vec<Option<usize>>,
    /// `reach[a][b]` in the oriented tree
    reach: Vec<Vec<bool>>,
    obj: Vec<Option<usize>>,
    img: Vec<Option<MorId>>,
    spent: u64,
    budget: u64,
    out_of_budget: bool,
}

impl TreeSearch<'_> {
    /// Composite along the directed path a -> b among assigned arrows.
    fn value(&self, a: usize, b: usize) -> Option<MorId> {
        if a == b {
            return Some(self.p.identity(self.obj[a].unwrap()));
        }
        // the unique arrow out of a on the way to b
        let (i, &(_, t)) = self
            .arcs
            .iter()
            .enumerate()
            .find(|&(_, &(s, t))| s == a && self.reach[t][b])
            .unwrap();
        let rest = self.value(t, b)?;
        self.p.comp(rest, self.img[i].unwrap())
    }

    fn consistent(&self, new_vertex: usize, arrow: usize) -> bool {
        let (s, t) = self.arcs[arrow];
        let q = if s == new_vertex { t } else { s };
        let assigned = |v: usize| self.obj[v].is_some();
        // composites through the new arrow stay nonzero
        for v in 0..self.obj.len() {
            if !assigned(v) {
                continue;
            }
            if t == new_vertex && self.reach[v][q] && self.value(v, new_vertex).is_none() {
                return false;
            }
            if s == new_vertex && self.reach[q][v] && self.value(new_vertex, v).is_none() {
                return false;
            }
        }
        // siblings at q: no factorization in either direction
        let f = self.img[arrow].unwrap();
        for (j, &(s2, t2)) in self.arcs.iter().enumerate() {
            if j == arrow || self.img[j].is_none() {
                continue;
            }
            let g = self.img[j].unwrap();
            if s2 == s && s == q && (factor_after(self.p, f, g).is_some() || factor_after(self.p, g, f).is_some()) {
                return false;
            }
            if t2 == t && t == q && (factor_before(self.p, f, g).is_some() || factor_before(self.p, g, f).is_some()) {
                return false;
            }
        }
        true
    }

    fn tick(&mut self) -> bool {
        self.spent += 1;
        if self.spent > self.budget {
            self.out_of_budget = true;
        }
        !self.out_of_budget
    }

    fn go(&mut self, i: usize, shape: &Presentation) -> Option<DiagramFunctor> {
        if i == self.order.len() {
            let f = DiagramFunctor {
                shape: shape.clone(),
                objects: self.obj.iter().map(|o| o.unwrap()).collect(),
                arrows: self.img.iter().map(|m| m.unwrap()).collect(),
            };
            return match check_cleaving(self.p, &f) {
                Ok(v) if v.ok => Some(f),
                _ => None,
            };
        }
        let v = self.order[i];
        let Some(arrow) = self.attach[i] else {
            for x in 0..self.p.num_points() {
                if !self.tick() {
                    return None;
                }
                self.obj[v] = Some(x);
                if let Some(f) = self.go(i + 1, shape) {
                    return Some(f);
                }
                self.obj[v] = None;
            }
            return None;
        };
        let (s, t) = self.arcs[arrow];
        let outward = s != v;
        let q = if outward { s } else { t };
        let qx = self.obj[q].unwrap();
        for m in 0..self.p.num_morphisms() {
            if self.p.is_identity(m) {
                continue;
            }
            let fits = if outward { self.p.source(m) == qx } else { self.p.target(m) == qx };
            if !fits {
                continue;
            }
            if !self.tick() {
                return None;
            }
            self.obj[v] = Some(if outward { self.p.target(m) } else { self.p.source(m) });
            self.img[arrow] = Some(m);
            if self.consistent(v, arrow) {
                if let Some(f) = self.go(i + 1, shape) {
                    return Some(f);
                }
            }
            if self.out_of_budget {
                return None;
            }
            self.img[arrow] = None;
            self.obj[v] = None;
        }
        None
    }
}

fn search_tree(p: &RayCategory, shape: &Presentation, budget: u64) -> (Option<DiagramFunctor>, u64, bool) {
    let q = &shape.quiver;
    let n = q.points.len();
    let arcs: Vec<(usize, usize)> = q
        .arrows
        .iter()
        .map(|a| (q.point_index(&a.source).unwrap(), q.point_index(&a.target).unwrap()))
        .collect();
    let mut reach = vec![vec![false; n]; n];
    for (v, row) in reach.iter_mut().enumerate() {
        row[v] = true;
    }
    for _ in 0..n {
        for &(s, t) in &arcs {
            for a in 0..n {
                if reach[a][s] {
                    reach[a][t] = true;
                }
            }
        }
    }
    let mut order = vec![0];
    let mut attach = vec![None];
    let mut placed = vec![false; n];
    placed[0] = true;
    let mut k = 0;
    while k < order.len() {
        let u = order[k];
        for (i, &(s, t)) in arcs.iter().enumerate() {
            let other = if s == u { t } else if t == u { s } else { continue };
            if !placed[other] {
                placed[other] = true;
                order.push(other);
                attach.push(Some(i));
            }
        }
        k += 1;
    }
    let mut st = TreeSearch {
        p,
        arcs,
        order,
        attach,
        reach,
        obj: vec![None; n],
        img: vec![None; q.arrows.len()],
        spent: 0,
        budget,
        out_of_budget: false,
    };
    let found = st.go(0, shape);
    (found, st.spent.min(budget), st.out_of_budget)
}

/// Crowns of period `2p ≤ max_nodes` and the tree shapes of [`catalog`], in
/// order of point count. The budget counts candidate assignments across all
/// tree shapes.
pub fn find_dynkin_cleaving(p: &RayCategory, max_nodes: usize, budget: u64) -> SearchOutcome {
    let trees = catalog(max_nodes);
    let mut spent = 0u64;
    let mut ti = 0;
    for nodes in 2..=max_nodes {
        if nodes % 2 == 0 {
            let period = nodes / 2;
            if let Some(c) = find_crown(p, period).filter(|c| c.period() == period) {
                return SearchOutcome::Found { witness: Witness::Crown(c), assignments: spent };
            }
        }
        while ti < trees.len() && trees[ti].kind.vertices() == nodes {
            let (found, used, exhausted) = search_tree(p, &trees[ti].shape, budget - spent);
            spent += used;
            if let Some(functor) = found {
                let witness = Witness::Diagram { kind: trees[ti].kind, functor };
                return SearchOutcome::Found { witness, assignments: spent };
            }
            if exhausted {
                return SearchOutcome::BudgetExhausted { assignments: spent };
            }
            ti += 1;
        }
    }
    SearchOutcome::Absent { assignments: spent }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    #[test]
    fn catalog_sizes() {
        let c = catalog(8);
        let count = |k: DynkinType| c.iter().filter(|s| s.kind == k).count();
        // orientations of the star with four leaves up to symmetry: by in-degree 0..4
        assert_eq!(count(DynkinType::d_ext(4)), 5);
        assert!(c.windows(2).all(|w| w[0].kind.vertices() <= w[1].kind.vertices()));
        assert_eq!(count(DynkinType::e_ext(8)), 0);
    }

    #[test]
    fn four_arrows_into_a_sink() {
        let h = RayCategory::build(
            &parse_presentation("points c p1 p2 p3 p4\narrow a1 : p1 -> c\narrow a2 : p2 -> c\narrow a3 : p3 -> c\narrow a4 : p4 -> c\n").unwrap(),
            32,
        )
        .unwrap();
        match find_dynkin_cleaving(&h, 8, DEFAULT_BUDGET) {
            SearchOutcome::Found { witness: Witness::Diagram { kind, functor }, .. } => {
                assert_eq!(kind, DynkinType::d_ext(4));
                assert!(check_cleaving(&h, &functor).unwrap().ok);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tiny_budget_is_reported() {
        let h = RayCategory::build(
            &parse_presentation("points c p1 p2 p3 p4\narrow a1 : p1 -> c\narrow a2 : p2 -> c\narrow a3 : p3 -> c\narrow a4 : p4 -> c\n").unwrap(),
            32,
        )
        .unwrap();
        assert!(matches!(find_dynkin_cleaving(&h, 8, 3), SearchOutcome::BudgetExhausted { .. }));
    }

    #[test]
    fn linear_host_has_nothing() {
        let h = RayCategory::build(&parse_presentation("points x y z\narrow a : x -> y\narrow b : y -> z\n").unwrap(), 32).unwrap();
        assert!(matches!(find_dynkin_cleaving(&h, 8, DEFAULT_BUDGET), SearchOutcome::Absent { .. }));
    }
}
