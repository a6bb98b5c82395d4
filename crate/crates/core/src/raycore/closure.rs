//! Congruence closure over the left Cayley graph of the path category.
//!
//! Nodes are classes of paths; the edge labelled `a` out of a node holding
//! path `p` leads to the class of `a p`. Every relation is traced at every
//! node whose target is the relation's source, and the two ends are merged.
//! Merges propagate along equally labelled edges, so the finished table is
//! closed under composition on both sides.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

pub(crate) const ZERO: usize = 0;

/// Nodes beyond this count abort the closure.
pub(crate) const NODE_BUDGET: usize = 250_000;

pub(crate) struct RelationSpec {
    pub source: usize,
    pub left: Vec<usize>,
    /// `None` for a zero relation.
    pub right: Option<Vec<usize>>,
}

/// The finished graph restricted to nonzero classes.
pub(crate) struct Cayley {
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    /// `ext[n][a]` is the class of `a` after `n`; `None` is zero or not composable.
    pub ext: Vec<Vec<Option<usize>>>,
    pub identity: Vec<usize>,
}

struct Node {
    rep: Vec<usize>,
    source: usize,
    target: usize,
    ext: Vec<Option<usize>>,
    processed: bool,
}

struct Engine<'a> {
    arrows: &'a [(usize, usize)],
    nodes: Vec<Node>,
    parent: Vec<usize>,
    heap: BinaryHeap<Reverse<(usize, usize)>>,
    pending: Vec<(usize, usize)>,
}

fn shortlex_less(a: &[usize], b: &[usize]) -> bool {
    (a.len(), a) < (b.len(), b)
}

impl<'a> Engine<'a> {
    fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    fn push_node(&mut self, node: Node) -> Result<usize> {
        if self.nodes.len() >= NODE_BUDGET {
            return Err(Error::ClosureBudget { nodes: NODE_BUDGET });
        }
        let id = self.nodes.len();
        self.heap.push(Reverse((node.rep.len(), id)));
        self.nodes.push(node);
        self.parent.push(id);
        Ok(id)
    }

    fn define(&mut self, n: usize, a: usize) -> Result<usize> {
        let mut rep = Vec::with_capacity(self.nodes[n].rep.len() + 1);
        rep.push(a);
        rep.extend_from_slice(&self.nodes[n].rep);
        let child = self.push_node(Node {
            rep,
            source: self.nodes[n].source,
            target: self.arrows[a].1,
            ext: vec![None; self.arrows.len()],
            processed: false,
        })?;
        self.nodes[n].ext[a] = Some(child);
        Ok(child)
    }

    fn step(&mut self, n: usize, a: usize) -> Result<usize> {
        let n = self.find(n);
        if n == ZERO {
            return Ok(ZERO);
        }
        match self.nodes[n].ext[a] {
            Some(c) => Ok(self.find(c)),
            None => self.define(n, a),
        }
    }

    /// Follows `path` (rightmost arrow first) from `start`.
    fn trace(&mut self, start: usize, path: &[usize]) -> Result<usize> {
        let mut n = start;
        for &a in path.iter().rev() {
            n = self.step(n, a)?;
            if n == ZERO {
                break;
            }
        }
        Ok(n)
    }

    fn merge(&mut self, a: usize, b: usize) {
        self.pending.push((a, b));
        while let Some((a, b)) = self.pending.pop() {
            let a = self.find(a);
            let b = self.find(b);
            if a == b {
                continue;
            }
            let (keep, dead) = if a == ZERO {
                (a, b)
            } else if b == ZERO || shortlex_less(&self.nodes[b].rep, &self.nodes[a].rep) {
                (b, a)
            } else {
                (a, b)
            };
            self.parent[dead] = keep;
            let dead_ext = std::mem::take(&mut self.nodes[dead].ext);
            for (i, c) in dead_ext.into_iter().enumerate() {
                let Some(c) = c else { continue };
                if keep == ZERO {
                    self.pending.push((c, ZERO));
                } else {
                    match self.nodes[keep].ext[i] {
                        Some(d) => self.pending.push((c, d)),
                        None => self.nodes[keep].ext[i] = Some(c),
                    }
                }
            }
        }
    }

    fn process(&mut self, n: usize, relations: &[RelationSpec]) -> Result<()> {
        self.nodes[n].processed = true;
        let t = self.nodes[n].target;
        for a in 0..self.arrows.len() {
            if self.arrows[a].0 == t {
                self.step(n, a)?;
            }
        }
        for rel in relations.iter().filter(|r| r.source == t) {
            let here = self.find(n);
            if here == ZERO {
                return Ok(());
            }
            let l = self.trace(here, &rel.left)?;
            let r = match &rel.right {
                Some(p) => self.trace(here, p)?,
                None => ZERO,
            };
            self.merge(l, r);
        }
        Ok(())
    }
}

/// Runs the closure. Every path of length `cap` must end up zero, otherwise
/// `NotFinite(cap)`.
pub(crate) fn close(
    num_points: usize,
    arrows: &[(usize, usize)],
    relations: &[RelationSpec],
    cap: usize,
) -> Result<Cayley> {
    let mut eng = Engine {
        arrows,
        nodes: Vec::new(),
        parent: Vec::new(),
        heap: BinaryHeap::new(),
        pending: Vec::new(),
    };
    eng.nodes.push(Node {
        rep: Vec::new(),
        source: usize::MAX,
        target: usize::MAX,
        ext: vec![Some(ZERO); arrows.len()],
        processed: true,
    });
    eng.parent.push(ZERO);
    let mut identity = Vec::with_capacity(num_points);
    for x in 0..num_points {
        identity.push(eng.push_node(Node {
            rep: Vec::new(),
            source: x,
            target: x,
            ext: vec![None; arrows.len()],
            processed: false,
        })?);
    }

    // Relations can lengthen paths, so look a little past the cap before
    // deciding a long class is really nonzero.
    let longest = relations
        .iter()
        .map(|r| r.left.len().max(r.right.as_ref().map_or(0, Vec::len)))
        .max()
        .unwrap_or(0);
    let horizon = cap + longest;

    while let Some(Reverse((len, id))) = eng.heap.pop() {
        if eng.find(id) != id || eng.nodes[id].processed || len >= horizon {
            continue;
        }
        eng.process(id, relations)?;
    }

    let mut index = vec![usize::MAX; eng.nodes.len()];
    let mut live = Vec::new();
    for id in 1..eng.nodes.len() {
        if eng.find(id) == id {
            if eng.nodes[id].rep.len() >= cap || !eng.nodes[id].processed {
                return Err(Error::NotFinite { cap });
            }
            index[id] = live.len();
            live.push(id);
        }
    }

    let mut out = Cayley {
        source: Vec::with_capacity(live.len()),
        target: Vec::with_capacity(live.len()),
        ext: Vec::with_capacity(live.len()),
        identity: Vec::with_capacity(num_points),
    };
    for &id in &live {
        out.source.push(eng.nodes[id].source);
        out.target.push(eng.nodes[id].target);
        let ext: Vec<Option<usize>> = (0..arrows.len())
            .map(|a| {
                let c = eng.nodes[id].ext[a]?;
                let c = eng.find(c);
                (c != ZERO).then(|| index[c])
            })
            .collect();
        out.ext.push(ext);
    }
    for x in identity {
        let id = eng.find(x);
        out.identity.push(index[id]);
    }
    if longest_nonzero_path(&out.ext).map_or(true, |len| len >= cap) {
        return Err(Error::NotFinite { cap });
    }
    Ok(out)
}

/// Length of the longest path through nonzero classes, `None` if unbounded.
fn longest_nonzero_path(ext: &[Vec<Option<usize>>]) -> Option<usize> {
    // 0 = unvisited, 1 = on stack, 2 = done
    let n = ext.len();
    let mut state = vec![0u8; n];
    let mut depth = vec![0usize; n];
    for root in 0..n {
        if state[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        state[root] = 1;
        while let Some(top) = stack.last_mut() {
            let node = top.0;
            let mut child = None;
            while top.1 < ext[node].len() {
                let i = top.1;
                top.1 += 1;
                if let Some(c) = ext[node][i] {
                    child = Some(c);
                    break;
                }
            }
            match child {
                Some(c) => match state[c] {
                    0 => {
                        state[c] = 1;
                        stack.push((c, 0));
                    }
                    1 => return None,
                    _ => {}
                },
                None => {
                    depth[node] = ext[node].iter().flatten().map(|&c| depth[c] + 1).max().unwrap_or(0);
                    state[node] = 2;
                    stack.pop();
                }
            }
        }
    }
    Some(depth.into_iter().max().unwrap_or(0))
}
