//! Naive fixpoint closure: every path up to a growing length bound, joined by
//! single relation rewrites, with the zero ideal taken from subwords.

use std::collections::HashMap;

use raycat_core::{Presentation, Relation};

/// Paths are stored in written order, arrows by declaration index.
pub type Word = Vec<usize>;

/// Enumerated paths beyond this many give up.
pub const PATH_BUDGET: usize = 400_000;

#[derive(Debug, Clone)]
pub enum Naive {
    Finite(NaiveClosure),
    /// Some path of length `cap` is still nonzero.
    NotFinite { cap: usize },
    Budget { paths: usize },
}

#[derive(Debug, Clone)]
pub struct NaiveClosure {
    /// Nonzero paths of positive length, with their class numbers.
    pub nonzero: Vec<(Word, usize)>,
    pub classes: usize,
    /// Every path longer than this is zero.
    pub max_len: usize,
    pub arrow_names: Vec<String>,
}

impl NaiveClosure {
    pub fn class_of(&self, w: &[usize]) -> Option<usize> {
        self.nonzero.iter().find(|(u, _)| u == w).map(|&(_, c)| c)
    }

    pub fn class_members(&self, c: usize) -> Vec<&Word> {
        self.nonzero.iter().filter(|(_, k)| *k == c).map(|(u, _)| u).collect()
    }

    pub fn word(&self, names: &[&str]) -> Option<Word> {
        names.iter().map(|n| self.arrow_names.iter().position(|a| a == n)).collect()
    }

    pub fn spell(&self, w: &[usize]) -> String {
        w.iter().map(|&a| self.arrow_names[a].as_str()).collect::<Vec<_>>().join(" ")
    }
}

struct Engine {
    ends: Vec<(usize, usize)>,
    zero_words: Vec<Word>,
    rewrites: Vec<(Word, Word)>,
    index: HashMap<Word, usize>,
    words: Vec<Word>,
    parent: Vec<usize>,
}

const ZERO: usize = 0;

impl Engine {
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            let (lo, hi) = (a.min(b), a.max(b));
            self.parent[hi] = lo;
        }
    }

    fn contains(hay: &[usize], needle: &[usize]) -> bool {
        hay.windows(needle.len()).any(|w| w == needle)
    }

    /// Some subword is a zero relation or lies in the zero class.
    fn is_zero(&mut self, w: &[usize]) -> bool {
        if self.zero_words.iter().any(|z| Self::contains(w, z)) {
            return true;
        }
        for len in 1..=w.len() {
            for start in 0..=w.len() - len {
                if let Some(&i) = self.index.get(&w[start..start + len]) {
                    if self.find(i) == ZERO {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn add(&mut self, w: Word) {
        let id = self.words.len();
        self.words.push(w.clone());
        self.parent.push(id);
        self.index.insert(w.clone(), id);
        if self.zero_words.iter().any(|z| Self::contains(&w, z)) {
            self.union(id, ZERO);
            return;
        }
        for k in 0..self.rewrites.len() {
            let (l, r) = self.rewrites[k].clone();
            if l.len() > w.len() {
                continue;
            }
            for start in 0..=w.len() - l.len() {
                if w[start..start + l.len()] != l[..] {
                    continue;
                }
                let mut other = w[..start].to_vec();
                other.extend_from_slice(&r);
                other.extend_from_slice(&w[start + l.len()..]);
                if let Some(&j) = self.index.get(&other) {
                    self.union(id, j);
                } else if self.is_zero(&other) {
                    self.union(id, ZERO);
                }
            }
        }
    }

    fn composable(&self, w: &[usize]) -> bool {
        w.windows(2).all(|p| self.ends[p[0]].0 == self.ends[p[1]].1)
    }
}

/// The naive closure of `p`, giving up when a path of length `cap` survives.
pub fn naive_closure(p: &Presentation, cap: usize) -> Naive {
    let q = &p.quiver;
    let pt = |n: &str| q.points.iter().position(|x| x == n).expect("declared point");
    let arrow = |n: &str| q.arrows.iter().position(|a| a.name == n).expect("declared arrow");
    let word = |path: &raycat_core::PathExpr| -> Word { path.0.iter().map(|n| arrow(n)).collect() };
    let mut zero_words = Vec::new();
    let mut rewrites = Vec::new();
    for r in &p.relations {
        match r {
            Relation::Zero { path } => zero_words.push(word(path)),
            Relation::Commutativity { left, right } => {
                rewrites.push((word(left), word(right)));
                rewrites.push((word(right), word(left)));
            }
        }
    }
    let slack = rewrites.iter().map(|(l, _)| l.len()).max().unwrap_or(0).max(1);
    let mut e = Engine {
        ends: q.arrows.iter().map(|a| (pt(&a.source), pt(&a.target))).collect(),
        zero_words,
        rewrites,
        index: HashMap::new(),
        words: vec![Vec::new()],
        parent: vec![ZERO],
    };
    let mut frontier: Vec<Word> = (0..q.arrows.len()).map(|a| vec![a]).collect();
    let mut bound = 0;
    loop {
        bound += 1;
        for w in frontier.clone() {
            e.add(w);
        }
        if e.words.len() > PATH_BUDGET {
            return Naive::Budget { paths: e.words.len() };
        }
        // all paths of length `bound - slack` zero, judged with `slack` extra room
        if bound > slack {
            let l = bound - slack;
            let level: Vec<Word> = e.words.iter().filter(|w| w.len() == l).cloned().collect();
            if level.iter().all(|w| e.is_zero(w)) {
                return Naive::Finite(finish(&mut e, l, q.arrows.iter().map(|a| a.name.clone()).collect()));
            }
            if l >= cap {
                return Naive::NotFinite { cap };
            }
        }
        let mut next = Vec::new();
        for w in &frontier {
            if e.is_zero(w) {
                continue;
            }
            for a in 0..e.ends.len() {
                let mut longer = vec![a];
                longer.extend_from_slice(w);
                if e.composable(&longer) {
                    next.push(longer);
                }
            }
        }
        if next.is_empty() {
            return Naive::Finite(finish(&mut e, bound + 1, q.arrows.iter().map(|a| a.name.clone()).collect()));
        }
        frontier = next;
    }
}

fn finish(e: &mut Engine, l: usize, arrow_names: Vec<String>) -> NaiveClosure {
    let words: Vec<Word> = e.words.iter().filter(|w| !w.is_empty() && w.len() < l).cloned().collect();
    let mut roots: HashMap<usize, usize> = HashMap::new();
    let mut nonzero = Vec::new();
    for w in words {
        if e.is_zero(&w) {
            continue;
        }
        let root = e.find(e.index[&w]);
        let next = roots.len();
        let c = *roots.entry(root).or_insert(next);
        nonzero.push((w, c));
    }
    NaiveClosure {
        max_len: nonzero.iter().map(|(w, _)| w.len()).max().unwrap_or(0),
        nonzero,
        classes: roots.len(),
        arrow_names,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use raycat_core::parse_presentation;

    fn closure(text: &str) -> Naive {
        naive_closure(&parse_presentation(text).unwrap(), 32)
    }

    #[test]
    fn nilpotent_loop() {
        let Naive::Finite(c) = closure("points x\narrow a : x -> x\nrel a a a = 0\n") else { panic!() };
        assert_eq!(c.classes, 2);
        assert_eq!(c.max_len, 2);
    }

    #[test]
    fn commuting_square() {
        let text = "points x y z t\narrow a : x -> y\narrow b : y -> t\narrow c : x -> z\narrow d : z -> t\nrel b a = d c\n";
        let Naive::Finite(c) = closure(text) else { panic!() };
        // a, b, c, d and one class for the two composites
        assert_eq!(c.classes, 5);
        let ba = c.word(&["b", "a"]).unwrap();
        let dc = c.word(&["d", "c"]).unwrap();
        assert_eq!(c.class_of(&ba), c.class_of(&dc));
    }

    #[test]
    fn free_loop_is_not_finite() {
        assert!(matches!(closure("points x\narrow a : x -> x\n"), Naive::NotFinite { cap: 32 }));
    }
}
