//! Finite ray categories built from presentations.

pub(crate) mod axioms;
mod closure;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentation::{PathExpr, Presentation, Relation};

pub use axioms::{verify_axioms, AxiomReport, Side, Verdict};

pub const DEFAULT_CAP: usize = 32;

/// Index of a nonzero class. Ids are ordered by minimal representative.
pub type MorId = usize;

/// A morphism between two points; `class == None` is the zero morphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RayMorphism {
    pub source: usize,
    pub target: usize,
    pub class: Option<MorId>,
}

impl RayMorphism {
    pub fn is_zero(&self) -> bool {
        self.class.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Class {
    source: usize,
    target: usize,
    rep: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct RayCategory {
    presentation: Presentation,
    points: Vec<String>,
    arrows: Vec<Arrow>,
    classes: Vec<Class>,
    hom: Vec<Vec<Vec<MorId>>>,
    identity: Vec<MorId>,
    arrow_mor: Vec<MorId>,
    table: Vec<Option<MorId>>,
    cap: usize,
}

/// Builds the category presented by `p`, failing if some path of length
/// `cap` stays nonzero.
pub fn build_ray_category(p: &Presentation, cap: usize) -> Result<RayCategory> {
    RayCategory::build(p, cap)
}

impl RayCategory {
    pub fn build(p: &Presentation, cap: usize) -> Result<Self> {
        if cap == 0 {
            return Err(Error::Precondition("cap must be positive".into()));
        }
        let q = &p.quiver;
        let point = |n: &str| q.point_index(n).ok_or_else(|| Error::UnknownPoint(n.into()));
        let mut arrows = Vec::with_capacity(q.arrows.len());
        for a in &q.arrows {
            arrows.push(Arrow {
                name: a.name.clone(),
                source: point(&a.source)?,
                target: point(&a.target)?,
            });
        }
        let idx = |path: &PathExpr| -> Result<Vec<usize>> {
            path.0
                .iter()
                .map(|n| q.arrow_index(n).ok_or_else(|| Error::UnknownArrow(n.clone())))
                .collect()
        };
        let mut specs = Vec::with_capacity(p.relations.len());
        for rel in &p.relations {
            let (left, right) = match rel {
                Relation::Zero { path } => (idx(path)?, None),
                Relation::Commutativity { left, right } => (idx(left)?, Some(idx(right)?)),
            };
            let source = arrows[*left.last().expect("validated nonempty")].source;
            specs.push(closure::RelationSpec { source, left, right });
        }
        let ends: Vec<(usize, usize)> = arrows.iter().map(|a| (a.source, a.target)).collect();
        let cayley = closure::close(q.points.len(), &ends, &specs, cap)?;
        Ok(Self::from_cayley(p.clone(), arrows, cayley, cap))
    }

    fn from_cayley(presentation: Presentation, arrows: Vec<Arrow>, g: closure::Cayley, cap: usize) -> Self {
        let n = g.source.len();
        let num_points = presentation.quiver.points.len();

        // best[len][c]: shortlex-least path of exactly `len` arrows in class c.
        let mut best: Vec<Vec<Option<Vec<usize>>>> = vec![vec![None; n]];
        for &id in &g.identity {
            best[0][id] = Some(Vec::new());
        }
        let mut rep: Vec<Option<Vec<usize>>> = best[0].clone();
        while rep.iter().any(Option::is_none) {
            let prev = best.last().unwrap();
            let mut next: Vec<Option<Vec<usize>>> = vec![None; n];
            for d in 0..n {
                let Some(tail) = &prev[d] else { continue };
                for (a, c) in g.ext[d].iter().enumerate() {
                    let Some(c) = *c else { continue };
                    let mut cand = Vec::with_capacity(tail.len() + 1);
                    cand.push(a);
                    cand.extend_from_slice(tail);
                    if next[c].as_ref().map_or(true, |cur| cand < *cur) {
                        next[c] = Some(cand);
                    }
                }
            }
            if next.iter().all(Option::is_none) {
                break;
            }
            for c in 0..n {
                if rep[c].is_none() {
                    rep[c] = next[c].clone();
                }
            }
            best.push(next);
        }

        let mut order: Vec<usize> = (0..n).collect();
        let key = |c: &usize| {
            let r = rep[*c].as_ref().expect("every class is reachable");
            (r.len(), r.clone(), g.source[*c])
        };
        order.sort_by_key(key);
        let mut new_id = vec![0; n];
        for (i, &c) in order.iter().enumerate() {
            new_id[c] = i;
        }

        let classes: Vec<Class> = order
            .iter()
            .map(|&c| Class {
                source: g.source[c],
                target: g.target[c],
                rep: rep[c].clone().unwrap(),
            })
            .collect();
        let mut hom = vec![vec![Vec::new(); num_points]; num_points];
        for (i, c) in classes.iter().enumerate() {
            hom[c.source][c.target].push(i);
        }
        let identity: Vec<MorId> = g.identity.iter().map(|&c| new_id[c]).collect();
        let arrow_mor: Vec<MorId> = arrows
            .iter()
            .enumerate()
            .map(|(a, arr)| {
                let c = g.ext[g.identity[arr.source]][a].expect("arrows are nonzero");
                new_id[c]
            })
            .collect();

        let mut table = vec![None; n * n];
        for (gi, gc) in classes.iter().enumerate() {
            for (fi, fc) in classes.iter().enumerate() {
                if gc.source != fc.target {
                    continue;
                }
                let mut cur = Some(order[fi]);
                for &a in gc.rep.iter().rev() {
                    cur = cur.and_then(|c| g.ext[c][a]);
                }
                table[gi * n + fi] = cur.map(|c| new_id[c]);
            }
        }

        RayCategory {
            points: presentation.quiver.points.clone(),
            presentation,
            arrows,
            classes,
            hom,
            identity,
            arrow_mor,
            table,
            cap,
        }
    }

    pub fn name(&self) -> &str {
        &self.presentation.name
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn point_index(&self, name: &str) -> Result<usize> {
        self.points
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| Error::UnknownPoint(name.into()))
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow_index(&self, name: &str) -> Result<usize> {
        self.arrows
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| Error::UnknownArrow(name.into()))
    }

    pub fn num_morphisms(&self) -> usize {
        self.classes.len()
    }

    /// Nonzero classes from `x` to `y`, in id order.
    pub fn hom(&self, x: usize, y: usize) -> &[MorId] {
        &self.hom[x][y]
    }

    pub fn identity(&self, x: usize) -> MorId {
        self.identity[x]
    }

    pub fn is_identity(&self, m: MorId) -> bool {
        self.classes[m].rep.is_empty()
    }

    pub fn arrow_mor(&self, a: usize) -> MorId {
        self.arrow_mor[a]
    }

    pub fn source(&self, m: MorId) -> usize {
        self.classes[m].source
    }

    pub fn target(&self, m: MorId) -> usize {
        self.classes[m].target
    }

    /// Shortlex-least path in the class, as arrow indices in written order.
    pub fn rep(&self, m: MorId) -> &[usize] {
        &self.classes[m].rep
    }

    pub fn rep_path(&self, m: MorId) -> PathExpr {
        self.path_expr(self.rep(m))
    }

    pub fn path_expr(&self, path: &[usize]) -> PathExpr {
        PathExpr(path.iter().map(|&a| self.arrows[a].name.clone()).collect())
    }

    pub fn mor(&self, m: MorId) -> RayMorphism {
        RayMorphism {
            source: self.source(m),
            target: self.target(m),
            class: Some(m),
        }
    }

    pub fn zero(&self, x: usize, y: usize) -> RayMorphism {
        RayMorphism {
            source: x,
            target: y,
            class: None,
        }
    }

    /// `g ∘ f` on class ids; the caller guarantees `source(g) == target(f)`.
    pub fn comp(&self, g: MorId, f: MorId) -> Option<MorId> {
        debug_assert_eq!(self.source(g), self.target(f));
        self.table[g * self.classes.len() + f]
    }

    /// `g ∘ f` where either side may be zero.
    pub fn comp_opt(&self, g: Option<MorId>, f: Option<MorId>) -> Option<MorId> {
        self.comp(g?, f?)
    }

    pub fn compose(&self, g: RayMorphism, f: RayMorphism) -> Result<RayMorphism> {
        if g.source != f.target {
            return Err(Error::EndpointMismatch(format!(
                "{} after {}",
                self.display(g),
                self.display(f)
            )));
        }
        Ok(RayMorphism {
            source: f.source,
            target: g.target,
            class: self.comp_opt(g.class, f.class),
        })
    }

    /// Class of a path given by arrow indices in written order.
    pub fn class_of(&self, path: &[usize]) -> Option<MorId> {
        let last = *path.last()?;
        let mut cur = Some(self.identity[self.arrows[last].source]);
        for &a in path.iter().rev() {
            cur = self.comp_opt(Some(self.arrow_mor[a]), cur);
        }
        cur
    }

    pub fn arrow_path(&self, path: &PathExpr) -> Result<Vec<usize>> {
        path.endpoints(&self.presentation.quiver)?;
        path.0.iter().map(|n| self.arrow_index(n)).collect()
    }

    pub fn ray_of(&self, path: &PathExpr) -> Result<RayMorphism> {
        let p = self.arrow_path(path)?;
        Ok(RayMorphism {
            source: self.arrows[*p.last().unwrap()].source,
            target: self.arrows[p[0]].target,
            class: self.class_of(&p),
        })
    }

    /// Every path in class `m`, in shortlex order.
    pub fn paths_of(&self, m: MorId) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut stack = Vec::new();
        self.collect_paths(m, &mut stack, &mut out);
        out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        out
    }

    fn collect_paths(&self, m: MorId, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if self.is_identity(m) {
            out.push(prefix.clone());
            return;
        }
        let t = self.target(m);
        let s = self.source(m);
        for (a, arr) in self.arrows.iter().enumerate() {
            if arr.target != t {
                continue;
            }
            for &d in &self.hom[s][arr.source] {
                if self.comp(self.arrow_mor[a], d) == Some(m) {
                    prefix.push(a);
                    self.collect_paths(d, prefix, out);
                    prefix.pop();
                }
            }
        }
    }

    /// All nonzero paths of positive length, in shortlex order.
    pub fn nonzero_paths(&self) -> Vec<(Vec<usize>, MorId)> {
        let mut out = Vec::new();
        for m in 0..self.classes.len() {
            if !self.is_identity(m) {
                out.extend(self.paths_of(m).into_iter().map(|p| (p, m)));
            }
        }
        out.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        out
    }

    pub fn display(&self, m: RayMorphism) -> String {
        match m.class {
            None => "0".into(),
            Some(c) => self.display_id(c),
        }
    }

    pub fn display_id(&self, m: MorId) -> String {
        if self.is_identity(m) {
            format!("id_{}", self.points[self.source(m)])
        } else {
            self.rep_path(m).to_string()
        }
    }

    pub fn dump(&self) -> CategoryDump {
        let mut homs = Vec::new();
        for x in 0..self.num_points() {
            for y in 0..self.num_points() {
                if !self.hom[x][y].is_empty() {
                    homs.push(HomDump {
                        source: self.points[x].clone(),
                        target: self.points[y].clone(),
                        classes: self.hom[x][y].iter().map(|&m| self.display_id(m)).collect(),
                    });
                }
            }
        }
        let mut composition = Vec::new();
        for g in 0..self.classes.len() {
            for f in 0..self.classes.len() {
                if self.source(g) == self.target(f) {
                    composition.push([
                        self.display_id(g),
                        self.display_id(f),
                        self.display(RayMorphism {
                            source: self.source(f),
                            target: self.target(g),
                            class: self.comp(g, f),
                        }),
                    ]);
                }
            }
        }
        CategoryDump {
            name: self.name().into(),
            points: self.points.clone(),
            homs,
            composition,
        }
    }
}

/// JSON form of a built category.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryDump {
    pub name: String,
    pub points: Vec<String>,
    pub homs: Vec<HomDump>,
    /// Triples `[g, f, g∘f]` over all composable pairs.
    pub composition: Vec<[String; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomDump {
    pub source: String,
    pub target: String,
    pub classes: Vec<String>,
}

impl fmt::Display for CategoryDump {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "category {} ({} points)", self.name, self.points.len())?;
        for h in &self.homs {
            writeln!(f, "  {} -> {}: {}", h.source, h.target, h.classes.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    pub(crate) const DUMBBELL: &str = "category db\npoints x y\narrow l : x -> x\narrow m : x -> y\narrow r : y -> y\nrel m l = r m\nrel l l l = 0\nrel r r r = 0\n";

    fn build(text: &str) -> RayCategory {
        RayCategory::build(&parse_presentation(text).unwrap(), 16).unwrap()
    }

    fn ray(p: &RayCategory, s: &str) -> RayMorphism {
        p.ray_of(&PathExpr::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn dumbbell_hom_xy() {
        let p = build(DUMBBELL);
        let (x, y) = (0, 1);
        let names: Vec<String> = p.hom(x, y).iter().map(|&m| p.display_id(m)).collect();
        assert_eq!(names, ["m", "m l", "m l l"]);
        assert_eq!(ray(&p, "m l"), ray(&p, "r m"));
        assert!(ray(&p, "r r r m").is_zero());
        assert!(ray(&p, "r r m").class.is_some());
        assert!(p.hom(y, x).is_empty());
    }

    #[test]
    fn compose_matches_paths() {
        let p = build(DUMBBELL);
        let r = ray(&p, "r");
        let m = ray(&p, "m");
        let rm = p.compose(r, m).unwrap();
        assert_eq!(p.compose(r, rm).unwrap(), ray(&p, "r r m"));
        let id_y = p.mor(p.identity(1));
        assert_eq!(p.compose(id_y, m).unwrap(), m);
        assert!(p.compose(r, p.zero(0, 1)).unwrap().is_zero());
        assert!(matches!(p.compose(m, r), Err(Error::EndpointMismatch(_))));
    }

    #[test]
    fn trivial_point() {
        let p = build("points x\n");
        assert_eq!(p.hom(0, 0).len(), 1);
        assert!(p.is_identity(p.hom(0, 0)[0]));
    }

    #[test]
    fn penny_farthing_two() {
        let text = "points x0 x1\narrow p : x0 -> x0\narrow a1 : x0 -> x1\narrow a2 : x1 -> x0\nrel a1 a2 = 0\nrel a2 a1 = p p\nrel a1 p a2 = 0\n";
        let p = build(text);
        assert!(ray(&p, "p p p p").is_zero());
        assert!(!ray(&p, "p p p").is_zero());
    }

    #[test]
    fn infinite_is_reported() {
        let err = RayCategory::build(&parse_presentation("points x\narrow a : x -> x\n").unwrap(), 8)
            .unwrap_err();
        assert_eq!(err, Error::NotFinite { cap: 8 });
    }

    #[test]
    fn idempotent_loop_is_not_finite() {
        let p = parse_presentation("points x\narrow a : x -> x\nrel a a a = a a\n").unwrap();
        assert_eq!(RayCategory::build(&p, 8).unwrap_err(), Error::NotFinite { cap: 8 });
    }

    #[test]
    fn paths_of_class() {
        let p = build(DUMBBELL);
        let c = ray(&p, "m l").class.unwrap();
        let paths: Vec<String> = p.paths_of(c).iter().map(|q| p.path_expr(q).to_string()).collect();
        assert_eq!(paths, ["m l", "r m"]);
    }

    #[test]
    fn ids_follow_representatives() {
        let p = build(DUMBBELL);
        for m in 1..p.num_morphisms() {
            let (a, b) = (p.rep(m - 1), p.rep(m));
            assert!((a.len(), a) <= (b.len(), b));
        }
    }
}
