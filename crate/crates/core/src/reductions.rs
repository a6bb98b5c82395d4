//! Quotients, point splitting, full subcategories, opposites and decisive subcategories.
//!
//! Every operation produces a new presentation and re-runs the closure.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::contours::{contour_of, Contour};
use crate::error::{Error, Result};
use crate::morphology::{self, supports};
use crate::presentation::{ArrowDecl, PathExpr, Presentation, Quiver, Relation};
use crate::raycore::{MorId, RayCategory, RayMorphism};

fn fresh(base: String, taken: &HashSet<String>) -> String {
    let mut name = base;
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

/// Kills the two-sided ideal generated by `m`.
pub fn quotient_by_ideal(p: &RayCategory, m: RayMorphism) -> Result<RayCategory> {
    let id = m.class.ok_or(Error::ZeroMorphism)?;
    if p.is_identity(id) {
        return Err(Error::Precondition("cannot kill an identity".into()));
    }
    let pres = p.presentation();
    let rep = p.rep_path(id);
    let name = format!("{}_q", pres.name);
    let out = if rep.len() == 1 {
        let dead = &rep.0[0];
        let hits = |q: &PathExpr| q.0.contains(dead);
        let mut relations = Vec::new();
        for rel in &pres.relations {
            match rel {
                Relation::Zero { path } if !hits(path) => relations.push(rel.clone()),
                Relation::Zero { .. } => {}
                Relation::Commutativity { left, right } => match (hits(left), hits(right)) {
                    (false, false) => relations.push(rel.clone()),
                    (true, false) => relations.push(Relation::zero(right.clone())),
                    (false, true) => relations.push(Relation::zero(left.clone())),
                    (true, true) => {}
                },
            }
        }
        let mut quiver = pres.quiver.clone();
        quiver.arrows.retain(|a| &a.name != dead);
        Presentation::new(name, quiver, relations)?
    } else {
        let mut relations = pres.relations.clone();
        relations.push(Relation::zero(rep));
        Presentation::new(name, pres.quiver.clone(), relations)?
    };
    RayCategory::build(&out, p.cap())
}

/// Replaces `x` by an emitter `x_out` and a receiver `x_in`.
pub fn split_point(p: &RayCategory, x: usize) -> Result<RayCategory> {
    let arrows = p.arrows();
    for (a, into) in arrows.iter().enumerate().filter(|(_, a)| a.target == x) {
        for (b, out) in arrows.iter().enumerate().filter(|(_, b)| b.source == x) {
            if p.comp(p.arrow_mor(b), p.arrow_mor(a)).is_some() {
                return Err(Error::Precondition(format!(
                    "nonzero composition `{} {}` through {}",
                    out.name,
                    into.name,
                    p.points()[x]
                )));
            }
        }
    }
    let pres = p.presentation();
    let taken: HashSet<String> = pres.quiver.points.iter().cloned().collect();
    let xname = &p.points()[x];
    let emitter = fresh(format!("{xname}_out"), &taken);
    let receiver = fresh(format!("{xname}_in"), &taken);
    let mut points = Vec::new();
    for (i, name) in pres.quiver.points.iter().enumerate() {
        if i == x {
            points.push(emitter.clone());
            points.push(receiver.clone());
        } else {
            points.push(name.clone());
        }
    }
    let quiver = Quiver {
        points,
        arrows: pres
            .quiver
            .arrows
            .iter()
            .map(|a| ArrowDecl {
                name: a.name.clone(),
                source: if &a.source == xname { emitter.clone() } else { a.source.clone() },
                target: if &a.target == xname { receiver.clone() } else { a.target.clone() },
            })
            .collect(),
    };
    let ok = |q: &PathExpr| q.endpoints(&quiver).is_ok();
    let mut relations = Vec::new();
    for rel in &pres.relations {
        match rel {
            Relation::Zero { path } if ok(path) => relations.push(rel.clone()),
            Relation::Zero { .. } => {}
            Relation::Commutativity { left, right } => match (ok(left), ok(right)) {
                (true, true) => relations.push(rel.clone()),
                (true, false) => relations.push(Relation::zero(left.clone())),
                (false, true) => relations.push(Relation::zero(right.clone())),
                (false, false) => {}
            },
        }
    }
    let out = Presentation::new(format!("{}_split", pres.name), quiver, relations)?;
    RayCategory::build(&out, p.cap())
}

/// A full subcategory and, for each of its arrows, the ambient morphism it names.
#[derive(Debug, Clone)]
pub struct Subcategory {
    pub category: RayCategory,
    /// Ambient index of each point of `category`.
    pub points: Vec<usize>,
    /// Ambient morphism of each arrow of `category`.
    pub arrows: Vec<MorId>,
}

/// Full subcategory on `points`, with its quiver recomputed.
pub fn full_subcategory(p: &RayCategory, points: &[usize]) -> Result<RayCategory> {
    Ok(full_subcategory_map(p, points)?.category)
}

pub fn full_subcategory_map(p: &RayCategory, points: &[usize]) -> Result<Subcategory> {
    let set: BTreeSet<usize> = points.iter().copied().collect();
    if set.is_empty() {
        return Err(Error::Precondition("empty point set".into()));
    }
    if let Some(&bad) = set.iter().find(|&&x| x >= p.num_points()) {
        return Err(Error::Precondition(format!("no point with index {bad}")));
    }
    let pts: Vec<usize> = set.iter().copied().collect();
    let inside = |m: MorId| set.contains(&p.source(m)) && set.contains(&p.target(m));
    let radical: Vec<MorId> = (0..p.num_morphisms()).filter(|&m| inside(m) && !p.is_identity(m)).collect();
    let composite: HashSet<MorId> = radical
        .iter()
        .flat_map(|&g| radical.iter().filter_map(move |&f| (p.source(g) == p.target(f)).then_some((g, f))))
        .filter_map(|(g, f)| p.comp(g, f))
        .collect();
    let irreducible: Vec<MorId> = radical.iter().copied().filter(|m| !composite.contains(m)).collect();

    let mut taken = HashSet::new();
    let mut names = HashMap::new();
    for &m in &irreducible {
        let base = p.rep(m).iter().map(|&a| p.arrows()[a].name.as_str()).collect::<Vec<_>>().join("_");
        let name = fresh(base, &taken);
        taken.insert(name.clone());
        names.insert(m, name);
    }

    // word[m] = g :: word[m'] with g irreducible, found breadth-first.
    let mut word: HashMap<MorId, Vec<MorId>> = HashMap::new();
    let mut queue = VecDeque::new();
    for &g in &irreducible {
        word.insert(g, vec![g]);
        queue.push_back(g);
    }
    while let Some(m) = queue.pop_front() {
        for &g in &irreducible {
            if p.source(g) != p.target(m) {
                continue;
            }
            if let Some(gm) = p.comp(g, m) {
                if !word.contains_key(&gm) {
                    let mut w = vec![g];
                    w.extend(&word[&m]);
                    word.insert(gm, w);
                    queue.push_back(gm);
                }
            }
        }
    }
    let spell = |w: &[MorId]| PathExpr(w.iter().map(|m| names[m].clone()).collect());
    let mut relations = Vec::new();
    for &m in &radical {
        for &g in &irreducible {
            if p.source(g) != p.target(m) {
                continue;
            }
            let mut lhs = vec![g];
            lhs.extend(&word[&m]);
            match p.comp(g, m) {
                None => relations.push(Relation::zero(spell(&lhs))),
                Some(gm) if word[&gm] != lhs => relations.push(Relation::commutativity(spell(&lhs), spell(&word[&gm]))),
                Some(_) => {}
            }
        }
    }
    let quiver = Quiver {
        points: pts.iter().map(|&x| p.points()[x].clone()).collect(),
        arrows: irreducible
            .iter()
            .map(|&m| ArrowDecl {
                name: names[&m].clone(),
                source: p.points()[p.source(m)].clone(),
                target: p.points()[p.target(m)].clone(),
            })
            .collect(),
    };
    let pres = Presentation::new(format!("{}_sub", p.name()), quiver, relations)?;
    Ok(Subcategory {
        category: RayCategory::build(&pres, p.cap())?,
        points: pts,
        arrows: irreducible,
    })
}

fn reversed(q: &PathExpr) -> PathExpr {
    PathExpr(q.0.iter().rev().cloned().collect())
}

/// The opposite presentation; applying it twice gives the original back.
pub fn opposite_presentation(pres: &Presentation) -> Presentation {
    let name = match pres.name.strip_suffix("_op") {
        Some(base) => base.to_string(),
        None => format!("{}_op", pres.name),
    };
    let quiver = Quiver {
        points: pres.quiver.points.clone(),
        arrows: pres
            .quiver
            .arrows
            .iter()
            .map(|a| ArrowDecl {
                name: a.name.clone(),
                source: a.target.clone(),
                target: a.source.clone(),
            })
            .collect(),
    };
    let relations = pres
        .relations
        .iter()
        .map(|r| match r {
            Relation::Zero { path } => Relation::zero(reversed(path)),
            Relation::Commutativity { left, right } => Relation::commutativity(reversed(left), reversed(right)),
        })
        .collect();
    Presentation::new(name, quiver, relations).expect("reversal preserves validity")
}

pub fn opposite(p: &RayCategory) -> Result<RayCategory> {
    RayCategory::build(&opposite_presentation(p.presentation()), p.cap())
}

/// The contour `c` of `p`, read in `op = opposite(p)`.
pub fn opposite_contour(op: &RayCategory, c: &Contour) -> Result<Contour> {
    contour_of(op, &reversed(&c.v), &reversed(&c.w))
}

/// Number of connected components of the underlying graph.
pub fn component_count(p: &RayCategory) -> usize {
    let n = p.num_points();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for a in p.arrows() {
        let (r, s) = (find(&mut parent, a.source), find(&mut parent, a.target));
        parent[r] = s;
    }
    (0..n).filter(|&x| find(&mut parent, x) == x).count()
}

/// The category a contour's decisive machinery runs in, dualized when
/// `π(x, y)` is not transit.
#[derive(Debug, Clone)]
pub struct Frame {
    pub category: RayCategory,
    pub contour: Contour,
    pub dual: bool,
}

pub fn frame(p: &RayCategory, c: &Contour) -> Result<Frame> {
    let transit = match morphology::pi_hom_id(p, c.x, c.y)? {
        Some(pi) => morphology::is_transit(p, pi),
        None => return Err(Error::Precondition("hom(x, y) is zero".into())),
    };
    if transit {
        return Ok(Frame {
            category: p.clone(),
            contour: c.clone(),
            dual: false,
        });
    }
    let op = opposite(p)?;
    let contour = opposite_contour(&op, c)?;
    Ok(Frame {
        category: op,
        contour,
        dual: true,
    })
}

/// `P / π(y) v` inside the frame; the frame category itself when that product is zero.
pub fn decisive_quotient(f: &Frame) -> Result<RayCategory> {
    let p = &f.category;
    let ray = f.contour.ray.class.ok_or(Error::ZeroMorphism)?;
    match morphology::pi_loop_id(p, f.contour.y)?.and_then(|pi| p.comp(pi, ray)) {
        Some(m) => quotient_by_ideal(p, p.mor(m)),
        None => Ok(p.clone()),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecisiveFamily {
    /// Whether the sets live in the opposite category.
    pub dual: bool,
    pub k: usize,
    /// Point sets, as indices shared by `P` and its opposite.
    pub sets: Vec<Vec<usize>>,
    /// The union of supports the sets are drawn from.
    pub support: Vec<usize>,
}

/// All point sets of size at most `k` that contain `x` and `y` and lie in the
/// support union computed in the decisive quotient.
pub fn decisive_subcats(
    p: &RayCategory,
    c: &Contour,
    k: usize,
    pair_with: Option<&Contour>,
) -> Result<(DecisiveFamily, RayCategory)> {
    if !c.non_deep {
        return Err(Error::Precondition("the contour is deep".into()));
    }
    let f = frame(p, c)?;
    let base = decisive_quotient(&f)?;
    let (x, y) = (f.contour.x, f.contour.y);
    let mut support: BTreeSet<usize> = supports(&base, x).0.into_iter().collect();
    match pair_with {
        None => support.extend(supports(&base, y).1),
        Some(other) => {
            let other_x = if f.dual { other.y } else { other.x };
            support.extend(supports(&base, other_x).0);
        }
    }
    let required: BTreeSet<usize> = [x, y].into_iter().collect();
    let mut sets = Vec::new();
    if required.is_subset(&support) && required.len() <= k {
        let optional: Vec<usize> = support.difference(&required).copied().collect();
        for extra in 0..=(k - required.len()).min(optional.len()) {
            for combo in combinations(&optional, extra) {
                let mut s: Vec<usize> = required.iter().copied().chain(combo).collect();
                s.sort_unstable();
                sets.push(s);
            }
        }
    }
    sets.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    Ok((
        DecisiveFamily {
            dual: f.dual,
            k,
            sets,
            support: support.into_iter().collect(),
        },
        base,
    ))
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, items[i]);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contours::find_contours;
    use crate::presentation::parse_presentation;
    use crate::templates;

    fn ray(p: &RayCategory, s: &str) -> RayMorphism {
        p.ray_of(&PathExpr::parse(s).unwrap()).unwrap()
    }

    fn build(pres: Presentation) -> RayCategory {
        RayCategory::build(&pres, 32).unwrap()
    }

    fn hom_names(p: &RayCategory, x: &str, y: &str) -> Vec<String> {
        let (x, y) = (p.point_index(x).unwrap(), p.point_index(y).unwrap());
        p.hom(x, y).iter().map(|&m| p.display_id(m)).collect()
    }

    #[test]
    fn dumbbell_quotient() {
        let p = build(templates::dumbbell(3, 3).unwrap());
        let q = quotient_by_ideal(&p, ray(&p, "r r m")).unwrap();
        assert_eq!(hom_names(&q, "x", "y"), ["m", "m l"]);
        assert_eq!(hom_names(&q, "x", "x"), hom_names(&p, "x", "x"));
        assert_eq!(quotient_by_ideal(&p, p.zero(0, 1)).unwrap_err(), Error::ZeroMorphism);
    }

    #[test]
    fn diamond_quotient_by_generator() {
        let p = build(templates::diamond());
        let q = quotient_by_ideal(&p, ray(&p, "a g")).unwrap();
        assert!(hom_names(&q, "x", "y").is_empty());
    }

    #[test]
    fn killing_an_arrow_drops_it() {
        let p = build(templates::dumbbell(3, 3).unwrap());
        let q = quotient_by_ideal(&p, ray(&p, "m")).unwrap();
        assert_eq!(q.arrows().len(), 2);
        assert!(hom_names(&q, "x", "y").is_empty());
    }

    #[test]
    fn splitting() {
        let p = build(parse_presentation("points u x w\narrow a : u -> x\narrow b : x -> w\nrel b a = 0\n").unwrap());
        let s = split_point(&p, 1).unwrap();
        assert_eq!(s.num_points(), 4);
        assert_eq!(s.arrows().len(), 2);
        assert!(s.presentation().relations.is_empty());
        assert_eq!(component_count(&s), 2);

        let pf = build(templates::penny_farthing(2, &[1]).unwrap());
        let err = split_point(&pf, 1).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn diamond_on_two_points() {
        let p = build(templates::diamond());
        let sub = full_subcategory(&p, &[0, 1]).unwrap();
        let (x, y) = (sub.point_index("x").unwrap(), sub.point_index("y").unwrap());
        let across: Vec<&str> = sub
            .arrows()
            .iter()
            .filter(|a| a.source == x && a.target == y)
            .map(|a| a.name.as_str())
            .collect();
        assert_eq!(across, ["a_g"]);
        // the radical generators at x and y stay as loops
        let mut all: Vec<&str> = sub.arrows().iter().map(|a| a.name.as_str()).collect();
        all.sort_unstable();
        assert_eq!(all, ["a_g", "a_k", "l_g"]);
        assert!(p.arrow_index("a_g").is_err());
    }

    #[test]
    fn full_subcategory_on_everything() {
        for pres in [templates::diamond(), templates::dumbbell(3, 4).unwrap(), templates::penny_farthing(3, &[1, 3]).unwrap()] {
            let p = build(pres);
            let all: Vec<usize> = (0..p.num_points()).collect();
            let sub = full_subcategory(&p, &all).unwrap();
            assert_eq!(sub.num_morphisms(), p.num_morphisms());
            assert_eq!(sub.arrows().len(), p.arrows().len());
        }
    }

    #[test]
    fn opposite_is_an_involution() {
        let pres = templates::diamond();
        let back = opposite_presentation(&opposite_presentation(&pres));
        assert_eq!(back, pres);
    }

    #[test]
    fn decisive_families() {
        let p = build(templates::dumbbell(3, 3).unwrap());
        let c = find_contours(&p).unwrap().remove(0);
        let (fam, _) = decisive_subcats(&p, &c, 4, None).unwrap();
        assert_eq!(fam.sets, vec![vec![0, 1]]);
        let (fam, _) = decisive_subcats(&p, &c, 1, None).unwrap();
        assert!(fam.sets.is_empty());

        let d = build(templates::diamond());
        let c = find_contours(&d).unwrap().into_iter().find(|c| c.non_deep).unwrap();
        let (fam, _) = decisive_subcats(&d, &c, 4, None).unwrap();
        assert!(fam.sets.contains(&vec![0, 1, 2, 3]));
    }
}
