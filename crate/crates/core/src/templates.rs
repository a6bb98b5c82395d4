//! Generators for the dumb-bell, penny-farthing and diamond presentations.
//!
//! Arrow names: dumb-bell `l m r` (loop at x, x -> y, loop at y);
//! penny-farthing `p` (loop at x0) and `a1 .. an` with `ai : x(i-1) -> x(i mod n)`;
//! diamond `g l k a d b` for the arrows x->z, z->x, y->z, z->y, x->t, t->y.

use crate::error::{Error, Result};
use crate::presentation::{ArrowDecl, PathExpr, Presentation, Quiver, Relation};

fn arrow(name: &str, s: &str, t: &str) -> ArrowDecl {
    ArrowDecl {
        name: name.into(),
        source: s.into(),
        target: t.into(),
    }
}

fn path(names: &[String]) -> PathExpr {
    PathExpr(names.to_vec())
}

fn power(a: &str, k: usize) -> PathExpr {
    PathExpr(vec![a.to_string(); k])
}

/// `λ^r = 0 = ρ^s` with `μλ = ρμ`.
pub fn dumbbell(r: usize, s: usize) -> Result<Presentation> {
    if r < 2 || s < 2 {
        return Err(Error::InvalidShape(format!("nilpotency indices must be at least 2, got ({r}, {s})")));
    }
    let quiver = Quiver {
        points: vec!["x".into(), "y".into()],
        arrows: vec![arrow("l", "x", "x"), arrow("m", "x", "y"), arrow("r", "y", "y")],
    };
    let relations = vec![
        Relation::commutativity(PathExpr::new(["m", "l"]), PathExpr::new(["r", "m"])),
        Relation::zero(power("l", r)),
        Relation::zero(power("r", s)),
    ];
    Presentation::new(format!("dumbbell_{r}_{s}"), quiver, relations)
}

/// Every non-decreasing map `{1..n-1} -> {1..n}`, as value lists.
pub fn nondecreasing_maps(n: usize) -> Vec<Vec<usize>> {
    fn go(len: usize, lo: usize, hi: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in lo..=hi {
            cur.push(v);
            go(len, v, hi, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n >= 1 {
        go(n - 1, 1, n, &mut Vec::new(), &mut out);
    }
    out
}

/// The penny-farthing with cycle length `n` and map `e` (`e[i-1] = e(i)`).
pub fn penny_farthing(n: usize, e: &[usize]) -> Result<Presentation> {
    if n == 0 {
        return Err(Error::InvalidShape("cycle length must be positive".into()));
    }
    if e.len() != n - 1 {
        return Err(Error::InvalidShape(format!("e needs {} values, got {}", n - 1, e.len())));
    }
    if e.iter().any(|&v| v == 0 || v > n) || e.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidShape(format!("e = {e:?} is not a non-decreasing map into 1..{n}")));
    }
    let pt = |i: usize| format!("x{}", i % n);
    let a = |i: usize| format!("a{i}");
    let mut arrows = vec![arrow("p", "x0", "x0")];
    for i in 1..=n {
        arrows.push(arrow(&a(i), &pt(i - 1), &pt(i)));
    }
    let quiver = Quiver {
        points: (0..n).map(pt).collect(),
        arrows,
    };
    // a_j ... a_i in written order
    let seg = |hi: usize, lo: usize| -> Vec<String> { (lo..=hi).rev().map(a).collect() };
    let mut relations = vec![
        Relation::zero(path(&[a(1), a(n)])),
        Relation::commutativity(path(&seg(n, 1)), power("p", 2)),
    ];
    for i in 1..n {
        let mut p = seg(e[i - 1], 1);
        p.push("p".into());
        p.extend(seg(n, i + 1));
        relations.push(Relation::zero(path(&p)));
    }
    let tag: String = e.iter().map(|v| v.to_string()).collect();
    let name = if tag.is_empty() { format!("pennyfarthing_{n}") } else { format!("pennyfarthing_{n}_{tag}") };
    Presentation::new(name, quiver, relations)
}

/// `βδ = αγ`, `λκ = 0`, `κα = γλ`.
pub fn diamond() -> Presentation {
    diamond_with(true)
}

/// The diamond, optionally without `λκ = 0`.
pub fn diamond_with(lk_zero: bool) -> Presentation {
    let quiver = Quiver {
        points: ["x", "y", "z", "t"].map(String::from).to_vec(),
        arrows: vec![
            arrow("g", "x", "z"),
            arrow("l", "z", "x"),
            arrow("k", "y", "z"),
            arrow("a", "z", "y"),
            arrow("d", "x", "t"),
            arrow("b", "t", "y"),
        ],
    };
    let mut relations = vec![Relation::commutativity(PathExpr::new(["b", "d"]), PathExpr::new(["a", "g"]))];
    if lk_zero {
        relations.push(Relation::zero(PathExpr::new(["l", "k"])));
    }
    relations.push(Relation::commutativity(PathExpr::new(["k", "a"]), PathExpr::new(["g", "l"])));
    let name = if lk_zero { "diamond" } else { "diamond_open" };
    Presentation::new(name, quiver, relations).expect("diamond presentation is valid")
}

/// Disjoint union of `a` and `b`, with the listed points and arrows of `b`
/// identified with those of `a`; every other name of `b` gets a `'` suffix.
pub fn glue(
    name: &str,
    a: &Presentation,
    b: &Presentation,
    points: &[(&str, &str)],
    arrows: &[(&str, &str)],
    extra: Vec<Relation>,
) -> Result<Presentation> {
    let lookup = |pairs: &[(&str, &str)], n: &str| -> String {
        pairs
            .iter()
            .find(|(_, theirs)| *theirs == n)
            .map(|(ours, _)| ours.to_string())
            .unwrap_or_else(|| format!("{n}'"))
    };
    let pt = |n: &str| lookup(points, n);
    let ar = |n: &str| lookup(arrows, n);
    let mut quiver = a.quiver.clone();
    for x in &b.quiver.points {
        let x = pt(x);
        if !quiver.points.contains(&x) {
            quiver.points.push(x);
        }
    }
    for decl in &b.quiver.arrows {
        let glued = ArrowDecl {
            name: ar(&decl.name),
            source: pt(&decl.source),
            target: pt(&decl.target),
        };
        match quiver.arrows.iter().find(|d| d.name == glued.name) {
            Some(d) if *d != glued => {
                return Err(Error::InvalidShape(format!("`{}` is glued to an arrow with other endpoints", decl.name)));
            }
            Some(_) => {}
            None => quiver.arrows.push(glued),
        }
    }
    let rename = |p: &PathExpr| PathExpr(p.0.iter().map(|n| ar(n)).collect());
    let mut relations = a.relations.clone();
    for r in &b.relations {
        let r = match r {
            Relation::Zero { path } => Relation::zero(rename(path)),
            Relation::Commutativity { left, right } => Relation::commutativity(rename(left), rename(right)),
        };
        if !relations.contains(&r) {
            relations.push(r);
        }
    }
    relations.extend(extra);
    Presentation::new(name, quiver, relations)
}

/// The dumb-bell parameters of the family: `min = 3`, `max <= 5`.
pub fn dumbbell_family() -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for r in 3..=5 {
        for s in 3..=5 {
            if r.min(s) == 3 {
                out.push((r, s));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raycore::{verify_axioms, RayCategory, DEFAULT_CAP};

    #[test]
    fn maps_are_counted() {
        assert_eq!(nondecreasing_maps(1), vec![Vec::<usize>::new()]);
        assert_eq!(nondecreasing_maps(2), vec![vec![1], vec![2]]);
        // C(2(n-1)+1, n-1) for n = 3, 4
        assert_eq!(nondecreasing_maps(3).len(), 6);
        assert_eq!(nondecreasing_maps(4).len(), 20);
    }

    #[test]
    fn family_has_five_members() {
        assert_eq!(dumbbell_family(), [(3, 3), (3, 4), (3, 5), (4, 3), (5, 3)]);
    }

    #[test]
    fn pf_one_is_rejected() {
        let err = penny_farthing(1, &[]).unwrap_err();
        assert!(matches!(err, Error::InvalidRelation { .. }), "{err}");
    }

    #[test]
    fn templates_build_and_pass_axioms() {
        let mut all = vec![diamond()];
        for (r, s) in dumbbell_family() {
            all.push(dumbbell(r, s).unwrap());
        }
        for n in 2..=4 {
            for e in nondecreasing_maps(n) {
                all.push(penny_farthing(n, &e).unwrap());
            }
        }
        for p in all {
            let cat = RayCategory::build(&p, DEFAULT_CAP).unwrap_or_else(|e| panic!("{}: {e}", p.name));
            let report = verify_axioms(&cat);
            assert!(report.all_pass(), "{}: {report:?}", p.name);
        }
    }

    #[test]
    fn open_diamond_is_not_finite() {
        let err = RayCategory::build(&diamond_with(false), DEFAULT_CAP).unwrap_err();
        assert_eq!(err, Error::NotFinite { cap: DEFAULT_CAP });
    }
}
