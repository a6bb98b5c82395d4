use proptest::prelude::*;

use raycat_core::classify::classify_contour;
use raycat_core::cleaving::{check_cleaving, DiagramFunctor};
use raycat_core::contours::{find_contours, interlaced};
use raycat_core::reductions::{opposite, opposite_presentation};
use raycat_core::{parse_presentation, print_presentation, ArrowDecl, PathExpr, Presentation, Quiver, RayCategory, Relation};

/// Points `p0..`, forward arrows `pi -> pj` with `i < j`, nilpotent loops, and
/// zero relations on some composable pairs.
fn presentation() -> impl Strategy<Value = Presentation> {
    (2usize..=4)
        .prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            let m = pairs.len();
            (
                Just(n),
                proptest::sample::subsequence(pairs, 1..=m.min(4)),
                proptest::collection::vec(prop_oneof![Just(0usize), 2usize..=3], n),
                proptest::collection::vec(any::<bool>(), 16),
            )
        })
        .prop_map(|(n, fwd, loops, kill)| {
            let pt = |i: usize| format!("p{i}");
            let mut arrows = Vec::new();
            let mut relations = Vec::new();
            for (i, &k) in loops.iter().enumerate() {
                if k > 0 {
                    let name = format!("l{i}");
                    arrows.push(ArrowDecl { name: name.clone(), source: pt(i), target: pt(i) });
                    relations.push(Relation::zero(PathExpr(vec![name; k])));
                }
            }
            for (k, &(i, j)) in fwd.iter().enumerate() {
                arrows.push(ArrowDecl { name: format!("f{k}"), source: pt(i), target: pt(j) });
            }
            let mut bit = kill.into_iter().cycle();
            for g in &arrows {
                for f in &arrows {
                    if f.target == g.source && !(f.name == g.name && f.source == f.target) && bit.next().unwrap() {
                        relations.push(Relation::zero(PathExpr::new([g.name.clone(), f.name.clone()])));
                    }
                }
            }
            let quiver = Quiver { points: (0..n).map(pt).collect(), arrows };
            Presentation::new("random", quiver, relations).unwrap()
        })
}

fn build(p: &Presentation) -> RayCategory {
    RayCategory::build(p, 64).expect("nilpotent loops and forward arrows stay finite")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printing_round_trips(pres in presentation()) {
        let text = print_presentation(&pres);
        prop_assert_eq!(parse_presentation(&text).unwrap(), pres);
    }

    #[test]
    fn composition_is_associative(pres in presentation()) {
        let p = build(&pres);
        let n = p.num_morphisms();
        for f in 0..n {
            for g in (0..n).filter(|&g| p.source(g) == p.target(f)) {
                for h in (0..n).filter(|&h| p.source(h) == p.target(g)) {
                    let left = p.comp_opt(Some(h), p.comp(g, f));
                    let right = p.comp_opt(p.comp(h, g), Some(f));
                    prop_assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn opposite_is_an_involution(pres in presentation()) {
        prop_assert_eq!(opposite_presentation(&opposite_presentation(&pres)), pres.clone());
        let p = build(&pres);
        let op = opposite(&p).unwrap();
        prop_assert_eq!(op.num_morphisms(), p.num_morphisms());
        for x in 0..p.num_points() {
            for y in 0..p.num_points() {
                prop_assert_eq!(op.hom(y, x).len(), p.hom(x, y).len());
            }
        }
    }

    #[test]
    fn interlacing_is_symmetric(pres in presentation()) {
        let p = build(&pres);
        let paths = p.nonzero_paths();
        for (u, m) in &paths {
            for (v, m2) in &paths {
                if m == m2 && u != v {
                    let (u, v) = (p.path_expr(u), p.path_expr(v));
                    prop_assert_eq!(interlaced(&p, &u, &v).unwrap(), interlaced(&p, &v, &u).unwrap());
                }
            }
        }
    }

    #[test]
    fn cleaving_ignores_shape_names(pres in presentation(), picks in proptest::collection::vec(any::<prop::sample::Index>(), 3)) {
        let p = build(&pres);
        let radical: Vec<_> = (0..p.num_morphisms()).filter(|&m| !p.is_identity(m)).collect();
        prop_assume!(!radical.is_empty());
        // a star of up to three morphisms sharing a source
        let first = radical[picks[0].index(radical.len())];
        let same: Vec<_> = radical.iter().copied().filter(|&m| p.source(m) == p.source(first)).collect();
        let chosen: Vec<_> = picks.iter().map(|i| same[i.index(same.len())]).collect();
        let star = |tag: &str, reversed: bool| {
            let mut arrows: Vec<ArrowDecl> = (0..chosen.len())
                .map(|i| ArrowDecl { name: format!("{tag}e{i}"), source: format!("{tag}c"), target: format!("{tag}t{i}") })
                .collect();
            let mut images = chosen.clone();
            let mut points: Vec<String> = std::iter::once(format!("{tag}c")).chain((0..chosen.len()).map(|i| format!("{tag}t{i}"))).collect();
            let mut objects: Vec<usize> = std::iter::once(p.source(first)).chain(chosen.iter().map(|&m| p.target(m))).collect();
            if reversed {
                arrows.reverse();
                images.reverse();
                points[1..].reverse();
                objects[1..].reverse();
            }
            DiagramFunctor { shape: Presentation::new("star", Quiver { points, arrows }, vec![]).unwrap(), objects, arrows: images }
        };
        let a = check_cleaving(&p, &star("", false)).unwrap();
        let b = check_cleaving(&p, &star("s_", true)).unwrap();
        prop_assert_eq!(a.ok, b.ok);
        prop_assert_eq!(a.violation.map(|v| v.condition), b.violation.map(|v| v.condition));
    }

    #[test]
    fn classification_is_dual(pres in presentation()) {
        let p = build(&pres);
        let op = opposite(&p).unwrap();
        for c in find_contours(&p).unwrap().into_iter().filter(|c| c.non_deep) {
            let here = classify_contour(&p, &c, 10_000).unwrap();
            let oc = raycat_core::reductions::opposite_contour(&op, &c).unwrap();
            let there = classify_contour(&op, &oc, 10_000).unwrap();
            prop_assert_eq!(here.verdict.family_name(), there.verdict.family_name());
        }
    }
}
