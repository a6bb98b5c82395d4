use raycat_core::classify::{check_mild, classify_contour, contour_disjointness, neighborhood_constraints, Mildness, Verdict};
use raycat_core::cleaving::{classify_graph, contains_type, separated_quiver, ComponentClass, DynkinType, DEFAULT_BUDGET};
use raycat_core::contours::{find_contours, Contour};
use raycat_core::reductions::{opposite, opposite_contour};
use raycat_core::templates::{self, glue};
use raycat_core::{ArrowDecl, PathExpr, Presentation, Quiver, RayCategory, Relation};

fn build(p: &Presentation) -> RayCategory {
    RayCategory::build(p, 32).unwrap_or_else(|e| panic!("{}: {e}", p.name))
}

fn non_deep(p: &RayCategory) -> Vec<Contour> {
    find_contours(p).unwrap().into_iter().filter(|c| c.non_deep).collect()
}

fn family() -> Vec<(Presentation, Verdict)> {
    let mut out = vec![(templates::diamond(), Verdict::Diamond)];
    for (r, s) in templates::dumbbell_family() {
        out.push((templates::dumbbell(r, s).unwrap(), Verdict::DumbBell { r, s }));
    }
    for n in 2..=4 {
        for e in templates::nondecreasing_maps(n) {
            out.push((templates::penny_farthing(n, &e).unwrap(), Verdict::PennyFarthing { n, e }));
        }
    }
    out
}

#[test]
fn every_template_gets_its_own_verdict() {
    for (pres, expected) in family() {
        let p = build(&pres);
        let cs = non_deep(&p);
        assert_eq!(cs.len(), 1, "{}", pres.name);
        let got = classify_contour(&p, &cs[0], DEFAULT_BUDGET).unwrap();
        assert_eq!(got.verdict, expected, "{}", pres.name);
    }
}

#[test]
fn opposite_swaps_dumbbell_parameters() {
    for (pres, expected) in family() {
        let p = build(&pres);
        let op = opposite(&p).unwrap();
        let c = opposite_contour(&op, &non_deep(&p)[0]).unwrap();
        let got = classify_contour(&op, &c, DEFAULT_BUDGET).unwrap();
        match (expected, &got.verdict) {
            (Verdict::DumbBell { r, s }, got) => assert_eq!(*got, Verdict::DumbBell { r: s, s: r }, "{}", pres.name),
            // e is not preserved by duality, only the cycle length
            (Verdict::PennyFarthing { n, .. }, Verdict::PennyFarthing { n: m, .. }) => assert_eq!(n, *m),
            (expected, got) => assert_eq!(*got, expected, "{}", pres.name),
        }
    }
}

/// Renames every point and arrow and reverses the declaration order.
fn relabel(p: &Presentation) -> Presentation {
    let pt = |n: &str| format!("P_{n}");
    let ar = |n: &str| format!("A_{n}");
    let quiver = Quiver {
        points: p.quiver.points.iter().rev().map(|x| pt(x)).collect(),
        arrows: p
            .quiver
            .arrows
            .iter()
            .rev()
            .map(|a| ArrowDecl {
                name: ar(&a.name),
                source: pt(&a.source),
                target: pt(&a.target),
            })
            .collect(),
    };
    let path = |q: &PathExpr| PathExpr(q.0.iter().map(|n| ar(n)).collect());
    let relations = p
        .relations
        .iter()
        .map(|r| match r {
            Relation::Zero { path: q } => Relation::zero(path(q)),
            Relation::Commutativity { left, right } => Relation::commutativity(path(left), path(right)),
        })
        .collect();
    Presentation::new(format!("{}_renamed", p.name), quiver, relations).unwrap()
}

#[test]
fn verdicts_survive_renaming() {
    for (pres, expected) in family() {
        let p = build(&relabel(&pres));
        let cs = non_deep(&p);
        assert_eq!(cs.len(), 1, "{}", pres.name);
        assert_eq!(classify_contour(&p, &cs[0], DEFAULT_BUDGET).unwrap().verdict, expected, "{}", pres.name);
    }
}

#[test]
fn family_verdicts_meet_the_bounds() {
    let p = build(&templates::dumbbell(2, 3).unwrap());
    assert!(non_deep(&p).is_empty());
    for (r, s) in [(6, 6), (3, 6), (6, 3), (4, 4)] {
        let p = build(&templates::dumbbell(r, s).unwrap());
        let got = classify_contour(&p, &non_deep(&p)[0], DEFAULT_BUDGET).unwrap();
        assert!(!got.verdict.is_family(), "({r}, {s}): {:?}", got.verdict);
        if let Verdict::Refuted { certificate, .. } = &got.verdict {
            certificate.verify(32).unwrap();
        }
    }
}

#[test]
fn templates_are_mild_consistent() {
    for (pres, _) in family() {
        let p = build(&pres);
        let got = check_mild(&p, &non_deep(&p)[0], DEFAULT_BUDGET).unwrap();
        assert!(matches!(got, Mildness::MildConsistent { .. }), "{}: {got:?}", pres.name);
    }
}

#[test]
fn neighborhoods_of_templates_hold() {
    for (pres, _) in family() {
        let p = build(&pres);
        let c = &non_deep(&p)[0];
        let cls = classify_contour(&p, c, DEFAULT_BUDGET).unwrap();
        let report = neighborhood_constraints(&p, c, &cls).unwrap();
        assert!(report.holds(), "{}: {report:?}", pres.name);
    }
}

fn pf2() -> Presentation {
    templates::penny_farthing(2, &[1]).unwrap()
}

#[test]
fn penny_farthings_glued_at_the_loop_point_contain_d5() {
    let g = glue("two_pf", &pf2(), &pf2(), &[("x0", "x0")], &[("p", "p")], vec![]).unwrap();
    let p = build(&g);
    let sq = separated_quiver(&p);
    assert!(contains_type(&sq, DynkinType::d_ext(5)).is_some());
    let class = classify_graph(&sq);
    assert_eq!(class.components.len(), 1);
    assert_eq!(class.components[0].1, ComponentClass::ExtendedDynkin { kind: DynkinType::d_ext(5) });
}

#[test]
fn penny_farthings_glued_at_x1_contain_a5() {
    let extra = vec![
        Relation::zero(PathExpr::new(["a2'", "a1"])),
        Relation::zero(PathExpr::new(["a2", "a1'"])),
    ];
    let g = glue("pf_cycle", &pf2(), &pf2(), &[("x1", "x1")], &[], extra).unwrap();
    let p = build(&g);
    let class = classify_graph(&separated_quiver(&p));
    let ext: Vec<_> = class.components.iter().filter(|(_, c)| !matches!(c, ComponentClass::Dynkin { .. })).collect();
    assert_eq!(ext.len(), 1);
    assert_eq!(ext[0].1, ComponentClass::ExtendedDynkin { kind: DynkinType::a_ext(5) });
}

#[test]
fn glued_penny_farthings_share_their_loop_point() {
    let g = glue("two_pf", &pf2(), &pf2(), &[("x0", "x0")], &[("p", "p")], vec![]).unwrap();
    let p = build(&g);
    let cs = non_deep(&p);
    // the third contour pairs the two cycles
    assert_eq!(cs.len(), 3, "{cs:?}");
    let report = contour_disjointness(&p, &cs[0], &cs[1], 6, DEFAULT_BUDGET).unwrap();
    assert_eq!(report.shared_points, vec!["x0".to_string()]);
    assert_eq!(report.shared_arrows, vec!["p".to_string()]);
    assert!(!report.holds());
}

#[test]
fn chained_dumbbells_share_one_point() {
    let db = templates::dumbbell(3, 3).unwrap();
    let g = glue("two_db", &db, &db, &[("y", "x")], &[("r", "l")], vec![]).unwrap();
    let p = build(&g);
    let cs = non_deep(&p);
    assert_eq!(cs.len(), 2, "{cs:?}");
    let report = contour_disjointness(&p, &cs[0], &cs[1], 6, DEFAULT_BUDGET).unwrap();
    assert_eq!(report.shared_points, vec!["y".to_string()]);
    // the loop at y is both ρ and λ′
    assert_eq!(report.shared_arrows, vec!["r".to_string()]);
    if let Some(cert) = report.search.as_ref().and_then(|s| s.certificate.as_ref()) {
        cert.verify(32).unwrap();
    }
}

#[test]
fn separate_dumbbells_are_disjoint() {
    let db = templates::dumbbell(3, 3).unwrap();
    let g = glue("db_pair", &db, &db, &[], &[], vec![]).unwrap();
    let p = build(&g);
    let cs = non_deep(&p);
    assert_eq!(cs.len(), 2);
    for k in [5, 6] {
        let report = contour_disjointness(&p, &cs[0], &cs[1], k, DEFAULT_BUDGET).unwrap();
        assert!(report.arrows_clause && report.points_clause && report.search.is_none());
    }
}
