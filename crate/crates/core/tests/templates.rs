use raycat_core::contours::{check_path_uniqueness, find_contours, Uniqueness};
use raycat_core::templates::{diamond, dumbbell, dumbbell_family, nondecreasing_maps, penny_farthing};
use raycat_core::{Presentation, RayCategory, DEFAULT_CAP};

fn all_templates() -> Vec<(Presentation, (String, String))> {
    let mut out = Vec::new();
    for (r, s) in dumbbell_family() {
        out.push((dumbbell(r, s).unwrap(), ("r m".into(), "m l".into())));
    }
    for n in 2..=4 {
        let cycle: Vec<String> = (1..=n).rev().map(|i| format!("a{i}")).collect();
        for e in nondecreasing_maps(n) {
            out.push((penny_farthing(n, &e).unwrap(), ("p p".into(), cycle.join(" "))));
        }
    }
    out.push((diamond(), ("a g".into(), "b d".into())));
    out
}

#[test]
fn each_template_has_one_non_deep_contour() {
    for (pres, expected) in all_templates() {
        let p = RayCategory::build(&pres, DEFAULT_CAP).unwrap();
        let cs: Vec<_> = find_contours(&p).unwrap().into_iter().filter(|c| c.non_deep).collect();
        assert_eq!(cs.len(), 1, "{}: {cs:?}", pres.name);
        assert_eq!((cs[0].v.to_string(), cs[0].w.to_string()), expected, "{}", pres.name);
        assert_eq!(check_path_uniqueness(&p, &cs[0]).unwrap(), Uniqueness::Pass, "{}", pres.name);
    }
}

#[test]
fn only_the_diamond_has_a_deep_contour() {
    for (pres, _) in all_templates() {
        let p = RayCategory::build(&pres, DEFAULT_CAP).unwrap();
        let deep: Vec<(String, String)> = find_contours(&p)
            .unwrap()
            .into_iter()
            .filter(|c| !c.non_deep)
            .map(|c| (c.v.to_string(), c.w.to_string()))
            .collect();
        if pres.name == "diamond" {
            assert_eq!(deep, [("g l".to_string(), "k a".to_string())]);
        } else {
            assert!(deep.is_empty(), "{}: {deep:?}", pres.name);
        }
    }
}
