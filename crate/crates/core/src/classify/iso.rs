//! Isomorphism of finite ray categories by backtracking over arrow bijections.

use crate::raycore::{MorId, RayCategory};

/// A point and arrow bijection from `a` to `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Iso {
    pub points: Vec<usize>,
    pub arrows: Vec<usize>,
}

/// An isomorphism `a -> b` extending the given point assignments, if any.
pub fn find_isomorphism(a: &RayCategory, b: &RayCategory, fixed: &[(usize, usize)]) -> Option<Iso> {
    if a.num_points() != b.num_points() || a.arrows().len() != b.arrows().len() || a.num_morphisms() != b.num_morphisms() {
        return None;
    }
    let n = a.num_points();
    let profile = |p: &RayCategory, x: usize| {
        let out = p.arrows().iter().filter(|ar| ar.source == x).count();
        let inn = p.arrows().iter().filter(|ar| ar.target == x).count();
        let loops = p.arrows().iter().filter(|ar| ar.source == x && ar.target == x).count();
        (out, inn, loops, p.hom(x, x).len())
    };
    let mut pmap: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    for &(x, y) in fixed {
        if profile(a, x) != profile(b, y) || used[y] || pmap[x].is_some_and(|v| v != y) {
            return None;
        }
        pmap[x] = Some(y);
        used[y] = true;
    }
    let mut found = None;
    assign_points(a, b, 0, &mut pmap, &mut used, &profile, &mut found);
    found
}

fn assign_points(
    a: &RayCategory,
    b: &RayCategory,
    i: usize,
    pmap: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
    profile: &dyn Fn(&RayCategory, usize) -> (usize, usize, usize, usize),
    found: &mut Option<Iso>,
) {
    if found.is_some() {
        return;
    }
    if i == pmap.len() {
        let points: Vec<usize> = pmap.iter().map(|p| p.unwrap()).collect();
        let hom_ok = (0..points.len())
            .all(|x| (0..points.len()).all(|y| a.hom(x, y).len() == b.hom(points[x], points[y]).len()));
        if hom_ok {
            let mut amap = vec![None; a.arrows().len()];
            let mut aused = vec![false; b.arrows().len()];
            if let Some(arrows) = assign_arrows(a, b, &points, 0, &mut amap, &mut aused) {
                *found = Some(Iso { points, arrows });
            }
        }
        return;
    }
    if pmap[i].is_some() {
        assign_points(a, b, i + 1, pmap, used, profile, found);
        return;
    }
    for y in 0..used.len() {
        if used[y] || profile(a, i) != profile(b, y) {
            continue;
        }
        pmap[i] = Some(y);
        used[y] = true;
        assign_points(a, b, i + 1, pmap, used, profile, found);
        used[y] = false;
        pmap[i] = None;
        if found.is_some() {
            return;
        }
    }
}

fn assign_arrows(
    a: &RayCategory,
    b: &RayCategory,
    points: &[usize],
    i: usize,
    amap: &mut Vec<Option<usize>>,
    aused: &mut Vec<bool>,
) -> Option<Vec<usize>> {
    if i == amap.len() {
        let arrows: Vec<usize> = amap.iter().map(|x| x.unwrap()).collect();
        return functor_is_iso(a, b, points, &arrows).then_some(arrows);
    }
    let ar = &a.arrows()[i];
    for j in 0..b.arrows().len() {
        let br = &b.arrows()[j];
        if aused[j] || br.source != points[ar.source] || br.target != points[ar.target] {
            continue;
        }
        amap[i] = Some(j);
        aused[j] = true;
        if let Some(done) = assign_arrows(a, b, points, i + 1, amap, aused) {
            return Some(done);
        }
        aused[j] = false;
        amap[i] = None;
    }
    None
}

/// The arrow map induces a bijection on morphisms that preserves zero paths.
fn functor_is_iso(a: &RayCategory, b: &RayCategory, points: &[usize], arrows: &[usize]) -> bool {
    let image = |path: &[usize]| -> Vec<usize> { path.iter().map(|&x| arrows[x]).collect() };
    let mut mor: Vec<Option<MorId>> = vec![None; a.num_morphisms()];
    let mut hit = vec![false; b.num_morphisms()];
    for x in 0..a.num_points() {
        mor[a.identity(x)] = Some(b.identity(points[x]));
    }
    for (path, m) in a.nonzero_paths() {
        if path.is_empty() {
            continue;
        }
        let Some(bm) = b.class_of(&image(&path)) else { return false };
        match mor[m] {
            Some(prev) if prev != bm => return false,
            _ => mor[m] = Some(bm),
        }
        // one more arrow on the left keeps zero-ness
        for (k, ar) in a.arrows().iter().enumerate() {
            if ar.source != a.target(m) {
                continue;
            }
            let mut longer = vec![k];
            longer.extend_from_slice(&path);
            if a.class_of(&longer).is_none() != b.class_of(&image(&longer)).is_none() {
                return false;
            }
        }
    }
    for m in mor.iter() {
        let Some(bm) = *m else { return false };
        if std::mem::replace(&mut hit[bm], true) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;
    use crate::templates;

    fn build(text: &str) -> RayCategory {
        RayCategory::build(&parse_presentation(text).unwrap(), 32).unwrap()
    }

    #[test]
    fn renamed_dumbbell_is_isomorphic() {
        let a = RayCategory::build(&templates::dumbbell(3, 4).unwrap(), 32).unwrap();
        let b = build("points v u\narrow q : u -> u\narrow f : u -> v\narrow h : v -> v\nrel f q = h f\nrel q q q = 0\nrel h h h h = 0\n");
        let iso = find_isomorphism(&a, &b, &[]).unwrap();
        assert_eq!(iso.points, vec![1, 0]);
        let swapped = RayCategory::build(&templates::dumbbell(4, 3).unwrap(), 32).unwrap();
        assert!(find_isomorphism(&a, &swapped, &[]).is_none());
    }

    #[test]
    fn penny_farthings_differ_by_e() {
        let maps = templates::nondecreasing_maps(3);
        let cats: Vec<RayCategory> = maps
            .iter()
            .map(|e| RayCategory::build(&templates::penny_farthing(3, e).unwrap(), 32).unwrap())
            .collect();
        for i in 0..cats.len() {
            for j in 0..cats.len() {
                assert_eq!(find_isomorphism(&cats[i], &cats[j], &[(0, 0)]).is_some(), i == j, "{:?} {:?}", maps[i], maps[j]);
            }
        }
    }
}
