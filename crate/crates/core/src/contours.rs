//! Interlacing and contours.
//!
//! Two paths are one R-step apart when they differ in a single proper factor
//! `p v' q` / `p w' q` whose two middles have the same nonzero ray. Interlaced
//! means connected by one or more R-steps.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::morphology::{self, factor_after, factor_before};
use crate::presentation::PathExpr;
use crate::raycore::{MorId, RayCategory, RayMorphism};

/// `{v, w}`, oriented so that `π(y)` factors through the first arrow of `v`
/// (or, for cotransit rays, `π(x)` through the last arrow of `v`) when exactly
/// one of the two paths allows it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contour {
    pub x: usize,
    pub y: usize,
    pub v: PathExpr,
    pub w: PathExpr,
    pub ray: RayMorphism,
    pub non_deep: bool,
    /// Shortlex-least path with ray `π(y)`.
    pub transit_path: Option<PathExpr>,
}

impl Contour {
    /// Points met by `v` or `w`, in index order.
    pub fn points(&self, p: &RayCategory) -> Result<Vec<usize>> {
        let mut out = BTreeSet::new();
        for path in [&self.v, &self.w] {
            for a in p.arrow_path(path)? {
                out.insert(p.arrows()[a].source);
                out.insert(p.arrows()[a].target);
            }
        }
        Ok(out.into_iter().collect())
    }

    /// Arrow indices met by `v` or `w`.
    pub fn arrows(&self, p: &RayCategory) -> Result<BTreeSet<usize>> {
        let mut out = BTreeSet::new();
        for path in [&self.v, &self.w] {
            out.extend(p.arrow_path(path)?);
        }
        Ok(out)
    }
}

struct Stepper<'a> {
    p: &'a RayCategory,
    cache: HashMap<MorId, Vec<Vec<usize>>>,
}

impl<'a> Stepper<'a> {
    fn new(p: &'a RayCategory) -> Self {
        Stepper {
            p,
            cache: HashMap::new(),
        }
    }

    /// All R-neighbours of `u`, including `u` itself when it has a proper nonzero factor.
    fn neighbours(&mut self, u: &[usize]) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let len = u.len();
        for i in 0..len {
            for j in i + 1..=len {
                if i == 0 && j == len {
                    continue;
                }
                let Some(c) = self.p.class_of(&u[i..j]) else { continue };
                let p = self.p;
                let alts = self.cache.entry(c).or_insert_with(|| p.paths_of(c));
                for alt in alts.iter() {
                    let mut n = Vec::with_capacity(len - (j - i) + alt.len());
                    n.extend_from_slice(&u[..i]);
                    n.extend_from_slice(alt);
                    n.extend_from_slice(&u[j..]);
                    out.push(n);
                }
            }
        }
        out
    }
}

fn parallel(p: &RayCategory, v: &PathExpr, w: &PathExpr) -> Result<(Vec<usize>, Vec<usize>)> {
    let q = &p.presentation().quiver;
    let (ve, we) = (v.endpoints(q)?, w.endpoints(q)?);
    if ve != we {
        return Err(Error::EndpointMismatch(format!("`{v}` and `{w}` are not parallel")));
    }
    Ok((p.arrow_path(v)?, p.arrow_path(w)?))
}

/// Whether `w` is reachable from `v` by one or more R-steps.
pub fn interlaced(p: &RayCategory, v: &PathExpr, w: &PathExpr) -> Result<bool> {
    let (v, w) = parallel(p, v, w)?;
    // Nonzero rays keep every reachable path inside one finite class; for zero
    // rays the search is cut off at the cap.
    let bound = p.cap().max(v.len()).max(w.len());
    let mut step = Stepper::new(p);
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([v]);
    while let Some(u) = queue.pop_front() {
        for n in step.neighbours(&u) {
            if n == w {
                return Ok(true);
            }
            if n.len() <= bound && seen.insert(n.clone()) {
                queue.push_back(n);
            }
        }
    }
    Ok(false)
}

/// Partition of the paths in class `c` into R-components.
fn components(p: &RayCategory, c: MorId) -> (Vec<Vec<usize>>, Vec<usize>) {
    let paths = p.paths_of(c);
    let index: HashMap<&[usize], usize> = paths.iter().enumerate().map(|(i, q)| (q.as_slice(), i)).collect();
    let mut parent: Vec<usize> = (0..paths.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut step = Stepper::new(p);
    for (i, u) in paths.iter().enumerate() {
        for n in step.neighbours(u) {
            let j = index[n.as_slice()];
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a.max(b)] = a.min(b);
        }
    }
    let roots = (0..paths.len()).map(|i| find(&mut parent, i)).collect();
    (paths, roots)
}

fn orient(p: &RayCategory, ray: MorId, a: Vec<usize>, b: Vec<usize>) -> Result<(Vec<usize>, Vec<usize>)> {
    let (x, y) = (p.source(ray), p.target(ray));
    let qualifies = |path: &[usize]| -> Result<bool> {
        if morphology::is_transit(p, ray) {
            let first = p.arrow_mor(path[0]);
            Ok(morphology::pi_loop_id(p, y)?.is_some_and(|pi| factor_before(p, pi, first).is_some()))
        } else {
            let last = p.arrow_mor(*path.last().unwrap());
            Ok(morphology::pi_loop_id(p, x)?.is_some_and(|pi| factor_after(p, pi, last).is_some()))
        }
    };
    if !qualifies(&a)? && qualifies(&b)? {
        Ok((b, a))
    } else {
        Ok((a, b))
    }
}

fn make_contour(p: &RayCategory, ray: MorId, v: Vec<usize>, w: Vec<usize>) -> Result<Contour> {
    let (v, w) = orient(p, ray, v, w)?;
    let y = p.target(ray);
    Ok(Contour {
        x: p.source(ray),
        y,
        v: p.path_expr(&v),
        w: p.path_expr(&w),
        ray: p.mor(ray),
        non_deep: !morphology::is_deep(p, ray)?,
        transit_path: morphology::pi_loop_id(p, y)?.map(|pi| p.rep_path(pi)),
    })
}

/// Every pair of distinct, parallel, non-interlaced paths with the same nonzero ray.
pub fn find_contours(p: &RayCategory) -> Result<Vec<Contour>> {
    let mut out = Vec::new();
    for c in 0..p.num_morphisms() {
        if p.is_identity(c) {
            continue;
        }
        let (paths, roots) = components(p, c);
        for i in 0..paths.len() {
            for j in i + 1..paths.len() {
                if roots[i] != roots[j] {
                    out.push(make_contour(p, c, paths[i].clone(), paths[j].clone())?);
                }
            }
        }
    }
    Ok(out)
}

/// The contour with the given two paths, if they form one.
pub fn contour_of(p: &RayCategory, v: &PathExpr, w: &PathExpr) -> Result<Contour> {
    let (va, wa) = parallel(p, v, w)?;
    let ray = p.class_of(&va).ok_or(Error::ZeroMorphism)?;
    if p.class_of(&wa) != Some(ray) {
        return Err(Error::Precondition(format!("`{v}` and `{w}` have different rays")));
    }
    if va == wa || interlaced(p, v, w)? {
        return Err(Error::Precondition(format!("`{v}` and `{w}` are interlaced")));
    }
    make_contour(p, ray, va, wa)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Uniqueness {
    Pass,
    Fail { third: PathExpr },
}

/// Every path with the contour's ray is `v` or `w`.
pub fn check_path_uniqueness(p: &RayCategory, c: &Contour) -> Result<Uniqueness> {
    let ray = c.ray.class.ok_or(Error::ZeroMorphism)?;
    if !c.non_deep {
        return Err(Error::Precondition("the contour is deep".into()));
    }
    if !morphology::is_transit(p, ray) {
        return Err(Error::Precondition("the ray of v is not transit".into()));
    }
    let v = p.arrow_path(&c.v)?;
    let w = p.arrow_path(&c.w)?;
    match p.paths_of(ray).into_iter().find(|u| *u != v && *u != w) {
        Some(u) => Ok(Uniqueness::Fail { third: p.path_expr(&u) }),
        None => Ok(Uniqueness::Pass),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;
    use crate::templates;

    fn path(s: &str) -> PathExpr {
        PathExpr::parse(s).unwrap()
    }

    fn build(p: crate::presentation::Presentation) -> RayCategory {
        RayCategory::build(&p, 32).unwrap()
    }

    #[test]
    fn dumbbell_contour() {
        let p = build(templates::dumbbell(3, 3).unwrap());
        let cs = find_contours(&p).unwrap();
        assert_eq!(cs.len(), 1);
        let c = &cs[0];
        assert_eq!((c.v.to_string(), c.w.to_string()), ("r m".into(), "m l".into()));
        assert!(c.non_deep);
        assert_eq!(c.transit_path, Some(path("r")));
        assert!(!interlaced(&p, &path("m l"), &path("r m")).unwrap());
        assert_eq!(check_path_uniqueness(&p, c).unwrap(), Uniqueness::Pass);
    }

    #[test]
    fn diamond_contours() {
        let p = build(templates::diamond());
        assert!(interlaced(&p, &path("k b d"), &path("k a g")).unwrap());
        let cs = find_contours(&p).unwrap();
        let non_deep: Vec<&Contour> = cs.iter().filter(|c| c.non_deep).collect();
        assert_eq!(non_deep.len(), 1);
        assert_eq!((non_deep[0].v.to_string(), non_deep[0].w.to_string()), ("a g".into(), "b d".into()));
    }

    #[test]
    fn single_arrow_not_self_interlaced() {
        let p = build(templates::dumbbell(3, 3).unwrap());
        assert!(!interlaced(&p, &path("m"), &path("m")).unwrap());
        assert!(interlaced(&p, &path("m l"), &path("m l")).unwrap());
    }

    #[test]
    fn linear_quiver_has_none() {
        let p = build(parse_presentation("points x y\narrow a : x -> y\n").unwrap());
        assert!(find_contours(&p).unwrap().is_empty());
    }

    #[test]
    fn penny_farthing_uniqueness() {
        let p = build(templates::penny_farthing(2, &[1]).unwrap());
        let cs: Vec<Contour> = find_contours(&p).unwrap().into_iter().filter(|c| c.non_deep).collect();
        assert_eq!(cs.len(), 1);
        assert_eq!((cs[0].v.to_string(), cs[0].w.to_string()), ("p p".into(), "a2 a1".into()));
        assert_eq!(check_path_uniqueness(&p, &cs[0]).unwrap(), Uniqueness::Pass);
    }

    #[test]
    fn non_parallel_rejected() {
        let p = build(templates::dumbbell(3, 3).unwrap());
        assert!(interlaced(&p, &path("m"), &path("l")).is_err());
    }
}
