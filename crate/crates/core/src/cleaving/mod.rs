//! Diagram functors into a ray category and the cleaving conditions.
//!
//! A shape is given by a quiver without oriented cycles. Parallel paths in the
//! shape are equal; zero relations are listed explicitly.

mod crown;
mod graph;
mod search;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentation::{PathExpr, Presentation, Relation};
use crate::raycore::{MorId, RayCategory, RayMorphism};

pub use crown::{crown_diagram, find_crown, verify_crown, Crown};
pub use graph::{classify_graph, contains_type, embeds, separated_quiver, ComponentClass, DynkinType, EmbeddedGraph, Family, GraphClass, Multigraph};
pub use search::{catalog, find_dynkin_cleaving, CatalogShape, SearchOutcome, Witness, DEFAULT_BUDGET};

/// The finite category of a shape presentation.
#[derive(Debug, Clone)]
pub(crate) struct ShapeCat {
    pub n: usize,
    pub arrows: Vec<(usize, usize)>,
    /// `reach[a][b]`: some path from a to b (including a == b).
    pub reach: Vec<Vec<bool>>,
    /// `zero[a][b]`: the morphism a -> b exists and is zero.
    pub zero: Vec<Vec<bool>>,
}

impl ShapeCat {
    pub fn new(shape: &Presentation) -> Result<Self> {
        let q = &shape.quiver;
        let n = q.points.len();
        let idx = |name: &str| q.point_index(name).ok_or_else(|| Error::UnknownPoint(name.into()));
        let mut arrows = Vec::new();
        for a in &q.arrows {
            arrows.push((idx(&a.source)?, idx(&a.target)?));
        }
        let mut reach = vec![vec![false; n]; n];
        for (a, row) in reach.iter_mut().enumerate() {
            row[a] = true;
        }
        for &(s, t) in &arrows {
            reach[s][t] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if reach[i][k] {
                    for j in 0..n {
                        if reach[k][j] {
                            reach[i][j] = true;
                        }
                    }
                }
            }
        }
        for (i, &(s, t)) in arrows.iter().enumerate() {
            if s == t || reach[t][s] {
                return Err(Error::InvalidShape(format!("arrow `{}` lies on an oriented cycle", q.arrows[i].name)));
            }
            let longer = arrows
                .iter()
                .enumerate()
                .any(|(j, &(s2, m))| j != i && s2 == s && m != t && reach[m][t]);
            if longer {
                return Err(Error::InvalidShape(format!("arrow `{}` is parallel to a longer path", q.arrows[i].name)));
            }
        }
        let mut killed = Vec::new();
        for rel in &shape.relations {
            match rel {
                Relation::Zero { path } => {
                    let (s, t) = path.endpoints(q)?;
                    killed.push((idx(s)?, idx(t)?));
                }
                Relation::Commutativity { .. } => {}
            }
        }
        let mut zero = vec![vec![false; n]; n];
        for a in 0..n {
            for b in 0..n {
                zero[a][b] = reach[a][b] && killed.iter().any(|&(c, d)| reach[a][c] && reach[d][b]);
            }
        }
        Ok(ShapeCat { n, arrows, reach, zero })
    }

    pub fn nonzero(&self, a: usize, b: usize) -> bool {
        self.reach[a][b] && !self.zero[a][b]
    }

    /// `μ: a -> b` is maximal: every arrow out of b kills it.
    pub fn maximal(&self, a: usize, b: usize) -> bool {
        self.arrows.iter().all(|&(s, t)| s != b || !self.nonzero(a, t))
    }

    /// `μ: a -> b` is minimal: every arrow into a kills it.
    pub fn minimal(&self, a: usize, b: usize) -> bool {
        self.arrows.iter().all(|&(s, t)| t != a || !self.nonzero(s, b))
    }
}

/// A functor from a shape into a host category.
#[derive(Debug, Clone)]
pub struct DiagramFunctor {
    pub shape: Presentation,
    /// Host point of each shape point.
    pub objects: Vec<usize>,
    /// Host morphism of each shape arrow.
    pub arrows: Vec<MorId>,
}

/// JSON form of a diagram: host morphisms are written as paths, `""` for an identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramSpec {
    pub shape: Presentation,
    pub objects: BTreeMap<String, String>,
    pub arrows: BTreeMap<String, String>,
}

impl DiagramFunctor {
    pub fn from_spec(host: &RayCategory, spec: &DiagramSpec) -> Result<Self> {
        let q = &spec.shape.quiver;
        let mut objects = Vec::with_capacity(q.points.len());
        for pt in &q.points {
            let image = spec
                .objects
                .get(pt)
                .ok_or_else(|| Error::NotFunctorial(format!("no image for point `{pt}`")))?;
            objects.push(host.point_index(image)?);
        }
        let mut arrows = Vec::with_capacity(q.arrows.len());
        for a in &q.arrows {
            let image = spec
                .arrows
                .get(&a.name)
                .ok_or_else(|| Error::NotFunctorial(format!("no image for arrow `{}`", a.name)))?;
            let m = if image.trim().is_empty() {
                host.identity(objects[q.point_index(&a.source).unwrap()])
            } else {
                host.ray_of(&PathExpr::parse(image)?)?.class.ok_or(Error::ZeroMorphism)?
            };
            arrows.push(m);
        }
        Ok(DiagramFunctor {
            shape: spec.shape.clone(),
            objects,
            arrows,
        })
    }

    pub fn to_spec(&self, host: &RayCategory) -> DiagramSpec {
        let q = &self.shape.quiver;
        DiagramSpec {
            shape: self.shape.clone(),
            objects: q
                .points
                .iter()
                .zip(&self.objects)
                .map(|(s, &h)| (s.clone(), host.points()[h].clone()))
                .collect(),
            arrows: q
                .arrows
                .iter()
                .zip(&self.arrows)
                .map(|(a, &m)| (a.name.clone(), host.rep_path(m).to_string()))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// One of `a`, `b`, `c`, `d`.
    pub condition: char,
    /// Host morphisms involved, in the order named by `detail`.
    pub host: Vec<RayMorphism>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleavingVerdict {
    pub ok: bool,
    pub violation: Option<Violation>,
}

impl CleavingVerdict {
    fn pass() -> Self {
        CleavingVerdict { ok: true, violation: None }
    }

    fn fail(condition: char, host: Vec<RayMorphism>, detail: String) -> Self {
        CleavingVerdict {
            ok: false,
            violation: Some(Violation { condition, host, detail }),
        }
    }
}

/// Images of all shape morphisms; `value[a][b]` is meaningful when `reach[a][b]`.
fn images(host: &RayCategory, shape: &ShapeCat, f: &DiagramFunctor) -> Result<Vec<Vec<Option<MorId>>>> {
    let names = &f.shape.quiver.arrows;
    if f.objects.len() != shape.n || f.arrows.len() != shape.arrows.len() {
        return Err(Error::NotFunctorial("object or arrow map has the wrong size".into()));
    }
    for (i, &(s, t)) in shape.arrows.iter().enumerate() {
        let m = f.arrows[i];
        if host.source(m) != f.objects[s] || host.target(m) != f.objects[t] {
            return Err(Error::NotFunctorial(format!("image of `{}` has the wrong endpoints", names[i].name)));
        }
    }
    // topological order of the shape
    let mut order: Vec<usize> = (0..shape.n).collect();
    order.sort_by_key(|&b| (0..shape.n).filter(|&a| shape.reach[a][b]).count());
    let mut value = vec![vec![None; shape.n]; shape.n];
    for a in 0..shape.n {
        value[a][a] = Some(host.identity(f.objects[a]));
        for &b in &order {
            if b == a || !shape.reach[a][b] {
                continue;
            }
            let mut seen: Option<Option<MorId>> = None;
            for (i, &(c, t)) in shape.arrows.iter().enumerate() {
                if t != b || !shape.reach[a][c] {
                    continue;
                }
                let v = host.comp_opt(Some(f.arrows[i]), value[a][c]);
                match seen {
                    None => seen = Some(v),
                    Some(prev) if prev != v => {
                        return Err(Error::NotFunctorial(format!(
                            "paths from `{}` to `{}` have different images",
                            f.shape.quiver.points[a], f.shape.quiver.points[b]
                        )))
                    }
                    _ => {}
                }
            }
            value[a][b] = seen.expect("reachable point has an incoming arrow");
        }
    }
    for a in 0..shape.n {
        for b in 0..shape.n {
            if shape.zero[a][b] && value[a][b].is_some() {
                return Err(Error::NotFunctorial(format!(
                    "a zero relation from `{}` to `{}` is not preserved",
                    f.shape.quiver.points[a], f.shape.quiver.points[b]
                )));
            }
        }
    }
    Ok(value)
}

/// Conditions a to d, checked exhaustively. Non-functorial input is an error.
pub fn check_cleaving(host: &RayCategory, f: &DiagramFunctor) -> Result<CleavingVerdict> {
    let shape = ShapeCat::new(&f.shape)?;
    let value = images(host, &shape, f)?;
    let pts = &f.shape.quiver.points;
    let names = &f.shape.quiver.arrows;

    for a in 0..shape.n {
        for b in 0..shape.n {
            if shape.nonzero(a, b) && value[a][b].is_none() {
                return Ok(CleavingVerdict::fail(
                    'a',
                    vec![host.zero(f.objects[a], f.objects[b])],
                    format!("the nonzero morphism {} -> {} is sent to zero", pts[a], pts[b]),
                ));
            }
        }
    }
    for (i, &m) in f.arrows.iter().enumerate() {
        if host.is_identity(m) {
            return Ok(CleavingVerdict::fail('b', vec![host.mor(m)], format!("arrow `{}` is sent to an identity", names[i].name)));
        }
    }
    let k = shape.arrows.len();
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let (sa, ta) = shape.arrows[i];
            let (sb, tb) = shape.arrows[j];
            // c: alpha = i, beta = j out of a common source
            if sa == sb {
                for t in 0..shape.n {
                    if !shape.nonzero(sb, t) || !shape.reach[tb][t] || !shape.maximal(sb, t) || shape.nonzero(ta, t) {
                        continue;
                    }
                    let mu = value[sb][t].expect("checked by a");
                    let fa = f.arrows[i];
                    if let Some(xi) = host
                        .hom(host.target(fa), host.target(mu))
                        .iter()
                        .copied()
                        .find(|&xi| host.comp(xi, fa) == Some(mu))
                    {
                        return Ok(CleavingVerdict::fail(
                            'c',
                            vec![host.mor(mu), host.mor(xi), host.mor(fa)],
                            format!(
                                "F({} -> {}) = xi F({}) although it does not factor through `{}`",
                                pts[sb], pts[t], names[i].name, names[i].name
                            ),
                        ));
                    }
                }
            }
            // d: alpha = i, beta = j into a common target
            if ta == tb {
                for s in 0..shape.n {
                    if !shape.nonzero(s, tb) || !shape.reach[s][sb] || !shape.minimal(s, tb) || shape.nonzero(s, sa) {
                        continue;
                    }
                    let mu = value[s][tb].expect("checked by a");
                    let fa = f.arrows[i];
                    if let Some(xi) = host
                        .hom(host.source(mu), host.source(fa))
                        .iter()
                        .copied()
                        .find(|&xi| host.comp(fa, xi) == Some(mu))
                    {
                        return Ok(CleavingVerdict::fail(
                            'd',
                            vec![host.mor(mu), host.mor(fa), host.mor(xi)],
                            format!(
                                "F({} -> {}) = F({}) xi although it does not factor through `{}`",
                                pts[s], pts[tb], names[i].name, names[i].name
                            ),
                        ));
                    }
                }
            }
        }
    }
    Ok(CleavingVerdict::pass())
}

/// `(a, b, image)` for every pair of shape points joined by a path; the image is
/// `None` when it is zero.
pub fn diagram_composites(host: &RayCategory, f: &DiagramFunctor) -> Result<Vec<(usize, usize, Option<MorId>)>> {
    let cat = ShapeCat::new(&f.shape)?;
    let value = images(host, &cat, f)?;
    let mut out = Vec::new();
    for a in 0..cat.n {
        for b in 0..cat.n {
            if cat.reach[a][b] {
                out.push((a, b, value[a][b]));
            }
        }
    }
    Ok(out)
}

/// A shape without relations plus images; zero relations are added for every
/// shape morphism whose image is zero. Parallel paths must still agree.
pub fn diagram_with_induced_zeros(host: &RayCategory, shape: Presentation, objects: Vec<usize>, arrows: Vec<MorId>) -> Result<DiagramFunctor> {
    let bare = DiagramFunctor { shape, objects, arrows };
    let cat = ShapeCat::new(&bare.shape)?;
    let value = images(host, &cat, &bare)?;
    let mut relations = bare.shape.relations.clone();
    for a in 0..cat.n {
        for b in 0..cat.n {
            if a == b || !cat.reach[a][b] || value[a][b].is_some() {
                continue;
            }
            let smaller = (0..cat.n).any(|c| {
                (0..cat.n).any(|d| {
                    (c, d) != (a, b) && c != d && cat.reach[a][c] && cat.reach[c][d] && cat.reach[d][b] && value[c][d].is_none()
                })
            });
            if !smaller {
                relations.push(Relation::zero(shape_path(&bare.shape, &cat, a, b)));
            }
        }
    }
    let shape = Presentation::new(bare.shape.name.clone(), bare.shape.quiver.clone(), relations)?;
    Ok(DiagramFunctor { shape, ..bare })
}

/// Some path from `a` to `b` in written order.
fn shape_path(shape: &Presentation, cat: &ShapeCat, a: usize, b: usize) -> PathExpr {
    let mut names = Vec::new();
    let mut cur = a;
    while cur != b {
        let (i, &(_, t)) = cat
            .arrows
            .iter()
            .enumerate()
            .find(|&(_, &(s, t))| s == cur && cat.reach[t][b])
            .expect("b is reachable");
        names.push(shape.quiver.arrows[i].name.clone());
        cur = t;
    }
    names.reverse();
    PathExpr(names)
}

/// A witness together with the category it lives in, so that it can be checked
/// without the surrounding computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub host: Presentation,
    #[serde(flatten)]
    pub witness: CertifiedWitness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum CertifiedWitness {
    Crown { sigma: Vec<String>, rho: Vec<String> },
    Diagram { kind: String, diagram: DiagramSpec },
}

impl Certificate {
    pub fn new(host: &RayCategory, w: &Witness) -> Self {
        let witness = match w {
            Witness::Crown(c) => CertifiedWitness::Crown {
                sigma: c.sigma.iter().map(|&m| host.rep_path(m).to_string()).collect(),
                rho: c.rho.iter().map(|&m| host.rep_path(m).to_string()).collect(),
            },
            Witness::Diagram { kind, functor } => CertifiedWitness::Diagram {
                kind: kind.to_string(),
                diagram: functor.to_spec(host),
            },
        };
        Certificate {
            host: host.presentation().clone(),
            witness,
        }
    }

    /// Rebuilds the host and re-checks the witness from scratch.
    pub fn verify(&self, cap: usize) -> std::result::Result<(), String> {
        let host = RayCategory::build(&self.host, cap).map_err(|e| e.to_string())?;
        match &self.witness {
            CertifiedWitness::Crown { sigma, rho } => {
                let resolve = |paths: &[String]| -> std::result::Result<Vec<MorId>, String> {
                    paths
                        .iter()
                        .map(|s| {
                            let path = PathExpr::parse(s).map_err(|e| e.to_string())?;
                            host.ray_of(&path).map_err(|e| e.to_string())?.class.ok_or_else(|| format!("`{s}` is zero"))
                        })
                        .collect()
                };
                let crown = Crown { sigma: resolve(sigma)?, rho: resolve(rho)? };
                verify_crown(&host, &crown)
            }
            CertifiedWitness::Diagram { diagram, .. } => {
                let f = DiagramFunctor::from_spec(&host, diagram).map_err(|e| e.to_string())?;
                match check_cleaving(&host, &f).map_err(|e| e.to_string())? {
                    CleavingVerdict { ok: true, .. } => Ok(()),
                    CleavingVerdict { violation, .. } => Err(format!("not cleaving: {violation:?}")),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;
    use crate::templates;

    fn host(text: &str) -> RayCategory {
        RayCategory::build(&parse_presentation(text).unwrap(), 32).unwrap()
    }

    fn single_arrow() -> Presentation {
        parse_presentation("category shape\npoints s t\narrow e : s -> t\n").unwrap()
    }

    #[test]
    fn single_arrow_cases() {
        let p = RayCategory::build(&templates::dumbbell(3, 3).unwrap(), 32).unwrap();
        let m = p.arrow_mor(p.arrow_index("m").unwrap());
        let f = DiagramFunctor { shape: single_arrow(), objects: vec![0, 1], arrows: vec![m] };
        assert!(check_cleaving(&p, &f).unwrap().ok);

        let id = p.identity(0);
        let f = DiagramFunctor { shape: single_arrow(), objects: vec![0, 0], arrows: vec![id] };
        let v = check_cleaving(&p, &f).unwrap();
        assert_eq!(v.violation.unwrap().condition, 'b');
    }

    #[test]
    fn wrong_endpoints_are_errors() {
        let p = RayCategory::build(&templates::dumbbell(3, 3).unwrap(), 32).unwrap();
        let l = p.arrow_mor(p.arrow_index("l").unwrap());
        let f = DiagramFunctor { shape: single_arrow(), objects: vec![0, 1], arrows: vec![l] };
        assert!(matches!(check_cleaving(&p, &f), Err(Error::NotFunctorial(_))));
    }

    #[test]
    fn four_subspace_star() {
        let h = host("points c p1 p2 p3 p4\narrow a1 : p1 -> c\narrow a2 : p2 -> c\narrow a3 : p3 -> c\narrow a4 : p4 -> c\n");
        let shape = parse_presentation("category star\npoints o s1 s2 s3 s4\narrow e1 : s1 -> o\narrow e2 : s2 -> o\narrow e3 : s3 -> o\narrow e4 : s4 -> o\n").unwrap();
        let f = DiagramFunctor { shape, objects: vec![0, 1, 2, 3, 4], arrows: (0..4).map(|a| h.arrow_mor(a)).collect() };
        assert!(check_cleaving(&h, &f).unwrap().ok);
    }

    #[test]
    fn factorization_is_caught() {
        // e2 is sent to rho e1 = F(e1) followed by rho: condition d fails
        let p = RayCategory::build(&templates::dumbbell(3, 3).unwrap(), 32).unwrap();
        let shape = parse_presentation("category v\npoints o s1 s2\narrow e1 : s1 -> o\narrow e2 : s2 -> o\n").unwrap();
        let m = p.ray_of(&PathExpr::parse("m").unwrap()).unwrap().class.unwrap();
        let rm = p.ray_of(&PathExpr::parse("r m").unwrap()).unwrap().class.unwrap();
        let f = DiagramFunctor { shape, objects: vec![1, 0, 0], arrows: vec![m, rm] };
        let v = check_cleaving(&p, &f).unwrap();
        let viol = v.violation.unwrap();
        assert_eq!(viol.condition, 'd');
        // the witness re-checks: mu = F(alpha) xi
        let (mu, fa, xi) = (viol.host[0].class, viol.host[1].class, viol.host[2].class);
        assert_eq!(p.comp_opt(fa, xi), mu);
    }

    #[test]
    fn shapes_with_cycles_are_rejected() {
        let shape = parse_presentation("points s t\narrow e : s -> t\narrow f : t -> s\n").unwrap();
        assert!(matches!(ShapeCat::new(&shape), Err(Error::InvalidShape(_))));
        let shape = parse_presentation("points s m t\narrow e : s -> m\narrow f : m -> t\narrow g : s -> t\n").unwrap();
        assert!(matches!(ShapeCat::new(&shape), Err(Error::InvalidShape(_))));
    }

    #[test]
    fn spec_round_trip() {
        let p = RayCategory::build(&templates::diamond(), 32).unwrap();
        let shape = single_arrow();
        let ag = p.ray_of(&PathExpr::parse("a g").unwrap()).unwrap().class.unwrap();
        let f = DiagramFunctor { shape, objects: vec![0, 1], arrows: vec![ag] };
        let spec = f.to_spec(&p);
        assert_eq!(spec.arrows["e"], "a g");
        let back = DiagramFunctor::from_spec(&p, &spec).unwrap();
        assert_eq!(back.arrows, f.arrows);
    }
}
