//! Transit classes, radical generators and supports.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raycore::axioms::{left_generator, loop_generator, right_generator};
use crate::raycore::{MorId, RayCategory, RayMorphism};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transit {
    Bitransit,
    TransitOnly,
    CotransitOnly,
}

impl Transit {
    pub fn is_transit(self) -> bool {
        matches!(self, Transit::Bitransit | Transit::TransitOnly)
    }

    pub fn is_cotransit(self) -> bool {
        matches!(self, Transit::Bitransit | Transit::CotransitOnly)
    }

    pub fn dual(self) -> Self {
        match self {
            Transit::Bitransit => Transit::Bitransit,
            Transit::TransitOnly => Transit::CotransitOnly,
            Transit::CotransitOnly => Transit::TransitOnly,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitClass {
    pub kind: Transit,
    pub deep: bool,
}

fn nonzero(m: RayMorphism) -> Result<MorId> {
    m.class.ok_or(Error::ZeroMorphism)
}

/// `m ∘ End(source) ⊆ End(target) ∘ m`.
pub fn is_transit(p: &RayCategory, m: MorId) -> bool {
    let (x, y) = (p.source(m), p.target(m));
    let orbit: Vec<MorId> = p.hom(y, y).iter().filter_map(|&r| p.comp(r, m)).collect();
    p.hom(x, x)
        .iter()
        .filter_map(|&s| p.comp(m, s))
        .all(|ms| orbit.contains(&ms))
}

/// `End(target) ∘ m ⊆ m ∘ End(source)`.
pub fn is_cotransit(p: &RayCategory, m: MorId) -> bool {
    let (x, y) = (p.source(m), p.target(m));
    let orbit: Vec<MorId> = p.hom(x, x).iter().filter_map(|&s| p.comp(m, s)).collect();
    p.hom(y, y)
        .iter()
        .filter_map(|&r| p.comp(r, m))
        .all(|rm| orbit.contains(&rm))
}

/// Annihilated by the radical generators at both ends; identities never are.
pub fn is_deep(p: &RayCategory, m: MorId) -> Result<bool> {
    if p.is_identity(m) {
        return Ok(false);
    }
    let below = pi_loop_id(p, p.source(m))?;
    let above = pi_loop_id(p, p.target(m))?;
    Ok(below.map_or(true, |s| p.comp(m, s).is_none()) && above.map_or(true, |r| p.comp(r, m).is_none()))
}

pub fn transit_class(p: &RayCategory, m: RayMorphism) -> Result<TransitClass> {
    let id = nonzero(m)?;
    let kind = match (is_transit(p, id), is_cotransit(p, id)) {
        (true, true) => Transit::Bitransit,
        (true, false) => Transit::TransitOnly,
        (false, true) => Transit::CotransitOnly,
        (false, false) => {
            return Err(Error::AxiomViolation {
                axiom: 'e',
                detail: format!("{} is neither transit nor cotransit", p.display_id(id)),
            })
        }
    };
    Ok(TransitClass {
        kind,
        deep: is_deep(p, id)?,
    })
}

pub(crate) fn pi_loop_id(p: &RayCategory, x: usize) -> Result<Option<MorId>> {
    loop_generator(p, x).map_err(|_| Error::AxiomViolation {
        axiom: 'd',
        detail: format!("End({}) is not generated by one morphism", p.points()[x]),
    })
}

/// The generator of the radical of `End(x)`.
pub fn pi_loop(p: &RayCategory, x: usize) -> Result<Option<RayMorphism>> {
    Ok(pi_loop_id(p, x)?.map(|m| p.mor(m)))
}

pub(crate) fn pi_hom_id(p: &RayCategory, x: usize, y: usize) -> Result<Option<MorId>> {
    if x == y {
        return pi_loop_id(p, x);
    }
    if p.hom(x, y).is_empty() {
        return Ok(None);
    }
    left_generator(p, x, y)
        .or_else(|| right_generator(p, x, y))
        .map(Some)
        .ok_or_else(|| Error::AxiomViolation {
            axiom: 'e',
            detail: format!("hom({}, {}) is not cyclic", p.points()[x], p.points()[y]),
        })
}

/// Generator of `hom(x, y)`, preferring the left action; `pi_loop` when `x == y`.
pub fn pi_hom(p: &RayCategory, x: usize, y: usize) -> Result<Option<RayMorphism>> {
    Ok(pi_hom_id(p, x, y)?.map(|m| p.mor(m)))
}

/// Projective support `{y : hom(x,y) ≠ 0}` and injective support `{z : hom(z,x) ≠ 0}`.
pub fn supports(p: &RayCategory, x: usize) -> (Vec<usize>, Vec<usize>) {
    let n = p.num_points();
    let proj = (0..n).filter(|&y| !p.hom(x, y).is_empty()).collect();
    let inj = (0..n).filter(|&z| !p.hom(z, x).is_empty()).collect();
    (proj, inj)
}

/// Some `ξ` with `m = ξ ∘ a`.
pub fn factor_after(p: &RayCategory, m: MorId, a: MorId) -> Option<MorId> {
    if p.source(m) != p.source(a) {
        return None;
    }
    p.hom(p.target(a), p.target(m))
        .iter()
        .copied()
        .find(|&xi| p.comp(xi, a) == Some(m))
}

/// Some `ξ` with `m = a ∘ ξ`.
pub fn factor_before(p: &RayCategory, m: MorId, a: MorId) -> Option<MorId> {
    if p.target(m) != p.target(a) {
        return None;
    }
    p.hom(p.source(m), p.source(a))
        .iter()
        .copied()
        .find(|&xi| p.comp(a, xi) == Some(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{parse_presentation, PathExpr};
    use crate::templates;

    fn ray(p: &RayCategory, s: &str) -> RayMorphism {
        p.ray_of(&PathExpr::parse(s).unwrap()).unwrap()
    }

    fn db() -> RayCategory {
        RayCategory::build(&templates::dumbbell(3, 3).unwrap(), 32).unwrap()
    }

    fn diamond() -> RayCategory {
        RayCategory::build(&templates::diamond(), 32).unwrap()
    }

    #[test]
    fn diamond_generators() {
        let p = diamond();
        let (x, y) = (p.point_index("x").unwrap(), p.point_index("y").unwrap());
        assert_eq!(pi_hom(&p, x, y).unwrap(), Some(ray(&p, "a g")));
        assert_eq!(transit_class(&p, ray(&p, "a g")).unwrap().kind, Transit::Bitransit);
        assert_eq!(pi_loop(&p, x).unwrap(), Some(ray(&p, "l g")));
        assert!(ray(&p, "l g l g").is_zero());
        let (proj, _) = supports(&p, x);
        assert_eq!(proj.len(), 4);
    }

    #[test]
    fn dumbbell_generators() {
        let p = db();
        assert_eq!(pi_hom(&p, 0, 1).unwrap(), Some(ray(&p, "m")));
        assert_eq!(pi_hom(&p, 1, 0).unwrap(), None);
        let deep = transit_class(&p, ray(&p, "r r m")).unwrap();
        assert!(deep.deep);
        assert!(!transit_class(&p, ray(&p, "r m")).unwrap().deep);
        assert_eq!(supports(&p, 0).0, vec![0, 1]);
    }

    #[test]
    fn identities_are_bitransit_not_deep() {
        for p in [db(), diamond(), RayCategory::build(&parse_presentation("points x\n").unwrap(), 4).unwrap()] {
            for x in 0..p.num_points() {
                let c = transit_class(&p, p.mor(p.identity(x))).unwrap();
                assert_eq!(c, TransitClass { kind: Transit::Bitransit, deep: false });
            }
        }
    }

    #[test]
    fn penny_farthing_loop() {
        let p = RayCategory::build(&templates::penny_farthing(2, &[1]).unwrap(), 32).unwrap();
        assert_eq!(pi_loop(&p, 0).unwrap(), Some(ray(&p, "p")));
    }

    #[test]
    fn zero_is_rejected() {
        let p = db();
        assert_eq!(transit_class(&p, p.zero(0, 1)), Err(Error::ZeroMorphism));
    }

    #[test]
    fn factorizations() {
        let p = db();
        let rm = ray(&p, "r m").class.unwrap();
        let m = p.arrow_mor(p.arrow_index("m").unwrap());
        let l = p.arrow_mor(p.arrow_index("l").unwrap());
        assert_eq!(factor_after(&p, rm, l), Some(m));
        assert!(factor_before(&p, rm, m).is_some());
        assert_eq!(factor_after(&p, m, l), None);
    }
}
