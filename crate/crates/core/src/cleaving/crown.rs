//! Crowns: periodic cleaving zigzags.

use serde::{Deserialize, Serialize};

use super::DiagramFunctor;
use crate::morphology::{factor_after, factor_before};
use crate::presentation::{ArrowDecl, Presentation, Quiver};
use crate::raycore::{MorId, RayCategory};

/// `(σ_1, ρ_1, …, σ_n, ρ_n)`: `σ_i`, `ρ_i` share a domain and `ρ_i`, `σ_{i+1}`
/// share a codomain, indices mod n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crown {
    pub sigma: Vec<MorId>,
    pub rho: Vec<MorId>,
}

impl Crown {
    pub fn period(&self) -> usize {
        self.sigma.len()
    }
}

fn candidates(p: &RayCategory) -> Vec<MorId> {
    (0..p.num_morphisms()).filter(|&m| !p.is_identity(m)).collect()
}

/// Same domain, and neither is a later factor of the other.
fn dom_ok(p: &RayCategory, s: MorId, r: MorId) -> bool {
    p.source(s) == p.source(r) && factor_after(p, s, r).is_none() && factor_after(p, r, s).is_none()
}

/// Same codomain, and neither is an earlier factor of the other.
fn cod_ok(p: &RayCategory, r: MorId, s: MorId) -> bool {
    p.target(s) == p.target(r) && factor_before(p, r, s).is_none() && factor_before(p, s, r).is_none()
}

/// A crown of least period, at most `max_period`.
pub fn find_crown(p: &RayCategory, max_period: usize) -> Option<Crown> {
    let cands = candidates(p);
    let dom: Vec<Vec<usize>> = cands
        .iter()
        .map(|&s| (0..cands.len()).filter(|&j| dom_ok(p, s, cands[j])).collect())
        .collect();
    let cod: Vec<Vec<usize>> = cands
        .iter()
        .map(|&r| (0..cands.len()).filter(|&j| cod_ok(p, r, cands[j])).collect())
        .collect();
    let k = cands.len();
    for n in 1..=max_period {
        for start in 0..k {
            if dom[start].is_empty() {
                continue;
            }
            // layers[2i] are sigma positions, layers[2i+1] rho positions; parent pointers
            let mut parents: Vec<Vec<Option<usize>>> = Vec::with_capacity(2 * n + 1);
            let mut layer0 = vec![None; k];
            layer0[start] = Some(start);
            parents.push(layer0);
            for step in 0..2 * n {
                let prev = &parents[step];
                let mut next = vec![None; k];
                let rel = if step % 2 == 0 { &dom } else { &cod };
                for i in 0..k {
                    if prev[i].is_none() {
                        continue;
                    }
                    for &j in &rel[i] {
                        if next[j].is_none() {
                            next[j] = Some(i);
                        }
                    }
                }
                parents.push(next);
            }
            if parents[2 * n][start].is_some() {
                let mut seq = vec![start];
                let mut cur = start;
                for step in (1..=2 * n).rev() {
                    cur = parents[step][cur].unwrap();
                    seq.push(cur);
                }
                seq.reverse();
                // seq = s1 r1 s2 r2 ... sn rn s1
                let sigma = (0..n).map(|i| cands[seq[2 * i]]).collect();
                let rho = (0..n).map(|i| cands[seq[2 * i + 1]]).collect();
                return Some(Crown { sigma, rho });
            }
        }
    }
    None
}

/// Checks endpoints and the four non-equations by exhaustive search for ξ.
pub fn verify_crown(p: &RayCategory, c: &Crown) -> Result<(), String> {
    let n = c.period();
    if n == 0 || c.rho.len() != n {
        return Err("a crown needs equally many σ and ρ, at least one".into());
    }
    let all: Vec<MorId> = (0..p.num_morphisms()).collect();
    for i in 0..n {
        let (s, r, s1) = (c.sigma[i], c.rho[i], c.sigma[(i + 1) % n]);
        if p.source(s) != p.source(r) {
            return Err(format!("σ{} and ρ{} have different domains", i + 1, i + 1));
        }
        if p.target(r) != p.target(s1) {
            return Err(format!("ρ{} and σ{} have different codomains", i + 1, (i + 1) % n + 1));
        }
        let ends = |m: MorId| (p.source(m), p.target(m));
        for &xi in &all {
            let (a, b) = ends(xi);
            if (a, b) == (p.target(r), p.target(s)) && p.comp(xi, r) == Some(s) {
                return Err(format!("σ{0} = ξ ρ{0} with ξ = {1}", i + 1, p.display_id(xi)));
            }
            if (a, b) == (p.target(s), p.target(r)) && p.comp(xi, s) == Some(r) {
                return Err(format!("ξ σ{0} = ρ{0} with ξ = {1}", i + 1, p.display_id(xi)));
            }
            if (a, b) == (p.source(r), p.source(s1)) && p.comp(s1, xi) == Some(r) {
                return Err(format!("σ{} ξ = ρ{} with ξ = {}", (i + 1) % n + 1, i + 1, p.display_id(xi)));
            }
            if (a, b) == (p.source(s1), p.source(r)) && p.comp(r, xi) == Some(s1) {
                return Err(format!("σ{} = ρ{} ξ with ξ = {}", (i + 1) % n + 1, i + 1, p.display_id(xi)));
            }
        }
    }
    Ok(())
}

/// The crown as a functor from the alternating 2n-cycle. Needs period ≥ 2.
pub fn crown_diagram(p: &RayCategory, c: &Crown) -> Option<DiagramFunctor> {
    let n = c.period();
    if n < 2 {
        return None;
    }
    let mut points = Vec::new();
    let mut objects = Vec::new();
    for i in 0..n {
        points.push(format!("a{}", i + 1));
        objects.push(p.source(c.sigma[i]));
    }
    for i in 0..n {
        points.push(format!("b{}", i + 1));
        objects.push(p.target(c.rho[i]));
    }
    let mut arrows = Vec::new();
    let mut images = Vec::new();
    for i in 0..n {
        let prev = (i + n - 1) % n;
        arrows.push(ArrowDecl {
            name: format!("s{}", i + 1),
            source: format!("a{}", i + 1),
            target: format!("b{}", prev + 1),
        });
        images.push(c.sigma[i]);
        arrows.push(ArrowDecl {
            name: format!("r{}", i + 1),
            source: format!("a{}", i + 1),
            target: format!("b{}", i + 1),
        });
        images.push(c.rho[i]);
    }
    let shape = Presentation::new(format!("crown_{n}"), Quiver { points, arrows }, vec![]).ok()?;
    Some(DiagramFunctor { shape, objects, arrows: images })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cleaving::check_cleaving;
    use crate::presentation::parse_presentation;

    fn host(text: &str) -> RayCategory {
        RayCategory::build(&parse_presentation(text).unwrap(), 32).unwrap()
    }

    #[test]
    fn kronecker_has_period_one() {
        let h = host("points x y\narrow a : x -> y\narrow b : x -> y\n");
        let c = find_crown(&h, 4).unwrap();
        assert_eq!(c.period(), 1);
        verify_crown(&h, &c).unwrap();
    }

    #[test]
    fn square_of_four_points() {
        let h = host("points x1 x2 y1 y2\narrow a : x1 -> y1\narrow b : x1 -> y2\narrow c : x2 -> y1\narrow d : x2 -> y2\n");
        let c = find_crown(&h, 4).unwrap();
        assert_eq!(c.period(), 2);
        verify_crown(&h, &c).unwrap();
        let f = crown_diagram(&h, &c).unwrap();
        assert!(check_cleaving(&h, &f).unwrap().ok);
    }

    #[test]
    fn linear_has_none() {
        let h = host("points x y z\narrow a : x -> y\narrow b : y -> z\n");
        assert!(find_crown(&h, 4).is_none());
    }

    #[test]
    fn factoring_crown_is_rejected() {
        let h = host("points x y z\narrow a : x -> y\narrow b : y -> z\n");
        let ba = h.ray_of(&crate::presentation::PathExpr::parse("b a").unwrap()).unwrap().class.unwrap();
        let a = h.arrow_mor(0);
        let c = Crown { sigma: vec![ba], rho: vec![a] };
        assert!(verify_crown(&h, &c).is_err());
    }
}
