use serde::{Deserialize, Serialize};

use super::{MorId, RayCategory, RayMorphism};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail {
        /// The morphisms violating the axiom, in the order the axiom names them.
        witness: Vec<RayMorphism>,
        detail: String,
    },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

/// Which action makes a hom set cyclic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// Generated under `End(target)` acting from the left.
    Left,
    /// Generated under `End(source)` acting from the right.
    Right,
    Both,
    /// The hom set is zero.
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub a: Verdict,
    pub b: Verdict,
    pub c: Verdict,
    pub d: Verdict,
    pub e: Verdict,
    pub f: Verdict,
    /// `(x, y, side)` for every pair where axiom e holds.
    pub e_sides: Vec<(usize, usize, Side)>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts().iter().all(|(_, v)| v.passed())
    }

    pub fn verdicts(&self) -> [(char, &Verdict); 6] {
        [
            ('a', &self.a),
            ('b', &self.b),
            ('c', &self.c),
            ('d', &self.d),
            ('e', &self.e),
            ('f', &self.f),
        ]
    }

    pub fn side(&self, x: usize, y: usize) -> Option<Side> {
        self.e_sides
            .iter()
            .find(|(a, b, _)| *a == x && *b == y)
            .map(|t| t.2)
    }
}

pub fn verify_axioms(p: &RayCategory) -> AxiomReport {
    let mut e_sides = Vec::new();
    AxiomReport {
        a: Verdict::Pass,
        b: check_b(p),
        c: Verdict::Pass,
        d: check_d(p),
        e: check_e(p, &mut e_sides),
        f: check_f(p),
        e_sides,
    }
}

fn check_b(p: &RayCategory) -> Verdict {
    let n = p.num_morphisms();
    for h in 0..n {
        for g in 0..n {
            if p.source(h) != p.target(g) {
                continue;
            }
            let hg = p.comp(h, g);
            for f in 0..n {
                if p.source(g) != p.target(f) {
                    continue;
                }
                let left = p.comp_opt(Some(h), p.comp(g, f));
                let right = p.comp_opt(hg, Some(f));
                if left != right {
                    return Verdict::Fail {
                        witness: vec![p.mor(h), p.mor(g), p.mor(f)],
                        detail: "composition is not associative".into(),
                    };
                }
            }
        }
    }
    Verdict::Pass
}

/// Nonzero powers of `s`, stopping at zero; `None` if they cycle.
pub(crate) fn powers(p: &RayCategory, s: MorId) -> Option<Vec<MorId>> {
    let mut out = vec![s];
    let mut cur = s;
    while let Some(next) = p.comp(s, cur) {
        if out.contains(&next) {
            return None;
        }
        out.push(next);
        cur = next;
    }
    Some(out)
}

/// The generator of the radical of `End(x)`, if axiom d holds there.
pub(crate) fn loop_generator(p: &RayCategory, x: usize) -> Result<Option<MorId>, ()> {
    let radical: Vec<MorId> = p.hom(x, x).iter().copied().filter(|&m| !p.is_identity(m)).collect();
    if radical.is_empty() {
        return Ok(None);
    }
    for &s in &radical {
        if let Some(mut pw) = powers(p, s) {
            pw.sort_unstable();
            if pw == radical {
                return Ok(Some(s));
            }
        }
    }
    Err(())
}

fn check_d(p: &RayCategory) -> Verdict {
    for x in 0..p.num_points() {
        if loop_generator(p, x).is_err() {
            return Verdict::Fail {
                witness: p.hom(x, x).iter().map(|&m| p.mor(m)).collect(),
                detail: format!("End({}) is not the powers of one morphism", p.points()[x]),
            };
        }
    }
    Verdict::Pass
}

/// A generator of `hom(x, y)` under the left action of `End(y)`.
pub(crate) fn left_generator(p: &RayCategory, x: usize, y: usize) -> Option<MorId> {
    let hom = p.hom(x, y);
    hom.iter().copied().find(|&g| {
        let mut orbit: Vec<MorId> = p.hom(y, y).iter().filter_map(|&r| p.comp(r, g)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        orbit == hom
    })
}

/// A generator of `hom(x, y)` under the right action of `End(x)`.
pub(crate) fn right_generator(p: &RayCategory, x: usize, y: usize) -> Option<MorId> {
    let hom = p.hom(x, y);
    hom.iter().copied().find(|&g| {
        let mut orbit: Vec<MorId> = p.hom(x, x).iter().filter_map(|&s| p.comp(g, s)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        orbit == hom
    })
}

fn check_e(p: &RayCategory, sides: &mut Vec<(usize, usize, Side)>) -> Verdict {
    let mut failure = None;
    for x in 0..p.num_points() {
        for y in 0..p.num_points() {
            if p.hom(x, y).is_empty() {
                sides.push((x, y, Side::Empty));
                continue;
            }
            let side = match (left_generator(p, x, y), right_generator(p, x, y)) {
                (Some(_), Some(_)) => Side::Both,
                (Some(_), None) => Side::Left,
                (None, Some(_)) => Side::Right,
                (None, None) => {
                    failure.get_or_insert_with(|| Verdict::Fail {
                        witness: p.hom(x, y).iter().map(|&m| p.mor(m)).collect(),
                        detail: format!(
                            "hom({}, {}) is cyclic under neither endomorphism action",
                            p.points()[x],
                            p.points()[y]
                        ),
                    });
                    continue;
                }
            };
            sides.push((x, y, side));
        }
    }
    failure.unwrap_or(Verdict::Pass)
}

fn check_f(p: &RayCategory) -> Verdict {
    let n = p.num_morphisms();
    for mu in 0..n {
        for nu in mu + 1..n {
            let (x, y) = (p.source(mu), p.target(mu));
            if p.source(nu) != x || p.target(nu) != y {
                continue;
            }
            for w in 0..p.num_points() {
                for &kappa in p.hom(w, x) {
                    let (mk, nk) = (p.comp(mu, kappa), p.comp(nu, kappa));
                    for z in 0..p.num_points() {
                        for &lambda in p.hom(y, z) {
                            let a = p.comp_opt(Some(lambda), mk);
                            if a.is_some() && a == p.comp_opt(Some(lambda), nk) {
                                return Verdict::Fail {
                                    witness: vec![p.mor(lambda), p.mor(mu), p.mor(nu), p.mor(kappa)],
                                    detail: "cancellation fails".into(),
                                };
                            }
                        }
                    }
                }
            }
        }
    }
    Verdict::Pass
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{parse_presentation, PathExpr};

    fn build(text: &str) -> RayCategory {
        RayCategory::build(&parse_presentation(text).unwrap(), 16).unwrap()
    }

    #[test]
    fn dumbbell_passes() {
        let p = build(super::super::tests::DUMBBELL);
        let r = verify_axioms(&p);
        assert!(r.all_pass(), "{r:?}");
        assert_eq!(r.side(0, 1), Some(Side::Both));
    }

    #[test]
    fn parallel_arrows_fail_e() {
        let p = build("points x y\narrow a : x -> y\narrow b : x -> y\n");
        let r = verify_axioms(&p);
        assert!(!r.e.passed());
        assert!(r.d.passed() && r.f.passed());
    }

    #[test]
    fn cancellation_witness() {
        let p = build("points x y\narrow s : x -> x\narrow a : x -> y\narrow b : x -> y\nrel s s = 0\nrel a s = b s\n");
        let r = verify_axioms(&p);
        let Verdict::Fail { witness, .. } = &r.f else { panic!("{r:?}") };
        let name = |m: &RayMorphism| p.display(*m);
        let got: Vec<String> = witness.iter().map(name).collect();
        assert_eq!(got, ["id_y", "a", "b", "s"]);
        let ray = |s: &str| p.ray_of(&PathExpr::parse(s).unwrap()).unwrap();
        assert_eq!(ray("a s"), ray("b s"));
        assert!(!ray("a s").is_zero());
    }

    #[test]
    fn two_loops_fail_d() {
        let p = build("points x\narrow a : x -> x\narrow b : x -> x\nrel a a = 0\nrel b b = 0\nrel a b = 0\nrel b a = 0\n");
        assert!(!verify_axioms(&p).d.passed());
    }
}
