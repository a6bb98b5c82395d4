//! Structural constraints around a classified contour.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{role_ids, ContourClassification, Verdict};
use crate::cleaving::{check_cleaving, diagram_composites, diagram_with_induced_zeros};
use crate::contours::Contour;
use crate::error::{Error, Result};
use crate::presentation::{ArrowDecl, Presentation, Quiver};
use crate::raycore::{MorId, RayCategory};
use crate::reductions::frame;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClauseStatus {
    Pass,
    Fail,
    /// The clause's hypothesis does not occur.
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub id: String,
    pub status: ClauseStatus,
    pub detail: String,
    /// Representative paths of the morphisms behind a failure.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborhoodReport {
    pub family: String,
    pub clauses: Vec<Clause>,
    /// Penny-farthings: which of the three situations matched.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub situation: Option<char>,
}

impl NeighborhoodReport {
    pub fn holds(&self) -> bool {
        self.clauses.iter().all(|c| c.status != ClauseStatus::Fail)
    }

    pub fn clause(&self, id: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.id == id)
    }
}

fn clause(id: &str, ok: bool, detail: impl Into<String>, witnesses: Vec<String>) -> Clause {
    Clause {
        id: id.into(),
        status: if ok { ClauseStatus::Pass } else { ClauseStatus::Fail },
        detail: detail.into(),
        witnesses,
    }
}

fn vacuous(id: &str, detail: &str) -> Clause {
    Clause {
        id: id.into(),
        status: ClauseStatus::Vacuous,
        detail: detail.into(),
        witnesses: Vec::new(),
    }
}

struct Ctx<'a> {
    q: &'a RayCategory,
    roles: BTreeMap<String, MorId>,
    points: BTreeMap<String, usize>,
}

impl Ctx<'_> {
    fn role(&self, name: &str) -> MorId {
        self.roles[name]
    }

    fn point(&self, name: &str) -> usize {
        self.points[name]
    }

    fn path(&self, m: MorId) -> String {
        self.q.rep_path(m).to_string()
    }

    fn arrow_name(&self, a: usize) -> String {
        self.q.arrows()[a].name.clone()
    }

    /// Arrows that are not one of the given roles.
    fn extra_arrows(&self, known: &[&str], keep: impl Fn(usize, usize) -> bool) -> Vec<usize> {
        let known: BTreeSet<MorId> = known.iter().map(|r| self.role(r)).collect();
        (0..self.q.arrows().len())
            .filter(|&a| {
                let ar = &self.q.arrows()[a];
                keep(ar.source, ar.target) && !known.contains(&self.q.arrow_mor(a))
            })
            .collect()
    }

    fn power(&self, m: MorId, k: usize) -> Option<MorId> {
        let mut cur = Some(m);
        for _ in 1..k {
            cur = self.q.comp_opt(Some(m), cur);
        }
        cur
    }
}

/// Evaluates the clauses for the verdict's family on the frame category.
pub fn neighborhood_constraints(p: &RayCategory, c: &Contour, cls: &ContourClassification) -> Result<NeighborhoodReport> {
    if !cls.verdict.is_family() {
        return Err(Error::Precondition(format!("`{}` is not a family verdict", cls.verdict.family_name())));
    }
    let f = frame(p, c)?;
    let q = &f.category;
    let points = cls
        .points
        .iter()
        .map(|(k, name)| Ok((k.clone(), q.point_index(name)?)))
        .collect::<Result<_>>()?;
    let ctx = Ctx {
        q,
        roles: role_ids(q, cls)?,
        points,
    };
    let (clauses, situation) = match &cls.verdict {
        Verdict::DumbBell { .. } => (dumbbell(&ctx), None),
        Verdict::PennyFarthing { n, .. } => penny_farthing(&ctx, *n),
        Verdict::Diamond => (diamond(&ctx)?, None),
        _ => unreachable!(),
    };
    Ok(NeighborhoodReport {
        family: cls.verdict.family_name().into(),
        clauses,
        situation,
    })
}

fn dumbbell(ctx: &Ctx) -> Vec<Clause> {
    let q = ctx.q;
    let (x, y) = (ctx.point("x"), ctx.point("y"));
    let (lambda, mu, rho) = (ctx.role("lambda"), ctx.role("mu"), ctx.role("rho"));
    let names = |arrows: &[usize]| arrows.iter().map(|&a| ctx.arrow_name(a)).collect::<Vec<_>>();
    let mut out = Vec::new();

    let into_y = ctx.extra_arrows(&["mu", "rho"], |_, t| t == y);
    out.push(clause("db.only_mu_rho_into_y", into_y.is_empty(), "arrows ending in y other than μ and ρ", names(&into_y)));

    let taus = ctx.extra_arrows(&["rho"], |s, _| s == y);
    if taus.is_empty() {
        for id in ["db.tau_only_extra_out_of_y", "db.only_lambda_mu_at_x", "db.cubes_vanish", "db.tau_mu_isolates_target"] {
            out.push(vacuous(id, "no arrow leaves y besides ρ"));
        }
        return out;
    }
    out.push(clause("db.tau_only_extra_out_of_y", taus.len() == 1, "arrows leaving y other than ρ", names(&taus)));

    let at_x = ctx.extra_arrows(&["lambda", "mu"], |s, t| s == x || t == x);
    out.push(clause("db.only_lambda_mu_at_x", at_x.is_empty(), "arrows at x other than λ and μ", names(&at_x)));

    let cubes: Vec<String> = [lambda, rho].iter().filter_map(|&m| ctx.power(m, 3)).map(|m| ctx.path(m)).collect();
    out.push(clause("db.cubes_vanish", cubes.is_empty(), "λ³ = 0 and ρ³ = 0", cubes));

    let mut hits = Vec::new();
    let mut any = false;
    for &tau in &taus {
        let tm = q.arrow_mor(tau);
        if q.comp(tm, mu).is_none() {
            continue;
        }
        any = true;
        let z = q.arrows()[tau].target;
        for a in 0..q.arrows().len() {
            let ar = &q.arrows()[a];
            if ar.target == z && a != tau {
                hits.push(ctx.arrow_name(a));
            }
            if ar.source == z {
                if let Some(m) = q.comp(q.arrow_mor(a), tm) {
                    hits.push(ctx.path(m));
                }
            }
        }
    }
    out.push(if any {
        clause(
            "db.tau_mu_isolates_target",
            hits.is_empty(),
            "when τμ ≠ 0, τ is the only arrow into its target and ζτ = 0 for every ζ leaving it",
            hits,
        )
    } else {
        vacuous("db.tau_mu_isolates_target", "τμ = 0")
    });
    out
}

fn penny_farthing(ctx: &Ctx, n: usize) -> (Vec<Clause>, Option<char>) {
    let q = ctx.q;
    let x0 = ctx.point("x0");
    let cycle: BTreeSet<usize> = ctx.points.values().copied().collect();
    let outside: Vec<usize> = (0..q.num_points())
        .filter(|&y| !cycle.contains(&y) && !q.hom(x0, y).is_empty())
        .collect();
    if outside.is_empty() {
        return (
            vec![
                vacuous("pf.outside_target_forces_n2", "P(x0, y) = 0 for every y outside C"),
                vacuous("pf.one_of_three_situations", "P(x0, y) = 0 for every y outside C"),
            ],
            None,
        );
    }
    let outside_names: Vec<String> = outside.iter().map(|&y| q.points()[y].clone()).collect();
    let mut out = vec![clause("pf.outside_target_forces_n2", n == 2, format!("n = {n}"), outside_names.clone())];
    if n != 2 {
        out.push(clause("pf.one_of_three_situations", false, "the situations need n = 2", outside_names));
        return (out, None);
    }
    let roles: Vec<String> = std::iter::once("rho".to_string()).chain((1..=n).map(|i| format!("alpha{i}"))).collect();
    let role_refs: Vec<&str> = roles.iter().map(String::as_str).collect();
    let touching = ctx.extra_arrows(&role_refs, |s, t| cycle.contains(&s) || cycle.contains(&t));
    let x1 = ctx.point("x1");
    let (rho, a1, a2) = (ctx.role("rho"), ctx.role("alpha1"), ctx.role("alpha2"));

    let kills_after = |m: MorId, from: usize| (0..q.arrows().len()).all(|d| q.arrows()[d].source != from || q.comp(q.arrow_mor(d), m).is_none());
    let only_into = |b: usize, own: usize| (0..q.arrows().len()).all(|d| q.arrows()[d].target != b || d == own);
    let leaves = |a: usize, from: usize| {
        let ar = &q.arrows()[a];
        (ar.source == from && !cycle.contains(&ar.target)).then_some(ar.target)
    };
    let reach = |set: &[usize]| outside.len() == set.len() && set.iter().all(|b| outside.contains(b));

    let situation_a = |beta: usize| {
        let b = leaves(beta, x0)?;
        let bm = q.arrow_mor(beta);
        (q.comp(bm, rho).is_none() && kills_after(bm, b) && reach(&[b]) && only_into(b, beta)).then_some(())
    };
    let situation_b = |gamma: usize| {
        let c = leaves(gamma, x1)?;
        let gm = q.arrow_mor(gamma);
        let zero = q.comp_opt(q.comp(gm, a1), Some(rho)).is_none();
        (zero && kills_after(gm, c) && reach(&[c]) && only_into(c, gamma)).then_some(())
    };
    let situation_c = |beta: usize, gamma: usize| {
        let (b, c) = (leaves(beta, x0)?, leaves(gamma, x1)?);
        let (bm, gm) = (q.arrow_mor(beta), q.arrow_mor(gamma));
        let ok = b != c
            && q.comp(bm, rho).is_none()
            && q.comp(bm, a2).is_none()
            && kills_after(bm, b)
            && q.comp(gm, a1).is_none()
            && kills_after(gm, c)
            && reach(&[b])
            && only_into(b, beta)
            && only_into(c, gamma);
        ok.then_some(())
    };
    let matched = match touching.as_slice() {
        &[e] if situation_a(e).is_some() => Some('a'),
        &[e] if situation_b(e).is_some() => Some('b'),
        &[e, f] if situation_c(e, f).is_some() || situation_c(f, e).is_some() => Some('c'),
        _ => None,
    };
    let names: Vec<String> = touching.iter().map(|&a| ctx.arrow_name(a)).collect();
    out.push(match matched {
        Some(s) => clause("pf.one_of_three_situations", true, format!("situation {s}"), Vec::new()),
        None => clause("pf.one_of_three_situations", false, "the arrows leaving or entering C fit no situation", names),
    });
    (out, matched)
}

fn diamond(ctx: &Ctx) -> Result<Vec<Clause>> {
    let q = ctx.q;
    let (x, t) = (ctx.point("x"), ctx.point("t"));
    let delta = ctx.role("delta");
    let mut out = Vec::new();

    let after_delta: Vec<String> = (0..q.arrows().len())
        .filter(|&a| q.arrows()[a].source == t && q.arrow_mor(a) != ctx.role("beta") && q.comp(q.arrow_mor(a), delta).is_some())
        .map(|a| ctx.arrow_name(a))
        .collect();
    out.push(clause("diamond.beta_only_after_delta", after_delta.is_empty(), "arrows ε ≠ β with εδ ≠ 0", after_delta));

    let from_x: Vec<String> = ctx.extra_arrows(&["gamma", "delta"], |s, _| s == x).into_iter().map(|a| ctx.arrow_name(a)).collect();
    out.push(clause("diamond.gamma_delta_only_out_of_x", from_x.is_empty(), "arrows leaving x other than γ and δ", from_x));

    let lam = q.paths_of(ctx.role("lambda"));
    let kap = q.paths_of(ctx.role("kappa"));
    let bad: Vec<String> = [&lam, &kap]
        .iter()
        .filter(|ps| ps.len() != 1 || ps[0].len() > 2)
        .flat_map(|ps| ps.iter().map(|p| q.path_expr(p).to_string()))
        .collect();
    out.push(clause(
        "diamond.decompositions_unique_and_short",
        bad.is_empty(),
        format!("λ has {} decompositions, κ has {}; each must be unique of length at most 2", lam.len(), kap.len()),
        bad,
    ));

    match unfolding(ctx, &lam[0], &kap[0]) {
        Ok(f) => {
            let verdict = check_cleaving(q, &f)?;
            out.push(clause(
                "diamond.unfolding_cleaving",
                verdict.ok,
                "the two-diamond unfolding along λ and κ is cleaving",
                verdict.violation.map(|v| v.host.iter().map(|&m| q.display(m)).collect()).unwrap_or_default(),
            ));
            let covered: BTreeSet<MorId> = diagram_composites(q, &f)?
                .into_iter()
                .filter_map(|(a, _, m)| if a == 0 { m } else { None })
                .collect();
            let extra: Vec<String> = (0..q.num_morphisms())
                .filter(|&m| q.source(m) == x && !covered.contains(&m))
                .map(|m| ctx.path(m))
                .collect();
            out.push(clause(
                "diamond.paths_from_x_in_unfolding",
                extra.is_empty(),
                "nonzero morphisms from x outside the unfolding",
                extra,
            ));
        }
        Err(e) => {
            out.push(clause("diamond.unfolding_cleaving", false, format!("the unfolding is not a diagram: {e}"), Vec::new()));
            out.push(vacuous("diamond.paths_from_x_in_unfolding", "no unfolding"));
        }
    }
    Ok(out)
}

/// x, z, t, y, the inner points of λ and κ, then the second copy x2, z2, t2, y2.
fn unfolding(ctx: &Ctx, lam: &[usize], kap: &[usize]) -> Result<crate::cleaving::DiagramFunctor> {
    let q = ctx.q;
    let mut points: Vec<String> = ["x", "z", "t", "y"].map(String::from).to_vec();
    let mut objects = vec![ctx.point("x"), ctx.point("z"), ctx.point("t"), ctx.point("y")];
    let mut arrows = Vec::new();
    let mut images = Vec::new();
    let mut push = |name: String, s: &str, t: &str, m: MorId, arrows: &mut Vec<ArrowDecl>| {
        arrows.push(ArrowDecl {
            name,
            source: s.into(),
            target: t.into(),
        });
        images.push(m);
    };
    for (name, s, t, role) in [("g", "x", "z", "gamma"), ("d", "x", "t", "delta"), ("a", "z", "y", "alpha"), ("b", "t", "y", "beta")] {
        push(name.into(), s, t, ctx.role(role), &mut arrows);
    }
    let mut chain = |tag: &str, from: &str, to: &str, path: &[usize], points: &mut Vec<String>, objects: &mut Vec<usize>, arrows: &mut Vec<ArrowDecl>| {
        // written order: the last arrow is applied first
        let applied: Vec<usize> = path.iter().rev().copied().collect();
        let mut cur = from.to_string();
        for (i, &a) in applied.iter().enumerate() {
            let next = if i + 1 == applied.len() {
                to.to_string()
            } else {
                let name = format!("{tag}{}", i + 1);
                points.push(name.clone());
                objects.push(q.arrows()[a].target);
                name
            };
            push(format!("{tag}_{}", i + 1), &cur, &next, q.arrow_mor(a), arrows);
            cur = next;
        }
    };
    chain("lambda", "z", "x2", lam, &mut points, &mut objects, &mut arrows);
    chain("kappa", "y", "z2", kap, &mut points, &mut objects, &mut arrows);
    for (name, obj) in [("x2", "x"), ("z2", "z"), ("t2", "t"), ("y2", "y")] {
        points.push(name.into());
        objects.push(ctx.point(obj));
    }
    for (name, s, t, role) in [("g2", "x2", "z2", "gamma"), ("d2", "x2", "t2", "delta"), ("a2", "z2", "y2", "alpha"), ("b2", "t2", "y2", "beta")] {
        push(name.into(), s, t, ctx.role(role), &mut arrows);
    }
    let shape = Presentation::new("diamond_unfolding", Quiver { points, arrows }, Vec::new())?;
    diagram_with_induced_zeros(q, shape, objects, images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify_contour;
    use crate::cleaving::DEFAULT_BUDGET;
    use crate::contours::find_contours;
    use crate::presentation::parse_presentation;
    use crate::templates;

    fn report(pres: &Presentation) -> NeighborhoodReport {
        let p = RayCategory::build(pres, 32).unwrap();
        let c = find_contours(&p).unwrap().into_iter().find(|c| c.non_deep).unwrap();
        let cls = classify_contour(&p, &c, DEFAULT_BUDGET).unwrap();
        neighborhood_constraints(&p, &c, &cls).unwrap()
    }

    #[test]
    fn templates_pass() {
        for pres in [templates::dumbbell(3, 4).unwrap(), templates::penny_farthing(2, &[1]).unwrap(), templates::diamond()] {
            let r = report(&pres);
            assert!(r.holds(), "{r:?}");
        }
    }

    #[test]
    fn dumbbell_with_tau_flags_rho_cube() {
        let text = "points x y z\narrow l : x -> x\narrow m : x -> y\narrow r : y -> y\narrow tau : y -> z\n\
                    rel m l = r m\nrel l l l = 0\nrel r r r r = 0\n";
        let r = report(&parse_presentation(text).unwrap());
        let cubes = r.clause("db.cubes_vanish").unwrap();
        assert_eq!(cubes.status, ClauseStatus::Fail);
        assert_eq!(cubes.witnesses, vec!["r r r".to_string()]);
    }

    #[test]
    fn penny_farthing_with_beta_is_situation_a() {
        let text = "points x0 x1 b\narrow p : x0 -> x0\narrow a1 : x0 -> x1\narrow a2 : x1 -> x0\narrow beta : x0 -> b\n\
                    rel a1 a2 = 0\nrel a2 a1 = p p\nrel a1 p a2 = 0\nrel beta p = 0\n";
        let r = report(&parse_presentation(text).unwrap());
        assert_eq!(r.situation, Some('a'), "{r:?}");
    }
}
