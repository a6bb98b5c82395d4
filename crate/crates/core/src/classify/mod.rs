//! Classification of non-deep contours into the three families, with
//! refutation witnesses when the structural steps fail.

mod disjoint;
mod iso;
mod neighborhood;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cleaving::{find_dynkin_cleaving, Certificate, SearchOutcome};
use crate::contours::Contour;
use crate::error::{Error, Result};
use crate::morphology::{factor_before, pi_loop_id};
use crate::presentation::Presentation;
use crate::raycore::{MorId, RayCategory};
use crate::reductions::{decisive_subcats, frame, full_subcategory_map, Frame};
use crate::templates;

pub use disjoint::{contour_disjointness, DisjointnessReport, PairSearch};
pub use iso::{find_isomorphism, Iso};
pub use neighborhood::{neighborhood_constraints, Clause, ClauseStatus, NeighborhoodReport};

/// Largest shape the witness searches try.
pub const SEARCH_NODES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    DumbBell { r: usize, s: usize },
    PennyFarthing { n: usize, e: Vec<usize> },
    Diamond,
    Refuted { certificate: Box<Certificate>, points: Vec<String>, in_quotient: bool },
    Inconclusive { reason: String },
}

impl Verdict {
    pub fn is_family(&self) -> bool {
        matches!(self, Verdict::DumbBell { .. } | Verdict::PennyFarthing { .. } | Verdict::Diamond)
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            Verdict::DumbBell { .. } => "dumb-bell",
            Verdict::PennyFarthing { .. } => "penny-farthing",
            Verdict::Diamond => "diamond",
            Verdict::Refuted { .. } => "refuted",
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }
}

/// A verdict plus, for family verdicts, where the template sits.
///
/// Roles and points are named in the frame category: the opposite category
/// when `dual` is set. Role paths are representative paths there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContourClassification {
    #[serde(flatten)]
    pub verdict: Verdict,
    pub dual: bool,
    /// Why the family steps stopped, when they did.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_step: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub roles: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub points: BTreeMap<String, String>,
    /// Candidate assignments spent on witness search.
    pub assignments: u64,
}

struct Placement {
    roles: BTreeMap<String, MorId>,
    points: BTreeMap<String, usize>,
}

fn nilpotency(p: &RayCategory, x: usize) -> Result<usize> {
    let Some(pi) = pi_loop_id(p, x)? else { return Ok(1) };
    let mut k = 1;
    let mut cur = Some(pi);
    while let Some(m) = cur {
        k += 1;
        cur = p.comp(m, pi);
    }
    Ok(k)
}

/// Matches `P(C)` against a template with the given point assignments, and
/// returns where each template arrow and point lands.
fn place(q: &RayCategory, contour_points: &[usize], template: &Presentation, fixed: &[(&str, usize)], names: &[(&str, &str)]) -> Result<Option<Placement>> {
    let t = RayCategory::build(template, q.cap())?;
    let sub = full_subcategory_map(q, contour_points)?;
    let local = |x: usize| sub.points.iter().position(|&y| y == x);
    let mut pairs = Vec::new();
    for &(name, x) in fixed {
        let (Ok(i), Some(j)) = (t.point_index(name), local(x)) else { return Ok(None) };
        pairs.push((i, j));
    }
    let Some(iso) = find_isomorphism(&t, &sub.category, &pairs) else { return Ok(None) };
    let mut roles = BTreeMap::new();
    for &(arrow, role) in names {
        let i = t.arrow_index(arrow)?;
        roles.insert(role.to_string(), sub.arrows[iso.arrows[i]]);
    }
    let points = t
        .points()
        .iter()
        .enumerate()
        .map(|(i, name)| (name.clone(), sub.points[iso.points[i]]))
        .collect();
    Ok(Some(Placement { roles, points }))
}

/// The family steps. `Err(reason)` when a structural step fails.
fn family(f: &Frame) -> Result<std::result::Result<(Verdict, Placement), String>> {
    let q = &f.category;
    let c = &f.contour;
    let (v, w) = (q.arrow_path(&c.v)?, q.arrow_path(&c.w)?);
    let Some(rho) = pi_loop_id(q, c.y)? else {
        return Ok(Err("End(y) has no radical".into()));
    };
    let alpha = q.arrow_mor(v[0]);
    let beta = q.arrow_mor(w[0]);
    let Some(omega) = factor_before(q, rho, alpha) else {
        let reason = if factor_before(q, rho, beta).is_some() {
            "π(y) factors through β but not through α"
        } else {
            "π(y) factors through neither α nor β"
        };
        return Ok(Err(reason.into()));
    };
    if factor_before(q, rho, beta).is_some() {
        return Ok(Err("π(y) factors through both α and β".into()));
    }
    let points = c.points(q)?;
    if !q.is_identity(omega) {
        let placed = place(
            q,
            &points,
            &templates::diamond(),
            &[("x", c.x), ("y", c.y)],
            &[("g", "gamma"), ("l", "lambda"), ("k", "kappa"), ("a", "alpha"), ("d", "delta"), ("b", "beta")],
        )?;
        return Ok(match placed {
            Some(pl) => Ok((Verdict::Diamond, pl)),
            None => Err("ω is not an identity but P(C) is not a diamond".into()),
        });
    }
    if v.len() < 2 {
        return Ok(Err("v has a single arrow".into()));
    }
    if v[1] == w[0] {
        if c.x == c.y || points.len() != 2 {
            return Ok(Err("dumb-bell case but P(C) does not have exactly the points x and y".into()));
        }
        let (r, s) = (nilpotency(q, c.x)?, nilpotency(q, c.y)?);
        if r < 2 || s < 2 {
            return Ok(Err("dumb-bell case without loops at both ends".into()));
        }
        let placed = place(
            q,
            &points,
            &templates::dumbbell(r, s)?,
            &[("x", c.x), ("y", c.y)],
            &[("l", "lambda"), ("m", "mu"), ("r", "rho")],
        )?;
        return Ok(match placed {
            Some(pl) => Ok((Verdict::DumbBell { r, s }, pl)),
            None => Err(format!("dumb-bell case but P(C) is not the dumb-bell ({r}, {s})")),
        });
    }
    if v[1] == v[0] {
        let n = w.len();
        if c.x != c.y {
            return Ok(Err("penny-farthing case with x ≠ y".into()));
        }
        for e in templates::nondecreasing_maps(n) {
            let Ok(t) = templates::penny_farthing(n, &e) else {
                return Ok(Err(format!("no penny-farthing template with cycle length {n}")));
            };
            let names: Vec<(String, String)> = std::iter::once(("p".to_string(), "rho".to_string()))
                .chain((1..=n).map(|i| (format!("a{i}"), format!("alpha{i}"))))
                .collect();
            let names: Vec<(&str, &str)> = names.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
            if let Some(pl) = place(q, &points, &t, &[("x0", c.x)], &names)? {
                return Ok(Ok((Verdict::PennyFarthing { n, e }, pl)));
            }
        }
        return Ok(Err(format!("penny-farthing case but P(C) matches no template with n = {n}")));
    }
    Ok(Err("ω is an identity but the second arrow of v is neither α nor β".into()))
}

/// The figure-1.1 bounds a family verdict must satisfy.
fn gate(verdict: &Verdict, q: &RayCategory, pl: &Placement) -> std::result::Result<(), String> {
    match verdict {
        Verdict::DumbBell { r, s } => {
            if (*r).min(*s) != 3 || (*r).max(*s) > 5 {
                return Err(format!("dumb-bell ({r}, {s}) outside min = 3, max ≤ 5"));
            }
        }
        Verdict::Diamond => {
            let role = |n: &str| pl.roles[n];
            if q.comp(role("lambda"), role("kappa")).is_some() {
                return Err("λκ ≠ 0".into());
            }
            if q.comp(role("kappa"), role("alpha")) != q.comp(role("gamma"), role("lambda")) {
                return Err("κα ≠ γλ".into());
            }
        }
        _ => {}
    }
    Ok(())
}

pub(crate) struct SearchResult {
    pub hit: Option<(Vec<usize>, Certificate)>,
    pub assignments: u64,
    pub exhausted: bool,
    pub sets: usize,
}

/// Runs the witness search over each point set, as a full subcategory of `base`.
pub(crate) fn search_sets(base: &RayCategory, sets: &[Vec<usize>], budget: u64) -> Result<SearchResult> {
    let mut spent = 0u64;
    let mut exhausted = false;
    for set in sets {
        let sub = full_subcategory_map(base, set)?;
        let left = budget.saturating_sub(spent);
        if left == 0 {
            exhausted = true;
            break;
        }
        match find_dynkin_cleaving(&sub.category, SEARCH_NODES, left) {
            SearchOutcome::Found { witness, assignments } => {
                spent += assignments;
                let cert = Certificate::new(&sub.category, &witness);
                return Ok(SearchResult {
                    hit: Some((set.clone(), cert)),
                    assignments: spent,
                    exhausted: false,
                    sets: sets.len(),
                });
            }
            SearchOutcome::Absent { assignments } => spent += assignments,
            SearchOutcome::BudgetExhausted { assignments } => {
                spent += assignments;
                exhausted = true;
            }
        }
    }
    Ok(SearchResult {
        hit: None,
        assignments: spent,
        exhausted,
        sets: sets.len(),
    })
}

fn names(p: &RayCategory, set: &[usize]) -> Vec<String> {
    set.iter().map(|&x| p.points()[x].clone()).collect()
}

pub fn classify_contour(p: &RayCategory, c: &Contour, budget: u64) -> Result<ContourClassification> {
    if !c.non_deep {
        return Err(Error::Precondition("the contour is deep".into()));
    }
    let f = frame(p, c)?;
    let q = &f.category;
    let failed = match family(&f)? {
        Ok((verdict, pl)) => match gate(&verdict, q, &pl) {
            Ok(()) => {
                let verdict = match verdict {
                    Verdict::DumbBell { r, s } if f.dual => Verdict::DumbBell { r: s, s: r },
                    other => other,
                };
                return Ok(ContourClassification {
                    verdict,
                    dual: f.dual,
                    failed_step: None,
                    roles: pl.roles.iter().map(|(k, &m)| (k.clone(), q.rep_path(m).to_string())).collect(),
                    points: pl.points.iter().map(|(k, &x)| (k.clone(), q.points()[x].clone())).collect(),
                    assignments: 0,
                });
            }
            Err(reason) => reason,
        },
        Err(reason) => reason,
    };
    let (family, base) = decisive_subcats(p, c, 4, None)?;
    let in_quotient = base.num_morphisms() != q.num_morphisms();
    let found = search_sets(&base, &family.sets, budget)?;
    let verdict = match found.hit {
        Some((set, certificate)) => Verdict::Refuted {
            certificate: Box::new(certificate),
            points: names(&base, &set),
            in_quotient,
        },
        None if found.exhausted => Verdict::Inconclusive {
            reason: format!("{failed}; witness search ran out of budget"),
        },
        None => Verdict::Inconclusive {
            reason: format!("{failed}; no witness in {} decisive subcategories", found.sets),
        },
    };
    Ok(ContourClassification {
        verdict,
        dual: f.dual,
        failed_step: Some(failed),
        roles: BTreeMap::new(),
        points: BTreeMap::new(),
        assignments: found.assignments,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mildness")]
pub enum Mildness {
    /// No witness in any decisive subcategory. Not a proof of mildness.
    MildConsistent { subcategories: usize, assignments: u64, budget: u64, max_nodes: usize },
    NotMild { points: Vec<String>, certificate: Box<Certificate>, assignments: u64 },
    Inconclusive { reason: String, assignments: u64 },
}

pub fn check_mild(p: &RayCategory, c: &Contour, budget: u64) -> Result<Mildness> {
    let (family, base) = decisive_subcats(p, c, 4, None)?;
    assert!(!family.sets.is_empty(), "{{x, y}} is always decisive");
    let found = search_sets(&base, &family.sets, budget)?;
    Ok(match found.hit {
        Some((set, certificate)) => Mildness::NotMild {
            points: names(&base, &set),
            certificate: Box::new(certificate),
            assignments: found.assignments,
        },
        None if found.exhausted => Mildness::Inconclusive {
            reason: format!("budget {budget} exhausted"),
            assignments: found.assignments,
        },
        None => Mildness::MildConsistent {
            subcategories: found.sets,
            assignments: found.assignments,
            budget,
            max_nodes: SEARCH_NODES,
        },
    })
}

/// Resolves the stored role paths in the frame category.
pub(crate) fn role_ids(q: &RayCategory, cls: &ContourClassification) -> Result<BTreeMap<String, MorId>> {
    let mut out = BTreeMap::new();
    for (k, path) in &cls.roles {
        let m = q.ray_of(&crate::presentation::PathExpr::parse(path)?)?;
        out.insert(k.clone(), m.class.ok_or(Error::ZeroMorphism)?);
    }
    Ok(out)
}
