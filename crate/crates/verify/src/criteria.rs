//! The acceptance criteria. Each check returns one report line.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::Serialize;

use raycat_core::classify::{check_mild, classify_contour, contour_disjointness, Mildness, Verdict};
use raycat_core::cleaving::{
    classify_graph, find_crown, find_dynkin_cleaving, separated_quiver, Certificate, ComponentClass, DynkinType, Family, Multigraph, SearchOutcome,
    Witness, DEFAULT_BUDGET,
};
use raycat_core::contours::{check_path_uniqueness, find_contours, Contour, Uniqueness};
use raycat_core::reductions::{opposite, opposite_contour};
use raycat_core::templates;
use raycat_core::{verify_axioms, Presentation, RayCategory};

use crate::closure::{naive_closure, Naive, NaiveClosure};
use crate::corpus::{self, Entry, Lock};
use crate::graphs::{connected_multigraphs, edges_form, oracle_class, patterns, Kind, OracleClass};

/// Closure cap for every build.
pub const CAP: usize = corpus::CAP;
/// Search budget for every cleaving search, in assignments.
pub const BUDGET: u64 = DEFAULT_BUDGET;
/// Bounds on the multigraph sweep.
pub const GRAPH_VERTICES: usize = 7;
pub const GRAPH_EDGES: usize = 9;
/// Longest crown period looked for in the corpus sweep.
pub const CROWN_PERIOD: usize = 4;
/// Largest cleaving shape, in points, looked for in the corpus sweep.
pub const SHAPE_NODES: usize = 8;

#[derive(Debug, Clone, Serialize)]
pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "criterion {:02} {mark} {}: {}", self.id, self.name, self.detail)
    }
}

struct Context {
    entries: Vec<Entry>,
    lock: Result<Lock, String>,
    certificates: RefCell<Vec<(String, Certificate)>>,
}

impl Context {
    fn keep(&self, origin: impl Into<String>, c: Certificate) {
        self.certificates.borrow_mut().push((origin.into(), c));
    }

    fn entry(&self, file: &str) -> Result<RayCategory, String> {
        let e = corpus::find(&self.entries, file).ok_or_else(|| format!("{file} missing from the corpus"))?;
        e.build().map_err(|err| format!("{file}: {err}"))
    }
}

fn build(p: &Presentation) -> Result<RayCategory, String> {
    RayCategory::build(p, CAP).map_err(|e| format!("{}: {e}", p.name))
}

fn non_deep(p: &RayCategory) -> Result<Vec<Contour>, String> {
    Ok(find_contours(p).map_err(|e| e.to_string())?.into_iter().filter(|c| c.non_deep).collect())
}

/// Templates with their expected verdicts and contour paths.
fn family() -> Vec<(Presentation, Verdict, &'static str, String)> {
    let mut out = Vec::new();
    for (r, s) in templates::dumbbell_family() {
        out.push((templates::dumbbell(r, s).expect("family member"), Verdict::DumbBell { r, s }, "r m", "m l".to_string()));
    }
    for n in 2..=4 {
        let w = (1..=n).rev().map(|i| format!("a{i}")).collect::<Vec<_>>().join(" ");
        for e in templates::nondecreasing_maps(n) {
            out.push((templates::penny_farthing(n, &e).expect("n >= 2"), Verdict::PennyFarthing { n, e }, "p p", w.clone()));
        }
    }
    out.push((templates::diamond(), Verdict::Diamond, "a g", "b d".to_string()));
    out
}

fn report(id: u8, name: &'static str, failures: &[String], summary: String) -> Criterion {
    let detail = if failures.is_empty() {
        summary
    } else {
        let shown: Vec<&str> = failures.iter().take(4).map(String::as_str).collect();
        let more = failures.len().saturating_sub(shown.len());
        let tail = if more > 0 { format!(" (+{more} more)") } else { String::new() };
        format!("{summary}; {}{tail}", shown.join("; "))
    };
    Criterion { id, name, pass: failures.is_empty(), detail }
}

fn templates_build(_: &Context) -> Criterion {
    let mut tried = 0;
    let mut failures = Vec::new();
    let mut candidates: Vec<(String, Result<Presentation, String>)> = Vec::new();
    for (r, s) in templates::dumbbell_family() {
        candidates.push((format!("dumbbell({r},{s})"), templates::dumbbell(r, s).map_err(|e| e.to_string())));
    }
    for n in 1..=4 {
        for e in templates::nondecreasing_maps(n) {
            candidates.push((format!("penny-farthing({n},{e:?})"), templates::penny_farthing(n, &e).map_err(|e| e.to_string())));
        }
    }
    candidates.push(("diamond".into(), Ok(templates::diamond())));
    for (name, pres) in candidates {
        tried += 1;
        let outcome = pres.and_then(|p| build(&p)).and_then(|p| {
            let report = verify_axioms(&p);
            let failed: String = report.verdicts().iter().filter(|(_, v)| !v.passed()).map(|(c, _)| *c).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(format!("axioms {failed} fail"))
            }
        });
        if let Err(e) = outcome {
            failures.push(format!("{name}: {e}"));
        }
    }
    let ok = tried - failures.len();
    report(1, "templates build and satisfy the axioms", &failures, format!("{ok}/{tried} templates"))
}

fn template_contours(_: &Context) -> Criterion {
    let mut failures = Vec::new();
    let all = family();
    for (pres, _, v, w) in &all {
        let got = build(pres).and_then(|p| non_deep(&p));
        match got {
            Ok(cs) if cs.len() == 1 && cs[0].v.to_string() == *v && cs[0].w.to_string() == *w => {}
            Ok(cs) => failures.push(format!(
                "{}: {:?}",
                pres.name,
                cs.iter().map(|c| format!("({}, {})", c.v, c.w)).collect::<Vec<_>>()
            )),
            Err(e) => failures.push(e),
        }
    }
    report(2, "each template has exactly its one non-deep contour", &failures, format!("{} templates", all.len()))
}

fn classification(ctx: &Context) -> Criterion {
    let mut failures = Vec::new();
    let all = family();
    for (pres, expected, _, _) in &all {
        let run = || -> Result<(), String> {
            let p = build(pres)?;
            let c = non_deep(&p)?.into_iter().next().ok_or("no non-deep contour")?;
            let got = classify_contour(&p, &c, BUDGET).map_err(|e| e.to_string())?.verdict;
            if let Verdict::Refuted { certificate, .. } = &got {
                ctx.keep(format!("{} classify", pres.name), (**certificate).clone());
            }
            if got != *expected {
                return Err(format!("got {}", corpus::verdict_summary(&got)));
            }
            let op = opposite(&p).map_err(|e| e.to_string())?;
            let oc = opposite_contour(&op, &c).map_err(|e| e.to_string())?;
            let dual = classify_contour(&op, &oc, BUDGET).map_err(|e| e.to_string())?.verdict;
            let agrees = match (expected, &dual) {
                (Verdict::DumbBell { r, s }, Verdict::DumbBell { r: r2, s: s2 }) => r == s2 && s == r2,
                // the dual of a penny-farthing keeps n but not e
                (Verdict::PennyFarthing { n, .. }, Verdict::PennyFarthing { n: m, .. }) => n == m,
                (Verdict::Diamond, Verdict::Diamond) => true,
                _ => false,
            };
            if agrees {
                Ok(())
            } else {
                Err(format!("opposite gives {}", corpus::verdict_summary(&dual)))
            }
        };
        if let Err(e) = run() {
            failures.push(format!("{}: {e}", pres.name));
        }
    }
    report(3, "templates classify exactly, and dually in the opposite", &failures, format!("{} templates", all.len()))
}

fn oracle_word(o: &NaiveClosure, path: &raycat_core::PathExpr) -> Option<Vec<usize>> {
    o.word(&path.0.iter().map(String::as_str).collect::<Vec<_>>())
}

fn path_uniqueness(_: &Context) -> Criterion {
    let mut failures = Vec::new();
    let all = family();
    for (pres, _, _, _) in &all {
        let run = || -> Result<(), String> {
            let p = build(pres)?;
            let c = non_deep(&p)?.into_iter().next().ok_or("no non-deep contour")?;
            let Naive::Finite(o) = naive_closure(pres, CAP) else {
                return Err("oracle closure did not finish".into());
            };
            let v = oracle_word(&o, &c.v).ok_or("v not spelled")?;
            let w = oracle_word(&o, &c.w).ok_or("w not spelled")?;
            let class = o.class_of(&v).ok_or("v is zero for the oracle")?;
            let mut members: Vec<&Vec<usize>> = o.class_members(class);
            members.sort();
            let mut expected = vec![&v, &w];
            expected.sort();
            if members != expected {
                return Err(format!("oracle class holds {:?}", members.iter().map(|m| o.spell(m)).collect::<Vec<_>>()));
            }
            match check_path_uniqueness(&p, &c).map_err(|e| e.to_string())? {
                Uniqueness::Pass => Ok(()),
                Uniqueness::Fail { third } => Err(format!("third path {third}")),
            }
        };
        if let Err(e) = run() {
            failures.push(format!("{}: {e}", pres.name));
        }
    }
    report(4, "v and w are the only paths with the contour's ray", &failures, format!("{} templates", all.len()))
}

fn has_component(g: &Multigraph, kind: DynkinType) -> bool {
    classify_graph(g).components.iter().any(|(_, c)| *c == ComponentClass::ExtendedDynkin { kind })
}

fn glued_separated_quivers(ctx: &Context) -> Criterion {
    let mut failures = Vec::new();
    for (file, kind) in [("two_pf_glued.rc", DynkinType::d_ext(5)), ("pf_cycle_glued.rc", DynkinType::a_ext(5))] {
        match ctx.entry(file) {
            Ok(p) if has_component(&separated_quiver(&p), kind) => {}
            Ok(p) => failures.push(format!("{file}: {:?}", classify_graph(&separated_quiver(&p)).components)),
            Err(e) => failures.push(e),
        }
    }
    report(5, "glued penny-farthings separate into ~D5 and ~A5", &failures, "two_pf_glued ~D5, pf_cycle_glued ~A5".into())
}

fn loop_nilpotency(ctx: &Context) -> Criterion {
    let mut failures = Vec::new();
    let (mut files, mut cube_zero) = (0, 0);
    for e in ctx.entries.iter().filter(|e| e.file.starts_with("pennyfarthing_")) {
        files += 1;
        let run = || -> Result<bool, String> {
            let pres = e.presentation.as_ref().map_err(Clone::clone)?;
            let p = e.build().map_err(|err| err.to_string())?;
            let Naive::Finite(o) = naive_closure(pres, CAP) else {
                return Err("oracle closure did not finish".into());
            };
            let power = |k: usize| vec!["p"; k];
            let mut zero = Vec::new();
            for k in [3, 4] {
                let oracle = o.word(&power(k)).ok_or("no loop p")?;
                let oracle_zero = o.class_of(&oracle).is_none();
                let names = power(k);
                let ids: Vec<usize> = names.iter().map(|n| p.arrows().iter().position(|a| a.name == *n).expect("p")).collect();
                let production_zero = p.class_of(&ids).is_none();
                if oracle_zero != production_zero {
                    return Err(format!("p^{k}: oracle zero {oracle_zero}, production zero {production_zero}"));
                }
                zero.push(oracle_zero);
            }
            if !zero[1] {
                return Err("p^4 is nonzero".into());
            }
            Ok(zero[0])
        };
        match run() {
            Ok(true) => cube_zero += 1,
            Ok(false) => {}
            Err(err) => failures.push(format!("{}: {err}", e.file)),
        }
    }
    if files == 0 {
        failures.push("no penny-farthing files".into());
    }
    report(
        6,
        "the loop of every penny-farthing has p^4 = 0",
        &failures,
        format!("{files} files, p^3 = 0 in {cube_zero}, oracle and closure agree"),
    )
}

/// Same nonzero paths, and the same partition of them into morphisms.
fn same_partition(p: &RayCategory, o: &NaiveClosure) -> Result<(), String> {
    let production = p.nonzero_paths();
    if production.len() != o.nonzero.len() {
        return Err(format!("{} nonzero paths, oracle {}", production.len(), o.nonzero.len()));
    }
    let mut forward: BTreeMap<usize, usize> = BTreeMap::new();
    let mut backward: BTreeMap<usize, usize> = BTreeMap::new();
    for (path, m) in &production {
        let expr = p.path_expr(path);
        let w = oracle_word(o, &expr).ok_or_else(|| format!("{expr} not spelled"))?;
        let c = o.class_of(&w).ok_or_else(|| format!("{expr} is zero for the oracle"))?;
        if *forward.entry(*m).or_insert(c) != c || *backward.entry(c).or_insert(*m) != *m {
            return Err(format!("{expr} is grouped differently"));
        }
    }
    Ok(())
}

fn closure_oracle(ctx: &Context) -> Criterion {
    let mut failures = Vec::new();
    let (mut compared, mut infinite) = (0, 0);
    for e in &ctx.entries {
        let Ok(pres) = &e.presentation else {
            failures.push(format!("{}: unparsed", e.file));
            continue;
        };
        match (e.build(), naive_closure(pres, CAP)) {
            (Ok(p), Naive::Finite(o)) => match same_partition(&p, &o) {
                Ok(()) => compared += 1,
                Err(err) => failures.push(format!("{}: {err}", e.file)),
            },
            (Err(err), Naive::NotFinite { .. } | Naive::Budget { .. }) if matches!(err.kind(), raycat_core::Error::NotFinite { .. }) => {
                infinite += 1;
            }
            (Ok(_), other) => failures.push(format!("{}: closure finite, oracle {other:?}", e.file)),
            (Err(err), Naive::Finite(_)) => failures.push(format!("{}: oracle finite, closure {err}", e.file)),
            (Err(err), _) => failures.push(format!("{}: {err}", e.file)),
        }
    }
    report(
        7,
        "closure matches the naive fixpoint on the corpus",
        &failures,
        format!("{compared} partitions equal, {infinite} not finite for both"),
    )
}

fn oracle_kind(k: Kind) -> Family {
    match k {
        Kind::A => Family::A,
        Kind::D => Family::D,
        Kind::E => Family::E,
    }
}

fn graph_classifier(_: &Context) -> Criterion {
    let pats = patterns(GRAPH_VERTICES);
    let graphs = connected_multigraphs(GRAPH_VERTICES, GRAPH_EDGES);
    let mut failures = Vec::new();
    let mut supersets = 0;
    for g in &graphs {
        let edges = g.edges();
        let mg = Multigraph::new(g.n, edges.clone());
        let class = classify_graph(&mg);
        let got = match class.components.as_slice() {
            [(_, c)] => c.clone(),
            other => {
                failures.push(format!("{edges:?}: {} components", other.len()));
                continue;
            }
        };
        let expected = oracle_class(g, &pats);
        let ok = match (&expected, &got) {
            (OracleClass::Dynkin(k, n), ComponentClass::Dynkin { kind }) => *kind == DynkinType { family: oracle_kind(*k), n: *n, extended: false },
            (OracleClass::Extended(k, n), ComponentClass::ExtendedDynkin { kind }) => *kind == DynkinType { family: oracle_kind(*k), n: *n, extended: true },
            (OracleClass::Superset, ComponentClass::SupersetOfExtended { witness }) => {
                supersets += 1;
                let chosen: Vec<(usize, usize)> = witness.edges.iter().map(|&i| edges[i]).collect();
                pats.iter()
                    .find(|(k, n, ext, _)| *ext && oracle_kind(*k) == witness.kind.family && *n == witness.kind.n)
                    .is_some_and(|(_, _, _, h)| edges_form(g, &chosen, h))
            }
            _ => false,
        };
        if !ok {
            failures.push(format!("{edges:?}: oracle {expected:?}, classifier {got:?}"));
        }
    }
    report(
        8,
        "graph classifier matches brute force on small multigraphs",
        &failures,
        format!(
            "{} connected multigraphs (<= {GRAPH_VERTICES} vertices, <= {GRAPH_EDGES} edges), {supersets} superset witnesses checked",
            graphs.len()
        ),
    )
}

fn witness_sweep(ctx: &Context) {
    for e in &ctx.entries {
        let Ok(p) = e.build() else { continue };
        if let Some(c) = find_crown(&p, CROWN_PERIOD) {
            ctx.keep(format!("{} crown", e.file), Certificate::new(&p, &Witness::Crown(c)));
        }
        if let SearchOutcome::Found { witness, .. } = find_dynkin_cleaving(&p, SHAPE_NODES, BUDGET) {
            ctx.keep(format!("{} cleaving", e.file), Certificate::new(&p, &witness));
        }
    }
}

fn certificates(ctx: &Context) -> Criterion {
    witness_sweep(ctx);
    let certs = ctx.certificates.borrow();
    let mut failures = Vec::new();
    let mut kinds: BTreeMap<String, usize> = BTreeMap::new();
    for (origin, c) in certs.iter() {
        *kinds.entry(corpus::witness_kind(c)).or_default() += 1;
        if let Err(e) = c.verify(CAP) {
            failures.push(format!("{origin}: {e}"));
        }
    }
    if certs.is_empty() {
        failures.push("no certificates were produced".into());
    }
    let summary: Vec<String> = kinds.iter().map(|(k, n)| format!("{k} x{n}")).collect();
    report(
        9,
        "every emitted witness re-verifies",
        &failures,
        format!("{} certificates ({})", certs.len(), summary.join(", ")),
    )
}

fn mildness_regressions(ctx: &Context) -> Criterion {
    let mut failures = Vec::new();
    let all = family();
    for (pres, _, _, _) in &all {
        let run = || -> Result<(), String> {
            let p = build(pres)?;
            let c = non_deep(&p)?.into_iter().next().ok_or("no non-deep contour")?;
            match check_mild(&p, &c, BUDGET).map_err(|e| e.to_string())? {
                Mildness::MildConsistent { .. } => Ok(()),
                other => Err(corpus::mildness_summary(&other)),
            }
        };
        if let Err(e) = run() {
            failures.push(format!("{}: {e}", pres.name));
        }
    }
    let mut sink = Vec::new();
    let current = corpus::snapshot(&ctx.entries, BUDGET, &mut sink);
    for (origin, c) in sink {
        ctx.keep(origin, c);
    }
    for file in ["dumbbell_6_6.rc", "diamond_open.rc"] {
        match current.entries.get(file) {
            None => failures.push(format!("{file} missing")),
            Some(entry) => {
                for c in &entry.contours {
                    let family = ["DumbBell", "PennyFarthing", "Diamond"].iter().any(|f| c.verdict.starts_with(f));
                    if family || c.mildness == "MildConsistent" {
                        failures.push(format!("{file}: ({}, {}) gives {} / {}", c.v, c.w, c.verdict, c.mildness));
                    }
                }
            }
        }
    }
    match &ctx.lock {
        Err(e) => failures.push(format!("lockfile: {e}")),
        Ok(lock) => {
            if lock.budget != current.budget {
                failures.push(format!("lockfile budget {} differs from {}", lock.budget, current.budget));
            }
            let files: BTreeSet<&String> = lock.entries.keys().chain(current.entries.keys()).collect();
            for f in files {
                match (lock.entries.get(f), current.entries.get(f)) {
                    (Some(a), Some(b)) if a == b => {}
                    (Some(a), Some(b)) => failures.push(format!("{f}: locked {a:?}, now {b:?}")),
                    (None, _) => failures.push(format!("{f}: not in the lockfile")),
                    (_, None) => failures.push(format!("{f}: locked but missing")),
                }
            }
        }
    }
    report(
        10,
        "templates are mild-consistent and the corpus matches its lockfile",
        &failures,
        format!("{} templates, {} corpus files", all.len(), current.entries.len()),
    )
}

struct Overlap {
    file: &'static str,
    first: (&'static str, &'static str),
    second: (&'static str, &'static str),
    points: &'static [&'static str],
    arrows: &'static [&'static str],
}

const OVERLAPS: [Overlap; 4] = [
    Overlap { file: "two_pf_glued.rc", first: ("p p", "a2 a1"), second: ("p p", "a2' a1'"), points: &["x0"], arrows: &["p"] },
    Overlap { file: "pf_cycle_glued.rc", first: ("p p", "a2 a1"), second: ("p' p'", "a2' a1'"), points: &["x1"], arrows: &[] },
    Overlap { file: "two_db_chained.rc", first: ("r m", "m l"), second: ("r' m'", "m' r"), points: &["y"], arrows: &["r"] },
    Overlap { file: "two_db_apart.rc", first: ("r m", "m l"), second: ("r' m'", "m' l'"), points: &[], arrows: &[] },
];

fn disjointness(ctx: &Context) -> Criterion {
    let mut failures = Vec::new();
    for o in &OVERLAPS {
        let run = || -> Result<(), String> {
            let p = ctx.entry(o.file)?;
            let cs = non_deep(&p)?;
            let pick = |(v, w): (&str, &str)| {
                cs.iter()
                    .find(|c| c.v.to_string() == v && c.w.to_string() == w)
                    .ok_or_else(|| format!("no contour ({v}, {w})"))
            };
            let (a, b) = (pick(o.first)?, pick(o.second)?);
            let r = contour_disjointness(&p, a, b, 6, BUDGET).map_err(|e| e.to_string())?;
            if let Some(c) = r.search.as_ref().and_then(|s| s.certificate.as_ref()) {
                ctx.keep(format!("{} disjointness", o.file), (**c).clone());
            }
            if r.shared_points != o.points || r.shared_arrows != o.arrows {
                return Err(format!("points {:?}, arrows {:?}", r.shared_points, r.shared_arrows));
            }
            Ok(())
        };
        if let Err(e) = run() {
            failures.push(format!("{}: {e}", o.file));
        }
    }
    report(
        11,
        "disjointness reports exactly the glued overlaps",
        &failures,
        format!("{} glued corpora", OVERLAPS.len()),
    )
}

/// Every criterion, in order, against the corpus in `dir`.
pub fn run_all(dir: &Path) -> Vec<Criterion> {
    let ctx = Context {
        entries: corpus::load(dir).unwrap_or_default(),
        lock: corpus::read_lock(dir).map_err(|e| e.to_string()),
        certificates: RefCell::new(Vec::new()),
    };
    let checks: [fn(&Context) -> Criterion; 10] = [
        templates_build,
        template_contours,
        classification,
        path_uniqueness,
        glued_separated_quivers,
        loop_nilpotency,
        closure_oracle,
        graph_classifier,
        mildness_regressions,
        disjointness,
    ];
    let mut out: Vec<Criterion> = checks.iter().map(|f| f(&ctx)).collect();
    // last, so it sees every certificate the others produced
    out.push(certificates(&ctx));
    out.sort_by_key(|c| c.id);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_graphs_agree_with_the_oracle() {
        let pats = patterns(5);
        for g in connected_multigraphs(5, 5) {
            let class = classify_graph(&Multigraph::new(g.n, g.edges()));
            let extended = matches!(class.components[0].1, ComponentClass::ExtendedDynkin { .. });
            assert_eq!(extended, matches!(oracle_class(&g, &pats), OracleClass::Extended(..)), "{g:?}");
        }
    }
}
