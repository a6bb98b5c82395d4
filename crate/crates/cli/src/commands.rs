use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use raycat_core::classify::{check_mild, classify_contour, contour_disjointness, neighborhood_constraints, ClauseStatus, Mildness, Verdict};
use raycat_core::cleaving::{
    check_cleaving, classify_graph, find_crown, find_dynkin_cleaving, separated_quiver, Certificate, ComponentClass, DiagramFunctor,
    DiagramSpec, SearchOutcome, Witness,
};
use raycat_core::contours::{find_contours, Contour};
use raycat_core::morphology::{pi_hom, transit_class, Transit};
use raycat_core::reductions::{decisive_subcats, full_subcategory, quotient_by_ideal, split_point};
use raycat_core::{parse_presentation, verify_axioms, PathExpr, RayCategory, RayMorphism};
use raycat_verify::{corpus, criteria};

use crate::outcome::{Failure, Outcome, Result, Status};
use crate::Command;

pub struct Options {
    pub cap: usize,
    pub budget: u64,
}

pub fn run(cmd: &Command, o: &Options) -> Result<Outcome> {
    match cmd {
        Command::Build { file } => build(&load(file, o)?),
        Command::Morph { file, point, pair } => morph(&load(file, o)?, point.as_deref(), pair.as_deref()),
        Command::Contours { file } => contours(&load(file, o)?),
        Command::Classify { file, contour } => classify(&load(file, o)?, *contour, o),
        Command::CheckMild { file, contour } => mild(&load(file, o)?, *contour, o),
        Command::Disjoint { file, contours, k } => disjoint(&load(file, o)?, contours[0], contours[1], *k, o),
        Command::Neighborhood { file, contour } => neighborhood(&load(file, o)?, *contour, o),
        Command::Quotient { file, kill } => {
            let p = load(file, o)?;
            let m = p.ray_of(&PathExpr(kill.split_whitespace().map(String::from).collect()))?;
            category(&quotient_by_ideal(&p, m)?)
        }
        Command::Split { file, point } => {
            let p = load(file, o)?;
            category(&split_point(&p, p.point_index(point)?)?)
        }
        Command::Sub { file, points } => {
            let p = load(file, o)?;
            let idx = points.iter().map(|x| p.point_index(x)).collect::<raycat_core::Result<Vec<_>>>()?;
            category(&full_subcategory(&p, &idx)?)
        }
        Command::Decisive { file, contour, k } => decisive(&load(file, o)?, *contour, *k),
        Command::Cleave { file, diagram } => cleave(&load(file, o)?, diagram),
        Command::Crown { file, max_period } => crown(&load(file, o)?, *max_period),
        Command::Separate { file } => separate(&load(file, o)?),
        Command::Witness { file, max_nodes } => witness(&load(file, o)?, *max_nodes, o),
        Command::CorpusVerify { dir, write_lock } => corpus_verify(dir.as_deref(), *write_lock, o),
    }
}

fn load(file: &Path, o: &Options) -> Result<RayCategory> {
    let text = fs::read_to_string(file).map_err(|e| Failure::input(format!("cannot read: {e}")))?;
    let pres = parse_presentation(&text)?;
    Ok(RayCategory::build(&pres, o.cap)?)
}

fn show(p: &RayCategory, m: &RayMorphism) -> String {
    p.display(*m)
}

fn build(p: &RayCategory) -> Result<Outcome> {
    #[derive(Serialize)]
    struct Axiom {
        axiom: char,
        pass: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        detail: Option<String>,
        #[serde(skip_serializing_if = "Vec::is_empty")]
        witness: Vec<String>,
    }
    #[derive(Serialize)]
    struct Built {
        category: raycat_core::raycore::CategoryDump,
        axioms: Vec<Axiom>,
    }
    let report = verify_axioms(p);
    let axioms: Vec<Axiom> = report
        .verdicts()
        .iter()
        .map(|(c, v)| match v {
            raycat_core::raycore::Verdict::Pass => Axiom { axiom: *c, pass: true, detail: None, witness: Vec::new() },
            raycat_core::raycore::Verdict::Fail { witness, detail } => Axiom {
                axiom: *c,
                pass: false,
                detail: Some(detail.clone()),
                witness: witness.iter().map(|m| show(p, m)).collect(),
            },
        })
        .collect();
    let dump = p.dump();
    let mut text = dump.to_string();
    for a in &axioms {
        match &a.detail {
            None => writeln!(text, "axiom {}: pass", a.axiom),
            Some(d) => writeln!(text, "axiom {}: FAIL {d} [{}]", a.axiom, a.witness.join(", ")),
        }
        .unwrap();
    }
    let status = if report.all_pass() { Status::Clean } else { Status::Finding };
    Ok(Outcome::new(status, Built { category: dump, axioms }, text))
}

fn category(p: &RayCategory) -> Result<Outcome> {
    let dump = p.dump();
    let text = dump.to_string();
    Ok(Outcome::new(Status::Clean, dump, text))
}

fn morph(p: &RayCategory, point: Option<&str>, pair: Option<&[String]>) -> Result<Outcome> {
    #[derive(Serialize)]
    struct Entry {
        morphism: String,
        kind: Transit,
        deep: bool,
    }
    #[derive(Serialize)]
    struct Hom {
        source: String,
        target: String,
        generator: Option<String>,
        morphisms: Vec<Entry>,
    }
    let pairs: Vec<(usize, usize)> = match (point, pair) {
        (Some(x), _) => {
            let x = p.point_index(x)?;
            vec![(x, x)]
        }
        (None, Some([x, y])) => vec![(p.point_index(x)?, p.point_index(y)?)],
        _ => (0..p.num_points()).flat_map(|x| (0..p.num_points()).map(move |y| (x, y))).collect(),
    };
    let mut homs = Vec::new();
    let mut text = String::new();
    for (x, y) in pairs {
        let ms: Vec<_> = p.hom(x, y).iter().copied().filter(|&m| !p.is_identity(m)).collect();
        if ms.is_empty() && point.is_none() && pair.is_none() {
            continue;
        }
        let generator = pi_hom(p, x, y)?.map(|m| show(p, &m));
        let mut morphisms = Vec::new();
        for m in ms {
            let t = transit_class(p, p.mor(m))?;
            morphisms.push(Entry { morphism: p.display_id(m), kind: t.kind, deep: t.deep });
        }
        let (sx, sy) = (p.points()[x].clone(), p.points()[y].clone());
        writeln!(text, "hom({sx}, {sy}) generated by {}", generator.as_deref().unwrap_or("-")).unwrap();
        for e in &morphisms {
            let kind = serde_json::to_value(e.kind).unwrap();
            writeln!(text, "  {}: {}{}", e.morphism, kind.as_str().unwrap(), if e.deep { ", deep" } else { "" }).unwrap();
        }
        homs.push(Hom { source: sx, target: sy, generator, morphisms });
    }
    Ok(Outcome::new(Status::Clean, homs, text))
}

#[derive(Serialize)]
struct ContourView {
    index: usize,
    x: String,
    y: String,
    v: String,
    w: String,
    non_deep: bool,
}

fn view(p: &RayCategory, i: usize, c: &Contour) -> ContourView {
    ContourView {
        index: i,
        x: p.points()[c.x].clone(),
        y: p.points()[c.y].clone(),
        v: c.v.to_string(),
        w: c.w.to_string(),
        non_deep: c.non_deep,
    }
}

fn contours(p: &RayCategory) -> Result<Outcome> {
    let cs = find_contours(p)?;
    let views: Vec<ContourView> = cs.iter().enumerate().map(|(i, c)| view(p, i, c)).collect();
    let mut text = String::new();
    for v in &views {
        let deep = if v.non_deep { "non-deep" } else { "deep" };
        writeln!(text, "{}: {} -> {}  v = {}  w = {}  ({deep})", v.index, v.x, v.y, v.v, v.w).unwrap();
    }
    Ok(Outcome::new(Status::Clean, views, text))
}

/// The requested contour, or every non-deep one.
fn selected(p: &RayCategory, which: Option<usize>) -> Result<Vec<(usize, Contour)>> {
    let cs = find_contours(p)?;
    match which {
        Some(i) => {
            let c = cs.get(i).ok_or_else(|| Failure::input(format!("no contour {i}; there are {}", cs.len())))?;
            Ok(vec![(i, c.clone())])
        }
        None => Ok(cs.into_iter().enumerate().filter(|(_, c)| c.non_deep).collect()),
    }
}

fn contour(p: &RayCategory, i: usize) -> Result<Contour> {
    Ok(selected(p, Some(i))?.remove(0).1)
}

fn classify(p: &RayCategory, which: Option<usize>, o: &Options) -> Result<Outcome> {
    #[derive(Serialize)]
    struct Item {
        contour: ContourView,
        classification: raycat_core::classify::ContourClassification,
    }
    let mut status = Status::Clean;
    let mut items = Vec::new();
    let mut text = String::new();
    for (i, c) in selected(p, which)? {
        let cls = classify_contour(p, &c, o.budget)?;
        let line = match &cls.verdict {
            Verdict::DumbBell { r, s } => format!("dumb-bell r={r} s={s}"),
            Verdict::PennyFarthing { n, e } => format!("penny-farthing n={n} e={e:?}"),
            Verdict::Diamond => "diamond".to_string(),
            Verdict::Refuted { certificate, points, .. } => {
                status = status.worst(Status::Finding);
                format!("refuted by {} on {{{}}}", corpus::witness_kind(certificate), points.join(", "))
            }
            Verdict::Inconclusive { reason } => {
                let s = if reason.contains("budget") { Status::Incomplete } else { Status::Finding };
                status = status.worst(s);
                format!("inconclusive: {reason}")
            }
        };
        let dual = if cls.dual { " (classified in the opposite)" } else { "" };
        writeln!(text, "contour {i} (v = {}, w = {}): {line}{dual}", c.v, c.w).unwrap();
        items.push(Item { contour: view(p, i, &c), classification: cls });
    }
    if items.is_empty() {
        text.push_str("no non-deep contours\n");
    }
    Ok(Outcome::new(status, items, text))
}

fn mild(p: &RayCategory, which: Option<usize>, o: &Options) -> Result<Outcome> {
    #[derive(Serialize)]
    struct Item {
        contour: ContourView,
        #[serde(flatten)]
        mildness: Mildness,
    }
    let mut status = Status::Clean;
    let mut items = Vec::new();
    let mut text = String::new();
    for (i, c) in selected(p, which)? {
        let m = check_mild(p, &c, o.budget)?;
        let line = match &m {
            Mildness::MildConsistent { subcategories, assignments, .. } => {
                format!("no witness in {subcategories} decisive subcategories ({assignments} assignments)")
            }
            Mildness::NotMild { points, certificate, .. } => {
                status = status.worst(Status::Finding);
                format!("not mild: {} on {{{}}}", corpus::witness_kind(certificate), points.join(", "))
            }
            Mildness::Inconclusive { reason, .. } => {
                status = status.worst(Status::Incomplete);
                format!("inconclusive: {reason}")
            }
        };
        writeln!(text, "contour {i} (v = {}, w = {}): {line}", c.v, c.w).unwrap();
        items.push(Item { contour: view(p, i, &c), mildness: m });
    }
    Ok(Outcome::new(status, items, text))
}

fn disjoint(p: &RayCategory, i: usize, j: usize, k: usize, o: &Options) -> Result<Outcome> {
    let (a, b) = (contour(p, i)?, contour(p, j)?);
    if !a.non_deep || !b.non_deep {
        return Err(Failure::input("both contours must be non-deep"));
    }
    let r = contour_disjointness(p, &a, &b, k, o.budget)?;
    let mut text = format!(
        "contours {i} and {j}, k = {k}: shared points [{}], shared arrows [{}]\n",
        r.shared_points.join(", "),
        r.shared_arrows.join(", ")
    );
    if let Some(s) = &r.search {
        match &s.certificate {
            Some(c) => writeln!(text, "witness {} on {{{}}}", corpus::witness_kind(c), s.points.clone().unwrap_or_default().join(", ")),
            None if s.exhausted => writeln!(text, "search ran out of budget after {} assignments", s.assignments),
            None => writeln!(text, "no witness in {} subcategories", s.subcategories),
        }
        .unwrap();
    }
    let status = if r.holds() { Status::Clean } else { Status::Finding };
    writeln!(text, "{}", if r.holds() { "disjoint" } else { "overlap" }).unwrap();
    Ok(Outcome::new(status, r, text))
}

fn neighborhood(p: &RayCategory, i: usize, o: &Options) -> Result<Outcome> {
    let c = contour(p, i)?;
    let cls = classify_contour(p, &c, o.budget)?;
    if !cls.verdict.is_family() {
        let text = format!("contour {i} is {}, not a family member\n", cls.verdict.family_name());
        return Ok(Outcome::new(Status::Finding, cls, text));
    }
    let r = neighborhood_constraints(p, &c, &cls)?;
    let mut text = format!("contour {i}: {}\n", r.family);
    for cl in &r.clauses {
        let mark = match cl.status {
            ClauseStatus::Pass => "pass",
            ClauseStatus::Fail => "FAIL",
            ClauseStatus::Vacuous => "vacuous",
        };
        write!(text, "  {}: {mark}", cl.id).unwrap();
        if !cl.witnesses.is_empty() {
            write!(text, " [{}]", cl.witnesses.join(", ")).unwrap();
        }
        text.push('\n');
    }
    let status = if r.holds() { Status::Clean } else { Status::Finding };
    Ok(Outcome::new(status, r, text))
}

fn decisive(p: &RayCategory, i: usize, k: usize) -> Result<Outcome> {
    #[derive(Serialize)]
    struct Family {
        dual: bool,
        k: usize,
        support: Vec<String>,
        sets: Vec<Vec<String>>,
    }
    let c = contour(p, i)?;
    let (f, _) = decisive_subcats(p, &c, k, None)?;
    let names = |xs: &[usize]| xs.iter().map(|&x| p.points()[x].clone()).collect::<Vec<_>>();
    let fam = Family { dual: f.dual, k: f.k, support: names(&f.support), sets: f.sets.iter().map(|s| names(s)).collect() };
    let mut text = format!("support {{{}}}{}\n", fam.support.join(", "), if fam.dual { " (opposite)" } else { "" });
    for s in &fam.sets {
        writeln!(text, "  {{{}}}", s.join(", ")).unwrap();
    }
    Ok(Outcome::new(Status::Clean, fam, text))
}

fn cleave(p: &RayCategory, diagram: &Path) -> Result<Outcome> {
    #[derive(Serialize)]
    struct Cleaving {
        ok: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        condition: Option<char>,
        #[serde(skip_serializing_if = "Option::is_none")]
        detail: Option<String>,
        #[serde(skip_serializing_if = "Vec::is_empty")]
        morphisms: Vec<String>,
    }
    let text = fs::read_to_string(diagram).map_err(|e| Failure::input(format!("{}: {e}", diagram.display())))?;
    let spec: DiagramSpec = serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", diagram.display())))?;
    let f = DiagramFunctor::from_spec(p, &spec)?;
    let v = check_cleaving(p, &f)?;
    let out = match &v.violation {
        None => Cleaving { ok: true, condition: None, detail: None, morphisms: Vec::new() },
        Some(x) => Cleaving {
            ok: false,
            condition: Some(x.condition),
            detail: Some(x.detail.clone()),
            morphisms: x.host.iter().map(|m| show(p, m)).collect(),
        },
    };
    let text = match &out.detail {
        None => "cleaving\n".to_string(),
        Some(d) => format!("not cleaving: condition {} fails: {d}\n", out.condition.unwrap()),
    };
    Ok(Outcome::new(if v.ok { Status::Clean } else { Status::Finding }, out, text))
}

fn certificate_text(c: &Certificate) -> String {
    serde_json::to_string_pretty(&c.witness).expect("witness serializes") + "\n"
}

fn crown(p: &RayCategory, max_period: usize) -> Result<Outcome> {
    match find_crown(p, max_period) {
        Some(c) => {
            let cert = Certificate::new(p, &Witness::Crown(c));
            let text = format!("crown of period {}\n{}", cert_period(&cert), certificate_text(&cert));
            Ok(Outcome::new(Status::Finding, cert, text))
        }
        None => Ok(Outcome::new(Status::Clean, serde_json::Value::Null, format!("no crown of period <= {max_period}\n"))),
    }
}

fn cert_period(c: &Certificate) -> usize {
    match &c.witness {
        raycat_core::cleaving::CertifiedWitness::Crown { sigma, .. } => sigma.len(),
        raycat_core::cleaving::CertifiedWitness::Diagram { .. } => 0,
    }
}

fn separate(p: &RayCategory) -> Result<Outcome> {
    #[derive(Serialize)]
    struct Component {
        vertices: Vec<String>,
        class: ComponentClass,
    }
    #[derive(Serialize)]
    struct Separated {
        vertices: Vec<String>,
        edges: Vec<[String; 2]>,
        components: Vec<Component>,
    }
    let g = separated_quiver(p);
    let class = classify_graph(&g);
    let components: Vec<Component> = class
        .components
        .into_iter()
        .map(|(vs, class)| Component { vertices: vs.iter().map(|&v| g.labels[v].clone()).collect(), class })
        .collect();
    let mut text = String::new();
    let mut status = Status::Clean;
    for c in &components {
        let kind = match &c.class {
            ComponentClass::Dynkin { kind } => kind.to_string(),
            ComponentClass::ExtendedDynkin { kind } => {
                status = Status::Finding;
                kind.to_string()
            }
            ComponentClass::SupersetOfExtended { witness } => {
                status = Status::Finding;
                format!("contains {}", witness.kind)
            }
        };
        writeln!(text, "{{{}}}: {kind}", c.vertices.join(", ")).unwrap();
    }
    let out = Separated {
        edges: g.edges.iter().map(|&(a, b)| [g.labels[a].clone(), g.labels[b].clone()]).collect(),
        vertices: g.labels,
        components,
    };
    Ok(Outcome::new(status, out, text))
}

fn witness(p: &RayCategory, max_nodes: usize, o: &Options) -> Result<Outcome> {
    #[derive(Serialize)]
    struct Search {
        outcome: &'static str,
        assignments: u64,
        #[serde(skip_serializing_if = "Option::is_none")]
        certificate: Option<Certificate>,
    }
    let (status, out) = match find_dynkin_cleaving(p, max_nodes, o.budget) {
        SearchOutcome::Found { witness, assignments } => (
            Status::Finding,
            Search { outcome: "found", assignments, certificate: Some(Certificate::new(p, &witness)) },
        ),
        SearchOutcome::Absent { assignments } => (Status::Clean, Search { outcome: "absent", assignments, certificate: None }),
        SearchOutcome::BudgetExhausted { assignments } => (
            Status::Incomplete,
            Search { outcome: "absent_within_budget", assignments, certificate: None },
        ),
    };
    let mut text = match &out.certificate {
        Some(c) => format!("found {} after {} assignments\n", corpus::witness_kind(c), out.assignments),
        None if status == Status::Incomplete => format!("budget {} exhausted without a witness\n", o.budget),
        None => format!("no catalog shape with <= {max_nodes} points cleaves ({} assignments)\n", out.assignments),
    };
    if let Some(c) = &out.certificate {
        text.push_str(&certificate_text(c));
    }
    Ok(Outcome::new(status, out, text))
}

fn corpus_verify(dir: Option<&Path>, write: bool, o: &Options) -> Result<Outcome> {
    let dir = dir.map(Path::to_path_buf).unwrap_or_else(corpus::default_dir);
    if write {
        let entries = corpus::load(&dir).map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?;
        let lock = corpus::snapshot(&entries, o.budget, &mut Vec::new());
        corpus::write_lock(&dir, &lock).map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?;
        let text = format!("wrote {} entries to {}\n", lock.entries.len(), dir.join(corpus::LOCK_FILE).display());
        return Ok(Outcome::new(Status::Clean, lock, text));
    }
    if !dir.is_dir() {
        return Err(Failure::input(format!("no corpus at {}", dir.display())));
    }
    let results = criteria::run_all(&dir);
    let mut text = String::new();
    for c in &results {
        writeln!(text, "{c}").unwrap();
    }
    let status = if results.iter().all(|c| c.pass) { Status::Clean } else { Status::Finding };
    Ok(Outcome::new(status, results, text))
}
