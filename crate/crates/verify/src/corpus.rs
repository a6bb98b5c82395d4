//! The bundled corpus: presentation files plus a lockfile of expected outcomes.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use raycat_core::classify::{check_mild, classify_contour, Mildness, Verdict};
use raycat_core::cleaving::{Certificate, CertifiedWitness};
use raycat_core::contours::find_contours;
use raycat_core::templates::{self, glue};
use raycat_core::{parse_presentation, print_presentation, verify_axioms, Error, PathExpr, Presentation, RayCategory, Relation};

pub const CAP: usize = 32;
pub const LOCK_FILE: &str = "lock.json";

#[derive(Debug, Clone)]
pub struct Entry {
    pub file: String,
    pub presentation: Result<Presentation, String>,
}

impl Entry {
    pub fn build(&self) -> Result<RayCategory, Error> {
        let p = self.presentation.as_ref().map_err(|e| Error::Precondition(e.clone()))?;
        RayCategory::build(p, CAP)
    }
}

/// `RAYCAT_CORPUS`, or the `corpus` directory of the source tree.
pub fn default_dir() -> PathBuf {
    match std::env::var_os("RAYCAT_CORPUS") {
        Some(d) => PathBuf::from(d),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus"),
    }
}

/// Every `.rc` file in `dir`, sorted by name.
pub fn load(dir: &Path) -> io::Result<Vec<Entry>> {
    let mut out = Vec::new();
    for item in fs::read_dir(dir)? {
        let path = item?.path();
        if path.extension().and_then(|e| e.to_str()) != Some("rc") {
            continue;
        }
        let text = fs::read_to_string(&path)?;
        out.push(Entry {
            file: path.file_name().unwrap().to_string_lossy().into_owned(),
            presentation: parse_presentation(&text).map_err(|e| e.to_string()),
        });
    }
    out.sort_by(|a, b| a.file.cmp(&b.file));
    Ok(out)
}

pub fn find<'a>(entries: &'a [Entry], file: &str) -> Option<&'a Entry> {
    entries.iter().find(|e| e.file == file)
}

fn pf2() -> Presentation {
    templates::penny_farthing(2, &[1]).expect("n = 2 template")
}

/// The glued categories, under their corpus names.
pub fn glued() -> Vec<Presentation> {
    let db = templates::dumbbell(3, 3).expect("family member");
    let cross = vec![
        Relation::zero(PathExpr::new(["a2'", "a1"])),
        Relation::zero(PathExpr::new(["a2", "a1'"])),
    ];
    vec![
        glue("two_pf_glued", &pf2(), &pf2(), &[("x0", "x0")], &[("p", "p")], vec![]),
        glue("pf_cycle_glued", &pf2(), &pf2(), &[("x1", "x1")], &[], cross),
        glue("two_db_chained", &db, &db, &[("y", "x")], &[("r", "l")], vec![]),
        glue("two_db_apart", &db, &db, &[], &[], vec![]),
    ]
    .into_iter()
    .map(|g| g.expect("glued presentation"))
    .collect()
}

/// Every corpus file that is produced by a generator.
pub fn generated() -> Vec<Presentation> {
    let mut out = Vec::new();
    for (r, s) in templates::dumbbell_family().into_iter().chain([(6, 6)]) {
        out.push(templates::dumbbell(r, s).expect("r, s >= 2"));
    }
    for n in 2..=4 {
        for e in templates::nondecreasing_maps(n) {
            out.push(templates::penny_farthing(n, &e).expect("n >= 2"));
        }
    }
    out.push(templates::diamond());
    out.push(templates::diamond_with(false));
    out.extend(glued());
    out
}

pub fn write_generated(dir: &Path) -> io::Result<()> {
    for p in generated() {
        fs::write(dir.join(format!("{}.rc", p.name)), print_presentation(&p))?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LockedContour {
    pub v: String,
    pub w: String,
    pub verdict: String,
    pub mildness: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LockEntry {
    pub build: String,
    /// Axioms that fail, by letter.
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub axioms_failed: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub contours: Vec<LockedContour>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lock {
    pub budget: u64,
    pub entries: BTreeMap<String, LockEntry>,
}

pub fn read_lock(dir: &Path) -> io::Result<Lock> {
    let text = fs::read_to_string(dir.join(LOCK_FILE))?;
    serde_json::from_str(&text).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))
}

pub fn write_lock(dir: &Path, lock: &Lock) -> io::Result<()> {
    let text = serde_json::to_string_pretty(lock).expect("lock serializes");
    fs::write(dir.join(LOCK_FILE), text + "\n")
}

pub fn witness_kind(c: &Certificate) -> String {
    match &c.witness {
        CertifiedWitness::Crown { sigma, .. } => format!("crown/{}", sigma.len()),
        CertifiedWitness::Diagram { kind, .. } => kind.clone(),
    }
}

pub fn verdict_summary(v: &Verdict) -> String {
    match v {
        Verdict::DumbBell { r, s } => format!("DumbBell({r},{s})"),
        Verdict::PennyFarthing { n, e } => format!("PennyFarthing({n},{e:?})"),
        Verdict::Diamond => "Diamond".into(),
        Verdict::Refuted { certificate, .. } => format!("Refuted({})", witness_kind(certificate)),
        Verdict::Inconclusive { .. } => "Inconclusive".into(),
    }
}

pub fn mildness_summary(m: &Mildness) -> String {
    match m {
        Mildness::MildConsistent { .. } => "MildConsistent".into(),
        Mildness::NotMild { certificate, .. } => format!("NotMild({})", witness_kind(certificate)),
        Mildness::Inconclusive { .. } => "Inconclusive".into(),
    }
}

/// Outcome of one corpus file. Certificates met on the way go to `sink`.
pub fn snapshot_entry(e: &Entry, budget: u64, sink: &mut Vec<(String, Certificate)>) -> LockEntry {
    let p = match e.build() {
        Ok(p) => p,
        Err(err) => {
            let build = match err.kind() {
                Error::NotFinite { .. } => "NotFinite".to_string(),
                Error::ClosureBudget { .. } => "ClosureBudget".to_string(),
                other => format!("error: {other}"),
            };
            return LockEntry { build, axioms_failed: String::new(), contours: Vec::new() };
        }
    };
    let report = verify_axioms(&p);
    let axioms_failed: String = report.verdicts().iter().filter(|(_, v)| !v.passed()).map(|(c, _)| *c).collect();
    let contours = match find_contours(&p) {
        Ok(cs) => cs,
        Err(err) => {
            return LockEntry {
                build: format!("contours: {err}"),
                axioms_failed,
                contours: Vec::new(),
            }
        }
    };
    let mut out = Vec::new();
    for c in contours.iter().filter(|c| c.non_deep) {
        let verdict = match classify_contour(&p, c, budget) {
            Ok(cls) => {
                if let Verdict::Refuted { certificate, .. } = &cls.verdict {
                    sink.push((format!("{} classify", e.file), (**certificate).clone()));
                }
                verdict_summary(&cls.verdict)
            }
            Err(err) => format!("error: {err}"),
        };
        let mildness = match check_mild(&p, c, budget) {
            Ok(m) => {
                if let Mildness::NotMild { certificate, .. } = &m {
                    sink.push((format!("{} check-mild", e.file), (**certificate).clone()));
                }
                mildness_summary(&m)
            }
            Err(err) => format!("error: {err}"),
        };
        out.push(LockedContour {
            v: c.v.to_string(),
            w: c.w.to_string(),
            verdict,
            mildness,
        });
    }
    LockEntry {
        build: "ok".into(),
        axioms_failed,
        contours: out,
    }
}

pub fn snapshot(entries: &[Entry], budget: u64, sink: &mut Vec<(String, Certificate)>) -> Lock {
    Lock {
        budget,
        entries: entries.iter().map(|e| (e.file.clone(), snapshot_entry(e, budget, sink))).collect(),
    }
}
