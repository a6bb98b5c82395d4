use raycat_core::cleaving::DEFAULT_BUDGET;
use raycat_core::print_presentation;
use raycat_verify::corpus;

/// `RAYCAT_REGENERATE=1` rewrites the generated files and the lockfile.
#[test]
fn regenerate_when_asked() {
    if std::env::var_os("RAYCAT_REGENERATE").is_none() {
        return;
    }
    let dir = corpus::default_dir();
    corpus::write_generated(&dir).unwrap();
    let entries = corpus::load(&dir).unwrap();
    let lock = corpus::snapshot(&entries, DEFAULT_BUDGET, &mut Vec::new());
    corpus::write_lock(&dir, &lock).unwrap();
}

#[test]
fn generated_files_are_current() {
    let dir = corpus::default_dir();
    for p in corpus::generated() {
        let path = dir.join(format!("{}.rc", p.name));
        let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(text, print_presentation(&p), "{}", path.display());
    }
}

#[test]
fn every_file_parses() {
    for e in corpus::load(&corpus::default_dir()).unwrap() {
        assert!(e.presentation.is_ok(), "{}: {:?}", e.file, e.presentation);
    }
}

fn edited(file: &str, from: &str, to: &str) -> corpus::Entry {
    let dir = corpus::default_dir();
    let text = std::fs::read_to_string(dir.join(file)).unwrap();
    assert!(text.contains(from), "{file} lacks `{from}`");
    corpus::Entry {
        file: file.into(),
        presentation: raycat_core::parse_presentation(&text.replace(from, to)).map_err(|e| e.to_string()),
    }
}

fn locked(file: &str) -> corpus::LockEntry {
    corpus::read_lock(&corpus::default_dir()).unwrap().entries[file].clone()
}

#[test]
fn lock_matches_current_results() {
    let dir = corpus::default_dir();
    let entries = corpus::load(&dir).unwrap();
    let now = corpus::snapshot(&entries, DEFAULT_BUDGET, &mut Vec::new());
    assert_eq!(corpus::read_lock(&dir).unwrap(), now);
}

#[test]
fn dumbbell_with_s_6_trips_the_gate() {
    let e = edited("dumbbell_3_3.rc", "rel r r r = 0", "rel r r r r r r = 0");
    let now = corpus::snapshot_entry(&e, DEFAULT_BUDGET, &mut Vec::new());
    assert_ne!(now, locked("dumbbell_3_3.rc"));
    let verdict = &now.contours[0].verdict;
    assert!(!verdict.starts_with("DumbBell"), "{verdict}");
}

#[test]
fn diamond_without_lambda_kappa_regresses() {
    let e = edited("diamond.rc", "rel l k = 0\n", "");
    let now = corpus::snapshot_entry(&e, DEFAULT_BUDGET, &mut Vec::new());
    assert_ne!(now, locked("diamond.rc"));
    assert_eq!(now.build, "NotFinite");
}
