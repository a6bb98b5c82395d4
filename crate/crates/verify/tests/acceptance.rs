use raycat_verify::corpus;
use raycat_verify::criteria::run_all;

#[test]
fn acceptance() {
    let results = run_all(&corpus::default_dir());
    for c in &results {
        println!("{c}");
    }
    assert_eq!(results.len(), 11);
    let failed: Vec<u8> = results.iter().filter(|c| !c.pass).map(|c| c.id).collect();
    assert!(failed.is_empty(), "criteria failing: {failed:?}");
}
