use ykr::checks;

#[test]
fn acceptance() {
    let results = checks::all();
    println!();
    for c in &results {
        println!("{}", c.line());
    }
    let failed: Vec<_> = results.iter().filter(|c| c.required && !c.passed).map(|c| c.id).collect();
    let passed = results.iter().filter(|c| c.passed).count();
    println!("{passed}/{} criteria pass", results.len());
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
