use berk::acceptance::{run_all, Config};

#[test]
fn acceptance() {
    let seed = std::env::var("BERK_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0);
    let outcomes = run_all(&Config { seed });
    for o in &outcomes {
        println!("{o}");
    }
    let failed: Vec<usize> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
