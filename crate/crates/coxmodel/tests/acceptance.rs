//! One line per acceptance criterion; fails if any criterion fails.

mod common;

#[test]
fn acceptance_criteria() {
    let results = common::all_criteria();
    println!();
    for c in &results {
        println!("{}", c.line());
    }
    let failed: Vec<u32> = results.iter().filter(|c| c.result.is_err()).map(|c| c.number).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
