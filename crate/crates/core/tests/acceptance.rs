//! Runs the ten acceptance criteria and prints one line per criterion.

use wfusion_core::verify::{run_all, SuiteOptions};

#[test]
fn acceptance_suite() {
    let results = run_all(SuiteOptions { quick: false });
    for r in &results {
        println!("{r}");
    }
    let failed: Vec<u8> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    println!("{} of {} criteria passed", results.len() - failed.len(), results.len());
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
