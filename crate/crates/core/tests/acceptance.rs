//! End-to-end acceptance battery. Each criterion prints one pass/fail line;
//! the test fails if any criterion fails.

#[test]
fn acceptance_battery() {
    let results = grover_walk::acceptance::run_all();
    let mut all_passed = true;
    for r in &results {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {}: {}: {}", r.index, r.name, r.detail);
        all_passed &= r.passed;
    }
    assert!(all_passed, "one or more acceptance criteria failed");
}
