//! Run every check on the generated instance stream and print a summary.
//!
//! `cargo run --release --example verify_suite -- [seed]`

use std::collections::BTreeMap;

use tdlc::theorems::{run_suite, Status, Tag};

fn main() -> Result<(), tdlc::Error> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let report = run_suite(seed, &Tag::ALL, 0)?;
    let mut by_tag: BTreeMap<Tag, [usize; 3]> = BTreeMap::new();
    for r in &report.records {
        let c = by_tag.entry(r.tag).or_default();
        c[r.status as usize] += 1;
    }
    println!("{:<17} {:>5} {:>5} {:>5}", "claim", "pass", "fail", "skip");
    for (tag, [p, f, s]) in &by_tag {
        println!("{:<17} {p:>5} {f:>5} {s:>5}", tag.as_str());
    }
    for r in report.records.iter().filter(|r| r.status == Status::Fail) {
        println!("FAIL {} {}: {}", r.tag, r.instance, r.counterexample.as_deref().unwrap_or(""));
    }
    println!(
        "{} instances, {} records, {} failures",
        report.summary.instances, report.summary.records, report.summary.fail
    );
    Ok(())
}
