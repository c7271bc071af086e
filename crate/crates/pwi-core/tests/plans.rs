use pwi_core::dynamics::{validate_plan, TilingPlan};
use std::fmt::Write as _;
use std::path::PathBuf;

fn plans_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../plans")
}

fn run(name: &str) -> (String, bool) {
    let path = plans_dir().join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{name}: {e}"));
    let plan: TilingPlan = text.parse().unwrap_or_else(|e| panic!("{name}: {e}"));
    let report = validate_plan(&plan).unwrap_or_else(|e| panic!("{name}: {e}"));
    let mut log = String::new();
    writeln!(log, "== {name}: {}", report.title).unwrap();
    for row in &report.rows {
        writeln!(
            log,
            "   {} {:>5}: steps {:>4}  {}",
            if row.ok { "ok  " } else { "FAIL" },
            row.name,
            row.steps,
            row.message
        )
        .unwrap();
    }
    writeln!(
        log,
        "   completeness: {} (covered {:?}, parent {:?})",
        if report.complete { "ok" } else { "DEFICIT" },
        report.covered_area,
        report.parent_area
    )
    .unwrap();
    (log, report.ok())
}

#[test]
fn shipped_plans_validate() {
    let names = [
        "prop1.plan",
        "plan1.plan",
        "plan2.plan",
        "plan3.plan",
        "plan4.plan",
        "plan5.plan",
        "plan6.plan",
        "plan7.plan",
        "plan8.plan",
        "plan9.plan",
        "plan10.plan",
        "plan11.plan",
        "plan12.plan",
    ];
    let mut all = String::new();
    let mut bad = Vec::new();
    for name in names {
        let (log, ok) = run(name);
        print!("{log}");
        all.push_str(&log);
        if !ok {
            bad.push(name);
        }
    }
    assert!(bad.is_empty(), "plans with failures: {bad:?}\n{all}");
}

#[test]
fn wrong_destination_rotation_is_flagged() {
    let path = plans_dir().join("plan2.plan");
    let text = std::fs::read_to_string(&path).unwrap();
    // Bump the first destination rotation by one.
    let broken = text.replacen("-> B1 @ Bs R2", "-> B1 @ Bs R3", 1);
    assert_ne!(broken, text);
    let plan: TilingPlan = broken.parse().unwrap();
    let report = validate_plan(&plan).unwrap();
    let row = report.rows.iter().find(|r| r.name == "B1").unwrap();
    assert!(!row.ok);
    assert!(row.message.contains("net rotation"));
}
