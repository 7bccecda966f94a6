//! Runs both routes over a small grid and reports agreement.

use endorank::cli::{crosscheck, GridConfig, RouteValue};

const GRID: &str = r#"{
  "schema": "endorank.grid/1",
  "entries": [
    {"group": {"family": "GL", "n": 3, "q": 4, "quotient": "all-scalars"}, "ell": 3, "expected": 3},
    {"group": {"family": "SL", "n": 3, "q": 7}, "ell": 7, "expected": "derive"},
    {"group": {"family": "Sp", "n": 4, "q": 5}, "ell": 5, "expected": "derive"},
    {"lie": {"family": "A2", "isogeny": "ad", "q": 19}, "ell": 3, "expected": "derive"}
  ]
}"#;

fn main() -> endorank::error::Result<()> {
    let grid = GridConfig::parse(GRID)?;
    let report = crosscheck(&grid, 0);
    for row in &report.rows {
        let show = |v: &RouteValue| match v {
            RouteValue::Rank(r) => r.to_string(),
            RouteValue::Unknown(_) => "unknown".into(),
            RouteValue::NotRun => "-".into(),
            RouteValue::Error(e) => format!("error: {e}"),
        };
        println!(
            "{:<16} ell {}  classify {:<8} brute {:<8} {}",
            row.name,
            row.ell,
            show(&row.classify),
            show(&row.brute),
            if row.matched { "ok" } else { "MISMATCH" }
        );
    }
    println!("{} mismatches", report.mismatches);
    Ok(())
}
