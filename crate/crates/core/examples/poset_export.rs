//! Writes the orbit poset of PSp_4(5) at 5 as JSON and Graphviz.

use endorank::groups::GroupDescriptor;
use endorank::posetrank::{poset_to_dot, rank_of, Budgets};

fn main() -> endorank::error::Result<()> {
    let d = GroupDescriptor::named("PSp", 4, 5)?;
    let a = rank_of(&d, 5, &Budgets::default())?;
    let dir = std::env::temp_dir();
    let json_path = dir.join("psp4_5_poset.json");
    let dot_path = dir.join("psp4_5_poset.dot");
    std::fs::write(&json_path, serde_json::to_string_pretty(&a.poset)?)?;
    std::fs::write(&dot_path, poset_to_dot(&a.poset))?;
    println!(
        "{} classes, {} edges, {} components, tf_rank {:?}",
        a.poset.classes.len(),
        a.poset.edges.len(),
        a.poset.components.len(),
        a.report.tf_rank
    );
    println!("wrote {}", json_path.display());
    println!("wrote {}", dot_path.display());
    Ok(())
}
