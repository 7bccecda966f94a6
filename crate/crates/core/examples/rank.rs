//! Brute-force orbit-poset rank of PGL_3(4) at 3 and SU_3(5) at 5.

use endorank::groups::GroupDescriptor;
use endorank::posetrank::{poset_to_text, rank_of, Budgets};

fn main() -> endorank::error::Result<()> {
    for (name, n, q, ell) in [("PGL", 3, 4, 3), ("SU", 3, 5, 5)] {
        let d = GroupDescriptor::named(name, n, q)?;
        let a = rank_of(&d, ell, &Budgets::default())?;
        print!("{}", poset_to_text(&a.report, &a.poset));
        for c in a.report.failed_checks() {
            println!("failed check {}: {}", c.name, c.detail);
        }
        println!();
    }
    Ok(())
}
