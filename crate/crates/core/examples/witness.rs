//! Builds the explicit subgroup witnesses and prints which identities hold.

use endorank::witnesses::{build_witness_defchar, build_witness_gl, build_witness_sl, DefCharVariant, WitnessReport};

fn show(r: &WitnessReport) {
    println!("{} ell {} q {}: all identities hold = {}", r.variant, r.ell, r.q, r.all_hold);
    for s in &r.subgroups {
        println!(
            "  {:<3} image order {:<6} rank {} abelian {}",
            s.name,
            s.image_order,
            s.image_rank.map_or("-".to_string(), |r| r.to_string()),
            s.image_abelian
        );
    }
    for (k, v) in &r.scalars {
        println!("  {k} = {v}");
    }
}

fn main() -> endorank::error::Result<()> {
    let gl = build_witness_gl(3, 4)?;
    show(&gl.report());
    println!("  pairwise nonconjugate: {:?}", gl.pairwise_nonconjugate(1_000_000));
    show(&build_witness_sl(3, 19)?.report());
    show(&build_witness_defchar(3, DefCharVariant::Linear)?.report());
    show(&build_witness_defchar(5, DefCharVariant::Unitary)?.report());
    Ok(())
}
