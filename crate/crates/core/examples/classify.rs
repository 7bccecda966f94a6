//! Reads the torsion-free rank off the classification for a few groups.

use endorank::classify::{classify, Associated, Descriptor, Isogeny, LieDescriptor, RootSystem};

fn main() -> endorank::error::Result<()> {
    let cases: Vec<(LieDescriptor, u64)> = vec![
        (LieDescriptor::new(RootSystem::A(2), 1, Isogeny::Ad, 4), 3),
        (LieDescriptor::sc(RootSystem::A(2), 19).with_associated(Associated::Psl), 3),
        (LieDescriptor::new(RootSystem::D(4), 3, Isogeny::Sc, 5), 3),
        (LieDescriptor::sc(RootSystem::G2, 7), 7),
        (LieDescriptor::sc(RootSystem::E8, 2), 2),
    ];
    for (lie, ell) in cases {
        let r = classify(&Descriptor::Simple(lie), ell)?;
        let rank = r.tf_rank.map_or("unknown".to_string(), |t| t.to_string());
        println!("{:<24} ell {:>2}  tf_rank {:<7} {:?}  {}", r.descriptor.name(), ell, rank, r.status, r.rule);
        for c in &r.caveats {
            println!("    caveat: {c}");
        }
    }
    Ok(())
}
