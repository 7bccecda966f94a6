//! Arithmetic in GF(64) built from its Conway polynomial.

use endorank::field::Field;

fn main() -> endorank::error::Result<()> {
    let f = Field::new(2, 6)?;
    println!("GF({}) modulus coefficients {:?}", f.q(), f.polynomial());
    let g = f.generator();
    let g9 = f.pow(g, 9);
    println!("g^9 = {} has order {}", f.show(g9), f.multiplicative_order(g9)?);
    let h = f.add(g, f.one());
    println!("(g+1) * (g+1)^-1 = {}", f.show(f.mul(h, f.inv(h)?)));
    let fr = f.frobenius(g, 1);
    println!("frobenius(g) = {}, log {}", f.show(fr), f.log(fr).unwrap_or(0));
    let cubes: std::collections::BTreeSet<u16> = f.nonzero().map(|a| f.pow(a, 3).index()).collect();
    println!("{} nonzero cubes", cubes.len());
    Ok(())
}
