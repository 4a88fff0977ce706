//! Čech, refined Čech and derived-limit cohomology on the pseudocircle.

use structura::cohom::{cech_complex, compare_cech_with_derived, cover_of, derived_limit_complex, refined_cech};
use structura::exactla::CyclicSum;
use structura::finspace::FiniteSpace;
use structura::sheaf::Presheaf;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let x = FiniteSpace::pseudocircle();
    let f = Presheaf::constant_sheaf(x.clone(), &CyclicSum::free(1));

    let derived = derived_limit_complex(&f, 2)?;
    for (n, g) in derived.cohomology(2)?.iter().enumerate() {
        println!("derived H^{n} = {g}");
    }

    let uc = x.minimal_open_of("c")?;
    let ud = x.minimal_open_of("d")?;
    let cover = cover_of(&x, vec![uc, ud])?;
    let cech = cech_complex(&cover, &f, 2)?;
    println!("Čech 1-simplices: {:?}", cech.tuples(1));
    for (n, g) in cech.cohomology(2)?.iter().enumerate() {
        println!("Čech H^{n} = {g}");
    }

    let whole = cover_of(&x, vec![x.full()])?;
    let refined = refined_cech(&f, &[whole, cover], 2)?;
    for (n, g) in refined.limit.iter().enumerate() {
        println!("refined H^{n} = {g}");
    }
    println!("disagreements with the derived limit: {:?}", compare_cech_with_derived(&f, 2)?);
    Ok(())
}
