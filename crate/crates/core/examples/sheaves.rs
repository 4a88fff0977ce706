//! Presheaves on finite spaces: sheaf axioms with witnesses, stalks and
//! sheafification.

use std::collections::BTreeMap;

use structura::exactla::{CyclicSum, GroupMap};
use structura::finspace::FiniteSpace;
use structura::sheaf::Presheaf;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let x = FiniteSpace::discrete(&["a", "b"])?;
    let z = CyclicSum::free(1);

    // Constant Z with identity restrictions: the two points cannot be glued.
    let f: Presheaf<GroupMap> = Presheaf::constant(x.clone(), z.clone());
    for v in f.check_sheaf_axioms()? {
        println!("{v}");
    }
    let sheaf = f.sheafify()?;
    println!("sheafified global sections: {}", sheaf.global_sections().canonical());
    println!("sheafify is idempotent: {}", sheaf.sheafify()? == sheaf);

    let c = Presheaf::constant_sheaf(FiniteSpace::pseudocircle(), &z);
    println!("constant sheaf on the pseudocircle is a sheaf: {}", c.is_sheaf()?);
    for p in c.space().labels() {
        println!("stalk at {p}: {}", c.stalk_of(p)?.value.canonical());
    }

    // A presheaf given explicitly, with one restriction derived by composition.
    let s = FiniteSpace::sierpinski();
    let values = vec![CyclicSum::zero(), CyclicSum::free(1), CyclicSum::free(2)];
    let mut given = BTreeMap::new();
    let proj = GroupMap::new(CyclicSum::free(2), CyclicSum::free(1), structura::exactla::IntMatrix::from_rows(&[vec![1, 0]]))?;
    given.insert((1, 2), proj);
    let g = Presheaf::new(s, values, given)?;
    println!("explicit presheaf is a sheaf: {}", g.is_sheaf()?);
    Ok(())
}
