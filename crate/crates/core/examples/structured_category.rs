//! Structured families, alignments and composition of structured homs.

use structura::exactla::{CyclicSum, GroupMap};
use structura::ringspec::{FiniteRing, RingHom};
use structura::strcat::{check_category_membership, compose_structured_homs, Alignment, Carrier, Component, StructuredFamily, StructuredHom};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let z = CyclicSum::free(1);
    let r = FiniteRing::zmod(4)?;
    let a = StructuredFamily::from_carriers(vec![Carrier::Group(z.clone()), Carrier::Ring(r.clone())], true)?;
    let b = StructuredFamily::from_carriers(vec![Carrier::Ring(r.clone()), Carrier::Group(z.clone())], true)?;

    let swap = Alignment::from_pairs(&[(1, 2), (2, 1)])?;
    println!("swap preserves tags: {}", check_category_membership(&a, &b, &swap).accepted);
    println!("identity preserves tags: {}", check_category_membership(&a, &b, &Alignment::identity(2)).accepted);

    let f = StructuredHom::new(a.clone(), b.clone(), swap.clone(), vec![Component::Group(GroupMap::scalar(&z, 3)), Component::Ring(RingHom::identity(&r))])?;
    let g = StructuredHom::new(b, a.clone(), swap.inverse(), vec![Component::Ring(RingHom::identity(&r)), Component::Group(GroupMap::scalar(&z, -1))])?;
    let gf = compose_structured_homs(&f, &g)?;
    println!("g ∘ f has identity alignment: {}", gf.alignment().is_identity());
    println!("first component: {:?}", gf.component(1));
    println!("f ∘ id = f: {}", compose_structured_homs(&StructuredHom::identity(&a), &f)? == f);
    Ok(())
}
