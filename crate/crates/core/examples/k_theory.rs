//! Bundle rank data, Whitney sums, K^0 and Grothendieck completion.

use std::collections::BTreeMap;

use structura::finspace::FiniteSpace;
use structura::ktheory::{grothendieck_complete, k0, validate_bundle, AbelianMonoid, MonoidTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let x = FiniteSpace::pseudocircle();
    let ranks: BTreeMap<String, Vec<u64>> = x.labels().iter().map(|l| (l.clone(), vec![1, 2])).collect();
    let e = validate_bundle(&x, "R", 2, &ranks)?;
    let sum = e.whitney_sum(&e)?;
    println!("rank matrix of E + E: {:?}", sum.rank_matrix());

    let k = k0(&x, 2);
    println!("K^0(pseudocircle, m=2) = {} on {:?}", k.group, k.generators);
    let d = FiniteSpace::discrete(&["p", "q"])?;
    println!("K^0(two points, m=2) = {}", k0(&d, 2).group);

    let idempotent = MonoidTable::new(vec!["0".into(), "1".into()], vec![vec![0, 1], vec![1, 1]])?;
    println!("completion of {{0, 1}} with 1 + 1 = 1: {}", grothendieck_complete(&AbelianMonoid::Table(idempotent), 64)?.group);
    let n = AbelianMonoid::Affine { dim: 2, generators: vec![vec![1, 0], vec![1, 1], vec![0, 2]] };
    let c = grothendieck_complete(&n, 64)?;
    println!("completion of <(1,0), (1,1), (0,2)> = {}, images {:?}", c.group, c.images);
    Ok(())
}
