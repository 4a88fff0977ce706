//! Exact integer linear algebra: Smith normal form, kernels, cokernels,
//! subquotients and direct limits.

use structura::exactla::{cokernel, direct_limit, kernel, smith_normal_form, subquotient, CyclicSum, Diagram, FgAbGroup, GroupMap, IntMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let snf = smith_normal_form(&a);
    let d: Vec<String> = snf.diagonal().iter().map(ToString::to_string).collect();
    println!("invariant factors: {}", d.join(" | "));
    assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.s);

    let z3 = CyclicSum::free(3);
    let f = GroupMap::new(z3.clone(), z3.clone(), a)?;
    let (coker, _) = cokernel(&f);
    println!("coker = {coker}");
    println!("ker = {}", kernel(&f)?.group());

    // Z --2--> Z --0--> Z: homology in the middle is Z/2.
    let z = CyclicSum::free(1);
    let double = GroupMap::scalar(&z, 2);
    let zero = GroupMap::zero(z.clone(), z.clone());
    println!("ker 0 / im 2 = {}", subquotient(&zero, &double)?.group());

    // Z --2--> Z --2--> Z: the limit is Z[1/2], reported through its finite stages.
    let chain = Diagram::chain(vec![z.clone(), z.clone()], vec![double])?;
    println!("direct limit of one doubling step: {}", direct_limit(&chain)?.group);

    let g = FgAbGroup::from_parts(1, &[2, 6])?;
    println!("{g} as JSON: {}", serde_json::to_string(&g)?);
    Ok(())
}
