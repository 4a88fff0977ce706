//! Hochschild cohomology of algebras given by structure constants, and of
//! structured ringed spaces through their components.

use structura::complex::{Assembled, Assembly, Verticals};
use structura::exactla::Field;
use structura::hochschild::{hochschild_dimensions, structured_hochschild, FiniteDimAlgebra, DEFAULT_DEGREE_BOUND};
use structura::ringspec::{structural_affine, FiniteRing, DEFAULT_MAX_ELEMENTS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Dual numbers Q[e]/(e^2) with basis 1, e.
    let dual = FiniteDimAlgebra::from_ints(Field::Rationals, &[vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![0, 0]]], &[1, 0])?;
    println!("dual numbers: {:?}", hochschild_dimensions(&dual, 2, DEFAULT_DEGREE_BOUND)?);

    let m2 = FiniteDimAlgebra::from_finite_ring(&FiniteRing::zmod(2)?)?;
    println!("F_2: {:?}", hochschild_dimensions(&m2, 3, DEFAULT_DEGREE_BOUND)?);

    let f2 = FiniteRing::zmod(2)?;
    let x = structural_affine(&[f2.clone(), f2])?;
    let s = structured_hochschild(&x, Verticals::Trivial, Assembly::Total, 3, DEFAULT_MAX_ELEMENTS)?;
    if let Assembled::Total(d) = &s.table {
        println!("structured (F_2, F_2), total: {d:?}");
    }
    println!("rows agree with the disjoint union: {}", s.rows == s.union_rows);
    Ok(())
}
