//! Structured presheaves: decomposition into components, one row of
//! cochains per component, and the three assemblies of the grid.

use structura::cohom::{structured_cohomology, structured_rows, Mode};
use structura::complex::{assemble_grid, Assembled, Assembly, Verticals};
use structura::exactla::{CyclicSum, GroupMap};
use structura::finspace::FiniteSpace;
use structura::sheaf::Presheaf;
use structura::strcat::{Carrier, StructuredFamily, StructuredHom};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let x = FiniteSpace::pseudocircle();
    let family = StructuredFamily::from_carriers(vec![Carrier::Group(CyclicSum::free(1)), Carrier::Group(CyclicSum::cyclic(3))], true)?;
    let f: Presheaf<StructuredHom> = Presheaf::constant(x, family);

    for assembly in [Assembly::Rows, Assembly::Hpq, Assembly::Total] {
        match structured_cohomology(&f, &Mode::Sheaf, Verticals::Trivial, assembly, 2)? {
            Assembled::Rows(rows) => {
                for (p, r) in rows.iter().enumerate() {
                    let gs: Vec<String> = r.iter().map(ToString::to_string).collect();
                    println!("row {}: {}", p + 1, gs.join(", "));
                }
            }
            Assembled::Hpq(t) => println!("H^(1,1) = {}", t[1][1]),
            Assembled::Total(gs) => {
                let gs: Vec<String> = gs.iter().map(ToString::to_string).collect();
                println!("total: {}", gs.join(", "));
            }
        }
    }

    // Identity verticals between equal rows commute with the row differentials,
    // so they enter with the commuting convention; the total complex is a cone.
    let g: Presheaf<StructuredHom> =
        Presheaf::constant(FiniteSpace::sierpinski(), StructuredFamily::from_carriers(vec![Carrier::Group(CyclicSum::free(1)); 2], true)?);
    let rows = structured_rows(&g, &Mode::Sheaf, 1)?;
    let verticals = (0..rows[0].top_degree() + 1).map(|c| GroupMap::identity(&rows[0].object(c))).collect();
    let grid = assemble_grid(rows, Verticals::Commuting(vec![verticals]))?;
    println!("with identity verticals: {:?}", grid.total_cohomology(1)?.iter().map(ToString::to_string).collect::<Vec<_>>());
    Ok(())
}
