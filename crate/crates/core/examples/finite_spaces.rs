//! Finite spaces: opens, minimal neighbourhoods, the specialization order,
//! components and covers.

use structura::finspace::{refine_cover, Cover, FiniteSpace};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let x = FiniteSpace::pseudocircle();
    println!("points: {:?}", x.labels());
    for &o in x.opens() {
        println!("open: {{{}}}", x.set_labels(o).join(","));
    }
    for p in 0..x.npoints() {
        println!("U_{} = {{{}}}", x.label(p), x.set_labels(x.minimal_open(p)).join(","));
    }
    let below: Vec<String> = (0..x.npoints())
        .flat_map(|p| (0..x.npoints()).map(move |q| (p, q)))
        .filter(|&(p, q)| p != q && x.leq(p, q))
        .map(|(p, q)| format!("{} <= {}", x.label(p), x.label(q)))
        .collect();
    println!("specialization: {}", below.join(", "));

    // Opens are listed without the empty set, which is always implied.
    let y = FiniteSpace::new(&["p", "q", "r"], &[vec!["p"], vec!["q"], vec!["q", "r"], vec!["p", "q"], vec!["p", "q", "r"]])?;
    for c in y.connected_components(y.full())? {
        println!("component of y: {{{}}}", y.set_labels(c).join(","));
    }

    let coarse = Cover::new(&x, x.full(), vec![x.full()])?;
    let fine = Cover::canonical(&x, x.full())?;
    println!("canonical cover has {} members", fine.len());
    println!("refinement map: {:?}", refine_cover(&x, &coarse, &fine)?);
    println!("{}", serde_json::to_string(&x.to_file())?);
    Ok(())
}
