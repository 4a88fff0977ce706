//! Prime spectra of finite rings, locally ringed checks and structural
//! scheme recognition.

use structura::ringspec::{recognize_structural_scheme, spec, structural_affine, FiniteRing, DEFAULT_MAX_ELEMENTS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let r = FiniteRing::zmod(12)?;
    let s = spec(&r, DEFAULT_MAX_ELEMENTS)?;
    let x = s.ringed.space();
    println!("Spec Z/12 has {} points, discrete: {}", x.npoints(), x.is_discrete());
    for report in s.ringed.check_locally_ringed() {
        println!("stalk at {}: {} elements, maximal ideals {:?}", report.point, report.size, report.maximal_ideals);
    }

    let z6 = FiniteRing::zmod(6)?;
    println!("Z/6 is local: {}", z6.is_local());
    let ideals: Vec<String> = z6.ideals().iter().map(|i| z6.ideal_name(i)).collect();
    println!("ideals of Z/6: {}", ideals.join(" "));

    let f4 = FiniteRing::zmod(4)?;
    let f = structural_affine(&[f4.clone(), FiniteRing::zmod(3)?])?;
    let cover = [f.space().full()];
    let report = recognize_structural_scheme(&f, &cover, &[vec![f4, FiniteRing::zmod(3)?]], DEFAULT_MAX_ELEMENTS)?;
    println!("structural affine: {}", report.is_structural_affine());
    Ok(())
}
