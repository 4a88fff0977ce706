//! Finite abelian groups given by a Cayley table.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::group::{FgAbGroup, GroupMap};
use super::matrix::IntMatrix;
use super::quotient::Quotient;
use super::AlgebraError;

/// A finite abelian group on `0..n` with an addition table, identified with
/// its canonical form.
///
/// Elements are written as integer combinations of greedily chosen
/// generators; the relation lattice comes from the first multiple of each
/// new generator that falls into the span of the earlier ones.
#[derive(Clone, Debug)]
pub struct TableGroup {
    add: Vec<Vec<usize>>,
    zero: usize,
    generators: Vec<usize>,
    /// Coordinates of every element over `generators`.
    coords: Vec<Vec<BigInt>>,
    quotient: Quotient,
}

impl TableGroup {
    /// The table is trusted to describe an abelian group with identity `zero`.
    pub fn new(add: Vec<Vec<usize>>, zero: usize) -> TableGroup {
        let n = add.len();
        let mut generators: Vec<usize> = Vec::new();
        let mut coords: Vec<Option<Vec<usize>>> = vec![None; n];
        coords[zero] = Some(Vec::new());
        let mut span = vec![zero];
        let mut relations: Vec<Vec<BigInt>> = Vec::new();
        while span.len() < n {
            let g = (0..n).find(|&x| coords[x].is_none()).expect("span is proper");
            let k = generators.len();
            generators.push(g);
            for c in coords.iter_mut().flatten() {
                c.push(0);
            }
            // Walk multiples m·g until they land in the old span.
            let old: Vec<usize> = span.clone();
            let mut multiple = g;
            let mut m = 1usize;
            while coords[multiple].is_none() {
                for &s in &old {
                    let x = add[multiple][s];
                    let mut c = coords[s].clone().expect("old span has coordinates");
                    c[k] = m;
                    coords[x] = Some(c);
                    span.push(x);
                }
                multiple = add[multiple][g];
                m += 1;
            }
            let mut rel: Vec<BigInt> = coords[multiple].as_ref().unwrap().iter().map(|&v| -BigInt::from(v)).collect();
            rel[k] += BigInt::from(m);
            relations.push(rel);
        }
        let k = generators.len();
        let mut rel_columns: Vec<Vec<BigInt>> = relations
            .into_iter()
            .map(|mut r| {
                r.resize(k, BigInt::zero());
                r
            })
            .collect();
        rel_columns.retain(|c| c.iter().any(|v| !v.is_zero()));
        let quotient = Quotient::new(k, &IntMatrix::from_columns(k, &rel_columns));
        let coords = coords
            .into_iter()
            .map(|c| c.expect("every element reached").into_iter().map(BigInt::from).collect())
            .collect();
        TableGroup { add, zero, generators, coords, quotient }
    }

    pub fn group(&self) -> &FgAbGroup {
        self.quotient.group()
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn size(&self) -> usize {
        self.add.len()
    }

    /// Canonical coordinates of element `x`.
    pub fn coordinates(&self, x: usize) -> Vec<BigInt> {
        self.quotient.project(&self.coords[x])
    }

    /// The element with canonical coordinates `c`.
    pub fn element(&self, c: &[BigInt]) -> usize {
        let mut acc = self.zero;
        for (k, ck) in c.iter().enumerate() {
            let lift = self.quotient.lift(k);
            for (gi, a) in lift.iter().enumerate() {
                let times = (a * ck).mod_floor(&BigInt::from(self.size())).to_usize().expect("small");
                let g = self.generators[gi];
                for _ in 0..times {
                    acc = self.add[acc][g];
                }
            }
        }
        acc
    }

    /// The element for canonical generator `k`.
    pub fn generator(&self, k: usize) -> usize {
        let mut e = vec![BigInt::zero(); self.group().ngens()];
        e[k] = BigInt::from(1);
        self.element(&e)
    }

    /// The homomorphism to `target` induced by an element map `f`, which must be additive.
    pub fn induced(&self, target: &TableGroup, f: impl Fn(usize) -> usize) -> Result<GroupMap, AlgebraError> {
        let cols: Vec<Vec<BigInt>> = (0..self.group().ngens()).map(|k| target.coordinates(f(self.generator(k)))).collect();
        GroupMap::new(
            self.group().to_cyclic(),
            target.group().to_cyclic(),
            IntMatrix::from_columns(target.group().ngens(), &cols),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zmod_table(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
    }

    fn product_table(a: usize, b: usize) -> Vec<Vec<usize>> {
        let n = a * b;
        (0..n)
            .map(|x| (0..n).map(|y| ((x / b + y / b) % a) * b + (x % b + y % b) % b).collect())
            .collect()
    }

    #[test]
    fn cyclic_tables() {
        for n in 1..13 {
            let t = TableGroup::new(zmod_table(n), 0);
            let expected = if n == 1 { FgAbGroup::trivial() } else { FgAbGroup::cyclic(n as u64) };
            assert_eq!(*t.group(), expected, "n = {n}");
        }
    }

    #[test]
    fn products_split_into_invariant_factors() {
        assert_eq!(*TableGroup::new(product_table(2, 2), 0).group(), FgAbGroup::from_parts(0, &[2, 2]).unwrap());
        assert_eq!(*TableGroup::new(product_table(2, 4), 0).group(), FgAbGroup::from_parts(0, &[2, 4]).unwrap());
        assert_eq!(*TableGroup::new(product_table(4, 3), 0).group(), FgAbGroup::cyclic(12));
    }

    #[test]
    fn coordinates_round_trip() {
        let t = TableGroup::new(product_table(2, 4), 0);
        for x in 0..8 {
            assert_eq!(t.element(&t.coordinates(x)), x);
        }
        let id = t.induced(&t, |x| x).unwrap();
        assert!(id.is_isomorphism());
    }
}
