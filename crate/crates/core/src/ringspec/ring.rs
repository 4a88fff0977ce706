//! Finite commutative rings given by operation tables.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use super::RingError;

/// Finite commutative ring with unit, stored as addition and multiplication tables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteRing {
    elements: Vec<String>,
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
    zero: usize,
    one: usize,
    neg: Vec<usize>,
}

/// An ideal as a sorted list of element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ideal(Vec<usize>);

impl Ideal {
    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &Ideal) -> bool {
        self.0.iter().all(|&x| other.contains(x))
    }
}

impl FiniteRing {
    /// Validates the commutative ring axioms exhaustively.
    pub fn from_tables(
        elements: Vec<String>,
        add: Vec<Vec<usize>>,
        mul: Vec<Vec<usize>>,
        allow_zero_ring: bool,
    ) -> Result<FiniteRing, RingError> {
        let n = elements.len();
        let bad = |msg: String| Err(RingError::NotARing(msg));
        if n == 0 {
            return bad("a ring needs at least one element".into());
        }
        let distinct: BTreeSet<&String> = elements.iter().collect();
        if distinct.len() != n {
            return bad("duplicate element labels".into());
        }
        for (name, t) in [("addition", &add), ("multiplication", &mul)] {
            if t.len() != n || t.iter().any(|r| r.len() != n) {
                return bad(format!("{name} table is not {n}x{n}"));
            }
            if t.iter().flatten().any(|&v| v >= n) {
                return bad(format!("{name} table has an entry out of range"));
            }
        }
        let Some(zero) = (0..n).find(|&z| (0..n).all(|x| add[z][x] == x)) else {
            return bad("no additive identity".into());
        };
        let Some(one) = (0..n).find(|&u| (0..n).all(|x| mul[u][x] == x)) else {
            return bad("no multiplicative identity".into());
        };
        if zero == one && n == 1 && !allow_zero_ring {
            return Err(RingError::ZeroRing);
        }
        for x in 0..n {
            for y in 0..n {
                if add[x][y] != add[y][x] {
                    return bad(format!("addition not commutative at ({}, {})", elements[x], elements[y]));
                }
                if mul[x][y] != mul[y][x] {
                    return bad(format!("multiplication not commutative at ({}, {})", elements[x], elements[y]));
                }
                for z in 0..n {
                    if add[add[x][y]][z] != add[x][add[y][z]] {
                        return bad("addition not associative".into());
                    }
                    if mul[mul[x][y]][z] != mul[x][mul[y][z]] {
                        return bad("multiplication not associative".into());
                    }
                    if mul[x][add[y][z]] != add[mul[x][y]][mul[x][z]] {
                        return bad("multiplication does not distribute over addition".into());
                    }
                }
            }
        }
        let mut neg = Vec::with_capacity(n);
        for x in 0..n {
            let Some(y) = (0..n).find(|&y| add[x][y] == zero) else {
                return bad(format!("{} has no additive inverse", elements[x]));
            };
            neg.push(y);
        }
        Ok(FiniteRing { elements, add, mul, zero, one, neg })
    }

    /// `Z/n`, with elements labelled `0..n-1`.
    pub fn zmod(n: usize) -> Result<FiniteRing, RingError> {
        if n < 2 {
            return Err(RingError::ZeroRing);
        }
        let elements = (0..n).map(|i| i.to_string()).collect();
        let add = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let mul = (0..n).map(|a| (0..n).map(|b| (a * b) % n).collect()).collect();
        Ok(FiniteRing { elements, add, mul, zero: 0, one: 1 % n, neg: (0..n).map(|a| (n - a) % n).collect() })
    }

    /// The zero ring `{0}`.
    pub fn zero_ring() -> FiniteRing {
        FiniteRing { elements: vec!["0".into()], add: vec![vec![0]], mul: vec![vec![0]], zero: 0, one: 0, neg: vec![0] }
    }

    /// Direct product with componentwise operations; elements are labelled `(a,b,...)`.
    /// The empty product is the zero ring.
    pub fn product(factors: &[&FiniteRing], max_elements: usize) -> Result<FiniteRing, RingError> {
        let size = factors.iter().try_fold(1usize, |acc, r| acc.checked_mul(r.size()));
        match size {
            Some(s) if s <= max_elements => {}
            _ => return Err(RingError::TooLarge { bound: max_elements }),
        }
        if factors.is_empty() {
            return Ok(FiniteRing::zero_ring());
        }
        let size = size.unwrap();
        let decode = |mut k: usize| -> Vec<usize> {
            let mut digits = vec![0; factors.len()];
            for (i, r) in factors.iter().enumerate().rev() {
                digits[i] = k % r.size();
                k /= r.size();
            }
            digits
        };
        let encode = |digits: &[usize]| -> usize { digits.iter().zip(factors).fold(0, |acc, (d, r)| acc * r.size() + d) };
        let tuples: Vec<Vec<usize>> = (0..size).map(decode).collect();
        let elements = tuples
            .iter()
            .map(|t| format!("({})", t.iter().zip(factors).map(|(&d, r)| r.elements[d].as_str()).collect::<Vec<_>>().join(",")))
            .collect();
        let op = |table: fn(&FiniteRing, usize, usize) -> usize| -> Vec<Vec<usize>> {
            tuples
                .iter()
                .map(|a| {
                    tuples
                        .iter()
                        .map(|b| {
                            let d: Vec<usize> = factors.iter().enumerate().map(|(i, r)| table(r, a[i], b[i])).collect();
                            encode(&d)
                        })
                        .collect()
                })
                .collect()
        };
        let add = op(FiniteRing::add);
        let mul = op(FiniteRing::mul);
        let zero = encode(&factors.iter().map(|r| r.zero).collect::<Vec<_>>());
        let one = encode(&factors.iter().map(|r| r.one).collect::<Vec<_>>());
        let neg = tuples.iter().map(|t| encode(&t.iter().zip(factors).map(|(&d, r)| r.neg[d]).collect::<Vec<_>>())).collect();
        Ok(FiniteRing { elements, add, mul, zero, one, neg })
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn label(&self, x: usize) -> &str {
        &self.elements[x]
    }

    pub fn element(&self, label: &str) -> Result<usize, RingError> {
        self.elements.iter().position(|e| e == label).ok_or_else(|| RingError::UnknownElement(label.to_string()))
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a][b]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    pub fn add_table(&self) -> &[Vec<usize>] {
        &self.add
    }

    pub fn mul_table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    pub fn is_zero_ring(&self) -> bool {
        self.size() == 1
    }

    pub fn is_unit(&self, a: usize) -> bool {
        (0..self.size()).any(|b| self.mul[a][b] == self.one)
    }

    /// Additive order of `a`.
    pub fn additive_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.zero {
            x = self.add[x][a];
            k += 1;
        }
        k
    }

    /// Additive order of the unit; `1` for the zero ring.
    pub fn characteristic(&self) -> usize {
        self.additive_order(self.one)
    }

    fn additive_closure(&self, seed: impl IntoIterator<Item = usize>) -> Vec<bool> {
        let mut inside = vec![false; self.size()];
        let mut members = vec![self.zero];
        inside[self.zero] = true;
        let mut queue: VecDeque<usize> = seed.into_iter().collect();
        while let Some(x) = queue.pop_front() {
            if inside[x] {
                continue;
            }
            inside[x] = true;
            let snapshot = members.clone();
            members.push(x);
            for y in snapshot {
                let s = self.add[x][y];
                if !inside[s] {
                    queue.push_back(s);
                }
            }
            // Multiples of x itself.
            let s = self.add[x][x];
            if !inside[s] {
                queue.push_back(s);
            }
        }
        inside
    }

    fn to_ideal(inside: &[bool]) -> Ideal {
        Ideal((0..inside.len()).filter(|&i| inside[i]).collect())
    }

    /// The ideal generated by `gens`.
    pub fn ideal_generated(&self, gens: &[usize]) -> Ideal {
        let products = gens.iter().flat_map(|&g| (0..self.size()).map(move |r| self.mul[r][g]));
        Self::to_ideal(&self.additive_closure(products))
    }

    /// All ideals, found by adjoining one element at a time to known ideals.
    pub fn ideals(&self) -> Vec<Ideal> {
        let mut found: BTreeSet<Ideal> = BTreeSet::new();
        let zero = self.ideal_generated(&[]);
        let mut queue = VecDeque::from([zero.clone()]);
        found.insert(zero);
        while let Some(ideal) = queue.pop_front() {
            for a in 0..self.size() {
                if ideal.contains(a) {
                    continue;
                }
                let mut gens = ideal.0.clone();
                gens.push(a);
                let bigger = self.ideal_generated(&gens);
                if found.insert(bigger.clone()) {
                    queue.push_back(bigger);
                }
            }
        }
        let mut all: Vec<Ideal> = found.into_iter().collect();
        all.sort_by_key(|i| (i.len(), i.0.clone()));
        all
    }

    pub fn is_prime(&self, ideal: &Ideal) -> bool {
        if ideal.len() == self.size() {
            return false;
        }
        (0..self.size()).all(|a| {
            ideal.contains(a) || (0..self.size()).all(|b| ideal.contains(b) || !ideal.contains(self.mul[a][b]))
        })
    }

    pub fn prime_ideals(&self) -> Vec<Ideal> {
        self.ideals().into_iter().filter(|i| self.is_prime(i)).collect()
    }

    pub fn maximal_ideals(&self) -> Vec<Ideal> {
        let proper: Vec<Ideal> = self.ideals().into_iter().filter(|i| i.len() < self.size()).collect();
        proper
            .iter()
            .filter(|i| !proper.iter().any(|j| j.len() > i.len() && i.is_subset(j)))
            .cloned()
            .collect()
    }

    /// Exactly one maximal ideal.
    pub fn is_local(&self) -> bool {
        self.maximal_ideals().len() == 1
    }

    /// A short name for an ideal: `(g1,g2,...)` with greedily chosen least generators.
    pub fn ideal_name(&self, ideal: &Ideal) -> String {
        let mut gens: Vec<usize> = Vec::new();
        let mut current = self.ideal_generated(&[]);
        while current != *ideal {
            let next = ideal
                .members()
                .iter()
                .copied()
                .filter(|&g| !current.contains(g))
                .max_by_key(|&g| (self.ideal_generated(&[gens.clone(), vec![g]].concat()).len(), std::cmp::Reverse(g)))
                .expect("ideal strictly contains the current span");
            gens.push(next);
            current = self.ideal_generated(&gens);
        }
        if gens.is_empty() {
            gens.push(self.zero);
        }
        format!("({})", gens.iter().map(|&g| self.elements[g].as_str()).collect::<Vec<_>>().join(","))
    }

    /// `R / I` and the projection. Cosets are labelled by their least-index representative.
    pub fn quotient(&self, ideal: &Ideal) -> (FiniteRing, Vec<usize>) {
        let n = self.size();
        let mut class = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            if class[x] != usize::MAX {
                continue;
            }
            let k = reps.len();
            reps.push(x);
            for &i in ideal.members() {
                class[self.add[x][i]] = k;
            }
        }
        let elements = reps.iter().map(|&r| self.elements[r].clone()).collect();
        let add = reps.iter().map(|&a| reps.iter().map(|&b| class[self.add[a][b]]).collect()).collect();
        let mul = reps.iter().map(|&a| reps.iter().map(|&b| class[self.mul[a][b]]).collect()).collect();
        let neg = reps.iter().map(|&a| class[self.neg[a]]).collect();
        let q = FiniteRing { elements, add, mul, zero: class[self.zero], one: class[self.one], neg };
        (q, class)
    }

    /// Localization at a prime: `R / ann(S)` for `S = R \ P`, with the
    /// canonical map. Images of `S` are checked to be units and the result to be local.
    pub fn localize_at_prime(&self, prime: &Ideal) -> Result<(FiniteRing, RingHom), RingError> {
        if !self.is_prime(prime) {
            return Err(RingError::NotPrime(self.ideal_name(prime)));
        }
        let n = self.size();
        let outside: Vec<usize> = (0..n).filter(|&s| !prime.contains(s)).collect();
        let ann: Vec<usize> = (0..n).filter(|&r| outside.iter().any(|&s| self.mul[s][r] == self.zero)).collect();
        let ann = self.ideal_generated(&ann);
        let (local, class) = self.quotient(&ann);
        if let Some(&s) = outside.iter().find(|&&s| !local.is_unit(class[s])) {
            return Err(RingError::NotARing(format!("image of {} is not a unit after localizing", self.elements[s])));
        }
        if !local.is_local() {
            return Err(RingError::NotLocal);
        }
        let map = RingHom::new(self.clone(), local.clone(), class)?;
        Ok((local, map))
    }

    /// Generators of the ring, each recorded with how every other element is
    /// reached from them: `Some((a, b, is_product))` or `None` for generators and constants.
    fn generation_plan(&self) -> (Vec<usize>, Vec<(usize, Option<(usize, usize, bool)>)>) {
        let n = self.size();
        let mut known = vec![false; n];
        let mut plan: Vec<(usize, Option<(usize, usize, bool)>)> = Vec::new();
        let mut gens = Vec::new();
        let push = |x: usize, how: Option<(usize, usize, bool)>, known: &mut Vec<bool>, plan: &mut Vec<_>| {
            if !known[x] {
                known[x] = true;
                plan.push((x, how));
            }
        };
        push(self.zero, None, &mut known, &mut plan);
        push(self.one, None, &mut known, &mut plan);
        loop {
            let mut grew = true;
            while grew {
                grew = false;
                let current: Vec<usize> = plan.iter().map(|p| p.0).collect();
                for &a in &current {
                    for &b in &current {
                        for (c, prod) in [(self.add[a][b], false), (self.mul[a][b], true)] {
                            if !known[c] {
                                push(c, Some((a, b, prod)), &mut known, &mut plan);
                                grew = true;
                            }
                        }
                    }
                }
            }
            match (0..n).find(|&x| !known[x]) {
                Some(g) => {
                    gens.push(g);
                    push(g, None, &mut known, &mut plan);
                }
                None => break,
            }
        }
        (gens, plan)
    }

    /// An isomorphism `self -> other`, found by exhaustive search over images of a generating set.
    pub fn find_isomorphism(&self, other: &FiniteRing) -> Option<RingHom> {
        if self.size() != other.size() || self.characteristic() != other.characteristic() {
            return None;
        }
        let (gens, plan) = self.generation_plan();
        let candidates: Vec<Vec<usize>> = gens
            .iter()
            .map(|&g| {
                (0..other.size())
                    .filter(|&h| other.additive_order(h) == self.additive_order(g) && other.is_unit(h) == self.is_unit(g))
                    .collect()
            })
            .collect();
        let mut choice = vec![0usize; gens.len()];
        loop {
            if candidates.iter().any(Vec::is_empty) {
                return None;
            }
            let mut image = vec![usize::MAX; self.size()];
            image[self.zero] = other.zero;
            image[self.one] = other.one;
            for (k, &g) in gens.iter().enumerate() {
                image[g] = candidates[k][choice[k]];
            }
            let mut consistent = true;
            for &(x, how) in &plan {
                if let Some((a, b, prod)) = how {
                    image[x] = if prod { other.mul[image[a]][image[b]] } else { other.add[image[a]][image[b]] };
                }
                let _ = x;
            }
            if image.contains(&usize::MAX) {
                consistent = false;
            }
            if consistent {
                if let Ok(h) = RingHom::new(self.clone(), other.clone(), image.clone()) {
                    let distinct: BTreeSet<usize> = image.iter().copied().collect();
                    if distinct.len() == self.size() {
                        return Some(h);
                    }
                }
            }
            // Next choice in mixed radix.
            let mut k = 0;
            loop {
                if k == gens.len() {
                    return None;
                }
                choice[k] += 1;
                if choice[k] < candidates[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }

    pub fn is_isomorphic(&self, other: &FiniteRing) -> bool {
        self.find_isomorphism(other).is_some()
    }
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteRing(|R| = {}, char {})", self.size(), self.characteristic())
    }
}

/// Unital ring homomorphism as an element table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingHom {
    source: FiniteRing,
    target: FiniteRing,
    table: Vec<usize>,
}

impl RingHom {
    pub fn new(source: FiniteRing, target: FiniteRing, table: Vec<usize>) -> Result<RingHom, RingError> {
        if table.len() != source.size() || table.iter().any(|&v| v >= target.size()) {
            return Err(RingError::InvalidHom("table does not match the rings".into()));
        }
        if table[source.one] != target.one {
            return Err(RingError::InvalidHom("unit is not preserved".into()));
        }
        for a in 0..source.size() {
            for b in 0..source.size() {
                if table[source.add[a][b]] != target.add[table[a]][table[b]] {
                    return Err(RingHom::fail("addition", &source, a, b));
                }
                if table[source.mul[a][b]] != target.mul[table[a]][table[b]] {
                    return Err(RingHom::fail("multiplication", &source, a, b));
                }
            }
        }
        Ok(RingHom { source, target, table })
    }

    fn fail(op: &str, r: &FiniteRing, a: usize, b: usize) -> RingError {
        RingError::InvalidHom(format!("{op} not preserved at ({}, {})", r.elements[a], r.elements[b]))
    }

    /// Builds a map from element labels.
    pub fn from_labels(source: FiniteRing, target: FiniteRing, images: &HashMap<String, String>) -> Result<RingHom, RingError> {
        let table = source
            .elements
            .iter()
            .map(|e| {
                let img = images.get(e).ok_or_else(|| RingError::InvalidHom(format!("no image for {e}")))?;
                target.element(img)
            })
            .collect::<Result<Vec<_>, _>>()?;
        RingHom::new(source, target, table)
    }

    pub fn identity(ring: &FiniteRing) -> RingHom {
        RingHom { source: ring.clone(), target: ring.clone(), table: (0..ring.size()).collect() }
    }

    /// The unique map to the zero ring.
    pub fn to_zero(ring: &FiniteRing) -> RingHom {
        RingHom { source: ring.clone(), target: FiniteRing::zero_ring(), table: vec![0; ring.size()] }
    }

    pub fn source(&self) -> &FiniteRing {
        &self.source
    }

    pub fn target(&self) -> &FiniteRing {
        &self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &RingHom) -> Result<RingHom, RingError> {
        if first.target != self.source {
            return Err(RingError::InvalidHom("cannot compose: rings do not match".into()));
        }
        Ok(RingHom {
            source: first.source.clone(),
            target: self.target.clone(),
            table: first.table.iter().map(|&x| self.table[x]).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zmod12_primes() {
        let r = FiniteRing::zmod(12).unwrap();
        let primes = r.prime_ideals();
        let names: Vec<String> = primes.iter().map(|p| r.ideal_name(p)).collect();
        assert_eq!(names.len(), 2);
        assert!(names.contains(&"(2)".to_string()) && names.contains(&"(3)".to_string()), "{names:?}");
        // Ideals of Z/12 correspond to divisors of 12.
        assert_eq!(r.ideals().len(), 6);
    }

    #[test]
    fn localizations_of_z12_are_crt_factors() {
        let r = FiniteRing::zmod(12).unwrap();
        let two = r.ideal_generated(&[2]);
        let three = r.ideal_generated(&[3]);
        let (l2, _) = r.localize_at_prime(&two).unwrap();
        let (l3, _) = r.localize_at_prime(&three).unwrap();
        assert!(l2.is_isomorphic(&FiniteRing::zmod(4).unwrap()));
        assert!(l3.is_isomorphic(&FiniteRing::zmod(3).unwrap()));
        assert!(matches!(r.localize_at_prime(&r.ideal_generated(&[4])), Err(RingError::NotPrime(_))));
    }

    #[test]
    fn local_ring_localizes_to_itself() {
        let r = FiniteRing::zmod(8).unwrap();
        let m = r.maximal_ideals();
        assert_eq!(m.len(), 1);
        let (l, map) = r.localize_at_prime(&m[0]).unwrap();
        assert_eq!(l, r);
        assert_eq!(map, RingHom::identity(&r));
    }

    #[test]
    fn locality() {
        assert!(!FiniteRing::zmod(6).unwrap().is_local());
        assert!(FiniteRing::zmod(2).unwrap().is_local());
        assert!(FiniteRing::zmod(9).unwrap().is_local());
    }

    #[test]
    fn products_and_isomorphisms() {
        let z4 = FiniteRing::zmod(4).unwrap();
        let z3 = FiniteRing::zmod(3).unwrap();
        let p = FiniteRing::product(&[&z4, &z3], 64).unwrap();
        assert!(p.is_isomorphic(&FiniteRing::zmod(12).unwrap()));
        let z2 = FiniteRing::zmod(2).unwrap();
        let f2f2 = FiniteRing::product(&[&z2, &z2], 64).unwrap();
        assert!(!f2f2.is_isomorphic(&z4));
        assert_eq!(f2f2.characteristic(), 2);
        assert!(matches!(FiniteRing::product(&[&z4, &z4, &z4, &z4], 64), Err(RingError::TooLarge { .. })));
    }

    #[test]
    fn rejects_non_rings() {
        let elements = vec!["0".to_string(), "1".to_string()];
        let add = vec![vec![0, 1], vec![1, 0]];
        let mul = vec![vec![0, 1], vec![0, 1]];
        assert!(matches!(FiniteRing::from_tables(elements, add, mul, false), Err(RingError::NotARing(_))));
    }

    #[test]
    fn hom_validation() {
        let z4 = FiniteRing::zmod(4).unwrap();
        let z2 = FiniteRing::zmod(2).unwrap();
        assert!(RingHom::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).is_ok());
        assert!(RingHom::new(z2, z4, vec![0, 1]).is_err());
    }
}
