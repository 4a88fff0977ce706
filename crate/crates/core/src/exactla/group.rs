//! Finitely generated abelian groups and homomorphisms between them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::IntMatrix;
use super::quotient::Quotient;
use super::AlgebraError;

/// A direct sum of cyclic groups in a fixed generator order.
///
/// Order `0` stands for a copy of `Z`, order `d >= 2` for `Z/d`. This is the
/// working representation for cochain groups: direct sums just concatenate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CyclicSum {
    orders: Vec<BigInt>,
}

impl CyclicSum {
    pub fn new(orders: Vec<BigInt>) -> Result<Self, AlgebraError> {
        if let Some(bad) = orders.iter().find(|d| d.is_negative() || d.is_one()) {
            return Err(AlgebraError::InvalidGroup(format!(
                "cyclic order {bad} is not 0 or at least 2"
            )));
        }
        Ok(CyclicSum { orders })
    }

    pub fn zero() -> Self {
        CyclicSum { orders: Vec::new() }
    }

    /// `Z^n`.
    pub fn free(n: usize) -> Self {
        CyclicSum { orders: vec![BigInt::zero(); n] }
    }

    /// `Z/d`, or the trivial group when `d == 1`.
    pub fn cyclic(d: u64) -> Self {
        match d {
            1 => Self::zero(),
            _ => CyclicSum { orders: vec![BigInt::from(d)] },
        }
    }

    pub fn direct_sum<'a>(parts: impl IntoIterator<Item = &'a CyclicSum>) -> Self {
        CyclicSum { orders: parts.into_iter().flat_map(|p| p.orders.iter().cloned()).collect() }
    }

    /// Number of generators.
    pub fn ngens(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[BigInt] {
        &self.orders
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }

    /// Reduces a coordinate vector: torsion coordinates go to `[0, d)`.
    pub fn reduce(&self, x: &mut [BigInt]) {
        for (v, d) in x.iter_mut().zip(&self.orders) {
            if !d.is_zero() {
                *v = v.mod_floor(d);
            }
        }
    }

    pub fn is_zero_element(&self, x: &[BigInt]) -> bool {
        x.iter()
            .zip(&self.orders)
            .all(|(v, d)| if d.is_zero() { v.is_zero() } else { v.is_multiple_of(d) })
    }

    /// Relation matrix: one column `d * e_i` per torsion generator.
    pub fn relation_matrix(&self) -> IntMatrix {
        let torsion: Vec<usize> = (0..self.ngens()).filter(|&i| !self.orders[i].is_zero()).collect();
        let mut r = IntMatrix::zeros(self.ngens(), torsion.len());
        for (c, &i) in torsion.iter().enumerate() {
            r[(i, c)] = self.orders[i].clone();
        }
        r
    }

    /// Isomorphism class in invariant-factor form.
    pub fn canonical(&self) -> FgAbGroup {
        Quotient::new(self.ngens(), &self.relation_matrix()).group().clone()
    }

    /// Exact order when finite, `None` for groups with a free part.
    pub fn order(&self) -> Option<BigInt> {
        self.orders.iter().try_fold(BigInt::one(), |acc, d| (!d.is_zero()).then(|| acc * d))
    }
}

/// Finitely generated abelian group in canonical invariant-factor form:
/// `Z^rank (+) Z/d_1 (+) ... (+) Z/d_k` with `d_1 | d_2 | ... | d_k`, all `d_i >= 2`.
///
/// Isomorphic groups have equal values, so `==` is the isomorphism test.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FgAbGroup {
    rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbGroup {
    pub fn new(rank: usize, torsion: Vec<BigInt>) -> Result<Self, AlgebraError> {
        for d in &torsion {
            if *d < BigInt::from(2) {
                return Err(AlgebraError::InvalidGroup(format!("invariant factor {d} is below 2")));
            }
        }
        for w in torsion.windows(2) {
            if !w[1].is_multiple_of(&w[0]) {
                return Err(AlgebraError::InvalidGroup(format!(
                    "invariant factors {} and {} break the divisibility chain",
                    w[0], w[1]
                )));
            }
        }
        Ok(FgAbGroup { rank, torsion })
    }

    pub(crate) fn new_unchecked(rank: usize, torsion: Vec<BigInt>) -> Self {
        FgAbGroup { rank, torsion }
    }

    pub fn trivial() -> Self {
        FgAbGroup::default()
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup { rank, torsion: Vec::new() }
    }

    pub fn cyclic(d: u64) -> Self {
        CyclicSum::cyclic(d).canonical()
    }

    /// Shorthand for tests and examples: `group(1, &[2, 4])` is `Z (+) Z/2 (+) Z/4`.
    pub fn from_parts(rank: usize, torsion: &[u64]) -> Result<Self, AlgebraError> {
        Self::new(rank, torsion.iter().map(|&d| BigInt::from(d)).collect())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn ngens(&self) -> usize {
        self.rank + self.torsion.len()
    }

    /// Generators ordered free-first.
    pub fn to_cyclic(&self) -> CyclicSum {
        let mut orders = vec![BigInt::zero(); self.rank];
        orders.extend(self.torsion.iter().cloned());
        CyclicSum { orders }
    }

    /// Canonical form of a direct sum.
    pub fn direct_sum<'a>(parts: impl IntoIterator<Item = &'a FgAbGroup>) -> FgAbGroup {
        let cyc: Vec<CyclicSum> = parts.into_iter().map(FgAbGroup::to_cyclic).collect();
        CyclicSum::direct_sum(&cyc).canonical()
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" (+) "))
    }
}

#[derive(Serialize, Deserialize)]
struct GroupLiteral {
    rank: usize,
    #[serde(default)]
    torsion: Vec<serde_json::Number>,
}

pub(crate) fn big_to_json(v: &BigInt) -> serde_json::Number {
    match (v.to_u64(), v.to_i64()) {
        (Some(u), _) => u.into(),
        (None, Some(i)) => i.into(),
        // Out-of-range integers keep their exact digits.
        _ => v.to_string().parse().expect("decimal integer is a JSON number"),
    }
}

pub(crate) fn json_to_big(n: &serde_json::Number) -> Option<BigInt> {
    if let Some(i) = n.as_i64() {
        return Some(BigInt::from(i));
    }
    if let Some(u) = n.as_u64() {
        return Some(BigInt::from(u));
    }
    n.to_string().parse().ok()
}

impl Serialize for FgAbGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        GroupLiteral { rank: self.rank, torsion: self.torsion.iter().map(big_to_json).collect() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FgAbGroup {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let lit = GroupLiteral::deserialize(deserializer)?;
        let torsion = lit
            .torsion
            .iter()
            .map(|n| json_to_big(n).ok_or_else(|| D::Error::custom(format!("bad integer {n}"))))
            .collect::<Result<Vec<_>, _>>()?;
        FgAbGroup::new(lit.rank, torsion).map_err(D::Error::custom)
    }
}

/// Homomorphism between [`CyclicSum`]s given by an integer matrix acting on
/// generator coordinates (target generators x source generators).
///
/// Rows belonging to torsion generators of the target are stored reduced
/// modulo their order, so structural equality is equality of maps.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupMap {
    source: CyclicSum,
    target: CyclicSum,
    matrix: IntMatrix,
}

impl GroupMap {
    pub fn new(source: CyclicSum, target: CyclicSum, matrix: IntMatrix) -> Result<Self, AlgebraError> {
        if matrix.nrows() != target.ngens() || matrix.ncols() != source.ngens() {
            return Err(AlgebraError::ShapeMismatch(format!(
                "matrix is {}x{} but the map goes from {} to {} generators",
                matrix.nrows(),
                matrix.ncols(),
                source.ngens(),
                target.ngens()
            )));
        }
        for (j, d) in source.orders().iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            let image: Vec<BigInt> = matrix.column(j).iter().map(|a| a * d).collect();
            if !target.is_zero_element(&image) {
                return Err(AlgebraError::InvalidMap(format!(
                    "generator {j} has order {d} but its image does not"
                )));
            }
        }
        Ok(Self::normalized(source, target, matrix))
    }

    fn normalized(source: CyclicSum, target: CyclicSum, mut matrix: IntMatrix) -> Self {
        for (i, d) in target.orders().iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            for j in 0..matrix.ncols() {
                let v = matrix[(i, j)].mod_floor(d);
                matrix[(i, j)] = v;
            }
        }
        GroupMap { source, target, matrix }
    }

    pub fn zero(source: CyclicSum, target: CyclicSum) -> Self {
        let matrix = IntMatrix::zeros(target.ngens(), source.ngens());
        GroupMap { source, target, matrix }
    }

    pub fn identity(group: &CyclicSum) -> Self {
        GroupMap { source: group.clone(), target: group.clone(), matrix: IntMatrix::identity(group.ngens()) }
    }

    /// Multiplication by `c` on `Z^n`-style groups and torsion alike.
    pub fn scalar(group: &CyclicSum, c: i64) -> Self {
        let matrix = IntMatrix::identity(group.ngens()).scale(&BigInt::from(c));
        Self::normalized(group.clone(), group.clone(), matrix)
    }

    pub fn source(&self) -> &CyclicSum {
        &self.source
    }

    pub fn target(&self) -> &CyclicSum {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        let mut y = self.matrix.mul_vec(x);
        self.target.reduce(&mut y);
        y
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &GroupMap) -> Result<GroupMap, AlgebraError> {
        if first.target != self.source {
            return Err(AlgebraError::ShapeMismatch(format!(
                "cannot compose: inner target has {} generators, outer source has {}",
                first.target.ngens(),
                self.source.ngens()
            )));
        }
        Ok(Self::normalized(first.source.clone(), self.target.clone(), self.matrix.mul(&first.matrix)))
    }

    pub fn add(&self, other: &GroupMap) -> Result<GroupMap, AlgebraError> {
        if self.source != other.source || self.target != other.target {
            return Err(AlgebraError::ShapeMismatch("cannot add maps with different endpoints".into()));
        }
        Ok(Self::normalized(self.source.clone(), self.target.clone(), self.matrix.add(&other.matrix)))
    }

    pub fn neg(&self) -> GroupMap {
        Self::normalized(self.source.clone(), self.target.clone(), self.matrix.neg())
    }

    /// Block map `(+)_j sources[j] -> (+)_i targets[i]`; `blocks[i][j]` of
    /// `None` is the zero block.
    pub fn from_blocks(
        sources: &[CyclicSum],
        targets: &[CyclicSum],
        blocks: &[Vec<Option<GroupMap>>],
    ) -> Result<GroupMap, AlgebraError> {
        let source = CyclicSum::direct_sum(sources);
        let target = CyclicSum::direct_sum(targets);
        let mut matrix = IntMatrix::zeros(target.ngens(), source.ngens());
        let mut r0 = 0;
        for (i, t) in targets.iter().enumerate() {
            let mut c0 = 0;
            for (j, s) in sources.iter().enumerate() {
                if let Some(b) = blocks.get(i).and_then(|row| row.get(j)).and_then(Option::as_ref) {
                    if b.source != *s || b.target != *t {
                        return Err(AlgebraError::ShapeMismatch(format!("block ({i}, {j}) has wrong endpoints")));
                    }
                    matrix.set_block(r0, c0, &b.matrix);
                }
                c0 += s.ngens();
            }
            r0 += t.ngens();
        }
        Ok(Self::normalized(source, target, matrix))
    }

    /// True when the map is bijective.
    pub fn is_isomorphism(&self) -> bool {
        let kernel = super::quotient::kernel(self).expect("kernel of a valid map");
        if !kernel.group().is_trivial() {
            return false;
        }
        let rel = self.matrix.hstack(&self.target.relation_matrix());
        Quotient::new(self.target.ngens(), &rel).group().is_trivial()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_merges_coprime_torsion() {
        let g = CyclicSum::new(vec![BigInt::from(2), BigInt::from(3), BigInt::zero()]).unwrap();
        assert_eq!(g.canonical(), FgAbGroup::from_parts(1, &[6]).unwrap());
        let h = CyclicSum::new(vec![BigInt::from(4), BigInt::from(2)]).unwrap();
        assert_eq!(h.canonical(), FgAbGroup::from_parts(0, &[2, 4]).unwrap());
    }

    #[test]
    fn rejects_bad_invariant_factors() {
        assert!(FgAbGroup::from_parts(0, &[2, 3]).is_err());
        assert!(FgAbGroup::from_parts(0, &[1]).is_err());
        assert!(CyclicSum::new(vec![BigInt::one()]).is_err());
    }

    #[test]
    fn display_and_json() {
        let g = FgAbGroup::from_parts(2, &[2, 4]).unwrap();
        assert_eq!(g.to_string(), "Z^2 (+) Z/2 (+) Z/4");
        assert_eq!(FgAbGroup::trivial().to_string(), "0");
        assert_eq!(FgAbGroup::free(1).to_string(), "Z");
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(json, r#"{"rank":2,"torsion":[2,4]}"#);
        assert_eq!(serde_json::from_str::<FgAbGroup>(&json).unwrap(), g);
        assert!(serde_json::from_str::<FgAbGroup>(r#"{"rank":0,"torsion":[4,2]}"#).is_err());
    }

    #[test]
    fn map_validity_respects_torsion() {
        let z2 = CyclicSum::cyclic(2);
        let z4 = CyclicSum::cyclic(4);
        // Z/2 -> Z/4, 1 -> 2 is fine; 1 -> 1 is not a homomorphism.
        assert!(GroupMap::new(z2.clone(), z4.clone(), IntMatrix::from_rows(&[vec![2]])).is_ok());
        assert!(GroupMap::new(z2.clone(), z4.clone(), IntMatrix::from_rows(&[vec![1]])).is_err());
        assert!(GroupMap::new(z2, CyclicSum::free(1), IntMatrix::from_rows(&[vec![1]])).is_err());
    }

    #[test]
    fn isomorphism_detection() {
        let z = CyclicSum::free(1);
        assert!(GroupMap::scalar(&z, -1).is_isomorphism());
        assert!(!GroupMap::scalar(&z, 2).is_isomorphism());
        let z3 = CyclicSum::cyclic(3);
        assert!(GroupMap::scalar(&z3, 2).is_isomorphism());
    }
}
