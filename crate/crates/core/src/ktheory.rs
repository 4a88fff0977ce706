//! Rank models of structural vector bundles, Whitney sums, Grothendieck
//! completion of abelian monoids, and `K^0` of a finite base.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use crate::exactla::{smith_normal_form, FgAbGroup, IntMatrix, TableGroup};
use crate::finspace::{FiniteSpace, PointSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KError {
    #[error("rank at {first} differs from rank at {second} for p = {p} in one component")]
    RankNotLocallyConstant { first: String, second: String, p: usize },
    #[error("bundles live over different bases or fields")]
    BaseMismatch,
    #[error("bundles have {left} and {right} indices")]
    IndexMismatch { left: usize, right: usize },
    #[error("no ranks given for point {0}")]
    MissingPoint(String),
    #[error("ranks given for unknown point {0}")]
    UnknownPoint(String),
    #[error("point {point} has {found} ranks, expected {expected}")]
    WrongRankCount { point: String, expected: usize, found: usize },
    #[error("monoid axioms fail: {0}")]
    MonoidAxiomsFail(String),
    #[error("more than {bound} elements")]
    TooLarge { bound: usize },
}

/// Fiber dimensions of a structural bundle: `ranks[x][p]` over point `x` for index `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleModel {
    base: FiniteSpace,
    field: String,
    ranks: Vec<Vec<u64>>,
    m: usize,
}

/// Checks that each per-index rank function is constant on connected components.
pub fn validate_bundle(base: &FiniteSpace, field: &str, m: usize, ranks: &BTreeMap<String, Vec<u64>>) -> Result<BundleModel, KError> {
    if let Some(unknown) = ranks.keys().find(|k| base.point(k).is_err()) {
        return Err(KError::UnknownPoint(unknown.clone()));
    }
    let mut rows = Vec::with_capacity(base.npoints());
    for label in base.labels() {
        let r = ranks.get(label).ok_or_else(|| KError::MissingPoint(label.clone()))?;
        if r.len() != m {
            return Err(KError::WrongRankCount { point: label.clone(), expected: m, found: r.len() });
        }
        rows.push(r.clone());
    }
    BundleModel::from_rows(base, field, m, rows)
}

impl BundleModel {
    fn from_rows(base: &FiniteSpace, field: &str, m: usize, ranks: Vec<Vec<u64>>) -> Result<BundleModel, KError> {
        for comp in base.connected_components(base.full()).expect("the full set is open") {
            let first = comp.first().expect("components are nonempty");
            for x in comp.iter() {
                if let Some(p) = (0..m).find(|&p| ranks[x][p] != ranks[first][p]) {
                    return Err(KError::RankNotLocallyConstant {
                        first: base.label(first).to_string(),
                        second: base.label(x).to_string(),
                        p: p + 1,
                    });
                }
            }
        }
        Ok(BundleModel { base: base.clone(), field: field.to_string(), ranks, m })
    }

    /// The rank-0 bundle.
    pub fn zero(base: &FiniteSpace, field: &str, m: usize) -> BundleModel {
        BundleModel { base: base.clone(), field: field.to_string(), ranks: vec![vec![0; m]; base.npoints()], m }
    }

    pub fn base(&self) -> &FiniteSpace {
        &self.base
    }

    pub fn field(&self) -> &str {
        &self.field
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rank(&self, x: usize, p: usize) -> u64 {
        self.ranks[x][p]
    }

    /// Canonical form: `[component][p]`, components in the base's component order.
    pub fn rank_matrix(&self) -> Vec<Vec<u64>> {
        components(&self.base).iter().map(|c| self.ranks[c.first().expect("nonempty")].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.ranks.iter().flatten().all(|&r| r == 0)
    }

    /// Fiberwise direct sum, index by index.
    pub fn whitney_sum(&self, other: &BundleModel) -> Result<BundleModel, KError> {
        if self.base != other.base || self.field != other.field {
            return Err(KError::BaseMismatch);
        }
        if self.m != other.m {
            return Err(KError::IndexMismatch { left: self.m, right: other.m });
        }
        let ranks = self.ranks.iter().zip(&other.ranks).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect();
        Ok(BundleModel { base: self.base.clone(), field: self.field.clone(), ranks, m: self.m })
    }
}

fn components(base: &FiniteSpace) -> Vec<PointSet> {
    base.connected_components(base.full()).expect("the full set is open")
}

/// A finite commutative monoid given by its operation table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidTable {
    labels: Vec<String>,
    op: Vec<Vec<usize>>,
    zero: usize,
}

impl MonoidTable {
    /// Checks identity, commutativity and associativity exhaustively.
    pub fn new(labels: Vec<String>, op: Vec<Vec<usize>>) -> Result<MonoidTable, KError> {
        let n = labels.len();
        let fail = |s: String| Err(KError::MonoidAxiomsFail(s));
        if n == 0 {
            return fail("no elements".into());
        }
        if op.len() != n || op.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
            return fail(format!("operation table is not {n}x{n} over the elements"));
        }
        let Some(zero) = (0..n).find(|&z| (0..n).all(|x| op[z][x] == x && op[x][z] == x)) else {
            return fail("no identity element".into());
        };
        for a in 0..n {
            for b in 0..n {
                if op[a][b] != op[b][a] {
                    return fail(format!("{} + {} != {} + {}", labels[a], labels[b], labels[b], labels[a]));
                }
                for c in 0..n {
                    if op[op[a][b]][c] != op[a][op[b][c]] {
                        return fail(format!("not associative on ({}, {}, {})", labels[a], labels[b], labels[c]));
                    }
                }
            }
        }
        Ok(MonoidTable { labels, op, zero })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        self.op[a][b]
    }
}

/// Abelian monoids the completion accepts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AbelianMonoid {
    Table(MonoidTable),
    /// The submonoid of `N^dim` generated by the given vectors.
    Affine { dim: usize, generators: Vec<Vec<u64>> },
}

/// The Grothendieck group with the canonical map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Completion {
    pub group: FgAbGroup,
    /// Canonical coordinates of the image of every table element, or of every generator.
    pub images: Vec<Vec<BigInt>>,
}

/// Pairs `(a1, a2)` modulo `(a1, a2) ~ (b1, b2) iff a1 + b2 + c = b1 + a2 + c`
/// for some `c`, added componentwise.
pub fn grothendieck_complete(m: &AbelianMonoid, bound: usize) -> Result<Completion, KError> {
    match m {
        AbelianMonoid::Table(t) => complete_table(t, bound),
        AbelianMonoid::Affine { dim, generators } => complete_affine(*dim, generators),
    }
}

fn complete_table(t: &MonoidTable, bound: usize) -> Result<Completion, KError> {
    let n = t.len();
    if n > bound {
        return Err(KError::TooLarge { bound });
    }
    // x ≈ y iff x + c = y + c for some c; the pair relation reduces to it.
    let stable: Vec<Vec<bool>> = (0..n).map(|x| (0..n).map(|y| (0..n).any(|c| t.op(x, c) == t.op(y, c))).collect()).collect();
    let mut reps: Vec<(usize, usize)> = Vec::new();
    let mut class = vec![vec![0usize; n]; n];
    for a1 in 0..n {
        for a2 in 0..n {
            let found = reps.iter().position(|&(b1, b2)| stable[t.op(a1, b2)][t.op(b1, a2)]);
            class[a1][a2] = match found {
                Some(k) => k,
                None => {
                    reps.push((a1, a2));
                    reps.len() - 1
                }
            };
        }
    }
    let add: Vec<Vec<usize>> =
        reps.iter().map(|&(a1, a2)| reps.iter().map(|&(b1, b2)| class[t.op(a1, b1)][t.op(a2, b2)]).collect()).collect();
    let g = TableGroup::new(add, class[t.zero()][t.zero()]);
    let images = (0..n).map(|a| g.coordinates(class[a][t.zero()])).collect();
    Ok(Completion { group: g.group().clone(), images })
}

fn complete_affine(dim: usize, generators: &[Vec<u64>]) -> Result<Completion, KError> {
    if let Some(g) = generators.iter().find(|g| g.len() != dim) {
        return Err(KError::MonoidAxiomsFail(format!("generator {g:?} does not lie in N^{dim}")));
    }
    // N^dim is cancellative, so the completion is the subgroup of Z^dim the generators span.
    let cols: Vec<Vec<BigInt>> = generators.iter().map(|g| g.iter().map(|&v| BigInt::from(v)).collect()).collect();
    let a = IntMatrix::from_columns(dim, &cols);
    let snf = smith_normal_form(&a);
    let s = snf.diagonal();
    let r = snf.rank();
    let images = cols
        .iter()
        .map(|v| {
            let uv = snf.u.mul_vec(v);
            (0..r)
                .map(|i| {
                    let (q, rem) = uv[i].div_rem(&s[i]);
                    debug_assert!(rem.is_zero());
                    q
                })
                .collect()
        })
        .collect();
    Ok(Completion { group: FgAbGroup::free(r), images })
}

/// All rank matrices over `base` with entries at most `rank_bound`, as
/// generators of the iso-class monoid.
pub fn rank_monoid(base: &FiniteSpace, m: usize, rank_bound: u64) -> AbelianMonoid {
    let dim = components(base).len() * m;
    let mut generators = Vec::new();
    let mut v = vec![0u64; dim];
    loop {
        generators.push(v.clone());
        let Some(k) = (0..dim).find(|&k| v[k] < rank_bound) else { break };
        v[k] += 1;
        for slot in v.iter_mut().take(k) {
            *slot = 0;
        }
    }
    AbelianMonoid::Affine { dim, generators }
}

/// `K^0` with one generator label per (component, index).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K0 {
    pub group: FgAbGroup,
    pub generators: Vec<String>,
}

/// Completion of the rank-matrix monoid of bundles over `base` with `m` indices.
pub fn k0(base: &FiniteSpace, m: usize) -> K0 {
    let completion = grothendieck_complete(&rank_monoid(base, m, 1), usize::MAX).expect("rank vectors lie in N^{c·m}");
    let generators = components(base)
        .iter()
        .flat_map(|c| (1..=m).map(move |p| (*c, p)))
        .map(|(c, p)| format!("[{{{}}}, p={p}]", base.set_labels(c).join(",")))
        .collect();
    K0 { group: completion.group, generators }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ranks(pairs: &[(&str, Vec<u64>)]) -> BTreeMap<String, Vec<u64>> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
    }

    #[test]
    fn constant_ranks_on_pseudocircle() {
        let x = FiniteSpace::pseudocircle();
        let e = validate_bundle(&x, "R", 1, &ranks(&[("a", vec![1]), ("b", vec![1]), ("c", vec![1]), ("d", vec![1])])).unwrap();
        assert_eq!(e.rank_matrix(), vec![vec![1]]);
        let bad = validate_bundle(&x, "R", 1, &ranks(&[("a", vec![1]), ("b", vec![1]), ("c", vec![1]), ("d", vec![2])]));
        assert!(matches!(bad, Err(KError::RankNotLocallyConstant { p: 1, .. })));
    }

    #[test]
    fn whitney_sum_adds() {
        let x = FiniteSpace::one_point();
        let e1 = validate_bundle(&x, "R", 1, &ranks(&[("x", vec![1])])).unwrap();
        let e2 = validate_bundle(&x, "R", 1, &ranks(&[("x", vec![2])])).unwrap();
        assert_eq!(e1.whitney_sum(&e2).unwrap().rank_matrix(), vec![vec![3]]);
        assert_eq!(e1.whitney_sum(&BundleModel::zero(&x, "R", 1)).unwrap(), e1);
        assert!(matches!(e1.whitney_sum(&BundleModel::zero(&x, "R", 2)), Err(KError::IndexMismatch { .. })));
        assert!(matches!(e1.whitney_sum(&BundleModel::zero(&x, "C", 1)), Err(KError::BaseMismatch)));
    }

    #[test]
    fn k0_examples() {
        assert_eq!(k0(&FiniteSpace::pseudocircle(), 2).group, FgAbGroup::free(2));
        assert_eq!(k0(&FiniteSpace::discrete(&["a", "b"]).unwrap(), 2).group, FgAbGroup::free(4));
        assert_eq!(k0(&FiniteSpace::sierpinski(), 1).generators, vec!["[{a,b}, p=1]".to_string()]);
    }

    #[test]
    fn idempotent_monoid_completes_to_zero() {
        let t = MonoidTable::new(vec!["0".into(), "a".into()], vec![vec![0, 1], vec![1, 1]]).unwrap();
        let c = grothendieck_complete(&AbelianMonoid::Table(t), 64).unwrap();
        assert!(c.group.is_trivial());
    }

    #[test]
    fn cyclic_group_table_is_its_own_completion() {
        let n = 6;
        let t = MonoidTable::new((0..n).map(|i| i.to_string()).collect(), (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()).unwrap();
        assert_eq!(grothendieck_complete(&AbelianMonoid::Table(t), 64).unwrap().group, FgAbGroup::cyclic(6));
    }

    #[test]
    fn naturals_complete_to_z() {
        let c = grothendieck_complete(&AbelianMonoid::Affine { dim: 1, generators: vec![vec![1]] }, 64).unwrap();
        assert_eq!(c.group, FgAbGroup::free(1));
        let c = grothendieck_complete(&AbelianMonoid::Affine { dim: 1, generators: vec![vec![2], vec![3]] }, 64).unwrap();
        assert_eq!(c.group, FgAbGroup::free(1));
    }

    #[test]
    fn monoid_axioms_are_checked() {
        assert!(MonoidTable::new(vec!["0".into(), "a".into()], vec![vec![0, 1], vec![0, 1]]).is_err());
    }
}
