//! Finite topological spaces, their specialization order, covers and refinements.
//!
//! Points are stored sorted by label, so point indices follow label order.
//! Subsets of points are bit sets; spaces are limited to 64 points.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_POINTS: usize = 64;

/// A set of point indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PointSet(u64);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub fn full(n: usize) -> PointSet {
        if n >= 64 {
            PointSet(u64::MAX)
        } else {
            PointSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> PointSet {
        PointSet(1 << i)
    }

    pub fn from_bits(bits: u64) -> PointSet {
        PointSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: PointSet) -> PointSet {
        PointSet(self.0 | other.0)
    }

    pub fn intersection(self, other: PointSet) -> PointSet {
        PointSet(self.0 & other.0)
    }

    pub fn difference(self, other: PointSet) -> PointSet {
        PointSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: PointSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }
}

impl FromIterator<usize> for PointSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = PointSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("a space needs at least one point")]
    NoPoints,
    #[error("duplicate point label {0:?}")]
    DuplicatePoint(String),
    #[error("{0} points exceed the supported maximum of 64")]
    TooManyPoints(usize),
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
    #[error("the {missing} set is not among the opens")]
    MissingEmptyOrFull { missing: &'static str },
    #[error("union of {first:?} and {second:?} is not open")]
    NotClosedUnderUnion { first: Vec<String>, second: Vec<String> },
    #[error("intersection of {first:?} and {second:?} is not open")]
    NotClosedUnderIntersection { first: Vec<String>, second: Vec<String> },
    #[error("{0:?} is not an open set")]
    NotAnOpen(Vec<String>),
    #[error("cover members do not union to the target {target:?}")]
    NotACover { target: Vec<String> },
    #[error("covers target different opens")]
    TargetMismatch,
    #[error("fine member {member:?} lies in no coarse member")]
    NotARefinement { member: Vec<String> },
}

/// A finite T0 space given by its lattice of opens.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteSpace {
    labels: Vec<String>,
    /// Sorted by (cardinality, bits): index 0 is the empty set, the last index the full set.
    opens: Vec<PointSet>,
    minimal: Vec<PointSet>,
    index: HashMap<PointSet, usize>,
}

/// Result of validation: the T0 space plus the collapse of the input points onto it.
#[derive(Clone, Debug)]
pub struct Validated {
    pub space: FiniteSpace,
    /// Input label to the label of its class in the Kolmogorov quotient.
    pub collapse: BTreeMap<String, String>,
}

impl Validated {
    pub fn was_t0(&self) -> bool {
        self.collapse.iter().all(|(a, b)| a == b)
    }
}

/// Validates a topology given by explicit opens (the empty set is implied). Non-T0 inputs are replaced by
/// their Kolmogorov quotient; each class is named by its least label.
pub fn validate_space<P: AsRef<str>, Q: AsRef<str>>(points: &[P], opens: &[Vec<Q>]) -> Result<Validated, SpaceError> {
    if points.is_empty() {
        return Err(SpaceError::NoPoints);
    }
    if points.len() > MAX_POINTS {
        return Err(SpaceError::TooManyPoints(points.len()));
    }
    let mut labels: Vec<String> = points.iter().map(|p| p.as_ref().to_string()).collect();
    labels.sort();
    if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
        return Err(SpaceError::DuplicatePoint(w[0].clone()));
    }
    let pos: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let mut sets = BTreeSet::new();
    for open in opens {
        let mut s = PointSet::EMPTY;
        for p in open {
            let &i = pos.get(p.as_ref()).ok_or_else(|| SpaceError::UnknownPoint(p.as_ref().to_string()))?;
            s.insert(i);
        }
        sets.insert(s);
    }
    let n = labels.len();
    let full = PointSet::full(n);
    // The empty set is implied.
    sets.insert(PointSet::EMPTY);
    if !sets.contains(&full) {
        return Err(SpaceError::MissingEmptyOrFull { missing: "full" });
    }
    let name = |s: PointSet| -> Vec<String> { s.iter().map(|i| labels[i].clone()).collect() };
    let list: Vec<PointSet> = sets.iter().copied().collect();
    for (k, &a) in list.iter().enumerate() {
        for &b in &list[k + 1..] {
            if !sets.contains(&a.union(b)) {
                return Err(SpaceError::NotClosedUnderUnion { first: name(a), second: name(b) });
            }
            if !sets.contains(&a.intersection(b)) {
                return Err(SpaceError::NotClosedUnderIntersection { first: name(a), second: name(b) });
            }
        }
    }

    let minimal: Vec<PointSet> =
        (0..n).map(|x| list.iter().filter(|o| o.contains(x)).fold(full, |acc, o| acc.intersection(*o))).collect();
    // Class representative: least index with the same minimal open.
    let rep: Vec<usize> = (0..n).map(|x| (0..n).find(|&y| minimal[y] == minimal[x]).unwrap()).collect();
    let reps: Vec<usize> = (0..n).filter(|&x| rep[x] == x).collect();
    let mut collapse = BTreeMap::new();
    for x in 0..n {
        collapse.insert(labels[x].clone(), labels[rep[x]].clone());
    }
    if reps.len() == n {
        return Ok(Validated { space: FiniteSpace::build(labels, list), collapse });
    }
    let new_index: HashMap<usize, usize> = reps.iter().enumerate().map(|(k, &x)| (x, k)).collect();
    let qlabels: Vec<String> = reps.iter().map(|&x| labels[x].clone()).collect();
    let qopens: BTreeSet<PointSet> = list.iter().map(|o| o.iter().map(|x| new_index[&rep[x]]).collect()).collect();
    Ok(Validated { space: FiniteSpace::build(qlabels, qopens.into_iter().collect()), collapse })
}

impl FiniteSpace {
    /// Validates and returns the T0 space (the Kolmogorov quotient if the input was not T0).
    pub fn new<P: AsRef<str>, Q: AsRef<str>>(points: &[P], opens: &[Vec<Q>]) -> Result<FiniteSpace, SpaceError> {
        Ok(validate_space(points, opens)?.space)
    }

    fn build(labels: Vec<String>, mut opens: Vec<PointSet>) -> FiniteSpace {
        opens.sort_by_key(|o| (o.len(), o.bits()));
        opens.dedup();
        let n = labels.len();
        let full = PointSet::full(n);
        let minimal =
            (0..n).map(|x| opens.iter().filter(|o| o.contains(x)).fold(full, |acc, o| acc.intersection(*o))).collect();
        let index = opens.iter().enumerate().map(|(i, o)| (*o, i)).collect();
        FiniteSpace { labels, opens, minimal, index }
    }

    /// The Alexandrov topology of a partial order: opens are the down-sets.
    /// `below(x, y)` is the order relation `x ⊑ y` on indices into `labels`.
    pub fn from_order<P: AsRef<str>>(labels: &[P], below: impl Fn(usize, usize) -> bool) -> Result<FiniteSpace, SpaceError> {
        let n = labels.len();
        if n == 0 {
            return Err(SpaceError::NoPoints);
        }
        if n > 16 {
            return Err(SpaceError::TooManyPoints(n));
        }
        let mut opens = Vec::new();
        for bits in 0..(1u64 << n) {
            let s = PointSet(bits);
            let down_closed = s.iter().all(|y| (0..n).all(|x| !below(x, y) || s.contains(x)));
            if down_closed {
                opens.push(s.iter().map(|i| labels[i].as_ref().to_string()).collect::<Vec<_>>());
            }
        }
        FiniteSpace::new(labels, &opens)
    }

    pub fn one_point() -> FiniteSpace {
        FiniteSpace::new(&["x"], &[vec!["x"]]).expect("valid")
    }

    /// Two points `a ⊏ b` with opens `∅, {a}, {a,b}`.
    pub fn sierpinski() -> FiniteSpace {
        FiniteSpace::new(&["a", "b"], &[vec!["a"], vec!["a", "b"]]).expect("valid")
    }

    /// Four points `a, b` open, `c, d` closed: the finite model of the circle.
    pub fn pseudocircle() -> FiniteSpace {
        let opens = [vec!["a"], vec!["b"], vec!["a", "b"], vec!["a", "b", "c"], vec!["a", "b", "d"], vec!["a", "b", "c", "d"]];
        FiniteSpace::new(&["a", "b", "c", "d"], &opens).expect("valid")
    }

    pub fn discrete<P: AsRef<str>>(labels: &[P]) -> Result<FiniteSpace, SpaceError> {
        FiniteSpace::from_order(labels, |x, y| x == y)
    }

    pub fn npoints(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn point(&self, label: &str) -> Result<usize, SpaceError> {
        self.labels.binary_search_by(|l| l.as_str().cmp(label)).map_err(|_| SpaceError::UnknownPoint(label.to_string()))
    }

    pub fn full(&self) -> PointSet {
        PointSet::full(self.npoints())
    }

    pub fn opens(&self) -> &[PointSet] {
        &self.opens
    }

    pub fn nopens(&self) -> usize {
        self.opens.len()
    }

    pub fn open_index(&self, s: PointSet) -> Option<usize> {
        self.index.get(&s).copied()
    }

    pub fn is_open(&self, s: PointSet) -> bool {
        self.index.contains_key(&s)
    }

    pub fn set_from_labels<P: AsRef<str>>(&self, labels: &[P]) -> Result<PointSet, SpaceError> {
        labels.iter().map(|l| self.point(l.as_ref())).collect()
    }

    pub fn set_labels(&self, s: PointSet) -> Vec<String> {
        s.iter().map(|i| self.labels[i].clone()).collect()
    }

    /// Sorted labels joined by `|`; the empty set is the empty string.
    pub fn set_key(&self, s: PointSet) -> String {
        self.set_labels(s).join("|")
    }

    pub fn parse_set_key(&self, key: &str) -> Result<PointSet, SpaceError> {
        if key.is_empty() {
            return Ok(PointSet::EMPTY);
        }
        key.split('|').map(|l| self.point(l)).collect()
    }

    fn require_open(&self, s: PointSet) -> Result<(), SpaceError> {
        if self.is_open(s) {
            Ok(())
        } else {
            Err(SpaceError::NotAnOpen(self.set_labels(s)))
        }
    }

    /// The smallest open containing point `x`.
    pub fn minimal_open(&self, x: usize) -> PointSet {
        self.minimal[x]
    }

    pub fn minimal_open_of(&self, label: &str) -> Result<PointSet, SpaceError> {
        Ok(self.minimal[self.point(label)?])
    }

    /// Specialization order: `x ⊑ y` iff `U_x ⊆ U_y`.
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.minimal[x].is_subset(self.minimal[y])
    }

    pub fn spec_order(&self) -> SpecOrder {
        let n = self.npoints();
        let pairs = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| self.leq(x, y)).collect();
        SpecOrder { size: n, pairs }
    }

    pub fn is_discrete(&self) -> bool {
        (0..self.npoints()).all(|x| self.minimal[x] == PointSet::singleton(x))
    }

    /// Connected components of an open subset, ordered by least point.
    pub fn connected_components(&self, within: PointSet) -> Result<Vec<PointSet>, SpaceError> {
        self.require_open(within)?;
        Ok(self.components_unchecked(within))
    }

    /// Components of an open set: on a down-closed set, connectivity is
    /// reachability through comparable points.
    pub(crate) fn components_unchecked(&self, within: PointSet) -> Vec<PointSet> {
        let mut seen = PointSet::EMPTY;
        let mut out = Vec::new();
        for start in within.iter() {
            if seen.contains(start) {
                continue;
            }
            let mut comp = PointSet::singleton(start);
            let mut frontier = vec![start];
            while let Some(x) = frontier.pop() {
                for y in within.iter() {
                    if !comp.contains(y) && (self.leq(x, y) || self.leq(y, x)) {
                        comp.insert(y);
                        frontier.push(y);
                    }
                }
            }
            seen = seen.union(comp);
            out.push(comp);
        }
        out
    }

    /// The open subspace on `within`, with points relabelled in place.
    pub fn subspace(&self, within: PointSet) -> Result<(FiniteSpace, Vec<usize>), SpaceError> {
        self.require_open(within)?;
        let pts: Vec<usize> = within.iter().collect();
        let labels: Vec<String> = pts.iter().map(|&i| self.labels[i].clone()).collect();
        let opens: Vec<Vec<String>> = self
            .opens
            .iter()
            .filter(|o| o.is_subset(within))
            .map(|o| self.set_labels(*o))
            .chain(std::iter::once(Vec::new()))
            .collect();
        Ok((FiniteSpace::new(&labels, &opens)?, pts))
    }

    pub fn to_file(&self) -> SpaceFile {
        SpaceFile {
            points: self.labels.clone(),
            opens: self.opens.iter().filter(|o| !o.is_empty()).map(|o| self.set_labels(*o)).collect(),
        }
    }
}

impl fmt::Debug for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opens: Vec<String> = self.opens.iter().map(|o| format!("{{{}}}", self.set_labels(*o).join(","))).collect();
        write!(f, "FiniteSpace({:?}; {})", self.labels, opens.join(" "))
    }
}

/// JSON form of a space; the empty open is implied.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceFile {
    pub points: Vec<String>,
    pub opens: Vec<Vec<String>>,
}

impl SpaceFile {
    pub fn validate(&self) -> Result<Validated, SpaceError> {
        validate_space(&self.points, &self.opens)
    }
}

/// The specialization order as an explicit relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecOrder {
    pub size: usize,
    pub pairs: Vec<(usize, usize)>,
}

impl SpecOrder {
    pub fn related(&self, x: usize, y: usize) -> bool {
        self.pairs.binary_search(&(x, y)).is_ok()
    }

    pub fn is_partial_order(&self) -> bool {
        let n = self.size;
        (0..n).all(|x| self.related(x, x))
            && (0..n).all(|x| (0..n).all(|y| x == y || !(self.related(x, y) && self.related(y, x))))
            && self.pairs.iter().all(|&(x, y)| (0..n).all(|z| !self.related(y, z) || self.related(x, z)))
    }
}

/// An ordered list of opens whose union is a target open.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    target: PointSet,
    members: Vec<PointSet>,
}

impl Cover {
    pub fn new(space: &FiniteSpace, target: PointSet, members: Vec<PointSet>) -> Result<Cover, SpaceError> {
        space.require_open(target)?;
        for m in &members {
            space.require_open(*m)?;
        }
        let union = members.iter().fold(PointSet::EMPTY, |acc, m| acc.union(*m));
        if union != target {
            return Err(SpaceError::NotACover { target: space.set_labels(target) });
        }
        Ok(Cover { target, members })
    }

    /// `{U_x : x ∈ target}` in point order.
    pub fn canonical(space: &FiniteSpace, target: PointSet) -> Result<Cover, SpaceError> {
        space.require_open(target)?;
        Ok(Cover { target, members: target.iter().map(|x| space.minimal_open(x)).collect() })
    }

    pub fn target(&self) -> PointSet {
        self.target
    }

    pub fn members(&self) -> &[PointSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Assigns to each fine member the least-index coarse member containing it.
pub fn refine_cover(space: &FiniteSpace, coarse: &Cover, fine: &Cover) -> Result<Vec<usize>, SpaceError> {
    let assignment = fine
        .members
        .iter()
        .map(|f| {
            coarse
                .members
                .iter()
                .position(|c| f.is_subset(*c))
                .ok_or_else(|| SpaceError::NotARefinement { member: space.set_labels(*f) })
        })
        .collect::<Result<Vec<_>, _>>()?;
    if coarse.target != fine.target {
        return Err(SpaceError::TargetMismatch);
    }
    Ok(assignment)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(space: &FiniteSpace, labels: &[&str]) -> PointSet {
        space.set_from_labels(labels).unwrap()
    }

    #[test]
    fn small_spaces_validate() {
        let one = validate_space(&["x"], &[vec![], vec!["x"]]).unwrap();
        assert!(one.was_t0());
        assert_eq!(one.space.nopens(), 2);
        let s = FiniteSpace::sierpinski();
        let (a, b) = (s.point("a").unwrap(), s.point("b").unwrap());
        assert!(s.leq(a, b) && !s.leq(b, a));
    }

    #[test]
    fn missing_full_set() {
        let err = validate_space(&["a", "b"], &[vec![], vec!["a"]]).unwrap_err();
        assert_eq!(err, SpaceError::MissingEmptyOrFull { missing: "full" });
    }

    #[test]
    fn closure_errors_name_witnesses() {
        let err = validate_space(&["a", "b", "c"], &[vec![], vec!["a"], vec!["b"], vec!["a", "b", "c"]]).unwrap_err();
        assert!(matches!(err, SpaceError::NotClosedUnderUnion { .. }));
        let err = validate_space(&["a", "b", "c"], &[vec![], vec!["a", "b"], vec!["b", "c"], vec!["a", "b", "c"]])
            .unwrap_err();
        assert_eq!(
            err,
            SpaceError::NotClosedUnderIntersection { first: vec!["a".into(), "b".into()], second: vec!["b".into(), "c".into()] }
        );
    }

    #[test]
    fn kolmogorov_quotient_collapses_indistinguishable_points() {
        let v = validate_space(&["a", "b", "c"], &[vec![], vec!["a", "b"], vec!["a", "b", "c"]]).unwrap();
        assert!(!v.was_t0());
        assert_eq!(v.space.labels(), ["a", "c"]);
        assert_eq!(v.collapse["b"], "a");
        let again = validate_space(v.space.labels(), &v.space.to_file().opens.iter().cloned().chain([vec![]]).collect::<Vec<_>>()).unwrap();
        assert!(again.was_t0());
        assert_eq!(again.space, v.space);
    }

    #[test]
    fn minimal_opens() {
        let s = FiniteSpace::sierpinski();
        assert_eq!(s.minimal_open_of("b").unwrap(), s.full());
        let pc = FiniteSpace::pseudocircle();
        assert_eq!(pc.minimal_open_of("c").unwrap(), set(&pc, &["a", "b", "c"]));
        assert_eq!(pc.minimal_open_of("a").unwrap(), set(&pc, &["a"]));
        assert!(matches!(pc.minimal_open_of("z"), Err(SpaceError::UnknownPoint(_))));
    }

    #[test]
    fn components() {
        let d = FiniteSpace::discrete(&["a", "b"]).unwrap();
        assert_eq!(d.connected_components(d.full()).unwrap(), vec![set(&d, &["a"]), set(&d, &["b"])]);
        let pc = FiniteSpace::pseudocircle();
        assert_eq!(pc.connected_components(pc.full()).unwrap().len(), 1);
        assert_eq!(pc.connected_components(set(&pc, &["a", "b"])).unwrap(), vec![set(&pc, &["a"]), set(&pc, &["b"])]);
        assert!(matches!(pc.connected_components(set(&pc, &["c"])), Err(SpaceError::NotAnOpen(_))));
    }

    #[test]
    fn refinements() {
        let pc = FiniteSpace::pseudocircle();
        let x = pc.full();
        let u = |l: &str| pc.minimal_open_of(l).unwrap();
        let trivial = Cover::new(&pc, x, vec![x]).unwrap();
        let fine = Cover::new(&pc, x, vec![u("a"), u("b"), u("c"), u("d")]).unwrap();
        assert_eq!(refine_cover(&pc, &trivial, &fine).unwrap(), vec![0, 0, 0, 0]);
        let coarse = Cover::new(&pc, x, vec![u("c"), u("d")]).unwrap();
        assert_eq!(refine_cover(&pc, &coarse, &fine).unwrap(), vec![0, 0, 0, 1]);
        let only_a = Cover::new(&pc, u("a"), vec![u("a")]).unwrap();
        assert_eq!(
            refine_cover(&pc, &only_a, &trivial),
            Err(SpaceError::NotARefinement { member: vec!["a".into(), "b".into(), "c".into(), "d".into()] })
        );
        assert_eq!(refine_cover(&pc, &trivial, &only_a), Err(SpaceError::TargetMismatch));
        assert!(matches!(refine_cover(&pc, &coarse, &trivial), Err(SpaceError::NotARefinement { .. })));
        assert_eq!(refine_cover(&pc, &fine, &fine).unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn from_order_matches_explicit_topology() {
        let labels = ["a", "b", "c", "d"];
        let below = |x: usize, y: usize| x == y || (x < 2 && y >= 2);
        assert_eq!(FiniteSpace::from_order(&labels, below).unwrap(), FiniteSpace::pseudocircle());
        assert!(FiniteSpace::pseudocircle().spec_order().is_partial_order());
    }
}
