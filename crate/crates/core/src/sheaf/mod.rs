//! Presheaves and sheaves on finite spaces.
//!
//! A presheaf stores a value for every open and a restriction for every
//! inclusion `U ⊆ V`. Only some restrictions need to be supplied; the rest
//! are composed along chains of supplied ones. The value at the empty set is
//! always the terminal object.

mod abelian;
mod structured;

pub use abelian::{Axiom, SheafViolation, Stalk};
pub use structured::{bundle, decompose_structured};

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::exactla::{AlgebraError, CyclicSum, GroupMap};
use crate::finspace::{FiniteSpace, PointSet, SpaceError};
use crate::ringspec::{FiniteRing, RingHom};
use crate::strcat::{Carrier, Component, StructureTag, StructuredFamily, StructuredHom};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SheafError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("expected {expected} values, one per open, got {found}")]
    WrongValueCount { expected: usize, found: usize },
    #[error("restriction {sub:?} <= {sup:?} is not an inclusion of opens")]
    NotAnInclusion { sub: Vec<String>, sup: Vec<String> },
    #[error("restriction {sub:?} <= {sup:?} does not go from F(V) to F(U)")]
    RestrictionEndpoints { sub: Vec<String>, sup: Vec<String> },
    #[error("no restriction given or derivable for {sub:?} <= {sup:?}")]
    MissingRestriction { sub: Vec<String>, sup: Vec<String> },
    #[error("restrictions cannot be composed: {0}")]
    Composition(String),
    #[error("presheaf laws fail: {0}")]
    PresheafLawsViolated(String),
    #[error("value at {open:?} is not partitionable")]
    NotPartitionable { open: Vec<String> },
    #[error("index sets differ at {open:?}: {reason}")]
    IndexSetMismatch { open: Vec<String>, reason: String },
    #[error("tag of entry {p} at {open:?} is {found}, expected {expected}")]
    TagMismatch { open: Vec<String>, p: usize, expected: StructureTag, found: StructureTag },
    #[error("component has values of kind {found}, expected {expected}")]
    WrongValueKind { expected: &'static str, found: String },
}

/// Morphisms a presheaf can take values in.
pub trait Arrow: Clone + PartialEq + fmt::Debug {
    type Object: Clone + PartialEq + fmt::Debug;

    fn source(&self) -> Self::Object;
    fn target(&self) -> Self::Object;
    fn identity(object: &Self::Object) -> Self;
    /// `self ∘ first`.
    fn compose(&self, first: &Self) -> Result<Self, String>;
    /// The terminal object of the same kind as `object`.
    fn terminal_like(object: &Self::Object) -> Self::Object;
    fn to_terminal(object: &Self::Object) -> Self;
}

impl Arrow for GroupMap {
    type Object = CyclicSum;

    fn source(&self) -> CyclicSum {
        GroupMap::source(self).clone()
    }

    fn target(&self) -> CyclicSum {
        GroupMap::target(self).clone()
    }

    fn identity(object: &CyclicSum) -> Self {
        GroupMap::identity(object)
    }

    fn compose(&self, first: &Self) -> Result<Self, String> {
        GroupMap::compose(self, first).map_err(|e| e.to_string())
    }

    fn terminal_like(_: &CyclicSum) -> CyclicSum {
        CyclicSum::zero()
    }

    fn to_terminal(object: &CyclicSum) -> Self {
        GroupMap::zero(object.clone(), CyclicSum::zero())
    }
}

impl Arrow for RingHom {
    type Object = FiniteRing;

    fn source(&self) -> FiniteRing {
        RingHom::source(self).clone()
    }

    fn target(&self) -> FiniteRing {
        RingHom::target(self).clone()
    }

    fn identity(object: &FiniteRing) -> Self {
        RingHom::identity(object)
    }

    fn compose(&self, first: &Self) -> Result<Self, String> {
        RingHom::compose(self, first).map_err(|e| e.to_string())
    }

    fn terminal_like(_: &FiniteRing) -> FiniteRing {
        FiniteRing::zero_ring()
    }

    fn to_terminal(object: &FiniteRing) -> Self {
        RingHom::to_zero(object)
    }
}

impl Arrow for Component {
    type Object = Carrier;

    fn source(&self) -> Carrier {
        Component::source(self)
    }

    fn target(&self) -> Carrier {
        Component::target(self)
    }

    fn identity(object: &Carrier) -> Self {
        Component::identity(object)
    }

    fn compose(&self, first: &Self) -> Result<Self, String> {
        Component::compose(self, first)
    }

    fn terminal_like(object: &Carrier) -> Carrier {
        object.terminal_like()
    }

    fn to_terminal(object: &Carrier) -> Self {
        Component::to_terminal(object)
    }
}

impl Arrow for StructuredHom {
    type Object = StructuredFamily;

    fn source(&self) -> StructuredFamily {
        StructuredHom::source(self).clone()
    }

    fn target(&self) -> StructuredFamily {
        StructuredHom::target(self).clone()
    }

    fn identity(object: &StructuredFamily) -> Self {
        StructuredHom::identity(object)
    }

    fn compose(&self, first: &Self) -> Result<Self, String> {
        crate::strcat::compose_structured_homs(first, self).map_err(|e| e.to_string())
    }

    fn terminal_like(_: &StructuredFamily) -> StructuredFamily {
        StructuredFamily::empty()
    }

    fn to_terminal(object: &StructuredFamily) -> Self {
        StructuredHom::to_empty(object)
    }
}

/// A presheaf on a finite space with values in the category of `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct Presheaf<A: Arrow> {
    space: FiniteSpace,
    /// Indexed like `space.opens()`.
    values: Vec<A::Object>,
    /// Every pair `(u, v)` of open indices with `opens[u] ⊆ opens[v]`.
    restrictions: BTreeMap<(usize, usize), A>,
}

/// A broken presheaf law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LawViolation {
    /// `ρ_{U,U}` is not the identity.
    Identity { open: Vec<String> },
    /// `ρ_{U,V} ∘ ρ_{V,W} ≠ ρ_{U,W}`.
    Composition { u: Vec<String>, v: Vec<String>, w: Vec<String>, detail: String },
}

impl fmt::Display for LawViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LawViolation::Identity { open } => write!(f, "restriction {open:?} -> {open:?} is not the identity"),
            LawViolation::Composition { u, v, w, detail } => write!(f, "composition fails for {u:?} <= {v:?} <= {w:?}: {detail}"),
        }
    }
}

impl<A: Arrow> Presheaf<A> {
    /// Builds a presheaf from values (one per open, in `space.opens()` order)
    /// and any set of restrictions keyed by open indices `(sub, sup)`.
    /// Missing restrictions are composites of supplied ones.
    pub fn new(space: FiniteSpace, mut values: Vec<A::Object>, given: BTreeMap<(usize, usize), A>) -> Result<Self, SheafError> {
        let n = space.nopens();
        if values.len() != n {
            return Err(SheafError::WrongValueCount { expected: n, found: values.len() });
        }
        let opens = space.opens().to_vec();
        let names = |u: usize, v: usize| (space.set_labels(opens[u]), space.set_labels(opens[v]));
        values[0] = A::terminal_like(&values[n - 1]);
        for (&(u, v), map) in &given {
            if u >= n || v >= n || !opens[u].is_subset(opens[v]) {
                let (sub, sup) = if u < n && v < n { names(u, v) } else { (vec![], vec![]) };
                return Err(SheafError::NotAnInclusion { sub, sup });
            }
            if u != 0 && (map.source() != values[v] || map.target() != values[u]) {
                let (sub, sup) = names(u, v);
                return Err(SheafError::RestrictionEndpoints { sub, sup });
            }
        }
        let mut pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (0..n).map(move |v| (u, v)))
            .filter(|&(u, v)| opens[u].is_subset(opens[v]))
            .collect();
        pairs.sort_by_key(|&(u, v)| (opens[v].len() - opens[u].len(), u, v));
        let mut table: BTreeMap<(usize, usize), A> = BTreeMap::new();
        for (u, v) in pairs {
            let map = if u == 0 {
                A::to_terminal(&values[v])
            } else if let Some(m) = given.get(&(u, v)) {
                m.clone()
            } else if u == v {
                A::identity(&values[u])
            } else {
                let via_top = (0..n).find(|&w| w != v && w != u && opens[u].is_subset(opens[w]) && opens[w].is_subset(opens[v]) && given.contains_key(&(w, v)));
                let via_bottom = (0..n).find(|&w| w != v && w != u && opens[u].is_subset(opens[w]) && opens[w].is_subset(opens[v]) && given.contains_key(&(u, w)));
                match (via_top, via_bottom) {
                    (Some(w), _) => table[&(u, w)].compose(&given[&(w, v)]).map_err(SheafError::Composition)?,
                    (None, Some(w)) => given[&(u, w)].compose(&table[&(w, v)]).map_err(SheafError::Composition)?,
                    (None, None) => {
                        let (sub, sup) = names(u, v);
                        return Err(SheafError::MissingRestriction { sub, sup });
                    }
                }
            };
            table.insert((u, v), map);
        }
        Ok(Presheaf { space, values, restrictions: table })
    }

    /// Values and restrictions given by closures over open sets.
    pub fn from_fn(
        space: FiniteSpace,
        value: impl Fn(PointSet) -> A::Object,
        restriction: impl Fn(PointSet, PointSet) -> A,
    ) -> Result<Self, SheafError> {
        let opens = space.opens().to_vec();
        let values: Vec<A::Object> = opens.iter().map(|&o| value(o)).collect();
        let mut given = BTreeMap::new();
        for (u, &ou) in opens.iter().enumerate().skip(1) {
            for (v, &ov) in opens.iter().enumerate() {
                if ou.is_subset(ov) {
                    given.insert((u, v), restriction(ou, ov));
                }
            }
        }
        Presheaf::new(space, values, given)
    }

    /// The same value on every nonempty open with identity restrictions.
    pub fn constant(space: FiniteSpace, value: A::Object) -> Self {
        Presheaf::from_fn(space, |_| value.clone(), |_, _| A::identity(&value)).expect("identity restrictions are valid")
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn values(&self) -> &[A::Object] {
        &self.values
    }

    /// `F(U) = Γ(U, F)` for an open given by index.
    pub fn value(&self, open: usize) -> &A::Object {
        &self.values[open]
    }

    pub fn value_at(&self, open: PointSet) -> Result<&A::Object, SheafError> {
        let i = self.space.open_index(open).ok_or_else(|| SpaceError::NotAnOpen(self.space.set_labels(open)))?;
        Ok(&self.values[i])
    }

    /// `Γ(X, F)`.
    pub fn global_sections(&self) -> &A::Object {
        self.values.last().expect("at least the empty and full opens")
    }

    /// `ρ_{U,V}: F(V) -> F(U)` by open indices.
    pub fn restriction(&self, sub: usize, sup: usize) -> Option<&A> {
        self.restrictions.get(&(sub, sup))
    }

    pub fn restriction_between(&self, sub: PointSet, sup: PointSet) -> Result<&A, SheafError> {
        let u = self.space.open_index(sub).ok_or_else(|| SpaceError::NotAnOpen(self.space.set_labels(sub)))?;
        let v = self.space.open_index(sup).ok_or_else(|| SpaceError::NotAnOpen(self.space.set_labels(sup)))?;
        self.restriction(u, v).ok_or_else(|| SheafError::NotAnInclusion {
            sub: self.space.set_labels(sub),
            sup: self.space.set_labels(sup),
        })
    }

    pub fn restrictions(&self) -> &BTreeMap<(usize, usize), A> {
        &self.restrictions
    }

    /// Checks `ρ_{U,U} = id` and `ρ_{U,V} ∘ ρ_{V,W} = ρ_{U,W}` over every chain of opens.
    pub fn check_presheaf_laws(&self) -> Vec<LawViolation> {
        let opens = self.space.opens();
        let name = |i: usize| self.space.set_labels(opens[i]);
        let mut out = Vec::new();
        for u in 1..opens.len() {
            if self.restrictions[&(u, u)] != A::identity(&self.values[u]) {
                out.push(LawViolation::Identity { open: name(u) });
            }
        }
        for (&(u, v), uv) in &self.restrictions {
            if u == v {
                continue;
            }
            for w in 0..opens.len() {
                if w == v || !opens[v].is_subset(opens[w]) {
                    continue;
                }
                let detail = match uv.compose(&self.restrictions[&(v, w)]) {
                    Ok(c) if c == self.restrictions[&(u, w)] => continue,
                    Ok(_) => "composite differs from the direct restriction".to_string(),
                    Err(e) => e,
                };
                out.push(LawViolation::Composition { u: name(u), v: name(v), w: name(w), detail });
            }
        }
        out
    }

    /// The restriction of the presheaf to an open subspace.
    pub fn restrict_to(&self, within: PointSet) -> Result<Presheaf<A>, SheafError> {
        let (sub, points) = self.space.subspace(within)?;
        let lift = |s: PointSet| -> PointSet { s.iter().map(|i| points[i]).collect() };
        let index = |s: PointSet| self.space.open_index(lift(s)).expect("opens of an open subspace are open");
        let values = sub.opens().iter().map(|&o| self.values[index(o)].clone()).collect();
        let mut given = BTreeMap::new();
        for (u, &ou) in sub.opens().iter().enumerate().skip(1) {
            for (v, &ov) in sub.opens().iter().enumerate() {
                if ou.is_subset(ov) {
                    given.insert((u, v), self.restrictions[&(index(ou), index(ov))].clone());
                }
            }
        }
        Presheaf::new(sub, values, given)
    }

    /// Applies a functor given on objects and morphisms.
    pub fn map<B: Arrow>(
        &self,
        on_objects: impl Fn(&A::Object) -> B::Object,
        on_arrows: impl Fn(&A) -> B,
    ) -> Result<Presheaf<B>, SheafError> {
        let values = self.values.iter().map(on_objects).collect();
        let given = self.restrictions.iter().filter(|((u, _), _)| *u != 0).map(|(&k, a)| (k, on_arrows(a))).collect();
        Presheaf::new(self.space.clone(), values, given)
    }
}

impl Presheaf<GroupMap> {
    /// `F(U) = G^{components of U}` with restrictions collapsing components:
    /// the sheaf of locally constant `G`-valued functions.
    pub fn constant_sheaf(space: FiniteSpace, group: &CyclicSum) -> Presheaf<GroupMap> {
        let comps = |s: PointSet| space.components_unchecked(s);
        let value = |s: PointSet| CyclicSum::direct_sum(std::iter::repeat_n(group, comps(s).len()));
        let restriction = |u: PointSet, v: PointSet| {
            let (cu, cv) = (comps(u), comps(v));
            let blocks: Vec<Vec<Option<GroupMap>>> = cu
                .iter()
                .map(|a| cv.iter().map(|b| a.is_subset(*b).then(|| GroupMap::identity(group))).collect())
                .collect();
            GroupMap::from_blocks(&vec![group.clone(); cv.len()], &vec![group.clone(); cu.len()], &blocks)
                .expect("blocks are identities of one group")
        };
        Presheaf::from_fn(space.clone(), value, restriction).expect("collapse maps compose")
    }
}

/// Checks that every component presheaf has values of one kind and converts it.
pub trait ToKind {
    fn to_groups(&self) -> Result<Presheaf<GroupMap>, SheafError>;
    fn to_rings(&self) -> Result<Presheaf<RingHom>, SheafError>;
}

impl ToKind for Presheaf<Component> {
    fn to_groups(&self) -> Result<Presheaf<GroupMap>, SheafError> {
        let found = |c: &Carrier| SheafError::WrongValueKind { expected: "AbGroup", found: c.tag().to_string() };
        let values = self
            .values
            .iter()
            .map(|c| match c {
                Carrier::Group(g) => Ok(g.clone()),
                other => Err(found(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let given = self
            .restrictions
            .iter()
            .filter(|((u, _), _)| *u != 0)
            .map(|(&k, a)| match a {
                Component::Group(f) => Ok((k, f.clone())),
                other => Err(found(&other.source())),
            })
            .collect::<Result<BTreeMap<_, _>, _>>()?;
        Presheaf::new(self.space.clone(), values, given)
    }

    fn to_rings(&self) -> Result<Presheaf<RingHom>, SheafError> {
        let found = |c: &Carrier| SheafError::WrongValueKind { expected: "Ring", found: c.tag().to_string() };
        let values = self
            .values
            .iter()
            .map(|c| match c {
                Carrier::Ring(r) => Ok(r.clone()),
                other => Err(found(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let given = self
            .restrictions
            .iter()
            .filter(|((u, _), _)| *u != 0)
            .map(|(&k, a)| match a {
                Component::Ring(f) => Ok((k, f.clone())),
                other => Err(found(&other.source())),
            })
            .collect::<Result<BTreeMap<_, _>, _>>()?;
        Presheaf::new(self.space.clone(), values, given)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> CyclicSum {
        CyclicSum::free(1)
    }

    #[test]
    fn constant_on_sierpinski_passes_laws() {
        let f = Presheaf::<GroupMap>::constant(FiniteSpace::sierpinski(), z());
        assert!(f.check_presheaf_laws().is_empty());
        assert!(f.value(0).ngens() == 0);
    }

    #[test]
    fn doubled_identity_is_reported() {
        let x = FiniteSpace::sierpinski();
        let n = x.nopens();
        let values = vec![z(); n];
        let mut given = BTreeMap::new();
        given.insert((1, 1), GroupMap::scalar(&z(), 2));
        given.insert((1, 2), GroupMap::identity(&z()));
        let f = Presheaf::new(x, values, given).unwrap();
        let v = f.check_presheaf_laws();
        assert!(v.contains(&LawViolation::Identity { open: vec!["a".into()] }), "{v:?}");
    }

    #[test]
    fn pseudocircle_constant_sheaf_passes_laws() {
        let f = Presheaf::constant_sheaf(FiniteSpace::pseudocircle(), &z());
        assert!(f.check_presheaf_laws().is_empty());
        let ab = f.space().set_from_labels(&["a", "b"]).unwrap();
        assert_eq!(f.value_at(ab).unwrap(), &CyclicSum::free(2));
        assert_eq!(f.global_sections(), &z());
    }

    #[test]
    fn missing_restrictions_are_composed() {
        let x = FiniteSpace::pseudocircle();
        let f = Presheaf::constant_sheaf(x.clone(), &z());
        // Keep only covering relations; everything else must be recovered.
        let opens = x.opens().to_vec();
        let covering = |u: usize, v: usize| {
            u != v
                && opens[u].is_subset(opens[v])
                && !(0..opens.len()).any(|w| w != u && w != v && opens[u].is_subset(opens[w]) && opens[w].is_subset(opens[v]))
        };
        let given = f.restrictions().iter().filter(|((u, v), _)| *u != 0 && covering(*u, *v)).map(|(k, a)| (*k, a.clone())).collect();
        let g = Presheaf::new(x, f.values().to_vec(), given).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn missing_restriction_is_an_error() {
        let x = FiniteSpace::sierpinski();
        let r = Presheaf::<GroupMap>::new(x, vec![z(); 3], BTreeMap::new());
        assert!(matches!(r, Err(SheafError::MissingRestriction { .. })));
    }
}
