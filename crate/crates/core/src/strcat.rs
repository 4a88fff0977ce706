//! Structured families of fixed neighborhoods, alignments between them, and
//! structured homomorphisms.
//!
//! A family is an indexed list of entries `p = 1..m`, each tagged with the
//! kind of algebraic structure it carries. Two families are comparable when
//! an alignment pairs their entries bijectively and preserves tags; a
//! structured homomorphism is then one carrier map per aligned pair.

use std::fmt;

use thiserror::Error;

use crate::exactla::{CyclicSum, Field, FieldMatrix, GroupMap};
use crate::ringspec::{FiniteRing, RingHom};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("family indices must be 1..{expected} without gaps, found {found:?}")]
    BadIndices { expected: usize, found: Vec<usize> },
    #[error("entry {p}: carrier does not match tag {tag}")]
    CarrierMismatch { p: usize, tag: StructureTag },
    #[error("opaque tags need a nonempty name")]
    EmptyOpaqueName,
    #[error("alignment is not a bijection: {0}")]
    NotABijection(String),
    #[error("alignments do not compose: {0}")]
    AlignmentMismatch(String),
    #[error("component {p}: {reason}")]
    ComponentShapeMismatch { p: usize, reason: String },
}

/// The kind of structure carried by one fixed neighborhood.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum StructureTag {
    AbGroup,
    Ring,
    VectorSpace(Field),
    /// A structure that is stored but never computed with.
    Opaque(String),
}

impl fmt::Display for StructureTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureTag::AbGroup => write!(f, "AbGroup"),
            StructureTag::Ring => write!(f, "Ring"),
            StructureTag::VectorSpace(k) => write!(f, "VectorSpace({k})"),
            StructureTag::Opaque(name) => write!(f, "Opaque({name})"),
        }
    }
}

/// The concrete object behind a tag.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Carrier {
    Group(CyclicSum),
    Ring(FiniteRing),
    Vector { field: Field, dim: usize },
    Opaque(String),
}

impl Carrier {
    pub fn tag(&self) -> StructureTag {
        match self {
            Carrier::Group(_) => StructureTag::AbGroup,
            Carrier::Ring(_) => StructureTag::Ring,
            Carrier::Vector { field, .. } => StructureTag::VectorSpace(*field),
            Carrier::Opaque(name) => StructureTag::Opaque(name.clone()),
        }
    }

    /// The terminal object of the same kind.
    pub fn terminal_like(&self) -> Carrier {
        match self {
            Carrier::Group(_) => Carrier::Group(CyclicSum::zero()),
            Carrier::Ring(_) => Carrier::Ring(FiniteRing::zero_ring()),
            Carrier::Vector { field, .. } => Carrier::Vector { field: *field, dim: 0 },
            Carrier::Opaque(name) => Carrier::Opaque(name.clone()),
        }
    }

    /// Isomorphism of carriers; opaque carriers are compared by name only.
    pub fn is_isomorphic(&self, other: &Carrier) -> bool {
        match (self, other) {
            (Carrier::Group(a), Carrier::Group(b)) => a.canonical() == b.canonical(),
            (Carrier::Ring(a), Carrier::Ring(b)) => a.is_isomorphic(b),
            (Carrier::Vector { field: f, dim: d }, Carrier::Vector { field: g, dim: e }) => f == g && d == e,
            (Carrier::Opaque(a), Carrier::Opaque(b)) => a == b,
            _ => false,
        }
    }
}

/// One fixed neighborhood: its index and carrier.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Entry {
    pub p: usize,
    pub carrier: Carrier,
}

impl Entry {
    pub fn tag(&self) -> StructureTag {
        self.carrier.tag()
    }
}

/// An indexed, finite family of structured fixed neighborhoods.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StructuredFamily {
    entries: Vec<Entry>,
    partitionable: bool,
}

impl StructuredFamily {
    /// Sorts entries by index and checks indices are exactly `1..=m`.
    pub fn new(mut entries: Vec<Entry>, partitionable: bool) -> Result<StructuredFamily, StructureError> {
        entries.sort_by_key(|e| e.p);
        let found: Vec<usize> = entries.iter().map(|e| e.p).collect();
        if found.iter().enumerate().any(|(i, &p)| p != i + 1) {
            return Err(StructureError::BadIndices { expected: entries.len(), found });
        }
        if entries.iter().any(|e| matches!(&e.carrier, Carrier::Opaque(n) if n.is_empty())) {
            return Err(StructureError::EmptyOpaqueName);
        }
        Ok(StructuredFamily { entries, partitionable })
    }

    /// Entries numbered `1..` in the given order.
    pub fn from_carriers(carriers: Vec<Carrier>, partitionable: bool) -> Result<StructuredFamily, StructureError> {
        let entries = carriers.into_iter().enumerate().map(|(i, carrier)| Entry { p: i + 1, carrier }).collect();
        StructuredFamily::new(entries, partitionable)
    }

    pub fn empty() -> StructuredFamily {
        StructuredFamily { entries: Vec::new(), partitionable: true }
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    /// The entry with index `p` (1-based).
    pub fn entry(&self, p: usize) -> Option<&Entry> {
        p.checked_sub(1).and_then(|i| self.entries.get(i))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_partitionable(&self) -> bool {
        self.partitionable
    }

    pub fn tags(&self) -> Vec<StructureTag> {
        self.entries.iter().map(Entry::tag).collect()
    }
}

/// A bijection `p -> h(p)` between the indices of two families.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alignment {
    /// `image[p - 1] = h(p)`.
    image: Vec<usize>,
}

impl Alignment {
    pub fn identity(m: usize) -> Alignment {
        Alignment { image: (1..=m).collect() }
    }

    /// From `(p, h(p))` pairs; must be a total bijection on `1..=m`.
    pub fn from_pairs(pairs: &[(usize, usize)]) -> Result<Alignment, StructureError> {
        let m = pairs.len();
        let mut image = vec![0; m];
        let mut hit = vec![false; m];
        for &(p, q) in pairs {
            if p == 0 || p > m || q == 0 || q > m {
                return Err(StructureError::NotABijection(format!("pair ({p}, {q}) is outside 1..={m}")));
            }
            if image[p - 1] != 0 {
                return Err(StructureError::NotABijection(format!("{p} is paired twice")));
            }
            if hit[q - 1] {
                return Err(StructureError::NotABijection(format!("{q} is hit twice")));
            }
            image[p - 1] = q;
            hit[q - 1] = true;
        }
        Ok(Alignment { image })
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn apply(&self, p: usize) -> usize {
        self.image[p - 1]
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.image.iter().enumerate().map(|(i, &q)| (i + 1, q)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &q)| q == i + 1)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &Alignment) -> Result<Alignment, StructureError> {
        if first.len() != self.len() {
            return Err(StructureError::AlignmentMismatch(format!("{} vs {} entries", first.len(), self.len())));
        }
        Ok(Alignment { image: first.image.iter().map(|&q| self.apply(q)).collect() })
    }

    pub fn inverse(&self) -> Alignment {
        let mut image = vec![0; self.len()];
        for (i, &q) in self.image.iter().enumerate() {
            image[q - 1] = i + 1;
        }
        Alignment { image }
    }
}

/// Outcome of a category-membership check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipReport {
    pub accepted: bool,
    /// Each aligned pair `(p, h(p))` with the shared tag, up to the first violation.
    pub pairs: Vec<(usize, usize, StructureTag)>,
    pub violation: Option<String>,
}

/// Accepts iff `h` is a tag-preserving bijection between the entries of `x` and `y`.
pub fn check_category_membership(x: &StructuredFamily, y: &StructuredFamily, h: &Alignment) -> MembershipReport {
    let mut report = MembershipReport { accepted: false, pairs: Vec::new(), violation: None };
    if x.len() != y.len() || h.len() != x.len() {
        report.violation =
            Some(format!("families have {} and {} entries; alignment covers {}", x.len(), y.len(), h.len()));
        return report;
    }
    for (p, q) in h.pairs() {
        let (a, b) = (x.entry(p).expect("index in range").tag(), y.entry(q).expect("bijection").tag());
        if a != b {
            report.violation = Some(format!("entry {p} ({a}) is aligned with entry {q} ({b})"));
            return report;
        }
        report.pairs.push((p, q, a));
    }
    report.accepted = true;
    report
}

/// Structural equivalence: tags are preserved and computable carriers are isomorphic.
pub fn structures_equivalent(x: &StructuredFamily, y: &StructuredFamily, h: &Alignment) -> bool {
    check_category_membership(x, y, h).accepted
        && h.pairs().iter().all(|&(p, q)| x.entry(p).unwrap().carrier.is_isomorphic(&y.entry(q).unwrap().carrier))
}

/// A homomorphism between two carriers of the same kind.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Component {
    Group(GroupMap),
    Ring(RingHom),
    /// `dim target x dim source`.
    Linear(FieldMatrix),
    /// Opaque structures admit only the formal identity.
    OpaqueIdentity(String),
}

impl Component {
    pub fn identity(carrier: &Carrier) -> Component {
        match carrier {
            Carrier::Group(g) => Component::Group(GroupMap::identity(g)),
            Carrier::Ring(r) => Component::Ring(RingHom::identity(r)),
            Carrier::Vector { field, dim } => Component::Linear(FieldMatrix::identity(*field, *dim)),
            Carrier::Opaque(name) => Component::OpaqueIdentity(name.clone()),
        }
    }

    /// The unique map to the terminal object of the same kind.
    pub fn to_terminal(carrier: &Carrier) -> Component {
        match carrier {
            Carrier::Group(g) => Component::Group(GroupMap::zero(g.clone(), CyclicSum::zero())),
            Carrier::Ring(r) => Component::Ring(RingHom::to_zero(r)),
            Carrier::Vector { field, dim } => Component::Linear(FieldMatrix::zeros(*field, 0, *dim)),
            Carrier::Opaque(name) => Component::OpaqueIdentity(name.clone()),
        }
    }

    pub fn source(&self) -> Carrier {
        match self {
            Component::Group(f) => Carrier::Group(f.source().clone()),
            Component::Ring(f) => Carrier::Ring(f.source().clone()),
            Component::Linear(m) => Carrier::Vector { field: m.field(), dim: m.ncols() },
            Component::OpaqueIdentity(name) => Carrier::Opaque(name.clone()),
        }
    }

    pub fn target(&self) -> Carrier {
        match self {
            Component::Group(f) => Carrier::Group(f.target().clone()),
            Component::Ring(f) => Carrier::Ring(f.target().clone()),
            Component::Linear(m) => Carrier::Vector { field: m.field(), dim: m.nrows() },
            Component::OpaqueIdentity(name) => Carrier::Opaque(name.clone()),
        }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &Component) -> Result<Component, String> {
        match (self, first) {
            (Component::Group(g), Component::Group(f)) => g.compose(f).map(Component::Group).map_err(|e| e.to_string()),
            (Component::Ring(g), Component::Ring(f)) => g.compose(f).map(Component::Ring).map_err(|e| e.to_string()),
            (Component::Linear(g), Component::Linear(f)) => g.mul(f).map(Component::Linear).map_err(|e| e.to_string()),
            (Component::OpaqueIdentity(a), Component::OpaqueIdentity(b)) if a == b => Ok(self.clone()),
            _ => Err("components carry different structures".into()),
        }
    }
}

/// One carrier map per aligned pair: component `p` maps entry `p` of the
/// source to entry `h(p)` of the target.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StructuredHom {
    source: StructuredFamily,
    target: StructuredFamily,
    alignment: Alignment,
    components: Vec<Component>,
}

impl StructuredHom {
    pub fn new(
        source: StructuredFamily,
        target: StructuredFamily,
        alignment: Alignment,
        components: Vec<Component>,
    ) -> Result<StructuredHom, StructureError> {
        let report = check_category_membership(&source, &target, &alignment);
        if !report.accepted {
            return Err(StructureError::AlignmentMismatch(report.violation.unwrap_or_default()));
        }
        if components.len() != source.len() {
            return Err(StructureError::ComponentShapeMismatch {
                p: components.len().min(source.len()) + 1,
                reason: format!("{} components for {} entries", components.len(), source.len()),
            });
        }
        for (i, c) in components.iter().enumerate() {
            let p = i + 1;
            let q = alignment.apply(p);
            if c.source() != source.entry(p).unwrap().carrier {
                return Err(StructureError::ComponentShapeMismatch { p, reason: "source differs from the entry".into() });
            }
            if c.target() != target.entry(q).unwrap().carrier {
                return Err(StructureError::ComponentShapeMismatch {
                    p,
                    reason: format!("target differs from entry {q}"),
                });
            }
        }
        Ok(StructuredHom { source, target, alignment, components })
    }

    /// `id_X = (id_{U_p})`.
    pub fn identity(family: &StructuredFamily) -> StructuredHom {
        StructuredHom {
            source: family.clone(),
            target: family.clone(),
            alignment: Alignment::identity(family.len()),
            components: family.entries.iter().map(|e| Component::identity(&e.carrier)).collect(),
        }
    }

    /// The map to the empty family.
    pub fn to_empty(family: &StructuredFamily) -> StructuredHom {
        StructuredHom {
            source: family.clone(),
            target: StructuredFamily::empty(),
            alignment: Alignment::identity(0),
            components: Vec::new(),
        }
    }

    pub fn source(&self) -> &StructuredFamily {
        &self.source
    }

    pub fn target(&self) -> &StructuredFamily {
        &self.target
    }

    pub fn alignment(&self) -> &Alignment {
        &self.alignment
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// The component on source entry `p`.
    pub fn component(&self, p: usize) -> &Component {
        &self.components[p - 1]
    }
}

/// `g ∘ f = (g_{h(p)} ∘ f_p)`.
pub fn compose_structured_homs(f: &StructuredHom, g: &StructuredHom) -> Result<StructuredHom, StructureError> {
    if f.target.len() != g.source.len() || f.target.tags() != g.source.tags() {
        return Err(StructureError::AlignmentMismatch("target of f is not the source of g".into()));
    }
    // A map to the empty family is terminal; nothing further to compose.
    if g.target.is_empty() {
        return Ok(StructuredHom::to_empty(&f.source));
    }
    let alignment = g.alignment.compose(&f.alignment)?;
    let components = (1..=f.source.len())
        .map(|p| {
            let q = f.alignment.apply(p);
            let (fp, gq) = (f.component(p), g.component(q));
            if fp.target() != gq.source() {
                return Err(StructureError::ComponentShapeMismatch { p, reason: format!("f_{p} does not land in the domain of g_{q}") });
            }
            gq.compose(fp).map_err(|reason| StructureError::ComponentShapeMismatch { p, reason })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(StructuredHom { source: f.source.clone(), target: g.target.clone(), alignment, components })
}
