//! Spectra of finite rings, ring-valued sheaves, and structural ringed spaces.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use super::{FiniteRing, Ideal, RingError, RingHom};
use crate::exactla::{GroupMap, TableGroup};
use crate::finspace::{Cover, FiniteSpace, PointSet, SpaceError};
use crate::sheaf::{bundle, decompose_structured, ToKind, Presheaf, SheafError};
use crate::strcat::{Carrier, Component, StructuredFamily, StructuredHom};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Sheaf(#[from] SheafError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("the opens do not cover the space: {0}")]
    NotACover(String),
    #[error("decomposition fails: {0}")]
    DecompositionFails(String),
    #[error("stalk of component {p} at {point} is not a local ring")]
    StalkNotLocal { point: String, p: usize },
    #[error("expected {members} candidate lists of {components} rings each")]
    CandidateShape { members: usize, components: usize },
    #[error("ring-valued presheaf is not a sheaf: {0}")]
    NotASheaf(String),
    #[error("specialization order is not discrete; sections from stalks need germ maps")]
    MissingGerms,
}

/// The additive group of a ring.
pub fn additive_group(r: &FiniteRing) -> TableGroup {
    TableGroup::new(r.add_table().to_vec(), r.zero())
}

/// The additive map underlying a ring homomorphism.
pub fn additive_map(h: &RingHom) -> GroupMap {
    additive_group(h.source())
        .induced(&additive_group(h.target()), |x| h.apply(x))
        .expect("ring homomorphisms are additive")
}

/// Forgets the multiplication.
pub fn additive_presheaf(f: &Presheaf<RingHom>) -> Presheaf<GroupMap> {
    f.map(|r| additive_group(r).group().to_cyclic(), additive_map).expect("additive maps compose like ring maps")
}

fn mixed_radix_decode(sizes: &[usize], mut k: usize) -> Vec<usize> {
    let mut digits = vec![0; sizes.len()];
    for (i, &s) in sizes.iter().enumerate().rev() {
        digits[i] = k % s;
        k /= s;
    }
    digits
}

fn mixed_radix_encode(sizes: &[usize], digits: &[usize]) -> usize {
    digits.iter().zip(sizes).fold(0, |acc, (d, s)| acc * s + d)
}

/// The ring of families `(s_x)_{x ∈ U}` in a subring of `∏ factors`, closed under the operations.
fn ring_of_families(families: &[Vec<usize>], factors: &[&FiniteRing]) -> Result<FiniteRing, RingError> {
    let index: HashMap<&[usize], usize> = families.iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect();
    let op = |table: fn(&FiniteRing, usize, usize) -> usize| -> Result<Vec<Vec<usize>>, RingError> {
        families
            .iter()
            .map(|a| {
                families
                    .iter()
                    .map(|b| {
                        let c: Vec<usize> = factors.iter().enumerate().map(|(i, r)| table(r, a[i], b[i])).collect();
                        index.get(c.as_slice()).copied().ok_or_else(|| RingError::NotARing("families are not closed".into()))
                    })
                    .collect()
            })
            .collect()
    };
    let add = op(FiniteRing::add)?;
    let mul = op(FiniteRing::mul)?;
    let labels = families
        .iter()
        .map(|f| format!("({})", f.iter().zip(factors).map(|(&d, r)| r.label(d)).collect::<Vec<_>>().join(",")))
        .collect();
    FiniteRing::from_tables(labels, add, mul, true)
}

/// `O(U)` = compatible families of germs over `U`: `s_x = germ(x, y)(s_y)`
/// whenever `x ⊏ y` in `U`. `germs[(x, y)]` maps the stalk at `y` to the one at `x`.
pub fn sheaf_from_stalks(
    space: &FiniteSpace,
    stalks: &[FiniteRing],
    germs: &BTreeMap<(usize, usize), RingHom>,
    bound: usize,
) -> Result<Presheaf<RingHom>, SchemeError> {
    let n = space.npoints();
    for x in 0..n {
        for y in 0..n {
            if x != y && space.leq(x, y) && !germs.contains_key(&(x, y)) {
                return Err(SchemeError::MissingGerms);
            }
        }
    }
    let opens = space.opens().to_vec();
    let mut values = vec![FiniteRing::zero_ring()];
    let mut families_of: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new()]];
    for &u in &opens[1..] {
        let points: Vec<usize> = u.iter().collect();
        let mut found = Vec::new();
        let mut cur = Vec::with_capacity(points.len());
        compatible(&points, stalks, germs, &mut cur, &mut found, bound)?;
        let factors: Vec<&FiniteRing> = points.iter().map(|&x| &stalks[x]).collect();
        values.push(ring_of_families(&found, &factors)?);
        families_of.push(found);
    }
    let mut given = BTreeMap::new();
    for (ui, &u) in opens.iter().enumerate().skip(1) {
        let upoints: Vec<usize> = u.iter().collect();
        for (vi, &v) in opens.iter().enumerate() {
            if !u.is_subset(v) {
                continue;
            }
            let vpoints: Vec<usize> = v.iter().collect();
            let keep: Vec<usize> = upoints.iter().map(|x| vpoints.iter().position(|y| y == x).expect("U ⊆ V")).collect();
            let index: HashMap<&[usize], usize> = families_of[ui].iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect();
            let table = families_of[vi]
                .iter()
                .map(|f| index[keep.iter().map(|&k| f[k]).collect::<Vec<_>>().as_slice()])
                .collect();
            given.insert((ui, vi), RingHom::new(values[vi].clone(), values[ui].clone(), table)?);
        }
    }
    Ok(Presheaf::new(space.clone(), values, given)?)
}

fn compatible(
    points: &[usize],
    stalks: &[FiniteRing],
    germs: &BTreeMap<(usize, usize), RingHom>,
    cur: &mut Vec<usize>,
    found: &mut Vec<Vec<usize>>,
    bound: usize,
) -> Result<(), SchemeError> {
    let i = cur.len();
    if i == points.len() {
        if found.len() == bound {
            return Err(RingError::TooLarge { bound }.into());
        }
        found.push(cur.clone());
        return Ok(());
    }
    let x = points[i];
    for s in 0..stalks[x].size() {
        let ok = (0..i).all(|j| {
            let y = points[j];
            match (germs.get(&(x, y)), germs.get(&(y, x))) {
                (Some(g), _) => g.apply(cur[j]) == s,
                (_, Some(g)) => g.apply(s) == cur[j],
                _ => true,
            }
        });
        if ok {
            cur.push(s);
            compatible(points, stalks, germs, cur, found, bound)?;
            cur.pop();
        }
    }
    Ok(())
}

/// Sheafification of a ring-valued presheaf through compatible families of
/// germs at minimal opens.
pub fn sheafify_rings(f: &Presheaf<RingHom>, bound: usize) -> Result<Presheaf<RingHom>, SchemeError> {
    let x = f.space();
    let u: Vec<usize> = (0..x.npoints()).map(|p| x.open_index(x.minimal_open(p)).expect("minimal opens are open")).collect();
    let stalks: Vec<FiniteRing> = u.iter().map(|&i| f.value(i).clone()).collect();
    let mut germs = BTreeMap::new();
    for a in 0..x.npoints() {
        for b in 0..x.npoints() {
            if a != b && x.leq(a, b) {
                germs.insert((a, b), f.restriction(u[a], u[b]).expect("U_a ⊆ U_b").clone());
            }
        }
    }
    sheaf_from_stalks(x, &stalks, &germs, bound)
}

/// A finite space with a sheaf of commutative rings.
#[derive(Clone, Debug, PartialEq)]
pub struct RingedFiniteSpace {
    sheaf: Presheaf<RingHom>,
}

/// Per-point outcome of the locally ringed check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StalkReport {
    pub point: String,
    pub size: usize,
    pub maximal_ideals: Vec<String>,
}

impl StalkReport {
    pub fn is_local(&self) -> bool {
        self.maximal_ideals.len() == 1
    }
}

impl RingedFiniteSpace {
    /// Checks the presheaf laws and the sheaf axioms on additive groups.
    pub fn new(sheaf: Presheaf<RingHom>) -> Result<RingedFiniteSpace, SchemeError> {
        if let Some(v) = sheaf.check_presheaf_laws().first() {
            return Err(SheafError::PresheafLawsViolated(v.to_string()).into());
        }
        let violations = additive_presheaf(&sheaf).check_sheaf_axioms()?;
        if let Some(v) = violations.first() {
            return Err(SchemeError::NotASheaf(v.to_string()));
        }
        Ok(RingedFiniteSpace { sheaf })
    }

    pub fn space(&self) -> &FiniteSpace {
        self.sheaf.space()
    }

    pub fn sheaf(&self) -> &Presheaf<RingHom> {
        &self.sheaf
    }

    /// The stalk at `x`: the value on the minimal open `U_x`.
    pub fn stalk(&self, x: usize) -> &FiniteRing {
        let s = self.space();
        self.sheaf.value(s.open_index(s.minimal_open(x)).expect("minimal opens are open"))
    }

    pub fn global_sections(&self) -> &FiniteRing {
        self.sheaf.global_sections()
    }

    /// Maximal ideals of every stalk.
    pub fn check_locally_ringed(&self) -> Vec<StalkReport> {
        (0..self.space().npoints())
            .map(|x| {
                let r = self.stalk(x);
                StalkReport {
                    point: self.space().label(x).to_string(),
                    size: r.size(),
                    maximal_ideals: r.maximal_ideals().iter().map(|m| r.ideal_name(m)).collect(),
                }
            })
            .collect()
    }

    pub fn is_locally_ringed(&self) -> bool {
        self.check_locally_ringed().iter().all(StalkReport::is_local)
    }
}

/// `Spec R` with its structure sheaf.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub ring: FiniteRing,
    /// Prime ideals in point order.
    pub primes: Vec<Ideal>,
    /// `R -> R_P` for every prime.
    pub localizations: Vec<RingHom>,
    pub ringed: RingedFiniteSpace,
}

/// Prime ideals as points, opens the complements of `V(I)`, stalks the
/// localizations. Rings above `bound` elements are refused.
pub fn spec(r: &FiniteRing, bound: usize) -> Result<Spectrum, SchemeError> {
    if r.size() > bound {
        return Err(RingError::TooLarge { bound }.into());
    }
    if r.is_zero_ring() {
        return Err(RingError::ZeroRing.into());
    }
    let primes = r.prime_ideals();
    let labels: Vec<String> = primes.iter().map(|p| r.ideal_name(p)).collect();
    let opens: Vec<Vec<String>> = r
        .ideals()
        .iter()
        .map(|i| primes.iter().zip(&labels).filter(|(p, _)| !i.is_subset(p)).map(|(_, l)| l.clone()).collect())
        .collect();
    let space = FiniteSpace::new(&labels, &opens)?;
    let primes: Vec<Ideal> = (0..space.npoints())
        .map(|k| primes[labels.iter().position(|l| l == space.label(k)).expect("same labels")].clone())
        .collect();
    let mut stalks = Vec::with_capacity(primes.len());
    let mut localizations = Vec::with_capacity(primes.len());
    for p in &primes {
        let (local, map) = r.localize_at_prime(p)?;
        stalks.push(local);
        localizations.push(map);
    }
    // Primes of a finite ring are maximal, so the topology is discrete and no germ maps are needed.
    let sheaf = sheaf_from_stalks(&space, &stalks, &BTreeMap::new(), bound)?;
    Ok(Spectrum { ring: r.clone(), primes, localizations, ringed: RingedFiniteSpace::new(sheaf)? })
}

/// Ring-valued components of a structured presheaf, sheafified.
pub fn ring_components(x: &Presheaf<StructuredHom>, bound: usize) -> Result<Vec<Presheaf<RingHom>>, SchemeError> {
    let fails = |e: SheafError| SchemeError::DecompositionFails(e.to_string());
    let parts = decompose_structured(x).map_err(fails)?;
    parts.iter().map(|p| sheafify_rings(&p.to_rings().map_err(fails)?, bound)).collect()
}

/// Bundles ring-valued presheaves on one space into a structured presheaf.
pub fn structural_from_components(parts: &[Presheaf<RingHom>]) -> Result<Presheaf<StructuredHom>, SchemeError> {
    let comps = parts
        .iter()
        .map(|p| p.map(|r| Carrier::Ring(r.clone()), |h| Component::Ring(h.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(bundle(&comps)?)
}

/// The one-point structural ringed space with the given family of rings.
pub fn structural_affine(rings: &[FiniteRing]) -> Result<Presheaf<StructuredHom>, SchemeError> {
    let family = StructuredFamily::from_carriers(rings.iter().cloned().map(Carrier::Ring).collect(), true)
        .map_err(|e| SchemeError::DecompositionFails(e.to_string()))?;
    Ok(Presheaf::constant(FiniteSpace::one_point(), family))
}

/// Outcome for one cover member and one component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemberReport {
    pub open: Vec<String>,
    pub p: usize,
    /// `(point of X, prime of the candidate)` when an isomorphism was found.
    pub matching: Option<Vec<(String, String)>>,
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeReport {
    pub members: Vec<MemberReport>,
    pub affine: bool,
}

impl SchemeReport {
    pub fn is_structural_scheme(&self) -> bool {
        self.members.iter().all(|m| m.matching.is_some())
    }

    pub fn is_structural_affine(&self) -> bool {
        self.affine && self.is_structural_scheme()
    }
}

/// Decides, for every cover member `W` and component `p`, whether
/// `(W, F̃_p|W)` is isomorphic to `Spec` of the candidate ring.
///
/// Finite spectra are discrete, so an isomorphism is a bijection of points
/// with isomorphic stalks, provided `W` is discrete and every section ring
/// over `U ⊆ W` is the product of its stalks.
pub fn recognize_structural_scheme(
    x: &Presheaf<StructuredHom>,
    cover: &[PointSet],
    candidates: &[Vec<FiniteRing>],
    bound: usize,
) -> Result<SchemeReport, SchemeError> {
    let space = x.space();
    let cover = Cover::new(space, space.full(), cover.to_vec()).map_err(|e| SchemeError::NotACover(e.to_string()))?;
    let parts = ring_components(x, bound)?;
    if candidates.len() != cover.len() || candidates.iter().any(|c| c.len() != parts.len()) {
        return Err(SchemeError::CandidateShape { members: cover.len(), components: parts.len() });
    }
    let ringed: Vec<RingedFiniteSpace> = parts.into_iter().map(RingedFiniteSpace::new).collect::<Result<_, _>>()?;
    for (p, r) in ringed.iter().enumerate() {
        if let Some(bad) = r.check_locally_ringed().into_iter().find(|s| !s.is_local()) {
            return Err(SchemeError::StalkNotLocal { point: bad.point, p: p + 1 });
        }
    }
    let mut members = Vec::new();
    for (w, &open) in cover.members().iter().enumerate() {
        for (p, r) in ringed.iter().enumerate() {
            let (matching, reason) = match match_member(r, open, &candidates[w][p], bound)? {
                Ok(m) => (Some(m), None),
                Err(reason) => (None, Some(reason)),
            };
            members.push(MemberReport { open: space.set_labels(open), p: p + 1, matching, reason });
        }
    }
    Ok(SchemeReport { members, affine: cover.len() == 1 })
}

type Matching = Vec<(String, String)>;

fn match_member(r: &RingedFiniteSpace, w: PointSet, candidate: &FiniteRing, bound: usize) -> Result<Result<Matching, String>, SchemeError> {
    let space = r.space();
    let points: Vec<usize> = w.iter().collect();
    if let Some(&x) = points.iter().find(|&&x| space.minimal_open(x).len() != 1) {
        return Ok(Err(format!("{} is not an isolated point, but spectra of finite rings are discrete", space.label(x))));
    }
    for &u in space.opens().iter().skip(1).filter(|u| u.is_subset(w)) {
        let ui = space.open_index(u).expect("open");
        let stalks: Vec<usize> = u.iter().map(|x| space.open_index(space.minimal_open(x)).expect("open")).collect();
        let expected: usize = stalks.iter().map(|&s| r.sheaf().value(s).size()).product();
        let images: std::collections::HashSet<Vec<usize>> = (0..r.sheaf().value(ui).size())
            .map(|e| stalks.iter().map(|&s| r.sheaf().restriction(s, ui).expect("U_x ⊆ U").apply(e)).collect())
            .collect();
        if images.len() != r.sheaf().value(ui).size() || images.len() != expected {
            return Ok(Err(format!("sections over {:?} are not the product of the stalks", space.set_labels(u))));
        }
    }
    let target = spec(candidate, bound)?;
    let tspace = target.ringed.space();
    if tspace.npoints() != points.len() {
        return Ok(Err(format!("{} points against {} primes", points.len(), tspace.npoints())));
    }
    let iso: Vec<Vec<bool>> = points.iter().map(|&x| (0..tspace.npoints()).map(|q| r.stalk(x).is_isomorphic(target.ringed.stalk(q))).collect()).collect();
    let mut assignment = Vec::new();
    let mut used = vec![false; tspace.npoints()];
    if assign(&iso, &mut used, &mut assignment) {
        Ok(Ok(points.iter().zip(&assignment).map(|(&x, &q)| (space.label(x).to_string(), tspace.label(q).to_string())).collect()))
    } else {
        Ok(Err("no bijection of points with isomorphic stalks".into()))
    }
}

fn assign(iso: &[Vec<bool>], used: &mut [bool], out: &mut Vec<usize>) -> bool {
    let i = out.len();
    if i == iso.len() {
        return true;
    }
    for q in 0..used.len() {
        if iso[i][q] && !used[q] {
            used[q] = true;
            out.push(q);
            if assign(iso, used, out) {
                return true;
            }
            out.pop();
            used[q] = false;
        }
    }
    false
}

/// `⊔_p (X, F̃_p)` as one ringed space.
#[derive(Clone, Debug)]
pub struct DisjointUnion {
    pub ringed: RingedFiniteSpace,
    /// The copy `X × {p}` for each component, in order.
    pub blocks: Vec<PointSet>,
}

impl DisjointUnion {
    /// Global sections of the `p`-th copy (0-based).
    pub fn component_sections(&self, p: usize) -> &FiniteRing {
        self.ringed.sheaf().value_at(self.blocks[p]).expect("blocks are open")
    }
}

/// Points `(x,p)`; an open is a choice of one open of `X` per copy, and its
/// ring is the product of the component rings.
pub fn disjoint_union_assembly(x: &Presheaf<StructuredHom>, bound: usize) -> Result<DisjointUnion, SchemeError> {
    let parts = ring_components(x, bound)?;
    let base = x.space();
    let (n, m) = (base.npoints(), parts.len());
    if n * m > 64 {
        return Err(RingError::TooLarge { bound: 64 }.into());
    }
    let labels: Vec<String> = (0..m).flat_map(|p| (0..n).map(move |i| (p, i))).map(|(p, i)| format!("({},{})", base.label(i), p + 1)).collect();
    let mut opens: Vec<Vec<String>> = Vec::new();
    let nopens = base.nopens();
    let mut choice = vec![0usize; m];
    loop {
        let set: Vec<String> = (0..m).flat_map(|p| base.opens()[choice[p]].iter().map(move |i| p * n + i)).map(|k| labels[k].clone()).collect();
        opens.push(set);
        let Some(k) = (0..m).find(|&k| choice[k] + 1 < nopens) else { break };
        choice[k] += 1;
        for c in choice.iter_mut().take(k) {
            *c = 0;
        }
    }
    let space = FiniteSpace::new(&labels, &opens)?;
    // Points are stored in label order; recover (copy, base point) for each.
    let origin: Vec<(usize, usize)> = (0..space.npoints())
        .map(|k| {
            let j = labels.iter().position(|l| l == space.label(k)).expect("same labels");
            (j / n, j % n)
        })
        .collect();
    let slice = |s: PointSet, p: usize| -> PointSet { s.iter().filter(|&k| origin[k].0 == p).map(|k| origin[k].1).collect() };
    let block_mask = |p: usize| -> PointSet { (0..space.npoints()).filter(|&k| origin[k].0 == p).collect() };
    let value_parts = |s: PointSet| -> Vec<usize> { (0..m).map(|p| base.open_index(slice(s, p)).expect("slices are open")).collect() };
    let value = |s: PointSet| -> Result<FiniteRing, RingError> {
        let idx = value_parts(s);
        let factors: Vec<&FiniteRing> = idx.iter().enumerate().map(|(p, &u)| parts[p].value(u)).collect();
        FiniteRing::product(&factors, bound)
    };
    let values: Vec<FiniteRing> = space.opens().iter().map(|&s| value(s)).collect::<Result<_, _>>()?;
    let mut given = BTreeMap::new();
    for (ui, &u) in space.opens().iter().enumerate().skip(1) {
        for (vi, &v) in space.opens().iter().enumerate() {
            if !u.is_subset(v) {
                continue;
            }
            let (iu, iv) = (value_parts(u), value_parts(v));
            let maps: Vec<&RingHom> = (0..m).map(|p| parts[p].restriction(iu[p], iv[p]).expect("slices are nested")).collect();
            let vs: Vec<usize> = maps.iter().map(|h| h.source().size()).collect();
            let us: Vec<usize> = maps.iter().map(|h| h.target().size()).collect();
            let table = (0..values[vi].size())
                .map(|e| {
                    let d = mixed_radix_decode(&vs, e);
                    let image: Vec<usize> = maps.iter().zip(&d).map(|(h, &c)| h.apply(c)).collect();
                    mixed_radix_encode(&us, &image)
                })
                .collect();
            given.insert((ui, vi), RingHom::new(values[vi].clone(), values[ui].clone(), table)?);
        }
    }
    let blocks = (0..m).map(block_mask).collect();
    let sheaf = Presheaf::new(space.clone(), values, given)?;
    Ok(DisjointUnion { ringed: RingedFiniteSpace::new(sheaf)?, blocks })
}
