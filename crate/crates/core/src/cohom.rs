//! Čech and derived-limit cohomology of abelian presheaves on finite spaces,
//! limits over refinement chains, and the componentwise assembly for
//! structured presheaves.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::complex::{assemble_grid, Assembled, Assembly, CochainComplex, ComplexError, Verticals};
use crate::exactla::{direct_limit, induced_map, subquotient, AlgebraError, CyclicSum, Diagram, FgAbGroup, GroupMap, Subquotient};
use crate::finspace::{refine_cover, Cover, FiniteSpace, PointSet, SpaceError};
use crate::sheaf::{decompose_structured, ToKind, Presheaf, SheafError};
use crate::strcat::StructuredHom;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomError {
    #[error(transparent)]
    Sheaf(#[from] SheafError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("not a sheaf: {0}")]
    NotASheaf(String),
    #[error("cover chain is empty")]
    EmptyCoverChain,
    #[error("cover does not live on the presheaf's space")]
    ForeignCover,
}

fn sign(g: &GroupMap, negative: bool) -> GroupMap {
    if negative {
        g.neg()
    } else {
        g.clone()
    }
}

/// Adds `g` into the block at `(i, j)`.
fn accumulate(blocks: &mut [Vec<Option<GroupMap>>], i: usize, j: usize, g: GroupMap) -> Result<(), AlgebraError> {
    let slot = &mut blocks[i][j];
    *slot = Some(match slot.take() {
        Some(h) => h.add(&g)?,
        None => g,
    });
    Ok(())
}

/// `ker d^n / im d^{n-1}` with its cocycle/projection data.
pub fn cohomology_subquotient(c: &CochainComplex<GroupMap>, n: usize) -> Result<Subquotient, AlgebraError> {
    let d_in = if n == 0 { GroupMap::zero(CyclicSum::zero(), c.object(0)) } else { c.differential(n - 1) };
    subquotient(&c.differential(n), &d_in)
}

/// The alternating Čech complex of a cover.
#[derive(Clone, Debug)]
pub struct CechComplex {
    cover: Cover,
    /// Increasing index tuples with nonempty intersection, per degree.
    tuples: Vec<Vec<Vec<usize>>>,
    intersections: Vec<Vec<usize>>,
    complex: CochainComplex<GroupMap>,
}

impl CechComplex {
    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn tuples(&self, p: usize) -> &[Vec<usize>] {
        self.tuples.get(p).map_or(&[], Vec::as_slice)
    }

    pub fn complex(&self) -> &CochainComplex<GroupMap> {
        &self.complex
    }

    /// `H^0 ..= H^max`.
    pub fn cohomology(&self, max: usize) -> Result<Vec<FgAbGroup>, CohomError> {
        Ok(self.complex.cohomologies(max)?)
    }
}

fn increasing_tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, len, &mut Vec::new(), &mut out);
    out
}

/// Builds the Čech complex in degrees `0 ..= max_degree + 1`. Tuples whose
/// intersection is empty contribute the zero group and are left out.
pub fn cech_complex(cover: &Cover, f: &Presheaf<GroupMap>, max_degree: usize) -> Result<CechComplex, CohomError> {
    let x = f.space();
    let members = cover.members();
    if members.iter().any(|m| x.open_index(*m).is_none()) || x.open_index(cover.target()).is_none() {
        return Err(CohomError::ForeignCover);
    }
    let top = (max_degree + 1).min(members.len().saturating_sub(1));
    let mut tuples = Vec::with_capacity(top + 1);
    let mut intersections = Vec::with_capacity(top + 1);
    for p in 0..=top {
        let mut ts = Vec::new();
        let mut opens = Vec::new();
        for t in increasing_tuples(members.len(), p + 1) {
            let v = t.iter().fold(cover.target(), |acc, &i| acc.intersection(members[i]));
            if !v.is_empty() {
                opens.push(x.open_index(v).expect("intersections of opens are open"));
                ts.push(t);
            }
        }
        tuples.push(ts);
        intersections.push(opens);
    }
    let objects: Vec<CyclicSum> =
        intersections.iter().map(|opens| CyclicSum::direct_sum(opens.iter().map(|&u| f.value(u)))).collect();
    let mut differentials = Vec::with_capacity(top);
    for p in 0..top {
        let sources: Vec<CyclicSum> = intersections[p].iter().map(|&u| f.value(u).clone()).collect();
        let targets: Vec<CyclicSum> = intersections[p + 1].iter().map(|&u| f.value(u).clone()).collect();
        let position: BTreeMap<&[usize], usize> = tuples[p].iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
        let mut blocks = vec![vec![None; sources.len()]; targets.len()];
        for (ti, t) in tuples[p + 1].iter().enumerate() {
            for k in 0..t.len() {
                let face: Vec<usize> = t.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &v)| v).collect();
                let si = position[face.as_slice()];
                let rho = f.restriction(intersections[p + 1][ti], intersections[p][si]).expect("faces contain the tuple's intersection");
                accumulate(&mut blocks, ti, si, sign(rho, k % 2 == 1))?;
            }
        }
        differentials.push(GroupMap::from_blocks(&sources, &targets, &blocks)?);
    }
    let complex = CochainComplex::new(objects, differentials)?;
    Ok(CechComplex { cover: cover.clone(), tuples, intersections, complex })
}

/// Čech cohomology `H^0 ..= H^max` of one cover.
pub fn cech_cohomology(cover: &Cover, f: &Presheaf<GroupMap>, max_degree: usize) -> Result<Vec<FgAbGroup>, CohomError> {
    cech_complex(cover, f, max_degree)?.cohomology(max_degree)
}

/// Degree-`p` cochain map `C^p(coarse) -> C^p(fine)` induced by the refinement
/// `assignment` (fine member -> coarse member). Repeated indices give zero,
/// otherwise the sign of the sorting permutation applies.
fn refinement_cochain_map(f: &Presheaf<GroupMap>, coarse: &CechComplex, fine: &CechComplex, assignment: &[usize], p: usize) -> Result<GroupMap, CohomError> {
    let sources: Vec<CyclicSum> = coarse.intersections.get(p).map_or(vec![], |v| v.iter().map(|&u| f.value(u).clone()).collect());
    let targets: Vec<CyclicSum> = fine.intersections.get(p).map_or(vec![], |v| v.iter().map(|&u| f.value(u).clone()).collect());
    let mut blocks = vec![vec![None; sources.len()]; targets.len()];
    if !sources.is_empty() {
        let position: BTreeMap<&[usize], usize> = coarse.tuples[p].iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
        for (ti, t) in fine.tuples(p).iter().enumerate() {
            let mut image: Vec<usize> = t.iter().map(|&j| assignment[j]).collect();
            let mut odd = false;
            // Bubble sort to track the permutation sign.
            for i in 0..image.len() {
                for j in 0..image.len() - 1 - i {
                    if image[j] > image[j + 1] {
                        image.swap(j, j + 1);
                        odd = !odd;
                    }
                }
            }
            if image.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            let si = position[image.as_slice()];
            let rho = f.restriction(fine.intersections[p][ti], coarse.intersections[p][si]).expect("fine intersection lies in coarse one");
            accumulate(&mut blocks, ti, si, sign(rho, odd))?;
        }
    }
    Ok(GroupMap::from_blocks(&sources, &targets, &blocks)?)
}

/// Refined Čech cohomology of a chain of covers, coarse to fine.
#[derive(Clone, Debug)]
pub struct RefinedCech {
    /// Čech cohomology of each cover, per degree.
    pub per_cover: Vec<Vec<FgAbGroup>>,
    /// Induced maps `H^p(chain[k]) -> H^p(chain[k+1])`, indexed `[p][k]`.
    pub induced: Vec<Vec<GroupMap>>,
    /// The direct limit, per degree.
    pub limit: Vec<FgAbGroup>,
}

/// Direct limit of Čech cohomology along a refinement chain.
pub fn refined_cech(f: &Presheaf<GroupMap>, chain: &[Cover], max_degree: usize) -> Result<RefinedCech, CohomError> {
    if chain.is_empty() {
        return Err(CohomError::EmptyCoverChain);
    }
    let x = f.space();
    let complexes = chain.iter().map(|c| cech_complex(c, f, max_degree)).collect::<Result<Vec<_>, _>>()?;
    let assignments =
        chain.windows(2).map(|w| refine_cover(x, &w[0], &w[1])).collect::<Result<Vec<_>, _>>()?;
    let mut per_cover = vec![Vec::new(); chain.len()];
    let mut induced = Vec::with_capacity(max_degree + 1);
    let mut limit = Vec::with_capacity(max_degree + 1);
    for p in 0..=max_degree {
        let sqs = complexes.iter().map(|c| cohomology_subquotient(c.complex(), p)).collect::<Result<Vec<_>, _>>()?;
        for (k, s) in sqs.iter().enumerate() {
            per_cover[k].push(s.group().clone());
        }
        let mut steps = Vec::with_capacity(chain.len() - 1);
        for k in 0..chain.len() - 1 {
            let cochain = refinement_cochain_map(f, &complexes[k], &complexes[k + 1], &assignments[k], p)?;
            steps.push(induced_map(&sqs[k], &sqs[k + 1], &cochain)?);
        }
        let diagram = Diagram::chain(sqs.iter().map(|s| s.group().to_cyclic()).collect(), steps.clone())?;
        limit.push(direct_limit(&diagram)?.group);
        induced.push(steps);
    }
    Ok(RefinedCech { per_cover, induced, limit })
}

/// `lim_→ H^p` along the chain, for `p = 0 ..= max`.
pub fn refined_cech_cohomology(f: &Presheaf<GroupMap>, chain: &[Cover], max_degree: usize) -> Result<Vec<FgAbGroup>, CohomError> {
    Ok(refined_cech(f, chain, max_degree)?.limit)
}

/// Strict chains `x_0 ⊏ ... ⊏ x_n` of the specialization order, in
/// lexicographic point order.
pub fn strict_chains(x: &FiniteSpace, n: usize) -> Vec<Vec<usize>> {
    fn extend(x: &FiniteSpace, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n + 1 {
            out.push(cur.clone());
            return;
        }
        let last = *cur.last().expect("nonempty");
        for y in 0..x.npoints() {
            if y != last && x.leq(last, y) {
                cur.push(y);
                extend(x, n, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    for x0 in 0..x.npoints() {
        extend(x, n, &mut vec![x0], &mut out);
    }
    out
}

/// The chain complex computing the derived functors of global sections:
/// `D^n = ⊕_{x_0 ⊏ ... ⊏ x_n} F(U_{x_0})`.
#[derive(Clone, Debug)]
pub struct DerivedLimitComplex {
    chains: Vec<Vec<Vec<usize>>>,
    complex: CochainComplex<GroupMap>,
}

impl DerivedLimitComplex {
    pub fn chains(&self, n: usize) -> &[Vec<usize>] {
        self.chains.get(n).map_or(&[], Vec::as_slice)
    }

    pub fn complex(&self) -> &CochainComplex<GroupMap> {
        &self.complex
    }

    pub fn cohomology(&self, max: usize) -> Result<Vec<FgAbGroup>, CohomError> {
        Ok(self.complex.cohomologies(max)?)
    }
}

/// Builds the complex without checking the sheaf axioms. Degrees run up to
/// `max_degree + 1` or the longest chain, whichever is smaller.
pub fn derived_limit_complex_unchecked(f: &Presheaf<GroupMap>, max_degree: usize) -> Result<DerivedLimitComplex, CohomError> {
    let x = f.space();
    let u: Vec<usize> = (0..x.npoints()).map(|p| x.open_index(x.minimal_open(p)).expect("minimal opens are open")).collect();
    let mut chains: Vec<Vec<Vec<usize>>> = Vec::new();
    for n in 0..=max_degree + 1 {
        let cs = strict_chains(x, n);
        if cs.is_empty() && n > 0 {
            break;
        }
        chains.push(cs);
    }
    let value = |c: &Vec<usize>| f.value(u[c[0]]).clone();
    let objects: Vec<CyclicSum> = chains.iter().map(|cs| CyclicSum::direct_sum(&cs.iter().map(value).collect::<Vec<_>>())).collect();
    let mut differentials = Vec::new();
    for n in 0..chains.len().saturating_sub(1) {
        let sources: Vec<CyclicSum> = chains[n].iter().map(value).collect();
        let targets: Vec<CyclicSum> = chains[n + 1].iter().map(value).collect();
        let position: BTreeMap<&[usize], usize> = chains[n].iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();
        let mut blocks = vec![vec![None; sources.len()]; targets.len()];
        for (ti, c) in chains[n + 1].iter().enumerate() {
            for i in 0..c.len() {
                let face: Vec<usize> = c.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &v)| v).collect();
                let si = position[face.as_slice()];
                let map = if i == 0 {
                    f.restriction(u[c[0]], u[c[1]]).expect("U_x0 lies in U_x1").clone()
                } else {
                    sign(&GroupMap::identity(&targets[ti]), i % 2 == 1)
                };
                accumulate(&mut blocks, ti, si, map)?;
            }
        }
        differentials.push(GroupMap::from_blocks(&sources, &targets, &blocks)?);
    }
    let complex = CochainComplex::new(objects, differentials)?;
    Ok(DerivedLimitComplex { chains, complex })
}

fn require_sheaf(f: &Presheaf<GroupMap>) -> Result<(), CohomError> {
    let violations = f.check_sheaf_axioms()?;
    match violations.first() {
        Some(v) => Err(CohomError::NotASheaf(v.to_string())),
        None => Ok(()),
    }
}

/// The derived-limit complex of a sheaf.
pub fn derived_limit_complex(f: &Presheaf<GroupMap>, max_degree: usize) -> Result<DerivedLimitComplex, CohomError> {
    require_sheaf(f)?;
    derived_limit_complex_unchecked(f, max_degree)
}

/// Sheaf cohomology `H^0 ..= H^max`.
pub fn derived_limit_cohomology(f: &Presheaf<GroupMap>, max_degree: usize) -> Result<Vec<FgAbGroup>, CohomError> {
    derived_limit_complex(f, max_degree)?.cohomology(max_degree)
}

/// A degree where Čech cohomology of the minimal-open cover differs from
/// derived-limit cohomology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disagreement {
    pub degree: usize,
    pub cech: FgAbGroup,
    pub derived: FgAbGroup,
}

/// Compares both computations on the canonical cover of the whole space.
pub fn compare_cech_with_derived(f: &Presheaf<GroupMap>, max_degree: usize) -> Result<Vec<Disagreement>, CohomError> {
    let x = f.space();
    let cech = cech_cohomology(&Cover::canonical(x, x.full())?, f, max_degree)?;
    let derived = derived_limit_cohomology(f, max_degree)?;
    Ok(cech
        .into_iter()
        .zip(derived)
        .enumerate()
        .filter(|(_, (c, d))| c != d)
        .map(|(degree, (cech, derived))| Disagreement { degree, cech, derived })
        .collect())
}

/// Which cochains feed each row of a structured computation.
#[derive(Clone, Debug, PartialEq)]
pub enum Mode {
    /// Derived-limit complexes of the sheafified components.
    Sheaf,
    /// Refined Čech cohomology along a chain of covers of the whole space.
    Cech(Vec<Cover>),
}

/// Rows of a structured cohomology computation, one per component.
pub fn structured_rows(f: &Presheaf<StructuredHom>, mode: &Mode, max_degree: usize) -> Result<Vec<CochainComplex<GroupMap>>, CohomError> {
    let parts = decompose_structured(f)?;
    parts
        .iter()
        .map(|p| {
            let sheaf = p.to_groups()?.sheafify()?;
            match mode {
                Mode::Sheaf => Ok(derived_limit_complex_unchecked(&sheaf, max_degree)?.complex().clone()),
                Mode::Cech(chain) => {
                    let limit = refined_cech_cohomology(&sheaf, chain, max_degree)?;
                    let objects: Vec<CyclicSum> = limit.iter().map(FgAbGroup::to_cyclic).collect();
                    let differentials = objects.windows(2).map(|w| GroupMap::zero(w[0].clone(), w[1].clone())).collect();
                    Ok(CochainComplex::new(objects, differentials)?)
                }
            }
        })
        .collect()
}

/// Decomposes `f`, sheafifies every component, builds one row per component
/// and reports the grid's cohomology in the chosen layout.
pub fn structured_cohomology(
    f: &Presheaf<StructuredHom>,
    mode: &Mode,
    verticals: Verticals<GroupMap>,
    assembly: Assembly,
    max_degree: usize,
) -> Result<Assembled<FgAbGroup>, CohomError> {
    let rows = structured_rows(f, mode, max_degree)?;
    let grid = assemble_grid(rows, verticals)?;
    Ok(grid.assemble(assembly, max_degree)?)
}

/// Cover of `x` by the given opens, checked.
pub fn cover_of(x: &FiniteSpace, members: Vec<PointSet>) -> Result<Cover, CohomError> {
    Ok(Cover::new(x, x.full(), members)?)
}
