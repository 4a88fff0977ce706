//! Quotient presentations, subquotients `ker g / im f`, and direct limits.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::group::{CyclicSum, FgAbGroup, GroupMap};
use super::matrix::IntMatrix;
use super::snf::{smith_normal_form, SmithForm};
use super::AlgebraError;

/// `Z^n / (column span of a relation matrix)` with explicit coordinates.
///
/// The canonical group's generators are ordered free-first, then torsion in
/// divisibility order, matching [`FgAbGroup::to_cyclic`].
#[derive(Clone, Debug)]
pub struct Quotient {
    snf: SmithForm,
    group: FgAbGroup,
    /// Row of the diagonal coordinates for each canonical generator, with its order (0 = free).
    slots: Vec<(usize, BigInt)>,
}

impl Quotient {
    pub fn new(ngens: usize, relations: &IntMatrix) -> Quotient {
        assert_eq!(relations.nrows(), ngens, "relation matrix must have one row per generator");
        let snf = smith_normal_form(relations);
        let diag = snf.diagonal();
        let mut free = Vec::new();
        let mut torsion = Vec::new();
        for row in 0..ngens {
            match diag.get(row) {
                Some(d) if d.is_one() => {}
                Some(d) if !d.is_zero() => torsion.push((row, d.clone())),
                _ => free.push((row, BigInt::zero())),
            }
        }
        let group = FgAbGroup::new_unchecked(free.len(), torsion.iter().map(|(_, d)| d.clone()).collect());
        free.extend(torsion);
        Quotient { snf, group, slots: free }
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn ngens(&self) -> usize {
        self.snf.u.nrows()
    }

    /// Canonical coordinates of the class of `x`.
    pub fn project(&self, x: &[BigInt]) -> Vec<BigInt> {
        let y = self.snf.u.mul_vec(x);
        self.slots
            .iter()
            .map(|(row, d)| if d.is_zero() { y[*row].clone() } else { y[*row].mod_floor(d) })
            .collect()
    }

    /// A representative in `Z^n` of canonical generator `k`.
    pub fn lift(&self, k: usize) -> Vec<BigInt> {
        self.snf.u_inv.column(self.slots[k].0)
    }
}

/// Solves `basis * z = w` for a matrix of full column rank.
#[derive(Clone, Debug)]
struct LatticeSolver {
    snf: SmithForm,
    rank: usize,
}

impl LatticeSolver {
    fn new(basis: &IntMatrix) -> Self {
        let snf = smith_normal_form(basis);
        let rank = snf.rank();
        debug_assert_eq!(rank, basis.ncols(), "lattice basis must have full column rank");
        LatticeSolver { snf, rank }
    }

    fn solve(&self, w: &[BigInt]) -> Option<Vec<BigInt>> {
        let y = self.snf.u.mul_vec(w);
        let mut t = Vec::with_capacity(self.rank);
        for (i, yi) in y.iter().enumerate() {
            if i < self.rank {
                let (q, r) = yi.div_rem(&self.snf.s[(i, i)]);
                if !r.is_zero() {
                    return None;
                }
                t.push(q);
            } else if !yi.is_zero() {
                return None;
            }
        }
        Some(self.snf.v.mul_vec(&t))
    }
}

/// `ker g / im f` together with coordinates for cocycles and representatives
/// for generators.
#[derive(Clone, Debug)]
pub struct Subquotient {
    ambient: CyclicSum,
    /// Columns: a basis (in `Z^n` lifts) of the preimage of the kernel.
    kernel_basis: IntMatrix,
    solver: Option<LatticeSolver>,
    quotient: Quotient,
}

impl Subquotient {
    pub fn group(&self) -> &FgAbGroup {
        self.quotient.group()
    }

    /// The group the cocycles live in.
    pub fn ambient(&self) -> &CyclicSum {
        &self.ambient
    }

    /// Canonical coordinates of the class of `x`, or `None` if `x` is not in the kernel.
    pub fn project(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let Some(solver) = &self.solver else {
            // Trivial kernel lattice: only the zero vector is a cocycle.
            return x.iter().all(Zero::is_zero).then(Vec::new);
        };
        let z = solver.solve(x)?;
        Some(self.quotient.project(&z))
    }

    /// A cocycle representing canonical generator `k`.
    pub fn lift(&self, k: usize) -> Vec<BigInt> {
        let mut x = self.kernel_basis.mul_vec(&self.quotient.lift(k));
        self.ambient.reduce(&mut x);
        x
    }

    /// For `f = 0`: the inclusion of the kernel into the ambient group.
    pub fn inclusion(&self) -> GroupMap {
        let cols: Vec<Vec<BigInt>> = (0..self.group().ngens()).map(|k| self.lift(k)).collect();
        let m = IntMatrix::from_columns(self.ambient.ngens(), &cols);
        GroupMap::new(self.group().to_cyclic(), self.ambient.clone(), m)
            .expect("kernel generators have orders compatible with the ambient group")
    }
}

/// Computes `ker g / im f` in canonical form.
pub fn subquotient(g: &GroupMap, f: &GroupMap) -> Result<Subquotient, AlgebraError> {
    if f.target() != g.source() {
        return Err(AlgebraError::ShapeMismatch(format!(
            "f lands in a group with {} generators but g starts from {}",
            f.target().ngens(),
            g.source().ngens()
        )));
    }
    if !g.compose(f)?.is_zero() {
        return Err(AlgebraError::CompositionNotZero);
    }
    let b = g.source();
    let n = b.ngens();

    // x is a kernel lift iff G x lies in the relation lattice of the target.
    let rel_c = g.target().relation_matrix();
    let m = g.matrix().hstack(&rel_c.neg());
    let snf = smith_normal_form(&m);
    let r = snf.rank();
    let kdim = m.ncols() - r;
    let kernel_basis = snf.v.block(0, n, r, m.ncols());

    let boundaries = f.matrix().hstack(&b.relation_matrix());
    if kdim == 0 {
        return Ok(Subquotient {
            ambient: b.clone(),
            kernel_basis,
            solver: None,
            quotient: Quotient::new(0, &IntMatrix::zeros(0, boundaries.ncols())),
        });
    }
    let solver = LatticeSolver::new(&kernel_basis);
    let mut rel_cols = Vec::with_capacity(boundaries.ncols());
    for j in 0..boundaries.ncols() {
        let z = solver
            .solve(&boundaries.column(j))
            .expect("boundaries and torsion relations lie in the kernel lattice");
        rel_cols.push(z);
    }
    let relations = IntMatrix::from_columns(kdim, &rel_cols);
    Ok(Subquotient { ambient: b.clone(), kernel_basis, solver: Some(solver), quotient: Quotient::new(kdim, &relations) })
}

/// Kernel of `g` as a subquotient with zero boundaries.
pub fn kernel(g: &GroupMap) -> Result<Subquotient, AlgebraError> {
    subquotient(g, &GroupMap::zero(CyclicSum::zero(), g.source().clone()))
}

/// Cokernel of `f` with its projection map.
pub fn cokernel(f: &GroupMap) -> (FgAbGroup, GroupMap) {
    let t = f.target();
    let q = Quotient::new(t.ngens(), &f.matrix().hstack(&t.relation_matrix()));
    let cols: Vec<Vec<BigInt>> = (0..t.ngens())
        .map(|i| {
            let mut e = vec![BigInt::zero(); t.ngens()];
            e[i] = BigInt::one();
            q.project(&e)
        })
        .collect();
    let m = IntMatrix::from_columns(q.group().ngens(), &cols);
    let proj = GroupMap::new(t.clone(), q.group().to_cyclic(), m).expect("projection is well defined");
    (q.group().clone(), proj)
}

/// A diagram of groups over a finite preorder.
#[derive(Clone, Debug)]
pub struct Diagram {
    pub objects: Vec<CyclicSum>,
    /// `leq[i][j]` means there is an arrow `i -> j`.
    pub leq: Vec<Vec<bool>>,
    /// `maps[i][j]` is present exactly when `leq[i][j]`.
    pub maps: Vec<Vec<Option<GroupMap>>>,
}

impl Diagram {
    /// A chain `G_0 -> G_1 -> ... -> G_k` from consecutive maps; longer arrows are composites.
    pub fn chain(objects: Vec<CyclicSum>, steps: Vec<GroupMap>) -> Result<Diagram, AlgebraError> {
        let n = objects.len();
        if steps.len() + 1 != n.max(1) {
            return Err(AlgebraError::ShapeMismatch("a chain of n objects needs n - 1 maps".into()));
        }
        let mut maps = vec![vec![None; n]; n];
        let mut leq = vec![vec![false; n]; n];
        for i in 0..n {
            leq[i][i] = true;
            maps[i][i] = Some(GroupMap::identity(&objects[i]));
            for j in i + 1..n {
                leq[i][j] = true;
                let prev = maps[i][j - 1].as_ref().expect("filled above");
                maps[i][j] = Some(steps[j - 1].compose(prev)?);
            }
        }
        Ok(Diagram { objects, leq, maps })
    }
}

/// Colimit of a diagram together with insertion maps `G_i -> colim`.
#[derive(Clone, Debug)]
pub struct DirectLimit {
    pub group: FgAbGroup,
    pub insertions: Vec<GroupMap>,
}

/// Direct limit over a finite directed preorder, computed as the quotient of
/// `(+) G_i` by `i_i(x) - i_j(f_ij(x))`.
pub fn direct_limit(diagram: &Diagram) -> Result<DirectLimit, AlgebraError> {
    let n = diagram.objects.len();
    let leq = &diagram.leq;
    if leq.len() != n || leq.iter().any(|r| r.len() != n) || diagram.maps.len() != n {
        return Err(AlgebraError::ShapeMismatch("preorder size does not match objects".into()));
    }
    for i in 0..n {
        if !leq[i][i] {
            return Err(AlgebraError::NotAPreorder(format!("{i} is not related to itself")));
        }
        for j in 0..n {
            for k in 0..n {
                if leq[i][j] && leq[j][k] && !leq[i][k] {
                    return Err(AlgebraError::NotAPreorder(format!("{i} <= {j} <= {k} but not {i} <= {k}")));
                }
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if !(0..n).any(|k| leq[i][k] && leq[j][k]) {
                return Err(AlgebraError::NotDirected { first: i, second: j });
            }
        }
    }
    let map = |i: usize, j: usize| -> Result<&GroupMap, AlgebraError> {
        let f = diagram.maps[i][j].as_ref().ok_or(AlgebraError::NotFunctorial {
            path: vec![i, j],
            reason: "missing map for a related pair".into(),
        })?;
        if f.source() != &diagram.objects[i] || f.target() != &diagram.objects[j] {
            return Err(AlgebraError::NotFunctorial { path: vec![i, j], reason: "map endpoints differ from objects".into() });
        }
        Ok(f)
    };
    for i in 0..n {
        if *map(i, i)? != GroupMap::identity(&diagram.objects[i]) {
            return Err(AlgebraError::NotFunctorial { path: vec![i, i], reason: "self-map is not the identity".into() });
        }
        for j in 0..n {
            for k in 0..n {
                if leq[i][j] && leq[j][k] && map(j, k)?.compose(map(i, j)?)? != *map(i, k)? {
                    return Err(AlgebraError::NotFunctorial {
                        path: vec![i, j, k],
                        reason: "composite differs from the direct map".into(),
                    });
                }
            }
        }
    }

    let offsets: Vec<usize> = diagram
        .objects
        .iter()
        .scan(0, |acc, g| {
            let o = *acc;
            *acc += g.ngens();
            Some(o)
        })
        .collect();
    let total = CyclicSum::direct_sum(&diagram.objects);
    let mut relations: Vec<Vec<BigInt>> = Vec::new();
    let rel = total.relation_matrix();
    relations.extend((0..rel.ncols()).map(|j| rel.column(j)));
    for i in 0..n {
        for j in 0..n {
            if i == j || !leq[i][j] {
                continue;
            }
            let f = map(i, j)?;
            for e in 0..diagram.objects[i].ngens() {
                let mut v = vec![BigInt::zero(); total.ngens()];
                v[offsets[i] + e] += 1;
                for (t, a) in f.matrix().column(e).into_iter().enumerate() {
                    v[offsets[j] + t] -= a;
                }
                relations.push(v);
            }
        }
    }
    let q = Quotient::new(total.ngens(), &IntMatrix::from_columns(total.ngens(), &relations));
    let target = q.group().to_cyclic();
    let insertions = (0..n)
        .map(|i| {
            let cols: Vec<Vec<BigInt>> = (0..diagram.objects[i].ngens())
                .map(|e| {
                    let mut v = vec![BigInt::zero(); total.ngens()];
                    v[offsets[i] + e] = BigInt::one();
                    q.project(&v)
                })
                .collect();
            GroupMap::new(diagram.objects[i].clone(), target.clone(), IntMatrix::from_columns(target.ngens(), &cols))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DirectLimit { group: q.group().clone(), insertions })
}

/// Applies `map` to the class of `x` in `from`, landing in canonical coordinates of `to`.
///
/// `x` must be a cocycle of `from`; `map` must be a chain map component
/// sending cocycles to cocycles and boundaries to boundaries.
pub fn induced_map(from: &Subquotient, to: &Subquotient, map: &GroupMap) -> Result<GroupMap, AlgebraError> {
    if map.source() != from.ambient() || map.target() != to.ambient() {
        return Err(AlgebraError::ShapeMismatch("chain map does not match the subquotients".into()));
    }
    let cols = (0..from.group().ngens())
        .map(|k| {
            to.project(&map.apply(&from.lift(k))).ok_or_else(|| {
                AlgebraError::InvalidMap("chain map sends a cocycle outside the target kernel".into())
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    GroupMap::new(
        from.group().to_cyclic(),
        to.group().to_cyclic(),
        IntMatrix::from_columns(to.group().ngens(), &cols),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn z() -> CyclicSum {
        CyclicSum::free(1)
    }

    #[test]
    fn homology_of_single_z() {
        let f = GroupMap::zero(CyclicSum::zero(), z());
        let g = GroupMap::zero(z(), CyclicSum::zero());
        assert_eq!(*subquotient(&g, &f).unwrap().group(), FgAbGroup::free(1));
    }

    #[test]
    fn times_two_cokernel() {
        let f = GroupMap::scalar(&z(), 2);
        let g = GroupMap::zero(z(), CyclicSum::zero());
        assert_eq!(*subquotient(&g, &f).unwrap().group(), FgAbGroup::cyclic(2));
    }

    #[test]
    fn times_two_kernel_is_trivial() {
        let f = GroupMap::zero(CyclicSum::zero(), z());
        let g = GroupMap::scalar(&z(), 2);
        assert!(subquotient(&g, &f).unwrap().group().is_trivial());
    }

    #[test]
    fn rejects_non_complex() {
        let f = GroupMap::scalar(&z(), 1);
        let g = GroupMap::scalar(&z(), 1);
        assert!(matches!(subquotient(&g, &f), Err(AlgebraError::CompositionNotZero)));
        let h = GroupMap::zero(CyclicSum::free(2), z());
        assert!(matches!(subquotient(&h, &f), Err(AlgebraError::ShapeMismatch(_))));
    }

    #[test]
    fn kernel_into_torsion_target() {
        // Z -> Z/4, 1 -> 2: kernel is 2Z, free of rank 1, and its generator maps to 2.
        let g = GroupMap::new(z(), CyclicSum::cyclic(4), IntMatrix::from_rows(&[vec![2]])).unwrap();
        let k = kernel(&g).unwrap();
        assert_eq!(*k.group(), FgAbGroup::free(1));
        let lift = k.lift(0);
        assert_eq!(lift[0].abs(), BigInt::from(2));
        assert!(k.project(&[BigInt::from(1)]).is_none());
        assert_eq!(k.project(&[BigInt::from(6)]).unwrap()[0].abs(), BigInt::from(3));
    }

    #[test]
    fn torsion_subquotient_coordinates_round_trip() {
        // 0 -> Z/2 (+) Z/4 -> 0 with im f generated by (0, 2): result Z/2 (+) Z/2.
        let b = CyclicSum::new(vec![BigInt::from(2), BigInt::from(4)]).unwrap();
        let f = GroupMap::new(z(), b.clone(), IntMatrix::from_rows(&[vec![0], vec![2]])).unwrap();
        let g = GroupMap::zero(b, CyclicSum::zero());
        let h = subquotient(&g, &f).unwrap();
        assert_eq!(*h.group(), FgAbGroup::from_parts(0, &[2, 2]).unwrap());
        for k in 0..h.group().ngens() {
            let mut e = vec![BigInt::zero(); h.group().ngens()];
            e[k] = BigInt::one();
            assert_eq!(h.project(&h.lift(k)).unwrap(), e);
        }
    }

    #[test]
    fn chain_limit_is_top_object() {
        let steps = vec![GroupMap::scalar(&z(), 2), GroupMap::scalar(&z(), 2), GroupMap::scalar(&z(), 1)];
        let d = Diagram::chain(vec![z(), z(), z(), z()], steps).unwrap();
        let lim = direct_limit(&d).unwrap();
        assert_eq!(lim.group, FgAbGroup::free(1));
        let mults: Vec<BigInt> = lim.insertions.iter().map(|m| m.matrix()[(0, 0)].abs()).collect();
        let expected: Vec<BigInt> = [4, 2, 1, 1].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(mults, expected);
    }
}
