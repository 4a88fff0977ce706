//! Hochschild cochain complexes of finite-dimensional algebras, and the
//! grid of Hochschild complexes of a structural ringed space.

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::complex::{assemble_grid, Assembled, Assembly, CochainComplex, ComplexError, VectorSpace, Verticals};
use crate::exactla::{AlgebraError, Field, FieldMatrix, Scalar};
use crate::finspace::PointSet;
use crate::ringspec::{additive_group, disjoint_union_assembly, recognize_structural_scheme, ring_components, FiniteRing, SchemeError};
use crate::sheaf::Presheaf;
use crate::strcat::StructuredHom;

/// Default highest Hochschild degree; `C^n` has dimension `dim^{n+1}`.
pub const DEFAULT_DEGREE_BOUND: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HochschildError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error("malformed algebra: {0}")]
    Shape(String),
    #[error("multiplication is not associative on basis triple ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("the unit vector is not a two-sided unit (fails on e_{0})")]
    NotUnital(usize),
    #[error("degree {requested} exceeds the bound {bound}")]
    DegreeTooLarge { requested: usize, bound: usize },
    #[error("section ring of component {p} is not an algebra over a prime field: {reason}")]
    SectionRingNotAlgebra { p: usize, reason: String },
    #[error("section rings have characteristics {0:?}")]
    MixedCharacteristic(Vec<usize>),
    #[error("the disjoint-union route gives rows {union:?}, the componentwise route {direct:?}")]
    RoutesDisagree { direct: Vec<Vec<usize>>, union: Vec<Vec<usize>> },
    #[error("not a structural scheme for the given cover and candidates")]
    NotAScheme,
}

/// `e_i · e_j = Σ_k c[i][j][k] e_k` over an exact field, with a unit vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteDimAlgebra {
    field: Field,
    dim: usize,
    c: Vec<Vec<Vec<Scalar>>>,
    one: Vec<Scalar>,
}

impl FiniteDimAlgebra {
    /// Reduces entries into the field and checks associativity and the unit on basis elements.
    pub fn new(field: Field, c: Vec<Vec<Vec<BigRational>>>, one: Vec<BigRational>) -> Result<Self, HochschildError> {
        let dim = one.len();
        if dim == 0 {
            return Err(HochschildError::Shape("dimension must be positive".into()));
        }
        if c.len() != dim || c.iter().any(|r| r.len() != dim || r.iter().any(|v| v.len() != dim)) {
            return Err(HochschildError::Shape(format!("structure constants must be {dim}x{dim}x{dim}")));
        }
        let reduce = |x: &BigRational| {
            field.element(x).ok_or_else(|| AlgebraError::InvalidField(format!("{x} has no image in {field}")))
        };
        let c = c
            .iter()
            .map(|r| r.iter().map(|v| v.iter().map(reduce).collect::<Result<Vec<_>, _>>()).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let one = one.iter().map(reduce).collect::<Result<Vec<_>, _>>()?;
        let a = FiniteDimAlgebra { field, dim, c, one };
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let left = a.mul(&a.mul(&a.basis(i), &a.basis(j)), &a.basis(k));
                    let right = a.mul(&a.basis(i), &a.mul(&a.basis(j), &a.basis(k)));
                    if left != right {
                        return Err(HochschildError::NotAssociative(i, j, k));
                    }
                }
            }
        }
        for i in 0..dim {
            let e = a.basis(i);
            if a.mul(&a.one, &e) != e || a.mul(&e, &a.one) != e {
                return Err(HochschildError::NotUnital(i));
            }
        }
        Ok(a)
    }

    /// Integer structure constants, reduced into `field`.
    pub fn from_ints(field: Field, c: &[Vec<Vec<i64>>], one: &[i64]) -> Result<Self, HochschildError> {
        let q = |v: i64| BigRational::from_integer(v.into());
        FiniteDimAlgebra::new(
            field,
            c.iter().map(|r| r.iter().map(|v| v.iter().map(|&x| q(x)).collect()).collect()).collect(),
            one.iter().map(|&x| q(x)).collect(),
        )
    }

    /// The underlying `F_q`-algebra of a finite ring of prime characteristic `q`.
    pub fn from_finite_ring(r: &FiniteRing) -> Result<Self, String> {
        let q = r.characteristic();
        let field = Field::prime(q as u64).map_err(|_| format!("characteristic {q} is not prime"))?;
        let t = additive_group(r);
        let g = t.group();
        if g.rank() != 0 || g.torsion().iter().any(|d| d.to_usize() != Some(q)) {
            return Err("additive group is not elementary abelian".into());
        }
        let dim = g.ngens();
        let coords = |x: usize| -> Vec<BigRational> { t.coordinates(x).into_iter().map(BigRational::from_integer).collect() };
        let basis: Vec<usize> = (0..dim).map(|k| t.generator(k)).collect();
        let c = basis.iter().map(|&a| basis.iter().map(|&b| coords(r.mul(a, b))).collect()).collect();
        FiniteDimAlgebra::new(field, c, coords(r.one())).map_err(|e| e.to_string())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn structure_constants(&self) -> &[Vec<Vec<Scalar>>] {
        &self.c
    }

    pub fn one(&self) -> &[Scalar] {
        &self.one
    }

    pub fn basis(&self, i: usize) -> Vec<Scalar> {
        let mut e = vec![Scalar::zero(); self.dim];
        e[i] = self.field.from_int(1);
        e
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let f = self.field;
        let mut out = vec![Scalar::zero(); self.dim];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let s = f.mul(xi, yj);
                for (k, o) in out.iter_mut().enumerate() {
                    *o = f.add(o, &f.mul(&s, &self.c[i][j][k]));
                }
            }
        }
        out
    }
}

fn encode(d: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &t| acc * d + t)
}

fn decode(d: usize, len: usize, mut k: usize) -> Vec<usize> {
    let mut t = vec![0; len];
    for slot in t.iter_mut().rev() {
        *slot = k % d;
        k /= d;
    }
    t
}

/// The coboundary `C^n -> C^{n+1}` with `C^n = Hom(A^{⊗n}, A)` in the basis
/// `(J, k)`: `e_J ↦ e_k`, indexed `encode(J) * dim + k`.
pub fn hochschild_differential(a: &FiniteDimAlgebra, n: usize) -> FieldMatrix {
    let (f, d) = (a.field, a.dim);
    let rows = d.pow(n as u32 + 2);
    let cols = d.pow(n as u32 + 1);
    let mut m = FieldMatrix::zeros(f, rows, cols);
    let sign = |k: usize, v: &Scalar| if k % 2 == 1 { f.sub(&Scalar::zero(), v) } else { v.clone() };
    for jr in 0..d.pow(n as u32 + 1) {
        let j = decode(d, n + 1, jr);
        let row = |m: usize| jr * d + m;
        // a_1 · f(a_2, ..., a_{n+1})
        let tail = encode(d, &j[1..]);
        for kp in 0..d {
            for mm in 0..d {
                let c = &a.c[j[0]][kp][mm];
                if !c.is_zero() {
                    m.add_at(row(mm), tail * d + kp, c);
                }
            }
        }
        // f(..., a_i a_{i+1}, ...)
        for i in 1..=n {
            for l in 0..d {
                let c = &a.c[j[i - 1]][j[i]][l];
                if c.is_zero() {
                    continue;
                }
                let mut merged: Vec<usize> = j[..i - 1].to_vec();
                merged.push(l);
                merged.extend_from_slice(&j[i + 1..]);
                let col = encode(d, &merged);
                let v = sign(i, c);
                for kp in 0..d {
                    m.add_at(row(kp), col * d + kp, &v);
                }
            }
        }
        // f(a_1, ..., a_n) · a_{n+1}
        let head = encode(d, &j[..n]);
        for kp in 0..d {
            for mm in 0..d {
                let c = &a.c[kp][j[n]][mm];
                if !c.is_zero() {
                    m.add_at(row(mm), head * d + kp, &sign(n + 1, c));
                }
            }
        }
    }
    m
}

/// `C^0 -> ... -> C^{max+1}` with `δ ∘ δ = 0` checked.
pub fn hochschild_complex(a: &FiniteDimAlgebra, max_degree: usize, bound: usize) -> Result<CochainComplex<FieldMatrix>, HochschildError> {
    if max_degree > bound {
        return Err(HochschildError::DegreeTooLarge { requested: max_degree, bound });
    }
    let objects = (0..=max_degree + 1).map(|n| VectorSpace { field: a.field, dim: a.dim.pow(n as u32 + 1) }).collect();
    let differentials = (0..=max_degree).map(|n| hochschild_differential(a, n)).collect();
    Ok(CochainComplex::new(objects, differentials)?)
}

/// `dim HH^0 ..= dim HH^max`.
pub fn hochschild_dimensions(a: &FiniteDimAlgebra, max_degree: usize, bound: usize) -> Result<Vec<usize>, HochschildError> {
    Ok(hochschild_complex(a, max_degree, bound)?.cohomologies(max_degree)?)
}

/// Result of the structured computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuredHochschild {
    /// Section algebra of each component.
    pub algebras: Vec<FiniteDimAlgebra>,
    pub table: Assembled<usize>,
    /// Per-row `dim HH^n` from the componentwise route.
    pub rows: Vec<Vec<usize>>,
    /// The same rows recomputed on the disjoint union of the component ringed spaces.
    pub union_rows: Vec<Vec<usize>>,
}

fn section_algebras(rings: &[FiniteRing]) -> Result<Vec<FiniteDimAlgebra>, HochschildError> {
    let chars: Vec<usize> = rings.iter().map(FiniteRing::characteristic).collect();
    if chars.windows(2).any(|w| w[0] != w[1]) {
        return Err(HochschildError::MixedCharacteristic(chars));
    }
    rings
        .iter()
        .enumerate()
        .map(|(p, r)| FiniteDimAlgebra::from_finite_ring(r).map_err(|reason| HochschildError::SectionRingNotAlgebra { p: p + 1, reason }))
        .collect()
}

/// Rows are the Hochschild complexes of the global-section algebras of the
/// sheafified components, in component order.
pub fn structured_hochschild(
    x: &Presheaf<StructuredHom>,
    verticals: Verticals<FieldMatrix>,
    assembly: Assembly,
    max_degree: usize,
    ring_bound: usize,
) -> Result<StructuredHochschild, HochschildError> {
    let parts = ring_components(x, ring_bound)?;
    let rings: Vec<FiniteRing> = parts.iter().map(|p| p.global_sections().clone()).collect();
    let algebras = section_algebras(&rings)?;
    let complexes = algebras.iter().map(|a| hochschild_complex(a, max_degree, DEFAULT_DEGREE_BOUND)).collect::<Result<Vec<_>, _>>()?;
    let rows = complexes.iter().map(|c| c.cohomologies(max_degree)).collect::<Result<Vec<_>, _>>()?;

    let union = disjoint_union_assembly(x, ring_bound)?;
    let union_rings: Vec<FiniteRing> = (0..union.blocks.len()).map(|p| union.component_sections(p).clone()).collect();
    let union_rows = section_algebras(&union_rings)?
        .iter()
        .map(|a| hochschild_dimensions(a, max_degree, DEFAULT_DEGREE_BOUND))
        .collect::<Result<Vec<_>, _>>()?;
    if union_rows != rows {
        return Err(HochschildError::RoutesDisagree { direct: rows, union: union_rows });
    }

    let grid = assemble_grid(complexes, verticals)?;
    let table = grid.assemble(assembly, max_degree)?;
    Ok(StructuredHochschild { algebras, table, rows, union_rows })
}

/// Recognizes `x` as a structural scheme first, then proceeds as
/// [`structured_hochschild`]. Separatedness and finite type are not checked.
pub fn structured_hochschild_of_scheme(
    x: &Presheaf<StructuredHom>,
    cover: &[PointSet],
    candidates: &[Vec<FiniteRing>],
    verticals: Verticals<FieldMatrix>,
    assembly: Assembly,
    max_degree: usize,
    ring_bound: usize,
) -> Result<StructuredHochschild, HochschildError> {
    if !recognize_structural_scheme(x, cover, candidates, ring_bound)?.is_structural_scheme() {
        return Err(HochschildError::NotAScheme);
    }
    structured_hochschild(x, verticals, assembly, max_degree, ring_bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ringspec::{structural_affine, DEFAULT_MAX_ELEMENTS};

    fn f2() -> FiniteDimAlgebra {
        FiniteDimAlgebra::from_ints(Field::Prime(2), &[vec![vec![1]]], &[1]).unwrap()
    }

    /// Basis e11, e12, e22 of upper-triangular 2x2 matrices.
    fn upper_triangular() -> FiniteDimAlgebra {
        let mut c = vec![vec![vec![0; 3]; 3]; 3];
        c[0][0][0] = 1;
        c[0][1][1] = 1;
        c[1][2][1] = 1;
        c[2][2][2] = 1;
        FiniteDimAlgebra::from_ints(Field::Rationals, &c, &[1, 0, 1]).unwrap()
    }

    #[test]
    fn f2_hochschild() {
        let c = hochschild_complex(&f2(), 2, DEFAULT_DEGREE_BOUND).unwrap();
        let ones: Vec<bool> = (0..3).map(|n| c.differential(n).get(0, 0).is_zero()).collect();
        assert_eq!(ones, vec![true, false, true]);
        assert_eq!(c.cohomologies(2).unwrap(), vec![1, 0, 0]);
    }

    #[test]
    fn upper_triangular_center() {
        assert_eq!(hochschild_dimensions(&upper_triangular(), 1, DEFAULT_DEGREE_BOUND).unwrap()[0], 1);
    }

    #[test]
    fn dual_numbers_are_commutative() {
        let c = vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![0, 0]]];
        let a = FiniteDimAlgebra::from_ints(Field::Prime(3), &c, &[1, 0]).unwrap();
        assert_eq!(hochschild_dimensions(&a, 0, DEFAULT_DEGREE_BOUND).unwrap(), vec![2]);
    }

    #[test]
    fn rejects_bad_algebras() {
        let c = vec![vec![vec![0, 1], vec![1, 0]], vec![vec![1, 0], vec![1, 0]]];
        assert!(FiniteDimAlgebra::from_ints(Field::Prime(2), &c, &[1, 0]).is_err());
        assert!(matches!(
            hochschild_complex(&f2(), 4, DEFAULT_DEGREE_BOUND),
            Err(HochschildError::DegreeTooLarge { requested: 4, bound: 3 })
        ));
    }

    #[test]
    fn ring_to_algebra() {
        let r = FiniteRing::product(&[&FiniteRing::zmod(2).unwrap(), &FiniteRing::zmod(2).unwrap()], 64).unwrap();
        let a = FiniteDimAlgebra::from_finite_ring(&r).unwrap();
        assert_eq!(a.dim(), 2);
        assert_eq!(hochschild_dimensions(&a, 1, 3).unwrap(), vec![2, 0]);
        assert!(FiniteDimAlgebra::from_finite_ring(&FiniteRing::zmod(4).unwrap()).is_err());
    }

    #[test]
    fn structured_pair_of_f2() {
        let z2 = FiniteRing::zmod(2).unwrap();
        let x = structural_affine(&[z2.clone(), z2]).unwrap();
        let s = structured_hochschild(&x, Verticals::Trivial, Assembly::Total, 3, DEFAULT_MAX_ELEMENTS).unwrap();
        assert_eq!(s.table, Assembled::Total(vec![1, 1, 0, 0]));
        assert_eq!(s.rows, s.union_rows);
        assert_eq!(s.rows, vec![vec![1, 0, 0, 0]; 2]);
    }

    #[test]
    fn mixed_characteristic_is_rejected() {
        let x = structural_affine(&[FiniteRing::zmod(2).unwrap(), FiniteRing::zmod(3).unwrap()]).unwrap();
        let r = structured_hochschild(&x, Verticals::Trivial, Assembly::Rows, 1, DEFAULT_MAX_ELEMENTS);
        assert!(matches!(r, Err(HochschildError::MixedCharacteristic(_))));
    }
}
