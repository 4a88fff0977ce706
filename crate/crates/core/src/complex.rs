//! Cochain complexes, grids of complexes joined by vertical maps, and total
//! complexes.
//!
//! Everything is generic over [`Linear`], implemented for integer group maps
//! (cohomology is a finitely generated abelian group) and for matrices over
//! an exact field (cohomology is a dimension).

use std::fmt;

use thiserror::Error;

use crate::exactla::{field_cohomology, subquotient, AlgebraError, CyclicSum, FgAbGroup, Field, FieldMatrix, GroupMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("d^{} ∘ d^{degree} is not zero", degree + 1)]
    NotAComplex { degree: usize },
    #[error("row {row}: d^{} ∘ d^{degree} is not zero", degree + 1)]
    RowNotAComplex { row: usize, degree: usize },
    #[error("differential {degree} does not connect consecutive degrees")]
    ShapeMismatch { degree: usize },
    #[error("vertical map at row {row}, column {col} has the wrong shape")]
    VerticalShapeMismatch { row: usize, col: usize },
    #[error("square at row {row}, column {col}: {reason}")]
    AnticommutationFails { row: usize, col: usize, reason: &'static str },
    #[error("verticals at column {col} compose to a nonzero map (rows {row} and {})", row + 1)]
    VerticalsNotAComplex { row: usize, col: usize },
    #[error("a complex needs at least one degree")]
    Empty,
}

/// A linear map between objects of an additive category with computable cohomology.
pub trait Linear: Clone + PartialEq + fmt::Debug {
    type Object: Clone + PartialEq + fmt::Debug;
    type Homology: Clone + PartialEq + fmt::Debug;

    fn dom(&self) -> Self::Object;
    fn cod(&self) -> Self::Object;
    fn zero_map(source: &Self::Object, target: &Self::Object) -> Self;
    /// `self ∘ first`.
    fn compose(&self, first: &Self) -> Result<Self, ComplexError>;
    fn add(&self, other: &Self) -> Result<Self, ComplexError>;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// The zero object of the same kind (same field, say) as `like`.
    fn zero_object(like: &Self::Object) -> Self::Object;
    fn direct_sum(parts: &[Self::Object], like: &Self::Object) -> Self::Object;
    /// Block map `⊕ sources -> ⊕ targets`; `blocks[i][j]: sources[j] -> targets[i]`.
    fn from_blocks(
        sources: &[Self::Object],
        targets: &[Self::Object],
        blocks: &[Vec<Option<Self>>],
        like: &Self::Object,
    ) -> Result<Self, ComplexError>;
    /// `ker d_out / im d_in`.
    fn homology(d_out: &Self, d_in: &Self) -> Result<Self::Homology, ComplexError>;
    fn homology_sum(parts: &[Self::Homology]) -> Self::Homology;
}

impl Linear for GroupMap {
    type Object = CyclicSum;
    type Homology = FgAbGroup;

    fn dom(&self) -> CyclicSum {
        self.source().clone()
    }

    fn cod(&self) -> CyclicSum {
        self.target().clone()
    }

    fn zero_map(source: &CyclicSum, target: &CyclicSum) -> Self {
        GroupMap::zero(source.clone(), target.clone())
    }

    fn compose(&self, first: &Self) -> Result<Self, ComplexError> {
        Ok(GroupMap::compose(self, first)?)
    }

    fn add(&self, other: &Self) -> Result<Self, ComplexError> {
        Ok(GroupMap::add(self, other)?)
    }

    fn neg(&self) -> Self {
        GroupMap::neg(self)
    }

    fn is_zero(&self) -> bool {
        GroupMap::is_zero(self)
    }

    fn zero_object(_: &CyclicSum) -> CyclicSum {
        CyclicSum::zero()
    }

    fn direct_sum(parts: &[CyclicSum], _: &CyclicSum) -> CyclicSum {
        CyclicSum::direct_sum(parts)
    }

    fn from_blocks(sources: &[CyclicSum], targets: &[CyclicSum], blocks: &[Vec<Option<Self>>], _: &CyclicSum) -> Result<Self, ComplexError> {
        Ok(GroupMap::from_blocks(sources, targets, blocks)?)
    }

    fn homology(d_out: &Self, d_in: &Self) -> Result<FgAbGroup, ComplexError> {
        Ok(subquotient(d_out, d_in)?.group().clone())
    }

    fn homology_sum(parts: &[FgAbGroup]) -> FgAbGroup {
        FgAbGroup::direct_sum(parts)
    }
}

/// `F^dim` for an exact field `F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VectorSpace {
    pub field: Field,
    pub dim: usize,
}

impl Linear for FieldMatrix {
    type Object = VectorSpace;
    type Homology = usize;

    fn dom(&self) -> VectorSpace {
        VectorSpace { field: self.field(), dim: self.ncols() }
    }

    fn cod(&self) -> VectorSpace {
        VectorSpace { field: self.field(), dim: self.nrows() }
    }

    fn zero_map(source: &VectorSpace, target: &VectorSpace) -> Self {
        FieldMatrix::zeros(source.field, target.dim, source.dim)
    }

    fn compose(&self, first: &Self) -> Result<Self, ComplexError> {
        Ok(self.mul(first)?)
    }

    fn add(&self, other: &Self) -> Result<Self, ComplexError> {
        Ok(FieldMatrix::add(self, other)?)
    }

    fn neg(&self) -> Self {
        FieldMatrix::neg(self)
    }

    fn is_zero(&self) -> bool {
        FieldMatrix::is_zero(self)
    }

    fn zero_object(like: &VectorSpace) -> VectorSpace {
        VectorSpace { field: like.field, dim: 0 }
    }

    fn direct_sum(parts: &[VectorSpace], like: &VectorSpace) -> VectorSpace {
        VectorSpace { field: like.field, dim: parts.iter().map(|p| p.dim).sum() }
    }

    fn from_blocks(
        sources: &[VectorSpace],
        targets: &[VectorSpace],
        blocks: &[Vec<Option<Self>>],
        like: &VectorSpace,
    ) -> Result<Self, ComplexError> {
        let rows: usize = targets.iter().map(|t| t.dim).sum();
        let cols: usize = sources.iter().map(|s| s.dim).sum();
        let mut m = FieldMatrix::zeros(like.field, rows, cols);
        let mut r0 = 0;
        for (i, t) in targets.iter().enumerate() {
            let mut c0 = 0;
            for (j, s) in sources.iter().enumerate() {
                if let Some(b) = blocks.get(i).and_then(|row| row.get(j)).and_then(Option::as_ref) {
                    if b.nrows() != t.dim || b.ncols() != s.dim || b.field() != like.field {
                        return Err(AlgebraError::ShapeMismatch(format!("block ({i}, {j}) has wrong shape")).into());
                    }
                    m.set_block(r0, c0, b);
                }
                c0 += s.dim;
            }
            r0 += t.dim;
        }
        Ok(m)
    }

    fn homology(d_out: &Self, d_in: &Self) -> Result<usize, ComplexError> {
        Ok(field_cohomology(d_out, d_in)?)
    }

    fn homology_sum(parts: &[usize]) -> usize {
        parts.iter().sum()
    }
}

/// `C^0 -> C^1 -> ... -> C^N`, zero beyond `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct CochainComplex<M: Linear> {
    objects: Vec<M::Object>,
    differentials: Vec<M>,
}

impl<M: Linear> CochainComplex<M> {
    /// Checks shapes and `d^{n+1} ∘ d^n = 0` for every `n`.
    pub fn new(objects: Vec<M::Object>, differentials: Vec<M>) -> Result<Self, ComplexError> {
        if objects.is_empty() {
            return Err(ComplexError::Empty);
        }
        if differentials.len() + 1 != objects.len() {
            return Err(ComplexError::ShapeMismatch { degree: differentials.len() });
        }
        for (n, d) in differentials.iter().enumerate() {
            if d.dom() != objects[n] || d.cod() != objects[n + 1] {
                return Err(ComplexError::ShapeMismatch { degree: n });
            }
        }
        for n in 0..differentials.len().saturating_sub(1) {
            if !differentials[n + 1].compose(&differentials[n])?.is_zero() {
                return Err(ComplexError::NotAComplex { degree: n });
            }
        }
        Ok(CochainComplex { objects, differentials })
    }

    /// The complex with a single object in degree 0.
    pub fn concentrated(object: M::Object) -> Self {
        CochainComplex { objects: vec![object], differentials: Vec::new() }
    }

    /// Highest stored degree.
    pub fn top_degree(&self) -> usize {
        self.objects.len() - 1
    }

    pub fn objects(&self) -> &[M::Object] {
        &self.objects
    }

    pub fn differentials(&self) -> &[M] {
        &self.differentials
    }

    pub fn object(&self, n: usize) -> M::Object {
        self.objects.get(n).cloned().unwrap_or_else(|| M::zero_object(&self.objects[0]))
    }

    /// `d^n: C^n -> C^{n+1}`, zero outside the stored range.
    pub fn differential(&self, n: usize) -> M {
        self.differentials.get(n).cloned().unwrap_or_else(|| M::zero_map(&self.object(n), &self.object(n + 1)))
    }

    /// `H^n = ker d^n / im d^{n-1}`.
    pub fn cohomology(&self, n: usize) -> Result<M::Homology, ComplexError> {
        let d_in = if n == 0 { M::zero_map(&M::zero_object(&self.objects[0]), &self.object(0)) } else { self.differential(n - 1) };
        M::homology(&self.differential(n), &d_in)
    }

    /// `H^0 ..= H^max`.
    pub fn cohomologies(&self, max: usize) -> Result<Vec<M::Homology>, ComplexError> {
        (0..=max).map(|n| self.cohomology(n)).collect()
    }

    /// The same complex extended by zeros up to `top`.
    fn padded(&self, top: usize) -> CochainComplex<M> {
        let objects: Vec<M::Object> = (0..=top.max(self.top_degree())).map(|n| self.object(n)).collect();
        let differentials = (0..objects.len() - 1).map(|n| self.differential(n)).collect();
        CochainComplex { objects, differentials }
    }
}

/// Vertical maps from row `r`, column `c` to row `r + 1`, column `c`.
#[derive(Clone, Debug, PartialEq)]
pub enum Verticals<M: Linear> {
    /// All vertical maps are zero.
    Trivial,
    /// `d_v ∘ d_h + d_h ∘ d_v = 0`; the total differential is `d_h + d_v`.
    Anticommuting(Vec<Vec<M>>),
    /// `d_v ∘ d_h = d_h ∘ d_v`; the total differential is `d_h + (-1)^c d_v`.
    Commuting(Vec<Vec<M>>),
}

/// Rows of cochain complexes joined by a vertical family.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexGrid<M: Linear> {
    rows: Vec<CochainComplex<M>>,
    verticals: Verticals<M>,
    width: usize,
}

/// Validates a grid: shapes, the square condition of the chosen convention,
/// and that consecutive verticals compose to zero.
pub fn assemble_grid<M: Linear>(rows: Vec<CochainComplex<M>>, verticals: Verticals<M>) -> Result<ComplexGrid<M>, ComplexError> {
    if rows.is_empty() {
        return Err(ComplexError::Empty);
    }
    let width = rows.iter().map(|r| r.top_degree() + 1).max().expect("nonempty");
    let rows: Vec<CochainComplex<M>> = rows.iter().map(|r| r.padded(width - 1)).collect();
    let (maps, commuting) = match &verticals {
        Verticals::Trivial => return Ok(ComplexGrid { rows, verticals, width }),
        Verticals::Anticommuting(m) => (m, false),
        Verticals::Commuting(m) => (m, true),
    };
    if maps.len() + 1 != rows.len() {
        return Err(ComplexError::VerticalShapeMismatch { row: maps.len(), col: 0 });
    }
    for (r, row_maps) in maps.iter().enumerate() {
        if row_maps.len() != width {
            return Err(ComplexError::VerticalShapeMismatch { row: r, col: row_maps.len().min(width) });
        }
        for (c, v) in row_maps.iter().enumerate() {
            if v.dom() != rows[r].object(c) || v.cod() != rows[r + 1].object(c) {
                return Err(ComplexError::VerticalShapeMismatch { row: r, col: c });
            }
        }
    }
    for (r, row_maps) in maps.iter().enumerate() {
        for c in 0..width.saturating_sub(1) {
            let down_then_right = rows[r + 1].differential(c).compose(&row_maps[c])?;
            let right_then_down = row_maps[c + 1].compose(&rows[r].differential(c))?;
            let defect = if commuting { down_then_right.add(&right_then_down.neg())? } else { down_then_right.add(&right_then_down)? };
            if !defect.is_zero() {
                let reason = if commuting { "vertical maps do not commute with the rows" } else { "vertical maps do not anticommute with the rows" };
                return Err(ComplexError::AnticommutationFails { row: r, col: c, reason });
            }
        }
        if r + 1 < maps.len() {
            for c in 0..width {
                if !maps[r + 1][c].compose(&row_maps[c])?.is_zero() {
                    return Err(ComplexError::VerticalsNotAComplex { row: r, col: c });
                }
            }
        }
    }
    Ok(ComplexGrid { rows, verticals, width })
}

/// How a grid's cohomology is reported.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Assembly {
    /// Cohomology of each row separately.
    Rows,
    /// Horizontal cohomology at every grid position up to the requested degree.
    Hpq,
    /// Cohomology of the total complex.
    Total,
}

impl std::str::FromStr for Assembly {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "rows" => Ok(Assembly::Rows),
            "hpq" => Ok(Assembly::Hpq),
            "total" => Ok(Assembly::Total),
            other => Err(format!("unknown assembly {other:?}; expected rows, hpq or total")),
        }
    }
}

/// A cohomology table in one of the [`Assembly`] layouts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Assembled<H> {
    Rows(Vec<Vec<H>>),
    Hpq(Vec<Vec<H>>),
    Total(Vec<H>),
}

impl<M: Linear> ComplexGrid<M> {
    pub fn rows(&self) -> &[CochainComplex<M>] {
        &self.rows
    }

    pub fn verticals(&self) -> &Verticals<M> {
        &self.verticals
    }

    pub fn width(&self) -> usize {
        self.width
    }

    fn vertical(&self, r: usize, c: usize) -> M {
        match &self.verticals {
            Verticals::Trivial => M::zero_map(&self.rows[r].object(c), &self.rows[r + 1].object(c)),
            Verticals::Anticommuting(m) => m[r][c].clone(),
            Verticals::Commuting(m) => {
                if c.is_multiple_of(2) {
                    m[r][c].clone()
                } else {
                    m[r][c].neg()
                }
            }
        }
    }

    /// Highest degree of the total complex.
    pub fn total_top_degree(&self) -> usize {
        self.rows.len() - 1 + self.width - 1
    }

    /// `Tot^N = ⊕_{r+c=N} row_r[c]` with `D = d_h + d_v` (after the sign
    /// twist for commuting families). `D ∘ D = 0` is checked.
    pub fn total_complex(&self) -> Result<CochainComplex<M>, ComplexError> {
        let like = self.rows[0].object(0);
        let cells = |n: usize| -> Vec<(usize, usize)> {
            (0..self.rows.len()).filter(|&r| r <= n && n - r < self.width).map(|r| (r, n - r)).collect()
        };
        let top = self.total_top_degree();
        let objects: Vec<M::Object> = (0..=top)
            .map(|n| {
                let parts: Vec<M::Object> = cells(n).iter().map(|&(r, c)| self.rows[r].object(c)).collect();
                M::direct_sum(&parts, &like)
            })
            .collect();
        let mut differentials = Vec::with_capacity(top);
        for n in 0..top {
            let (src, dst) = (cells(n), cells(n + 1));
            let sources: Vec<M::Object> = src.iter().map(|&(r, c)| self.rows[r].object(c)).collect();
            let targets: Vec<M::Object> = dst.iter().map(|&(r, c)| self.rows[r].object(c)).collect();
            let blocks: Vec<Vec<Option<M>>> = dst
                .iter()
                .map(|&(tr, tc)| {
                    src.iter()
                        .map(|&(sr, sc)| {
                            if tr == sr && tc == sc + 1 {
                                Some(self.rows[sr].differential(sc))
                            } else if tr == sr + 1 && tc == sc {
                                Some(self.vertical(sr, sc))
                            } else {
                                None
                            }
                        })
                        .collect()
                })
                .collect();
            differentials.push(M::from_blocks(&sources, &targets, &blocks, &like)?);
        }
        CochainComplex::new(objects, differentials)
    }

    /// `H^0 ..= H^max` of the total complex; degrees past the top are zero.
    pub fn total_cohomology(&self, max: usize) -> Result<Vec<M::Homology>, ComplexError> {
        self.total_complex()?.padded(max + 1).cohomologies(max)
    }

    /// Horizontal cohomology at every position, indexed `[row][col]`.
    pub fn grid_cohomologies(&self) -> Result<Vec<Vec<M::Homology>>, ComplexError> {
        self.rows.iter().map(|r| r.cohomologies(self.width - 1)).collect()
    }

    pub fn assemble(&self, assembly: Assembly, max_degree: usize) -> Result<Assembled<M::Homology>, ComplexError> {
        Ok(match assembly {
            Assembly::Rows => Assembled::Rows(self.rows.iter().map(|r| r.cohomologies(max_degree)).collect::<Result<_, _>>()?),
            Assembly::Hpq => Assembled::Hpq(self.rows.iter().map(|r| r.cohomologies(max_degree.min(self.width - 1))).collect::<Result<_, _>>()?),
            Assembly::Total => Assembled::Total(self.total_cohomology(max_degree)?),
        })
    }
}

/// `⊕_r H^{N-r}(row_r)` for `N = 0..=max`: the total cohomology of a grid
/// with trivial verticals.
pub fn shifted_sum<H: Clone>(rows: &[Vec<H>], max: usize, sum: impl Fn(&[H]) -> H, zero: H) -> Vec<H> {
    (0..=max)
        .map(|n| {
            let parts: Vec<H> = rows.iter().enumerate().filter(|(r, _)| *r <= n).map(|(r, h)| h.get(n - r).cloned().unwrap_or_else(|| zero.clone())).collect();
            sum(&parts)
        })
        .collect()
}
