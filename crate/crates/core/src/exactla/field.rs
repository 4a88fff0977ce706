//! Exact linear algebra over prime fields and the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::AlgebraError;

/// Scalar field: `F_q` for a prime `q`, or `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    #[serde(rename = "prime")]
    Prime(u64),
    #[serde(rename = "Q")]
    Rationals,
}

pub type Scalar = BigRational;

impl Field {
    pub fn prime(q: u64) -> Result<Field, AlgebraError> {
        if q < 2 || (2..q).take_while(|d| d * d <= q).any(|d| q.is_multiple_of(d)) {
            return Err(AlgebraError::InvalidField(format!("{q} is not prime")));
        }
        Ok(Field::Prime(q))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Prime(q) => *q,
            Field::Rationals => 0,
        }
    }

    /// Reduces an arbitrary rational into the field; `None` if a denominator
    /// vanishes modulo `q`.
    pub fn element(&self, x: &BigRational) -> Option<Scalar> {
        match self {
            Field::Rationals => Some(x.clone()),
            Field::Prime(q) => {
                let q = BigInt::from(*q);
                let num = x.numer().mod_floor(&q);
                let den = x.denom().mod_floor(&q);
                let inv = mod_inverse(&den, &q)?;
                Some(BigRational::from_integer((num * inv).mod_floor(&q)))
            }
        }
    }

    pub fn from_int(&self, v: i64) -> Scalar {
        self.element(&BigRational::from_integer(BigInt::from(v))).expect("integers embed")
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a + b)
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a - b)
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a * b)
    }

    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if a.is_zero() {
            return None;
        }
        match self {
            Field::Rationals => Some(a.recip()),
            Field::Prime(q) => {
                let q = BigInt::from(*q);
                mod_inverse(&a.to_integer(), &q).map(BigRational::from_integer)
            }
        }
    }

    fn reduce(&self, x: Scalar) -> Scalar {
        match self {
            Field::Rationals => x,
            Field::Prime(q) => BigRational::from_integer(x.to_integer().mod_floor(&BigInt::from(*q))),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(q) => write!(f, "F_{q}"),
            Field::Rationals => write!(f, "Q"),
        }
    }
}

fn mod_inverse(a: &BigInt, q: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(q);
    e.gcd.is_one().then(|| e.x.mod_floor(q))
}

/// Dense matrix with entries in an exact field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl FieldMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        FieldMatrix { field, rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_int_rows(field: Field, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, field.from_int(v));
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    /// Stores `v` reduced into the field. Panics if `v` has no image (denominator divisible by `q`).
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = self.field.element(&v).expect("scalar not representable in field");
    }

    /// `self[i][j] += v`
    pub fn add_at(&mut self, i: usize, j: usize, v: &Scalar) {
        let cur = self.get(i, j).clone();
        self.data[i * self.cols + j] = self.field.add(&cur, v);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, rhs: &FieldMatrix) -> Result<FieldMatrix, AlgebraError> {
        if self.field != rhs.field {
            return Err(AlgebraError::FieldMismatch);
        }
        if self.cols != rhs.rows {
            return Err(AlgebraError::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let p = self.field.mul(a, b);
                        out.add_at(i, j, &p);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &FieldMatrix) -> Result<FieldMatrix, AlgebraError> {
        if self.field != rhs.field || self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(AlgebraError::ShapeMismatch("cannot add matrices of different shape".into()));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| self.field.add(a, b)).collect();
        Ok(FieldMatrix { field: self.field, rows: self.rows, cols: self.cols, data })
    }

    pub fn neg(&self) -> FieldMatrix {
        let zero = Scalar::zero();
        let data = self.data.iter().map(|a| self.field.sub(&zero, a)).collect();
        FieldMatrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, src: &FieldMatrix) {
        for i in 0..src.rows {
            for j in 0..src.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = src.get(i, j).clone();
            }
        }
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..rows).find(|&r| !m[r * cols + c].is_zero()) else {
                continue;
            };
            for j in 0..cols {
                m.swap(p * cols + j, rank * cols + j);
            }
            let inv = self.field.inv(&m[rank * cols + c]).expect("pivot is nonzero");
            for r in 0..rows {
                if r == rank || m[r * cols + c].is_zero() {
                    continue;
                }
                let factor = self.field.mul(&m[r * cols + c], &inv);
                for j in c..cols {
                    let t = self.field.mul(&factor, &m[rank * cols + j]);
                    m[r * cols + j] = self.field.sub(&m[r * cols + j], &t);
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }
}

/// `dim ker(d_out) - rank(d_in)` for a composable pair with `d_out ∘ d_in = 0`.
pub fn field_cohomology(d_out: &FieldMatrix, d_in: &FieldMatrix) -> Result<usize, AlgebraError> {
    if d_out.field != d_in.field {
        return Err(AlgebraError::FieldMismatch);
    }
    if d_out.cols != d_in.rows {
        return Err(AlgebraError::ShapeMismatch(format!(
            "d_in lands in dimension {} but d_out starts from {}",
            d_in.rows, d_out.cols
        )));
    }
    if !d_out.mul(d_in)?.is_zero() {
        return Err(AlgebraError::CompositionNotZero);
    }
    Ok(d_out.cols - d_out.rank() - d_in.rank())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_maps_over_f2() {
        let f2 = Field::prime(2).unwrap();
        let d_in = FieldMatrix::zeros(f2, 3, 0);
        let d_out = FieldMatrix::zeros(f2, 0, 3);
        assert_eq!(field_cohomology(&d_out, &d_in).unwrap(), 3);
    }

    #[test]
    fn invertible_over_q_kills_everything() {
        let q = Field::Rationals;
        let d_out = FieldMatrix::from_int_rows(q, &[vec![1, 2], vec![3, 4]]);
        let d_in = FieldMatrix::zeros(q, 2, 0);
        assert_eq!(field_cohomology(&d_out, &d_in).unwrap(), 0);
    }

    #[test]
    fn rank_one_image_over_f5() {
        let f5 = Field::prime(5).unwrap();
        let d_in = FieldMatrix::from_int_rows(f5, &[vec![1, 2], vec![2, 4]]);
        let d_out = FieldMatrix::zeros(f5, 0, 2);
        assert_eq!(field_cohomology(&d_out, &d_in).unwrap(), 1);
    }

    #[test]
    fn characteristic_matters_for_rank() {
        let m = [vec![1, 1], vec![1, -1]];
        assert_eq!(FieldMatrix::from_int_rows(Field::Rationals, &m).rank(), 2);
        assert_eq!(FieldMatrix::from_int_rows(Field::Prime(2), &m).rank(), 1);
    }

    #[test]
    fn errors() {
        let q = Field::Rationals;
        let id = FieldMatrix::identity(q, 2);
        assert!(matches!(field_cohomology(&id, &id), Err(AlgebraError::CompositionNotZero)));
        let bad = FieldMatrix::zeros(q, 3, 1);
        assert!(matches!(field_cohomology(&id, &bad), Err(AlgebraError::ShapeMismatch(_))));
        assert!(Field::prime(9).is_err());
    }
}
