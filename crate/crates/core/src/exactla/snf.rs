//! Smith normal form over `Z`.
//!
//! The reduction tracks both unimodular transforms and their inverses, so
//! callers can move between original and diagonal coordinates in either
//! direction without a separate inversion step.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// `u * a * v == s` with `u`, `v` unimodular and `s` diagonal with a
/// divisibility chain on its nonzero diagonal entries.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries `s_1, ..., s_min(m,n)`, all nonnegative.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.s.nrows().min(self.s.ncols());
        (0..k).map(|i| self.s[(i, i)].clone()).collect()
    }

    /// Number of nonzero diagonal entries. They always come first.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|d| !d.is_zero()).count()
    }
}

struct Reducer {
    s: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Reducer {
    fn row_add(&mut self, target: usize, source: usize, c: &BigInt) {
        self.s.add_row_multiple(target, source, c);
        self.u.add_row_multiple(target, source, c);
        self.u_inv.add_col_multiple(source, target, &-c);
    }

    fn col_add(&mut self, target: usize, source: usize, c: &BigInt) {
        self.s.add_col_multiple(target, source, c);
        self.v.add_col_multiple(target, source, c);
        self.v_inv.add_row_multiple(source, target, &-c);
    }

    fn row_swap(&mut self, a: usize, b: usize) {
        self.s.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        self.s.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    fn row_negate(&mut self, i: usize) {
        self.s.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    /// Position of a nonzero entry of least absolute value in the trailing block.
    fn smallest_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.s.nrows() {
            for j in t..self.s.ncols() {
                let a = &self.s[(i, j)];
                if a.is_zero() {
                    continue;
                }
                let abs = a.abs();
                if best.as_ref().is_none_or(|(_, _, b)| abs < *b) {
                    best = Some((i, j, abs));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    /// Brings the trailing block at `t` to the form `diag(d) (+) rest` with
    /// `d` dividing every entry of `rest`. Returns false when the block is zero.
    fn reduce_step(&mut self, t: usize) -> bool {
        let (m, n) = (self.s.nrows(), self.s.ncols());
        loop {
            let Some((pi, pj)) = self.smallest_entry(t) else {
                return false;
            };
            self.row_swap(t, pi);
            self.col_swap(t, pj);

            let mut clean = true;
            for i in t + 1..m {
                if self.s[(i, t)].is_zero() {
                    continue;
                }
                let q = self.s[(i, t)].div_floor(&self.s[(t, t)]);
                self.row_add(i, t, &-q);
                if !self.s[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if self.s[(t, j)].is_zero() {
                    continue;
                }
                let q = self.s[(t, j)].div_floor(&self.s[(t, t)]);
                self.col_add(j, t, &-q);
                if !self.s[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }

            // Divisibility: pull an offending row into the pivot row and retry.
            let pivot = self.s[(t, t)].clone();
            let offending = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| !self.s[(i, j)].is_multiple_of(&pivot))
            });
            match offending {
                Some(i) => self.row_add(t, i, &BigInt::from(1)),
                None => {
                    if self.s[(t, t)].is_negative() {
                        self.row_negate(t);
                    }
                    return true;
                }
            }
        }
    }
}

/// Computes the Smith normal form of `a`. Total on all shapes, including
/// matrices with zero rows or columns.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.nrows(), a.ncols());
    let mut r = Reducer {
        s: a.clone(),
        u: IntMatrix::identity(m),
        u_inv: IntMatrix::identity(m),
        v: IntMatrix::identity(n),
        v_inv: IntMatrix::identity(n),
    };
    for t in 0..m.min(n) {
        if !r.reduce_step(t) {
            break;
        }
    }
    SmithForm { u: r.u, u_inv: r.u_inv, s: r.s, v: r.v, v_inv: r.v_inv }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn check(a: &IntMatrix) -> SmithForm {
        let f = smith_normal_form(a);
        assert_eq!(f.u.mul(a).mul(&f.v), f.s);
        assert_eq!(f.u.mul(&f.u_inv), IntMatrix::identity(a.nrows()));
        assert_eq!(f.v.mul(&f.v_inv), IntMatrix::identity(a.ncols()));
        f
    }

    #[test]
    fn identity_is_fixed() {
        let f = check(&IntMatrix::identity(3));
        assert_eq!(f.s, IntMatrix::identity(3));
    }

    #[test]
    fn two_by_two_example() {
        // gcd of entries is 2 and |det| = 8, so the diagonal is (2, 4).
        let f = check(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(f.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn zero_and_empty_matrices() {
        let f = check(&IntMatrix::zeros(2, 3));
        assert!(f.s.is_zero());
        assert_eq!(f.rank(), 0);
        let e = check(&IntMatrix::zeros(0, 4));
        assert_eq!(e.s.nrows(), 0);
        assert_eq!(e.v, IntMatrix::identity(4));
        check(&IntMatrix::zeros(3, 0));
    }

    #[test]
    fn divisibility_fix_up() {
        // diag(2, 3) is diagonal but not Smith: the form is diag(1, 6).
        let f = check(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(f.diagonal(), vec![BigInt::one(), BigInt::from(6)]);
    }
}
