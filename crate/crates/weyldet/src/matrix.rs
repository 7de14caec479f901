//! Square matrices over `A_m(Q)`.
//!
//! Row and column indices are 1-based in every public signature and in
//! reduction traces, matching the usual matrix notation `t(i, j)`; only the
//! private flat storage is 0-based. Matrices of size zero are allowed — the
//! empty matrix is the identity of its size class and has determinant one.
//!
//! The building blocks of elimination all live here: `E_{ij}(c) = I + c e_{ij}`
//! elementary matrices described by [`ElementaryDescriptor`], transpositions,
//! single-row scalings, diagonal prolongations `diag(x, 1, .., 1)`, and
//! direct sums.

use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};
use crate::weyl::WeylElement;

/// A square matrix over `A_m(Q)`, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylMatrix {
    m: usize,
    n: usize,
    entries: Vec<WeylElement>,
}

impl WeylMatrix {
    /// Builds an `n x n` matrix from rows; panics on ragged input or a
    /// variable-count mismatch.
    pub fn from_rows(m: usize, n: usize, rows: Vec<Vec<WeylElement>>) -> Self {
        assert!(m >= 1, "need at least one variable");
        assert_eq!(rows.len(), n, "want {n} rows");
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n, "want {n} entries per row");
            for e in row {
                assert_eq!(e.num_vars(), m, "entry over wrong variable count");
                entries.push(e);
            }
        }
        WeylMatrix { m, n, entries }
    }

    pub fn zero(m: usize, n: usize) -> Self {
        WeylMatrix::from_rows(m, n, vec![vec![WeylElement::zero(m); n]; n])
    }

    pub fn identity(m: usize, n: usize) -> Self {
        let mut mat = WeylMatrix::zero(m, n);
        for i in 1..=n {
            *mat.entry_mut(i, i) = WeylElement::one(m);
        }
        mat
    }

    /// `diag(x, 1, .., 1)` of size `n >= 1` — the standard prolongation of a
    /// single element to a matrix.
    pub fn diag_first(x: &WeylElement, n: usize) -> Self {
        assert!(n >= 1, "prolongation needs size at least 1");
        let mut mat = WeylMatrix::identity(x.num_vars(), n);
        *mat.entry_mut(1, 1) = x.clone();
        mat
    }

    /// The identity with rows `i` and `j` swapped (`i != j`, both in range).
    pub fn transposition(m: usize, n: usize, i: usize, j: usize) -> Self {
        assert!(i != j && (1..=n).contains(&i) && (1..=n).contains(&j));
        let mut mat = WeylMatrix::identity(m, n);
        let one = WeylElement::one(m);
        let zero = WeylElement::zero(m);
        *mat.entry_mut(i, i) = zero.clone();
        *mat.entry_mut(j, j) = zero;
        *mat.entry_mut(i, j) = one.clone();
        *mat.entry_mut(j, i) = one;
        mat
    }

    /// The identity with the `(i, i)` entry replaced by `factor`.
    pub fn row_scaling(n: usize, i: usize, factor: &WeylElement) -> Self {
        assert!((1..=n).contains(&i), "row {i} out of 1..={n}");
        let mut mat = WeylMatrix::identity(factor.num_vars(), n);
        *mat.entry_mut(i, i) = factor.clone();
        mat
    }

    pub fn num_vars(&self) -> usize {
        self.m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// The `(i, j)` entry, `1 <= i, j <= n`.
    pub fn entry(&self, i: usize, j: usize) -> &WeylElement {
        assert!((1..=self.n).contains(&i) && (1..=self.n).contains(&j));
        &self.entries[(i - 1) * self.n + (j - 1)]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut WeylElement {
        assert!((1..=self.n).contains(&i) && (1..=self.n).contains(&j));
        &mut self.entries[(i - 1) * self.n + (j - 1)]
    }

    /// Rows as owned vectors, for algorithms that rewrite them in place.
    pub fn to_rows(&self) -> Vec<Vec<WeylElement>> {
        self.entries.chunks(self.n.max(1)).map(|c| c.to_vec()).take(self.n).collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[WeylElement]> {
        self.entries.chunks(self.n.max(1)).take(self.n)
    }

    pub fn mat_mul(&self, other: &WeylMatrix) -> WeylMatrix {
        assert_eq!(self.m, other.m, "variable count mismatch");
        assert_eq!(self.n, other.n, "size mismatch");
        let n = self.n;
        let mut out = WeylMatrix::zero(self.m, n);
        for i in 1..=n {
            for k in 1..=n {
                if self.entry(i, k).is_zero() {
                    continue;
                }
                for j in 1..=n {
                    if other.entry(k, j).is_zero() {
                        continue;
                    }
                    let product = self.entry(i, k) * other.entry(k, j);
                    *out.entry_mut(i, j) = &*out.entry(i, j) + &product;
                }
            }
        }
        out
    }

    /// Block-diagonal matrix `[[self, 0], [0, other]]`.
    pub fn direct_sum(&self, other: &WeylMatrix) -> WeylMatrix {
        assert_eq!(self.m, other.m, "variable count mismatch");
        let n = self.n + other.n;
        let mut out = WeylMatrix::zero(self.m, n);
        for i in 1..=self.n {
            for j in 1..=self.n {
                *out.entry_mut(i, j) = self.entry(i, j).clone();
            }
        }
        for i in 1..=other.n {
            for j in 1..=other.n {
                *out.entry_mut(self.n + i, self.n + j) = other.entry(i, j).clone();
            }
        }
        out
    }

    /// True when every entry lies in `F(0) = Q[x1..xm]`.
    pub fn is_in_f0(&self) -> bool {
        self.entries.iter().all(|e| e.is_order_zero())
    }

    pub fn is_upper_triangular(&self) -> bool {
        (1..=self.n).all(|i| (1..i).all(|j| self.entry(i, j).is_zero()))
    }

    pub fn is_lower_triangular(&self) -> bool {
        (1..=self.n).all(|i| (i + 1..=self.n).all(|j| self.entry(i, j).is_zero()))
    }
}

impl Mul for &WeylMatrix {
    type Output = WeylMatrix;
    fn mul(self, other: &WeylMatrix) -> WeylMatrix {
        self.mat_mul(other)
    }
}

impl fmt::Display for WeylMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.n {
            if i > 1 {
                writeln!(f)?;
            }
            write!(f, "[")?;
            for j in 1..=self.n {
                if j > 1 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

/// Description of the elementary matrix `E_{row,col}(coefficient)`: the
/// identity of the given size with `coefficient` added at the off-diagonal
/// position `(row, col)`. Left-multiplying by it adds `coefficient * row_col`
/// to `row_row`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryDescriptor {
    pub size: usize,
    pub row: usize,
    pub col: usize,
    pub coefficient: WeylElement,
}

impl ElementaryDescriptor {
    pub fn new(size: usize, row: usize, col: usize, coefficient: WeylElement) -> Self {
        ElementaryDescriptor { size, row, col, coefficient }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.row != self.col
            && (1..=self.size).contains(&self.row)
            && (1..=self.size).contains(&self.col);
        if ok {
            Ok(())
        } else {
            Err(Error::BadIndices { row: self.row, col: self.col, size: self.size })
        }
    }

    /// The described matrix; zero coefficients are allowed and give the
    /// identity.
    pub fn to_matrix(&self) -> Result<WeylMatrix> {
        self.validate()?;
        let mut mat = WeylMatrix::identity(self.coefficient.num_vars(), self.size);
        *mat.entry_mut(self.row, self.col) = self.coefficient.clone();
        Ok(mat)
    }

    /// The inverse elementary matrix's descriptor: `E_{ij}(c)^-1 = E_{ij}(-c)`.
    pub fn inverse(&self) -> Self {
        ElementaryDescriptor {
            size: self.size,
            row: self.row,
            col: self.col,
            coefficient: -&self.coefficient,
        }
    }
}

/// Cohn's classic `2 x 2` matrix `[[1 - x1*x2, -x2^2], [x1^2, 1 + x1*x2]]`,
/// placed in `M_2(A_2(Q))` with entries in the commutative subring
/// `F(0) = Q[x1, x2]`.  Its determinant is exactly `1`, yet it is not a
/// product of `2 x 2` elementary matrices over the polynomial ring.
pub fn cohn_matrix() -> WeylMatrix {
    let x1 = WeylElement::x(2, 1);
    let x2 = WeylElement::x(2, 2);
    let one = WeylElement::one(2);
    WeylMatrix::from_rows(
        2,
        2,
        vec![
            vec![&one - &(&x1 * &x2), -&x2.pow(2)],
            vec![x1.pow(2), &one + &(&x1 * &x2)],
        ],
    )
}
