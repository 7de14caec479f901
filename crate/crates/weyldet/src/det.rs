//! Noncommutative Gaussian elimination and the canonical determinant.
//!
//! Row-reducing over `A_m(Q)` cannot divide, so elimination works by cross
//! multiplication: to clear entry `e` under pivot `t`, find a left Ore pair
//! `u t = v e`, scale the lower row by `v` (a diagonal step) and subtract `u`
//! times the pivot row (an elementary step). Together with row transpositions
//! these are the only step shapes, each an invertible or at least
//! symbol-nonzero matrix, and the whole reduction is kept as a replayable
//! [`ReductionTrace`]: steps are stored so that the *first* step in the list
//! is applied *last*, i.e. `steps[0] * steps[1] * ... * steps[last] * input`
//! equals the recorded triangular matrix.
//!
//! The determinant is then a quotient of principal symbols,
//!
//! ```text
//! det_F(A) = prod_i gr(t(i, i))  /  prod_steps det_F(step)
//! ```
//!
//! where an elementary step contributes `1`, a transposition `-1`, and a
//! diagonal scaling by `v` contributes `gr(v)`. The division is exact in
//! `Q[x, Y]` whenever no diagonal entry of the triangular form vanishes (and
//! when one does, the determinant is zero and no division happens); a failed
//! division therefore signals a bug, reported as
//! [`Error::InternalInconsistency`], never an input property. The value is
//! independent of the pivot strategy, which [`PivotStrategy`] exists to
//! exercise.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::{ElementaryDescriptor, WeylMatrix};
use crate::ore::{left_ore_pair, OreSearchConfig};
use crate::printer::format_symbol;
use crate::symbol::SymbolPoly;
use crate::weyl::WeylElement;

/// How the pivot row is chosen among the nonzero candidates of a column.
/// The determinant does not depend on the choice; the alternatives exist to
/// demonstrate exactly that.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PivotStrategy {
    /// Smallest Bernstein degree, ties to the topmost row. Keeps the Ore
    /// searches cheap and is the default.
    #[default]
    MinDegree,
    /// The topmost nonzero row.
    FirstNonzero,
    /// Largest Bernstein degree, ties to the topmost row.
    MaxDegree,
}

/// Options for [`gauss_reduce_with`] and [`det_f_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReduceOptions {
    pub strategy: PivotStrategy,
    /// Cap on every Ore search inside the elimination; `None` uses the
    /// per-pair default, which always suffices.
    pub max_bound: Option<u32>,
}

/// One reduction step, as a matrix acting from the left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReductionStep {
    /// Swap of two rows.
    Permutation { row_a: usize, row_b: usize },
    /// The identity with `factor` at `(position, position)`; `factor` is
    /// nonzero by construction.
    ScalingDiagonal { position: usize, factor: WeylElement },
    /// An elementary matrix `E_{row,col}(c)`.
    Elementary(ElementaryDescriptor),
}

impl ReductionStep {
    /// The step as an explicit matrix of the given size.
    pub fn to_matrix(&self, m: usize, n: usize) -> WeylMatrix {
        match self {
            ReductionStep::Permutation { row_a, row_b } => {
                WeylMatrix::transposition(m, n, *row_a, *row_b)
            }
            ReductionStep::ScalingDiagonal { position, factor } => {
                WeylMatrix::row_scaling(n, *position, factor)
            }
            ReductionStep::Elementary(desc) => {
                desc.to_matrix().expect("trace steps are validated at construction")
            }
        }
    }

    /// `det_F` of the step matrix: `-1`, `gr(factor)`, or `1`.
    pub fn det_contribution(&self, m: usize) -> SymbolPoly {
        match self {
            ReductionStep::Permutation { .. } => -&SymbolPoly::one(m),
            ReductionStep::ScalingDiagonal { factor, .. } => factor.principal_symbol(),
            ReductionStep::Elementary(_) => SymbolPoly::one(m),
        }
    }
}

impl fmt::Display for ReductionStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionStep::Permutation { row_a, row_b } => {
                write!(f, "swap rows {row_a} and {row_b}")
            }
            ReductionStep::ScalingDiagonal { position, factor } => {
                write!(f, "scale row {position} by {factor}")
            }
            ReductionStep::Elementary(desc) => {
                write!(f, "add ({}) times row {} to row {}", desc.coefficient, desc.col, desc.row)
            }
        }
    }
}

/// A certified reduction: `steps[0] * ... * steps[last] * input` is the
/// recorded upper-triangular matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
    pub triangular: WeylMatrix,
}

impl ReductionTrace {
    /// Applies the recorded steps to `input` (rightmost step first).
    pub fn replay(&self, input: &WeylMatrix) -> WeylMatrix {
        let m = input.num_vars();
        let n = input.size();
        let mut acc = input.clone();
        for step in self.steps.iter().rev() {
            acc = &step.to_matrix(m, n) * &acc;
        }
        acc
    }

    /// True when replaying against `input` reproduces the recorded
    /// triangular matrix and that matrix is in fact upper triangular.
    pub fn verify(&self, input: &WeylMatrix) -> bool {
        self.triangular.is_upper_triangular() && self.replay(input) == self.triangular
    }
}

/// A determinant together with its certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetResult {
    /// `det_F` of the input: `numerator / denominator`, exactly.
    pub value: SymbolPoly,
    /// Product of the principal symbols of the triangular diagonal.
    pub numerator: SymbolPoly,
    /// Product of the step contributions.
    pub denominator: SymbolPoly,
    pub trace: ReductionTrace,
}

fn degree_key(e: &WeylElement) -> u32 {
    e.bernstein_degree().finite().expect("pivot candidates are nonzero")
}

fn choose_pivot(
    rows: &[Vec<WeylElement>],
    col: usize,
    strategy: PivotStrategy,
) -> Option<usize> {
    let mut candidates = (col..rows.len()).filter(|&r| !rows[r][col].is_zero());
    match strategy {
        PivotStrategy::FirstNonzero => candidates.next(),
        PivotStrategy::MinDegree => candidates.min_by_key(|&r| degree_key(&rows[r][col])),
        PivotStrategy::MaxDegree => {
            candidates.min_by_key(|&r| std::cmp::Reverse(degree_key(&rows[r][col])))
        }
    }
}

/// Gaussian reduction with the default options.
pub fn gauss_reduce(a: &WeylMatrix) -> Result<ReductionTrace> {
    gauss_reduce_with(a, &ReduceOptions::default())
}

/// Gaussian reduction to upper-triangular form with a certificate trace.
pub fn gauss_reduce_with(a: &WeylMatrix, options: &ReduceOptions) -> Result<ReductionTrace> {
    let m = a.num_vars();
    let n = a.size();
    let mut rows = a.to_rows();
    let mut chronological: Vec<ReductionStep> = Vec::new();
    for col in 0..n {
        let Some(pivot_row) = choose_pivot(&rows, col, options.strategy) else {
            continue; // the diagonal entry stays zero; det_F will be zero
        };
        if pivot_row != col {
            rows.swap(pivot_row, col);
            chronological.push(ReductionStep::Permutation {
                row_a: col + 1,
                row_b: pivot_row + 1,
            });
        }
        for r in col + 1..n {
            if rows[r][col].is_zero() {
                continue;
            }
            let config = match options.max_bound {
                Some(max_bound) => OreSearchConfig { max_bound },
                None => OreSearchConfig::for_pair(&rows[col][col], &rows[r][col])?,
            };
            let pair = left_ore_pair(&rows[col][col], &rows[r][col], &config)?;
            // scale row r by v, then subtract u times the pivot row:
            // v e - u t = 0 lands in the column.
            for j in col..n {
                rows[r][j] = pair.v() * &rows[r][j];
            }
            chronological.push(ReductionStep::ScalingDiagonal {
                position: r + 1,
                factor: pair.v().clone(),
            });
            for j in col..n {
                rows[r][j] = &rows[r][j] - &(pair.u() * &rows[col][j]);
            }
            chronological.push(ReductionStep::Elementary(ElementaryDescriptor::new(
                n,
                r + 1,
                col + 1,
                -pair.u(),
            )));
            debug_assert!(rows[r][col].is_zero(), "elimination clears the entry");
        }
    }
    chronological.reverse();
    Ok(ReductionTrace {
        steps: chronological,
        triangular: WeylMatrix::from_rows(m, n, rows),
    })
}

/// The canonical determinant with the default options.
pub fn det_f(a: &WeylMatrix) -> Result<DetResult> {
    det_f_with(a, &ReduceOptions::default())
}

/// The canonical determinant, computed through [`gauss_reduce_with`].
pub fn det_f_with(a: &WeylMatrix, options: &ReduceOptions) -> Result<DetResult> {
    let m = a.num_vars();
    let trace = gauss_reduce_with(a, options)?;
    let mut numerator = SymbolPoly::one(m);
    for i in 1..=a.size() {
        numerator = &numerator * &trace.triangular.entry(i, i).principal_symbol();
    }
    let mut denominator = SymbolPoly::one(m);
    for step in &trace.steps {
        denominator = &denominator * &step.det_contribution(m);
    }
    debug_assert!(!denominator.is_zero(), "step contributions are nonzero symbols");
    let value = if numerator.is_zero() {
        SymbolPoly::zero(m)
    } else {
        numerator.exact_div(&denominator).map_err(|e| match e {
            Error::NotDivisible => Error::InternalInconsistency(
                "determinant quotient did not divide exactly".into(),
            ),
            other => other,
        })?
    };
    Ok(DetResult { value, numerator, denominator, trace })
}

/// Determinant of an already-triangular matrix: the product of the diagonal
/// principal symbols, with no reduction. Fails with [`Error::NotTriangular`]
/// unless the matrix is upper or lower triangular.
pub fn det_f_triangular(t: &WeylMatrix) -> Result<SymbolPoly> {
    if !t.is_upper_triangular() && !t.is_lower_triangular() {
        return Err(Error::NotTriangular);
    }
    let mut det = SymbolPoly::one(t.num_vars());
    for i in 1..=t.size() {
        det = &det * &t.entry(i, i).principal_symbol();
    }
    Ok(det)
}

/// A matrix is invertible over `A_m(Q)` exactly when its determinant is a
/// nonzero rational constant.
pub fn is_invertible(a: &WeylMatrix) -> Result<bool> {
    let det = det_f(a)?;
    Ok(matches!(det.value.constant_value(), Some(c) if !c.is_zero()))
}

/// Checks whether the left-to-right product of the word equals `target`.
///
/// Every descriptor must have the target's size and variable count and a
/// valid off-diagonal position. When the product does match, the target's
/// determinant is cross-checked to be exactly `1`, as it must be for any
/// product of elementary matrices; a mismatch there is an engine bug.
pub fn verify_elementary_product(
    word: &[ElementaryDescriptor],
    target: &WeylMatrix,
) -> Result<bool> {
    let n = target.size();
    let m = target.num_vars();
    let mut product = WeylMatrix::identity(m, n);
    for desc in word {
        if desc.size != n {
            return Err(Error::SizeMismatch { left: desc.size, right: n });
        }
        if desc.coefficient.num_vars() != m {
            return Err(Error::IndexMismatch { left: desc.coefficient.num_vars(), right: m });
        }
        product = &product * &desc.to_matrix()?;
    }
    let matches = product == *target;
    if matches {
        let det = det_f(target)?;
        if det.value != SymbolPoly::one(m) {
            return Err(Error::InternalInconsistency(
                "a product of elementary matrices must have determinant one".into(),
            ));
        }
    }
    Ok(matches)
}

/// Outcome of [`check_det_one`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetOneReport {
    pub det: SymbolPoly,
    pub is_one: bool,
    /// What the determinant does and does not certify for this size.
    pub verdict: String,
}

/// Computes `det_F` and reports what it says about elementary-matrix
/// membership: determinant one is necessary at every size, sufficient for
/// size at least 3, and famously inconclusive at size 2.
pub fn check_det_one(a: &WeylMatrix) -> Result<DetOneReport> {
    let det = det_f(a)?.value;
    let one = SymbolPoly::one(a.num_vars());
    let is_one = det == one;
    let verdict = if !is_one {
        format!(
            "det_F = {} != 1; not a product of elementary matrices",
            format_symbol(&det)
        )
    } else {
        match a.size() {
            0 | 1 => "the identity matrix; trivially a product of elementary matrices".into(),
            2 => "stably elementary; membership in E_2 is undecided in general \
                  (cf. the Cohn matrix)"
                .into(),
            n => format!(
                "a member of E_{n}: determinant one certifies elementary-matrix \
                 membership at size >= 3 (non-constructively)"
            ),
        }
    };
    Ok(DetOneReport { det, is_one, verdict })
}
