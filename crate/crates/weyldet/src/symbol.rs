//! The commutative ring `Q[x1..xm, Y1..Ym]` of principal symbols.
//!
//! Principal symbols of operators in `A_m(Q)` live here: `x_k` keeps its
//! name and the derivative generator `d_k` is read as the commuting variable
//! `Y_k`. The ring is graded by total `Y`-degree, and symbols of nonzero
//! operators are always homogeneous in `Y`; products of such symbols never
//! vanish, which is what makes the determinant quotient in [`crate::det`]
//! well defined.
//!
//! Besides arithmetic this module provides the two pieces of commutative
//! machinery the determinant needs: [`SymbolPoly::exact_div`], a multivariate
//! division that insists on a zero remainder, and [`commutative_det`], a
//! fraction-free (Bareiss) determinant used both for the order-zero
//! compatibility checks and by the explorer.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::weyl::grlex_cmp;

/// A commutative monomial `x^a Y^b` over `m` pairs of variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymbolMonomial {
    x: Vec<u32>,
    y: Vec<u32>,
}

impl SymbolMonomial {
    pub fn new(x: Vec<u32>, y: Vec<u32>) -> Self {
        assert_eq!(x.len(), y.len(), "exponent rows must have equal length");
        assert!(!x.is_empty(), "need at least one variable");
        SymbolMonomial { x, y }
    }

    pub fn unit(m: usize) -> Self {
        SymbolMonomial::new(vec![0; m], vec![0; m])
    }

    pub fn num_vars(&self) -> usize {
        self.x.len()
    }

    pub fn x_exps(&self) -> &[u32] {
        &self.x
    }

    pub fn y_exps(&self) -> &[u32] {
        &self.y
    }

    pub fn y_degree(&self) -> u32 {
        self.y.iter().sum()
    }

    pub fn total_degree(&self) -> u32 {
        self.x.iter().sum::<u32>() + self.y_degree()
    }

    fn mul(&self, other: &Self) -> Self {
        SymbolMonomial {
            x: self.x.iter().zip(&other.x).map(|(a, b)| a + b).collect(),
            y: self.y.iter().zip(&other.y).map(|(a, b)| a + b).collect(),
        }
    }

    fn divides(&self, other: &Self) -> bool {
        self.x.iter().zip(&other.x).all(|(a, b)| a <= b)
            && self.y.iter().zip(&other.y).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller must have checked divisibility.
    fn quotient_into(&self, other: &Self) -> Self {
        SymbolMonomial {
            x: other.x.iter().zip(&self.x).map(|(b, a)| b - a).collect(),
            y: other.y.iter().zip(&self.y).map(|(b, a)| b - a).collect(),
        }
    }
}

impl Ord for SymbolMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        grlex_cmp(&self.x, &self.y, &other.x, &other.y)
    }
}

impl PartialOrd for SymbolMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `Q[x1..xm, Y1..Ym]`, kept as a sorted map of nonzero
/// terms; the zero polynomial is the empty map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolPoly {
    m: usize,
    terms: BTreeMap<SymbolMonomial, Rational>,
}

impl SymbolPoly {
    pub fn zero(m: usize) -> Self {
        assert!(m >= 1, "need at least one variable");
        SymbolPoly { m, terms: BTreeMap::new() }
    }

    pub fn one(m: usize) -> Self {
        SymbolPoly::constant(m, Rational::one())
    }

    pub fn constant(m: usize, c: Rational) -> Self {
        SymbolPoly::from_terms(m, [(SymbolMonomial::unit(m), c)])
    }

    /// The variable `x_k`, `1 <= k <= m`.
    pub fn x(m: usize, k: usize) -> Self {
        assert!((1..=m).contains(&k), "variable index {k} out of 1..={m}");
        let mut e = vec![0; m];
        e[k - 1] = 1;
        SymbolPoly::from_terms(m, [(SymbolMonomial::new(e, vec![0; m]), Rational::one())])
    }

    /// The variable `Y_k`, `1 <= k <= m`.
    pub fn y(m: usize, k: usize) -> Self {
        assert!((1..=m).contains(&k), "variable index {k} out of 1..={m}");
        let mut e = vec![0; m];
        e[k - 1] = 1;
        SymbolPoly::from_terms(m, [(SymbolMonomial::new(vec![0; m], e), Rational::one())])
    }

    pub fn from_terms<I>(m: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (SymbolMonomial, Rational)>,
    {
        assert!(m >= 1, "need at least one variable");
        let mut map: BTreeMap<SymbolMonomial, Rational> = BTreeMap::new();
        for (mono, c) in terms {
            assert_eq!(mono.num_vars(), m, "monomial over wrong variable count");
            if c.is_zero() {
                continue;
            }
            let entry = map.entry(mono).or_insert_with(Rational::zero);
            *entry += c;
        }
        map.retain(|_, c| !c.is_zero());
        SymbolPoly { m, terms: map }
    }

    pub fn num_vars(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&SymbolMonomial, &Rational)> {
        self.terms.iter()
    }

    /// Leading term in graded-lexicographic order, if any.
    pub fn leading_term(&self) -> Option<(&SymbolMonomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (mono, c) = self.terms.iter().next().expect("len checked");
                (mono.total_degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// True when every term has the same total `Y`-degree (true for zero).
    /// Principal symbols of operators are always of this shape.
    pub fn is_homogeneous_in_y(&self) -> bool {
        let mut degrees = self.terms.keys().map(|mono| mono.y_degree());
        match degrees.next() {
            None => true,
            Some(first) => degrees.all(|d| d == first),
        }
    }

    /// Maximal total `Y`-degree, `None` for zero.
    pub fn y_degree(&self) -> Option<u32> {
        self.terms.keys().map(|mono| mono.y_degree()).max()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return SymbolPoly::zero(self.m);
        }
        SymbolPoly {
            m: self.m,
            terms: self.terms.iter().map(|(mono, q)| (mono.clone(), q * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = SymbolPoly::one(self.m);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact quotient `self / divisor`.
    ///
    /// Runs multivariate division with the single divisor and fails with
    /// [`Error::NotDivisible`] as soon as the leading term of the remainder
    /// is not divisible by the leading term of `divisor` — for a single
    /// divisor the remainder is zero exactly when any term order's division
    /// succeeds, so nothing smarter is needed. Division by zero is
    /// [`Error::DivisionByZero`].
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        assert_eq!(self.m, divisor.m, "variable count mismatch");
        let (dlm, dlc) = match divisor.leading_term() {
            None => return Err(Error::DivisionByZero),
            Some((mono, c)) => (mono.clone(), c.clone()),
        };
        let mut remainder = self.clone();
        let mut quotient = SymbolPoly::zero(self.m);
        while let Some((rlm, rlc)) = remainder.leading_term() {
            if !dlm.divides(rlm) {
                return Err(Error::NotDivisible);
            }
            let t = SymbolPoly::from_terms(
                self.m,
                [(dlm.quotient_into(rlm), rlc / &dlc)],
            );
            remainder = &remainder - &(&t * divisor);
            quotient = &quotient + &t;
        }
        Ok(quotient)
    }

    fn add_impl(&self, other: &Self, negate_other: bool) -> Self {
        assert_eq!(self.m, other.m, "variable count mismatch");
        let mut terms = self.terms.clone();
        for (mono, c) in &other.terms {
            let entry = terms.entry(mono.clone()).or_insert_with(Rational::zero);
            if negate_other {
                *entry -= c;
            } else {
                *entry += c;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        SymbolPoly { m: self.m, terms }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m, "variable count mismatch");
        let mut acc: BTreeMap<SymbolMonomial, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let entry = acc.entry(ma.mul(mb)).or_insert_with(Rational::zero);
                *entry += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        SymbolPoly { m: self.m, terms: acc }
    }
}

impl Add for &SymbolPoly {
    type Output = SymbolPoly;
    fn add(self, other: &SymbolPoly) -> SymbolPoly {
        self.add_impl(other, false)
    }
}

impl Add for SymbolPoly {
    type Output = SymbolPoly;
    fn add(self, other: SymbolPoly) -> SymbolPoly {
        self.add_impl(&other, false)
    }
}

impl Sub for &SymbolPoly {
    type Output = SymbolPoly;
    fn sub(self, other: &SymbolPoly) -> SymbolPoly {
        self.add_impl(other, true)
    }
}

impl Sub for SymbolPoly {
    type Output = SymbolPoly;
    fn sub(self, other: SymbolPoly) -> SymbolPoly {
        self.add_impl(&other, true)
    }
}

impl Mul for &SymbolPoly {
    type Output = SymbolPoly;
    fn mul(self, other: &SymbolPoly) -> SymbolPoly {
        self.mul_impl(other)
    }
}

impl Mul for SymbolPoly {
    type Output = SymbolPoly;
    fn mul(self, other: SymbolPoly) -> SymbolPoly {
        self.mul_impl(&other)
    }
}

impl Neg for &SymbolPoly {
    type Output = SymbolPoly;
    fn neg(self) -> SymbolPoly {
        self.scale(&-Rational::one())
    }
}

impl Neg for SymbolPoly {
    type Output = SymbolPoly;
    fn neg(self) -> SymbolPoly {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for SymbolPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::printer::format_symbol(self))
    }
}

/// Determinant of a square matrix of symbols by fraction-free Gaussian
/// elimination (Bareiss). Every division along the way is exact, so the
/// result stays in the polynomial ring; row pivoting only flips the sign.
/// The empty matrix has determinant `1`.
///
/// Panics on ragged input; all rows must have the same length as `rows`.
pub fn commutative_det(rows: &[Vec<SymbolPoly>]) -> SymbolPoly {
    let n = rows.len();
    for row in rows {
        assert_eq!(row.len(), n, "matrix must be square");
    }
    let m = match rows.first().and_then(|r| r.first()) {
        None => return SymbolPoly::one(1),
        Some(e) => e.num_vars(),
    };
    let mut work: Vec<Vec<SymbolPoly>> = rows.to_vec();
    let mut sign_flip = false;
    let mut previous_pivot = SymbolPoly::one(m);
    for k in 0..n {
        let pivot_row = match (k..n).find(|&r| !work[r][k].is_zero()) {
            None => return SymbolPoly::zero(m),
            Some(r) => r,
        };
        if pivot_row != k {
            work.swap(pivot_row, k);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let numerator = &(&work[k][k] * &work[i][j]) - &(&work[i][k] * &work[k][j]);
                work[i][j] = numerator
                    .exact_div(&previous_pivot)
                    .expect("fraction-free elimination divides exactly");
            }
            work[i][k] = SymbolPoly::zero(m);
        }
        previous_pivot = work[k][k].clone();
    }
    let det = work[n - 1][n - 1].clone();
    if sign_flip {
        -&det
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn x(k: usize) -> SymbolPoly {
        SymbolPoly::x(2, k)
    }

    fn y(k: usize) -> SymbolPoly {
        SymbolPoly::y(2, k)
    }

    /// Independent determinant oracle: cofactor expansion along the first
    /// row, no elimination or division anywhere.
    fn cofactor_det(rows: &[Vec<SymbolPoly>]) -> SymbolPoly {
        let n = rows.len();
        if n == 0 {
            return SymbolPoly::one(1);
        }
        let m = rows[0][0].num_vars();
        if n == 1 {
            return rows[0][0].clone();
        }
        let mut det = SymbolPoly::zero(m);
        for j in 0..n {
            if rows[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<SymbolPoly>> = (1..n)
                .map(|i| {
                    (0..n)
                        .filter(|&jj| jj != j)
                        .map(|jj| rows[i][jj].clone())
                        .collect()
                })
                .collect();
            let term = &rows[0][j] * &cofactor_det(&minor);
            det = if j % 2 == 0 { &det + &term } else { &det - &term };
        }
        det
    }

    #[test]
    fn exact_div_recovers_factor() {
        // (x1 + Y1)(x2 - 2Y2) / (x1 + Y1) = x2 - 2Y2
        let a = &x(1) + &y(1);
        let b = &x(2) - &y(2).scale(&rat(2));
        let product = &a * &b;
        assert_eq!(product.exact_div(&a).unwrap(), b);
        assert_eq!(product.exact_div(&b).unwrap(), a);
    }

    #[test]
    fn exact_div_detects_nondivisibility() {
        let a = &x(1) + &y(1);
        let b = &x(1) + &SymbolPoly::one(2);
        assert_eq!(a.exact_div(&b), Err(Error::NotDivisible));
        assert_eq!(a.exact_div(&SymbolPoly::zero(2)), Err(Error::DivisionByZero));
        // 0 / q = 0
        assert!(SymbolPoly::zero(2).exact_div(&a).unwrap().is_zero());
    }

    #[test]
    fn homogeneity_in_y() {
        assert!((&(&x(1) * &y(1)) + &y(2).scale(&rat(3))).is_homogeneous_in_y());
        assert!(!(&y(1) + &SymbolPoly::one(2)).is_homogeneous_in_y());
        assert!(SymbolPoly::zero(2).is_homogeneous_in_y());
        assert!((&x(1).pow(3) + &x(2)).is_homogeneous_in_y());
    }

    #[test]
    fn det_small_cases() {
        let one = SymbolPoly::one(2);
        assert_eq!(commutative_det(&[]), SymbolPoly::one(1));
        assert_eq!(commutative_det(&[vec![x(1)]]), x(1));
        // [[x1, Y1], [Y2, x2]] -> x1*x2 - Y1*Y2
        let rows = vec![vec![x(1), y(1)], vec![y(2), x(2)]];
        assert_eq!(commutative_det(&rows), &(&x(1) * &x(2)) - &(&y(1) * &y(2)));
        // singular: repeated rows
        let rows = vec![vec![x(1), y(1)], vec![x(1), y(1)]];
        assert!(commutative_det(&rows).is_zero());
        // needs a row swap
        let rows = vec![
            vec![SymbolPoly::zero(2), one.clone()],
            vec![one.clone(), SymbolPoly::zero(2)],
        ];
        assert_eq!(commutative_det(&rows), -&one);
    }

    prop_compose! {
        fn arb_poly()(
            terms in prop::collection::vec(
                (prop::collection::vec(0u32..2, 2), prop::collection::vec(0u32..2, 2), -3i64..=3),
                0..3,
            )
        ) -> SymbolPoly {
            SymbolPoly::from_terms(
                2,
                terms.into_iter().map(|(xe, ye, c)| (SymbolMonomial::new(xe, ye), rat(c))),
            )
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn prop_ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn prop_exact_div_inverts_mul(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            let product = &a * &b;
            prop_assert_eq!(product.exact_div(&b).unwrap(), a);
        }

        #[test]
        fn prop_det_matches_cofactor_oracle(
            entries in prop::collection::vec(arb_poly(), 9)
        ) {
            let rows: Vec<Vec<SymbolPoly>> = entries.chunks(3).map(|c| c.to_vec()).collect();
            prop_assert_eq!(commutative_det(&rows), cofactor_det(&rows));
        }

        #[test]
        fn prop_det_alternating_and_multiplicative_in_rows(
            entries in prop::collection::vec(arb_poly(), 4),
            scale in -3i64..=3,
        ) {
            let rows = vec![entries[0..2].to_vec(), entries[2..4].to_vec()];
            let swapped = vec![rows[1].clone(), rows[0].clone()];
            prop_assert_eq!(commutative_det(&swapped), -&commutative_det(&rows));
            let scaled = vec![
                rows[0].iter().map(|e| e.scale(&rat(scale))).collect::<Vec<_>>(),
                rows[1].clone(),
            ];
            prop_assert_eq!(
                commutative_det(&scaled),
                commutative_det(&rows).scale(&rat(scale))
            );
        }
    }
}
