//! Exact arithmetic in the Weyl algebra `A_m(Q)`.
//!
//! `A_m(Q)` is generated over `Q` by `x1..xm` and `d1..dm`, where `d_k`
//! differentiates with respect to `x_k`: generators with distinct indices
//! commute and `d_k x_k = x_k d_k + 1`. Every element has a unique normal
//! form as a finite sum of monomials `x^a d^b` with all `x` generators to the
//! left, and that is the representation kept here: a sorted term map from
//! [`WeylMonomial`] to nonzero rational coefficients.
//!
//! Products are expanded term by term with the closed form
//!
//! ```text
//! d^b x^g = sum_k  binom(b, k) * g!/(g-k)! * x^(g-k) d^(b-k)      (per index)
//! ```
//!
//! so a single multiplication never leaves normal form.
//!
//! Two degrees matter. The *order* of an operator is its total degree in the
//! `d` generators alone; the filtration `F` of the crate is the one by order,
//! with `F(0) = Q[x1..xm]` the subring of plain polynomials. The *Bernstein
//! degree* is the total degree in all `2m` generators; it is additive on
//! products and is what the Ore search in [`crate::ore`] bounds. The
//! *principal symbol* of a nonzero operator keeps exactly the terms of
//! maximal order and reads them in the commutative ring `Q[x, Y]` of
//! [`crate::symbol`], sending `d_k` to `Y_k`; for an order-zero operator the
//! symbol is the whole polynomial.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::Rational;
use crate::symbol::{SymbolMonomial, SymbolPoly};

/// Degree of an element: a natural number, or `-inf` for the zero element so
/// that degrees stay monotone under sums and additive under products.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FiltrationDegree {
    NegInfinity,
    Finite(u32),
}

impl FiltrationDegree {
    /// The degree as a plain number, or `None` for `-inf`.
    pub fn finite(self) -> Option<u32> {
        match self {
            FiltrationDegree::NegInfinity => None,
            FiltrationDegree::Finite(n) => Some(n),
        }
    }
}

impl fmt::Display for FiltrationDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiltrationDegree::NegInfinity => write!(f, "-inf"),
            FiltrationDegree::Finite(n) => write!(f, "{n}"),
        }
    }
}

/// Graded-lexicographic comparison of exponent rows, shared by the operator
/// and symbol monomial orders.
///
/// Total degree decides first. Ties are broken lexicographically with the
/// `hi` block (the `d` or `Y` exponents) more significant than the `lo`
/// block (the `x` exponents), scanning each block from its last variable
/// down, so that `x1 < x2 < ... < xm < d1 < ... < dm`.
pub(crate) fn grlex_cmp(a_lo: &[u32], a_hi: &[u32], b_lo: &[u32], b_hi: &[u32]) -> Ordering {
    let deg = |lo: &[u32], hi: &[u32]| -> u64 {
        lo.iter().map(|&e| e as u64).sum::<u64>() + hi.iter().map(|&e| e as u64).sum::<u64>()
    };
    deg(a_lo, a_hi).cmp(&deg(b_lo, b_hi)).then_with(|| {
        for i in (0..a_hi.len()).rev() {
            match a_hi[i].cmp(&b_hi[i]) {
                Ordering::Equal => {}
                other => return other,
            }
        }
        for i in (0..a_lo.len()).rev() {
            match a_lo[i].cmp(&b_lo[i]) {
                Ordering::Equal => {}
                other => return other,
            }
        }
        Ordering::Equal
    })
}

/// A normal-form monomial `x^a d^b` over `m` variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylMonomial {
    x: Vec<u32>,
    d: Vec<u32>,
}

impl WeylMonomial {
    /// Builds `x^a d^b` from the two exponent rows, which must have equal
    /// length `m >= 1`.
    pub fn new(x: Vec<u32>, d: Vec<u32>) -> Self {
        assert_eq!(x.len(), d.len(), "exponent rows must have equal length");
        assert!(!x.is_empty(), "need at least one variable");
        WeylMonomial { x, d }
    }

    /// The monomial `1` over `m` variables.
    pub fn unit(m: usize) -> Self {
        WeylMonomial::new(vec![0; m], vec![0; m])
    }

    pub fn num_vars(&self) -> usize {
        self.x.len()
    }

    pub fn x_exps(&self) -> &[u32] {
        &self.x
    }

    pub fn d_exps(&self) -> &[u32] {
        &self.d
    }

    /// Total degree in the `d` generators alone (the order contribution).
    pub fn d_degree(&self) -> u32 {
        self.d.iter().sum()
    }

    /// Total degree in all `2m` generators (the Bernstein contribution).
    pub fn total_degree(&self) -> u32 {
        self.x.iter().sum::<u32>() + self.d_degree()
    }
}

impl Ord for WeylMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        grlex_cmp(&self.x, &self.d, &other.x, &other.d)
    }
}

impl PartialOrd for WeylMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An element of `A_m(Q)` in normal form.
///
/// The term map never stores a zero coefficient, so structural equality is
/// semantic equality. The zero element is the empty map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    m: usize,
    terms: BTreeMap<WeylMonomial, Rational>,
}

impl WeylElement {
    pub fn zero(m: usize) -> Self {
        assert!(m >= 1, "need at least one variable");
        WeylElement { m, terms: BTreeMap::new() }
    }

    pub fn one(m: usize) -> Self {
        WeylElement::constant(m, Rational::one())
    }

    pub fn constant(m: usize, c: Rational) -> Self {
        WeylElement::from_terms(m, [(WeylMonomial::unit(m), c)])
    }

    /// The generator `x_k`, `1 <= k <= m`.
    pub fn x(m: usize, k: usize) -> Self {
        assert!((1..=m).contains(&k), "generator index {k} out of 1..={m}");
        let mut e = vec![0; m];
        e[k - 1] = 1;
        WeylElement::from_terms(m, [(WeylMonomial::new(e, vec![0; m]), Rational::one())])
    }

    /// The generator `d_k`, `1 <= k <= m`.
    pub fn d(m: usize, k: usize) -> Self {
        assert!((1..=m).contains(&k), "generator index {k} out of 1..={m}");
        let mut e = vec![0; m];
        e[k - 1] = 1;
        WeylElement::from_terms(m, [(WeylMonomial::new(vec![0; m], e), Rational::one())])
    }

    /// Collects terms, summing duplicates and dropping zeros.
    pub fn from_terms<I>(m: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (WeylMonomial, Rational)>,
    {
        assert!(m >= 1, "need at least one variable");
        let mut map: BTreeMap<WeylMonomial, Rational> = BTreeMap::new();
        for (mono, c) in terms {
            assert_eq!(mono.num_vars(), m, "monomial over wrong variable count");
            if c.is_zero() {
                continue;
            }
            let entry = map.entry(mono).or_insert_with(Rational::zero);
            *entry += c;
        }
        map.retain(|_, c| !c.is_zero());
        WeylElement { m, terms: map }
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

    /// Terms in ascending graded-lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&WeylMonomial, &Rational)> {
        self.terms.iter()
    }

    /// The graded-lexicographically largest monomial, if any.
    pub fn leading_monomial(&self) -> Option<&WeylMonomial> {
        self.terms.keys().next_back()
    }

    /// `Some(c)` when the element is the constant `c` (including zero).
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

    /// Order with respect to the derivative filtration: the maximal total
    /// `d`-degree over the terms, `-inf` for zero.
    pub fn order_degree(&self) -> FiltrationDegree {
        self.terms
            .keys()
            .map(|mono| mono.d_degree())
            .max()
            .map_or(FiltrationDegree::NegInfinity, FiltrationDegree::Finite)
    }

    /// Bernstein degree: maximal total degree in all generators, `-inf` for
    /// zero. Additive on products because `A_m(Q)` has no zero divisors and
    /// commutation only produces lower-degree tails.
    pub fn bernstein_degree(&self) -> FiltrationDegree {
        self.terms
            .keys()
            .map(|mono| mono.total_degree())
            .max()
            .map_or(FiltrationDegree::NegInfinity, FiltrationDegree::Finite)
    }

    /// True when the element lies in `F(0) = Q[x1..xm]`, i.e. no term uses a
    /// `d` generator.
    pub fn is_order_zero(&self) -> bool {
        self.terms.keys().all(|mono| mono.d_degree() == 0)
    }

    /// The principal symbol.
    ///
    /// For nonzero input of order `r` this keeps precisely the terms of
    /// `d`-degree `r` and maps `x^a d^b` to the commutative monomial
    /// `x^a Y^b`; in particular an order-zero operator keeps all of its
    /// terms. Zero maps to zero.
    pub fn principal_symbol(&self) -> SymbolPoly {
        let r = match self.order_degree() {
            FiltrationDegree::NegInfinity => return SymbolPoly::zero(self.m),
            FiltrationDegree::Finite(r) => r,
        };
        SymbolPoly::from_terms(
            self.m,
            self.terms.iter().filter(|(mono, _)| mono.d_degree() == r).map(|(mono, c)| {
                (SymbolMonomial::new(mono.x.clone(), mono.d.clone()), c.clone())
            }),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return WeylElement::zero(self.m);
        }
        WeylElement {
            m: self.m,
            terms: self.terms.iter().map(|(mono, q)| (mono.clone(), q * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = WeylElement::one(self.m);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
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
        WeylElement { m: self.m, terms }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m, "variable count mismatch");
        let mut acc: BTreeMap<WeylMonomial, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                expand_monomial_product(ma, mb, &(ca * cb), &mut acc);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        WeylElement { m: self.m, terms: acc }
    }
}

/// Adds `coeff * (x^a d^b)(x^g d^e)` to `acc` in normal form, commuting the
/// inner `d^b x^g` with the per-index closed form. The factor for the
/// contraction vector `k` is built incrementally: stepping `k_i` multiplies
/// by `(b_i - k_i + 1)(g_i - k_i + 1) / k_i`, which stays integral because
/// the binomial part absorbs the division.
fn expand_monomial_product(
    a: &WeylMonomial,
    b: &WeylMonomial,
    coeff: &Rational,
    acc: &mut BTreeMap<WeylMonomial, Rational>,
) {
    fn rec(
        i: usize,
        factor: BigInt,
        k: &mut [u32],
        a: &WeylMonomial,
        b: &WeylMonomial,
        coeff: &Rational,
        acc: &mut BTreeMap<WeylMonomial, Rational>,
    ) {
        let m = a.num_vars();
        if i == m {
            let x: Vec<u32> = (0..m).map(|j| a.x[j] + b.x[j] - k[j]).collect();
            let d: Vec<u32> = (0..m).map(|j| a.d[j] + b.d[j] - k[j]).collect();
            let contribution = coeff * Rational::from(factor);
            let entry = acc
                .entry(WeylMonomial::new(x, d))
                .or_insert_with(Rational::zero);
            *entry += contribution;
            return;
        }
        let top = a.d[i].min(b.x[i]);
        let mut f = factor;
        for ki in 0..=top {
            if ki > 0 {
                f *= BigInt::from(a.d[i] - ki + 1);
                f /= BigInt::from(ki);
                f *= BigInt::from(b.x[i] - ki + 1);
            }
            k[i] = ki;
            rec(i + 1, f.clone(), k, a, b, coeff, acc);
        }
        k[i] = 0;
    }

    let mut k = vec![0u32; a.num_vars()];
    rec(0, BigInt::one(), &mut k, a, b, coeff, acc);
}

impl Add for &WeylElement {
    type Output = WeylElement;
    fn add(self, other: &WeylElement) -> WeylElement {
        self.add_impl(other, false)
    }
}

impl Add for WeylElement {
    type Output = WeylElement;
    fn add(self, other: WeylElement) -> WeylElement {
        self.add_impl(&other, false)
    }
}

impl Sub for &WeylElement {
    type Output = WeylElement;
    fn sub(self, other: &WeylElement) -> WeylElement {
        self.add_impl(other, true)
    }
}

impl Sub for WeylElement {
    type Output = WeylElement;
    fn sub(self, other: WeylElement) -> WeylElement {
        self.add_impl(&other, true)
    }
}

impl Mul for &WeylElement {
    type Output = WeylElement;
    fn mul(self, other: &WeylElement) -> WeylElement {
        self.mul_impl(other)
    }
}

impl Mul for WeylElement {
    type Output = WeylElement;
    fn mul(self, other: WeylElement) -> WeylElement {
        self.mul_impl(&other)
    }
}

impl Neg for &WeylElement {
    type Output = WeylElement;
    fn neg(self) -> WeylElement {
        self.scale(&-Rational::one())
    }
}

impl Neg for WeylElement {
    type Output = WeylElement;
    fn neg(self) -> WeylElement {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::printer::format_weyl(self))
    }
}
