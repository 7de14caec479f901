//! Left common multiples in `A_m(Q)`.
//!
//! `A_m(Q)` has no zero divisors and satisfies the left Ore condition: for
//! nonzero `a`, `b` there are nonzero `u`, `v` with `u a = v b`. The witness
//! pair is found by exact linear algebra: fix a ceiling `D` on the Bernstein
//! degree of the common multiple, write `u` and `v` with unknown rational
//! coefficients over all monomials of degree at most `D - deg a` and
//! `D - deg b` respectively, and intersect the kernel of the linear map
//! `(u, v) -> u a - v b`, whose matrix rows are indexed by the monomials of
//! degree at most `D`. The ceiling is raised one degree at a time, so the
//! first hit has minimal ceiling.
//!
//! A ceiling always suffices: with `N(t) = binom(t + 2m, 2m)` counting
//! monomials of degree at most `t`, the system has `N(D - deg a) +
//! N(D - deg b)` unknowns and at most `N(D)` equations, and since `N` is a
//! polynomial of degree `2m` with positive leading coefficient,
//! `N(D - deg a) + N(D - deg b) - N(D)` grows like `D^(2m)` and is
//! eventually positive; the first `D` that makes it positive guarantees a
//! nontrivial kernel and is the default search cap. Searches can still
//! succeed far below it — sparse operators usually do — and a caller-supplied
//! [`OreSearchConfig::max_bound`] below the default turns exhaustion into
//! [`Error::BoundExceeded`] rather than a guarantee.
//!
//! Among all kernel vectors at the first successful ceiling the returned
//! pair is canonical: scale so `u` is monic, then take the minimum by
//! Bernstein degree of `u`, then by graded-lexicographic leading monomial of
//! `u`, then by the term lists of `u` and `v`. This keeps every downstream
//! reduction trace reproducible byte for byte.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg;
pub use crate::linalg::rational_kernel;
use crate::rational::Rational;
use crate::weyl::{FiltrationDegree, WeylElement, WeylMonomial};

/// Degree cap for [`left_ore_pair`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OreSearchConfig {
    /// Largest common-multiple degree ceiling the search may try.
    pub max_bound: u32,
}

impl OreSearchConfig {
    /// The documented default: the smallest ceiling at which the unknowns
    /// outnumber the equations, so a common multiple is guaranteed before
    /// the cap is reached.
    pub fn for_pair(a: &WeylElement, b: &WeylElement) -> Result<Self> {
        let (da, db) = operand_degrees(a, b)?;
        let m = a.num_vars();
        let mut d = da.max(db);
        loop {
            if count_monomials(m, d - da) + count_monomials(m, d - db) > count_monomials(m, d) {
                return Ok(OreSearchConfig { max_bound: d });
            }
            d = d.checked_add(1).expect("counting bound exists");
        }
    }
}

/// A verified left Ore pair: `u a = v b` with `u`, `v` nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrePair {
    u: WeylElement,
    v: WeylElement,
    common_multiple: WeylElement,
}

impl OrePair {
    /// Checks the defining identity before admitting the pair.
    pub fn new(u: WeylElement, v: WeylElement, a: &WeylElement, b: &WeylElement) -> Result<Self> {
        if u.is_zero() || v.is_zero() {
            return Err(Error::ZeroInput);
        }
        let left = &u * a;
        let right = &v * b;
        if left != right {
            return Err(Error::InternalInconsistency(
                "left Ore identity u*a = v*b violated".into(),
            ));
        }
        Ok(OrePair { u, v, common_multiple: left })
    }

    pub fn u(&self) -> &WeylElement {
        &self.u
    }

    pub fn v(&self) -> &WeylElement {
        &self.v
    }

    pub fn common_multiple(&self) -> &WeylElement {
        &self.common_multiple
    }
}

fn operand_degrees(a: &WeylElement, b: &WeylElement) -> Result<(u32, u32)> {
    match (a.bernstein_degree(), b.bernstein_degree()) {
        (FiltrationDegree::Finite(da), FiltrationDegree::Finite(db)) => Ok((da, db)),
        _ => Err(Error::ZeroInput),
    }
}

/// `binom(t + 2m, 2m)`: monomials of `A_m` of Bernstein degree at most `t`.
fn count_monomials(m: usize, t: u32) -> u128 {
    let k = 2 * m as u128;
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc * (t as u128 + i) / i;
    }
    acc
}

/// All monomials of Bernstein degree at most `t`, in ascending
/// graded-lexicographic order.
fn monomials_up_to(m: usize, t: u32) -> Vec<WeylMonomial> {
    fn rec(exps: &mut Vec<u32>, remaining: u32, slots: usize, out: &mut Vec<Vec<u32>>) {
        if slots == 0 {
            out.push(exps.clone());
            return;
        }
        for e in 0..=remaining {
            exps.push(e);
            rec(exps, remaining - e, slots - 1, out);
            exps.pop();
        }
    }
    let mut raw = Vec::new();
    rec(&mut Vec::new(), t, 2 * m, &mut raw);
    let mut monos: Vec<WeylMonomial> = raw
        .into_iter()
        .map(|e| WeylMonomial::new(e[..m].to_vec(), e[m..].to_vec()))
        .collect();
    monos.sort();
    monos
}

/// The kernel system at ceiling `d`: columns are the unknown coefficients of
/// `u` (first block) and `v` (second), rows the monomials of `u a - v b`.
fn assemble_system(
    a: &WeylElement,
    b: &WeylElement,
    u_monos: &[WeylMonomial],
    v_monos: &[WeylMonomial],
) -> Vec<Vec<Rational>> {
    let m = a.num_vars();
    let ncols = u_monos.len() + v_monos.len();
    let mut columns: Vec<Vec<(WeylMonomial, Rational)>> = Vec::with_capacity(ncols);
    let mut row_keys: BTreeMap<WeylMonomial, usize> = BTreeMap::new();
    let mut push_column = |product: WeylElement, negate: bool| {
        let mut col = Vec::with_capacity(product.num_terms());
        for (mono, c) in product.terms() {
            row_keys.entry(mono.clone()).or_insert(0);
            col.push((mono.clone(), if negate { -c } else { c.clone() }));
        }
        columns.push(col);
    };
    for mu in u_monos {
        let factor = WeylElement::from_terms(m, [(mu.clone(), Rational::one())]);
        push_column(&factor * a, false);
    }
    for nu in v_monos {
        let factor = WeylElement::from_terms(m, [(nu.clone(), Rational::one())]);
        push_column(&factor * b, true);
    }
    for (index, slot) in row_keys.values_mut().enumerate() {
        *slot = index;
    }
    let mut rows = vec![vec![Rational::zero(); ncols]; row_keys.len()];
    for (j, col) in columns.iter().enumerate() {
        for (mono, c) in col {
            rows[row_keys[mono]][j] = c.clone();
        }
    }
    rows
}

fn element_from_coeffs(m: usize, monos: &[WeylMonomial], coeffs: &[Rational]) -> WeylElement {
    WeylElement::from_terms(
        m,
        monos.iter().zip(coeffs).map(|(mono, c)| (mono.clone(), c.clone())),
    )
}

/// Selection key: Bernstein degree of `u`, then `u`'s leading monomial, then
/// the full term lists. Pairs are compared after making `u` monic.
fn pair_key<'a>(u: &'a WeylElement, v: &'a WeylElement) -> impl Ord + 'a {
    (
        u.bernstein_degree(),
        u.leading_monomial().expect("u is nonzero").clone(),
        u.terms().map(|(mono, c)| (mono.clone(), c.clone())).collect::<Vec<_>>(),
        v.terms().map(|(mono, c)| (mono.clone(), c.clone())).collect::<Vec<_>>(),
    )
}

/// Finds the canonical left Ore pair for nonzero `a`, `b`.
///
/// Raises the common-multiple degree ceiling one step at a time from
/// `max(deg a, deg b)` to `config.max_bound` and returns the canonical
/// kernel vector of the first ceiling whose kernel is nontrivial. Fails with
/// [`Error::ZeroInput`] on zero operands and [`Error::BoundExceeded`] when
/// the cap is exhausted (impossible under the default cap).
pub fn left_ore_pair(a: &WeylElement, b: &WeylElement, config: &OreSearchConfig) -> Result<OrePair> {
    assert_eq!(a.num_vars(), b.num_vars(), "variable count mismatch");
    let m = a.num_vars();
    let (da, db) = operand_degrees(a, b)?;
    for d in da.max(db)..=config.max_bound {
        let u_monos = monomials_up_to(m, d - da);
        let v_monos = monomials_up_to(m, d - db);
        let rows = assemble_system(a, b, &u_monos, &v_monos);
        let basis = linalg::kernel(&rows);
        if basis.is_empty() {
            continue;
        }
        let mut best: Option<(WeylElement, WeylElement)> = None;
        for vector in &basis {
            let u = element_from_coeffs(m, &u_monos, &vector[..u_monos.len()]);
            let v = element_from_coeffs(m, &v_monos, &vector[u_monos.len()..]);
            debug_assert!(!u.is_zero() && !v.is_zero(), "domain: kernel vector splits");
            let lead = u
                .terms()
                .next_back()
                .map(|(_, c)| c.clone())
                .expect("u is nonzero");
            let scale = lead.recip();
            let u = u.scale(&scale);
            let v = v.scale(&scale);
            let replace = match &best {
                None => true,
                Some((bu, bv)) => pair_key(&u, &v) < pair_key(bu, bv),
            };
            if replace {
                best = Some((u, v));
            }
        }
        let (u, v) = best.expect("basis is nonempty");
        return OrePair::new(u, v, a, b);
    }
    Err(Error::BoundExceeded { max_bound: config.max_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::printer::format_weyl;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn pair(a: &WeylElement, b: &WeylElement) -> OrePair {
        let config = OreSearchConfig::for_pair(a, b).unwrap();
        left_ore_pair(a, b, &config).unwrap()
    }

    #[test]
    fn counting_bound_examples() {
        let d1 = WeylElement::d(1, 1);
        let x1 = WeylElement::x(1, 1);
        // degree-1 operands in A_1: unknowns 2*binom(d+1, 2) first exceed
        // equations binom(d+2, 2) at d = 3
        assert_eq!(OreSearchConfig::for_pair(&d1, &x1).unwrap().max_bound, 3);
        let e = WeylElement::d(2, 1).pow(2);
        let f = WeylElement::x(2, 2).pow(2);
        assert_eq!(OreSearchConfig::for_pair(&e, &f).unwrap().max_bound, 11);
    }

    #[test]
    fn worked_pair_for_d_and_x() {
        let d1 = WeylElement::d(1, 1);
        let x1 = WeylElement::x(1, 1);
        let got = pair(&d1, &x1);
        assert_eq!(format_weyl(got.u()), "x1^2");
        assert_eq!(format_weyl(got.v()), "x1*d1 - 1");
        assert_eq!(format_weyl(got.common_multiple()), "x1^2*d1");
        assert_eq!(&(got.u() * &d1), got.common_multiple());
    }

    #[test]
    fn equal_operands_give_trivial_pair() {
        let a = &(&WeylElement::x(1, 1) * &WeylElement::d(1, 1)) + &WeylElement::one(1);
        let got = pair(&a, &a);
        assert_eq!(got.u(), &WeylElement::one(1));
        assert_eq!(got.v(), &WeylElement::one(1));
        assert_eq!(got.common_multiple(), &a);
    }

    #[test]
    fn commuting_generators() {
        let a = WeylElement::x(2, 1);
        let b = WeylElement::x(2, 2);
        let got = pair(&a, &b);
        assert_eq!(got.u(), &b);
        assert_eq!(got.v(), &a);
    }

    #[test]
    fn zero_operands_are_rejected() {
        let z = WeylElement::zero(1);
        let x = WeylElement::x(1, 1);
        let config = OreSearchConfig { max_bound: 5 };
        assert_eq!(left_ore_pair(&z, &x, &config), Err(Error::ZeroInput));
        assert_eq!(left_ore_pair(&x, &z, &config), Err(Error::ZeroInput));
    }

    #[test]
    fn tight_cap_reports_exhaustion() {
        let d1 = WeylElement::d(1, 1);
        let x1 = WeylElement::x(1, 1);
        let got = left_ore_pair(&d1, &x1, &OreSearchConfig { max_bound: 2 });
        assert_eq!(got, Err(Error::BoundExceeded { max_bound: 2 }));
    }

    #[test]
    fn checked_constructor_rejects_wrong_pairs() {
        let d1 = WeylElement::d(1, 1);
        let x1 = WeylElement::x(1, 1);
        assert!(matches!(
            OrePair::new(x1.clone(), x1.clone(), &d1, &x1),
            Err(Error::InternalInconsistency(_))
        ));
        assert_eq!(
            OrePair::new(WeylElement::zero(1), x1.clone(), &d1, &x1),
            Err(Error::ZeroInput)
        );
    }

    #[test]
    fn monomial_enumeration_is_sorted_and_complete() {
        let monos = monomials_up_to(1, 2);
        assert_eq!(monos.len(), count_monomials(1, 2) as usize);
        let printed: Vec<String> = monos
            .iter()
            .map(|mono| {
                format_weyl(&WeylElement::from_terms(1, [(mono.clone(), rat(1))]))
            })
            .collect();
        assert_eq!(printed, ["1", "x1", "d1", "x1^2", "x1*d1", "d1^2"]);
    }

    prop_compose! {
        fn arb_operand(m: usize)(
            terms in prop::collection::vec(
                (prop::collection::vec(0u32..=2, m), prop::collection::vec(0u32..=2, m), -3i64..=3),
                1..=3,
            )
        ) -> WeylElement {
            WeylElement::from_terms(
                m,
                terms.into_iter().filter_map(|(mut xe, mut de, c)| {
                    // clamp to Bernstein degree <= 2
                    let mut total: u32 = xe.iter().chain(de.iter()).sum();
                    for e in xe.iter_mut().chain(de.iter_mut()) {
                        while total > 2 && *e > 0 {
                            *e -= 1;
                            total -= 1;
                        }
                    }
                    (c != 0).then(|| (WeylMonomial::new(xe, de), rat(c)))
                }),
            )
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn prop_pairs_satisfy_the_identity(a in arb_operand(1), b in arb_operand(1)) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let got = pair(&a, &b);
            prop_assert_eq!(&(got.u() * &a), got.common_multiple());
            prop_assert_eq!(&(got.v() * &b), got.common_multiple());
            prop_assert!(!got.u().is_zero() && !got.v().is_zero());
            // u is monic
            let lead = got.u().terms().next_back().unwrap().1.clone();
            prop_assert_eq!(lead, rat(1));
        }
    }
}
