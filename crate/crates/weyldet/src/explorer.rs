//! Randomised search for products of elementary matrices over `A_m(Q)` that
//! land in the order-zero subring `F(0) = Q[x1..xm]`, and attempts to
//! re-factor each such product using elementary matrices with order-zero
//! coefficients only.
//!
//! The question probed: when a product of elementary matrices happens to be
//! an (invertible) matrix over `F(0)`, can it always be rewritten as a
//! product of elementary matrices over `F(0)`? A trial whose product lands
//! in `F(0)` is a *hit*; a hit is *resolved* when a witness word over `F(0)`
//! is found (a word that already uses only order-zero coefficients is its
//! own witness), and *unresolved* otherwise. An unresolved hit is never a
//! counterexample claim — the re-factorer beyond one variable is a bounded
//! greedy search and its failure means nothing more than "not found here".
//!
//! Randomness is pinned down completely: trial `i` draws from a ChaCha8
//! stream seeded with `seed_from_u64(config.seed)` and `set_stream(i)`, so
//! reports are reproducible word for word from `(seed, config)` alone.
//! About a quarter of the trials (decided by the first draw of each trial)
//! sample coefficients from `F(0)` only, so the trivially-resolvable case
//! stays represented; the rest draw from all `2m` generators.
//!
//! The re-factorer triangularises over `Q[x]` by left elementary operations:
//! repeated leading-term cancellation inside each column (for one variable
//! this is the full Euclidean algorithm and always terminates; for several
//! it can get stuck and gives up), a three-step elementary exchange when the
//! surviving entry sits below the diagonal, back-substitution once the
//! diagonal is constant, and the classical four-factor trick
//! `diag(u, u^-1) = w(u) w(-1)`, `w(t) = E12(t) E21(-1/t) E12(t)`, to clear
//! a nonunit constant diagonal while the running product of the diagonal
//! stays one.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::matrix::{ElementaryDescriptor, WeylMatrix};
use crate::printer::format_weyl;
use crate::rational::Rational;
use crate::symbol::{commutative_det, SymbolPoly};
use crate::weyl::{WeylElement, WeylMonomial};

/// Parameters of a probe run. `new` fills in the documented defaults;
/// everything is public so tests can pin down other shapes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProbeConfig {
    /// Number of variables of the algebra.
    pub m: usize,
    /// Matrix size; at least 2, since elementary matrices need an
    /// off-diagonal position.
    pub n: usize,
    pub seed: u64,
    pub trials: u64,
    /// Letters per word.
    pub word_length: usize,
    /// Cap on the Bernstein degree of each random coefficient term.
    pub degree_bound: u32,
    /// Integer coefficients are drawn from `-height_bound..=height_bound`.
    pub height_bound: i64,
}

impl ProbeConfig {
    pub fn new(m: usize, seed: u64) -> Self {
        ProbeConfig {
            m,
            n: 2,
            seed,
            trials: 100,
            word_length: 4,
            degree_bound: 1,
            height_bound: 2,
        }
    }
}

/// A hit the re-factorer could not resolve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnresolvedTrial {
    pub trial: u64,
    pub word: Vec<ElementaryDescriptor>,
    pub product: WeylMatrix,
}

/// Tally of a probe run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeReport {
    pub config_seed: u64,
    pub trials: u64,
    /// Trials whose product landed in `F(0)`.
    pub f0_hits: u64,
    /// Hits with a verified witness word over `F(0)`.
    pub resolved: u64,
    pub unresolved: Vec<UnresolvedTrial>,
}

impl ProbeReport {
    pub fn summary(&self) -> String {
        format!(
            "trials: {}, products in F(0): {}, re-factored over F(0): {}, unresolved: {}",
            self.trials,
            self.f0_hits,
            self.resolved,
            self.unresolved.len()
        )
    }

    pub fn to_json(&self) -> String {
        let unresolved: Vec<_> = self
            .unresolved
            .iter()
            .map(|u| {
                json!({
                    "trial": u.trial,
                    "word": word_to_json(&u.word),
                    "product": (1..=u.product.size()).map(|i| {
                        (1..=u.product.size())
                            .map(|j| format_weyl(u.product.entry(i, j)))
                            .collect::<Vec<_>>()
                    }).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::to_string_pretty(&json!({
            "seed": self.config_seed,
            "trials": self.trials,
            "f0_hits": self.f0_hits,
            "resolved": self.resolved,
            "unresolved": unresolved,
        }))
        .expect("report serializes")
    }
}

fn word_to_json(word: &[ElementaryDescriptor]) -> serde_json::Value {
    json!(word
        .iter()
        .map(|desc| {
            json!({
                "row": desc.row,
                "col": desc.col,
                "coeff": format_weyl(&desc.coefficient),
            })
        })
        .collect::<Vec<_>>())
}

fn random_coefficient(rng: &mut ChaCha8Rng, config: &ProbeConfig, f0_only: bool) -> WeylElement {
    let m = config.m;
    let num_terms = rng.random_range(1..=2);
    let mut terms = Vec::with_capacity(num_terms);
    for _ in 0..num_terms {
        let degree = rng.random_range(0..=config.degree_bound);
        let mut xe = vec![0u32; m];
        let mut de = vec![0u32; m];
        for _ in 0..degree {
            let slot = rng.random_range(0..if f0_only { m } else { 2 * m });
            if slot < m {
                xe[slot] += 1;
            } else {
                de[slot - m] += 1;
            }
        }
        let c = rng.random_range(-config.height_bound..=config.height_bound);
        terms.push((WeylMonomial::new(xe, de), Rational::from_integer(c.into())));
    }
    WeylElement::from_terms(m, terms)
}

fn word_at(config: &ProbeConfig, trial: u64) -> (Vec<ElementaryDescriptor>, WeylMatrix) {
    assert!(config.m >= 1 && config.n >= 2, "need m >= 1 and n >= 2");
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(trial);
    let f0_only = rng.random_ratio(1, 4);
    let mut word = Vec::with_capacity(config.word_length);
    let mut product = WeylMatrix::identity(config.m, config.n);
    for _ in 0..config.word_length {
        let row = rng.random_range(1..=config.n);
        let col = loop {
            let c = rng.random_range(1..=config.n);
            if c != row {
                break c;
            }
        };
        let coefficient = random_coefficient(&mut rng, config, f0_only);
        let desc = ElementaryDescriptor::new(config.n, row, col, coefficient);
        product = &product * &desc.to_matrix().expect("sampled positions are valid");
        word.push(desc);
    }
    (word, product)
}

/// The word and product of trial 0 for this configuration.
pub fn random_elementary_word(config: &ProbeConfig) -> (Vec<ElementaryDescriptor>, WeylMatrix) {
    word_at(config, 0)
}

/// Runs the full probe. Fails only on internal-invariant violations (a hit
/// in `F(0)` whose classical determinant is not `1`, or a witness whose
/// product does not replay), which would be engine bugs.
pub fn conjecture_probe(config: &ProbeConfig) -> Result<ProbeReport> {
    let mut report = ProbeReport {
        config_seed: config.seed,
        trials: config.trials,
        f0_hits: 0,
        resolved: 0,
        unresolved: Vec::new(),
    };
    for trial in 0..config.trials {
        let (word, product) = word_at(config, trial);
        if !product.is_in_f0() {
            continue;
        }
        report.f0_hits += 1;
        check_classical_det_is_one(&product)?;
        if word.iter().all(|desc| desc.coefficient.is_order_zero()) {
            // the word itself is the witness
            report.resolved += 1;
            continue;
        }
        match refactor_in_f0(&product) {
            Some(witness) => {
                let mut replay = WeylMatrix::identity(config.m, config.n);
                for desc in &witness {
                    replay = &replay * &desc.to_matrix().expect("witness steps are valid");
                }
                if replay != product {
                    return Err(Error::InternalInconsistency(
                        "re-factored witness does not replay to the product".into(),
                    ));
                }
                report.resolved += 1;
            }
            None => report.unresolved.push(UnresolvedTrial { trial, word, product }),
        }
    }
    Ok(report)
}

/// A product of elementary matrices has determinant one; landing in `F(0)`
/// makes that checkable by the classical commutative determinant.
fn check_classical_det_is_one(product: &WeylMatrix) -> Result<()> {
    let rows: Vec<Vec<SymbolPoly>> = product
        .rows()
        .map(|row| row.iter().map(WeylElement::principal_symbol).collect())
        .collect();
    if commutative_det(&rows) != SymbolPoly::one(product.num_vars()) {
        return Err(Error::InternalInconsistency(
            "product of elementary matrices landed in F(0) with determinant != 1".into(),
        ));
    }
    Ok(())
}

const REFACTOR_OP_BUDGET: usize = 4096;

struct Refactorer {
    m: usize,
    n: usize,
    rows: Vec<Vec<WeylElement>>,
    /// Left-multiplications applied so far, chronologically.
    ops: Vec<ElementaryDescriptor>,
}

impl Refactorer {
    /// `rows[row] += coeff * rows[col]`, recorded. 0-based rows.
    fn apply(&mut self, row: usize, col: usize, coeff: WeylElement) -> Option<()> {
        if self.ops.len() >= REFACTOR_OP_BUDGET {
            return None;
        }
        debug_assert!(coeff.is_order_zero(), "witness steps must stay in F(0)");
        for j in 0..self.n {
            let delta = &coeff * &self.rows[col][j];
            self.rows[row][j] = &self.rows[row][j] + &delta;
        }
        self.ops.push(ElementaryDescriptor::new(self.n, row + 1, col + 1, coeff));
        Some(())
    }

    /// Quotient of repeated leading-term cancellation of `value` by `by`
    /// (both in `Q[x]`), with the part of `value` it cannot touch left as
    /// the remainder. For one variable this is plain polynomial division.
    fn lt_quotient(value: &WeylElement, by: &WeylElement) -> WeylElement {
        let m = value.num_vars();
        let mut quotient = WeylElement::zero(m);
        let mut rest = value.clone();
        'outer: while !rest.is_zero() {
            let (blm, blc) = {
                let (mono, c) = by.terms().next_back().expect("divisor nonzero");
                (mono.clone(), c.clone())
            };
            // scan terms best-first for one divisible by the divisor's LT
            let candidates: Vec<(WeylMonomial, Rational)> = rest
                .terms()
                .rev()
                .map(|(mono, c)| (mono.clone(), c.clone()))
                .collect();
            for (mono, c) in candidates {
                let divisible = mono
                    .x_exps()
                    .iter()
                    .zip(blm.x_exps())
                    .all(|(a, b)| a >= b);
                if !divisible {
                    continue;
                }
                let step_mono = WeylMonomial::new(
                    mono.x_exps()
                        .iter()
                        .zip(blm.x_exps())
                        .map(|(a, b)| a - b)
                        .collect(),
                    vec![0; m],
                );
                let step = WeylElement::from_terms(m, [(step_mono, &c / &blc)]);
                rest = &rest - &(&step * by);
                quotient = &quotient + &step;
                continue 'outer;
            }
            break;
        }
        quotient
    }

    /// Reduces column `col` (0-based) until exactly one row at or below the
    /// diagonal has a nonzero entry, then moves it onto the diagonal with a
    /// three-step elementary exchange if needed.
    fn settle_column(&mut self, col: usize) -> Option<()> {
        loop {
            let nonzero: Vec<usize> =
                (col..self.n).filter(|&r| !self.rows[r][col].is_zero()).collect();
            match nonzero.len() {
                0 => return None, // singular; cannot happen for det-one input
                1 => {
                    let survivor = nonzero[0];
                    if survivor != col {
                        // (a, b) -> (a+b, b) -> (a+b, -a) -> (b, -a)
                        let one = WeylElement::one(self.m);
                        self.apply(col, survivor, one.clone())?;
                        self.apply(survivor, col, -&one)?;
                        self.apply(col, survivor, one)?;
                    }
                    return Some(());
                }
                _ => {
                    // reduce against the smallest leading term in the column
                    let smallest = *nonzero
                        .iter()
                        .min_by_key(|&&r| self.rows[r][col].leading_monomial().cloned())
                        .expect("nonempty");
                    let mut progressed = false;
                    for &r in &nonzero {
                        if r == smallest {
                            continue;
                        }
                        let q = Self::lt_quotient(&self.rows[r][col], &self.rows[smallest][col]);
                        if q.is_zero() {
                            continue;
                        }
                        self.apply(r, smallest, -&q)?;
                        progressed = true;
                    }
                    if !progressed {
                        return None; // stuck: no leading term divides another
                    }
                }
            }
        }
    }

    fn run(mut self) -> Option<Vec<ElementaryDescriptor>> {
        for col in 0..self.n {
            self.settle_column(col)?;
        }
        // the diagonal must be rational constants (their product is the
        // classical determinant, which is 1 for our inputs)
        let diag: Vec<Rational> = (0..self.n)
            .map(|i| self.rows[i][i].constant_value().filter(|c| !c.is_zero()))
            .collect::<Option<_>>()?;
        // clear above the diagonal, right to left
        for col in (1..self.n).rev() {
            for row in 0..col {
                if self.rows[row][col].is_zero() {
                    continue;
                }
                let q = self.rows[row][col].scale(&diag[col].recip());
                self.apply(row, col, -&q)?;
            }
        }
        // diag(c, 1/c) = w(1/c) w(-1) on adjacent rows, walked down the
        // diagonal; the trailing entry ends at the full product, which is 1.
        for i in 0..self.n.saturating_sub(1) {
            let c = self.rows[i][i].constant_value().expect("diagonal is constant");
            if c == Rational::from_integer(1.into()) {
                continue;
            }
            let u = c.recip();
            let w = |t: Rational| {
                [
                    (i, i + 1, WeylElement::constant(self.m, t.clone())),
                    (i + 1, i, WeylElement::constant(self.m, -t.recip())),
                    (i, i + 1, WeylElement::constant(self.m, t)),
                ]
            };
            // applied to the matrix: first w(-1), then w(u)
            for (row, col, coeff) in w(-Rational::from_integer(1.into())).into_iter().chain(w(u)) {
                self.apply(row, col, coeff)?;
            }
        }
        let identity = WeylMatrix::identity(self.m, self.n);
        let settled = WeylMatrix::from_rows(self.m, self.n, self.rows.clone());
        if settled != identity {
            return None; // diagonal product was not 1; defensive only
        }
        // ops L1..Lk satisfy Lk ... L1 P = I, so P = inv(L1) ... inv(Lk)
        Some(self.ops.iter().map(ElementaryDescriptor::inverse).collect())
    }
}

/// Tries to write the invertible `F(0)` matrix as a left-to-right product of
/// elementary matrices with `F(0)` coefficients. Complete for one variable;
/// a bounded greedy search otherwise. `None` means "not found", never
/// "impossible".
fn refactor_in_f0(product: &WeylMatrix) -> Option<Vec<ElementaryDescriptor>> {
    debug_assert!(product.is_in_f0());
    let refactorer = Refactorer {
        m: product.num_vars(),
        n: product.size(),
        rows: product.to_rows(),
        ops: Vec::new(),
    };
    refactorer.run()
}
