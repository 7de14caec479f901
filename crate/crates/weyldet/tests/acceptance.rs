//! Acceptance suite: one criterion per entry, run in a fixed order, one
//! PASS/FAIL line per criterion on stdout (visible with `--nocapture`).
//!
//! Every random stream is seeded so a failure replays bit-for-bit. Time
//! budgets are pinned as constants next to the criteria that carry them.

use std::panic::catch_unwind;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weyldet::{
    cohn_matrix, commutative_det, conjecture_probe, det_f, det_f_triangular, det_f_with,
    format_symbol, format_weyl, is_invertible, left_ore_pair, parse_weyl_expr,
    random_elementary_word,
    verify_elementary_product, DetResult, ElementaryDescriptor, FiltrationDegree,
    OreSearchConfig, PivotStrategy, ProbeConfig, Rational, ReduceOptions, SymbolPoly,
    WeylElement, WeylMatrix,
};

const COHN_BUDGET: Duration = Duration::from_secs(1);
const HOMOMORPHISM_BUDGET: Duration = Duration::from_secs(300);
const ORE_BUDGET: Duration = Duration::from_secs(300);

/// Counts every determinant computed through [`det_ok`], and separately any
/// failure of the final exact division inside `det_f`. The regularity
/// criterion reads both at the end of the suite.
static DET_CALLS: AtomicUsize = AtomicUsize::new(0);
static DIVISION_FAILURES: AtomicUsize = AtomicUsize::new(0);

/// Runs `det_f` while feeding the regularity tallies.
fn det_ok(a: &WeylMatrix) -> DetResult {
    DET_CALLS.fetch_add(1, Ordering::Relaxed);
    match det_f(a) {
        Ok(result) => result,
        Err(e) => {
            if e.to_string().contains("divide") {
                DIVISION_FAILURES.fetch_add(1, Ordering::Relaxed);
            }
            panic!("det_f failed: {e}");
        }
    }
}

// ------------------------------------------------------------- samplers ---

/// A random operator: up to `terms` monomials of total degree ≤ `max_deg`,
/// integer coefficients in `[-height, height]`. `x_only` restricts to the
/// polynomial subring F(0).
fn random_element(
    rng: &mut ChaCha8Rng,
    m: usize,
    max_deg: u32,
    height: i64,
    terms: u32,
    x_only: bool,
) -> WeylElement {
    let mut e = WeylElement::zero(m);
    for _ in 0..rng.random_range(1..=terms) {
        let c = rng.random_range(-height..=height);
        let mut mono = WeylElement::constant(m, Rational::from_integer(c.into()));
        let mut budget = max_deg;
        while budget > 0 && rng.random_ratio(2, 3) {
            let k = rng.random_range(1..=m);
            if x_only || rng.random_ratio(1, 2) {
                mono = &mono * &WeylElement::x(m, k);
            } else {
                mono = &mono * &WeylElement::d(m, k);
            }
            budget -= 1;
        }
        e = &e + &mono;
    }
    e
}

fn random_nonzero(
    rng: &mut ChaCha8Rng,
    m: usize,
    max_deg: u32,
    height: i64,
    terms: u32,
    x_only: bool,
) -> WeylElement {
    loop {
        let e = random_element(rng, m, max_deg, height, terms, x_only);
        if !e.is_zero() {
            return e;
        }
    }
}

fn random_matrix(
    rng: &mut ChaCha8Rng,
    m: usize,
    n: usize,
    max_deg: u32,
    x_only: bool,
) -> WeylMatrix {
    let rows = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| random_element(rng, m, max_deg, 3, 2, x_only))
                .collect()
        })
        .collect();
    WeylMatrix::from_rows(m, n, rows)
}

fn fd_add(a: FiltrationDegree, b: FiltrationDegree) -> FiltrationDegree {
    match (a, b) {
        (FiltrationDegree::Finite(p), FiltrationDegree::Finite(q)) => {
            FiltrationDegree::Finite(p + q)
        }
        _ => FiltrationDegree::NegInfinity,
    }
}

// ------------------------------------------------------------- criteria ---

/// The Cohn matrix has determinant exactly 1 by two independent routes.
fn cohn_dual_route() {
    let start = Instant::now();
    let p = cohn_matrix();
    let engine = det_ok(&p);
    assert_eq!(engine.value, SymbolPoly::one(2), "reduction route");
    let symbol_rows: Vec<Vec<SymbolPoly>> = p
        .to_rows()
        .iter()
        .map(|row| row.iter().map(|e| e.principal_symbol()).collect())
        .collect();
    let classical = commutative_det(&symbol_rows);
    assert_eq!(classical, SymbolPoly::one(2), "commutative route");
    assert_eq!(engine.value, classical, "routes agree");
    assert!(engine.trace.verify(&p), "trace replays");
    let elapsed = start.elapsed();
    assert!(elapsed < COHN_BUDGET, "took {elapsed:?}, budget {COHN_BUDGET:?}");
}

/// det_F(a·b) = det_F(a)·det_F(b) on 200 random 2×2 pairs over A_1(Q).
fn homomorphism_axiom() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC02);
    for trial in 0..200 {
        let a = random_matrix(&mut rng, 1, 2, 2, false);
        let b = random_matrix(&mut rng, 1, 2, 2, false);
        let da = det_ok(&a).value;
        let db = det_ok(&b).value;
        let dab = det_ok(&(&a * &b)).value;
        assert_eq!(dab, &da * &db, "trial {trial}: a = {a}, b = {b}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed < HOMOMORPHISM_BUDGET, "took {elapsed:?}");
}

/// det_F(diag(x, 1, …, 1)) is the principal symbol of x.
fn prolongation_axiom() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC03);
    for trial in 0..100 {
        let m = if trial % 2 == 0 { 1 } else { 2 };
        let n = 1 + trial % 3;
        let x = random_nonzero(&mut rng, m, 3, 3, 3, false);
        let det = det_ok(&WeylMatrix::diag_first(&x, n)).value;
        assert_eq!(det, x.principal_symbol(), "trial {trial}: x = {x}");
    }
}

/// det_F of every elementary matrix is 1.
fn elementary_property() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC04);
    for trial in 0..100 {
        let n = 2 + trial % 2;
        let row = rng.random_range(1..=n);
        let col = loop {
            let c = rng.random_range(1..=n);
            if c != row {
                break c;
            }
        };
        let coefficient = random_element(&mut rng, 1, 2, 3, 2, false);
        let e = ElementaryDescriptor::new(n, row, col, coefficient)
            .to_matrix()
            .expect("valid descriptor");
        assert_eq!(det_ok(&e).value, SymbolPoly::one(1), "trial {trial}");
    }
}

/// The full engine agrees with the diagonal-product shortcut on triangular
/// matrices.
fn triangular_property() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC05);
    for trial in 0..100 {
        let mut rows = vec![vec![WeylElement::zero(1); 3]; 3];
        for (i, row) in rows.iter_mut().enumerate() {
            for entry in row.iter_mut().skip(i) {
                *entry = random_element(&mut rng, 1, 2, 3, 2, false);
            }
        }
        let t = WeylMatrix::from_rows(1, 3, rows);
        let full = det_ok(&t).value;
        let quick = det_f_triangular(&t).expect("input is triangular");
        assert_eq!(full, quick, "trial {trial}: t = {t}");
    }
}

/// det_F(a ⊕ b) = det_F(a)·det_F(b).
fn direct_sum_property() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC06);
    for trial in 0..50 {
        let na = 1 + trial % 2;
        let nb = 1 + (trial / 2) % 2;
        let a = random_matrix(&mut rng, 1, na, 2, false);
        let b = random_matrix(&mut rng, 1, nb, 2, false);
        let sum = a.direct_sum(&b);
        let da = det_ok(&a).value;
        let db = det_ok(&b).value;
        assert_eq!(det_ok(&sum).value, &da * &db, "trial {trial}");
    }
}

/// On matrices over the polynomial subring F(0) the determinant is the
/// classical one, with no Y variables in the value.
fn commutative_compatibility() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC07);
    for trial in 0..100 {
        let a = random_matrix(&mut rng, 2, 3, 2, true);
        assert!(a.is_in_f0());
        let symbol_rows: Vec<Vec<SymbolPoly>> = a
            .to_rows()
            .iter()
            .map(|row| row.iter().map(|e| e.principal_symbol()).collect())
            .collect();
        let classical = commutative_det(&symbol_rows);
        let det = det_ok(&a).value;
        assert_eq!(det, classical, "trial {trial}: a = {a}");
        assert!(
            det.is_zero() || det.y_degree() == Some(0),
            "trial {trial}: det = {}",
            format_symbol(&det)
        );
    }
}

/// The determinant does not depend on the pivot choices.
fn well_definedness() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC08);
    for trial in 0..50 {
        let a = random_matrix(&mut rng, 1, 3, 1, false);
        let reference = det_ok(&a).value;
        for strategy in [PivotStrategy::FirstNonzero, PivotStrategy::MaxDegree] {
            let options = ReduceOptions { strategy, max_bound: None };
            DET_CALLS.fetch_add(1, Ordering::Relaxed);
            let other = det_f_with(&a, &options).expect("determinant exists").value;
            assert_eq!(other, reference, "trial {trial}, strategy {strategy:?}");
        }
    }
}

/// Common left multiples exist within the default search bound: 100 pairs
/// over A_1(Q) and 30 over A_2(Q).
fn ore_identity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC09);
    for trial in 0..130 {
        let m = if trial < 100 { 1 } else { 2 };
        let a = random_nonzero(&mut rng, m, 2, 3, 3, false);
        let b = random_nonzero(&mut rng, m, 2, 3, 3, false);
        let config = OreSearchConfig::for_pair(&a, &b).expect("nonzero pair");
        let pair = left_ore_pair(&a, &b, &config)
            .unwrap_or_else(|e| panic!("trial {trial}: a = {a}, b = {b}: {e}"));
        assert_eq!(
            &(pair.u() * &a),
            &(pair.v() * &b),
            "trial {trial}: identity u*a = v*b"
        );
        assert_eq!(pair.u() * &a, *pair.common_multiple(), "trial {trial}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed < ORE_BUDGET, "took {elapsed:?}");
}

/// Products of elementaries are invertible with constant determinant; a zero
/// row forces determinant 0 and non-invertibility.
fn invertibility_criterion() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC0A);
    for trial in 0..30u64 {
        let length = (trial % 7) as usize;
        let mut product = WeylMatrix::identity(1, 2);
        for _ in 0..length {
            let row = rng.random_range(1..=2);
            let col = 3 - row;
            let coefficient = random_element(&mut rng, 1, 1, 2, 2, false);
            let e = ElementaryDescriptor::new(2, row, col, coefficient)
                .to_matrix()
                .expect("valid descriptor");
            product = &product * &e;
        }
        let det = det_ok(&product).value;
        assert_eq!(det, SymbolPoly::one(1), "trial {trial}: det in Q*");
        assert!(is_invertible(&product).expect("det exists"), "trial {trial}");
    }
    for trial in 0..10 {
        let mut rows = vec![vec![WeylElement::zero(1); 3]; 3];
        for (i, row) in rows.iter_mut().enumerate() {
            if i == 1 {
                continue;
            }
            for entry in row.iter_mut() {
                *entry = random_element(&mut rng, 1, 2, 3, 2, false);
            }
        }
        let a = WeylMatrix::from_rows(1, 3, rows);
        let det = det_ok(&a).value;
        assert!(det.is_zero(), "trial {trial}: zero row gives det 0");
        assert!(!is_invertible(&a).expect("det exists"), "trial {trial}");
    }
}

/// The final quotient in det_f divided exactly every single time above.
fn regularity_manifestation() {
    let calls = DET_CALLS.load(Ordering::Relaxed);
    let failures = DIVISION_FAILURES.load(Ordering::Relaxed);
    assert!(
        calls >= 1000,
        "expected the suite to have computed at least 1000 determinants, saw {calls}"
    );
    assert_eq!(failures, 0, "exact division failed {failures} times");
}

/// Order and Bernstein degrees add under multiplication.
fn degree_additivity() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC0C);
    for trial in 0..500 {
        let m = 1 + trial % 2;
        let a = random_nonzero(&mut rng, m, 3, 3, 3, false);
        let b = random_nonzero(&mut rng, m, 3, 3, 3, false);
        let ab = &a * &b;
        assert_eq!(
            ab.order_degree(),
            fd_add(a.order_degree(), b.order_degree()),
            "trial {trial}: order degree of ({a})*({b})"
        );
        assert_eq!(
            ab.bernstein_degree(),
            fd_add(a.bernstein_degree(), b.bernstein_degree()),
            "trial {trial}: bernstein degree of ({a})*({b})"
        );
    }
}

/// parse ∘ format is the identity and formatting is stable.
fn parser_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC0D);
    for trial in 0..1000 {
        let m = 1 + trial % 3;
        let a = random_element(&mut rng, m, 4, 9, 4, false);
        let text = format_weyl(&a);
        let back = parse_weyl_expr(&text, m)
            .unwrap_or_else(|e| panic!("trial {trial}: reparse of {text:?}: {e}"));
        assert_eq!(back, a, "trial {trial}: round trip of {text:?}");
        assert_eq!(format_weyl(&back), text, "trial {trial}: formatting is stable");
    }
}

/// The worked 2×2 reduction: determinant Y1² and a replayable trace.
fn worked_reduction() {
    let d = WeylElement::d(1, 1);
    let x = WeylElement::x(1, 1);
    let one = WeylElement::one(1);
    let a = WeylMatrix::from_rows(1, 2, vec![vec![d.clone(), one], vec![x, d]]);
    let det = det_ok(&a);
    assert_eq!(format_symbol(&det.value), "Y1^2");
    // Re-multiply the recorded steps against the input by hand.
    let mut lhs = a.clone();
    for step in det.trace.steps.iter().rev() {
        lhs = &step.to_matrix(1, 2) * &lhs;
    }
    assert_eq!(lhs, det.trace.triangular, "step product times input");
    assert!(det.trace.triangular.is_upper_triangular());
}

/// Fixed-seed sampling: every word verifies, every product has det 1, and
/// words written entirely over F(0) always re-factor.
fn explorer_sanity() {
    for seed in 0..40 {
        let mut config = ProbeConfig::new(1, 0xE15 + seed);
        config.word_length = 3;
        let (word, product) = random_elementary_word(&config);
        assert!(
            verify_elementary_product(&word, &product).expect("consistent sizes"),
            "seed {seed}: word multiplies to its product"
        );
        assert_eq!(
            det_ok(&product).value,
            SymbolPoly::one(1),
            "seed {seed}: det of the product"
        );
    }
    let mut config = ProbeConfig::new(1, 0xE15);
    config.trials = 60;
    config.word_length = 3;
    let report = conjecture_probe(&config).expect("probe runs");
    assert_eq!(report.trials, 60);
    assert_eq!(
        report.f0_hits,
        report.resolved + report.unresolved.len() as u64,
        "tally invariant"
    );
    for unresolved in &report.unresolved {
        assert!(
            unresolved
                .word
                .iter()
                .any(|letter| !letter.coefficient.is_order_zero()),
            "trial {}: a word written over F(0) must re-factor over F(0)",
            unresolved.trial
        );
    }
}

// --------------------------------------------------------------- runner ---

#[test]
fn acceptance() {
    let criteria: &[(&str, fn())] = &[
        ("cohn-dual-route", cohn_dual_route),
        ("homomorphism-axiom", homomorphism_axiom),
        ("prolongation-axiom", prolongation_axiom),
        ("elementary-property", elementary_property),
        ("triangular-property", triangular_property),
        ("direct-sum-property", direct_sum_property),
        ("commutative-compatibility", commutative_compatibility),
        ("well-definedness", well_definedness),
        ("ore-identity", ore_identity),
        ("invertibility-criterion", invertibility_criterion),
        ("regularity-manifestation", regularity_manifestation),
        ("degree-additivity", degree_additivity),
        ("parser-round-trip", parser_round_trip),
        ("worked-reduction", worked_reduction),
        ("explorer-sanity", explorer_sanity),
    ];
    let mut failures = Vec::new();
    for (name, criterion) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(criterion);
        let seconds = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS  {name} ({seconds:.2}s)"),
            Err(payload) => {
                let message = payload
                    .downcast_ref::<String>()
                    .map(String::as_str)
                    .or_else(|| payload.downcast_ref::<&str>().copied())
                    .unwrap_or("non-string panic");
                println!("FAIL  {name} ({seconds:.2}s): {message}");
                failures.push(*name);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
