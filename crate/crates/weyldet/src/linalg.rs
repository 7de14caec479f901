//! Exact linear algebra over `Q`, sized for the Ore search.
//!
//! The public entry point is [`rational_kernel`]: reduced row echelon form
//! over `Q` and the canonical kernel basis read off from it (one vector per
//! free column, identity pattern at the free columns, vectors ordered by
//! free column).
//!
//! The Ore search produces systems whose columns grow like `binom(t + 2m, 2m)`,
//! so the crate-internal [`kernel`] adds two accelerations that never change
//! the answer:
//!
//! * a *trivial-kernel filter*: ranks can only drop under reduction mod `p`,
//!   so a full-column-rank reduction mod one prime proves the rational
//!   kernel is trivial;
//! * a *multi-modular solve*: row-reduce mod a deterministic sequence of
//!   31-bit primes, combine by CRT, lift entries by rational reconstruction,
//!   and accept only after exact verification of every candidate basis
//!   vector against the original system. On any failure more primes are
//!   added, and if the whole budget runs out the code falls back to the
//!   plain rational elimination, so correctness never rests on luck with
//!   primes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(rows: &mut [Vec<Rational>]) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut next_row = 0;
    for col in 0..ncols {
        let Some(pivot_row) = (next_row..nrows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(next_row, pivot_row);
        let lead = rows[next_row][col].clone();
        for e in &mut rows[next_row][col..] {
            *e /= &lead;
        }
        for r in 0..nrows {
            if r == next_row || rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone();
            for c in col..ncols {
                let delta = &rows[next_row][c] * &factor;
                rows[r][c] -= delta;
            }
        }
        pivots.push(col);
        next_row += 1;
        if next_row == nrows {
            break;
        }
    }
    pivots
}

/// Builds the canonical kernel basis from a reduced row echelon form.
fn basis_from_rref(rows: &[Vec<Rational>], pivots: &[usize], ncols: usize) -> Vec<Vec<Rational>> {
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Rational::zero(); ncols];
            v[fc] = Rational::one();
            for (pr, &pc) in pivots.iter().enumerate() {
                v[pc] = -&rows[pr][fc];
            }
            v
        })
        .collect()
}

/// Kernel of the row-major matrix over `Q`, as the canonical basis derived
/// from the reduced row echelon form. The empty matrix has empty kernel
/// basis. Panics on ragged input.
pub fn rational_kernel(rows: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let Some(first) = rows.first() else {
        return Vec::new();
    };
    let ncols = first.len();
    for row in rows {
        assert_eq!(row.len(), ncols, "ragged matrix");
    }
    let mut work = rows.to_vec();
    let pivots = rref(&mut work);
    basis_from_rref(&work, &pivots, ncols)
}

/// Crate-internal kernel with the modular accelerations. Same answer as
/// [`rational_kernel`] whenever the multi-modular path is taken and
/// verification passes; otherwise it falls back to the rational path.
pub(crate) fn kernel(rows: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let Some(first) = rows.first() else {
        return Vec::new();
    };
    let ncols = first.len();
    if ncols <= 20 {
        return rational_kernel(rows);
    }
    match kernel_multimodular(rows) {
        Some(basis) => basis,
        None => rational_kernel(rows),
    }
}

// ---------------------------------------------------------------- mod p ---

/// Deterministic Miller-Rabin, exact for all `n < 3_215_031_751` with the
/// witness set {2, 3, 5, 7}; our primes are 31-bit so this is conclusive.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7] {
        if n == small {
            return true;
        }
        if n % small == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let pow = |mut base: u64, mut exp: u64, modulus: u64| -> u64 {
        let mut acc = 1u64;
        base %= modulus;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % modulus;
            }
            base = base * base % modulus;
            exp >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7] {
        let mut x = pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = x * x % n;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Descending sequence of 31-bit primes, starting at `2^31 - 1`.
struct PrimeSeq {
    next_candidate: u64,
}

impl PrimeSeq {
    fn new() -> Self {
        PrimeSeq { next_candidate: (1 << 31) - 1 }
    }
}

impl Iterator for PrimeSeq {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        loop {
            let c = self.next_candidate;
            if c < (1 << 30) {
                return None;
            }
            self.next_candidate -= 2;
            if is_prime_u64(c) {
                return Some(c);
            }
        }
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2); p is prime and a != 0 mod p.
    let mut acc = 1u64;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn bigint_mod_u64(v: &BigInt, p: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(p));
    let (_, digits) = r.to_u64_digits();
    digits.first().copied().unwrap_or(0)
}

/// Image of the matrix mod `p`, or `None` when a denominator vanishes.
fn reduce_mod_p(rows: &[Vec<Rational>], p: u64) -> Option<Vec<Vec<u64>>> {
    rows.iter()
        .map(|row| {
            row.iter()
                .map(|q| {
                    let den = bigint_mod_u64(q.denom(), p);
                    if den == 0 {
                        return None;
                    }
                    let num = bigint_mod_u64(q.numer(), p);
                    Some(num * inv_mod(den, p) % p)
                })
                .collect()
        })
        .collect()
}

/// In-place reduced row echelon form over `F_p`; returns the pivot columns.
fn rref_mod_p(rows: &mut [Vec<u64>], p: u64) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut next_row = 0;
    for col in 0..ncols {
        let Some(pivot_row) = (next_row..nrows).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(next_row, pivot_row);
        let inv = inv_mod(rows[next_row][col], p);
        for e in &mut rows[next_row][col..] {
            *e = *e * inv % p;
        }
        for r in 0..nrows {
            if r == next_row || rows[r][col] == 0 {
                continue;
            }
            let factor = rows[r][col];
            for c in col..ncols {
                let delta = rows[next_row][c] * factor % p;
                rows[r][c] = (rows[r][c] + p - delta) % p;
            }
        }
        pivots.push(col);
        next_row += 1;
        if next_row == nrows {
            break;
        }
    }
    pivots
}

/// Rational reconstruction of `residue` mod `modulus` with the symmetric
/// bound `|n|, d <= sqrt(modulus / 2)`.
fn rational_reconstruct(residue: &BigInt, modulus: &BigInt) -> Option<Rational> {
    let bound = (modulus / BigInt::from(2)).sqrt();
    let mut r0 = modulus.clone();
    let mut r1 = residue.mod_floor(modulus);
    let mut t0 = BigInt::zero();
    let mut t1 = BigInt::one();
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    if t1.is_negative() {
        r1 = -r1;
        t1 = -t1;
    }
    Some(Rational::new(r1, t1))
}

fn crt_pair(r_old: &BigInt, m_old: &BigInt, r_p: u64, p: u64) -> BigInt {
    // x = r_old (mod m_old), x = r_p (mod p), with gcd(m_old, p) = 1.
    let p_big = BigInt::from(p);
    let m_inv = bigint_mod_u64(&m_old.mod_floor(&p_big), p);
    let m_inv = inv_mod(m_inv, p);
    let diff = (BigInt::from(r_p) - r_old).mod_floor(&p_big);
    let k = bigint_mod_u64(&diff, p) * m_inv % p;
    r_old + m_old * BigInt::from(k)
}

fn verify_kernel_vector(rows: &[Vec<Rational>], v: &[Rational]) -> bool {
    rows.iter().all(|row| {
        let mut acc = Rational::zero();
        for (a, b) in row.iter().zip(v) {
            if !a.is_zero() && !b.is_zero() {
                acc += a * b;
            }
        }
        acc.is_zero()
    })
}

/// Multi-modular kernel. Returns `None` when the prime budget runs out
/// before a verified reconstruction, in which case the caller should use
/// the rational path.
fn kernel_multimodular(rows: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    const MAX_PRIMES: usize = 64;
    let ncols = rows[0].len();

    let mut primes = PrimeSeq::new();
    // Candidate pivot pattern: maximal rank seen, then lexicographically
    // earliest pivot columns, matching how ranks and echelon forms can only
    // degrade mod an unlucky prime.
    let mut best_pivots: Option<Vec<usize>> = None;
    // Per matching prime: CRT-combined residues of the echelon rows.
    let mut residues: Vec<Vec<BigInt>> = Vec::new();
    let mut modulus = BigInt::one();
    let mut used = 0usize;

    while used < MAX_PRIMES {
        let p = primes.next()?;
        let Some(mut work) = reduce_mod_p(rows, p) else {
            continue; // denominator vanished; skip the prime entirely
        };
        let pivots = rref_mod_p(&mut work, p);
        if pivots.len() == ncols {
            // Full column rank mod p forces full column rank over Q.
            return Some(Vec::new());
        }
        used += 1;
        let better = match &best_pivots {
            None => true,
            Some(best) => {
                pivots.len() > best.len() || (pivots.len() == best.len() && pivots < *best)
            }
        };
        if better {
            best_pivots = Some(pivots.clone());
            residues = work[..pivots.len()]
                .iter()
                .map(|row| row.iter().map(|&e| BigInt::from(e)).collect())
                .collect();
            modulus = BigInt::from(p);
            continue;
        }
        if Some(&pivots) != best_pivots.as_ref() {
            continue; // unlucky prime; its echelon form is off-pattern
        }
        for (acc_row, new_row) in residues.iter_mut().zip(&work) {
            for (acc, &e) in acc_row.iter_mut().zip(new_row) {
                *acc = crt_pair(acc, &modulus, e, p);
            }
        }
        modulus *= BigInt::from(p);

        // Lift and verify. Pivot-column entries are exact 0/1 by shape, so
        // only entries at free columns need reconstruction.
        let pivots = best_pivots.as_ref().expect("pattern fixed above");
        let lifted: Option<Vec<Vec<Rational>>> = residues
            .iter()
            .enumerate()
            .map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .map(|(c, e)| {
                        if pivots.contains(&c) {
                            Some(if pivots[r] == c { Rational::one() } else { Rational::zero() })
                        } else {
                            rational_reconstruct(e, &modulus)
                        }
                    })
                    .collect()
            })
            .collect();
        let Some(lifted) = lifted else {
            continue; // not enough precision yet
        };
        let basis = basis_from_rref(&lifted, pivots, ncols);
        if basis.iter().all(|v| verify_kernel_vector(rows, v)) {
            return Some(basis);
        }
    }
    None
}
