//! Canonical ASCII rendering of operators and symbols.
//!
//! Terms are printed best-first (descending graded-lexicographic order),
//! factors inside a term as `x`'s then `d`'s (or `Y`'s) by ascending index,
//! with `*` between factors, `^` for exponents greater than one, and unit
//! coefficients left implicit: `x1*d1 + 1`, `-1/2*d2^2`, `x1^2*Y1`. The zero
//! element prints as `0`. The output parses back to the same element, which
//! [`crate::parser`]'s tests pin down.

use num_traits::{One, Signed};

use crate::rational::Rational;
use crate::symbol::SymbolPoly;
use crate::weyl::WeylElement;

fn push_factors(out: &mut String, name: &str, exps: &[u32]) {
    for (i, &e) in exps.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !out.is_empty() {
            out.push('*');
        }
        out.push_str(name);
        out.push_str(&(i + 1).to_string());
        if e > 1 {
            out.push('^');
            out.push_str(&e.to_string());
        }
    }
}

/// Renders one term given its printed monomial part (empty for a constant
/// term) and coefficient magnitude.
fn term_text(mono: &str, magnitude: &Rational) -> String {
    if mono.is_empty() {
        magnitude.to_string()
    } else if magnitude.is_one() {
        mono.to_string()
    } else {
        format!("{magnitude}*{mono}")
    }
}

fn format_terms<'a, I>(terms: I) -> String
where
    I: Iterator<Item = (String, &'a Rational)>,
{
    let mut out = String::new();
    for (mono, coeff) in terms {
        if out.is_empty() {
            if coeff.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if coeff.is_negative() { " - " } else { " + " });
        }
        out.push_str(&term_text(&mono, &coeff.abs()));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Canonical text for an operator, e.g. `x1^2*d1 - 1/2`.
pub fn format_weyl(a: &WeylElement) -> String {
    format_terms(a.terms().rev().map(|(mono, c)| {
        let mut text = String::new();
        push_factors(&mut text, "x", mono.x_exps());
        push_factors(&mut text, "d", mono.d_exps());
        (text, c)
    }))
}

/// Canonical text for a symbol, e.g. `x1*Y1^2 + 3`.
pub fn format_symbol(p: &SymbolPoly) -> String {
    format_terms(p.terms().rev().map(|(mono, c)| {
        let mut text = String::new();
        push_factors(&mut text, "x", mono.x_exps());
        push_factors(&mut text, "Y", mono.y_exps());
        (text, c)
    }))
}
