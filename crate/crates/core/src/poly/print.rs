//! Canonical formatting. Plain polynomials print in the fragment accepted by
//! the parser, terms in decreasing monomial order, so `parse(print(p)) == p`.
//! Elements of localised rings render inverse-variable exponents as
//! fractions over the corresponding denominators, with monomial cancellation
//! when the denominator is a single term; those strings are display-only.

use super::arith::{self, Coef, TermMap};
use super::element::Poly;
use super::monomial::Monomial;
use super::ring::PolyRing;
use num_traits::{One, Signed};
use std::fmt;

fn format_coef_abs(c: &Coef) -> String {
    let c = c.abs();
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn format_monomial(m: &Monomial, vars: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(vars[i].clone()),
            _ => parts.push(format!("{}^{}", vars[i], e)),
        }
    }
    parts.join("*")
}

/// Coefficient-and-monomial body, without the sign.
fn term_body(coef: &Coef, mono: &str) -> String {
    let a = coef.abs();
    if mono.is_empty() {
        format_coef_abs(&a)
    } else if a.is_one() {
        mono.to_string()
    } else {
        format!("{}*{}", format_coef_abs(&a), mono)
    }
}

/// True when a denominator string needs parentheses: anything but a single
/// variable power.
fn needs_parens(m: &Monomial) -> bool {
    m.support().count() != 1
}

fn render_term(ring: &PolyRing, m: &Monomial, c: &Coef) -> (bool, String) {
    let negative = c.is_negative();
    let (base, inv) = ring.split_monomial(m);
    if inv.iter().all(|&e| e == 0) {
        let mono = format_monomial(&base.extend(ring.num_vars()), ring.vars());
        return (negative, term_body(c, &mono));
    }
    // denominator: product of the inverted elements to their exponents
    let mut den = arith::constant(ring.num_vars(), Coef::one());
    for (k, &e) in inv.iter().enumerate() {
        if e > 0 {
            den = arith::mul(&den, &arith::pow(ring.inverted_raw(k), e, ring.num_vars()));
        }
    }
    let mut num_mono = base.extend(ring.num_vars());
    let mut coef = c.clone();
    if let Some((dm, dc)) = arith::as_single_term(&den) {
        // single-term denominator: cancel the monomial gcd and fold the
        // denominator's coefficient into the term coefficient
        let g = num_mono.gcd(dm);
        let num_red = g.quotient(&num_mono);
        let den_red = g.quotient(dm);
        coef /= dc;
        num_mono = num_red;
        if den_red.is_one() {
            let mono = format_monomial(&num_mono, ring.vars());
            return (coef.is_negative(), term_body(&coef, &mono));
        }
        let num_str = term_body(&coef, &format_monomial(&num_mono, ring.vars()));
        let den_str = format_monomial(&den_red, ring.vars());
        let den_str = if needs_parens(&den_red) {
            format!("({den_str})")
        } else {
            den_str
        };
        return (coef.is_negative(), format!("{num_str}/{den_str}"));
    }
    // multi-term denominator (localisation at a non-monomial)
    let num_str = term_body(&coef, &format_monomial(&num_mono, ring.vars()));
    let den_poly = DisplayPoly { ring, raw: den };
    (
        coef.is_negative(),
        format!("{num_str}/({den_poly})"),
    )
}

pub(crate) fn format_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let ring = p.ring();
    let mut terms: Vec<(&Monomial, &Coef)> = p.raw().iter().collect();
    terms.sort_by(|(a, _), (b, _)| ring.order().cmp(b, a));
    let mut out = String::new();
    for (idx, (m, c)) in terms.into_iter().enumerate() {
        let (neg, body) = render_term(ring, m, c);
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&body);
    }
    out
}

/// Display-only wrapper used when rendering denominators of nested
/// localisations.
struct DisplayPoly<'a> {
    ring: &'a PolyRing,
    raw: TermMap,
}

impl fmt::Display for DisplayPoly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.raw.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Monomial, &Coef)> = self.raw.iter().collect();
        terms.sort_by(|(a, _), (b, _)| self.ring.order().cmp(b, a));
        for (idx, (m, c)) in terms.into_iter().enumerate() {
            let (neg, body) = render_term(self.ring, m, c);
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "{body}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_poly(self))
    }
}
