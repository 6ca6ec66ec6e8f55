//! Raw arithmetic on term maps, independent of any ring context.
//!
//! A [`TermMap`] is the bare representation of a polynomial: a map from
//! exponent vectors to nonzero rational coefficients. The public [`Poly`]
//! type wraps a `TermMap` together with its ring; everything here is also
//! reused by the Gröbner engine and the module-level machinery, which work
//! on raw maps.

use super::monomial::{Monomial, MonomialOrder};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

pub type Coef = BigRational;
pub type TermMap = BTreeMap<Monomial, Coef>;

pub fn coef_int(n: i64) -> Coef {
    BigRational::from_integer(BigInt::from(n))
}

pub fn coef_ratio(num: i64, den: i64) -> Coef {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> TermMap {
    BTreeMap::new()
}

pub fn constant(nvars: usize, c: Coef) -> TermMap {
    let mut t = zero();
    if !c.is_zero() {
        t.insert(Monomial::one(nvars), c);
    }
    t
}

pub fn var(index: usize, nvars: usize) -> TermMap {
    let mut t = zero();
    t.insert(Monomial::var(index, nvars), Coef::one());
    t
}

pub fn is_zero(f: &TermMap) -> bool {
    f.is_empty()
}

pub fn add_assign_term(f: &mut TermMap, m: &Monomial, c: &Coef) {
    if c.is_zero() {
        return;
    }
    match f.get_mut(m) {
        Some(existing) => {
            *existing += c;
            if existing.is_zero() {
                f.remove(m);
            }
        }
        None => {
            f.insert(m.clone(), c.clone());
        }
    }
}

pub fn add(f: &TermMap, g: &TermMap) -> TermMap {
    let mut out = f.clone();
    for (m, c) in g {
        add_assign_term(&mut out, m, c);
    }
    out
}

pub fn sub(f: &TermMap, g: &TermMap) -> TermMap {
    let mut out = f.clone();
    for (m, c) in g {
        add_assign_term(&mut out, m, &-c.clone());
    }
    out
}

pub fn neg(f: &TermMap) -> TermMap {
    f.iter().map(|(m, c)| (m.clone(), -c.clone())).collect()
}

pub fn scale(f: &TermMap, c: &Coef) -> TermMap {
    if c.is_zero() {
        return zero();
    }
    f.iter().map(|(m, k)| (m.clone(), k * c)).collect()
}

/// `f * c * m` accumulated into `acc`.
pub fn add_scaled_shift(acc: &mut TermMap, f: &TermMap, c: &Coef, m: &Monomial) {
    for (fm, fc) in f {
        add_assign_term(acc, &fm.mul(m), &(fc * c));
    }
}

pub fn mul(f: &TermMap, g: &TermMap) -> TermMap {
    let mut out = zero();
    for (m, c) in f {
        add_scaled_shift(&mut out, g, c, m);
    }
    out
}

pub fn pow(f: &TermMap, n: u32, nvars: usize) -> TermMap {
    let mut out = constant(nvars, Coef::one());
    for _ in 0..n {
        out = mul(&out, f);
    }
    out
}

/// Plain partial derivative with respect to variable `index` (no chain rule
/// for inverted elements; that lives at the ring level).
pub fn derivative(f: &TermMap, index: usize) -> TermMap {
    let mut out = zero();
    for (m, c) in f {
        let e = m.0[index];
        if e == 0 {
            continue;
        }
        let mut em = m.clone();
        em.0[index] = e - 1;
        add_assign_term(&mut out, &em, &(c * coef_int(e as i64)));
    }
    out
}

pub fn total_degree(f: &TermMap) -> Option<u32> {
    f.keys().map(|m| m.total_degree()).max()
}

pub fn leading<'a>(f: &'a TermMap, order: &MonomialOrder) -> Option<(&'a Monomial, &'a Coef)> {
    f.iter()
        .max_by(|(a, _), (b, _)| order.cmp(a, b))
        .map(|(m, c)| (m, c))
}

pub fn make_monic(f: &TermMap, order: &MonomialOrder) -> TermMap {
    match leading(f, order) {
        None => zero(),
        Some((_, c)) => {
            let inv = Coef::one() / c.clone();
            scale(f, &inv)
        }
    }
}

/// Substitutes `images[i]` for variable `i`; images are term maps over a
/// possibly different variable count `out_nvars`.
pub fn substitute(f: &TermMap, images: &[TermMap], out_nvars: usize) -> TermMap {
    let mut out = zero();
    for (m, c) in f {
        let mut term = constant(out_nvars, c.clone());
        for (i, &e) in m.0.iter().enumerate() {
            if e > 0 {
                term = mul(&term, &pow(&images[i], e, out_nvars));
            }
        }
        out = add(&out, &term);
    }
    out
}

/// Re-indexes variables: entry `perm[i]` is the position of old variable `i`
/// in the new ring, which has `out_nvars` variables.
pub fn permute_vars(f: &TermMap, perm: &[usize], out_nvars: usize) -> TermMap {
    f.iter()
        .map(|(m, c)| {
            let mut e = vec![0u32; out_nvars];
            for (i, &ex) in m.0.iter().enumerate() {
                if ex > 0 {
                    e[perm[i]] = ex;
                }
            }
            (Monomial(e), c.clone())
        })
        .collect()
}

pub fn extend_vars(f: &TermMap, out_nvars: usize) -> TermMap {
    f.iter()
        .map(|(m, c)| (m.extend(out_nvars), c.clone()))
        .collect()
}

/// True when the polynomial is a single term.
pub fn as_single_term(f: &TermMap) -> Option<(&Monomial, &Coef)> {
    if f.len() == 1 {
        f.iter().next().map(|(m, c)| (m, c))
    } else {
        None
    }
}

pub fn as_constant(f: &TermMap) -> Option<Coef> {
    if f.is_empty() {
        return Some(Coef::zero());
    }
    as_single_term(f).and_then(|(m, c)| if m.is_one() { Some(c.clone()) } else { None })
}

/// Normalises the sign so the order-leading coefficient is positive.
pub fn normalize_sign(f: &TermMap, order: &MonomialOrder) -> TermMap {
    match leading(f, order) {
        Some((_, c)) if c.is_negative() => neg(f),
        _ => f.clone(),
    }
}
