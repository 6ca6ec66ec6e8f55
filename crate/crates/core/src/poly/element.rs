//! The public polynomial type: a term map in canonical form, tied to its
//! ring. On localised rings "canonical" means reduced modulo the
//! localisation relations, so `==` decides equality of ring elements.

use super::arith::{self, Coef, TermMap};
use super::monomial::Monomial;
use super::ring::{check_same_ring, PolyRing};
use crate::{Error, Result};
use num_traits::{One, Zero};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct Poly {
    ring: Arc<PolyRing>,
    terms: TermMap,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        super::ring::same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl Poly {
    pub(crate) fn from_raw(ring: &Arc<PolyRing>, raw: TermMap) -> Poly {
        Poly {
            ring: ring.clone(),
            terms: ring.canonicalize(raw),
        }
    }

    /// Wraps presentation data (e.g. Gröbner basis elements) without
    /// reducing modulo the localisation relations.
    pub(crate) fn from_raw_unreduced(ring: &Arc<PolyRing>, raw: TermMap) -> Poly {
        Poly {
            ring: ring.clone(),
            terms: raw,
        }
    }

    pub fn zero(ring: &Arc<PolyRing>) -> Poly {
        Poly {
            ring: ring.clone(),
            terms: arith::zero(),
        }
    }

    pub fn one(ring: &Arc<PolyRing>) -> Poly {
        Poly::constant(ring, Coef::one())
    }

    pub fn constant(ring: &Arc<PolyRing>, c: Coef) -> Poly {
        Poly {
            ring: ring.clone(),
            terms: arith::constant(ring.num_vars(), c),
        }
    }

    pub fn int(ring: &Arc<PolyRing>, n: i64) -> Poly {
        Poly::constant(ring, arith::coef_int(n))
    }

    pub fn var(ring: &Arc<PolyRing>, name: &str) -> Result<Poly> {
        let i = ring
            .var_index(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(Poly {
            ring: ring.clone(),
            terms: arith::var(i, ring.num_vars()),
        })
    }

    /// The k-th adjoined inverse as a ring element.
    pub fn inverse_var(ring: &Arc<PolyRing>, k: usize) -> Poly {
        Poly {
            ring: ring.clone(),
            terms: arith::var(ring.base_vars() + k, ring.num_vars()),
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub(crate) fn raw(&self) -> &TermMap {
        &self.terms
    }

    pub(crate) fn into_raw(self) -> TermMap {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        arith::as_constant(&self.terms).is_some_and(|c| c.is_one())
    }

    pub fn as_constant(&self) -> Option<Coef> {
        arith::as_constant(&self.terms)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Iterates over the canonical terms in storage order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coef)> {
        self.terms.iter()
    }

    /// Total degree over all variables, including inverse variables.
    pub fn total_degree(&self) -> Option<u32> {
        arith::total_degree(&self.terms)
    }

    /// Total degree in the base variables only.
    pub fn base_degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|m| m.degree_in(0..self.ring.base_vars()))
            .max()
    }

    pub fn leading_monomial(&self) -> Option<Monomial> {
        arith::leading(&self.terms, self.ring.order()).map(|(m, _)| m.clone())
    }

    pub fn pow(&self, n: u32) -> Poly {
        Poly::from_raw(
            &self.ring,
            arith::pow(&self.terms, n, self.ring.num_vars()),
        )
    }

    pub fn scale(&self, c: &Coef) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: arith::scale(&self.terms, c),
        }
    }

    /// Sign-normalised form: leading coefficient positive.
    pub fn normalize_sign(&self) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: arith::normalize_sign(&self.terms, self.ring.order()),
        }
    }

    /// Monic form: leading coefficient one.
    pub fn monic(&self) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: arith::make_monic(&self.terms, self.ring.order()),
        }
    }

    /// Maps this polynomial into an extension ring (same base variables,
    /// more inverse variables).
    pub fn embed(&self, target: &Arc<PolyRing>) -> Result<Poly> {
        if !target.extends(&self.ring) {
            return Err(Error::RingMismatch(format!(
                "Q[{}] does not extend Q[{}]",
                target.vars().join(", "),
                self.ring.vars().join(", ")
            )));
        }
        Ok(Poly::from_raw(
            target,
            arith::extend_vars(&self.terms, target.num_vars()),
        ))
    }

    /// Substitutes `images[i]` (elements of `target`) for variable `i`.
    pub fn substitute(&self, target: &Arc<PolyRing>, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.ring.num_vars() {
            return Err(Error::Invalid(format!(
                "expected {} images, got {}",
                self.ring.num_vars(),
                images.len()
            )));
        }
        for img in images {
            check_same_ring(img.ring(), target, "substitution image")?;
        }
        let raws: Vec<TermMap> = images.iter().map(|p| p.terms.clone()).collect();
        Ok(Poly::from_raw(
            target,
            arith::substitute(&self.terms, &raws, target.num_vars()),
        ))
    }

    /// Evaluates at a rational point given for the base variables; inverse
    /// variables take the inverse of their denominator's value. `None` when
    /// some denominator vanishes at the point.
    pub fn eval(&self, point: &[Coef]) -> Option<Coef> {
        assert_eq!(point.len(), self.ring.base_vars());
        let mut inv_vals: Vec<Coef> = Vec::new();
        for k in 0..self.ring.num_inverted() {
            let fk = Poly::from_raw_unreduced(&self.ring, self.ring.inverted_raw(k).clone());
            let v = fk.eval_with_inverses(point, &inv_vals)?;
            if v.is_zero() {
                return None;
            }
            inv_vals.push(Coef::one() / v);
        }
        self.eval_with_inverses(point, &inv_vals)
    }

    /// Floating-point evaluation at a point given for the base variables.
    /// `None` when an inverse variable's denominator vanishes there.
    pub fn eval_f64(&self, point: &[f64]) -> Option<f64> {
        use num_traits::ToPrimitive;
        assert_eq!(point.len(), self.ring.base_vars());
        let mut inv_vals: Vec<f64> = Vec::new();
        for k in 0..self.ring.num_inverted() {
            let fk = Poly::from_raw_unreduced(&self.ring, self.ring.inverted_raw(k).clone());
            let v = fk.eval_f64_with(point, &inv_vals)?;
            if v == 0.0 {
                return None;
            }
            inv_vals.push(1.0 / v);
        }
        self.eval_f64_with(point, &inv_vals)
    }

    fn eval_f64_with(&self, point: &[f64], inv_vals: &[f64]) -> Option<f64> {
        use num_traits::ToPrimitive;
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut term = c.to_f64()?;
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let base = if i < point.len() {
                    point[i]
                } else {
                    *inv_vals.get(i - point.len())?
                };
                term *= base.powi(e as i32);
            }
            acc += term;
        }
        Some(acc)
    }

    fn eval_with_inverses(&self, point: &[Coef], inv_vals: &[Coef]) -> Option<Coef> {
        let mut acc = Coef::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let base = if i < point.len() {
                    point[i].clone()
                } else {
                    inv_vals.get(i - point.len())?.clone()
                };
                for _ in 0..e {
                    term *= base.clone();
                }
            }
            acc += term;
        }
        Some(acc)
    }

    pub(crate) fn assert_same_ring(&self, other: &Poly) {
        assert!(
            super::ring::same_ring(&self.ring, &other.ring),
            "polynomial ring mismatch"
        );
    }

    /// Multiplicative inverse in the ring, when this element is a unit.
    /// Computed by eliminating a fresh variable `u` from `u*self - 1`
    /// together with the localisation relations.
    pub fn invert(&self) -> Option<Poly> {
        if self.is_zero() {
            return None;
        }
        if let Some(c) = self.as_constant() {
            return Some(Poly::constant(&self.ring, Coef::one() / c));
        }
        let n = self.ring.num_vars();
        let order = super::monomial::MonomialOrder::Block { split: 1 };
        // variable layout: [u, ring vars...]
        let shift: Vec<usize> = (1..=n).collect();
        let mut gens: Vec<TermMap> = Vec::new();
        let u = arith::var(0, n + 1);
        let mut rel = arith::mul(&u, &arith::permute_vars(self.raw(), &shift, n + 1));
        arith::add_assign_term(&mut rel, &super::monomial::Monomial::one(n + 1), &-Coef::one());
        gens.push(rel);
        for r in self.ring.relation_gens() {
            gens.push(arith::permute_vars(&r, &shift, n + 1));
        }
        let gb = super::groebner::buchberger(&gens, &order);
        for g in &gb {
            let Some((lm, _)) = arith::leading(g, &order) else {
                continue;
            };
            if lm.0[0] == 1 && lm.total_degree() == 1 {
                // g = u - inverse
                let mut inv_raw = arith::zero();
                for (m, c) in g {
                    if m.0[0] == 0 {
                        inv_raw.insert(
                            super::monomial::Monomial(m.0[1..].to_vec()),
                            -c.clone(),
                        );
                    }
                }
                return Some(Poly::from_raw(&self.ring, inv_raw));
            }
        }
        None
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.assert_same_ring(rhs);
        Poly {
            ring: self.ring.clone(),
            terms: arith::add(&self.terms, &rhs.terms),
        }
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.assert_same_ring(rhs);
        Poly {
            ring: self.ring.clone(),
            terms: arith::sub(&self.terms, &rhs.terms),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.assert_same_ring(rhs);
        Poly::from_raw(&self.ring, arith::mul(&self.terms, &rhs.terms))
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: arith::neg(&self.terms),
        }
    }
}

impl PolyRing {
    /// Parses an expression in the grammar shared with the CLI into an
    /// element of this ring.
    pub fn parse(self: &Arc<Self>, input: &str) -> Result<Poly> {
        let raw = super::parse::parse_raw(input, self)?;
        Ok(Poly::from_raw(self, raw))
    }

    /// Adjoins a formal inverse of `f`, returning the extended ring.
    /// Inverting a nonzero constant returns the ring unchanged.
    pub fn localize(self: &Arc<Self>, f: &Poly) -> Result<Arc<PolyRing>> {
        check_same_ring(self, f.ring(), "localize")?;
        self.localize_raw(f.raw())
    }
}


#[cfg(test)]
mod invert_tests {
    use super::*;

    #[test]
    fn inversion_of_units() {
        let ring = PolyRing::new(&["x", "y"]).unwrap();
        // constants invert
        let two = Poly::int(&ring, 2);
        assert!((&two * &two.invert().unwrap()).is_one());
        // x is not a unit in Q[x, y]
        assert!(ring.parse("x").unwrap().invert().is_none());
        // on D(xy): y/x is a unit with inverse x/y
        let dxy = ring.localize(&ring.parse("x*y").unwrap()).unwrap();
        let w = Poly::inverse_var(&dxy, 0);
        let y = Poly::var(&dxy, "y").unwrap();
        let y_over_x = &(&y * &y) * &w;
        let inv = y_over_x.invert().unwrap();
        assert!((&y_over_x * &inv).is_one());
        assert_eq!(inv.to_string(), "x/y");
        // x + y is not a unit on D(xy)
        assert!(Poly::var(&dxy, "x")
            .unwrap()
            .invert()
            .map(|i| (&Poly::var(&dxy, "x").unwrap() * &i).is_one())
            .unwrap_or(false));
        let xy_sum = &Poly::var(&dxy, "x").unwrap() + &y;
        assert!(xy_sum.invert().is_none());
    }
}
