//! Polynomial rings over the rationals, with localisation at nonzero
//! elements realised through Rabinowitsch variables.
//!
//! A ring `Q[x_1..x_n]` localised at `f_1, .., f_m` is modelled as
//! `Q[x_1..x_n, w_1..w_m]` modulo the relations `w_k * f_k - 1`. The reduced
//! Gröbner basis of the relation ideal is computed eagerly at construction;
//! every element is kept in normal form with respect to it, so equality of
//! ring elements is structural equality of term maps. Each `f_k` may involve
//! earlier inverse variables, which supports nested localisation.

use super::arith::{self, Coef, TermMap};
use super::groebner;
use super::monomial::{Monomial, MonomialOrder};
use crate::{Error, Result};
use num_traits::One;
use std::sync::Arc;

#[derive(Debug)]
pub struct PolyRing {
    vars: Vec<String>,
    base_vars: usize,
    inverted: Vec<TermMap>,
    order: MonomialOrder,
    /// Reduced Gröbner basis of (w_k * f_k - 1 : k) over the full variable
    /// list; empty for plain polynomial rings.
    relations_gb: Vec<TermMap>,
    /// dw[k][i] is the coefficient of dx_i in d(w_k), from
    /// d(w_k) = -w_k^2 * d(f_k). Indices i range over base variables.
    dw: Vec<Vec<TermMap>>,
}

impl PartialEq for PolyRing {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars
            && self.base_vars == other.base_vars
            && self.inverted == other.inverted
            && self.order == other.order
    }
}

impl Eq for PolyRing {}

fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl PolyRing {
    pub fn new<S: AsRef<str>>(vars: &[S]) -> Result<Arc<PolyRing>> {
        Self::with_order(vars, MonomialOrder::GrevLex)
    }

    pub fn with_order<S: AsRef<str>>(vars: &[S], order: MonomialOrder) -> Result<Arc<PolyRing>> {
        let names: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        for name in &names {
            if !valid_identifier(name) {
                return Err(Error::BadRing(format!("invalid variable name `{name}`")));
            }
        }
        for i in 0..names.len() {
            for j in i + 1..names.len() {
                if names[i] == names[j] {
                    return Err(Error::BadRing(format!("duplicate variable `{}`", names[i])));
                }
            }
        }
        let base_vars = names.len();
        Ok(Arc::new(PolyRing {
            vars: names,
            base_vars,
            inverted: Vec::new(),
            order,
            relations_gb: Vec::new(),
            dw: Vec::new(),
        }))
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn base_vars(&self) -> usize {
        self.base_vars
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn is_localized(&self) -> bool {
        !self.inverted.is_empty()
    }

    pub fn num_inverted(&self) -> usize {
        self.inverted.len()
    }

    pub(crate) fn inverted_raw(&self, k: usize) -> &TermMap {
        &self.inverted[k]
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub(crate) fn relations_gb(&self) -> &[TermMap] {
        &self.relations_gb
    }

    /// The defining relations w_k * f_k - 1, as raw generators.
    pub(crate) fn relation_gens(&self) -> Vec<TermMap> {
        let n = self.num_vars();
        self.inverted
            .iter()
            .enumerate()
            .map(|(k, f)| {
                let w = arith::var(self.base_vars + k, n);
                let mut rel = arith::mul(&w, f);
                arith::add_assign_term(&mut rel, &Monomial::one(n), &-Coef::one());
                rel
            })
            .collect()
    }

    /// Normal form modulo the localisation relations.
    pub(crate) fn canonicalize(&self, raw: TermMap) -> TermMap {
        if self.relations_gb.is_empty() {
            raw
        } else {
            groebner::normal_form(&raw, &self.relations_gb, &self.order)
        }
    }

    /// Total partial derivative with respect to base variable `i`, with
    /// d(w_k) eliminated through d(w_k) = -w_k^2 d(f_k).
    pub(crate) fn total_partial(&self, f: &TermMap, i: usize) -> TermMap {
        debug_assert!(i < self.base_vars);
        let mut out = arith::derivative(f, i);
        for (k, dwk) in self.dw.iter().enumerate() {
            let pw = arith::derivative(f, self.base_vars + k);
            if !pw.is_empty() {
                out = arith::add(&out, &arith::mul(&pw, &dwk[i]));
            }
        }
        self.canonicalize(out)
    }

    fn fresh_inverse_name(&self) -> String {
        let mut k = self.inverted.len();
        loop {
            let name = format!("inv{k}");
            if self.var_index(&name).is_none() {
                return name;
            }
            k += 1;
        }
    }

    /// Adjoins a formal inverse of `f_raw` (a nonzero element given over this
    /// ring's variables). Returns the extended ring.
    pub(crate) fn localize_raw(self: &Arc<Self>, f_raw: &TermMap) -> Result<Arc<PolyRing>> {
        let f = self.canonicalize(f_raw.clone());
        if arith::is_zero(&f) {
            return Err(Error::ZeroDenominator);
        }
        if arith::as_constant(&f).is_some() {
            return Ok(self.clone());
        }
        let mut vars = self.vars.clone();
        vars.push(self.fresh_inverse_name());
        let n = vars.len();
        let mut inverted: Vec<TermMap> = self
            .inverted
            .iter()
            .map(|g| arith::extend_vars(g, n))
            .collect();
        inverted.push(arith::extend_vars(&f, n));

        let mut ring = PolyRing {
            vars,
            base_vars: self.base_vars,
            inverted,
            order: self.order,
            relations_gb: Vec::new(),
            dw: Vec::new(),
        };
        ring.relations_gb = groebner::buchberger(&ring.relation_gens(), &ring.order);
        ring.compute_dw();
        Ok(Arc::new(ring))
    }

    fn compute_dw(&mut self) {
        let n = self.num_vars();
        let mut dw: Vec<Vec<TermMap>> = Vec::with_capacity(self.inverted.len());
        for k in 0..self.inverted.len() {
            let fk = self.inverted[k].clone();
            let wk = arith::var(self.base_vars + k, n);
            let wk2 = arith::mul(&wk, &wk);
            let mut row = Vec::with_capacity(self.base_vars);
            for i in 0..self.base_vars {
                // total partial of f_k using the rows built so far; f_k only
                // involves inverse variables with index < k
                let mut dfi = arith::derivative(&fk, i);
                for (j, dwj) in dw.iter().enumerate() {
                    let pw = arith::derivative(&fk, self.base_vars + j);
                    if !pw.is_empty() {
                        dfi = arith::add(&dfi, &arith::mul(&pw, &dwj[i]));
                    }
                }
                let entry = arith::neg(&arith::mul(&wk2, &dfi));
                row.push(self.canonicalize(entry));
            }
            dw.push(row);
        }
        self.dw = dw;
    }

    /// True when `other`'s variables and inverted elements form a prefix of
    /// this ring's, so elements of `other` embed by extending exponents.
    pub fn extends(&self, other: &PolyRing) -> bool {
        self.base_vars == other.base_vars
            && self.vars.len() >= other.vars.len()
            && self.vars[..other.vars.len()] == other.vars[..]
            && self.inverted.len() >= other.inverted.len()
            && other
                .inverted
                .iter()
                .enumerate()
                .all(|(k, f)| arith::extend_vars(f, self.num_vars()) == self.inverted[k])
    }

    /// Splits a monomial of this ring into its base-variable part and the
    /// exponents of the inverse variables.
    pub(crate) fn split_monomial(&self, m: &Monomial) -> (Monomial, Vec<u32>) {
        let mut base = m.0.clone();
        let inv = base.split_off(self.base_vars);
        base.resize(self.base_vars, 0);
        (Monomial(base), inv)
    }
}

pub(crate) fn same_ring(a: &Arc<PolyRing>, b: &Arc<PolyRing>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

pub(crate) fn check_same_ring(a: &Arc<PolyRing>, b: &Arc<PolyRing>, what: &str) -> Result<()> {
    if same_ring(a, b) {
        Ok(())
    } else {
        Err(Error::RingMismatch(format!(
            "{what}: Q[{}] vs Q[{}]",
            a.vars().join(", "),
            b.vars().join(", ")
        )))
    }
}
