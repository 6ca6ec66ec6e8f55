//! Ideals with a cached reduced Gröbner basis, normal forms, block-order
//! elimination and combinatorial dimension.
//!
//! On a localised ring the cached basis is the reduced basis of the ideal
//! generated by the given generators *and* the localisation relations, so
//! membership and normal forms are taken in the localised ring.

use super::arith::{self, TermMap};
use super::element::Poly;
use super::groebner;
use super::monomial::MonomialOrder;
use super::ring::{check_same_ring, PolyRing};
use crate::{Error, Result};
use std::sync::{Arc, OnceLock};

#[derive(Debug, Clone)]
pub struct Ideal {
    ring: Arc<PolyRing>,
    gens: Vec<Poly>,
    gb: OnceLock<Arc<Vec<TermMap>>>,
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        super::ring::same_ring(&self.ring, &other.ring)
            && self.groebner_raw()[..] == other.groebner_raw()[..]
    }
}

impl Ideal {
    pub fn new(ring: &Arc<PolyRing>, gens: Vec<Poly>) -> Result<Ideal> {
        for g in &gens {
            check_same_ring(ring, g.ring(), "ideal generator")?;
        }
        Ok(Ideal {
            ring: ring.clone(),
            gens,
            gb: OnceLock::new(),
        })
    }

    pub fn zero(ring: &Arc<PolyRing>) -> Ideal {
        Ideal {
            ring: ring.clone(),
            gens: Vec::new(),
            gb: OnceLock::new(),
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn generators(&self) -> &[Poly] {
        &self.gens
    }

    pub(crate) fn groebner_raw(&self) -> Arc<Vec<TermMap>> {
        self.gb
            .get_or_init(|| {
                let mut gens: Vec<TermMap> =
                    self.gens.iter().map(|g| g.raw().clone()).collect();
                gens.extend(self.ring.relation_gens());
                Arc::new(groebner::buchberger(&gens, self.ring.order()))
            })
            .clone()
    }

    /// Forces the cached reduced basis; idempotent.
    pub fn buchberger(&self) -> &Ideal {
        let _ = self.groebner_raw();
        self
    }

    /// The reduced Gröbner basis as presentation data. On localised rings
    /// this includes elements of the localisation ideal.
    pub fn groebner_basis(&self) -> Vec<Poly> {
        self.groebner_raw()
            .iter()
            .map(|g| Poly::from_raw_unreduced(&self.ring, g.clone()))
            .collect()
    }

    /// Unique remainder of `f` modulo the reduced basis; zero iff `f` lies
    /// in the ideal.
    pub fn normal_form(&self, f: &Poly) -> Result<Poly> {
        check_same_ring(&self.ring, f.ring(), "normal_form")?;
        let gb = self.groebner_raw();
        let nf = groebner::normal_form(f.raw(), &gb, self.ring.order());
        Ok(Poly::from_raw_unreduced(&self.ring, nf))
    }

    pub fn contains(&self, f: &Poly) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn is_unit(&self) -> bool {
        let gb = self.groebner_raw();
        gb.len() == 1 && arith::as_constant(&gb[0]).is_some()
    }

    /// True when every generator is zero in the ring (the ideal equals the
    /// pure localisation ideal).
    pub fn is_zero_ideal(&self) -> bool {
        self.gens.iter().all(|g| g.is_zero())
    }

    /// Intersection with the subring on the `keep` variables, computed with
    /// a block elimination order. The result lives in a fresh plain ring on
    /// exactly those variables (in this ring's variable order).
    pub fn eliminate<S: AsRef<str>>(&self, keep: &[S]) -> Result<Ideal> {
        let keep_names: Vec<&str> = keep.iter().map(|s| s.as_ref()).collect();
        let mut keep_idx = Vec::with_capacity(keep_names.len());
        for name in &keep_names {
            match self.ring.var_index(name) {
                Some(i) => keep_idx.push(i),
                None => return Err(Error::UnknownVariable(name.to_string())),
            }
        }
        let n = self.ring.num_vars();
        let keep_mask: Vec<bool> = (0..n).map(|i| keep_idx.contains(&i)).collect();
        let drop_idx: Vec<usize> = (0..n).filter(|i| !keep_mask[*i]).collect();
        let kept_in_order: Vec<usize> = (0..n).filter(|i| keep_mask[*i]).collect();

        // permuted ring: eliminated block first, then kept variables
        let mut perm = vec![0usize; n];
        for (new, &old) in drop_idx.iter().chain(kept_in_order.iter()).enumerate() {
            perm[old] = new;
        }
        let split = drop_idx.len();
        let order = MonomialOrder::Block { split };

        let mut gens: Vec<TermMap> = self.gens.iter().map(|g| g.raw().clone()).collect();
        gens.extend(self.ring.relation_gens());
        let permuted: Vec<TermMap> = gens
            .iter()
            .map(|g| arith::permute_vars(g, &perm, n))
            .collect();
        let gb = groebner::buchberger(&permuted, &order);

        let result_vars: Vec<String> = kept_in_order
            .iter()
            .map(|&i| self.ring.vars()[i].clone())
            .collect();
        let result_ring = PolyRing::new(&result_vars)?;
        let mut result_gens = Vec::new();
        for g in &gb {
            if g.keys().all(|mono| mono.0[..split].iter().all(|&e| e == 0)) {
                let shifted: TermMap = g
                    .iter()
                    .map(|(mono, c)| {
                        (
                            super::monomial::Monomial(mono.0[split..].to_vec()),
                            c.clone(),
                        )
                    })
                    .collect();
                result_gens.push(Poly::from_raw(&result_ring, shifted));
            }
        }
        let ideal = Ideal::new(&result_ring, result_gens.clone())?;
        // the filtered elements are already the reduced basis under the
        // induced grevlex order on the kept block
        let raw: Vec<TermMap> = result_gens.iter().map(|g| g.raw().clone()).collect();
        let _ = ideal.gb.set(Arc::new(raw));
        Ok(ideal)
    }

    /// Krull dimension of the quotient by this ideal, by maximal independent
    /// sets modulo the leading-term ideal. `None` for the unit ideal.
    pub fn dimension(&self) -> Option<usize> {
        if self.is_unit() {
            return None;
        }
        let gb = self.groebner_raw();
        let order = *self.ring.order();
        let leads: Vec<_> = gb
            .iter()
            .filter_map(|g| arith::leading(g, &order).map(|(m, _)| m.clone()))
            .collect();
        let n = self.ring.num_vars();
        let mut best = 0usize;
        for mask in 0u32..(1 << n) {
            let allowed: Vec<bool> = (0..n).map(|i| mask & (1 << i) != 0).collect();
            let size = allowed.iter().filter(|&&b| b).count();
            if size <= best {
                continue;
            }
            if leads.iter().all(|m| !m.supported_on(&allowed)) {
                best = size;
            }
        }
        Some(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_form_examples() {
        let ring = PolyRing::new(&["x", "y"]).unwrap();
        let ideal = Ideal::new(&ring, vec![ring.parse("y - x^2").unwrap()]).unwrap();
        assert_eq!(
            ideal.normal_form(&ring.parse("x^2").unwrap()).unwrap(),
            ring.parse("y").unwrap()
        );
        assert!(ideal
            .contains(&ring.parse("x^2*y - y^2").unwrap())
            .unwrap());
        assert_eq!(
            ideal.normal_form(&Poly::zero(&ring)).unwrap(),
            Poly::zero(&ring)
        );
    }

    #[test]
    fn reduced_basis_examples() {
        let ring = PolyRing::new(&["x", "y"]).unwrap();
        let ideal = Ideal::new(
            &ring,
            vec![ring.parse("y - x^2").unwrap(), ring.parse("x").unwrap()],
        )
        .unwrap();
        let gb = ideal.groebner_basis();
        assert_eq!(gb.len(), 2);
        assert_eq!(gb[0], ring.parse("x").unwrap());
        assert_eq!(gb[1], ring.parse("y").unwrap());
        // idempotent
        let again = ideal.buchberger().groebner_basis();
        assert_eq!(gb, again);
        assert!(Ideal::zero(&ring).groebner_basis().is_empty());
    }

    #[test]
    fn elimination_examples() {
        // (t - x*y) eliminates to (0)
        let ring = PolyRing::new(&["x", "y", "t"]).unwrap();
        let ideal = Ideal::new(&ring, vec![ring.parse("t - x*y").unwrap()]).unwrap();
        let el = ideal.eliminate(&["t"]).unwrap();
        assert!(el.generators().is_empty());

        // (t1 - x, t2 - x^2) eliminates to (t1^2 - t2)
        let ring = PolyRing::new(&["x", "t1", "t2"]).unwrap();
        let ideal = Ideal::new(
            &ring,
            vec![
                ring.parse("t1 - x").unwrap(),
                ring.parse("t2 - x^2").unwrap(),
            ],
        )
        .unwrap();
        let el = ideal.eliminate(&["t1", "t2"]).unwrap();
        assert_eq!(el.generators().len(), 1);
        assert_eq!(el.generators()[0].to_string(), "t1^2 - t2");

        // (0) eliminates to (0)
        let z = Ideal::zero(&ring).eliminate(&["x"]).unwrap();
        assert!(z.generators().is_empty());
    }

    #[test]
    fn dimension_examples() {
        let ring = PolyRing::new(&["x", "y"]).unwrap();
        assert_eq!(Ideal::zero(&ring).dimension(), Some(2));
        let curve = Ideal::new(&ring, vec![ring.parse("y - x^2").unwrap()]).unwrap();
        assert_eq!(curve.dimension(), Some(1));
        let point = Ideal::new(
            &ring,
            vec![ring.parse("x").unwrap(), ring.parse("y").unwrap()],
        )
        .unwrap();
        assert_eq!(point.dimension(), Some(0));
        let unit = Ideal::new(&ring, vec![Poly::one(&ring)]).unwrap();
        assert_eq!(unit.dimension(), None);
    }
}
