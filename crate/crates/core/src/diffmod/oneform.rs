//! One-forms and vector fields on (possibly localised) affine space.
//!
//! On a localised ring the module of one-forms stays free on the base
//! differentials dx_i: the differential of an inverse variable is eliminated
//! through d(w) = -w^2 df, which is what the ring's total partials compute.

use super::modvec::ModVec;
use crate::poly::arith::TermMap;
use crate::poly::{check_same_ring, Poly, PolyRing};
use crate::Result;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq)]
pub struct OneForm {
    ring: Arc<PolyRing>,
    coeffs: Vec<Poly>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    ring: Arc<PolyRing>,
    coeffs: Vec<Poly>,
}

fn check_coeffs(ring: &Arc<PolyRing>, coeffs: &[Poly], what: &str) -> Result<()> {
    for c in coeffs {
        check_same_ring(ring, c.ring(), what)?;
    }
    Ok(())
}

impl OneForm {
    /// Builds `sum coeffs[i] * dx_i`; one coefficient per base variable.
    pub fn new(ring: &Arc<PolyRing>, coeffs: Vec<Poly>) -> Result<OneForm> {
        assert_eq!(coeffs.len(), ring.base_vars(), "one coefficient per base variable");
        check_coeffs(ring, &coeffs, "one-form coefficient")?;
        Ok(OneForm {
            ring: ring.clone(),
            coeffs,
        })
    }

    pub fn zero(ring: &Arc<PolyRing>) -> OneForm {
        OneForm {
            ring: ring.clone(),
            coeffs: vec![Poly::zero(ring); ring.base_vars()],
        }
    }

    /// The exterior derivative of a ring element, with d of inverse
    /// variables eliminated.
    pub fn d(f: &Poly) -> OneForm {
        let ring = f.ring().clone();
        let coeffs = (0..ring.base_vars())
            .map(|i| Poly::from_raw_unreduced(&ring, ring.total_partial(f.raw(), i)))
            .collect();
        OneForm { ring, coeffs }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Poly {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &OneForm) -> OneForm {
        OneForm {
            ring: self.ring.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &OneForm) -> OneForm {
        OneForm {
            ring: self.ring.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, f: &Poly) -> OneForm {
        OneForm {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| c * f).collect(),
        }
    }

    /// Natural pairing with a vector field.
    pub fn pair(&self, v: &VectorField) -> Poly {
        let mut acc = Poly::zero(&self.ring);
        for (c, vc) in self.coeffs.iter().zip(&v.coeffs) {
            acc = &acc + &(c * vc);
        }
        acc
    }

    /// Maps the form into an extension ring.
    pub fn embed(&self, target: &Arc<PolyRing>) -> Result<OneForm> {
        let coeffs: Result<Vec<Poly>> = self.coeffs.iter().map(|c| c.embed(target)).collect();
        Ok(OneForm {
            ring: target.clone(),
            coeffs: coeffs?,
        })
    }

    pub(crate) fn to_modvec(&self) -> ModVec {
        self.coeffs.iter().map(|c| c.raw().clone()).collect()
    }

    pub(crate) fn from_modvec(ring: &Arc<PolyRing>, v: &ModVec) -> OneForm {
        OneForm {
            ring: ring.clone(),
            coeffs: v
                .iter()
                .map(|c| Poly::from_raw(ring, c.clone()))
                .collect(),
        }
    }
}

impl VectorField {
    /// Builds `sum coeffs[i] * d/dx_i`; one coefficient per base variable.
    pub fn new(ring: &Arc<PolyRing>, coeffs: Vec<Poly>) -> Result<VectorField> {
        assert_eq!(coeffs.len(), ring.base_vars(), "one coefficient per base variable");
        check_coeffs(ring, &coeffs, "vector field coefficient")?;
        Ok(VectorField {
            ring: ring.clone(),
            coeffs,
        })
    }

    pub fn zero(ring: &Arc<PolyRing>) -> VectorField {
        VectorField {
            ring: ring.clone(),
            coeffs: vec![Poly::zero(ring); ring.base_vars()],
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Poly {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Applies the derivation to a ring element.
    pub fn apply(&self, f: &Poly) -> Poly {
        let ring = &self.ring;
        let mut acc = Poly::zero(ring);
        for (i, c) in self.coeffs.iter().enumerate() {
            let df = Poly::from_raw_unreduced(ring, ring.total_partial(f.raw(), i));
            acc = &acc + &(c * &df);
        }
        acc
    }

    pub fn embed(&self, target: &Arc<PolyRing>) -> Result<VectorField> {
        let coeffs: Result<Vec<Poly>> = self.coeffs.iter().map(|c| c.embed(target)).collect();
        Ok(VectorField {
            ring: target.clone(),
            coeffs: coeffs?,
        })
    }

    pub(crate) fn to_modvec(&self) -> ModVec {
        self.coeffs.iter().map(|c| c.raw().clone()).collect()
    }

    pub(crate) fn from_modvec(ring: &Arc<PolyRing>, v: &ModVec) -> VectorField {
        VectorField {
            ring: ring.clone(),
            coeffs: v
                .iter()
                .map(|c| Poly::from_raw(ring, c.clone()))
                .collect(),
        }
    }
}

fn fmt_components(
    f: &mut fmt::Formatter<'_>,
    coeffs: &[Poly],
    vars: &[String],
    symbol: impl Fn(&str) -> String,
) -> fmt::Result {
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let sym = symbol(&vars[i]);
        let (neg, body) = if c.num_terms() == 1 {
            let s = c.to_string();
            match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            }
        } else {
            (false, format!("({c})"))
        };
        let body = if body == "1" {
            sym
        } else {
            format!("{body}*{sym}")
        };
        if first {
            if neg {
                write!(f, "-")?;
            }
            first = false;
        } else if neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        write!(f, "{body}")?;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_components(f, &self.coeffs, self.ring.vars(), |v| format!("d{v}"))
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_components(f, &self.coeffs, self.ring.vars(), |v| format!("d/d{v}"))
    }
}

/// Raw relation generators `r * e_pos` for the ring's localisation ideal,
/// used to compute module bases over the localised ring.
pub(crate) fn relation_unit_vectors(ring: &PolyRing, rank: usize) -> Vec<ModVec> {
    let mut out = Vec::new();
    for r in ring.relation_gens() {
        for pos in 0..rank {
            out.push(super::modvec::unit(rank, pos, &r));
        }
    }
    out
}
