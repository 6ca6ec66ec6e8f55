//! Involutivity checking, Lie brackets, pullback of distributions along
//! distinguished opens, and invariance of candidate quotient morphisms.

use crate::diffmod::{relation_unit_vectors, Distribution, OneForm, VectorField};
use crate::diffmod::modvec;
use crate::exec;
use crate::poly::{check_same_ring, Poly, PolyRing};
use crate::{Error, Result};
use std::sync::Arc;

/// A ring homomorphism determined by the images of the source variables.
/// Source relations (its localisation relations plus any explicitly given
/// algebra relations) are checked to map to zero at construction.
#[derive(Debug, Clone)]
pub struct RingMorphism {
    source: Arc<PolyRing>,
    source_relations: Vec<Poly>,
    target: Arc<PolyRing>,
    images: Vec<Poly>,
}

impl RingMorphism {
    pub fn new(
        source: &Arc<PolyRing>,
        target: &Arc<PolyRing>,
        images: Vec<Poly>,
    ) -> Result<RingMorphism> {
        RingMorphism::with_relations(source, Vec::new(), target, images)
    }

    /// Builds the morphism and verifies that every relation of the source
    /// (explicit relations and localisation relations) maps to zero.
    pub fn with_relations(
        source: &Arc<PolyRing>,
        source_relations: Vec<Poly>,
        target: &Arc<PolyRing>,
        images: Vec<Poly>,
    ) -> Result<RingMorphism> {
        if images.len() != source.num_vars() {
            return Err(Error::MalformedMorphism(format!(
                "expected {} images, got {}",
                source.num_vars(),
                images.len()
            )));
        }
        for img in &images {
            check_same_ring(target, img.ring(), "morphism image")?;
        }
        for rel in &source_relations {
            check_same_ring(source, rel.ring(), "morphism source relation")?;
        }
        let m = RingMorphism {
            source: source.clone(),
            source_relations,
            target: target.clone(),
            images,
        };
        let mut all_relations: Vec<Poly> = m.source_relations.clone();
        all_relations.extend(
            m.source
                .relation_gens()
                .into_iter()
                .map(|r| Poly::from_raw_unreduced(&m.source, r)),
        );
        for rel in &all_relations {
            let image = m.apply(rel)?;
            if !image.is_zero() {
                return Err(Error::MalformedMorphism(format!(
                    "source relation {rel} maps to nonzero element {image}"
                )));
            }
        }
        Ok(m)
    }

    pub fn identity(ring: &Arc<PolyRing>) -> RingMorphism {
        let images = ring
            .vars()
            .iter()
            .map(|v| Poly::var(ring, v).expect("own variable"))
            .collect();
        RingMorphism {
            source: ring.clone(),
            source_relations: Vec::new(),
            target: ring.clone(),
            images,
        }
    }

    pub fn source(&self) -> &Arc<PolyRing> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PolyRing> {
        &self.target
    }

    pub fn images(&self) -> &[Poly] {
        &self.images
    }

    pub fn source_relations(&self) -> &[Poly] {
        &self.source_relations
    }

    pub fn apply(&self, f: &Poly) -> Result<Poly> {
        check_same_ring(&self.source, f.ring(), "morphism argument")?;
        f.substitute(&self.target, &self.images)
    }
}

/// Lie bracket of two derivations: the coefficient of d/dx_i in `[v, w]`
/// is `v(w_i) - w(v_i)`.
pub fn lie_bracket(v: &VectorField, w: &VectorField) -> Result<VectorField> {
    check_same_ring(v.ring(), w.ring(), "lie_bracket")?;
    let ring = v.ring();
    let coeffs = (0..ring.base_vars())
        .map(|i| &v.apply(w.coeff(i)) - &w.apply(v.coeff(i)))
        .collect();
    VectorField::new(ring, coeffs)
}

/// Involutivity verdict. `YesGenerically` records a nonzero denominator
/// whose inversion makes bracket closure hold; `No` carries the indices of
/// the dual generators and their escaping bracket.
#[derive(Debug, Clone)]
pub enum Involutivity {
    Yes,
    YesGenerically { denominator: Poly },
    No { pair: (usize, usize), bracket: VectorField },
}

impl Involutivity {
    pub fn is_involutive(&self) -> bool {
        !matches!(self, Involutivity::No { .. })
    }
}

/// Checks closure of the dual vector fields under the Lie bracket. The
/// distribution is saturated first when it is not already; brackets of all
/// generator pairs are reduced against the module they generate.
pub fn is_involutive(dist: &Distribution) -> Involutivity {
    let sat;
    let dist = if dist.is_saturated() {
        dist
    } else {
        sat = dist.saturate_torsion();
        &sat
    };
    let ring = dist.ring();
    let order = *ring.order();
    let duals = dist.dual_vector_fields();
    if duals.len() <= 1 {
        return Involutivity::Yes;
    }
    let n = ring.base_vars();
    let mut gens: Vec<modvec::ModVec> = duals.iter().map(|v| v.to_modvec()).collect();
    gens.extend(relation_unit_vectors(ring, n));
    let gb = modvec::buchberger(&gens, &order);

    let pairs: Vec<(usize, usize)> = crate::diffmod::combinations(duals.len(), 2)
        .into_iter()
        .map(|c| (c[0], c[1]))
        .collect();
    let reduced: Vec<(usize, usize, VectorField, modvec::ModVec)> =
        exec::map_collect(&pairs, |&(a, b)| {
            let br = lie_bracket(&duals[a], &duals[b]).expect("same ring");
            let nf = modvec::normal_form(&br.to_modvec(), &gb, &order);
            (a, b, br, nf)
        });

    let mut generic_denominator: Option<Poly> = None;
    for (a, b, bracket, nf) in reduced {
        if nf.iter().all(|c| c.is_empty()) {
            continue;
        }
        // not in the module on the nose; decide membership in the generic
        // span by a fraction-field rank test
        let base_rows: Vec<Vec<Poly>> = duals.iter().map(|v| v.coeffs().to_vec()).collect();
        let base_rank = matrix_generic_rank(ring, &base_rows);
        let mut rows = base_rows.clone();
        rows.push(bracket.coeffs().to_vec());
        if matrix_generic_rank(ring, &rows) == base_rank {
            if generic_denominator.is_none() {
                generic_denominator = first_nonzero_minor(ring, &base_rows, base_rank);
            }
        } else {
            return Involutivity::No {
                pair: (a, b),
                bracket,
            };
        }
    }
    match generic_denominator {
        Some(denominator) => Involutivity::YesGenerically { denominator },
        None => Involutivity::Yes,
    }
}

/// The classical corank-one integrability test: `ω ∧ dω = 0` as a
/// three-form. Vanishes automatically in fewer than three variables.
pub fn wedge_test_corank_one(dist: &Distribution) -> Result<bool> {
    if dist.corank() != 1 {
        return Err(Error::Invalid(format!(
            "wedge test needs corank 1, distribution has corank {}",
            dist.corank()
        )));
    }
    let ring = dist.ring();
    let n = ring.base_vars();
    let omega = dist
        .relations()
        .iter()
        .find(|r| !r.is_zero())
        .expect("corank 1 has a nonzero relation");
    if n < 3 {
        return Ok(true);
    }
    let partial = |f: &Poly, i: usize| -> Poly {
        Poly::from_raw_unreduced(ring, ring.total_partial(f.raw(), i))
    };
    let eta = |i: usize, j: usize| -> Poly {
        &partial(omega.coeff(j), i) - &partial(omega.coeff(i), j)
    };
    for triple in crate::diffmod::combinations(n, 3) {
        let (i, j, k) = (triple[0], triple[1], triple[2]);
        let comp = &(&(omega.coeff(i) * &eta(j, k)) - &(omega.coeff(j) * &eta(i, k)))
            + &(omega.coeff(k) * &eta(i, j));
        if !comp.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Restricts a distribution to the distinguished open where `f` is
/// invertible: the same relation generators over the localised ring.
/// Restriction by a nonzero constant returns the distribution unchanged.
pub fn restrict_to_open(dist: &Distribution, f: &Poly) -> Result<Distribution> {
    check_same_ring(dist.ring(), f.ring(), "restrict_to_open")?;
    if f.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    if f.as_constant().is_some() {
        return Ok(dist.clone());
    }
    let extended = dist.ring().localize(f)?;
    let relations: Result<Vec<OneForm>> = dist
        .relations()
        .iter()
        .map(|r| r.embed(&extended))
        .collect();
    let out = Distribution::new_with_saturation(&extended, relations?, dist.is_saturated())?;
    debug_assert_eq!(out.rank_corank(), dist.rank_corank());
    Ok(out)
}

/// Invariance verdict for a candidate quotient morphism.
#[derive(Debug, Clone)]
pub enum Invariance {
    Yes,
    No { variable: String, class: OneForm },
}

impl Invariance {
    pub fn is_invariant(&self) -> bool {
        matches!(self, Invariance::Yes)
    }
}

/// A morphism is invariant iff the foliated derivative of the image of
/// every source variable vanishes; the witness on failure is the first
/// variable whose image has a nonzero class.
pub fn is_invariant(phi: &RingMorphism, dist: &Distribution) -> Result<Invariance> {
    check_same_ring(phi.target(), dist.ring(), "is_invariant")?;
    for (i, name) in phi.source().vars().iter().enumerate() {
        let class = dist.foliated_d(&phi.images()[i])?;
        if !class.is_zero() {
            return Ok(Invariance::No {
                variable: name.clone(),
                class,
            });
        }
    }
    Ok(Invariance::Yes)
}

/// Generic rank of a matrix of ring elements over the fraction field.
pub(crate) fn matrix_generic_rank(ring: &Arc<PolyRing>, rows: &[Vec<Poly>]) -> usize {
    let k = rows.len();
    let n = rows.first().map(|r| r.len()).unwrap_or(0);
    for size in (1..=k.min(n)).rev() {
        if first_nonzero_minor(ring, rows, size).is_some() {
            return size;
        }
    }
    0
}

pub(crate) fn first_nonzero_minor(
    ring: &Arc<PolyRing>,
    rows: &[Vec<Poly>],
    size: usize,
) -> Option<Poly> {
    let k = rows.len();
    let n = rows.first().map(|r| r.len()).unwrap_or(0);
    if size == 0 || size > k.min(n) {
        return None;
    }
    for rsel in crate::diffmod::combinations(k, size) {
        for csel in crate::diffmod::combinations(n, size) {
            let det = matrix_minor_det(ring, rows, &rsel, &csel);
            if !det.is_zero() {
                return Some(det.normalize_sign());
            }
        }
    }
    None
}

pub(crate) fn matrix_minor_det(
    ring: &Arc<PolyRing>,
    rows: &[Vec<Poly>],
    rsel: &[usize],
    csel: &[usize],
) -> Poly {
    if rsel.is_empty() {
        return Poly::one(ring);
    }
    let mut acc = Poly::zero(ring);
    let r = rsel[0];
    let rest: Vec<usize> = rsel[1..].to_vec();
    for (j, &c) in csel.iter().enumerate() {
        let entry = &rows[r][c];
        if entry.is_zero() {
            continue;
        }
        let sub_cols: Vec<usize> = csel
            .iter()
            .enumerate()
            .filter(|(jj, _)| *jj != j)
            .map(|(_, &cc)| cc)
            .collect();
        let sub = matrix_minor_det(ring, rows, &rest, &sub_cols);
        let term = entry * &sub;
        if j % 2 == 0 {
            acc = &acc + &term;
        } else {
            acc = &acc - &term;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffmod::{Distribution, OneForm};
    use crate::poly::PolyRing;

    fn vf(ring: &Arc<PolyRing>, exprs: &[&str]) -> VectorField {
        let coeffs = exprs.iter().map(|e| ring.parse(e).unwrap()).collect();
        VectorField::new(ring, coeffs).unwrap()
    }

    fn form(ring: &Arc<PolyRing>, exprs: &[&str]) -> OneForm {
        let coeffs = exprs.iter().map(|e| ring.parse(e).unwrap()).collect();
        OneForm::new(ring, coeffs).unwrap()
    }

    #[test]
    fn lie_bracket_examples() {
        let ring = PolyRing::new(&["x", "y"]).unwrap();
        // constant fields commute
        let dx = vf(&ring, &["1", "0"]);
        let dy = vf(&ring, &["0", "1"]);
        assert!(lie_bracket(&dx, &dy).unwrap().is_zero());
        // [x d/dy, y d/dx] = x d/dx... with a sign: v(w_0) - w(v_0)
        let v = vf(&ring, &["0", "x"]);
        let w = vf(&ring, &["y", "0"]);
        let br = lie_bracket(&v, &w).unwrap();
        assert_eq!(br.coeff(0), &ring.parse("x").unwrap());
        assert_eq!(br.coeff(1), &ring.parse("-y").unwrap());
        // antisymmetry on the diagonal
        assert!(lie_bracket(&v, &v).unwrap().is_zero());
    }

    #[test]
    fn jacobi_identity_smoke() {
        let ring = PolyRing::new(&["x", "y", "z"]).unwrap();
        let u = vf(&ring, &["y", "z", "x"]);
        let v = vf(&ring, &["x^2", "1", "0"]);
        let w = vf(&ring, &["0", "x*y", "z"]);
        let a = lie_bracket(&u, &lie_bracket(&v, &w).unwrap()).unwrap();
        let b = lie_bracket(&v, &lie_bracket(&w, &u).unwrap()).unwrap();
        let c = lie_bracket(&w, &lie_bracket(&u, &v).unwrap()).unwrap();
        for i in 0..3 {
            let s = &(a.coeff(i) + b.coeff(i)) + c.coeff(i);
            assert!(s.is_zero(), "jacobi fails in component {i}");
        }
    }

    #[test]
    fn involutivity_verdicts() {
        // corank 1 in two variables: single dual generator, trivially yes
        let ring = PolyRing::new(&["x", "y"]).unwrap();
        let radii = Distribution::new(&ring, vec![form(&ring, &["-y", "x"])]).unwrap();
        assert!(is_involutive(&radii).is_involutive());

        // contact distribution is not involutive
        let ring3 = PolyRing::new(&["x", "y", "z"]).unwrap();
        let contact = Distribution::new(&ring3, vec![form(&ring3, &["-y", "0", "1"])]).unwrap();
        let verdict = is_involutive(&contact);
        assert!(!verdict.is_involutive());

        // N = (dz) is involutive: duals d/dx, d/dy commute
        let flat = Distribution::new(&ring3, vec![form(&ring3, &["0", "0", "1"])]).unwrap();
        assert!(matches!(is_involutive(&flat), Involutivity::Yes));

        // zero distribution: full tangent sheaf, closed under bracket
        let zero = Distribution::new(&ring3, vec![]).unwrap();
        assert!(matches!(is_involutive(&zero), Involutivity::Yes));
    }

    #[test]
    fn wedge_crosscheck_agrees() {
        let ring3 = PolyRing::new(&["x", "y", "z"]).unwrap();
        let contact = Distribution::new(&ring3, vec![form(&ring3, &["-y", "0", "1"])]).unwrap();
        assert!(!wedge_test_corank_one(&contact).unwrap());
        let flat = Distribution::new(&ring3, vec![form(&ring3, &["0", "0", "1"])]).unwrap();
        assert!(wedge_test_corank_one(&flat).unwrap());
        // two variables: always integrable
        let ring = PolyRing::new(&["x", "y"]).unwrap();
        let radii = Distribution::new(&ring, vec![form(&ring, &["-y", "x"])]).unwrap();
        assert!(wedge_test_corank_one(&radii).unwrap());
    }

    #[test]
    fn restriction_preserves_rank() {
        let ring = PolyRing::new(&["x", "y"]).unwrap();
        let hyper = Distribution::new(&ring, vec![form(&ring, &["y", "x"])]).unwrap();
        let f = ring.parse("x*y").unwrap();
        let restricted = restrict_to_open(&hyper, &f).unwrap();
        assert_eq!(restricted.rank_corank(), (1, 1));
        // restriction by 1 is the identity
        let same = restrict_to_open(&hyper, &ring.parse("1").unwrap()).unwrap();
        assert_eq!(same.ring(), hyper.ring());
    }

    #[test]
    fn invariance_examples() {
        let ring = PolyRing::new(&["x", "y"]).unwrap();
        let hyper = Distribution::new(&ring, vec![form(&ring, &["y", "x"])]).unwrap();
        let tring = PolyRing::new(&["t"]).unwrap();
        // t -> xy is invariant for the hyperbola foliation
        let phi = RingMorphism::new(&tring, &ring, vec![ring.parse("x*y").unwrap()]).unwrap();
        assert!(is_invariant(&phi, &hyper).unwrap().is_invariant());
        // t -> x is not
        let psi = RingMorphism::new(&tring, &ring, vec![ring.parse("x").unwrap()]).unwrap();
        match is_invariant(&psi, &hyper).unwrap() {
            Invariance::No { variable, .. } => assert_eq!(variable, "t"),
            _ => panic!("expected refutation"),
        }
        // identity morphism is invariant when F = 0, i.e. N is everything
        let full = Distribution::new(
            &ring,
            vec![form(&ring, &["1", "0"]), form(&ring, &["0", "1"])],
        )
        .unwrap();
        let id = RingMorphism::identity(&ring);
        assert!(is_invariant(&id, &full).unwrap().is_invariant());
        // with N = 0 the identity is not invariant: d(x) is nonzero in F
        let zero = Distribution::new(&ring, vec![]).unwrap();
        assert!(!is_invariant(&id, &zero).unwrap().is_invariant());
    }
}
