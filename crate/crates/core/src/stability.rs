//! Stability certificates for candidate quotient charts: smoothness and
//! relative dimension through Fitting ideals of the relative differentials,
//! geometric connectedness through an algebraic-closedness search.

use crate::diffmod::{combinations, Distribution, OneForm};
use crate::first_integrals::{kernel_space, FirstIntegralAlgebra, SubalgebraModel};
use crate::foliation::{is_invariant, matrix_generic_rank, Invariance, RingMorphism};
use crate::poly::{Ideal, Poly, PolyRing};
use crate::Result;
use std::sync::Arc;

/// A check outcome with a human-readable witness or reason.
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Verified,
    Refuted { witness: String },
    Unknown { reason: String },
}

impl Verdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified)
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    pub fn witness(&self) -> Option<&str> {
        match self {
            Verdict::Refuted { witness } => Some(witness),
            _ => None,
        }
    }
}

/// Relative-dimension check: the generic rank of the relative differentials
/// against the expected rank of the distribution.
#[derive(Debug, Clone)]
pub struct DimensionCheck {
    pub expected: usize,
    pub computed: usize,
    pub verdict: Verdict,
}

/// Certificate for one chart. `overall` is the conjunction: verified only
/// when invariance, smoothness, relative dimension and connectedness all
/// verified; refuted as soon as one check is refuted.
#[derive(Debug, Clone)]
pub struct StabilityCertificate {
    pub chart_id: String,
    pub invariant: Verdict,
    pub smooth: Verdict,
    pub relative_dimension: DimensionCheck,
    pub connected_fibres: Verdict,
    pub overall: Verdict,
}

impl StabilityCertificate {
    pub fn is_verified(&self) -> bool {
        self.overall.is_verified()
    }
}

fn render_ideal(gens: &[Poly]) -> String {
    if gens.is_empty() {
        return "(0)".to_string();
    }
    let parts: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// All `size × size` minors of a matrix of ring elements.
fn minors(ring: &Arc<PolyRing>, rows: &[Vec<Poly>], size: usize) -> Vec<Poly> {
    let k = rows.len();
    let n = rows.first().map(|r| r.len()).unwrap_or(0);
    if size == 0 {
        return vec![Poly::one(ring)];
    }
    if size > k.min(n) {
        return Vec::new();
    }
    let mut out: Vec<Poly> = Vec::new();
    for rsel in combinations(k, size) {
        for csel in combinations(n, size) {
            let det = crate::foliation::matrix_minor_det(ring, rows, &rsel, &csel);
            if !det.is_zero() {
                let norm = det.normalize_sign();
                if !out.contains(&norm) {
                    out.push(norm);
                }
            }
        }
    }
    out
}

/// Local-freeness test for the cokernel of the given presentation rows at
/// rank `r`: `Fitt_{r-1} = 0` and `Fitt_r = (1)` on the chart.
fn fitting_free_of_rank(
    ring: &Arc<PolyRing>,
    rows: &[Vec<Poly>],
    r: usize,
) -> Result<Verdict> {
    let n = rows.first().map(|row| row.len()).unwrap_or(ring.base_vars());
    // Fitt_{r-1}: minors of size n - r + 1 must all vanish
    let low = minors(ring, rows, n + 1 - r.min(n));
    if r <= n && !low.is_empty() {
        return Ok(Verdict::Refuted {
            witness: format!(
                "lower Fitting ideal has nonzero generator {}",
                low[0]
            ),
        });
    }
    // Fitt_r: minors of size n - r must generate the unit ideal
    if r >= n {
        return Ok(Verdict::Verified);
    }
    let high = minors(ring, rows, n - r);
    let ideal = Ideal::new(ring, high)?;
    if ideal.is_unit() {
        Ok(Verdict::Verified)
    } else {
        Ok(Verdict::Refuted {
            witness: render_ideal(&ideal.groebner_basis()),
        })
    }
}

/// Smoothness and relative dimension of `Spec B -> Spec A` via the
/// presentation of the relative differentials: the module of one-forms of
/// the target modulo `d` of the images of the source variables.
pub fn check_smooth_and_dimension(
    phi: &RingMorphism,
    expected_rank: usize,
) -> Result<(Verdict, DimensionCheck)> {
    let target = phi.target();
    let n = target.base_vars();
    let rows: Vec<Vec<Poly>> = phi
        .images()
        .iter()
        .map(|img| OneForm::d(img).coeffs().to_vec())
        .filter(|row| row.iter().any(|c| !c.is_zero()))
        .collect();
    let generic = matrix_generic_rank(target, &rows);
    let computed = n - generic;
    let dim = DimensionCheck {
        expected: expected_rank,
        computed,
        verdict: if computed == expected_rank {
            Verdict::Verified
        } else {
            Verdict::Refuted {
                witness: format!(
                    "generic relative dimension {computed}, expected {expected_rank}"
                ),
            }
        },
    };
    let smooth = if computed != expected_rank {
        Verdict::Unknown {
            reason: format!(
                "Fitting criterion at rank {expected_rank} not applicable: generic relative dimension is {computed}"
            ),
        }
    } else {
        fitting_free_of_rank(target, &rows, expected_rank)?
    };
    Ok((smooth, dim))
}

/// Local freeness of the distribution itself at its rank, the necessary
/// condition for stability from the structure of `F` alone. The refutation
/// witness is the non-free locus.
pub fn distribution_freeness(dist: &Distribution) -> Result<Verdict> {
    let ring = dist.ring();
    let rows: Vec<Vec<Poly>> = dist
        .relations()
        .iter()
        .map(|r| r.coeffs().to_vec())
        .collect();
    fitting_free_of_rank(ring, &rows, dist.rank())
}

/// Searches for an element of the chart ring outside the algebra that is
/// algebraic over its fraction field, up to degree `d_alg` in both the
/// element and the dependency. Finding one refutes geometric connectedness
/// of the fibres; finding none verifies it when the algebra is certified
/// complete and is reported unknown otherwise.
pub fn connected_fibres_probe(
    alg: &FirstIntegralAlgebra,
    dist: &Distribution,
    d_alg: u32,
) -> Result<Verdict> {
    let ring = alg.ambient();
    let gens = alg.generators();
    let base_dim = alg.relations().dimension();
    let candidates: Vec<Poly> = kernel_space(dist, d_alg)
        .into_iter()
        .filter(|p| p.as_constant().is_none())
        .collect();
    for b in &candidates {
        let member = alg.subalgebra_membership(b)?;
        if member.is_some() {
            continue;
        }
        // b lies outside the algebra; decide whether it is algebraic over
        // Frac(A) by comparing transcendence degrees
        let mut extended = gens.to_vec();
        extended.push(b.clone());
        let model = SubalgebraModel::new(ring, &extended)?;
        let relations = model.relations()?;
        if relations.dimension() == base_dim {
            let minpoly = minimal_dependency(&relations, gens.len());
            return Ok(Verdict::Refuted {
                witness: format!("element {b} satisfies {minpoly}"),
            });
        }
    }
    if alg.is_complete() {
        Ok(Verdict::Verified)
    } else {
        Ok(Verdict::Unknown {
            reason: format!(
                "no algebraic element found up to degree {d_alg}, but the algebra is heuristic (complete = false)"
            ),
        })
    }
}

/// Picks the relation involving the last tag with the smallest degree in
/// it, then smallest total degree: the reported dependency.
fn minimal_dependency(relations: &Ideal, last_tag: usize) -> String {
    let mut best: Option<(u32, u32, String)> = None;
    for g in relations.generators() {
        let deg_s = g
            .raw()
            .keys()
            .map(|m| m.0.get(last_tag).copied().unwrap_or(0))
            .max()
            .unwrap_or(0);
        if deg_s == 0 {
            continue;
        }
        let total = g.total_degree().unwrap_or(0);
        let repr = g.to_string();
        let key = (deg_s, total, repr.clone());
        if best.as_ref().map(|b| key < (b.0, b.1, b.2.clone())).unwrap_or(true) {
            best = Some(key);
        }
    }
    best.map(|(_, _, s)| s).unwrap_or_else(|| "(dependency)".to_string())
}

/// Runs the full certificate for a chart: invariance of the embedding,
/// smoothness and relative dimension (both the relative differentials and
/// the distribution's own freeness), and the connectedness probe.
pub fn certify_chart(
    chart_id: &str,
    dist: &Distribution,
    alg: &FirstIntegralAlgebra,
    d_alg: u32,
) -> Result<StabilityCertificate> {
    let phi = alg.embedding()?;
    let invariant = match is_invariant(&phi, dist)? {
        Invariance::Yes => Verdict::Verified,
        Invariance::No { variable, class } => Verdict::Refuted {
            witness: format!("d_F of the image of {variable} is {class}"),
        },
    };
    let freeness = distribution_freeness(dist)?;
    let (smooth_rel, relative_dimension) = check_smooth_and_dimension(&phi, dist.rank())?;
    let smooth = match (&freeness, &smooth_rel) {
        (Verdict::Refuted { witness }, _) => Verdict::Refuted {
            witness: witness.clone(),
        },
        (_, s) => s.clone(),
    };
    let connected_fibres = connected_fibres_probe(alg, dist, d_alg)?;

    let checks = [
        &invariant,
        &smooth,
        &relative_dimension.verdict,
        &connected_fibres,
    ];
    let overall = if checks.iter().any(|v| v.is_refuted()) {
        let witness = checks
            .iter()
            .find_map(|v| v.witness())
            .unwrap_or("")
            .to_string();
        Verdict::Refuted { witness }
    } else if checks.iter().all(|v| v.is_verified()) {
        Verdict::Verified
    } else {
        Verdict::Unknown {
            reason: "some checks could not be certified".to_string(),
        }
    };

    Ok(StabilityCertificate {
        chart_id: chart_id.to_string(),
        invariant,
        smooth,
        relative_dimension,
        connected_fibres,
        overall,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffmod::OneForm;
    use crate::first_integrals::compute_algebra;
    use crate::foliation::restrict_to_open;

    fn dist2(exprs: &[&str]) -> (Arc<PolyRing>, Distribution) {
        let ring = PolyRing::new(&["x", "y"]).unwrap();
        let coeffs = exprs.iter().map(|e| ring.parse(e).unwrap()).collect();
        let form = OneForm::new(&ring, coeffs).unwrap();
        let dist = Distribution::new(&ring, vec![form]).unwrap();
        (ring, dist)
    }

    #[test]
    fn hyperbola_chart_smooth_on_open() {
        // D(x): Q[t] -> Q[x, 1/x, y], t -> xy, rank 1: verified
        let (ring, hyper) = dist2(&["y", "x"]);
        let chart = restrict_to_open(&hyper, &ring.parse("x").unwrap()).unwrap();
        let alg = compute_algebra(&chart, 2).unwrap();
        let phi = alg.embedding().unwrap();
        let (smooth, dim) = check_smooth_and_dimension(&phi, 1).unwrap();
        assert!(smooth.is_verified(), "{smooth:?}");
        assert!(dim.verdict.is_verified());
        assert_eq!(dim.computed, 1);
    }

    #[test]
    fn hyperbola_full_plane_refuted_at_origin() {
        let (_, hyper) = dist2(&["y", "x"]);
        let alg = compute_algebra(&hyper, 2).unwrap();
        let phi = alg.embedding().unwrap();
        let (smooth, dim) = check_smooth_and_dimension(&phi, 1).unwrap();
        assert!(dim.verdict.is_verified());
        match smooth {
            Verdict::Refuted { witness } => assert_eq!(witness, "(x, y)"),
            other => panic!("expected refutation at the origin, got {other:?}"),
        }
    }

    #[test]
    fn identity_with_rank_zero_verified() {
        let ring = PolyRing::new(&["x", "y"]).unwrap();
        let id = RingMorphism::identity(&ring);
        let (smooth, dim) = check_smooth_and_dimension(&id, 0).unwrap();
        assert!(smooth.is_verified());
        assert!(dim.verdict.is_verified());
        assert_eq!(dim.computed, 0);
    }

    #[test]
    fn connectedness_refuted_on_double_cover() {
        // A = Q[x^2] inside B = Q[x] with the zero-relations distribution:
        // x is algebraic over Frac(A) but not in A
        let ring = PolyRing::new(&["x"]).unwrap();
        // F = 0: every element is a first integral
        let full = Distribution::new(
            &ring,
            vec![OneForm::new(&ring, vec![Poly::one(&ring)]).unwrap()],
        )
        .unwrap();
        let alg = compute_algebra(&full, 1).unwrap();
        // the computed algebra is Q[x] itself; build the synthetic Q[x^2]
        // by hand instead
        let _ = alg;
        let gens = vec![ring.parse("x^2").unwrap()];
        let model = SubalgebraModel::new(&ring, &gens).unwrap();
        assert!(model
            .membership(&ring.parse("x").unwrap())
            .unwrap()
            .is_none());
        let synthetic = FirstIntegralAlgebra {
            ambient: ring.clone(),
            generators: gens,
            tag_ring: model.tag_ring().clone(),
            relations: model.relations().unwrap(),
            degree_bound: 2,
            complete: true,
        };
        let verdict = connected_fibres_probe(&synthetic, &full, 2).unwrap();
        match verdict {
            Verdict::Refuted { witness } => {
                assert!(witness.contains('x'), "witness: {witness}")
            }
            other => panic!("expected refutation, got {other:?}"),
        }
    }

    #[test]
    fn certify_radii_charts() {
        let (ring, radii) = dist2(&["-y", "x"]);
        // D(x) verifies
        let chart = restrict_to_open(&radii, &ring.parse("x").unwrap()).unwrap();
        let alg = compute_algebra(&chart, 2).unwrap();
        let cert = certify_chart("D(x)", &chart, &alg, 3).unwrap();
        assert!(cert.is_verified(), "{cert:?}");
        // the full plane including the origin is refuted, at the origin
        let alg = compute_algebra(&radii, 4).unwrap();
        let cert = certify_chart("X", &radii, &alg, 3).unwrap();
        assert!(cert.overall.is_refuted());
        assert_eq!(cert.smooth.witness(), Some("(x, y)"));
    }
}
