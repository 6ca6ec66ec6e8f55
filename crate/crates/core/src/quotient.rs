//! Gluing certified charts into a quotient atlas: overlap algebras,
//! transition maps, cocycle verification, separatedness, classification and
//! leaf fibres.
//!
//! Charts and their overlaps are always distinguished opens of the base:
//! the overlap of `D(f_i)` and `D(f_j)` is modelled as the single
//! localisation at `f_i * f_j`, and chart rings map into it by sending each
//! inverse variable to the inverse of its denominator's image.

use crate::diffmod::Distribution;
use crate::first_integrals::{
    compute_algebra, kernel_space, FirstIntegralAlgebra, SubalgebraModel,
};
use crate::foliation::{restrict_to_open, RingMorphism};
use crate::poly::arith;
use crate::poly::{Coef, Ideal, Poly, PolyRing};
use crate::stability::StabilityCertificate;
use crate::{exec, Error, Result};
use std::sync::Arc;

/// A certified chart `D(f) ⊆ X` together with its restricted distribution,
/// computed first integrals, and stability certificate.
#[derive(Debug, Clone)]
pub struct Chart {
    pub id: String,
    pub denominator: Poly,
    pub dist: Distribution,
    pub algebra: FirstIntegralAlgebra,
    pub certificate: StabilityCertificate,
}

/// A transition between two charts over their overlap `D(f_i * f_j)`:
/// the overlap algebra, the recognised localizers on both sides, and the
/// expressions of the target chart's generators in the localised tag model
/// `Q[t1..tm, s]` of the source chart (`s` standing for `1/h`).
#[derive(Debug, Clone)]
pub struct TransitionMap {
    pub from: String,
    pub to: String,
    pub overlap_algebra: FirstIntegralAlgebra,
    /// localizer h on the `from` side, as an element of the from-chart ring
    pub localizer_from: Poly,
    /// localizer on the `to` side
    pub localizer_to: Poly,
    /// tag model Q[t1..tm, s] of the localised from-side algebra
    pub loc_tag_ring: Arc<PolyRing>,
    /// images of the to-side generators in that model
    pub images: Vec<Poly>,
    /// the overlap ring B_ij
    pub ring: Arc<PolyRing>,
}

/// Separatedness verdict for the glued scheme.
#[derive(Debug, Clone)]
pub enum Separatedness {
    Yes,
    No {
        pair: (String, String),
        witness: Poly,
    },
}

impl Separatedness {
    pub fn is_separated(&self) -> bool {
        matches!(self, Separatedness::Yes)
    }
}

/// The glued quotient: charts, transitions (one per ordered pair with
/// nonempty overlap), cocycle verdict, separatedness and a classification
/// tag from a small pattern library.
#[derive(Debug)]
pub struct Atlas {
    pub charts: Vec<Chart>,
    pub transitions: Vec<TransitionMap>,
    pub cocycle_ok: bool,
    pub cocycle_witness: Option<String>,
    pub separated: Separatedness,
    pub classification: String,
}

/// Builds a morphism from one localisation of the base ring into another,
/// sending every inverse variable to the inverse of its denominator's
/// image. Fails when some denominator is not a unit in the target.
pub(crate) fn localization_embedding(
    source: &Arc<PolyRing>,
    target: &Arc<PolyRing>,
) -> Result<RingMorphism> {
    let mut images: Vec<Poly> = Vec::with_capacity(source.num_vars());
    for name in &source.vars()[..source.base_vars()] {
        images.push(Poly::var(target, name).map_err(|_| {
            Error::RingMismatch(format!("target ring has no variable `{name}`"))
        })?);
    }
    for k in 0..source.num_inverted() {
        let f_raw = source.inverted_raw(k).clone();
        // f_k only involves variables that already have images; pad the
        // image list with zeros for the not-yet-mapped inverse variables
        let mut padded = images.clone();
        padded.resize(source.num_vars(), Poly::zero(target));
        let f_src = Poly::from_raw_unreduced(source, f_raw);
        let img = f_src.substitute(target, &padded)?;
        let inv = img.invert().ok_or_else(|| {
            Error::RecognitionFailure(format!(
                "denominator {img} is not invertible in the target ring"
            ))
        })?;
        images.push(inv);
    }
    RingMorphism::new(source, target, images)
}

/// Constructs a chart: restricts the saturated distribution to `D(f)`,
/// computes its first integrals at the degree bound, and certifies it.
pub fn build_chart(
    base: &Distribution,
    id: &str,
    denominator: &Poly,
    degree: u32,
    d_alg: u32,
) -> Result<Chart> {
    let sat;
    let base = if base.is_saturated() {
        base
    } else {
        sat = base.saturate_torsion();
        &sat
    };
    let dist = restrict_to_open(base, denominator)?;
    let algebra = compute_algebra(&dist, degree)?;
    let certificate = crate::stability::certify_chart(id, &dist, &algebra, d_alg)?;
    Ok(Chart {
        id: id.to_string(),
        denominator: denominator.clone(),
        dist,
        algebra,
        certificate,
    })
}

struct OverlapSide {
    localizer: Poly,
    model: SubalgebraModel,
    loc_tag_ring: Arc<PolyRing>,
}

/// Finds `h` in the chart algebra whose inversion realises the overlap
/// algebra as the localisation `(A)_h`, searching 1, the generators, and
/// their pairwise products.
fn recognize_localizer(
    chart: &Chart,
    emb: &RingMorphism,
    overlap_alg: &FirstIntegralAlgebra,
    overlap_ring: &Arc<PolyRing>,
    overlap_model: &SubalgebraModel,
) -> Result<OverlapSide> {
    let gens = chart.algebra.generators();
    let mut candidates: Vec<Poly> = vec![Poly::one(chart.dist.ring())];
    candidates.extend(gens.iter().cloned());
    for i in 0..gens.len() {
        for j in i..gens.len() {
            candidates.push(&gens[i] * &gens[j]);
        }
    }
    let gen_values: Vec<Poly> = gens
        .iter()
        .map(|g| emb.apply(g))
        .collect::<Result<Vec<_>>>()?;
    // chart first integrals restrict to overlap first integrals
    for v in &gen_values {
        if overlap_model.membership(v)?.is_none() {
            return Err(Error::RecognitionFailure(format!(
                "chart generator {v} is not recognised in the overlap algebra; raise the degree bound"
            )));
        }
    }
    'candidates: for h in &candidates {
        if h.is_zero() {
            continue;
        }
        let h_value = emb.apply(h)?;
        let Some(inverse_value) = h_value.invert() else {
            continue;
        };
        // 1/h must itself be an overlap first integral
        if overlap_model.membership(&inverse_value)?.is_none() {
            continue;
        }
        // every overlap generator must be expressible over A ∪ {1/h}
        let mut loc_gens = gen_values.clone();
        loc_gens.push(inverse_value);
        let model = SubalgebraModel::new(overlap_ring, &loc_gens)?;
        for g in overlap_alg.generators() {
            if model.membership(g)?.is_none() {
                continue 'candidates;
            }
        }
        let loc_tag_ring = model.tag_ring().clone();
        return Ok(OverlapSide {
            localizer: h.clone(),
            model,
            loc_tag_ring,
        });
    }
    Err(Error::RecognitionFailure(format!(
        "the overlap algebra of chart {} is not a searched distinguished localisation",
        chart.id
    )))
}

/// Computes the overlap of two charts: the overlap algebra on
/// `D(f_i * f_j)`, localizer recognition on both sides, and the two
/// directed transition maps. `None` when the overlap is empty.
pub fn overlap(
    base: &Distribution,
    chart_i: &Chart,
    chart_j: &Chart,
    degree: u32,
) -> Result<Option<(TransitionMap, TransitionMap)>> {
    let product = &chart_i.denominator * &chart_j.denominator;
    if product.is_zero() {
        return Ok(None);
    }
    let dist_ij = restrict_to_open(base, &product)?;
    let ring_ij = dist_ij.ring().clone();
    let algebra_ij = compute_algebra(&dist_ij, degree)?;
    let overlap_model = SubalgebraModel::new(&ring_ij, algebra_ij.generators())?;

    let emb_i = localization_embedding(chart_i.dist.ring(), &ring_ij)?;
    let emb_j = localization_embedding(chart_j.dist.ring(), &ring_ij)?;

    let side_i = recognize_localizer(chart_i, &emb_i, &algebra_ij, &ring_ij, &overlap_model)?;
    let side_j = recognize_localizer(chart_j, &emb_j, &algebra_ij, &ring_ij, &overlap_model)?;

    // transition i -> j: expressions of the j-side generators in the
    // localised i-side coordinates, and symmetrically
    let mut images_ij = Vec::new();
    for g in chart_j.algebra.generators() {
        let value = emb_j.apply(g)?;
        let expr = side_i.model.membership(&value)?.ok_or_else(|| {
            Error::RecognitionFailure(format!(
                "generator {value} of chart {} has no expression over the localised algebra of chart {}",
                chart_j.id, chart_i.id
            ))
        })?;
        images_ij.push(expr);
    }
    let mut images_ji = Vec::new();
    for g in chart_i.algebra.generators() {
        let value = emb_i.apply(g)?;
        let expr = side_j.model.membership(&value)?.ok_or_else(|| {
            Error::RecognitionFailure(format!(
                "generator {value} of chart {} has no expression over the localised algebra of chart {}",
                chart_i.id, chart_j.id
            ))
        })?;
        images_ji.push(expr);
    }

    let t_ij = TransitionMap {
        from: chart_i.id.clone(),
        to: chart_j.id.clone(),
        overlap_algebra: algebra_ij.clone(),
        localizer_from: side_i.localizer.clone(),
        localizer_to: side_j.localizer.clone(),
        loc_tag_ring: side_i.loc_tag_ring,
        images: images_ij,
        ring: ring_ij.clone(),
    };
    let t_ji = TransitionMap {
        from: chart_j.id.clone(),
        to: chart_i.id.clone(),
        overlap_algebra: algebra_ij,
        localizer_from: side_j.localizer,
        localizer_to: side_i.localizer,
        loc_tag_ring: side_j.loc_tag_ring,
        images: images_ji,
        ring: ring_ij,
    };
    Ok(Some((t_ij, t_ji)))
}

/// One cocycle check on an ordered triple of charts: the direct expression
/// of each k-side generator over the localised i-side coordinates on the
/// triple overlap must agree with the composite through the j-side, as a
/// polynomial identity modulo the relations of the triple-overlap model.
fn check_triple(
    base: &Distribution,
    chart_i: &Chart,
    chart_j: &Chart,
    chart_k: &Chart,
    t_ij: &TransitionMap,
    t_jk: &TransitionMap,
    t_ik: &TransitionMap,
) -> Result<std::result::Result<(), String>> {
    let product = &(&chart_i.denominator * &chart_j.denominator) * &chart_k.denominator;
    let dist_ijk = restrict_to_open(base, &product)?;
    let ring_ijk = dist_ijk.ring().clone();

    let emb_i = localization_embedding(chart_i.dist.ring(), &ring_ijk)?;
    let emb_j = localization_embedding(chart_j.dist.ring(), &ring_ijk)?;
    let emb_k = localization_embedding(chart_k.dist.ring(), &ring_ijk)?;

    // the i-side coordinate model of V_ij ∩ V_ik: A_i with both pairwise
    // localizers inverted
    let mut loc_gens: Vec<Poly> = chart_i
        .algebra
        .generators()
        .iter()
        .map(|g| emb_i.apply(g))
        .collect::<Result<Vec<_>>>()?;
    for h in [&t_ij.localizer_from, &t_ik.localizer_from] {
        let value = emb_i.apply(h)?;
        let inv = value.invert().ok_or_else(|| {
            Error::RecognitionFailure(
                "pairwise localizer not invertible on the triple overlap".into(),
            )
        })?;
        loc_gens.push(inv);
    }
    let model = SubalgebraModel::new(&ring_ijk, &loc_gens)?;

    // expressions of the j-side coordinates over the i-side model
    let mut j_images = Vec::new();
    for g in chart_j.algebra.generators() {
        let value = emb_j.apply(g)?;
        match model.membership(&value)? {
            Some(expr) => j_images.push(expr),
            None => {
                return Ok(Err(format!(
                    "generator {value} of chart {} has no i-side expression on the triple overlap",
                    chart_j.id
                )))
            }
        }
    }
    let h_jk_value = emb_j.apply(&t_jk.localizer_from)?;
    let inv_jk = match h_jk_value.invert() {
        Some(v) => v,
        None => {
            return Ok(Err(format!(
                "localizer {h_jk_value} of the ({}, {}) overlap is not invertible on the triple overlap",
                chart_j.id, chart_k.id
            )))
        }
    };
    let s_image = match model.membership(&inv_jk)? {
        Some(expr) => expr,
        None => {
            return Ok(Err(format!(
                "inverse localizer of the ({}, {}) overlap has no i-side expression",
                chart_j.id, chart_k.id
            )))
        }
    };

    let relations = model.relations()?;
    for (a, g) in chart_k.algebra.generators().iter().enumerate() {
        // direct expression of the k-side generator
        let value = emb_k.apply(g)?;
        let direct = match model.membership(&value)? {
            Some(expr) => expr,
            None => {
                return Ok(Err(format!(
                    "generator {value} of chart {} has no i-side expression on the triple overlap",
                    chart_k.id
                )))
            }
        };
        // composite through the j side: t_jk images live in Q[t^j.., s]
        let mut substitution = j_images.clone();
        substitution.push(s_image.clone());
        let composite = t_jk.images[a].substitute(model.tag_ring(), &substitution)?;
        let difference = &direct - &composite;
        if !relations.contains(&difference)? {
            return Ok(Err(format!(
                "generator {} of chart {}: direct {direct} differs from composite {composite}",
                a + 1,
                chart_k.id
            )));
        }
    }
    Ok(Ok(()))
}

/// Surjectivity of `A_i ⊗ A_j -> A_ij` for every overlapping pair: the
/// standard criterion for separatedness of a gluing along opens.
pub fn separatedness_check(
    charts: &[Chart],
    transitions: &[TransitionMap],
) -> Result<Separatedness> {
    for t in transitions {
        // consider each unordered pair once
        let Some(i) = charts.iter().position(|c| c.id == t.from) else {
            continue;
        };
        let Some(j) = charts.iter().position(|c| c.id == t.to) else {
            continue;
        };
        if i >= j {
            continue;
        }
        let emb_i = localization_embedding(charts[i].dist.ring(), &t.ring)?;
        let emb_j = localization_embedding(charts[j].dist.ring(), &t.ring)?;
        let mut joint: Vec<Poly> = Vec::new();
        for g in charts[i].algebra.generators() {
            joint.push(emb_i.apply(g)?);
        }
        for g in charts[j].algebra.generators() {
            joint.push(emb_j.apply(g)?);
        }
        let model = SubalgebraModel::new(&t.ring, &joint)?;
        for g in t.overlap_algebra.generators() {
            if model.membership(g)?.is_none() {
                return Ok(Separatedness::No {
                    pair: (charts[i].id.clone(), charts[j].id.clone()),
                    witness: g.clone(),
                });
            }
        }
    }
    Ok(Separatedness::Yes)
}

fn classify(charts: &[Chart], transitions: &[TransitionMap], separated: &Separatedness) -> String {
    if charts.len() == 1 {
        let alg = &charts[0].algebra;
        if alg.relations().generators().is_empty() {
            return match alg.generators().len() {
                0 => "point".to_string(),
                1 => "affine line".to_string(),
                2 => "affine plane".to_string(),
                m => format!("affine {m}-space"),
            };
        }
        return "unclassified".to_string();
    }
    if charts.len() == 2
        && charts.iter().all(|c| {
            c.algebra.generators().len() == 1 && c.algebra.relations().generators().is_empty()
        })
    {
        // realise both generators on the overlap and compare
        if let Some(t) = transitions.first() {
            let emb_0 = localization_embedding(charts[0].dist.ring(), &t.ring);
            let emb_1 = localization_embedding(charts[1].dist.ring(), &t.ring);
            if let (Ok(e0), Ok(e1)) = (emb_0, emb_1) {
                let g0 = e0.apply(&charts[0].algebra.generators()[0]);
                let g1 = e1.apply(&charts[1].algebra.generators()[0]);
                if let (Ok(g0), Ok(g1)) = (g0, g1) {
                    let product = &g0 * &g1;
                    if product.is_one() && separated.is_separated() {
                        return "projective line".to_string();
                    }
                    if g0 == g1 && !separated.is_separated() {
                        return "line with doubled origin".to_string();
                    }
                }
            }
        }
    }
    "unclassified".to_string()
}

/// Assembles certified charts into an atlas: pairwise overlaps, cocycle
/// verification on all ordered triples, separatedness, classification.
pub fn build_atlas(base: &Distribution, charts: Vec<Chart>, degree: u32) -> Result<Atlas> {
    let uncertified: Vec<&str> = charts
        .iter()
        .filter(|c| !c.certificate.is_verified())
        .map(|c| c.id.as_str())
        .collect();
    if !uncertified.is_empty() {
        return Err(Error::ChartNotCertified(uncertified.join(", ")));
    }

    // pairwise overlaps, in parallel over unordered pairs
    let pairs: Vec<(usize, usize)> = crate::diffmod::combinations(charts.len(), 2)
        .into_iter()
        .map(|c| (c[0], c[1]))
        .collect();
    let computed: Vec<Result<Option<(TransitionMap, TransitionMap)>>> =
        exec::map_collect(&pairs, |&(i, j)| overlap(base, &charts[i], &charts[j], degree));
    let mut transitions: Vec<TransitionMap> = Vec::new();
    for r in computed {
        if let Some((t_ij, t_ji)) = r? {
            transitions.push(t_ij);
            transitions.push(t_ji);
        }
    }

    // cocycle conditions on every ordered triple of distinct charts
    let mut cocycle_ok = true;
    let mut cocycle_witness = None;
    let find = |from: &str, to: &str| -> Option<&TransitionMap> {
        transitions.iter().find(|t| t.from == from && t.to == to)
    };
    'triples: for i in 0..charts.len() {
        for j in 0..charts.len() {
            for k in 0..charts.len() {
                if i == j || j == k || i == k {
                    continue;
                }
                let (Some(t_ij), Some(t_jk), Some(t_ik)) = (
                    find(&charts[i].id, &charts[j].id),
                    find(&charts[j].id, &charts[k].id),
                    find(&charts[i].id, &charts[k].id),
                ) else {
                    continue;
                };
                match check_triple(base, &charts[i], &charts[j], &charts[k], t_ij, t_jk, t_ik)? {
                    Ok(()) => {}
                    Err(witness) => {
                        cocycle_ok = false;
                        cocycle_witness = Some(format!(
                            "triple ({}, {}, {}): {witness}",
                            charts[i].id, charts[j].id, charts[k].id
                        ));
                        break 'triples;
                    }
                }
            }
        }
    }

    let separated = separatedness_check(&charts, &transitions)?;
    let classification = classify(&charts, &transitions, &separated);
    Ok(Atlas {
        charts,
        transitions,
        cocycle_ok,
        cocycle_witness,
        separated,
        classification,
    })
}

/// Report on one fibre of a chart map, checked at desk scale.
#[derive(Debug, Clone)]
pub struct LeafReport {
    pub chart_id: String,
    pub point: Vec<Coef>,
    /// canonical generators of the fibre ideal (reduced basis elements that
    /// do not collapse into the localisation ideal)
    pub ideal: Vec<Poly>,
    pub dimension: Option<usize>,
    pub expected_dimension: usize,
    pub smooth: bool,
    /// irreducibility heuristic; `None` when inconclusive
    pub irreducible: Option<bool>,
    pub tangent: bool,
}

impl LeafReport {
    pub fn passes(&self) -> bool {
        self.dimension == Some(self.expected_dimension)
            && self.smooth
            && self.irreducible != Some(false)
            && self.tangent
    }
}

fn irreducibility_heuristic(ring: &Arc<PolyRing>, gens: &[Poly]) -> Option<bool> {
    if gens.is_empty() {
        return Some(true);
    }
    if gens.iter().all(|g| g.total_degree() == Some(1)) {
        return Some(true);
    }
    if gens.len() == 1 {
        let p = &gens[0];
        for v in 0..ring.num_vars() {
            let degv = p.raw().keys().map(|m| m.0[v]).max().unwrap_or(0);
            if degv != 1 {
                continue;
            }
            // p = q * x_v + r
            let mut q = arith::zero();
            let mut r = arith::zero();
            for (m, c) in p.raw() {
                if m.0[v] == 1 {
                    let mut m2 = m.clone();
                    m2.0[v] = 0;
                    arith::add_assign_term(&mut q, &m2, c);
                } else {
                    arith::add_assign_term(&mut r, m, c);
                }
            }
            let q = Poly::from_raw_unreduced(ring, q);
            let r = Poly::from_raw_unreduced(ring, r);
            if q.as_constant().is_some() {
                return Some(true);
            }
            if r.is_zero() {
                return Some(false);
            }
            if r.as_constant().is_some() {
                return Some(true);
            }
        }
    }
    None
}

/// The fibre of the chart map over a rational point of the quotient: the
/// ideal `(g_i - c_i)`, with dimension, smoothness, irreducibility and
/// tangency checks.
pub fn leaf_fibre(chart: &Chart, point: &[Coef]) -> Result<LeafReport> {
    let gens = chart.algebra.generators();
    if point.len() != gens.len() {
        return Err(Error::Invalid(format!(
            "expected {} coordinates, got {}",
            gens.len(),
            point.len()
        )));
    }
    let ring = chart.dist.ring();
    let cut: Vec<Poly> = gens
        .iter()
        .zip(point)
        .map(|(g, c)| g - &Poly::constant(ring, c.clone()))
        .collect();
    let ideal = Ideal::new(ring, cut.clone())?;
    let dimension = ideal.dimension();
    let expected_dimension = chart.dist.rank();

    // smoothness by the Jacobian criterion in the ambient affine space of
    // all chart variables, localisation relations included
    let basis = ideal.groebner_basis();
    let nvars = ring.num_vars();
    let smooth = match dimension {
        None => true, // empty fibre
        Some(dim) => {
            let rows: Vec<Vec<Poly>> = basis
                .iter()
                .map(|g| {
                    (0..nvars)
                        .map(|v| Poly::from_raw_unreduced(ring, arith::derivative(g.raw(), v)))
                        .collect()
                })
                .collect();
            let codim = nvars - dim;
            let mut sing_gens: Vec<Poly> = basis.clone();
            let k = rows.len();
            if codim > 0 && codim <= k.min(nvars) {
                for rsel in crate::diffmod::combinations(k, codim) {
                    for csel in crate::diffmod::combinations(nvars, codim) {
                        let det = crate::foliation::matrix_minor_det(ring, &rows, &rsel, &csel);
                        if !det.is_zero() {
                            sing_gens.push(det);
                        }
                    }
                }
            }
            Ideal::new(ring, sing_gens)?.is_unit()
        }
    };

    // displayed ideal: basis elements that survive canonicalisation
    let displayed: Vec<Poly> = basis
        .iter()
        .map(|g| Poly::from_raw(ring, g.raw().clone()))
        .filter(|g| !g.is_zero())
        .collect();

    let irreducible = irreducibility_heuristic(ring, &displayed);

    // tangency: every relation one-form lies in the span of the d(g_i - c_i)
    // modulo the fibre ideal
    let order = *ring.order();
    let n = ring.base_vars();
    let mut tangent_gens: Vec<crate::diffmod::modvec::ModVec> = cut
        .iter()
        .map(|g| crate::diffmod::OneForm::d(g).to_modvec())
        .collect();
    for q in &basis {
        for pos in 0..n {
            tangent_gens.push(crate::diffmod::modvec::unit(n, pos, q.raw()));
        }
    }
    for r in ring.relation_gens() {
        for pos in 0..n {
            tangent_gens.push(crate::diffmod::modvec::unit(n, pos, &r));
        }
    }
    let tangent_gb = crate::diffmod::modvec::buchberger(&tangent_gens, &order);
    let tangent = chart.dist.relations().iter().all(|omega| {
        let nf = crate::diffmod::modvec::normal_form(&omega.to_modvec(), &tangent_gb, &order);
        nf.iter().all(|c| c.is_empty())
    });

    Ok(LeafReport {
        chart_id: chart.id.clone(),
        point: point.to_vec(),
        ideal: displayed,
        dimension,
        expected_dimension,
        smooth,
        irreducible,
        tangent,
    })
}

/// Deterministic sequence of small-height rationals used to sample fibre
/// points: 1, -1, 2, -2, 1/2, -1/2, 3, ...
pub fn small_rationals(count: usize) -> Vec<Coef> {
    let mut out = Vec::new();
    let mut k: i64 = 1;
    while out.len() < count {
        out.push(crate::poly::coef_int(k));
        if out.len() < count {
            out.push(crate::poly::coef_int(-k));
        }
        if out.len() < count && k > 1 {
            out.push(crate::poly::coef_ratio(1, k));
        }
        if out.len() < count && k > 1 {
            out.push(crate::poly::coef_ratio(-1, k));
        }
        k += 1;
    }
    out.truncate(count);
    out
}

/// Exactness at the testable level: the full degree-bounded kernel on each
/// chart lies in the subalgebra generated by the chart's generators.
pub fn kernel_exactness_check(chart: &Chart, degree: u32) -> Result<bool> {
    let model = SubalgebraModel::new(chart.dist.ring(), chart.algebra.generators())?;
    for p in kernel_space(&chart.dist, degree) {
        if p.as_constant().is_some() {
            continue;
        }
        if model.membership(&p)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffmod::OneForm;
    use crate::poly::coef_int;

    fn base_dist(exprs: &[&str]) -> Distribution {
        let ring = PolyRing::new(&["x", "y"]).unwrap();
        let coeffs = exprs.iter().map(|e| ring.parse(e).unwrap()).collect();
        let form = OneForm::new(&ring, coeffs).unwrap();
        Distribution::new(&ring, vec![form]).unwrap()
    }

    fn charts_xy(base: &Distribution) -> Vec<Chart> {
        let ring = base.ring();
        vec![
            build_chart(base, "D(x)", &ring.parse("x").unwrap(), 2, 3).unwrap(),
            build_chart(base, "D(y)", &ring.parse("y").unwrap(), 2, 3).unwrap(),
        ]
    }

    #[test]
    fn radii_atlas_is_projective_line() {
        let base = base_dist(&["-y", "x"]).saturate_torsion();
        let charts = charts_xy(&base);
        assert!(charts.iter().all(|c| c.certificate.is_verified()));
        let atlas = build_atlas(&base, charts, 2).unwrap();
        assert!(atlas.cocycle_ok);
        assert!(atlas.separated.is_separated());
        assert_eq!(atlas.classification, "projective line");
        assert_eq!(atlas.transitions.len(), 2);
        // the transition sends the D(y) coordinate to 1/u
        let t = &atlas.transitions[0];
        assert_eq!(t.localizer_from.to_string(), "y/x");
        assert_eq!(t.images.len(), 1);
    }

    #[test]
    fn hyperbolae_atlas_is_doubled_line() {
        let base = base_dist(&["y", "x"]).saturate_torsion();
        let charts = charts_xy(&base);
        assert!(charts.iter().all(|c| c.certificate.is_verified()));
        let atlas = build_atlas(&base, charts, 2).unwrap();
        assert!(atlas.cocycle_ok);
        match &atlas.separated {
            Separatedness::No { witness, .. } => {
                assert_eq!(witness.to_string(), "1/(x*y)");
            }
            Separatedness::Yes => panic!("hyperbola atlas must not be separated"),
        }
        assert_eq!(atlas.classification, "line with doubled origin");
    }

    #[test]
    fn parabola_single_chart_atlas() {
        let base = base_dist(&["-2*x", "1"]).saturate_torsion();
        let ring = base.ring();
        let chart = build_chart(&base, "X", &ring.parse("1").unwrap(), 2, 3).unwrap();
        assert!(chart.certificate.is_verified());
        let atlas = build_atlas(&base, vec![chart], 2).unwrap();
        assert!(atlas.cocycle_ok);
        assert!(atlas.separated.is_separated());
        assert_eq!(atlas.classification, "affine line");
    }

    #[test]
    fn uncertified_chart_rejected() {
        let base = base_dist(&["y", "x"]).saturate_torsion();
        let ring = base.ring();
        let chart = build_chart(&base, "X", &ring.parse("1").unwrap(), 2, 3).unwrap();
        assert!(!chart.certificate.is_verified());
        match build_atlas(&base, vec![chart], 2) {
            Err(Error::ChartNotCertified(ids)) => assert_eq!(ids, "X"),
            other => panic!("expected certification error, got {other:?}"),
        }
    }

    #[test]
    fn parabola_leaf_fibres() {
        let base = base_dist(&["-2*x", "1"]).saturate_torsion();
        let ring = base.ring();
        let chart = build_chart(&base, "X", &ring.parse("1").unwrap(), 2, 3).unwrap();
        // fibre over c = 0 is the parabola y = x^2
        let report = leaf_fibre(&chart, &[coef_int(0)]).unwrap();
        assert_eq!(report.dimension, Some(1));
        assert!(report.smooth);
        assert_eq!(report.irreducible, Some(true));
        assert!(report.tangent);
        assert!(report.passes());
        assert_eq!(report.ideal.len(), 1);
        assert_eq!(report.ideal[0].to_string(), "x^2 - y");
    }

    #[test]
    fn hyperbola_leaf_on_chart() {
        let base = base_dist(&["y", "x"]).saturate_torsion();
        let ring = base.ring();
        let chart = build_chart(&base, "D(x)", &ring.parse("x").unwrap(), 2, 3).unwrap();
        let report = leaf_fibre(&chart, &[coef_int(1)]).unwrap();
        assert!(report.passes(), "{report:?}");
        // the fibre ideal is (xy - 1) in the localised ring
        let ideal = Ideal::new(chart.dist.ring(), report.ideal.clone()).unwrap();
        let xy1 = Poly::var(chart.dist.ring(), "x").unwrap();
        let y = Poly::var(chart.dist.ring(), "y").unwrap();
        let gen = &(&xy1 * &y) - &Poly::one(chart.dist.ring());
        assert!(ideal.contains(&gen).unwrap());
    }

    #[test]
    fn kernel_exactness_on_charts() {
        let base = base_dist(&["-y", "x"]).saturate_torsion();
        let charts = charts_xy(&base);
        for c in &charts {
            assert!(kernel_exactness_check(c, 2).unwrap());
        }
    }
}
