//! Rings of first integrals on a chart, computed by degree-bounded linear
//! algebra, with generator extraction, relation ideals and subalgebra
//! membership through tag variables.

use crate::diffmod::{Distribution, OneForm};
use crate::exec;
use crate::poly::arith::{self, TermMap};
use crate::poly::groebner;
use crate::poly::linalg::QMatrix;
use crate::poly::{check_same_ring, monomials_up_to, Coef, Ideal, Monomial, MonomialOrder, Poly, PolyRing};
use crate::{Error, Result};
use num_traits::One;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

/// A finitely generated subalgebra of first integrals: generators in the
/// chart ring, a tag ring `Q[t1..tm]`, and the kernel of `t_i -> g_i` as
/// the relation ideal. `complete` is the heuristic certificate that the
/// generators exhaust the ring of first integrals at the search bound.
#[derive(Debug, Clone)]
pub struct FirstIntegralAlgebra {
    pub(crate) ambient: Arc<PolyRing>,
    pub(crate) generators: Vec<Poly>,
    pub(crate) tag_ring: Arc<PolyRing>,
    pub(crate) relations: Ideal,
    pub(crate) degree_bound: u32,
    pub(crate) complete: bool,
}

impl FirstIntegralAlgebra {
    pub fn ambient(&self) -> &Arc<PolyRing> {
        &self.ambient
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn tag_ring(&self) -> &Arc<PolyRing> {
        &self.tag_ring
    }

    pub fn relations(&self) -> &Ideal {
        &self.relations
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// The embedding `Q[t1..tm]/relations -> B`, `t_i -> g_i`.
    pub fn embedding(&self) -> Result<crate::foliation::RingMorphism> {
        crate::foliation::RingMorphism::with_relations(
            &self.tag_ring,
            self.relations.generators().to_vec(),
            &self.ambient,
            self.generators.clone(),
        )
    }

    /// Evaluates a tag polynomial at the generators.
    pub fn realize(&self, p: &Poly) -> Result<Poly> {
        check_same_ring(&self.tag_ring, p.ring(), "tag polynomial")?;
        p.substitute(&self.ambient, &self.generators)
    }

    /// Membership of `b` in `Q[g1..gm]`: the witnessing tag polynomial, in
    /// canonical form modulo the relation ideal, or `None`.
    pub fn subalgebra_membership(&self, b: &Poly) -> Result<Option<Poly>> {
        let model = SubalgebraModel::new(&self.ambient, &self.generators)?;
        model.membership(b)
    }
}

/// Tag-variable membership model: the combined ring `[ambient vars, tags]`
/// under a block order eliminating the ambient block, with the Gröbner
/// basis of `(t_i - g_i) + (localisation relations)`.
pub(crate) struct SubalgebraModel {
    ambient: Arc<PolyRing>,
    tag_ring: Arc<PolyRing>,
    order: MonomialOrder,
    gb: Vec<TermMap>,
    ambient_vars: usize,
}

pub(crate) fn fresh_tag_names(ambient: &PolyRing, count: usize) -> Vec<String> {
    let mut prefix = "t".to_string();
    loop {
        let names: Vec<String> = (1..=count).map(|i| format!("{prefix}{i}")).collect();
        if names.iter().all(|n| ambient.var_index(n).is_none()) {
            return names;
        }
        prefix.push('t');
    }
}

impl SubalgebraModel {
    pub(crate) fn new(ambient: &Arc<PolyRing>, gens: &[Poly]) -> Result<SubalgebraModel> {
        for g in gens {
            check_same_ring(ambient, g.ring(), "subalgebra generator")?;
        }
        let n = ambient.num_vars();
        let m = gens.len();
        let tag_names = fresh_tag_names(ambient, m);
        let mut combined_vars: Vec<String> = ambient.vars().to_vec();
        combined_vars.extend(tag_names.iter().cloned());
        let order = MonomialOrder::Block { split: n };
        let total = n + m;
        let mut raw_gens: Vec<TermMap> = Vec::with_capacity(m);
        for (i, g) in gens.iter().enumerate() {
            let mut rel = arith::var(n + i, total);
            let img = arith::extend_vars(g.raw(), total);
            rel = arith::sub(&rel, &img);
            raw_gens.push(rel);
        }
        for r in ambient.relation_gens() {
            raw_gens.push(arith::extend_vars(&r, total));
        }
        let gb = groebner::buchberger(&raw_gens, &order);
        let tag_ring = PolyRing::new(&tag_names)?;
        Ok(SubalgebraModel {
            ambient: ambient.clone(),
            tag_ring,
            order,
            gb,
            ambient_vars: n,
        })
    }

    pub(crate) fn tag_ring(&self) -> &Arc<PolyRing> {
        &self.tag_ring
    }

    /// `Some(p)` with `p(g1..gm) = b` iff `b` lies in the subalgebra; the
    /// witness is canonical modulo the relation ideal.
    pub(crate) fn membership(&self, b: &Poly) -> Result<Option<Poly>> {
        check_same_ring(&self.ambient, b.ring(), "membership argument")?;
        let total = self.ambient_vars + self.tag_ring.num_vars();
        let ext = arith::extend_vars(b.raw(), total);
        let nf = groebner::normal_form(&ext, &self.gb, &self.order);
        let tag_only = nf
            .keys()
            .all(|mono| mono.0[..self.ambient_vars].iter().all(|&e| e == 0));
        if !tag_only {
            return Ok(None);
        }
        let shifted: TermMap = nf
            .iter()
            .map(|(mono, c)| {
                (
                    Monomial(mono.0[self.ambient_vars..].to_vec()),
                    c.clone(),
                )
            })
            .collect();
        Ok(Some(Poly::from_raw(&self.tag_ring, shifted)))
    }

    /// Relation ideal of the generators: the tag-block elements of the
    /// basis, in the tag ring.
    pub(crate) fn relations(&self) -> Result<Ideal> {
        let mut gens = Vec::new();
        for g in &self.gb {
            if g.keys()
                .all(|mono| mono.0[..self.ambient_vars].iter().all(|&e| e == 0))
            {
                let shifted: TermMap = g
                    .iter()
                    .map(|(mono, c)| {
                        (
                            Monomial(mono.0[self.ambient_vars..].to_vec()),
                            c.clone(),
                        )
                    })
                    .collect();
                gens.push(Poly::from_raw(&self.tag_ring, shifted));
            }
        }
        Ideal::new(&self.tag_ring, gens)
    }
}

/// Candidate monomials on the chart: base-variable degree at most `degree`,
/// inverse-variable exponents at most `degree` each; deduplicated canonical
/// forms.
fn candidate_monomials(ring: &Arc<PolyRing>, degree: u32) -> Vec<Poly> {
    let base = monomials_up_to(ring.base_vars(), degree);
    let mut inv_tuples: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..ring.num_inverted() {
        let mut next = Vec::new();
        for t in &inv_tuples {
            for e in 0..=degree {
                let mut t2 = t.clone();
                t2.push(e);
                next.push(t2);
            }
        }
        inv_tuples = next;
    }
    let mut seen: BTreeSet<TermMap> = BTreeSet::new();
    let mut out = Vec::new();
    for b in &base {
        for t in &inv_tuples {
            let mut exps = b.0.clone();
            exps.extend(t.iter().copied());
            let mut raw = arith::zero();
            arith::add_assign_term(&mut raw, &Monomial(exps), &Coef::one());
            let p = Poly::from_raw(ring, raw);
            if p.is_zero() {
                continue;
            }
            if seen.insert(p.raw().clone()) {
                out.push(p);
            }
        }
    }
    out
}

/// Echelonises a list of polynomials viewed as vectors over their monomial
/// support (columns in decreasing ring order, so each basis element is
/// monic in its leading monomial). Returns the basis sorted by increasing
/// leading monomial.
fn echelonize(ring: &Arc<PolyRing>, polys: Vec<Poly>) -> Vec<Poly> {
    let mut support: Vec<Monomial> = {
        let mut s: BTreeSet<Monomial> = BTreeSet::new();
        for p in &polys {
            s.extend(p.raw().keys().cloned());
        }
        s.into_iter().collect()
    };
    let order = *ring.order();
    support.sort_by(|a, b| order.cmp(b, a));
    let col_of: BTreeMap<&Monomial, usize> = support
        .iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let mut mat = QMatrix::zero(polys.len(), support.len());
    for (r, p) in polys.iter().enumerate() {
        for (m, c) in p.raw() {
            mat.set(r, col_of[m], c.clone());
        }
    }
    mat.rref();
    let mut out = Vec::new();
    for r in 0..polys.len() {
        let mut raw = arith::zero();
        for (c, m) in support.iter().enumerate() {
            let v = mat.at(r, c);
            if !num_traits::Zero::is_zero(v) {
                arith::add_assign_term(&mut raw, m, v);
            }
        }
        if !raw.is_empty() {
            out.push(Poly::from_raw_unreduced(ring, raw));
        }
    }
    out.sort_by(|a, b| {
        let la = a.leading_monomial().expect("nonzero");
        let lb = b.leading_monomial().expect("nonzero");
        order.cmp(&la, &lb)
    });
    out
}

/// Basis of the space of first integrals of degree at most `degree` on the
/// chart, echelonised deterministically. Always contains 1.
pub fn kernel_space(dist: &Distribution, degree: u32) -> Vec<Poly> {
    let ring = dist.ring();
    let candidates = candidate_monomials(ring, degree);
    let diffs: Vec<OneForm> =
        exec::map_collect(&candidates, |p| dist.foliated_d(p).expect("same ring"));
    let mut row_keys: BTreeSet<(usize, Monomial)> = BTreeSet::new();
    for d in &diffs {
        for (pos, coeff) in d.coeffs().iter().enumerate() {
            for m in coeff.raw().keys() {
                row_keys.insert((pos, m.clone()));
            }
        }
    }
    let row_of: BTreeMap<&(usize, Monomial), usize> = row_keys
        .iter()
        .enumerate()
        .map(|(i, k)| (k, i))
        .collect();
    let mut mat = QMatrix::zero(row_keys.len(), candidates.len());
    for (c, d) in diffs.iter().enumerate() {
        for (pos, coeff) in d.coeffs().iter().enumerate() {
            for (m, v) in coeff.raw() {
                mat.set(row_of[&(pos, m.clone())], c, v.clone());
            }
        }
    }
    let null = mat.nullspace();
    let combos: Vec<Poly> = null
        .iter()
        .map(|coeffs| {
            let mut acc = Poly::zero(ring);
            for (i, c) in coeffs.iter().enumerate() {
                if !num_traits::Zero::is_zero(c) {
                    acc = &acc + &candidates[i].scale(c);
                }
            }
            acc
        })
        .collect();
    echelonize(ring, combos)
}

fn is_constant(p: &Poly) -> bool {
    p.as_constant().is_some()
}

/// Sort key for greedy generator extraction: lowest total degree first,
/// larger leading monomial first within a degree.
fn generator_order(order: &MonomialOrder, a: &Poly, b: &Poly) -> std::cmp::Ordering {
    let da = a.total_degree().unwrap_or(0);
    let db = b.total_degree().unwrap_or(0);
    da.cmp(&db).then_with(|| {
        let la = a.leading_monomial().expect("nonzero");
        let lb = b.leading_monomial().expect("nonzero");
        order.cmp(&lb, &la)
    })
}

/// Computes the ring of first integrals on the chart up to the degree
/// bound: a reduced generator set, its relation ideal, and the completeness
/// certificate (relation dimension equals the corank and the next degree
/// adds nothing modulo the found subalgebra).
pub fn compute_algebra(dist: &Distribution, degree: u32) -> Result<FirstIntegralAlgebra> {
    let sat;
    let dist = if dist.is_saturated() {
        dist
    } else {
        sat = dist.saturate_torsion();
        &sat
    };
    let ring = dist.ring();
    let order = *ring.order();
    let kernel = kernel_space(dist, degree);
    let mut candidates: Vec<Poly> = kernel.into_iter().filter(|p| !is_constant(p)).collect();
    candidates.sort_by(|a, b| generator_order(&order, a, b));

    let mut gens: Vec<Poly> = Vec::new();
    for c in &candidates {
        let model = SubalgebraModel::new(ring, &gens)?;
        if model.membership(c)?.is_none() {
            gens.push(c.clone());
        }
    }
    // reduction pass: drop any generator lying in the subalgebra of the
    // others, most complex first, until stable
    loop {
        let mut removed = false;
        for i in (0..gens.len()).rev() {
            let others: Vec<Poly> = gens
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, g)| g.clone())
                .collect();
            let model = SubalgebraModel::new(ring, &others)?;
            if model.membership(&gens[i])?.is_some() {
                gens.remove(i);
                removed = true;
                break;
            }
        }
        if !removed {
            break;
        }
    }

    let model = SubalgebraModel::new(ring, &gens)?;
    let relations = model.relations()?;
    let tag_ring = model.tag_ring().clone();

    // completeness certificate
    let dim_matches = relations.dimension() == Some(dist.corank());
    let complete = if dim_matches {
        let next = kernel_space(dist, degree + 1);
        let checks = exec::map_collect(&next, |p| {
            if is_constant(p) {
                Ok(true)
            } else {
                model.membership(p).map(|m| m.is_some())
            }
        });
        checks
            .into_iter()
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .all(|b| b)
    } else {
        false
    };

    for g in &gens {
        debug_assert!(dist.foliated_d(g)?.is_zero());
    }

    Ok(FirstIntegralAlgebra {
        ambient: ring.clone(),
        generators: gens,
        tag_ring,
        relations,
        degree_bound: degree,
        complete,
    })
}

/// Outcome of a randomized probe.
#[derive(Debug, Clone)]
pub enum ProbeOutcome {
    Pass,
    Fail { polynomial: String, root: Poly },
}

impl ProbeOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, ProbeOutcome::Pass)
    }
}

/// Property probe for algebraic closedness of the first integrals in the
/// chart ring: random monic polynomials with coefficients in the algebra
/// paired with roots built from products of known first integrals; every
/// such root must itself be a first integral.
pub fn closedness_probe(
    alg: &FirstIntegralAlgebra,
    dist: &Distribution,
    samples: u32,
    dmax: u32,
    seed: u64,
) -> Result<ProbeOutcome> {
    check_same_ring(&alg.ambient, dist.ring(), "closedness_probe")?;
    let mut rng = StdRng::seed_from_u64(seed);
    if alg.generators.is_empty() {
        return Ok(ProbeOutcome::Pass);
    }
    let small: [i64; 5] = [1, -1, 2, -2, 3];
    for _ in 0..samples {
        // root from a product of generators and a small scalar
        let mut b = Poly::int(&alg.ambient, small[rng.gen_range(0..small.len())]);
        let factors = rng.gen_range(1..=2usize);
        for _ in 0..factors {
            let g = &alg.generators[rng.gen_range(0..alg.generators.len())];
            let e = rng.gen_range(1..=2u32);
            b = &b * &g.pow(e);
        }
        let e = rng.gen_range(1..=dmax.max(1));
        // p(t) = t^e - b^e is monic with coefficients in the algebra and
        // has b as a root
        let be = b.pow(e);
        if !dist.foliated_d(&b)?.is_zero() {
            return Ok(ProbeOutcome::Fail {
                polynomial: format!("t^{e} - ({be})"),
                root: b,
            });
        }
    }
    Ok(ProbeOutcome::Pass)
}

/// Checks that first integrals found on the distinguished open `D(f)` all
/// lie in the localisation at `f` of the first integrals of the chart:
/// returns `None` on pass, or the first offending generator.
pub fn localization_check(
    dist: &Distribution,
    f: &Poly,
    degree: u32,
) -> Result<Option<Poly>> {
    check_same_ring(dist.ring(), f.ring(), "localization_check")?;
    if !dist.foliated_d(f)?.is_zero() {
        return Err(Error::Invalid(format!(
            "localization_check denominator {f} is not a first integral"
        )));
    }
    let global = compute_algebra(dist, degree)?;
    let restricted = crate::foliation::restrict_to_open(dist, f)?;
    if restricted.ring() == dist.ring() {
        return Ok(None);
    }
    let local = compute_algebra(&restricted, degree)?;
    let chart = restricted.ring();
    let mut gens: Vec<Poly> = global
        .generators
        .iter()
        .map(|g| g.embed(chart))
        .collect::<Result<Vec<_>>>()?;
    gens.push(Poly::inverse_var(chart, chart.num_inverted() - 1));
    let model = SubalgebraModel::new(chart, &gens)?;
    for g in local.generators() {
        if model.membership(g)?.is_none() {
            return Ok(Some(g.clone()));
        }
    }
    Ok(None)
}

/// Membership of `b` in the subalgebra of `ambient` generated by `gens`.
pub fn subalgebra_membership_in(
    ambient: &Arc<PolyRing>,
    gens: &[Poly],
    b: &Poly,
) -> Result<Option<Poly>> {
    SubalgebraModel::new(ambient, gens)?.membership(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffmod::OneForm;
    use crate::foliation::restrict_to_open;

    fn dist2(exprs: &[&str]) -> (Arc<PolyRing>, Distribution) {
        let ring = PolyRing::new(&["x", "y"]).unwrap();
        let coeffs = exprs.iter().map(|e| ring.parse(e).unwrap()).collect();
        let form = OneForm::new(&ring, coeffs).unwrap();
        let dist = Distribution::new(&ring, vec![form]).unwrap();
        (ring, dist)
    }

    #[test]
    fn kernel_space_paper_examples() {
        // parabola at D=2: span{1, y - x^2}, dimension 2
        let (ring, parabola) = dist2(&["-2*x", "1"]);
        let k = kernel_space(&parabola, 2);
        assert_eq!(k.len(), 2);
        assert!(k[0].is_one());
        assert_eq!(k[1], ring.parse("x^2 - y").unwrap());

        // radii on the whole plane at D=6: only constants
        let (_, radii) = dist2(&["-y", "x"]);
        let k = kernel_space(&radii, 6);
        assert_eq!(k.len(), 1);
        assert!(k[0].is_one());

        // hyperbolae at D=2: span{1, xy}
        let (ring, hyper) = dist2(&["y", "x"]);
        let k = kernel_space(&hyper, 2);
        assert_eq!(k.len(), 2);
        assert_eq!(k[1], ring.parse("x*y").unwrap());
    }

    #[test]
    fn kernel_space_nested() {
        // kernel_space(D) is contained in kernel_space(D+1)
        let (_, hyper) = dist2(&["y", "x"]);
        for d in 0..4 {
            let smaller = kernel_space(&hyper, d);
            let bigger = kernel_space(&hyper, d + 1);
            let model_ring = hyper.ring();
            let model = SubalgebraModel::new(model_ring, &bigger).unwrap();
            for p in &smaller {
                assert!(model.membership(p).unwrap().is_some());
            }
        }
    }

    #[test]
    fn compute_algebra_on_charts() {
        // radii on D(x) at D=2: single generator y/x, no relations
        let (ring, radii) = dist2(&["-y", "x"]);
        let dx = restrict_to_open(&radii, &ring.parse("x").unwrap()).unwrap();
        let alg = compute_algebra(&dx, 2).unwrap();
        assert_eq!(alg.generators().len(), 1);
        assert_eq!(alg.generators()[0].to_string(), "y/x");
        assert!(alg.relations().generators().is_empty());
        assert!(alg.is_complete());

        // radii on D(xy) at D=2: y/x and x/y with relation t1*t2 - 1
        let dxy = restrict_to_open(&radii, &ring.parse("x*y").unwrap()).unwrap();
        let alg = compute_algebra(&dxy, 2).unwrap();
        let gens: Vec<String> = alg.generators().iter().map(|g| g.to_string()).collect();
        assert_eq!(gens.len(), 2);
        assert!(gens.contains(&"y/x".to_string()) && gens.contains(&"x/y".to_string()));
        assert_eq!(alg.relations().generators().len(), 1);
        assert_eq!(alg.relations().generators()[0].to_string(), "t1*t2 - 1");

        // radii on the whole plane: no generators
        let alg = compute_algebra(&radii, 4).unwrap();
        assert!(alg.generators().is_empty());

        // parabola on the whole plane at D=2
        let (_, parabola) = dist2(&["-2*x", "1"]);
        let alg = compute_algebra(&parabola, 2).unwrap();
        assert_eq!(alg.generators().len(), 1);
        assert_eq!(alg.generators()[0].to_string(), "x^2 - y");
        assert!(alg.relations().generators().is_empty());
        assert!(alg.is_complete());
    }

    #[test]
    fn subalgebra_membership_examples() {
        let ring = PolyRing::new(&["x", "y"]).unwrap();
        let gens = vec![ring.parse("x*y").unwrap()];
        // x^2 y^2 = (xy)^2
        let p = subalgebra_membership_in(&ring, &gens, &ring.parse("x^2*y^2").unwrap())
            .unwrap()
            .expect("member");
        assert_eq!(p.to_string(), "t1^2");
        // x is not in Q[xy]
        assert!(
            subalgebra_membership_in(&ring, &gens, &ring.parse("x").unwrap())
                .unwrap()
                .is_none()
        );
        // 1 is in any subalgebra
        let one = subalgebra_membership_in(&ring, &[], &Poly::one(&ring))
            .unwrap()
            .expect("constant");
        assert!(one.is_one());
    }

    #[test]
    fn closedness_probe_passes_on_corpus() {
        let (_, hyper) = dist2(&["y", "x"]);
        let alg = compute_algebra(&hyper, 2).unwrap();
        let outcome = closedness_probe(&alg, &hyper, 50, 3, 12345).unwrap();
        assert!(outcome.passed());
    }

    #[test]
    fn localization_check_examples() {
        // parabola localised at its own first integral
        let (ring, parabola) = dist2(&["-2*x", "1"]);
        let f = ring.parse("y - x^2").unwrap();
        assert!(localization_check(&parabola, &f, 3).unwrap().is_none());
        // hyperbolae at f = xy
        let (ring, hyper) = dist2(&["y", "x"]);
        let f = ring.parse("x*y").unwrap();
        assert!(localization_check(&hyper, &f, 3).unwrap().is_none());
        // trivial denominator passes
        assert!(localization_check(&hyper, &Poly::one(&ring), 3)
            .unwrap()
            .is_none());
        // non-first-integral denominator is rejected
        assert!(localization_check(&hyper, &ring.parse("x").unwrap(), 2).is_err());
    }
}
