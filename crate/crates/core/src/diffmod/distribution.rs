//! Distributions presented as quotients of the module of one-forms by a
//! finitely generated submodule of relations.

use super::modvec::{self, ModVec};
use super::oneform::{relation_unit_vectors, OneForm, VectorField};
use crate::poly::arith::TermMap;
use crate::poly::{check_same_ring, Poly, PolyRing};
use crate::Result;
use std::sync::{Arc, OnceLock};

/// A distribution `F = Ω¹ / N`, presented by generating one-forms of `N`.
/// Rank and corank are computed eagerly; the module Gröbner basis used for
/// normal forms in `F` is cached on first use.
#[derive(Debug, Clone)]
pub struct Distribution {
    ring: Arc<PolyRing>,
    relations: Vec<OneForm>,
    saturated: bool,
    rank: usize,
    corank: usize,
    gb: OnceLock<Arc<Vec<ModVec>>>,
}

impl Distribution {
    pub fn new(ring: &Arc<PolyRing>, relations: Vec<OneForm>) -> Result<Distribution> {
        let mut forms = Vec::new();
        for r in relations {
            check_same_ring(ring, r.ring(), "distribution relation")?;
            if !r.is_zero() {
                forms.push(r);
            }
        }
        let corank = generic_rank(ring, &forms);
        let rank = ring.base_vars() - corank;
        // the zero submodule is trivially saturated
        let saturated = forms.is_empty();
        Ok(Distribution {
            ring: ring.clone(),
            relations: forms,
            saturated,
            rank,
            corank,
            gb: OnceLock::new(),
        })
    }

    /// Constructor that carries over a saturation fact known to the caller
    /// (e.g. restriction of a saturated distribution to an open).
    pub(crate) fn new_with_saturation(
        ring: &Arc<PolyRing>,
        relations: Vec<OneForm>,
        saturated: bool,
    ) -> Result<Distribution> {
        let mut d = Distribution::new(ring, relations)?;
        d.saturated = d.saturated || saturated;
        Ok(d)
    }

    /// The distribution dual to a family of vector fields: `N` is the
    /// annihilator `{ω : ⟨ω, v⟩ = 0 for all given v}`. As a kernel it is
    /// already saturated.
    pub fn annihilator_of_fields(
        ring: &Arc<PolyRing>,
        fields: &[VectorField],
    ) -> Result<Distribution> {
        for v in fields {
            crate::poly::check_same_ring(ring, v.ring(), "vector field")?;
        }
        let n = ring.base_vars();
        let fields: Vec<&VectorField> = fields.iter().filter(|v| !v.is_zero()).collect();
        let q = fields.len();
        if q == 0 {
            // nothing to annihilate: N is the full module, F = 0
            let forms = (0..n)
                .map(|i| {
                    let mut coeffs = vec![Poly::zero(ring); n];
                    coeffs[i] = Poly::one(ring);
                    OneForm::new(ring, coeffs).expect("same ring")
                })
                .collect();
            return Distribution::new_with_saturation(ring, forms, true);
        }
        let mut list: Vec<ModVec> = (0..n)
            .map(|i| fields.iter().map(|v| v.coeff(i).raw().clone()).collect())
            .collect();
        list.extend(super::oneform::relation_unit_vectors(ring, q));
        let syz = modvec::syzygies(&list, q, ring.order());
        let forms: Vec<ModVec> = syz.into_iter().map(|s| s[..n].to_vec()).collect();
        let forms = modvec::reduce_basis(forms, ring.order());
        let relations: Vec<OneForm> = forms
            .iter()
            .map(|v| modvec::primitive(v, ring.order()))
            .map(|v| OneForm::from_modvec(ring, &v))
            .filter(|f| !f.is_zero())
            .collect();
        Distribution::new_with_saturation(ring, relations, true)
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn relations(&self) -> &[OneForm] {
        &self.relations
    }

    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn corank(&self) -> usize {
        self.corank
    }

    pub fn rank_corank(&self) -> (usize, usize) {
        (self.rank, self.corank)
    }

    /// Module Gröbner basis of `N` (plus the localisation relations) under
    /// the position-over-term order.
    pub(crate) fn module_gb(&self) -> Arc<Vec<ModVec>> {
        self.gb
            .get_or_init(|| {
                let n = self.ring.base_vars();
                let mut gens: Vec<ModVec> =
                    self.relations.iter().map(|r| r.to_modvec()).collect();
                gens.extend(relation_unit_vectors(&self.ring, n));
                Arc::new(modvec::buchberger(&gens, self.ring.order()))
            })
            .clone()
    }

    /// Canonical representative of the class of `ω` in `F = Ω¹/N`; zero iff
    /// `ω` lies in the relation submodule.
    pub fn module_normal_form(&self, omega: &OneForm) -> Result<OneForm> {
        check_same_ring(&self.ring, omega.ring(), "module_normal_form")?;
        let gb = self.module_gb();
        let nf = modvec::normal_form(&omega.to_modvec(), &gb, self.ring.order());
        Ok(OneForm::from_modvec(&self.ring, &nf))
    }

    /// The foliated exterior derivative: the class of `df` in `F`. Zero iff
    /// `f` is a first integral on this chart.
    pub fn foliated_d(&self, f: &Poly) -> Result<OneForm> {
        check_same_ring(&self.ring, f.ring(), "foliated_d")?;
        self.module_normal_form(&OneForm::d(f))
    }

    /// Generators of the annihilator `{v : ⟨ω, v⟩ = 0 for all ω in N}`,
    /// the dual subsheaf of the tangent module. Kernels are saturated.
    pub fn dual_vector_fields(&self) -> Vec<VectorField> {
        let n = self.ring.base_vars();
        let k = self.relations.len();
        if k == 0 {
            return (0..n)
                .map(|i| {
                    let mut coeffs = vec![Poly::zero(&self.ring); n];
                    coeffs[i] = Poly::one(&self.ring);
                    VectorField::new(&self.ring, coeffs).expect("same ring")
                })
                .collect();
        }
        // kernel of the pairing matrix: syzygies of its columns over the
        // localised ring
        let mut list: Vec<ModVec> = (0..n)
            .map(|i| {
                self.relations
                    .iter()
                    .map(|r| r.coeff(i).raw().clone())
                    .collect()
            })
            .collect();
        list.extend(relation_unit_vectors(&self.ring, k));
        let syz = modvec::syzygies(&list, k, self.ring.order());
        let fields: Vec<ModVec> = syz.into_iter().map(|s| s[..n].to_vec()).collect();
        let fields = modvec::reduce_basis(fields, self.ring.order());
        fields
            .iter()
            .map(|v| modvec::primitive(v, self.ring.order()))
            .filter_map(|v| {
                let vf = VectorField::from_modvec(&self.ring, &v);
                if vf.is_zero() {
                    None
                } else {
                    Some(vf)
                }
            })
            .collect()
    }

    /// Replaces `N` by its torsion saturation
    /// `{ω : b·ω ∈ N for some nonzero b}`; rank and corank are unchanged.
    pub fn saturate_torsion(&self) -> Distribution {
        if self.saturated {
            let mut d = self.clone();
            d.saturated = true;
            return d;
        }
        let b = self.saturation_multiplier();
        let order = *self.ring.order();
        let rels = self.ring.relation_gens();
        let n = self.ring.base_vars();
        let mut gens: Vec<ModVec> = self.relations.iter().map(|r| r.to_modvec()).collect();
        let mut gb = self.module_gb().as_ref().clone();
        loop {
            let col = modvec::colon(&gens, &b, &rels, n, &order);
            let mut with_rels = col.clone();
            with_rels.extend(relation_unit_vectors(&self.ring, n));
            let col_gb = modvec::buchberger(&with_rels, &order);
            if col_gb == gb {
                break;
            }
            gens = modvec::reduce_basis(col, &order);
            gb = col_gb;
        }
        let relations: Vec<OneForm> = modvec::reduce_basis(gens, &order)
            .iter()
            .map(|v| OneForm::from_modvec(&self.ring, v))
            .filter(|f| !f.is_zero())
            .collect();
        let out = Distribution::new_with_saturation(&self.ring, relations, true).expect("same ring");
        debug_assert_eq!(out.rank_corank(), self.rank_corank());
        out
    }

    /// Product of the distinct nonzero maximal minors of the relation
    /// coefficient matrix.
    fn saturation_multiplier(&self) -> TermMap {
        let minors = nonzero_minors(&self.ring, &self.relations, self.corank);
        let mut b = Poly::one(&self.ring);
        for m in minors {
            b = &b * &m;
        }
        b.raw().clone()
    }
}

/// Rank over the fraction field of the coefficient matrix of the given
/// forms: the largest size of a submatrix with nonzero determinant.
fn generic_rank(ring: &Arc<PolyRing>, forms: &[OneForm]) -> usize {
    let k = forms.len();
    let n = ring.base_vars();
    for size in (1..=k.min(n)).rev() {
        if !nonzero_minors_of_size(ring, forms, size, true).is_empty() {
            return size;
        }
    }
    0
}

/// All distinct nonzero `size × size` minors, sign-normalised.
fn nonzero_minors(ring: &Arc<PolyRing>, forms: &[OneForm], size: usize) -> Vec<Poly> {
    nonzero_minors_of_size(ring, forms, size, false)
}

fn nonzero_minors_of_size(
    ring: &Arc<PolyRing>,
    forms: &[OneForm],
    size: usize,
    first_only: bool,
) -> Vec<Poly> {
    let k = forms.len();
    let n = ring.base_vars();
    if size == 0 || size > k.min(n) {
        return Vec::new();
    }
    let mut out: Vec<Poly> = Vec::new();
    for rows in combinations(k, size) {
        for cols in combinations(n, size) {
            let det = minor_det(ring, forms, &rows, &cols);
            if !det.is_zero() {
                let norm = det.normalize_sign();
                if !out.contains(&norm) {
                    out.push(norm);
                }
                if first_only {
                    return out;
                }
            }
        }
    }
    out
}

pub(crate) fn minor_det(
    ring: &Arc<PolyRing>,
    forms: &[OneForm],
    rows: &[usize],
    cols: &[usize],
) -> Poly {
    det_rec(ring, forms, rows, cols)
}

fn det_rec(ring: &Arc<PolyRing>, forms: &[OneForm], rows: &[usize], cols: &[usize]) -> Poly {
    if rows.is_empty() {
        return Poly::one(ring);
    }
    let mut acc = Poly::zero(ring);
    let r = rows[0];
    let rest: Vec<usize> = rows[1..].to_vec();
    for (j, &c) in cols.iter().enumerate() {
        let entry = forms[r].coeff(c);
        if entry.is_zero() {
            continue;
        }
        let sub_cols: Vec<usize> = cols
            .iter()
            .enumerate()
            .filter(|(jj, _)| *jj != j)
            .map(|(_, &cc)| cc)
            .collect();
        let sub = det_rec(ring, forms, &rest, &sub_cols);
        let term = entry * &sub;
        if j % 2 == 0 {
            acc = &acc + &term;
        } else {
            acc = &acc - &term;
        }
    }
    acc
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(out: &mut Vec<Vec<usize>>, current: &mut Vec<usize>, start: usize, n: usize, k: usize) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(out, current, i + 1, n, k);
            current.pop();
        }
    }
    rec(&mut out, &mut current, 0, n, k);
    out
}
