//! Gröbner machinery for submodules of a free module over a polynomial
//! ring: normal forms, Buchberger completion, syzygies and colon modules.
//!
//! A module vector is a dense `Vec<TermMap>` indexed by position. Terms are
//! ordered position-over-term: a term in a higher position beats any term in
//! a lower position, ties are broken by the ring's monomial order. With the
//! positions of one-forms indexed by the ring variables, this makes d of a
//! later variable reduce towards d of earlier ones, and it makes the
//! "leading block" of an augmented module the high positions, which is what
//! the syzygy extraction below relies on.

use crate::poly::{Coef, Monomial, MonomialOrder};
use crate::poly::arith::{self, TermMap};
use num_traits::One;
use std::cmp::Ordering;

pub(crate) type ModVec = Vec<TermMap>;

pub(crate) fn zero(rank: usize) -> ModVec {
    vec![arith::zero(); rank]
}

pub(crate) fn is_zero(v: &ModVec) -> bool {
    v.iter().all(|c| c.is_empty())
}

pub(crate) fn add(a: &ModVec, b: &ModVec) -> ModVec {
    a.iter().zip(b).map(|(x, y)| arith::add(x, y)).collect()
}

pub(crate) fn neg(a: &ModVec) -> ModVec {
    a.iter().map(arith::neg).collect()
}

pub(crate) fn sub(a: &ModVec, b: &ModVec) -> ModVec {
    a.iter().zip(b).map(|(x, y)| arith::sub(x, y)).collect()
}

pub(crate) fn scale_poly(a: &ModVec, f: &TermMap) -> ModVec {
    a.iter().map(|c| arith::mul(c, f)).collect()
}

/// `acc += v * c * m`
fn add_scaled_shift(acc: &mut ModVec, v: &ModVec, c: &Coef, m: &Monomial) {
    for (pos, comp) in v.iter().enumerate() {
        arith::add_scaled_shift(&mut acc[pos], comp, c, m);
    }
}

/// Unit vector `f * e_pos`.
pub(crate) fn unit(rank: usize, pos: usize, f: &TermMap) -> ModVec {
    let mut v = zero(rank);
    v[pos] = f.clone();
    v
}

/// Leading term of a module vector: highest nonempty position, then the
/// ring-order-leading monomial within it.
pub(crate) fn leading<'a>(
    v: &'a ModVec,
    order: &MonomialOrder,
) -> Option<(usize, &'a Monomial, &'a Coef)> {
    for pos in (0..v.len()).rev() {
        if let Some((m, c)) = arith::leading(&v[pos], order) {
            return Some((pos, m, c));
        }
    }
    None
}

fn cmp_terms(
    order: &MonomialOrder,
    a: (usize, &Monomial),
    b: (usize, &Monomial),
) -> Ordering {
    a.0.cmp(&b.0).then_with(|| order.cmp(a.1, b.1))
}

pub(crate) fn make_monic(v: &ModVec, order: &MonomialOrder) -> ModVec {
    match leading(v, order) {
        None => v.clone(),
        Some((_, _, c)) => {
            let inv = Coef::one() / c.clone();
            v.iter().map(|comp| arith::scale(comp, &inv)).collect()
        }
    }
}

/// Scales to integer coefficients with content 1, leading coefficient
/// positive.
pub(crate) fn primitive(v: &ModVec, order: &MonomialOrder) -> ModVec {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{Signed, Zero};
    let mut denom_lcm = BigInt::from(1);
    let mut numer_gcd = BigInt::from(0);
    for comp in v {
        for c in comp.values() {
            denom_lcm = denom_lcm.lcm(c.denom());
            numer_gcd = numer_gcd.gcd(c.numer());
        }
    }
    if numer_gcd.is_zero() {
        return v.clone();
    }
    let mut factor = Coef::new(denom_lcm, numer_gcd);
    if let Some((_, _, c)) = leading(v, order) {
        if (c * &factor).is_negative() {
            factor = -factor;
        }
    }
    v.iter().map(|comp| arith::scale(comp, &factor)).collect()
}

/// Fully reduces `v` modulo `basis`: no term of any component of the result
/// is divisible (same position) by a basis leading term.
pub(crate) fn normal_form(v: &ModVec, basis: &[ModVec], order: &MonomialOrder) -> ModVec {
    let rank = v.len();
    let leads: Vec<(usize, Monomial, Coef)> = basis
        .iter()
        .filter_map(|g| leading(g, order).map(|(p, m, c)| (p, m.clone(), c.clone())))
        .collect();
    let mut remainder = zero(rank);
    let mut p = v.clone();
    while let Some((pp, pm, pc)) = leading(&p, order) {
        let (pp, pm, pc) = (pp, pm.clone(), pc.clone());
        let mut reduced = false;
        for (i, (gp, gm, gc)) in leads.iter().enumerate() {
            if *gp == pp && gm.divides(&pm) {
                let shift = gm.quotient(&pm);
                let factor = -(&pc / gc);
                add_scaled_shift(&mut p, &basis[i], &factor, &shift);
                reduced = true;
                break;
            }
        }
        if !reduced {
            arith::add_assign_term(&mut remainder[pp], &pm, &pc);
            p[pp].remove(&pm);
        }
    }
    remainder
}

fn s_vector(f: &ModVec, g: &ModVec, order: &MonomialOrder) -> Option<ModVec> {
    let (fp, fm, fc) = leading(f, order)?;
    let (gp, gm, gc) = leading(g, order)?;
    if fp != gp {
        return None;
    }
    let l = fm.lcm(gm);
    let mut out = zero(f.len());
    add_scaled_shift(&mut out, f, &(Coef::one() / fc.clone()), &fm.quotient(&l));
    add_scaled_shift(&mut out, g, &(-Coef::one() / gc.clone()), &gm.quotient(&l));
    Some(out)
}

/// Buchberger completion for submodules; S-vectors are only formed for
/// pairs whose leading terms share a position. Returns the reduced basis.
pub(crate) fn buchberger(gens: &[ModVec], order: &MonomialOrder) -> Vec<ModVec> {
    let mut basis: Vec<ModVec> = gens.iter().filter(|g| !is_zero(g)).cloned().collect();
    let mut pending: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            pending.push((i, j));
        }
    }
    while let Some(&(i, j)) = pending.iter().min_by(|a, b| {
        let la = pair_lcm(&basis, a, order);
        let lb = pair_lcm(&basis, b, order);
        match (la, lb) {
            (None, None) => a.cmp(b),
            (None, _) => Ordering::Less,
            (_, None) => Ordering::Greater,
            (Some(x), Some(y)) => cmp_terms(order, (x.0, &x.1), (y.0, &y.1)).then_with(|| a.cmp(b)),
        }
    }) {
        pending.retain(|p| *p != (i, j));
        let Some(s) = s_vector(&basis[i], &basis[j], order) else {
            continue;
        };
        let r = normal_form(&s, &basis, order);
        if !is_zero(&r) {
            let new = basis.len();
            for k in 0..new {
                pending.push((k, new));
            }
            basis.push(r);
        }
    }
    reduce_basis(basis, order)
}

fn pair_lcm(
    basis: &[ModVec],
    pair: &(usize, usize),
    order: &MonomialOrder,
) -> Option<(usize, Monomial)> {
    let (a, b) = *pair;
    let (pa, ma, _) = leading(&basis[a], order)?;
    let (pb, mb, _) = leading(&basis[b], order)?;
    if pa != pb {
        return None;
    }
    Some((pa, ma.lcm(mb)))
}

pub(crate) fn reduce_basis(basis: Vec<ModVec>, order: &MonomialOrder) -> Vec<ModVec> {
    let basis: Vec<ModVec> = basis.into_iter().filter(|g| !is_zero(g)).collect();
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        let (pi, mi, _) = leading(&basis[i], order).expect("nonzero");
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let (pj, mj, _) = leading(&basis[j], order).expect("nonzero");
            if pj == pi && mj.divides(mi) && (mi != mj || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    let minimal: Vec<ModVec> = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(g, k)| if k { Some(g) } else { None })
        .collect();
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<ModVec> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let r = normal_form(&minimal[i], &others, order);
        if !is_zero(&r) {
            reduced.push(make_monic(&r, order));
        }
    }
    reduced.sort_by(|a, b| {
        let (pa, ma, _) = leading(a, order).expect("nonzero");
        let (pb, mb, _) = leading(b, order).expect("nonzero");
        cmp_terms(order, (pb, mb), (pa, ma))
    });
    reduced.dedup();
    reduced
}

/// Generators of the syzygy module of `vectors` (elements of a free module
/// of rank `rank`): all `(a_1..a_p)` with `sum a_i vectors[i] = 0`.
///
/// Computed from a Gröbner basis of the module generated by
/// `vectors[i] (high positions) ⊕ e_i (low positions)`: basis elements whose
/// high block vanishes restrict to syzygy generators.
pub(crate) fn syzygies(vectors: &[ModVec], rank: usize, order: &MonomialOrder) -> Vec<ModVec> {
    let p = vectors.len();
    if p == 0 {
        return Vec::new();
    }
    let nvars = vectors
        .iter()
        .flat_map(|v| v.iter())
        .flat_map(|t| t.keys())
        .map(|m| m.nvars())
        .next()
        .unwrap_or(0);
    let one = arith::constant(nvars.max(1), Coef::one());
    let mut augmented = Vec::with_capacity(p);
    for (i, v) in vectors.iter().enumerate() {
        let mut a = zero(p + rank);
        a[i] = one.clone();
        for (pos, comp) in v.iter().enumerate() {
            a[p + pos] = comp.clone();
        }
        augmented.push(a);
    }
    let gb = buchberger(&augmented, order);
    let mut out = Vec::new();
    for g in gb {
        if g[p..].iter().all(|c| c.is_empty()) {
            out.push(g[..p].to_vec());
        }
    }
    out
}

/// Generators of the colon module `(span(gens) : b)` inside a free module
/// of rank `rank`, over the quotient by the ideal generated by `ring_rels`:
/// all `v` with `b·v ∈ span(gens) + ring_rels·F`.
pub(crate) fn colon(
    gens: &[ModVec],
    b: &TermMap,
    ring_rels: &[TermMap],
    rank: usize,
    order: &MonomialOrder,
) -> Vec<ModVec> {
    // syzygies of [b·e_1 .. b·e_n, gens.., rels·e_pos..]: the coefficient
    // block on the b·e_i components ranges over exactly the colon module
    let mut list: Vec<ModVec> = (0..rank).map(|i| unit(rank, i, b)).collect();
    list.extend(gens.iter().cloned());
    for r in ring_rels {
        for i in 0..rank {
            list.push(unit(rank, i, r));
        }
    }
    let syz = syzygies(&list, rank, order);
    let mut out: Vec<ModVec> = syz.into_iter().map(|s| s[..rank].to_vec()).collect();
    out.retain(|v| !is_zero(v));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::arith::coef_int;

    fn t(pairs: &[(&[u32], i64)]) -> TermMap {
        let mut out = arith::zero();
        for (e, c) in pairs {
            arith::add_assign_term(&mut out, &Monomial(e.to_vec()), &coef_int(*c));
        }
        out
    }

    #[test]
    fn normal_form_single_generator() {
        let order = MonomialOrder::GrevLex;
        // N = (dy - 2x dx) in Q[x,y]: positions (dx, dy)
        let gen = vec![t(&[(&[1, 0], -2)]), t(&[(&[0, 0], 1)])];
        // NF(dy) = 2x dx
        let dy = vec![arith::zero(), t(&[(&[0, 0], 1)])];
        let nf = normal_form(&dy, &[gen.clone()], &order);
        assert_eq!(nf, vec![t(&[(&[1, 0], 2)]), arith::zero()]);
        // NF(x dy) for N = (x dy - y dx) is y dx
        let radii = vec![t(&[(&[0, 1], -1)]), t(&[(&[1, 0], 1)])];
        let xdy = vec![arith::zero(), t(&[(&[1, 0], 1)])];
        let nf = normal_form(&xdy, &[radii], &order);
        assert_eq!(nf, vec![t(&[(&[0, 1], 1)]), arith::zero()]);
    }

    #[test]
    fn syzygies_of_variables() {
        // syzygies of (x, y) as elements of B^1: generated by (y, -x)
        let order = MonomialOrder::GrevLex;
        let x = vec![t(&[(&[1, 0], 1)])];
        let y = vec![t(&[(&[0, 1], 1)])];
        let syz = syzygies(&[x, y], 1, &order);
        assert_eq!(syz.len(), 1);
        let s = &syz[0];
        // s = (y, -x) up to sign and normalisation
        let combo = arith::add(
            &arith::mul(&s[0], &t(&[(&[1, 0], 1)])),
            &arith::mul(&s[1], &t(&[(&[0, 1], 1)])),
        );
        assert!(combo.is_empty());
        assert!(!is_zero(s));
    }

    #[test]
    fn colon_saturates_coordinate_multiple() {
        // (x·dx : x) contains dx
        let order = MonomialOrder::GrevLex;
        let xdx = vec![t(&[(&[1, 0], 1)]), arith::zero()];
        let x = t(&[(&[1, 0], 1)]);
        let col = colon(&[xdx], &x, &[], 2, &order);
        let gb = buchberger(&col, &order);
        let dx = vec![t(&[(&[0, 0], 1)]), arith::zero()];
        assert!(is_zero(&normal_form(&dx, &gb, &order)));
    }
}
