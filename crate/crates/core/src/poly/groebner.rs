//! Buchberger's algorithm and multivariate division on raw term maps.
//!
//! Pair selection is the normal strategy (smallest lcm under the active
//! order); the product criterion and the chain criterion prune pairs. The
//! output basis is the unique reduced Gröbner basis: minimal, fully
//! interreduced, monic, sorted by decreasing leading monomial.

use super::arith::{self, Coef, TermMap};
use super::monomial::{Monomial, MonomialOrder};
use num_traits::One;
use std::collections::BTreeSet;

/// Fully reduces `f` modulo `basis`: every term of the result is divisible
/// by no leading monomial of the basis. When `basis` is a Gröbner basis the
/// result is the unique normal form.
pub fn normal_form(f: &TermMap, basis: &[TermMap], order: &MonomialOrder) -> TermMap {
    let leads: Vec<(&Monomial, &Coef)> = basis
        .iter()
        .filter_map(|g| arith::leading(g, order))
        .collect();
    let mut remainder = arith::zero();
    let mut p = f.clone();
    while let Some((pm, pc)) = arith::leading(&p, order) {
        let pm = pm.clone();
        let pc = pc.clone();
        let mut reduced = false;
        for (i, (gm, gc)) in leads.iter().enumerate() {
            if gm.divides(&pm) {
                let shift = gm.quotient(&pm);
                let factor = &pc / *gc;
                arith::add_scaled_shift(&mut p, &basis[i], &-factor, &shift);
                reduced = true;
                break;
            }
        }
        if !reduced {
            arith::add_assign_term(&mut remainder, &pm, &pc);
            p.remove(&pm);
        }
    }
    remainder
}

fn s_polynomial(f: &TermMap, g: &TermMap, order: &MonomialOrder) -> TermMap {
    let (fm, fc) = arith::leading(f, order).expect("nonzero");
    let (gm, gc) = arith::leading(g, order).expect("nonzero");
    let l = fm.lcm(gm);
    let mut out = arith::zero();
    arith::add_scaled_shift(&mut out, f, &(Coef::one() / fc.clone()), &fm.quotient(&l));
    arith::add_scaled_shift(&mut out, g, &(-Coef::one() / gc.clone()), &gm.quotient(&l));
    out
}

/// Computes a Gröbner basis of the ideal generated by `gens` and reduces it.
pub fn buchberger(gens: &[TermMap], order: &MonomialOrder) -> Vec<TermMap> {
    let mut basis: Vec<TermMap> = gens.iter().filter(|g| !g.is_empty()).cloned().collect();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            pending.insert((i, j));
        }
    }

    while !pending.is_empty() {
        // normal strategy: smallest lcm first, ties by index for determinism
        let &(i, j) = pending
            .iter()
            .min_by(|a, b| {
                let la = pair_lcm(&basis, a, order);
                let lb = pair_lcm(&basis, b, order);
                order.cmp(&la, &lb).then_with(|| a.cmp(b))
            })
            .expect("nonempty");
        pending.remove(&(i, j));

        let (lmi, _) = arith::leading(&basis[i], order).expect("nonzero");
        let (lmj, _) = arith::leading(&basis[j], order).expect("nonzero");
        if lmi.is_coprime(lmj) {
            continue;
        }
        let l = lmi.lcm(lmj);
        // chain criterion: some k with LM(k) | lcm and both (i,k), (j,k)
        // already treated
        let chain = (0..basis.len()).any(|k| {
            if k == i || k == j {
                return false;
            }
            let (lmk, _) = arith::leading(&basis[k], order).expect("nonzero");
            lmk.divides(&l)
                && !pending.contains(&key(i, k))
                && !pending.contains(&key(j, k))
        });
        if chain {
            continue;
        }

        let s = s_polynomial(&basis[i], &basis[j], order);
        let r = normal_form(&s, &basis, order);
        if !r.is_empty() {
            let new = basis.len();
            for k in 0..new {
                pending.insert((k, new));
            }
            basis.push(r);
        }
    }

    reduce_basis(basis, order)
}

fn key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn pair_lcm(basis: &[TermMap], pair: &(usize, usize), order: &MonomialOrder) -> Monomial {
    let (a, b) = *pair;
    let (la, _) = arith::leading(&basis[a], order).expect("nonzero");
    let (lb, _) = arith::leading(&basis[b], order).expect("nonzero");
    la.lcm(lb)
}

/// Minimises and fully interreduces a Gröbner basis, normalising each
/// element monic and sorting by decreasing leading monomial.
pub fn reduce_basis(mut basis: Vec<TermMap>, order: &MonomialOrder) -> Vec<TermMap> {
    basis.retain(|g| !g.is_empty());
    // minimise: drop any element whose leading monomial is divisible by
    // another element's leading monomial
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        let (lmi, _) = arith::leading(&basis[i], order).expect("nonzero");
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let (lmj, _) = arith::leading(&basis[j], order).expect("nonzero");
            if lmj.divides(lmi) && (lmi != lmj || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    let minimal: Vec<TermMap> = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(g, k)| if k { Some(g) } else { None })
        .collect();
    // interreduce tails
    let mut reduced: Vec<TermMap> = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<TermMap> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let r = normal_form(&minimal[i], &others, order);
        if !r.is_empty() {
            reduced.push(arith::make_monic(&r, order));
        }
    }
    reduced.sort_by(|a, b| {
        let (la, _) = arith::leading(a, order).expect("nonzero");
        let (lb, _) = arith::leading(b, order).expect("nonzero");
        order.cmp(lb, la)
    });
    reduced.dedup();
    reduced
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::arith::{add_assign_term, coef_int};

    fn p(pairs: &[(&[u32], i64)]) -> TermMap {
        let mut t = arith::zero();
        for (e, c) in pairs {
            add_assign_term(&mut t, &Monomial(e.to_vec()), &coef_int(*c));
        }
        t
    }

    #[test]
    fn division_single_step() {
        // NF(x^2, {y - x^2}) = y under grevlex x > y
        let order = MonomialOrder::GrevLex;
        let ideal = vec![p(&[(&[0, 1], 1), (&[2, 0], -1)])];
        let f = p(&[(&[2, 0], 1)]);
        assert_eq!(normal_form(&f, &ideal, &order), p(&[(&[0, 1], 1)]));
        // NF(x^2 y - y^2, same) = 0
        let g = p(&[(&[2, 1], 1), (&[0, 2], -1)]);
        assert!(normal_form(&g, &ideal, &order).is_empty());
    }

    #[test]
    fn reduced_basis_of_simple_ideals() {
        let order = MonomialOrder::GrevLex;
        // (y - x^2, x) reduces to {x, y}
        let gens = vec![p(&[(&[0, 1], 1), (&[2, 0], -1)]), p(&[(&[1, 0], 1)])];
        let gb = buchberger(&gens, &order);
        assert_eq!(gb, vec![p(&[(&[1, 0], 1)]), p(&[(&[0, 1], 1)])]);
        // (0) has the empty basis
        assert!(buchberger(&[], &order).is_empty());
    }

    #[test]
    fn lex_cyclic_pair() {
        // (xy - 1) under lex y > x stays a single generator; vars (y, x)
        let order = MonomialOrder::Lex;
        let gens = vec![p(&[(&[1, 1], 1), (&[0, 0], -1)])];
        let gb = buchberger(&gens, &order);
        assert_eq!(gb, vec![p(&[(&[1, 1], 1), (&[0, 0], -1)])]);
    }
}
