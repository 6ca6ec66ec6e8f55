use std::cmp::Ordering;

/// An exponent vector. The length always equals the number of variables of
/// the ring the monomial belongs to; entry `i` is the exponent of variable
/// `i`. The derived `Ord` (plain lexicographic on the vector) is only used
/// for deterministic map storage — semantic comparisons go through
/// [`MonomialOrder`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(index: usize, nvars: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn degree_in(&self, range: std::ops::Range<usize>) -> u32 {
        self.0[range].iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller must ensure divisibility.
    pub fn quotient(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Indices of variables with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
    }

    /// True when every variable in the support lies in `allowed`.
    pub fn supported_on(&self, allowed: &[bool]) -> bool {
        self.support().all(|i| allowed[i])
    }

    /// Extends the exponent vector with zero entries for new variables.
    pub fn extend(&self, nvars: usize) -> Monomial {
        let mut e = self.0.clone();
        e.resize(nvars, 0);
        Monomial(e)
    }
}

/// Monomial order tags. `GrevLex` is graded reverse lexicographic with the
/// ring's variable order (earlier variables are larger). `Block { split }`
/// compares the first `split` variables grevlex first, then the rest —
/// an elimination order for the leading block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonomialOrder {
    GrevLex,
    Lex,
    Block { split: usize },
}

fn grevlex_slice(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    match da.cmp(&db) {
        Ordering::Equal => {
            for (x, y) in a.iter().zip(b.iter()).rev() {
                match x.cmp(y) {
                    Ordering::Equal => continue,
                    // smaller exponent on the rightmost difference wins
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                }
            }
            Ordering::Equal
        }
        o => o,
    }
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.nvars(), b.nvars());
        match self {
            MonomialOrder::GrevLex => grevlex_slice(&a.0, &b.0),
            MonomialOrder::Lex => {
                for (x, y) in a.0.iter().zip(b.0.iter()) {
                    match x.cmp(y) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Block { split } => {
                let s = (*split).min(a.0.len());
                match grevlex_slice(&a.0[..s], &b.0[..s]) {
                    Ordering::Equal => grevlex_slice(&a.0[s..], &b.0[s..]),
                    o => o,
                }
            }
        }
    }

    pub fn max<'a>(&self, a: &'a Monomial, b: &'a Monomial) -> &'a Monomial {
        if self.cmp(a, b) == Ordering::Less {
            b
        } else {
            a
        }
    }
}

/// All monomials in `nvars` variables of total degree at most `max_degree`,
/// in a deterministic order.
pub fn monomials_up_to(nvars: usize, max_degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = vec![0u32; nvars];
    fn rec(out: &mut Vec<Monomial>, current: &mut Vec<u32>, pos: usize, left: u32) {
        if pos == current.len() {
            out.push(Monomial(current.clone()));
            return;
        }
        for e in 0..=left {
            current[pos] = e;
            rec(out, current, pos + 1, left - e);
        }
        current[pos] = 0;
    }
    rec(&mut out, &mut current, 0, max_degree);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial(e.to_vec())
    }

    #[test]
    fn grevlex_standard_facts() {
        let o = MonomialOrder::GrevLex;
        // x^2 > y in Q[x, y]
        assert_eq!(o.cmp(&m(&[2, 0]), &m(&[0, 1])), Ordering::Greater);
        // x > y, xy > y^2, x^2 > xy
        assert_eq!(o.cmp(&m(&[1, 0]), &m(&[0, 1])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 1]), &m(&[0, 2])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[2, 0]), &m(&[1, 1])), Ordering::Greater);
        // classic grevlex vs grlex separation: x y^2 z > x^2 z^2? degrees 4 = 5? no
        // use degree ties only: x*z < y^2 in grevlex(x>y>z)? deg 2 both,
        // rightmost difference is z: xz has larger z-exponent, so xz < y^2.
        assert_eq!(o.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Less);
    }

    #[test]
    fn lex_and_block() {
        let lex = MonomialOrder::Lex;
        assert_eq!(lex.cmp(&m(&[0, 5]), &m(&[1, 0])), Ordering::Less);
        // block order eliminating the first variable: any power of it
        // dominates everything in the tail block
        let b = MonomialOrder::Block { split: 1 };
        assert_eq!(b.cmp(&m(&[1, 0]), &m(&[0, 7])), Ordering::Greater);
        assert_eq!(b.cmp(&m(&[0, 2]), &m(&[0, 1])), Ordering::Greater);
    }

    #[test]
    fn enumeration_counts() {
        // degree <= 3 in 2 variables: C(5, 2) = 10
        assert_eq!(monomials_up_to(2, 3).len(), 10);
        assert_eq!(monomials_up_to(3, 2).len(), 10);
        assert!(monomials_up_to(3, 0).len() == 1);
    }
}
