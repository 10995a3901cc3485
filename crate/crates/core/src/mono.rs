//! Exponent vectors with graded-lexicographic ordering.

use smallvec::SmallVec;
use std::cmp::Ordering;

/// A monomial: one exponent per variable, each `< 2^16`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub SmallVec<[u16; 6]>);

impl Monomial {
    pub fn constant(n_vars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, n_vars))
    }

    pub fn var(n_vars: usize, idx: usize) -> Self {
        let mut m = Self::constant(n_vars);
        m.0[idx] = 1;
        m
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn n_vars(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn exponent(&self, idx: usize) -> u16 {
        self.0[idx]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(&a, &b)| {
                    let s = a as u32 + b as u32;
                    debug_assert!(s < 1 << 16, "monomial exponent overflow");
                    s as u16
                })
                .collect(),
        )
    }

    /// Componentwise difference; `None` if any exponent would go negative.
    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        debug_assert_eq!(self.0.len(), other.0.len());
        let mut out = SmallVec::with_capacity(self.0.len());
        for (&a, &b) in self.0.iter().zip(other.0.iter()) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Monomial(out))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(&a, &b)| a.min(b))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Monomial {
        Monomial(
            self.0
                .iter()
                .map(|&a| {
                    let v = a as u32 * e;
                    debug_assert!(v < 1 << 16, "monomial exponent overflow");
                    v as u16
                })
                .collect(),
        )
    }
}

/// Graded-lexicographic: compare total degree first, then exponents left to right.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u16]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn grlex_order() {
        // x^2 z vs x y z in 3 vars: same degree 3, x^2 z = (2,0,1) > (1,1,1) lexicographically
        assert!(m(&[2, 0, 1]) > m(&[1, 1, 1]));
        // degree wins over lex
        assert!(m(&[0, 0, 4]) > m(&[3, 0, 0]));
    }

    #[test]
    fn div_and_gcd() {
        assert_eq!(m(&[3, 1, 0]).try_div(&m(&[1, 0, 0])), Some(m(&[2, 1, 0])));
        assert_eq!(m(&[1, 0, 0]).try_div(&m(&[0, 1, 0])), None);
        assert_eq!(m(&[3, 1, 2]).gcd(&m(&[1, 4, 2])), m(&[1, 1, 2]));
    }
}
