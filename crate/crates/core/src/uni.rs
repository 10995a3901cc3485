//! Dense univariate polynomials over Z/p.
//!
//! Coefficients are stored low-to-high with no trailing zeros (empty = 0).
//! Multiplication routes through the NTT layer; division switches to Newton
//! inversion and gcd to a half-gcd scheme once degrees are large. The
//! half-gcd only ever transforms the operand pair by matrices built from
//! genuine quotient steps, so the gcd it reaches is the true gcd; a progress
//! check falls back to classical division steps in degenerate cases.

use crate::ntt::convolve_mod;
use crate::ring::{add_mod, inv_mod, mul_mod, sub_mod};
use rand::Rng;

const DIV_NEWTON_THRESHOLD: usize = 128;
const GCD_HALFGCD_THRESHOLD: usize = 512;
const HGCD_BASE: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPoly {
    pub p: u64,
    pub c: Vec<u64>,
}

impl ModPoly {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        for x in c.iter_mut() {
            *x %= p;
        }
        let mut out = ModPoly { p, c };
        out.trim();
        out
    }

    pub fn zero(p: u64) -> Self {
        ModPoly { p, c: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        ModPoly { p, c: vec![1] }
    }

    pub fn constant(p: u64, v: u64) -> Self {
        Self::new(p, vec![v])
    }

    pub fn random<R: Rng>(p: u64, deg: usize, rng: &mut R) -> Self {
        let mut c: Vec<u64> = (0..=deg).map(|_| rng.gen_range(0..p)).collect();
        if c[deg] == 0 {
            c[deg] = 1;
        }
        ModPoly { p, c }
    }

    fn trim(&mut self) {
        while let Some(&0) = self.c.last() {
            self.c.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; zero polynomial reports -1 for convenient comparisons.
    pub fn deg(&self) -> isize {
        self.c.len() as isize - 1
    }

    pub fn lc(&self) -> u64 {
        *self.c.last().expect("nonzero polynomial")
    }

    pub fn add(&self, other: &ModPoly) -> ModPoly {
        let p = self.p;
        let n = self.c.len().max(other.c.len());
        let mut c = vec![0u64; n];
        for (i, slot) in c.iter_mut().enumerate() {
            let a = self.c.get(i).copied().unwrap_or(0);
            let b = other.c.get(i).copied().unwrap_or(0);
            *slot = add_mod(a, b, p);
        }
        let mut out = ModPoly { p, c };
        out.trim();
        out
    }

    pub fn sub(&self, other: &ModPoly) -> ModPoly {
        let p = self.p;
        let n = self.c.len().max(other.c.len());
        let mut c = vec![0u64; n];
        for (i, slot) in c.iter_mut().enumerate() {
            let a = self.c.get(i).copied().unwrap_or(0);
            let b = other.c.get(i).copied().unwrap_or(0);
            *slot = sub_mod(a, b, p);
        }
        let mut out = ModPoly { p, c };
        out.trim();
        out
    }

    pub fn neg(&self) -> ModPoly {
        let p = self.p;
        ModPoly {
            p,
            c: self.c.iter().map(|&x| if x == 0 { 0 } else { p - x }).collect(),
        }
    }

    pub fn scale(&self, k: u64) -> ModPoly {
        let p = self.p;
        let mut out = ModPoly {
            p,
            c: self.c.iter().map(|&x| mul_mod(x, k, p)).collect(),
        };
        out.trim();
        out
    }

    pub fn mul(&self, other: &ModPoly) -> ModPoly {
        if self.is_zero() || other.is_zero() {
            return ModPoly::zero(self.p);
        }
        let c = convolve_mod(&self.c, &other.c, self.p);
        let mut out = ModPoly { p: self.p, c };
        out.trim();
        out
    }

    /// Multiply by x^k.
    pub fn shl(&self, k: usize) -> ModPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0u64; k];
        c.extend_from_slice(&self.c);
        ModPoly { p: self.p, c }
    }

    /// Integer-divide by x^k (drop low coefficients).
    pub fn shr(&self, k: usize) -> ModPoly {
        if k >= self.c.len() {
            return ModPoly::zero(self.p);
        }
        ModPoly {
            p: self.p,
            c: self.c[k..].to_vec(),
        }
    }

    /// Reduce mod x^k.
    pub fn low(&self, k: usize) -> ModPoly {
        let mut out = ModPoly {
            p: self.p,
            c: self.c.iter().take(k).copied().collect(),
        };
        out.trim();
        out
    }

    /// Coefficient reversal over a window of size n+1 (for Newton division).
    fn rev(&self, n: usize) -> ModPoly {
        let mut c = vec![0u64; n + 1];
        for (i, &x) in self.c.iter().enumerate() {
            if i <= n {
                c[n - i] = x;
            }
        }
        let mut out = ModPoly { p: self.p, c };
        out.trim();
        out
    }

    pub fn make_monic(&self) -> ModPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.lc(), self.p))
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.p;
        let mut acc = 0u64;
        for &co in self.c.iter().rev() {
            acc = add_mod(mul_mod(acc, x, p), co, p);
        }
        acc
    }

    /// Power series inverse mod x^k. Requires a nonzero constant term.
    pub fn inv_series(&self, k: usize) -> ModPoly {
        assert!(!self.c.is_empty() && self.c[0] != 0, "unit constant term required");
        let p = self.p;
        let mut v = ModPoly {
            p,
            c: vec![inv_mod(self.c[0], p)],
        };
        let mut prec = 1usize;
        while prec < k {
            prec = (prec * 2).min(k);
            // v <- v*(2 - f v) mod x^prec
            let fv = self.low(prec).mul(&v).low(prec);
            let mut two_minus = fv.neg();
            let c0 = two_minus.c.first().copied().unwrap_or(0);
            if two_minus.c.is_empty() {
                two_minus.c.push(add_mod(2 % p, 0, p));
            } else {
                two_minus.c[0] = add_mod(c0, 2 % p, p);
            }
            two_minus.trim();
            v = v.mul(&two_minus).low(prec);
        }
        v
    }

    pub fn div_rem(&self, d: &ModPoly) -> (ModPoly, ModPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.deg() < d.deg() {
            return (ModPoly::zero(self.p), self.clone());
        }
        let m = (self.deg() - d.deg()) as usize;
        if m < DIV_NEWTON_THRESHOLD || d.c.len() < DIV_NEWTON_THRESHOLD {
            return self.div_rem_school(d);
        }
        // Newton: q = rev(a) * inv(rev(d)) mod x^(m+1), reversed back
        let ra = self.rev(self.deg() as usize);
        let rd = d.rev(d.deg() as usize);
        let q_rev = ra.mul(&rd.inv_series(m + 1)).low(m + 1);
        let q = q_rev.rev(m);
        let r = self.sub(&q.mul(d));
        debug_assert!(r.deg() < d.deg());
        (q, r)
    }

    fn div_rem_school(&self, d: &ModPoly) -> (ModPoly, ModPoly) {
        let p = self.p;
        let dd = d.deg() as usize;
        let linv = inv_mod(d.lc(), p);
        let mut r = self.c.clone();
        let mut q = vec![0u64; self.c.len() - dd];
        for i in (0..q.len()).rev() {
            let coef = mul_mod(r[i + dd], linv, p);
            if coef == 0 {
                continue;
            }
            q[i] = coef;
            for (j, &dc) in d.c.iter().enumerate() {
                r[i + j] = sub_mod(r[i + j], mul_mod(coef, dc, p), p);
            }
        }
        let mut qq = ModPoly { p, c: q };
        qq.trim();
        let mut rr = ModPoly { p, c: r };
        rr.trim();
        (qq, rr)
    }

    /// Exact quotient, or None when the remainder is nonzero.
    pub fn exact_div(&self, d: &ModPoly) -> Option<ModPoly> {
        if self.is_zero() {
            return Some(ModPoly::zero(self.p));
        }
        if d.is_zero() || self.deg() < d.deg() {
            return None;
        }
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &ModPoly) -> ModPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            if b.is_zero() {
                return a.make_monic();
            }
            if a.c.len() < GCD_HALFGCD_THRESHOLD {
                return gcd_euclid(a, b);
            }
            let before = b.deg();
            let (_, a2, b2) = hgcd(&a, &b);
            if !b2.is_zero() && b2.deg() >= before {
                // no progress (degenerate case): take one honest division step
                let (_, r) = a.div_rem(&b);
                a = std::mem::replace(&mut b, r);
            } else {
                a = a2;
                b = b2;
            }
        }
    }
}

fn gcd_euclid(mut a: ModPoly, mut b: ModPoly) -> ModPoly {
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b);
        a = std::mem::replace(&mut b, r);
    }
    a.make_monic()
}

/// 2x2 matrix over Z/p[x]: rows (m00 m01; m10 m11).
type Mat = [ModPoly; 4];

fn mat_identity(p: u64) -> Mat {
    [
        ModPoly::one(p),
        ModPoly::zero(p),
        ModPoly::zero(p),
        ModPoly::one(p),
    ]
}

fn mat_mul(m: &Mat, n: &Mat) -> Mat {
    [
        m[0].mul(&n[0]).add(&m[1].mul(&n[2])),
        m[0].mul(&n[1]).add(&m[1].mul(&n[3])),
        m[2].mul(&n[0]).add(&m[3].mul(&n[2])),
        m[2].mul(&n[1]).add(&m[3].mul(&n[3])),
    ]
}

fn mat_apply(m: &Mat, a: &ModPoly, b: &ModPoly) -> (ModPoly, ModPoly) {
    (
        m[0].mul(a).add(&m[1].mul(b)),
        m[2].mul(a).add(&m[3].mul(b)),
    )
}

/// Prepend one quotient step: (c,d) -> (d, c - q d) is [[0,1],[1,-q]].
fn mat_quotient_step(m: Mat, q: &ModPoly) -> Mat {
    let nr2 = m[0].sub(&q.mul(&m[2]));
    let nr3 = m[1].sub(&q.mul(&m[3]));
    let [_, _, r0, r1] = m;
    [r0, r1, nr2, nr3]
}

/// Iterative base case: reduce with genuine division steps until deg d < m.
fn hgcd_base(a: &ModPoly, b: &ModPoly, m: isize) -> (Mat, ModPoly, ModPoly) {
    let mut mat = mat_identity(a.p);
    let mut c = a.clone();
    let mut d = b.clone();
    while !d.is_zero() && d.deg() >= m {
        let (q, r) = c.div_rem(&d);
        mat = mat_quotient_step(mat, &q);
        c = std::mem::replace(&mut d, r);
    }
    (mat, c, d)
}

/// Reconstruct M(a, b) given the already-reduced high pair: with
/// a = a_hi x^k + a_lo, M(a,b) = (hi pair) * x^k + M(a_lo, b_lo).
fn apply_with_high(
    m: &Mat,
    hi: (&ModPoly, &ModPoly),
    a: &ModPoly,
    b: &ModPoly,
    k: usize,
) -> (ModPoly, ModPoly) {
    let (cl, dl) = mat_apply(m, &a.low(k), &b.low(k));
    (hi.0.shl(k).add(&cl), hi.1.shl(k).add(&dl))
}

/// Half-gcd: for deg a > deg b, returns (M, c, d) with (c,d) = M(a,b) a pair
/// of the remainder sequence of (a,b) and, generically, deg d < ceil(deg a/2).
/// Every row operation is a quotient step, so gcd(c,d) = gcd(a,b) exactly.
fn hgcd(a: &ModPoly, b: &ModPoly) -> (Mat, ModPoly, ModPoly) {
    let p = a.p;
    let n = a.deg();
    let m = (n + 1) / 2;
    if b.is_zero() || b.deg() < m {
        return (mat_identity(p), a.clone(), b.clone());
    }
    if n as usize <= HGCD_BASE {
        return hgcd_base(a, b, m);
    }
    // first recursion on the high parts
    let (m1, ch, dh) = hgcd(&a.shr(m as usize), &b.shr(m as usize));
    let (c, d) = apply_with_high(&m1, (&ch, &dh), a, b, m as usize);
    if d.is_zero() || d.deg() < m {
        return (m1, c, d);
    }
    if c.deg() <= d.deg() {
        // degenerate; finish with honest steps
        let (step, c2, d2) = hgcd_base(&c, &d, m);
        return (mat_mul(&step, &m1), c2, d2);
    }
    // one division step
    let (q, r) = c.div_rem(&d);
    let mat = mat_quotient_step(m1, &q);
    let (c, d) = (d, r);
    if d.is_zero() || d.deg() < m {
        return (mat, c, d);
    }
    // second recursion
    let l = c.deg();
    let k = 2 * m - l;
    if k < 0 || k >= c.deg() {
        let (step, c2, d2) = hgcd_base(&c, &d, m);
        return (mat_mul(&step, &mat), c2, d2);
    }
    let (m2, ch2, dh2) = hgcd(&c.shr(k as usize), &d.shr(k as usize));
    let (c2, d2) = apply_with_high(&m2, (&ch2, &dh2), &c, &d, k as usize);
    (mat_mul(&m2, &mat), c2, d2)
}

/// gcd of several polynomials (monic).
pub fn gcd_many(polys: &[ModPoly]) -> ModPoly {
    let p = polys.first().map(|q| q.p).unwrap_or(2);
    let mut g = ModPoly::zero(p);
    for q in polys {
        g = g.gcd(q);
        if g.deg() == 0 {
            return ModPoly::one(p);
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::DEFAULT_PRIME;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn division_and_inverse_series() {
        let p = DEFAULT_PRIME;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (da, db) in [(5, 2), (300, 120), (2000, 700)] {
            let a = ModPoly::random(p, da, &mut rng);
            let b = ModPoly::random(p, db, &mut rng);
            let (q, r) = a.div_rem(&b);
            assert!(r.deg() < b.deg());
            assert_eq!(q.mul(&b).add(&r), a);
        }
    }

    #[test]
    fn exact_division_round_trip() {
        let p = DEFAULT_PRIME;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = ModPoly::random(p, 431, &mut rng);
        let b = ModPoly::random(p, 377, &mut rng);
        let prod = a.mul(&b);
        assert_eq!(prod.exact_div(&b).unwrap(), a);
        // non-divisible case
        let mut bumped = prod.clone();
        bumped.c[0] = add_mod(bumped.c[0], 1, p);
        assert!(bumped.exact_div(&b).is_none() || b.deg() == 0);
    }

    #[test]
    fn gcd_matches_euclid_with_planted_common_factor() {
        let p = DEFAULT_PRIME;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (dg, da, db) in [(0, 40, 30), (7, 90, 64), (150, 1200, 1100), (400, 2100, 1900)] {
            let g = ModPoly::random(p, dg, &mut rng);
            let a = ModPoly::random(p, da, &mut rng).mul(&g);
            let b = ModPoly::random(p, db, &mut rng).mul(&g);
            let fast = a.gcd(&b);
            let slow = gcd_euclid(a.clone(), b.clone());
            assert_eq!(fast, slow, "dg={dg} da={da} db={db}");
            // random cofactors are coprime with overwhelming probability
            assert_eq!(fast.deg(), g.deg());
            assert!(a.exact_div(&fast).is_some());
            assert!(b.exact_div(&fast).is_some());
        }
    }

    #[test]
    fn gcd_large_stays_correct() {
        let p = DEFAULT_PRIME;
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = ModPoly::random(p, 900, &mut rng);
        let a = ModPoly::random(p, 9000, &mut rng).mul(&g);
        let b = ModPoly::random(p, 8500, &mut rng).mul(&g);
        let fast = a.gcd(&b);
        assert_eq!(fast.deg(), 900);
        assert_eq!(fast, g.make_monic());
    }

    #[test]
    fn eval_horner() {
        let p = 10007;
        let f = ModPoly::new(p, vec![3, 0, 1]); // x^2 + 3
        assert_eq!(f.eval(5), 28);
    }
}
