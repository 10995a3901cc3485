//! Number-theoretic transforms used for fast dense polynomial multiplication.
//!
//! Convolutions over an arbitrary word-sized prime p are computed by lifting
//! to the integers and working modulo three fixed 62-bit NTT-friendly primes,
//! then recombining with Garner's CRT. When the target prime itself supports
//! a root of unity of the required power-of-two order the transform runs
//! directly in that field and skips the CRT round.

use crate::ring::{add_mod, inv_mod, mul_mod, pow_mod, sub_mod};

/// 62-bit primes with high 2-adicity and their primitive roots.
/// p1 = 29*2^57 + 1, p2 = 69*2^55 + 1, p3 = 163*2^54 + 1.
pub const NTT_PRIMES: [(u64, u64); 3] = [
    (4179340454199820289, 3),
    (2485986994308513793, 5),
    (2936346957045563393, 3),
];

/// Shoup precomputation: floor(w * 2^64 / p).
#[inline]
fn shoup(w: u64, p: u64) -> u64 {
    (((w as u128) << 64) / p as u128) as u64
}

/// Multiply by a constant with precomputed Shoup quotient. Requires p < 2^63.
#[inline]
fn mul_shoup(x: u64, w: u64, w_shoup: u64, p: u64) -> u64 {
    let q = ((x as u128 * w_shoup as u128) >> 64) as u64;
    let r = x.wrapping_mul(w).wrapping_sub(q.wrapping_mul(p));
    if r >= p {
        r - p
    } else {
        r
    }
}

/// In-place iterative radix-2 NTT (decimation in frequency, bit-reversed
/// output) followed by the inverse pass keeps everything self-contained; we
/// only ever need forward-forward-pointwise-inverse so ordering cancels.
struct Plan {
    p: u64,
    n: usize,
    // twiddles per stage for forward (w) and inverse (w^-1), Shoup pairs
    fwd: Vec<(u64, u64)>,
    inv: Vec<(u64, u64)>,
    n_inv: u64,
}

impl Plan {
    fn new(p: u64, g: u64, n: usize) -> Option<Plan> {
        debug_assert!(n.is_power_of_two());
        if (p - 1) % n as u64 != 0 {
            return None;
        }
        let w = pow_mod(g, (p - 1) / n as u64, p);
        // check the order is exactly n
        if n > 1 && pow_mod(w, (n / 2) as u64, p) == 1 {
            return None;
        }
        let w_inv = inv_mod(w, p);
        let mut fwd = Vec::with_capacity(n / 2);
        let mut inv = Vec::with_capacity(n / 2);
        let (mut a, mut b) = (1u64, 1u64);
        for _ in 0..n / 2 {
            fwd.push((a, shoup(a, p)));
            inv.push((b, shoup(b, p)));
            a = mul_mod(a, w, p);
            b = mul_mod(b, w_inv, p);
        }
        Some(Plan {
            p,
            n,
            fwd,
            inv,
            n_inv: inv_mod(n as u64, p),
        })
    }

    /// Cooley-Tukey DIF, natural order in, bit-reversed out.
    fn forward(&self, a: &mut [u64]) {
        let p = self.p;
        let n = self.n;
        let mut len = n;
        let mut step = 1;
        while len > 1 {
            let half = len / 2;
            for start in (0..n).step_by(len) {
                for i in 0..half {
                    let (w, ws) = self.fwd[i * step];
                    let u = a[start + i];
                    let v = a[start + i + half];
                    a[start + i] = add_mod(u, v, p);
                    a[start + i + half] = mul_shoup(sub_mod(u, v, p), w, ws, p);
                }
            }
            len = half;
            step *= 2;
        }
    }

    /// Gentleman-Sande DIT inverse, bit-reversed in, natural order out,
    /// including the 1/n scaling.
    fn inverse(&self, a: &mut [u64]) {
        let p = self.p;
        let n = self.n;
        let mut len = 2;
        let mut step = n / 2;
        while len <= n {
            let half = len / 2;
            for start in (0..n).step_by(len) {
                for i in 0..half {
                    let (w, ws) = self.inv[i * step];
                    let u = a[start + i];
                    let v = mul_shoup(a[start + i + half], w, ws, p);
                    a[start + i] = add_mod(u, v, p);
                    a[start + i + half] = sub_mod(u, v, p);
                }
            }
            len *= 2;
            step /= 2;
        }
        let ninv = self.n_inv;
        let ninv_s = shoup(ninv, p);
        for x in a.iter_mut() {
            *x = mul_shoup(*x, ninv, ninv_s, p);
        }
    }
}

fn conv_single_prime(a: &[u64], b: &[u64], plan: &Plan, out_len: usize) -> Vec<u64> {
    let n = plan.n;
    let mut fa = vec![0u64; n];
    let mut fb = vec![0u64; n];
    fa[..a.len()].copy_from_slice(a);
    fb[..b.len()].copy_from_slice(b);
    plan.forward(&mut fa);
    plan.forward(&mut fb);
    for i in 0..n {
        fa[i] = mul_mod(fa[i], fb[i], plan.p);
    }
    plan.inverse(&mut fa);
    fa.truncate(out_len);
    fa
}

thread_local! {
    static PLAN_CACHE: std::cell::RefCell<std::collections::HashMap<(u64, usize), std::rc::Rc<Plan>>> =
        std::cell::RefCell::new(std::collections::HashMap::new());
}

fn cached_plan(p: u64, g: u64, n: usize) -> Option<std::rc::Rc<Plan>> {
    PLAN_CACHE.with(|c| {
        let mut map = c.borrow_mut();
        if let Some(plan) = map.get(&(p, n)) {
            return Some(plan.clone());
        }
        let plan = std::rc::Rc::new(Plan::new(p, g, n)?);
        map.insert((p, n), plan.clone());
        Some(plan)
    })
}

/// Convolution of coefficient vectors with entries already reduced mod `p`.
/// Exact: the result equals the polynomial product mod p.
pub fn convolve_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let out_len = a.len() + b.len() - 1;
    // schoolbook for small inputs
    if a.len().min(b.len()) <= 32 || out_len <= 128 {
        let mut out = vec![0u64; out_len];
        let (s, l) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        for (i, &x) in s.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in l.iter().enumerate() {
                out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
            }
        }
        return out;
    }
    let n = out_len.next_power_of_two();
    // direct transform in the target field when it supports order-n roots
    if let Some(g) = find_generator_for(p, n) {
        if let Some(plan) = cached_plan(p, g, n) {
            return conv_single_prime(a, b, &plan, out_len);
        }
    }
    // three-prime CRT; lanes run on scoped threads when the size warrants it
    let lane = |(q, g): (u64, u64)| -> Vec<u64> {
        let plan = cached_plan(q, g, n).expect("fixed primes support sizes up to 2^54");
        let ra: Vec<u64> = a.iter().map(|&x| x % q).collect();
        let rb: Vec<u64> = b.iter().map(|&x| x % q).collect();
        conv_single_prime(&ra, &rb, &plan, out_len)
    };
    let residues: Vec<Vec<u64>> = if n >= 1 << 15 {
        std::thread::scope(|s| {
            let h1 = s.spawn(|| lane(NTT_PRIMES[0]));
            let h2 = s.spawn(|| lane(NTT_PRIMES[1]));
            let r3 = lane(NTT_PRIMES[2]);
            vec![h1.join().unwrap(), h2.join().unwrap(), r3]
        })
    } else {
        NTT_PRIMES.iter().map(|&pg| lane(pg)).collect()
    };
    crt3_mod(&residues[0], &residues[1], &residues[2], p)
}

/// Garner recombination of three residue vectors into values mod `p`.
fn crt3_mod(r1: &[u64], r2: &[u64], r3: &[u64], p: u64) -> Vec<u64> {
    let (p1, _) = NTT_PRIMES[0];
    let (p2, _) = NTT_PRIMES[1];
    let (p3, _) = NTT_PRIMES[2];
    let inv_p1_mod_p2 = inv_mod(p1 % p2, p2);
    let p1p2_mod_p3 = mul_mod(p1 % p3, p2 % p3, p3);
    let inv_p1p2_mod_p3 = inv_mod(p1p2_mod_p3, p3);
    let p1_mod_p = p1 % p;
    let p1p2_mod_p = mul_mod(p1_mod_p, p2 % p, p);
    let mut out = Vec::with_capacity(r1.len());
    for i in 0..r1.len() {
        // x = a1 + p1*t1 + p1*p2*t2 with 0 <= t1 < p2, 0 <= t2 < p3
        let a1 = r1[i];
        let t1 = mul_mod(sub_mod(r2[i] % p2, a1 % p2, p2), inv_p1_mod_p2, p2);
        // a1 + p1*t1 mod p3
        let x12_mod_p3 = add_mod(a1 % p3, mul_mod(p1 % p3, t1 % p3, p3), p3);
        let t2 = mul_mod(
            sub_mod(r3[i] % p3, x12_mod_p3, p3),
            inv_p1p2_mod_p3,
            p3,
        );
        let mut x = add_mod(a1 % p, mul_mod(p1_mod_p, t1 % p, p), p);
        x = add_mod(x, mul_mod(p1p2_mod_p, t2 % p, p), p);
        out.push(x);
    }
    out
}

/// Look for an element of multiplicative order n (a power of two) mod p.
fn find_generator_for(p: u64, n: usize) -> Option<u64> {
    if n <= 1 || (p - 1) % n as u64 != 0 {
        return None;
    }
    // deterministic scan over small candidates is enough here: existence is
    // guaranteed once 2^k | p-1, we just need any witness
    for c in 2u64..40 {
        let w = pow_mod(c % p, (p - 1) / n as u64, p);
        if w != 1 && pow_mod(w, (n / 2) as u64, p) != 1 {
            return Some(c % p);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{is_prime_u64, DEFAULT_PRIME};
    use rand::{Rng, SeedableRng};

    #[test]
    fn ntt_primes_are_prime_with_valid_roots() {
        for &(p, g) in NTT_PRIMES.iter() {
            assert!(is_prime_u64(p));
            // g is a generator: g^((p-1)/q) != 1 for q = 2 and the odd part
            let mut odd = p - 1;
            let mut two_adicity = 0;
            while odd % 2 == 0 {
                odd /= 2;
                two_adicity += 1;
            }
            assert!(two_adicity >= 54, "p={p} two-adicity {two_adicity}");
            assert_ne!(pow_mod(g, (p - 1) / 2, p), 1);
        }
    }

    #[test]
    fn convolution_matches_schoolbook() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for &p in &[DEFAULT_PRIME, 10007u64, NTT_PRIMES[0].0] {
            for (la, lb) in [(1, 1), (3, 200), (257, 511), (1000, 1000)] {
                let a: Vec<u64> = (0..la).map(|_| rng.gen_range(0..p)).collect();
                let b: Vec<u64> = (0..lb).map(|_| rng.gen_range(0..p)).collect();
                let fast = convolve_mod(&a, &b, p);
                let mut slow = vec![0u64; la + lb - 1];
                for i in 0..la {
                    for j in 0..lb {
                        slow[i + j] = add_mod(slow[i + j], mul_mod(a[i], b[j], p), p);
                    }
                }
                assert_eq!(fast, slow, "p={p} la={la} lb={lb}");
            }
        }
    }

    #[test]
    fn crt_reconstruction_is_exact_near_bounds() {
        // force large coefficient sums: all-ones vectors give binomial-like counts
        let p = DEFAULT_PRIME;
        let a = vec![p - 1; 4096];
        let b = vec![p - 1; 4096];
        let fast = convolve_mod(&a, &b, p);
        // coefficient k of product = (number of pairs) * (p-1)^2 mod p = count mod p
        // since (p-1)^2 = 1 mod p
        for (k, &c) in fast.iter().enumerate() {
            let count = if k < 4096 { k as u64 + 1 } else { 8191 - k as u64 };
            assert_eq!(c, count % p, "k={k}");
        }
    }
}
