//! Multivariate gcd.
//!
//! Over a prime field: monomial content first, then by arity — univariate at
//! the base, dense Brown interpolation for two active variables, and a
//! recursive content/primitive-part PRS with respect to the last active
//! variable above that. Over the integers: modular imaging against the
//! prime-field path with CRT lifting, certified by exact trial division.

use crate::dense2::Bi;
use crate::mono::Monomial;
use crate::poly::{PolyError, Polynomial};
use crate::ring::{is_prime_u64, Coef, CoefficientRing};
use crate::uni::ModPoly;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Normalized gcd: monic over a prime field, positive primitive over ZZ;
/// gcd(p, 0) is the normalization of p.
pub fn gcd(p: &Polynomial, q: &Polynomial) -> Result<Polynomial, PolyError> {
    p.check_compatible(q)?;
    if p.is_zero() {
        return Ok(q.normalized());
    }
    if q.is_zero() {
        return Ok(p.normalized());
    }
    let out = match p.ring() {
        CoefficientRing::PrimeField(_) => gcd_zp(p, q),
        CoefficientRing::ExactInteger => gcd_zz(p, q),
    };
    Ok(out.normalized())
}

/// Fold gcd over several polynomials.
pub fn gcd_many(polys: &[Polynomial]) -> Result<Polynomial, PolyError> {
    let mut acc = polys
        .first()
        .cloned()
        .expect("nonempty polynomial list");
    for q in &polys[1..] {
        if acc.is_constant() && !acc.is_zero() {
            break;
        }
        acc = gcd(&acc, q)?;
    }
    Ok(acc.normalized())
}

fn active_vars(p: &Polynomial, q: &Polynomial) -> Vec<usize> {
    (0..p.n_vars())
        .filter(|&i| {
            p.terms().any(|(m, _)| m.exponent(i) > 0) || q.terms().any(|(m, _)| m.exponent(i) > 0)
        })
        .collect()
}

fn gcd_zp(p: &Polynomial, q: &Polynomial) -> Polynomial {
    let modulus = p.ring().modulus().unwrap();
    // monomial content comes out first
    let mc = p.monomial_content().gcd(&q.monomial_content());
    let pp = p.div_monomial(&p.monomial_content());
    let qq = q.div_monomial(&q.monomial_content());
    let active = active_vars(&pp, &qq);
    let core = match active.len() {
        0 => Polynomial::one(p.ring(), p.vars().clone()),
        1 => {
            let v = active[0];
            let a = to_unipoly(&pp, v, modulus);
            let b = to_unipoly(&qq, v, modulus);
            from_unipoly(&a.gcd(&b), v, p)
        }
        2 => {
            let a = to_bi(&pp, active[0], active[1], modulus);
            let b = to_bi(&qq, active[0], active[1], modulus);
            from_bi(&a.gcd(&b), active[0], active[1], p)
        }
        _ => {
            let main = *active.last().unwrap();
            gcd_prs(&pp, &qq, main)
        }
    };
    let content_mono = Polynomial::from_terms(
        p.ring(),
        p.vars().clone(),
        [(mc, p.ring().one())],
    );
    core.mul(&content_mono).expect("same ring")
}

fn to_unipoly(p: &Polynomial, var: usize, modulus: u64) -> ModPoly {
    let deg = p
        .terms()
        .map(|(m, _)| m.exponent(var) as usize)
        .max()
        .unwrap_or(0);
    let mut c = vec![0u64; deg + 1];
    for (m, co) in p.terms() {
        c[m.exponent(var) as usize] = co.as_mod();
    }
    ModPoly::new(modulus, c)
}

fn from_unipoly(u: &ModPoly, var: usize, template: &Polynomial) -> Polynomial {
    let n = template.n_vars();
    let terms = u.c.iter().enumerate().filter(|(_, &v)| v != 0).map(|(e, &v)| {
        let mut m = Monomial::constant(n);
        m.0[var] = e as u16;
        (m, Coef::Mod(v))
    });
    Polynomial::from_terms(template.ring(), template.vars().clone(), terms)
}

fn to_bi(p: &Polynomial, vx: usize, vy: usize, modulus: u64) -> Bi {
    let dx = p.terms().map(|(m, _)| m.exponent(vx) as usize).max().unwrap_or(0);
    let dy = p.terms().map(|(m, _)| m.exponent(vy) as usize).max().unwrap_or(0);
    let mut b = Bi {
        p: modulus,
        dx,
        dy,
        c: vec![0u64; (dx + 1) * (dy + 1)],
    };
    for (m, co) in p.terms() {
        b.c[m.exponent(vx) as usize * (dy + 1) + m.exponent(vy) as usize] = co.as_mod();
    }
    b
}

fn from_bi(b: &Bi, vx: usize, vy: usize, template: &Polynomial) -> Polynomial {
    let n = template.n_vars();
    let mut terms = Vec::new();
    for i in 0..=b.dx {
        for j in 0..=b.dy {
            let v = b.at(i, j);
            if v != 0 {
                let mut m = Monomial::constant(n);
                m.0[vx] = i as u16;
                m.0[vy] = j as u16;
                terms.push((m, Coef::Mod(v)));
            }
        }
    }
    Polynomial::from_terms(template.ring(), template.vars().clone(), terms)
}

/// Coefficient vector of `p` seen as a univariate polynomial in `main`.
fn coeffs_in(p: &Polynomial, main: usize) -> Vec<Polynomial> {
    let deg = p
        .terms()
        .map(|(m, _)| m.exponent(main) as usize)
        .max()
        .unwrap_or(0);
    let mut out = vec![Polynomial::zero(p.ring(), p.vars().clone()); deg + 1];
    for (m, c) in p.terms() {
        let e = m.exponent(main) as usize;
        let mut mm = m.clone();
        mm.0[main] = 0;
        out[e] = out[e]
            .add(&Polynomial::from_terms(
                p.ring(),
                p.vars().clone(),
                [(mm, c.clone())],
            ))
            .unwrap();
    }
    out
}

fn assemble(coeffs: &[Polynomial], main: usize, template: &Polynomial) -> Polynomial {
    let mut acc = Polynomial::zero(template.ring(), template.vars().clone());
    for (e, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut xe = Monomial::constant(template.n_vars());
        xe.0[main] = e as u16;
        acc = acc.add(&c.mul_monomial(&xe, &template.ring().one())).unwrap();
    }
    acc
}

/// Content of `p` w.r.t. `main`: gcd of its coefficient polynomials.
fn content_wrt(p: &Polynomial, main: usize) -> Polynomial {
    let coeffs = coeffs_in(p, main);
    let nonzero: Vec<Polynomial> = coeffs.into_iter().filter(|c| !c.is_zero()).collect();
    gcd_many(&nonzero).expect("same ring")
}

/// Primitive PRS gcd with main variable `main` (three or more active vars).
fn gcd_prs(p: &Polynomial, q: &Polynomial, main: usize) -> Polynomial {
    let cont_p = content_wrt(p, main);
    let cont_q = content_wrt(q, main);
    let cont = gcd_zp(&cont_p, &cont_q);
    let mut a = p.exact_div(&cont_p).expect("content divides");
    let mut b = q.exact_div(&cont_q).expect("content divides");

    let deg_in = |f: &Polynomial| -> isize {
        f.terms()
            .map(|(m, _)| m.exponent(main) as isize)
            .max()
            .unwrap_or(-1)
    };
    if deg_in(&a) < deg_in(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.is_zero() {
            break;
        }
        let r = pseudo_rem(&a, &b, main);
        let r = if r.is_zero() {
            r
        } else {
            let rc = content_wrt(&r, main);
            r.exact_div(&rc).expect("content divides")
        };
        a = std::mem::replace(&mut b, r);
    }
    let a_primitive = if a.is_zero() {
        a
    } else {
        let ca = content_wrt(&a, main);
        a.exact_div(&ca).expect("content divides")
    };
    cont.mul(&a_primitive.normalized()).expect("same ring")
}

/// Pseudo-remainder of a by b w.r.t. `main`.
fn pseudo_rem(a: &Polynomial, b: &Polynomial, main: usize) -> Polynomial {
    let bc = coeffs_in(b, main);
    let db = bc.len() - 1;
    let lb = bc[db].clone();
    let mut rc = coeffs_in(a, main);
    loop {
        while rc.len() > 1 && rc.last().unwrap().is_zero() {
            rc.pop();
        }
        let dr = rc.len() - 1;
        if (rc.len() == 1 && rc[0].is_zero()) || dr < db {
            break;
        }
        let lr = rc[dr].clone();
        // r <- lb * r - lr * x^(dr-db) * b
        for c in rc.iter_mut() {
            *c = c.mul(&lb).unwrap();
        }
        for (i, bci) in bc.iter().enumerate() {
            let t = bci.mul(&lr).unwrap();
            rc[i + dr - db] = rc[i + dr - db].sub(&t).unwrap();
        }
        debug_assert!(rc[dr].is_zero());
    }
    assemble(&rc, main, a)
}

const IMAGING_PRIMES: [u64; 10] = [
    2305843009213693951, // 2^61 - 1
    2305843009213693669,
    2305843009213693613,
    2305843009213693561,
    2305843009213693549,
    2305843009213693487,
    2305843009213693381,
    2305843009213693323,
    2305843009213693309,
    2305843009213693241,
];

/// Integer gcd via modular imaging against the prime-field path.
fn gcd_zz(p: &Polynomial, q: &Polynomial) -> Polynomial {
    let int_content = num_integer::Integer::gcd(&p.int_content(), &q.int_content());
    let pp = p.normalized(); // positive primitive
    let qq = q.normalized();
    let lead_gcd = num_integer::Integer::gcd(
        pp.leading().unwrap().1.as_int(),
        qq.leading().unwrap().1.as_int(),
    );

    let mut crt: Option<(Polynomial, BigInt)> = None; // symmetric-lift candidate and modulus
    for &ell in IMAGING_PRIMES.iter() {
        debug_assert!(is_prime_u64(ell));
        let ring = CoefficientRing::PrimeField(ell);
        let pi = pp.to_prime_field(ell);
        let qi = qq.to_prime_field(ell);
        if pi.leading().map(|(m, _)| m) != pp.leading().map(|(m, _)| m)
            || qi.leading().map(|(m, _)| m) != qq.leading().map(|(m, _)| m)
        {
            continue; // leading term collapsed: bad prime
        }
        let gi = gcd_zp(&pi, &qi);
        // scale so the leading coefficient matches lead_gcd mod ell
        let target = ring.from_bigint(&lead_gcd);
        let scale = ring
            .div_exact(&target, gi.leading().unwrap().1)
            .expect("nonzero lead");
        let gi = gi.mul_coef(&scale);

        crt = match crt {
            None => Some((lift_symmetric(&gi, ell), BigInt::from(ell))),
            Some((prev, m)) => {
                let prev_lead = prev.leading().map(|(mm, _)| mm.clone());
                let gi_lead = gi.leading().map(|(mm, _)| mm.clone());
                if gi_lead < prev_lead {
                    // previous primes were all unlucky: restart from this image
                    Some((lift_symmetric(&gi, ell), BigInt::from(ell)))
                } else if gi_lead > prev_lead {
                    Some((prev, m)) // this prime unlucky
                } else {
                    let combined = crt_combine(&prev, &m, &gi, ell);
                    let stable = combined == prev;
                    let next_m = &m * BigInt::from(ell);
                    if stable {
                        let cand = combined.normalized();
                        if cand.divides(&pp) && cand.divides(&qq) {
                            let content_poly = Polynomial::constant(
                                p.ring(),
                                p.vars().clone(),
                                Coef::Int(int_content.clone()),
                            );
                            return cand.mul(&content_poly).expect("same ring");
                        }
                    }
                    Some((combined, next_m))
                }
            }
        };
    }
    // imaging failed to certify within the prime budget; final attempt
    if let Some((cand, _)) = crt {
        let cand = cand.normalized();
        if cand.divides(&pp) && cand.divides(&qq) {
            let content_poly =
                Polynomial::constant(p.ring(), p.vars().clone(), Coef::Int(int_content));
            return cand.mul(&content_poly).expect("same ring");
        }
    }
    // fall back to the only unconditional common divisor
    Polynomial::constant(p.ring(), p.vars().clone(), Coef::Int(int_content))
}

/// Lift a prime-field polynomial to ZZ with coefficients in (-p/2, p/2].
fn lift_symmetric(g: &Polynomial, ell: u64) -> Polynomial {
    let ring = CoefficientRing::ExactInteger;
    let half = ell / 2;
    let terms: Vec<(Monomial, Coef)> = g
        .terms()
        .map(|(m, c)| {
            let v = c.as_mod();
            let signed = if v > half {
                BigInt::from(v) - BigInt::from(ell)
            } else {
                BigInt::from(v)
            };
            (m.clone(), Coef::Int(signed))
        })
        .collect();
    Polynomial::from_terms(ring, g.vars().clone(), terms)
}

/// Combine a symmetric-lift candidate mod m with a fresh image mod ell.
fn crt_combine(prev: &Polynomial, m: &BigInt, gi: &Polynomial, ell: u64) -> Polynomial {
    let ell_big = BigInt::from(ell);
    let m_inv = mod_inverse(m, &ell_big).expect("coprime moduli");
    let new_mod = m * &ell_big;
    let half = &new_mod / 2;
    let ring = CoefficientRing::ExactInteger;
    let mut monos: Vec<Monomial> = prev.terms().map(|(mm, _)| mm.clone()).collect();
    for (mm, _) in gi.terms() {
        if prev.terms().all(|(pm, _)| pm != mm) {
            monos.push(mm.clone());
        }
    }
    let zero = BigInt::zero();
    let terms: Vec<(Monomial, Coef)> = monos
        .into_iter()
        .map(|mm| {
            let a = prev
                .terms()
                .find(|(pm, _)| **pm == mm)
                .map(|(_, c)| c.as_int().clone())
                .unwrap_or_else(|| zero.clone());
            let b = gi
                .terms()
                .find(|(pm, _)| **pm == mm)
                .map(|(_, c)| BigInt::from(c.as_mod()))
                .unwrap_or_else(|| zero.clone());
            // x = a + m * ((b - a) * m^-1 mod ell)
            let mut t = (&b - &a) % &ell_big;
            if t.is_negative() {
                t += &ell_big;
            }
            t = (t * &m_inv) % &ell_big;
            let mut x = a + m * t;
            if x > half {
                x -= &new_mod;
            } else if x < -&half {
                x += &new_mod;
            }
            (mm, Coef::Int(x))
        })
        .filter(|(_, c)| !c.is_zero())
        .collect();
    Polynomial::from_terms(ring, prev.vars().clone(), terms)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = num_integer::Integer::extended_gcd(&a.mod_floor(m), m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

use num_integer::Integer as _;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::poly::varset;
    use crate::ring::DEFAULT_PRIME;

    fn zz(vars: &std::sync::Arc<[String]>, s: &str) -> Polynomial {
        parse_polynomial(s, CoefficientRing::ExactInteger, vars, &[]).unwrap()
    }

    fn fp(vars: &std::sync::Arc<[String]>, s: &str) -> Polynomial {
        parse_polynomial(s, CoefficientRing::PrimeField(DEFAULT_PRIME), vars, &[]).unwrap()
    }

    #[test]
    fn shared_visible_factors() {
        let vars = varset(&["x", "z", "t", "y"]);
        // gcd(x^2 z (t-y), x z^2 (t-y)) = x z (t-y)
        let a = zz(&vars, "x^2*z*(t - y)");
        let b = zz(&vars, "x*z^2*(t - y)");
        let g = gcd(&a, &b).unwrap();
        assert_eq!(g, zz(&vars, "x*z*(t - y)").normalized());
    }

    #[test]
    fn monomial_gcd() {
        let vars = varset(&["x", "y", "z"]);
        let g = gcd(&zz(&vars, "x^3"), &zz(&vars, "x^2*z")).unwrap();
        assert_eq!(g, zz(&vars, "x^2"));
    }

    #[test]
    fn gcd_with_zero_normalizes() {
        let vars = varset(&["x", "y"]);
        let a = zz(&vars, "-6*x^2 - 9*y^2");
        let z = Polynomial::zero(CoefficientRing::ExactInteger, vars.clone());
        assert_eq!(gcd(&a, &z).unwrap(), zz(&vars, "2*x^2 + 3*y^2"));
    }

    #[test]
    fn prime_field_three_vars_prs() {
        let vars = varset(&["x", "y", "z"]);
        let g0 = fp(&vars, "x*y + z^2 + 3");
        let a = fp(&vars, "x^2 + y + 1").mul(&g0).unwrap();
        let b = fp(&vars, "y^2*z + 7*x + 2").mul(&g0).unwrap();
        let g = gcd(&a, &b).unwrap();
        assert_eq!(g, g0.normalized());
    }

    #[test]
    fn integer_multivariate_gcd_via_imaging() {
        let vars = varset(&["x", "y", "z"]);
        let g0 = zz(&vars, "3*x*y - 2*z^2 + 5");
        let a = zz(&vars, "x^2 - 4*y + 1").mul(&g0).unwrap();
        let b = zz(&vars, "7*y*z + 2").mul(&g0).unwrap();
        let g = gcd(&a, &b).unwrap();
        assert_eq!(g, g0.normalized());
    }

    #[test]
    fn five_vars_product_structure() {
        let vars = varset(&["x", "y", "z", "u", "t"]);
        let ring = CoefficientRing::PrimeField(DEFAULT_PRIME);
        let tm = parse_polynomial("t - y", ring, &vars, &[]).unwrap();
        let a = parse_polynomial("x*u*y*(t - y)", ring, &vars, &[]).unwrap();
        let b = parse_polynomial("u*y^2*(t - y)", ring, &vars, &[]).unwrap();
        let g = gcd(&a, &b).unwrap();
        let expect = parse_polynomial("u*y*(t - y)", ring, &vars, &[])
            .unwrap()
            .normalized();
        assert_eq!(g, expect);
        assert!(tm.divides(&g));
    }
}
