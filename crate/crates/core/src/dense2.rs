//! Dense bivariate polynomials over Z/p.
//!
//! Homogeneous trivariate polynomials dehomogenize to this shape and all of
//! the heavy map-engine arithmetic happens here: multiplication goes through
//! Kronecker substitution into the univariate NTT layer, exact division
//! divides the packed forms (with degree-bound checks that make the result
//! unconditional), and gcd is Brown's evaluate/interpolate scheme certified
//! by trial division.

use crate::mono::Monomial;
use crate::poly::{PolyError, Polynomial};
use crate::ring::{add_mod, inv_mod, mul_mod, sub_mod, Coef, CoefficientRing};
use crate::uni::ModPoly;
use std::sync::Arc;

/// Dense bivariate poly: coefficient of x^i y^j at `c[i * (dy + 1) + j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bi {
    pub p: u64,
    pub dx: usize,
    pub dy: usize,
    pub c: Vec<u64>,
}

impl Bi {
    pub fn zero(p: u64) -> Self {
        Bi {
            p,
            dx: 0,
            dy: 0,
            c: vec![0],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&v| v == 0)
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> u64 {
        self.c[i * (self.dy + 1) + j]
    }

    /// Drop unused high rows/columns.
    pub fn compact(mut self) -> Self {
        let stride = self.dy + 1;
        let mut mx = 0usize;
        let mut my = 0usize;
        let mut any = false;
        for i in 0..=self.dx {
            for j in 0..=self.dy {
                if self.c[i * stride + j] != 0 {
                    mx = mx.max(i);
                    my = my.max(j);
                    any = true;
                }
            }
        }
        if !any {
            return Bi::zero(self.p);
        }
        if mx == self.dx && my == self.dy {
            return self;
        }
        let mut c = vec![0u64; (mx + 1) * (my + 1)];
        for i in 0..=mx {
            for j in 0..=my {
                c[i * (my + 1) + j] = self.c[i * stride + j];
            }
        }
        self.dx = mx;
        self.dy = my;
        self.c = c;
        self
    }

    pub fn total_degree(&self) -> usize {
        let mut d = 0;
        for i in 0..=self.dx {
            for j in 0..=self.dy {
                if self.at(i, j) != 0 {
                    d = d.max(i + j);
                }
            }
        }
        d
    }

    pub fn n_terms(&self) -> usize {
        self.c.iter().filter(|&&v| v != 0).count()
    }

    /// Kronecker pack with y-stride `base` (requires dy < base).
    fn pack(&self, base: usize) -> ModPoly {
        debug_assert!(self.dy < base);
        let mut c = vec![0u64; self.dx * base + self.dy + 1];
        for i in 0..=self.dx {
            for j in 0..=self.dy {
                let v = self.at(i, j);
                if v != 0 {
                    c[i * base + j] = v;
                }
            }
        }
        ModPoly::new(self.p, c)
    }

    /// Inverse of `pack`; `None` when a nonzero entry violates the given
    /// degree bounds (which signals an invalid packed operation).
    fn unpack(packed: &ModPoly, p: u64, base: usize, bx: usize, by: usize) -> Option<Bi> {
        let mut out = Bi {
            p,
            dx: bx,
            dy: by,
            c: vec![0u64; (bx + 1) * (by + 1)],
        };
        for (k, &v) in packed.c.iter().enumerate() {
            if v == 0 {
                continue;
            }
            let i = k / base;
            let j = k % base;
            if i > bx || j > by {
                return None;
            }
            out.c[i * (by + 1) + j] = v;
        }
        Some(out)
    }

    pub fn add(&self, other: &Bi) -> Bi {
        let p = self.p;
        let dx = self.dx.max(other.dx);
        let dy = self.dy.max(other.dy);
        let mut out = Bi {
            p,
            dx,
            dy,
            c: vec![0u64; (dx + 1) * (dy + 1)],
        };
        for i in 0..=dx {
            for j in 0..=dy {
                let a = if i <= self.dx && j <= self.dy {
                    self.at(i, j)
                } else {
                    0
                };
                let b = if i <= other.dx && j <= other.dy {
                    other.at(i, j)
                } else {
                    0
                };
                out.c[i * (dy + 1) + j] = add_mod(a, b, p);
            }
        }
        out.compact()
    }

    pub fn sub(&self, other: &Bi) -> Bi {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Bi {
        let p = self.p;
        Bi {
            p,
            dx: self.dx,
            dy: self.dy,
            c: self
                .c
                .iter()
                .map(|&v| if v == 0 { 0 } else { p - v })
                .collect(),
        }
    }

    pub fn scale(&self, k: u64) -> Bi {
        Bi {
            p: self.p,
            dx: self.dx,
            dy: self.dy,
            c: self.c.iter().map(|&v| mul_mod(v, k, self.p)).collect(),
        }
        .compact()
    }

    pub fn mul(&self, other: &Bi) -> Bi {
        if self.is_zero() || other.is_zero() {
            return Bi::zero(self.p);
        }
        let base = self.dy + other.dy + 1;
        let pa = self.pack(base);
        let pb = other.pack(base);
        let prod = pa.mul(&pb);
        Bi::unpack(&prod, self.p, base, self.dx + other.dx, self.dy + other.dy)
            .expect("product within bounds")
            .compact()
    }

    /// Exact division certified by packed-exactness plus degree bounds:
    /// if the packed quotient exists and the unpacked degrees satisfy
    /// deg_x(q)+deg_x(d) <= deg_x(self) and likewise in y, the bivariate
    /// identity q*d = self holds unconditionally.
    pub fn exact_div(&self, d: &Bi) -> Option<Bi> {
        if self.is_zero() {
            return Some(Bi::zero(self.p));
        }
        if d.is_zero() || d.dx > self.dx || d.dy > self.dy {
            return None;
        }
        let base = self.dy + 1;
        let pa = self.pack(base);
        let pd = d.pack(base);
        let q = pa.exact_div(&pd)?;
        let qb = Bi::unpack(&q, self.p, base, self.dx - d.dx, self.dy - d.dy)?;
        let qb = qb.compact();
        // bound check makes the packed identity faithful bivariatately
        if qb.dx + d.dx <= self.dx && qb.dy + d.dy <= self.dy {
            Some(qb)
        } else {
            None
        }
    }

    /// Substitute y = t, returning the univariate polynomial in x.
    pub fn eval_y(&self, t: u64) -> ModPoly {
        let p = self.p;
        let mut c = Vec::with_capacity(self.dx + 1);
        for i in 0..=self.dx {
            let row = &self.c[i * (self.dy + 1)..(i + 1) * (self.dy + 1)];
            // Horner in y
            let mut acc = 0u64;
            for &v in row.iter().rev() {
                acc = add_mod(mul_mod(acc, t, p), v, p);
            }
            c.push(acc);
        }
        ModPoly::new(p, c)
    }

    /// Leading coefficient w.r.t. x as a polynomial in y.
    fn lc_x(&self) -> ModPoly {
        let row = &self.c[self.dx * (self.dy + 1)..];
        ModPoly::new(self.p, row.to_vec())
    }

    /// Brown's modular bivariate gcd: evaluate y at points, take univariate
    /// gcds in x, interpolate, certify by exact division of both inputs.
    /// Returns a gcd normalized to monic leading coefficient (grlex sense is
    /// restored on conversion back to the sparse representation).
    pub fn gcd(&self, other: &Bi) -> Bi {
        let p = self.p;
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        // contents w.r.t. x: gcd of the y-coefficient rows
        let cont_f = self.content_x();
        let cont_g = other.content_x();
        let f = self.div_content_x(&cont_f);
        let g = other.div_content_x(&cont_g);
        let cont = cont_f.gcd(&cont_g);
        let gamma = f.lc_x().gcd(&g.lc_x());
        let bound = f.dy.min(g.dy) + (gamma.deg().max(0) as usize) + 2;

        let mut interp = NewtonInterp::new(p);
        let mut dstar: Option<usize> = None;
        let mut t = 1u64;
        let mut tried = 0u64;
        loop {
            tried += 1;
            assert!(tried < 8 * bound as u64 + 64, "ran out of evaluation points");
            let tv = t;
            t += 1;
            if f.lc_x().eval(tv) == 0 || g.lc_x().eval(tv) == 0 {
                continue; // unlucky: leading term vanishes
            }
            let fu = f.eval_y(tv);
            let gu = g.eval_y(tv);
            let h = fu.gcd(&gu);
            let hd = h.deg() as usize;
            match dstar {
                Some(ds) if hd > ds => continue, // unlucky point
                Some(ds) if hd < ds => {
                    // everything so far was unlucky; restart
                    interp = NewtonInterp::new(p);
                    dstar = Some(hd);
                }
                None => dstar = Some(hd),
                _ => {}
            }
            if dstar == Some(0) {
                // coprime primitive parts
                return scalar_bi(p, 1).mul_content(&cont);
            }
            // normalize image: monic h scaled by gamma(t)
            let img = h.scale(gamma.eval(tv));
            interp.push(tv, &img);
            if interp.points() >= 2 && interp.stable() {
                if let Some(cand) = interp.result(dstar.unwrap()) {
                    // primitive part and certification
                    let cand_cont = cand.content_x();
                    let cand_pp = cand.div_content_x(&cand_cont);
                    if f.exact_div(&cand_pp).is_some() && g.exact_div(&cand_pp).is_some() {
                        return cand_pp.mul_content(&cont);
                    }
                }
            }
            if interp.points() > bound + 8 {
                // interpolation refuses to stabilize: inputs were not as
                // expected; fall back to certifying with more points
                interp = NewtonInterp::new(p);
                dstar = None;
            }
        }
    }

    /// gcd of all x-coefficient rows (univariate in y).
    fn content_x(&self) -> ModPoly {
        let mut acc = ModPoly::zero(self.p);
        for i in 0..=self.dx {
            let row = ModPoly::new(self.p, self.c[i * (self.dy + 1)..(i + 1) * (self.dy + 1)].to_vec());
            acc = acc.gcd(&row);
            if acc.deg() == 0 {
                return ModPoly::one(self.p);
            }
        }
        acc
    }

    fn div_content_x(&self, cont: &ModPoly) -> Bi {
        if cont.deg() == 0 {
            return self.scale(inv_mod(cont.c[0], self.p)).compact();
        }
        let mut out = Bi {
            p: self.p,
            dx: self.dx,
            dy: self.dy,
            c: vec![0u64; self.c.len()],
        };
        for i in 0..=self.dx {
            let row = ModPoly::new(
                self.p,
                self.c[i * (self.dy + 1)..(i + 1) * (self.dy + 1)].to_vec(),
            );
            let q = row.exact_div(cont).expect("content divides");
            for (j, &v) in q.c.iter().enumerate() {
                out.c[i * (self.dy + 1) + j] = v;
            }
        }
        out.compact()
    }

    fn mul_content(&self, cont: &ModPoly) -> Bi {
        if cont.deg() == 0 {
            return self.scale(cont.c.first().copied().unwrap_or(0));
        }
        let cont_bi = Bi {
            p: self.p,
            dx: 0,
            dy: cont.c.len() - 1,
            c: cont.c.clone(),
        };
        self.mul(&cont_bi)
    }
}

fn scalar_bi(p: u64, v: u64) -> Bi {
    Bi {
        p,
        dx: 0,
        dy: 0,
        c: vec![v],
    }
}

/// Incremental Newton interpolation of a univariate-in-x polynomial whose
/// coefficients are functions of y sampled at the pushed points.
struct NewtonInterp {
    p: u64,
    ts: Vec<u64>,
    /// Newton coefficients per layer: layer k holds a vector over x-degrees.
    layers: Vec<Vec<u64>>,
    last_was_zero: bool,
    width: usize,
}

impl NewtonInterp {
    fn new(p: u64) -> Self {
        NewtonInterp {
            p,
            ts: Vec::new(),
            layers: Vec::new(),
            last_was_zero: false,
            width: 0,
        }
    }

    fn points(&self) -> usize {
        self.ts.len()
    }

    fn push(&mut self, t: u64, img: &ModPoly) {
        let p = self.p;
        self.width = self.width.max(img.c.len());
        let mut vals: Vec<u64> = img.c.clone();
        vals.resize(self.width, 0);
        // divided difference against existing layers
        let mut num = vals;
        for (k, layer) in self.layers.iter().enumerate() {
            // num <- (num - layer) / (t - t_k)
            let denom = inv_mod(sub_mod(t % p, self.ts[k] % p, p), p);
            for (x, n) in num.iter_mut().enumerate() {
                let l = layer.get(x).copied().unwrap_or(0);
                *n = mul_mod(sub_mod(*n, l, p), denom, p);
            }
        }
        self.last_was_zero = num.iter().all(|&v| v == 0);
        self.ts.push(t);
        self.layers.push(num);
    }

    fn stable(&self) -> bool {
        self.last_was_zero
    }

    /// Materialize the interpolated bivariate polynomial (x-degree dstar).
    fn result(&self, dstar: usize) -> Option<Bi> {
        let p = self.p;
        let n = self.ts.len();
        if n == 0 {
            return None;
        }
        // Horner over the Newton basis: B = layer_{n-1}; B = B*(y - t_k) + layer_k
        let dy = n - 1;
        let mut rows: Vec<Vec<u64>> = vec![vec![0u64; dy + 1]; dstar + 1];
        for x in 0..=dstar {
            let mut acc = vec![0u64; dy + 1];
            for k in (0..n).rev() {
                // acc = acc * (y - t_k) + layer_k[x]
                let tk = self.ts[k] % p;
                let mut next = vec![0u64; dy + 1];
                for j in (0..dy).rev() {
                    let v = acc[j];
                    if v != 0 {
                        next[j + 1] = add_mod(next[j + 1], v, p);
                        next[j] = sub_mod(next[j], mul_mod(v, tk, p), p);
                    }
                }
                next[0] = add_mod(next[0], self.layers[k].get(x).copied().unwrap_or(0), p);
                acc = next;
            }
            rows[x] = acc;
        }
        let mut out = Bi {
            p,
            dx: dstar,
            dy,
            c: vec![0u64; (dstar + 1) * (dy + 1)],
        };
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                out.c[i * (dy + 1) + j] = v;
            }
        }
        Some(out.compact())
    }
}

/// Dehomogenize a homogeneous polynomial in exactly 3 variables by setting
/// the last variable to 1. Returns the dense bivariate image and the total
/// degree.
pub fn from_homogeneous(poly: &Polynomial) -> Result<(Bi, u32), PolyError> {
    let p = match poly.ring() {
        CoefficientRing::PrimeField(p) => p,
        CoefficientRing::ExactInteger => {
            return Err(PolyError::RingMismatch(
                poly.ring(),
                CoefficientRing::default_prime_field(),
            ))
        }
    };
    if poly.n_vars() != 3 {
        return Err(PolyError::VariableMismatch);
    }
    let d = poly
        .homogeneous_degree()
        .ok_or(PolyError::VariableMismatch)? as usize;
    let mut out = Bi {
        p,
        dx: d,
        dy: d,
        c: vec![0u64; (d + 1) * (d + 1)],
    };
    for (m, c) in poly.terms() {
        let i = m.exponent(0) as usize;
        let j = m.exponent(1) as usize;
        out.c[i * (d + 1) + j] = c.as_mod();
    }
    Ok((out.compact(), d as u32))
}

/// Homogenize a dense bivariate image back to 3 variables at total degree d.
pub fn to_homogeneous(bi: &Bi, d: u32, vars: &Arc<[String]>) -> Polynomial {
    let ring = CoefficientRing::PrimeField(bi.p);
    let mut terms = Vec::new();
    for i in 0..=bi.dx {
        for j in 0..=bi.dy {
            let v = bi.at(i, j);
            if v != 0 {
                debug_assert!(i + j <= d as usize);
                let k = d as usize - i - j;
                terms.push((
                    Monomial::from_exponents(&[i as u16, j as u16, k as u16]),
                    Coef::Mod(v),
                ));
            }
        }
    }
    Polynomial::from_terms(ring, vars.clone(), terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::poly::varset;
    use crate::ring::DEFAULT_PRIME;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_bi(p: u64, dx: usize, dy: usize, rng: &mut ChaCha8Rng) -> Bi {
        let mut b = Bi {
            p,
            dx,
            dy,
            c: (0..(dx + 1) * (dy + 1)).map(|_| rng.gen_range(0..p)).collect(),
        };
        b.c[dx * (dy + 1) + dy] = 1; // ensure full degree
        b
    }

    #[test]
    fn mul_matches_sparse() {
        let p = DEFAULT_PRIME;
        let ring = CoefficientRing::PrimeField(p);
        let vars = varset(&["x", "y", "z"]);
        let a = parse_polynomial("x^3 + 2*z^3 - y*x^2", ring, &vars, &[]).unwrap();
        let b = parse_polynomial("x^2*z + 5*y^3 - z^3", ring, &vars, &[]).unwrap();
        let (ba, da) = from_homogeneous(&a).unwrap();
        let (bb, db) = from_homogeneous(&b).unwrap();
        let prod = ba.mul(&bb);
        let expect = a.mul(&b).unwrap();
        assert_eq!(to_homogeneous(&prod, da + db, &vars), expect);
    }

    #[test]
    fn exact_div_round_trip_and_reject() {
        let p = DEFAULT_PRIME;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_bi(p, 9, 7, &mut rng);
        let b = random_bi(p, 6, 5, &mut rng);
        let prod = a.mul(&b);
        assert_eq!(prod.exact_div(&b).unwrap(), a.clone().compact());
        let mut bumped = prod.clone();
        bumped.c[0] = add_mod(bumped.c[0], 1, p);
        assert!(bumped.exact_div(&b).is_none());
    }

    #[test]
    fn brown_gcd_with_planted_factor() {
        let p = DEFAULT_PRIME;
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for (dgx, dgy, d1, d2) in [(3usize, 2usize, 8usize, 7usize), (10, 6, 25, 30)] {
            let g = random_bi(p, dgx, dgy, &mut rng);
            let a = random_bi(p, d1, d1, &mut rng).mul(&g);
            let b = random_bi(p, d2, d2, &mut rng).mul(&g);
            let h = a.gcd(&b);
            assert!(a.exact_div(&h).is_some());
            assert!(b.exact_div(&h).is_some());
            assert_eq!(h.dx, g.dx, "x-degree of gcd");
            assert!(h.exact_div(&g.div_content_x(&g.content_x())).is_some());
        }
    }

    #[test]
    fn brown_gcd_coprime_is_constant() {
        let p = DEFAULT_PRIME;
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let a = random_bi(p, 12, 9, &mut rng);
        let b = random_bi(p, 11, 10, &mut rng);
        let h = a.gcd(&b);
        assert_eq!(h.total_degree(), 0);
    }
}
