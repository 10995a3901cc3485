//! Sparse multivariate polynomials over ZZ or Z/p.
//!
//! Terms are kept in a BTreeMap under graded-lexicographic order, zero
//! coefficients are never stored, and every operation checks ring and
//! variable-list compatibility. All values are immutable after construction;
//! the operations are pure functions.

use crate::mono::Monomial;
use crate::ring::{Coef, CoefficientRing};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Debug, thiserror::Error, PartialEq)]
pub enum PolyError {
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(CoefficientRing, CoefficientRing),
    #[error("variable list mismatch")]
    VariableMismatch,
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("polynomial is not divisible by the divisor")]
    NonDivisible,
    #[error("evaluation point has {0} entries, expected {1}")]
    PointLength(usize, usize),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
}

/// Sparse multivariate polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    ring: CoefficientRing,
    vars: Arc<[String]>,
    terms: BTreeMap<Monomial, Coef>,
}

impl Polynomial {
    pub fn zero(ring: CoefficientRing, vars: Arc<[String]>) -> Self {
        Polynomial {
            ring,
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: CoefficientRing, vars: Arc<[String]>, c: Coef) -> Self {
        let mut p = Self::zero(ring, vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::constant(p.vars.len()), c);
        }
        p
    }

    pub fn one(ring: CoefficientRing, vars: Arc<[String]>) -> Self {
        let one = ring.one();
        Self::constant(ring, vars, one)
    }

    pub fn var(ring: CoefficientRing, vars: Arc<[String]>, idx: usize) -> Self {
        let mut p = Self::zero(ring, vars);
        p.terms
            .insert(Monomial::var(p.vars.len(), idx), p.ring.one());
        p
    }

    /// Build from raw terms, dropping zeros and merging duplicates.
    pub fn from_terms(
        ring: CoefficientRing,
        vars: Arc<[String]>,
        terms: impl IntoIterator<Item = (Monomial, Coef)>,
    ) -> Self {
        let mut p = Self::zero(ring, vars);
        for (m, c) in terms {
            p.add_term_in_place(m, c);
        }
        p
    }

    fn add_term_in_place(&mut self, m: Monomial, c: Coef) {
        debug_assert_eq!(m.n_vars(), self.vars.len());
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = self.ring.add(e.get(), &c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    pub fn vars(&self) -> &Arc<[String]> {
        &self.vars
    }

    pub fn n_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coef)> {
        self.terms.iter()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.leading().unwrap().0.is_constant())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && {
            let (m, c) = self.leading().unwrap();
            m.is_constant() && *c == self.ring.one()
        }
    }

    /// Leading term under grlex.
    pub fn leading(&self) -> Option<(&Monomial, &Coef)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// `Some(d)` if every monomial has total degree d.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let d = it.next()?.total_degree();
        it.all(|m| m.total_degree() == d).then_some(d)
    }

    pub fn check_compatible(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.ring != other.ring {
            return Err(PolyError::RingMismatch(self.ring, other.ring));
        }
        if self.vars != other.vars {
            return Err(PolyError::VariableMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term_in_place(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Polynomial {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.ring.neg(c);
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.ring, self.vars.clone());
        // iterate over the smaller operand outside
        let (a, b) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                out.add_term_in_place(ma.mul(mb), self.ring.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn mul_coef(&self, c: &Coef) -> Polynomial {
        if c.is_zero() {
            return Self::zero(self.ring, self.vars.clone());
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = self.ring.mul(v, c);
        }
        out.terms.retain(|_, v| !v.is_zero());
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Coef) -> Polynomial {
        let mut out = Self::zero(self.ring, self.vars.clone());
        if c.is_zero() {
            return out;
        }
        for (mm, cc) in &self.terms {
            let nc = self.ring.mul(cc, c);
            if !nc.is_zero() {
                out.terms.insert(mm.mul(m), nc);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Result<Polynomial, PolyError> {
        let mut acc = Self::one(self.ring, self.vars.clone());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Exact division: returns `p / q` or `NonDivisible`. This error is
    /// load-bearing: the factor tracker uses it as a trial-division probe.
    pub fn exact_div(&self, q: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_compatible(q)?;
        if q.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let (lm, lc) = q.leading().unwrap();
        let mut rem = self.clone();
        let mut quot = Self::zero(self.ring, self.vars.clone());
        while let Some((rm, rc)) = rem.leading() {
            let qm = rm.try_div(lm).ok_or(PolyError::NonDivisible)?;
            let qc = self
                .ring
                .div_exact(rc, lc)
                .ok_or(PolyError::NonDivisible)?;
            // rem -= (qc * qm) * q
            let sub = q.mul_monomial(&qm, &qc);
            rem = rem.sub(&sub)?;
            quot.add_term_in_place(qm, qc);
        }
        Ok(quot)
    }

    pub fn divides(&self, other: &Polynomial) -> bool {
        other.exact_div(self).is_ok()
    }

    /// Exact value of the polynomial at a point.
    pub fn evaluate(&self, point: &[Coef]) -> Result<Coef, PolyError> {
        if point.len() != self.vars.len() {
            return Err(PolyError::PointLength(point.len(), self.vars.len()));
        }
        // per-variable power cache
        let maxes: Vec<u16> = (0..self.vars.len())
            .map(|i| self.terms.keys().map(|m| m.exponent(i)).max().unwrap_or(0))
            .collect();
        let mut pows: Vec<Vec<Coef>> = Vec::with_capacity(point.len());
        for (i, v) in point.iter().enumerate() {
            let mut col = Vec::with_capacity(maxes[i] as usize + 1);
            col.push(self.ring.one());
            for k in 1..=maxes[i] as usize {
                let prev = col[k - 1].clone();
                col.push(self.ring.mul(&prev, v));
            }
            pows.push(col);
        }
        let mut acc = self.ring.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..self.vars.len() {
                let e = m.exponent(i) as usize;
                if e > 0 {
                    t = self.ring.mul(&t, &pows[i][e]);
                }
            }
            acc = self.ring.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Substitute `var_i = base_i + s * dir_i` and return the dense coefficient
    /// vector of the resulting univariate polynomial in `s` (constant first).
    pub fn restrict_to_line(&self, base: &[Coef], dir: &[Coef]) -> Result<Vec<Coef>, PolyError> {
        if base.len() != self.vars.len() || dir.len() != self.vars.len() {
            return Err(PolyError::PointLength(base.len(), self.vars.len()));
        }
        let deg = self.total_degree().unwrap_or(0) as usize;
        let ring = self.ring;
        let mut out = vec![ring.zero(); deg + 1];
        // per-variable table of (base_i + s dir_i)^e, built incrementally
        let maxes: Vec<u16> = (0..self.vars.len())
            .map(|i| self.terms.keys().map(|m| m.exponent(i)).max().unwrap_or(0))
            .collect();
        let mut pows: Vec<Vec<Vec<Coef>>> = Vec::with_capacity(self.vars.len());
        for i in 0..self.vars.len() {
            let lin = vec![base[i].clone(), dir[i].clone()];
            let mut col = vec![vec![ring.one()]];
            for e in 1..=maxes[i] as usize {
                col.push(mul_dense(ring, &col[e - 1], &lin));
            }
            pows.push(col);
        }
        for (m, c) in &self.terms {
            let mut t = vec![c.clone()];
            for i in 0..self.vars.len() {
                let e = m.exponent(i) as usize;
                if e > 0 {
                    t = mul_dense(ring, &t, &pows[i][e]);
                }
            }
            for (k, v) in t.into_iter().enumerate() {
                out[k] = ring.add(&out[k], &v);
            }
        }
        while out.len() > 1 && out.last().unwrap().is_zero() {
            out.pop();
        }
        Ok(out)
    }

    /// Map to the same polynomial over a prime field (ExactInteger inputs are
    /// reduced mod p; PrimeField inputs must already match the modulus).
    pub fn to_prime_field(&self, p: u64) -> Polynomial {
        let ring = CoefficientRing::PrimeField(p);
        let mut out = Polynomial::zero(ring, self.vars.clone());
        for (m, c) in &self.terms {
            let nc = match c {
                Coef::Int(v) => ring.from_bigint(v),
                Coef::Mod(v) => Coef::Mod(v % p),
            };
            out.add_term_in_place(m.clone(), nc);
        }
        out
    }

    /// Integer content (gcd of coefficients), positive. ZZ only.
    pub fn int_content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = num_integer::Integer::gcd(&g, c.as_int());
            if g == BigInt::from(1) {
                break;
            }
        }
        g.abs()
    }

    /// Normalize: monic leading coefficient over a prime field, positive
    /// primitive over ZZ. Zero stays zero.
    pub fn normalized(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        match self.ring {
            CoefficientRing::PrimeField(_) => {
                let lc = self.leading().unwrap().1.clone();
                let inv = self.ring.inv(&lc).expect("nonzero leading coefficient");
                self.mul_coef(&inv)
            }
            CoefficientRing::ExactInteger => {
                let mut content = self.int_content();
                if content.is_zero() {
                    return self.clone();
                }
                if self.leading().unwrap().1.as_int().is_negative() {
                    content = -content;
                }
                let c = Coef::Int(content);
                let mut out = Self::zero(self.ring, self.vars.clone());
                for (m, v) in &self.terms {
                    out.terms.insert(
                        m.clone(),
                        self.ring.div_exact(v, &c).expect("content divides"),
                    );
                }
                out
            }
        }
    }

    /// The gcd of all monomials (componentwise min exponent).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let mut g = match it.next() {
            Some(m) => m.clone(),
            None => return Monomial::constant(self.vars.len()),
        };
        for m in it {
            g = g.gcd(m);
        }
        g
    }

    /// Divide out a monomial known to divide every term.
    pub fn div_monomial(&self, m: &Monomial) -> Polynomial {
        let mut out = Self::zero(self.ring, self.vars.clone());
        for (mm, cc) in &self.terms {
            out.terms
                .insert(mm.try_div(m).expect("monomial divides"), cc.clone());
        }
        out
    }
}

fn mul_dense(ring: CoefficientRing, a: &[Coef], b: &[Coef]) -> Vec<Coef> {
    let mut out = vec![ring.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let t = ring.mul(x, y);
            out[i + j] = ring.add(&out[i + j], &t);
        }
    }
    out
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        // highest term first
        for (m, c) in self.terms.iter().rev() {
            let (neg, mag) = match c {
                Coef::Int(v) => (v.is_negative(), v.abs().to_string()),
                Coef::Mod(v) => (false, v.to_string()),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut parts: Vec<String> = Vec::new();
            if mag != "1" || m.is_constant() {
                parts.push(mag);
            }
            for (i, name) in self.vars.iter().enumerate() {
                match m.exponent(i) {
                    0 => {}
                    1 => parts.push(name.clone()),
                    e => parts.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

pub fn varset(names: &[&str]) -> Arc<[String]> {
    names.iter().map(|s| s.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    fn zz(vars: &Arc<[String]>, text: &str) -> Polynomial {
        parse_polynomial(text, CoefficientRing::ExactInteger, vars, &[]).unwrap()
    }

    #[test]
    fn add_cancellation() {
        let vars = varset(&["x", "y", "z"]);
        let p = zz(&vars, "x");
        let q = zz(&vars, "-x");
        assert!(p.add(&q).unwrap().is_zero());
    }

    #[test]
    fn add_assembles_hv_first_coordinate() {
        // (x^3) + (a z^3 - y x^2) with a = 2 bound at parse time
        let vars = varset(&["x", "y", "z"]);
        let p = zz(&vars, "x^3");
        let q = parse_polynomial(
            "a*z^3 - y*x^2",
            CoefficientRing::ExactInteger,
            &vars,
            &[("a".to_string(), Coef::Int(BigInt::from(2)))],
        )
        .unwrap();
        let s = p.add(&q).unwrap();
        assert_eq!(s, zz(&vars, "x^3 + 2*z^3 - y*x^2"));
        assert_eq!(s.homogeneous_degree(), Some(3));
    }

    #[test]
    fn add_modular_reduction() {
        let vars = varset(&["x"]);
        let ring = CoefficientRing::PrimeField(5);
        let p = parse_polynomial("3*x", ring, &vars, &[]).unwrap();
        let q = parse_polynomial("4*x", ring, &vars, &[]).unwrap();
        let s = p.add(&q).unwrap();
        assert_eq!(s, parse_polynomial("2*x", ring, &vars, &[]).unwrap());
    }

    #[test]
    fn mul_basics() {
        let vars = varset(&["x", "y", "z", "t"]);
        let x = zz(&vars, "x");
        assert_eq!(x.mul(&zz(&vars, "1")).unwrap(), x);
        let p = zz(&vars, "t - y").mul(&zz(&vars, "t + y")).unwrap();
        assert_eq!(p, zz(&vars, "t^2 - y^2"));
        let q = zz(&vars, "x^2").mul(&zz(&vars, "z")).unwrap();
        assert_eq!(q, zz(&vars, "x^2*z"));
    }

    #[test]
    fn exact_div_cases() {
        let vars = varset(&["x", "y", "z", "t"]);
        let p = zz(&vars, "t^2 - y^2");
        assert_eq!(
            p.exact_div(&zz(&vars, "t - y")).unwrap(),
            zz(&vars, "t + y")
        );
        assert_eq!(
            zz(&vars, "x^2*z").exact_div(&zz(&vars, "x")).unwrap(),
            zz(&vars, "x*z")
        );
        let hv = zz(&vars, "x^3 + 2*z^3 - y*x^2");
        assert_eq!(
            hv.exact_div(&zz(&vars, "z")).unwrap_err(),
            PolyError::NonDivisible
        );
    }

    #[test]
    fn evaluate_cases() {
        let vars = varset(&["x", "y", "z"]);
        let p = zz(&vars, "x^2*z");
        let v = p
            .evaluate(&[
                Coef::Int(BigInt::from(2)),
                Coef::Int(BigInt::from(0)),
                Coef::Int(BigInt::from(3)),
            ])
            .unwrap();
        assert_eq!(v, Coef::Int(BigInt::from(12)));

        // B_1 = t - y vanishing at y = t = 1
        let vars5 = varset(&["x", "y", "z", "u", "t"]);
        let b1 = zz(&vars5, "t - y");
        let pt: Vec<Coef> = [7, 1, 3, 4, 1]
            .iter()
            .map(|&v| Coef::Int(BigInt::from(v)))
            .collect();
        assert!(b1.evaluate(&pt).unwrap().is_zero());

        let ring = CoefficientRing::PrimeField(7);
        let x3 = parse_polynomial("x^3", ring, &varset(&["x"]), &[]).unwrap();
        assert_eq!(x3.evaluate(&[Coef::Mod(2)]).unwrap(), Coef::Mod(1));
    }

    #[test]
    fn restriction_cases() {
        let vars = varset(&["x", "y", "z"]);
        let p = zz(&vars, "x^2*z");
        let zero = Coef::Int(BigInt::zero());
        let one = Coef::Int(BigInt::from(1));
        let line = p
            .restrict_to_line(
                &[zero.clone(), zero.clone(), zero.clone()],
                &[one.clone(), one.clone(), one.clone()],
            )
            .unwrap();
        // s^3
        assert_eq!(line.len(), 4);
        assert!(line[0].is_zero() && line[1].is_zero() && line[2].is_zero());
        assert_eq!(line[3], one);

        // t - y along base (0,1,0,0,1): constant term 0, slope dir_t - dir_y
        let vars5 = varset(&["x", "y", "z", "u", "t"]);
        let b1 = zz(&vars5, "t - y");
        let base: Vec<Coef> = [0, 1, 0, 0, 1]
            .iter()
            .map(|&v| Coef::Int(BigInt::from(v)))
            .collect();
        let dir: Vec<Coef> = [5, 2, 9, 11, 13]
            .iter()
            .map(|&v| Coef::Int(BigInt::from(v)))
            .collect();
        let l = b1.restrict_to_line(&base, &dir).unwrap();
        assert!(l[0].is_zero());
        assert_eq!(l[1], Coef::Int(BigInt::from(13 - 2)));
    }

    #[test]
    fn normalization() {
        let vars = varset(&["x", "y"]);
        let p = zz(&vars, "-4*x^2 - 6*y^2");
        assert_eq!(p.normalized(), zz(&vars, "2*x^2 + 3*y^2"));
        let ring = CoefficientRing::PrimeField(7);
        let q = parse_polynomial("3*x + 1", ring, &varset(&["x"]), &[]).unwrap();
        let n = q.normalized();
        assert_eq!(n.leading().unwrap().1, &Coef::Mod(1));
    }
}
