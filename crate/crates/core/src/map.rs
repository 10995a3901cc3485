//! Birational self-maps of projective space: the map file format, validation,
//! exact iteration, conjugation, and the birationality check.

use crate::gcd::{gcd_many, gcd};
use crate::parse::{parse_polynomial, SyntaxError};
use crate::poly::{PolyError, Polynomial};
use crate::ring::{Coef, CoefficientRing};
use rand::Rng;
use serde::Deserialize;
use std::sync::Arc;
use std::time::Instant;

#[derive(Clone, Debug, thiserror::Error)]
pub enum MapError {
    #[error("{0}")]
    Syntax(#[from] SyntaxError),
    #[error("map file: {0}")]
    Format(String),
    #[error("coordinate {index} ({text}) is not homogeneous")]
    NonHomogeneous { index: usize, text: String },
    #[error("coordinate {index} has degree {got}, expected {expected}")]
    DegreeMismatch {
        index: usize,
        got: u32,
        expected: u32,
    },
    #[error("the coordinates share the nontrivial common factor {0}")]
    NotReduced(String),
    #[error("declared inverse fails the composition check at a random point")]
    InverseMismatch,
    #[error("map has no declared inverse")]
    InverseMissing,
    #[error("all coordinates vanished after reduction (total indeterminacy)")]
    AllCoordinatesZero,
    #[error("conjugation matrix is singular")]
    SingularMatrix,
    #[error("iteration budget exhausted at n = {0}")]
    BudgetExceeded(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Raw map-definition document.
///
/// ```toml
/// [map]
/// vars = ["x", "y", "z"]
/// params = ["a"]
/// phi = ["x^3 + a*z^3 - y*x^2", "x^3", "x^2*z"]
/// psi = ["..."]            # optional inverse
/// bind = { a = 2 }         # optional parameter values
/// ```
#[derive(Debug, Deserialize)]
struct MapFileDoc {
    map: MapFileBody,
}

#[derive(Debug, Deserialize)]
struct MapFileBody {
    vars: Vec<String>,
    #[serde(default)]
    params: Vec<String>,
    phi: Vec<String>,
    #[serde(default)]
    psi: Option<Vec<String>>,
    #[serde(default)]
    bind: Option<toml::value::Table>,
}

/// A validated birational self-map of P^N given by N+1 homogeneous forms.
#[derive(Clone, Debug)]
pub struct ProjectiveMap {
    pub map_id: String,
    vars: Arc<[String]>,
    params: Vec<(String, Coef)>,
    forward: Vec<Polynomial>,
    inverse: Option<Vec<Polynomial>>,
    degree: u32,
}

/// One reduced iterate of the orbit of the generic point.
#[derive(Clone, Debug)]
pub struct IterateState {
    pub index: usize,
    pub coordinates: Vec<Polynomial>,
    pub degree: u32,
}

impl ProjectiveMap {
    /// Parse and validate a map file. Unbound parameters are given fresh
    /// random nonzero values in the coefficient ring (recorded on the map).
    pub fn parse<R: Rng>(
        text: &str,
        map_id: &str,
        ring: CoefficientRing,
        rng: &mut R,
    ) -> Result<ProjectiveMap, MapError> {
        let doc: MapFileDoc = toml::from_str(text).map_err(|e| MapError::Format(e.to_string()))?;
        let body = doc.map;
        if body.vars.is_empty() {
            return Err(MapError::Format("vars must be nonempty".into()));
        }
        if body.phi.len() != body.vars.len() {
            return Err(MapError::Format(format!(
                "phi has {} coordinates for {} variables",
                body.phi.len(),
                body.vars.len()
            )));
        }
        let vars: Arc<[String]> = body.vars.iter().cloned().collect();

        // bind parameters: explicit binds first, random nonzero otherwise
        let mut params: Vec<(String, Coef)> = Vec::new();
        for name in &body.params {
            let bound = body.bind.as_ref().and_then(|t| t.get(name));
            let value = match bound {
                Some(toml::Value::Integer(v)) => ring.from_i64(*v),
                Some(other) => {
                    return Err(MapError::Format(format!(
                        "bind for `{name}` must be an integer, got {other}"
                    )))
                }
                None => {
                    let modulus = ring.modulus().unwrap_or((1 << 31) - 1);
                    let v = rng.gen_range(1..modulus.min(1 << 31));
                    ring.from_i64(v as i64)
                }
            };
            params.push((name.clone(), value));
        }
        if let Some(bind) = &body.bind {
            for key in bind.keys() {
                if !body.params.contains(key) {
                    return Err(MapError::Format(format!(
                        "bind refers to `{key}` which is not in params"
                    )));
                }
            }
        }

        let parse_coords = |texts: &[String]| -> Result<Vec<Polynomial>, MapError> {
            texts
                .iter()
                .map(|t| parse_polynomial(t, ring, &vars, &params).map_err(MapError::from))
                .collect()
        };
        let forward = parse_coords(&body.phi)?;
        let degree = validate_homogeneous(&forward, &body.phi)?;
        let g = gcd_many(&forward)?;
        if !g.is_constant() {
            return Err(MapError::NotReduced(g.to_string()));
        }
        let inverse = match &body.psi {
            None => None,
            Some(psi) => {
                if psi.len() != body.vars.len() {
                    return Err(MapError::Format(format!(
                        "psi has {} coordinates for {} variables",
                        psi.len(),
                        body.vars.len()
                    )));
                }
                let inv = parse_coords(psi)?;
                validate_homogeneous(&inv, psi)?;
                Some(inv)
            }
        };
        let map = ProjectiveMap {
            map_id: map_id.to_string(),
            vars,
            params,
            forward,
            inverse,
            degree,
        };
        if map.inverse.is_some() && !map.inverse_check_once(rng) {
            return Err(MapError::InverseMismatch);
        }
        Ok(map)
    }

    pub fn vars(&self) -> &Arc<[String]> {
        &self.vars
    }

    pub fn n_coords(&self) -> usize {
        self.vars.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn ring(&self) -> CoefficientRing {
        self.forward[0].ring()
    }

    pub fn forward(&self) -> &[Polynomial] {
        &self.forward
    }

    pub fn inverse(&self) -> Option<&[Polynomial]> {
        self.inverse.as_deref()
    }

    pub fn params(&self) -> &[(String, Coef)] {
        &self.params
    }

    /// The orbit start: coordinates are the variables themselves.
    pub fn generic_point(&self) -> IterateState {
        let coords = (0..self.vars.len())
            .map(|i| Polynomial::var(self.ring(), self.vars.clone(), i))
            .collect();
        IterateState {
            index: 0,
            coordinates: coords,
            degree: 1,
        }
    }

    /// One exact iteration step: compose, then divide out the common factor.
    pub fn apply(&self, state: &IterateState) -> Result<IterateState, MapError> {
        let composed: Vec<Polynomial> = self
            .forward
            .iter()
            .map(|f| compose(f, &state.coordinates))
            .collect::<Result<_, _>>()?;
        if composed.iter().all(|c| c.is_zero()) {
            return Err(MapError::AllCoordinatesZero);
        }
        let g = gcd_many(&composed)?;
        let reduced: Vec<Polynomial> = composed
            .iter()
            .map(|c| {
                if c.is_zero() {
                    Ok(c.clone())
                } else {
                    c.exact_div(&g)
                }
            })
            .collect::<Result<_, _>>()?;
        let degree = reduced
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| c.total_degree().unwrap())
            .max()
            .ok_or(MapError::AllCoordinatesZero)?;
        debug_assert!(reduced
            .iter()
            .filter(|c| !c.is_zero())
            .all(|c| c.homogeneous_degree() == Some(degree)));
        Ok(IterateState {
            index: state.index + 1,
            coordinates: reduced,
            degree,
        })
    }

    /// Sample-based check that forward(inverse(P)) is proportional to P.
    pub fn check_birational<R: Rng>(
        &self,
        samples: usize,
        rng: &mut R,
    ) -> Result<BirationalityReport, MapError> {
        let inverse = self.inverse.as_ref().ok_or(MapError::InverseMissing)?;
        let p = self.ring().modulus().unwrap_or(crate::ring::DEFAULT_PRIME);
        let field = CoefficientRing::PrimeField(p);
        let fwd: Vec<Polynomial> = self.forward.iter().map(|f| f.to_prime_field(p)).collect();
        let inv: Vec<Polynomial> = inverse.iter().map(|f| f.to_prime_field(p)).collect();
        let mut results = Vec::with_capacity(samples);
        let mut tries = 0;
        while results.len() < samples {
            tries += 1;
            if tries > 20 * samples + 100 {
                break;
            }
            let point: Vec<Coef> = (0..self.vars.len())
                .map(|_| Coef::Mod(rng.gen_range(1..p)))
                .collect();
            let mid: Vec<Coef> = inv
                .iter()
                .map(|f| f.evaluate(&point))
                .collect::<Result<_, _>>()?;
            if mid.iter().all(|c| c.is_zero()) {
                continue; // indeterminacy point of the inverse; resample
            }
            let back: Vec<Coef> = fwd
                .iter()
                .map(|f| f.evaluate(&mid))
                .collect::<Result<_, _>>()?;
            if back.iter().all(|c| c.is_zero()) {
                continue;
            }
            // proportional iff all 2x2 cross products vanish
            let mut ok = true;
            for i in 0..back.len() {
                for j in i + 1..back.len() {
                    let lhs = field.mul(&back[i], &point[j]);
                    let rhs = field.mul(&back[j], &point[i]);
                    if lhs != rhs {
                        ok = false;
                    }
                }
            }
            results.push(ok);
        }
        Ok(BirationalityReport {
            samples: results.len(),
            passes: results.iter().filter(|&&b| b).count(),
            per_sample: results,
        })
    }

    fn inverse_check_once<R: Rng>(&self, rng: &mut R) -> bool {
        match self.check_birational(4, rng) {
            Ok(rep) => rep.passes == rep.samples && rep.samples > 0,
            Err(_) => false,
        }
    }

    /// Conjugate by an invertible linear change of coordinates: L^-1 ∘ φ ∘ L,
    /// using the adjugate for the projective inverse of L.
    pub fn conjugate(&self, linear: &[Vec<Coef>]) -> Result<ProjectiveMap, MapError> {
        let n = self.vars.len();
        if linear.len() != n || linear.iter().any(|row| row.len() != n) {
            return Err(MapError::Format("conjugation matrix has wrong shape".into()));
        }
        let ring = self.ring();
        let det = det_matrix(ring, linear);
        if det.is_zero() {
            return Err(MapError::SingularMatrix);
        }
        let adj = adjugate(ring, linear);
        // linear forms L x
        let lx: Vec<Polynomial> = (0..n)
            .map(|i| {
                let mut acc = Polynomial::zero(ring, self.vars.clone());
                for (j, c) in linear[i].iter().enumerate() {
                    let v = Polynomial::var(ring, self.vars.clone(), j).mul_coef(c);
                    acc = acc.add(&v).unwrap();
                }
                acc
            })
            .collect();
        let phi_lx: Vec<Polynomial> = self
            .forward
            .iter()
            .map(|f| compose(f, &lx))
            .collect::<Result<_, _>>()?;
        let mut coords: Vec<Polynomial> = (0..n)
            .map(|i| {
                let mut acc = Polynomial::zero(ring, self.vars.clone());
                for (j, c) in adj[i].iter().enumerate() {
                    acc = acc.add(&phi_lx[j].mul_coef(c)).unwrap();
                }
                acc
            })
            .collect();
        let g = gcd_many(&coords)?;
        if !g.is_constant() {
            coords = coords
                .iter()
                .map(|c| c.exact_div(&g))
                .collect::<Result<_, _>>()?;
        }
        Ok(ProjectiveMap {
            map_id: format!("{}~conj", self.map_id),
            vars: self.vars.clone(),
            params: self.params.clone(),
            forward: coords,
            inverse: None,
            degree: self.degree,
        })
    }

    /// Iterate exactly from the generic point, stopping on budget limits.
    /// Returns the states computed (index 0 included) and, when a budget
    /// tripped, the step at which it did.
    pub fn iterate_exact(
        &self,
        n_max: usize,
        budget: &IterationBudget,
    ) -> Result<(Vec<IterateState>, Option<usize>), MapError> {
        let start = Instant::now();
        let mut states = vec![self.generic_point()];
        for n in 1..=n_max {
            if start.elapsed().as_secs_f64() > budget.max_seconds {
                return Ok((states, Some(n)));
            }
            let prev = states.last().unwrap();
            let est: usize = prev.coordinates.iter().map(|c| c.n_terms()).sum();
            if est > budget.max_terms {
                return Ok((states, Some(n)));
            }
            let next = self.apply(prev)?;
            states.push(next);
        }
        Ok((states, None))
    }
}

#[derive(Clone, Debug)]
pub struct BirationalityReport {
    pub samples: usize,
    pub passes: usize,
    pub per_sample: Vec<bool>,
}

#[derive(Clone, Debug)]
pub struct IterationBudget {
    pub max_terms: usize,
    pub max_seconds: f64,
}

impl Default for IterationBudget {
    fn default() -> Self {
        IterationBudget {
            max_terms: 4_000_000,
            max_seconds: 120.0,
        }
    }
}

fn validate_homogeneous(coords: &[Polynomial], texts: &[String]) -> Result<u32, MapError> {
    let mut common: Option<u32> = None;
    for (i, c) in coords.iter().enumerate() {
        let d = c
            .homogeneous_degree()
            .ok_or_else(|| MapError::NonHomogeneous {
                index: i,
                text: texts.get(i).cloned().unwrap_or_default(),
            })?;
        match common {
            None => common = Some(d),
            Some(e) if e != d => {
                return Err(MapError::DegreeMismatch {
                    index: i,
                    got: d,
                    expected: e,
                })
            }
            _ => {}
        }
    }
    let d = common.unwrap_or(0);
    if d == 0 {
        return Err(MapError::Format("map coordinates must have degree >= 1".into()));
    }
    Ok(d)
}

/// Evaluate `f` (a polynomial in the N+1 state variables) at polynomial
/// arguments, with per-variable power caching.
pub fn compose(f: &Polynomial, args: &[Polynomial]) -> Result<Polynomial, PolyError> {
    let ring = args[0].ring();
    let vars = args[0].vars().clone();
    let maxes: Vec<u16> = (0..f.n_vars())
        .map(|i| f.terms().map(|(m, _)| m.exponent(i)).max().unwrap_or(0))
        .collect();
    let mut pows: Vec<Vec<Polynomial>> = Vec::with_capacity(args.len());
    for (i, a) in args.iter().enumerate() {
        let mut col = vec![Polynomial::one(ring, vars.clone())];
        for e in 1..=maxes[i] as usize {
            let next = col[e - 1].mul(a)?;
            col.push(next);
        }
        pows.push(col);
    }
    let mut acc = Polynomial::zero(ring, vars.clone());
    for (m, c) in f.terms() {
        let mut t = Polynomial::constant(ring, vars.clone(), coerce(ring, c));
        for i in 0..f.n_vars() {
            let e = m.exponent(i) as usize;
            if e > 0 {
                t = t.mul(&pows[i][e])?;
            }
        }
        acc = acc.add(&t)?;
    }
    Ok(acc)
}

fn coerce(ring: CoefficientRing, c: &Coef) -> Coef {
    match (ring, c) {
        (CoefficientRing::PrimeField(p), Coef::Int(v)) => ring.from_bigint(v),
        (CoefficientRing::PrimeField(p), Coef::Mod(v)) => Coef::Mod(*v % p),
        (CoefficientRing::ExactInteger, Coef::Int(_)) => c.clone(),
        (CoefficientRing::ExactInteger, Coef::Mod(v)) => {
            Coef::Int(num_bigint::BigInt::from(*v))
        }
    }
}

fn det_matrix(ring: CoefficientRing, m: &[Vec<Coef>]) -> Coef {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = ring.zero();
    for j in 0..n {
        let minor: Vec<Vec<Coef>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = ring.mul(&m[0][j], &det_matrix(ring, &minor));
        acc = if j % 2 == 0 {
            ring.add(&acc, &term)
        } else {
            ring.sub(&acc, &term)
        };
    }
    acc
}

fn adjugate(ring: CoefficientRing, m: &[Vec<Coef>]) -> Vec<Vec<Coef>> {
    let n = m.len();
    let mut adj = vec![vec![ring.zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<Coef>> = (0..n)
                .filter(|&r| r != i)
                .map(|r| {
                    (0..n)
                        .filter(|&c| c != j)
                        .map(|c| m[r][c].clone())
                        .collect()
                })
                .collect();
            let mut cof = if n == 1 {
                ring.one()
            } else {
                det_matrix(ring, &minor)
            };
            if (i + j) % 2 == 1 {
                cof = ring.neg(&cof);
            }
            adj[j][i] = cof; // transpose of cofactors
        }
    }
    adj
}

/// A random invertible matrix over the map's ring (entries small).
pub fn random_invertible_matrix<R: Rng>(
    ring: CoefficientRing,
    n: usize,
    rng: &mut R,
) -> Vec<Vec<Coef>> {
    loop {
        let m: Vec<Vec<Coef>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| ring.from_i64(rng.gen_range(-9i64..=9)))
                    .collect()
            })
            .collect();
        if !det_matrix(ring, &m).is_zero() {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub(crate) const HV_MAP: &str = r#"
[map]
vars = ["x", "y", "z"]
params = ["a"]
phi = ["x^3 + a*z^3 - y*x^2", "x^3", "x^2*z"]
bind = { a = 2 }
"#;

    pub(crate) const F4_MAP: &str = r#"
[map]
vars = ["x", "y", "z", "u", "t"]
phi = [
  "x*z*t^2",
  "x*u*y*(t - y)",
  "u*y^2*(t - y)",
  "u*y*(t - y)*z",
  "u*y*(t - y)*t",
]
psi = [
  "x*y*z*(t - z)",
  "x*z^2*(t - z)",
  "x*z*u*(t - z)",
  "y*u*t^2",
  "x*z*(t - z)*t",
]
"#;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(42)
    }

    #[test]
    fn parses_hv_with_degree_3() {
        let m = ProjectiveMap::parse(
            HV_MAP,
            "hv",
            CoefficientRing::default_prime_field(),
            &mut rng(),
        )
        .unwrap();
        assert_eq!(m.degree(), 3);
        assert_eq!(m.params()[0].1, Coef::Mod(2));
    }

    #[test]
    fn parses_4d_with_inverse_degree_4() {
        let m = ProjectiveMap::parse(
            F4_MAP,
            "f4",
            CoefficientRing::default_prime_field(),
            &mut rng(),
        )
        .unwrap();
        assert_eq!(m.degree(), 4);
        assert!(m.inverse().is_some());
    }

    #[test]
    fn rejects_inhomogeneous_coordinates() {
        let bad = r#"
[map]
vars = ["x", "y", "z"]
phi = ["x^2", "x*y", "z"]
"#;
        let e = ProjectiveMap::parse(
            bad,
            "bad",
            CoefficientRing::default_prime_field(),
            &mut rng(),
        )
        .unwrap_err();
        match e {
            MapError::DegreeMismatch { got: 1, expected: 2, .. } => {}
            other => panic!("expected DegreeMismatch, got {other:?}"),
        }
    }

    #[test]
    fn apply_hv_matches_map_coordinates() {
        let m = ProjectiveMap::parse(
            HV_MAP,
            "hv",
            CoefficientRing::default_prime_field(),
            &mut rng(),
        )
        .unwrap();
        let s1 = m.apply(&m.generic_point()).unwrap();
        assert_eq!(s1.degree, 3);
        assert_eq!(s1.coordinates, m.forward());
    }

    #[test]
    fn identity_map_stays_degree_one() {
        let id = r#"
[map]
vars = ["x", "y", "z"]
phi = ["x", "y", "z"]
"#;
        let m = ProjectiveMap::parse(
            id,
            "id",
            CoefficientRing::default_prime_field(),
            &mut rng(),
        )
        .unwrap();
        let s1 = m.apply(&m.generic_point()).unwrap();
        let s2 = m.apply(&s1).unwrap();
        assert_eq!((s1.degree, s2.degree), (1, 1));
    }

    #[test]
    fn birationality_of_4d_map_and_corrupted_inverse() {
        let m = ProjectiveMap::parse(
            F4_MAP,
            "f4",
            CoefficientRing::default_prime_field(),
            &mut rng(),
        )
        .unwrap();
        let rep = m.check_birational(20, &mut rng()).unwrap();
        assert_eq!(rep.passes, rep.samples);
        assert_eq!(rep.samples, 20);

        // swap two inverse coordinates: the check must fail
        let corrupted = F4_MAP.replace(
            "\"x*y*z*(t - z)\",\n  \"x*z^2*(t - z)\"",
            "\"x*z^2*(t - z)\",\n  \"x*y*z*(t - z)\"",
        );
        assert!(corrupted.contains("x*z^2"));
        let e = ProjectiveMap::parse(
            &corrupted,
            "f4bad",
            CoefficientRing::default_prime_field(),
            &mut rng(),
        );
        assert!(matches!(e, Err(MapError::InverseMismatch)));
    }

    #[test]
    fn conjugation_by_identity_and_permutation() {
        let m = ProjectiveMap::parse(
            HV_MAP,
            "hv",
            CoefficientRing::default_prime_field(),
            &mut rng(),
        )
        .unwrap();
        let ring = m.ring();
        let n = 3;
        let ident: Vec<Vec<Coef>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| ring.from_i64((i == j) as i64))
                    .collect()
            })
            .collect();
        let same = m.conjugate(&ident).unwrap();
        assert_eq!(same.forward(), m.forward());

        // permutation matrix keeps degree
        let perm: Vec<Vec<Coef>> = vec![
            vec![ring.from_i64(0), ring.from_i64(1), ring.from_i64(0)],
            vec![ring.from_i64(0), ring.from_i64(0), ring.from_i64(1)],
            vec![ring.from_i64(1), ring.from_i64(0), ring.from_i64(0)],
        ];
        let p = m.conjugate(&perm).unwrap();
        assert_eq!(p.degree(), 3);
        assert_eq!(
            p.forward()
                .iter()
                .map(|f| f.homogeneous_degree().unwrap())
                .max(),
            Some(3)
        );

        let singular: Vec<Vec<Coef>> = vec![
            vec![ring.from_i64(1), ring.from_i64(1), ring.from_i64(0)],
            vec![ring.from_i64(2), ring.from_i64(2), ring.from_i64(0)],
            vec![ring.from_i64(0), ring.from_i64(0), ring.from_i64(1)],
        ];
        assert!(matches!(
            m.conjugate(&singular),
            Err(MapError::SingularMatrix)
        ));
    }
}
