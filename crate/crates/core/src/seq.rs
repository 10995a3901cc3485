//! Degree sequences of map iterates and their serialized artifact form.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceMode {
    Exact,
    GenericLine,
}

/// The list d_0, d_1, ... of reduced iterate degrees plus computation
/// metadata. Serializes to the JSON artifact consumed by the other commands.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeSequence {
    pub map_id: String,
    pub mode: SequenceMode,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub prime: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub seeds: Vec<u64>,
    pub values: Vec<u64>,
    /// Set when a time or size budget stopped the computation early; the
    /// values hold the prefix computed so far.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub budget_exhausted_at: Option<usize>,
}

impl DegreeSequence {
    /// d_0 = 1, d_1 = map degree, and d_{n+1} <= d_1 * d_n.
    pub fn check_basic_invariants(&self) -> Result<(), String> {
        if self.values.first() != Some(&1) {
            return Err("d_0 must be 1".into());
        }
        if self.values.len() >= 2 {
            let d1 = self.values[1];
            for n in 1..self.values.len() - 1 {
                if self.values[n + 1] > d1 * self.values[n] {
                    return Err(format!(
                        "d_{} = {} exceeds d_1 * d_{} = {}",
                        n + 1,
                        self.values[n + 1],
                        n,
                        d1 * self.values[n]
                    ));
                }
            }
        }
        Ok(())
    }

    /// Submultiplicativity d_{m+n} <= d_m * d_n over all stored indices.
    pub fn check_submultiplicative(&self) -> Result<(), String> {
        let v = &self.values;
        for m in 0..v.len() {
            for n in 0..v.len() {
                if m + n < v.len() && v[m + n] > v[m] * v[n] {
                    return Err(format!(
                        "d_{} = {} > d_{} * d_{} = {}",
                        m + n,
                        v[m + n],
                        m,
                        n,
                        v[m] * v[n]
                    ));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_flag_bad_growth() {
        let mut s = DegreeSequence {
            map_id: "t".into(),
            mode: SequenceMode::Exact,
            prime: None,
            seeds: vec![],
            values: vec![1, 3, 9, 27, 73],
            budget_exhausted_at: None,
        };
        assert!(s.check_basic_invariants().is_ok());
        assert!(s.check_submultiplicative().is_ok());
        s.values.push(300); // 300 > 3 * 73
        assert!(s.check_basic_invariants().is_err());
    }

    #[test]
    fn artifact_round_trips() {
        let s = DegreeSequence {
            map_id: "hv".into(),
            mode: SequenceMode::GenericLine,
            prime: Some(crate::ring::DEFAULT_PRIME),
            seeds: vec![1, 2],
            values: vec![1, 3, 9],
            budget_exhausted_at: None,
        };
        let js = serde_json::to_string(&s).unwrap();
        let back: DegreeSequence = serde_json::from_str(&js).unwrap();
        assert_eq!(s, back);
        assert!(!js.contains("budget_exhausted_at"));
    }
}
