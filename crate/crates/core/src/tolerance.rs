//! Numeric policy. Every threshold used by predicates, reports and suites
//! lives in one [`Tolerances`] value, which is printed into every report.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Tolerances {
    /// Hermiticity, anticommutation and norm checks on transition operators;
    /// also involution and projector identities in the Krein layer.
    pub transition: f64,
    /// Smallest admissible eigenvalue of the Hermitian part of `JC`.
    pub positivity: f64,
    /// Singular-value threshold for rank and intersection computations.
    pub rank: f64,
    /// Boundary-condition residual for domain membership.
    pub membership: f64,
    pub green: f64,
    pub theta: f64,
    pub weyl: f64,
    pub j_unitary: f64,
    pub intertwine: f64,
    pub angle_equations: f64,
    pub c_square: f64,
    pub cm_equals_m: f64,
    pub commutator_a: f64,
    pub commutator_s: f64,
    pub similarity: f64,
    pub eigen: f64,
    pub adjoint_pairing: f64,
    /// Margin added to the strict solvability inequality before taking artanh.
    pub solvability_margin: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            transition: 1e-12,
            positivity: 1e-10,
            rank: 1e-10,
            membership: 1e-10,
            green: 1e-10,
            theta: 1e-12,
            weyl: 1e-12,
            j_unitary: 1e-12,
            intertwine: 1e-12,
            angle_equations: 1e-12,
            c_square: 1e-10,
            cm_equals_m: 1e-10,
            commutator_a: 1e-10,
            commutator_s: 1e-10,
            similarity: 1e-8,
            eigen: 1e-12,
            adjoint_pairing: 1e-10,
            solvability_margin: 1e-12,
        }
    }
}

fn normalize_key(key: &str) -> String {
    key.chars()
        .filter(|c| !matches!(c, '_' | '-'))
        .flat_map(char::to_lowercase)
        .collect()
}

impl Tolerances {
    /// Mutable access by key. Keys match case-insensitively and ignore `_`/`-`,
    /// so `jUnitary`, `j_unitary` and `junitary` all name the same field.
    fn slot(&mut self, key: &str) -> Option<&mut f64> {
        Some(match normalize_key(key).as_str() {
            "transition" => &mut self.transition,
            "positivity" | "jcpositivity" => &mut self.positivity,
            "rank" => &mut self.rank,
            "membership" => &mut self.membership,
            "green" => &mut self.green,
            "theta" => &mut self.theta,
            "weyl" => &mut self.weyl,
            "junitary" => &mut self.j_unitary,
            "intertwine" => &mut self.intertwine,
            "angleequations" => &mut self.angle_equations,
            "csquare" => &mut self.c_square,
            "cmequalsm" => &mut self.cm_equals_m,
            "commutatora" => &mut self.commutator_a,
            "commutators" => &mut self.commutator_s,
            "similarity" => &mut self.similarity,
            "eigen" | "eigenresiduals" => &mut self.eigen,
            "adjointpairing" => &mut self.adjoint_pairing,
            "solvabilitymargin" => &mut self.solvability_margin,
            _ => return None,
        })
    }

    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let slot = self
            .slot(key)
            .ok_or_else(|| Error::UnknownTolerance(key.to_string()))?;
        *slot = value;
        Ok(())
    }

    /// Applies a `key=value` override.
    pub fn apply_override(&mut self, spec: &str) -> Result<()> {
        let (key, value) = spec
            .split_once('=')
            .ok_or_else(|| Error::BadOverride(spec.to_string()))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::BadOverride(spec.to_string()))?;
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::BadOverride(spec.to_string()));
        }
        self.set(key.trim(), value)
    }

    pub fn with_overrides<'a, I: IntoIterator<Item = &'a str>>(overrides: I) -> Result<Self> {
        let mut tol = Tolerances::default();
        for spec in overrides {
            tol.apply_override(spec)?;
        }
        Ok(tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn override_keys_are_forgiving() {
        let tol = Tolerances::with_overrides(["intertwine=1e-15", "j_unitary=2e-12", "jUnitary=3e-12"])
            .unwrap();
        assert_eq!(tol.intertwine, 1e-15);
        assert_eq!(tol.j_unitary, 3e-12);
    }

    #[test]
    fn bad_overrides_are_rejected() {
        let mut tol = Tolerances::default();
        assert!(matches!(tol.apply_override("nope=1"), Err(Error::UnknownTolerance(_))));
        assert!(matches!(tol.apply_override("green"), Err(Error::BadOverride(_))));
        assert!(matches!(tol.apply_override("green=abc"), Err(Error::BadOverride(_))));
        assert!(matches!(tol.apply_override("green=-1"), Err(Error::BadOverride(_))));
    }

    #[test]
    fn serializes_camel_case() {
        let json = serde_json::to_value(Tolerances::default()).unwrap();
        assert_eq!(json["jUnitary"], 1e-12);
        assert_eq!(json["commutatorS"], 1e-10);
    }
}
