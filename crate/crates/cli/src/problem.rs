//! Problem-file schema and loading: a ring, a distribution given either by
//! one-forms or by vector fields (dualised on load), chart denominators and
//! search options.

use foliation_core::diffmod::{Distribution, OneForm, VectorField};
use foliation_core::poly::{Poly, PolyRing};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub ring: RingSpec,
    pub distribution: DistributionSpec,
    #[serde(default)]
    pub charts: Vec<String>,
    #[serde(default)]
    pub options: Options,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingSpec {
    pub variables: Vec<String>,
    #[serde(default)]
    pub inverted: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionSpec {
    #[serde(default)]
    pub one_forms: Option<Vec<BTreeMap<String, String>>>,
    #[serde(default)]
    pub vector_fields: Option<Vec<BTreeMap<String, String>>>,
}

#[derive(Debug, Deserialize, Clone)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default = "default_degree")]
    pub degree_bound: u32,
    #[serde(default = "default_d_alg")]
    pub d_alg: u32,
    #[serde(default = "default_samples")]
    pub samples: u32,
    #[serde(default)]
    pub seed: u64,
}

fn default_degree() -> u32 {
    4
}

fn default_d_alg() -> u32 {
    3
}

fn default_samples() -> u32 {
    100
}

impl Default for Options {
    fn default() -> Self {
        Options {
            degree_bound: default_degree(),
            d_alg: default_d_alg(),
            samples: default_samples(),
            seed: 0,
        }
    }
}

/// A loaded problem: the base ring, the distribution on it, and the parsed
/// chart denominators.
pub struct Problem {
    pub ring: Arc<PolyRing>,
    pub dist: Distribution,
    pub charts: Vec<Poly>,
    pub options: Options,
    /// vector fields as given in the input, when the distribution was
    /// specified that way (used by the plot command)
    pub input_fields: Vec<VectorField>,
}

fn coefficient_map(
    ring: &Arc<PolyRing>,
    entries: &BTreeMap<String, String>,
) -> foliation_core::Result<Vec<Poly>> {
    let mut coeffs = vec![Poly::zero(ring); ring.base_vars()];
    for (var, expr) in entries {
        let idx = ring.var_index(var).ok_or_else(|| {
            foliation_core::Error::UnknownVariable(var.clone())
        })?;
        if idx >= ring.base_vars() {
            return Err(foliation_core::Error::Invalid(format!(
                "coefficient on inverse variable `{var}`"
            )));
        }
        coeffs[idx] = ring.parse(expr)?;
    }
    Ok(coeffs)
}

impl ProblemSpec {
    pub fn load(path: &std::path::Path) -> Result<ProblemSpec, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn build(&self) -> foliation_core::Result<Problem> {
        let names: Vec<&str> = self.ring.variables.iter().map(|s| s.as_str()).collect();
        let mut ring = PolyRing::new(&names)?;
        for expr in &self.ring.inverted {
            let f = ring.parse(expr)?;
            ring = ring.localize(&f)?;
        }
        let (dist, input_fields) = match (&self.distribution.one_forms, &self.distribution.vector_fields)
        {
            (Some(forms), None) => {
                let mut relations = Vec::new();
                for entry in forms {
                    relations.push(OneForm::new(&ring, coefficient_map(&ring, entry)?)?);
                }
                (Distribution::new(&ring, relations)?, Vec::new())
            }
            (None, Some(fields)) => {
                let mut vfs = Vec::new();
                for entry in fields {
                    vfs.push(VectorField::new(&ring, coefficient_map(&ring, entry)?)?);
                }
                (
                    Distribution::annihilator_of_fields(&ring, &vfs)?,
                    vfs,
                )
            }
            _ => {
                return Err(foliation_core::Error::Invalid(
                    "exactly one of `one_forms` and `vector_fields` must be present".into(),
                ))
            }
        };
        let mut charts = Vec::new();
        for expr in &self.charts {
            let f = ring.parse(expr)?;
            if f.is_zero() {
                return Err(foliation_core::Error::ZeroDenominator);
            }
            charts.push(f);
        }
        Ok(Problem {
            ring,
            dist,
            charts,
            options: self.options.clone(),
            input_fields,
        })
    }
}

/// Schema of a morphism file for the `invariance` command.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub variables: Vec<String>,
    pub images: Vec<String>,
}

impl MapSpec {
    pub fn load(path: &std::path::Path) -> Result<MapSpec, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}
