//! Run configuration: a single JSON document describing the scale, the grid,
//! the model (coefficient expression trees as tagged records), initial data
//! and run parameters.

use anyhow::{bail, Context};
use nicholson_ts::certifier::BoundsTable;
use nicholson_ts::model::{Coefficient, InitialCondition, NicholsonModel};
use nicholson_ts::timescale::{ScaleFamily, Segment, TimeScale};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scale: ScaleSpec,
    pub grid: GridSpec,
    pub model: ModelSpec,
    pub initial: InitialSpec,
    pub run: RunParams,
    /// Reference sup/inf table (for instance a literature table); certification
    /// flags entries diverging from the recomputed bounds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub listed_bounds: Option<BoundsTable<f64>>,
    #[serde(default = "default_output_dir")]
    pub output_dir: String,
}

fn default_output_dir() -> String {
    "out".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ScaleSpec {
    Reals,
    Integers,
    Step { h: f64 },
    IntegersWith { extras: Vec<f64> },
    Explicit { segments: Vec<SegmentSpec> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SegmentSpec {
    Interval { interval: [f64; 2] },
    Point { point: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub max_step: f64,
    /// Explicit window override; derived from the run parameters when
    /// absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub n: usize,
    pub c: Vec<Coefficient<f64>>,
    pub b: Vec<Vec<Option<Coefficient<f64>>>>,
    pub beta: Vec<Vec<Coefficient<f64>>>,
    pub alpha: Vec<Vec<Coefficient<f64>>>,
    pub tau: Vec<Vec<Coefficient<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    pub t0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exprs: Option<Vec<Coefficient<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunParams {
    pub t_end: f64,
    pub a1: f64,
    pub a2: f64,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub translation_candidates: Vec<f64>,
    /// Transient dropped before the translation search.
    #[serde(default)]
    pub translate_skip: f64,
    /// Second initial state for the envelope pair.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ic2: Option<Vec<f64>>,
    /// Initial state used on the integer scale by `compare`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ic_integers: Option<Vec<f64>>,
    #[serde(default = "default_bounds_horizon")]
    pub bounds_horizon: f64,
    #[serde(default = "default_bounds_samples")]
    pub bounds_samples: usize,
}

fn default_eps() -> f64 {
    0.05
}

fn default_bounds_horizon() -> f64 {
    500.0
}

fn default_bounds_samples() -> usize {
    200_000
}

impl RunConfig {
    pub fn from_file(path: &std::path::Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        let n = self.model.n;
        if self.model.c.len() != n {
            bail!("model.c must have n = {} entries", n);
        }
        for (name, rows) in [
            ("b", self.model.b.len()),
            ("beta", self.model.beta.len()),
            ("alpha", self.model.alpha.len()),
            ("tau", self.model.tau.len()),
        ] {
            if rows != n {
                bail!("model.{} must have n = {} rows", name, n);
            }
        }
        match (&self.initial.values, &self.initial.exprs) {
            (Some(v), None) if v.len() == n => {}
            (None, Some(e)) if e.len() == n => {}
            (Some(_), Some(_)) => bail!("initial: give either values or exprs, not both"),
            (None, None) => bail!("initial: values or exprs required"),
            _ => bail!("initial data must have n = {} components", n),
        }
        if self.grid.max_step <= 0.0 {
            bail!("grid.max_step must be positive");
        }
        if self.run.t_end <= self.initial.t0 {
            bail!("run.t_end must exceed initial.t0");
        }
        Ok(())
    }

    pub fn scale_family(&self) -> anyhow::Result<ScaleFamily<f64>> {
        Ok(match &self.scale {
            ScaleSpec::Reals => ScaleFamily::Reals,
            ScaleSpec::Integers => ScaleFamily::Integers,
            ScaleSpec::Step { h } => {
                if *h <= 0.0 {
                    bail!("step scale requires h > 0");
                }
                ScaleFamily::Step(*h)
            }
            ScaleSpec::IntegersWith { extras } => ScaleFamily::integers_with(extras.clone()),
            ScaleSpec::Explicit { segments } => {
                let segs: Vec<Segment<f64>> = segments
                    .iter()
                    .map(|s| match s {
                        SegmentSpec::Interval { interval } => Segment::Interval {
                            lo: interval[0],
                            hi: interval[1],
                        },
                        SegmentSpec::Point { point } => Segment::Point(*point),
                    })
                    .collect();
                ScaleFamily::Explicit(TimeScale::new(segs)?)
            }
        })
    }

    pub fn model(&self) -> anyhow::Result<NicholsonModel<f64>> {
        Ok(NicholsonModel::new(
            self.model.c.clone(),
            self.model.b.clone(),
            self.model.beta.clone(),
            self.model.alpha.clone(),
            self.model.tau.clone(),
        )?)
    }

    pub fn initial_condition(&self) -> InitialCondition<f64> {
        match (&self.initial.values, &self.initial.exprs) {
            (Some(values), _) => InitialCondition::constant(self.initial.t0, values.clone()),
            (_, Some(exprs)) => InitialCondition {
                t0: self.initial.t0,
                phi: exprs
                    .iter()
                    .cloned()
                    .map(nicholson_ts::model::InitialFunction::Expr)
                    .collect(),
            },
            _ => unreachable!("validated"),
        }
    }
}
