//! Experiment configurations. Each subcommand's arguments double as its
//! JSON config; missing fields take the command-line defaults, and the
//! echoed config has every default filled in.

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

macro_rules! defaults_from_cli {
    ($($t:ident => $name:literal),* $(,)?) => {
        $(impl Default for $t {
            fn default() -> Self {
                <$t as Parser>::parse_from([$name])
            }
        })*
    };
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Parser)]
#[serde(default, deny_unknown_fields)]
pub struct PisotArgs {
    /// An integer, a known name, or an integer polynomial in `x`.
    #[arg(default_value = "golden")]
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Parser)]
#[serde(default, deny_unknown_fields)]
pub struct ModelArgs {
    /// IFS or model JSON file, or builtin name.
    #[arg(default_value = "cantor")]
    pub source: String,
    /// Largest word length tried for the separated pair.
    #[arg(long, default_value_t = 8)]
    pub max_m: u32,
    /// Base to test each ratio against.
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long, default_value_t = 64)]
    pub search_bound: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Parser)]
#[serde(default, deny_unknown_fields)]
pub struct SampleArgs {
    /// IFS JSON file or builtin name.
    #[arg(default_value = "cantor")]
    pub source: String,
    #[arg(long, default_value_t = 10_000)]
    pub count: usize,
    /// Word length; by default the smallest with error below 1e-12.
    #[arg(long)]
    pub depth: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Parser)]
#[serde(default, deny_unknown_fields)]
pub struct ExpandArgs {
    #[arg(long, default_value = "golden")]
    pub beta: String,
    /// A rational or an element of the base's field, e.g. `phi - 1`.
    #[arg(default_value = "1/3")]
    pub x: String,
    #[arg(long, default_value_t = 64)]
    pub digits: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Parser)]
#[serde(default, deny_unknown_fields)]
pub struct ParryArgs {
    #[arg(default_value = "golden")]
    pub beta: String,
    #[arg(long, default_value_t = 256)]
    pub truncation: usize,
    /// Points of the `(x, density)` plot table; 0 for none.
    #[arg(long, default_value_t = 0)]
    pub grid: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Parser)]
#[serde(default, deny_unknown_fields)]
pub struct NormalityArgs {
    /// IFS or model JSON file, or builtin name.
    #[arg(default_value = "cantor")]
    pub source: String,
    #[arg(long, default_value = "2")]
    pub beta: String,
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    #[arg(long, default_value_t = 2000)]
    pub digits: usize,
    /// Extra prefix lengths reported in the summary.
    #[arg(long, value_delimiter = ',')]
    pub lengths: Vec<usize>,
    /// Coding depth of the sampled points; by default deep enough that
    /// `digits` digits are certified.
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long, default_value_t = 8)]
    pub max_m: u32,
    /// Check `digit,lo,hi` on the mean digit frequency.
    #[arg(long, value_delimiter = ',', value_name = "DIGIT,LO,HI")]
    pub digit_band: Option<Vec<f64>>,
    /// Check the mean discrepancy at full length.
    #[arg(long)]
    pub max_mean_discrepancy: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Parser)]
#[serde(default, deny_unknown_fields)]
pub struct SceneryArgs {
    /// IFS or model JSON file, or builtin name.
    #[arg(default_value = "cantor")]
    pub source: String,
    /// Orbit length in multiples of the mean roof.
    #[arg(long, default_value_t = 200.0)]
    pub roofs: f64,
    /// Time step between windows.
    #[arg(long, default_value_t = 0.05)]
    pub dt: f64,
    /// Windows drawn from the suspension distribution.
    #[arg(long, default_value_t = 20_000)]
    pub q_samples: usize,
    /// Sample budget per window.
    #[arg(long, default_value_t = 4096)]
    pub window_samples: usize,
    /// Bins per half of `[-1, 1]`.
    #[arg(long, default_value_t = 256)]
    pub bins: usize,
    /// Condition on `[-r, r]` instead of rescaling the gaps.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Start with `a = 1`.
    #[arg(long, default_value_t = false)]
    pub flip: bool,
    /// Largest allowed functional distance to the suspension distribution.
    #[arg(long, default_value_t = 0.05)]
    pub tolerance: f64,
    /// Least distance expected between the model and `delta_0`.
    #[arg(long, default_value_t = 0.2)]
    pub contrast: f64,
    /// Write every orbit window as a CSV bin table.
    #[arg(long, default_value_t = false)]
    pub export_windows: bool,
    #[arg(long, default_value_t = 8)]
    pub max_m: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Parser)]
#[serde(default, deny_unknown_fields)]
pub struct DisintegrationArgs {
    /// IFS JSON file or builtin name.
    #[arg(default_value = "cantor")]
    pub source: String,
    #[arg(long, default_value_t = 100_000)]
    pub count: usize,
    #[arg(long)]
    pub depth: Option<usize>,
    /// Largest allowed KS distance.
    #[arg(long, default_value_t = 0.01)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 8)]
    pub max_m: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Parser)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumArgs {
    /// IFS or model JSON file, or builtin name.
    #[arg(default_value = "cantor")]
    pub source: String,
    #[arg(long, default_value = "2")]
    pub beta: String,
    #[arg(long, default_value_t = 64)]
    pub search_bound: u32,
    #[arg(long, default_value_t = 8)]
    pub max_m: u32,
}

defaults_from_cli!(
    PisotArgs => "pisot",
    ModelArgs => "model",
    SampleArgs => "sample",
    ExpandArgs => "expand",
    ParryArgs => "parry",
    NormalityArgs => "normality",
    SceneryArgs => "scenery",
    DisintegrationArgs => "disintegration",
    SpectrumArgs => "spectrum",
);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Subcommand)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Decide whether a number is Pisot and list its conjugate moduli.
    Pisot(PisotArgs),
    /// Build the Bernoulli model of an IFS and check strong separation.
    Model(ModelArgs),
    /// Sample the self-similar measure.
    Sample(SampleArgs),
    /// Greedy beta-expansion of one point.
    Expand(ExpandArgs),
    /// The Parry density of a base.
    Parry(ParryArgs),
    /// Digit frequencies and discrepancy of sampled points.
    Normality(NormalityArgs),
    /// Scenery orbit against the suspension distribution.
    Scenery(SceneryArgs),
    /// Direct sampling against disintegration sampling.
    Disintegration(DisintegrationArgs),
    /// The spectral obstruction verdict.
    Spectrum(SpectrumArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Pisot(_) => "pisot",
            Command::Model(_) => "model",
            Command::Sample(_) => "sample",
            Command::Expand(_) => "expand",
            Command::Parry(_) => "parry",
            Command::Normality(_) => "normality",
            Command::Scenery(_) => "scenery",
            Command::Disintegration(_) => "disintegration",
            Command::Spectrum(_) => "spectrum",
        }
    }
}

/// A full run description: the command, its arguments and the seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    #[serde(flatten)]
    pub command: Command,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        #[derive(Deserialize)]
        struct Seeded {
            #[serde(default)]
            seed: u64,
        }
        // the flattened enum cannot carry a default seed itself
        let v: serde_json::Value = serde_json::from_str(text)?;
        let seed = serde_json::from_value::<Seeded>(v.clone())?.seed;
        let mut obj = v.as_object().cloned().ok_or_else(|| anyhow::anyhow!("config must be an object"))?;
        obj.remove("seed");
        let command = serde_json::from_value(serde_json::Value::Object(obj))?;
        Ok(Self { seed, command })
    }
}
