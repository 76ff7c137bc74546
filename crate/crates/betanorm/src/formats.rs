//! JSON forms of IFSs and models. Every number is an exact string.

use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use betanorm_core::algebraics::{AlgebraicNumber, FieldElem, IntPolynomial, NumberField};
use betanorm_core::model::{build_model, Model, ModelIndex};
use betanorm_core::selfsimilar::{SeparatedPair, SimilarityIFS, SimilarityMap, DEFAULT_MAX_M};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

/// Named fields tried, in order, when an IFS file does not name its field.
const KNOWN_FIELDS: [&str; 6] = ["phi", "sqrt2", "sqrt3", "sqrt5", "plastic", "tribonacci"];

/// A number field: `"q"`, a known name, or a generator given by its
/// minimal polynomial and an isolating interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Named(String),
    Custom { name: String, poly: String, lo: String, hi: String },
}

impl FieldSpec {
    pub fn build(&self) -> Result<Arc<NumberField>> {
        match self {
            FieldSpec::Named(n) if n == "q" || n == "Q" => Ok(NumberField::rationals()),
            FieldSpec::Named(n) => NumberField::named(n).ok_or_else(|| anyhow!("unknown field '{n}'")),
            FieldSpec::Custom { name, poly, lo, hi } => {
                let p: IntPolynomial = poly.parse()?;
                let g = AlgebraicNumber::new(&p, parse_rational(lo)?, parse_rational(hi)?)?;
                Ok(NumberField::new(name, g))
            }
        }
    }

    pub fn of(f: &NumberField) -> Self {
        if f.is_rational() {
            return FieldSpec::Named("q".into());
        }
        if let Some(k) = NumberField::named(f.name()) {
            if k.generator() == f.generator() {
                return FieldSpec::Named(f.name().into());
            }
        }
        let (lo, hi) = f.generator().interval();
        FieldSpec::Custom {
            name: f.name().into(),
            poly: f.generator().min_poly().to_string(),
            lo: lo.to_string(),
            hi: hi.to_string(),
        }
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    s.trim().parse::<BigRational>().map_err(|e| anyhow!("'{s}' is not a rational: {e}"))
}

/// The field all `strings` parse in, rationals first.
fn infer_field<'a>(strings: impl Iterator<Item = &'a str> + Clone) -> Result<Arc<NumberField>> {
    let q = NumberField::rationals();
    if strings.clone().all(|s| FieldElem::parse(&q, s).is_ok()) {
        return Ok(q);
    }
    for name in KNOWN_FIELDS {
        let k = NumberField::named(name).expect("known field");
        if strings.clone().all(|s| FieldElem::parse(&k, s).is_ok()) {
            return Ok(k);
        }
    }
    bail!("numbers do not parse in the rationals or any known field; add a \"field\" entry")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapSpec {
    pub s: String,
    pub t: String,
}

/// `{"maps": [{"s": "1/3", "t": "0"}, ..], "weights": ["1/2", "1/2"]}`;
/// weights default to uniform.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IfsSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldSpec>,
    pub maps: Vec<MapSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<String>>,
}

impl IfsSpec {
    pub fn to_ifs(&self) -> Result<SimilarityIFS> {
        let field = match &self.field {
            Some(f) => f.build()?,
            None => infer_field(self.maps.iter().flat_map(|m| [m.s.as_str(), m.t.as_str()]))?,
        };
        let maps = self
            .maps
            .iter()
            .map(|m| Ok(SimilarityMap::new(FieldElem::parse(&field, &m.s)?, FieldElem::parse(&field, &m.t)?)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(match &self.weights {
            Some(w) => SimilarityIFS::new(maps, w.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?)?,
            None => SimilarityIFS::uniform(maps)?,
        })
    }

    pub fn from_ifs(ifs: &SimilarityIFS) -> Self {
        Self {
            field: Some(FieldSpec::of(ifs.field())),
            maps: ifs.maps().iter().map(|m| MapSpec { s: m.ratio().to_string(), t: m.translation().to_string() }).collect(),
            weights: Some(ifs.weights().iter().map(|w| w.to_string()).collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexSpec {
    pub label: String,
    pub ratio: String,
    pub translations: Vec<String>,
    pub weights: Vec<String>,
    pub q: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSpec {
    pub m: u32,
    pub i: Vec<usize>,
    pub j: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub field: FieldSpec,
    pub indices: Vec<IndexSpec>,
    #[serde(default)]
    pub separated_pair: Option<PairSpec>,
}

impl ModelSpec {
    pub fn from_model(m: &Model) -> Self {
        Self {
            field: FieldSpec::of(m.field()),
            indices: m
                .indices()
                .iter()
                .map(|i| IndexSpec {
                    label: i.label().into(),
                    ratio: i.ratio().to_string(),
                    translations: i.translations().iter().map(|t| t.to_string()).collect(),
                    weights: i.weights().iter().map(|w| w.to_string()).collect(),
                    q: i.q().to_string(),
                })
                .collect(),
            separated_pair: m.separated_pair().map(|p| PairSpec { m: p.m, i: p.i.clone(), j: p.j.clone() }),
        }
    }

    pub fn to_model(&self) -> Result<Model> {
        let field = self.field.build()?;
        let el = |s: &str| FieldElem::parse(&field, s).with_context(|| format!("parsing '{s}'"));
        let indices = self
            .indices
            .iter()
            .map(|i| {
                let ts = i.translations.iter().map(|t| el(t)).collect::<Result<Vec<_>>>()?;
                let ws = i.weights.iter().map(|w| parse_rational(w)).collect::<Result<Vec<_>>>()?;
                Ok(ModelIndex::new(&i.label, el(&i.ratio)?, ts, ws, parse_rational(&i.q)?)?)
            })
            .collect::<Result<Vec<_>>>()?;
        let pair = self.separated_pair.as_ref().map(|p| SeparatedPair { m: p.m, i: p.i.clone(), j: p.j.clone() });
        Ok(Model::new(indices)?.with_separated_pair(pair))
    }
}

/// IFSs available by name wherever a file is expected.
pub fn builtin_ifs(name: &str) -> Option<IfsSpec> {
    let maps: &[(&str, &str)] = match name {
        "cantor" => &[("1/3", "0"), ("1/3", "2/3")],
        "flipped-cantor" => &[("1/3", "0"), ("-1/3", "1")],
        "mixed" => &[("1/2", "0"), ("1/3", "2/3")],
        "halves" => &[("1/2", "0"), ("1/2", "1/2")],
        "three-map" => &[("1/5", "0"), ("1/5", "2/5"), ("1/5", "4/5")],
        "sqrt-eighth" => &[("sqrt2/4", "0"), ("sqrt2/4", "1 - sqrt2/4")],
        _ => return None,
    };
    Some(IfsSpec {
        field: None,
        maps: maps.iter().map(|&(s, t)| MapSpec { s: s.into(), t: t.into() }).collect(),
        weights: None,
    })
}

pub const BUILTIN_NAMES: [&str; 6] = ["cantor", "flipped-cantor", "mixed", "halves", "three-map", "sqrt-eighth"];

/// An IFS or a model read from a builtin name or a JSON file.
#[derive(Clone, Debug)]
pub enum Source {
    Ifs(SimilarityIFS),
    Model(Model),
}

impl Source {
    pub fn load(spec: &str) -> Result<Self> {
        if let Some(b) = builtin_ifs(spec) {
            return Ok(Source::Ifs(b.to_ifs()?));
        }
        let text = std::fs::read_to_string(Path::new(spec)).with_context(|| {
            format!("'{spec}' is neither a readable file nor a builtin ({})", BUILTIN_NAMES.join(", "))
        })?;
        Self::from_json(&text).with_context(|| format!("in {spec}"))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(text)?;
        if v.get("maps").is_some() {
            Ok(Source::Ifs(serde_json::from_value::<IfsSpec>(v)?.to_ifs()?))
        } else if v.get("indices").is_some() {
            Ok(Source::Model(serde_json::from_value::<ModelSpec>(v)?.to_model()?))
        } else {
            bail!("expected an IFS (\"maps\") or a model (\"indices\")")
        }
    }

    pub fn ifs(&self) -> Result<&SimilarityIFS> {
        match self {
            Source::Ifs(i) => Ok(i),
            Source::Model(_) => bail!("an IFS is required here, not a model"),
        }
    }

    /// The model, built with `max_m` when the source is an IFS.
    pub fn model(&self, max_m: u32) -> Result<Model> {
        match self {
            Source::Ifs(i) => Ok(build_model(i, max_m)?),
            Source::Model(m) => Ok(m.clone()),
        }
    }

    pub fn default_model(&self) -> Result<Model> {
        self.model(DEFAULT_MAX_M)
    }
}
