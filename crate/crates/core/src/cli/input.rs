use serde_json::Value;
use thiserror::Error;

use crate::arith::{parse_rational, QMatrix, Rational, ValuationConfig};
use crate::bundle::{BundleChart, BundleError, Character, ToricBundleData};
use crate::polyhedral::{build_fan, Cone, FanOverDvr, PolyhedralError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("{path}: {reason}")]
    SchemaError { path: String, reason: String },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{path}: basis matrix is singular")]
    SingularBasis { path: String },
}

/// Failure while turning a parsed document into bundle data. Fan problems are
/// mathematical; everything else points back at the document.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Fan(#[from] PolyhedralError),
    #[error(transparent)]
    Bundle(#[from] BundleError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartSpec {
    pub cone_index: usize,
    /// Basis vectors `b_1, ..., b_r` of `K^r`.
    pub basis: Vec<Vec<Rational>>,
    pub characters: Vec<(Vec<i64>, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputDocument {
    pub p: u64,
    pub torus_rank: usize,
    pub maximal_cones: Vec<Vec<Vec<i64>>>,
    pub rank: usize,
    pub charts: Vec<ChartSpec>,
    pub seed: u64,
    pub sample_density: usize,
}

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_SAMPLE_DENSITY: usize = 8;

fn schema(path: &str, reason: impl Into<String>) -> InputError {
    InputError::SchemaError {
        path: path.to_string(),
        reason: reason.into(),
    }
}

fn field<'a>(v: &'a Value, path: &str, key: &str) -> Result<&'a Value, InputError> {
    let obj = v.as_object().ok_or_else(|| schema(path, "expected an object"))?;
    obj.get(key)
        .ok_or_else(|| schema(&format!("{path}.{key}"), "missing field"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, InputError> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

fn uint(v: &Value, path: &str) -> Result<u64, InputError> {
    v.as_u64()
        .ok_or_else(|| schema(path, "expected a non-negative integer"))
}

fn int(v: &Value, path: &str) -> Result<i64, InputError> {
    v.as_i64().ok_or_else(|| schema(path, "expected an integer"))
}

fn int_vector(v: &Value, path: &str, len: usize) -> Result<Vec<i64>, InputError> {
    let items = array(v, path)?;
    if items.len() != len {
        return Err(schema(
            path,
            format!("expected {len} entries, found {}", items.len()),
        ));
    }
    items
        .iter()
        .enumerate()
        .map(|(i, x)| int(x, &format!("{path}[{i}]")))
        .collect()
}

/// A rational given either as a JSON integer or as a `"num/den"` string.
pub fn rational(v: &Value, path: &str) -> Result<Rational, InputError> {
    match v {
        Value::String(s) => {
            parse_rational(s).map_err(|_| schema(path, format!("cannot parse {s:?} as a rational")))
        }
        Value::Number(_) => Ok(Rational::from_integer(int(v, path)?.into())),
        _ => Err(schema(path, "expected \"num/den\" or an integer")),
    }
}

pub fn rational_vector(v: &Value, path: &str, len: usize) -> Result<Vec<Rational>, InputError> {
    let items = array(v, path)?;
    if items.len() != len {
        return Err(schema(
            path,
            format!("expected {len} entries, found {}", items.len()),
        ));
    }
    items
        .iter()
        .enumerate()
        .map(|(i, x)| rational(x, &format!("{path}[{i}]")))
        .collect()
}

/// An `rows x cols` matrix given as a list of rows.
pub fn rational_rows(
    v: &Value,
    path: &str,
    rows: usize,
    cols: usize,
) -> Result<Vec<Vec<Rational>>, InputError> {
    let items = array(v, path)?;
    if items.len() != rows {
        return Err(schema(
            path,
            format!("expected {rows} rows, found {}", items.len()),
        ));
    }
    items
        .iter()
        .enumerate()
        .map(|(i, row)| rational_vector(row, &format!("{path}[{i}]"), cols))
        .collect()
}

pub fn parse_json(text: &str) -> Result<Value, InputError> {
    serde_json::from_str(text).map_err(|e| InputError::Json(e.to_string()))
}

pub fn prime(p: u64) -> Result<ValuationConfig, InputError> {
    ValuationConfig::new(p).map_err(|_| InputError::NotPrime(p))
}

/// A square basis given as a list of basis vectors; rejects singular input.
pub fn basis_vectors(v: &Value, path: &str, r: usize) -> Result<Vec<Vec<Rational>>, InputError> {
    let vectors = rational_rows(v, path, r, r)?;
    if !QMatrix::from_columns(vectors.clone()).is_invertible() {
        return Err(InputError::SingularBasis {
            path: path.to_string(),
        });
    }
    Ok(vectors)
}

impl InputDocument {
    pub fn parse(text: &str) -> Result<InputDocument, InputError> {
        Self::from_value(&parse_json(text)?)
    }

    pub fn from_value(doc: &Value) -> Result<InputDocument, InputError> {
        let p = uint(field(doc, "$", "p")?, "$.p")?;
        prime(p)?;
        let n = uint(field(doc, "$", "torus_rank")?, "$.torus_rank")? as usize;
        if n == 0 {
            return Err(schema("$.torus_rank", "must be at least 1"));
        }

        let fan = field(doc, "$", "fan")?;
        let cones_v = array(field(fan, "$.fan", "maximal_cones")?, "$.fan.maximal_cones")?;
        if cones_v.is_empty() {
            return Err(schema("$.fan.maximal_cones", "no cones given"));
        }
        let mut maximal_cones = Vec::with_capacity(cones_v.len());
        for (i, c) in cones_v.iter().enumerate() {
            let path = format!("$.fan.maximal_cones[{i}]");
            let gens = array(c, &path)?;
            if gens.is_empty() {
                return Err(schema(&path, "a cone needs at least one generator"));
            }
            let gens = gens
                .iter()
                .enumerate()
                .map(|(j, g)| int_vector(g, &format!("{path}[{j}]"), n + 1))
                .collect::<Result<Vec<_>, _>>()?;
            maximal_cones.push(gens);
        }

        let bundle = field(doc, "$", "bundle")?;
        let rank = uint(field(bundle, "$.bundle", "rank")?, "$.bundle.rank")? as usize;
        if rank == 0 {
            return Err(schema("$.bundle.rank", "must be at least 1"));
        }
        let charts_v = array(field(bundle, "$.bundle", "charts")?, "$.bundle.charts")?;
        let mut charts = Vec::with_capacity(charts_v.len());
        for (i, c) in charts_v.iter().enumerate() {
            let path = format!("$.bundle.charts[{i}]");
            let cone_path = format!("{path}.cone_index");
            let cone_index = uint(field(c, &path, "cone_index")?, &cone_path)? as usize;
            if cone_index >= maximal_cones.len() {
                return Err(schema(
                    &cone_path,
                    format!("index {cone_index} out of range 0..{}", maximal_cones.len()),
                ));
            }
            let basis = basis_vectors(field(c, &path, "basis")?, &format!("{path}.basis"), rank)?;
            let chars_path = format!("{path}.characters");
            let chars_v = array(field(c, &path, "characters")?, &chars_path)?;
            if chars_v.len() != rank {
                return Err(schema(
                    &chars_path,
                    format!("expected {rank} characters, found {}", chars_v.len()),
                ));
            }
            let characters = chars_v
                .iter()
                .enumerate()
                .map(|(j, ch)| {
                    let mut uk = int_vector(ch, &format!("{chars_path}[{j}]"), n + 1)?;
                    let k = uk.pop().expect("n + 1 entries");
                    Ok((uk, k))
                })
                .collect::<Result<Vec<_>, InputError>>()?;
            charts.push(ChartSpec {
                cone_index,
                basis,
                characters,
            });
        }

        let (mut seed, mut sample_density) = (DEFAULT_SEED, DEFAULT_SAMPLE_DENSITY);
        if let Some(opts) = doc.get("options") {
            if let Some(s) = opts.get("seed") {
                seed = uint(s, "$.options.seed")?;
            }
            if let Some(d) = opts.get("sample_density") {
                sample_density = uint(d, "$.options.sample_density")? as usize;
            }
        }
        Ok(InputDocument {
            p,
            torus_rank: n,
            maximal_cones,
            rank,
            charts,
            seed,
            sample_density,
        })
    }

    pub fn cfg(&self) -> ValuationConfig {
        ValuationConfig::new(self.p).expect("checked while parsing")
    }

    pub fn fan(&self) -> Result<FanOverDvr, BuildError> {
        let fan = build_fan(self.torus_rank + 1, &self.maximal_cones)?;
        Ok(FanOverDvr::new(fan)?)
    }

    pub fn to_bundle(&self) -> Result<ToricBundleData, BuildError> {
        let fan = self.fan()?;
        let ambient = self.torus_rank + 1;
        let mut charts = Vec::with_capacity(self.charts.len());
        for (i, spec) in self.charts.iter().enumerate() {
            let rays = Cone::new(ambient, &self.maximal_cones[spec.cone_index])?
                .rays()
                .to_vec();
            let cone = fan.fan().index_of(&rays).ok_or_else(|| {
                schema(
                    &format!("$.bundle.charts[{i}].cone_index"),
                    "cone is not part of the fan",
                )
            })?;
            charts.push(BundleChart {
                cone,
                basis: QMatrix::from_columns(spec.basis.clone()),
                characters: spec
                    .characters
                    .iter()
                    .map(|(u, k)| Character::new(u.clone(), *k))
                    .collect(),
            });
        }
        Ok(ToricBundleData::new(fan, self.rank, charts, self.cfg())?)
    }
}
