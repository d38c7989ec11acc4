//! Canonical step functions `[0,1) → G`.
//!
//! A step function is stored as breakpoints `0 = a_0 < a_1 < … < a_n = 1`
//! with one carrier element per half-open interval `[a_k, a_{k+1})`. Every
//! constructor and operation re-canonicalizes: empty intervals are dropped
//! and adjacent intervals with equal values are merged, so equality of step
//! functions is decidable componentwise.

use std::fmt;

use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::element::{Element, ElementValue, ModelId};
use crate::error::{GyroError, Result};
use crate::model::GyroModel;
use crate::rational::Rational;

#[derive(Debug, Clone)]
pub struct StepFunction {
    model: ModelId,
    breakpoints: Vec<Rational>,
    values: Vec<Element>,
}

impl StepFunction {
    /// Validates the partition shape and canonicalizes under the model's
    /// equality.
    pub fn new(
        model: &dyn GyroModel,
        breakpoints: Vec<Rational>,
        values: Vec<Element>,
    ) -> Result<StepFunction> {
        if breakpoints.len() < 2 {
            return Err(GyroError::usage("a step function needs at least breakpoints 0 and 1"));
        }
        if breakpoints[0] != Rational::ZERO {
            return Err(GyroError::usage("first breakpoint must be 0"));
        }
        if *breakpoints.last().unwrap() != Rational::ONE {
            return Err(GyroError::usage("last breakpoint must be 1"));
        }
        for w in breakpoints.windows(2) {
            if w[0] >= w[1] {
                return Err(GyroError::usage(format!(
                    "breakpoints must increase strictly: {} !< {}",
                    w[0], w[1]
                )));
            }
        }
        if values.len() + 1 != breakpoints.len() {
            return Err(GyroError::usage(format!(
                "expected {} interval values, found {}",
                breakpoints.len() - 1,
                values.len()
            )));
        }
        for v in &values {
            model.guard(v)?;
        }
        canonical(model, breakpoints, values)
    }

    /// The constant function `x^•`; the image of `x` under the embedding of
    /// the base carrier into the step-function carrier.
    pub fn constant(model: &dyn GyroModel, x: &Element) -> Result<StepFunction> {
        model.guard(x)?;
        Ok(StepFunction {
            model: model.id().clone(),
            breakpoints: vec![Rational::ZERO, Rational::ONE],
            values: vec![x.clone()],
        })
    }

    pub fn model(&self) -> &ModelId {
        &self.model
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Element] {
        &self.values
    }

    /// Number of constant pieces.
    pub fn piece_count(&self) -> usize {
        self.values.len()
    }

    /// `(a_k, a_{k+1}, value_k)` triples.
    pub fn intervals(&self) -> impl Iterator<Item = (&Rational, &Rational, &Element)> {
        self.breakpoints.windows(2).zip(&self.values).map(|(w, v)| (&w[0], &w[1], v))
    }

    /// Value at a point of `[0, 1)`.
    pub fn value_at(&self, r: &Rational) -> Result<&Element> {
        if *r < Rational::ZERO || *r >= Rational::ONE {
            return Err(GyroError::usage(format!("sample point {r} outside [0, 1)")));
        }
        let k = self.breakpoints.partition_point(|b| b <= r) - 1;
        Ok(&self.values[k])
    }

    /// Structural equality of the canonical representation, used by payload
    /// comparison. Semantic equality goes through the extension model.
    pub fn raw_eq(&self, other: &StepFunction) -> bool {
        self.model == other.model
            && self.breakpoints == other.breakpoints
            && self.values == other.values
    }

    pub fn is_constant(&self) -> bool {
        self.values.len() == 1
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("step function serializes")
    }

    pub fn from_json(text: &str) -> Result<StepFunction> {
        serde_json::from_str(text).map_err(|e| GyroError::parse("step function", e.to_string()))
    }
}

impl fmt::Display for StepFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (lo, hi, v) in self.intervals() {
            if !first {
                f.write_str("; ")?;
            }
            write!(f, "[{lo},{hi})->{v}")?;
            first = false;
        }
        Ok(())
    }
}

/// Drops empty intervals and merges adjacent equal values.
pub(crate) fn canonical(
    model: &dyn GyroModel,
    breakpoints: Vec<Rational>,
    values: Vec<Element>,
) -> Result<StepFunction> {
    let mut out_breaks: Vec<Rational> = vec![Rational::ZERO];
    let mut out_values: Vec<Element> = Vec::new();
    for (k, value) in values.into_iter().enumerate() {
        let (lo, hi) = (breakpoints[k], breakpoints[k + 1]);
        if lo == hi {
            continue;
        }
        match out_values.last() {
            Some(prev) if model.equal(prev, &value)? => {
                *out_breaks.last_mut().unwrap() = hi;
            }
            _ => {
                out_breaks.push(hi);
                out_values.push(value);
            }
        }
    }
    Ok(StepFunction { model: model.id().clone(), breakpoints: out_breaks, values: out_values })
}

/// Common refinement of several step functions over one model: the union of
/// their breakpoints, with each function's values re-expressed on it.
pub struct Refinement {
    pub breakpoints: Vec<Rational>,
    pub columns: Vec<Vec<Element>>,
}

pub fn refine_many(model: &dyn GyroModel, fns: &[&StepFunction]) -> Result<Refinement> {
    for f in fns {
        if f.model() != model.id() {
            return Err(GyroError::CrossModel {
                expected: model.id().clone(),
                found: f.model().clone(),
            });
        }
    }
    let mut breakpoints: Vec<Rational> =
        fns.iter().flat_map(|f| f.breakpoints.iter().copied()).collect();
    breakpoints.sort();
    breakpoints.dedup();
    let mut columns = Vec::with_capacity(fns.len());
    for f in fns {
        let mut col = Vec::with_capacity(breakpoints.len() - 1);
        let mut k = 0usize;
        for lo in &breakpoints[..breakpoints.len() - 1] {
            while f.breakpoints[k + 1] <= *lo {
                k += 1;
            }
            col.push(f.values[k].clone());
        }
        columns.push(col);
    }
    Ok(Refinement { breakpoints, columns })
}

/// Two-function refinement: `(common breakpoints, f values, g values)`.
pub fn refine(
    model: &dyn GyroModel,
    f: &StepFunction,
    g: &StepFunction,
) -> Result<(Vec<Rational>, Vec<Element>, Vec<Element>)> {
    let mut r = refine_many(model, &[f, g])?;
    let second = r.columns.pop().unwrap();
    let first = r.columns.pop().unwrap();
    Ok((r.breakpoints, first, second))
}

impl Serialize for StepFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("StepFunction", 3)?;
        s.serialize_field("model-id", &self.model)?;
        s.serialize_field("breakpoints", &self.breakpoints)?;
        let payloads: Vec<&ElementValue> = self.values.iter().map(Element::value).collect();
        s.serialize_field("values", &payloads)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for StepFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            #[serde(rename = "model-id")]
            model_id: ModelId,
            breakpoints: Vec<Rational>,
            values: Vec<ElementValue>,
        }
        let repr = Repr::deserialize(deserializer)?;
        if repr.breakpoints.len() < 2 {
            return Err(D::Error::custom("a step function needs at least breakpoints 0 and 1"));
        }
        if repr.breakpoints[0] != Rational::ZERO
            || *repr.breakpoints.last().unwrap() != Rational::ONE
        {
            return Err(D::Error::custom("breakpoints must start at 0 and end at 1"));
        }
        if repr.breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(D::Error::custom("breakpoints must increase strictly"));
        }
        if repr.values.len() + 1 != repr.breakpoints.len() {
            return Err(D::Error::custom("value count must match interval count"));
        }
        if repr.values.windows(2).any(|w| w[0] == w[1]) {
            return Err(D::Error::custom("adjacent intervals carry equal values; not canonical"));
        }
        let values = repr
            .values
            .into_iter()
            .map(|v| Element::new(repr.model_id.clone(), v))
            .collect();
        Ok(StepFunction { model: repr.model_id, breakpoints: repr.breakpoints, values })
    }
}
