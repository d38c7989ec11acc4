//! Model identifiers and carrier elements.
//!
//! Elements are tagged with the identifier of the model they came from, and
//! every model operation rejects elements carrying a foreign tag. The payload
//! is dynamic so the same verification engine runs over finite tables, the
//! unit disk, and step functions.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::hm::StepFunction;

/// Identifier of a model instance, e.g. `zn:4`, `klein`, `mobius`, `hm:zn:4`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModelId(Arc<str>);

impl ModelId {
    pub fn new(id: impl AsRef<str>) -> ModelId {
        ModelId(Arc::from(id.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for ModelId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for ModelId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(ModelId::new(String::deserialize(deserializer)?))
    }
}

/// The model-specific payload of an element.
#[derive(Debug, Clone)]
pub enum ElementValue {
    /// Index into a finite carrier.
    Index(usize),
    /// Point of the open complex unit disk.
    Point(Complex64),
    /// Step function, element of an extension carrier.
    Step(Box<StepFunction>),
}

impl PartialEq for ElementValue {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (ElementValue::Index(a), ElementValue::Index(b)) => a == b,
            (ElementValue::Point(a), ElementValue::Point(b)) => a.re == b.re && a.im == b.im,
            (ElementValue::Step(a), ElementValue::Step(b)) => a.raw_eq(b),
            _ => false,
        }
    }
}

impl Serialize for ElementValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ElementValue::Index(i) => serializer.serialize_u64(*i as u64),
            ElementValue::Point(z) => {
                use serde::ser::SerializeStruct;
                let mut s = serializer.serialize_struct("Point", 2)?;
                s.serialize_field("re", &z.re)?;
                s.serialize_field("im", &z.im)?;
                s.end()
            }
            ElementValue::Step(f) => f.serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for ElementValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(deserializer)?;
        ElementValue::from_json(&value).map_err(D::Error::custom)
    }
}

impl ElementValue {
    pub fn from_json(value: &serde_json::Value) -> Result<ElementValue, String> {
        match value {
            serde_json::Value::Number(n) => {
                let i = n.as_u64().ok_or_else(|| format!("invalid element index {n}"))?;
                Ok(ElementValue::Index(i as usize))
            }
            serde_json::Value::Object(map) if map.contains_key("re") => {
                let get = |k: &str| {
                    map.get(k)
                        .and_then(|v| v.as_f64())
                        .ok_or_else(|| format!("point element missing numeric `{k}`"))
                };
                Ok(ElementValue::Point(Complex64::new(get("re")?, get("im")?)))
            }
            serde_json::Value::Object(map) if map.contains_key("breakpoints") => {
                let f: StepFunction =
                    serde_json::from_value(value.clone()).map_err(|e| e.to_string())?;
                let _ = map;
                Ok(ElementValue::Step(Box::new(f)))
            }
            other => Err(format!("unrecognized element payload: {other}")),
        }
    }
}

/// An element together with the identifier of its model.
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    model: ModelId,
    value: ElementValue,
}

impl Element {
    pub fn new(model: ModelId, value: ElementValue) -> Element {
        Element { model, value }
    }

    pub fn model(&self) -> &ModelId {
        &self.model
    }

    pub fn value(&self) -> &ElementValue {
        &self.value
    }

    pub fn index(&self) -> Option<usize> {
        match self.value {
            ElementValue::Index(i) => Some(i),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<Complex64> {
        match self.value {
            ElementValue::Point(z) => Some(z),
            _ => None,
        }
    }

    pub fn step(&self) -> Option<&StepFunction> {
        match &self.value {
            ElementValue::Step(f) => Some(f),
            _ => None,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            ElementValue::Index(i) => write!(f, "{i}"),
            ElementValue::Point(z) => write!(f, "{}{:+}i", z.re, z.im),
            ElementValue::Step(s) => write!(f, "{s}"),
        }
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.value.serialize(serializer)
    }
}
