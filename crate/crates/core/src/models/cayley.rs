//! Finite gyrogroup models backed by a Cayley table.
//!
//! Tables use index 0 as the identity. Construction validates the structural
//! invariants (identity row/column, rows are permutations, two-sided
//! inverses); whether the table satisfies the full gyrogroup axioms is the
//! verification engine's job, not the loader's.

use std::fmt;
use std::path::Path;

use rand::Rng;
use serde::Serialize;

use crate::element::{Element, ElementValue, ModelId};
use crate::error::{GyroError, Result};
use crate::model::{Carrier, GyroModel};

#[derive(Debug, Clone)]
pub struct CayleyGyrogroup {
    id: ModelId,
    order: usize,
    table: Vec<u8>,
    inverse: Vec<u8>,
}

impl CayleyGyrogroup {
    /// Builds and validates a table given as rows, `rows[i][j] = i ⊕ j`.
    pub fn from_rows(name: &str, rows: &[Vec<usize>]) -> Result<CayleyGyrogroup> {
        let n = rows.len();
        if n == 0 {
            return Err(GyroError::Table { row: 0, col: None, message: "empty table".into() });
        }
        if n > u8::MAX as usize {
            return Err(GyroError::Table {
                row: 0,
                col: None,
                message: format!("order {n} exceeds the supported maximum"),
            });
        }
        let mut table = vec![0u8; n * n];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GyroError::Table {
                    row: i,
                    col: None,
                    message: format!("ragged row: expected {n} entries, found {}", row.len()),
                });
            }
            let mut seen = vec![false; n];
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(GyroError::Table {
                        row: i,
                        col: Some(j),
                        message: format!("entry {v} out of range 0..{n}"),
                    });
                }
                if seen[v] {
                    return Err(GyroError::Table {
                        row: i,
                        col: Some(j),
                        message: format!("row not a permutation: value {v} repeats"),
                    });
                }
                seen[v] = true;
                table[i * n + j] = v as u8;
            }
        }
        for j in 0..n {
            if table[j] as usize != j {
                return Err(GyroError::Table {
                    row: 0,
                    col: Some(j),
                    message: "identity row broken: expected e ⊕ j = j".into(),
                });
            }
        }
        for i in 0..n {
            if table[i * n] as usize != i {
                return Err(GyroError::Table {
                    row: i,
                    col: Some(0),
                    message: "identity column broken: expected i ⊕ e = i".into(),
                });
            }
        }
        let mut inverse = vec![0u8; n];
        for x in 0..n {
            let found = (0..n).find(|&j| table[j * n + x] == 0 && table[x * n + j] == 0);
            match found {
                Some(j) => inverse[x] = j as u8,
                None => {
                    return Err(GyroError::Table {
                        row: x,
                        col: None,
                        message: "missing two-sided inverse".into(),
                    })
                }
            }
        }
        Ok(CayleyGyrogroup { id: ModelId::new(name), order: n, table, inverse })
    }

    /// The cyclic group of order `n`.
    pub fn zn(n: usize) -> Result<CayleyGyrogroup> {
        if n == 0 {
            return Err(GyroError::usage("cyclic order must be at least 1"));
        }
        let rows: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        CayleyGyrogroup::from_rows(&format!("zn:{n}"), &rows)
    }

    /// The Klein four-group.
    pub fn klein() -> CayleyGyrogroup {
        let rows: Vec<Vec<usize>> = (0..4).map(|i| (0..4).map(|j| i ^ j).collect()).collect();
        CayleyGyrogroup::from_rows("klein", &rows).expect("klein table is valid")
    }

    /// Parses the text table format: optional comment lines starting with
    /// `#`, an optional first line holding the order, then `n` rows of `n`
    /// whitespace-separated indices.
    pub fn parse(name: &str, text: &str, location: &str) -> Result<CayleyGyrogroup> {
        let mut rows: Vec<(usize, Vec<usize>)> = Vec::new();
        let mut declared: Option<usize> = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let entries: Vec<usize> = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| {
                        GyroError::parse(
                            format!("{location}:{}", lineno + 1),
                            format!("invalid table entry `{tok}`"),
                        )
                    })
                })
                .collect::<Result<_>>()?;
            if rows.is_empty() && declared.is_none() && entries.len() == 1 {
                declared = Some(entries[0]);
            } else {
                rows.push((lineno + 1, entries));
            }
        }
        let n = declared.unwrap_or(rows.len());
        if rows.len() != n {
            return Err(GyroError::parse(
                location,
                format!("expected {n} table rows, found {}", rows.len()),
            ));
        }
        let row_data: Vec<Vec<usize>> = rows.iter().map(|(_, r)| r.clone()).collect();
        CayleyGyrogroup::from_rows(name, &row_data).map_err(|e| match e {
            GyroError::Table { row, col, message } => {
                let line = rows.get(row).map(|(l, _)| *l).unwrap_or(0);
                let col_text = col.map(|c| format!(", column {c}")).unwrap_or_default();
                GyroError::parse(format!("{location}:{line}"), format!("{message}{col_text}"))
            }
            other => other,
        })
    }

    /// Loads a table file.
    pub fn load(path: &Path) -> Result<CayleyGyrogroup> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            GyroError::parse(path.display().to_string(), format!("cannot read file: {e}"))
        })?;
        let stem =
            path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or("table".into());
        CayleyGyrogroup::parse(&format!("cayley:{stem}"), &text, &path.display().to_string())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn element(&self, i: usize) -> Result<Element> {
        if i >= self.order {
            return Err(GyroError::usage(format!(
                "index {i} out of range for model `{}` of order {}",
                self.id, self.order
            )));
        }
        Ok(Element::new(self.id.clone(), ElementValue::Index(i)))
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|i| (0..self.order).map(|j| self.table[i * self.order + j] as usize).collect())
            .collect()
    }

    fn index_of(&self, e: &Element) -> Result<usize> {
        self.guard(e)?;
        match e.index() {
            Some(i) if i < self.order => Ok(i),
            _ => Err(GyroError::WrongPayload { model: self.id.clone() }),
        }
    }

    pub fn lookup(&self, i: usize, j: usize) -> usize {
        self.table[i * self.order + j] as usize
    }
}

impl fmt::Display for CayleyGyrogroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (order {})", self.id, self.order)
    }
}

impl Serialize for CayleyGyrogroup {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(serializer)
    }
}

impl GyroModel for CayleyGyrogroup {
    fn id(&self) -> &ModelId {
        &self.id
    }

    fn carrier(&self) -> Carrier {
        Carrier::Finite(self.order)
    }

    fn describe(&self) -> String {
        format!("finite carrier of order {}", self.order)
    }

    fn identity(&self) -> Element {
        Element::new(self.id.clone(), ElementValue::Index(0))
    }

    fn oplus(&self, a: &Element, b: &Element) -> Result<Element> {
        let (i, j) = (self.index_of(a)?, self.index_of(b)?);
        self.element(self.lookup(i, j))
    }

    fn ominus(&self, a: &Element) -> Result<Element> {
        let i = self.index_of(a)?;
        self.element(self.inverse[i] as usize)
    }

    fn equal(&self, a: &Element, b: &Element) -> Result<bool> {
        Ok(self.index_of(a)? == self.index_of(b)?)
    }

    fn distance(&self, a: &Element, b: &Element) -> Result<f64> {
        Ok(if self.equal(a, b)? { 0.0 } else { 1.0 })
    }

    fn is_exact(&self) -> bool {
        true
    }

    fn sample(&self, rng: &mut dyn rand::RngCore) -> Element {
        let i = rng.gen_range(0..self.order);
        Element::new(self.id.clone(), ElementValue::Index(i))
    }

    fn elements(&self) -> Option<Vec<Element>> {
        Some((0..self.order).map(|i| Element::new(self.id.clone(), ElementValue::Index(i))).collect())
    }
}
