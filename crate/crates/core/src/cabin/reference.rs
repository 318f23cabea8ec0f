//! Reference configurations: the roomiest certified layout per aircraft
//! model, used as the denominator of both cabin indices.
//!
//! The table is a CSV file with header `model,max_rows,max_pitch`. Lookup is
//! exact on the model string.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceEntry {
    pub model: String,
    pub max_rows: u32,
    pub max_pitch: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReferenceTable {
    entries: BTreeMap<String, ReferenceEntry>,
}

impl ReferenceTable {
    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut csv_reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = csv_reader.headers()?.clone();
        let expected = ["model", "max_rows", "max_pitch"];
        if headers.iter().collect::<Vec<_>>() != expected {
            return Err(Error::validation(format!(
                "reference table header must be {}, got {}",
                expected.join(","),
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut entries = BTreeMap::new();
        for (idx, record) in csv_reader.records().enumerate() {
            let record = record?;
            let lineno = idx + 2;
            let model = record
                .get(0)
                .filter(|m| !m.is_empty())
                .ok_or_else(|| Error::parse(lineno, "missing model".to_string()))?
                .to_string();
            let max_rows: u32 = record
                .get(1)
                .unwrap_or_default()
                .parse()
                .map_err(|_| Error::parse(lineno, format!("invalid max_rows for {model}")))?;
            let max_pitch: f64 = record
                .get(2)
                .unwrap_or_default()
                .parse()
                .map_err(|_| Error::parse(lineno, format!("invalid max_pitch for {model}")))?;
            if max_rows == 0 || !(max_pitch > 0.0) {
                return Err(Error::parse(
                    lineno,
                    format!("non-positive reference bounds for {model}"),
                ));
            }
            if entries
                .insert(model.clone(), ReferenceEntry { model: model.clone(), max_rows, max_pitch })
                .is_some()
            {
                return Err(Error::parse(lineno, format!("duplicate reference model {model}")));
            }
        }
        Ok(ReferenceTable { entries })
    }

    pub fn from_path<P: AsRef<Path>>(path: P) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        Self::from_reader(text.as_bytes())
    }

    pub fn get(&self, model: &str) -> Option<&ReferenceEntry> {
        self.entries.get(model)
    }

    /// Like `get` but a missing model is a validation error naming it.
    pub fn require(&self, model: &str) -> Result<&ReferenceEntry> {
        self.get(model).ok_or_else(|| {
            Error::validation(format!("no reference configuration for model {model:?}"))
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ReferenceEntry> {
        self.entries.values()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE: &str = "model,max_rows,max_pitch\nBoeing 737-800,33,34\nATR 72-600,19,34\n";

    #[test]
    fn reads_and_looks_up() {
        let table = ReferenceTable::from_reader(TABLE.as_bytes()).unwrap();
        assert_eq!(table.len(), 2);
        let entry = table.require("Boeing 737-800").unwrap();
        assert_eq!(entry.max_rows, 33);
        assert_eq!(entry.max_pitch, 34.0);
        assert!(table.get("Unknown Jet").is_none());
        let err = table.require("Unknown Jet").unwrap_err().to_string();
        assert!(err.contains("Unknown Jet"), "{err}");
    }

    #[test]
    fn rejects_wrong_header() {
        let err = ReferenceTable::from_reader("model,rows,pitch\nA,1,30\n".as_bytes())
            .unwrap_err()
            .to_string();
        assert!(err.contains("header"), "{err}");
    }

    #[test]
    fn rejects_duplicates_and_bad_numbers() {
        let dup = "model,max_rows,max_pitch\nA,10,30\nA,11,31\n";
        assert!(ReferenceTable::from_reader(dup.as_bytes()).is_err());
        let bad = "model,max_rows,max_pitch\nA,zero,30\n";
        let err = ReferenceTable::from_reader(bad.as_bytes()).unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
        let nonpos = "model,max_rows,max_pitch\nA,0,30\n";
        assert!(ReferenceTable::from_reader(nonpos.as_bytes()).is_err());
    }
}
