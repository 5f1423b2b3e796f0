//! Populations: synthetic uniform data and categorical CSV ingestion.

mod presets;

use std::collections::BTreeSet;
use std::fs::File;
use std::path::Path;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::random::RandomSource;
use crate::schema::{validate_schema, AttributeSchema, RecordTuple};

pub use crate::frequency::FrequencyTable;
pub use presets::{preset, presets, DatasetPreset};

/// Records generated per substream in [`gen_uniform`].
const BLOCK: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    schema: AttributeSchema,
    records: Vec<RecordTuple>,
    /// `value_dictionaries[j][code]` is the original label.
    value_dictionaries: Vec<Vec<String>>,
    dropped_rows: usize,
}

impl Dataset {
    pub fn new(schema: AttributeSchema, records: Vec<RecordTuple>, value_dictionaries: Vec<Vec<String>>) -> Result<Self> {
        for r in &records {
            schema.check_record(r)?;
        }
        if value_dictionaries.len() != schema.d() {
            return Err(Error::SchemaShape {
                names: value_dictionaries.len(),
                cardinalities: schema.d(),
            });
        }
        Ok(Self {
            schema,
            records,
            value_dictionaries,
            dropped_rows: 0,
        })
    }

    pub fn schema(&self) -> &AttributeSchema {
        &self.schema
    }

    pub fn records(&self) -> &[RecordTuple] {
        &self.records
    }

    pub fn n(&self) -> usize {
        self.records.len()
    }

    pub fn value_dictionaries(&self) -> &[Vec<String>] {
        &self.value_dictionaries
    }

    /// Rows removed during ingestion for empty or missing cells.
    pub fn dropped_rows(&self) -> usize {
        self.dropped_rows
    }

    /// Original labels of record `i`.
    pub fn decode(&self, i: usize) -> Vec<&str> {
        self.records[i]
            .values()
            .iter()
            .zip(&self.value_dictionaries)
            .map(|(&v, dict)| dict[v as usize].as_str())
            .collect()
    }
}

/// `n` records with every value i.i.d. uniform over its domain.
///
/// Records are generated in blocks of 4096, block `b` drawing from substream
/// `[b]` of `seed`, so the output is independent of the thread count.
pub fn gen_uniform(n: usize, schema: &AttributeSchema, seed: u64) -> Dataset {
    let source = RandomSource::new(seed);
    let ks = schema.cardinalities();
    let blocks = n.div_ceil(BLOCK);
    let records: Vec<RecordTuple> = (0..blocks)
        .into_par_iter()
        .flat_map_iter(|b| {
            let mut rng = source.child_rng(b as u64);
            let len = BLOCK.min(n - b * BLOCK);
            (0..len)
                .map(|_| RecordTuple::new(ks.iter().map(|&k| rng.gen_range(0..k as u32)).collect()))
                .collect::<Vec<_>>()
        })
        .collect();
    let value_dictionaries = ks
        .iter()
        .map(|&k| (0..k).map(|v| v.to_string()).collect())
        .collect();
    Dataset {
        schema: schema.clone(),
        records,
        value_dictionaries,
        dropped_rows: 0,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadOptions {
    /// A cell equal to this (after trimming) marks the row as incomplete.
    pub missing_token: Option<String>,
    /// Columns to keep, in this order. `None` keeps every column.
    pub columns: Option<Vec<String>>,
    /// Column names for files without a header row.
    pub header: Option<Vec<String>>,
    /// Lines starting with this byte are ignored.
    pub comment: Option<u8>,
    /// Strip one trailing `.` from every cell.
    pub strip_trailing_dot: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            missing_token: Some("?".to_string()),
            columns: None,
            header: None,
            comment: None,
            strip_trailing_dot: false,
        }
    }
}

/// Reads a categorical CSV. Codes follow the lexicographic order of labels.
pub fn load_csv(path: impl AsRef<Path>, options: &LoadOptions) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::FileNotFound(path.display().to_string()),
        _ => Error::Io(e.to_string()),
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(options.header.is_none())
        .trim(csv::Trim::All)
        .comment(options.comment)
        .flexible(true)
        .from_reader(file);

    let header: Vec<String> = match &options.header {
        Some(names) => names.clone(),
        None => reader
            .headers()
            .map_err(csv_error)?
            .iter()
            .map(str::to_string)
            .collect(),
    };
    let selected: Vec<usize> = match &options.columns {
        None => (0..header.len()).collect(),
        Some(cols) => cols
            .iter()
            .map(|c| {
                header
                    .iter()
                    .position(|h| h == c)
                    .ok_or_else(|| Error::UnknownColumn(c.clone()))
            })
            .collect::<Result<_>>()?,
    };
    let names: Vec<String> = selected.iter().map(|&i| header[i].clone()).collect();

    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut dropped = 0;
    for row in reader.records() {
        let row = row.map_err(csv_error)?;
        if row.len() != header.len() {
            return Err(Error::MalformedRow {
                line: row.position().map_or(0, |p| p.line()),
                reason: format!("expected {} fields, found {}", header.len(), row.len()),
            });
        }
        let cells: Vec<String> = selected
            .iter()
            .map(|&i| {
                let cell = &row[i];
                match options.strip_trailing_dot {
                    true => cell.strip_suffix('.').unwrap_or(cell).to_string(),
                    false => cell.to_string(),
                }
            })
            .collect();
        let incomplete = cells
            .iter()
            .any(|c| c.is_empty() || options.missing_token.as_deref() == Some(c.as_str()));
        if incomplete {
            dropped += 1;
        } else {
            rows.push(cells);
        }
    }
    if dropped > 0 {
        log::info!("{}: dropped {dropped} incomplete rows", path.display());
    }

    let value_dictionaries: Vec<Vec<String>> = (0..names.len())
        .map(|j| {
            rows.iter()
                .map(|r| r[j].as_str())
                .collect::<BTreeSet<_>>()
                .into_iter()
                .map(str::to_string)
                .collect()
        })
        .collect();
    let cardinalities = value_dictionaries.iter().map(Vec::len).collect();
    let schema = AttributeSchema::new_unchecked(names, cardinalities);
    validate_schema(&schema)?;

    let records = rows
        .iter()
        .map(|r| {
            RecordTuple::new(
                r.iter()
                    .zip(&value_dictionaries)
                    .map(|(cell, dict)| dict.binary_search(cell).expect("label in dictionary") as u32)
                    .collect(),
            )
        })
        .collect();
    Ok(Dataset {
        schema,
        records,
        value_dictionaries,
        dropped_rows: dropped,
    })
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io.to_string()),
        kind => Error::MalformedRow {
            line,
            reason: format!("{kind:?}"),
        },
    }
}

/// Empirical proportion of each value, per attribute.
pub fn true_frequencies(dataset: &Dataset) -> FrequencyTable {
    let schema = dataset.schema();
    let mut counts: Vec<Vec<u64>> = schema.cardinalities().iter().map(|&k| vec![0; k]).collect();
    for r in dataset.records() {
        for (c, &v) in counts.iter_mut().zip(r.values()) {
            c[v as usize] += 1;
        }
    }
    let n = dataset.n().max(1) as f64;
    FrequencyTable::complete(
        counts
            .into_iter()
            .map(|c| c.into_iter().map(|x| x as f64 / n).collect())
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn csv_file(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn uniform_is_deterministic_and_in_range() {
        let schema = AttributeSchema::from_cardinalities(&[10; 5]).unwrap();
        let a = gen_uniform(10_000, &schema, 3);
        let b = gen_uniform(10_000, &schema, 3);
        assert_eq!(a, b);
        assert_eq!(a.n(), 10_000);
        assert_ne!(a.records(), gen_uniform(10_000, &schema, 4).records());
        for r in a.records() {
            schema.check_record(r).unwrap();
        }
    }

    #[test]
    fn uniform_frequencies_near_one_tenth() {
        let schema = AttributeSchema::from_cardinalities(&[10; 3]).unwrap();
        let truth = true_frequencies(&gen_uniform(200_000, &schema, 11));
        for j in 0..3 {
            let f = truth.attribute(j).unwrap();
            assert!((f.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(f.iter().all(|x| (x - 0.1).abs() < 0.005), "{f:?}");
        }
    }

    #[test]
    fn counting_example() {
        let schema = AttributeSchema::from_cardinalities(&[3]).unwrap();
        let records = [0, 0, 1, 2].map(|v| RecordTuple::new(vec![v])).to_vec();
        let ds = Dataset::new(schema, records, vec![vec!["a".into(), "b".into(), "c".into()]]).unwrap();
        assert_eq!(true_frequencies(&ds).attribute(0).unwrap(), &[0.5, 0.25, 0.25]);
    }

    #[test]
    fn load_codes_lexicographically_and_drops_incomplete_rows() {
        let f = csv_file("color, size\nred, L\nblue,S\n?,M\ngreen,\"S\"\nred,\n blue , L\n");
        let ds = load_csv(f.path(), &LoadOptions::default()).unwrap();
        assert_eq!(ds.schema().names(), ["color", "size"]);
        assert_eq!(ds.schema().cardinalities(), [3, 2]);
        assert_eq!(ds.value_dictionaries()[0], ["blue", "green", "red"]);
        assert_eq!(ds.dropped_rows(), 2);
        assert_eq!(ds.records()[0].values(), [2, 0]);
        assert_eq!(ds.decode(3), ["blue", "L"]);
    }

    #[test]
    fn round_trip_through_dictionaries() {
        let text = "a,b,c\nx,\"1,2\",p\ny,3,q\nx,3,p\nz,\"1,2\",q\n";
        let ds = load_csv(csv_file(text).path(), &LoadOptions::default()).unwrap();
        let original = [["x", "1,2", "p"], ["y", "3", "q"], ["x", "3", "p"], ["z", "1,2", "q"]];
        for (i, row) in original.iter().enumerate() {
            assert_eq!(ds.decode(i), row);
        }
    }

    #[test]
    fn order_of_rows_does_not_change_codes() {
        let a = load_csv(csv_file("v,w\nb,1\na,2\nc,1\n").path(), &LoadOptions::default()).unwrap();
        let b = load_csv(csv_file("v,w\nc,1\nb,1\na,2\n").path(), &LoadOptions::default()).unwrap();
        assert_eq!(a.schema(), b.schema());
        assert_eq!(a.value_dictionaries(), b.value_dictionaries());
        assert_eq!(a.records()[0], b.records()[1]);
    }

    #[test]
    fn constant_column_is_rejected() {
        let err = load_csv(csv_file("p,q\na,x\nb,x\n").path(), &LoadOptions::default()).unwrap_err();
        assert!(matches!(err, Error::CardinalityTooSmall { ref name, k: 1 } if name == "q"));
    }

    #[test]
    fn ragged_row_reports_its_line() {
        let err = load_csv(csv_file("p,q\na,x\nb\nc,y\n").path(), &LoadOptions::default()).unwrap_err();
        assert!(matches!(err, Error::MalformedRow { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn missing_file() {
        let err = load_csv("/nonexistent/data.csv", &LoadOptions::default()).unwrap_err();
        assert!(matches!(err, Error::FileNotFound(_)));
    }

    #[test]
    fn column_selection_and_headerless_files() {
        let f = csv_file("|comment line\n1, a, x.\n2, b, y.\n3, a, y\n");
        let options = LoadOptions {
            header: Some(vec!["id".into(), "letter".into(), "label".into()]),
            columns: Some(vec!["label".into(), "letter".into()]),
            comment: Some(b'|'),
            strip_trailing_dot: true,
            ..LoadOptions::default()
        };
        let ds = load_csv(f.path(), &options).unwrap();
        assert_eq!(ds.schema().names(), ["label", "letter"]);
        assert_eq!(ds.value_dictionaries()[0], ["x", "y"]);
        assert_eq!(ds.n(), 3);

        let bad = LoadOptions {
            columns: Some(vec!["nope".into()]),
            ..options
        };
        assert!(matches!(load_csv(f.path(), &bad), Err(Error::UnknownColumn(_))));
    }
}
