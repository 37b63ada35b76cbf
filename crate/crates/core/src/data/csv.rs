use std::path::Path;

use super::{Dataset, Label};
use crate::error::{Error, Result};

/// Which column of a CSV file holds the class label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelColumn {
    Index(usize),
    Last,
}

impl LabelColumn {
    fn resolve(self, width: usize) -> usize {
        match self {
            LabelColumn::Index(i) => i,
            LabelColumn::Last => width.saturating_sub(1),
        }
    }
}

/// Loads a labeled dataset. Rows keep file order; labels 0/1 are remapped
/// to −1/+1. Row and column numbers in errors are zero-based and count data
/// rows only.
pub fn load_csv(
    path: impl AsRef<Path>,
    label_column: LabelColumn,
    has_header: bool,
) -> Result<Dataset> {
    let (rows, labels) = read_feature_rows(path, has_header, Some(label_column))?;
    Dataset::new(rows, labels.unwrap_or_default())
}

/// Reads feature rows, optionally splitting off a label column. An empty
/// file yields no rows.
pub fn read_feature_rows(
    path: impl AsRef<Path>,
    has_header: bool,
    label_column: Option<LabelColumn>,
) -> Result<(Vec<Vec<f64>>, Option<Vec<Label>>)> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);

    let mut rows = Vec::new();
    let mut labels = label_column.map(|_| Vec::new());
    let mut width = None;
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::RaggedRow {
                row,
                found: record.len(),
                expected,
            });
        }
        let label_idx = label_column.map(|c| c.resolve(expected));
        let mut features = Vec::with_capacity(expected);
        for (column, cell) in record.iter().enumerate() {
            if Some(column) == label_idx {
                if cell.is_empty() {
                    return Err(Error::MissingLabel { row, column });
                }
                let value = parse_cell(cell, row, column)?;
                let label = Label::from_value(value).ok_or(Error::BadLabel { row, value })?;
                labels.as_mut().expect("label column set").push(label);
                continue;
            }
            let value = parse_cell(cell, row, column)?;
            if !value.is_finite() {
                return Err(Error::NonFinite { row, column });
            }
            features.push(value);
        }
        if let Some(idx) = label_idx {
            if idx >= expected {
                return Err(Error::MissingLabel { row, column: idx });
            }
        }
        rows.push(features);
    }
    Ok((rows, labels))
}

fn parse_cell(cell: &str, row: usize, column: usize) -> Result<f64> {
    cell.parse::<f64>().map_err(|_| Error::ParseCell {
        row,
        column,
        value: cell.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(name: &str, content: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join(format!("lcc-csv-{}-{name}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("data.csv");
        std::fs::File::create(&path)
            .unwrap()
            .write_all(content.as_bytes())
            .unwrap();
        path
    }

    #[test]
    fn three_rows_in_file_order() {
        let p = write_tmp("basic", "a,b,y\n1,2,1\n3,4,-1\n5,6,1\n");
        let d = load_csv(&p, LabelColumn::Last, true).unwrap();
        assert_eq!(d.m(), 3);
        assert_eq!(d.labels(), &[Label::Pos, Label::Neg, Label::Pos]);
        assert_eq!(d.row(1), &[3.0, 4.0]);
    }

    #[test]
    fn zero_one_labels_remapped() {
        let p = write_tmp("remap", "0,1.5,2\n1,2.5,3\n");
        let d = load_csv(&p, LabelColumn::Index(0), false).unwrap();
        assert_eq!(d.labels(), &[Label::Neg, Label::Pos]);
        assert_eq!(d.row(0), &[1.5, 2.0]);
    }

    #[test]
    fn text_cell_reports_position() {
        let p = write_tmp("text", "1,2,1\n3,abc,-1\n");
        match load_csv(&p, LabelColumn::Last, false) {
            Err(Error::ParseCell { row, column, value }) => {
                assert_eq!((row, column, value.as_str()), (1, 1, "abc"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_label_is_error() {
        let p = write_tmp("nolabel", "1,2,1\n3,4,\n");
        assert!(matches!(
            load_csv(&p, LabelColumn::Last, false),
            Err(Error::MissingLabel { row: 1, column: 2 })
        ));
    }

    #[test]
    fn empty_file_yields_no_rows() {
        let p = write_tmp("empty", "");
        let (rows, labels) = read_feature_rows(&p, false, None).unwrap();
        assert!(rows.is_empty());
        assert!(labels.is_none());
    }
}
