//! Matrix and trend-report CSV formats.

use super::{CorpusError, SimilarityMatrix, TrendFit};
use std::fs;
use std::path::Path;

/// Header row of labels, then one labeled row of 4-decimal distances per
/// entity.
pub fn write_matrix_csv(matrix: &SimilarityMatrix, path: impl AsRef<Path>) -> Result<(), CorpusError> {
    let path = path.as_ref();
    let io_err = |source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut writer = csv::Writer::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(source) => io_err(source),
        other => io_err(std::io::Error::other(format!("{other:?}"))),
    })?;
    let mut header = vec![String::new()];
    header.extend(matrix.labels.iter().cloned());
    let as_parse = |e: csv::Error| CorpusError::Manifest {
        path: path.display().to_string(),
        line: 0,
        detail: e.to_string(),
    };
    writer.write_record(&header).map_err(as_parse)?;
    for (label, row) in matrix.labels.iter().zip(&matrix.d) {
        let mut record = vec![label.clone()];
        record.extend(row.iter().map(|d| format!("{d:.4}")));
        writer.write_record(&record).map_err(as_parse)?;
    }
    writer.flush().map_err(io_err)
}

pub fn read_matrix_csv(path: impl AsRef<Path>) -> Result<SimilarityMatrix, CorpusError> {
    let path = path.as_ref();
    let err = |line: usize, detail: String| CorpusError::Manifest {
        path: path.display().to_string(),
        line,
        detail,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(source) => CorpusError::Io {
                path: path.display().to_string(),
                source,
            },
            other => err(0, format!("{other:?}")),
        })?;
    let labels: Vec<String> = reader
        .headers()
        .map_err(|e| err(1, e.to_string()))?
        .iter()
        .skip(1)
        .map(|s| s.to_string())
        .collect();
    let n = labels.len();
    let mut d = Vec::with_capacity(n);
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| err(i + 2, e.to_string()))?;
        if record.len() != n + 1 {
            return Err(err(i + 2, format!("matrix is not square: row has {} cells, want {n}", record.len() - 1)));
        }
        let row: Result<Vec<f64>, _> = record.iter().skip(1).map(|f| f.parse::<f64>()).collect();
        d.push(row.map_err(|e| err(i + 2, format!("bad distance: {e}")))?);
    }
    if d.len() != n {
        return Err(err(0, format!("matrix is not square: {} rows for {n} columns", d.len())));
    }
    Ok(SimilarityMatrix { labels, d })
}

/// One record per feature: slope, intercept, r, p, r² in scientific
/// notation, in the given order.
pub fn write_trend_csv(
    rows: &[(usize, TrendFit)],
    path: impl AsRef<Path>,
) -> Result<(), CorpusError> {
    let path = path.as_ref();
    let mut out = String::from("feature,slope,intercept,r,p,r2\n");
    for (feature, fit) in rows {
        out.push_str(&format!(
            "{feature},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e}\n",
            fit.slope, fit.intercept, fit.r, fit.p, fit.r2
        ));
    }
    fs::write(path, out).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })
}
