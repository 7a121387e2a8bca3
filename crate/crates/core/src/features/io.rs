//! Trail and summary CSV files.
//!
//! Trail files carry a `t,f0..f40` header and one row per frame; summary
//! files carry `song_id,f0..f40` and one row per song. Numbers are written
//! with 9 significant digits.

use super::{FeatureFrame, FeatureTrail, SongSummary, NUM_FEATURES};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {detail}")]
    Parse {
        path: String,
        line: usize,
        detail: String,
    },
}

/// 9 significant digits, scientific.
fn sig9(x: f64) -> String {
    format!("{x:.8e}")
}

fn trail_header() -> String {
    let mut h = String::from("t");
    for i in 0..NUM_FEATURES {
        write!(h, ",f{i}").unwrap();
    }
    h
}

pub fn write_trail_csv(trail: &FeatureTrail, path: impl AsRef<Path>) -> Result<(), CsvError> {
    let path = path.as_ref();
    let mut out = trail_header();
    out.push('\n');
    for frame in trail.frames() {
        out.push_str(&sig9(frame.t));
        for v in &frame.values {
            out.push(',');
            out.push_str(&sig9(*v));
        }
        out.push('\n');
    }
    fs::write(path, out).map_err(|source| CsvError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_trail_csv(path: impl AsRef<Path>, song_id: &str) -> Result<FeatureTrail, CsvError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| CsvError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let parse_err = |line: usize, detail: String| CsvError::Parse {
        path: path.display().to_string(),
        line,
        detail,
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == trail_header() => {}
        _ => return Err(parse_err(1, "bad or missing trail header".into())),
    }
    let mut frames = Vec::new();
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != NUM_FEATURES + 1 {
            return Err(parse_err(i + 1, format!("expected {} fields", NUM_FEATURES + 1)));
        }
        let mut nums = fields.iter().map(|f| f.parse::<f64>());
        let t = nums
            .next()
            .unwrap()
            .map_err(|e| parse_err(i + 1, format!("bad t: {e}")))?;
        let mut values = [0.0; NUM_FEATURES];
        for (j, slot) in values.iter_mut().enumerate() {
            *slot = nums
                .next()
                .unwrap()
                .map_err(|e| parse_err(i + 1, format!("bad f{j}: {e}")))?;
        }
        frames.push(FeatureFrame { t, values });
    }
    let period = if frames.len() >= 2 {
        frames[1].t - frames[0].t
    } else {
        1024.0 / 44100.0
    };
    Ok(FeatureTrail::new(song_id, frames, period))
}

pub fn write_summaries_csv(
    summaries: &[SongSummary],
    path: impl AsRef<Path>,
) -> Result<(), CsvError> {
    let path = path.as_ref();
    let io_err = |source| CsvError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut writer = csv::Writer::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(source) => io_err(source),
        other => io_err(std::io::Error::other(format!("{other:?}"))),
    })?;
    let mut header = vec!["song_id".to_string()];
    header.extend((0..NUM_FEATURES).map(|i| format!("f{i}")));
    writer.write_record(&header).map_err(|e| CsvError::Parse {
        path: path.display().to_string(),
        line: 1,
        detail: e.to_string(),
    })?;
    for s in summaries {
        let mut record = vec![s.song_id.clone()];
        record.extend(s.means.iter().map(|v| sig9(*v)));
        writer.write_record(&record).map_err(|e| CsvError::Parse {
            path: path.display().to_string(),
            line: 0,
            detail: e.to_string(),
        })?;
    }
    writer.flush().map_err(io_err)
}

pub fn read_summaries_csv(path: impl AsRef<Path>) -> Result<Vec<SongSummary>, CsvError> {
    let path = path.as_ref();
    let mut reader = csv::Reader::from_path(path).map_err(|e| CsvError::Parse {
        path: path.display().to_string(),
        line: 0,
        detail: e.to_string(),
    })?;
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CsvError::Parse {
            path: path.display().to_string(),
            line: i + 2,
            detail: e.to_string(),
        })?;
        if record.len() != NUM_FEATURES + 1 {
            return Err(CsvError::Parse {
                path: path.display().to_string(),
                line: i + 2,
                detail: format!("expected {} fields", NUM_FEATURES + 1),
            });
        }
        let mut means = [0.0; NUM_FEATURES];
        for (j, slot) in means.iter_mut().enumerate() {
            *slot = record[j + 1].parse().map_err(|e| CsvError::Parse {
                path: path.display().to_string(),
                line: i + 2,
                detail: format!("bad f{j}: {e}"),
            })?;
        }
        out.push(SongSummary {
            song_id: record[0].to_string(),
            means,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trail_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let frames: Vec<FeatureFrame> = (0..5)
            .map(|i| {
                let mut values = [0.0; NUM_FEATURES];
                for (j, v) in values.iter_mut().enumerate() {
                    *v = (i * 41 + j) as f64 * 0.123456789;
                }
                FeatureFrame {
                    t: i as f64 * 1024.0 / 44100.0,
                    values,
                }
            })
            .collect();
        let trail = FeatureTrail::new("s1", frames, 1024.0 / 44100.0);
        let p = dir.path().join("trail.csv");
        write_trail_csv(&trail, &p).unwrap();
        let back = read_trail_csv(&p, "s1").unwrap();
        assert_eq!(back.frames().len(), 5);
        for (a, b) in trail.frames().iter().zip(back.frames()) {
            assert!((a.t - b.t).abs() < 1e-9);
            for (x, y) in a.values.iter().zip(&b.values) {
                assert!((x - y).abs() <= 1e-8 * x.abs().max(1.0));
            }
        }
    }

    #[test]
    fn summaries_round_trip_with_commas_in_ids() {
        let dir = tempfile::tempdir().unwrap();
        let mut means = [0.0; NUM_FEATURES];
        means[17] = 1234.5678;
        let summaries = vec![SongSummary {
            song_id: "weird, id".into(),
            means,
        }];
        let p = dir.path().join("summaries.csv");
        write_summaries_csv(&summaries, &p).unwrap();
        let back = read_summaries_csv(&p).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].song_id, "weird, id");
        assert!((back[0].means[17] - 1234.5678).abs() < 1e-4);
    }

    #[test]
    fn bad_header_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.csv");
        fs::write(&p, "nope\n1,2,3\n").unwrap();
        assert!(matches!(
            read_trail_csv(&p, "x"),
            Err(CsvError::Parse { line: 1, .. })
        ));
    }
}
