//! Versioned model dumps and evaluation reports.

use super::{percent3, LearnError, MlpModel, NbModel};
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

const FORMAT_VERSION: u32 = 1;

/// Provenance recorded alongside every saved model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelMeta {
    pub seed: u64,
    pub epochs: usize,
    pub classes: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct ModelFile<M> {
    format_version: u32,
    kind: String,
    meta: ModelMeta,
    model: M,
}

fn save<M: Serialize>(
    kind: &str,
    model: &M,
    meta: &ModelMeta,
    path: &Path,
) -> Result<(), LearnError> {
    let file = ModelFile {
        format_version: FORMAT_VERSION,
        kind: kind.to_string(),
        meta: meta.clone(),
        model,
    };
    let text = serde_json::to_string_pretty(&file).map_err(|e| LearnError::BadModelFile {
        path: path.display().to_string(),
        detail: e.to_string(),
    })?;
    fs::write(path, text).map_err(|source| LearnError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load<M: for<'de> Deserialize<'de>>(kind: &str, path: &Path) -> Result<(M, ModelMeta), LearnError> {
    let text = fs::read_to_string(path).map_err(|source| LearnError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let file: ModelFile<M> = serde_json::from_str(&text).map_err(|e| LearnError::BadModelFile {
        path: path.display().to_string(),
        detail: e.to_string(),
    })?;
    if file.format_version != FORMAT_VERSION {
        return Err(LearnError::BadModelFile {
            path: path.display().to_string(),
            detail: format!("unsupported format version {}", file.format_version),
        });
    }
    if file.kind != kind {
        return Err(LearnError::BadModelFile {
            path: path.display().to_string(),
            detail: format!("expected a {kind} model, found {:?}", file.kind),
        });
    }
    Ok((file.model, file.meta))
}

pub fn save_mlp(model: &MlpModel, meta: &ModelMeta, path: impl AsRef<Path>) -> Result<(), LearnError> {
    save("mlp", model, meta, path.as_ref())
}

pub fn load_mlp(path: impl AsRef<Path>) -> Result<(MlpModel, ModelMeta), LearnError> {
    load("mlp", path.as_ref())
}

pub fn save_nb(model: &NbModel, meta: &ModelMeta, path: impl AsRef<Path>) -> Result<(), LearnError> {
    save("nb", model, meta, path.as_ref())
}

pub fn load_nb(path: impl AsRef<Path>) -> Result<(NbModel, ModelMeta), LearnError> {
    load("nb", path.as_ref())
}

/// Confusion matrix (rows = true class) plus the overall accuracy at the
/// 3-decimal percent convention.
pub fn write_confusion_csv(
    confusion: &[Vec<usize>],
    classes: &[String],
    overall_accuracy: f64,
    path: impl AsRef<Path>,
) -> Result<(), LearnError> {
    let path = path.as_ref();
    let mut out = String::from("true_class");
    for c in classes {
        out.push_str(&format!(",pred_{c}"));
    }
    out.push('\n');
    for (c, row) in classes.iter().zip(confusion) {
        out.push_str(c);
        for n in row {
            out.push_str(&format!(",{n}"));
        }
        out.push('\n');
    }
    out.push_str(&format!("overall_accuracy,{}\n", percent3(overall_accuracy)));
    fs::write(path, out).map_err(|source| LearnError::Io {
        path: path.display().to_string(),
        source,
    })
}
