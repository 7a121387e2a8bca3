//! Album/year/era classification over 2-second windowed segments.

use super::{ensure_dir, load_nonempty_manifest};
use crate::{Model, Task};
use anyhow::{Context, Result};
use std::path::Path;
use std::process::ExitCode;
use trackline_core::features::read_trail_csv;
use trackline_core::learn::{
    accuracy, confusion_matrix, era_labels, percent3, predict_mlp, predict_nb,
    song_preserving_split, train_mlp, train_nb, write_confusion_csv, MinMaxScaler, ModelMeta,
    SegmentDataset,
};

const MLP_EPOCHS: usize = 1000;

pub fn run(
    manifest_path: &Path,
    features_dir: Option<&Path>,
    out: &Path,
    task: Task,
    model: Model,
    seed: u64,
) -> Result<ExitCode> {
    let manifest = load_nonempty_manifest(manifest_path)?;
    let default_dir = out.join("trails");
    let features_dir = features_dir.unwrap_or(&default_dir);

    let mut trails = Vec::new();
    for track in &manifest {
        let path = features_dir.join(format!("{}.csv", track.song_id));
        let trail = read_trail_csv(&path, &track.song_id)
            .with_context(|| format!("run `extract` first: no usable {}", path.display()))?;
        let class = match task {
            Task::Album => track.album.clone(),
            Task::Year => track.release_year.to_string(),
            Task::Era => format!("era{}", era_labels(track.release_year)?),
        };
        trails.push((trail, class));
    }
    let items: Vec<(&trackline_core::features::FeatureTrail, &str)> = trails
        .iter()
        .map(|(trail, class)| (trail, class.as_str()))
        .collect();
    let ds = SegmentDataset::from_trails(&items)?;
    let k = ds.classes.len();

    let (train, test) = song_preserving_split(&ds, 0.5, seed)?;
    // Leakage hygiene: scaling parameters come from the training fold only.
    let scaler = MinMaxScaler::fit(&train)?;
    let train = scaler.transform(&train);
    let test = scaler.transform(&test);

    ensure_dir(out)?;
    let (model_name, predictions): (&str, Vec<usize>) = match model {
        Model::Mlp => {
            let m = train_mlp(&train, MLP_EPOCHS, seed)?;
            trackline_core::learn::save_mlp(
                &m,
                &ModelMeta {
                    seed,
                    epochs: MLP_EPOCHS,
                    classes: ds.classes.clone(),
                },
                out.join(format!("model_{}_mlp.json", task_name(task))),
            )?;
            (
                "mlp",
                test.rows
                    .iter()
                    .map(|r| predict_mlp(&m, &r.features))
                    .collect::<Result<_, _>>()?,
            )
        }
        Model::Nb => {
            let m = train_nb(&train)?;
            trackline_core::learn::save_nb(
                &m,
                &ModelMeta {
                    seed,
                    epochs: 0,
                    classes: ds.classes.clone(),
                },
                out.join(format!("model_{}_nb.json", task_name(task))),
            )?;
            (
                "nb",
                test.rows
                    .iter()
                    .map(|r| predict_nb(&m, &r.features))
                    .collect::<Result<_, _>>()?,
            )
        }
    };
    let labels: Vec<usize> = test.rows.iter().map(|r| r.label).collect();
    let acc = accuracy(&predictions, &labels)?;
    let confusion = confusion_matrix(&predictions, &labels, k);
    write_confusion_csv(
        &confusion,
        &ds.classes,
        acc,
        out.join(format!("classify_{}_{model_name}.csv", task_name(task))),
    )?;
    println!(
        "classify: task {} model {model_name} classes {k} chance {} train {} test {} accuracy {}",
        task_name(task),
        percent3(1.0 / k as f64),
        train.rows.len(),
        test.rows.len(),
        percent3(acc)
    );
    Ok(ExitCode::SUCCESS)
}

fn task_name(task: Task) -> &'static str {
    match task {
        Task::Album => "album",
        Task::Year => "year",
        Task::Era => "era",
    }
}
