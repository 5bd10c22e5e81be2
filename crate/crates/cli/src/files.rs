//! File formats: map text files, instance JSON, dataset manifests and
//! pheromone-field exports (CSV plus ASCII PGM).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use pfaco_core::colony::PheromoneField;
use pfaco_core::fmt::fmt_sig;
use pfaco_core::grid::{GridMap, Instance, Node};

use crate::CliError;

pub fn io_err(path: &Path, err: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {err}", path.display()))
}

pub fn read_map(path: &Path) -> Result<GridMap, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    GridMap::parse_text(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn write_map(path: &Path, map: &GridMap) -> Result<(), CliError> {
    std::fs::write(path, map.to_text()).map_err(|e| io_err(path, e))
}

/// Dataset manifest written next to generated maps.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub id: String,
    pub size: usize,
    pub seed: u64,
    pub files: Vec<String>,
}

pub fn write_manifest(dir: &Path, manifest: &Manifest) -> Result<PathBuf, CliError> {
    let path = dir.join("manifest.json");
    let json = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    std::fs::write(&path, json + "\n").map_err(|e| io_err(&path, e))?;
    Ok(path)
}

pub fn read_manifest(dir: &Path) -> Result<Manifest, CliError> {
    let path = dir.join("manifest.json");
    let text = std::fs::read_to_string(&path).map_err(|e| io_err(&path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn load_dataset(dir: &Path) -> Result<(Manifest, Vec<GridMap>), CliError> {
    let manifest = read_manifest(dir)?;
    let mut maps = Vec::with_capacity(manifest.files.len());
    for file in &manifest.files {
        maps.push(read_map(&dir.join(file))?);
    }
    Ok((manifest, maps))
}

/// Instance JSON: `{"map": "<path-or-inline-grid>", "start": [x,y],
/// "goal": [x,y]}`. A map value containing a newline is an inline grid
/// in the text format; otherwise it is a path resolved relative to the
/// JSON file's directory.
#[derive(Debug, Deserialize, Serialize)]
struct InstanceDoc {
    map: String,
    start: [i32; 2],
    goal: [i32; 2],
}

pub fn read_instance(path: &Path) -> Result<Instance, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let doc: InstanceDoc = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let map = if doc.map.contains('\n') {
        GridMap::parse_text(&doc.map)
            .map_err(|e| CliError::Usage(format!("{} (inline map): {e}", path.display())))?
    } else {
        let map_path = path.parent().unwrap_or(Path::new(".")).join(&doc.map);
        read_map(&map_path)?
    };
    Instance::new(
        map,
        Node::new(doc.start[0], doc.start[1]),
        Node::new(doc.goal[0], doc.goal[1]),
    )
    .map_err(CliError::from)
}

pub fn write_instance(path: &Path, instance: &Instance, map_file: &str) -> Result<(), CliError> {
    let doc = InstanceDoc {
        map: map_file.to_string(),
        start: [instance.start.x, instance.start.y],
        goal: [instance.goal.x, instance.goal.y],
    };
    let json = serde_json::to_string_pretty(&doc).expect("instance serializes");
    std::fs::write(path, json + "\n").map_err(|e| io_err(path, e))
}

/// Per-node field view (max over incoming edges), row-major.
pub fn field_view(field: &PheromoneField) -> Vec<f64> {
    field.max_incoming_per_node()
}

/// Height x width CSV of per-node pheromone; obstacles are 0.
pub fn field_csv(values: &[f64], width: usize, height: usize) -> String {
    let mut out = String::new();
    for y in 0..height {
        let row: Vec<String> = (0..width)
            .map(|x| fmt_sig(values[y * width + x], 6))
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// ASCII PGM (P2) with the field maximum mapped to gray level 255.
pub fn field_pgm(values: &[f64], width: usize, height: usize) -> String {
    let max = values.iter().copied().fold(0.0f64, f64::max);
    let mut out = String::from("P2\n");
    out.push_str(&format!(
        "# pheromone field; linear scale: gray 255 = {}\n",
        fmt_sig(max, 6)
    ));
    out.push_str(&format!("{width} {height}\n255\n"));
    for y in 0..height {
        let row: Vec<String> = (0..width)
            .map(|x| {
                let v = values[y * width + x];
                let gray = if max > 0.0 {
                    (v / max * 255.0).round() as u32
                } else {
                    0
                };
                gray.to_string()
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
