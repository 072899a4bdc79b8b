//! Canonical dataset store:
//!
//! ```text
//! <store>/manifest.json                  run summary and counts
//! <store>/images.csv                     image manifest
//! <store>/scanpaths/<image>/<viewer>.csv x,y,onset_s,duration_s
//! <store>/segmentation/<image>.json      element boxes, when available
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use gazekit::ingest::{parse_image_manifest, parse_segmentation, segmentation_to_json, write_image_manifest};
use gazekit::{ElementBox, Fixation, ImageMeta, Scanpath};
use serde::{Deserialize, Serialize};

use crate::InputError;

pub const SCANPATH_HEADER: [&str; 4] = ["x", "y", "onset_s", "duration_s"];

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StoreManifest {
    pub format_version: u32,
    pub images: usize,
    pub scanpaths: usize,
    pub fixations_read: usize,
    pub fixations_kept: usize,
    pub fixations_dropped_out_of_bounds: usize,
    pub dropped_fraction: f64,
    pub scanpaths_without_image: usize,
    pub scanpaths_empty_after_filter: usize,
    pub segmentations: usize,
    pub logs: usize,
}

/// File-system-safe name for an id.
pub fn file_name(id: &str) -> String {
    id.chars()
        .map(|c| if matches!(c, '/' | '\\' | ':' | '\0') { '_' } else { c })
        .collect()
}

pub fn write_scanpath_csv(path: &Path, sp: &Scanpath) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(SCANPATH_HEADER)?;
    for f in sp.fixations() {
        w.write_record([f.x, f.y, f.onset_s, f.duration_s].map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_scanpath_csv(path: &Path, image_id: &str, viewer_id: &str) -> anyhow::Result<Scanpath> {
    let mut r = csv::Reader::from_path(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != SCANPATH_HEADER {
        return Err(InputError(format!("{}: header {header:?}, expected {SCANPATH_HEADER:?}", path.display())).into());
    }
    let mut fixations = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| InputError(format!("{}: {e}", path.display())))?;
        let v: Vec<f64> = rec
            .iter()
            .map(|s| s.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| InputError(format!("{} line {}: {e}", path.display(), i + 2)))?;
        if v.len() != 4 {
            return Err(InputError(format!("{} line {}: {} fields", path.display(), i + 2, v.len())).into());
        }
        fixations.push(Fixation::new(v[0], v[1], v[2], v[3]).with_context(|| format!("{} line {}", path.display(), i + 2))?);
    }
    Scanpath::new(image_id.to_string(), viewer_id.to_string(), fixations).with_context(|| path.display().to_string())
}

pub struct Store {
    pub root: PathBuf,
    pub metas: Vec<ImageMeta>,
    /// image id -> scanpaths sorted by viewer
    pub scanpaths: BTreeMap<String, Vec<Scanpath>>,
}

impl Store {
    pub fn open(root: &Path) -> anyhow::Result<Store> {
        let manifest = root.join("images.csv");
        if !manifest.is_file() {
            return Err(InputError(format!("{} is not a dataset store (no images.csv)", root.display())).into());
        }
        let metas = parse_image_manifest(&manifest)?;
        let mut scanpaths = BTreeMap::new();
        for meta in &metas {
            let dir = root.join("scanpaths").join(file_name(&meta.image_id));
            if !dir.is_dir() {
                continue;
            }
            let mut files: Vec<PathBuf> = fs::read_dir(&dir)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|e| e == "csv"))
                .collect();
            files.sort();
            let mut paths = Vec::new();
            for f in files {
                let viewer = f.file_stem().unwrap_or_default().to_string_lossy().into_owned();
                paths.push(read_scanpath_csv(&f, &meta.image_id, &viewer)?);
            }
            scanpaths.insert(meta.image_id.clone(), paths);
        }
        Ok(Store {
            root: root.to_path_buf(),
            metas,
            scanpaths,
        })
    }

    pub fn scanpaths_of(&self, image_id: &str) -> &[Scanpath] {
        self.scanpaths.get(image_id).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn segmentation(&self, image_id: &str) -> anyhow::Result<Option<Vec<ElementBox>>> {
        let p = self.root.join("segmentation").join(format!("{}.json", file_name(image_id)));
        if !p.is_file() {
            return Ok(None);
        }
        Ok(Some(parse_segmentation(&p)?))
    }
}

/// Writes a fresh store; an existing `scanpaths/` tree is replaced so reruns
/// leave no stale files behind.
pub fn write_store(
    root: &Path,
    metas: &[ImageMeta],
    scanpaths: &BTreeMap<String, Vec<Scanpath>>,
    segmentation: &BTreeMap<String, Vec<ElementBox>>,
    manifest: &StoreManifest,
) -> anyhow::Result<()> {
    fs::create_dir_all(root).with_context(|| format!("creating {}", root.display()))?;
    for sub in ["scanpaths", "segmentation"] {
        let p = root.join(sub);
        if p.exists() {
            fs::remove_dir_all(&p).with_context(|| format!("clearing {}", p.display()))?;
        }
    }
    let file = fs::File::create(root.join("images.csv"))?;
    write_image_manifest(file, metas)?;
    for (image, paths) in scanpaths {
        let dir = root.join("scanpaths").join(file_name(image));
        fs::create_dir_all(&dir)?;
        for sp in paths {
            write_scanpath_csv(&dir.join(format!("{}.csv", file_name(&sp.viewer_id))), sp)?;
        }
    }
    if !segmentation.is_empty() {
        let dir = root.join("segmentation");
        fs::create_dir_all(&dir)?;
        for (image, boxes) in segmentation {
            fs::write(dir.join(format!("{}.json", file_name(image))), segmentation_to_json(boxes))?;
        }
    }
    write_json(&root.join("manifest.json"), manifest)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
