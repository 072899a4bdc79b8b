use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use gazekit::ingest::{filter_in_bounds, parse_fixation_log, parse_image_manifest, parse_segmentation, ColumnMapping, Letterbox, DISPLAY_SIZE};
use gazekit::Scanpath;
use log::warn;
use rayon::prelude::*;

use super::{find_for_id, list_files};
use crate::config::RunConfig;
use crate::store::{write_store, StoreManifest};
use crate::InputError;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mapping {
    /// Tracker export columns (MEDIA_NAME, TIME, FPOGX, ...); viewer from the file name
    Gazepoint,
    /// Same columns plus a USER column, as written by `generate`
    Canonical,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LetterboxMode {
    /// Image fitted and centered on the 1920x1200 display
    Fit,
    /// Log coordinates are already image-normalized
    None,
}

#[derive(Args)]
pub struct IngestArgs {
    /// Directory of CSV fixation logs
    #[arg(long)]
    pub logs: PathBuf,
    /// Image manifest CSV (image_id, ui_type, width, height[, block_id])
    #[arg(long)]
    pub manifest: PathBuf,
    /// Directory of per-image segmentation JSON files
    #[arg(long)]
    pub segmentation: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "gazepoint")]
    pub mapping: Mapping,
    #[arg(long, value_enum, default_value = "fit")]
    pub letterbox: LetterboxMode,
}

pub fn run(args: &IngestArgs, _cfg: &RunConfig) -> anyhow::Result<()> {
    let logs = list_files(&args.logs, &["csv"])?;
    if logs.is_empty() {
        return Err(InputError(format!("no logs found in {}", args.logs.display())).into());
    }
    let metas = parse_image_manifest(&args.manifest)?;
    let by_id: HashMap<&str, _> = metas.iter().map(|m| (m.image_id.as_str(), m)).collect();
    let mapping = match args.mapping {
        Mapping::Gazepoint => ColumnMapping::default(),
        Mapping::Canonical => ColumnMapping::canonical(),
    };
    let parsed: Vec<Vec<Scanpath>> = logs
        .par_iter()
        .map(|p| parse_fixation_log(p, &mapping))
        .collect::<Result<_, _>>()?;

    let mut manifest = StoreManifest {
        format_version: 1,
        logs: logs.len(),
        ..Default::default()
    };
    let mut scanpaths: BTreeMap<String, Vec<Scanpath>> = BTreeMap::new();
    for sp in parsed.into_iter().flatten() {
        let Some(meta) = by_id.get(sp.image_id.as_str()) else {
            warn!("no manifest entry for image {}; scanpath of {} skipped", sp.image_id, sp.viewer_id);
            manifest.scanpaths_without_image += 1;
            continue;
        };
        let placed = match args.letterbox {
            LetterboxMode::Fit => Letterbox::fit(DISPLAY_SIZE, (meta.width, meta.height)).apply(&sp),
            LetterboxMode::None => sp,
        };
        let (kept, dropped) = filter_in_bounds(&placed);
        manifest.fixations_read += placed.len();
        manifest.fixations_kept += kept.len();
        manifest.fixations_dropped_out_of_bounds += dropped;
        if kept.is_empty() {
            manifest.scanpaths_empty_after_filter += 1;
            continue;
        }
        let list = scanpaths.entry(kept.image_id.clone()).or_default();
        if list.iter().any(|s| s.viewer_id == kept.viewer_id) {
            return Err(InputError(format!("viewer {} appears twice for image {}", kept.viewer_id, kept.image_id)).into());
        }
        list.push(kept);
    }
    for list in scanpaths.values_mut() {
        list.sort_by(|a, b| a.viewer_id.cmp(&b.viewer_id));
    }

    let mut segmentation = BTreeMap::new();
    if let Some(dir) = &args.segmentation {
        for meta in &metas {
            if let Some(p) = find_for_id(dir, &meta.image_id, &["json"]) {
                segmentation.insert(meta.image_id.clone(), parse_segmentation(&p)?);
            }
        }
    }
    manifest.images = metas.len();
    manifest.scanpaths = scanpaths.values().map(Vec::len).sum();
    manifest.segmentations = segmentation.len();
    manifest.dropped_fraction = if manifest.fixations_read == 0 {
        0.0
    } else {
        manifest.fixations_dropped_out_of_bounds as f64 / manifest.fixations_read as f64
    };
    write_store(&args.out, &metas, &scanpaths, &segmentation, &manifest)?;
    println!(
        "{} scanpaths over {} images; {} of {} fixations dropped out of bounds ({:.2}%)",
        manifest.scanpaths,
        scanpaths.len(),
        manifest.fixations_dropped_out_of_bounds,
        manifest.fixations_read,
        100.0 * manifest.dropped_fraction
    );
    Ok(())
}
