use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, ValueEnum};
use gazekit::saliency::io::{load_grid, load_png};
use gazekit::saliency::{binary_fixation_points, fixation_map, GaussianKernelSpec};
use gazekit::salmap_metrics::{auc_judd, cc, info_gain, kl_div, nss, sim};
use gazekit::scanpath_metrics::{MetricSpace, ScanpathMetricConfig, ScanpathScores};
use gazekit::{ImageMeta, NormMode, SaliencyMap, Scanpath, UiType};
use log::warn;
use rayon::prelude::*;
use serde::Serialize;

use super::{find_for_id, horizon_label, mean_sd};
use crate::config::RunConfig;
use crate::store::{write_json, Store};
use crate::InputError;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Space {
    /// Image-normalized coordinates (diagonal sqrt 2)
    Normalized,
    /// Pixels of each image
    Pixels,
}

#[derive(Args)]
pub struct EvalScanpathArgs {
    /// Store of predicted scanpaths
    #[arg(long)]
    pub pred: PathBuf,
    /// Ground-truth store
    #[arg(long)]
    pub gt: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Keep only the first N fixations of each prediction
    #[arg(long)]
    pub pred_fixations: Option<usize>,
    #[arg(long, value_enum, default_value = "normalized")]
    pub space: Space,
}

/// Mean and sample SD of one metric over images.
#[derive(Debug, Serialize)]
pub struct Aggregate {
    pub n: usize,
    pub mean: Option<f64>,
    pub sd: Option<f64>,
}

fn aggregate(values: impl Iterator<Item = Option<f64>>) -> Aggregate {
    let v: Vec<f64> = values.flatten().collect();
    let (mean, sd) = mean_sd(&v);
    Aggregate { n: v.len(), mean, sd }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Named per-row metric extractors.
type Metrics<'a, R> = [(&'a str, &'a dyn Fn(&R) -> Option<f64>)];

fn summary_table<R>(
    rows: &[R],
    ui: impl Fn(&R) -> UiType,
    metrics: &Metrics<R>,
) -> BTreeMap<String, BTreeMap<String, Aggregate>> {
    let mut groups: BTreeMap<String, Vec<&R>> = BTreeMap::new();
    for r in rows {
        groups.entry("all".into()).or_default().push(r);
        groups.entry(ui(r).to_string()).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|(g, rs)| {
            let per_metric = metrics
                .iter()
                .map(|(name, f)| (name.to_string(), aggregate(rs.iter().map(|r| f(r)))))
                .collect();
            (g, per_metric)
        })
        .collect()
}

fn print_summary(summary: &BTreeMap<String, BTreeMap<String, Aggregate>>) {
    for (group, metrics) in summary {
        let cells: Vec<String> = metrics
            .iter()
            .map(|(m, a)| match (a.mean, a.sd) {
                (Some(mean), Some(sd)) => format!("{m} {mean:.3} ± {sd:.3}"),
                (Some(mean), None) => format!("{m} {mean:.3}"),
                _ => format!("{m} -"),
            })
            .collect();
        println!("{group:<8} {}", cells.join("  "));
    }
}

#[derive(Debug, Serialize)]
struct ScanpathRow {
    image_id: String,
    ui_type: UiType,
    pairs: usize,
    dtw: Option<f64>,
    tde: Option<f64>,
    eyenalysis: Option<f64>,
    rec: Option<f64>,
    det: Option<f64>,
    corm: Option<f64>,
}

fn mean_of(v: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    mean_sd(&v.flatten().collect::<Vec<_>>()).0
}

/// A prediction whose viewer id also occurs in the ground truth is compared
/// with that viewer only; any other prediction is compared with every
/// ground-truth scanpath of the image.
fn pairs<'a>(pred: &'a [Scanpath], gt: &'a [Scanpath]) -> Vec<(&'a Scanpath, &'a Scanpath)> {
    let by_viewer: HashMap<&str, &Scanpath> = gt.iter().map(|s| (s.viewer_id.as_str(), s)).collect();
    let mut out = Vec::new();
    for p in pred {
        match by_viewer.get(p.viewer_id.as_str()) {
            Some(g) => out.push((*g, p)),
            None => out.extend(gt.iter().map(|g| (g, p))),
        }
    }
    out
}

pub fn run_scanpath(args: &EvalScanpathArgs, cfg: &RunConfig) -> anyhow::Result<()> {
    let pred = Store::open(&args.pred)?;
    let gt = Store::open(&args.gt)?;
    let metas: Vec<&ImageMeta> = gt
        .metas
        .iter()
        .filter(|m| cfg.ui_type.is_none_or(|t| t == m.ui_type))
        .filter(|m| !gt.scanpaths_of(&m.image_id).is_empty() && !pred.scanpaths_of(&m.image_id).is_empty())
        .collect();
    if metas.is_empty() {
        return Err(InputError("no image has both predicted and ground-truth scanpaths".into()).into());
    }
    let rows: Vec<ScanpathRow> = metas
        .par_iter()
        .map(|meta| -> anyhow::Result<ScanpathRow> {
            let config = ScanpathMetricConfig {
                space: match args.space {
                    Space::Normalized => MetricSpace::Normalized,
                    Space::Pixels => MetricSpace::Pixels {
                        width: meta.width as f64,
                        height: meta.height as f64,
                    },
                },
                rec_threshold_frac: cfg.rec_threshold_frac,
                tde_k: cfg.tde_k,
                det_min_line: cfg.det_min_line,
            };
            let preds: Vec<Scanpath> = pred
                .scanpaths_of(&meta.image_id)
                .iter()
                .map(|s| match args.pred_fixations {
                    Some(n) => s.truncated(n),
                    None => s.clone(),
                })
                .collect();
            let scores: Vec<ScanpathScores> = pairs(&preds, gt.scanpaths_of(&meta.image_id))
                .into_iter()
                .map(|(g, p)| config.evaluate(g, p))
                .collect::<Result<_, _>>()?;
            Ok(ScanpathRow {
                image_id: meta.image_id.clone(),
                ui_type: meta.ui_type,
                pairs: scores.len(),
                dtw: mean_of(scores.iter().map(|s| Some(s.dtw))),
                tde: mean_of(scores.iter().map(|s| s.tde)),
                eyenalysis: mean_of(scores.iter().map(|s| Some(s.eyenalysis))),
                rec: mean_of(scores.iter().map(|s| Some(s.rec))),
                det: mean_of(scores.iter().map(|s| Some(s.det))),
                corm: mean_of(scores.iter().map(|s| s.corm)),
            })
        })
        .collect::<anyhow::Result<_>>()?;

    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let mut w = csv::Writer::from_path(args.out.join("scanpath_metrics.csv"))?;
    w.write_record(["image_id", "ui_type", "pairs", "dtw", "tde", "eyenalysis", "rec", "det", "corm"])?;
    for r in &rows {
        w.write_record([
            r.image_id.clone(),
            r.ui_type.to_string(),
            r.pairs.to_string(),
            fmt_opt(r.dtw),
            fmt_opt(r.tde),
            fmt_opt(r.eyenalysis),
            fmt_opt(r.rec),
            fmt_opt(r.det),
            fmt_opt(r.corm),
        ])?;
    }
    w.flush()?;
    let summary = summary_table(
        &rows,
        |r| r.ui_type,
        &[
            ("dtw", &|r: &ScanpathRow| r.dtw),
            ("tde", &|r: &ScanpathRow| r.tde),
            ("eyenalysis", &|r: &ScanpathRow| r.eyenalysis),
            ("rec", &|r: &ScanpathRow| r.rec),
            ("det", &|r: &ScanpathRow| r.det),
            ("corm", &|r: &ScanpathRow| r.corm),
        ],
    );
    write_json(
        &args.out.join("scanpath_summary.json"),
        &serde_json::json!({ "config": cfg, "images": rows.len(), "summary": summary }),
    )?;
    print_summary(&summary);
    Ok(())
}

#[derive(Args)]
pub struct EvalSalmapArgs {
    /// Predicted maps: <pred>/<image>.{gzsm,png} or <pred>/<image>/<horizon>s.gzsm
    #[arg(long)]
    pub pred: PathBuf,
    /// Ground-truth store
    #[arg(long)]
    pub gt: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

/// Resolution of the per-UI-type baseline maps.
const BASELINE_SIZE: usize = 128;

fn load_map(path: &Path) -> anyhow::Result<SaliencyMap> {
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    Ok(if ext.eq_ignore_ascii_case("gzsm") {
        load_grid(path)?
    } else {
        load_png(path)?
    })
}

fn find_pred(dir: &Path, id: &str, h: f64) -> Option<PathBuf> {
    find_for_id(dir, id, &["gzsm", "png"]).or_else(|| {
        let p = dir.join(crate::store::file_name(id)).join(format!("{}.gzsm", horizon_label(h)));
        p.is_file().then_some(p)
    })
}

#[derive(Debug, Serialize)]
struct SalmapRow {
    image_id: String,
    ui_type: UiType,
    horizon_s: f64,
    auc_judd: Option<f64>,
    nss: Option<f64>,
    info_gain: Option<f64>,
    sim: Option<f64>,
    cc: Option<f64>,
    kl: Option<f64>,
}

fn ok_or_warn(what: &str, id: &str, r: gazekit::Result<f64>) -> Option<f64> {
    r.map_err(|e| warn!("{what} undefined for {id}: {e}")).ok()
}

pub fn run_salmap(args: &EvalSalmapArgs, cfg: &RunConfig) -> anyhow::Result<()> {
    let gt = Store::open(&args.gt)?;
    let metas: Vec<&ImageMeta> = gt
        .metas
        .iter()
        .filter(|m| cfg.ui_type.is_none_or(|t| t == m.ui_type))
        .filter(|m| !gt.scanpaths_of(&m.image_id).is_empty())
        .collect();
    let mut rows = Vec::new();
    for &h in &cfg.horizons {
        let gt_maps: Vec<(&ImageMeta, SaliencyMap)> = metas
            .par_iter()
            .map(|m| -> anyhow::Result<_> {
                let kernel = GaussianKernelSpec::from_diagonal_fraction(m.width, m.height, cfg.sigma_frac)?;
                Ok((*m, fixation_map(gt.scanpaths_of(&m.image_id), m, &kernel, h)?))
            })
            .collect::<anyhow::Result<_>>()?;

        // mean ground-truth distribution per UI type
        let mut baselines: BTreeMap<UiType, (Vec<f64>, usize)> = BTreeMap::new();
        for (m, map) in &gt_maps {
            if map.is_all_zero() {
                continue;
            }
            let small = map.resized(BASELINE_SIZE, BASELINE_SIZE).normalized(NormMode::Sum1);
            let acc = baselines
                .entry(m.ui_type)
                .or_insert_with(|| (vec![0.0; BASELINE_SIZE * BASELINE_SIZE], 0));
            acc.0.iter_mut().zip(small.values()).for_each(|(a, v)| *a += v);
            acc.1 += 1;
        }
        let baselines: BTreeMap<UiType, SaliencyMap> = baselines
            .into_iter()
            .map(|(t, (sum, n))| {
                let mean = sum.into_iter().map(|v| v / n as f64).collect();
                Ok((t, SaliencyMap::new(BASELINE_SIZE, BASELINE_SIZE, mean, NormMode::Sum1)?))
            })
            .collect::<anyhow::Result<_>>()?;

        let part: Vec<Option<SalmapRow>> = gt_maps
            .par_iter()
            .map(|(m, gt_map)| -> anyhow::Result<Option<SalmapRow>> {
                let Some(path) = find_pred(&args.pred, &m.image_id, h) else {
                    warn!("no predicted map for {}; skipped", m.image_id);
                    return Ok(None);
                };
                let mut pred = load_map(&path)?;
                if pred.dims() != gt_map.dims() {
                    pred = pred.resized(gt_map.width(), gt_map.height());
                }
                let fix = binary_fixation_points(gt.scanpaths_of(&m.image_id), m, h)?;
                let id = m.image_id.as_str();
                let (auc, nss_v, ig) = if fix.is_empty() {
                    (None, None, None)
                } else {
                    let ig = baselines.get(&m.ui_type).and_then(|b| {
                        let b = b.resized(gt_map.width(), gt_map.height());
                        ok_or_warn("IG", id, info_gain(&pred, &b, &fix, cfg.eps))
                    });
                    (ok_or_warn("AUC", id, auc_judd(&pred, &fix)), ok_or_warn("NSS", id, nss(&pred, &fix)), ig)
                };
                Ok(Some(SalmapRow {
                    image_id: m.image_id.clone(),
                    ui_type: m.ui_type,
                    horizon_s: h,
                    auc_judd: auc,
                    nss: nss_v,
                    info_gain: ig,
                    sim: ok_or_warn("SIM", id, sim(&pred, gt_map)),
                    cc: ok_or_warn("CC", id, cc(&pred, gt_map)),
                    kl: ok_or_warn("KL", id, kl_div(&pred, gt_map, cfg.eps)),
                }))
            })
            .collect::<anyhow::Result<_>>()?;
        rows.extend(part.into_iter().flatten());
    }
    if rows.is_empty() {
        return Err(InputError(format!("no predicted maps found in {}", args.pred.display())).into());
    }

    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let mut w = csv::Writer::from_path(args.out.join("salmap_metrics.csv"))?;
    w.write_record(["image_id", "ui_type", "horizon_s", "auc_judd", "nss", "info_gain", "sim", "cc", "kl"])?;
    for r in &rows {
        w.write_record([
            r.image_id.clone(),
            r.ui_type.to_string(),
            r.horizon_s.to_string(),
            fmt_opt(r.auc_judd),
            fmt_opt(r.nss),
            fmt_opt(r.info_gain),
            fmt_opt(r.sim),
            fmt_opt(r.cc),
            fmt_opt(r.kl),
        ])?;
    }
    w.flush()?;
    let mut by_horizon = BTreeMap::new();
    for &h in &cfg.horizons {
        let rs: Vec<&SalmapRow> = rows.iter().filter(|r| r.horizon_s == h).collect();
        let summary = summary_table(
            &rs,
            |r| r.ui_type,
            &[
                ("auc_judd", &|r: &&SalmapRow| r.auc_judd),
                ("nss", &|r: &&SalmapRow| r.nss),
                ("info_gain", &|r: &&SalmapRow| r.info_gain),
                ("sim", &|r: &&SalmapRow| r.sim),
                ("cc", &|r: &&SalmapRow| r.cc),
                ("kl", &|r: &&SalmapRow| r.kl),
            ],
        );
        println!("horizon {}", horizon_label(h));
        print_summary(&summary);
        by_horizon.insert(horizon_label(h), summary);
    }
    write_json(
        &args.out.join("salmap_summary.json"),
        &serde_json::json!({ "config": cfg, "summary": by_horizon }),
    )?;
    Ok(())
}
