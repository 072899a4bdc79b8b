use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::Args;
use gazekit::bias::{
    brightness_bias, color_palette, fixated_color_ranking, saccade_distribution, visit_revisit, BrightnessConfig,
    KMeansConfig, LocationAccumulator, LocationConfig, Quadrant, VisitStats,
};
use gazekit::{ImageMeta, Scanpath};
use image::RgbImage;
use log::warn;
use rayon::prelude::*;
use serde_json::json;

use super::{find_for_id, horizon_label};
use crate::config::RunConfig;
use crate::render;
use crate::store::{write_json, Store};
use crate::{Analysis, InputError};

#[derive(Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub store: PathBuf,
    /// Screenshot directory; needed for the color analysis
    #[arg(long)]
    pub images: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "all")]
    pub which: Analysis,
    #[arg(long)]
    pub out: PathBuf,
}

const IMAGE_EXTS: [&str; 3] = ["png", "jpg", "jpeg"];

pub fn run(args: &AnalyzeArgs, cfg: &RunConfig) -> anyhow::Result<()> {
    let store = Store::open(&args.store)?;
    let metas: Vec<&ImageMeta> = store
        .metas
        .iter()
        .filter(|m| cfg.ui_type.is_none_or(|t| t == m.ui_type))
        .collect();
    let scanpaths: Vec<Scanpath> = metas
        .iter()
        .flat_map(|m| store.scanpaths_of(&m.image_id).iter().cloned())
        .collect();
    if scanpaths.is_empty() {
        return Err(InputError(format!("no scanpaths in {}", args.store.display())).into());
    }
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let all = args.which == Analysis::All;
    if all || args.which == Analysis::Location {
        location(&store, &metas, cfg, &args.out)?;
    }
    if all || args.which == Analysis::Saccade {
        saccade(&scanpaths, cfg, &args.out)?;
    }
    if all || args.which == Analysis::Color {
        match &args.images {
            Some(dir) => color(dir, &metas, &scanpaths, cfg, &args.out)?,
            None if all => warn!("no --images given; color analysis skipped"),
            None => return Err(InputError("color analysis needs --images".into()).into()),
        }
    }
    if all || args.which == Analysis::Visits {
        visits(&store, &metas, &args.out)?;
    }
    cfg.write(&args.out.join("run_config.toml"))?;
    Ok(())
}

fn location(store: &Store, metas: &[&ImageMeta], cfg: &RunConfig, out: &Path) -> anyhow::Result<()> {
    let mut csv = csv::Writer::from_path(out.join("location_quadrants.csv"))?;
    csv.write_record(["horizon_s", "average", "q1", "q2", "q3", "q4", "chi_square", "p"])?;
    let mut results = BTreeMap::new();
    for &h in &cfg.horizons {
        let lc = LocationConfig {
            horizon_s: h,
            ui_type: cfg.ui_type,
            ..Default::default()
        };
        let bias = metas
            .par_iter()
            .map(|m| {
                let mut acc = LocationAccumulator::new(&lc);
                for sp in store.scanpaths_of(&m.image_id) {
                    acc.add(sp, h);
                }
                acc
            })
            .reduce(|| LocationAccumulator::new(&lc), LocationAccumulator::merge)
            .finish()?;
        let label = horizon_label(h);
        for (name, q) in [("per_viewer", &bias.per_viewer), ("per_viewer_image", &bias.per_viewer_image)] {
            let mut rec = vec![h.to_string(), name.to_string()];
            rec.extend(q.as_array().map(|v| v.to_string()));
            rec.push(bias.omnibus.statistic.to_string());
            rec.push(bias.omnibus.p_value.to_string());
            csv.write_record(&rec)?;
        }
        render::save(&render::heat_grid(&bias.heat, 16), &out.join(format!("location_heat_{label}.png")))?;
        let q = bias.per_viewer;
        println!(
            "location {label}: Q1 {:.2} Q2 {:.2} Q3 {:.2} Q4 {:.2} per viewer; chi2 {:.2}, p {:.3e}",
            q.get(Quadrant::Q1),
            q.get(Quadrant::Q2),
            q.get(Quadrant::Q3),
            q.get(Quadrant::Q4),
            bias.omnibus.statistic,
            bias.omnibus.p_value
        );
        results.insert(label, bias);
    }
    csv.flush()?;
    write_json(&out.join("location.json"), &results)
}

fn saccade(scanpaths: &[Scanpath], cfg: &RunConfig, out: &Path) -> anyhow::Result<()> {
    let hist = saccade_distribution(scanpaths, cfg.angle_bins)?;
    render::save(&render::polar(&hist, 512), &out.join("saccade_polar.png"))?;
    let d = hist.directions;
    println!("saccades: right {} left {} down {} up {}", d.right, d.left, d.down, d.up);
    write_json(&out.join("saccade.json"), &hist)
}

fn load_images(dir: &Path, metas: &[&ImageMeta]) -> anyhow::Result<HashMap<String, RgbImage>> {
    let loaded: Vec<Option<(String, RgbImage)>> = metas
        .par_iter()
        .map(|m| -> anyhow::Result<_> {
            let Some(p) = find_for_id(dir, &m.image_id, &IMAGE_EXTS) else {
                warn!("no screenshot for {}; left out of the color analysis", m.image_id);
                return Ok(None);
            };
            let img = image::open(&p).with_context(|| format!("reading {}", p.display()))?;
            Ok(Some((m.image_id.clone(), img.to_rgb8())))
        })
        .collect::<anyhow::Result<_>>()?;
    Ok(loaded.into_iter().flatten().collect())
}

fn color(dir: &Path, metas: &[&ImageMeta], scanpaths: &[Scanpath], cfg: &RunConfig, out: &Path) -> anyhow::Result<()> {
    let images = load_images(dir, metas)?;
    if images.is_empty() {
        return Err(InputError(format!("no screenshots found in {}", dir.display())).into());
    }
    let mut ids: Vec<&String> = images.keys().collect();
    ids.sort();
    let ordered: Vec<&RgbImage> = ids.iter().map(|id| &images[*id]).collect();
    let kcfg = KMeansConfig {
        k: cfg.palette_k,
        seed: cfg.seed,
        ..Default::default()
    };
    let mut palette = color_palette(&ordered, &kcfg)?;
    render::save(
        &render::palette_bars(&palette, |i| palette.colors[i].pixel_share, 24, 400),
        &out.join("palette_share.png"),
    )?;
    let mut rankings = BTreeMap::new();
    for &h in &cfg.horizons {
        palette = fixated_color_ranking(&palette, &images, scanpaths, h);
        let ranked = palette.clone();
        render::save(
            &render::palette_bars(&ranked, |i| ranked.colors[i].count_at(h).unwrap_or(0) as f64, 24, 400),
            &out.join(format!("palette_fixated_{}.png", horizon_label(h))),
        )?;
        rankings.insert(horizon_label(h), ranked.colors.iter().map(|c| c.hex()).collect::<Vec<_>>());
    }
    let brightness = brightness_bias(
        &images,
        scanpaths,
        &BrightnessConfig {
            horizons: cfg.horizons.clone(),
            seed: cfg.seed,
            ..Default::default()
        },
    )?;
    if let Some(b) = &brightness.bartlett {
        println!("brightness: Bartlett {:.3}, p {:.3e}", b.statistic, b.p_value);
    }
    write_json(
        &out.join("color.json"),
        &json!({ "palette": palette, "ranking": rankings, "brightness": brightness }),
    )
}

fn visits(store: &Store, metas: &[&ImageMeta], out: &Path) -> anyhow::Result<()> {
    let mut stats = VisitStats::default();
    let mut with_boxes = 0;
    for m in metas {
        let Some(boxes) = store.segmentation(&m.image_id)? else {
            continue;
        };
        with_boxes += 1;
        stats = stats.merge(&visit_revisit(store.scanpaths_of(&m.image_id), &boxes, (m.width, m.height)));
    }
    if with_boxes == 0 {
        warn!("store has no segmentation; visit statistics are empty");
    }
    write_json(&out.join("visits.json"), &json!({ "images": with_boxes, "stats": stats }))
}
