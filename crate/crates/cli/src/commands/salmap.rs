use std::fs;
use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use gazekit::saliency::io::{save_grid, save_png16};
use gazekit::saliency::{fixation_map, GaussianKernelSpec};
use log::warn;
use rayon::prelude::*;

use super::horizon_label;
use crate::config::RunConfig;
use crate::store::{file_name, Store};

#[derive(Args)]
pub struct SalmapArgs {
    #[arg(long)]
    pub store: PathBuf,
    /// Output directory: <out>/<image>/<horizon>s.{png,gzsm}
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: &SalmapArgs, cfg: &RunConfig) -> anyhow::Result<()> {
    let store = Store::open(&args.store)?;
    let metas: Vec<_> = store
        .metas
        .iter()
        .filter(|m| cfg.ui_type.is_none_or(|t| t == m.ui_type))
        .filter(|m| {
            let has = !store.scanpaths_of(&m.image_id).is_empty();
            if !has {
                warn!("no scanpaths for image {}; skipped", m.image_id);
            }
            has
        })
        .collect();
    let written: Vec<usize> = metas
        .par_iter()
        .map(|meta| -> anyhow::Result<usize> {
            let kernel = GaussianKernelSpec::from_diagonal_fraction(meta.width, meta.height, cfg.sigma_frac)?;
            let dir = args.out.join(file_name(&meta.image_id));
            fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            for &h in &cfg.horizons {
                let map = fixation_map(store.scanpaths_of(&meta.image_id), meta, &kernel, h)?;
                // not with_extension: labels like "0.5s" contain a dot
                let label = horizon_label(h);
                save_png16(&dir.join(format!("{label}.png")), &map)?;
                save_grid(&dir.join(format!("{label}.gzsm")), &map)?;
            }
            Ok(cfg.horizons.len())
        })
        .collect::<anyhow::Result<_>>()?;
    println!("{} maps for {} images", written.iter().sum::<usize>(), metas.len());
    Ok(())
}
