use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, ValueEnum};
use gazekit::generate::{wta_ior_scanpath, IorSpec};
use gazekit::ingest::{parse_image_manifest, write_fixation_log};
use gazekit::saliency::{itti_koch_saliency, IttiKochConfig};
use gazekit::{Error, Scanpath};
use log::warn;
use rayon::prelude::*;

use super::find_for_id;
use crate::config::RunConfig;
use crate::store::{write_store, StoreManifest};
use crate::InputError;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    /// Winner-take-all with full inhibition of every previous fixation
    IttikochIor,
    /// Inhibition fading over the last ten fixations
    DecayingIor,
}

impl Model {
    fn name(self) -> &'static str {
        match self {
            Model::IttikochIor => "ittikoch-ior",
            Model::DecayingIor => "decaying-ior",
        }
    }
}

#[derive(Args)]
pub struct GenerateArgs {
    /// Screenshot directory
    #[arg(long)]
    pub images: PathBuf,
    /// Image manifest CSV
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long, value_enum, default_value = "ittikoch-ior")]
    pub model: Model,
    /// Output store; a tracker-format log is written alongside as generated_log.csv
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: &GenerateArgs, cfg: &RunConfig) -> anyhow::Result<()> {
    let metas: Vec<_> = parse_image_manifest(&args.manifest)?
        .into_iter()
        .filter(|m| cfg.ui_type.is_none_or(|t| t == m.ui_type))
        .collect();
    let ik = IttiKochConfig::default();
    let generated: Vec<Option<Scanpath>> = metas
        .par_iter()
        .map(|m| -> anyhow::Result<Option<Scanpath>> {
            let Some(p) = find_for_id(&args.images, &m.image_id, &["png", "jpg", "jpeg"]) else {
                warn!("no screenshot for {}; skipped", m.image_id);
                return Ok(None);
            };
            let img = image::open(&p).with_context(|| format!("reading {}", p.display()))?.to_rgb8();
            let map = match itti_koch_saliency(&img, &ik) {
                Ok(map) => map,
                Err(e @ Error::ImageTooSmall { .. }) => {
                    warn!("{}: {e}; skipped", m.image_id);
                    return Ok(None);
                }
                Err(e) => return Err(e.into()),
            };
            let sigma = IorSpec::default_sigma(map.width(), map.height());
            let ior = match args.model {
                Model::IttikochIor => IorSpec::plain(sigma),
                Model::DecayingIor => IorSpec::decaying(sigma),
            };
            match wta_ior_scanpath(&map, cfg.n_fix, &ior) {
                Ok(sp) => Ok(Some(Scanpath::new(m.image_id.clone(), args.model.name(), sp.fixations().to_vec())?)),
                Err(Error::AllZeroMap) => {
                    warn!("{}: saliency map is all zero; skipped", m.image_id);
                    Ok(None)
                }
                Err(e) => Err(e.into()),
            }
        })
        .collect::<anyhow::Result<_>>()?;

    let mut scanpaths: BTreeMap<String, Vec<Scanpath>> = BTreeMap::new();
    for sp in generated.into_iter().flatten() {
        scanpaths.entry(sp.image_id.clone()).or_default().push(sp);
    }
    if scanpaths.is_empty() {
        return Err(InputError("no scanpath could be generated".into()).into());
    }
    let kept: usize = scanpaths.values().flatten().map(Scanpath::len).sum();
    let manifest = StoreManifest {
        format_version: 1,
        images: metas.len(),
        scanpaths: scanpaths.len(),
        fixations_read: kept,
        fixations_kept: kept,
        ..Default::default()
    };
    write_store(&args.out, &metas, &scanpaths, &BTreeMap::new(), &manifest)?;
    let all: Vec<Scanpath> = scanpaths.values().flatten().cloned().collect();
    let log = args.out.join("generated_log.csv");
    write_fixation_log(fs::File::create(&log).with_context(|| format!("creating {}", log.display()))?, &all)?;
    println!("{} scanpaths of {} fixations ({})", all.len(), cfg.n_fix, args.model.name());
    Ok(())
}
