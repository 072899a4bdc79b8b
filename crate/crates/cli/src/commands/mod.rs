pub mod analyze;
pub mod eval;
pub mod generate;
pub mod ingest;
pub mod salmap;

use std::path::{Path, PathBuf};

use anyhow::Context;

use crate::InputError;

/// Regular files in `dir` with one of `exts`, sorted by name.
pub fn list_files(dir: &Path, exts: &[&str]) -> anyhow::Result<Vec<PathBuf>> {
    if !dir.is_dir() {
        return Err(InputError(format!("{} is not a directory", dir.display())).into());
    }
    let mut out: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("listing {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && p.extension()
                    .and_then(|e| e.to_str())
                    .is_some_and(|e| exts.iter().any(|x| x.eq_ignore_ascii_case(e)))
        })
        .collect();
    out.sort();
    Ok(out)
}

/// `dir/<id>` or `dir/<id without extension>.<ext>`, whichever exists first.
pub fn find_for_id(dir: &Path, id: &str, exts: &[&str]) -> Option<PathBuf> {
    let stem = Path::new(id).file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| id.to_string());
    let mut candidates = vec![dir.join(crate::store::file_name(id))];
    for ext in exts {
        candidates.push(dir.join(format!("{}.{ext}", crate::store::file_name(id))));
        candidates.push(dir.join(format!("{}.{ext}", crate::store::file_name(&stem))));
    }
    candidates.into_iter().find(|p| p.is_file())
}

pub fn horizon_label(h: f64) -> String {
    format!("{h}s")
}

/// Sample mean and standard deviation (n - 1); SD is `None` below two values.
pub fn mean_sd(values: &[f64]) -> (Option<f64>, Option<f64>) {
    if values.is_empty() {
        return (None, None);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sd = (values.len() > 1).then(|| (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt());
    (Some(mean), sd)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_sd_by_hand() {
        let (m, s) = mean_sd(&[2.0, 4.0, 9.0]);
        assert_eq!(m, Some(5.0));
        // squared deviations 9 + 1 + 16 = 26, / 2 = 13
        assert_eq!(s, Some(13f64.sqrt()));
        assert_eq!(mean_sd(&[1.0]), (Some(1.0), None));
        assert_eq!(mean_sd(&[]), (None, None));
    }
}
