//! Readers for eye-tracker fixation logs, image manifests and segmentation
//! documents, plus the filtering rules applied before any analysis.
//!
//! Logs are delimiter-separated with a header row. Column names are set by a
//! [`ColumnMapping`]; the default follows Gazepoint exports (`FPOGX`,
//! `FPOGY`, `FPOGD`, `FPOGID`, `FPOGV`, ...). Trackers report one row per
//! gaze sample, so consecutive samples sharing a fixation id are collapsed
//! into one fixation carrying the last (cumulative) duration.

use std::collections::HashMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::types::{ElementBox, ElementCategory, Fixation, ImageMeta, Scanpath, UiType};

/// Names of the log columns holding each fixation field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMapping {
    pub x: String,
    pub y: String,
    pub duration: String,
    pub fixation_id: String,
    pub validity: String,
    pub timestamp: String,
    pub stimulus: String,
    /// Fixation start time, same clock as `timestamp`. When absent the
    /// timestamp of the first sample of the fixation is used.
    pub fixation_start: Option<String>,
    /// Viewer id column. When absent the file stem names the viewer.
    pub viewer: Option<String>,
    pub delimiter: u8,
}

impl Default for ColumnMapping {
    fn default() -> Self {
        Self {
            x: "FPOGX".into(),
            y: "FPOGY".into(),
            duration: "FPOGD".into(),
            fixation_id: "FPOGID".into(),
            validity: "FPOGV".into(),
            timestamp: "TIME".into(),
            stimulus: "MEDIA_NAME".into(),
            fixation_start: Some("FPOGS".into()),
            viewer: None,
            delimiter: b',',
        }
    }
}

impl ColumnMapping {
    /// The mapping [`write_fixation_log`] emits: the default columns plus a
    /// `USER` column so one file can hold several viewers.
    pub fn canonical() -> Self {
        Self {
            viewer: Some("USER".into()),
            ..Self::default()
        }
    }
}

/// Header names match exactly, or with a parenthesized suffix such as
/// Gazepoint's `TIME(2023/01/01 10:00:00.000)`.
fn find_column(headers: &csv::StringRecord, name: &str) -> Option<usize> {
    headers.iter().position(|h| {
        let h = h.trim();
        h == name || (h.starts_with(name) && h[name.len()..].starts_with('('))
    })
}

struct Columns {
    x: usize,
    y: usize,
    duration: usize,
    fixation_id: usize,
    validity: usize,
    timestamp: usize,
    stimulus: usize,
    fixation_start: Option<usize>,
    viewer: Option<usize>,
}

impl Columns {
    fn resolve(path: &Path, headers: &csv::StringRecord, m: &ColumnMapping) -> Result<Self> {
        let need = |name: &str| {
            find_column(headers, name).ok_or_else(|| Error::MissingColumn {
                path: path.to_path_buf(),
                name: name.to_string(),
            })
        };
        let optional = |name: &Option<String>| name.as_deref().map(need).transpose();
        Ok(Self {
            x: need(&m.x)?,
            y: need(&m.y)?,
            duration: need(&m.duration)?,
            fixation_id: need(&m.fixation_id)?,
            validity: need(&m.validity)?,
            timestamp: need(&m.timestamp)?,
            stimulus: need(&m.stimulus)?,
            fixation_start: optional(&m.fixation_start)?,
            viewer: optional(&m.viewer)?,
        })
    }
}

/// Fixation being accumulated from consecutive samples.
struct OpenFixation {
    id: String,
    x: f64,
    y: f64,
    start: f64,
    duration: f64,
    line: u64,
}

struct Trial {
    viewer: String,
    stimulus: String,
    stimulus_onset: f64,
    open: Option<OpenFixation>,
    fixations: Vec<(Fixation, u64)>,
}

impl Trial {
    fn close(&mut self, path: &Path) -> Result<()> {
        let Some(f) = self.open.take() else {
            return Ok(());
        };
        // A single-sample fixation reports zero duration; it carries no weight.
        if f.duration <= 0.0 {
            return Ok(());
        }
        let onset = (f.start - self.stimulus_onset).max(0.0);
        let fixation = Fixation::new(f.x, f.y, onset, f.duration).map_err(|e| Error::MalformedRow {
            path: path.to_path_buf(),
            line: f.line,
            reason: e.to_string(),
        })?;
        if let Some((prev, _)) = self.fixations.last() {
            if fixation.onset_s <= prev.onset_s {
                return Err(Error::MalformedRow {
                    path: path.to_path_buf(),
                    line: f.line,
                    reason: format!(
                        "fixation {} starts at {} s, not after the previous one at {} s",
                        f.id, fixation.onset_s, prev.onset_s
                    ),
                });
            }
        }
        self.fixations.push((fixation, f.line));
        Ok(())
    }
}

fn parse_flag(s: &str) -> Option<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "t" | "yes" | "valid" => Some(true),
        "0" | "false" | "f" | "no" | "invalid" => Some(false),
        other => other.parse::<f64>().ok().map(|v| v != 0.0),
    }
}

/// Reads one tracker log into scanpaths, one per (viewer, stimulus) pair, in
/// order of first appearance.
pub fn parse_fixation_log(path: &Path, mapping: &ColumnMapping) -> Result<Vec<Scanpath>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let default_viewer = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_fixation_log_from(file, path, &default_viewer, mapping)
}

/// Same as [`parse_fixation_log`] over any reader; `path` only labels errors.
pub fn parse_fixation_log_from<R: Read>(
    reader: R,
    path: &Path,
    default_viewer: &str,
    mapping: &ColumnMapping,
) -> Result<Vec<Scanpath>> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(mapping.delimiter)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| malformed_csv(path, 1, e))?
        .clone();
    if headers.is_empty() {
        return Err(Error::EmptyLog(path.to_path_buf()));
    }
    let cols = Columns::resolve(path, &headers, mapping)?;

    let mut trials: Vec<Trial> = Vec::new();
    let mut index: HashMap<(String, String), usize> = HashMap::new();

    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            malformed_csv(path, line, e)
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let bad = |reason: String| Error::MalformedRow {
            path: path.to_path_buf(),
            line,
            reason,
        };
        let field = |i: usize| -> Result<&str> {
            record
                .get(i)
                .ok_or_else(|| bad(format!("row has {} fields, need column {}", record.len(), i + 1)))
        };
        let number = |i: usize| -> Result<f64> {
            let s = field(i)?;
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| bad(format!("`{s}` in column `{}` is not a number", &headers[i])))
        };

        let stimulus = field(cols.stimulus)?.to_string();
        let viewer = match cols.viewer {
            Some(i) => field(i)?.to_string(),
            None => default_viewer.to_string(),
        };
        let timestamp = number(cols.timestamp)?;
        let key = (viewer, stimulus);
        let slot = match index.get(&key) {
            Some(&slot) => slot,
            None => {
                index.insert(key.clone(), trials.len());
                trials.push(Trial {
                    viewer: key.0.clone(),
                    stimulus: key.1.clone(),
                    stimulus_onset: timestamp,
                    open: None,
                    fixations: Vec::new(),
                });
                trials.len() - 1
            }
        };

        let valid_text = field(cols.validity)?;
        let valid = parse_flag(valid_text)
            .ok_or_else(|| bad(format!("`{valid_text}` is not a validity flag")))?;
        if !valid {
            continue;
        }

        let id = field(cols.fixation_id)?.to_string();
        let x = number(cols.x)?;
        let y = number(cols.y)?;
        let duration = number(cols.duration)?;
        let start = match cols.fixation_start {
            Some(i) => number(i)?,
            None => timestamp,
        };

        let trial = &mut trials[slot];
        match trial.open.as_mut() {
            Some(open) if open.id == id => {
                open.x = x;
                open.y = y;
                open.duration = duration;
                if cols.fixation_start.is_some() {
                    open.start = start;
                }
            }
            _ => {
                trial.close(path)?;
                trial.open = Some(OpenFixation {
                    id,
                    x,
                    y,
                    start,
                    duration,
                    line,
                });
            }
        }
    }

    let mut out = Vec::with_capacity(trials.len());
    for mut trial in trials {
        trial.close(path)?;
        if trial.fixations.is_empty() {
            continue;
        }
        let fixations = trial.fixations.into_iter().map(|(f, _)| f).collect();
        out.push(Scanpath::new(trial.stimulus, trial.viewer, fixations)?);
    }
    if out.is_empty() {
        return Err(Error::EmptyLog(path.to_path_buf()));
    }
    Ok(out)
}

fn malformed_csv(path: &Path, line: u64, e: csv::Error) -> Error {
    Error::MalformedRow {
        path: path.to_path_buf(),
        line,
        reason: e.to_string(),
    }
}

/// Writes scanpaths as a tracker log readable with [`ColumnMapping::canonical`].
///
/// Each scanpath starts with an invalid marker row at time 0 that fixes the
/// stimulus onset, followed by one row per fixation.
pub fn write_fixation_log<W: Write>(writer: W, scanpaths: &[Scanpath]) -> Result<()> {
    let m = ColumnMapping::canonical();
    let mut wtr = csv::WriterBuilder::new()
        .delimiter(m.delimiter)
        .from_writer(writer);
    let header = [
        m.stimulus.as_str(),
        "USER",
        m.timestamp.as_str(),
        "FPOGS",
        m.x.as_str(),
        m.y.as_str(),
        m.duration.as_str(),
        m.fixation_id.as_str(),
        m.validity.as_str(),
    ];
    let csv_err = |e: csv::Error| Error::io("<log>", std::io::Error::other(e));
    wtr.write_record(header).map_err(csv_err)?;
    for sp in scanpaths {
        wtr.write_record([&sp.image_id, &sp.viewer_id, "0", "0", "0", "0", "0", "0", "0"])
            .map_err(csv_err)?;
        for (i, f) in sp.fixations().iter().enumerate() {
            let onset = f.onset_s.to_string();
            wtr.write_record([
                sp.image_id.as_str(),
                sp.viewer_id.as_str(),
                &onset,
                &onset,
                &f.x.to_string(),
                &f.y.to_string(),
                &f.duration_s.to_string(),
                &(i + 1).to_string(),
                "1",
            ])
            .map_err(csv_err)?;
        }
    }
    wtr.flush().map_err(|e| Error::io("<log>", e))?;
    Ok(())
}

/// Placement of the image on the screen, in screen-normalized units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Letterbox {
    pub offset_x: f64,
    pub offset_y: f64,
    pub scale_x: f64,
    pub scale_y: f64,
}

/// Study display resolution.
pub const DISPLAY_SIZE: (u32, u32) = (1920, 1200);

impl Letterbox {
    pub fn identity() -> Self {
        Self {
            offset_x: 0.0,
            offset_y: 0.0,
            scale_x: 1.0,
            scale_y: 1.0,
        }
    }

    /// Image scaled to fit the display with its aspect ratio kept, centered.
    pub fn fit(display: (u32, u32), image: (u32, u32)) -> Self {
        let (dw, dh) = (display.0 as f64, display.1 as f64);
        let (iw, ih) = (image.0 as f64, image.1 as f64);
        let scale = (dw / iw).min(dh / ih);
        let (w, h) = (iw * scale / dw, ih * scale / dh);
        Self {
            offset_x: (1.0 - w) / 2.0,
            offset_y: (1.0 - h) / 2.0,
            scale_x: w,
            scale_y: h,
        }
    }

    pub fn to_image(&self, x: f64, y: f64) -> (f64, f64) {
        (
            (x - self.offset_x) / self.scale_x,
            (y - self.offset_y) / self.scale_y,
        )
    }

    pub fn apply(&self, scanpath: &Scanpath) -> Scanpath {
        let fixations = scanpath
            .fixations()
            .iter()
            .map(|f| {
                let (x, y) = self.to_image(f.x, f.y);
                Fixation { x, y, ..*f }
            })
            .collect();
        Scanpath::new(scanpath.image_id.clone(), scanpath.viewer_id.clone(), fixations)
            .expect("onsets unchanged")
    }
}

/// Drops fixations outside the unit square.
pub fn filter_in_bounds(scanpath: &Scanpath) -> (Scanpath, usize) {
    let kept = scanpath.retain(Fixation::in_bounds);
    let dropped = scanpath.len() - kept.len();
    (kept, dropped)
}

/// Keeps fixations with `onset_s < horizon_s`.
pub fn truncate_to_duration(scanpath: &Scanpath, horizon_s: f64) -> Scanpath {
    scanpath.retain(|f| f.onset_s < horizon_s)
}

#[derive(Deserialize)]
struct SegmentationDoc {
    elements: Vec<RawElement>,
}

#[derive(Deserialize)]
struct RawElement {
    category: String,
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
}

pub fn parse_segmentation(path: &Path) -> Result<Vec<ElementBox>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_segmentation_str(&text, path)
}

pub fn parse_segmentation_str(text: &str, path: &Path) -> Result<Vec<ElementBox>> {
    let doc: SegmentationDoc = serde_json::from_str(text).map_err(|e| Error::MalformedDocument {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;
    doc.elements
        .into_iter()
        .map(|e| {
            let category: ElementCategory = e.category.parse()?;
            ElementBox::new(category, e.x0, e.y0, e.x1, e.y1)
        })
        .collect()
}

pub fn segmentation_to_json(boxes: &[ElementBox]) -> String {
    let elements: Vec<_> = boxes
        .iter()
        .map(|b| {
            serde_json::json!({
                "category": b.category.as_str(),
                "x0": b.rect.x0,
                "y0": b.rect.y0,
                "x1": b.rect.x1,
                "y1": b.rect.y1,
            })
        })
        .collect();
    serde_json::to_string_pretty(&serde_json::json!({ "elements": elements }))
        .expect("json values serialize")
}

/// Reads `image_id, ui_type, width, height[, block_id]` rows. A header row is
/// optional and recognized by its first field `image_id`.
pub fn parse_image_manifest(path: &Path) -> Result<Vec<ImageMeta>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_image_manifest_from(file, path)
}

pub fn parse_image_manifest_from<R: Read>(reader: R, path: &Path) -> Result<Vec<ImageMeta>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            malformed_csv(path, line, e)
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.get(0) == Some("image_id") {
            continue;
        }
        if record.iter().all(str::is_empty) {
            continue;
        }
        let bad = |reason: String| Error::MalformedRow {
            path: path.to_path_buf(),
            line,
            reason,
        };
        if record.len() < 4 {
            return Err(bad(format!("{} fields, need at least 4", record.len())));
        }
        let ui_type: UiType = record[1].parse()?;
        let dim = |i: usize| {
            record[i]
                .parse::<u32>()
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| bad(format!("`{}` is not a positive pixel size", &record[i])))
        };
        let block_id = record.get(4).filter(|s| !s.is_empty()).map(str::to_string);
        out.push(ImageMeta {
            image_id: record[0].to_string(),
            ui_type,
            width: dim(2)?,
            height: dim(3)?,
            block_id,
        });
    }
    Ok(out)
}

pub fn write_image_manifest<W: Write>(writer: W, metas: &[ImageMeta]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let csv_err = |e: csv::Error| Error::io("<manifest>", std::io::Error::other(e));
    wtr.write_record(["image_id", "ui_type", "width", "height", "block_id"])
        .map_err(csv_err)?;
    for m in metas {
        wtr.write_record([
            m.image_id.as_str(),
            m.ui_type.as_str(),
            &m.width.to_string(),
            &m.height.to_string(),
            m.block_id.as_deref().unwrap_or(""),
        ])
        .map_err(csv_err)?;
    }
    wtr.flush().map_err(|e| Error::io("<manifest>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn parse(text: &str) -> Result<Vec<Scanpath>> {
        parse_fixation_log_from(text.as_bytes(), &PathBuf::from("p01.csv"), "p01", &ColumnMapping::default())
    }

    const HEADER: &str = "MEDIA_NAME,TIME(2023/05/01),FPOGS,FPOGX,FPOGY,FPOGD,FPOGID,FPOGV\n";

    #[test]
    fn samples_sharing_an_id_collapse_to_one_fixation() {
        let log = format!(
            "{HEADER}\
             img1,10.00,10.00,0.5,0.5,0.00,1,1\n\
             img1,10.02,10.00,0.5,0.5,0.02,1,1\n\
             img1,10.04,10.00,0.5,0.5,0.04,1,1\n\
             img1,10.06,10.06,0.2,0.3,0.00,2,1\n\
             img1,10.08,10.06,0.2,0.3,0.02,2,1\n"
        );
        let sp = parse(&log).unwrap();
        assert_eq!(sp.len(), 1);
        assert_eq!(sp[0].viewer_id, "p01");
        assert_eq!(sp[0].image_id, "img1");
        let f = sp[0].fixations();
        assert_eq!(f.len(), 2);
        assert_eq!(f[0].duration_s, 0.04);
        assert_eq!(f[1].duration_s, 0.02);
        assert!((f[1].onset_s - 0.06).abs() < 1e-12);
        assert_eq!(f[0].onset_s, 0.0);
    }

    #[test]
    fn invalid_rows_contribute_nothing() {
        let log = format!(
            "{HEADER}\
             img1,0.00,0.00,0.1,0.1,0.10,1,1\n\
             img1,0.10,0.10,0.9,0.9,0.10,7,0\n\
             img1,0.20,0.20,0.4,0.4,0.10,2,1\n"
        );
        let sp = parse(&log).unwrap();
        let pts = sp[0].points();
        assert_eq!(pts, vec![(0.1, 0.1), (0.4, 0.4)]);
    }

    #[test]
    fn one_scanpath_per_stimulus() {
        let log = format!(
            "{HEADER}\
             a,0.0,0.0,0.1,0.1,0.1,1,1\n\
             b,7.0,7.0,0.2,0.2,0.1,2,1\n\
             b,7.5,7.5,0.3,0.3,0.1,3,1\n"
        );
        let sp = parse(&log).unwrap();
        assert_eq!(sp.len(), 2);
        assert_eq!(sp[1].image_id, "b");
        assert_eq!(sp[1].fixations()[0].onset_s, 0.0);
        assert_eq!(sp[1].fixations()[1].onset_s, 0.5);
    }

    #[test]
    fn missing_column_is_named() {
        let err = parse("MEDIA_NAME,TIME,FPOGS,FPOGX,FPOGY,FPOGD,FPOGID\n").unwrap_err();
        match err {
            Error::MissingColumn { name, .. } => assert_eq!(name, "FPOGV"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_row_reports_line() {
        let log = format!("{HEADER}a,0.0,0.0,0.1,0.1,0.1,1,1\na,0.1,0.1,oops,0.1,0.1,2,1\n");
        match parse(&log).unwrap_err() {
            Error::MalformedRow { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_log() {
        assert!(matches!(parse(HEADER), Err(Error::EmptyLog(_))));
        let all_invalid = format!("{HEADER}a,0.0,0.0,0.1,0.1,0.1,1,0\n");
        assert!(matches!(parse(&all_invalid), Err(Error::EmptyLog(_))));
    }

    #[test]
    fn in_bounds_filter() {
        let sp = Scanpath::from_points(&[(0.5, 0.5), (1.2, 0.5)]);
        let (kept, dropped) = filter_in_bounds(&sp);
        assert_eq!(kept.points(), vec![(0.5, 0.5)]);
        assert_eq!(dropped, 1);

        let sp = Scanpath::from_points(&[(0.0, 0.0), (1.0, 1.0), (0.3, 0.7)]);
        let (kept, dropped) = filter_in_bounds(&sp);
        assert_eq!(kept, sp);
        assert_eq!(dropped, 0);
    }

    fn with_onsets(onsets: &[f64]) -> Scanpath {
        let f = onsets
            .iter()
            .map(|&t| Fixation::new(0.5, 0.5, t, 0.1).unwrap())
            .collect();
        Scanpath::new("i", "v", f).unwrap()
    }

    #[test]
    fn truncation_uses_strict_onset_rule() {
        let sp = with_onsets(&[0.2, 0.9, 1.4]);
        assert_eq!(truncate_to_duration(&sp, 1.0).len(), 2);
        let sp = with_onsets(&[0.0, 1.0]);
        assert_eq!(truncate_to_duration(&sp, 1.0).len(), 1);
        let sp = with_onsets(&[0.0, 2.0, 6.9]);
        assert_eq!(truncate_to_duration(&sp, 7.0), sp);
    }

    #[test]
    fn segmentation_documents() {
        let p = PathBuf::from("seg.json");
        let boxes = parse_segmentation_str(
            r#"{"elements":[{"category":"text","x0":10,"y0":10,"x1":100,"y1":40}]}"#,
            &p,
        )
        .unwrap();
        assert_eq!(boxes.len(), 1);
        assert_eq!(boxes[0].category, ElementCategory::Text);
        assert_eq!(boxes[0].rect.x1, 100.0);

        assert!(parse_segmentation_str(r#"{"elements":[]}"#, &p).unwrap().is_empty());
        assert!(matches!(
            parse_segmentation_str(r#"{"elements":[{"category":"text","x0":10,"y0":10,"x1":10,"y1":40}]}"#, &p),
            Err(Error::DegenerateBox { .. })
        ));
        assert!(matches!(
            parse_segmentation_str(r#"{"elements":[{"category":"logo","x0":0,"y0":0,"x1":1,"y1":1}]}"#, &p),
            Err(Error::UnknownCategory(_))
        ));
        assert!(matches!(
            parse_segmentation_str("[1,2", &p),
            Err(Error::MalformedDocument { .. })
        ));
        let again = parse_segmentation_str(&segmentation_to_json(&boxes), &p).unwrap();
        assert_eq!(again, boxes);
    }

    #[test]
    fn manifest_rows() {
        let p = PathBuf::from("m.csv");
        let metas = parse_image_manifest_from("img1,webpage,1920,1200\n".as_bytes(), &p).unwrap();
        assert_eq!(metas[0].ui_type, UiType::Webpage);
        assert_eq!((metas[0].width, metas[0].height), (1920, 1200));
        assert_eq!(metas[0].block_id, None);

        let with_header = "image_id,ui_type,width,height,block_id\nimg2,poster,800,1200,b3\n";
        let metas = parse_image_manifest_from(with_header.as_bytes(), &p).unwrap();
        assert_eq!(metas[0].block_id.as_deref(), Some("b3"));

        assert!(matches!(
            parse_image_manifest_from("img1,video,1920,1200\n".as_bytes(), &p),
            Err(Error::UnknownCategory(_))
        ));
        assert!(matches!(
            parse_image_manifest_from("img1,mobile,wide,1200\n".as_bytes(), &p),
            Err(Error::MalformedRow { .. })
        ));
    }

    #[test]
    fn letterbox_fit_centers_the_image() {
        // 1200x1200 on 1920x1200: pillarboxed, 360 px bars on each side
        let lb = Letterbox::fit(DISPLAY_SIZE, (1200, 1200));
        assert!((lb.offset_x - 360.0 / 1920.0).abs() < 1e-12);
        assert_eq!(lb.offset_y, 0.0);
        let (x, y) = lb.to_image(0.5, 0.5);
        assert!((x - 0.5).abs() < 1e-12 && (y - 0.5).abs() < 1e-12);
        let (x, _) = lb.to_image(360.0 / 1920.0, 0.0);
        assert!(x.abs() < 1e-12);
        assert_eq!(Letterbox::fit(DISPLAY_SIZE, DISPLAY_SIZE), Letterbox::identity());
    }
}
