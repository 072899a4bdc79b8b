//! Significance tests used by the bias analyses.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::types::StatTestResult;

/// Upper tail `P(X >= x)` of a chi-square variable with `df` degrees of freedom.
pub fn chi_square_sf(x: f64, df: u32) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x.is_infinite() {
        return 0.0;
    }
    let dist = ChiSquared::new(df as f64).expect("df >= 1");
    dist.sf(x).clamp(0.0, 1.0)
}

pub enum Expected<'a> {
    /// Same expected count in every cell.
    EqualProportions,
    Counts(&'a [f64]),
}

/// Chi-square goodness of fit. Counts may be fractional (e.g. per-viewer
/// averages); φ = √(χ²/N) with N the observed total.
pub fn chi_square_gof(observed: &[f64], expected: Expected<'_>) -> Result<StatTestResult> {
    let k = observed.len();
    if k < 2 {
        return Err(Error::TooFewGroups(k));
    }
    if let Some(v) = observed.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::InvalidParameter(format!("observed count {v}")));
    }
    let n: f64 = observed.iter().sum();
    let expected: Vec<f64> = match expected {
        Expected::EqualProportions => vec![n / k as f64; k],
        Expected::Counts(e) => {
            if e.len() != k {
                return Err(Error::InvalidParameter(format!(
                    "{} expected counts for {k} cells",
                    e.len()
                )));
            }
            e.to_vec()
        }
    };
    if let Some(i) = expected.iter().position(|&e| !(e > 0.0)) {
        return Err(Error::ZeroExpected(i));
    }
    let statistic: f64 = observed
        .iter()
        .zip(&expected)
        .map(|(o, e)| (o - e).powi(2) / e)
        .sum();
    let df = (k - 1) as u32;
    Ok(StatTestResult {
        statistic,
        df,
        p_value: chi_square_sf(statistic, df),
        effect_size: Some(phi(statistic, n)),
    })
}

/// Effect size φ = √(χ²/N).
pub fn phi(chi2: f64, n: f64) -> f64 {
    (chi2 / n).sqrt()
}

fn mean_var(sample: &[f64]) -> (f64, f64) {
    let n = sample.len() as f64;
    let mean = sample.iter().sum::<f64>() / n;
    let var = sample.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Bartlett's test for equal variances across groups.
pub fn bartlett(groups: &[&[f64]]) -> Result<StatTestResult> {
    let k = groups.len();
    if k < 2 {
        return Err(Error::TooFewGroups(k));
    }
    if let Some((group, g)) = groups.iter().enumerate().find(|(_, g)| g.len() < 2) {
        return Err(Error::GroupTooSmall {
            group,
            len: g.len(),
            min: 2,
        });
    }
    let ns: Vec<f64> = groups.iter().map(|g| g.len() as f64).collect();
    let vars: Vec<f64> = groups.iter().map(|g| mean_var(g).1).collect();
    let n_total: f64 = ns.iter().sum();
    let dof = n_total - k as f64;
    let pooled = ns.iter().zip(&vars).map(|(n, v)| (n - 1.0) * v).sum::<f64>() / dof;
    if !(pooled > 0.0) {
        return Err(Error::ZeroVariancePooled);
    }
    let df = (k - 1) as u32;
    if vars.iter().any(|&v| v <= 0.0) {
        return Ok(StatTestResult {
            statistic: f64::INFINITY,
            df,
            p_value: 0.0,
            effect_size: None,
        });
    }
    let numerator =
        dof * pooled.ln() - ns.iter().zip(&vars).map(|(n, v)| (n - 1.0) * v.ln()).sum::<f64>();
    let correction = 1.0
        + (ns.iter().map(|n| 1.0 / (n - 1.0)).sum::<f64>() - 1.0 / dof) / (3.0 * (k as f64 - 1.0));
    let statistic = (numerator / correction).max(0.0);
    Ok(StatTestResult {
        statistic,
        df,
        p_value: chi_square_sf(statistic, df),
        effect_size: None,
    })
}

/// Average ranks (1-based) of `values`, ties sharing their mean rank. Also
/// returns Σ(t³ − t) over tie groups.
fn ranks(values: &[f64]) -> (Vec<f64>, f64) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0.0; values.len()];
    let mut ties = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j + 1) as f64 / 2.0;
        for &idx in &order[i..j] {
            out[idx] = rank;
        }
        let t = (j - i) as f64;
        ties += t * t * t - t;
        i = j;
    }
    (out, ties)
}

/// Kruskal-Wallis H test with tie correction. Empty groups are rejected.
pub fn kruskal_wallis(groups: &[&[f64]]) -> Result<StatTestResult> {
    let k = groups.len();
    if k < 2 {
        return Err(Error::TooFewGroups(k));
    }
    if let Some((group, _)) = groups.iter().enumerate().find(|(_, g)| g.is_empty()) {
        return Err(Error::GroupTooSmall { group, len: 0, min: 1 });
    }
    let pooled: Vec<f64> = groups.iter().flat_map(|g| g.iter().copied()).collect();
    let n = pooled.len() as f64;
    let (r, ties) = ranks(&pooled);
    let mut offset = 0;
    let mut sum = 0.0;
    for g in groups {
        let rank_sum: f64 = r[offset..offset + g.len()].iter().sum();
        sum += rank_sum * rank_sum / g.len() as f64;
        offset += g.len();
    }
    let h = 12.0 / (n * (n + 1.0)) * sum - 3.0 * (n + 1.0);
    let correction = 1.0 - ties / (n * n * n - n);
    let df = (k - 1) as u32;
    if !(correction > 0.0) {
        // every observation tied: no evidence of any difference
        return Ok(StatTestResult {
            statistic: 0.0,
            df,
            p_value: 1.0,
            effect_size: None,
        });
    }
    let statistic = (h / correction).max(0.0);
    Ok(StatTestResult {
        statistic,
        df,
        p_value: chi_square_sf(statistic, df),
        effect_size: None,
    })
}

/// Holm step-down adjustment; results are in input order.
pub fn holm_bonferroni(p_values: &[f64]) -> Vec<f64> {
    let m = p_values.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| p_values[a].total_cmp(&p_values[b]));
    let mut out = vec![0.0; m];
    let mut running = 0.0f64;
    for (rank, &idx) in order.iter().enumerate() {
        let adjusted = ((m - rank) as f64 * p_values[idx]).min(1.0);
        running = running.max(adjusted);
        out[idx] = running;
    }
    out
}
