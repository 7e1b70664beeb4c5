//! Monte-Carlo and grid experiments producing record datasets, with CSV,
//! JSON-lines and SVG output.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::dominance::{check_general_properties, check_lemma1, dominance_of, LEMMA1_CONSTRAINTS};
use crate::error::{Error, Result};
use crate::matrix::{format_number, MonotoneMatrix, DEFAULT_TOL};
use crate::realise::{family_matrix, Family, FamilyId};
use crate::reduction::reduce;
use crate::regions::{
    stochastic3_real_pair_member, theta_member, xi3_boundary, xi3_pair_member, xi_n_member, junction_slope,
};
use crate::sampler::{map_samples, SampleConfig};
use crate::spectra::{eigenpair_3x3, serialize_complex_vec, spectrum_of_stochastic};
use crate::svg::{Plot, Series};

/// Parameter step of the family traces.
pub const ALPHA_STEP: f64 = 1e-3;

/// Tolerance used for the verdicts stored in records.
pub const VERDICT_TOL: f64 = 1e-8;

const CURVE_POINTS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    Figure1,
    Figure2,
    Figure3,
    Lemma1,
    Reduction4,
}

impl Experiment {
    pub const ALL: [Experiment; 5] =
        [Experiment::Figure1, Experiment::Figure2, Experiment::Figure3, Experiment::Lemma1, Experiment::Reduction4];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Figure1 => "figure1",
            Experiment::Figure2 => "figure2",
            Experiment::Figure3 => "figure3",
            Experiment::Lemma1 => "lemma1",
            Experiment::Reduction4 => "reduction4",
        }
    }

    /// Matrix dimension the experiment works in.
    pub fn dimension(self) -> usize {
        match self {
            Experiment::Reduction4 => 4,
            _ => 3,
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::UnknownExperiment(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub index: u64,
    /// First 16 hex digits of the SHA-256 of the matrix in 17-digit text form.
    pub matrix_hash: String,
    pub label: String,
    pub parameter: Option<f64>,
    /// Nontrivial eigenvalues, sorted.
    #[serde(serialize_with = "serialize_complex_vec")]
    pub spectrum: Vec<Complex64>,
    pub verdicts: Vec<(String, bool)>,
    pub slacks: Vec<(String, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub n: usize,
    pub records: Vec<ExperimentRecord>,
    /// Region boundaries drawn with the data.
    pub curves: Vec<Series>,
}

pub fn matrix_hash(m: &MonotoneMatrix) -> String {
    let mut hasher = Sha256::new();
    for row in m.rows() {
        for v in row {
            hasher.update(format_number(v, false).as_bytes());
            hasher.update(b" ");
        }
        hasher.update(b"\n");
    }
    hasher.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect()
}

fn nontrivial(m: &MonotoneMatrix) -> Result<Vec<Complex64>> {
    if m.n() == 3 {
        let p = eigenpair_3x3(&dominance_of(m)?)?;
        return Ok(vec![Complex64::new(p.lambda2, 0.0), Complex64::new(p.lambda3, 0.0)]);
    }
    Ok(spectrum_of_stochastic(m.as_stochastic())?.without_trivial().values().to_vec())
}

fn base_record(index: u64, m: &MonotoneMatrix, label: &str, parameter: Option<f64>) -> Result<ExperimentRecord> {
    Ok(ExperimentRecord {
        index,
        matrix_hash: matrix_hash(m),
        label: label.to_string(),
        parameter,
        spectrum: nontrivial(m)?,
        verdicts: Vec::new(),
        slacks: Vec::new(),
    })
}

fn add_lemma1(rec: &mut ExperimentRecord, m: &MonotoneMatrix) -> Result<()> {
    let checks = check_lemma1(&dominance_of(m)?, DEFAULT_TOL)?;
    rec.verdicts.push(("lemma1".into(), checks.iter().all(|c| c.satisfied)));
    rec.slacks.extend(checks.into_iter().map(|c| (c.name, c.slack)));
    Ok(())
}

fn add_pair_regions(rec: &mut ExperimentRecord, with_stochastic: bool) {
    let p = crate::spectra::EigenPair { lambda2: rec.spectrum[0].re, lambda3: rec.spectrum[1].re };
    let xi = xi3_pair_member(p, VERDICT_TOL);
    rec.verdicts.push(("xi3pair".into(), xi.member));
    rec.slacks.push(("xi3pair_margin".into(), xi.margin));
    if with_stochastic {
        let s3 = stochastic3_real_pair_member(p, VERDICT_TOL);
        rec.verdicts.push(("s3realpair".into(), s3.member));
        rec.slacks.push(("s3realpair_margin".into(), s3.margin));
    }
}

fn add_containment(rec: &mut ExperimentRecord, m: &MonotoneMatrix) -> Result<()> {
    let mut margin = f64::INFINITY;
    for &z in &rec.spectrum {
        margin = margin.min(theta_member(z, 3, VERDICT_TOL)?.margin);
    }
    rec.verdicts.push(("theta3".into(), margin >= -VERDICT_TOL));
    rec.slacks.push(("theta3_margin".into(), margin));

    let result = reduce(m)?;
    let modulus = result
        .lambda_map
        .iter()
        .map(|p| p.mu.norm() - p.lambda.norm())
        .fold(f64::INFINITY, f64::min);
    rec.slacks.push(("modulus_slack".into(), modulus));
    rec.slacks.push(("row_sum_error".into(), result.max_row_sum_error()));
    Ok(())
}

/// The record a plain `sample` run emits for one matrix: the spectrum plus
/// the region checks available in its dimension.
pub fn sample_record(index: u64, m: &MonotoneMatrix) -> Result<ExperimentRecord> {
    let mut rec = base_record(index, m, "sample", None)?;
    let n = m.n();
    if n >= 2 {
        let general = check_general_properties(&dominance_of(m)?, DEFAULT_TOL);
        rec.verdicts.push(("dominance".into(), general.all_satisfied()));
        rec.slacks.push(("dominance_margin".into(), general.min_slack()));
    }
    match n {
        2 => {
            let v = xi_n_member(rec.spectrum[0].re, 2, VERDICT_TOL)?;
            rec.verdicts.push(("xi2".into(), v.member));
            rec.slacks.push(("xi2_margin".into(), v.margin));
        }
        3 => {
            add_pair_regions(&mut rec, false);
            add_lemma1(&mut rec, m)?;
        }
        4 => add_containment(&mut rec, m)?,
        _ => {}
    }
    Ok(rec)
}

/// Samples `cfg` and emits one [`sample_record`] per matrix.
pub fn sample_dataset(cfg: &SampleConfig) -> Result<Dataset> {
    let records = map_samples(cfg, |i, m| sample_record(i, &m))?;
    Ok(Dataset { name: "sample".into(), n: cfg.n, records, curves: Vec::new() })
}

/// The α grid of a family trace: uniform with step [`ALPHA_STEP`]. For Type2
/// the eigenvalue `−√(1/4 − α²)` moves infinitely fast as `α → 1/2`, so the
/// grid also contains the α of a uniform eigenvalue grid on `[−1/2, 0]`.
pub fn alpha_grid(family: Family) -> Vec<f64> {
    let (lo, hi) = family.alpha_range();
    let steps = ((hi - lo) / ALPHA_STEP).round() as usize;
    let mut grid: Vec<f64> = (0..=steps).map(|k| lo + k as f64 * ALPHA_STEP).collect();
    if family == Family::Type2 {
        let half = (0.5 / ALPHA_STEP).round() as usize;
        grid.extend((0..=half).map(|k| {
            let lambda = k as f64 * ALPHA_STEP;
            (0.25 - lambda * lambda).max(0.0).sqrt()
        }));
        grid.sort_by(f64::total_cmp);
        grid.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    }
    grid
}

fn family_traces() -> Result<Vec<ExperimentRecord>> {
    let mut records = Vec::new();
    for family in [Family::Type1, Family::Type2] {
        for alpha in alpha_grid(family) {
            let m = family_matrix(FamilyId::new(family, alpha)?)?;
            let mut rec = base_record(records.len() as u64, &m, family.name(), Some(alpha))?;
            let mut margin = f64::INFINITY;
            for z in &rec.spectrum {
                margin = margin.min(xi_n_member(z.re, 3, VERDICT_TOL)?.margin);
            }
            rec.verdicts.push(("xi3".into(), margin >= -VERDICT_TOL));
            rec.slacks.push(("xi3_margin".into(), margin));
            records.push(rec);
        }
    }
    Ok(records)
}

/// Polylines of C1–C5 bounding the pair region.
pub fn pair_region_curves() -> Result<Vec<Series>> {
    let line = |name: &str, from: (f64, f64), to: (f64, f64)| Series { name: name.into(), points: vec![from, to] };
    let mut c4 = Vec::new();
    let mut c5 = Vec::new();
    let junction = -junction_slope();
    for i in 0..=CURVE_POINTS {
        let k = -1.0 + (junction + 1.0) * i as f64 / CURVE_POINTS as f64;
        let (p, _) = xi3_boundary(k)?;
        c4.push((p.lambda2, p.lambda3));
        let k = junction - junction * i as f64 / CURVE_POINTS as f64;
        let (p, _) = xi3_boundary(k.min(0.0))?;
        c5.push((p.lambda2, p.lambda3));
    }
    Ok(vec![
        line("C1", (0.0, 0.0), (1.0, 1.0)),
        line("C2", (0.0, 0.0), (0.5, -0.5)),
        line("C3", (1.0, 0.0), (1.0, 1.0)),
        Series { name: "C4".into(), points: c4 },
        Series { name: "C5".into(), points: c5 },
    ])
}

/// Boundary of the real eigenvalue pairs of 3×3 stochastic matrices.
pub fn stochastic3_polygon() -> Series {
    Series {
        name: "S3".into(),
        points: vec![(1.0, 1.0), (1.0, -1.0), (0.0, -1.0), (-0.5, -0.5), (1.0, 1.0)],
    }
}

/// Runs a named experiment. The matrix dimension is fixed by the experiment
/// and `cfg.n` is ignored; `figure1` is a parameter grid and ignores the
/// sampling fields as well.
pub fn run_experiment(experiment: Experiment, cfg: &SampleConfig) -> Result<Dataset> {
    let cfg = SampleConfig { n: experiment.dimension(), ..*cfg };
    let (records, curves) = match experiment {
        Experiment::Figure1 => (family_traces()?, Vec::new()),
        Experiment::Figure2 => (
            map_samples(&cfg, |i, m| {
                let mut rec = base_record(i, &m, "sample", None)?;
                add_pair_regions(&mut rec, false);
                Ok(rec)
            })?,
            pair_region_curves()?,
        ),
        Experiment::Figure3 => {
            let mut curves = pair_region_curves()?;
            curves.push(stochastic3_polygon());
            let records = map_samples(&cfg, |i, m| {
                let mut rec = base_record(i, &m, "sample", None)?;
                add_pair_regions(&mut rec, true);
                Ok(rec)
            })?;
            (records, curves)
        }
        Experiment::Lemma1 => (
            map_samples(&cfg, |i, m| {
                let mut rec = base_record(i, &m, "sample", None)?;
                add_lemma1(&mut rec, &m)?;
                Ok(rec)
            })?,
            Vec::new(),
        ),
        Experiment::Reduction4 => (
            map_samples(&cfg, |i, m| {
                let mut rec = base_record(i, &m, "sample", None)?;
                add_containment(&mut rec, &m)?;
                Ok(rec)
            })?,
            Vec::new(),
        ),
    };
    Ok(Dataset { name: experiment.name().into(), n: cfg.n, records, curves })
}

/// Minimum slack of each Lemma 1 constraint over a `lemma1` dataset.
pub fn lemma1_min_slacks(data: &Dataset) -> Vec<(String, f64)> {
    LEMMA1_CONSTRAINTS
        .iter()
        .map(|name| {
            let min = data
                .records
                .iter()
                .flat_map(|r| r.slacks.iter().filter(|(k, _)| k == name).map(|(_, v)| *v))
                .fold(f64::INFINITY, f64::min);
            (name.to_string(), min)
        })
        .collect()
}

fn number(x: f64) -> String {
    format_number(x, false)
}

impl Dataset {
    fn spectrum_columns(&self) -> Vec<String> {
        if self.n <= 3 {
            (2..=self.n).map(|k| format!("lambda{k}")).collect()
        } else {
            (2..=self.n).flat_map(|k| [format!("lambda{k}_re"), format!("lambda{k}_im")]).collect()
        }
    }

    pub fn header(&self) -> Vec<String> {
        let mut cols: Vec<String> = ["index", "matrix_hash", "label", "parameter"].map(String::from).to_vec();
        cols.extend(self.spectrum_columns());
        if let Some(first) = self.records.first() {
            cols.extend(first.verdicts.iter().map(|(k, _)| k.clone()));
            cols.extend(first.slacks.iter().map(|(k, _)| k.clone()));
        }
        cols
    }

    fn csv_row(&self, rec: &ExperimentRecord) -> Vec<String> {
        let mut row = vec![
            rec.index.to_string(),
            rec.matrix_hash.clone(),
            rec.label.clone(),
            rec.parameter.map(number).unwrap_or_default(),
        ];
        if self.n <= 3 {
            row.extend(rec.spectrum.iter().map(|z| number(z.re)));
        } else {
            row.extend(rec.spectrum.iter().flat_map(|z| [number(z.re), number(z.im)]));
        }
        row.extend(rec.verdicts.iter().map(|(_, v)| v.to_string()));
        row.extend(rec.slacks.iter().map(|(_, v)| number(*v)));
        row
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(e.to_string());
        writer.write_record(self.header()).map_err(io)?;
        for rec in &self.records {
            writer.write_record(self.csv_row(rec)).map_err(io)?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        for rec in &self.records {
            let line = serde_json::to_string(rec).map_err(|e| Error::Io(e.to_string()))?;
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    /// Renders the dataset: family traces against α for `figure1`, otherwise
    /// `(λ₂, λ₃)` or the complex plane depending on the dimension.
    pub fn to_svg(&self) -> String {
        let mut plot;
        if self.name == "figure1" {
            plot = Plot::new("Eigenvalues of the realising matrices", "alpha", "lambda", (0.0, 1.0), (-1.0, 1.0));
            for label in ["type1", "type2"] {
                let points = self
                    .records
                    .iter()
                    .filter(|r| r.label == label)
                    .flat_map(|r| r.spectrum.iter().map(move |z| (r.parameter.unwrap_or(0.0), z.re)))
                    .collect();
                plot.scatter.push(Series { name: label.into(), points });
            }
        } else if self.n == 3 {
            plot = Plot::new(&format!("{} eigenvalue pairs", self.name), "lambda2", "lambda3", (-1.0, 1.1), (-1.1, 1.0));
            let points = self.records.iter().map(|r| (r.spectrum[0].re, r.spectrum[1].re)).collect();
            plot.scatter.push(Series { name: "samples".into(), points });
        } else {
            plot = Plot::new(&format!("{} eigenvalues", self.name), "re", "im", (-1.1, 1.1), (-1.1, 1.1));
            let points = self.records.iter().flat_map(|r| r.spectrum.iter().map(|z| (z.re, z.im))).collect();
            plot.scatter.push(Series { name: "samples".into(), points });
        }
        plot.lines.extend(self.curves.iter().cloned());
        plot.render()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for e in Experiment::ALL {
            assert_eq!(e.name().parse::<Experiment>().unwrap(), e);
        }
        assert!(matches!("figure4".parse::<Experiment>(), Err(Error::UnknownExperiment(_))));
    }

    #[test]
    fn figure1_traces_cover_the_interval() {
        let data = run_experiment(Experiment::Figure1, &SampleConfig::new(3, 0, 0)).unwrap();
        let mut values: Vec<f64> = data.records.iter().flat_map(|r| r.spectrum.iter().map(|z| z.re)).collect();
        values.sort_by(f64::total_cmp);
        assert!((values[0] + 0.5).abs() < 1e-12);
        assert!((values[values.len() - 1] - 1.0).abs() < 1e-12);
        assert!(values.windows(2).all(|w| w[1] - w[0] < 2e-3));
        assert!(data.records.iter().all(|r| r.verdicts[0].1));
    }

    #[test]
    fn csv_layout() {
        let data = sample_dataset(&SampleConfig::new(4, 3, 1)).unwrap();
        let csv = data.to_csv().unwrap();
        let mut lines = csv.lines();
        let header = lines.next().unwrap();
        assert!(header.starts_with("index,matrix_hash,label,parameter,lambda2_re,lambda2_im"));
        assert!(header.contains("theta3"));
        assert_eq!(lines.count(), 3);

        let data = sample_dataset(&SampleConfig::new(3, 2, 1)).unwrap();
        let header = data.header();
        assert_eq!(&header[4..6], &["lambda2".to_string(), "lambda3".to_string()]);
        assert!(header.contains(&"det>=-1/4".to_string()));
    }

    #[test]
    fn jsonl_has_one_line_per_record() {
        let data = run_experiment(Experiment::Lemma1, &SampleConfig::new(3, 5, 9)).unwrap();
        let mut buf = Vec::new();
        data.write_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 5);
        let v: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert!(v["spectrum"][0]["re"].is_number());
    }

    #[test]
    fn hash_depends_on_entries() {
        let a = family_matrix(FamilyId::new(Family::C2, 0.1).unwrap()).unwrap();
        let b = family_matrix(FamilyId::new(Family::C2, 0.2).unwrap()).unwrap();
        assert_eq!(matrix_hash(&a).len(), 16);
        assert_ne!(matrix_hash(&a), matrix_hash(&b));
    }

    #[test]
    fn curves_meet_at_the_junction() {
        let curves = pair_region_curves().unwrap();
        let c4 = &curves[3].points;
        let c5 = &curves[4].points;
        let (a, b) = (c4[c4.len() - 1], c5[0]);
        assert!((a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12);
        assert_eq!(c4[0], (0.5, -0.5));
        assert!((c5[c5.len() - 1].0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn figure3_includes_polygon_in_svg() {
        let data = run_experiment(Experiment::Figure3, &SampleConfig::new(3, 20, 1)).unwrap();
        assert_eq!(data.curves.len(), 6);
        let svg = data.to_svg();
        assert_eq!(svg.matches("<polyline").count(), 6);
        assert_eq!(svg.matches("<circle").count(), 20);
    }
}
