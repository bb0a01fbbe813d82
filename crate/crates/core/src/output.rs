//! CSV series, snapshot text files and the JSON run summary.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;
use crate::observables::{ObservableRecord, Residuals};
use crate::scenario::{RunOutput, Scenario, ScenarioFile, Snapshot};
use crate::state::Level;
use crate::units::SimParams;

pub const CSV_HEADER: &str = "tau,n_g,n_e,p_mean_g,p_mean_e,p_norm_g,p_norm_e,\
e_kin_g,e_kin_e,e_kin_total,e_norm_g,e_norm_e";

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Writes one CSV row per record; undefined values are empty fields.
pub fn write_series<W: Write>(mut w: W, records: &[ObservableRecord]) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.tau,
            r.n_g,
            r.n_e,
            r.p_mean_g,
            r.p_mean_e,
            opt(r.p_norm_g),
            opt(r.p_norm_e),
            r.e_kin_g,
            r.e_kin_e,
            r.e_kin_total,
            opt(r.e_norm_g),
            opt(r.e_norm_e),
        )?;
    }
    w.flush()
}

/// Writes `p Re Im` rows of one level's amplitude on its physical momentum
/// axis, the same format accepted for tabulated initial amplitudes.
pub fn write_snapshot<W: Write>(mut w: W, snap: &Snapshot, level: Level) -> std::io::Result<()> {
    writeln!(w, "# tau = {}", snap.tau)?;
    writeln!(w, "# level = {level}")?;
    writeln!(w, "# p re im")?;
    let amps = snap.state.amplitudes(level);
    for (j, z) in amps.iter().enumerate() {
        writeln!(w, "{} {} {}", snap.state.momentum(level, j), z.re, z.im)?;
    }
    w.flush()
}

#[derive(Debug, Serialize)]
pub struct Summary<'a> {
    pub scenario: &'a ScenarioFile,
    pub params: SimParams,
    pub dp: f64,
    pub n_records: usize,
    pub final_record: Option<&'a ObservableRecord>,
    pub residuals: Residuals,
    pub files: Vec<String>,
}

/// Writes the series CSV, snapshot files and summary into `dir` (created if
/// needed). Returns the paths written.
pub fn write_run(scenario: &Scenario, out: &RunOutput, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let spec = &scenario.file.output;
    let mut written = Vec::new();

    let series = dir.join(&spec.series);
    write_series(BufWriter::new(File::create(&series)?), &out.records)?;
    written.push(series);

    for (k, snap) in out.snapshots.iter().enumerate() {
        for level in [Level::Ground, Level::Excited] {
            let path = dir.join(format!("snapshot_{k:03}_{level}.txt"));
            write_snapshot(BufWriter::new(File::create(&path)?), snap, level)?;
            written.push(path);
        }
    }

    let summary_path = dir.join(&spec.summary);
    let summary = Summary {
        scenario: &scenario.file,
        params: scenario.params,
        dp: scenario.grid.dp(),
        n_records: out.records.len(),
        final_record: out.records.last(),
        residuals: out.residuals,
        files: written
            .iter()
            .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
            .collect(),
    };
    let mut f = BufWriter::new(File::create(&summary_path)?);
    serde_json::to_writer_pretty(&mut f, &summary).map_err(std::io::Error::from)?;
    writeln!(f)?;
    f.flush()?;
    written.push(summary_path);
    Ok(written)
}
