//! Report envelopes written by the commands. Every report embeds the
//! artifact version, the command, and the full configuration including the
//! seed, so identical configurations byte-reproduce the files.

use std::fs;
use std::io::Write;
use std::path::Path;

use mvq_core::extension::PairSample;
use serde::Serialize;

use crate::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct ExtendConfigDoc {
    pub seed: u64,
    pub mesh_n: usize,
    pub pairs: usize,
    pub tol: f64,
    pub lip_inflation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lip_supplied: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixture: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    pub base_point: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClusterSummaryDoc {
    pub s: usize,
    pub sizes: Vec<usize>,
    pub chain_worst_ratio: f64,
    pub chain_pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtendReportDoc {
    pub version: String,
    pub command: String,
    pub config: ExtendConfigDoc,
    pub q: usize,
    pub gamma: f64,
    pub lip_estimate: f64,
    pub lip_used: f64,
    pub d_budget: f64,
    pub clusters: ClusterSummaryDoc,
    pub boundary_error: f64,
    pub boundary_tol: f64,
    pub boundary_pass: bool,
    pub empirical_lip: f64,
    pub lip_bound: f64,
    pub lip_pass: bool,
    pub origin_worst: f64,
    pub origin_bound: f64,
    pub origin_pass: bool,
    pub all_pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverConfigDoc {
    pub seed: u64,
    pub probes: usize,
    pub c: f64,
    pub s: f64,
    pub lo: f64,
    pub hi: f64,
    pub dim: usize,
    pub q: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct MultiplicityDoc {
    pub value: usize,
    pub exact: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverReportDoc {
    pub version: String,
    pub command: String,
    pub config: CoverConfigDoc,
    pub base_members: usize,
    pub base_multiplicity: MultiplicityDoc,
    pub product_members: usize,
    pub product_multiplicity: MultiplicityDoc,
    pub bound: usize,
    pub pass: bool,
    pub non_vacuous: bool,
    pub coverage_ok: bool,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn write_pairs_csv(path: &Path, samples: &[PairSample]) -> Result<(), CliError> {
    let mut out = String::from("i,j,dist,s_value,ratio\n");
    for sample in samples {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            sample.i, sample.j, sample.dist, sample.s_value, sample.ratio
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn write_probes_csv(path: &Path, per_probe: &[usize]) -> Result<(), CliError> {
    let mut file = fs::File::create(path)?;
    writeln!(file, "probe,members_met")?;
    for (i, met) in per_probe.iter().enumerate() {
        writeln!(file, "{i},{met}")?;
    }
    Ok(())
}
