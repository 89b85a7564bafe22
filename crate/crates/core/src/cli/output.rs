//! CSV emission with embedded provenance.
//!
//! Every file starts with `## ` info lines and `# key = value` lines;
//! stripping the leading `# ` turns the header into a config file that
//! reproduces the body. Floats are printed with 12 significant digits,
//! `.` decimal, no locale dependence.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::dynamics::TrajectoryRecord;
use crate::error::Result;
use crate::hamiltonians::Model;
use crate::spectrum::{GapResult, SpectrumSweep};
use crate::sweeps::{neg_log10_infidelity, SweepResult};

use super::config::RunConfig;

/// 12 significant digits, scientific, locale-free.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x:.11e}")
    }
}

fn optional_float(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

/// Provenance block: info lines (`## `) then config lines (`# key = value`).
pub fn provenance_header(config: &RunConfig, command: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "## cavity-anneal {} v{}",
        command,
        env!("CARGO_PKG_VERSION")
    );
    let _ = writeln!(out, "## energies in recoil units; entropy in nats");
    for (key, value) in config.provenance_entries() {
        let _ = writeln!(out, "# {key} = {value}");
    }
    out
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, contents)?;
    Ok(())
}

pub fn write_spectrum_csv(
    path: &Path,
    config: &RunConfig,
    sweep: &SpectrumSweep,
) -> Result<()> {
    let mut body = provenance_header(config, "spectrum");
    let mut header = String::from("s,Jt");
    for level in 1..sweep.n_levels {
        let _ = write!(header, ",E{level}_rel");
    }
    let _ = writeln!(body, "{header}");
    for (i, row) in sweep.relative_energies.iter().enumerate() {
        let mut line = format!("{},{}", format_float(sweep.s[i]), format_float(sweep.pump[i]));
        for value in &row[1..] {
            let _ = write!(line, ",{}", format_float(*value));
        }
        let _ = writeln!(body, "{line}");
    }
    write_file(path, &body)
}

pub fn write_gap_scan_csv(
    path: &Path,
    config: &RunConfig,
    scan: &[(f64, GapResult)],
) -> Result<()> {
    let mut body = provenance_header(config, "gap-scan");
    let _ = writeln!(body, "V,min_gap,s_at_min,refined");
    for (v, gap) in scan {
        let _ = writeln!(
            body,
            "{},{},{},{}",
            format_float(*v),
            format_float(gap.gap),
            format_float(gap.s_at_min),
            gap.refined
        );
    }
    write_file(path, &body)
}

pub fn write_trajectory_csv(
    path: &Path,
    config: &RunConfig,
    record: &TrajectoryRecord,
) -> Result<()> {
    let model = config.params.model;
    let mut body = provenance_header(config, "anneal");
    let mut header = String::from("t,Jt,n1,n2,n3,n4");
    if model == Model::Full {
        header.push_str(",nphot1,nphot2");
    }
    if model == Model::Semiclassical {
        header.push_str(",alpha1_re,alpha1_im,alpha2_re,alpha2_im");
    }
    header.push_str(",fidelity,fidelity_initial,atomic_fidelity,p_site3");
    if model == Model::Full {
        header.push_str(",entropy");
    }
    header.push_str(",energy,norm");
    let _ = writeln!(body, "{header}");

    for s in &record.samples {
        let mut line = format!("{},{}", format_float(s.t), format_float(s.pump));
        for occ in &s.occupations {
            let _ = write!(line, ",{}", format_float(*occ));
        }
        if model == Model::Full {
            let (n1, n2) = s.photons.unwrap_or((f64::NAN, f64::NAN));
            let _ = write!(line, ",{},{}", format_float(n1), format_float(n2));
        }
        if model == Model::Semiclassical {
            let (a1, a2) = s.alphas.unwrap_or_default();
            let _ = write!(
                line,
                ",{},{},{},{}",
                format_float(a1.re),
                format_float(a1.im),
                format_float(a2.re),
                format_float(a2.im)
            );
        }
        let _ = write!(
            line,
            ",{},{},{},{}",
            format_float(s.fidelity),
            format_float(s.fidelity_initial),
            format_float(s.atomic_fidelity),
            format_float(s.p_all_on_site3)
        );
        if model == Model::Full {
            let _ = write!(line, ",{}", optional_float(s.entropy));
        }
        let _ = writeln!(
            body,
            "{line},{},{}",
            format_float(s.energy),
            format_float(s.norm)
        );
    }
    write_file(path, &body)
}

pub fn write_ramp_scan_csv(
    path: &Path,
    config: &RunConfig,
    sweep: &SweepResult,
) -> Result<()> {
    let mut body = provenance_header(config, "ramp-scan");
    let _ = writeln!(
        body,
        "model,t_f,final_fidelity,neg_log10_infidelity,final_atomic_fidelity,final_p_site3,final_entropy,max_entropy,params_hash,status,reason"
    );
    for cell in &sweep.cells {
        match &cell.outcome {
            Ok(o) => {
                let _ = writeln!(
                    body,
                    "{},{},{},{},{},{},{},{},{:016x},ok,",
                    cell.model,
                    format_float(cell.coords[1]),
                    format_float(o.final_fidelity),
                    format_float(neg_log10_infidelity(o.final_fidelity)),
                    format_float(o.final_atomic_fidelity),
                    format_float(o.final_p_site3),
                    optional_float(o.final_entropy),
                    optional_float(o.max_entropy),
                    cell.params_hash,
                );
            }
            Err(reason) => {
                let _ = writeln!(
                    body,
                    "{},{},,,,,,,{:016x},failed,{}",
                    cell.model,
                    format_float(cell.coords[1]),
                    cell.params_hash,
                    csv_escape(reason),
                );
            }
        }
    }
    write_file(path, &body)
}

pub fn write_phase_diagram_csv(
    path: &Path,
    config: &RunConfig,
    sweep: &SweepResult,
) -> Result<()> {
    let mut body = provenance_header(config, "phase-diagram");
    let _ = writeln!(
        body,
        "iu,iv,U,V,final_fidelity,final_atomic_fidelity,final_p_site3,final_entropy,max_entropy,params_hash,status,reason"
    );
    for cell in &sweep.cells {
        match &cell.outcome {
            Ok(o) => {
                let _ = writeln!(
                    body,
                    "{},{},{},{},{},{},{},{},{},{:016x},ok,",
                    cell.index[0],
                    cell.index[1],
                    format_float(cell.coords[0]),
                    format_float(cell.coords[1]),
                    format_float(o.final_fidelity),
                    format_float(o.final_atomic_fidelity),
                    format_float(o.final_p_site3),
                    optional_float(o.final_entropy),
                    optional_float(o.max_entropy),
                    cell.params_hash,
                );
            }
            Err(reason) => {
                let _ = writeln!(
                    body,
                    "{},{},{},{},,,,,,{:016x},failed,{}",
                    cell.index[0],
                    cell.index[1],
                    format_float(cell.coords[0]),
                    format_float(cell.coords[1]),
                    cell.params_hash,
                    csv_escape(reason),
                );
            }
        }
    }
    write_file(path, &body)
}

pub fn write_cutoff_scan_csv(
    path: &Path,
    config: &RunConfig,
    sweep: &SweepResult,
) -> Result<()> {
    let max_nc = sweep
        .axes
        .first()
        .map(|a| a.values.iter().fold(0.0f64, |m, &v| m.max(v)) as usize)
        .unwrap_or(0);
    let mut body = provenance_header(config, "cutoff-scan");
    let mut header = String::from(
        "nc,t_f,final_fidelity,neg_log10_infidelity,final_atomic_fidelity,final_p_site3,final_entropy,max_entropy",
    );
    for n in 0..=max_nc {
        let _ = write!(header, ",p_mode1_{n}");
    }
    header.push_str(",params_hash,status,reason");
    let _ = writeln!(body, "{header}");

    for cell in &sweep.cells {
        let nc = cell.coords[0] as usize;
        match &cell.outcome {
            Ok(o) => {
                let mut line = format!(
                    "{nc},{},{},{},{},{},{},{}",
                    format_float(cell.coords[1]),
                    format_float(o.final_fidelity),
                    format_float(neg_log10_infidelity(o.final_fidelity)),
                    format_float(o.final_atomic_fidelity),
                    format_float(o.final_p_site3),
                    optional_float(o.final_entropy),
                    optional_float(o.max_entropy),
                );
                let dist = o.photon_distribution.as_deref().unwrap_or(&[]);
                for n in 0..=max_nc {
                    if n < dist.len() {
                        let _ = write!(line, ",{}", format_float(dist[n]));
                    } else {
                        line.push(',');
                    }
                }
                let _ = writeln!(body, "{line},{:016x},ok,", cell.params_hash);
            }
            Err(reason) => {
                let mut line = format!("{nc},{},,,,,,", format_float(cell.coords[1]));
                for _ in 0..=max_nc {
                    line.push(',');
                }
                let _ = writeln!(
                    body,
                    "{line},{:016x},failed,{}",
                    cell.params_hash,
                    csv_escape(reason)
                );
            }
        }
    }
    write_file(path, &body)
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
