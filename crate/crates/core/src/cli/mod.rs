//! Command-line front end: config resolution, subcommand dispatch, CSV and
//! SVG emission.
//!
//! Exit codes: 0 success, 1 numerical abort, 2 invalid configuration.

pub mod config;
pub mod output;
pub mod svg;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::dynamics::{evolve, Schedule};
use crate::error::{Error, Result};
use crate::hamiltonians::Model;
use crate::spectrum::{gap_vs_impurity, minimal_gap, spectrum_sweep};
use crate::sweeps::{
    cutoff_scan, neg_log10_infidelity, phase_diagram, ramp_time_scan, with_workers, SweepResult,
};

pub use config::RunConfig;

#[derive(Parser)]
#[command(
    name = "cavity-anneal",
    version,
    about = "Quantum annealing of two lattice bosons coupled to two cavity modes",
    after_help = "Config precedence: defaults < CAVITY_ANNEAL_WORKERS < --config file < flags."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Eigenspectrum along the pump ramp and the minimal gap
    Spectrum,
    /// Minimal gap as a function of the impurity magnitude
    GapScan,
    /// One annealing trajectory with sampled observables
    Anneal,
    /// Final fidelity and entanglement versus ramp duration
    RampScan,
    /// Solution fidelity over the U x V grid for one model
    PhaseDiagram,
    /// Annealing quality for different photon cutoffs
    CutoffScan,
}

#[derive(Args)]
struct Flags {
    /// Plain `key = value` config file; flags override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Model(s): full, adiabatic, semiclassical (comma list for ramp-scan)
    #[arg(long, global = true)]
    model: Option<String>,
    /// Tunneling amplitude
    #[arg(long = "J", global = true)]
    hopping: Option<f64>,
    /// Onsite interaction
    #[arg(long = "U", global = true)]
    onsite: Option<f64>,
    /// Impurity magnitude (>= 1)
    #[arg(long = "V", global = true)]
    impurity: Option<f64>,
    /// Final pump amplitude
    #[arg(long = "Jt", global = true)]
    pump: Option<f64>,
    /// Cavity-pump detuning (signed)
    #[arg(long = "Delta", global = true)]
    detuning: Option<f64>,
    /// Cavity linewidth
    #[arg(long, global = true)]
    kappa: Option<f64>,
    /// Photon cutoff per mode
    #[arg(long, global = true)]
    nc: Option<usize>,
    /// Ramp duration
    #[arg(long = "t_f", global = true)]
    t_f: Option<f64>,
    /// Integrator step
    #[arg(long, global = true)]
    dt: Option<f64>,
    /// U grid, a:b:step or comma list
    #[arg(long = "grid-U", global = true)]
    grid_u: Option<String>,
    /// V grid, a:b:step or comma list
    #[arg(long = "grid-V", global = true)]
    grid_v: Option<String>,
    /// Ramp-duration grid, a:b:step or comma list
    #[arg(long = "tf-grid", global = true)]
    tf_grid: Option<String>,
    /// Photon cutoffs for cutoff-scan, comma list
    #[arg(long = "nc-set", global = true)]
    nc_set: Option<String>,
    /// Worker threads (0 = all cores)
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// SVG plot emission: on|off
    #[arg(long, global = true)]
    plots: Option<String>,
    /// Observer cadence in integrator steps
    #[arg(long, global = true)]
    cadence: Option<usize>,
    /// Spectrum levels including the ground row
    #[arg(long, global = true)]
    levels: Option<usize>,
    /// Spectrum grid points in s
    #[arg(long = "grid-points", global = true)]
    grid_points: Option<usize>,
}

impl Flags {
    fn apply_to(&self, config: &mut RunConfig) -> Result<()> {
        let mut set = |key: &str, value: Option<String>| -> Result<()> {
            if let Some(v) = value {
                config.apply_key(key, &v)?;
            }
            Ok(())
        };
        set("out", self.out.as_ref().map(|p| p.display().to_string()))?;
        set("model", self.model.clone())?;
        set("J", self.hopping.map(|v| v.to_string()))?;
        set("U", self.onsite.map(|v| v.to_string()))?;
        set("V", self.impurity.map(|v| v.to_string()))?;
        set("Jt", self.pump.map(|v| v.to_string()))?;
        set("Delta", self.detuning.map(|v| v.to_string()))?;
        set("kappa", self.kappa.map(|v| v.to_string()))?;
        set("nc", self.nc.map(|v| v.to_string()))?;
        set("t_f", self.t_f.map(|v| v.to_string()))?;
        set("dt", self.dt.map(|v| v.to_string()))?;
        set("grid-U", self.grid_u.clone())?;
        set("grid-V", self.grid_v.clone())?;
        set("tf-grid", self.tf_grid.clone())?;
        set("nc-set", self.nc_set.clone())?;
        set("workers", self.workers.map(|v| v.to_string()))?;
        set("plots", self.plots.clone())?;
        set("cadence", self.cadence.map(|v| v.to_string()))?;
        set("levels", self.levels.map(|v| v.to_string()))?;
        set("grid-points", self.grid_points.map(|v| v.to_string()))?;
        Ok(())
    }
}

/// Parse, configure, compute, emit. Returns the process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };

    let mut config = match RunConfig::from_env() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return 2;
        }
    };
    let configured = (|| -> Result<()> {
        if let Some(path) = &cli.flags.config {
            config.apply_file(path)?;
        }
        cli.flags.apply_to(&mut config)?;
        config.validate()?;
        if cli.command == Command::PhaseDiagram && config.params.model == Model::Adiabatic {
            return Err(Error::Config(
                "phase-diagram expects --model full or semiclassical".into(),
            ));
        }
        Ok(())
    })();
    if let Err(e) = configured {
        eprintln!("{e}");
        eprintln!("run 'cavity-anneal --help' for usage");
        return 2;
    }

    match dispatch(cli.command, &config) {
        Ok(summary) => {
            println!("{summary}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!(
                "params: J={} U={} V={} Jt={} Delta={} kappa={} nc={} t_f={} dt={} model={}",
                config.params.hopping,
                config.params.onsite,
                config.params.impurity,
                config.params.pump_final,
                config.params.detuning,
                config.params.kappa,
                config.params.photon_cutoff,
                config.params.t_final,
                config.params.dt,
                config.params.model
            );
            1
        }
    }
}

fn dispatch(command: Command, config: &RunConfig) -> Result<String> {
    std::fs::create_dir_all(&config.out_dir)?;
    match command {
        Command::Spectrum => run_spectrum(config),
        Command::GapScan => run_gap_scan(config),
        Command::Anneal => run_anneal(config),
        Command::RampScan => run_ramp_scan(config),
        Command::PhaseDiagram => run_phase_diagram(config),
        Command::CutoffScan => run_cutoff_scan(config),
    }
}

fn save_svg(config: &RunConfig, name: &str, contents: String) -> Result<()> {
    if config.plots {
        std::fs::write(config.out_dir.join(name), contents)?;
    }
    Ok(())
}

fn run_spectrum(config: &RunConfig) -> Result<String> {
    let sweep = with_workers(config.workers, || {
        spectrum_sweep(&config.params, config.levels, config.grid_points)
    })?;
    output::write_spectrum_csv(&config.out_dir.join("spectrum.csv"), config, &sweep)?;
    let gap = minimal_gap(&sweep)?;

    let series_data: Vec<(String, Vec<(f64, f64)>)> = (1..sweep.n_levels)
        .map(|level| {
            let pts = sweep
                .pump
                .iter()
                .zip(&sweep.relative_energies)
                .map(|(&p, row)| (p, row[level]))
                .collect();
            (format!("E{level} - E0"), pts)
        })
        .collect();
    let series: Vec<svg::Series> = series_data
        .iter()
        .map(|(name, pts)| svg::Series {
            name: name.clone(),
            points: pts,
        })
        .collect();
    save_svg(
        config,
        "spectrum.svg",
        svg::line_chart(
            "Spectrum relative to the ground state",
            "pump amplitude",
            "E_n - E0 (recoil units)",
            &series,
        ),
    )?;
    Ok(format!(
        "spectrum: {} points x {} levels -> {}; minimal gap {:.6} at s = {:.4}{}",
        config.grid_points,
        config.levels - 1,
        config.out_dir.join("spectrum.csv").display(),
        gap.gap,
        gap.s_at_min,
        if gap.refined { "" } else { " (grid endpoint)" }
    ))
}

fn run_gap_scan(config: &RunConfig) -> Result<String> {
    let scan = with_workers(config.workers, || {
        gap_vs_impurity(&config.params, &config.grid_v)
    })?;
    output::write_gap_scan_csv(&config.out_dir.join("gap_scan.csv"), config, &scan)?;
    let points: Vec<(f64, f64)> = scan.iter().map(|(v, g)| (*v, g.gap)).collect();
    save_svg(
        config,
        "gap_scan.svg",
        svg::line_chart(
            "Minimal gap vs impurity",
            "V",
            "minimal gap (recoil units)",
            &[svg::Series {
                name: "gap".into(),
                points: &points,
            }],
        ),
    )?;
    let monotone = points.windows(2).all(|w| w[1].1 >= w[0].1);
    Ok(format!(
        "gap-scan: V in [{}, {}], gap in [{:.6}, {:.6}], monotone increasing: {}",
        points.first().unwrap().0,
        points.last().unwrap().0,
        points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min),
        points.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max),
        monotone
    ))
}

fn run_anneal(config: &RunConfig) -> Result<String> {
    let schedule = Schedule::from_params(&config.params);
    let record = evolve(&config.params, &schedule, config.cadence)?;
    output::write_trajectory_csv(&config.out_dir.join("trajectory.csv"), config, &record)?;

    let occ_series: Vec<Vec<(f64, f64)>> = (0..config.params.sites)
        .map(|k| {
            record
                .samples
                .iter()
                .map(|s| (s.t, s.occupations[k]))
                .collect()
        })
        .collect();
    let fid: Vec<(f64, f64)> = record.samples.iter().map(|s| (s.t, s.fidelity)).collect();
    let p32: Vec<(f64, f64)> = record
        .samples
        .iter()
        .map(|s| (s.t, s.p_all_on_site3))
        .collect();
    let mut series: Vec<svg::Series> = occ_series
        .iter()
        .enumerate()
        .map(|(k, pts)| svg::Series {
            name: format!("<n{}> ", k + 1),
            points: pts,
        })
        .collect();
    series.push(svg::Series {
        name: "fidelity".into(),
        points: &fid,
    });
    series.push(svg::Series {
        name: "P(n3 = N)".into(),
        points: &p32,
    });
    save_svg(
        config,
        "trajectory.svg",
        svg::line_chart(
            &format!("Annealing trajectory ({})", config.params.model),
            "t (1/omega_r)",
            "occupation / probability",
            &series,
        ),
    )?;
    Ok(format!(
        "anneal ({}): t_f = {}, final fidelity {:.6}, P(n3=N) {:.6}{}{}",
        config.params.model,
        config.params.t_final,
        record.final_fidelity,
        record.final_p_site3,
        record
            .final_entropy
            .map(|s| format!(", final entropy {s:.3e}"))
            .unwrap_or_default(),
        if record.target_degenerate {
            " [target quasi-degenerate]"
        } else {
            ""
        }
    ))
}

fn run_ramp_scan(config: &RunConfig) -> Result<String> {
    let sweep = ramp_time_scan(
        &config.models,
        &config.tf_grid,
        &config.params,
        config.workers,
        config.cadence,
    )?;
    output::write_ramp_scan_csv(&config.out_dir.join("ramp_scan.csv"), config, &sweep)?;

    let mut series_data: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for (im, model) in config.models.iter().enumerate() {
        let pts: Vec<(f64, f64)> = sweep
            .cells
            .iter()
            .filter(|c| c.index[0] == im)
            .filter_map(|c| {
                c.outcome
                    .as_ref()
                    .ok()
                    .map(|o| (c.coords[1], neg_log10_infidelity(o.final_fidelity)))
            })
            .collect();
        series_data.push((format!("{model}"), pts));
    }
    let series: Vec<svg::Series> = series_data
        .iter()
        .map(|(name, pts)| svg::Series {
            name: name.clone(),
            points: pts,
        })
        .collect();
    save_svg(
        config,
        "ramp_scan.svg",
        svg::line_chart(
            "Annealing quality vs ramp duration",
            "t_f (1/omega_r)",
            "-log10(1 - fidelity)",
            &series,
        ),
    )?;

    let summary = summarize_sweep(&sweep);
    Ok(format!(
        "ramp-scan over {} ramp durations x {:?}: {}",
        config.tf_grid.len(),
        config
            .models
            .iter()
            .map(|m| m.as_str())
            .collect::<Vec<_>>(),
        summary
    ))
}

fn run_phase_diagram(config: &RunConfig) -> Result<String> {
    let model = config.params.model;
    let sweep = phase_diagram(
        model,
        &config.grid_u,
        &config.grid_v,
        &config.params,
        config.workers,
        config.cadence,
    )?;
    let csv_name = format!("phase_diagram_{model}.csv");
    output::write_phase_diagram_csv(&config.out_dir.join(&csv_name), config, &sweep)?;

    let values: Vec<Option<f64>> = sweep
        .cells
        .iter()
        .map(|c| c.outcome.as_ref().ok().map(|o| o.final_fidelity))
        .collect();
    save_svg(
        config,
        &format!("phase_diagram_{model}.svg"),
        svg::heatmap(
            &format!("Solution fidelity ({model})"),
            "U",
            "V",
            &config.grid_u,
            &config.grid_v,
            &values,
        ),
    )?;
    if model == Model::Full {
        let entropies: Vec<Option<f64>> = sweep
            .cells
            .iter()
            .map(|c| c.outcome.as_ref().ok().and_then(|o| o.max_entropy))
            .collect();
        save_svg(
            config,
            "entanglement_map.svg",
            svg::heatmap(
                "Maximum entanglement entropy during the sweep",
                "U",
                "V",
                &config.grid_u,
                &config.grid_v,
                &entropies,
            ),
        )?;
    }
    Ok(format!(
        "phase-diagram ({model}): {} cells -> {}; {}",
        sweep.len(),
        config.out_dir.join(&csv_name).display(),
        summarize_sweep(&sweep)
    ))
}

fn run_cutoff_scan(config: &RunConfig) -> Result<String> {
    let sweep = cutoff_scan(
        &config.nc_set,
        &config.tf_grid,
        &config.params,
        config.workers,
        config.cadence,
    )?;
    output::write_cutoff_scan_csv(&config.out_dir.join("cutoff_scan.csv"), config, &sweep)?;

    let mut series_data: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for (ic, &nc) in config.nc_set.iter().enumerate() {
        let pts: Vec<(f64, f64)> = sweep
            .cells
            .iter()
            .filter(|c| c.index[0] == ic)
            .filter_map(|c| {
                c.outcome
                    .as_ref()
                    .ok()
                    .map(|o| (c.coords[1], neg_log10_infidelity(o.final_fidelity)))
            })
            .collect();
        series_data.push((format!("nc = {nc}"), pts));
    }
    let series: Vec<svg::Series> = series_data
        .iter()
        .map(|(name, pts)| svg::Series {
            name: name.clone(),
            points: pts,
        })
        .collect();
    save_svg(
        config,
        "cutoff_scan.svg",
        svg::line_chart(
            "Annealing quality vs ramp duration per photon cutoff",
            "t_f (1/omega_r)",
            "-log10(1 - fidelity)",
            &series,
        ),
    )?;
    Ok(format!(
        "cutoff-scan over nc {:?} x {} ramp durations: {}",
        config.nc_set,
        config.tf_grid.len(),
        summarize_sweep(&sweep)
    ))
}

fn summarize_sweep(sweep: &SweepResult) -> String {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut failed = 0usize;
    for cell in &sweep.cells {
        match &cell.outcome {
            Ok(o) => {
                lo = lo.min(o.final_fidelity);
                hi = hi.max(o.final_fidelity);
            }
            Err(_) => failed += 1,
        }
    }
    let mut s = if lo.is_finite() {
        format!("fidelity range [{lo:.4}, {hi:.4}]")
    } else {
        "no successful cells".into()
    };
    if failed > 0 {
        s.push_str(&format!(" ({failed} failed cells)"));
    }
    s
}
