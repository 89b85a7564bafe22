//! Solution fidelity over the onsite-interaction x impurity plane for the
//! semi-classical mean-field model against the full quantum model, plus the
//! full model's peak-entanglement map. Mean-field annealing collapses at
//! strong onsite interaction where the quantum model still succeeds.
//!
//! A coarser grid than the CLI default keeps this demo near a minute; pass
//! `--grid-U`/`--grid-V` to the `cavity-anneal` binary for the full map.

use cavity_anneal::cli::{output, svg, RunConfig};
use cavity_anneal::hamiltonians::Model;
use cavity_anneal::sweeps::phase_diagram;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut config = RunConfig::default();
    config.out_dir = "out/phase_diagram".into();
    config.apply_key("grid-U", "0:1:0.1")?;
    config.apply_key("grid-V", "1:1.2:0.04")?;

    // Mean-field panel at its published operating point.
    let mut sc = config.clone();
    sc.apply_key("model", "semiclassical")?;
    sc.apply_key("Delta", "-1")?;
    sc.apply_key("Jt", "1")?;
    let sc_sweep = phase_diagram(
        Model::Semiclassical,
        &sc.grid_u,
        &sc.grid_v,
        &sc.params,
        sc.workers,
        sc.cadence,
    )?;
    output::write_phase_diagram_csv(
        &config.out_dir.join("phase_diagram_semiclassical.csv"),
        &sc,
        &sc_sweep,
    )?;

    let full_sweep = phase_diagram(
        Model::Full,
        &config.grid_u,
        &config.grid_v,
        &config.params,
        config.workers,
        config.cadence,
    )?;
    output::write_phase_diagram_csv(
        &config.out_dir.join("phase_diagram_full.csv"),
        &config,
        &full_sweep,
    )?;

    let fidelity_map = |sweep: &cavity_anneal::sweeps::SweepResult| -> Vec<Option<f64>> {
        sweep
            .cells
            .iter()
            .map(|c| c.outcome.as_ref().ok().map(|o| o.final_fidelity))
            .collect()
    };
    std::fs::write(
        config.out_dir.join("phase_diagram_semiclassical.svg"),
        svg::heatmap(
            "Solution fidelity, mean-field cavity fields",
            "U",
            "V",
            &config.grid_u,
            &config.grid_v,
            &fidelity_map(&sc_sweep),
        ),
    )?;
    std::fs::write(
        config.out_dir.join("phase_diagram_full.svg"),
        svg::heatmap(
            "Solution fidelity, full quantum model",
            "U",
            "V",
            &config.grid_u,
            &config.grid_v,
            &fidelity_map(&full_sweep),
        ),
    )?;
    let entropy_map: Vec<Option<f64>> = full_sweep
        .cells
        .iter()
        .map(|c| c.outcome.as_ref().ok().and_then(|o| o.max_entropy))
        .collect();
    std::fs::write(
        config.out_dir.join("entanglement_map.svg"),
        svg::heatmap(
            "Peak entanglement entropy (full model)",
            "U",
            "V",
            &config.grid_u,
            &config.grid_v,
            &entropy_map,
        ),
    )?;

    let worst = |sweep: &cavity_anneal::sweeps::SweepResult, pred: &dyn Fn(f64) -> bool| {
        sweep
            .cells
            .iter()
            .filter_map(|c| c.outcome.as_ref().ok().map(|o| (c.coords.clone(), o.final_fidelity)))
            .filter(|(_, f)| pred(*f))
            .count()
    };
    println!(
        "semiclassical cells below fidelity 0.5: {} of {}",
        worst(&sc_sweep, &|f| f < 0.5),
        sc_sweep.len()
    );
    println!(
        "full-model cells at or above fidelity 0.95: {} of {}",
        worst(&full_sweep, &|f| f >= 0.95),
        full_sweep.len()
    );
    println!("wrote {}", config.out_dir.display());
    Ok(())
}
