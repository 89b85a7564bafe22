//! Eigenspectrum of the full atom-field Hamiltonian along the pump ramp,
//! with the minimal gap between ground and first excited state.

use cavity_anneal::cli::{output, svg, RunConfig};
use cavity_anneal::spectrum::{minimal_gap, spectrum_sweep};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut config = RunConfig::default();
    config.out_dir = "out/spectrum".into();

    let sweep = spectrum_sweep(&config.params, config.levels, config.grid_points)?;
    let gap = minimal_gap(&sweep)?;
    println!(
        "minimal gap {:.6} recoil units at s = {:.4} (pump {:.4})",
        gap.gap,
        gap.s_at_min,
        gap.s_at_min * config.params.pump_final
    );

    output::write_spectrum_csv(&config.out_dir.join("spectrum.csv"), &config, &sweep)?;
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
    std::fs::write(
        config.out_dir.join("spectrum.svg"),
        svg::line_chart(
            "Spectrum relative to the ground state",
            "pump amplitude",
            "E_n - E0 (recoil units)",
            &series,
        ),
    )?;
    println!("wrote {}", config.out_dir.display());
    Ok(())
}
