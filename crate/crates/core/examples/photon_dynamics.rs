//! Cavity photon numbers along the sweep for three detunings, with the final
//! pump scaled as sqrt(|Delta|). Larger detuning orders the atoms with fewer
//! photons in the modes.

use cavity_anneal::cli::svg;
use cavity_anneal::dynamics::{evolve, Schedule};
use cavity_anneal::hamiltonians::AnnealParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::path::Path::new("out/photon_dynamics");
    std::fs::create_dir_all(out)?;

    let mut series_data: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for delta in [-1.0, -3.0, -5.0] {
        let params = AnnealParams {
            detuning: delta,
            pump_final: (-delta).sqrt(),
            ..AnnealParams::default()
        };
        let record = evolve(&params, &Schedule::from_params(&params), 100)?;
        let total: Vec<(f64, f64)> = record
            .samples
            .iter()
            .map(|s| {
                let (n1, n2) = s.photons.unwrap();
                (s.pump, n1 + n2)
            })
            .collect();
        let peak = total.iter().map(|p| p.1).fold(0.0f64, f64::max);
        let last = total.last().unwrap().1;
        println!(
            "Delta = {delta:>4}: total photons peak {peak:.4}, end {last:.4}, final fidelity {:.4}",
            record.final_fidelity
        );
        series_data.push((format!("Delta = {delta}"), total));
    }

    let series: Vec<svg::Series> = series_data
        .iter()
        .map(|(name, pts)| svg::Series {
            name: name.clone(),
            points: pts,
        })
        .collect();
    std::fs::write(
        out.join("photons.svg"),
        svg::line_chart(
            "Total cavity photon number along the sweep",
            "pump amplitude",
            "<n1 + n2>",
            &series,
        ),
    )?;
    println!("wrote {}", out.display());
    Ok(())
}
