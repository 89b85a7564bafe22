//! Annealing quality versus ramp duration for the full and the adiabatically
//! eliminated model, plus the entanglement budget of the full runs (peak
//! entropy during the sweep vs what remains at the end).

use cavity_anneal::cli::{output, svg, RunConfig};
use cavity_anneal::hamiltonians::Model;
use cavity_anneal::sweeps::{neg_log10_infidelity, ramp_time_scan};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut config = RunConfig::default();
    config.out_dir = "out/ramp_scan".into();
    config.models = vec![Model::Full, Model::Adiabatic];

    let sweep = ramp_time_scan(
        &config.models,
        &config.tf_grid,
        &config.params,
        config.workers,
        config.cadence,
    )?;
    output::write_ramp_scan_csv(&config.out_dir.join("ramp_scan.csv"), &config, &sweep)?;

    let mut quality: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    let mut entropies: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for (im, model) in config.models.iter().enumerate() {
        let mut q = Vec::new();
        let mut s_max = Vec::new();
        let mut s_fin = Vec::new();
        for cell in sweep.cells.iter().filter(|c| c.index[0] == im) {
            let o = cell.outcome.as_ref().expect("cells succeed at these params");
            q.push((cell.coords[1], neg_log10_infidelity(o.final_fidelity)));
            if let (Some(max), Some(fin)) = (o.max_entropy, o.final_entropy) {
                s_max.push((cell.coords[1], max));
                s_fin.push((cell.coords[1], fin));
            }
        }
        println!(
            "{model}: -log10(1-F) from {:.2} (t_f = {}) to {:.2} (t_f = {})",
            q.first().unwrap().1,
            q.first().unwrap().0,
            q.last().unwrap().1,
            q.last().unwrap().0
        );
        quality.push((model.to_string(), q));
        if !s_max.is_empty() {
            entropies.push(("max entropy".into(), s_max));
            entropies.push(("final entropy".into(), s_fin));
        }
    }

    let series: Vec<svg::Series> = quality
        .iter()
        .map(|(name, pts)| svg::Series {
            name: name.clone(),
            points: pts,
        })
        .collect();
    std::fs::write(
        config.out_dir.join("ramp_scan.svg"),
        svg::line_chart(
            "Annealing quality vs ramp duration",
            "t_f (1/omega_r)",
            "-log10(1 - fidelity)",
            &series,
        ),
    )?;
    let series: Vec<svg::Series> = entropies
        .iter()
        .map(|(name, pts)| svg::Series {
            name: name.clone(),
            points: pts,
        })
        .collect();
    std::fs::write(
        config.out_dir.join("entanglement.svg"),
        svg::line_chart(
            "Atom-field entanglement vs ramp duration (full model)",
            "t_f (1/omega_r)",
            "entropy (nats)",
            &series,
        ),
    )?;
    println!("wrote {}", config.out_dir.display());
    Ok(())
}
