//! Minimal energy gap as a function of the impurity magnitude V. Without
//! impurity (V = 1) the ordered ground states stay quasi-degenerate and the
//! gap closes at full pump.

use cavity_anneal::cli::{output, svg, RunConfig};
use cavity_anneal::spectrum::gap_vs_impurity;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut config = RunConfig::default();
    config.out_dir = "out/gap_scan".into();

    let scan = gap_vs_impurity(&config.params, &config.grid_v)?;
    for (v, gap) in &scan {
        println!("V = {v:.3}: minimal gap {:.6} at s = {:.4}", gap.gap, gap.s_at_min);
    }

    output::write_gap_scan_csv(&config.out_dir.join("gap_scan.csv"), &config, &scan)?;
    let points: Vec<(f64, f64)> = scan.iter().map(|(v, g)| (*v, g.gap)).collect();
    std::fs::write(
        config.out_dir.join("gap_scan.svg"),
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
    println!("wrote {}", config.out_dir.display());
    Ok(())
}
