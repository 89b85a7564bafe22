//! Instantaneous eigenspectra along the pump ramp, minimal-gap extraction,
//! and gap-versus-impurity scans.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hamiltonians::{adiabatic_hamiltonian, full_hamiltonian, AnnealParams, Model};
use crate::linalg;

/// Ground level plus ten excitations.
pub const DEFAULT_LEVELS: usize = 11;
/// Uniform grid resolution in `s = t/t_f`.
pub const DEFAULT_GRID: usize = 201;

/// Lowest `n_levels` eigenvalues relative to the ground state on a uniform
/// `s` grid. The leading column is identically zero.
#[derive(Debug, Clone)]
pub struct SpectrumSweep {
    pub s: Vec<f64>,
    pub pump: Vec<f64>,
    /// One row per grid point, `n_levels` ascending values, first entry 0.
    pub relative_energies: Vec<Vec<f64>>,
    pub n_levels: usize,
}

/// Dense eigensolve of the model Hamiltonian at each grid point. Grid points
/// are independent and evaluated in parallel, merged by index.
pub fn spectrum_sweep(
    params: &AnnealParams,
    n_levels: usize,
    n_grid: usize,
) -> Result<SpectrumSweep> {
    params.validate()?;
    if n_grid < 2 {
        return Err(Error::InvalidArgument(format!(
            "spectrum grid needs at least 2 points, got {n_grid}"
        )));
    }
    let dim = match params.model {
        Model::Full => params.composite_basis()?.dim(),
        Model::Adiabatic | Model::Semiclassical => params.lattice_basis()?.dim(),
    };
    if n_levels == 0 || n_levels > dim {
        return Err(Error::InvalidArgument(format!(
            "n_levels = {n_levels} outside 1..={dim}"
        )));
    }

    let s: Vec<f64> = (0..n_grid)
        .map(|i| i as f64 / (n_grid - 1) as f64)
        .collect();
    let rows: Result<Vec<Vec<f64>>> = s
        .par_iter()
        .map(|&si| {
            let pump = si * params.pump_final;
            let h = match params.model {
                Model::Full => full_hamiltonian(params, pump)?,
                Model::Adiabatic | Model::Semiclassical => adiabatic_hamiltonian(params, pump)?,
            };
            let vals = linalg::eigh_values(h.matrix())?;
            Ok(vals[..n_levels].iter().map(|v| v - vals[0]).collect())
        })
        .collect();
    let pump = s.iter().map(|&si| si * params.pump_final).collect();
    Ok(SpectrumSweep {
        s,
        pump,
        relative_energies: rows?,
        n_levels,
    })
}

/// Minimal gap between ground and first excited state.
#[derive(Debug, Clone, Copy)]
pub struct GapResult {
    pub gap: f64,
    pub s_at_min: f64,
    /// Whether parabolic refinement through the grid minimum was applied;
    /// false when the minimum sits on a grid endpoint.
    pub refined: bool,
}

/// Grid minimum of `E1 - E0` refined by a parabola through the minimum and
/// its two neighbors.
pub fn minimal_gap(sweep: &SpectrumSweep) -> Result<GapResult> {
    if sweep.n_levels < 2 {
        return Err(Error::InvalidArgument(
            "minimal gap needs at least two levels".into(),
        ));
    }
    let gaps: Vec<f64> = sweep.relative_energies.iter().map(|row| row[1]).collect();
    let (imin, &gmin) = gaps
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .expect("non-empty grid");
    if imin == 0 || imin == gaps.len() - 1 {
        return Ok(GapResult {
            gap: gmin,
            s_at_min: sweep.s[imin],
            refined: false,
        });
    }
    // Parabola through (s_{i-1}, g_{i-1}), (s_i, g_i), (s_{i+1}, g_{i+1});
    // uniform spacing assumed.
    let (gl, gc, gr) = (gaps[imin - 1], gaps[imin], gaps[imin + 1]);
    let denom = gl - 2.0 * gc + gr;
    if denom <= 0.0 {
        // Flat or degenerate neighborhood: keep the grid value.
        return Ok(GapResult {
            gap: gmin,
            s_at_min: sweep.s[imin],
            refined: false,
        });
    }
    let h = sweep.s[imin] - sweep.s[imin - 1];
    let delta = 0.5 * (gl - gr) / denom; // vertex offset in units of h
    let s_at_min = sweep.s[imin] + delta.clamp(-1.0, 1.0) * h;
    let gap = gc - 0.125 * (gl - gr) * (gl - gr) / denom;
    Ok(GapResult {
        gap,
        s_at_min,
        refined: true,
    })
}

/// Minimal gap for every impurity value on the grid, other parameters fixed.
pub fn gap_vs_impurity(params: &AnnealParams, v_grid: &[f64]) -> Result<Vec<(f64, GapResult)>> {
    if v_grid.is_empty() {
        return Err(Error::InvalidArgument("empty impurity grid".into()));
    }
    v_grid
        .par_iter()
        .map(|&v| {
            let p = AnnealParams {
                impurity: v,
                ..params.clone()
            };
            let sweep = spectrum_sweep(&p, 2, DEFAULT_GRID)?;
            Ok((v, minimal_gap(&sweep)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_ground_row_is_zero_and_sorted() {
        let params = AnnealParams {
            photon_cutoff: 1,
            ..AnnealParams::default()
        };
        let sweep = spectrum_sweep(&params, 5, 11).unwrap();
        assert_eq!(sweep.relative_energies.len(), 11);
        for row in &sweep.relative_energies {
            assert_eq!(row[0], 0.0);
            for pair in row.windows(2) {
                assert!(pair[1] >= pair[0] - 1e-12);
            }
        }
    }

    #[test]
    fn single_level_sweep_is_all_zero() {
        let params = AnnealParams::default();
        let sweep = spectrum_sweep(&params, 1, 5).unwrap();
        assert!(sweep
            .relative_energies
            .iter()
            .all(|row| row.len() == 1 && row[0] == 0.0));
        assert!(minimal_gap(&sweep).is_err());
    }

    #[test]
    fn decoupled_point_has_photon_excitation_at_minus_delta() {
        // At zero pump the 10 atomic levels are followed by the first photon
        // excitation at exactly -Delta.
        let params = AnnealParams::default();
        let sweep = spectrum_sweep(&params, 11, 3).unwrap();
        let row0 = &sweep.relative_energies[0];
        assert!((row0[10] - 5.0).abs() < 1e-9, "photon line at {}", row0[10]);
        assert!(row0[9] < 2.5, "atomic band top at {}", row0[9]);
    }

    #[test]
    fn constant_synthetic_sweep() {
        let sweep = SpectrumSweep {
            s: vec![0.0, 0.5, 1.0],
            pump: vec![0.0, 0.5, 1.0],
            relative_energies: vec![vec![0.0, 0.7]; 3],
            n_levels: 2,
        };
        let gap = minimal_gap(&sweep).unwrap();
        assert_eq!(gap.gap, 0.7);
        assert!(!gap.refined);
    }

    #[test]
    fn parabolic_refinement_recovers_quadratic_minimum() {
        // g(s) = 0.1 + (s - 0.468)^2 sampled on a coarse grid.
        let n = 21;
        let s: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let rows: Vec<Vec<f64>> = s
            .iter()
            .map(|&si| vec![0.0, 0.1 + (si - 0.468) * (si - 0.468)])
            .collect();
        let sweep = SpectrumSweep {
            pump: s.clone(),
            s,
            relative_energies: rows,
            n_levels: 2,
        };
        let gap = minimal_gap(&sweep).unwrap();
        assert!(gap.refined);
        assert!((gap.s_at_min - 0.468).abs() < 1e-12);
        assert!((gap.gap - 0.1).abs() < 1e-12);
    }

    #[test]
    fn endpoint_minimum_is_flagged_unrefined() {
        // V = 1: the gap closes towards s = 1.
        let params = AnnealParams {
            impurity: 1.0,
            photon_cutoff: 1,
            ..AnnealParams::default()
        };
        let sweep = spectrum_sweep(&params, 2, 41).unwrap();
        let gap = minimal_gap(&sweep).unwrap();
        assert!(!gap.refined);
        assert!((gap.s_at_min - 1.0).abs() < 1e-12);
        assert!(gap.gap < 5e-3);
    }

    #[test]
    fn elimination_improves_with_detuning() {
        // With pump^2/Delta fixed, the eliminated model's low-lying gap
        // approaches the full model's as kappa, |Delta| grow.
        let gap_difference = |delta: f64| {
            let base = AnnealParams {
                detuning: delta,
                pump_final: (-delta).sqrt(),
                photon_cutoff: 2,
                ..AnnealParams::default()
            };
            let full = minimal_gap(&spectrum_sweep(&base, 2, 51).unwrap()).unwrap();
            let eliminated = AnnealParams {
                model: Model::Adiabatic,
                ..base
            };
            let ad = minimal_gap(&spectrum_sweep(&eliminated, 2, 51).unwrap()).unwrap();
            (full.gap - ad.gap).abs()
        };
        let near = gap_difference(-5.0);
        let far = gap_difference(-10.0);
        assert!(far < near, "gap mismatch grew with detuning: {near} -> {far}");
    }

    #[test]
    fn gap_grid_refinement_is_stable() {
        // Doubling the grid changes the refined minimal gap by well under 2%.
        let params = AnnealParams {
            photon_cutoff: 2,
            ..AnnealParams::default()
        };
        let coarse = minimal_gap(&spectrum_sweep(&params, 2, 101).unwrap()).unwrap();
        let fine = minimal_gap(&spectrum_sweep(&params, 2, 201).unwrap()).unwrap();
        assert!((coarse.gap - fine.gap).abs() / fine.gap < 0.02);
    }
}
